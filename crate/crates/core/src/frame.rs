//! Wire frame codec.
//!
//! Frame layout, most significant bit first:
//!
//! ```text
//!  0                   1                   2                   3
//!  0 1 2 3 4 5 6 7 8 9 0 1 2 3 4 5 6 7 8 9 0 1 2 3 4 5 6 7 8 9 0 1
//! +-+-+-+-+-------+-+-------------+-------------------------------+
//! |F|R|R|R| opcode|M| Payload len |    Extended payload length    |
//! |I|S|S|S|  (4)  |A|     (7)     |             (16/64)           |
//! |N|V|V|V|       |S|             |   (if payload len==126/127)   |
//! | |1|2|3|       |K|             |                               |
//! +-+-+-+-+-------+-+-------------+-------------------------------+
//! |  Masking-key, if MASK set     |          Payload Data         |
//! +-------------------------------+ - - - - - - - - - - - - - - - +
//! ```
//!
//! Extended lengths are big-endian. Masked payloads are XORed with the
//! 4-byte key cycled over the payload.

use thiserror::Error;

/// Declared payload lengths above this are refused by the default decoder.
pub const DEFAULT_MAX_PAYLOAD: u64 = 16 * 1024 * 1024;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProtocolError {
    #[error("reserved opcode 0x{0:X}")]
    ReservedOpcode(u8),
    #[error("nonzero RSV bits")]
    NonZeroRsv,
    #[error("control frame payload exceeds 125 bytes ({0})")]
    ControlFrameTooLong(u64),
    #[error("fragmented control frame")]
    FragmentedControlFrame,
    #[error("64-bit length has the high bit set")]
    LengthHighBitSet,
    #[error("declared payload length {declared} exceeds limit {max}")]
    PayloadTooLarge { declared: u64, max: u64 },
    #[error("continuation frame with no message open")]
    UnexpectedContinuation,
    #[error("new data frame while a message is open")]
    DataWhileMessageOpen,
    #[error("text message is not valid UTF-8")]
    InvalidUtf8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Opcode {
    Continuation = 0x0,
    Text = 0x1,
    Binary = 0x2,
    Close = 0x8,
    Ping = 0x9,
    Pong = 0xA,
}

impl Opcode {
    /// Values 0x3–0x7 and 0xB–0xF are reserved and rejected.
    pub fn from_bits(bits: u8) -> Result<Self, ProtocolError> {
        match bits {
            0x0 => Ok(Opcode::Continuation),
            0x1 => Ok(Opcode::Text),
            0x2 => Ok(Opcode::Binary),
            0x8 => Ok(Opcode::Close),
            0x9 => Ok(Opcode::Ping),
            0xA => Ok(Opcode::Pong),
            other => Err(ProtocolError::ReservedOpcode(other)),
        }
    }

    pub fn bits(self) -> u8 {
        self as u8
    }

    pub fn is_control(self) -> bool {
        self.bits() >= 0x8
    }
}

/// Close payload semantics: optional 16-bit code plus UTF-8 reason.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CloseInfo {
    pub code: Option<u16>,
    pub reason: String,
}

impl CloseInfo {
    pub fn new(code: u16, reason: &str) -> Self {
        CloseInfo {
            code: Some(code),
            reason: reason.to_string(),
        }
    }

    /// A code is only read when the payload carries at least 2 bytes; the
    /// rest is the reason, decoded lossily.
    pub fn from_payload(payload: &[u8]) -> Self {
        if payload.len() < 2 {
            return CloseInfo {
                code: None,
                reason: String::from_utf8_lossy(payload).into_owned(),
            };
        }
        CloseInfo {
            code: Some(u16::from_be_bytes([payload[0], payload[1]])),
            reason: String::from_utf8_lossy(&payload[2..]).into_owned(),
        }
    }

    pub fn to_payload(&self) -> Vec<u8> {
        match self.code {
            None => Vec::new(),
            Some(code) => {
                let mut out = code.to_be_bytes().to_vec();
                out.extend_from_slice(self.reason.as_bytes());
                out
            }
        }
    }
}

/// One wire frame. `payload` is always held unmasked; `masking_key` records
/// whether (and how) it is masked on the wire.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub fin: bool,
    pub rsv: [bool; 3],
    pub opcode: Opcode,
    pub masking_key: Option<[u8; 4]>,
    pub payload: Vec<u8>,
}

impl Frame {
    pub fn data(opcode: Opcode, fin: bool, payload: Vec<u8>) -> Self {
        Frame {
            fin,
            rsv: [false; 3],
            opcode,
            masking_key: None,
            payload,
        }
    }

    pub fn text(payload: &str) -> Self {
        Frame::data(Opcode::Text, true, payload.as_bytes().to_vec())
    }

    pub fn binary(payload: Vec<u8>) -> Self {
        Frame::data(Opcode::Binary, true, payload)
    }

    pub fn ping(payload: Vec<u8>) -> Self {
        Frame::data(Opcode::Ping, true, payload)
    }

    pub fn pong(payload: Vec<u8>) -> Self {
        Frame::data(Opcode::Pong, true, payload)
    }

    pub fn close(info: &CloseInfo) -> Self {
        Frame::data(Opcode::Close, true, info.to_payload())
    }

    pub fn masked(mut self, key: [u8; 4]) -> Self {
        self.masking_key = Some(key);
        self
    }

    /// Control frames must be final and carry at most 125 payload bytes;
    /// RSV bits must be clear.
    pub fn validate(&self) -> Result<(), ProtocolError> {
        if self.rsv != [false; 3] {
            return Err(ProtocolError::NonZeroRsv);
        }
        if self.opcode.is_control() {
            if self.payload.len() > 125 {
                return Err(ProtocolError::ControlFrameTooLong(self.payload.len() as u64));
            }
            if !self.fin {
                return Err(ProtocolError::FragmentedControlFrame);
            }
        }
        Ok(())
    }
}

/// XOR `payload` with `key` cycled over it. Involutive.
pub fn apply_mask(payload: &[u8], key: [u8; 4]) -> Vec<u8> {
    let mut out = payload.to_vec();
    mask_in_place(&mut out, key);
    out
}

fn mask_in_place(payload: &mut [u8], key: [u8; 4]) {
    for (i, byte) in payload.iter_mut().enumerate() {
        *byte ^= key[i % 4];
    }
}

/// Encode a frame using the smallest length representation: 7-bit up to 125,
/// marker 126 plus 16 bits up to 65535, marker 127 plus 64 bits beyond.
pub fn encode_frame(frame: &Frame) -> Result<Vec<u8>, ProtocolError> {
    frame.validate()?;
    let len = frame.payload.len() as u64;
    let mut out = Vec::with_capacity(frame.payload.len() + 14);

    let mut b0 = frame.opcode.bits();
    if frame.fin {
        b0 |= 0x80;
    }
    out.push(b0);

    let mask_bit = if frame.masking_key.is_some() { 0x80 } else { 0 };
    if len <= 125 {
        out.push(mask_bit | len as u8);
    } else if len <= 65535 {
        out.push(mask_bit | 126);
        out.extend_from_slice(&(len as u16).to_be_bytes());
    } else {
        out.push(mask_bit | 127);
        out.extend_from_slice(&len.to_be_bytes());
    }

    match frame.masking_key {
        Some(key) => {
            out.extend_from_slice(&key);
            let start = out.len();
            out.extend_from_slice(&frame.payload);
            mask_in_place(&mut out[start..], key);
        }
        None => out.extend_from_slice(&frame.payload),
    }
    Ok(out)
}

/// Decoder outcome: either a full frame plus the bytes it consumed, or a
/// request for more input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decoded {
    Complete { frame: Frame, consumed: usize },
    Incomplete,
}

/// Decode one frame from the front of `bytes` with the default payload cap.
pub fn decode_frame(bytes: &[u8]) -> Result<Decoded, ProtocolError> {
    decode_frame_with_limit(bytes, DEFAULT_MAX_PAYLOAD)
}

/// Streaming-safe single-frame decode. Violations are reported as soon as
/// the bytes revealing them are available; a valid prefix yields
/// [`Decoded::Incomplete`]. Masked payloads are returned unmasked with the
/// key recorded.
pub fn decode_frame_with_limit(bytes: &[u8], max_payload: u64) -> Result<Decoded, ProtocolError> {
    if bytes.is_empty() {
        return Ok(Decoded::Incomplete);
    }
    let b0 = bytes[0];
    if b0 & 0x70 != 0 {
        return Err(ProtocolError::NonZeroRsv);
    }
    let fin = b0 & 0x80 != 0;
    let opcode = Opcode::from_bits(b0 & 0x0F)?;

    if bytes.len() < 2 {
        return Ok(Decoded::Incomplete);
    }
    let b1 = bytes[1];
    let masked = b1 & 0x80 != 0;
    let len7 = b1 & 0x7F;

    let mut cursor = 2usize;
    let payload_len: u64 = match len7 {
        126 => {
            if opcode.is_control() {
                // Whatever the extended bytes say, it exceeds 125.
                return Err(ProtocolError::ControlFrameTooLong(126));
            }
            if bytes.len() < cursor + 2 {
                return Ok(Decoded::Incomplete);
            }
            let v = u16::from_be_bytes([bytes[cursor], bytes[cursor + 1]]) as u64;
            cursor += 2;
            v
        }
        127 => {
            if opcode.is_control() {
                return Err(ProtocolError::ControlFrameTooLong(127));
            }
            if bytes.len() < cursor + 8 {
                // The high bit is visible as soon as the first length byte is.
                if bytes.len() > cursor && bytes[cursor] & 0x80 != 0 {
                    return Err(ProtocolError::LengthHighBitSet);
                }
                return Ok(Decoded::Incomplete);
            }
            let mut raw = [0u8; 8];
            raw.copy_from_slice(&bytes[cursor..cursor + 8]);
            let v = u64::from_be_bytes(raw);
            if v & (1 << 63) != 0 {
                return Err(ProtocolError::LengthHighBitSet);
            }
            cursor += 8;
            v
        }
        n => n as u64,
    };

    if opcode.is_control() {
        if payload_len > 125 {
            return Err(ProtocolError::ControlFrameTooLong(payload_len));
        }
        if !fin {
            return Err(ProtocolError::FragmentedControlFrame);
        }
    }
    if payload_len > max_payload {
        return Err(ProtocolError::PayloadTooLarge {
            declared: payload_len,
            max: max_payload,
        });
    }

    let masking_key = if masked {
        if bytes.len() < cursor + 4 {
            return Ok(Decoded::Incomplete);
        }
        let mut key = [0u8; 4];
        key.copy_from_slice(&bytes[cursor..cursor + 4]);
        cursor += 4;
        Some(key)
    } else {
        None
    };

    let payload_len = payload_len as usize;
    if bytes.len() < cursor + payload_len {
        return Ok(Decoded::Incomplete);
    }
    let mut payload = bytes[cursor..cursor + payload_len].to_vec();
    if let Some(key) = masking_key {
        mask_in_place(&mut payload, key);
    }
    Ok(Decoded::Complete {
        frame: Frame {
            fin,
            rsv: [false; 3],
            opcode,
            masking_key,
            payload,
        },
        consumed: cursor + payload_len,
    })
}
