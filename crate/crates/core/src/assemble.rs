//! Reassembly of wire frames into messages.
//!
//! A message starts with a text or binary frame and is completed by the
//! first `fin` frame of its fragment chain; continuation frames extend the
//! open message. Control frames may interleave anywhere and never join a
//! chain. Text is UTF-8 validated only once the message completes, since
//! fragment boundaries may split multi-byte sequences.

use crate::frame::{CloseInfo, Frame, Opcode, ProtocolError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MessageKind {
    Text,
    Binary,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Message {
    pub kind: MessageKind,
    pub data: Vec<u8>,
}

impl Message {
    pub fn text(text: &str) -> Self {
        Message {
            kind: MessageKind::Text,
            data: text.as_bytes().to_vec(),
        }
    }

    pub fn binary(data: Vec<u8>) -> Self {
        Message {
            kind: MessageKind::Binary,
            data,
        }
    }

    /// Text view; `None` for binary messages. Text messages are valid UTF-8
    /// by construction.
    pub fn as_text(&self) -> Option<&str> {
        match self.kind {
            MessageKind::Text => std::str::from_utf8(&self.data).ok(),
            MessageKind::Binary => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Event {
    Message(Message),
    Ping(Vec<u8>),
    Pong(Vec<u8>),
    Close(CloseInfo),
}

/// Incremental per-direction assembler. Feed frames in wire order; frames
/// after a close are ignored.
#[derive(Debug, Default)]
pub struct MessageAssembler {
    open: Option<(MessageKind, Vec<u8>)>,
    closed: bool,
}

impl MessageAssembler {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn push(&mut self, frame: Frame) -> Result<Option<Event>, ProtocolError> {
        if self.closed {
            return Ok(None);
        }
        match frame.opcode {
            Opcode::Ping => Ok(Some(Event::Ping(frame.payload))),
            Opcode::Pong => Ok(Some(Event::Pong(frame.payload))),
            Opcode::Close => {
                self.closed = true;
                Ok(Some(Event::Close(CloseInfo::from_payload(&frame.payload))))
            }
            Opcode::Text | Opcode::Binary => {
                if self.open.is_some() {
                    return Err(ProtocolError::DataWhileMessageOpen);
                }
                let kind = if frame.opcode == Opcode::Text {
                    MessageKind::Text
                } else {
                    MessageKind::Binary
                };
                if frame.fin {
                    return self.complete(kind, frame.payload).map(Some);
                }
                self.open = Some((kind, frame.payload));
                Ok(None)
            }
            Opcode::Continuation => {
                let Some((kind, mut data)) = self.open.take() else {
                    return Err(ProtocolError::UnexpectedContinuation);
                };
                data.extend_from_slice(&frame.payload);
                if frame.fin {
                    return self.complete(kind, data).map(Some);
                }
                self.open = Some((kind, data));
                Ok(None)
            }
        }
    }

    fn complete(&mut self, kind: MessageKind, data: Vec<u8>) -> Result<Event, ProtocolError> {
        if kind == MessageKind::Text && std::str::from_utf8(&data).is_err() {
            return Err(ProtocolError::InvalidUtf8);
        }
        Ok(Event::Message(Message { kind, data }))
    }
}

/// What a finite frame stream assembled to.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AssembledStream {
    pub messages: Vec<Message>,
    pub close: Option<CloseInfo>,
    pub pings: Vec<Vec<u8>>,
}

/// Run a whole frame sequence through an assembler.
pub fn assemble_messages<I>(frames: I) -> Result<AssembledStream, ProtocolError>
where
    I: IntoIterator<Item = Frame>,
{
    let mut assembler = MessageAssembler::new();
    let mut out = AssembledStream::default();
    for frame in frames {
        match assembler.push(frame)? {
            Some(Event::Message(m)) => out.messages.push(m),
            Some(Event::Ping(p)) => out.pings.push(p),
            Some(Event::Close(c)) => out.close = Some(c),
            Some(Event::Pong(_)) | None => {}
        }
    }
    Ok(out)
}
