//! Transport-agnostic WebSocket protocol core.
//!
//! Everything in this crate is sans-io: bytes in, values out. The handshake
//! module covers the HTTP upgrade exchange, the frame module the wire codec,
//! the assemble module fragment reassembly, and the origin module the
//! scheme/host/port same-origin rules used for handshake policy decisions.

pub mod assemble;
pub mod frame;
pub mod handshake;
pub mod origin;
pub mod wsurl;

pub use assemble::{AssembledStream, Event, Message, MessageAssembler, MessageKind};
pub use frame::{apply_mask, decode_frame, encode_frame, CloseInfo, Decoded, Frame, Opcode};
pub use handshake::{
    build_upgrade_request, compute_accept, compute_accept_with, parse_upgrade_response,
    validate_upgrade_response, AcceptToken, HandshakeVerdict, Nonce, UpgradeRequest,
    UpgradeResponse, HANDSHAKE_GUID,
};
pub use origin::{parse_origin, same_origin, Origin, OriginPolicy, OriginTriple, Scheme};
pub use wsurl::WsUrl;
