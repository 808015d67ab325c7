//! HTTP-to-WebSocket upgrade handshake: nonce generation, the
//! `Sec-WebSocket-Accept` computation, and building/parsing the
//! request/response pair.
//!
//! Parsing is lenient on whitespace and header-name case but strict on
//! structure: lines must end in CRLF and a bare LF is rejected.

use base64::engine::general_purpose::STANDARD as BASE64;
use base64::Engine as _;
use rand::RngCore;
use sha1::{Digest, Sha1};
use thiserror::Error;

/// GUID appended to the client key before hashing into the accept token.
///
/// This is the interoperable constant; [`compute_accept_with`] exists for
/// callers that need to substitute a different one.
pub const HANDSHAKE_GUID: &str = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HandshakeError {
    #[error("entropy source failed: {0}")]
    Entropy(String),
    #[error("nonce must decode to exactly 16 bytes, got {0}")]
    NonceLength(usize),
    #[error("nonce is not valid base64")]
    NonceEncoding,
    #[error("accept token must decode to exactly 20 bytes, got {0}")]
    AcceptLength(usize),
    #[error("accept token is not valid base64")]
    AcceptEncoding,
    #[error("key contains non-ASCII bytes")]
    NonAsciiKey,
    #[error("header {0} value contains CR or LF")]
    IllegalHeaderValue(String),
}

/// The 16-byte client nonce carried in `Sec-WebSocket-Key`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Nonce {
    raw: [u8; 16],
}

impl Nonce {
    pub fn from_raw(raw: [u8; 16]) -> Self {
        Nonce { raw }
    }

    /// Decode a base64 key back into a nonce. Fails unless the text decodes
    /// to exactly 16 bytes.
    pub fn from_encoded(encoded: &str) -> Result<Self, HandshakeError> {
        let bytes = BASE64
            .decode(encoded.trim())
            .map_err(|_| HandshakeError::NonceEncoding)?;
        let raw: [u8; 16] = bytes
            .as_slice()
            .try_into()
            .map_err(|_| HandshakeError::NonceLength(bytes.len()))?;
        Ok(Nonce { raw })
    }

    /// Draw a fresh nonce from the given entropy source.
    pub fn generate<R: RngCore + ?Sized>(rng: &mut R) -> Result<Self, HandshakeError> {
        let mut raw = [0u8; 16];
        rng.try_fill_bytes(&mut raw)
            .map_err(|e| HandshakeError::Entropy(e.to_string()))?;
        Ok(Nonce { raw })
    }

    pub fn raw(&self) -> &[u8; 16] {
        &self.raw
    }

    /// Base64 text form: always 24 characters ending in `==`.
    pub fn encoded(&self) -> String {
        BASE64.encode(self.raw)
    }
}

/// Server proof header value: base64 of a 20-byte SHA-1 digest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AcceptToken(String);

impl AcceptToken {
    /// Validate that `text` is base64 of exactly 20 bytes.
    pub fn parse(text: &str) -> Result<Self, HandshakeError> {
        let trimmed = text.trim();
        let bytes = BASE64
            .decode(trimmed)
            .map_err(|_| HandshakeError::AcceptEncoding)?;
        if bytes.len() != 20 {
            return Err(HandshakeError::AcceptLength(bytes.len()));
        }
        Ok(AcceptToken(trimmed.to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn digest(&self) -> [u8; 20] {
        let bytes = BASE64.decode(&self.0).expect("token validated at construction");
        bytes.as_slice().try_into().expect("token is 20 bytes")
    }
}

impl std::fmt::Display for AcceptToken {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// `base64(SHA-1(key ++ magic))` over the literal key text.
///
/// The key's base64 content is deliberately not checked; the formula operates
/// on whatever text was presented.
pub fn compute_accept_with(key: &str, magic: &str) -> Result<AcceptToken, HandshakeError> {
    if !key.is_ascii() {
        return Err(HandshakeError::NonAsciiKey);
    }
    let mut hasher = Sha1::new();
    hasher.update(key.as_bytes());
    hasher.update(magic.as_bytes());
    Ok(AcceptToken(BASE64.encode(hasher.finalize())))
}

/// [`compute_accept_with`] using [`HANDSHAKE_GUID`].
pub fn compute_accept(key: &str) -> Result<AcceptToken, HandshakeError> {
    compute_accept_with(key, HANDSHAKE_GUID)
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("{kind} at byte {offset}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub offset: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("message head not terminated by an empty line")]
    Truncated,
    #[error("bare LF without preceding CR")]
    BareLineFeed,
    #[error("malformed status line")]
    BadStatusLine,
    #[error("malformed request line")]
    BadRequestLine,
    #[error("header line has no colon")]
    BadHeaderLine,
    #[error("request method is not GET")]
    NotGet,
    #[error("missing required header {0}")]
    MissingHeader(&'static str),
    #[error("expected exactly one Sec-WebSocket-Key header")]
    DuplicateKey,
    #[error("Upgrade header does not name websocket")]
    UpgradeNotWebsocket,
    #[error("Connection header does not list upgrade")]
    ConnectionNotUpgrade,
    #[error("head is not valid UTF-8")]
    NotUtf8,
}

fn err(kind: ParseErrorKind, offset: usize) -> ParseError {
    ParseError { kind, offset }
}

/// Split a CRLF-terminated head into lines and report the byte offset where
/// each line starts. Rejects bare LF and requires the empty terminator line.
fn split_head(bytes: &[u8]) -> Result<(Vec<(usize, &str)>, usize), ParseError> {
    let mut lines = Vec::new();
    let mut start = 0usize;
    let mut i = 0usize;
    loop {
        if i >= bytes.len() {
            return Err(err(ParseErrorKind::Truncated, bytes.len()));
        }
        match bytes[i] {
            b'\n' => return Err(err(ParseErrorKind::BareLineFeed, i)),
            b'\r' => {
                if i + 1 >= bytes.len() {
                    return Err(err(ParseErrorKind::Truncated, bytes.len()));
                }
                if bytes[i + 1] != b'\n' {
                    return Err(err(ParseErrorKind::BareLineFeed, i + 1));
                }
                let line = std::str::from_utf8(&bytes[start..i])
                    .map_err(|e| err(ParseErrorKind::NotUtf8, start + e.valid_up_to()))?;
                if line.is_empty() && !lines.is_empty() {
                    return Ok((lines, i + 2));
                }
                if line.is_empty() {
                    return Err(err(ParseErrorKind::BadStatusLine, start));
                }
                lines.push((start, line));
                i += 2;
                start = i;
            }
            _ => i += 1,
        }
    }
}

fn parse_header_line(offset: usize, line: &str) -> Result<(String, String), ParseError> {
    let (name, value) = line
        .split_once(':')
        .ok_or_else(|| err(ParseErrorKind::BadHeaderLine, offset))?;
    Ok((name.trim().to_string(), value.trim().to_string()))
}

fn header_value<'a>(headers: &'a [(String, String)], name: &str) -> Option<&'a str> {
    headers
        .iter()
        .find(|(n, _)| n.eq_ignore_ascii_case(name))
        .map(|(_, v)| v.as_str())
}

/// Case-insensitive membership test over a comma-separated token list,
/// e.g. `Connection: keep-alive, Upgrade`.
pub fn token_list_contains(value: &str, token: &str) -> bool {
    value.split(',').any(|t| t.trim().eq_ignore_ascii_case(token))
}

/// Client side of the upgrade exchange.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpgradeRequest {
    pub method: String,
    pub path: String,
    pub host: String,
    /// Literal `Sec-WebSocket-Key` text (normally a [`Nonce`] in encoded form).
    pub key: String,
    pub version: String,
    pub origin: Option<String>,
    pub cookies: Vec<(String, String)>,
    pub extra_headers: Vec<(String, String)>,
}

impl UpgradeRequest {
    /// Wire form: HTTP/1.1 request head with CRLF line endings and a final
    /// empty line.
    pub fn serialize(&self) -> Vec<u8> {
        let mut out = String::new();
        out.push_str(&format!("{} {} HTTP/1.1\r\n", self.method, self.path));
        out.push_str(&format!("Host: {}\r\n", self.host));
        out.push_str("Upgrade: websocket\r\n");
        out.push_str("Connection: Upgrade\r\n");
        out.push_str(&format!("Sec-WebSocket-Key: {}\r\n", self.key));
        out.push_str(&format!("Sec-WebSocket-Version: {}\r\n", self.version));
        if let Some(origin) = &self.origin {
            out.push_str(&format!("Origin: {origin}\r\n"));
        }
        if !self.cookies.is_empty() {
            let joined = self
                .cookies
                .iter()
                .map(|(n, v)| format!("{n}={v}"))
                .collect::<Vec<_>>()
                .join("; ");
            out.push_str(&format!("Cookie: {joined}\r\n"));
        }
        for (name, value) in &self.extra_headers {
            out.push_str(&format!("{name}: {value}\r\n"));
        }
        out.push_str("\r\n");
        out.into_bytes()
    }

    /// Parse a request head. Enforces the upgrade invariants: GET method,
    /// `Upgrade: websocket`, a Connection list naming `upgrade`, and exactly
    /// one `Sec-WebSocket-Key`.
    pub fn parse(bytes: &[u8]) -> Result<Self, ParseError> {
        let (lines, _) = split_head(bytes)?;
        let (req_offset, request_line) = lines[0];
        let mut parts = request_line.split_whitespace();
        let method = parts
            .next()
            .ok_or_else(|| err(ParseErrorKind::BadRequestLine, req_offset))?;
        let path = parts
            .next()
            .ok_or_else(|| err(ParseErrorKind::BadRequestLine, req_offset))?;
        let http = parts
            .next()
            .ok_or_else(|| err(ParseErrorKind::BadRequestLine, req_offset))?;
        if parts.next().is_some() || !http.starts_with("HTTP/") {
            return Err(err(ParseErrorKind::BadRequestLine, req_offset));
        }
        if method != "GET" {
            return Err(err(ParseErrorKind::NotGet, req_offset));
        }

        let mut headers = Vec::new();
        for &(offset, line) in &lines[1..] {
            headers.push(parse_header_line(offset, line)?);
        }

        let upgrade = header_value(&headers, "upgrade")
            .ok_or_else(|| err(ParseErrorKind::MissingHeader("Upgrade"), 0))?;
        if !token_list_contains(upgrade, "websocket") {
            return Err(err(ParseErrorKind::UpgradeNotWebsocket, 0));
        }
        let connection = header_value(&headers, "connection")
            .ok_or_else(|| err(ParseErrorKind::MissingHeader("Connection"), 0))?;
        if !token_list_contains(connection, "upgrade") {
            return Err(err(ParseErrorKind::ConnectionNotUpgrade, 0));
        }
        let keys: Vec<&str> = headers
            .iter()
            .filter(|(n, _)| n.eq_ignore_ascii_case("sec-websocket-key"))
            .map(|(_, v)| v.as_str())
            .collect();
        let key = match keys.as_slice() {
            [one] => one.to_string(),
            [] => return Err(err(ParseErrorKind::MissingHeader("Sec-WebSocket-Key"), 0)),
            _ => return Err(err(ParseErrorKind::DuplicateKey, 0)),
        };
        let host = header_value(&headers, "host")
            .ok_or_else(|| err(ParseErrorKind::MissingHeader("Host"), 0))?
            .to_string();
        let version = header_value(&headers, "sec-websocket-version")
            .unwrap_or("")
            .to_string();
        let origin = header_value(&headers, "origin").map(str::to_string);

        let mut cookies = Vec::new();
        for (_, value) in headers
            .iter()
            .filter(|(n, _)| n.eq_ignore_ascii_case("cookie"))
        {
            for pair in value.split(';') {
                if let Some((n, v)) = pair.split_once('=') {
                    cookies.push((n.trim().to_string(), v.trim().to_string()));
                }
            }
        }

        const EXTRACTED: [&str; 7] = [
            "host",
            "upgrade",
            "connection",
            "sec-websocket-key",
            "sec-websocket-version",
            "origin",
            "cookie",
        ];
        let extra_headers = headers
            .into_iter()
            .filter(|(n, _)| !EXTRACTED.iter().any(|e| n.eq_ignore_ascii_case(e)))
            .collect();

        Ok(UpgradeRequest {
            method: method.to_string(),
            path: path.to_string(),
            host,
            key,
            version,
            origin,
            cookies,
            extra_headers,
        })
    }
}

/// Build the client request for a ws/wss URL. The Origin header appears iff
/// an origin is given, the Cookie header iff cookies are non-empty, and the
/// extra token header iff one is given.
pub fn build_upgrade_request(
    url: &crate::wsurl::WsUrl,
    origin: Option<&str>,
    cookies: &[(String, String)],
    token_header: Option<(&str, &str)>,
    nonce: &Nonce,
) -> Result<UpgradeRequest, HandshakeError> {
    let sanitize = |header: &str, value: &str| -> Result<(), HandshakeError> {
        if value.contains('\r') || value.contains('\n') {
            return Err(HandshakeError::IllegalHeaderValue(header.to_string()));
        }
        Ok(())
    };
    if let Some(o) = origin {
        sanitize("Origin", o)?;
    }
    for (n, v) in cookies {
        sanitize("Cookie", n)?;
        sanitize("Cookie", v)?;
    }
    let mut extra_headers = Vec::new();
    if let Some((name, value)) = token_header {
        sanitize(name, value)?;
        extra_headers.push((name.to_string(), value.to_string()));
    }
    Ok(UpgradeRequest {
        method: "GET".to_string(),
        path: url.path_and_query().to_string(),
        host: url.host_header(),
        key: nonce.encoded(),
        version: "13".to_string(),
        origin: origin.map(str::to_string),
        cookies: cookies.to_vec(),
        extra_headers,
    })
}

/// Server side of the upgrade exchange, as parsed off the wire.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpgradeResponse {
    pub status: u16,
    /// Ordered multimap preserving wire order and original name case.
    pub headers: Vec<(String, String)>,
}

impl UpgradeResponse {
    pub fn header(&self, name: &str) -> Option<&str> {
        header_value(&self.headers, name)
    }

    /// Raw `Sec-WebSocket-Accept` value, trimmed.
    pub fn accept_raw(&self) -> Option<&str> {
        self.header("sec-websocket-accept")
    }

    /// The accept token, when present and well-formed.
    pub fn accept(&self) -> Option<AcceptToken> {
        self.accept_raw().and_then(|v| AcceptToken::parse(v).ok())
    }

    /// Protocol-switch test: status 101 plus Upgrade/Connection headers
    /// naming websocket/upgrade (case-insensitive, token-list aware).
    pub fn is_switch(&self) -> bool {
        self.status == 101
            && self
                .header("upgrade")
                .is_some_and(|v| token_list_contains(v, "websocket"))
            && self
                .header("connection")
                .is_some_and(|v| token_list_contains(v, "upgrade"))
    }
}

/// Parse a response head. The body, if any, is not consumed.
pub fn parse_upgrade_response(bytes: &[u8]) -> Result<UpgradeResponse, ParseError> {
    let (lines, _) = split_head(bytes)?;
    let (status_offset, status_line) = lines[0];
    let mut parts = status_line.splitn(3, ' ');
    let http = parts.next().unwrap_or("");
    let code = parts.next().unwrap_or("");
    if !http.starts_with("HTTP/") {
        return Err(err(ParseErrorKind::BadStatusLine, status_offset));
    }
    let status: u16 = code
        .parse()
        .map_err(|_| err(ParseErrorKind::BadStatusLine, status_offset))?;

    let mut headers = Vec::new();
    for &(offset, line) in &lines[1..] {
        headers.push(parse_header_line(offset, line)?);
    }
    Ok(UpgradeResponse { status, headers })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictReason {
    Ok,
    BadStatus,
    MissingUpgradeHeader,
    MissingConnectionHeader,
    MissingAccept,
    AcceptMismatch,
}

impl std::fmt::Display for VerdictReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            VerdictReason::Ok => "ok",
            VerdictReason::BadStatus => "bad-status",
            VerdictReason::MissingUpgradeHeader => "missing-upgrade-header",
            VerdictReason::MissingConnectionHeader => "missing-connection-header",
            VerdictReason::MissingAccept => "missing-accept",
            VerdictReason::AcceptMismatch => "accept-mismatch",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HandshakeVerdict {
    pub accepted: bool,
    pub reason: VerdictReason,
}

impl HandshakeVerdict {
    fn ok() -> Self {
        HandshakeVerdict {
            accepted: true,
            reason: VerdictReason::Ok,
        }
    }

    fn fail(reason: VerdictReason) -> Self {
        HandshakeVerdict {
            accepted: false,
            reason,
        }
    }
}

/// Decide whether the server completed the handshake for `nonce`. The reason
/// pinpoints the first failing criterion in order: status, Upgrade header,
/// Connection header, accept presence, accept match.
pub fn validate_upgrade_response(resp: &UpgradeResponse, nonce: &Nonce) -> HandshakeVerdict {
    if resp.status != 101 {
        return HandshakeVerdict::fail(VerdictReason::BadStatus);
    }
    if !resp
        .header("upgrade")
        .is_some_and(|v| token_list_contains(v, "websocket"))
    {
        return HandshakeVerdict::fail(VerdictReason::MissingUpgradeHeader);
    }
    if !resp
        .header("connection")
        .is_some_and(|v| token_list_contains(v, "upgrade"))
    {
        return HandshakeVerdict::fail(VerdictReason::MissingConnectionHeader);
    }
    let Some(got) = resp.accept_raw() else {
        return HandshakeVerdict::fail(VerdictReason::MissingAccept);
    };
    let expected = compute_accept(&nonce.encoded()).expect("encoded nonce is ASCII");
    if got != expected.as_str() {
        return HandshakeVerdict::fail(VerdictReason::AcceptMismatch);
    }
    HandshakeVerdict::ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    // Frozen from an independent SHA-1 + base64 oracle run.
    const SAMPLE_KEY: &str = "dGhlIHNhbXBsZSBub25jZQ==";
    const SAMPLE_ACCEPT: &str = "s3pPLMBiTxaQ9kYGzzhZRbK+xOo=";
    const EMPTY_KEY_ACCEPT: &str = "Kfh9QIsMVZcl6xEPYxPHzW8SZ8w=";

    #[test]
    fn accept_of_sample_key() {
        assert_eq!(compute_accept(SAMPLE_KEY).unwrap().as_str(), SAMPLE_ACCEPT);
    }

    #[test]
    fn accept_of_empty_key() {
        assert_eq!(compute_accept("").unwrap().as_str(), EMPTY_KEY_ACCEPT);
    }

    #[test]
    fn accept_is_deterministic() {
        let a = compute_accept("AQIDBAUGBwgJCgsMDQ4PEA==").unwrap();
        let b = compute_accept("AQIDBAUGBwgJCgsMDQ4PEA==").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn accept_with_alternate_magic_differs() {
        // Oracle value for the same key hashed with a magic missing one char.
        let token =
            compute_accept_with(SAMPLE_KEY, "258EAF5-E914-47DA-95CA-C5AB0DC85B11").unwrap();
        assert_eq!(token.as_str(), "KN2CsFkOBHmr0YG6dJaSCImFV4Y=");
        assert_ne!(token.as_str(), SAMPLE_ACCEPT);
    }

    #[test]
    fn accept_rejects_non_ascii() {
        assert_eq!(
            compute_accept("clé").unwrap_err(),
            HandshakeError::NonAsciiKey
        );
    }

    #[test]
    fn accept_token_digest_is_20_bytes() {
        let token = compute_accept(SAMPLE_KEY).unwrap();
        assert_eq!(token.digest().len(), 20);
        assert_eq!(token.as_str().len(), 28);
    }

    #[test]
    fn sample_nonce_decodes_to_ascii_text() {
        let nonce = Nonce::from_encoded(SAMPLE_KEY).unwrap();
        assert_eq!(nonce.raw(), b"the sample nonce");
        assert_eq!(nonce.encoded(), SAMPLE_KEY);
    }

    #[test]
    fn generated_nonce_shape() {
        let mut rng = StdRng::seed_from_u64(7);
        let nonce = Nonce::generate(&mut rng).unwrap();
        let encoded = nonce.encoded();
        assert_eq!(encoded.len(), 24);
        assert!(encoded.ends_with("=="));
        let back = Nonce::from_encoded(&encoded).unwrap();
        assert_eq!(back, nonce);
    }

    #[test]
    fn nonces_from_distinct_streams_differ() {
        let mut a = StdRng::seed_from_u64(1);
        let mut b = StdRng::seed_from_u64(2);
        assert_ne!(
            Nonce::generate(&mut a).unwrap(),
            Nonce::generate(&mut b).unwrap()
        );
    }

    #[test]
    fn nonce_rejects_wrong_length() {
        assert_eq!(
            Nonce::from_encoded("c2hvcnQ=").unwrap_err(),
            HandshakeError::NonceLength(5)
        );
    }

    fn sample_url(raw: &str) -> crate::wsurl::WsUrl {
        crate::wsurl::WsUrl::parse(raw).unwrap()
    }

    #[test]
    fn build_minimal_request_has_no_optional_headers() {
        let nonce = Nonce::from_encoded(SAMPLE_KEY).unwrap();
        let req = build_upgrade_request(&sample_url("ws://h/p"), None, &[], None, &nonce).unwrap();
        let text = String::from_utf8(req.serialize()).unwrap();
        assert!(text.starts_with("GET /p HTTP/1.1\r\n"));
        assert!(text.contains("Host: h\r\n"));
        assert!(text.contains("Sec-WebSocket-Version: 13\r\n"));
        assert!(!text.contains("Origin:"));
        assert!(!text.contains("Cookie:"));
        assert!(text.ends_with("\r\n\r\n"));
    }

    #[test]
    fn build_with_origin_and_explicit_port() {
        let nonce = Nonce::from_encoded(SAMPLE_KEY).unwrap();
        let req = build_upgrade_request(
            &sample_url("wss://h:8443/chat"),
            Some("https://app.example"),
            &[],
            None,
            &nonce,
        )
        .unwrap();
        let parsed = UpgradeRequest::parse(&req.serialize()).unwrap();
        assert_eq!(parsed.host, "h:8443");
        assert_eq!(parsed.origin.as_deref(), Some("https://app.example"));
    }

    #[test]
    fn build_with_single_cookie() {
        let nonce = Nonce::from_encoded(SAMPLE_KEY).unwrap();
        let cookies = vec![("session".to_string(), "abc".to_string())];
        let req =
            build_upgrade_request(&sample_url("ws://h/"), None, &cookies, None, &nonce).unwrap();
        let text = String::from_utf8(req.serialize()).unwrap();
        assert!(text.contains("Cookie: session=abc\r\n"));
    }

    #[test]
    fn build_rejects_header_injection() {
        let nonce = Nonce::from_encoded(SAMPLE_KEY).unwrap();
        let res = build_upgrade_request(
            &sample_url("ws://h/"),
            Some("https://x\r\nX-Evil: 1"),
            &[],
            None,
            &nonce,
        );
        assert!(matches!(res, Err(HandshakeError::IllegalHeaderValue(_))));
    }

    #[test]
    fn parse_switch_response() {
        let bytes = b"HTTP/1.1 101 Switching Protocols\r\nUpgrade: websocket\r\nConnection: Upgrade\r\nSec-WebSocket-Accept: X\r\n\r\n";
        let resp = parse_upgrade_response(bytes).unwrap();
        assert_eq!(resp.status, 101);
        assert_eq!(resp.accept_raw(), Some("X"));
        // "X" is not a well-formed 20-byte token.
        assert!(resp.accept().is_none());
    }

    #[test]
    fn parse_forbidden_response() {
        let resp = parse_upgrade_response(b"HTTP/1.1 403 Forbidden\r\n\r\n").unwrap();
        assert_eq!(resp.status, 403);
        assert!(resp.accept_raw().is_none());
    }

    #[test]
    fn connection_token_list_is_split() {
        // Frozen from a standalone token-split oracle over the literal string.
        assert!(token_list_contains("keep-alive, Upgrade", "upgrade"));
        let bytes = b"HTTP/1.1 101 S\r\nupgrade: WebSocket\r\nconnection: keep-alive, Upgrade\r\nSec-WebSocket-Accept: s3pPLMBiTxaQ9kYGzzhZRbK+xOo=\r\n\r\n";
        let resp = parse_upgrade_response(bytes).unwrap();
        assert!(resp.is_switch());
    }

    #[test]
    fn parse_rejects_bare_lf() {
        let e = parse_upgrade_response(b"HTTP/1.1 101 S\nUpgrade: websocket\r\n\r\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::BareLineFeed);
        assert_eq!(e.offset, 14);
    }

    #[test]
    fn parse_reports_truncation_offset() {
        let bytes = b"HTTP/1.1 101 S\r\nUpgrade: websocket\r\n";
        let e = parse_upgrade_response(bytes).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Truncated);
        assert_eq!(e.offset, bytes.len());
    }

    #[test]
    fn parse_rejects_bad_status_line() {
        let e = parse_upgrade_response(b"NOPE\r\n\r\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::BadStatusLine);
    }

    #[test]
    fn request_parse_requires_single_key() {
        let bytes = b"GET / HTTP/1.1\r\nHost: h\r\nUpgrade: websocket\r\nConnection: Upgrade\r\nSec-WebSocket-Key: a\r\nSec-WebSocket-Key: b\r\n\r\n";
        let e = UpgradeRequest::parse(bytes).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::DuplicateKey);
    }

    #[test]
    fn request_parse_rejects_non_get() {
        let bytes = b"POST / HTTP/1.1\r\nHost: h\r\nUpgrade: websocket\r\nConnection: Upgrade\r\nSec-WebSocket-Key: a\r\n\r\n";
        let e = UpgradeRequest::parse(bytes).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::NotGet);
    }

    fn response_for(nonce: &Nonce) -> UpgradeResponse {
        let accept = compute_accept(&nonce.encoded()).unwrap();
        UpgradeResponse {
            status: 101,
            headers: vec![
                ("Upgrade".into(), "websocket".into()),
                ("Connection".into(), "Upgrade".into()),
                ("Sec-WebSocket-Accept".into(), accept.as_str().into()),
            ],
        }
    }

    #[test]
    fn validate_accepts_matching_response() {
        let nonce = Nonce::from_encoded(SAMPLE_KEY).unwrap();
        let verdict = validate_upgrade_response(&response_for(&nonce), &nonce);
        assert!(verdict.accepted);
        assert_eq!(verdict.reason, VerdictReason::Ok);
    }

    #[test]
    fn validate_flags_single_char_corruption() {
        let nonce = Nonce::from_encoded(SAMPLE_KEY).unwrap();
        let mut resp = response_for(&nonce);
        let accept = &mut resp.headers[2].1;
        let flipped = if accept.starts_with('s') { "t" } else { "s" };
        accept.replace_range(0..1, flipped);
        let verdict = validate_upgrade_response(&resp, &nonce);
        assert!(!verdict.accepted);
        assert_eq!(verdict.reason, VerdictReason::AcceptMismatch);
    }

    #[test]
    fn validate_reports_first_failing_criterion() {
        let nonce = Nonce::from_encoded(SAMPLE_KEY).unwrap();
        let mut resp = response_for(&nonce);
        resp.status = 200;
        // Status is checked before everything else.
        assert_eq!(
            validate_upgrade_response(&resp, &nonce).reason,
            VerdictReason::BadStatus
        );

        let mut resp = response_for(&nonce);
        resp.headers.remove(0);
        assert_eq!(
            validate_upgrade_response(&resp, &nonce).reason,
            VerdictReason::MissingUpgradeHeader
        );

        let mut resp = response_for(&nonce);
        resp.headers.remove(1);
        assert_eq!(
            validate_upgrade_response(&resp, &nonce).reason,
            VerdictReason::MissingConnectionHeader
        );

        let mut resp = response_for(&nonce);
        resp.headers.pop();
        assert_eq!(
            validate_upgrade_response(&resp, &nonce).reason,
            VerdictReason::MissingAccept
        );
    }

    #[test]
    fn accept_value_is_trimmed_before_compare() {
        let nonce = Nonce::from_encoded(SAMPLE_KEY).unwrap();
        let bytes = format!(
            "HTTP/1.1 101 S\r\nUpgrade: websocket\r\nConnection: Upgrade\r\nSec-WebSocket-Accept:   {}  \r\n\r\n",
            SAMPLE_ACCEPT
        );
        let resp = parse_upgrade_response(bytes.as_bytes()).unwrap();
        assert!(validate_upgrade_response(&resp, &nonce).accepted);
    }
}
