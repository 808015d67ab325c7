//! Origin identity and same-origin classification.
//!
//! An origin is the scheme/host/port triple; two origins are the same only
//! when all three components are equal. Hosts compare by exact byte
//! equality after lowercasing, so a subdomain is a different host, and
//! ws/wss are distinct schemes from http/https rather than aliases.

use std::collections::BTreeSet;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OriginParseError {
    #[error("origin has no scheme")]
    MissingScheme,
    #[error("unsupported origin scheme {0:?}")]
    UnsupportedScheme(String),
    #[error("origin has no host")]
    MissingHost,
    #[error("origin port must be a number in 1..=65535")]
    InvalidPort,
    #[error("malformed origin: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scheme {
    Http,
    Https,
    Ws,
    Wss,
}

impl Scheme {
    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "http" => Some(Scheme::Http),
            "https" => Some(Scheme::Https),
            "ws" => Some(Scheme::Ws),
            "wss" => Some(Scheme::Wss),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Http => "http",
            Scheme::Https => "https",
            Scheme::Ws => "ws",
            Scheme::Wss => "wss",
        }
    }

    pub fn default_port(self) -> u16 {
        match self {
            Scheme::Http | Scheme::Ws => 80,
            Scheme::Https | Scheme::Wss => 443,
        }
    }
}

/// Scheme + lowercase host + explicit port.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OriginTriple {
    pub scheme: Scheme,
    pub host: String,
    pub port: u16,
}

impl OriginTriple {
    pub fn new(scheme: Scheme, host: String, port: u16) -> Self {
        OriginTriple {
            scheme,
            host: host.to_ascii_lowercase(),
            port,
        }
    }
}

impl std::fmt::Display for OriginTriple {
    /// Serialized with the port always explicit, so parsing it back is the
    /// identity.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}://{}:{}", self.scheme.as_str(), self.host, self.port)
    }
}

/// A parsed Origin header value. The literal `"null"` (sent by browsers for
/// opaque origins) is distinguished and never matches anything.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Origin {
    Null,
    Tuple(OriginTriple),
}

impl Origin {
    pub fn triple(&self) -> Option<&OriginTriple> {
        match self {
            Origin::Null => None,
            Origin::Tuple(t) => Some(t),
        }
    }
}

impl std::fmt::Display for Origin {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Origin::Null => f.write_str("null"),
            Origin::Tuple(t) => t.fmt(f),
        }
    }
}

/// Parse `scheme://host[:port][/ignored-path...]` into an origin. The
/// scheme and host are lowercased, the scheme default port is applied when
/// none is present, and any path, query, or fragment is discarded.
pub fn parse_origin(text: &str) -> Result<Origin, OriginParseError> {
    let trimmed = text.trim();
    if trimmed == "null" {
        return Ok(Origin::Null);
    }
    if !trimmed.contains("://") {
        return Err(OriginParseError::MissingScheme);
    }
    let url = url::Url::parse(trimmed).map_err(|e| match e {
        url::ParseError::EmptyHost => OriginParseError::MissingHost,
        url::ParseError::InvalidPort => OriginParseError::InvalidPort,
        url::ParseError::RelativeUrlWithoutBase => OriginParseError::MissingScheme,
        other => OriginParseError::Malformed(other.to_string()),
    })?;
    let scheme = Scheme::parse(url.scheme())
        .ok_or_else(|| OriginParseError::UnsupportedScheme(url.scheme().to_string()))?;
    let host = url
        .host_str()
        .filter(|h| !h.is_empty())
        .ok_or(OriginParseError::MissingHost)?
        .to_ascii_lowercase();
    let port = url.port().unwrap_or_else(|| scheme.default_port());
    if port == 0 {
        return Err(OriginParseError::InvalidPort);
    }
    Ok(Origin::Tuple(OriginTriple::new(scheme, host, port)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SameOriginReason {
    Same,
    ProtocolDiffers,
    HostDiffers,
    PortDiffers,
}

impl std::fmt::Display for SameOriginReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SameOriginReason::Same => "same",
            SameOriginReason::ProtocolDiffers => "protocol-differs",
            SameOriginReason::HostDiffers => "host-differs",
            SameOriginReason::PortDiffers => "port-differs",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SameOriginVerdict {
    pub same: bool,
    pub reason: SameOriginReason,
}

/// Component-wise equality with the first differing component reported in
/// the order protocol, host, port.
pub fn same_origin(a: &OriginTriple, b: &OriginTriple) -> SameOriginVerdict {
    let reason = if a.scheme != b.scheme {
        SameOriginReason::ProtocolDiffers
    } else if a.host != b.host {
        SameOriginReason::HostDiffers
    } else if a.port != b.port {
        SameOriginReason::PortDiffers
    } else {
        SameOriginReason::Same
    };
    SameOriginVerdict {
        same: reason == SameOriginReason::Same,
        reason,
    }
}

/// Either accept every origin, or accept exactly the listed ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OriginPolicy {
    Wildcard,
    Allowlist(BTreeSet<OriginTriple>),
}

impl OriginPolicy {
    /// Configuration text: the single token `*`, or a comma-separated list
    /// of origin strings.
    pub fn parse(text: &str) -> Result<Self, OriginParseError> {
        if text.trim() == "*" {
            return Ok(OriginPolicy::Wildcard);
        }
        let mut allowed = BTreeSet::new();
        for part in text.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            match parse_origin(part)? {
                Origin::Tuple(t) => {
                    allowed.insert(t);
                }
                // A never-matching entry adds nothing to an allowlist.
                Origin::Null => {}
            }
        }
        Ok(OriginPolicy::Allowlist(allowed))
    }

    pub fn allowlist<I: IntoIterator<Item = OriginTriple>>(origins: I) -> Self {
        OriginPolicy::Allowlist(origins.into_iter().collect())
    }

    /// Wildcard accepts everything; an allowlist accepts an origin iff some
    /// entry is same-origin with it. `null` never matches an entry.
    pub fn is_allowed(&self, origin: &Origin) -> bool {
        match self {
            OriginPolicy::Wildcard => true,
            OriginPolicy::Allowlist(allowed) => match origin {
                Origin::Null => false,
                Origin::Tuple(t) => allowed.iter().any(|a| same_origin(a, t).same),
            },
        }
    }
}

/// Free-function form of [`OriginPolicy::is_allowed`].
pub fn is_allowed(policy: &OriginPolicy, origin: &Origin) -> bool {
    policy.is_allowed(origin)
}
