//! ws/wss target URLs.

use thiserror::Error;

use crate::origin::{OriginTriple, Scheme};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum UrlError {
    #[error("URL scheme must be ws or wss, got {0:?}")]
    NotWebSocket(String),
    #[error("URL has no host")]
    MissingHost,
    #[error("port must be in 1..=65535")]
    InvalidPort,
    #[error("malformed URL: {0}")]
    Malformed(String),
}

/// A parsed WebSocket endpoint URL.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WsUrl {
    raw: String,
    tls: bool,
    host: String,
    port: u16,
    /// Explicitly present in the input, as opposed to a scheme default.
    explicit_port: bool,
    path_and_query: String,
}

impl WsUrl {
    pub fn parse(raw: &str) -> Result<Self, UrlError> {
        let url = url::Url::parse(raw).map_err(|e| UrlError::Malformed(e.to_string()))?;
        let tls = match url.scheme() {
            "ws" => false,
            "wss" => true,
            other => return Err(UrlError::NotWebSocket(other.to_string())),
        };
        let host = url
            .host_str()
            .filter(|h| !h.is_empty())
            .ok_or(UrlError::MissingHost)?
            .to_ascii_lowercase();
        let explicit_port = url.port().is_some();
        let port = url.port_or_known_default().ok_or(UrlError::InvalidPort)?;
        if port == 0 {
            return Err(UrlError::InvalidPort);
        }
        let mut path_and_query = url.path().to_string();
        if let Some(q) = url.query() {
            path_and_query.push('?');
            path_and_query.push_str(q);
        }
        Ok(WsUrl {
            raw: raw.to_string(),
            tls,
            host,
            port,
            explicit_port,
            path_and_query,
        })
    }

    pub fn as_str(&self) -> &str {
        &self.raw
    }

    pub fn is_tls(&self) -> bool {
        self.tls
    }

    pub fn host(&self) -> &str {
        &self.host
    }

    pub fn port(&self) -> u16 {
        self.port
    }

    /// Request target: path plus query, `/` when the URL has none.
    pub fn path_and_query(&self) -> &str {
        &self.path_and_query
    }

    /// Host header value: the port appears only when it was explicit in the
    /// URL and differs from the scheme default.
    pub fn host_header(&self) -> String {
        if self.explicit_port {
            format!("{}:{}", self.host, self.port)
        } else {
            self.host.clone()
        }
    }

    /// The origin a same-deployment page would carry: ws maps to http and
    /// wss to https, host and port unchanged.
    pub fn page_origin(&self) -> OriginTriple {
        let scheme = if self.tls { Scheme::Https } else { Scheme::Http };
        OriginTriple::new(scheme, self.host.clone(), self.port)
    }
}

impl std::fmt::Display for WsUrl {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.raw)
    }
}
