//! SPARQL protocol endpoint over a frozen store.
//!
//! Routes: `GET|POST /sparql`, `GET|HEAD /graph` and `GET /health`.
//! There is no authentication and no TLS, so the default bind address is
//! loopback.
//!
//! [`Endpoint::handle`] is a pure function from [`Request`] to [`Response`];
//! [`Endpoint::start`] puts it behind a tiny_http server with a fixed pool of
//! worker threads.

use std::io::Read;
use std::net::SocketAddr;
use std::sync::Arc;
use std::thread::JoinHandle;
use std::time::{Duration, Instant};

use roc_core::sparql::{evaluate_with_deadline, parse_query, serialize_results, QueryError, ResultFormat};
use roc_core::store::Store;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq)]
pub struct EndpointConfig {
    pub bind: String,
    pub max_query_bytes: usize,
    pub default_format: ResultFormat,
    pub request_timeout: Duration,
    pub workers: usize,
}

impl Default for EndpointConfig {
    fn default() -> Self {
        EndpointConfig {
            bind: "127.0.0.1:3030".into(),
            max_query_bytes: 64 * 1024,
            default_format: ResultFormat::Json,
            request_timeout: Duration::from_secs(10),
            workers: 8,
        }
    }
}

impl EndpointConfig {
    pub fn validate(&self) -> Result<(), EndpointError> {
        if self.max_query_bytes == 0 {
            return Err(EndpointError::Config("max_query_bytes must be positive".into()));
        }
        if self.request_timeout.is_zero() {
            return Err(EndpointError::Config("request_timeout must be positive".into()));
        }
        if self.workers == 0 {
            return Err(EndpointError::Config("at least one worker is required".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum EndpointError {
    #[error("invalid endpoint configuration: {0}")]
    Config(String),
    #[error("cannot listen on {addr}: {message}")]
    Bind { addr: String, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Get,
    Head,
    Post,
    Other,
}

#[derive(Debug, Clone)]
pub struct Request<'a> {
    pub method: Method,
    /// Path plus optional query string, as sent on the request line.
    pub url: &'a str,
    pub content_type: Option<&'a str>,
    pub accept: Option<&'a str>,
    pub body: &'a [u8],
}

impl<'a> Request<'a> {
    pub fn get(url: &'a str) -> Self {
        Request { method: Method::Get, url, content_type: None, accept: None, body: &[] }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Response {
    pub status: u16,
    pub content_type: &'static str,
    pub headers: Vec<(&'static str, String)>,
    pub body: Vec<u8>,
}

impl Response {
    fn text(status: u16, body: impl Into<String>) -> Self {
        let mut body = body.into();
        if !body.ends_with('\n') {
            body.push('\n');
        }
        Response { status, content_type: "text/plain; charset=utf-8", headers: Vec::new(), body: body.into_bytes() }
    }

    fn method_not_allowed(allow: &str) -> Self {
        let mut r = Response::text(405, "method not allowed");
        r.headers.push(("Allow", allow.to_owned()));
        r
    }
}

/// Picks the result format from an Accept header. Unknown media types fall
/// back to the default rather than failing with 406.
pub fn negotiate(accept: Option<&str>, default: ResultFormat) -> ResultFormat {
    let Some(accept) = accept else { return default };
    for item in accept.split(',') {
        let media = item.split(';').next().unwrap_or("").trim().to_ascii_lowercase();
        match media.as_str() {
            "text/csv" => return ResultFormat::Csv,
            "application/sparql-results+json" | "application/json" => return ResultFormat::Json,
            "*/*" => return default,
            _ => {}
        }
    }
    default
}

fn media_type(content_type: Option<&str>) -> String {
    content_type.and_then(|c| c.split(';').next()).unwrap_or("").trim().to_ascii_lowercase()
}

fn form_field(encoded: &[u8], name: &str) -> Option<String> {
    url::form_urlencoded::parse(encoded).find(|(k, _)| k == name).map(|(_, v)| v.into_owned())
}

pub struct Endpoint {
    store: Arc<Store>,
    dump: Arc<str>,
    config: EndpointConfig,
}

impl Endpoint {
    pub fn new(store: Arc<Store>, config: EndpointConfig) -> Result<Self, EndpointError> {
        config.validate()?;
        let dump = store.dump().into();
        Ok(Endpoint { store, dump, config })
    }

    pub fn config(&self) -> &EndpointConfig {
        &self.config
    }

    pub fn store(&self) -> &Store {
        &self.store
    }

    pub fn handle(&self, req: &Request<'_>) -> Response {
        let path = req.url.split('?').next().unwrap_or("");
        match path {
            "/sparql" => match req.method {
                Method::Get | Method::Post => self.handle_query(req),
                _ => Response::method_not_allowed("GET, POST"),
            },
            "/graph" => match req.method {
                Method::Get => Response {
                    status: 200,
                    content_type: "application/n-triples",
                    headers: Vec::new(),
                    body: self.dump.as_bytes().to_vec(),
                },
                Method::Head => Response {
                    status: 200,
                    content_type: "application/n-triples",
                    headers: Vec::new(),
                    body: Vec::new(),
                },
                _ => Response::method_not_allowed("GET, HEAD"),
            },
            "/health" => match req.method {
                Method::Get | Method::Head => Response::text(200, "ok"),
                _ => Response::method_not_allowed("GET, HEAD"),
            },
            _ => Response::text(404, format!("no route for {path}; try /sparql, /graph or /health")),
        }
    }

    fn query_text(&self, req: &Request<'_>) -> Result<String, Response> {
        let limit = self.config.max_query_bytes;
        let too_large = || Response::text(413, format!("query exceeds the {limit}-byte limit"));
        let text = match req.method {
            Method::Get => {
                let qs = req.url.split_once('?').map_or("", |(_, q)| q);
                if qs.len() > limit * 3 + 16 {
                    return Err(too_large());
                }
                form_field(qs.as_bytes(), "query").ok_or_else(|| Response::text(400, "missing 'query' parameter"))?
            }
            _ => {
                let media = media_type(req.content_type);
                let text = match media.as_str() {
                    "application/sparql-query" => {
                        if req.body.len() > limit {
                            return Err(too_large());
                        }
                        String::from_utf8(req.body.to_vec()).map_err(|_| Response::text(400, "query body is not UTF-8"))?
                    }
                    "application/x-www-form-urlencoded" => {
                        if req.body.len() > limit * 3 + 16 {
                            return Err(too_large());
                        }
                        form_field(req.body, "query").ok_or_else(|| Response::text(400, "missing 'query' form field"))?
                    }
                    other => {
                        return Err(Response::text(
                            415,
                            format!(
                                "unsupported content type {other:?}; use application/sparql-query or application/x-www-form-urlencoded"
                            ),
                        ))
                    }
                };
                text
            }
        };
        if text.len() > limit {
            return Err(too_large());
        }
        Ok(text)
    }

    fn handle_query(&self, req: &Request<'_>) -> Response {
        let text = match self.query_text(req) {
            Ok(t) => t,
            Err(r) => return r,
        };
        let query = match parse_query(&text) {
            Ok(q) => q,
            Err(e) => return Response::text(400, e.to_string()),
        };
        let deadline = Instant::now() + self.config.request_timeout;
        match evaluate_with_deadline(&query, &self.store, Some(deadline)) {
            Ok(table) => {
                let format = negotiate(req.accept, self.config.default_format);
                Response {
                    status: 200,
                    content_type: format.content_type(),
                    headers: Vec::new(),
                    body: serialize_results(&table, format).into_bytes(),
                }
            }
            Err(QueryError::Timeout) => {
                let mut r = Response::text(503, "query timed out; retry later or simplify the query");
                r.headers.push(("Retry-After", "5".into()));
                r
            }
            Err(e) => Response::text(400, e.to_string()),
        }
    }

    /// Binds the configured address and starts the worker pool.
    pub fn start(self) -> Result<Server, EndpointError> {
        let bind_err = |message: String| EndpointError::Bind { addr: self.config.bind.clone(), message };
        let http = tiny_http::Server::http(&self.config.bind).map_err(|e| bind_err(e.to_string()))?;
        let addr = http.server_addr().to_ip().ok_or_else(|| bind_err("not an IP listener".into()))?;
        let http = Arc::new(http);
        let endpoint = Arc::new(self);
        let workers = (0..endpoint.config.workers)
            .map(|_| {
                let http = Arc::clone(&http);
                let endpoint = Arc::clone(&endpoint);
                std::thread::spawn(move || {
                    for request in http.incoming_requests() {
                        endpoint.serve_one(request);
                    }
                })
            })
            .collect();
        Ok(Server { http, workers, addr })
    }

    fn serve_one(&self, mut request: tiny_http::Request) {
        let header = |name: &str| {
            request
                .headers()
                .iter()
                .find(|h| h.field.as_str().as_str().eq_ignore_ascii_case(name))
                .map(|h| h.value.as_str().to_owned())
        };
        let content_type = header("Content-Type");
        let accept = header("Accept");
        let method = match request.method() {
            tiny_http::Method::Get => Method::Get,
            tiny_http::Method::Head => Method::Head,
            tiny_http::Method::Post => Method::Post,
            _ => Method::Other,
        };
        // Read one byte past the limit (form encoding can triple the size) so
        // oversize bodies are detected without buffering them whole.
        let cap = self.config.max_query_bytes.saturating_mul(3).saturating_add(17) as u64;
        let mut body = Vec::new();
        if request.as_reader().take(cap).read_to_end(&mut body).is_err() {
            let _ = request.respond(tiny_http::Response::from_string("unreadable body").with_status_code(400));
            return;
        }
        let url = request.url().to_owned();
        let response = self.handle(&Request {
            method,
            url: &url,
            content_type: content_type.as_deref(),
            accept: accept.as_deref(),
            body: &body,
        });
        let mut out = tiny_http::Response::from_data(response.body).with_status_code(response.status);
        let ct = tiny_http::Header::from_bytes("Content-Type", response.content_type).expect("static header is valid");
        out.add_header(ct);
        for (name, value) in response.headers {
            if let Ok(h) = tiny_http::Header::from_bytes(name, value.as_bytes()) {
                out.add_header(h);
            }
        }
        // A client that hung up is not our problem.
        let _ = request.respond(out);
    }
}

/// A running endpoint.
pub struct Server {
    http: Arc<tiny_http::Server>,
    workers: Vec<JoinHandle<()>>,
    addr: SocketAddr,
}

impl Server {
    /// The bound address; useful with port 0.
    pub fn addr(&self) -> SocketAddr {
        self.addr
    }

    /// Blocks until the server is shut down from another thread.
    pub fn wait(self) {
        for w in self.workers {
            let _ = w.join();
        }
    }

    pub fn shutdown(self) {
        for _ in &self.workers {
            self.http.unblock();
        }
        self.wait();
    }
}
