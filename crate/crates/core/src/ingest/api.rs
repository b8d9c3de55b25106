//! Statistics API client with an on-disk response cache.
//!
//! Requests go through a [`Transport`] so tests can count or refuse network
//! calls. Successful responses are stored verbatim under a key derived from
//! (dataset code, year, sorted geo list), alongside a small JSON sidecar.
//! Both files are written to a temporary file in the cache directory and
//! renamed into place.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::jsonstat::decode_jsonstat;
use super::tsv::RawObservation;
use crate::error::IngestError;

pub const DEFAULT_BASE_URL: &str =
    "https://ec.europa.eu/eurostat/api/dissemination/statistics/1.0/data";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HttpResponse {
    pub status: u16,
    pub body: Vec<u8>,
}

/// Blocking HTTP GET.
pub trait Transport: Send + Sync {
    fn get(&self, url: &str) -> Result<HttpResponse, String>;
}

/// A transport that refuses every request.
#[derive(Debug, Default, Clone, Copy)]
pub struct OfflineTransport;

impl Transport for OfflineTransport {
    fn get(&self, url: &str) -> Result<HttpResponse, String> {
        Err(format!("network disabled (request to {url})"))
    }
}

#[cfg(feature = "http")]
pub struct HttpTransport {
    client: reqwest::blocking::Client,
}

#[cfg(feature = "http")]
impl HttpTransport {
    pub fn new() -> Result<Self, String> {
        let client = reqwest::blocking::Client::builder()
            .timeout(std::time::Duration::from_secs(60))
            .user_agent(concat!("gcmeasure/", env!("CARGO_PKG_VERSION")))
            .build()
            .map_err(|e| e.to_string())?;
        Ok(HttpTransport { client })
    }
}

#[cfg(feature = "http")]
impl Transport for HttpTransport {
    fn get(&self, url: &str) -> Result<HttpResponse, String> {
        let resp = self.client.get(url).send().map_err(|e| e.to_string())?;
        let status = resp.status().as_u16();
        let body = resp.bytes().map_err(|e| e.to_string())?.to_vec();
        Ok(HttpResponse { status, body })
    }
}

/// Where to fetch from and where to cache.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiSource {
    pub base_url: String,
    pub cache_dir: Option<PathBuf>,
}

impl ApiSource {
    pub fn new(
        base_url: impl Into<String>,
        cache_dir: Option<PathBuf>,
    ) -> Result<Self, IngestError> {
        let base_url = base_url.into();
        let scheme_ok = base_url
            .split_once("://")
            .is_some_and(|(scheme, rest)| matches!(scheme, "http" | "https") && !rest.is_empty());
        if !scheme_ok {
            return Err(IngestError::format(
                0,
                None,
                format!("API base URL `{base_url}` is not an absolute http(s) URL"),
            ));
        }
        Ok(ApiSource {
            base_url: base_url.trim_end_matches('/').to_owned(),
            cache_dir,
        })
    }

    /// Request URL for one dataset. Geo order follows `geos` sorted.
    pub fn request_url(&self, dataset_code: &str, year: i32, geos: &[String]) -> String {
        let mut url = format!(
            "{}/{}?format=JSON&lang=EN&time={}",
            self.base_url, dataset_code, year
        );
        for g in sorted(geos) {
            url.push_str("&geo=");
            url.push_str(&g);
        }
        url
    }
}

fn sorted(geos: &[String]) -> Vec<String> {
    let mut g = geos.to_vec();
    g.sort();
    g.dedup();
    g
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub dataset_code: String,
    pub year: i32,
    pub geos: Vec<String>,
}

impl CacheKey {
    pub fn new(dataset_code: &str, year: i32, geos: &[String]) -> Self {
        CacheKey {
            dataset_code: dataset_code.to_owned(),
            year,
            geos: sorted(geos),
        }
    }

    fn stem(&self) -> String {
        let safe = |s: &str| -> String {
            s.chars()
                .map(|c| {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        c
                    } else {
                        '-'
                    }
                })
                .collect()
        };
        let geos: Vec<String> = self.geos.iter().map(|g| safe(g)).collect();
        format!(
            "{}__{}__{}",
            safe(&self.dataset_code),
            self.year,
            geos.join("-")
        )
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CacheMeta {
    key: CacheKey,
    url: String,
    fetched_at_unix: u64,
}

/// Response cache rooted at a directory.
#[derive(Debug, Clone)]
pub struct ResponseCache {
    dir: PathBuf,
}

impl ResponseCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        ResponseCache { dir: dir.into() }
    }

    pub fn body_path(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(format!("{}.json", key.stem()))
    }

    pub fn meta_path(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(format!("{}.meta.json", key.stem()))
    }

    pub fn load(&self, key: &CacheKey) -> Result<Option<Vec<u8>>, IngestError> {
        match std::fs::read(self.body_path(key)) {
            Ok(b) => Ok(Some(b)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    pub fn store(&self, key: &CacheKey, url: &str, body: &[u8]) -> Result<(), IngestError> {
        std::fs::create_dir_all(&self.dir)?;
        let meta = CacheMeta {
            key: key.clone(),
            url: url.to_owned(),
            fetched_at_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        };
        let meta = serde_json::to_vec_pretty(&meta).expect("metadata serializes");
        write_atomic(&self.dir, &self.meta_path(key), &meta)?;
        write_atomic(&self.dir, &self.body_path(key), body)
    }
}

fn write_atomic(dir: &Path, dest: &Path, bytes: &[u8]) -> Result<(), IngestError> {
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(dest).map_err(|e| IngestError::Cache(e.error))?;
    Ok(())
}

/// Fetches one dataset for one year and a set of geos, serving from the
/// cache when a response for the same key is stored.
pub fn fetch_dataset(
    source: &ApiSource,
    transport: &dyn Transport,
    dataset_code: &str,
    year: i32,
    geos: &[String],
) -> Result<Vec<RawObservation>, IngestError> {
    let key = CacheKey::new(dataset_code, year, geos);
    let cache = source.cache_dir.as_ref().map(ResponseCache::new);
    if let Some(cache) = &cache {
        if let Some(body) = cache.load(&key)? {
            return decode_jsonstat(&body, dataset_code);
        }
    }

    let url = source.request_url(dataset_code, year, geos);
    let resp = transport
        .get(&url)
        .map_err(|message| IngestError::Network {
            code: dataset_code.to_owned(),
            message,
        })?;
    if !(200..300).contains(&resp.status) {
        return Err(IngestError::Upstream {
            code: dataset_code.to_owned(),
            status: resp.status,
        });
    }
    let observations = decode_jsonstat(&resp.body, dataset_code)?;
    if let Some(cache) = &cache {
        cache.store(&key, &url, &resp.body)?;
    }
    Ok(observations)
}
