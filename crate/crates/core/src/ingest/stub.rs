//! An in-process stand-in for the statistics API.
//!
//! [`StubTransport`] answers `GET <base>/<code>?...&time=<year>&geo=..` with a
//! JSON-stat body built from an [`ObservationMatrix`], and records every URL
//! it was asked for.

use std::collections::{BTreeMap, HashSet};
use std::sync::Mutex;
use std::time::Duration;

use super::api::{HttpResponse, Transport};
use super::jsonstat::encode_jsonstat;
use super::tsv::RawObservation;
use crate::model::ObservationMatrix;

#[derive(Debug, Default)]
pub struct StubTransport {
    data: Option<ObservationMatrix>,
    statuses: BTreeMap<String, u16>,
    flags: BTreeMap<(String, String), String>,
    delay: Option<Duration>,
    requests: Mutex<Vec<String>>,
}

impl StubTransport {
    pub fn new(data: ObservationMatrix) -> Self {
        StubTransport {
            data: Some(data),
            ..Default::default()
        }
    }

    /// Answer requests for `code` with a bare status and empty body.
    pub fn with_status(mut self, code: &str, status: u16) -> Self {
        self.statuses.insert(code.to_owned(), status);
        self
    }

    /// Attach flag letters to one `(code, geo)` value.
    pub fn with_flags(mut self, code: &str, geo: &str, flags: &str) -> Self {
        self.flags
            .insert((code.to_owned(), geo.to_owned()), flags.to_owned());
        self
    }

    /// Sleep this long before answering.
    pub fn with_delay(mut self, delay: Duration) -> Self {
        self.delay = Some(delay);
        self
    }

    pub fn requests(&self) -> Vec<String> {
        self.requests.lock().expect("request log").clone()
    }

    pub fn request_count(&self) -> usize {
        self.requests.lock().expect("request log").len()
    }
}

fn parse_url(url: &str) -> Option<(String, i32, HashSet<String>)> {
    let (path, query) = url.split_once('?').unwrap_or((url, ""));
    let code = path.rsplit('/').next()?.to_owned();
    let mut year = None;
    let mut geos = HashSet::new();
    for pair in query.split('&') {
        match pair.split_once('=') {
            Some(("time", y)) => year = y.parse().ok(),
            Some(("geo", g)) => {
                geos.insert(g.to_owned());
            }
            _ => {}
        }
    }
    Some((code, year?, geos))
}

impl Transport for StubTransport {
    fn get(&self, url: &str) -> Result<HttpResponse, String> {
        self.requests
            .lock()
            .expect("request log")
            .push(url.to_owned());
        if let Some(d) = self.delay {
            std::thread::sleep(d);
        }
        let (code, year, geos) = parse_url(url).ok_or_else(|| format!("bad url {url}"))?;
        if let Some(&status) = self.statuses.get(&code) {
            return Ok(HttpResponse {
                status,
                body: Vec::new(),
            });
        }
        let not_found = HttpResponse {
            status: 404,
            body: Vec::new(),
        };
        let Some(data) = &self.data else {
            return Ok(not_found);
        };
        let Some(j) = data.indicators.iter().position(|s| s.code == code) else {
            return Ok(not_found);
        };
        if data.year != year {
            return Ok(not_found);
        }
        let observations: Vec<RawObservation> = data
            .units
            .iter()
            .zip(&data.values)
            .filter(|(u, _)| geos.is_empty() || geos.contains(*u))
            .map(|(u, row)| RawObservation {
                dataset_code: code.clone(),
                geo: u.clone(),
                year,
                value: row[j],
                flags: self
                    .flags
                    .get(&(code.clone(), u.clone()))
                    .map(|f| f.chars().collect())
                    .unwrap_or_default(),
            })
            .collect();
        Ok(HttpResponse {
            status: 200,
            body: encode_jsonstat(&code, year, &observations).into_bytes(),
        })
    }
}
