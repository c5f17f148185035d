use std::collections::HashSet;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};

use super::xml::{parse_article_set, ParsedPage, SkippedRecord};
use super::ArticleRecord;

pub const API_KEY_ENV: &str = "KNOWMETRIC_API_KEY";

#[derive(Debug, Clone)]
pub struct FetchConfig {
    /// Minimum spacing between any two requests, across all workers.
    pub min_delay: Duration,
    pub max_in_flight: usize,
    pub page_size: u32,
    pub max_attempts: u32,
    pub timeout: Duration,
    pub api_key: Option<String>,
}

impl Default for FetchConfig {
    fn default() -> Self {
        Self {
            min_delay: Duration::from_millis(350),
            max_in_flight: 3,
            page_size: 500,
            max_attempts: 3,
            timeout: Duration::from_secs(30),
            api_key: std::env::var(API_KEY_ENV).ok().filter(|k| !k.is_empty()),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FetchOutcome {
    /// Sorted by `article_id`.
    pub records: Vec<ArticleRecord>,
    pub skipped: Vec<SkippedRecord>,
    /// Hit count announced by the endpoint, if it sent one.
    pub reported_count: Option<u64>,
}

impl FetchOutcome {
    pub fn count(&self) -> usize {
        self.records.len()
    }
}

struct RateGate {
    next: Mutex<Instant>,
    delay: Duration,
}

impl RateGate {
    fn new(delay: Duration) -> Self {
        Self {
            next: Mutex::new(Instant::now()),
            delay,
        }
    }

    fn wait(&self) {
        let slot = {
            let mut next = self.next.lock().unwrap_or_else(|e| e.into_inner());
            let slot = (*next).max(Instant::now());
            *next = slot + self.delay;
            slot
        };
        let now = Instant::now();
        if slot > now {
            thread::sleep(slot - now);
        }
    }
}

struct Client<'a> {
    agent: ureq::Agent,
    endpoint: &'a str,
    query: &'a str,
    range: (i32, i32),
    config: &'a FetchConfig,
    gate: RateGate,
}

impl Client<'_> {
    fn get(&self, retstart: u64) -> Result<String> {
        let mut last = String::new();
        for attempt in 1..=self.config.max_attempts.max(1) {
            self.gate.wait();
            let mut req = self
                .agent
                .get(self.endpoint)
                .query("term", self.query)
                .query("mindate", self.range.0.to_string())
                .query("maxdate", self.range.1.to_string())
                .query("retstart", retstart.to_string())
                .query("retmax", self.config.page_size.to_string());
            if let Some(key) = &self.config.api_key {
                req = req.query("api_key", key);
            }
            match req.call().and_then(|mut r| r.body_mut().read_to_string()) {
                Ok(body) => return Ok(body),
                Err(e) => {
                    log::warn!("attempt {attempt} for {} (retstart {retstart}) failed: {e}", self.endpoint);
                    last = e.to_string();
                }
            }
        }
        Err(Error::Network {
            url: self.endpoint.to_string(),
            attempts: self.config.max_attempts.max(1),
            message: last,
        })
    }

    fn page(&self, retstart: u64) -> Result<ParsedPage> {
        let body = self.get(retstart)?;
        parse_article_set(&body, self.range).map_err(|message| Error::MalformedResponse {
            url: format!("{}?retstart={retstart}", self.endpoint),
            message,
        })
    }
}

/// Fetches every record matching `query` within `date_range` (inclusive
/// years). Pages beyond the first are requested concurrently, up to
/// `config.max_in_flight` at a time; output order does not depend on
/// completion order.
pub fn fetch_articles(query: &str, date_range: (i32, i32), endpoint: &str, config: &FetchConfig) -> Result<FetchOutcome> {
    if date_range.0 > date_range.1 {
        return Err(Error::DateRange {
            start: date_range.0,
            end: date_range.1,
        });
    }
    let agent: ureq::Agent = ureq::Agent::config_builder()
        .timeout_global(Some(config.timeout))
        .build()
        .into();
    let client = Client {
        agent,
        endpoint,
        query,
        range: date_range,
        config,
        gate: RateGate::new(config.min_delay),
    };
    let step = u64::from(config.page_size.max(1));

    let first = client.page(0)?;
    let reported_count = first.count;
    let mut pages = vec![(0, first)];
    match reported_count {
        Some(total) => {
            let offsets: Vec<u64> = (step..total).step_by(step as usize).collect();
            pages.extend(fetch_concurrently(&client, &offsets)?);
        }
        None => {
            // no announced count: walk pages until one comes back short
            let mut start = 0;
            while pages.last().is_some_and(|(_, p)| (p.records.len() + p.skipped.len()) as u64 >= step) {
                start += step;
                pages.push((start, client.page(start)?));
            }
        }
    }
    pages.sort_by_key(|(offset, _)| *offset);

    let mut outcome = FetchOutcome {
        reported_count,
        ..FetchOutcome::default()
    };
    let mut seen = HashSet::new();
    for (_, page) in pages {
        outcome.skipped.extend(page.skipped);
        for record in page.records {
            if seen.insert(record.article_id.clone()) {
                outcome.records.push(record);
            } else {
                log::warn!("skipping duplicate record {}", record.article_id);
                outcome.skipped.push(SkippedRecord {
                    article_id: Some(record.article_id),
                    reason: "duplicate article id in batch".into(),
                });
            }
        }
    }
    outcome.records.sort_by(|a, b| a.article_id.cmp(&b.article_id));
    log::info!("fetched {} records ({} skipped)", outcome.records.len(), outcome.skipped.len());
    Ok(outcome)
}

fn fetch_concurrently(client: &Client, offsets: &[u64]) -> Result<Vec<(u64, ParsedPage)>> {
    let next = AtomicUsize::new(0);
    let results = Mutex::new(Vec::with_capacity(offsets.len()));
    let workers = client.config.max_in_flight.clamp(1, offsets.len().max(1));
    thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&offset) = offsets.get(i) else { break };
                let page = client.page(offset);
                let failed = page.is_err();
                results.lock().unwrap_or_else(|e| e.into_inner()).push((offset, page));
                if failed {
                    // let the other workers drain without starting new pages
                    next.store(offsets.len(), Ordering::Relaxed);
                    break;
                }
            });
        }
    });
    let mut results = results.into_inner().unwrap_or_else(|e| e.into_inner());
    results.sort_by_key(|(offset, _)| *offset);
    results.into_iter().map(|(o, p)| p.map(|p| (o, p))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gate_spaces_requests() {
        let gate = RateGate::new(Duration::from_millis(20));
        let start = Instant::now();
        for _ in 0..4 {
            gate.wait();
        }
        assert!(start.elapsed() >= Duration::from_millis(60));
    }

    #[test]
    fn reversed_range_is_rejected() {
        let err = fetch_articles("x", (2020, 2001), "http://127.0.0.1:9", &FetchConfig::default());
        assert!(matches!(err, Err(Error::DateRange { start: 2020, end: 2001 })));
    }

    #[test]
    fn unreachable_endpoint_reports_attempts() {
        let config = FetchConfig {
            min_delay: Duration::ZERO,
            max_attempts: 2,
            timeout: Duration::from_secs(2),
            ..FetchConfig::default()
        };
        let port = std::net::TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
        let url = format!("http://127.0.0.1:{port}/search");
        let err = fetch_articles("x", (2001, 2020), &url, &config).unwrap_err();
        assert!(matches!(err, Error::Network { attempts: 2, .. }), "{err}");
    }
}
