//! Tab-separated reading and writing shared by every file format in the crate.
//!
//! Fields are never quoted. Writers replace embedded tabs and line breaks with
//! a single space so that every record stays on one line.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One data row together with its 1-based physical line number.
#[derive(Debug, Clone)]
pub struct Row {
    pub line: u64,
    pub fields: Vec<String>,
}

impl Row {
    pub fn get(&self, idx: usize) -> &str {
        self.fields.get(idx).map(String::as_str).unwrap_or("")
    }
}

/// A rejected input row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowReject {
    pub line: u64,
    pub reason: String,
}

/// Outcome of loading one delimited file.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoadReport {
    /// Data rows seen, header excluded.
    pub rows: usize,
    pub accepted: usize,
    /// Rows that were equivalent to an already accepted row and folded into it.
    #[serde(default)]
    pub collapsed: usize,
    pub rejects: Vec<RowReject>,
}

impl LoadReport {
    pub fn rejected(&self) -> usize {
        self.rejects.len()
    }

    pub(crate) fn reject(&mut self, line: u64, reason: impl Into<String>) {
        let reason = reason.into();
        log::warn!("line {line}: {reason}");
        self.rejects.push(RowReject { line, reason });
    }
}

/// Streaming reader over a delimited file with a mandatory header row.
pub struct RowReader<R: Read> {
    inner: BufReader<R>,
    path: PathBuf,
    delimiter: char,
    width: usize,
    line: u64,
}

impl RowReader<File> {
    pub fn open(path: &Path, delimiter: u8, expected: &[&str]) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::new(file, path, delimiter, expected)
    }
}

impl<R: Read> RowReader<R> {
    pub fn new(reader: R, path: &Path, delimiter: u8, expected: &[&str]) -> Result<Self> {
        let mut this = Self {
            inner: BufReader::new(reader),
            path: path.to_path_buf(),
            delimiter: delimiter as char,
            width: expected.len(),
            line: 0,
        };
        let header = this.read_line().transpose()?;
        let matches = header.is_some_and(|h| {
            let fields: Vec<&str> = h.split(this.delimiter).collect();
            fields.len() == expected.len()
                && fields
                    .iter()
                    .zip(expected)
                    .all(|(h, e)| h.trim().trim_start_matches('\u{feff}').eq_ignore_ascii_case(e))
        });
        if !matches {
            return Err(Error::Header {
                path: path.to_path_buf(),
                expected: expected.join(if delimiter == b'\t' { "\\t" } else { "," }),
            });
        }
        Ok(this)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    fn read_line(&mut self) -> Option<Result<String>> {
        let mut buf = String::new();
        match self.inner.read_line(&mut buf) {
            Ok(0) => None,
            Ok(_) => {
                self.line += 1;
                let trimmed = buf.trim_end_matches(['\n', '\r']).len();
                buf.truncate(trimmed);
                Some(Ok(buf))
            }
            Err(e) => Some(Err(Error::io(&self.path, e))),
        }
    }
}

impl<R: Read> Iterator for RowReader<R> {
    type Item = Result<Row>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let text = match self.read_line()? {
                Ok(t) => t,
                Err(e) => return Some(Err(e)),
            };
            // blank lines carry no data
            if text.trim().is_empty() {
                continue;
            }
            let fields = text.split(self.delimiter).map(str::to_string).collect();
            return Some(Ok(Row { line: self.line, fields }));
        }
    }
}

pub(crate) fn clean_field(field: &str) -> String {
    if field.contains(['\t', '\n', '\r']) {
        field
            .split(['\t', '\n', '\r'])
            .filter(|s| !s.is_empty())
            .collect::<Vec<_>>()
            .join(" ")
    } else {
        field.to_string()
    }
}

/// Buffered tab-separated writer.
pub struct TsvWriter<W: Write> {
    out: W,
    path: PathBuf,
    delimiter: char,
}

impl TsvWriter<BufWriter<File>> {
    pub fn create(path: &Path) -> Result<Self> {
        Self::create_with(path, '\t')
    }

    pub fn create_with(path: &Path, delimiter: char) -> Result<Self> {
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
            }
        }
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        Ok(Self {
            out: BufWriter::new(file),
            path: path.to_path_buf(),
            delimiter,
        })
    }
}

impl<W: Write> TsvWriter<W> {
    pub fn from_writer(out: W, delimiter: char) -> Self {
        Self {
            out,
            path: PathBuf::from("<memory>"),
            delimiter,
        }
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut first = true;
        let mut line = String::new();
        for f in fields {
            if !first {
                line.push(self.delimiter);
            }
            first = false;
            line.push_str(&clean_field(f.as_ref()));
        }
        line.push('\n');
        self.out
            .write_all(line.as_bytes())
            .map_err(|e| Error::io(&self.path, e))
    }

    pub fn finish(mut self) -> Result<W> {
        self.out.flush().map_err(|e| Error::io(&self.path, e))?;
        Ok(self.out)
    }
}
