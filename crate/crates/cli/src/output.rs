//! Output formatting and atomic file writes.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use crate::error::CliResult;

/// 17 significant digits; parses back to the same f64.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Write through a temporary sibling and rename into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    let mut f = std::fs::File::create(&tmp)?;
    f.write_all(bytes)?;
    f.sync_all()?;
    drop(f);
    std::fs::rename(&tmp, path)?;
    Ok(())
}

pub struct CsvTable {
    writer: csv::Writer<Vec<u8>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(header).expect("in-memory write");
        Self { writer }
    }

    pub fn row_f64(&mut self, values: &[f64]) {
        self.writer
            .write_record(values.iter().map(|&v| num(v)))
            .expect("in-memory write");
    }

    pub fn row(&mut self, fields: &[String]) {
        self.writer.write_record(fields).expect("in-memory write");
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.writer.into_inner().expect("in-memory flush")
    }
}

/// `key = value` report, one entry per line, with optional unit comments.
#[derive(Default)]
pub struct Report {
    text: String,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn section(&mut self, name: &str) {
        if !self.text.is_empty() {
            self.text.push('\n');
        }
        let _ = writeln!(self.text, "[{name}]");
    }

    pub fn value(&mut self, key: &str, v: f64, unit: &str) {
        if unit.is_empty() {
            let _ = writeln!(self.text, "{key} = {}", num(v));
        } else {
            let _ = writeln!(self.text, "{key} = {}  # {unit}", num(v));
        }
    }

    pub fn text(&mut self, key: &str, v: &str) {
        let _ = writeln!(self.text, "{key} = {v:?}");
    }

    pub fn flag(&mut self, key: &str, v: bool) {
        let _ = writeln!(self.text, "{key} = {v}");
    }

    pub fn warning(&mut self, msg: &str) {
        let _ = writeln!(self.text, "# warning: {msg}");
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

/// Output directory plus the files written into it so far.
pub struct OutputDir {
    pub root: PathBuf,
    pub files: Vec<String>,
}

impl OutputDir {
    pub fn create(root: &Path) -> CliResult<Self> {
        std::fs::create_dir_all(root)?;
        Ok(Self {
            root: root.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> CliResult<()> {
        write_atomic(&self.root.join(name), bytes)?;
        self.files.push(name.to_string());
        Ok(())
    }
}
