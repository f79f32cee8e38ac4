//! CSV, JSON and manifest emission. CSV carries a header row, 17 significant
//! digits and LF line endings; identical inputs produce byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

pub fn fmt_g17(v: f64) -> String {
    format!("{v:.16e}")
}

/// A CSV table under construction.
pub struct Csv {
    buf: String,
    cols: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut buf = String::new();
        buf.push_str(&header.join(","));
        buf.push('\n');
        Csv {
            buf,
            cols: header.len(),
        }
    }

    pub fn row(&mut self, values: &[f64]) {
        assert_eq!(values.len(), self.cols, "row width mismatch");
        let joined: Vec<String> = values.iter().map(|&v| fmt_g17(v)).collect();
        let _ = writeln!(self.buf, "{}", joined.join(","));
    }

    pub fn row_mixed(&mut self, label: &str, values: &[f64]) {
        assert_eq!(values.len() + 1, self.cols, "row width mismatch");
        let joined: Vec<String> = values.iter().map(|&v| fmt_g17(v)).collect();
        let _ = writeln!(self.buf, "{label},{}", joined.join(","));
    }

    /// Row with a leading integer index (counts stay readable as integers).
    pub fn row_indexed(&mut self, index: &[usize], values: &[f64]) {
        assert_eq!(index.len() + values.len(), self.cols, "row width mismatch");
        let mut cells: Vec<String> = index.iter().map(|i| i.to_string()).collect();
        cells.extend(values.iter().map(|&v| fmt_g17(v)));
        let _ = writeln!(self.buf, "{}", cells.join(","));
    }

    pub fn write(self, path: &Path) -> std::io::Result<()> {
        fs::write(path, self.buf)
    }
}

/// Key/value manifest collected across a run.
pub struct Manifest {
    entries: Vec<(String, String)>,
    outputs: Vec<String>,
    started: std::time::Instant,
}

impl Manifest {
    pub fn new(subcommand: &str) -> Self {
        let mut m = Manifest {
            entries: Vec::new(),
            outputs: Vec::new(),
            started: std::time::Instant::now(),
        };
        m.put("subcommand", subcommand);
        m
    }

    pub fn put(&mut self, key: &str, value: impl ToString) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    pub fn put_f(&mut self, key: &str, value: f64) {
        self.entries.push((key.to_string(), fmt_g17(value)));
    }

    pub fn record_output(&mut self, path: &Path) {
        self.outputs
            .push(path.file_name().unwrap().to_string_lossy().into_owned());
    }

    pub fn write(mut self, dir: &Path) -> std::io::Result<()> {
        let path = dir.join("manifest.txt");
        self.entries
            .push(("outputs".into(), self.outputs.join(",")));
        self.entries.push((
            "wall_time_ms".into(),
            format!("{}", self.started.elapsed().as_millis()),
        ));
        let mut buf = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(buf, "{k} = {v}");
        }
        fs::write(path, buf)
    }
}

/// Output directory handle that also records files into the manifest.
pub struct OutDir {
    pub dir: PathBuf,
}

impl OutDir {
    pub fn create(dir: &Path) -> std::io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(OutDir {
            dir: dir.to_path_buf(),
        })
    }

    pub fn write_csv(&self, name: &str, csv: Csv, manifest: &mut Manifest) -> std::io::Result<()> {
        let path = self.dir.join(name);
        csv.write(&path)?;
        manifest.record_output(&path);
        Ok(())
    }

    pub fn write_text(
        &self,
        name: &str,
        text: &str,
        manifest: &mut Manifest,
    ) -> std::io::Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, text)?;
        manifest.record_output(&path);
        Ok(())
    }

    pub fn write_json(
        &self,
        name: &str,
        value: &serde_json::Value,
        manifest: &mut Manifest,
    ) -> std::io::Result<()> {
        let path = self.dir.join(name);
        let mut text = serde_json::to_string_pretty(value).expect("json serialization");
        text.push('\n');
        fs::write(&path, text)?;
        manifest.record_output(&path);
        Ok(())
    }
}
