//! Deterministic CSV and JSON writers. CSV uses '.' decimals, '\n' line
//! endings and a mandatory header row; floats are printed in fixed
//! scientific notation so identical runs produce identical bytes.

use std::io::Write;
use std::path::{Path, PathBuf};

pub fn fmt(v: f64) -> String {
    format!("{v:.12e}")
}

pub struct OutDir {
    dir: PathBuf,
}

impl OutDir {
    pub fn new(dir: &Path) -> std::io::Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(Self { dir: dir.to_path_buf() })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    pub fn write_csv(&self, name: &str, header: &str, rows: &[String]) -> std::io::Result<PathBuf> {
        let path = self.path(name);
        let mut f = std::io::BufWriter::new(std::fs::File::create(&path)?);
        f.write_all(header.as_bytes())?;
        f.write_all(b"\n")?;
        for row in rows {
            f.write_all(row.as_bytes())?;
            f.write_all(b"\n")?;
        }
        f.flush()?;
        Ok(path)
    }

    pub fn write_json(&self, name: &str, value: &serde_json::Value) -> std::io::Result<PathBuf> {
        let path = self.path(name);
        let mut f = std::io::BufWriter::new(std::fs::File::create(&path)?);
        serde_json::to_writer_pretty(&mut f, value)?;
        f.write_all(b"\n")?;
        f.flush()?;
        Ok(path)
    }
}
