//! File writers shared by the subcommands.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sta_fields::simulator::fmt17;

use crate::error::Result;

pub fn prepare_dir(dir: &Path) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    Ok(dir.to_path_buf())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

/// A CSV file whose float cells carry 17 significant digits.
pub struct Table {
    writer: csv::Writer<BufWriter<File>>,
}

impl Table {
    pub fn create<S: AsRef<str>>(path: &Path, header: &[S]) -> Result<Self> {
        let mut writer = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
        writer.write_record(header.iter().map(|h| h.as_ref()))?;
        Ok(Table { writer })
    }

    pub fn row(&mut self, labels: &[usize], values: &[f64]) -> Result<()> {
        let cells = labels
            .iter()
            .map(|n| n.to_string())
            .chain(values.iter().map(|x| fmt17(*x)));
        self.writer.write_record(cells)?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.writer.flush()?;
        Ok(())
    }
}

pub fn xyz(prefix: &str) -> [String; 3] {
    ["x", "y", "z"].map(|a| format!("{prefix}_{a}"))
}
