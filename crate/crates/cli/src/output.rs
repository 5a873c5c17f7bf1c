//! Atomic output files and the run manifest.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};
use tempfile::NamedTempFile;

use crate::error::{Context, Result};

/// Output directory that records every file written to it.
pub struct Outputs {
    dir: PathBuf,
    written: Vec<String>,
}

impl Outputs {
    pub fn create(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).context(format!("creating {}", dir.display()))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    /// Writes `name` through a temporary file in the same directory, then
    /// renames it into place.
    pub fn write<F>(&mut self, name: &str, fill: F) -> Result<()>
    where
        F: FnOnce(&mut dyn Write) -> Result<()>,
    {
        let target = self.dir.join(name);
        let tmp = NamedTempFile::new_in(&self.dir).context(format!("creating temporary file for {name}"))?;
        {
            let mut w = BufWriter::new(tmp.as_file());
            fill(&mut w)?;
            w.flush().context(format!("writing {name}"))?;
        }
        tmp.as_file().sync_all().context(format!("syncing {name}"))?;
        tmp.persist(&target)
            .map_err(|e| e.error)
            .context(format!("renaming into {}", target.display()))?;
        self.written.push(name.to_string());
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        self.write(name, |w| {
            serde_json::to_writer_pretty(&mut *w, value)?;
            writeln!(w)?;
            Ok(())
        })
    }

    /// Writes `manifest.json` listing the configuration, the library
    /// version, input checksums and every output written so far.
    pub fn finish<C: Serialize>(mut self, subcommand: &str, config: &C, inputs: &[&Path]) -> Result<()> {
        let inputs = inputs
            .iter()
            .map(|p| {
                Ok(InputRecord {
                    path: p.display().to_string(),
                    sha256: sha256_file(p)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let manifest = Manifest {
            tool: "gcoda",
            version: env!("CARGO_PKG_VERSION"),
            subcommand,
            config,
            inputs,
            outputs: self.written.clone(),
        };
        self.write_json("manifest.json", &manifest)
    }
}

#[derive(Serialize)]
struct InputRecord {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct Manifest<'a, C: Serialize> {
    tool: &'static str,
    version: &'static str,
    subcommand: &'a str,
    config: &'a C,
    inputs: Vec<InputRecord>,
    outputs: Vec<String>,
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path).context(format!("reading {}", path.display()))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}
