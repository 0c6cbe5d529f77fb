use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

use crate::{Format, OutputArgs};

/// Writes `contents` to `path` by renaming a sibling temporary file over it,
/// so readers never observe a partial artifact.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let name = path.file_name().context("artifact path has no file name")?.to_string_lossy();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let write = || -> std::io::Result<()> {
        let mut file = fs::File::create(&tmp)?;
        file.write_all(contents)?;
        file.sync_all()?;
        fs::rename(&tmp, path)
    };
    write().map_err(|e| {
        let _ = fs::remove_file(&tmp);
        anyhow::Error::from(e).context(format!("writing {}", path.display()))
    })
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

impl OutputArgs {
    /// Saves `value` as `<out>/<name>` when an output directory was given.
    pub fn save_json<T: Serialize>(&self, name: &str, value: &T) -> Result<()> {
        if let Some(dir) = &self.out {
            write_atomic(&dir.join(name), to_json(value)?.as_bytes())?;
        }
        Ok(())
    }

    pub fn save_text(&self, name: &str, text: &str) -> Result<()> {
        if let Some(dir) = &self.out {
            write_atomic(&dir.join(name), text.as_bytes())?;
        }
        Ok(())
    }

    /// Prints the JSON value when `--format json` was asked for, `summary` otherwise.
    pub fn show<T: Serialize>(&self, value: &T, summary: impl FnOnce() -> String) -> Result<()> {
        match self.format {
            Some(Format::Json) => print!("{}", to_json(value)?),
            _ => println!("{}", summary()),
        }
        Ok(())
    }
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}
