use std::fs;
use std::path::{Path, PathBuf};

use anyhow::anyhow;
use serde::Serialize;
use serde_json::Value;

use crate::failure::{CmdResult, Failure};

/// Settings shared by every file a command writes.
#[derive(Debug, Clone, Copy)]
pub struct OutputOptions {
    pub timestamp: bool,
    pub plot_data: bool,
}

pub fn write_text(path: &Path, text: &str) -> CmdResult {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Failure::input(anyhow!("{}: {e}", dir.display())))?;
    }
    fs::write(path, text).map_err(|e| Failure::input(anyhow!("{}: {e}", path.display())))
}

/// Pretty JSON with a trailing newline; a `generated_at` field is added to
/// top-level objects unless timestamps are off.
pub fn write_json<T: Serialize>(path: &Path, value: &T, opts: OutputOptions) -> CmdResult {
    let mut doc = serde_json::to_value(value).map_err(Failure::numeric)?;
    if opts.timestamp {
        if let Value::Object(map) = &mut doc {
            let now = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
            map.insert("generated_at".into(), Value::String(now));
        }
    }
    let mut text = serde_json::to_string_pretty(&doc).map_err(Failure::numeric)?;
    text.push('\n');
    write_text(path, &text)
}

/// `out.json` → `out.<suffix>.dat`.
pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    path.with_extension(suffix)
}

/// Two whitespace-separated columns for gnuplot. Blocks are separated by
/// two blank lines so that `index` selects them.
pub fn plot_columns(blocks: &[(String, Vec<(f64, f64)>)]) -> String {
    let mut out = String::new();
    for (i, (title, rows)) in blocks.iter().enumerate() {
        if i > 0 {
            out.push_str("\n\n");
        }
        out.push_str(&format!("# {title}\n"));
        for (x, y) in rows {
            out.push_str(&format!("{} {}\n", gradchain_core::export::fmt12(*x), gradchain_core::export::fmt12(*y)));
        }
    }
    out
}
