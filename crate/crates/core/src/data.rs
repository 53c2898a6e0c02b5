//! Built-in data files, overridable by `SEMICONT_DATA_DIR`.
//!
//! The override directory mirrors the built-in layout: `edges.txt`, `literature.txt`,
//! `cited.txt`, and `records/*.toml`. Missing files fall back to the built-in copy.

use std::path::PathBuf;

use crate::error::ParseError;

pub const DATA_DIR_VAR: &str = "SEMICONT_DATA_DIR";

const BUILTIN: &[(&str, &str)] = &[
    ("edges.txt", include_str!("../data/edges.txt")),
    ("literature.txt", include_str!("../data/literature.txt")),
    ("cited.txt", include_str!("../data/cited.txt")),
];

const BUILTIN_RECORDS: &[(&str, &str)] = &[
    ("ce-wlc-stlc.toml", include_str!("../data/records/ce-wlc-stlc.toml")),
    ("ce-wlc-islsc.toml", include_str!("../data/records/ce-wlc-islsc.toml")),
    ("ce-lqc-swlc.toml", include_str!("../data/records/ce-lqc-swlc.toml")),
    ("ce-lpc-slsc.toml", include_str!("../data/records/ce-lpc-slsc.toml")),
    ("ce-ublsca-sdsc.toml", include_str!("../data/records/ce-ublsca-sdsc.toml")),
    ("ce-blsca-ubslsca.toml", include_str!("../data/records/ce-blsca-ubslsca.toml")),
    ("ce-tlc-sqrgi.toml", include_str!("../data/records/ce-tlc-sqrgi.toml")),
    ("ce-plc-slqc.toml", include_str!("../data/records/ce-plc-slqc.toml")),
    ("ce-sm-splc.toml", include_str!("../data/records/ce-sm-splc.toml")),
];

fn override_dir() -> Option<PathBuf> {
    std::env::var_os(DATA_DIR_VAR).filter(|v| !v.is_empty()).map(PathBuf::from)
}

fn io_error(path: &std::path::Path, e: std::io::Error) -> ParseError {
    ParseError::new(e.to_string()).at(path.display().to_string())
}

/// Contents of a data file and the name to use in error locations.
pub fn read(name: &str) -> Result<(String, String), ParseError> {
    if let Some(dir) = override_dir() {
        let path = dir.join(name);
        if path.exists() {
            let text = std::fs::read_to_string(&path).map_err(|e| io_error(&path, e))?;
            return Ok((text, path.display().to_string()));
        }
    }
    BUILTIN
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(n, t)| (t.to_string(), format!("<built-in>/{n}")))
        .ok_or_else(|| ParseError::new(format!("no data file named {name}")))
}

/// Every machine-checked record file, sorted by file name. An override directory with a
/// `records/` subdirectory replaces the built-in records entirely.
pub fn record_files() -> Result<Vec<(String, String)>, ParseError> {
    if let Some(dir) = override_dir() {
        let rec = dir.join("records");
        if rec.is_dir() {
            let mut paths: Vec<PathBuf> = std::fs::read_dir(&rec)
                .map_err(|e| io_error(&rec, e))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "toml"))
                .collect();
            paths.sort();
            return paths
                .into_iter()
                .map(|p| {
                    let text = std::fs::read_to_string(&p).map_err(|e| io_error(&p, e))?;
                    Ok((p.display().to_string(), text))
                })
                .collect();
        }
    }
    let mut files: Vec<(String, String)> =
        BUILTIN_RECORDS.iter().map(|(n, t)| (format!("<built-in>/records/{n}"), t.to_string())).collect();
    files.sort();
    Ok(files)
}
