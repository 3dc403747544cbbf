//! Deterministic CSV/JSON writers: 17-significant-digit round-trip floats,
//! fixed column orders, no timestamps.

use std::io::Write;
use std::path::Path;

/// Round-trip float formatting (17 significant digits).
pub fn fmt(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else {
        format!("{v:.16e}")
    }
}

/// One engine trace row.
#[derive(Debug, Clone)]
pub struct TraceRow {
    pub t: f64,
    pub l: f64,
    pub ldot: f64,
    pub energy: f64,
    pub f_ad: f64,
    pub f_nonad: f64,
    pub raw: [f64; 3],
}

pub fn write_trace(
    path: &Path,
    engine: &str,
    raw_labels: (&str, &str, &str),
    rows: &[TraceRow],
) -> anyhow::Result<()> {
    let mut f = std::fs::File::create(path)?;
    writeln!(
        f,
        "t,l,ldot,e,f_ad,f_nonad,f_total,{},{},{},engine",
        raw_labels.0, raw_labels.1, raw_labels.2
    )?;
    for r in rows {
        writeln!(
            f,
            "{},{},{},{},{},{},{},{},{},{},{}",
            fmt(r.t),
            fmt(r.l),
            fmt(r.ldot),
            fmt(r.energy),
            fmt(r.f_ad),
            fmt(r.f_nonad),
            fmt(r.f_ad + r.f_nonad),
            fmt(r.raw[0]),
            fmt(r.raw[1]),
            fmt(r.raw[2]),
            engine
        )?;
    }
    Ok(())
}

pub fn write_json(path: &Path, value: &serde_json::Value) -> anyhow::Result<()> {
    let mut f = std::fs::File::create(path)?;
    serde_json::to_writer_pretty(&mut f, value)?;
    writeln!(f)?;
    Ok(())
}
