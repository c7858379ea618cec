//! JSON and CSV renderings of generated phrases.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generator::TraceSlot;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExportRow {
    pub surface: String,
    pub trace: Vec<TraceSlot>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExportFormat {
    Json,
    Csv,
}

impl std::str::FromStr for ExportFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ExportFormat::Json),
            "csv" => Ok(ExportFormat::Csv),
            other => Err(format!("unknown export format `{other}`")),
        }
    }
}

impl ExportFormat {
    pub fn content_type(self) -> &'static str {
        match self {
            ExportFormat::Json => "application/json",
            ExportFormat::Csv => "text/csv; charset=utf-8",
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            ExportFormat::Json => "json",
            ExportFormat::Csv => "csv",
        }
    }
}

/// Pretty-printed array of `{surface, trace}` followed by a newline.
pub fn export_json(rows: &[ExportRow]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("export rows serialize");
    s.push('\n');
    s
}

pub fn import_json(text: &str) -> Result<Vec<ExportRow>> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Header `surface,slotN_lemma,slotN_class,…` over every slot present, LF line endings.
pub fn export_csv(rows: &[ExportRow]) -> String {
    let slots: BTreeSet<u8> = rows.iter().flat_map(|r| r.trace.iter().map(|t| t.slot)).collect();
    let paired: BTreeSet<u8> = rows
        .iter()
        .flat_map(|r| r.trace.iter().filter(|t| t.paired.is_some()).map(|t| t.slot))
        .collect();
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let mut header = vec!["surface".to_string()];
    for s in &slots {
        header.push(format!("slot{s}_lemma"));
        header.push(format!("slot{s}_class"));
        if paired.contains(s) {
            header.push(format!("slot{s}_paired"));
        }
    }
    w.write_record(&header).expect("write to memory");
    for r in rows {
        let mut rec = vec![r.surface.clone()];
        for s in &slots {
            let t = r.trace.iter().find(|t| t.slot == *s);
            rec.push(t.map(|t| t.lemma.clone()).unwrap_or_default());
            rec.push(t.map(|t| t.class.to_string()).unwrap_or_default());
            if paired.contains(s) {
                rec.push(t.and_then(|t| t.paired.as_ref()).map(|p| p.lemma.clone()).unwrap_or_default());
            }
        }
        w.write_record(&rec).expect("write to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv output is utf-8")
}

pub fn export(rows: &[ExportRow], format: ExportFormat) -> String {
    match format {
        ExportFormat::Json => export_json(rows),
        ExportFormat::Csv => export_csv(rows),
    }
}
