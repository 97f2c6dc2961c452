use std::path::{Path, PathBuf};

use crate::imgio::Rect;
use crate::outline::{EndpointPair, Point};

const REQUIRED: [&str; 5] = ["image", "start_x", "start_y", "end_x", "end_y"];
const VIEWPORT: [&str; 4] = ["vx", "vy", "vw", "vh"];

#[derive(Debug, thiserror::Error)]
pub enum ManifestError {
    #[error("cannot read manifest {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("manifest header lacks column {0:?}")]
    MissingColumn(&'static str),
}

/// One parsed manifest row; `image` is resolved against the manifest's
/// directory, `label` keeps the text as written.
#[derive(Clone, Debug, PartialEq)]
pub struct ManifestRow {
    pub label: String,
    pub image: PathBuf,
    pub endpoints: EndpointPair,
    pub viewport: Option<Rect>,
}

/// Reads `image,start_x,start_y,end_x,end_y[,vx,vy,vw,vh]`. Malformed rows
/// come back as `Err((label, reason))` so the batch can report and move on.
#[allow(clippy::type_complexity)]
pub fn read_manifest(
    path: &Path,
) -> Result<Vec<Result<ManifestRow, (String, String)>>, ManifestError> {
    let read_err = |source| ManifestError::Read {
        path: path.to_path_buf(),
        source,
    };
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(read_err)?;
    let headers = reader.headers().map_err(read_err)?.clone();
    let column = |name: &'static str| headers.iter().position(|h| h == name);
    let mut required = [0usize; 5];
    for (slot, name) in required.iter_mut().zip(REQUIRED) {
        *slot = column(name).ok_or(ManifestError::MissingColumn(name))?;
    }
    let viewport_cols: Option<Vec<usize>> = VIEWPORT.iter().map(|&n| column(n)).collect();
    let base = path.parent().unwrap_or(Path::new("."));

    let mut rows = Vec::new();
    for (n, record) in reader.records().enumerate() {
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                rows.push(Err((format!("row {}", n + 1), e.to_string())));
                continue;
            }
        };
        let field = |i: usize| record.get(i).unwrap_or("");
        let label = field(required[0]).to_string();
        rows.push(
            parse_row(&record, &required, viewport_cols.as_deref(), base).map_err(|reason| {
                let shown = if label.is_empty() {
                    format!("row {}", n + 1)
                } else {
                    label.clone()
                };
                (shown, reason)
            }),
        );
    }
    Ok(rows)
}

fn parse_row(
    record: &csv::StringRecord,
    required: &[usize; 5],
    viewport_cols: Option<&[usize]>,
    base: &Path,
) -> Result<ManifestRow, String> {
    let field = |i: usize| record.get(i).unwrap_or("");
    let int = |i: usize, name: &str| -> Result<i64, String> {
        let text = field(i);
        if text.is_empty() {
            return Err(format!("missing {name}"));
        }
        text.parse::<i64>()
            .map_err(|_| format!("{name} is not an integer: {text:?}"))
    };
    let label = field(required[0]).to_string();
    if label.is_empty() {
        return Err("missing image".into());
    }
    let mut coords = [0i32; 4];
    for (k, name) in REQUIRED[1..].iter().enumerate() {
        let v = int(required[k + 1], name)?;
        coords[k] = i32::try_from(v).map_err(|_| format!("{name} out of range: {v}"))?;
    }
    let viewport = match viewport_cols {
        Some(cols) if cols.iter().any(|&i| !field(i).is_empty()) => {
            let mut v = [0usize; 4];
            for (slot, (&i, name)) in v.iter_mut().zip(cols.iter().zip(VIEWPORT)) {
                let n = int(i, name)?;
                *slot = usize::try_from(n).map_err(|_| format!("{name} must not be negative"))?;
            }
            Some(Rect::new(v[0], v[1], v[2], v[3]))
        }
        _ => None,
    };
    Ok(ManifestRow {
        image: base.join(&label),
        label,
        endpoints: EndpointPair {
            start: Point::new(coords[0], coords[1]),
            end: Point::new(coords[2], coords[3]),
        },
        viewport,
    })
}
