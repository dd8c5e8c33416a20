//! File formats: JSON documents for inputs and reports, CSV tables with a
//! header row and `\n` line endings.

use std::fs;
use std::path::Path;

use czlab_core::{
    DescriptorSpec, FixedPointTable, JumpSequence, LiftedPath, LiftedPathSpec, PathDescriptor,
    Rotation, RotationSpec, TableSpec,
};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{CliError, CliResult};

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

pub fn read_descriptor(path: &Path) -> CliResult<PathDescriptor> {
    Ok(read_json::<DescriptorSpec>(path)?.validate()?)
}

pub fn read_pool(path: &Path) -> CliResult<Vec<PathDescriptor>> {
    let specs: Vec<DescriptorSpec> = read_json(path)?;
    if specs.is_empty() {
        return Err(CliError::Schema("descriptor pool is empty".into()));
    }
    Ok(specs
        .iter()
        .map(DescriptorSpec::validate)
        .collect::<Result<_, _>>()?)
}

pub fn read_rotation(path: &Path) -> CliResult<Rotation> {
    Ok(read_json::<RotationSpec>(path)?.validate()?)
}

pub fn read_table(path: &Path) -> CliResult<FixedPointTable> {
    Ok(read_json::<TableSpec>(path)?.validate()?)
}

pub fn read_path(path: &Path) -> CliResult<LiftedPath> {
    Ok(read_json::<LiftedPathSpec>(path)?.validate()?)
}

/// Reads the `jump` column of a CSV with `k` and `jump` columns, or a JSON
/// array of integers. Rows must be `k = 1, 2, ...` in order.
pub fn read_jumps(path: &Path) -> CliResult<JumpSequence> {
    let is_json = path.extension().is_some_and(|e| e == "json");
    if is_json {
        let values: Vec<i64> = read_json(path)?;
        return Ok(JumpSequence::from_values(values));
    }
    let parse_error = |message: String| CliError::Parse {
        path: path.to_path_buf(),
        message,
    };
    let mut reader = csv::Reader::from_path(path).map_err(|e| parse_error(e.to_string()))?;
    let headers = reader.headers()?.clone();
    let column = |name: &str| headers.iter().position(|h| h == name);
    let (Some(k_col), Some(jump_col)) = (column("k"), column("jump")) else {
        return Err(parse_error("expected columns `k` and `jump`".into()));
    };
    let mut values = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record?;
        let field = |col: usize| {
            record
                .get(col)
                .and_then(|s| s.trim().parse::<i64>().ok())
                .ok_or_else(|| parse_error(format!("row {}: bad integer", row + 1)))
        };
        if field(k_col)? != row as i64 + 1 {
            return Err(parse_error(format!("row {}: k out of sequence", row + 1)));
        }
        values.push(field(jump_col)?);
    }
    Ok(JumpSequence::from_values(values))
}

pub fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

/// Writes `rows` under `header` into a string.
pub fn to_csv<R: Serialize>(header: &[&str], rows: impl IntoIterator<Item = R>) -> CliResult<String> {
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    writer.write_record(header)?;
    for row in rows {
        writer.serialize(row)?;
    }
    let bytes = writer.into_inner().map_err(|e| CliError::Write(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn write_output(text: &str, path: Option<&Path>) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}
