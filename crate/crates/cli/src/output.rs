use serde::Serialize;
use toffoli_core::linalg::CMatrix;

use crate::config::RunConfig;
use crate::CliError;

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    config: &'a RunConfig,
    result: &'a T,
}

pub fn json<T: Serialize>(config: &RunConfig, result: &T) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(&Envelope { config, result })
        .map_err(|e| CliError::Usage(format!("serialization failed: {e}")))?;
    text.push('\n');
    Ok(text)
}

pub fn csv(header: &[String], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::Usage(format!("csv output failed: {e}"));
    w.write_record(header).map_err(fail)?;
    for row in rows {
        w.write_record(row).map_err(fail)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Usage(format!("csv output failed: {e}")))?;
    String::from_utf8(bytes).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn num(x: f64) -> String {
    format!("{x:?}")
}

/// Rows of `[re, im]` pairs.
pub fn complex_rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    m.row_iter()
        .map(|r| r.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

/// `<label>_re, <label>_im` column pairs.
pub fn complex_header(labels: &[String]) -> Vec<String> {
    labels
        .iter()
        .flat_map(|l| [format!("{l}_re"), format!("{l}_im")])
        .collect()
}

pub fn complex_cells(m: &CMatrix, row: usize) -> Vec<String> {
    (0..m.ncols())
        .flat_map(|c| [num(m[(row, c)].re), num(m[(row, c)].im)])
        .collect()
}
