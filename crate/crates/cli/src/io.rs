//! Edge-list text files, pair scripts, and CSV output.
//!
//! Edge lists hold one edge per line as `i j` with 0-based ids and `i < j`.
//! Blank lines and lines starting with `#` are skipped on input.

use std::io::Write;
use std::path::Path;

use netform_core::{DynamicsTrace, Network};

use crate::error::CliError;

/// A pair with its 1-based line number.
type Numbered = (usize, (usize, usize));

fn parse_pairs(
    text: &str,
    path: &Path,
    n: usize,
    ordered: bool,
) -> Result<Vec<Numbered>, CliError> {
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| CliError::Parse {
            path: path.to_path_buf(),
            line: k + 1,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [a, b] = fields[..] else {
            return Err(err(format!("expected two node ids, got {line:?}")));
        };
        let i: usize = a.parse().map_err(|_| err(format!("bad node id {a:?}")))?;
        let j: usize = b.parse().map_err(|_| err(format!("bad node id {b:?}")))?;
        if i >= n || j >= n {
            return Err(err(format!("node id out of range for n = {n}")));
        }
        if i == j {
            return Err(err(format!("self-loop on node {i}")));
        }
        if ordered && i > j {
            return Err(err(format!("edge ({i}, {j}) must be written with i < j")));
        }
        out.push((k + 1, (i, j)));
    }
    Ok(out)
}

pub fn parse_edge_list(text: &str, path: &Path, n: usize) -> Result<Network, CliError> {
    let mut net = Network::empty(n).map_err(CliError::invalid)?;
    for (line, (i, j)) in parse_pairs(text, path, n, true)? {
        if net.has_edge(i, j) {
            return Err(CliError::Parse {
                path: path.to_path_buf(),
                line,
                message: format!("duplicate edge ({i}, {j})"),
            });
        }
        net.add_edge(i, j);
    }
    Ok(net)
}

pub fn read_edge_list(path: &Path, n: usize) -> Result<Network, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_edge_list(&text, path, n)
}

/// Activation script: one `i j` pair per line, either order.
pub fn read_script(path: &Path, n: usize) -> Result<Vec<(usize, usize)>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    Ok(parse_pairs(&text, path, n, false)?
        .into_iter()
        .map(|(_, p)| p)
        .collect())
}

pub fn edge_list(net: &Network) -> String {
    net.edges().map(|(i, j)| format!("{i} {j}\n")).collect()
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Invalid(format!("csv: {e}"))
}

/// CSV rows to a string; the header is the first row.
pub fn csv_string(rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.write_record(r).map_err(csv_error)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Invalid(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("ascii csv"))
}

pub fn trace_csv(trace: &DynamicsTrace) -> Result<String, CliError> {
    let mut rows = vec![["step", "i", "j", "action", "intra_count", "inter_count"]
        .map(String::from)
        .to_vec()];
    for s in &trace.steps {
        rows.push(vec![
            s.index.to_string(),
            s.pair.0.to_string(),
            s.pair.1.to_string(),
            s.action.label().to_string(),
            s.intra_count.to_string(),
            s.inter_count.to_string(),
        ]);
    }
    csv_string(&rows)
}

pub fn write_stdout(text: &str) -> Result<(), CliError> {
    std::io::stdout()
        .write_all(text.as_bytes())
        .map_err(|e| CliError::io("<stdout>", e))
}
