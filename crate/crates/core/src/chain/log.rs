//! Transaction log files: one canonical JSON transaction per line, then a
//! final line holding the hex SHA-256 of every preceding byte.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use sha2::{Digest, Sha256};

use super::{Chain, ChainError, Transaction};
use crate::gas::{CostParams, DeployConstants};

pub fn write_log<'a, W, I>(mut out: W, txs: I) -> io::Result<()>
where
    W: Write,
    I: IntoIterator<Item = &'a Transaction>,
{
    let mut hasher = Sha256::new();
    for tx in txs {
        let mut line = tx.canonical_json();
        line.push('\n');
        hasher.update(line.as_bytes());
        out.write_all(line.as_bytes())?;
    }
    writeln!(out, "{}", hex::encode(hasher.finalize()))?;
    out.flush()
}

/// Parses a log and checks its trailing digest. An empty input is an empty log.
pub fn read_log(text: &str) -> Result<Vec<Transaction>, ChainError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let body = text.strip_suffix('\n').unwrap_or(text);
    let (records, digest) = match body.rfind('\n') {
        Some(i) => (&body[..=i], &body[i + 1..]),
        None => ("", body),
    };
    let actual = hex::encode(Sha256::digest(records.as_bytes()));
    if digest.trim() != actual {
        return Err(ChainError::CorruptLog(format!("digest mismatch: file says {:?}, records hash to {actual}", digest.trim())));
    }
    records
        .lines()
        .enumerate()
        .map(|(i, line)| {
            serde_json::from_str(line).map_err(|e| ChainError::CorruptLog(format!("line {}: {e}", i + 1)))
        })
        .collect()
}

/// Writes the chain's log to `path` atomically via a sibling temp file.
pub fn snapshot(chain: &Chain, path: &Path) -> Result<(), ChainError> {
    let tmp = path.with_extension("tmp");
    {
        let file = fs::File::create(&tmp)?;
        let mut w = io::BufWriter::new(file);
        write_log(&mut w, chain.transactions())?;
        w.into_inner().map_err(|e| e.into_error())?.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Rebuilds a chain from a log file.
pub fn restore(path: &Path, params: CostParams, deploy: DeployConstants) -> Result<Chain, ChainError> {
    let text = fs::read_to_string(path)?;
    Chain::replay(params, deploy, read_log(&text)?)
}
