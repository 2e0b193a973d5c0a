//! Loading, locking and persisting the transaction log behind a state path.

use std::fmt;
use std::fs::{File, TryLockError};
use std::path::{Path, PathBuf};

use abac_chain::chain::{self, Chain};
use abac_chain::gas::{CostParams, DeployConstants};
use anyhow::{Context, Result};

/// Another process holds the lock on the same state path.
#[derive(Debug)]
pub struct StateLocked(pub PathBuf);

impl fmt::Display for StateLocked {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "state {} is locked by another process", self.0.display())
    }
}

impl std::error::Error for StateLocked {}

pub struct Session {
    path: PathBuf,
    pub chain: Chain,
    // Held for the session's lifetime; the OS lock drops with the handle.
    _lock: File,
}

fn lock_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".lock");
    PathBuf::from(name)
}

impl Session {
    pub fn open(path: &Path, params: CostParams) -> Result<Self> {
        let lock_file = lock_path(path);
        let lock = File::create(&lock_file).with_context(|| format!("creating {}", lock_file.display()))?;
        match lock.try_lock() {
            Ok(()) => {}
            Err(TryLockError::WouldBlock) => return Err(StateLocked(path.to_owned()).into()),
            Err(TryLockError::Error(e)) => return Err(e.into()),
        }
        let chain = if path.exists() {
            chain::restore(path, params, DeployConstants::default())?
        } else {
            Chain::new(params, DeployConstants::default())?
        };
        Ok(Self { path: path.to_owned(), chain, _lock: lock })
    }

    /// Writes the log back unless this is a dry run.
    pub fn persist(&self, dry_run: bool) -> Result<()> {
        if dry_run {
            return Ok(());
        }
        chain::snapshot(&self.chain, &self.path)?;
        Ok(())
    }
}
