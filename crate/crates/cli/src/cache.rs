//! Space lists memoized under `$APNLAB_CACHE`, keyed by the SHA-256 of the
//! function's raw table encoding.

use std::path::PathBuf;

use apnlab::geometry::{extractors, VectorSpaceBasis, ZeroSet};
use apnlab::{io, Result, Vbf};
use sha2::{Digest, Sha256};

pub fn table_hash(f: &Vbf) -> String {
    hex::encode(Sha256::digest(io::to_binary(f)))
}

fn entry(f: &Vbf, method: &str) -> Option<PathBuf> {
    let dir = std::env::var_os("APNLAB_CACHE")?;
    Some(PathBuf::from(dir).join(format!("{}.{method}.spaces.json", table_hash(f))))
}

/// Walsh zeroes and their `n`-dimensional spaces. Cached lists are checked
/// against the zero set before use; a bad entry is recomputed.
pub fn spaces(f: &Vbf, method: &str) -> Result<(ZeroSet, Vec<VectorSpaceBasis>)> {
    let z = f.walsh_zeroes()?;
    let path = entry(f, method);
    if let Some(p) = &path {
        if let Ok(bytes) = std::fs::read(p) {
            if let Ok(list) = serde_json::from_slice::<Vec<VectorSpaceBasis>>(&bytes) {
                if list.iter().all(|v| v.dim() == f.n() && z.contains_space(v.basis())) {
                    log::info!("spaces loaded from {}", p.display());
                    return Ok((z, list));
                }
            }
            log::warn!("ignoring unusable cache entry {}", p.display());
        }
    }
    let list = extractors().get(method)?.extract(&z, f.n())?;
    if let Some(p) = &path {
        if let Some(dir) = p.parent() {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(p, serde_json::to_vec(&list)?)?;
        log::info!("spaces cached at {}", p.display());
    }
    Ok((z, list))
}
