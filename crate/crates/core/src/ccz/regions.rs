//! DT-region tables with resumable checkpoints.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{dt_signature_of_twist, twist, AdmissibleMap, DtSignature};
use crate::error::{Error, Result};
use crate::geometry::{extract_spaces, VectorSpaceBasis};
use crate::spectrum::Spectrum;
use crate::vbf::Vbf;

/// Which spaces of `Z_F` to twist along.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceFilter {
    /// Keep only spaces with these thicknesses.
    pub thickness: Option<BTreeSet<u32>>,
    /// Then keep `k` of them, chosen with the seed.
    pub sample: Option<(usize, u64)>,
}

impl SpaceFilter {
    pub fn all() -> SpaceFilter {
        SpaceFilter::default()
    }

    pub fn thickness(set: impl IntoIterator<Item = u32>) -> SpaceFilter {
        SpaceFilter {
            thickness: Some(set.into_iter().collect()),
            sample: None,
        }
    }

    pub fn sample(k: usize, seed: u64) -> SpaceFilter {
        SpaceFilter {
            thickness: None,
            sample: Some((k, seed)),
        }
    }

    pub fn with_sample(mut self, k: usize, seed: u64) -> SpaceFilter {
        self.sample = Some((k, seed));
        self
    }

    /// Indices into `spaces`, increasing.
    pub fn select(&self, spaces: &[VectorSpaceBasis], n: u32) -> Vec<usize> {
        let mut keep: Vec<usize> = (0..spaces.len())
            .filter(|&i| match &self.thickness {
                Some(set) => set.contains(&spaces[i].thickness(n)),
                None => true,
            })
            .collect();
        if let Some((k, seed)) = self.sample {
            if k < keep.len() {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut picked: Vec<usize> = index::sample(&mut rng, keep.len(), k).into_vec();
                picked.sort_unstable();
                keep = picked.into_iter().map(|i| keep[i]).collect();
            }
        }
        keep
    }
}

/// Outcome of twisting along one space; also the checkpoint line format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceRecord {
    pub space: VectorSpaceBasis,
    pub thickness: u32,
    pub signature: DtSignature,
    pub is_permutation: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RegionKey {
    pub degree_spectrum: Spectrum,
    pub thickness_spectrum: Spectrum,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    /// Smallest thickness among the source spaces landing here.
    pub twist: u32,
    pub twists: BTreeSet<u32>,
    pub degree_spectrum: Spectrum,
    pub thickness_spectrum: Spectrum,
    /// Spaces of thickness `n` occur in the zeroes of its functions.
    pub contains_permutations: bool,
    /// Number of source spaces landing here.
    pub count: u64,
    /// A source space; one whose twist is a permutation when there is one.
    pub witness: VectorSpaceBasis,
    pub representative: Vbf,
    pub representative_is_permutation: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionTable {
    pub n: u32,
    /// Number of `n`-dimensional spaces in `Z_F`.
    pub total_spaces: u64,
    pub spaces_examined: u64,
    pub regions: Vec<Region>,
    /// Regions whose functions have an affine nonzero component.
    pub degenerate: Vec<Region>,
}

impl RegionTable {
    pub fn permutation_regions(&self) -> usize {
        self.regions.iter().filter(|r| r.contains_permutations).count()
    }
}

/// `(r, z)`: non-degenerate regions found and spaces in `Z_F`; the number of
/// EA-classes in the CCZ-class lies between them when every space was used.
pub fn ea_class_bounds(table: &RegionTable, z: u64) -> (u64, u64) {
    (table.regions.len() as u64, z)
}

/// Extracts the spaces of `Z_F` and explores without a checkpoint.
pub fn explore_regions(f: &Vbf, filter: &SpaceFilter) -> Result<RegionTable> {
    let z = f.walsh_zeroes()?;
    let spaces = extract_spaces(&z, f.n())?;
    explore_regions_with(f, &spaces, filter, None)
}

fn record_for(f: &Vbf, spaces: &[VectorSpaceBasis], v: &VectorSpaceBasis) -> Result<SpaceRecord> {
    let map = AdmissibleMap::new(f.n(), v)?;
    let g = twist(f, &map)?;
    Ok(SpaceRecord {
        space: v.clone(),
        thickness: map.t(),
        signature: dt_signature_of_twist(&g, &map, spaces),
        is_permutation: g.is_permutation(),
    })
}

/// First line of a checkpoint; ties the file to one function.
#[derive(Serialize, Deserialize)]
struct CheckpointHeader {
    n: u32,
    fnv1a: String,
}

fn header_for(f: &Vbf) -> CheckpointHeader {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &y in f.table() {
        for byte in y.to_le_bytes() {
            h = (h ^ byte as u64).wrapping_mul(0x0100_0000_01b3);
        }
    }
    CheckpointHeader {
        n: f.n(),
        fnv1a: format!("{h:016x}"),
    }
}

fn load_checkpoint(path: &Path, f: &Vbf) -> Result<HashMap<VectorSpaceBasis, SpaceRecord>> {
    let mut done = HashMap::new();
    let file = match std::fs::File::open(path) {
        Ok(file) => file,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(done),
        Err(e) => return Err(e.into()),
    };
    let mut lines = BufReader::new(file).lines();
    let Some(first) = lines.next().transpose()? else {
        return Ok(done);
    };
    let expected = header_for(f);
    match serde_json::from_str::<CheckpointHeader>(&first) {
        Ok(h) if h.n == expected.n && h.fnv1a == expected.fnv1a => {}
        _ => {
            return Err(Error::domain(format!(
                "checkpoint {} was written for a different function",
                path.display()
            )))
        }
    }
    for line in lines {
        let line = line?;
        // A torn final line from an interrupted run is recomputed.
        if let Ok(rec) = serde_json::from_str::<SpaceRecord>(&line) {
            done.insert(rec.space.clone(), rec);
        }
    }
    Ok(done)
}

/// Twists `f` along the selected spaces of `spaces` (all `n`-dimensional
/// spaces of `Z_F`) and groups the results by signature. With a checkpoint
/// path, finished spaces are appended as JSON lines and skipped on resume.
pub fn explore_regions_with(
    f: &Vbf,
    spaces: &[VectorSpaceBasis],
    filter: &SpaceFilter,
    checkpoint: Option<&Path>,
) -> Result<RegionTable> {
    let n = f.n();
    let selected = filter.select(spaces, n);
    let mut done = match checkpoint {
        Some(p) => load_checkpoint(p, f)?,
        None => HashMap::new(),
    };
    let todo: Vec<&VectorSpaceBasis> = selected
        .iter()
        .map(|&i| &spaces[i])
        .filter(|v| !done.contains_key(*v))
        .collect();
    let mut sink = match checkpoint {
        Some(p) => {
            let existing = std::fs::read(p).unwrap_or_default();
            let mut file = OpenOptions::new().create(true).append(true).open(p)?;
            if existing.is_empty() {
                writeln!(file, "{}", serde_json::to_string(&header_for(f))?)?;
            } else if existing.last() != Some(&b'\n') {
                file.write_all(b"\n")?;
            }
            Some(file)
        }
        None => None,
    };
    for chunk in todo.chunks(256) {
        let records: Vec<SpaceRecord> = chunk
            .par_iter()
            .map(|v| record_for(f, spaces, v))
            .collect::<Result<_>>()?;
        if let Some(file) = sink.as_mut() {
            let mut buf = String::new();
            for r in &records {
                buf.push_str(&serde_json::to_string(r)?);
                buf.push('\n');
            }
            file.write_all(buf.as_bytes())?;
            file.flush()?;
        }
        for r in records {
            done.insert(r.space.clone(), r);
        }
    }
    let records: Vec<&SpaceRecord> = selected.iter().map(|&i| &done[&spaces[i]]).collect();
    aggregate(f, spaces, &records)
}

fn aggregate(f: &Vbf, spaces: &[VectorSpaceBasis], records: &[&SpaceRecord]) -> Result<RegionTable> {
    let n = f.n();
    let mut groups: BTreeMap<(bool, RegionKey), Vec<&SpaceRecord>> = BTreeMap::new();
    for &r in records {
        let key = RegionKey {
            degree_spectrum: r.signature.degree_spectrum.clone(),
            thickness_spectrum: r.signature.thickness_spectrum.clone(),
        };
        groups.entry((r.signature.non_degenerate, key)).or_default().push(r);
    }
    let mut regions = Vec::new();
    let mut degenerate = Vec::new();
    for ((non_degenerate, key), members) in groups {
        let witness = members
            .iter()
            .filter(|r| r.is_permutation)
            .map(|r| &r.space)
            .min()
            .or_else(|| members.iter().map(|r| &r.space).min())
            .unwrap()
            .clone();
        let representative = twist(f, &AdmissibleMap::new(n, &witness)?)?;
        let twists: BTreeSet<u32> = members.iter().map(|r| r.thickness).collect();
        let region = Region {
            twist: *twists.iter().next().unwrap(),
            twists,
            contains_permutations: key.thickness_spectrum.count(n) > 0,
            degree_spectrum: key.degree_spectrum,
            thickness_spectrum: key.thickness_spectrum,
            count: members.len() as u64,
            witness,
            representative_is_permutation: representative.is_permutation(),
            representative,
        };
        if non_degenerate {
            regions.push(region);
        } else {
            degenerate.push(region);
        }
    }
    let order = |r: &Region| {
        (
            !r.contains_permutations,
            r.twist,
            r.degree_spectrum.clone(),
            r.thickness_spectrum.clone(),
        )
    };
    regions.sort_by_key(order);
    degenerate.sort_by_key(order);
    Ok(RegionTable {
        n,
        total_spaces: spaces.len() as u64,
        spaces_examined: records.len() as u64,
        regions,
        degenerate,
    })
}
