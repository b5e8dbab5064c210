//! Ball sizes in the Cayley graph of a matrix group and growth rates.
//!
//! Elements are keyed by their exact entries (no projectivization). The
//! generating set is closed under inverses, so the Cayley graph is undirected
//! and the sphere of radius `k+1` is the set of neighbours of sphere `k` that
//! lie in neither sphere `k` nor sphere `k−1`. Only two spheres are kept.

use std::collections::{BTreeMap, HashSet};
use std::hash::Hash;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{McgError, Result};
use crate::exact::{f64_to_rational, ExactRational};
use crate::farey_model::MappingClass;

pub const DEFAULT_ELEMENT_CAP: u64 = 10_000_000;

/// Environment variable naming the ball cache directory.
pub const CACHE_DIR_ENV: &str = "MCG_CACHE_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    /// First radius whose ball was not completed.
    pub radius: usize,
    pub cap: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BallTable {
    pub generators: Vec<MappingClass>,
    /// `sizes[k]` is the number of elements of word length at most `k`.
    pub sizes: Vec<u64>,
    /// `sizes_less_than[n]` counts elements of word length less than `n`,
    /// so it is `sizes[n−1]` shifted by one with a leading 0.
    pub sizes_less_than: Vec<u64>,
    pub truncated: Option<Truncation>,
}

impl BallTable {
    fn new(generators: Vec<MappingClass>, sizes: Vec<u64>, truncated: Option<Truncation>) -> Self {
        let sizes_less_than = std::iter::once(0).chain(sizes.iter().copied()).collect();
        BallTable {
            generators,
            sizes,
            sizes_less_than,
            truncated,
        }
    }

    /// Largest radius with a complete count.
    pub fn radius(&self) -> usize {
        self.sizes.len() - 1
    }

    /// Elements of length less than `n`; `None` beyond the table.
    pub fn less_than(&self, n: usize) -> Option<u64> {
        self.sizes_less_than.get(n).copied()
    }
}

/// Appends missing inverses, keeping first occurrences and dropping repeats.
pub fn symmetrize(gens: &[MappingClass]) -> Vec<MappingClass> {
    let mut out: Vec<MappingClass> = Vec::new();
    for g in gens {
        for x in [g.clone(), g.inverse()] {
            if !out.contains(&x) {
                out.push(x);
            }
        }
    }
    out
}

type Small = [i128; 4];

fn small_of(m: &MappingClass) -> Option<Small> {
    use num_traits::ToPrimitive;
    let [a, b, c, d] = m.entries();
    Some([a.to_i128()?, b.to_i128()?, c.to_i128()?, d.to_i128()?])
}

fn small_mul(x: &Small, y: &Small) -> Option<Small> {
    let dot = |p: i128, q: i128, r: i128, s: i128| p.checked_mul(q)?.checked_add(r.checked_mul(s)?);
    Some([
        dot(x[0], y[0], x[1], y[2])?,
        dot(x[0], y[1], x[1], y[3])?,
        dot(x[2], y[0], x[3], y[2])?,
        dot(x[2], y[1], x[3], y[3])?,
    ])
}

enum Sweep {
    Done(Vec<u64>, Option<Truncation>),
    Overflow,
}

/// Sphere-by-sphere search shared by the machine-word and big-integer paths.
fn sweep<K, F>(identity: K, gens: &[K], n: usize, cap: u64, mul: F) -> Sweep
where
    K: Clone + Eq + Hash,
    F: Fn(&K, &K) -> Option<K>,
{
    let mut sizes = vec![1u64];
    let mut previous: HashSet<K> = HashSet::new();
    let mut current: HashSet<K> = HashSet::from([identity]);
    let mut total = 1u64;
    for radius in 1..=n {
        let mut next = HashSet::new();
        for x in &current {
            for g in gens {
                let Some(y) = mul(x, g) else {
                    return Sweep::Overflow;
                };
                if !previous.contains(&y) && !current.contains(&y) {
                    next.insert(y);
                }
            }
            if total + next.len() as u64 > cap {
                return Sweep::Done(sizes, Some(Truncation { radius, cap }));
            }
        }
        total += next.len() as u64;
        sizes.push(total);
        previous = std::mem::replace(&mut current, next);
    }
    Sweep::Done(sizes, None)
}

/// Ball sizes up to radius `n` with the default element cap.
pub fn ball_sizes(gens: &[MappingClass], n: usize) -> Result<BallTable> {
    ball_sizes_capped(gens, n, DEFAULT_ELEMENT_CAP)
}

/// Ball sizes up to radius `n`. When the running total would exceed `cap`
/// the table stops at the last complete radius and records the truncation.
pub fn ball_sizes_capped(gens: &[MappingClass], n: usize, cap: u64) -> Result<BallTable> {
    if gens.is_empty() {
        return Err(McgError::InvalidParameter("generating set is empty".into()));
    }
    let sym = symmetrize(gens);
    let small: Option<Vec<Small>> = sym.iter().map(small_of).collect();
    if let Some(small) = small {
        if let Sweep::Done(sizes, trunc) = sweep([1, 0, 0, 1], &small, n, cap, small_mul) {
            return Ok(BallTable::new(sym, sizes, trunc));
        }
    }
    Ok(ball_sizes_exact(&sym, n, cap))
}

/// Big-integer reference path.
fn ball_sizes_exact(sym: &[MappingClass], n: usize, cap: u64) -> BallTable {
    match sweep(MappingClass::identity(), sym, n, cap, |x, g| Some(x * g)) {
        Sweep::Done(sizes, trunc) => BallTable::new(sym.to_vec(), sizes, trunc),
        Sweep::Overflow => unreachable!("big integers do not overflow"),
    }
}

/// Same counts as [`ball_sizes_capped`] but always with big integers.
pub fn ball_sizes_reference(gens: &[MappingClass], n: usize, cap: u64) -> Result<BallTable> {
    if gens.is_empty() {
        return Err(McgError::InvalidParameter("generating set is empty".into()));
    }
    Ok(ball_sizes_exact(&symmetrize(gens), n, cap))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthEstimate {
    pub table: BallTable,
    /// `ln(sizes[k]) / k` for `k = 1..=radius`.
    pub rates: Vec<f64>,
    /// `ln(sizes[k] / sizes[k−1])` for `k = 1..=radius`.
    pub log_ratios: Vec<f64>,
    pub window: usize,
    /// Mean of the last `window` log-ratios.
    pub extrapolated: f64,
    pub extrapolated_exact: ExactRational,
    /// Mean of the last `window` rates, kept for comparison.
    pub rate_window_mean: f64,
}

/// Growth rate from a ball table.
///
/// `ln(sizes[k])/k` converges like `C/k`, so averaging it over a window
/// inherits that bias. The increments `ln(sizes[k]/sizes[k−1])` remove the
/// constant and converge geometrically for free groups; their window mean
/// is the reported estimate.
pub fn growth_estimate(table: &BallTable, window: usize) -> Result<GrowthEstimate> {
    if window == 0 || table.sizes.len() < window + 2 {
        return Err(McgError::InvalidParameter(format!(
            "window {window} needs at least {} radii, table has {}",
            window + 2,
            table.sizes.len()
        )));
    }
    let ln: Vec<f64> = table.sizes.iter().map(|&s| (s as f64).ln()).collect();
    let rates: Vec<f64> = (1..ln.len()).map(|k| ln[k] / k as f64).collect();
    let log_ratios: Vec<f64> = (1..ln.len()).map(|k| ln[k] - ln[k - 1]).collect();
    let mean = |xs: &[f64]| xs[xs.len() - window..].iter().sum::<f64>() / window as f64;
    let extrapolated = mean(&log_ratios);
    Ok(GrowthEstimate {
        table: table.clone(),
        rate_window_mean: mean(&rates),
        extrapolated_exact: ExactRational(f64_to_rational(extrapolated)),
        extrapolated,
        rates,
        log_ratios,
        window,
    })
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
struct CacheFile {
    entries: BTreeMap<String, CacheEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct CacheEntry {
    sizes: Vec<u64>,
    truncated: Option<Truncation>,
}

/// On-disk store of completed ball tables, one JSON file per directory,
/// keyed by the sorted symmetric generating set.
#[derive(Clone, Debug)]
pub struct BallCache {
    path: PathBuf,
}

impl BallCache {
    pub const FILE_NAME: &'static str = "balls.json";

    pub fn new(dir: impl AsRef<Path>) -> Self {
        BallCache {
            path: dir.as_ref().join(Self::FILE_NAME),
        }
    }

    /// Cache in `$MCG_CACHE_DIR`, if set.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_DIR_ENV).map(Self::new)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    fn key(sym: &[MappingClass]) -> String {
        let mut names: Vec<String> = sym.iter().map(|g| g.to_string()).collect();
        names.sort();
        names.join(";")
    }

    fn load(&self) -> Result<CacheFile> {
        match std::fs::read_to_string(&self.path) {
            Ok(text) => serde_json::from_str(&text)
                .map_err(|e| McgError::Io(format!("corrupt cache {}: {e}", self.path.display()))),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(CacheFile::default()),
            Err(e) => Err(e.into()),
        }
    }

    fn store(&self, file: &CacheFile) -> Result<()> {
        if let Some(dir) = self.path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        let text = serde_json::to_string_pretty(file).expect("serializable");
        let tmp = self.path.with_extension("json.tmp");
        std::fs::write(&tmp, text)?;
        std::fs::rename(&tmp, &self.path)?;
        Ok(())
    }

    /// Ball table through the cache. A stored table is reused when it reaches
    /// radius `n`, or when it was truncated under the same cap.
    /// Otherwise the table is recomputed and stored if it extends the entry.
    pub fn ball_sizes(&self, gens: &[MappingClass], n: usize, cap: u64) -> Result<BallTable> {
        if gens.is_empty() {
            return Err(McgError::InvalidParameter("generating set is empty".into()));
        }
        let sym = symmetrize(gens);
        let key = Self::key(&sym);
        let mut file = self.load()?;
        if let Some(entry) = file.entries.get(&key) {
            let complete = entry.sizes.len() > n;
            let capped = entry.truncated.is_some_and(|t| t.cap == cap);
            if complete {
                return Ok(BallTable::new(sym, entry.sizes[..=n].to_vec(), None));
            }
            if capped {
                return Ok(BallTable::new(sym, entry.sizes.clone(), entry.truncated));
            }
        }
        let table = ball_sizes_capped(&sym, n, cap)?;
        let longer = file
            .entries
            .get(&key)
            .is_none_or(|e| e.sizes.len() < table.sizes.len());
        if longer {
            file.entries.insert(
                key,
                CacheEntry {
                    sizes: table.sizes.clone(),
                    truncated: table.truncated,
                },
            );
            self.store(&file)?;
        }
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: [[i64; 2]; 2]) -> MappingClass {
        MappingClass::from_rows(rows)
    }

    #[test]
    fn sanov_pair_balls() {
        let t = ball_sizes(&[m([[1, 2], [0, 1]]), m([[1, 0], [2, 1]])], 3).unwrap();
        assert_eq!(t.sizes, vec![1, 5, 17, 53]);
        assert_eq!(t.less_than(3), Some(17));
        assert_eq!(t.truncated, None);
    }

    #[test]
    fn cyclic_balls() {
        let t = ball_sizes(&[m([[1, 1], [0, 1]])], 5).unwrap();
        assert_eq!(t.sizes, vec![1, 3, 5, 7, 9, 11]);
    }

    #[test]
    fn cap_truncates() {
        let t = ball_sizes_capped(&[m([[1, 2], [0, 1]]), m([[1, 0], [2, 1]])], 6, 60).unwrap();
        assert_eq!(t.sizes, vec![1, 5, 17, 53]);
        assert_eq!(t.truncated, Some(Truncation { radius: 4, cap: 60 }));
    }

    #[test]
    fn fast_path_matches_reference() {
        let gens = [m([[0, -1], [1, 0]]), m([[1, 1], [0, 1]])];
        assert_eq!(
            ball_sizes(&gens, 8).unwrap().sizes,
            ball_sizes_reference(&gens, 8, DEFAULT_ELEMENT_CAP).unwrap().sizes
        );
    }

    #[test]
    fn estimate_needs_enough_radii() {
        let t = ball_sizes(&[m([[1, 1], [0, 1]])], 3).unwrap();
        assert!(growth_estimate(&t, 3).is_err());
        assert!(growth_estimate(&t, 2).is_ok());
    }
}
