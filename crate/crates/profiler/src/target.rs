//! Targets: built-in benchmark algorithms and external commands.

use std::collections::BTreeMap;
use std::fmt;
use std::hint::black_box;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{ProfileError, Result};

/// Named integer arguments of one execution.
pub type Args = BTreeMap<String, i64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableSpec {
    pub name: String,
    /// Smallest value the target accepts.
    pub min_value: i64,
}

impl VariableSpec {
    pub fn new(name: impl Into<String>, min_value: i64) -> Self {
        VariableSpec {
            name: name.into(),
            min_value,
        }
    }
}

/// The four built-in algorithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Builtin {
    /// Lookups in a sorted array of `x` elements: `O(log x)`.
    BinarySearch,
    /// Merge sort of `x` elements: `O(x log x)`.
    MergeSort,
    /// Lookups in `x` sorted elements plus a selection pass over `b`
    /// unsorted ones: `O(b + log x)`.
    SearchSort,
    /// `m` passes over `x` elements plus a `log log b` probe: `O(mx + log log b)`.
    Custom,
}

/// Lookups per binary-search repetition.
const SEARCH_BATCH: usize = 16384;
/// Arrays sorted per merge-sort repetition.
const SORT_BATCH: usize = 8;
/// Lookups per search-sort repetition.
const SEARCH_SORT_LOOKUPS: usize = 8192;
/// Selection passes over `b` per search-sort repetition.
const SEARCH_SORT_PASSES: usize = 256;
/// Repetitions of the custom kernel.
const CUSTOM_BATCH: usize = 128;

impl Builtin {
    pub const ALL: [Builtin; 4] = [
        Builtin::BinarySearch,
        Builtin::MergeSort,
        Builtin::SearchSort,
        Builtin::Custom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::BinarySearch => "binary-search",
            Builtin::MergeSort => "merge-sort",
            Builtin::SearchSort => "search-sort",
            Builtin::Custom => "custom",
        }
    }

    pub fn variables(self) -> Vec<VariableSpec> {
        match self {
            Builtin::BinarySearch | Builtin::MergeSort => vec![VariableSpec::new("x", 0)],
            Builtin::SearchSort => vec![VariableSpec::new("x", 1), VariableSpec::new("b", 0)],
            Builtin::Custom => vec![
                VariableSpec::new("m", 0),
                VariableSpec::new("x", 0),
                VariableSpec::new("b", 2),
            ],
        }
    }

    /// Grid used when the caller does not supply one (7 points, 3 segments).
    pub fn default_grid(self, variable: &str) -> Option<Vec<i64>> {
        use crate::sweep::{geometric_grid, linspace_grid};
        let grid = match (self, variable) {
            (Builtin::BinarySearch, "x") => geometric_grid(4, 4096, 7),
            (Builtin::MergeSort, "x") => geometric_grid(64, 65536, 7),
            (Builtin::SearchSort, "x") => geometric_grid(4, 4096, 7),
            (Builtin::SearchSort, "b") => linspace_grid(5, 3005, 7),
            (Builtin::Custom, "m") => linspace_grid(1, 31, 7),
            (Builtin::Custom, "x") => linspace_grid(50, 350, 7),
            (Builtin::Custom, "b") => geometric_grid(4, 65536, 7),
            _ => return None,
        };
        grid.ok()
    }

    /// Generates the input for one repetition; only [`Workload::run`] is timed.
    pub fn prepare(self, args: &Args, rng: &mut ChaCha8Rng) -> Result<Workload> {
        let get = |name: &str| -> Result<usize> {
            let v = *args
                .get(name)
                .ok_or_else(|| ProfileError::MissingFixed(name.to_string()))?;
            usize::try_from(v).map_err(|_| {
                ProfileError::InvalidConfig(format!("{name} = {v} must be non-negative"))
            })
        };
        let workload = match self {
            Builtin::BinarySearch => {
                let x = get("x")?;
                let haystack = sorted_values(rng, x);
                let keys = (0..SEARCH_BATCH).map(|_| rng.random()).collect();
                Workload::Search { haystack, keys }
            }
            Builtin::MergeSort => {
                let x = get("x")?;
                let arrays = (0..SORT_BATCH)
                    .map(|_| (0..x).map(|_| rng.random()).collect())
                    .collect();
                Workload::Sort { arrays }
            }
            Builtin::SearchSort => {
                let x = get("x")?.max(1);
                let b = get("b")?;
                let haystack = sorted_values(rng, x);
                let keys = (0..SEARCH_SORT_LOOKUPS).map(|_| rng.random()).collect();
                let selection = (0..b).map(|_| rng.random()).collect();
                Workload::SearchSelect {
                    haystack,
                    keys,
                    selection,
                }
            }
            Builtin::Custom => {
                let m = get("m")?;
                let x = get("x")?;
                let b = get("b")?.max(2);
                let data = (0..x).map(|_| rng.random()).collect();
                Workload::Custom { m, data, b: b as u64 }
            }
        };
        Ok(workload)
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Builtin {
    type Err = ProfileError;

    fn from_str(s: &str) -> Result<Self> {
        Builtin::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| ProfileError::InvalidConfig(format!("unknown builtin target `{s}`")))
    }
}

fn sorted_values(rng: &mut ChaCha8Rng, n: usize) -> Vec<u32> {
    let mut v: Vec<u32> = (0..n).map(|_| rng.random()).collect();
    v.sort_unstable();
    v
}

/// Prepared input of a builtin target.
#[derive(Debug)]
pub enum Workload {
    Search {
        haystack: Vec<u32>,
        keys: Vec<u32>,
    },
    Sort {
        arrays: Vec<Vec<u32>>,
    },
    SearchSelect {
        haystack: Vec<u32>,
        keys: Vec<u32>,
        selection: Vec<u32>,
    },
    Custom {
        m: usize,
        data: Vec<u32>,
        b: u64,
    },
}

impl Workload {
    /// Executes the algorithm; the return value only defeats dead-code elimination.
    pub fn run(&mut self) -> u64 {
        match self {
            Workload::Search { haystack, keys } => lookups(haystack, keys),
            Workload::Sort { arrays } => {
                let mut scratch = Vec::new();
                let mut acc = 0u64;
                for a in arrays.iter_mut() {
                    merge_sort(a, &mut scratch);
                    acc = acc.wrapping_add(a.first().copied().unwrap_or(0) as u64);
                }
                acc
            }
            Workload::SearchSelect {
                haystack,
                keys,
                selection,
            } => {
                let mut acc = lookups(haystack, keys);
                for _ in 0..SEARCH_SORT_PASSES {
                    acc = acc.wrapping_add(select_smallest(black_box(selection)) as u64);
                }
                acc
            }
            Workload::Custom { m, data, b } => {
                let mut acc = 0u64;
                for _ in 0..CUSTOM_BATCH {
                    for round in 0..*m {
                        for &v in data.iter() {
                            acc = black_box(acc.rotate_left(5) ^ (v as u64 + round as u64));
                        }
                    }
                    acc = acc.wrapping_add(loglog_probe(black_box(*b)));
                }
                acc
            }
        }
    }
}

fn lookups(haystack: &[u32], keys: &[u32]) -> u64 {
    keys.iter().fold(0u64, |acc, k| {
        let pos = match black_box(haystack).binary_search(k) {
            Ok(i) | Err(i) => i,
        };
        acc.wrapping_add(pos as u64)
    })
}

/// Single pass keeping the running minimum and how often it changed.
fn select_smallest(values: &[u32]) -> u32 {
    let mut best = u32::MAX;
    let mut changes = 0u32;
    for &v in values {
        let v = black_box(v);
        if v < best {
            best = v;
            changes += 1;
        }
    }
    best ^ changes
}

/// Binary search over the bit positions of `b`: `O(log log b)` steps.
fn loglog_probe(b: u64) -> u64 {
    let bits = 64 - b.leading_zeros() as u64;
    let (mut lo, mut hi) = (0u64, bits);
    let mut steps = 0;
    while lo < hi {
        let mid = (lo + hi) / 2;
        if (b >> mid) > 1 {
            lo = mid + 1;
        } else {
            hi = mid;
        }
        steps += 1;
    }
    steps + lo
}

/// Top-down merge sort with a reusable buffer.
pub fn merge_sort(v: &mut [u32], scratch: &mut Vec<u32>) {
    if v.len() <= 1 {
        return;
    }
    scratch.clear();
    scratch.extend_from_slice(v);
    sort_into(scratch, v);
}

/// Sorts `src` into `dst` (both hold the same elements on entry).
fn sort_into(src: &mut [u32], dst: &mut [u32]) {
    let n = dst.len();
    if n <= 1 {
        return;
    }
    let mid = n / 2;
    {
        let (sl, sr) = src.split_at_mut(mid);
        let (dl, dr) = dst.split_at_mut(mid);
        sort_into(dl, sl);
        sort_into(dr, sr);
    }
    let (left, right) = src.split_at(mid);
    let (mut i, mut j) = (0, 0);
    for slot in dst.iter_mut() {
        if j >= right.len() || (i < left.len() && left[i] <= right[j]) {
            *slot = left[i];
            i += 1;
        } else {
            *slot = right[j];
            j += 1;
        }
    }
}

/// What gets executed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TargetKind {
    Builtin(Builtin),
    /// Program and leading arguments; `--var NAME=VALUE` tokens are appended.
    External(Vec<String>),
    /// A formula evaluated in place of a real execution.
    Synthetic(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetSpec {
    pub name: String,
    pub kind: TargetKind,
    pub variables: Vec<VariableSpec>,
}

impl TargetSpec {
    pub fn builtin(b: Builtin) -> Self {
        TargetSpec {
            name: b.name().to_string(),
            kind: TargetKind::Builtin(b),
            variables: b.variables(),
        }
    }

    pub fn external(command: Vec<String>, variables: Vec<VariableSpec>) -> Result<Self> {
        if command.is_empty() {
            return Err(ProfileError::InvalidConfig("empty external command".into()));
        }
        let spec = TargetSpec {
            name: command.join(" "),
            kind: TargetKind::External(command),
            variables,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// At least one variable, names unique.
    pub fn validate(&self) -> Result<()> {
        if self.variables.is_empty() {
            return Err(ProfileError::InvalidConfig(format!(
                "target `{}` declares no variables",
                self.name
            )));
        }
        for (i, v) in self.variables.iter().enumerate() {
            if self.variables[..i].iter().any(|w| w.name == v.name) {
                return Err(ProfileError::InvalidConfig(format!(
                    "duplicate variable `{}`",
                    v.name
                )));
            }
        }
        Ok(())
    }

    pub fn arity(&self) -> usize {
        self.variables.len()
    }

    pub fn variable(&self, name: &str) -> Option<&VariableSpec> {
        self.variables.iter().find(|v| v.name == name)
    }
}
