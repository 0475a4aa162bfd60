//! Ising spin glasses `H_I(s) = −Σ_{i<j} J_ij s_i s_j` with integer couplings.
//!
//! Spins are 0-based in memory and 1-based in the JSON instance format.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest spin count the exhaustive routines accept.
pub const MAX_ENUMERATION_SPINS: usize = 24;

/// Below this size enumeration stays on the calling thread.
const PARALLEL_THRESHOLD: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinConfig(Vec<i8>);

impl SpinConfig {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        if let Some(bad) = spins.iter().find(|&&s| s != 1 && s != -1) {
            return Err(Error::InvalidArgument(format!(
                "spin values must be ±1, found {bad}"
            )));
        }
        Ok(Self(spins))
    }

    pub fn all_up(len: usize) -> Self {
        Self(vec![1; len])
    }

    /// Bit `i` of `mask` set means spin `i` is up.
    pub fn from_mask(mask: u64, len: usize) -> Self {
        Self(
            (0..len)
                .map(|i| if mask >> i & 1 == 1 { 1 } else { -1 })
                .collect(),
        )
    }

    pub fn to_mask(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == 1)
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn spins(&self) -> &[i8] {
        &self.0
    }

    pub fn magnetization(&self) -> i64 {
        self.0.iter().map(|&s| s as i64).sum()
    }

    pub fn flipped(&self) -> Self {
        Self(self.0.iter().map(|&s| -s).collect())
    }
}

/// Symmetric integer couplings over `num_spins` spins. Zero couplings are
/// never stored, so every stored pair is an edge of the coupling graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinGlass {
    num_spins: usize,
    couplings: BTreeMap<(usize, usize), i64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    num_spins: usize,
    couplings: Vec<(usize, usize, i64)>,
}

impl SpinGlass {
    pub fn new(num_spins: usize) -> Result<Self> {
        if num_spins == 0 {
            return Err(Error::InvalidInstance("num_spins must be positive".into()));
        }
        Ok(Self {
            num_spins,
            couplings: BTreeMap::new(),
        })
    }

    /// Builds a glass from 0-based `(i, j, J)` triples.
    pub fn from_couplings(
        num_spins: usize,
        couplings: impl IntoIterator<Item = (usize, usize, i64)>,
    ) -> Result<Self> {
        let mut g = Self::new(num_spins)?;
        for (i, j, v) in couplings {
            g.set_coupling(i, j, v)?;
        }
        Ok(g)
    }

    /// Builds a glass from a dense row-major matrix; only the upper triangle
    /// is read.
    pub fn from_upper_triangle(rows: &[Vec<i64>]) -> Result<Self> {
        let k = rows.len();
        let mut g = Self::new(k)?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(Error::DimensionMismatch {
                    expected: k,
                    found: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate().skip(i + 1) {
                g.set_coupling(i, j, v)?;
            }
        }
        Ok(g)
    }

    pub fn set_coupling(&mut self, i: usize, j: usize, value: i64) -> Result<()> {
        if i == j {
            return Err(Error::InvalidInstance(format!(
                "self-coupling on spin {}",
                i + 1
            )));
        }
        let key = (i.min(j), i.max(j));
        if key.1 >= self.num_spins {
            return Err(Error::InvalidInstance(format!(
                "spin index {} out of range 1..={}",
                key.1 + 1,
                self.num_spins
            )));
        }
        if value == 0 {
            self.couplings.remove(&key);
        } else {
            self.couplings.insert(key, value);
        }
        Ok(())
    }

    pub fn num_spins(&self) -> usize {
        self.num_spins
    }

    pub fn coupling(&self, i: usize, j: usize) -> i64 {
        self.couplings
            .get(&(i.min(j), i.max(j)))
            .copied()
            .unwrap_or(0)
    }

    /// Nonzero couplings as canonical `(i, j, J)` with `i < j`.
    pub fn couplings(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.couplings.iter().map(|(&(i, j), &v)| (i, j, v))
    }

    pub fn num_couplings(&self) -> usize {
        self.couplings.len()
    }

    /// Full symmetric coupling matrix with zero diagonal.
    pub fn coupling_matrix(&self) -> Vec<Vec<i64>> {
        let k = self.num_spins;
        let mut m = vec![vec![0; k]; k];
        for (i, j, v) in self.couplings() {
            m[i][j] = v;
            m[j][i] = v;
        }
        m
    }

    pub fn degree(&self, spin: usize) -> usize {
        self.couplings()
            .filter(|&(i, j, _)| i == spin || j == spin)
            .count()
    }

    pub fn max_degree(&self) -> usize {
        let mut deg = vec![0usize; self.num_spins];
        for (i, j, _) in self.couplings() {
            deg[i] += 1;
            deg[j] += 1;
        }
        deg.into_iter().max().unwrap_or(0)
    }

    pub fn max_abs_coupling(&self) -> i64 {
        self.couplings().map(|(_, _, v)| v.abs()).max().unwrap_or(0)
    }

    /// `Σ_{i<j} J_ij`
    pub fn coupling_sum(&self) -> i64 {
        self.couplings().map(|(_, _, v)| v).sum()
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.num_spins];
        for (i, j, _) in self.couplings() {
            adj[i].push(j);
            adj[j].push(i);
        }
        adj
    }

    pub fn energy(&self, s: &SpinConfig) -> Result<i64> {
        ising_energy(self, s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text)?;
        let mut g = Self::new(file.num_spins)?;
        let mut seen = BTreeSet::new();
        for (i, j, v) in file.couplings {
            if i == 0 || j == 0 || i >= j || j > file.num_spins {
                return Err(Error::InvalidInstance(format!(
                    "coupling [{i}, {j}] must satisfy 1 <= i < j <= {}",
                    file.num_spins
                )));
            }
            if !seen.insert((i, j)) {
                return Err(Error::InvalidInstance(format!(
                    "duplicate coupling [{i}, {j}]"
                )));
            }
            g.set_coupling(i - 1, j - 1, v)?;
        }
        Ok(g)
    }

    pub fn to_json(&self) -> String {
        let file = InstanceFile {
            num_spins: self.num_spins,
            couplings: self
                .couplings()
                .map(|(i, j, v)| (i + 1, j + 1, v))
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("instance serialization is infallible")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }
}

/// The six-spin test glass shipped as `instances/exJ.json`.
pub fn six_spin_reference() -> SpinGlass {
    SpinGlass::from_json(include_str!("../instances/exJ.json")).expect("bundled instance is valid")
}

/// `H_I(s) = −Σ_{i<j} J_ij s_i s_j`
pub fn ising_energy(g: &SpinGlass, s: &SpinConfig) -> Result<i64> {
    if s.len() != g.num_spins {
        return Err(Error::DimensionMismatch {
            expected: g.num_spins,
            found: s.len(),
        });
    }
    let sp = s.spins();
    Ok(-g
        .couplings()
        .map(|(i, j, v)| v * (sp[i] as i64) * (sp[j] as i64))
        .sum::<i64>())
}

fn enumeration_guard(g: &SpinGlass) -> Result<()> {
    if g.num_spins > MAX_ENUMERATION_SPINS {
        return Err(Error::SizeGuard {
            what: "num_spins",
            limit: MAX_ENUMERATION_SPINS,
            got: g.num_spins,
        });
    }
    Ok(())
}

fn edge_list(g: &SpinGlass) -> Vec<(u32, u32, i64)> {
    g.couplings()
        .map(|(i, j, v)| (i as u32, j as u32, v))
        .collect()
}

#[inline]
fn mask_energy(edges: &[(u32, u32, i64)], mask: u64) -> i64 {
    // s_i s_j = +1 exactly when the two bits agree
    edges
        .iter()
        .map(|&(i, j, v)| {
            if (mask >> i ^ mask >> j) & 1 == 0 {
                -v
            } else {
                v
            }
        })
        .sum()
}

/// Visits every configuration mask in `0..2^K`, split into contiguous chunks
/// so the fold result is independent of scheduling.
fn fold_configurations<T, F, R>(g: &SpinGlass, init: T, fold: F, reduce: R) -> T
where
    T: Send + Clone + Sync,
    F: Fn(T, u64, i64) -> T + Sync,
    R: Fn(T, T) -> T + Sync,
{
    let edges = edge_list(g);
    let total = 1u64 << g.num_spins;
    let chunk_bits = if g.num_spins > PARALLEL_THRESHOLD {
        g.num_spins - 8
    } else {
        g.num_spins
    };
    let chunk = 1u64 << chunk_bits;
    let run = |lo: u64| {
        (lo..lo + chunk).fold(init.clone(), |acc, m| fold(acc, m, mask_energy(&edges, m)))
    };
    if chunk == total {
        return run(0);
    }
    let parts: Vec<T> = (0..total / chunk)
        .into_par_iter()
        .map(|c| run(c * chunk))
        .collect();
    parts.into_iter().reduce(&reduce).unwrap_or(init)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundStates {
    pub energy: i64,
    /// Every minimizing configuration, ordered by configuration mask.
    pub minimizers: Vec<SpinConfig>,
}

pub fn brute_force_ground(g: &SpinGlass) -> Result<GroundStates> {
    enumeration_guard(g)?;
    let (energy, masks) = fold_configurations(
        g,
        (i64::MAX, Vec::new()),
        |(best, mut ms), m, e| {
            if e < best {
                (e, vec![m])
            } else {
                if e == best {
                    ms.push(m);
                }
                (best, ms)
            }
        },
        |(ea, mut ma), (eb, mb)| match ea.cmp(&eb) {
            std::cmp::Ordering::Less => (ea, ma),
            std::cmp::Ordering::Greater => (eb, mb),
            std::cmp::Ordering::Equal => {
                ma.extend(mb);
                (ea, ma)
            }
        },
    );
    let k = g.num_spins;
    Ok(GroundStates {
        energy,
        minimizers: masks
            .into_iter()
            .map(|m| SpinConfig::from_mask(m, k))
            .collect(),
    })
}

/// Distinct values of `H_I` over all `2^K` configurations, ascending.
pub fn spectrum(g: &SpinGlass) -> Result<Vec<i64>> {
    enumeration_guard(g)?;
    let set = fold_configurations(
        g,
        BTreeSet::new(),
        |mut s, _, e| {
            s.insert(e);
            s
        },
        |mut a, b| {
            a.extend(b);
            a
        },
    );
    Ok(set.into_iter().collect())
}

/// Random glass on the open `L×L×2` grid with nearest-neighbour couplings
/// drawn uniformly from `{−1, 0, +1}`.
///
/// Site `(x, y, z)` has 0-based index `z·L² + y·L + x`.
pub fn generate_lattice_glass(size: usize, seed: u64) -> Result<SpinGlass> {
    if size == 0 {
        return Err(Error::InvalidArgument(
            "lattice size must be at least 1".into(),
        ));
    }
    let l = size;
    let idx = |x: usize, y: usize, z: usize| z * l * l + y * l + x;
    let mut g = SpinGlass::new(2 * l * l)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for z in 0..2 {
        for y in 0..l {
            for x in 0..l {
                let here = idx(x, y, z);
                let mut forward = Vec::with_capacity(3);
                if x + 1 < l {
                    forward.push(idx(x + 1, y, z));
                }
                if y + 1 < l {
                    forward.push(idx(x, y + 1, z));
                }
                if z == 0 {
                    forward.push(idx(x, y, 1));
                }
                for there in forward {
                    let v: i64 = rng.random_range(-1..=1);
                    g.set_coupling(here, there, v)?;
                }
            }
        }
    }
    Ok(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    fn other(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

/// Two-colouring of the nonzero-coupling graph; each component's lowest
/// spin is labelled [`Parity::Even`].
pub fn bipartition(g: &SpinGlass) -> Result<Vec<Parity>> {
    let adj = g.neighbors();
    let mut label: Vec<Option<Parity>> = vec![None; g.num_spins];
    for root in 0..g.num_spins {
        if label[root].is_some() {
            continue;
        }
        label[root] = Some(Parity::Even);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let lu = label[u].expect("queued spins are labelled");
            for &v in &adj[u] {
                match label[v] {
                    None => {
                        label[v] = Some(lu.other());
                        queue.push_back(v);
                    }
                    Some(lv) if lv == lu => return Err(Error::NotBipartite { spin: v + 1 }),
                    Some(_) => {}
                }
            }
        }
    }
    Ok(label
        .into_iter()
        .map(|l| l.expect("all spins visited"))
        .collect())
}

/// Flips every spin labelled [`Parity::Even`]. On a bipartite glass this maps
/// `H_I(s)` to `−H_I(s)`.
pub fn flip_even_class(s: &SpinConfig, labels: &[Parity]) -> SpinConfig {
    SpinConfig(
        s.spins()
            .iter()
            .zip(labels)
            .map(|(&v, &p)| if p == Parity::Even { -v } else { v })
            .collect(),
    )
}

/// Doubled glass whose ground states all have zero magnetization.
///
/// Spin `t` becomes the pair `(2t, 2t+1)` locked antiparallel by a coupling
/// of `−C`; original couplings are copied with sign `+J` within the α and β
/// copies and `−J` across them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetInstance {
    pub doubled: SpinGlass,
    /// `C = 4·d_max·J_max`
    pub pair_coupling: i64,
    pub energy_scale: i64,
    /// `−K·C`
    pub energy_offset: i64,
    /// Original spin `t` → `(index of tα, index of tβ)`.
    pub pairing: Vec<(usize, usize)>,
}

impl GadgetInstance {
    pub fn original_spins(&self) -> usize {
        self.pairing.len()
    }

    /// `s` on the α copies, `−s` on the β copies.
    pub fn lift(&self, s: &SpinConfig) -> Result<SpinConfig> {
        if s.len() != self.pairing.len() {
            return Err(Error::DimensionMismatch {
                expected: self.pairing.len(),
                found: s.len(),
            });
        }
        let mut out = vec![0i8; self.doubled.num_spins()];
        for (&(a, b), &v) in self.pairing.iter().zip(s.spins()) {
            out[a] = v;
            out[b] = -v;
        }
        Ok(SpinConfig(out))
    }

    /// Reads the original configuration off the α copies.
    pub fn project(&self, doubled: &SpinConfig) -> Result<SpinConfig> {
        if doubled.len() != self.doubled.num_spins() {
            return Err(Error::DimensionMismatch {
                expected: self.doubled.num_spins(),
                found: doubled.len(),
            });
        }
        Ok(SpinConfig(
            self.pairing
                .iter()
                .map(|&(a, _)| doubled.spins()[a])
                .collect(),
        ))
    }

    /// `E' = 4E − K·C`
    pub fn mapped_energy(&self, original: i64) -> i64 {
        self.energy_scale * original + self.energy_offset
    }
}

pub fn apply_gadget(g: &SpinGlass) -> Result<GadgetInstance> {
    if g.num_couplings() == 0 {
        return Err(Error::EmptyCouplings);
    }
    let k = g.num_spins();
    let c = 4 * g.max_degree() as i64 * g.max_abs_coupling();
    let pairing: Vec<(usize, usize)> = (0..k).map(|t| (2 * t, 2 * t + 1)).collect();
    let mut doubled = SpinGlass::new(2 * k)?;
    for &(a, b) in &pairing {
        doubled.set_coupling(a, b, -c)?;
    }
    for (i, j, v) in g.couplings() {
        let (ia, ib) = pairing[i];
        let (ja, jb) = pairing[j];
        doubled.set_coupling(ia, ja, v)?;
        doubled.set_coupling(ib, jb, v)?;
        doubled.set_coupling(ia, jb, -v)?;
        doubled.set_coupling(ib, ja, -v)?;
    }
    Ok(GadgetInstance {
        doubled,
        pair_coupling: c,
        energy_scale: 4,
        energy_offset: -(k as i64) * c,
        pairing,
    })
}
