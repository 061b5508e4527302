//! Congruence depth between eigensystems, the depth-partition changepoint
//! table, and the Sturm bound that makes a finite prime sweep a proof.

use crate::eigensolve::Eigensystem;
use crate::linalg::Rat;
use crate::modsym::p1::gamma0_index;
use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CongruenceError {
    #[error("precision mismatch: {0} vs {1}")]
    PrecisionMismatch(u32, u32),
    #[error("eigensystems live at different (N, p, k)")]
    SpaceMismatch,
    #[error("prime {0} missing from stored eigenvalues")]
    MissingPrime(u64),
}

/// The explicit prime cutoff that upgrades a mod-p^m equality of eigenvalue
/// lists to an equality at all spherical primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SturmData {
    pub tame: i64,
    pub p: u64,
    pub k: u32,
    /// N' = (N p) p^2 prod of primes dividing N p
    pub nprime: i64,
    /// [SL_2(Z) : Gamma_0(N' p)]
    pub index: i64,
    /// exact B(k, N') = k I / 12 - (I - 1) / (N' p)
    pub bound_exact: Rat,
    /// floor of the bound
    pub bound: i64,
}

pub fn sturm_bound(tame: i64, p: u64, k: u32) -> SturmData {
    let full = tame * p as i64;
    let mut rad = 1i64;
    let mut n = full;
    let mut q = 2i64;
    while q * q <= n {
        if n % q == 0 {
            rad *= q;
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        rad *= n;
    }
    let nprime = full * (p as i64) * (p as i64) * rad;
    let level = nprime * p as i64;
    let index = gamma0_index(level);
    let bound_exact = Rat::new(BigInt::from(k as i64) * BigInt::from(index), BigInt::from(12))
        - Rat::new(BigInt::from(index - 1), BigInt::from(level));
    let bound = bound_exact.floor().to_integer();
    let bound = i64::try_from(bound).expect("bound fits i64");
    SturmData { tame, p, k, nprime, index, bound_exact, bound }
}

/// Congruence depth: an exact value, or a lower bound when every stored
/// difference vanishes mod p^M (a measurement floor, not a measurement).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Depth {
    Finite(u32),
    AtLeast(u32),
}

impl Depth {
    /// The depth as a number usable in comparisons of the form depth >= n.
    pub fn at_least(&self, n: u32) -> bool {
        match self {
            Depth::Finite(d) => *d >= n,
            Depth::AtLeast(d) => *d >= n,
        }
    }

    pub fn floor_value(&self) -> u32 {
        match self {
            Depth::Finite(d) | Depth::AtLeast(d) => *d,
        }
    }
}

impl std::fmt::Display for Depth {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Depth::Finite(d) => write!(f, "{d}"),
            Depth::AtLeast(d) => write!(f, ">={d}"),
        }
    }
}

/// min over the given primes of v_p(a_ell(e1) - a_ell(e2)), computed in
/// Z/p^M; `AtLeast(M)` when all differences vanish there.
pub fn depth(
    e1: &Eigensystem,
    e2: &Eigensystem,
    primes: &[u64],
) -> Result<Depth, CongruenceError> {
    if e1.precision != e2.precision {
        return Err(CongruenceError::PrecisionMismatch(e1.precision, e2.precision));
    }
    if (e1.tame, e1.p, e1.k) != (e2.tame, e2.p, e2.k) {
        return Err(CongruenceError::SpaceMismatch);
    }
    let p = e1.p;
    let m = e1.precision;
    let modulus = BigUint::from(p).pow(m);
    let mut min_v = m;
    for &ell in primes {
        let a = e1.aell.get(&ell).ok_or(CongruenceError::MissingPrime(ell))?;
        let b = e2.aell.get(&ell).ok_or(CongruenceError::MissingPrime(ell))?;
        let diff = if a >= b { a - b } else { (a + &modulus) - b };
        if diff.is_zero() {
            continue;
        }
        let mut v = 0u32;
        let pb = BigUint::from(p);
        let mut x = diff;
        while (&x % &pb).is_zero() {
            x /= &pb;
            v += 1;
        }
        if v < min_v {
            min_v = v;
            if min_v == 0 {
                break;
            }
        }
    }
    if min_v >= m {
        Ok(Depth::AtLeast(m))
    } else {
        Ok(Depth::Finite(min_v))
    }
}

/// All pairwise depths; entry (i, j) for i < j.
pub fn depth_matrix(
    systems: &[Eigensystem],
    primes: &[u64],
) -> Result<Vec<Vec<Depth>>, CongruenceError> {
    let n = systems.len();
    let mut mat = vec![vec![Depth::AtLeast(0); n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                mat[i][j] = Depth::AtLeast(systems[i].precision);
            } else if j > i {
                mat[i][j] = depth(&systems[i], &systems[j], primes)?;
            } else {
                mat[i][j] = mat[j][i];
            }
        }
    }
    Ok(mat)
}

/// The changepoint table: partitions of the eigensystem labels by
/// congruence mod p^n, at each depth n where the partition strictly refines
/// (n = 1 is always reported).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionTable {
    /// (n, partition at n); classes sorted by smallest member, members sorted
    pub rows: Vec<(u32, Vec<Vec<usize>>)>,
    /// largest finite pairwise depth
    pub max_depth: u32,
    pub precision: u32,
    /// true when some pair is congruent to full stored precision, so the
    /// final all-singletons row is not resolved
    pub saturated: bool,
}

impl PartitionTable {
    pub fn changepoints(&self) -> Vec<u32> {
        self.rows.iter().map(|(n, _)| *n).collect()
    }
}

fn partition_at(depths: &[Vec<Depth>], n: u32) -> Vec<Vec<usize>> {
    let count = depths.len();
    let mut parent: Vec<usize> = (0..count).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for i in 0..count {
        for j in (i + 1)..count {
            if depths[i][j].at_least(n) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut classes: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..count {
        let r = find(&mut parent, i);
        classes.entry(r).or_default().push(i);
    }
    let mut out: Vec<Vec<usize>> = classes.into_values().collect();
    for c in &mut out {
        c.sort();
    }
    out.sort_by_key(|c| c[0]);
    out
}

pub fn changepoint_table(
    systems: &[Eigensystem],
    primes: &[u64],
) -> Result<PartitionTable, CongruenceError> {
    let depths = depth_matrix(systems, primes)?;
    let precision = systems.first().map(|s| s.precision).unwrap_or(1);
    let n_sys = systems.len();
    let mut max_depth = 0u32;
    let mut saturated = false;
    for i in 0..n_sys {
        for j in (i + 1)..n_sys {
            match depths[i][j] {
                Depth::Finite(d) => max_depth = max_depth.max(d),
                Depth::AtLeast(_) => saturated = true,
            }
        }
    }
    let mut rows = Vec::new();
    let mut prev: Option<Vec<Vec<usize>>> = None;
    let top = if saturated { precision } else { max_depth + 1 };
    for n in 1..=top {
        let part = partition_at(&depths, n);
        let is_change = n == 1 || prev.as_ref() != Some(&part);
        if is_change {
            rows.push((n, part.clone()));
        }
        prev = Some(part);
    }
    Ok(PartitionTable { rows, max_depth, precision, saturated })
}

/// Markdown rendering in the two-column depth-table layout, classes shown
/// by caller-supplied labels.
pub fn render_markdown(table: &PartitionTable, label: &dyn Fn(usize) -> String) -> String {
    let mut out = String::new();
    out.push_str("| Depth p^* | classes |\n|---|---|\n");
    for (n, classes) in &table.rows {
        let all_singletons = classes.iter().all(|c| c.len() == 1);
        let body = if all_singletons {
            "all distinct".to_string()
        } else {
            classes
                .iter()
                .map(|c| {
                    let inner =
                        c.iter().map(|&i| label(i)).collect::<Vec<_>>().join(", ");
                    format!("[{inner}]")
                })
                .collect::<Vec<_>>()
                .join(", ")
        };
        out.push_str(&format!("| {n} | {body} |\n"));
    }
    out
}

/// CSV rendering: one row per (changepoint, class).
pub fn render_csv(table: &PartitionTable, label: &dyn Fn(usize) -> String) -> String {
    let mut out = String::from("depth,class\n");
    for (n, classes) in &table.rows {
        for c in classes {
            let inner = c.iter().map(|&i| label(i)).collect::<Vec<_>>().join(" ");
            out.push_str(&format!("{n},{inner}\n"));
        }
    }
    out
}
