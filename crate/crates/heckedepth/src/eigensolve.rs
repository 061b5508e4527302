//! Extraction of all Z_p-valued Hecke eigensystems on the new cuspidal
//! plus-subspace to a target precision p^M.
//!
//! One exact rational setup per space: the Atkin-Lehner split, a separating
//! operator per sign block with squarefree integer characteristic
//! polynomial, and integral bases. Everything per-prime afterwards runs in
//! Z/p^W at a working precision W = M + vp(disc) + guard, escalated whenever
//! a residual check fails. Eigenvalues are read as pivot ratios of dual
//! pairings, so no rational reduction map is ever inverted mod p.

use crate::linalg::{primitive_int_vec, QMat, Rat};
use crate::modsym::{build_space, new_cuspidal_plus, ModSymSpace, SpaceError, Subspace};
use crate::padic::{hensel_roots_with, vp_int, IntPoly, PadicError, Valuation};
use crate::zmod::{kernel_mod, ZpwCtx};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error)]
pub enum EigenError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error("no separating operator found with squarefree characteristic polynomial")]
    SeparatorNotFound,
    #[error("working precision exceeded the ceiling while extracting eigenvectors")]
    PrecisionExhausted,
    #[error("characteristic polynomial is not integral: denominator {0}")]
    NonIntegralCharpoly(String),
}

/// One p-new eigensystem: Atkin-Lehner sign, the exact a_p, and spherical
/// eigenvalues a_ell as residues mod p^M. Archives serialize these through
/// the decimal-string `Archive` form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eigensystem {
    pub tame: i64,
    pub p: u64,
    pub k: u32,
    pub index: usize,
    pub eps: i8,
    /// a_p = -eps p^((k-2)/2), exact (decimal string in archives).
    pub ap: BigInt,
    /// residues mod p^M, keyed by prime ell not dividing N p
    pub aell: BTreeMap<u64, BigUint>,
    pub precision: u32,
}

/// A sign block excluded because its characteristic polynomial has an
/// irreducible p-adic factor of degree > 1: the complete-splitting
/// assumption (p split in every Hecke field) fails there.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ExcludedBlock {
    pub eps: i8,
    pub degree: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlockDiagnostics {
    pub eps: i8,
    pub dim: usize,
    pub separating_op: String,
    pub disc_valuation: u32,
    pub working_precision: u32,
    pub max_pivot_valuation: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NewspaceParams {
    pub tame: i64,
    pub p: u64,
    pub k: u32,
    pub precision: u32,
    pub cutoff: u64,
}

#[derive(Debug, Clone)]
pub struct Newspace {
    pub params: NewspaceParams,
    pub systems: Vec<Eigensystem>,
    pub excluded: Vec<ExcludedBlock>,
    pub diagnostics: Vec<BlockDiagnostics>,
}

/// Primes ell <= cutoff with ell not dividing n.
pub fn sweep_primes(n: i64, cutoff: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut is_comp = vec![false; (cutoff + 1) as usize];
    for q in 2..=cutoff {
        if !is_comp[q as usize] {
            if n % q as i64 != 0 {
                out.push(q);
            }
            let mut t = q * q;
            while t <= cutoff {
                is_comp[t as usize] = true;
                t += q;
            }
        }
    }
    out
}

/// A separating operator: a small integer combination of Hecke operators
/// whose characteristic polynomial on the block is squarefree.
struct Separator {
    desc: String,
    matrix: QMat,
    charpoly: IntPoly,
    disc_valuation: u32,
}

fn charpoly_int(a: &QMat) -> Result<IntPoly, EigenError> {
    let coeffs = a.charpoly();
    let mut ints = Vec::with_capacity(coeffs.len());
    for c in &coeffs {
        if !c.denom().is_one() {
            return Err(EigenError::NonIntegralCharpoly(c.denom().to_string()));
        }
        ints.push(c.numer().clone());
    }
    Ok(IntPoly::new(ints).expect("monic charpoly of positive degree"))
}

fn find_separator(
    space: &ModSymSpace,
    block: &Subspace,
    p: u64,
    hecke_cache: &mut BTreeMap<u64, QMat>,
) -> Result<Separator, EigenError> {
    let candidates = sweep_primes(space.level, 50);
    let mut singles: Vec<(u64, QMat)> = Vec::new();
    for &ell in candidates.iter().take(6) {
        let full = hecke_cache
            .entry(ell)
            .or_insert_with(|| space.hecke_matrix_full(ell))
            .clone();
        let a = block.restrict(&full).expect("Hecke stability");
        let cp = charpoly_int(&a)?;
        let disc = cp.discriminant();
        if !disc.is_zero() {
            let dv = vp_int(&disc, p).finite().unwrap() as u32;
            return Ok(Separator {
                desc: format!("T_{ell}"),
                matrix: a,
                charpoly: cp,
                disc_valuation: dv,
            });
        }
        singles.push((ell, a));
    }
    // combinations T_a + c T_b, deterministic order
    for i in 0..singles.len() {
        for j in (i + 1)..singles.len() {
            for c in 1i64..=3 {
                let (ea, ma) = &singles[i];
                let (eb, mb) = &singles[j];
                let mut a = ma.clone();
                for r in 0..a.rows {
                    for s in 0..a.cols {
                        let add = mb.at(r, s) * crate::linalg::rat_int(c);
                        *a.at_mut(r, s) += add;
                    }
                }
                let cp = charpoly_int(&a)?;
                let disc = cp.discriminant();
                if !disc.is_zero() {
                    let dv = vp_int(&disc, p).finite().unwrap() as u32;
                    return Ok(Separator {
                        desc: format!("T_{ea} + {c} T_{eb}"),
                        matrix: a,
                        charpoly: cp,
                        disc_valuation: dv,
                    });
                }
            }
        }
    }
    Err(EigenError::SeparatorNotFound)
}

/// Integralized basis: columns scaled primitive, with the p-part of the
/// denominators recorded so precision accounting can see it.
fn integral_basis(b: &QMat, p: u64) -> (Vec<Vec<BigInt>>, u32) {
    let mut cols = Vec::new();
    let mut max_den_val = 0u32;
    for j in 0..b.cols {
        let col: Vec<Rat> = (0..b.rows).map(|i| b.at(i, j).clone()).collect();
        for x in &col {
            if let Valuation::Finite(v) = crate::padic::vp_rat(x, p) {
                if v < 0 {
                    max_den_val = max_den_val.max((-v) as u32);
                }
            }
        }
        cols.push(primitive_int_vec(&col));
    }
    (cols, max_den_val)
}

struct PreparedVector {
    eps: i8,
    /// quotient coordinates mod p^W of the (scaled) eigenvector
    y_res: Vec<BigUint>,
    /// dual pairing of y_res
    y0: Vec<BigUint>,
    pivot: usize,
    pivot_val: u32,
    /// precision lost while solving the eigenvector system
    kern_loss: u32,
    /// separating-root residue, used only for stable labeling
    root: BigUint,
}

pub fn compute_newspace(params: &NewspaceParams) -> Result<Newspace, EigenError> {
    compute_newspace_cached(params, None)
}

/// As `compute_newspace`, with per-prime Hecke pairing columns served from
/// and written to a disk cache when one is supplied.
pub fn compute_newspace_cached(
    params: &NewspaceParams,
    cache: Option<&crate::cache::Cache>,
) -> Result<Newspace, EigenError> {
    let space = build_space(params.tame, params.p, params.k)?;
    let sub = new_cuspidal_plus(&space)?;
    let p = params.p;
    let m_target = params.precision;
    if sub.dim() == 0 {
        return Ok(Newspace {
            params: params.clone(),
            systems: Vec::new(),
            excluded: Vec::new(),
            diagnostics: Vec::new(),
        });
    }

    let w_full = space.atkin_lehner_matrix_full(p);
    let mut blocks: Vec<(i8, Subspace)> = Vec::new();
    for eps in [1i8, -1] {
        let mut shifted = w_full.clone();
        for i in 0..shifted.rows {
            let e = shifted.at_mut(i, i);
            *e -= crate::linalg::rat_int(eps as i64);
        }
        let eigenspace = sub.intersect_kernel(&shifted).integralized();
        blocks.push((eps, eigenspace));
    }
    debug_assert_eq!(blocks.iter().map(|(_, s)| s.dim()).sum::<usize>(), sub.dim());

    let mut hecke_cache: BTreeMap<u64, QMat> = BTreeMap::new();
    let mut excluded = Vec::new();
    let mut diagnostics = Vec::new();
    let mut prepared: Vec<PreparedVector> = Vec::new();

    struct BlockSetup {
        eps: i8,
        sep: Separator,
        basis_int: Vec<Vec<BigInt>>,
        den_val: u32,
    }
    let mut setups = Vec::new();
    for (eps, block) in &blocks {
        if block.dim() == 0 {
            continue;
        }
        let sep = find_separator(&space, block, p, &mut hecke_cache)?;
        let (basis_int, bden) = integral_basis(&block.basis, p);
        let aden = {
            // p-part of the separating matrix denominators
            let mut v = 0u32;
            for x in &sep.matrix.data {
                if let Valuation::Finite(t) = crate::padic::vp_rat(x, p) {
                    if t < 0 {
                        v = v.max((-t) as u32);
                    }
                }
            }
            v
        };
        let den_val = bden.max(aden);
        setups.push(BlockSetup { eps: *eps, sep, basis_int, den_val });
    }

    // dual pairing of basis generators, exact once
    let p0: Vec<Vec<BigInt>> = space.dual_pairing_of_basis();

    let mut guard = 4u32;
    'escalate: loop {
        prepared.clear();
        excluded.clear();
        diagnostics.clear();
        let max_disc = setups.iter().map(|s| s.sep.disc_valuation).max().unwrap_or(0);
        let max_den = setups.iter().map(|s| s.den_val).max().unwrap_or(0);
        let w = m_target + max_disc + 2 * max_den + guard;
        let ctx = ZpwCtx::new(p, w);

        for setup in &setups {
            let s = setup.sep.matrix.rows;
            let roots =
                hensel_roots_with(&setup.sep.charpoly, p, w, guard.max(4), 1024)?;
            if roots.len() < s {
                excluded.push(ExcludedBlock { eps: setup.eps, degree: s - roots.len() });
            }
            // clear denominators of the separating matrix
            let mut den = BigInt::one();
            for x in &setup.sep.matrix.data {
                den = den.lcm(x.denom());
            }
            let den_u = ctx.from_bigint(&den);
            let a_int: Vec<Vec<BigUint>> = (0..s)
                .map(|i| {
                    (0..s)
                        .map(|j| {
                            let v = setup.sep.matrix.at(i, j) * crate::linalg::Rat::new(den.clone(), BigInt::one());
                            debug_assert!(v.denom().is_one());
                            ctx.from_bigint(v.numer())
                        })
                        .collect()
                })
                .collect();
            let mut max_pivot = 0u32;
            for root in &roots {
                // (A den - den lambda) w = 0 mod p^W
                let dl = ctx.mul(&den_u, &(root % &ctx.modulus));
                let mut mat = a_int.clone();
                for i in 0..s {
                    mat[i][i] = ctx.sub(&mat[i][i], &dl);
                }
                let kern = kernel_mod(&ctx, &mat);
                if kern.deficient || kern.basis.len() != 1 {
                    guard = guard * 2;
                    if guard > 1024 {
                        return Err(EigenError::PrecisionExhausted);
                    }
                    continue 'escalate;
                }
                let wvec = &kern.basis[0];
                // quotient coordinates: y = B w
                let d_amb = space.dim();
                let mut y_res = vec![BigUint::zero(); d_amb];
                for (j, col) in setup.basis_int.iter().enumerate() {
                    if wvec[j].is_zero() {
                        continue;
                    }
                    for i in 0..d_amb {
                        if col[i].is_zero() {
                            continue;
                        }
                        let t = ctx.mul(&ctx.from_bigint(&col[i]), &wvec[j]);
                        y_res[i] = ctx.add(&y_res[i], &t);
                    }
                }
                // dual pairing
                let mut y0 = vec![BigUint::zero(); d_amb];
                for (j, yj) in y_res.iter().enumerate() {
                    if yj.is_zero() {
                        continue;
                    }
                    for (r, y0r) in y0.iter_mut().enumerate() {
                        if !p0[j][r].is_zero() {
                            let t = ctx.mul(&ctx.from_bigint(&p0[j][r]), yj);
                            *y0r = ctx.add(y0r, &t);
                        }
                    }
                }
                let (pivot, pivot_val) = match y0
                    .iter()
                    .enumerate()
                    .filter_map(|(i, v)| ctx.valuation(v).map(|t| (i, t)))
                    .min_by_key(|&(i, t)| (t, i))
                {
                    Some(x) => x,
                    None => {
                        guard *= 2;
                        if guard > 1024 {
                            return Err(EigenError::PrecisionExhausted);
                        }
                        continue 'escalate;
                    }
                };
                if pivot_val + m_target + 2 > w {
                    guard *= 2;
                    if guard > 1024 {
                        return Err(EigenError::PrecisionExhausted);
                    }
                    continue 'escalate;
                }
                max_pivot = max_pivot.max(pivot_val);
                prepared.push(PreparedVector {
                    eps: setup.eps,
                    y_res,
                    y0,
                    pivot,
                    pivot_val,
                    kern_loss: kern.loss,
                    root: root.clone(),
                });
            }
            diagnostics.push(BlockDiagnostics {
                eps: setup.eps,
                dim: s,
                separating_op: setup.sep.desc.clone(),
                disc_valuation: setup.sep.disc_valuation,
                working_precision: w,
                max_pivot_valuation: max_pivot,
            });
        }

        // The per-prime sweep runs at a lower precision than eigenvector
        // extraction: correctness only needs a_ell mod p^M plus headroom for
        // pivot valuations and solve losses, and with the smaller exponent
        // the modulus usually fits a single machine word. Residual failures
        // escalate the shared guard.
        let primes = sweep_primes(space.level, params.cutoff);
        let max_t0 = prepared.iter().map(|pv| pv.pivot_val).max().unwrap_or(0);
        let max_loss = prepared.iter().map(|pv| pv.kern_loss).max().unwrap_or(0);
        let w_sweep = (m_target + max_t0 + max_loss + guard).min(w);
        let col_key = |ell: u64| {
            format!(
                "sweepcols_N{}_p{}_k{}_l{}_w{}",
                params.tame, p, params.k, ell, w_sweep
            )
        };
        let results: Vec<Result<Vec<(u64, BigUint)>, ()>> =
            match crate::zmod::ZpwU64::new(p, w_sweep) {
                Some(sctx) => {
                    let vecs: Vec<(Vec<u64>, Vec<u64>, usize, u32)> = prepared
                        .iter()
                        .map(|pv| {
                            (
                                pv.y_res.iter().map(|x| sctx.from_biguint(x)).collect(),
                                pv.y0.iter().map(|x| sctx.from_biguint(x)).collect(),
                                pv.pivot,
                                pv.pivot_val,
                            )
                        })
                        .collect();
                    primes
                        .par_iter()
                        .map(|&ell| {
                            let key = col_key(ell);
                            let cols: Vec<Vec<u64>> = match cache.and_then(|c| c.get(&key)) {
                                Some(c) => c,
                                None => {
                                    let c = space.hecke_pairing_columns_u64(&sctx, ell);
                                    if let Some(ca) = cache {
                                        ca.put(&key, &c);
                                    }
                                    c
                                }
                            };
                            sweep_prime_u64(&sctx, &cols, ell, &vecs, m_target)
                        })
                        .collect()
                }
                None => {
                    let sctx = ZpwCtx::new(p, w_sweep);
                    let vecs: Vec<(Vec<BigUint>, Vec<BigUint>, usize, u32)> = prepared
                        .iter()
                        .map(|pv| {
                            (
                                pv.y_res.iter().map(|x| x % &sctx.modulus).collect(),
                                pv.y0.iter().map(|x| x % &sctx.modulus).collect(),
                                pv.pivot,
                                pv.pivot_val,
                            )
                        })
                        .collect();
                    primes
                        .par_iter()
                        .map(|&ell| {
                            let key = col_key(ell);
                            let cols: Vec<Vec<BigUint>> = match cache
                                .and_then(|c| c.get::<Vec<Vec<String>>>(&key))
                            {
                                Some(ser) => ser
                                    .iter()
                                    .map(|col| {
                                        col.iter()
                                            .map(|x| x.parse().expect("cached residue"))
                                            .collect()
                                    })
                                    .collect(),
                                None => {
                                    let c = space.hecke_pairing_columns_mod(&sctx, ell);
                                    if let Some(ca) = cache {
                                        let ser: Vec<Vec<String>> = c
                                            .iter()
                                            .map(|col| col.iter().map(|x| x.to_string()).collect())
                                            .collect();
                                        ca.put(&key, &ser);
                                    }
                                    c
                                }
                            };
                            sweep_prime_big(&sctx, &cols, ell, &vecs, m_target)
                        })
                        .collect()
                }
            };

        let mut per_vector: Vec<BTreeMap<u64, BigUint>> =
            vec![BTreeMap::new(); prepared.len()];
        let mut failed = false;
        for res in results {
            match res {
                Ok(list) => {
                    for (i, (ell, a)) in list.into_iter().enumerate() {
                        per_vector[i].insert(ell, a);
                    }
                }
                Err(()) => {
                    failed = true;
                    break;
                }
            }
        }
        if failed {
            guard *= 2;
            if guard > 1024 {
                return Err(EigenError::PrecisionExhausted);
            }
            continue 'escalate;
        }

        // assemble and label
        let pm = BigUint::from(p).pow(m_target);
        let ell0 = *primes.first().expect("cutoff >= 2 gives at least one prime");
        let half = (params.k - 2) / 2;
        let apow = BigInt::from(p).pow(half);
        let systems: Vec<Eigensystem> = prepared
            .iter()
            .zip(per_vector)
            .map(|(pv, amap)| {
                let aell: BTreeMap<u64, BigUint> =
                    amap.into_iter().map(|(ell, a)| (ell, a % &pm)).collect();
                Eigensystem {
                    tame: params.tame,
                    p,
                    k: params.k,
                    index: 0,
                    eps: pv.eps,
                    ap: if pv.eps > 0 { -apow.clone() } else { apow.clone() },
                    aell,
                    precision: m_target,
                }
            })
            .collect();
        let roots: Vec<BigUint> = prepared.iter().map(|pv| pv.root.clone()).collect();
        let mut order: Vec<usize> = (0..systems.len()).collect();
        order.sort_by(|&a, &b| {
            let sa = &systems[a];
            let sb = &systems[b];
            (-(sa.eps as i64), sa.aell.get(&ell0), &roots[a])
                .cmp(&(-(sb.eps as i64), sb.aell.get(&ell0), &roots[b]))
        });
        let systems: Vec<Eigensystem> = order
            .iter()
            .enumerate()
            .map(|(idx, &i)| {
                let mut s = systems[i].clone();
                s.index = idx;
                s
            })
            .collect();

        return Ok(Newspace {
            params: params.clone(),
            systems,
            excluded,
            diagnostics,
        });
    }
}

/// One prime of the sweep in single-word arithmetic. Returns a_ell per
/// prepared eigenvector, or Err on any residual failure.
fn sweep_prime_u64(
    ctx: &crate::zmod::ZpwU64,
    cols: &[Vec<u64>],
    ell: u64,
    vecs: &[(Vec<u64>, Vec<u64>, usize, u32)],
    m_target: u32,
) -> Result<Vec<(u64, BigUint)>, ()> {
    let d_amb = cols.first().map_or(0, |c| c.len());
    let mut out = Vec::with_capacity(vecs.len());
    for (y_res, y0, pivot, t0) in vecs {
        let mut y_u = vec![0u64; d_amb];
        for (j, &yj) in y_res.iter().enumerate() {
            if yj == 0 {
                continue;
            }
            for (r, &c) in cols[j].iter().enumerate() {
                if c != 0 {
                    y_u[r] = ctx.add(y_u[r], ctx.mul(c, yj));
                }
            }
        }
        let t0 = *t0;
        let num = y_u[*pivot];
        if let Some(nv) = ctx.valuation(num) {
            if nv < t0 {
                return Err(());
            }
        }
        let pt = ctx.pow_p(t0);
        let unit0 = y0[*pivot] / pt;
        let unit0_inv = ctx.inv(unit0).ok_or(())?;
        let a_ell = ctx.mul(num / pt, unit0_inv);
        let need = (m_target + t0).min(ctx.w);
        let pm = ctx.pow_p(need);
        for (&u, &v) in y_u.iter().zip(y0) {
            if u % pm != ctx.mul(a_ell, v) % pm {
                return Err(());
            }
        }
        out.push((ell, BigUint::from(a_ell)));
    }
    Ok(out)
}

/// BigUint fallback of the sweep for moduli past 2^63.
fn sweep_prime_big(
    ctx: &ZpwCtx,
    cols: &[Vec<BigUint>],
    ell: u64,
    vecs: &[(Vec<BigUint>, Vec<BigUint>, usize, u32)],
    m_target: u32,
) -> Result<Vec<(u64, BigUint)>, ()> {
    let d_amb = cols.first().map_or(0, |c| c.len());
    let mut out = Vec::with_capacity(vecs.len());
    for (y_res, y0, pivot, t0) in vecs {
        let mut y_u = vec![BigUint::zero(); d_amb];
        for (j, yj) in y_res.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            for (r, c) in cols[j].iter().enumerate() {
                if !c.is_zero() {
                    let t = ctx.mul(c, yj);
                    y_u[r] = ctx.add(&y_u[r], &t);
                }
            }
        }
        let t0 = *t0;
        let num = &y_u[*pivot];
        if let Some(nv) = ctx.valuation(num) {
            if nv < t0 {
                return Err(());
            }
        }
        let unit0 = ctx.div_pow_p(&y0[*pivot], t0);
        let unit0_inv = ctx.inv(&unit0).ok_or(())?;
        let scaled = ctx.div_pow_p(num, t0);
        let a_ell = ctx.mul(&scaled, &unit0_inv);
        let need = (m_target + t0).min(ctx.w);
        let pm = BigUint::from(ctx.p).pow(need);
        for (u, v) in y_u.iter().zip(y0) {
            let lhs = u % &pm;
            let rhs = ctx.mul(&a_ell, v) % &pm;
            if lhs != rhs {
                return Err(());
            }
        }
        out.push((ell, a_ell));
    }
    Ok(out)
}

/// Exact restriction of T_ell to a subspace, for consistency oracles.
pub fn exact_block_hecke(space: &ModSymSpace, block: &Subspace, ell: u64) -> QMat {
    block.restrict(&space.hecke_matrix_full(ell)).expect("Hecke stability")
}

/// Archive format: versioned JSON with decimal strings for exact integers.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Archive {
    pub format_version: u32,
    pub tame: i64,
    pub p: u64,
    pub k: u32,
    pub precision: u32,
    pub cutoff: u64,
    pub excluded: Vec<ExcludedBlock>,
    pub separating: Vec<String>,
    pub forms: Vec<ArchiveForm>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArchiveForm {
    pub index: usize,
    pub eps: i8,
    pub ap: String,
    pub aell: Vec<(u64, String)>,
}

pub const ARCHIVE_FORMAT_VERSION: u32 = 1;

impl Archive {
    pub fn from_newspace(ns: &Newspace) -> Archive {
        Archive {
            format_version: ARCHIVE_FORMAT_VERSION,
            tame: ns.params.tame,
            p: ns.params.p,
            k: ns.params.k,
            precision: ns.params.precision,
            cutoff: ns.params.cutoff,
            excluded: ns.excluded.clone(),
            separating: ns.diagnostics.iter().map(|d| format!("eps={}: {}", d.eps, d.separating_op)).collect(),
            forms: ns
                .systems
                .iter()
                .map(|s| ArchiveForm {
                    index: s.index,
                    eps: s.eps,
                    ap: s.ap.to_string(),
                    aell: s.aell.iter().map(|(l, a)| (*l, a.to_string())).collect(),
                })
                .collect(),
        }
    }

    pub fn to_systems(&self) -> Vec<Eigensystem> {
        self.forms
            .iter()
            .map(|f| Eigensystem {
                tame: self.tame,
                p: self.p,
                k: self.k,
                index: f.index,
                eps: f.eps,
                ap: f.ap.parse().expect("archive ap is a decimal integer"),
                aell: f
                    .aell
                    .iter()
                    .map(|(l, a)| (*l, a.parse().expect("archive residue")))
                    .collect(),
                precision: self.precision,
            })
            .collect()
    }
}
