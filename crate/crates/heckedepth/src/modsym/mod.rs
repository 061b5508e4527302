//! Weight-k modular symbols for Gamma_0(n) with exact rational arithmetic:
//! Hecke operators, the star involution, the boundary map, Atkin-Lehner at p
//! and degeneracy maps, yielding the new cuspidal plus-subspace whose
//! eigensystems the rest of the crate consumes.

pub mod action;
pub mod heilbronn;
pub mod p1;
pub mod presentation;

use crate::linalg::{QMat, Rat};
use crate::zmod::ZpwCtx;
use action::{substitution_table_mod, FormalSymbol, Mat2};
use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;
use num_traits::{One, Zero};
use p1::{lift_to_sl2z, Cusp, CuspClasses, P1List};
use presentation::{gen_index, gen_split, Presentation};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SpaceError {
    #[error("unsupported weight {0}: weights are even and at least 4")]
    UnsupportedWeight(u32),
    #[error("invalid level parameters: gcd(N, p) must be 1 and N squarefree, got N={n}, p={p}")]
    BadLevel { n: i64, p: u64 },
}

/// The ambient space of weight-k Manin symbols for Gamma_0(level).
#[derive(Debug, Clone)]
pub struct ModSymSpace {
    pub level: i64,
    pub k: u32,
    pub m: usize,
    pub p1: P1List,
    pub pres: Presentation,
    /// SL_2(Z) lift per P^1 point, cached.
    lifts: Vec<Mat2>,
}

impl ModSymSpace {
    pub fn build(level: i64, k: u32) -> Result<Self, SpaceError> {
        if k < 4 || k % 2 != 0 {
            return Err(SpaceError::UnsupportedWeight(k));
        }
        let m = (k - 2) as usize;
        let p1 = P1List::new(level);
        let pres = Presentation::build(&p1, m);
        let lifts = p1.reps.iter().map(|&(u, v)| lift_to_sl2z(u, v, level)).collect();
        Ok(ModSymSpace { level, k, m, p1, pres, lifts })
    }

    /// Number of Manin generators before relations: (k-1) [SL_2(Z) : Gamma_0].
    pub fn generator_count(&self) -> usize {
        self.pres.n_gens
    }

    pub fn dim(&self) -> usize {
        self.pres.dim
    }

    fn basis_gen(&self, j: usize) -> (usize, usize) {
        gen_split(self.m, self.pres.basis_gens[j])
    }

    /// Quotient coordinates of the class of a formal symbol.
    pub fn formal_to_quotient(&self, sym: &FormalSymbol) -> Vec<Rat> {
        let mut acc = vec![BigInt::zero(); self.pres.n_gens];
        for (poly, (c, d), sign) in action::symbol_to_manin_terms(sym) {
            let pt = self
                .p1
                .lookup(c, d)
                .expect("bottom rows of unimodular matrices are valid P^1 points");
            for (j, coeff) in poly.iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                let g = gen_index(self.m, pt, j);
                if sign > 0 {
                    acc[g] += coeff;
                } else {
                    acc[g] -= coeff;
                }
            }
        }
        let live = self.pres.fold_terms(acc.iter().enumerate().map(|(g, c)| (g, c)));
        self.pres.reduce_live_vec(&live)
    }

    /// Matrix (dim x dim) of an operator defined by its action on the basis
    /// generators, given as columns in quotient coordinates.
    fn matrix_from_columns(&self, cols: Vec<Vec<Rat>>) -> QMat {
        let d = self.dim();
        let mut m = QMat::zero(d, d);
        for (j, col) in cols.iter().enumerate() {
            for i in 0..d {
                *m.at_mut(i, j) = col[i].clone();
            }
        }
        m
    }

    /// The star involution [P, (u:v)] -> (-1)^i [P, (-u:v)].
    pub fn star_matrix(&self) -> QMat {
        let cols = (0..self.dim())
            .map(|j| {
                let (pt, i) = self.basis_gen(j);
                let (u, v) = self.p1.reps[pt];
                let pt2 = self.p1.lookup(-u, v).expect("star preserves P^1");
                let mut col = self.pres.reduce_gen(gen_index(self.m, pt2, i));
                if i % 2 == 1 {
                    for x in &mut col {
                        *x = -x.clone();
                    }
                }
                col
            })
            .collect();
        self.matrix_from_columns(cols)
    }

    /// Boundary map to the weight-k cusp space: rows indexed by Gamma_0
    /// classes of cusps discovered on the fly. The class of [X^i Y^(m-i), g]
    /// maps to [i = m] e(g oo) - [i = 0] e(g 0).
    pub fn boundary_matrix(&self) -> QMat {
        let mut classes = CuspClasses::new(self.level);
        let d = self.dim();
        let mut entries: Vec<(usize, usize, i64)> = Vec::new();
        for j in 0..d {
            let (pt, i) = self.basis_gen(j);
            let g = self.lifts[pt];
            if i == self.m {
                let c = classes.class_of(Cusp::new(g[0], g[2]));
                entries.push((c, j, 1));
            }
            if i == 0 {
                let c = classes.class_of(Cusp::new(g[1], g[3]));
                entries.push((c, j, -1));
            }
        }
        let mut mat = QMat::zero(classes.reps.len(), d);
        for (r, c, v) in entries {
            *mat.at_mut(r, c) += Ratio::from_integer(BigInt::from(v));
        }
        mat
    }

    /// Exact T_ell for ell coprime to the level, via the Merel family of
    /// determinant-ell matrices acting on Manin symbols.
    pub fn hecke_matrix_full(&self, ell: u64) -> QMat {
        assert!(self.level % ell as i64 != 0, "use u_p_matrix at primes dividing the level");
        let mats = heilbronn::merel_matrices(ell);
        let d = self.dim();
        let mut cols: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); self.pres.n_gens]; d];
        for h in &mats {
            let table = action::substitution_table(h, self.m);
            for j in 0..d {
                let (pt, i) = self.basis_gen(j);
                let (u, v) = self.p1.reps[pt];
                let u2 = u * h[0] + v * h[2];
                let v2 = u * h[1] + v * h[3];
                let pt2 = self
                    .p1
                    .lookup(u2, v2)
                    .expect("det ell is a unit mod the level, so P^1 maps to P^1");
                for (jj, coeff) in table[i].iter().enumerate() {
                    if !coeff.is_zero() {
                        cols[j][gen_index(self.m, pt2, jj)] += coeff;
                    }
                }
            }
        }
        let qcols = cols
            .into_iter()
            .map(|acc| {
                let live = self.pres.fold_terms(acc.iter().enumerate().map(|(g, c)| (g, c)));
                self.pres.reduce_live_vec(&live)
            })
            .collect();
        self.matrix_from_columns(qcols)
    }

    /// U_p for p dividing the level exactly: the coset sum over
    /// [[1, j], [0, p]], j = 0..p-1, converted back to Manin coordinates.
    pub fn u_p_matrix(&self, p: u64) -> QMat {
        assert!(self.level % p as i64 == 0);
        let d = self.dim();
        let cols = (0..d)
            .map(|j| {
                let (pt, i) = self.basis_gen(j);
                let sym = FormalSymbol::of_generator(i, self.m, &self.lifts[pt]);
                let mut col = vec![Rat::zero(); d];
                for a in 0..p as i64 {
                    let img = sym.act(&[1, a, 0, p as i64]);
                    for (x, y) in col.iter_mut().zip(self.formal_to_quotient(&img)) {
                        *x += y;
                    }
                }
                col
            })
            .collect();
        self.matrix_from_columns(cols)
    }

    /// Atkin-Lehner involution at p (p dividing the level exactly),
    /// normalized by p^((k-2)/2) so that it squares to the identity.
    pub fn atkin_lehner_matrix_full(&self, p: u64) -> QMat {
        let p_i = p as i64;
        assert!(self.level % p_i == 0 && (self.level / p_i) % p_i != 0);
        let nprime = self.level / p_i;
        // [[p x, y], [-level, p]] with p x + nprime y = 1 has determinant p
        let (x0, y0) = {
            let mut x = 0i64;
            while (1 - p_i * x) % nprime != 0 {
                x += 1;
            }
            (x, (1 - p_i * x) / nprime)
        };
        let w: Mat2 = [p_i * x0, y0, -self.level, p_i];
        debug_assert_eq!(w[0] * w[3] - w[1] * w[2], p_i);
        let scale = Ratio::new(BigInt::one(), BigInt::from(p).pow((self.k - 2) / 2));
        let d = self.dim();
        let cols = (0..d)
            .map(|j| {
                let (pt, i) = self.basis_gen(j);
                let sym = FormalSymbol::of_generator(i, self.m, &self.lifts[pt]);
                let img = sym.act(&w);
                let mut col = self.formal_to_quotient(&img);
                for x in &mut col {
                    *x *= &scale;
                }
                col
            })
            .collect();
        self.matrix_from_columns(cols)
    }

    /// Degeneracy map to the space of level level/q: the map induced by the
    /// identity when `twist` is false, by z -> qz when `twist` is true.
    /// Returns a (dim target) x (dim self) matrix.
    pub fn degeneracy_matrix(&self, target: &ModSymSpace, q: i64, twist: bool) -> QMat {
        assert_eq!(self.level % q, 0);
        assert_eq!(target.level, self.level / q);
        assert_eq!(target.k, self.k);
        let cols: Vec<Vec<Rat>> = (0..self.dim())
            .map(|j| {
                let (pt, i) = self.basis_gen(j);
                if !twist {
                    let (u, v) = self.p1.reps[pt];
                    let pt2 = target.p1.lookup(u, v).expect("reduction stays valid");
                    target.pres.reduce_gen(gen_index(self.m, pt2, i))
                } else {
                    let sym = FormalSymbol::of_generator(i, self.m, &self.lifts[pt]);
                    let img = sym.act(&[q, 0, 0, 1]);
                    target.formal_to_quotient(&img)
                }
            })
            .collect();
        let dt = target.dim();
        let mut m = QMat::zero(dt, self.dim());
        for (j, col) in cols.iter().enumerate() {
            for i in 0..dt {
                *m.at_mut(i, j) = col[i].clone();
            }
        }
        m
    }

    /// Integral pairing matrix of the basis generators against the dual
    /// functionals: column j is the dual pairing of basis generator j.
    pub fn dual_pairing_of_basis(&self) -> Vec<Vec<BigInt>> {
        let one = BigInt::one();
        (0..self.dim())
            .map(|j| {
                let g = self.pres.basis_gens[j];
                let live = self.pres.fold_terms([(g, &one)]);
                self.pres.pair_dual(&live)
            })
            .collect()
    }

    /// Columns (one per basis generator) of the dual pairing of T_ell images,
    /// computed mod p^W. Column j is Phi(T_ell e_(g_j)) in Z/p^W.
    pub fn hecke_pairing_columns_mod(&self, ctx: &ZpwCtx, ell: u64) -> Vec<Vec<BigUint>> {
        assert!(self.level % ell as i64 != 0);
        let mats = heilbronn::merel_matrices(ell);
        let d = self.dim();
        let n_live = self.pres.n_live();
        let mut acc: Vec<Vec<BigUint>> = vec![vec![BigUint::zero(); n_live]; d];
        for h in &mats {
            let table = substitution_table_mod(ctx, h, self.m);
            for j in 0..d {
                let (pt, i) = self.basis_gen(j);
                let (u, v) = self.p1.reps[pt];
                let pt2 = self.p1.lookup(u * h[0] + v * h[2], u * h[1] + v * h[3]).unwrap();
                for (jj, coeff) in table[i].iter().enumerate() {
                    if coeff.is_zero() {
                        continue;
                    }
                    if let Some((li, s)) = self.pres.live_of(gen_index(self.m, pt2, jj)) {
                        let e = &mut acc[j][li];
                        *e = if s > 0 { ctx.add(e, coeff) } else { ctx.sub(e, coeff) };
                    }
                }
            }
        }
        // pair against the dual functionals, reduced mod p^W
        let dual_mod: Vec<Vec<BigUint>> = self
            .pres
            .dual
            .iter()
            .map(|row| row.iter().map(|c| ctx.from_bigint(c)).collect())
            .collect();
        acc.iter()
            .map(|col| {
                dual_mod
                    .iter()
                    .map(|phi| {
                        let mut s = BigUint::zero();
                        for (a, b) in phi.iter().zip(col) {
                            if !a.is_zero() && !b.is_zero() {
                                s += a * b;
                            }
                        }
                        s % &ctx.modulus
                    })
                    .collect()
            })
            .collect()
    }

    /// Single-word variant of `hecke_pairing_columns_mod`, for moduli below
    /// 2^63. This is the hot loop of the whole computation.
    pub fn hecke_pairing_columns_u64(&self, ctx: &crate::zmod::ZpwU64, ell: u64) -> Vec<Vec<u64>> {
        assert!(self.level % ell as i64 != 0);
        let mats = heilbronn::merel_matrices(ell);
        let d = self.dim();
        let n_live = self.pres.n_live();
        // per-basis-generator accumulators over live roots
        let mut acc: Vec<Vec<u64>> = vec![vec![0u64; n_live]; d];
        // generator-level routing precomputed once: (point, i) per basis gen
        let gens: Vec<(usize, usize)> = (0..d).map(|j| self.basis_gen(j)).collect();
        for h in &mats {
            let table = action::substitution_table_u64(ctx, h, self.m);
            // image points per P^1 point used by basis generators
            let mut pt_image: Vec<Option<usize>> = vec![None; self.p1.len()];
            for &(pt, _) in &gens {
                if pt_image[pt].is_none() {
                    let (u, v) = self.p1.reps[pt];
                    pt_image[pt] =
                        Some(self.p1.lookup(u * h[0] + v * h[2], u * h[1] + v * h[3]).unwrap());
                }
            }
            for (j, &(pt, i)) in gens.iter().enumerate() {
                let pt2 = pt_image[pt].unwrap();
                let row = &table[i];
                let accj = &mut acc[j];
                for (jj, &coeff) in row.iter().enumerate() {
                    if coeff == 0 {
                        continue;
                    }
                    if let Some((li, s)) = self.pres.live_of(gen_index(self.m, pt2, jj)) {
                        accj[li] = if s > 0 {
                            ctx.add(accj[li], coeff)
                        } else {
                            ctx.sub(accj[li], coeff)
                        };
                    }
                }
            }
        }
        let dual_mod: Vec<Vec<u64>> = self
            .pres
            .dual
            .iter()
            .map(|row| row.iter().map(|c| ctx.from_bigint(c)).collect())
            .collect();
        acc.iter()
            .map(|col| {
                dual_mod
                    .iter()
                    .map(|phi| {
                        let mut s: u64 = 0;
                        for (&a, &b) in phi.iter().zip(col) {
                            if a != 0 && b != 0 {
                                s = ctx.add(s, ctx.mul(a, b));
                            }
                        }
                        s
                    })
                    .collect()
            })
            .collect()
    }
}

/// A subspace of the ambient quotient, spanned by the columns of `basis`.
#[derive(Debug, Clone)]
pub struct Subspace {
    pub basis: QMat,
}

impl Subspace {
    pub fn full(dim: usize) -> Self {
        Subspace { basis: QMat::identity(dim) }
    }

    pub fn dim(&self) -> usize {
        self.basis.cols
    }

    /// Intersect with the kernel of a constraint matrix C (acting on ambient
    /// coordinates).
    pub fn intersect_kernel(&self, c: &QMat) -> Subspace {
        let cb = c.mul(&self.basis);
        let ker = cb.kernel_basis();
        let mut cols = Vec::new();
        for w in ker {
            cols.push(self.basis.mul_vec(&w));
        }
        let d = self.basis.rows;
        let mut basis = QMat::zero(d, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for i in 0..d {
                *basis.at_mut(i, j) = col[i].clone();
            }
        }
        Subspace { basis }
    }

    /// Matrix of an ambient operator restricted to this subspace; None when
    /// the subspace is not stable under it.
    pub fn restrict(&self, op: &QMat) -> Option<QMat> {
        if self.dim() == 0 {
            return Some(QMat::zero(0, 0));
        }
        let img = op.mul(&self.basis);
        self.basis.solve(&img)
    }

    /// The same subspace with every basis column rescaled to a primitive
    /// integer vector. Restrictions computed against this basis stay
    /// compatible with the integer columns used in mod-p^W arithmetic.
    pub fn integralized(&self) -> Subspace {
        let d = self.basis.rows;
        let mut basis = QMat::zero(d, self.basis.cols);
        for j in 0..self.basis.cols {
            let col: Vec<Rat> = (0..d).map(|i| self.basis.at(i, j).clone()).collect();
            let iv = crate::linalg::primitive_int_vec(&col);
            for i in 0..d {
                *basis.at_mut(i, j) = Ratio::from_integer(iv[i].clone());
            }
        }
        Subspace { basis }
    }
}

/// Build the ambient space of level N p in weight k.
pub fn build_space(tame: i64, p: u64, k: u32) -> Result<ModSymSpace, SpaceError> {
    if tame < 1 || tame % p as i64 == 0 || !is_squarefree(tame) {
        return Err(SpaceError::BadLevel { n: tame, p });
    }
    ModSymSpace::build(tame * p as i64, k)
}

fn is_squarefree(n: i64) -> bool {
    let mut n = n;
    let mut q = 2;
    while q * q <= n {
        if n % (q * q) == 0 {
            return false;
        }
        while n % q == 0 {
            n /= q;
        }
        q += 1;
    }
    true
}

fn prime_divisors(mut n: i64) -> Vec<i64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            out.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The new cuspidal plus-subspace: kernel of the boundary map, +1 eigenspace
/// of the star involution, and kernel of both degeneracy maps to level/q for
/// every prime q dividing the level. For tame level 1 this is exactly the
/// p-new subspace.
pub fn new_cuspidal_plus(space: &ModSymSpace) -> Result<Subspace, SpaceError> {
    let mut sub = Subspace::full(space.dim());
    sub = sub.intersect_kernel(&space.boundary_matrix());
    // star - 1
    let mut star = space.star_matrix();
    for i in 0..star.rows {
        let e = star.at_mut(i, i);
        *e -= Rat::one();
    }
    sub = sub.intersect_kernel(&star);
    for q in prime_divisors(space.level) {
        let target = ModSymSpace::build(space.level / q, space.k)?;
        if target.dim() == 0 {
            continue;
        }
        let alpha = space.degeneracy_matrix(&target, q, false);
        let beta = space.degeneracy_matrix(&target, q, true);
        sub = sub.intersect_kernel(&alpha);
        sub = sub.intersect_kernel(&beta);
    }
    Ok(sub)
}
