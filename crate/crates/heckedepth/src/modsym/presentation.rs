//! Presentation of the space of weight-k Manin symbols for Gamma_0(n).
//!
//! Generators are pairs (monomial X^i Y^(m-i), point of P^1(Z/n)) with
//! m = k - 2. The two-term relations x + x.sigma = 0 are a signed pairing of
//! generators and are folded combinatorially; the three-term relations
//! x + x.tau + x.tau^2 = 0 spread across monomials and are eliminated by
//! exact rational row reduction.
//!
//! Besides the quotient basis and the reduction map, the presentation keeps
//! an integral basis of the dual space (functionals on the free module
//! vanishing on all relations). Pairing against these functionals is how the
//! fixed-precision Hecke sweep reads eigenvalue ratios without ever dividing
//! by the rational reduction map.

use super::action::{substitution_table, Mat2};
use super::p1::P1List;
use crate::linalg::{primitive_int_vec, QMat, Rat};
use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::Zero;

pub const SIGMA: Mat2 = [0, -1, 1, 0];
pub const TAU: Mat2 = [0, -1, 1, -1];
pub const TAU2: Mat2 = [-1, 1, -1, 0];

/// Quotient presentation of the Manin symbol space.
#[derive(Debug, Clone)]
pub struct Presentation {
    pub m: usize,
    pub n_points: usize,
    pub n_gens: usize,
    /// gen -> (live root index, sign), or None when the class is zero.
    gen_to_live: Vec<Option<(usize, i8)>>,
    /// live root index -> generator index
    pub live_roots: Vec<usize>,
    /// live root index -> class in quotient coordinates (length dim)
    reduce_live: Vec<Vec<Rat>>,
    /// generator indices whose classes form the quotient basis
    pub basis_gens: Vec<usize>,
    pub dim: usize,
    /// integral dual functionals on live-root coordinates, dim rows
    pub dual: Vec<Vec<BigInt>>,
}

pub fn gen_index(m: usize, point: usize, i: usize) -> usize {
    point * (m + 1) + i
}

pub fn gen_split(m: usize, g: usize) -> (usize, usize) {
    (g / (m + 1), g % (m + 1))
}

impl Presentation {
    pub fn build(p1: &P1List, m: usize) -> Presentation {
        assert!(m >= 2 && m % 2 == 0);
        let n_points = p1.len();
        let n_gens = n_points * (m + 1);

        // --- sigma quotient: signed union-find ---
        // parent[g] = (gen, sign): e_g = sign * e_parent
        let mut parent: Vec<(usize, i8)> = (0..n_gens).map(|g| (g, 1)).collect();
        let mut zero = vec![false; n_gens];

        fn find(parent: &mut Vec<(usize, i8)>, g: usize) -> (usize, i8) {
            let (pg, s) = parent[g];
            if pg == g {
                return (g, s);
            }
            let (root, rs) = find(parent, pg);
            parent[g] = (root, s * rs);
            (root, s * rs)
        }

        for pt in 0..n_points {
            let (u, v) = p1.reps[pt];
            // (u, v) . sigma = (v, -u); monomial i -> (-1)^i X^(m-i) Y^i
            let pt2 = p1.lookup(v, -u).expect("sigma preserves P^1");
            for i in 0..=m {
                let g = gen_index(m, pt, i);
                let g2 = gen_index(m, pt2, m - i);
                let sign: i8 = if i % 2 == 0 { 1 } else { -1 };
                // relation e_g + sign * e_g2 = 0, i.e. e_g2 = -sign * e_g
                let (r1, s1) = find(&mut parent, g);
                let (r2, s2) = find(&mut parent, g2);
                if r1 == r2 {
                    // e_g = s1 e_r, e_g2 = s2 e_r: need s2 = -sign * s1
                    if s2 != -sign * s1 {
                        zero[r1] = true;
                    }
                } else {
                    // e_r2 = (-sign * s1 / s2) e_r1
                    parent[r2] = (r1, -sign * s1 * s2);
                }
            }
        }
        // propagate zero flags to roots after all unions
        let mut is_zero_root = vec![false; n_gens];
        for g in 0..n_gens {
            let (r, _) = find(&mut parent, g);
            if zero[g] {
                is_zero_root[r] = true;
            }
        }
        for g in 0..n_gens {
            if zero[g] {
                let (r, _) = find(&mut parent, g);
                is_zero_root[r] = true;
            }
        }

        let mut live_roots = Vec::new();
        let mut live_of_gen: Vec<Option<usize>> = vec![None; n_gens];
        for g in 0..n_gens {
            let (r, _) = find(&mut parent, g);
            if r == g && !is_zero_root[r] {
                live_of_gen[g] = Some(live_roots.len());
                live_roots.push(g);
            }
        }
        let n_live = live_roots.len();
        let gen_to_live: Vec<Option<(usize, i8)>> = (0..n_gens)
            .map(|g| {
                let (r, s) = find(&mut parent, g);
                live_of_gen[r].map(|li| (li, s))
            })
            .collect();

        // --- tau relations over live roots ---
        let tau_table = substitution_table(&TAU, m);
        let tau2_table = substitution_table(&TAU2, m);
        let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(n_gens);
        for pt in 0..n_points {
            let (u, v) = p1.reps[pt];
            let pt_tau = p1.lookup(u * TAU[0] + v * TAU[2], u * TAU[1] + v * TAU[3]).unwrap();
            let pt_tau2 = p1.lookup(u * TAU2[0] + v * TAU2[2], u * TAU2[1] + v * TAU2[3]).unwrap();
            for i in 0..=m {
                let mut row = vec![Rat::zero(); n_live];
                let mut add = |gen: usize, c: &BigInt| {
                    if let Some((li, s)) = gen_to_live[gen] {
                        let signed = if s > 0 { c.clone() } else { -c.clone() };
                        row[li] += Ratio::from_integer(signed);
                    }
                };
                let one = BigInt::from(1);
                add(gen_index(m, pt, i), &one);
                for (j, c) in tau_table[i].iter().enumerate() {
                    if !c.is_zero() {
                        add(gen_index(m, pt_tau, j), c);
                    }
                }
                for (j, c) in tau2_table[i].iter().enumerate() {
                    if !c.is_zero() {
                        add(gen_index(m, pt_tau2, j), c);
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }

        let mut rel = QMat::from_rows(rows);
        let dual_vectors = rel.kernel_basis();
        let pivots = rel.rref();
        let pivot_row_of_col: Vec<Option<usize>> = {
            let mut v = vec![None; n_live];
            for (ri, &c) in pivots.iter().enumerate() {
                v[c] = Some(ri);
            }
            v
        };
        let free_cols: Vec<usize> =
            (0..n_live).filter(|c| pivot_row_of_col[*c].is_none()).collect();
        let dim = free_cols.len();
        let col_to_basis: Vec<Option<usize>> = {
            let mut v = vec![None; n_live];
            for (bi, &c) in free_cols.iter().enumerate() {
                v[c] = Some(bi);
            }
            v
        };

        let mut reduce_live = vec![vec![Rat::zero(); dim]; n_live];
        for c in 0..n_live {
            match (pivot_row_of_col[c], col_to_basis[c]) {
                (None, Some(bi)) => reduce_live[c][bi] = Rat::from_integer(BigInt::from(1)),
                (Some(ri), None) => {
                    // pivot column: e_c = -sum over free columns of rref[ri][f] e_f
                    for (bi, &f) in free_cols.iter().enumerate() {
                        let coeff = rel.at(ri, f);
                        if !coeff.is_zero() {
                            reduce_live[c][bi] = -coeff.clone();
                        }
                    }
                }
                _ => unreachable!(),
            }
        }

        let dual: Vec<Vec<BigInt>> = dual_vectors.iter().map(|v| primitive_int_vec(v)).collect();
        let basis_gens: Vec<usize> = free_cols.iter().map(|&c| live_roots[c]).collect();

        Presentation {
            m,
            n_points,
            n_gens,
            gen_to_live,
            live_roots,
            reduce_live,
            basis_gens,
            dim,
            dual,
        }
    }

    /// (live root index, sign) of a generator's class, None when zero.
    pub fn live_of(&self, gen: usize) -> Option<(usize, i8)> {
        self.gen_to_live[gen]
    }

    pub fn n_live(&self) -> usize {
        self.live_roots.len()
    }

    /// Fold a sparse free vector (generator, coefficient) into live-root
    /// coordinates.
    pub fn fold_terms<'a, I: IntoIterator<Item = (usize, &'a BigInt)>>(
        &self,
        terms: I,
    ) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.n_live()];
        for (gen, c) in terms {
            if let Some((li, s)) = self.gen_to_live[gen] {
                if s > 0 {
                    out[li] += c;
                } else {
                    out[li] -= c;
                }
            }
        }
        out
    }

    /// Quotient coordinates of a live-root vector.
    pub fn reduce_live_vec(&self, v: &[BigInt]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim];
        for (li, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cq = Ratio::from_integer(c.clone());
            for (bi, r) in self.reduce_live[li].iter().enumerate() {
                if !r.is_zero() {
                    out[bi] += r * &cq;
                }
            }
        }
        out
    }

    /// Quotient coordinates of a single generator's class.
    pub fn reduce_gen(&self, gen: usize) -> Vec<Rat> {
        match self.gen_to_live[gen] {
            None => vec![Rat::zero(); self.dim],
            Some((li, s)) => {
                let mut v = self.reduce_live[li].clone();
                if s < 0 {
                    for x in &mut v {
                        *x = -x.clone();
                    }
                }
                v
            }
        }
    }

    /// Pair a live-root vector against the integral dual functionals.
    pub fn pair_dual(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.dual
            .iter()
            .map(|phi| {
                let mut acc = BigInt::zero();
                for (a, b) in phi.iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }
}
