//! Matrix actions on homogeneous polynomials and on formal modular symbols,
//! and conversion of a general symbol P{alpha, beta} into Manin-symbol
//! coordinates by the continued-fraction trick.
//!
//! Conventions, used consistently everywhere:
//! - a Manin symbol [P, (c:d)] means (P o g^{-1}){g 0, g oo} for any
//!   g in SL_2(Z) with bottom row (c, d);
//! - the right action on generators is [P, x].h = [P o h, x h], where
//!   (P o h)(X, Y) = P(aX + bY, cX + dY) for h = [[a, b], [c, d]];
//! - an integer matrix A with det > 0 acts on symbols by
//!   A . (Q{alpha, beta}) = (Q o adj A){A alpha, A beta}.

use super::p1::Cusp;
use num_bigint::BigInt;
use num_traits::{One, Zero};

pub type Mat2 = [i64; 4]; // [a, b, c, d] = [[a, b], [c, d]]

pub fn mat_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    [
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    ]
}

pub fn mat_det(x: &Mat2) -> i64 {
    x[0] * x[3] - x[1] * x[2]
}

pub fn mat_adj(x: &Mat2) -> Mat2 {
    [x[3], -x[1], -x[2], x[0]]
}

/// Image of the point alpha in P^1(Q) under the Moebius action of A.
pub fn mat_apply_cusp(a: &Mat2, c: &Cusp) -> Cusp {
    Cusp::new(a[0] * c.num + a[1] * c.den, a[2] * c.num + a[3] * c.den)
}

/// Coefficients of (aX + bY)^i (cX + dY)^(m-i) for all i = 0..=m over Z.
/// Row i lists the coefficient of X^j Y^(m-j) at position j.
pub fn substitution_table(h: &Mat2, m: usize) -> Vec<Vec<BigInt>> {
    let [a, b, c, d] = *h;
    let (a, b, c, d) = (BigInt::from(a), BigInt::from(b), BigInt::from(c), BigInt::from(d));
    // powers of aX + bY: pow_ab[i] has degree i
    let mut pow_ab: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    let mut pow_cd: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    for i in 1..=m {
        pow_ab.push(mul_linear(&pow_ab[i - 1], &a, &b));
        pow_cd.push(mul_linear(&pow_cd[i - 1], &c, &d));
    }
    (0..=m).map(|i| convolve(&pow_ab[i], &pow_cd[m - i])).collect()
}

/// Multiply a polynomial (coefficients of X^j Y^(deg-j)) by (aX + bY).
fn mul_linear(p: &[BigInt], a: &BigInt, b: &BigInt) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); p.len() + 1];
    for (j, c) in p.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        out[j + 1] += c * a; // X * X^j Y^(d-j)
        out[j] += c * b;
    }
    out
}

fn convolve(p: &[BigInt], q: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in q.iter().enumerate() {
            if !b.is_zero() {
                out[i + j] += a * b;
            }
        }
    }
    out
}

/// The same substitution table with coefficients in Z/p^W.
pub fn substitution_table_mod(
    ctx: &crate::zmod::ZpwCtx,
    h: &Mat2,
    m: usize,
) -> Vec<Vec<num_bigint::BigUint>> {
    use num_bigint::BigUint;
    let conv_entry = |x: i64| -> BigUint { ctx.from_bigint(&BigInt::from(x)) };
    let (a, b, c, d) = (conv_entry(h[0]), conv_entry(h[1]), conv_entry(h[2]), conv_entry(h[3]));
    let mul_linear_mod = |p: &[BigUint], a: &BigUint, b: &BigUint| -> Vec<BigUint> {
        let mut out = vec![BigUint::zero(); p.len() + 1];
        for (j, cc) in p.iter().enumerate() {
            if cc.is_zero() {
                continue;
            }
            out[j + 1] = ctx.add(&out[j + 1], &ctx.mul(cc, a));
            out[j] = ctx.add(&out[j], &ctx.mul(cc, b));
        }
        out
    };
    let mut pow_ab: Vec<Vec<BigUint>> = vec![vec![ctx.one()]];
    let mut pow_cd: Vec<Vec<BigUint>> = vec![vec![ctx.one()]];
    for i in 1..=m {
        pow_ab.push(mul_linear_mod(&pow_ab[i - 1], &a, &b));
        pow_cd.push(mul_linear_mod(&pow_cd[i - 1], &c, &d));
    }
    (0..=m)
        .map(|i| {
            let p = &pow_ab[i];
            let q = &pow_cd[m - i];
            let mut out = vec![BigUint::zero(); m + 1];
            for (x, aa) in p.iter().enumerate() {
                if aa.is_zero() {
                    continue;
                }
                for (y, bb) in q.iter().enumerate() {
                    if !bb.is_zero() {
                        out[x + y] = ctx.add(&out[x + y], &ctx.mul(aa, bb));
                    }
                }
            }
            out
        })
        .collect()
}

/// Single-word variant of the substitution table for the hot sweep path.
pub fn substitution_table_u64(ctx: &crate::zmod::ZpwU64, h: &Mat2, m: usize) -> Vec<Vec<u64>> {
    let conv = |x: i64| -> u64 { x.rem_euclid(ctx.modulus as i64) as u64 };
    let (a, b, c, d) = (conv(h[0]), conv(h[1]), conv(h[2]), conv(h[3]));
    let mul_linear = |p: &[u64], a: u64, b: u64| -> Vec<u64> {
        let mut out = vec![0u64; p.len() + 1];
        for (j, &cc) in p.iter().enumerate() {
            if cc == 0 {
                continue;
            }
            out[j + 1] = ctx.add(out[j + 1], ctx.mul(cc, a));
            out[j] = ctx.add(out[j], ctx.mul(cc, b));
        }
        out
    };
    let mut pow_ab: Vec<Vec<u64>> = vec![vec![1]];
    let mut pow_cd: Vec<Vec<u64>> = vec![vec![1]];
    for i in 1..=m {
        pow_ab.push(mul_linear(&pow_ab[i - 1], a, b));
        pow_cd.push(mul_linear(&pow_cd[i - 1], c, d));
    }
    (0..=m)
        .map(|i| {
            let p = &pow_ab[i];
            let q = &pow_cd[m - i];
            let mut out = vec![0u64; m + 1];
            for (x, &aa) in p.iter().enumerate() {
                if aa == 0 {
                    continue;
                }
                for (y, &bb) in q.iter().enumerate() {
                    if bb != 0 {
                        out[x + y] = ctx.add(out[x + y], ctx.mul(aa, bb));
                    }
                }
            }
            out
        })
        .collect()
}

/// Apply the substitution X -> aX + bY, Y -> cX + dY to a general
/// homogeneous polynomial of degree m (coefficients of X^j Y^(m-j)).
pub fn poly_substitute(p: &[BigInt], h: &Mat2) -> Vec<BigInt> {
    let m = p.len() - 1;
    let table = substitution_table(h, m);
    let mut out = vec![BigInt::zero(); m + 1];
    for (i, c) in p.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (j, t) in table[i].iter().enumerate() {
            if !t.is_zero() {
                out[j] += c * t;
            }
        }
    }
    out
}

/// A formal modular symbol P{alpha, beta} with exact integer coefficients.
#[derive(Debug, Clone)]
pub struct FormalSymbol {
    /// Homogeneous polynomial of degree m, coefficient of X^j Y^(m-j) at j.
    pub poly: Vec<BigInt>,
    pub alpha: Cusp,
    pub beta: Cusp,
}

impl FormalSymbol {
    /// The symbol of the Manin generator [X^i Y^(m-i), x] for a lift g of x:
    /// (P o g^{-1}){g 0, g oo}. For g in SL_2(Z) the inverse is the adjugate.
    pub fn of_generator(i: usize, m: usize, g: &Mat2) -> FormalSymbol {
        let mut p = vec![BigInt::zero(); m + 1];
        p[i] = BigInt::one();
        let poly = poly_substitute(&p, &mat_adj(g));
        FormalSymbol {
            poly,
            alpha: Cusp::new(g[1], g[3]), // g(0) = b/d
            beta: Cusp::new(g[0], g[2]),  // g(oo) = a/c
        }
    }

    /// A . (Q{alpha, beta}) = (Q o adj A){A alpha, A beta}, det A > 0.
    pub fn act(&self, a: &Mat2) -> FormalSymbol {
        assert!(mat_det(a) > 0);
        FormalSymbol {
            poly: poly_substitute(&self.poly, &mat_adj(a)),
            alpha: mat_apply_cusp(a, &self.alpha),
            beta: mat_apply_cusp(a, &self.beta),
        }
    }
}

/// Convergents of the continued fraction of num/den (den >= 1), as the full
/// sequence from p_{-1}/q_{-1} = 1/0 through p_r/q_r = num/den.
fn convergents(num: i64, den: i64) -> Vec<(i64, i64)> {
    assert!(den >= 1);
    let mut out = vec![(1i64, 0i64)];
    let (mut a, mut b) = (num, den);
    let (mut p0, mut q0) = (1i64, 0i64);
    let (mut p1, mut q1) = (0i64, 1i64); // p_{-2}/q_{-2} bookkeeping
    loop {
        let q = a.div_euclid(b);
        let r = a - q * b;
        let p2 = q * p0 + p1;
        let q2 = q * q0 + q1;
        out.push((p2, q2));
        (p1, q1) = (p0, q0);
        (p0, q0) = (p2, q2);
        if r == 0 {
            break;
        }
        a = b;
        b = r;
    }
    out
}

/// Manin-coordinate terms of the symbol Q{oo, gamma}: a list of
/// (poly coefficients, point (c, d) before normalization) contributions.
/// The caller folds these into its generator indexing.
pub fn path_from_infinity(poly: &[BigInt], gamma: &Cusp) -> Vec<(Vec<BigInt>, (i64, i64))> {
    if gamma.is_infinity() {
        return Vec::new();
    }
    let conv = convergents(gamma.num, gamma.den);
    let mut out = Vec::new();
    // {oo, gamma} = sum over consecutive convergents {p_{j-1}/q_{j-1}, p_j/q_j},
    // each of which is g_j{0, oo} for g_j = [[p_j, e p_{j-1}], [q_j, e q_{j-1}]],
    // e = (-1)^(j-1); the symbol Q{g 0, g oo} is the Manin symbol [Q o g, (c:d)].
    for j in 1..conv.len() {
        let (pj, qj) = conv[j];
        let (pj1, qj1) = conv[j - 1];
        // conv[j] is the (j-1)-th convergent, so the determinant identity
        // p_m q_{m-1} - p_{m-1} q_m = (-1)^(m-1) forces e = (-1)^j here
        let e: i64 = if j % 2 == 1 { -1 } else { 1 };
        let g: Mat2 = [pj, e * pj1, qj, e * qj1];
        debug_assert_eq!(mat_det(&g), 1);
        out.push((poly_substitute(poly, &g), (g[2], g[3])));
    }
    out
}

/// Manin-coordinate terms of a formal symbol Q{alpha, beta}: the difference
/// of the two paths from infinity, as signed contributions.
pub fn symbol_to_manin_terms(sym: &FormalSymbol) -> Vec<(Vec<BigInt>, (i64, i64), i64)> {
    let mut out = Vec::new();
    for (poly, pt) in path_from_infinity(&sym.poly, &sym.beta) {
        out.push((poly, pt, 1));
    }
    for (poly, pt) in path_from_infinity(&sym.poly, &sym.alpha) {
        out.push((poly, pt, -1));
    }
    out
}
