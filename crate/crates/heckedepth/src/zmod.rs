//! Fixed-modulus arithmetic in Z/p^W.
//!
//! The Hecke sweep over Sturm-scale primes runs entirely in this ring: one
//! exact rational setup fixes a working precision W, and every subsequent
//! polynomial substitution and matrix product stays in Z/p^W, which keeps
//! coefficient sizes flat instead of letting exact integers grow to
//! thousands of digits.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Shared modulus context for Z/p^W.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZpwCtx {
    pub p: u64,
    pub w: u32,
    pub modulus: BigUint,
}

impl ZpwCtx {
    pub fn new(p: u64, w: u32) -> Self {
        assert!(w >= 1);
        let modulus = BigUint::from(p).pow(w);
        ZpwCtx { p, w, modulus }
    }

    pub fn zero(&self) -> BigUint {
        BigUint::zero()
    }

    pub fn one(&self) -> BigUint {
        BigUint::one()
    }

    pub fn from_u64(&self, x: u64) -> BigUint {
        BigUint::from(x) % &self.modulus
    }

    pub fn from_bigint(&self, x: &BigInt) -> BigUint {
        let m = BigInt::from(self.modulus.clone());
        let r = x.mod_floor(&m);
        r.to_biguint().expect("mod_floor is nonnegative")
    }

    #[inline]
    pub fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        let s = a + b;
        if s >= self.modulus { s - &self.modulus } else { s }
    }

    #[inline]
    pub fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a >= b { a - b } else { a + &self.modulus - b }
    }

    #[inline]
    pub fn neg(&self, a: &BigUint) -> BigUint {
        if a.is_zero() { BigUint::zero() } else { &self.modulus - a }
    }

    #[inline]
    pub fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % &self.modulus
    }

    pub fn mul_u64(&self, a: &BigUint, b: u64) -> BigUint {
        (a * b) % &self.modulus
    }

    /// p-adic valuation of a residue; None for the zero residue
    /// (which only certifies valuation >= W).
    pub fn valuation(&self, a: &BigUint) -> Option<u32> {
        if a.is_zero() {
            return None;
        }
        let p = BigUint::from(self.p);
        let mut v = 0u32;
        let mut x = a.clone();
        while (&x % &p).is_zero() {
            x /= &p;
            v += 1;
        }
        Some(v)
    }

    /// Exact division by p^t. Panics if a is not divisible by p^t.
    pub fn div_pow_p(&self, a: &BigUint, t: u32) -> BigUint {
        if t == 0 {
            return a.clone();
        }
        let pt = BigUint::from(self.p).pow(t);
        let (q, r) = a.div_rem(&pt);
        assert!(r.is_zero(), "div_pow_p: not divisible");
        q
    }

    /// Inverse of a unit mod p^W. None if p divides a.
    pub fn inv(&self, a: &BigUint) -> Option<BigUint> {
        let a = BigInt::from(a.clone());
        let m = BigInt::from(self.modulus.clone());
        let e = a.extended_gcd(&m);
        if !e.gcd.is_one() {
            return None;
        }
        let inv = e.x.mod_floor(&m);
        Some(inv.to_biguint().unwrap())
    }

    /// Truncate a residue mod p^W to a residue mod p^m, m <= W.
    pub fn truncate(&self, a: &BigUint, m: u32) -> BigUint {
        assert!(m <= self.w);
        a % BigUint::from(self.p).pow(m)
    }

    /// Signed representative in (-p^W/2, p^W/2].
    pub fn signed(&self, a: &BigUint) -> BigInt {
        let half = &self.modulus >> 1;
        if a > &half {
            BigInt::from(a.clone()) - BigInt::from(self.modulus.clone())
        } else {
            BigInt::from(a.clone())
        }
    }
}

/// Result of a p-adic kernel computation mod p^W.
pub struct KernelModP {
    /// Kernel vectors, entries mod p^W.
    pub basis: Vec<Vec<BigUint>>,
    /// Sum of pivot valuations: an upper bound on the digits of absolute
    /// precision lost while solving.
    pub loss: u32,
    /// Set when back-substitution hit an equation p^t x = rhs with
    /// vp(rhs) < t; the result is unreliable and W must be escalated.
    pub deficient: bool,
}

/// Kernel of a matrix over Z/p^W by Gaussian elimination with
/// minimal-valuation pivoting. Entries whose valuation exceeds the remaining
/// reliable precision are treated as zero when selecting pivots; this errs
/// on the side of a larger kernel, and callers verify candidates with
/// residual checks.
pub fn kernel_mod(ctx: &ZpwCtx, mat: &[Vec<BigUint>]) -> KernelModP {
    let rows = mat.len();
    let cols = if rows == 0 { 0 } else { mat[0].len() };
    let mut m: Vec<Vec<BigUint>> = mat.to_vec();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    // selection order: (row, col, pivot valuation)
    let mut pivot_seq: Vec<(usize, usize, u32)> = Vec::new();
    let mut loss = 0u32;
    let mut used_rows = vec![false; rows];

    loop {
        // entry of minimal valuation among unused rows / uncleared columns
        let mut best: Option<(usize, usize, u32)> = None;
        for i in 0..rows {
            if used_rows[i] {
                continue;
            }
            for j in 0..cols {
                if pivot_of_col[j].is_some() {
                    continue;
                }
                if let Some(v) = ctx.valuation(&m[i][j]) {
                    if v + loss < ctx.w {
                        match best {
                            Some((_, _, bv)) if bv <= v => {}
                            _ => best = Some((i, j, v)),
                        }
                    }
                }
            }
        }
        let Some((pi, pj, pv)) = best else { break };
        // scale the pivot row by the inverse of the pivot's unit part, so the
        // pivot entry becomes exactly p^pv
        let unit = ctx.div_pow_p(&m[pi][pj], pv);
        let unit_inv = ctx.inv(&unit).expect("unit part is invertible");
        for j in 0..cols {
            m[pi][j] = ctx.mul(&m[pi][j], &unit_inv);
        }
        // clear column pj in every other unused row; vp >= pv holds there
        // because the pivot has globally minimal valuation
        for i in 0..rows {
            if i == pi || used_rows[i] || m[i][pj].is_zero() {
                continue;
            }
            let factor = ctx.div_pow_p(&m[i][pj], pv);
            for j in 0..cols {
                if m[pi][j].is_zero() {
                    continue;
                }
                let sub = ctx.mul(&factor, &m[pi][j]);
                m[i][j] = ctx.sub(&m[i][j], &sub);
            }
        }
        used_rows[pi] = true;
        pivot_of_col[pj] = Some(pi);
        pivot_seq.push((pi, pj, pv));
        loss += pv;
    }

    // Each pivot row is zero at all earlier pivot columns, so solving in
    // reverse selection order only ever needs already-known coordinates.
    let mut basis = Vec::new();
    let mut deficient = false;
    for free in 0..cols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![BigUint::zero(); cols];
        v[free] = BigUint::one();
        for &(pr, pc, t) in pivot_seq.iter().rev() {
            let mut rhs = BigUint::zero();
            for j in 0..cols {
                if j == pc || m[pr][j].is_zero() || v[j].is_zero() {
                    continue;
                }
                rhs += &m[pr][j] * &v[j];
            }
            rhs %= &ctx.modulus;
            let rhs = ctx.neg(&rhs);
            if t == 0 {
                v[pc] = rhs;
            } else {
                match ctx.valuation(&rhs) {
                    None => v[pc] = BigUint::zero(),
                    Some(vr) if vr >= t => v[pc] = ctx.div_pow_p(&rhs, t),
                    Some(_) => {
                        deficient = true;
                        v[pc] = BigUint::zero();
                    }
                }
            }
        }
        basis.push(v);
    }
    KernelModP { basis, loss, deficient }
}

pub fn mat_vec_mod(ctx: &ZpwCtx, m: &[Vec<BigUint>], v: &[BigUint]) -> Vec<BigUint> {
    m.iter()
        .map(|row| {
            let mut acc = BigUint::zero();
            for (a, b) in row.iter().zip(v) {
                if !a.is_zero() && !b.is_zero() {
                    acc += a * b;
                }
            }
            acc % &ctx.modulus
        })
        .collect()
}

/// Parse small powers: p^w as u128 when it fits (diagnostics only).
pub fn pow_u128(p: u64, w: u32) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..w {
        acc = acc.checked_mul(p as u128)?;
    }
    acc.to_u128()
}

/// Single-word Z/p^W for p^W < 2^63: products fit in u128, so the hot Hecke
/// sweep avoids heap-allocated residues entirely.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZpwU64 {
    pub p: u64,
    pub w: u32,
    pub modulus: u64,
}

impl ZpwU64 {
    /// None when p^w does not fit below 2^63.
    pub fn new(p: u64, w: u32) -> Option<Self> {
        let mut acc: u64 = 1;
        for _ in 0..w {
            acc = acc.checked_mul(p)?;
        }
        if acc >= 1u64 << 63 {
            return None;
        }
        Some(ZpwU64 { p, w, modulus: acc })
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus { s - self.modulus } else { s }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b { a - b } else { a + self.modulus - b }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }

    pub fn from_bigint(&self, x: &BigInt) -> u64 {
        let m = BigInt::from(self.modulus);
        x.mod_floor(&m).to_u64().expect("reduced below modulus")
    }

    pub fn from_biguint(&self, x: &BigUint) -> u64 {
        (x % BigUint::from(self.modulus)).to_u64().unwrap()
    }

    pub fn valuation(&self, a: u64) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let mut v = 0;
        let mut x = a;
        while x % self.p == 0 {
            x /= self.p;
            v += 1;
        }
        Some(v)
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        let (mut t, mut new_t) = (0i128, 1i128);
        let (mut r, mut new_r) = (self.modulus as i128, a as i128);
        while new_r != 0 {
            let q = r / new_r;
            (t, new_t) = (new_t, t - q * new_t);
            (r, new_r) = (new_r, r - q * new_r);
        }
        if r != 1 {
            return None;
        }
        Some(t.rem_euclid(self.modulus as i128) as u64)
    }

    pub fn pow_p(&self, t: u32) -> u64 {
        let mut acc = 1u64;
        for _ in 0..t {
            acc *= self.p;
        }
        acc
    }
}
