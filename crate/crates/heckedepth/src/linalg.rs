//! Exact dense linear algebra over the rationals and the integers.
//!
//! Everything here is small (dimensions well under a thousand) but must be
//! exact: spaces of modular symbols are presented by rational matrices whose
//! kernels, intersections and characteristic polynomials feed the p-adic
//! stage. No floating point anywhere.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

pub type Rat = Ratio<BigInt>;

pub fn rat_int(n: i64) -> Rat {
    Ratio::from_integer(BigInt::from(n))
}

/// Dense row-major rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Rat>,
}

impl QMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMat { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMat::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        QMat { rows: r, cols: c, data }
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> &Rat {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Rat {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> QMat {
        let mut t = QMat::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *t.at_mut(c, r) = self.at(r, c).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &QMat) -> QMat {
        assert_eq!(self.cols, other.rows);
        let mut out = QMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if !b.is_zero() {
                        let v = out.at_mut(i, j);
                        *v += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Rat::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    /// Stack `self` on top of `other` (same column count).
    pub fn vstack(&self, other: &QMat) -> QMat {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        QMat { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// In-place reduced row echelon form. Returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            // Prefer a pivot with small numerator/denominator to limit blowup.
            let mut best: Option<(usize, usize)> = None;
            for i in r..self.rows {
                let e = self.at(i, c);
                if !e.is_zero() {
                    let sz = e.numer().bits() as usize + e.denom().bits() as usize;
                    match best {
                        Some((_, bsz)) if bsz <= sz => {}
                        _ => best = Some((i, sz)),
                    }
                }
            }
            let Some((pr, _)) = best else { continue };
            self.swap_rows(r, pr);
            let inv = {
                let piv = self.at(r, c).clone();
                Rat::one() / piv
            };
            for j in c..self.cols {
                let e = self.at_mut(r, j);
                if !e.is_zero() {
                    *e *= &inv;
                }
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.at(i, c).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let sub = self.at(r, j).clone() * &factor;
                    if !sub.is_zero() {
                        let e = self.at_mut(i, j);
                        *e -= sub;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right kernel `{ v : A v = 0 }`, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (ri, &c) in pivots.iter().enumerate() {
                v[c] = Some(ri);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut vec = vec![Rat::zero(); self.cols];
            vec[free] = Rat::one();
            for (ri, &pc) in pivots.iter().enumerate() {
                let coeff = m.at(ri, free);
                if !coeff.is_zero() {
                    vec[pc] = -coeff.clone();
                }
            }
            basis.push(vec);
        }
        basis
    }

    /// Solve `self * X = B` for X, where `self` has full column rank.
    /// Returns None if the system is inconsistent.
    pub fn solve(&self, b: &QMat) -> Option<QMat> {
        assert_eq!(self.rows, b.rows);
        let mut aug = QMat::zero(self.rows, self.cols + b.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            for j in 0..b.cols {
                *aug.at_mut(i, self.cols + j) = b.at(i, j).clone();
            }
        }
        let pivots = aug.rref();
        if pivots.iter().any(|&c| c >= self.cols) {
            return None; // pivot in the RHS block: inconsistent
        }
        if pivots.len() < self.cols {
            return None; // rank-deficient; callers always pass full-rank systems
        }
        let mut x = QMat::zero(self.cols, b.cols);
        for (ri, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                *x.at_mut(pc, j) = aug.at(ri, self.cols + j).clone();
            }
        }
        Some(x)
    }

    /// Monic characteristic polynomial, coefficients ascending.
    /// Faddeev–LeVerrier; exact over Q and division-safe in characteristic 0.
    pub fn charpoly(&self) -> Vec<Rat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut coeffs = vec![Rat::zero(); n + 1];
        coeffs[n] = Rat::one();
        let mut m = QMat::identity(n);
        for k in 1..=n {
            let am = self.mul(&m);
            let mut tr = Rat::zero();
            for i in 0..n {
                tr += am.at(i, i);
            }
            let c = -tr / rat_int(k as i64);
            m = am;
            for i in 0..n {
                let e = m.at_mut(i, i);
                *e += &c;
            }
            coeffs[n - k] = c;
        }
        coeffs
    }
}

/// Scale a rational vector to a primitive integer vector (clears denominators
/// and divides by the content). Zero vectors map to zero.
pub fn primitive_int_vec(v: &[Rat]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in v {
        if !x.is_zero() {
            lcm = lcm.lcm(x.denom());
        }
    }
    let mut out: Vec<BigInt> = v.iter().map(|x| (x * Ratio::from_integer(lcm.clone())).to_integer()).collect();
    let mut content = BigInt::zero();
    for x in &out {
        content = content.gcd(x);
    }
    if !content.is_zero() && !content.is_one() {
        for x in &mut out {
            *x /= &content;
        }
    }
    // normalize sign so the first nonzero entry is positive
    if let Some(first) = out.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in &mut out {
                *x = -x.clone();
            }
        }
    }
    out
}
