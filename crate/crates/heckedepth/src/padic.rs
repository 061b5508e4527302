//! p-adic valuations, capped-precision p-adic numbers, integer polynomials,
//! Newton polygons and p-adic root finding.
//!
//! The normalization is v_p(p) = 1. A root of an integer polynomial is only
//! ever reported when it lies in Z_p; the root finder works at an escalated
//! precision so that roots congruent modulo a high power of p still separate.

use crate::linalg::Rat;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PadicError {
    #[error("polynomial is not squarefree (discriminant is zero)")]
    NotSquarefree,
    #[error("precision escalation exceeded the configured ceiling of {0}")]
    PrecisionExhausted(u32),
    #[error("invalid polynomial: {0}")]
    InvalidPoly(&'static str),
    #[error("mantissa is not a unit mod p")]
    NotAUnit,
}

/// A p-adic valuation: an integer or +infinity (the valuation of 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
            (Valuation::Infinite, _) => Ordering::Greater,
            (_, Valuation::Infinite) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "+inf"),
        }
    }
}

/// Exact p-adic valuation of an integer.
pub fn vp_int(x: &BigInt, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let p = BigInt::from(p);
    let mut v = 0i64;
    let mut x = x.abs();
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            break;
        }
        x = q;
        v += 1;
    }
    Valuation::Finite(v)
}

/// Exact p-adic valuation of a rational number.
pub fn vp_rat(x: &Rat, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let vn = vp_int(x.numer(), p).finite().unwrap();
    let vd = vp_int(x.denom(), p).finite().unwrap();
    Valuation::Finite(vn - vd)
}

/// A p-adic number known to finite precision: p^val * mantissa with the
/// mantissa a unit mod p, known mod p^prec. Zero is valuation +infinity.
#[derive(Debug, Clone)]
pub struct PadicNumber {
    pub p: u64,
    pub val: Valuation,
    /// Unit mantissa in [1, p^prec), coprime to p; 0 exactly when val = +inf.
    pub mantissa: BigUint,
    /// Relative precision M >= 1: the mantissa is known mod p^M.
    pub prec: u32,
}

/// Outcome of adding two p-adic numbers: either a resolved value or a
/// cancellation that pushes the valuation beyond the joint precision.
#[derive(Debug, Clone)]
pub enum PadicSum {
    Resolved(PadicNumber),
    /// All known digits cancelled: the sum has valuation >= this bound.
    ZeroToPrecision(i64),
}

impl PadicNumber {
    pub fn new(p: u64, val: i64, mantissa: BigUint, prec: u32) -> Result<Self, PadicError> {
        assert!(prec >= 1);
        let modulus = BigUint::from(p).pow(prec);
        let m = mantissa % &modulus;
        if (&m % BigUint::from(p)).is_zero() {
            return Err(PadicError::NotAUnit);
        }
        Ok(PadicNumber { p, val: Valuation::Finite(val), mantissa: m, prec })
    }

    pub fn zero(p: u64, prec: u32) -> Self {
        PadicNumber { p, val: Valuation::Infinite, mantissa: BigUint::zero(), prec }
    }

    pub fn is_zero(&self) -> bool {
        self.val.is_infinite()
    }

    /// Exact rational input, truncated to relative precision `prec`.
    pub fn from_rational(x: &Rat, p: u64, prec: u32) -> Self {
        if x.is_zero() {
            return PadicNumber::zero(p, prec);
        }
        let v = vp_rat(x, p).finite().unwrap();
        let pv = Ratio::from_integer(BigInt::from(p).pow(v.unsigned_abs() as u32));
        let unit = if v >= 0 { x / pv } else { x * pv };
        let modulus = BigInt::from(BigUint::from(p).pow(prec));
        let num = unit.numer().mod_floor(&modulus);
        let den = unit.denom().mod_floor(&modulus);
        let den_inv = mod_inverse(&den, &modulus).expect("denominator is a unit");
        let m = (num * den_inv).mod_floor(&modulus).to_biguint().unwrap();
        PadicNumber { p, val: Valuation::Finite(v), mantissa: m, prec }
    }

    pub fn negate(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let modulus = BigUint::from(self.p).pow(self.prec);
        PadicNumber {
            p: self.p,
            val: self.val,
            mantissa: &modulus - &self.mantissa,
            prec: self.prec,
        }
    }

    /// Sum with precision tracking.
    pub fn add(&self, other: &PadicNumber) -> PadicSum {
        assert_eq!(self.p, other.p, "mixed primes");
        if self.is_zero() {
            return PadicSum::Resolved(other.clone());
        }
        if other.is_zero() {
            return PadicSum::Resolved(self.clone());
        }
        let p = self.p;
        let v1 = self.val.finite().unwrap();
        let v2 = other.val.finite().unwrap();
        let v = v1.min(v2);
        // absolute precision of each operand bounds that of the sum
        let abs_prec = (v1 + self.prec as i64).min(v2 + other.prec as i64);
        let rel = (abs_prec - v) as u32;
        let modulus = BigUint::from(p).pow(rel);
        let t1 = BigUint::from(p).pow((v1 - v) as u32) * &self.mantissa % &modulus;
        let t2 = BigUint::from(p).pow((v2 - v) as u32) * &other.mantissa % &modulus;
        let s = (t1 + t2) % &modulus;
        if s.is_zero() {
            return PadicSum::ZeroToPrecision(abs_prec);
        }
        let sv = {
            let pb = BigUint::from(p);
            let mut t = 0u32;
            let mut x = s.clone();
            while (&x % &pb).is_zero() {
                x /= &pb;
                t += 1;
            }
            t
        };
        let new_val = v + sv as i64;
        let new_rel = rel - sv;
        if new_rel == 0 {
            return PadicSum::ZeroToPrecision(abs_prec);
        }
        let new_modulus = BigUint::from(p).pow(new_rel);
        let mantissa = (s / BigUint::from(p).pow(sv)) % &new_modulus;
        PadicSum::Resolved(PadicNumber {
            p,
            val: Valuation::Finite(new_val),
            mantissa,
            prec: new_rel,
        })
    }

    pub fn sub(&self, other: &PadicNumber) -> PadicSum {
        self.add(&other.negate())
    }
}

impl PartialEq for PadicNumber {
    /// Equal iff the valuations match and the mantissas agree modulo
    /// p^(min of the two precisions).
    fn eq(&self, other: &Self) -> bool {
        if self.p != other.p {
            return false;
        }
        match (self.val, other.val) {
            (Valuation::Infinite, Valuation::Infinite) => true,
            (Valuation::Finite(a), Valuation::Finite(b)) => {
                if a != b {
                    return false;
                }
                let prec = self.prec.min(other.prec);
                let modulus = BigUint::from(self.p).pow(prec);
                &self.mantissa % &modulus == &other.mantissa % &modulus
            }
            _ => false,
        }
    }
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Dense integer polynomial, coefficients ascending, degree >= 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    /// Rejects the zero polynomial and constants: neither has a meaningful
    /// Newton polygon or root set.
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self, PadicError> {
        let mut c = coeffs;
        while c.len() > 1 && c.last().map_or(false, |x| x.is_zero()) {
            c.pop();
        }
        if c.iter().all(|x| x.is_zero()) {
            return Err(PadicError::InvalidPoly("zero polynomial"));
        }
        if c.len() < 2 {
            return Err(PadicError::InvalidPoly("constant polynomial"));
        }
        Ok(IntPoly { coeffs: c })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self, PadicError> {
        IntPoly::new(coeffs.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().unwrap()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_mod(&self, x: &BigUint, modulus: &BigUint) -> BigUint {
        let mut acc = BigUint::zero();
        let xm = x % modulus;
        let m = BigInt::from(modulus.clone());
        for c in self.coeffs.iter().rev() {
            let cm = c.mod_floor(&m).to_biguint().unwrap();
            acc = (acc * &xm + cm) % modulus;
        }
        acc
    }

    fn derivative_coeffs(&self) -> Vec<BigInt> {
        self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect()
    }

    /// Substitute x -> a + p*y and strip the maximal power of p from the
    /// content. Returns f(a + p y) / p^e.
    fn shift_scale(&self, a: &BigInt, p: u64) -> IntPoly {
        // Taylor coefficients of f at a by repeated synthetic division.
        let mut work = self.coeffs.clone();
        let mut shifted = Vec::with_capacity(work.len());
        while !work.is_empty() {
            let mut rem = BigInt::zero();
            for c in work.iter().rev() {
                rem = rem * a + c;
            }
            let mut quot = vec![BigInt::zero(); work.len().saturating_sub(1)];
            let mut carry = BigInt::zero();
            for i in (1..work.len()).rev() {
                carry = &work[i] + &carry * a;
                quot[i - 1] = carry.clone();
            }
            shifted.push(rem);
            work = quot;
        }
        let pb = BigInt::from(p);
        let mut scaled: Vec<BigInt> =
            shifted.iter().enumerate().map(|(j, c)| c * pb.pow(j as u32)).collect();
        loop {
            if scaled.iter().any(|c| !c.is_zero() && vp_int(c, p) == Valuation::Finite(0)) {
                break;
            }
            if scaled.iter().all(|c| c.is_zero()) {
                break;
            }
            for c in &mut scaled {
                *c /= &pb;
            }
        }
        IntPoly { coeffs: scaled }
    }

    /// Resultant of two integer polynomials, exact (Euclidean remainders
    /// over Q; degrees here are tiny).
    pub fn resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
        type Q = Ratio<BigInt>;
        fn deg(p: &[Q]) -> Option<usize> {
            p.iter().rposition(|c| !c.is_zero())
        }
        fn rem(a: &[Q], b: &[Q]) -> Vec<Q> {
            let db = deg(b).unwrap();
            let lb = b[db].clone();
            let mut r = a.to_vec();
            while let Some(dr) = deg(&r) {
                if dr < db {
                    break;
                }
                let factor = &r[dr] / &lb;
                for j in 0..=db {
                    let sub = &factor * &b[j];
                    r[dr - db + j] -= sub;
                }
                r[dr] = Q::zero(); // kill rounding-free residue exactly
            }
            r
        }
        fn res_rec(a: Vec<Q>, b: Vec<Q>) -> Q {
            let da = deg(&a).unwrap();
            let db = match deg(&b) {
                Some(d) => d,
                None => return Q::zero(),
            };
            if db == 0 {
                return pow_q(&b[0], da as u32);
            }
            let lb = b[db].clone();
            let r = rem(&a, &b);
            let sign = if (da * db) % 2 == 1 { -Q::one() } else { Q::one() };
            match deg(&r) {
                None => Q::zero(),
                Some(dr) => sign * pow_q(&lb, (da - dr) as u32) * res_rec(b, r),
            }
        }
        fn pow_q(x: &Q, e: u32) -> Q {
            let mut acc = Q::one();
            for _ in 0..e {
                acc *= x;
            }
            acc
        }
        let fq: Vec<Q> = f.iter().map(|c| Ratio::from_integer(c.clone())).collect();
        let gq: Vec<Q> = g.iter().map(|c| Ratio::from_integer(c.clone())).collect();
        match (deg(&fq), deg(&gq)) {
            (Some(_), Some(_)) => {}
            _ => return BigInt::zero(),
        }
        let out = res_rec(fq, gq);
        assert!(out.denom().is_one(), "resultant of integer polys is an integer");
        out.to_integer()
    }

    /// Discriminant: (-1)^(d(d-1)/2) res(f, f') / lc(f).
    pub fn discriminant(&self) -> BigInt {
        let d = self.degree();
        if d == 1 {
            return BigInt::one();
        }
        let fp = self.derivative_coeffs();
        let res = IntPoly::resultant(&self.coeffs, &fp);
        let sign = if (d * (d - 1) / 2) % 2 == 1 { -BigInt::one() } else { BigInt::one() };
        let (q, r) = (sign * res).div_rem(self.leading());
        assert!(r.is_zero(), "lc divides res(f, f')");
        q
    }
}

/// Newton polygon of f at p: list of (root valuation, multiplicity) with the
/// valuations nondecreasing. Trailing zero coefficients (roots at 0) are
/// excluded, so the lengths sum to deg f minus the multiplicity of 0.
pub fn newton_polygon(f: &IntPoly, p: u64) -> Vec<(Ratio<i64>, usize)> {
    let t = f.coeffs().iter().position(|c| !c.is_zero()).unwrap();
    let pts: Vec<(i64, i64)> = f
        .coeffs()
        .iter()
        .enumerate()
        .skip(t)
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i as i64, vp_int(c, p).finite().unwrap()))
        .collect();
    // lower convex hull, left to right
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &(x, y) in &pts {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            if (y2 - y1) * (x - x1) >= (y - y1) * (x2 - x1) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push((x, y));
    }
    let mut segs: Vec<(Ratio<i64>, usize)> = hull
        .windows(2)
        .map(|w| {
            let (x1, y1) = w[0];
            let (x2, y2) = w[1];
            (Ratio::new(y1 - y2, x2 - x1), (x2 - x1) as usize)
        })
        .collect();
    segs.sort_by(|a, b| a.0.cmp(&b.0));
    segs
}

/// All roots of a squarefree integer polynomial in Z_p, as residues mod p^M,
/// one residue per root. Residues can coincide mod p^M when two roots are
/// congruent that deep; callers wanting separation request a larger M.
pub fn hensel_roots(f: &IntPoly, p: u64, m: u32) -> Result<Vec<BigUint>, PadicError> {
    hensel_roots_with(f, p, m, 4, 1024)
}

/// Root finder with an explicit guard schedule: working precision starts at
/// M + vp(disc f) + guard and the guard doubles on failure up to the ceiling.
pub fn hensel_roots_with(
    f: &IntPoly,
    p: u64,
    m: u32,
    initial_guard: u32,
    guard_ceiling: u32,
) -> Result<Vec<BigUint>, PadicError> {
    assert!(m >= 1);
    let disc = f.discriminant();
    if disc.is_zero() {
        return Err(PadicError::NotSquarefree);
    }
    let vdisc = vp_int(&disc, p).finite().unwrap() as u32;
    let mut guard = initial_guard;
    loop {
        let wp = m + vdisc + guard;
        let budget = vdisc + guard;
        if let Some(mut roots) = roots_rec(f, p, wp, budget) {
            let pm = BigUint::from(p).pow(m);
            let ok = roots.iter().all(|r| f.eval_mod(&(r % &pm), &pm).is_zero());
            if ok {
                let mut out: Vec<BigUint> = roots.drain(..).map(|r| r % &pm).collect();
                out.sort();
                return Ok(out);
            }
        }
        if guard >= guard_ceiling {
            return Err(PadicError::PrecisionExhausted(guard_ceiling));
        }
        guard = (guard * 2).min(guard_ceiling);
    }
}

/// Recursive branch-and-lift on exact integer polynomials. Returns roots
/// mod p^wp, or None when the branching depth exceeds the budget.
fn roots_rec(f: &IntPoly, p: u64, wp: u32, budget: u32) -> Option<Vec<BigUint>> {
    let mut out = Vec::new();
    let fprime = f.derivative_coeffs();
    for r in 0..p {
        let rb = BigInt::from(r);
        let fr = f.eval(&rb);
        if vp_int(&fr, p) == Valuation::Finite(0) {
            continue;
        }
        let dfr = {
            let mut acc = BigInt::zero();
            for c in fprime.iter().rev() {
                acc = acc * &rb + c;
            }
            acc
        };
        if vp_int(&dfr, p) == Valuation::Finite(0) {
            out.push(newton_lift(f, p, r, wp));
        } else {
            if budget == 0 {
                return None;
            }
            let g = f.shift_scale(&rb, p);
            if g.coeffs.iter().all(|c| c.is_zero()) {
                // cannot happen for squarefree f, but avoid looping
                return None;
            }
            if g.coeffs.len() < 2 || g.coeffs[1..].iter().all(|c| c.is_zero()) {
                // constant after stripping: no roots in this branch
                if vp_int(&g.coeffs[0], p) == Valuation::Finite(0) {
                    continue;
                }
                return None;
            }
            let sub = roots_rec(&g, p, wp.saturating_sub(1).max(1), budget - 1)?;
            let pwp = BigUint::from(p).pow(wp);
            for y in sub {
                let x = (BigUint::from(r) + BigUint::from(p) * y) % &pwp;
                out.push(x);
            }
        }
    }
    Some(out)
}

/// Quadratic Newton lift of a simple root r mod p (f'(r) a unit) to mod p^wp.
fn newton_lift(f: &IntPoly, p: u64, r: u64, wp: u32) -> BigUint {
    let mut prec = 1u32;
    let mut x = BigUint::from(r);
    let fprime = f.derivative_coeffs();
    while prec < wp {
        prec = (prec * 2).min(wp);
        let modulus = BigUint::from(p).pow(prec);
        let m = BigInt::from(modulus.clone());
        let fx = f.eval_mod(&x, &modulus);
        let dfx = {
            let mut acc = BigUint::zero();
            let xm = &x % &modulus;
            for c in fprime.iter().rev() {
                let cm = c.mod_floor(&m).to_biguint().unwrap();
                acc = (acc * &xm + cm) % &modulus;
            }
            acc
        };
        let inv = mod_inverse(&BigInt::from(dfx), &m).expect("f'(x) stays a unit");
        let delta = (BigInt::from(fx) * inv).mod_floor(&m);
        let xi = (BigInt::from(x) - delta).mod_floor(&m);
        x = xi.to_biguint().unwrap();
    }
    x
}
