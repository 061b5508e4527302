//! The (k, L, eps) parameterization of two-dimensional semistable
//! representations of G_{Q_p}: the admissibility constant C_{p,k}, the
//! (phi, N, Fil) matrix data, and the local congruence predicates for
//! same-sign and opposite-sign pairs.

use crate::linalg::Rat;
use crate::padic::{PadicNumber, PadicSum, Valuation};
use num_bigint::BigInt;
use num_traits::Zero;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SemistableError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(&'static str),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(&'static str),
}

/// C_{p,k} = floor(log_p((k-2)/(p-1))) + 5, via exact integer comparisons:
/// the floor is the unique j with p^j <= (k-2)/(p-1) < p^(j+1).
pub fn c_constant(p: u64, k: u32) -> i64 {
    assert!(k > 2, "weight must exceed 2");
    assert!(p >= 2);
    let num = BigInt::from(k - 2);
    let den = BigInt::from(p - 1);
    // find j with p^j den <= num < p^(j+1) den; j may be negative
    let mut j: i64 = 0;
    if BigInt::from(p).pow(0) * &den <= num {
        // grow upward
        while BigInt::from(p).pow((j + 1) as u32) * &den <= num {
            j += 1;
        }
    } else {
        // (k-2)/(p-1) < 1: descend into negative exponents,
        // p^j <= x iff 1 <= x p^(-j)
        loop {
            j -= 1;
            if &num * BigInt::from(p).pow((-j) as u32) >= den {
                break;
            }
        }
    }
    j + 5
}

/// Admissible: v_p(L) strictly below -C_{p,k}.
pub fn is_admissible(v_l: i64, p: u64, k: u32) -> bool {
    v_l < -c_constant(p, k)
}

/// An L-invariant value: a point of P^1(Q_p), with infinity the crystalline
/// case.
#[derive(Debug, Clone, PartialEq)]
pub enum LValue {
    Finite(PadicNumber),
    Infinity,
}

/// Parameters (k, L, eps) of the semistable representation V_{k,L,eps}.
#[derive(Debug, Clone, PartialEq)]
pub struct SemistableParams {
    pub p: u64,
    pub k: u32,
    pub eps: i8,
    pub l: LValue,
}

impl SemistableParams {
    pub fn new(p: u64, k: u32, eps: i8, l: LValue) -> Result<Self, SemistableError> {
        if k <= 2 || k % 2 != 0 {
            return Err(SemistableError::PreconditionViolated("k must be even and > 2"));
        }
        if eps != 1 && eps != -1 {
            return Err(SemistableError::PreconditionViolated("eps must be +1 or -1"));
        }
        Ok(SemistableParams { p, k, eps, l })
    }
}

/// The (phi, N)-module data of V_{k,L,eps}, stored exactly as the source
/// matrices are given: phi is the scalar eps pi^(k-2) with pi^2 = p, so for
/// even k it is the rational scalar eps p^((k-2)/2); the monodromy is the
/// lower-triangular nilpotent for finite L and zero for L = infinity; the
/// filtration jumps at 0 and k-1 with middle step spanned by e1 + L e2
/// (e1 + e2 when L = infinity). The standard relation N phi = p phi N is
/// deliberately not asserted here.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiNData {
    /// phi as a 2x2 rational matrix (scalar for even weight).
    pub phi: [[Rat; 2]; 2],
    pub monodromy: [[i64; 2]; 2],
    /// filtration jumps: {0, k-1}
    pub fil_jumps: (u32, u32),
    /// the line Fil^i for 1 <= i <= k-1, as (coefficient of e1, of e2);
    /// (1, L) for finite L and (1, 1) in the crystalline case.
    pub fil_line: (Rat, LValue),
}

pub fn phi_n_module(params: &SemistableParams) -> PhiNData {
    let half = (params.k - 2) / 2;
    let scalar = Rat::from_integer(BigInt::from(params.eps) * BigInt::from(params.p).pow(half));
    let zero = Rat::zero();
    let phi = [[scalar.clone(), zero.clone()], [zero, scalar]];
    let monodromy = match params.l {
        LValue::Finite(_) => [[0, 0], [1, 0]],
        LValue::Infinity => [[0, 0], [0, 0]],
    };
    let fil_line = match &params.l {
        LValue::Finite(l) => (Rat::from_integer(BigInt::from(1)), LValue::Finite(l.clone())),
        LValue::Infinity => (Rat::from_integer(BigInt::from(1)), LValue::Infinity),
    };
    PhiNData { phi, monodromy, fil_jumps: (0, params.k - 1), fil_line }
}

impl PhiNData {
    /// The invariant suite: N^2 = 0, N nonzero exactly in the finite-L case,
    /// filtration jumps {0, k-1}, det phi = p^(k-2).
    pub fn check_invariants(&self, params: &SemistableParams) -> bool {
        let n = &self.monodromy;
        let n2 = [
            [n[0][0] * n[0][0] + n[0][1] * n[1][0], n[0][0] * n[0][1] + n[0][1] * n[1][1]],
            [n[1][0] * n[0][0] + n[1][1] * n[1][0], n[1][0] * n[0][1] + n[1][1] * n[1][1]],
        ];
        if n2 != [[0, 0], [0, 0]] {
            return false;
        }
        let n_zero = *n == [[0i64, 0], [0, 0]];
        match params.l {
            LValue::Finite(_) if n_zero => return false,
            LValue::Infinity if !n_zero => return false,
            _ => {}
        }
        if self.fil_jumps != (0, params.k - 1) {
            return false;
        }
        let det = self.phi[0][0].clone() * &self.phi[1][1]
            - self.phi[0][1].clone() * &self.phi[1][0];
        det == Rat::from_integer(BigInt::from(params.p).pow(params.k - 2))
    }
}

/// Depth of a same-sign congruence, or the reason there is none.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SameSignDepth {
    Finite(i64),
    /// L0 = L1 to working precision: the depth is at least this bound.
    AtLeast(i64),
    None,
}

/// Largest h >= 2 with v_p(L0 - L1) >= n + h, where n = v_p(L0), for
/// representations of the same sign: h = v_p(L0 - L1) - n, or None when
/// that quantity is below 2. Preconditions: k even with 2 < k < p, and
/// n an integer with -k/2 + 2 <= n < 0.
pub fn same_sign_depth(
    l0: &PadicNumber,
    l1: &PadicNumber,
    p: u64,
    k: u32,
) -> Result<SameSignDepth, SemistableError> {
    if k % 2 != 0 || k <= 2 {
        return Err(SemistableError::PreconditionViolated("k must be even and > 2"));
    }
    if (k as u64) >= p {
        return Err(SemistableError::PreconditionViolated("k must be below p"));
    }
    let n = match l0.val {
        Valuation::Finite(n) => n,
        Valuation::Infinite => {
            return Err(SemistableError::PreconditionViolated("v_p(L0) must be finite"))
        }
    };
    let lower = -(k as i64) / 2 + 2;
    if n < lower || n >= 0 {
        return Err(SemistableError::PreconditionViolated(
            "v_p(L0) must lie in [-k/2 + 2, 0)",
        ));
    }
    match l0.sub(l1) {
        PadicSum::Resolved(d) => {
            let h = d.val.finite().expect("resolved difference is nonzero") - n;
            if h >= 2 {
                Ok(SameSignDepth::Finite(h))
            } else {
                Ok(SameSignDepth::None)
            }
        }
        PadicSum::ZeroToPrecision(bound) => Ok(SameSignDepth::AtLeast(bound - n)),
    }
}

/// The opposite-sign prediction: when L and L' are both admissible and
/// v_p(L + L') >= -C_{p,k}, representations of opposite sign are congruent
/// modulo p^(-v_p(L) + 1); returns that exponent, None when the hypotheses
/// fail.
pub fn opposite_sign_predicted_depth(
    l: &PadicNumber,
    lp: &PadicNumber,
    p: u64,
    k: u32,
) -> Result<Option<i64>, SemistableError> {
    let c = c_constant(p, k);
    let (vl, vlp) = match (l.val, lp.val) {
        (Valuation::Finite(a), Valuation::Finite(b)) => (a, b),
        _ => return Ok(None), // crystalline values are excluded
    };
    if !(vl < -c && vlp < -c) {
        return Ok(None);
    }
    let v_sum = match l.add(lp) {
        PadicSum::Resolved(s) => s.val.finite().expect("resolved sum is nonzero"),
        PadicSum::ZeroToPrecision(bound) => {
            if bound >= -c {
                // cancellation certainly reaches -C even though the exact
                // valuation is unresolved
                return Ok(Some(-vl + 1));
            }
            return Err(SemistableError::InsufficientPrecision(
                "v_p(L + L') not resolved at the stored precision",
            ));
        }
    };
    if v_sum >= -c {
        Ok(Some(-vl + 1))
    } else {
        Ok(None)
    }
}

/// The equidistribution interval for L-invariant valuations:
/// [-k(p-1)/(2(p+1)), 0].
pub fn equidistribution_interval(p: u64, k: u32) -> (Rat, Rat) {
    let num = BigInt::from(k as i64) * BigInt::from(p as i64 - 1);
    let den = BigInt::from(2) * BigInt::from(p as i64 + 1);
    (Rat::new(-num, den), Rat::zero())
}
