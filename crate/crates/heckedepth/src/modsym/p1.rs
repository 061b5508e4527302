//! P^1(Z/n), lifts to SL_2(Z), and cusp classes for Gamma_0(n).
//!
//! Representatives of P^1(Z/n) are normalized so that the enumeration is
//! canonical and reproducible: cached matrices computed against one basis
//! stay valid across runs.

use num_integer::Integer;

fn gcd_i64(a: i64, b: i64) -> i64 {
    a.abs().gcd(&b.abs())
}

/// Canonical representative of (u : v) in P^1(Z/n), or None when
/// gcd(u, v, n) > 1. For n = 1 the unique element is (0, 0).
pub fn p1_normalize(n: i64, u: i64, v: i64) -> Option<(i64, i64)> {
    assert!(n >= 1);
    if n == 1 {
        return Some((0, 0));
    }
    let u = u.rem_euclid(n);
    let v = v.rem_euclid(n);
    if u == 0 {
        return if gcd_i64(v, n) == 1 { Some((0, 1)) } else { None };
    }
    let g = gcd_i64(u, n);
    if gcd_i64(g, v) != 1 {
        return None; // gcd(u, v, n) > 1
    }
    // scale u to g = gcd(u, n): s = (u/g)^{-1} mod n/g, lifted to a unit mod n
    let ng = n / g;
    let mut s = inv_mod(u / g, ng)?;
    while gcd_i64(s, n) != 1 {
        s += ng;
    }
    let v0 = (s * v).rem_euclid(n);
    let mut best_v = v0;
    // the stabilizer of u = g consists of units congruent to 1 mod n/g
    for t in 1..g {
        let s2 = 1 + t * ng;
        if gcd_i64(s2, n) == 1 {
            let w = (s2 * v0).rem_euclid(n);
            if w < best_v {
                best_v = w;
            }
        }
    }
    Some((g, best_v))
}

/// Modular inverse for small integers, None when not a unit.
pub fn inv_mod(a: i64, m: i64) -> Option<i64> {
    if m == 1 {
        return Some(0);
    }
    let a = a.rem_euclid(m);
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (m, a);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(m))
}

/// Enumerated P^1(Z/n) with constant-time lookup of normalized pairs.
#[derive(Debug, Clone)]
pub struct P1List {
    pub n: i64,
    pub reps: Vec<(i64, i64)>,
    index: std::collections::BTreeMap<(i64, i64), usize>,
}

impl P1List {
    pub fn new(n: i64) -> Self {
        assert!(n >= 1);
        let mut reps = Vec::new();
        let mut index = std::collections::BTreeMap::new();
        if n == 1 {
            reps.push((0, 0));
            index.insert((0, 0), 0);
            return P1List { n, reps, index };
        }
        for u in 0..n {
            for v in 0..n {
                if let Some(r) = p1_normalize(n, u, v) {
                    if r == (u, v) && !index.contains_key(&r) {
                        index.insert(r, reps.len());
                        reps.push(r);
                    }
                }
            }
        }
        P1List { n, reps, index }
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Index of the class of (u : v); None when not a valid element.
    pub fn lookup(&self, u: i64, v: i64) -> Option<usize> {
        let r = p1_normalize(self.n, u, v)?;
        Some(*self.index.get(&r).expect("normalized rep enumerated"))
    }
}

/// Lift a P^1(Z/n) element to a matrix [[a, b], [c, d]] in SL_2(Z) with
/// (c, d) congruent to a representative of the class mod n.
pub fn lift_to_sl2z(u: i64, v: i64, n: i64) -> [i64; 4] {
    if n == 1 {
        return [1, 0, 0, 1];
    }
    let u = u.rem_euclid(n);
    let v = v.rem_euclid(n);
    if u == 0 {
        debug_assert_eq!(gcd_i64(v, n), 1);
        return [1, 0, 0, 1]; // bottom row (0, 1) ~ (0, v)
    }
    // adjust d = v + t n until gcd(u, d) = 1
    let mut d = v;
    loop {
        if gcd_i64(u, d) == 1 {
            break;
        }
        d += n;
    }
    // a d - b u = 1
    let (g, a, b_neg) = egcd(d, u);
    debug_assert_eq!(g, 1);
    let a = a;
    let b = -b_neg;
    debug_assert_eq!(a * d - b * u, 1);
    [a, b, u, d]
}

fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    // returns (g, x, y) with a x + b y = g
    if b == 0 {
        let s = if a < 0 { -1 } else { 1 };
        return (a.abs(), s, 0);
    }
    let (g, x, y) = egcd(b, a.rem_euclid(b));
    (g, y, x - (a.div_euclid(b)) * y)
}

/// A cusp a/c in lowest terms; infinity is 1/0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cusp {
    pub num: i64,
    pub den: i64,
}

impl Cusp {
    pub fn new(num: i64, den: i64) -> Self {
        if den == 0 {
            return Cusp { num: 1, den: 0 };
        }
        let g = gcd_i64(num, den);
        let (mut num, mut den) = (num / g, den / g);
        if den < 0 {
            num = -num;
            den = -den;
        }
        Cusp { num, den }
    }

    pub fn infinity() -> Self {
        Cusp { num: 1, den: 0 }
    }

    pub fn is_infinity(&self) -> bool {
        self.den == 0
    }
}

/// Gamma_0(n)-equivalence of cusps: p1/q1 ~ p2/q2 iff
/// s1 q2 = s2 q1 mod gcd(q1 q2, n), where s_j inverts p_j mod q_j.
pub fn cusps_gamma0_equiv(n: i64, c1: &Cusp, c2: &Cusp) -> bool {
    let (p1, q1) = (c1.num, c1.den);
    let (p2, q2) = (c2.num, c2.den);
    let s1 = if q1 == 0 { p1 } else { inv_mod(p1, q1.abs()).unwrap_or(0) };
    let s2 = if q2 == 0 { p2 } else { inv_mod(p2, q2.abs()).unwrap_or(0) };
    let g = gcd_i64(q1 * q2, n);
    if g == 0 {
        // both infinity
        return true;
    }
    (s1 * q2 - s2 * q1).rem_euclid(g) == 0
}

/// Running list of inequivalent cusp classes for Gamma_0(n).
#[derive(Debug, Clone)]
pub struct CuspClasses {
    pub n: i64,
    pub reps: Vec<Cusp>,
}

impl CuspClasses {
    pub fn new(n: i64) -> Self {
        CuspClasses { n, reps: Vec::new() }
    }

    pub fn class_of(&mut self, c: Cusp) -> usize {
        for (i, r) in self.reps.iter().enumerate() {
            if cusps_gamma0_equiv(self.n, r, &c) {
                return i;
            }
        }
        self.reps.push(c);
        self.reps.len() - 1
    }
}

/// Number of cusps of Gamma_0(n): sum over d | n of phi(gcd(d, n/d)).
pub fn num_cusps_gamma0(n: i64) -> usize {
    let mut count = 0usize;
    for d in 1..=n {
        if n % d == 0 {
            count += euler_phi(gcd_i64(d, n / d)) as usize;
        }
    }
    count
}

fn euler_phi(mut n: i64) -> i64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Index of Gamma_0(n) in SL_2(Z).
pub fn gamma0_index(n: i64) -> i64 {
    let mut idx = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            idx = idx / p * (p + 1);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        idx = idx / m * (m + 1);
    }
    idx
}
