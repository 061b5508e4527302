//! Merel's family of integer matrices of determinant ell: all [[a, b], [c, d]]
//! with det = ell, a > b >= 0 and d > c >= 0. Summing the right action of the
//! family over Manin symbols computes T_ell for ell coprime to the level.

use super::action::Mat2;

pub fn merel_matrices(ell: u64) -> Vec<Mat2> {
    let l = ell as i64;
    let mut out = Vec::new();
    for a in 1..=l {
        for d in 1..=l {
            let bc = a * d - l;
            if bc < 0 {
                continue;
            }
            if bc == 0 {
                for c in 0..d {
                    out.push([a, 0, c, d]);
                }
                for b in 1..a {
                    out.push([a, b, 0, d]);
                }
            } else {
                let mut b = 1;
                while b * b <= bc {
                    if bc % b == 0 {
                        let c = bc / b;
                        if b < a && c < d {
                            out.push([a, b, c, d]);
                        }
                        if b != c && c < a && b < d {
                            out.push([a, c, b, d]);
                        }
                    }
                    b += 1;
                }
            }
        }
    }
    out
}
