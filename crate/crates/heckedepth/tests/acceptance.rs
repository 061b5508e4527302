//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//! The reference tables, labels and record files live in `common` and
//! `fixtures/`. Runs with the default prime cutoff 300; the proof-grade
//! Sturm-bound rerun is `#[ignore]`d (hours, same results).

mod common;

use common::*;
use heckedepth::congruence::{changepoint_table, depth_matrix, sturm_bound, Depth};
use heckedepth::eigensolve::{
    compute_newspace, exact_block_hecke, sweep_primes, Eigensystem, Newspace, NewspaceParams,
};
use heckedepth::linalg::{rat_int, Rat};
use heckedepth::modsym::{build_space, new_cuspidal_plus};
use heckedepth::padic::{hensel_roots, vp_int, IntPoly, PadicError, Valuation};
use heckedepth::semistable::c_constant;
use heckedepth::verify::{
    an_doubling_check, cancellation_report, deep_pairs, match_partners, parse_linv,
    validate_join, LInvariantData,
};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

// ---------- shared computations (each fixture computed once per process) ----------

type Key = (i64, u64, u32);

fn newspace_cell(key: Key) -> Arc<OnceLock<Arc<Newspace>>> {
    static CELLS: OnceLock<Mutex<BTreeMap<Key, Arc<OnceLock<Arc<Newspace>>>>>> = OnceLock::new();
    let map = CELLS.get_or_init(|| Mutex::new(BTreeMap::new()));
    map.lock().unwrap().entry(key).or_default().clone()
}

fn newspace_for(fx: &Fixture) -> Arc<Newspace> {
    let cell = newspace_cell((fx.tame, fx.p, fx.k));
    cell.get_or_init(|| {
        let params = NewspaceParams {
            tame: fx.tame,
            p: fx.p,
            k: fx.k,
            precision: fx.m,
            cutoff: 300,
        };
        Arc::new(compute_newspace(&params).expect("newspace computes"))
    })
    .clone()
}

fn linv_for(fx: &Fixture) -> LInvariantData {
    let text = std::fs::read_to_string(fixture_path(fx.file)).expect("fixture file present");
    parse_linv(&text, fx.p).expect("fixture parses")
}

fn primes_for(fx: &Fixture) -> Vec<u64> {
    sweep_primes(fx.tame * fx.p as i64, 300)
}

fn table_and_depths(
    fx: &Fixture,
    ns: &Newspace,
) -> (heckedepth::congruence::PartitionTable, Vec<Vec<Depth>>) {
    let primes = primes_for(fx);
    let table = changepoint_table(&ns.systems, &primes).unwrap();
    let depths = depth_matrix(&ns.systems, &primes).unwrap();
    (table, depths)
}

fn assert_rows_match(
    fx: &Fixture,
    rows: &[(u32, Vec<Vec<i64>>)],
    expect: &[(u32, &[&[i64]])],
    what: &str,
) {
    assert_eq!(
        rows.len(),
        expect.len(),
        "row count vs {what} for (N={}, p={}, k={})",
        fx.tame,
        fx.p,
        fx.k
    );
    for ((n, classes), (en, ec)) in rows.iter().zip(expect) {
        assert_eq!(n, en, "changepoint vs {what}");
        assert_eq!(
            canon(classes),
            canon_ref(ec),
            "classes at depth {n} vs {what} for (N={}, p={}, k={})",
            fx.tame,
            fx.p,
            fx.k
        );
    }
}

/// Exact certification of cross-block eigenvalue data: for each given ell,
/// v_p(Res(chi+, chi-)) of the two Atkin-Lehner block charpolys of T_ell
/// must equal the sum of cross-pair valuations read from the residues.
/// Requires every cross-pair difference to resolve within precision.
fn certify_cross_block(fx: &Fixture, ns: &Newspace, ells: &[u64]) {
    let space = build_space(fx.tame, fx.p, fx.k).unwrap();
    let sub = new_cuspidal_plus(&space).unwrap();
    let w = space.atkin_lehner_matrix_full(fx.p);
    let mut blocks = Vec::new();
    for eps in [1i64, -1] {
        let mut shifted = w.clone();
        for i in 0..shifted.rows {
            *shifted.at_mut(i, i) -= rat_int(eps);
        }
        blocks.push(sub.intersect_kernel(&shifted).integralized());
    }
    let plus: Vec<&Eigensystem> = ns.systems.iter().filter(|s| s.eps > 0).collect();
    let minus: Vec<&Eigensystem> = ns.systems.iter().filter(|s| s.eps < 0).collect();
    let modulus = BigUint::from(fx.p).pow(fx.m);
    for &ell in ells {
        let mut predicted = 0u32;
        for f in &plus {
            for g in &minus {
                let a = &f.aell[&ell];
                let b = &g.aell[&ell];
                let d = if a >= b { a - b } else { (a + &modulus) - b };
                assert!(!d.is_zero(), "cross-pair difference resolved at precision");
                let mut v = 0u32;
                let pb = BigUint::from(fx.p);
                let mut x = d;
                while (&x % &pb).is_zero() {
                    x /= &pb;
                    v += 1;
                }
                predicted += v;
            }
        }
        let charpolys: Vec<IntPoly> = blocks
            .iter()
            .map(|b| {
                let a = b.restrict(&space.hecke_matrix_full(ell)).unwrap();
                let cp = a.charpoly();
                IntPoly::new(
                    cp.iter()
                        .map(|c| {
                            assert!(c.denom().is_one(), "integral charpoly");
                            c.numer().clone()
                        })
                        .collect(),
                )
                .unwrap()
            })
            .collect();
        let res = IntPoly::resultant(charpolys[0].coeffs(), charpolys[1].coeffs());
        let v_exact = vp_int(&res, fx.p).finite().expect("resultant nonzero") as u32;
        assert_eq!(
            v_exact, predicted,
            "resultant certification at ell = {ell} for (N={}, p={}, k={})",
            fx.tame, fx.p, fx.k
        );
    }
}

// ---------- criteria ----------

#[test]
fn criterion_01_table_1_reproduction() {
    let fx = &P3_K44;
    let ns = newspace_for(fx);
    let (table, _) = table_and_depths(fx, &ns);
    assert_eq!(table.changepoints(), fx.changepoints);
    let data = linv_for(fx);
    validate_join(&data, &ns.systems).unwrap();
    let labels: Vec<i64> = label_vec(&data, ns.systems.len());
    let rows = labeled_rows(&table, &labels);
    assert_rows_match(fx, &rows, fx.rows_printed, "the printed table");
    println!("criterion 1: PASS (N=1, p=3, k=44: changepoints {:?}, classes exact)", fx.changepoints);
}

fn label_vec(data: &LInvariantData, n: usize) -> Vec<i64> {
    let mut v = vec![0i64; n];
    for r in &data.records {
        v[r.index] = r.v_l;
    }
    v
}

#[test]
fn criterion_02_table_2_reproduction() {
    let fx = &P5_K32;
    let ns = newspace_for(fx);
    let (table, depths) = table_and_depths(fx, &ns);
    assert_eq!(table.changepoints(), fx.changepoints);
    // the vL = -11 pair is congruent modulo p^12
    let pair = fx.sums.unwrap().iter().find(|&&(a, b, _)| fx.vl[a] == -11 && fx.vl[b] == -11).unwrap();
    assert!(depths[pair.0][pair.1].at_least(12), "-11 pair depth >= 12");
    let data = linv_for(fx);
    validate_join(&data, &ns.systems).unwrap();
    let labels = label_vec(&data, ns.systems.len());
    let rows = labeled_rows(&table, &labels);
    // rows as printed. The depth-1 row of the printed table merges two
    // residual classes that are provably distinct mod 5; the comparison is
    // asserted as stated and fails there. See
    // criterion_02_erratum_table_2_row_1_certified for the exact-arithmetic
    // certification of the corrected row, and the project notes.
    let printed_row_1_matches =
        canon(&rows[0].1) == canon_ref(fx.rows_printed[0].1);
    if !printed_row_1_matches {
        println!(
            "criterion 2: FAIL at the depth-1 row as printed (certified erratum: the printed row \
             merges the two mod-5 residual classes; every other clause passes — see the erratum test)"
        );
    }
    assert_rows_match(fx, &rows, fx.rows_printed, "the printed table");
    println!("criterion 2: PASS");
}

#[test]
fn criterion_02_erratum_table_2_row_1_certified() {
    let fx = &P5_K32;
    let ns = newspace_for(fx);
    let (table, _) = table_and_depths(fx, &ns);
    let data = linv_for(fx);
    validate_join(&data, &ns.systems).unwrap();
    let labels = label_vec(&data, ns.systems.len());
    let rows = labeled_rows(&table, &labels);
    // every row matches the corrected table, which differs from print only
    // in the depth-1 row
    assert_rows_match(fx, &rows, fx.rows_corrected, "the corrected table");
    // merging the two corrected depth-1 classes gives exactly the printed row
    let mut merged: Vec<i64> =
        fx.rows_corrected[0].1.iter().flat_map(|c| c.iter().copied()).collect();
    merged.sort();
    let mut printed: Vec<i64> = fx.rows_printed[0].1[0].to_vec();
    printed.sort();
    assert_eq!(merged, printed, "printed row 1 is the corrected row with brackets dropped");
    // and the residue data behind the split is certified by exact resultants
    certify_cross_block(fx, &ns, &[2, 3]);
    println!(
        "criterion 2 erratum: CERTIFIED (depth-1 row of the printed table drops one bracket; \
         the two classes differ by the quadratic character mod 5)"
    );
}

#[test]
fn criterion_03_table_3_reproduction() {
    let fx = &P7_K20;
    let ns = newspace_for(fx);
    let (table, _) = table_and_depths(fx, &ns);
    assert_eq!(table.changepoints(), fx.changepoints);
    let data = linv_for(fx);
    validate_join(&data, &ns.systems).unwrap();
    let labels = label_vec(&data, ns.systems.len());
    let rows = labeled_rows(&table, &labels);
    assert_rows_match(fx, &rows, fx.rows_printed, "the printed table");
    // the depth-1 class mixing distinct valuations must appear
    let row1 = canon(&rows[0].1);
    assert!(
        row1.contains(&vec![-5, -5, -1, 0]),
        "depth-1 class [0, -1, -5, -5] present: {row1:?}"
    );
    println!("criterion 3: PASS (N=1, p=7, k=20: changepoints {:?}, mixed depth-1 class present)", fx.changepoints);
}

#[test]
fn criterion_04_table_4_reproduction() {
    let fx = &P11_K18;
    let ns = newspace_for(fx);
    let (table, _) = table_and_depths(fx, &ns);
    assert_eq!(table.changepoints(), fx.changepoints);
    assert_eq!(ns.systems.len(), 14, "14 forms");
    println!("criterion 4: PASS (N=1, p=11, k=18: changepoints {:?}, 14 forms)", fx.changepoints);
}

#[test]
fn criterion_04_erratum_table_4_row_7_certified() {
    let fx = &P11_K18;
    let ns = newspace_for(fx);
    let (table, _) = table_and_depths(fx, &ns);
    let data = linv_for(fx);
    validate_join(&data, &ns.systems).unwrap();
    let labels = label_vec(&data, ns.systems.len());
    let rows = labeled_rows(&table, &labels);
    assert_rows_match(fx, &rows, fx.rows_corrected, "the corrected table");
    // rows other than depth 7 agree with print; at depth 7 the printed table
    // keeps one [-5, -5] pair that in fact splits (certified below)
    for ((n, classes), (pn, pc)) in rows.iter().zip(fx.rows_printed) {
        assert_eq!(n, pn);
        if *n != 7 {
            assert_eq!(canon(classes), canon_ref(pc), "row {n} matches print");
        } else {
            assert_ne!(canon(classes), canon_ref(pc), "row 7 differs from print");
        }
    }
    certify_cross_block(fx, &ns, &[2, 3, 5]);
    println!(
        "criterion 4 erratum: CERTIFIED (printed depth-7 row keeps a [-5, -5] pair; both -5 pairs \
         split at depth 7, certified by exact resultants)"
    );
}

#[test]
fn criterion_05_table_5_reproduction() {
    let fx = &P3_N2_K36;
    let ns = newspace_for(fx);
    let (table, _) = table_and_depths(fx, &ns);
    assert_eq!(table.changepoints(), fx.changepoints);
    assert_eq!(ns.systems.len(), 7, "7 forms");
    // the full class structure also reproduces
    let data = linv_for(fx);
    validate_join(&data, &ns.systems).unwrap();
    let labels = label_vec(&data, ns.systems.len());
    let rows = labeled_rows(&table, &labels);
    assert_rows_match(fx, &rows, fx.rows_printed, "the printed table");
    println!("criterion 5: PASS (N=2, p=3, k=36: changepoints {:?}, 7 forms)", fx.changepoints);
}

#[test]
fn criterion_06_weight_48_table_identical_to_weight_44() {
    let f44 = &P3_K44;
    let f48 = &P3_K48;
    let ns44 = newspace_for(f44);
    let ns48 = newspace_for(f48);
    let (t44, _) = table_and_depths(f44, &ns44);
    let (t48, _) = table_and_depths(f48, &ns48);
    assert_eq!(t44.changepoints(), t48.changepoints());
    let rows44 = labeled_rows(&t44, &label_vec(&linv_for(f44), 7));
    let rows48 = labeled_rows(&t48, &label_vec(&linv_for(f48), 7));
    for ((n1, c1), (n2, c2)) in rows44.iter().zip(&rows48) {
        assert_eq!(n1, n2);
        assert_eq!(canon(c1), canon(c2), "identical labeled classes at depth {n1}");
    }
    println!("criterion 6: PASS (k=48 depth table identical to k=44)");
}

#[test]
fn criterion_07_partner_audit_passes_on_every_fixture() {
    for fx in ALL_FIXTURES {
        let ns = newspace_for(fx);
        let data = linv_for(fx);
        validate_join(&data, &ns.systems).unwrap();
        let (_, depths) = table_and_depths(fx, &ns);
        let report = match_partners(&ns.systems, &data, &depths, None);
        assert!(
            report.pass,
            "audit FAIL for (N={}, p={}, k={}): {:?}",
            fx.tame,
            fx.p,
            fx.k,
            report.violations
        );
        // every admissible form found exactly one partner
        for c in &report.checks {
            assert_eq!(c.candidates.len(), 1);
            assert!(c.measured_depth.unwrap().at_least(c.required_depth as u32));
        }
        let (doubling, witnesses) = an_doubling_check(&data, fx.p, fx.k, None);
        assert!(doubling, "doubling failed: {witnesses:?}");
        // the p=3, k=44 audit also passes under the caption override C = 8
        if fx.p == 3 && fx.k == 44 {
            let report = match_partners(&ns.systems, &data, &depths, data.caption_c());
            assert!(report.pass);
        }
    }
    println!("criterion 7: PASS (partner audit and doubling pass on every fixture)");
}

#[test]
fn criterion_08_cancellation_reports() {
    for fx in [&P3_K44, &P5_K32] {
        let ns = newspace_for(fx);
        let data = linv_for(fx);
        validate_join(&data, &ns.systems).unwrap();
        let (_, depths) = table_and_depths(fx, &ns);
        let pairs = deep_pairs(&ns.systems, &data, &depths);
        assert_eq!(pairs.len(), fx.sums.unwrap().len(), "all deep pairs matched");
        let entries = cancellation_report(&data, &pairs, fx.p, fx.k, None).unwrap();
        let got: Vec<(i64, i64)> = entries.iter().map(|e| (e.v_sum, e.v_l)).collect();
        assert_eq!(got, fx.cancellation.unwrap().to_vec(), "(N={}, p={}, k={})", fx.tame, fx.p, fx.k);
        let c = c_constant(fx.p, fx.k);
        for e in &entries {
            assert!(e.strictly_above_minus_c, "v_sum {} strictly above -C = {}", e.v_sum, -c);
        }
    }
    println!("criterion 8: PASS (cancellation lists exact; all sum valuations strictly above -C)");
}

#[test]
fn criterion_09_constants_and_caption_discrepancy() {
    assert_eq!(c_constant(5, 32), 6);
    assert_eq!(c_constant(7, 20), 5);
    assert_eq!(c_constant(11, 18), 5);
    assert_eq!(c_constant(3, 44), 7);
    // the p=3, k=44 table caption says -8; the formula gives -7, and the
    // report surfaces the discrepancy
    let fx = &P3_K44;
    let ns = newspace_for(fx);
    let data = linv_for(fx);
    let (_, depths) = table_and_depths(fx, &ns);
    let report = match_partners(&ns.systems, &data, &depths, None);
    assert_eq!(report.c_formula, 7);
    assert_eq!(report.caption_c, Some(8));
    assert!(
        report.notes.iter().any(|n| n.contains("7") && n.contains("8")),
        "discrepancy surfaced: {:?}",
        report.notes
    );
    println!("criterion 9: PASS (constants match captions; the (3,44) caption discrepancy is surfaced)");
}

#[test]
fn criterion_10a_ap_values() {
    for fx in ALL_FIXTURES {
        let ns = newspace_for(fx);
        assert_eq!(ns.systems.len(), fx.vl.len());
        for f in &ns.systems {
            let half = BigInt::from(fx.p).pow((fx.k - 2) / 2);
            assert_eq!(f.ap, -BigInt::from(f.eps) * &half);
            assert_eq!(&f.ap * &f.ap, BigInt::from(fx.p).pow(fx.k - 2));
        }
    }
    println!("criterion 10a: PASS (a_p = -eps p^((k-2)/2) for every computed form)");
}

#[test]
fn criterion_10b_trace_det_consistency() {
    for fx in ALL_FIXTURES {
        let ns = newspace_for(fx);
        let space = build_space(fx.tame, fx.p, fx.k).unwrap();
        let sub = new_cuspidal_plus(&space).unwrap();
        let w = space.atkin_lehner_matrix_full(fx.p);
        let pm = BigInt::from(fx.p).pow(fx.m);
        let oracle_primes: Vec<u64> = primes_for(fx).into_iter().take(20).collect();
        assert!(oracle_primes.len() >= 20);
        for eps in [1i8, -1] {
            let mut shifted = w.clone();
            for i in 0..shifted.rows {
                *shifted.at_mut(i, i) -= rat_int(eps as i64);
            }
            let block = sub.intersect_kernel(&shifted).integralized();
            let forms: Vec<&Eigensystem> =
                ns.systems.iter().filter(|s| s.eps == eps).collect();
            assert_eq!(block.dim(), forms.len());
            if forms.is_empty() {
                continue;
            }
            for &ell in &oracle_primes {
                let a = exact_block_hecke(&space, &block, ell);
                let mut tr = Rat::zero();
                for i in 0..a.rows {
                    tr += a.at(i, i);
                }
                // determinant via the constant charpoly coefficient
                let cp = a.charpoly();
                let det = if a.rows % 2 == 0 { cp[0].clone() } else { -cp[0].clone() };
                assert!(tr.denom().is_one() && det.denom().is_one());
                let tr_expect = tr.numer().mod_floor(&pm);
                let det_expect = det.numer().mod_floor(&pm);
                let tr_got = forms
                    .iter()
                    .fold(BigInt::zero(), |acc, f| (acc + BigInt::from(f.aell[&ell].clone())).mod_floor(&pm));
                let det_got = forms
                    .iter()
                    .fold(BigInt::one(), |acc, f| (acc * BigInt::from(f.aell[&ell].clone())).mod_floor(&pm));
                assert_eq!(tr_got, tr_expect, "trace of T_{ell}, eps {eps}, (N={}, p={}, k={})", fx.tame, fx.p, fx.k);
                assert_eq!(det_got, det_expect, "det of T_{ell}, eps {eps}, (N={}, p={}, k={})", fx.tame, fx.p, fx.k);
            }
        }
    }
    println!("criterion 10b: PASS (trace and determinant consistency at 20 primes per fixture)");
}

#[test]
fn criterion_10c_hensel_matches_enumeration() {
    // Independent oracle: breadth-first residue refinement. Survivors at a
    // deep level cluster around the genuine roots (residues merely close to
    // a root also survive the sieve), so they are grouped by p-adic
    // closeness: with separation bound D = vp(disc) + 1 and sieve depth
    // T = 2D + m + 2, survivors of one root agree mod p^(T - D) while
    // survivors of distinct roots differ already below level D. One group
    // per root, each Newton-certified.
    fn enumeration_roots(f: &IntPoly, p: u64, m: u32, vdisc: u32) -> Vec<BigUint> {
        let d_sep = vdisc + 1;
        let t_max = 2 * d_sep + m + 2;
        let mut frontier: Vec<BigUint> = (0..p)
            .map(BigUint::from)
            .filter(|r| {
                let pm = BigUint::from(p);
                f.eval_mod(r, &pm).is_zero()
            })
            .collect();
        for t in 1..t_max {
            let modulus = BigUint::from(p).pow(t + 1);
            let step = BigUint::from(p).pow(t);
            let mut next = Vec::new();
            for r in &frontier {
                for s in 0..p {
                    let cand = r + &step * BigUint::from(s);
                    if f.eval_mod(&cand, &modulus).is_zero() {
                        next.push(cand);
                    }
                }
            }
            frontier = next;
            assert!(frontier.len() <= 1 << 20, "sieve stays bounded");
        }
        let modulus = BigUint::from(p).pow(t_max);
        let group_step = BigUint::from(p).pow(t_max - d_sep);
        let mut groups: Vec<BigUint> = Vec::new();
        for r in &frontier {
            let same = groups.iter().any(|g| {
                let d = if r >= g { r - g } else { (r + &modulus) - g };
                (d.clone() % &group_step).is_zero() || ((&modulus - d) % &group_step).is_zero()
            });
            if !same {
                groups.push(r.clone());
            }
        }
        assert!(groups.len() <= f.degree(), "at most deg f roots");
        // every group representative carries a Newton certificate
        let fprime: Vec<BigInt> = f
            .coeffs()
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect();
        let pm = BigUint::from(p).pow(m);
        let mut out = Vec::new();
        for r in groups {
            let rb = BigInt::from(r.clone());
            let fr = f.eval(&rb);
            let dfr = {
                let mut acc = BigInt::zero();
                for c in fprime.iter().rev() {
                    acc = acc * &rb + c;
                }
                acc
            };
            let vf = match vp_int(&fr, p) {
                Valuation::Finite(v) => v,
                Valuation::Infinite => i64::MAX,
            };
            let vd = vp_int(&dfr, p).finite().unwrap_or(i64::MAX / 4);
            assert!(vf > 2 * vd, "group representative is Newton-certified");
            out.push(r % &pm);
        }
        out.sort();
        out
    }

    let mut checked = 0usize;
    let mut squarefree = 0usize;
    for p in [3u64, 5] {
        for a2 in -20i64..=20 {
            for a1 in -20i64..=20 {
                for a0 in -20i64..=20 {
                    let f = IntPoly::from_i64(&[a0, a1, a2, 1]).unwrap();
                    let disc = f.discriminant();
                    checked += 1;
                    if disc.is_zero() {
                        assert_eq!(hensel_roots(&f, p, 2), Err(PadicError::NotSquarefree));
                        continue;
                    }
                    squarefree += 1;
                    let vdisc = vp_int(&disc, p).finite().unwrap() as u32;
                    // enumeration once at the deepest precision, reused per M
                    let reference = enumeration_roots(&f, p, 4, vdisc);
                    for m in 1..=4u32 {
                        let pm = BigUint::from(p).pow(m);
                        let mut expect: Vec<BigUint> =
                            reference.iter().map(|r| r % &pm).collect();
                        expect.sort();
                        let got = hensel_roots(&f, p, m).unwrap();
                        assert_eq!(got, expect, "f = x^3 + {a2} x^2 + {a1} x + {a0}, p = {p}, M = {m}");
                    }
                }
            }
        }
    }
    println!(
        "criterion 10c: PASS (hensel roots equal certified enumeration on {squarefree} squarefree of {checked} monic cubics, p = 3 and 5, M <= 4)"
    );
}

#[test]
fn criterion_10d_partition_refinement() {
    for fx in ALL_FIXTURES {
        let ns = newspace_for(fx);
        let (table, _) = table_and_depths(fx, &ns);
        for w in table.rows.windows(2) {
            let (_, coarse) = &w[0];
            let (_, fine) = &w[1];
            for class in fine {
                assert!(
                    coarse.iter().any(|c| class.iter().all(|x| c.contains(x))),
                    "partition refines monotonically"
                );
            }
            assert!(fine.len() > coarse.len(), "strict refinement at changepoints");
        }
        // the final row is all singletons at M beyond the maximum depth
        assert!(!table.saturated);
        assert!(table.rows.last().unwrap().1.iter().all(|c| c.len() == 1));
    }
    println!("criterion 10d: PASS (refinement monotonicity on all fixtures)");
}

#[test]
#[ignore = "proof-grade rerun of criterion 1 at the full Sturm bound; run explicitly"]
fn criterion_11_proof_grade_sturm_run() {
    let fx = &P3_K44;
    let bound = sturm_bound(fx.tame, fx.p, fx.k);
    assert_eq!(bound.bound, 1186);
    let params = NewspaceParams {
        tame: fx.tame,
        p: fx.p,
        k: fx.k,
        precision: fx.m,
        cutoff: bound.bound as u64,
    };
    let ns_sturm = compute_newspace(&params).unwrap();
    let ns_300 = newspace_for(fx);
    let primes_sturm = sweep_primes(fx.tame * fx.p as i64, bound.bound as u64);
    let primes_300 = primes_for(fx);
    let d_sturm = depth_matrix(&ns_sturm.systems, &primes_sturm).unwrap();
    let d_300 = depth_matrix(&ns_300.systems, &primes_300).unwrap();
    assert_eq!(d_sturm, d_300, "depths unchanged between cutoff 300 and the Sturm bound");
    println!("criterion 11: PASS (proof-grade depths identical to cutoff 300)");
}

// determinism of the archive bytes: recompute and compare (also exercised
// through the CLI cache path)
#[test]
fn archive_bytes_deterministic() {
    let fx = &P7_K20;
    let ns1 = newspace_for(fx);
    let params = NewspaceParams {
        tame: fx.tame,
        p: fx.p,
        k: fx.k,
        precision: fx.m,
        cutoff: 300,
    };
    let ns2 = compute_newspace(&params).unwrap();
    let a1 = serde_json::to_string_pretty(&heckedepth::eigensolve::Archive::from_newspace(&ns1)).unwrap();
    let a2 = serde_json::to_string_pretty(&heckedepth::eigensolve::Archive::from_newspace(&ns2)).unwrap();
    assert_eq!(a1, a2, "identical archive bytes on recompute");
}

// the k=44 and k=48 verification reports must agree (the two weights carry
// identical congruence data)
#[test]
fn weight_44_and_48_reports_identical() {
    let mut summaries = Vec::new();
    for fx in [&P3_K44, &P3_K48] {
        let ns = newspace_for(fx);
        let data = linv_for(fx);
        let (_, depths) = table_and_depths(fx, &ns);
        let report = match_partners(&ns.systems, &data, &depths, None);
        assert!(report.pass);
        let mut rows: Vec<(i64, i64, String, Option<(i64, bool)>)> = report
            .checks
            .iter()
            .map(|c| {
                (
                    c.v_l,
                    c.required_depth,
                    c.measured_depth.map(|d| d.to_string()).unwrap_or_default(),
                    c.cancellation,
                )
            })
            .collect();
        rows.sort();
        summaries.push(rows);
    }
    assert_eq!(summaries[0], summaries[1]);
}
