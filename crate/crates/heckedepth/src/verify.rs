//! Ingestion of L-invariant records, the join against computed
//! eigensystems, and the audits: unique opposite-sign partner at the
//! predicted depth, doubling of admissible valuations, and the cancellation
//! pattern of sums of paired L-invariants.

use crate::congruence::Depth;
use crate::eigensolve::Eigensystem;
use crate::padic::{PadicNumber, PadicSum};
use crate::semistable::c_constant;
use num_bigint::BigUint;
use num_traits::Num;
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("record count {records} does not match eigensystem count {systems}")]
    CountMismatch { records: usize, systems: usize },
    #[error("sign mismatch at index {index}: record says {record}, computed {computed}")]
    SignMismatch { index: usize, record: i8, computed: i8 },
    #[error("malformed record at line {line}: {reason}")]
    MalformedRecord { line: usize, reason: String },
    #[error("duplicate record index {0}")]
    DuplicateIndex(usize),
    #[error("record index {0} matches no eigensystem")]
    UnmatchedIndex(usize),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
}

/// One ingested L-invariant record, joined to an eigensystem by index.
#[derive(Debug, Clone, PartialEq)]
pub struct LInvariantRecord {
    pub index: usize,
    pub eps: i8,
    pub v_l: i64,
    /// full value when the source provides one (needed for cancellation)
    pub l: Option<PadicNumber>,
}

/// A parsed record file: records plus `#!key value` metadata directives.
#[derive(Debug, Clone, PartialEq)]
pub struct LInvariantData {
    pub records: Vec<LInvariantRecord>,
    pub metadata: BTreeMap<String, String>,
}

impl LInvariantData {
    pub fn caption_c(&self) -> Option<i64> {
        self.metadata.get("caption-c").and_then(|s| s.parse().ok())
    }

    pub fn record_for(&self, index: usize) -> Option<&LInvariantRecord> {
        self.records.iter().find(|r| r.index == index)
    }
}

/// Parse the record format: one record per line,
/// `index eps vL [L_valuation L_mantissa L_precision]`,
/// `#` comments, `#!key value` metadata.
pub fn parse_linv(text: &str, p: u64) -> Result<LInvariantData, VerifyError> {
    let mut records = Vec::new();
    let mut metadata = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("#!") {
            let mut it = rest.trim().splitn(2, ' ');
            if let (Some(k), Some(v)) = (it.next(), it.next()) {
                metadata.insert(k.to_string(), v.trim().to_string());
            }
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bad = |reason: &str| VerifyError::MalformedRecord {
            line: lineno + 1,
            reason: reason.to_string(),
        };
        if fields.len() != 3 && fields.len() != 6 {
            return Err(bad("expected 3 or 6 fields"));
        }
        let index: usize = fields[0].parse().map_err(|_| bad("bad index"))?;
        let eps: i8 = match fields[1] {
            "+1" | "1" => 1,
            "-1" => -1,
            _ => return Err(bad("eps must be +1 or -1")),
        };
        let v_l: i64 = fields[2].parse().map_err(|_| bad("bad valuation"))?;
        let l = if fields.len() == 6 {
            let lv: i64 = fields[3].parse().map_err(|_| bad("bad L valuation"))?;
            let mant = BigUint::from_str_radix(fields[4], 10).map_err(|_| bad("bad mantissa"))?;
            let prec: u32 = fields[5].parse().map_err(|_| bad("bad precision"))?;
            let num = PadicNumber::new(p, lv, mant, prec)
                .map_err(|_| bad("mantissa is not a unit"))?;
            if lv != v_l {
                return Err(bad("vL does not equal the valuation of L"));
            }
            Some(num)
        } else {
            None
        };
        records.push(LInvariantRecord { index, eps, v_l, l });
    }
    Ok(LInvariantData { records, metadata })
}

/// Validate the join against computed eigensystems: counts equal, indices
/// in bijection, Atkin-Lehner signs match.
pub fn validate_join(
    data: &LInvariantData,
    systems: &[Eigensystem],
) -> Result<(), VerifyError> {
    if data.records.len() != systems.len() {
        return Err(VerifyError::CountMismatch {
            records: data.records.len(),
            systems: systems.len(),
        });
    }
    let mut seen = std::collections::BTreeSet::new();
    for r in &data.records {
        if !seen.insert(r.index) {
            return Err(VerifyError::DuplicateIndex(r.index));
        }
        let sys = systems
            .iter()
            .find(|s| s.index == r.index)
            .ok_or(VerifyError::UnmatchedIndex(r.index))?;
        if sys.eps != r.eps {
            return Err(VerifyError::SignMismatch {
                index: r.index,
                record: r.eps,
                computed: sys.eps,
            });
        }
    }
    Ok(())
}

/// The three clauses checked per admissible form.
#[derive(Debug, Clone)]
pub struct PartnerCheck {
    pub form: usize,
    pub v_l: i64,
    /// -v_l + 1
    pub required_depth: i64,
    /// forms of opposite sign, equal valuation, and sufficient depth
    pub candidates: Vec<usize>,
    pub partner: Option<usize>,
    pub measured_depth: Option<Depth>,
    /// (v_p(L_f + L_g), v_sum >= -C), when both L values are present
    pub cancellation: Option<(i64, bool)>,
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub tame: i64,
    pub p: u64,
    pub k: u32,
    pub c_formula: i64,
    pub c_used: i64,
    pub caption_c: Option<i64>,
    pub checks: Vec<PartnerCheck>,
    pub pass: bool,
    pub violations: Vec<String>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "partner audit for N={}, p={}, k={}\nC_(p,k) formula value: {}, used: {}\n",
            self.tame, self.p, self.k, self.c_formula, self.c_used
        ));
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        for c in &self.checks {
            let partner = match c.partner {
                Some(g) => format!("{g}"),
                None => "NONE".to_string(),
            };
            let depth = match &c.measured_depth {
                Some(d) => format!("{d}"),
                None => "-".to_string(),
            };
            let cancel = match &c.cancellation {
                Some((v, ok)) => format!(", v(L_f + L_g) = {v} ({})", if *ok { "ok" } else { "FAIL" }),
                None => String::new(),
            };
            out.push_str(&format!(
                "form {} (vL = {}): partner {partner}, needs depth >= {}, measured {depth}{cancel}\n",
                c.form, c.v_l, c.required_depth
            ));
        }
        for v in &self.violations {
            out.push_str(&format!("violation: {v}\n"));
        }
        out.push_str(if self.pass { "RESULT: PASS\n" } else { "RESULT: FAIL\n" });
        out
    }
}

/// The partner audit: every admissible form must admit exactly one form of
/// opposite sign, equal L-invariant valuation, and congruence depth at
/// least -v_L + 1; when full L values are present the cancellation clause
/// v_p(L_f + L_g) >= -C is checked too.
pub fn match_partners(
    systems: &[Eigensystem],
    data: &LInvariantData,
    depths: &[Vec<Depth>],
    c_override: Option<i64>,
) -> VerificationReport {
    let (tame, p, k) = systems
        .first()
        .map(|s| (s.tame, s.p, s.k))
        .unwrap_or((1, 2, 4));
    let c_formula = c_constant(p, k);
    let c_used = c_override.unwrap_or(c_formula);
    let caption_c = data.caption_c();
    let mut notes = Vec::new();
    if let Some(cc) = caption_c {
        if cc != c_formula {
            notes.push(format!(
                "constant discrepancy: formula gives C = {c_formula} while the table caption says {cc}; the {} value is in use",
                if c_used == c_formula { "formula" } else { "caption" }
            ));
        }
    }
    let by_index: BTreeMap<usize, &LInvariantRecord> =
        data.records.iter().map(|r| (r.index, r)).collect();
    let mut checks = Vec::new();
    let mut violations = Vec::new();
    for f in systems {
        let rf = match by_index.get(&f.index) {
            Some(r) => *r,
            None => continue,
        };
        if rf.v_l >= -c_used {
            continue; // not admissible
        }
        let required = -rf.v_l + 1;
        let mut candidates = Vec::new();
        for g in systems {
            if g.index == f.index {
                continue;
            }
            let rg = match by_index.get(&g.index) {
                Some(r) => *r,
                None => continue,
            };
            if rg.eps != -rf.eps || rg.v_l != rf.v_l {
                continue;
            }
            if depths[f.index][g.index].at_least(required as u32) {
                candidates.push(g.index);
            }
        }
        let partner = if candidates.len() == 1 { Some(candidates[0]) } else { None };
        if candidates.is_empty() {
            violations.push(format!(
                "form {} (vL = {}): no opposite-sign partner with equal valuation and depth >= {}",
                f.index, rf.v_l, required
            ));
        } else if candidates.len() > 1 {
            violations.push(format!(
                "form {} (vL = {}): partner not unique: {:?}",
                f.index, rf.v_l, candidates
            ));
        }
        let measured_depth = partner.map(|g| depths[f.index][g]);
        let cancellation = partner.and_then(|g| {
            let lf = rf.l.as_ref()?;
            let lg = by_index.get(&g)?.l.as_ref()?;
            match lf.add(lg) {
                PadicSum::Resolved(s) => {
                    let v = s.val.finite().expect("resolved sum is nonzero");
                    let ok = v >= -c_used;
                    if !ok {
                        violations.push(format!(
                            "pair ({}, {g}): v(L_f + L_g) = {v} < {}",
                            f.index,
                            -c_used
                        ));
                    }
                    Some((v, ok))
                }
                PadicSum::ZeroToPrecision(bound) => {
                    // cancellation bound certainly clears -C
                    Some((bound, bound >= -c_used))
                }
            }
        });
        checks.push(PartnerCheck {
            form: f.index,
            v_l: rf.v_l,
            required_depth: required,
            candidates,
            partner,
            measured_depth,
            cancellation,
        });
    }
    let pass = violations.is_empty();
    VerificationReport {
        tame,
        p,
        k,
        c_formula,
        c_used,
        caption_c,
        checks,
        pass,
        violations,
        notes,
    }
}

/// Doubling check: every admissible valuation occurs with even
/// multiplicity. Returns the odd-multiplicity witnesses.
pub fn an_doubling_check(
    data: &LInvariantData,
    p: u64,
    k: u32,
    c_override: Option<i64>,
) -> (bool, Vec<i64>) {
    let c = c_override.unwrap_or(c_constant(p, k));
    let mut mult: BTreeMap<i64, usize> = BTreeMap::new();
    for r in &data.records {
        if r.v_l < -c {
            *mult.entry(r.v_l).or_default() += 1;
        }
    }
    let witnesses: Vec<i64> =
        mult.iter().filter(|(_, m)| *m % 2 == 1).map(|(v, _)| *v).collect();
    (witnesses.is_empty(), witnesses)
}

/// One matched pair in the cancellation report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CancellationEntry {
    /// v_p(L_f + L_g)
    pub v_sum: i64,
    /// common valuation of the pair
    pub v_l: i64,
    /// whether v_sum is strictly larger than -C_(p,k)
    pub strictly_above_minus_c: bool,
}

/// Cancellation amounts for matched pairs, sorted by v_l descending
/// (shallowest pair first). Requires full L values at sufficient precision.
pub fn cancellation_report(
    data: &LInvariantData,
    pairs: &[(usize, usize)],
    p: u64,
    k: u32,
    c_override: Option<i64>,
) -> Result<Vec<CancellationEntry>, VerifyError> {
    let c = c_override.unwrap_or(c_constant(p, k));
    let mut out = Vec::new();
    for &(a, b) in pairs {
        let ra = data
            .record_for(a)
            .ok_or(VerifyError::UnmatchedIndex(a))?;
        let rb = data
            .record_for(b)
            .ok_or(VerifyError::UnmatchedIndex(b))?;
        let (la, lb) = match (&ra.l, &rb.l) {
            (Some(x), Some(y)) => (x, y),
            _ => {
                return Err(VerifyError::InsufficientPrecision(format!(
                    "pair ({a}, {b}) lacks full L values"
                )))
            }
        };
        let v_sum = match la.add(lb) {
            PadicSum::Resolved(s) => s.val.finite().expect("resolved sum is nonzero"),
            PadicSum::ZeroToPrecision(_) => {
                return Err(VerifyError::InsufficientPrecision(format!(
                    "sum valuation for pair ({a}, {b}) is not resolved at the stored precision"
                )))
            }
        };
        debug_assert_eq!(ra.v_l, rb.v_l);
        out.push(CancellationEntry {
            v_sum,
            v_l: ra.v_l,
            strictly_above_minus_c: v_sum > -c,
        });
    }
    out.sort_by(|x, y| y.v_l.cmp(&x.v_l).then(y.v_sum.cmp(&x.v_sum)));
    Ok(out)
}

/// The matched pairs of a report, each listed once.
pub fn matched_pairs(report: &VerificationReport) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for c in &report.checks {
        if let Some(g) = c.partner {
            let pair = (c.form.min(g), c.form.max(g));
            if !out.contains(&pair) {
                out.push(pair);
            }
        }
    }
    out
}

/// Deeply congruent pairs regardless of admissibility: for every form, the
/// unique partner of opposite sign, equal valuation, and depth at least
/// -v_L + 1. This is the pairing the cancellation data is recorded for;
/// the admissibility cut only enters the partner audit.
pub fn deep_pairs(
    systems: &[Eigensystem],
    data: &LInvariantData,
    depths: &[Vec<Depth>],
) -> Vec<(usize, usize)> {
    let by_index: BTreeMap<usize, &LInvariantRecord> =
        data.records.iter().map(|r| (r.index, r)).collect();
    let mut out = Vec::new();
    for f in systems {
        let rf = match by_index.get(&f.index) {
            Some(r) => *r,
            None => continue,
        };
        let required = -rf.v_l + 1;
        if required <= 0 {
            continue;
        }
        let candidates: Vec<usize> = systems
            .iter()
            .filter(|g| {
                g.index != f.index
                    && by_index.get(&g.index).map_or(false, |rg| {
                        rg.eps == -rf.eps && rg.v_l == rf.v_l
                    })
                    && depths[f.index][g.index].at_least(required as u32)
            })
            .map(|g| g.index)
            .collect();
        if candidates.len() == 1 {
            let g = candidates[0];
            let pair = (f.index.min(g), f.index.max(g));
            if !out.contains(&pair) {
                out.push(pair);
            }
        }
    }
    out
}
