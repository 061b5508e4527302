//! Command-line driver: compute eigensystem archives, emit depth tables,
//! audit partner predictions against L-invariant records, and query the
//! local semistable predicates.
//!
//! Exit codes: 0 success; 2 when eigensystem blocks were excluded because
//! the complete-splitting assumption fails; 3 when a verification audit
//! reports FAIL.

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use heckedepth::cache::Cache;
use heckedepth::congruence::{changepoint_table, depth_matrix, render_csv, render_markdown, sturm_bound};
use heckedepth::eigensolve::{
    compute_newspace_cached, Archive, Eigensystem, NewspaceParams,
};
use heckedepth::padic::PadicNumber;
use heckedepth::semistable::{c_constant, is_admissible, opposite_sign_predicted_depth};
use heckedepth::verify::{
    an_doubling_check, cancellation_report, deep_pairs, match_partners, parse_linv,
    validate_join, LInvariantData,
};
use num_bigint::BigUint;
use num_traits::Num;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "heckedepth", version, about = "p-adic Hecke eigensystems of p-new eigenforms and their congruence depth tables")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Markdown,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute all eigensystems of the new cuspidal plus-subspace and write
    /// the archive file.
    Newspace {
        /// tame level N (the space has level N p)
        #[arg(long, default_value_t = 1)]
        tame: i64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
        /// target precision M: eigenvalues are reported mod p^M
        #[arg(long)]
        precision: u32,
        /// prime cutoff for the eigenvalue sweep
        #[arg(long, default_value_t = 300)]
        lmax: u64,
        /// sweep all primes up to the full Sturm bound (proof-grade, slow)
        #[arg(long)]
        sturm: bool,
        /// output path (defaults to newspace_N{N}_p{p}_k{k}_M{M}.json)
        #[arg(long)]
        out: Option<PathBuf>,
        /// cache directory (overrides the HECKEDEPTH_CACHE variable)
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Emit the congruence-depth changepoint table of an archive.
    DepthTable {
        #[arg(long)]
        archive: PathBuf,
        /// L-invariant record file; classes are labeled by valuations when present
        #[arg(long)]
        linv: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "markdown")]
        format: TableFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Audit the partner prediction: each admissible form must have a unique
    /// opposite-sign partner of equal valuation and depth >= -vL + 1.
    Verify {
        #[arg(long)]
        archive: PathBuf,
        #[arg(long)]
        linv: PathBuf,
        /// use the caption value of C from the record metadata instead of
        /// the formula value
        #[arg(long)]
        use_caption_c: bool,
    },
    /// Cancellation report: v_p(L_f + L_g) for each matched pair.
    Cancellation {
        #[arg(long)]
        archive: PathBuf,
        #[arg(long)]
        linv: PathBuf,
        #[arg(long)]
        use_caption_c: bool,
    },
    /// Local semistable queries: the constant C, admissibility, and the
    /// opposite-sign predicted depth.
    Local {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
        /// valuation of an L-invariant to test for admissibility
        #[arg(long, allow_hyphen_values = true)]
        vl: Option<i64>,
        /// full L-invariant as val,mantissa,precision
        #[arg(long, allow_hyphen_values = true)]
        l: Option<String>,
        /// second L-invariant (opposite sign) as val,mantissa,precision
        #[arg(long, allow_hyphen_values = true)]
        l_other: Option<String>,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(1);
        }
    }
}

fn load_archive(path: &PathBuf) -> Result<(Archive, Vec<Eigensystem>)> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading archive {}", path.display()))?;
    let arch: Archive = serde_json::from_str(&text).context("parsing archive")?;
    let systems = arch.to_systems();
    Ok((arch, systems))
}

fn load_linv(path: &PathBuf, p: u64) -> Result<LInvariantData> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading records {}", path.display()))?;
    Ok(parse_linv(&text, p)?)
}

fn archive_primes(systems: &[Eigensystem]) -> Vec<u64> {
    systems.first().map(|s| s.aell.keys().copied().collect()).unwrap_or_default()
}

fn parse_padic(p: u64, text: &str) -> Result<PadicNumber> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        bail!("expected val,mantissa,precision");
    }
    let val: i64 = parts[0].parse()?;
    let mant = BigUint::from_str_radix(parts[1], 10)?;
    let prec: u32 = parts[2].parse()?;
    Ok(PadicNumber::new(p, val, mant, prec)?)
}

fn run(cli: Cli) -> Result<i32> {
    match cli.cmd {
        Cmd::Newspace { tame, p, k, precision, lmax, sturm, out, cache_dir } => {
            let cutoff = if sturm {
                let s = sturm_bound(tame, p, k);
                eprintln!(
                    "proof-grade sweep: N' = {}, index {}, bound {}",
                    s.nprime, s.index, s.bound
                );
                s.bound as u64
            } else {
                lmax
            };
            let cache = cache_dir.map(Cache::at).or_else(Cache::from_env);
            let params = NewspaceParams { tame, p, k, precision, cutoff };
            let ns = compute_newspace_cached(&params, cache.as_ref())?;
            for d in &ns.diagnostics {
                eprintln!(
                    "block eps={}: dim {}, separating operator {}, disc valuation {}, working precision {}",
                    d.eps, d.dim, d.separating_op, d.disc_valuation, d.working_precision
                );
            }
            for ex in &ns.excluded {
                eprintln!(
                    "excluded block (eps = {}, degree {}): the complete-splitting assumption fails \
                     (p is not split in the Hecke field of some form in this block); its eigensystems \
                     take values in a higher-degree extension of Q_p and are reported, not computed",
                    ex.eps, ex.degree
                );
            }
            let arch = Archive::from_newspace(&ns);
            let text = serde_json::to_string_pretty(&arch)? + "\n";
            let path = out.unwrap_or_else(|| {
                PathBuf::from(format!("newspace_N{tame}_p{p}_k{k}_M{precision}.json"))
            });
            std::fs::write(&path, text)
                .with_context(|| format!("writing {}", path.display()))?;
            eprintln!("wrote {} forms to {}", arch.forms.len(), path.display());
            Ok(if ns.excluded.is_empty() { 0 } else { 2 })
        }
        Cmd::DepthTable { archive, linv, format, out } => {
            let (arch, systems) = load_archive(&archive)?;
            let primes = archive_primes(&systems);
            let table = changepoint_table(&systems, &primes)?;
            let labels: Box<dyn Fn(usize) -> String> = match linv {
                Some(path) => {
                    let data = load_linv(&path, arch.p)?;
                    validate_join(&data, &systems)?;
                    let map: std::collections::BTreeMap<usize, i64> =
                        data.records.iter().map(|r| (r.index, r.v_l)).collect();
                    Box::new(move |i| map.get(&i).map(|v| v.to_string()).unwrap_or_else(|| i.to_string()))
                }
                None => {
                    eprintln!("no record file given: classes are labeled by form index");
                    Box::new(|i| i.to_string())
                }
            };
            let text = match format {
                TableFormat::Markdown => render_markdown(&table, &*labels),
                TableFormat::Csv => render_csv(&table, &*labels),
            };
            match out {
                Some(path) => std::fs::write(&path, text)?,
                None => print!("{text}"),
            }
            Ok(0)
        }
        Cmd::Verify { archive, linv, use_caption_c } => {
            let (arch, systems) = load_archive(&archive)?;
            let data = load_linv(&linv, arch.p)?;
            validate_join(&data, &systems)?;
            let primes = archive_primes(&systems);
            let depths = depth_matrix(&systems, &primes)?;
            let c_override = if use_caption_c { data.caption_c() } else { None };
            let report = match_partners(&systems, &data, &depths, c_override);
            print!("{}", report.render_text());
            let (doubling, witnesses) = an_doubling_check(&data, arch.p, arch.k, c_override);
            if doubling {
                println!("doubling check: every admissible valuation has even multiplicity");
            } else {
                println!("doubling check FAIL: odd multiplicity at {witnesses:?}");
            }
            Ok(if report.pass && doubling { 0 } else { 3 })
        }
        Cmd::Cancellation { archive, linv, use_caption_c } => {
            let (arch, systems) = load_archive(&archive)?;
            let data = load_linv(&linv, arch.p)?;
            validate_join(&data, &systems)?;
            let primes = archive_primes(&systems);
            let depths = depth_matrix(&systems, &primes)?;
            let c_override = if use_caption_c { data.caption_c() } else { None };
            let pairs = deep_pairs(&systems, &data, &depths);
            let entries = cancellation_report(&data, &pairs, arch.p, arch.k, c_override)?;
            let c = c_override.unwrap_or_else(|| c_constant(arch.p, arch.k));
            for e in &entries {
                println!(
                    "[{}, {}]{}",
                    e.v_sum,
                    e.v_l,
                    if e.strictly_above_minus_c { "" } else { "  (NOT strictly above -C)" }
                );
            }
            println!("all sum valuations strictly above -C = {}: {}", -c,
                entries.iter().all(|e| e.strictly_above_minus_c));
            Ok(0)
        }
        Cmd::Local { p, k, vl, l, l_other } => {
            let c = c_constant(p, k);
            println!("C_(p,k) = {c} (admissible means vL < {})", -c);
            if let Some(v) = vl {
                println!("vL = {v}: admissible = {}", is_admissible(v, p, k));
            }
            if let (Some(a), Some(b)) = (l.as_deref(), l_other.as_deref()) {
                let la = parse_padic(p, a)?;
                let lb = parse_padic(p, b)?;
                match opposite_sign_predicted_depth(&la, &lb, p, k)? {
                    Some(d) => println!("opposite-sign predicted congruence depth: {d}"),
                    None => println!("opposite-sign prediction does not apply (admissibility or cancellation hypothesis fails)"),
                }
            }
            Ok(0)
        }
    }
}
