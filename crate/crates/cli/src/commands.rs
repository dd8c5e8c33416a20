use std::num::NonZeroU64;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use czlab_core::cpn::{trivial_cz_indices, PointMultipliers};
use czlab_core::index::witness_search_bound;
use czlab_core::rational::{format_rational, parse_rational};
use czlab_core::{
    action_spectrum, check_condition_a, check_condition_b, check_matching_hypotheses, cz_index,
    floquet_multipliers, index_sequence, is_balanced, is_trivial_loop, jump_sequence,
    matching_rotation, mean_index, path_intersection, recapped_fixed_points,
    reconstruct_from_jumps, resonance_lattice, trivial_mean_indices, verify_intersect_divisibility,
    ConditionA, ConditionB, Horizon, IndexCycle, Rational, Reconstruction,
};
use serde::Serialize;
use serde_json::json;

use crate::error::{CliError, CliResult};
use crate::io;
use crate::suites::{run_suite, Suite};

pub const SEED_ENV: &str = "CZLAB_SEED";

#[derive(Debug, Parser)]
#[command(name = "czlab", version, about = "Exact Conley-Zehnder index calculus")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for randomized suites. CZLAB_SEED takes precedence when set.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "out", value_enum, global = true, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Index and jump sequences of a descriptor.
    IndexSeq {
        #[arg(long)]
        descriptor: PathBuf,
        #[arg(long)]
        kmax: u64,
    },
    /// Conditions (a) and (b) for each divisor.
    Divisibility {
        #[arg(long)]
        descriptor: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        l: Vec<NonZeroU64>,
        /// Scan bound for condition (a); defaults to 4 l D.
        #[arg(long)]
        kmax: Option<u64>,
    },
    /// Identify the pool member generating a jump sequence.
    Reconstruct {
        /// CSV with `k` and `jump` columns, or a JSON integer array.
        #[arg(long)]
        jumps: PathBuf,
        /// JSON array of descriptors.
        #[arg(long)]
        pool: PathBuf,
    },
    /// Intersection numbers of iterated arcs with the index cycle.
    TorusVerify {
        #[arg(long)]
        descriptor: PathBuf,
        #[arg(long, default_value = "1")]
        l: NonZeroU64,
        #[arg(long)]
        kmax: u64,
        /// Lifted path to intersect with the descriptor's index cycle instead.
        #[arg(long)]
        path: Option<PathBuf>,
    },
    /// Recapped fixed points and action spectrum of a rotation.
    Rotation {
        #[arg(long)]
        rotation: PathBuf,
        #[arg(long, value_parser = parse_rational_arg, allow_hyphen_values = true)]
        lo: Option<Rational>,
        #[arg(long, value_parser = parse_rational_arg, allow_hyphen_values = true)]
        hi: Option<Rational>,
    },
    /// Matching rotation of a balanced fixed-point table.
    Match {
        #[arg(long)]
        table: PathBuf,
        #[arg(long, default_value_t = 1)]
        horizon: u64,
        /// Also list resonance vectors with entries bounded by this.
        #[arg(long)]
        resonance_bound: Option<u32>,
    },
    /// Seeded property suite.
    VerifySuite {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

fn parse_rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// Rendered report and whether it records a property violation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub violation: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome {
            text,
            violation: false,
        }
    }

    pub fn exit_code(&self) -> i32 {
        i32::from(self.violation)
    }
}

/// `CZLAB_SEED` if set, else `--seed`.
pub fn effective_seed(flag: u64, env: Option<&str>) -> CliResult<u64> {
    match env {
        Some(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Schema(format!("{SEED_ENV}={v} is not a 64-bit unsigned integer"))),
        None => Ok(flag),
    }
}

pub fn run(config: &RunConfig, seed: u64) -> CliResult<Outcome> {
    let csv = config.format == Format::Csv;
    match &config.command {
        Command::IndexSeq { descriptor, kmax } => index_seq(descriptor, *kmax, csv),
        Command::Divisibility { descriptor, l, kmax } => divisibility(descriptor, l, *kmax, csv),
        Command::Reconstruct { jumps, pool } => reconstruct(jumps, pool, csv),
        Command::TorusVerify {
            descriptor,
            l,
            kmax,
            path,
        } => torus_verify(descriptor, *l, *kmax, path.as_deref(), csv),
        Command::Rotation { rotation: file, lo, hi } => rotation(file, *lo, *hi, csv),
        Command::Match {
            table,
            horizon,
            resonance_bound,
        } => match_table(table, *horizon, *resonance_bound, csv),
        Command::VerifySuite { suite, trials } => verify_suite(*suite, seed, *trials, csv),
    }
}

#[derive(Serialize)]
struct SequenceRow {
    k: u64,
    mu: i64,
    jump: i64,
}

fn index_seq(path: &std::path::Path, kmax: u64, csv: bool) -> CliResult<Outcome> {
    let d = io::read_descriptor(path)?;
    let mu = index_sequence(&d, kmax)?;
    let jumps = jump_sequence(&d, kmax)?;
    let text = if csv {
        let rows = (1..=kmax).map(|k| SequenceRow {
            k,
            mu: mu.get(k).expect("within horizon"),
            jump: jumps.get(k).expect("within horizon"),
        });
        io::to_csv(&["k", "mu", "jump"], rows)?
    } else {
        io::to_json(&json!({
            "kmax": kmax,
            "cz_index": cz_index(&d),
            "mean_index": format_rational(&mean_index(&d)),
            "mu": mu.values(),
            "jumps": jumps.values(),
        }))?
    };
    Ok(Outcome::ok(text))
}

#[derive(Serialize)]
struct DivisibilityEntry {
    l: u64,
    condition_b: ConditionB,
    condition_a: ConditionA,
    searched_to: u64,
    witness_bound: u64,
    consistent: bool,
}

#[derive(Serialize)]
struct DivisibilityRow {
    l: u64,
    condition_b: bool,
    condition_a: bool,
    witness_k: Option<u64>,
    searched_to: u64,
    consistent: bool,
}

fn divisibility(path: &std::path::Path, ls: &[NonZeroU64], kmax: Option<u64>, csv: bool) -> CliResult<Outcome> {
    let d = io::read_descriptor(path)?;
    let mut entries = Vec::with_capacity(ls.len());
    for &l in ls {
        let bound = witness_search_bound(&d, l);
        let searched_to = match (kmax, d.horizon()) {
            (Some(k), _) => k,
            (None, Horizon::Finite(h)) => bound.min(h.saturating_sub(1)),
            (None, Horizon::Unbounded) => bound,
        };
        let condition_b = check_condition_b(&d, l);
        let condition_a = check_condition_a(&d, l, searched_to)?;
        // a witness under (b), or none over the full bound without (b)
        let consistent = if condition_b.holds {
            condition_a.holds()
        } else {
            !(condition_a.holds() && searched_to >= bound)
        };
        entries.push(DivisibilityEntry {
            l: l.get(),
            condition_b,
            condition_a,
            searched_to,
            witness_bound: bound,
            consistent,
        });
    }
    let violation = entries.iter().any(|e| !e.consistent);
    let text = if csv {
        let rows = entries.iter().map(|e| DivisibilityRow {
            l: e.l,
            condition_b: e.condition_b.holds,
            condition_a: e.condition_a.holds(),
            witness_k: match e.condition_a {
                ConditionA::Witness { k, .. } => Some(k),
                ConditionA::HoldsUpTo { .. } => None,
            },
            searched_to: e.searched_to,
            consistent: e.consistent,
        });
        io::to_csv(
            &["l", "condition_b", "condition_a", "witness_k", "searched_to", "consistent"],
            rows,
        )?
    } else if violation {
        io::to_json(&json!({ "entries": entries, "instance": d.to_spec() }))?
    } else {
        io::to_json(&json!({ "entries": entries }))?
    };
    Ok(Outcome { text, violation })
}

fn reconstruct(jumps: &std::path::Path, pool: &std::path::Path, csv: bool) -> CliResult<Outcome> {
    let jumps = io::read_jumps(jumps)?;
    let pool = io::read_pool(pool)?;
    let (status, indices, violation) = match reconstruct_from_jumps(&jumps, &pool) {
        Ok(Reconstruction::Unique { index, .. }) => ("unique", vec![index], false),
        Ok(Reconstruction::Ambiguous { indices }) => ("ambiguous", indices, false),
        Err(czlab_core::Error::NoMatch) => ("no_match", vec![], true),
        Err(e) => return Err(e.into()),
    };
    let text = if csv {
        io::to_csv(&["status", "index"], indices.iter().map(|&i| (status, i)))?
    } else {
        let descriptors: Vec<_> = indices.iter().map(|&i| pool[i].to_spec()).collect();
        let mut report = json!({
            "status": status,
            "horizon": jumps.horizon(),
            "indices": indices,
            "descriptors": descriptors,
        });
        if violation {
            report["jumps"] = json!(jumps.values());
        }
        io::to_json(&report)?
    };
    Ok(Outcome { text, violation })
}

#[derive(Serialize)]
struct ArcRow {
    k: u64,
    jump: i64,
    intersection: i64,
}

fn torus_verify(
    descriptor: &std::path::Path,
    l: NonZeroU64,
    kmax: u64,
    path: Option<&std::path::Path>,
    csv: bool,
) -> CliResult<Outcome> {
    let d = io::read_descriptor(descriptor)?;
    if let Some(p) = path {
        let lifted = io::read_path(p)?;
        let intersection = path_intersection(&lifted, &IndexCycle::of(&d))?;
        let text = if csv {
            io::to_csv(&["intersection"], [(intersection,)])?
        } else {
            io::to_json(&json!({ "intersection": intersection }))?
        };
        return Ok(Outcome::ok(text));
    }
    if csv {
        let jumps = jump_sequence(&d, kmax)?;
        let mut rows = Vec::with_capacity(kmax as usize);
        let mut violation = false;
        for k in 1..=kmax {
            let intersection = czlab_core::arc_intersection(&d, k)?;
            let jump = jumps.get(k).expect("within horizon");
            violation |= 2 * intersection != jump;
            rows.push(ArcRow { k, jump, intersection });
        }
        return Ok(Outcome {
            text: io::to_csv(&["k", "jump", "intersection"], rows)?,
            violation,
        });
    }
    let report = verify_intersect_divisibility(&d, l, kmax)?;
    let violation = !report.passed;
    let text = if violation {
        io::to_json(&json!({
            "passed": report.passed,
            "first_violation": report.first_violation,
            "details": report.details,
            "instance": d.to_spec(),
        }))?
    } else {
        io::to_json(&report)?
    };
    Ok(Outcome { text, violation })
}

#[derive(Serialize)]
struct SpectrumRow {
    label: i64,
    index: i64,
    value: String,
}

fn rotation(
    path: &std::path::Path,
    lo: Option<Rational>,
    hi: Option<Rational>,
    csv: bool,
) -> CliResult<Outcome> {
    let r = io::read_rotation(path)?;
    let spectrum = match (lo, hi) {
        (Some(lo), Some(hi)) => Some(action_spectrum(&r, lo, hi)?),
        (None, None) => None,
        _ => return Err(CliError::Schema("--lo and --hi go together".into())),
    };
    if csv {
        let Some(spectrum) = spectrum else {
            return Err(CliError::Schema("csv output lists the action spectrum; give --lo and --hi".into()));
        };
        let rows = spectrum.points().iter().map(|p| SpectrumRow {
            label: p.label,
            index: spectrum.index_of(p.label),
            value: format_rational(&p.value),
        });
        return Ok(Outcome::ok(io::to_csv(&["label", "index", "value"], rows)?));
    }
    let table = recapped_fixed_points(&r)?;
    let multipliers = (0..=r.n())
        .map(|i| floquet_multipliers(&r, i))
        .collect::<Result<Vec<_>, _>>()?;
    let strings = |xs: &[Rational]| xs.iter().map(format_rational).collect::<Vec<_>>();
    let mut report = json!({
        "rotation": r.to_spec(),
        "trivial_mean_indices": strings(&trivial_mean_indices(&r)),
        "trivial_cz_indices": trivial_cz_indices(&r),
        "recapped": table.to_spec(),
        "multipliers": multipliers,
        "trivial_loop": is_trivial_loop(r.n(), r.angles()),
    });
    if let Some(s) = spectrum {
        report["spectrum"] = serde_json::to_value(s.points())?;
    }
    Ok(Outcome::ok(io::to_json(&report)?))
}

#[derive(Serialize)]
struct MultiplierRow {
    point: usize,
    reduced: String,
}

fn match_table(path: &std::path::Path, horizon: u64, resonance_bound: Option<u32>, csv: bool) -> CliResult<Outcome> {
    let table = io::read_table(path)?;
    let rotation = matching_rotation(&table, horizon)?;
    let hypotheses = check_matching_hypotheses(&table, horizon)?;
    if csv {
        let rows = hypotheses.points.iter().flat_map(|p: &PointMultipliers| {
            p.multipliers.iter().map(move |m| MultiplierRow {
                point: p.point,
                reduced: format_rational(m),
            })
        });
        return Ok(Outcome::ok(io::to_csv(&["point", "reduced"], rows)?));
    }
    let mut report = json!({
        "rotation": rotation.to_spec(),
        "balanced": is_balanced(&table),
        "hypotheses": hypotheses,
    });
    if let Some(bound) = resonance_bound {
        report["resonances"] = serde_json::to_value(resonance_lattice(&table, bound))?;
    }
    Ok(Outcome::ok(io::to_json(&report)?))
}

fn verify_suite(suite: Suite, seed: u64, trials: usize, csv: bool) -> CliResult<Outcome> {
    let report = run_suite(suite, seed, trials)?;
    let violation = !report.all_passed();
    let text = if csv {
        io::to_csv(
            &["suite", "seed", "trials", "passed", "failed", "rejected_draws", "checks"],
            [(
                report.suite,
                report.seed,
                report.trials,
                report.passed,
                report.failed,
                report.rejected_draws,
                report.checks,
            )],
        )?
    } else {
        io::to_json(&report)?
    };
    Ok(Outcome { text, violation })
}
