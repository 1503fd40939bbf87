//! Command implementations. Each returns the process exit code, or an
//! error for malformed input (exit 2).

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::Serialize;

use nonloc_core::bounds::{cardinality_bound, certify_by_bound, GhzLikeSet};
use nonloc_core::certifier::{
    beta_float, certify_exact, solve_all_cuts, verify_certificate, Classification, StateSet, Verdict,
};
use nonloc_core::io::{self, CertificateFile, StateSetFile};
use nonloc_core::protocols::{lattice_protocol, ProtocolOutcome};
use nonloc_core::search::{run_search, Mode, Progress, SearchConfig, SearchCursor, Strategy};
use nonloc_core::suite::{run_selected, SuiteOptions, CRITERIA};
use nonloc_core::{Bipartition, Rational};

use crate::{BoundArgs, CertifyArgs, ModeArg, SearchArgs, SuiteArgs, VerifyArgs};

pub const EXIT_OK: u8 = 0;
pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_INCOMPLETE: u8 = 3;

fn write_report<T: Serialize>(path: Option<&Path>, report: &T) -> Result<()> {
    if let Some(path) = path {
        let text = io::to_canonical_json(report)?;
        io::write_text(path, &text)?;
    }
    Ok(())
}

fn read_set(path: &Path) -> Result<StateSet> {
    io::read_state_set(path).with_context(|| format!("reading state set {}", path.display()))
}

fn per_cut<T: Clone>(values: &[T; 3]) -> BTreeMap<String, T> {
    Bipartition::ALL.iter().map(|c| (c.label().to_string(), values[c.party()].clone())).collect()
}

#[derive(Debug, Serialize)]
struct CutSolutionReport {
    cut: Bipartition,
    certificate: CertificateFile,
    measurement: Vec<Vec<Rational>>,
}

#[derive(Debug, Serialize)]
struct ProtocolHint {
    cut: Bipartition,
    outcome: ProtocolOutcome,
}

#[derive(Debug, Serialize)]
struct CertifyReport {
    input: StateSetFile,
    mode: &'static str,
    betas: BTreeMap<String, Rational>,
    verdict: &'static str,
    classification: Classification,
    #[serde(skip_serializing_if = "Option::is_none")]
    float_betas: Option<BTreeMap<String, f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    protocol_hint: Option<ProtocolHint>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    solutions: Vec<CutSolutionReport>,
    note: String,
}

/// Floating-point `β` for the report, with the verdict confirmed exactly.
fn prefiltered_verdict(set: &StateSet) -> Result<(Verdict, [f64; 3])> {
    let floats: Vec<f64> = Bipartition::ALL
        .par_iter()
        .map(|&c| beta_float(set, c))
        .collect::<Result<_, _>>()?;
    let floats: [f64; 3] = floats.try_into().expect("three cuts");
    Ok((certify_exact(set)?, floats))
}

pub fn certify(args: &CertifyArgs) -> Result<u8> {
    let set = read_set(&args.input)?;
    let (verdict, floats) = match args.mode {
        ModeArg::Exact => (certify_exact(&set)?, None),
        ModeArg::FloatPrefilter => {
            let (v, f) = prefiltered_verdict(&set)?;
            (v, Some(f))
        }
    };
    let certified = verdict.classification.is_certified();
    let protocol_hint = if certified {
        None
    } else {
        lattice_protocol(&set).map(|outcome| ProtocolHint { cut: outcome.cut, outcome })
    };
    let mut solutions = Vec::new();
    if args.solutions {
        let cuts: Vec<Bipartition> = match args.cut {
            Some(c) => vec![c.into()],
            None => Bipartition::ALL.to_vec(),
        };
        let sols = solve_all_cuts(&set)?;
        for sol in sols.iter().filter(|s| cuts.contains(&s.cut)) {
            solutions.push(CutSolutionReport {
                cut: sol.cut,
                certificate: CertificateFile::from_certificate(&sol.certificate(&set)),
                measurement: sol.measurement(&set).elements.iter().map(|p| p.coeffs().to_vec()).collect(),
            });
        }
    }
    let note = if certified {
        "β < 1 at every cut: not perfectly distinguishable by PPT, hence not by LOCC, across any bipartition".to_string()
    } else {
        let open = match &verdict.classification {
            Classification::PptDistinguishableAt(cuts) => {
                cuts.iter().map(|c| c.label()).collect::<Vec<_>>().join(", ")
            }
            _ => String::new(),
        };
        match &protocol_hint {
            Some(h) => format!("β = 1 at {open}; the parity protocol distinguishes the set across {}", h.cut),
            None => format!("β = 1 at {open}; this says nothing about LOCC distinguishability"),
        }
    };
    let report = CertifyReport {
        input: StateSetFile::from_set(&set),
        mode: match args.mode {
            ModeArg::Exact => "exact",
            ModeArg::FloatPrefilter => "float-prefilter",
        },
        betas: per_cut(&verdict.betas),
        verdict: if certified { "certified" } else { "not-certified" },
        classification: verdict.classification.clone(),
        float_betas: floats.map(|f| per_cut(&f)),
        protocol_hint,
        solutions,
        note,
    };
    println!("set of {} states at t = {}", set.len(), set.levels());
    for cut in Bipartition::ALL {
        println!("  β({}) = {}", cut, verdict.betas[cut.party()]);
    }
    println!("verdict: {}", report.verdict);
    if let Some(h) = &report.protocol_hint {
        println!("protocol hint: parity protocol succeeds across {}", h.cut);
    }
    write_report(args.output.as_deref(), &report)?;
    Ok(if certified { EXIT_OK } else { EXIT_NEGATIVE })
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    cut: Bipartition,
    feasible: bool,
    value: Rational,
    claimed_value: Rational,
    value_matches_claim: bool,
    dense_checked: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    violation: Option<String>,
}

pub fn verify(args: &VerifyArgs) -> Result<u8> {
    let set_path = &args.input[0];
    let cert_path = match (args.input.get(1), &args.certificate) {
        (Some(_), Some(_)) => bail!("give the certificate either as a second --input or with --certificate"),
        (Some(p), None) | (None, Some(p)) => p,
        (None, None) => bail!("no certificate file given"),
    };
    let set = read_set(set_path)?;
    let cert = io::read_certificate(cert_path).with_context(|| format!("reading certificate {}", cert_path.display()))?;
    if let Some(cut) = args.cut {
        let cut: Bipartition = cut.into();
        if cut != cert.cut {
            bail!("certificate is for {}, not {}", cert.cut, cut);
        }
    }
    let check = verify_certificate(&set, &cert).context("certificate does not match the state set")?;
    let report = VerifyReport {
        cut: cert.cut,
        feasible: check.feasible,
        value: check.value.clone(),
        claimed_value: cert.claimed_value.clone(),
        value_matches_claim: check.value_matches_claim,
        dense_checked: check.dense_checked,
        violation: check.violation.as_ref().map(ToString::to_string),
    };
    println!("{}: {}, value {}", cert.cut, if check.feasible { "feasible" } else { "infeasible" }, check.value);
    if let Some(v) = &report.violation {
        println!("  {v}");
    }
    if check.feasible && !check.value_matches_claim {
        println!("  claimed value {} differs from (1/s) tr Y", cert.claimed_value);
    }
    write_report(args.output.as_deref(), &report)?;
    Ok(if check.feasible { EXIT_OK } else { EXIT_NEGATIVE })
}

#[derive(Debug, Serialize)]
struct BoundReport {
    d: usize,
    weight: usize,
    size: usize,
    threshold: Rational,
    verdict: &'static str,
}

fn read_ghz_like(path: &Path) -> Result<GhzLikeSet> {
    let text = io::read_text(path)?;
    let value: serde_json::Value = serde_json::from_str(&text).context("malformed JSON")?;
    if value.get("t").is_some() {
        let set = io::parse_state_set(&text)?;
        return Ok(GhzLikeSet::from_lattice(set.states())?);
    }
    io::parse_ghz_like_set(&text).with_context(|| format!("reading GHZ-like set {}", path.display()))
}

pub fn bound(args: &BoundArgs) -> Result<u8> {
    let mut set = read_ghz_like(&args.input)?;
    if let Some(positions) = &args.select {
        if let Some(&p) = positions.iter().find(|&&p| p >= set.len()) {
            bail!("position {p} is out of range for a set of {}", set.len());
        }
        set = set.subset(positions)?;
    }
    let threshold = cardinality_bound(set.d(), set.weight())?;
    let certified = certify_by_bound(&set)?;
    let report = BoundReport {
        d: set.d(),
        weight: set.weight(),
        size: set.len(),
        threshold,
        verdict: if certified { "certified" } else { "inconclusive" },
    };
    println!(
        "s = {}, d³/w = {} (d = {}, w = {}): {}",
        report.size, report.threshold, report.d, report.weight, report.verdict
    );
    write_report(args.output.as_deref(), &report)?;
    Ok(if certified { EXIT_OK } else { EXIT_NEGATIVE })
}

pub fn search(args: &SearchArgs) -> Result<u8> {
    let set = read_set(&args.input)?;
    let config = SearchConfig {
        strategy: if args.greedy { Strategy::Greedy } else { Strategy::Exhaustive },
        target_size: args.target_size,
        mode: match args.mode {
            ModeArg::Exact => Mode::Exact,
            ModeArg::FloatPrefilter => Mode::FloatPrefilter,
        },
        budget: args.budget,
    };
    let cursor: Option<SearchCursor> = match &args.cursor {
        Some(p) if p.exists() => Some(io::from_json(&io::read_text(p)?).context("reading cursor")?),
        _ => None,
    };
    let progress = |p: Progress| match p {
        Progress::SizeStarted { size, subsets } => eprintln!("size {size}: {subsets} subsets"),
        Progress::Certified { positions } => eprintln!("  certified {positions:?}"),
        Progress::BudgetExhausted { evaluations } => eprintln!("budget exhausted after {evaluations} β evaluations"),
    };
    let report = run_search(&set, &config, cursor, &progress)?;
    match report.min_size() {
        Some(k) => println!("{} certified subset(s); smallest has {k} states", report.found.len()),
        None => println!("no certified subset found"),
    }
    println!("{}", report.note);
    if let (Some(path), Some(cursor)) = (&args.cursor, &report.cursor) {
        io::write_text(path, &io::to_canonical_json(cursor)?)?;
    }
    write_report(args.output.as_deref(), &report)?;
    Ok(if report.complete { EXIT_OK } else { EXIT_INCOMPLETE })
}

pub fn suite(args: &SuiteArgs) -> Result<u8> {
    let ids: Vec<usize> = match &args.only {
        Some(ids) => {
            if let Some(bad) = ids.iter().find(|i| !(1..=CRITERIA).contains(*i)) {
                bail!("criterion {bad} does not exist (1-{CRITERIA})");
            }
            ids.clone()
        }
        None => (1..=CRITERIA).collect(),
    };
    let report = run_selected(&SuiteOptions::default(), &ids);
    println!("{report}");
    write_report(args.output.as_deref(), &report)?;
    Ok(if report.all_passed() { EXIT_OK } else { EXIT_NEGATIVE })
}
