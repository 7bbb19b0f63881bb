//! The `lk` command-line front end.
//!
//! Space specs are written in the compact grammar
//! `LK(p=<v|inf>, q=<v|inf> [, b=sv(c; g,a,b | g,a,b)] [, mu=<v|inf>] [, star])`
//! and step functions come from CSV files (`value,mass` per line, `#`
//! comments). Exit codes: 0 verdict produced, 2 invalid input, 3 a verify
//! suite reported an inconsistency.

use crate::classify::{associate_space, classify_space, decide_embedding};
use crate::norm::{set_default_tolerance, space_norm, SpaceSpec};
use crate::rearrange::{rearrange, StepFunction};
use crate::sv::{
    sup_transform, sv_property_check, tilde_hat_transform, SlowlyVaryingFunction, SupKind,
    SupTransformResult, SvGrid, TildeHatResult, TransformKind,
};
use crate::verify::run_suite;
use crate::{Error, Result};
use clap::{Parser, Subcommand};
use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "lk",
    version,
    about = "Lorentz-Karamata spaces: norms, rearrangements and decision procedures"
)]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: CliCommand,

    /// Emit machine-readable JSON.
    #[arg(long, global = true)]
    pub json: bool,

    /// Relative tolerance for numeric integrals (default 1e-8; the
    /// LK_DEFAULT_TOL environment variable overrides the default).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Classify one space: non-triviality, norm status, star equality.
    Classify {
        /// Space spec, e.g. "LK(p=2,q=1,b=sv(1; 0,-2,0 | 0,0,0))".
        spec: String,
    },
    /// Decide whether the first space embeds into the second.
    Embed {
        src: String,
        dst: String,
        /// Total measure of the shared underlying space (number or "inf");
        /// overrides any mu= inside the specs.
        #[arg(long)]
        mu: Option<String>,
    },
    /// Compute the associate space.
    Associate { spec: String },
    /// Evaluate the space norm of a step function read from CSV.
    Norm {
        spec: String,
        /// CSV file: one "value,mass" pair per line.
        #[arg(long)]
        input: PathBuf,
        /// Use the maximal-function form regardless of the spec.
        #[arg(long)]
        star: bool,
    },
    /// Operations on slowly varying functions.
    Sv {
        #[command(subcommand)]
        op: SvCommand,
    },
    /// Run a verification suite.
    Verify {
        /// One of: hl, holder, embed, stargap, duality, sv, all.
        suite: String,
        #[arg(long, default_value_t = 0xC0FFEE)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        samples: u32,
        /// Write the JSON report to this path.
        #[arg(long)]
        json_report: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum SvCommand {
    /// Evaluate b(t).
    Eval { b: String, t: f64 },
    /// The integral transform t ↦ ∫_0^t s⁻¹ b(s) ds, as a family member.
    Tilde { b: String },
    /// The integral transform t ↦ ∫_t^∞ s⁻¹ b(s) ds, as a family member.
    Hat { b: String },
    /// Running sup over (0, t), or over (t, ∞) with --above.
    Sup {
        b: String,
        #[arg(long)]
        above: bool,
    },
    /// Numeric slow-variation check for one ε.
    Check {
        b: String,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
    },
}

/// Parses the `LK(...)` grammar (re-exported here for callers working at the
/// CLI layer).
pub fn parse_spec(text: &str) -> Result<SpaceSpec> {
    text.parse()
}

fn parse_ext(text: &str) -> Result<f64> {
    if text == "inf" {
        return Ok(f64::INFINITY);
    }
    text.parse::<f64>()
        .map_err(|_| Error::Validation(format!("expected a number or 'inf', got '{text}'")))
        .and_then(|v| {
            if v > 0.0 {
                Ok(v)
            } else {
                Err(Error::Validation(format!(
                    "measure must be positive, got {v}"
                )))
            }
        })
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn yesno(v: bool) -> &'static str {
    if v {
        "yes"
    } else {
        "no"
    }
}

fn run_command(config: &CliConfig) -> Result<i32> {
    if let Some(tol) = config.tol {
        set_default_tolerance(tol);
    } else if let Ok(env_tol) = std::env::var("LK_DEFAULT_TOL") {
        let tol: f64 = env_tol
            .parse()
            .map_err(|_| Error::Validation(format!("bad LK_DEFAULT_TOL '{env_tol}'")))?;
        set_default_tolerance(tol);
    }

    match &config.command {
        CliCommand::Classify { spec } => {
            let spec = parse_spec(spec)?;
            let report = classify_space(&spec);
            if config.json {
                print_json(&report)?;
            } else {
                println!("space: {spec}");
                println!("  nontrivial (f* form):   {}", yesno(report.nontrivial));
                println!("  quasi-Banach norm:      {}", yesno(report.quasi_banach));
                println!("  nontrivial (f** form):  {}", yesno(report.star_nontrivial));
                println!("  Banach-equivalent:      {}", yesno(report.banach_equivalent));
                println!("  local L1 bound (P5):    {:?}", report.p5);
                println!("  f* and f** coincide:    {}", yesno(report.equals_star));
                println!("  citations: {}", report.citations.join(", "));
            }
            Ok(0)
        }
        CliCommand::Embed { src, dst, mu } => {
            let src = parse_spec(src)?;
            let dst = parse_spec(dst)?;
            let mu_r = match mu {
                Some(text) => parse_ext(text)?,
                None => {
                    if src.mu_r == dst.mu_r
                        || (src.mu_r.is_infinite() && dst.mu_r.is_infinite())
                    {
                        src.mu_r
                    } else {
                        return Err(Error::Validation(
                            "the two specs carry different mu values; pass --mu".into(),
                        ));
                    }
                }
            };
            let verdict = decide_embedding(&src, &dst, mu_r);
            if config.json {
                print_json(&verdict)?;
            } else {
                println!("{src}  into  {dst}");
                match &verdict.outcome {
                    crate::classify::EmbeddingOutcome::Holds { case } => {
                        println!("verdict: holds ({case})")
                    }
                    crate::classify::EmbeddingOutcome::Fails { reason } => {
                        println!("verdict: fails ({reason})")
                    }
                }
                for c in &verdict.conditions {
                    println!("  condition {} = {}", c.name, c.value);
                }
                if let Some(w) = &verdict.witness_recipe {
                    println!("  witness recipe: {w}");
                }
            }
            Ok(0)
        }
        CliCommand::Associate { spec } => {
            let spec = parse_spec(spec)?;
            let report = associate_space(&spec)?;
            if config.json {
                print_json(&report)?;
            } else {
                println!("space: {spec}");
                match &report.outcome {
                    crate::classify::AssociateOutcome::Space { spec } => {
                        println!("associate: {spec}")
                    }
                    crate::classify::AssociateOutcome::Zero => {
                        println!("associate: {{0}} (trivial)")
                    }
                    crate::classify::AssociateOutcome::NotCharacterized { reason } => {
                        println!("associate: not characterised ({reason})")
                    }
                }
                println!("  citations: {}", report.citations.join(", "));
            }
            Ok(0)
        }
        CliCommand::Norm { spec, input, star } => {
            let mut spec = parse_spec(spec)?;
            if *star {
                spec.star = true;
            }
            let file = File::open(input)?;
            let step = StepFunction::from_csv(BufReader::new(file))?;
            let fstar = rearrange(&step);
            let norm = space_norm(&spec, &fstar);
            if config.json {
                print_json(&serde_json::json!({
                    "spec": spec,
                    "pieces": step.pieces().len(),
                    "norm": if norm.is_finite() {
                        serde_json::json!(norm.value())
                    } else {
                        serde_json::json!("inf")
                    },
                    "ln_norm": norm.ln_value,
                    "divergent": norm.divergent,
                }))?;
            } else if norm.is_finite() {
                println!("{}", norm.value());
            } else {
                println!(
                    "inf{}",
                    if norm.divergent { "  (divergent piece)" } else { "" }
                );
            }
            Ok(0)
        }
        CliCommand::Sv { op } => run_sv(config, op),
        CliCommand::Verify {
            suite,
            seed,
            samples,
            json_report,
        } => {
            let suites: Vec<&str> = if suite == "all" {
                vec!["hl", "embed", "stargap", "duality", "sv"]
            } else {
                vec![suite.as_str()]
            };
            let mut all_ok = true;
            let mut reports = Vec::new();
            for s in suites {
                let report = run_suite(s, *seed, *samples)?;
                if !config.json && json_report.is_none() {
                    for line in &report.checks {
                        println!(
                            "[{}] {} — {}",
                            if line.passed { "PASS" } else { "FAIL" },
                            line.name,
                            line.detail
                        );
                    }
                    println!(
                        "suite {}: {}",
                        report.suite,
                        if report.passed { "PASS" } else { "FAIL" }
                    );
                }
                all_ok &= report.passed;
                reports.push(report);
            }
            if let Some(path) = json_report {
                std::fs::write(path, serde_json::to_string_pretty(&reports)?)?;
            } else if config.json {
                print_json(&reports)?;
            }
            Ok(if all_ok { 0 } else { 3 })
        }
    }
}

fn run_sv(config: &CliConfig, op: &SvCommand) -> Result<i32> {
    match op {
        SvCommand::Eval { b, t } => {
            let b: SlowlyVaryingFunction = b.parse()?;
            if !(*t > 0.0) {
                return Err(Error::Domain(format!("t must be positive, got {t}")));
            }
            let v = b.eval(*t);
            if config.json {
                print_json(&serde_json::json!({ "b": b, "t": t, "value": v }))?;
            } else {
                println!("{v}");
            }
            Ok(0)
        }
        SvCommand::Tilde { b } | SvCommand::Hat { b } => {
            let kind = if matches!(op, SvCommand::Tilde { .. }) {
                TransformKind::Tilde
            } else {
                TransformKind::Hat
            };
            let b: SlowlyVaryingFunction = b.parse()?;
            let result = tilde_hat_transform(&b, kind);
            if config.json {
                let payload = match &result {
                    TildeHatResult::Sv(sv) => serde_json::json!({ "outcome": "sv", "result": sv }),
                    TildeHatResult::Diverges => serde_json::json!({ "outcome": "diverges" }),
                    TildeHatResult::Unrepresentable => {
                        serde_json::json!({ "outcome": "unrepresentable" })
                    }
                };
                print_json(&payload)?;
            } else {
                match &result {
                    TildeHatResult::Sv(sv) => println!("{sv}"),
                    TildeHatResult::Diverges => println!("diverges"),
                    TildeHatResult::Unrepresentable => {
                        println!("finite, but outside the signature family")
                    }
                }
            }
            Ok(0)
        }
        SvCommand::Sup { b, above } => {
            let b: SlowlyVaryingFunction = b.parse()?;
            let kind = if *above {
                SupKind::HatSup
            } else {
                SupKind::TildeSup
            };
            let result = sup_transform(&b, kind);
            if config.json {
                let payload = match &result {
                    SupTransformResult::Sv(sv) => {
                        serde_json::json!({ "outcome": "sv", "result": sv })
                    }
                    SupTransformResult::NotFinite => {
                        serde_json::json!({ "outcome": "not_finite" })
                    }
                };
                print_json(&payload)?;
            } else {
                match &result {
                    SupTransformResult::Sv(sv) => println!("{sv}"),
                    SupTransformResult::NotFinite => println!("not finite"),
                }
            }
            Ok(0)
        }
        SvCommand::Check { b, eps } => {
            let b: SlowlyVaryingFunction = b.parse()?;
            if !(*eps > 0.0) {
                return Err(Error::Validation(format!(
                    "eps must be positive, got {eps}"
                )));
            }
            let report = sv_property_check(&b, *eps, &SvGrid::default());
            if config.json {
                print_json(&report)?;
            } else {
                println!(
                    "eps = {}: K_nondecreasing = {:.4}, K_nonincreasing = {:.4}, cycles = {}, {}",
                    report.eps,
                    report.k_nondecreasing,
                    report.k_nonincreasing,
                    report.oscillation_cycles,
                    if report.pass { "pass" } else { "fail" }
                );
            }
            Ok(0)
        }
    }
}

/// Entry point used by the `lk` binary; returns the process exit code.
pub fn main() -> i32 {
    let config = match CliConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap renders help/version through this path too
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run_command(&config) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    fn run(args: &[&str]) -> Result<i32> {
        let config = CliConfig::try_parse_from(args).expect("args parse");
        run_command(&config)
    }

    #[test]
    fn classify_runs() {
        assert_eq!(run(&["lk", "classify", "LK(p=2,q=1)"]).unwrap(), 0);
    }

    #[test]
    fn embed_mu_conflict_is_rejected() {
        let out = run(&["lk", "embed", "LK(p=2,q=1,mu=1)", "LK(p=2,q=2,mu=2)"]);
        assert!(out.is_err());
    }

    #[test]
    fn bad_spec_is_a_validation_error() {
        assert!(run(&["lk", "classify", "LK(p=0,q=1)"]).is_err());
    }

    #[test]
    fn verify_unknown_suite_is_rejected() {
        assert!(run(&["lk", "verify", "bogus"]).is_err());
    }
}
