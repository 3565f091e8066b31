//! The `posscheck` command line.
//!
//! Exit status: 0 holds / yes, 1 fails / no, 2 unknown or vacuous,
//! 64 usage error, 65 bad model data, 66 missing input file, 70 internal
//! inconsistency (including a built-in example not matching its expected
//! verdict).

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::corpus::{self, Status};
use crate::factorization::{self, Factorization, Verdict};
use crate::independence::{self, Axiom, Statement, DEFAULT_SCAN_LIMIT};
use crate::markov::{self, MarkovProperty};
use crate::model::ModelFile;
use crate::report::{self, Report};
use crate::{Base, Error, Rational, Scalar, TNorm, Tolerance};

pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_NO_INPUT: i32 = 66;
pub const EXIT_INTERNAL: i32 = 70;

#[derive(Debug, Parser)]
#[command(name = "posscheck", version, about = "Conditional independence, Markov properties and factorization of possibility distributions")]
struct Cli {
    /// t-norm: godel, product, lukasiewicz, optionally with powers (product@2) or as JSON
    #[arg(long, global = true)]
    tnorm: Option<String>,
    /// comparison tolerance
    #[arg(long, global = true, env = "POSSCHECK_EPSILON")]
    epsilon: Option<f64>,
    /// exact rational arithmetic (base t-norms only)
    #[arg(long, global = true)]
    exact: bool,
    /// machine-readable output
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Test I(A, B | given).
    Indep {
        #[arg(long)]
        model: PathBuf,
        #[arg(long = "a", value_delimiter = ',', required = true)]
        a: Vec<String>,
        #[arg(long = "b", value_delimiter = ',', required = true)]
        b: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        given: Vec<String>,
        /// evaluate through almost-everywhere equality instead
        #[arg(long)]
        via_ae: bool,
    },
    /// Check axioms A1-A5: one instance with --groups, otherwise a full scan.
    Axioms {
        #[arg(long)]
        model: PathBuf,
        #[arg(long = "axiom", value_delimiter = ',')]
        axioms: Vec<Axiom>,
        /// groups as "X;Y;Z;W" (comma-separated members, empty group allowed)
        #[arg(long)]
        groups: Option<String>,
        #[arg(long, default_value_t = DEFAULT_SCAN_LIMIT)]
        limit: usize,
    },
    /// Check Markov properties against the model's graph.
    Markov {
        #[arg(long)]
        model: PathBuf,
        /// pairwise, local, global or all
        #[arg(long, default_value = "all")]
        property: String,
        /// test every separated triple for the global property
        #[arg(long)]
        exhaustive: bool,
    },
    /// Decide or verify a clique factorization.
    Factorize {
        #[arg(long)]
        model: PathBuf,
        /// verify a factorization JSON file instead of constructing one
        #[arg(long)]
        verify: Option<PathBuf>,
        /// write the constructed factorization here
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Evaluate the residual y Δ x.
    Residual {
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Run the built-in examples against their expected verdicts.
    Examples {
        #[arg(long)]
        id: Option<u8>,
    },
    /// Load a model and report its properties.
    Validate {
        #[arg(long)]
        model: PathBuf,
    },
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(e: impl std::fmt::Display) -> Self {
        Failure { code: EXIT_USAGE, message: e.to_string() }
    }

    fn data(e: impl std::fmt::Display) -> Self {
        Failure { code: EXIT_DATA, message: e.to_string() }
    }

    /// Errors raised by a check after the model loaded: caused by the
    /// arguments, unless they signal an engine bug.
    fn check(e: Error) -> Self {
        match e {
            Error::InternalInconsistency(_) => Failure { code: EXIT_INTERNAL, message: e.to_string() },
            _ => Failure::usage(e),
        }
    }
}

type Rendered = (Status, serde_json::Value, String, Vec<crate::Assignment>);
type Outcome = std::result::Result<Rendered, Failure>;

struct Ctx {
    tnorm: Option<TNorm>,
    tol: Tolerance,
    exact: bool,
    digest: Option<String>,
}

impl Ctx {
    fn tnorm_for(&self, model: Option<&ModelFile>) -> TNorm {
        self.tnorm
            .clone()
            .or_else(|| model.and_then(|m| m.tnorm.clone()))
            .unwrap_or_default()
    }
}

/// Runs the command line with stdout/stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut io::stdout().lock(), &mut io::stderr().lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind::*;
            return match e.kind() {
                DisplayHelp | DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    let command: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let json = cli.json;
    match execute(cli, command) {
        Ok((report, code)) => {
            let text = if json { report.to_json() + "\n" } else { report.to_human() };
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(f) => {
            if json {
                let _ = writeln!(out, "{}", json!({"error": f.message, "exit_code": f.code}));
            }
            let _ = writeln!(err, "posscheck: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: Cli, command: Vec<String>) -> std::result::Result<(Report, i32), Failure> {
    let tnorm = cli.tnorm.as_deref().map(str::parse::<TNorm>).transpose().map_err(Failure::usage)?;
    let tol = match cli.epsilon {
        Some(e) => Tolerance::new(e).map_err(Failure::usage)?,
        None => Tolerance::DEFAULT,
    };
    let mut ctx = Ctx { tnorm, tol, exact: cli.exact, digest: None };
    let start = Instant::now();

    let (status, result, human, vacuous, tn) = match cli.command {
        Command::Residual { y, x } => {
            let tn = ctx.tnorm_for(None);
            let r = if ctx.exact { residual::<Rational>(&tn, &y, &x) } else { residual::<f64>(&tn, &y, &x) }?;
            (r.0, r.1, r.2, r.3, tn)
        }
        Command::Examples { id } => {
            let (o, code) = examples(&ctx, id)?;
            let tn = ctx.tnorm.clone().map_or("godel, product, lukasiewicz".to_string(), |t| t.to_string());
            return Ok((finish(&ctx, command, o, tn, start), code));
        }
        Command::Indep { ref model, .. }
        | Command::Axioms { ref model, .. }
        | Command::Markov { ref model, .. }
        | Command::Factorize { ref model, .. }
        | Command::Validate { ref model } => {
            let m = load_model(model)?;
            ctx.digest = Some(m.digest());
            let tn = ctx.tnorm_for(Some(&m));
            let r = if ctx.exact {
                dispatch::<Rational>(&ctx, &m, &tn, cli.command)
            } else {
                dispatch::<f64>(&ctx, &m, &tn, cli.command)
            }?;
            (r.0, r.1, r.2, r.3, tn)
        }
    };
    let code = status.exit_code();
    Ok((finish(&ctx, command, (status, result, human, vacuous), tn.to_string(), start), code))
}

fn finish(
    ctx: &Ctx,
    command: Vec<String>,
    (status, result, human, vacuous_cells): Rendered,
    tnorm: String,
    start: Instant,
) -> Report {
    Report {
        command,
        model_digest: ctx.digest.clone(),
        tnorm,
        epsilon: ctx.tol.value(),
        exact: ctx.exact,
        status,
        result,
        vacuous_cells,
        timing_ms: start.elapsed().as_secs_f64() * 1e3,
        human,
    }
}

fn load_model(path: &Path) -> std::result::Result<ModelFile, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_NO_INPUT,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    ModelFile::from_json(&text).map_err(|e| Failure::data(format!("{}: {e}", path.display())))
}

fn to_value<T: serde::Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("result serializes")
}

fn dispatch<V: Scalar>(ctx: &Ctx, m: &ModelFile, tn: &TNorm, command: Command) -> Outcome {
    tn.ensure_supported::<V>().map_err(Failure::usage)?;
    let t = m.table::<V>(ctx.tol).map_err(Failure::data)?;
    let graph = || {
        m.graph()
            .map_err(Failure::data)?
            .ok_or_else(|| Failure::data("the model has no graph"))
    };
    match command {
        Command::Indep { a, b, given, via_ae, .. } => {
            let stmt = Statement { a, b, given };
            let r = if via_ae {
                independence::independent_ae(&t, tn, &stmt, ctx.tol)
            } else {
                independence::independent(&t, tn, &stmt, ctx.tol)
            }
            .map_err(Failure::check)?;
            let vacuous = if stmt.given.is_empty() || stmt.a.is_empty() {
                Vec::new()
            } else {
                t.condition(tn, &stmt.a, &stmt.given).map_err(Failure::check)?.vacuous_cells()
            };
            let status = if stmt.is_vacuous() {
                Status::Vacuous
            } else if r.holds {
                Status::Holds
            } else {
                Status::Fails
            };
            Ok((status, to_value(&r), report::statement(&r), vacuous))
        }
        Command::Axioms { axioms, groups, limit, .. } => {
            let axioms = if axioms.is_empty() { Axiom::ALL.to_vec() } else { axioms };
            if let Some(g) = groups {
                let [axiom] = axioms[..] else {
                    return Err(Failure::usage("--groups needs exactly one --axiom"));
                };
                let groups: Vec<Vec<String>> = g
                    .split(';')
                    .map(|grp| grp.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect())
                    .collect();
                let r = independence::check_axiom(&t, tn, axiom, &groups, ctx.tol).map_err(Failure::check)?;
                let status = if r.holds { Status::Holds } else { Status::Fails };
                return Ok((status, to_value(&r), report::axiom(&r), Vec::new()));
            }
            let scan = independence::scan_axioms(&t, tn, &axioms, ctx.tol, limit).map_err(Failure::check)?;
            let summary: Vec<_> = axioms
                .iter()
                .map(|&ax| {
                    json!({
                        "axiom": ax,
                        "instances": scan.instance_count(ax),
                        "violations": scan.violation_count(ax),
                    })
                })
                .collect();
            let violations: Vec<_> = scan.violations().collect();
            let status = if violations.is_empty() { Status::Holds } else { Status::Fails };
            let result = json!({"summary": summary, "violations": violations});
            Ok((status, result, report::scan(&scan, &axioms), Vec::new()))
        }
        Command::Markov { property, exhaustive, .. } => {
            let g = graph()?;
            if property.eq_ignore_ascii_case("all") {
                let chain = markov::chain_report(&t, &g, tn, ctx.tol, false).map_err(Failure::check)?;
                if exhaustive {
                    let full = markov::global(&t, &g, tn, ctx.tol, true).map_err(Failure::check)?;
                    if full.holds != chain.global.holds {
                        return Err(Failure::check(Error::InternalInconsistency(
                            "exhaustive and component-based global checks disagree".into(),
                        )));
                    }
                }
                let status = if chain.global.holds && chain.local.holds && chain.pairwise.holds {
                    Status::Holds
                } else {
                    Status::Fails
                };
                return Ok((status, to_value(&chain), report::chain(&chain), Vec::new()));
            }
            let p: MarkovProperty = property.parse().map_err(Failure::usage)?;
            let r = markov::check(p, &t, &g, tn, ctx.tol, exhaustive).map_err(Failure::check)?;
            let status = if r.holds { Status::Holds } else { Status::Fails };
            Ok((status, to_value(&r), report::markov(&r), Vec::new()))
        }
        Command::Factorize { verify, output, .. } => {
            let g = graph()?;
            let t = t.to_f64();
            if let Some(path) = verify {
                let text = std::fs::read_to_string(&path).map_err(|e| Failure {
                    code: EXIT_NO_INPUT,
                    message: format!("cannot read {}: {e}", path.display()),
                })?;
                let f = Factorization::from_json(&text, t.schema(), tn).map_err(Failure::data)?;
                let v = factorization::verify(&t, &g, &f, ctx.tol).map_err(Failure::data)?;
                let status = if v.holds { Status::Holds } else { Status::Fails };
                return Ok((status, to_value(&v), report::verification(&v), Vec::new()));
            }
            let verdict = factorization::factorizes(&t, &g, tn, ctx.tol).map_err(Failure::check)?;
            if verdict.is_yes() && tn.is_archimedean() && g.len() <= markov::GLOBAL_LIMIT {
                let gl = markov::global(&t, &g, tn, ctx.tol, false).map_err(Failure::check)?;
                if !gl.holds {
                    return Err(Failure::check(Error::InternalInconsistency(
                        "a factorization was found but the global Markov property fails".into(),
                    )));
                }
            }
            if let (Some(path), Some(f)) = (output, verdict.factorization()) {
                std::fs::write(&path, f.to_json() + "\n")
                    .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
            }
            let status = match verdict {
                Verdict::Yes { .. } => Status::Holds,
                Verdict::No { .. } => Status::Fails,
                Verdict::Unknown { .. } => Status::Unknown,
            };
            Ok((status, to_value(&verdict), report::verdict(&verdict), Vec::new()))
        }
        Command::Validate { .. } => {
            let s = t.schema();
            let g = m.graph().map_err(Failure::data)?;
            let cliques = g.as_ref().map(|g| g.clique_names());
            let result = json!({
                "variables": s.names(),
                "domain_sizes": s.sizes(),
                "cells": s.cells(),
                "normal": true,
                "strictly_positive": t.is_strictly_positive(),
                "crisp": t.is_crisp(ctx.tol),
                "graph_edges": g.as_ref().map(|g| g.edge_count()),
                "cliques": cliques,
                "tnorm": tn,
                "class": tn.classify(),
            });
            let mut human = format!(
                "{} variables ({}), {} cells, normal\nstrictly positive: {}, crisp: {}\n",
                s.len(),
                s.names().join(", "),
                s.cells(),
                t.is_strictly_positive(),
                t.is_crisp(ctx.tol)
            );
            match &cliques {
                Some(c) => {
                    let c: Vec<String> = c.iter().map(|c| format!("{{{}}}", c.join(","))).collect();
                    human.push_str(&format!("graph cliques: {}\n", c.join(" ")));
                }
                None => human.push_str("no graph\n"),
            }
            Ok((Status::Holds, result, human, Vec::new()))
        }
        Command::Residual { .. } | Command::Examples { .. } => unreachable!("handled without a model"),
    }
}

fn residual<V: Scalar>(tn: &TNorm, y: &str, x: &str) -> Outcome {
    let yv = V::parse(y).map_err(Failure::usage)?;
    let xv = V::parse(x).map_err(Failure::usage)?;
    let r = tn.residual(&yv, &xv).map_err(Failure::usage)?;
    let result = json!({"y": yv.to_string(), "x": xv.to_string(), "residual": r.to_string(), "value": r.to_f64()});
    // twelve decimals hide last-bit noise such as 1.3 - 0.7
    let shown = if V::EXACT { r.to_string() } else { ((r.to_f64() * 1e12).round() / 1e12).to_string() };
    Ok((Status::Holds, result, format!("{shown}\n"), Vec::new()))
}

/// Exit code: the headline status for a single example under an explicit
/// t-norm; otherwise 0 when every expectation matches. Any mismatch is 70.
fn examples(ctx: &Ctx, id: Option<u8>) -> std::result::Result<(Rendered, i32), Failure> {
    let list = match id {
        Some(i) => vec![corpus::example(i).map_err(Failure::usage)?],
        None => corpus::builtin_examples(),
    };
    let tnorms = match &ctx.tnorm {
        Some(t) => vec![t.clone()],
        None => Base::ALL.iter().map(|&b| TNorm::from_base(b)).collect(),
    };
    let mut runs = Vec::new();
    for ex in &list {
        for tn in &tnorms {
            let r = if ctx.exact {
                corpus::run::<Rational>(ex, tn, ctx.tol)
            } else {
                corpus::run::<f64>(ex, tn, ctx.tol)
            }
            .map_err(Failure::check)?;
            runs.push(r);
        }
    }
    let human: String = runs.iter().map(report::example_run).collect();
    let all_match = runs.iter().all(|r| r.all_match());
    let (status, code) = if !all_match {
        (Status::Fails, EXIT_INTERNAL)
    } else if runs.len() == 1 && ctx.tnorm.is_some() {
        (runs[0].headline.status, runs[0].headline.status.exit_code())
    } else {
        (Status::Holds, 0)
    };
    let result = json!({"runs": runs, "all_expectations_match": all_match});
    Ok(((status, result, human, Vec::new()), code))
}
