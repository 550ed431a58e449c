//! `mfwin`: command-line front end to the mfwin library and its scenario suite.

mod ops;
mod render;
mod scenario;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use mfwin::Field;
use ops::{Ctx, Failure};
use scenario::{aggregate, to_canonical_string, Status};

#[derive(Parser)]
#[command(name = "mfwin", version, about = "Matrix factorizations, window combinatorics and Clifford algebras")]
struct Cli {
    /// Seed for randomized operations; overrides seeds in payloads.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for suite runs.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Top weight for graded algebra comparisons.
    #[arg(long, global = true)]
    degree_cap: Option<i64>,
    /// Coefficient field: `rational` or `fp:<p>`.
    #[arg(long, global = true)]
    field: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Out::Text)]
    out: Out,
    /// Directory of the scenario suite.
    #[arg(long, global = true, env = "MFWIN_SUITE_DIR")]
    suite_dir: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Out {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Window regions, reductions and exceptional collections.
    Windows {
        #[command(subcommand)]
        cmd: WindowsCmd,
    },
    /// Clifford algebras of quadratic forms.
    Clifford {
        #[command(subcommand)]
        cmd: CliffordCmd,
    },
    /// Corank stratification of linear systems of quadrics.
    Pencil {
        #[command(subcommand)]
        cmd: PencilCmd,
    },
    /// Any registered operation on a JSON payload.
    Op {
        #[command(subcommand)]
        cmd: OpCmd,
    },
    /// The bundled scenario suite.
    Suite {
        #[command(subcommand)]
        cmd: SuiteCmd,
    },
    /// A single scenario file.
    Scenario {
        #[command(subcommand)]
        cmd: ScenarioCmd,
    },
}

#[derive(Subcommand)]
enum WindowsCmd {
    /// The regions S+, S- and S-,res.
    Sets {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: usize,
    },
    /// Reduce a set of weights, given as a JSON array of [i, j], into S+.
    Reduce {
        #[arg(long)]
        weights: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Objects of S+ outside S-,res and their Hom spaces.
    Exceptional {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PartArg {
    Even,
    Full,
}

#[derive(Subcommand)]
enum CliffordCmd {
    /// Dimensions and generator products; the form is a JSON matrix.
    Build {
        #[arg(long)]
        form: PathBuf,
    },
    /// Center of the algebra or of its even part.
    Center {
        #[arg(long)]
        form: PathBuf,
        #[arg(long, value_enum, default_value_t = PartArg::Even)]
        part: PartArg,
    },
}

#[derive(Subcommand)]
enum PencilCmd {
    /// Stratify a system given as a JSON array of symmetric matrices.
    Strata {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, default_value_t = 16)]
        samples: usize,
    },
}

#[derive(Subcommand)]
enum OpCmd {
    /// Registered operations.
    List,
    /// Run `<module> <operation>` on a payload file (`-` for stdin).
    Run {
        module: String,
        operation: String,
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SuiteCmd {
    /// Scenarios in the suite directory, by file name.
    List {
        #[arg(long)]
        module: Option<String>,
    },
    /// Run every scenario, or those of one module.
    Run {
        #[arg(long)]
        module: Option<String>,
    },
}

#[derive(Subcommand)]
enum ScenarioCmd {
    Run {
        path: PathBuf,
        /// Rewrite the golden file from this run's output.
        #[arg(long)]
        update_golden: bool,
    },
}

fn default_suite_dir() -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/paper-suite"))
}

fn read_json(path: &Path) -> anyhow::Result<Value> {
    let text = if path == Path::new("-") {
        std::io::read_to_string(std::io::stdin()).context("reading stdin")?
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn schema(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("mfwin: {msg}");
    ExitCode::from(2)
}

/// Runs one operation and prints its result.
fn run_op(module: &str, name: &str, input: &Value, ctx: &Ctx, out: Out) -> ExitCode {
    let Some(op) = ops::find(module, name) else {
        return schema(format!("unknown operation `{module}/{name}`"));
    };
    match (op.run)(input, ctx) {
        Err(Failure::Schema(e)) => schema(format!("{module}/{name}: {e}")),
        Err(Failure::Operation(e)) => {
            eprintln!("mfwin: {module}/{name}: {e}");
            ExitCode::from(3)
        }
        Ok(rep) => {
            let ok = rep.ok();
            match out {
                Out::Json => {
                    let v = json!({"module": module, "operation": name, "ok": ok, "checks": rep.checks, "output": rep.output});
                    print!("{}", to_canonical_string(&v));
                }
                Out::Text => {
                    let mut s = format!("{module}/{name}: {}\n", if ok { "ok" } else { "FAILED" });
                    render::body(&mut s, &rep.checks, rep.text.as_deref(), &rep.output);
                    print!("{s}");
                }
            }
            ExitCode::from(if ok { 0 } else { 3 })
        }
    }
}

fn suite_entries(dir: &Path, module: Option<&str>) -> Result<Vec<(PathBuf, Result<scenario::Scenario, String>)>, String> {
    Ok(scenario::list(dir)?
        .into_iter()
        .map(|p| {
            let s = scenario::load(&p);
            (p, s)
        })
        .filter(|(_, s)| match (module, s) {
            (None, _) => true,
            (Some(m), Ok(s)) => s.module == m,
            (Some(_), Err(_)) => false,
        })
        .collect())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let field = match cli.field.as_deref().map(Field::parse_spec).transpose() {
        Ok(f) => f,
        Err(e) => return schema(format!("--field: {e}")),
    };
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            return schema(format!("--jobs: {e}"));
        }
    }
    let ctx = Ctx { seed: cli.seed, degree_cap: cli.degree_cap, field };
    let suite_dir = cli.suite_dir.clone().unwrap_or_else(default_suite_dir);
    let file = |p: &Path| read_json(p).map_err(|e| schema(format!("{e:#}")));
    match cli.cmd {
        Cmd::Windows { cmd } => match cmd {
            WindowsCmd::Sets { n, l } => run_op("windows", "sets", &json!({"n": n, "l": l}), &ctx, cli.out),
            WindowsCmd::Exceptional { n, l } => {
                run_op("windows", "exceptional", &json!({"n": n, "l": l}), &ctx, cli.out)
            }
            WindowsCmd::Reduce { weights, n } => match file(&weights) {
                Ok(w) => run_op("windows", "reduce", &json!({"n": n, "weights": w}), &ctx, cli.out),
                Err(c) => c,
            },
        },
        Cmd::Clifford { cmd } => match cmd {
            CliffordCmd::Build { form } => match file(&form) {
                Ok(f) => run_op("clifford", "build", &json!({"form": f}), &ctx, cli.out),
                Err(c) => c,
            },
            CliffordCmd::Center { form, part } => match file(&form) {
                Ok(f) => {
                    let part = match part {
                        PartArg::Even => "even",
                        PartArg::Full => "full",
                    };
                    run_op("clifford", "center", &json!({"form": f, "part": part}), &ctx, cli.out)
                }
                Err(c) => c,
            },
        },
        Cmd::Pencil { cmd: PencilCmd::Strata { system, samples } } => match file(&system) {
            Ok(s) => run_op("pencil", "strata", &json!({"system": s, "samples": samples}), &ctx, cli.out),
            Err(c) => c,
        },
        Cmd::Op { cmd: OpCmd::List } => {
            match cli.out {
                Out::Json => {
                    let v: Vec<Value> = ops::OPS
                        .iter()
                        .map(|o| json!({"module": o.module, "operation": o.name, "summary": o.summary}))
                        .collect();
                    print!("{}", to_canonical_string(&Value::Array(v)));
                }
                Out::Text => {
                    for o in ops::OPS {
                        println!("{}/{}: {}", o.module, o.name, o.summary);
                    }
                }
            }
            ExitCode::SUCCESS
        }
        Cmd::Op { cmd: OpCmd::Run { module, operation, input } } => {
            let payload = match input {
                Some(p) => match file(&p) {
                    Ok(v) => v,
                    Err(c) => return c,
                },
                None => json!({}),
            };
            run_op(&module, &operation, &payload, &ctx, cli.out)
        }
        Cmd::Suite { cmd: SuiteCmd::List { module } } => {
            let entries = match suite_entries(&suite_dir, module.as_deref()) {
                Ok(e) => e,
                Err(e) => return schema(e),
            };
            let mut code = 0;
            let mut rows = Vec::new();
            for (p, s) in &entries {
                let file = p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                match s {
                    Ok(s) => rows.push(json!({"file": file, "name": s.name, "module": s.module, "operation": s.operation, "description": s.description})),
                    Err(e) => {
                        code = 2;
                        rows.push(json!({"file": file, "error": e}));
                    }
                }
            }
            match cli.out {
                Out::Json => print!("{}", to_canonical_string(&Value::Array(rows))),
                Out::Text => {
                    for r in &rows {
                        match r.get("error") {
                            Some(e) => println!("{}: invalid: {}", r["file"].as_str().unwrap_or(""), e.as_str().unwrap_or("")),
                            None => println!(
                                "{} ({}/{})",
                                r["name"].as_str().unwrap_or(""),
                                r["module"].as_str().unwrap_or(""),
                                r["operation"].as_str().unwrap_or("")
                            ),
                        }
                    }
                }
            }
            ExitCode::from(code)
        }
        Cmd::Suite { cmd: SuiteCmd::Run { module } } => {
            let entries = match suite_entries(&suite_dir, module.as_deref()) {
                Ok(e) => e,
                Err(e) => return schema(e),
            };
            let reports: Vec<scenario::ScenarioReport> = entries
                .par_iter()
                .map(|(p, _)| scenario::run_file(p, &ctx, false))
                .collect();
            let code = aggregate(reports.iter().map(|r| r.status));
            let passed = reports.iter().filter(|r| r.status == Status::Pass).count();
            match cli.out {
                Out::Json => {
                    let v = json!({
                        "scenarios": reports,
                        "summary": {"total": reports.len(), "passed": passed, "failed": reports.len() - passed},
                    });
                    print!("{}", to_canonical_string(&v));
                }
                Out::Text => {
                    for r in &reports {
                        print!("{}", render::scenario(r, r.status != Status::Pass));
                    }
                    println!("suite: {passed} of {} scenarios passed", reports.len());
                }
            }
            ExitCode::from(code)
        }
        Cmd::Scenario { cmd: ScenarioCmd::Run { path, update_golden } } => {
            let r = scenario::run_file(&path, &ctx, update_golden);
            match cli.out {
                Out::Json => print!("{}", to_canonical_string(&serde_json::to_value(&r).expect("serializes"))),
                Out::Text => print!("{}", render::scenario(&r, true)),
            }
            ExitCode::from(r.status.exit_code())
        }
    }
}
