//! Command-line front end: JSON in, JSON out.

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use constacyclic::codes::{crt_decompose, describe, dual_spec, enumerate_specs, generators};
use constacyclic::json::{
    ctx_from_json, ctx_from_parts, descriptor_to_json, diagnostic_to_json, dual_to_json, elem_to_json, format_relem,
    format_rpoly, qelem_to_json, relem_to_json, rpoly_to_json, spec_from_json, spec_to_json,
};
use constacyclic::verify::{self, Budget, Suite};
use constacyclic::{Case, Diagnostic, DualOptions, Error, Nilpotency, Oracle, QuotientCtx};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "constacyclic", version, about = "Constacyclic codes of length 3p^s over F_q[u,v]/(u^2, v^2, uv - vu)")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

/// JSON arguments accept inline text or @path.
#[derive(Args)]
struct Global {
    /// Field as {"p": .., "m": .., "modulus": [..]}.
    #[arg(long, global = true)]
    field_json: Option<String>,
    #[arg(long, global = true)]
    s: Option<u32>,
    /// Unit alpha as {"a1": .., "a2": .., "a3": .., "a4": ..}.
    #[arg(long, global = true)]
    alpha_json: Option<String>,
    /// Whole context {"field": .., "s": .., "alpha": ..}; overrides the three flags above.
    #[arg(long, global = true)]
    ctx_json: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest ambient F_p-dimension handed to the linear-algebra oracle.
    #[arg(long, global = true, default_value_t = 128)]
    max_dim: usize,
    #[arg(long, global = true, default_value_t = 40)]
    samples: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Case, alpha_0, nilpotency and maximal ideal of R_alpha.
    RingInfo,
    /// Full descriptor of a code spec.
    Classify {
        #[arg(long)]
        spec_json: String,
    },
    /// Dual generators only.
    Dual {
        #[arg(long)]
        spec_json: String,
    },
    /// Canonical specs in a fixed order.
    Enumerate {
        #[arg(long, default_value_t = 0)]
        z_bound: usize,
        #[arg(long, default_value_t = 1000)]
        limit: usize,
    },
    /// Oracle-backed verification suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 2)]
        z_bound: usize,
    },
    /// Writes the oracle basis of a code.
    GenMatrix {
        #[arg(long)]
        spec_json: String,
        #[arg(long)]
        out: String,
    },
}

enum Failure {
    Lib(Error),
    Io(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Lib(e) if e.is_internal() => 1,
            Failure::Lib(_) => 2,
            Failure::Verification => 3,
            Failure::Io(_) => 4,
        }
    }
}

struct Outcome {
    payload: Value,
    diagnostics: Vec<Diagnostic>,
}

fn read_json(arg: &str) -> Result<Value, Failure> {
    let text = match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| Failure::Io(format!("{path}: {e}")))?,
        None => arg.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| Failure::Lib(Error::Parse(e.to_string())))
}

fn context(g: &Global) -> Result<QuotientCtx, Failure> {
    if let Some(c) = &g.ctx_json {
        return Ok(ctx_from_json(&read_json(c)?)?);
    }
    let missing = |what: &str| Failure::Lib(Error::Parse(format!("missing --{what} (or --ctx-json)")));
    let field = read_json(g.field_json.as_deref().ok_or_else(|| missing("field-json"))?)?;
    let s = g.s.ok_or_else(|| missing("s"))?;
    let alpha = read_json(g.alpha_json.as_deref().ok_or_else(|| missing("alpha-json"))?)?;
    Ok(ctx_from_parts(&field, s, &alpha)?)
}

fn ring_info(ctx: &QuotientCtx) -> Result<Outcome, Failure> {
    let f = ctx.field();
    let measured = match ctx.nilpotency_index(&ctx.y()) {
        Nilpotency::Index(k) => json!(k),
        Nilpotency::Infinite => Value::Null,
    };
    let mut payload = json!({
        "context": constacyclic::json::ctx_to_json(ctx),
        "alpha_text": format_relem(f, ctx.alpha()),
        "case": ctx.case().tag(),
        "alpha0": elem_to_json(f, ctx.alpha0()),
        "cube": ctx.case() == Case::Cube,
        "n": ctx.n(),
        "fp_dim": ctx.fp_dim(),
        "nilpotency": {"predicted": ctx.predicted_nilpotency(), "measured": measured},
    });
    if ctx.case() == Case::Cube {
        let comps: Vec<Value> = crt_decompose(ctx)?
            .iter()
            .map(|c| {
                json!({
                    "modulus": rpoly_to_json(f, &c.modulus),
                    "modulus_text": format_rpoly(f, &c.modulus),
                    "unit": c.unit.as_ref().map(|u| relem_to_json(f, u)),
                    "length": c.length,
                })
            })
            .collect();
        payload["crt_components"] = Value::Array(comps);
    } else {
        let gens: Vec<Value> = ctx
            .maximal_ideal_generators()?
            .into_iter()
            .map(|(name, g)| json!({"name": name, "element": qelem_to_json(ctx, &g), "text": format_rpoly(f, &ctx.to_rpoly(&g))}))
            .collect();
        payload["maximal_ideal"] = Value::Array(gens);
    }
    Ok(Outcome {
        payload,
        diagnostics: Vec::new(),
    })
}

fn run(cli: &Cli) -> Result<Outcome, (Failure, Value)> {
    let g = &cli.global;
    let plain = |e: Failure| (e, Value::Null);
    let ctx = context(g).map_err(plain)?;
    let opts = DualOptions {
        verify_max_dim: g.max_dim.min(DualOptions::default().verify_max_dim),
    };
    match &cli.command {
        Command::RingInfo => ring_info(&ctx).map_err(plain),
        Command::Classify { spec_json } => {
            let spec = spec_from_json(ctx.field(), &read_json(spec_json).map_err(plain)?).map_err(|e| plain(e.into()))?;
            let d = describe(&ctx, &spec, opts).map_err(|e| plain(e.into()))?;
            let mut payload = descriptor_to_json(&ctx, &d);
            payload["case"] = json!(ctx.case().tag());
            Ok(Outcome {
                payload,
                diagnostics: d.diagnostics,
            })
        }
        Command::Dual { spec_json } => {
            let spec = spec_from_json(ctx.field(), &read_json(spec_json).map_err(plain)?).map_err(|e| plain(e.into()))?;
            let d = dual_spec(&ctx, &spec, opts).map_err(|e| plain(e.into()))?;
            Ok(Outcome {
                payload: dual_to_json(&d),
                diagnostics: d.diagnostics,
            })
        }
        Command::Enumerate { z_bound, limit } => {
            let specs: Vec<Value> = enumerate_specs(&ctx, *z_bound, *limit)
                .map_err(|e| plain(e.into()))?
                .map(|s| spec_to_json(ctx.field(), &s))
                .collect();
            Ok(Outcome {
                payload: json!({"z_bound": z_bound, "limit": limit, "count": specs.len(), "specs": specs}),
                diagnostics: Vec::new(),
            })
        }
        Command::Verify { suite, z_bound } => {
            let suite = Suite::parse(suite).map_err(|e| plain(e.into()))?;
            let budget = Budget {
                samples: g.samples,
                max_dim: g.max_dim,
                z_bound: *z_bound,
            };
            let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
            let reports = verify::run(&ctx, suite, &budget, &mut rng).map_err(|e| plain(e.into()))?;
            let passed = reports.iter().all(|r| r.passed());
            let payload = json!({
                "suite": suite.name(),
                "seed": g.seed,
                "samples": g.samples,
                "passed": passed,
                "reports": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
            });
            if passed {
                Ok(Outcome {
                    payload,
                    diagnostics: Vec::new(),
                })
            } else {
                Err((Failure::Verification, payload))
            }
        }
        Command::GenMatrix { spec_json, out } => {
            let spec = spec_from_json(ctx.field(), &read_json(spec_json).map_err(plain)?).map_err(|e| plain(e.into()))?;
            let gens = generators(&ctx, &spec).map_err(|e| plain(e.into()))?;
            if ctx.fp_dim() > g.max_dim {
                return Err(plain(Failure::Lib(Error::RangeViolation(format!(
                    "ambient dimension {} exceeds --max-dim {}",
                    ctx.fp_dim(),
                    g.max_dim
                )))));
            }
            let o = Oracle::new(&ctx);
            let sub = o.span_closure(&gens);
            fs::write(out, o.export(&sub)).map_err(|e| plain(Failure::Io(format!("{out}: {e}"))))?;
            Ok(Outcome {
                payload: json!({"dim": sub.dim(), "rows": sub.dim(), "ambient": o.dim(), "path": out}),
                diagnostics: Vec::new(),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (status, payload, diagnostics, code) = match run(&cli) {
        Ok(o) => ("ok", o.payload, o.diagnostics, 0),
        Err((f, details)) => {
            let err = match &f {
                Failure::Lib(e) => json!({"kind": e.kind(), "message": e.to_string()}),
                Failure::Io(m) => json!({"kind": "Io", "message": m}),
                Failure::Verification => json!({"kind": "VerificationFailed", "message": "one or more checks failed"}),
            };
            let payload = if details.is_null() {
                json!({"error": err})
            } else {
                let mut d = details;
                d["error"] = err;
                d
            };
            ("error", payload, Vec::new(), f.exit_code())
        }
    };
    let out = json!({
        "schema": "1",
        "status": status,
        "payload": payload,
        "diagnostics": diagnostics.iter().map(diagnostic_to_json).collect::<Vec<_>>(),
    });
    // a closed pipe (e.g. `| head`) is not an error worth reporting
    let _ = writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(&out).expect("serializable"));
    ExitCode::from(code)
}
