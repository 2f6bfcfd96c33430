//! `jordanlab` command-line interface.

mod report;

use std::cell::RefCell;
use std::collections::HashMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use jordanlab::albert::{seeded_values, Backend, DEFAULT_SEED};
use jordanlab::assoc::{AssocPoly, MultiDegree};
use jordanlab::cache::{DiskCache, CACHE_ENV};
use jordanlab::component::{Engine, EngineConfig, DEFAULT_MAX_COLS, DEFAULT_MAX_ROWS};
use jordanlab::identities::{catalog, catalog_entry};
use jordanlab::lift::{sc_lift_poly, LiftTable};
use jordanlab::magma::gamma;
use jordanlab::modular::{default_primes, is_prime_u64};
use jordanlab::parse::{parse_assoc, parse_expr, Expr};
use jordanlab::tideal::{t_component, t_membership};
use jordanlab::verify::{run_criterion, VerifyOptions, CRITERIA};
use jordanlab::{fmt_rational, Error, JPoly};

use report::Report;

/// Caps used with `--deep`.
const DEEP_MAX_COLS: usize = 250_000;
const DEEP_MAX_ROWS: usize = 8_000_000;
/// Total degree from which `tdim` requires `--deep`.
const DEEP_TOTAL: u32 = 9;

#[derive(Parser, Debug)]
#[command(name = "jordanlab", version, about = "Exact computations with Jordan s-identities in three variables")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,

    /// Component cache directory.
    #[arg(long, global = true, env = CACHE_ENV)]
    cache_dir: Option<PathBuf>,

    /// Ignore the cache for reading and writing.
    #[arg(long, global = true)]
    no_cache: bool,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Seed for oracle points.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Comma-separated elimination primes, each below 2^62.
    #[arg(long, global = true, value_delimiter = ',')]
    primes: Option<Vec<u64>>,

    #[arg(long, global = true)]
    max_cols: Option<usize>,

    #[arg(long, global = true)]
    max_rows: Option<usize>,

    /// Allow degree-9 T-ideal components and raise the default caps.
    #[arg(long, global = true)]
    deep: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Shirshov–Cohn lift of a word or of a symmetric associative polynomial.
    Lift { expr: String },
    /// Image of a Jordan polynomial in the free associative algebra.
    Gamma { expr: String },
    /// Whether a Jordan polynomial is annihilated by gamma.
    Scheck { expr: String },
    /// Whether a Jordan polynomial vanishes in the free Jordan algebra.
    Zeroj { expr: String },
    /// Dimensions of a multidegree component, e.g. `3,3,2`.
    Jdim { degree: String },
    /// Dimension and basis of the s-identities in a component.
    Sdim { degree: String },
    /// Dimension of the T-ideal of `--gens` in a component.
    Tdim {
        degree: String,
        /// Generating polynomials; defaults to `catalog:sh`.
        #[arg(long, num_args = 1..)]
        gens: Vec<String>,
    },
    /// Whether a polynomial lies in the T-ideal of `--gens`.
    Tmember {
        expr: String,
        #[arg(long, num_args = 1.., required = true)]
        gens: Vec<String>,
    },
    /// List the identity catalog, or print one entry.
    Catalog {
        #[command(subcommand)]
        action: Option<CatalogAction>,
    },
    /// Evaluate at seeded points of the Albert algebra.
    AlbertEval {
        expr: String,
        #[arg(long, default_value_t = 1)]
        points: usize,
    },
    /// Evaluate at seeded symmetric k×k rational matrices.
    SymEval {
        expr: String,
        #[arg(long, default_value_t = 4)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        points: usize,
    },
    /// Run the acceptance suite.
    VerifyAll {
        /// Comma-separated criterion numbers; all by default.
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<u8>>,
        /// Oracle points for the Albert criterion.
        #[arg(long, default_value_t = 100)]
        points: usize,
    },
}

#[derive(Subcommand, Debug)]
enum CatalogAction {
    Get { name: String },
}

struct Ctx {
    engine: Engine,
    table: LiftTable,
    seed: u64,
    deep: bool,
}

impl Ctx {
    fn parse(&mut self, text: &str) -> Result<Expr, Error> {
        let table = RefCell::new(&mut self.table);
        let found: RefCell<HashMap<String, JPoly>> = RefCell::new(HashMap::new());
        let resolve = |name: &str| -> Option<JPoly> {
            if let Some(p) = found.borrow().get(name) {
                return Some(p.clone());
            }
            let entry = catalog_entry(&mut table.borrow_mut(), name).ok()??;
            found.borrow_mut().insert(name.to_string(), entry.value.clone());
            Some(entry.value)
        };
        Ok(parse_expr(text, &resolve)?)
    }

    fn jordan(&mut self, text: &str) -> Result<JPoly, Error> {
        match self.parse(text)? {
            Expr::Jordan(p) => Ok(p),
            Expr::Assoc(_) => Err(Error::InvalidArgument(format!(
                "`{text}` is an associative expression; a Jordan polynomial is needed"
            ))),
        }
    }

    fn gens(&mut self, texts: &[String]) -> Result<Vec<(String, JPoly)>, Error> {
        texts.iter().map(|t| Ok((t.clone(), self.jordan(t)?))).collect()
    }
}

fn rationals(v: &[jordanlab::Rational]) -> Vec<String> {
    v.iter().map(fmt_rational).collect()
}

fn run(verb: &Verb, ctx: &mut Ctx, rep: &mut Report) -> Result<bool, Error> {
    match verb {
        Verb::Lift { expr } => {
            let p = parse_assoc(expr)?;
            rep.input("expr", p.to_string());
            let single = match p.iter().collect::<Vec<_>>().as_slice() {
                [(w, c)] if **c == jordanlab::int(1) => Some((*w).clone()),
                _ => None,
            };
            let lift = match &single {
                Some(w) => {
                    let trace = ctx.table.rule_trace(w)?;
                    rep.result("rule", trace.first().map(|(_, r)| r.to_string()));
                    ctx.table.sc_lift(w)?
                }
                None => sc_lift_poly(&mut ctx.table, &p)?,
            };
            let image = gamma(&lift);
            let expected = match &single {
                Some(w) => jordanlab::assoc::symmetrize(w),
                None => p.clone(),
            };
            rep.result("lift", lift.to_string());
            rep.result("terms", lift.len());
            rep.result("gamma", image.to_string());
            rep.result("gamma_matches", image == expected);
            Ok(true)
        }
        Verb::Gamma { expr } => {
            let f = ctx.jordan(expr)?;
            rep.input("expr", f.to_string());
            rep.result("gamma", gamma(&f).to_string());
            Ok(true)
        }
        Verb::Scheck { expr } => {
            let f = ctx.jordan(expr)?;
            rep.input("expr", f.to_string());
            let g: AssocPoly = gamma(&f);
            rep.result("gamma_zero", g.is_zero());
            rep.result("gamma_terms", g.len());
            Ok(true)
        }
        Verb::Zeroj { expr } => {
            let f = ctx.jordan(expr)?;
            rep.input("expr", f.to_string());
            let v = ctx.engine.is_zero_in_j(&f)?;
            rep.result("zero_in_J", v.zero);
            let slices: Vec<Value> = v
                .slices
                .iter()
                .map(|s| {
                    json!({
                        "degree": s.degree.to_csv(),
                        "zero": s.zero,
                        "witness": s.witness.iter().map(|(t, c)| json!([t.to_string(), fmt_rational(c)])).collect::<Vec<_>>(),
                    })
                })
                .collect();
            rep.result("slices", slices);
            Ok(true)
        }
        Verb::Jdim { degree } => {
            let d = MultiDegree::parse_csv(degree)?;
            rep.input("degree", d.to_csv());
            let r = ctx.engine.space(&d)?.report();
            rep.result("component", serde_json::to_value(&r)?);
            rep.result("dim_J", r.quotient_dim);
            Ok(true)
        }
        Verb::Sdim { degree } => {
            let d = MultiDegree::parse_csv(degree)?;
            rep.input("degree", d.to_csv());
            let space = ctx.engine.space(&d)?;
            let cert = space.s_space();
            rep.result("s_dim", cert.dimension);
            let basis: Vec<String> = cert.vectors.iter().map(|v| space.from_coordinates(v).to_string()).collect();
            rep.result("basis", basis);
            Ok(true)
        }
        Verb::Tdim { degree, gens } => {
            let d = MultiDegree::parse_csv(degree)?;
            if d.total() >= DEEP_TOTAL && !ctx.deep {
                return Err(Error::ResourceCap(format!(
                    "T-ideal components of total degree {} need --deep",
                    d.total()
                )));
            }
            let texts = if gens.is_empty() { vec!["catalog:sh".to_string()] } else { gens.clone() };
            let g = ctx.gens(&texts)?;
            rep.input("degree", d.to_csv());
            rep.input("gens", g.iter().map(|(_, p)| p.to_string()).collect::<Vec<_>>());
            let t = t_component(&mut ctx.engine, &g, &d)?;
            rep.result("t_dim", t.cert.dimension);
            rep.result("s_dim", t.s_dim);
            rep.result("in_s_space", t.in_s_space);
            rep.result("instances", t.instances);
            rep.result("labels", t.labels);
            Ok(true)
        }
        Verb::Tmember { expr, gens } => {
            let f = ctx.jordan(expr)?;
            let g = ctx.gens(gens)?;
            rep.input("expr", f.to_string());
            rep.input("gens", g.iter().map(|(_, p)| p.to_string()).collect::<Vec<_>>());
            let m = t_membership(&mut ctx.engine, &f, &g)?;
            rep.result("member", m.member);
            rep.result("degree", m.degree.to_csv());
            rep.result("t_dim", m.component.cert.dimension);
            if let Some(c) = &m.certificate {
                rep.result(
                    "certificate",
                    json!({
                        "labels": m.component.labels,
                        "coefficients": rationals(&c.coefficients),
                    }),
                );
            }
            Ok(true)
        }
        Verb::Catalog { action: None } => {
            let entries = catalog(&mut ctx.table)?;
            let list: Vec<Value> = entries
                .iter()
                .map(|e| {
                    let mut v = serde_json::to_value(e).expect("catalog entries serialize");
                    v["degree"] = json!(e.value.multidegree().map(|d| d.to_csv()));
                    v["terms"] = json!(e.value.len());
                    v
                })
                .collect();
            rep.result("entries", list);
            Ok(true)
        }
        Verb::Catalog {
            action: Some(CatalogAction::Get { name }),
        } => {
            rep.input("name", name.clone());
            let e = catalog_entry(&mut ctx.table, name)?
                .ok_or_else(|| Error::InvalidArgument(format!("no catalog entry `{name}`")))?;
            rep.result("parameters", e.parameters.clone());
            rep.result("gamma_zero", e.gamma_zero);
            rep.result("polynomial", e.value.to_string());
            Ok(true)
        }
        Verb::AlbertEval { expr, points } => eval(ctx, rep, expr, Backend::Albert, *points),
        Verb::SymEval { expr, k, points } => eval(ctx, rep, expr, Backend::Symmetric { k: *k }, *points),
        Verb::VerifyAll { only, points } => {
            let ids: Vec<u8> = match only {
                Some(ids) => ids.clone(),
                None => CRITERIA.iter().map(|(i, _)| *i).collect(),
            };
            rep.input("criteria", ids.clone());
            let opts = VerifyOptions {
                seed: ctx.seed,
                points: *points,
                ..VerifyOptions::default()
            };
            let mut all = true;
            let mut out = Vec::new();
            for id in ids {
                let r = run_criterion(id, &mut ctx.engine, &mut ctx.table, &opts);
                eprintln!("{r}");
                all &= r.passed;
                rep.timing(&format!("criterion_{id}_ms"), r.elapsed_ms);
                out.push(json!({"id": r.id, "name": r.name, "passed": r.passed, "detail": r.detail}));
            }
            rep.result("criteria", out);
            rep.result("all_passed", all);
            Ok(all)
        }
    }
}

fn eval(ctx: &mut Ctx, rep: &mut Report, expr: &str, backend: Backend, points: usize) -> Result<bool, Error> {
    let f = ctx.jordan(expr)?;
    rep.input("expr", f.to_string());
    rep.input("backend", backend.to_string());
    rep.input("seed", ctx.seed);
    let values = seeded_values(&f, backend, ctx.seed, points)?;
    let nonzero = values.iter().any(|v| !v.zero);
    rep.result("nonzero_somewhere", nonzero);
    rep.result(
        "meaning",
        if nonzero {
            "nonzero in the free Jordan algebra"
        } else {
            "no conclusion"
        },
    );
    rep.result("values", serde_json::to_value(&values)?);
    Ok(true)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::MalformedWord(_) => 2,
        Error::ResourceCap(_) | Error::RecursionCapExceeded { .. } => 3,
        _ => 1,
    }
}

fn engine_config(cli: &Cli) -> Result<EngineConfig, Error> {
    let primes = match &cli.primes {
        Some(ps) => {
            if let Some(p) = ps.iter().find(|&&p| p >= 1 << 62 || !is_prime_u64(p)) {
                return Err(Error::InvalidArgument(format!("{p} is not a prime below 2^62")));
            }
            if ps.len() < 2 {
                return Err(Error::InvalidArgument("at least two primes are needed".into()));
            }
            ps.clone()
        }
        None => default_primes(),
    };
    let cache = if cli.no_cache {
        None
    } else {
        cli.cache_dir.clone().map(DiskCache::new)
    };
    let (cols, rows) = if cli.deep {
        (DEEP_MAX_COLS, DEEP_MAX_ROWS)
    } else {
        (DEFAULT_MAX_COLS, DEFAULT_MAX_ROWS)
    };
    Ok(EngineConfig {
        max_cols: cli.max_cols.unwrap_or(cols),
        max_rows: cli.max_rows.unwrap_or(rows),
        primes,
        cache,
        ..EngineConfig::default()
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut rep = Report::new(report::verb_name(&cli.verb));
    let outcome = engine_config(&cli).and_then(|config| {
        let mut ctx = Ctx {
            engine: Engine::new(config),
            table: LiftTable::new(),
            seed: cli.seed,
            deep: cli.deep,
        };
        let ok = run(&cli.verb, &mut ctx, &mut rep);
        for w in &ctx.engine.stats.warnings {
            eprintln!("warning: {w}");
        }
        rep.cache(&ctx.engine.stats);
        ok
    });
    rep.timing("total_ms", start.elapsed().as_millis());
    let code = match outcome {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            rep.error(&e, exit_code(&e));
            eprintln!("error: {e}");
            exit_code(&e)
        }
    };
    let text = match cli.format {
        Format::Json => rep.to_json() + "\n",
        Format::Text => rep.to_text(),
    };
    // A closed stdout (e.g. piping into `head`) is not an error.
    let _ = std::io::stdout().write_all(text.as_bytes());
    ExitCode::from(code)
}
