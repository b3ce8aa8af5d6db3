//! `qcohom`: exact cohomology pairings, densities and ring presentations for
//! the r-qubit torus action, plus a Monte Carlo cross-check.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use qcohom_core::action::{build_weight_matrix, canonical_gamma, fixed_points};
use qcohom_core::algebra::{parse_rational, parse_rational_list, Polynomial, Rational, Vars};
use qcohom_core::engine::{dh_density, ClassSpec, DhDensity, Engine};
use qcohom_core::oracle::{
    compare_density, compare_slice, sample_marginals, sample_slice, Histogram, Metric, Report,
    SampleConfig,
};
use qcohom_core::ring::{chi_sigma_decomposition, ring_presentation};
use qcohom_core::walls::{axis_name, build_dendrite, first_ray_crossings, Cell};

type CliResult<T> = std::result::Result<T, Box<dyn std::error::Error>>;

#[derive(Parser, Debug)]
#[command(
    name = "qcohom",
    version,
    about = "Cohomology of qubit torus quotients"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Seed for the sampler.
    #[arg(long, default_value_t = 42, global = true)]
    seed: u64,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Weight matrix and fixed-point data.
    Action {
        #[arg(long)]
        qubits: usize,
        /// Full fixed-point table.
        #[arg(long)]
        dump: bool,
    },
    /// Chamber of xi and its dendrite.
    Chamber {
        #[arg(long)]
        qubits: usize,
        #[arg(long)]
        xi: String,
    },
    /// Kernel generators, Groebner basis and Poincare series.
    Ring {
        #[arg(long)]
        qubits: usize,
        /// Also rewrite sigma_k(chi) in elementary symmetric polynomials.
        #[arg(long)]
        sigma: bool,
        /// Level for the separating generators (default: inside the central cell).
        #[arg(long)]
        xi: Option<String>,
    },
    /// Pairing of eta^a omega^b at xi.
    Pair {
        #[arg(long)]
        qubits: usize,
        #[arg(long, default_value_t = 0)]
        a: u32,
        #[arg(long)]
        b: u32,
        #[arg(long)]
        xi: String,
        /// Report the polynomial in x1..xr valid on the cell of xi.
        #[arg(long)]
        symbolic: bool,
    },
    /// Piecewise polynomial density.
    Dh {
        #[arg(long)]
        qubits: usize,
        #[arg(long)]
        normalize: bool,
        /// A cell name (e.g. upper/right) or an apex name (e.g. upper).
        #[arg(long, conflicts_with = "all")]
        chamber: Option<String>,
        #[arg(long)]
        all: bool,
    },
    /// Sample marginals and optionally compare against a density.
    Oracle(OracleArgs),
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long)]
    qubits: usize,
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 20)]
    bins: usize,
    /// Wall exclusion band in xi units (default 1/bins).
    #[arg(long)]
    band: Option<String>,
    /// Density JSON as printed by `dh --normalize --all`; `-` reads stdin.
    #[arg(long)]
    compare: Option<String>,
    /// Condition on |xi_k| < half-width (1-based axis) and bin the rest.
    #[arg(long)]
    slice: Option<usize>,
    /// Slab half-width for --slice (default 1/bins).
    #[arg(long)]
    half_width: Option<String>,
    #[arg(long, value_enum)]
    metric: Option<MetricArg>,
    /// Pass threshold for the chosen metric.
    #[arg(long)]
    threshold: Option<f64>,
    /// Include per-cell residuals in the report.
    #[arg(long)]
    cells: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MetricArg {
    Linf,
    L2,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|v| emit(&cli, &v)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn emit(cli: &Cli, v: &Value) -> CliResult<()> {
    let mut text = match cli.format {
        Format::Json => serde_json::to_string_pretty(v)?,
        Format::Text => {
            let mut s = String::new();
            render_text(v, "", &mut s);
            s.trim_end().to_string()
        }
    };
    text.push('\n');
    match &cli.out {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn render_text(v: &Value, prefix: &str, out: &mut String) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                render_text(x, &key, out);
            }
        }
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let items: Vec<String> = a.iter().map(scalar_text).collect();
            out.push_str(&format!("{prefix}: [{}]\n", items.join(", ")));
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                render_text(x, &format!("{prefix}[{i}]"), out);
            }
        }
        _ => out.push_str(&format!("{prefix}: {}\n", scalar_text(v))),
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn run(cli: &Cli) -> CliResult<Value> {
    match &cli.command {
        Command::Action { qubits, dump } => action(*qubits, *dump),
        Command::Chamber { qubits, xi } => chamber(*qubits, xi),
        Command::Ring { qubits, sigma, xi } => ring(*qubits, *sigma, xi.as_deref()),
        Command::Pair {
            qubits,
            a,
            b,
            xi,
            symbolic,
        } => pair(*qubits, *a, *b, xi, *symbolic),
        Command::Dh {
            qubits,
            normalize,
            chamber,
            all,
        } => dh(*qubits, *normalize, chamber.as_deref(), *all),
        Command::Oracle(args) => oracle(args, cli.seed),
    }
}

fn rat_str(x: &Rational) -> Value {
    Value::String(x.to_string())
}

fn xi_arg(r: usize, s: &str) -> CliResult<Vec<Rational>> {
    let xi = parse_rational_list(s)?;
    if xi.len() != r {
        return Err(format!("--xi has {} coordinates, expected {r}", xi.len()).into());
    }
    Ok(xi)
}

fn action(r: usize, dump: bool) -> CliResult<Value> {
    let a = build_weight_matrix(r)?;
    let mut out = Map::new();
    out.insert("qubits".into(), json!(r));
    out.insert("points".into(), json!(a.num_points()));
    out.insert("columns".into(), json!(a.columns()));
    if dump {
        let gamma = canonical_gamma(r);
        let vars = Vars::theta(r);
        let points: Vec<Value> = fixed_points(&a)?
            .iter()
            .map(|fp| {
                json!({
                    "index": format!("p{}", fp.index),
                    "vertex": fp.vertex,
                    "weights": fp.weights.iter().map(|w| &w.coeffs).collect::<Vec<_>>(),
                    "epsilon": fp.polarized.iter().map(|p| p.epsilon).collect::<Vec<_>>(),
                    "polarized": fp.polarized.iter().map(|p| p.polarized().coeffs).collect::<Vec<_>>(),
                    "orientation": fp.orientation(),
                    "euler_class": fp.euler_class(&vars).to_string(),
                })
            })
            .collect();
        out.insert("gamma".into(), json!(gamma));
        out.insert("fixed_points".into(), Value::Array(points));
    }
    Ok(Value::Object(out))
}

/// e.g. `+x3 (upper)`
fn step_name(r: usize, step: (usize, qcohom_core::walls::Sign)) -> String {
    format!(
        "{}x{} ({})",
        step.1,
        step.0 + 1,
        axis_name(r, step.0, step.1)
    )
}

fn chamber(r: usize, xi: &str) -> CliResult<Value> {
    let xi = xi_arg(r, xi)?;
    let engine = Engine::new(r)?;
    let ch = engine.locate(&xi)?;
    let hit: Vec<String> = first_ray_crossings(engine.walls(), &ch, &xi)
        .iter()
        .map(|w| w.to_string())
        .collect();
    let paths = build_dendrite(&ch, engine.matrix(), &xi)?;
    let dendrite: Vec<Value> = paths
        .iter()
        .map(|p| {
            json!({
                "steps": p.steps.iter().map(|&s| step_name(r, s)).collect::<Vec<_>>(),
                "terminal": format!("p{}", p.terminal),
                "sign": p.sign,
            })
        })
        .collect();
    Ok(json!({
        "chamber": ch.name(),
        "cell": ch.cell.name(),
        "apex": format!("{}x{}", ch.apex_sign, ch.apex_axis + 1),
        "first_ray_walls": hit,
        "dendrite": dendrite,
    }))
}

fn ring(r: usize, sigma: bool, xi: Option<&str>) -> CliResult<Value> {
    let a = build_weight_matrix(r)?;
    let xi = xi.map(|s| xi_arg(r, s)).transpose()?;
    let pres = ring_presentation(&a, xi.as_deref())?;
    let generators: Vec<Value> = pres
        .generators
        .iter()
        .map(|g| {
            json!({
                "circle": g.circle,
                "side": g.side.to_string(),
                "factored": g.product.factored(&a),
                "expanded": g.product.expanded.to_string(),
            })
        })
        .collect();
    let separating: Vec<Value> = pres
        .separating
        .iter()
        .map(|g| {
            json!({
                "points": g.points.iter().map(|j| format!("p{j}")).collect::<Vec<_>>(),
                "factored": g.factored(&a),
                "expanded": g.expanded.to_string(),
            })
        })
        .collect();
    let mut out = Map::new();
    out.insert("qubits".into(), json!(r));
    out.insert(
        "xi".into(),
        Value::Array(pres.xi.iter().map(rat_str).collect()),
    );
    out.insert("generators".into(), Value::Array(generators));
    out.insert("separating".into(), Value::Array(separating));
    out.insert(
        "full_relation".into(),
        json!(pres.full_relation.to_string()),
    );
    out.insert(
        "groebner".into(),
        json!(pres
            .groebner
            .iter()
            .map(Polynomial::to_string)
            .collect::<Vec<_>>()),
    );
    out.insert("poincare".into(), json!(pres.poincare));
    if sigma {
        let parts: Vec<Value> = chi_sigma_decomposition(&a)?
            .iter()
            .map(
                |c| json!({ "k": c.k, "theta": c.theta.to_string(), "sigma": c.sigma.to_string() }),
            )
            .collect();
        out.insert("sigma".into(), Value::Array(parts));
    }
    Ok(Value::Object(out))
}

fn pair(r: usize, a: u32, b: u32, xi: &str, symbolic: bool) -> CliResult<Value> {
    let xi = xi_arg(r, xi)?;
    let spec = ClassSpec::new(r, a, b)?;
    let engine = Engine::new(r)?;
    let res = if symbolic {
        engine.pairing_symbolic(spec, &xi)?
    } else {
        engine.pairing(spec, &xi)?
    };
    let show = |p: &Polynomial| -> Value {
        if symbolic {
            json!(p.to_string())
        } else {
            rat_str(&p.as_constant().unwrap_or_else(Rational::zero))
        }
    };
    let contributions: Map<String, Value> = res
        .contributions
        .iter()
        .map(|(j, p)| (format!("p{j}"), show(p)))
        .collect();
    Ok(json!({
        "chamber": res.chamber.name(),
        "total": show(&res.value),
        "contributions": contributions,
    }))
}

fn dh(r: usize, normalize: bool, chamber: Option<&str>, all: bool) -> CliResult<Value> {
    let d = dh_density(r, normalize)?;
    let selected: Vec<&(Cell, Polynomial)> = match chamber {
        Some(name) if !all => {
            let hits: Vec<_> = match Cell::parse(r, name) {
                Ok(c) => d.cells.iter().filter(|(k, _)| *k == c).collect(),
                Err(_) => d
                    .cells
                    .iter()
                    .filter(|(k, _)| k.name().split('/').next() == Some(name))
                    .collect(),
            };
            if hits.is_empty() {
                return Err(format!("no cell or chamber named {name:?} for r = {r}").into());
            }
            hits
        }
        _ => d.cells.iter().collect(),
    };
    let chambers: Map<String, Value> = selected
        .iter()
        .map(|(c, p)| (c.name(), json!(p.to_string())))
        .collect();
    Ok(json!({
        "qubits": r,
        "normalized": d.normalized,
        "scale": rat_str(&d.scale),
        "chambers": chambers,
    }))
}

fn density_from_json(v: &Value) -> CliResult<DhDensity> {
    let r = v["qubits"]
        .as_u64()
        .ok_or("density JSON lacks \"qubits\"")? as usize;
    let vars = Vars::xi(r);
    let chambers = v["chambers"]
        .as_object()
        .ok_or("density JSON lacks \"chambers\"")?;
    let mut cells = Vec::with_capacity(chambers.len());
    for (name, p) in chambers {
        let text = p
            .as_str()
            .ok_or_else(|| format!("chamber {name}: polynomial must be a string"))?;
        cells.push((Cell::parse(r, name)?, Polynomial::parse(&vars, text)?));
    }
    let scale = match v["scale"].as_str() {
        Some(s) => parse_rational(s)?,
        None => Rational::from_integer(1.into()),
    };
    Ok(DhDensity {
        r,
        normalized: v["normalized"].as_bool().unwrap_or(false),
        scale,
        cells,
    })
}

fn histogram_json(h: &Histogram, seed: u64) -> Value {
    json!({
        "axes": h.dims,
        "bins": h.bins,
        "samples": h.samples,
        "seed": seed,
        "counts": h.counts,
    })
}

fn report_json(rep: &Report, cells: bool) -> Value {
    let mut out = Map::new();
    out.insert("axes".into(), json!(rep.dims));
    out.insert("bins".into(), json!(rep.bins));
    out.insert("samples".into(), json!(rep.samples));
    out.insert("band".into(), json!(rep.band));
    out.insert("compared".into(), json!(rep.compared));
    out.insert("excluded".into(), json!(rep.excluded));
    out.insert("linf".into(), json!(rep.linf));
    out.insert("l2".into(), json!(rep.l2));
    out.insert(
        "metric".into(),
        json!(match rep.metric {
            Metric::Linf => "linf",
            Metric::L2 => "l2",
        }),
    );
    out.insert("threshold".into(), json!(rep.threshold));
    if let Some(m) = rep.monotone {
        out.insert("monotone".into(), json!(m));
    }
    out.insert("pass".into(), json!(rep.pass));
    if cells {
        let rows: Vec<Value> = rep
            .cells
            .iter()
            .map(|c| {
                json!({
                    "index": c.index,
                    "center": c.center,
                    "empirical": c.empirical,
                    "model": c.model,
                    "residual": c.residual(),
                    "included": c.included,
                })
            })
            .collect();
        out.insert("cells".into(), Value::Array(rows));
    }
    Value::Object(out)
}

fn oracle(args: &OracleArgs, seed: u64) -> CliResult<Value> {
    let mut cfg = SampleConfig::new(args.qubits, args.samples, args.bins, seed);
    cfg.band = args.band.as_deref().map(parse_rational).transpose()?;
    cfg.validate()?;
    let band = cfg.band().to_f64().unwrap_or(0.0);
    let half = match &args.half_width {
        Some(s) => parse_rational(s)?,
        None => Rational::new(1.into(), (args.bins as i64).into()),
    };
    let axis = args
        .slice
        .map(|k| k.checked_sub(1).ok_or("--slice is 1-based"))
        .transpose()?;
    let h = match axis {
        Some(k) => sample_slice(&cfg, k, &half)?,
        None => sample_marginals(&cfg)?,
    };
    let Some(src) = &args.compare else {
        return Ok(histogram_json(&h, seed));
    };
    let text = if src == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(src)?
    };
    let density = density_from_json(&serde_json::from_str(&text)?)?;
    let rep = match axis {
        Some(k) => compare_slice(&h, &density, k, band, args.threshold.unwrap_or(0.05))?,
        None => {
            let metric = match args.metric.unwrap_or(MetricArg::Linf) {
                MetricArg::Linf => Metric::Linf,
                MetricArg::L2 => Metric::L2,
            };
            compare_density(&h, &density, band, metric, args.threshold.unwrap_or(0.02))?
        }
    };
    Ok(report_json(&rep, args.cells))
}
