//! Batch command line front end. Every subcommand writes a single CSV or
//! JSON table; identical arguments give byte-identical output.

use std::ffi::OsString;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::combin::{int, to_f64, Rational};
use crate::cyclo::CyclotomicMapping;
use crate::dist::{
    asymptotic_params_occupancy, asymptotic_params_random_poly, nonzero_branch_valueset_dist,
    occupancy_dist, occupancy_moment, occupancy_sieve_terms, random_poly_moment,
    random_poly_sieve_terms, random_poly_valueset_dist, AsymptoticParams, CycloModel,
    ExactDistribution, MomentTable, NormalityThresholds,
};
use crate::error::{Error, Result};
use crate::field::{FieldBuilder, FieldElement, FieldSpec};
use crate::io::{self, MappingText, RunManifest, SCHEMA_VERSION};
use crate::poly::Polynomial;
use crate::sim::{
    check_bounds, enumerate_branch_tuples, enumerate_occupancy, enumerate_union, ks_normal_counts,
    sample_occupancy, sample_union, sample_valueset, Budgets, EmpiricalDistribution, MonteCarlo,
};
use crate::union::{union_asymptotic, union_dist, union_moment, union_sieve_terms, UnionModel};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Parsed command line: output options plus one subcommand.
#[derive(Debug, Parser)]
#[command(name = "vslab", version, about = "Exact value set statistics of polynomials over finite fields")]
pub struct RunConfig {
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// Write the table here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads for sampling and enumeration (default: all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Also write a JSON run manifest (parameters, seed, budgets, wall time).
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Finite field tables.
    #[command(subcommand)]
    Field(FieldCmd),
    /// Index form and value set of a single polynomial.
    #[command(subcommand)]
    Poly(PolyCmd),
    /// Evaluate a cyclotomic mapping.
    #[command(subcommand)]
    Map(MapCmd),
    /// Exact distribution of the value set size or union size.
    #[command(subcommand)]
    Dist(DistCmd),
    /// Falling-factorial moments and sieve terms of the missing count.
    Moments {
        #[command(flatten)]
        model: ModelArgs,
        /// Highest order to report (default: all).
        #[arg(long)]
        kmax: Option<u64>,
    },
    /// Normal-limit parameters and hypothesis diagnostics.
    Asymptotic {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Seeded Monte Carlo sample.
    Sample {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exhaustive enumeration within the budget.
    Enumerate {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Checks value set bounds on every enumerated mapping.
    CheckBounds {
        #[command(flatten)]
        field: FieldArgs,
        /// Largest index to enumerate (default: q - 1).
        #[arg(long = "l-max")]
        l_max: Option<u64>,
        /// Orders r, comma separated.
        #[arg(long, default_value = "1")]
        r: String,
    },
    /// Kolmogorov-Smirnov distance of the standardized missing count to N(0, 1).
    Ks {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Center::Asymptotic)]
        center: Center,
        /// Empirical CSV of missing counts to test instead of sampling.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        mu: Option<f64>,
        #[arg(long)]
        sigma: Option<f64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum FieldCmd {
    /// Constructs F_q and prints its descriptor (json) or exp/log table (csv).
    Build {
        #[command(flatten)]
        field: FieldArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum PolyCmd {
    /// Index form a x^r f(x^s) + b.
    Index {
        #[command(flatten)]
        field: FieldArgs,
        /// Coefficient codes, constant term first.
        #[arg(long)]
        poly: String,
    },
    /// Value set size via the index form.
    Valueset {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        poly: String,
        /// Also evaluate at every element and list the value set.
        #[arg(long)]
        brute: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum MapCmd {
    /// Evaluates a cyclotomic mapping `q=..;l=..;r=..;a=..`.
    Eval {
        #[arg(long)]
        mapping: String,
        #[arg(long)]
        modulus: Option<String>,
        /// Single point; all of F_q when omitted.
        #[arg(long)]
        x: Option<u64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum DistCmd {
    /// Empty boxes for `l` balls in `t l` boxes.
    Occupancy {
        #[arg(long)]
        t: u64,
        #[arg(long = "l")]
        ell: u64,
    },
    /// |V| of a random cyclotomic mapping.
    Valueset {
        #[arg(long)]
        q: u64,
        #[arg(long = "l")]
        ell: u64,
        #[arg(long, default_value_t = 1)]
        r: u64,
        /// Draw branches from F_q^* instead of F_q.
        #[arg(long)]
        nonzero: bool,
    },
    /// Size of a union of random subsets.
    Union {
        #[arg(long)]
        n: u64,
        /// `2,3,3` or `mxl`.
        #[arg(long)]
        sizes: String,
    },
}

#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    /// Field size (a prime power); alternative to --p and --k.
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub k: Option<u32>,
    /// Monic modulus coefficients, constant term first.
    #[arg(long)]
    pub modulus: Option<String>,
    /// Primitive element code (default: smallest).
    #[arg(long)]
    pub gamma: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Occupancy,
    Valueset,
    Union,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Center {
    Asymptotic,
    Exact,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub model: ModelKind,
    /// Occupancy: boxes per ball (default 1).
    #[arg(long)]
    pub t: Option<u64>,
    /// Number of balls, or the mapping index (valueset default: q - 1).
    #[arg(long = "l")]
    pub ell: Option<u64>,
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub r: u64,
    /// Union: ground set size.
    #[arg(long)]
    pub n: Option<u64>,
    /// Union: subset sizes, `2,3,3` or `3x4`.
    #[arg(long)]
    pub sizes: Option<String>,
    /// Valueset: draw branch coefficients from the nonzero elements only.
    #[arg(long)]
    pub nonzero: bool,
    /// Monic modulus coefficients, constant term first.
    #[arg(long)]
    pub modulus: Option<String>,
}

/// A validated model description.
#[derive(Debug, Clone)]
enum Model {
    Occupancy { t: u64, ell: u64 },
    Valueset { cyclo: CycloModel, nonzero: bool, modulus: Option<Vec<u64>> },
    Union(UnionModel),
}

fn need<T>(v: Option<T>, flag: &str, model: &str) -> Result<T> {
    v.ok_or_else(|| Error::InvalidParameter(format!("--{flag} is required for the {model} model")))
}

impl ModelArgs {
    fn resolve(&self) -> Result<Model> {
        match self.model {
            ModelKind::Occupancy => {
                let t = self.t.unwrap_or(1);
                let ell = need(self.ell, "l", "occupancy")?;
                if t == 0 || ell == 0 {
                    return Err(Error::InvalidParameter("t and l must be positive".into()));
                }
                Ok(Model::Occupancy { t, ell })
            }
            ModelKind::Valueset => {
                let q = need(self.q, "q", "valueset")?;
                let ell = self.ell.unwrap_or(q.saturating_sub(1));
                Ok(Model::Valueset {
                    cyclo: CycloModel::new(q, ell, self.r)?,
                    nonzero: self.nonzero,
                    modulus: self.modulus.as_deref().map(io::parse_list).transpose()?,
                })
            }
            ModelKind::Union => {
                let n = need(self.n, "n", "union")?;
                let sizes = io::parse_sizes(need(self.sizes.as_deref(), "sizes", "union")?)?;
                Ok(Model::Union(UnionModel::new(n, sizes)?))
            }
        }
    }
}

impl FieldArgs {
    fn build(&self) -> Result<Arc<FieldSpec>> {
        let (p, k) = match (self.q, self.p, self.k) {
            (Some(q), None, None) => crate::field::prime_power(q).ok_or(Error::NotPrimePower(q))?,
            (None, Some(p), k) => (p, k.unwrap_or(1)),
            (Some(q), Some(p), k) => {
                let k = k.unwrap_or(1);
                if (p as u128).checked_pow(k) != Some(q as u128) {
                    return Err(Error::InvalidParameter(format!("q = {q} is not p^k = {p}^{k}")));
                }
                (p, k)
            }
            _ => return Err(Error::InvalidParameter("give --q, or --p with optional --k".into())),
        };
        field_from(p, k, self.modulus.as_deref(), self.gamma)
    }
}

fn field_from(p: u64, k: u32, modulus: Option<&str>, gamma: Option<u32>) -> Result<Arc<FieldSpec>> {
    let mut b = FieldBuilder::new(p, k);
    if let Some(m) = modulus {
        b = b.modulus(&io::parse_list(m)?);
    }
    if let Some(g) = gamma {
        b = b.gamma(g);
    }
    Ok(Arc::new(b.build()?))
}

fn field_of_order(q: u64, modulus: Option<&[u64]>) -> Result<Arc<FieldSpec>> {
    let (p, k) = crate::field::prime_power(q).ok_or(Error::NotPrimePower(q))?;
    let mut b = FieldBuilder::new(p, k);
    if let Some(m) = modulus {
        b = b.modulus(m);
    }
    Ok(Arc::new(b.build()?))
}

/// Text for one record: a header row and a value row in CSV (lists joined
/// by `;`), an object in JSON.
fn record(format: Format, fields: Vec<(&str, Value)>) -> String {
    match format {
        Format::Json => {
            let mut map = Map::new();
            map.insert("schema_version".into(), json!(SCHEMA_VERSION));
            for (k, v) in fields {
                map.insert(k.into(), v);
            }
            pretty(&Value::Object(map))
        }
        Format::Csv => {
            let cell = |v: &Value| match v {
                Value::String(s) => s.clone(),
                Value::Null => String::new(),
                Value::Array(xs) => xs.iter().map(|x| x.to_string().trim_matches('"').to_string()).collect::<Vec<_>>().join(";"),
                other => other.to_string(),
            };
            let head: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
            let row: Vec<String> = fields.iter().map(|(_, v)| cell(v)).collect();
            format!("{}\n{}\n", head.join(","), row.join(","))
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn dist_out(format: Format, d: &ExactDistribution) -> String {
    match format {
        Format::Csv => io::dist_to_csv(d),
        Format::Json => pretty(&io::dist_to_json(d)),
    }
}

fn empirical_out(format: Format, d: &EmpiricalDistribution) -> String {
    match format {
        Format::Csv => io::empirical_to_csv(d),
        Format::Json => pretty(&io::empirical_to_json(d)),
    }
}

fn codes(xs: &[FieldElement]) -> Value {
    json!(xs.iter().map(|x| x.code()).collect::<Vec<_>>())
}

fn rational_cells(x: &Rational) -> (String, String) {
    (x.numer().to_string(), x.denom().to_string())
}

fn flags_fields(p: &AsymptoticParams) -> Vec<(&'static str, Value)> {
    vec![
        ("mu", json!(p.mu)),
        ("sigma2", json!(p.sigma2)),
        ("s_n", json!(p.s_n)),
        ("s_n_ok", json!(p.flags.s_n_ok)),
        ("mu_sigma_ok", json!(p.flags.mu_sigma_ok)),
        ("regime_ok", json!(p.flags.regime_ok)),
        ("hypotheses_ok", json!(p.hypotheses_ok())),
    ]
}

struct Outcome {
    text: String,
    code: i32,
    seed: Option<u64>,
    budgets: Option<Budgets>,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self {
            text,
            code: EXIT_OK,
            seed: None,
            budgets: None,
        }
    }
}

/// Missing values `q - |V|` (valueset), empty boxes, or uncovered points.
fn missing_count(model: &Model) -> impl Fn(u64) -> u64 {
    let top = match model {
        Model::Valueset { cyclo, .. } => Some(cyclo.q()),
        Model::Occupancy { .. } => None,
        Model::Union(u) => Some(u.n()),
    };
    move |v| top.map_or(v, |top| top - v)
}

/// Exact mean and variance of the missing count.
fn exact_missing_moments(model: &Model) -> Result<(Rational, Rational)> {
    let (scale, m1, m2) = match model {
        Model::Occupancy { t, ell } => {
            let n = t * ell;
            (1, occupancy_moment(*t, *ell, 1)?, if n >= 2 { occupancy_moment(*t, *ell, 2)? } else { int(0) })
        }
        Model::Valueset { cyclo, nonzero: false, .. } => (
            cyclo.coset_size(),
            random_poly_moment(cyclo, 1)?,
            if cyclo.boxes() >= 2 { random_poly_moment(cyclo, 2)? } else { int(0) },
        ),
        Model::Valueset { cyclo, nonzero: true, .. } => (
            cyclo.coset_size(),
            occupancy_moment(cyclo.t(), cyclo.ell(), 1)?,
            if cyclo.boxes() >= 2 { occupancy_moment(cyclo.t(), cyclo.ell(), 2)? } else { int(0) },
        ),
        Model::Union(u) => (1, union_moment(u, 1)?, if u.n() >= 2 { union_moment(u, 2)? } else { int(0) }),
    };
    let var = &m2 + &m1 - &m1 * &m1;
    let s = int(scale);
    Ok((&m1 * &s, var * &s * &s))
}

fn asymptotic_for(model: &Model, thr: &NormalityThresholds) -> Result<AsymptoticParams> {
    match model {
        Model::Occupancy { t, ell } => Ok(asymptotic_params_occupancy(*t, *ell, thr)),
        Model::Valueset { cyclo, nonzero, .. } => {
            if cyclo.ell() == cyclo.q() - 1 && cyclo.r() == 1 {
                Ok(if *nonzero {
                    asymptotic_params_occupancy(1, cyclo.ell(), thr)
                } else {
                    asymptotic_params_random_poly(cyclo.q(), thr)
                })
            } else if *nonzero {
                let p = asymptotic_params_occupancy(cyclo.t(), cyclo.ell(), thr);
                let c = cyclo.coset_size() as f64;
                Ok(AsymptoticParams::new(p.mu * c, p.sigma2 * c * c, p.flags.regime_ok, thr))
            } else {
                Err(Error::InvalidParameter(
                    "asymptotic parameters for branches over F_q need l = q - 1 and r = 1; use --center exact".into(),
                ))
            }
        }
        Model::Union(u) => Ok(union_asymptotic(u, thr)),
    }
}

fn exact_law(model: &Model) -> Result<ExactDistribution> {
    match model {
        Model::Occupancy { t, ell } => occupancy_dist(*t, *ell),
        Model::Valueset { cyclo, nonzero: false, .. } => random_poly_valueset_dist(cyclo),
        Model::Valueset { cyclo, nonzero: true, .. } => nonzero_branch_valueset_dist(cyclo),
        Model::Union(u) => union_dist(u),
    }
}

fn sample_model(model: &Model, mc: &MonteCarlo) -> Result<EmpiricalDistribution> {
    match model {
        Model::Occupancy { t, ell } => sample_occupancy(*t, *ell, mc),
        Model::Valueset { cyclo, nonzero, modulus } => {
            let field = field_of_order(cyclo.q(), modulus.as_deref())?;
            sample_valueset(&field, cyclo.ell(), cyclo.r(), *nonzero, mc)
        }
        Model::Union(u) => sample_union(u, mc),
    }
}

fn model_json(model: &Model) -> Value {
    match model {
        Model::Occupancy { t, ell } => json!({"model": "occupancy", "t": t, "l": ell}),
        Model::Valueset { cyclo, nonzero, modulus } => json!({
            "model": "valueset", "q": cyclo.q(), "l": cyclo.ell(), "r": cyclo.r(),
            "nonzero": nonzero, "modulus": modulus,
        }),
        Model::Union(u) => json!({"model": "union", "n": u.n(), "sizes": u.sizes()}),
    }
}

fn with_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(0) => Err(Error::InvalidParameter("--workers must be positive".into())),
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}"))),
    }
}

fn execute(cfg: &RunConfig) -> Result<Outcome> {
    let fmt = cfg.format;
    match &cfg.command {
        Command::Field(FieldCmd::Build { field }) => {
            let f = field.build()?;
            let text = match fmt {
                Format::Json => {
                    let mut v = serde_json::to_value(f.descriptor()).expect("descriptor serializes");
                    v["q"] = json!(f.q());
                    v["schema_version"] = json!(SCHEMA_VERSION);
                    pretty(&v)
                }
                Format::Csv => {
                    let mut s = String::from("code,coeffs,log\n");
                    for x in f.elements() {
                        let log = f.dlog(x).map(|l| l.to_string()).unwrap_or_default();
                        let coeffs = f.coeffs(x).iter().map(u32::to_string).collect::<Vec<_>>().join(";");
                        s.push_str(&format!("{},{coeffs},{log}\n", x.code()));
                    }
                    s
                }
            };
            Ok(Outcome::ok(text))
        }
        Command::Poly(PolyCmd::Index { field, poly }) => {
            let f = field.build()?;
            let g = Polynomial::from_codes(f, &io::parse_list(poly)?)?;
            let form = g.index_decompose()?;
            Ok(Outcome::ok(record(
                fmt,
                vec![
                    ("r", json!(form.r)),
                    ("s", json!(form.s)),
                    ("l", json!(form.ell)),
                    ("a", json!(form.a.code())),
                    ("b", json!(form.b.code())),
                    ("f_exponents", json!(form.f_exponents)),
                    ("f_coeffs", codes(&form.f_coeffs)),
                ],
            )))
        }
        Command::Poly(PolyCmd::Valueset { field, poly, brute }) => {
            let f = field.build()?;
            let g = Polynomial::from_codes(f.clone(), &io::parse_list(poly)?)?;
            let size = g.value_set_size();
            let mut fields = vec![
                ("q", json!(f.q())),
                ("degree", json!(g.degree())),
                ("index", json!(g.index_decompose().ok().map(|form| form.ell))),
                ("size", json!(size)),
                ("is_pp", json!(size == f.q() as u64)),
            ];
            if *brute {
                let values: Vec<FieldElement> = g.value_set_brute().into_iter().collect();
                if values.len() as u64 != size {
                    return Err(Error::Invariant(format!(
                        "index-form size {size} disagrees with brute force {}",
                        values.len()
                    )));
                }
                fields.push(("values", codes(&values)));
            }
            Ok(Outcome::ok(record(fmt, fields)))
        }
        Command::Map(MapCmd::Eval { mapping, modulus, x }) => {
            let text: MappingText = mapping.parse()?;
            let modulus = modulus.as_deref().map(io::parse_list).transpose()?;
            let f = field_of_order(text.q, modulus.as_deref())?;
            let branches = text.branches.iter().map(|&c| f.element(c)).collect::<Result<Vec<_>>>()?;
            if branches.len() as u64 != text.ell {
                return Err(Error::InvalidParameter(format!(
                    "l = {} but {} branches given",
                    text.ell,
                    branches.len()
                )));
            }
            let m = CyclotomicMapping::new(f.clone(), text.r, text.ell, branches)?;
            let xs: Vec<FieldElement> = match x {
                Some(c) => vec![f.element(*c)?],
                None => f.elements().collect(),
            };
            let pairs = xs.iter().map(|&x| Ok((x.code(), m.eval(x)?.code()))).collect::<Result<Vec<_>>>()?;
            let report = m.value_set_size_fast();
            let text = match fmt {
                Format::Csv => {
                    let mut s = String::from("x,value\n");
                    for (x, y) in &pairs {
                        s.push_str(&format!("{x},{y}\n"));
                    }
                    s
                }
                Format::Json => pretty(&json!({
                    "schema_version": SCHEMA_VERSION,
                    "mapping": text.to_string(),
                    "values": pairs.iter().map(|(x, y)| json!({"x": x, "value": y})).collect::<Vec<_>>(),
                    "value_set_size": report.size,
                    "is_pp": m.is_permutation(),
                })),
            };
            Ok(Outcome::ok(text))
        }
        Command::Dist(cmd) => {
            let d = match cmd {
                DistCmd::Occupancy { t, ell } => occupancy_dist(*t, *ell)?,
                DistCmd::Valueset { q, ell, r, nonzero } => {
                    let model = CycloModel::new(*q, *ell, *r)?;
                    if *nonzero {
                        nonzero_branch_valueset_dist(&model)?
                    } else {
                        random_poly_valueset_dist(&model)?
                    }
                }
                DistCmd::Union { n, sizes } => union_dist(&UnionModel::new(*n, io::parse_sizes(sizes)?)?)?,
            };
            Ok(Outcome::ok(dist_out(fmt, &d)))
        }
        Command::Moments { model, kmax } => {
            let model = model.resolve()?;
            let terms = match &model {
                Model::Occupancy { t, ell } => occupancy_sieve_terms(*t, *ell)?,
                Model::Valueset { cyclo, nonzero: false, .. } => random_poly_sieve_terms(cyclo),
                Model::Valueset { cyclo, nonzero: true, .. } => occupancy_sieve_terms(cyclo.t(), cyclo.ell())?,
                Model::Union(u) => union_sieve_terms(u),
            };
            let table = MomentTable::from_sieve_terms(terms);
            let top = kmax.unwrap_or(table.k_max).min(table.k_max) as usize;
            let rows: Vec<(usize, &Rational, &Rational)> = (0..=top)
                .map(|k| (k, &table.falling_moments[k], &table.sieve_terms[k]))
                .collect();
            let text = match fmt {
                Format::Csv => {
                    let mut s = String::from("k,falling_num,falling_den,sieve_num,sieve_den,float_falling\n");
                    for (k, m, st) in rows {
                        let (mn, md) = rational_cells(m);
                        let (sn, sd) = rational_cells(st);
                        s.push_str(&format!("{k},{mn},{md},{sn},{sd},{}\n", to_f64(m)));
                    }
                    s
                }
                Format::Json => pretty(&json!({
                    "schema_version": SCHEMA_VERSION,
                    "rows": rows.iter().map(|(k, m, st)| json!({
                        "k": k,
                        "falling_num": m.numer().to_string(), "falling_den": m.denom().to_string(),
                        "sieve_num": st.numer().to_string(), "sieve_den": st.denom().to_string(),
                        "float_falling": to_f64(m),
                    })).collect::<Vec<_>>(),
                })),
            };
            Ok(Outcome::ok(text))
        }
        Command::Asymptotic { model } => {
            let model = model.resolve()?;
            let params = asymptotic_for(&model, &NormalityThresholds::default())?;
            Ok(Outcome::ok(record(fmt, flags_fields(&params))))
        }
        Command::Sample { model, trials, seed } => {
            let model = model.resolve()?;
            let mut mc = MonteCarlo::new(*trials, *seed);
            mc.workers = cfg.workers;
            let d = sample_model(&model, &mc)?;
            Ok(Outcome {
                text: empirical_out(fmt, &d),
                code: EXIT_OK,
                seed: Some(*seed),
                budgets: None,
            })
        }
        Command::Enumerate { model } => {
            let model = model.resolve()?;
            let budgets = Budgets::from_env()?;
            let d = with_pool(cfg.workers, || match &model {
                Model::Occupancy { t, ell } => enumerate_occupancy(*t, *ell, budgets.occupancy),
                Model::Valueset { cyclo, nonzero, modulus } => {
                    let field = field_of_order(cyclo.q(), modulus.as_deref())?;
                    enumerate_branch_tuples(&field, cyclo.ell(), cyclo.r(), *nonzero, budgets.branch_tuples)
                }
                Model::Union(u) => enumerate_union(u, budgets.union),
            })??;
            let exact = exact_law(&model).ok();
            if let Some(exact) = exact {
                if d.to_exact()? != exact {
                    return Err(Error::Invariant("enumeration disagrees with the exact law".into()));
                }
            }
            Ok(Outcome {
                text: empirical_out(fmt, &d),
                code: EXIT_OK,
                seed: None,
                budgets: Some(budgets),
            })
        }
        Command::CheckBounds { field, l_max, r } => {
            let f = field.build()?;
            let rs = io::parse_list(r)?;
            let budgets = Budgets::from_env()?;
            let ell_max = l_max.unwrap_or(f.order());
            let report = with_pool(cfg.workers, || check_bounds(&f, ell_max, &rs, budgets.branch_tuples))??;
            let code = if report.is_clean() { EXIT_OK } else { EXIT_INVARIANT };
            let text = match fmt {
                Format::Json => pretty(&serde_json::to_value(&report).expect("report serializes")),
                Format::Csv => {
                    let mut s = String::from("size,degree,index,is_pp,count\n");
                    for rc in &report.records {
                        let r = rc.record;
                        s.push_str(&format!("{},{},{},{},{}\n", r.size, r.degree, r.index, r.is_pp, rc.count));
                    }
                    s
                }
            };
            for v in report.violations.iter().take(20) {
                eprintln!("violation {:?}: r={} l={} branches={:?} {:?}", v.rule, v.r, v.ell, v.branches, v.record);
            }
            Ok(Outcome {
                text,
                code,
                seed: None,
                budgets: Some(budgets),
            })
        }
        Command::Ks { model, trials, seed, center, input, mu, sigma } => {
            let (sample, mu, sigma) = match input {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| Error::InvalidParameter(format!("{}: {e}", path.display())))?;
                    let d = io::empirical_from_csv(&text)?;
                    let (Some(mu), Some(sigma)) = (mu, sigma) else {
                        return Err(Error::InvalidParameter("--input needs --mu and --sigma".into()));
                    };
                    (d, *mu, *sigma)
                }
                None => {
                    let model = model.resolve()?;
                    let (m0, s0) = match center {
                        Center::Asymptotic => {
                            let p = asymptotic_for(&model, &NormalityThresholds::default())?;
                            (p.mu, p.sigma())
                        }
                        Center::Exact => {
                            let (m, v) = exact_missing_moments(&model)?;
                            (to_f64(&m), to_f64(&v).sqrt())
                        }
                    };
                    let mut mc = MonteCarlo::new(*trials, *seed);
                    mc.workers = cfg.workers;
                    let d = sample_model(&model, &mc)?.map_values(missing_count(&model));
                    (d, mu.unwrap_or(m0), sigma.unwrap_or(s0))
                }
            };
            let stat = ks_normal_counts(&sample, mu, sigma)?;
            Ok(Outcome {
                text: record(
                    fmt,
                    vec![
                        ("trials", json!(sample.trials())),
                        ("mu", json!(mu)),
                        ("sigma", json!(sigma)),
                        ("sample_mean", json!(sample.mean())),
                        ("ks", json!(stat)),
                    ],
                ),
                code: EXIT_OK,
                seed: input.is_none().then_some(*seed),
                budgets: None,
            })
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Budget { .. } | Error::ExactLimit { .. } | Error::TableLimit { .. } => EXIT_BUDGET,
        Error::Invariant(_) | Error::InconsistentSieve(_) => EXIT_INVARIANT,
        _ => EXIT_VALIDATION,
    }
}

fn emit(cfg: &RunConfig, text: &str) -> std::io::Result<()> {
    match &cfg.output {
        Some(path) => std::fs::write(path, text),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

/// Runs one command line and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cfg = match RunConfig::try_parse_from(&args) {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
        }
    };
    let started = Instant::now();
    let outcome = match execute(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    if let Err(e) = emit(&cfg, &outcome.text) {
        eprintln!("error: cannot write output: {e}");
        return EXIT_VALIDATION;
    }
    if let Some(path) = &cfg.manifest {
        let manifest = RunManifest {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION"),
            command: args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect(),
            parameters: parameters_json(&cfg),
            seed: outcome.seed,
            budgets: outcome.budgets.map(|b| serde_json::to_value(b).expect("budgets serialize")),
            wall_time_secs: started.elapsed().as_secs_f64(),
        };
        let text = pretty(&serde_json::to_value(&manifest).expect("manifest serializes"));
        if let Err(e) = std::fs::write(path, text) {
            eprintln!("error: cannot write manifest: {e}");
            return EXIT_VALIDATION;
        }
    }
    outcome.code
}

fn parameters_json(cfg: &RunConfig) -> Value {
    let model = match &cfg.command {
        Command::Moments { model, .. }
        | Command::Asymptotic { model }
        | Command::Sample { model, .. }
        | Command::Enumerate { model }
        | Command::Ks { model, .. } => model.resolve().ok().map(|m| model_json(&m)),
        _ => None,
    };
    json!({
        "format": format!("{:?}", cfg.format).to_lowercase(),
        "workers": cfg.workers,
        "model": model,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_subcommands() {
        for argv in [
            "vslab dist valueset --q 3 --l 2 --r 1 --format csv",
            "vslab poly index --q 11 --poly 0,0,0,1,0,1",
            "vslab sample --model union --n 50 --sizes 5x10 --trials 10 --seed 1 --workers 2",
            "vslab check-bounds --q 7 --l-max 3 --r 1,2",
            "vslab ks --model valueset --q 499 --trials 200 --center exact",
        ] {
            RunConfig::try_parse_from(argv.split(' ')).unwrap();
        }
        assert!(RunConfig::try_parse_from("vslab dist valueset --q 3 --bogus".split(' ')).is_err());
    }

    #[test]
    fn model_validation_names_constraint() {
        let cfg = RunConfig::try_parse_from("vslab moments --model valueset --q 7 --l 4".split(' ')).unwrap();
        let Command::Moments { model, .. } = cfg.command else { unreachable!() };
        let err = model.resolve().unwrap_err();
        assert!(err.to_string().contains("does not divide"), "{err}");
    }

    #[test]
    fn exact_moments_match_laws() {
        for model in [
            Model::Occupancy { t: 2, ell: 3 },
            Model::Valueset { cyclo: CycloModel::new(7, 3, 2).unwrap(), nonzero: false, modulus: None },
            Model::Valueset { cyclo: CycloModel::new(9, 4, 1).unwrap(), nonzero: true, modulus: None },
            Model::Union(UnionModel::new(6, vec![2, 3]).unwrap()),
        ] {
            let (m, v) = exact_missing_moments(&model).unwrap();
            let missing = exact_law(&model).unwrap().map_support(missing_count(&model));
            assert_eq!((m, v), (missing.mean(), missing.variance()), "{model:?}");
        }
    }
}
