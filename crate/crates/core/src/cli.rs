//! Command-line front end: `eval`, `table`, `verify` and `limits`.
//!
//! Data goes to the provided stdout writer, diagnostics to stderr. Exit
//! codes are 0 (all checks pass), 1 (a check failed) and 2 (usage or
//! domain error).

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_pcg::Pcg64;
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::campaigns::{
    affine_campaign, cm_psi_prime, cm_ratio, lcm_h, lcm_root, limit_table, logconvex_gamma,
    near_one_series_control, random_affine_sample, random_ratio_spec, random_two_point_spec,
    young_bracket, AffineReport, AffineSample, Corner, LimitTable,
};
use crate::error::Error;
use crate::gammafam::{log_gamma_classical, log_gamma_p, log_gamma_pq, log_gamma_q};
use crate::monocheck::{GridSpec, MonotonicityReport};
use crate::paperfuncs::{
    log_f1, log_f_root, log_g_pq, log_h_beta, validate_ratio_spec, AffineInequalitySpec,
    RatioSpec, RootVariant, SignLemma, TwoPointSpec,
};
use crate::psifam::{psi_classical, psi_p, psi_pq, psi_pq_deriv, psi_q};
use crate::qcore::{PQParams, SeriesControl};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "pqgamma", version, about = "(p,q)-gamma functions and monotonicity checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one function at one point.
    Eval {
        #[arg(long = "fn", value_enum)]
        function: FnId,
        #[arg(long, allow_negative_numbers = true)]
        x: Option<f64>,
        #[command(flatten)]
        args: FnArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Tabulate a function on an evenly spaced grid (CSV columns `x,value`).
    Table {
        #[arg(long = "fn", value_enum)]
        function: FnId,
        #[arg(long, allow_negative_numbers = true)]
        lo: f64,
        #[arg(long, allow_negative_numbers = true)]
        hi: f64,
        #[arg(long)]
        count: usize,
        #[command(flatten)]
        args: FnArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run a verification campaign.
    Verify {
        #[arg(value_enum)]
        campaign: Campaign,
        #[command(flatten)]
        args: FnArgs,
        /// Grid lower end.
        #[arg(long, allow_negative_numbers = true)]
        lo: Option<f64>,
        /// Grid upper end.
        #[arg(long, allow_negative_numbers = true)]
        hi: Option<f64>,
        /// Grid points, or sample count for the inequality campaigns.
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        max_order: Option<u32>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1000.0)]
        tol_scale: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Convergence tables along the limit diagrams.
    Limits {
        #[arg(value_enum)]
        corner: LimitCorner,
        #[arg(long, allow_negative_numbers = true)]
        x: Option<f64>,
        /// Fixed p on q-ladders.
        #[arg(long)]
        p: Option<u64>,
        /// Fixed q on p-ladders.
        #[arg(long)]
        q: Option<f64>,
        /// Comma-separated ladder; for psi-diagram this is the p-ladder.
        #[arg(long, value_delimiter = ',')]
        ladder: Option<Vec<f64>>,
        /// Comma-separated q-ladder for psi-diagram.
        #[arg(long, value_delimiter = ',')]
        q_ladder: Option<Vec<f64>>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Default, Args)]
struct FnArgs {
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    q: Option<f64>,
    /// Derivative order.
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, value_delimiter = ',')]
    a: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    b: Option<Vec<f64>>,
    #[arg(long, allow_negative_numbers = true)]
    s: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    t: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    /// Six comma-separated reals a,b,c,d,e,f.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    abc: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    variant: Option<VariantArg>,
}

#[derive(Debug, Clone, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Also write the output bytes to this file.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FnId {
    #[value(name = "gamma_pq")]
    GammaPq,
    #[value(name = "gamma_p")]
    GammaP,
    #[value(name = "gamma_q")]
    GammaQ,
    #[value(name = "gamma")]
    Gamma,
    #[value(name = "psi_pq")]
    PsiPq,
    #[value(name = "psi_pq_deriv")]
    PsiPqDeriv,
    #[value(name = "psi_p")]
    PsiP,
    #[value(name = "psi_q")]
    PsiQ,
    #[value(name = "psi")]
    Psi,
    #[value(name = "G_pq")]
    GPq,
    #[value(name = "f32")]
    Root,
    #[value(name = "h_beta")]
    HBeta,
    #[value(name = "f1")]
    F1,
}

impl FnId {
    fn name(self) -> &'static str {
        match self {
            Self::GammaPq => "gamma_pq",
            Self::GammaP => "gamma_p",
            Self::GammaQ => "gamma_q",
            Self::Gamma => "gamma",
            Self::PsiPq => "psi_pq",
            Self::PsiPqDeriv => "psi_pq_deriv",
            Self::PsiP => "psi_p",
            Self::PsiQ => "psi_q",
            Self::Psi => "psi",
            Self::GPq => "G_pq",
            Self::Root => "f32",
            Self::HBeta => "h_beta",
            Self::F1 => "f1",
        }
    }

    /// Gamma-type functions are computed in log domain and also report it.
    fn log_domain(self) -> bool {
        matches!(
            self,
            Self::GammaPq | Self::GammaP | Self::GammaQ | Self::Gamma | Self::GPq | Self::Root | Self::HBeta | Self::F1
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    #[value(name = "as_defined")]
    AsDefined,
    #[value(name = "as_proved")]
    AsProved,
}

impl From<VariantArg> for RootVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::AsDefined => RootVariant::AsDefined,
            VariantArg::AsProved => RootVariant::AsProved,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Campaign {
    #[value(name = "logconvex-gamma")]
    LogconvexGamma,
    #[value(name = "cm-psi-prime")]
    CmPsiPrime,
    #[value(name = "cm-G")]
    CmG,
    #[value(name = "lcm-f32")]
    LcmRoot,
    #[value(name = "lcm-h")]
    LcmH,
    #[value(name = "ineq-lemma21")]
    IneqBracket,
    #[value(name = "ineq-sec4")]
    IneqAffine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LimitCorner {
    #[value(name = "p-to-q")]
    PToQ,
    #[value(name = "q-to-p")]
    QToP,
    #[value(name = "p-gamma")]
    PGamma,
    #[value(name = "q-gamma")]
    QGamma,
    #[value(name = "psi-diagram")]
    PsiDiagram,
}

/// Where a record came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Value,
    Campaign,
    Limit,
}

impl Provenance {
    fn as_str(self) -> &'static str {
        match self {
            Self::Value => "value",
            Self::Campaign => "campaign",
            Self::Limit => "limit",
        }
    }
}

/// One cell of an output record.
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Num(f64),
    Int(u64),
    Text(String),
    List(Vec<f64>),
    Json(serde_json::Value),
}

impl Field {
    fn csv_cell(&self) -> String {
        match self {
            Self::Num(v) => fmt_real(*v),
            Self::Int(v) => v.to_string(),
            Self::Text(s) => s.clone(),
            Self::List(v) => v.iter().map(|x| fmt_real(*x)).collect::<Vec<_>>().join(";"),
            Self::Json(v) => v.to_string(),
        }
    }
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Self::Num(v) => s.serialize_f64(*v),
            Self::Int(v) => s.serialize_u64(*v),
            Self::Text(v) => s.serialize_str(v),
            Self::List(v) => v.serialize(s),
            Self::Json(v) => v.serialize(s),
        }
    }
}

/// Shortest decimal form that parses back to the same `f64`.
fn fmt_real(v: f64) -> String {
    format!("{v:?}")
}

struct Ordered<'a>(&'a [(String, Field)]);

impl Serialize for Ordered<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

/// A single output row: named inputs and outputs in a fixed order.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputRecord {
    pub function: String,
    pub provenance: Provenance,
    pub inputs: Vec<(String, Field)>,
    pub outputs: Vec<(String, Field)>,
}

impl OutputRecord {
    fn new(function: impl Into<String>, provenance: Provenance) -> Self {
        Self {
            function: function.into(),
            provenance,
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    fn input(mut self, name: &str, v: Field) -> Self {
        self.inputs.push((name.to_owned(), v));
        self
    }

    fn output(mut self, name: &str, v: Field) -> Self {
        self.outputs.push((name.to_owned(), v));
        self
    }

    fn header(&self) -> Vec<String> {
        let mut h = vec!["function".to_owned(), "provenance".to_owned()];
        h.extend(self.inputs.iter().map(|(k, _)| k.clone()));
        h.extend(self.outputs.iter().map(|(k, _)| k.clone()));
        h
    }

    fn cells(&self) -> Vec<String> {
        let mut c = vec![self.function.clone(), self.provenance.as_str().to_owned()];
        c.extend(self.inputs.iter().map(|(_, v)| v.csv_cell()));
        c.extend(self.outputs.iter().map(|(_, v)| v.csv_cell()));
        c
    }
}

impl Serialize for OutputRecord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(4))?;
        map.serialize_entry("function", &self.function)?;
        map.serialize_entry("provenance", &self.provenance)?;
        map.serialize_entry("inputs", &Ordered(&self.inputs))?;
        map.serialize_entry("outputs", &Ordered(&self.outputs))?;
        map.end()
    }
}

/// Renders records to bytes, repeating the CSV header whenever the column
/// set changes.
struct Emitter {
    format: Format,
    /// Table mode writes only `x,value` in CSV.
    xy_only: bool,
    header: Option<Vec<String>>,
    buf: Vec<u8>,
}

impl Emitter {
    fn new(format: Format, xy_only: bool) -> Self {
        Self {
            format,
            xy_only,
            header: None,
            buf: Vec::new(),
        }
    }

    fn csv_row(&mut self, cells: &[String]) {
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
        w.write_record(cells).expect("writing to memory");
        self.buf.extend(w.into_inner().expect("flushing to memory"));
    }

    fn push(&mut self, rec: &OutputRecord) {
        match self.format {
            Format::Json => {
                serde_json::to_writer(&mut self.buf, rec).expect("writing to memory");
                self.buf.push(b'\n');
            }
            Format::Csv => {
                let (header, cells) = if self.xy_only {
                    let pick = |name: &str, fields: &[(String, Field)]| {
                        fields
                            .iter()
                            .find(|(k, _)| k == name)
                            .map(|(_, v)| v.csv_cell())
                            .unwrap_or_default()
                    };
                    (
                        vec!["x".to_owned(), "value".to_owned()],
                        vec![pick("x", &rec.inputs), pick("value", &rec.outputs)],
                    )
                } else {
                    (rec.header(), rec.cells())
                };
                if self.header.as_ref() != Some(&header) {
                    self.csv_row(&header);
                    self.header = Some(header);
                }
                self.csv_row(&cells);
            }
        }
    }
}

/// Failure modes of a command, mapped to exit codes.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self::Domain(e)
    }
}

fn missing(arg: &str, context: &str) -> Failure {
    Failure::Usage(format!("missing required argument --{arg} for {context}"))
}

fn need<T: Clone>(v: &Option<T>, arg: &str, context: &str) -> Result<T, Failure> {
    v.clone().ok_or_else(|| missing(arg, context))
}

fn to_u32(p: u64) -> Result<u32, Failure> {
    u32::try_from(p).map_err(|_| Failure::Usage(format!("--p = {p} is too large")))
}

fn pq_params(args: &FnArgs, context: &str) -> Result<PQParams, Failure> {
    let p = to_u32(need(&args.p, "p", context)?)?;
    let q = need(&args.q, "q", context)?;
    Ok(PQParams::new(p, q)?)
}

fn ratio_spec(args: &FnArgs, context: &str) -> Result<RatioSpec, Failure> {
    let a = need(&args.a, "a", context)?;
    let b = need(&args.b, "b", context)?;
    if let Err(v) = validate_ratio_spec(&a, &b)? {
        return Err(Failure::Usage(format!("invalid shift vectors: {v}")));
    }
    Ok(RatioSpec::new(a, b)?)
}

fn two_point_spec(args: &FnArgs, context: &str) -> Result<TwoPointSpec, Failure> {
    Ok(TwoPointSpec::new(
        need(&args.s, "s", context)?,
        need(&args.t, "t", context)?,
        need(&args.beta, "beta", context)?,
    )?)
}

fn affine_spec(args: &FnArgs, context: &str) -> Result<AffineInequalitySpec, Failure> {
    Ok(AffineInequalitySpec::from_slice(&need(&args.abc, "abc", context)?)?)
}

/// A function with all its parameters resolved, ready for evaluation.
struct Evaluator {
    id: FnId,
    args: FnArgs,
    params: Option<PQParams>,
    ratio: Option<RatioSpec>,
    two_point: Option<TwoPointSpec>,
    affine: Option<AffineInequalitySpec>,
}

impl Evaluator {
    fn resolve(id: FnId, args: &FnArgs) -> Result<Self, Failure> {
        let ctx = id.name();
        let mut ev = Self {
            id,
            args: args.clone(),
            params: None,
            ratio: None,
            two_point: None,
            affine: None,
        };
        match id {
            FnId::GammaPq | FnId::PsiPq | FnId::Root => ev.params = Some(pq_params(args, ctx)?),
            FnId::PsiPqDeriv => {
                ev.params = Some(pq_params(args, ctx)?);
                need(&args.n, "n", ctx)?;
            }
            FnId::GammaP | FnId::PsiP => {
                need(&args.p, "p", ctx)?;
            }
            FnId::GammaQ | FnId::PsiQ => {
                need(&args.q, "q", ctx)?;
            }
            FnId::Gamma | FnId::Psi => {}
            FnId::GPq => {
                ev.params = Some(pq_params(args, ctx)?);
                ev.ratio = Some(ratio_spec(args, ctx)?);
            }
            FnId::HBeta => {
                ev.params = Some(pq_params(args, ctx)?);
                ev.two_point = Some(two_point_spec(args, ctx)?);
            }
            FnId::F1 => {
                ev.params = Some(pq_params(args, ctx)?);
                ev.affine = Some(affine_spec(args, ctx)?);
            }
        }
        if id == FnId::Root && args.variant.is_none() {
            return Err(missing("variant", ctx));
        }
        Ok(ev)
    }

    /// The value, or for log-domain functions its natural log.
    fn eval_raw(&self, x: f64) -> crate::error::Result<f64> {
        let a = &self.args;
        let params = || self.params.expect("resolved");
        match self.id {
            FnId::GammaPq => log_gamma_pq(x, params()),
            FnId::GammaP => log_gamma_p(x, a.p.expect("resolved")),
            FnId::GammaQ => {
                let q = a.q.expect("resolved");
                log_gamma_q(x, q, near_one_series_control(q))
            }
            FnId::Gamma => log_gamma_classical(x),
            FnId::PsiPq => psi_pq(x, params()),
            FnId::PsiPqDeriv => {
                psi_pq_deriv(x, params(), a.n.expect("resolved"), SeriesControl::default())
            }
            FnId::PsiP => psi_p(x, a.p.expect("resolved")),
            FnId::PsiQ => {
                let q = a.q.expect("resolved");
                psi_q(x, q, near_one_series_control(q))
            }
            FnId::Psi => psi_classical(x),
            FnId::GPq => log_g_pq(x, self.ratio.as_ref().expect("resolved"), params()),
            FnId::Root => log_f_root(x, params(), a.variant.expect("resolved").into()),
            FnId::HBeta => log_h_beta(x, self.two_point.as_ref().expect("resolved"), params()),
            FnId::F1 => log_f1(x, self.affine.as_ref().expect("resolved"), params()),
        }
    }

    fn record(&self, x: f64) -> Result<OutputRecord, Failure> {
        let raw = self.eval_raw(x)?;
        let a = &self.args;
        let mut rec = OutputRecord::new(self.id.name(), Provenance::Value);
        if let Some(p) = a.p {
            rec = rec.input("p", Field::Int(p));
        }
        if let Some(q) = a.q {
            rec = rec.input("q", Field::Num(q));
        }
        if self.id == FnId::PsiPqDeriv {
            rec = rec.input("n", Field::Int(u64::from(a.n.expect("resolved"))));
        }
        if let Some(r) = &self.ratio {
            rec = rec.input("a", Field::List(r.a().to_vec())).input("b", Field::List(r.b().to_vec()));
        }
        if let Some(tp) = &self.two_point {
            rec = rec
                .input("s", Field::Num(tp.s()))
                .input("t", Field::Num(tp.t()))
                .input("beta", Field::Num(tp.beta()));
        }
        if let Some(sp) = &self.affine {
            rec = rec.input("abc", Field::List(vec![sp.a, sp.b, sp.c, sp.d, sp.e, sp.f]));
        }
        if self.id == FnId::Root {
            let v: RootVariant = a.variant.expect("resolved").into();
            rec = rec.input("variant", Field::Text(v.name().to_owned()));
        }
        rec = rec.input("x", Field::Num(x));
        if self.id.log_domain() {
            rec = rec.output("value", Field::Num(raw.exp())).output("log_value", Field::Num(raw));
        } else {
            rec = rec.output("value", Field::Num(raw));
        }
        Ok(rec)
    }
}

fn report_fields(mut rec: OutputRecord, r: &MonotonicityReport) -> OutputRecord {
    let witness = serde_json::to_value(r.witness).unwrap_or(serde_json::Value::Null);
    rec = rec
        .output("verdict", Field::Text(if r.passed() { "pass" } else { "fail" }.to_owned()))
        .output("min_slack", Field::Num(r.min_slack))
        .output("tolerance", Field::Num(r.tolerance_used))
        .output("evaluations", Field::Int(r.evaluations as u64))
        .output("witness", Field::Json(witness));
    rec
}

fn grid_inputs(rec: OutputRecord, g: &GridSpec, tol_scale: f64) -> OutputRecord {
    rec.input("lo", Field::Num(g.lo))
        .input("hi", Field::Num(g.hi))
        .input("points", Field::Int(g.points as u64))
        .input("steps", Field::List(g.steps.clone()))
        .input("max_order", Field::Int(u64::from(g.max_order)))
        .input("seed", Field::Int(g.seed))
        .input("tol_scale", Field::Num(tol_scale))
}

struct VerifyOpts {
    lo: Option<f64>,
    hi: Option<f64>,
    count: Option<usize>,
    max_order: Option<u32>,
    seed: u64,
    tol_scale: f64,
}

impl VerifyOpts {
    fn grid(&self, lo: f64, hi: f64) -> Result<GridSpec, Failure> {
        let mut g = GridSpec::new(self.lo.unwrap_or(lo), self.hi.unwrap_or(hi))?.with_seed(self.seed);
        if let Some(n) = self.count {
            g = g.with_points(n)?;
        }
        if let Some(m) = self.max_order {
            g = g.with_max_order(m)?;
        }
        Ok(g)
    }
}

const GRID_P: [u64; 3] = [1, 3, 10];
const GRID_Q: [f64; 3] = [0.3, 0.5, 0.8];

fn param_grid(args: &FnArgs, ps: &[u64], qs: &[f64]) -> Result<Vec<PQParams>, Failure> {
    let ps: Vec<u64> = args.p.map_or_else(|| ps.to_vec(), |p| vec![p]);
    let qs: Vec<f64> = args.q.map_or_else(|| qs.to_vec(), |q| vec![q]);
    let mut out = Vec::new();
    for &p in &ps {
        for &q in &qs {
            out.push(PQParams::new(to_u32(p)?, q)?);
        }
    }
    Ok(out)
}

fn with_pq(rec: OutputRecord, params: PQParams) -> OutputRecord {
    rec.input("p", Field::Int(u64::from(params.p()))).input("q", Field::Num(params.q()))
}

fn affine_record(r: &AffineReport, points: usize) -> OutputRecord {
    let lemma = match r.lemma {
        SignLemma::L41 => "L41",
        SignLemma::L42 => "L42",
        SignLemma::L43 => "L43",
    };
    let worst = r
        .worst
        .map(|s: AffineSample| serde_json::to_value(s).unwrap_or(serde_json::Value::Null))
        .unwrap_or(serde_json::Value::Null);
    OutputRecord::new("ineq-sec4", Provenance::Campaign)
        .input("lemma", Field::Text(lemma.to_owned()))
        .input("samples", Field::Int(r.samples as u64))
        .input("points", Field::Int(points as u64))
        .input("seed", Field::Int(r.seed))
        .output("verdict", Field::Text(if r.failed == 0 { "pass" } else { "fail" }.to_owned()))
        .output("qualified", Field::Int(r.qualified as u64))
        .output("skipped", Field::Int(r.skipped as u64))
        .output("failed", Field::Int(r.failed as u64))
        .output("min_slack", Field::Num(r.min_slack))
        .output("tolerance", Field::Num(r.tolerance_used))
        .output("witness", Field::Json(worst))
}

/// Tolerance on the log-domain slack of the affine inequality campaign.
const AFFINE_TOLERANCE: f64 = 1e-10;
/// Tolerance on the bracket inequality.
const BRACKET_TOLERANCE: f64 = 1e-14;
/// Grid points on `[0, 1]` for the affine campaign.
const AFFINE_POINTS: usize = 33;

fn run_verify(
    campaign: Campaign,
    args: &FnArgs,
    opts: &VerifyOpts,
    em: &mut Emitter,
) -> Result<bool, Failure> {
    let name = campaign
        .to_possible_value()
        .map(|v| v.get_name().to_owned())
        .unwrap_or_default();
    let base = || OutputRecord::new(name.clone(), Provenance::Campaign);
    let mut all_pass = true;
    match campaign {
        Campaign::LogconvexGamma => {
            let grid = opts.grid(0.5, 8.0)?;
            for params in param_grid(args, &[4], &[0.6])? {
                let r = logconvex_gamma(params, &grid)?;
                all_pass &= r.passed();
                let rec = grid_inputs(with_pq(base(), params), &grid, opts.tol_scale);
                em.push(&report_fields(rec, &r));
            }
        }
        Campaign::CmPsiPrime => {
            let grid = opts.grid(0.5, 6.0)?;
            for params in param_grid(args, &GRID_P, &GRID_Q)? {
                let r = cm_psi_prime(params, &grid, opts.tol_scale)?;
                all_pass &= r.passed();
                let rec = grid_inputs(with_pq(base(), params), &grid, opts.tol_scale);
                em.push(&report_fields(rec, &r));
            }
        }
        Campaign::CmG => {
            let grid = opts.grid(0.5, 6.0)?;
            let specs = match (&args.a, &args.b) {
                (None, None) => {
                    let mut rng = Pcg64::seed_from_u64(opts.seed);
                    (0..20).map(|_| random_ratio_spec(&mut rng, 4)).collect()
                }
                _ => vec![ratio_spec(args, "cm-G")?],
            };
            for params in param_grid(args, &[3], &[0.5])? {
                for spec in &specs {
                    let r = cm_ratio(spec, params, &grid, opts.tol_scale)?;
                    all_pass &= r.passed();
                    let rec = with_pq(base(), params)
                        .input("a", Field::List(spec.a().to_vec()))
                        .input("b", Field::List(spec.b().to_vec()));
                    em.push(&report_fields(grid_inputs(rec, &grid, opts.tol_scale), &r));
                }
            }
        }
        Campaign::LcmRoot => {
            let grid = opts.grid(0.5, 6.0)?;
            let variants: Vec<RootVariant> = match args.variant {
                Some(v) => vec![v.into()],
                None => RootVariant::ALL.to_vec(),
            };
            for params in param_grid(args, &GRID_P, &GRID_Q)? {
                let mut any = false;
                for &variant in &variants {
                    let r = lcm_root(params, variant, &grid, opts.tol_scale)?;
                    any |= r.passed();
                    let rec = with_pq(base(), params).input("variant", Field::Text(variant.name().to_owned()));
                    em.push(&report_fields(grid_inputs(rec, &grid, opts.tol_scale), &r));
                }
                all_pass &= any;
            }
        }
        Campaign::LcmH => {
            let grid = opts.grid(0.5, 6.0)?;
            let specs = match (args.s, args.t, args.beta) {
                (None, None, None) => {
                    let mut rng = Pcg64::seed_from_u64(opts.seed);
                    (0..10).map(|_| random_two_point_spec(&mut rng)).collect()
                }
                _ => vec![two_point_spec(args, "lcm-h")?],
            };
            for params in param_grid(args, &[3], &[0.5])? {
                for spec in &specs {
                    let r = lcm_h(spec, params, &grid, opts.tol_scale)?;
                    all_pass &= r.passed();
                    let rec = with_pq(base(), params)
                        .input("s", Field::Num(spec.s()))
                        .input("t", Field::Num(spec.t()))
                        .input("beta", Field::Num(spec.beta()));
                    em.push(&report_fields(grid_inputs(rec, &grid, opts.tol_scale), &r));
                }
            }
        }
        Campaign::IneqBracket => {
            let samples = opts.count.unwrap_or(4096);
            let hi = opts.hi.unwrap_or(10.0);
            let r = young_bracket(samples, hi, opts.seed, BRACKET_TOLERANCE);
            all_pass &= r.verdict == crate::monocheck::Verdict::Pass;
            let [x, y, alpha, q] = r.witness;
            let rec = base()
                .input("samples", Field::Int(samples as u64))
                .input("hi", Field::Num(hi))
                .input("seed", Field::Int(opts.seed))
                .output("verdict", Field::Text(if all_pass { "pass" } else { "fail" }.to_owned()))
                .output("min_slack", Field::Num(r.min_slack))
                .output("tolerance", Field::Num(r.tolerance_used))
                .output(
                    "witness",
                    Field::Json(serde_json::json!({ "x": x, "y": y, "alpha": alpha, "q": q })),
                );
            em.push(&rec);
        }
        Campaign::IneqAffine => {
            let samples: Vec<AffineSample> = match &args.abc {
                Some(_) => {
                    let params = pq_params(args, "ineq-sec4 with --abc")?;
                    vec![AffineSample {
                        spec: affine_spec(args, "ineq-sec4")?,
                        p: params.p(),
                        q: params.q(),
                    }]
                }
                None => {
                    let mut rng = Pcg64::seed_from_u64(opts.seed);
                    (0..opts.count.unwrap_or(1000)).map(|_| random_affine_sample(&mut rng)).collect()
                }
            };
            for lemma in [SignLemma::L42, SignLemma::L43] {
                let r = affine_campaign(&samples, lemma, AFFINE_POINTS, AFFINE_TOLERANCE, opts.seed)?;
                all_pass &= r.failed == 0;
                em.push(&affine_record(&r, AFFINE_POINTS));
            }
        }
    }
    Ok(all_pass)
}

fn limit_records(t: &LimitTable, em: &mut Emitter) {
    for row in &t.rows {
        let mut rec = OutputRecord::new(t.corner.name(), Provenance::Limit).input("x", Field::Num(t.x));
        if let Some(f) = t.fixed {
            let name = if t.corner.ladder_in_p() { "q" } else { "p" };
            rec = rec.input(name, Field::Num(f));
        }
        rec = rec
            .input("parameter", Field::Num(row.parameter))
            .output("approximant", Field::Num(row.approximant))
            .output("target", Field::Num(row.target))
            .output("gap", Field::Num(row.gap))
            .output("monotone", Field::Text(t.monotone.to_string()));
        em.push(&rec);
    }
}

const DEFAULT_FIXED_Q: f64 = 0.9;
const DEFAULT_FIXED_P: u64 = 10;

fn default_ladder(c: Corner) -> Vec<f64> {
    match c {
        Corner::PToQ => vec![10.0, 100.0, 1000.0, 10_000.0],
        Corner::PGamma => vec![100.0, 1000.0, 10_000.0, 100_000.0],
        Corner::PsiPToQ | Corner::PsiPPsi => vec![10.0, 100.0, 1000.0, 10_000.0, 100_000.0, 1_000_000.0],
        Corner::QToP | Corner::PsiQToP => vec![0.9, 0.99, 0.999, 0.9999],
        Corner::QGamma | Corner::PsiQPsi => vec![0.9, 0.99, 0.999, 0.9999, 0.99999],
    }
}

fn run_limits(
    corner: LimitCorner,
    x: Option<f64>,
    p: Option<u64>,
    q: Option<f64>,
    ladder: Option<Vec<f64>>,
    q_ladder: Option<Vec<f64>>,
    em: &mut Emitter,
) -> Result<bool, Failure> {
    let edges: Vec<(Corner, Option<Vec<f64>>)> = match corner {
        LimitCorner::PToQ => vec![(Corner::PToQ, ladder)],
        LimitCorner::QToP => vec![(Corner::QToP, ladder)],
        LimitCorner::PGamma => vec![(Corner::PGamma, ladder)],
        LimitCorner::QGamma => vec![(Corner::QGamma, ladder)],
        LimitCorner::PsiDiagram => vec![
            (Corner::PsiPToQ, ladder.clone()),
            (Corner::PsiQToP, q_ladder.clone()),
            (Corner::PsiPPsi, ladder),
            (Corner::PsiQPsi, q_ladder),
        ],
    };
    let x = x.unwrap_or(if corner == LimitCorner::PsiDiagram { 1.0 } else { 0.5 });
    let mut all = true;
    for (c, lad) in edges {
        let ladder = lad.unwrap_or_else(|| default_ladder(c));
        if ladder.is_empty() {
            return Err(Failure::Usage("--ladder must not be empty".to_owned()));
        }
        let fixed = match c {
            Corner::PToQ | Corner::PsiPToQ => Some(q.unwrap_or(DEFAULT_FIXED_Q)),
            Corner::QToP | Corner::PsiQToP => Some(p.unwrap_or(DEFAULT_FIXED_P) as f64),
            _ => None,
        };
        let table = limit_table(c, x, &ladder, fixed)?;
        all &= table.monotone;
        limit_records(&table, em);
    }
    Ok(all)
}

fn grid_points(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>, Failure> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) || count < 2 {
        return Err(Failure::Usage(format!(
            "table range needs finite lo < hi and --count >= 2, got lo={lo}, hi={hi}, count={count}"
        )));
    }
    let last = (count - 1) as f64;
    Ok((0..count)
        .map(|i| if i + 1 == count { hi } else { lo + (hi - lo) * i as f64 / last })
        .collect())
}

fn execute(cmd: Command, em_out: &mut Option<(Emitter, OutputArgs)>) -> Result<bool, Failure> {
    match cmd {
        Command::Eval {
            function,
            x,
            args,
            output,
        } => {
            let mut em = Emitter::new(output.format, false);
            let ev = Evaluator::resolve(function, &args)?;
            let x = need(&x, "x", function.name())?;
            em.push(&ev.record(x)?);
            *em_out = Some((em, output));
            Ok(true)
        }
        Command::Table {
            function,
            lo,
            hi,
            count,
            args,
            output,
        } => {
            let mut em = Emitter::new(output.format, true);
            let ev = Evaluator::resolve(function, &args)?;
            for x in grid_points(lo, hi, count)? {
                em.push(&ev.record(x)?);
            }
            *em_out = Some((em, output));
            Ok(true)
        }
        Command::Verify {
            campaign,
            args,
            lo,
            hi,
            count,
            max_order,
            seed,
            tol_scale,
            output,
        } => {
            let mut em = Emitter::new(output.format, false);
            let opts = VerifyOpts {
                lo,
                hi,
                count,
                max_order,
                seed,
                tol_scale,
            };
            let pass = run_verify(campaign, &args, &opts, &mut em)?;
            *em_out = Some((em, output));
            Ok(pass)
        }
        Command::Limits {
            corner,
            x,
            p,
            q,
            ladder,
            q_ladder,
            output,
        } => {
            let mut em = Emitter::new(output.format, false);
            let pass = run_limits(corner, x, p, q, ladder, q_ladder, &mut em)?;
            *em_out = Some((em, output));
            Ok(pass)
        }
    }
}

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let mut out = None;
    let result = execute(cli.command, &mut out);
    let pass = match result {
        Ok(pass) => pass,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            return EXIT_USAGE;
        }
        Err(Failure::Domain(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    if let Some((em, output)) = out {
        if stdout.write_all(&em.buf).and_then(|_| stdout.flush()).is_err() {
            let _ = writeln!(stderr, "error: cannot write to stdout");
            return EXIT_USAGE;
        }
        if let Some(path) = output.out {
            if let Err(e) = std::fs::write(&path, &em.buf) {
                let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                return EXIT_USAGE;
            }
        }
    }
    if pass {
        EXIT_PASS
    } else {
        let _ = writeln!(stderr, "check failed");
        EXIT_CHECK_FAILED
    }
}
