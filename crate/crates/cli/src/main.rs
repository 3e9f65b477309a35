use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use ellfam::averages::{self, AverageRecord, EmpiricalAverage};
use ellfam::density::{self, DesignedFamily};
use ellfam::ranks::{self, Certificate, PointCheck};
use ellfam::root_numbers::family_root_number;
use ellfam::suite::{self, SuiteName};
use ellfam::surfaces::{make_family, FamilyId, Surface};
use ellfam::Error;

mod render;

const SCHEMA: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "ellfam", version, about = "Root numbers, averages and ranks of elliptic families")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Worker threads for sweeps; defaults to the available cores.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Add a wall-clock `timing` field to the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Global root number with its local signs, at one t or over a range.
    Rootnumber {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["t_min", "t_max"])]
        t: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "t_max")]
        t_min: Option<i64>,
        #[arg(long, allow_hyphen_values = true, requires = "t_min")]
        t_max: Option<i64>,
    },
    /// Average root number by closed formula, sweep, or local integral.
    Average {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum, default_value_t = AverageMethod::Formula)]
        method: AverageMethod,
        /// Sweep bound for `--method empirical`.
        #[arg(long = "T", default_value_t = 10_000)]
        t_bound: u64,
        /// Prime cutoff for infinite Euler products.
        #[arg(long, default_value_t = 100_000)]
        cutoff: u64,
        /// Restrict `--method local-integral` to one prime.
        #[arg(long = "prime")]
        prime: Option<u64>,
    },
    /// Generic rank by closed form or by the Nagao estimator.
    Rank {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum, default_value_t = RankMethod::Formula)]
        method: RankMethod,
        #[arg(long = "X", default_value_t = 10_000)]
        x_bound: u64,
    },
    /// Bad places, M(t), B(t) and the potential parity bias.
    Classify {
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Build a family with a prescribed average root number.
    Design {
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        #[arg(long, value_enum, default_value_t = ConstructionArg::Auto)]
        construction: ConstructionArg,
        /// Also sweep the designed family up to this bound.
        #[arg(long)]
        validate: Option<u64>,
    },
    /// Symbolic and non-torsion checks of generic points.
    Verify {
        /// Check the three points of the rank-3 surface with these `a,b,l`.
        #[arg(long, value_delimiter = ',', num_args = 3)]
        rank3: Option<Vec<i64>>,
    },
    /// Run an acceptance battery.
    Suite {
        #[arg(value_parser = parse_suite)]
        name: SuiteName,
        /// Single target for `design-roundtrip`.
        #[arg(long, allow_hyphen_values = true)]
        target: Option<String>,
        #[arg(long = "T", default_value_t = 100_000)]
        t_bound: u64,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum AverageMethod {
    Formula,
    Empirical,
    LocalIntegral,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum RankMethod {
    Formula,
    Nagao,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ConstructionArg {
    /// Periodic when admissible, single-prime otherwise.
    Auto,
    SinglePrime,
    Periodic,
    Isotrivial,
}

#[derive(Args, Debug, Clone)]
struct FamilyArgs {
    /// Catalogue family: Fs, Gw, Hw, Iw, Jmw, Lwsv, Wa, Va, W1twist, Wdagger, Wstar, Wstarstar.
    #[arg(long, conflicts_with = "surface")]
    family: Option<String>,
    /// Surface literal `a2=<poly>; a4=<poly>; a6=<poly>; w=<int>`.
    #[arg(long)]
    surface: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    d: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    m: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    p: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    s: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    v: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    w: Option<i64>,
}

enum Selected {
    Family(FamilyId),
    Literal(Surface),
}

impl Selected {
    fn label(&self) -> String {
        match self {
            Selected::Family(id) => id.to_string(),
            Selected::Literal(s) => s.label.clone(),
        }
    }

    fn surface(&self) -> Result<Surface, Error> {
        match self {
            Selected::Family(id) => make_family(*id),
            Selected::Literal(s) => Ok(s.clone()),
        }
    }

    fn family(&self, verb: &str) -> Result<FamilyId, Error> {
        match self {
            Selected::Family(id) => Ok(*id),
            Selected::Literal(_) => Err(Error::Unsupported(format!("{verb} needs a catalogue --family"))),
        }
    }
}

impl FamilyArgs {
    fn select(&self) -> Result<Selected, Error> {
        if let Some(src) = &self.surface {
            return Surface::parse_literal(src).map(Selected::Literal);
        }
        let name = self.family.as_deref().ok_or_else(|| Error::InvalidParameter("give --family or --surface".into()))?;
        let need = |v: Option<i64>, flag: &str| {
            v.ok_or_else(|| Error::InvalidParameter(format!("family {name} needs --{flag}")))
        };
        let id = match name.to_ascii_lowercase().as_str() {
            "f" | "fs" => FamilyId::Fs { s: need(self.s, "s")? },
            "g" | "gw" => FamilyId::Gw { w: need(self.w, "w")? },
            "h" | "hw" => FamilyId::Hw { w: need(self.w, "w")? },
            "i" | "iw" => FamilyId::Iw { w: need(self.w, "w")? },
            "j" | "jmw" => FamilyId::Jmw { m: need(self.m, "m")?, w: need(self.w, "w")? },
            "l" | "lwsv" => FamilyId::Lwsv { w: need(self.w, "w")?, s: need(self.s, "s")?, v: need(self.v, "v")? },
            "w" | "wa" => FamilyId::Wa { a: need(self.a, "a")? },
            "v" | "va" => FamilyId::Va { a: need(self.a, "a")? },
            "w1twist" => FamilyId::W1Twist { d: need(self.d, "d")? },
            "wdagger" => FamilyId::WDagger { a: need(self.a, "a")? },
            "wstar" => FamilyId::WStar { p: need(self.p, "p")?, a: need(self.a, "a")? },
            "wstarstar" => FamilyId::WStarStar { p: need(self.p, "p")?, b: need(self.b, "b")? },
            other => return Err(Error::InvalidParameter(format!("unknown family {other}"))),
        };
        make_family(id)?;
        Ok(Selected::Family(id))
    }
}

fn parse_suite(s: &str) -> Result<SuiteName, String> {
    SuiteName::from_str(s).map_err(|e| e.to_string())
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::ZeroValuation => "zero-valuation",
        Error::NotPrime(_) => "not-prime",
        Error::IncompleteFactorization { .. } => "incomplete-factorization",
        Error::SearchExhausted(_) => "search-exhausted",
        Error::UnsupportedDegree(_) => "unsupported-degree",
        Error::InvalidParameter(_) => "invalid-parameter",
        Error::Singular(_) => "singular",
        Error::OffCurve => "off-curve",
        Error::Parse(_) => "parse",
        Error::UnstableTail { .. } => "unstable-tail",
        Error::Inadmissible { .. } => "inadmissible",
        Error::Unsupported(_) => "unsupported",
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report payloads serialize")
}

fn empirical_record(label: String, e: &EmpiricalAverage) -> Value {
    let mut v = to_value(&AverageRecord::from_empirical(label, Value::Null, e));
    if let Value::Object(m) = &mut v {
        m.remove("params");
        m.insert("sum".into(), json!(e.sum));
        m.insert("count".into(), json!(e.count));
        m.insert("total".into(), json!(e.total));
    }
    v
}

fn rootnumber(sel: &Selected, t: &Option<String>, range: Option<(i64, i64)>) -> Result<Value, Error> {
    let id = sel.family("rootnumber")?;
    if let Some((lo, hi)) = range {
        if lo > hi {
            return Err(Error::InvalidParameter("--t-min exceeds --t-max".into()));
        }
        use rayon::prelude::*;
        let rows: Vec<Value> = (lo..=hi)
            .into_par_iter()
            .map(|t| family_root_number(id, &BigInt::from(t)).map(|r| json!({"t": t.to_string(), "root_number": r.global})))
            .collect::<Result<_, _>>()?;
        let sum: i64 = rows.iter().map(|r| r["root_number"].as_i64().unwrap_or(0)).sum();
        return Ok(json!({"family": id.to_string(), "t_min": lo, "t_max": hi, "sum": sum, "rows": rows}));
    }
    let t = t.as_deref().ok_or_else(|| Error::InvalidParameter("give --t or --t-min/--t-max".into()))?;
    let tb = BigInt::from_str(t.trim()).map_err(|_| Error::Parse(format!("bad integer '{t}'")))?;
    let r = family_root_number(id, &tb)?;
    let locals: Vec<Value> =
        r.locals.iter().map(|l| json!({"p": l.p.to_string(), "w": l.value, "rule": l.rule})).collect();
    Ok(json!({"family": id.to_string(), "t": tb.to_string(), "root_number": r.global, "locals": locals}))
}

fn average(sel: &Selected, method: AverageMethod, t_bound: u64, cutoff: u64, prime: Option<u64>) -> Result<Value, Error> {
    let id = sel.family("average")?;
    let params = to_value(&id);
    match (method, id) {
        (AverageMethod::Formula, FamilyId::Wa { a }) => {
            Ok(to_value(&AverageRecord::from_euler(id.to_string(), params, &averages::av_wa(&BigInt::from(a))?)))
        }
        (AverageMethod::Formula, FamilyId::Va { a }) => {
            let v = averages::av_va::<f64>(&BigInt::from(a), cutoff)?;
            Ok(to_value(&AverageRecord::from_euler(id.to_string(), params, &v)))
        }
        (AverageMethod::Formula, _) => {
            Err(Error::Unsupported(format!("no closed formula for {id}; use --method empirical")))
        }
        (AverageMethod::Empirical, _) => {
            let e = averages::empirical_av_z(|t| family_root_number(id, &BigInt::from(t)).map(|r| r.global), t_bound)?;
            Ok(empirical_record(id.to_string(), &e))
        }
        (AverageMethod::LocalIntegral, FamilyId::Wa { a } | FamilyId::Va { a }) => {
            let ab = BigInt::from(a);
            let primes: Vec<u64> = match prime {
                Some(p) => vec![p],
                None => ellfam::algebra::factorize(&(BigInt::from(6) * &ab))?
                    .factors
                    .iter()
                    .map(|(p, _)| u64::try_from(p).unwrap_or(0))
                    .collect(),
            };
            let is_wa = matches!(id, FamilyId::Wa { .. });
            let mut rows = Vec::new();
            for p in primes {
                let (integral, factor) = if is_wa {
                    let f = if (BigInt::from(2) * &ab) % p == BigInt::from(0) {
                        averages::euler_factor_wa(&ab, p)?
                    } else {
                        num_rational::BigRational::from_integer(1.into())
                    };
                    (averages::local_integral_wa(&ab, p)?, f)
                } else {
                    (averages::local_integral_va(&ab, p)?, averages::euler_factor_va(&ab, p)?)
                };
                rows.push(json!({
                    "p": p,
                    "integral": integral.to_string(),
                    "euler_factor": factor.to_string(),
                    "agree": integral == factor,
                }));
            }
            Ok(json!({"family": id.to_string(), "method": "local-integral", "rows": rows}))
        }
        (AverageMethod::LocalIntegral, _) => {
            Err(Error::Unsupported(format!("local integrals are implemented for W_a and V_a, not {id}")))
        }
    }
}

fn rank(sel: &Selected, method: RankMethod, x: u64) -> Result<Value, Error> {
    match method {
        RankMethod::Formula => {
            let id = sel.family("rank --method formula")?;
            let r = ranks::closed_rank(id)?;
            let mut out = json!({"family": id.to_string(), "method": "formula", "rank": r.rank});
            match &r.certificate {
                Certificate::FactorCounts { r: nr, c, delta1, delta2 } => {
                    out["R_factors"] = json!(nr);
                    out["C_factors"] = json!(c);
                    out["delta1"] = json!(delta1);
                    out["delta2"] = json!(delta2);
                }
                Certificate::Rule { rule } => out["rule"] = json!(rule),
                Certificate::Points { points } => out["points"] = json!(points),
            }
            Ok(out)
        }
        RankMethod::Nagao => {
            let s = sel.surface()?;
            let est = ranks::nagao_rank::<f64>(&s, x, &ranks::default_checkpoints(x))?;
            let mut out = to_value(&est);
            out["family"] = json!(sel.label());
            out["method"] = json!("nagao");
            out["rows"] = est.checkpoints.iter().map(|(c, v)| json!({"X": c, "estimate": v})).collect();
            if let Selected::Family(id) = sel {
                out["closed_rank"] = json!(ranks::closed_rank(*id)?.rank);
            }
            if let Value::Object(m) = &mut out {
                m.remove("checkpoints");
            }
            Ok(out)
        }
    }
}

fn classify(sel: &Selected) -> Result<Value, Error> {
    let s = sel.surface()?;
    let report = s.classify_places()?;
    let inv = s.invariants();
    Ok(json!({
        "family": sel.label(),
        "c4": inv.c4.to_string(),
        "c6": inv.c6.to_string(),
        "disc": inv.disc.to_string(),
        "M": report.m_poly.to_string(),
        "B": report.b_poly.to_string(),
        "potentially_parity_biased": report.m_poly.is_constant(),
        "rows": to_value(&report.places),
    }))
}

fn design(target: &str, construction: ConstructionArg, validate: Option<u64>) -> Result<Value, Error> {
    let (h, k) = suite::parse_target(target)?;
    let d: DesignedFamily = match construction {
        ConstructionArg::SinglePrime => density::design_single_prime(h, k)?,
        ConstructionArg::Periodic => density::design_periodic(h, k)?,
        ConstructionArg::Isotrivial => density::design_isotrivial(h, k)?,
        ConstructionArg::Auto => match density::design_periodic(h, k) {
            Ok(d) => d,
            Err(Error::Inadmissible { .. }) => density::design_single_prime(h, k)?,
            Err(e) => return Err(e),
        },
    };
    let mut out = to_value(&d);
    if let Some(t) = validate {
        let rt = match d.construction {
            density::Construction::Isotrivial => density::roundtrip_q(&d, t)?,
            _ => density::roundtrip_z(&d, t)?,
        };
        out["roundtrip"] = to_value(&rt);
    }
    Ok(out)
}

fn verify(rank3: &Option<Vec<i64>>) -> Result<Value, Error> {
    let rows: Vec<(String, Surface, ranks::FPoint)> = match rank3 {
        Some(abl) => {
            let f = ranks::rank3_family(abl[0], abl[1], abl[2])?;
            f.points.iter().enumerate().map(|(i, p)| (format!("point {}", i + 1), f.surface.clone(), p.clone())).collect()
        }
        None => ranks::catalogue_points()?.into_iter().map(|g| (g.label, g.surface, g.point)).collect(),
    };
    let rows: Vec<Value> = rows
        .into_iter()
        .map(|(label, s, p)| {
            let r = ranks::verify_generic_point(&s, &p);
            json!({"label": label, "result": to_value(&r), "verified": r == PointCheck::VerifiedNonTorsion})
        })
        .collect();
    Ok(json!({"rows": rows}))
}

fn run_suite(name: SuiteName, target: &Option<String>, t_bound: u64) -> Result<Value, Error> {
    let report = match (name, target) {
        (SuiteName::DesignRoundtrip, Some(t)) => {
            let target = suite::parse_target(t)?;
            let check = match suite::design_roundtrips(Some(target), t_bound) {
                Ok((pass, measured, notes)) => suite::Check { id: 12, name: "design-roundtrip", pass, measured, notes },
                Err(e) => suite::Check { id: 12, name: "design-roundtrip", pass: false, measured: format!("error: {e}"), notes: vec![] },
            };
            suite::SuiteReport { suite: name, checks: vec![check] }
        }
        (_, Some(_)) => return Err(Error::InvalidParameter("--target applies to design-roundtrip only".into())),
        _ => suite::run(name),
    };
    let pass = report.all_pass();
    Ok(json!({"suite": to_value(&report.suite), "pass": pass, "rows": to_value(&report.checks)}))
}

fn dispatch(verb: &Verb) -> Result<Value, Error> {
    match verb {
        Verb::Rootnumber { family, t, t_min, t_max } => {
            let range = t_min.zip(*t_max);
            rootnumber(&family.select()?, t, range)
        }
        Verb::Average { family, method, t_bound, cutoff, prime } => {
            average(&family.select()?, *method, *t_bound, *cutoff, *prime)
        }
        Verb::Rank { family, method, x_bound } => rank(&family.select()?, *method, *x_bound),
        Verb::Classify { family } => classify(&family.select()?),
        Verb::Design { target, construction, validate } => design(target, *construction, *validate),
        Verb::Verify { rank3 } => verify(rank3),
        Verb::Suite { name, target, t_bound } => run_suite(*name, target, *t_bound),
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("warning: --jobs ignored: {e}");
        }
    }
    let start = Instant::now();
    let payload = dispatch(&cli.verb);
    let mut report = Map::new();
    report.insert("schema".into(), json!(SCHEMA));
    report.insert("tool".into(), json!(format!("ellfam {}", env!("CARGO_PKG_VERSION"))));
    report.insert("command".into(), json!(argv[1..]));
    match payload {
        Ok(Value::Object(m)) => report.extend(m),
        Ok(other) => {
            report.insert("result".into(), other);
        }
        Err(e) => {
            report.insert("error".into(), json!({"kind": error_kind(&e), "message": e.to_string()}));
            eprintln!("{}", serde_json::to_string_pretty(&Value::Object(report)).expect("json"));
            return ExitCode::from(1);
        }
    }
    if cli.timing {
        report.insert("timing".into(), json!({"elapsed_ms": start.elapsed().as_millis() as u64}));
    }
    match render::render(&Value::Object(report), cli.format) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
