use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use cmcheck::classpoly::{class_number, direct_cm_test, hilbert_class_poly};
use cmcheck::cmtest::{find_discriminant, one_sided_non_cm, randomized_cm_test_with, survey_ratio, SurveyRow};
use cmcheck::gl2galois::certificate::witness_soundness_sweep;
use cmcheck::gl2galois::{
    gather_observations, nonsolvable_certificate, trace_zero_count_by_classes, trace_zero_count_enumerated,
    trace_zero_ratio,
};
use cmcheck::{CurveNF, CurveSpec, Error, SamplerConfig};

use crate::{tables, Cli, Command};

pub enum CliError {
    Core(Error),
    Io(String),
    Usage(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => match e {
                Error::Domain(_) => "domain",
                Error::Input(_) => "input",
                Error::IndexRisk { .. } => "index_risk",
                Error::BadReduction { .. } => "bad_reduction",
                Error::SingularCurve => "singular_curve",
                Error::Precision { .. } => "precision",
                Error::Capability(_) => "capability",
                Error::Config(_) => "config",
                Error::NeedMoreData(_) => "need_more_data",
            },
            CliError::Io(_) => "io",
            CliError::Usage(_) => "usage",
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(m) | CliError::Usage(m) => write!(f, "{m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Serialize)]
struct RunReport<C: Serialize, R: Serialize> {
    command: &'static str,
    version: &'static str,
    config: C,
    result: R,
}

fn report<C: Serialize, R: Serialize>(command: &'static str, config: C, result: R) -> String {
    let r = RunReport { command, version: env!("CARGO_PKG_VERSION"), config, result };
    serde_json::to_string_pretty(&r).expect("report serializes")
}

fn load_curve(path: &str) -> CliResult<CurveNF> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
    Ok(CurveSpec::from_json(&text)?.build()?)
}

fn survey_csv(rows: &[(String, usize, SurveyRow)]) -> String {
    let mut out = String::from("curve,degree,numerator,denominator,ratio");
    for (name, deg, r) in rows {
        out.push_str(&format!("\n{name},{deg},{},{},{:.4}", r.numerator, r.denominator, r.ratio));
    }
    out
}

pub fn run(cli: &Cli) -> CliResult<String> {
    let seed = cli.seed;
    match &cli.command {
        Command::Test { curve, trials, xmax, paper_interval, mode, threshold } => {
            let e = load_curve(curve)?;
            let cfg = if *paper_interval {
                SamplerConfig::paper_interval(&e, (*mode).into(), seed)?
            } else {
                SamplerConfig::new(*xmax, (*mode).into(), seed)
            };
            if cfg.capped {
                eprintln!("warning: interval bound capped at {}", cfg.x_max);
            }
            let verdict = randomized_cm_test_with(&e, *trials, &cfg, *threshold)?;
            Ok(report(
                "test",
                json!({ "curve": curve, "trials": trials, "sampler": cfg, "threshold": threshold }),
                verdict,
            ))
        }
        Command::Disc { curve, max_records, xmax, mode } => {
            let e = load_curve(curve)?;
            let cfg = SamplerConfig::new(*xmax, (*mode).into(), seed);
            let s = find_discriminant(&e, *max_records, 2, &cfg)?;
            let result = json!({
                "gcd": s.estimate.gcd.to_string(),
                "discriminant": s.estimate.d_candidate.as_ref().map(|d| d.to_string()),
                "consistent": s.estimate.consistent,
                "ordinary_used": s.ordinary_used,
                "flagged": s.estimate.flagged,
                "records": s.records,
            });
            Ok(report("disc", json!({ "curve": curve, "max_records": max_records, "sampler": cfg }), result))
        }
        Command::OneSided { curve, max_records, xmax } => {
            let e = load_curve(curve)?;
            let cfg = SamplerConfig::new(*xmax, cmcheck::SamplerMode::ExactUniform, seed);
            let r = one_sided_non_cm(&e, *max_records, &cfg)?;
            Ok(report("one-sided", json!({ "curve": curve, "max_records": max_records, "sampler": cfg }), r))
        }
        Command::Survey { curves, bound } => {
            let mut rows = Vec::new();
            for path in curves {
                let e = load_curve(path)?;
                rows.push((path.clone(), e.field().degree(), survey_ratio(&e, *bound)));
            }
            if cli.csv {
                return Ok(survey_csv(&rows));
            }
            let result: Vec<Value> =
                rows.iter().map(|(name, deg, r)| json!({ "curve": name, "degree": deg, "row": r })).collect();
            Ok(report("survey", json!({ "bound": bound }), result))
        }
        Command::Direct { curve, cap } => {
            let e = load_curve(curve)?;
            let v = direct_cm_test(&e, *cap)?;
            Ok(report("direct", json!({ "curve": curve, "cap": cap }), v))
        }
        Command::Hilbert { d, precision } => {
            let hp = hilbert_class_poly(*d, *precision)?;
            let coeffs: Vec<String> = hp.coeffs.iter().map(|c| c.to_string()).collect();
            Ok(format!("[{}]", coeffs.join(", ")))
        }
        Command::Classnum { d } => Ok(class_number(*d)?.to_string()),
        Command::Galois { curve, ell, primes } => {
            let e = load_curve(curve)?;
            let obs = gather_observations(&e, *ell, *primes, seed);
            let cert = nonsolvable_certificate(&obs, *ell)?;
            let result = json!({
                "observations": obs,
                "witnesses_found": cert.witnesses,
                "verdict": cert.verdict,
            });
            Ok(report("galois", json!({ "curve": curve, "ell": ell, "primes": primes }), result))
        }
        Command::Gl2 { ell, ratio, sweep } => {
            if !ratio && !sweep {
                return Err(CliError::Usage("gl2 needs --ratio or --sweep".into()));
            }
            let mut result = serde_json::Map::new();
            if *ratio {
                let r = trace_zero_ratio(*ell as u64)?;
                let agree = trace_zero_count_enumerated(*ell as u64) == trace_zero_count_by_classes(*ell as u64);
                result.insert("ratio".into(), json!(format!("{}/{}", r.numer(), r.denom())));
                result.insert("methods_agree".into(), json!(agree));
            }
            if *sweep {
                result.insert("sweep".into(), serde_json::to_value(witness_soundness_sweep(*ell)?).unwrap());
            }
            Ok(report("gl2", json!({ "ell": ell }), result))
        }
        Command::PaperTables { bound, table } => tables::run(*bound, *table, cli.csv),
    }
}
