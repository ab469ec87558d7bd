//! The randomized CM test: sampled reductions, the supersingular-fraction
//! decision, endomorphism discriminant recovery from Frobenius traces, and
//! the one-sided `gcd(w_i) = 1` certificate.

pub mod sampler;
pub mod survey;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::arith::{is_square, squarefree_part};
use crate::ellcurve::{frobenius_disc, CurveNF, FrobeniusData};
use crate::error::{Error, Result};
use crate::numberfield::PrimeIdeal;
pub use sampler::{prime_ideals_up_to, sample_prime, Sampler, SamplerConfig, SamplerMode, SamplerStats};
pub use survey::{survey_ratio, SurveyRow};

/// Supersingular fraction above which a curve is reported as probably CM.
pub const DEFAULT_THRESHOLD: f64 = 0.25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialStatus {
    Ss,
    Ordinary,
}

/// One completed reduction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub p: u64,
    pub residue_degree: usize,
    /// The residue field modulus, low-to-high over F_p.
    pub factor: Vec<u64>,
    pub frob: FrobeniusData,
    /// `a² - 4p^d`, for ordinary trials.
    #[serde(serialize_with = "crate::serde_util::big_opt")]
    pub w: Option<BigInt>,
    pub status: TrialStatus,
}

impl TrialRecord {
    pub fn new(prime: &PrimeIdeal, frob: FrobeniusData) -> Self {
        let status = if frob.supersingular { TrialStatus::Ss } else { TrialStatus::Ordinary };
        let w = (status == TrialStatus::Ordinary).then(|| frobenius_disc(&frob));
        TrialRecord { p: prime.p, residue_degree: prime.d, factor: prime.g.coeffs().to_vec(), frob, w, status }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VerdictKind {
    ProbablyCM,
    ProbablyNotCM,
    CertifiedNotCM,
    CertifiedCM,
}

#[derive(Clone, Debug, Serialize)]
pub struct CmVerdict {
    pub kind: VerdictKind,
    pub reason: String,
    pub trials: usize,
    pub supersingular: usize,
    pub fraction: f64,
    pub threshold: f64,
    /// Discriminant recovered from the ordinary trials, when the verdict is CM.
    #[serde(serialize_with = "crate::serde_util::big_opt")]
    pub disc: Option<BigInt>,
    pub sampler: SamplerStats,
    pub records: Vec<TrialRecord>,
}

/// Deterministic per-trial generator.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Draws primes until the curve reduces well, then computes Frobenius data.
fn one_trial(curve: &CurveNF, sampler: &Sampler, index: u64, stats: &mut SamplerStats) -> Result<TrialRecord> {
    let mut rng = trial_rng(sampler.config().seed, index);
    let budget = sampler.config().retry_budget as u64;
    loop {
        let prime = sampler.sample(&mut rng, stats)?;
        match curve.reduce_at_prime(&prime) {
            Ok(red) => return Ok(TrialRecord::new(&prime, red.frobenius_data(&mut rng))),
            Err(Error::BadReduction { .. } | Error::Domain(_)) => {
                stats.resampled_bad_reduction += 1;
                if stats.resampled_bad_reduction > budget * (index + 1) {
                    return Err(Error::config("bad reduction at every sampled prime"));
                }
            }
            Err(e) => return Err(e),
        }
    }
}

/// `(records, stats)` for trials `start..start+count`.
pub fn run_trials(
    curve: &CurveNF,
    cfg: &SamplerConfig,
    start: u64,
    count: usize,
) -> Result<(Vec<TrialRecord>, SamplerStats)> {
    let sampler = Sampler::new(curve.field().clone(), cfg.clone())?;
    let mut stats = SamplerStats::default();
    let records =
        (0..count as u64).map(|i| one_trial(curve, &sampler, start + i, &mut stats)).collect::<Result<_>>()?;
    Ok((records, stats))
}

/// True when `j_E` is an algebraic integer.
pub fn j_is_integral(curve: &CurveNF) -> bool {
    curve.j_invariant().is_algebraic_integer()
}

/// The randomized test with the default threshold.
pub fn randomized_cm_test(curve: &CurveNF, trials: usize, cfg: &SamplerConfig) -> Result<CmVerdict> {
    randomized_cm_test_with(curve, trials, cfg, DEFAULT_THRESHOLD)
}

pub fn randomized_cm_test_with(
    curve: &CurveNF,
    trials: usize,
    cfg: &SamplerConfig,
    threshold: f64,
) -> Result<CmVerdict> {
    if trials == 0 {
        return Err(Error::config("at least one trial is required"));
    }
    if !j_is_integral(curve) {
        return Ok(CmVerdict {
            kind: VerdictKind::CertifiedNotCM,
            reason: "j is not an algebraic integer".into(),
            trials: 0,
            supersingular: 0,
            fraction: 0.0,
            threshold,
            disc: None,
            sampler: SamplerStats::default(),
            records: Vec::new(),
        });
    }
    let (records, stats) = run_trials(curve, cfg, 0, trials)?;
    let ss = records.iter().filter(|r| r.status == TrialStatus::Ss).count();
    let fraction = ss as f64 / trials as f64;
    let (kind, reason) = if fraction > threshold {
        (VerdictKind::ProbablyCM, format!("supersingular fraction {fraction:.3} > {threshold}"))
    } else {
        (VerdictKind::ProbablyNotCM, format!("supersingular fraction {fraction:.3} <= {threshold}"))
    };
    let disc = match kind {
        VerdictKind::ProbablyCM => discriminant_from_traces(&records).ok().and_then(|d| d.d_candidate),
        _ => None,
    };
    Ok(CmVerdict { kind, reason, trials, supersingular: ss, fraction, threshold, disc, sampler: stats, records })
}

/// What the ordinary traces say about `End(E)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscEstimate {
    /// `gcd(w_i)`, negative.
    #[serde(serialize_with = "crate::serde_util::big")]
    pub gcd: BigInt,
    #[serde(serialize_with = "crate::serde_util::big_opt")]
    pub d_candidate: Option<BigInt>,
    /// Every `w_i / D` is a perfect square.
    pub consistent: bool,
    /// Indices of records with `4p^d < |D|`, where the lifting hypotheses fail.
    pub flagged: Vec<usize>,
    pub ordinary_records: usize,
}

/// The discriminant `D ∈ {s, 4s}` with `g = s f²`, `g / D` a square; else
/// `g` itself when it is a discriminant.
pub fn candidate_discriminant(g: &BigInt) -> Option<BigInt> {
    if !g.is_negative() {
        return None;
    }
    let (s, _) = squarefree_part(g).ok()?;
    let d = if s.mod_floor(&BigInt::from(4)).is_one() { s } else { s * 4 };
    let (q, r) = g.div_rem(&d);
    if r.is_zero() && is_square(&q) {
        return Some(d);
    }
    let r = g.mod_floor(&BigInt::from(4));
    (r.is_zero() || r.is_one()).then(|| g.clone())
}

pub fn discriminant_from_traces(records: &[TrialRecord]) -> Result<DiscEstimate> {
    let ordinary: Vec<(usize, &BigInt)> =
        records.iter().enumerate().filter_map(|(i, r)| r.w.as_ref().map(|w| (i, w))).collect();
    if ordinary.is_empty() {
        return Err(Error::NeedMoreData("no ordinary records".into()));
    }
    let g = -ordinary.iter().fold(BigInt::zero(), |acc, (_, w)| acc.gcd(w));
    let d = candidate_discriminant(&g);
    let consistent = d.as_ref().is_some_and(|d| {
        ordinary.iter().all(|(_, w)| {
            let (q, r) = w.div_rem(d);
            r.is_zero() && is_square(&q)
        })
    });
    let flagged = match &d {
        Some(d) => {
            ordinary.iter().filter(|(i, _)| BigInt::from(records[*i].frob.q) * 4 < d.abs()).map(|(i, _)| *i).collect()
        }
        None => Vec::new(),
    };
    Ok(DiscEstimate { gcd: g, d_candidate: d, consistent, flagged, ordinary_records: ordinary.len() })
}

/// Result of accumulating ordinary traces until the candidate settles.
#[derive(Clone, Debug, Serialize)]
pub struct DiscSearch {
    pub estimate: DiscEstimate,
    /// Ordinary records consumed before the candidate was stable.
    pub ordinary_used: usize,
    pub records: Vec<TrialRecord>,
}

/// Samples reductions until the candidate discriminant is unchanged over
/// `stable` consecutive ordinary records, or `max_ordinary` is reached.
pub fn find_discriminant(
    curve: &CurveNF,
    max_ordinary: usize,
    stable: usize,
    cfg: &SamplerConfig,
) -> Result<DiscSearch> {
    let sampler = Sampler::new(curve.field().clone(), cfg.clone())?;
    let mut stats = SamplerStats::default();
    let mut records = Vec::new();
    let mut last: Option<BigInt> = None;
    let mut run = 0;
    let mut ordinary = 0;
    let mut index = 0u64;
    let max_trials = 20 * max_ordinary as u64 + 100;
    while ordinary < max_ordinary && index < max_trials {
        let rec = one_trial(curve, &sampler, index, &mut stats)?;
        index += 1;
        let is_ord = rec.status == TrialStatus::Ordinary;
        records.push(rec);
        if !is_ord {
            continue;
        }
        ordinary += 1;
        let est = discriminant_from_traces(&records)?;
        if est.d_candidate.is_some() && est.d_candidate == last {
            run += 1;
        } else {
            run = 1;
            last = est.d_candidate.clone();
        }
        if run >= stable && est.consistent {
            return Ok(DiscSearch { estimate: est, ordinary_used: ordinary, records });
        }
    }
    let estimate = discriminant_from_traces(&records)?;
    Ok(DiscSearch { estimate, ordinary_used: ordinary, records })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OneSidedVerdict {
    CertifiedNotCM,
    Undetermined,
}

#[derive(Clone, Debug, Serialize)]
pub struct OneSidedReport {
    pub verdict: OneSidedVerdict,
    #[serde(serialize_with = "crate::serde_util::big")]
    pub gcd: BigInt,
    pub ordinary_used: usize,
}

/// Certifies non-CM once `gcd(w_i) = 1` over ordinary reductions; a CM
/// curve always has its field discriminant dividing every `w_i`.
pub fn one_sided_non_cm(curve: &CurveNF, max_records: usize, cfg: &SamplerConfig) -> Result<OneSidedReport> {
    if !j_is_integral(curve) {
        return Ok(OneSidedReport { verdict: OneSidedVerdict::CertifiedNotCM, gcd: BigInt::zero(), ordinary_used: 0 });
    }
    let sampler = Sampler::new(curve.field().clone(), cfg.clone())?;
    let mut stats = SamplerStats::default();
    let mut g = BigInt::zero();
    let mut used = 0;
    let max_trials = 20 * max_records as u64 + 100;
    for index in 0..max_trials {
        if used >= max_records {
            break;
        }
        let rec = one_trial(curve, &sampler, index, &mut stats)?;
        if let Some(w) = rec.w {
            used += 1;
            g = g.gcd(&w);
            if g.is_one() {
                return Ok(OneSidedReport { verdict: OneSidedVerdict::CertifiedNotCM, gcd: g, ordinary_used: used });
            }
        }
    }
    Ok(OneSidedReport { verdict: OneSidedVerdict::Undetermined, gcd: -g, ordinary_used: used })
}
