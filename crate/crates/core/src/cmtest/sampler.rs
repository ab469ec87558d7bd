//! Random prime ideals with norm in `[2, x_max]`.

use std::sync::Arc;

use num_traits::ToPrimitive;
use rand::Rng;
use serde::Serialize;

use crate::algebra::arith::primes_up_to;
use crate::ellcurve::CurveNF;
use crate::error::{Error, Result};
use crate::numberfield::{NumberField, PrimeIdeal};

/// Hard ceiling on the interval produced by [`SamplerConfig::paper_interval`].
pub const DEFAULT_CEILING: u64 = 10_000_000;
pub const DEFAULT_RETRY_BUDGET: u32 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplerMode {
    /// Uniform p, a uniformly chosen factor of (p) counted with
    /// multiplicity, a norm filter, and acceptance with probability 1/deg.
    PaperFaithful,
    /// Uniform p, then the k-th distinct prime above p with norm in range
    /// for k uniform in 1..=n. Exactly uniform over prime ideals.
    ExactUniform,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SamplerConfig {
    pub x_max: u64,
    pub c: f64,
    pub h_const: f64,
    pub eps: f64,
    pub mode: SamplerMode,
    pub seed: u64,
    pub retry_budget: u32,
    pub ceiling: u64,
    /// Set when the formula bound exceeded `ceiling`.
    pub capped: bool,
}

impl SamplerConfig {
    pub fn new(x_max: u64, mode: SamplerMode, seed: u64) -> Self {
        SamplerConfig {
            x_max,
            c: 1.0,
            h_const: 1.0,
            eps: 0.1,
            mode,
            seed,
            retry_budget: DEFAULT_RETRY_BUDGET,
            ceiling: DEFAULT_CEILING,
            capped: false,
        }
    }

    /// `x_max = (h · exp(n^{2+ε}) · max(w(A), w(B)))^c`, capped at `ceiling`.
    pub fn paper_interval(curve: &CurveNF, mode: SamplerMode, seed: u64) -> Result<Self> {
        let mut cfg = SamplerConfig::new(10, mode, seed);
        let n = curve.field().degree() as f64;
        let w = |e: &crate::NfElement| -> Result<f64> {
            let (w, _) = e.minpoly().weil_weight()?;
            Ok(crate::algebra::poly::ln_abs(&w))
        };
        let ln_w = w(curve.a())?.max(w(curve.b())?);
        let ln_x = cfg.c * (cfg.h_const.ln() + n.powf(2.0 + cfg.eps) + ln_w);
        let ceiling = cfg.ceiling as f64;
        if ln_x >= ceiling.ln() {
            cfg.x_max = cfg.ceiling;
            cfg.capped = true;
        } else {
            cfg.x_max = (ln_x.exp() as u64).max(10);
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.x_max < 10 {
            return Err(Error::config(format!("x_max = {} is below 10", self.x_max)));
        }
        if !(self.c > 0.0 && self.h_const > 0.0 && self.eps > 0.0) {
            return Err(Error::config("c, h and ε must be positive"));
        }
        if self.retry_budget == 0 {
            return Err(Error::config("retry budget must be positive"));
        }
        Ok(())
    }
}

/// Restart counts by cause.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SamplerStats {
    pub resampled_index: u64,
    pub rejected_norm: u64,
    pub rejected_degree: u64,
    pub resampled_bad_reduction: u64,
}

impl SamplerStats {
    pub fn restarts(&self) -> u64 {
        self.resampled_index + self.rejected_norm + self.rejected_degree + self.resampled_bad_reduction
    }

    pub fn merge(&mut self, o: &SamplerStats) {
        self.resampled_index += o.resampled_index;
        self.rejected_norm += o.rejected_norm;
        self.rejected_degree += o.rejected_degree;
        self.resampled_bad_reduction += o.resampled_bad_reduction;
    }
}

/// A sampler bound to one field and configuration; caches the prime table.
pub struct Sampler {
    field: Arc<NumberField>,
    cfg: SamplerConfig,
    primes: Vec<u64>,
}

impl Sampler {
    pub fn new(field: Arc<NumberField>, cfg: SamplerConfig) -> Result<Self> {
        cfg.validate()?;
        let primes = primes_up_to(cfg.x_max);
        Ok(Sampler { field, cfg, primes })
    }

    pub fn config(&self) -> &SamplerConfig {
        &self.cfg
    }

    fn in_range(&self, prime: &PrimeIdeal) -> bool {
        prime.norm.to_u64().is_some_and(|n| n <= self.cfg.x_max)
    }

    /// One accepted prime ideal; restarts are tallied in `stats`. Fails once
    /// the retry budget is spent.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, stats: &mut SamplerStats) -> Result<PrimeIdeal> {
        for _ in 0..self.cfg.retry_budget {
            let p = self.primes[rng.gen_range(0..self.primes.len())];
            let factors = match self.field.split_prime_dedekind(p) {
                Ok(f) => f,
                Err(Error::IndexRisk { .. }) => {
                    stats.resampled_index += 1;
                    continue;
                }
                Err(e) => return Err(e),
            };
            match self.cfg.mode {
                SamplerMode::PaperFaithful => {
                    let copies: u32 = factors.iter().map(|f| f.e).sum();
                    let mut k = rng.gen_range(0..copies);
                    let chosen = factors
                        .into_iter()
                        .find(|f| {
                            if k < f.e {
                                true
                            } else {
                                k -= f.e;
                                false
                            }
                        })
                        .unwrap();
                    if !self.in_range(&chosen) {
                        stats.rejected_norm += 1;
                        continue;
                    }
                    if rng.gen_range(0..chosen.d) != 0 {
                        stats.rejected_degree += 1;
                        continue;
                    }
                    return Ok(chosen);
                }
                SamplerMode::ExactUniform => {
                    let k = rng.gen_range(0..self.field.degree());
                    match factors.into_iter().filter(|f| self.in_range(f)).nth(k) {
                        Some(chosen) => return Ok(chosen),
                        None => {
                            stats.rejected_norm += 1;
                            continue;
                        }
                    }
                }
            }
        }
        Err(Error::config(format!(
            "no prime accepted after {} restarts (x_max = {})",
            self.cfg.retry_budget, self.cfg.x_max
        )))
    }
}

/// Draws a single prime ideal; prefer [`Sampler`] for repeated draws.
pub fn sample_prime<R: Rng + ?Sized>(field: &Arc<NumberField>, cfg: &SamplerConfig, rng: &mut R) -> Result<PrimeIdeal> {
    Sampler::new(field.clone(), cfg.clone())?.sample(rng, &mut SamplerStats::default())
}

/// Every prime ideal of norm at most `x` (index-divisible primes included
/// through their Kummer factors).
pub fn prime_ideals_up_to(field: &NumberField, x: u64) -> Vec<PrimeIdeal> {
    primes_up_to(x)
        .into_iter()
        .flat_map(|p| field.kummer_factors(p))
        .filter(|f| f.norm.to_u64().is_some_and(|n| n <= x))
        .collect()
}
