//! Lower bounds for `|TV_r|` at levels `r = kA`, and scans of the growth
//! sequence `(2π/r) log |TV_r|`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modular::{enumerate_b, CongruenceCertificate};
use crate::rt::{rt_closed_with, Parallelism};
use crate::seifert::SeifertSymbol;
use crate::tv::{tv_bounded_with, tv_closed_with, TvValue};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    /// The bounded manifold itself.
    M,
    /// Its double.
    DM,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LtvSample {
    pub r: u32,
    pub tv_abs: f64,
    /// `(2π/r) log tv_abs`.
    pub ltv_term: f64,
    pub bound: Option<f64>,
    pub bound_satisfied: Option<bool>,
}

impl LtvSample {
    pub fn new(r: u32, tv_abs: f64, bound: Option<f64>) -> Self {
        LtvSample {
            r,
            tv_abs,
            ltv_term: 2.0 * std::f64::consts::PI / r as f64 * tv_abs.ln(),
            bound,
            bound_satisfied: bound.map(|b| tv_abs >= b),
        }
    }
}

fn require_certificate(symbol: &SeifertSymbol) -> Result<CongruenceCertificate> {
    if !symbol.has_boundary() {
        return Err(Error::Domain(format!(
            "{symbol} is closed; the bound is stated for M with boundary"
        )));
    }
    symbol.require_positive_fibers()?;
    if symbol.fibers().is_empty() {
        return Err(Error::Degenerate(format!(
            "{symbol} has no exceptional fibers, so A = 1 and the set B is empty; the bound does not apply"
        )));
    }
    match enumerate_b(symbol.fibers())? {
        Some(cert) => Ok(cert),
        None => Err(Error::Hypothesis(format!(
            "no (γ, μ) solves γ ≡ -μ_j b_j (mod a_j) for all fibers of {symbol}"
        ))),
    }
}

fn require_odd_k(k: u32) -> Result<()> {
    if k.is_multiple_of(2) {
        return Err(Error::Precondition(format!(
            "k must be odd and at least 1, got {k}"
        )));
    }
    Ok(())
}

/// `(kA)^{a_ε g - 1} · 2|B| · k · Π a_j / 2^{2n + a_ε g - 1}`, squared for the double.
pub fn lower_bound(
    symbol: &SeifertSymbol,
    k: u32,
    cert: &CongruenceCertificate,
    target: Target,
) -> Result<f64> {
    require_odd_k(k)?;
    if cert.is_empty() {
        return Err(Error::Hypothesis(
            "the congruence certificate is empty".into(),
        ));
    }
    let fibers = symbol.fibers();
    if fibers.is_empty() {
        return Err(Error::Degenerate(
            "no exceptional fibers; the bound does not apply".into(),
        ));
    }
    let n = fibers.len() as i32;
    let weighted_genus = (symbol.epsilon().weight() * symbol.genus()) as i32;
    let r = k as f64 * cert.modulus_a as f64;
    let prod_a: f64 = fibers.iter().map(|f| f.a as f64).product();
    let bound = r.powi(weighted_genus - 1) * 2.0 * cert.cardinality_b as f64 * k as f64 * prod_a
        / 2f64.powi(2 * n + weighted_genus - 1);
    Ok(match target {
        Target::M => bound,
        Target::DM => bound * bound,
    })
}

/// [`lower_bound`] with the certificate computed from the symbol.
pub fn lower_bound_for(symbol: &SeifertSymbol, k: u32, target: Target) -> Result<f64> {
    let cert = require_certificate(symbol)?;
    lower_bound(symbol, k, &cert, target)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaRow {
    pub k: u32,
    pub m: LtvSample,
    pub dm: LtvSample,
    pub both_exceed_one: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub certificate: CongruenceCertificate,
    pub rows: Vec<LemmaRow>,
    /// Smallest tested `k` with `|TV(M)| > 1` and `|TV(D(M))| > 1`.
    pub smallest_k_both_exceed_one: Option<u32>,
}

/// Evaluates `TV_{kA}(M)` and `TV_{kA}(D(M))` against their lower bounds for each `k`.
pub fn verify_lemma(symbol: &SeifertSymbol, ks: &[u32]) -> Result<LemmaReport> {
    let cert = require_certificate(symbol)?;
    if cert.modulus_a % 2 == 0 {
        return Err(Error::Precondition(format!(
            "A = {} is even, so r = kA is never an odd level",
            cert.modulus_a
        )));
    }
    let double = symbol.double()?;
    let mut rows = Vec::with_capacity(ks.len());
    for &k in ks {
        require_odd_k(k)?;
        let r = u32::try_from(k as i64 * cert.modulus_a).map_err(|_| {
            Error::Precondition(format!("level k·A = {k}·{} is too large", cert.modulus_a))
        })?;
        let rt = rt_closed_with(&double, r, Parallelism::Sequential)?;
        let tv_m = rt.value.re;
        let tv_dm = rt.value.norm_sqr();
        let m = LtvSample::new(
            r,
            tv_m.abs(),
            Some(lower_bound(symbol, k, &cert, Target::M)?),
        );
        let dm = LtvSample::new(r, tv_dm, Some(lower_bound(symbol, k, &cert, Target::DM)?));
        rows.push(LemmaRow {
            k,
            both_exceed_one: m.tv_abs > 1.0 && dm.tv_abs > 1.0,
            m,
            dm,
        });
    }
    let smallest_k_both_exceed_one = rows
        .iter()
        .filter(|row| row.both_exceed_one)
        .map(|row| row.k)
        .min();
    Ok(LemmaReport {
        certificate: cert,
        rows,
        smallest_k_both_exceed_one,
    })
}

/// Least-squares line `log|TV_r| ≈ slope · log r + intercept`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerFit {
    pub slope: f64,
    pub intercept: f64,
}

pub fn fit_power_law(samples: &[LtvSample]) -> Option<PowerFit> {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|s| s.tv_abs > 0.0)
        .map(|s| ((s.r as f64).ln(), s.tv_abs.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Some(PowerFit {
        slope,
        intercept: my - slope * mx,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trend {
    /// Every term positive and each strictly smaller than the one before.
    PositiveDecreasing,
    NotMonotone,
    NonPositive,
    TooFewPoints,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub symbol: SeifertSymbol,
    pub target: Target,
    pub samples: Vec<LtvSample>,
    pub fit: Option<PowerFit>,
    /// `r`-exponent of `|TV_r|` predicted by the leading small-angle terms, when known.
    pub expected_exponent: Option<f64>,
    /// `max_r ltv_term · r / log r`: the constant `C` with `ltv_term ≤ C log r / r` on the scan.
    pub log_r_over_r_constant: Option<f64>,
    pub trend: Trend,
}

/// Leading power of `r` in `|TV_r|` for a certified bounded symbol at levels divisible by `A`.
pub fn expected_exponent(symbol: &SeifertSymbol, target: Target) -> Option<f64> {
    if !symbol.has_boundary() || symbol.fibers().is_empty() {
        return None;
    }
    enumerate_b(symbol.fibers()).ok().flatten()?;
    let n = symbol.fibers().len() as f64;
    let ag = (symbol.epsilon().weight() * symbol.genus()) as f64;
    let one = (ag - 1.0) + (2.0 * n + 2.0 * ag - 2.0);
    Some(match target {
        Target::M => one,
        Target::DM => 2.0 * one,
    })
}

fn trend_of(samples: &[LtvSample]) -> Trend {
    if samples.len() < 2 {
        return Trend::TooFewPoints;
    }
    if samples
        .iter()
        .any(|s| s.ltv_term.is_nan() || s.ltv_term <= 0.0)
    {
        return Trend::NonPositive;
    }
    if samples.windows(2).all(|w| w[1].ltv_term < w[0].ltv_term) {
        Trend::PositiveDecreasing
    } else {
        Trend::NotMonotone
    }
}

/// One sample per level. Closed symbols use `|RT_r|²`; bounded ones use
/// `TV_r(M) = Re RT_r(D(M))` or, for [`Target::DM`], `|RT_r(D(M))|²`.
/// Lower bounds are attached at levels divisible by `A`.
pub fn ltv_scan(
    symbol: &SeifertSymbol,
    rs: &[u32],
    target: Target,
    mode: Parallelism,
) -> Result<ScanReport> {
    if rs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Precondition(
            "levels must be strictly ascending".into(),
        ));
    }
    let cert = if symbol.has_boundary() && !symbol.fibers().is_empty() {
        enumerate_b(symbol.fibers())?
    } else {
        None
    };
    let sample = |r: u32| -> Result<LtvSample> {
        let tv: TvValue = match (symbol.has_boundary(), target) {
            (false, _) => tv_closed_with(symbol, r, Parallelism::Sequential)?,
            (true, Target::M) => tv_bounded_with(symbol, r, Parallelism::Sequential)?,
            (true, Target::DM) => tv_closed_with(&symbol.double()?, r, Parallelism::Sequential)?,
        };
        let bound = match &cert {
            Some(c) if (r as i64) % c.modulus_a == 0 => Some(lower_bound(
                symbol,
                (r as i64 / c.modulus_a) as u32,
                c,
                target,
            )?),
            _ => None,
        };
        Ok(LtvSample::new(r, tv.value.abs(), bound))
    };
    let samples: Vec<LtvSample> = match mode {
        Parallelism::Sequential => rs.iter().map(|&r| sample(r)).collect::<Result<_>>()?,
        Parallelism::Parallel => rs.par_iter().map(|&r| sample(r)).collect::<Result<_>>()?,
    };
    let log_r_over_r_constant = samples
        .iter()
        .map(|s| s.ltv_term * s.r as f64 / (s.r as f64).ln())
        .reduce(f64::max);
    Ok(ScanReport {
        symbol: symbol.clone(),
        target,
        fit: fit_power_law(&samples),
        expected_exponent: if symbol.has_boundary() {
            expected_exponent(symbol, target)
        } else {
            None
        },
        log_r_over_r_constant,
        trend: trend_of(&samples),
        samples,
    })
}
