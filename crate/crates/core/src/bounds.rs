//! Closed-form evaluators for the recovery, detection, contiguity and
//! minimax bounds of the planted bi-section model.
//!
//! Everything is computed through the Bhattacharyya coefficient
//! `B = √(pq) + √((1-p)(1-q))`, for which `1 - μ = B²`. `B` itself is
//! formed as `1 - H²/2` with `H²` the squared Hellinger distance between
//! the two edge laws, so `μ` is exactly zero when `p == q` and large powers
//! of `1 - μ` are taken as `exp(m · log1p(-H²/2))`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphmodel::{log_odds_gap, ModelParams};
use crate::numeric::{ln_ball_size, ln_choose, log_sum_exp};

/// Default constant in the remote-contiguity rate.
pub const DEFAULT_CONTIGUITY_C: f64 = 2.0;

fn check_pq(p: f64, q: f64) -> Result<()> {
    ModelParams::new(1, p, q).map(|_| ())
}

fn half_hellinger_sq(p: f64, q: f64) -> f64 {
    let a = p.sqrt() - q.sqrt();
    let b = (1.0 - p).sqrt() - (1.0 - q).sqrt();
    0.5 * (a * a + b * b)
}

/// `log B = ½ log(1 - μ)`.
fn ln_bhattacharyya(p: f64, q: f64) -> f64 {
    (-half_hellinger_sq(p, q)).ln_1p()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HellingerQuantities {
    /// `μ = p + q - 2pq - 2√(p(1-p)q(1-q))`.
    pub mu: f64,
    /// `λ = log(1-p) - log p + log q - log(1-q)`.
    pub lambda: f64,
    /// `ρ = e^{-|λ|}`.
    pub rho: f64,
    /// `z = (1 - μ)^{n/2}`.
    pub z: f64,
    /// `B = √(pq) + √((1-p)(1-q)) = (1 - μ)^{1/2}`.
    pub bhattacharyya: f64,
}

/// At boundary `p` or `q` the log-odds gap is `±inf` and `rho` is 0.
pub fn hellinger_quantities(p: f64, q: f64, n: usize) -> Result<HellingerQuantities> {
    check_pq(p, q)?;
    let h = half_hellinger_sq(p, q);
    let mu = (h * (2.0 - h)).clamp(0.0, 1.0);
    let lambda = log_odds_gap(p, q);
    let ln_b = ln_bhattacharyya(p, q);
    Ok(HellingerQuantities {
        mu,
        lambda,
        rho: (-lambda.abs()).exp(),
        z: (n as f64 * ln_b).exp(),
        bhattacharyya: 1.0 - h,
    })
}

fn check_k(n: usize, k: usize, lo: usize, what: &'static str) -> Result<()> {
    if k < lo || 2 * k > n {
        return Err(Error::OutOfRange {
            what,
            value: k as i64,
            lo: lo as i64,
            hi: (n / 2) as i64,
        });
    }
    Ok(())
}

/// Bound `a_{n,k} = (1 - μ)^{2k(n-k)}` on the summed error probabilities of
/// the likelihood-ratio test of `θ0` against an assignment `k` pair
/// exchanges away. This is the Hellinger affinity of the two graph laws.
pub fn test_power(n: usize, k: usize, p: f64, q: f64) -> Result<f64> {
    check_pq(p, q)?;
    check_k(n, k, 1, "k")?;
    let exponent = 4.0 * (k * (n - k)) as f64;
    Ok((exponent * ln_bhattacharyya(p, q)).exp())
}

/// Upper bound `(1 + z)^{2n} - 1` on the expected posterior mass outside
/// `{θ0}`.
pub fn recovery_mass_bound(n: usize, p: f64, q: f64) -> Result<f64> {
    let z = hellinger_quantities(p, q, n)?.z;
    Ok((2.0 * n as f64 * z.ln_1p()).exp_m1())
}

/// A bound value with flags for vacuity (`>= 1` where a probability is
/// bounded) and for holding only for large enough `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlaggedBound {
    pub value: f64,
    pub vacuous: bool,
    pub asymptotic: bool,
}

/// `x e^{1 + x}` with `x = n (1-μ)^{n/2} / k_n`, bounding the expected
/// posterior mass at distance `>= k_n` from `θ0` for large enough `n`.
pub fn detect_mass_bound(n: usize, k_n: usize, p: f64, q: f64) -> Result<FlaggedBound> {
    check_k(n, k_n, 1, "k_n")?;
    let z = hellinger_quantities(p, q, n)?.z;
    let x = n as f64 * z / k_n as f64;
    let value = x * (1.0 + x).exp();
    Ok(FlaggedBound {
        value,
        vacuous: value >= 1.0,
        asymptotic: true,
    })
}

/// Phase-condition expressions at one `(n, p, q, k_n)`. Sparse-scaling
/// fields are `None` for `n < 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseReport {
    /// `(1 + z)^{2n}`; tends to 1 when the posterior recovers exactly.
    pub recovery_expr: f64,
    /// `(a + b - 2√(ab) - 2) log n`.
    pub ch_value: Option<f64>,
    /// `(a + b - 2√(ab) - 1) log n + ½ log log n`.
    pub mns_value: Option<f64>,
    /// `(√a - √b)²`.
    pub simple_sep: Option<f64>,
    /// `(c - d)² - 2(c + d)`.
    pub ks_margin: f64,
    /// `n (p - q)² / (p + q)`.
    pub detect_snr: f64,
    /// `(n / k_n)(1 - μ)^{n/2}`.
    pub detect_expr: f64,
    /// `n μ`.
    pub weak_detect_expr: f64,
    /// `p - q - A log(n) / n`.
    pub dyer_frieze_margin: f64,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub c: f64,
    pub d: f64,
}

pub fn phase_report(
    n: usize,
    p: f64,
    q: f64,
    k_n: usize,
    dyer_frieze_a: f64,
) -> Result<PhaseReport> {
    let params = ModelParams::new(n, p, q)?;
    check_k(n, k_n, 1, "k_n")?;
    let hq = hellinger_quantities(p, q, n)?;
    let nf = n as f64;
    let ln_n = nf.ln();
    let (a, b) = (params.a(), params.b());
    let sparse = a.zip(b).map(|(a, b)| a + b - 2.0 * (a * b).sqrt());
    let (c, d) = (params.c(), params.d());
    Ok(PhaseReport {
        recovery_expr: (2.0 * nf * hq.z.ln_1p()).exp(),
        ch_value: sparse.map(|s| (s - 2.0) * ln_n),
        mns_value: sparse.map(|s| (s - 1.0) * ln_n + 0.5 * ln_n.ln()),
        simple_sep: a.zip(b).map(|(a, b)| (a.sqrt() - b.sqrt()).powi(2)),
        ks_margin: (c - d).powi(2) - 2.0 * (c + d),
        detect_snr: if p == q {
            0.0
        } else {
            nf * (p - q).powi(2) / (p + q)
        },
        detect_expr: nf / k_n as f64 * hq.z,
        weak_detect_expr: nf * hq.mu,
        dyer_frieze_margin: p - q - dyer_frieze_a * ln_n / nf,
        a,
        b,
        c,
        d,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContiguityQuantities {
    /// Prior-weighted mean of `2k(n-k)` over the ball of radius `k_n`.
    pub alpha: f64,
    /// `d_n = ρ^{C α |p - q|}`.
    pub d_rate: f64,
    #[serde(rename = "C")]
    pub c: f64,
}

/// `α = Σ_{k<=k_n} C(n,k)² 2k(n-k) / Σ_{k<=k_n} C(n,k)²` and the remote
/// contiguity rate `d_n = exp(-C α |p-q| |λ|)`.
pub fn contiguity_quantities(
    n: usize,
    k_n: usize,
    p: f64,
    q: f64,
    c: f64,
) -> Result<ContiguityQuantities> {
    check_pq(p, q)?;
    check_k(n, k_n, 0, "k_n")?;
    if c.is_nan() || c <= 1.0 {
        return Err(Error::Parameter(format!("C = {c} must exceed 1")));
    }
    let log_w: Vec<f64> = (0..=k_n)
        .map(|k| 2.0 * ln_choose(n as u64, k as u64))
        .collect();
    let total = log_sum_exp(&log_w);
    let alpha: f64 = log_w
        .iter()
        .enumerate()
        .map(|(k, &w)| (w - total).exp() * (2 * k * (n - k)) as f64)
        .sum();
    let spread = alpha * (p - q).abs();
    let d_rate = if spread == 0.0 {
        1.0
    } else {
        (-c * spread * log_odds_gap(p, q).abs()).exp()
    };
    Ok(ContiguityQuantities { alpha, d_rate, c })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinimaxBounds {
    /// `B^n`, the leading-order minimax misclassification bound (the
    /// `o(1)` exponent correction is dropped).
    pub misclass_rate_bound: f64,
    /// `2 · 4^n · (B / (π n δ)^{1/n})^{n/2}`.
    pub confidence_deficit_bound: f64,
    pub confidence_vacuous: bool,
    /// `(π n δ)^{1/n} B`, to be compared with 1/16.
    pub radius_margin: f64,
    pub radius_margin_ok: bool,
}

pub fn minimax_bounds(n: usize, p: f64, q: f64, delta: f64) -> Result<MinimaxBounds> {
    check_pq(p, q)?;
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::Parameter(format!(
            "delta = {delta} must be positive"
        )));
    }
    let nf = n as f64;
    let ln_b = ln_bhattacharyya(p, q);
    let ln_pnd = (std::f64::consts::PI * nf * delta).ln();
    let deficit = (std::f64::consts::LN_2 + nf * 4f64.ln() + 0.5 * nf * ln_b - 0.5 * ln_pnd).exp();
    let margin = (ln_pnd / nf + ln_b).exp();
    Ok(MinimaxBounds {
        misclass_rate_bound: (nf * ln_b).exp(),
        confidence_deficit_bound: deficit,
        confidence_vacuous: deficit >= 1.0,
        radius_margin: margin,
        radius_margin_ok: margin < 1.0 / 16.0,
    })
}

/// `f(β) = (1-β)^{-2(1-β)} β^{-2β}`, in `(1, 4]` on `(0, 1)`.
pub fn enlargement_factor(beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::Parameter(format!(
            "beta = {beta} must lie in (0, 1)"
        )));
    }
    Ok((-2.0 * (1.0 - beta) * (-beta).ln_1p() - 2.0 * beta * beta.ln()).exp())
}

/// `Π_n(B_n(θ)) / π_n`: the number of assignments within `k_n` pair
/// exchanges of a fixed one.
pub fn ball_prior_ratio(n: usize, k_n: usize) -> Result<f64> {
    check_k(n, k_n, 0, "k_n")?;
    Ok(ln_ball_size(n, k_n).exp().round())
}

/// Stirling approximation `f(β)^n / (2π n β(1-β))` of `C(n, βn)²`.
pub fn stirling_ring_approximation(n: usize, beta: f64) -> Result<f64> {
    let f = enlargement_factor(beta)?;
    let nf = n as f64;
    Ok((nf * f.ln() - (2.0 * std::f64::consts::PI * nf * beta * (1.0 - beta)).ln()).exp())
}

/// Everything the `bounds` subcommand prints.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundsReport {
    pub n: usize,
    pub p: f64,
    pub q: f64,
    pub k_n: usize,
    pub hellinger: HellingerQuantities,
    pub phase: PhaseReport,
    pub test_power_at_k_n: f64,
    pub recovery_mass_bound: f64,
    pub recovery_vacuous: bool,
    pub detect_mass_bound: FlaggedBound,
    pub contiguity: ContiguityQuantities,
    pub minimax: MinimaxBounds,
    pub delta: f64,
    pub dyer_frieze_a: f64,
    pub ball_prior_ratio: f64,
}

pub fn bounds_report(
    n: usize,
    p: f64,
    q: f64,
    k_n: usize,
    c: f64,
    delta: f64,
    dyer_frieze_a: f64,
) -> Result<BoundsReport> {
    let recovery = recovery_mass_bound(n, p, q)?;
    Ok(BoundsReport {
        n,
        p,
        q,
        k_n,
        hellinger: hellinger_quantities(p, q, n)?,
        phase: phase_report(n, p, q, k_n, dyer_frieze_a)?,
        test_power_at_k_n: test_power(n, k_n, p, q)?,
        recovery_mass_bound: recovery,
        recovery_vacuous: recovery >= 1.0,
        detect_mass_bound: detect_mass_bound(n, k_n, p, q)?,
        contiguity: contiguity_quantities(n, k_n, p, q, c)?,
        minimax: minimax_bounds(n, p, q, delta)?,
        delta,
        dyer_frieze_a,
        ball_prior_ratio: ball_prior_ratio(n, k_n)?,
    })
}
