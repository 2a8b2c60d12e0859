//! Log-domain helpers shared by the likelihood, posterior and bound code.

/// `log(sum(exp(x)))` with max-shift. Returns `-inf` for an empty slice or
/// when every entry is `-inf`.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    let sum: f64 = values.iter().map(|&v| (v - max).exp()).sum();
    max + sum.ln()
}

/// `count * ln(prob)` with the convention `0 * ln 0 = 0`.
#[inline]
pub fn xlogy(count: u64, prob: f64) -> f64 {
    if count == 0 {
        0.0
    } else {
        count as f64 * prob.ln()
    }
}

/// Natural log of the binomial coefficient `C(n, k)`; `-inf` when `k > n`.
pub fn ln_choose(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    (1..=k)
        .map(|i| ((n - k + i) as f64).ln() - (i as f64).ln())
        .sum()
}

/// Exact binomial coefficient, `None` on overflow.
pub fn choose(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k as u128 {
        acc = acc.checked_mul(n as u128 - k as u128 + i)? / i;
    }
    Some(acc)
}

/// `|Θ_n| = C(2n, n) / 2`, the number of balanced two-class partitions of
/// `2n` vertices.
pub fn num_assignments(n: usize) -> Option<u128> {
    choose(2 * n as u64, n as u64).map(|c| c / 2)
}

/// `ln |Θ_n|`.
pub fn ln_num_assignments(n: usize) -> f64 {
    ln_choose(2 * n as u64, n as u64) - std::f64::consts::LN_2
}

/// `ln` of the number of assignments within `k` pair exchanges of a fixed
/// one: `Σ_{j<=k} C(n,j)²`, with the `j = n/2` ring halved.
pub fn ln_ball_size(n: usize, k: usize) -> f64 {
    let half = n / 2;
    let exact = (0..=k.min(half)).try_fold(0u128, |acc, j| {
        let c = choose(n as u64, j as u64)?;
        let ring = c.checked_mul(c)?;
        acc.checked_add(if 2 * j == n { ring / 2 } else { ring })
    });
    if let Some(size) = exact {
        return (size as f64).ln();
    }
    let logs: Vec<f64> = (0..=k.min(half))
        .map(|j| {
            let ln = 2.0 * ln_choose(n as u64, j as u64);
            if 2 * j == n {
                ln - std::f64::consts::LN_2
            } else {
                ln
            }
        })
        .collect();
    log_sum_exp(&logs)
}
