//! Credible sets over `Θ_n` and their enlargement into confidence sets.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphmodel::{
    diameter, enumerate_assignments, enumerate_ball, enumeration_feasible, k_distance,
    ClassAssignment, DEFAULT_ENUMERATION_CAP,
};
use crate::numeric::{ln_ball_size, ln_num_assignments, num_assignments};
use crate::posterior::PosteriorTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    /// Highest-weight assignments first until the level is reached.
    MinimalOrder,
    /// Smallest pair-exchange ball reaching the level.
    MinimalDiameter,
}

/// A set of assignments carrying at least a requested posterior mass.
#[derive(Debug, Clone, PartialEq)]
pub struct CredibleSet {
    n: usize,
    members: Vec<ClassAssignment>,
    level_requested: f64,
    level_achieved: f64,
    construction: Construction,
    diameter: usize,
    ball: Option<(ClassAssignment, usize)>,
    approximate: bool,
}

impl CredibleSet {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Members in lexicographic order.
    pub fn members(&self) -> &[ClassAssignment] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, theta: &ClassAssignment) -> bool {
        self.members.binary_search(theta).is_ok()
    }

    pub fn level_requested(&self) -> f64 {
        self.level_requested
    }

    pub fn level_achieved(&self) -> f64 {
        self.level_achieved
    }

    pub fn construction(&self) -> Construction {
        self.construction
    }

    /// Largest pairwise `k_distance` among the members.
    pub fn diameter(&self) -> usize {
        self.diameter
    }

    /// Center of a minimal-diameter ball.
    pub fn center(&self) -> Option<&ClassAssignment> {
        self.ball.as_ref().map(|(c, _)| c)
    }

    pub fn radius(&self) -> Option<usize> {
        self.ball.as_ref().map(|&(_, r)| r)
    }

    /// True when built from MCMC frequencies rather than an exact table.
    pub fn is_approximate(&self) -> bool {
        self.approximate
    }
}

fn check_level(level: f64) -> Result<()> {
    if !(level > 0.0 && level <= 1.0) {
        return Err(Error::Parameter(format!(
            "credible level {level} must lie in (0, 1]"
        )));
    }
    Ok(())
}

/// Greedy prefix of the assignments sorted by decreasing posterior weight
/// (lexicographic among ties), stopping as soon as the cumulative mass
/// reaches `level`. At level 1 every assignment of positive weight is taken.
pub fn minimal_order_credible(table: &PosteriorTable, level: f64) -> Result<CredibleSet> {
    check_level(level)?;
    let w = table.log_weights();
    let mut order: Vec<usize> = (0..table.len()).collect();
    // stable: equal weights stay in lexicographic order
    order.sort_by(|&a, &b| w[b].total_cmp(&w[a]));

    let support = order
        .iter()
        .take_while(|&&i| w[i] > f64::NEG_INFINITY)
        .count();
    let mut taken = support;
    let mut achieved = 1.0;
    if level < 1.0 {
        let mut cum = 0.0;
        for (i, &idx) in order[..support].iter().enumerate() {
            cum += w[idx].exp();
            if cum >= level {
                taken = i + 1;
                achieved = cum.min(1.0);
                break;
            }
        }
    }
    let mut chosen = order[..taken].to_vec();
    chosen.sort_unstable();
    let members: Vec<ClassAssignment> = chosen
        .into_iter()
        .map(|i| table.assignments()[i].clone())
        .collect();
    let diameter = diameter(&members)?;
    Ok(CredibleSet {
        n: table.n(),
        members,
        level_requested: level,
        level_achieved: achieved,
        construction: Construction::MinimalOrder,
        diameter,
        ball: None,
        approximate: !table.is_exact(),
    })
}

/// Smallest ball `{η : k(θ, η) <= r}` with posterior mass at least `level`:
/// the smallest radius wins, then the lexicographically smallest center.
///
/// Centers range over the table's assignments, which is all of `Θ_n` for an
/// exact table and the visited assignments for an empirical one. Members are
/// the table's assignments inside the ball.
pub fn minimal_diameter_credible(table: &PosteriorTable, level: f64) -> Result<CredibleSet> {
    check_level(level)?;
    let half = table.n() / 2;
    let assignments = table.assignments();
    let mass: Vec<f64> = table.log_weights().iter().map(|w| w.exp()).collect();

    // cumulative ball mass by radius, one row per center
    let profiles: Vec<Vec<f64>> = assignments
        .par_iter()
        .map(|center| {
            let mut by_radius = vec![0.0; half + 1];
            for (eta, &m) in assignments.iter().zip(&mass) {
                by_radius[k_distance(center, eta).expect("same n")] += m;
            }
            for r in 1..=half {
                by_radius[r] += by_radius[r - 1];
            }
            by_radius
        })
        .collect();

    let mut hit = None;
    'radius: for r in 0..=half {
        for (c, profile) in profiles.iter().enumerate() {
            if profile[r] >= level {
                hit = Some((c, r, profile[r].min(1.0)));
                break 'radius;
            }
        }
    }
    // A radius-⌊n/2⌋ ball is the whole space; accept it despite rounding.
    let (c, r, achieved) = hit.unwrap_or((0, half, 1.0));
    let center = assignments[c].clone();
    let members: Vec<ClassAssignment> = assignments
        .iter()
        .filter(|eta| k_distance(&center, eta).expect("same n") <= r)
        .cloned()
        .collect();
    let diameter = diameter(&members)?;
    Ok(CredibleSet {
        n: table.n(),
        members,
        level_requested: level,
        level_achieved: achieved,
        construction: Construction::MinimalDiameter,
        diameter,
        ball: Some((center, r)),
        approximate: !table.is_exact(),
    })
}

/// `1 - a / b_n` with `b_n = 1 / |Θ_n|`, clamped at 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverageBound {
    pub value: f64,
    /// Set when `a >= b_n`, where the bound says nothing.
    pub vacuous: bool,
}

/// Lower bound on the frequentist coverage of a credible set of level
/// `1 - a` under the uniform prior.
pub fn coverage_lower_bound(n: usize, a: f64) -> Result<CoverageBound> {
    if n == 0 {
        return Err(Error::Parameter("n must be positive".into()));
    }
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::Parameter(format!(
            "credible deficit {a} must lie in [0, 1]"
        )));
    }
    let ratio = match num_assignments(n) {
        Some(count) => a * count as f64,
        None if a == 0.0 => 0.0,
        None => (a.ln() + ln_num_assignments(n)).exp(),
    };
    let value = 1.0 - ratio;
    Ok(if value > 0.0 {
        CoverageBound {
            value,
            vacuous: false,
        }
    } else {
        CoverageBound {
            value: 0.0,
            vacuous: true,
        }
    })
}

/// Prior mass of a pair-exchange ball of radius `k` under the uniform prior.
pub fn ball_prior_mass(n: usize, k: usize) -> f64 {
    (ln_ball_size(n, k) - ln_num_assignments(n)).exp().min(1.0)
}

/// A credible set, its enlargement and the coverage guarantee.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfidenceReport {
    pub credible: CredibleSet,
    pub enlargement_radius: usize,
    /// Sorted; contains every credible member.
    pub confidence_members: Vec<ClassAssignment>,
    /// Prior mass of a ball of radius `enlargement_radius`.
    pub prior_mass_b: f64,
    /// Bound for the credible set, inherited by the larger confidence set.
    pub coverage_lower_bound: f64,
    pub vacuous_flag: bool,
    pub approximate: bool,
}

impl ConfidenceReport {
    pub fn contains(&self, theta: &ClassAssignment) -> bool {
        self.confidence_members.binary_search(theta).is_ok()
    }

    /// Largest pairwise `k_distance` in the enlarged set.
    pub fn confidence_diameter(&self) -> usize {
        diameter(&self.confidence_members).expect("members share n")
    }

    pub fn export(&self) -> ConfidenceExport {
        ConfidenceExport {
            level_requested: self.credible.level_requested,
            level_achieved: self.credible.level_achieved,
            diameter: self.credible.diameter,
            k_n: self.enlargement_radius,
            member_count: self.confidence_members.len(),
            coverage_lower_bound: self.coverage_lower_bound,
            vacuous_flag: self.vacuous_flag,
            construction: self.credible.construction,
            approximate: self.approximate,
            members: self
                .confidence_members
                .iter()
                .map(ClassAssignment::to_bit_string)
                .collect(),
        }
    }
}

/// Flat JSON form of a [`ConfidenceReport`]. `diameter` is that of the
/// credible set; `members` lists the enlarged set as sorted bit strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceExport {
    pub level_requested: f64,
    pub level_achieved: f64,
    pub diameter: usize,
    pub k_n: usize,
    pub member_count: usize,
    pub coverage_lower_bound: f64,
    pub vacuous_flag: bool,
    pub construction: Construction,
    pub approximate: bool,
    pub members: Vec<String>,
}

/// The `k_n`-enlargement: every assignment within distance `k_n` of some
/// credible member.
pub fn enlarge(credible: &CredibleSet, k_n: usize) -> Result<ConfidenceReport> {
    let n = credible.n;
    if 2 * k_n > n {
        return Err(Error::OutOfRange {
            what: "k_n",
            value: k_n as i64,
            lo: 0,
            hi: (n / 2) as i64,
        });
    }
    let confidence_members = if k_n == 0 {
        credible.members.clone()
    } else if k_n == n / 2 && enumeration_feasible(n, DEFAULT_ENUMERATION_CAP) {
        enumerate_assignments(n)?
    } else {
        let mut set = BTreeSet::new();
        for member in &credible.members {
            set.extend(enumerate_ball(member, k_n)?);
        }
        set.into_iter().collect()
    };
    let bound = coverage_lower_bound(n, 1.0 - credible.level_requested)?;
    Ok(ConfidenceReport {
        credible: credible.clone(),
        enlargement_radius: k_n,
        confidence_members,
        prior_mass_b: ball_prior_mass(n, k_n),
        coverage_lower_bound: bound.value,
        vacuous_flag: bound.vacuous,
        approximate: credible.approximate,
    })
}
