//! Slope inequalities, the Noether formula and Bogomolov radii for a
//! semistable fibration of genus `g` described by `deg f_*ω` and its node
//! counts `δ_0, ..., δ_{g/2}`.
//!
//! Radii are kept as exact squares.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{int, Rational};

/// Numerical data of a fibration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibrationStats {
    pub genus: u64,
    /// `deg f_*(ω_{X/Y})`
    pub lambda_deg: Rational,
    /// `δ_0 .. δ_{g/2}`
    pub delta: Vec<Rational>,
    pub hyperelliptic: bool,
    pub smooth: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundWarning {
    /// The admissible self-intersection is not positive, so no radius bound
    /// follows.
    NoBound { adm: Rational },
    /// A smooth fibration was given nonzero node counts.
    SmoothWithNodes,
    NegativeDelta { index: usize },
}

impl fmt::Display for BoundWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundWarning::NoBound { adm } => {
                write!(f, "admissible self-intersection {adm} is not positive; no bound")
            }
            BoundWarning::SmoothWithNodes => write!(f, "smooth fibration with nonzero delta"),
            BoundWarning::NegativeDelta { index } => write!(f, "delta_{index} is negative"),
        }
    }
}

impl FibrationStats {
    pub fn new(genus: u64, lambda_deg: Rational, delta: Vec<Rational>) -> Result<Self> {
        check_delta(genus, &delta)?;
        Ok(FibrationStats {
            genus,
            lambda_deg,
            delta,
            hyperelliptic: false,
            smooth: false,
        })
    }

    pub fn warnings(&self) -> Vec<BoundWarning> {
        let mut out: Vec<BoundWarning> = self
            .delta
            .iter()
            .enumerate()
            .filter(|(_, d)| d.is_negative())
            .map(|(index, _)| BoundWarning::NegativeDelta { index })
            .collect();
        if self.smooth && self.delta.iter().any(|d| !d.is_zero()) {
            out.push(BoundWarning::SmoothWithNodes);
        }
        out
    }
}

fn check_delta(genus: u64, delta: &[Rational]) -> Result<()> {
    if genus < 2 {
        return Err(Error::GenusTooSmall(genus));
    }
    let expected = genus as usize / 2 + 1;
    if delta.len() != expected {
        return Err(Error::SizeMismatch {
            expected,
            actual: delta.len(),
        });
    }
    Ok(())
}

fn g_of(genus: u64) -> Rational {
    int(genus as i64)
}

/// `Σ_i coeff(i) δ_i`
fn weighted(genus: u64, delta: &[Rational], coeff: impl Fn(&Rational, &Rational) -> Rational) -> Result<Rational> {
    check_delta(genus, delta)?;
    let g = g_of(genus);
    Ok(delta
        .iter()
        .enumerate()
        .map(|(i, d)| coeff(&g, &int(i as i64)) * d)
        .sum())
}

/// `g δ_0 + Σ 4i(g-i) δ_i`
pub fn slope_sharp_rhs(genus: u64, delta: &[Rational]) -> Result<Rational> {
    weighted(genus, delta, |g, i| {
        if i.is_zero() {
            g.clone()
        } else {
            int(4) * i * (g - i)
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InequalityCheck {
    pub lhs: Rational,
    pub rhs: Rational,
    pub slack: Rational,
    pub holds: bool,
}

impl InequalityCheck {
    fn new(lhs: Rational, rhs: Rational) -> Self {
        let slack = &lhs - &rhs;
        InequalityCheck {
            holds: !slack.is_negative(),
            lhs,
            rhs,
            slack,
        }
    }
}

fn slope_lhs(stats: &FibrationStats) -> Rational {
    int(8 * stats.genus as i64 + 4) * &stats.lambda_deg
}

/// `(8g+4) deg f_*ω ≥ g δ_0 + Σ 4i(g-i) δ_i`
pub fn slope_check(stats: &FibrationStats) -> Result<InequalityCheck> {
    let rhs = slope_sharp_rhs(stats.genus, &stats.delta)?;
    Ok(InequalityCheck::new(slope_lhs(stats), rhs))
}

/// `(8g+4) deg f_*ω ≥ g δ`
pub fn ch_xiao_check(stats: &FibrationStats) -> Result<InequalityCheck> {
    check_delta(stats.genus, &stats.delta)?;
    let total: Rational = stats.delta.iter().sum();
    Ok(InequalityCheck::new(slope_lhs(stats), g_of(stats.genus) * total))
}

/// Noether: `ω² = 12 deg f_*ω - δ`
pub fn noether_omega_sq(genus: u64, lambda_deg: &Rational, delta: &[Rational]) -> Result<Rational> {
    check_delta(genus, delta)?;
    let total: Rational = delta.iter().sum();
    Ok(int(12) * lambda_deg - total)
}

/// Lower bound for `ω²` from the sharp slope inequality and Noether:
/// `(g-1)/(2g+1) δ_0 + Σ (12i(g-i)/(2g+1) - 1) δ_i`.
pub fn omega_sq_lower_sharp(genus: u64, delta: &[Rational]) -> Result<Rational> {
    weighted(genus, delta, |g, i| {
        let denom = int(2) * g + int(1);
        if i.is_zero() {
            (g - int(1)) / denom
        } else {
            int(12) * i * (g - i) / denom - int(1)
        }
    })
}

/// `(g-1)/(3g) δ_0 + Σ (4i(g-i)/g - 1) δ_i`
pub fn omega_sq_lower_weak(genus: u64, delta: &[Rational]) -> Result<Rational> {
    weighted(genus, delta, |g, i| {
        if i.is_zero() {
            (g - int(1)) / (int(3) * g)
        } else {
            int(4) * i * (g - i) / g - int(1)
        }
    })
}

/// `Σ_y e_y` over chain fibers; the same expression as
/// [`omega_sq_lower_weak`].
pub fn total_e(genus: u64, delta: &[Rational]) -> Result<Rational> {
    omega_sq_lower_weak(genus, delta)
}

/// `(ω^a · ω^a)_a = ω² - Σ e_y`
pub fn admissible_self_intersection(omega_sq: &Rational, total_e: &Rational) -> Rational {
    omega_sq - total_e
}

/// `(g-1) (ω^a · ω^a)_a`, or 0 with a warning when `adm ≤ 0`.
pub fn bogomolov_radius_sq(genus: u64, adm: &Rational) -> (Rational, Option<BoundWarning>) {
    if adm.is_positive() {
        ((g_of(genus) - int(1)) * adm, None)
    } else {
        (Rational::zero(), Some(BoundWarning::NoBound { adm: adm.clone() }))
    }
}

/// Applicability hypotheses of the radius bound, asserted by the caller.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RadiusHypotheses {
    pub not_smooth: bool,
    pub chain_fibers: bool,
    pub hyperelliptic: bool,
    pub one_positive_node: bool,
}

impl RadiusHypotheses {
    pub fn satisfied(&self) -> bool {
        self.not_smooth && self.chain_fibers && (self.hyperelliptic || self.one_positive_node)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadiusBound {
    pub radius_sq: Rational,
    pub hypotheses: RadiusHypotheses,
}

/// `(g-1)²/(g(2g+1)) ((g-1)/3 δ_0 + Σ 4i(g-i) δ_i)`
pub fn radius_sq_closed_form(genus: u64, delta: &[Rational], hypotheses: RadiusHypotheses) -> Result<RadiusBound> {
    let inner = weighted(genus, delta, |g, i| {
        if i.is_zero() {
            (g - int(1)) / int(3)
        } else {
            int(4) * i * (g - i)
        }
    })?;
    let g = g_of(genus);
    let gm1 = &g - int(1);
    Ok(RadiusBound {
        radius_sq: &gm1 * &gm1 / (&g * (int(2) * &g + int(1))) * inner,
        hypotheses,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReferenceRegime {
    /// Smooth fibration: `12(g-1)`.
    Smooth,
    /// Stable model with irreducible fibers: `(g-1)³/(3g(2g+1)) δ_0`.
    Irreducible,
    /// Genus 2: `2/135 δ_0 + 2/5 δ_1`.
    GenusTwo,
}

/// Picks the regime from the flags: smooth first, then irreducible, then
/// genus 2.
pub fn select_regime(stats: &FibrationStats, irreducible: bool) -> Result<ReferenceRegime> {
    if stats.smooth {
        Ok(ReferenceRegime::Smooth)
    } else if irreducible {
        Ok(ReferenceRegime::Irreducible)
    } else if stats.genus == 2 {
        Ok(ReferenceRegime::GenusTwo)
    } else {
        Err(Error::RegimeUnspecified)
    }
}

/// Squared radius of the earlier known bounds.
pub fn reference_radius_sq(stats: &FibrationStats, regime: ReferenceRegime) -> Result<Rational> {
    check_delta(stats.genus, &stats.delta)?;
    let g = g_of(stats.genus);
    let gm1 = &g - int(1);
    match regime {
        ReferenceRegime::Smooth => Ok(int(12) * gm1),
        ReferenceRegime::Irreducible => Ok(&gm1 * &gm1 * &gm1 / (int(3) * &g * (int(2) * &g + int(1))) * &stats.delta[0]),
        ReferenceRegime::GenusTwo => {
            if stats.genus != 2 {
                return Err(Error::RegimeUnspecified);
            }
            Ok(Rational::new(2.into(), 135.into()) * &stats.delta[0]
                + Rational::new(2.into(), 5.into()) * &stats.delta[1])
        }
    }
}
