//! Closed forms for `e` and diagonal Green values under one-point sums,
//! circle attachment, segments and chains.
//!
//! Everything here takes plain scalars, so these functions never touch the
//! graph solver and can be used to check it.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{int, Rational};

fn not_minus_two(d: &Rational) -> Result<()> {
    if *d == int(-2) {
        Err(Error::DegreeMinusTwo)
    } else {
        Ok(())
    }
}

/// `e(G1 ∨ G2, D1 + D2)` from the data of the two summands, where `g1_oo`,
/// `g2_oo` are the Green values of each summand at the joining point.
pub fn join_e(
    e1: &Rational,
    e2: &Rational,
    d1: &Rational,
    d2: &Rational,
    g1_oo: &Rational,
    g2_oo: &Rational,
) -> Result<Rational> {
    not_minus_two(d1)?;
    not_minus_two(d2)?;
    let total = d1 + d2 + int(2);
    not_minus_two(&(d1 + d2))?;
    let two = int(2);
    let cross = &two * d2 * (d1 + &two) * g1_oo + &two * d1 * (d2 + &two) * g2_oo;
    Ok(e1 + e2 + cross / total)
}

/// `g_(G,D)(P, P)` for `P` in the second summand `G2` of `G = G1 ∨ G2`.
/// `r_op` is `r_{G2}(O, P)`; swap the roles of the summands for `P ∈ G1`.
pub fn join_green_diag(
    d1: &Rational,
    d2: &Rational,
    r_op: &Rational,
    g2_pp: &Rational,
    g2_oo: &Rational,
    g1_oo: &Rational,
) -> Result<Rational> {
    not_minus_two(d1)?;
    not_minus_two(d2)?;
    not_minus_two(&(d1 + d2))?;
    let total = d1 + d2 + int(2);
    let total_sq = &total * &total;
    let d1p2 = d1 + int(2);
    let d2p2 = d2 + int(2);
    Ok(d1 / &total * r_op + &d2p2 / &total * g2_pp - d1 * &d2p2 / &total_sq * g2_oo
        + &d1p2 * &d1p2 / &total_sq * g1_oo)
}

/// `e(G ∨ C, D)` after wedging a circle of length `l` onto `G`.
pub fn attach_circle_e(e_base: &Rational, deg: &Rational, l: &Rational) -> Result<Rational> {
    not_minus_two(deg)?;
    Ok(e_base + deg * l / (int(3) * (deg + int(2))))
}

/// Invariants of a segment of length `l` with `D = (2a-1)P + (2b-1)Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentInvariants {
    pub e: Rational,
    pub g_pp: Rational,
    pub g_qq: Rational,
}

pub fn segment_invariants(a: &Rational, b: &Rational, l: &Rational) -> Result<SegmentInvariants> {
    let s = a + b;
    if s.is_zero() {
        return Err(Error::DegenerateDivisor);
    }
    if !l.is_positive() {
        return Err(Error::NonpositiveLength(crate::graph::EdgeId(0)));
    }
    let s2 = &s * &s;
    Ok(SegmentInvariants {
        e: (int(4) * a * b / &s - int(1)) * l,
        g_pp: b * b / &s2 * l,
        g_qq: a * a / &s2 * l,
    })
}

fn check_chain(lengths: &[Rational], a: &[Rational]) -> Result<()> {
    if a.len() != lengths.len() + 1 {
        return Err(Error::SizeMismatch {
            expected: lengths.len() + 1,
            actual: a.len(),
        });
    }
    if a.iter().any(|x| !x.is_positive()) {
        return Err(Error::NonpositiveCoefficient);
    }
    if let Some(i) = lengths.iter().position(|l| !l.is_positive()) {
        return Err(Error::NonpositiveLength(crate::graph::EdgeId(i)));
    }
    Ok(())
}

/// `e` of the chain `P0 - P1 - ... - Pn` with edge lengths `lengths` and
/// `D = (2a0-1)P0 + Σ 2a_i P_i + (2a_n-1)P_n`.
pub fn chain_e(lengths: &[Rational], a: &[Rational]) -> Result<Rational> {
    check_chain(lengths, a)?;
    let total: Rational = a.iter().sum();
    let mut prefix = Rational::zero();
    let mut e = Rational::zero();
    for (i, l) in lengths.iter().enumerate() {
        prefix += &a[i];
        let suffix = &total - &prefix;
        e += (int(4) * &prefix * suffix / &total - int(1)) * l;
    }
    Ok(e)
}

/// `t_n = g(P_n, P_n)` on the same chain.
pub fn chain_endpoint_green(lengths: &[Rational], a: &[Rational]) -> Result<Rational> {
    check_chain(lengths, a)?;
    let total: Rational = a.iter().sum();
    let mut prefix = Rational::zero();
    let mut acc = Rational::zero();
    for (i, l) in lengths.iter().enumerate() {
        prefix += &a[i];
        acc += &prefix * &prefix * l;
    }
    Ok(acc / (&total * &total))
}

/// One step of the chain recursion: appends an edge of length `l_next`
/// ending at a point of weight `a_next` to a chain whose weights sum to
/// `a_prefix_sum`, with `e_n = e(G_n, D_n)` and `t_n = g(P_n, P_n)`.
/// Returns `(e_{n+1}, t_{n+1})`.
pub fn chain_recursion(
    e_n: &Rational,
    t_n: &Rational,
    a_prefix_sum: &Rational,
    a_next: &Rational,
    l_next: &Rational,
) -> Result<(Rational, Rational)> {
    if !a_prefix_sum.is_positive() || !a_next.is_positive() {
        return Err(Error::NonpositiveCoefficient);
    }
    if !l_next.is_positive() {
        return Err(Error::NonpositiveLength(crate::graph::EdgeId(0)));
    }
    let total = a_prefix_sum + a_next;
    let ratio = a_prefix_sum / &total;
    let t_next = &ratio * &ratio * (t_n + l_next);
    let weight = int(4) * a_next * a_prefix_sum / &total;
    let e_next = e_n + &weight * t_n + (weight - int(1)) * l_next;
    Ok((e_next, t_next))
}

/// Folds [`chain_recursion`] from the single point `(e_0, t_0) = (0, 0)`.
pub fn chain_by_recursion(lengths: &[Rational], a: &[Rational]) -> Result<(Rational, Rational)> {
    check_chain(lengths, a)?;
    let mut state = (Rational::zero(), Rational::zero());
    let mut prefix = a[0].clone();
    for (i, l) in lengths.iter().enumerate() {
        state = chain_recursion(&state.0, &state.1, &prefix, &a[i + 1], l)?;
        prefix += &a[i + 1];
    }
    Ok(state)
}
