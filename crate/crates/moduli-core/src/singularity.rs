//! Reid–Tai ages of cyclic actions on tangent spaces.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{gcd, int, ratio, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SingularityType {
    Identity,
    Quasireflection,
    Senior,
    Junior,
}

impl core::fmt::Display for SingularityType {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            SingularityType::Identity => "identity",
            SingularityType::Quasireflection => "quasireflection",
            SingularityType::Senior => "senior",
            SingularityType::Junior => "junior",
        })
    }
}

/// `Σ ((u·a_i) mod m) / m` for the diagonal action with weights `ζ^{a_i}`.
pub fn age(exponents: &[u64], m: u64, u: u64) -> Result<Q> {
    if m == 0 {
        return Err(Error::OutOfRange("order must be positive".into()));
    }
    if gcd(u % m, m) != 1 && m > 1 {
        return Err(Error::NotCoprime { unit: u, order: m });
    }
    let sum: u64 = exponents.iter().map(|a| (u % m) * (a % m) % m).sum();
    Ok(ratio(sum as i64, m as i64))
}

/// Units of `Z/m`.
pub fn units(m: u64) -> Vec<u64> {
    if m == 1 {
        return alloc::vec![1];
    }
    (1..m).filter(|&u| gcd(u, m) == 1).collect()
}

/// Smallest age over all units, with the unit attaining it.
pub fn min_age(exponents: &[u64], m: u64) -> Result<(Q, u64)> {
    let mut best: Option<(Q, u64)> = None;
    for u in units(m) {
        let a = age(exponents, m, u)?;
        if best.as_ref().map_or(true, |(b, _)| a < *b) {
            best = Some((a, u));
        }
    }
    best.ok_or_else(|| Error::OutOfRange("no units".into()))
}

/// Reid–Tai type of the action: identity, quasireflection (a single
/// nontrivial weight), otherwise senior if every power has age at least 1.
pub fn classify(exponents: &[u64], m: u64) -> Result<SingularityType> {
    if m == 0 {
        return Err(Error::OutOfRange("order must be positive".into()));
    }
    let nontrivial = exponents.iter().filter(|&&a| a % m != 0).count();
    Ok(match nontrivial {
        0 => SingularityType::Identity,
        1 => SingularityType::Quasireflection,
        _ if min_age(exponents, m)?.0 >= int(1) => SingularityType::Senior,
        _ => SingularityType::Junior,
    })
}

/// Weights `k mod m`, `k = 2..2g`, of an order-`m` automorphism of a
/// hyperelliptic curve acting on the tangent space of `H_g`.
pub fn hyperelliptic_exponents(g: u32, m: u64) -> Vec<u64> {
    (2..=2 * u64::from(g)).map(|k| k % m).collect()
}

/// Weights of the hyperelliptic involution: it fixes every hyperelliptic
/// curve, so it acts trivially.
pub fn involution_exponents(g: u32) -> Vec<u64> {
    alloc::vec![0; 2 * g as usize - 1]
}

/// A cyclic action on the tangent space of `H_g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HyperellipticAction {
    Involution,
    Order(u64),
}

impl HyperellipticAction {
    pub fn order(self) -> u64 {
        match self {
            HyperellipticAction::Involution => 2,
            HyperellipticAction::Order(m) => m,
        }
    }

    pub fn exponents(self, g: u32) -> Vec<u64> {
        match self {
            HyperellipticAction::Involution => involution_exponents(g),
            HyperellipticAction::Order(m) => hyperelliptic_exponents(g, m),
        }
    }

    /// Expected type: the involution is the identity, order 2 in genus 2 is
    /// a quasireflection, everything else is senior.
    pub fn expected(self, g: u32) -> SingularityType {
        match (self, g) {
            (HyperellipticAction::Involution, _) => SingularityType::Identity,
            (HyperellipticAction::Order(2), 2) => SingularityType::Quasireflection,
            _ => SingularityType::Senior,
        }
    }
}

/// One classified action in a sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AgeRecord {
    pub g: u32,
    pub action: HyperellipticAction,
    pub found: SingularityType,
    pub expected: SingularityType,
    /// Smallest age over all units, with the unit; `None` for the identity.
    pub min_age: Option<(Q, u64)>,
}

/// Every action with `2 ≤ g ≤ g_max` and `2 ≤ m ≤ 2g+2`, plus the
/// involution in each genus.
pub fn hyperelliptic_sweep(g_max: u32) -> Result<Vec<AgeRecord>> {
    let mut out = Vec::new();
    for g in 2..=g_max {
        let actions = core::iter::once(HyperellipticAction::Involution)
            .chain((2..=2 * u64::from(g) + 2).map(HyperellipticAction::Order));
        for action in actions {
            let m = action.order();
            let e = action.exponents(g);
            let found = classify(&e, m)?;
            let min_age = if e.iter().all(|a| a.is_zero()) {
                None
            } else {
                Some(min_age(&e, m)?)
            };
            out.push(AgeRecord {
                g,
                action,
                found,
                expected: action.expected(g),
                min_age,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ages_of_small_actions() {
        assert_eq!(age(&[1, 1], 3, 1).unwrap(), ratio(2, 3));
        assert_eq!(age(&[1, 1], 3, 2).unwrap(), ratio(4, 3));
        assert_eq!(classify(&[1, 1], 3).unwrap(), SingularityType::Junior);
        assert_eq!(classify(&[1, 2], 3).unwrap(), SingularityType::Senior);
        assert_eq!(classify(&[0, 1, 0], 2).unwrap(), SingularityType::Quasireflection);
        assert_eq!(classify(&[0, 0], 5).unwrap(), SingularityType::Identity);
        assert_eq!(age(&[1], 4, 2), Err(Error::NotCoprime { unit: 2, order: 4 }));
    }

    #[test]
    fn hyperelliptic_involution_and_genus_two() {
        assert_eq!(hyperelliptic_exponents(2, 2), [0, 1, 0]);
        assert_eq!(
            classify(&hyperelliptic_exponents(2, 2), 2).unwrap(),
            SingularityType::Quasireflection
        );
        assert_eq!(
            classify(&hyperelliptic_exponents(3, 2), 2).unwrap(),
            SingularityType::Senior
        );
        // weights (2, 3, 0) mod 4: the unit 3 gives age 3/4
        assert_eq!(min_age(&hyperelliptic_exponents(2, 4), 4).unwrap(), (ratio(3, 4), 3));
        assert_eq!(
            classify(&involution_exponents(5), 2).unwrap(),
            SingularityType::Identity
        );
    }
}
