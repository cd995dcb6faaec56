//! Effectivity certificates.
//!
//! For a canonical class `K`, generators `G_1..G_m` and a set of covered
//! coordinates, we look for `x_j ≥ 0` and `ε ≥ 0` with
//! `K − εψ − Σ x_j G_j ≥ 0` on every covered coordinate, maximizing `ε`.
//! The search is exact Fourier–Motzkin elimination of the multipliers; the
//! remaining one-variable system gives the supremum of `ε`, and the
//! multipliers are recovered by back-substitution.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::basis::{canonicalize, orbit_basis, BasisSymbol, DivisorClass, SpaceContext};
use crate::catalog::{psi_class, Generator, Mode};
use crate::error::{Error, Result};
use crate::rational::{int, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Le,
    Lt,
}

/// `Σ coeffs[j]·x_j (≤ or <) bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub coord: String,
    pub coeffs: Vec<Q>,
    pub rel: Relation,
    pub bound: Q,
}

/// Linear system over nonnegative variables; the last variable is `ε`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InequalitySystem {
    pub variables: Vec<String>,
    pub rows: Vec<Row>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    Infeasible,
    Effective,
    GeneralType,
}

impl core::fmt::Display for Verdict {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Verdict::Infeasible => "Infeasible",
            Verdict::Effective => "Effective",
            Verdict::GeneralType => "GeneralType",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub verdict: Verdict,
    /// Supremum of `ε`; `None` when unbounded or infeasible.
    pub sup: Option<Q>,
    pub attained: bool,
    /// A feasible point (multipliers then `ε`), `ε` as large as the
    /// supremum allows.
    pub point: Option<Vec<Q>>,
}

#[derive(Clone, Debug)]
struct FmRow {
    a: Vec<Q>,
    b: Q,
    strict: bool,
    origin: BTreeSet<usize>,
}

#[derive(Clone, Debug)]
struct Bound {
    value: Q,
    strict: bool,
}

fn tighter_upper(cur: &Option<Bound>, v: &Q, strict: bool) -> bool {
    match cur {
        None => true,
        Some(c) => *v < c.value || (*v == c.value && strict && !c.strict),
    }
}

fn tighter_lower(cur: &Option<Bound>, v: &Q, strict: bool) -> bool {
    match cur {
        None => true,
        Some(c) => *v > c.value || (*v == c.value && strict && !c.strict),
    }
}

/// Removes constant rows (reporting contradictions) and parallel duplicates.
fn normalize(rows: Vec<FmRow>) -> Option<Vec<FmRow>> {
    let mut by_dir: BTreeMap<Vec<Q>, FmRow> = BTreeMap::new();
    for r in rows {
        let Some(piv) = r.a.iter().find(|x| !x.is_zero()).map(|x| x.abs()) else {
            if r.b.is_negative() || (r.b.is_zero() && r.strict) {
                return None;
            }
            continue;
        };
        let key: Vec<Q> = r.a.iter().map(|x| x / &piv).collect();
        let b = &r.b / &piv;
        let replace = match by_dir.get(&key) {
            None => true,
            Some(old) => b < old.b || (b == old.b && r.strict && !old.strict),
        };
        if replace {
            by_dir.insert(
                key.clone(),
                FmRow {
                    a: key,
                    b,
                    strict: r.strict,
                    origin: r.origin,
                },
            );
        }
    }
    Some(by_dir.into_values().collect())
}

fn eliminate(rows: &[FmRow], j: usize, prune_at: Option<usize>) -> Vec<FmRow> {
    let mut out: Vec<FmRow> = rows.iter().filter(|r| r.a[j].is_zero()).cloned().collect();
    let pos: Vec<&FmRow> = rows.iter().filter(|r| r.a[j].is_positive()).collect();
    let neg: Vec<&FmRow> = rows.iter().filter(|r| r.a[j].is_negative()).collect();
    for p in &pos {
        for q in &neg {
            let origin: BTreeSet<usize> = p.origin.union(&q.origin).copied().collect();
            if prune_at.is_some_and(|k| origin.len() > k) {
                continue;
            }
            let (sp, sq) = (-&q.a[j], p.a[j].clone());
            let a = p.a.iter().zip(&q.a).map(|(x, y)| x * &sp + y * &sq).collect();
            out.push(FmRow {
                a,
                b: &p.b * &sp + &q.b * &sq,
                strict: p.strict || q.strict,
                origin,
            });
        }
    }
    out
}

/// Exact supremum of the last variable over the system.
pub fn solve(sys: &InequalitySystem) -> Solution {
    let infeasible = Solution {
        verdict: Verdict::Infeasible,
        sup: None,
        attained: false,
        point: None,
    };
    let nv = sys.variables.len();
    if nv == 0 {
        return infeasible;
    }
    let mut rows: Vec<FmRow> = sys
        .rows
        .iter()
        .enumerate()
        .map(|(k, r)| FmRow {
            a: r.coeffs.clone(),
            b: r.bound.clone(),
            strict: r.rel == Relation::Lt,
            origin: [k].into_iter().collect(),
        })
        .collect();
    for j in 0..nv {
        let mut a = vec![Q::zero(); nv];
        a[j] = -Q::one();
        rows.push(FmRow {
            a,
            b: Q::zero(),
            strict: false,
            origin: [sys.rows.len() + j].into_iter().collect(),
        });
    }
    // Chernikov's rule is only used for non-strict systems.
    let prune = rows.iter().all(|r| !r.strict);
    let Some(mut rows) = normalize(rows) else {
        return infeasible;
    };
    let mut stages = Vec::with_capacity(nv - 1);
    for j in 0..nv - 1 {
        let next = eliminate(&rows, j, prune.then_some(j + 2));
        stages.push(rows);
        let Some(r) = normalize(next) else { return infeasible };
        rows = r;
    }
    let e = nv - 1;
    let (mut ub, mut lb): (Option<Bound>, Option<Bound>) = (None, None);
    for r in &rows {
        let v = &r.b / &r.a[e];
        if r.a[e].is_positive() {
            if tighter_upper(&ub, &v, r.strict) {
                ub = Some(Bound {
                    value: v,
                    strict: r.strict,
                });
            }
        } else if tighter_lower(&lb, &v, r.strict) {
            lb = Some(Bound {
                value: v,
                strict: r.strict,
            });
        }
    }
    let lb = lb.unwrap_or(Bound {
        value: Q::zero(),
        strict: false,
    });
    if let Some(u) = &ub {
        if u.value < lb.value || (u.value == lb.value && (u.strict || lb.strict)) {
            return infeasible;
        }
    }
    let eps = pick_high(&lb, &ub);
    let mut point = vec![Q::zero(); nv];
    point[e] = eps;
    for j in (0..e).rev() {
        let (mut lo, mut hi): (Option<Bound>, Option<Bound>) = (None, None);
        for r in &stages[j] {
            if r.a[j].is_zero() {
                continue;
            }
            let rest: Q = (j + 1..nv).map(|k| &r.a[k] * &point[k]).sum();
            let v = (&r.b - rest) / &r.a[j];
            if r.a[j].is_positive() {
                if tighter_upper(&hi, &v, r.strict) {
                    hi = Some(Bound {
                        value: v,
                        strict: r.strict,
                    });
                }
            } else if tighter_lower(&lo, &v, r.strict) {
                lo = Some(Bound {
                    value: v,
                    strict: r.strict,
                });
            }
        }
        point[j] = pick_low(&lo, &hi);
    }
    let (verdict, sup, attained) = match ub {
        None => (Verdict::GeneralType, None, false),
        Some(u) if u.value.is_positive() => (Verdict::GeneralType, Some(u.value), !u.strict),
        Some(u) => (Verdict::Effective, Some(u.value), true),
    };
    Solution {
        verdict,
        sup,
        attained,
        point: Some(point),
    }
}

/// Smallest admissible value, or a midpoint when the lower bound is strict.
fn pick_low(lo: &Option<Bound>, hi: &Option<Bound>) -> Q {
    match (lo, hi) {
        (Some(l), _) if !l.strict => l.value.clone(),
        (Some(l), Some(h)) => (&l.value + &h.value) / int(2),
        (Some(l), None) => &l.value + int(1),
        (None, Some(h)) if h.strict => &h.value - int(1),
        (None, Some(h)) => h.value.clone(),
        (None, None) => Q::zero(),
    }
}

/// Largest admissible value, or a midpoint when the upper bound is strict.
fn pick_high(lo: &Bound, hi: &Option<Bound>) -> Q {
    match hi {
        Some(h) if !h.strict => h.value.clone(),
        Some(h) => (&lo.value + &h.value) / int(2),
        None => &lo.value + int(1),
    }
}

/// Which coordinates the residual must be nonnegative on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coords {
    /// Every basis coordinate of the space.
    All,
    /// Coordinates known for every generator.
    Known,
    Only(BTreeSet<BasisSymbol>),
    AllExcept(BTreeSet<BasisSymbol>),
}

fn resolve(ctx: &SpaceContext, gens: &[Generator], coords: &Coords) -> Result<Vec<BasisSymbol>> {
    let basis = || orbit_basis(ctx);
    let canon = |s: &BasisSymbol| -> Result<BasisSymbol> {
        canonicalize(s, ctx)?.ok_or_else(|| Error::InvalidSymbol {
            sym: s.to_string(),
            ctx: ctx.to_string(),
        })
    };
    let out: Vec<BasisSymbol> = match coords {
        Coords::All => basis(),
        Coords::Known => basis()
            .into_iter()
            .filter(|s| gens.iter().all(|g| g.knows(s)))
            .collect(),
        Coords::Only(set) => {
            let set: BTreeSet<BasisSymbol> = set.iter().map(canon).collect::<Result<_>>()?;
            set.into_iter().collect()
        }
        Coords::AllExcept(set) => {
            let set: BTreeSet<BasisSymbol> = set.iter().map(canon).collect::<Result<_>>()?;
            basis().into_iter().filter(|s| !set.contains(s)).collect()
        }
    };
    Ok(out)
}

fn check_inputs(k: &DivisorClass, gens: &[Generator], coords: &[BasisSymbol]) -> Result<()> {
    for g in gens {
        if g.ctx() != k.ctx() {
            return Err(Error::MixedContexts);
        }
        if let Some(c) = coords.iter().find(|c| !g.knows(c)) {
            return Err(Error::UnknownCoordinate {
                generator: g.name.clone(),
                coord: c.to_string(),
            });
        }
    }
    Ok(())
}

/// One row per covered coordinate: `Σ x_j G_j[c] + ε ψ[c] ≤ K[c]`.
pub fn build_system(k: &DivisorClass, gens: &[Generator], coords: &Coords) -> Result<InequalitySystem> {
    let cover = resolve(k.ctx(), gens, coords)?;
    check_inputs(k, gens, &cover)?;
    let psi = psi_class(k.ctx())?;
    let mut variables: Vec<String> = gens.iter().map(|g| g.name.clone()).collect();
    variables.push("epsilon".into());
    let rows = cover
        .iter()
        .map(|c| {
            let mut coeffs: Vec<Q> = gens.iter().map(|g| g.class.coeff(c)).collect();
            coeffs.push(psi.coeff(c));
            Row {
                coord: c.to_string(),
                coeffs,
                rel: Relation::Le,
                bound: k.coeff(c),
            }
        })
        .collect();
    Ok(InequalitySystem { variables, rows })
}

/// A decomposition `K = εψ + Σ x_j G_j + R` with `R ≥ 0` on the covered
/// coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub context: SpaceContext,
    pub mode: Mode,
    pub coordinates: Vec<BasisSymbol>,
    pub generators: Vec<String>,
    pub multipliers: Vec<Q>,
    pub epsilon: Q,
    pub residual: DivisorClass,
    pub verdict: Verdict,
    /// Supremum of `ε` over all certificates with these generators.
    pub sup_epsilon: Option<Q>,
    pub assumptions: Vec<String>,
}

/// `K − εψ − Σ x_j G_j` on the listed coordinates.
pub fn residual_on(
    k: &DivisorClass,
    gens: &[Generator],
    x: &[Q],
    eps: &Q,
    coords: &[BasisSymbol],
) -> Result<DivisorClass> {
    let psi = psi_class(k.ctx())?;
    let mut out = DivisorClass::zero(k.ctx());
    for c in coords {
        let mut v = k.coeff(c) - eps * psi.coeff(c);
        for (g, xj) in gens.iter().zip(x) {
            v -= xj * g.class.coeff(c);
        }
        out.add_term(c, &v)?;
    }
    Ok(out)
}

/// Maximizes `ε`; fails only on malformed input. An infeasible system yields
/// a certificate with verdict `Infeasible` and no multipliers.
pub fn certify(k: &DivisorClass, gens: &[Generator], coords: &Coords) -> Result<Certificate> {
    let cover = resolve(k.ctx(), gens, coords)?;
    let sys = build_system(k, gens, &Coords::Only(cover.iter().cloned().collect()))?;
    let sol = solve(&sys);
    let mode = if gens.iter().all(|g| g.mode() == Mode::Full) && *coords == Coords::All {
        Mode::Full
    } else {
        Mode::Reduced
    };
    let mut assumptions: Vec<String> = Vec::new();
    for g in gens {
        for a in &g.assumptions {
            let line = format!("{}: {a}", g.name);
            if !assumptions.contains(&line) {
                assumptions.push(line);
            }
        }
    }
    let (multipliers, epsilon, residual) = match &sol.point {
        Some(p) => {
            let (x, e) = p.split_at(gens.len());
            (x.to_vec(), e[0].clone(), residual_on(k, gens, x, &e[0], &cover)?)
        }
        None => (Vec::new(), Q::zero(), DivisorClass::zero(k.ctx())),
    };
    Ok(Certificate {
        context: k.ctx().clone(),
        mode,
        coordinates: cover,
        generators: gens.iter().map(|g| g.name.clone()).collect(),
        multipliers,
        epsilon,
        residual,
        verdict: sol.verdict,
        sup_epsilon: sol.sup,
        assumptions,
    })
}

/// Recomputes the residual from `K` and the generators and checks every
/// claim of the certificate.
pub fn verify(cert: &Certificate, k: &DivisorClass, gens: &[Generator]) -> bool {
    if cert.verdict == Verdict::Infeasible {
        return false;
    }
    if k.ctx() != &cert.context
        || gens.len() != cert.generators.len()
        || cert.multipliers.len() != gens.len()
        || gens.iter().zip(&cert.generators).any(|(g, n)| &g.name != n)
        || check_inputs(k, gens, &cert.coordinates).is_err()
    {
        return false;
    }
    if cert.multipliers.iter().any(|x| x.is_negative()) || cert.epsilon.is_negative() {
        return false;
    }
    match cert.verdict {
        Verdict::GeneralType if !cert.epsilon.is_positive() => return false,
        Verdict::Effective if !cert.epsilon.is_zero() => return false,
        _ => {}
    }
    let Ok(r) = residual_on(k, gens, &cert.multipliers, &cert.epsilon, &cert.coordinates) else {
        return false;
    };
    r == cert.residual && cert.coordinates.iter().all(|c| !r.coeff(c).is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn row(coeffs: &[i64], rel: Relation, bound: i64) -> Row {
        Row {
            coord: String::new(),
            coeffs: coeffs.iter().map(|&c| int(c)).collect(),
            rel,
            bound: int(bound),
        }
    }

    fn system(nv: usize, rows: Vec<Row>) -> InequalitySystem {
        InequalitySystem {
            variables: (0..nv).map(|i| format!("x{i}")).collect(),
            rows,
        }
    }

    #[test]
    fn one_variable_bounds() {
        let s = solve(&system(1, vec![row(&[2], Relation::Le, 3)]));
        assert_eq!(s.sup, Some(ratio(3, 2)));
        assert!(s.attained);
        assert_eq!(s.verdict, Verdict::GeneralType);
        let s = solve(&system(1, vec![row(&[1], Relation::Le, 0)]));
        assert_eq!(s.verdict, Verdict::Effective);
        let s = solve(&system(1, vec![row(&[1], Relation::Lt, 0)]));
        assert_eq!(s.verdict, Verdict::Infeasible);
        let s = solve(&system(1, vec![row(&[-1], Relation::Le, -2)]));
        assert_eq!(s.sup, None);
        assert_eq!(s.verdict, Verdict::GeneralType);
    }

    #[test]
    fn two_variables_with_back_substitution() {
        // x + e <= 4, -x <= -1, e - x <= 1  => sup e = 5/2 at x = 3/2
        let sys = system(
            2,
            vec![
                row(&[1, 1], Relation::Le, 4),
                row(&[-1, 0], Relation::Le, -1),
                row(&[-1, 1], Relation::Le, 1),
            ],
        );
        let s = solve(&sys);
        assert_eq!(s.sup, Some(ratio(5, 2)));
        assert_eq!(s.point, Some(vec![ratio(3, 2), ratio(5, 2)]));
    }

    #[test]
    fn strict_supremum_not_attained() {
        // x + e < 2, x >= 1
        let sys = system(2, vec![row(&[1, 1], Relation::Lt, 2), row(&[-1, 0], Relation::Le, -1)]);
        let s = solve(&sys);
        assert_eq!(s.sup, Some(int(1)));
        assert!(!s.attained);
        let p = s.point.unwrap();
        assert!(&p[0] + &p[1] < int(2) && p[0] >= int(1));
    }

    #[test]
    fn contradiction_is_infeasible() {
        let sys = system(2, vec![row(&[1, 0], Relation::Le, 1), row(&[-1, 0], Relation::Le, -2)]);
        assert_eq!(solve(&sys).verdict, Verdict::Infeasible);
    }
}
