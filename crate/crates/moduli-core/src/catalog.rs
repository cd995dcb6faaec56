//! Canonical classes and the effective generators used to decompose them.
//!
//! Every generator records which coordinates of its class are actually known.
//! A generator with `known == None` is fully determined; otherwise only the
//! listed coordinates may be used and the remaining coefficients are covered
//! by the recorded dominance assumptions.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::basis::{orbit_basis, BasisSymbol, DivisorClass, LabelSet, Level, SpaceContext, SpaceKind, MAX_LABELS};
use crate::error::{Error, Result};
use crate::maps::{glue_pullback_on, hyperelliptic_restrict, omega_to_psi, pullback_from_mg_on};
use crate::rational::{binom_q, int, is_prime, ratio, tri, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Full,
    Reduced,
}

impl core::fmt::Display for Mode {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Mode::Full => "full",
            Mode::Reduced => "reduced",
        })
    }
}

/// An effective divisor class together with what is known about it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub class: DivisorClass,
    /// Coordinates with known coefficients; `None` means all of them.
    pub known: Option<BTreeSet<BasisSymbol>>,
    pub assumptions: Vec<String>,
    pub citation: String,
}

impl Generator {
    pub fn full(name: &str, class: DivisorClass, citation: &str) -> Self {
        Generator {
            name: name.into(),
            class,
            known: None,
            assumptions: Vec::new(),
            citation: citation.into(),
        }
    }

    pub fn reduced(
        name: &str,
        class: DivisorClass,
        known: BTreeSet<BasisSymbol>,
        assumption: &str,
        citation: &str,
    ) -> Self {
        Generator {
            name: name.into(),
            class,
            known: Some(known),
            assumptions: vec![assumption.into()],
            citation: citation.into(),
        }
    }

    pub fn mode(&self) -> Mode {
        if self.known.is_some() {
            Mode::Reduced
        } else {
            Mode::Full
        }
    }

    pub fn knows(&self, sym: &BasisSymbol) -> bool {
        self.known.as_ref().map_or(true, |k| k.contains(sym))
    }

    pub fn ctx(&self) -> &SpaceContext {
        self.class.ctx()
    }

    /// Same generator scaled by a positive rational.
    pub fn scaled(&self, k: &Q) -> Self {
        Generator {
            class: self.class.scale(k),
            ..self.clone()
        }
    }

    pub fn renamed(mut self, name: &str) -> Self {
        self.name = name.into();
        self
    }
}

/// One row of the generator catalog, as printed by `catalog list`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub context: &'static str,
    pub validity: &'static str,
    pub mode: Mode,
    pub citation: &'static str,
}

pub fn catalog_entries() -> Vec<CatalogEntry> {
    let e = |name, context, validity, mode, citation| CatalogEntry {
        name,
        context,
        validity,
        mode,
        citation,
    };
    vec![
        e(
            "K",
            "any",
            "coarse pointed: g+n >= 4; hyperelliptic coarse: n != 1",
            Mode::Full,
            "canonical class",
        ),
        e("BN", "M_g", "g+1 composite", Mode::Full, "Brill-Noether divisor"),
        e(
            "B",
            "pointed, nodal, partition",
            "g+1 composite",
            Mode::Full,
            "BN pulled back by forgetting points",
        ),
        e(
            "D",
            "nodal",
            "g+n+1 composite",
            Mode::Full,
            "BN on M_{g+n} pulled back by gluing",
        ),
        e("GP", "M_g", "g even", Mode::Reduced, "Gieseker-Petri divisor"),
        e(
            "E",
            "pointed, nodal, partition",
            "g even",
            Mode::Reduced,
            "GP pulled back by forgetting points",
        ),
        e(
            "F",
            "nodal",
            "g+n even",
            Mode::Reduced,
            "GP on M_{g+n} pulled back by gluing",
        ),
        e(
            "logan",
            "pointed",
            "weights >= 1 summing to g",
            Mode::Reduced,
            "pencil through a weighted divisor",
        ),
        e(
            "W",
            "pointed, nodal, partition, hyperelliptic",
            "n >= 1; full when n >= g",
            Mode::Full,
            "symmetrized Weierstrass-type divisor",
        ),
        e(
            "U",
            "nodal, partition",
            "g odd, n = (2r+1)(g-1)-2k, 0 <= k <= g-2",
            Mode::Reduced,
            "minimal resolution divisor",
        ),
        e(
            "V",
            "nodal, partition",
            "g even, n-1 = (2r+1)(g-1)-2k, 0 <= k <= g-2",
            Mode::Reduced,
            "sum of pulled back minimal resolution divisors",
        ),
        e(
            "slope",
            "pointed, nodal, partition",
            "g >= 3",
            Mode::Reduced,
            "minimal known slope divisor on M_g",
        ),
        e(
            "T",
            "partition (single block)",
            "g >= 3, n = g-1",
            Mode::Reduced,
            "anti-ramification divisor",
        ),
        e(
            "Fgm",
            "partition (single block)",
            "1 <= m <= g/2, n = g-2m >= 2",
            Mode::Reduced,
            "normalized divisor of pointed curves",
        ),
        e(
            "Fgm~",
            "partition (single block)",
            "1 <= m <= g/2, n = g-2m+1 >= 3",
            Mode::Reduced,
            "symmetrized pullback of Fgm",
        ),
        e("Z10", "nodal", "g = 10", Mode::Reduced, "slope 7 divisor on M_10"),
        e(
            "Z21",
            "nodal",
            "g = 21",
            Mode::Reduced,
            "slope 2459/377 divisor on M_21",
        ),
        e("Z16", "nodal", "g = 16", Mode::Reduced, "slope 407/61 divisor on M_16"),
        e(
            "D12",
            "nodal",
            "g = 12",
            Mode::Reduced,
            "13245 lambda - 1926 delta_irr - 9867 delta_1 on M_12",
        ),
        e(
            "L22_4",
            "nodal",
            "g = 22, 4 points",
            Mode::Reduced,
            "summed pullbacks of B_23",
        ),
        e(
            "L22_6",
            "nodal",
            "g = 22, 6 points",
            Mode::Reduced,
            "summed pullbacks of B_23",
        ),
        e("Nfold14", "nodal", "g = 14", Mode::Reduced, "n-fold point divisor"),
        e(
            "Lin18",
            "nodal",
            "g = 18, 10 points",
            Mode::Reduced,
            "linear series divisor summed over 10 forgetful maps",
        ),
    ]
}

/// Which basis symbols a generator is computed on. Restricting the scope
/// keeps large quotients cheap when only a few coordinates are needed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scope {
    All,
    Only(Vec<BasisSymbol>),
}

impl Scope {
    pub fn symbols(&self, ctx: &SpaceContext) -> Vec<BasisSymbol> {
        match self {
            Scope::All => orbit_basis(ctx),
            Scope::Only(list) => {
                let set: BTreeSet<BasisSymbol> = list
                    .iter()
                    .filter_map(|s| crate::basis::canonicalize(s, ctx).ok().flatten())
                    .collect();
                set.into_iter().collect()
            }
        }
    }
}

/// `ψ = Σ ψ_i` written in the basis of `ctx`.
pub fn psi_class(ctx: &SpaceContext) -> Result<DivisorClass> {
    let mut out = DivisorClass::zero(ctx);
    for sym in psi_symbols(ctx) {
        out.add_term(&sym, &Q::one())?;
    }
    Ok(out)
}

/// The point-bundle symbols of `ctx`.
pub fn psi_symbols(ctx: &SpaceContext) -> Vec<BasisSymbol> {
    if ctx.n() == 0 {
        return Vec::new();
    }
    if ctx.is_labeled() {
        return (1..=ctx.n()).map(BasisSymbol::Psi).collect();
    }
    match ctx.kind() {
        SpaceKind::PartitionQuotient if ctx.partition_parts().len() > 1 => (1..=ctx.partition_parts().len() as u32)
            .map(BasisSymbol::PsiBlock)
            .collect(),
        _ => vec![BasisSymbol::PsiTotal],
    }
}

/// Number of marked points on the genus-`i` side of a boundary symbol.
pub fn boundary_size(sym: &BasisSymbol) -> Option<(u32, u32)> {
    match sym {
        BasisSymbol::DeltaIS(i, s) => Some((*i, s.len())),
        BasisSymbol::DeltaOrbit(i, s) => Some((*i, *s)),
        BasisSymbol::DeltaPair { i, a, b } => Some((*i, 2 * a + b)),
        BasisSymbol::DeltaBlock(i, c) => Some((*i, c.iter().sum())),
        _ => None,
    }
}

/// Builds an `S_N`-invariant class from a coefficient per `(genus, size)`.
/// Coordinates where `delta` returns `None` are left out of the known set.
fn from_profile<F>(
    ctx: &SpaceContext,
    symbols: &[BasisSymbol],
    lambda: Q,
    psi: Q,
    irr: Q,
    delta: F,
) -> Result<(DivisorClass, BTreeSet<BasisSymbol>)>
where
    F: Fn(u32, u32) -> Option<Q>,
{
    use BasisSymbol::*;
    if ctx.kind() == SpaceKind::Hyperelliptic {
        return Err(Error::Unsupported(
            "profiles are built before hyperelliptic restriction".into(),
        ));
    }
    let mut out = DivisorClass::zero(ctx);
    let mut known = BTreeSet::new();
    for sym in symbols.iter().cloned() {
        let c = match &sym {
            Lambda => Some(lambda.clone()),
            Psi(_) | PsiTotal | PsiBlock(_) => Some(psi.clone()),
            DeltaIrr => Some(irr.clone()),
            other => boundary_size(other).and_then(|(i, s)| delta(i, s)),
        };
        if let Some(c) = c {
            out.add_term(&sym, &c)?;
            known.insert(sym);
        }
    }
    Ok((out, known))
}

fn check_hyper_coarse(ctx: &SpaceContext) -> Result<()> {
    if ctx.level() == Level::Coarse && ctx.n() == 1 {
        return Err(Error::OutOfRange(
            "coarse canonical class of H_{g,1} is not covered".into(),
        ));
    }
    Ok(())
}

/// Canonical class of `ctx`; on a quotient this is the pullback of `K` to the
/// cover, written in orbit coordinates.
pub fn canonical_class(ctx: &SpaceContext) -> Result<DivisorClass> {
    canonical_class_in(ctx, &Scope::All)
}

/// [`canonical_class`] computed on the symbols of `scope` (plus the few
/// correction terms, which are always present).
pub fn canonical_class_in(ctx: &SpaceContext, scope: &Scope) -> Result<DivisorClass> {
    use BasisSymbol::*;
    let symbols = scope.symbols(ctx);
    let g = ctx.g();
    let n = ctx.n();
    let gi = i64::from(g);
    if ctx.kind() == SpaceKind::Hyperelliptic {
        check_hyper_coarse(ctx)?;
        let coarse = ctx.level() == Level::Coarse;
        let mut out = DivisorClass::zero(ctx);
        for sym in symbols {
            let c = match &sym {
                Psi(_) | PsiTotal => int(1),
                Eta0 => -(ratio(1, 2) + ratio(1, 2 * gi + 1)),
                EtaIS(i, _) | EtaOrbit(i, _) => {
                    let i = i64::from(*i);
                    ratio((2 * i + 2) * 2 * (gi - i), 2 * gi + 1) - int(2)
                }
                DeltaIS(0, _) | DeltaOrbit(0, _) => int(-2),
                DeltaIS(i, _) | DeltaOrbit(i, _) => {
                    let i = i64::from(*i);
                    ratio((2 * i + 1) * (2 * gi - 2 * i + 1), 4 * gi + 2)
                }
                _ => Q::zero(),
            };
            out.add_term(&sym, &c)?;
        }
        if coarse {
            if n == 0 {
                for i in 1..=g / 2 {
                    out.add_term(&DeltaIS(i, LabelSet::empty()), &int(-1))?;
                }
            } else {
                for i in 1..=g {
                    let sym = if ctx.is_labeled() {
                        DeltaIS(i, LabelSet::empty())
                    } else {
                        DeltaOrbit(i, 0)
                    };
                    out.add_term(&sym, &int(-1))?;
                }
            }
        }
        return Ok(out);
    }
    let quotient = ctx.kind() != SpaceKind::Pointed;
    if quotient && ctx.level() == Level::Stack {
        return Err(Error::Unsupported(
            "canonical class of a quotient is only given at the coarse level".into(),
        ));
    }
    if ctx.level() == Level::Coarse && g + ctx.labels() < 4 {
        return Err(Error::OutOfRange(format!(
            "coarse canonical class needs g+n >= 4, got g={g}, n={}",
            ctx.labels()
        )));
    }
    let mut out = DivisorClass::zero(ctx);
    for sym in symbols {
        let c = match &sym {
            Lambda => int(13),
            Psi(_) | PsiTotal | PsiBlock(_) => int(1),
            _ => int(-2),
        };
        out.add_term(&sym, &c)?;
    }
    if ctx.level() == Level::Coarse {
        let d1 = match ctx.kind() {
            SpaceKind::Pointed => DeltaIS(1, LabelSet::empty()),
            SpaceKind::NodalQuotient => DeltaPair { i: 1, a: 0, b: 0 },
            _ if ctx.partition_parts().len() == 1 => DeltaOrbit(1, 0),
            _ => DeltaBlock(1, vec![0; ctx.partition_parts().len()]),
        };
        out.add_term(&d1, &int(-1))?;
    }
    // ramification along transpositions of the group
    match ctx.kind() {
        SpaceKind::NodalQuotient if n >= 1 => out.add_term(&DeltaPair { i: 0, a: 1, b: 0 }, &int(-1))?,
        SpaceKind::PartitionQuotient => {
            let parts = ctx.partition_parts();
            if parts.len() == 1 {
                if n >= 2 {
                    out.add_term(&DeltaOrbit(0, 2), &int(-1))?;
                }
            } else {
                for (k, &p) in parts.iter().enumerate() {
                    if p >= 2 {
                        let mut c = vec![0; parts.len()];
                        c[k] = 2;
                        out.add_term(&DeltaBlock(0, c), &int(-1))?;
                    }
                }
            }
        }
        _ => {}
    }
    Ok(out)
}

fn mg(g: u32) -> Result<SpaceContext> {
    SpaceContext::pointed(g, 0)
}

fn composite_or_err(what: &str, value: u32) -> Result<()> {
    if is_prime(u64::from(value)) {
        return Err(Error::Primality {
            what: what.into(),
            value: u64::from(value),
        });
    }
    Ok(())
}

/// Brill–Noether class on `M̄_g`, normalized:
/// `(g+3)λ − ((g+1)/6)δ_irr − Σ i(g−i)δ_i`.
pub fn brill_noether(g: u32) -> Result<DivisorClass> {
    composite_or_err("g+1", g + 1)?;
    brill_noether_formal(g)
}

/// The Brill–Noether formula without the primality check; for prime `g+1`
/// this is only a formal class.
pub fn brill_noether_formal(g: u32) -> Result<DivisorClass> {
    let ctx = mg(g)?;
    let gi = i64::from(g);
    let mut out = DivisorClass::zero(&ctx);
    out.add_term(&BasisSymbol::Lambda, &int(gi + 3))?;
    out.add_term(&BasisSymbol::DeltaIrr, &-ratio(gi + 1, 6))?;
    for i in 1..=g / 2 {
        let ii = i64::from(i);
        out.add_term(&BasisSymbol::DeltaIS(i, LabelSet::empty()), &int(-ii * (gi - ii)))?;
    }
    Ok(out)
}

/// `B`: the Brill–Noether class pulled back to `ctx` by forgetting all points.
pub fn bn_pullback(ctx: &SpaceContext) -> Result<Generator> {
    bn_pullback_in(ctx, &Scope::All)
}

pub fn bn_pullback_in(ctx: &SpaceContext, scope: &Scope) -> Result<Generator> {
    let bn = brill_noether(ctx.g())?;
    let class = pullback_from_mg_on(&bn, ctx, &scope.symbols(ctx))?;
    Ok(Generator::full(
        "B",
        class,
        "Brill-Noether divisor pulled back from M_g",
    ))
}

/// `D`: the Brill–Noether class of `M̄_{g+n}` pulled back along the gluing map.
pub fn bn_glued(g: u32, n: u32) -> Result<Generator> {
    bn_glued_in(g, n, &Scope::All)
}

pub fn bn_glued_in(g: u32, n: u32, scope: &Scope) -> Result<Generator> {
    let bn = brill_noether(g + n)?;
    let class = glue_pullback_on(&bn, g, n, &scope.symbols(&SpaceContext::nodal(g, n)?))?;
    Ok(Generator::full(
        "D",
        class,
        "Brill-Noether divisor of M_{g+n} pulled back by gluing",
    ))
}

/// `D` built from the formal Brill–Noether class, whatever the primality of `g+n+1`.
pub fn bn_glued_formal(g: u32, n: u32, scope: &Scope) -> Result<Generator> {
    let bn = brill_noether_formal(g + n)?;
    let class = glue_pullback_on(&bn, g, n, &scope.symbols(&SpaceContext::nodal(g, n)?))?;
    Ok(Generator::full(
        "D",
        class,
        "formal Brill-Noether class of M_{g+n} pulled back by gluing",
    ))
}

/// `(a, b_0, b_1)` of the normalized Gieseker–Petri class, `g = 2d − 2`.
pub fn gieseker_petri_coefficients(g: u32) -> Result<(Q, Q, Q)> {
    if g % 2 != 0 {
        return Err(Error::Parity(format!("Gieseker-Petri divisor needs g even, got {g}")));
    }
    let d = i64::from(g / 2 + 1);
    Ok((int(6 * d * d + d - 6), int(d * (d - 1)), int((2 * d - 3) * (3 * d - 2))))
}

const GP_ASSUMPTION: &str = "boundary coefficients b_i of the Gieseker-Petri divisor increase with i";

/// Gieseker–Petri class on `M̄_g`: only `λ`, `δ_irr`, `δ_1` are known.
pub fn gieseker_petri(g: u32) -> Result<Generator> {
    let (a, b0, b1) = gieseker_petri_coefficients(g)?;
    let ctx = mg(g)?;
    let d1 = BasisSymbol::DeltaIS(1, LabelSet::empty());
    let class = DivisorClass::from_terms(
        &ctx,
        [
            (BasisSymbol::Lambda, a),
            (BasisSymbol::DeltaIrr, -b0),
            (d1.clone(), -b1),
        ],
    )?;
    let known = [BasisSymbol::Lambda, BasisSymbol::DeltaIrr, d1].into_iter().collect();
    Ok(Generator::reduced(
        "GP",
        class,
        known,
        GP_ASSUMPTION,
        "Gieseker-Petri divisor on M_g",
    ))
}

/// `E`: Gieseker–Petri pulled back to `ctx` by forgetting all points.
pub fn gp_pullback(ctx: &SpaceContext) -> Result<Generator> {
    gp_pullback_in(ctx, &Scope::All)
}

pub fn gp_pullback_in(ctx: &SpaceContext, scope: &Scope) -> Result<Generator> {
    let gp = gieseker_petri(ctx.g())?;
    let symbols = scope.symbols(ctx);
    let class = pullback_from_mg_on(&gp.class, ctx, &symbols)?;
    let known = symbols
        .into_iter()
        .filter(|s| s.genus_index().map_or(true, |i| i <= 1))
        .collect();
    Ok(Generator::reduced(
        "E",
        class,
        known,
        GP_ASSUMPTION,
        "Gieseker-Petri divisor pulled back from M_g",
    ))
}

/// `F`: Gieseker–Petri on `M̄_{g+n}` pulled back along the gluing map.
pub fn gp_glued(g: u32, n: u32) -> Result<Generator> {
    gp_glued_in(g, n, &Scope::All)
}

pub fn gp_glued_in(g: u32, n: u32, scope: &Scope) -> Result<Generator> {
    let gp = gieseker_petri(g + n)?;
    let symbols = scope.symbols(&SpaceContext::nodal(g, n)?);
    let class = glue_pullback_on(&gp.class, g, n, &symbols)?;
    let known = symbols
        .into_iter()
        .filter(|s| crate::maps::glue_source_index(s, g, n).map_or(true, |j| j <= 1))
        .collect();
    Ok(Generator::reduced(
        "F",
        class,
        known,
        GP_ASSUMPTION,
        "Gieseker-Petri divisor of M_{g+n} pulled back by gluing",
    ))
}

/// Logan divisor of pointed curves `[C, x_1..x_n]` with `Σ a_i x_i` moving in
/// a pencil, in the `ω` basis. Fully known only for all weights equal to one.
pub fn logan(g: u32, weights: &[u32]) -> Result<Generator> {
    use BasisSymbol::*;
    if weights.is_empty() || weights.iter().any(|&a| a == 0) || weights.iter().sum::<u32>() != g {
        return Err(Error::OutOfRange(format!(
            "weights {weights:?} must be positive and sum to g = {g}"
        )));
    }
    let n = weights.len() as u32;
    let ctx = SpaceContext::pointed_with_cap(g, n, MAX_LABELS)?;
    let mut out = DivisorClass::zero(&ctx);
    out.add_term(&Lambda, &int(-1))?;
    for (i, &a) in weights.iter().enumerate() {
        out.add_term(&OmegaI(i as u32 + 1), &int(tri(i64::from(a))))?;
    }
    let all_ones = weights.iter().all(|&a| a == 1);
    if all_ones {
        for sym in orbit_basis(&ctx) {
            if let DeltaIS(i, s) = &sym {
                let s = i64::from(s.len());
                let c = if *i == 0 {
                    s * (s - 1) / 2
                } else {
                    tri((s - i64::from(*i)).abs())
                };
                out.add_term(&sym, &int(-c))?;
            }
        }
        return Ok(Generator::full("logan", out, "Logan divisor with unit weights"));
    }
    let mut known: BTreeSet<BasisSymbol> = [Lambda, DeltaIrr].into_iter().collect();
    for i in 1..=n {
        known.insert(OmegaI(i));
        for j in i + 1..=n {
            let c = i64::from(weights[(i - 1) as usize]) * i64::from(weights[(j - 1) as usize]);
            let sym = DeltaIS(0, LabelSet::from_labels([i, j]));
            out.add_term(&sym, &int(-c))?;
            known.insert(sym);
        }
    }
    Ok(Generator::reduced(
        "logan",
        out,
        known,
        "coefficients of boundary divisors with more than two points are not used",
        "Logan divisor with weights",
    ))
}

/// Logan class with `ω` replaced by `ψ`.
pub fn logan_psi(g: u32, weights: &[u32]) -> Result<Generator> {
    let mut gen = logan(g, weights)?;
    gen.class = omega_to_psi(&gen.class)?;
    if let Some(known) = gen.known.take() {
        let mut k: BTreeSet<BasisSymbol> = known
            .into_iter()
            .map(|s| match s {
                BasisSymbol::OmegaI(i) => BasisSymbol::Psi(i),
                other => other,
            })
            .collect();
        k.insert(BasisSymbol::DeltaIrr);
        gen.known = Some(k);
    }
    Ok(gen)
}

/// Raw coefficients of the symmetrized Weierstrass-type divisor on `N`
/// points: `(λ, ψ, b_{0,2})`, with `b_{0,2}` the negated `δ_{0,2}` coefficient.
pub fn weierstrass_raw_coefficients(g: u32, points: u32) -> Result<(Q, Q, Q)> {
    if points == 0 {
        return Err(Error::OutOfRange("W needs at least one marked point".into()));
    }
    let (gi, nn) = (i64::from(g), i64::from(points));
    if points >= g {
        let psi = binom_q(nn - 1, gi - 1);
        let b02 = int(2) * &psi + binom_q(nn - 2, gi - 2);
        return Ok((-binom_q(nn, gi), psi, b02));
    }
    let (k, r) = (gi / nn, gi % nn);
    let c = binom_q(nn - 1, r - 1) * ratio((k + 1) * (k + 2), 2) + binom_q(nn - 1, r) * ratio(k * (k + 1), 2);
    let b02 = int(2) * &c
        + binom_q(nn - 2, r - 2) * int((k + 1) * (k + 1))
        + binom_q(nn - 2, r - 1) * int(2 * k * (k + 1))
        + binom_q(nn - 2, r) * int(k * k);
    Ok((-binom_q(nn, r), c, b02))
}

/// `b_{i,s}` of the raw large-case `W` (`N ≥ g`): `Σ_t C(s,t) C(N−s,g−t) T(|t−i|)`.
pub fn weierstrass_boundary(g: u32, points: u32, i: u32, s: u32) -> Q {
    let (gi, nn, ii, ss) = (i64::from(g), i64::from(points), i64::from(i), i64::from(s));
    (0..=gi.min(ss)).fold(Q::zero(), |acc, t| {
        acc + binom_q(ss, t) * binom_q(nn - ss, gi - t) * int(tri((t - ii).abs()))
    })
}

/// `b_{i,s}` for all `i`, `s` at once, from one Pascal triangle.
struct BoundaryTable {
    g: u32,
    points: u32,
    pascal: Vec<Vec<num_bigint::BigInt>>,
}

impl BoundaryTable {
    fn new(g: u32, points: u32) -> Self {
        let mut pascal: Vec<Vec<num_bigint::BigInt>> = Vec::with_capacity(points as usize + 1);
        for row in 0..=points as usize {
            let mut r = vec![num_bigint::BigInt::one(); row + 1];
            for k in 1..row {
                r[k] = &pascal[row - 1][k - 1] + &pascal[row - 1][k];
            }
            pascal.push(r);
        }
        BoundaryTable { g, points, pascal }
    }

    fn binom(&self, n: u32, k: u32) -> num_bigint::BigInt {
        if k > n {
            return num_bigint::BigInt::zero();
        }
        self.pascal[n as usize][k as usize].clone()
    }

    fn get(&self, i: u32, s: u32) -> Q {
        let mut acc = num_bigint::BigInt::zero();
        for t in 0..=self.g.min(s) {
            if self.g - t > self.points - s {
                continue;
            }
            let weight = tri((i64::from(t) - i64::from(i)).abs());
            acc += self.binom(s, t) * self.binom(self.points - s, self.g - t) * weight;
        }
        Q::from_integer(acc)
    }
}

/// Normalized `a(g,n)`: the negated `λ` coefficient once `ψ` has coefficient 1.
pub fn weierstrass_a(g: u32, n: u32) -> Result<Q> {
    let (l, c, _) = weierstrass_raw_coefficients(g, n)?;
    Ok(-l / c)
}

/// Normalized `b(g,n)`: the negated `δ_{0,2}` coefficient once `ψ` has coefficient 1.
pub fn weierstrass_b(g: u32, n: u32) -> Result<Q> {
    let (_, c, b) = weierstrass_raw_coefficients(g, n)?;
    Ok(b / c)
}

const W_SMALL_ASSUMPTION: &str = "remaining boundary coefficients b_{i,s} satisfy b_{i,s} >= b_{0,2}";

/// Symmetrized Weierstrass-type divisor on the labels of `ctx`, optionally
/// normalized so that `ψ` has coefficient 1.
pub fn weierstrass(ctx: &SpaceContext, normalized: bool) -> Result<Generator> {
    weierstrass_in(ctx, normalized, &Scope::All)
}

pub fn weierstrass_in(ctx: &SpaceContext, normalized: bool, scope: &Scope) -> Result<Generator> {
    let g = ctx.g();
    if ctx.kind() == SpaceKind::Hyperelliptic {
        let base = if ctx.is_labeled() {
            SpaceContext::pointed_with_cap(g, ctx.n(), MAX_LABELS)?
        } else {
            SpaceContext::partition(g, &[ctx.n()])?
        }
        .with_level(ctx.level());
        let w = weierstrass_in(&base, normalized, &Scope::All)?;
        if w.known.is_some() {
            return Err(Error::Unsupported("hyperelliptic W needs n >= g".into()));
        }
        return Ok(Generator::full(&w.name, hyperelliptic_restrict(&w.class)?, &w.citation));
    }
    let points = ctx.labels();
    let symbols = scope.symbols(ctx);
    let (lambda, psi, b02) = weierstrass_raw_coefficients(g, points)?;
    let scale = if normalized { Q::one() / &psi } else { Q::one() };
    let name = if normalized { "W_norm" } else { "W" };
    if points >= g {
        let table = BoundaryTable::new(g, points);
        let (class, _) = from_profile(ctx, &symbols, lambda * &scale, &psi * &scale, Q::zero(), |i, s| {
            Some(-table.get(i, s) * &scale)
        })?;
        return Ok(Generator::full(
            name,
            class,
            "sum of Weierstrass-type divisors over all g-subsets of points",
        ));
    }
    let b02 = b02 * &scale;
    let (class, known) = from_profile(ctx, &symbols, lambda * &scale, psi * &scale, Q::zero(), |i, s| {
        (i == 0 && s == 2).then(|| -b02.clone())
    })?;
    Ok(Generator::reduced(
        name,
        class,
        known,
        W_SMALL_ASSUMPTION,
        "sum of weighted Weierstrass-type divisors",
    ))
}

/// `(r, k)` with `r ≥ 1`, `0 ≤ k ≤ g−2` and `m = (2r+1)(g−1) − 2k`.
pub fn mrc_parameters(g: u32, m: u32) -> Option<(u32, u32)> {
    if g < 3 {
        return None;
    }
    let (g, m) = (i64::from(g), i64::from(m));
    (1..=m).find_map(|r| {
        let twice_k = (2 * r + 1) * (g - 1) - m;
        (twice_k >= 0 && twice_k % 2 == 0 && twice_k / 2 <= g - 2).then(|| (r as u32, (twice_k / 2) as u32))
    })
}

/// Coefficients `(a, c, b_irr)` of the minimal resolution divisor, and
/// `b_{0,s}` through [`mrc_b0`].
pub fn mrc_coefficients(g: u32, r: u32, k: u32) -> (Q, Q, Q) {
    let (g, r, k) = (i64::from(g), i64::from(r), i64::from(k));
    let a = ratio(
        (g - 1) * (g - 2) * (6 * r * r + 6 * r + 1) + k * (24 * r + 10 * k + 10 - 10 * g - 12 * r * g),
        g - 2,
    );
    let c = int(r * g + g - k - r - 1);
    let b_irr = ratio(tri(r) * (g - 1) * (g - 2) + k * (k + 1 + 2 * r - r * g - g), g - 2);
    (a, c, b_irr)
}

pub fn mrc_b0(g: u32, r: u32, k: u32, s: u32) -> Q {
    let (g, r, k, s) = (i64::from(g), i64::from(r), i64::from(k), i64::from(s));
    int(tri(s) * (g - 1) + s * (r * g - r - k))
}

const MRC_ASSUMPTION: &str = "boundary coefficients with i >= 1 dominate those with i = 0: b_{i,s} >= b_{0,s}";

/// Minimal resolution divisor on the labels of `ctx`: `U` itself when `g` is
/// odd (`N = m`), the sum `V` of its pullbacks along all `N` forgetful maps
/// when `g` is even (`N = m + 1`).
pub fn mrc_divisor(ctx: &SpaceContext) -> Result<Generator> {
    mrc_divisor_in(ctx, &Scope::All)
}

pub fn mrc_divisor_in(ctx: &SpaceContext, scope: &Scope) -> Result<Generator> {
    let symbols = scope.symbols(ctx);
    let g = ctx.g();
    let points = ctx.labels();
    let odd = g % 2 == 1;
    let m = if odd { points } else { points.saturating_sub(1) };
    let (r, k) = mrc_parameters(g, m).ok_or(Error::NoRealization { g, points })?;
    let (a, c, b_irr) = mrc_coefficients(g, r, k);
    let b0 = |s: u32| if s == 1 { c.clone() } else { mrc_b0(g, r, k, s) };
    let (class, known) = if odd {
        from_profile(ctx, &symbols, -a, c.clone(), b_irr, |i, s| (i == 0).then(|| -b0(s)))?
    } else {
        let nq = int(i64::from(points));
        from_profile(
            ctx,
            &symbols,
            -(&nq * a),
            int(i64::from(points) - 1) * &c,
            nq * b_irr,
            |i, s| (i == 0).then(|| -(int(i64::from(points - s)) * b0(s) + int(i64::from(s)) * b0(s - 1))),
        )?
    };
    let name = if odd { "U" } else { "V" };
    let mut gen = Generator::reduced(name, class, known, MRC_ASSUMPTION, "minimal resolution divisor");
    gen.assumptions.push(format!("r = {r}, k = {k}"));
    Ok(gen)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SlopeSource {
    BrillNoether,
    GiesekerPetri,
    Special,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeDatum {
    pub g: u32,
    pub slope: Q,
    pub source: SlopeSource,
}

fn special_slope(g: u32) -> Option<Q> {
    match g {
        10 => Some(int(7)),
        12 => Some(int(6) + ratio(563, 642)),
        16 => Some(int(6) + ratio(41, 61)),
        21 => Some(int(6) + ratio(197, 377)),
        _ => None,
    }
}

/// All known slopes for genus `g`.
pub fn slopes(g: u32) -> Vec<SlopeDatum> {
    let gi = i64::from(g);
    let mut out = Vec::new();
    if !is_prime(u64::from(g + 1)) {
        out.push(SlopeDatum {
            g,
            slope: int(6) + ratio(12, gi + 1),
            source: SlopeSource::BrillNoether,
        });
    }
    if g % 2 == 0 {
        out.push(SlopeDatum {
            g,
            slope: int(6) + ratio(14 * gi + 4, gi * gi + 2 * gi),
            source: SlopeSource::GiesekerPetri,
        });
    }
    if let Some(s) = special_slope(g) {
        out.push(SlopeDatum {
            g,
            slope: s,
            source: SlopeSource::Special,
        });
    }
    out
}

/// Smallest known slope of an effective divisor on `M̄_g`.
pub fn slope_min(g: u32) -> Result<SlopeDatum> {
    if g < 3 {
        return Err(Error::OutOfRange(format!("slope table starts at g = 3, got {g}")));
    }
    slopes(g)
        .into_iter()
        .min_by(|a, b| a.slope.cmp(&b.slope))
        .ok_or_else(|| Error::OutOfRange(format!("no slope known for g = {g}")))
}

/// `sλ − δ_irr − …` pulled back to `ctx`; only coordinates of genus 0 are known
/// beyond `λ`, `ψ` and `δ_irr`.
pub fn slope_class(ctx: &SpaceContext) -> Result<Generator> {
    slope_class_in(ctx, &Scope::All)
}

pub fn slope_class_in(ctx: &SpaceContext, scope: &Scope) -> Result<Generator> {
    let datum = slope_min(ctx.g())?;
    pulled_from_mg(
        ctx,
        scope,
        "slope",
        datum.slope,
        int(1),
        None,
        "minimal slope divisor on M_g",
    )
}

fn pulled_from_mg(
    ctx: &SpaceContext,
    scope: &Scope,
    name: &str,
    lambda: Q,
    irr: Q,
    delta1: Option<Q>,
    citation: &str,
) -> Result<Generator> {
    let known_index = if delta1.is_some() { 1 } else { 0 };
    let (class, known) = from_profile(ctx, &scope.symbols(ctx), lambda, Q::zero(), -irr, |i, _| match i {
        0 => Some(Q::zero()),
        1 => delta1.as_ref().map(|d| -d.clone()),
        _ => None,
    })?;
    let known = known
        .into_iter()
        .filter(|s| s.genus_index().map_or(true, |i| i <= known_index))
        .collect();
    Ok(Generator::reduced(
        name,
        class,
        known,
        "boundary coefficients delta_i (i >= 1) are at most -1",
        citation,
    ))
}

/// Coefficients of a divisor `aλ + ψ − b_irr δ_irr − b δ_{0,2} + …` on `M̄_{g,n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDivisor {
    pub name: String,
    pub g: u32,
    pub n: u32,
    /// Signed `λ` coefficient.
    pub lambda: Q,
    pub b_irr: Q,
    pub b02: Q,
}

impl BlockDivisor {
    /// The divisor as a generator on the symmetric quotient `M̄_{g,n}/S_n`.
    pub fn generator(&self) -> Result<Generator> {
        let ctx = SpaceContext::partition(self.g, &[self.n])?;
        let b02 = self.b02.clone();
        let (class, known) = from_profile(
            &ctx,
            &orbit_basis(&ctx),
            self.lambda.clone(),
            Q::one(),
            -self.b_irr.clone(),
            |i, s| (i == 0 && s == 2).then(|| -b02.clone()),
        )?;
        Ok(Generator::reduced(
            &self.name,
            class,
            known,
            "higher boundary coefficients are at most -2",
            &self.name,
        ))
    }
}

/// Normalized Weierstrass-type divisor `W_{g,n}` as block data.
pub fn weierstrass_block(g: u32, n: u32) -> Result<BlockDivisor> {
    Ok(BlockDivisor {
        name: format!("W_{{{g},{n}}}"),
        g,
        n,
        lambda: -weierstrass_a(g, n)?,
        b_irr: Q::zero(),
        b02: if n >= 2 { weierstrass_b(g, n)? } else { Q::zero() },
    })
}

/// Anti-ramification divisor `T_g` on `M̄_{g,g−1}`.
pub fn antiram_t(g: u32) -> Result<BlockDivisor> {
    if g < 3 {
        return Err(Error::OutOfRange(format!("T_g needs g >= 3, got {g}")));
    }
    let gi = i64::from(g);
    Ok(BlockDivisor {
        name: format!("T_{g}"),
        g,
        n: g - 1,
        lambda: -ratio(gi - 7, gi - 2),
        b_irr: ratio(1, 2 * gi - 4),
        b02: int(3) + ratio(1, 2 * gi - 4),
    })
}

fn fgm_lambda(g: i64, n: i64, m: i64, div: i64) -> Q {
    ratio(n, n - div) * (ratio(10 * m, g - 2) + ratio(1 - g, g - m))
}

/// `F_{g,m}` on `M̄_{g,n}` with `n = g − 2m`.
pub fn fgm(g: u32, m: u32) -> Result<BlockDivisor> {
    if m == 0 || 2 * m > g || g < 3 || g - 2 * m < 2 {
        return Err(Error::OutOfRange(format!(
            "F_{{g,m}} needs 1 <= m <= g/2 and g-2m >= 2, got g={g}, m={m}"
        )));
    }
    let n = g - 2 * m;
    let (gi, ni, mi) = (i64::from(g), i64::from(n), i64::from(m));
    Ok(BlockDivisor {
        name: format!("F_{{{g},{m}}}"),
        g,
        n,
        lambda: fgm_lambda(gi, ni, mi, 1),
        b_irr: ratio(ni * mi, (gi - 2) * (ni - 1)),
        b02: int(3) + ratio((gi - ni) * (ni + 1), (gi + ni) * (ni - 1)),
    })
}

/// `F̃_{g,m}` on `M̄_{g,n}` with `n = g − 2m + 1`.
pub fn fgm_tilde(g: u32, m: u32) -> Result<BlockDivisor> {
    if m == 0 || 2 * m > g || g < 3 || g + 1 - 2 * m < 3 {
        return Err(Error::OutOfRange(format!(
            "F~_{{g,m}} needs 1 <= m <= g/2 and g-2m+1 >= 3, got g={g}, m={m}"
        )));
    }
    let n = g - 2 * m + 1;
    let (gi, ni, mi) = (i64::from(g), i64::from(n), i64::from(m));
    Ok(BlockDivisor {
        name: format!("F~_{{{g},{m}}}"),
        g,
        n,
        lambda: fgm_lambda(gi, ni, mi, 2),
        b_irr: ratio(ni * mi, (gi - 2) * (ni - 2)),
        b02: int(3) + ratio(gi - ni - 1, gi + ni - 1),
    })
}

/// `Σ_k π_k^* L_k` on the partition quotient `ctx`, known on `λ`, `ψ`,
/// `δ_irr` and the two-point `δ_0` classes.
pub fn block_sum(ctx: &SpaceContext, blocks: &[BlockDivisor]) -> Result<Generator> {
    use BasisSymbol::*;
    let parts = ctx.partition_parts();
    if ctx.kind() != SpaceKind::PartitionQuotient || parts.len() != blocks.len() {
        return Err(Error::InvalidPartition(format!("{} blocks for {}", blocks.len(), ctx)));
    }
    for (b, &p) in blocks.iter().zip(parts) {
        if b.g != ctx.g() || b.n != p {
            return Err(Error::InvalidPartition(format!(
                "{} does not live on a block of size {p}",
                b.name
            )));
        }
    }
    let lambda: Q = blocks.iter().map(|b| b.lambda.clone()).sum();
    let irr: Q = blocks.iter().map(|b| b.b_irr.clone()).sum();
    let mut out = DivisorClass::zero(ctx);
    let mut known = BTreeSet::new();
    let mut put = |sym: BasisSymbol, c: Q, out: &mut DivisorClass| -> Result<()> {
        out.add_term(&sym, &c)?;
        known.insert(sym);
        Ok(())
    };
    put(Lambda, lambda, &mut out)?;
    put(DeltaIrr, -irr, &mut out)?;
    if parts.len() == 1 {
        put(PsiTotal, Q::one(), &mut out)?;
        if parts[0] >= 2 {
            put(DeltaOrbit(0, 2), -blocks[0].b02.clone(), &mut out)?;
        }
    } else {
        let m = parts.len();
        for k in 0..m {
            put(PsiBlock(k as u32 + 1), Q::one(), &mut out)?;
            if parts[k] >= 2 {
                let mut c = vec![0; m];
                c[k] = 2;
                put(DeltaBlock(0, c), -blocks[k].b02.clone(), &mut out)?;
            }
            for l in k + 1..m {
                let mut c = vec![0; m];
                c[k] = 1;
                c[l] = 1;
                put(DeltaBlock(0, c), int(-2), &mut out)?;
            }
        }
    }
    let names: Vec<String> = blocks.iter().map(|b| b.name.clone()).collect();
    Ok(Generator::reduced(
        "L",
        out,
        known,
        "higher boundary coefficients of each block divisor are at most -2",
        &format!("sum of pulled back block divisors {}", names.join(" + ")),
    ))
}

/// A named divisor whose printed coefficients enter as data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialDivisor {
    pub name: &'static str,
    pub g: u32,
    pub kind: SpecialKind,
    pub citation: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecialKind {
    /// `aλ − b_irr δ_irr − b_1 δ_1 − …` on `M̄_g`, pulled back by forgetting points.
    FromMg { lambda: Q, b_irr: Q, b1: Option<Q> },
    /// `aλ + cψ − b_irr δ_irr − b δ_{0,2} − …` on `M̄_{g,points}`.
    Pointed {
        points: u32,
        lambda: Q,
        psi: Q,
        b_irr: Q,
        b02: Q,
    },
}

pub const SPECIAL_NAMES: [&str; 8] = ["Z10", "Z21", "Z16", "D12", "L22_4", "L22_6", "Nfold14", "Lin18"];

pub fn special_divisor(name: &str) -> Result<SpecialDivisor> {
    use SpecialKind::*;
    let from_mg = |lambda: Q, b_irr: Q, b1: Option<Q>| FromMg { lambda, b_irr, b1 };
    let pointed = |points, lambda: Q, psi: Q, b_irr: Q, b02: Q| Pointed {
        points,
        lambda,
        psi,
        b_irr,
        b02,
    };
    let (g, kind, citation) = match name {
        "Z10" => (10, from_mg(int(7), int(1), None), "slope 7 divisor on M_10"),
        "Z21" => (
            21,
            from_mg(ratio(2459, 377), int(1), None),
            "slope 2459/377 divisor on M_21",
        ),
        "Z16" => (
            16,
            from_mg(ratio(407, 61), int(1), None),
            "slope 407/61 divisor on M_16",
        ),
        "D12" => (
            12,
            from_mg(int(13245), int(1926), Some(int(9867))),
            "divisor of slope 13245/1926 on M_12",
        ),
        "L22_4" => (
            22,
            pointed(4, int(13), int(1), int(2), ratio(10, 3)),
            "B_23 pulled back to M_22,4 and summed",
        ),
        "L22_6" => (
            22,
            pointed(6, int(13), ratio(2, 3), int(2), ratio(56, 30)),
            "B_23 pulled back to M_22,6 and summed",
        ),
        "Nfold14" => (
            14,
            pointed(10, int(35), int(54), int(10), int(173)),
            "n-fold point divisor of genus 14",
        ),
        "Lin18" => {
            // 290λ + 24ψ − 45δ_irr − 82δ_{0,2} on 9 points, summed over the 10 forgetful maps
            let (n, m) = (10i64, 9i64);
            let (l, c, irr, b) = (int(290), int(24), int(45), int(82));
            let b02 = int(n - 2) * &b + int(2) * &c;
            (
                18,
                pointed(10, int(n) * l, int(m) * c, int(n) * irr, b02),
                "linear series divisor on M_18,9 summed over forgetful maps",
            )
        }
        _ => return Err(Error::UnknownGenerator(name.to_string())),
    };
    Ok(SpecialDivisor {
        name: SPECIAL_NAMES.iter().find(|&&s| s == name).copied().unwrap_or("?"),
        g,
        kind,
        citation,
    })
}

impl SpecialDivisor {
    /// The divisor on `ctx` (same genus; same number of labels for pointed data).
    pub fn on(&self, ctx: &SpaceContext) -> Result<Generator> {
        self.on_in(ctx, &Scope::All)
    }

    pub fn on_in(&self, ctx: &SpaceContext, scope: &Scope) -> Result<Generator> {
        if ctx.g() != self.g {
            return Err(Error::InvalidContext(format!(
                "{} lives in genus {}, not on {}",
                self.name, self.g, ctx
            )));
        }
        match &self.kind {
            SpecialKind::FromMg { lambda, b_irr, b1 } => pulled_from_mg(
                ctx,
                scope,
                self.name,
                lambda.clone(),
                b_irr.clone(),
                b1.clone(),
                self.citation,
            ),
            SpecialKind::Pointed {
                points,
                lambda,
                psi,
                b_irr,
                b02,
            } => {
                if ctx.labels() != *points {
                    return Err(Error::InvalidContext(format!(
                        "{} needs {points} labels, {} has {}",
                        self.name,
                        ctx,
                        ctx.labels()
                    )));
                }
                let (class, known) = from_profile(
                    ctx,
                    &scope.symbols(ctx),
                    lambda.clone(),
                    psi.clone(),
                    -b_irr.clone(),
                    |i, s| (i == 0 && s == 2).then(|| -b02.clone()),
                )?;
                Ok(Generator::reduced(
                    self.name,
                    class,
                    known,
                    "unprinted boundary coefficients are at most the printed delta_{0,2} coefficient",
                    self.citation,
                ))
            }
        }
    }
}
