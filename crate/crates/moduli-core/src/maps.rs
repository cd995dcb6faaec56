//! Pullbacks and changes of basis: forgetful maps, the gluing map of paired
//! points, group symmetrization and orbit projection, the `ψ ↔ ω` base
//! change, restriction to the hyperelliptic locus and the pullback along
//! `H̄_g ≅ M̄_{0,2g+2}/S_{2g+2}`.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::basis::{
    canonicalize, orbit_basis, BasisSymbol, DivisorClass, Group, LabelSet, SpaceContext, SpaceKind, MAX_LABELS,
};
use crate::error::{Error, Result};
use crate::rational::{int, ratio, Q};

fn pointed_big(g: u32, n: u32) -> Result<SpaceContext> {
    SpaceContext::pointed_with_cap(g, n, MAX_LABELS)
}

fn require_pointed(cls: &DivisorClass) -> Result<()> {
    if cls.ctx().kind() != SpaceKind::Pointed {
        return Err(Error::Unsupported(format!(
            "expected a class on a pointed space, got {}",
            cls.ctx()
        )));
    }
    Ok(())
}

/// Pullback along `π: M̄_{g,n} → M̄_{g,n-1}` forgetting the label `which`.
/// Labels of the source are renumbered order-preservingly around `which`.
pub fn forgetful_pullback(cls: &DivisorClass, which: u32) -> Result<DivisorClass> {
    require_pointed(cls)?;
    let n = cls.ctx().n() + 1;
    if which == 0 || which > n {
        return Err(Error::OutOfRange(format!("label {which} not in 1..={n}")));
    }
    multi_forgetful_pullback(cls, LabelSet::full(n).without(which), n)
}

/// Pullback along `π_T: M̄_{g,n} → M̄_{g,|T|}` keeping the labels in `kept`.
pub fn multi_forgetful_pullback(cls: &DivisorClass, kept: LabelSet, n: u32) -> Result<DivisorClass> {
    use BasisSymbol::*;
    require_pointed(cls)?;
    let src = cls.ctx();
    if n > MAX_LABELS || !kept.is_subset(LabelSet::full(n)) || kept.len() != src.n() {
        return Err(Error::OutOfRange(format!(
            "kept set {kept} must be a subset of 1..={n} with {} labels",
            src.n()
        )));
    }
    let target = pointed_big(src.g(), n)?.with_level(src.level());
    let new_label: Vec<u32> = kept.iter().collect();
    let map_set = |s: LabelSet| LabelSet::from_labels(s.iter().map(|l| new_label[(l - 1) as usize]));
    let extra = LabelSet::full(n).difference(kept);
    let mut out = DivisorClass::zero(&target);
    for (sym, c) in cls.terms() {
        match sym {
            Lambda | DeltaIrr => out.add_term(sym, c)?,
            OmegaI(j) => out.add_term(&OmegaI(new_label[(*j - 1) as usize]), c)?,
            Psi(j) => {
                let t = new_label[(*j - 1) as usize];
                out.add_term(&Psi(t), c)?;
                let neg = -c;
                for u in extra.subsets().filter(|u| !u.is_empty()) {
                    out.add_term(&DeltaIS(0, u.with(t)), &neg)?;
                }
            }
            DeltaIS(i, s) => {
                // with nothing kept, S and its complement give the same divisor
                let base = map_set(*s);
                let mut hit = BTreeSet::new();
                for u in extra.subsets() {
                    if let Some(t) = canonicalize(&DeltaIS(*i, base.union(u)), &target)? {
                        if hit.insert(t.clone()) {
                            out.add_term(&t, c)?;
                        }
                    }
                }
            }
            _ => return Err(Error::Unsupported(format!("forgetful pullback of {sym}"))),
        }
    }
    Ok(out)
}

/// Which class on `M̄_{g+n}` a nodal orbit symbol comes from under the gluing
/// map: `Some(0)` for `δ_irr`, `Some(j)` for `δ_j`, `None` for `λ`/`ψ`.
pub fn glue_source_index(sym: &BasisSymbol, g: u32, n: u32) -> Option<u32> {
    match sym {
        BasisSymbol::DeltaIrr => Some(0),
        BasisSymbol::DeltaPair { b, .. } if *b != 0 => Some(0),
        BasisSymbol::DeltaPair { i, a, .. } => {
            let j = i + a;
            Some(j.min(g + n - j))
        }
        _ => None,
    }
}

/// Pullback along the map `χ: M̄_{g,2n} → M̄_{g+n}` gluing `x_i` to `x_{n+i}`.
///
/// The input must be spanned by `λ`, `δ_irr` and `δ_j` on `M̄_{g+n}`; the
/// result is expressed in the orbit basis of the nodal quotient.
pub fn glue_pullback(cls: &DivisorClass, g: u32, n: u32) -> Result<DivisorClass> {
    let target = SpaceContext::nodal(g, n)?;
    glue_pullback_on(cls, g, n, &orbit_basis(&target))
}

/// [`glue_pullback`] computed only on the listed boundary symbols.
pub fn glue_pullback_on(cls: &DivisorClass, g: u32, n: u32, symbols: &[BasisSymbol]) -> Result<DivisorClass> {
    use BasisSymbol::*;
    let src = cls.ctx();
    if src.kind() != SpaceKind::Pointed || src.n() != 0 || src.g() != g + n {
        return Err(Error::Unsupported(format!(
            "gluing pullback expects a class on M̄_{}, got {}",
            g + n,
            src
        )));
    }
    let mut source = BTreeMap::new();
    let mut lambda = Q::zero();
    for (sym, c) in cls.terms() {
        match sym {
            Lambda => lambda = c.clone(),
            DeltaIrr => {
                source.insert(0u32, c.clone());
            }
            DeltaIS(j, s) if s.is_empty() => {
                source.insert(*j, c.clone());
            }
            _ => return Err(Error::Unsupported(format!("gluing pullback of {sym}"))),
        }
    }
    let target = SpaceContext::nodal(g, n)?.with_level(src.level());
    let mut out = DivisorClass::zero(&target);
    out.add_term(&Lambda, &lambda)?;
    let irr = source.get(&0).cloned().unwrap_or_else(Q::zero);
    out.add_term(&PsiTotal, &-irr.clone())?;
    for sym in symbols {
        if let Some(j) = glue_source_index(sym, g, n) {
            if let Some(c) = source.get(&j) {
                out.add_term(sym, c)?;
            }
        }
    }
    Ok(out)
}

/// Pullback of a class on `M̄_g` (spanned by `λ`, `δ_irr`, `δ_j`) to any
/// non-hyperelliptic context of the same genus via forgetting all points.
pub fn pullback_from_mg(cls: &DivisorClass, target: &SpaceContext) -> Result<DivisorClass> {
    pullback_from_mg_on(cls, target, &orbit_basis(target))
}

/// [`pullback_from_mg`] computed only on the listed boundary symbols.
pub fn pullback_from_mg_on(cls: &DivisorClass, target: &SpaceContext, symbols: &[BasisSymbol]) -> Result<DivisorClass> {
    use BasisSymbol::*;
    let src = cls.ctx();
    if src.kind() != SpaceKind::Pointed || src.n() != 0 || src.g() != target.g() {
        return Err(Error::Unsupported(format!(
            "expected a class on M̄_{}, got {}",
            target.g(),
            src
        )));
    }
    if target.kind() == SpaceKind::Hyperelliptic {
        return Err(Error::Unsupported(
            "use hyperelliptic_restrict for the hyperelliptic locus".into(),
        ));
    }
    let mut out = DivisorClass::zero(target);
    out.add_term(&Lambda, &cls.coeff(&Lambda))?;
    out.add_term(&DeltaIrr, &cls.coeff(&DeltaIrr))?;
    for sym in symbols {
        match sym.genus_index() {
            Some(i) if i >= 1 => {
                let c = cls.coeff(&DeltaIS(i, LabelSet::empty()));
                out.add_term(sym, &c)?;
            }
            _ => {}
        }
    }
    Ok(out)
}

/// Applies a label permutation (`perm[l-1]` is the image of `l`).
pub fn permute(cls: &DivisorClass, perm: &[u32]) -> Result<DivisorClass> {
    use BasisSymbol::*;
    let ctx = cls.ctx();
    if !ctx.is_labeled() || perm.len() != ctx.n() as usize {
        return Err(Error::Unsupported(format!(
            "permutation of length {} on {}",
            perm.len(),
            ctx
        )));
    }
    let map_set = |s: &LabelSet| LabelSet::from_labels(s.iter().map(|l| perm[(l - 1) as usize]));
    let mut out = DivisorClass::zero(ctx);
    for (sym, c) in cls.terms() {
        let image = match sym {
            Psi(i) => Psi(perm[(*i - 1) as usize]),
            OmegaI(i) => OmegaI(perm[(*i - 1) as usize]),
            DeltaIS(i, s) => DeltaIS(*i, map_set(s)),
            EtaIS(i, s) => EtaIS(*i, map_set(s)),
            other => other.clone(),
        };
        out.add_term(&image, c)?;
    }
    Ok(out)
}

fn transposition(n: u32, a: u32, b: u32) -> Vec<u32> {
    (1..=n)
        .map(|l| {
            if l == a {
                b
            } else if l == b {
                a
            } else {
                l
            }
        })
        .collect()
}

/// Generating permutations of `group` acting on `labels` labels.
pub fn group_generators(group: &Group, labels: u32) -> Result<Vec<Vec<u32>>> {
    let mut gens = Vec::new();
    match group {
        Group::FullSymmetric => {
            for a in 1..labels {
                gens.push(transposition(labels, a, a + 1));
            }
        }
        Group::Partition(parts) => {
            if parts.iter().sum::<u32>() != labels {
                return Err(Error::InvalidPartition(format!("{parts:?} does not sum to {labels}")));
            }
            let mut start = 1;
            for &p in parts {
                for a in start..start + p - 1 {
                    gens.push(transposition(labels, a, a + 1));
                }
                start += p;
            }
        }
        Group::NodalPairs => {
            if labels % 2 != 0 {
                return Err(Error::Unsupported(
                    "nodal pairing needs an even number of labels".into(),
                ));
            }
            let n = labels / 2;
            for i in 1..=n {
                gens.push(transposition(labels, i, n + i));
            }
            for i in 1..n {
                let mut p = transposition(labels, i, i + 1);
                p[(n + i - 1) as usize] = n + i + 1;
                p[(n + i) as usize] = n + i;
                gens.push(p);
            }
        }
    }
    Ok(gens)
}

type ClassKey = Vec<(BasisSymbol, Q)>;

fn key(cls: &DivisorClass) -> ClassKey {
    cls.terms().map(|(s, c)| (s.clone(), c.clone())).collect()
}

/// Sum of the distinct images of `cls` under `group`.
pub fn symmetrize(cls: &DivisorClass, group: &Group) -> Result<DivisorClass> {
    let gens = group_generators(group, cls.ctx().n())?;
    let mut seen: BTreeSet<ClassKey> = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(key(cls));
    queue.push_back(cls.clone());
    let mut total = DivisorClass::zero(cls.ctx());
    while let Some(c) = queue.pop_front() {
        total = total.try_add(&c)?;
        for p in &gens {
            let img = permute(&c, p)?;
            if seen.insert(key(&img)) {
                queue.push_back(img);
            }
        }
    }
    Ok(total)
}

/// Orbit symbol of the quotient `quot` containing the labeled symbol `sym`.
pub fn orbit_symbol_of(sym: &BasisSymbol, quot: &SpaceContext) -> Result<Option<BasisSymbol>> {
    use BasisSymbol::*;
    let raw = match (sym, quot.kind()) {
        (Lambda, _) | (DeltaIrr, _) | (Eta0, _) => sym.clone(),
        (Psi(i), SpaceKind::PartitionQuotient) if quot.partition_parts().len() > 1 => {
            let k = (1..=quot.partition_parts().len() as u32)
                .find(|&k| {
                    let (lo, hi) = quot.block_range(k);
                    (lo..=hi).contains(i)
                })
                .ok_or(Error::OutOfRange(format!("label {i}")))?;
            PsiBlock(k)
        }
        (Psi(_), _) => PsiTotal,
        (DeltaIS(i, s), SpaceKind::NodalQuotient) => {
            let n = quot.n();
            let (mut a, mut b) = (0, 0);
            for j in 1..=n {
                match (s.contains(j), s.contains(n + j)) {
                    (true, true) => a += 1,
                    (false, false) => {}
                    _ => b += 1,
                }
            }
            DeltaPair { i: *i, a, b }
        }
        (DeltaIS(i, s), SpaceKind::PartitionQuotient) if quot.partition_parts().len() > 1 => {
            let counts = (1..=quot.partition_parts().len() as u32)
                .map(|k| {
                    let (lo, hi) = quot.block_range(k);
                    s.iter().filter(|l| (lo..=hi).contains(l)).count() as u32
                })
                .collect();
            DeltaBlock(*i, counts)
        }
        (DeltaIS(i, s), _) => DeltaOrbit(*i, s.len()),
        (EtaIS(i, s), _) => EtaOrbit(*i, s.len()),
        _ => return Err(Error::Unsupported(format!("no orbit symbol for {sym}"))),
    };
    canonicalize(&raw, quot)
}

fn check_cover(labeled: &SpaceContext, quot: &SpaceContext) -> Result<()> {
    let cover = quot.cover()?;
    if cover.kind() != labeled.kind() || cover.g() != labeled.g() || cover.n() != labeled.n() {
        return Err(Error::MixedContexts);
    }
    Ok(())
}

/// Labeled symbols whose sum is the orbit symbol `sym` of `quot`.
pub fn orbit_members(sym: &BasisSymbol, quot: &SpaceContext) -> Result<Vec<BasisSymbol>> {
    use BasisSymbol::*;
    let cover = quot.cover()?;
    let labels = cover.n();
    let canon = canonicalize(sym, quot)?.ok_or(Error::OutOfRange(format!("{sym} is the zero class")))?;
    let mut members = BTreeSet::new();
    match &canon {
        Lambda | DeltaIrr | Eta0 => {
            members.insert(canon.clone());
        }
        PsiTotal => members.extend((1..=labels).map(Psi)),
        PsiBlock(k) => {
            let (lo, hi) = quot.block_range(*k);
            members.extend((lo..=hi).map(Psi));
        }
        DeltaPair { i, .. } | DeltaOrbit(i, _) | DeltaBlock(i, _) | EtaOrbit(i, _) => {
            let eta = matches!(canon, EtaOrbit(..));
            for s in LabelSet::full(labels).subsets() {
                let lab = if eta { EtaIS(*i, s) } else { DeltaIS(*i, s) };
                if orbit_symbol_of(&lab, quot)?.as_ref() == Some(&canon) {
                    if let Some(c) = canonicalize(&lab, &cover)? {
                        members.insert(c);
                    }
                }
            }
        }
        _ => return Err(Error::Unsupported(format!("{canon} is not an orbit symbol"))),
    }
    Ok(members.into_iter().collect())
}

/// Expands a class on a quotient into the labeled basis of its cover.
pub fn expand(cls: &DivisorClass) -> Result<DivisorClass> {
    let quot = cls.ctx();
    if quot.is_labeled() {
        return Ok(cls.clone());
    }
    let cover = quot.cover()?;
    let mut out = DivisorClass::zero(&cover);
    for (sym, c) in cls.terms() {
        for m in orbit_members(sym, quot)? {
            out.add_term(&m, c)?;
        }
    }
    Ok(out)
}

/// Writes a group-invariant labeled class in the orbit basis of `quot`.
pub fn to_orbit(cls: &DivisorClass, quot: &SpaceContext) -> Result<DivisorClass> {
    check_cover(cls.ctx(), quot)?;
    let mut candidate: BTreeMap<BasisSymbol, Q> = BTreeMap::new();
    for (sym, c) in cls.terms() {
        let o = orbit_symbol_of(sym, quot)?.ok_or(Error::NotInvariant)?;
        if let Some(prev) = candidate.insert(o, c.clone()) {
            if &prev != c {
                return Err(Error::NotInvariant);
            }
        }
    }
    let orbit = DivisorClass::from_terms(quot, candidate)?;
    let back = expand(&orbit)?;
    if back.with_ctx(cls.ctx())? != *cls {
        return Err(Error::NotInvariant);
    }
    Ok(orbit)
}

fn delta0_containing(n: u32, i: u32) -> impl Iterator<Item = LabelSet> {
    LabelSet::full(n)
        .subsets()
        .filter(move |s| s.contains(i) && s.len() >= 2)
}

/// Replaces every `ω_i` by `ψ_i − Σ_{S ∋ i, |S| ≥ 2} δ_{0,S}`.
pub fn omega_to_psi(cls: &DivisorClass) -> Result<DivisorClass> {
    use BasisSymbol::*;
    let ctx = cls.ctx();
    let mut out = DivisorClass::zero(ctx);
    for (sym, c) in cls.terms() {
        match sym {
            OmegaI(i) => {
                out.add_term(&Psi(*i), c)?;
                let neg = -c;
                for s in delta0_containing(ctx.n(), *i) {
                    out.add_term(&DeltaIS(0, s), &neg)?;
                }
            }
            _ => out.add_term(sym, c)?,
        }
    }
    Ok(out)
}

/// Inverse of [`omega_to_psi`]: replaces every `ψ_i` by `ω_i + Σ_{S ∋ i} δ_{0,S}`.
pub fn psi_to_omega(cls: &DivisorClass) -> Result<DivisorClass> {
    use BasisSymbol::*;
    let ctx = cls.ctx();
    if ctx.kind() != SpaceKind::Pointed {
        return Err(Error::Unsupported("ω classes exist only on pointed spaces".into()));
    }
    let mut out = DivisorClass::zero(ctx);
    for (sym, c) in cls.terms() {
        match sym {
            Psi(i) => {
                out.add_term(&OmegaI(*i), c)?;
                for s in delta0_containing(ctx.n(), *i) {
                    out.add_term(&DeltaIS(0, s), c)?;
                }
            }
            _ => out.add_term(sym, c)?,
        }
    }
    Ok(out)
}

/// Restriction to the hyperelliptic locus, eliminating `λ` through
/// `(8g+4)λ = gη_0 + 2Σ(i+1)(g−i)η_{i,S} + 4Σ i(g−i)δ_{i,S}` and using
/// `δ_irr = η_0 + 2Ση_{i,S}`.
///
/// Labeled pointed classes go to the labeled hyperelliptic space; classes on
/// the `S_n` quotient go to the symmetric hyperelliptic space.
pub fn hyperelliptic_restrict(cls: &DivisorClass) -> Result<DivisorClass> {
    use BasisSymbol::*;
    let src = cls.ctx();
    let g = src.g();
    let target = match src.kind() {
        SpaceKind::Pointed => SpaceContext::hyperelliptic_with_cap(g, src.n(), MAX_LABELS)?,
        SpaceKind::PartitionQuotient if src.partition_parts().len() == 1 => {
            SpaceContext::hyperelliptic_symmetric(g, src.n())?
        }
        _ => return Err(Error::Unsupported(format!("hyperelliptic restriction from {src}"))),
    }
    .with_level(src.level());
    let cls = if src.kind() == SpaceKind::Pointed {
        omega_to_psi(cls)?
    } else {
        cls.clone()
    };
    let basis = orbit_basis(&target);
    let gi = i64::from(g);
    let mut lambda_image = DivisorClass::zero(&target);
    let mut irr_image = DivisorClass::zero(&target);
    let denom = ratio(1, 8 * gi + 4);
    lambda_image.add_term(&Eta0, &(int(gi) * &denom))?;
    irr_image.add_term(&Eta0, &Q::one())?;
    for sym in &basis {
        match sym {
            EtaIS(i, _) | EtaOrbit(i, _) => {
                let i = i64::from(*i);
                lambda_image.add_term(sym, &(int(2 * (i + 1) * (gi - i)) * &denom))?;
                irr_image.add_term(sym, &int(2))?;
            }
            DeltaIS(i, _) | DeltaOrbit(i, _) if *i >= 1 => {
                let i = i64::from(*i);
                lambda_image.add_term(sym, &(int(4 * i * (gi - i)) * &denom))?;
            }
            _ => {}
        }
    }
    let mut out = DivisorClass::zero(&target);
    for (sym, c) in cls.terms() {
        match sym {
            Lambda => out = out.try_add(&lambda_image.scale(c))?,
            DeltaIrr => out = out.try_add(&irr_image.scale(c))?,
            Psi(_) | PsiTotal | DeltaIS(..) | DeltaOrbit(..) => out.add_term(sym, c)?,
            _ => return Err(Error::Unsupported(format!("hyperelliptic restriction of {sym}"))),
        }
    }
    Ok(out)
}

/// Pullback along `φ: H̄_g → M̄_{0,2g+2}/S_{2g+2}` of `Σ c_s δ_{0,s}`:
/// `φ*δ_{0,2i+2} = η_i` and `φ*δ_{0,2i+1} = ½ δ_i`.
pub fn rational_quotient_pullback(g: u32, terms: &[(u32, Q)]) -> Result<DivisorClass> {
    use BasisSymbol::*;
    let target = SpaceContext::hyperelliptic(g, 0)?;
    let mut out = DivisorClass::zero(&target);
    for (s, c) in terms {
        if *s < 2 || *s > 2 * g {
            return Err(Error::OutOfRange(format!("δ_{{0,{s}}} on M̄_{{0,{}}}", 2 * g + 2)));
        }
        let s = if *s > g + 1 { 2 * g + 2 - s } else { *s };
        if s % 2 == 0 {
            let i = (s - 2) / 2;
            let sym = if i == 0 { Eta0 } else { EtaIS(i, LabelSet::empty()) };
            out.add_term(&sym, c)?;
        } else {
            let i = (s - 1) / 2;
            out.add_term(&DeltaIS(i, LabelSet::empty()), &(c * ratio(1, 2)))?;
        }
    }
    Ok(out)
}

/// Canonical class of the coarse space `M̄_{0,2g+2}/S_{2g+2}` as `(s, c_s)`.
pub fn rational_quotient_canonical(g: u32) -> Vec<(u32, Q)> {
    let gi = i64::from(g);
    let mut out = Vec::new();
    out.push((2, -(ratio(1, 2) + ratio(1, 2 * gi + 1))));
    for s in 3..=(g + 1) {
        let si = i64::from(s);
        out.push((s, ratio(si * (2 * gi + 2 - si), 2 * gi + 1) - int(2)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use BasisSymbol::*;

    fn set(l: &[u32]) -> LabelSet {
        LabelSet::from_labels(l.iter().copied())
    }

    fn class(ctx: &SpaceContext, terms: &[(BasisSymbol, Q)]) -> DivisorClass {
        DivisorClass::from_terms(ctx, terms.iter().cloned()).unwrap()
    }

    #[test]
    fn single_forgetful_rules() {
        let c1 = SpaceContext::pointed(3, 1).unwrap();
        let c2 = SpaceContext::pointed(3, 2).unwrap();
        let psi = class(&c1, &[(Psi(1), int(1))]);
        assert_eq!(
            forgetful_pullback(&psi, 2).unwrap(),
            class(&c2, &[(Psi(1), int(1)), (DeltaIS(0, set(&[1, 2])), int(-1))])
        );
        let lam = class(&c1, &[(Lambda, int(1))]);
        assert_eq!(forgetful_pullback(&lam, 2).unwrap(), class(&c2, &[(Lambda, int(1))]));
        let d = class(&c1, &[(DeltaIS(1, LabelSet::empty()), int(1))]);
        assert_eq!(
            forgetful_pullback(&d, 2).unwrap(),
            class(
                &c2,
                &[(DeltaIS(1, LabelSet::empty()), int(1)), (DeltaIS(1, set(&[2])), int(1))]
            )
        );
    }

    #[test]
    fn multi_forgetful_psi() {
        let c1 = SpaceContext::pointed(4, 1).unwrap();
        let c3 = SpaceContext::pointed(4, 3).unwrap();
        let psi = class(&c1, &[(Psi(1), int(1))]);
        let expected = class(
            &c3,
            &[
                (Psi(1), int(1)),
                (DeltaIS(0, set(&[1, 2])), int(-1)),
                (DeltaIS(0, set(&[1, 3])), int(-1)),
                (DeltaIS(0, set(&[1, 2, 3])), int(-1)),
            ],
        );
        assert_eq!(multi_forgetful_pullback(&psi, set(&[1]), 3).unwrap(), expected);
        let a = forgetful_pullback(&forgetful_pullback(&psi, 2).unwrap(), 3).unwrap();
        let b = forgetful_pullback(&forgetful_pullback(&psi, 2).unwrap(), 2).unwrap();
        assert_eq!(a, expected);
        assert_eq!(b, expected);
    }

    #[test]
    fn glue_examples() {
        let m6 = SpaceContext::pointed(6, 0).unwrap();
        let d1 = class(&m6, &[(DeltaIS(1, LabelSet::empty()), int(1))]);
        let nod = SpaceContext::nodal(4, 2).unwrap();
        assert_eq!(
            glue_pullback(&d1, 4, 2).unwrap(),
            class(
                &nod,
                &[
                    (DeltaPair { i: 1, a: 0, b: 0 }, int(1)),
                    (DeltaPair { i: 0, a: 1, b: 0 }, int(1))
                ]
            )
        );
        let lam = class(&m6, &[(Lambda, int(1))]);
        assert_eq!(glue_pullback(&lam, 4, 2).unwrap(), class(&nod, &[(Lambda, int(1))]));
        let bad = class(&SpaceContext::pointed(6, 1).unwrap(), &[(Psi(1), int(1))]);
        assert!(glue_pullback(&bad, 5, 1).is_err());
    }

    #[test]
    fn symmetrize_examples() {
        let c = SpaceContext::pointed(3, 3).unwrap();
        let psi1 = class(&c, &[(Psi(1), int(1))]);
        let all = class(&c, &[(Psi(1), int(1)), (Psi(2), int(1)), (Psi(3), int(1))]);
        assert_eq!(symmetrize(&psi1, &Group::FullSymmetric).unwrap(), all);
        let d = class(&c, &[(DeltaIS(0, set(&[1, 2])), int(1))]);
        let sum = class(
            &c,
            &[
                (DeltaIS(0, set(&[1, 2])), int(1)),
                (DeltaIS(0, set(&[1, 3])), int(1)),
                (DeltaIS(0, set(&[2, 3])), int(1)),
            ],
        );
        assert_eq!(symmetrize(&d, &Group::FullSymmetric).unwrap(), sum);
    }

    #[test]
    fn nodal_generators_preserve_pairs() {
        let gens = group_generators(&Group::NodalPairs, 6).unwrap();
        for p in gens {
            for i in 1..=3u32 {
                let (a, b) = (p[(i - 1) as usize], p[(i + 2) as usize]);
                let (lo, hi) = (a.min(b), a.max(b));
                assert_eq!(hi, lo + 3);
            }
        }
    }

    #[test]
    fn omega_round_trip() {
        let c = SpaceContext::pointed(2, 2).unwrap();
        let w = class(&c, &[(OmegaI(1), int(1))]);
        let p = omega_to_psi(&w).unwrap();
        assert_eq!(p, class(&c, &[(Psi(1), int(1)), (DeltaIS(0, set(&[1, 2])), int(-1))]));
        assert_eq!(psi_to_omega(&p).unwrap(), w);
    }

    #[test]
    fn restriction_genus_two() {
        let c = SpaceContext::pointed(2, 0).unwrap();
        let h = SpaceContext::hyperelliptic(2, 0).unwrap();
        let lam = class(&c, &[(Lambda, int(1))]);
        assert_eq!(
            hyperelliptic_restrict(&lam).unwrap(),
            class(
                &h,
                &[(Eta0, ratio(1, 10)), (DeltaIS(1, LabelSet::empty()), ratio(1, 5))]
            )
        );
        let c1 = SpaceContext::pointed(3, 1).unwrap();
        let psi = class(&c1, &[(Psi(1), int(1))]);
        assert_eq!(
            hyperelliptic_restrict(&psi).unwrap(),
            class(&SpaceContext::hyperelliptic(3, 1).unwrap(), &[(Psi(1), int(1))])
        );
    }

    #[test]
    fn rational_quotient_rules() {
        let h = SpaceContext::hyperelliptic(3, 0).unwrap();
        assert_eq!(
            rational_quotient_pullback(3, &[(2, int(1))]).unwrap(),
            class(&h, &[(Eta0, int(1))])
        );
        assert_eq!(
            rational_quotient_pullback(3, &[(3, int(1))]).unwrap(),
            class(&h, &[(DeltaIS(1, LabelSet::empty()), ratio(1, 2))])
        );
        assert!(rational_quotient_pullback(3, &[(1, int(1))]).is_err());
    }
}
