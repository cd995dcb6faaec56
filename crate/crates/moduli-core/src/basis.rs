//! Space contexts, basis symbols of the rational Picard group and exact
//! divisor classes.
//!
//! A [`DivisorClass`] is a sparse map from canonical [`BasisSymbol`]s to
//! rational coefficients. Every symbol is put into canonical form when it
//! enters a class, so two classes are equal exactly when their coefficient
//! maps are equal.
//!
//! Boundary divisors `δ_{i,S}` are identified with `δ_{g-i,S^c}`; the stored
//! representative has `i < g-i`. When `i = g-i` the representative is the one
//! whose label set contains the label 1 (for orbit symbols: the smaller size
//! descriptor). `δ_{0,S}` with `|S| <= 1` is the zero class.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, Q};

/// Largest label count for which the fully labeled basis may be built unless a
/// larger cap is requested explicitly.
pub const DEFAULT_FULL_BASIS_CAP: u32 = 12;

/// Hard limit imposed by the bitmask representation of label sets.
pub const MAX_LABELS: u32 = 64;

/// A subset of the labels `1..=64`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct LabelSet(u64);

impl LabelSet {
    pub const fn empty() -> Self {
        LabelSet(0)
    }

    pub fn full(n: u32) -> Self {
        assert!(n <= MAX_LABELS, "label count {n} exceeds {MAX_LABELS}");
        if n == 64 {
            LabelSet(u64::MAX)
        } else {
            LabelSet((1u64 << n) - 1)
        }
    }

    pub fn from_bits(bits: u64) -> Self {
        LabelSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn from_labels<I: IntoIterator<Item = u32>>(labels: I) -> Self {
        labels.into_iter().fold(LabelSet(0), |s, l| s.with(l))
    }

    pub fn with(self, label: u32) -> Self {
        assert!((1..=MAX_LABELS).contains(&label), "label {label} out of range");
        LabelSet(self.0 | (1u64 << (label - 1)))
    }

    pub fn without(self, label: u32) -> Self {
        assert!((1..=MAX_LABELS).contains(&label), "label {label} out of range");
        LabelSet(self.0 & !(1u64 << (label - 1)))
    }

    pub fn contains(self, label: u32) -> bool {
        (1..=MAX_LABELS).contains(&label) && self.0 & (1u64 << (label - 1)) != 0
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn complement(self, n: u32) -> Self {
        LabelSet(LabelSet::full(n).0 & !self.0)
    }

    pub fn union(self, other: Self) -> Self {
        LabelSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        LabelSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        LabelSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Largest label present, or 0 for the empty set.
    pub fn max_label(self) -> u32 {
        64 - self.0.leading_zeros()
    }

    pub fn iter(self) -> impl Iterator<Item = u32> {
        let bits = self.0;
        (1..=MAX_LABELS).filter(move |&l| bits & (1u64 << (l - 1)) != 0)
    }

    /// All subsets of `self`.
    pub fn subsets(self) -> impl Iterator<Item = LabelSet> {
        let mask = self.0;
        let mut next = Some(0u64);
        core::iter::from_fn(move || {
            let cur = next?;
            next = if cur == mask {
                None
            } else {
                Some((cur.wrapping_sub(mask)) & mask)
            };
            Some(LabelSet(cur))
        })
    }
}

impl Ord for LabelSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for LabelSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, l) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("}")
    }
}

impl FromStr for LabelSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("label set `{s}`")))?;
        let mut set = LabelSet::empty();
        for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let l: u32 = part.parse().map_err(|_| Error::Parse(format!("label `{part}`")))?;
            if !(1..=MAX_LABELS).contains(&l) {
                return Err(Error::Parse(format!("label {l} out of range")));
            }
            set = set.with(l);
        }
        Ok(set)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpaceKind {
    Pointed,
    NodalQuotient,
    PartitionQuotient,
    Hyperelliptic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    Stack,
    Coarse,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Stack => "stack",
            Level::Coarse => "coarse",
        })
    }
}

/// Which label permutations act on a labeled cover.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Group {
    /// `S_n` on all labels.
    FullSymmetric,
    /// Product of symmetric groups on consecutive blocks of labels.
    Partition(Vec<u32>),
    /// `(Z/2)^n ⋊ S_n` on `2n` labels paired as `(i, n+i)`.
    NodalPairs,
}

/// The moduli space (or quotient) on which classes live.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpaceContext {
    kind: SpaceKind,
    g: u32,
    n: u32,
    partition: Vec<u32>,
    level: Level,
}

impl SpaceContext {
    fn checked(kind: SpaceKind, g: u32, n: u32, partition: Vec<u32>) -> Result<Self> {
        if g < 2 {
            return Err(Error::InvalidContext(format!("genus {g} < 2")));
        }
        Ok(SpaceContext {
            kind,
            g,
            n,
            partition,
            level: Level::Coarse,
        })
    }

    /// `M̄_{g,n}` with its labeled basis, `n <= DEFAULT_FULL_BASIS_CAP`.
    pub fn pointed(g: u32, n: u32) -> Result<Self> {
        Self::pointed_with_cap(g, n, DEFAULT_FULL_BASIS_CAP)
    }

    pub fn pointed_with_cap(g: u32, n: u32, cap: u32) -> Result<Self> {
        if n > cap.min(MAX_LABELS) {
            return Err(Error::InvalidContext(format!(
                "labeled basis with {n} points exceeds the cap {}",
                cap.min(MAX_LABELS)
            )));
        }
        Self::checked(SpaceKind::Pointed, g, n, Vec::new())
    }

    /// `M̄_{g,2n}/G` with `G = (Z/2)^n ⋊ S_n`; `n` counts node pairs.
    /// Only the labeled cover is limited in size.
    pub fn nodal(g: u32, n: u32) -> Result<Self> {
        Self::checked(SpaceKind::NodalQuotient, g, n, Vec::new())
    }

    /// `M̄_{g,n}/(S_{n_1} × … × S_{n_m})`.
    pub fn partition(g: u32, parts: &[u32]) -> Result<Self> {
        if parts.is_empty() || parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidPartition(format!("{parts:?}")));
        }
        let n: u32 = parts.iter().sum();
        Self::checked(SpaceKind::PartitionQuotient, g, n, parts.to_vec())
    }

    /// `H̄_{g,n}` with labeled points.
    pub fn hyperelliptic(g: u32, n: u32) -> Result<Self> {
        Self::hyperelliptic_with_cap(g, n, DEFAULT_FULL_BASIS_CAP)
    }

    pub fn hyperelliptic_with_cap(g: u32, n: u32, cap: u32) -> Result<Self> {
        if n > cap.min(MAX_LABELS) {
            return Err(Error::InvalidContext(format!(
                "labeled basis with {n} points exceeds the cap {}",
                cap.min(MAX_LABELS)
            )));
        }
        Self::checked(SpaceKind::Hyperelliptic, g, n, Vec::new())
    }

    /// `H̄_{g,n}/S_n`, using orbit symbols. Any number of points is allowed.
    pub fn hyperelliptic_symmetric(g: u32, n: u32) -> Result<Self> {
        let parts = if n == 0 { Vec::new() } else { vec![n] };
        Self::checked(SpaceKind::Hyperelliptic, g, n, parts)
    }

    pub fn with_level(mut self, level: Level) -> Self {
        self.level = level;
        self
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn g(&self) -> u32 {
        self.g
    }

    /// Marked points, or node pairs for the nodal quotient.
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn partition_parts(&self) -> &[u32] {
        &self.partition
    }

    pub fn level(&self) -> Level {
        self.level
    }

    /// Number of labels on the labeled cover.
    pub fn labels(&self) -> u32 {
        match self.kind {
            SpaceKind::NodalQuotient => 2 * self.n,
            _ => self.n,
        }
    }

    pub fn is_labeled(&self) -> bool {
        match self.kind {
            SpaceKind::Pointed => true,
            SpaceKind::Hyperelliptic => self.partition.is_empty(),
            _ => false,
        }
    }

    fn single_block(&self) -> bool {
        match self.kind {
            SpaceKind::PartitionQuotient => self.partition.len() == 1,
            SpaceKind::Hyperelliptic => !self.partition.is_empty(),
            _ => false,
        }
    }

    fn multi_block(&self) -> bool {
        self.kind == SpaceKind::PartitionQuotient && self.partition.len() > 1
    }

    /// Labeled space that this quotient is a quotient of.
    pub fn cover(&self) -> Result<SpaceContext> {
        let labels = self.labels();
        let c = match self.kind {
            SpaceKind::Hyperelliptic => Self::hyperelliptic_with_cap(self.g, labels, MAX_LABELS)?,
            _ => Self::pointed_with_cap(self.g, labels, MAX_LABELS)?,
        };
        Ok(c.with_level(self.level))
    }

    /// Group acting on the labels of the cover, if this is a quotient.
    pub fn group(&self) -> Option<Group> {
        match self.kind {
            SpaceKind::NodalQuotient => Some(Group::NodalPairs),
            SpaceKind::PartitionQuotient if self.partition.len() == 1 => Some(Group::FullSymmetric),
            SpaceKind::PartitionQuotient => Some(Group::Partition(self.partition.clone())),
            SpaceKind::Hyperelliptic if !self.partition.is_empty() => Some(Group::FullSymmetric),
            _ => None,
        }
    }

    /// Label range `(first, last)` of block `k` (1-based).
    pub fn block_range(&self, k: u32) -> (u32, u32) {
        let before: u32 = self.partition[..(k - 1) as usize].iter().sum();
        (before + 1, before + self.partition[(k - 1) as usize])
    }
}

impl fmt::Display for SpaceContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SpaceKind::Pointed => write!(f, "pointed(g={}, n={}, {})", self.g, self.n, self.level),
            SpaceKind::NodalQuotient => write!(f, "nodal(g={}, n={}, {})", self.g, self.n, self.level),
            SpaceKind::PartitionQuotient => {
                write!(f, "partition(g={}, parts={:?}, {})", self.g, self.partition, self.level)
            }
            SpaceKind::Hyperelliptic if self.partition.is_empty() => {
                write!(f, "hyperelliptic(g={}, n={}, {})", self.g, self.n, self.level)
            }
            SpaceKind::Hyperelliptic => {
                write!(f, "hyperelliptic-sym(g={}, n={}, {})", self.g, self.n, self.level)
            }
        }
    }
}

/// A generator of the rational Picard group of some space context.
///
/// The derived order is the basis order used everywhere: `λ`, point classes,
/// `δ_irr`/`η_0`, then boundary symbols by genus index and size data.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisSymbol {
    Lambda,
    Psi(u32),
    PsiTotal,
    /// Sum of `ψ_i` over block `k` (1-based) of a partition quotient.
    PsiBlock(u32),
    OmegaI(u32),
    DeltaIrr,
    Eta0,
    EtaIS(u32, LabelSet),
    EtaOrbit(u32, u32),
    DeltaIS(u32, LabelSet),
    DeltaOrbit(u32, u32),
    /// `δ_{i;a,b}`: genus `i` side holds `a` full pairs and `b` single points.
    DeltaPair {
        i: u32,
        a: u32,
        b: u32,
    },
    DeltaBlock(u32, Vec<u32>),
}

impl BasisSymbol {
    pub fn is_boundary(&self) -> bool {
        !matches!(
            self,
            BasisSymbol::Lambda
                | BasisSymbol::Psi(_)
                | BasisSymbol::PsiTotal
                | BasisSymbol::PsiBlock(_)
                | BasisSymbol::OmegaI(_)
        )
    }

    /// Genus index of a (canonical) separating boundary symbol.
    pub fn genus_index(&self) -> Option<u32> {
        match self {
            BasisSymbol::DeltaIS(i, _)
            | BasisSymbol::DeltaOrbit(i, _)
            | BasisSymbol::DeltaPair { i, .. }
            | BasisSymbol::DeltaBlock(i, _) => Some(*i),
            _ => None,
        }
    }
}

impl fmt::Display for BasisSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisSymbol::Lambda => f.write_str("lambda"),
            BasisSymbol::Psi(i) => write!(f, "psi_{i}"),
            BasisSymbol::PsiTotal => f.write_str("psi_total"),
            BasisSymbol::PsiBlock(k) => write!(f, "psi_block_{k}"),
            BasisSymbol::OmegaI(i) => write!(f, "omega_{i}"),
            BasisSymbol::DeltaIrr => f.write_str("delta_irr"),
            BasisSymbol::Eta0 => f.write_str("eta_0"),
            BasisSymbol::EtaIS(i, s) => write!(f, "eta_{i}_{s}"),
            BasisSymbol::EtaOrbit(i, s) => write!(f, "eta_{i}_s{s}"),
            BasisSymbol::DeltaIS(i, s) => write!(f, "delta_{i}_{s}"),
            BasisSymbol::DeltaOrbit(i, s) => write!(f, "delta_{i}_s{s}"),
            BasisSymbol::DeltaPair { i, a, b } => write!(f, "delta_{i};{a},{b}"),
            BasisSymbol::DeltaBlock(i, c) => {
                write!(f, "delta_{i}_[")?;
                for (k, x) in c.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str("]")
            }
        }
    }
}

fn parse_u32(s: &str, whole: &str) -> Result<u32> {
    s.trim().parse().map_err(|_| Error::Parse(format!("symbol `{whole}`")))
}

impl FromStr for BasisSymbol {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("symbol `{s}`"));
        match s {
            "lambda" => return Ok(BasisSymbol::Lambda),
            "psi_total" | "psi" => return Ok(BasisSymbol::PsiTotal),
            "delta_irr" => return Ok(BasisSymbol::DeltaIrr),
            "eta_0" => return Ok(BasisSymbol::Eta0),
            _ => {}
        }
        if let Some(k) = s.strip_prefix("psi_block_") {
            return Ok(BasisSymbol::PsiBlock(parse_u32(k, s)?));
        }
        if let Some(i) = s.strip_prefix("psi_") {
            return Ok(BasisSymbol::Psi(parse_u32(i, s)?));
        }
        if let Some(i) = s.strip_prefix("omega_") {
            return Ok(BasisSymbol::OmegaI(parse_u32(i, s)?));
        }
        let (eta, rest) = if let Some(r) = s.strip_prefix("delta_") {
            (false, r)
        } else if let Some(r) = s.strip_prefix("eta_") {
            (true, r)
        } else {
            return Err(bad());
        };
        if !eta {
            if let Some((i, ab)) = rest.split_once(';') {
                let (a, b) = ab.split_once(',').ok_or_else(bad)?;
                return Ok(BasisSymbol::DeltaPair {
                    i: parse_u32(i, s)?,
                    a: parse_u32(a, s)?,
                    b: parse_u32(b, s)?,
                });
            }
        }
        let (i, tail) = rest.split_once('_').ok_or_else(bad)?;
        let i = parse_u32(i, s)?;
        if tail.starts_with('{') {
            let set: LabelSet = tail.parse()?;
            return Ok(if eta {
                BasisSymbol::EtaIS(i, set)
            } else {
                BasisSymbol::DeltaIS(i, set)
            });
        }
        if let Some(sz) = tail.strip_prefix('s') {
            let sz = parse_u32(sz, s)?;
            return Ok(if eta {
                BasisSymbol::EtaOrbit(i, sz)
            } else {
                BasisSymbol::DeltaOrbit(i, sz)
            });
        }
        if !eta {
            if let Some(inner) = tail.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
                let counts = inner
                    .split(',')
                    .map(|c| parse_u32(c, s))
                    .collect::<Result<Vec<u32>>>()?;
                return Ok(BasisSymbol::DeltaBlock(i, counts));
            }
        }
        Err(bad())
    }
}

fn invalid(sym: &BasisSymbol, ctx: &SpaceContext) -> Error {
    Error::InvalidSymbol {
        sym: sym.to_string(),
        ctx: ctx.to_string(),
    }
}

fn tie_set(a: LabelSet, b: LabelSet) -> LabelSet {
    if a.contains(1) {
        a
    } else if b.contains(1) {
        b
    } else {
        a.min(b)
    }
}

/// Returns the canonical representative of `sym` on `ctx`, `None` for the
/// zero class, or an error if the symbol does not belong to `ctx`.
pub fn canonicalize(sym: &BasisSymbol, ctx: &SpaceContext) -> Result<Option<BasisSymbol>> {
    use BasisSymbol::*;
    let g = ctx.g;
    let n = ctx.n;
    let hyper = ctx.kind == SpaceKind::Hyperelliptic;
    let labeled = ctx.is_labeled();
    let err = || invalid(sym, ctx);
    let out = match sym {
        Lambda => {
            if hyper {
                return Err(err());
            }
            Lambda
        }
        DeltaIrr => {
            if hyper {
                return Err(err());
            }
            DeltaIrr
        }
        Psi(i) => {
            if !labeled || *i == 0 || *i > n {
                return Err(err());
            }
            Psi(*i)
        }
        OmegaI(i) => {
            if ctx.kind != SpaceKind::Pointed || *i == 0 || *i > n {
                return Err(err());
            }
            OmegaI(*i)
        }
        PsiTotal => {
            let ok = ctx.kind == SpaceKind::NodalQuotient || ctx.single_block();
            if !ok {
                return Err(err());
            }
            PsiTotal
        }
        PsiBlock(k) => {
            if !ctx.multi_block() || *k == 0 || *k as usize > ctx.partition.len() {
                return Err(err());
            }
            PsiBlock(*k)
        }
        Eta0 => {
            if !hyper {
                return Err(err());
            }
            Eta0
        }
        EtaIS(i, s) => {
            if !hyper || !labeled || *i + 1 > g || !s.is_subset(LabelSet::full(n)) {
                return Err(err());
            }
            let j = g - 1 - *i;
            let (i2, s2) = match (*i).cmp(&j) {
                Ordering::Less => (*i, *s),
                Ordering::Greater => (j, s.complement(n)),
                Ordering::Equal => (*i, tie_set(*s, s.complement(n))),
            };
            if i2 == 0 {
                return Err(err());
            }
            EtaIS(i2, s2)
        }
        EtaOrbit(i, s) => {
            if !hyper || !ctx.single_block() || *i + 1 > g || *s > n {
                return Err(err());
            }
            let j = g - 1 - *i;
            let (i2, s2) = match (*i).cmp(&j) {
                Ordering::Less => (*i, *s),
                Ordering::Greater => (j, n - *s),
                Ordering::Equal => (*i, (*s).min(n - *s)),
            };
            if i2 == 0 {
                return Err(err());
            }
            EtaOrbit(i2, s2)
        }
        DeltaIS(i, s) => {
            if !labeled || *i > g || !s.is_subset(LabelSet::full(n)) {
                return Err(err());
            }
            let (i2, s2) = match (2 * *i).cmp(&g) {
                Ordering::Less => (*i, *s),
                Ordering::Greater => (g - *i, s.complement(n)),
                Ordering::Equal => (*i, tie_set(*s, s.complement(n))),
            };
            if i2 == 0 && s2.len() <= 1 {
                return Ok(None);
            }
            DeltaIS(i2, s2)
        }
        DeltaOrbit(i, s) => {
            if !ctx.single_block() || *i > g || *s > n {
                return Err(err());
            }
            let (i2, s2) = match (2 * *i).cmp(&g) {
                Ordering::Less => (*i, *s),
                Ordering::Greater => (g - *i, n - *s),
                Ordering::Equal => (*i, (*s).min(n - *s)),
            };
            if i2 == 0 && s2 <= 1 {
                return Ok(None);
            }
            DeltaOrbit(i2, s2)
        }
        DeltaPair { i, a, b } => {
            if ctx.kind != SpaceKind::NodalQuotient || *i > g || *a + *b > n {
                return Err(err());
            }
            let c = n - *a - *b;
            let (i2, a2) = match (2 * *i).cmp(&g) {
                Ordering::Less => (*i, *a),
                Ordering::Greater => (g - *i, c),
                Ordering::Equal => (*i, (*a).min(c)),
            };
            if i2 == 0 && 2 * a2 + *b <= 1 {
                return Ok(None);
            }
            DeltaPair { i: i2, a: a2, b: *b }
        }
        DeltaBlock(i, counts) => {
            if !ctx.multi_block()
                || *i > g
                || counts.len() != ctx.partition.len()
                || counts.iter().zip(&ctx.partition).any(|(c, p)| c > p)
            {
                return Err(err());
            }
            let comp: Vec<u32> = counts.iter().zip(&ctx.partition).map(|(c, p)| p - c).collect();
            let (i2, c2) = match (2 * *i).cmp(&g) {
                Ordering::Less => (*i, counts.clone()),
                Ordering::Greater => (g - *i, comp),
                Ordering::Equal => (*i, counts.clone().min(comp)),
            };
            if i2 == 0 && c2.iter().sum::<u32>() <= 1 {
                return Ok(None);
            }
            DeltaBlock(i2, c2)
        }
    };
    Ok(Some(out))
}

fn all_counts(parts: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &p in parts {
        let mut next = Vec::new();
        for v in &out {
            for c in 0..=p {
                let mut w = v.clone();
                w.push(c);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// Every basis generator of `ctx` in basis order.
pub fn orbit_basis(ctx: &SpaceContext) -> Vec<BasisSymbol> {
    use BasisSymbol::*;
    let g = ctx.g;
    let n = ctx.n;
    let mut set: BTreeSet<BasisSymbol> = BTreeSet::new();
    let mut push = |s: BasisSymbol| {
        if let Ok(Some(c)) = canonicalize(&s, ctx) {
            set.insert(c);
        }
    };
    match ctx.kind {
        SpaceKind::Hyperelliptic => {
            push(Eta0);
            if ctx.is_labeled() {
                (1..=n).for_each(|i| push(Psi(i)));
                for s in LabelSet::full(n).subsets() {
                    for i in 1..g {
                        push(EtaIS(i, s));
                    }
                    for i in 0..=g {
                        push(DeltaIS(i, s));
                    }
                }
            } else {
                push(PsiTotal);
                for s in 0..=n {
                    for i in 1..g {
                        push(EtaOrbit(i, s));
                    }
                    for i in 0..=g {
                        push(DeltaOrbit(i, s));
                    }
                }
            }
        }
        _ => {
            push(Lambda);
            push(DeltaIrr);
            match ctx.kind {
                SpaceKind::Pointed => {
                    (1..=n).for_each(|i| push(Psi(i)));
                    for s in LabelSet::full(n).subsets() {
                        for i in 0..=g {
                            push(DeltaIS(i, s));
                        }
                    }
                }
                SpaceKind::NodalQuotient => {
                    push(PsiTotal);
                    for i in 0..=g {
                        for a in 0..=n {
                            for b in 0..=(n - a) {
                                push(DeltaPair { i, a, b });
                            }
                        }
                    }
                }
                _ if ctx.single_block() => {
                    push(PsiTotal);
                    for i in 0..=g {
                        for s in 0..=n {
                            push(DeltaOrbit(i, s));
                        }
                    }
                }
                _ => {
                    for k in 1..=ctx.partition.len() as u32 {
                        push(PsiBlock(k));
                    }
                    for i in 0..=g {
                        for c in all_counts(&ctx.partition) {
                            push(DeltaBlock(i, c));
                        }
                    }
                }
            }
        }
    }
    set.into_iter().collect()
}

/// Exact rational divisor class on a fixed space context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorClass {
    ctx: SpaceContext,
    coeffs: BTreeMap<BasisSymbol, Q>,
}

impl DivisorClass {
    pub fn zero(ctx: &SpaceContext) -> Self {
        DivisorClass {
            ctx: ctx.clone(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn symbol(ctx: &SpaceContext, sym: BasisSymbol) -> Result<Self> {
        Self::from_terms(ctx, [(sym, Q::one())])
    }

    pub fn from_terms<I: IntoIterator<Item = (BasisSymbol, Q)>>(ctx: &SpaceContext, terms: I) -> Result<Self> {
        let mut c = Self::zero(ctx);
        for (s, q) in terms {
            c.add_term(&s, &q)?;
        }
        Ok(c)
    }

    pub fn ctx(&self) -> &SpaceContext {
        &self.ctx
    }

    /// Adds `coeff · sym`, canonicalizing the symbol first.
    pub fn add_term(&mut self, sym: &BasisSymbol, coeff: &Q) -> Result<()> {
        if let Some(c) = canonicalize(sym, &self.ctx)? {
            self.add_canonical(c, coeff);
        }
        Ok(())
    }

    pub(crate) fn add_canonical(&mut self, sym: BasisSymbol, coeff: &Q) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(sym);
        match entry {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff.clone());
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                let v = o.get() + coeff;
                if v.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
        }
    }

    /// Coefficient of `sym` (canonicalized); zero for absent or invalid symbols.
    pub fn coeff(&self, sym: &BasisSymbol) -> Q {
        match canonicalize(sym, &self.ctx) {
            Ok(Some(c)) => self.coeffs.get(&c).cloned().unwrap_or_else(Q::zero),
            _ => Q::zero(),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisSymbol, &Q)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, k: &Q) -> Self {
        if k.is_zero() {
            return Self::zero(&self.ctx);
        }
        DivisorClass {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().map(|(s, c)| (s.clone(), c * k)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.ctx != other.ctx {
            return Err(Error::MixedContexts);
        }
        let mut out = self.clone();
        for (s, c) in &other.coeffs {
            out.add_canonical(s.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    /// Same coefficients on another context (used when only the level differs).
    pub fn with_ctx(&self, ctx: &SpaceContext) -> Result<Self> {
        Self::from_terms(ctx, self.coeffs.iter().map(|(s, c)| (s.clone(), c.clone())))
    }

    /// True when every coefficient is nonnegative.
    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.values().all(|c| !c.is_negative())
    }

    /// Restriction to the given symbols.
    pub fn project(&self, keep: &BTreeSet<BasisSymbol>) -> Self {
        DivisorClass {
            ctx: self.ctx.clone(),
            coeffs: self
                .coeffs
                .iter()
                .filter(|(s, _)| keep.contains(*s))
                .map(|(s, c)| (s.clone(), c.clone()))
                .collect(),
        }
    }
}

/// Exact linear combination `Σ c_k · D_k`.
pub fn combine(terms: &[(Q, &DivisorClass)]) -> Result<DivisorClass> {
    let (_, first) = terms.first().ok_or(Error::EmptyCombination)?;
    let mut out = DivisorClass::zero(first.ctx());
    for (k, d) in terms {
        if d.ctx() != first.ctx() {
            return Err(Error::MixedContexts);
        }
        for (s, c) in d.terms() {
            out.add_canonical(s.clone(), &(c * k));
        }
    }
    Ok(out)
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (k, (s, c)) in self.coeffs.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({}) {}", fmt_q(c), s)?;
        }
        Ok(())
    }
}

/// Short text form of a context, e.g. for report rows.
pub fn ctx_label(ctx: &SpaceContext) -> String {
    ctx.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use BasisSymbol::*;

    fn set(l: &[u32]) -> LabelSet {
        LabelSet::from_labels(l.iter().copied())
    }

    #[test]
    fn label_set_order_and_subsets() {
        assert!(set(&[3]) < set(&[1, 2]));
        assert!(set(&[1, 3]) < set(&[2, 3]));
        assert_eq!(set(&[1, 3]).subsets().count(), 4);
        assert_eq!(LabelSet::empty().subsets().count(), 1);
        assert_eq!("{1,3}".parse::<LabelSet>().unwrap(), set(&[1, 3]));
        assert_eq!(set(&[2, 5]).max_label(), 5);
    }

    #[test]
    fn small_bases() {
        let c = SpaceContext::pointed(2, 0).unwrap();
        assert_eq!(orbit_basis(&c), vec![Lambda, DeltaIrr, DeltaIS(1, LabelSet::empty())]);
        let c = SpaceContext::pointed(3, 1).unwrap();
        assert_eq!(
            orbit_basis(&c),
            vec![
                Lambda,
                Psi(1),
                DeltaIrr,
                DeltaIS(1, LabelSet::empty()),
                DeltaIS(1, set(&[1]))
            ]
        );
    }

    #[test]
    fn canonical_forms() {
        let c = SpaceContext::pointed(5, 4).unwrap();
        assert_eq!(canonicalize(&DeltaIS(0, set(&[3])), &c).unwrap(), None);
        let c = SpaceContext::pointed(5, 2).unwrap();
        assert_eq!(
            canonicalize(&DeltaIS(4, set(&[1])), &c).unwrap(),
            Some(DeltaIS(1, set(&[2])))
        );
        assert_eq!(
            canonicalize(&DeltaIS(1, set(&[1, 2])), &c).unwrap(),
            Some(DeltaIS(1, set(&[1, 2])))
        );
        let c = SpaceContext::pointed(4, 3).unwrap();
        assert_eq!(
            canonicalize(&DeltaIS(2, set(&[2, 3])), &c).unwrap(),
            Some(DeltaIS(2, set(&[1])))
        );
        assert!(canonicalize(&Psi(4), &c).is_err());
        assert!(canonicalize(&PsiTotal, &c).is_err());
    }

    #[test]
    fn nodal_canonical_forms() {
        let c = SpaceContext::nodal(5, 2).unwrap();
        assert_eq!(canonicalize(&DeltaPair { i: 0, a: 0, b: 1 }, &c).unwrap(), None);
        assert_eq!(
            canonicalize(&DeltaPair { i: 5, a: 0, b: 1 }, &c).unwrap(),
            Some(DeltaPair { i: 0, a: 1, b: 1 })
        );
        let c = SpaceContext::nodal(4, 3).unwrap();
        assert_eq!(
            canonicalize(&DeltaPair { i: 2, a: 2, b: 1 }, &c).unwrap(),
            Some(DeltaPair { i: 2, a: 0, b: 1 })
        );
        assert!(canonicalize(&DeltaPair { i: 0, a: 2, b: 2 }, &c).is_err());
    }

    #[test]
    fn hyperelliptic_symbols() {
        let c = SpaceContext::hyperelliptic(5, 2).unwrap();
        assert_eq!(
            canonicalize(&EtaIS(3, set(&[1])), &c).unwrap(),
            Some(EtaIS(1, set(&[2])))
        );
        assert_eq!(
            canonicalize(&EtaIS(2, set(&[2])), &c).unwrap(),
            Some(EtaIS(2, set(&[1])))
        );
        assert!(canonicalize(&EtaIS(0, set(&[1])), &c).is_err());
        assert!(canonicalize(&Lambda, &c).is_err());
        let b = orbit_basis(&SpaceContext::hyperelliptic(2, 0).unwrap());
        assert_eq!(b, vec![Eta0, DeltaIS(1, LabelSet::empty())]);
    }

    #[test]
    fn class_algebra() {
        let c = SpaceContext::pointed(3, 2).unwrap();
        let k = DivisorClass::from_terms(&c, [(Lambda, int(13)), (Psi(1), int(1))]).unwrap();
        assert!(combine(&[(int(1), &k), (int(-1), &k)]).unwrap().is_zero());
        let two = DivisorClass::from_terms(&c, [(Lambda, int(2))]).unwrap();
        let half = crate::rational::ratio(1, 2);
        assert_eq!(
            combine(&[(half, &two)]).unwrap(),
            DivisorClass::symbol(&c, Lambda).unwrap()
        );
        let d = DivisorClass::from_terms(&c, [(DeltaIS(2, set(&[1])), int(1))]).unwrap();
        assert_eq!(d.coeff(&DeltaIS(1, set(&[2]))), int(1));
        let other = SpaceContext::pointed(3, 3).unwrap();
        assert_eq!(k.try_add(&DivisorClass::zero(&other)), Err(Error::MixedContexts));
    }

    #[test]
    fn symbol_text_round_trip() {
        let c = SpaceContext::partition(6, &[2, 3]).unwrap();
        let mut syms = orbit_basis(&c);
        syms.extend(orbit_basis(&SpaceContext::nodal(5, 2).unwrap()));
        syms.extend(orbit_basis(&SpaceContext::hyperelliptic(5, 2).unwrap()));
        syms.extend(orbit_basis(&SpaceContext::hyperelliptic_symmetric(5, 3).unwrap()));
        syms.push(OmegaI(2));
        for s in syms {
            assert_eq!(s.to_string().parse::<BasisSymbol>().unwrap(), s);
        }
    }
}
