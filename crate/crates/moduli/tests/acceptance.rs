//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::sync::Mutex;

use moduli::moduli_core;
use moduli::parallel;
use moduli_core::basis::orbit_basis;
use moduli_core::campaigns::{
    cutoff_feasible, cutoff_polynomial, eta0_residual, fm_bound, nodal_coords, nodal_generators, overlay_cell,
    overlay_generators, CellRecord, FmReport, GeneratorSet, TableReport, DIFVAR_EXCEPTION, OVERLAY,
};
use moduli_core::catalog::{
    bn_glued, bn_glued_formal, bn_pullback, brill_noether_formal, canonical_class, canonical_class_in, logan_psi,
    slope_min, weierstrass, weierstrass_a, weierstrass_b, Generator, Mode, Scope,
};
use moduli_core::certify::{certify, residual_on, verify, Certificate, Coords, Verdict};
use moduli_core::maps::{forgetful_pullback, glue_pullback, multi_forgetful_pullback, pullback_from_mg};
use moduli_core::rational::{fmt_q, is_prime};
use moduli_core::singularity::hyperelliptic_sweep;
use moduli_core::{BasisSymbol, DivisorClass, LabelSet, Level, SpaceContext, Q};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

type Check = Result<(bool, String), String>;

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn qi(n: i64) -> Q {
    q(n, 1)
}

fn binom(n: i64, k: i64) -> Q {
    if n < 0 || k < 0 || k > n {
        return Q::zero();
    }
    (0..k).fold(Q::one(), |acc, j| acc * qi(n - j) / qi(j + 1))
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Running tally of certificates checked with `verify`.
#[derive(Default)]
struct Tally {
    checked: usize,
    failed: Vec<String>,
    sample: Option<(Certificate, DivisorClass, Vec<Generator>)>,
}

impl Tally {
    fn record(&mut self, label: String, cert: &Certificate, k: &DivisorClass, gens: &[Generator]) {
        self.checked += 1;
        if !verify(cert, k, gens) {
            self.failed.push(label);
        } else if self.sample.is_none() && cert.verdict == Verdict::GeneralType {
            self.sample = Some((cert.clone(), k.clone(), gens.to_vec()));
        }
    }
}

fn nodal_k(g: u32, n: u32) -> Result<DivisorClass, String> {
    let ctx = SpaceContext::nodal(g, n).map_err(err)?;
    canonical_class_in(&ctx, &Scope::Only(nodal_coords(&ctx))).map_err(err)
}

fn verify_cells(
    cells: &[CellRecord],
    gens_of: impl Fn(&CellRecord) -> Result<Vec<Generator>, String> + Sync,
    tally: &Mutex<Tally>,
) -> Result<(), String> {
    cells
        .par_iter()
        .filter(|c| c.verdict != Verdict::Infeasible)
        .try_for_each(|c| {
            let gens = gens_of(c)?;
            let k = nodal_k(c.g, c.n)?;
            tally
                .lock()
                .unwrap()
                .record(format!("nodal ({}, {})", c.g, c.n), &c.certificate, &k, &gens);
            Ok(())
        })
}

fn describe(report: &TableReport) -> String {
    if report.mismatches.is_empty() {
        return format!("{}: all {} rows match", report.id, report.rows.len());
    }
    let items: Vec<String> = report
        .mismatches
        .iter()
        .map(|m| {
            let show = |x: Option<u32>| x.map_or("-".to_string(), |v| v.to_string());
            let mut s = format!(
                "g={} {} expected {} found {}",
                m.g,
                m.field,
                show(m.expected),
                show(m.found)
            );
            if !m.note.is_empty() {
                s.push_str(&format!(" [{}]", m.note));
            }
            s
        })
        .collect();
    format!("{}: {}", report.id, items.join("; "))
}

fn nodal_tables(tally: &Mutex<Tally>) -> Check {
    let genera: Vec<u32> = (5..=23).collect();
    let one = parallel::nodal_report(&genera, GeneratorSet::PropOne).map_err(err)?;
    let (two, fin) = parallel::final_report(&genera).map_err(err)?;
    verify_cells(
        &one.cells,
        |c| nodal_generators(c.g, c.n, GeneratorSet::PropOne).map_err(err),
        tally,
    )?;
    verify_cells(
        &two.cells,
        |c| nodal_generators(c.g, c.n, GeneratorSet::PropTwo).map_err(err),
        tally,
    )?;
    let special: Vec<CellRecord> = OVERLAY
        .iter()
        .map(overlay_cell)
        .collect::<Result<_, _>>()
        .map_err(err)?;
    verify_cells(
        &special,
        |c| {
            let cell = OVERLAY
                .iter()
                .find(|o| o.g == c.g && o.n == c.n)
                .ok_or("unknown special cell")?;
            overlay_generators(cell).map_err(err)
        },
        tally,
    )?;
    let ok = one.failures().is_empty() && two.failures().is_empty() && fin.failures().is_empty();
    Ok((
        ok,
        format!("{} | {} | {}", describe(&one), describe(&two), describe(&fin)),
    ))
}

fn cutoff() -> Check {
    let mut bad_printed = Vec::new();
    let mut bad_cutoff = Vec::new();
    let mut bad_corrected = Vec::new();
    for g in 7..=23u32 {
        for n in 1..=4 * g {
            let feasible = cutoff_feasible(g, n).map_err(err)?;
            if feasible != (cutoff_polynomial(g, n, 1) > 0) {
                bad_printed.push((g, n));
            }
            if feasible != (n <= 2 * g - 4) {
                bad_cutoff.push((g, n));
            }
            if feasible != (cutoff_polynomial(g, n, 4) > 0) {
                bad_corrected.push((g, n));
            }
        }
    }
    let genera: BTreeSet<u32> = bad_printed.iter().map(|p| p.0).collect();
    let detail = format!(
        "n <= 2g-4 disagreements: {}; printed polynomial disagreements: {} cells in {} genera (first {:?}); with leading term 4g^2: {}",
        bad_cutoff.len(),
        bad_printed.len(),
        genera.len(),
        bad_printed.first(),
        bad_corrected.len()
    );
    Ok((bad_printed.is_empty() && bad_cutoff.is_empty(), detail))
}

fn a_oracle(g: u32, n: u32) -> Q {
    let (g, n) = (i64::from(g), i64::from(n));
    if n >= g {
        return q(n, g);
    }
    let (k, r) = (g / n, g % n);
    q(2 * n, (k + 1) * (g + r))
}

fn c_oracle(g: i64, n: i64) -> Q {
    let (k, r) = (g / n, g % n);
    binom(n - 1, r - 1) * q((k + 1) * (k + 2), 2) + binom(n - 1, r) * q(k * (k + 1), 2)
}

fn b_oracle(g: u32, n: u32) -> Q {
    let (g, n) = (i64::from(g), i64::from(n));
    if n >= g {
        return qi(2) + q(g - 1, n - 1);
    }
    let (k, r) = (g / n, g % n);
    let c = c_oracle(g, n);
    let b = qi(2) * &c
        + binom(n - 2, r - 2) * qi((k + 1) * (k + 1))
        + binom(n - 2, r - 1) * qi(2 * k * (k + 1))
        + binom(n - 2, r) * qi(k * k);
    b / c
}

/// Verdict, `ε` and `f` of the partition criterion, from the closed forms.
fn fm_oracle(g: u32, parts: &[u32]) -> (Verdict, Option<Q>, Option<Q>) {
    let max = *parts.iter().max().unwrap();
    if g >= 24 && max < g {
        return (Verdict::GeneralType, None, None);
    }
    let Some(eps) = parts.iter().filter(|&&p| p >= 2).map(|&p| b_oracle(g, p) - qi(3)).min() else {
        return (Verdict::Infeasible, None, None);
    };
    if eps.is_negative() {
        return (Verdict::Infeasible, Some(eps), None);
    }
    let n: u32 = parts.iter().sum();
    let s = slope_min(g).unwrap().slope;
    let one_eps = qi(1) + &eps;
    let sum_a: Q = parts.iter().map(|&p| a_oracle(g, p)).sum();
    let f = qi(2) * s - sum_a / &one_eps - qi(2) * &eps * a_oracle(g, n) / (b_oracle(g, n) * &one_eps);
    let v = match (f <= qi(13), eps.is_positive()) {
        (false, _) => Verdict::Infeasible,
        (true, true) => Verdict::GeneralType,
        (true, false) => Verdict::Effective,
    };
    (v, Some(eps), Some(f))
}

fn partitions(g: u32) -> Vec<Vec<u32>> {
    let top = g + 1;
    let mut out = Vec::new();
    for a in 1..=top {
        out.push(vec![a]);
        for b in 1..=a {
            out.push(vec![a, b]);
            for c in 1..=b {
                out.push(vec![a, b, c]);
                for d in 1..=c {
                    out.push(vec![a, b, c, d]);
                }
            }
        }
    }
    out
}

fn check_fm_report(r: &FmReport, tally: &Mutex<Tally>) {
    if let Some(cert) = &r.certificate {
        let k = canonical_class_in(&cert.context, &Scope::Only(cert.coordinates.clone())).unwrap();
        tally
            .lock()
            .unwrap()
            .record(format!("partition {} {:?}", r.g, r.partition), cert, &k, &r.generators);
    }
}

fn quotients(tally: &Mutex<Tally>) -> Check {
    let grid: Vec<(u32, Vec<u32>)> = (3..=26)
        .flat_map(|g| partitions(g).into_iter().map(move |p| (g, p)))
        .collect();
    let bad: Vec<String> = grid
        .par_iter()
        .filter_map(|(g, parts)| {
            let r = match fm_bound(*g, parts) {
                Ok(r) => r,
                Err(e) => return Some(format!("g={g} {parts:?}: {e}")),
            };
            check_fm_report(&r, tally);
            let (v, eps, f) = fm_oracle(*g, parts);
            let same =
                r.verdict == v && (*g >= 24 && v == Verdict::GeneralType || (r.epsilon == eps && r.f_value == f));
            (!same).then(|| format!("g={g} {parts:?}: found {} expected {v}", r.verdict))
        })
        .collect();
    let report = parallel::difvar_report(&(10..=23).collect::<Vec<_>>()).map_err(err)?;
    for r in &report.certificates {
        check_fm_report(r, tally);
    }
    let exception = report
        .rows
        .iter()
        .find(|r| r.g == DIFVAR_EXCEPTION)
        .and_then(|r| r.n_min);
    let exception_ok = exception.is_some_and(|n| n >= 7);
    let failures: Vec<String> = report
        .mismatches
        .iter()
        .filter(|m| !m.documented)
        .map(|m| format!("g={} expected {:?} found {:?}", m.g, m.expected, m.found))
        .collect();
    let detail = format!(
        "{} partitions checked, {} verdict disagreements{}; difference variety: g={DIFVAR_EXCEPTION} gives {:?} (documented exception), other mismatches: {}",
        grid.len(),
        bad.len(),
        bad.first().map_or(String::new(), |b| format!(" (first: {b})")),
        exception,
        if failures.is_empty() { "none".into() } else { failures.join("; ") }
    );
    Ok((bad.is_empty() && exception_ok && failures.is_empty(), detail))
}

fn threshold() -> Check {
    let rows = parallel::threshold_reports(&(2..=20).collect::<Vec<_>>()).map_err(err)?;
    let off: Vec<String> = rows
        .iter()
        .filter(|r| (r.effective_at, r.big_from) != (Some(4 * r.g + 6), Some(4 * r.g + 7)))
        .map(|r| format!("g={} gives {:?}/{:?}", r.g, r.effective_at, r.big_from))
        .collect();
    let mut eta = Vec::new();
    for g in 2..=20 {
        let v = eta0_residual(g, 4 * g + 6, &Q::zero()).map_err(err)?;
        if !v.is_zero() {
            eta.push(format!("g={g}: {}", fmt_q(&v)));
        }
    }
    let detail = format!(
        "(4g+6, 4g+7) for g=2..20: {}; eta_0 at (4g+6, 0): {}",
        if off.is_empty() {
            "all".to_string()
        } else {
            off.join("; ")
        },
        if eta.is_empty() {
            "all zero".to_string()
        } else {
            eta.join("; ")
        }
    );
    Ok((off.is_empty() && eta.is_empty(), detail))
}

fn stack(g: u32, n: u32) -> Result<SpaceContext, String> {
    Ok(SpaceContext::pointed(g, n).map_err(err)?.with_level(Level::Stack))
}

fn recursion_and_commutativity() -> Result<Vec<String>, String> {
    let mut bad = Vec::new();
    for g in 2..=6u32 {
        for n in 1..=6u32 {
            let k_n = canonical_class(&stack(g, n)?).map_err(err)?;
            let k_prev = canonical_class(&stack(g, n - 1)?).map_err(err)?;
            let pulled = forgetful_pullback(&k_prev, n).map_err(err)?;
            let mut expected = DivisorClass::symbol(&stack(g, n)?, BasisSymbol::Psi(n)).map_err(err)?;
            for i in 1..n {
                expected
                    .add_term(&BasisSymbol::DeltaIS(0, LabelSet::from_labels([i, n])), &qi(-1))
                    .map_err(err)?;
            }
            if k_n.try_sub(&pulled).map_err(err)? != expected {
                bad.push(format!("recursion g={g} n={n}"));
            }
            if n >= 2 {
                let base = canonical_class(&stack(g, n - 2)?).map_err(err)?;
                let full = LabelSet::full(n);
                for a in 1..=n {
                    for b in 1..=n {
                        if a == b {
                            continue;
                        }
                        // forget b (renumbering), then a
                        let kept = full.without(a).without(b);
                        let direct = multi_forgetful_pullback(&base, kept, n).map_err(err)?;
                        let (lo, hi) = (a.min(b), a.max(b));
                        let stepwise =
                            forgetful_pullback(&forgetful_pullback(&base, lo).map_err(err)?, hi).map_err(err)?;
                        if direct != stepwise {
                            bad.push(format!("commutativity g={g} n={n} forgetting {a},{b}"));
                        }
                    }
                }
            }
        }
    }
    Ok(bad)
}

fn brute_force_w() -> Result<Vec<String>, String> {
    let mut bad = Vec::new();
    for g in 2..=6u32 {
        for points in 1..=10u32 {
            let ctx = SpaceContext::pointed(g, points).map_err(err)?;
            let w = weierstrass(&ctx, false).map_err(err)?;
            if points >= g {
                let logan = logan_psi(g, &vec![1; g as usize]).map_err(err)?.class;
                let mut sum = DivisorClass::zero(&ctx);
                for t in LabelSet::full(points).subsets().filter(|t| t.len() == g) {
                    let p = multi_forgetful_pullback(&logan, t, points).map_err(err)?;
                    sum = sum.try_add(&p.with_ctx(&ctx).map_err(err)?).map_err(err)?;
                }
                if sum != w.class {
                    bad.push(format!("W g={g} N={points}"));
                }
            } else {
                // weights k+1 on r points and k on the rest, over all placements
                let (k, r) = (g / points, g % points);
                let mut sum = DivisorClass::zero(&ctx);
                for t in LabelSet::full(points).subsets().filter(|t| t.len() == r) {
                    let weights: Vec<u32> = (1..=points).map(|i| if t.contains(i) { k + 1 } else { k }).collect();
                    let l = logan_psi(g, &weights).map_err(err)?;
                    let known = l.known.clone().unwrap_or_default();
                    let restricted = l.class.project(&known);
                    sum = sum.try_add(&restricted.with_ctx(&ctx).map_err(err)?).map_err(err)?;
                }
                let mut checks = vec![BasisSymbol::Lambda, BasisSymbol::Psi(1)];
                if points >= 2 {
                    checks.push(BasisSymbol::DeltaIS(0, LabelSet::from_labels([1, 2])));
                }
                for c in checks {
                    if sum.coeff(&c) != w.class.coeff(&c) {
                        bad.push(format!("W g={g} N={points} at {c}"));
                    }
                }
            }
        }
    }
    Ok(bad)
}

fn a_closed_form() -> Result<Vec<String>, String> {
    let mut bad = Vec::new();
    for g in 3..=30u32 {
        for n in 2..g {
            let (gi, ni) = (i64::from(g), i64::from(n));
            let ratio = binom(ni, gi % ni) / c_oracle(gi, ni);
            let lib = weierstrass_a(g, n).map_err(err)?;
            if ratio != a_oracle(g, n) || lib != ratio || weierstrass_b(g, n).map_err(err)? != b_oracle(g, n) {
                bad.push(format!("a/b g={g} n={n}"));
            }
        }
    }
    Ok(bad)
}

fn glue_bn() -> Result<Vec<String>, String> {
    let mut bad = Vec::new();
    for g in 4..=12u32 {
        for n in 1..=6u32 {
            let h = g + n;
            let found = glue_pullback(&brill_noether_formal(h).map_err(err)?, g, n).map_err(err)?;
            let ctx = SpaceContext::nodal(g, n).map_err(err)?;
            let d0 = q(i64::from(h) + 1, 6);
            let d = |j: u32| qi(i64::from(j) * i64::from(h - j));
            let mut expected = DivisorClass::zero(&ctx);
            let mut put = |s: BasisSymbol, c: Q| expected.add_term(&s, &c).map_err(err);
            put(BasisSymbol::Lambda, qi(i64::from(h) + 3))?;
            put(BasisSymbol::PsiTotal, d0.clone())?;
            put(BasisSymbol::DeltaIrr, -d0.clone())?;
            for sym in orbit_basis(&ctx) {
                if let BasisSymbol::DeltaPair { i, a, b } = sym {
                    put(sym, if b != 0 { -d0.clone() } else { -d(i + a) })?;
                }
            }
            if found != expected {
                bad.push(format!("D g={g} n={n}"));
            }
        }
    }
    Ok(bad)
}

fn cross_validation() -> Check {
    let parts = [
        ("pullback/recursion", recursion_and_commutativity()?),
        ("brute-force W", brute_force_w()?),
        ("a(g,n) closed form", a_closed_form()?),
        ("glued BN", glue_bn()?),
    ];
    let ok = parts.iter().all(|(_, b)| b.is_empty());
    let detail = parts
        .iter()
        .map(|(name, b)| {
            if b.is_empty() {
                format!("{name}: ok")
            } else {
                format!("{name}: {} failures ({})", b.len(), b.join(", "))
            }
        })
        .collect::<Vec<_>>()
        .join("; ");
    Ok((ok, detail))
}

/// Full-mode sets for a nodal cell: the existing BN pullbacks with `W`, and
/// the formal BN classes with `W` (defined whatever the primality).
fn full_sets(g: u32, n: u32) -> Result<Vec<(&'static str, Vec<Generator>)>, String> {
    let ctx = SpaceContext::nodal(g, n).map_err(err)?;
    let w = weierstrass(&ctx, true).map_err(err)?;
    let mut existing = Vec::new();
    if !is_prime(u64::from(g + 1)) {
        existing.push(bn_pullback(&ctx).map_err(err)?);
    }
    if !is_prime(u64::from(g + n + 1)) {
        existing.push(bn_glued(g, n).map_err(err)?);
    }
    existing.push(w.clone());
    let b = pullback_from_mg(&brill_noether_formal(g).map_err(err)?, &ctx).map_err(err)?;
    let formal = vec![
        Generator::full("B", b, "formal Brill-Noether class pulled back from M_g"),
        bn_glued_formal(g, n, &Scope::All).map_err(err)?,
        w,
    ];
    Ok(vec![("existing", existing), ("formal", formal)])
}

fn reduction(tally: &Mutex<Tally>) -> Check {
    let mut cells = Vec::new();
    for g in 5..=12u32 {
        for n in (g + 1) / 2..=g {
            cells.push((g, n));
        }
    }
    let results: Vec<Result<Vec<(Verdict, Option<String>)>, String>> = cells
        .par_iter()
        .map(|&(g, n)| {
            let ctx = SpaceContext::nodal(g, n).map_err(err)?;
            let k = canonical_class(&ctx).map_err(err)?;
            let mut out = Vec::new();
            for (label, gens) in full_sets(g, n)? {
                if gens.iter().any(|x| x.mode() != Mode::Full) {
                    out.push((
                        Verdict::Infeasible,
                        Some(format!("({g}, {n}) {label}: generator set is not fully known")),
                    ));
                    continue;
                }
                let reduced =
                    certify(&k, &gens, &Coords::Only(nodal_coords(&ctx).into_iter().collect())).map_err(err)?;
                let all = certify(&k, &gens, &Coords::All).map_err(err)?;
                if all.verdict != Verdict::Infeasible {
                    tally
                        .lock()
                        .unwrap()
                        .record(format!("full nodal ({g}, {n}) {label}"), &all, &k, &gens);
                }
                let diff = (reduced.verdict != all.verdict || reduced.sup_epsilon != all.sup_epsilon)
                    .then(|| format!("({g}, {n}) {label}: reduced {} vs all {}", reduced.verdict, all.verdict));
                out.push((all.verdict, diff));
            }
            Ok(out)
        })
        .collect();
    let mut bad = Vec::new();
    let mut counts = [0usize; 3];
    for r in results {
        for (v, diff) in r? {
            counts[v as usize] += 1;
            bad.extend(diff);
        }
    }
    let detail = format!(
        "{} cells, two generator sets each ({} general type, {} effective, {} infeasible), {} disagreements in verdict or sup epsilon{}",
        cells.len(),
        counts[2],
        counts[1],
        counts[0],
        bad.len(),
        bad.first().map_or(String::new(), |b| format!(" (first: {b})"))
    );
    Ok((bad.is_empty(), detail))
}

fn reid_tai() -> Check {
    let rows = hyperelliptic_sweep(20).map_err(err)?;
    let bad: Vec<String> = rows
        .iter()
        .filter(|r| r.found != r.expected)
        .map(|r| {
            let age = r
                .min_age
                .as_ref()
                .map_or(String::new(), |(a, u)| format!(", age {} at unit {u}", fmt_q(a)));
            format!("g={} {:?}: {} expected {}{age}", r.g, r.action, r.found, r.expected)
        })
        .collect();
    let detail = format!(
        "{} actions, {} disagreements{}",
        rows.len(),
        bad.len(),
        if bad.is_empty() {
            String::new()
        } else {
            format!(": {}", bad.join("; "))
        }
    );
    Ok((bad.is_empty(), detail))
}

/// Raises one multiplier on a tight row by a small amount and recomputes the
/// residual; `verify` must reject the result.
fn mutation(cert: &Certificate, k: &DivisorClass, gens: &[Generator]) -> Option<bool> {
    for c in &cert.coordinates {
        if !cert.residual.coeff(c).is_zero() {
            continue;
        }
        for (j, g) in gens.iter().enumerate() {
            let coeff = g.class.coeff(c);
            if coeff.is_zero() {
                continue;
            }
            let mut bad = cert.clone();
            let step = q(1, 1000);
            if coeff.is_positive() {
                bad.multipliers[j] += step;
            } else if cert.multipliers[j] >= step {
                bad.multipliers[j] -= step;
            } else {
                continue;
            }
            bad.residual = residual_on(k, gens, &bad.multipliers, &bad.epsilon, &bad.coordinates).ok()?;
            return Some(!verify(&bad, k, gens));
        }
    }
    None
}

fn integrity(tally: &Mutex<Tally>) -> Check {
    let t = tally.lock().unwrap();
    let mutated = t.sample.as_ref().and_then(|(c, k, g)| mutation(c, k, g));
    let detail = format!(
        "{} certificates verified, {} rejected{}; mutation on a tight row {}",
        t.checked,
        t.failed.len(),
        t.failed.first().map_or(String::new(), |f| format!(" (first: {f})")),
        match mutated {
            Some(true) => "rejected",
            Some(false) => "ACCEPTED",
            None => "not possible",
        }
    );
    Ok((t.checked > 0 && t.failed.is_empty() && mutated == Some(true), detail))
}

fn main() {
    let tally = Mutex::new(Tally::default());
    let criteria: Vec<(&str, Box<dyn Fn() -> Check + '_>)> = vec![
        ("nodal tables", Box::new(|| nodal_tables(&tally))),
        ("cutoff polynomial", Box::new(cutoff)),
        ("quotient criterion", Box::new(|| quotients(&tally))),
        ("hyperelliptic threshold", Box::new(threshold)),
        ("formula cross-validation", Box::new(cross_validation)),
        ("reduction soundness", Box::new(|| reduction(&tally))),
        ("Reid-Tai sweep", Box::new(reid_tai)),
        ("certificate integrity", Box::new(|| integrity(&tally))),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let (ok, detail) = check().unwrap_or_else(|e| (false, format!("error: {e}")));
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {} {name}: {} ({:.1}s) {detail}",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
