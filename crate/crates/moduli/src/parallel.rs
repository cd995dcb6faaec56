//! Campaign drivers running grid cells on a bounded worker pool.
//!
//! The pool size comes from `MODULI_JOBS` (default: one worker per core).
//! Cells are independent and results are sorted before assembly, so the
//! output does not depend on the number of workers.

use moduli_core::campaigns::{
    assemble_final, assemble_nodal, difvar_campaign, hyperelliptic_threshold, nodal_cell, nodal_grid, overlay_cell,
    DifvarReport, GeneratorSet, TableReport, ThresholdReport, OVERLAY,
};
use moduli_core::Result;
use rayon::prelude::*;

pub const JOBS_VAR: &str = "MODULI_JOBS";

/// Worker count from `MODULI_JOBS`, if set to a positive integer.
pub fn jobs() -> Option<usize> {
    std::env::var(JOBS_VAR).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

fn pool() -> rayon::ThreadPool {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs() {
        b = b.num_threads(n);
    }
    b.build().expect("worker pool")
}

pub fn nodal_report(genera: &[u32], set: GeneratorSet) -> Result<TableReport> {
    let grid = nodal_grid(genera);
    let cells = pool().install(|| {
        grid.par_iter()
            .map(|&(g, n)| nodal_cell(g, n, set))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(assemble_nodal(set, cells))
}

/// Final nodal table: second generator set plus the special cells of the
/// requested genera.
pub fn final_report(genera: &[u32]) -> Result<(TableReport, TableReport)> {
    let prop_two = nodal_report(genera, GeneratorSet::PropTwo)?;
    let cells: Vec<_> = OVERLAY.iter().filter(|c| genera.contains(&c.g)).collect();
    let overlay = pool().install(|| cells.par_iter().map(|c| overlay_cell(c)).collect::<Result<Vec<_>>>())?;
    let fin = assemble_final(&prop_two, overlay);
    Ok((prop_two, fin))
}

pub fn difvar_report(genera: &[u32]) -> Result<DifvarReport> {
    let parts = pool().install(|| {
        genera
            .par_iter()
            .map(|&g| difvar_campaign(&[g]))
            .collect::<Result<Vec<_>>>()
    })?;
    let mut out = DifvarReport {
        rows: Vec::new(),
        mismatches: Vec::new(),
        certificates: Vec::new(),
    };
    for p in parts {
        out.rows.extend(p.rows);
        out.mismatches.extend(p.mismatches);
        out.certificates.extend(p.certificates);
    }
    Ok(out)
}

pub fn threshold_reports(genera: &[u32]) -> Result<Vec<ThresholdReport>> {
    pool().install(|| genera.par_iter().map(|&g| hyperelliptic_threshold(g)).collect())
}
