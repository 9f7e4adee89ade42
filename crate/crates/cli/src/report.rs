//! Machine-readable report types.

use maxcurves::gf::FieldCtx;
use maxcurves::maximal::ClassificationReport;
use serde::Serialize;
use std::collections::BTreeMap;

/// One nu-table CSV row.
pub struct NuRow {
    pub q: u64,
    pub case: String,
    pub nu_formula: u64,
    pub nu_direct: u64,
    pub fixed: [usize; 6],
}

impl NuRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.q,
            self.case,
            self.nu_formula,
            self.nu_direct,
            self.fixed[0],
            self.fixed[1],
            self.fixed[2],
            self.fixed[3],
            self.fixed[4],
            self.fixed[5]
        )
    }
}

#[derive(Serialize)]
struct SearchMaximalReport {
    q: u32,
    degree: usize,
    total_scanned: u64,
    counts_by_n: BTreeMap<String, u64>,
    n9_linear_free: usize,
    group_order: u64,
    classes: Vec<ClassRecord>,
}

#[derive(Serialize)]
struct ClassRecord {
    canonical: String,
    canonical_raw: String,
    orbit_size: usize,
    stabilizer_order: usize,
    mu_quadruple: [usize; 4],
    is_hermitian: bool,
}

pub fn search_maximal_json(
    ctx: &FieldCtx,
    classification: &ClassificationReport,
) -> serde_json::Result<String> {
    let report = SearchMaximalReport {
        q: ctx.q(),
        degree: 3,
        total_scanned: classification.total_scanned,
        counts_by_n: classification
            .counts_by_n
            .iter()
            .map(|(n, c)| (n.to_string(), *c))
            .collect(),
        n9_linear_free: classification.n9_linear_free.len(),
        group_order: maxcurves::groups::pgl3_order(ctx.q() as u64),
        classes: classification
            .classes
            .iter()
            .map(|c| ClassRecord {
                canonical: c.canonical.to_text(),
                canonical_raw: c.canonical.to_raw_text(),
                orbit_size: c.orbit_size,
                stabilizer_order: c.stabilizer_order,
                mu_quadruple: c.mu.0,
                is_hermitian: c.is_hermitian,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&report)
}
