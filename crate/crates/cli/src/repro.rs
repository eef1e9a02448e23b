//! Reproduction of the sine family `f_n(x) = x + sin(nx)/n^2` on `[0, 2pi]`
//! against the identity.
//!
//! `example 1` checks `sup|f_n - id| = n^-2`, the Cargo-Shisha bound `2 n^-2`,
//! `||A_{f_n}||_1 = 2n ln((n+1)/(n-1))` and that the searched `rho` stays below
//! `2 n^-2`. `example 2` checks `||A_{f_n}||_* = ln((n+1)/(n-1))`, the
//! oscillation bound `4 pi / (n - 1)` and the order CS < OSC < L1 of the
//! uncapped bounds.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use qam_core::norms::quadrature_norms;
use qam_core::{
    bound_cargo_shisha, bound_l1, bound_osc, rho_lower_bound, sup_norm, BoundOptions, Generator64, Interval64, Result,
    SearchConfig,
};

use crate::output::Render;

pub const SUP_TOL: f64 = 1e-10;
pub const CS_TOL: f64 = 1e-9;
pub const L1_REL_TOL: f64 = 1e-6;
pub const RHO_SLACK: f64 = 1e-9;
pub const OSC_TOL: f64 = 1e-8;
pub const OSC_BOUND_REL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn abs(name: &str, observed: f64, expected: f64, tol: f64) -> Self {
        let err = (observed - expected).abs();
        Self {
            name: name.into(),
            passed: err <= tol,
            detail: format!("observed {observed}, expected {expected}, |diff| {err:e} vs tol {tol:e}"),
        }
    }

    fn rel(name: &str, observed: f64, expected: f64, tol: f64) -> Self {
        let err = (observed - expected).abs();
        Self {
            name: name.into(),
            passed: err <= tol * expected.abs(),
            detail: format!("observed {observed}, expected {expected}, rel diff {:e} vs tol {tol:e}", err / expected.abs()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExampleRow {
    pub n: u32,
    pub sup_diff: f64,
    pub cs_bound: f64,
    pub cs_closed_form: f64,
    pub l1_norm: f64,
    pub l1_closed_form: f64,
    pub l1_bound_raw: f64,
    pub osc_norm: f64,
    pub osc_closed_form: f64,
    pub osc_bound_raw: f64,
    pub osc_bound: f64,
    pub osc_bound_closed_form: f64,
    pub rho_lower_bound: f64,
    pub checks: Vec<Check>,
}

impl ExampleRow {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExampleReport {
    pub example: u8,
    pub interval: Interval64,
    pub search: SearchConfig,
    pub rows: Vec<ExampleRow>,
    pub passed: bool,
}

pub fn period() -> Interval64 {
    Interval64::new(0.0, 2.0 * PI).expect("valid interval")
}

pub fn l1_closed_form(n: u32) -> f64 {
    let n = n as f64;
    2.0 * n * ((n + 1.0) / (n - 1.0)).ln()
}

pub fn osc_closed_form(n: u32) -> f64 {
    let n = n as f64;
    ((n + 1.0) / (n - 1.0)).ln()
}

pub fn example_row(which: u8, n: u32, cfg: &SearchConfig) -> Result<ExampleRow> {
    let u = period();
    let id = Generator64::identity(u)?;
    let f = Generator64::sine(n, u)?;
    let nf = n as f64;
    let opts = BoundOptions::default();

    let sup_diff = sup_norm(|x| f.value(x) - x, u)?.value;
    let cs = bound_cargo_shisha(&id, &f, u, opts)?;
    let kind = f.kind().clone();
    let (l1, osc) = quadrature_norms(|x| kind.arrow_pratt(x), u)?;
    let l1_bound = bound_l1(&id, &f, u, opts)?;
    let osc_bound = bound_osc(&id, &f, u, opts)?;
    let rho = rho_lower_bound(&id, &f, u, cfg)?;

    let cs_closed = 2.0 / (nf * nf);
    let osc_bound_closed = 4.0 * PI / (nf - 1.0);
    let checks = match which {
        1 => vec![
            Check::abs("sup|f_n - id| = n^-2", sup_diff, 1.0 / (nf * nf), SUP_TOL),
            Check::abs("CS bound = 2n^-2", cs.value, cs_closed, CS_TOL),
            Check::rel("||A_fn||_1 = 2n ln((n+1)/(n-1))", l1.value, l1_closed_form(n), L1_REL_TOL),
            Check {
                name: "rho_LB <= 2n^-2".into(),
                passed: rho.value <= cs_closed + RHO_SLACK,
                detail: format!("rho_LB {} vs {cs_closed} + {RHO_SLACK:e}", rho.value),
            },
        ],
        _ => vec![
            Check::abs("||A_fn||_* = ln((n+1)/(n-1))", osc.value, osc_closed_form(n), OSC_TOL),
            Check::rel("OSC bound = 4pi/(n-1)", osc_bound.raw_value, osc_bound_closed, OSC_BOUND_REL_TOL),
            Check {
                name: "CS < OSC < L1 (uncapped)".into(),
                passed: cs.raw_value < osc_bound.raw_value && osc_bound.raw_value < l1_bound.raw_value,
                detail: format!("{} < {} < {}", cs.raw_value, osc_bound.raw_value, l1_bound.raw_value),
            },
        ],
    };
    Ok(ExampleRow {
        n,
        sup_diff,
        cs_bound: cs.value,
        cs_closed_form: cs_closed,
        l1_norm: l1.value,
        l1_closed_form: l1_closed_form(n),
        l1_bound_raw: l1_bound.raw_value,
        osc_norm: osc.value,
        osc_closed_form: osc_closed_form(n),
        osc_bound_raw: osc_bound.raw_value,
        osc_bound: osc_bound.value,
        osc_bound_closed_form: osc_bound_closed,
        rho_lower_bound: rho.value,
        checks,
    })
}

pub fn run_example(which: u8, ns: RangeInclusive<u32>, cfg: &SearchConfig) -> Result<ExampleReport> {
    let rows = ns
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|n| example_row(which, n, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(ExampleReport {
        example: which,
        interval: period(),
        search: cfg.clone(),
        passed: rows.iter().all(ExampleRow::passed),
        rows,
    })
}

impl Render for ExampleReport {
    fn csv_header(&self) -> String {
        "example,n,sup_diff,cs_bound,cs_closed_form,l1_norm,l1_closed_form,l1_bound_raw,osc_norm,osc_closed_form,\
         osc_bound_raw,osc_bound,osc_bound_closed_form,rho_lower_bound,passed"
            .into()
    }

    fn csv_rows(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| {
                format!(
                    "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                    self.example,
                    r.n,
                    r.sup_diff,
                    r.cs_bound,
                    r.cs_closed_form,
                    r.l1_norm,
                    r.l1_closed_form,
                    r.l1_bound_raw,
                    r.osc_norm,
                    r.osc_closed_form,
                    r.osc_bound_raw,
                    r.osc_bound,
                    r.osc_bound_closed_form,
                    r.rho_lower_bound,
                    r.passed()
                )
            })
            .collect()
    }

    fn plain(&self) -> String {
        let mut s = format!("example {} on {}\n", self.example, self.interval);
        match self.example {
            1 => {
                let _ = writeln!(s, "{:>3} {:>14} {:>14} {:>14} {:>14} {:>5}", "n", "sup|f_n-id|", "CS bound", "||A||_1", "rho_LB", "ok");
                for r in &self.rows {
                    let _ = writeln!(
                        s,
                        "{:>3} {:>14.8e} {:>14.8e} {:>14.8e} {:>14.8e} {:>5}",
                        r.n, r.sup_diff, r.cs_bound, r.l1_norm, r.rho_lower_bound, r.passed()
                    );
                }
            }
            _ => {
                let _ = writeln!(s, "{:>3} {:>14} {:>14} {:>14} {:>14} {:>5}", "n", "||A||_*", "CS bound", "OSC raw", "L1 raw", "ok");
                for r in &self.rows {
                    let _ = writeln!(
                        s,
                        "{:>3} {:>14.8e} {:>14.8e} {:>14.8e} {:>14.8e} {:>5}",
                        r.n,
                        r.osc_norm,
                        r.cs_bound,
                        r.osc_bound_raw,
                        r.l1_bound_raw,
                        r.passed()
                    );
                }
            }
        }
        let _ = write!(s, "{}", if self.passed { "all checks passed" } else { "CHECKS FAILED" });
        s
    }

    fn violations(&self) -> Vec<String> {
        self.rows
            .iter()
            .flat_map(|r| {
                r.checks
                    .iter()
                    .filter(|c| !c.passed)
                    .map(move |c| format!("example {}, n = {}: {} ({})", self.example, r.n, c.name, c.detail))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms_at_two() {
        assert!((l1_closed_form(2) - 4.0 * 3f64.ln()).abs() < 1e-15);
        assert!((osc_closed_form(2) - 3f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn rows_pass_for_small_n() {
        let cfg = SearchConfig::quick();
        for which in [1, 2] {
            let r = example_row(which, 3, &cfg).unwrap();
            assert!(r.passed(), "{:?}", r.checks);
        }
        let r = example_row(2, 2, &cfg).unwrap();
        assert_eq!(r.osc_bound, 2.0 * PI);
        assert!((r.osc_bound_raw - 4.0 * PI).abs() <= 1e-6 * 4.0 * PI);
    }

    #[test]
    fn failed_checks_become_violations() {
        let cfg = SearchConfig::quick();
        let mut report = run_example(1, 4..=5, &cfg).unwrap();
        assert!(report.violations().is_empty());
        report.rows[1].checks[0].passed = false;
        let v = report.violations();
        assert_eq!(v.len(), 1);
        assert!(v[0].starts_with("example 1, n = 5: sup"));
    }
}
