//! Verification records and their serialized forms.

use serde::Serialize;

use mfold_core::io::fmt_sig15;

/// Relative slack applied to every inequality check.
pub const PASS_REL_SLACK: f64 = 1e-9;

/// One inequality instance: pass holds exactly when
/// lhs <= constant * rhs + PASS_REL_SLACK * rhs.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub check: String,
    pub seed: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub constant: f64,
    pub pass: bool,
    /// Instance parameters, and the failing witness when pass is false.
    pub detail: String,
}

impl VerificationReport {
    pub fn new(
        check: impl Into<String>,
        seed: u64,
        lhs: f64,
        rhs: f64,
        constant: f64,
        detail: impl Into<String>,
    ) -> Self {
        let pass = lhs <= constant * rhs + PASS_REL_SLACK * rhs;
        Self {
            check: check.into(),
            seed,
            lhs,
            rhs,
            constant,
            pass,
            detail: detail.into(),
        }
    }

    /// lhs / (constant * rhs), with the 0/0 case counted as 0 and a positive
    /// lhs over a zero bound as infinity.
    pub fn ratio(&self) -> f64 {
        let bound = self.constant * self.rhs;
        if bound == 0.0 {
            if self.lhs <= 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            self.lhs / bound
        }
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.check,
            self.seed,
            fmt_sig15(self.lhs),
            fmt_sig15(self.rhs),
            fmt_sig15(self.constant),
            fmt_sig15(self.ratio()),
            if self.pass { "pass" } else { "fail" },
            self.detail.replace(',', ";")
        )
    }
}

pub const REPORT_CSV_HEADER: &str = "check,seed,lhs,rhs,constant,ratio,pass,detail";

/// Aggregate of one check over a corpus.
#[derive(Debug, Clone, Serialize)]
pub struct CheckSummary {
    pub check: String,
    pub instances: usize,
    pub pass: bool,
    pub worst_ratio: f64,
    pub witness_seed: Option<u64>,
}

impl CheckSummary {
    pub fn from_reports(check: impl Into<String>, reports: &[VerificationReport]) -> Self {
        let mut worst = 0.0f64;
        let mut witness = None;
        let mut pass = true;
        for r in reports {
            let ratio = r.ratio();
            if ratio > worst || witness.is_none() {
                worst = worst.max(ratio);
                witness = Some(r.seed);
            }
            if !r.pass {
                pass = false;
                witness = Some(r.seed);
            }
        }
        Self {
            check: check.into(),
            instances: reports.len(),
            pass,
            worst_ratio: worst,
            witness_seed: witness,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_rule_is_relative_to_rhs() {
        let ok = VerificationReport::new("t", 0, 1.0 + 0.5e-9, 1.0, 1.0, "");
        assert!(ok.pass);
        let bad = VerificationReport::new("t", 0, 1.0 + 2e-9, 1.0, 1.0, "");
        assert!(!bad.pass);
        let zero = VerificationReport::new("t", 0, 0.0, 0.0, 1.0, "");
        assert!(zero.pass);
        assert_eq!(zero.ratio(), 0.0);
        let inf = VerificationReport::new("t", 0, 1.0, 0.0, 1.0, "");
        assert!(!inf.pass);
        assert!(inf.ratio().is_infinite());
    }

    #[test]
    fn summary_tracks_worst_and_failures() {
        let reports = vec![
            VerificationReport::new("t", 1, 0.5, 1.0, 1.0, ""),
            VerificationReport::new("t", 2, 0.9, 1.0, 1.0, ""),
            VerificationReport::new("t", 3, 2.0, 1.0, 1.0, ""),
        ];
        let s = CheckSummary::from_reports("t", &reports);
        assert!(!s.pass);
        assert_eq!(s.witness_seed, Some(3));
        assert_eq!(s.instances, 3);
        assert!((s.worst_ratio - 2.0).abs() < 1e-12);
    }

    #[test]
    fn csv_rows_have_no_stray_commas_in_detail() {
        let r = VerificationReport::new("t", 1, 1.0, 2.0, 1.0, "p1=2, p2=3");
        let row = r.csv_row();
        assert_eq!(row.matches(',').count(), 7);
    }
}
