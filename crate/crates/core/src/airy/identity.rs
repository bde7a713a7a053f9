use crate::numerics::{min_product_identity, product_bound};
use crate::report::Record;
use crate::{par, Error, Result};

pub const SCAN_POINTS: usize = 10_000;
pub const SCAN_RANGE: (f64, f64) = (1e-6, 1e6);
const FLOOR_SLACK: f64 = 1e-12;

/// Outcome of the `λ`-scan for one pair `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainCheck {
    pub a: f64,
    pub b: f64,
    /// `a·b²`.
    pub infimum: f64,
    /// `2a/b`.
    pub argmin: f64,
    pub scan_floor: f64,
    pub scan_argmin: f64,
    pub floor_ok: bool,
    pub argmin_ok: bool,
}

impl ChainCheck {
    pub fn passed(&self) -> bool {
        self.floor_ok && self.argmin_ok
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainReport {
    pub checks: Vec<ChainCheck>,
}

impl ChainReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(ChainCheck::passed)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed()).count()
    }

    /// Smallest `scan_floor − a·b²`.
    pub fn worst_floor_gap(&self) -> f64 {
        self.checks
            .iter()
            .map(|c| c.scan_floor - c.infimum)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn record(&self) -> Record {
        Record::new("identity_chain")
            .int("pairs", self.checks.len())
            .int("failures", self.failures())
            .real("worst_floor_gap", self.worst_floor_gap())
            .flag("pass", self.passed())
    }
}

/// For each `(a_i, b_i)`, scans `4/(27λ²)·(a + λb)³` over a log grid of `λ`
/// and checks that it never dips below `a·b²` and bottoms out next to
/// `λ = 2a/b`.
pub fn verify_min_identity_chain(a_grid: &[f64], b_grid: &[f64]) -> Result<ChainReport> {
    if a_grid.len() != b_grid.len() {
        return Err(Error::DimensionMismatch {
            expected: a_grid.len(),
            found: b_grid.len(),
        });
    }
    let (lo, hi) = SCAN_RANGE;
    let log_step = (hi / lo).ln() / (SCAN_POINTS - 1) as f64;
    let lambdas: Vec<f64> = (0..SCAN_POINTS).map(|i| lo * (i as f64 * log_step).exp()).collect();
    let checks = par::map_range(a_grid.len(), |i| {
        let (a, b) = (a_grid[i], b_grid[i]);
        let (infimum, argmin) = min_product_identity(a, b)?;
        let (scan_argmin, scan_floor) =
            lambdas
                .iter()
                .map(|&l| (l, product_bound(a, b, l)))
                .fold(
                    (f64::NAN, f64::INFINITY),
                    |best, cur| if cur.1 < best.1 { cur } else { best },
                );
        Ok(ChainCheck {
            a,
            b,
            infimum,
            argmin,
            scan_floor,
            scan_argmin,
            floor_ok: scan_floor >= infimum - FLOOR_SLACK,
            argmin_ok: (scan_argmin / argmin).ln().abs() <= log_step * (1.0 + 1e-9),
        })
    });
    Ok(ChainReport {
        checks: checks.into_iter().collect::<Result<_>>()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_pairs() {
        let r = verify_min_identity_chain(&[1.0, 4.0], &[1.0, 2.0]).unwrap();
        assert!(r.passed());
        assert_eq!((r.checks[0].infimum, r.checks[0].argmin), (1.0, 2.0));
        assert_eq!((r.checks[1].infimum, r.checks[1].argmin), (16.0, 4.0));
        assert!((r.checks[1].scan_argmin / 4.0 - 1.0).abs() < 3e-3);
    }

    #[test]
    fn mismatched_grids() {
        assert!(verify_min_identity_chain(&[1.0], &[]).is_err());
        assert!(verify_min_identity_chain(&[0.0], &[1.0]).is_err());
    }
}
