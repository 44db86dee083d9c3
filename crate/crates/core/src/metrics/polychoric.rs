//! Two-step maximum-likelihood polychoric correlation.

use argmin::core::{CostFunction, Executor, State};
use argmin::solver::brent::BrentOpt;
use log::warn;
use statrs::distribution::{ContinuousCDF, Normal};

use super::bvn;
use super::ContingencyTable;
use crate::error::{Error, Result};

/// Boundary of the search interval for ρ.
pub const RHO_BOUND: f64 = 0.999;

/// Cut points `[-inf, Φ⁻¹(p_1), ..., Φ⁻¹(p_1+...+p_{m-1}), +inf]`.
fn thresholds(margin: &[u64]) -> Vec<f64> {
    let total: u64 = margin.iter().sum();
    let normal = Normal::standard();
    let mut cuts = vec![f64::NEG_INFINITY];
    let mut acc = 0u64;
    for &m in &margin[..margin.len() - 1] {
        acc += m;
        cuts.push(normal.inverse_cdf(acc as f64 / total as f64));
    }
    cuts.push(f64::INFINITY);
    cuts
}

struct Likelihood {
    counts: Vec<Vec<u64>>,
    rows: Vec<f64>,
    cols: Vec<f64>,
}

impl Likelihood {
    fn log_likelihood(&self, rho: f64) -> f64 {
        let mut ll = 0.0;
        for (i, row) in self.counts.iter().enumerate() {
            for (j, &n) in row.iter().enumerate() {
                if n == 0 {
                    continue;
                }
                let p = bvn::rect(self.rows[i], self.rows[i + 1], self.cols[j], self.cols[j + 1], rho);
                ll += n as f64 * p.max(f64::MIN_POSITIVE).ln();
            }
        }
        ll
    }
}

impl CostFunction for &Likelihood {
    type Param = f64;
    type Output = f64;

    fn cost(&self, rho: &f64) -> std::result::Result<f64, argmin::core::Error> {
        Ok(-self.log_likelihood(*rho))
    }
}

fn build(table: &ContingencyTable) -> Result<Likelihood> {
    let (r, s) = table.shape();
    let row_sums = table.row_sums();
    let col_sums = table.col_sums();
    let keep_rows: Vec<usize> = (0..r).filter(|&i| row_sums[i] > 0).collect();
    let keep_cols: Vec<usize> = (0..s).filter(|&j| col_sums[j] > 0).collect();
    if keep_rows.len() < r || keep_cols.len() < s {
        warn!(
            "polychoric: dropping {} empty row(s) and {} empty column(s)",
            r - keep_rows.len(),
            s - keep_cols.len()
        );
    }
    if keep_rows.len() < 2 || keep_cols.len() < 2 {
        return Err(Error::UndefinedCorrelation(format!(
            "table has {} non-empty row(s) and {} non-empty column(s)",
            keep_rows.len(),
            keep_cols.len()
        )));
    }
    Ok(Likelihood {
        rows: thresholds(&keep_rows.iter().map(|&i| row_sums[i]).collect::<Vec<_>>()),
        cols: thresholds(&keep_cols.iter().map(|&j| col_sums[j]).collect::<Vec<_>>()),
        counts: keep_rows
            .iter()
            .map(|&i| keep_cols.iter().map(|&j| table.get(i, j)).collect())
            .collect(),
    })
}

/// Polychoric correlation of an ordinal contingency table.
///
/// Thresholds are fixed from the marginals, then ρ maximises the multinomial
/// likelihood over `[-0.999, 0.999]`. Empty rows and columns are dropped
/// first. Fewer than two non-empty rows or columns is an error.
pub fn polychoric(table: &ContingencyTable) -> Result<f64> {
    let lik = build(table)?;
    let solver = BrentOpt::new(-RHO_BOUND, RHO_BOUND).set_tolerance(f64::EPSILON.sqrt(), 1e-9);
    let res = Executor::new(&lik, solver)
        .configure(|state| state.max_iters(500))
        .run()
        .map_err(|e| Error::UndefinedCorrelation(format!("optimiser failed: {e}")))?;
    let interior = *res
        .state()
        .get_best_param()
        .ok_or_else(|| Error::UndefinedCorrelation("optimiser returned no estimate".into()))?;

    // Brent never evaluates the endpoints, so a likelihood that is monotone
    // over the interval is checked there explicitly.
    let best = [interior, -RHO_BOUND, RHO_BOUND]
        .into_iter()
        .map(|rho| (rho, lik.log_likelihood(rho)))
        .fold((f64::NAN, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    if !best.0.is_finite() {
        return Err(Error::UndefinedCorrelation("likelihood is not finite".into()));
    }
    Ok(best.0)
}

/// Log-likelihood of `table` at `rho` under the fixed marginal thresholds.
pub fn polychoric_log_likelihood(table: &ContingencyTable, rho: f64) -> Result<f64> {
    Ok(build(table)?.log_likelihood(rho))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(rows: &[&[u64]]) -> ContingencyTable {
        ContingencyTable::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn independence() {
        let rho = polychoric(&t(&[&[25, 25], &[25, 25]])).unwrap();
        assert!(rho.abs() < 1e-3, "{rho}");
    }

    #[test]
    fn diagonal_hits_boundary() {
        let table = t(&[&[50, 0], &[0, 50]]);
        assert_eq!(polychoric(&table).unwrap(), RHO_BOUND);
        // likelihood increases along a grid toward the boundary
        let grid: Vec<f64> = (0..=20).map(|i| -0.9 + 0.0945 * i as f64).collect();
        for w in grid.windows(2) {
            assert!(polychoric_log_likelihood(&table, w[1]).unwrap() > polychoric_log_likelihood(&table, w[0]).unwrap());
        }
    }

    #[test]
    fn transpose_and_reversal() {
        let a = t(&[&[20, 10, 3], &[8, 25, 12], &[2, 9, 30]]);
        let rho = polychoric(&a).unwrap();
        let rho_t = polychoric(&a.transpose()).unwrap();
        let rho_r = polychoric(&a.reverse_columns()).unwrap();
        assert!((rho - rho_t).abs() < 1e-6);
        assert!((rho + rho_r).abs() < 1e-6);
        assert!(rho > 0.5);
    }

    #[test]
    fn tetrachoric_grid() {
        let table = t(&[&[40, 12], &[18, 30]]);
        let rho = polychoric(&table).unwrap();
        let mut best = (0.0, f64::NEG_INFINITY);
        let mut r = -0.999;
        while r <= 0.999 {
            let ll = polychoric_log_likelihood(&table, r).unwrap();
            if ll > best.1 {
                best = (r, ll);
            }
            r += 1e-5;
        }
        assert!((rho - best.0).abs() < 1e-4, "{rho} vs {}", best.0);
    }

    #[test]
    fn degenerate_tables() {
        assert!(matches!(polychoric(&t(&[&[5, 5], &[0, 0]])), Err(Error::UndefinedCorrelation(_))));
        assert!(matches!(polychoric(&t(&[&[5, 0], &[7, 0]])), Err(Error::UndefinedCorrelation(_))));
        // an empty middle row is dropped, not fatal
        let rho = polychoric(&t(&[&[10, 2], &[0, 0], &[3, 9]])).unwrap();
        assert!(rho > 0.0);
    }
}
