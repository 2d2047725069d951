//! Crossover boundaries between batch and per-key querying.
//!
//! With `n` keys in the tree and `kappa = lambda * n` queries, a batch
//! co-walk costs about `(1 + lambda) n` comparisons and per-key descent at
//! least `lambda n log n`. All logarithms are base 2.

use crate::error::{Error, Result};

/// `ceil(log2 n)` for `n >= 1`.
pub fn ceil_log2(n: usize) -> u32 {
    assert!(n >= 1, "ceil_log2 of zero");
    usize::BITS - (n - 1).leading_zeros()
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda <= 1.0 {
        Ok(())
    } else {
        Err(Error::DomainError(format!(
            "query fraction {lambda} outside (0, 1]"
        )))
    }
}

fn check_n(n: usize) -> Result<()> {
    if n >= 2 {
        Ok(())
    } else {
        Err(Error::DomainError(format!("tree size {n} below 2")))
    }
}

/// Query fraction above which a batch is predicted to pay off:
/// `1 / ceil(log2 n)`.
pub fn crossover_lambda(n: usize) -> Result<f64> {
    check_n(n)?;
    Ok(1.0 / f64::from(ceil_log2(n)))
}

/// Depth index `1/lambda + log2(2 lambda n)`. A tree whose searches run at
/// least this deep is cheaper to query in batch, sorting included.
pub fn depth_index(n: usize, lambda: f64) -> Result<f64> {
    check_n(n)?;
    check_lambda(lambda)?;
    Ok(lambda.recip() + (2.0 * lambda * n as f64).log2())
}

/// `depth_index(n, lambda) - log2 n = 1 + 1/lambda - log2(1/lambda)`,
/// independent of `n`.
pub fn depth_margin(lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(1.0 + lambda.recip() - lambda.recip().log2())
}

/// Locked-range fraction `lambda * log2(1 / (2 lambda))` at which a
/// range-locked batch breaks even. `None` when that is not positive, i.e.
/// per-key querying is preferable (`lambda >= 1/2`).
pub fn theta_boundary(lambda: f64) -> Result<Option<f64>> {
    check_lambda(lambda)?;
    let theta = lambda * (2.0 * lambda).recip().log2();
    Ok((theta > 0.0).then_some(theta))
}

/// The boundary quantities for one tree size and query count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryParams {
    pub n: usize,
    pub kappa: usize,
    /// `kappa / n`.
    pub lambda: f64,
    /// [`depth_index`] at this `lambda`.
    pub hbar: f64,
    /// [`theta_boundary`] at this `lambda`.
    pub theta: Option<f64>,
    /// [`crossover_lambda`] for `n`.
    pub crossover: f64,
}

impl BoundaryParams {
    pub fn new(n: usize, kappa: usize) -> Result<Self> {
        check_n(n)?;
        let lambda = kappa as f64 / n as f64;
        check_lambda(lambda)?;
        Ok(BoundaryParams {
            n,
            kappa,
            lambda,
            hbar: depth_index(n, lambda)?,
            theta: theta_boundary(lambda)?,
            crossover: crossover_lambda(n)?,
        })
    }

    /// Pre-sorted queries: batch predicted cheaper than per-key descent.
    pub fn batch_predicted(&self) -> bool {
        self.lambda >= self.crossover
    }

    /// Unsorted queries: a tree whose searches visit `max_depth + 1` nodes
    /// favours sorting plus batch.
    pub fn depth_favors_batch(&self, max_depth: usize) -> bool {
        (max_depth + 1) as f64 >= self.hbar
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossover_values() {
        assert_eq!(crossover_lambda(16).unwrap(), 0.25);
        assert_eq!(crossover_lambda(2).unwrap(), 1.0);
        assert_eq!(crossover_lambda(1024).unwrap(), 0.1);
        assert_eq!(crossover_lambda(1025).unwrap(), 1.0 / 11.0);
        assert!(crossover_lambda(1).is_err());
    }

    #[test]
    fn depth_index_values() {
        assert_eq!(depth_index(2, 1.0).unwrap(), 3.0);
        for n in [16usize, 1000, 1 << 20] {
            let got = depth_index(n, 0.25).unwrap();
            assert!((got - (4.0 + (n as f64 / 2.0).log2())).abs() < 1e-9);
        }
        assert!(depth_index(16, 0.0).is_err());
        assert!(depth_index(16, 1.5).is_err());
    }

    #[test]
    fn theta_values() {
        assert_eq!(theta_boundary(0.5).unwrap(), None);
        assert_eq!(theta_boundary(1.0).unwrap(), None);
        assert_eq!(theta_boundary(0.25).unwrap(), Some(0.25));
        let t = theta_boundary(0.125).unwrap().unwrap();
        assert!((t - 0.25).abs() < 1e-12);
        assert!(theta_boundary(-1.0).is_err());
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(1024), 10);
        assert_eq!(ceil_log2(1025), 11);
    }

    #[test]
    fn params_bundle() {
        let p = BoundaryParams::new(1024, 256).unwrap();
        assert_eq!(p.lambda, 0.25);
        assert!(p.batch_predicted());
        assert_eq!(p.theta, Some(0.25));
        assert!(!p.depth_favors_batch(10));
        assert!(BoundaryParams::new(10, 11).is_err());
        assert!(BoundaryParams::new(10, 0).is_err());
    }
}
