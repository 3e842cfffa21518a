//! Polynomial baseline correction.

use super::spectrum::Spectrum;
use crate::error::{invalid, Error, Result};
use crate::scalar::Real;
use nalgebra::{Complex, DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Which points count as baseline.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", bound = "")]
pub enum BaselineRegions<T: Real> {
    /// The given fraction of points with the smallest `|Re S|`.
    Auto { fraction: T },
    /// Explicit peak-free frequency windows `(lo, hi)` in Hz.
    Windows { windows: Vec<(T, T)> },
}

impl<T: Real> Default for BaselineRegions<T> {
    fn default() -> Self {
        BaselineRegions::Auto { fraction: T::lit(0.4) }
    }
}

impl<T: Real> BaselineRegions<T> {
    /// Indices of the selected points, ascending.
    pub fn select(&self, spec: &Spectrum<T>) -> Result<Vec<usize>> {
        let axis = spec.axis_hz();
        let mut idx: Vec<usize> = match self {
            BaselineRegions::Auto { fraction } => {
                if !(*fraction > T::zero() && *fraction <= T::one()) {
                    return Err(invalid("baseline fraction must lie in (0, 1]"));
                }
                let vals = spec.values();
                let mut order: Vec<usize> = (0..spec.len()).collect();
                order.sort_by(|&a, &b| vals[a].re.abs().partial_cmp(&vals[b].re.abs()).unwrap_or(std::cmp::Ordering::Equal));
                let keep = (*fraction * T::from_count(spec.len())).floor().to_usize().unwrap_or(0);
                order.truncate(keep);
                order
            }
            BaselineRegions::Windows { windows } => {
                for &(lo, hi) in windows {
                    if !(lo < hi) {
                        return Err(invalid(format!("baseline window ({lo}, {hi}) is empty")));
                    }
                }
                (0..spec.len()).filter(|&k| windows.iter().any(|&(lo, hi)| axis[k] >= lo && axis[k] <= hi)).collect()
            }
        };
        idx.sort_unstable();
        Ok(idx)
    }
}

/// Least-squares polynomial fit of the real and imaginary parts over the
/// baseline points, evaluated everywhere and subtracted.
pub fn baseline_correct<T: Real>(spec: &Spectrum<T>, order: usize, regions: &BaselineRegions<T>) -> Result<Spectrum<T>> {
    let idx = regions.select(spec)?;
    let n_coef = order + 1;
    if idx.len() < 2 * n_coef {
        return Err(invalid(format!(
            "{} baseline points are too few for an order-{order} fit",
            idx.len()
        )));
    }
    let axis = spec.axis_hz();
    let (lo, hi) = (axis[0], axis[spec.len() - 1]);
    let mid = (lo + hi) / T::lit(2.0);
    let half = (hi - lo) / T::lit(2.0);
    let x = |f: T| (f - mid) / half;
    let design = DMatrix::from_fn(idx.len(), n_coef, |r, c| x(axis[idx[r]]).powi(c as i32));
    let svd = design.svd(true, true);
    let eps = T::default_epsilon() * T::lit(1e3);
    let solve = |ys: DVector<T>| svd.solve(&ys, eps).map_err(|e| Error::Numeric(e.to_string()));
    let vals = spec.values();
    let re = solve(DVector::from_iterator(idx.len(), idx.iter().map(|&k| vals[k].re)))?;
    let im = solve(DVector::from_iterator(idx.len(), idx.iter().map(|&k| vals[k].im)))?;
    let poly = |coef: &DVector<T>, f: T| coef.iter().rev().fold(T::zero(), |acc, &c| acc * x(f) + c);
    let out = vals
        .iter()
        .zip(axis)
        .map(|(z, &f)| z - Complex::new(poly(&re, f), poly(&im, f)))
        .collect();
    Ok(spec.with_values(out))
}
