use crate::{Error, Result};

/// Outcome of a grid-refinement study.
#[derive(Debug, Clone, PartialEq)]
pub struct Convergence {
    /// Grid point counts, each with twice the intervals of the last.
    pub points: Vec<usize>,
    /// Tracked quantities at each resolution.
    pub values: Vec<Vec<f64>>,
    /// Max absolute change between the last two resolutions.
    pub change: f64,
    /// Observed order `log₂(Δ₁/Δ₂)` from the last three resolutions, NaN with
    /// fewer than three.
    pub order: f64,
    /// Second-order Richardson extrapolation of the last two resolutions.
    pub extrapolated: Vec<f64>,
}

impl Convergence {
    pub fn finest(&self) -> &[f64] {
        self.values.last().map(Vec::as_slice).unwrap_or(&[])
    }
}

/// `fine + (fine − coarse)/(2^order − 1)` elementwise.
pub fn richardson(coarse: &[f64], fine: &[f64], order: f64) -> Vec<f64> {
    let d = 2f64.powf(order) - 1.0;
    coarse.iter().zip(fine).map(|(c, f)| f + (f - c) / d).collect()
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Doubles the intervals of a grid with `n0` points until the tracked values
/// change by less than `tol` (at least three resolutions), failing with
/// [`Error::NotConverging`] once the next grid would exceed `max_points`.
///
/// `solve(n)` returns the tracked values at `n` points; their count must not
/// vary with `n`.
pub fn converge<F>(n0: usize, tol: f64, max_points: usize, mut solve: F) -> Result<Convergence>
where
    F: FnMut(usize) -> Result<Vec<f64>>,
{
    if n0 < 3 || n0 > max_points {
        return Err(Error::InvalidArgument(format!("start resolution {n0} outside 3..={max_points}")));
    }
    let mut points = vec![n0];
    let mut values = vec![solve(n0)?];
    loop {
        let n = 2 * (points[points.len() - 1] - 1) + 1;
        let m = values.len();
        let change = if m >= 2 { max_diff(&values[m - 1], &values[m - 2]) } else { f64::INFINITY };
        if m >= 3 && change < tol {
            break;
        }
        if n > max_points {
            return Err(Error::NotConverging { change, target: tol, points: points[m - 1] });
        }
        let v = solve(n)?;
        if v.len() != values[0].len() {
            return Err(Error::InvalidArgument("tracked value count changed with resolution".into()));
        }
        points.push(n);
        values.push(v);
    }
    let m = values.len();
    let change = max_diff(&values[m - 1], &values[m - 2]);
    let order = (max_diff(&values[m - 2], &values[m - 3]) / change).log2();
    let extrapolated = richardson(&values[m - 2], &values[m - 1], 2.0);
    Ok(Convergence { points, values, change, order, extrapolated })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn second_order_model() {
        // Exact value 1 with an h² error term.
        let c = converge(11, 1e-6, 100_000, |n| {
            let h = 1.0 / (n - 1) as f64;
            Ok(vec![1.0 + 3.0 * h * h])
        })
        .unwrap();
        assert!((c.order - 2.0).abs() < 1e-9);
        assert!((c.extrapolated[0] - 1.0).abs() < 1e-12);
        assert!(c.change < 1e-6);
        assert_eq!(c.points[1], 21);
    }

    #[test]
    fn cap_reports_not_converging() {
        let err = converge(11, 1e-12, 200, |n| Ok(vec![1.0 / n as f64])).unwrap_err();
        assert!(matches!(err, Error::NotConverging { points: 161, .. }));
    }
}
