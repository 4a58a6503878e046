use std::fmt::Write as _;
use std::io;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;

use super::{brioschi_curvature, TensorField};
use crate::error::{Error, Result};
use crate::numeric::format::fmt_sig15;

/// `count` equally spaced values from `min` to `max` inclusive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) || count == 0 || (count > 1 && !(max > min)) {
            return Err(Error::InvalidArgument(format!("bad axis {min}:{max}:{count}")));
        }
        Ok(Axis { min, max, count })
    }

    pub fn value(&self, i: usize) -> f64 {
        if self.count == 1 {
            return self.min;
        }
        self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|i| self.value(i))
    }
}

impl FromStr for Axis {
    type Err = Error;

    /// `min:max:count`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::InvalidArgument(format!("axis `{s}` is not min:max:count"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let min = parts[0].trim().parse().map_err(|_| bad())?;
        let max = parts[1].trim().parse().map_err(|_| bad())?;
        let count = parts[2].trim().parse().map_err(|_| bad())?;
        Axis::new(min, max, count)
    }
}

/// Curvature values on a rectangular grid. Points where the curvature could
/// not be evaluated (outside the domain, or the stencil leaves it) hold
/// `None`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureGrid {
    pub x: Axis,
    pub y: Axis,
    /// Row-major: index `i * y.count + j` holds `(x_i, y_j)`.
    pub values: Vec<Option<f64>>,
}

impl CurvatureGrid {
    /// Evaluates in parallel; results are stored by position, so the output
    /// does not depend on scheduling.
    pub fn evaluate<T: TensorField + ?Sized>(field: &T, x: Axis, y: Axis) -> Self {
        let values = (0..x.count * y.count)
            .into_par_iter()
            .map(|idx| {
                let (i, j) = (idx / y.count, idx % y.count);
                brioschi_curvature(field, x.value(i), y.value(j)).ok().filter(|k| k.is_finite())
            })
            .collect();
        CurvatureGrid { x, y, values }
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.values[i * self.y.count + j]
    }

    /// `(x, y, K)` for every point, row-major.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64, Option<f64>)> + '_ {
        (0..self.values.len()).map(move |idx| {
            let (i, j) = (idx / self.y.count, idx % self.y.count);
            (self.x.value(i), self.y.value(j), self.values[idx])
        })
    }

    pub fn feasible_count(&self) -> usize {
        self.values.iter().flatten().count()
    }

    /// Smallest value with its location.
    pub fn min(&self) -> Option<(f64, f64, f64)> {
        self.points()
            .filter_map(|(x, y, k)| k.map(|k| (x, y, k)))
            .min_by(|a, b| a.2.total_cmp(&b.2))
    }

    /// Largest value with its location.
    pub fn max(&self) -> Option<(f64, f64, f64)> {
        self.points()
            .filter_map(|(x, y, k)| k.map(|k| (x, y, k)))
            .max_by(|a, b| a.2.total_cmp(&b.2))
    }

    /// CSV with header `x,y,K`; missing values are written as `NA`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,K\n");
        for (x, y, k) in self.points() {
            let k = k.map(fmt_sig15).unwrap_or_else(|| "NA".into());
            let _ = writeln!(out, "{},{},{}", fmt_sig15(x), fmt_sig15(y), k);
        }
        out
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> io::Result<()> {
        std::fs::write(path, self.to_csv())
    }
}
