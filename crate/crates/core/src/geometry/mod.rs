//! Gaussian curvature of two-dimensional charts and completeness probes.

mod grid;
mod probe;

pub use grid::{Axis, CurvatureGrid};
pub use probe::{path_length, PathLength, ProbeOptions, Toward};

use crate::error::{Error, Result};
use crate::moduli::{metric_tensor, EntropyChart, MetricKind};

/// Coefficients `(E, F, G)` of a metric `E du^2 + 2F du dv + G dv^2`.
///
/// Sampling outside the domain must return an error.
pub trait TensorField: Sync {
    fn sample(&self, x: f64, y: f64) -> Result<(f64, f64, f64)>;
}

impl<T> TensorField for T
where
    T: Fn(f64, f64) -> Result<(f64, f64, f64)> + Sync,
{
    fn sample(&self, x: f64, y: f64) -> Result<(f64, f64, f64)> {
        self(x, y)
    }
}

/// The pressure or Weil-Petersson form of a two-dimensional chart.
pub struct ChartField<'a> {
    pub chart: &'a EntropyChart,
    pub kind: MetricKind,
}

impl TensorField for ChartField<'_> {
    fn sample(&self, x: f64, y: f64) -> Result<(f64, f64, f64)> {
        let m = metric_tensor(self.chart, &[x, y], self.kind)?;
        match (m.f(), m.g()) {
            (Some(f), Some(g)) => Ok((m.e(), f, g)),
            _ => Err(Error::InvalidArgument("curvature needs a two-dimensional chart".into())),
        }
    }
}

/// Default finite-difference step at `(x, y)`.
pub fn default_step(x: f64, y: f64) -> f64 {
    1e-3 * x.abs().max(y.abs()).max(1.0)
}

/// How many times the step is halved when the stencil leaves the domain.
pub const MAX_STEP_HALVINGS: usize = 6;

/// Gaussian curvature by the Brioschi formula with the default step,
/// halving it while the stencil leaves the domain.
pub fn brioschi_curvature<T: TensorField + ?Sized>(field: &T, x: f64, y: f64) -> Result<f64> {
    let mut h = default_step(x, y);
    for _ in 0..MAX_STEP_HALVINGS {
        match brioschi_curvature_with_step(field, x, y, h) {
            Err(Error::OutOfDomain(_)) => h /= 2.0,
            other => return other,
        }
    }
    brioschi_curvature_with_step(field, x, y, h)
}

#[derive(Clone, Copy)]
struct Jet {
    value: f64,
    du: f64,
    dv: f64,
    duu: f64,
    dvv: f64,
    duv: f64,
}

/// Gaussian curvature by the Brioschi formula,
///
/// ```text
///        | -E_vv/2 + F_uv - G_uu/2   E_u/2   F_u - E_v/2 |   | 0      E_v/2  G_u/2 |
///        | F_v - G_u/2               E       F           | - | E_v/2  E      F     |
///        | G_v/2                     F       G           |   | G_u/2  F      G     |
///  K =  ---------------------------------------------------------------------------
///                                     (E G - F^2)^2
/// ```
///
/// with partial derivatives from central differences at steps `h` and
/// `h/2` combined by Richardson extrapolation.
pub fn brioschi_curvature_with_step<T: TensorField + ?Sized>(field: &T, x: f64, y: f64, h: f64) -> Result<f64> {
    let sample = |dx: f64, dy: f64| -> Result<[f64; 3]> {
        match field.sample(x + dx, y + dy) {
            Ok((e, f, g)) => Ok([e, f, g]),
            Err(Error::Infeasible { .. }) | Err(Error::InvalidWeighting(_)) | Err(Error::OutOfDomain(_)) => {
                Err(Error::OutOfDomain(vec![x + dx, y + dy]))
            }
            Err(other) => Err(other),
        }
    };

    let centre = sample(0.0, 0.0)?;
    let mut levels = Vec::with_capacity(2);
    for step in [h, h / 2.0] {
        let east = sample(step, 0.0)?;
        let west = sample(-step, 0.0)?;
        let north = sample(0.0, step)?;
        let south = sample(0.0, -step)?;
        let ne = sample(step, step)?;
        let nw = sample(-step, step)?;
        let se = sample(step, -step)?;
        let sw = sample(-step, -step)?;
        let jets: Vec<Jet> = (0..3)
            .map(|c| Jet {
                value: centre[c],
                du: (east[c] - west[c]) / (2.0 * step),
                dv: (north[c] - south[c]) / (2.0 * step),
                duu: (east[c] - 2.0 * centre[c] + west[c]) / (step * step),
                dvv: (north[c] - 2.0 * centre[c] + south[c]) / (step * step),
                duv: (ne[c] - nw[c] - se[c] + sw[c]) / (4.0 * step * step),
            })
            .collect();
        levels.push(jets);
    }
    let extrapolate = |a: f64, b: f64| (4.0 * b - a) / 3.0;
    let jet = |c: usize| {
        let (a, b) = (levels[0][c], levels[1][c]);
        Jet {
            value: a.value,
            du: extrapolate(a.du, b.du),
            dv: extrapolate(a.dv, b.dv),
            duu: extrapolate(a.duu, b.duu),
            dvv: extrapolate(a.dvv, b.dvv),
            duv: extrapolate(a.duv, b.duv),
        }
    };
    brioschi(jet(0), jet(1), jet(2))
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn brioschi(e: Jet, f: Jet, g: Jet) -> Result<f64> {
    let (ev, fv, gv) = (e.value, f.value, g.value);
    let disc = ev * gv - fv * fv;
    if !(disc > 0.0) {
        return Err(Error::DegenerateMetric(disc));
    }
    let first = det3([
        [-0.5 * e.dvv + f.duv - 0.5 * g.duu, 0.5 * e.du, f.du - 0.5 * e.dv],
        [f.dv - 0.5 * g.du, ev, fv],
        [0.5 * g.dv, fv, gv],
    ]);
    let second = det3([[0.0, 0.5 * e.dv, 0.5 * g.du], [0.5 * e.dv, ev, fv], [0.5 * g.du, fv, gv]]);
    Ok((first - second) / (disc * disc))
}
