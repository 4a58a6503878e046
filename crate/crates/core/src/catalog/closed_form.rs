//! Closed forms for the example graphs, in the free coordinates `x` (edge
//! `e1`) and `y` (edge `e2`). The dependent edge is the last one.

use std::fmt;

use super::ExampleId;
use crate::error::{Error, Result};
use crate::moduli::MetricKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Component {
    E,
    F,
    G,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantity {
    /// The dependent length.
    Surface,
    /// `p_i` for edge `e_{i+1}`; the reversed copy carries the same mass.
    Stationary(usize),
    Tensor(MetricKind, Component),
    /// Gaussian curvature of the pressure metric.
    CurvatureP,
    /// Squared speed of the one-dimensional chart (figure 8).
    SpeedSq(MetricKind),
    /// Squared pressure speed along the diagonal `x = y` at `(x, x)`.
    DiagonalSpeedSqP,
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Surface => write!(f, "surface"),
            Quantity::Stationary(i) => write!(f, "p{}", i + 1),
            Quantity::Tensor(kind, c) => write!(f, "{c:?}_{kind}"),
            Quantity::CurvatureP => write!(f, "K_P"),
            Quantity::SpeedSq(kind) => write!(f, "speed2_{kind}"),
            Quantity::DiagonalSpeedSqP => write!(f, "diagonal-speed2_P"),
        }
    }
}

impl Quantity {
    /// Quantities with a closed form for `id`.
    pub fn available(id: ExampleId) -> Vec<Quantity> {
        use Component::*;
        use MetricKind::*;
        let mut out = vec![Quantity::Surface];
        match id {
            ExampleId::Figure8 => {
                out.extend([Quantity::Stationary(0), Quantity::Stationary(1)]);
                out.extend([Quantity::SpeedSq(Pressure), Quantity::SpeedSq(WeilPetersson)]);
            }
            _ => {
                out.extend((0..3).map(Quantity::Stationary));
                for kind in [Pressure, WeilPetersson] {
                    out.extend([E, F, G].map(|c| Quantity::Tensor(kind, c)));
                }
                if id != ExampleId::Rose {
                    out.extend([Quantity::CurvatureP, Quantity::DiagonalSpeedSqP]);
                }
            }
        }
        out
    }
}

/// Evaluates a transcribed closed form at a feasible point.
pub fn closed_form_eval(id: ExampleId, quantity: Quantity, point: &[f64]) -> Result<f64> {
    if !Quantity::available(id).contains(&quantity) {
        return Err(Error::InvalidArgument(format!("no closed form for {quantity} on {id}")));
    }
    let point = match quantity {
        Quantity::DiagonalSpeedSqP => match point {
            [x] => vec![*x, *x],
            [x, y] if x == y => vec![*x, *y],
            _ => return Err(Error::InvalidArgument(format!("diagonal speed needs x = y, got {point:?}"))),
        },
        _ => point.to_vec(),
    };
    if point.len() != id.dim() {
        return Err(Error::DimensionMismatch { expected: id.dim(), got: point.len() });
    }
    if !id.feasible(&point) {
        return Err(Error::Infeasible { point, reason: format!("outside the {id} feasibility region") });
    }
    Ok(match id {
        ExampleId::Figure8 => figure8(quantity, point[0]),
        ExampleId::BeltBuckle => belt(quantity, point[0], point[1]),
        ExampleId::Dumbbell => dumbbell(quantity, point[0], point[1]),
        ExampleId::Rose => rose(quantity, point[0], point[1]),
    })
}

/// * surface: `e^{-y} = (1 - e^{-x}) / (1 + 3 e^{-x})`
/// * `p1 = 2e^x / (6e^x + e^{2x} - 3)`,
///   `p2 = (2e^x + e^{2x} - 3) / (2(6e^x + e^{2x} - 3))`
/// * `|c'|^2_P = 4e^x (e^{2x} + 3) / (-24e^x + 6e^{2x} + 8e^{3x} + e^{4x} + 9)`
/// * `|c'|^2_WP = -4e^x (e^{2x} + 3) / ((e^x - 1)(e^x + 3)((2e^x + e^{2x} - 3)
///   log((e^x - 1)/(e^x + 3)) - 4 e^x x))`
fn figure8(q: Quantity, x: f64) -> f64 {
    let a = x.exp();
    match q {
        Quantity::Surface => -((-(-x).exp_m1()) / (1.0 + 3.0 * (-x).exp())).ln(),
        Quantity::Stationary(0) => 2.0 * a / (6.0 * a + a * a - 3.0),
        Quantity::Stationary(1) => (2.0 * a + a * a - 3.0) / (2.0 * (6.0 * a + a * a - 3.0)),
        Quantity::SpeedSq(MetricKind::Pressure) => {
            4.0 * a * (a * a + 3.0) / (-24.0 * a + 6.0 * a * a + 8.0 * a.powi(3) + a.powi(4) + 9.0)
        }
        Quantity::SpeedSq(MetricKind::WeilPetersson) => {
            let am1 = x.exp_m1();
            -4.0 * a * (a * a + 3.0)
                / (am1 * (a + 3.0) * ((2.0 * a + a * a - 3.0) * (am1 / (a + 3.0)).ln() - 4.0 * a * x))
        }
        _ => unreachable!("checked by available()"),
    }
}

/// With `D' = 3e^{x+y} + e^{2x+y} + e^{x+2y} - 1` and
/// `Den = 2(e^x + e^y + 2)(e^{x+y} - 1) D'`:
///
/// * surface: `S = -log((e^{x+y} - 1)/(e^x + e^y + 2))`
/// * `p1 = e^x (e^y + 1)^2 / (4D')`, `p2 = (e^x + 1)^2 e^y / (4D')`,
///   `p3 = (e^x + e^y + 2)(e^{x+y} - 1) / (4D')`
/// * `E_P = e^x (e^y + 1)^2 (e^{2x+y} + e^y + 2) / Den`
/// * `F_P = (e^x + 1)(e^y + 1) e^{x+y} (-e^{x+y} + e^x + e^y + 3) / Den`
/// * `G_P = (e^x + 1)^2 e^y (e^{x+2y} + e^x + 2) / Den`
/// * the WP entries have the same numerators over
///   `(e^x + e^y + 2)(e^{x+y} - 1) f` with
///   `f = x e^{x+2y} + y e^{2x+y} + 2e^{x+y}(x + y)
///   + (-2e^{x+y} - e^{2x+y} - e^{x+2y} + e^x + e^y + 2) log((e^{x+y} - 1)/(e^x + e^y + 2))
///   + e^x x + e^y y`
/// * `K_P` is the long quotient below over `4(e^x + 1)^2 (e^y + 1)^2 D'`
/// * diagonal: `|c'|^2_P = e^x / (2e^{2x} - 3e^x + 1)`
fn belt(q: Quantity, x: f64, y: f64) -> f64 {
    let (a, b) = (x.exp(), y.exp());
    let ab = a * b;
    let d1 = 3.0 * ab + a * ab + ab * b - 1.0;
    let s = (a + b + 2.0) * (x + y).exp_m1();
    let log_ratio = ((x + y).exp_m1() / (a + b + 2.0)).ln();
    let num = |c: Component| match c {
        Component::E => a * (b + 1.0).powi(2) * (a * ab + b + 2.0),
        Component::F => (a + 1.0) * (b + 1.0) * ab * (-ab + a + b + 3.0),
        Component::G => (a + 1.0).powi(2) * b * (ab * b + a + 2.0),
    };
    match q {
        Quantity::Surface => -log_ratio,
        Quantity::Stationary(0) => a * (b + 1.0).powi(2) / (4.0 * d1),
        Quantity::Stationary(1) => (a + 1.0).powi(2) * b / (4.0 * d1),
        Quantity::Stationary(2) => s / (4.0 * d1),
        Quantity::Tensor(MetricKind::Pressure, c) => num(c) / (2.0 * s * d1),
        Quantity::Tensor(MetricKind::WeilPetersson, c) => {
            let f = x * ab * b + y * a * ab + 2.0 * ab * (x + y)
                + (-2.0 * ab - a * ab - ab * b + a + b + 2.0) * log_ratio
                + a * x
                + b * y;
            num(c) / (s * f)
        }
        Quantity::CurvatureP => {
            let e = |i: i32, j: i32| a.powi(i) * b.powi(j);
            let n = 5.0 + 6.0 * a + 3.0 * e(2, 0) + 6.0 * b + 3.0 * e(0, 2) + 3.0 * e(1, 1)
                + 45.0 * e(2, 2)
                + 19.0 * e(3, 3)
                + 11.0 * e(2, 1)
                + 9.0 * e(3, 1)
                + 3.0 * e(4, 1)
                + 11.0 * e(1, 2)
                + 33.0 * e(3, 2)
                + 8.0 * e(4, 2)
                + 9.0 * e(1, 3)
                + 33.0 * e(2, 3)
                + 3.0 * e(4, 3)
                + 3.0 * e(1, 4)
                + 8.0 * e(2, 4)
                + 3.0 * e(3, 4);
            n / (4.0 * (a + 1.0).powi(2) * (b + 1.0).powi(2) * d1)
        }
        Quantity::DiagonalSpeedSqP => diagonal_speed_sq(x),
        _ => unreachable!("checked by available()"),
    }
}

fn diagonal_speed_sq(x: f64) -> f64 {
    let a = x.exp();
    a / ((2.0 * a - 1.0) * x.exp_m1())
}

/// With `L = 4e^{x+y} - 3e^x - 3e^y + 2`:
///
/// * surface: `S = log 2 - (1/2) log((e^x - 1)(e^y - 1))`
/// * `p1 = e^x (e^y - 1) / (2L)`, `p2 = e^y (e^x - 1) / (2L)`,
///   `p3 = (e^x - 1)(e^y - 1) / L`
/// * `E_P = e^x (e^y - 1) / ((e^x - 1) L)`, `F_P = 0`,
///   `G_P = (e^x - 1) e^y / ((e^y - 1) L)`
/// * `E_WP`, `G_WP`: the same numerators over `(e^x - 1) f` and
///   `(e^y - 1) f`, with
///   `f = x e^{x+y} + y e^{x+y} - log((e^x - 1)(e^y - 1))
///   + 2(-e^{x+y} + e^x + e^y) log((1/2) sqrt((e^x - 1)(e^y - 1))) - e^x x - e^y y + log 4`
/// * `K_P = (2e^{x+y} - 1) / L`
fn dumbbell(q: Quantity, x: f64, y: f64) -> f64 {
    let (a, b) = (x.exp(), y.exp());
    let (am1, bm1) = (x.exp_m1(), y.exp_m1());
    let ab = a * b;
    let l = 4.0 * ab - 3.0 * a - 3.0 * b + 2.0;
    let log_prod = am1.ln() + bm1.ln();
    let f = || {
        x * ab + y * ab - log_prod + 2.0 * (-ab + a + b) * (0.5 * log_prod - std::f64::consts::LN_2) - a * x - b * y
            + 4f64.ln()
    };
    match q {
        Quantity::Surface => std::f64::consts::LN_2 - 0.5 * log_prod,
        Quantity::Stationary(0) => a * bm1 / (2.0 * l),
        Quantity::Stationary(1) => b * am1 / (2.0 * l),
        Quantity::Stationary(2) => am1 * bm1 / l,
        Quantity::Tensor(MetricKind::Pressure, Component::E) => a * bm1 / (am1 * l),
        Quantity::Tensor(_, Component::F) => 0.0,
        Quantity::Tensor(MetricKind::Pressure, Component::G) => am1 * b / (bm1 * l),
        Quantity::Tensor(MetricKind::WeilPetersson, Component::E) => a * bm1 / (am1 * f()),
        Quantity::Tensor(MetricKind::WeilPetersson, Component::G) => am1 * b / (bm1 * f()),
        Quantity::CurvatureP => (2.0 * ab - 1.0) / l,
        Quantity::DiagonalSpeedSqP => diagonal_speed_sq(x),
        _ => unreachable!("checked by available()"),
    }
}

/// With `f1 = -e^{x+y} + e^x + e^y + 3`, `f2 = e^{x+y} + 3e^x + 3e^y + 5` and
/// `w = 12e^{x+y} + e^{2(x+y)} + 6e^{2x+y} + 6e^{x+2y} - 10e^x - 3e^{2x}
/// - 10e^y - 3e^{2y} - 15`:
///
/// * surface: `S = -log(-f1/f2)`
/// * `p1 = 2e^x (e^y + 1)^2 / w`, `p2 = 2(e^x + 1)^2 e^y / w`,
///   `p3 = (e^{x+y} - e^x - e^y - 3) f2 / (2w)`
/// * `E_P = -4e^x (e^y + 1)^2 (e^y + 3)(e^{2x+y} - e^{2x} + 3e^y + 5) / (f1 f2 w)`
/// * `F_P = -32 (e^x + 1)(e^y + 1) e^{x+y} (e^x + e^y + 2) / (f1 f2 w)`
/// * `G_P = -4(e^x + 1)^2 (e^x + 3) e^y (e^{x+2y} + 3e^x - e^{2y} + 5) / (f1 f2 w)`
/// * the WP entries have the same numerators without the sign, over
///   `f1 f2 f3` with
///   `f3 = -4(x e^{x+2y} + y e^{2x+y} + 2e^{x+y}(x + y) + e^x x + e^y y)
///   + (-4e^{x+y} + e^{2(x+y)} + 2e^{2x+y} + 2e^{x+2y} - 14e^x - 3e^{2x}
///   - 14e^y - 3e^{2y} - 15) log(-f1/f2)`
///
/// `-f1/f2` is evaluated as `1 - 4(e^x + e^y + 2)/f2`, which is the same
/// number without the cancellation far from the origin.
fn rose(q: Quantity, x: f64, y: f64) -> f64 {
    let (a, b) = (x.exp(), y.exp());
    let ab = a * b;
    let f1 = -ab + a + b + 3.0;
    let f2 = ab + 3.0 * a + 3.0 * b + 5.0;
    let log_ratio = (-4.0 * (a + b + 2.0) / f2).ln_1p();
    let w = 12.0 * ab + ab * ab + 6.0 * a * ab + 6.0 * ab * b - 10.0 * a - 3.0 * a * a - 10.0 * b - 3.0 * b * b - 15.0;
    let num = |c: Component| match c {
        Component::E => 4.0 * a * (b + 1.0).powi(2) * (b + 3.0) * (a * ab - a * a + 3.0 * b + 5.0),
        Component::F => 32.0 * (a + 1.0) * (b + 1.0) * ab * (a + b + 2.0),
        Component::G => 4.0 * (a + 1.0).powi(2) * (a + 3.0) * b * (ab * b + 3.0 * a - b * b + 5.0),
    };
    match q {
        Quantity::Surface => -log_ratio,
        Quantity::Stationary(0) => 2.0 * a * (b + 1.0).powi(2) / w,
        Quantity::Stationary(1) => 2.0 * (a + 1.0).powi(2) * b / w,
        Quantity::Stationary(2) => -f1 * f2 / (2.0 * w),
        Quantity::Tensor(MetricKind::Pressure, c) => -num(c) / (f1 * f2 * w),
        Quantity::Tensor(MetricKind::WeilPetersson, c) => {
            let f3 = -4.0 * (x * ab * b + y * a * ab + 2.0 * ab * (x + y) + a * x + b * y)
                + (-4.0 * ab + ab * ab + 2.0 * a * ab + 2.0 * ab * b - 14.0 * a - 3.0 * a * a - 14.0 * b
                    - 3.0 * b * b
                    - 15.0)
                    * log_ratio;
            num(c) / (f1 * f2 * f3)
        }
        _ => unreachable!("checked by available()"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moduli::{metric_tensor, MetricKind::*};
    use std::f64::consts::LN_2;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn worked_values() {
        let k = closed_form_eval(ExampleId::Dumbbell, Quantity::CurvatureP, &[LN_2, LN_2]).unwrap();
        assert!(rel(k, 7.0 / 6.0) < 1e-14);
        let s = closed_form_eval(ExampleId::Figure8, Quantity::SpeedSq(Pressure), &[3f64.ln()]).unwrap();
        assert!(rel(s, 0.5) < 1e-14);
        let z = closed_form_eval(ExampleId::BeltBuckle, Quantity::Surface, &[LN_2, LN_2]).unwrap();
        assert!(rel(z, LN_2) < 1e-14);
        let k = closed_form_eval(ExampleId::BeltBuckle, Quantity::CurvatureP, &[LN_2, LN_2]).unwrap();
        assert!(rel(k, 0.75) < 1e-14);
    }

    #[test]
    fn stationary_masses_sum_to_one_half() {
        for id in ExampleId::ALL {
            for p in id.halton_points(5) {
                let total: f64 = (0..id.dim() + 1)
                    .map(|i| closed_form_eval(id, Quantity::Stationary(i), &p).unwrap())
                    .sum();
                assert!((total - 0.5).abs() < 1e-12, "{id} {p:?} {total}");
            }
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(
            closed_form_eval(ExampleId::Dumbbell, Quantity::Surface, &[3.0, 3.0]),
            Err(Error::Infeasible { .. })
        ));
        assert!(matches!(
            closed_form_eval(ExampleId::Rose, Quantity::CurvatureP, &[5.0, 5.0]),
            Err(Error::InvalidArgument(_))
        ));
        assert!(closed_form_eval(ExampleId::Figure8, Quantity::Surface, &[1.0, 2.0]).is_err());
    }

    #[test]
    fn tensors_match_engine() {
        for id in [ExampleId::BeltBuckle, ExampleId::Dumbbell, ExampleId::Rose] {
            let chart = id.chart();
            for p in id.halton_points(4) {
                for kind in [Pressure, WeilPetersson] {
                    let m = metric_tensor(&chart, &p, kind).unwrap();
                    let got = [m.e(), m.f().unwrap(), m.g().unwrap()];
                    for (c, g) in [Component::E, Component::F, Component::G].into_iter().zip(got) {
                        let want = closed_form_eval(id, Quantity::Tensor(kind, c), &p).unwrap();
                        let scale = want.abs().max(1e-6 * m.e().abs());
                        assert!((g - want).abs() <= 1e-6 * scale, "{id} {kind} {c:?} {p:?}: {g} vs {want}");
                    }
                }
            }
        }
    }

    #[test]
    fn diagonal_speeds_agree() {
        for x in [0.1, 0.5, 1.0] {
            let b = closed_form_eval(ExampleId::BeltBuckle, Quantity::DiagonalSpeedSqP, &[x]).unwrap();
            let d = closed_form_eval(ExampleId::Dumbbell, Quantity::DiagonalSpeedSqP, &[x]).unwrap();
            let e = closed_form_eval(ExampleId::Dumbbell, Quantity::Tensor(Pressure, Component::E), &[x, x]).unwrap();
            assert!(rel(b, d) < 1e-14);
            assert!(rel(2.0 * e, d) < 1e-12);
        }
    }
}
