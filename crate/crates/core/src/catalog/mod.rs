//! The four example graphs (figure 8, belt buckle, dumbbell, three-petal
//! rose) with closed-form oracles and a harness that checks the engine
//! against them.

mod closed_form;
mod verify;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{DirectedEdgeSystem, UndirectedGraph};
use crate::moduli::EntropyChart;

pub use closed_form::{closed_form_eval, Component, Quantity};
pub use verify::{verify, Check, Report, Tolerances};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExampleId {
    Figure8,
    BeltBuckle,
    Dumbbell,
    Rose,
}

impl ExampleId {
    pub const ALL: [ExampleId; 4] = [ExampleId::Figure8, ExampleId::BeltBuckle, ExampleId::Dumbbell, ExampleId::Rose];

    pub fn name(self) -> &'static str {
        match self {
            ExampleId::Figure8 => "figure8",
            ExampleId::BeltBuckle => "belt-buckle",
            ExampleId::Dumbbell => "dumbbell",
            ExampleId::Rose => "rose",
        }
    }

    /// Graph file text. The last edge is the dependent one.
    pub fn graph_text(self) -> &'static str {
        match self {
            ExampleId::Figure8 => "vertex a\nedge e1 a a\nedge e2 a a\n",
            ExampleId::BeltBuckle => "vertex a\nvertex b\nedge e1 a b\nedge e2 a b\nedge e3 a b\n",
            ExampleId::Dumbbell => "vertex a\nvertex b\nedge e1 a a\nedge e2 b b\nedge e3 a b\n",
            ExampleId::Rose => "vertex a\nedge e1 a a\nedge e2 a a\nedge e3 a a\n",
        }
    }

    pub fn graph(self) -> UndirectedGraph {
        UndirectedGraph::parse(self.graph_text()).expect("catalog graphs are valid")
    }

    pub fn system(self) -> DirectedEdgeSystem {
        DirectedEdgeSystem::new(self.graph()).expect("catalog graphs are valid")
    }

    pub fn chart(self) -> EntropyChart {
        EntropyChart::new(self.system())
    }

    /// Number of free coordinates.
    pub fn dim(self) -> usize {
        match self {
            ExampleId::Figure8 => 1,
            _ => 2,
        }
    }

    /// The adjacency matrix as printed, rows indexed by `e1, .., ek,
    /// reversed e1, .., reversed ek`.
    pub fn printed_adjacency(self) -> Vec<Vec<u8>> {
        let rows: &[[u8; 6]] = match self {
            ExampleId::Figure8 => {
                return vec![vec![1, 1, 0, 1], vec![1, 1, 1, 0], vec![0, 1, 1, 1], vec![1, 0, 1, 1]];
            }
            ExampleId::BeltBuckle => &[
                [0, 0, 0, 0, 1, 1],
                [0, 0, 0, 1, 0, 1],
                [0, 0, 0, 1, 1, 0],
                [0, 1, 1, 0, 0, 0],
                [1, 0, 1, 0, 0, 0],
                [1, 1, 0, 0, 0, 0],
            ],
            ExampleId::Dumbbell => &[
                [1, 0, 1, 0, 0, 0],
                [0, 1, 0, 0, 0, 1],
                [0, 1, 0, 0, 1, 0],
                [0, 0, 1, 1, 0, 0],
                [0, 0, 0, 0, 1, 1],
                [1, 0, 0, 1, 0, 0],
            ],
            ExampleId::Rose => &[
                [1, 1, 1, 0, 1, 1],
                [1, 1, 1, 1, 0, 1],
                [1, 1, 1, 1, 1, 0],
                [0, 1, 1, 1, 1, 1],
                [1, 0, 1, 1, 1, 1],
                [1, 1, 0, 1, 1, 1],
            ],
        };
        rows.iter().map(|r| r.to_vec()).collect()
    }

    /// Whether the closed-form feasibility inequality holds.
    ///
    /// * figure 8: `x > 0`
    /// * belt buckle: `e^{x+y} < 3 + e^x + e^y`
    /// * dumbbell: `(e^x - 1)(e^y - 1) < 4`
    /// * rose: `e^{x+y} - e^x - e^y - 3 > 0`
    pub fn feasible(self, point: &[f64]) -> bool {
        if point.len() != self.dim() || point.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
            return false;
        }
        match self {
            ExampleId::Figure8 => true,
            ExampleId::BeltBuckle => {
                let (x, y) = (point[0], point[1]);
                (x + y).exp() < 3.0 + x.exp() + y.exp()
            }
            ExampleId::Dumbbell => point[0].exp_m1() * point[1].exp_m1() < 4.0,
            ExampleId::Rose => {
                let (x, y) = (point[0], point[1]);
                (x + y).exp() - x.exp() - y.exp() - 3.0 > 0.0
            }
        }
    }

    /// Box the random and quasi-random sample points are drawn from,
    /// `[lo, hi]` per coordinate. Points are kept when feasible.
    pub fn sample_box(self) -> (f64, f64) {
        match self {
            ExampleId::Figure8 => (0.05, 6.0),
            ExampleId::BeltBuckle | ExampleId::Dumbbell => (0.05, 3.0),
            ExampleId::Rose => (0.5, 12.0),
        }
    }

    /// `n` feasible points from a Halton sequence over the sample box.
    pub fn halton_points(self, n: usize) -> Vec<Vec<f64>> {
        let (lo, hi) = self.sample_box();
        let mut out = Vec::with_capacity(n);
        let mut index = 1;
        while out.len() < n {
            let p: Vec<f64> = [2, 3][..self.dim()].iter().map(|&b| lo + (hi - lo) * radical_inverse(index, b)).collect();
            index += 1;
            if self.feasible(&p) {
                out.push(p);
            }
        }
        out
    }

    /// The spot values recorded for this example.
    pub fn spots(self) -> impl Iterator<Item = &'static SpotValue> {
        SPOTS.iter().filter(move |s| s.example == self)
    }
}

fn radical_inverse(mut i: usize, base: usize) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut out = 0.0;
    while i > 0 {
        out += (i % base) as f64 * inv;
        i /= base;
        inv /= base as f64;
    }
    out
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExampleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "figure8" | "figure-8" => Ok(ExampleId::Figure8),
            "belt-buckle" | "belt" => Ok(ExampleId::BeltBuckle),
            "dumbbell" => Ok(ExampleId::Dumbbell),
            "rose" => Ok(ExampleId::Rose),
            other => Err(Error::InvalidArgument(format!(
                "unknown example `{other}` (expected figure8, belt-buckle, dumbbell or rose)"
            ))),
        }
    }
}

/// What a spot value asserts.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpotCheck {
    /// `|got - value| <= tolerance`.
    Near { value: f64, tolerance: f64 },
    /// `lo < got < hi`.
    Within { lo: f64, hi: f64 },
    Positive,
    Negative,
}

impl SpotCheck {
    pub fn holds(&self, got: f64) -> bool {
        match *self {
            SpotCheck::Near { value, tolerance } => (got - value).abs() <= tolerance,
            SpotCheck::Within { lo, hi } => lo < got && got < hi,
            SpotCheck::Positive => got > 0.0,
            SpotCheck::Negative => got < 0.0,
        }
    }
}

/// Where a spot value is evaluated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpotSite {
    Point(f64, f64),
    /// Extremes over a grid `lo..hi` with `count` points per axis.
    GridMin { lo: f64, hi: f64, count: usize },
    /// Every feasible grid value must satisfy the check.
    GridAll { lo: f64, hi: f64, count: usize },
}

/// A curvature value read off the published plots.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpotValue {
    pub id: &'static str,
    pub example: ExampleId,
    pub metric: crate::moduli::MetricKind,
    pub site: SpotSite,
    pub check: SpotCheck,
    /// The value as quoted.
    pub quoted: &'static str,
}

const LOG3_INSIDE: f64 = 1.097_612_288_668_109_6;

/// Belt buckle: the WP curvature tends to about `-0.485025` at the corner
/// `(log 3, log 3)` and has minimum around `-0.564958`. Rose: `0.2 < K_P <
/// 1`, and `K_WP` is positive at `(5, 15)` and negative at `(19, 19)`.
pub static SPOTS: [SpotValue; 5] = [
    SpotValue {
        id: "belt-buckle.K_WP.corner",
        example: ExampleId::BeltBuckle,
        metric: crate::moduli::MetricKind::WeilPetersson,
        site: SpotSite::Point(LOG3_INSIDE, LOG3_INSIDE),
        check: SpotCheck::Near { value: -0.485, tolerance: 0.010 },
        quoted: "K_WP(x0, y0) ~ -0.485025",
    },
    SpotValue {
        id: "belt-buckle.K_WP.grid-min",
        example: ExampleId::BeltBuckle,
        metric: crate::moduli::MetricKind::WeilPetersson,
        site: SpotSite::GridMin { lo: 0.05, hi: 5.0, count: 100 },
        check: SpotCheck::Within { lo: -0.575, hi: -0.555 },
        quoted: "minimum around -0.564958",
    },
    SpotValue {
        id: "rose.K_P.range",
        example: ExampleId::Rose,
        metric: crate::moduli::MetricKind::Pressure,
        site: SpotSite::GridAll { lo: 0.5, hi: 20.0, count: 40 },
        check: SpotCheck::Within { lo: 0.15, hi: 1.05 },
        quoted: "0.2 < K_P(x, y) < 1",
    },
    SpotValue {
        id: "rose.K_WP(5,15)",
        example: ExampleId::Rose,
        metric: crate::moduli::MetricKind::WeilPetersson,
        site: SpotSite::Point(5.0, 15.0),
        check: SpotCheck::Positive,
        quoted: "positive when (x, y) = (5, 15)",
    },
    SpotValue {
        id: "rose.K_WP(19,19)",
        example: ExampleId::Rose,
        metric: crate::moduli::MetricKind::WeilPetersson,
        site: SpotSite::Point(19.0, 19.0),
        check: SpotCheck::Negative,
        quoted: "negative when (x, y) = (19, 19)",
    },
];

/// The graph, its directed-edge system and the closed forms.
pub fn catalog_graph(id: ExampleId) -> (UndirectedGraph, DirectedEdgeSystem, ClosedFormSet) {
    let graph = id.graph();
    let sys = DirectedEdgeSystem::new(graph.clone()).expect("catalog graphs are valid");
    (graph, sys, ClosedFormSet { id })
}

/// Closed forms for one example.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosedFormSet {
    pub id: ExampleId,
}

impl ClosedFormSet {
    pub fn eval(&self, quantity: Quantity, point: &[f64]) -> Result<f64> {
        closed_form_eval(self.id, quantity, point)
    }

    pub fn quantities(&self) -> Vec<Quantity> {
        Quantity::available(self.id)
    }
}
