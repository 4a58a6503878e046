//! Undirected metric-graph topology and the directed-edge shift it induces.
//!
//! Each undirected edge `e_i` (file order, `i = 0..k`) is doubled into a
//! forward copy at state `i` and a reversed copy at state `i + k`. A state
//! `e'` may follow `e` when `e'` leaves the vertex `e` arrives at and `e'` is
//! not the reversal of `e`, so admissible words are exactly the
//! non-backtracking edge paths of the graph.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub u: String,
    pub v: String,
}

impl Edge {
    pub fn new(id: impl Into<String>, u: impl Into<String>, v: impl Into<String>) -> Self {
        Edge { id: id.into(), u: u.into(), v: v.into() }
    }

    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }
}

/// A finite, connected undirected graph with cycle rank at least two.
/// Loops and parallel edges are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UndirectedGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

impl UndirectedGraph {
    /// Builds and validates a graph. Vertices named only by edges are added
    /// implicitly, after the explicit ones, in order of first appearance.
    pub fn new(vertices: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::Empty);
        }
        let mut seen = HashMap::new();
        for edge in &edges {
            if seen.insert(edge.id.as_str(), ()).is_some() {
                return Err(Error::DuplicateEdge(edge.id.clone()));
            }
        }

        let mut all = Vec::with_capacity(vertices.len());
        let mut index = HashMap::new();
        let mut push = |name: &str, all: &mut Vec<String>| {
            if !index.contains_key(name) {
                index.insert(name.to_string(), all.len());
                all.push(name.to_string());
            }
        };
        for v in &vertices {
            push(v, &mut all);
        }
        for e in &edges {
            push(&e.u, &mut all);
            push(&e.v, &mut all);
        }

        let graph = UndirectedGraph { vertices: all, edges };
        graph.check_connected()?;
        let rank = graph.cycle_rank();
        if rank < 2 {
            return Err(Error::TrivialGraph(rank));
        }
        Ok(graph)
    }

    /// Parses the line-oriented graph format:
    ///
    /// ```text
    /// # figure 8
    /// vertex a
    /// edge e1 a a
    /// edge e2 a a
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = line.split_whitespace().collect();
            let parse_err = |message: String| Error::Parse { line: n + 1, message };
            match tokens.as_slice() {
                [] => {}
                ["vertex", name] => vertices.push(name.to_string()),
                ["edge", id, u, v] => edges.push(Edge::new(*id, *u, *v)),
                ["vertex", ..] => return Err(parse_err("expected `vertex <name>`".into())),
                ["edge", ..] => return Err(parse_err("expected `edge <id> <u> <v>`".into())),
                [other, ..] => return Err(parse_err(format!("unknown directive `{other}`"))),
            }
        }
        Self::new(vertices, edges)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    /// `|E| - |V| + 1` for a connected graph.
    pub fn cycle_rank(&self) -> i64 {
        self.edges.len() as i64 - self.vertices.len() as i64 + 1
    }

    fn vertex_index(&self, name: &str) -> usize {
        self.vertices.iter().position(|v| v == name).expect("vertex registered at construction")
    }

    fn check_connected(&self) -> Result<()> {
        let n = self.vertices.len();
        let mut neighbours = vec![Vec::new(); n];
        for e in &self.edges {
            let (u, v) = (self.vertex_index(&e.u), self.vertex_index(&e.v));
            neighbours[u].push(v);
            neighbours[v].push(u);
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(x) = queue.pop_front() {
            for &y in &neighbours[x] {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        match seen.iter().position(|s| !s) {
            Some(i) => Err(Error::Disconnected(self.vertices[i].clone())),
            None => Ok(()),
        }
    }
}

impl FromStr for UndirectedGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for UndirectedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.vertices {
            writeln!(f, "vertex {v}")?;
        }
        for e in &self.edges {
            writeln!(f, "edge {} {} {}", e.id, e.u, e.v)?;
        }
        Ok(())
    }
}

/// The doubled directed-edge system with its non-backtracking adjacency.
#[derive(Clone, Debug)]
pub struct DirectedEdgeSystem {
    graph: UndirectedGraph,
    tail: Vec<usize>,
    head: Vec<usize>,
    adjacency: DMatrix<f64>,
}

impl DirectedEdgeSystem {
    pub fn new(graph: UndirectedGraph) -> Result<Self> {
        let k = graph.num_edges();
        let mut tail = Vec::with_capacity(2 * k);
        let mut head = Vec::with_capacity(2 * k);
        for e in graph.edges() {
            tail.push(graph.vertex_index(&e.u));
            head.push(graph.vertex_index(&e.v));
        }
        for i in 0..k {
            tail.push(head[i]);
            head.push(tail[i]);
        }

        let n = 2 * k;
        let adjacency = DMatrix::from_fn(n, n, |i, j| {
            if head[i] == tail[j] && j != (i + k) % n {
                1.0
            } else {
                0.0
            }
        });
        if !is_irreducible(&adjacency) {
            return Err(Error::Reducible);
        }
        Ok(DirectedEdgeSystem { graph, tail, head, adjacency })
    }

    pub fn graph(&self) -> &UndirectedGraph {
        &self.graph
    }

    /// Number of undirected edges `k`.
    pub fn num_edges(&self) -> usize {
        self.graph.num_edges()
    }

    /// Number of directed edges `2k`.
    pub fn num_states(&self) -> usize {
        2 * self.num_edges()
    }

    pub fn reversal(&self, state: usize) -> usize {
        (state + self.num_edges()) % self.num_states()
    }

    /// Undirected edge underlying a directed state.
    pub fn undirected(&self, state: usize) -> usize {
        state % self.num_edges()
    }

    pub fn tail(&self, state: usize) -> &str {
        &self.graph.vertices[self.tail[state]]
    }

    pub fn head(&self, state: usize) -> &str {
        &self.graph.vertices[self.head[state]]
    }

    /// `e1` for forward copies, `~e1` for reversals.
    pub fn label(&self, state: usize) -> String {
        let id = &self.graph.edges[self.undirected(state)].id;
        if state < self.num_edges() {
            id.clone()
        } else {
            format!("~{id}")
        }
    }

    pub fn adjacency(&self) -> &DMatrix<f64> {
        &self.adjacency
    }

    pub fn allows(&self, from: usize, to: usize) -> bool {
        self.adjacency[(from, to)] > 0.0
    }

    pub fn successors(&self, state: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_states()).filter(move |&j| self.allows(state, j))
    }

    /// Lifts per-undirected-edge values to directed states (`e` and its
    /// reversal get the same value).
    pub fn lift(&self, per_edge: &[f64]) -> Result<Vec<f64>> {
        let k = self.num_edges();
        if per_edge.len() != k {
            return Err(Error::DimensionMismatch { expected: k, got: per_edge.len() });
        }
        Ok((0..2 * k).map(|s| per_edge[s % k]).collect())
    }
}

/// True iff the directed graph with an arc wherever `a(i, j) > 0` is strongly
/// connected, i.e. every `(i, j)` has some power with `A^n(i, j) > 0`.
pub fn is_irreducible(a: &DMatrix<f64>) -> bool {
    let n = a.nrows();
    if n == 0 || a.ncols() != n {
        return false;
    }
    let reach = |forward: bool| {
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                let w = if forward { a[(i, j)] } else { a[(j, i)] };
                if w > 0.0 && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    reach(true) && reach(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn figure8() -> DirectedEdgeSystem {
        DirectedEdgeSystem::new("edge e1 a a\nedge e2 a a".parse().unwrap()).unwrap()
    }

    fn matrix(rows: &[&[u8]]) -> DMatrix<f64> {
        DMatrix::from_fn(rows.len(), rows.len(), |i, j| rows[i][j] as f64)
    }

    #[test]
    fn figure8_adjacency_zeros_at_reversal_pairs() {
        let sys = figure8();
        let expected = matrix(&[&[1, 1, 0, 1], &[1, 1, 1, 0], &[0, 1, 1, 1], &[1, 0, 1, 1]]);
        assert_eq!(sys.adjacency(), &expected);
    }

    #[test]
    fn belt_buckle_is_block_antidiagonal() {
        let g: UndirectedGraph = "edge e1 a b\nedge e2 a b\nedge e3 a b".parse().unwrap();
        let sys = DirectedEdgeSystem::new(g).unwrap();
        let expected = matrix(&[
            &[0, 0, 0, 0, 1, 1],
            &[0, 0, 0, 1, 0, 1],
            &[0, 0, 0, 1, 1, 0],
            &[0, 1, 1, 0, 0, 0],
            &[1, 0, 1, 0, 0, 0],
            &[1, 1, 0, 0, 0, 0],
        ]);
        assert_eq!(sys.adjacency(), &expected);
    }

    #[test]
    fn single_edge_is_trivial() {
        let err = "edge e1 a b".parse::<UndirectedGraph>().unwrap_err();
        assert!(matches!(err, Error::TrivialGraph(0)));
    }

    #[test]
    fn single_cycle_is_trivial() {
        let err = "edge e1 a a".parse::<UndirectedGraph>().unwrap_err();
        assert!(matches!(err, Error::TrivialGraph(1)));
    }

    #[test]
    fn rejects_disconnected_and_duplicates() {
        let err = "edge e1 a a\nedge e2 a a\nedge e3 b b".parse::<UndirectedGraph>().unwrap_err();
        assert!(matches!(err, Error::Disconnected(ref v) if v == "b"));
        let err = "edge e1 a a\nedge e1 a a".parse::<UndirectedGraph>().unwrap_err();
        assert!(matches!(err, Error::DuplicateEdge(_)));
        let err = "vertex a\nvertex z\nedge e1 a a\nedge e2 a a".parse::<UndirectedGraph>().unwrap_err();
        assert!(matches!(err, Error::Disconnected(_)));
    }

    #[test]
    fn parser_tolerates_comments_and_whitespace() {
        let g: UndirectedGraph = "  # figure 8\n\nvertex   a  # hub\n\tedge e1 a a\nedge  e2 a\ta\n".parse().unwrap();
        assert_eq!(g.vertices(), ["a"]);
        assert_eq!(g.num_edges(), 2);
        assert_eq!(g.cycle_rank(), 2);
        let err = "edge e1 a".parse::<UndirectedGraph>().unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = "edge e1 a a\nloop e2 a".parse::<UndirectedGraph>().unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn ids_are_case_sensitive() {
        let g: UndirectedGraph = "edge E1 a a\nedge e1 a a".parse().unwrap();
        assert_eq!(g.edge_index("e1"), Some(1));
    }

    #[test]
    fn irreducibility() {
        assert!(is_irreducible(figure8().adjacency()));
        assert!(!is_irreducible(&DMatrix::zeros(4, 4)));
        assert!(!is_irreducible(&matrix(&[&[1, 1], &[0, 1]])));
        assert!(is_irreducible(&matrix(&[&[0, 1], &[1, 0]])));
    }

    #[test]
    fn reversal_symmetry_of_adjacency() {
        let sys = figure8();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(sys.allows(i, j), sys.allows(sys.reversal(j), sys.reversal(i)));
            }
        }
    }

    #[test]
    fn round_trips_through_display() {
        let g: UndirectedGraph = "edge e1 a a\nedge e2 b b\nedge e3 a b".parse().unwrap();
        assert_eq!(g.to_string().parse::<UndirectedGraph>().unwrap(), g);
    }

    #[test]
    fn labels() {
        let sys = figure8();
        assert_eq!(sys.label(1), "e2");
        assert_eq!(sys.label(3), "~e2");
        assert_eq!(sys.tail(0), "a");
    }
}
