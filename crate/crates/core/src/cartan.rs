//! Valued graphs and quivers, symmetrizable generalized Cartan matrices, and
//! the block and product constructions built from them.
//!
//! Valuations follow the species convention used in [`crate::modcat`]:
//! `d_ij` is the dimension of the arrow bimodule over the field at `i`, so a
//! valid graph satisfies `d_i d_ij = d_j d_ji`, which is exactly the
//! symmetrization condition `d_i a_ij = d_j a_ji` for `a_ij = -d_ij`.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CartanError {
    #[error("matrix is not symmetrizable")]
    NotSymmetrizable,
    #[error("not a generalized Cartan matrix: {0}")]
    NotCartan(String),
    #[error("invalid valued graph: {0}")]
    InvalidGraph(String),
    #[error("invalid valued quiver: {0}")]
    InvalidQuiver(String),
    #[error("quiver contains an oriented cycle through vertex {0}")]
    OrientedCycle(String),
    #[error("product is not a valued quiver: {0}")]
    ProductNotValued(String),
    #[error("2(i,j)/(i,i) is not an integer for i={i}, j={j}")]
    DivisibilityViolation { i: String, j: String },
    #[error("invalid pairing data: {0}")]
    InvalidPairing(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Square integer matrix indexed by ordered vertex labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CartanMatrix {
    labels: Vec<String>,
    entries: Vec<Vec<i64>>,
}

impl CartanMatrix {
    /// Checked constructor: diagonal 2, non-positive off-diagonal entries
    /// with symmetric zero pattern, and symmetrizable.
    pub fn new(labels: Vec<String>, entries: Vec<Vec<i64>>) -> Result<Self, CartanError> {
        let n = labels.len();
        if entries.len() != n || entries.iter().any(|r| r.len() != n) {
            return Err(CartanError::NotCartan("matrix must be square and match labels".into()));
        }
        for i in 0..n {
            if entries[i][i] != 2 {
                return Err(CartanError::NotCartan(format!("a_{i}{i} = {} != 2", entries[i][i])));
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                if entries[i][j] > 0 {
                    return Err(CartanError::NotCartan(format!("a_{i}{j} = {} > 0", entries[i][j])));
                }
                if (entries[i][j] == 0) != (entries[j][i] == 0) {
                    return Err(CartanError::NotCartan(format!("zero pattern of a_{i}{j}, a_{j}{i}")));
                }
            }
        }
        let m = Self { labels, entries };
        symmetrizer_of(&m.entries)?;
        Ok(m)
    }

    /// Labels `1..=n`.
    pub fn from_rows(entries: Vec<Vec<i64>>) -> Result<Self, CartanError> {
        let labels = (1..=entries.len()).map(|i| i.to_string()).collect();
        Self::new(labels, entries)
    }

    /// Parses `"[2]"`, `"[[2,-1],[-1,2]]"` and similar JSON-style text.
    pub fn parse(text: &str) -> Result<Self, CartanError> {
        let rows: Vec<Vec<i64>> = match serde_json::from_str::<Vec<Vec<i64>>>(text) {
            Ok(rows) => rows,
            Err(_) => match serde_json::from_str::<Vec<i64>>(text) {
                Ok(flat) if flat.len() == 1 => vec![flat],
                _ => return Err(CartanError::Parse(format!("cannot read matrix {text:?}"))),
            },
        };
        Self::from_rows(rows)
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..n).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.entries).expect("integer matrix serializes")
    }
}

impl fmt::Display for CartanMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

/// Minimal positive `d` with `d_i a_ij = d_j a_ji`, normalized per connected
/// component and then to global gcd one.
fn symmetrizer_of(a: &[Vec<i64>]) -> Result<Vec<u32>, CartanError> {
    let n = a.len();
    let mut d: Vec<Option<Ratio<i64>>> = vec![None; n];
    let mut comp = vec![usize::MAX; n];
    let mut ncomp = 0;
    for root in 0..n {
        if d[root].is_some() {
            continue;
        }
        d[root] = Some(Ratio::from_integer(1));
        comp[root] = ncomp;
        let mut stack = vec![root];
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if j == i || a[i][j] == 0 {
                    continue;
                }
                // d_j = d_i a_ij / a_ji
                let dj = d[i].unwrap() * Ratio::new(a[i][j], a[j][i]);
                match d[j] {
                    None => {
                        d[j] = Some(dj);
                        comp[j] = ncomp;
                        stack.push(j);
                    }
                    Some(existing) if existing != dj => return Err(CartanError::NotSymmetrizable),
                    Some(_) => {}
                }
            }
        }
        ncomp += 1;
    }
    let mut out = vec![0u32; n];
    for c in 0..ncomp {
        let members: Vec<usize> = (0..n).filter(|&i| comp[i] == c).collect();
        let den = members.iter().fold(1i64, |acc, &i| acc.lcm(d[i].unwrap().denom()));
        let ints: Vec<i64> = members.iter().map(|&i| (d[i].unwrap() * den).to_integer()).collect();
        let g = ints.iter().fold(0i64, |acc, x| acc.gcd(x));
        for (k, &i) in members.iter().enumerate() {
            out[i] = (ints[k] / g) as u32;
        }
    }
    Ok(out)
}

/// Minimal symmetrizer of a generalized Cartan matrix.
pub fn symmetrizer(c: &CartanMatrix) -> Result<Vec<u32>, CartanError> {
    symmetrizer_of(&c.entries)
}

/// A valued graph `(I, d)`: ordered vertex ids, vertex symmetrizer `d_i` and
/// edge valuations `d_ij`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuedGraph {
    vertices: Vec<String>,
    d_vertex: Vec<u32>,
    d_edge: BTreeMap<(usize, usize), u32>,
}

impl ValuedGraph {
    /// `d_edge` holds only the nonzero ordered pairs.
    pub fn new(
        vertices: Vec<String>,
        d_vertex: Vec<u32>,
        d_edge: BTreeMap<(usize, usize), u32>,
    ) -> Result<Self, CartanError> {
        let n = vertices.len();
        if d_vertex.len() != n {
            return Err(CartanError::InvalidGraph("one symmetrizer entry per vertex".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for v in &vertices {
            if !seen.insert(v) {
                return Err(CartanError::InvalidGraph(format!("duplicate vertex id {v:?}")));
            }
        }
        if d_vertex.contains(&0) {
            return Err(CartanError::InvalidGraph("vertex symmetrizer must be positive".into()));
        }
        if n > 0 && d_vertex.iter().fold(0u32, |g, x| g.gcd(x)) != 1 {
            return Err(CartanError::InvalidGraph("vertex symmetrizer is not minimal (gcd != 1)".into()));
        }
        let mut d_edge = d_edge;
        d_edge.retain(|_, v| *v != 0);
        for (&(i, j), &dij) in &d_edge {
            if i >= n || j >= n {
                return Err(CartanError::InvalidGraph("edge endpoint out of range".into()));
            }
            if i == j {
                return Err(CartanError::InvalidGraph(format!("d_ii must be 0 at {}", vertices[i])));
            }
            let dji = *d_edge.get(&(j, i)).ok_or_else(|| {
                CartanError::InvalidGraph(format!("d_{{{},{}}} != 0 but reverse is 0", vertices[i], vertices[j]))
            })?;
            if d_vertex[i] * dij != d_vertex[j] * dji {
                return Err(CartanError::InvalidGraph(format!(
                    "d_i d_ij != d_j d_ji for ({}, {})",
                    vertices[i], vertices[j]
                )));
            }
        }
        Ok(Self { vertices, d_vertex, d_edge })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == id)
    }

    pub fn d_vertex(&self) -> &[u32] {
        &self.d_vertex
    }

    pub fn d(&self, i: usize) -> u32 {
        self.d_vertex[i]
    }

    pub fn d_edge(&self, i: usize, j: usize) -> u32 {
        self.d_edge.get(&(i, j)).copied().unwrap_or(0)
    }

    /// Unordered edges `{i, j}` with `i < j` and `d_ij != 0`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.d_edge.keys().filter(|(i, j)| i < j).copied()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.len();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if !seen[j] && self.d_edge(i, j) != 0 {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// `a_ii = 2`, `a_ij = -d_ij`.
pub fn cartan_from_graph(g: &ValuedGraph) -> CartanMatrix {
    let n = g.len();
    let entries = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 2 } else { -(g.d_edge(i, j) as i64) }).collect())
        .collect();
    CartanMatrix { labels: g.vertices.clone(), entries }
}

pub fn graph_from_cartan(c: &CartanMatrix) -> Result<ValuedGraph, CartanError> {
    let d = symmetrizer(c)?;
    let n = c.size();
    let mut edges = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && c.entries[i][j] != 0 {
                edges.insert((i, j), (-c.entries[i][j]) as u32);
            }
        }
    }
    ValuedGraph::new(c.labels.clone(), d, edges)
}

/// An orientation of a valued graph: one arrow per unordered edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuedQuiver {
    graph: ValuedGraph,
    arrows: Vec<(usize, usize)>,
}

impl ValuedQuiver {
    /// Checked constructor: every edge carries exactly one arrow, the graph is
    /// connected, and there is no oriented cycle.
    pub fn new(graph: ValuedGraph, arrows: Vec<(usize, usize)>) -> Result<Self, CartanError> {
        let q = Self::new_unchecked_cycles(graph, arrows)?;
        if let Some(v) = q.find_cycle() {
            return Err(CartanError::OrientedCycle(q.graph.vertices[v].clone()));
        }
        Ok(q)
    }

    /// Like [`ValuedQuiver::new`] but accepts oriented cycles.
    pub fn new_unchecked_cycles(graph: ValuedGraph, arrows: Vec<(usize, usize)>) -> Result<Self, CartanError> {
        let mut covered = std::collections::BTreeSet::new();
        for &(s, t) in &arrows {
            if s >= graph.len() || t >= graph.len() {
                return Err(CartanError::InvalidQuiver("arrow endpoint out of range".into()));
            }
            if graph.d_edge(s, t) == 0 {
                return Err(CartanError::InvalidQuiver(format!(
                    "arrow {} -> {} on a zero valuation",
                    graph.vertices[s], graph.vertices[t]
                )));
            }
            if !covered.insert((s.min(t), s.max(t))) {
                return Err(CartanError::InvalidQuiver(format!(
                    "more than one arrow on edge {{{}, {}}}",
                    graph.vertices[s], graph.vertices[t]
                )));
            }
        }
        if covered.len() != graph.edges().count() {
            return Err(CartanError::InvalidQuiver("every valued edge needs an orientation".into()));
        }
        if !graph.is_connected() {
            return Err(CartanError::InvalidQuiver("quiver must be connected".into()));
        }
        Ok(Self { graph, arrows })
    }

    pub fn graph(&self) -> &ValuedGraph {
        &self.graph
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn vertices(&self) -> &[String] {
        self.graph.vertices()
    }

    pub fn is_acyclic(&self) -> bool {
        self.find_cycle().is_none()
    }

    fn find_cycle(&self) -> Option<usize> {
        // 0 = unvisited, 1 = on stack, 2 = done
        let n = self.graph.len();
        let mut state = vec![0u8; n];
        fn visit(q: &ValuedQuiver, v: usize, state: &mut [u8]) -> Option<usize> {
            state[v] = 1;
            for &(s, t) in &q.arrows {
                if s != v {
                    continue;
                }
                match state[t] {
                    1 => return Some(t),
                    0 => {
                        if let Some(c) = visit(q, t, state) {
                            return Some(c);
                        }
                    }
                    _ => {}
                }
            }
            state[v] = 2;
            None
        }
        (0..n).find_map(|v| if state[v] == 0 { visit(self, v, &mut state) } else { None })
    }

    /// A single vertex with `d = 1`.
    pub fn point(id: &str) -> Self {
        let g = ValuedGraph::new(vec![id.to_string()], vec![1], BTreeMap::new()).unwrap();
        Self { graph: g, arrows: vec![] }
    }

    /// `src -> tgt` with valuation `(d_src_tgt, d_tgt_src)` and the minimal
    /// symmetrizer.
    pub fn single_arrow(src: &str, tgt: &str, d_st: u32, d_ts: u32) -> Result<Self, CartanError> {
        // d_s d_st = d_t d_ts
        let g = d_st.gcd(&d_ts);
        let (ds, dt) = (d_ts / g, d_st / g);
        let mut e = BTreeMap::new();
        e.insert((0, 1), d_st);
        e.insert((1, 0), d_ts);
        let graph = ValuedGraph::new(vec![src.into(), tgt.into()], vec![ds, dt], e)?;
        Self::new(graph, vec![(0, 1)])
    }

    /// Simply-laced linearly oriented `A_n`: `1 -> 2 -> ... -> n`.
    pub fn linear_a(n: usize) -> Self {
        let ids: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let mut e = BTreeMap::new();
        let mut arrows = vec![];
        for i in 0..n.saturating_sub(1) {
            e.insert((i, i + 1), 1);
            e.insert((i + 1, i), 1);
            arrows.push((i, i + 1));
        }
        let g = ValuedGraph::new(ids, vec![1; n], e).unwrap();
        Self::new(g, arrows).unwrap()
    }
}

/// Product valued quiver: vertex set `I × I'` (ids `"a×b"`, first factor
/// major), edges `Ω × I' ⊔ I × Ω'`, symmetrizer `d_i d'_{i'}`.
pub fn product_quiver(a: &ValuedQuiver, b: &ValuedQuiver) -> Result<ValuedQuiver, CartanError> {
    let (na, nb) = (a.graph.len(), b.graph.len());
    let idx = |i: usize, j: usize| i * nb + j;
    let mut ids = Vec::with_capacity(na * nb);
    let mut dv = Vec::with_capacity(na * nb);
    for i in 0..na {
        for j in 0..nb {
            ids.push(format!("{}×{}", a.graph.vertices[i], b.graph.vertices[j]));
            dv.push(a.graph.d(i) * b.graph.d(j));
        }
    }
    let mut edges = BTreeMap::new();
    let mut arrows = Vec::new();
    for &(s, t) in &a.arrows {
        for j in 0..nb {
            edges.insert((idx(s, j), idx(t, j)), a.graph.d_edge(s, t));
            edges.insert((idx(t, j), idx(s, j)), a.graph.d_edge(t, s));
            arrows.push((idx(s, j), idx(t, j)));
        }
    }
    for i in 0..na {
        for &(s, t) in &b.arrows {
            edges.insert((idx(i, s), idx(i, t)), b.graph.d_edge(s, t));
            edges.insert((idx(i, t), idx(i, s)), b.graph.d_edge(t, s));
            arrows.push((idx(i, s), idx(i, t)));
        }
    }
    let graph = ValuedGraph::new(ids, dv, edges).map_err(|e| CartanError::ProductNotValued(e.to_string()))?;
    ValuedQuiver::new_unchecked_cycles(graph, arrows).map_err(|e| CartanError::ProductNotValued(e.to_string()))
}

/// `(+ --(2n,2n)--> -)`.
pub fn bridge_quiver(n: u32) -> ValuedQuiver {
    ValuedQuiver::single_arrow("+", "-", 2 * n, 2 * n).expect("bridge is a valid valued quiver")
}

/// `Γ^± = (+ --(2,2)--> -) × Γ`: a positive and a negative copy of `Γ` with a
/// `(2,2)` arrow from every positive vertex to its negative twin.
pub fn pm_quiver(q: &ValuedQuiver) -> ValuedQuiver {
    product_quiver(&bridge_quiver(1), q).expect("product of valid quivers is valid")
}

/// `(+ --(2n,2n)--> -) × Γ`.
pub fn quiver_2n(q: &ValuedQuiver, n: u32) -> ValuedQuiver {
    product_quiver(&bridge_quiver(n), q).expect("product of valid quivers is valid")
}

/// Block matrix `[[C, -2n Id], [-2n Id, C]]`.
pub fn c_2n(c: &CartanMatrix, n: u32) -> CartanMatrix {
    assert!(n >= 1, "n must be positive");
    let k = c.size();
    let mut entries = vec![vec![0i64; 2 * k]; 2 * k];
    for i in 0..k {
        for j in 0..k {
            entries[i][j] = c.entries[i][j];
            entries[k + i][k + j] = c.entries[i][j];
        }
        entries[i][k + i] = -2 * n as i64;
        entries[k + i][i] = -2 * n as i64;
    }
    let labels = ["+", "-"]
        .iter()
        .flat_map(|s| c.labels.iter().map(move |l| format!("{s}×{l}")))
        .collect();
    CartanMatrix { labels, entries }
}

/// `C^± = c_2n(C, 1)`.
pub fn c_pm(c: &CartanMatrix) -> CartanMatrix {
    c_2n(c, 1)
}

/// Generalized Cartan matrix that may carry imaginary (non-positive)
/// diagonal entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BorcherdsCartanMatrix {
    pub labels: Vec<String>,
    pub entries: Vec<Vec<i64>>,
    pub real: Vec<bool>,
}

/// One index of a Borcherds-Cartan datum: `(id, (i,i), is_simple)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexDatum {
    pub id: String,
    pub self_pairing: i64,
    pub is_simple: bool,
}

/// Real rows `a_ij = 2(i,j)/(i,i)`, imaginary rows `a_ij = (i,j)`.
pub fn borcherds_from_form(
    index_data: &[IndexDatum],
    pairings: &[Vec<i64>],
) -> Result<BorcherdsCartanMatrix, CartanError> {
    let n = index_data.len();
    if pairings.len() != n || pairings.iter().any(|r| r.len() != n) {
        return Err(CartanError::InvalidPairing("pairing matrix must be square".into()));
    }
    for i in 0..n {
        let datum = &index_data[i];
        if pairings[i][i] != datum.self_pairing {
            return Err(CartanError::InvalidPairing(format!("self pairing of {} disagrees", datum.id)));
        }
        if (datum.self_pairing > 0) != datum.is_simple {
            return Err(CartanError::InvalidPairing(format!(
                "(i,i) > 0 must hold exactly for simple indices ({})",
                datum.id
            )));
        }
        for j in 0..n {
            if pairings[i][j] != pairings[j][i] {
                return Err(CartanError::InvalidPairing("pairing must be symmetric".into()));
            }
            if i != j && pairings[i][j] > 0 {
                return Err(CartanError::InvalidPairing(format!(
                    "({}, {}) > 0 off the diagonal",
                    datum.id, index_data[j].id
                )));
            }
        }
    }
    let mut entries = vec![vec![0i64; n]; n];
    for i in 0..n {
        let sii = pairings[i][i];
        for j in 0..n {
            entries[i][j] = if index_data[i].is_simple {
                let num = 2 * pairings[i][j];
                if num % sii != 0 {
                    return Err(CartanError::DivisibilityViolation {
                        i: index_data[i].id.clone(),
                        j: index_data[j].id.clone(),
                    });
                }
                num / sii
            } else {
                pairings[i][j]
            };
        }
    }
    Ok(BorcherdsCartanMatrix {
        labels: index_data.iter().map(|d| d.id.clone()).collect(),
        entries,
        real: index_data.iter().map(|d| d.is_simple).collect(),
    })
}

// ---- quiver-spec files ----

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexSpec {
    pub d: u32,
    pub id: String,
}

/// One arrow; `src_val = d_{src,tgt}`, `dst_val = d_{tgt,src}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowSpec {
    pub dst_val: u32,
    pub src: String,
    pub src_val: u32,
    pub tgt: String,
}

/// On-disk quiver description. Fields are declared in sorted key order so the
/// serialized form is canonical.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverSpec {
    pub arrows: Vec<ArrowSpec>,
    pub vertices: Vec<VertexSpec>,
}

impl QuiverSpec {
    pub fn from_quiver(q: &ValuedQuiver) -> Self {
        let g = &q.graph;
        Self {
            arrows: q
                .arrows
                .iter()
                .map(|&(s, t)| ArrowSpec {
                    dst_val: g.d_edge(t, s),
                    src: g.vertices[s].clone(),
                    src_val: g.d_edge(s, t),
                    tgt: g.vertices[t].clone(),
                })
                .collect(),
            vertices: g.vertices.iter().zip(&g.d_vertex).map(|(id, &d)| VertexSpec { d, id: id.clone() }).collect(),
        }
    }

    pub fn to_quiver(&self) -> Result<ValuedQuiver, CartanError> {
        let ids: Vec<String> = self.vertices.iter().map(|v| v.id.clone()).collect();
        let dv = self.vertices.iter().map(|v| v.d).collect();
        let find = |id: &str| {
            ids.iter().position(|v| v == id).ok_or_else(|| CartanError::InvalidQuiver(format!("unknown vertex {id:?}")))
        };
        let mut edges = BTreeMap::new();
        let mut arrows = vec![];
        for a in &self.arrows {
            let (s, t) = (find(&a.src)?, find(&a.tgt)?);
            if a.src_val == 0 || a.dst_val == 0 {
                return Err(CartanError::InvalidQuiver("arrow valuations must be positive".into()));
            }
            edges.insert((s, t), a.src_val);
            edges.insert((t, s), a.dst_val);
            arrows.push((s, t));
        }
        let graph = ValuedGraph::new(ids, dv, edges)?;
        ValuedQuiver::new(graph, arrows)
    }

    pub fn from_json(text: &str) -> Result<Self, CartanError> {
        serde_json::from_str(text).map_err(|e| CartanError::Parse(e.to_string()))
    }

    /// Canonical text: sorted keys, two-space indentation, trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("quiver spec serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> CartanMatrix {
        CartanMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn cartan_from_graph_examples() {
        let pt = ValuedQuiver::point("1");
        assert_eq!(cartan_from_graph(pt.graph()).rows(), &[vec![2]]);
        let a2 = ValuedQuiver::linear_a(2);
        assert_eq!(cartan_from_graph(a2.graph()).rows(), m(&[&[2, -1], &[-1, 2]]).rows());
        let bridge = bridge_quiver(1);
        assert_eq!(cartan_from_graph(bridge.graph()).rows(), m(&[&[2, -2], &[-2, 2]]).rows());
    }

    #[test]
    fn graph_from_cartan_examples() {
        let g = graph_from_cartan(&m(&[&[2]])).unwrap();
        assert_eq!(g.d_vertex(), &[1]);
        let g = graph_from_cartan(&m(&[&[2, -2], &[-2, 2]])).unwrap();
        assert_eq!((g.d_edge(0, 1), g.d_edge(1, 0)), (2, 2));
        assert_eq!(g.d_vertex(), &[1, 1]);
        let g = graph_from_cartan(&m(&[&[2, -1], &[-2, 2]])).unwrap();
        assert_eq!((g.d_edge(0, 1), g.d_edge(1, 0)), (1, 2));
        assert_eq!(g.d_vertex(), &[2, 1]);
    }

    #[test]
    fn symmetrizer_examples() {
        assert_eq!(symmetrizer(&m(&[&[2, -2], &[-2, 2]])).unwrap(), vec![1, 1]);
        assert_eq!(symmetrizer(&m(&[&[2, -1], &[-2, 2]])).unwrap(), vec![2, 1]);
        assert_eq!(symmetrizer(&m(&[&[2]])).unwrap(), vec![1]);
        // G2
        assert_eq!(symmetrizer(&m(&[&[2, -1], &[-3, 2]])).unwrap(), vec![3, 1]);
    }

    #[test]
    fn not_symmetrizable() {
        // cycle with inconsistent ratios
        let c = vec![vec![2, -1, -1], vec![-2, 2, -1], vec![-1, -1, 2]];
        assert_eq!(CartanMatrix::from_rows(c), Err(CartanError::NotSymmetrizable));
    }

    #[test]
    fn rejects_non_cartan() {
        assert!(matches!(CartanMatrix::from_rows(vec![vec![3]]), Err(CartanError::NotCartan(_))));
        assert!(matches!(CartanMatrix::from_rows(vec![vec![2, 1], vec![1, 2]]), Err(CartanError::NotCartan(_))));
        assert!(matches!(CartanMatrix::from_rows(vec![vec![2, -1], vec![0, 2]]), Err(CartanError::NotCartan(_))));
    }

    #[test]
    fn disconnected_symmetrizer_normalizes_per_component() {
        let c = m(&[&[2, -1, 0, 0], &[-2, 2, 0, 0], &[0, 0, 2, -1], &[0, 0, -1, 2]]);
        assert_eq!(symmetrizer(&c).unwrap(), vec![2, 1, 1, 1]);
    }

    #[test]
    fn block_constructions() {
        assert_eq!(c_pm(&m(&[&[2]])).rows(), m(&[&[2, -2], &[-2, 2]]).rows());
        assert_eq!(c_2n(&m(&[&[2]]), 2).rows(), m(&[&[2, -4], &[-4, 2]]).rows());
        let a2 = m(&[&[2, -1], &[-1, 2]]);
        let pm = c_pm(&a2);
        assert_eq!(pm.rows(), &[vec![2, -1, -2, 0], vec![-1, 2, 0, -2], vec![-2, 0, 2, -1], vec![0, -2, -1, 2]]);
        let c6 = c_2n(&a2, 3);
        assert_eq!(c6.get(0, 2), -6);
        assert_eq!(c6.get(3, 1), -6);
        assert_eq!(c6.get(0, 3), 0);
        let b2 = m(&[&[2, -1], &[-2, 2]]);
        assert_eq!(symmetrizer(&c_pm(&b2)).unwrap(), vec![2, 1, 2, 1]);
        assert!(CartanMatrix::new(pm.labels().to_vec(), pm.rows().to_vec()).is_ok());
    }

    #[test]
    fn product_with_point_is_relabeling() {
        let p = product_quiver(&bridge_quiver(1), &ValuedQuiver::point("1")).unwrap();
        assert_eq!(p.vertices(), &["+×1".to_string(), "-×1".to_string()]);
        assert_eq!(p.arrows(), &[(0, 1)]);
        assert_eq!((p.graph().d_edge(0, 1), p.graph().d_edge(1, 0)), (2, 2));
    }

    #[test]
    fn product_bridge_a2() {
        let p = product_quiver(&bridge_quiver(1), &ValuedQuiver::linear_a(2)).unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.arrows().len(), 4);
        let mut vals: Vec<(u32, u32)> =
            p.arrows().iter().map(|&(s, t)| (p.graph().d_edge(s, t), p.graph().d_edge(t, s))).collect();
        vals.sort();
        assert_eq!(vals, vec![(1, 1), (1, 1), (2, 2), (2, 2)]);
        assert!(p.is_acyclic());
    }

    #[test]
    fn product_of_two_a2_is_grid() {
        let a2 = ValuedQuiver::linear_a(2);
        let p = product_quiver(&a2, &a2).unwrap();
        // vertices 1×1, 1×2, 2×1, 2×2
        let mut arrows: Vec<(String, String)> =
            p.arrows().iter().map(|&(s, t)| (p.vertices()[s].clone(), p.vertices()[t].clone())).collect();
        arrows.sort();
        let expect = [("1×1", "1×2"), ("1×1", "2×1"), ("1×2", "2×2"), ("2×1", "2×2")];
        assert_eq!(arrows, expect.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect::<Vec<_>>());
    }

    #[test]
    fn pm_quiver_matches_c_pm() {
        let a1 = ValuedQuiver::point("1");
        let p = pm_quiver(&a1);
        assert_eq!(p.arrows(), &[(0, 1)]);
        assert_eq!(cartan_from_graph(p.graph()).rows(), c_pm(&cartan_from_graph(a1.graph())).rows());
        let a2 = ValuedQuiver::linear_a(2);
        let p = pm_quiver(&a2);
        assert_eq!(p.arrows().len(), 4);
        assert_eq!(cartan_from_graph(p.graph()), c_pm(&cartan_from_graph(a2.graph())));
    }

    #[test]
    fn cycles_detected() {
        let mut e = BTreeMap::new();
        for (i, j) in [(0, 1), (1, 2), (2, 0)] {
            e.insert((i, j), 1);
            e.insert((j, i), 1);
        }
        let g = ValuedGraph::new(vec!["a".into(), "b".into(), "c".into()], vec![1, 1, 1], e).unwrap();
        let arrows = vec![(0, 1), (1, 2), (2, 0)];
        assert!(matches!(ValuedQuiver::new(g.clone(), arrows.clone()), Err(CartanError::OrientedCycle(_))));
        let q = ValuedQuiver::new_unchecked_cycles(g, arrows).unwrap();
        assert!(!q.is_acyclic());
    }

    #[test]
    fn invalid_graphs() {
        let mut e = BTreeMap::new();
        e.insert((0, 1), 1);
        e.insert((1, 0), 2);
        // d_0 * 1 must equal d_1 * 2
        assert!(ValuedGraph::new(vec!["a".into(), "b".into()], vec![1, 1], e.clone()).is_err());
        assert!(ValuedGraph::new(vec!["a".into(), "b".into()], vec![2, 1], e.clone()).is_ok());
        assert!(ValuedGraph::new(vec!["a".into(), "b".into()], vec![4, 2], e).is_err());
        let mut e = BTreeMap::new();
        e.insert((0, 1), 1);
        assert!(ValuedGraph::new(vec!["a".into(), "b".into()], vec![1, 1], e).is_err());
    }

    #[test]
    fn borcherds_examples() {
        let data = vec![
            IndexDatum { id: "1".into(), self_pairing: 2, is_simple: true },
            IndexDatum { id: "2".into(), self_pairing: 2, is_simple: true },
        ];
        let b = borcherds_from_form(&data, &[vec![2, -1], vec![-1, 2]]).unwrap();
        assert_eq!(b.entries, vec![vec![2, -1], vec![-1, 2]]);
        let data = vec![
            IndexDatum { id: "i".into(), self_pairing: 2, is_simple: true },
            IndexDatum { id: "j".into(), self_pairing: -2, is_simple: false },
        ];
        let b = borcherds_from_form(&data, &[vec![2, -1], vec![-1, -2]]).unwrap();
        assert_eq!(b.entries, vec![vec![2, -1], vec![-1, -2]]);
        assert_eq!(b.real, vec![true, false]);
        let data = vec![
            IndexDatum { id: "i".into(), self_pairing: 4, is_simple: true },
            IndexDatum { id: "j".into(), self_pairing: 2, is_simple: true },
        ];
        assert!(matches!(
            borcherds_from_form(&data, &[vec![4, -1], vec![-1, 2]]),
            Err(CartanError::DivisibilityViolation { .. })
        ));
    }

    #[test]
    fn quiver_spec_round_trip_is_byte_exact() {
        let q = pm_quiver(&ValuedQuiver::linear_a(2));
        let text = QuiverSpec::from_quiver(&q).to_json();
        let back = QuiverSpec::from_json(&text).unwrap();
        assert_eq!(back.to_quiver().unwrap(), q);
        assert_eq!(back.to_json(), text);
        assert!(text.find("\"dst_val\"").unwrap() < text.find("\"src\"").unwrap());
    }

    #[test]
    fn parse_inline_matrices() {
        assert_eq!(CartanMatrix::parse("[2]").unwrap().rows(), &[vec![2]]);
        assert_eq!(CartanMatrix::parse("[[2,-1],[-1,2]]").unwrap().size(), 2);
        assert!(CartanMatrix::parse("[[2,-1]").is_err());
    }
}
