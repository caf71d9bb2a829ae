//! Hypergraph models of a sparse matrix and their cut accounting.
//!
//! Three models are built here. The column-net model has one vertex per row
//! (weighted by its nonzero count) and one net per column whose pins are the
//! rows touching that column; partitioning its vertices groups rows so that
//! few columns straddle groups. The row-net model is its transpose. The
//! row-column-net model has one vertex per nonzero and a net for every
//! non-empty row and non-empty column; every vertex has exactly two pins'
//! worth of membership (its row net and its column net), which makes it the
//! finest-grained model and the one used for nonzero splittings.

use std::collections::HashSet;
use std::io::Write;

use crate::error::{Error, Result};
use crate::sparse::TripletMatrix;

/// What a vertex stands for in the originating matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexTag {
    Row(usize),
    Col(usize),
    /// Index into the matrix's canonical entry order.
    Nonzero(usize),
}

/// What a net stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NetTag {
    Row(usize),
    Col(usize),
}

/// Which cutsize definition to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutMetric {
    /// Each cut net contributes its cost once.
    CutNet,
    /// Each cut net contributes its cost times its connectivity (the number
    /// of parts its pins span).
    Connectivity,
}

/// An undirected hypergraph with weighted vertices and costed nets.
/// Pins are stored per net, sorted ascending, without duplicates.
#[derive(Debug, Clone)]
pub struct Hypergraph {
    vertex_weights: Vec<u64>,
    net_costs: Vec<u64>,
    pins: Vec<Vec<usize>>,
    vertex_tags: Vec<VertexTag>,
    net_tags: Vec<NetTag>,
}

impl Hypergraph {
    pub fn new(
        vertex_weights: Vec<u64>,
        net_costs: Vec<u64>,
        pins: Vec<Vec<usize>>,
        vertex_tags: Vec<VertexTag>,
        net_tags: Vec<NetTag>,
    ) -> Result<Self> {
        if net_costs.len() != pins.len() || net_tags.len() != pins.len() {
            return Err(Error::Invalid("net arrays have differing lengths".into()));
        }
        if vertex_tags.len() != vertex_weights.len() {
            return Err(Error::Invalid("vertex arrays have differing lengths".into()));
        }
        let nv = vertex_weights.len();
        for (n, net) in pins.iter().enumerate() {
            for w in net.windows(2) {
                if w[0] >= w[1] {
                    return Err(Error::Invalid(format!(
                        "pins of net {n} not sorted/unique"
                    )));
                }
            }
            if let Some(&last) = net.last() {
                if last >= nv {
                    return Err(Error::Invalid(format!("net {n} pins vertex {last} >= |V|")));
                }
            }
        }
        Ok(Hypergraph {
            vertex_weights,
            net_costs,
            pins,
            vertex_tags,
            net_tags,
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.vertex_weights.len()
    }

    pub fn n_nets(&self) -> usize {
        self.pins.len()
    }

    pub fn n_pins(&self) -> usize {
        self.pins.iter().map(Vec::len).sum()
    }

    pub fn vertex_weight(&self, v: usize) -> u64 {
        self.vertex_weights[v]
    }

    pub fn vertex_weights(&self) -> &[u64] {
        &self.vertex_weights
    }

    pub fn net_cost(&self, n: usize) -> u64 {
        self.net_costs[n]
    }

    pub fn set_net_cost(&mut self, n: usize, cost: u64) {
        self.net_costs[n] = cost;
    }

    pub fn pins(&self, n: usize) -> &[usize] {
        &self.pins[n]
    }

    pub fn vertex_tag(&self, v: usize) -> VertexTag {
        self.vertex_tags[v]
    }

    pub fn net_tag(&self, n: usize) -> NetTag {
        self.net_tags[n]
    }

    /// Incidence lists: for each vertex, the nets it pins (ascending).
    pub fn vertex_nets(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n_vertices()];
        for (n, net) in self.pins.iter().enumerate() {
            for &v in net {
                out[v].push(n);
            }
        }
        out
    }

    /// Plain ASCII dump: a header line `base |V| |N| |pins|` followed by one
    /// line of pin ids per net (0-based).
    pub fn write_text(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "0 {} {} {}", self.n_vertices(), self.n_nets(), self.n_pins())?;
        for net in &self.pins {
            let line: Vec<String> = net.iter().map(usize::to_string).collect();
            writeln!(w, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Number of distinct parts the pins of `net` span under `parts`.
pub fn net_connectivity(h: &Hypergraph, parts: &[usize], net: usize) -> usize {
    let mut seen = HashSet::new();
    for &v in h.pins(net) {
        seen.insert(parts[v]);
    }
    seen.len()
}

/// Cutsize of a partition: nets spanning at least two parts contribute their
/// cost (cut-net metric) or their cost times connectivity (connectivity
/// metric). Nets whose pins sit in a single part contribute nothing.
pub fn cutsize(h: &Hypergraph, parts: &[usize], metric: CutMetric) -> u64 {
    let mut total = 0u64;
    for n in 0..h.n_nets() {
        let lambda = net_connectivity(h, parts, n);
        if lambda >= 2 {
            total += match metric {
                CutMetric::CutNet => h.net_cost(n),
                CutMetric::Connectivity => lambda as u64 * h.net_cost(n),
            };
        }
    }
    total
}

/// Column-net model: vertex `i` is row `i` (weight = its nonzero count), net
/// `j` is column `j` with the rows touching it as pins. Empty columns yield
/// empty nets, kept so net ids equal column ids.
pub fn build_column_net(m: &TripletMatrix) -> Hypergraph {
    let vertex_weights = m.row_nnz().iter().map(|&c| c as u64).collect();
    let mut pins: Vec<Vec<usize>> = vec![Vec::new(); m.n_cols()];
    for &(r, c, _) in m.entries() {
        pins[c].push(r); // canonical entry order appends each column's rows ascending
    }
    Hypergraph {
        vertex_weights,
        net_costs: vec![1; m.n_cols()],
        pins,
        vertex_tags: (0..m.n_rows()).map(VertexTag::Row).collect(),
        net_tags: (0..m.n_cols()).map(NetTag::Col).collect(),
    }
}

/// Row-net model: the column-net model of the transpose. Vertex `j` is
/// column `j`, net `i` is row `i`.
pub fn build_row_net(m: &TripletMatrix) -> Hypergraph {
    let vertex_weights = m.col_nnz().iter().map(|&c| c as u64).collect();
    let mut pins: Vec<Vec<usize>> = vec![Vec::new(); m.n_rows()];
    for &(r, c, _) in m.entries() {
        pins[r].push(c);
    }
    // canonical order is row-major with ascending columns inside a row
    Hypergraph {
        vertex_weights,
        net_costs: vec![1; m.n_rows()],
        pins,
        vertex_tags: (0..m.n_cols()).map(VertexTag::Col).collect(),
        net_tags: (0..m.n_rows()).map(NetTag::Row).collect(),
    }
}

/// Row-column-net model: one unit-weight vertex per nonzero; one net per
/// non-empty row and per non-empty column. Each vertex is pinned by exactly
/// its row net and its column net. Net costs default to 1 and can be
/// reweighted afterwards (row nets are costed by row length for the
/// border-minimizing variant).
pub fn build_row_column_net(m: &TripletMatrix) -> Hypergraph {
    let row_counts = m.row_nnz();
    let col_counts = m.col_nnz();
    let mut net_of_row = vec![usize::MAX; m.n_rows()];
    let mut net_of_col = vec![usize::MAX; m.n_cols()];
    let mut pins: Vec<Vec<usize>> = Vec::new();
    let mut net_tags = Vec::new();
    for (i, &c) in row_counts.iter().enumerate() {
        if c > 0 {
            net_of_row[i] = pins.len();
            pins.push(Vec::with_capacity(c));
            net_tags.push(NetTag::Row(i));
        }
    }
    for (j, &c) in col_counts.iter().enumerate() {
        if c > 0 {
            net_of_col[j] = pins.len();
            pins.push(Vec::with_capacity(c));
            net_tags.push(NetTag::Col(j));
        }
    }
    for (id, &(r, c, _)) in m.entries().iter().enumerate() {
        pins[net_of_row[r]].push(id);
        pins[net_of_col[c]].push(id);
    }
    // vertex ids ascend in insertion order for row nets; column nets collect
    // them in row-major order, which is also ascending
    Hypergraph {
        vertex_weights: vec![1; m.nnz()],
        net_costs: vec![1; pins.len()],
        pins,
        vertex_tags: (0..m.nnz()).map(VertexTag::Nonzero).collect(),
        net_tags,
    }
}

/// Bipartite graph on row vertices `0..n_rows` and column vertices
/// `n_rows..n_rows+n_cols`, one edge per nonzero. Used by the BFS and
/// Cuthill-McKee baseline orderings.
#[derive(Debug, Clone)]
pub struct BipartiteGraph {
    n_rows: usize,
    n_cols: usize,
    row_adj: Vec<Vec<usize>>,
    col_adj: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn n_vertices(&self) -> usize {
        self.n_rows + self.n_cols
    }

    /// Columns adjacent to row `i`, ascending.
    pub fn row_neighbors(&self, i: usize) -> &[usize] {
        &self.row_adj[i]
    }

    /// Rows adjacent to column `j`, ascending.
    pub fn col_neighbors(&self, j: usize) -> &[usize] {
        &self.col_adj[j]
    }

    /// Degree of a combined vertex id (rows first, then columns).
    pub fn degree(&self, v: usize) -> usize {
        if v < self.n_rows {
            self.row_adj[v].len()
        } else {
            self.col_adj[v - self.n_rows].len()
        }
    }

    /// Neighbors of a combined vertex id, as combined ids, ascending.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        if v < self.n_rows {
            self.row_adj[v].iter().map(|&j| self.n_rows + j).collect()
        } else {
            self.col_adj[v - self.n_rows].clone()
        }
    }
}

pub fn build_bipartite(m: &TripletMatrix) -> BipartiteGraph {
    let mut row_adj: Vec<Vec<usize>> = vec![Vec::new(); m.n_rows()];
    let mut col_adj: Vec<Vec<usize>> = vec![Vec::new(); m.n_cols()];
    for &(r, c, _) in m.entries() {
        row_adj[r].push(c);
        col_adj[c].push(r);
    }
    BipartiteGraph {
        n_rows: m.n_rows(),
        n_cols: m.n_cols(),
        row_adj,
        col_adj,
    }
}
