//! Multilevel hypergraph bipartitioning and fit-driven recursive bisection.
//!
//! [`bipartition`] splits a hypergraph's vertices in two, minimizing cut cost
//! under a balance cap. [`recursive_bisect`] applies it recursively until
//! every part's storage footprint (measured by a caller-supplied
//! [`FitModel`]) drops under the byte budget, handling cut nets between
//! levels by splitting, removal, or row-net removal with vertices.

mod fm;
mod multilevel;
mod work;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{cutsize, CutMetric, Hypergraph, NetTag};
use multilevel::bipartition_work;
use work::{derive_children, WorkHg};

/// What happens to cut nets when the two sides become separate subproblems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NetHandling {
    /// Keep each side's fragment of a cut net (connectivity-style counting:
    /// later cuts of a fragment charge the net again).
    Split,
    /// Drop cut nets entirely (cut-net-style counting).
    Remove,
    /// Drop cut *row* nets together with all their vertices — those become
    /// border rows — then split cut column nets as usual.
    EnhancedRowRemove,
}

#[derive(Debug, Clone, Serialize)]
pub struct PartitionConfig {
    /// Allowed imbalance: each side may weigh up to `W_avg * (1 + epsilon)`.
    pub epsilon: f64,
    /// Byte budget a part must fit under (recursive bisection leaf test).
    pub w_max: u64,
    pub seed: u64,
    /// Upper bound on FM passes per refinement call.
    pub refinement_passes: usize,
    /// Stop coarsening once this few vertices remain (matching also stalls
    /// on its own once merges would create overweight vertices). The default
    /// of 2 coarsens as deep as the weight limit allows, which makes the
    /// initial-assignment step trivial and leaves quality to per-level
    /// refinement.
    pub coarsen_until: usize,
    pub net_handling: NetHandling,
}

impl Default for PartitionConfig {
    fn default() -> Self {
        PartitionConfig {
            epsilon: 0.10,
            w_max: 64 * 1024,
            seed: 1,
            refinement_passes: 4,
            coarsen_until: 2,
            net_handling: NetHandling::Split,
        }
    }
}

impl PartitionConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.epsilon.is_finite() || self.epsilon < 0.0 {
            return Err(Error::Invalid(format!(
                "epsilon must be a finite non-negative number, got {}",
                self.epsilon
            )));
        }
        if self.w_max == 0 {
            return Err(Error::Invalid("w_max must be positive".into()));
        }
        if self.refinement_passes == 0 {
            return Err(Error::Invalid("refinement_passes must be positive".into()));
        }
        Ok(())
    }
}

/// Outcome of one 2-way partition.
#[derive(Debug, Clone)]
pub struct Bipartition {
    /// Side (0 or 1) of every vertex.
    pub parts: Vec<u8>,
    pub part_weights: [u64; 2],
    /// Connectivity cutsize of the split (each cut net charges cost times
    /// the number of sides it spans, i.e. twice its cost here).
    pub cutsize: u64,
    /// Nets with pins on both sides, ascending.
    pub cut_nets: Vec<usize>,
    /// Both sides within the balance cap.
    pub feasible: bool,
    /// A single vertex outweighed the cap, which was raised to fit it; the
    /// balance constraint could only be honored best-effort.
    pub best_effort: bool,
    /// Fewer than two vertices: nothing to split.
    pub degenerate: bool,
}

/// 2-way partition of `h` balancing the hypergraph's own vertex weights.
pub fn bipartition(h: &Hypergraph, cfg: &PartitionConfig) -> Result<Bipartition> {
    cfg.validate()?;
    if h.n_vertices() == 0 {
        return Err(Error::Invalid("cannot bipartition an empty hypergraph".into()));
    }
    let w = WorkHg::from_hypergraph(h, h.vertex_weights().to_vec());
    let out = bipartition_work(&w, cfg, cfg.seed);
    let parts_usize: Vec<usize> = out.parts.iter().map(|&p| p as usize).collect();
    let mut cut_nets = Vec::new();
    for n in 0..h.n_nets() {
        let pins = h.pins(n);
        if let Some(&first) = pins.first() {
            if pins.iter().any(|&v| parts_usize[v] != parts_usize[first]) {
                cut_nets.push(n);
            }
        }
    }
    Ok(Bipartition {
        cutsize: cutsize(h, &parts_usize, CutMetric::Connectivity),
        parts: out.parts,
        part_weights: out.weights,
        cut_nets,
        feasible: out.feasible,
        best_effort: out.best_effort,
        degenerate: h.n_vertices() < 2,
    })
}

/// Storage model handed to [`recursive_bisect`]: the exact byte footprint of
/// the sub-matrix a candidate part induces, used as the leaf test.
pub trait FitModel {
    /// Exact storage bytes of the part induced by these original vertex ids.
    fn part_bytes(&self, verts: &[usize]) -> u64;
}

/// Record of one internal bisection step.
#[derive(Debug, Clone)]
pub struct RbSplit {
    /// Summed cost of the nets this step cut (each counted once).
    pub cut_cost: u64,
    pub part_weights: [u64; 2],
    pub feasible: bool,
}

/// Node of the recursive bisection tree. Vertices are original ids.
#[derive(Debug)]
pub struct RbNode {
    pub vertices: Vec<usize>,
    /// Exact storage footprint of this vertex set.
    pub storage_bytes: u64,
    /// Present on internal nodes.
    pub split: Option<RbSplit>,
    /// Present on leaves: final part id in left-to-right leaf order.
    pub part_id: Option<usize>,
    /// Leaf that still exceeds the budget (single vertex) or a bisection
    /// that failed to produce two sides.
    pub degenerate: bool,
    pub children: Option<Box<[RbNode; 2]>>,
}

impl RbNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_none()
    }
}

/// A cut row net removed during [`NetHandling::EnhancedRowRemove`], with the
/// original vertex ids of its pins.
#[derive(Debug, Clone)]
pub struct RemovedRowNet {
    pub net: usize,
    pub vertices: Vec<usize>,
}

/// Full recursive bisection result.
#[derive(Debug)]
pub struct RbTree {
    pub root: RbNode,
    /// Number of leaves (final parts).
    pub k: usize,
    /// Row nets removed along the way (empty unless enhanced handling).
    pub removed_row_nets: Vec<RemovedRowNet>,
    /// Distinct original net ids that were cut at some step, ascending.
    pub cut_net_origs: Vec<usize>,
    n_vertices: usize,
}

impl RbTree {
    /// Leaves in left-to-right order (so `leaves()[p].part_id == Some(p)`).
    pub fn leaves(&self) -> Vec<&RbNode> {
        let mut out = Vec::new();
        fn walk<'a>(node: &'a RbNode, out: &mut Vec<&'a RbNode>) {
            match &node.children {
                None => out.push(node),
                Some(kids) => {
                    walk(&kids[0], out);
                    walk(&kids[1], out);
                }
            }
        }
        walk(&self.root, &mut out);
        out
    }

    /// Final part of every original vertex; `None` for vertices removed with
    /// a cut row net.
    pub fn vertex_parts(&self) -> Vec<Option<usize>> {
        let mut parts = vec![None; self.n_vertices];
        for leaf in self.leaves() {
            let p = leaf.part_id.expect("leaves carry part ids");
            for &v in &leaf.vertices {
                parts[v] = Some(p);
            }
        }
        parts
    }

    /// True when some leaf exceeds the budget or some bisection degenerated.
    pub fn any_degenerate(&self) -> bool {
        fn walk(node: &RbNode) -> bool {
            node.degenerate
                || node
                    .children
                    .as_ref()
                    .is_some_and(|kids| walk(&kids[0]) || walk(&kids[1]))
        }
        walk(&self.root)
    }
}

fn mix_seed(seed: u64, salt: u64) -> u64 {
    // splitmix64 step keeps per-node streams decorrelated but reproducible
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Recursively bipartitions `h` until every leaf's exact footprint fits
/// `cfg.w_max` (or the leaf is a single vertex). Bisections balance the
/// hypergraph's own vertex weights; only the leaf test looks at bytes, so
/// structurally identical hypergraphs yield identical trees regardless of
/// which matrix entity the vertices stand for.
pub fn recursive_bisect(h: &Hypergraph, cfg: &PartitionConfig, fit: &dyn FitModel) -> Result<RbTree> {
    cfg.validate()?;
    let root_work = WorkHg::from_hypergraph(h, h.vertex_weights().to_vec());
    let is_row_net = |n: usize| matches!(h.net_tag(n), NetTag::Row(_));

    struct State<'a> {
        cfg: &'a PartitionConfig,
        fit: &'a dyn FitModel,
        is_row_net: &'a dyn Fn(usize) -> bool,
        next_leaf: usize,
        node_counter: u64,
        removed: Vec<RemovedRowNet>,
        cut_origs: Vec<usize>,
    }

    fn rec(work: WorkHg, st: &mut State) -> RbNode {
        let vertices = work.vert_orig.clone();
        let bytes = st.fit.part_bytes(&vertices);
        st.node_counter += 1;
        let make_leaf = |st: &mut State, degenerate: bool| {
            let id = st.next_leaf;
            st.next_leaf += 1;
            RbNode {
                vertices: vertices.clone(),
                storage_bytes: bytes,
                split: None,
                part_id: Some(id),
                degenerate,
                children: None,
            }
        };
        if bytes <= st.cfg.w_max {
            return make_leaf(st, false);
        }
        if work.n_vertices() <= 1 {
            return make_leaf(st, true);
        }
        let seed = mix_seed(st.cfg.seed, st.node_counter);
        let out = bipartition_work(&work, st.cfg, seed);
        let counts = out.parts.iter().fold([0usize; 2], |mut acc, &p| {
            acc[p as usize] += 1;
            acc
        });
        if counts[0] == 0 || counts[1] == 0 {
            return make_leaf(st, true);
        }
        let children = derive_children(&work, &out.parts, st.cfg.net_handling, st.is_row_net);
        st.cut_origs.extend_from_slice(&children.cut_origs);
        for (net, verts) in children.removed {
            st.removed.push(RemovedRowNet {
                net,
                vertices: verts,
            });
        }
        let [left_work, right_work] = children.side;
        let left = rec(left_work, st);
        let right = rec(right_work, st);
        RbNode {
            vertices,
            storage_bytes: bytes,
            split: Some(RbSplit {
                cut_cost: children.cut_cost,
                part_weights: out.weights,
                feasible: out.feasible,
            }),
            part_id: None,
            degenerate: false,
            children: Some(Box::new([left, right])),
        }
    }

    let mut st = State {
        cfg,
        fit,
        is_row_net: &is_row_net,
        next_leaf: 0,
        node_counter: 0,
        removed: Vec::new(),
        cut_origs: Vec::new(),
    };
    let root = rec(root_work, &mut st);
    st.cut_origs.sort_unstable();
    st.cut_origs.dedup();
    Ok(RbTree {
        root,
        k: st.next_leaf,
        removed_row_nets: st.removed,
        cut_net_origs: st.cut_origs,
        n_vertices: h.n_vertices(),
    })
}
