//! Stage four of weight reduction: replace each Z-stabiliser by one check
//! per supported qubit, tied together through a graph on the support whose
//! edges come from overlapping X-stabilisers and whose independent cycles
//! become new X-checks.

use crate::css::CssCode;
use crate::gf2::{BitMatrix, BitVector, Echelon};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Edge of a local graph: one even-overlap pair of X-stabiliser `x_stab`
/// on the support of the Z-stabiliser, with endpoints a < b.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalEdge {
    pub x_stab: usize,
    pub a: usize,
    pub b: usize,
}

impl LocalEdge {
    pub fn touches(&self, q: usize) -> bool {
        self.a == q || self.b == q
    }

    pub fn other(&self, q: usize) -> usize {
        if self.a == q {
            self.b
        } else {
            self.a
        }
    }
}

/// Simple closed walk: `edges[t]` joins `vertices[t]` to
/// `vertices[(t + 1) % len]`, with vertices given as global qubit ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleWalk {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl CycleWalk {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// The graph attached to one Z-stabiliser: vertices are its support,
/// edges pair up each overlapping X-stabiliser, and `cycles` is a
/// fundamental cycle basis of a spanning forest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalGraph {
    pub z_stab: usize,
    pub vertices: Vec<usize>,
    pub edges: Vec<LocalEdge>,
    pub cycles: Vec<CycleWalk>,
    pub components: usize,
}

impl LocalGraph {
    pub fn degree(&self, q: usize) -> usize {
        self.edges.iter().filter(|e| e.touches(q)).count()
    }
}

/// Pair the even overlap of every X-stabiliser with Q_i = supp(z_stab) in
/// ascending qubit order, then extract a fundamental cycle basis per
/// connected component via breadth-first search.
pub fn build_local_graph(code: &CssCode, z_stab: usize) -> Result<LocalGraph> {
    let vertices = code.h_z().row_support(z_stab);
    let in_support: std::collections::HashSet<usize> = vertices.iter().copied().collect();
    let mut edges = Vec::new();
    for s in 0..code.num_x_stabs() {
        let overlap: Vec<usize> = code
            .h_x()
            .row_support(s)
            .into_iter()
            .filter(|q| in_support.contains(q))
            .collect();
        if !overlap.len().is_multiple_of(2) {
            return Err(Error::Commutation {
                violations: 1,
                x_row: s,
                z_row: z_stab,
            });
        }
        for pair in overlap.chunks(2) {
            edges.push(LocalEdge {
                x_stab: s,
                a: pair[0],
                b: pair[1],
            });
        }
    }

    let (cycles, components) = fundamental_cycles(&vertices, &edges);
    debug_assert_eq!(
        cycles.len() + vertices.len(),
        edges.len() + components,
        "cycle rank must equal E - V + components"
    );
    Ok(LocalGraph {
        z_stab,
        vertices,
        edges,
        cycles,
        components,
    })
}

/// BFS spanning forest; each non-tree edge closes one fundamental cycle
/// built from the two paths to the deepest common ancestor.
fn fundamental_cycles(vertices: &[usize], edges: &[LocalEdge]) -> (Vec<CycleWalk>, usize) {
    let index: std::collections::HashMap<usize, usize> =
        vertices.iter().enumerate().map(|(i, &q)| (q, i)).collect();
    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); vertices.len()];
    for (e, edge) in edges.iter().enumerate() {
        let (a, b) = (index[&edge.a], index[&edge.b]);
        adjacency[a].push((b, e));
        adjacency[b].push((a, e));
    }

    let mut parent: Vec<Option<(usize, usize)>> = vec![None; vertices.len()];
    let mut depth = vec![0usize; vertices.len()];
    let mut visited = vec![false; vertices.len()];
    let mut tree_edge = vec![false; edges.len()];
    let mut components = 0;
    for root in 0..vertices.len() {
        if visited[root] {
            continue;
        }
        components += 1;
        visited[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &(u, e) in &adjacency[v] {
                if !visited[u] {
                    visited[u] = true;
                    parent[u] = Some((v, e));
                    depth[u] = depth[v] + 1;
                    tree_edge[e] = true;
                    queue.push_back(u);
                }
            }
        }
    }

    let mut cycles = Vec::new();
    for (e, edge) in edges.iter().enumerate() {
        if tree_edge[e] {
            continue;
        }
        let (mut u, mut v) = (index[&edge.a], index[&edge.b]);
        if u == v {
            continue; // self-loops cannot arise from pairing distinct qubits
        }
        // Walk from a up to the meeting point, then down to b, then close
        // with the non-tree edge.
        let mut up: Vec<(usize, usize)> = Vec::new(); // (vertex, edge up from it)
        let mut down: Vec<(usize, usize)> = Vec::new(); // (vertex, edge down to it)
        while depth[u] > depth[v] {
            let (p, pe) = parent[u].unwrap();
            up.push((u, pe));
            u = p;
        }
        while depth[v] > depth[u] {
            let (p, pe) = parent[v].unwrap();
            down.push((v, pe));
            v = p;
        }
        while u != v {
            let (pu, peu) = parent[u].unwrap();
            up.push((u, peu));
            u = pu;
            let (pv, pev) = parent[v].unwrap();
            down.push((v, pev));
            v = pv;
        }
        let mut walk_vertices = Vec::new();
        let mut walk_edges = Vec::new();
        for &(x, pe) in &up {
            walk_vertices.push(vertices[x]);
            walk_edges.push(pe);
        }
        walk_vertices.push(vertices[u]); // the meeting point
        for &(x, pe) in down.iter().rev() {
            walk_edges.push(pe);
            walk_vertices.push(vertices[x]);
        }
        walk_edges.push(e);
        debug_assert_eq!(walk_vertices.len(), walk_edges.len());
        cycles.push(CycleWalk {
            vertices: walk_vertices,
            edges: walk_edges,
        });
    }
    (cycles, components)
}

/// A code is reasonable when every X-kernel vector supported inside a
/// single Z-stabiliser is itself a Z-stabiliser combination. Coning an
/// unreasonable code can change the logical dimension.
pub fn find_unreasonable(code: &CssCode) -> Result<Option<usize>> {
    code.ensure_valid()?;
    let mut z_space = Echelon::new(code.num_qubits());
    for r in 0..code.num_z_stabs() {
        z_space.insert(code.h_z().row(r));
    }
    for i in 0..code.num_z_stabs() {
        let support = code.h_z().row_support(i);
        if support.is_empty() {
            continue;
        }
        let restricted = code.h_x().select_columns(&support);
        let (_, kernel) = restricted.rank_kernel();
        for local in &kernel {
            let mut v = BitVector::zeros(code.num_qubits());
            for (pos, &q) in support.iter().enumerate() {
                if local.get(pos) {
                    v.set(q, true);
                }
            }
            if !z_space.contains(&v) {
                return Ok(Some(i));
            }
        }
    }
    Ok(None)
}

pub fn is_reasonable(code: &CssCode) -> Result<bool> {
    Ok(find_unreasonable(code)?.is_none())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeMeta {
    pub n_orig: usize,
    pub n_x_orig: usize,
    pub n_z_orig: usize,
    pub locals: Vec<LocalGraph>,
    /// First edge qubit of each block, plus the total as a sentinel.
    pub edge_offsets: Vec<usize>,
    /// (block, cycle) of each disc X-row, in row order after the originals.
    pub discs: Vec<(usize, usize)>,
    /// (block, global qubit) of each Z-row.
    pub z_rows: Vec<(usize, usize)>,
}

impl ConeMeta {
    pub fn edge_qubit(&self, block: usize, edge: usize) -> usize {
        debug_assert!(edge < self.locals[block].edges.len());
        self.edge_offsets[block] + edge
    }

    pub fn num_qubits(&self) -> usize {
        *self.edge_offsets.last().unwrap()
    }
}

/// Cone transform; errors if the code is not reasonable.
pub fn cone(code: &CssCode) -> Result<(CssCode, ConeMeta)> {
    if let Some(stab) = find_unreasonable(code)? {
        return Err(Error::Unreasonable { stab });
    }
    cone_unchecked(code)
}

/// Cone transform without the reasonableness gate; the logical dimension
/// may change on unreasonable inputs.
pub fn cone_unchecked(code: &CssCode) -> Result<(CssCode, ConeMeta)> {
    code.ensure_valid()?;
    let n = code.num_qubits();
    let mut locals = Vec::with_capacity(code.num_z_stabs());
    let mut edge_offsets = Vec::with_capacity(code.num_z_stabs() + 1);
    let mut next = n;
    for i in 0..code.num_z_stabs() {
        let local = build_local_graph(code, i)?;
        edge_offsets.push(next);
        next += local.edges.len();
        locals.push(local);
    }
    edge_offsets.push(next);
    let nn = next;

    let mut discs = Vec::new();
    let mut x_rows: Vec<BitVector> = Vec::new();
    for s in 0..code.num_x_stabs() {
        let mut row = BitVector::zeros(nn);
        for q in code.h_x().row_support(s) {
            row.set(q, true);
        }
        for (i, local) in locals.iter().enumerate() {
            for (e, edge) in local.edges.iter().enumerate() {
                if edge.x_stab == s {
                    row.set(edge_offsets[i] + e, true);
                }
            }
        }
        x_rows.push(row);
    }
    for (i, local) in locals.iter().enumerate() {
        for (c, cycle) in local.cycles.iter().enumerate() {
            let mut row = BitVector::zeros(nn);
            for &e in &cycle.edges {
                row.set(edge_offsets[i] + e, true);
            }
            discs.push((i, c));
            x_rows.push(row);
        }
    }

    let mut z_rows_meta = Vec::new();
    let mut z_rows: Vec<BitVector> = Vec::new();
    for (i, local) in locals.iter().enumerate() {
        for &q in &local.vertices {
            let mut row = BitVector::zeros(nn);
            row.set(q, true);
            for (e, edge) in local.edges.iter().enumerate() {
                if edge.touches(q) {
                    row.set(edge_offsets[i] + e, true);
                }
            }
            z_rows_meta.push((i, q));
            z_rows.push(row);
        }
    }

    let meta = ConeMeta {
        n_orig: n,
        n_x_orig: code.num_x_stabs(),
        n_z_orig: code.num_z_stabs(),
        locals,
        edge_offsets,
        discs,
        z_rows: z_rows_meta,
    };
    let coned = CssCode::new(
        BitMatrix::from_rows(nn, &x_rows),
        BitMatrix::from_rows(nn, &z_rows),
    )?;
    coned.ensure_valid()?;
    Ok((coned, meta))
}
