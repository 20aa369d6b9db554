//! Cell complexes glued from standard quadrilaterals, and ideal domains.

use serde::{Deserialize, Serialize};

use crate::arcs::HArc;
use crate::error::{Error, Result};
use crate::hyp2::{BoundaryPoint, IsometryMap};
use crate::numerics::Quadrature;
use crate::regions::{quad_area, QuadParams, STD_SIDE_VERTICES};

pub type VertexId = usize;
pub type CellId = usize;
pub type EdgeId = usize;

/// Boundary type of a side with respect to the region it bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SideKind {
    A,
    B,
}

impl SideKind {
    pub fn of_std_side(k: usize) -> SideKind {
        if k % 2 == 0 {
            SideKind::A
        } else {
            SideKind::B
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub params: QuadParams,
    /// Standard chart to ambient coordinates.
    pub chart: IsometryMap,
    /// Ambient vertex ids of `P1..P4`.
    pub vertices: [VertexId; 4],
    /// Edge ids of the sides `A1, B1, A2, B2`.
    pub edges: [EdgeId; 4],
    pub area: f64,
}

impl Cell {
    /// Side index `k` traversed with this cell on its left, in ambient vertex ids.
    pub fn oriented_side(&self, k: usize) -> (VertexId, VertexId) {
        let (s, e) = STD_SIDE_VERTICES[k];
        let (s, e) = (self.vertices[s], self.vertices[e]);
        if self.chart.reflects() {
            (e, s)
        } else {
            (s, e)
        }
    }

    /// Ambient image of standard side `k`, traversed with this cell on its left.
    pub fn ambient_side(&self, k: usize) -> HArc {
        let arc = self.chart.apply(&self.params.sides()[k]);
        if self.chart.reflects() {
            arc.reversed()
        } else {
            arc
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub ends: [VertexId; 2],
    /// Incident `(cell, standard side index)` pairs; at most two.
    pub cells: Vec<(CellId, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub name: String,
    pub cells: Vec<CellId>,
}

/// Quadrilateral cells glued along shared sides, with a partition of the
/// cells into named blocks used for polygon enumeration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellComplex {
    h: f64,
    vertices: Vec<BoundaryPoint>,
    cells: Vec<Cell>,
    edges: Vec<Edge>,
    blocks: Vec<Block>,
}

/// Cell to be glued to an existing boundary edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Attachment {
    pub params: QuadParams,
    pub chart: IsometryMap,
    pub host_edge: EdgeId,
    /// Standard side of the new cell that is glued to `host_edge`.
    pub matched_side: usize,
}

impl CellComplex {
    pub fn single(params: QuadParams, chart: IsometryMap, quad: &Quadrature) -> Result<Self> {
        let vertices = params.vertices().map(|v| chart.apply_boundary(v)).to_vec();
        let area = quad_area(&params, quad)?;
        let edges = STD_SIDE_VERTICES
            .iter()
            .enumerate()
            .map(|(k, &(s, e))| Edge {
                ends: [s, e],
                cells: vec![(0, k)],
            })
            .collect();
        Ok(Self {
            h: params.h,
            vertices,
            cells: vec![Cell {
                params,
                chart,
                vertices: [0, 1, 2, 3],
                edges: [0, 1, 2, 3],
                area,
            }],
            edges,
            blocks: vec![Block {
                name: "c0".into(),
                cells: vec![0],
            }],
        })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn vertices(&self) -> &[BoundaryPoint] {
        &self.vertices
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn is_boundary_edge(&self, e: EdgeId) -> bool {
        self.edges[e].cells.len() == 1
    }

    /// Boundary kind of a boundary edge with respect to the complex.
    pub fn boundary_kind(&self, e: EdgeId) -> Option<SideKind> {
        let edge = &self.edges[e];
        (edge.cells.len() == 1).then(|| SideKind::of_std_side(edge.cells[0].1))
    }

    /// Ambient arc of an edge, traversed with its first incident cell on the left.
    pub fn edge_arc(&self, e: EdgeId) -> HArc {
        let (c, k) = self.edges[e].cells[0];
        self.cells[c].ambient_side(k)
    }

    /// One block per cell.
    pub fn with_atomic_blocks(mut self) -> Self {
        self.blocks = (0..self.cells.len())
            .map(|c| Block {
                name: format!("c{c}"),
                cells: vec![c],
            })
            .collect();
        self
    }

    pub fn with_blocks(mut self, blocks: Vec<Block>) -> Result<Self> {
        let mut seen = vec![false; self.cells.len()];
        for b in &blocks {
            if b.cells.is_empty() {
                return Err(Error::Complex(format!("block {} is empty", b.name)));
            }
            for &c in &b.cells {
                if c >= seen.len() || seen[c] {
                    return Err(Error::Complex(format!("cell {c} is not partitioned exactly once")));
                }
                seen[c] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Complex("blocks do not cover every cell".into()));
        }
        self.blocks = blocks;
        Ok(self)
    }

    /// Glues a new cell along a boundary edge; returns the new cell id and
    /// the ids of its vertices `P1..P4`.
    pub fn attach(&mut self, att: &Attachment, quad: &Quadrature) -> Result<CellId> {
        if att.host_edge >= self.edges.len() || !self.is_boundary_edge(att.host_edge) {
            return Err(Error::Complex(format!("edge {} is not a boundary edge", att.host_edge)));
        }
        let (hc, hk) = self.edges[att.host_edge].cells[0];
        if SideKind::of_std_side(hk) == SideKind::of_std_side(att.matched_side) {
            return Err(Error::Complex(
                "glued sides must have opposite types in the two cells".into(),
            ));
        }
        let (hs, he) = STD_SIDE_VERTICES[hk];
        let host_cell = &self.cells[hc];
        let (hu, hv) = (host_cell.vertices[hs], host_cell.vertices[he]);
        let std_vertices = att.params.vertices();
        let (ms, me) = STD_SIDE_VERTICES[att.matched_side];
        let img_s = att.chart.apply_boundary(std_vertices[ms]);
        let tol = 1e-9;
        let (vs, ve) = if img_s.approx_eq(&self.vertices[hu], tol) {
            (hu, hv)
        } else if img_s.approx_eq(&self.vertices[hv], tol) {
            (hv, hu)
        } else {
            return Err(Error::Complex("attached cell does not share the host edge endpoints".into()));
        };
        let img_e = att.chart.apply_boundary(std_vertices[me]);
        if !img_e.approx_eq(&self.vertices[ve], tol) {
            return Err(Error::Complex("attached cell does not share the host edge endpoints".into()));
        }
        let cid = self.cells.len();
        let mut vids = [usize::MAX; 4];
        vids[ms] = vs;
        vids[me] = ve;
        for (i, v) in vids.iter_mut().enumerate() {
            if *v == usize::MAX {
                *v = self.vertices.len();
                self.vertices.push(att.chart.apply_boundary(std_vertices[i]));
            }
        }
        let mut eids = [usize::MAX; 4];
        for (k, &(s, e)) in STD_SIDE_VERTICES.iter().enumerate() {
            if k == att.matched_side {
                eids[k] = att.host_edge;
                self.edges[att.host_edge].cells.push((cid, k));
            } else {
                eids[k] = self.edges.len();
                self.edges.push(Edge {
                    ends: [vids[s], vids[e]],
                    cells: vec![(cid, k)],
                });
            }
        }
        let area = quad_area(&att.params, quad)?;
        self.cells.push(Cell {
            params: att.params,
            chart: att.chart,
            vertices: vids,
            edges: eids,
            area,
        });
        self.blocks.push(Block {
            name: format!("c{cid}"),
            cells: vec![cid],
        });
        Ok(cid)
    }

    /// The complex moved by an isometry.
    pub fn transformed(&self, g: &IsometryMap) -> CellComplex {
        let mut out = self.clone();
        for v in &mut out.vertices {
            *v = g.apply_boundary(*v);
        }
        for c in &mut out.cells {
            c.chart = g.compose(&c.chart);
        }
        out
    }

    /// Cells sharing a vertex with each other, as adjacency lists over blocks.
    pub fn block_adjacency(&self) -> Vec<Vec<usize>> {
        let mut block_of = vec![0; self.cells.len()];
        for (b, blk) in self.blocks.iter().enumerate() {
            for &c in &blk.cells {
                block_of[c] = b;
            }
        }
        let mut at_vertex: Vec<Vec<usize>> = vec![Vec::new(); self.vertices.len()];
        for (c, cell) in self.cells.iter().enumerate() {
            for &v in &cell.vertices {
                at_vertex[v].push(block_of[c]);
            }
        }
        let n = self.blocks.len();
        let mut adj = vec![Vec::new(); n];
        for list in &at_vertex {
            for &a in list {
                for &b in list {
                    if a != b && !adj[a].contains(&b) {
                        adj[a].push(b);
                    }
                }
            }
        }
        for l in &mut adj {
            l.sort_unstable();
        }
        adj
    }
}

/// An oriented boundary side of an ideal domain (interior on the left).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundarySide {
    pub edge: EdgeId,
    pub from: VertexId,
    pub to: VertexId,
    pub kind: SideKind,
}

/// A cell complex whose boundary is a single cycle of alternating A/B sides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdealDomain {
    pub complex: CellComplex,
    pub cycle: Vec<BoundarySide>,
}

impl IdealDomain {
    pub fn new(complex: CellComplex) -> Result<Self> {
        let mut sides = Vec::new();
        for (e, edge) in complex.edges.iter().enumerate() {
            if edge.cells.len() == 1 {
                let (c, k) = edge.cells[0];
                let (from, to) = complex.cells[c].oriented_side(k);
                sides.push(BoundarySide {
                    edge: e,
                    from,
                    to,
                    kind: SideKind::of_std_side(k),
                });
            }
        }
        if sides.len() < 2 {
            return Err(Error::Complex("domain boundary has fewer than two sides".into()));
        }
        let mut next = vec![usize::MAX; complex.vertices.len()];
        for (i, s) in sides.iter().enumerate() {
            if next[s.from] != usize::MAX {
                return Err(Error::Complex(format!(
                    "vertex {} starts two boundary sides; boundary is not a simple cycle",
                    s.from
                )));
            }
            next[s.from] = i;
        }
        let start = (0..sides.len())
            .min_by(|&i, &j| {
                let (vi, vj) = (sides[i].from, sides[j].from);
                complex.vertices[vi]
                    .lex_cmp(&complex.vertices[vj])
                    .then(vi.cmp(&vj))
            })
            .expect("nonempty");
        let mut cycle = Vec::with_capacity(sides.len());
        let mut i = start;
        loop {
            cycle.push(sides[i]);
            let j = next[sides[i].to];
            if j == usize::MAX {
                return Err(Error::Complex("boundary is not closed".into()));
            }
            i = j;
            if i == start {
                break;
            }
            if cycle.len() > sides.len() {
                return Err(Error::Complex("boundary does not close up".into()));
            }
        }
        if cycle.len() != sides.len() {
            return Err(Error::Complex("boundary consists of several cycles".into()));
        }
        for w in 0..cycle.len() {
            let nxt = cycle[(w + 1) % cycle.len()];
            if cycle[w].kind == nxt.kind {
                return Err(Error::Complex(format!(
                    "consecutive boundary sides {} and {} have the same type",
                    cycle[w].edge, nxt.edge
                )));
            }
        }
        Ok(Self { complex, cycle })
    }

    pub fn h(&self) -> f64 {
        self.complex.h()
    }

    pub fn side_count(&self) -> usize {
        self.cycle.len()
    }

    /// Consecutive `(A, B)` pairs sharing a vertex, starting from the A side
    /// whose initial vertex is lowest in lexicographic order.
    pub fn side_pairs(&self) -> Vec<(BoundarySide, BoundarySide)> {
        let n = self.cycle.len();
        let first_a = (0..n)
            .filter(|&i| self.cycle[i].kind == SideKind::A)
            .min_by(|&i, &j| {
                let (vi, vj) = (self.cycle[i].from, self.cycle[j].from);
                self.complex.vertices[vi]
                    .lex_cmp(&self.complex.vertices[vj])
                    .then(vi.cmp(&vj))
            })
            .expect("alternating boundary has A sides");
        (0..n / 2)
            .map(|p| {
                let i = (first_a + 2 * p) % n;
                (self.cycle[i], self.cycle[(i + 1) % n])
            })
            .collect()
    }

    pub fn transformed(&self, g: &IsometryMap) -> IdealDomain {
        IdealDomain::new(self.complex.transformed(g)).expect("isometries preserve the boundary structure")
    }
}
