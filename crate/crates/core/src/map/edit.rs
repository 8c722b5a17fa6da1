//! Embedding-preserving edits. Every operation returns a new map; removals
//! compact vertex and edge ids and report the renaming.

use super::{Dart, EdgeKind, Map};
use crate::error::{Error, Result};

/// The result of an edit that removes vertices or edges.
#[derive(Debug, Clone)]
pub struct Edited {
    pub map: Map,
    /// Old vertex id to new vertex id, `None` if removed.
    pub vertex_map: Vec<Option<usize>>,
    /// Old edge id to new edge id, `None` if removed.
    pub edge_map: Vec<Option<usize>>,
}

impl Map {
    /// Adds two parallel copies of every edge, one on each side, so that each
    /// original edge borders two 2-faces. New edges get ids `m + 2e` and
    /// `m + 2e + 1` and are marked [`EdgeKind::New`].
    pub fn triple_edges(&self) -> Map {
        let m = self.edge_count();
        let mut ends = self.ends.clone();
        let mut kinds = self.kinds.clone();
        for e in 0..m {
            ends.push(self.ends[e]);
            ends.push(self.ends[e]);
            kinds.push(EdgeKind::New);
            kinds.push(EdgeKind::New);
        }
        let rotation = self
            .rotation
            .iter()
            .map(|rot| {
                let mut out = Vec::with_capacity(3 * rot.len());
                for &d in rot {
                    let before = m + 2 * d.edge();
                    let after = before + 1;
                    if d.slot() == 0 {
                        out.extend([Dart::new(before, 0), d, Dart::new(after, 0)]);
                    } else {
                        out.extend([Dart::new(after, 1), d, Dart::new(before, 1)]);
                    }
                }
                out
            })
            .collect();
        Map::build_unchecked(self.n, ends, rotation, kinds).expect("tripling keeps darts consistent")
    }

    /// Contracts a non-loop edge, splicing the two rotations at the removed
    /// darts. The second endpoint is merged into the first.
    pub fn contract_edge(&self, e: usize) -> Result<Edited> {
        if e >= self.edge_count() {
            return Err(Error::InvalidArgument(format!("no edge {e}")));
        }
        if self.is_loop(e) {
            return Err(Error::InvalidArgument(format!("cannot contract loop {e}")));
        }
        let [u, v] = self.ends[e];
        let a = Dart::new(e, 0);
        let b = Dart::new(e, 1);
        let mut spliced = Vec::with_capacity(self.degree(u) + self.degree(v) - 2);
        let mut d = self.rotation_next(a);
        while d != a {
            spliced.push(d);
            d = self.rotation_next(d);
        }
        let mut d = self.rotation_next(b);
        while d != b {
            spliced.push(d);
            d = self.rotation_next(d);
        }
        let mut ends = self.ends.clone();
        for end in ends.iter_mut() {
            for x in end.iter_mut() {
                if *x == v {
                    *x = u;
                }
            }
        }
        let mut rotation = self.rotation.clone();
        rotation[u] = spliced;
        rotation[v].clear();
        compact(self.n, ends, rotation, self.kinds.clone(), Some(v), &[e], false)
    }

    /// Deletes an edge. Fails if the result would be disconnected.
    pub fn delete_edge(&self, e: usize) -> Result<Edited> {
        if e >= self.edge_count() {
            return Err(Error::InvalidArgument(format!("no edge {e}")));
        }
        let mut rotation = self.rotation.clone();
        for end in self.ends[e] {
            rotation[end].retain(|d| d.edge() != e);
        }
        compact(self.n, self.ends.clone(), rotation, self.kinds.clone(), None, &[e], true)
    }

    /// Replaces edge `e = uv` by a path `u x v`. The new vertex gets id `n`;
    /// `e` becomes `ux` and the new edge `m` is `xv`.
    pub fn subdivide_edge(&self, e: usize) -> Result<Map> {
        if e >= self.edge_count() {
            return Err(Error::InvalidArgument(format!("no edge {e}")));
        }
        let x = self.n;
        let m = self.edge_count();
        let [_, v] = self.ends[e];
        let mut ends = self.ends.clone();
        ends[e][1] = x;
        ends.push([x, v]);
        let mut kinds = self.kinds.clone();
        kinds.push(self.kinds[e]);
        let mut rotation = self.rotation.clone();
        let b = Dart::new(e, 1);
        let pos = self.position[b.index()];
        rotation[v][pos] = Dart::new(m, 1);
        rotation.push(vec![b, Dart::new(m, 0)]);
        Map::build_unchecked(x + 1, ends, rotation, kinds)
    }

    /// Inverse of [`Map::subdivide_edge`]: removes a degree-2 vertex and joins
    /// its two edges into the one with the smaller id.
    pub fn suppress_vertex(&self, x: usize) -> Result<Edited> {
        if x >= self.n {
            return Err(Error::InvalidArgument(format!("no vertex {x}")));
        }
        if self.degree(x) != 2 {
            return Err(Error::InvalidArgument(format!(
                "vertex {x} has degree {}, suppression needs degree 2",
                self.degree(x)
            )));
        }
        let (mut p, mut q) = (self.rotation[x][0], self.rotation[x][1]);
        if p.edge() == q.edge() {
            return Err(Error::InvalidArgument(format!("vertex {x} carries only a loop")));
        }
        if p.edge() > q.edge() {
            std::mem::swap(&mut p, &mut q);
        }
        let b = self.head(q);
        let far = q.reverse();
        let mut ends = self.ends.clone();
        ends[p.edge()][p.slot()] = b;
        let mut rotation = self.rotation.clone();
        let pos = self.position[far.index()];
        rotation[b][pos] = p;
        rotation[x].clear();
        compact(self.n, ends, rotation, self.kinds.clone(), Some(x), &[q.edge()], false)
    }
}

fn compact(
    n: usize,
    ends: Vec<[usize; 2]>,
    rotation: Vec<Vec<Dart>>,
    kinds: Vec<EdgeKind>,
    removed_vertex: Option<usize>,
    removed_edges: &[usize],
    check_connected: bool,
) -> Result<Edited> {
    let vertex_map: Vec<Option<usize>> = (0..n)
        .map(|v| match removed_vertex {
            Some(r) if v == r => None,
            Some(r) if v > r => Some(v - 1),
            _ => Some(v),
        })
        .collect();
    let mut edge_map = vec![None; ends.len()];
    let mut next = 0;
    for (e, slot) in edge_map.iter_mut().enumerate() {
        if !removed_edges.contains(&e) {
            *slot = Some(next);
            next += 1;
        }
    }
    let new_ends = ends
        .iter()
        .enumerate()
        .filter(|(e, _)| edge_map[*e].is_some())
        .map(|(_, end)| end.map(|x| vertex_map[x].expect("surviving edges avoid removed vertex")))
        .collect();
    let new_kinds = kinds
        .iter()
        .enumerate()
        .filter(|(e, _)| edge_map[*e].is_some())
        .map(|(_, k)| *k)
        .collect();
    let new_rotation = rotation
        .into_iter()
        .enumerate()
        .filter(|(v, _)| vertex_map[*v].is_some())
        .map(|(_, rot)| {
            rot.into_iter()
                .map(|d| Dart::new(edge_map[d.edge()].expect("rotation holds live darts"), d.slot()))
                .collect()
        })
        .collect();
    let n_new = n - usize::from(removed_vertex.is_some());
    let map = if check_connected {
        Map::with_kinds(n_new, new_ends, new_rotation, new_kinds)?
    } else {
        Map::build_unchecked(n_new, new_ends, new_rotation, new_kinds)?
    };
    Ok(Edited {
        map,
        vertex_map,
        edge_map,
    })
}
