//! Combinatorial maps: connected multigraphs with a rotation system.
//!
//! Darts are numbered `2 * edge + slot`; slot 0 sits at the first endpoint
//! recorded for the edge and slot 1 at the second, so loops and parallel
//! edges stay unambiguous. The face successor of a dart `d` is the rotation
//! successor of `d.reverse()` at the head of `d`.

mod derived;
mod edit;
mod faces;
mod layers;

pub use derived::{DualMap, RadialGraph};
pub use edit::Edited;
pub use faces::{FacialWalk, Faces};
pub use layers::LayerStructure;

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{parse_num, strip_comment, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dart(usize);

impl Dart {
    pub fn new(edge: usize, slot: usize) -> Self {
        debug_assert!(slot < 2);
        Dart(2 * edge + slot)
    }

    pub fn from_index(index: usize) -> Self {
        Dart(index)
    }

    pub fn index(self) -> usize {
        self.0
    }

    pub fn edge(self) -> usize {
        self.0 >> 1
    }

    pub fn slot(self) -> usize {
        self.0 & 1
    }

    pub fn reverse(self) -> Self {
        Dart(self.0 ^ 1)
    }
}

impl fmt::Display for Dart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.edge(), self.slot())
    }
}

/// Whether an edge belongs to the input graph or was added by a construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    Original,
    New,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Map {
    n: usize,
    ends: Vec<[usize; 2]>,
    rotation: Vec<Vec<Dart>>,
    position: Vec<usize>,
    kinds: Vec<EdgeKind>,
}

impl Map {
    /// Builds and validates a map. Every dart must occur exactly once, in the
    /// rotation of the endpoint it selects, and the graph must be connected.
    pub fn new(n: usize, ends: Vec<[usize; 2]>, rotation: Vec<Vec<Dart>>) -> Result<Self> {
        let kinds = vec![EdgeKind::Original; ends.len()];
        Map::with_kinds(n, ends, rotation, kinds)
    }

    pub fn with_kinds(
        n: usize,
        ends: Vec<[usize; 2]>,
        rotation: Vec<Vec<Dart>>,
        kinds: Vec<EdgeKind>,
    ) -> Result<Self> {
        let map = Map::build_unchecked(n, ends, rotation, kinds)?;
        if !map.underlying().is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(map)
    }

    /// Validates dart placement but not connectivity.
    fn build_unchecked(
        n: usize,
        ends: Vec<[usize; 2]>,
        rotation: Vec<Vec<Dart>>,
        kinds: Vec<EdgeKind>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidRotation("a map needs at least one vertex".into()));
        }
        if rotation.len() != n {
            return Err(Error::InvalidRotation(format!(
                "expected {n} rotations, got {}",
                rotation.len()
            )));
        }
        if kinds.len() != ends.len() {
            return Err(Error::InvalidRotation("edge kind list has the wrong length".into()));
        }
        for (e, end) in ends.iter().enumerate() {
            if end[0] >= n || end[1] >= n {
                return Err(Error::InvalidRotation(format!("edge {e} has an endpoint outside 0..{n}")));
            }
        }
        let mut position = vec![usize::MAX; 2 * ends.len()];
        for (v, rot) in rotation.iter().enumerate() {
            for (i, &d) in rot.iter().enumerate() {
                if d.edge() >= ends.len() {
                    return Err(Error::InvalidRotation(format!("dart {d} names a missing edge")));
                }
                if ends[d.edge()][d.slot()] != v {
                    return Err(Error::InvalidRotation(format!(
                        "dart {d} listed at vertex {v} but selects vertex {}",
                        ends[d.edge()][d.slot()]
                    )));
                }
                if position[d.index()] != usize::MAX {
                    return Err(Error::InvalidRotation(format!("duplicate dart {d}")));
                }
                position[d.index()] = i;
            }
        }
        if let Some(missing) = position.iter().position(|&p| p == usize::MAX) {
            return Err(Error::InvalidRotation(format!(
                "dart {} missing from every rotation",
                Dart::from_index(missing)
            )));
        }
        Ok(Map {
            n,
            ends,
            rotation,
            position,
            kinds,
        })
    }

    /// Builds a simple map from per-vertex neighbor lists in cyclic order.
    /// Edge ids are assigned in order of first appearance, scanning vertices
    /// in increasing order; each `u < v` edge has slot 0 at `u`.
    pub fn from_neighbor_orders(orders: &[Vec<usize>]) -> Result<Self> {
        let n = orders.len();
        let mut id_of = std::collections::HashMap::new();
        let mut ends = Vec::new();
        for (u, nbrs) in orders.iter().enumerate() {
            for &v in nbrs {
                if v >= n || v == u {
                    return Err(Error::InvalidRotation(format!("bad neighbor {v} at vertex {u}")));
                }
                let key = (u.min(v), u.max(v));
                if let std::collections::hash_map::Entry::Vacant(slot) = id_of.entry(key) {
                    slot.insert(ends.len());
                    ends.push([key.0, key.1]);
                }
            }
        }
        let mut rotation = Vec::with_capacity(n);
        for (u, nbrs) in orders.iter().enumerate() {
            let rot = nbrs
                .iter()
                .map(|&v| {
                    let e = id_of[&(u.min(v), u.max(v))];
                    Dart::new(e, usize::from(ends[e][0] != u))
                })
                .collect();
            rotation.push(rot);
        }
        Map::new(n, ends, rotation)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.ends.len()
    }

    pub fn dart_count(&self) -> usize {
        2 * self.ends.len()
    }

    pub fn ends(&self, edge: usize) -> [usize; 2] {
        self.ends[edge]
    }

    pub fn edge_kind(&self, edge: usize) -> EdgeKind {
        self.kinds[edge]
    }

    pub fn kinds(&self) -> &[EdgeKind] {
        &self.kinds
    }

    pub fn rotation(&self, v: usize) -> &[Dart] {
        &self.rotation[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }

    /// The vertex a dart leaves from.
    pub fn tail(&self, d: Dart) -> usize {
        self.ends[d.edge()][d.slot()]
    }

    /// The vertex a dart points to.
    pub fn head(&self, d: Dart) -> usize {
        self.ends[d.edge()][1 - d.slot()]
    }

    pub fn rotation_next(&self, d: Dart) -> Dart {
        let rot = &self.rotation[self.tail(d)];
        rot[(self.position[d.index()] + 1) % rot.len()]
    }

    pub fn rotation_prev(&self, d: Dart) -> Dart {
        let rot = &self.rotation[self.tail(d)];
        rot[(self.position[d.index()] + rot.len() - 1) % rot.len()]
    }

    pub fn face_successor(&self, d: Dart) -> Dart {
        self.rotation_next(d.reverse())
    }

    pub fn is_loop(&self, edge: usize) -> bool {
        self.ends[edge][0] == self.ends[edge][1]
    }

    /// The underlying multigraph with the same vertex and edge ids.
    pub fn underlying(&self) -> Graph {
        Graph::new(self.n, self.ends.iter().map(|e| (e[0], e[1])).collect())
            .expect("map endpoints are in range")
    }

    pub fn is_simple(&self) -> bool {
        self.underlying().is_simple()
    }

    /// Parses the MAP text format.
    pub fn parse(text: &str) -> Result<Self> {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, strip_comment(l)))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        let (hl, header) = *lines
            .first()
            .ok_or_else(|| Error::parse(1, "missing `map <n> <m>` header"))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 3 || h[0] != "map" {
            return Err(Error::parse(hl, "expected `map <n> <m>`"));
        }
        let n = parse_num(h[1], hl)?;
        let m = parse_num(h[2], hl)?;
        if n == 0 {
            return Err(Error::parse(hl, "a map needs at least one vertex"));
        }
        if lines.len() != 1 + m + n {
            return Err(Error::parse(
                hl,
                format!("expected {m} edge lines and {n} rot lines, found {} lines", lines.len() - 1),
            ));
        }
        let mut ends = Vec::with_capacity(m);
        for (id, &(ln, line)) in lines[1..=m].iter().enumerate() {
            let t: Vec<&str> = line.split_whitespace().collect();
            if t.len() != 4 || t[0] != "edge" {
                return Err(Error::parse(ln, "expected `edge <id> <u> <v>`"));
            }
            if parse_num(t[1], ln)? != id {
                return Err(Error::parse(ln, format!("edge ids must be consecutive, expected {id}")));
            }
            let u = parse_num(t[2], ln)?;
            let v = parse_num(t[3], ln)?;
            if u >= n || v >= n {
                return Err(Error::parse(ln, format!("vertex out of range 0..{n}")));
            }
            ends.push([u, v]);
        }
        let mut rotation = vec![None; n];
        let mut seen = vec![false; 2 * m];
        for &(ln, line) in &lines[1 + m..] {
            let mut t = line.split_whitespace();
            if t.next() != Some("rot") {
                return Err(Error::parse(ln, "expected `rot <u> <darts...>`"));
            }
            let u = parse_num(t.next().ok_or_else(|| Error::parse(ln, "missing vertex"))?, ln)?;
            if u >= n {
                return Err(Error::parse(ln, format!("vertex out of range 0..{n}")));
            }
            if rotation[u].is_some() {
                return Err(Error::parse(ln, format!("duplicate rotation for vertex {u}")));
            }
            let mut rot = Vec::new();
            for tok in t {
                let (e, s) = tok
                    .split_once('.')
                    .ok_or_else(|| Error::parse(ln, format!("malformed dart `{tok}`")))?;
                let e = parse_num(e, ln)?;
                let s = parse_num(s, ln)?;
                if e >= m || s > 1 {
                    return Err(Error::parse(ln, format!("dart `{tok}` out of range")));
                }
                if ends[e][s] != u {
                    return Err(Error::parse(ln, format!("dart `{tok}` does not select vertex {u}")));
                }
                let d = Dart::new(e, s);
                if std::mem::replace(&mut seen[d.index()], true) {
                    return Err(Error::parse(ln, format!("duplicate dart `{tok}`")));
                }
                rot.push(d);
            }
            rotation[u] = Some(rot);
        }
        if let Some(d) = seen.iter().position(|s| !s) {
            return Err(Error::parse(hl, format!("dart {} missing", Dart::from_index(d))));
        }
        let rotation = rotation
            .into_iter()
            .map(|r| r.expect("n rot lines, no duplicates, all in range"))
            .collect();
        Map::new(n, ends, rotation).map_err(|e| match e {
            Error::Disconnected => Error::parse(hl, "graph is disconnected"),
            other => Error::parse(hl, other.to_string()),
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("map {} {}\n", self.n, self.ends.len());
        for (id, e) in self.ends.iter().enumerate() {
            s.push_str(&format!("edge {id} {} {}\n", e[0], e[1]));
        }
        for (u, rot) in self.rotation.iter().enumerate() {
            s.push_str(&format!("rot {u}"));
            for d in rot {
                s.push_str(&format!(" {d}"));
            }
            s.push('\n');
        }
        s
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::Map;

    pub fn cycle(n: usize) -> Map {
        let orders: Vec<Vec<usize>> = (0..n).map(|i| vec![(i + 1) % n, (i + n - 1) % n]).collect();
        Map::from_neighbor_orders(&orders).unwrap()
    }

    pub fn k2() -> Map {
        Map::from_neighbor_orders(&[vec![1], vec![0]]).unwrap()
    }

    pub fn path(n: usize) -> Map {
        let orders: Vec<Vec<usize>> = (0..n)
            .map(|i| {
                let mut v = Vec::new();
                if i + 1 < n {
                    v.push(i + 1);
                }
                if i > 0 {
                    v.push(i - 1);
                }
                v
            })
            .collect();
        Map::from_neighbor_orders(&orders).unwrap()
    }

    /// K4 drawn with vertex 3 inside triangle 0-1-2.
    pub fn k4() -> Map {
        Map::from_neighbor_orders(&[vec![1, 3, 2], vec![2, 3, 0], vec![0, 3, 1], vec![0, 1, 2]])
            .unwrap()
    }

    pub fn star(leaves: usize) -> Map {
        let mut orders = vec![(1..=leaves).collect::<Vec<_>>()];
        orders.extend((0..leaves).map(|_| vec![0]));
        Map::from_neighbor_orders(&orders).unwrap()
    }
}
