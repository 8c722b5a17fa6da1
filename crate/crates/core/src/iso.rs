//! Pinned isomorphism, canonical forms and automorphism counts for the small
//! graphs that appear in table entries and patterns.
//!
//! A *pin* is a `(label, vertex)` pair. A pinned isomorphism must send each
//! pinned vertex to the vertex carrying the same label on the other side.
//! Two independent routes decide it here: a backtracking search over
//! refined color classes ([`pinned_isomorphic`]) and individualization /
//! refinement canonical forms ([`canonical_form`]).

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A graph on at most 32 vertices stored as adjacency bitmasks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SmallGraph {
    adj: Vec<u32>,
}

pub const SMALL_GRAPH_MAX: usize = 32;

impl SmallGraph {
    pub fn with_vertices(n: usize) -> Self {
        assert!(n <= SMALL_GRAPH_MAX, "small graphs hold at most {SMALL_GRAPH_MAX} vertices");
        SmallGraph { adj: vec![0; n] }
    }

    pub fn from_graph(g: &Graph) -> Self {
        let mut s = SmallGraph::with_vertices(g.vertex_count());
        for &(u, v) in g.edges() {
            s.add_edge(u, v);
        }
        s
    }

    pub fn from_masks(adj: Vec<u32>) -> Self {
        assert!(adj.len() <= SMALL_GRAPH_MAX);
        SmallGraph { adj }
    }

    pub fn masks(&self) -> &[u32] {
        &self.adj
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn add_vertex(&mut self) -> usize {
        assert!(self.adj.len() < SMALL_GRAPH_MAX);
        self.adj.push(0);
        self.adj.len() - 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v);
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    pub fn neighbors_mask(&self, v: usize) -> u32 {
        self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn max_degree(&self) -> usize {
        (0..self.adj.len()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.adj.len() {
            let mut rest = self.adj[u] >> (u + 1) << (u + 1);
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                out.push((u, v));
                rest &= rest - 1;
            }
        }
        out
    }

    pub fn to_graph(&self) -> Graph {
        Graph::new(self.adj.len(), self.edges()).expect("bitmask edges are in range")
    }

    pub fn component_count(&self) -> usize {
        let n = self.adj.len();
        let mut seen = 0u32;
        let mut count = 0;
        for s in 0..n {
            if seen >> s & 1 == 1 {
                continue;
            }
            count += 1;
            let mut frontier = 1u32 << s;
            seen |= frontier;
            while frontier != 0 {
                let v = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let fresh = self.adj[v] & !seen;
                seen |= fresh;
                frontier |= fresh;
            }
        }
        count
    }
}

fn check_pins(n: usize, pins: &[(u32, usize)]) -> Result<()> {
    let mut labels = BTreeSet::new();
    let mut verts = BTreeSet::new();
    for &(l, v) in pins {
        if v >= n {
            return Err(Error::InvalidArgument(format!("pinned vertex {v} out of range")));
        }
        if !labels.insert(l) || !verts.insert(v) {
            return Err(Error::InvalidArgument("pins must use distinct labels and vertices".into()));
        }
    }
    Ok(())
}

fn label_vector(n: usize, pins: &[(u32, usize)]) -> Vec<Option<u32>> {
    let mut labels = vec![None; n];
    for &(l, v) in pins {
        labels[v] = Some(l);
    }
    labels
}

/// Dense adjacency used by the backtracking search.
struct Dense {
    n: usize,
    bits: Vec<bool>,
    adj: Vec<Vec<usize>>,
}

impl Dense {
    fn new(g: &Graph) -> Self {
        let n = g.vertex_count();
        let mut bits = vec![false; n * n];
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in g.edges() {
            if !bits[u * n + v] {
                bits[u * n + v] = true;
                bits[v * n + u] = true;
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        Dense { n, bits, adj }
    }

    fn has(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.n + v]
    }
}

/// Stable color refinement on the disjoint union of `graphs`, seeded with
/// (label, degree). Colors are comparable across the graphs.
fn joint_refinement(graphs: &[&Dense], labels: &[&[Option<u32>]]) -> Vec<Vec<usize>> {
    let mut colors: Vec<Vec<usize>> = Vec::new();
    let mut seed = HashMap::new();
    let mut keys: Vec<Vec<(Option<u32>, usize)>> = Vec::new();
    for (g, l) in graphs.iter().zip(labels) {
        keys.push((0..g.n).map(|v| (l[v], g.adj[v].len())).collect());
    }
    let mut sorted: Vec<(Option<u32>, usize)> = keys.iter().flatten().copied().collect();
    sorted.sort_unstable();
    sorted.dedup();
    for (i, k) in sorted.into_iter().enumerate() {
        seed.insert(k, i);
    }
    for k in &keys {
        colors.push(k.iter().map(|x| seed[x]).collect());
    }
    let mut classes = seed.len();
    loop {
        let mut sigs: Vec<Vec<(usize, Vec<usize>)>> = Vec::new();
        for (g, c) in graphs.iter().zip(&colors) {
            sigs.push(
                (0..g.n)
                    .map(|v| {
                        let mut nb: Vec<usize> = g.adj[v].iter().map(|&w| c[w]).collect();
                        nb.sort_unstable();
                        (c[v], nb)
                    })
                    .collect(),
            );
        }
        let mut all: Vec<&(usize, Vec<usize>)> = sigs.iter().flatten().collect();
        all.sort_unstable();
        all.dedup();
        let rank: HashMap<&(usize, Vec<usize>), usize> =
            all.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let next: Vec<Vec<usize>> = sigs.iter().map(|s| s.iter().map(|x| rank[x]).collect()).collect();
        let count = rank.len();
        colors = next;
        if count == classes {
            return colors;
        }
        classes = count;
    }
}

struct Matcher<'a> {
    g1: &'a Dense,
    g2: &'a Dense,
    c1: &'a [usize],
    c2: &'a [usize],
    order: Vec<usize>,
    map: Vec<usize>,
    used: Vec<bool>,
}

impl Matcher<'_> {
    /// Counts complete isomorphisms, stopping once `limit` have been found.
    fn search(&mut self, depth: usize, limit: u64) -> u64 {
        if depth == self.order.len() {
            return 1;
        }
        let v = self.order[depth];
        let mut found = 0;
        for w in 0..self.g2.n {
            if self.used[w] || self.c2[w] != self.c1[v] {
                continue;
            }
            let consistent = self.order[..depth]
                .iter()
                .all(|&u| self.g1.has(u, v) == self.g2.has(self.map[u], w));
            if !consistent {
                continue;
            }
            self.map[v] = w;
            self.used[w] = true;
            found += self.search(depth + 1, limit - found);
            self.used[w] = false;
            if found >= limit {
                break;
            }
        }
        found
    }
}

fn count_isomorphisms(
    g1: &Graph,
    l1: &[Option<u32>],
    g2: &Graph,
    l2: &[Option<u32>],
    limit: u64,
) -> u64 {
    if g1.vertex_count() != g2.vertex_count() {
        return 0;
    }
    let d1 = Dense::new(g1);
    let d2 = Dense::new(g2);
    let edges1: usize = d1.adj.iter().map(Vec::len).sum();
    let edges2: usize = d2.adj.iter().map(Vec::len).sum();
    if edges1 != edges2 {
        return 0;
    }
    let colors = joint_refinement(&[&d1, &d2], &[l1, l2]);
    let mut h1 = colors[0].clone();
    let mut h2 = colors[1].clone();
    h1.sort_unstable();
    h2.sort_unstable();
    if h1 != h2 {
        return 0;
    }
    let mut size = HashMap::new();
    for &c in &colors[0] {
        *size.entry(c).or_insert(0usize) += 1;
    }
    // Small classes first, then grow along edges so adjacency checks prune early.
    let n = d1.n;
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    while order.len() < n {
        let next = (0..n)
            .filter(|&v| !placed[v])
            .min_by_key(|&v| {
                let touching = d1.adj[v].iter().filter(|&&u| placed[u]).count();
                (usize::from(touching == 0 && !order.is_empty()), size[&colors[0][v]], v)
            })
            .expect("unplaced vertex remains");
        placed[next] = true;
        order.push(next);
    }
    let mut m = Matcher {
        g1: &d1,
        g2: &d2,
        c1: &colors[0],
        c2: &colors[1],
        order,
        map: vec![usize::MAX; n],
        used: vec![false; n],
    };
    m.search(0, limit)
}

/// Decides whether an isomorphism maps every pinned vertex of `h1` to the
/// equally labeled pinned vertex of `h2`.
pub fn pinned_isomorphic(h1: &Graph, pins1: &[(u32, usize)], h2: &Graph, pins2: &[(u32, usize)]) -> Result<bool> {
    check_pins(h1.vertex_count(), pins1)?;
    check_pins(h2.vertex_count(), pins2)?;
    let s1: BTreeSet<u32> = pins1.iter().map(|p| p.0).collect();
    let s2: BTreeSet<u32> = pins2.iter().map(|p| p.0).collect();
    if s1 != s2 {
        return Err(Error::InvalidArgument("pin label sets differ".into()));
    }
    let l1 = label_vector(h1.vertex_count(), pins1);
    let l2 = label_vector(h2.vertex_count(), pins2);
    Ok(count_isomorphisms(h1, &l1, h2, &l2, 1) > 0)
}

/// Number of automorphisms by exhaustive refined backtracking.
pub fn automorphism_count(h: &Graph) -> u64 {
    let l = vec![None; h.vertex_count()];
    count_isomorphisms(h, &l, h, &l, u64::MAX)
}

/// Attaches `i * k` pendant vertices to the `i`-th pinned vertex (1-based),
/// so any isomorphism between two such graphs respects the pin order when
/// the original graphs have at most `k` vertices.
pub fn gadget_transform(h: &Graph, pins: &[usize], k: usize) -> Graph {
    let mut edges = h.edges().to_vec();
    let mut n = h.vertex_count();
    for (i, &p) in pins.iter().enumerate() {
        for _ in 0..(i + 1) * k {
            edges.push((p, n));
            n += 1;
        }
    }
    Graph::new(n, edges).expect("pendants are in range")
}

/// Pinned equivalence decided through [`gadget_transform`] and an unpinned
/// isomorphism test. Pins are ordered by label on both sides.
pub fn equivalent_via_gadget(
    h1: &Graph,
    pins1: &[(u32, usize)],
    h2: &Graph,
    pins2: &[(u32, usize)],
) -> Result<bool> {
    check_pins(h1.vertex_count(), pins1)?;
    check_pins(h2.vertex_count(), pins2)?;
    let mut p1 = pins1.to_vec();
    let mut p2 = pins2.to_vec();
    p1.sort_unstable();
    p2.sort_unstable();
    if p1.iter().map(|p| p.0).ne(p2.iter().map(|p| p.0)) {
        return Err(Error::InvalidArgument("pin label sets differ".into()));
    }
    let k = h1.vertex_count().max(h2.vertex_count()).max(1);
    let g1 = gadget_transform(h1, &p1.iter().map(|p| p.1).collect::<Vec<_>>(), k);
    let g2 = gadget_transform(h2, &p2.iter().map(|p| p.1).collect::<Vec<_>>(), k);
    pinned_isomorphic(&g1, &[], &g2, &[])
}

/// Canonical byte string of a pinned graph: equal strings exactly when the
/// pinned graphs are isomorphic.
pub fn canonical_form(h: &Graph, pins: &[(u32, usize)]) -> Result<Vec<u8>> {
    check_pins(h.vertex_count(), pins)?;
    if h.vertex_count() > SMALL_GRAPH_MAX || !h.is_simple() {
        return Err(Error::InvalidArgument(format!(
            "canonical forms need a simple graph on at most {SMALL_GRAPH_MAX} vertices"
        )));
    }
    Ok(canonical_small(&SmallGraph::from_graph(h), &label_vector(h.vertex_count(), pins)))
}

/// Canonical form of a small graph with optional per-vertex labels.
pub fn canonical_small(h: &SmallGraph, labels: &[Option<u32>]) -> Vec<u8> {
    let n = h.vertex_count();
    let mut seeds: Vec<(Option<u32>, u32)> = (0..n).map(|v| (labels[v], h.adj[v].count_ones())).collect();
    let mut distinct = seeds.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let colors: Vec<u8> = seeds
        .drain(..)
        .map(|s| distinct.binary_search(&s).expect("seed present") as u8)
        .collect();
    let colors = refine(h, colors);
    let mut best: Option<Vec<u8>> = None;
    search_canonical(h, labels, colors, &mut best);
    best.expect("the search reaches at least one discrete partition")
}

/// Equitable refinement of an ordered partition. Colors are cell ranks; a
/// cell splits by the sorted multiset of neighbor colors, and the split keeps
/// the relative order of existing cells.
fn refine(h: &SmallGraph, mut colors: Vec<u8>) -> Vec<u8> {
    let n = h.vertex_count();
    let mut classes = count_distinct(&colors);
    loop {
        let mut sigs: Vec<(u8, [u8; SMALL_GRAPH_MAX])> = Vec::with_capacity(n);
        for v in 0..n {
            let mut hist = [0u8; SMALL_GRAPH_MAX];
            let mut rest = h.adj[v];
            while rest != 0 {
                let w = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                hist[colors[w] as usize] += 1;
            }
            sigs.push((colors[v], hist));
        }
        let mut sorted = sigs.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() == classes {
            return colors;
        }
        classes = sorted.len();
        colors = sigs
            .iter()
            .map(|s| sorted.binary_search(s).expect("signature present") as u8)
            .collect();
    }
}

fn count_distinct(colors: &[u8]) -> usize {
    let mut seen = 0u64;
    for &c in colors {
        seen |= 1 << c;
    }
    seen.count_ones() as usize
}

fn search_canonical(h: &SmallGraph, labels: &[Option<u32>], colors: Vec<u8>, best: &mut Option<Vec<u8>>) {
    let n = h.vertex_count();
    // lowest-indexed cell with more than one vertex
    let mut size = [0u8; SMALL_GRAPH_MAX];
    for &c in &colors {
        size[c as usize] += 1;
    }
    let target = (0..n).find(|&c| size[c] > 1);
    let Some(cell) = target else {
        let cert = certificate(h, labels, &colors);
        if best.as_ref().is_none_or(|b| cert < *b) {
            *best = Some(cert);
        }
        return;
    };
    for v in 0..n {
        if colors[v] as usize != cell {
            continue;
        }
        let individualized: Vec<u8> = colors
            .iter()
            .enumerate()
            .map(|(w, &c)| if (c as usize) > cell || (c as usize == cell && w != v) { c + 1 } else { c })
            .collect();
        search_canonical(h, labels, refine(h, individualized), best);
    }
}

fn certificate(h: &SmallGraph, labels: &[Option<u32>], colors: &[u8]) -> Vec<u8> {
    let n = h.vertex_count();
    let mut at = [0usize; SMALL_GRAPH_MAX];
    for v in 0..n {
        at[colors[v] as usize] = v;
    }
    let mut out = Vec::with_capacity(1 + 5 * n + 4 * n);
    out.push(n as u8);
    for &v in &at[..n] {
        match labels[v] {
            Some(l) => {
                out.push(1);
                out.extend_from_slice(&l.to_be_bytes());
            }
            None => out.push(0),
        }
    }
    for &v in &at[..n] {
        let mut row = 0u32;
        for (j, &w) in at[..n].iter().enumerate() {
            if h.has_edge(v, w) {
                row |= 1 << j;
            }
        }
        out.extend_from_slice(&row.to_be_bytes());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::new(n, edges.to_vec()).unwrap()
    }

    fn k(n: usize) -> Graph {
        let mut e = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                e.push((u, v));
            }
        }
        g(n, &e)
    }

    #[test]
    fn pinned_k2_both_ends() {
        let k2 = g(2, &[(0, 1)]);
        assert!(pinned_isomorphic(&k2, &[(0, 0), (1, 1)], &k2, &[(0, 0), (1, 1)]).unwrap());
        assert!(pinned_isomorphic(&k2, &[(0, 0), (1, 1)], &k2, &[(0, 1), (1, 0)]).unwrap());
    }

    #[test]
    fn path_end_pin_differs_from_center_pin() {
        let p3 = g(3, &[(0, 1), (1, 2)]);
        assert!(!pinned_isomorphic(&p3, &[(0, 0)], &p3, &[(0, 1)]).unwrap());
        assert!(pinned_isomorphic(&p3, &[(0, 0)], &p3, &[(0, 2)]).unwrap());
    }

    #[test]
    fn four_cycle_is_vertex_transitive() {
        let c4 = g(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        for v in 0..4 {
            assert!(pinned_isomorphic(&c4, &[(5, 0)], &c4, &[(5, v)]).unwrap());
        }
    }

    #[test]
    fn mismatched_label_sets_are_errors() {
        let k2 = g(2, &[(0, 1)]);
        assert!(pinned_isomorphic(&k2, &[(0, 0)], &k2, &[(1, 0)]).is_err());
        assert!(pinned_isomorphic(&k2, &[(0, 0), (0, 1)], &k2, &[(0, 0)]).is_err());
    }

    #[test]
    fn gadget_sizes() {
        let p3 = g(3, &[(0, 1), (1, 2)]);
        assert_eq!(gadget_transform(&p3, &[], 3), p3);
        assert_eq!(gadget_transform(&p3, &[1], 3).vertex_count(), 6);
        let two = gadget_transform(&p3, &[0, 2], 2);
        assert_eq!(two.vertex_count(), 3 + 6);
        assert_eq!(two.degree(0), 1 + 2);
        assert_eq!(two.degree(2), 1 + 4);
    }

    #[test]
    fn canonical_forms() {
        let p3a = g(3, &[(0, 1), (1, 2)]);
        let p3b = g(3, &[(2, 0), (0, 1)]);
        assert_eq!(canonical_form(&p3a, &[]).unwrap(), canonical_form(&p3b, &[]).unwrap());
        assert_ne!(canonical_form(&p3a, &[]).unwrap(), canonical_form(&k(3), &[]).unwrap());
        assert_eq!(
            canonical_form(&p3a, &[(9, 0)]).unwrap(),
            canonical_form(&p3a, &[(9, 2)]).unwrap()
        );
        assert_ne!(
            canonical_form(&p3a, &[(9, 0)]).unwrap(),
            canonical_form(&p3a, &[(9, 1)]).unwrap()
        );
    }

    proptest::proptest! {
        #[test]
        fn pinned_test_agrees_with_gadgets_and_forms(
            e1 in proptest::collection::btree_set((0usize..5, 0usize..5), 0..10),
            e2 in proptest::collection::btree_set((0usize..5, 0usize..5), 0..10),
            a in 0usize..5,
            b in 0usize..5,
        ) {
            let h1 = g(5, &e1.into_iter().filter(|(u, v)| u < v).collect::<Vec<_>>());
            let h2 = g(5, &e2.into_iter().filter(|(u, v)| u < v).collect::<Vec<_>>());
            let (p1, p2) = ([(0, a)], [(0, b)]);
            let direct = pinned_isomorphic(&h1, &p1, &h2, &p2).unwrap();
            proptest::prop_assert_eq!(direct, equivalent_via_gadget(&h1, &p1, &h2, &p2).unwrap());
            let same = canonical_form(&h1, &p1).unwrap() == canonical_form(&h2, &p2).unwrap();
            proptest::prop_assert_eq!(direct, same);
        }
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(automorphism_count(&k(3)), 6);
        assert_eq!(automorphism_count(&g(3, &[(0, 1), (1, 2)])), 2);
        assert_eq!(automorphism_count(&g(4, &[(0, 1), (1, 2), (2, 3), (3, 0)])), 8);
        for (n, f) in [(1, 1), (2, 2), (3, 6), (4, 24), (5, 120)] {
            assert_eq!(automorphism_count(&k(n)), f);
        }
        assert_eq!(automorphism_count(&Graph::empty()), 1);
    }
}
