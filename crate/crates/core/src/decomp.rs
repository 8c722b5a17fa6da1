//! Branch decompositions: ternary trees whose leaves carry host edges,
//! middle sets, rooting, the BD text format and face-set certificates.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{parse_num, strip_comment, Graph};
use crate::map::{Map, RadialGraph};

/// A `mid <a> <b> <v...>` annotation: tree nodes `a`, `b` and the vertices.
pub type MidLine = (usize, usize, Vec<usize>);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    /// A leaf carrying the given host edge.
    Leaf(usize),
    Internal,
    /// The extra leaf added by rooting; it carries no host edge.
    Root,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchDecomposition {
    kinds: Vec<NodeKind>,
    tree_edges: Vec<[usize; 2]>,
    adj: Vec<Vec<(usize, usize)>>,
    leaf_of_edge: Vec<usize>,
}

impl BranchDecomposition {
    /// Validates the tree shape and that leaves biject onto host edges
    /// `0..host_edges`.
    pub fn new(kinds: Vec<NodeKind>, tree_edges: Vec<[usize; 2]>, host_edges: usize) -> Result<Self> {
        let count = kinds.len();
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if count == 0 {
            if host_edges != 0 || !tree_edges.is_empty() {
                return bad("an empty decomposition covers no edges".into());
            }
            return Ok(BranchDecomposition { kinds, tree_edges, adj: Vec::new(), leaf_of_edge: Vec::new() });
        }
        if tree_edges.len() + 1 != count {
            return bad(format!("{count} nodes need {} tree edges, found {}", count - 1, tree_edges.len()));
        }
        let mut adj = vec![Vec::new(); count];
        for (i, &[a, b]) in tree_edges.iter().enumerate() {
            if a >= count || b >= count || a == b {
                return bad(format!("tree edge {a} {b} is invalid"));
            }
            adj[a].push((b, i));
            adj[b].push((a, i));
        }
        let mut seen = vec![false; count];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(x) = queue.pop_front() {
            for &(y, _) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        if seen.contains(&false) {
            return bad("the decomposition tree is disconnected".into());
        }
        let mut leaf_of_edge = vec![usize::MAX; host_edges];
        let mut roots = 0;
        for (x, kind) in kinds.iter().enumerate() {
            let deg = adj[x].len();
            match *kind {
                NodeKind::Leaf(e) => {
                    if count > 1 && deg != 1 {
                        return bad(format!("leaf {x} has degree {deg}"));
                    }
                    if e >= host_edges || leaf_of_edge[e] != usize::MAX {
                        return bad(format!("host edge {e} is out of range or on two leaves"));
                    }
                    leaf_of_edge[e] = x;
                }
                NodeKind::Internal => {
                    if deg != 3 {
                        return bad(format!("internal node {x} has degree {deg}"));
                    }
                }
                NodeKind::Root => {
                    roots += 1;
                    if deg != 1 {
                        return bad(format!("root {x} has degree {deg}"));
                    }
                }
            }
        }
        if roots > 1 {
            return bad("more than one root".into());
        }
        if let Some(e) = leaf_of_edge.iter().position(|&x| x == usize::MAX) {
            return bad(format!("host edge {e} has no leaf"));
        }
        Ok(BranchDecomposition { kinds, tree_edges, adj, leaf_of_edge })
    }

    /// The decomposition with no nodes, used for edgeless graphs.
    pub fn empty() -> Self {
        BranchDecomposition::new(Vec::new(), Vec::new(), 0).expect("empty decomposition is valid")
    }

    /// The one-leaf decomposition of a single-edge graph.
    pub fn single_leaf() -> Self {
        BranchDecomposition::new(vec![NodeKind::Leaf(0)], Vec::new(), 1).expect("one leaf is valid")
    }

    pub fn node_count(&self) -> usize {
        self.kinds.len()
    }

    pub fn tree_edge_count(&self) -> usize {
        self.tree_edges.len()
    }

    pub fn host_edge_count(&self) -> usize {
        self.leaf_of_edge.len()
    }

    pub fn kind(&self, node: usize) -> NodeKind {
        self.kinds[node]
    }

    pub fn kinds(&self) -> &[NodeKind] {
        &self.kinds
    }

    pub fn tree_edge(&self, e: usize) -> [usize; 2] {
        self.tree_edges[e]
    }

    pub fn tree_edges(&self) -> &[[usize; 2]] {
        &self.tree_edges
    }

    /// `(neighbor, tree edge)` pairs.
    pub fn neighbors(&self, node: usize) -> &[(usize, usize)] {
        &self.adj[node]
    }

    pub fn leaf_of_edge(&self, host_edge: usize) -> usize {
        self.leaf_of_edge[host_edge]
    }

    pub fn root_node(&self) -> Option<usize> {
        self.kinds.iter().position(|k| *k == NodeKind::Root)
    }

    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty()
    }

    /// A single node and no tree edges.
    pub fn is_degenerate(&self) -> bool {
        self.kinds.len() == 1
    }

    /// Subdivides the lowest-index tree edge and hangs a root leaf from the
    /// new node. Empty and single-node decompositions come back unchanged
    /// (check [`BranchDecomposition::is_degenerate`]).
    pub fn root(&self) -> Result<Self> {
        if self.root_node().is_some() {
            return Err(Error::InvalidArgument("decomposition is already rooted".into()));
        }
        if self.tree_edges.is_empty() {
            return Ok(self.clone());
        }
        let mut kinds = self.kinds.clone();
        let mut tree_edges = self.tree_edges.clone();
        let x = kinds.len();
        kinds.push(NodeKind::Internal);
        kinds.push(NodeKind::Root);
        let [a, b] = tree_edges[0];
        tree_edges[0] = [a, x];
        tree_edges.push([x, b]);
        tree_edges.push([x + 1, x]);
        BranchDecomposition::new(kinds, tree_edges, self.host_edge_count())
    }

    /// Edge-rooted view of a rooted decomposition.
    pub fn rooted(&self) -> Result<Rooted> {
        let root = self
            .root_node()
            .ok_or_else(|| Error::InvalidArgument("decomposition has no root".into()))?;
        let count = self.tree_edges.len();
        let mut lower = vec![usize::MAX; count];
        let mut children = vec![None; count];
        let mut order = Vec::with_capacity(count);
        let (_, root_edge) = self.adj[root][0];
        // iterative DFS; parents before children, reversed afterwards
        let mut stack = vec![(root_edge, root)];
        while let Some((e, from)) = stack.pop() {
            let [a, b] = self.tree_edges[e];
            let low = if a == from { b } else { a };
            lower[e] = low;
            order.push(e);
            let below: Vec<usize> = self.adj[low].iter().filter(|&&(_, f)| f != e).map(|&(_, f)| f).collect();
            if below.len() == 2 {
                children[e] = Some([below[0], below[1]]);
                stack.push((below[1], low));
                stack.push((below[0], low));
            }
        }
        order.reverse();
        Ok(Rooted { root_edge, lower, children, post_order: order })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(Self::parse_annotated(text)?.0)
    }

    /// Parses the BD format and returns any `mid` annotation lines.
    pub fn parse_annotated(text: &str) -> Result<(Self, Vec<MidLine>)> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, strip_comment(l)))
            .filter(|(_, l)| !l.is_empty());
        let (ln, header) = lines.next().ok_or_else(|| Error::parse(1, "missing `bd` header"))?;
        let toks: Vec<&str> = header.split_whitespace().collect();
        if toks.len() != 2 || toks[0] != "bd" {
            return Err(Error::parse(ln, "expected `bd <node_count>`"));
        }
        let count = parse_num(toks[1], ln)?;
        let mut kinds = vec![None; count];
        let mut tree_edges = Vec::new();
        let mut mids = Vec::new();
        for (ln, line) in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks[0] {
                "tnode" => {
                    if toks.len() < 3 {
                        return Err(Error::parse(ln, "expected `tnode <id> leaf <edge>|internal|root`"));
                    }
                    let id = parse_num(toks[1], ln)?;
                    if id >= count {
                        return Err(Error::parse(ln, format!("node {id} out of range")));
                    }
                    let kind = match (toks[2], toks.len()) {
                        ("leaf", 4) => NodeKind::Leaf(parse_num(toks[3], ln)?),
                        ("internal", 3) => NodeKind::Internal,
                        ("root", 3) => NodeKind::Root,
                        _ => return Err(Error::parse(ln, "unknown node kind")),
                    };
                    if kinds[id].replace(kind).is_some() {
                        return Err(Error::parse(ln, format!("node {id} declared twice")));
                    }
                }
                "tedge" => {
                    if toks.len() != 3 {
                        return Err(Error::parse(ln, "expected `tedge <a> <b>`"));
                    }
                    tree_edges.push([parse_num(toks[1], ln)?, parse_num(toks[2], ln)?]);
                }
                "mid" => {
                    if toks.len() < 3 {
                        return Err(Error::parse(ln, "expected `mid <a> <b> <v...>`"));
                    }
                    let vs = toks[3..].iter().map(|t| parse_num(t, ln)).collect::<Result<Vec<_>>>()?;
                    mids.push((parse_num(toks[1], ln)?, parse_num(toks[2], ln)?, vs));
                }
                other => return Err(Error::parse(ln, format!("unknown record `{other}`"))),
            }
        }
        let kinds: Vec<NodeKind> = kinds
            .into_iter()
            .enumerate()
            .map(|(i, k)| k.ok_or_else(|| Error::parse(ln, format!("node {i} is never declared"))))
            .collect::<Result<_>>()?;
        let host_edges = kinds.iter().filter(|k| matches!(k, NodeKind::Leaf(_))).count();
        Ok((BranchDecomposition::new(kinds, tree_edges, host_edges)?, mids))
    }

    pub fn to_text(&self, mids: Option<&MiddleSets>) -> String {
        let mut out = format!("bd {}\n", self.kinds.len());
        for (i, k) in self.kinds.iter().enumerate() {
            match k {
                NodeKind::Leaf(e) => writeln!(out, "tnode {i} leaf {e}"),
                NodeKind::Internal => writeln!(out, "tnode {i} internal"),
                NodeKind::Root => writeln!(out, "tnode {i} root"),
            }
            .expect("writing to a String");
        }
        for &[a, b] in &self.tree_edges {
            writeln!(out, "tedge {a} {b}").expect("writing to a String");
        }
        if let Some(m) = mids {
            for (e, &[a, b]) in self.tree_edges.iter().enumerate() {
                write!(out, "mid {a} {b}").expect("writing to a String");
                for v in m.mid(e) {
                    write!(out, " {v}").expect("writing to a String");
                }
                out.push('\n');
            }
        }
        out
    }
}

/// The decomposition seen from its root leaf. For each tree edge, `lower`
/// is the endpoint away from the root and `children` the two tree edges
/// below it (none when the lower endpoint is a leaf).
#[derive(Debug, Clone)]
pub struct Rooted {
    pub root_edge: usize,
    pub lower: Vec<usize>,
    pub children: Vec<Option<[usize; 2]>>,
    /// Tree edges, children before parents.
    pub post_order: Vec<usize>,
}

/// Middle sets per tree edge, stored as sorted vertex lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MiddleSets {
    mids: Vec<Vec<usize>>,
}

impl MiddleSets {
    pub fn mid(&self, tree_edge: usize) -> &[usize] {
        &self.mids[tree_edge]
    }

    pub fn width(&self) -> usize {
        self.mids.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.mids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mids.is_empty()
    }
}

/// Computes every middle set with one pass from the leaves inward. Each
/// subtree carries the vertices it touches but does not saturate, with the
/// number of incident edges seen so far.
pub fn compute_middle_sets(bd: &BranchDecomposition, host: &Graph) -> Result<MiddleSets> {
    if bd.host_edge_count() != host.edge_count() {
        return Err(Error::InvalidArgument(format!(
            "decomposition covers {} edges, host has {}",
            bd.host_edge_count(),
            host.edge_count()
        )));
    }
    let edge_degree: Vec<usize> = (0..host.vertex_count()).map(|v| host.degree(v)).collect();
    let count = bd.tree_edge_count();
    let mut mids = vec![Vec::new(); count];
    if count == 0 {
        return Ok(MiddleSets { mids });
    }
    // Orient every tree edge towards node 0 and process in reverse BFS order.
    let n_nodes = bd.node_count();
    let mut parent_edge = vec![usize::MAX; n_nodes];
    let mut order = Vec::with_capacity(n_nodes);
    let mut seen = vec![false; n_nodes];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(x) = queue.pop_front() {
        order.push(x);
        for &(y, e) in bd.neighbors(x) {
            if !seen[y] {
                seen[y] = true;
                parent_edge[y] = e;
                queue.push_back(y);
            }
        }
    }
    let mut boundary: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n_nodes];
    for &x in order.iter().rev() {
        let mut acc: Vec<(usize, usize)> = match bd.kind(x) {
            NodeKind::Leaf(e) => {
                let (u, v) = host.edge(e);
                if u == v {
                    vec![(u, 2)]
                } else {
                    let mut b = vec![(u, 1), (v, 1)];
                    b.sort_unstable();
                    b
                }
            }
            _ => Vec::new(),
        };
        for &(y, e) in bd.neighbors(x) {
            if e != parent_edge[x] {
                let below = std::mem::take(&mut boundary[y]);
                acc = merge_counts(&acc, &below);
            }
        }
        acc.retain(|&(v, c)| c < edge_degree[v]);
        if parent_edge[x] != usize::MAX {
            mids[parent_edge[x]] = acc.iter().map(|&(v, _)| v).collect();
        }
        boundary[x] = acc;
    }
    Ok(MiddleSets { mids })
}

fn merge_counts(a: &[(usize, usize)], b: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Witness that every tree edge of a decomposition splits the faces of the
/// radial graph of the tripled host into two connected regions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SsdCertificate {
    /// Per tree edge, the radial faces on the side of `tree_edge(e)[0]` and
    /// on the side of `tree_edge(e)[1]`, sorted.
    pub sides: Vec<[Vec<u32>; 2]>,
    /// Per decomposition node, the radial face of the edge it came from.
    pub node_face: Vec<Option<usize>>,
}

/// Checks the certificate against the radial graph of the tripled host the
/// decomposition was built from. Host edge `e` of the decomposition must be
/// edge `e` of that tripled map.
pub fn verify_certificate(bd: &BranchDecomposition, cert: &SsdCertificate, radial: &RadialGraph) -> Result<bool> {
    if cert.sides.len() != bd.tree_edge_count() || cert.node_face.len() != bd.node_count() {
        return Err(Error::InvalidArgument("certificate does not match the decomposition".into()));
    }
    let faces = radial.faces.count();
    let dual_adj = radial_dual_adjacency(&radial.map, radial);
    let mut side_of_node = vec![0u8; bd.node_count()];
    for (e, [a_faces, b_faces]) in cert.sides.iter().enumerate() {
        let mut owner = vec![0u8; faces];
        for (tag, set) in [(1u8, a_faces), (2u8, b_faces)] {
            for &f in set {
                let f = f as usize;
                if f >= faces || owner[f] != 0 {
                    return Ok(false);
                }
                owner[f] = tag;
            }
            if set.is_empty() || !connected_in(&dual_adj, set, &owner, tag) {
                return Ok(false);
            }
        }
        if owner.contains(&0) {
            return Ok(false);
        }
        // host edges on each side must sit in that side's faces
        mark_sides(bd, e, &mut side_of_node);
        for (x, kind) in bd.kinds().iter().enumerate() {
            if let NodeKind::Leaf(h) = *kind {
                if owner[radial.face_of_edge(h)] != side_of_node[x] {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn mark_sides(bd: &BranchDecomposition, e: usize, side: &mut [u8]) {
    side.fill(0);
    let [a, b] = bd.tree_edge(e);
    for (start, tag) in [(a, 1u8), (b, 2u8)] {
        let mut stack = vec![start];
        side[start] = tag;
        while let Some(x) = stack.pop() {
            for &(y, f) in bd.neighbors(x) {
                if f != e && side[y] == 0 {
                    side[y] = tag;
                    stack.push(y);
                }
            }
        }
    }
}

/// Adjacency of the dual of the radial map (faces sharing a radial edge).
pub(crate) fn radial_dual_adjacency(map: &Map, radial: &RadialGraph) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); radial.faces.count()];
    for e in 0..map.edge_count() {
        let f0 = radial.faces.face_of(crate::map::Dart::new(e, 0));
        let f1 = radial.faces.face_of(crate::map::Dart::new(e, 1));
        if f0 != f1 {
            adj[f0].push(f1);
            adj[f1].push(f0);
        }
    }
    adj
}

fn connected_in(adj: &[Vec<usize>], set: &[u32], owner: &[u8], tag: u8) -> bool {
    let mut seen = vec![false; adj.len()];
    let start = set[0] as usize;
    seen[start] = true;
    let mut stack = vec![start];
    let mut reached = 1;
    while let Some(f) = stack.pop() {
        for &g in &adj[f] {
            if owner[g] == tag && !seen[g] {
                seen[g] = true;
                reached += 1;
                stack.push(g);
            }
        }
    }
    reached == set.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star3() -> BranchDecomposition {
        BranchDecomposition::new(
            vec![NodeKind::Internal, NodeKind::Leaf(0), NodeKind::Leaf(1), NodeKind::Leaf(2)],
            vec![[0, 1], [0, 2], [0, 3]],
            3,
        )
        .unwrap()
    }

    fn c3() -> Graph {
        Graph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn p3_bd() -> BranchDecomposition {
        BranchDecomposition::new(vec![NodeKind::Leaf(0), NodeKind::Leaf(1)], vec![[0, 1]], 2).unwrap()
    }

    #[test]
    fn p3_middle_set_is_the_center() {
        let g = Graph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let m = compute_middle_sets(&p3_bd(), &g).unwrap();
        assert_eq!(m.mid(0), &[1]);
        assert_eq!(m.width(), 1);
    }

    #[test]
    fn c3_star_has_width_two() {
        let m = compute_middle_sets(&star3(), &c3()).unwrap();
        assert_eq!(m.mid(0), &[0, 1]);
        assert_eq!(m.mid(1), &[1, 2]);
        assert_eq!(m.mid(2), &[0, 2]);
        assert_eq!(m.width(), 2);
    }

    #[test]
    fn single_edge_has_width_zero() {
        let g = Graph::new(2, vec![(0, 1)]).unwrap();
        let bd = BranchDecomposition::single_leaf();
        assert_eq!(compute_middle_sets(&bd, &g).unwrap().width(), 0);
        assert!(bd.root().unwrap().is_degenerate());
    }

    #[test]
    fn rooting_adds_two_edges_and_an_empty_root_mid() {
        for (bd, g) in [(star3(), c3()), (p3_bd(), Graph::new(3, vec![(0, 1), (1, 2)]).unwrap())] {
            let r = bd.root().unwrap();
            assert_eq!(r.tree_edge_count(), bd.tree_edge_count() + 2);
            let view = r.rooted().unwrap();
            let m = compute_middle_sets(&r, &g).unwrap();
            assert!(m.mid(view.root_edge).is_empty());
            assert!(view.children[view.root_edge].is_some());
            assert_eq!(view.post_order.last(), Some(&view.root_edge));
            assert_eq!(m.width(), compute_middle_sets(&bd, &g).unwrap().width());
        }
    }

    #[test]
    fn invalid_trees_are_rejected() {
        let leaf = NodeKind::Leaf;
        assert!(BranchDecomposition::new(vec![leaf(0), leaf(0)], vec![[0, 1]], 1).is_err());
        assert!(BranchDecomposition::new(vec![leaf(0), leaf(1)], vec![], 2).is_err());
        assert!(BranchDecomposition::new(
            vec![NodeKind::Internal, leaf(0), leaf(1)],
            vec![[0, 1], [0, 2]],
            2
        )
        .is_err());
        let g = Graph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        assert!(compute_middle_sets(&star3(), &g).is_err());
    }

    #[test]
    fn text_round_trip() {
        let r = star3().root().unwrap();
        let m = compute_middle_sets(&r, &c3()).unwrap();
        let text = r.to_text(Some(&m));
        let (back, mids) = BranchDecomposition::parse_annotated(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(mids.len(), r.tree_edge_count());
        for (e, (a, b, vs)) in mids.iter().enumerate() {
            assert_eq!([*a, *b], r.tree_edge(e));
            assert_eq!(vs.as_slice(), m.mid(e));
        }
        assert!(BranchDecomposition::parse("bd 1\ntnode 0 leaf\n").is_err());
    }
}
