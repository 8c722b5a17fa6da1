//! Surface split decompositions of embedded graphs.
//!
//! The host is tripled (two parallel copies around every edge), its radial
//! graph gets a BFS tree `T_S` from the root, and the faces of the radial
//! graph get a spanning tree `T*` across edges outside `T_S`. Each radial
//! face holds exactly one edge of the tripled map, so `T*` is a tree on the
//! edges; the second stage trims it into a branch decomposition of the
//! original edges.

pub mod layer;

use std::collections::{BTreeSet, VecDeque};

pub use layer::{build_layer_graph, restrict_decomposition, LayerGraph, LayerGraphBuilder};

use crate::decomp::{compute_middle_sets, BranchDecomposition, MiddleSets, NodeKind, SsdCertificate};
use crate::error::{Error, Result};
use crate::map::{Dart, EdgeKind, Map, RadialGraph};

/// `⌊(2g+1)(4d+3)/2⌋`, the width guaranteed for genus `g` and root
/// eccentricity `d`.
pub fn width_bound(genus: usize, ecc: usize) -> usize {
    (2 * genus + 1) * (4 * ecc + 3) / 2
}

/// Output of the first stage on a tripled map.
#[derive(Debug, Clone)]
pub struct FirstStage {
    pub radial: RadialGraph,
    /// Per radial edge: whether it belongs to the BFS tree `T_S`.
    pub in_bfs_tree: Vec<bool>,
    /// Edges of `T*` as `(face, face, crossed radial edge)`.
    pub cotree: Vec<(usize, usize, usize)>,
    /// Radial edges in neither tree; `T_S^+` is `T_S` plus these.
    pub leftover: Vec<usize>,
}

/// Runs the first stage on `tripled` (the output of
/// [`Map::triple_edges`]) rooted at original vertex `root`.
pub fn first_stage(tripled: &Map, root: usize) -> Result<FirstStage> {
    if root >= tripled.vertex_count() {
        return Err(Error::InvalidArgument(format!("root {root} out of range")));
    }
    let radial = tripled.radial()?;
    let rmap = &radial.map;
    let mut in_bfs_tree = vec![false; rmap.edge_count()];
    let layers = rmap.bfs_layers(root);
    for d in layers.parent.iter().flatten() {
        in_bfs_tree[d.edge()] = true;
    }

    let faces = &radial.faces;
    let mut reached = vec![false; faces.count()];
    let mut crossed = vec![false; rmap.edge_count()];
    let mut cotree = Vec::with_capacity(faces.count().saturating_sub(1));
    let mut queue = VecDeque::from([0]);
    reached[0] = true;
    while let Some(f) = queue.pop_front() {
        for &d in &faces.walks[f].darts {
            let e = d.edge();
            if in_bfs_tree[e] {
                continue;
            }
            let g = faces.face_of(d.reverse());
            if !reached[g] {
                reached[g] = true;
                crossed[e] = true;
                cotree.push((f, g, e));
                queue.push_back(g);
            }
        }
    }
    if reached.contains(&false) {
        return Err(Error::Internal("faces outside the BFS tree are not connected".into()));
    }
    let leftover: Vec<usize> = (0..rmap.edge_count())
        .filter(|&e| !in_bfs_tree[e] && !crossed[e])
        .collect();
    let genus = tripled.genus()?;
    if leftover.len() != 2 * genus {
        return Err(Error::Internal(format!(
            "{} edges outside both trees, expected 2g = {}",
            leftover.len(),
            2 * genus
        )));
    }
    Ok(FirstStage {
        radial,
        in_bfs_tree,
        cotree,
        leftover,
    })
}

/// Result of the second stage.
#[derive(Debug, Clone)]
pub struct SecondStage {
    pub bd: BranchDecomposition,
    /// Radial face each node came from; `None` for pendant leaves.
    pub node_face: Vec<Option<usize>>,
    /// For every radial face, the node whose region absorbed it.
    pub face_owner: Vec<usize>,
    /// Pendant leaves and the face of the edge they carry.
    pub pendants: Vec<(usize, usize)>,
}

/// Trims `T*` into a branch decomposition whose leaves are the original
/// edges of the tripled map.
pub fn second_stage(stage: &FirstStage, tripled: &Map) -> Result<SecondStage> {
    let radial = &stage.radial;
    let count = radial.faces.count();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); count];
    for &(a, b, _) in &stage.cotree {
        adj[a].push(b);
        adj[b].push(a);
    }
    let is_new = |f: usize| tripled.edge_kind(radial.edge_of_face(f)) == EdgeKind::New;
    let mut alive = vec![true; count];
    // absorbed[f] = neighbor that took over face f's region
    let mut absorbed: Vec<Option<usize>> = vec![None; count];
    let mut work: BTreeSet<usize> = (0..count).filter(|&f| is_new(f) && adj[f].len() <= 2).collect();
    while let Some(x) = work.pop_first() {
        if !alive[x] {
            continue;
        }
        match adj[x].len() {
            0 => {
                alive[x] = false;
            }
            1 => {
                let y = adj[x][0];
                alive[x] = false;
                absorbed[x] = Some(y);
                adj[x].clear();
                adj[y].retain(|&z| z != x);
                if is_new(y) && adj[y].len() <= 2 {
                    work.insert(y);
                }
            }
            2 => {
                let (a, b) = (adj[x][0], adj[x][1]);
                alive[x] = false;
                absorbed[x] = Some(a);
                adj[x].clear();
                for (p, q) in [(a, b), (b, a)] {
                    let slot = adj[p].iter().position(|&z| z == x).expect("tree adjacency is symmetric");
                    adj[p][slot] = q;
                }
            }
            _ => {}
        }
    }

    let mut node_of = vec![usize::MAX; count];
    let mut kinds = Vec::new();
    let mut node_face = Vec::new();
    for f in (0..count).filter(|&f| alive[f]) {
        node_of[f] = kinds.len();
        node_face.push(Some(f));
        let deg = adj[f].len();
        if is_new(f) {
            if deg != 3 {
                return Err(Error::Internal(format!("new-edge node {f} ends with degree {deg}")));
            }
            kinds.push(NodeKind::Internal);
        } else {
            match deg {
                0 | 1 => kinds.push(NodeKind::Leaf(radial.edge_of_face(f))),
                2 => kinds.push(NodeKind::Internal),
                _ => {
                    return Err(Error::Internal(format!(
                        "original-edge node {f} has degree {deg}, at most 2 expected"
                    )))
                }
            }
        }
    }
    let mut tree_edges = Vec::new();
    for f in (0..count).filter(|&f| alive[f]) {
        for &g in &adj[f] {
            if f < g {
                tree_edges.push([node_of[f], node_of[g]]);
            }
        }
    }
    let mut pendants = Vec::new();
    for f in (0..count).filter(|&f| alive[f] && !is_new(f) && adj[f].len() == 2) {
        let leaf = kinds.len();
        kinds.push(NodeKind::Leaf(radial.edge_of_face(f)));
        node_face.push(None);
        tree_edges.push([node_of[f], leaf]);
        pendants.push((leaf, f));
    }
    let original = tripled.kinds().iter().filter(|k| **k == EdgeKind::Original).count();
    let bd = BranchDecomposition::new(kinds, tree_edges, original)
        .map_err(|e| Error::Internal(format!("second stage produced an invalid tree: {e}")))?;

    let mut face_owner = vec![usize::MAX; count];
    let mut chain = Vec::new();
    for f in 0..count {
        let mut g = f;
        while face_owner[g] == usize::MAX {
            match absorbed[g] {
                Some(next) => {
                    chain.push(g);
                    g = next;
                }
                None => {
                    face_owner[g] = node_of[g];
                    break;
                }
            }
        }
        let owner = face_owner[g];
        for h in chain.drain(..) {
            face_owner[h] = owner;
        }
    }
    if face_owner.contains(&usize::MAX) {
        return Err(Error::Internal("a face was absorbed by a deleted node".into()));
    }
    Ok(SecondStage {
        bd,
        node_face,
        face_owner,
        pendants,
    })
}

fn build_certificate(stage: &SecondStage) -> SsdCertificate {
    let bd = &stage.bd;
    let faces = stage.face_owner.len();
    let mut by_node: Vec<Vec<u32>> = vec![Vec::new(); bd.node_count()];
    for f in 0..faces {
        by_node[stage.face_owner[f]].push(f as u32);
    }
    let pendant_face: Vec<Option<usize>> = {
        let mut p = vec![None; bd.node_count()];
        for &(leaf, f) in &stage.pendants {
            p[leaf] = Some(f);
        }
        p
    };
    let mut sides = Vec::with_capacity(bd.tree_edge_count());
    let mut mark = vec![false; bd.node_count()];
    for e in 0..bd.tree_edge_count() {
        let [a, b] = bd.tree_edge(e);
        if let Some(f) = pendant_face[a].or(pendant_face[b]) {
            let single = vec![f as u32];
            let rest: Vec<u32> = (0..faces as u32).filter(|&g| g as usize != f).collect();
            sides.push(if pendant_face[a].is_some() { [single, rest] } else { [rest, single] });
            continue;
        }
        mark.fill(false);
        let mut stack = vec![a];
        mark[a] = true;
        while let Some(x) = stack.pop() {
            for &(y, t) in bd.neighbors(x) {
                if t != e && !mark[y] {
                    mark[y] = true;
                    stack.push(y);
                }
            }
        }
        let mut side_a = Vec::new();
        let mut side_b = Vec::new();
        for f in 0..faces {
            if mark[stage.face_owner[f]] {
                side_a.push(f as u32);
            } else {
                side_b.push(f as u32);
            }
        }
        sides.push([side_a, side_b]);
    }
    SsdCertificate {
        sides,
        node_face: stage.node_face.clone(),
    }
}

/// A constructed decomposition with everything needed to check it.
#[derive(Debug, Clone)]
pub struct Ssd {
    /// Unrooted decomposition whose leaves carry host edge ids.
    pub bd: BranchDecomposition,
    pub mids: MiddleSets,
    pub genus: usize,
    pub eccentricity: usize,
    /// `None` for edgeless hosts.
    pub certificate: Option<SsdCertificate>,
    pub first_stage: Option<FirstStage>,
}

impl Ssd {
    pub fn width(&self) -> usize {
        self.mids.width()
    }

    pub fn bound(&self) -> usize {
        width_bound(self.genus, self.eccentricity)
    }
}

/// Builds a surface split decomposition of a simple map from root `root`,
/// with its middle sets and certificate.
pub fn construct_ssd(map: &Map, root: usize) -> Result<Ssd> {
    if root >= map.vertex_count() {
        return Err(Error::InvalidArgument(format!("root {root} out of range")));
    }
    if !map.is_simple() {
        return Err(Error::Unsupported("surface split decompositions need a simple host".into()));
    }
    let genus = map.genus()?;
    let eccentricity = map.bfs_layers(root).eccentricity();
    let host = map.underlying();
    if map.edge_count() == 0 {
        return Ok(Ssd {
            bd: BranchDecomposition::empty(),
            mids: compute_middle_sets(&BranchDecomposition::empty(), &host)?,
            genus,
            eccentricity,
            certificate: None,
            first_stage: None,
        });
    }
    let tripled = map.triple_edges();
    let first = first_stage(&tripled, root)?;
    let second = second_stage(&first, &tripled)?;
    let certificate = build_certificate(&second);
    let mids = compute_middle_sets(&second.bd, &host)?;
    Ok(Ssd {
        bd: second.bd,
        mids,
        genus,
        eccentricity,
        certificate: Some(certificate),
        first_stage: Some(first),
    })
}

/// The decomposition alone, skipping certificate bookkeeping. Hosts with at
/// most one edge get the trivial decomposition directly.
pub fn decompose(map: &Map, root: usize) -> Result<BranchDecomposition> {
    match map.edge_count() {
        0 => Ok(BranchDecomposition::empty()),
        1 => Ok(BranchDecomposition::single_leaf()),
        _ => {
            let tripled = map.triple_edges();
            let first = first_stage(&tripled, root)?;
            Ok(second_stage(&first, &tripled)?.bd)
        }
    }
}

/// Faces of the radial graph on either side of radial edge `e`.
pub fn radial_edge_faces(radial: &RadialGraph, e: usize) -> [usize; 2] {
    [
        radial.faces.face_of(Dart::new(e, 0)),
        radial.faces.face_of(Dart::new(e, 1)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::verify_certificate;
    use crate::generators;

    #[test]
    fn planar_input_has_no_leftover() {
        for m in [generators::cycle(3), generators::planar_k4(), generators::grid(3, 3)] {
            let first = first_stage(&m.triple_edges(), 0).unwrap();
            assert!(first.leftover.is_empty());
        }
    }

    #[test]
    fn toroidal_k5_leaves_two_edges() {
        let first = first_stage(&generators::toroidal_k5().triple_edges(), 0).unwrap();
        assert_eq!(first.leftover.len(), 2);
    }

    #[test]
    fn cotree_spans_the_radial_faces() {
        let first = first_stage(&generators::path(2).triple_edges(), 0).unwrap();
        assert_eq!(first.cotree.len(), first.radial.faces.count() - 1);
    }

    #[test]
    fn single_edge_gives_one_leaf() {
        let ssd = construct_ssd(&generators::path(2), 0).unwrap();
        assert!(ssd.bd.is_degenerate());
        assert_eq!(ssd.width(), 0);
    }

    #[test]
    fn path_on_three_vertices() {
        let ssd = construct_ssd(&generators::path(3), 0).unwrap();
        assert_eq!(ssd.bd.host_edge_count(), 2);
        assert_eq!(ssd.width(), 1);
    }

    #[test]
    fn triangle_width() {
        for r in 0..3 {
            let ssd = construct_ssd(&generators::cycle(3), r).unwrap();
            assert!(ssd.width() <= 3);
            assert_eq!(ssd.width(), 2);
        }
    }

    #[test]
    fn toroidal_k5_within_bound() {
        let k5 = generators::toroidal_k5();
        for r in 0..5 {
            let ssd = construct_ssd(&k5, r).unwrap();
            assert_eq!(ssd.bound(), 10);
            assert!(ssd.width() <= 10);
        }
    }

    #[test]
    fn certificates_verify() {
        for m in [
            generators::cycle(3),
            generators::planar_k4(),
            generators::grid(3, 4),
            generators::toroidal_k5(),
            generators::toroidal_k33(),
            generators::wheel(6),
        ] {
            let ssd = construct_ssd(&m, 0).unwrap();
            let radial = &ssd.first_stage.as_ref().unwrap().radial;
            assert!(verify_certificate(&ssd.bd, ssd.certificate.as_ref().unwrap(), radial).unwrap());
        }
    }

    #[test]
    fn moving_a_host_edge_face_breaks_the_certificate() {
        let ssd = construct_ssd(&generators::cycle(3), 0).unwrap();
        let radial = &ssd.first_stage.as_ref().unwrap().radial;
        let mut cert = ssd.certificate.clone().unwrap();
        let f = radial.face_of_edge(0) as u32;
        let e = 0;
        let from = usize::from(!cert.sides[e][0].contains(&f));
        cert.sides[e][from].retain(|&g| g != f);
        cert.sides[e][1 - from].push(f);
        cert.sides[e][1 - from].sort_unstable();
        assert!(!verify_certificate(&ssd.bd, &cert, radial).unwrap());
    }

    #[test]
    fn a_disconnected_side_breaks_the_certificate() {
        let ssd = construct_ssd(&generators::cycle(3), 0).unwrap();
        let radial = &ssd.first_stage.as_ref().unwrap().radial;
        let cert = ssd.certificate.clone().unwrap();
        let host_faces: Vec<u32> = (0..3).map(|e| radial.face_of_edge(e) as u32).collect();
        let mut found = false;
        for e in 0..cert.sides.len() {
            for &f in &cert.sides[e][1] {
                if host_faces.contains(&f) || cert.sides[e][1].len() == 1 {
                    continue;
                }
                let touches_a = (0..radial.map.edge_count()).any(|re| {
                    let [x, y] = radial_edge_faces(radial, re);
                    (x == f as usize && cert.sides[e][0].contains(&(y as u32)))
                        || (y == f as usize && cert.sides[e][0].contains(&(x as u32)))
                });
                if touches_a {
                    continue;
                }
                let mut bad = cert.clone();
                bad.sides[e][1].retain(|&g| g != f);
                bad.sides[e][0].push(f);
                bad.sides[e][0].sort_unstable();
                assert!(!verify_certificate(&ssd.bd, &bad, radial).unwrap());
                found = true;
            }
        }
        assert!(found);
    }

    #[test]
    fn non_simple_hosts_are_rejected() {
        let doubled = generators::path(2).triple_edges();
        assert!(construct_ssd(&doubled, 0).is_err());
    }
}
