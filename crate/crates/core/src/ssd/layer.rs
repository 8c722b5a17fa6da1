//! Layer graphs: the part of a host between two BFS layers, with everything
//! above the top layer contracted into a single apex vertex.

use crate::decomp::{BranchDecomposition, NodeKind};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::map::{Dart, LayerStructure, Map};

/// The layer graph `H` for a window `i..=j` of BFS layers.
#[derive(Debug, Clone)]
pub struct LayerGraph {
    /// The embedded graph `H`. Window vertices come first (ordered by layer),
    /// the apex is the last vertex. Window edges come first, apex edges last.
    pub map: Map,
    pub apex: usize,
    /// Edges of `H` incident with the apex.
    pub apex_edges: Vec<usize>,
    /// `H` minus the apex: the subgraph induced by the window layers.
    pub window: Graph,
    /// Window vertex to host vertex.
    pub vertex_of: Vec<usize>,
    /// Window edge to host edge.
    pub edge_of: Vec<usize>,
    /// Layer of each window vertex, relative to `i`.
    pub layer: Vec<usize>,
}

/// Builds layer graphs for one host and BFS layering. The apex rotation for
/// every window comes from a single walk around the BFS tree, which is the
/// rotation that contracting the tree above the window would produce.
pub struct LayerGraphBuilder<'a> {
    map: &'a Map,
    layers: &'a LayerStructure,
    /// `down[i]`: darts from layer `i - 1` to their BFS children in layer
    /// `i`, in the order the tree walk meets them.
    down: Vec<Vec<Dart>>,
    local: Vec<usize>,
    local_edge: Vec<usize>,
}

impl<'a> LayerGraphBuilder<'a> {
    pub fn new(map: &'a Map, layers: &'a LayerStructure) -> Self {
        let n = map.vertex_count();
        let is_tree = |d: Dart| {
            layers.parent[map.tail(d)] == Some(d) || layers.parent[map.head(d)] == Some(d.reverse())
        };
        let mut down = vec![Vec::new(); layers.layers.len()];
        if let Some(start) = map.rotation_from_lowest(layers.root).find(|&d| is_tree(d)) {
            let mut d = start;
            loop {
                let child = map.head(d);
                if layers.parent[child] == Some(d.reverse()) {
                    down[layers.depth[child]].push(d);
                }
                let mut x = map.rotation_next(d.reverse());
                while !is_tree(x) {
                    x = map.rotation_next(x);
                }
                d = x;
                if d == start {
                    break;
                }
            }
        }
        LayerGraphBuilder {
            map,
            layers,
            down,
            local: vec![usize::MAX; n],
            local_edge: vec![usize::MAX; map.edge_count()],
        }
    }

    pub fn layers(&self) -> &LayerStructure {
        self.layers
    }

    /// The layer graph for layers `i..=j`.
    pub fn build(&mut self, i: usize, j: usize) -> Result<LayerGraph> {
        let d = self.layers.eccentricity();
        if i > j || j > d {
            return Err(Error::InvalidArgument(format!("window {i}..={j} outside layers 0..={d}")));
        }
        let map = self.map;
        let mut vertex_of = Vec::new();
        let mut layer = Vec::new();
        for x in i..=j {
            for &v in &self.layers.layers[x] {
                self.local[v] = vertex_of.len();
                vertex_of.push(v);
                layer.push(x - i);
            }
        }
        let apex = vertex_of.len();
        let mut ends = Vec::new();
        let mut edge_of = Vec::new();
        for &v in &vertex_of {
            for &dart in map.rotation(v) {
                let w = map.head(dart);
                if dart.slot() == 0 && self.local[w] != usize::MAX {
                    self.local_edge[dart.edge()] = ends.len();
                    ends.push([self.local[v], self.local[w]]);
                    edge_of.push(dart.edge());
                }
            }
        }
        let window_edges = ends.len();
        let window = Graph::new(apex, ends.iter().map(|&[a, b]| (a, b)).collect())
            .expect("window edges join window vertices");

        // apex edge per top-layer vertex, slot 0 at the apex
        let mut apex_edge_of_top = Vec::new();
        if i == 0 {
            apex_edge_of_top.push((self.layers.root, ends.len()));
            ends.push([apex, self.local[self.layers.root]]);
        } else {
            for &dd in &self.down[i] {
                let child = map.head(dd);
                apex_edge_of_top.push((child, ends.len()));
                ends.push([apex, self.local[child]]);
            }
        }
        let apex_edges: Vec<usize> = (window_edges..ends.len()).collect();

        let mut apex_edge_at = vec![usize::MAX; apex];
        if i > 0 {
            for &(top, e) in &apex_edge_of_top {
                apex_edge_at[self.local[top]] = e;
            }
        }
        let mut rotation = Vec::with_capacity(apex + 1);
        for (lv, &v) in vertex_of.iter().enumerate() {
            let mut rot = Vec::with_capacity(map.degree(v) + 1);
            if i == 0 && v == self.layers.root {
                rot.push(Dart::new(window_edges, 1));
            }
            for &dart in map.rotation(v) {
                let w = map.head(dart);
                if self.local[w] != usize::MAX {
                    let e = self.local_edge[dart.edge()];
                    rot.push(Dart::new(e, usize::from(ends[e][0] != lv)));
                } else if i > 0 && layer[lv] == 0 && self.layers.parent[v] == Some(dart) {
                    rot.push(Dart::new(apex_edge_at[lv], 1));
                }
            }
            rotation.push(rot);
        }
        rotation.push(apex_edges.iter().map(|&e| Dart::new(e, 0)).collect());

        for &v in &vertex_of {
            self.local[v] = usize::MAX;
        }
        for &e in &edge_of {
            self.local_edge[e] = usize::MAX;
        }
        let map = Map::new(apex + 1, ends, rotation)?;
        Ok(LayerGraph {
            map,
            apex,
            apex_edges,
            window,
            vertex_of,
            edge_of,
            layer,
        })
    }
}

/// One-off layer graph construction.
pub fn build_layer_graph(map: &Map, layers: &LayerStructure, i: usize, j: usize) -> Result<LayerGraph> {
    LayerGraphBuilder::new(map, layers).build(i, j)
}

/// Drops the leaves for edges `e` with `keep(e) = None`, renames the rest,
/// and suppresses the internal nodes left with degree 2.
pub fn restrict_decomposition(
    bd: &BranchDecomposition,
    keep: impl Fn(usize) -> Option<usize>,
    kept_edges: usize,
) -> Result<BranchDecomposition> {
    let count = bd.node_count();
    if kept_edges == 0 {
        return Ok(BranchDecomposition::empty());
    }
    let mut adj: Vec<Vec<usize>> = (0..count).map(|x| bd.neighbors(x).iter().map(|&(y, _)| y).collect()).collect();
    let mut alive = vec![true; count];
    let mut kinds: Vec<NodeKind> = bd.kinds().to_vec();
    let mut work: Vec<usize> = Vec::new();
    for (x, kind) in kinds.iter_mut().enumerate() {
        match *kind {
            NodeKind::Leaf(e) => match keep(e) {
                Some(new) => *kind = NodeKind::Leaf(new),
                None => work.push(x),
            },
            NodeKind::Root => {
                return Err(Error::InvalidArgument("restriction expects an unrooted decomposition".into()));
            }
            NodeKind::Internal => {}
        }
    }
    let detach = |x: usize, adj: &mut Vec<Vec<usize>>, alive: &mut Vec<bool>| {
        alive[x] = false;
        for y in std::mem::take(&mut adj[x]) {
            adj[y].retain(|&z| z != x);
        }
    };
    while let Some(x) = work.pop() {
        if !alive[x] {
            continue;
        }
        let nbrs = adj[x].clone();
        detach(x, &mut adj, &mut alive);
        for y in nbrs {
            if alive[y] && kinds[y] == NodeKind::Internal && adj[y].len() <= 1 {
                work.push(y);
            }
        }
    }
    // suppress internal nodes of degree 2
    for x in 0..count {
        if alive[x] && kinds[x] == NodeKind::Internal && adj[x].len() == 2 {
            let (a, b) = (adj[x][0], adj[x][1]);
            alive[x] = false;
            adj[x].clear();
            for (p, q) in [(a, b), (b, a)] {
                let slot = adj[p].iter().position(|&z| z == x).expect("symmetric adjacency");
                adj[p][slot] = q;
            }
        }
    }
    let mut index = vec![usize::MAX; count];
    let mut new_kinds = Vec::new();
    for x in (0..count).filter(|&x| alive[x]) {
        index[x] = new_kinds.len();
        new_kinds.push(kinds[x]);
    }
    let mut tree_edges = Vec::new();
    for x in (0..count).filter(|&x| alive[x]) {
        for &y in &adj[x] {
            if x < y {
                tree_edges.push([index[x], index[y]]);
            }
        }
    }
    BranchDecomposition::new(new_kinds, tree_edges, kept_edges)
}

impl LayerGraph {
    /// Restricts a decomposition of `H` to the window graph.
    pub fn restrict(&self, bd: &BranchDecomposition) -> Result<BranchDecomposition> {
        let window_edges = self.window.edge_count();
        restrict_decomposition(bd, |e| (e < window_edges).then_some(e), window_edges)
    }
}
