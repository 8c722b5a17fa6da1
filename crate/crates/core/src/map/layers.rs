use super::{Dart, Map};

/// Breadth-first layering from a root vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerStructure {
    pub root: usize,
    /// `layers[i]` holds the vertices at distance `i`, in discovery order.
    pub layers: Vec<Vec<usize>>,
    pub depth: Vec<usize>,
    /// For each non-root vertex, its dart pointing to the BFS parent.
    pub parent: Vec<Option<Dart>>,
}

impl LayerStructure {
    pub fn eccentricity(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn layer_of(&self, v: usize) -> usize {
        self.depth[v]
    }
}

impl Map {
    /// BFS from `root`. Each vertex scans its rotation starting at its
    /// lowest-index dart, so the tree is determined by the map alone.
    pub fn bfs_layers(&self, root: usize) -> LayerStructure {
        assert!(root < self.vertex_count(), "root {root} out of range");
        let n = self.vertex_count();
        let mut depth = vec![usize::MAX; n];
        let mut parent = vec![None; n];
        let mut order = Vec::with_capacity(n);
        depth[root] = 0;
        order.push(root);
        let mut head = 0;
        while head < order.len() {
            let u = order[head];
            head += 1;
            for d in self.rotation_from_lowest(u) {
                let w = self.head(d);
                if depth[w] == usize::MAX {
                    depth[w] = depth[u] + 1;
                    parent[w] = Some(d.reverse());
                    order.push(w);
                }
            }
        }
        let ecc = depth.iter().copied().max().unwrap_or(0);
        let mut layers = vec![Vec::new(); ecc + 1];
        for &v in &order {
            layers[depth[v]].push(v);
        }
        LayerStructure {
            root,
            layers,
            depth,
            parent,
        }
    }

    /// The rotation of `v` read cyclically from its lowest-index dart.
    pub fn rotation_from_lowest(&self, v: usize) -> impl Iterator<Item = Dart> + '_ {
        let rot = self.rotation(v);
        let start = rot
            .iter()
            .enumerate()
            .min_by_key(|(_, d)| d.index())
            .map_or(0, |(i, _)| i);
        (0..rot.len()).map(move |i| rot[(start + i) % rot.len()])
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;

    fn sizes(l: &super::LayerStructure) -> Vec<usize> {
        l.layers.iter().map(Vec::len).collect()
    }

    #[test]
    fn star_from_center() {
        let l = star(3).bfs_layers(0);
        assert_eq!(l.eccentricity(), 1);
        assert_eq!(sizes(&l), vec![1, 3]);
    }

    #[test]
    fn path_from_an_end() {
        let l = path(3).bfs_layers(0);
        assert_eq!(l.eccentricity(), 2);
        assert_eq!(sizes(&l), vec![1, 1, 1]);
    }

    #[test]
    fn five_cycle_from_every_root() {
        let c5 = cycle(5);
        for r in 0..5 {
            let l = c5.bfs_layers(r);
            assert_eq!(sizes(&l), vec![1, 2, 2]);
            for v in 0..5 {
                if v != r {
                    let p = l.parent[v].unwrap();
                    assert_eq!(c5.tail(p), v);
                    assert_eq!(l.depth[c5.head(p)] + 1, l.depth[v]);
                }
            }
        }
    }
}
