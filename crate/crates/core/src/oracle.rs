//! Brute-force ground truth for small instances.
//!
//! Two independent counting routes: injective edge-preserving maps divided
//! by the pattern's automorphism count, and explicit enumeration of vertex
//! and edge subsets checked for isomorphism.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::dp::Coloring;
use crate::graph::{Graph, Subgraph};
use crate::iso::{automorphism_count, pinned_isomorphic};

fn matrix(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.vertex_count();
    let mut m = vec![vec![false; n]; n];
    for &(u, v) in g.edges() {
        m[u][v] = true;
        m[v][u] = true;
    }
    m
}

/// Number of injective maps `V(P) -> V(G)` sending edges to edges (and, in
/// induced mode, non-edges to non-edges).
pub fn count_embeddings(host: &Graph, pattern: &Graph, induced: bool) -> u64 {
    let gm = matrix(host);
    let pm = matrix(pattern);
    let k = pattern.vertex_count();
    let mut map = vec![usize::MAX; k];
    let mut used = vec![false; host.vertex_count()];
    fn go(
        i: usize,
        gm: &[Vec<bool>],
        pm: &[Vec<bool>],
        induced: bool,
        map: &mut [usize],
        used: &mut [bool],
    ) -> u64 {
        if i == map.len() {
            return 1;
        }
        let mut total = 0;
        for w in 0..gm.len() {
            if used[w] {
                continue;
            }
            let ok = (0..i).all(|j| {
                let want = pm[i][j];
                let have = gm[w][map[j]];
                if induced {
                    want == have
                } else {
                    !want || have
                }
            });
            if !ok {
                continue;
            }
            map[i] = w;
            used[w] = true;
            total += go(i + 1, gm, pm, induced, map, used);
            used[w] = false;
        }
        total
    }
    go(0, &gm, &pm, induced, &mut map, &mut used)
}

/// Copies of `pattern` in `host` by embedding count over automorphisms.
pub fn brute_count(host: &Graph, pattern: &Graph, induced: bool) -> BigUint {
    let maps = count_embeddings(host, pattern, induced);
    let aut = automorphism_count(pattern);
    assert_eq!(maps % aut, 0, "embedding count {maps} is not a multiple of |Aut(P)| = {aut}");
    BigUint::from(maps / aut)
}

fn degree_signature(g: &Graph) -> Vec<usize> {
    let mut d: Vec<usize> = (0..g.vertex_count()).map(|v| g.degree(v)).collect();
    d.sort_unstable();
    d
}

/// Visits every `r`-subset of `0..n` as a sorted index list.
fn for_each_subset(n: usize, r: usize, f: &mut impl FnMut(&[usize])) {
    if r > n {
        return;
    }
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        f(&idx);
        let Some(i) = (0..r).rev().find(|&i| idx[i] != i + n - r) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Every subgraph of `host` isomorphic to `pattern` (induced subgraphs only
/// in induced mode), found by enumerating vertex and edge subsets.
pub fn brute_list(host: &Graph, pattern: &Graph, induced: bool) -> BTreeSet<Subgraph> {
    let k = pattern.vertex_count();
    let target_edges = pattern.edge_count();
    let signature = degree_signature(pattern);
    let mut out = BTreeSet::new();
    for_each_subset(host.vertex_count(), k, &mut |verts| {
        let inside: Vec<usize> = (0..host.edge_count())
            .filter(|&e| {
                let (u, v) = host.edge(e);
                verts.binary_search(&u).is_ok() && verts.binary_search(&v).is_ok()
            })
            .collect();
        let mut check = |edges: &[usize]| {
            let s = Subgraph::new(verts.to_vec(), edges.to_vec());
            let g = s.to_graph(host);
            if degree_signature(&g) == signature && pinned_isomorphic(&g, &[], pattern, &[]).expect("no pins") {
                out.insert(s);
            }
        };
        if induced {
            if inside.len() == target_edges {
                check(&inside);
            }
        } else {
            for_each_subset(inside.len(), target_edges, &mut |pick| {
                let edges: Vec<usize> = pick.iter().map(|&i| inside[i]).collect();
                check(&edges);
            });
        }
    });
    out
}

/// Copies of `pattern` that use every color of `coloring`.
pub fn brute_colorful_count(host: &Graph, coloring: &Coloring, pattern: &Graph, induced: bool) -> BigUint {
    let all = coloring.all();
    let n = brute_list(host, pattern, induced)
        .into_iter()
        .filter(|s| s.vertices.iter().fold(0u32, |a, &v| a | 1 << (coloring.color(v) - 1)) == all)
        .count();
    BigUint::from(n)
}

/// One equivalence class of subgraphs of `G_e`.
#[derive(Debug, Clone)]
pub struct OracleClass {
    pub graph: Graph,
    /// Per middle-set position, the class representative's vertex.
    pub pins: Vec<Option<usize>>,
    pub colors: u32,
    pub count: BigUint,
}

/// Groups every subgraph of the edge set `edges` of `host` with at most `k`
/// vertices by shape, pin placement on `mid` and color set. Vertices are
/// those incident with `edges`; in induced mode a subgraph takes every edge
/// of `edges` between its vertices.
pub fn brute_table(
    host: &Graph,
    edges: &[usize],
    mid: &[usize],
    coloring: &Coloring,
    k: usize,
    induced: bool,
) -> Vec<OracleClass> {
    let mut verts: Vec<usize> = edges.iter().flat_map(|&e| {
        let (u, v) = host.edge(e);
        [u, v]
    }).collect();
    verts.sort_unstable();
    verts.dedup();
    let mut classes: Vec<OracleClass> = Vec::new();
    for r in 0..=k.min(verts.len()) {
        for_each_subset(verts.len(), r, &mut |pick| {
            let chosen: Vec<usize> = pick.iter().map(|&i| verts[i]).collect();
            let inside: Vec<usize> = edges
                .iter()
                .copied()
                .filter(|&e| {
                    let (u, v) = host.edge(e);
                    chosen.binary_search(&u).is_ok() && chosen.binary_search(&v).is_ok()
                })
                .collect();
            let subsets: Vec<Vec<usize>> = if induced {
                vec![inside.clone()]
            } else {
                (0..1u64 << inside.len())
                    .map(|mask| (0..inside.len()).filter(|&i| mask >> i & 1 == 1).map(|i| inside[i]).collect())
                    .collect()
            };
            let colors = chosen.iter().fold(0u32, |a, &v| a | 1 << (coloring.color(v) - 1));
            let pins: Vec<Option<usize>> = mid.iter().map(|v| chosen.binary_search(v).ok()).collect();
            for es in subsets {
                let g = Subgraph::new(chosen.clone(), es).to_graph(host);
                let labeled: Vec<(u32, usize)> = pins
                    .iter()
                    .enumerate()
                    .filter_map(|(p, v)| v.map(|v| (p as u32, v)))
                    .collect();
                let found = classes.iter_mut().find(|c| {
                    c.colors == colors
                        && c.pins.iter().map(Option::is_some).eq(pins.iter().map(Option::is_some))
                        && c.graph.vertex_count() == g.vertex_count()
                        && c.graph.edge_count() == g.edge_count()
                        && {
                            let theirs: Vec<(u32, usize)> = c
                                .pins
                                .iter()
                                .enumerate()
                                .filter_map(|(p, v)| v.map(|v| (p as u32, v)))
                                .collect();
                            pinned_isomorphic(&c.graph, &theirs, &g, &labeled).expect("same pin labels")
                        }
                });
                match found {
                    Some(c) => c.count += 1u32,
                    None => classes.push(OracleClass {
                        graph: g,
                        pins: pins.clone(),
                        colors,
                        count: BigUint::from(1u32),
                    }),
                }
            }
        });
    }
    classes
}

/// `C(n, r)` as a big integer.
pub fn binomial(n: usize, r: usize) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigUint::from(1u32);
    for i in 0..r {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Convenience for tests that want a machine integer.
pub fn to_u64(x: &BigUint) -> u64 {
    x.to_u64().expect("count fits in u64")
}
