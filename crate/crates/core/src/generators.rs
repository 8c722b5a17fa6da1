//! Embedded test hosts: fixed maps with known genus and randomized families.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::map::Map;

/// Rotation system from a straight-line drawing: neighbors sorted by angle.
pub fn from_drawing(points: &[(f64, f64)], edges: &[(usize, usize)]) -> Map {
    let mut orders = vec![Vec::new(); points.len()];
    for &(u, v) in edges {
        orders[u].push(v);
        orders[v].push(u);
    }
    for (u, nbrs) in orders.iter_mut().enumerate() {
        let (x, y) = points[u];
        nbrs.sort_by(|&a, &b| {
            let ta = (points[a].1 - y).atan2(points[a].0 - x);
            let tb = (points[b].1 - y).atan2(points[b].0 - x);
            ta.total_cmp(&tb)
        });
    }
    Map::from_neighbor_orders(&orders).expect("drawing describes a connected simple graph")
}

pub fn cycle(n: usize) -> Map {
    let pts: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / n as f64;
            (t.cos(), t.sin())
        })
        .collect();
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    from_drawing(&pts, &edges)
}

pub fn path(n: usize) -> Map {
    let pts: Vec<(f64, f64)> = (0..n).map(|i| (i as f64, 0.0)).collect();
    let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    from_drawing(&pts, &edges)
}

/// `w x h` grid; vertex `(x, y)` has id `y * w + x`.
pub fn grid(w: usize, h: usize) -> Map {
    let mut pts = Vec::with_capacity(w * h);
    let mut edges = Vec::new();
    for y in 0..h {
        for x in 0..w {
            pts.push((x as f64, y as f64));
            let id = y * w + x;
            if x + 1 < w {
                edges.push((id, id + 1));
            }
            if y + 1 < h {
                edges.push((id, id + w));
            }
        }
    }
    from_drawing(&pts, &edges)
}

/// Wheel with `rim` spokes; the hub is vertex 0.
pub fn wheel(rim: usize) -> Map {
    let mut pts = vec![(0.0, 0.0)];
    let mut edges = Vec::new();
    for i in 0..rim {
        let t = std::f64::consts::TAU * i as f64 / rim as f64;
        pts.push((t.cos(), t.sin()));
        edges.push((0, i + 1));
        edges.push((i + 1, (i + 1) % rim + 1));
    }
    from_drawing(&pts, &edges)
}

pub fn planar_k4() -> Map {
    let pts = [(0.0, 0.0), (4.0, 0.0), (2.0, 3.0), (2.0, 1.0)];
    let edges = [(0, 1), (1, 2), (0, 2), (0, 3), (1, 3), (2, 3)];
    from_drawing(&pts, &edges)
}

pub fn cube() -> Map {
    let pts = [
        (-2.0, -2.0),
        (2.0, -2.0),
        (2.0, 2.0),
        (-2.0, 2.0),
        (-1.0, -1.0),
        (1.0, -1.0),
        (1.0, 1.0),
        (-1.0, 1.0),
    ];
    let mut edges = Vec::new();
    for i in 0..4 {
        edges.push((i, (i + 1) % 4));
        edges.push((4 + i, 4 + (i + 1) % 4));
        edges.push((i, i + 4));
    }
    from_drawing(&pts, &edges)
}

/// K5 on the torus: vertex `i` sees `i+1, i+2, i+4, i+3` (mod 5) in order.
pub fn toroidal_k5() -> Map {
    let orders: Vec<Vec<usize>> = (0..5)
        .map(|i| [1, 2, 4, 3].iter().map(|o| (i + o) % 5).collect())
        .collect();
    Map::from_neighbor_orders(&orders).expect("valid K5 rotation")
}

/// K3,3 on the torus with parts `{0,1,2}` and `{3,4,5}`.
pub fn toroidal_k33() -> Map {
    let orders = vec![
        vec![3, 4, 5],
        vec![4, 5, 3],
        vec![5, 3, 4],
        vec![0, 1, 2],
        vec![1, 2, 0],
        vec![2, 0, 1],
    ];
    Map::from_neighbor_orders(&orders).expect("valid K3,3 rotation")
}

/// `w x h` grid wrapped onto the torus (`w, h >= 3`). `diagonal(x, y)`
/// picks the diagonal of square `(x, y)`: `Some(true)` joins `(x,y)` to
/// `(x+1,y+1)`, `Some(false)` joins `(x+1,y)` to `(x,y+1)`.
pub fn torus_grid(w: usize, h: usize, mut diagonal: impl FnMut(usize, usize) -> Option<bool>) -> Map {
    assert!(w >= 3 && h >= 3, "torus grids need both sides at least 3");
    let id = |x: i64, y: i64| (y.rem_euclid(h as i64) as usize) * w + x.rem_euclid(w as i64) as usize;
    // neighbor offsets per vertex, ordered by angle in the universal cover
    let mut offsets: Vec<Vec<(i64, i64)>> = vec![vec![(1, 0), (0, 1), (-1, 0), (0, -1)]; w * h];
    for y in 0..h as i64 {
        for x in 0..w as i64 {
            match diagonal(x as usize, y as usize) {
                Some(true) => {
                    offsets[id(x, y)].push((1, 1));
                    offsets[id(x + 1, y + 1)].push((-1, -1));
                }
                Some(false) => {
                    offsets[id(x + 1, y)].push((-1, 1));
                    offsets[id(x, y + 1)].push((1, -1));
                }
                None => {}
            }
        }
    }
    let orders: Vec<Vec<usize>> = (0..w * h)
        .map(|v| {
            let (x, y) = ((v % w) as i64, (v / w) as i64);
            let mut offs = offsets[v].clone();
            offs.sort_by(|a, b| {
                (a.1 as f64)
                    .atan2(a.0 as f64)
                    .total_cmp(&(b.1 as f64).atan2(b.0 as f64))
            });
            offs.iter().map(|&(dx, dy)| id(x + dx, y + dy)).collect()
        })
        .collect();
    Map::from_neighbor_orders(&orders).expect("torus grid is simple for sides >= 3")
}

/// Renames vertices by `perm` (old id to new id), keeping the embedding.
pub fn relabel(map: &Map, perm: &[usize]) -> Map {
    let mut orders = vec![Vec::new(); map.vertex_count()];
    for v in 0..map.vertex_count() {
        orders[perm[v]] = map.rotation(v).iter().map(|&d| perm[map.head(d)]).collect();
    }
    Map::from_neighbor_orders(&orders).expect("relabeling a simple map")
}

/// Deletes up to `count` random edges, skipping any whose removal would
/// disconnect the map.
pub fn delete_random_edges<R: Rng>(map: Map, count: usize, rng: &mut R) -> Map {
    let mut map = map;
    for _ in 0..count {
        if map.edge_count() <= 1 {
            break;
        }
        let e = rng.gen_range(0..map.edge_count());
        if let Ok(edited) = map.delete_edge(e) {
            map = edited.map;
        }
    }
    map
}

fn shuffled_ids<R: Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    perm
}

/// A random planar map: a triangulated grid with random diagonals, thinned by
/// random edge deletions and randomly relabeled.
pub fn random_planar<R: Rng>(max_n: usize, rng: &mut R) -> Map {
    loop {
        let w = rng.gen_range(2..=max_n.min(7));
        let h = rng.gen_range(1..=(max_n / w).max(1));
        if w * h < 3 || w * h > max_n {
            continue;
        }
        let mut pts = Vec::new();
        let mut edges = Vec::new();
        for y in 0..h {
            for x in 0..w {
                pts.push((x as f64, y as f64));
                let id = y * w + x;
                if x + 1 < w {
                    edges.push((id, id + 1));
                }
                if y + 1 < h {
                    edges.push((id, id + w));
                }
                if x + 1 < w && y + 1 < h {
                    match rng.gen_range(0..3) {
                        0 => edges.push((id, id + w + 1)),
                        1 => edges.push((id + 1, id + w)),
                        _ => {}
                    }
                }
            }
        }
        let map = from_drawing(&pts, &edges);
        let cut = rng.gen_range(0..=map.edge_count() / 2);
        let map = delete_random_edges(map, cut, rng);
        let perm = shuffled_ids(map.vertex_count(), rng);
        return relabel(&map, &perm);
    }
}

/// A random map of genus at most one: a torus grid with random diagonals,
/// thinned and relabeled.
pub fn random_toroidal<R: Rng>(max_n: usize, rng: &mut R) -> Map {
    assert!(max_n >= 9, "torus grids need at least 9 vertices");
    loop {
        let w = rng.gen_range(3..=max_n / 3);
        let h = rng.gen_range(3..=max_n / 3);
        if w * h > max_n {
            continue;
        }
        let map = torus_grid(w, h, |_, _| match rng.gen_range(0..3) {
            0 => Some(true),
            1 => Some(false),
            _ => None,
        });
        let cut = rng.gen_range(0..=map.edge_count() / 3);
        let map = delete_random_edges(map, cut, rng);
        let perm = shuffled_ids(map.vertex_count(), rng);
        return relabel(&map, &perm);
    }
}

/// A random connected simple graph with `n` vertices and `n - 1 + extra`
/// edges under a uniformly random rotation system, resampled until its genus
/// is at most `max_genus`.
pub fn random_surface<R: Rng>(n: usize, extra: usize, max_genus: usize, rng: &mut R) -> Map {
    assert!(n >= 2);
    loop {
        let mut edges = std::collections::BTreeSet::new();
        for v in 1..n {
            let u = rng.gen_range(0..v);
            edges.insert((u, v));
        }
        let target = (n - 1 + extra).min(n * (n - 1) / 2);
        while edges.len() < target {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u != v {
                edges.insert((u.min(v), u.max(v)));
            }
        }
        let mut orders = vec![Vec::new(); n];
        for &(u, v) in &edges {
            orders[u].push(v);
            orders[v].push(u);
        }
        for o in orders.iter_mut() {
            o.shuffle(rng);
        }
        let perm = shuffled_ids(n, rng);
        let mut relabeled = vec![Vec::new(); n];
        for (v, o) in orders.into_iter().enumerate() {
            relabeled[perm[v]] = o.into_iter().map(|w| perm[w]).collect();
        }
        let map = Map::from_neighbor_orders(&relabeled).expect("random tree plus chords is connected");
        if map.genus().expect("rotation systems always have a genus") <= max_genus {
            return map;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn fixed_maps_have_expected_genus() {
        assert_eq!(cube().genus().unwrap(), 0);
        assert_eq!(cube().face_count(), 6);
        assert_eq!(toroidal_k5().genus().unwrap(), 1);
        assert_eq!(toroidal_k5().face_count(), 5);
        assert_eq!(toroidal_k33().genus().unwrap(), 1);
        assert_eq!(toroidal_k33().face_count(), 3);
        assert_eq!(planar_k4().genus().unwrap(), 0);
        assert_eq!(grid(5, 4).genus().unwrap(), 0);
        assert_eq!(wheel(7).genus().unwrap(), 0);
        assert_eq!(cycle(6).genus().unwrap(), 0);
        assert_eq!(torus_grid(3, 4, |_, _| None).genus().unwrap(), 1);
        assert_eq!(torus_grid(4, 3, |x, y| Some((x + y) % 2 == 0)).genus().unwrap(), 1);
    }

    #[test]
    fn random_families_respect_their_genus() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..30 {
            let p = random_planar(14, &mut rng);
            assert!(p.vertex_count() <= 14 && p.is_simple());
            assert_eq!(p.genus().unwrap(), 0);
            let t = random_toroidal(14, &mut rng);
            assert!(t.genus().unwrap() <= 1 && t.is_simple());
            let s = random_surface(10, 4, 2, &mut rng);
            assert!(s.genus().unwrap() <= 2);
        }
    }
}
