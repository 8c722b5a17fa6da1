use super::{Dart, Map};
use crate::error::{Error, Result};

/// A closed walk bounding one face, as its cyclic dart sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacialWalk {
    pub darts: Vec<Dart>,
}

impl FacialWalk {
    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }
}

/// All facial walks of a map plus the face index of every dart.
#[derive(Debug, Clone)]
pub struct Faces {
    pub walks: Vec<FacialWalk>,
    face_of: Vec<usize>,
}

impl Faces {
    pub fn count(&self) -> usize {
        self.walks.len()
    }

    pub fn face_of(&self, d: Dart) -> usize {
        self.face_of[d.index()]
    }
}

impl Map {
    /// Traces every face by following face successors, starting each new walk
    /// at the lowest-index unvisited dart. An edgeless map has one empty face.
    pub fn trace_faces(&self) -> Faces {
        let mut face_of = vec![usize::MAX; self.dart_count()];
        let mut walks = Vec::new();
        for start in 0..self.dart_count() {
            if face_of[start] != usize::MAX {
                continue;
            }
            let id = walks.len();
            let mut darts = Vec::new();
            let mut d = Dart::from_index(start);
            while face_of[d.index()] == usize::MAX {
                face_of[d.index()] = id;
                darts.push(d);
                d = self.face_successor(d);
            }
            walks.push(FacialWalk { darts });
        }
        if walks.is_empty() {
            walks.push(FacialWalk { darts: Vec::new() });
        }
        Faces { walks, face_of }
    }

    pub fn face_count(&self) -> usize {
        self.trace_faces().count()
    }

    /// Euler genus from `n - m + f = 2 - 2g`.
    pub fn genus(&self) -> Result<usize> {
        euler_genus(self.vertex_count(), self.edge_count(), self.face_count())
    }
}

pub(crate) fn euler_genus(n: usize, m: usize, f: usize) -> Result<usize> {
    let twice = 2 + m as i64 - n as i64 - f as i64;
    if twice < 0 || twice % 2 != 0 {
        return Err(Error::InvalidRotation(format!(
            "n={n} m={m} f={f} gives a non-integral or negative genus"
        )));
    }
    Ok((twice / 2) as usize)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    fn walk_lengths(m: &Map) -> Vec<usize> {
        let mut v: Vec<usize> = m.trace_faces().walks.iter().map(FacialWalk::len).collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn cycle_has_two_faces() {
        assert_eq!(walk_lengths(&cycle(3)), vec![3, 3]);
        assert_eq!(cycle(3).genus().unwrap(), 0);
    }

    #[test]
    fn single_edge_has_one_face_of_length_two() {
        assert_eq!(walk_lengths(&k2()), vec![2]);
        assert_eq!(k2().genus().unwrap(), 0);
    }

    #[test]
    fn planar_k4_has_four_triangles() {
        assert_eq!(walk_lengths(&k4()), vec![3, 3, 3, 3]);
        assert_eq!(k4().genus().unwrap(), 0);
    }

    #[test]
    fn walks_partition_the_darts() {
        let m = k4();
        let faces = m.trace_faces();
        let total: usize = faces.walks.iter().map(FacialWalk::len).sum();
        assert_eq!(total, m.dart_count());
        for (i, w) in faces.walks.iter().enumerate() {
            for (j, &d) in w.darts.iter().enumerate() {
                assert_eq!(faces.face_of(d), i);
                assert_eq!(m.face_successor(d), w.darts[(j + 1) % w.len()]);
            }
        }
    }

    #[test]
    fn genus_rejects_impossible_counts() {
        assert!(euler_genus(3, 3, 3).is_err());
        assert!(euler_genus(4, 3, 2).is_err());
        assert_eq!(euler_genus(5, 10, 5).unwrap(), 1);
    }
}
