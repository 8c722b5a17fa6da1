use super::{Dart, Faces, Map};
use crate::error::{Error, Result};

/// The dual map. Dual vertex `i` is primal face `i`; dual edge `e` crosses
/// primal edge `e`, and dual dart `d` is the primal dart `d` seen from the
/// face it bounds.
#[derive(Debug, Clone)]
pub struct DualMap {
    pub map: Map,
    pub primal_faces: Faces,
}

/// The vertex-face incidence graph. Vertices `0..n` are the original
/// vertices, `n + i` is the vertex placed in face `i`. Radial edge `d` joins
/// the tail of primal dart `d` to the face that dart bounds.
#[derive(Debug, Clone)]
pub struct RadialGraph {
    pub map: Map,
    pub original_count: usize,
    pub primal_faces: Faces,
    /// Faces of the radial map itself.
    pub faces: Faces,
    edge_face: Vec<usize>,
    face_edge: Vec<usize>,
}

impl RadialGraph {
    pub fn is_face_vertex(&self, v: usize) -> bool {
        v >= self.original_count
    }

    /// The radial vertex placed in primal face `face`.
    pub fn face_vertex(&self, face: usize) -> usize {
        self.original_count + face
    }

    /// The radial face containing primal edge `edge`.
    pub fn face_of_edge(&self, edge: usize) -> usize {
        self.edge_face[edge]
    }

    /// The primal edge inside radial face `face`.
    pub fn edge_of_face(&self, face: usize) -> usize {
        self.face_edge[face]
    }

    /// The radial edge for primal dart `d`.
    pub fn edge_of_dart(&self, d: Dart) -> usize {
        d.index()
    }
}

impl Map {
    pub fn dual(&self) -> DualMap {
        let faces = self.trace_faces();
        let ends = (0..self.edge_count())
            .map(|e| [faces.face_of(Dart::new(e, 0)), faces.face_of(Dart::new(e, 1))])
            .collect();
        let rotation = faces.walks.iter().map(|w| w.darts.clone()).collect();
        let map = Map::with_kinds(faces.count(), ends, rotation, self.kinds.clone())
            .expect("the dual of a connected map is a connected map");
        DualMap {
            map,
            primal_faces: faces,
        }
    }

    pub fn radial(&self) -> Result<RadialGraph> {
        if self.edge_count() == 0 {
            return Err(Error::Unsupported("the radial graph of an edgeless map is disconnected".into()));
        }
        let n = self.vertex_count();
        let faces = self.trace_faces();
        let ends = (0..self.dart_count())
            .map(|d| {
                let d = Dart::from_index(d);
                [self.tail(d), n + faces.face_of(d)]
            })
            .collect();
        let mut rotation: Vec<Vec<Dart>> = (0..n)
            .map(|v| self.rotation(v).iter().map(|d| Dart::new(d.index(), 0)).collect())
            .collect();
        for w in &faces.walks {
            rotation.push(w.darts.iter().rev().map(|d| Dart::new(d.index(), 1)).collect());
        }
        let map = Map::new(n + faces.count(), ends, rotation)?;
        let rfaces = map.trace_faces();
        let mut face_edge = vec![usize::MAX; rfaces.count()];
        let mut edge_face = Vec::with_capacity(self.edge_count());
        for e in 0..self.edge_count() {
            let anchor = self.rotation_next(Dart::new(e, 0));
            let f = rfaces.face_of(Dart::new(anchor.index(), 0));
            debug_assert_eq!(
                f,
                rfaces.face_of(Dart::new(self.rotation_next(Dart::new(e, 1)).index(), 0))
            );
            if face_edge[f] != usize::MAX {
                return Err(Error::Internal(format!("radial face {f} holds two primal edges")));
            }
            face_edge[f] = e;
            edge_face.push(f);
        }
        if rfaces.count() != self.edge_count() {
            return Err(Error::Internal("radial faces are not in bijection with edges".into()));
        }
        Ok(RadialGraph {
            map,
            original_count: n,
            primal_faces: faces,
            faces: rfaces,
            edge_face,
            face_edge,
        })
    }
}
