//! Plain (non-embedded) graphs: patterns, host views and concrete subgraphs.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};

/// An undirected graph with explicit edge ids. Loops and parallel edges are
/// representable; [`Graph::is_simple`] reports whether any are present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<(usize, usize)>>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for (id, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge {id} ({u}, {v}) references a vertex outside 0..{n}"
                )));
            }
            adj[u].push((v, id));
            if u != v {
                adj[v].push((u, id));
            }
        }
        Ok(Graph { n, edges, adj })
    }

    /// Like [`Graph::new`] but rejects loops and parallel edges.
    pub fn simple(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let g = Graph::new(n, edges)?;
        if !g.is_simple() {
            return Err(Error::InvalidArgument(
                "graph must be simple (no loops or parallel edges)".into(),
            ));
        }
        Ok(g)
    }

    pub fn empty() -> Self {
        Graph {
            n: 0,
            edges: Vec::new(),
            adj: Vec::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }

    /// Neighbors of `v` paired with the connecting edge id.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = HashSet::with_capacity(self.edges.len());
        self.edges
            .iter()
            .all(|&(u, v)| u != v && seen.insert((u.min(v), u.max(v))))
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let (a, b) = if self.adj[u].len() <= self.adj[v].len() {
            (u, v)
        } else {
            (v, u)
        };
        self.adj[a].iter().any(|&(w, _)| w == b)
    }

    /// Connected components as sorted vertex lists, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut head = 0;
            while head < members.len() {
                let u = members[head];
                head += 1;
                for &(w, _) in &self.adj[u] {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// Subgraph induced by `vertices`, relabeled to `0..vertices.len()` in the
    /// given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|&(u, v)| (index[u], index[v]))
            .collect();
        Graph::new(vertices.len(), edges).expect("induced edges are in range")
    }

    /// Parses the pattern text format: `graph <n> <m>` followed by `m` lines
    /// `edge <u> <v>`. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, strip_comment(l)))
            .filter(|(_, l)| !l.is_empty());
        let (hl, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing `graph <n> <m>` header"))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 3 || h[0] != "graph" {
            return Err(Error::parse(hl, "expected `graph <n> <m>`"));
        }
        let n = parse_num(h[1], hl)?;
        let m = parse_num(h[2], hl)?;
        let mut edges = Vec::with_capacity(m);
        for (ln, line) in lines {
            let t: Vec<&str> = line.split_whitespace().collect();
            if t.len() != 3 || t[0] != "edge" {
                return Err(Error::parse(ln, "expected `edge <u> <v>`"));
            }
            let u = parse_num(t[1], ln)?;
            let v = parse_num(t[2], ln)?;
            if u >= n || v >= n {
                return Err(Error::parse(ln, format!("vertex out of range 0..{n}")));
            }
            if u == v {
                return Err(Error::parse(ln, "loops are not allowed in patterns"));
            }
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(Error::parse(
                hl,
                format!("header declares {m} edges, found {}", edges.len()),
            ));
        }
        Graph::simple(n, edges).map_err(|e| Error::parse(hl, e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("graph {} {}\n", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            s.push_str(&format!("edge {u} {v}\n"));
        }
        s
    }
}

pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => line[..i].trim(),
        None => line.trim(),
    }
}

pub(crate) fn parse_num(tok: &str, line: usize) -> Result<usize> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("expected a nonnegative integer, got `{tok}`")))
}

/// A concrete subgraph of a host: sorted vertex ids and sorted edge ids.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Subgraph {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl Subgraph {
    pub fn new(mut vertices: Vec<usize>, mut edges: Vec<usize>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        edges.sort_unstable();
        edges.dedup();
        Subgraph { vertices, edges }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Union of two subgraphs of the same host.
    pub fn union(&self, other: &Subgraph) -> Subgraph {
        Subgraph {
            vertices: merge_sorted(&self.vertices, &other.vertices),
            edges: merge_sorted(&self.edges, &other.edges),
        }
    }

    /// The subgraph as a standalone graph on `0..vertices.len()`.
    pub fn to_graph(&self, host: &Graph) -> Graph {
        let edges = self
            .edges
            .iter()
            .map(|&e| {
                let (u, v) = host.edge(e);
                let iu = self.vertices.binary_search(&u).expect("edge endpoint in subgraph");
                let iv = self.vertices.binary_search(&v).expect("edge endpoint in subgraph");
                (iu, iv)
            })
            .collect();
        Graph::new(self.vertices.len(), edges).expect("endpoints in range")
    }
}

impl fmt::Display for Subgraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "iso V:")?;
        for v in &self.vertices {
            write!(f, " {v}")?;
        }
        write!(f, " E:")?;
        for e in &self.edges {
            write!(f, " {e}")?;
        }
        Ok(())
    }
}

pub(crate) fn merge_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}
