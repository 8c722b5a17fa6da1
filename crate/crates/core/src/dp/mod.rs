//! Table dynamic program over a rooted branch decomposition.
//!
//! The table of tree edge `e` holds one entry per equivalence class of
//! subgraphs of `G_e` with at most `k` vertices: the subgraph's shape `H`,
//! where the middle-set vertices of `e` sit in it (`pins`), the colors it
//! uses, and how many subgraphs fall in the class.

mod listing;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

pub use listing::{Cell, ListArena, ListId};

use crate::decomp::{compute_middle_sets, BranchDecomposition, MiddleSets, NodeKind, Rooted};
use crate::error::{Error, Result};
use crate::graph::{parse_num, strip_comment, Graph, Subgraph};
use crate::iso::{canonical_small, pinned_isomorphic, SmallGraph, SMALL_GRAPH_MAX};

/// Vertex colors `1..=q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    colors: Vec<u8>,
    q: usize,
}

impl Coloring {
    pub fn new(colors: Vec<u8>, q: usize) -> Result<Self> {
        if q == 0 || q > 32 {
            return Err(Error::InvalidArgument(format!("color count {q} outside 1..=32")));
        }
        if let Some(v) = colors.iter().position(|&c| c == 0 || c as usize > q) {
            return Err(Error::InvalidArgument(format!("vertex {v} has color {} outside 1..={q}", colors[v])));
        }
        Ok(Coloring { colors, q })
    }

    /// Parses `color <v> <c>` lines for a host with `n` vertices. Every
    /// vertex needs exactly one line; `q` is the largest color used.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let mut colors = vec![0u8; n];
        for (i, raw) in text.lines().enumerate() {
            let ln = i + 1;
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let t: Vec<&str> = line.split_whitespace().collect();
            if t.len() != 3 || t[0] != "color" {
                return Err(Error::parse(ln, "expected `color <v> <c>`"));
            }
            let v = parse_num(t[1], ln)?;
            let c = parse_num(t[2], ln)?;
            if v >= n {
                return Err(Error::parse(ln, format!("vertex out of range 0..{n}")));
            }
            if c == 0 || c > 32 {
                return Err(Error::parse(ln, format!("color {c} outside 1..=32")));
            }
            if colors[v] != 0 {
                return Err(Error::parse(ln, format!("vertex {v} colored twice")));
            }
            colors[v] = c as u8;
        }
        if let Some(v) = colors.iter().position(|&c| c == 0) {
            return Err(Error::InvalidArgument(format!("vertex {v} has no color")));
        }
        let q = colors.iter().copied().max().unwrap_or(1) as usize;
        Coloring::new(colors, q)
    }

    /// Every vertex gets color 1.
    pub fn uniform(n: usize) -> Self {
        Coloring { colors: vec![1; n], q: 1 }
    }

    pub fn color(&self, v: usize) -> u8 {
        self.colors[v]
    }

    pub fn colors(&self) -> &[u8] {
        &self.colors
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    /// Bit set of all colors.
    pub fn all(&self) -> u32 {
        color_range(self.q)
    }

    pub(crate) fn bit(&self, v: usize) -> u32 {
        1 << (self.colors[v] - 1)
    }
}

fn color_range(q: usize) -> u32 {
    if q >= 32 {
        u32::MAX
    } else {
        (1u32 << q) - 1
    }
}

/// One table entry. `pins[p]` is the vertex of `graph` that middle-set
/// vertex `p` (by position in the sorted middle set) maps to, if any.
/// `colors` is a bit set with bit `c - 1` for color `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub graph: SmallGraph,
    pub pins: Vec<Option<u8>>,
    pub colors: u32,
    pub count: BigUint,
}

impl Entry {
    /// No edges and every vertex pinned at one of `positions`.
    fn covered_by_pins(&self, positions: &[usize]) -> bool {
        self.graph.edge_count() == 0
            && positions.iter().filter(|&&p| self.pins[p].is_some()).count() == self.graph.vertex_count()
    }
}

/// Where an entry came from, kept when listing needs to retrace it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    /// A concrete subgraph of the single leaf edge, in host ids.
    Leaf(Subgraph),
    /// Indices into the two child tables.
    Pair(u32, u32),
}

/// Colors in the high half, interned canonical form in the low half.
type Key = u64;

fn make_key(colors: u32, form: u32) -> Key {
    (u64::from(colors) << 32) | u64::from(form)
}

/// Canonical forms keyed by exact structure, shared across a whole run.
/// Distinct canonical forms are interned as small integers.
#[derive(Default)]
pub struct Canonizer {
    exact: FxHashMap<Box<[u32]>, u32>,
    forms: FxHashMap<Vec<u8>, u32>,
    scratch: Vec<u32>,
}

impl Canonizer {
    fn form(&mut self, masks: &[u32], pins: &[Option<u8>]) -> u32 {
        self.scratch.clear();
        self.scratch.push(masks.len() as u32);
        self.scratch.extend_from_slice(masks);
        self.scratch.extend(pins.iter().map(|p| p.map_or(0, |v| u32::from(v) + 1)));
        if let Some(&id) = self.exact.get(self.scratch.as_slice()) {
            return id;
        }
        let mut labels = vec![None; masks.len()];
        for (p, v) in pins.iter().enumerate() {
            if let Some(v) = v {
                labels[*v as usize] = Some(p as u32);
            }
        }
        let form = canonical_small(&SmallGraph::from_masks(masks.to_vec()), &labels);
        let next = self.forms.len() as u32;
        let id = *self.forms.entry(form).or_insert(next);
        self.exact.insert(self.scratch.clone().into_boxed_slice(), id);
        id
    }

    fn key(&mut self, entry: &Entry) -> Key {
        make_key(entry.colors, self.form(entry.graph.masks(), &entry.pins))
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub entries: Vec<Entry>,
    /// Per entry, every way it was produced (filled only when recording).
    pub origins: Vec<Vec<Origin>>,
    index: FxHashMap<Key, u32>,
}

impl Table {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn insert(&mut self, canon: &mut Canonizer, entry: Entry, origin: Option<Origin>) {
        let key = canon.key(&entry);
        let count = entry.count.clone();
        self.add(key, count, || entry, origin);
    }

    /// Adds `count` to the entry under `key`, creating it with `make` first
    /// if the key is new.
    fn add(&mut self, key: Key, count: BigUint, make: impl FnOnce() -> Entry, origin: Option<Origin>) {
        match self.index.get(&key) {
            Some(&i) => {
                self.entries[i as usize].count += count;
                if let Some(o) = origin {
                    self.origins[i as usize].push(o);
                }
            }
            None => {
                self.index.insert(key, self.entries.len() as u32);
                let mut entry = make();
                entry.count = count;
                self.entries.push(entry);
                self.origins.push(origin.into_iter().collect());
            }
        }
    }

    /// The entry for an unpinned graph using exactly the colors `colors`.
    pub fn find_unpinned(&self, canon: &mut Canonizer, pattern: &Graph, colors: u32) -> Option<usize> {
        if pattern.vertex_count() > SMALL_GRAPH_MAX {
            return None;
        }
        let g = SmallGraph::from_graph(pattern);
        let key = make_key(colors, canon.form(g.masks(), &[]));
        self.index.get(&key).map(|&i| i as usize)
    }
}

/// Switches for a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DpOptions {
    /// Leave out subgraphs that miss an edge between two of their vertices.
    pub induced: bool,
    /// Drop entries with more edges or a larger maximum degree than the
    /// pattern allows.
    pub prune: bool,
    /// Keep every table and entry origins for listing and inspection.
    pub record: bool,
}

impl Default for DpOptions {
    fn default() -> Self {
        DpOptions {
            induced: false,
            prune: true,
            record: false,
        }
    }
}

/// Size limits an entry must respect to grow into a pattern copy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limits {
    pub k: usize,
    pub max_edges: usize,
    pub max_degree: usize,
    /// Vertex count of the largest pattern component.
    pub max_component: usize,
    /// Canonical forms of the pattern's components with their
    /// multiplicities; empty when shapes are not checked.
    pub shapes: Vec<(Vec<u8>, usize)>,
}

impl Limits {
    pub fn for_pattern(p: &Graph) -> Self {
        let mut shapes: Vec<(Vec<u8>, usize)> = Vec::new();
        let mut max_component = 0;
        for comp in p.components() {
            max_component = max_component.max(comp.len());
            let form = canonical_small(&SmallGraph::from_graph(&p.induced(&comp)), &vec![None; comp.len()]);
            match shapes.iter_mut().find(|s| s.0 == form) {
                Some(s) => s.1 += 1,
                None => shapes.push((form, 1)),
            }
        }
        Limits {
            k: p.vertex_count(),
            max_edges: p.edge_count(),
            max_degree: p.max_degree(),
            max_component,
            shapes,
        }
    }

    /// Only the vertex bound.
    pub fn vertices(k: usize) -> Self {
        Limits {
            k,
            max_edges: usize::MAX,
            max_degree: usize::MAX,
            max_component: usize::MAX,
            shapes: Vec::new(),
        }
    }

    fn admits(&self, masks: &[u32], prune: bool) -> bool {
        if masks.len() > self.k {
            return false;
        }
        if !prune {
            return true;
        }
        let mut degree_sum = 0;
        for m in masks {
            let d = m.count_ones() as usize;
            if d > self.max_degree {
                return false;
            }
            degree_sum += d;
        }
        degree_sum / 2 <= self.max_edges
    }

    /// Component checks: no component outgrows the largest pattern
    /// component, and a component without pinned vertices, which can no
    /// longer change, must be one of the pattern's components.
    fn admits_components(&self, masks: &[u32], pins: &[Option<u8>], canon: &mut Canonizer) -> bool {
        if self.max_component == usize::MAX && self.shapes.is_empty() {
            return true;
        }
        let pinned = pins.iter().flatten().fold(0u32, |acc, &v| acc | 1 << v);
        let mut left: u32 = if masks.len() >= 32 { u32::MAX } else { (1u32 << masks.len()) - 1 };
        let mut used = [0usize; SMALL_GRAPH_MAX];
        while left != 0 {
            let mut comp = 1u32 << left.trailing_zeros();
            let mut frontier = comp;
            while frontier != 0 {
                let v = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let fresh = masks[v] & !comp;
                comp |= fresh;
                frontier |= fresh;
            }
            left &= !comp;
            let size = comp.count_ones() as usize;
            if size > self.max_component {
                return false;
            }
            if comp & pinned == 0 && !self.shapes.is_empty() {
                let mut verts = [0usize; SMALL_GRAPH_MAX];
                let mut len = 0;
                let mut rest = comp;
                while rest != 0 {
                    verts[len] = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    len += 1;
                }
                let mut sub = [0u32; SMALL_GRAPH_MAX];
                for (i, &v) in verts[..len].iter().enumerate() {
                    for (j, &w) in verts[..len].iter().enumerate() {
                        if masks[v] >> w & 1 == 1 {
                            sub[i] |= 1 << j;
                        }
                    }
                }
                let form = canon.form(&sub[..len], &[]);
                match self.shapes.iter().position(|s| canon.forms.get(&s.0) == Some(&form)) {
                    Some(i) if used[i] < self.shapes[i].1 => used[i] += 1,
                    _ => return false,
                }
            }
        }
        true
    }
}

/// The table of a single host edge `xy` whose tree edge has middle set `mid`.
pub fn init_leaf_table(
    edge: (usize, usize),
    edge_id: usize,
    mid: &[usize],
    coloring: &Coloring,
    limits: &Limits,
    options: DpOptions,
    canon: &mut Canonizer,
) -> Table {
    let (x, y) = edge;
    let mut table = Table::default();
    let mut add = |verts: &[usize], with_edge: bool| {
        let mut graph = SmallGraph::with_vertices(verts.len());
        if with_edge {
            graph.add_edge(0, 1);
        }
        if !limits.admits(graph.masks(), options.prune) {
            return;
        }
        let pins = mid
            .iter()
            .map(|v| verts.iter().position(|w| w == v).map(|i| i as u8))
            .collect();
        let colors = verts.iter().fold(0, |acc, &v| acc | coloring.bit(v));
        let entry = Entry {
            graph,
            pins,
            colors,
            count: BigUint::one(),
        };
        if options.prune && !limits.admits_components(entry.graph.masks(), &entry.pins, canon) {
            return;
        }
        let origin = options
            .record
            .then(|| Origin::Leaf(Subgraph::new(verts.to_vec(), if with_edge { vec![edge_id] } else { Vec::new() })));
        table.insert(canon, entry, origin);
    };
    add(&[], false);
    add(&[x], false);
    add(&[y], false);
    if !options.induced {
        add(&[x, y], false);
    }
    add(&[x, y], true);
    table
}

/// Nil patterns agree on the vertices both middle sets contain.
pub fn entries_compatible(tf: &Entry, tg: &Entry, mid_f: &[usize], mid_g: &[usize]) -> bool {
    shared_positions(mid_f, mid_g)
        .iter()
        .all(|&(pf, pg)| tf.pins[pf].is_some() == tg.pins[pg].is_some())
}

/// Combines two compatible entries of sibling tables into an entry for the
/// parent edge with middle set `mid_e`.
pub fn combine(tf: &Entry, tg: &Entry, mid_f: &[usize], mid_g: &[usize], mid_e: &[usize]) -> Entry {
    let plan = MergePlan::new(mid_f, mid_g, mid_e);
    plan.combine(tf, tg)
}

/// Whether two entries of one table describe equivalent classes: same
/// colors, same nil pattern, and a pinned isomorphism between the graphs.
pub fn entries_equivalent(t1: &Entry, t2: &Entry) -> bool {
    if t1.colors != t2.colors || t1.graph.vertex_count() != t2.graph.vertex_count() || t1.pins.len() != t2.pins.len() {
        return false;
    }
    if t1.graph.edge_count() != t2.graph.edge_count() {
        return false;
    }
    for (a, b) in t1.pins.iter().zip(&t2.pins) {
        match (a, b) {
            (None, None) => {}
            (Some(a), Some(b)) => {
                if t1.graph.degree(*a as usize) != t2.graph.degree(*b as usize) {
                    return false;
                }
            }
            _ => return false,
        }
    }
    let pins = |t: &Entry| -> Vec<(u32, usize)> {
        t.pins
            .iter()
            .enumerate()
            .filter_map(|(p, v)| v.map(|v| (p as u32, v as usize)))
            .collect()
    };
    pinned_isomorphic(&t1.graph.to_graph(), &pins(t1), &t2.graph.to_graph(), &pins(t2))
        .expect("entries of one table share pin labels")
}

fn shared_positions(mid_f: &[usize], mid_g: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < mid_f.len() && j < mid_g.len() {
        match mid_f[i].cmp(&mid_g[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push((i, j));
                i += 1;
                j += 1;
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy)]
enum Side {
    F(usize),
    G(usize),
}

/// Position bookkeeping for one parent edge, computed once per node.
struct MergePlan {
    shared: Vec<(usize, usize)>,
    out: Vec<Side>,
}

impl MergePlan {
    fn new(mid_f: &[usize], mid_g: &[usize], mid_e: &[usize]) -> Self {
        let out = mid_e
            .iter()
            .map(|v| match mid_f.binary_search(v) {
                Ok(p) => Side::F(p),
                Err(_) => Side::G(mid_g.binary_search(v).expect("parent middle set lies in the children's")),
            })
            .collect();
        MergePlan {
            shared: shared_positions(mid_f, mid_g),
            out,
        }
    }

    fn signature_f(&self, e: &Entry) -> u64 {
        self.shared
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &(pf, _))| acc | (u64::from(e.pins[pf].is_some()) << (i % 64)))
    }

    fn signature_g(&self, e: &Entry) -> u64 {
        self.shared
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &(_, pg))| acc | (u64::from(e.pins[pg].is_some()) << (i % 64)))
    }

    fn compatible(&self, tf: &Entry, tg: &Entry) -> bool {
        self.shared
            .iter()
            .all(|&(pf, pg)| tf.pins[pf].is_some() == tg.pins[pg].is_some())
    }

    /// Vertex count of the combination, before building it.
    fn merged_size(&self, tf: &Entry, tg: &Entry) -> usize {
        let identified = self.shared.iter().filter(|&&(pf, _)| tf.pins[pf].is_some()).count();
        tf.graph.vertex_count() + tg.graph.vertex_count() - identified
    }

    /// Writes the combined adjacency into `adj` and the parent pins into
    /// `pins`; returns the vertex count.
    fn combine_into(&self, tf: &Entry, tg: &Entry, adj: &mut [u32; SMALL_GRAPH_MAX], pins: &mut Vec<Option<u8>>) -> usize {
        let nf = tf.graph.vertex_count();
        let ng = tg.graph.vertex_count();
        let mut map_g = [u8::MAX; SMALL_GRAPH_MAX];
        for &(pf, pg) in &self.shared {
            if let (Some(a), Some(b)) = (tf.pins[pf], tg.pins[pg]) {
                map_g[b as usize] = a;
            }
        }
        let mut next = nf as u8;
        for slot in map_g.iter_mut().take(ng) {
            if *slot == u8::MAX {
                *slot = next;
                next += 1;
            }
        }
        let n = next as usize;
        adj[..nf].copy_from_slice(tf.graph.masks());
        adj[nf..n].fill(0);
        for (u, &mask) in tg.graph.masks().iter().enumerate() {
            let mu = map_g[u] as usize;
            let mut rest = mask;
            while rest != 0 {
                let w = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                adj[mu] |= 1 << map_g[w];
            }
        }
        pins.clear();
        pins.extend(self.out.iter().map(|s| match *s {
            Side::F(p) => tf.pins[p],
            Side::G(p) => tg.pins[p].map(|u| map_g[u as usize]),
        }));
        n
    }

    fn combine(&self, tf: &Entry, tg: &Entry) -> Entry {
        let mut adj = [0u32; SMALL_GRAPH_MAX];
        let mut pins = Vec::new();
        let n = self.combine_into(tf, tg, &mut adj, &mut pins);
        Entry {
            graph: SmallGraph::from_masks(adj[..n].to_vec()),
            pins,
            colors: tf.colors | tg.colors,
            count: &tf.count * &tg.count,
        }
    }
}

/// Work counters for one update or a whole run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DpStats {
    /// Compatible pairs examined.
    pub pairs: u64,
    pub max_table: usize,
    pub tables: usize,
}

/// Combines the tables of two sibling edges into the table of their parent.
#[allow(clippy::too_many_arguments)]
pub fn update_step(
    table_f: &Table,
    table_g: &Table,
    mid_f: &[usize],
    mid_g: &[usize],
    mid_e: &[usize],
    limits: &Limits,
    options: DpOptions,
    canon: &mut Canonizer,
    stats: &mut DpStats,
) -> Table {
    let plan = MergePlan::new(mid_f, mid_g, mid_e);
    let mut buckets: FxHashMap<u64, Vec<u32>> = FxHashMap::default();
    for (b, e) in table_g.entries.iter().enumerate() {
        buckets.entry(plan.signature_g(e)).or_default().push(b as u32);
    }
    let mut out = Table::default();
    let mut adj = [0u32; SMALL_GRAPH_MAX];
    let mut pins = Vec::with_capacity(mid_e.len());
    for (a, ef) in table_f.entries.iter().enumerate() {
        let Some(partners) = buckets.get(&plan.signature_f(ef)) else {
            continue;
        };
        for &b in partners {
            let eg = &table_g.entries[b as usize];
            if plan.shared.len() > 64 && !plan.compatible(ef, eg) {
                continue;
            }
            stats.pairs += 1;
            if plan.merged_size(ef, eg) > limits.k {
                continue;
            }
            let n = plan.combine_into(ef, eg, &mut adj, &mut pins);
            let masks = &adj[..n];
            if !limits.admits(masks, options.prune) || (options.prune && !limits.admits_components(masks, &pins, canon)) {
                continue;
            }
            let colors = ef.colors | eg.colors;
            let key = make_key(colors, canon.form(masks, &pins));
            let make = || Entry {
                graph: SmallGraph::from_masks(masks.to_vec()),
                pins: pins.clone(),
                colors,
                count: BigUint::zero(),
            };
            out.add(key, &ef.count * &eg.count, make, options.record.then_some(Origin::Pair(a as u32, b)));
        }
    }
    stats.max_table = stats.max_table.max(out.len());
    stats.tables += 1;
    out
}

/// A prepared decomposition: rooted, with middle sets, ready for runs.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub bd: BranchDecomposition,
    pub rooted: Option<Rooted>,
    pub mids: MiddleSets,
}

impl Prepared {
    /// Roots an unrooted decomposition of `host` and computes middle sets.
    pub fn new(host: &Graph, bd: &BranchDecomposition) -> Result<Self> {
        let bd = if bd.root_node().is_some() { bd.clone() } else { bd.root()? };
        let mids = compute_middle_sets(&bd, host)?;
        let rooted = if bd.root_node().is_some() { Some(bd.rooted()?) } else { None };
        Ok(Prepared { bd, rooted, mids })
    }

    /// Host edges below each tree edge.
    pub fn edges_below(&self, tree_edge: usize) -> Vec<usize> {
        let rooted = self.rooted.as_ref().expect("rooted decomposition");
        let mut out = Vec::new();
        let mut stack = vec![tree_edge];
        while let Some(e) = stack.pop() {
            match rooted.children[e] {
                Some([a, b]) => {
                    stack.push(a);
                    stack.push(b);
                }
                None => {
                    if let NodeKind::Leaf(h) = self.bd.kind(rooted.lower[e]) {
                        out.push(h);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Everything a run produces.
pub struct DpRun {
    pub root: Table,
    /// All tables by tree edge when recording; otherwise empty.
    pub tables: Vec<Table>,
    pub stats: DpStats,
    pub canon: Canonizer,
}

impl DpRun {
    /// Number of colorful copies of `pattern` (all `q` colors used).
    pub fn readout(&mut self, pattern: &Graph, q: usize) -> BigUint {
        match self.root.find_unpinned(&mut self.canon, pattern, color_range(q)) {
            Some(i) => self.root.entries[i].count.clone(),
            None => BigUint::zero(),
        }
    }
}

/// Evaluates the tables bottom-up and returns the root table. Edgeless and
/// single-edge hosts are read directly from their one table.
pub fn run(host: &Graph, prepared: &Prepared, coloring: &Coloring, limits: &Limits, options: DpOptions) -> Result<DpRun> {
    run_with(host, prepared, coloring, limits, options, Canonizer::default())
}

/// [`run`] reusing the canonical forms cached by an earlier run.
pub fn run_with(
    host: &Graph,
    prepared: &Prepared,
    coloring: &Coloring,
    limits: &Limits,
    options: DpOptions,
    mut canon: Canonizer,
) -> Result<DpRun> {
    if limits.k > SMALL_GRAPH_MAX {
        return Err(Error::Unsupported(format!("patterns above {SMALL_GRAPH_MAX} vertices")));
    }
    if coloring.len() != host.vertex_count() {
        return Err(Error::InvalidArgument("coloring does not cover the host".into()));
    }
    let mut stats = DpStats::default();
    let bd = &prepared.bd;
    if bd.is_empty() {
        let mut root = Table::default();
        let empty = Entry {
            graph: SmallGraph::default(),
            pins: Vec::new(),
            colors: 0,
            count: BigUint::one(),
        };
        root.insert(&mut canon, empty, options.record.then(|| Origin::Leaf(Subgraph::default())));
        return Ok(DpRun { root, tables: Vec::new(), stats, canon });
    }
    let Some(rooted) = prepared.rooted.as_ref() else {
        let NodeKind::Leaf(h) = bd.kind(0) else {
            return Err(Error::Internal("single-node decomposition without a leaf".into()));
        };
        let root = init_leaf_table(host.edge(h), h, &[], coloring, limits, options, &mut canon);
        stats.max_table = root.len();
        stats.tables = 1;
        return Ok(DpRun { root, tables: Vec::new(), stats, canon });
    };
    let mut tables: Vec<Option<Table>> = vec![None; bd.tree_edge_count()];
    for &e in &rooted.post_order {
        let mid_e = prepared.mids.mid(e);
        let table = match rooted.children[e] {
            None => {
                let NodeKind::Leaf(h) = bd.kind(rooted.lower[e]) else {
                    return Err(Error::Internal(format!("tree edge {e} ends in a non-leaf without children")));
                };
                let t = init_leaf_table(host.edge(h), h, mid_e, coloring, limits, options, &mut canon);
                stats.max_table = stats.max_table.max(t.len());
                stats.tables += 1;
                t
            }
            Some([f, g]) => {
                let (tf, tg) = if options.record {
                    (tables[f].clone(), tables[g].clone())
                } else {
                    (tables[f].take(), tables[g].take())
                };
                let tf = tf.ok_or_else(|| Error::Internal("child table missing".into()))?;
                let tg = tg.ok_or_else(|| Error::Internal("child table missing".into()))?;
                update_step(
                    &tf,
                    &tg,
                    prepared.mids.mid(f),
                    prepared.mids.mid(g),
                    mid_e,
                    limits,
                    options,
                    &mut canon,
                    &mut stats,
                )
            }
        };
        tables[e] = Some(table);
    }
    let root = tables[rooted.root_edge]
        .clone()
        .ok_or_else(|| Error::Internal("root table missing".into()))?;
    let tables = if options.record { tables.into_iter().map(Option::unwrap_or_default).collect() } else { Vec::new() };
    Ok(DpRun { root, tables, stats, canon })
}

/// Counts colorful copies of `pattern` in `host` (all `q` colors present).
/// Every component of the pattern must contain an edge.
pub fn count_colorful(
    host: &Graph,
    bd: &BranchDecomposition,
    coloring: &Coloring,
    pattern: &Graph,
    induced: bool,
) -> Result<BigUint> {
    if (0..pattern.vertex_count()).any(|v| pattern.degree(v) == 0) {
        return Err(Error::Unsupported("patterns with isolated vertices".into()));
    }
    if pattern.vertex_count() == 0 {
        return Ok(BigUint::one());
    }
    let prepared = Prepared::new(host, bd)?;
    let options = DpOptions {
        induced,
        ..DpOptions::default()
    };
    let mut run = run(host, &prepared, coloring, &Limits::for_pattern(pattern), options)?;
    Ok(run.readout(pattern, coloring.q()))
}
