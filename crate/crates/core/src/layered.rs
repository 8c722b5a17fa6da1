//! Counting and listing pattern copies in a whole host through BFS layer
//! windows.
//!
//! A copy either avoids the last layer `j`, or its components split into a
//! block that uses every layer of some window `j-x+1..=j` and a rest that
//! lives below the empty layer `j-x`. Windows are counted with the colorful
//! table DP, and the split is summed over sub-multisets of the pattern's
//! component classes, so copies with interchangeable components are counted
//! once.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::decomp::BranchDecomposition;
use crate::dp::{self, Canonizer, Cell, Coloring, DpOptions, ListArena, ListId, Limits, Prepared};
use crate::error::{Error, Result};
use crate::graph::{Graph, Subgraph};
use crate::iso::{pinned_isomorphic, SMALL_GRAPH_MAX};
use crate::map::{LayerStructure, Map};
use crate::oracle::binomial;
use crate::ssd::layer::{LayerGraph, LayerGraphBuilder};
use crate::ssd::decompose;

/// A pattern split into isolated vertices and classes of isomorphic
/// components with edges.
#[derive(Debug, Clone)]
pub struct PatternGraph {
    pub pattern: Graph,
    /// The pattern without its isolated vertices.
    pub stripped: Graph,
    pub isolated: usize,
    /// One representative per class of isomorphic components.
    pub classes: Vec<Graph>,
    pub multiplicity: Vec<usize>,
}

/// A sub-multiset of component classes, as a mixed-radix number.
pub type Multiset = usize;

impl PatternGraph {
    pub fn new(pattern: &Graph) -> Result<Self> {
        if !pattern.is_simple() {
            return Err(Error::InvalidArgument("pattern must be simple".into()));
        }
        let mut keep = Vec::new();
        let mut isolated = 0;
        for v in 0..pattern.vertex_count() {
            if pattern.degree(v) == 0 {
                isolated += 1;
            } else {
                keep.push(v);
            }
        }
        if keep.len() > SMALL_GRAPH_MAX {
            return Err(Error::Unsupported(format!(
                "patterns with more than {SMALL_GRAPH_MAX} non-isolated vertices"
            )));
        }
        let stripped = pattern.induced(&keep);
        let mut classes: Vec<Graph> = Vec::new();
        let mut multiplicity = Vec::new();
        for comp in stripped.components() {
            let g = stripped.induced(&comp);
            let found = classes.iter().position(|c| {
                c.vertex_count() == g.vertex_count()
                    && c.edge_count() == g.edge_count()
                    && pinned_isomorphic(c, &[], &g, &[]).expect("no pins")
            });
            match found {
                Some(i) => multiplicity[i] += 1,
                None => {
                    classes.push(g);
                    multiplicity.push(1);
                }
            }
        }
        Ok(PatternGraph {
            pattern: pattern.clone(),
            stripped,
            isolated,
            classes,
            multiplicity,
        })
    }

    /// Number of components with edges.
    pub fn component_count(&self) -> usize {
        self.multiplicity.iter().sum()
    }

    /// Number of sub-multisets, including the empty one.
    pub fn multiset_count(&self) -> usize {
        self.multiplicity.iter().map(|m| m + 1).product()
    }

    /// The full multiset of all components.
    pub fn all(&self) -> Multiset {
        self.multiset_count() - 1
    }

    fn digits(&self, mut s: Multiset) -> Vec<usize> {
        self.multiplicity
            .iter()
            .map(|&m| {
                let d = s % (m + 1);
                s /= m + 1;
                d
            })
            .collect()
    }

    fn encode(&self, digits: &[usize]) -> Multiset {
        let mut s = 0;
        for (d, m) in digits.iter().zip(&self.multiplicity).rev() {
            s = s * (m + 1) + d;
        }
        s
    }

    /// Whether `sub` is contained in `s`; if so, returns `s - sub`.
    pub fn difference(&self, s: Multiset, sub: Multiset) -> Option<Multiset> {
        let a = self.digits(s);
        let b = self.digits(sub);
        if a.iter().zip(&b).any(|(x, y)| y > x) {
            return None;
        }
        let diff: Vec<usize> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
        Some(self.encode(&diff))
    }

    /// The disjoint union of the components in `s`.
    pub fn sub_pattern(&self, s: Multiset) -> Graph {
        let mut edges = Vec::new();
        let mut n = 0;
        for (class, copies) in self.classes.iter().zip(self.digits(s)) {
            for _ in 0..copies {
                edges.extend(class.edges().iter().map(|&(u, v)| (u + n, v + n)));
                n += class.vertex_count();
            }
        }
        Graph::new(n, edges).expect("components are simple")
    }
}

/// Colors window `i..=j`: a vertex in layer `x` gets color `x - i + 1`.
pub fn layer_coloring(layers: &LayerStructure, i: usize, j: usize, vertices: &[usize]) -> Result<Coloring> {
    if i > j {
        return Err(Error::InvalidArgument(format!("empty window {i}..={j}")));
    }
    let colors = vertices
        .iter()
        .map(|&v| {
            let x = layers.layer_of(v);
            if x < i || x > j {
                Err(Error::InvalidArgument(format!("vertex {v} lies outside window {i}..={j}")))
            } else {
                Ok((x - i + 1) as u8)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Coloring::new(colors, j - i + 1)
}

/// Work counters for one counting or listing call.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LayeredStats {
    pub windows: usize,
    /// Entry pairs examined by window table updates.
    pub dp_pairs: u64,
    pub max_table: usize,
    /// Products evaluated in the layer recursion.
    pub recursion_terms: u64,
    /// Cell operations of the generation stage.
    pub list_ops: u64,
}

impl LayeredStats {
    /// Work of the counting stage, in the units the listing bound uses.
    pub fn counting_work(&self) -> u64 {
        self.dp_pairs + self.recursion_terms + self.windows as u64
    }
}

/// Colorful counts `DPC` and totals `DPT` for one host and pattern.
#[derive(Debug, Clone)]
pub struct CountGrid {
    depth: usize,
    k: usize,
    sets: usize,
    /// `dpc[(i, j)][s]`, present for windows with at least one edge.
    dpc: HashMap<(usize, usize), Vec<BigUint>>,
    /// `dpt[j][s]`.
    dpt: Vec<Vec<BigUint>>,
    sizes: Vec<usize>,
}

impl CountGrid {
    /// `DPC_i^j(s)`, zero outside the computed windows.
    pub fn dpc(&self, i: isize, j: usize, s: Multiset) -> BigUint {
        if i < 0 || j as isize - i >= self.k as isize {
            return BigUint::zero();
        }
        self.dpc
            .get(&(i as usize, j))
            .map_or_else(BigUint::zero, |v| v[s].clone())
    }

    fn dpc_ref(&self, i: isize, j: usize, s: Multiset) -> Option<&BigUint> {
        if i < 0 {
            return None;
        }
        self.dpc.get(&(i as usize, j)).map(|v| &v[s]).filter(|c| !c.is_zero())
    }

    /// `DPT^j(s)`; one for the empty multiset at every `j`, zero for other
    /// multisets below layer 0.
    pub fn dpt(&self, j: isize, s: Multiset) -> BigUint {
        if s == 0 {
            BigUint::one()
        } else if j < 0 {
            BigUint::zero()
        } else {
            self.dpt[j as usize][s].clone()
        }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Calls `f(x, s1, s2)` for every non-zero term of the sum for
    /// `DPT^j(s)`.
    fn terms(&self, pattern: &PatternGraph, j: usize, s: Multiset, mut f: impl FnMut(usize, Multiset, Multiset)) {
        for s2 in 1..self.sets {
            let Some(s1) = pattern.difference(s, s2) else { continue };
            for x in 1..=self.sizes[s2].min(j + 1) {
                let low = j as isize - x as isize - 1;
                if self.dpc_ref(j as isize - x as isize + 1, j, s2).is_none() || self.dpt(low, s1).is_zero() {
                    continue;
                }
                f(x, s1, s2);
            }
        }
    }
}

/// Host checks shared by counting and listing. Maps are connected by
/// construction.
fn check_host(map: &Map, root: usize) -> Result<()> {
    if !map.is_simple() {
        return Err(Error::Unsupported("hosts must be simple".into()));
    }
    if map.vertex_count() > 0 && root >= map.vertex_count() {
        return Err(Error::InvalidArgument(format!("root {root} out of range")));
    }
    Ok(())
}

struct Window {
    lg: LayerGraph,
    prepared: Prepared,
    coloring: Coloring,
}

fn prepare_window(builder: &mut LayerGraphBuilder<'_>, i: usize, j: usize) -> Result<Option<Window>> {
    let lg = builder.build(i, j)?;
    if lg.window.edge_count() == 0 {
        return Ok(None);
    }
    let bd = decompose(&lg.map, lg.apex)?;
    let restricted: BranchDecomposition = lg.restrict(&bd)?;
    let prepared = Prepared::new(&lg.window, &restricted)?;
    let coloring = layer_coloring(builder.layers(), i, j, &lg.vertex_of)?;
    Ok(Some(Window { lg, prepared, coloring }))
}

/// Runs the counting stage: every window DP, then the layer recursion.
pub fn dpt_all(
    map: &Map,
    layers: &LayerStructure,
    pattern: &PatternGraph,
    induced: bool,
    stats: &mut LayeredStats,
) -> Result<CountGrid> {
    let k = pattern.stripped.vertex_count();
    let depth = layers.eccentricity();
    let sets = pattern.multiset_count();
    let subs: Vec<Graph> = (0..sets).map(|s| pattern.sub_pattern(s)).collect();
    let sizes: Vec<usize> = subs.iter().map(Graph::vertex_count).collect();
    let limits = Limits::for_pattern(&pattern.stripped);
    let options = DpOptions {
        induced,
        ..DpOptions::default()
    };
    let mut builder = LayerGraphBuilder::new(map, layers);
    let mut canon = Canonizer::default();
    let mut dpc = HashMap::new();
    for j in 0..=depth {
        for i in (j + 1).saturating_sub(k)..=j {
            let Some(w) = prepare_window(&mut builder, i, j)? else { continue };
            let mut run = dp::run_with(&w.lg.window, &w.prepared, &w.coloring, &limits, options, canon)?;
            stats.windows += 1;
            stats.dp_pairs += run.stats.pairs;
            stats.max_table = stats.max_table.max(run.stats.max_table);
            let q = j - i + 1;
            let counts = (0..sets)
                .map(|s| if s == 0 || sizes[s] < q { BigUint::zero() } else { run.readout(&subs[s], q) })
                .collect();
            dpc.insert((i, j), counts);
            canon = run.canon;
        }
    }
    let mut grid = CountGrid {
        depth,
        k,
        sets,
        dpc,
        dpt: Vec::with_capacity(depth + 1),
        sizes,
    };
    for j in 0..=depth {
        let mut row = vec![BigUint::zero(); sets];
        row[0] = BigUint::one();
        for (s, slot) in row.iter_mut().enumerate().skip(1) {
            let mut total = grid.dpt(j as isize - 1, s);
            grid.terms(pattern, j, s, |x, s1, s2| {
                stats.recursion_terms += 1;
                let low = j as isize - x as isize - 1;
                total += grid.dpt(low, s1) * grid.dpc(j as isize - x as isize + 1, j, s2);
            });
            *slot = total;
        }
        grid.dpt.push(row);
    }
    Ok(grid)
}

/// Counts the subgraphs of the host isomorphic to `pattern` (induced
/// subgraphs in induced mode), layering from `root`.
pub fn count_isomorphs(map: &Map, root: usize, pattern: &Graph, induced: bool) -> Result<(BigUint, LayeredStats)> {
    let mut stats = LayeredStats::default();
    check_host(map, root)?;
    let p = PatternGraph::new(pattern)?;
    if induced && p.isolated > 0 {
        return Err(Error::Unsupported("isolated-vertex pattern unsupported in induced mode".into()));
    }
    let n = map.vertex_count();
    if pattern.vertex_count() == 0 {
        return Ok((BigUint::one(), stats));
    }
    if pattern.vertex_count() > n {
        return Ok((BigUint::zero(), stats));
    }
    let k = p.stripped.vertex_count();
    let base = if k == 0 {
        BigUint::one()
    } else {
        let layers = map.bfs_layers(root);
        let grid = dpt_all(map, &layers, &p, induced, &mut stats)?;
        grid.dpt(grid.depth as isize, p.all())
    };
    Ok((base * binomial(n - k, p.isolated), stats))
}

/// Lists the subgraphs counted by [`count_isomorphs`], at most `limit` of
/// them (`0` for all). Patterns with isolated vertices are rejected.
pub fn list_isomorphs(
    map: &Map,
    root: usize,
    pattern: &Graph,
    induced: bool,
    limit: usize,
) -> Result<(Vec<Subgraph>, LayeredStats)> {
    let mut stats = LayeredStats::default();
    check_host(map, root)?;
    let p = PatternGraph::new(pattern)?;
    if p.isolated > 0 {
        return Err(Error::Unsupported("listing patterns with isolated vertices".into()));
    }
    if pattern.vertex_count() == 0 {
        return Ok((vec![Subgraph::default()], stats));
    }
    if pattern.vertex_count() > map.vertex_count() {
        return Ok((Vec::new(), stats));
    }
    let layers = map.bfs_layers(root);
    let grid = dpt_all(map, &layers, &p, induced, &mut stats)?;
    let depth = grid.depth;
    let all = p.all();
    if grid.dpt(depth as isize, all).is_zero() {
        return Ok((Vec::new(), stats));
    }

    // backtracking: which totals and window counts feed the answer
    let mut ct = vec![vec![false; grid.sets]; depth + 1];
    let mut cc: HashMap<(usize, usize), Vec<bool>> = HashMap::new();
    ct[depth][all] = true;
    for j in (0..=depth).rev() {
        for s in 1..grid.sets {
            if !ct[j][s] {
                continue;
            }
            if j > 0 && !grid.dpt(j as isize - 1, s).is_zero() {
                ct[j - 1][s] = true;
            }
            grid.terms(&p, j, s, |x, s1, s2| {
                let low = j as isize - x as isize - 1;
                if s1 != 0 {
                    ct[low as usize][s1] = true;
                }
                cc.entry((j + 1 - x, j)).or_insert_with(|| vec![false; grid.sets])[s2] = true;
            });
        }
    }

    // generation: window lists first, then the totals bottom-up
    let mut arena = ListArena::new();
    let mut lc: HashMap<(usize, usize, Multiset), ListId> = HashMap::new();
    let limits = Limits::for_pattern(&p.stripped);
    let options = DpOptions {
        induced,
        prune: true,
        record: true,
    };
    let mut builder = LayerGraphBuilder::new(map, &layers);
    let mut canon = Canonizer::default();
    let mut windows: Vec<(usize, usize)> = cc.keys().copied().collect();
    windows.sort_unstable();
    for (i, j) in windows {
        let flags = &cc[&(i, j)];
        let w = prepare_window(&mut builder, i, j)?
            .ok_or_else(|| Error::Internal(format!("flagged window {i}..={j} has no edges")))?;
        let mut run = dp::run_with(&w.lg.window, &w.prepared, &w.coloring, &limits, options, canon)?;
        let q = j - i + 1;
        let wanted: Vec<Multiset> = (1..grid.sets).filter(|&s| flags[s]).collect();
        let mut targets = Vec::with_capacity(wanted.len());
        for &s in &wanted {
            let probe = p.sub_pattern(s);
            let entry = run
                .root
                .find_unpinned(&mut run.canon, &probe, (1u32 << q) - 1)
                .ok_or_else(|| Error::Internal(format!("no root entry for a flagged count in window {i}..={j}")))?;
            targets.push(entry);
        }
        let lg = &w.lg;
        let translate = |s: &Subgraph| {
            Subgraph::new(
                s.vertices.iter().map(|&v| lg.vertex_of[v]).collect(),
                s.edges.iter().map(|&e| lg.edge_of[e]).collect(),
            )
        };
        let ids = run.generate_lists(&w.prepared, &targets, &mut arena, &translate)?;
        for (s, id) in wanted.into_iter().zip(ids) {
            lc.insert((i, j, s), id);
        }
        canon = std::mem::take(&mut run.canon);
    }
    let mut lt: Vec<Vec<Option<ListId>>> = vec![vec![None; grid.sets]; depth + 1];
    for j in 0..=depth {
        for s in 1..grid.sets {
            if !ct[j][s] {
                continue;
            }
            let mut cells = Vec::new();
            if j > 0 && !grid.dpt(j as isize - 1, s).is_zero() {
                cells.push(Cell::Link(lt[j - 1][s].expect("lower total has a list")));
            }
            let mut terms = Vec::new();
            grid.terms(&p, j, s, |x, s1, s2| terms.push((x, s1, s2)));
            for (x, s1, s2) in terms {
                let window = lc[&(j + 1 - x, j, s2)];
                if s1 == 0 {
                    cells.push(Cell::Link(window));
                } else {
                    let lower = lt[j - x - 1][s1].expect("lower total has a list");
                    cells.extend(arena.product(lower, window));
                }
            }
            lt[j][s] = Some(arena.push(cells));
        }
    }
    let mut out = Vec::new();
    arena.visit(lt[depth][all].expect("answer has a list"), |s| {
        out.push(s.clone());
        limit == 0 || out.len() < limit
    });
    stats.list_ops = arena.ops;
    Ok((out, stats))
}
