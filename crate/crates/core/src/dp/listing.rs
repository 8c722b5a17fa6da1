//! Listing the subgraphs behind table entries.
//!
//! Lists are sequences of cells: a concrete subgraph or a link to another
//! list. A combination whose one side adds nothing new (no edges, only
//! vertices the other side already pins) links to the other side's list
//! instead of copying it, and a list made of a single link is replaced by
//! its target.

use crate::error::{Error, Result};
use crate::graph::Subgraph;

use super::{DpRun, Origin, Prepared};

pub type ListId = u32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    One(Subgraph),
    Link(ListId),
}

/// Storage for lists, with a counter of cell operations.
#[derive(Debug, Default)]
pub struct ListArena {
    lists: Vec<Vec<Cell>>,
    /// Cells written, cells visited while expanding, and subgraph elements
    /// copied.
    pub ops: u64,
}

impl ListArena {
    pub fn new() -> Self {
        ListArena::default()
    }

    /// Stores a list; a list holding a single link is not stored and the
    /// link target is returned instead.
    pub fn push(&mut self, cells: Vec<Cell>) -> ListId {
        if let [Cell::Link(target)] = cells.as_slice() {
            return *target;
        }
        self.ops += cells.len() as u64;
        self.lists.push(cells);
        (self.lists.len() - 1) as ListId
    }

    pub fn cells(&self, id: ListId) -> &[Cell] {
        &self.lists[id as usize]
    }

    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    /// Calls `f` on every subgraph of list `id` in order until it returns
    /// `false`. Returns whether the walk ran to the end.
    pub fn visit(&mut self, id: ListId, mut f: impl FnMut(&Subgraph) -> bool) -> bool {
        let mut stack = vec![(id, 0usize)];
        while let Some((list, pos)) = stack.pop() {
            let cells = &self.lists[list as usize];
            if pos == cells.len() {
                continue;
            }
            self.ops += 1;
            stack.push((list, pos + 1));
            match &cells[pos] {
                Cell::One(s) => {
                    if !f(s) {
                        return false;
                    }
                }
                Cell::Link(target) => stack.push((*target, 0)),
            }
        }
        true
    }

    pub fn flatten(&mut self, id: ListId) -> Vec<Subgraph> {
        let mut out = Vec::new();
        self.visit(id, |s| {
            out.push(s.clone());
            true
        });
        out
    }

    /// Every union `a ∪ b` with `a` from list `x` and `b` from list `y`.
    pub fn product(&mut self, x: ListId, y: ListId) -> Vec<Cell> {
        let left = self.flatten(x);
        let right = self.flatten(y);
        let mut cells = Vec::with_capacity(left.len() * right.len());
        for a in &left {
            for b in &right {
                let u = a.union(b);
                self.ops += (u.vertices.len() + u.edges.len()) as u64;
                cells.push(Cell::One(u));
            }
        }
        cells
    }
}

impl DpRun {
    /// Builds the lists for root entries `targets`. Only entries that feed a
    /// target are expanded. `translate` maps leaf subgraphs (host ids of the
    /// run) to the ids the lists should carry.
    pub fn generate_lists(
        &self,
        prepared: &Prepared,
        targets: &[usize],
        arena: &mut ListArena,
        translate: &dyn Fn(&Subgraph) -> Subgraph,
    ) -> Result<Vec<ListId>> {
        let leaf_list = |origins: &[Origin], arena: &mut ListArena| -> Result<ListId> {
            let cells = origins
                .iter()
                .map(|o| match o {
                    Origin::Leaf(s) => Ok(Cell::One(translate(s))),
                    Origin::Pair(..) => Err(Error::Internal("leaf entry with a pair origin".into())),
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(arena.push(cells))
        };
        let Some(rooted) = prepared.rooted.as_ref() else {
            return targets.iter().map(|&t| leaf_list(&self.root.origins[t], arena)).collect();
        };
        if self.tables.len() != prepared.bd.tree_edge_count() {
            return Err(Error::InvalidArgument("listing needs a recorded run".into()));
        }
        let count = self.tables.len();
        let mut flags: Vec<Vec<bool>> = self.tables.iter().map(|t| vec![false; t.len()]).collect();
        for &t in targets {
            flags[rooted.root_edge][t] = true;
        }
        for &e in rooted.post_order.iter().rev() {
            let Some([f, g]) = rooted.children[e] else { continue };
            for (i, on) in flags[e].clone().into_iter().enumerate() {
                if !on {
                    continue;
                }
                for o in &self.tables[e].origins[i] {
                    if let Origin::Pair(a, b) = *o {
                        flags[f][a as usize] = true;
                        flags[g][b as usize] = true;
                    }
                }
            }
        }
        let mut lists: Vec<Vec<Option<ListId>>> = vec![Vec::new(); count];
        for &e in &rooted.post_order {
            let table = &self.tables[e];
            let mut out = vec![None; table.len()];
            match rooted.children[e] {
                None => {
                    for (i, slot) in out.iter_mut().enumerate() {
                        if flags[e][i] {
                            *slot = Some(leaf_list(&table.origins[i], arena)?);
                        }
                    }
                }
                Some([f, g]) => {
                    let shared = super::shared_positions(prepared.mids.mid(f), prepared.mids.mid(g));
                    let pf: Vec<usize> = shared.iter().map(|s| s.0).collect();
                    let pg: Vec<usize> = shared.iter().map(|s| s.1).collect();
                    for (i, slot) in out.iter_mut().enumerate() {
                        if !flags[e][i] {
                            continue;
                        }
                        let mut cells = Vec::new();
                        for o in &table.origins[i] {
                            let Origin::Pair(a, b) = *o else {
                                return Err(Error::Internal("inner entry with a leaf origin".into()));
                            };
                            let la = lists[f][a as usize].expect("flagged child has a list");
                            let lb = lists[g][b as usize].expect("flagged child has a list");
                            if self.tables[g].entries[b as usize].covered_by_pins(&pg) {
                                cells.push(Cell::Link(la));
                            } else if self.tables[f].entries[a as usize].covered_by_pins(&pf) {
                                cells.push(Cell::Link(lb));
                            } else {
                                cells.extend(arena.product(la, lb));
                            }
                        }
                        *slot = Some(arena.push(cells));
                    }
                    lists[f] = Vec::new();
                    lists[g] = Vec::new();
                }
            }
            lists[e] = out;
        }
        Ok(targets
            .iter()
            .map(|&t| lists[rooted.root_edge][t].expect("targets are flagged"))
            .collect())
    }
}
