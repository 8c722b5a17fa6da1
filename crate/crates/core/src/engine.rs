//! Interchangeable counting engines, selectable by name.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::graph::{Graph, Subgraph};
use crate::layered::{count_isomorphs, list_isomorphs};
use crate::map::Map;
use crate::oracle::{brute_count, brute_list};

pub trait IsomorphCounter {
    fn name(&self) -> &'static str;

    fn count(&self, host: &Map, pattern: &Graph, induced: bool) -> Result<BigUint>;

    /// Isomorphs in a deterministic order, at most `limit` (`0` for all).
    fn list(&self, host: &Map, pattern: &Graph, induced: bool, limit: usize) -> Result<Vec<Subgraph>>;
}

/// The layered decomposition pipeline.
pub struct Layered {
    pub root: usize,
}

impl IsomorphCounter for Layered {
    fn name(&self) -> &'static str {
        "layered"
    }

    fn count(&self, host: &Map, pattern: &Graph, induced: bool) -> Result<BigUint> {
        Ok(count_isomorphs(host, self.root, pattern, induced)?.0)
    }

    fn list(&self, host: &Map, pattern: &Graph, induced: bool, limit: usize) -> Result<Vec<Subgraph>> {
        Ok(list_isomorphs(host, self.root, pattern, induced, limit)?.0)
    }
}

/// Injective maps over automorphisms; lists by enumeration.
pub struct BruteMaps;

/// Vertex and edge subset enumeration.
pub struct BruteEnum;

fn truncate(list: impl IntoIterator<Item = Subgraph>, limit: usize) -> Vec<Subgraph> {
    let it = list.into_iter();
    if limit == 0 {
        it.collect()
    } else {
        it.take(limit).collect()
    }
}

impl IsomorphCounter for BruteMaps {
    fn name(&self) -> &'static str {
        "brute-maps"
    }

    fn count(&self, host: &Map, pattern: &Graph, induced: bool) -> Result<BigUint> {
        Ok(brute_count(&host.underlying(), pattern, induced))
    }

    fn list(&self, host: &Map, pattern: &Graph, induced: bool, limit: usize) -> Result<Vec<Subgraph>> {
        Ok(truncate(brute_list(&host.underlying(), pattern, induced), limit))
    }
}

impl IsomorphCounter for BruteEnum {
    fn name(&self) -> &'static str {
        "brute-enum"
    }

    fn count(&self, host: &Map, pattern: &Graph, induced: bool) -> Result<BigUint> {
        Ok(BigUint::from(brute_list(&host.underlying(), pattern, induced).len()))
    }

    fn list(&self, host: &Map, pattern: &Graph, induced: bool, limit: usize) -> Result<Vec<Subgraph>> {
        Ok(truncate(brute_list(&host.underlying(), pattern, induced), limit))
    }
}

pub const ENGINES: [&str; 3] = ["layered", "brute-maps", "brute-enum"];

/// Looks up an engine by name. `root` is the layering root where it applies.
pub fn engine(name: &str, root: usize) -> Result<Box<dyn IsomorphCounter>> {
    match name {
        "layered" => Ok(Box::new(Layered { root })),
        "brute-maps" => Ok(Box::new(BruteMaps)),
        "brute-enum" => Ok(Box::new(BruteEnum)),
        _ => Err(Error::InvalidArgument(format!(
            "unknown engine `{name}` (expected one of {})",
            ENGINES.join(", ")
        ))),
    }
}
