//! Host and pattern files shipped with the binary for `selftest`.

use std::collections::BTreeSet;

use num_bigint::BigUint;

use surfsplit::engine::{IsomorphCounter, Layered};
use surfsplit::oracle::{brute_count, brute_list};
use surfsplit::{Error, Graph, Map, Subgraph};

use crate::Failure;

pub const HOSTS: [(&str, &str); 7] = [
    ("c3.map", include_str!("../corpus/c3.map")),
    ("k4.map", include_str!("../corpus/k4.map")),
    ("cube.map", include_str!("../corpus/cube.map")),
    ("wheel6.map", include_str!("../corpus/wheel6.map")),
    ("grid4x3.map", include_str!("../corpus/grid4x3.map")),
    ("k5-torus.map", include_str!("../corpus/k5-torus.map")),
    ("k33-torus.map", include_str!("../corpus/k33-torus.map")),
];

pub const PATTERNS: [(&str, &str); 7] = [
    ("k3.graph", include_str!("../corpus/k3.graph")),
    ("p3.graph", include_str!("../corpus/p3.graph")),
    ("p4.graph", include_str!("../corpus/p4.graph")),
    ("c4.graph", include_str!("../corpus/c4.graph")),
    ("2k2.graph", include_str!("../corpus/2k2.graph")),
    ("k2-k3.graph", include_str!("../corpus/k2-k3.graph")),
    ("k2-k1.graph", include_str!("../corpus/k2-k1.graph")),
];

fn parsed<T>(name: &str, r: surfsplit::Result<T>) -> Result<T, Failure> {
    r.map_err(|e: Error| Failure::Internal(format!("bundled {name}: {e}")))
}

/// Runs every host, pattern and mode; returns one line per check and the
/// number of failed checks.
pub fn check() -> Result<(Vec<String>, usize), Failure> {
    let mut rows = Vec::new();
    let mut failed = 0;
    for (hname, htext) in HOSTS {
        let map = parsed(hname, Map::parse(htext))?;
        let host = map.underlying();
        for (pname, ptext) in PATTERNS {
            let pattern = parsed(pname, Graph::parse(ptext))?;
            let has_isolated = (0..pattern.vertex_count()).any(|v| pattern.degree(v) == 0);
            for induced in [false, true] {
                if induced && has_isolated {
                    continue;
                }
                let layered = Layered { root: 0 };
                let expected = brute_count(&host, &pattern, induced);
                let got = layered.count(&map, &pattern, induced)?;
                let mut ok = got == expected;
                if !has_isolated {
                    let listed = layered.list(&map, &pattern, induced, 0)?;
                    let set: BTreeSet<Subgraph> = listed.iter().cloned().collect();
                    ok &= set.len() == listed.len()
                        && BigUint::from(listed.len()) == got
                        && set == brute_list(&host, &pattern, induced);
                }
                if !ok {
                    failed += 1;
                }
                let mode = if induced { " induced" } else { "" };
                let verdict = if ok { "ok" } else { "FAIL" };
                rows.push(format!("{hname} {pname}{mode}: {got} (oracle {expected}) {verdict}"));
            }
        }
    }
    Ok((rows, failed))
}
