//! Acceptance suite: one pass/fail line per criterion and a summary. Runs
//! without the test harness so the lines always reach the output.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use surfsplit::decomp::NodeKind;
use surfsplit::dp::{self, init_leaf_table, Canonizer, Coloring, DpOptions, Entry, Limits, Prepared};
use surfsplit::generators;
use surfsplit::iso::{equivalent_via_gadget, pinned_isomorphic};
use surfsplit::layered::{count_isomorphs, list_isomorphs};
use surfsplit::oracle::{brute_count, brute_list, brute_table, OracleClass};
use surfsplit::ssd::{construct_ssd, width_bound};
use surfsplit::{Graph, Map};

/// Hosts of criteria 1, 2 and 9.
const ORACLE_HOSTS: usize = 210;
/// Listing ops may exceed `m_iso * k^3 + counting work` by at most this factor.
const LIST_OPS_FACTOR: f64 = 4.0;
/// Allowed excess of a time ratio over the matching size ratio.
const TIME_SLACK: f64 = 1.5;

fn graph(n: usize, e: &[(usize, usize)]) -> Graph {
    Graph::new(n, e.to_vec()).unwrap()
}

fn patterns() -> Vec<(&'static str, Graph)> {
    vec![
        ("K3", graph(3, &[(0, 1), (1, 2), (2, 0)])),
        ("P3", graph(3, &[(0, 1), (1, 2)])),
        ("P4", graph(4, &[(0, 1), (1, 2), (2, 3)])),
        ("C4", graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)])),
        ("2K2", graph(4, &[(0, 1), (2, 3)])),
        ("K2+K3", graph(5, &[(0, 1), (2, 3), (3, 4), (4, 2)])),
    ]
}

fn oracle_corpus() -> Vec<Map> {
    let mut rng = StdRng::seed_from_u64(0x5eed_0001);
    (0..ORACLE_HOSTS)
        .map(|i| match i % 3 {
            0 => generators::random_planar(14, &mut rng),
            1 => generators::random_toroidal(14, &mut rng),
            _ => {
                let n = rng.gen_range(5..=12);
                let extra = rng.gen_range(0..=n);
                generators::random_surface(n, extra, 2, &mut rng)
            }
        })
        .collect()
}

struct Report {
    lines: Vec<(usize, bool, String)>,
}

impl Report {
    fn record(&mut self, id: usize, name: &str, outcome: Result<String, String>) {
        let (ok, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        let line = format!("criterion {id} ({name}): {} - {detail}", if ok { "PASS" } else { "FAIL" });
        println!("{line}");
        self.lines.push((id, ok, line));
    }
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Criteria 1, 2 and 9 share the corpus and the listing runs.
fn oracle_criteria(report: &mut Report) {
    let corpus = oracle_corpus();
    let pats = patterns();
    let start = Instant::now();
    let mut counting: Result<usize, String> = Ok(0);
    let mut listing: Result<usize, String> = Ok(0);
    let mut worst_ratio = 0.0f64;
    let mut max_genus = 0;
    for (h, map) in corpus.iter().enumerate() {
        let host = map.underlying();
        max_genus = max_genus.max(map.genus().unwrap());
        for (name, p) in &pats {
            let k = p.vertex_count() as u64;
            for induced in [false, true] {
                let tag = || format!("host {h} (n={}), {name}, induced={induced}", host.vertex_count());
                let expected = brute_count(&host, p, induced);
                match count_isomorphs(map, 0, p, induced) {
                    Ok((c, _)) if c == expected => {
                        if let Ok(n) = counting.as_mut() {
                            *n += 1;
                        }
                    }
                    Ok((c, _)) => {
                        if counting.is_ok() {
                            counting = Err(format!("{}: count {c}, oracle {expected}", tag()));
                        }
                    }
                    Err(e) => counting = Err(format!("{}: {e}", tag())),
                }
                let (list, stats) = match list_isomorphs(map, 0, p, induced, 0) {
                    Ok(r) => r,
                    Err(e) => {
                        listing = Err(format!("{}: {e}", tag()));
                        continue;
                    }
                };
                let set: BTreeSet<_> = list.iter().cloned().collect();
                let oracle = brute_list(&host, p, induced);
                if listing.is_ok() {
                    if set.len() != list.len() {
                        listing = Err(format!("{}: {} duplicates", tag(), list.len() - set.len()));
                    } else if set != oracle {
                        listing = Err(format!("{}: listed {} subgraphs, oracle {}", tag(), set.len(), oracle.len()));
                    } else if BigUint::from(list.len()) != expected {
                        listing = Err(format!("{}: list length {} differs from count {expected}", tag(), list.len()));
                    } else if let Ok(n) = listing.as_mut() {
                        *n += 1;
                    }
                }
                let budget = list.len() as u64 * k * k * k + stats.counting_work();
                worst_ratio = worst_ratio.max(stats.list_ops as f64 / budget.max(1) as f64);
            }
        }
    }
    let elapsed = start.elapsed();
    let runs = corpus.len() * pats.len() * 2;
    report.record(
        1,
        "counting equals oracle",
        counting.and_then(|n| {
            check(n == runs && corpus.len() >= 200, || format!("{n} of {runs} runs matched"))?;
            Ok(format!(
                "{n} runs on {} hosts (genus <= {max_genus}), corpus total {:.1}s",
                corpus.len(),
                elapsed.as_secs_f64()
            ))
        }),
    );
    report.record(
        2,
        "listing equals oracle",
        listing.and_then(|n| {
            check(n == runs, || format!("{n} of {runs} runs matched"))?;
            Ok(format!("{n} runs, no duplicates, lengths equal counts"))
        }),
    );
    report.record(
        9,
        "output-sensitive listing",
        check(worst_ratio <= LIST_OPS_FACTOR, || {
            format!("ops / (m_iso k^3 + counting work) reached {worst_ratio:.3} > {LIST_OPS_FACTOR}")
        })
        .map(|_| format!("max ops ratio {worst_ratio:.3} <= {LIST_OPS_FACTOR}")),
    );
}

struct Built {
    label: String,
    map: Map,
    toroidal: bool,
}

fn width_corpora() -> Vec<Built> {
    let mut out = Vec::new();
    for w in [2, 3, 4, 5, 7, 10, 13, 16, 20] {
        for h in [1, 2, 3, 6, 11, 20] {
            if w * h >= 3 && h <= w {
                out.push(Built { label: format!("grid {w}x{h}"), map: generators::grid(w, h), toroidal: false });
            }
        }
    }
    for rim in 3..=50 {
        out.push(Built { label: format!("wheel W_{rim}"), map: generators::wheel(rim), toroidal: false });
    }
    let mut rng = StdRng::seed_from_u64(0x5eed_0003);
    for i in 0..100 {
        out.push(Built {
            label: format!("random planar #{i}"),
            map: generators::random_planar(60, &mut rng),
            toroidal: false,
        });
    }
    for (w, h) in [(3, 3), (4, 5), (6, 6), (8, 5), (10, 10)] {
        let mut rng = StdRng::seed_from_u64((w * 100 + h) as u64);
        out.push(Built {
            label: format!("torus grid {w}x{h}"),
            map: generators::torus_grid(w, h, |_, _| match rng.gen_range(0..3) {
                0 => Some(true),
                1 => Some(false),
                _ => None,
            }),
            toroidal: true,
        });
    }
    for i in 0..50 {
        out.push(Built {
            label: format!("random toroidal #{i}"),
            map: generators::random_toroidal(60, &mut rng),
            toroidal: true,
        });
    }
    out.push(Built { label: "K5".into(), map: generators::toroidal_k5(), toroidal: true });
    out.push(Built { label: "K3,3".into(), map: generators::toroidal_k33(), toroidal: true });
    out
}

fn width_criteria(report: &mut Report) {
    let start = Instant::now();
    let corpora = width_corpora();
    let mut widths = Ok(0usize);
    let mut leftovers = Ok(0usize);
    let mut extra = Vec::new();
    let mut rng = StdRng::seed_from_u64(0x5eed_0004);
    for _ in 0..20 {
        extra.push(generators::random_planar(40, &mut rng));
        extra.push(generators::random_toroidal(40, &mut rng));
        let n = rng.gen_range(6..=14);
        extra.push(generators::random_surface(n, rng.gen_range(2..=6), 2, &mut rng));
    }
    for b in &corpora {
        let roots = [0, b.map.vertex_count() / 2, b.map.vertex_count() - 1];
        for root in roots {
            let ssd = match construct_ssd(&b.map, root) {
                Ok(s) => s,
                Err(e) => {
                    widths = Err(format!("{} root {root}: {e}", b.label));
                    continue;
                }
            };
            let d = ssd.eccentricity;
            let bound = if b.toroidal { width_bound(1, d) } else { 2 * d + 1 };
            if ssd.width() > bound && widths.is_ok() {
                widths = Err(format!("{} root {root}: width {} > {bound}", b.label, ssd.width()));
            } else if let Ok(n) = widths.as_mut() {
                *n += 1;
            }
            check_leftover(&mut leftovers, &b.label, &ssd);
        }
    }
    let elapsed = start.elapsed();
    report.record(
        3,
        "width bounds",
        widths.and_then(|n| {
            check(elapsed < Duration::from_secs(10), || format!("took {:.1}s", elapsed.as_secs_f64()))?;
            Ok(format!("{n} decompositions within bound, {:.2}s", elapsed.as_secs_f64()))
        }),
    );
    for (i, m) in extra.iter().enumerate() {
        match construct_ssd(m, 0) {
            Ok(ssd) => check_leftover(&mut leftovers, &format!("random surface #{i}"), &ssd),
            Err(e) => leftovers = Err(format!("random surface #{i}: {e}")),
        }
    }
    report.record(4, "leftover edges equal twice the genus", leftovers.map(|n| format!("{n} decompositions")));

    let mut genus = check(generators::cube().genus().ok() == Some(0), || "cube genus is not 0".into())
        .and(check(generators::toroidal_k5().genus().ok() == Some(1), || "K5 genus is not 1".into()))
        .and(check(generators::toroidal_k33().genus().ok() == Some(1), || "K3,3 genus is not 1".into()));
    let mut checked = 0;
    for m in corpora.iter().map(|b| &b.map).chain(&extra).chain(oracle_corpus().iter()) {
        let (n, e, g) = (m.vertex_count(), m.edge_count(), m.genus().unwrap());
        if n >= 3 && m.is_simple() {
            checked += 1;
            if e + 6 > 3 * n + 6 * g && genus.is_ok() {
                genus = Err(format!("n={n} m={e} g={g} breaks the edge bound"));
            }
        }
    }
    report.record(5, "genus values and edge bound", genus.map(|_| format!("3 fixed maps, edge bound on {checked} maps")));
}

fn check_leftover(acc: &mut Result<usize, String>, label: &str, ssd: &surfsplit::ssd::Ssd) {
    let Some(first) = ssd.first_stage.as_ref() else {
        return;
    };
    if first.leftover.len() != 2 * ssd.genus {
        if acc.is_ok() {
            *acc = Err(format!("{label}: {} leftover edges, genus {}", first.leftover.len(), ssd.genus));
        }
    } else if let Ok(n) = acc.as_mut() {
        *n += 1;
    }
}

fn to_pins(pins: &[Option<usize>]) -> Vec<(u32, usize)> {
    pins.iter().enumerate().filter_map(|(p, v)| v.map(|v| (p as u32, v))).collect()
}

fn entry_matches(entry: &Entry, class: &OracleClass) -> bool {
    let pins: Vec<Option<usize>> = entry.pins.iter().map(|p| p.map(usize::from)).collect();
    entry.colors == class.colors
        && pins.iter().map(Option::is_some).eq(class.pins.iter().map(Option::is_some))
        && entry.graph.vertex_count() == class.graph.vertex_count()
        && entry.graph.edge_count() == class.graph.edge_count()
        && pinned_isomorphic(&entry.graph.to_graph(), &to_pins(&pins), &class.graph, &to_pins(&class.pins)).unwrap()
}

fn k_correctness(report: &mut Report) {
    let mut rng = StdRng::seed_from_u64(0x5eed_0006);
    let mut hosts = vec![generators::planar_k4(), generators::cube(), generators::wheel(5), generators::toroidal_k5()];
    for i in 0..12 {
        hosts.push(if i % 2 == 0 {
            generators::random_planar(10, &mut rng)
        } else {
            generators::random_toroidal(10, &mut rng)
        });
    }
    let mut outcome: Result<usize, String> = Ok(0);
    'hosts: for (h, map) in hosts.iter().enumerate() {
        let host = map.underlying();
        let ssd = construct_ssd(map, 0).unwrap();
        let prepared = Prepared::new(&host, &ssd.bd).unwrap();
        let q = rng.gen_range(1..=3);
        let coloring = Coloring::new((0..host.vertex_count()).map(|_| rng.gen_range(1..=q as u8)).collect(), q).unwrap();
        for k in [2, 3, 4] {
            for induced in [false, true] {
                let options = DpOptions { induced, prune: false, record: true };
                let run = dp::run(&host, &prepared, &coloring, &Limits::vertices(k), options).unwrap();
                for (e, table) in run.tables.iter().enumerate() {
                    let below = prepared.edges_below(e);
                    let mid = prepared.mids.mid(e);
                    let classes = brute_table(&host, &below, mid, &coloring, k, induced);
                    let mut used = vec![false; table.len()];
                    let mut fail = None;
                    if classes.len() != table.len() {
                        fail = Some(format!("{} entries, {} classes", table.len(), classes.len()));
                    }
                    for c in &classes {
                        if fail.is_some() {
                            break;
                        }
                        let hit: Vec<usize> = (0..table.len()).filter(|&i| entry_matches(&table.entries[i], c)).collect();
                        match hit.as_slice() {
                            [i] if table.entries[*i].count == c.count && !used[*i] => used[*i] = true,
                            [i] => fail = Some(format!("count {} vs oracle {}", table.entries[*i].count, c.count)),
                            _ => fail = Some(format!("{} entries match one class", hit.len())),
                        }
                    }
                    if let NodeKind::Leaf(_) = prepared.bd.kind(prepared.rooted.as_ref().unwrap().lower[e]) {
                        if mid.len() == 2 && k >= 2 && table.len() != if induced { 4 } else { 5 } {
                            fail = Some(format!("leaf table with {} entries", table.len()));
                        }
                    }
                    if let Some(f) = fail {
                        outcome = Err(format!("host {h}, k={k}, induced={induced}, tree edge {e}: {f}"));
                        break 'hosts;
                    }
                    if let Ok(n) = outcome.as_mut() {
                        *n += 1;
                    }
                }
            }
        }
    }
    let leaves = (2..=5).all(|k| {
        [(false, 5), (true, 4)].iter().all(|&(induced, want)| {
            let options = DpOptions { induced, prune: false, record: false };
            init_leaf_table((0, 1), 0, &[0, 1], &Coloring::uniform(2), &Limits::vertices(k), options, &mut Canonizer::default())
                .len()
                == want
        })
    });
    report.record(
        6,
        "tables are k-correct",
        outcome.and_then(|n| {
            check(leaves, || "a leaf table has the wrong size".into())?;
            Ok(format!("{n} tables on {} hosts, leaf sizes 5/4", hosts.len()))
        }),
    );
}

fn all_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    (0..1u32 << pairs.len())
        .map(|mask| graph(n, &pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect::<Vec<_>>()))
        .collect()
}

fn sequences(n: usize, len: usize) -> Vec<Vec<usize>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for s in sequences(n, len - 1) {
        for v in 0..n {
            if !s.contains(&v) {
                let mut t = s.clone();
                t.push(v);
                out.push(t);
            }
        }
    }
    out
}

fn labeled(seq: &[usize]) -> Vec<(u32, usize)> {
    seq.iter().enumerate().map(|(i, &v)| (i as u32, v)).collect()
}

/// One representative per isomorphism class of graphs on `n` vertices.
fn class_representatives(n: usize) -> Vec<Graph> {
    let mut reps: Vec<Graph> = Vec::new();
    let mut seen = BTreeSet::new();
    for g in all_graphs(n) {
        if seen.insert(surfsplit::iso::canonical_form(&g, &[]).unwrap()) {
            reps.push(g);
        }
    }
    reps
}

fn equivalence_agreement(report: &mut Report) {
    let mut pairs = 0u64;
    let mut positive = 0u64;
    let mut outcome = Ok(());
    let mut compare = |h1: &Graph, p1: &[(u32, usize)], h2: &Graph, p2: &[(u32, usize)]| {
        let a = pinned_isomorphic(h1, p1, h2, p2).unwrap();
        let b = equivalent_via_gadget(h1, p1, h2, p2).unwrap();
        pairs += 1;
        positive += u64::from(a);
        if a != b && outcome.is_ok() {
            outcome = Err(format!("disagree on {:?} {p1:?} vs {:?} {p2:?}", h1.edges(), h2.edges()));
        }
    };
    // every labeled graph pair and every pin sequence up to four vertices
    for n in 1..=4 {
        let graphs = all_graphs(n);
        for len in 0..=n {
            let seqs = sequences(n, len);
            for h1 in &graphs {
                for h2 in graphs.iter().filter(|h2| h2.edge_count() == h1.edge_count()) {
                    let first = labeled(&seqs[0]);
                    for s2 in &seqs {
                        compare(h1, &first, h2, &labeled(s2));
                    }
                }
            }
        }
    }
    // class representatives on five and six vertices, every pinned subset
    for n in 5..=6 {
        let reps = class_representatives(n);
        for (a, h1) in reps.iter().enumerate() {
            for h2 in reps[a..].iter().filter(|h2| h2.edge_count() == h1.edge_count()) {
                for subset in 0..1u32 << n {
                    let seq: Vec<usize> = (0..n).filter(|v| subset >> v & 1 == 1).collect();
                    let pins = labeled(&seq);
                    compare(h1, &pins, h2, &pins);
                    let mut rev = seq.clone();
                    rev.reverse();
                    compare(h1, &pins, h2, &labeled(&rev));
                }
            }
        }
    }
    report.record(
        7,
        "pinned isomorphism agrees with gadget route",
        outcome.map(|_| format!("{pairs} pairs, {positive} equivalent")),
    );
}

fn scaling(report: &mut Report) {
    let k3 = graph(3, &[(0, 1), (1, 2), (2, 0)]);
    let sides = [10, 20, 40, 80, 100];
    let mut times = Vec::new();
    let mut tables = Vec::new();
    let start = Instant::now();
    for &s in &sides {
        let map = generators::grid(s, s);
        let repeats = if s <= 40 { 5 } else { 3 };
        let mut best = Duration::MAX;
        let mut max_table = 0;
        for _ in 0..repeats {
            let t = Instant::now();
            let (count, stats) = count_isomorphs(&map, 0, &k3, false).unwrap();
            best = best.min(t.elapsed());
            assert_eq!(count, BigUint::from(0u32));
            max_table = stats.max_table;
        }
        times.push(best.as_secs_f64());
        tables.push(max_table);
    }
    let mut outcome = Ok(());
    for i in 1..sides.len() {
        let size_ratio = (sides[i] * sides[i]) as f64 / (sides[i - 1] * sides[i - 1]) as f64;
        let time_ratio = times[i] / times[i - 1];
        if time_ratio > TIME_SLACK * size_ratio && outcome.is_ok() {
            outcome = Err(format!("n {} -> {}: time ratio {time_ratio:.2} > {TIME_SLACK} x {size_ratio:.2}", sides[i - 1].pow(2), sides[i].pow(2)));
        }
    }
    if tables.iter().any(|&t| t != tables[0]) && outcome.is_ok() {
        outcome = Err(format!("max table sizes vary: {tables:?}"));
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(60) && outcome.is_ok() {
        outcome = Err(format!("took {:.1}s", elapsed.as_secs_f64()));
    }
    let ms: Vec<String> = times.iter().map(|t| format!("{:.1}ms", t * 1e3)).collect();
    report.record(
        8,
        "near-linear scaling on grids",
        outcome.map(|_| format!("times {} for n = 100..10000, max table {}", ms.join(" "), tables[0])),
    );
}

fn main() -> std::process::ExitCode {
    let mut report = Report { lines: Vec::new() };
    oracle_criteria(&mut report);
    width_criteria(&mut report);
    k_correctness(&mut report);
    equivalence_agreement(&mut report);
    scaling(&mut report);
    report.lines.sort_by_key(|l| l.0);
    println!("summary:");
    for (_, _, line) in &report.lines {
        println!("  {line}");
    }
    let failed = report.lines.iter().filter(|l| !l.1).count();
    println!("acceptance: {} passed, {failed} failed", report.lines.len() - failed);
    if failed == 0 {
        std::process::ExitCode::SUCCESS
    } else {
        std::process::ExitCode::FAILURE
    }
}
