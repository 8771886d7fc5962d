//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use recolour::bench::{loglog_slope, mix_seed, run_bench, BenchConfig, Family};
use recolour::{
    bfs_distance, derive_params, generate, length_bound, mad, mad_bruteforce, peel, random_proper_colouring,
    recolor_over, summarize, verify_sequence, Colouring, Graph, GraphKind, Params, Peeling, Rational, RecolourSequence,
    RecolourStep,
};

const INSTANCES_PER_FAMILY: usize = 200;
const SLOPE_LIMIT: f64 = 1.35;

/// One recolouring run kept around for the later criteria.
struct Run {
    label: String,
    g: Graph,
    params: Params,
    peeling: Peeling,
    seq: RecolourSequence,
    valid: Result<(), String>,
}

fn run(label: String, g: Graph, k: usize, seed: u64) -> Run {
    let params = derive_params(mad(&g).unwrap(), k).unwrap_or_else(|| panic!("{label}: infeasible for k = {k}"));
    let peeling = peel(&g, params.d, params.epsilon).unwrap();
    let alpha = random_proper_colouring(&g, k, mix_seed(seed, 1, 0)).unwrap();
    let beta = random_proper_colouring(&g, k, mix_seed(seed, 2, 0)).unwrap();
    let seq = recolor_over(&g, &peeling, &alpha, &beta).unwrap();
    let valid = verify_sequence(&g, &alpha, &beta, &seq.steps).map_err(|f| f.to_string());
    Run {
        label,
        g,
        params,
        peeling,
        seq,
        valid,
    }
}

/// The four families of the validity suite, 200 instances each.
fn validity_instances() -> Vec<Run> {
    let mut jobs: Vec<(String, GraphKind, Option<usize>, u64)> = Vec::new();
    for i in 0..INSTANCES_PER_FAMILY {
        let seed = mix_seed(2024, i as u64, 0);
        let n = 1 + (i * 7919) % 200;
        for forests in [1, 2] {
            jobs.push((
                format!("forest_union t={forests} #{i}"),
                GraphKind::ForestUnion { n, forests, seed },
                None,
                seed,
            ));
        }
        jobs.push((format!("cycle #{i}"), GraphKind::Cycle(3 + i % 198), Some(4), seed));
        let (rows, cols) = (1 + i % 10, 1 + (i / 10) % 10);
        jobs.push((format!("grid #{i}"), GraphKind::Grid { rows, cols }, Some(5), seed));
    }
    jobs.into_par_iter()
        .map(|(label, kind, k, seed)| {
            let g = generate(kind).unwrap();
            // forest unions use k = d + 1 for the smallest admissible d
            let k = k.unwrap_or_else(|| (mad(&g).unwrap().floor() + 2) as usize);
            run(format!("{label} ({kind})"), g, k, seed)
        })
        .collect()
}

/// Every graph on 1..=5 vertices, by edge subset.
fn all_small_graphs() -> Vec<Graph> {
    let mut out = Vec::new();
    for n in 1..=5usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        for mask in 0u32..(1 << pairs.len()) {
            let edges = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e);
            out.push(Graph::from_edges(n, edges).unwrap());
        }
    }
    out
}

/// Proper colourings by filtering all `k^n` tuples; independent of the
/// library's enumerator.
fn proper_colourings(g: &Graph, k: usize) -> Vec<Colouring> {
    let n = g.n();
    let mut out = Vec::new();
    for code in 0..(k as u64).pow(n as u32) {
        let colours: Vec<usize> = (0..n)
            .map(|v| (code / (k as u64).pow(v as u32) % k as u64) as usize + 1)
            .collect();
        if g.edges().all(|(u, v)| colours[u] != colours[v]) {
            out.push(Colouring::new(colours, k).unwrap());
        }
    }
    out
}

struct Outcome {
    name: &'static str,
    failures: Vec<String>,
    detail: String,
}

impl Outcome {
    fn new(name: &'static str) -> Self {
        Outcome {
            name,
            failures: Vec::new(),
            detail: String::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }
}

fn criterion_1(runs: &[Run]) -> Outcome {
    let mut out = Outcome::new("1 validity suite");
    for r in runs {
        out.check(r.valid.is_ok(), || format!("{}: {:?}", r.label, r.valid));
        out.check(replay(&r.seq.start, &r.seq.steps) == r.seq.end, || {
            format!("{}: replay does not end at beta", r.label)
        });
    }
    out.detail = format!("{} instances", runs.len());
    out
}

fn replay(start: &Colouring, steps: &[RecolourStep]) -> Colouring {
    let mut colours = start.as_slice().to_vec();
    for s in steps {
        colours[s.vertex] = s.colour;
    }
    Colouring::new(colours, start.k()).unwrap()
}

fn criterion_2(runs: &[Run]) -> Outcome {
    let mut out = Outcome::new("2 length bound suite");
    let mut certified = 0;
    for r in runs.iter().filter(|r| r.peeling.all_size_bounds_met()) {
        certified += 1;
        let budget = length_bound(r.g.n(), r.params.d, r.params.epsilon);
        out.check(budget.admits(r.seq.len()), || {
            format!("{}: length {} > bound {}", r.label, r.seq.len(), budget.total_bound)
        });
        out.check(budget.admits_per_vertex(r.seq.max_recolourings()), || {
            format!(
                "{}: a vertex recoloured {} > T = {} times",
                r.label,
                r.seq.max_recolourings(),
                budget.per_vertex_max
            )
        });
    }
    out.detail = format!("{certified}/{} instances certified", runs.len());
    out
}

/// Structural and size checks on every layer of a peeling.
fn check_layers(out: &mut Outcome, label: &str, g: &Graph, peeling: &Peeling) -> usize {
    let (d, eps) = (peeling.d, peeling.epsilon);
    let mut checked = 0;
    for (j, cert) in peeling.certificates().iter().enumerate() {
        let host = peeling.host(j);
        out.check(cert.check(g, &host).is_ok(), || {
            format!("{label} layer {j}: {:?}", cert.check(g, &host))
        });
        let (host_graph, _) = g.induced_subgraph(&host).unwrap();
        let host_mad = mad(&host_graph).unwrap();
        if host_mad > Rational::from(d) - eps {
            continue;
        }
        checked += 1;
        let h = Rational::from(host.len());
        let s_size = Rational::from(cert.low_degree.len());
        let i_size = Rational::from(cert.independent.len());
        out.check(s_size >= eps * h / Rational::from(d), || {
            format!("{label} layer {j}: |S| < eps h / d")
        });
        out.check(i_size >= eps * h / Rational::from(d * d), || {
            format!("{label} layer {j}: |I| < eps h / d^2")
        });
    }
    checked
}

fn criterion_3(small: &[Graph]) -> (Outcome, Vec<(Graph, Peeling)>) {
    let mut out = Outcome::new("3 oracle equivalence (n <= 5)");
    let results: Vec<(Vec<String>, Graph, Peeling, usize)> = small
        .par_iter()
        .enumerate()
        .map(|(idx, g)| {
            let mut failures = Vec::new();
            let madval = mad(g).unwrap();
            let k = (madval.floor() + 2) as usize;
            let params = derive_params(madval, k).expect("k = floor(mad) + 2 is always feasible");
            let summary = summarize(g, k).unwrap();
            let budget = length_bound(g.n(), params.d, params.epsilon);
            if !summary.is_connected() {
                failures.push(format!(
                    "graph #{idx}: R_{k} has {} components",
                    summary.component_count
                ));
            }
            if !budget.admits(summary.diameter()) {
                failures.push(format!(
                    "graph #{idx}: diameter {} > bound {}",
                    summary.diameter(),
                    budget.total_bound
                ));
            }
            let peeling = peel(g, params.d, params.epsilon).unwrap();
            let colourings = proper_colourings(g, k);
            let mut rng = ChaCha8Rng::seed_from_u64(idx as u64);
            let mut pairs = 0;
            for _ in 0..10 {
                let alpha = colourings.choose(&mut rng).unwrap();
                let beta = colourings.choose(&mut rng).unwrap();
                let seq = recolor_over(g, &peeling, alpha, beta).unwrap();
                if let Err(f) = verify_sequence(g, alpha, beta, &seq.steps) {
                    failures.push(format!("graph #{idx}: invalid sequence: {f}"));
                }
                match bfs_distance(g, k, alpha, beta).unwrap() {
                    Some(dist) if dist <= seq.len() => {}
                    other => failures.push(format!("graph #{idx}: bfs {other:?} vs length {}", seq.len())),
                }
                pairs += 1;
            }
            (failures, g.clone(), peeling, pairs)
        })
        .collect();
    let mut peelings = Vec::new();
    let mut pairs = 0;
    for (failures, g, peeling, p) in results {
        out.failures.extend(failures);
        peelings.push((g, peeling));
        pairs += p;
    }
    out.detail = format!("{} graphs, {pairs} colouring pairs", small.len());
    (out, peelings)
}

fn criterion_4(small: &[Graph]) -> Outcome {
    let mut out = Outcome::new("4 mad exactness");
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut graphs: Vec<Graph> = small.to_vec();
    for _ in 0..500 {
        let n = rng.random_range(1..=12usize);
        let p: f64 = rng.random_range(0.05..0.95);
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|_| rng.random_bool(p))
            .collect();
        graphs.push(Graph::from_edges(n, edges).unwrap());
    }
    let failures: Vec<String> = graphs
        .par_iter()
        .enumerate()
        .filter_map(|(i, g)| {
            let (flow, brute) = (mad(g).unwrap(), mad_bruteforce(g).unwrap());
            (flow != brute).then(|| format!("graph #{i}: flow {flow} vs brute force {brute}"))
        })
        .collect();
    out.failures = failures;
    out.detail = format!("{} graphs", graphs.len());
    out
}

fn criterion_5(runs: &[Run], small: &[(Graph, Peeling)]) -> Outcome {
    let mut out = Outcome::new("5 special-set certificates");
    let per_run: Vec<Outcome> = runs
        .par_iter()
        .map(|r| (r.label.as_str(), &r.g, &r.peeling))
        .chain(small.par_iter().map(|(g, p)| ("small graph", g, p)))
        .map(|(label, g, peeling)| {
            let mut o = Outcome::new("");
            let checked = check_layers(&mut o, label, g, peeling);
            o.detail = checked.to_string();
            o
        })
        .collect();
    let mut layers = 0;
    for o in per_run {
        out.failures.extend(o.failures);
        layers += o.detail.parse::<usize>().unwrap();
    }
    out.detail = format!("{layers} layers checked");
    out
}

fn criterion_6() -> Outcome {
    let mut out = Outcome::new("6 scaling fit");
    let config = BenchConfig {
        family: Family::ForestUnion(1),
        sizes: vec![32, 64, 128, 256, 512],
        seeds: 20,
        k: 3,
        seed: 6,
        d_override: None,
        epsilon_override: None,
        oracle: false,
    };
    let rows = run_bench(&config).unwrap();
    for row in &rows {
        out.check(
            !row.certified || row.length as u128 <= row.bound.parse::<u128>().unwrap(),
            || format!("{}: length {} above bound {}", row.instance, row.length, row.bound),
        );
    }
    match loglog_slope(&rows) {
        Some(slope) => {
            out.check(slope <= SLOPE_LIMIT, || format!("slope {slope:.4} > {SLOPE_LIMIT}"));
            out.detail = format!("slope {slope:.4} <= {SLOPE_LIMIT} over {} rows", rows.len());
        }
        None => out.failures.push("no slope could be fitted".into()),
    }
    out
}

fn criterion_7() -> Outcome {
    let mut out = Outcome::new("7 hand-traced vectors");
    let col = |c: &[usize], k| Colouring::new(c.to_vec(), k).unwrap();

    let p3 = generate(GraphKind::Path(3)).unwrap();
    let params = Params::new(2, Rational::new(1, 2), 3).unwrap();
    let (alpha, beta) = (col(&[1, 2, 1], 3), col(&[2, 1, 2], 3));
    let seq = recolour::recolor(&p3, &alpha, &beta, &params).unwrap();
    let expected: Vec<RecolourStep> = [(0, 3), (2, 3), (1, 1), (0, 2), (2, 2)]
        .iter()
        .map(|&(v, c)| RecolourStep::new(v, c))
        .collect();
    out.check(seq.steps == expected, || format!("P3 sequence {:?}", seq.steps));
    out.check(verify_sequence(&p3, &alpha, &beta, &seq.steps).is_ok(), || {
        "P3 sequence invalid".into()
    });
    let dist = bfs_distance(&p3, 3, &alpha, &beta).unwrap();
    out.check(dist == Some(4), || format!("P3 distance {dist:?}"));

    let k2 = generate(GraphKind::Path(2)).unwrap();
    let dist = bfs_distance(&k2, 2, &col(&[1, 2], 2), &col(&[2, 1], 2)).unwrap();
    out.check(dist.is_none(), || format!("K2/k=2 distance {dist:?}"));

    let c4 = generate(GraphKind::Cycle(4)).unwrap();
    let s = summarize(&c4, 2).unwrap();
    out.check(
        (s.colouring_count, s.component_count, s.frozen_count) == (2, 2, 2),
        || format!("C4/k=2 {s:?}"),
    );

    let s = summarize(&k2, 3).unwrap();
    out.check(s.colouring_count == 6 && s.is_connected() && s.diameter() == 3, || {
        format!("K2/k=3 {s:?}")
    });
    out.detail = "P3, K2/k=2, C4/k=2, K2/k=3".into();
    out
}

fn report(outcome: &Outcome, started: Instant) -> bool {
    let ok = outcome.failures.is_empty();
    println!(
        "[{}] criterion {} ({}; {:.1}s)",
        if ok { "PASS" } else { "FAIL" },
        outcome.name,
        outcome.detail,
        started.elapsed().as_secs_f64()
    );
    for f in outcome.failures.iter().take(10) {
        println!("       {f}");
    }
    ok
}

fn main() -> ExitCode {
    let mut all_ok = true;

    let t = Instant::now();
    let runs = validity_instances();
    all_ok &= report(&criterion_1(&runs), t);
    let t = Instant::now();
    all_ok &= report(&criterion_2(&runs), t);

    let small = all_small_graphs();
    let t = Instant::now();
    let (c3, small_peelings) = criterion_3(&small);
    all_ok &= report(&c3, t);
    let t = Instant::now();
    all_ok &= report(&criterion_4(&small), t);
    let t = Instant::now();
    all_ok &= report(&criterion_5(&runs, &small_peelings), t);
    let t = Instant::now();
    all_ok &= report(&criterion_6(), t);
    let t = Instant::now();
    all_ok &= report(&criterion_7(), t);

    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
