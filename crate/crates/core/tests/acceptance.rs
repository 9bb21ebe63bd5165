//! End-to-end acceptance checks, one line per criterion.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use cactus_gcc::batch::{batch_instance, BatchConfig};
use cactus_gcc::cactus::{
    cactus_oracle, is_tree_cover, recognize_cactus, tree_cover_bounds, tree_cover_oracle, CactusClass,
};
use cactus_gcc::cert::rules::GRAPH_ID;
use cactus_gcc::cert::verify::verify_vectors;
use cactus_gcc::cert::{gcc_check, msr_rules, verify_representation, CertifyOptions, Quantity, Rule, RuleInputs, ValueKind};
use cactus_gcc::ordering::{find_construction_ordering, validate_cdelta_graph, validate_ordering};
use cactus_gcc::ortho::{build_representation, default_ordering, DimPolicy, RepresentationBuilder};
use cactus_gcc::{Graph, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const CORPUS_SEED: u64 = 20_240_611;

fn corpus(count: usize, min_n: usize, max_n: usize, seed: u64) -> Vec<(Graph, u64)> {
    let cfg = BatchConfig { count, min_n, max_n, seed, ..Default::default() };
    (0..count).map(|i| batch_instance(&cfg, i).expect("feasible")).collect()
}

fn bowtie() -> Graph {
    Graph::from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap()
}

// i ~ j in the prism iff their cyclic distance on C6 is 2 or 3
fn prism() -> Graph {
    let mut g = Graph::empty(6);
    for (a, b) in [(0, 2), (2, 4), (4, 0), (1, 3), (3, 5), (5, 1), (0, 3), (1, 4), (2, 5)] {
        g.add_edge(a, b).unwrap();
    }
    g
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let g = Graph::cycle(6);
    let cyclic: Vec<usize> = (0..6).collect();
    ensure!(validate_cdelta_graph(&g, &cyclic) == Ok(true), "cyclic labeling is not C-delta");
    let profile = recognize_cactus(&g).map_err(|e| e.to_string())?;
    let ord = find_construction_ordering(&g, &profile).map_err(|e| e.to_string())?;
    ensure!(validate_ordering(&g, &ord).map_err(|e| e.to_string())?.valid, "construction ordering invalid");
    ensure!(validate_cdelta_graph(&g, &ord.order) == Ok(true), "construction ordering is not C-delta");

    let rep = build_representation(&g, DimPolicy::Fixed(5), 0).map_err(|e| e.to_string())?;
    ensure!(rep.target == prism(), "complement of C6 is not the prism");
    let cert = verify_representation(&rep, &prism()).map_err(|e| e.to_string())?;
    ensure!(cert.pattern_ok && cert.rank <= 5, "d=5 pattern check failed: {:?}", cert.mismatches);

    let rules = msr_rules(&g, &RuleInputs::default());
    let cycle = rules.about(GRAPH_ID, Quantity::Msr).find(|f| f.rule == Rule::Cycle);
    ensure!(cycle.map(|f| (f.value_kind, f.value)) == Some((ValueKind::Exact, 4)), "msr(C6) != 4");

    // 4 + 5 exceeds 8, so the certificate comes from the d=4 build
    let report = gcc_check(&g, &CertifyOptions::default()).map_err(|e| e.to_string())?;
    let ineq = report.inequality.ok_or("no inequality")?;
    ensure!(report.is_certified(), "not certified: {:?}", report.reason);
    ensure!(report.msr_g.as_ref().map(|m| m.value) == Some(4), "reported msr(G) is not 4");
    ensure!(report.dim == 4 && ineq.lhs <= 8, "certificate uses d = {}, lhs {}", report.dim, ineq.lhs);
    let at5 = gcc_check(&g, &CertifyOptions { dim: DimPolicy::Fixed(5), ..Default::default() }).map_err(|e| e.to_string())?;
    let lhs5 = at5.inequality.ok_or("no inequality at d=5")?.lhs;
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!(
        "prism pattern exact at d=5 (rank {}); certified {} + {} <= 8 at d=4; d=5 alone gives {lhs5} > 8; {:.0?}",
        cert.rank, 4, report.msr_comp_bound.unwrap_or(0), elapsed
    ))
}

fn criterion_2(corpus: &[(Graph, u64)]) -> Outcome {
    let start = Instant::now();
    let mut classes = [0usize; 3];
    for (i, (g, seed)) in corpus.iter().enumerate() {
        let rep = build_representation(g, DimPolicy::Fixed(5), *seed).map_err(|e| format!("instance {i}: {e}"))?;
        let cert = verify_representation(&rep, &g.complement()).map_err(|e| e.to_string())?;
        ensure!(cert.pattern_ok && cert.rank <= 5, "instance {i}: pattern_ok {} rank {}", cert.pattern_ok, cert.rank);
        classes[recognize_cactus(g).unwrap().class as usize] += 1;
    }
    let elapsed = start.elapsed();
    ensure!(classes.iter().all(|&c| c > 0), "classes not spanned: {classes:?}");
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    Ok(format!(
        "{} cacti (trees {}, unicyclic {}, multicyclic {}) verified with rank <= 5 in {:.1?}",
        corpus.len(),
        classes[0],
        classes[1],
        classes[2],
        elapsed
    ))
}

fn criterion_3(corpus: &[(Graph, u64)]) -> Outcome {
    let mut dims = [0usize; 3];
    for (i, (g, seed)) in corpus.iter().enumerate() {
        let r = gcc_check(g, &CertifyOptions { seed: *seed, ..Default::default() }).map_err(|e| format!("instance {i}: {e}"))?;
        ensure!(r.is_certified(), "instance {i} ({:?}): {:?}", r.class, r.reason);
        let want = match r.class {
            CactusClass::Tree => 3,
            CactusClass::Unicyclic => 4,
            CactusClass::Multicyclic => 5,
        };
        ensure!(r.dim == want && r.fallback_from.is_none(), "instance {i}: certified at d = {}", r.dim);
        if r.class == CactusClass::Multicyclic {
            ensure!(r.tree_cover.lower >= 3, "instance {i}: tree cover lower bound {}", r.tree_cover.lower);
        }
        dims[want - 3] += 1;
    }
    Ok(format!(
        "{}/{} certified (d=3: {}, d=4: {}, d=5: {})",
        corpus.len(),
        corpus.len(),
        dims[0],
        dims[1],
        dims[2]
    ))
}

fn small_corpus() -> Vec<(Graph, u64)> {
    corpus(120, 3, 10, CORPUS_SEED + 1)
}

fn criterion_4(small: &[(Graph, u64)]) -> Outcome {
    let (mut uni, mut multi) = (0, 0);
    for (i, (g, _)) in small.iter().enumerate() {
        let class = recognize_cactus(g).unwrap().class;
        let cover = tree_cover_oracle(g).map_err(|e| e.to_string())?;
        ensure!(is_tree_cover(g, &cover), "instance {i}: oracle cover is not a tree cover");
        match class {
            CactusClass::Unicyclic => {
                ensure!(cover.value == 2, "instance {i}: unicyclic with T = {}", cover.value);
                uni += 1;
            }
            CactusClass::Multicyclic => {
                ensure!(cover.value >= 3, "instance {i}: multicyclic with T = {}", cover.value);
                multi += 1;
            }
            CactusClass::Tree => ensure!(cover.value == 1, "instance {i}: tree with T = {}", cover.value),
        }
    }
    let t = tree_cover_oracle(&bowtie()).unwrap().value;
    ensure!(t == 3, "bowtie T = {t}");
    ensure!(small.len() >= 50 && uni > 0 && multi > 0, "corpus too thin");
    Ok(format!("{} cacti with n <= 10: {uni} unicyclic with T = 2, {multi} multicyclic with T >= 3; bowtie T = 3", small.len()))
}

fn criterion_5(small: &[(Graph, u64)]) -> Outcome {
    let mut compared = 0;
    let graphs = small.iter().map(|(g, _)| g.clone()).chain([bowtie()]);
    for (i, g) in graphs.enumerate() {
        let profile = recognize_cactus(&g).unwrap();
        let t = tree_cover_bounds(&profile).unwrap().with_oracle(&tree_cover_oracle(&g).unwrap());
        let facts = msr_rules(&g, &RuleInputs { tree_cover: Some(t), ..Default::default() });
        facts.check_consistency().map_err(|e| format!("instance {i}: {e}"))?;
        let exact: Vec<(Rule, usize)> = facts
            .about(GRAPH_ID, Quantity::Msr)
            .filter(|f| f.value_kind == ValueKind::Exact)
            .map(|f| (f.rule, f.value))
            .collect();
        let identity = exact.iter().find(|(r, _)| *r == Rule::OuterplanarIdentity).map(|&(_, v)| v);
        let chains: Vec<usize> = exact
            .iter()
            .filter(|(r, _)| matches!(r, Rule::CutVertex | Rule::Pendant | Rule::Tree | Rule::Cycle | Rule::Chordal))
            .map(|&(_, v)| v)
            .collect();
        if let (Some(id), false) = (identity, chains.is_empty()) {
            ensure!(chains.iter().all(|&v| v == id), "instance {i}: chains {chains:?} vs identity {id}");
            compared += 1;
        }
    }
    ensure!(compared >= 50, "only {compared} graphs had both values");
    Ok(format!("{compared} graphs: rule chains and |G| - T(G) agree exactly"))
}

fn connected_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    (0u32..1 << pairs.len()).filter_map(move |mask| {
        let g = Graph::from_edges(n, pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &e)| e)).unwrap();
        g.is_connected().then_some(g)
    })
}

fn chorded_cycle(n: usize, a: usize, b: usize) -> Graph {
    let mut g = Graph::cycle(n);
    g.add_edge(a, b).unwrap();
    g
}

fn criterion_6() -> Outcome {
    let mut checked = 0;
    let mut cacti = 0;
    let mut agree = |g: &Graph| -> Result<(), String> {
        let fast = recognize_cactus(g).map_err(|e| e.to_string())?.is_cactus;
        let slow = cactus_oracle(g).map_err(|e| e.to_string())?;
        ensure!(fast == slow, "disagreement on {:?}", g.edges().collect::<Vec<_>>());
        checked += 1;
        cacti += fast as usize;
        Ok(())
    };
    for n in 1..=6 {
        for g in connected_graphs(n) {
            agree(&g)?;
        }
    }
    let mut extra = vec![Graph::complete(4), Graph::complete_bipartite(2, 3), Graph::complete_bipartite(3, 3)];
    for n in 4..=12 {
        for b in 2..n - 1 {
            extra.push(chorded_cycle(n, 0, b));
        }
    }
    // two triangles sharing an edge, and two cycles sharing a vertex
    extra.push(Graph::from_edges(4, [(0, 1), (1, 2), (2, 0), (1, 3), (3, 2)]).unwrap());
    extra.push(Graph::from_edges(7, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 5), (5, 6), (6, 0)]).unwrap());
    for g in &extra {
        agree(g)?;
    }
    Ok(format!("{checked} graphs ({cacti} cacti), zero disagreements"))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED + 7);
    let mut cases = 0;

    for _ in 0..400 {
        let n = rng.gen_range(0..12);
        let p: f64 = rng.gen();
        let mut g = Graph::empty(n);
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(p) {
                    g.add_edge(i, j).unwrap();
                }
            }
        }
        let c = g.complement();
        ensure!(c.complement() == g, "complement is not an involution");
        ensure!(g.edge_count() + c.edge_count() == n * n.saturating_sub(1) / 2, "edge counts do not add up");
        cases += 2;
    }

    for t in 0..250 {
        let n = rng.gen_range(3..=24);
        let cycles = rng.gen_range(0..=(n - 1) / 2);
        let g = cactus_gcc::cactus::generate_cactus_with(n, cycles, &mut rng).unwrap();
        let dim = [3, 4, 5][rng.gen_range(0..3)].max(match cycles {
            0 => 3,
            1 => 4,
            _ => 5,
        });
        let ord = default_ordering(&g).unwrap();
        let order = ord.order.clone();
        let seed = rng.gen();
        let mut b = RepresentationBuilder::<Rational, _>::new(&g, ord, dim, ChaCha8Rng::seed_from_u64(seed)).unwrap();
        for m in 1..=n {
            b.step().map_err(|e| format!("trial {t}, position {}: {e}", m - 1))?;
            let mut prefix = Graph::empty(m);
            for i in 0..m {
                for j in i + 1..m {
                    if g.has_edge(order[i], order[j]) {
                        prefix.add_edge(i, j).unwrap();
                    }
                }
            }
            let cert = verify_vectors(b.placed(), dim, &prefix.complement()).map_err(|e| e.to_string())?;
            ensure!(cert.pattern_ok, "trial {t}: prefix {m} pattern broken");
            ensure!(cert.pairwise_independent, "trial {t}: prefix {m} has parallel vectors");
        }
        cases += 2;

        let a = build_representation(&g, DimPolicy::Fixed(dim), seed).unwrap();
        let b = build_representation(&g, DimPolicy::Fixed(dim), seed).unwrap();
        ensure!(a == b, "trial {t}: same seed, different representation");
        cases += 1;
    }
    ensure!(cases >= 1000, "only {cases} cases");
    Ok(format!("{cases} property cases hold"))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let big = corpus(102, 6, 40, CORPUS_SEED);
    let small = small_corpus();
    let results: Vec<(&str, Outcome)> = vec![
        ("C6 end to end", criterion_1()),
        ("rank <= 5 over random cacti", criterion_2(&big)),
        ("certified over random cacti", criterion_3(&big)),
        ("tree cover numbers", criterion_4(&small)),
        ("rule base consistency", criterion_5(&small)),
        ("recognition matches oracle", criterion_6()),
        ("property suite", criterion_7()),
    ];
    let mut failed = 0;
    for (i, (name, outcome)) in results.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("criterion {} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed in {:.1?}", results.len() - failed, start.elapsed());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
