//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use wormhole_core::coherent::{consistency, cycle_sum_consistency};
use wormhole_core::continued_fraction::{dual_chain, eval_chain, expand_rational, l_operation, r_operation, recognize_w_chain};
use wormhole_core::oracle::{
    accordion_census, at_most_two_report, bijection_check, companion_graph_check, htu_suite, scan_wormholes,
    write_scan_jsonl, ScanRecord,
};
use wormhole_core::triangulation::ExtendedZeroChain;
use wormhole_core::wormhole::{
    classify_families, cyclic_permutation, dual_of_label, htu_reduce, recover_singularity, reframe_chain, ww_decompositions,
    WWSequence,
};
use wormhole_core::{ExactRational, HJChain, SingularityLabel};

type Outcome = std::result::Result<String, String>;

macro_rules! check {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn chain(entries: &[u64]) -> HJChain {
    HJChain::new(entries.to_vec()).expect("valid chain")
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

const RES_31901: [u64; 13] = [4, 2, 2, 2, 2, 5, 7, 2, 2, 3, 2, 2, 6];
const DUAL_31901: [u64; 16] = [2, 2, 7, 2, 2, 3, 2, 2, 2, 2, 5, 5, 2, 2, 2, 2];
const RES_40223: [u64; 14] = [2, 2, 2, 2, 2, 5, 7, 2, 2, 3, 2, 2, 7, 3];

fn hj_arithmetic() -> Outcome {
    let value = ExactRational::new(31901, 10000).map_err(err)?;
    let start = Instant::now();
    let expanded = expand_rational(&value).map_err(err)?;
    let dual = dual_chain(&expanded).map_err(err)?;
    let first = start.elapsed();
    check!(expanded.entries() == RES_31901, "expansion {expanded}");
    check!(dual.entries() == DUAL_31901, "dual {dual}");
    const REPS: u32 = 1000;
    let start = Instant::now();
    for _ in 0..REPS {
        let e = expand_rational(&value).map_err(err)?;
        std::hint::black_box(dual_chain(&e).map_err(err)?);
    }
    let mean = start.elapsed() / REPS;
    check!(first < Duration::from_millis(1) && mean < Duration::from_millis(1), "first {:.3} ms, mean {:.3} ms", ms(first), ms(mean));
    Ok(format!("exact match; first call {:.3} ms, mean {:.4} ms", ms(first), ms(mean)))
}

fn decompositions() -> Outcome {
    let seq = WWSequence::new(DUAL_31901.to_vec()).map_err(err)?;
    let d = ww_decompositions(&seq);
    let pairs: Vec<(usize, usize)> = d.iter().map(|d| (d.alpha, d.beta)).collect();
    check!(pairs == [(1, 10), (5, 13)], "pairs {pairs:?}");
    let expected: [ExtendedZeroChain; 2] =
        ["1,2,7,2,2,3,2,2,2,1,5,5,2,2,2,2|3".parse().map_err(err)?, "2,2,7,2,1,3,2,2,2,2,5,5,1,2,2,2|3".parse().map_err(err)?];
    check!(d[0].chain == expected[0] && d[1].chain == expected[1], "chains {} and {}", d[0].chain, d[1].chain);
    Ok(format!("{pairs:?} with chains {} and {}", d[0].chain, d[1].chain))
}

fn recovery() -> Outcome {
    let families = classify_families(5).map_err(err)?;
    let family = families.iter().find(|f| f.family.m == 3).ok_or("no family for n=5, m=3")?;
    let pair = family.instantiate(&[7]).map_err(err)?;
    check!(pair.weights == [7, 3, 5, 5, 3], "weights {:?}", pair.weights);
    let rec = recover_singularity(&pair.p0, &pair.pm).map_err(err)?;
    check!(rec.label == SingularityLabel::new(31901, 10000).map_err(err)?, "recovered {}", rec.label);
    check!(rec.minimal_resolution.entries() == RES_31901, "resolution {}", rec.minimal_resolution);
    let decomps: Vec<ExtendedZeroChain> =
        ww_decompositions(&WWSequence::new(DUAL_31901.to_vec()).map_err(err)?).into_iter().map(|d| d.chain).collect();
    check!(
        decomps.contains(&pair.p0) && decomps.contains(&pair.pm),
        "instantiated chains {} / {} are not the decomposition chains",
        pair.p0,
        pair.pm
    );
    check!(pair.valid_reframings.contains(&15), "reframings {:?}", pair.valid_reframings);
    let rec2 = recover_singularity(&reframe_chain(&pair.p0, 15), &reframe_chain(&pair.pm, 15)).map_err(err)?;
    check!(rec2.label == SingularityLabel::new(40223, 33798).map_err(err)?, "reframed {}", rec2.label);
    check!(rec2.minimal_resolution.entries() == RES_40223, "reframed resolution {}", rec2.minimal_resolution);
    let rotated = cyclic_permutation(&WWSequence::new(DUAL_31901.to_vec()).map_err(err)?, 15).map_err(err)?;
    check!(rotated.to_chain() == rec2.dual, "rotated dual {} vs {}", rotated.to_chain(), rec2.dual);
    check!(dual_of_label(&rec2.label) == rec2.dual, "dual of {} disagrees", rec2.label);
    Ok(format!("{} then {} via shift 15, resolution {}", rec.label, rec2.label, rec2.minimal_resolution))
}

fn family_tables() -> Outcome {
    let start = Instant::now();
    let mut got = Vec::new();
    for n in 2..=5 {
        for f in classify_families(n).map_err(err)? {
            let w: Vec<String> = f.weights.iter().map(|a| a.to_string()).collect();
            got.push((n, f.family.m, w.join(","), f.family.param_min.clone()));
        }
    }
    let elapsed = start.elapsed();
    let expected: Vec<(usize, usize, String, Vec<i64>)> = [
        (2, 1, "t,t", 3),
        (3, 1, "t,t-2,t", 5),
        (3, 2, "t,t,t-2", 5),
        (4, 1, "t,t,t,t", 3),
        (4, 3, "t,t-2,t,t-2", 5),
        (5, 1, "t,t,t-2,t,t", 5),
        (5, 2, "t,t+4,t,t+2,t+2", 3),
        (5, 3, "t,t-4,t-2,t-2,t-4", 7),
        (5, 4, "t,t,t,t,t-2", 5),
    ]
    .into_iter()
    .map(|(n, m, w, min)| (n, m, w.to_string(), vec![min]))
    .collect();
    check!(got == expected, "families {got:?}");
    check!(!consistency(4, 2), "n=4, m=2 reported consistent");
    check!(elapsed < Duration::from_secs(1), "took {:.1} ms", ms(elapsed));
    Ok(format!("{} families for n=2..5, n=4 m=2 inconsistent, {:.1} ms", got.len(), ms(elapsed)))
}

fn jsonl(records: &[ScanRecord]) -> Vec<u8> {
    let mut out = Vec::new();
    for r in records {
        out.extend(serde_json::to_string(r).expect("records serialize").bytes());
        out.push(b'\n');
    }
    out
}

fn at_most_two(records: &[ScanRecord], scan_time: Duration) -> Outcome {
    let start = Instant::now();
    let report = at_most_two_report(records, 1).map_err(err)?;
    let total = scan_time + start.elapsed();
    check!(report.m_max == 1000, "scan stopped at m = {}", report.m_max);
    check!(report.max_count == 2 && report.violations.is_empty(), "max count {}, violations {:?}", report.max_count, report.violations);
    check!(report.library_disagreements.is_empty(), "library disagrees on {:?}", report.library_disagreements);
    check!(total <= Duration::from_secs(120), "single-threaded run took {:.1} s", total.as_secs_f64());

    let start = Instant::now();
    let mut parallel = Vec::new();
    let lines = write_scan_jsonl(1000, 4, &mut parallel).map_err(err)?;
    let t4 = start.elapsed();
    check!(lines == records.len() && parallel == jsonl(records), "jobs 4 output differs from jobs 1");

    let cores = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let speedup = scan_time.as_secs_f64() / t4.as_secs_f64();
    let ideal = cores.min(4) as f64;
    // Allow 50% slack against the ideal for the cores that actually exist.
    check!(speedup >= 0.5 * ideal, "speedup {speedup:.2}x with {cores} core(s), ideal {ideal:.0}x");
    Ok(format!(
        "{} labels, {} wormholes ({} basic), counts {:?}, max 2, 0 violations; single-threaded {:.1} s; jobs 4 byte-identical, speedup {:.2}x on {} core(s)",
        report.labels,
        report.wormholes,
        report.basic,
        report.distribution,
        total.as_secs_f64(),
        speedup,
        cores
    ))
}

fn consistency_oracle() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    let mut disagreements = Vec::new();
    for n in 2..=64 {
        for m in 1..n {
            cases += 1;
            if consistency(n, m) != cycle_sum_consistency(n, m).map_err(err)? {
                disagreements.push((n, m));
            }
        }
    }
    let elapsed = start.elapsed();
    check!(cases == 2016 && disagreements.is_empty(), "{cases} cases, disagreements {disagreements:?}");
    check!(elapsed < Duration::from_secs(1), "took {:.1} ms", ms(elapsed));
    Ok(format!("{cases} cases agree, {:.1} ms", ms(elapsed)))
}

fn bijection_suite() -> Outcome {
    let b = bijection_check(12).map_err(err)?;
    check!(
        b.roundtrip_failures == 0 && b.sum_rule_failures == 0 && b.chain_set_mismatches.is_empty(),
        "roundtrip {}, sum rule {}, chain sets {:?}",
        b.roundtrip_failures,
        b.sum_rule_failures,
        b.chain_set_mismatches
    );
    let c = accordion_census(10).map_err(err)?;
    check!(
        c.mismatches == 0 && c.adjacency_failures == 0 && c.without_standard_frame_up_to_reflection.is_empty(),
        "census mismatches {}, adjacency {}, unframeable {:?}",
        c.mismatches,
        c.adjacency_failures,
        c.without_standard_frame_up_to_reflection
    );
    Ok(format!(
        "{} framed triangulations roundtrip; {} accordions among {} triangulations, {} with >= 2 weights all constructed",
        b.framed, c.accordions, c.triangulations, c.with_two_or_more_weights
    ))
}

fn htu(records: &[ScanRecord]) -> Outcome {
    let within: Vec<ScanRecord> = records.iter().filter(|r| r.m <= 500).cloned().collect();
    let report = htu_suite(&within);
    check!(report.failures.is_empty(), "failures {:?}", report.failures);
    let pinned = htu_reduce(&WWSequence::new(vec![3, 2, 2, 3]).map_err(err)?).map_err(err)?;
    check!(pinned.is_degenerate(), "[3,2,2,3] reduced to {:?}", pinned);
    check!(
        dual_of_label(&SingularityLabel::new(16, 9).map_err(err)?).entries() == [3, 2, 2, 3],
        "1/16(1,9) does not have dual [3,2,2,3]"
    );
    Ok(format!(
        "{} index-1 wormholes: {} basic, {} degenerate, {} ties, at most {} steps",
        report.index_one_wormholes, report.basic, report.degenerate, report.ties, report.max_steps
    ))
}

fn reduced_chain() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(2u64..=12, 1..=15)
}

fn property_tests(records: &[ScanRecord]) -> Outcome {
    let mut runner = TestRunner::new(Config { cases: 512, failure_persistence: None, ..Config::default() });
    runner
        .run(&reduced_chain(), |entries| {
            let c = chain(&entries);
            let d = dual_chain(&c).expect("reduced");
            prop_assert_eq!(dual_chain(&d).expect("reduced"), c.clone());
            let (v, w) = (eval_chain(&c).expect("admissible"), eval_chain(&d).expect("admissible"));
            prop_assert_eq!(v.numer(), w.numer());
            prop_assert_eq!(v.numer() - v.denom(), w.denom().clone());
            Ok(())
        })
        .map_err(|e| format!("duality: {e}"))?;

    let mut words = 0;
    let mut seen = std::collections::BTreeSet::new();
    for len in 0..=8u32 {
        for bits in 0..(1u32 << len) {
            let mut c = chain(&[4]);
            for i in 0..len {
                c = if bits >> i & 1 == 0 { l_operation(&c) } else { r_operation(&c) };
            }
            let params = recognize_w_chain(&c).ok_or_else(|| format!("W-chain {c} not recognized"))?;
            let n2 = &params.n * &params.n;
            let regenerated = expand_rational(&ExactRational::new(n2, &params.n * &params.a - 1).map_err(err)?).map_err(err)?;
            check!(regenerated == c, "({}, {}) regenerates {regenerated}, not {c}", params.n, params.a);
            check!(seen.insert((params.n.clone(), params.a.clone())), "({}, {}) recognized twice", params.n, params.a);
            words += 1;
        }
    }

    let companions = companion_graph_check(records).map_err(err)?;
    check!(companions.failures.is_empty(), "companions: {:?}", companions.failures);
    Ok(format!(
        "512 duality cases, {words} W-chain words, {} basic wormholes ({} graphs) with companions matching graphs",
        companions.basic_wormholes, companions.graphs
    ))
}

fn main() {
    let mut failed = 0;
    let mut report = |id: u32, name: &str, outcome: Outcome| {
        match outcome {
            Ok(detail) => println!("PASS {id} {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {id} {name}: {detail}");
            }
        }
    };
    report(1, "hj-arithmetic", hj_arithmetic());
    report(2, "decompositions", decompositions());
    report(3, "recovery-roundtrip", recovery());
    report(4, "family-tables", family_tables());

    let start = Instant::now();
    let scan = scan_wormholes(1000, 1);
    let scan_time = start.elapsed();
    let records = match scan {
        Ok(r) => r,
        Err(e) => {
            for (id, name) in [(5, "at-most-two"), (8, "htu-suite"), (9, "property-tests")] {
                report(id, name, Err(format!("scan failed: {e}")));
            }
            Vec::new()
        }
    };
    if !records.is_empty() {
        report(5, "at-most-two", at_most_two(&records, scan_time));
    }
    report(6, "consistency-oracle", consistency_oracle());
    report(7, "bijection-suite", bijection_suite());
    if !records.is_empty() {
        report(8, "htu-suite", htu(&records));
        report(9, "property-tests", property_tests(&records));
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
