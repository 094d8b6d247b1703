//! Brute-force ground truth used to cross-check the library.
//!
//! Nothing here calls the continued fraction evaluator or the hashed
//! decomposition search: HJ expansions are recomputed with machine integers,
//! decompositions are found by testing every pair, and candidates are
//! confirmed by cutting ears off the polygon.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::coherent::{build_coherent_graph, consistency, solve_parametric, CoherentGraph};
use crate::error::{Error, Result};
use crate::rational::SingularityLabel;
use crate::triangulation::{
    ear_cut, from_extended_chain, index_vector, is_accordion, standard_accordion, standard_frame, weights_of, ExtendedZeroChain,
    FramedTriangulation, Triangulation,
};
use crate::wormhole::{
    classify_families, htu_reduce, is_degenerate_pattern, p_resolution_report, recover_singularity, reframe_chain,
    ww_decompositions, HtuOutcome, WWSequence,
};

pub const MAX_ENUMERATION_SIZE: usize = 14;

/// All triangulations of the convex `p`-gon, `3 <= p <= 14`, in a fixed order.
pub fn enumerate_triangulations(p: usize) -> Result<Vec<Triangulation>> {
    if !(3..=MAX_ENUMERATION_SIZE).contains(&p) {
        return Err(Error::OutOfRange(format!("polygon size {p} outside 3..={MAX_ENUMERATION_SIZE}")));
    }
    let mut memo = HashMap::new();
    Ok(sub_triangulations(0, p - 1, &mut memo)
        .into_iter()
        .map(|d| Triangulation::from_parts_unchecked(p, d.into_iter().collect()))
        .collect())
}

/// Diagonal sets triangulating the sub-polygon `i, i+1, ..., j` (side `ij` included).
fn sub_triangulations(
    i: usize,
    j: usize,
    memo: &mut HashMap<(usize, usize), Vec<Vec<(usize, usize)>>>,
) -> Vec<Vec<(usize, usize)>> {
    if j - i < 2 {
        return vec![Vec::new()];
    }
    if let Some(v) = memo.get(&(i, j)) {
        return v.clone();
    }
    let mut out = Vec::new();
    for k in i + 1..j {
        let left = sub_triangulations(i, k, memo);
        let right = sub_triangulations(k, j, memo);
        for l in &left {
            for r in &right {
                let mut d = l.clone();
                d.extend_from_slice(r);
                if k - i >= 2 {
                    d.push((i, k));
                }
                if j - k >= 2 {
                    d.push((k, j));
                }
                out.push(d);
            }
        }
    }
    memo.insert((i, j), out.clone());
    out
}

/// Every extended zero chain with body length `s`, by depth-first search on
/// tail values with exact machine-integer fractions.
pub fn enumerate_extended_zero_chains(s: usize) -> Vec<ExtendedZeroChain> {
    assert!((2..=20).contains(&s), "body length {s} outside the supported range");
    let budget = 3 * (s as i64 - 1) - 1;
    let mut out = Vec::new();
    let mut rev = Vec::with_capacity(s);
    // num/den is the value of the tail built so far, den > 0
    fn dfs(s: usize, budget: i64, num: i64, den: i64, rev: &mut Vec<u64>, out: &mut Vec<ExtendedZeroChain>) {
        let used: i64 = rev.iter().map(|&e| e as i64).sum();
        let left = s - rev.len();
        if left == 0 {
            if num == 0 {
                let body: Vec<u64> = rev.iter().rev().copied().collect();
                let hidden = (budget + 1 - used) as u64;
                out.push(ExtendedZeroChain::from_parts_unchecked(body, hidden));
            }
            return;
        }
        // the remaining left - 1 entries need at least 1 each
        let max_e = budget - used - (left as i64 - 1);
        for e in 1..=max_e {
            // new tail e - den/num, i.e. (e*num - den)/num
            let (n2, d2) = if rev.is_empty() { (e, 1) } else { (e * num - den, num) };
            if left == 1 {
                if n2 != 0 {
                    continue;
                }
            } else if n2 <= 0 {
                continue;
            }
            rev.push(e as u64);
            dfs(s, budget, n2, d2, rev, out);
            rev.pop();
        }
    }
    dfs(s, budget, 1, 0, &mut rev, &mut out);
    out.sort();
    out
}

/// The HJ expansion of `m/q` (`m > q >= 1`) with machine integers.
pub fn expand_u64(m: u64, q: u64) -> Vec<u64> {
    let (mut num, mut den) = (m, q);
    let mut out = Vec::new();
    while den != 0 {
        let e = num.div_ceil(den);
        let rem = e * den - num;
        out.push(e);
        num = den;
        den = rem;
    }
    out
}

/// All decomposition pairs of `k` by testing every `α < β`.
///
/// The continuant is multilinear in the entries, so the double decrement at
/// `α < β` has continuant `K - L_{α-1}R_{α+1} - L_{β-1}R_{β+1} + L_{α-1}K(α+1..β-1)R_{β+1}`
/// with prefix continuants `L` and suffix continuants `R`. Vanishing is
/// necessary; each survivor is confirmed by ear cutting.
pub fn exhaustive_decompositions(k: &[u64]) -> Result<Vec<(usize, usize)>> {
    let s = k.len();
    let total: u64 = k.iter().sum();
    let hidden = 3 * (s as i64 - 1) - (total as i64 - 2);
    if s < 2 || hidden < 1 {
        return Ok(Vec::new());
    }
    let mut left = vec![0i128; s + 1];
    let (mut prev, mut cur) = (0i128, 1i128);
    left[0] = 1;
    for i in 1..=s {
        let next = k[i - 1] as i128 * cur - prev;
        prev = cur;
        cur = next;
        left[i] = cur;
    }
    if cur.unsigned_abs() >= 1u128 << 40 {
        return Err(Error::OutOfRange("continuant too large for the exhaustive oracle".into()));
    }
    let full = cur;
    let mut right = vec![1i128; s + 2];
    let (mut prev, mut cur) = (0i128, 1i128);
    for i in (1..=s).rev() {
        let next = k[i - 1] as i128 * cur - prev;
        prev = cur;
        cur = next;
        right[i] = cur;
    }
    let mut out = Vec::new();
    for alpha in 1..s {
        let a_term = left[alpha - 1] * right[alpha + 1];
        let (mut mid_prev, mut mid) = (0i128, 1i128);
        for beta in alpha + 1..=s {
            if k[alpha - 1] == 2 || k[beta - 1] == 2 {
                let b_term = left[beta - 1] * right[beta + 1];
                let cross = left[alpha - 1] * mid * right[beta + 1];
                if full - a_term - b_term + cross == 0 {
                    let mut cyc = Vec::with_capacity(s + 1);
                    cyc.push(hidden as u64);
                    cyc.extend(k.iter().enumerate().map(|(i, &e)| e - u64::from(i + 1 == alpha || i + 1 == beta)));
                    if ear_cut(&cyc).is_ok() {
                        out.push((alpha, beta));
                    }
                }
            }
            let next = k[beta - 1] as i128 * mid - mid_prev;
            mid_prev = mid;
            mid = next;
        }
    }
    Ok(out)
}

/// Outcome of the HTU reduction for a wormhole of WW-index 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HtuTag {
    Basic,
    Degenerate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRecord {
    pub m: u64,
    pub q: u64,
    pub count: usize,
    pub ww_index: Option<u64>,
    pub basic: bool,
    #[serde(skip)]
    pub htu: Option<HtuTag>,
}

fn scan_label(m: u64, q: u64) -> Result<ScanRecord> {
    let dual = expand_u64(m, m - q);
    let pairs = exhaustive_decompositions(&dual)?;
    let count = pairs.len();
    let s = dual.len() as i64;
    let ww_index = (count > 0).then(|| (3 * (s - 1) - (dual.iter().sum::<u64>() as i64 - 2)) as u64);
    let basic = count >= 2 && ww_index.is_some_and(|i| i > 1);
    let htu = if count >= 2 && ww_index == Some(1) {
        let seq = WWSequence::new(dual).map_err(|e| Error::Invariant(e.to_string()))?;
        Some(match htu_reduce(&seq)? {
            HtuOutcome::Basic { .. } => HtuTag::Basic,
            HtuOutcome::Degenerate { .. } => HtuTag::Degenerate,
        })
    } else {
        None
    };
    Ok(ScanRecord { m, q, count, ww_index, basic, htu })
}

fn scan_m(m: u64) -> Result<Vec<ScanRecord>> {
    (1..m).filter(|q| q.gcd(&m) == 1).map(|q| scan_label(m, q)).collect()
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Precondition(format!("cannot start {jobs} workers: {e}")))
}

/// Scans every coprime `0 < q < m <= m_max`, calling `sink` in ascending `(m, q)`
/// order. Work is split by `m` over `jobs` workers; output order does not depend on it.
pub fn scan_each(m_max: u64, jobs: usize, mut sink: impl FnMut(&ScanRecord) -> Result<()>) -> Result<()> {
    if m_max < 2 {
        return Err(Error::OutOfRange(format!("m_max = {m_max} must be at least 2")));
    }
    let pool = pool(jobs)?;
    const BATCH: u64 = 64;
    let mut lo = 2;
    while lo <= m_max {
        let hi = (lo + BATCH - 1).min(m_max);
        let chunk: Vec<Result<Vec<ScanRecord>>> = pool.install(|| (lo..=hi).into_par_iter().map(scan_m).collect());
        for recs in chunk {
            for r in recs? {
                sink(&r)?;
            }
        }
        lo = hi + 1;
    }
    Ok(())
}

pub fn scan_wormholes(m_max: u64, jobs: usize) -> Result<Vec<ScanRecord>> {
    let mut out = Vec::new();
    scan_each(m_max, jobs, |r| {
        out.push(r.clone());
        Ok(())
    })?;
    Ok(out)
}

/// Streams the scan as JSONL, one record per line; returns the record count.
pub fn write_scan_jsonl(m_max: u64, jobs: usize, out: &mut impl std::io::Write) -> Result<usize> {
    let mut n = 0;
    scan_each(m_max, jobs, |r| {
        let line = serde_json::to_string(r).expect("records serialize");
        writeln!(out, "{line}").map_err(|e| Error::Precondition(format!("cannot write scan output: {e}")))?;
        n += 1;
        Ok(())
    })?;
    Ok(n)
}

#[derive(Clone, Debug, Serialize)]
pub struct AtMostTwoReport {
    pub m_max: u64,
    pub labels: usize,
    /// Number of labels per decomposition count.
    pub distribution: BTreeMap<usize, usize>,
    pub max_count: usize,
    pub violations: Vec<(u64, u64, usize)>,
    pub wormholes: usize,
    pub basic: usize,
    /// Labels where the hashed library search disagrees with the oracle.
    pub library_disagreements: Vec<(u64, u64)>,
}

/// Scans up to `m_max`, checking at most two decompositions per label and
/// agreement with the library count.
pub fn verify_at_most_two(m_max: u64, jobs: usize) -> Result<AtMostTwoReport> {
    at_most_two_report(&scan_wormholes(m_max, jobs)?, jobs)
}

/// The at-most-two summary of an existing scan.
pub fn at_most_two_report(records: &[ScanRecord], jobs: usize) -> Result<AtMostTwoReport> {
    let m_max = records.iter().map(|r| r.m).max().unwrap_or(0);
    let library: Vec<usize> = pool(jobs)?.install(|| {
        records
            .par_iter()
            .map(|r| ww_decompositions(&WWSequence::new(expand_u64(r.m, r.m - r.q)).expect("dual entries >= 2")).len())
            .collect()
    });
    let mut report = AtMostTwoReport {
        m_max,
        labels: records.len(),
        distribution: BTreeMap::new(),
        max_count: 0,
        violations: Vec::new(),
        wormholes: 0,
        basic: 0,
        library_disagreements: Vec::new(),
    };
    for (r, lib) in records.iter().zip(library) {
        *report.distribution.entry(r.count).or_default() += 1;
        report.max_count = report.max_count.max(r.count);
        if r.count > 2 {
            report.violations.push((r.m, r.q, r.count));
        }
        report.wormholes += usize::from(r.count >= 2);
        report.basic += usize::from(r.basic);
        if lib != r.count {
            report.library_disagreements.push((r.m, r.q));
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RoundtripReport {
    pub families: usize,
    pub instances: usize,
    pub reframings: usize,
    pub failures: Vec<String>,
}

/// Instantiates every family with `n <= n_max` weights over parameters
/// `param_min ..= param_min + span`, recovers the singularity, and checks
/// that the two chains are exactly its decompositions; likewise for every
/// shift, valid or not, against the reframing filter.
pub fn family_roundtrip_check(n_max: usize, span: i64) -> Result<RoundtripReport> {
    let mut report = RoundtripReport::default();
    for n in 2..=n_max {
        for pair in classify_families(n)? {
            report.families += 1;
            let g = pair.family.param_count;
            let mut offs = vec![0i64; g];
            loop {
                let params: Vec<i64> = pair.family.param_min.iter().zip(&offs).map(|(a, b)| a + b).collect();
                report.instances += 1;
                let inst = pair.instantiate(&params)?;
                let tag = format!("n={n} m={} params={params:?}", pair.family.m);
                check_pair(&inst.p0, &inst.pm, &tag, &mut report.failures)?;
                for r in 1..=inst.p0.len() {
                    let (a, b) = (reframe_chain(&inst.p0, r), reframe_chain(&inst.pm, r));
                    let valid = inst.valid_reframings.contains(&r);
                    if valid {
                        report.reframings += 1;
                        check_pair(&a, &b, &format!("{tag} shift={r}"), &mut report.failures)?;
                    }
                    let dual: Vec<u64> = a.body().iter().zip(b.body()).map(|(&x, &y)| x.max(y)).collect();
                    let shifted_ok = WWSequence::new(dual).is_ok_and(|s| {
                        let d = ww_decompositions(&s);
                        d.len() == 2 && d.iter().all(|d| d.chain == a || d.chain == b)
                    });
                    if shifted_ok != valid {
                        report.failures.push(format!("{tag} shift={r}: filter says {valid}, decompositions say {shifted_ok}"));
                    }
                }
                // odometer over the parameter box
                let mut r = 0;
                while r < g && offs[r] == span {
                    offs[r] = 0;
                    r += 1;
                }
                if r == g {
                    break;
                }
                offs[r] += 1;
            }
        }
    }
    Ok(report)
}

fn check_pair(a: &ExtendedZeroChain, b: &ExtendedZeroChain, tag: &str, failures: &mut Vec<String>) -> Result<()> {
    let rec = match recover_singularity(a, b) {
        Ok(rec) => rec,
        Err(e) if !e.is_finding() => {
            failures.push(format!("{tag}: {e}"));
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    let m: u64 = rec.label.m().try_into().map_err(|_| Error::OutOfRange(format!("{} too large", rec.label)))?;
    let q: u64 = rec.label.q().try_into().expect("q < m");
    let dual = expand_u64(m, m - q);
    let pairs = exhaustive_decompositions(&dual)?;
    let chains: BTreeSet<Vec<u64>> = pairs
        .iter()
        .map(|&(x, y)| dual.iter().enumerate().map(|(i, &e)| e - u64::from(i + 1 == x || i + 1 == y)).collect())
        .collect();
    let expected: BTreeSet<Vec<u64>> = [a.body().to_vec(), b.body().to_vec()].into_iter().collect();
    if chains != expected {
        failures.push(format!("{tag}: {} has decompositions {chains:?}", rec.label));
    }
    Ok(())
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct BijectionReport {
    pub framed: usize,
    pub roundtrip_failures: usize,
    pub sum_rule_failures: usize,
    /// Per body length: framed index vectors versus independently enumerated zero chains.
    pub chain_set_mismatches: Vec<usize>,
}

/// Both directions of the triangulation / extended zero chain bijection for
/// polygons with `3 <= p <= p_max`.
pub fn bijection_check(p_max: usize) -> Result<BijectionReport> {
    let mut report = BijectionReport::default();
    for p in 3..=p_max {
        let s = p - 1;
        let mut seen = BTreeSet::new();
        for t in enumerate_triangulations(p)? {
            for h in 0..p {
                report.framed += 1;
                let ft = FramedTriangulation::new(t.clone(), h)?;
                let c = index_vector(&ft);
                if c.body().iter().sum::<u64>() + c.hidden() != 3 * (s as u64 - 1) {
                    report.sum_rule_failures += 1;
                }
                let back = from_extended_chain(&c)?;
                if back.triangulation() != &t.rotated(p - h) || back.hidden() != 0 {
                    report.roundtrip_failures += 1;
                }
                seen.insert(c);
            }
        }
        let enumerated: BTreeSet<ExtendedZeroChain> = enumerate_extended_zero_chains(s).into_iter().collect();
        if seen != enumerated {
            report.chain_set_mismatches.push(s);
        }
        for c in &enumerated {
            if index_vector(&from_extended_chain(c)?) != *c {
                report.roundtrip_failures += 1;
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct AccordionCensus {
    pub triangulations: usize,
    pub accordions: usize,
    pub with_two_or_more_weights: usize,
    pub constructed: usize,
    /// Accordions with at least two weights missing from the constructed image, and vice versa.
    pub mismatches: usize,
    /// Accordions with some weight and no standard frame in the given orientation.
    pub without_standard_frame: usize,
    /// Those whose mirror image has none either.
    pub without_standard_frame_up_to_reflection: Vec<String>,
    pub adjacency_failures: usize,
}

/// Compares the accordions among all triangulations with `p <= p_max` to
/// every rotation of `standard_accordion(x, m)` over all weights and `m`.
pub fn accordion_census(p_max: usize) -> Result<AccordionCensus> {
    let mut census = AccordionCensus::default();
    for p in 4..=p_max {
        let mut image = BTreeSet::new();
        // p = 4 + Σ (x_i - 2)
        for weights in weight_tuples(p as u64 - 4) {
            for m in 0..weights.len() {
                let t = standard_accordion(&weights, m)?.triangulation().clone();
                for r in 0..p {
                    image.insert(t.rotated(r));
                }
            }
        }
        census.constructed += image.len();
        let mut found = BTreeSet::new();
        for t in enumerate_triangulations(p)? {
            census.triangulations += 1;
            let idx = t.indices();
            let ones = idx.iter().filter(|&&i| i == 1).count();
            if is_accordion(&t) != (ones == 2) {
                census.mismatches += 1;
            }
            if !is_accordion(&t) {
                continue;
            }
            census.accordions += 1;
            let weights = idx.iter().filter(|&&i| i > 2).count();
            if weights >= 1 && standard_frame(&t).is_none() {
                census.without_standard_frame += 1;
                if standard_frame(&t.reflected()).is_none() {
                    census.without_standard_frame_up_to_reflection.push(format!("{t:?}"));
                }
            }
            if p >= 5 {
                for v in (0..p).filter(|&v| idx[v] == 1) {
                    let adjacent = [(v + 1) % p, (v + p - 1) % p].iter().filter(|&&u| idx[u] > 2).count();
                    if adjacent != 1 {
                        census.adjacency_failures += 1;
                    }
                }
            }
            if weights >= 2 {
                census.with_two_or_more_weights += 1;
                found.insert(t);
            }
        }
        census.mismatches += found.symmetric_difference(&image).count();
    }
    Ok(census)
}

/// Ordered tuples of integers >= 3 with `Σ (x_i - 2) = excess` and at least two entries.
fn weight_tuples(excess: u64) -> Vec<Vec<u64>> {
    fn rec(left: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if left == 0 {
            if cur.len() >= 2 {
                out.push(cur.clone());
            }
            return;
        }
        for d in 1..=left {
            cur.push(d + 2);
            rec(left - d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(excess, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct HtuReport {
    pub index_one_wormholes: usize,
    pub basic: usize,
    pub degenerate: usize,
    pub ties: usize,
    pub max_steps: usize,
    pub failures: Vec<String>,
    pub degenerate_outputs: BTreeSet<String>,
}

/// Runs HTU on every WW-index-1 wormhole among `records`.
pub fn htu_suite(records: &[ScanRecord]) -> HtuReport {
    let mut report = HtuReport::default();
    for r in records.iter().filter(|r| r.count >= 2 && r.ww_index == Some(1)) {
        report.index_one_wormholes += 1;
        let seq = WWSequence::new(expand_u64(r.m, r.m - r.q)).expect("dual entries >= 2");
        let out = match htu_reduce(&seq) {
            Ok(out) => out,
            Err(e) => {
                report.failures.push(format!("{}/{}: {e}", r.m, r.q));
                continue;
            }
        };
        report.max_steps = report.max_steps.max(out.trace().len());
        report.ties += out.trace().iter().filter(|s| s.tie).count();
        for step in out.trace() {
            if ww_decompositions(&step.sequence).len() != r.count {
                report.failures.push(format!("{}/{}: count changed at {}", r.m, r.q, step.sequence));
            }
        }
        if out.is_degenerate() {
            report.degenerate += 1;
            let end = out.sequence();
            if !is_degenerate_pattern(end) || ww_decompositions(end).len() != 2 {
                report.failures.push(format!("{}/{}: degenerate output {end}", r.m, r.q));
            }
            report.degenerate_outputs.insert(end.to_string());
        } else {
            report.basic += 1;
        }
    }
    report
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CompanionReport {
    pub basic_wormholes: usize,
    pub with_weight_hidden: usize,
    /// Distinct coherent graphs among those triangulations.
    pub graphs: usize,
    pub failures: Vec<String>,
}

/// Among the decomposition triangulations of scan-found basic wormholes whose
/// hidden index is a weight, equal coherent graphs occur exactly for companions.
pub fn companion_graph_check(records: &[ScanRecord]) -> Result<CompanionReport> {
    let mut report = CompanionReport::default();
    let mut owners: HashMap<CoherentGraph, BTreeSet<(u64, u64)>> = HashMap::new();
    for r in records.iter().filter(|r| r.basic) {
        report.basic_wormholes += 1;
        if r.ww_index <= Some(2) {
            continue;
        }
        report.with_weight_hidden += 1;
        let rep = p_resolution_report(&SingularityLabel::new(r.m, r.q)?);
        let graphs = rep
            .decompositions
            .iter()
            .map(|d| build_coherent_graph(&from_extended_chain(&d.chain)?))
            .collect::<Result<Vec<_>>>()?;
        if graphs.windows(2).any(|w| w[0] != w[1]) {
            report.failures.push(format!("{}/{}: companions with different graphs", r.m, r.q));
        }
        for g in graphs {
            owners.entry(g).or_default().insert((r.m, r.q));
        }
    }
    report.graphs = owners.len();
    for (g, who) in &owners {
        if who.len() > 1 {
            report.failures.push(format!("graph {g:?} shared by non-companions {who:?}"));
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CompletenessReport {
    pub basic_wormholes: usize,
    pub matched: usize,
    pub unmatched: Vec<String>,
}

/// Every scan-found basic wormhole, after a common reframing to a standard
/// frame of one of its triangulations, is an instance of a classified family.
pub fn classification_completeness(records: &[ScanRecord]) -> Result<CompletenessReport> {
    let mut report = CompletenessReport::default();
    for r in records.iter().filter(|r| r.basic) {
        report.basic_wormholes += 1;
        let rep = p_resolution_report(&SingularityLabel::new(r.m, r.q)?);
        let (a, b) = (&rep.decompositions[0].chain, &rep.decompositions[1].chain);
        if matches_family(a, b)? || matches_family(b, a)? {
            report.matched += 1;
        } else {
            report.unmatched.push(format!("{}/{}", r.m, r.q));
        }
    }
    Ok(report)
}

/// Whether some standard frame of `a`'s triangulation, applied to both
/// chains, turns `(a, b)` into `(P^0, P^m)` for a solution of `S_0 ∪ S_m`.
fn matches_family(a: &ExtendedZeroChain, b: &ExtendedZeroChain) -> Result<bool> {
    let s = a.len();
    for r in 0..=s {
        let (a2, b2) = (reframe_chain(a, r), reframe_chain(b, r));
        if a2.body()[0] != 1 || b2.hidden() < 2 {
            continue;
        }
        let ft = from_extended_chain(&a2)?;
        let ws = weights_of(&ft);
        let n = ws.len();
        if n < 2 || ws.last().map(|w| w.position) != Some(s + 1) {
            continue;
        }
        if crate::triangulation::weight_type(&ft, n)?.kind != crate::triangulation::WeightKind::TypeI {
            continue;
        }
        let x: Vec<u64> = ws.iter().map(|w| w.value).collect();
        if index_vector(&standard_accordion(&x, 0)?) != a2 {
            continue;
        }
        for m in 1..n {
            if !consistency(n, m) {
                continue;
            }
            let fam = solve_parametric(n, m)?;
            let params: Vec<i64> = (1..=fam.param_count).map(|i| x[i - 1] as i64 - fam.offsets[i - 1]).collect();
            if fam.instantiate(&params).ok().as_deref() == Some(&x[..])
                && index_vector(&standard_accordion(&x, m)?) == b2
            {
                return Ok(true);
            }
        }
    }
    Ok(false)
}
