//! WW-sequences, extremal P-resolution counting, the HTU reduction, and the
//! classification of basic wormhole triangulations.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::coherent::{build_coherent_graph, consistency, solve_parametric, ParametricFamily};
use crate::continued_fraction::{dual_chain, expand_rational, is_zero_entries, parse_entries, singularity_from_dual};
use crate::error::{Error, Result};
use crate::rational::SingularityLabel;
use crate::triangulation::{index_vector, standard_accordion, ExtendedZeroChain};
use crate::HJChain;

/// A nonempty sequence with every entry at least 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct WWSequence(Vec<u64>);

impl WWSequence {
    pub fn new(entries: Vec<u64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidChain("sequence must be nonempty".into()));
        }
        if let Some(e) = entries.iter().find(|&&e| e < 2) {
            return Err(Error::InvalidChain(format!("entry {e} is below 2")));
        }
        Ok(Self(entries))
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `3(s-1) - (Σ - 2)`: the hidden index any decomposition would carry.
    pub fn forced_hidden(&self) -> i64 {
        let s = self.0.len() as i64;
        3 * (s - 1) - (self.0.iter().sum::<u64>() as i64 - 2)
    }

    pub fn to_chain(&self) -> HJChain {
        HJChain::new(self.0.clone()).expect("entries are >= 2")
    }
}

impl TryFrom<Vec<u64>> for WWSequence {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<WWSequence> for Vec<u64> {
    fn from(s: WWSequence) -> Self {
        s.0
    }
}

impl From<&HJChain> for WWSequence {
    /// Panics unless the chain is reduced.
    fn from(c: &HJChain) -> Self {
        Self::new(c.entries().to_vec()).expect("reduced chain")
    }
}

impl fmt::Display for WWSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl FromStr for WWSequence {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::new(parse_entries(s)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WWDecomposition {
    pub alpha: usize,
    pub beta: usize,
    pub chain: ExtendedZeroChain,
}

// Continuant matrices M(b) = [[b, -1], [1, 0]], generic over the integer type.

trait Ring: Clone + Eq + Hash + Integer + Signed + From<i64> {}
impl<T: Clone + Eq + Hash + Integer + Signed + From<i64>> Ring for T {}

type Mat<T> = [[T; 2]; 2];

fn m_of<T: Ring>(b: u64) -> Mat<T> {
    [[T::from(b as i64), T::from(-1)], [T::one(), T::zero()]]
}

fn mul<T: Ring>(a: &Mat<T>, b: &Mat<T>) -> Mat<T> {
    let e = |i: usize, j: usize| a[i][0].clone() * b[0][j].clone() + a[i][1].clone() * b[1][j].clone();
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn identity<T: Ring>() -> Mat<T> {
    [[T::one(), T::zero()], [T::zero(), T::one()]]
}

/// Inverse of a determinant-one matrix.
fn inv<T: Ring>(a: &Mat<T>) -> Mat<T> {
    [[a[1][1].clone(), -a[0][1].clone()], [-a[1][0].clone(), a[0][0].clone()]]
}

/// Primitive representative of the line through `v`, or `None` for the zero vector.
fn direction<T: Ring>(v: [T; 2]) -> Option<[T; 2]> {
    let [a, b] = v;
    if a.is_zero() && b.is_zero() {
        return None;
    }
    let g = a.gcd(&b);
    let (mut a, mut b) = (a / g.clone(), b / g);
    if a.is_negative() || (a.is_zero() && b.is_negative()) {
        a = -a;
        b = -b;
    }
    Some([a, b])
}

/// Pairs whose double decrement has vanishing continuant.
///
/// With prefix products `Pre_i = M(k_1)...M(k_i)`, the continuant after
/// decrementing at `α < β` is `ρ_α · σ_β` where `ρ_α` depends only on `α` and
/// `σ_β` only on `β`, so all solutions come from one hash lookup per `α`.
fn vanishing_pairs<T: Ring>(k: &[u64]) -> Vec<(usize, usize)> {
    let s = k.len();
    let mut pre = Vec::with_capacity(s + 1);
    pre.push(identity::<T>());
    for &e in k {
        let next = mul(pre.last().unwrap(), &m_of(e));
        pre.push(next);
    }
    let mut suf = vec![identity::<T>(); s + 2];
    for i in (1..=s).rev() {
        suf[i] = mul(&m_of(k[i - 1]), &suf[i + 1]);
    }

    let mut by_dir: HashMap<[T; 2], Vec<usize>> = HashMap::new();
    let mut zero_sigma = Vec::new();
    for beta in 2..=s {
        let left = mul(&pre[beta - 1], &m_of(k[beta - 1] - 1));
        let col = [suf[beta + 1][0][0].clone(), suf[beta + 1][1][0].clone()];
        let sigma = [
            left[0][0].clone() * col[0].clone() + left[0][1].clone() * col[1].clone(),
            left[1][0].clone() * col[0].clone() + left[1][1].clone() * col[1].clone(),
        ];
        match direction(sigma) {
            Some(d) => by_dir.entry(d).or_default().push(beta),
            None => zero_sigma.push(beta),
        }
    }

    let mut out = Vec::new();
    for alpha in 1..s {
        let row = [pre[alpha - 1][0][0].clone(), pre[alpha - 1][0][1].clone()];
        let mid = mul(&m_of(k[alpha - 1] - 1), &inv(&pre[alpha]));
        let rho0 = row[0].clone() * mid[0][0].clone() + row[1].clone() * mid[1][0].clone();
        let rho1 = row[0].clone() * mid[0][1].clone() + row[1].clone() * mid[1][1].clone();
        let mut betas: Vec<usize> = match direction([-rho1, rho0]) {
            None => (alpha + 1..=s).collect(),
            Some(perp) => by_dir
                .get(&perp)
                .map(|v| v.iter().copied().filter(|&b| b > alpha).collect())
                .unwrap_or_default(),
        };
        betas.extend(zero_sigma.iter().copied().filter(|&b| b > alpha));
        betas.sort_unstable();
        betas.dedup();
        out.extend(betas.into_iter().map(|b| (alpha, b)));
    }
    out
}

/// Decrements positions `alpha` and `beta` (1-based).
fn double_decrement(k: &[u64], alpha: usize, beta: usize) -> Vec<u64> {
    let mut b = k.to_vec();
    b[alpha - 1] -= 1;
    b[beta - 1] -= 1;
    b
}

/// All WW-decompositions in lexicographic `(α, β)` order.
pub fn ww_decompositions(seq: &WWSequence) -> Vec<WWDecomposition> {
    let k = seq.entries();
    let s = k.len();
    let hidden = seq.forced_hidden();
    if s < 2 || hidden < 1 {
        return Vec::new();
    }
    // sub-continuants are bounded by the full one; i128 is exact while
    // triple products of it stay below 2^127
    let full = crate::continued_fraction::continuant(k);
    let pairs = if full.bits() <= 40 { vanishing_pairs::<i128>(k) } else { vanishing_pairs::<BigInt>(k) };
    pairs
        .into_iter()
        // the body of a zero chain contains an index-1 vertex, which must come from a 2
        .filter(|&(a, b)| k[a - 1] == 2 || k[b - 1] == 2)
        .filter_map(|(alpha, beta)| {
            let body = double_decrement(k, alpha, beta);
            is_zero_entries(&body).then(|| WWDecomposition {
                alpha,
                beta,
                chain: ExtendedZeroChain::from_parts_unchecked(body, hidden as u64),
            })
        })
        .collect()
}

/// The shared hidden index of the decompositions, if there are any.
pub fn ww_index(seq: &WWSequence) -> Option<u64> {
    ww_decompositions(seq).first().map(|d| d.chain.hidden())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PResolutionReport {
    pub label: SingularityLabel,
    pub dual: HJChain,
    pub count: usize,
    pub ww_index: Option<u64>,
    pub wormhole: bool,
    pub basic: bool,
    pub decompositions: Vec<WWDecomposition>,
}

pub fn dual_of_label(label: &SingularityLabel) -> HJChain {
    let chain = expand_rational(&label.resolution_value()).expect("m/q > 1 for a valid label");
    dual_chain(&chain).expect("expansions have entries >= 2")
}

pub fn p_resolution_report(label: &SingularityLabel) -> PResolutionReport {
    let dual = dual_of_label(label);
    let decompositions = ww_decompositions(&WWSequence::from(&dual));
    let count = decompositions.len();
    let ww_index = decompositions.first().map(|d| d.chain.hidden());
    PResolutionReport {
        label: label.clone(),
        dual,
        count,
        ww_index,
        wormhole: count >= 2,
        basic: count >= 2 && ww_index.is_some_and(|i| i > 1),
        decompositions,
    }
}

/// Rotates `(b_1, ..., b_s, b_0)` right `r` times and drops the last entry,
/// which is `b_{s+1-r}`.
pub fn cyclic_permutation(seq: &WWSequence, r: usize) -> Result<WWSequence> {
    let decs = ww_decompositions(seq);
    let hidden = decs
        .first()
        .map(|d| d.chain.hidden())
        .ok_or_else(|| Error::Precondition(format!("{seq} has no WW-decomposition")))?;
    let s = seq.len();
    let r = r % (s + 1);
    if r == 0 {
        return Ok(seq.clone());
    }
    let mut v = seq.entries().to_vec();
    v.push(hidden);
    v.rotate_right(r);
    let dropped = v.pop().expect("s + 1 >= 2");
    let out = WWSequence::new(v)
        .map_err(|_| Error::InvalidChain(format!("{r}-cyclic permutation of {seq} has an entry below 2")))?;
    if dropped >= 3 && ww_decompositions(&out).len() < decs.len() {
        return Err(Error::Invariant(format!("{r}-cyclic permutation of {seq} lost decompositions")));
    }
    Ok(out)
}

/// Which end of the shortened polygon becomes the new hidden vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HtuEnd {
    First,
    Last,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HtuStep {
    pub hidden: HtuEnd,
    /// Both ends would have worked; `First` was taken.
    pub tie: bool,
    pub sequence: WWSequence,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HtuStepResult {
    Next(HtuStep),
    Degenerate,
}

/// One HTU step on a sequence with WW-index 1 and at least two decompositions.
///
/// Cutting the hidden ear `P_0` turns `P_1 P_s` into a side. Making `P_1` the
/// new hidden vertex keeps a decomposition alive iff `P_1` is not one of its
/// marked positions and `P_s` still has index at least 2 afterwards, and
/// symmetrically for `P_s`. The step is degenerate when no end works for all
/// decompositions at once.
pub fn htu_step(seq: &WWSequence) -> Result<HtuStepResult> {
    let decs = ww_decompositions(seq);
    if decs.len() < 2 || decs[0].chain.hidden() != 1 {
        return Err(Error::Precondition(format!(
            "HTU needs WW-index 1 and two decompositions; {seq} has {} decompositions",
            decs.len()
        )));
    }
    let k = seq.entries();
    let s = k.len();
    let first_ok = k[s - 1] >= 3 && decs.iter().all(|d| d.alpha != 1);
    let last_ok = k[0] >= 3 && decs.iter().all(|d| d.beta != s);
    let (hidden, next) = match (first_ok, last_ok) {
        (true, _) => {
            let mut v = k[1..].to_vec();
            *v.last_mut().expect("s >= 3") -= 1;
            (HtuEnd::First, v)
        }
        (false, true) => {
            let mut v = k[..s - 1].to_vec();
            v[0] -= 1;
            (HtuEnd::Last, v)
        }
        (false, false) => return Ok(HtuStepResult::Degenerate),
    };
    let next = WWSequence::new(next)?;
    let after = ww_decompositions(&next).len();
    if after != decs.len() {
        return Err(Error::Invariant(format!(
            "HTU step {seq} -> {next} changed the decomposition count {} -> {after}",
            decs.len()
        )));
    }
    Ok(HtuStepResult::Next(HtuStep { hidden, tie: first_ok && last_ok, sequence: next }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum HtuOutcome {
    Basic { sequence: WWSequence, trace: Vec<HtuStep> },
    Degenerate { sequence: WWSequence, trace: Vec<HtuStep> },
}

impl HtuOutcome {
    pub fn sequence(&self) -> &WWSequence {
        match self {
            HtuOutcome::Basic { sequence, .. } | HtuOutcome::Degenerate { sequence, .. } => sequence,
        }
    }

    pub fn trace(&self) -> &[HtuStep] {
        match self {
            HtuOutcome::Basic { trace, .. } | HtuOutcome::Degenerate { trace, .. } => trace,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self, HtuOutcome::Degenerate { .. })
    }
}

/// `3,...,3,2,2,3,...,3` with any number of 3s on either side.
pub fn is_degenerate_pattern(seq: &WWSequence) -> bool {
    let k = seq.entries();
    match k.windows(2).position(|w| w == [2, 2]) {
        Some(i) => k[..i].iter().all(|&e| e == 3) && k[i + 2..].iter().all(|&e| e == 3),
        None => false,
    }
}

/// Repeats [`htu_step`] until the WW-index exceeds 1 or a step is degenerate.
pub fn htu_reduce(seq: &WWSequence) -> Result<HtuOutcome> {
    let count = ww_decompositions(seq).len();
    if count < 2 {
        return Err(Error::Precondition(format!("{seq} has {count} decompositions, HTU needs two")));
    }
    let mut current = seq.clone();
    let mut trace = Vec::new();
    loop {
        if ww_index(&current).is_some_and(|i| i > 1) {
            return Ok(HtuOutcome::Basic { sequence: current, trace });
        }
        match htu_step(&current)? {
            HtuStepResult::Next(step) => {
                current = step.sequence.clone();
                trace.push(step);
            }
            HtuStepResult::Degenerate => {
                if !is_degenerate_pattern(&current) || count != 2 {
                    return Err(Error::Invariant(format!(
                        "degenerate HTU output {current} with {count} decompositions"
                    )));
                }
                return Ok(HtuOutcome::Degenerate { sequence: current, trace });
            }
        }
    }
}

/// `constant + Σ coeffs[r] · t_{r+1}`, serialized as its formula string.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Affine {
    pub constant: i64,
    pub coeffs: Vec<i64>,
}

impl Affine {
    pub fn eval(&self, params: &[i64]) -> i64 {
        self.constant + self.coeffs.iter().zip(params).map(|(c, t)| c * t).sum::<i64>()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn fit(values: &[i64], base: &[i64]) -> Affine {
        let coeffs: Vec<i64> = values[1..].iter().map(|v| v - values[0]).collect();
        let constant = values[0] - coeffs.iter().zip(base).map(|(c, t)| c * t).sum::<i64>();
        Affine { constant, coeffs }
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let single = self.coeffs.len() == 1;
        let mut out = String::new();
        for (r, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let name = if single { "t".to_string() } else { format!("t{}", r + 1) };
            let sign = if c < 0 { "-" } else if out.is_empty() { "" } else { "+" };
            let mag = if c.abs() == 1 { String::new() } else { c.abs().to_string() };
            out.push_str(&format!("{sign}{mag}{name}"));
        }
        if out.is_empty() {
            out = self.constant.to_string();
        } else if self.constant != 0 {
            out.push_str(&format!("{}{}", if self.constant < 0 { "-" } else { "+" }, self.constant.abs()));
        }
        f.write_str(&out)
    }
}

impl Serialize for Affine {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// A run of 2s of affine length, or a single entry of affine value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Segment {
    Entry(Affine),
    Twos(Affine),
}

/// An extended zero chain whose entries and run lengths are affine in the parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymbolicChain {
    pub body: Vec<Segment>,
    pub hidden: Affine,
}

impl SymbolicChain {
    pub fn eval(&self, params: &[i64]) -> Result<ExtendedZeroChain> {
        let mut body = Vec::new();
        for seg in &self.body {
            match seg {
                Segment::Entry(a) => body.push(a.eval(params) as u64),
                Segment::Twos(a) => body.extend(std::iter::repeat(2).take(a.eval(params).max(0) as usize)),
            }
        }
        ExtendedZeroChain::new(body, self.hidden.eval(params) as u64)
    }

    /// Splits a chain into non-2 entries separated by (possibly empty) runs of 2s.
    fn skeleton(c: &ExtendedZeroChain) -> (Vec<u64>, Vec<i64>) {
        let (mut entries, mut runs, mut run) = (Vec::new(), Vec::new(), 0);
        for &e in c.body() {
            if e == 2 {
                run += 1;
            } else {
                runs.push(run);
                entries.push(e);
                run = 0;
            }
        }
        runs.push(run);
        (entries, runs)
    }

    /// Fits the template through instantiations at `base` and `base + e_r`.
    fn fit(chains: &[ExtendedZeroChain], base: &[i64]) -> Result<SymbolicChain> {
        let skeletons: Vec<_> = chains.iter().map(Self::skeleton).collect();
        if skeletons.iter().any(|(e, _)| e.len() != skeletons[0].0.len()) {
            return Err(Error::Invariant("template instantiations have different shapes".into()));
        }
        let (count, mut body) = (skeletons[0].0.len(), Vec::new());
        for i in 0..=count {
            let len = Affine::fit(&skeletons.iter().map(|(_, r)| r[i]).collect::<Vec<_>>(), base);
            if !(len.is_constant() && len.constant == 0) {
                body.push(Segment::Twos(len));
            }
            if i < count {
                body.push(Segment::Entry(Affine::fit(
                    &skeletons.iter().map(|(e, _)| e[i] as i64).collect::<Vec<_>>(),
                    base,
                )));
            }
        }
        let hidden = Affine::fit(&chains.iter().map(|c| c.hidden() as i64).collect::<Vec<_>>(), base);
        Ok(SymbolicChain { body, hidden })
    }
}

impl fmt::Display for SymbolicChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for seg in &self.body {
            match seg {
                Segment::Entry(a) => parts.push(a.to_string()),
                Segment::Twos(a) if a.is_constant() => {
                    parts.extend(std::iter::repeat("2".to_string()).take(a.constant.max(0) as usize))
                }
                Segment::Twos(a) => parts.push(format!("2^({a})")),
            }
        }
        write!(f, "[{}|{}]", parts.join(","), self.hidden)
    }
}

/// A parametric pair `(P^0, P^m)` of companion basic wormhole triangulations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassifiedPair {
    pub family: ParametricFamily,
    /// Weight formulas `x_1..x_n`, e.g. `t-2`.
    pub weights: Vec<Affine>,
    pub p0: SymbolicChain,
    pub pm: SymbolicChain,
    /// Valid reframing shifts at the smallest parameters; see [`InstantiatedPair`] for others.
    pub valid_reframings: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstantiatedPair {
    pub params: Vec<i64>,
    pub weights: Vec<u64>,
    pub p0: ExtendedZeroChain,
    pub pm: ExtendedZeroChain,
    pub valid_reframings: Vec<usize>,
}

impl ClassifiedPair {
    pub fn instantiate(&self, params: &[i64]) -> Result<InstantiatedPair> {
        let inst = concrete_pair(&self.family, params)?;
        if self.p0.eval(params)? != inst.p0 || self.pm.eval(params)? != inst.pm {
            return Err(Error::Invariant(format!("template of family ({}, {}) disagrees at {params:?}", self.family.n, self.family.m)));
        }
        Ok(inst)
    }
}

fn concrete_pair(family: &ParametricFamily, params: &[i64]) -> Result<InstantiatedPair> {
    let weights = family.instantiate(params)?;
    let p0 = index_vector(&standard_accordion(&weights, 0)?);
    let pm = index_vector(&standard_accordion(&weights, family.m)?);
    if p0 == pm || build_coherent_graph(&standard_accordion(&weights, 0)?)? != build_coherent_graph(&standard_accordion(&weights, family.m)?)? {
        return Err(Error::Invariant(format!("P^0 and P^{} for {weights:?} are not companions", family.m)));
    }
    let valid_reframings = valid_reframings(&p0, &pm);
    Ok(InstantiatedPair { params: params.to_vec(), weights, p0, pm, valid_reframings })
}

/// Shifts `r` in `1..=s` whose new hidden entry exceeds 1 in both chains.
pub fn valid_reframings(a: &ExtendedZeroChain, b: &ExtendedZeroChain) -> Vec<usize> {
    let s = a.len();
    (1..=s).filter(|&r| a.at(s + 1 - r) > 1 && b.at(s + 1 - r) > 1).collect()
}

/// The chain read after `r` right rotations of `(b_1, ..., b_s, b_0)`.
pub fn reframe_chain(c: &ExtendedZeroChain, r: usize) -> ExtendedZeroChain {
    let s = c.len();
    match r % (s + 1) {
        0 => c.clone(),
        r => c.rehidden(s + 1 - r),
    }
}

/// Every consistent `S_0 ∪ S_m`, solved and turned into a template pair.
pub fn classify_families(n: usize) -> Result<Vec<ClassifiedPair>> {
    let mut out = Vec::new();
    for m in 1..n {
        if !consistency(n, m) {
            continue;
        }
        let family = solve_parametric(n, m)?;
        let base: Vec<i64> = family.param_min.iter().map(|t| t + 2).collect();
        let mut points = vec![base.clone()];
        for r in 0..family.param_count {
            let mut p = base.clone();
            p[r] += 1;
            points.push(p);
        }
        let pairs = points.iter().map(|p| concrete_pair(&family, p)).collect::<Result<Vec<_>>>()?;
        let p0 = SymbolicChain::fit(&pairs.iter().map(|p| p.p0.clone()).collect::<Vec<_>>(), &base)?;
        let pm = SymbolicChain::fit(&pairs.iter().map(|p| p.pm.clone()).collect::<Vec<_>>(), &base)?;
        let weights = (1..=n)
            .map(|i| {
                let mut coeffs = vec![0; family.param_count];
                coeffs[family.param_of(i)] = 1;
                Affine { constant: family.offsets[i - 1], coeffs }
            })
            .collect();
        let mut pair = ClassifiedPair { family, weights, p0, pm, valid_reframings: Vec::new() };
        // cross-check the fitted templates away from the fitting points
        let mut probe = pair.family.param_min.clone();
        pair.instantiate(&probe)?;
        probe.iter_mut().for_each(|t| *t += 5);
        pair.instantiate(&probe)?;
        pair.valid_reframings = pair.instantiate(&pair.family.param_min.clone())?.valid_reframings;
        out.push(pair);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecoveredSingularity {
    pub label: SingularityLabel,
    pub dual: HJChain,
    pub minimal_resolution: HJChain,
}

/// The wormhole singularity whose two extremal P-resolutions are `a` and `b`.
pub fn recover_singularity(a: &ExtendedZeroChain, b: &ExtendedZeroChain) -> Result<RecoveredSingularity> {
    if a.len() != b.len() || a.hidden() != b.hidden() {
        return Err(Error::NotCompanions("chains differ in length or hidden index".into()));
    }
    let diff: Vec<usize> = (0..a.len()).filter(|&i| a.body()[i] != b.body()[i]).collect();
    let swapped = |x: &ExtendedZeroChain| diff.iter().filter(|&&i| x.body()[i] == 1).count() == 2;
    let ones_and_twos = diff.iter().all(|&i| {
        let pair = (a.body()[i], b.body()[i]);
        pair == (1, 2) || pair == (2, 1)
    });
    if diff.len() != 4 || !ones_and_twos || !swapped(a) || !swapped(b) {
        return Err(Error::NotCompanions(format!("{a} and {b} do not differ by swapping two 1s with two 2s")));
    }
    let entries: Vec<u64> = a.body().iter().zip(b.body()).map(|(&x, &y)| x.max(y)).collect();
    let seq = WWSequence::new(entries)
        .map_err(|_| Error::NotCompanions(format!("{a} has a 1 outside the swapped positions")))?;
    let found: Vec<ExtendedZeroChain> = ww_decompositions(&seq).into_iter().map(|d| d.chain).collect();
    if !found.contains(a) || !found.contains(b) {
        return Err(Error::Invariant(format!("{a} and {b} are not both decompositions of {seq}")));
    }
    let dual = seq.to_chain();
    Ok(RecoveredSingularity {
        label: singularity_from_dual(&dual)?,
        minimal_resolution: dual_chain(&dual)?,
        dual,
    })
}
