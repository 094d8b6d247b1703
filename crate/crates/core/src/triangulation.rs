//! Triangulated convex polygons, framings, and the bijection with extended zero chains.
//!
//! Vertices of a `p`-gon are labeled `0..p` counterclockwise. A framing picks a
//! hidden vertex `h`; its extended zero chain lists the indices of vertices
//! `h+1, ..., h+s` (mod p) as the body and the index of `h` as the hidden entry,
//! where the index of a vertex is its number of diagonals plus one.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::continued_fraction::{is_zero_entries, parse_entries};
use crate::error::{Error, Result};

/// Unordered vertex pair stored as `(min, max)`.
pub type Diagonal = (usize, usize);

/// A full triangulation of the convex `size`-gon.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawTriangulation")]
pub struct Triangulation {
    size: usize,
    diagonals: BTreeSet<Diagonal>,
}

#[derive(Deserialize)]
struct RawTriangulation {
    size: usize,
    diagonals: Vec<[usize; 2]>,
}

impl TryFrom<RawTriangulation> for Triangulation {
    type Error = Error;
    fn try_from(raw: RawTriangulation) -> Result<Self> {
        Triangulation::new(raw.size, raw.diagonals.into_iter().map(|[a, b]| (a, b)))
    }
}

fn crosses((a, b): Diagonal, (c, d): Diagonal) -> bool {
    (a < c && c < b && b < d) || (c < a && a < d && d < b)
}

impl Triangulation {
    pub fn new(size: usize, diagonals: impl IntoIterator<Item = Diagonal>) -> Result<Self> {
        if size < 3 {
            return Err(Error::InvalidChain(format!("polygon needs at least 3 vertices, got {size}")));
        }
        let mut set = BTreeSet::new();
        for (a, b) in diagonals {
            let d = (a.min(b), a.max(b));
            if d.1 >= size {
                return Err(Error::OutOfRange(format!("diagonal {d:?} outside a {size}-gon")));
            }
            let gap = d.1 - d.0;
            if gap < 2 || gap > size - 2 {
                return Err(Error::InvalidChain(format!("{d:?} is a side or a point, not a diagonal")));
            }
            if set.iter().any(|&e| crosses(e, d)) {
                return Err(Error::InvalidChain(format!("diagonal {d:?} crosses another diagonal")));
            }
            set.insert(d);
        }
        if set.len() != size - 3 {
            return Err(Error::InvalidChain(format!(
                "{} diagonals do not triangulate a {size}-gon",
                set.len()
            )));
        }
        Ok(Self { size, diagonals: set })
    }

    pub(crate) fn from_parts_unchecked(size: usize, diagonals: BTreeSet<Diagonal>) -> Self {
        debug_assert_eq!(diagonals.len() + 3, size);
        Self { size, diagonals }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn diagonals(&self) -> &BTreeSet<Diagonal> {
        &self.diagonals
    }

    /// Index of every vertex: diagonals at the vertex plus one.
    pub fn indices(&self) -> Vec<u64> {
        let mut idx = vec![1u64; self.size];
        for &(a, b) in &self.diagonals {
            idx[a] += 1;
            idx[b] += 1;
        }
        idx
    }

    /// Vertices joined to `v` by a diagonal, in increasing label order.
    pub fn diagonal_neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .diagonals
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        let d = (u.min(v), u.max(v));
        let gap = d.1 - d.0;
        gap == 1 || gap == self.size - 1 || self.diagonals.contains(&d)
    }

    /// Relabels vertex `v` as `(v + shift) mod size`.
    pub fn rotated(&self, shift: usize) -> Triangulation {
        let p = self.size;
        let diagonals = self
            .diagonals
            .iter()
            .map(|&(a, b)| {
                let (a, b) = ((a + shift) % p, (b + shift) % p);
                (a.min(b), a.max(b))
            })
            .collect();
        Triangulation { size: p, diagonals }
    }

    /// Mirror image: vertex `v` becomes `(size - v) mod size`.
    pub fn reflected(&self) -> Triangulation {
        let p = self.size;
        let diagonals = self
            .diagonals
            .iter()
            .map(|&(a, b)| {
                let (a, b) = ((p - a) % p, (p - b) % p);
                (a.min(b), a.max(b))
            })
            .collect();
        Triangulation { size: p, diagonals }
    }
}

/// A triangulation together with its hidden vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FramedTriangulation {
    triangulation: Triangulation,
    hidden: usize,
}

#[derive(Serialize)]
struct FramedView<'a> {
    size: usize,
    diagonals: Vec<[usize; 2]>,
    hidden: usize,
    #[serde(skip)]
    _marker: std::marker::PhantomData<&'a ()>,
}

impl Serialize for FramedTriangulation {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        FramedView {
            size: self.triangulation.size,
            diagonals: self.triangulation.diagonals.iter().map(|&(a, b)| [a, b]).collect(),
            hidden: self.hidden,
            _marker: std::marker::PhantomData,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FramedTriangulation {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            size: usize,
            diagonals: Vec<[usize; 2]>,
            hidden: usize,
        }
        let raw = Raw::deserialize(deserializer)?;
        let t = Triangulation::try_from(RawTriangulation { size: raw.size, diagonals: raw.diagonals })
            .map_err(serde::de::Error::custom)?;
        FramedTriangulation::new(t, raw.hidden).map_err(serde::de::Error::custom)
    }
}

impl FramedTriangulation {
    pub fn new(triangulation: Triangulation, hidden: usize) -> Result<Self> {
        if hidden >= triangulation.size {
            return Err(Error::OutOfRange(format!(
                "hidden vertex {hidden} outside a {}-gon",
                triangulation.size
            )));
        }
        Ok(Self { triangulation, hidden })
    }

    pub fn triangulation(&self) -> &Triangulation {
        &self.triangulation
    }

    pub fn hidden(&self) -> usize {
        self.hidden
    }

    /// Chain length `s`, one less than the polygon size.
    pub fn chain_len(&self) -> usize {
        self.triangulation.size - 1
    }

    /// Vertex at 1-based reading position `pos` (position `s+1` is the hidden vertex).
    pub fn vertex_at(&self, pos: usize) -> usize {
        (self.hidden + pos) % self.triangulation.size
    }

    /// 1-based reading position of vertex `v`; the hidden vertex reads last, at `s+1`.
    pub fn position_of(&self, v: usize) -> usize {
        let p = self.triangulation.size;
        let off = (v + p - self.hidden) % p;
        if off == 0 {
            p
        } else {
            off
        }
    }
}

/// `[b_1, ..., b_s | b_0]`: a zero chain together with its hidden index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawExtended")]
pub struct ExtendedZeroChain {
    body: Vec<u64>,
    hidden: u64,
}

#[derive(Deserialize)]
struct RawExtended {
    body: Vec<u64>,
    hidden: u64,
}

impl TryFrom<RawExtended> for ExtendedZeroChain {
    type Error = Error;
    fn try_from(raw: RawExtended) -> Result<Self> {
        ExtendedZeroChain::new(raw.body, raw.hidden)
    }
}

impl ExtendedZeroChain {
    /// Checks entries >= 1, the sum rule `b_0 + sum b_i = 3(s-1)`, and that the body is a zero chain.
    pub fn new(body: Vec<u64>, hidden: u64) -> Result<Self> {
        let s = body.len();
        if s < 2 {
            return Err(Error::NotAZeroChain(format!("body of length {s} is too short")));
        }
        if hidden == 0 || body.contains(&0) {
            return Err(Error::NotAZeroChain("entries must be >= 1".into()));
        }
        let total: u64 = body.iter().sum::<u64>() + hidden;
        if total != 3 * (s as u64 - 1) {
            return Err(Error::NotAZeroChain(format!(
                "entries sum to {total}, expected 3(s-1) = {}",
                3 * (s - 1)
            )));
        }
        if !is_zero_entries(&body) {
            return Err(Error::NotAZeroChain(format!("{body:?} does not evaluate to 0")));
        }
        Ok(Self { body, hidden })
    }

    /// Completes a zero chain body with the hidden index forced by the sum rule.
    pub fn from_body(body: Vec<u64>) -> Result<Self> {
        let s = body.len() as i64;
        let hidden = 3 * (s - 1) - body.iter().sum::<u64>() as i64;
        if hidden < 1 {
            return Err(Error::NotAZeroChain(format!("forced hidden index {hidden} is not positive")));
        }
        Self::new(body, hidden as u64)
    }

    pub(crate) fn from_parts_unchecked(body: Vec<u64>, hidden: u64) -> Self {
        Self { body, hidden }
    }

    pub fn body(&self) -> &[u64] {
        &self.body
    }

    pub fn hidden(&self) -> u64 {
        self.hidden
    }

    pub fn len(&self) -> usize {
        self.body.len()
    }

    pub fn is_empty(&self) -> bool {
        self.body.is_empty()
    }

    /// `(b_1, ..., b_s, b_0)`, the reading order used by coherent graphs.
    pub fn reading_vector(&self) -> Vec<u64> {
        let mut v = self.body.clone();
        v.push(self.hidden);
        v
    }

    /// Entry at 1-based reading position (`s+1` is the hidden entry).
    pub fn at(&self, pos: usize) -> u64 {
        if pos == self.body.len() + 1 {
            self.hidden
        } else {
            self.body[pos - 1]
        }
    }

    /// Makes body position `pos` (1-based) the new hidden entry; the old hidden
    /// entry is read right after it.
    pub fn rehidden(&self, pos: usize) -> ExtendedZeroChain {
        let v = self.reading_vector();
        let p = v.len();
        let mut body = Vec::with_capacity(p - 1);
        for k in 0..p - 1 {
            body.push(v[(pos + k) % p]);
        }
        ExtendedZeroChain { body, hidden: v[pos - 1] }
    }
}

impl fmt::Display for ExtendedZeroChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, e) in self.body.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "|{}]", self.hidden)
    }
}

/// Parses `b1,...,bs|b0`, optionally in brackets.
impl FromStr for ExtendedZeroChain {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
        let (body, hidden) = inner
            .split_once('|')
            .ok_or_else(|| Error::Parse(format!("extended chain {s:?} needs a '|' before the hidden index")))?;
        let hidden = hidden
            .trim()
            .parse::<u64>()
            .map_err(|_| Error::Parse(format!("bad hidden index in {s:?}")))?;
        ExtendedZeroChain::new(parse_entries(body)?, hidden)
    }
}

/// The framed index vector.
pub fn index_vector(ft: &FramedTriangulation) -> ExtendedZeroChain {
    let idx = ft.triangulation.indices();
    let p = idx.len();
    let body = (1..p).map(|k| idx[(ft.hidden + k) % p]).collect();
    ExtendedZeroChain::from_parts_unchecked(body, idx[ft.hidden])
}

/// Triangulates a polygon from the cyclic index vector `values` (vertex `k`
/// has index `values[k]`) by repeatedly cutting the lowest-labeled ear.
///
/// Uses only integer bookkeeping, no continued fraction evaluation.
pub fn ear_cut(values: &[u64]) -> Result<BTreeSet<Diagonal>> {
    if values.len() < 3 {
        return Err(Error::Inconsistent(format!("{} vertices cannot be triangulated", values.len())));
    }
    let mut alive: Vec<(usize, u64)> = values.iter().copied().enumerate().collect();
    let mut diagonals = BTreeSet::new();
    while alive.len() > 3 {
        let len = alive.len();
        let i = alive
            .iter()
            .position(|&(_, v)| v == 1)
            .ok_or_else(|| Error::Inconsistent(format!("no ear among {len} remaining vertices")))?;
        let (prev, next) = ((i + len - 1) % len, (i + 1) % len);
        if alive[prev].1 < 2 || alive[next].1 < 2 {
            return Err(Error::Inconsistent(format!("ear at vertex {} has an ear neighbor", alive[i].0)));
        }
        let (a, b) = (alive[prev].0, alive[next].0);
        diagonals.insert((a.min(b), a.max(b)));
        alive[prev].1 -= 1;
        alive[next].1 -= 1;
        alive.remove(i);
    }
    if alive.iter().any(|&(_, v)| v != 1) {
        return Err(Error::Inconsistent("final triangle does not have indices (1,1,1)".into()));
    }
    Ok(diagonals)
}

/// The unique framed triangulation whose index vector is `c` (vertex 0 hidden).
pub fn from_extended_chain(c: &ExtendedZeroChain) -> Result<FramedTriangulation> {
    let mut values = Vec::with_capacity(c.len() + 1);
    values.push(c.hidden);
    values.extend_from_slice(&c.body);
    let diagonals = ear_cut(&values)?;
    let t = Triangulation::from_parts_unchecked(values.len(), diagonals);
    Ok(FramedTriangulation { triangulation: t, hidden: 0 })
}

/// Same triangulation, new hidden vertex (taken mod the polygon size).
pub fn reframe(ft: &FramedTriangulation, new_hidden: usize) -> FramedTriangulation {
    FramedTriangulation {
        triangulation: ft.triangulation.clone(),
        hidden: new_hidden % ft.triangulation.size,
    }
}

/// Exactly two vertices of index 1.
pub fn is_accordion(t: &Triangulation) -> bool {
    t.indices().iter().filter(|&&i| i == 1).count() == 2
}

/// A vertex of index greater than 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Weight {
    /// 1-based reading position; `s+1` for the hidden vertex.
    pub position: usize,
    pub vertex: usize,
    pub value: u64,
}

/// Weights in reading order `b_1, ..., b_s, b_0`.
pub fn weights_of(ft: &FramedTriangulation) -> Vec<Weight> {
    let idx = ft.triangulation.indices();
    (1..=ft.triangulation.size)
        .filter_map(|pos| {
            let vertex = ft.vertex_at(pos);
            (idx[vertex] > 2).then_some(Weight { position: pos, vertex, value: idx[vertex] })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum WeightKind {
    TypeI,
    TypeII,
}

/// Where the fan of diagonals at weight `x_i` lands: the consecutive pair
/// `(x_j, x_{j+1})`, indices 1-based mod n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WeightFan {
    pub kind: WeightKind,
    pub pair: (usize, usize),
}

/// 1-based residue mod n with 0 mapped to n.
pub(crate) fn wrap1(i: i64, n: usize) -> usize {
    let r = i.rem_euclid(n as i64) as usize;
    if r == 0 {
        n
    } else {
        r
    }
}

/// Fan of weight `i` (1-based) read geometrically from the diagonal set.
pub(crate) fn fan_of(ft: &FramedTriangulation, weights: &[Weight], i: usize) -> Result<WeightFan> {
    let n = weights.len();
    let p = ft.triangulation.size;
    let v = weights[i - 1].vertex;
    let mut offsets: Vec<usize> = ft
        .triangulation
        .diagonal_neighbors(v)
        .into_iter()
        .map(|u| (u + p - v) % p)
        .collect();
    offsets.sort_unstable();
    let (lo, hi) = match (offsets.first(), offsets.last()) {
        (Some(&lo), Some(&hi)) if hi - lo + 1 == offsets.len() => (lo, hi),
        _ => return Err(Error::NotAccordion),
    };
    let mut inside: Vec<(usize, usize)> = weights
        .iter()
        .enumerate()
        .filter_map(|(l, w)| {
            let off = (w.vertex + p - v) % p;
            (lo..=hi).contains(&off).then_some((l + 1, off))
        })
        .collect();
    // the arc may wrap past x_n, so order by offset rather than by label
    inside.sort_unstable_by_key(|&(_, off)| off);
    let j = match inside.as_slice() {
        [(l, off)] if *off == lo => *l,
        [(l, off)] if *off == hi => wrap1(*l as i64 - 1, n),
        [(l1, o1), (l2, o2)] if *o1 == lo && *o2 == hi && wrap1(*l1 as i64 + 1, n) == *l2 => *l1,
        _ => {
            return Err(Error::Invariant(format!(
                "fan of weight x_{i} does not span a consecutive pair of weights"
            )))
        }
    };
    let kind = if j == i || j == wrap1(i as i64 - 1, n) {
        WeightKind::TypeI
    } else {
        WeightKind::TypeII
    };
    Ok(WeightFan { kind, pair: (j, wrap1(j as i64 + 1, n)) })
}

/// Type and target pair of weight `x_i` (1-based) in a framed accordion with at least two weights.
pub fn weight_type(ft: &FramedTriangulation, i: usize) -> Result<WeightFan> {
    if !is_accordion(&ft.triangulation) {
        return Err(Error::NotAccordion);
    }
    let weights = weights_of(ft);
    if weights.len() < 2 {
        return Err(Error::Precondition(format!("need at least two weights, found {}", weights.len())));
    }
    if i == 0 || i > weights.len() {
        return Err(Error::OutOfRange(format!("weight x_{i} with n = {}", weights.len())));
    }
    fan_of(ft, &weights, i)
}

/// The accordion with weights `x_1, ..., x_n` in counterclockwise order,
/// `x_n` hidden, whose fan at `x_n` spans `(x_m, x_{m+1})`.
///
/// Built as a strip of triangles: in zigzag order each weight contributes a
/// run of `x - 2` triangles pivoting on it, alternating between the two
/// sides of the strip. The zigzag order follows from the fan rule: the fan at
/// `x_i` spans `(x_{m-i}, x_{m-i+1})`.
pub fn standard_accordion(weights: &[u64], m: usize) -> Result<FramedTriangulation> {
    let n = weights.len();
    if n < 2 {
        return Err(Error::InvalidWeights(format!("need at least two weights, got {n}")));
    }
    if let Some(x) = weights.iter().find(|&&x| x < 3) {
        return Err(Error::InvalidWeights(format!("weight {x} is below 3")));
    }
    if m >= n {
        return Err(Error::OutOfRange(format!("m = {m} must be below n = {n}")));
    }

    let zigzag = zigzag_order(n, m)?;

    // Strip simulation. Vertex tags: None for non-weights, Some(i) for x_i.
    let mut tags: Vec<Option<usize>> = Vec::new();
    let new_vertex = |tags: &mut Vec<Option<usize>>| {
        tags.push(None);
        tags.len() - 1
    };
    let ear_start = new_vertex(&mut tags);
    let mut left = vec![new_vertex(&mut tags)];
    let mut right = vec![new_vertex(&mut tags)];
    let mut diagonals: Vec<Diagonal> = vec![(left[0], right[0])];
    for (t, &w) in zigzag.iter().enumerate() {
        let run = weights[w - 1] - 2;
        let pivot_on_left = t % 2 == 0;
        let pivot = if pivot_on_left { *left.last().unwrap() } else { *right.last().unwrap() };
        tags[pivot] = Some(w);
        for _ in 0..run {
            let fresh = new_vertex(&mut tags);
            if pivot_on_left {
                right.push(fresh);
            } else {
                left.push(fresh);
            }
            diagonals.push((pivot, fresh));
        }
    }
    let ear_end = new_vertex(&mut tags);

    let mut cycle = vec![ear_start];
    cycle.extend(left.iter().copied());
    cycle.push(ear_end);
    cycle.extend(right.iter().rev().copied());
    let p = cycle.len();

    let hidden_id = tags.iter().position(|&t| t == Some(n)).expect("x_n is placed");
    for reversed in [false, true] {
        let mut order = cycle.clone();
        if reversed {
            order.reverse();
        }
        let start = order.iter().position(|&v| v == hidden_id).unwrap();
        order.rotate_left(start);
        let mut label = vec![0usize; tags.len()];
        for (k, &v) in order.iter().enumerate() {
            label[v] = k;
        }
        let diags = diagonals
            .iter()
            .map(|&(a, b)| {
                let (a, b) = (label[a], label[b]);
                (a.min(b), a.max(b))
            })
            .collect::<BTreeSet<_>>();
        let t = Triangulation::from_parts_unchecked(p, diags);
        let ft = FramedTriangulation { triangulation: t, hidden: 0 };
        let seen: Vec<usize> = order.iter().filter_map(|&v| tags[v]).collect();
        let mut expected: Vec<usize> = (1..=n).collect();
        expected.rotate_right(1);
        if seen != expected {
            continue;
        }
        let fan = weight_type(&ft, n)?;
        if fan.pair == (wrap1(m as i64, n), wrap1(m as i64 + 1, n)) {
            let got: Vec<u64> = weights_of(&ft).iter().map(|w| w.value).collect();
            if got != weights {
                return Err(Error::Invariant(format!("built weights {got:?}, wanted {weights:?}")));
            }
            return Ok(ft);
        }
    }
    Err(Error::Invariant(format!("strip for weights {weights:?}, m = {m} has the wrong fan at x_n")))
}

/// Weights in strip order: a path where `x_i` neighbors `x_{m-i}` and `x_{m-i+1}`.
fn zigzag_order(n: usize, m: usize) -> Result<Vec<usize>> {
    let nbrs = |i: usize| [wrap1(m as i64 - i as i64, n), wrap1(m as i64 - i as i64 + 1, n)];
    let start = (1..=n)
        .find(|&i| nbrs(i).contains(&i))
        .ok_or_else(|| Error::Invariant(format!("no end weight for n = {n}, m = {m}")))?;
    let mut order = vec![start];
    let mut prev = start;
    let mut cur = start;
    while order.len() < n {
        let next = nbrs(cur)
            .into_iter()
            .find(|&j| j != cur && j != prev)
            .ok_or_else(|| Error::Invariant(format!("zigzag for n = {n}, m = {m} stops early")))?;
        if order.contains(&next) {
            return Err(Error::Invariant(format!("zigzag for n = {n}, m = {m} revisits x_{next}")));
        }
        order.push(next);
        prev = cur;
        cur = next;
    }
    Ok(order)
}

/// A framing whose hidden vertex is a type (I) weight and whose first body
/// entry is 1; the lexicographically smallest extended chain among them.
///
/// With a single weight, that weight counts as type (I).
pub fn standard_frame(t: &Triangulation) -> Option<FramedTriangulation> {
    if !is_accordion(t) {
        return None;
    }
    let idx = t.indices();
    let n = idx.iter().filter(|&&i| i > 2).count();
    (0..t.size)
        .filter(|&h| idx[h] > 2)
        .filter_map(|h| {
            let ft = FramedTriangulation { triangulation: t.clone(), hidden: h };
            let chain = index_vector(&ft);
            if chain.body[0] != 1 {
                return None;
            }
            let type_one = n == 1 || matches!(weight_type(&ft, n), Ok(f) if f.kind == WeightKind::TypeI);
            type_one.then_some((chain, ft))
        })
        .min_by(|a, b| a.0.cmp(&b.0))
        .map(|(_, ft)| ft)
}
