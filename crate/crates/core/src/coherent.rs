//! Coherent graphs of framed triangulations and the linear systems `S_m`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::triangulation::{fan_of, index_vector, is_accordion, weights_of, wrap1, FramedTriangulation, WeightKind};

/// Weights `x_1..x_n` read in chain order and the gap labels `y_1..y_n`,
/// where `y_i` counts the non-weight vertices between `x_i` and `x_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoherentGraph {
    pub weights: Vec<u64>,
    pub labels: Vec<u64>,
}

impl CoherentGraph {
    pub fn n(&self) -> usize {
        self.weights.len()
    }

    /// Whether the labels satisfy every relation of `sys`.
    pub fn satisfies(&self, sys: &RelationSystem) -> bool {
        sys.n == self.n()
            && sys.relations.iter().all(|r| {
                self.weights[r.target - 1] >= r.constant
                    && self.labels[r.label - 1] == self.weights[r.target - 1] - r.constant
            })
    }
}

pub fn build_coherent_graph(ft: &FramedTriangulation) -> Result<CoherentGraph> {
    let ws = weights_of(ft);
    if ws.is_empty() {
        return Err(Error::NoWeights);
    }
    let p = ft.triangulation().size();
    let n = ws.len();
    let mut labels: Vec<u64> = ws.windows(2).map(|w| (w[1].position - w[0].position - 1) as u64).collect();
    let used: u64 = labels.iter().sum();
    labels.push(p as u64 - n as u64 - used);
    Ok(CoherentGraph { weights: ws.iter().map(|w| w.value).collect(), labels })
}

/// `y_label = x_target - constant`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub label: usize,
    pub target: usize,
    pub constant: u64,
}

/// The system `S_m`: `y_i = x_{n-i+m} - k_i`, one relation per label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationSystem {
    pub n: usize,
    pub m: usize,
    pub k: Vec<u64>,
    pub relations: Vec<Relation>,
}

impl RelationSystem {
    /// `S_m` from the k-vector table.
    pub fn standard(n: usize, m: usize) -> Result<Self> {
        let k = k_vector(n, m)?;
        let relations = (1..=n)
            .map(|i| Relation { label: i, target: wrap1((n - i + m) as i64, n), constant: k[i - 1] })
            .collect();
        Ok(Self { n, m, k, relations })
    }
}

/// Reads one relation per weight from the fans of the diagonals: a weight
/// `x_i` whose fan spans `(x_j, x_{j+1})` gives `y_j = x_i - 1` when it is of
/// type (I) and `y_j = x_i - 3` otherwise.
pub fn relation_system_of(ft: &FramedTriangulation) -> Result<RelationSystem> {
    if !is_accordion(ft.triangulation()) {
        return Err(Error::NotAccordion);
    }
    let ws = weights_of(ft);
    let n = ws.len();
    if n < 2 {
        return Err(Error::Precondition(format!("need at least two weights, found {n}")));
    }
    let mut by_label: Vec<Option<Relation>> = vec![None; n];
    let mut m = None;
    for i in 1..=n {
        let fan = fan_of(ft, &ws, i)?;
        let label = fan.pair.0;
        let constant = if fan.kind == WeightKind::TypeI { 1 } else { 3 };
        let rot = wrap1((label + i) as i64, n) % n;
        if *m.get_or_insert(rot) != rot {
            return Err(Error::Invariant(format!("fans of the weights disagree on the rotation ({rot} vs {m:?})")));
        }
        if by_label[label - 1].replace(Relation { label, target: i, constant }).is_some() {
            return Err(Error::Invariant(format!("two weights fan into the gap y_{label}")));
        }
    }
    let relations: Vec<Relation> = by_label.into_iter().map(|r| r.expect("every gap is covered")).collect();
    let k = relations.iter().map(|r| r.constant).collect();
    Ok(RelationSystem { n, m: m.unwrap_or(0), k, relations })
}

/// `k^{(m)}` as a vector of 1s and 3s (1-based positions stored at index `pos - 1`).
pub fn k_vector(n: usize, m: usize) -> Result<Vec<u64>> {
    if n < 2 || m >= n {
        return Err(Error::OutOfRange(format!("k-vector needs n >= 2 and m < n, got ({n}, {m})")));
    }
    let (floor, ceil) = (m / 2, m.div_ceil(2));
    let (a, b) = if n % 2 == 1 {
        ((n - 1) / 2 + ceil, n + floor)
    } else {
        (n / 2 + floor, n + floor)
    };
    let (a, b) = (wrap1(a as i64, n), wrap1(b as i64, n));
    if a == b {
        return Err(Error::Invariant(format!("k-vector 1-positions collide at {a} for ({n}, {m})")));
    }
    let mut k = vec![3; n];
    k[a - 1] = 1;
    k[b - 1] = 1;
    Ok(k)
}

/// Closed-form consistency of `S_0 ∪ S_m`.
pub fn consistency(n: usize, m: usize) -> bool {
    let g = n.gcd(&m) as i64;
    let (n, floor, ceil) = (n as i64, (m / 2) as i64, m.div_ceil(2) as i64);
    let divides = |x: i64| x.rem_euclid(g) == 0;
    if n % 2 == 0 {
        divides(n - floor) || divides(n / 2 - floor)
    } else {
        divides(n - ceil) || divides((n - 1) / 2 - floor)
    }
}

/// `v_i = k^{(0)}_{n-i} - k^{(m)}_{n-i}` for `i = 1..n`.
fn difference_vector(n: usize, m: usize) -> Result<Vec<i64>> {
    let k0 = k_vector(n, 0)?;
    let km = k_vector(n, m)?;
    Ok((1..=n)
        .map(|i| {
            let pos = wrap1(n as i64 - i as i64, n);
            k0[pos - 1] as i64 - km[pos - 1] as i64
        })
        .collect())
}

/// Consistency by summing `v` over the orbits of `i -> i + m`.
pub fn cycle_sum_consistency(n: usize, m: usize) -> Result<bool> {
    let v = difference_vector(n, m)?;
    let mut seen = vec![false; n];
    for start in 1..=n {
        let (mut i, mut sum) = (start, 0);
        while !seen[i - 1] {
            seen[i - 1] = true;
            sum += v[i - 1];
            i = wrap1((i + m) as i64, n);
        }
        if sum != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Solutions of `S_0 ∪ S_m`: `x_i = t_r + offsets[i]` where `t_r` is the
/// parameter of the orbit of `i` under `+m`, anchored at position `r <= gcd(n, m)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParametricFamily {
    pub n: usize,
    pub m: usize,
    pub offsets: Vec<i64>,
    pub param_count: usize,
    pub param_min: Vec<i64>,
}

impl ParametricFamily {
    /// Parameter index (0-based) governing 1-based position `i`.
    pub fn param_of(&self, i: usize) -> usize {
        (i - 1) % self.param_count
    }

    pub fn instantiate(&self, params: &[i64]) -> Result<Vec<u64>> {
        if params.len() != self.param_count {
            return Err(Error::OutOfRange(format!(
                "family ({}, {}) takes {} parameters, got {}",
                self.n,
                self.m,
                self.param_count,
                params.len()
            )));
        }
        if let Some((r, (t, lo))) = params.iter().zip(&self.param_min).enumerate().find(|(_, (t, lo))| t < lo) {
            return Err(Error::OutOfRange(format!("parameter t_{} = {t} is below its minimum {lo}", r + 1)));
        }
        Ok((1..=self.n).map(|i| (params[self.param_of(i)] + self.offsets[i - 1]) as u64).collect())
    }
}

pub fn solve_parametric(n: usize, m: usize) -> Result<ParametricFamily> {
    if m == 0 || m >= n {
        return Err(Error::OutOfRange(format!("need 1 <= m < n, got ({n}, {m})")));
    }
    if !consistency(n, m) {
        return Err(Error::InconsistentSystem { n, m });
    }
    let v = difference_vector(n, m)?;
    let g = n.gcd(&m);
    let mut offsets = vec![0i64; n];
    let mut param_min = Vec::with_capacity(g);
    for r in 1..=g {
        let mut i = r;
        let mut lowest = 0;
        for _ in 1..n / g {
            let next = wrap1((i + m) as i64, n);
            offsets[next - 1] = offsets[i - 1] - v[i - 1];
            lowest = lowest.min(offsets[next - 1]);
            i = next;
        }
        if offsets[i - 1] - v[i - 1] != 0 {
            return Err(Error::Invariant(format!("orbit of {r} does not close for ({n}, {m})")));
        }
        param_min.push(3 - lowest);
    }
    Ok(ParametricFamily { n, m, offsets, param_count: g, param_min })
}

/// Checks a framed accordion against its own relation system; returns the graph.
pub fn checked_graph(ft: &FramedTriangulation) -> Result<(CoherentGraph, RelationSystem)> {
    let graph = build_coherent_graph(ft)?;
    let sys = relation_system_of(ft)?;
    if !graph.satisfies(&sys) {
        return Err(Error::Invariant(format!("labels of {} violate their relation system", index_vector(ft))));
    }
    Ok((graph, sys))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::{from_extended_chain, standard_accordion, ExtendedZeroChain};

    fn framed(s: &str) -> FramedTriangulation {
        from_extended_chain(&s.parse::<ExtendedZeroChain>().unwrap()).unwrap()
    }

    #[test]
    fn graph_examples() {
        let g = build_coherent_graph(&framed("1,2,3,2,2,5,3,1,2,3,2,2,5|3")).unwrap();
        assert_eq!(g.weights, vec![3, 5, 3, 3, 5, 3]);
        assert_eq!(g.labels, vec![2, 0, 2, 2, 0, 2]);
        let g = build_coherent_graph(&framed("1,2,7,2,2,3,2,2,2,1,5,5,2,2,2,2|3")).unwrap();
        assert_eq!(g.weights, vec![7, 3, 5, 5, 3]);
        assert_eq!(g.labels, vec![2, 4, 0, 4, 2]);
        assert_eq!(g.labels.iter().sum::<u64>() + 5, 17);
        let g = build_coherent_graph(&framed("1,5,1,2,2,2|2")).unwrap();
        assert_eq!((g.weights, g.labels), (vec![5], vec![6]));
        assert_eq!(build_coherent_graph(&framed("1,2,1|2")), Err(Error::NoWeights));
    }

    #[test]
    fn relation_examples() {
        let sys = relation_system_of(&framed("1,2,3,2,2,5,3,1,2,3,2,2,5|3")).unwrap();
        let got: Vec<(usize, u64)> = sys.relations.iter().map(|r| (r.target, r.constant)).collect();
        assert_eq!(got, vec![(5, 3), (4, 3), (3, 1), (2, 3), (1, 3), (6, 1)]);
        assert_eq!(sys.m, 0);
        let p0 = standard_accordion(&[4, 6], 0).unwrap();
        let sys = relation_system_of(&p0).unwrap();
        assert_eq!(sys, RelationSystem::standard(2, 0).unwrap());
        assert_eq!(sys.relations[0].target, 1);
        assert_eq!(sys.k, vec![1, 1]);
    }

    #[test]
    fn single_weight_rule() {
        let g = build_coherent_graph(&framed("1,5,1,2,2,2|2")).unwrap();
        assert_eq!(g.labels[0], g.weights[0] + 1);
    }

    #[test]
    fn k_vector_examples() {
        assert_eq!(k_vector(5, 0).unwrap(), vec![3, 1, 3, 3, 1]);
        assert_eq!(k_vector(5, 3).unwrap(), vec![1, 3, 3, 1, 3]);
        assert_eq!(k_vector(2, 1).unwrap(), vec![1, 1]);
    }

    #[test]
    fn consistency_examples() {
        assert!(!consistency(4, 2));
        assert!(consistency(5, 2));
        assert!(consistency(2, 1));
        assert!(!cycle_sum_consistency(4, 2).unwrap());
        assert!(cycle_sum_consistency(4, 1).unwrap());
        assert!(cycle_sum_consistency(6, 2).unwrap());
        assert_eq!(difference_vector(4, 1).unwrap(), vec![0; 4]);
    }

    #[test]
    fn parametric_examples() {
        let f = solve_parametric(3, 1).unwrap();
        assert_eq!((f.offsets.clone(), f.param_min.clone()), (vec![0, -2, 0], vec![5]));
        let f = solve_parametric(5, 3).unwrap();
        assert_eq!((f.offsets.clone(), f.param_min.clone()), (vec![0, -4, -2, -2, -4], vec![7]));
        let f = solve_parametric(5, 2).unwrap();
        assert_eq!((f.offsets.clone(), f.param_min.clone()), (vec![0, 4, 0, 2, 2], vec![3]));
        assert_eq!(f.instantiate(&[3]).unwrap(), vec![3, 7, 3, 5, 5]);
        assert!(f.instantiate(&[2]).is_err());
        assert_eq!(solve_parametric(4, 2), Err(Error::InconsistentSystem { n: 4, m: 2 }));
        assert_eq!(solve_parametric(4, 1).unwrap().offsets, vec![0; 4]);
        assert_eq!(
            serde_json::to_string(&solve_parametric(3, 1).unwrap()).unwrap(),
            r#"{"n":3,"m":1,"offsets":[0,-2,0],"param_count":1,"param_min":[5]}"#
        );
    }

    #[test]
    fn degenerate_rotations() {
        // odd n with m = n - 1
        let f = solve_parametric(3, 2).unwrap();
        assert_eq!((f.offsets, f.param_min), (vec![0, 0, -2], vec![5]));
        let f = solve_parametric(5, 4).unwrap();
        assert_eq!((f.offsets, f.param_min), (vec![0, 0, 0, 0, -2], vec![5]));
    }
}
