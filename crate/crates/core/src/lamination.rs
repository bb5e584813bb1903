//! Integral tropical points: signed curve systems on the disk (`A`-laminations)
//! and pairs of positive curve systems on the disk and its mirror
//! (`D`-laminations), with validation, enumeration and the embedding `phi`.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polygon::{Chord, MarkedDisk};

/// Largest polygon accepted by the enumerators.
pub const ENUMERATION_MAX_N: usize = 9;

#[derive(Serialize, Deserialize)]
struct WeightJson {
    chord: [usize; 2],
    w: i64,
}

#[derive(Serialize, Deserialize, Default)]
struct DJson {
    #[serde(default)]
    front: Vec<WeightJson>,
    #[serde(default)]
    back: Vec<WeightJson>,
}

#[derive(Serialize, Deserialize)]
struct AJson {
    #[serde(default)]
    curves: Vec<WeightJson>,
}

fn weights_from_json(n: usize, v: Vec<WeightJson>) -> Result<BTreeMap<Chord, i64>> {
    let mut m = BTreeMap::new();
    for e in v {
        let c = Chord::new(e.chord[0], e.chord[1])?;
        c.validate(n)?;
        if e.w != 0 {
            *m.entry(c).or_insert(0) += e.w;
        }
    }
    m.retain(|_, w| *w != 0);
    Ok(m)
}

fn weights_to_json(m: &BTreeMap<Chord, i64>) -> Vec<WeightJson> {
    m.iter().map(|(c, w)| WeightJson { chord: [c.a, c.b], w: *w }).collect()
}

fn vertex_totals(n: usize, m: &BTreeMap<Chord, i64>) -> Vec<i64> {
    let mut t = vec![0; n];
    for (c, w) in m {
        t[c.a] += w;
        t[c.b] += w;
    }
    t
}

fn first_crossing(m: &BTreeMap<Chord, i64>) -> Option<(Chord, Chord)> {
    let cs: Vec<&Chord> = m.keys().collect();
    for (i, x) in cs.iter().enumerate() {
        for y in &cs[i + 1..] {
            if x.crosses(y) {
                return Some((**x, **y));
            }
        }
    }
    None
}

/// A point of the tropical `A`-space: integer weights on noncrossing chords.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ALamination {
    n: usize,
    weights: BTreeMap<Chord, i64>,
}

impl ALamination {
    pub fn empty(n: usize) -> Self {
        ALamination { n, weights: BTreeMap::new() }
    }

    /// Builds a lamination without validating it; zero weights are dropped.
    pub fn from_weights(n: usize, weights: &[(Chord, i64)]) -> Result<Self> {
        let mut m = BTreeMap::new();
        for (c, w) in weights {
            c.validate(n)?;
            *m.entry(*c).or_insert(0) += w;
        }
        m.retain(|_, w| *w != 0);
        Ok(ALamination { n, weights: m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &BTreeMap<Chord, i64> {
        &self.weights
    }

    pub fn weight(&self, c: &Chord) -> i64 {
        self.weights.get(c).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Chords carrying nonzero weight.
    pub fn curves(&self) -> Vec<Chord> {
        self.weights.keys().copied().collect()
    }

    pub fn diagonals(&self) -> Vec<Chord> {
        self.weights.keys().copied().filter(|c| !c.is_boundary(self.n)).collect()
    }

    /// First violated invariant, if any.
    pub fn validate(&self) -> std::result::Result<(), String> {
        for (c, w) in &self.weights {
            if !c.is_boundary(self.n) && *w <= 0 {
                return Err(format!("diagonal positivity: {c} has weight {w}"));
            }
        }
        if let Some((x, y)) = first_crossing(&self.weights) {
            return Err(format!("noncrossing: {x} and {y} cross"));
        }
        for (v, t) in vertex_totals(self.n, &self.weights).iter().enumerate() {
            if *t != 0 {
                return Err(format!("vertex sum: total weight {t} at vertex {v}"));
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    pub fn checked(self) -> Result<Self> {
        self.validate().map_err(Error::InvalidLamination)?;
        Ok(self)
    }

    /// Rotation `v -> v + r`.
    pub fn rotate(&self, r: usize) -> Self {
        let n = self.n;
        let weights = self
            .weights
            .iter()
            .map(|(c, w)| (Chord::new((c.a + r) % n, (c.b + r) % n).unwrap(), *w))
            .collect();
        ALamination { n, weights }
    }

    pub fn from_json(n: usize, s: &str) -> Result<Self> {
        let j: AJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(ALamination { n, weights: weights_from_json(n, j.curves)? })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&AJson { curves: weights_to_json(&self.weights) }).expect("serializable")
    }
}

impl fmt::Display for ALamination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.weights.iter().map(|(c, w)| format!("{c}:{w}")).collect();
        write!(f, "A{}{{{}}}", self.n, parts.join(","))
    }
}

/// A point of the tropical double: positive curve systems on `S` (front) and
/// on the mirror `S°` (back).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct DLamination {
    n: usize,
    front: BTreeMap<Chord, i64>,
    back: BTreeMap<Chord, i64>,
}

impl DLamination {
    pub fn empty(n: usize) -> Self {
        DLamination { n, front: BTreeMap::new(), back: BTreeMap::new() }
    }

    pub fn new(n: usize, front: &[(Chord, i64)], back: &[(Chord, i64)]) -> Result<Self> {
        let collect = |v: &[(Chord, i64)]| -> Result<BTreeMap<Chord, i64>> {
            let mut m = BTreeMap::new();
            for (c, w) in v {
                c.validate(n)?;
                *m.entry(*c).or_insert(0) += w;
            }
            m.retain(|_, w| *w != 0);
            Ok(m)
        };
        Ok(DLamination { n, front: collect(front)?, back: collect(back)? })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn front(&self) -> &BTreeMap<Chord, i64> {
        &self.front
    }

    pub fn back(&self) -> &BTreeMap<Chord, i64> {
        &self.back
    }

    pub fn is_empty(&self) -> bool {
        self.front.is_empty() && self.back.is_empty()
    }

    pub fn validate(&self) -> std::result::Result<(), String> {
        for (side, m) in [("front", &self.front), ("back", &self.back)] {
            for (c, w) in m {
                if *w <= 0 {
                    return Err(format!("positivity: {side} curve {c} has weight {w}"));
                }
            }
            if let Some((x, y)) = first_crossing(m) {
                return Err(format!("noncrossing: {side} curves {x} and {y} cross"));
            }
        }
        let (tf, tb) = (vertex_totals(self.n, &self.front), vertex_totals(self.n, &self.back));
        for v in 0..self.n {
            if tf[v] != tb[v] {
                return Err(format!("vertex totals: {} on the front and {} on the back at vertex {v}", tf[v], tb[v]));
            }
        }
        for c in self.front.keys() {
            if c.is_boundary(self.n) && self.back.contains_key(c) {
                return Err(format!("edge on both sides: {c}"));
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    pub fn checked(self) -> Result<Self> {
        self.validate().map_err(Error::InvalidLamination)?;
        Ok(self)
    }

    pub fn from_json(n: usize, s: &str) -> Result<Self> {
        let j: DJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(DLamination { n, front: weights_from_json(n, j.front)?, back: weights_from_json(n, j.back)? })
    }

    pub fn to_json(&self) -> String {
        let j = DJson { front: weights_to_json(&self.front), back: weights_to_json(&self.back) };
        serde_json::to_string(&j).expect("serializable")
    }
}

impl fmt::Display for DLamination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |m: &BTreeMap<Chord, i64>| m.iter().map(|(c, w)| format!("{c}:{w}")).collect::<Vec<_>>().join(",");
        write!(f, "D{}{{front:{};back:{}}}", self.n, side(&self.front), side(&self.back))
    }
}

/// Positive curves go to the back; negative boundary edges go to the front
/// with their absolute weights.
pub fn phi(l: &ALamination) -> Result<DLamination> {
    l.validate().map_err(Error::InvalidLamination)?;
    let mut front = BTreeMap::new();
    let mut back = BTreeMap::new();
    for (c, w) in &l.weights {
        if *w > 0 {
            back.insert(*c, *w);
        } else {
            front.insert(*c, -*w);
        }
    }
    Ok(DLamination { n: l.n, front, back })
}

/// Boundary weights making every vertex sum vanish, given the diagonal part.
/// Edge `i` is `(i, i+1)`. Returns every solution with entries in `[-bx, bx]`.
pub fn boundary_solutions(n: usize, diag: &BTreeMap<Chord, i64>, bx: i64) -> Vec<Vec<i64>> {
    let d = vertex_totals(n, diag);
    // b_{v-1} + b_v = -d_v. Propagate from b_0 = t: b_v = -d_v - b_{v-1}.
    let propagate = |t: i64| -> (Vec<i64>, i64) {
        let mut b = vec![0; n];
        b[0] = t;
        for v in 1..n {
            b[v] = -d[v] - b[v - 1];
        }
        // Residual of the equation at vertex 0.
        (b.clone(), b[n - 1] + b[0] + d[0])
    };
    let (_, r0) = propagate(0);
    let mut out = Vec::new();
    if n % 2 == 1 {
        // Residual is r0 + 2t.
        if r0 % 2 == 0 {
            let (b, r) = propagate(-r0 / 2);
            debug_assert_eq!(r, 0);
            if b.iter().all(|x| x.abs() <= bx) {
                out.push(b);
            }
        }
    } else if r0 == 0 {
        // b_v = b_v(0) + (-1)^v t.
        let (b0, _) = propagate(0);
        let mut lo = i64::MIN;
        let mut hi = i64::MAX;
        for (v, x) in b0.iter().enumerate() {
            let s = if v % 2 == 0 { 1 } else { -1 };
            // |x + s t| <= bx
            let (a, c) = if s == 1 { (-bx - x, bx - x) } else { (x - bx, x + bx) };
            lo = lo.max(a);
            hi = hi.min(c);
        }
        for t in lo..=hi {
            out.push(b0.iter().enumerate().map(|(v, x)| if v % 2 == 0 { x + t } else { x - t }).collect());
        }
    }
    out
}

/// Default half-width of the boundary-weight box for a diagonal bound.
pub fn default_boundary_box(n: usize, bound: i64) -> i64 {
    (bound * (n as i64 - 3)).max(1)
}

/// Pairwise noncrossing sets of diagonals, in lexicographic order.
pub fn noncrossing_diagonal_sets(n: usize) -> Vec<Vec<Chord>> {
    let diags = MarkedDisk { n }.diagonals();
    let mut out = Vec::new();
    fn rec(i: usize, diags: &[Chord], cur: &mut Vec<Chord>, out: &mut Vec<Vec<Chord>>) {
        if i == diags.len() {
            out.push(cur.clone());
            return;
        }
        rec(i + 1, diags, cur, out);
        if cur.iter().all(|c| !c.crosses(&diags[i])) {
            cur.push(diags[i]);
            rec(i + 1, diags, cur, out);
            cur.pop();
        }
    }
    rec(0, &diags, &mut Vec::new(), &mut out);
    out.sort();
    out
}

fn weightings(set: &[Chord], bound: i64) -> Vec<BTreeMap<Chord, i64>> {
    let mut out = vec![BTreeMap::new()];
    for c in set {
        let mut next = Vec::new();
        for m in &out {
            for w in 1..=bound {
                let mut m2 = m.clone();
                m2.insert(*c, w);
                next.push(m2);
            }
        }
        out = next;
    }
    out
}

/// All valid `A`-laminations with diagonal weights in `1..=bound` and boundary
/// weights in `[-bx, bx]`, sorted.
pub fn enumerate_alaminations(n: usize, bound: i64, bx: i64) -> Result<Vec<ALamination>> {
    if !(3..=ENUMERATION_MAX_N).contains(&n) || bound < 0 || bound > 4 {
        return Err(Error::BoundExceeded(format!("enumeration supports 3 <= n <= {ENUMERATION_MAX_N} and bound <= 4")));
    }
    let sets = noncrossing_diagonal_sets(n);
    let mut out: Vec<ALamination> = sets
        .par_iter()
        .flat_map_iter(|set| {
            let mut local = Vec::new();
            for diag in weightings(set, bound) {
                for b in boundary_solutions(n, &diag, bx) {
                    let mut weights = diag.clone();
                    for (i, x) in b.iter().enumerate() {
                        if *x != 0 {
                            // boundary edge i is (i, i+1)
                            let c = Chord::new(i, (i + 1) % n).unwrap();
                            weights.insert(c, *x);
                        }
                    }
                    local.push(ALamination { n, weights });
                }
            }
            local
        })
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// All valid `D`-laminations whose front and back weights are at most `bound`.
pub fn enumerate_dlaminations(n: usize, bound: i64) -> Result<Vec<DLamination>> {
    if !(3..=7).contains(&n) || !(0..=2).contains(&bound) {
        return Err(Error::BoundExceeded("D-lamination enumeration supports 3 <= n <= 7 and bound <= 2".into()));
    }
    let mut sets = noncrossing_diagonal_sets(n);
    // Each side may also carry boundary edges.
    let boundary = MarkedDisk { n }.boundary_edges();
    let mut with_boundary = Vec::new();
    for s in &sets {
        for mask in 0u32..(1 << boundary.len()) {
            let mut v = s.clone();
            for (i, b) in boundary.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    v.push(*b);
                }
            }
            with_boundary.push(v);
        }
    }
    sets = with_boundary;
    let mut sides: Vec<BTreeMap<Chord, i64>> = sets.iter().flat_map(|s| weightings(s, bound)).collect();
    sides.sort();
    let mut by_totals: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
    for (i, s) in sides.iter().enumerate() {
        by_totals.entry(vertex_totals(n, s)).or_default().push(i);
    }
    let mut out = Vec::new();
    for idx in by_totals.values() {
        for &i in idx {
            for &j in idx {
                let l = DLamination { n, front: sides[i].clone(), back: sides[j].clone() };
                if l.is_valid() {
                    out.push(l);
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(a: usize, b: usize) -> Chord {
        Chord::new(a, b).unwrap()
    }

    #[test]
    fn square_single_diagonal_has_no_completion() {
        // Alternating vertex sums of a 4-cycle force the weight of 0-2 to vanish.
        for w in 1..=3 {
            let diag = BTreeMap::from([(ch(0, 2), w)]);
            assert!(boundary_solutions(4, &diag, 10).is_empty());
        }
    }

    #[test]
    fn pentagon_single_diagonal() {
        let diag = BTreeMap::from([(ch(0, 2), 1)]);
        let sols = boundary_solutions(5, &diag, 3);
        assert_eq!(sols.len(), 1);
        let mut w: Vec<(Chord, i64)> = vec![(ch(0, 2), 1)];
        for (i, x) in sols[0].iter().enumerate() {
            w.push((ch(i, (i + 1) % 5), *x));
        }
        let l = ALamination::from_weights(5, &w).unwrap();
        assert!(l.is_valid(), "{l}");
        let d = phi(&l).unwrap();
        assert!(d.is_valid());
        assert_eq!(d.back().get(&ch(0, 2)), Some(&1));
        assert!(d.front().keys().all(|c| c.is_boundary(5)));
    }

    #[test]
    fn hexagon_odd_diagonal_has_a_line_of_completions() {
        let diag = BTreeMap::from([(ch(0, 3), 1)]);
        let sols = boundary_solutions(6, &diag, 2);
        assert!(sols.len() > 1);
    }

    #[test]
    fn negative_diagonal_is_rejected() {
        let l = ALamination::from_weights(4, &[(ch(0, 2), -1)]).unwrap();
        assert!(l.validate().unwrap_err().starts_with("diagonal positivity"));
    }

    #[test]
    fn enumeration_is_valid_and_rotation_closed() {
        let all = enumerate_alaminations(5, 1, default_boundary_box(5, 1)).unwrap();
        let set: std::collections::BTreeSet<_> = all.iter().cloned().collect();
        assert_eq!(set.len(), all.len());
        for l in &all {
            assert!(l.is_valid());
            assert!(set.contains(&l.rotate(1)));
        }
        let sq = enumerate_alaminations(4, 1, 1).unwrap();
        assert!(sq.iter().all(|l| l.diagonals().is_empty()));
        assert_eq!(sq.len(), 3);
        let pent = enumerate_alaminations(5, 1, 2).unwrap();
        for c in MarkedDisk::new(5).unwrap().diagonals() {
            assert!(pent.iter().any(|l| l.diagonals() == vec![c]));
        }
    }

    #[test]
    fn json_round_trip() {
        let d = DLamination::new(4, &[(ch(0, 1), 1)], &[(ch(0, 2), 1)]).unwrap();
        let s = d.to_json();
        assert_eq!(DLamination::from_json(4, &s).unwrap(), d);
    }
}
