//! Skein algebra of the marked disk: simple multicurves and the superposition
//! product, computed by resolving crossings and normalizing the heights of
//! strand ends at marked points.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cluster::ClusterChart;
use crate::coeff::OmegaLaurent;
use crate::error::{Error, Result};
use crate::polygon::{angular_key, Chord, Triangulation};
use crate::torus::TorusElement;

/// Sign of the exponent carried by the smoothing that joins the arms
/// `(b, c)` and `(d, a)` when the arms `a, b, c, d` of a crossing are listed
/// counterclockwise starting from an end of the over-strand.
pub const SMOOTHING_SIGN: i32 = -1;

/// Sign of the height-exchange factor at a marked point: a pair (upper end,
/// lower end) with the upper end clockwise of the lower one contributes
/// `w^{-HEIGHT_SIGN}`.
pub const HEIGHT_SIGN: i32 = 1;

/// Multiset of chords.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Multicurve {
    n: usize,
    curves: BTreeMap<Chord, u32>,
}

#[derive(Serialize, Deserialize)]
struct CurveJson {
    chord: [usize; 2],
    mult: u32,
}

#[derive(Serialize, Deserialize)]
struct MulticurveJson {
    curves: Vec<CurveJson>,
}

impl Multicurve {
    pub fn empty(n: usize) -> Self {
        Multicurve { n, curves: BTreeMap::new() }
    }

    pub fn new(n: usize, curves: &[(Chord, u32)]) -> Result<Self> {
        let mut m = Self::empty(n);
        for (c, k) in curves {
            c.validate(n)?;
            if *k > 0 {
                *m.curves.entry(*c).or_insert(0) += k;
            }
        }
        Ok(m)
    }

    pub fn single(n: usize, c: Chord) -> Self {
        Multicurve { n, curves: BTreeMap::from([(c, 1)]) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn curves(&self) -> Vec<(Chord, u32)> {
        self.curves.iter().map(|(c, k)| (*c, *k)).collect()
    }

    pub fn mult(&self, c: &Chord) -> u32 {
        self.curves.get(c).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    /// Number of strands counted with multiplicity.
    pub fn strand_count(&self) -> u32 {
        self.curves.values().sum()
    }

    /// Pairwise noncrossing.
    pub fn is_simple(&self) -> bool {
        let cs: Vec<&Chord> = self.curves.keys().collect();
        cs.iter().enumerate().all(|(i, x)| cs[i + 1..].iter().all(|y| !x.crosses(y)))
    }

    /// Strands as a list of chords (each repeated by multiplicity), sorted.
    pub fn strands(&self) -> Vec<Chord> {
        self.curves.iter().flat_map(|(c, k)| std::iter::repeat(*c).take(*k as usize)).collect()
    }

    pub fn union(&self, other: &Multicurve) -> Multicurve {
        let mut m = self.clone();
        for (c, k) in &other.curves {
            *m.curves.entry(*c).or_insert(0) += k;
        }
        m
    }

    pub fn from_json(n: usize, s: &str) -> Result<Self> {
        let j: MulticurveJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let mut v = Vec::new();
        for c in j.curves {
            v.push((Chord::new(c.chord[0], c.chord[1])?, c.mult));
        }
        Self::new(n, &v)
    }

    pub fn to_json(&self) -> String {
        let j = MulticurveJson {
            curves: self.curves.iter().map(|(c, k)| CurveJson { chord: [c.a, c.b], mult: *k }).collect(),
        };
        serde_json::to_string(&j).expect("serializable")
    }
}

impl fmt::Display for Multicurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.curves.is_empty() {
            return f.write_str("{}");
        }
        let parts: Vec<String> = self
            .curves
            .iter()
            .map(|(c, k)| if *k == 1 { c.to_string() } else { format!("{c}^{k}") })
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// `Z[w^{+-1}]`-combination of simple multicurves.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SkeinElement {
    n: usize,
    terms: BTreeMap<Multicurve, OmegaLaurent>,
}

impl SkeinElement {
    pub fn zero(n: usize) -> Self {
        SkeinElement { n, terms: BTreeMap::new() }
    }

    pub fn from_multicurve(k: Multicurve) -> Self {
        let n = k.n;
        SkeinElement { n, terms: BTreeMap::from([(k, OmegaLaurent::one())]) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Multicurve, OmegaLaurent> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, k: Multicurve, c: &OmegaLaurent) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(k.clone()).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn add(&self, o: &SkeinElement) -> SkeinElement {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(k.clone(), c);
        }
        out
    }

    pub fn scale(&self, s: &OmegaLaurent) -> SkeinElement {
        let mut out = SkeinElement::zero(self.n);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), &(c * s));
        }
        out
    }

    /// Superposition product, extended bilinearly.
    pub fn mul(&self, o: &SkeinElement) -> SkeinElement {
        let mut out = SkeinElement::zero(self.n);
        for (k, a) in &self.terms {
            for (l, b) in &o.terms {
                out = out.add(&superpose(k, l).scale(&(a * b)));
            }
        }
        out
    }

    /// Laurent expansion in a cluster chart.
    pub fn to_chart(&self, chart: &ClusterChart) -> Result<TorusElement> {
        let mut acc = TorusElement::zero(&chart.alg.base);
        for (k, c) in &self.terms {
            acc = acc.try_add(&chart.multicurve_value(&k.curves())?.scale(c))?;
        }
        Ok(acc)
    }
}

impl fmt::Display for SkeinElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(k, c)| format!("({c})*{k}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Monomial `T^v`: `v_i` parallel copies of edge `i`.
pub fn monomial_class(t: &Triangulation, v: &[i64]) -> Result<Multicurve> {
    if v.len() != t.num_edges() {
        return Err(Error::InvalidInput("weight vector length differs from edge count".into()));
    }
    if v.iter().any(|&x| x < 0) {
        return Err(Error::InvalidInput("monomial weights must be nonnegative".into()));
    }
    let curves: Vec<(Chord, u32)> = t.edges().iter().zip(v).map(|(c, &k)| (*c, k as u32)).collect();
    Multicurve::new(t.n(), &curves)
}

struct Strand {
    upper: bool,
    /// Circular positions of the ends at `chord.a` and `chord.b`.
    pos: [usize; 2],
}

/// Resolves the diagram with the `upper` strands over the `lower` strands.
fn resolve(n: usize, upper: &[Chord], lower: &[Chord]) -> SkeinElement {
    // Ends are spread over small arcs around their marked points: at vertex v
    // an end with a larger (angular key, copy) is further clockwise along the
    // boundary, which keeps parallel copies nested.
    let mut copies: BTreeMap<Chord, i64> = BTreeMap::new();
    let mut ends: Vec<(usize, usize, i64, usize, usize)> = Vec::new();
    let all: Vec<(Chord, bool)> =
        upper.iter().map(|c| (*c, true)).chain(lower.iter().map(|c| (*c, false))).collect();
    for (s, (c, _)) in all.iter().enumerate() {
        let t = copies.entry(*c).or_insert(0);
        *t += 1;
        ends.push((c.a, angular_key(n, c.a, c.b), *t, s, 0));
        ends.push((c.b, angular_key(n, c.b, c.a), -*t, s, 1));
    }
    ends.sort_by(|x, y| x.0.cmp(&y.0).then((y.1, y.2).cmp(&(x.1, x.2))));
    let total = ends.len();
    let mut strands: Vec<Strand> =
        all.iter().map(|(_, up)| Strand { upper: *up, pos: [0, 0] }).collect();
    for (p, e) in ends.iter().enumerate() {
        strands[e.3].pos[e.4] = p;
    }
    let end_vertex = |p: usize| ends[p].0;

    // Height normalization at marked points.
    let mut phase: i32 = 0;
    for u in strands.iter().filter(|s| s.upper) {
        for l in strands.iter().filter(|s| !s.upper) {
            for &pu in &u.pos {
                for &pl in &l.pos {
                    if end_vertex(pu) == end_vertex(pl) {
                        // Larger position means further clockwise at the vertex.
                        phase += if pu > pl { -HEIGHT_SIGN } else { HEIGHT_SIGN };
                    }
                }
            }
        }
    }

    let interleave = |x: &Strand, y: &Strand| {
        let (lo, hi) = (x.pos[0].min(x.pos[1]), x.pos[0].max(x.pos[1]));
        let inside = |p: usize| lo < p && p < hi;
        inside(y.pos[0]) != inside(y.pos[1])
    };
    let mut crossings: Vec<(usize, usize)> = Vec::new();
    for (i, x) in strands.iter().enumerate() {
        for (j, y) in strands.iter().enumerate() {
            if x.upper && !y.upper && interleave(x, y) {
                crossings.push((i, j));
            }
        }
    }

    // Node ids: strand ends 0..2S, then 4 arms per crossing.
    let s_count = strands.len();
    let arm = |x: usize, slot: usize| 2 * s_count + 4 * x + slot;
    let node_count = 2 * s_count + 4 * crossings.len();
    let mut seg = vec![usize::MAX; node_count];
    // Per crossing: arm slots 0 = upper toward start, 1 = upper toward end,
    // 2 = lower toward start, 3 = lower toward end.
    let mut smoothings: Vec<[[(usize, usize); 2]; 2]> = Vec::with_capacity(crossings.len());
    for (x, &(p, q)) in crossings.iter().enumerate() {
        let target = |s: usize, e: usize| strands[s].pos[e];
        let mut arms = [(target(p, 0), 0usize), (target(q, 0), 2), (target(p, 1), 1), (target(q, 1), 3)];
        let start = target(p, 0);
        arms.sort_by_key(|(pos, _)| (pos + total - start) % total);
        let [a, b, c, d] = arms.map(|(_, slot)| arm(x, slot));
        smoothings.push([[(a, b), (c, d)], [(b, c), (d, a)]]);
    }
    for (s, st) in strands.iter().enumerate() {
        let (p0, p1) = (st.pos[0], st.pos[1]);
        let mut along: Vec<(usize, usize, bool)> = Vec::new();
        for (x, &(p, q)) in crossings.iter().enumerate() {
            if p == s || q == s {
                let other = if p == s { q } else { p };
                let o = &strands[other];
                let side = if (o.pos[0] + total - p0) % total < (p1 + total - p0) % total { o.pos[0] } else { o.pos[1] };
                along.push(((side + total - p0) % total, x, p == s));
            }
        }
        along.sort();
        let mut prev = 2 * s;
        for (_, x, is_upper) in along {
            let (toward_start, toward_end) = if is_upper { (arm(x, 0), arm(x, 1)) } else { (arm(x, 2), arm(x, 3)) };
            seg[prev] = toward_start;
            seg[toward_start] = prev;
            prev = toward_end;
        }
        seg[prev] = 2 * s + 1;
        seg[2 * s + 1] = prev;
    }

    let loop_value = -(&OmegaLaurent::omega_pow(4) + &OmegaLaurent::omega_pow(-4));
    let mut out = SkeinElement::zero(n);
    let c = crossings.len();
    assert!(c < 40, "too many crossings for a direct state sum");
    let mut link = vec![usize::MAX; node_count];
    for state in 0u64..(1u64 << c) {
        let mut weight = phase;
        for (x, sm) in smoothings.iter().enumerate() {
            let pick = ((state >> x) & 1) as usize;
            weight += if pick == 1 { 2 * SMOOTHING_SIGN } else { -2 * SMOOTHING_SIGN };
            for &(u, v) in &sm[pick] {
                link[u] = v;
                link[v] = u;
            }
        }
        let mut visited = vec![false; node_count];
        let mut arcs: Vec<Chord> = Vec::new();
        let mut dead = false;
        for s in 0..2 * s_count {
            if visited[s] {
                continue;
            }
            visited[s] = true;
            let mut cur = seg[s];
            while cur >= 2 * s_count {
                visited[cur] = true;
                let nxt = link[cur];
                visited[nxt] = true;
                cur = seg[nxt];
            }
            visited[cur] = true;
            let (v0, v1) = (end_vertex(strands[s / 2].pos[s % 2]), end_vertex(strands[cur / 2].pos[cur % 2]));
            if v0 == v1 {
                dead = true;
                break;
            }
            arcs.push(Chord::new(v0, v1).unwrap());
        }
        if dead {
            continue;
        }
        let mut loops = 0;
        for start in 2 * s_count..node_count {
            if visited[start] {
                continue;
            }
            loops += 1;
            let mut cur = start;
            loop {
                visited[cur] = true;
                let nxt = link[cur];
                visited[nxt] = true;
                cur = seg[nxt];
                if visited[cur] {
                    break;
                }
            }
        }
        let mut coeff = OmegaLaurent::omega_pow(weight);
        for _ in 0..loops {
            coeff = &coeff * &loop_value;
        }
        let curves: Vec<(Chord, u32)> = arcs.into_iter().map(|a| (a, 1)).collect();
        let m = Multicurve::new(n, &curves).expect("arcs are valid chords");
        debug_assert!(m.is_simple(), "resolved diagram must be simple");
        out.add_term(m, &coeff);
    }
    out
}

/// `[K][L]` by a single state sum over all crossings of `K` over `L`.
pub fn superpose_state_sum(k: &Multicurve, l: &Multicurve) -> SkeinElement {
    resolve(k.n, &k.strands(), &l.strands())
}

/// `[K][L]`, multiplying in one strand of `L` at a time.
pub fn superpose(k: &Multicurve, l: &Multicurve) -> SkeinElement {
    let strands = l.strands();
    if strands.is_empty() {
        return SkeinElement::from_multicurve(k.clone());
    }
    // [c_1][c_2]...[c_r] = w^x [L]; recover x from the crossing-free product.
    let mut built = Multicurve::empty(k.n);
    let mut x_phase = 0i32;
    let mut acc = SkeinElement::from_multicurve(k.clone());
    for c in &strands {
        let step = resolve(k.n, &built.strands(), &[*c]);
        let (m, coeff) = step.terms.iter().next().expect("crossing-free product is a single term");
        let (e, _) = coeff.as_monomial().expect("crossing-free product has a monomial coefficient");
        x_phase += e;
        built = m.clone();
        let mut next = SkeinElement::zero(k.n);
        for (m, a) in &acc.terms {
            next = next.add(&resolve(k.n, &m.strands(), &[*c]).scale(a));
        }
        acc = next;
    }
    acc.scale(&OmegaLaurent::omega_pow(-x_phase))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(a: usize, b: usize) -> Chord {
        Chord::new(a, b).unwrap()
    }

    #[test]
    fn disjoint_curves_multiply_to_union() {
        let k = Multicurve::single(6, ch(0, 2));
        let l = Multicurve::single(6, ch(3, 5));
        let p = superpose(&k, &l);
        assert_eq!(p, SkeinElement::from_multicurve(k.union(&l)));
    }

    #[test]
    fn square_crossing_gives_two_matchings() {
        let k = Multicurve::single(4, ch(0, 2));
        let l = Multicurve::single(4, ch(1, 3));
        let p = superpose(&k, &l);
        assert_eq!(p.terms().len(), 2);
        let m1 = Multicurve::new(4, &[(ch(0, 1), 1), (ch(2, 3), 1)]).unwrap();
        let m2 = Multicurve::new(4, &[(ch(1, 2), 1), (ch(0, 3), 1)]).unwrap();
        assert!(p.terms().contains_key(&m1) && p.terms().contains_key(&m2));
        for c in p.terms().values() {
            assert!(c.as_monomial().is_some());
        }
    }

    fn oracle_holds(t: &Triangulation, k: &Multicurve, l: &Multicurve) -> bool {
        let chart = ClusterChart::new(t).unwrap();
        let lhs = superpose(k, l).to_chart(&chart).unwrap();
        let rhs = &SkeinElement::from_multicurve(k.clone()).to_chart(&chart).unwrap()
            * &SkeinElement::from_multicurve(l.clone()).to_chart(&chart).unwrap();
        lhs == rhs
    }

    #[test]
    fn square_products_match_chart() {
        let t = Triangulation::new(4, &[ch(0, 2)]).unwrap();
        let all: Vec<Chord> = crate::polygon::MarkedDisk { n: 4 }.all_chords();
        for a in &all {
            for b in &all {
                let k = Multicurve::single(4, *a);
                let l = Multicurve::single(4, *b);
                assert!(oracle_holds(&t, &k, &l), "{a} * {b}");
            }
        }
    }

    #[test]
    fn iterative_matches_state_sum() {
        let k = Multicurve::new(5, &[(ch(0, 2), 2), (ch(0, 3), 1), (ch(3, 4), 1)]).unwrap();
        let l = Multicurve::new(5, &[(ch(1, 3), 1), (ch(1, 4), 2), (ch(0, 1), 1)]).unwrap();
        assert_eq!(superpose(&k, &l), superpose_state_sum(&k, &l));
    }
}
