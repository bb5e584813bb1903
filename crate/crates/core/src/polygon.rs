//! Marked disks, chords, ideal triangulations, flips and the matrices
//! `epsilon`, `b`, `lambda` of a triangulation.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest polygon handled by exhaustive enumeration.
pub const ENUMERATION_BOUND: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MarkedDisk {
    pub n: usize,
}

impl MarkedDisk {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidInput(format!("a triangulable disk needs at least 3 marked points, got {n}")));
        }
        Ok(MarkedDisk { n })
    }

    pub fn boundary_edges(&self) -> Vec<Chord> {
        let mut v: Vec<Chord> = (0..self.n).map(|i| Chord::new(i, (i + 1) % self.n).unwrap()).collect();
        v.sort();
        v
    }

    /// All chords (boundary edges and diagonals), sorted.
    pub fn all_chords(&self) -> Vec<Chord> {
        let mut v = Vec::new();
        for a in 0..self.n {
            for b in a + 1..self.n {
                v.push(Chord { a, b });
            }
        }
        v
    }

    pub fn diagonals(&self) -> Vec<Chord> {
        self.all_chords().into_iter().filter(|c| !c.is_boundary(self.n)).collect()
    }
}

/// Unordered pair of distinct marked points, stored with `a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Chord {
    pub a: usize,
    pub b: usize,
}

impl Chord {
    pub fn new(x: usize, y: usize) -> Result<Self> {
        match x.cmp(&y) {
            std::cmp::Ordering::Less => Ok(Chord { a: x, b: y }),
            std::cmp::Ordering::Greater => Ok(Chord { a: y, b: x }),
            std::cmp::Ordering::Equal => Err(Error::InvalidInput(format!("chord endpoints must differ ({x})"))),
        }
    }

    pub fn is_boundary(&self, n: usize) -> bool {
        self.b - self.a == 1 || (self.a == 0 && self.b == n - 1)
    }

    pub fn has_vertex(&self, v: usize) -> bool {
        self.a == v || self.b == v
    }

    pub fn other(&self, v: usize) -> usize {
        if self.a == v {
            self.b
        } else {
            self.a
        }
    }

    /// Endpoints strictly interleave.
    pub fn crosses(&self, other: &Chord) -> bool {
        let inside = |x: usize| self.a < x && x < self.b;
        let ends_shared = self.has_vertex(other.a) || self.has_vertex(other.b);
        !ends_shared && (inside(other.a) != inside(other.b))
    }

    pub fn shared_vertex(&self, other: &Chord) -> Option<usize> {
        if self == other {
            return None;
        }
        [self.a, self.b].into_iter().find(|&v| other.has_vertex(v))
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.b >= n {
            return Err(Error::InvalidInput(format!("chord {self} out of range for n = {n}")));
        }
        Ok(())
    }

    pub fn parse(s: &str) -> Result<Self> {
        let (x, y) = s
            .trim()
            .split_once('-')
            .ok_or_else(|| Error::Parse(format!("chord `{s}` is not of the form a-b")))?;
        let x: usize = x.trim().parse().map_err(|_| Error::Parse(format!("bad chord `{s}`")))?;
        let y: usize = y.trim().parse().map_err(|_| Error::Parse(format!("bad chord `{s}`")))?;
        Chord::new(x, y)
    }
}

impl fmt::Display for Chord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.a, self.b)
    }
}

/// Angular position of the chord `v`-`w` at `v`: larger is further counterclockwise.
pub fn angular_key(n: usize, v: usize, w: usize) -> usize {
    (w + n - v) % n
}

/// `+1` if `c1` is clockwise to `c2` at their shared vertex, `-1` in the
/// reverse case, `0` if they share no vertex.
pub fn lambda_pair(n: usize, c1: &Chord, c2: &Chord) -> i64 {
    match c1.shared_vertex(c2) {
        None => 0,
        Some(v) => {
            let k1 = angular_key(n, v, c1.other(v));
            let k2 = angular_key(n, v, c2.other(v));
            if k1 < k2 {
                1
            } else {
                -1
            }
        }
    }
}

/// Dense integer matrix in row-major order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: i64) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Self {
        assert_eq!(self.cols, other.rows, "matrix dimension mismatch");
        let mut m = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    m.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        m
    }

    pub fn is_skew_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == -self.get(j, i)))
    }

    /// `x^t M y`.
    pub fn bilinear(&self, x: &[i64], y: &[i64]) -> i64 {
        let mut s = 0;
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            let row = self.row(i);
            for (j, &yj) in y.iter().enumerate() {
                s += xi * row[j] * yj;
            }
        }
        s
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// Matrix mutation in direction `(row k, column kc)`.
///
/// For a square skew matrix pass `k == kc`; for an `I x J` exchange matrix
/// pass the row index of the mutable edge and its column index.
pub fn mutate_rect(m: &IntMatrix, k: usize, kc: usize) -> IntMatrix {
    let mut out = m.clone();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let v = if i == k || j == kc {
                -m.get(i, j)
            } else {
                let bik = m.get(i, kc);
                let bkj = m.get(k, j);
                m.get(i, j) + (bik.abs() * bkj + bik * bkj.abs()) / 2
            };
            out.set(i, j, v);
        }
    }
    out
}

/// Mutation of a square skew matrix in direction `k`.
pub fn mutate_matrix(eps: &IntMatrix, k: usize) -> IntMatrix {
    mutate_rect(eps, k, k)
}

/// The matrices attached to a triangulation, indexed by its edge order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExchangeData {
    /// `I x I`.
    pub epsilon: IntMatrix,
    /// `I x J`, `b_ij = -epsilon_ij`.
    pub b: IntMatrix,
    /// `I x I`.
    pub lambda: IntMatrix,
    /// Positions in `I` of the internal edges, in order.
    pub mutable: Vec<usize>,
}

impl ExchangeData {
    /// `B^t Lambda`, a `J x I` matrix.
    pub fn compatibility_product(&self) -> IntMatrix {
        self.b.transpose().mul(&self.lambda)
    }

    /// Checks `B^t Lambda = (4 Id | 0)` in edge coordinates.
    pub fn is_compatible(&self) -> bool {
        let p = self.compatibility_product();
        self.mutable.iter().enumerate().all(|(jj, &j)| {
            (0..p.cols()).all(|i| p.get(jj, i) == if i == j { 4 } else { 0 })
        })
    }
}

/// Ideal triangulation of the marked disk.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triangulation {
    n: usize,
    diagonals: Vec<Chord>,
    edges: Vec<Chord>,
}

#[derive(Serialize, Deserialize)]
struct TriangulationJson {
    n: usize,
    diagonals: Vec<[usize; 2]>,
}

impl Triangulation {
    pub fn new(n: usize, diagonals: &[Chord]) -> Result<Self> {
        MarkedDisk::new(n)?;
        let mut d: Vec<Chord> = diagonals.to_vec();
        d.sort();
        d.dedup();
        for c in &d {
            c.validate(n)?;
            if c.is_boundary(n) {
                return Err(Error::InvalidInput(format!("{c} is a boundary edge, not a diagonal")));
            }
        }
        if d.len() != n - 3 {
            return Err(Error::InvalidInput(format!(
                "a triangulation of an {n}-gon has {} diagonals, got {}",
                n - 3,
                d.len()
            )));
        }
        for (i, x) in d.iter().enumerate() {
            for y in &d[i + 1..] {
                if x.crosses(y) {
                    return Err(Error::InvalidInput(format!("diagonals {x} and {y} cross")));
                }
            }
        }
        let mut edges = MarkedDisk { n }.boundary_edges();
        edges.extend(d.iter().copied());
        edges.sort();
        Ok(Triangulation { n, diagonals: d, edges })
    }

    /// Fan triangulation from vertex 0.
    pub fn fan(n: usize) -> Result<Self> {
        let d: Vec<Chord> = (2..n.saturating_sub(1)).map(|j| Chord { a: 0, b: j }).collect();
        Self::new(n, &d)
    }

    /// Parses a chart spec such as `0-2,0-3` (empty string for a triangle).
    pub fn parse_chart(n: usize, spec: &str) -> Result<Self> {
        let d: Result<Vec<Chord>> = spec
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(Chord::parse)
            .collect();
        Self::new(n, &d?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: TriangulationJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let d: Result<Vec<Chord>> = j.diagonals.iter().map(|p| Chord::new(p[0], p[1])).collect();
        Self::new(j.n, &d?)
    }

    pub fn to_json(&self) -> String {
        let j = TriangulationJson { n: self.n, diagonals: self.diagonals.iter().map(|c| [c.a, c.b]).collect() };
        serde_json::to_string(&j).expect("serializable")
    }

    pub fn chart_spec(&self) -> String {
        self.diagonals.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn disk(&self) -> MarkedDisk {
        MarkedDisk { n: self.n }
    }

    pub fn diagonals(&self) -> &[Chord] {
        &self.diagonals
    }

    /// Edge set `I` in canonical (lexicographic) order.
    pub fn edges(&self) -> &[Chord] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn index_of(&self, c: &Chord) -> Option<usize> {
        self.edges.binary_search(c).ok()
    }

    pub fn contains(&self, c: &Chord) -> bool {
        self.index_of(c).is_some()
    }

    pub fn is_internal(&self, i: usize) -> bool {
        !self.edges[i].is_boundary(self.n)
    }

    /// Positions in `I` of the internal edges (the set `J`).
    pub fn mutable_indices(&self) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| self.is_internal(i)).collect()
    }

    pub fn boundary_indices(&self) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| !self.is_internal(i)).collect()
    }

    /// Edges at vertex `v` sorted clockwise to counterclockwise.
    pub fn edges_at(&self, v: usize) -> Vec<usize> {
        let mut at: Vec<usize> = (0..self.edges.len()).filter(|&i| self.edges[i].has_vertex(v)).collect();
        at.sort_by_key(|&i| angular_key(self.n, v, self.edges[i].other(v)));
        at
    }

    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let mut out = BTreeSet::new();
        for v in 0..self.n {
            let at = self.edges_at(v);
            for w in at.windows(2) {
                let mut t = [v, self.edges[w[0]].other(v), self.edges[w[1]].other(v)];
                t.sort();
                out.insert(t);
            }
        }
        out.into_iter().collect()
    }

    pub fn epsilon(&self) -> IntMatrix {
        let m = self.edges.len();
        let mut eps = IntMatrix::zeros(m, m);
        for v in 0..self.n {
            let at = self.edges_at(v);
            for w in at.windows(2) {
                // w[0] is immediately clockwise to w[1].
                let (i, j) = (w[0], w[1]);
                eps.set(i, j, eps.get(i, j) - 1);
                eps.set(j, i, eps.get(j, i) + 1);
            }
        }
        eps
    }

    pub fn lambda(&self) -> IntMatrix {
        let m = self.edges.len();
        let mut lam = IntMatrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                lam.set(i, j, lambda_pair(self.n, &self.edges[i], &self.edges[j]));
            }
        }
        lam
    }

    pub fn exchange_data(&self) -> ExchangeData {
        let epsilon = self.epsilon();
        let mutable = self.mutable_indices();
        let mut b = IntMatrix::zeros(self.edges.len(), mutable.len());
        for i in 0..self.edges.len() {
            for (jj, &j) in mutable.iter().enumerate() {
                b.set(i, jj, -epsilon.get(i, j));
            }
        }
        ExchangeData { epsilon, b, lambda: self.lambda(), mutable }
    }

    /// The two vertices opposite to diagonal `k` in its quadrilateral.
    pub fn quadrilateral(&self, k: &Chord) -> Result<(usize, usize)> {
        if !self.diagonals.contains(k) {
            return Err(Error::InvalidInput(format!("{k} is not a diagonal of this triangulation")));
        }
        let apexes: Vec<usize> = (0..self.n)
            .filter(|&x| {
                !k.has_vertex(x)
                    && self.contains(&Chord::new(k.a, x).unwrap())
                    && self.contains(&Chord::new(k.b, x).unwrap())
            })
            .collect();
        if apexes.len() != 2 {
            return Err(Error::InvalidInput(format!("diagonal {k} does not bound two triangles")));
        }
        Ok((apexes[0], apexes[1]))
    }

    /// Flips diagonal `k`, returning the new triangulation and the new diagonal.
    pub fn flip(&self, k: &Chord) -> Result<(Triangulation, Chord)> {
        if k.is_boundary(self.n) {
            return Err(Error::InvalidInput(format!("cannot flip boundary edge {k}")));
        }
        let (x, y) = self.quadrilateral(k)?;
        let new = Chord::new(x, y)?;
        let d: Vec<Chord> = self.diagonals.iter().map(|c| if c == k { new } else { *c }).collect();
        Ok((Triangulation::new(self.n, &d)?, new))
    }

    /// Flip at edge position `k`; also returns `perm` with
    /// `perm[old index] = new index` under the natural edge bijection.
    pub fn flip_at(&self, k: usize) -> Result<(Triangulation, Vec<usize>)> {
        let kc = self.edges[k];
        let (t, new) = self.flip(&kc)?;
        let perm = self
            .edges
            .iter()
            .map(|c| if *c == kc { t.index_of(&new).unwrap() } else { t.index_of(c).unwrap() })
            .collect();
        Ok((t, perm))
    }

    /// Lexicographically smallest triangulation containing the given
    /// pairwise noncrossing chords (boundary edges are ignored).
    pub fn smallest_completion(n: usize, chords: &[Chord]) -> Result<Self> {
        let mut chosen: Vec<Chord> = chords.iter().copied().filter(|c| !c.is_boundary(n)).collect();
        for c in &chosen {
            c.validate(n)?;
        }
        chosen.sort();
        chosen.dedup();
        for (i, x) in chosen.iter().enumerate() {
            for y in &chosen[i + 1..] {
                if x.crosses(y) {
                    return Err(Error::InvalidInput(format!("chords {x} and {y} cross")));
                }
            }
        }
        for c in (MarkedDisk { n }).diagonals() {
            if !chosen.contains(&c) && chosen.iter().all(|x| !x.crosses(&c)) {
                chosen.push(c);
            }
        }
        Self::new(n, &chosen)
    }
}

impl fmt::Display for Triangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}[{}]", self.n, self.chart_spec())
    }
}

/// Catalan number `C_k`.
pub fn catalan(k: usize) -> u64 {
    let mut c: u64 = 1;
    for i in 0..k as u64 {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    c
}

/// All triangulations of the `n`-gon in sorted order.
pub fn enumerate_triangulations(n: usize) -> Result<Vec<Triangulation>> {
    MarkedDisk::new(n)?;
    if n > ENUMERATION_BOUND {
        return Err(Error::BoundExceeded(format!("enumeration is capped at n = {ENUMERATION_BOUND}, got {n}")));
    }
    let verts: Vec<usize> = (0..n).collect();
    let mut out: Vec<Triangulation> = triangulate(&verts)
        .into_iter()
        .map(|chords| {
            let d: Vec<Chord> = chords.into_iter().filter(|c| !c.is_boundary(n)).collect();
            Triangulation::new(n, &d).expect("enumeration yields valid triangulations")
        })
        .collect();
    out.sort();
    Ok(out)
}

fn triangulate(poly: &[usize]) -> Vec<Vec<Chord>> {
    if poly.len() < 3 {
        return vec![Vec::new()];
    }
    let first = poly[0];
    let last = poly[poly.len() - 1];
    let mut out = Vec::new();
    for m in 1..poly.len() - 1 {
        let left = triangulate(&poly[..=m]);
        let right = triangulate(&poly[m..]);
        for l in &left {
            for r in &right {
                let mut v = l.clone();
                v.extend(r.iter().copied());
                v.push(Chord::new(first, poly[m]).unwrap());
                v.push(Chord::new(poly[m], last).unwrap());
                out.push(v);
            }
        }
    }
    out
}

/// Shortest sequence of diagonals to flip to get from `t1` to `t2`.
pub fn flip_path(t1: &Triangulation, t2: &Triangulation) -> Result<Vec<Chord>> {
    if t1.n() != t2.n() {
        return Err(Error::InvalidInput("triangulations of different polygons".into()));
    }
    if t1 == t2 {
        return Ok(Vec::new());
    }
    let mut prev: BTreeMap<Triangulation, (Triangulation, Chord)> = BTreeMap::new();
    let mut queue = VecDeque::from([t1.clone()]);
    let mut seen = BTreeSet::from([t1.clone()]);
    while let Some(t) = queue.pop_front() {
        for k in t.diagonals().to_vec() {
            let (u, _) = t.flip(&k)?;
            if seen.insert(u.clone()) {
                prev.insert(u.clone(), (t.clone(), k));
                if &u == t2 {
                    let mut path = Vec::new();
                    let mut cur = u;
                    while let Some((p, k)) = prev.get(&cur) {
                        path.push(*k);
                        cur = p.clone();
                    }
                    path.reverse();
                    return Ok(path);
                }
                queue.push_back(u);
            }
        }
    }
    Err(Error::InvalidInput("flip graph disconnected".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(a: usize, b: usize) -> Chord {
        Chord::new(a, b).unwrap()
    }

    #[test]
    fn square_exchange_matrix_pins_orientation() {
        let t = Triangulation::new(4, &[ch(0, 2)]).unwrap();
        // Edge order: 0-1, 0-2, 0-3, 1-2, 2-3.
        let ed = t.exchange_data();
        let col: Vec<i64> = (0..5).map(|i| ed.b.get(i, 0)).collect();
        // At vertex 0, 0-1 is immediately clockwise to 0-2, so b = +1 there.
        assert_eq!(col, vec![1, 0, -1, -1, 1]);
        assert!(ed.is_compatible());
    }

    #[test]
    fn triangle_epsilon_is_a_three_cycle() {
        let t = Triangulation::new(3, &[]).unwrap();
        let e = t.epsilon();
        assert_eq!(e.to_rows(), vec![vec![0, -1, 1], vec![1, 0, -1], vec![-1, 1, 0]]);
    }

    #[test]
    fn flips() {
        let t = Triangulation::new(5, &[ch(0, 2), ch(0, 3)]).unwrap();
        let (u, new) = t.flip(&ch(0, 2)).unwrap();
        assert_eq!(new, ch(1, 3));
        assert_eq!(u.diagonals(), &[ch(0, 3), ch(1, 3)]);
        assert_eq!(u.flip(&new).unwrap().0, t);
        assert!(t.flip(&ch(0, 1)).is_err());
    }

    #[test]
    fn counts_match_catalan() {
        for n in 3..=9 {
            assert_eq!(enumerate_triangulations(n).unwrap().len() as u64, catalan(n - 2));
        }
    }

    #[test]
    fn pentagon_flip_graph_diameter() {
        let all = enumerate_triangulations(5).unwrap();
        let mut max = 0;
        for a in &all {
            for b in &all {
                max = max.max(flip_path(a, b).unwrap().len());
            }
        }
        assert_eq!(max, 2);
    }

    #[test]
    fn smallest_completion_contains_chords() {
        let t = Triangulation::smallest_completion(6, &[ch(1, 4)]).unwrap();
        assert!(t.contains(&ch(1, 4)));
        let all = enumerate_triangulations(6).unwrap();
        let best = all.iter().filter(|x| x.contains(&ch(1, 4))).min().unwrap();
        assert_eq!(&t, best);
    }
}
