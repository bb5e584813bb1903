//! Commutative (`q = 1`) reference implementation: Laurent polynomials over the
//! integers and cluster expansions built from the Ptolemy relation alone.
//!
//! Nothing here uses exchange matrices or quantum tori, so it serves as an
//! independent oracle for classical limits.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::polygon::{Chord, Triangulation};

/// Commutative Laurent polynomial in `nvars` variables.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct CommLaurent {
    nvars: usize,
    terms: BTreeMap<Vec<i64>, BigInt>,
}

impl CommLaurent {
    pub fn zero(nvars: usize) -> Self {
        CommLaurent { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(vec![0; nvars], BigInt::one())
    }

    pub fn monomial(v: Vec<i64>, c: BigInt) -> Self {
        let nvars = v.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(v, c);
        }
        CommLaurent { nvars, terms }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut v = vec![0; nvars];
        v[i] = 1;
        Self::monomial(v, BigInt::one())
    }

    pub fn from_terms(nvars: usize, terms: BTreeMap<Vec<i64>, BigInt>) -> Self {
        let mut x = Self::zero(nvars);
        for (v, c) in terms {
            x.add_term(v, c);
        }
        x
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, v: Vec<i64>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(v.clone()).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&v);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (v, c) in &o.terms {
            out.add_term(v.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (v, c) in &o.terms {
            out.add_term(v.clone(), -c);
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (u, a) in &self.terms {
            for (v, b) in &o.terms {
                let w: Vec<i64> = u.iter().zip(v).map(|(x, y)| x + y).collect();
                out.add_term(w, a * b);
            }
        }
        out
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        if k < 0 {
            let (v, c) = self
                .terms
                .iter()
                .next()
                .filter(|_| self.terms.len() == 1)
                .ok_or_else(|| Error::NonInvertibleFactor("negative power of a non-monomial".into()))?;
            if !(c.is_one() || *c == -BigInt::one()) {
                return Err(Error::NonInvertibleFactor("negative power of a non-unit monomial".into()));
            }
            let inv = Self::monomial(v.iter().map(|x| -x).collect(), c.clone());
            return inv.pow(-k);
        }
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        Ok(acc)
    }

    /// Exact quotient `self / d` if it is a Laurent polynomial.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        let (dv, dc) = d.terms.iter().next_back()?;
        let (dlo, dhi) = bounds(d)?;
        let (qlo, qhi) = match bounds(self) {
            None => return Some(quot),
            Some((lo, hi)) => (
                lo.iter().zip(&dlo).map(|(a, b)| a - b).collect::<Vec<_>>(),
                hi.iter().zip(&dhi).map(|(a, b)| a - b).collect::<Vec<_>>(),
            ),
        };
        while let Some((rv, rc)) = rem.terms.iter().next_back().map(|(v, c)| (v.clone(), c.clone())) {
            let e: Vec<i64> = rv.iter().zip(dv).map(|(a, b)| a - b).collect();
            if e.iter().enumerate().any(|(i, &x)| x < qlo[i] || x > qhi[i]) {
                return None;
            }
            let (qc, r) = rc.div_rem(dc);
            if !r.is_zero() {
                return None;
            }
            let t = Self::monomial(e, qc);
            rem = rem.sub(&t.mul(d));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    /// Applies a linear change of exponents `v -> f(v)` into `nvars` variables.
    pub fn map_exponents<F: Fn(&[i64]) -> Vec<i64>>(&self, nvars: usize, f: F) -> Self {
        let mut out = Self::zero(nvars);
        for (v, c) in &self.terms {
            out.add_term(f(v), c.clone());
        }
        out
    }

    /// Substitutes a Laurent polynomial for each variable (monomials only for negative powers).
    pub fn substitute(&self, images: &[CommLaurent]) -> Result<Self> {
        let nv = images.first().map_or(0, |x| x.nvars);
        let mut out = Self::zero(nv);
        for (v, c) in &self.terms {
            let mut t = Self::monomial(vec![0; nv], c.clone());
            for (i, &k) in v.iter().enumerate() {
                if k != 0 {
                    t = t.mul(&images[i].pow(k)?);
                }
            }
            out = out.add(&t);
        }
        Ok(out)
    }
}

fn bounds(p: &CommLaurent) -> Option<(Vec<i64>, Vec<i64>)> {
    let mut it = p.terms.keys();
    let first = it.next()?;
    let (mut lo, mut hi) = (first.clone(), first.clone());
    for v in it {
        for i in 0..v.len() {
            lo[i] = lo[i].min(v[i]);
            hi[i] = hi[i].max(v[i]);
        }
    }
    Some((lo, hi))
}

/// Commutative cluster expansions of all chords in the variables of `t0`'s edges,
/// generated by Ptolemy relations along flips.
#[derive(Clone, Debug)]
pub struct ClassicalChart {
    t0: Triangulation,
    values: BTreeMap<Chord, CommLaurent>,
}

impl ClassicalChart {
    pub fn new(t0: &Triangulation) -> Result<Self> {
        let m = t0.num_edges();
        let mut values: BTreeMap<Chord, CommLaurent> = t0
            .edges()
            .iter()
            .enumerate()
            .map(|(i, c)| (*c, CommLaurent::var(m, i)))
            .collect();
        let total = t0.n() * (t0.n() - 1) / 2;
        let mut frontier = vec![t0.clone()];
        let mut seen = std::collections::BTreeSet::from([t0.clone()]);
        while values.len() < total {
            let mut next = Vec::new();
            for t in &frontier {
                for k in t.diagonals() {
                    let (x, y) = t.quadrilateral(k)?;
                    let (u, new) = t.flip(k)?;
                    if !values.contains_key(&new) {
                        // x_{xy} x_{k} = x_{a x} x_{b y} + x_{a y} x_{b x}.
                        let g = |p: usize, q: usize| values[&Chord::new(p, q).unwrap()].clone();
                        let num = g(k.a, x).mul(&g(k.b, y)).add(&g(k.a, y).mul(&g(k.b, x)));
                        let val = num
                            .div_exact(&values[k])
                            .ok_or_else(|| Error::NotExact(format!("Ptolemy quotient for {new} is not Laurent")))?;
                        values.insert(new, val);
                    }
                    if seen.insert(u.clone()) {
                        next.push(u);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        Ok(ClassicalChart { t0: t0.clone(), values })
    }

    pub fn tri(&self) -> &Triangulation {
        &self.t0
    }

    pub fn value(&self, c: &Chord) -> &CommLaurent {
        &self.values[c]
    }

    /// `prod_c x_c^{w_c}` for signed weights (negative weights only on chords of `t0`).
    pub fn weighted_product(&self, weights: &[(Chord, i64)]) -> Result<CommLaurent> {
        let mut acc = CommLaurent::one(self.t0.num_edges());
        for (c, w) in weights {
            acc = acc.mul(&self.values[c].pow(*w)?);
        }
        Ok(acc)
    }
}

/// Classical limit of a base-chart torus element.
pub fn from_torus(x: &crate::torus::TorusElement) -> CommLaurent {
    CommLaurent::from_terms(x.rank(), x.eval_at_one())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_ptolemy() {
        let t = Triangulation::new(4, &[Chord::new(0, 2).unwrap()]).unwrap();
        let c = ClassicalChart::new(&t).unwrap();
        let x = c.value(&Chord::new(1, 3).unwrap());
        // (x01 x23 + x03 x12) / x02 in edge order 01, 02, 03, 12, 23.
        let expect = CommLaurent::from_terms(
            5,
            BTreeMap::from([(vec![1, -1, 0, 0, 1], BigInt::one()), (vec![0, -1, 1, 1, 0], BigInt::one())]),
        );
        assert_eq!(x, &expect);
    }

    #[test]
    fn division_detects_remainder() {
        let x = CommLaurent::var(2, 0);
        let y = CommLaurent::var(2, 1);
        let p = x.add(&y).mul(&x.sub(&y));
        assert_eq!(p.div_exact(&x.add(&y)).unwrap(), x.sub(&y));
        assert!(p.add(&CommLaurent::one(2)).div_exact(&x.add(&y)).is_none());
    }
}
