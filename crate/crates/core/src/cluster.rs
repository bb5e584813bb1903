//! Quantum seeds of the polygon, toric-frame mutation, cluster-variable
//! expansions, quantum F-polynomials and g-vectors.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use crate::coeff::{t_binomial, OmegaLaurent};
use crate::double::ChartAlgebras;
use crate::error::{Error, Result};
use crate::polygon::{flip_path, mutate_rect, Chord, IntMatrix, Triangulation};
use crate::torus::{ordered_monomial, Exponent, TorusElement};

/// A toric frame (values `M(e_i)` in a fixed base chart) together with `B`.
#[derive(Clone, Debug)]
pub struct QuantumSeed {
    pub tri: Triangulation,
    /// `M(e_i)` for each edge `i` of `tri`, as elements of the base chart.
    pub values: Vec<TorusElement>,
    pub lambda: IntMatrix,
    /// `I x J` exchange matrix.
    pub b: IntMatrix,
}

/// `E_eps` for mutation at row `k` / column `kc` of `b`.
pub fn mutation_matrix(b: &IntMatrix, k: usize, kc: usize, eps: i64) -> IntMatrix {
    let m = b.rows();
    let mut e = IntMatrix::identity(m);
    for i in 0..m {
        let v = if i == k { -1 } else { (-eps * b.get(i, kc)).max(0) };
        e.set(i, k, v);
    }
    e
}

/// `Lambda' = E_eps^t Lambda E_eps`.
pub fn mutate_lambda(lambda: &IntMatrix, b: &IntMatrix, k: usize, kc: usize, eps: i64) -> IntMatrix {
    let e = mutation_matrix(b, k, kc, eps);
    e.transpose().mul(lambda).mul(&e)
}

impl QuantumSeed {
    /// Identity frame `M(e_i) = A^{e_i}` of a triangulation in its own chart.
    pub fn from_triangulation(alg: &ChartAlgebras) -> Self {
        let values = (0..alg.num_edges()).map(|i| TorusElement::generator(&alg.base, i)).collect();
        QuantumSeed { tri: alg.tri.clone(), values, lambda: alg.data.lambda.clone(), b: alg.data.b.clone() }
    }

    pub fn mutable(&self) -> Vec<usize> {
        self.tri.mutable_indices()
    }

    fn column_of(&self, k: usize) -> Result<usize> {
        self.mutable()
            .iter()
            .position(|&j| j == k)
            .ok_or_else(|| Error::InvalidInput(format!("edge {} is not mutable", self.tri.edges()[k])))
    }

    /// `M(v)` for `v` with nonnegative entries (or monomial frame values).
    pub fn frame_monomial(&self, v: &[i64]) -> Result<TorusElement> {
        ordered_monomial(&self.values, &self.lambda, v)
    }

    /// `M(v)` where only coordinate `k` may be negative, via exact left division.
    pub fn frame_monomial_with_inverse(&self, v: &[i64], k: usize) -> Result<TorusElement> {
        if v[k] >= 0 {
            return self.frame_monomial(v);
        }
        let mut rest = v.to_vec();
        rest[k] = 0;
        let mut a = vec![0; v.len()];
        a[k] = v[k];
        // M(a + r) = w^{Lambda(a, r)} M(e_k)^{v_k} M(r).
        let phase = self.lambda.bilinear(&a, &rest);
        let mr = self.frame_monomial(&rest)?.shift(phase as i32);
        let den = self.values[k].pow(-v[k])?;
        mr.left_divide(&den)
    }

    /// Mutation at edge position `k`; the result is indexed by the flipped triangulation.
    pub fn mutate(&self, k: usize) -> Result<QuantumSeed> {
        let kc = self.column_of(k)?;
        let m = self.values.len();
        let mut up = vec![0; m];
        let mut down = vec![0; m];
        for i in 0..m {
            let x = self.b.get(i, kc);
            up[i] = x.max(0);
            down[i] = (-x).max(0);
        }
        let mut neg_k = vec![0; m];
        neg_k[k] = -1;
        let plus = self.frame_monomial(&up)?.shift(self.lambda.bilinear(&neg_k, &up) as i32);
        let minus = self.frame_monomial(&down)?.shift(self.lambda.bilinear(&neg_k, &down) as i32);
        let new_k = plus.try_add(&minus)?.left_divide(&self.values[k])?;

        let lambda_m = mutate_lambda(&self.lambda, &self.b, k, kc, 1);
        let b_m = mutate_rect(&self.b, k, kc);
        let (t2, perm) = self.tri.flip_at(k)?;
        let old_mut = self.mutable();
        let new_mut = t2.mutable_indices();
        let mut values = vec![TorusElement::zero(self.values[0].form()); m];
        let mut lambda = IntMatrix::zeros(m, m);
        let mut b = IntMatrix::zeros(m, new_mut.len());
        for i in 0..m {
            values[perm[i]] = if i == k { new_k.clone() } else { self.values[i].clone() };
            for j in 0..m {
                lambda.set(perm[i], perm[j], lambda_m.get(i, j));
            }
            for (jc, &j) in old_mut.iter().enumerate() {
                let nc = new_mut.iter().position(|&x| x == perm[j]).expect("internal edges map to internal edges");
                b.set(perm[i], nc, b_m.get(i, jc));
            }
        }
        Ok(QuantumSeed { tri: t2, values, lambda, b })
    }

    /// `M'(v) = sum_p binom(v_k, p)_{w^-4} M(E_eps v + eps p b^k)` for `v` with
    /// `v_k >= 0`, in the indexing of this (unmutated) seed.
    pub fn frame_monomial_binomial_formula(&self, k: usize, v: &[i64], eps: i64) -> Result<TorusElement> {
        if v[k] < 0 {
            return Err(Error::InvalidInput("binomial formula requires v_k >= 0".into()));
        }
        let kc = self.column_of(k)?;
        let m = v.len();
        let e = mutation_matrix(&self.b, k, kc, eps);
        let ev: Vec<i64> = (0..m).map(|i| (0..m).map(|j| e.get(i, j) * v[j]).sum()).collect();
        let mut acc = TorusElement::zero(self.values[0].form());
        for p in 0..=v[k] {
            let coeff = t_binomial(v[k], p)?.substitute_power(-4);
            let w: Exponent = (0..m).map(|i| ev[i] + eps * p * self.b.get(i, kc)).collect();
            acc = acc.try_add(&self.frame_monomial_with_inverse(&w, k)?.scale(&coeff))?;
        }
        Ok(acc)
    }
}

/// Extended g-vector data of a cluster variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FPolyData {
    /// Polynomial in the `Y_j = X_j`, as an X-chart element.
    pub f: TorusElement,
    /// g-vector in `Z^I`.
    pub g: Exponent,
    pub lambda_shift: i32,
}

impl FPolyData {
    pub fn constant_term_is_one(&self) -> bool {
        self.f.coeff(&vec![0; self.f.rank()]).is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.f.terms().keys().all(|a| a.iter().all(|&x| x >= 0))
    }

    pub fn coefficients_positive(&self) -> bool {
        self.f.has_nonneg_q_coefficients()
    }
}

/// Cluster expansions in the chart of a fixed triangulation, with memoized seeds.
#[derive(Debug)]
pub struct ClusterChart {
    pub alg: ChartAlgebras,
    seeds: Mutex<BTreeMap<Triangulation, Arc<QuantumSeed>>>,
}

impl ClusterChart {
    pub fn new(t0: &Triangulation) -> Result<Self> {
        let alg = ChartAlgebras::new(t0)?;
        let s0 = Arc::new(QuantumSeed::from_triangulation(&alg));
        let seeds = Mutex::new(BTreeMap::from([(t0.clone(), s0)]));
        Ok(ClusterChart { alg, seeds })
    }

    pub fn tri(&self) -> &Triangulation {
        &self.alg.tri
    }

    pub fn initial_seed(&self) -> Arc<QuantumSeed> {
        self.seeds.lock().unwrap()[self.tri()].clone()
    }

    fn cached(&self, t: &Triangulation) -> Option<Arc<QuantumSeed>> {
        self.seeds.lock().unwrap().get(t).cloned()
    }

    /// Seed of `t` expressed in this chart (memoized along a shortest flip path).
    pub fn seed(&self, t: &Triangulation) -> Result<Arc<QuantumSeed>> {
        if let Some(s) = self.cached(t) {
            return Ok(s);
        }
        let path = flip_path(self.tri(), t)?;
        let mut cur = self.initial_seed();
        for k in path {
            let (next_t, _) = cur.tri.flip(&k)?;
            cur = match self.cached(&next_t) {
                Some(s) => s,
                None => {
                    let s = Arc::new(cur.mutate(cur.tri.index_of(&k).unwrap())?);
                    self.seeds.lock().unwrap().insert(next_t, s.clone());
                    s
                }
            };
        }
        Ok(cur)
    }

    /// Seed reached by flipping the given diagonals in order, without caching.
    pub fn seed_along(&self, path: &[Chord]) -> Result<QuantumSeed> {
        let mut cur = (*self.initial_seed()).clone();
        for k in path {
            let idx = cur.tri.index_of(k).ok_or_else(|| Error::InvalidInput(format!("{k} not in current triangulation")))?;
            cur = cur.mutate(idx)?;
        }
        Ok(cur)
    }

    /// Laurent expansion of the chord class `[c]` in this chart.
    pub fn cluster_variable(&self, c: &Chord) -> Result<TorusElement> {
        c.validate(self.tri().n())?;
        if let Some(i) = self.tri().index_of(c) {
            return Ok(TorusElement::generator(&self.alg.base, i));
        }
        let t = Triangulation::smallest_completion(self.tri().n(), &[*c])?;
        let s = self.seed(&t)?;
        Ok(s.values[s.tri.index_of(c).unwrap()].clone())
    }

    /// `[K] = w^{sum_{i<j} lambda(c_i,c_j) w_i w_j} prod [c_i]^{w_i}` for a simple multicurve
    /// given as sorted `(chord, multiplicity)` pairs.
    pub fn multicurve_value(&self, curves: &[(Chord, u32)]) -> Result<TorusElement> {
        let n = self.tri().n();
        let mut phase: i64 = 0;
        for i in 0..curves.len() {
            for j in i + 1..curves.len() {
                phase += crate::polygon::lambda_pair(n, &curves[i].0, &curves[j].0) * curves[i].1 as i64 * curves[j].1 as i64;
            }
        }
        let mut acc = TorusElement::scalar(&self.alg.base, OmegaLaurent::omega_pow(phase as i32));
        for (c, k) in curves {
            acc = acc.try_mul(&self.cluster_variable(c)?.pow(*k as i64)?)?;
        }
        Ok(acc)
    }

    /// g-vector, F-polynomial and shift of `[c]` in this chart.
    pub fn f_polynomial(&self, c: &Chord) -> Result<FPolyData> {
        let x = self.cluster_variable(c)?;
        f_polynomial_of(&self.alg, &x)
    }
}

/// Splits `x = w^lambda F M(g)` with `F` a polynomial in the `X_j`.
pub fn f_polynomial_of(alg: &ChartAlgebras, x: &TorusElement) -> Result<FPolyData> {
    let pairings = |v: &[i64]| -> Vec<i64> {
        alg.data.mutable.iter().map(|&j| (0..v.len()).map(|s| v[s] * alg.data.lambda.get(s, j)).sum()).collect()
    };
    let mut best: Option<(Exponent, Vec<i64>)> = None;
    for v in x.terms().keys() {
        let p = pairings(v);
        let better = match &best {
            None => true,
            Some((_, bp)) => p.iter().zip(bp).all(|(a, b)| a <= b),
        };
        if better {
            best = Some((v.clone(), p));
        }
    }
    let (g, gp) = best.ok_or(Error::ZeroElement)?;
    let mut f = TorusElement::zero(&alg.x_form);
    for (v, c) in x.terms() {
        let p = pairings(v);
        if p.iter().zip(&gp).any(|(a, b)| a < b) {
            return Err(Error::GVectorExtraction(format!("no componentwise minimal support point (at {v:?})")));
        }
        let d: Exponent = v.iter().zip(&g).map(|(a, b)| a - b).collect();
        let a = alg.x_coordinates(&d).map_err(|e| Error::GVectorExtraction(e.to_string()))?;
        if a.iter().any(|&t| t < 0) {
            return Err(Error::GVectorExtraction(format!("support point {v:?} is not above the g-vector")));
        }
        // c A^v A^{-g} = c w^{Lambda(v,g)} A^{v-g}.
        f.add_term(a, &c.shift(alg.base.pair(v, &g) as i32));
    }
    let c0 = f.coeff(&vec![0; alg.num_internal()]);
    let lambda_shift = match c0.as_monomial() {
        Some((e, k)) if k == &num_bigint::BigInt::from(1) => e,
        _ => return Err(Error::GVectorExtraction(format!("constant term {c0} is not a power of w"))),
    };
    let f = f.shift(-lambda_shift);
    Ok(FPolyData { f, g, lambda_shift })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(a: usize, b: usize) -> Chord {
        Chord::new(a, b).unwrap()
    }

    #[test]
    fn square_exchange_has_two_terms() {
        let t = Triangulation::new(4, &[ch(0, 2)]).unwrap();
        let chart = ClusterChart::new(&t).unwrap();
        let x = chart.cluster_variable(&ch(1, 3)).unwrap();
        assert_eq!(x.len(), 2);
        let f = chart.f_polynomial(&ch(1, 3)).unwrap();
        assert_eq!(f.lambda_shift, 0);
        // With Weyl-normalized Y-monomials and F on the left of M(g), F = 1 + q^-1 Y.
        assert_eq!(f.f, &chart.alg.x_gen(0).shift(-4) + &TorusElement::one(&chart.alg.x_form));
        assert!(f.coefficients_positive());
    }

    #[test]
    fn mutated_seed_matches_flipped_triangulation() {
        let t = Triangulation::fan(6).unwrap();
        let chart = ClusterChart::new(&t).unwrap();
        let s = chart.initial_seed();
        for k in t.mutable_indices() {
            let s2 = s.mutate(k).unwrap();
            let alg2 = ChartAlgebras::new(&s2.tri).unwrap();
            assert_eq!(s2.lambda, alg2.data.lambda);
            assert_eq!(s2.b, alg2.data.b);
            let back = s2.mutate(s2.tri.index_of(&t.edges()[k]).map_or_else(
                || s2.tri.index_of(&t.flip(&t.edges()[k]).unwrap().1).unwrap(),
                |x| x,
            ));
            let back = back.unwrap();
            assert_eq!(back.tri, t);
            assert_eq!(back.values, s.values);
        }
    }
}
