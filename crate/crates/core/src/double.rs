//! The tori attached to one triangulation: the base chart `A^v` on `Z^I`, the
//! X-chart on `Z^J`, the double `Z^I + Z^I` with form `diag(L, -L)` and the
//! D-chart on `Z^J + Z^J` spanned by `X_j`, `B_j`.

use std::sync::Arc;

use crate::coeff::OmegaLaurent;
use crate::error::{Error, Result};
use crate::polygon::{ExchangeData, IntMatrix, Triangulation};
use crate::torus::{Exponent, SkewForm, TorusElement};

/// Forms and coordinate changes of one triangulation.
#[derive(Clone, Debug)]
pub struct ChartAlgebras {
    pub tri: Triangulation,
    pub data: ExchangeData,
    /// `Lambda_T` on `Z^I`.
    pub base: Arc<SkewForm>,
    /// `-4 epsilon_J` on `Z^J`.
    pub x_form: Arc<SkewForm>,
    /// `diag(Lambda_T, -Lambda_T)` on `Z^I + Z^I`.
    pub double: Arc<SkewForm>,
    /// Pullback of the double form to `(a, g)` coordinates.
    pub d_form: Arc<SkewForm>,
    /// `x_j = sum_s epsilon_js e_s`, one per internal edge.
    pub x_vectors: Vec<Exponent>,
    /// Columns `(x_j, 0)` then `(-e_j, e_j)`.
    pub d_embedding: IntMatrix,
}

impl ChartAlgebras {
    pub fn new(tri: &Triangulation) -> Result<Self> {
        let data = tri.exchange_data();
        let m = tri.num_edges();
        let jn = data.mutable.len();
        let base = SkewForm::new(data.lambda.clone())?;
        let x_vectors: Vec<Exponent> = data.mutable.iter().map(|&j| data.epsilon.row(j).to_vec()).collect();
        let mut xf = IntMatrix::zeros(jn, jn);
        for (a, &i) in data.mutable.iter().enumerate() {
            for (b, &j) in data.mutable.iter().enumerate() {
                xf.set(a, b, -4 * data.epsilon.get(i, j));
            }
        }
        let x_form = SkewForm::new(xf)?;
        let double = base.double();
        let mut emb = IntMatrix::zeros(2 * m, 2 * jn);
        for (a, x) in x_vectors.iter().enumerate() {
            for (s, &v) in x.iter().enumerate() {
                emb.set(s, a, v);
            }
        }
        for (b, &j) in data.mutable.iter().enumerate() {
            emb.set(j, jn + b, -1);
            emb.set(m + j, jn + b, 1);
        }
        let d_form = double.pullback(&emb);
        let out = ChartAlgebras { tri: tri.clone(), data, base, x_form, double, d_form, x_vectors, d_embedding: emb };
        out.check_boundary_relations_central()?;
        Ok(out)
    }

    pub fn num_edges(&self) -> usize {
        self.tri.num_edges()
    }

    pub fn num_internal(&self) -> usize {
        self.data.mutable.len()
    }

    /// Position of internal edge `idx` (an index into `I`) within `J`.
    pub fn j_position(&self, idx: usize) -> Option<usize> {
        self.data.mutable.iter().position(|&j| j == idx)
    }

    fn boundary_relation(&self, i: usize) -> Exponent {
        let m = self.num_edges();
        let mut r = vec![0; 2 * m];
        r[i] = -1;
        r[m + i] = 1;
        r
    }

    fn check_boundary_relations_central(&self) -> Result<()> {
        let gens: Vec<Exponent> = (0..self.d_embedding.cols())
            .map(|c| (0..self.d_embedding.rows()).map(|r| self.d_embedding.get(r, c)).collect())
            .collect();
        for i in self.tri.boundary_indices() {
            let r = self.boundary_relation(i);
            for g in gens.iter().chain(std::iter::once(&r)) {
                if self.double.pair(&r, g) != 0 {
                    return Err(Error::OutsideDChart(format!(
                        "boundary relation at edge {} is not central",
                        self.tri.edges()[i]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Coordinates `a` with `v = sum_j a_j x_j`, using `Lambda_T(x_k, e_j) = 4 delta_kj`.
    pub fn x_coordinates(&self, v: &[i64]) -> Result<Exponent> {
        let mut a = Vec::with_capacity(self.num_internal());
        for &j in &self.data.mutable {
            let p: i64 = (0..v.len()).map(|s| v[s] * self.data.lambda.get(s, j)).sum();
            if p % 4 != 0 {
                return Err(Error::XCoordinateChange(format!("exponent {v:?} pairs to {p} with edge {}", self.tri.edges()[j])));
            }
            a.push(p / 4);
        }
        if self.x_combination(&a) != v {
            return Err(Error::XCoordinateChange(format!("exponent {v:?} is outside the span of the X-lattice")));
        }
        Ok(a)
    }

    /// `sum_j a_j x_j`.
    pub fn x_combination(&self, a: &[i64]) -> Exponent {
        let mut v = vec![0; self.num_edges()];
        for (aj, x) in a.iter().zip(&self.x_vectors) {
            if *aj == 0 {
                continue;
            }
            for (s, xs) in x.iter().enumerate() {
                v[s] += aj * xs;
            }
        }
        v
    }

    /// Rewrites a base-chart element whose support lies in the X-lattice as an X-chart element.
    pub fn to_x_chart(&self, x: &TorusElement) -> Result<TorusElement> {
        let mut out = TorusElement::zero(&self.x_form);
        for (v, c) in x.terms() {
            out.add_term(self.x_coordinates(v)?, c);
        }
        Ok(out)
    }

    /// `Y_a -> A^{sum a_j x_j}`.
    pub fn from_x_chart(&self, y: &TorusElement) -> TorusElement {
        let mut out = TorusElement::zero(&self.base);
        for (a, c) in y.terms() {
            out.add_term(self.x_combination(a), c);
        }
        out
    }

    /// `X_j` in the X-chart, `j` a position in `J`.
    pub fn x_gen(&self, j: usize) -> TorusElement {
        TorusElement::generator(&self.x_form, j)
    }

    /// `X_j` in the D-chart.
    pub fn d_x(&self, j: usize) -> TorusElement {
        TorusElement::generator(&self.d_form, j)
    }

    /// `B_j` in the D-chart.
    pub fn d_b(&self, j: usize) -> TorusElement {
        TorusElement::generator(&self.d_form, self.num_internal() + j)
    }

    /// `X_j = M_T(x_j) (x) 1` in the double torus.
    pub fn double_x(&self, j: usize) -> TorusElement {
        let mut v = self.x_vectors[j].clone();
        v.extend(std::iter::repeat(0).take(self.num_edges()));
        TorusElement::monomial(&self.double, v, OmegaLaurent::one())
    }

    /// `B_j = M_T(-e_j) (x) M_{T°}(e_j)` in the double torus.
    pub fn double_b(&self, j: usize) -> TorusElement {
        let r = self.boundary_relation(self.data.mutable[j]);
        TorusElement::monomial(&self.double, r, OmegaLaurent::one())
    }

    /// `x (x) y` for base-chart elements `x` of `S` and `y` of `S°` (the latter
    /// carrying the opposite form).
    pub fn tensor(&self, x: &TorusElement, y: &TorusElement) -> TorusElement {
        let mut out = TorusElement::zero(&self.double);
        for (u, a) in x.terms() {
            for (v, b) in y.terms() {
                let mut w = u.clone();
                w.extend(v.iter().copied());
                out.add_term(w, &(a * b));
            }
        }
        out
    }

    /// The torus of `S°` on `Z^I` with form `-Lambda_T`.
    pub fn opposite_base(&self) -> Arc<SkewForm> {
        let m = self.num_edges();
        let mut f = IntMatrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                f.set(i, j, -self.data.lambda.get(i, j));
            }
        }
        SkewForm::new(f).expect("negated skew form is skew")
    }

    /// Expansion of the same curve class on `S°`: coefficients barred, form negated.
    pub fn to_opposite(&self, x: &TorusElement) -> TorusElement {
        let form = self.opposite_base();
        TorusElement::from_terms(&form, x.terms().iter().map(|(v, c)| (v.clone(), c.bar())))
    }

    /// Rewrites a double-torus element in `(a, g)` coordinates after setting the
    /// boundary relations `M_T(-e_i) (x) M_{T°}(e_i)` to 1.
    pub fn reduce_to_d_chart(&self, x: &TorusElement) -> Result<TorusElement> {
        let m = self.num_edges();
        let mut out = TorusElement::zero(&self.d_form);
        for (w, c) in x.terms() {
            let (u, uo) = w.split_at(m);
            let s: Exponent = u.iter().zip(uo).map(|(p, q)| p + q).collect();
            let a = self
                .x_coordinates(&s)
                .map_err(|_| Error::OutsideDChart(format!("exponent {w:?} is not in the span of X_j, B_j and the boundary relations")))?;
            let mut key = a;
            key.extend(self.data.mutable.iter().map(|&j| uo[j]));
            out.add_term(key, c);
        }
        Ok(out)
    }

    /// Canonical lift of a D-chart element to the double torus.
    pub fn lift_from_d_chart(&self, y: &TorusElement) -> TorusElement {
        y.map_lattice(&self.d_embedding, &self.double)
    }

    /// `Y_{(a,g)} -> Y_a`.
    pub fn specialize_b_to_one(&self, y: &TorusElement) -> TorusElement {
        let jn = self.num_internal();
        let mut out = TorusElement::zero(&self.x_form);
        for (v, c) in y.terms() {
            out.add_term(v[..jn].to_vec(), c);
        }
        out
    }

    /// Embeds an X-chart element into the D-chart with zero B-exponents.
    pub fn x_into_d(&self, y: &TorusElement) -> TorusElement {
        let jn = self.num_internal();
        let mut out = TorusElement::zero(&self.d_form);
        for (a, c) in y.terms() {
            let mut v = a.clone();
            v.extend(std::iter::repeat(0).take(jn));
            out.add_term(v, c);
        }
        out
    }

    /// `epsilon_ij` for positions in `J`.
    pub fn eps_j(&self, i: usize, j: usize) -> i64 {
        self.data.epsilon.get(self.data.mutable[i], self.data.mutable[j])
    }

    /// `X_hat_k = X_k prod_j B_j^{epsilon_kj}` in the D-chart.
    pub fn d_x_hat(&self, k: usize) -> TorusElement {
        let jn = self.num_internal();
        let mut v = vec![0; 2 * jn];
        v[k] = 1;
        for j in 0..jn {
            v[jn + j] = self.eps_j(k, j);
        }
        TorusElement::monomial(&self.d_form, v, OmegaLaurent::one())
    }

    /// `prod B_j^{[s * epsilon_kj]_+}` for `s = +1` or `-1`.
    pub fn d_bb(&self, k: usize, sign: i64) -> TorusElement {
        let jn = self.num_internal();
        let mut v = vec![0; 2 * jn];
        for j in 0..jn {
            v[jn + j] = (sign * self.eps_j(k, j)).max(0);
        }
        TorusElement::monomial(&self.d_form, v, OmegaLaurent::one())
    }

    pub fn x_labels(&self) -> Vec<String> {
        self.data.mutable.iter().map(|&j| format!("X[{}]", self.tri.edges()[j])).collect()
    }

    pub fn d_labels(&self) -> Vec<String> {
        let mut l = self.x_labels();
        l.extend(self.data.mutable.iter().map(|&j| format!("B[{}]", self.tri.edges()[j])));
        l
    }

    pub fn base_labels(&self) -> Vec<String> {
        self.tri.edges().iter().map(|c| format!("A[{c}]")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::Chord;

    #[test]
    fn d_chart_pairings() {
        let t = Triangulation::new(5, &[Chord::new(0, 2).unwrap(), Chord::new(0, 3).unwrap()]).unwrap();
        let c = ChartAlgebras::new(&t).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let dx = c.reduce_to_d_chart(&c.double_x(i)).unwrap();
                assert_eq!(dx, c.d_x(i));
                let db = c.reduce_to_d_chart(&c.double_b(j)).unwrap();
                assert_eq!(db, c.d_b(j));
                assert_eq!(c.d_form.pair_basis(i, j), -4 * c.eps_j(i, j));
                assert_eq!(c.d_form.pair_basis(i, 2 + j), if i == j { -4 } else { 0 });
                assert_eq!(c.d_form.pair_basis(2 + i, 2 + j), 0);
            }
        }
    }

    #[test]
    fn boundary_relation_reduces_to_one() {
        let t = Triangulation::fan(5).unwrap();
        let c = ChartAlgebras::new(&t).unwrap();
        let r = TorusElement::monomial(&c.double, c.boundary_relation(0), OmegaLaurent::one());
        assert!(c.reduce_to_d_chart(&r).unwrap().is_one());
    }

    #[test]
    fn opposite_x_is_x_times_b_hat() {
        let t = Triangulation::fan(6).unwrap();
        let c = ChartAlgebras::new(&t).unwrap();
        for k in 0..c.num_internal() {
            let y = TorusElement::monomial(&c.opposite_base(), c.x_vectors[k].clone(), OmegaLaurent::one());
            let one = TorusElement::one(&c.base);
            let d = c.reduce_to_d_chart(&c.tensor(&one, &y)).unwrap();
            assert_eq!(d, c.d_x_hat(k));
        }
    }
}
