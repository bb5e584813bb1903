//! Based quantum tori over an integer skew form.
//!
//! A `TorusElement` is a finite sum of Weyl-normalized monomials `A^v` with
//! `A^u A^v = w^{-Lambda(u,v)} A^{u+v}`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::coeff::OmegaLaurent;
use crate::error::{Error, Result};
use crate::polygon::IntMatrix;

pub type Exponent = Vec<i64>;

/// Skew-symmetric integer form on `Z^m`.
#[derive(Clone, PartialEq, Eq)]
pub struct SkewForm {
    matrix: IntMatrix,
}

impl SkewForm {
    pub fn new(matrix: IntMatrix) -> Result<Arc<Self>> {
        if !matrix.is_skew_symmetric() {
            return Err(Error::InvalidInput("form matrix is not skew-symmetric".into()));
        }
        Ok(Arc::new(SkewForm { matrix }))
    }

    pub fn rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn pair(&self, u: &[i64], v: &[i64]) -> i64 {
        self.matrix.bilinear(u, v)
    }

    pub fn pair_basis(&self, i: usize, j: usize) -> i64 {
        self.matrix.get(i, j)
    }

    /// Block form `diag(L, -L)` on `Z^m + Z^m`.
    pub fn double(&self) -> Arc<Self> {
        let m = self.rank();
        let mut d = IntMatrix::zeros(2 * m, 2 * m);
        for i in 0..m {
            for j in 0..m {
                d.set(i, j, self.matrix.get(i, j));
                d.set(m + i, m + j, -self.matrix.get(i, j));
            }
        }
        Arc::new(SkewForm { matrix: d })
    }

    /// Pullback along `v -> F v` where the columns of `f` are images of basis vectors.
    pub fn pullback(&self, f: &IntMatrix) -> Arc<Self> {
        Arc::new(SkewForm { matrix: f.transpose().mul(&self.matrix).mul(f) })
    }
}

impl fmt::Debug for SkewForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SkewForm({:?})", self.matrix.to_rows())
    }
}

/// `w^{-Lambda(u,v)}`-twisted product term.
fn twist(form: &SkewForm, u: &[i64], v: &[i64]) -> i32 {
    -(form.pair(u, v) as i32)
}

fn add_exp(u: &[i64], v: &[i64]) -> Exponent {
    u.iter().zip(v).map(|(a, b)| a + b).collect()
}

fn sub_exp(u: &[i64], v: &[i64]) -> Exponent {
    u.iter().zip(v).map(|(a, b)| a - b).collect()
}

/// Element of a quantum torus.
#[derive(Clone)]
pub struct TorusElement {
    form: Arc<SkewForm>,
    terms: BTreeMap<Exponent, OmegaLaurent>,
}

impl TorusElement {
    pub fn zero(form: &Arc<SkewForm>) -> Self {
        TorusElement { form: form.clone(), terms: BTreeMap::new() }
    }

    pub fn one(form: &Arc<SkewForm>) -> Self {
        Self::monomial(form, vec![0; form.rank()], OmegaLaurent::one())
    }

    pub fn scalar(form: &Arc<SkewForm>, c: OmegaLaurent) -> Self {
        Self::monomial(form, vec![0; form.rank()], c)
    }

    pub fn monomial(form: &Arc<SkewForm>, v: Exponent, c: OmegaLaurent) -> Self {
        assert_eq!(v.len(), form.rank(), "exponent length does not match torus rank");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(v, c);
        }
        TorusElement { form: form.clone(), terms }
    }

    /// Generator `A^{e_i}`.
    pub fn generator(form: &Arc<SkewForm>, i: usize) -> Self {
        let mut v = vec![0; form.rank()];
        v[i] = 1;
        Self::monomial(form, v, OmegaLaurent::one())
    }

    pub fn from_terms<I>(form: &Arc<SkewForm>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponent, OmegaLaurent)>,
    {
        let mut x = Self::zero(form);
        for (v, c) in terms {
            x.add_term(v, &c);
        }
        x
    }

    pub fn form(&self) -> &Arc<SkewForm> {
        &self.form
    }

    pub fn rank(&self) -> usize {
        self.form.rank()
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, OmegaLaurent> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Exponent, OmegaLaurent> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && {
            let (v, c) = self.terms.iter().next().unwrap();
            c.is_one() && v.iter().all(|&x| x == 0)
        }
    }

    pub fn coeff(&self, v: &[i64]) -> OmegaLaurent {
        self.terms.get(v).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, v: Exponent, c: &OmegaLaurent) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&v) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.terms.remove(&v);
                }
            }
            None => {
                self.terms.insert(v, c.clone());
            }
        }
    }

    pub fn same_form(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.form, &other.form) || self.form == other.form
    }

    fn check_form(&self, other: &Self) -> Result<()> {
        if self.same_form(other) {
            Ok(())
        } else {
            Err(Error::FormMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_form(other)?;
        let mut out = self.clone();
        for (v, c) in &other.terms {
            out.add_term(v.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_form(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let form = &self.form;
        let work = self.terms.len() * other.terms.len();
        if work > 4096 {
            let left: Vec<(&Exponent, &OmegaLaurent)> = self.terms.iter().collect();
            let partial: Vec<BTreeMap<Exponent, OmegaLaurent>> = left
                .par_chunks(16)
                .map(|chunk| {
                    let mut acc = TorusElement::zero(form);
                    for (u, a) in chunk {
                        for (v, b) in &other.terms {
                            let c = (*a * b).shift(twist(form, u, v));
                            acc.add_term(add_exp(u, v), &c);
                        }
                    }
                    acc.terms
                })
                .collect();
            let mut out = TorusElement::zero(form);
            for p in partial {
                for (v, c) in p {
                    out.add_term(v, &c);
                }
            }
            return out;
        }
        let mut out = TorusElement::zero(form);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                let c = (a * b).shift(twist(form, u, v));
                out.add_term(add_exp(u, v), &c);
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        TorusElement { form: self.form.clone(), terms: self.terms.iter().map(|(v, c)| (v.clone(), -c)).collect() }
    }

    pub fn scale(&self, k: &OmegaLaurent) -> Self {
        let mut out = Self::zero(&self.form);
        if k.is_zero() {
            return out;
        }
        for (v, c) in &self.terms {
            out.terms.insert(v.clone(), c * k);
        }
        out
    }

    /// Multiplies every coefficient by `w^e`.
    pub fn shift(&self, e: i32) -> Self {
        TorusElement {
            form: self.form.clone(),
            terms: self.terms.iter().map(|(v, c)| (v.clone(), c.shift(e))).collect(),
        }
    }

    /// Single term `(v, c)` if this is a monomial.
    pub fn as_monomial(&self) -> Option<(&Exponent, &OmegaLaurent)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Inverse of a monomial with unit coefficient `±w^e`.
    pub fn inverse(&self) -> Result<Self> {
        let (v, c) = self
            .as_monomial()
            .ok_or_else(|| Error::NonInvertibleFactor("element is not a monomial".into()))?;
        if !c.is_unit() {
            return Err(Error::NonInvertibleFactor(format!("coefficient {c} is not a unit")));
        }
        let (e, s) = c.as_monomial().unwrap();
        // (c A^v)^{-1} = c^{-1} A^{-v} since Lambda(v,-v) = 0.
        let inv = OmegaLaurent::monomial(-e, s.clone());
        Ok(Self::monomial(&self.form, v.iter().map(|x| -x).collect(), inv))
    }

    /// Integer power; negative powers require an invertible monomial.
    pub fn pow(&self, k: i64) -> Result<Self> {
        if k < 0 {
            return self.inverse()?.pow(-k);
        }
        if let Some((v, c)) = self.as_monomial() {
            // (c A^v)^k = c^k A^{kv}.
            return Ok(Self::monomial(
                &self.form,
                v.iter().map(|x| x * k).collect(),
                c.pow(k as u32),
            ));
        }
        let mut acc = Self::one(&self.form);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        Ok(acc)
    }

    /// Bar-involutes coefficients and fixes each `A^v`: an antiautomorphism.
    pub fn star(&self) -> Self {
        TorusElement {
            form: self.form.clone(),
            terms: self.terms.iter().map(|(v, c)| (v.clone(), c.bar())).collect(),
        }
    }

    /// Lexicographically largest exponent and its coefficient.
    pub fn leading_term(&self) -> Result<(&Exponent, &OmegaLaurent)> {
        self.terms.iter().next_back().ok_or(Error::ZeroElement)
    }

    pub fn lowest_term(&self) -> Result<(&Exponent, &OmegaLaurent)> {
        self.terms.iter().next().ok_or(Error::ZeroElement)
    }

    /// Coordinatewise minimum and maximum of the support.
    pub fn support_box(&self) -> Option<(Exponent, Exponent)> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let mut lo = first.clone();
        let mut hi = first.clone();
        for v in it {
            for i in 0..v.len() {
                lo[i] = lo[i].min(v[i]);
                hi[i] = hi[i].max(v[i]);
            }
        }
        Some((lo, hi))
    }

    /// Solves `den * q = self` (left) or `q * den = self` (right) exactly.
    fn divide(&self, den: &Self, left: bool) -> Result<Self> {
        self.check_form(den)?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let form = self.form.clone();
        if self.is_zero() {
            return Ok(Self::zero(&form));
        }
        let not_exact = || Error::NotExact("torus division leaves a remainder".into());
        if let Some((dv, dc)) = den.as_monomial() {
            let mut out = Self::zero(&form);
            for (v, c) in &self.terms {
                let e = sub_exp(v, dv);
                let t = if left { twist(&form, dv, &e) } else { twist(&form, &e, dv) };
                let q = c.div_exact(&dc.shift(t)).ok_or_else(not_exact)?;
                out.terms.insert(e, q);
            }
            return Ok(out);
        }
        let (nlo, nhi) = self.support_box().unwrap();
        let (dlo, dhi) = den.support_box().unwrap();
        let qlo = sub_exp(&nlo, &dlo);
        let qhi = sub_exp(&nhi, &dhi);
        if qlo.iter().zip(&qhi).any(|(a, b)| a > b) {
            return Err(not_exact());
        }
        let (dv, dc) = den.leading_term().map(|(v, c)| (v.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = Self::zero(&form);
        loop {
            let (rv, rc) = match rem.leading_term() {
                Ok((v, c)) => (v.clone(), c.clone()),
                Err(_) => break,
            };
            let e = sub_exp(&rv, &dv);
            if e.iter().zip(qlo.iter().zip(&qhi)).any(|(x, (lo, hi))| x < lo || x > hi) {
                return Err(not_exact());
            }
            let t = if left { twist(&form, &dv, &e) } else { twist(&form, &e, &dv) };
            let qc = rc.div_exact(&dc.shift(t)).ok_or_else(not_exact)?;
            let term = Self::monomial(&form, e.clone(), qc.clone());
            let prod = if left { den.mul_unchecked(&term) } else { term.mul_unchecked(den) };
            rem = rem.try_sub(&prod)?;
            quot.add_term(e, &qc);
        }
        Ok(quot)
    }

    /// `den^{-1} * self`, failing unless the quotient is a Laurent polynomial.
    pub fn left_divide(&self, den: &Self) -> Result<Self> {
        self.divide(den, true)
    }

    /// `self * den^{-1}`, failing unless the quotient is a Laurent polynomial.
    pub fn right_divide(&self, den: &Self) -> Result<Self> {
        self.divide(den, false)
    }

    /// Commutative specialization at `w = 1`.
    pub fn eval_at_one(&self) -> BTreeMap<Exponent, BigInt> {
        let mut out = BTreeMap::new();
        for (v, c) in &self.terms {
            let x = c.eval_at_one();
            if !x.is_zero() {
                out.insert(v.clone(), x);
            }
        }
        out
    }

    /// Applies `A^v -> c_v A^{F v}` for a lattice map whose columns are images of basis
    /// vectors, into a torus with form `target`. Coefficients are kept, so this is
    /// an algebra map exactly when `target` pulls back to this form.
    pub fn map_lattice(&self, f: &IntMatrix, target: &Arc<SkewForm>) -> Self {
        let mut out = Self::zero(target);
        for (v, c) in &self.terms {
            let mut w = vec![0i64; f.rows()];
            for (j, &x) in v.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (i, wi) in w.iter_mut().enumerate() {
                    *wi += f.get(i, j) * x;
                }
            }
            out.add_term(w, c);
        }
        out
    }

    /// Moves the element to another torus of the same rank without changing terms.
    pub fn with_form(&self, form: &Arc<SkewForm>) -> Self {
        assert_eq!(form.rank(), self.rank());
        TorusElement { form: form.clone(), terms: self.terms.clone() }
    }

    /// All coefficients lie in `Z_{>=0}[q, q^-1]`.
    pub fn has_nonneg_q_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_nonneg_q_laurent())
    }

    pub fn has_q_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_q_laurent())
    }

    /// Text form `(c)*X[0-2]^2*B[0-3]^-1 + ...` over the given coordinate labels.
    pub fn to_text(&self, labels: &[String], q_mode: bool) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (v, c) in &self.terms {
            let mono: Vec<String> = v
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(i, &x)| if x == 1 { labels[i].clone() } else { format!("{}^{}", labels[i], x) })
                .collect();
            let cs = if q_mode { c.to_q_string() } else { c.to_string() };
            let part = if mono.is_empty() {
                if c.terms().len() > 1 {
                    format!("({cs})")
                } else {
                    cs
                }
            } else if c.is_one() {
                mono.join("*")
            } else if c.as_monomial().map_or(false, |(e, k)| e == 0 && *k == -BigInt::one()) {
                format!("-{}", mono.join("*"))
            } else {
                format!("({cs})*{}", mono.join("*"))
            };
            parts.push(part);
        }
        parts.join(" + ")
    }
}

impl PartialEq for TorusElement {
    fn eq(&self, other: &Self) -> bool {
        self.same_form(other) && self.terms == other.terms
    }
}

impl Eq for TorusElement {}

impl fmt::Debug for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = (0..self.rank()).map(|i| format!("A{i}")).collect();
        write!(f, "TorusElement({})", self.to_text(&labels, false))
    }
}

impl std::ops::Add for &TorusElement {
    type Output = TorusElement;
    fn add(self, rhs: &TorusElement) -> TorusElement {
        self.try_add(rhs).expect("torus form mismatch")
    }
}

impl std::ops::Sub for &TorusElement {
    type Output = TorusElement;
    fn sub(self, rhs: &TorusElement) -> TorusElement {
        self.try_sub(rhs).expect("torus form mismatch")
    }
}

impl std::ops::Mul for &TorusElement {
    type Output = TorusElement;
    fn mul(self, rhs: &TorusElement) -> TorusElement {
        self.try_mul(rhs).expect("torus form mismatch")
    }
}

/// `M(v) = w^{sum_{i<j} Lambda(e_i,e_j) v_i v_j} prod_i M(e_i)^{v_i}` for a frame
/// given by its values `M(e_i)` and form `lambda`.
pub fn ordered_monomial(values: &[TorusElement], lambda: &IntMatrix, v: &[i64]) -> Result<TorusElement> {
    assert_eq!(values.len(), v.len(), "frame size mismatch");
    let form = values
        .first()
        .map(|x| x.form().clone())
        .ok_or_else(|| Error::InvalidInput("empty frame".into()))?;
    let mut phase: i64 = 0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            phase += lambda.get(i, j) * v[i] * v[j];
        }
    }
    let mut acc = TorusElement::scalar(&form, OmegaLaurent::omega_pow(phase as i32));
    for (i, &k) in v.iter().enumerate() {
        if k == 0 {
            continue;
        }
        let p = values[i].pow(k).map_err(|_| {
            Error::NonInvertibleFactor(format!("negative power of non-monomial frame value at index {i}"))
        })?;
        acc = acc.try_mul(&p)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form2() -> Arc<SkewForm> {
        SkewForm::new(IntMatrix::from_rows(&[vec![0, 2], vec![-2, 0]])).unwrap()
    }

    #[test]
    fn generators_q_commute() {
        let f = form2();
        let a = TorusElement::generator(&f, 0);
        let b = TorusElement::generator(&f, 1);
        // A1 A2 = w^{-2} A^{(1,1)}, A2 A1 = w^{2} A^{(1,1)}.
        assert_eq!(&a * &b, TorusElement::monomial(&f, vec![1, 1], OmegaLaurent::omega_pow(-2)));
        assert_eq!(&(&a * &b), &(&b * &a).shift(-4));
        assert!((&a * &a.inverse().unwrap()).is_one());
    }

    #[test]
    fn division_recovers_factor() {
        let f = form2();
        let a = TorusElement::generator(&f, 0);
        let b = TorusElement::generator(&f, 1);
        let p = &TorusElement::one(&f) + &(&a * &b);
        let q = &(&a + &b.shift(3)) + &TorusElement::one(&f);
        let prod = &p * &q;
        assert_eq!(prod.left_divide(&p).unwrap(), q);
        assert_eq!(prod.right_divide(&q).unwrap(), p);
        assert!(q.left_divide(&p).is_err());
    }

    #[test]
    fn ordered_monomial_zero_and_unit() {
        let f = form2();
        let vals = vec![TorusElement::generator(&f, 0), TorusElement::generator(&f, 1)];
        let lam = f.matrix().clone();
        assert!(ordered_monomial(&vals, &lam, &[0, 0]).unwrap().is_one());
        assert_eq!(ordered_monomial(&vals, &lam, &[1, 1]).unwrap(), TorusElement::monomial(&f, vec![1, 1], OmegaLaurent::one()));
        assert_eq!(ordered_monomial(&vals, &lam, &[-3, 2]).unwrap(), TorusElement::monomial(&f, vec![-3, 2], OmegaLaurent::one()));
    }
}
