//! The quantum dilogarithm as a truncated power series, the conjugation
//! automorphisms it induces on a double torus, the lattice part of mutation
//! and the closed mutation formulas on generators.
//!
//! A [`TruncatedSeries`] stores the coefficient of `x^d` as a numerator over
//! `(q^2; q^2)_d = prod_{i=1}^d (1 - q^{2i})`. Products, inverses and
//! rescalings of the variable preserve this shape, so all arithmetic stays
//! inside `Z[w, w^-1]`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::coeff::{OmegaLaurent, OmegaRational};
use crate::double::ChartAlgebras;
use crate::error::{Error, Result};
use crate::polygon::{mutate_matrix, IntMatrix};
use crate::torus::{Exponent, SkewForm, TorusElement};
use crate::verify::Check;

/// Default truncation order for the conjugation checks.
pub const DEFAULT_ORDER: usize = 8;
/// Truncation order for the functional equations.
pub const FUNCTIONAL_EQUATION_ORDER: usize = 12;
/// Extra order used to confirm that a vanishing tail is not an accident of truncation.
pub const TAIL_MARGIN: usize = 4;

/// `(q^2; q^2)_d`.
pub fn pochhammer(d: usize) -> OmegaLaurent {
    let mut p = OmegaLaurent::one();
    for i in 1..=d {
        p = &p * &(&OmegaLaurent::one() - &OmegaLaurent::q_pow(2 * i as i32));
    }
    p
}

/// Gaussian binomials in `q^2` for `0 <= a <= d <= n`, by the `q`-Pascal rule.
fn gaussian_table(n: usize) -> Vec<Vec<OmegaLaurent>> {
    let mut t: Vec<Vec<OmegaLaurent>> = Vec::with_capacity(n + 1);
    for d in 0..=n {
        let mut row = Vec::with_capacity(d + 1);
        for a in 0..=d {
            if a == 0 || a == d {
                row.push(OmegaLaurent::one());
            } else {
                let p = &t[d - 1][a - 1] + &(&OmegaLaurent::q_pow(2 * a as i32) * &t[d - 1][a]);
                row.push(p);
            }
        }
        t.push(row);
    }
    t
}

fn unit_inverse(c: &OmegaLaurent) -> Option<OmegaLaurent> {
    let (e, k) = c.as_monomial()?;
    if k == &1.into() {
        Some(OmegaLaurent::omega_pow(-e))
    } else if k == &(-1).into() {
        Some(-&OmegaLaurent::omega_pow(-e))
    } else {
        None
    }
}

/// Power series `sum_{d <= N} c_d x^d` with `c_d` in `Q(w)` and denominator
/// dividing `(q^2; q^2)_d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    order: usize,
    nums: Vec<OmegaLaurent>,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        TruncatedSeries { order, nums: vec![OmegaLaurent::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.nums[0] = OmegaLaurent::one();
        s
    }

    /// Series with the given Laurent coefficients, truncated at `order`.
    pub fn from_polynomial(order: usize, coeffs: &[OmegaLaurent]) -> Self {
        let mut s = Self::zero(order);
        for (d, c) in coeffs.iter().enumerate().take(order + 1) {
            s.nums[d] = c * &pochhammer(d);
        }
        s
    }

    /// Series with rational coefficients; each denominator must divide `(q^2; q^2)_d`.
    pub fn from_coefficients(order: usize, coeffs: &[OmegaRational]) -> Result<Self> {
        let mut s = Self::zero(order);
        for (d, c) in coeffs.iter().enumerate().take(order + 1) {
            let scaled = c.num() * &pochhammer(d);
            s.nums[d] = scaled.div_exact(c.den()).ok_or_else(|| {
                Error::NotExact(format!("coefficient {c} of degree {d} has a denominator outside (q^2;q^2)_{d}"))
            })?;
        }
        Ok(s)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Numerator of the degree-`d` coefficient over `(q^2; q^2)_d`.
    pub fn numerator(&self, d: usize) -> &OmegaLaurent {
        &self.nums[d]
    }

    pub fn coeff(&self, d: usize) -> OmegaRational {
        OmegaRational::new(self.nums[d].clone(), pochhammer(d)).expect("pochhammer symbol is nonzero")
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        TruncatedSeries { order, nums: self.nums[..=order].to_vec() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        TruncatedSeries { order, nums: (0..=order).map(|d| &self.nums[d] + &other.nums[d]).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        TruncatedSeries { order, nums: (0..=order).map(|d| &self.nums[d] - &other.nums[d]).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let g = gaussian_table(order);
        let mut nums = vec![OmegaLaurent::zero(); order + 1];
        for (d, slot) in nums.iter_mut().enumerate() {
            for a in 0..=d {
                let (x, y) = (&self.nums[a], &other.nums[d - a]);
                if x.is_zero() || y.is_zero() {
                    continue;
                }
                *slot += &(&(x * y) * &g[d][a]);
            }
        }
        TruncatedSeries { order, nums }
    }

    /// Multiplicative inverse; the constant term must be `+-w^m`.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = unit_inverse(&self.nums[0])
            .ok_or_else(|| Error::NonInvertibleFactor(format!("constant term {} is not a unit", self.nums[0])))?;
        let g = gaussian_table(self.order);
        let mut r = vec![c0.clone()];
        for d in 1..=self.order {
            let mut acc = OmegaLaurent::zero();
            for j in 1..=d {
                if self.nums[j].is_zero() {
                    continue;
                }
                acc += &(&(&self.nums[j] * &r[d - j]) * &g[d][j]);
            }
            r.push(-&(&acc * &c0));
        }
        Ok(TruncatedSeries { order: self.order, nums: r })
    }

    /// `x -> c x`.
    pub fn scale_variable(&self, c: &OmegaLaurent) -> Self {
        let mut p = OmegaLaurent::one();
        let mut nums = Vec::with_capacity(self.order + 1);
        for n in &self.nums {
            nums.push(n * &p);
            p = &p * c;
        }
        TruncatedSeries { order: self.order, nums }
    }

    /// Highest degree with a nonzero coefficient.
    pub fn top_degree(&self) -> Option<usize> {
        self.nums.iter().rposition(|n| !n.is_zero())
    }

    /// True when the top degree is below the truncation order.
    pub fn tail_vanishes(&self) -> bool {
        self.top_degree().map_or(true, |d| d < self.order)
    }

    /// First degree where the two series differ, up to the smaller order.
    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        let order = self.order.min(other.order);
        (0..=order).find(|&d| self.nums[d] != other.nums[d])
    }

    /// Laurent coefficients up to the top degree; fails if some coefficient is
    /// not in `Z[w, w^-1]`.
    pub fn polynomial(&self) -> Result<Vec<OmegaLaurent>> {
        let top = match self.top_degree() {
            None => return Ok(Vec::new()),
            Some(t) => t,
        };
        (0..=top)
            .map(|d| {
                self.nums[d].div_exact(&pochhammer(d)).ok_or_else(|| {
                    Error::NotExact(format!("coefficient of degree {d} does not clear to a Laurent polynomial"))
                })
            })
            .collect()
    }
}

/// `Psi^q(x) = prod_{k >= 1} (1 + q^{2k-1} x)^{-1}` to order `n`:
/// the coefficient of `x^d` is `(-q)^d / (q^2; q^2)_d`.
pub fn psi_q(order: usize) -> TruncatedSeries {
    let nums = (0..=order)
        .map(|d| {
            let m = OmegaLaurent::q_pow(d as i32);
            if d % 2 == 0 {
                m
            } else {
                -&m
            }
        })
        .collect();
    TruncatedSeries { order, nums }
}

/// `Psi^q(x)^{-1} = prod_{k >= 1} (1 + q^{2k-1} x)`: coefficient `q^{d^2} / (q^2; q^2)_d`.
pub fn psi_q_inverse(order: usize) -> TruncatedSeries {
    TruncatedSeries { order, nums: (0..=order).map(|d| OmegaLaurent::q_pow((d * d) as i32)).collect() }
}

fn linear(c0: OmegaLaurent, c1: OmegaLaurent) -> Vec<OmegaLaurent> {
    vec![c0, c1]
}

/// `Psi(q^2 x) = (1 + q x) Psi(x)` and `Psi(q^-2 x) = (1 + q^-1 x)^-1 Psi(x)` to `order`.
pub fn verify_functional_equations(order: usize) -> Vec<Check> {
    let psi = psi_q(order);
    let mut out = Vec::new();
    let lhs = psi.scale_variable(&OmegaLaurent::q_pow(2));
    let rhs = TruncatedSeries::from_polynomial(order, &linear(OmegaLaurent::one(), OmegaLaurent::q_pow(1))).mul(&psi);
    out.push(series_check(format!("psi(q^2 x) = (1+qx) psi(x) to order {order}"), &lhs, &rhs));
    let lhs = psi.scale_variable(&OmegaLaurent::q_pow(-2));
    let rhs = TruncatedSeries::from_polynomial(order, &linear(OmegaLaurent::one(), OmegaLaurent::q_pow(-1)))
        .inverse()
        .map(|f| f.mul(&psi));
    out.push(match rhs {
        Ok(rhs) => series_check(format!("psi(q^-2 x) = (1+q^-1 x)^-1 psi(x) to order {order}"), &lhs, &rhs),
        Err(e) => Check::fail(format!("psi(q^-2 x) to order {order}"), e.to_string()),
    });
    let prod = psi.mul(&psi_q_inverse(order));
    out.push(series_check(format!("psi(x) psi(x)^-1 = 1 to order {order}"), &prod, &TruncatedSeries::one(order)));
    out
}

fn series_check(name: String, a: &TruncatedSeries, b: &TruncatedSeries) -> Check {
    match a.first_difference(b) {
        None => Check::pass(name),
        Some(d) => Check::fail(name, format!("first difference at degree {d}")),
    }
}

/// `[x]_+`.
fn pos(x: i64) -> i64 {
    x.max(0)
}

/// The quantum torus of a seed's double: `X_i` on `e_i`, `B_i` on `f_i`, with
/// `X_i X_j = q^{2 eps_ij} X_j X_i` and `X_i B_j = q^{2 delta_ij} B_j X_i`.
#[derive(Clone, Debug)]
pub struct DoubleSeed {
    eps: IntMatrix,
    form: Arc<SkewForm>,
}

impl DoubleSeed {
    pub fn new(eps: IntMatrix) -> Result<Self> {
        if !eps.is_skew_symmetric() {
            return Err(Error::InvalidInput("exchange matrix is not skew-symmetric".into()));
        }
        let r = eps.rows();
        let mut f = IntMatrix::zeros(2 * r, 2 * r);
        for i in 0..r {
            for j in 0..r {
                f.set(i, j, -4 * eps.get(i, j));
            }
            f.set(i, r + i, -4);
            f.set(r + i, i, 4);
        }
        let form = SkewForm::new(f)?;
        Ok(DoubleSeed { eps, form })
    }

    /// The mutable block of a chart's exchange matrix.
    pub fn from_chart(alg: &ChartAlgebras) -> Result<Self> {
        let r = alg.num_internal();
        let mut e = IntMatrix::zeros(r, r);
        for i in 0..r {
            for j in 0..r {
                e.set(i, j, alg.eps_j(i, j));
            }
        }
        Self::new(e)
    }

    /// Restriction to the given positions.
    pub fn subsystem(&self, idx: &[usize]) -> Result<Self> {
        let mut e = IntMatrix::zeros(idx.len(), idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                e.set(a, b, self.eps.get(i, j));
            }
        }
        Self::new(e)
    }

    pub fn rank(&self) -> usize {
        self.eps.rows()
    }

    pub fn eps(&self) -> &IntMatrix {
        &self.eps
    }

    pub fn form(&self) -> &Arc<SkewForm> {
        &self.form
    }

    pub fn e(&self, i: usize) -> Exponent {
        let mut v = vec![0; 2 * self.rank()];
        v[i] = 1;
        v
    }

    pub fn f(&self, i: usize) -> Exponent {
        let mut v = vec![0; 2 * self.rank()];
        v[self.rank() + i] = 1;
        v
    }

    /// Lattice vector of `X_hat_k = X_k prod_j B_j^{eps_kj}`.
    pub fn x_hat_vector(&self, k: usize) -> Exponent {
        let r = self.rank();
        let mut v = self.e(k);
        for j in 0..r {
            v[r + j] = self.eps.get(k, j);
        }
        v
    }

    /// Lattice vector of `B_k^+` (sign 1) or `B_k^-` (sign -1).
    pub fn bb_vector(&self, k: usize, sign: i64) -> Exponent {
        let r = self.rank();
        let mut v = vec![0; 2 * r];
        for j in 0..r {
            v[r + j] = pos(sign * self.eps.get(k, j));
        }
        v
    }

    pub fn monomial(&self, v: Exponent) -> TorusElement {
        TorusElement::monomial(&self.form, v, OmegaLaurent::one())
    }

    pub fn x(&self, i: usize) -> TorusElement {
        self.monomial(self.e(i))
    }

    pub fn b(&self, i: usize) -> TorusElement {
        self.monomial(self.f(i))
    }

    pub fn x_hat(&self, k: usize) -> TorusElement {
        self.monomial(self.x_hat_vector(k))
    }

    /// Generator `g` with `g < r` meaning `X_g` and `g >= r` meaning `B_{g-r}`.
    pub fn generator(&self, g: usize) -> TorusElement {
        TorusElement::generator(&self.form, g)
    }

    pub fn generator_name(&self, g: usize) -> String {
        if g < self.rank() {
            format!("X{g}")
        } else {
            format!("B{}", g - self.rank())
        }
    }

    /// The pairing `(u, v)_D`, recovered from the torus form.
    fn pair(&self, u: &[i64], v: &[i64]) -> i64 {
        -self.form.pair(u, v) / 4
    }

    /// Columns are the images of `e'_i` and `f'_i` under the lattice map of
    /// mutation at `k`: `e'_i = e_i + [eps_ik]_+ e_k`, `e'_k = -e_k`,
    /// `f'_k = -f_k + sum_j [-eps_kj]_+ f_j`, `f'_i = f_i`.
    pub fn mu_prime_matrix(&self, k: usize) -> IntMatrix {
        let r = self.rank();
        let mut m = IntMatrix::zeros(2 * r, 2 * r);
        for i in 0..r {
            if i == k {
                m.set(k, k, -1);
                m.set(r + k, r + k, -1);
                for j in 0..r {
                    if j != k {
                        m.set(r + j, r + k, pos(-self.eps.get(k, j)));
                    }
                }
            } else {
                m.set(i, i, 1);
                m.set(k, i, pos(self.eps.get(i, k)));
                m.set(r + i, r + i, 1);
            }
        }
        m
    }

    /// The seed after mutation at `k`, with `eps'_ij = (e'_i, e'_j)`.
    pub fn mutated(&self, k: usize) -> Self {
        let m = self.mu_prime_matrix(k);
        let col = |c: usize| -> Exponent { (0..m.rows()).map(|r| m.get(r, c)).collect() };
        let r = self.rank();
        let mut e = IntMatrix::zeros(r, r);
        for i in 0..r {
            for j in 0..r {
                e.set(i, j, self.pair(&col(i), &col(j)));
            }
        }
        Self::new(e).expect("mutated matrix is skew")
    }

    /// `mu'_k` on the generator `g` of the mutated seed.
    pub fn mu_prime(&self, k: usize, g: usize) -> TorusElement {
        let m = self.mu_prime_matrix(k);
        self.monomial((0..m.rows()).map(|r| m.get(r, g)).collect())
    }
}

/// Result of conjugating a monomial: `target * prod_z S_z(Y_z)` for pairwise
/// commuting monomials `Y_z`, each `S_z` a truncated series.
#[derive(Clone, Debug)]
pub struct Conjugated {
    pub target: TorusElement,
    pub factors: BTreeMap<Exponent, TruncatedSeries>,
    order: usize,
}

impl Conjugated {
    pub fn order(&self) -> usize {
        self.order
    }

    fn check_commutes(&self, z: &[i64]) -> Result<()> {
        for w in self.factors.keys() {
            if self.target.form().pair(z, w) != 0 {
                return Err(Error::InvalidInput(format!("series variables {z:?} and {w:?} do not commute")));
            }
        }
        Ok(())
    }

    fn merge(&mut self, z: Exponent, s: TruncatedSeries) {
        let merged = match self.factors.remove(&z) {
            Some(old) => old.mul(&s),
            None => s,
        };
        self.factors.insert(z, merged);
    }

    /// Multiplies on the right by a polynomial in `Y_z`.
    pub fn times_polynomial(&self, z: &[i64], poly: &[OmegaLaurent]) -> Result<Self> {
        self.check_commutes(z)?;
        let mut out = self.clone();
        out.merge(z.to_vec(), TruncatedSeries::from_polynomial(self.order, poly));
        Ok(out)
    }

    /// Per-variable top degrees.
    pub fn tail_report(&self) -> Vec<(Exponent, Option<usize>)> {
        self.factors.iter().map(|(z, s)| (z.clone(), s.top_degree())).collect()
    }

    /// True when every factor is a polynomial of degree below the truncation order.
    pub fn closes(&self) -> bool {
        self.factors.values().all(TruncatedSeries::tail_vanishes)
    }

    /// The exact element, available when every factor closes to a Laurent polynomial.
    pub fn to_element(&self) -> Result<TorusElement> {
        let form = self.target.form().clone();
        let mut out = self.target.clone();
        for (z, s) in &self.factors {
            if !s.tail_vanishes() {
                return Err(Error::NotExact(format!(
                    "series in {z:?} has a nonzero coefficient at the truncation order {}",
                    self.order
                )));
            }
            let mut p = TorusElement::zero(&form);
            for (d, c) in s.polynomial()?.iter().enumerate() {
                p.add_term(z.iter().map(|x| x * d as i64).collect(), c);
            }
            out = out.try_mul(&p)?;
        }
        Ok(out)
    }
}

/// `w`-power `c` with `Y_z Y_v = c Y_v Y_z`.
fn commutation_power(form: &SkewForm, z: &[i64], v: &[i64]) -> i32 {
    -2 * form.pair(z, v) as i32
}

/// `phi(Y_z) * target * phi(Y_z)^{-1}` via `phi(Y_z) Y_v = Y_v phi(c Y_z)`.
pub fn conjugate(phi: &TruncatedSeries, var: &TorusElement, target: &TorusElement) -> Result<Conjugated> {
    conjugate_product(&[(phi.clone(), var.clone())], target)
}

/// Conjugation by the product `phi_1(Y_{z_1}) phi_2(Y_{z_2}) ...` of series in
/// pairwise commuting monomials.
pub fn conjugate_product(parts: &[(TruncatedSeries, TorusElement)], target: &TorusElement) -> Result<Conjugated> {
    let (v, _) = target
        .as_monomial()
        .ok_or_else(|| Error::InvalidInput("conjugation target must be a single monomial".into()))?;
    let v = v.clone();
    let order = parts.iter().map(|(s, _)| s.order()).min().unwrap_or(0);
    let mut out = Conjugated { target: target.clone(), factors: BTreeMap::new(), order };
    for (phi, var) in parts.iter().rev() {
        let (z, c) = var
            .as_monomial()
            .ok_or_else(|| Error::InvalidInput("series variable must be a single monomial".into()))?;
        if !c.is_one() {
            return Err(Error::InvalidInput("series variable must have coefficient 1".into()));
        }
        if !var.same_form(target) {
            return Err(Error::FormMismatch);
        }
        out.check_commutes(z)?;
        let phi = phi.truncate(order);
        let shifted = phi.scale_variable(&OmegaLaurent::omega_pow(commutation_power(target.form(), z, &v)));
        out.merge(z.clone(), shifted.mul(&phi.inverse()?));
    }
    Ok(out)
}

/// `mu_k^#(target) = Ad_{Psi(X_k) / Psi(X_hat_k)}(target)`.
pub fn mu_sharp(seed: &DoubleSeed, k: usize, target: &TorusElement, order: usize) -> Result<Conjugated> {
    conjugate_product(&[(psi_q(order), seed.x(k)), (psi_q_inverse(order), seed.x_hat(k))], target)
}

/// An element stated as `num * den(Y_z)^{-1}` with `den` a polynomial in one
/// series variable.
#[derive(Clone, Debug)]
pub struct ClosedForm {
    pub num: TorusElement,
    pub den: Option<(Exponent, Vec<OmegaLaurent>)>,
}

fn prod_linear(terms: impl Iterator<Item = (OmegaLaurent, OmegaLaurent)>) -> Vec<OmegaLaurent> {
    let mut p = vec![OmegaLaurent::one()];
    for (c0, c1) in terms {
        let mut next = vec![OmegaLaurent::zero(); p.len() + 1];
        for (d, a) in p.iter().enumerate() {
            next[d] += &(a * &c0);
            next[d + 1] += &(a * &c1);
        }
        p = next;
    }
    p
}

fn poly_in(seed: &DoubleSeed, z: &[i64], p: &[OmegaLaurent]) -> TorusElement {
    let mut out = TorusElement::zero(seed.form());
    for (d, c) in p.iter().enumerate() {
        out.add_term(z.iter().map(|x| x * d as i64).collect(), c);
    }
    out
}

/// The stated values of `mu_k^#` on the generators of the seed.
pub fn sharp_closed_form(seed: &DoubleSeed, k: usize, g: usize) -> Result<ClosedForm> {
    let r = seed.rank();
    if g >= r {
        let i = g - r;
        if i != k {
            return Ok(ClosedForm { num: seed.b(i), den: None });
        }
        let p = poly_in(seed, &seed.e(k), &linear(OmegaLaurent::one(), OmegaLaurent::q_pow(1)));
        let den = linear(OmegaLaurent::one(), OmegaLaurent::q_pow(1));
        return Ok(ClosedForm { num: seed.b(k).try_mul(&p)?, den: Some((seed.x_hat_vector(k), den)) });
    }
    let e = seed.eps.get(g, k);
    let a = e.unsigned_abs() as i32;
    if e <= 0 {
        let p = prod_linear((0..a).map(|p| (OmegaLaurent::one(), OmegaLaurent::q_pow(2 * p + 1))));
        Ok(ClosedForm { num: seed.x(g).try_mul(&poly_in(seed, &seed.e(k), &p))?, den: None })
    } else {
        let p = prod_linear((0..a).map(|p| (OmegaLaurent::one(), OmegaLaurent::q_pow(-(2 * p + 1)))));
        Ok(ClosedForm { num: seed.x(g), den: Some((seed.e(k), p)) })
    }
}

/// The stated values of `mu_k^q = mu_k^# o mu'_k` on the generators of the mutated seed.
pub fn transformation_closed_form(seed: &DoubleSeed, k: usize, g: usize) -> Result<ClosedForm> {
    let r = seed.rank();
    if g >= r {
        let i = g - r;
        if i != k {
            return Ok(ClosedForm { num: seed.b(i), den: None });
        }
        let plus = seed.x(k).try_mul(&seed.monomial(seed.bb_vector(k, 1)))?.shift(4);
        let num = plus.try_add(&seed.monomial(seed.bb_vector(k, -1)))?.try_mul(&seed.b(k).inverse()?)?;
        let den = linear(OmegaLaurent::one(), OmegaLaurent::q_pow(-1));
        return Ok(ClosedForm { num, den: Some((seed.e(k), den)) });
    }
    if g == k {
        return Ok(ClosedForm { num: seed.x(k).inverse()?, den: None });
    }
    let e = seed.eps.get(g, k);
    if e <= 0 {
        let p = prod_linear((0..(-e) as i32).map(|p| (OmegaLaurent::one(), OmegaLaurent::q_pow(2 * p + 1))));
        Ok(ClosedForm { num: seed.x(g).try_mul(&poly_in(seed, &seed.e(k), &p))?, den: None })
    } else {
        let p = prod_linear((0..e as i32).map(|p| (OmegaLaurent::q_pow(2 * p + 1), OmegaLaurent::one())));
        let num = seed.x(g).try_mul(&seed.x(k).pow(e)?)?;
        Ok(ClosedForm { num, den: Some((seed.e(k), p)) })
    }
}

/// Checks `c * den == num` exactly, with a vanishing tail.
fn cross_multiplied(c: &Conjugated, form: &ClosedForm) -> Result<std::result::Result<TorusElement, String>> {
    let c = match &form.den {
        Some((z, p)) => c.times_polynomial(z, p)?,
        None => c.clone(),
    };
    if !c.closes() {
        let bad: Vec<String> = c
            .tail_report()
            .into_iter()
            .filter(|(_, d)| d.map_or(false, |d| d >= c.order()))
            .map(|(z, _)| format!("{z:?}"))
            .collect();
        return Ok(Err(format!("tail does not vanish at order {} in {}", c.order(), bad.join(", "))));
    }
    let got = c.to_element()?;
    if got == form.num {
        Ok(Ok(got))
    } else {
        Ok(Err(format!("got {got:?}, expected {:?}", form.num)))
    }
}

fn run_at_orders<F>(name: String, order: usize, mut f: F) -> Check
where
    F: FnMut(usize) -> Result<std::result::Result<TorusElement, String>>,
{
    let mut first: Option<TorusElement> = None;
    for n in [order, order + TAIL_MARGIN] {
        match f(n) {
            Err(e) => return Check::fail(name, format!("order {n}: {e}")),
            Ok(Err(msg)) => return Check::fail(name, format!("order {n}: {msg}")),
            Ok(Ok(x)) => {
                if let Some(prev) = &first {
                    if prev != &x {
                        return Check::fail(name, format!("results at orders {order} and {n} differ"));
                    }
                }
                first = Some(x);
            }
        }
    }
    Check::pass(name)
}

/// Push-through for a polynomial `phi`: `phi(Z) G = G phi(c Z)`
/// with `c = q^{2 delta_ik}` for `G = B_i` and `c = q^{2 eps_ki}` (for `Z = X_k`)
/// or `1` (for `Z = X_hat_k`) when `G = X_i`, all checked in the torus.
pub fn verify_push_through(seed: &DoubleSeed, k: usize, phi: &[OmegaLaurent]) -> Vec<Check> {
    let r = seed.rank();
    let mut out = Vec::new();
    let vars = [("X", seed.e(k)), ("Xhat", seed.x_hat_vector(k))];
    for (vname, z) in &vars {
        for g in 0..2 * r {
            let c = if g >= r {
                if g - r == k {
                    2
                } else {
                    0
                }
            } else if *vname == "X" {
                2 * seed.eps.get(k, g)
            } else {
                0
            };
            let scaled: Vec<OmegaLaurent> =
                phi.iter().enumerate().map(|(d, a)| a * &OmegaLaurent::q_pow(c as i32 * d as i32)).collect();
            let gen = seed.generator(g);
            let lhs = poly_in(seed, z, phi).try_mul(&gen);
            let rhs = gen.try_mul(&poly_in(seed, z, &scaled));
            let name = format!("push-through phi({vname}{k}) {}", seed.generator_name(g));
            out.push(match (lhs, rhs) {
                (Ok(a), Ok(b)) if a == b => Check::pass(name),
                (Ok(a), Ok(b)) => Check::fail(name, format!("{a:?} != {b:?}")),
                (Err(e), _) | (_, Err(e)) => Check::fail(name, e.to_string()),
            });
        }
    }
    out
}

/// The stated conjugation values on every generator, at `order` and `order + 4`.
pub fn verify_sharp(seed: &DoubleSeed, k: usize, order: usize) -> Vec<Check> {
    (0..2 * seed.rank())
        .map(|g| {
            let name = format!("mu_sharp[{k}] {}", seed.generator_name(g));
            run_at_orders(name, order, |n| {
                let form = sharp_closed_form(seed, k, g)?;
                let c = mu_sharp(seed, k, &seed.generator(g), n)?;
                cross_multiplied(&c, &form)
            })
        })
        .collect()
}

/// The lattice map: its images on generators, that it is an isometry onto the
/// mutated form, and that the dual basis transforms as stated.
pub fn verify_mu_prime(seed: &DoubleSeed, k: usize) -> Vec<Check> {
    let r = seed.rank();
    let mut out = Vec::new();
    let primed = seed.mutated(k);
    let name = format!("mu_prime[{k}] mutated matrix");
    out.push(if primed.eps == mutate_matrix(&seed.eps, k) {
        Check::pass(name)
    } else {
        Check::fail(name, format!("{:?} != {:?}", primed.eps.to_rows(), mutate_matrix(&seed.eps, k).to_rows()))
    });
    let m = seed.mu_prime_matrix(k);
    let iso = m.transpose().mul(seed.form.matrix()).mul(&m) == *primed.form.matrix();
    let name = format!("mu_prime[{k}] isometry");
    out.push(if iso { Check::pass(name) } else { Check::fail(name, "pulled-back form differs from the mutated form") });
    for g in 0..2 * r {
        let got = seed.mu_prime(k, g);
        let expected = if g >= r {
            let i = g - r;
            if i == k {
                seed.b(k).inverse().and_then(|bi| bi.try_mul(&seed.monomial(seed.bb_vector(k, -1))))
            } else {
                Ok(seed.b(i))
            }
        } else if g == k {
            seed.x(k).inverse()
        } else {
            let p = pos(seed.eps.get(g, k));
            seed.x(k)
                .pow(p)
                .and_then(|xk| seed.x(g).try_mul(&xk))
                .map(|x| x.shift(-4 * (p * seed.eps.get(g, k)) as i32))
        };
        let name = format!("mu_prime[{k}] {}'", seed.generator_name(g));
        out.push(match expected {
            Ok(e) if e == got => Check::pass(name),
            Ok(e) => Check::fail(name, format!("{got:?} != {e:?}")),
            Err(err) => Check::fail(name, err.to_string()),
        });
    }
    out
}

/// `mu_sharp o mu'` on every primed generator against the stated closed forms,
/// cross-multiplied, at `order` and `order + 4`; X-generators must not involve
/// any `B`.
pub fn verify_transformation(seed: &DoubleSeed, k: usize, order: usize) -> Vec<Check> {
    let r = seed.rank();
    let mut out = Vec::new();
    for g in 0..2 * r {
        let name = format!("mu_q[{k}] {}'", seed.generator_name(g));
        let mut restricted = true;
        let check = run_at_orders(name.clone(), order, |n| {
            let form = transformation_closed_form(seed, k, g)?;
            let c = mu_sharp(seed, k, &seed.mu_prime(k, g), n)?;
            let res = cross_multiplied(&c, &form)?;
            if g < r {
                if let Ok(x) = &res {
                    restricted &= x.terms().keys().all(|v| v[r..].iter().all(|&b| b == 0));
                }
            }
            Ok(res)
        });
        out.push(check);
        if g < r {
            let name = format!("mu_q[{k}] {}' stays in the X subalgebra", seed.generator_name(g));
            out.push(if restricted { Check::pass(name) } else { Check::fail(name, "a B exponent appears") });
        }
    }
    out
}

type Poly2 = BTreeMap<(i64, i64), OmegaLaurent>;

fn poly2_mul(a: &Poly2, b: &Poly2) -> Poly2 {
    let mut out = Poly2::new();
    for ((i, j), c) in a {
        for ((k, l), d) in b {
            let e = out.entry((i + k, j + l)).or_insert_with(OmegaLaurent::zero);
            *e += &(c * d);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn poly2_add(a: &Poly2, b: &Poly2) -> Poly2 {
    let mut out = a.clone();
    for (k, c) in b {
        let e = out.entry(*k).or_insert_with(OmegaLaurent::zero);
        *e += c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn poly2_scale_vars(a: &Poly2, lx: i32, ly: i32) -> Poly2 {
    a.iter().map(|(&(i, j), c)| ((i, j), c.shift(lx * i as i32 + ly * j as i32))).collect()
}

fn poly2_monomial(i: i64, j: i64, c: OmegaLaurent) -> Poly2 {
    let mut p = Poly2::new();
    if !c.is_zero() {
        p.insert((i, j), c);
    }
    p
}

/// `Y_w * num(x, y) / den(x, y)` over a seed, with `x = X_k` and `y = X_hat_k`.
#[derive(Clone, Debug)]
pub struct LocalFraction {
    prefactor: Exponent,
    num: Poly2,
    den: Poly2,
}

/// Arithmetic of [`LocalFraction`]s for a fixed seed and direction.
#[derive(Clone, Debug)]
pub struct LocalField {
    pub seed: DoubleSeed,
    pub k: usize,
    x: Exponent,
    y: Exponent,
    collapsed: bool,
}

impl LocalField {
    pub fn new(seed: &DoubleSeed, k: usize) -> Self {
        let x = seed.e(k);
        let y = seed.x_hat_vector(k);
        let collapsed = x == y;
        LocalField { seed: seed.clone(), k, x, y, collapsed }
    }

    fn normalize(&self, p: Poly2) -> Poly2 {
        if !self.collapsed {
            return p;
        }
        let mut out = Poly2::new();
        for ((i, j), c) in p {
            let e = out.entry((i + j, 0)).or_insert_with(OmegaLaurent::zero);
            *e += &c;
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    fn one_poly() -> Poly2 {
        poly2_monomial(0, 0, OmegaLaurent::one())
    }

    pub fn monomial(&self, w: Exponent) -> LocalFraction {
        LocalFraction { prefactor: w, num: Self::one_poly(), den: Self::one_poly() }
    }

    /// `(a, b)` with `d = a x + b y`.
    fn solve(&self, d: &[i64]) -> Option<(i64, i64)> {
        let r = self.seed.rank();
        let b = if self.collapsed {
            0
        } else {
            let j = (0..r).find(|&j| self.y[r + j] != 0)?;
            if d[r + j] % self.y[r + j] != 0 {
                return None;
            }
            d[r + j] / self.y[r + j]
        };
        let a = d[self.k] - b;
        let ok = (0..2 * r).all(|s| d[s] == a * self.x[s] + b * self.y[s]);
        ok.then_some((a, b))
    }

    /// Rewrites `Y_u` as `Y_w * c x^a y^b`.
    fn relative(&self, w: &[i64], u: &[i64]) -> Option<Poly2> {
        let d: Exponent = u.iter().zip(w).map(|(p, q)| p - q).collect();
        let (a, b) = self.solve(&d)?;
        let c = OmegaLaurent::omega_pow(self.seed.form.pair(w, &d) as i32);
        Some(self.normalize(poly2_monomial(a, b, c)))
    }

    /// `num_element * den(x)^{-1}` for a closed form.
    pub fn from_closed_form(&self, f: &ClosedForm) -> Result<LocalFraction> {
        let w = f.num.lowest_term()?.0.clone();
        let mut num = Poly2::new();
        for (u, c) in f.num.terms() {
            let rel = self
                .relative(&w, u)
                .ok_or_else(|| Error::InvalidInput(format!("exponent {u:?} is not a monomial times a function of X_k, X_hat_k")))?;
            num = poly2_add(&num, &poly2_mul(&rel, &poly2_monomial(0, 0, c.clone())));
        }
        let den = match &f.den {
            None => Self::one_poly(),
            Some((z, p)) => {
                let mut den = Poly2::new();
                let unit = self
                    .solve(z)
                    .ok_or_else(|| Error::InvalidInput("denominator variable is not in the local span".into()))?;
                for (d, c) in p.iter().enumerate() {
                    let d = d as i64;
                    den = poly2_add(&den, &poly2_monomial(unit.0 * d, unit.1 * d, c.clone()));
                }
                self.normalize(den)
            }
        };
        Ok(LocalFraction { prefactor: w, num, den })
    }

    pub fn mul(&self, a: &LocalFraction, b: &LocalFraction) -> LocalFraction {
        let f = &self.seed.form;
        let v = &b.prefactor;
        let lx = commutation_power(f, &self.x, v);
        let ly = commutation_power(f, &self.y, v);
        let phase = OmegaLaurent::omega_pow(-(f.pair(&a.prefactor, v) as i32));
        let num = poly2_mul(&poly2_scale_vars(&a.num, lx, ly), &b.num);
        let num = poly2_mul(&num, &poly2_monomial(0, 0, phase));
        let den = poly2_mul(&poly2_scale_vars(&a.den, lx, ly), &b.den);
        LocalFraction {
            prefactor: a.prefactor.iter().zip(v).map(|(p, q)| p + q).collect(),
            num: self.normalize(num),
            den: self.normalize(den),
        }
    }

    pub fn inverse(&self, a: &LocalFraction) -> Result<LocalFraction> {
        if a.num.is_empty() {
            return Err(Error::DivisionByZero);
        }
        let neg: Exponent = a.prefactor.iter().map(|x| -x).collect();
        let f = &self.seed.form;
        let lx = commutation_power(f, &self.x, &neg);
        let ly = commutation_power(f, &self.y, &neg);
        Ok(LocalFraction {
            prefactor: neg,
            num: poly2_scale_vars(&a.den, lx, ly),
            den: poly2_scale_vars(&a.num, lx, ly),
        })
    }

    pub fn pow(&self, a: &LocalFraction, n: i64) -> Result<LocalFraction> {
        let base = if n < 0 { self.inverse(a)? } else { a.clone() };
        let mut out = self.monomial(vec![0; a.prefactor.len()]);
        for _ in 0..n.unsigned_abs() {
            out = self.mul(&out, &base);
        }
        Ok(out)
    }

    pub fn equal(&self, a: &LocalFraction, b: &LocalFraction) -> bool {
        let rel = match self.relative(&b.prefactor, &a.prefactor) {
            Some(r) => r,
            None => return false,
        };
        let lhs = self.normalize(poly2_mul(&poly2_mul(&rel, &a.num), &b.den));
        let rhs = self.normalize(poly2_mul(&b.num, &a.den));
        lhs == rhs
    }

    /// `Y_w` with `w` in the local span, as `c x^a y^b` with `c = +-w^m`.
    fn as_unit_monomial(&self, a: &LocalFraction) -> Option<(i64, i64, OmegaLaurent)> {
        let rel = self.relative(&vec![0; a.prefactor.len()], &a.prefactor)?;
        let num = poly2_mul(&rel, &a.num);
        if num.len() != 1 || a.den.len() != 1 {
            return None;
        }
        let ((i, j), c) = num.into_iter().next()?;
        let ((k, l), d) = a.den.iter().next()?;
        let dinv = unit_inverse(d)?;
        unit_inverse(&c)?;
        Some((i - k, j - l, &c * &dinv))
    }
}

/// Mutation at `k` as a map from the mutated seed's torus, given by the closed
/// forms on generators and extended multiplicatively.
pub struct MutationMap {
    pub source: DoubleSeed,
    pub target: LocalField,
    images: Vec<LocalFraction>,
}

impl MutationMap {
    pub fn new(seed: &DoubleSeed, k: usize) -> Result<Self> {
        let target = LocalField::new(seed, k);
        let images = (0..2 * seed.rank())
            .map(|g| target.from_closed_form(&transformation_closed_form(seed, k, g)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(MutationMap { source: seed.mutated(k), target, images })
    }

    /// Image of `Y'_v`: `w^{sum_{a<b} v_a v_b F'(a, b)}` times the ordered product.
    pub fn image_monomial(&self, v: &[i64]) -> Result<LocalFraction> {
        let f = self.source.form.matrix();
        let mut phase = 0i64;
        for a in 0..v.len() {
            for b in a + 1..v.len() {
                phase += v[a] * v[b] * f.get(a, b);
            }
        }
        let mut out = self.target.monomial(vec![0; v.len()]);
        for (a, &va) in v.iter().enumerate() {
            if va != 0 {
                out = self.target.mul(&out, &self.target.pow(&self.images[a], va)?);
            }
        }
        out.num = poly2_mul(&out.num, &poly2_monomial(0, 0, OmegaLaurent::omega_pow(phase as i32)));
        Ok(out)
    }

    /// Image of a fraction over the mutated seed (in its own local variables).
    pub fn image(&self, src: &LocalField, t: &LocalFraction) -> Result<LocalFraction> {
        let pre = self.image_monomial(&t.prefactor)?;
        let mx = self.image_monomial(&src.x)?;
        let my = self.image_monomial(&src.y)?;
        let (mx, my) = match (self.target.as_unit_monomial(&mx), self.target.as_unit_monomial(&my)) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(Error::InvalidInput(
                    "local variables do not map to monomials in the target local variables".into(),
                ))
            }
        };
        let subst = |p: &Poly2| -> Result<Poly2> {
            let mut out = Poly2::new();
            for (&(i, j), c) in p {
                let (cx, cy) = (
                    if i >= 0 { mx.2.pow(i as u32) } else { unit_inverse(&mx.2).unwrap().pow((-i) as u32) },
                    if j >= 0 { my.2.pow(j as u32) } else { unit_inverse(&my.2).unwrap().pow((-j) as u32) },
                );
                let term = poly2_monomial(i * mx.0 + j * my.0, i * mx.1 + j * my.1, &(c * &cx) * &cy);
                out = poly2_add(&out, &term);
            }
            Ok(self.target.normalize(out))
        };
        let r = LocalFraction { prefactor: vec![0; t.prefactor.len()], num: subst(&t.num)?, den: subst(&t.den)? };
        Ok(self.target.mul(&pre, &r))
    }

    /// Sanity: `X'_k` and `X_hat'_k` map to `X_k^{-1}` and `X_hat_k^{-1}`.
    pub fn local_variables_invert(&self, src: &LocalField) -> Result<bool> {
        let mx = self.image_monomial(&src.x)?;
        let my = self.image_monomial(&src.y)?;
        let ix = self.target.inverse(&self.target.monomial(self.target.x.clone()))?;
        let iy = self.target.inverse(&self.target.monomial(self.target.y.clone()))?;
        Ok(self.target.equal(&mx, &ix) && self.target.equal(&my, &iy))
    }
}

/// Mutating at `k` twice and composing the two closed-form maps gives the
/// identity on generators.
pub fn verify_flip_back(seed: &DoubleSeed, k: usize) -> Vec<Check> {
    let mut out = Vec::new();
    let run = || -> Result<Vec<Check>> {
        let first = MutationMap::new(seed, k)?;
        let primed = first.source.clone();
        let second = MutationMap::new(&primed, k)?;
        let mut checks = Vec::new();
        let name = format!("flip-back[{k}] seed returns");
        checks.push(if second.source.eps == seed.eps {
            Check::pass(name)
        } else {
            Check::fail(name, "double mutation changed the exchange matrix")
        });
        let name = format!("flip-back[{k}] local variables invert");
        checks.push(if first.local_variables_invert(&second.target)? {
            Check::pass(name)
        } else {
            Check::fail(name, "X'_k or X_hat'_k does not map to an inverse")
        });
        for g in 0..2 * seed.rank() {
            let name = format!("flip-back[{k}] {}", seed.generator_name(g));
            let mid = second.image_monomial(&seed.e_or_f(g))?;
            let back = first.image(&second.target, &mid)?;
            let expected = first.target.monomial(seed.e_or_f(g));
            checks.push(if first.target.equal(&back, &expected) {
                Check::pass(name)
            } else {
                Check::fail(name, format!("{back:?}"))
            });
        }
        Ok(checks)
    };
    match run() {
        Ok(c) => out.extend(c),
        Err(e) => out.push(Check::fail(format!("flip-back[{k}]"), e.to_string())),
    }
    out
}

impl DoubleSeed {
    fn e_or_f(&self, g: usize) -> Exponent {
        let mut v = vec![0; 2 * self.rank()];
        v[g] = 1;
        v
    }
}

/// Every identity for one seed and direction.
pub fn verify_seed(seed: &DoubleSeed, k: usize, order: usize) -> Vec<Check> {
    let phi = vec![OmegaLaurent::from_int(2), OmegaLaurent::q_pow(-1), OmegaLaurent::from_int(-3), OmegaLaurent::omega_pow(3)];
    let mut out = verify_push_through(seed, k, &phi);
    out.extend(verify_mu_prime(seed, k));
    out.extend(verify_sharp(seed, k, order));
    out.extend(verify_transformation(seed, k, order));
    out.extend(verify_flip_back(seed, k));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn w(e: i32) -> OmegaLaurent {
        OmegaLaurent::omega_pow(e)
    }

    fn all_pass(checks: &[Check]) {
        for c in checks {
            assert!(c.passed, "{c}");
        }
    }

    /// `q`-adic expansion of `1/(1 - q^a)` style products, truncated at `q^m`.
    fn series_inverse(p: &[BigInt], m: usize) -> Vec<BigInt> {
        let mut r = vec![BigInt::from(0); m + 1];
        r[0] = BigInt::from(1);
        for d in 1..=m {
            let mut acc = BigInt::from(0);
            for j in 1..=d.min(p.len() - 1) {
                acc += &p[j] * &r[d - j];
            }
            r[d] = -acc;
        }
        r
    }

    #[test]
    fn psi_matches_its_product_definition_q_adically() {
        // Coefficients of x^d in prod_{k=1}^{K} (1 + q^{2k-1} x)^{-1}, as power
        // series in q up to q^m, against (-q)^d / (q^2;q^2)_d expanded the same way.
        let (n, m) = (5usize, 30usize);
        let zero = || vec![BigInt::from(0); m + 1];
        let mut prod: Vec<Vec<BigInt>> = (0..=n).map(|_| zero()).collect();
        prod[0][0] = BigInt::from(1);
        for k in 1..=(m + 1) / 2 {
            let a = 2 * k - 1;
            let mut next: Vec<Vec<BigInt>> = (0..=n).map(|_| zero()).collect();
            for d in 0..=n {
                for e in 0..=n - d {
                    let shift = a * e;
                    if shift > m {
                        break;
                    }
                    let sign = if e % 2 == 0 { 1 } else { -1 };
                    for s in 0..=m - shift {
                        let v = &prod[d][s] * sign;
                        next[d + e][s + shift] += v;
                    }
                }
            }
            prod = next;
        }
        let psi = psi_q(n);
        for d in 0..=n {
            let den = pochhammer(d);
            let mut dq = zero();
            for (e, c) in den.terms() {
                dq[(*e / 4) as usize] = c.clone();
            }
            let inv = series_inverse(&dq, m);
            let num = psi.numerator(d);
            let mut got = zero();
            for (e, c) in num.terms() {
                let s = (*e / 4) as usize;
                for t in 0..=m - s {
                    got[s + t] += c * &inv[t];
                }
            }
            assert_eq!(got, prod[d], "degree {d}");
        }
    }

    #[test]
    fn psi_coefficients() {
        let psi = psi_q(3);
        assert!(psi.coeff(0) == OmegaRational::one());
        let c1 = OmegaRational::new(-&w(4), &OmegaLaurent::one() - &w(8)).unwrap();
        assert!(psi.coeff(1) == c1);
        assert_eq!(psi_q(4).inverse().unwrap(), psi_q_inverse(4));
    }

    #[test]
    fn functional_equations_to_order_twelve() {
        all_pass(&verify_functional_equations(FUNCTIONAL_EQUATION_ORDER));
    }

    #[test]
    fn broken_functional_equation_is_detected() {
        let psi = psi_q(6);
        let lhs = psi.scale_variable(&OmegaLaurent::q_pow(2));
        let rhs = TruncatedSeries::from_polynomial(6, &linear(OmegaLaurent::one(), OmegaLaurent::q_pow(3))).mul(&psi);
        let c = series_check("wrong".into(), &lhs, &rhs);
        assert!(!c.passed);
        assert_eq!(c.detail, "first difference at degree 1");
    }

    #[test]
    fn rational_coefficients_round_trip() {
        let psi = psi_q(5);
        let coeffs: Vec<OmegaRational> = (0..=5).map(|d| psi.coeff(d)).collect();
        assert_eq!(TruncatedSeries::from_coefficients(5, &coeffs).unwrap(), psi);
        let bad = OmegaRational::new(OmegaLaurent::one(), &OmegaLaurent::one() - &w(12)).unwrap();
        assert!(TruncatedSeries::from_coefficients(1, &[OmegaRational::one(), bad]).is_err());
    }

    fn rank2(e: i64) -> DoubleSeed {
        DoubleSeed::new(IntMatrix::from_rows(&[vec![0, e], vec![-e, 0]])).unwrap()
    }

    #[test]
    fn conjugation_examples() {
        let s = rank2(1);
        // X_1 with eps_{1,0} = -1: X_1 (1 + q X_0), tail zero.
        let c = mu_sharp(&s, 0, &s.x(1), 8).unwrap();
        assert!(c.closes());
        let expected = s.x(1).try_mul(&(&TorusElement::one(s.form()) + &s.x(0).shift(4))).unwrap();
        assert_eq!(c.to_element().unwrap(), expected);
        // B_1 commutes with X_0 and X_hat_0.
        let c = mu_sharp(&s, 0, &s.b(1), 8).unwrap();
        assert_eq!(c.to_element().unwrap(), s.b(1));
        // B_0 leaves an infinite tail in X_hat_0.
        let c = mu_sharp(&s, 0, &s.b(0), 8).unwrap();
        assert!(!c.closes());
        assert!(c.to_element().is_err());
        assert!(conjugate(&psi_q(4), &s.x(0), &(&s.x(1) + &s.b(0))).is_err());
    }

    #[test]
    fn chart_double_matches_seed_double() {
        for n in 4..=6 {
            for t in crate::polygon::enumerate_triangulations(n).unwrap() {
                let alg = ChartAlgebras::new(&t).unwrap();
                let s = DoubleSeed::from_chart(&alg).unwrap();
                assert_eq!(s.form().matrix(), alg.d_form.matrix(), "{}", t.chart_spec());
            }
        }
    }

    #[test]
    fn flip_matches_lattice_mutation() {
        for t in crate::polygon::enumerate_triangulations(6).unwrap() {
            let alg = ChartAlgebras::new(&t).unwrap();
            let s = DoubleSeed::from_chart(&alg).unwrap();
            for (kp, &ki) in alg.data.mutable.iter().enumerate() {
                let (t2, perm) = t.flip_at(ki).unwrap();
                let alg2 = ChartAlgebras::new(&t2).unwrap();
                let m = s.mutated(kp);
                for (a, &i) in alg.data.mutable.iter().enumerate() {
                    for (b, &j) in alg.data.mutable.iter().enumerate() {
                        let (i2, j2) = (perm[i], perm[j]);
                        assert_eq!(m.eps().get(a, b), alg2.data.epsilon.get(i2, j2));
                    }
                }
            }
        }
    }

    #[test]
    fn rank_two_identities() {
        for e in -3..=3 {
            let s = rank2(e);
            for k in 0..2 {
                all_pass(&verify_seed(&s, k, 6));
            }
        }
    }

    #[test]
    fn hexagon_fan_identities() {
        let t = crate::polygon::Triangulation::fan(6).unwrap();
        let s = DoubleSeed::from_chart(&ChartAlgebras::new(&t).unwrap()).unwrap();
        for k in 0..s.rank() {
            all_pass(&verify_seed(&s, k, DEFAULT_ORDER));
        }
    }

    #[test]
    fn wrong_closed_forms_fail() {
        let s = rank2(1);
        // B'_0 with the denominator (1 + q X_0) instead of (1 + q^-1 X_0).
        let mut f = transformation_closed_form(&s, 0, 2).unwrap();
        f.den = Some((s.e(0), vec![OmegaLaurent::one(), w(4)]));
        let c = mu_sharp(&s, 0, &s.mu_prime(0, 2), 8).unwrap();
        assert!(cross_multiplied(&c, &f).unwrap().is_err());
        // X'_1 with eps_{1,0} = -1 but the factor (1 + q^3 X_0).
        let f = ClosedForm { num: s.x(1).try_mul(&poly_in(&s, &s.e(0), &[OmegaLaurent::one(), w(12)])).unwrap(), den: None };
        let c = mu_sharp(&s, 0, &s.mu_prime(0, 1), 8).unwrap();
        assert!(cross_multiplied(&c, &f).unwrap().is_err());
        // Order 1 cannot see the degree-1 factor close.
        let f = transformation_closed_form(&s, 0, 1).unwrap();
        let c = mu_sharp(&s, 0, &s.mu_prime(0, 1), 1).unwrap();
        assert!(cross_multiplied(&c, &f).unwrap().is_err());
        let n = verify_seed(&s, 0, 4).len();
        assert_eq!(n, 8 + 6 + 4 + 6 + 6);
    }

    #[test]
    fn transformation_examples() {
        let s = rank2(1);
        // eps_{0,1} = 1: mu(X'_0) = X_0 X_1 (X_1 + q)^{-1}.
        let f = transformation_closed_form(&s, 1, 0).unwrap();
        assert_eq!(f.num, s.x(0).try_mul(&s.x(1)).unwrap());
        assert_eq!(f.den.unwrap().1, vec![w(4), OmegaLaurent::one()]);
        assert_eq!(s.mu_prime(1, 1), s.x(1).inverse().unwrap());
        assert_eq!(s.mu_prime(1, 2), s.b(0));
    }
}
