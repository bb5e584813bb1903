//! Coefficient ring `Z[w, w^-1]` with `q = w^4`, plus its field of fractions.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Laurent polynomial in `w` with integer coefficients.
///
/// Terms are kept sorted by exponent with no zero coefficients, so structural
/// equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct OmegaLaurent {
    terms: Vec<(i32, BigInt)>,
}

impl OmegaLaurent {
    pub fn zero() -> Self {
        OmegaLaurent { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, BigInt::one())
    }

    pub fn monomial(exp: i32, coeff: impl Into<BigInt>) -> Self {
        let c = coeff.into();
        if c.is_zero() {
            Self::zero()
        } else {
            OmegaLaurent { terms: vec![(exp, c)] }
        }
    }

    /// `w^e`.
    pub fn omega_pow(exp: i32) -> Self {
        Self::monomial(exp, 1)
    }

    /// `q^k = w^(4k)`.
    pub fn q_pow(k: i32) -> Self {
        Self::monomial(4 * k, 1)
    }

    pub fn from_int(c: impl Into<BigInt>) -> Self {
        Self::monomial(0, c)
    }

    /// Builds from arbitrary `(exponent, coefficient)` pairs, combining duplicates.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i32, BigInt)>,
    {
        let mut v: Vec<(i32, BigInt)> = terms.into_iter().collect();
        v.sort_by_key(|t| t.0);
        let mut out: Vec<(i32, BigInt)> = Vec::with_capacity(v.len());
        for (e, c) in v {
            match out.last_mut() {
                Some(last) if last.0 == e => last.1 += c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|t| !t.1.is_zero());
        OmegaLaurent { terms: out }
    }

    pub fn terms(&self) -> &[(i32, BigInt)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    pub fn coeff(&self, exp: i32) -> BigInt {
        match self.terms.binary_search_by_key(&exp, |t| t.0) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.first().map(|t| t.0)
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.last().map(|t| t.0)
    }

    /// Returns `(e, c)` if this is the single term `c w^e`.
    pub fn as_monomial(&self) -> Option<(i32, &BigInt)> {
        if self.terms.len() == 1 {
            Some((self.terms[0].0, &self.terms[0].1))
        } else {
            None
        }
    }

    /// True for `±w^e`.
    pub fn is_unit(&self) -> bool {
        matches!(self.as_monomial(), Some((_, c)) if c.abs().is_one())
    }

    /// Multiplies by `w^e`.
    pub fn shift(&self, e: i32) -> Self {
        OmegaLaurent {
            terms: self.terms.iter().map(|(x, c)| (x + e, c.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        OmegaLaurent {
            terms: self.terms.iter().map(|(x, c)| (*x, c * k)).collect(),
        }
    }

    /// Bar involution `w -> w^-1`.
    pub fn bar(&self) -> Self {
        let mut terms: Vec<(i32, BigInt)> =
            self.terms.iter().map(|(e, c)| (-e, c.clone())).collect();
        terms.reverse();
        OmegaLaurent { terms }
    }

    /// Substitutes `w -> w^k` for `k != 0`.
    pub fn substitute_power(&self, k: i32) -> Self {
        assert!(k != 0, "substitution power must be nonzero");
        let mut terms: Vec<(i32, BigInt)> =
            self.terms.iter().map(|(e, c)| (e * k, c.clone())).collect();
        if k < 0 {
            terms.reverse();
        }
        OmegaLaurent { terms }
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.terms.iter().map(|t| &t.1).sum()
    }

    /// Every exponent is divisible by 4, i.e. the element lies in `Z[q, q^-1]`.
    pub fn is_q_laurent(&self) -> bool {
        self.terms.iter().all(|(e, _)| e.rem_euclid(4) == 0)
    }

    /// Nonzero, all coefficients positive and all exponents divisible by 4.
    pub fn is_nonneg_q_laurent(&self) -> bool {
        !self.is_zero() && self.is_q_laurent() && self.terms.iter().all(|(_, c)| c.is_positive())
    }

    pub fn all_coeffs_nonneg(&self) -> bool {
        self.terms.iter().all(|(_, c)| !c.is_negative())
    }

    /// Gcd of coefficients (nonnegative; zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.terms.iter().fold(BigInt::zero(), |g, t| g.gcd(&t.1))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact division, `None` if `other` does not divide `self` in `Z[w^±1]`.
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if let Some((e, c)) = other.as_monomial() {
            let mut terms = Vec::with_capacity(self.terms.len());
            for (x, a) in &self.terms {
                let (qt, r) = a.div_rem(c);
                if !r.is_zero() {
                    return None;
                }
                terms.push((x - e, qt));
            }
            return Some(OmegaLaurent { terms });
        }
        // Dense polynomial long division from the top degree.
        let n0 = self.min_exp().unwrap();
        let d0 = other.min_exp().unwrap();
        let mut rem: Vec<BigInt> = dense(self, n0);
        let den: Vec<BigInt> = dense(other, d0);
        let dl = den.len();
        if rem.len() < dl {
            return None;
        }
        let lead = den[dl - 1].clone();
        let qlen = rem.len() - dl + 1;
        let mut quot = vec![BigInt::zero(); qlen];
        for i in (0..qlen).rev() {
            let top = &rem[i + dl - 1];
            if top.is_zero() {
                continue;
            }
            let (qc, r) = top.div_rem(&lead);
            if !r.is_zero() {
                return None;
            }
            for (j, dc) in den.iter().enumerate() {
                if !dc.is_zero() {
                    rem[i + j] -= &qc * dc;
                }
            }
            quot[i] = qc;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        let shift = n0 - d0;
        Some(Self::from_terms(
            quot.into_iter().enumerate().map(|(i, c)| (i as i32 + shift, c)),
        ))
    }

    /// Renders in `q` when every exponent is divisible by 4, else in `w`.
    pub fn to_q_string(&self) -> String {
        if self.is_q_laurent() {
            render(&self.terms, "q", 4)
        } else {
            render(&self.terms, "w", 1)
        }
    }

    /// Parses the `w`-format produced by `Display`, e.g. `-w^-2+3+2*w^4`.
    pub fn parse(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty coefficient".into()));
        }
        let mut terms = Vec::new();
        let bytes = s.as_bytes();
        let mut start = 0;
        let mut i = 1;
        let mut pieces = Vec::new();
        while i <= bytes.len() {
            if i == bytes.len() || ((bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^') {
                pieces.push(&s[start..i]);
                start = i;
            }
            i += 1;
        }
        for p in pieces {
            let (sign, body) = match p.as_bytes()[0] {
                b'-' => (-1, &p[1..]),
                b'+' => (1, &p[1..]),
                _ => (1, p),
            };
            let (coeff, var) = if let Some(idx) = body.find('w') {
                let c = body[..idx].trim_end_matches('*');
                let c = if c.is_empty() {
                    BigInt::one()
                } else {
                    c.parse::<BigInt>().map_err(|_| Error::Parse(format!("bad coefficient `{p}`")))?
                };
                (c, Some(&body[idx + 1..]))
            } else {
                let c = body.parse::<BigInt>().map_err(|_| Error::Parse(format!("bad term `{p}`")))?;
                (c, None)
            };
            let exp = match var {
                None => 0,
                Some("") => 1,
                Some(rest) => rest
                    .strip_prefix('^')
                    .and_then(|r| r.parse::<i32>().ok())
                    .ok_or_else(|| Error::Parse(format!("bad exponent in `{p}`")))?,
            };
            terms.push((exp, coeff * sign));
        }
        Ok(Self::from_terms(terms))
    }
}

fn dense(p: &OmegaLaurent, shift: i32) -> Vec<BigInt> {
    let len = (p.max_exp().unwrap() - shift + 1) as usize;
    let mut v = vec![BigInt::zero(); len];
    for (e, c) in &p.terms {
        v[(e - shift) as usize] = c.clone();
    }
    v
}

fn render(terms: &[(i32, BigInt)], var: &str, step: i32) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (e, c)) in terms.iter().enumerate() {
        let e = e / step;
        let neg = c.is_negative();
        let a = c.abs();
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push(if neg { '-' } else { '+' });
        }
        if e == 0 {
            out.push_str(&a.to_string());
        } else {
            if !a.is_one() {
                out.push_str(&a.to_string());
                out.push('*');
            }
            out.push_str(var);
            if e != 1 {
                out.push('^');
                out.push_str(&e.to_string());
            }
        }
    }
    out
}

impl fmt::Display for OmegaLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(&self.terms, "w", 1))
    }
}

impl fmt::Debug for OmegaLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OmegaLaurent({self})")
    }
}

impl PartialOrd for OmegaLaurent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OmegaLaurent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.terms.cmp(&other.terms)
    }
}

fn merge_add(a: &[(i32, BigInt)], b: &[(i32, BigInt)], negate_b: bool) -> OmegaLaurent {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            let c = if negate_b { -&b[j].1 } else { b[j].1.clone() };
            out.push((b[j].0, c));
            j += 1;
        } else {
            let c = if negate_b { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
            if !c.is_zero() {
                out.push((a[i].0, c));
            }
            i += 1;
            j += 1;
        }
    }
    OmegaLaurent { terms: out }
}

impl Add<&OmegaLaurent> for &OmegaLaurent {
    type Output = OmegaLaurent;
    fn add(self, rhs: &OmegaLaurent) -> OmegaLaurent {
        merge_add(&self.terms, &rhs.terms, false)
    }
}

impl Sub<&OmegaLaurent> for &OmegaLaurent {
    type Output = OmegaLaurent;
    fn sub(self, rhs: &OmegaLaurent) -> OmegaLaurent {
        merge_add(&self.terms, &rhs.terms, true)
    }
}

impl Mul<&OmegaLaurent> for &OmegaLaurent {
    type Output = OmegaLaurent;
    fn mul(self, rhs: &OmegaLaurent) -> OmegaLaurent {
        if self.is_zero() || rhs.is_zero() {
            return OmegaLaurent::zero();
        }
        if let Some((e, c)) = rhs.as_monomial() {
            return self.scale(c).shift(e);
        }
        if let Some((e, c)) = self.as_monomial() {
            return rhs.scale(c).shift(e);
        }
        let lo = self.min_exp().unwrap() + rhs.min_exp().unwrap();
        let hi = self.max_exp().unwrap() + rhs.max_exp().unwrap();
        let mut acc = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                acc[(ea + eb - lo) as usize] += ca * cb;
            }
        }
        OmegaLaurent::from_terms(acc.into_iter().enumerate().map(|(i, c)| (i as i32 + lo, c)))
    }
}

impl Neg for &OmegaLaurent {
    type Output = OmegaLaurent;
    fn neg(self) -> OmegaLaurent {
        OmegaLaurent {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for OmegaLaurent {
    type Output = OmegaLaurent;
    fn neg(self) -> OmegaLaurent {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident, $t:ty) => {
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&$t> for $t {
            type Output = $t;
            fn $m(self, rhs: &$t) -> $t {
                (&self).$m(rhs)
            }
        }
        impl $tr<$t> for &$t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add, OmegaLaurent);
forward_owned!(Sub, sub, OmegaLaurent);
forward_owned!(Mul, mul, OmegaLaurent);

impl AddAssign<&OmegaLaurent> for OmegaLaurent {
    fn add_assign(&mut self, rhs: &OmegaLaurent) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&OmegaLaurent> for OmegaLaurent {
    fn sub_assign(&mut self, rhs: &OmegaLaurent) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&OmegaLaurent> for OmegaLaurent {
    fn mul_assign(&mut self, rhs: &OmegaLaurent) {
        *self = &*self * rhs;
    }
}

impl From<i64> for OmegaLaurent {
    fn from(c: i64) -> Self {
        OmegaLaurent::from_int(c)
    }
}

/// Element of the fraction field `Q(w)`, stored as numerator and denominator.
#[derive(Clone)]
pub struct OmegaRational {
    num: OmegaLaurent,
    den: OmegaLaurent,
}

impl OmegaRational {
    pub fn new(num: OmegaLaurent, den: OmegaLaurent) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut r = OmegaRational { num, den };
        r.simplify();
        Ok(r)
    }

    pub fn from_laurent(p: OmegaLaurent) -> Self {
        OmegaRational { num: p, den: OmegaLaurent::one() }
    }

    pub fn zero() -> Self {
        Self::from_laurent(OmegaLaurent::zero())
    }

    pub fn one() -> Self {
        Self::from_laurent(OmegaLaurent::one())
    }

    pub fn num(&self) -> &OmegaLaurent {
        &self.num
    }

    pub fn den(&self) -> &OmegaLaurent {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Removes common content, monomial factors and divides out the
    /// denominator entirely when it divides the numerator.
    pub fn simplify(&mut self) {
        if self.num.is_zero() {
            self.den = OmegaLaurent::one();
            return;
        }
        if let Some(q) = self.num.div_exact(&self.den) {
            self.num = q;
            self.den = OmegaLaurent::one();
            return;
        }
        let g = self.num.content().gcd(&self.den.content());
        let mut g = g;
        let lead = &self.den.terms.last().unwrap().1;
        if lead.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            self.num = self.num.div_exact(&OmegaLaurent::from_int(g.clone())).unwrap();
            self.den = self.den.div_exact(&OmegaLaurent::from_int(g)).unwrap();
        }
        let shift = self.den.min_exp().unwrap();
        self.num = self.num.shift(-shift);
        self.den = self.den.shift(-shift);
    }

    pub fn to_laurent(&self) -> Option<OmegaLaurent> {
        self.num.div_exact(&self.den)
    }

    pub fn bar(&self) -> Self {
        OmegaRational { num: self.num.bar(), den: self.den.bar() }
    }

    pub fn inverse(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn substitute_power(&self, k: i32) -> Self {
        OmegaRational { num: self.num.substitute_power(k), den: self.den.substitute_power(k) }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            let mut r = OmegaRational { num: &self.num + &other.num, den: self.den.clone() };
            r.simplify();
            return r;
        }
        let mut r = OmegaRational {
            num: &(&self.num * &other.den) + &(&other.num * &self.den),
            den: &self.den * &other.den,
        };
        r.simplify();
        r
    }

    pub fn neg(&self) -> Self {
        OmegaRational { num: -&self.num, den: self.den.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut r = OmegaRational { num: &self.num * &other.num, den: &self.den * &other.den };
        r.simplify();
        r
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inverse()?))
    }
}

impl PartialEq for OmegaRational {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for OmegaRational {}

impl fmt::Display for OmegaRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for OmegaRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OmegaRational({self})")
    }
}

/// Quantum binomial in a variable `t`, returned as a Laurent polynomial in `t`
/// (the variable slot of `OmegaLaurent` stands for `t`).
///
/// `binom(r, p)_t = prod_{s=0}^{p-1} (t^{r-s} - t^{-(r-s)}) / prod_{s=1}^{p} (t^s - t^{-s})`.
pub fn t_binomial(r: i64, p: i64) -> Result<OmegaLaurent> {
    if p < 0 {
        return Err(Error::InvalidInput(format!("binomial lower index {p} is negative")));
    }
    let mut num = OmegaLaurent::one();
    let mut den = OmegaLaurent::one();
    for s in 0..p {
        let e = (r - s) as i32;
        num = &num * &(&OmegaLaurent::omega_pow(e) - &OmegaLaurent::omega_pow(-e));
        let e = (s + 1) as i32;
        den = &den * &(&OmegaLaurent::omega_pow(e) - &OmegaLaurent::omega_pow(-e));
    }
    num.div_exact(&den)
        .ok_or_else(|| Error::NotExact(format!("quantum binomial ({r} choose {p}) did not divide")))
}

/// Same as [`t_binomial`] but wrapped as a rational.
pub fn t_binomial_rational(r: i64, p: i64) -> Result<OmegaRational> {
    Ok(OmegaRational::from_laurent(t_binomial(r, p)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(e: i32) -> OmegaLaurent {
        OmegaLaurent::omega_pow(e)
    }

    #[test]
    fn display_and_parse_round_trip() {
        let p = OmegaLaurent::from_terms(vec![(-2, BigInt::from(-1)), (0, BigInt::from(3)), (4, BigInt::from(2))]);
        assert_eq!(p.to_string(), "-w^-2+3+2*w^4");
        assert_eq!(OmegaLaurent::parse(&p.to_string()).unwrap(), p);
        assert_eq!(OmegaLaurent::zero().to_string(), "0");
        assert_eq!((w(4) + w(-8)).to_q_string(), "q^-2+q");
    }

    #[test]
    fn exact_division() {
        let a = &(w(1) + w(-1)) * &(w(3) - OmegaLaurent::from_int(2));
        assert_eq!(a.div_exact(&(w(1) + w(-1))).unwrap(), w(3) - OmegaLaurent::from_int(2));
        assert!(w(2).div_exact(&(w(1) + OmegaLaurent::one())).is_none());
        assert!(OmegaLaurent::from_int(3).div_exact(&OmegaLaurent::from_int(2)).is_none());
    }

    #[test]
    fn binomial_small_values() {
        // (2 choose 1)_t = t + t^-1
        assert_eq!(t_binomial(2, 1).unwrap(), w(1) + w(-1));
        // (3 choose 1)_t = t^2 + 1 + t^-2
        assert_eq!(t_binomial(3, 1).unwrap(), w(2) + OmegaLaurent::one() + w(-2));
        assert_eq!(t_binomial(3, 3).unwrap(), OmegaLaurent::one());
        assert!(t_binomial(2, 3).unwrap().is_zero());
    }

    #[test]
    fn rational_equality_cross_multiplies() {
        let a = OmegaRational::new(w(2) - OmegaLaurent::one(), w(1) - OmegaLaurent::one()).unwrap();
        let b = OmegaRational::from_laurent(w(1) + OmegaLaurent::one());
        assert_eq!(a, b);
        assert_eq!(a.to_laurent().unwrap(), w(1) + OmegaLaurent::one());
    }
}
