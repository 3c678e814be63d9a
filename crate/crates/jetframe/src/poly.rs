//! Exact sparse multivariate polynomial arithmetic over `Q`, plus the
//! degree and pole-order functionals.
//!
//! All values are immutable after construction and every operation is a
//! pure function, so polynomials can be shared and evaluated in parallel
//! freely.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::var::{Monomial, VarId};

/// Exact rational coefficient. `num_rational` keeps the invariants we
/// need: always reduced, positive denominator, canonical zero.
pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// Sparse polynomial: finite map monomial -> nonzero coefficient.
///
/// The `BTreeMap` keeps term order deterministic, which makes printed and
/// serialised forms canonical for free.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn var(v: VarId) -> Self {
        Poly::term(Monomial::var(v), Rat::one())
    }

    pub fn var_pow(v: VarId, e: u32) -> Self {
        if e == 0 {
            return Poly::one();
        }
        Poly::term(Monomial::from_pairs([(v, e)]), Rat::one())
    }

    pub fn term(m: Monomial, c: Rat) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Monomial `z^alpha` of component-variables `z_1..z_n`.
    pub fn z_monomial(alpha: &[u32]) -> Self {
        let mono = Monomial::from_pairs(
            alpha
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(i, e)| (VarId::z(i as u32 + 1), *e)),
        );
        Poly::term(mono, Rat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a * c))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(mm, a)| (mm.mul(m), a * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Formal partial derivative; linear and Leibniz by construction.
    pub fn partial(&self, v: &VarId) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e > 0 {
                let reduced = m.div_var(v, 1).expect("exponent checked");
                out.add_term(reduced, c * rat_int(e as i64));
            }
        }
        out
    }

    /// Exact evaluation; every variable occurring in `self` must be assigned.
    pub fn eval(&self, point: &BTreeMap<VarId, Rat>) -> Result<Rat> {
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut val = c.clone();
            for (v, e) in &m.0 {
                let x = point
                    .get(v)
                    .ok_or_else(|| Error::UnassignedVariable(v.clone()))?;
                for _ in 0..*e {
                    val *= x;
                }
            }
            acc += val;
        }
        Ok(acc)
    }

    /// Divide exactly by the single variable `v`; `None` if some monomial
    /// lacks it.
    pub fn div_var(&self, v: &VarId) -> Option<Poly> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            terms.insert(m.div_var(v, 1)?, c.clone());
        }
        Some(Poly { terms })
    }

    /// Max total degree in the listed variables (0 for the zero polynomial).
    pub fn degree_in<F: Fn(&VarId) -> bool>(&self, sel: F) -> u32 {
        self.terms
            .keys()
            .map(|m| m.0.iter().filter(|(v, _)| sel(v)).map(|(_, e)| e).sum())
            .max()
            .unwrap_or(0)
    }

    /// Pole order of the meromorphic extension: per monomial the z-degree
    /// plus weight `p + 1` for each jet factor of order `p` (and the
    /// analogous weights for the straightening variables); max over
    /// monomials. Geometric coordinates are rejected.
    pub fn pole_order(&self) -> Result<u32> {
        let mut best = 0;
        for m in self.terms.keys() {
            let mut po = 0;
            for (v, e) in &m.0 {
                po += v.pole_weight()? * e;
            }
            best = best.max(po);
        }
        Ok(best)
    }

    /// Max total degree in the moduli parameters `a_alpha`.
    pub fn a_degree(&self) -> u32 {
        self.degree_in(VarId::is_param)
    }

    /// Substitute variables by `FracPoly` images; unmapped variables stay.
    pub fn substitute(&self, map: &BTreeMap<VarId, FracPoly>) -> FracPoly {
        let mut acc = FracPoly::zero();
        for (m, c) in &self.terms {
            let mut term = FracPoly::from(Poly::constant(c.clone()));
            for (v, e) in &m.0 {
                match map.get(v) {
                    Some(image) => {
                        for _ in 0..*e {
                            term = term.mul(image);
                        }
                    }
                    None => {
                        term = term.mul(&FracPoly::from(Poly::var_pow(v.clone(), *e)));
                    }
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    pub fn vars(&self) -> impl Iterator<Item = &VarId> {
        self.terms.keys().flat_map(|m| m.vars())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rat::one())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                if m.is_one() {
                    format!("{c}")
                } else {
                    format!("{c} * {m}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Poly {
    /// Parse the canonical text form produced by `Display`.
    pub fn parse(s: &str) -> Result<Poly> {
        let s = s.trim();
        if s == "0" {
            return Ok(Poly::zero());
        }
        let mut out = Poly::zero();
        for chunk in s.split(" + ") {
            let mut coef: Option<Rat> = None;
            let mut mono = Monomial::one();
            for factor in chunk.split(" * ") {
                let factor = factor.trim();
                if coef.is_none() {
                    coef = Some(
                        factor
                            .parse::<Rat>()
                            .map_err(|_| Error::Parse(format!("bad coefficient `{factor}`")))?,
                    );
                    continue;
                }
                let (name, exp) = match factor.rfind('^') {
                    // careful: `^` is also part of jet variable names like z1^(2)
                    Some(idx)
                        if factor[idx + 1..].chars().all(|c| c.is_ascii_digit())
                            && !factor[idx + 1..].is_empty() =>
                    {
                        (&factor[..idx], factor[idx + 1..].parse::<u32>().unwrap())
                    }
                    _ => (factor, 1),
                };
                mono = mono.mul_var(&VarId::parse(name)?, exp);
            }
            let c = coef.ok_or_else(|| Error::Parse("empty term".into()))?;
            out.add_term(mono, c);
        }
        Ok(out)
    }
}

/// JSON form: list of `{exponents: [[varid, e], ...], coef: "p/q"}` in
/// canonical term order.
#[derive(Serialize, Deserialize)]
struct JsonTerm {
    exponents: Vec<(VarId, u32)>,
    coef: String,
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let items: Vec<JsonTerm> = self
            .terms
            .iter()
            .map(|(m, c)| JsonTerm {
                exponents: m.0.clone(),
                coef: c.to_string(),
            })
            .collect();
        items.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let items = Vec::<JsonTerm>::deserialize(de)?;
        let mut out = Poly::zero();
        for item in items {
            let c: Rat = item
                .coef
                .parse()
                .map_err(|_| D::Error::custom(format!("bad rational `{}`", item.coef)))?;
            out.add_term(Monomial::from_pairs(item.exponents), c);
        }
        Ok(out)
    }
}

/// Polynomial divided by a power of `z_1' = z1^(1)` — the single
/// denominator the chain rule introduces.
///
/// Normal form: when `epow > 0`, `z_1'` does not divide the numerator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FracPoly {
    pub num: Poly,
    pub epow: u32,
}

/// The distinguished chart variable `z_1^(1)`.
pub fn z1p() -> VarId {
    VarId::jet(1, 1)
}

impl From<Poly> for FracPoly {
    fn from(num: Poly) -> Self {
        FracPoly { num, epow: 0 }
    }
}

impl FracPoly {
    pub fn zero() -> Self {
        FracPoly::from(Poly::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn normalize(mut self) -> Self {
        if self.num.is_zero() {
            self.epow = 0;
            return self;
        }
        while self.epow > 0 {
            match self.num.div_var(&z1p()) {
                Some(reduced) => {
                    self.num = reduced;
                    self.epow -= 1;
                }
                None => break,
            }
        }
        self
    }

    pub fn add(&self, rhs: &FracPoly) -> FracPoly {
        let e = self.epow.max(rhs.epow);
        let lift = |f: &FracPoly| -> Poly {
            let m = Monomial::from_pairs([(z1p(), e - f.epow)].into_iter().filter(|(_, k)| *k > 0));
            f.num.mul_monomial(&m, &Rat::one())
        };
        FracPoly {
            num: &lift(self) + &lift(rhs),
            epow: e,
        }
        .normalize()
    }

    pub fn sub(&self, rhs: &FracPoly) -> FracPoly {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> FracPoly {
        FracPoly {
            num: -&self.num,
            epow: self.epow,
        }
    }

    pub fn mul(&self, rhs: &FracPoly) -> FracPoly {
        FracPoly {
            num: &self.num * &rhs.num,
            epow: self.epow + rhs.epow,
        }
        .normalize()
    }

    pub fn scale(&self, c: &Rat) -> FracPoly {
        FracPoly {
            num: self.num.scale(c),
            epow: self.epow,
        }
        .normalize()
    }

    /// Divide by `z_1'^e` (only bumps the tracked denominator).
    pub fn div_z1p(&self, e: u32) -> FracPoly {
        FracPoly {
            num: self.num.clone(),
            epow: self.epow + e,
        }
        .normalize()
    }

    /// Partial derivative with the quotient rule on the tracked denominator.
    pub fn partial(&self, v: &VarId) -> FracPoly {
        if self.epow == 0 {
            return FracPoly::from(self.num.partial(v));
        }
        let dn = self.num.partial(v);
        let mut num = dn.mul_monomial(&Monomial::var(z1p()), &Rat::one());
        if *v == z1p() {
            num = &num - &self.num.scale(&rat_int(self.epow as i64));
        }
        FracPoly {
            num,
            epow: self.epow + 1,
        }
        .normalize()
    }

    pub fn eval(&self, point: &BTreeMap<VarId, Rat>) -> Result<Rat> {
        let n = self.num.eval(point)?;
        if self.epow == 0 {
            return Ok(n);
        }
        let d = point
            .get(&z1p())
            .ok_or_else(|| Error::UnassignedVariable(z1p()))?;
        let mut den = Rat::one();
        for _ in 0..self.epow {
            den *= d;
        }
        Ok(n / den)
    }

    pub fn substitute(&self, map: &BTreeMap<VarId, FracPoly>) -> FracPoly {
        let image = self.num.substitute(map);
        if self.epow == 0 {
            return image;
        }
        // the substitution maps used here never touch z_1'
        debug_assert!(!map.contains_key(&z1p()));
        image.div_z1p(self.epow)
    }
}

impl fmt::Display for FracPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.epow == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / {}^{}", self.num, z1p(), self.epow)
        }
    }
}

/// Binomial coefficient as an exact rational.
pub fn binomial(n: u32, k: u32) -> Rat {
    if k > n {
        return Rat::zero();
    }
    let mut out = Rat::one();
    for i in 0..k {
        out *= rat_int((n - i) as i64) / rat_int((i + 1) as i64);
    }
    out
}

/// Exact factorial.
pub fn factorial(n: u32) -> Rat {
    let mut out = Rat::one();
    for i in 1..=n {
        out *= rat_int(i as i64);
    }
    out
}

/// Multi-index factorial `mu! = mu_1! ... mu_k!`.
pub fn mi_factorial(mu: &[u32]) -> Rat {
    mu.iter().map(|&m| factorial(m)).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(i: u32) -> Poly {
        Poly::var(VarId::z(i))
    }

    #[test]
    fn additive_inverse() {
        // (z1 + 1) + (-1) = z1
        let p = &(&z(1) + &Poly::one()) + &Poly::constant(-Rat::one());
        assert_eq!(p, z(1));
    }

    #[test]
    fn frac_normalization() {
        // z1' * z2 / z1' = z2 with epow 0
        let num = &Poly::var(z1p()) * &z(2);
        let f = FracPoly { num, epow: 1 }.normalize();
        assert_eq!(f, FracPoly::from(z(2)));
        assert_eq!(f.epow, 0);
    }

    #[test]
    fn monomial_product_of_params() {
        let a10 = Poly::var(VarId::param(1, vec![1, 0]));
        let a01 = Poly::var(VarId::param(1, vec![0, 1]));
        let p = &(&a10 * &z(1)) * &(&a01 * &z(2));
        assert_eq!(p.num_terms(), 1);
        assert_eq!(p.a_degree(), 2);
    }

    #[test]
    fn partial_examples() {
        // d/dz1 (z1^2 z2) = 2 z1 z2
        let p = &(&z(1) * &z(1)) * &z(2);
        assert_eq!(p.partial(&VarId::z(1)), (&z(1) * &z(2)).scale(&rat_int(2)));
        // d/da20 (a20 z1^2) = z1^2
        let a20 = VarId::param(1, vec![2, 0]);
        let q = &Poly::var(a20.clone()) * &(&z(1) * &z(1));
        assert_eq!(q.partial(&a20), &z(1) * &z(1));
        // d/dz2^(3) z2^(3) = 1
        assert_eq!(
            Poly::var(VarId::jet(2, 3)).partial(&VarId::jet(2, 3)),
            Poly::one()
        );
    }

    #[test]
    fn eval_examples() {
        let mut point = BTreeMap::new();
        point.insert(VarId::z(1), rat_int(2));
        point.insert(VarId::z(2), rat_int(3));
        let p = &(&z(1) * &z(1)) + &z(2);
        assert_eq!(p.eval(&point).unwrap(), rat_int(7));
        assert_eq!(Poly::zero().eval(&BTreeMap::new()).unwrap(), Rat::zero());
    }

    #[test]
    fn pole_order_examples() {
        // p.o.(z1' * z1'') = 2 + 3 = 5
        let m = &Poly::var(VarId::jet(1, 1)) * &Poly::var(VarId::jet(1, 2));
        assert_eq!(m.pole_order().unwrap(), 5);
        assert_eq!(Poly::one().pole_order().unwrap(), 0);
        assert!(Poly::var(VarId::tjet(1)).pole_order().is_err());
    }

    #[test]
    fn display_and_parse_round_trip() {
        let p = &(&z(1).scale(&rat(1, 2)) * &Poly::var(VarId::jet(2, 1))) + &Poly::constant(rat(-3, 1));
        let text = p.to_string();
        assert_eq!(Poly::parse(&text).unwrap(), p);
        let json = serde_json::to_string(&p).unwrap();
        let back: Poly = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }
}
