//! Truncated power series over `Q`: the independent oracle.
//!
//! A jet is the truncated Taylor expansion of a curve, so exact series
//! arithmetic (product, composition, reversion) gives a way to check the
//! symbolic constructions against honest calculus on honest curves. The
//! code here deliberately shares nothing with the polynomial layer beyond
//! the `Rat` scalar type.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{rat_int, Poly, Rat};
use crate::var::VarId;

/// Truncated series `c_0 + c_1 t + ... + c_k t^k`; `coeffs.len() == k + 1`.
/// Serialises as the plain coefficient list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TruncSeries {
    pub coeffs: Vec<Rat>,
}

impl TruncSeries {
    pub fn new(coeffs: Vec<Rat>) -> Self {
        TruncSeries { coeffs }
    }

    pub fn zero(k: usize) -> Self {
        TruncSeries::new(vec![Rat::zero(); k + 1])
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add(&self, other: &TruncSeries) -> TruncSeries {
        let k = self.order().min(other.order());
        TruncSeries::new((0..=k).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn scale(&self, c: &Rat) -> TruncSeries {
        TruncSeries::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &TruncSeries) -> TruncSeries {
        let k = self.order().min(other.order());
        let mut out = vec![Rat::zero(); k + 1];
        for i in 0..=k {
            for j in 0..=(k - i) {
                let term = self.coeff(i) * other.coeff(j);
                out[i + j] += term;
            }
        }
        TruncSeries::new(out)
    }

    pub fn pow(&self, e: u32, k: usize) -> TruncSeries {
        let mut out = TruncSeries::constant(Rat::one(), k);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn constant(c: Rat, k: usize) -> TruncSeries {
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[0] = c;
        TruncSeries::new(coeffs)
    }

    /// Derivative `d/dt`, truncated (the top coefficient is lost).
    pub fn derivative(&self) -> TruncSeries {
        let k = self.order();
        let mut out = vec![Rat::zero(); k + 1];
        for i in 1..=k {
            out[i - 1] = self.coeff(i) * rat_int(i as i64);
        }
        TruncSeries::new(out)
    }

    /// Composition `self(inner)`; requires `inner(0) = 0`.
    pub fn compose(&self, inner: &TruncSeries) -> TruncSeries {
        assert!(
            inner.coeff(0).is_zero(),
            "composition requires inner constant term 0"
        );
        let k = self.order().min(inner.order());
        let mut out = TruncSeries::constant(self.coeff(0), k);
        let mut power = TruncSeries::constant(Rat::one(), k);
        for i in 1..=k {
            power = power.mul(inner);
            out = out.add(&power.scale(&self.coeff(i)));
        }
        out
    }

    /// Compositional inverse: `h` with `h(0) = 0`, `h'(0) != 0`; returns
    /// `g` with `g(h(t)) = t` up to the truncation order.
    pub fn reversion(&self) -> Result<TruncSeries> {
        if !self.coeff(0).is_zero() || self.coeff(1).is_zero() {
            return Err(Error::Config(
                "reversion needs h(0) = 0 and h'(0) != 0".into(),
            ));
        }
        let k = self.order();
        let mut g = TruncSeries::zero(k);
        g.coeffs[1] = Rat::one() / self.coeff(1);
        // Newton-free coefficient-by-coefficient solve of g(h(t)) = t.
        for m in 2..=k {
            let current = g.compose(self);
            let residue = current.coeff(m);
            // raising g_m changes coefficient m by h_1^m
            let h1m = self.coeff(1).pow(m as i32);
            g.coeffs[m] -= residue / h1m;
        }
        debug_assert!({
            let check = g.compose(self);
            (0..=k).all(|i| check.coeff(i) == if i == 1 { Rat::one() } else { Rat::zero() })
        });
        Ok(g)
    }
}

/// A rational curve germ in the ambient space: one truncated series per
/// affine coordinate (plus one per straightening coordinate in the log
/// case), all to the same order `k`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TruncCurve {
    pub z: Vec<TruncSeries>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub w: Vec<TruncSeries>,
}

impl TruncCurve {
    pub fn order(&self) -> usize {
        self.z[0].order()
    }

    /// Jet of the curve at `t = 0`: Taylor coefficients as variable values
    /// (`z_i^(p)` is a Taylor coefficient, not a derivative).
    pub fn jet(&self) -> BTreeMap<VarId, Rat> {
        let k = self.order();
        let mut point = BTreeMap::new();
        for (idx, f) in self.z.iter().enumerate() {
            let i = idx as u32 + 1;
            point.insert(VarId::z(i), f.coeff(0));
            for p in 1..=k {
                point.insert(VarId::jet(i, p as u32), f.coeff(p));
            }
        }
        for (idx, g) in self.w.iter().enumerate() {
            let j = idx as u32 + 1;
            point.insert(VarId::w(j), g.coeff(0));
        }
        point
    }

    /// Full chart assignment of the jet: standard coordinates plus, when
    /// straightening coordinates are present, their geometric jets
    /// (which require `f_1'(0) != 0`).
    pub fn full_jet(&self) -> Result<BTreeMap<VarId, Rat>> {
        let mut point = self.jet();
        if !self.w.is_empty() {
            for (v, val) in self.geo_jet()? {
                if matches!(v, VarId::WJet { .. }) {
                    point.insert(v, val);
                }
            }
        }
        Ok(point)
    }

    /// Geometric jet values `z_i^[p]`, `t^[p]` (and `w_j^[p]`) obtained by
    /// exact reparametrisation of the curve by its first coordinate.
    pub fn geo_jet(&self) -> Result<BTreeMap<VarId, Rat>> {
        let k = self.order();
        let f1 = &self.z[0];
        if f1.coeff(1).is_zero() {
            return Err(Error::Config(
                "geometric jets need f_1'(0) != 0 (non invertible curve)".into(),
            ));
        }
        // h(t) = f1(t) - f1(0), then u -> h^{-1}(u)
        let mut h = f1.clone();
        h.coeffs[0] = Rat::zero();
        let hinv = h.reversion()?;
        let mut out = BTreeMap::new();
        for p in 1..=k {
            out.insert(VarId::tjet(p as u32), hinv.coeff(p));
        }
        for (idx, f) in self.z.iter().enumerate().skip(1) {
            let i = idx as u32 + 1;
            let reparam = f.compose(&hinv);
            for p in 1..=k {
                out.insert(VarId::geo(i, p as u32), reparam.coeff(p));
            }
        }
        for (idx, g) in self.w.iter().enumerate() {
            let j = idx as u32 + 1;
            let reparam = g.compose(&hinv);
            for p in 1..=k {
                out.insert(VarId::wjet(j, p as u32), reparam.coeff(p));
            }
        }
        Ok(out)
    }

    /// Substitute the curve into a polynomial in `z` (and `w`) variables,
    /// with the moduli values supplied separately: the result is the
    /// truncated series of `P` along the curve.
    pub fn substitute_into(
        &self,
        p: &Poly,
        params: &BTreeMap<VarId, Rat>,
    ) -> Result<TruncSeries> {
        let k = self.order();
        let mut acc = TruncSeries::zero(k);
        for (m, c) in p.terms() {
            let mut factor = TruncSeries::constant(c.clone(), k);
            for (v, e) in &m.0 {
                let series = match v {
                    VarId::Z { i } => self.z[(*i - 1) as usize].clone(),
                    VarId::W { j } => self.w[(*j - 1) as usize].clone(),
                    VarId::Param { .. } => TruncSeries::constant(
                        params
                            .get(v)
                            .cloned()
                            .ok_or_else(|| Error::UnassignedVariable(v.clone()))?,
                        k,
                    ),
                    other => {
                        return Err(Error::Config(format!(
                            "curve substitution only handles base and moduli variables, got {other}"
                        )))
                    }
                };
                factor = factor.mul(&series.pow(*e, k));
            }
            acc = acc.add(&factor);
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn s(coeffs: &[i64]) -> TruncSeries {
        TruncSeries::new(coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    #[test]
    fn mul_truncates() {
        // (1 + t)(1 - t) = 1 - t^2
        let p = s(&[1, 1, 0]).mul(&s(&[1, -1, 0]));
        assert_eq!(p, s(&[1, 0, -1]));
    }

    #[test]
    fn compose_and_revert() {
        // h = t + t^2 + t^3; h^{-1} = t - t^2 + t^3 ... check identity
        let h = s(&[0, 1, 1, 1]);
        let g = h.reversion().unwrap();
        let id = g.compose(&h);
        assert_eq!(id, s(&[0, 1, 0, 0]));
        let id2 = h.compose(&g);
        assert_eq!(id2, s(&[0, 1, 0, 0]));
    }

    #[test]
    fn reversion_rejects_stationary() {
        assert!(s(&[0, 0, 1]).reversion().is_err());
        assert!(s(&[1, 1]).reversion().is_err());
    }

    #[test]
    fn jet_of_parabola() {
        // f = (t, t^2), k = 2
        let curve = TruncCurve {
            z: vec![s(&[0, 1, 0]), s(&[0, 0, 1])],
            w: vec![],
        };
        let jet = curve.jet();
        assert_eq!(jet[&VarId::jet(1, 1)], rat_int(1));
        assert_eq!(jet[&VarId::jet(1, 2)], rat_int(0));
        assert_eq!(jet[&VarId::jet(2, 1)], rat_int(0));
        assert_eq!(jet[&VarId::jet(2, 2)], rat_int(1));
        // geometric: z2^[1] = 0, z2^[2] = 1 (f1 = t is its own inverse)
        let geo = curve.geo_jet().unwrap();
        assert_eq!(geo[&VarId::geo(2, 1)], rat_int(0));
        assert_eq!(geo[&VarId::geo(2, 2)], rat_int(1));
        assert_eq!(geo[&VarId::tjet(1)], rat_int(1));
        assert_eq!(geo[&VarId::tjet(2)], rat_int(0));
    }

    #[test]
    fn reversion_nontrivial_slope() {
        let h = TruncSeries::new(vec![rat_int(0), rat(1, 2), rat_int(3), rat(-2, 5)]);
        let g = h.reversion().unwrap();
        let id = g.compose(&h);
        assert_eq!(id, s(&[0, 1, 0, 0]));
    }
}
