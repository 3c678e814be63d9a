//! The structured variable universe and monomials over it.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Multi-index `alpha` over the affine coordinates `z_1..z_n`.
///
/// The homogenising slot `alpha_0` is never stored; a parameter `a_alpha`
/// is indexed by the reduced multi-index only.
pub type MultiIndex = Vec<u32>;

/// Sum of the entries, `|alpha|`.
pub fn mi_len(alpha: &[u32]) -> u32 {
    alpha.iter().sum()
}

/// Componentwise `gamma <= beta`.
pub fn mi_le(gamma: &[u32], beta: &[u32]) -> bool {
    gamma.len() == beta.len() && gamma.iter().zip(beta).all(|(g, b)| g <= b)
}

/// Componentwise difference `beta - gamma`; caller guarantees `gamma <= beta`.
pub fn mi_sub(beta: &[u32], gamma: &[u32]) -> MultiIndex {
    beta.iter().zip(gamma).map(|(b, g)| b - g).collect()
}

/// `beta + m * 1_j` with `j` one-based.
pub fn mi_bump(beta: &[u32], j: u32, m: u32) -> MultiIndex {
    let mut out = beta.to_vec();
    out[(j - 1) as usize] += m;
    out
}

/// All multi-indices of length `n` with `|alpha| <= max_len`, in
/// lexicographic order.
pub fn enumerate_upto(n: usize, max_len: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    loop {
        if mi_len(&cur) <= max_len {
            out.push(cur.clone());
        }
        // odometer with per-position cap max_len
        let mut i = n;
        loop {
            if i == 0 {
                out.sort();
                return out;
            }
            i -= 1;
            if cur[i] < max_len {
                cur[i] += 1;
                for slot in cur.iter_mut().skip(i + 1) {
                    *slot = 0;
                }
                break;
            }
        }
    }
}

/// All multi-indices of length `n` with `|alpha| = len` exactly.
pub fn enumerate_exact(n: usize, len: u32) -> Vec<MultiIndex> {
    enumerate_upto(n, len)
        .into_iter()
        .filter(|a| mi_len(a) == len)
        .collect()
}

/// One symbol of the ambient jet space.
///
/// The declaration order of the variants *is* the canonical variable order
/// used for printing and serialisation:
/// `Z < Jet < GeoJet < TJet < Param < W < LogWJet < WJet`,
/// then lexicographic in the indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum VarId {
    /// Affine coordinate `z_i`, `i = 1..n`.
    Z { i: u32 },
    /// Standard jet coordinate `z_i^(p)`, `p = 1..k`.
    Jet { i: u32, p: u32 },
    /// Geometric jet coordinate `z_i^[p]`, `i = 2..n`.
    GeoJet { i: u32, p: u32 },
    /// Geometric jet coordinate `t^[p]` of the inverted first coordinate.
    TJet { p: u32 },
    /// Moduli coordinate `a_alpha` of component `j` (one-based).
    Param { j: u32, alpha: MultiIndex },
    /// Auxiliary straightening coordinate `w_j` (logarithmic case).
    W { j: u32 },
    /// Logarithmic jet coordinate `(log w_j)^[p]`.
    LogWJet { j: u32, p: u32 },
    /// Geometric jet coordinate `w_j^[p]` of the straightening direction.
    WJet { j: u32, p: u32 },
}

impl VarId {
    pub fn z(i: u32) -> Self {
        VarId::Z { i }
    }
    pub fn jet(i: u32, p: u32) -> Self {
        VarId::Jet { i, p }
    }
    pub fn geo(i: u32, p: u32) -> Self {
        VarId::GeoJet { i, p }
    }
    pub fn tjet(p: u32) -> Self {
        VarId::TJet { p }
    }
    pub fn param(j: u32, alpha: MultiIndex) -> Self {
        VarId::Param { j, alpha }
    }
    pub fn w(j: u32) -> Self {
        VarId::W { j }
    }
    pub fn wjet(j: u32, p: u32) -> Self {
        VarId::WJet { j, p }
    }

    /// Weight of the variable in the pole-order grading, or an error for
    /// geometric coordinates which have no meromorphic extension grading.
    pub fn pole_weight(&self) -> Result<u32> {
        match self {
            VarId::Z { .. } | VarId::W { .. } => Ok(1),
            VarId::Jet { p, .. } | VarId::WJet { p, .. } | VarId::LogWJet { p, .. } => Ok(p + 1),
            VarId::Param { .. } => Ok(0),
            VarId::GeoJet { .. } | VarId::TJet { .. } => {
                Err(Error::UnsupportedVariable(self.clone()))
            }
        }
    }

    pub fn is_param(&self) -> bool {
        matches!(self, VarId::Param { .. })
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarId::Z { i } => write!(f, "z{i}"),
            VarId::Jet { i, p } => write!(f, "z{i}^({p})"),
            VarId::GeoJet { i, p } => write!(f, "z{i}^[{p}]"),
            VarId::TJet { p } => write!(f, "t^[{p}]"),
            VarId::Param { j, alpha } => {
                let body: Vec<String> = alpha.iter().map(|a| a.to_string()).collect();
                write!(f, "a{j}_({})", body.join(","))
            }
            VarId::W { j } => write!(f, "w{j}"),
            VarId::LogWJet { j, p } => write!(f, "lw{j}^[{p}]"),
            VarId::WJet { j, p } => write!(f, "w{j}^[{p}]"),
        }
    }
}

impl VarId {
    /// Parse the canonical text form produced by `Display`.
    pub fn parse(s: &str) -> Result<VarId> {
        let bad = || Error::Parse(format!("bad variable `{s}`"));
        let num = |t: &str| t.parse::<u32>().map_err(|_| bad());
        if let Some(rest) = s.strip_prefix("t^[") {
            return Ok(VarId::tjet(num(rest.strip_suffix(']').ok_or_else(bad)?)?));
        }
        if let Some(rest) = s.strip_prefix("lw") {
            let (j, p) = split_jet(rest, "^[", "]").ok_or_else(bad)?;
            return Ok(VarId::LogWJet { j: num(j)?, p: num(p)? });
        }
        if let Some(rest) = s.strip_prefix('a') {
            let open = rest.find("_(").ok_or_else(bad)?;
            let j = num(&rest[..open])?;
            let body = rest[open + 2..].strip_suffix(')').ok_or_else(bad)?;
            let alpha = if body.is_empty() {
                Vec::new()
            } else {
                body.split(',').map(num).collect::<Result<Vec<_>>>()?
            };
            return Ok(VarId::param(j, alpha));
        }
        if let Some(rest) = s.strip_prefix('w') {
            if let Some((j, p)) = split_jet(rest, "^[", "]") {
                return Ok(VarId::wjet(num(j)?, num(p)?));
            }
            return Ok(VarId::w(num(rest)?));
        }
        if let Some(rest) = s.strip_prefix('z') {
            if let Some((i, p)) = split_jet(rest, "^(", ")") {
                return Ok(VarId::jet(num(i)?, num(p)?));
            }
            if let Some((i, p)) = split_jet(rest, "^[", "]") {
                return Ok(VarId::geo(num(i)?, num(p)?));
            }
            return Ok(VarId::z(num(rest)?));
        }
        Err(bad())
    }
}

fn split_jet<'a>(rest: &'a str, open: &str, close: &str) -> Option<(&'a str, &'a str)> {
    let at = rest.find(open)?;
    let inner = rest[at + open.len()..].strip_suffix(close)?;
    Some((&rest[..at], inner))
}

/// A monomial: finite map from variables to positive exponents, kept as a
/// sorted vector for a deterministic total order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Monomial(pub Vec<(VarId, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: VarId) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (VarId, u32)>) -> Self {
        let mut m = Monomial::one();
        for (v, e) in pairs {
            m = m.mul_var(&v, e);
        }
        m
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: &VarId) -> u32 {
        self.0
            .iter()
            .find(|(u, _)| u == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.clone();
        for (v, e) in &other.0 {
            out = out.mul_var(v, *e);
        }
        out
    }

    pub fn mul_var(&self, v: &VarId, e: u32) -> Monomial {
        if e == 0 {
            return self.clone();
        }
        let mut items = self.0.clone();
        match items.binary_search_by(|(u, _)| u.cmp(v)) {
            Ok(idx) => items[idx].1 += e,
            Err(idx) => items.insert(idx, (v.clone(), e)),
        }
        Monomial(items)
    }

    /// Divide by `v^e`; returns `None` when the exponent is too small.
    pub fn div_var(&self, v: &VarId, e: u32) -> Option<Monomial> {
        if e == 0 {
            return Some(self.clone());
        }
        let mut items = self.0.clone();
        let idx = items.binary_search_by(|(u, _)| u.cmp(v)).ok()?;
        if items[idx].1 < e {
            return None;
        }
        items[idx].1 -= e;
        if items[idx].1 == 0 {
            items.remove(idx);
        }
        Some(Monomial(items))
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn vars(&self) -> impl Iterator<Item = &VarId> {
        self.0.iter().map(|(v, _)| v)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(v, e)| {
                if *e == 1 {
                    v.to_string()
                } else {
                    format!("{v}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_variable_order() {
        let order = vec![
            VarId::z(1),
            VarId::z(2),
            VarId::jet(1, 1),
            VarId::jet(1, 2),
            VarId::jet(2, 1),
            VarId::geo(2, 1),
            VarId::tjet(1),
            VarId::param(1, vec![0, 0]),
            VarId::param(1, vec![0, 1]),
            VarId::param(1, vec![1, 0]),
            VarId::param(2, vec![0, 0]),
            VarId::w(1),
            VarId::LogWJet { j: 1, p: 1 },
            VarId::wjet(1, 1),
        ];
        let mut sorted = order.clone();
        sorted.sort();
        assert_eq!(order, sorted);
    }

    #[test]
    fn display_parse_round_trip() {
        let vars = vec![
            VarId::z(3),
            VarId::jet(2, 3),
            VarId::geo(2, 1),
            VarId::tjet(4),
            VarId::param(2, vec![2, 0, 1]),
            VarId::param(1, vec![]),
            VarId::w(1),
            VarId::LogWJet { j: 2, p: 3 },
            VarId::wjet(1, 2),
        ];
        for v in vars {
            assert_eq!(VarId::parse(&v.to_string()).unwrap(), v);
        }
    }

    #[test]
    fn monomial_mul_div() {
        let m = Monomial::var(VarId::z(1))
            .mul_var(&VarId::z(1), 1)
            .mul_var(&VarId::jet(1, 1), 2);
        assert_eq!(m.exponent(&VarId::z(1)), 2);
        let d = m.div_var(&VarId::jet(1, 1), 2).unwrap();
        assert_eq!(d.exponent(&VarId::jet(1, 1)), 0);
        assert!(m.div_var(&VarId::z(2), 1).is_none());
    }

    #[test]
    fn enumerate_counts() {
        // |alpha| <= d over n variables: C(n + d, d) many
        assert_eq!(enumerate_upto(2, 2).len(), 6);
        assert_eq!(enumerate_upto(3, 2).len(), 10);
        assert_eq!(enumerate_exact(2, 3).len(), 4);
    }
}
