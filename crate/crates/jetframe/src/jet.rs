//! Jet-space instances, the formal differentiations `D_t` and `D_{z1}`,
//! adjoint actions and the Lambda maps.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{binomial, factorial, rat_int, z1p, FracPoly, Poly, Rat};
use crate::series::TruncCurve;
use crate::var::{enumerate_upto, mi_len, MultiIndex, VarId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JetCase {
    Compact,
    /// Straightened chart `w_j^{d_j} = sum a^j_alpha z^alpha` with the
    /// divisor `{w = 0}`; the `w`-direction carries geometric jets.
    Logarithmic,
}

/// Which formal differentiation drives a Lambda map or a defining system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiffBase {
    Dt,
    Dz1,
}

/// The problem instance: ambient dimension, jet order, component degrees,
/// compact or logarithmic case and (compact only) the normalised slots.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JetConfig {
    pub n: u32,
    pub k: u32,
    pub degrees: Vec<u32>,
    pub case: JetCase,
    /// Per-component multi-index whose coefficient is normalised to 1
    /// (compact case only; no slot is removed in the logarithmic case).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hat_alpha: Option<Vec<MultiIndex>>,
}

impl JetConfig {
    pub fn compact(n: u32, k: u32, degrees: Vec<u32>) -> Result<(Self, Vec<String>)> {
        let hat = degrees
            .iter()
            .map(|&d| default_hat_alpha(n, d))
            .collect::<Vec<_>>();
        JetConfig {
            n,
            k,
            degrees,
            case: JetCase::Compact,
            hat_alpha: Some(hat),
        }
        .validated()
    }

    pub fn logarithmic(n: u32, k: u32, degrees: Vec<u32>) -> Result<(Self, Vec<String>)> {
        JetConfig {
            n,
            k,
            degrees,
            case: JetCase::Logarithmic,
            hat_alpha: None,
        }
        .validated()
    }

    pub fn validated(self) -> Result<(Self, Vec<String>)> {
        if self.n == 0 {
            return Err(Error::Config("n must be at least 1".into()));
        }
        if self.k == 0 {
            return Err(Error::Config("jet order k must be at least 1".into()));
        }
        if self.degrees.is_empty() {
            return Err(Error::Config("at least one degree required".into()));
        }
        if self.degrees.iter().any(|&d| d == 0) {
            return Err(Error::Config("degrees must be at least 1".into()));
        }
        match (&self.case, &self.hat_alpha) {
            (JetCase::Compact, Some(hats)) => {
                if hats.len() != self.degrees.len() {
                    return Err(Error::Config("one hat_alpha per component required".into()));
                }
                for (hat, &d) in hats.iter().zip(&self.degrees) {
                    if hat.len() != self.n as usize || mi_len(hat) != d {
                        return Err(Error::Config(format!(
                            "hat_alpha {hat:?} must have length n and weight {d}"
                        )));
                    }
                    if self.n >= 2 && hat[0] != 0 {
                        return Err(Error::Config(
                            "hat_alpha must have first entry 0 on the z_1' chart".into(),
                        ));
                    }
                }
            }
            (JetCase::Compact, None) => {
                return Err(Error::Config("compact case requires hat_alpha".into()))
            }
            (JetCase::Logarithmic, Some(_)) => {
                return Err(Error::Config("logarithmic case has no hat_alpha".into()))
            }
            (JetCase::Logarithmic, None) => {}
        }
        let mut warnings = Vec::new();
        if let Some(&dmin) = self.degrees.iter().min() {
            if self.k >= dmin {
                warnings.push(format!(
                    "jet order k = {} is not smaller than min degree {dmin}; \
                     the generation statement is outside its hypothesis",
                    self.k
                ));
            }
        }
        Ok((self, warnings))
    }

    pub fn components(&self) -> u32 {
        self.degrees.len() as u32
    }

    pub fn is_log(&self) -> bool {
        self.case == JetCase::Logarithmic
    }

    pub fn hat(&self, j: u32) -> Option<&MultiIndex> {
        self.hat_alpha
            .as_ref()
            .map(|hats| &hats[(j - 1) as usize])
    }

    /// Moduli slots of component `j` that exist as chart coordinates.
    pub fn param_slots(&self, j: u32) -> Vec<MultiIndex> {
        let d = self.degrees[(j - 1) as usize];
        enumerate_upto(self.n as usize, d)
            .into_iter()
            .filter(|alpha| self.hat(j) != Some(alpha))
            .collect()
    }

    /// All ambient chart variables, in canonical order.
    pub fn all_vars(&self) -> Vec<VarId> {
        let mut vars = Vec::new();
        for i in 1..=self.n {
            vars.push(VarId::z(i));
            for p in 1..=self.k {
                vars.push(VarId::jet(i, p));
            }
        }
        for j in 1..=self.components() {
            for alpha in self.param_slots(j) {
                vars.push(VarId::param(j, alpha));
            }
        }
        if self.is_log() {
            for j in 1..=self.components() {
                vars.push(VarId::w(j));
                for p in 1..=self.k {
                    vars.push(VarId::wjet(j, p));
                }
            }
        }
        vars.sort();
        vars
    }

    pub fn validate_var(&self, v: &VarId) -> Result<()> {
        let in_range = match v {
            VarId::Z { i } => (1..=self.n).contains(i),
            VarId::Jet { i, p } => (1..=self.n).contains(i) && (1..=self.k).contains(p),
            VarId::GeoJet { i, p } => (2..=self.n).contains(i) && (1..=self.k).contains(p),
            VarId::TJet { p } => (1..=self.k).contains(p),
            VarId::Param { j, alpha } => {
                (1..=self.components()).contains(j)
                    && alpha.len() == self.n as usize
                    && mi_len(alpha) <= self.degrees[(*j - 1) as usize]
                    && self.hat(*j) != Some(alpha)
            }
            VarId::W { j } | VarId::WJet { j, .. } | VarId::LogWJet { j, .. } => {
                self.is_log() && (1..=self.components()).contains(j)
            }
        };
        if in_range {
            Ok(())
        } else {
            Err(Error::Config(format!("variable {v} out of range for this instance")))
        }
    }
}

/// Default normalised slot: weight `d` on `z_2` when possible (the chart
/// demands a zero first entry), weight `d` on `z_1` only when `n = 1`.
pub fn default_hat_alpha(n: u32, d: u32) -> MultiIndex {
    let mut hat = vec![0u32; n as usize];
    if n >= 2 {
        hat[1] = d;
    } else {
        hat[0] = d;
    }
    hat
}

/// Dimension of the moduli space chart: `n_d = C(n + d, d) - 1`.
pub fn n_d(n: u32, d: u32) -> u64 {
    let mut out: u64 = 1;
    for i in 1..=d as u64 {
        out = out * (n as u64 + i) / i;
    }
    out - 1
}

/// A derivation of the ambient coordinate ring: finite map from
/// coordinate directions to `FracPoly` coefficients, no zeros stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VectorField {
    coeffs: BTreeMap<VarId, FracPoly>,
}

impl VectorField {
    pub fn zero() -> Self {
        VectorField::default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn from_coeffs(items: impl IntoIterator<Item = (VarId, FracPoly)>) -> Self {
        let mut out = VectorField::zero();
        for (v, c) in items {
            out.add_coeff(v, c);
        }
        out
    }

    /// The coordinate field `d/dv`.
    pub fn unit(v: VarId) -> Self {
        VectorField::from_coeffs([(v, FracPoly::from(Poly::one()))])
    }

    pub fn coeff(&self, v: &VarId) -> FracPoly {
        self.coeffs.get(v).cloned().unwrap_or_else(FracPoly::zero)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&VarId, &FracPoly)> {
        self.coeffs.iter()
    }

    pub fn directions(&self) -> impl Iterator<Item = &VarId> {
        self.coeffs.keys()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_coeff(&mut self, v: VarId, c: FracPoly) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&v) {
            Some(existing) => {
                let sum = existing.add(&c);
                if sum.is_zero() {
                    self.coeffs.remove(&v);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.coeffs.insert(v, c);
            }
        }
    }

    pub fn add(&self, rhs: &VectorField) -> VectorField {
        let mut out = self.clone();
        for (v, c) in &rhs.coeffs {
            out.add_coeff(v.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &VectorField) -> VectorField {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> VectorField {
        VectorField {
            coeffs: self
                .coeffs
                .iter()
                .map(|(v, c)| (v.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> VectorField {
        VectorField::from_coeffs(
            self.coeffs
                .iter()
                .map(|(v, f)| (v.clone(), f.scale(c))),
        )
    }

    pub fn scale_frac(&self, c: &FracPoly) -> VectorField {
        VectorField::from_coeffs(
            self.coeffs
                .iter()
                .map(|(v, f)| (v.clone(), f.mul(c))),
        )
    }

    /// Derivation action on a function.
    pub fn apply(&self, f: &FracPoly) -> FracPoly {
        let mut out = FracPoly::zero();
        for (v, c) in &self.coeffs {
            out = out.add(&c.mul(&f.partial(v)));
        }
        out
    }

    pub fn apply_poly(&self, f: &Poly) -> FracPoly {
        self.apply(&FracPoly::from(f.clone()))
    }

    /// Lie derivative of `rhs` along `self` (the commutator of derivations):
    /// `(A ad B) . f = A.(B.f) - B.(A.f)`.
    pub fn adjoint(&self, rhs: &VectorField) -> VectorField {
        let mut out = VectorField::zero();
        for (v, c) in &rhs.coeffs {
            out.add_coeff(v.clone(), self.apply(c));
        }
        for (v, c) in &self.coeffs {
            out.add_coeff(v.clone(), rhs.apply(c).neg());
        }
        out
    }

    /// Rename `z`-indices by the permutation `sigma` (one-based image
    /// table), mapping coefficients along; used for chart changes.
    pub fn permute_z(&self, sigma: &[u32]) -> VectorField {
        VectorField::from_coeffs(self.coeffs.iter().map(|(v, c)| {
            (permute_var(v, sigma), permute_frac(c, sigma))
        }))
    }

    pub fn max_epow(&self) -> u32 {
        self.coeffs.values().map(|c| c.epow).max().unwrap_or(0)
    }

    /// Pole order of the field: max over coefficient polynomials.
    /// Only defined for polynomial (epow 0) fields in standard coordinates.
    pub fn pole_order(&self) -> Result<u32> {
        let mut best = 0;
        for c in self.coeffs.values() {
            if c.epow != 0 {
                return Err(Error::Config("pole order of a field with uncleared denominators".into()));
            }
            best = best.max(c.num.pole_order()?);
        }
        Ok(best)
    }

    pub fn a_degree(&self) -> u32 {
        self.coeffs.values().map(|c| c.num.a_degree()).max().unwrap_or(0)
    }
}

pub fn permute_var(v: &VarId, sigma: &[u32]) -> VarId {
    let map = |i: u32| sigma[(i - 1) as usize];
    match v {
        VarId::Z { i } => VarId::z(map(*i)),
        VarId::Jet { i, p } => VarId::jet(map(*i), *p),
        VarId::GeoJet { i, p } => VarId::geo(map(*i), *p),
        VarId::Param { j, alpha } => {
            let mut image = vec![0u32; alpha.len()];
            for (idx, e) in alpha.iter().enumerate() {
                image[(sigma[idx] - 1) as usize] = *e;
            }
            VarId::param(*j, image)
        }
        other => other.clone(),
    }
}

pub fn permute_poly(p: &Poly, sigma: &[u32]) -> Poly {
    let mut out = Poly::zero();
    for (m, c) in p.terms() {
        let mono = crate::var::Monomial::from_pairs(
            m.0.iter().map(|(v, e)| (permute_var(v, sigma), *e)),
        );
        out = &out + &Poly::term(mono, c.clone());
    }
    out
}

fn permute_frac(f: &FracPoly, sigma: &[u32]) -> FracPoly {
    // the chart denominator z_1' is part of the chart, not renamed
    FracPoly {
        num: permute_poly(&f.num, sigma),
        epow: f.epow,
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(v, c)| format!("({c}) d/d{v}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Serialised form `{"coeffs": [{"var": ..., "num": ..., "epow": ...}]}`.
#[derive(Serialize, Deserialize)]
struct JsonFieldEntry {
    var: VarId,
    num: Poly,
    epow: u32,
}

#[derive(Serialize, Deserialize)]
struct JsonField {
    coeffs: Vec<JsonFieldEntry>,
}

impl Serialize for VectorField {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        JsonField {
            coeffs: self
                .coeffs
                .iter()
                .map(|(v, c)| JsonFieldEntry {
                    var: v.clone(),
                    num: c.num.clone(),
                    epow: c.epow,
                })
                .collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for VectorField {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = JsonField::deserialize(de)?;
        Ok(VectorField::from_coeffs(raw.coeffs.into_iter().map(|e| {
            (e.var, FracPoly { num: e.num, epow: e.epow }.normalize())
        })))
    }
}

/// The `(k+1)`-vector of values `(D^p ad V) . P`, `p = 0..k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaVec {
    pub entries: Vec<FracPoly>,
}

impl LambdaVec {
    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(FracPoly::is_zero)
    }

    /// Index of the first nonzero entry, if any.
    pub fn witness(&self) -> Option<usize> {
        self.entries.iter().position(|e| !e.is_zero())
    }
}

/// A fully materialised instance: defining polynomials and the two formal
/// differentiations, built once per configuration and shared.
#[derive(Debug, Clone)]
pub struct JetSpace {
    pub cfg: JetConfig,
    polys: Vec<Poly>,
    dt: VectorField,
    dz1: VectorField,
}

impl JetSpace {
    pub fn new(cfg: JetConfig) -> Self {
        let polys = (1..=cfg.components())
            .map(|j| universal_poly(&cfg, j))
            .collect();
        let dt = build_dt(&cfg);
        let dz1 = build_dz1(&cfg);
        JetSpace { cfg, polys, dt, dz1 }
    }

    pub fn defining_poly(&self, j: u32) -> &Poly {
        &self.polys[(j - 1) as usize]
    }

    /// The moduli part `sum a^j_alpha z^alpha` (with the normalised slot
    /// as the constant-one monomial in the compact case): the polynomial
    /// against which building blocks are calibrated.
    pub fn moduli_poly(&self, j: u32) -> Poly {
        moduli_poly(&self.cfg, j)
    }

    pub fn dt(&self) -> &VectorField {
        &self.dt
    }

    pub fn dz1(&self) -> &VectorField {
        &self.dz1
    }

    pub fn base(&self, base: DiffBase) -> &VectorField {
        match base {
            DiffBase::Dt => &self.dt,
            DiffBase::Dz1 => &self.dz1,
        }
    }

    /// Lambda map of one component: entries `(D^p ad V) . P_j`, computed by
    /// p-fold adjoint of the already-reduced field.
    pub fn lambda(&self, base: DiffBase, field: &VectorField, j: u32) -> LambdaVec {
        self.lambda_against(base, field, &FracPoly::from(self.defining_poly(j).clone()))
    }

    /// Lambda map against an arbitrary target polynomial.
    pub fn lambda_against(
        &self,
        base: DiffBase,
        field: &VectorField,
        target: &FracPoly,
    ) -> LambdaVec {
        let d = self.base(base);
        let mut entries = Vec::with_capacity(self.cfg.k as usize + 1);
        let mut current = field.clone();
        entries.push(current.apply(target));
        for _ in 1..=self.cfg.k {
            current = d.adjoint(&current);
            entries.push(current.apply(target));
        }
        LambdaVec { entries }
    }

    /// All Lambda maps, one per component.
    pub fn lambda_all(&self, base: DiffBase, field: &VectorField) -> Vec<LambdaVec> {
        (1..=self.cfg.components())
            .map(|j| self.lambda(base, field, j))
            .collect()
    }

    /// The `c (k+1)` equations cutting out the vertical jets: the iterated
    /// formal derivatives of each defining polynomial. For the `Dz1` base
    /// the equivalent chart system `(1/q!) D_{z1}^q . P_j` is returned.
    pub fn defining_equations(&self, base: DiffBase) -> Vec<Vec<FracPoly>> {
        let d = self.base(base);
        (1..=self.cfg.components())
            .map(|j| {
                let mut eqs = Vec::with_capacity(self.cfg.k as usize + 1);
                let mut cur = FracPoly::from(self.defining_poly(j).clone());
                eqs.push(cur.clone());
                for q in 1..=self.cfg.k {
                    cur = d.apply(&cur);
                    match base {
                        DiffBase::Dt => eqs.push(cur.clone()),
                        DiffBase::Dz1 => {
                            eqs.push(cur.scale(&(Rat::from_integer(1.into()) / factorial(q))))
                        }
                    }
                }
                eqs
            })
            .collect()
    }

    /// Both sides of the forward combinatorial expansion
    /// `(D^q ad V) . f = sum_p (-1)^p C(q,p) D^{q-p} . (V . (D^p . f))`.
    pub fn binomial_adjoint_forward(
        &self,
        base: DiffBase,
        q: u32,
        field: &VectorField,
        f: &FracPoly,
    ) -> (FracPoly, FracPoly) {
        let d = self.base(base);
        let mut ad = field.clone();
        for _ in 0..q {
            ad = d.adjoint(&ad);
        }
        let lhs = ad.apply(f);
        let mut rhs = FracPoly::zero();
        for p in 0..=q {
            let mut inner = f.clone();
            for _ in 0..p {
                inner = d.apply(&inner);
            }
            let mut term = field.apply(&inner);
            for _ in 0..(q - p) {
                term = d.apply(&term);
            }
            let sign = if p % 2 == 0 { Rat::from_integer(1.into()) } else { -Rat::from_integer(1.into()) };
            rhs = rhs.add(&term.scale(&(sign * binomial(q, p))));
        }
        (lhs, rhs)
    }

    /// Both sides of the inverse expansion
    /// `V . (D^q . f) = sum_p (-1)^p C(q,p) D^{q-p} . ((D^p ad V) . f)`.
    pub fn binomial_adjoint_inverse(
        &self,
        base: DiffBase,
        q: u32,
        field: &VectorField,
        f: &FracPoly,
    ) -> (FracPoly, FracPoly) {
        let d = self.base(base);
        let mut inner = f.clone();
        for _ in 0..q {
            inner = d.apply(&inner);
        }
        let lhs = field.apply(&inner);
        let mut rhs = FracPoly::zero();
        let mut ad = field.clone();
        for p in 0..=q {
            let mut term = ad.apply(f);
            for _ in 0..(q - p) {
                term = d.apply(&term);
            }
            let sign = if p % 2 == 0 { Rat::from_integer(1.into()) } else { -Rat::from_integer(1.into()) };
            rhs = rhs.add(&term.scale(&(sign * binomial(q, p))));
            if p < q {
                ad = d.adjoint(&ad);
            }
        }
        (lhs, rhs)
    }

    /// Independent oracle: along the curve, the formal derivative of each
    /// defining polynomial must read the honest `t`-derivative of its
    /// restriction. Checks `eval(D_t^q . P, jet(f)) = q! [t^q](P o f)` for
    /// all `q <= k` and every component.
    pub fn oracle_check_dt(
        &self,
        curve: &TruncCurve,
        params: &BTreeMap<VarId, Rat>,
    ) -> Result<bool> {
        let mut point = curve.full_jet()?;
        for (v, val) in params {
            point.insert(v.clone(), val.clone());
        }
        for j in 1..=self.cfg.components() {
            let along = curve.substitute_into(self.defining_poly(j), params)?;
            let mut eq = FracPoly::from(self.defining_poly(j).clone());
            for q in 0..=self.cfg.k {
                if q > 0 {
                    eq = self.dt.apply(&eq);
                }
                let lhs = eq.eval(&point)?;
                let rhs = factorial(q) * along.coeff(q as usize);
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Affine defining polynomial of component `j`.
///
/// Compact: `P_j = sum_{|alpha| <= d_j} a^j_alpha z^alpha` with the
/// normalised slot substituted by the constant 1. Logarithmic:
/// `Q_j = w_j^{d_j} - sum_{|alpha| <= d_j} a^j_alpha z^alpha`.
pub fn universal_poly(cfg: &JetConfig, j: u32) -> Poly {
    let moduli = moduli_poly(cfg, j);
    match cfg.case {
        JetCase::Compact => moduli,
        JetCase::Logarithmic => {
            let d = cfg.degrees[(j - 1) as usize];
            &Poly::var_pow(VarId::w(j), d) - &moduli
        }
    }
}

fn moduli_poly(cfg: &JetConfig, j: u32) -> Poly {
    let d = cfg.degrees[(j - 1) as usize];
    let mut p = Poly::zero();
    for alpha in enumerate_upto(cfg.n as usize, d) {
        let zpart = Poly::z_monomial(&alpha);
        if cfg.hat(j) == Some(&alpha) {
            p = &p + &zpart;
        } else {
            p = &p + &(&Poly::var(VarId::param(j, alpha)) * &zpart);
        }
    }
    p
}

/// The formal differentiation mimicking `d/dt` on truncated jets:
/// `D_t = sum_i sum_{p=0}^{k-1} (p+1) z_i^(p+1) d/dz_i^(p)`, extended in
/// the logarithmic case along the `w`-chains by
/// `sum_j sum_{m=0}^{k-1} (m+1) z_1' w_j^[m+1] d/dw_j^[m]`.
pub fn build_dt(cfg: &JetConfig) -> VectorField {
    let mut coeffs: Vec<(VarId, FracPoly)> = Vec::new();
    for i in 1..=cfg.n {
        for p in 0..cfg.k {
            let dir = if p == 0 { VarId::z(i) } else { VarId::jet(i, p) };
            let c = Poly::var(VarId::jet(i, p + 1)).scale(&rat_int((p + 1) as i64));
            coeffs.push((dir, FracPoly::from(c)));
        }
    }
    if cfg.is_log() {
        for j in 1..=cfg.components() {
            for m in 0..cfg.k {
                let dir = if m == 0 { VarId::w(j) } else { VarId::wjet(j, m) };
                let c = (&Poly::var(z1p()) * &Poly::var(VarId::wjet(j, m + 1)))
                    .scale(&rat_int((m + 1) as i64));
                coeffs.push((dir, FracPoly::from(c)));
            }
        }
    }
    VectorField::from_coeffs(coeffs)
}

/// The chain-rule differentiation on the chart `z_1' != 0`:
/// `D_{z1} = (1/z_1') D_t`.
pub fn build_dz1(cfg: &JetConfig) -> VectorField {
    let dt = build_dt(cfg);
    VectorField::from_coeffs(
        dt.coeffs()
            .map(|(v, c)| (v.clone(), c.div_z1p(1))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn space(n: u32, k: u32, d: u32) -> JetSpace {
        JetSpace::new(JetConfig::compact(n, k, vec![d]).unwrap().0)
    }

    #[test]
    fn universal_poly_small() {
        // n=1, k=1, d=2, hat=(2): P = a0 + a1 z1 + z1^2
        let (cfg, _) = JetConfig {
            n: 1,
            k: 1,
            degrees: vec![2],
            case: JetCase::Compact,
            hat_alpha: Some(vec![vec![2]]),
        }
        .validated()
        .unwrap();
        let p = universal_poly(&cfg, 1);
        let expected = &(&Poly::var(VarId::param(1, vec![0]))
            + &(&Poly::var(VarId::param(1, vec![1])) * &Poly::var(VarId::z(1))))
            + &Poly::var_pow(VarId::z(1), 2);
        assert_eq!(p, expected);
    }

    #[test]
    fn universal_poly_log() {
        // log, n=1, c=1, d=2: Q = w1^2 - a0 - a1 z1 - a2 z1^2
        let (cfg, _) = JetConfig::logarithmic(1, 1, vec![2]).unwrap();
        let q = universal_poly(&cfg, 1);
        let moduli = &(&Poly::var(VarId::param(1, vec![0]))
            + &(&Poly::var(VarId::param(1, vec![1])) * &Poly::var(VarId::z(1))))
            + &(&Poly::var(VarId::param(1, vec![2])) * &Poly::var_pow(VarId::z(1), 2));
        assert_eq!(q, &Poly::var_pow(VarId::w(1), 2) - &moduli);
    }

    #[test]
    fn param_count_compact() {
        // number of Param vars (compact, c=1) is n_d = C(n+d, d) - 1
        for (n, d) in [(2u32, 2u32), (3, 2), (2, 4)] {
            let (cfg, _) = JetConfig::compact(n, 1, vec![d]).unwrap();
            assert_eq!(cfg.param_slots(1).len() as u64, n_d(n, d));
        }
    }

    #[test]
    fn dt_basics() {
        let sp = space(2, 2, 1);
        let z1 = FracPoly::from(Poly::var(VarId::z(1)));
        assert_eq!(sp.dt().apply(&z1), FracPoly::from(Poly::var(VarId::jet(1, 1))));
        // Leibniz: D_t(z1 z2) = z1' z2 + z2' z1
        let prod = FracPoly::from(&Poly::var(VarId::z(1)) * &Poly::var(VarId::z(2)));
        let expected = &(&Poly::var(VarId::jet(1, 1)) * &Poly::var(VarId::z(2)))
            + &(&Poly::var(VarId::jet(2, 1)) * &Poly::var(VarId::z(1)));
        assert_eq!(sp.dt().apply(&prod), FracPoly::from(expected));
        // coefficient (p+1): D_t(z1') = 2 z1''
        let z1prime = FracPoly::from(Poly::var(VarId::jet(1, 1)));
        assert_eq!(
            sp.dt().apply(&z1prime),
            FracPoly::from(Poly::var(VarId::jet(1, 2)).scale(&rat_int(2)))
        );
    }

    #[test]
    fn dz1_basics() {
        let sp = space(2, 1, 1);
        // D_z1(z1) = 1
        assert_eq!(
            sp.dz1().apply(&FracPoly::from(Poly::var(VarId::z(1)))),
            FracPoly::from(Poly::one())
        );
        // D_z1(z2) = z2'/z1'
        let got = sp.dz1().apply(&FracPoly::from(Poly::var(VarId::z(2))));
        assert_eq!(got.num, Poly::var(VarId::jet(2, 1)));
        assert_eq!(got.epow, 1);
    }

    #[test]
    fn adjoint_examples() {
        let sp = space(2, 3, 2);
        // D_t ad d/dz_j = 0
        for j in 1..=2 {
            assert!(sp.dt().adjoint(&VectorField::unit(VarId::z(j))).is_zero());
        }
        // D_t ad d/dz_j^(q) = -q d/dz_j^(q-1)
        for j in 1..=2u32 {
            for q in 1..=3u32 {
                let got = sp.dt().adjoint(&VectorField::unit(VarId::jet(j, q)));
                let dir = if q == 1 { VarId::z(j) } else { VarId::jet(j, q - 1) };
                let expected =
                    VectorField::unit(dir).scale(&rat(-(q as i64), 1));
                assert_eq!(got, expected);
            }
        }
        // antisymmetry at the diagonal
        let v = VectorField::from_coeffs([
            (VarId::z(1), FracPoly::from(Poly::var(VarId::jet(2, 1)))),
            (VarId::jet(1, 2), FracPoly::from(Poly::var(VarId::z(2)))),
        ]);
        assert!(v.adjoint(&v).is_zero());
    }

    #[test]
    fn lambda_of_param_direction() {
        // Lambda(d/da_beta) = z^beta e_0, in both bases
        let sp = space(2, 2, 2);
        let beta = vec![1, 1];
        let field = VectorField::unit(VarId::param(1, beta.clone()));
        for base in [DiffBase::Dt, DiffBase::Dz1] {
            let lam = sp.lambda(base, &field, 1);
            assert_eq!(lam.entries[0], FracPoly::from(Poly::z_monomial(&beta)));
            assert!(lam.entries[1].is_zero());
            assert!(lam.entries[2].is_zero());
        }
    }

    #[test]
    fn lambda_of_jet_direction_produces_line_q() {
        // Lambda_t(d/dz_j^(q)) has its only nonzero entry in line q
        let sp = space(2, 2, 2);
        for q in 1..=2usize {
            let lam = sp.lambda(DiffBase::Dt, &VectorField::unit(VarId::jet(2, q as u32)), 1);
            assert_eq!(lam.witness(), Some(q));
            // entry q is +- q! (d/dz_2 . P)
            let dp = FracPoly::from(sp.defining_poly(1).partial(&VarId::z(2)));
            let sign = if q % 2 == 0 { 1 } else { -1 };
            assert_eq!(lam.entries[q], dp.scale(&(factorial(q as u32) * rat(sign, 1))));
        }
    }

    #[test]
    fn apply_dt_to_linear_p() {
        // n=2, d=1: P = a00 + a10 z1 + z2 (normalised slot (0,1)), so
        // D_t P = a10 z1' + z2', term by term
        let sp = space(2, 1, 1);
        let got = sp.dt().apply_poly(sp.defining_poly(1));
        let expected = &(&Poly::var(VarId::param(1, vec![1, 0])) * &Poly::var(VarId::jet(1, 1)))
            + &Poly::var(VarId::jet(2, 1));
        assert_eq!(got, FracPoly::from(expected));
        // zero field applied to anything is zero
        assert!(VectorField::zero().apply_poly(sp.defining_poly(1)).is_zero());
    }

    #[test]
    fn defining_equations_count_and_base_change() {
        let sp = space(2, 1, 2);
        let dt_sys = sp.defining_equations(DiffBase::Dt);
        assert_eq!(dt_sys.len(), 1);
        assert_eq!(dt_sys[0].len(), 2); // c (k+1) equations
        // k=1: system is {P, a-linear combination of first jets}
        let dz_sys = sp.defining_equations(DiffBase::Dz1);
        assert_eq!(dz_sys[0][0], dt_sys[0][0]);
        // (1/1!) D_z1 P = (D_t P) / z1'
        assert_eq!(dz_sys[0][1].num, dt_sys[0][1].num);
        assert_eq!(dz_sys[0][1].epow, 1);
    }

    #[test]
    fn field_json_round_trip() {
        let f = VectorField::from_coeffs([
            (VarId::z(1), FracPoly::from(Poly::var(VarId::jet(1, 1)))),
            (
                VarId::param(1, vec![1, 0]),
                FracPoly {
                    num: Poly::var(VarId::jet(2, 1)),
                    epow: 2,
                },
            ),
        ]);
        let json = serde_json::to_string(&f).unwrap();
        let back: VectorField = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
    }
}
