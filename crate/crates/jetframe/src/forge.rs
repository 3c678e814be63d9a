//! Construction of the vector-field families: building blocks, annihilator
//! fields, corrected slanted fields, vertical fields, parameter-direction
//! fields, logarithmic fields, and full frame assembly.

use std::cell::RefCell;
use std::collections::HashMap;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::bell::{geo_field, log_dual_field, vertical_t, wjet_field};
use crate::error::{Error, Result};
use crate::jet::{DiffBase, JetConfig, JetSpace, VectorField};
use crate::poly::{binomial, factorial, mi_factorial, rat_int, z1p, FracPoly, Poly, Rat};
use crate::var::{enumerate_upto, mi_bump, mi_le, mi_len, mi_sub, MultiIndex, VarId};

/// Which family a frame member belongs to; also the serialisation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Slanted,
    Vertical,
    Parameter,
    Logarithmic,
}

/// One member of the frame, with its provenance tag and computed
/// degree data.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrameField {
    pub family: Family,
    pub tag: String,
    pub params: serde_json::Value,
    pub field: VectorField,
    pub pole_order: u32,
    pub a_degree: u32,
}

/// The assembled frame: all families in stable order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrameSpec {
    pub config: JetConfig,
    pub fields: Vec<FrameField>,
}

impl FrameSpec {
    pub fn max_pole_order(&self) -> u32 {
        self.fields.iter().map(|f| f.pole_order).max().unwrap_or(0)
    }

    pub fn family_count(&self, family: Family) -> usize {
        self.fields.iter().filter(|f| f.family == family).count()
    }
}

/// Frame constructor for one instance; caches the extended building
/// blocks, which are verified once at construction time.
pub struct FrameBuilder<'a> {
    pub space: &'a JetSpace,
    u0_cache: RefCell<HashMap<(u32, MultiIndex), VectorField>>,
}

impl<'a> FrameBuilder<'a> {
    pub fn new(space: &'a JetSpace) -> Self {
        FrameBuilder {
            space,
            u0_cache: RefCell::new(HashMap::new()),
        }
    }

    fn cfg(&self) -> &JetConfig {
        &self.space.cfg
    }

    fn degree(&self, j: u32) -> u32 {
        self.cfg().degrees[(j - 1) as usize]
    }

    /// Closed-form building block for `|beta| + q <= d`:
    /// `U_q^beta = sum_{p=0}^q ((-1)^p / (p! (q-p)!)) z_1^{q-p} d/da_{beta + p 1_1}`.
    pub fn u_q_beta(&self, j: u32, q: u32, beta: &[u32]) -> Result<VectorField> {
        let d = self.degree(j);
        if mi_len(beta) + q > d {
            return Err(Error::Range((mi_len(beta) + q) as usize, d as usize));
        }
        let mut coeffs = Vec::new();
        for p in 0..=q {
            let slot = mi_bump(beta, 1, p);
            if self.cfg().hat(j) == Some(&slot) {
                return Err(Error::ReservedIndex(slot));
            }
            let sign = if p % 2 == 0 { Rat::one() } else { -Rat::one() };
            let c = sign / (factorial(p) * factorial(q - p));
            let poly = if q == p {
                Poly::constant(c)
            } else {
                Poly::var_pow(VarId::z(1), q - p).scale(&c)
            };
            coeffs.push((VarId::param(j, slot), FracPoly::from(poly)));
        }
        Ok(VectorField::from_coeffs(coeffs))
    }

    /// All `lambda <= beta` with `|lambda| = len`, sorted.
    pub fn valid_lambdas(&self, beta: &[u32], len: u32) -> Vec<MultiIndex> {
        let mut out: Vec<MultiIndex> = enumerate_upto(beta.len(), len)
            .into_iter()
            .filter(|l| mi_len(l) == len && mi_le(l, beta))
            .collect();
        out.sort();
        out
    }

    fn lambda_policy(&self, beta: &[u32]) -> Result<MultiIndex> {
        self.valid_lambdas(beta, self.cfg().k + 1)
            .into_iter()
            .next()
            .ok_or_else(|| Error::NoValidLambda(beta.to_vec(), (self.cfg().k + 1) as usize))
    }

    /// Annihilator field of component `j`:
    /// `T_{beta,lambda} = sum_{gamma <= lambda} (-1)^{|gamma|}
    /// (lambda! / (gamma! (lambda-gamma)!)) z^gamma d/da_{beta-gamma}`.
    /// It kills every iterated derivative `D_t^p . P_j`, `p <= k`,
    /// identically.
    pub fn t_annihilator(&self, j: u32, beta: &[u32], lambda: &[u32]) -> Result<VectorField> {
        let d = self.degree(j);
        let k = self.cfg().k;
        if mi_len(beta) < k + 1 || mi_len(beta) > d {
            return Err(Error::Config(format!(
                "annihilator needs k+1 <= |beta| <= d, got |beta| = {}",
                mi_len(beta)
            )));
        }
        if mi_len(lambda) != k + 1 || !mi_le(lambda, beta) {
            return Err(Error::NoValidLambda(beta.to_vec(), (k + 1) as usize));
        }
        let mut coeffs = Vec::new();
        for gamma in enumerate_upto(lambda.len(), k + 1) {
            if !mi_le(&gamma, lambda) {
                continue;
            }
            let slot = mi_sub(beta, &gamma);
            if self.cfg().hat(j) == Some(&slot) {
                return Err(Error::ReservedIndex(slot));
            }
            let sign = if mi_len(&gamma) % 2 == 0 { Rat::one() } else { -Rat::one() };
            let c = sign * mi_factorial(lambda) / (mi_factorial(&gamma) * mi_factorial(&mi_sub(lambda, &gamma)));
            coeffs.push((
                VarId::param(j, slot),
                FracPoly::from(Poly::z_monomial(&gamma).scale(&c)),
            ));
        }
        Ok(VectorField::from_coeffs(coeffs))
    }

    /// Building block `U_0^beta` for slots that do not exist as plain
    /// coordinate directions (`|beta| > d`, or the normalised slot).
    ///
    /// Built by the annihilator recursion; the verbatim combination and
    /// its sign flip are both tried, the mandatory identity
    /// `Lambda_{z1}(U_0^beta) = z^beta e_0` is checked symbolically, and
    /// only a verified block is returned.
    pub fn u0_extended(&self, j: u32, beta: &[u32]) -> Result<VectorField> {
        if let Some(hit) = self.u0_cache.borrow().get(&(j, beta.to_vec())) {
            return Ok(hit.clone());
        }
        let lambda = self.lambda_policy(beta)?;
        let mut sum = VectorField::zero();
        for gamma in enumerate_upto(lambda.len(), self.cfg().k + 1) {
            if mi_len(&gamma) == 0 || !mi_le(&gamma, &lambda) {
                continue;
            }
            let sign = if mi_len(&gamma) % 2 == 0 { Rat::one() } else { -Rat::one() };
            let c = sign * mi_factorial(&lambda)
                / (mi_factorial(&gamma) * mi_factorial(&mi_sub(&lambda, &gamma)));
            let block = self.u0(j, &mi_sub(beta, &gamma))?;
            let zg = FracPoly::from(Poly::z_monomial(&gamma).scale(&c));
            sum = sum.add(&block.scale_frac(&zg));
        }
        let target = FracPoly::from(Poly::z_monomial(beta));
        let moduli = FracPoly::from(self.space.moduli_poly(j));
        let verified = [sum.clone(), sum.neg()].into_iter().find(|cand| {
            let lam = self.space.lambda_against(DiffBase::Dz1, cand, &moduli);
            lam.entries[0] == target && lam.entries[1..].iter().all(FracPoly::is_zero)
        });
        let block = verified.ok_or_else(|| {
            Error::ConstructionCheck(format!(
                "extended block for beta = {beta:?} failed its identity under both signs"
            ))
        })?;
        self.u0_cache
            .borrow_mut()
            .insert((j, beta.to_vec()), block.clone());
        Ok(block)
    }

    /// `U_0^beta` dispatch: the plain coordinate direction when it exists,
    /// the verified extended block otherwise.
    fn u0(&self, j: u32, beta: &[u32]) -> Result<VectorField> {
        let d = self.degree(j);
        if mi_len(beta) <= d && self.cfg().hat(j) != Some(&beta.to_vec()) {
            return Ok(VectorField::unit(VarId::param(j, beta.to_vec())));
        }
        self.u0_extended(j, beta)
    }

    /// General building block: `Lambda_{z1}(U_q^beta) = z^beta e_q` with no
    /// restriction on `|beta|`.
    pub fn u_general(&self, j: u32, q: u32, beta: &[u32]) -> Result<VectorField> {
        let mut out = VectorField::zero();
        for p in 0..=q {
            let sign = if p % 2 == 0 { Rat::one() } else { -Rat::one() };
            let c = sign / (factorial(p) * factorial(q - p));
            let seed = self.u0(j, &mi_bump(beta, 1, p))?;
            let z1pow = FracPoly::from(if q == p {
                Poly::constant(c)
            } else {
                Poly::var_pow(VarId::z(1), q - p).scale(&c)
            });
            out = out.add(&seed.scale_frac(&z1pow));
        }
        Ok(out)
    }

    /// Coefficient `u_{j,beta} = (beta_j + 1) a_{beta + 1_j}` of
    /// `d/dz_j . P` on `z^beta` (the normalised slot contributes the
    /// constant 1 instead of a variable).
    fn u_coefficient(&self, comp: u32, j: u32, beta: &[u32]) -> Poly {
        let slot = mi_bump(beta, j, 1);
        let factor = rat_int((beta[(j - 1) as usize] + 1) as i64);
        if self.cfg().hat(comp) == Some(&slot) {
            Poly::constant(factor)
        } else {
            Poly::var(VarId::param(comp, slot)).scale(&factor)
        }
    }

    /// Slanted field `T_{j,q}` (and, at `(1, 0)`, the base-direction field
    /// of the fundamental case): the geometric jet direction corrected by
    /// building blocks so that its whole Lambda vector cancels, with the
    /// corrective parts of all components added together.
    pub fn t_jq(&self, j_dir: u32, q: u32) -> Result<VectorField> {
        let cfg = self.cfg();
        if j_dir == 1 && q != 0 {
            return Err(Error::InvalidDirection(j_dir, q));
        }
        if j_dir == 0 || j_dir > cfg.n || q > cfg.k {
            return Err(Error::InvalidDirection(j_dir, q));
        }
        let base = if q == 0 {
            VectorField::unit(VarId::z(j_dir))
        } else {
            geo_field(cfg, j_dir, q)?
        };
        // Lambda_{z1}(base) = (-1)^q q! (d/dz_j . P) e_q, so the block
        // combination enters with that factor.
        let sign = if q % 2 == 0 { Rat::one() } else { -Rat::one() };
        let scale = sign * factorial(q);
        let mut correction = VectorField::zero();
        for comp in 1..=cfg.components() {
            let d = self.degree(comp);
            for beta in enumerate_upto(cfg.n as usize, d.saturating_sub(1)) {
                let u = self.u_coefficient(comp, j_dir, &beta);
                if u.is_zero() {
                    continue;
                }
                let block = self.u_general(comp, q, &beta)?;
                correction = correction.add(&block.scale_frac(&FracPoly::from(u.scale(&scale))));
            }
        }
        Ok(base.sub(&correction))
    }

    /// Parameter-direction field `T_beta` of component `j`.
    ///
    /// High range `k+1 <= |beta| <= d`: any annihilator field works; the
    /// deterministic lambda policy picks one. Low range `|beta| <= k`: the
    /// direction is corrected by `U_q^0` blocks with coefficients solved
    /// from the triangular tangency system, then cleared by `(z_1')^{2k-1}`.
    pub fn t_param(&self, j: u32, beta: &[u32]) -> Result<VectorField> {
        let cfg = self.cfg();
        let d = self.degree(j);
        let k = cfg.k;
        let len = mi_len(beta);
        if beta.iter().skip(1).all(|&b| b == 0) && len <= k {
            return Err(Error::ReservedIndex(beta.to_vec()));
        }
        if cfg.hat(j) == Some(&beta.to_vec()) {
            return Err(Error::ReservedIndex(beta.to_vec()));
        }
        if len > d {
            return Err(Error::Config(format!(
                "parameter slot {beta:?} exceeds degree {d}"
            )));
        }
        if len >= k + 1 {
            let lambda = self.lambda_policy(beta)?;
            return self.t_annihilator(j, beta, &lambda);
        }
        // low range: solve for the correction coefficients
        let dz1 = self.space.dz1();
        let mut props: Vec<FracPoly> = vec![FracPoly::from(Poly::z_monomial(beta))];
        for s in 1..=k {
            let mut acc = FracPoly::zero();
            for (q, prop) in props.iter().enumerate() {
                let mut term = prop.clone();
                for _ in 0..(s - q as u32) {
                    term = dz1.apply(&term);
                }
                acc = acc.add(&term.scale(&binomial(s, s - q as u32)));
            }
            props.push(acc.neg());
        }
        let mut field = VectorField::unit(VarId::param(j, beta.to_vec()));
        let zero_idx = vec![0u32; cfg.n as usize];
        for (q, prop) in props.iter().enumerate() {
            let block = self.u_general(j, q as u32, &zero_idx)?;
            field = field.sub(&block.scale_frac(prop));
        }
        let clear = FracPoly::from(Poly::var_pow(z1p(), 2 * k - 1));
        let cleared = field.scale_frac(&clear);
        if cleared.max_epow() != 0 {
            return Err(Error::ConstructionCheck(format!(
                "parameter field for beta = {beta:?} kept a denominator after clearing"
            )));
        }
        Ok(cleared)
    }

    /// Logarithmic field `T_{w_j, q}`.
    ///
    /// The base direction is tried verbatim as the plain `w^[q]` dual
    /// field; if the reduction check fails the logarithmic dual basis is
    /// substituted with the same correction. Only a candidate whose whole
    /// Lambda vector reduces to zero modulo the defining polynomial is
    /// returned, together with the name of the basis that passed.
    pub fn t_wq(&self, j: u32, q: u32) -> Result<(VectorField, &'static str)> {
        let cfg = self.cfg();
        if !cfg.is_log() {
            return Err(Error::WrongCase("logarithmic"));
        }
        if q > cfg.k || j == 0 || j > cfg.components() {
            return Err(Error::Config(format!("logarithmic field ({j}, {q}) out of range")));
        }
        let d = self.degree(j);
        let sign = if q % 2 == 0 { Rat::one() } else { -Rat::one() };
        let scale = sign * factorial(q) * rat_int(d as i64);
        let mut correction = VectorField::zero();
        for alpha in enumerate_upto(cfg.n as usize, d) {
            let coeff = Poly::var(VarId::param(j, alpha.clone())).scale(&scale);
            let block = self.u_general(j, q, &alpha)?;
            correction = correction.add(&block.scale_frac(&FracPoly::from(coeff)));
        }
        for (base, name) in [
            (wjet_field(cfg, j, q)?, "w"),
            (log_dual_field(cfg, j, q)?, "log_w"),
        ] {
            let candidate = base.add(&correction);
            let lambda = self.space.lambda(DiffBase::Dz1, &candidate, j);
            let reduced_zero = lambda
                .entries
                .iter()
                .all(|e| reduce_w(&e.num, cfg).is_zero());
            if reduced_zero {
                return Ok((candidate, name));
            }
        }
        Err(Error::ConstructionCheck(format!(
            "no logarithmic basis yields a reducing field at ({j}, {q})"
        )))
    }

    /// Every parameter slot of component `j` that receives a field: all
    /// `|beta| <= d` except the `k+1` corrected slots `m 1_1` and the
    /// normalised slot.
    pub fn param_field_slots(&self, j: u32) -> Vec<MultiIndex> {
        let k = self.cfg().k;
        self.cfg()
            .param_slots(j)
            .into_iter()
            .filter(|beta| !(mi_len(beta) <= k && beta.iter().skip(1).all(|&b| b == 0)))
            .collect()
    }

    /// The full frame: slanted, vertical, parameter and (log case)
    /// logarithmic families, in stable order, each member carrying its
    /// computed pole order and moduli degree.
    pub fn assemble(&self) -> Result<FrameSpec> {
        let cfg = self.cfg().clone();
        let mut fields = Vec::new();
        let mut push = |family: Family, tag: &str, params: serde_json::Value, field: VectorField| -> Result<()> {
            let pole_order = field.pole_order()?;
            let a_degree = field.a_degree();
            fields.push(FrameField {
                family,
                tag: tag.into(),
                params,
                field,
                pole_order,
                a_degree,
            });
            Ok(())
        };
        for j in 2..=cfg.n {
            for q in 0..=cfg.k {
                push(
                    Family::Slanted,
                    "T_jq",
                    serde_json::json!({"j": j, "q": q}),
                    self.t_jq(j, q)?,
                )?;
            }
        }
        push(
            Family::Vertical,
            "T_jq",
            serde_json::json!({"j": 1, "q": 0}),
            self.t_jq(1, 0)?,
        )?;
        for l in 1..=cfg.k {
            push(
                Family::Vertical,
                "T_sym",
                serde_json::json!({"l": l}),
                vertical_t(&cfg, l)?,
            )?;
        }
        for j in 1..=cfg.components() {
            for beta in self.param_field_slots(j) {
                let kind = if mi_len(&beta) >= cfg.k + 1 { "annihilator" } else { "cleared" };
                push(
                    Family::Parameter,
                    "T_param",
                    serde_json::json!({"component": j, "beta": beta, "kind": kind}),
                    self.t_param(j, &beta)?,
                )?;
            }
        }
        if cfg.is_log() {
            for j in 1..=cfg.components() {
                for q in 0..=cfg.k {
                    let (field, basis) = self.t_wq(j, q)?;
                    push(
                        Family::Logarithmic,
                        "T_w",
                        serde_json::json!({"component": j, "q": q, "basis": basis}),
                        field,
                    )?;
                }
            }
        }
        Ok(FrameSpec { config: cfg, fields })
    }
}

/// Rewrite `w_j^{d_j} -> sum a^j_alpha z^alpha` repeatedly until no
/// monomial carries a full power of any `w_j`; terminates because the
/// `w`-degree strictly decreases.
pub fn reduce_w(p: &Poly, cfg: &JetConfig) -> Poly {
    let mut current = p.clone();
    'outer: loop {
        for j in 1..=cfg.components() {
            let d = cfg.degrees[(j - 1) as usize];
            let wj = VarId::w(j);
            let hit = current
                .terms()
                .find(|(m, _)| m.exponent(&wj) >= d)
                .map(|(m, c)| (m.clone(), c.clone()));
            if let Some((mono, coef)) = hit {
                let reduced_mono = (0..d).fold(mono.clone(), |m, _| {
                    m.div_var(&wj, 1).expect("exponent checked")
                });
                // the moduli side of Q_j = w^d - sum a z^alpha
                let replacement = &Poly::var_pow(wj.clone(), d) - &crate::jet::universal_poly(cfg, j);
                current = &(&current - &Poly::term(mono.clone(), coef.clone()))
                    + &replacement.mul_monomial(&reduced_mono, &coef);
                continue 'outer;
            }
        }
        return current;
    }
}
