//! Mechanical verification: tangency, exact-rank generation at sampled
//! vertical points, dimension accounting, pole-order audit, the identity
//! suite, and report generation.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bell::{
    bell_matrix_t, bell_matrix_z1, bell_value, dz1_geometric, std_from_geo,
    vertical_t_internal_identity,
};
use crate::error::{Error, Result};
use crate::forge::{reduce_w, Family, FrameBuilder, FrameSpec};
use crate::jet::{DiffBase, JetConfig, JetSpace, VectorField};
use crate::linalg;
use crate::poly::{factorial, rat_int, z1p, FracPoly, Poly, Rat};
use crate::series::{TruncCurve, TruncSeries};
use crate::var::{mi_bump, mi_len, VarId};

/// A sampled point of the vertical-jet variety: a full assignment that
/// satisfies every defining equation exactly, on the chart `z_1' = 1`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerticalPoint {
    pub seed: u64,
    pub chart: u32,
    pub assignment: BTreeMap<VarId, Rat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TangencyMode {
    /// Every Lambda entry is the zero polynomial.
    Identical,
    /// Every Lambda entry reduces to zero modulo the defining rewrites.
    ModuloQ,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TangencyVerdict {
    pub tag: String,
    pub params: serde_json::Value,
    pub mode: TangencyMode,
    pub pass: bool,
    /// First failing (component, lambda line) if any.
    pub witness: Option<(u32, usize)>,
}

/// Tangency of a single field. `Identical` demands the Lambda vector of
/// every component vanish as polynomials; `ModuloQ` allows reduction by
/// `w_j^{d_j} -> sum a z^alpha` first.
pub fn check_tangency(
    space: &JetSpace,
    field: &VectorField,
    mode: TangencyMode,
) -> (bool, Option<(u32, usize)>) {
    for j in 1..=space.cfg.components() {
        let lam = space.lambda(DiffBase::Dz1, field, j);
        for (idx, entry) in lam.entries.iter().enumerate() {
            let zero = match mode {
                TangencyMode::Identical => entry.is_zero(),
                TangencyMode::ModuloQ => reduce_w(&entry.num, &space.cfg).is_zero(),
            };
            if !zero {
                return (false, Some((j, idx)));
            }
        }
    }
    (true, None)
}

/// Expected dimension of the vertical-jet variety in the ambient chart.
pub fn expected_dimension(cfg: &JetConfig) -> u64 {
    let c = cfg.components() as u64;
    let n = cfg.n as u64;
    let k1 = (cfg.k + 1) as u64;
    let moduli: u64 = cfg
        .degrees
        .iter()
        .map(|&d| {
            let slots = crate::jet::n_d(cfg.n, d) + 1;
            if cfg.is_log() {
                slots
            } else {
                slots - 1
            }
        })
        .sum();
    if cfg.is_log() {
        moduli + (n + c) * k1 - c * k1
    } else {
        moduli + n * k1 - c * k1
    }
}

fn draw_rat(rng: &mut ChaCha8Rng) -> Rat {
    rat_int(rng.gen_range(-3..=3))
}

fn draw_nonzero(rng: &mut ChaCha8Rng) -> Rat {
    loop {
        let r = draw_rat(rng);
        if !r.is_zero() {
            return r;
        }
    }
}

/// Solve a square rational system; `None` when singular.
fn solve_linear(mut m: Vec<Vec<Rat>>, mut rhs: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = m.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let inv = m[col][col].clone();
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &inv;
            for c in col..n {
                let delta = &factor * &m[col][c];
                m[r][c] -= delta;
            }
            let delta = &factor * &rhs[col];
            rhs[r] -= delta;
        }
    }
    Some((0..n).map(|i| &rhs[i] / &m[i][i]).collect())
}

/// Draw a vertical point: free coordinates from a small integer box,
/// `z_chart' = 1`, and per component the `k+1` coefficients `a_{m 1_chart}`
/// solved exactly from the linear system `D_t^q . P = 0`. Retries with
/// derived seeds on the measure-zero singular draws.
pub fn sample_vertical_point(space: &JetSpace, seed: u64) -> Result<VerticalPoint> {
    sample_vertical_point_chart(space, 1, seed, &[])
}

pub fn sample_vertical_point_chart(
    space: &JetSpace,
    chart: u32,
    seed: u64,
    force: &[(VarId, Rat)],
) -> Result<VerticalPoint> {
    const RETRIES: u32 = 32;
    for attempt in 0..RETRIES {
        let derived = seed.wrapping_add((attempt as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        if let Some(point) = try_sample(space, chart, seed, derived, force)? {
            return Ok(point);
        }
    }
    Err(Error::SamplingExhausted(RETRIES))
}

fn try_sample(
    space: &JetSpace,
    chart: u32,
    seed: u64,
    derived: u64,
    force: &[(VarId, Rat)],
) -> Result<Option<VerticalPoint>> {
    let cfg = &space.cfg;
    let mut rng = ChaCha8Rng::seed_from_u64(derived);
    let mut point: BTreeMap<VarId, Rat> = BTreeMap::new();
    for i in 1..=cfg.n {
        point.insert(VarId::z(i), draw_rat(&mut rng));
        for p in 1..=cfg.k {
            point.insert(VarId::jet(i, p), draw_rat(&mut rng));
        }
    }
    point.insert(VarId::jet(chart, 1), Rat::one());
    if cfg.is_log() {
        for j in 1..=cfg.components() {
            point.insert(VarId::w(j), draw_nonzero(&mut rng));
            for p in 1..=cfg.k {
                point.insert(VarId::wjet(j, p), draw_rat(&mut rng));
            }
        }
    }
    // unknown slots m * 1_chart per component; everything else is free
    let unknowns: Vec<Vec<VarId>> = (1..=cfg.components())
        .map(|j| {
            (0..=cfg.k)
                .map(|m| VarId::param(j, mi_bump(&vec![0; cfg.n as usize], chart, m)))
                .collect()
        })
        .collect();
    for j in 1..=cfg.components() {
        for alpha in cfg.param_slots(j) {
            let v = VarId::param(j, alpha);
            if !unknowns[(j - 1) as usize].contains(&v) {
                point.insert(v, draw_rat(&mut rng));
            }
        }
        for u in &unknowns[(j - 1) as usize] {
            cfg.validate_var(u).map_err(|_| {
                Error::Config(format!(
                    "unknown slot {u} collides with the normalised coefficient; \
                     pick another chart"
                ))
            })?;
        }
    }
    for (v, val) in force {
        point.insert(v.clone(), val.clone());
    }
    let eqs = space.defining_equations(DiffBase::Dt);
    for j in 1..=cfg.components() {
        let slots = &unknowns[(j - 1) as usize];
        let mut matrix = vec![vec![Rat::zero(); slots.len()]; slots.len()];
        let mut rhs = vec![Rat::zero(); slots.len()];
        for (row, eq) in eqs[(j - 1) as usize].iter().enumerate() {
            debug_assert_eq!(eq.epow, 0);
            for (mono, coef) in eq.num.terms() {
                let unknown = slots
                    .iter()
                    .position(|u| mono.exponent(u) > 0);
                match unknown {
                    Some(col) => {
                        let rest = mono.div_var(&slots[col], 1).expect("linear in moduli");
                        let val = Poly::term(rest, coef.clone()).eval(&point)?;
                        matrix[row][col] += val;
                    }
                    None => {
                        let val = Poly::term(mono.clone(), coef.clone()).eval(&point)?;
                        rhs[row] -= val;
                    }
                }
            }
        }
        match solve_linear(matrix, rhs) {
            Some(solution) => {
                for (slot, val) in slots.iter().zip(solution) {
                    point.insert(slot.clone(), val);
                }
            }
            None => return Ok(None),
        }
    }
    // the construction guarantees this; assert it anyway
    for eqs_j in &eqs {
        for eq in eqs_j {
            if !eq.eval(&point)?.is_zero() {
                return Err(Error::ConstructionCheck(
                    "sampled point misses the variety".into(),
                ));
            }
        }
    }
    Ok(Some(VerticalPoint {
        seed,
        chart,
        assignment: point,
    }))
}

/// Exact rank of the frame evaluated at a point (rows are coefficient
/// vectors over the ambient chart directions).
pub fn rank_at_point(
    cfg: &JetConfig,
    fields: &[&VectorField],
    point: &VerticalPoint,
) -> Result<usize> {
    rank_with_vars(&cfg.all_vars(), fields, point)
}

pub fn rank_with_vars(
    vars: &[VarId],
    fields: &[&VectorField],
    point: &VerticalPoint,
) -> Result<usize> {
    let rows = fields
        .iter()
        .map(|f| {
            vars.iter()
                .map(|v| f.coeff(v).eval(&point.assignment))
                .collect::<Result<Vec<Rat>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(linalg::rank(rows))
}

/// Exact vanishing of the Lie derivative of every defining equation along
/// the field, at the point.
pub fn gradient_orthogonality(
    space: &JetSpace,
    field: &VectorField,
    point: &VerticalPoint,
) -> Result<bool> {
    for eqs_j in space.defining_equations(DiffBase::Dt) {
        for eq in eqs_j {
            if !field.apply(&eq).eval(&point.assignment)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// At a vertical point both defining systems vanish; off the variety both
/// are nonzero. Checks the chart equivalence of the `D_t` and `D_{z1}`
/// systems numerically.
pub fn dz1_system_equivalence(space: &JetSpace, point: &VerticalPoint) -> Result<bool> {
    let dt = space.defining_equations(DiffBase::Dt);
    let dz = space.defining_equations(DiffBase::Dz1);
    let vanish = |sys: &[Vec<FracPoly>], assignment: &BTreeMap<VarId, Rat>| -> Result<bool> {
        for eqs in sys {
            for eq in eqs {
                if !eq.num.eval(assignment)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    };
    if !(vanish(&dt, &point.assignment)? && vanish(&dz, &point.assignment)?) {
        return Ok(false);
    }
    // perturb one solved coefficient: both systems must leave the variety
    let slot = VarId::param(1, mi_bump(&vec![0; space.cfg.n as usize], point.chart, 0));
    let mut off = point.assignment.clone();
    off.insert(slot.clone(), off[&slot].clone() + Rat::one());
    Ok(!vanish(&dt, &off)? && !vanish(&dz, &off)?)
}

// ---------------------------------------------------------------------------
// pole audit
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PoleRow {
    pub tag: String,
    pub params: serde_json::Value,
    pub computed: u32,
    /// Closed-form value as printed in the source table (when one exists).
    pub nominal: Option<u32>,
    /// Closed-form value consistent with the monomial grading.
    pub predicted: Option<u32>,
    pub matches_nominal: Option<bool>,
    pub matches_predicted: Option<bool>,
    pub a_degree: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PoleTable {
    pub rows: Vec<PoleRow>,
    pub max_pole_order: u32,
    pub max_tag: String,
    pub headline: u32,
    pub a_degree_ok: bool,
}

fn pole_predictions(cfg: &JetConfig, field: &crate::forge::FrameField) -> (Option<u32>, Option<u32>) {
    let k = cfg.k;
    match field.tag.as_str() {
        "T_jq" => {
            let j = field.params["j"].as_u64().unwrap() as u32;
            let q = field.params["q"].as_u64().unwrap() as u32;
            if j == 1 {
                (Some(0), Some(0))
            } else {
                let nominal = if q <= 1 { k + q } else { k - 1 + 2 * q };
                let predicted = if q == 0 { 0 } else { k + q };
                (Some(nominal), Some(predicted))
            }
        }
        "T_sym" => {
            let l = field.params["l"].as_u64().unwrap() as u32;
            (Some(2 * (k - l)), Some(k - l + 2))
        }
        "T_param" => {
            let beta: Vec<u32> = field.params["beta"]
                .as_array()
                .unwrap()
                .iter()
                .map(|v| v.as_u64().unwrap() as u32)
                .collect();
            let len = mi_len(&beta);
            if len >= k + 1 {
                (Some(k + 1), Some(k + 1))
            } else {
                (Some(4 * k + len - 2), Some(4 * k + len - 2))
            }
        }
        // only the 3k envelope is claimed for the logarithmic family
        "T_w" => (None, None),
        _ => (None, None),
    }
}

/// Per-field computed pole order against the closed forms, the frame
/// maximum and the moduli-degree audit.
pub fn pole_audit(frame: &FrameSpec) -> PoleTable {
    let cfg = &frame.config;
    let mut rows = Vec::new();
    let mut max_pole = 0;
    let mut max_tag = String::new();
    for field in &frame.fields {
        let (nominal, predicted) = pole_predictions(cfg, field);
        if field.pole_order >= max_pole {
            max_pole = field.pole_order;
            max_tag = format!("{} {}", field.tag, field.params);
        }
        rows.push(PoleRow {
            tag: field.tag.clone(),
            params: field.params.clone(),
            computed: field.pole_order,
            nominal,
            predicted,
            matches_nominal: nominal.map(|v| v == field.pole_order),
            matches_predicted: predicted.map(|v| v == field.pole_order),
            a_degree: field.a_degree,
        });
    }
    let a_degree_ok = frame.fields.iter().all(|f| f.a_degree <= 1);
    PoleTable {
        rows,
        max_pole_order: max_pole,
        max_tag,
        headline: 5 * cfg.k - 2,
        a_degree_ok,
    }
}

// ---------------------------------------------------------------------------
// identity suite
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &str, pass: bool, detail: impl Into<String>) -> CheckResult {
    CheckResult {
        name: name.into(),
        pass,
        detail: detail.into(),
    }
}

/// `B(z1) . B[t] = I` exactly, after expressing `B[t]` in standard jets.
pub fn bell_inverse_identity(cfg: &JetConfig) -> bool {
    let k = cfg.k;
    let bz = bell_matrix_z1(cfg);
    let bt = bell_matrix_t(cfg);
    let sub = std_from_geo(cfg);
    for p in 1..=k {
        for q in 1..=k {
            let mut acc = FracPoly::zero();
            for m in 1..=k {
                let rhs = bt.get(m, q).substitute(&sub);
                acc = acc.add(&FracPoly::from(bz.get(p, m).clone()).mul(&rhs));
            }
            let expected = if p == q {
                FracPoly::from(Poly::one())
            } else {
                FracPoly::zero()
            };
            if acc != expected {
                return false;
            }
        }
    }
    true
}

fn random_series(rng: &mut ChaCha8Rng, k: usize, unit_slope: bool) -> TruncSeries {
    let mut coeffs = vec![Rat::zero(); k + 1];
    for c in coeffs.iter_mut() {
        *c = draw_rat(rng);
    }
    if unit_slope {
        coeffs[0] = Rat::zero();
        coeffs[1] = draw_nonzero(rng);
    }
    TruncSeries::new(coeffs)
}

/// Faà di Bruno against the truncated-series oracle:
/// `g^(p) = sum_q B_{p,q}(h) (g o h^{-1})^(q) o h`, on seeded random curves.
pub fn faa_di_bruno_oracle(k: u32, trials: u32, seed: u64) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let h = random_series(&mut rng, k as usize, true);
        let g = random_series(&mut rng, k as usize, false);
        let hinv = h.reversion()?;
        let gh = g.compose(&hinv);
        let hjets: Vec<Rat> = (1..=k as usize).map(|i| h.coeff(i)).collect();
        for p in 1..=k {
            let mut rhs = Rat::zero();
            for q in 1..=p {
                rhs += bell_value(p, q, &hjets) * gh.coeff(q as usize);
            }
            if g.coeff(p as usize) != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Bell arrays compose: `B(g1 o g2) = B(g2) (B(g1) o g2)` on curve jets.
pub fn bell_composition_oracle(k: u32, trials: u32, seed: u64) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let g2 = random_series(&mut rng, k as usize, true);
        let mut g1 = random_series(&mut rng, k as usize, false);
        g1.coeffs[0] = Rat::zero();
        let composed = g1.compose(&g2);
        let jets = |s: &TruncSeries| -> Vec<Rat> { (1..=k as usize).map(|i| s.coeff(i)).collect() };
        let (jc, j1, j2) = (jets(&composed), jets(&g1), jets(&g2));
        for p in 1..=k {
            for q in 1..=k {
                let lhs = bell_value(p, q, &jc);
                let mut rhs = Rat::zero();
                for m in 1..=k {
                    rhs += bell_value(p, m, &j2) * bell_value(m, q, &j1);
                }
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn random_poly(rng: &mut ChaCha8Rng, vars: &[VarId]) -> Poly {
    let mut p = Poly::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let mut mono = crate::var::Monomial::one();
        for _ in 0..rng.gen_range(0..=2) {
            let v = vars[rng.gen_range(0..vars.len())].clone();
            mono = mono.mul_var(&v, rng.gen_range(1..=2));
        }
        p = &p + &Poly::term(mono, draw_rat(rng));
    }
    p
}

fn random_field(rng: &mut ChaCha8Rng, vars: &[VarId]) -> VectorField {
    let mut coeffs = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let dir = vars[rng.gen_range(0..vars.len())].clone();
        coeffs.push((dir, FracPoly::from(random_poly(rng, vars))));
    }
    VectorField::from_coeffs(coeffs)
}

/// The triangular operator identity
/// `D_t^p / p! = sum_q B_{p,q}(z1) D_{z1}^q / q!` checked on random
/// polynomials of the full jet chart (mechanical substitute for the
/// admitted combinatorial proof).
pub fn dtd1_identity(space: &JetSpace, trials: u32, seed: u64) -> bool {
    let cfg = &space.cfg;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vars = cfg.all_vars();
    let bz = bell_matrix_z1(cfg);
    for _ in 0..trials {
        let f = FracPoly::from(random_poly(&mut rng, &vars));
        let mut dtp = f.clone();
        let mut dzq: Vec<FracPoly> = vec![f.clone()];
        for q in 1..=cfg.k {
            dzq.push(space.dz1().apply(&dzq[(q - 1) as usize]));
        }
        for p in 1..=cfg.k {
            dtp = space.dt().apply(&dtp);
            let lhs = dtp.scale(&(Rat::one() / factorial(p)));
            let mut rhs = FracPoly::zero();
            for q in 1..=p {
                let term = dzq[q as usize].scale(&(Rat::one() / factorial(q)));
                rhs = rhs.add(&FracPoly::from(bz.get(p, q).clone()).mul(&term));
            }
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// Forward and inverse binomial expansions of iterated adjoints on random
/// fields, against the defining polynomial.
pub fn binomial_adjoint_check(space: &JetSpace, qmax: u32, trials: u32, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vars = space.cfg.all_vars();
    let target = FracPoly::from(space.defining_poly(1).clone());
    for _ in 0..trials {
        let v = random_field(&mut rng, &vars);
        for q in 0..=qmax {
            let (lhs, rhs) = space.binomial_adjoint_forward(DiffBase::Dt, q, &v, &target);
            if lhs != rhs {
                return false;
            }
            let (lhs, rhs) = space.binomial_adjoint_inverse(DiffBase::Dt, q, &v, &target);
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// Iterations of the geometric-chart chain-rule field agree with the
/// `(1/z_1') D_t` definition on polynomials in `z` alone, up to order `k`.
pub fn dz1_geometric_agreement(space: &JetSpace, trials: u32, seed: u64) -> bool {
    let cfg = &space.cfg;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let zvars: Vec<VarId> = (1..=cfg.n).map(VarId::z).collect();
    let geo = dz1_geometric(cfg);
    let back = std_from_geo(cfg);
    for _ in 0..trials {
        let q = random_poly(&mut rng, &zvars);
        let mut via_geo = FracPoly::from(q.clone());
        let mut via_std = FracPoly::from(q);
        for _ in 1..=cfg.k {
            via_geo = geo.apply(&via_geo);
            via_std = space.dz1().apply(&via_std);
            if via_geo.substitute(&back) != via_std {
                return false;
            }
        }
    }
    true
}

/// The full identity suite for one instance.
pub fn identity_suite(space: &JetSpace, seed: u64) -> Vec<CheckResult> {
    let cfg = &space.cfg;
    let mut out = Vec::new();
    out.push(check(
        "bell_inverse",
        bell_inverse_identity(cfg),
        format!("B(z1) B[t] = I at k = {}", cfg.k),
    ));
    let faa = faa_di_bruno_oracle(cfg.k, 100, seed).unwrap_or(false);
    out.push(check(
        "faa_di_bruno",
        faa,
        "100 seeded curves against the series oracle",
    ));
    let comp = bell_composition_oracle(cfg.k, 20, seed ^ 0xb).unwrap_or(false);
    out.push(check(
        "bell_composition",
        comp,
        "Bell arrays compose on curve jets",
    ));
    out.push(check(
        "dtd1",
        dtd1_identity(space, 8, seed ^ 0x1),
        "triangular base change between the formal derivatives",
    ));
    out.push(check(
        "binomial_adjoint",
        binomial_adjoint_check(space, cfg.k.min(4), 4, seed ^ 0x2),
        "forward and inverse adjoint expansions",
    ));
    out.push(check(
        "tgt_sym_internal",
        vertical_t_internal_identity(cfg),
        "vertical fields shift the Bell array rows",
    ));
    out.push(check(
        "dz1_geometric",
        dz1_geometric_agreement(space, 6, seed ^ 0x3),
        "geometric chain-rule field agrees on base polynomials",
    ));
    out
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankResult {
    pub seed: u64,
    pub rank: usize,
    pub expected: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub config: JetConfig,
    pub verdicts: Vec<TangencyVerdict>,
    pub rank_results: Vec<RankResult>,
    pub gradient_results: Vec<CheckResult>,
    pub pole_table: Option<PoleTable>,
    pub identity_suite: Vec<CheckResult>,
    pub negative_controls: Vec<CheckResult>,
    pub seeds: Vec<u64>,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct SuiteSelection {
    pub tangency: bool,
    pub rank: bool,
    pub gradients: bool,
    pub pole: bool,
    pub identities: bool,
}

impl SuiteSelection {
    pub fn all() -> Self {
        SuiteSelection {
            tangency: true,
            rank: true,
            gradients: true,
            pole: true,
            identities: true,
        }
    }

    pub fn none() -> Self {
        SuiteSelection {
            tangency: false,
            rank: false,
            gradients: false,
            pole: false,
            identities: false,
        }
    }
}

/// Run the selected suites over a frame and aggregate a deterministic
/// report; `pass` is the conjunction of every verdict.
pub fn run_verification(
    space: &JetSpace,
    frame: &FrameSpec,
    suites: SuiteSelection,
    points: u32,
    seed: u64,
) -> Result<Report> {
    let cfg = &space.cfg;
    let mut pass = true;
    let mut verdicts = Vec::new();
    if suites.tangency {
        verdicts = frame
            .fields
            .par_iter()
            .map(|f| {
                let mode = if f.family == Family::Logarithmic {
                    TangencyMode::ModuloQ
                } else {
                    TangencyMode::Identical
                };
                let (ok, witness) = check_tangency(space, &f.field, mode);
                TangencyVerdict {
                    tag: f.tag.clone(),
                    params: f.params.clone(),
                    mode,
                    pass: ok,
                    witness,
                }
            })
            .collect();
        pass &= verdicts.iter().all(|v| v.pass);
    }

    let seeds: Vec<u64> = (0..points).map(|i| seed.wrapping_add(i as u64)).collect();
    let mut rank_results = Vec::new();
    let mut gradient_results = Vec::new();
    let mut negative_controls = Vec::new();
    if suites.rank || suites.gradients {
        let sampled = seeds
            .par_iter()
            .map(|&s| sample_vertical_point(space, s))
            .collect::<Result<Vec<_>>>()?;
        let expected = expected_dimension(cfg);
        if suites.rank {
            let fields: Vec<&VectorField> = frame.fields.iter().map(|f| &f.field).collect();
            for point in &sampled {
                let rank = rank_at_point(cfg, &fields, point)?;
                pass &= rank as u64 == expected;
                rank_results.push(RankResult {
                    seed: point.seed,
                    rank,
                    expected,
                });
            }
            // negative control: dropping the base direction loses a rank
            if let Some(first) = sampled.first() {
                let reduced: Vec<&VectorField> = frame
                    .fields
                    .iter()
                    .filter(|f| !(f.tag == "T_jq" && f.params["j"] == 1))
                    .map(|f| &f.field)
                    .collect();
                let rank = rank_at_point(cfg, &reduced, first)?;
                let ok = rank as u64 == expected - 1;
                pass &= ok;
                negative_controls.push(check(
                    "drop_base_direction",
                    ok,
                    format!("rank {} vs expected {}", rank, expected - 1),
                ));
            }
        }
        if suites.gradients {
            for point in &sampled {
                let mut ok = true;
                for f in &frame.fields {
                    ok &= gradient_orthogonality(space, &f.field, point)?;
                }
                ok &= dz1_system_equivalence(space, point)?;
                pass &= ok;
                gradient_results.push(check(
                    "gradient_orthogonality",
                    ok,
                    format!("seed {}", point.seed),
                ));
            }
            if let Some(first) = sampled.first() {
                // uncorrected moduli direction is not tangent
                let raw = VectorField::unit(VarId::param(1, vec![0; cfg.n as usize]));
                let ok = !gradient_orthogonality(space, &raw, first)?;
                pass &= ok;
                negative_controls.push(check(
                    "uncorrected_direction_fails",
                    ok,
                    "d/da_0 meets a nonzero Lie derivative",
                ));
                // a bare coordinate direction the equations depend on fails
                // tangency with the expected witness line
                let (bare, mode) = if cfg.n >= 2 {
                    (VectorField::unit(VarId::jet(cfg.n, cfg.k)), TangencyMode::Identical)
                } else {
                    (crate::bell::wjet_field(cfg, 1, cfg.k)?, TangencyMode::ModuloQ)
                };
                let (tangent, witness) = check_tangency(space, &bare, mode);
                let ok = !tangent && witness == Some((1, cfg.k as usize));
                pass &= ok;
                negative_controls.push(check(
                    "bare_jet_direction_fails",
                    ok,
                    format!("witness {witness:?}"),
                ));
            }
        }
    }

    let pole_table = if suites.pole {
        let table = pole_audit(frame);
        pass &= table.a_degree_ok;
        pass &= table
            .rows
            .iter()
            .all(|r| r.matches_predicted.unwrap_or(true));
        if !cfg.is_log() && cfg.n >= 2 {
            pass &= table.max_pole_order == table.headline;
        }
        Some(table)
    } else {
        None
    };

    let identity_results = if suites.identities {
        let results = identity_suite(space, seed);
        pass &= results.iter().all(|r| r.pass);
        results
    } else {
        Vec::new()
    };

    Ok(Report {
        config: cfg.clone(),
        verdicts,
        rank_results,
        gradient_results,
        pole_table,
        identity_suite: identity_results,
        negative_controls,
        seeds,
        pass,
    })
}

/// Convenience: build the frame and verify everything.
pub fn verify_instance(cfg: JetConfig, points: u32, seed: u64) -> Result<(FrameSpec, Report)> {
    let space = JetSpace::new(cfg);
    let frame = FrameBuilder::new(&space).assemble()?;
    let report = run_verification(&space, &frame, SuiteSelection::all(), points, seed)?;
    Ok((frame, report))
}

// ---------------------------------------------------------------------------
// oracle cross-checks on curves
// ---------------------------------------------------------------------------

/// Build a seeded random curve lying in a sampled fiber: free curve
/// coefficients and moduli from the box, then the `k+1` coefficients
/// `a_{m 1_1}` solved so the defining polynomials vanish along the curve
/// to order `k`.
pub fn sample_vertical_curve(
    space: &JetSpace,
    seed: u64,
) -> Result<(TruncCurve, BTreeMap<VarId, Rat>)> {
    let cfg = &space.cfg;
    const RETRIES: u32 = 32;
    'attempt: for attempt in 0..RETRIES {
        let derived = seed.wrapping_add((attempt as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let mut rng = ChaCha8Rng::seed_from_u64(derived);
        let k = cfg.k as usize;
        let mut z: Vec<TruncSeries> = (0..cfg.n).map(|_| random_series(&mut rng, k, false)).collect();
        z[0].coeffs[1] = Rat::one();
        let w: Vec<TruncSeries> = if cfg.is_log() {
            (0..cfg.components())
                .map(|_| {
                    let mut s = random_series(&mut rng, k, false);
                    s.coeffs[0] = draw_nonzero(&mut rng);
                    s
                })
                .collect()
        } else {
            Vec::new()
        };
        let curve = TruncCurve { z, w };
        let mut params: BTreeMap<VarId, Rat> = BTreeMap::new();
        let unknowns: Vec<Vec<VarId>> = (1..=cfg.components())
            .map(|j| {
                (0..=cfg.k)
                    .map(|m| VarId::param(j, mi_bump(&vec![0; cfg.n as usize], 1, m)))
                    .collect()
            })
            .collect();
        for j in 1..=cfg.components() {
            for alpha in cfg.param_slots(j) {
                let v = VarId::param(j, alpha);
                if !unknowns[(j - 1) as usize].contains(&v) {
                    params.insert(v, draw_rat(&mut rng));
                }
            }
        }
        for j in 1..=cfg.components() {
            let slots = &unknowns[(j - 1) as usize];
            // coefficient of t^q in P o f = sum over slots + fixed part
            let mut matrix = vec![vec![Rat::zero(); slots.len()]; slots.len()];
            let mut rhs = vec![Rat::zero(); slots.len()];
            let mut fixed = params.clone();
            for u in slots {
                fixed.insert(u.clone(), Rat::zero());
            }
            let fixed_series = curve.substitute_into(space.defining_poly(j), &fixed)?;
            for (col, u) in slots.iter().enumerate() {
                let mut bump = fixed.clone();
                bump.insert(u.clone(), Rat::one());
                let bumped = curve.substitute_into(space.defining_poly(j), &bump)?;
                for (row, mr) in matrix.iter_mut().enumerate() {
                    mr[col] = bumped.coeff(row) - fixed_series.coeff(row);
                }
            }
            for (row, r) in rhs.iter_mut().enumerate() {
                *r = -fixed_series.coeff(row);
            }
            match solve_linear(matrix, rhs) {
                Some(solution) => {
                    for (slot, val) in slots.iter().zip(solution) {
                        params.insert(slot.clone(), val);
                    }
                }
                None => continue 'attempt,
            }
        }
        return Ok((curve, params));
    }
    Err(Error::SamplingExhausted(RETRIES))
}

/// The oracle jets of a vertical curve satisfy the defining equations
/// exactly, and a perturbed curve leaves the variety.
pub fn oracle_vertical_jets(space: &JetSpace, trials: u32, seed: u64) -> Result<bool> {
    let cfg = &space.cfg;
    for t in 0..trials {
        let (curve, params) = sample_vertical_curve(space, seed.wrapping_add(t as u64))?;
        // P o f = 0 mod t^{k+1}
        for j in 1..=cfg.components() {
            let along = curve.substitute_into(space.defining_poly(j), &params)?;
            if along.coeffs.iter().any(|c| !c.is_zero()) {
                return Ok(false);
            }
        }
        let mut point = curve.full_jet()?;
        for (v, val) in &params {
            point.insert(v.clone(), val.clone());
        }
        for eqs in space.defining_equations(DiffBase::Dt) {
            for eq in eqs {
                if !eq.eval(&point)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        if !space.oracle_check_dt(&curve, &params)? {
            return Ok(false);
        }
        // perturbing the curve must leave the fiber: some coefficient bump
        // breaks the system (all of them failing would need the gradient
        // of every defining polynomial to vanish along the whole curve)
        let mut broken = false;
        'bump: for coord in 0..curve.z.len() {
            for order in 0..=cfg.k as usize {
                let mut perturbed = curve.clone();
                perturbed.z[coord].coeffs[order] += Rat::one();
                for j in 1..=cfg.components() {
                    let along = perturbed.substitute_into(space.defining_poly(j), &params)?;
                    if along.coeffs.iter().any(|c| !c.is_zero()) {
                        broken = true;
                        break 'bump;
                    }
                }
            }
        }
        if !broken {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// chart coverage by index permutation
// ---------------------------------------------------------------------------

/// The frame adapted to the chart `z_i0' != 0`, together with the
/// renamed variable universe it lives on: the standard frame with all
/// coordinate indices transposed by `1 <-> i0` (the normalised moduli
/// slot moves along with them).
pub fn frame_for_chart(space: &JetSpace, i0: u32) -> Result<(FrameSpec, Vec<VarId>, Vec<u32>)> {
    let cfg = &space.cfg;
    let mut sigma: Vec<u32> = (1..=cfg.n).collect();
    sigma.swap(0, (i0 - 1) as usize);
    let frame = FrameBuilder::new(space).assemble()?;
    let fields = frame
        .fields
        .into_iter()
        .map(|f| crate::forge::FrameField {
            field: f.field.permute_z(&sigma),
            ..f
        })
        .collect();
    let vars: Vec<VarId> = {
        let mut vs: Vec<VarId> = cfg
            .all_vars()
            .iter()
            .map(|v| crate::jet::permute_var(v, &sigma))
            .collect();
        vs.sort();
        vs
    };
    Ok((
        FrameSpec {
            config: cfg.clone(),
            fields,
        },
        vars,
        sigma,
    ))
}

/// Rename the coordinates of a sampled point along a `z`-index
/// permutation.
pub fn permute_point(point: &VerticalPoint, sigma: &[u32]) -> VerticalPoint {
    VerticalPoint {
        seed: point.seed,
        chart: sigma[(point.chart - 1) as usize],
        assignment: point
            .assignment
            .iter()
            .map(|(v, val)| (crate::jet::permute_var(v, sigma), val.clone()))
            .collect(),
    }
}

/// Spans of the geometric fields: the change-of-basis matrix from the
/// `d/dz_i^(q)` block is triangular with diagonal `(z_1')^q`, and together
/// with the vertical fields the full jet block has nonzero exact
/// determinant (invertible wherever `z_1' != 0`).
pub fn span_checks(cfg: &JetConfig) -> Result<(bool, bool)> {
    use crate::bell::geo_field;
    use crate::bell::vertical_t;
    let k = cfg.k;
    let bz = bell_matrix_z1(cfg);
    let mut triangular = true;
    for i in 2..=cfg.n {
        for q in 1..=k {
            let f = geo_field(cfg, i, q)?;
            for s in 1..=k {
                let c = f.coeff(&VarId::jet(i, s));
                if s < q && !c.is_zero() {
                    triangular = false;
                }
                if s == q && c != FracPoly::from(Poly::var_pow(z1p(), q)) {
                    triangular = false;
                }
            }
        }
    }
    let _ = bz;
    // full (nk) x (nk) block of {T_l} and {geo_field(i, q)}
    let mut dirs = Vec::new();
    for i in 1..=cfg.n {
        for p in 1..=k {
            dirs.push(VarId::jet(i, p));
        }
    }
    let mut rows: Vec<Vec<Poly>> = Vec::new();
    for l in 1..=k {
        let f = vertical_t(cfg, l)?;
        rows.push(dirs.iter().map(|d| f.coeff(d).num.clone()).collect());
    }
    for i in 2..=cfg.n {
        for q in 1..=k {
            let f = geo_field(cfg, i, q)?;
            rows.push(dirs.iter().map(|d| f.coeff(d).num.clone()).collect());
        }
    }
    let det = linalg::det_poly(&rows);
    Ok((triangular, !det.is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::JetCase;

    fn compact(n: u32, k: u32, d: u32) -> JetSpace {
        JetSpace::new(JetConfig::compact(n, k, vec![d]).unwrap().0)
    }

    #[test]
    fn expected_dimension_examples() {
        // (n,k,d,c) = (2,1,2,1): n_d = 5, dim = 5 + 4 - 2 = 7
        let cfg = JetConfig::compact(2, 1, vec![2]).unwrap().0;
        assert_eq!(expected_dimension(&cfg), 7);
        // c components subtract c(k+1)
        let cfg2 = JetConfig::compact(2, 1, vec![1, 2]).unwrap().0;
        assert_eq!(expected_dimension(&cfg2), 2 + 5 + 4 - 4);
        let logc = JetConfig::logarithmic(1, 1, vec![2]).unwrap().0;
        assert_eq!(expected_dimension(&logc), 3 + (1 + 1) * 2 - 2);
    }

    #[test]
    fn sampling_is_deterministic_and_vertical() {
        let sp = compact(2, 1, 2);
        let p1 = sample_vertical_point(&sp, 7).unwrap();
        let p2 = sample_vertical_point(&sp, 7).unwrap();
        assert_eq!(p1.assignment, p2.assignment);
        assert_eq!(p1.assignment[&z1p()], Rat::one());
        let p3 = sample_vertical_point(&sp, 8).unwrap();
        assert_ne!(p1.assignment, p3.assignment);
    }

    #[test]
    fn frame_generates_small_instance() {
        let sp = compact(2, 1, 2);
        let frame = FrameBuilder::new(&sp).assemble().unwrap();
        assert_eq!(frame.fields.len() as u64, expected_dimension(&sp.cfg));
        let fields: Vec<&VectorField> = frame.fields.iter().map(|f| &f.field).collect();
        for seed in [1u64, 2, 3] {
            let point = sample_vertical_point(&sp, seed).unwrap();
            assert_eq!(
                rank_at_point(&sp.cfg, &fields, &point).unwrap() as u64,
                expected_dimension(&sp.cfg)
            );
        }
    }

    #[test]
    fn report_passes_small_instance() {
        let (frame, report) = verify_instance(
            JetConfig::compact(2, 1, vec![2]).unwrap().0,
            2,
            7,
        )
        .unwrap();
        assert!(report.pass, "report: {report:?}");
        assert_eq!(frame.max_pole_order(), 3);
        // determinism of the serialised report
        let (_, again) = verify_instance(
            JetConfig::compact(2, 1, vec![2]).unwrap().0,
            2,
            7,
        )
        .unwrap();
        assert_eq!(
            serde_json::to_string(&report).unwrap(),
            serde_json::to_string(&again).unwrap()
        );
    }

    #[test]
    fn chart_two_covers_z1_stationary_points() {
        // a vertical point with z_1' = 0, z_2' = 1 is covered by the
        // renamed chart-2 frame
        let sp = compact(2, 1, 2);
        let (frame, vars, sigma) = frame_for_chart(&sp, 2).unwrap();
        let base = sample_vertical_point_chart(
            &sp,
            1,
            11,
            &[(VarId::jet(2, 1), Rat::zero())],
        )
        .unwrap();
        let point = permute_point(&base, &sigma);
        assert_eq!(point.assignment[&z1p()], Rat::zero());
        assert_eq!(point.assignment[&VarId::jet(2, 1)], Rat::one());
        let fields: Vec<&VectorField> = frame.fields.iter().map(|f| &f.field).collect();
        let rank = rank_with_vars(&vars, &fields, &point).unwrap();
        assert_eq!(rank as u64, expected_dimension(&sp.cfg));
        // the renamed fields stay orthogonal to the renamed equations
        for eqs in sp.defining_equations(DiffBase::Dt) {
            for eq in eqs {
                let renamed = FracPoly::from(crate::jet::permute_poly(&eq.num, &sigma));
                assert!(renamed.eval(&point.assignment).unwrap().is_zero());
                for f in &fields {
                    assert!(f.apply(&renamed).eval(&point.assignment).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn identity_suite_small() {
        let sp = compact(2, 2, 2);
        for result in identity_suite(&sp, 5) {
            assert!(result.pass, "{} failed: {}", result.name, result.detail);
        }
    }

    #[test]
    fn span_checks_small() {
        for (n, k) in [(2u32, 1u32), (2, 2), (2, 3), (2, 4), (3, 2)] {
            let cfg = JetConfig::compact(n, k, vec![k + 1]).unwrap().0;
            let (tri, full) = span_checks(&cfg).unwrap();
            assert!(tri && full, "(n,k) = ({n},{k})");
            // numerically: full rank of the jet block at sampled points
            let space = JetSpace::new(cfg.clone());
            for seed in [3u64, 4] {
                let point = sample_vertical_point(&space, seed).unwrap();
                let mut fields = Vec::new();
                for l in 1..=k {
                    fields.push(crate::bell::vertical_t(&cfg, l).unwrap());
                }
                for i in 2..=n {
                    for q in 1..=k {
                        fields.push(crate::bell::geo_field(&cfg, i, q).unwrap());
                    }
                }
                let refs: Vec<&VectorField> = fields.iter().collect();
                let jet_dirs: Vec<VarId> = (1..=n)
                    .flat_map(|i| (1..=k).map(move |p| VarId::jet(i, p)))
                    .collect();
                assert_eq!(
                    rank_with_vars(&jet_dirs, &refs, &point).unwrap(),
                    (n * k) as usize,
                    "(n,k) = ({n},{k})"
                );
            }
        }
    }

    #[test]
    fn oracle_vertical_curves_small() {
        let sp = compact(2, 2, 2);
        assert!(oracle_vertical_jets(&sp, 5, 3).unwrap());
        let logsp = JetSpace::new(JetConfig::logarithmic(1, 1, vec![2]).unwrap().0);
        assert!(oracle_vertical_jets(&logsp, 5, 3).unwrap());
    }

    #[test]
    fn log_case_wrong_usage() {
        let cfg = JetConfig {
            n: 1,
            k: 1,
            degrees: vec![2],
            case: JetCase::Logarithmic,
            hat_alpha: None,
        };
        assert!(cfg.validated().is_ok());
    }
}
