//! Property tests for the algebraic invariants: ring axioms, commuting
//! partials, pole-order grading, evaluation as a ring homomorphism, the
//! Lie-algebra laws of the adjoint action, and serialisation round trips.

use std::collections::BTreeMap;

use proptest::prelude::*;

use num_traits::Zero;

use jetframe::jet::{JetConfig, JetSpace, VectorField};
use jetframe::poly::{rat_int, FracPoly, Poly, Rat};
use jetframe::var::{Monomial, VarId};

fn var_pool() -> Vec<VarId> {
    vec![
        VarId::z(1),
        VarId::z(2),
        VarId::jet(1, 1),
        VarId::jet(2, 1),
        VarId::jet(2, 2),
        VarId::param(1, vec![1, 0]),
        VarId::param(1, vec![0, 0]),
    ]
}

fn arb_monomial() -> impl Strategy<Value = Monomial> {
    proptest::collection::vec((0..7usize, 1..3u32), 0..3).prop_map(|picks| {
        let pool = var_pool();
        Monomial::from_pairs(picks.into_iter().map(|(i, e)| (pool[i].clone(), e)))
    })
}

fn arb_poly() -> impl Strategy<Value = Poly> {
    proptest::collection::vec((arb_monomial(), -4i64..=4), 0..4).prop_map(|terms| {
        let mut p = Poly::zero();
        for (m, c) in terms {
            p = &p + &Poly::term(m, rat_int(c));
        }
        p
    })
}

fn arb_point() -> impl Strategy<Value = BTreeMap<VarId, Rat>> {
    proptest::collection::vec(-3i64..=3, 7).prop_map(|vals| {
        var_pool()
            .into_iter()
            .zip(vals.into_iter().map(rat_int))
            .collect()
    })
}

fn arb_field() -> impl Strategy<Value = VectorField> {
    proptest::collection::vec((0..7usize, arb_poly()), 1..3).prop_map(|coeffs| {
        let pool = var_pool();
        VectorField::from_coeffs(
            coeffs
                .into_iter()
                .map(|(i, p)| (pool[i].clone(), FracPoly::from(p))),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn add_commutes(a in arb_poly(), b in arb_poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
    }

    #[test]
    fn mul_associates(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn mul_distributes(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn partials_commute(a in arb_poly(), u in 0..7usize, v in 0..7usize) {
        let pool = var_pool();
        let (u, v) = (&pool[u], &pool[v]);
        prop_assert_eq!(a.partial(u).partial(v), a.partial(v).partial(u));
    }

    #[test]
    fn eval_is_ring_morphism(a in arb_poly(), b in arb_poly(), pt in arb_point()) {
        let sum = (&a + &b).eval(&pt).unwrap();
        let prod = (&a * &b).eval(&pt).unwrap();
        let (ea, eb) = (a.eval(&pt).unwrap(), b.eval(&pt).unwrap());
        prop_assert_eq!(sum, &ea + &eb);
        prop_assert_eq!(prod, ea * eb);
    }

    #[test]
    fn pole_order_grading(a in arb_monomial(), b in arb_monomial()) {
        // additive on monomial products
        let (pa, pb) = (Poly::term(a.clone(), rat_int(1)), Poly::term(b.clone(), rat_int(1)));
        let prod = &pa * &pb;
        prop_assert_eq!(
            prod.pole_order().unwrap(),
            pa.pole_order().unwrap() + pb.pole_order().unwrap()
        );
    }

    #[test]
    fn pole_order_subadditive(a in arb_poly(), b in arb_poly()) {
        let sum = &a + &b;
        if !sum.is_zero() && !a.is_zero() && !b.is_zero() {
            prop_assert!(
                sum.pole_order().unwrap() <= a.pole_order().unwrap().max(b.pole_order().unwrap())
            );
        }
    }

    #[test]
    fn frac_mul_normalizes(a in arb_poly(), e in 0..3u32) {
        let f = FracPoly { num: a, epow: e }.normalize();
        if f.epow > 0 {
            prop_assert!(f.num.div_var(&jetframe::poly::z1p()).is_none());
        }
    }

    #[test]
    fn poly_json_round_trip(a in arb_poly()) {
        let json = serde_json::to_string(&a).unwrap();
        let back: Poly = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn poly_text_round_trip(a in arb_poly()) {
        let text = a.to_string();
        let back = Poly::parse(&text).unwrap();
        prop_assert_eq!(back.to_string(), text);
        prop_assert_eq!(back, a);
    }

    #[test]
    fn field_json_round_trip(v in arb_field()) {
        let json = serde_json::to_string(&v).unwrap();
        let back: VectorField = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, v);
    }
}

fn space() -> JetSpace {
    JetSpace::new(JetConfig::compact(2, 2, vec![2]).unwrap().0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn adjoint_antisymmetric(a in arb_field(), b in arb_field()) {
        prop_assert_eq!(a.adjoint(&b), b.adjoint(&a).neg());
    }

    #[test]
    fn adjoint_bilinear(a in arb_field(), b in arb_field(), c in arb_field()) {
        let lhs = a.adjoint(&b.add(&c));
        let rhs = a.adjoint(&b).add(&a.adjoint(&c));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn jacobi_identity(a in arb_field(), b in arb_field(), c in arb_field()) {
        let total = a.adjoint(&b.adjoint(&c))
            .add(&b.adjoint(&c.adjoint(&a)))
            .add(&c.adjoint(&a.adjoint(&b)));
        prop_assert!(total.is_zero());
    }

    #[test]
    fn adjoint_leibniz(f in arb_poly(), a in arb_field(), b in arb_field()) {
        // V1 ad (f V2) = (V1 . f) V2 + f (V1 ad V2)
        let ff = FracPoly::from(f);
        let lhs = a.adjoint(&b.scale_frac(&ff));
        let rhs = b
            .scale_frac(&a.apply(&ff))
            .add(&a.adjoint(&b).scale_frac(&ff));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivation_leibniz(a in arb_field(), f in arb_poly(), g in arb_poly()) {
        let (ff, gg) = (FracPoly::from(f), FracPoly::from(g));
        let lhs = a.apply(&ff.mul(&gg));
        let rhs = a.apply(&ff).mul(&gg).add(&ff.mul(&a.apply(&gg)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn binomial_expansions_random_fields(v in arb_field(), q in 0..3u32) {
        let sp = space();
        let target = FracPoly::from(sp.defining_poly(1).clone());
        let (l1, r1) = sp.binomial_adjoint_forward(jetframe::jet::DiffBase::Dt, q, &v, &target);
        prop_assert_eq!(l1, r1);
        let (l2, r2) = sp.binomial_adjoint_inverse(jetframe::jet::DiffBase::Dt, q, &v, &target);
        prop_assert_eq!(l2, r2);
    }
}

/// The coordinate-change system on honest curves: standard jets are the
/// Bell combinations of the geometric jets, exactly.
#[test]
fn geometric_change_on_random_curves() {
    use jetframe::bell::bell_value;
    use jetframe::series::{TruncCurve, TruncSeries};
    use rand::{Rng, SeedableRng};
    let k = 4usize;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2718);
    for _ in 0..40 {
        let mut z: Vec<TruncSeries> = (0..2)
            .map(|_| {
                TruncSeries::new((0..=k).map(|_| rat_int(rng.gen_range(-3..=3))).collect())
            })
            .collect();
        while z[0].coeff(1).is_zero() {
            z[0].coeffs[1] = rat_int(rng.gen_range(-3..=3));
        }
        let curve = TruncCurve { z, w: vec![] };
        let jet = curve.jet();
        let geo = curve.geo_jet().unwrap();
        let z1_jets: Vec<Rat> = (1..=k as u32).map(|p| jet[&VarId::jet(1, p)].clone()).collect();
        for p in 1..=k as u32 {
            let mut rhs = Rat::zero();
            for q in 1..=p {
                rhs += bell_value(p, q, &z1_jets) * geo[&VarId::geo(2, q)].clone();
            }
            assert_eq!(jet[&VarId::jet(2, p)], rhs, "order {p}");
        }
    }
}

/// The formal derivative reads the honest t-derivative on 100 seeded
/// random curves with random moduli, exactly.
#[test]
fn oracle_dt_on_hundred_random_curves() {
    use jetframe::series::{TruncCurve, TruncSeries};
    use rand::{Rng, SeedableRng};
    let sp = JetSpace::new(JetConfig::compact(2, 2, vec![2]).unwrap().0);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(314);
    let draw = |rng: &mut rand_chacha::ChaCha8Rng| rat_int(rng.gen_range(-3..=3));
    for _ in 0..100 {
        let curve = TruncCurve {
            z: (0..2)
                .map(|_| TruncSeries::new((0..=2).map(|_| draw(&mut rng)).collect()))
                .collect(),
            w: vec![],
        };
        let params: BTreeMap<VarId, Rat> = sp
            .cfg
            .param_slots(1)
            .into_iter()
            .map(|alpha| (VarId::param(1, alpha), draw(&mut rng)))
            .collect();
        assert!(sp.oracle_check_dt(&curve, &params).unwrap());
    }
}

/// Iterated adjoint of the bare jet directions:
/// `D_t^p ad d/dz_j^(q) = (-1)^p (q!/(q-p)!) d/dz_j^(q-p)`, zero past `q`.
#[test]
fn iterated_adjoint_closed_form() {
    for k in 1..=5u32 {
        let sp = JetSpace::new(JetConfig::compact(2, k, vec![k + 1]).unwrap().0);
        for j in 1..=2u32 {
            for q in 1..=k {
                let mut current = VectorField::unit(VarId::jet(j, q));
                for p in 1..=k {
                    current = sp.dt().adjoint(&current);
                    if p > q {
                        assert!(current.is_zero(), "p={p} > q={q} should vanish");
                        continue;
                    }
                    let mut coef = rat_int(if p % 2 == 0 { 1 } else { -1 });
                    for s in (q - p + 1)..=q {
                        coef *= rat_int(s as i64);
                    }
                    let dir = if q == p { VarId::z(j) } else { VarId::jet(j, q - p) };
                    assert_eq!(
                        current,
                        VectorField::unit(dir).scale(&coef),
                        "k={k}, j={j}, q={q}, p={p}"
                    );
                }
            }
        }
    }
}
