//! The truncated-power-series oracle: exact curves checking the symbolic
//! machinery from the outside — Taylor jets, composition/reversion for
//! the geometric coordinates, the Faà di Bruno formula, and curves solved
//! into fibers of the universal family.
//!
//! Run with: `cargo run --example jet_oracle`

use jetframe::jet::{DiffBase, JetConfig, JetSpace};
use jetframe::poly::rat_int;
use jetframe::series::{TruncCurve, TruncSeries};
use jetframe::verify::{faa_di_bruno_oracle, sample_vertical_curve};

use num_traits::Zero;

fn main() {
    // the parabola f = (t, t^2) at order 2
    let curve = TruncCurve {
        z: vec![
            TruncSeries::new(vec![rat_int(0), rat_int(1), rat_int(0)]),
            TruncSeries::new(vec![rat_int(0), rat_int(0), rat_int(1)]),
        ],
        w: vec![],
    };
    println!("jet of the parabola: ");
    for (v, val) in curve.jet() {
        println!("  {v} = {val}");
    }
    println!("geometric jet (reparametrised by the first coordinate):");
    for (v, val) in curve.geo_jet().unwrap() {
        println!("  {v} = {val}");
    }

    // Faà di Bruno on seeded random curves, exactly
    for k in 1..=4u32 {
        let ok = faa_di_bruno_oracle(k, 25, 99 + k as u64).unwrap();
        println!("Faà di Bruno at order {k} on 25 random curves: {ok}");
    }

    // a curve solved into a fiber satisfies the whole derivative tower
    let (cfg, _) = JetConfig::compact(2, 2, vec![3]).unwrap();
    let space = JetSpace::new(cfg);
    let (curve, params) = sample_vertical_curve(&space, 5).unwrap();
    let along = curve
        .substitute_into(space.defining_poly(1), &params)
        .unwrap();
    println!(
        "\nP along the sampled vertical curve: {:?} (all zero: {})",
        along.coeffs,
        along.coeffs.iter().all(Zero::is_zero)
    );
    println!(
        "formal derivative matches the honest t-derivative: {}",
        space.oracle_check_dt(&curve, &params).unwrap()
    );

    let mut point = curve.full_jet().unwrap();
    point.extend(params.clone());
    let vanish = space
        .defining_equations(DiffBase::Dt)
        .iter()
        .flatten()
        .all(|eq| eq.eval(&point).unwrap().is_zero());
    println!("oracle jets satisfy the defining equations exactly: {vanish}");
}
