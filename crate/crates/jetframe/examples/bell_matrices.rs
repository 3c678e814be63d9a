//! The Bell coordinate-change matrices and the geometric jet transforms:
//! `B(z1)` and `B[t]` are exact inverses once `t^[.]` is expressed in
//! standard jets, and the two coordinate systems round-trip.
//!
//! Run with: `cargo run --example bell_matrices`

use jetframe::bell::{bell_matrix_t, bell_matrix_z1, geo_from_std, std_from_geo, tjet_std};
use jetframe::jet::JetConfig;
use jetframe::poly::{FracPoly, Poly};
use jetframe::var::VarId;

fn main() {
    let (cfg, _) = JetConfig::compact(2, 3, vec![4]).unwrap();
    let k = cfg.k;

    let bz = bell_matrix_z1(&cfg);
    println!("B(z1) at k = {k} (rows p, cols q):");
    for p in 1..=k {
        for q in 1..=k {
            println!("  B_{p}{q} = {}", bz.get(p, q));
        }
    }

    let bt = bell_matrix_t(&cfg);
    println!("\nB[t] in the abstract t-variables:");
    for p in 1..=k {
        for q in 1..=p {
            println!("  B_{p}{q}[t] = {}", bt.get(p, q));
        }
    }

    println!("\nstandard expressions of the inverted-parameter jets:");
    for (p, t) in tjet_std(&cfg).iter().enumerate() {
        println!("  t^[{}] = {}", p + 1, t);
    }

    // the product is the identity matrix, exactly
    let sub = std_from_geo(&cfg);
    let mut all_ok = true;
    for p in 1..=k {
        for q in 1..=k {
            let mut acc = FracPoly::zero();
            for m in 1..=k {
                acc = acc.add(&FracPoly::from(bz.get(p, m).clone()).mul(&bt.get(m, q).substitute(&sub)));
            }
            let expected = if p == q { FracPoly::from(Poly::one()) } else { FracPoly::zero() };
            all_ok &= acc == expected;
        }
    }
    println!("\nB(z1) . B[t] = I exactly: {all_ok}");

    // round-trip a jet polynomial through the geometric chart
    let fwd = geo_from_std(&cfg);
    let back = std_from_geo(&cfg);
    let sample = &Poly::var(VarId::jet(2, 3)) * &Poly::var(VarId::jet(2, 1));
    let there = sample.substitute(&fwd);
    let home = there.substitute(&back);
    println!("\nround trip of {sample}:");
    println!("  geometric form: {there}");
    println!("  back home:      {home}");
    assert_eq!(home, FracPoly::from(sample));
}
