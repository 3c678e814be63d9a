//! The logarithmic case on the straightened chart `w^d = sum a_alpha
//! z^alpha`: the extra `T_w` family is tangent modulo the defining
//! rewrite, and the full frame still matches the expected dimension.
//!
//! Run with: `cargo run --example log_frame`

use jetframe::forge::{reduce_w, Family, FrameBuilder};
use jetframe::jet::{DiffBase, JetConfig, JetSpace};
use jetframe::verify::expected_dimension;

fn main() {
    let (cfg, _) = JetConfig::logarithmic(1, 1, vec![2]).unwrap();
    let space = JetSpace::new(cfg);
    println!("defining polynomial: {}", space.defining_poly(1));

    let builder = FrameBuilder::new(&space);
    let frame = builder.assemble().unwrap();
    println!(
        "\nlog frame: {} fields for expected dimension {}",
        frame.fields.len(),
        expected_dimension(&space.cfg)
    );
    for family in [
        Family::Slanted,
        Family::Vertical,
        Family::Parameter,
        Family::Logarithmic,
    ] {
        println!("  {:?}: {}", family, frame.family_count(family));
    }

    println!("\nthe logarithmic members and the basis that passed the check:");
    for f in frame.fields.iter().filter(|f| f.family == Family::Logarithmic) {
        println!("  {} {} =\n    {}", f.tag, f.params, f.field);
        let lam = space.lambda(DiffBase::Dz1, &f.field, 1);
        for (i, e) in lam.entries.iter().enumerate() {
            let reduced = reduce_w(&e.num, &space.cfg);
            println!(
                "    Lambda line {i}: {} -> reduces to {}",
                e,
                if reduced.is_zero() { "0".into() } else { reduced.to_string() }
            );
        }
    }

    // two components share only the z-variables; corrections add up
    let (cfg2, _) = JetConfig::logarithmic(1, 1, vec![2, 2]).unwrap();
    let space2 = JetSpace::new(cfg2);
    let frame2 = FrameBuilder::new(&space2).assemble().unwrap();
    println!(
        "\ntwo-component log frame: {} fields for expected dimension {}",
        frame2.fields.len(),
        expected_dimension(&space2.cfg)
    );
}
