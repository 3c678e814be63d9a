//! Assemble the full frame on a compact instance: the three families,
//! their tangency, and the pole-order table with its `5k - 2` maximum.
//!
//! Run with: `cargo run --example slanted_frame`

use jetframe::forge::{Family, FrameBuilder};
use jetframe::jet::{JetConfig, JetSpace};
use jetframe::verify::{check_tangency, expected_dimension, pole_audit, TangencyMode};

fn main() {
    let (cfg, _) = JetConfig::compact(2, 2, vec![3]).unwrap();
    let space = JetSpace::new(cfg);
    let frame = FrameBuilder::new(&space).assemble().unwrap();

    println!(
        "frame on (n, k, d) = (2, 2, 3): {} fields for expected dimension {}",
        frame.fields.len(),
        expected_dimension(&space.cfg)
    );
    for family in [Family::Slanted, Family::Vertical, Family::Parameter] {
        println!("  {:?}: {}", family, frame.family_count(family));
    }

    println!("\nevery member is tangent identically:");
    let mut all = true;
    for f in &frame.fields {
        let (ok, _) = check_tangency(&space, &f.field, TangencyMode::Identical);
        all &= ok;
    }
    println!("  all {} fields pass: {all}", frame.fields.len());

    let table = pole_audit(&frame);
    println!("\npole-order table (computed | closed form):");
    for row in &table.rows {
        println!(
            "  {:<8} {:<28} {:>3} | {}",
            row.tag,
            row.params.to_string(),
            row.computed,
            row.predicted.map_or("-".into(), |v| v.to_string()),
        );
    }
    println!(
        "max pole order {} at {}; headline 5k-2 = {}",
        table.max_pole_order, table.max_tag, table.headline
    );
    println!("every field linear in the moduli: {}", table.a_degree_ok);

    // one slanted member in full
    let sample = &frame.fields[1];
    println!("\n{} {} =\n  {}", sample.tag, sample.params, sample.field);
}
