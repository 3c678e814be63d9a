//! Build problem instances and inspect their defining data: the universal
//! polynomial of each component, the iterated-derivative system cutting
//! out the vertical jets, and the dimension accounting.
//!
//! Run with: `cargo run --example universal_family`

use jetframe::jet::{DiffBase, JetConfig, JetSpace};
use jetframe::verify::expected_dimension;

fn show(space: &JetSpace) {
    let cfg = &space.cfg;
    println!(
        "instance: n = {}, k = {}, degrees = {:?}, case = {:?}",
        cfg.n, cfg.k, cfg.degrees, cfg.case
    );
    if let Some(hats) = &cfg.hat_alpha {
        println!("normalised slots: {hats:?}");
    }
    for j in 1..=cfg.components() {
        println!("P_{j} = {}", space.defining_poly(j));
    }
    let eqs = space.defining_equations(DiffBase::Dt);
    println!(
        "vertical jets are cut out by {} equations:",
        eqs.iter().map(Vec::len).sum::<usize>()
    );
    for (j, component) in eqs.iter().enumerate() {
        for (q, eq) in component.iter().enumerate() {
            println!("  D_t^{q} . P_{} = {}", j + 1, eq);
        }
    }
    println!(
        "ambient chart variables: {}, expected dimension of the variety: {}",
        cfg.all_vars().len(),
        expected_dimension(cfg)
    );
    println!();
}

fn main() {
    let (small, warnings) = JetConfig::compact(2, 1, vec![2]).unwrap();
    assert!(warnings.is_empty());
    show(&JetSpace::new(small));

    let (pair, _) = JetConfig::compact(2, 1, vec![1, 2]).unwrap();
    show(&JetSpace::new(pair));

    let (log, _) = JetConfig::logarithmic(1, 1, vec![2]).unwrap();
    show(&JetSpace::new(log));
}
