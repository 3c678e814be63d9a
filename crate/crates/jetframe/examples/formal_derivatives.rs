//! The formal differentiations `D_t` and `D_{z1}`, the adjoint action,
//! and the Lambda map whose vanishing characterises tangency to the
//! vertical jets.
//!
//! Run with: `cargo run --example formal_derivatives`

use jetframe::jet::{DiffBase, JetConfig, JetSpace, VectorField};
use jetframe::poly::{FracPoly, Poly};
use jetframe::var::VarId;

fn main() {
    let (cfg, _) = JetConfig::compact(2, 2, vec![2]).unwrap();
    let space = JetSpace::new(cfg);

    println!("D_t   = {}", space.dt());
    println!("D_z1  = {}", space.dz1());

    // the chain rule in action
    let z2 = FracPoly::from(Poly::var(VarId::z(2)));
    println!("\nD_t . z2  = {}", space.dt().apply(&z2));
    println!("D_z1 . z2 = {}", space.dz1().apply(&z2));
    println!("D_z1 . z1 = {}", space.dz1().apply(&FracPoly::from(Poly::var(VarId::z(1)))));

    // adjoint action lowers jet order with a factor -q
    for q in 1..=2 {
        let field = VectorField::unit(VarId::jet(2, q));
        println!(
            "\nD_t ad d/dz2^({q}) = {}",
            space.dt().adjoint(&field)
        );
    }

    // Lambda maps: a moduli direction hits line 0, a jet direction hits
    // line q, and neither is tangent on its own
    let da = VectorField::unit(VarId::param(1, vec![1, 0]));
    let lam = space.lambda(DiffBase::Dz1, &da, 1);
    println!("\nLambda_z1(d/da_(1,0)):");
    for (i, e) in lam.entries.iter().enumerate() {
        println!("  line {i}: {e}");
    }

    let jet_dir = VectorField::unit(VarId::jet(2, 2));
    let lam = space.lambda(DiffBase::Dz1, &jet_dir, 1);
    println!("\nLambda_z1(d/dz2^(2)):");
    for (i, e) in lam.entries.iter().enumerate() {
        println!("  line {i}: {e}");
    }
    println!(
        "first nonzero line: {:?} (tangency needs the whole vector to vanish)",
        lam.witness()
    );
}
