//! Building-block vector fields: each `U_q^beta` hits exactly one line of
//! the Lambda map with the prescribed monomial, including the extended
//! blocks beyond the naive degree range, which are verified at
//! construction time.
//!
//! Run with: `cargo run --example building_blocks`

use jetframe::forge::FrameBuilder;
use jetframe::jet::{DiffBase, JetConfig, JetSpace};
use jetframe::poly::FracPoly;

fn main() {
    let (cfg, _) = JetConfig::compact(2, 2, vec![3]).unwrap();
    let space = JetSpace::new(cfg);
    let builder = FrameBuilder::new(&space);
    let moduli = FracPoly::from(space.moduli_poly(1));

    println!("closed-form blocks (|beta| + q <= d):");
    for (q, beta) in [(0u32, vec![1u32, 0]), (1, vec![0, 1]), (2, vec![0, 0])] {
        let u = builder.u_q_beta(1, q, &beta).unwrap();
        println!("  U_{q}^{beta:?} = {u}");
        let lam = space.lambda_against(DiffBase::Dz1, &u, &moduli);
        println!("    Lambda lines: {:?}", lam.entries.iter().map(|e| e.to_string()).collect::<Vec<_>>());
    }

    println!("\nextended blocks (|beta| > d), built by the annihilator recursion:");
    for beta in [vec![4u32, 0], vec![2, 2]] {
        let u = builder.u0_extended(1, &beta).unwrap();
        println!("  U_0^{beta:?} = {u}");
        let lam = space.lambda_against(DiffBase::Dz1, &u, &moduli);
        assert_eq!(lam.witness(), Some(0));
        println!("    Lambda line 0: {}", lam.entries[0]);
    }

    println!("\ngeneral dispatch respects the normalisation for every order:");
    for q in 0..=2u32 {
        let beta = vec![3, 1];
        let u = builder.u_general(1, q, &beta).unwrap();
        let lam = space.lambda_against(DiffBase::Dz1, &u, &moduli);
        println!(
            "  Lambda_z1(U_{q}^{beta:?}) = z^beta e_{q}: {}",
            lam.entries
                .iter()
                .enumerate()
                .all(|(i, e)| if i == q as usize { !e.is_zero() } else { e.is_zero() })
        );
    }

    println!("\nannihilator fields kill the whole derivative tower:");
    let beta = vec![2u32, 1];
    for lambda in builder.valid_lambdas(&beta, space.cfg.k + 1) {
        let t = builder.t_annihilator(1, &beta, &lambda).unwrap();
        let mut eq = FracPoly::from(space.defining_poly(1).clone());
        let mut ok = true;
        for _ in 0..=space.cfg.k {
            ok &= t.apply(&eq).is_zero();
            eq = space.dt().apply(&eq);
        }
        println!("  lambda = {lambda:?}: annihilates identically: {ok}");
    }
}
