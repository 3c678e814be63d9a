//! Global generation, mechanically: sample exact points of the
//! vertical-jet variety, check the frame's rank equals the variety's
//! dimension, confirm gradient orthogonality, and watch the negative
//! controls fail as they should.
//!
//! Run with: `cargo run --example verify_generation`

use jetframe::forge::FrameBuilder;
use jetframe::jet::{JetConfig, JetSpace, VectorField};
use jetframe::var::VarId;
use jetframe::verify::{
    check_tangency, expected_dimension, gradient_orthogonality, rank_at_point,
    sample_vertical_point, TangencyMode,
};

fn main() {
    let (cfg, _) = JetConfig::compact(2, 2, vec![3]).unwrap();
    let space = JetSpace::new(cfg);
    let frame = FrameBuilder::new(&space).assemble().unwrap();
    let expected = expected_dimension(&space.cfg);
    let fields: Vec<&VectorField> = frame.fields.iter().map(|f| &f.field).collect();

    for seed in [7u64, 8, 9] {
        let point = sample_vertical_point(&space, seed).unwrap();
        let rank = rank_at_point(&space.cfg, &fields, &point).unwrap();
        let orthogonal = frame
            .fields
            .iter()
            .all(|f| gradient_orthogonality(&space, &f.field, &point).unwrap());
        println!(
            "seed {seed}: rank {rank} / dimension {expected}, gradients vanish: {orthogonal}"
        );
    }

    // negative controls
    let point = sample_vertical_point(&space, 7).unwrap();
    let raw = VectorField::unit(VarId::param(1, vec![0, 0]));
    println!(
        "\nuncorrected d/da_(0,0) is tangent: {}",
        gradient_orthogonality(&space, &raw, &point).unwrap()
    );
    let bare = VectorField::unit(VarId::jet(2, 2));
    let (tangent, witness) = check_tangency(&space, &bare, TangencyMode::Identical);
    println!("bare d/dz2^(2) is tangent: {tangent} (witness line {witness:?})");

    let reduced: Vec<&VectorField> = frame
        .fields
        .iter()
        .filter(|f| !(f.tag == "T_jq" && f.params["j"] == 1))
        .map(|f| &f.field)
        .collect();
    println!(
        "rank without the base direction: {} (expected {})",
        rank_at_point(&space.cfg, &reduced, &point).unwrap(),
        expected - 1
    );
}
