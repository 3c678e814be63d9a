//! Chart coverage by index permutation: points where the first jet
//! coordinate degenerates are handled by renaming which coordinate plays
//! the chart role, frames and all.
//!
//! Run with: `cargo run --example chart_coverage`

use jetframe::jet::{JetConfig, JetSpace};
use jetframe::poly::{z1p, Rat};
use jetframe::var::VarId;
use jetframe::verify::{
    expected_dimension, frame_for_chart, permute_point, rank_with_vars,
    sample_vertical_point_chart,
};

use num_traits::Zero;

fn main() {
    let (cfg, _) = JetConfig::compact(2, 1, vec![2]).unwrap();
    let space = JetSpace::new(cfg);

    // a vertical point with z_1' = 0 is invisible to the standard chart;
    // build it by sampling on chart 1 with z_2' pinned to zero, then
    // renaming the coordinates
    let base = sample_vertical_point_chart(
        &space,
        1,
        11,
        &[(VarId::jet(2, 1), Rat::zero())],
    )
    .unwrap();
    let (frame, vars, sigma) = frame_for_chart(&space, 2).unwrap();
    let point = permute_point(&base, &sigma);

    println!(
        "renamed point: z1' = {}, z2' = {}",
        point.assignment[&z1p()],
        point.assignment[&VarId::jet(2, 1)]
    );
    assert!(point.assignment[&z1p()].is_zero());

    let fields: Vec<_> = frame.fields.iter().map(|f| &f.field).collect();
    let rank = rank_with_vars(&vars, &fields, &point).unwrap();
    println!(
        "chart-2 frame rank at the z1-stationary point: {} / {}",
        rank,
        expected_dimension(&space.cfg)
    );
}
