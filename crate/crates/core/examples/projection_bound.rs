//! Projections of rotated independent sources never exceed the largest component index.

use infodisp::dist::make_density;
use infodisp::ica::{projection_bound_check, ProjectionIndex};

fn main() -> infodisp::Result<()> {
    let sources = ["unif:0,1", "laplace:1"]
        .iter()
        .map(|s| make_density(s))
        .collect::<infodisp::Result<Vec<_>>>()?;
    for index in [ProjectionIndex::Kappa3Sq, ProjectionIndex::Kappa4Sq] {
        let r = projection_bound_check(&sources, index, 100_000, 200, 11)?;
        println!(
            "{index}: max projection {:.4}, components {:?}, slack {:.4}, holds {}",
            r.max_projection, r.component_values, r.slack, r.holds
        );
    }
    Ok(())
}
