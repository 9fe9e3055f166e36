//! Blind separation of a random mixture by projection pursuit.

use infodisp::dist::make_density;
use infodisp::ica::{run_ica, IcaRun, ProjectionIndex, PursuitConfig};

fn main() -> infodisp::Result<()> {
    let sources = ["unif:0,1", "laplace:1", "exp:1"]
        .iter()
        .map(|s| make_density(s))
        .collect::<infodisp::Result<Vec<_>>>()?;
    for index in [
        ProjectionIndex::Kappa4Sq,
        ProjectionIndex::ContrastQuart,
        ProjectionIndex::Sibson,
    ] {
        let run = IcaRun {
            sources: sources.clone(),
            n: 20_000,
            seed: 3,
            pursuit: PursuitConfig {
                index,
                ..PursuitConfig::default()
            },
        };
        let (res, _) = run_ica(&run)?;
        println!(
            "{index:<14} amari={:.4} iterations={:?} values={:?}",
            res.amari.unwrap_or(f64::NAN),
            res.iterations,
            res.component_index_values
                .iter()
                .map(|v| format!("{v:.4}"))
                .collect::<Vec<_>>()
        );
    }
    Ok(())
}
