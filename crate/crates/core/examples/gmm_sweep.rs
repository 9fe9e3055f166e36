//! Information measures of a two-component normal mixture as the second mean moves away.

use infodisp::cli::{sweep, SweepSpec, Vary};
use infodisp::dist::GmmSpec;
use infodisp::quadrature::QuadratureConfig;

fn main() -> infodisp::Result<()> {
    let spec = SweepSpec {
        vary: Vary::Mu2,
        start: 0.0,
        stop: 6.0,
        step: 1.0,
        base: GmmSpec::new(0.0, 2.0, 1.0, 1.0, 0.5)?,
    };
    println!(
        "{:>4} {:>10} {:>10} {:>10}",
        "mu2", "e2H(f)", "e2H(f~)", "H*-2(f~)"
    );
    for row in sweep(&spec, 1000, &QuadratureConfig::default())? {
        println!(
            "{:>4.1} {:>10.5} {:>10.5} {:>10.5}",
            row.t, row.values[0].epow, row.values[2].epow, row.values[2].hstar_inv_sq
        );
    }
    Ok(())
}
