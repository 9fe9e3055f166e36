//! Swapping two density pieces leaves H and H* unchanged but moves the moments.

use infodisp::dist::{make_density, swap_transform};
use infodisp::measures::{entropy, h_star};
use infodisp::quadrature::QuadratureConfig;

fn main() -> infodisp::Result<()> {
    let cfg = QuadratureConfig::default();
    let f = make_density("norm:0,1")?;
    let g = swap_transform(f.clone(), -2.0, 0.5, 1.0)?;
    for (name, d) in [("original", &f), ("swapped", &g)] {
        println!(
            "{name:<9} H={:.10} H*={:.10} mean={:+.6} var={:.6}",
            entropy(d.as_ref(), &cfg)?,
            h_star(d.as_ref(), &cfg)?,
            d.mean(),
            d.variance()
        );
    }
    Ok(())
}
