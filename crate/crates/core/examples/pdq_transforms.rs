//! Density quantile transforms f*, f~ and f:g with their entropies.

use infodisp::dist::make_density;
use infodisp::quadrature::QuadratureConfig;
use infodisp::transforms::{colon_neg_entropy, f_colon_g, f_tilde, kl_divergence, pdq};

fn main() -> infodisp::Result<()> {
    let cfg = QuadratureConfig::default();
    let n = 1000;
    for spec in ["norm:0,1", "laplace:1", "unif:0,1"] {
        let d = make_density(spec)?;
        let fs = pdq(d.as_ref(), n, &cfg)?;
        let ft = f_tilde(d.as_ref(), n)?;
        println!(
            "{spec:<10} H(f*)={:+.5} H(f~)={:+.5} f*(0.5)={:.5}",
            fs.entropy(),
            ft.entropy(),
            fs.eval(0.5)
        );
    }
    let f = make_density("laplace:1")?;
    let g = make_density("norm:0,1")?;
    let fg = f_colon_g(f.as_ref(), g.as_ref(), n)?;
    println!(
        "f:g laplace vs normal: raw mass {:.6}, -H(f:g) = {:.6}",
        fg.raw_mass(),
        colon_neg_entropy(f.as_ref(), g.as_ref(), &cfg)?
    );
    println!(
        "KL(laplace || normal) = {:.6}",
        kl_divergence(f.as_ref(), g.as_ref(), &cfg)?
    );
    Ok(())
}
