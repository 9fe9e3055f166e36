//! Scalar measures and affine-invariant efficiency ratios of catalog densities.

use infodisp::dist::make_density;
use infodisp::measures::report;
use infodisp::quadrature::QuadratureConfig;

fn main() -> infodisp::Result<()> {
    let cfg = QuadratureConfig::default();
    for spec in ["norm:0,1", "laplace:1", "exp:1", "unif:0,1", "lognorm:0,1"] {
        let d = make_density(spec)?;
        let r = report(d.as_ref(), &cfg)?;
        println!(
            "{:<14} H={:+.5} e2H={:.5} H*={:.5} J={:.5} var*J={:.4} wilcoxon={:.4} sign={:.4} negentropy={:.5}",
            r.label, r.entropy, r.entropy_power, r.h_star, r.fisher, r.var_fisher, r.wilcoxon_eff, r.sign_eff, r.sibson_negentropy
        );
    }
    Ok(())
}
