//! Shift-function orderings and the dilation check between catalog pairs.

use infodisp::dist::make_density;
use infodisp::quadrature::QuadratureConfig;
use infodisp::transforms::{check_ordering, dilation_check, ConvexFn, Relation};

fn main() -> infodisp::Result<()> {
    let cfg = QuadratureConfig::default();
    let pairs = [
        ("norm:0,1", "norm:1,1", Relation::Location),
        ("norm:0,1", "norm:0,2", Relation::Dispersion),
        ("unif:0,1", "norm:0,1", Relation::Kurtosis),
        ("norm:0,1", "laplace:1", Relation::Kurtosis),
        ("norm:0,1", "lognorm:0,1", Relation::Skewness),
        ("norm:0,1", "laplace:1", Relation::Information),
    ];
    for (f, g, rel) in pairs {
        let v = check_ordering(make_density(f)?, make_density(g)?, rel, 1001, &cfg)?;
        println!("{f} vs {g}: {v}");
    }
    let f = make_density("norm:0,1")?;
    let g = make_density("norm:0,2")?;
    let v = dilation_check(f.as_ref(), g.as_ref(), &ConvexFn::standard_family(), &cfg)?;
    println!("dilation norm:0,1 vs norm:0,2: {v}");
    Ok(())
}
