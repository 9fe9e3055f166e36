//! Information measures of f, f* and f~ for the five reference distributions.

use infodisp::cli::{table, TABLE_DISTRIBUTIONS, TABLE_GRID};
use infodisp::dist::Catalog;
use infodisp::quadrature::QuadratureConfig;

fn main() -> infodisp::Result<()> {
    let specs = TABLE_DISTRIBUTIONS
        .iter()
        .map(|s| s.parse())
        .collect::<infodisp::Result<Vec<Catalog>>>()?;
    let rows = table(&specs, TABLE_GRID, &QuadratureConfig::default())?;
    println!(
        "{:<20} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9}",
        "dist", "e2H(f)", "e2H(f*)", "e2H(f~)", "H*-2(f)", "H*-2(f*)", "H*-2(f~)"
    );
    for r in rows {
        let [f, fs, ft] = r.values;
        println!(
            "{:<20} {:>9.3} {:>9.3} {:>9.3} {:>9.3} {:>9.3} {:>9.3}",
            r.label, f.epow, fs.epow, ft.epow, f.hstar_inv_sq, fs.hstar_inv_sq, ft.hstar_inv_sq
        );
    }
    Ok(())
}
