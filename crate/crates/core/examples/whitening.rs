//! Whitening a CSV data matrix and reading back the sample covariance.

use infodisp::dist::make_density;
use infodisp::ica::{covariance, simulate_mixture, whiten, DataMatrix, Mixing};

fn main() -> infodisp::Result<()> {
    let sources = ["laplace:1", "unif:0,1"]
        .iter()
        .map(|s| make_density(s))
        .collect::<infodisp::Result<Vec<_>>>()?;
    let sim = simulate_mixture(&sources, Mixing::Random, 5_000, 1)?;
    let mut buf = Vec::new();
    sim.x.write_csv(&mut buf)?;
    let x = DataMatrix::read_csv(buf.as_slice())?;
    let wr = whiten(&x)?;
    println!("eigenvalues {:?}", wr.eigvals.as_slice());
    println!("covariance of z {}", covariance(&wr.z));
    Ok(())
}
