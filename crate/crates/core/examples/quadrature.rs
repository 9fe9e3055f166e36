//! Adaptive integration, root finding and maximization primitives.

use infodisp::quadrature::{find_root, integrate, maximize, QuadratureConfig};

fn main() -> infodisp::Result<()> {
    let cfg = QuadratureConfig::default();
    let gauss = integrate(
        |x| (-x * x / 2.0).exp(),
        f64::NEG_INFINITY,
        f64::INFINITY,
        &cfg,
    )?;
    println!(
        "integral of exp(-x^2/2) = {gauss:.15} (sqrt(2 pi) = {:.15})",
        (2.0 * std::f64::consts::PI).sqrt()
    );
    let root = find_root(|x| x.cos() - x, 0.0, 1.0, 1e-14)?;
    println!("fixed point of cos: {root:.15}");
    let (x, y) = maximize(|x| x * (-x).exp(), 0.0, 5.0, 200);
    println!("max of x e^-x at {x:.8} value {y:.8}");
    Ok(())
}
