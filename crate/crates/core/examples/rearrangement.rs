//! Decreasing rearrangement of a simple density on (0,1).

use infodisp::transforms::{decreasing_rearrangement, info_order, SimpleFunction};

fn main() -> infodisp::Result<()> {
    let f = SimpleFunction::new(
        vec![1.0, 2.0, 0.25],
        vec![
            vec![(0.0, 0.1), (0.5, 0.7)],
            vec![(0.1, 0.25), (0.7, 0.85)],
            vec![(0.25, 0.5), (0.85, 1.0)],
        ],
    )?;
    println!("break points {:?}", f.betas());
    for u in [0.05, 0.2, 0.4, 0.6, 0.9] {
        println!(
            "u={u:.2} f={:.2} f_down={:.2} m(f(u))={:.2}",
            f.eval(u),
            f.rearranged(u),
            f.distribution(f.eval(u))
        );
    }
    let g = f.to_grid(1000)?;
    let g_down = decreasing_rearrangement(&g);
    println!(
        "entropy {:.6} vs rearranged {:.6}",
        g.entropy(),
        g_down.entropy()
    );
    println!(
        "uniform vs f: {}",
        info_order(&g.with_values(vec![1.0; 1000])?, &g)?
    );
    Ok(())
}
