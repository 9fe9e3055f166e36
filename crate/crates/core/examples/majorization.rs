//! Discrete majorization, doubly stochastic smoothing and discrete measures.

use infodisp::majorization::{
    discrete_measures, majorizes, mixture_order_check, smooth, DoublyStochastic, ProbVector,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> infodisp::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let q: ProbVector = "0.6,0.3,0.1,0.0".parse()?;
    let l = DoublyStochastic::random_birkhoff(4, 3, &mut rng);
    let p = smooth(&q, &l)?;
    println!("q = {:?}", q.as_slice());
    println!("p = qL = {:?}", p.as_slice());
    println!("p majorized by q: {}", majorizes(&p, &q)?);
    for v in [&ProbVector::uniform(4), &p, &q, &ProbVector::degenerate(4)] {
        let m = discrete_measures(v);
        println!(
            "{:?}: H={:.4} H*={:.4} H_mode={:.4}",
            v.as_slice(),
            m.h,
            m.h_star,
            m.h_mode
        );
    }
    println!("p < mix(p, q) < q: {}", mixture_order_check(&p, &q, 0.5)?);
    Ok(())
}
