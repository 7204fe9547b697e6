//! Canonical correlations of two views built with known shared structure:
//! three latent signals enter both views with decreasing noise-free weight.

use faer::Mat;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use seis::linalg::cca_matrices;

fn main() -> seis::Result<()> {
    let n = 2000;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut draw = || -> f64 { StandardNormal.sample(&mut rng) };
    let latent = Mat::from_fn(3, n, |_, _| draw());
    // view rows: latent_i plus noise of growing strength; view y gets a fourth pure-noise row
    let noise = [0.1, 0.5, 1.5];
    let x = Mat::from_fn(3, n, |i, t| latent[(i, t)] + noise[i] * draw());
    let y = Mat::from_fn(4, n, |i, t| if i < 3 { latent[(i, t)] + noise[i] * draw() } else { draw() });
    let c = cca_matrices(x.as_ref(), y.as_ref())?;
    println!("pairs {}", c.r());
    for (i, rho) in c.correlations().iter().enumerate() {
        // two independent noises of size s: corr = 1 / (1 + s²)
        let expected = 1.0 / (1.0 + noise[i] * noise[i]);
        println!("rho_{i} {rho:.4}   (population {expected:.4})");
    }
    println!("mean {:.4}", c.mean_correlation());
    Ok(())
}
