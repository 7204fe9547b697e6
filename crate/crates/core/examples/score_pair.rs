//! Scores two activation dumps, or a synthetic tensor against a rotated copy
//! of itself when no paths are given.
//!
//!     cargo run --example score_pair -- ref.npy alt.npy

use seis::io::read_tensor;
use seis::rng::stream;
use seis::transforms::{apply_affine, AffineParams};
use seis::{gen_synthetic_activations, seis, Dims};

fn main() -> seis::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (reference, alternate) = match args.as_slice() {
        [a, b] => (read_tensor(a)?, read_tensor(b)?),
        [] => {
            let z = gen_synthetic_activations(Dims::new(32, 16, 16, 16)?, 2.0, &mut stream(7, 0, 0))?;
            let turned = apply_affine(&z, &AffineParams { angle_deg: 25.0, ..AffineParams::IDENTITY })?;
            (z, turned)
        }
        _ => {
            eprintln!("usage: score_pair [REF.npy ALT.npy]");
            std::process::exit(1);
        }
    };
    let s = seis(&reference, &alternate)?;
    println!("s_equiv  {:.6}", s.s_equiv);
    println!("s_inv    {:.6}", s.s_inv);
    println!("k_a {}  k_a' {}  r {}", s.k_a, s.k_a_prime, s.r);
    let head: Vec<String> = s.correlations.iter().take(5).map(|r| format!("{r:.4}")).collect();
    println!("leading correlations {}", head.join(" "));
    Ok(())
}
