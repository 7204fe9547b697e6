//! Shows what each built-in warp does to a single bright pixel and to a
//! small gradient, printed as grids.

use seis::transforms::{apply_affine, AffineParams};
use seis::{ActivationTensor, Dims};

fn show(title: &str, z: &ActivationTensor) {
    let d = z.dims();
    println!("{title}");
    for y in 0..d.h {
        let row: Vec<String> = (0..d.w).map(|x| format!("{:5.2}", z.get(0, 0, y, x))).collect();
        println!("  {}", row.join(" "));
    }
}

fn main() -> seis::Result<()> {
    let dims = Dims::new(1, 1, 5, 5)?;
    let dot = ActivationTensor::from_fn(dims, |_, _, y, x| if (y, x) == (2, 3) { 1.0 } else { 0.0 })?;
    let id = AffineParams::IDENTITY;
    let warps = [
        ("identity", id),
        ("shift one pixel right", AffineParams { tx: 0.2, ..id }),
        ("shift half a pixel down", AffineParams { ty: 0.1, ..id }),
        ("quarter turn", AffineParams { angle_deg: 90.0, ..id }),
        ("half turn", AffineParams { angle_deg: 180.0, ..id }),
        ("zoom out to 0.8", AffineParams { scale: 0.8, ..id }),
        ("30 degrees", AffineParams { angle_deg: 30.0, ..id }),
    ];
    for (name, p) in warps {
        show(name, &apply_affine(&dot, &p)?);
    }
    let ramp = ActivationTensor::from_fn(dims, |_, _, y, x| (x + y) as f64 / 8.0)?;
    show("ramp", &ramp);
    show("ramp, quarter turn", &apply_affine(&ramp, &AffineParams { angle_deg: 90.0, ..id })?);
    Ok(())
}
