//! Builds a small manifest of layer dumps (each paired with a warped copy) in
//! a temporary directory and scores it layer by layer, the way externally
//! dumped network activations would be processed.

use seis::io::results::render_results;
use seis::io::{load_manifest, read_tensor, write_tensor, OutputFormat, ResultRow};
use seis::rng::stream;
use seis::transforms::{apply_affine, AffineParams};
use seis::{gen_synthetic_activations, seis, Dims};

fn main() -> seis::Result<()> {
    let dir = tempfile::tempdir().expect("temp dir");
    // deeper layers: fewer pixels, more channels, smoother fields
    let layers = [("conv1", Dims::new(16, 8, 24, 24)?, 1.0), ("conv2", Dims::new(16, 16, 12, 12)?, 1.5), ("conv3", Dims::new(16, 32, 6, 6)?, 2.0)];
    let shift = AffineParams { tx: 0.1, ty: -0.05, ..AffineParams::IDENTITY };
    let mut entries = vec![];
    for (i, (name, dims, smooth)) in layers.iter().enumerate() {
        let z = gen_synthetic_activations(*dims, *smooth, &mut stream(3, i as u64, 0))?;
        let (r, a) = (dir.path().join(format!("{name}.npy")), dir.path().join(format!("{name}_alt.npy")));
        write_tensor(&z, &r)?;
        write_tensor(&apply_affine(&z, &shift)?, &a)?;
        entries.push(format!(r#"{{"label": "{name}", "ref": "{name}.npy", "alt": "{name}_alt.npy"}}"#));
    }
    let manifest_path = dir.path().join("manifest.json");
    std::fs::write(&manifest_path, format!(r#"{{"entries": [{}]}}"#, entries.join(","))).expect("write manifest");

    let mut manifest = load_manifest(&manifest_path)?;
    manifest.resolve_against(dir.path());
    let mut rows = vec![];
    for e in &manifest.entries {
        let s = seis(&read_tensor(&e.ref_path)?, &read_tensor(&e.alt_path)?)?;
        rows.push(ResultRow {
            label: e.label.clone(),
            condition: "manifest".into(),
            trial: 0,
            seed: 0,
            s_equiv: s.s_equiv,
            s_inv: s.s_inv,
            k_a: s.k_a,
            k_a_prime: s.k_a_prime,
            r: s.r,
        });
    }
    print!("{}", String::from_utf8(render_results(&rows, OutputFormat::Csv)?).expect("utf-8"));
    Ok(())
}
