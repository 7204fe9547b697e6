//! Writes a tensor to .npy, reads it back, and prints the header numpy would
//! see. Files written here load with `numpy.load`.

use seis::io::npy::encode;
use seis::io::{read_tensor, write_tensor};
use seis::{ActivationTensor, Dims};

fn main() -> seis::Result<()> {
    let z = ActivationTensor::from_fn(Dims::new(2, 3, 4, 5)?, |i, j, y, x| (i * 1000 + j * 100 + y * 10 + x) as f64)?;
    let dir = std::env::temp_dir().join("seis-npy-roundtrip");
    std::fs::create_dir_all(&dir).map_err(|e| seis::SeisError::Format(e.to_string()))?;
    let path = dir.join("tensor.npy");
    write_tensor(&z, &path)?;
    let back = read_tensor(&path)?;
    let bytes = encode(&z);
    let header_len = u16::from_le_bytes([bytes[8], bytes[9]]) as usize;
    println!("{}", path.display());
    println!("header {:?}", String::from_utf8_lossy(&bytes[10..10 + header_len]).trim_end());
    println!("{} bytes, shape {}, round trip exact: {}", bytes.len(), back.dims(), back == z);
    println!("z[1, 2, 3, 4] = {}", back.get(1, 2, 3, 4));
    Ok(())
}
