mod common;

use common::{half_turn_oracle, max_abs_diff, normal_tensor, quarter_turn_oracle, rng, shift_oracle};
use seis::transforms::{apply_affine, invert_permutation, permute_spatial, AffineParams};
use seis::Dims;

#[test]
fn integer_translations_match_index_remap() {
    let mut g = rng(3);
    let z = normal_tensor(Dims::new(2, 3, 10, 8).unwrap(), &mut g);
    for (dx, dy) in [(1, 0), (0, 1), (-1, 0), (0, -2), (-1, 1)] {
        let p = AffineParams { tx: dx as f64 / 8.0, ty: dy as f64 / 10.0, ..AffineParams::IDENTITY };
        let out = apply_affine(&z, &p).unwrap();
        assert!(max_abs_diff(out.as_slice(), &shift_oracle(&z, dx, dy)) <= 1e-12, "({dx}, {dy})");
    }
}

#[test]
fn right_angle_rotations_match_index_remap() {
    let mut g = rng(4);
    for n in [5, 6] {
        let z = normal_tensor(Dims::new(2, 2, n, n).unwrap(), &mut g);
        let quarter = apply_affine(&z, &AffineParams { angle_deg: 90.0, ..AffineParams::IDENTITY }).unwrap();
        assert!(max_abs_diff(quarter.as_slice(), &quarter_turn_oracle(&z)) <= 1e-12);
        let half = apply_affine(&z, &AffineParams { angle_deg: 180.0, ..AffineParams::IDENTITY }).unwrap();
        assert!(max_abs_diff(half.as_slice(), &half_turn_oracle(&z)) <= 1e-12);
    }
    let z = normal_tensor(Dims::new(1, 2, 4, 7).unwrap(), &mut g);
    let half = apply_affine(&z, &AffineParams { angle_deg: 180.0, ..AffineParams::IDENTITY }).unwrap();
    assert!(max_abs_diff(half.as_slice(), &half_turn_oracle(&z)) <= 1e-12);
}

#[test]
fn four_quarter_turns_return_the_input() {
    let z = normal_tensor(Dims::new(1, 3, 6, 6).unwrap(), &mut rng(5));
    let p = AffineParams { angle_deg: 90.0, ..AffineParams::IDENTITY };
    let mut out = z.clone();
    for _ in 0..4 {
        out = apply_affine(&out, &p).unwrap();
    }
    assert!(max_abs_diff(out.as_slice(), z.as_slice()) <= 1e-12);
}

#[test]
fn spatial_permutation_round_trip() {
    let mut g = rng(6);
    let z = normal_tensor(Dims::new(2, 2, 3, 4).unwrap(), &mut g);
    let perm = common::shuffled(12, &mut g);
    let there = permute_spatial(&z, &perm).unwrap();
    for s in 0..4 {
        for (i, &p) in perm.iter().enumerate() {
            assert_eq!(there.as_slice()[s * 12 + p], z.as_slice()[s * 12 + i]);
        }
    }
    let back = permute_spatial(&there, &invert_permutation(&perm).unwrap()).unwrap();
    assert_eq!(back, z);
    assert!(permute_spatial(&z, &[0, 0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10]).is_err());
}
