//! Enumeration oracles shared by the integration tests. Everything here
//! scans assignments directly, so it is only usable at small widths but
//! cannot share a bug with the structures under test.
#![allow(dead_code)]

use proptest::prelude::*;
use satcarve_core::{Trit, TritCube};

/// Membership by definition: every fixed trit must match the assignment bit.
pub fn cube_contains(cube: &TritCube, bits: u32) -> bool {
    (0..cube.width()).all(|i| match cube.trit(i) {
        Trit::Free => true,
        Trit::Zero => bits >> i & 1 == 0,
        Trit::One => bits >> i & 1 == 1,
    })
}

pub fn member_set(cube: &TritCube) -> Vec<u32> {
    assert!(cube.width() <= 20);
    (0..1u32 << cube.width())
        .filter(|&bits| cube_contains(cube, bits))
        .collect()
}

pub fn union_volume(width: u32, cubes: &[TritCube]) -> u128 {
    assert!(width <= 20);
    (0..1u32 << width)
        .filter(|&bits| cubes.iter().any(|c| cube_contains(c, bits)))
        .count() as u128
}

pub fn arb_cube(width: u32) -> impl Strategy<Value = TritCube> {
    proptest::collection::vec(
        prop_oneof![Just(Trit::Zero), Just(Trit::One), Just(Trit::Free)],
        width as usize,
    )
    .prop_map(|trits| TritCube::from_trits(&trits).unwrap())
}

pub fn arb_cube_set(width: u32, max_len: usize) -> impl Strategy<Value = Vec<TritCube>> {
    proptest::collection::vec(arb_cube(width), 0..=max_len)
}
