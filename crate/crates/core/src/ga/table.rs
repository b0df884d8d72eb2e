//! Basis-blade bookkeeping for Cl(3,0).
//!
//! Coefficients are stored in the order `[1, e1, e2, e3, e23, e31, e12, e123]`.
//! Internally each storage slot maps to a bitmask over `{e1, e2, e3}` plus a
//! sign relating the stored blade to the canonical ascending product of its
//! generators (`e31 = -e1 e3`, all other slots are canonical). The full 8x8
//! product table is built once at compile time from those two facts and is
//! the only place blade signs are decided.

/// Number of basis blades.
pub const BLADES: usize = 8;

/// Display names in storage order.
pub const BLADE_NAMES: [&str; BLADES] = ["1", "e1", "e2", "e3", "e23", "e31", "e12", "e123"];

/// Grade of each storage slot.
pub const BLADE_GRADE: [usize; BLADES] = [0, 1, 1, 1, 2, 2, 2, 3];

/// Generator bitmask of each storage slot (e1 = 0b001, e2 = 0b010, e3 = 0b100).
pub const BLADE_MASK: [u8; BLADES] = [0b000, 0b001, 0b010, 0b100, 0b110, 0b101, 0b011, 0b111];

/// Sign such that `stored blade = sign * canonical ascending product`.
pub const BLADE_SIGN: [i8; BLADES] = [1, 1, 1, 1, 1, -1, 1, 1];

const fn slot_of_mask(mask: u8) -> usize {
    let mut i = 0;
    while i < BLADES {
        if BLADE_MASK[i] == mask {
            return i;
        }
        i += 1;
    }
    panic!("mask outside Cl(3,0)");
}

/// Sign picked up when reordering the canonical product `a * b` into
/// ascending generator order. Every generator squares to +1.
const fn reorder_sign(a: u8, b: u8) -> i8 {
    let mut a = a >> 1;
    let mut swaps = 0u32;
    while a != 0 {
        swaps += (a & b).count_ones();
        a >>= 1;
    }
    if swaps.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// One entry of the product table: `blade[i] * blade[j] = sign * blade[slot]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BladeProduct {
    pub sign: i8,
    pub slot: usize,
}

const fn build_table() -> [[BladeProduct; BLADES]; BLADES] {
    let mut table = [[BladeProduct { sign: 1, slot: 0 }; BLADES]; BLADES];
    let mut i = 0;
    while i < BLADES {
        let mut j = 0;
        while j < BLADES {
            let mask = BLADE_MASK[i] ^ BLADE_MASK[j];
            let slot = slot_of_mask(mask);
            let sign = BLADE_SIGN[i] * BLADE_SIGN[j] * reorder_sign(BLADE_MASK[i], BLADE_MASK[j]) * BLADE_SIGN[slot];
            table[i][j] = BladeProduct { sign, slot };
            j += 1;
        }
        i += 1;
    }
    table
}

/// `PRODUCT_TABLE[i][j]` is the product of storage blades `i` and `j`.
pub const PRODUCT_TABLE: [[BladeProduct; BLADES]; BLADES] = build_table();
