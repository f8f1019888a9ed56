//! Ternary cube algebra.
//!
//! A [`TritCube`] is a fixed-width word over `{0, 1, x}` describing an
//! axis-aligned subcube of the assignment hypercube: position `i` holds
//! the constraint on variable `v_{i+1}`, where `0` and `1` pin the
//! variable and `x` leaves it free. The cube `x10x0x` over six variables
//! covers the 8 assignments with `v2 = 1`, `v3 = 0`, `v5 = 0`.
//!
//! Cubes are stored as two bit masks (fixed positions, fixed values) so
//! the pairwise operations reduce to a handful of word ops per 64
//! positions. Widths up to 64 stay in a single inline word.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;
use smallvec::SmallVec;
use thiserror::Error;

/// One mask word per 64 positions, inline for the common narrow case.
type Mask = SmallVec<[u64; 1]>;

/// Errors from cube construction and pairwise operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CubeError {
    /// Two cubes of different widths were combined.
    #[error("width mismatch: {left} vs {right}")]
    WidthMismatch {
        /// Width of the left operand.
        left: u32,
        /// Width of the right operand.
        right: u32,
    },
    /// Cube text held something other than `0`, `1`, or `x`.
    #[error("invalid character {found:?} at position {position}")]
    InvalidCharacter {
        /// Zero-based offset of the offending character.
        position: usize,
        /// The character found there.
        found: char,
    },
    /// Cube text was empty.
    #[error("empty cube text")]
    EmptyInput,
    /// Requested width exceeds [`TritCube::MAX_WIDTH`].
    #[error("width {width} exceeds supported maximum {max}")]
    WidthTooLarge {
        /// The requested width.
        width: usize,
        /// The supported maximum.
        max: u32,
    },
}

/// A single cube position: fixed low, fixed high, or free.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Trit {
    /// Variable pinned to 0; printed `0`.
    Zero,
    /// Variable pinned to 1; printed `1`.
    One,
    /// Variable unconstrained; printed `x`.
    Free,
}

impl Trit {
    /// The opposite fixed value; free is its own opposite.
    pub fn negate(self) -> Trit {
        match self {
            Trit::Zero => Trit::One,
            Trit::One => Trit::Zero,
            Trit::Free => Trit::Free,
        }
    }

    /// The printed character for this trit.
    pub fn to_char(self) -> char {
        match self {
            Trit::Zero => '0',
            Trit::One => '1',
            Trit::Free => 'x',
        }
    }
}

/// A width-`N` word over `{0, 1, x}`; covers `2^(free positions)` cells.
///
/// Stored as a fixed-position mask and a value mask. Value bits are kept
/// zero wherever the position is free, so structural equality and
/// ordering follow directly from the masks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TritCube {
    width: u32,
    fixed: Mask,
    value: Mask,
}

impl TritCube {
    /// Widest supported cube. Counting paths are far narrower (see
    /// [`crate::MAX_COUNT_WIDTH`]); the algebra itself only needs the
    /// masks, so it accepts anything up to this cap.
    pub const MAX_WIDTH: u32 = 1024;

    /// The all-free cube of the given width, covering the whole space.
    pub fn all_free(width: u32) -> Result<TritCube, CubeError> {
        if width == 0 {
            return Err(CubeError::EmptyInput);
        }
        if width > Self::MAX_WIDTH {
            return Err(CubeError::WidthTooLarge {
                width: width as usize,
                max: Self::MAX_WIDTH,
            });
        }
        let words = Self::words_for(width);
        let mut zero = SmallVec::new();
        zero.resize(words, 0u64);
        Ok(TritCube {
            width,
            fixed: zero.clone(),
            value: zero,
        })
    }

    /// Parses cube text such as `x10x0x`.
    pub fn parse(text: &str) -> Result<TritCube, CubeError> {
        if text.is_empty() {
            return Err(CubeError::EmptyInput);
        }
        if text.len() > Self::MAX_WIDTH as usize {
            return Err(CubeError::WidthTooLarge {
                width: text.len(),
                max: Self::MAX_WIDTH,
            });
        }
        let mut cube = TritCube::all_free(text.len() as u32).expect("validated width");
        for (i, ch) in text.chars().enumerate() {
            let trit = match ch {
                '0' => Trit::Zero,
                '1' => Trit::One,
                'x' => Trit::Free,
                found => {
                    return Err(CubeError::InvalidCharacter { position: i, found });
                }
            };
            cube.set_trit(i as u32, trit);
        }
        Ok(cube)
    }

    /// Builds a cube from explicit trits; errors on empty or oversized input.
    pub fn from_trits(trits: &[Trit]) -> Result<TritCube, CubeError> {
        if trits.is_empty() {
            return Err(CubeError::EmptyInput);
        }
        if trits.len() > Self::MAX_WIDTH as usize {
            return Err(CubeError::WidthTooLarge {
                width: trits.len(),
                max: Self::MAX_WIDTH,
            });
        }
        let mut cube = TritCube::all_free(trits.len() as u32).expect("validated width");
        for (i, &t) in trits.iter().enumerate() {
            cube.set_trit(i as u32, t);
        }
        Ok(cube)
    }

    fn words_for(width: u32) -> usize {
        (width as usize).div_ceil(64)
    }

    /// Number of positions.
    pub fn width(&self) -> u32 {
        self.width
    }

    /// The trit at zero-based position `i`.
    pub fn trit(&self, i: u32) -> Trit {
        assert!(i < self.width, "position {i} out of width {}", self.width);
        let (w, b) = (i as usize / 64, i % 64);
        if self.fixed[w] >> b & 1 == 0 {
            Trit::Free
        } else if self.value[w] >> b & 1 == 0 {
            Trit::Zero
        } else {
            Trit::One
        }
    }

    /// Sets the trit at zero-based position `i`.
    pub fn set_trit(&mut self, i: u32, trit: Trit) {
        assert!(i < self.width, "position {i} out of width {}", self.width);
        let (w, b) = (i as usize / 64, i % 64);
        match trit {
            Trit::Free => {
                self.fixed[w] &= !(1 << b);
                self.value[w] &= !(1 << b);
            }
            Trit::Zero => {
                self.fixed[w] |= 1 << b;
                self.value[w] &= !(1 << b);
            }
            Trit::One => {
                self.fixed[w] |= 1 << b;
                self.value[w] |= 1 << b;
            }
        }
    }

    /// A copy with one position replaced.
    pub fn with_trit(&self, i: u32, trit: Trit) -> TritCube {
        let mut out = self.clone();
        out.set_trit(i, trit);
        out
    }

    /// Iterates the trits in position order.
    pub fn trits(&self) -> impl Iterator<Item = Trit> + '_ {
        (0..self.width).map(move |i| self.trit(i))
    }

    /// Number of free positions.
    pub fn free_count(&self) -> u32 {
        self.width - self.fixed_count()
    }

    /// Number of fixed positions.
    pub fn fixed_count(&self) -> u32 {
        self.fixed.iter().map(|w| w.count_ones()).sum()
    }

    /// Number of cells covered: `2^(free positions)`.
    ///
    /// Panics if more than 127 positions are free; counting paths keep
    /// widths at or below [`crate::MAX_COUNT_WIDTH`] so this never trips
    /// there.
    pub fn volume(&self) -> u128 {
        let free = self.free_count();
        assert!(
            free <= 127,
            "volume overflows u128 with {free} free positions"
        );
        1u128 << free
    }

    fn check_width(&self, other: &TritCube) -> Result<(), CubeError> {
        if self.width == other.width {
            Ok(())
        } else {
            Err(CubeError::WidthMismatch {
                left: self.width,
                right: other.width,
            })
        }
    }

    /// Whether the two cubes share at least one cell.
    ///
    /// They do exactly when no position pins opposite values, so overlap
    /// and non-empty intersection coincide.
    pub fn overlaps(&self, other: &TritCube) -> Result<bool, CubeError> {
        self.check_width(other)?;
        let clash = self
            .fixed
            .iter()
            .zip(&other.fixed)
            .zip(self.value.iter().zip(&other.value))
            .any(|((fa, fb), (va, vb))| fa & fb & (va ^ vb) != 0);
        Ok(!clash)
    }

    /// The position-wise meet, or `None` when the cubes are disjoint.
    pub fn intersect(&self, other: &TritCube) -> Result<Option<TritCube>, CubeError> {
        if !self.overlaps(other)? {
            return Ok(None);
        }
        let mut out = self.clone();
        for w in 0..out.fixed.len() {
            out.fixed[w] |= other.fixed[w];
            out.value[w] |= other.value[w];
        }
        Ok(Some(out))
    }

    /// Whether every cell of `self` is also covered by `other`.
    pub fn is_subset_of(&self, other: &TritCube) -> Result<bool, CubeError> {
        self.check_width(other)?;
        // Containment: wherever `other` pins a value, `self` pins the same.
        let ok = self
            .fixed
            .iter()
            .zip(&other.fixed)
            .zip(self.value.iter().zip(&other.value))
            .all(|((fa, fb), (va, vb))| fb & !fa == 0 && fb & (va ^ vb) == 0);
        Ok(ok)
    }

    /// Rewrites `self` minus `other` as pairwise-disjoint cubes.
    ///
    /// Scans positions in ascending order; wherever `other` is fixed and
    /// the running remainder is free, it splits off the half pointing away
    /// from `other` and keeps carving the half pointing toward it. The
    /// final remainder is contained in `other` and is dropped. Disjoint
    /// inputs come back as `[self]` unchanged, and a contained `self`
    /// carves away to nothing.
    pub fn carve(&self, other: &TritCube) -> Result<Vec<TritCube>, CubeError> {
        if !self.overlaps(other)? {
            return Ok(alloc::vec![self.clone()]);
        }
        let mut pieces = Vec::new();
        let mut remainder = self.clone();
        for i in 0..self.width {
            let pin = other.trit(i);
            if pin != Trit::Free && remainder.trit(i) == Trit::Free {
                pieces.push(remainder.with_trit(i, pin.negate()));
                remainder.set_trit(i, pin);
            }
        }
        debug_assert!(remainder.is_subset_of(other).expect("same width"));
        Ok(pieces)
    }

    /// Merges two cubes that differ at exactly one fixed position with
    /// opposite values into one cube free there; anything else is `None`.
    pub fn try_merge(&self, other: &TritCube) -> Result<Option<TritCube>, CubeError> {
        self.check_width(other)?;
        if self.fixed != other.fixed {
            return Ok(None);
        }
        let mut diff_at = None;
        for w in 0..self.fixed.len() {
            let mut diff = self.fixed[w] & (self.value[w] ^ other.value[w]);
            while diff != 0 {
                if diff_at.is_some() {
                    return Ok(None);
                }
                diff_at = Some(w as u32 * 64 + diff.trailing_zeros());
                diff &= diff - 1;
            }
        }
        Ok(diff_at.map(|i| self.with_trit(i, Trit::Free)))
    }
}

impl fmt::Display for TritCube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut text = String::with_capacity(self.width as usize);
        for t in self.trits() {
            text.push(t.to_char());
        }
        f.write_str(&text)
    }
}

impl FromStr for TritCube {
    type Err = CubeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TritCube::parse(s)
    }
}

impl PartialOrd for TritCube {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TritCube {
    /// Width first, then textual order with `0 < 1 < x`, matching the
    /// character order of the printed form.
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.width
            .cmp(&other.width)
            .then_with(|| self.trits().cmp(other.trits()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn cube(text: &str) -> TritCube {
        TritCube::parse(text).unwrap()
    }

    #[test]
    fn parse_display_round_trip() {
        for text in ["x10x0x", "0101", "xxxx", "0", "x"] {
            assert_eq!(cube(text).to_string(), text);
        }
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert_eq!(TritCube::parse(""), Err(CubeError::EmptyInput));
        assert_eq!(
            TritCube::parse("01y0"),
            Err(CubeError::InvalidCharacter {
                position: 2,
                found: 'y'
            })
        );
        let wide = "x".repeat(1025);
        assert!(matches!(
            TritCube::parse(&wide),
            Err(CubeError::WidthTooLarge { width: 1025, .. })
        ));
    }

    #[test]
    fn wide_cubes_cross_word_boundaries() {
        let mut text = "x".repeat(130);
        text.replace_range(0..1, "0");
        text.replace_range(64..65, "1");
        text.replace_range(129..130, "0");
        let c = cube(&text);
        assert_eq!(c.trit(0), Trit::Zero);
        assert_eq!(c.trit(64), Trit::One);
        assert_eq!(c.trit(129), Trit::Zero);
        assert_eq!(c.trit(100), Trit::Free);
        assert_eq!(c.free_count(), 127);
        assert_eq!(c.to_string(), text);
    }

    #[test]
    fn volume_counts_free_positions() {
        assert_eq!(cube("x10x0x").volume(), 8);
        assert_eq!(cube("0101").volume(), 1);
        assert_eq!(cube("xxxx").volume(), 16);
        assert_eq!(TritCube::all_free(120).unwrap().volume(), 1u128 << 120);
    }

    #[test]
    fn overlap_needs_no_opposing_pin() {
        assert!(cube("x001xxx").overlaps(&cube("00xx11x")).unwrap());
        assert!(!cube("000x").overlaps(&cube("100x")).unwrap());
        assert!(!cube("x10x").overlaps(&cube("x01x")).unwrap());
        assert!(cube("xxxx").overlaps(&cube("0101")).unwrap());
    }

    #[test]
    fn width_mismatch_is_an_error() {
        let err = CubeError::WidthMismatch { left: 4, right: 5 };
        assert_eq!(cube("xxxx").overlaps(&cube("xxxxx")), Err(err.clone()));
        assert_eq!(cube("xxxx").intersect(&cube("xxxxx")), Err(err.clone()));
        assert_eq!(cube("xxxx").carve(&cube("xxxxx")), Err(err.clone()));
        assert_eq!(cube("xxxx").try_merge(&cube("xxxxx")), Err(err));
    }

    #[test]
    fn intersect_takes_the_meet() {
        let got = cube("x001xxx").intersect(&cube("00xx11x")).unwrap();
        assert_eq!(got, Some(cube("000111x")));
        assert_eq!(cube("000x").intersect(&cube("100x")).unwrap(), None);
        // Meet with the full space is the cube itself.
        assert_eq!(
            cube("x10x").intersect(&cube("xxxx")).unwrap(),
            Some(cube("x10x"))
        );
    }

    #[test]
    fn carve_splits_off_opposite_halves_in_position_order() {
        let got = cube("xxxx111").carve(&cube("000xxxx")).unwrap();
        assert_eq!(got, vec![cube("1xxx111"), cube("01xx111"), cube("001x111")]);
    }

    #[test]
    fn carve_keeps_disjoint_cubes_whole() {
        assert_eq!(
            cube("000x").carve(&cube("100x")).unwrap(),
            vec![cube("000x")]
        );
    }

    #[test]
    fn carve_of_contained_cube_is_empty() {
        assert_eq!(cube("01x").carve(&cube("xxx")).unwrap(), vec![]);
        assert_eq!(cube("010").carve(&cube("01x")).unwrap(), vec![]);
    }

    #[test]
    fn carve_single_overlapping_position() {
        assert_eq!(cube("01x").carve(&cube("xx0")).unwrap(), vec![cube("011")]);
    }

    #[test]
    fn carve_pieces_are_disjoint_and_tile_the_difference() {
        let b = cube("xx1x0x");
        let a = cube("x1xxx1");
        let pieces = b.carve(&a).unwrap();
        for (i, p) in pieces.iter().enumerate() {
            assert!(p.is_subset_of(&b).unwrap());
            assert!(!p.overlaps(&a).unwrap());
            for q in &pieces[i + 1..] {
                assert!(!p.overlaps(q).unwrap());
            }
        }
        let carved: u128 = pieces.iter().map(TritCube::volume).sum();
        let meet = b.intersect(&a).unwrap().unwrap().volume();
        assert_eq!(carved, b.volume() - meet);
    }

    #[test]
    fn merge_rejoins_opposite_halves() {
        assert_eq!(
            cube("000x").try_merge(&cube("100x")).unwrap(),
            Some(cube("x00x"))
        );
        assert_eq!(
            cube("0xx10x").try_merge(&cube("0xx00x")).unwrap(),
            Some(cube("0xxx0x"))
        );
    }

    #[test]
    fn merge_requires_exactly_one_opposing_pin() {
        // Two differing positions.
        assert_eq!(cube("00x").try_merge(&cube("11x")).unwrap(), None);
        // Identical cubes differ nowhere.
        assert_eq!(cube("0x1").try_merge(&cube("0x1")).unwrap(), None);
        // Different free sets cannot merge even with compatible values.
        assert_eq!(cube("00x").try_merge(&cube("0x0")).unwrap(), None);
        assert_eq!(cube("0xx").try_merge(&cube("00x")).unwrap(), None);
    }

    #[test]
    fn subset_ordering() {
        assert!(cube("010").is_subset_of(&cube("01x")).unwrap());
        assert!(cube("01x").is_subset_of(&cube("xxx")).unwrap());
        assert!(!cube("01x").is_subset_of(&cube("010")).unwrap());
        assert!(!cube("10x").is_subset_of(&cube("01x")).unwrap());
    }

    #[test]
    fn textual_order() {
        let mut cubes = [cube("x00"), cube("011"), cube("000"), cube("1xx")];
        cubes.sort();
        let texts: Vec<_> = cubes.iter().map(|c| c.to_string()).collect();
        assert_eq!(texts, vec!["000", "011", "1xx", "x00"]);
    }
}
