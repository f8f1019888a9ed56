//! Union volume by signed inclusion and exclusion over cubes.
//!
//! A second, structurally independent way to measure the forbidden
//! region: keep every inserted cube with coefficient +1 and, for each
//! insertion, cancel what was already covered by adding the new cube's
//! intersection with every held term at the opposite sign. The signed
//! volume of the collection then equals the union volume exactly, with
//! no canonicalization involved, which makes it the natural cross-check
//! for the trie path. The price is term growth: each insertion can at
//! worst double the collection, so this stays a verification tool
//! rather than the default counting route.

use crate::cube::TritCube;
use crate::sat::Instance;
use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write as _;
use thiserror::Error;

/// Errors from ledger construction and insertion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum LedgerError {
    /// Ledgers need at least one position.
    #[error("ledger width must be at least 1")]
    ZeroWidth,
    /// Width exceeds what volumes can be computed for.
    #[error("width {width} exceeds the counting limit {max}")]
    WidthTooLarge {
        /// Requested width.
        width: u32,
        /// Supported maximum.
        max: u32,
    },
    /// Cube width differs from the ledger's.
    #[error("ledger width {ledger} does not match cube width {cube}")]
    WidthMismatch {
        /// The ledger's width.
        ledger: u32,
        /// The offending cube's width.
        cube: u32,
    },
}

/// A signed multiset of cubes whose signed volume tracks the union of
/// everything inserted.
///
/// Terms are deduplicated by exact cube identity with coefficients
/// summed, and zero coefficients are purged, so the collection stays as
/// small as cancellation allows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedCubeLedger {
    width: u32,
    terms: BTreeMap<TritCube, i64>,
}

impl SignedCubeLedger {
    /// An empty ledger over `width` positions.
    pub fn new(width: u32) -> Result<SignedCubeLedger, LedgerError> {
        if width == 0 {
            return Err(LedgerError::ZeroWidth);
        }
        if width > crate::MAX_COUNT_WIDTH {
            return Err(LedgerError::WidthTooLarge {
                width,
                max: crate::MAX_COUNT_WIDTH,
            });
        }
        Ok(SignedCubeLedger {
            width,
            terms: BTreeMap::new(),
        })
    }

    /// Builds a ledger from cubes in order; with `drop_contained`,
    /// cubes already inside the union are skipped outright.
    pub fn from_cubes(
        width: u32,
        cubes: &[TritCube],
        drop_contained: bool,
    ) -> Result<SignedCubeLedger, LedgerError> {
        let mut ledger = SignedCubeLedger::new(width)?;
        for cube in cubes {
            if drop_contained {
                ledger.insert_novel(cube)?;
            } else {
                ledger.insert(cube)?;
            }
        }
        Ok(ledger)
    }

    /// Number of positions.
    pub fn width(&self) -> u32 {
        self.width
    }

    /// Whether no terms are held.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of distinct cube terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// The terms with their coefficients, in cube order.
    pub fn terms(&self) -> impl Iterator<Item = (&TritCube, i64)> {
        self.terms.iter().map(|(c, &s)| (c, s))
    }

    fn check_width(&self, cube: &TritCube) -> Result<(), LedgerError> {
        if cube.width() != self.width {
            return Err(LedgerError::WidthMismatch {
                ledger: self.width,
                cube: cube.width(),
            });
        }
        Ok(())
    }

    /// Adds a cube to the tracked union.
    ///
    /// Every existing term meeting the cube contributes its intersection
    /// at the opposite sign, cancelling the doubly counted overlap, and
    /// the cube itself enters at +1. The signed volume rises by exactly
    /// the newly covered cells.
    pub fn insert(&mut self, cube: &TritCube) -> Result<(), LedgerError> {
        self.check_width(cube)?;
        let mut additions: Vec<(TritCube, i64)> = Vec::new();
        for (term, &coeff) in &self.terms {
            if let Some(meet) = cube.intersect(term).expect("widths match") {
                additions.push((meet, -coeff));
            }
        }
        additions.push((cube.clone(), 1));
        for (term, delta) in additions {
            match self.terms.entry(term) {
                Entry::Occupied(mut held) => {
                    *held.get_mut() += delta;
                    if *held.get() == 0 {
                        held.remove();
                    }
                }
                Entry::Vacant(open) => {
                    open.insert(delta);
                }
            }
        }
        Ok(())
    }

    /// Whether the cube is already inside the tracked union, judged by
    /// signed intersection volumes alone.
    pub fn is_redundant(&self, cube: &TritCube) -> Result<bool, LedgerError> {
        self.check_width(cube)?;
        let mut covered: i128 = 0;
        for (term, &coeff) in &self.terms {
            if let Some(meet) = cube.intersect(term).expect("widths match") {
                covered += coeff as i128 * meet.volume() as i128;
            }
        }
        Ok(covered == cube.volume() as i128)
    }

    /// Inserts unless the cube is redundant; returns whether it was
    /// taken. Skipping costs one signed-volume query and keeps the term
    /// collection from growing on cubes that change nothing.
    pub fn insert_novel(&mut self, cube: &TritCube) -> Result<bool, LedgerError> {
        if self.is_redundant(cube)? {
            return Ok(false);
        }
        self.insert(cube)?;
        Ok(true)
    }

    /// The union volume: Σ coefficient · volume over all terms.
    pub fn occupied_volume(&self) -> u128 {
        let total: i128 = self
            .terms
            .iter()
            .map(|(c, &s)| s as i128 * c.volume() as i128)
            .sum();
        debug_assert!(total >= 0, "signed volume of a union is non-negative");
        total as u128
    }

    /// Uncovered cells: `2^width` minus the union volume.
    pub fn free_volume(&self) -> u128 {
        (1u128 << self.width) - self.occupied_volume()
    }

    /// One-line listing of positive then negative terms, `+: 000x, 00x1
    /// / -: 0001` style; coefficients beyond ±1 carry a `xK` multiplier.
    pub fn dump(&self) -> String {
        let mut out = String::from("+: ");
        let write_side = |out: &mut String, want_positive: bool| {
            let mut first = true;
            for (cube, coeff) in self.terms() {
                if (coeff > 0) != want_positive {
                    continue;
                }
                if !first {
                    out.push_str(", ");
                }
                first = false;
                let _ = write!(out, "{cube}");
                if coeff.abs() > 1 {
                    let _ = write!(out, " x{}", coeff.abs());
                }
            }
        };
        write_side(&mut out, true);
        out.push_str(" / -: ");
        write_side(&mut out, false);
        out
    }
}

/// Counts an instance's models through the ledger path: the forbidden
/// union of all clause cubes, subtracted from the whole space.
pub fn count_models(instance: &Instance, drop_contained: bool) -> Result<u128, LedgerError> {
    let ledger = SignedCubeLedger::from_cubes(instance.n_vars(), &instance.to_cubes(), drop_contained)?;
    Ok(ledger.free_volume())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sat::fixtures::nine_clause_instance;
    use crate::trie::SubspaceTrie;
    use alloc::collections::BTreeSet;
    use alloc::string::ToString;

    fn cube(text: &str) -> TritCube {
        TritCube::parse(text).unwrap()
    }

    #[test]
    fn nine_cube_ledger_matches_the_worked_listing() {
        let mut ledger = SignedCubeLedger::new(4).unwrap();
        for c in nine_clause_instance().to_cubes() {
            ledger.insert(&c).unwrap();
        }
        let positives: BTreeSet<String> = ledger
            .terms()
            .filter(|&(_, s)| s > 0)
            .map(|(c, _)| c.to_string())
            .collect();
        let negatives: BTreeSet<String> = ledger
            .terms()
            .filter(|&(_, s)| s < 0)
            .map(|(c, _)| c.to_string())
            .collect();
        let expect = |items: &[&str]| items.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
        assert_eq!(
            positives,
            expect(&[
                "000x", "100x", "010x", "101x", "011x", "111x", "00x1", "11x1", "x100"
            ])
        );
        assert_eq!(negatives, expect(&["0001", "1111", "0100"]));
        assert!(ledger.terms().all(|(_, s)| s.abs() == 1));
        assert_eq!(ledger.occupied_volume(), 15, "9 doubles minus 3 cells");
        assert_eq!(ledger.free_volume(), 1);
        assert_eq!(
            ledger.dump(),
            "+: 000x, 00x1, 010x, 011x, 100x, 101x, 111x, 11x1, x100 / -: 0001, 0100, 1111"
        );
    }

    #[test]
    fn reinserting_a_cube_changes_nothing() {
        let mut ledger = SignedCubeLedger::new(3).unwrap();
        ledger.insert(&cube("0x1")).unwrap();
        ledger.insert(&cube("x10")).unwrap();
        let snapshot = ledger.clone();
        ledger.insert(&cube("0x1")).unwrap();
        assert_eq!(ledger, snapshot);
    }

    #[test]
    fn disjoint_cubes_stay_purely_positive() {
        let mut ledger = SignedCubeLedger::new(4).unwrap();
        ledger.insert(&cube("00xx")).unwrap();
        ledger.insert(&cube("11xx")).unwrap();
        assert_eq!(ledger.term_count(), 2);
        assert!(ledger.terms().all(|(_, s)| s == 1));
        assert_eq!(ledger.occupied_volume(), 8);
    }

    #[test]
    fn empty_ledger_counts_zero() {
        let ledger = SignedCubeLedger::new(5).unwrap();
        assert_eq!(ledger.occupied_volume(), 0);
        assert_eq!(ledger.free_volume(), 32);
        assert_eq!(ledger.dump(), "+:  / -: ");
    }

    #[test]
    fn containment_is_detected_without_enumeration() {
        let mut ledger = SignedCubeLedger::new(4).unwrap();
        assert!(!ledger.is_redundant(&cube("000x")).unwrap());
        ledger.insert(&cube("00xx")).unwrap();
        assert!(ledger.is_redundant(&cube("000x")).unwrap());
        assert!(!ledger.is_redundant(&cube("0xxx")).unwrap());
        // A cube covered only jointly, by no single term.
        ledger.insert(&cube("01xx")).unwrap();
        assert!(ledger.is_redundant(&cube("0xx1")).unwrap());
    }

    #[test]
    fn full_space_makes_everything_redundant() {
        let mut ledger = SignedCubeLedger::new(4).unwrap();
        for c in Instance::unsat_kernel(4).unwrap().to_cubes() {
            ledger.insert(&c).unwrap();
        }
        assert_eq!(ledger.occupied_volume(), 16);
        for text in ["0000", "1x1x", "xxxx", "x01x"] {
            assert!(ledger.is_redundant(&cube(text)).unwrap());
        }
    }

    #[test]
    fn skipping_redundant_cubes_preserves_the_count() {
        for seed in 0..30 {
            let inst = Instance::random(8, 24, seed).unwrap();
            let cubes = inst.to_cubes();
            let plain = SignedCubeLedger::from_cubes(8, &cubes, false).unwrap();
            let dropped = SignedCubeLedger::from_cubes(8, &cubes, true).unwrap();
            assert_eq!(plain.occupied_volume(), dropped.occupied_volume(), "seed {seed}");
            assert!(dropped.term_count() <= plain.term_count());
        }
    }

    #[test]
    fn ledger_agrees_with_trie_and_enumeration() {
        for seed in 0..40 {
            let inst = Instance::random(8, 18, seed).unwrap();
            let cubes = inst.to_cubes();
            let mut ledger = SignedCubeLedger::new(8).unwrap();
            let mut trie = SubspaceTrie::new(8).unwrap();
            for (k, c) in cubes.iter().enumerate() {
                ledger.insert(c).unwrap();
                trie.insert(c).unwrap();
                assert_eq!(
                    ledger.occupied_volume(),
                    trie.occupied_volume(),
                    "seed {seed} after cube {k}"
                );
                assert!(ledger.term_count() <= 1usize << (k + 1).min(20));
            }
            let brute = inst.brute_force().unwrap();
            assert_eq!(ledger.free_volume(), brute.model_count as u128, "seed {seed}");
            assert_eq!(
                count_models(&inst, true).unwrap(),
                brute.model_count as u128,
                "seed {seed}"
            );
        }
    }

    #[test]
    fn merging_duplicates_preserves_signed_volume() {
        // Replay insertions on a naive unmerged signed list and compare.
        for seed in [3u64, 8, 21] {
            let inst = Instance::random(6, 14, seed).unwrap();
            let mut ledger = SignedCubeLedger::new(6).unwrap();
            let mut naive: Vec<(TritCube, i64)> = Vec::new();
            for c in inst.to_cubes() {
                let mut additions: Vec<(TritCube, i64)> = naive
                    .iter()
                    .filter_map(|(t, s)| c.intersect(t).unwrap().map(|m| (m, -s)))
                    .collect();
                additions.push((c.clone(), 1));
                naive.extend(additions);
                ledger.insert(&c).unwrap();
                let naive_total: i128 = naive
                    .iter()
                    .map(|(t, s)| *s as i128 * t.volume() as i128)
                    .sum();
                assert_eq!(naive_total, ledger.occupied_volume() as i128, "seed {seed}");
            }
        }
    }

    #[test]
    fn width_checks() {
        assert_eq!(SignedCubeLedger::new(0), Err(LedgerError::ZeroWidth));
        assert_eq!(
            SignedCubeLedger::new(121),
            Err(LedgerError::WidthTooLarge { width: 121, max: 120 })
        );
        let mut ledger = SignedCubeLedger::new(4).unwrap();
        assert_eq!(
            ledger.insert(&cube("000")),
            Err(LedgerError::WidthMismatch { ledger: 4, cube: 3 })
        );
        assert_eq!(
            ledger.is_redundant(&cube("00000")),
            Err(LedgerError::WidthMismatch { ledger: 4, cube: 5 })
        );
    }
}
