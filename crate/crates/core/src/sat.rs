//! 3-SAT instances and their cube geometry.
//!
//! A clause forbids exactly the assignments falsifying all of its
//! literals, so over `N` variables it maps to one cube with one fixed
//! position per literal: `0` where the literal is positive (the variable
//! must not be 0... it is forbidden at 0), `1` where negative. The clause
//! `(not v2 or v3 or v5)` over six variables becomes `x10x0x`, covering
//! the eighth of the space it rules out.
//!
//! This module carries the instance types, DIMACS text, the seeded
//! instance generator, variable splitting, and the brute-force oracle
//! that every other counting path is checked against.

use crate::cube::{Trit, TritCube};
use crate::rng::{coin, rng_from_seed, uniform};
use alloc::string::String;
use alloc::vec::Vec;
use arrayvec::ArrayVec;
use core::fmt;
use core::fmt::Write as _;
use sha2::{Digest, Sha256};
use thiserror::Error;

/// Errors from instance construction and instance-level operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    /// The operation needs more variables than the instance has.
    #[error("instance has {n_vars} variables, operation needs at least {min}")]
    WidthTooSmall {
        /// Variables available.
        n_vars: u32,
        /// Variables required.
        min: u32,
    },
    /// The operation caps variable count below what was asked.
    #[error("instance has {n_vars} variables, operation supports at most {max}")]
    WidthTooLarge {
        /// Variables present.
        n_vars: u32,
        /// Variables supported.
        max: u32,
    },
    /// A literal referenced a variable outside `1..=n_vars`.
    #[error("variable {var} out of range for {n_vars} variables")]
    VariableOutOfRange {
        /// The referenced variable.
        var: u32,
        /// Variables available.
        n_vars: u32,
    },
    /// A clause used the same variable twice.
    #[error("clause repeats a variable")]
    RepeatedVariable,
    /// A clause had no literals, or splitting eliminated its last one.
    #[error("empty clause")]
    EmptyClause,
    /// The split variable does not exist.
    #[error("split variable {var} out of range for {n_vars} variables")]
    IndexOutOfRange {
        /// The requested split variable.
        var: u32,
        /// Variables available.
        n_vars: u32,
    },
}

/// Errors from DIMACS CNF parsing.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimacsError {
    /// Missing or malformed `p cnf <vars> <clauses>` header.
    #[error("malformed header at line {line}")]
    MalformedHeader {
        /// One-based line number.
        line: usize,
    },
    /// A token was not an integer literal.
    #[error("invalid token at line {line}")]
    InvalidToken {
        /// One-based line number.
        line: usize,
    },
    /// Clause with other than three literals.
    #[error("clause {index} does not have exactly 3 literals")]
    NonTernaryClause {
        /// Zero-based clause index.
        index: usize,
    },
    /// Clause mentioning a variable twice.
    #[error("clause {index} repeats a variable")]
    RepeatedVariable {
        /// Zero-based clause index.
        index: usize,
    },
    /// Literal outside the header's variable range.
    #[error("clause {index} references variable {var} outside the declared range")]
    VariableOutOfRange {
        /// Zero-based clause index.
        index: usize,
        /// The out-of-range variable, as written.
        var: i64,
    },
    /// Fewer or more clauses than the header declared.
    #[error("header declared {expected} clauses, found {found}")]
    ClauseCountMismatch {
        /// Clauses declared.
        expected: usize,
        /// Clauses found.
        found: usize,
    },
    /// Header declared more variables than cubes support.
    #[error("instance declares {n_vars} variables, beyond the supported width")]
    UnsupportedWidth {
        /// Variables declared.
        n_vars: u64,
    },
}

/// A possibly negated variable; variables are numbered from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Literal {
    var: u32,
    negated: bool,
}

impl Literal {
    /// The literal `v`.
    pub fn positive(var: u32) -> Literal {
        assert!(var >= 1, "variables are numbered from 1");
        Literal {
            var,
            negated: false,
        }
    }

    /// The literal `not v`.
    pub fn negative(var: u32) -> Literal {
        assert!(var >= 1, "variables are numbered from 1");
        Literal { var, negated: true }
    }

    /// Reads a signed DIMACS literal; zero is not a literal.
    pub fn from_dimacs(lit: i64) -> Option<Literal> {
        let var = u32::try_from(lit.unsigned_abs()).ok()?;
        if lit == 0 {
            None
        } else {
            Some(Literal {
                var,
                negated: lit < 0,
            })
        }
    }

    /// The variable, numbered from 1.
    pub fn var(&self) -> u32 {
        self.var
    }

    /// Whether the literal is negated.
    pub fn is_negated(&self) -> bool {
        self.negated
    }

    /// Signed DIMACS form.
    pub fn to_dimacs(&self) -> i64 {
        if self.negated {
            -(self.var as i64)
        } else {
            self.var as i64
        }
    }

    /// Whether the assignment makes this literal true.
    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        assignment[self.var as usize - 1] != self.negated
    }

    /// The assignment value that falsifies this literal, as a cube trit.
    fn falsifying_trit(&self) -> Trit {
        if self.negated {
            Trit::One
        } else {
            Trit::Zero
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// A disjunction of up to three literals over distinct variables.
///
/// 3-SAT clauses hold exactly three; shorter clauses appear when an
/// instance is split on a variable and stay first-class so sub-instances
/// flow through the same machinery.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    literals: ArrayVec<Literal, 3>,
}

impl Clause {
    /// A proper 3-SAT clause over three distinct variables.
    pub fn ternary(a: Literal, b: Literal, c: Literal) -> Result<Clause, InstanceError> {
        Clause::from_literals(&[a, b, c])
    }

    /// A clause of one to three literals over distinct variables.
    pub fn from_literals(literals: &[Literal]) -> Result<Clause, InstanceError> {
        if literals.is_empty() {
            return Err(InstanceError::EmptyClause);
        }
        let mut held: ArrayVec<Literal, 3> = ArrayVec::new();
        for &lit in literals {
            if held.iter().any(|h| h.var == lit.var) {
                return Err(InstanceError::RepeatedVariable);
            }
            if held.try_push(lit).is_err() {
                return Err(InstanceError::RepeatedVariable);
            }
        }
        Ok(Clause { literals: held })
    }

    /// The literals in stored order.
    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    /// Number of literals.
    pub fn len(&self) -> usize {
        self.literals.len()
    }

    /// Never true; clauses hold at least one literal.
    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    /// The variables mentioned, in stored order.
    pub fn vars(&self) -> impl Iterator<Item = u32> + '_ {
        self.literals.iter().map(|l| l.var)
    }

    /// Whether the assignment satisfies at least one literal.
    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        self.literals.iter().any(|l| l.is_satisfied_by(assignment))
    }

    /// The cube of assignments this clause forbids, over `n_vars`
    /// positions: each literal pins its variable to the falsifying value,
    /// every other position stays free. Covers `2^(n_vars - len)` cells.
    pub fn to_cube(&self, n_vars: u32) -> Result<TritCube, InstanceError> {
        let mut cube = TritCube::all_free(n_vars).map_err(|_| InstanceError::WidthTooSmall {
            n_vars,
            min: 1,
        })?;
        for lit in &self.literals {
            if lit.var > n_vars {
                return Err(InstanceError::VariableOutOfRange {
                    var: lit.var,
                    n_vars,
                });
            }
            cube.set_trit(lit.var - 1, lit.falsifying_trit());
        }
        Ok(cube)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, lit) in self.literals.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{lit}")?;
        }
        f.write_str(" 0")
    }
}

/// Exhaustive enumeration results from [`Instance::brute_force`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteForceReport {
    /// Whether at least one assignment satisfies every clause.
    pub satisfiable: bool,
    /// Exact number of satisfying assignments.
    pub model_count: u64,
    /// The smallest satisfying assignment, if any.
    pub first_solution: Option<Vec<bool>>,
}

/// A CNF instance: a variable count and a clause list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    n_vars: u32,
    clauses: Vec<Clause>,
}

/// Exhaustive search caps at this width; beyond it the trie and ledger
/// paths are the practical options.
pub const BRUTE_FORCE_MAX_VARS: u32 = 24;

impl Instance {
    /// Builds an instance, validating every clause variable against the
    /// declared width.
    pub fn new(n_vars: u32, clauses: Vec<Clause>) -> Result<Instance, InstanceError> {
        if n_vars == 0 {
            return Err(InstanceError::WidthTooSmall { n_vars, min: 1 });
        }
        if n_vars > TritCube::MAX_WIDTH {
            return Err(InstanceError::WidthTooLarge {
                n_vars,
                max: TritCube::MAX_WIDTH,
            });
        }
        for clause in &clauses {
            for var in clause.vars() {
                if var > n_vars {
                    return Err(InstanceError::VariableOutOfRange { var, n_vars });
                }
            }
        }
        Ok(Instance { n_vars, clauses })
    }

    /// Number of variables.
    pub fn n_vars(&self) -> u32 {
        self.n_vars
    }

    /// The clauses in input order.
    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Number of clauses.
    pub fn n_clauses(&self) -> usize {
        self.clauses.len()
    }

    /// The forbidden cube of each clause, in clause order.
    pub fn to_cubes(&self) -> Vec<TritCube> {
        self.clauses
            .iter()
            .map(|c| c.to_cube(self.n_vars).expect("validated on construction"))
            .collect()
    }

    /// Whether the assignment satisfies every clause.
    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        assignment.len() == self.n_vars as usize
            && self.clauses.iter().all(|c| c.is_satisfied_by(assignment))
    }

    /// The eight clauses over `v1, v2, v3` with every polarity pattern.
    ///
    /// Their cubes are the eight disjoint `2^(N-3)` blocks of the space,
    /// so the instance is unsatisfiable at any width and fills the trie
    /// exactly. Patterns come out in ascending binary order.
    pub fn unsat_kernel(n_vars: u32) -> Result<Instance, InstanceError> {
        if n_vars < 3 {
            return Err(InstanceError::WidthTooSmall { n_vars, min: 3 });
        }
        let mut clauses = Vec::with_capacity(8);
        for bits in 0..8u32 {
            let lit = |i: u32| {
                if bits >> i & 1 == 1 {
                    Literal::negative(i + 1)
                } else {
                    Literal::positive(i + 1)
                }
            };
            clauses.push(Clause::ternary(lit(0), lit(1), lit(2)).expect("distinct variables"));
        }
        Instance::new(n_vars, clauses)
    }

    /// A seeded uniform random 3-SAT instance.
    ///
    /// The generator is fixed and platform independent: a ChaCha8 stream
    /// keyed by `seed`; for each clause, three distinct variables drawn in
    /// order by rejection from `uniform(1..=n_vars)`, then one fair-coin
    /// polarity per literal in draw order (heads negates). Repeated
    /// clauses across the instance are permitted, mirroring the usual
    /// fixed-clause-length ensemble.
    pub fn random(n_vars: u32, n_clauses: usize, seed: u64) -> Result<Instance, InstanceError> {
        if n_vars < 3 {
            return Err(InstanceError::WidthTooSmall { n_vars, min: 3 });
        }
        if n_vars > TritCube::MAX_WIDTH {
            return Err(InstanceError::WidthTooLarge {
                n_vars,
                max: TritCube::MAX_WIDTH,
            });
        }
        let mut rng = rng_from_seed(seed);
        let mut clauses = Vec::with_capacity(n_clauses);
        for _ in 0..n_clauses {
            let mut vars: ArrayVec<u32, 3> = ArrayVec::new();
            while vars.len() < 3 {
                let v = uniform(&mut rng, n_vars as u64) as u32 + 1;
                if !vars.contains(&v) {
                    vars.push(v);
                }
            }
            let lits: ArrayVec<Literal, 3> = vars
                .into_iter()
                .map(|v| {
                    if coin(&mut rng) {
                        Literal::negative(v)
                    } else {
                        Literal::positive(v)
                    }
                })
                .collect();
            clauses.push(Clause {
                literals: lits,
            });
        }
        Ok(Instance {
            n_vars,
            clauses,
        })
    }

    /// Emits DIMACS CNF text: the `p cnf` header, then one clause per
    /// line as signed literals closed by `0`.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "p cnf {} {}", self.n_vars, self.clauses.len());
        for clause in &self.clauses {
            let _ = writeln!(out, "{clause}");
        }
        out
    }

    /// Hex SHA-256 of [`to_dimacs`](Self::to_dimacs) output; the identity
    /// used by golden tests to pin generator behavior.
    pub fn digest(&self) -> String {
        let hash = Sha256::digest(self.to_dimacs().as_bytes());
        hex::encode(hash)
    }

    /// Parses DIMACS CNF text.
    ///
    /// Comment (`c`) and `%` lines are skipped; clauses may span or share
    /// lines. Every clause must hold exactly three distinct in-range
    /// variables. Trailing zeros after the declared clause count are
    /// tolerated (some archives close files that way); any further
    /// literal is a count mismatch.
    pub fn from_dimacs(text: &str) -> Result<Instance, DimacsError> {
        let mut header: Option<(u64, usize, usize)> = None;
        let mut tokens: Vec<(i64, usize)> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line_num = lineno + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('c') || trimmed.starts_with('%') {
                continue;
            }
            if header.is_none() {
                let mut parts = trimmed.split_whitespace();
                let (p, cnf) = (parts.next(), parts.next());
                if p != Some("p") || cnf != Some("cnf") {
                    return Err(DimacsError::MalformedHeader { line: line_num });
                }
                let n_vars: u64 = parts
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or(DimacsError::MalformedHeader { line: line_num })?;
                let n_clauses: usize = parts
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or(DimacsError::MalformedHeader { line: line_num })?;
                if parts.next().is_some() {
                    return Err(DimacsError::MalformedHeader { line: line_num });
                }
                header = Some((n_vars, n_clauses, line_num));
                continue;
            }
            for token in trimmed.split_whitespace() {
                let value: i64 = token
                    .parse()
                    .map_err(|_| DimacsError::InvalidToken { line: line_num })?;
                tokens.push((value, line_num));
            }
        }
        let Some((n_vars64, n_clauses, header_line)) = header else {
            return Err(DimacsError::MalformedHeader {
                line: text.lines().count() + 1,
            });
        };
        if n_vars64 == 0 {
            return Err(DimacsError::MalformedHeader { line: header_line });
        }
        if n_vars64 > TritCube::MAX_WIDTH as u64 {
            return Err(DimacsError::UnsupportedWidth { n_vars: n_vars64 });
        }
        let n_vars = n_vars64 as u32;

        let mut clauses = Vec::with_capacity(n_clauses);
        let mut current: Vec<i64> = Vec::new();
        for &(value, _line) in &tokens {
            if value != 0 {
                if clauses.len() == n_clauses {
                    // A literal beyond the declared count; trailing zeros
                    // alone are accepted.
                    return Err(DimacsError::ClauseCountMismatch {
                        expected: n_clauses,
                        found: n_clauses + 1,
                    });
                }
                current.push(value);
                continue;
            }
            if clauses.len() == n_clauses && current.is_empty() {
                continue;
            }
            let index = clauses.len();
            if current.len() != 3 {
                return Err(DimacsError::NonTernaryClause { index });
            }
            let mut lits: ArrayVec<Literal, 3> = ArrayVec::new();
            for &raw in &current {
                let lit =
                    Literal::from_dimacs(raw).ok_or(DimacsError::VariableOutOfRange {
                        index,
                        var: raw,
                    })?;
                if lit.var as u64 > n_vars64 {
                    return Err(DimacsError::VariableOutOfRange { index, var: raw });
                }
                if lits.iter().any(|h| h.var == lit.var) {
                    return Err(DimacsError::RepeatedVariable { index });
                }
                lits.push(lit);
            }
            clauses.push(Clause { literals: lits });
            current.clear();
        }
        if !current.is_empty() {
            return Err(DimacsError::NonTernaryClause {
                index: clauses.len(),
            });
        }
        if clauses.len() != n_clauses {
            return Err(DimacsError::ClauseCountMismatch {
                expected: n_clauses,
                found: clauses.len(),
            });
        }
        Ok(Instance { n_vars, clauses })
    }

    /// The two width `N-1` sub-instances with `var` pinned to 0 and to 1.
    ///
    /// Clauses satisfied by the pin are dropped, clauses mentioning the
    /// pinned variable the other way lose that literal, and higher
    /// variables shift down by one. Splitting a variable that is some
    /// clause's only literal would leave an empty clause and errors.
    pub fn split_on(&self, var: u32) -> Result<(Instance, Instance), InstanceError> {
        if var == 0 || var > self.n_vars {
            return Err(InstanceError::IndexOutOfRange {
                var,
                n_vars: self.n_vars,
            });
        }
        if self.n_vars < 2 {
            return Err(InstanceError::WidthTooSmall {
                n_vars: self.n_vars,
                min: 2,
            });
        }
        let reduce = |pinned_true: bool| -> Result<Instance, InstanceError> {
            let mut clauses = Vec::new();
            for clause in &self.clauses {
                let mut lits: ArrayVec<Literal, 3> = ArrayVec::new();
                let mut satisfied = false;
                for lit in clause.literals() {
                    if lit.var == var {
                        if lit.negated != pinned_true {
                            satisfied = true;
                            break;
                        }
                        continue;
                    }
                    let shifted = if lit.var > var { lit.var - 1 } else { lit.var };
                    lits.push(Literal {
                        var: shifted,
                        negated: lit.negated,
                    });
                }
                if satisfied {
                    continue;
                }
                if lits.is_empty() {
                    return Err(InstanceError::EmptyClause);
                }
                clauses.push(Clause { literals: lits });
            }
            Ok(Instance {
                n_vars: self.n_vars - 1,
                clauses,
            })
        };
        Ok((reduce(false)?, reduce(true)?))
    }

    /// Exhaustively evaluates every assignment; the reference oracle for
    /// all other counting paths. Capped at [`BRUTE_FORCE_MAX_VARS`]
    /// variables.
    pub fn brute_force(&self) -> Result<BruteForceReport, InstanceError> {
        self.check_brute_force_width()?;
        let patterns = self.falsifying_patterns();
        let mut model_count = 0u64;
        let mut first_solution = None;
        for a in 0u64..1u64 << self.n_vars {
            if patterns.iter().any(|&(mask, want)| a & mask == want) {
                continue;
            }
            if first_solution.is_none() {
                first_solution = Some(self.unpack_assignment(a));
            }
            model_count += 1;
        }
        Ok(BruteForceReport {
            satisfiable: model_count > 0,
            model_count,
            first_solution,
        })
    }

    /// Decision-only variant of [`brute_force`](Self::brute_force) that
    /// stops at the first satisfying assignment.
    pub fn brute_force_sat(&self) -> Result<bool, InstanceError> {
        self.check_brute_force_width()?;
        let patterns = self.falsifying_patterns();
        for a in 0u64..1u64 << self.n_vars {
            if !patterns.iter().any(|&(mask, want)| a & mask == want) {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn check_brute_force_width(&self) -> Result<(), InstanceError> {
        if self.n_vars > BRUTE_FORCE_MAX_VARS {
            return Err(InstanceError::WidthTooLarge {
                n_vars: self.n_vars,
                max: BRUTE_FORCE_MAX_VARS,
            });
        }
        Ok(())
    }

    /// Per clause, the `(mask, value)` pair such that an assignment
    /// word falsifies the clause exactly when `a & mask == value`.
    fn falsifying_patterns(&self) -> Vec<(u64, u64)> {
        self.clauses
            .iter()
            .map(|clause| {
                let mut mask = 0u64;
                let mut want = 0u64;
                for lit in clause.literals() {
                    let bit = 1u64 << (lit.var - 1);
                    mask |= bit;
                    if lit.negated {
                        want |= bit;
                    }
                }
                (mask, want)
            })
            .collect()
    }

    fn unpack_assignment(&self, word: u64) -> Vec<bool> {
        (0..self.n_vars).map(|i| word >> i & 1 == 1).collect()
    }
}

/// Formats an assignment as position characters, `0010` style.
pub fn assignment_text(assignment: &[bool]) -> String {
    assignment.iter().map(|&b| if b { '1' } else { '0' }).collect()
}
