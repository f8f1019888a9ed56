//! Occupancy models of random tiling and the fill transition.
//!
//! Dropping t random unit tiles into a space of `2^N` cells and asking
//! whether every cell got covered is a coupon-collector process whose
//! survival probability D(N, t) falls from 1 to 0 through a sharpening
//! sigmoid as N grows. The same question for random 3-SAT, with clause
//! cubes as the tiles, is the satisfiability transition, and the models
//! here bracket it from the analytic side: an exact lattice recurrence
//! on the filled-cell distribution, closed forms built from Stirling
//! numbers of the second kind, a block variant placing several distinct
//! cells per step, and a Monte Carlo simulator for sizes where the
//! exact paths are out of reach.
//!
//! Curves are reported against two normalized axes: `t' = t/(N 2^N)`,
//! which lines the inflections of different N up near ln 2, and
//! `t/(N 2^(N-3))`, which measures tiles in clause-cube volumes so the
//! inflection lands near the clause-to-variable ratio scale of the SAT
//! transition.

use crate::rng::{derive_seed, rng_from_seed, uniform};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write as _;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

/// Exact lattice evolution allocates a row of `2^N + 1` probabilities.
pub const LATTICE_MAX_N: u32 = 20;
/// Closed forms carry `(2^N)!` and `S(t, 2^N)` exactly; kept small.
pub const FORMULA_MAX_N: u32 = 10;
/// Simulation tracks occupancy bitsets of `2^N` cells.
pub const MONTECARLO_MAX_N: u32 = 24;
/// Windowed lattice mode zeroes probabilities below this and rescales.
pub const WINDOW_THRESHOLD: f64 = 1e-18;

/// Errors from the tiling model paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum TilingError {
    /// Models need at least one position.
    #[error("width must be at least 1")]
    ZeroWidth,
    /// Width exceeds what the requested path can hold exactly.
    #[error("width {n} exceeds the supported limit {max} for this path")]
    WidthTooLarge {
        /// Requested width.
        n: u32,
        /// The path's cap.
        max: u32,
    },
    /// Stirling lookup outside the built table.
    #[error("S({t}, {f}) is outside the table (t <= {t_max}, f <= {f_max})")]
    OutOfTableBounds {
        /// Requested tile count.
        t: u32,
        /// Requested part count.
        f: u32,
        /// Largest tabulated t.
        t_max: u32,
        /// Largest tabulated f.
        f_max: u32,
    },
    /// Block size outside `1..=2^N`.
    #[error("block size {block_size} is invalid for a space of {volume} cells")]
    InvalidBlockSize {
        /// Requested block size.
        block_size: u64,
        /// Cells in the space.
        volume: u64,
    },
    /// The supplied curve does not reach the feature being located.
    #[error("curve too short to locate the requested feature")]
    CurveTooShort,
}

/// Exact Stirling number of the second kind `S(t, f)`: the number of
/// ways to partition t labeled items into f non-empty parts.
///
/// Computed with a rolling row in O(f) memory, so large t costs time
/// but not space.
pub fn stirling(t: u32, f: u32) -> BigUint {
    if f > t {
        return BigUint::zero();
    }
    if t == 0 {
        return BigUint::one();
    }
    if f == 0 {
        return BigUint::zero();
    }
    let mut row: Vec<BigUint> = vec![BigUint::zero(); f as usize + 1];
    row[0] = BigUint::one();
    for _ in 1..=t {
        for x in (1..row.len()).rev() {
            let carry = row[x - 1].clone();
            row[x] = carry + &row[x] * BigUint::from(x);
        }
        row[0] = BigUint::zero();
    }
    row[f as usize].clone()
}

/// Exact `k!`.
pub fn factorial(k: u64) -> BigUint {
    let mut out = BigUint::one();
    for i in 2..=k {
        out *= BigUint::from(i);
    }
    out
}

/// A fully materialized table of `S(t, f)` for `t <= t_max`,
/// `f <= f_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StirlingTable {
    t_max: u32,
    f_max: u32,
    rows: Vec<Vec<BigUint>>,
}

impl StirlingTable {
    /// Builds the table by the additive recurrence
    /// `S(t, f) = S(t-1, f-1) + f * S(t-1, f)`.
    pub fn new(t_max: u32, f_max: u32) -> StirlingTable {
        let width = f_max as usize + 1;
        let mut rows = Vec::with_capacity(t_max as usize + 1);
        let mut first = vec![BigUint::zero(); width];
        first[0] = BigUint::one();
        rows.push(first);
        for t in 1..=t_max as usize {
            let mut row = vec![BigUint::zero(); width];
            for f in 1..width {
                row[f] = &rows[t - 1][f - 1] + &rows[t - 1][f] * BigUint::from(f);
            }
            rows.push(row);
        }
        StirlingTable { t_max, f_max, rows }
    }

    /// Largest tabulated t.
    pub fn t_max(&self) -> u32 {
        self.t_max
    }

    /// Largest tabulated f.
    pub fn f_max(&self) -> u32 {
        self.f_max
    }

    /// Looks up `S(t, f)`.
    pub fn get(&self, t: u32, f: u32) -> Result<&BigUint, TilingError> {
        if t > self.t_max || f > self.f_max {
            return Err(TilingError::OutOfTableBounds {
                t,
                f,
                t_max: self.t_max,
                f_max: self.f_max,
            });
        }
        Ok(&self.rows[t as usize][f as usize])
    }

    /// Dumps the table as CSV: one row per t, one column per f.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for f in 0..=self.f_max {
            let _ = write!(out, ",{f}");
        }
        out.push('\n');
        for (t, row) in self.rows.iter().enumerate() {
            let _ = write!(out, "{t}");
            for value in row {
                let _ = write!(out, ",{value}");
            }
            out.push('\n');
        }
        out
    }
}

/// What one placement step drops into the space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TilingMode {
    /// One uniformly random cell per step, overlaps allowed.
    Simple,
    /// A block of distinct uniformly random cells per step; blocks from
    /// different steps may still overlap each other.
    LessSimple {
        /// Cells per block, `1..=2^N`.
        block_size: u64,
    },
}

impl TilingMode {
    /// Cells placed per step.
    pub fn block_size(&self) -> u64 {
        match self {
            TilingMode::Simple => 1,
            TilingMode::LessSimple { block_size } => *block_size,
        }
    }
}

/// The distribution of filled-cell counts after t placement steps,
/// evolved exactly one step at a time.
///
/// Only the current row is held, since interesting t run to
/// `~ln 2 * N * 2^N` and a full t-by-f matrix would dwarf memory.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyLattice {
    n: u32,
    volume: u64,
    t: u32,
    mode: TilingMode,
    windowed: bool,
    row: Vec<f64>,
    scratch: Vec<f64>,
}

impl OccupancyLattice {
    /// A lattice over `2^n` cells at t = 0, nothing placed.
    pub fn new(n: u32, mode: TilingMode) -> Result<OccupancyLattice, TilingError> {
        if n == 0 {
            return Err(TilingError::ZeroWidth);
        }
        if n > LATTICE_MAX_N {
            return Err(TilingError::WidthTooLarge {
                n,
                max: LATTICE_MAX_N,
            });
        }
        let volume = 1u64 << n;
        let block = mode.block_size();
        if block == 0 || block > volume {
            return Err(TilingError::InvalidBlockSize {
                block_size: block,
                volume,
            });
        }
        let mut row = vec![0.0; volume as usize + 1];
        row[0] = 1.0;
        Ok(OccupancyLattice {
            n,
            volume,
            t: 0,
            mode,
            windowed: false,
            row,
            scratch: Vec::new(),
        })
    }

    /// Like [`new`](Self::new) but with the fast windowed mode on:
    /// after each step, probabilities below [`WINDOW_THRESHOLD`] are
    /// zeroed and the row rescaled to sum 1. Exact checks should use
    /// the plain constructor.
    pub fn new_windowed(n: u32, mode: TilingMode) -> Result<OccupancyLattice, TilingError> {
        let mut lattice = OccupancyLattice::new(n, mode)?;
        lattice.windowed = true;
        Ok(lattice)
    }

    /// Width exponent N.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Steps taken so far.
    pub fn t(&self) -> u32 {
        self.t
    }

    /// The placement mode.
    pub fn mode(&self) -> TilingMode {
        self.mode
    }

    /// `P(t, f)` for f from 0 to `2^N`.
    pub fn row(&self) -> &[f64] {
        &self.row
    }

    /// Total probability mass; 1 up to rounding drift.
    pub fn row_sum(&self) -> f64 {
        self.row.iter().sum()
    }

    /// Probability the space is not yet full: `1 - P(t, 2^N)`.
    pub fn d_value(&self) -> f64 {
        1.0 - self.row[self.volume as usize]
    }

    /// Advances one placement step.
    pub fn step(&mut self) {
        match self.mode {
            TilingMode::Simple => self.step_simple(),
            TilingMode::LessSimple { block_size } => self.step_block(block_size),
        }
        self.t += 1;
        if self.windowed {
            self.truncate_and_rescale();
        }
    }

    /// Advances until `t` steps have been taken.
    pub fn step_to(&mut self, t: u32) {
        while self.t < t {
            self.step();
        }
    }

    /// One uniform cell lands: it hits an already-filled cell with
    /// probability f / 2^N, otherwise the count grows by one.
    fn step_simple(&mut self) {
        let v = self.volume as f64;
        for f in (1..=self.volume as usize).rev() {
            let grow = self.row[f - 1] * (1.0 - (f as f64 - 1.0) / v);
            let stay = self.row[f] * (f as f64 / v);
            self.row[f] = grow + stay;
        }
        self.row[0] = 0.0;
    }

    /// A block of `b` distinct cells lands; the number k of them on
    /// empty cells is hypergeometric:
    /// `P(k | f) = C(2^N - f, k) C(f, b - k) / C(2^N, b)`.
    fn step_block(&mut self, b: u64) {
        let v = self.volume;
        self.scratch.clear();
        self.scratch.resize(self.row.len(), 0.0);
        let mut weights: Vec<f64> = Vec::new();
        for f in 0..=v {
            let mass = self.row[f as usize];
            if mass == 0.0 {
                continue;
            }
            let k_min = hypergeometric_weights(v, f, b, &mut weights);
            for (offset, &w) in weights.iter().enumerate() {
                self.scratch[(f + k_min) as usize + offset] += mass * w;
            }
        }
        core::mem::swap(&mut self.row, &mut self.scratch);
    }

    fn truncate_and_rescale(&mut self) {
        let mut sum = 0.0;
        for p in &mut self.row {
            if *p < WINDOW_THRESHOLD {
                *p = 0.0;
            }
            sum += *p;
        }
        if sum > 0.0 {
            for p in &mut self.row {
                *p /= sum;
            }
        }
    }
}

/// Fills `out` with the normalized hypergeometric weights for the
/// number of newly covered cells when `b` distinct cells land in a
/// space of `v` cells of which `f` are filled; returns the smallest
/// possible count.
///
/// Weights are grown outward from the distribution's mode by the
/// term-ratio recurrence, so no individual binomial is ever formed and
/// the extremes underflow gracefully instead of poisoning the row.
fn hypergeometric_weights(v: u64, f: u64, b: u64, out: &mut Vec<f64>) -> u64 {
    let empty = v - f;
    let k_min = b.saturating_sub(f);
    let k_max = b.min(empty);
    let span = (k_max - k_min) as usize + 1;
    out.clear();
    out.resize(span, 0.0);
    // Mode of the hypergeometric, clamped into the valid range.
    let mode = (((b + 1) as u128 * (empty + 1) as u128) / (v + 2) as u128) as u64;
    let mode = mode.clamp(k_min, k_max);
    out[(mode - k_min) as usize] = 1.0;
    // P(k+1)/P(k) = (empty - k)(b - k) / ((k + 1)(f - b + k + 1)).
    let mut value = 1.0;
    for k in mode..k_max {
        let ratio = ((empty - k) as f64 * (b - k) as f64)
            / ((k + 1) as f64 * (f + k + 1 - b) as f64);
        value *= ratio;
        out[(k + 1 - k_min) as usize] = value;
    }
    value = 1.0;
    for k in (k_min + 1..=mode).rev() {
        let ratio = (k as f64 * (f + k - b) as f64)
            / ((empty - k + 1) as f64 * (b - k + 1) as f64);
        value *= ratio;
        out[(k - 1 - k_min) as usize] = value;
    }
    let total: f64 = out.iter().sum();
    for w in out.iter_mut() {
        *w /= total;
    }
    k_min
}

/// One sample of a survival or companion curve at integer t, carrying
/// both normalized axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    /// Placement steps taken.
    pub t: u32,
    /// Placed volume over `N * 2^N`: `t * b / (N * 2^N)`.
    pub t_prime: f64,
    /// Placed volume in clause-cube units over N:
    /// `t * b / (2^(N-3) * N)`.
    pub m_over_n: f64,
    /// Survival probability, when this point samples a D curve.
    pub d_value: Option<f64>,
    /// Companion-curve value, when this point samples an M curve.
    pub m_value: Option<f64>,
}

impl CurvePoint {
    fn at(t: u32, n: u32, block: u64, d_value: Option<f64>, m_value: Option<f64>) -> CurvePoint {
        let volume = (1u64 << n) as f64;
        let placed = t as f64 * block as f64;
        CurvePoint {
            t,
            t_prime: placed / (n as f64 * volume),
            m_over_n: placed / ((volume / 8.0) * n as f64),
            d_value,
            m_value,
        }
    }
}

/// Renders curve points as CSV; absent values leave their field empty.
pub fn curve_to_csv(n: u32, points: &[CurvePoint]) -> String {
    let mut out = String::from("n,t,t_prime,m_over_n,d_value,m_value\n");
    for p in points {
        let _ = write!(out, "{},{},{},{}", n, p.t, p.t_prime, p.m_over_n);
        match p.d_value {
            Some(d) => {
                let _ = write!(out, ",{d}");
            }
            None => out.push(','),
        }
        match p.m_value {
            Some(m) => {
                let _ = writeln!(out, ",{m}");
            }
            None => out.push_str(",\n"),
        }
    }
    out
}

/// The survival curve `D(N, t) = 1 - P(t, 2^N)` from the exact
/// unit-tile lattice, for t from 1 to `t_max`.
pub fn d_curve_lattice(n: u32, t_max: u32) -> Result<Vec<CurvePoint>, TilingError> {
    d_curve_lattice_with(n, t_max, TilingMode::Simple, false)
}

/// [`d_curve_lattice`] generalized to block placement and optional
/// windowed evolution.
pub fn d_curve_lattice_with(
    n: u32,
    t_max: u32,
    mode: TilingMode,
    windowed: bool,
) -> Result<Vec<CurvePoint>, TilingError> {
    let mut lattice = if windowed {
        OccupancyLattice::new_windowed(n, mode)?
    } else {
        OccupancyLattice::new(n, mode)?
    };
    let block = mode.block_size();
    let mut points = Vec::with_capacity(t_max as usize);
    for t in 1..=t_max {
        lattice.step();
        points.push(CurvePoint::at(t, n, block, Some(lattice.d_value()), None));
    }
    Ok(points)
}

fn check_formula_width(n: u32) -> Result<u64, TilingError> {
    if n == 0 {
        return Err(TilingError::ZeroWidth);
    }
    if n > FORMULA_MAX_N {
        return Err(TilingError::WidthTooLarge {
            n,
            max: FORMULA_MAX_N,
        });
    }
    Ok(1u64 << n)
}

fn ratio_to_f64(numerator: BigInt, shift: u64) -> f64 {
    let denominator = BigInt::from(BigUint::one() << shift);
    BigRational::new(numerator, denominator)
        .to_f64()
        .expect("finite ratio")
}

/// Closed form for the survival probability:
/// `D(N, t) = 1 - S(t, 2^N) (2^N)! / 2^(tN)`.
///
/// Exact integers all the way; only the final ratio rounds to f64.
pub fn d_curve_formula(n: u32, t: u32) -> Result<f64, TilingError> {
    let volume = check_formula_width(n)?;
    let covered = stirling(t, volume as u32) * factorial(volume);
    Ok(1.0 - ratio_to_f64(covered.into(), t as u64 * n as u64))
}

/// [`d_curve_formula`] over t from 1 to `t_max`, sharing one rolling
/// Stirling row across all points.
pub fn d_curve_formula_range(n: u32, t_max: u32) -> Result<Vec<CurvePoint>, TilingError> {
    let volume = check_formula_width(n)?;
    let v_factorial = factorial(volume);
    let mut srow: Vec<BigUint> = vec![BigUint::zero(); volume as usize + 1];
    srow[0] = BigUint::one();
    let mut points = Vec::with_capacity(t_max as usize);
    for t in 1..=t_max {
        for x in (1..srow.len()).rev() {
            let carry = srow[x - 1].clone();
            srow[x] = carry + &srow[x] * BigUint::from(x);
        }
        srow[0] = BigUint::zero();
        let covered = &srow[volume as usize] * &v_factorial;
        let d = 1.0 - ratio_to_f64(covered.into(), t as u64 * n as u64);
        points.push(CurvePoint::at(t, n, 1, Some(d), None));
    }
    Ok(points)
}

/// The companion curve
/// `M(N, t) = ((2^N + 1)^(t-1) - (2^N)! S(t, 2^N + 1)) / 2^(Nt)`,
/// reported raw; nothing guarantees it stays inside [0, 1].
pub fn m_curve(n: u32, t: u32) -> Result<f64, TilingError> {
    assert!(t >= 1, "the companion curve starts at t = 1");
    let volume = check_formula_width(n)?;
    let power = BigUint::from(volume + 1).pow(t - 1);
    let subtracted = factorial(volume) * stirling(t, volume as u32 + 1);
    let numerator = BigInt::from(power) - BigInt::from(subtracted);
    Ok(ratio_to_f64(numerator, t as u64 * n as u64))
}

/// [`m_curve`] over t from 1 to `t_max` with shared rolling state.
pub fn m_curve_range(n: u32, t_max: u32) -> Result<Vec<CurvePoint>, TilingError> {
    let volume = check_formula_width(n)?;
    let v_factorial = factorial(volume);
    let mut srow: Vec<BigUint> = vec![BigUint::zero(); volume as usize + 2];
    srow[0] = BigUint::one();
    let mut power = BigUint::one();
    let mut points = Vec::with_capacity(t_max as usize);
    for t in 1..=t_max {
        for x in (1..srow.len()).rev() {
            let carry = srow[x - 1].clone();
            srow[x] = carry + &srow[x] * BigUint::from(x);
        }
        srow[0] = BigUint::zero();
        let subtracted = &srow[volume as usize + 1] * &v_factorial;
        let numerator = BigInt::from(power.clone()) - BigInt::from(subtracted);
        let m = ratio_to_f64(numerator, t as u64 * n as u64);
        points.push(CurvePoint::at(t, n, 1, None, Some(m)));
        power *= volume + 1;
    }
    Ok(points)
}

/// The alternative lattice recurrence
/// `P(t+1, f+1) = P(t, f) f/2^N + P(t, f+1) (1 - (f+1)/2^N)` started
/// from `P(1, 1) = 1`, read out as `1 - P(t, 2^N)`.
///
/// Experimental: the recurrence does not conserve probability mass and
/// its readout does not reproduce [`m_curve`] in any column we tried;
/// it is kept for side-by-side comparison, not for conclusions.
pub fn m_curve_recurrence(n: u32, t_max: u32) -> Result<Vec<CurvePoint>, TilingError> {
    if n == 0 {
        return Err(TilingError::ZeroWidth);
    }
    if n > LATTICE_MAX_N {
        return Err(TilingError::WidthTooLarge {
            n,
            max: LATTICE_MAX_N,
        });
    }
    let volume = 1u64 << n;
    let v = volume as f64;
    let mut row = vec![0.0; volume as usize + 1];
    row[1] = 1.0;
    let mut points = Vec::with_capacity(t_max as usize);
    for t in 1..=t_max {
        if t > 1 {
            for fp1 in (1..=volume as usize).rev() {
                let from_below = row[fp1 - 1] * ((fp1 - 1) as f64 / v);
                let stay = row[fp1] * (1.0 - fp1 as f64 / v);
                row[fp1] = from_below + stay;
            }
        }
        points.push(CurvePoint::at(
            t,
            n,
            1,
            None,
            Some(1.0 - row[volume as usize]),
        ));
    }
    Ok(points)
}

/// How to extract the transition point from computed curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InflectionMethod {
    /// The steepest point of the D curve: the mode of the per-step
    /// completion mass `D(t-1) - D(t)`, refined by a parabolic fit.
    FromD,
    /// The interpolated crossing of the D and M curves.
    FromIntersection,
}

/// A located transition point on both normalized axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InflectionReport {
    /// Steps at the feature, fractional after refinement.
    pub t_0: f64,
    /// D at the feature, linearly interpolated.
    pub d_0: f64,
    /// `t_0` scaled by block volume over `N * 2^N`.
    pub t_prime_0: f64,
    /// `t_0` scaled by block volume over `2^(N-3) * N`.
    pub m_0_over_n: f64,
}

fn normalized_report(t_0: f64, d_0: f64, n: u32, block: u64) -> InflectionReport {
    let volume = (1u64 << n) as f64;
    let placed = t_0 * block as f64;
    InflectionReport {
        t_0,
        d_0,
        t_prime_0: placed / (n as f64 * volume),
        m_0_over_n: placed / ((volume / 8.0) * n as f64),
    }
}

/// Linear interpolation of curve values at fractional t; `values[i]`
/// holds the curve at t = i + 1.
fn interpolate_at(values: &[f64], t: f64) -> Result<f64, TilingError> {
    let pos = t - 1.0;
    if !(0.0..=(values.len() - 1) as f64).contains(&pos) {
        return Err(TilingError::CurveTooShort);
    }
    let lo = pos as usize;
    let hi = (lo + 1).min(values.len() - 1);
    let frac = pos - lo as f64;
    Ok(values[lo] + frac * (values[hi] - values[lo]))
}

/// Locates the steepest descent of a D curve sampled at t = 1, 2, ...
///
/// The completion mass `p(t) = D(t-1) - D(t)` peaks where D falls
/// fastest; a parabola through the peak and its neighbors refines the
/// location below the integer grid. `block_size` only scales the
/// normalized axes of the report.
pub fn inflection_from_d(
    d: &[f64],
    n: u32,
    block_size: u64,
) -> Result<InflectionReport, TilingError> {
    if d.len() < 4 {
        return Err(TilingError::CurveTooShort);
    }
    // p[j] is the mass completing at t = j + 2.
    let p: Vec<f64> = d.windows(2).map(|w| w[0] - w[1]).collect();
    let mut peak = 0;
    for (j, &mass) in p.iter().enumerate() {
        if mass > p[peak] {
            peak = j;
        }
    }
    if peak == 0 || peak + 1 >= p.len() {
        return Err(TilingError::CurveTooShort);
    }
    let (before, at, after) = (p[peak - 1], p[peak], p[peak + 1]);
    let curvature = before - 2.0 * at + after;
    let offset = if curvature == 0.0 {
        0.0
    } else {
        (before - after) / (2.0 * curvature)
    };
    let t_0 = (peak + 2) as f64 + offset;
    let d_0 = interpolate_at(d, t_0)?;
    Ok(normalized_report(t_0, d_0, n, block_size))
}

/// Locates the first crossing of D and M curves sampled at the same
/// t = 1, 2, ... grid, by linear interpolation across the sign change.
pub fn inflection_from_intersection(
    d: &[f64],
    m: &[f64],
    n: u32,
    block_size: u64,
) -> Result<InflectionReport, TilingError> {
    let len = d.len().min(m.len());
    for i in 0..len.saturating_sub(1) {
        let here = d[i] - m[i];
        let next = d[i + 1] - m[i + 1];
        if here == 0.0 {
            let t_0 = (i + 1) as f64;
            return Ok(normalized_report(t_0, d[i], n, block_size));
        }
        if (here > 0.0) != (next > 0.0) {
            let t_0 = (i + 1) as f64 + here / (here - next);
            let d_0 = interpolate_at(d, t_0)?;
            return Ok(normalized_report(t_0, d_0, n, block_size));
        }
    }
    Err(TilingError::CurveTooShort)
}

/// Computes the unit-tile curves for `n` and locates the transition
/// with the requested method.
pub fn find_inflection(n: u32, method: InflectionMethod) -> Result<InflectionReport, TilingError> {
    if n == 0 {
        return Err(TilingError::ZeroWidth);
    }
    let volume = 1u64 << n;
    // The inflection sits near ln 2 * N * 2^N; double that plus margin.
    let t_max = (1.53 * n as f64 * volume as f64) as u32 + 12;
    let d: Vec<f64> = d_curve_lattice(n, t_max)?
        .iter()
        .map(|p| p.d_value.expect("lattice curve carries d"))
        .collect();
    match method {
        InflectionMethod::FromD => inflection_from_d(&d, n, 1),
        InflectionMethod::FromIntersection => {
            let m: Vec<f64> = m_curve_range(n, t_max)?
                .iter()
                .map(|p| p.m_value.expect("companion curve carries m"))
                .collect();
            inflection_from_intersection(&d, &m, n, 1)
        }
    }
}

/// Simulated survival curve: `trials` independent runs each place
/// blocks of `block_size` distinct uniform cells until the space fills
/// or `t_max` is reached; `d_value(t)` is the fraction of runs still
/// unfilled after t blocks.
///
/// Trial r draws its stream from `derive_seed(seed, block_size, r)`,
/// so runs are reproducible and order independent.
pub fn d_curve_montecarlo(
    n: u32,
    t_max: u32,
    block_size: u64,
    trials: u32,
    seed: u64,
) -> Result<Vec<CurvePoint>, TilingError> {
    if n == 0 {
        return Err(TilingError::ZeroWidth);
    }
    if n > MONTECARLO_MAX_N {
        return Err(TilingError::WidthTooLarge {
            n,
            max: MONTECARLO_MAX_N,
        });
    }
    let volume = 1u64 << n;
    if block_size == 0 || block_size > volume {
        return Err(TilingError::InvalidBlockSize {
            block_size,
            volume,
        });
    }
    assert!(trials >= 1, "at least one trial");
    let mut survivors = vec![0u32; t_max as usize + 1];
    let mut cells: Vec<u32> = Vec::new();
    for trial in 0..trials {
        let mut rng = rng_from_seed(derive_seed(seed, block_size, trial as u64));
        cells.clear();
        cells.extend(0..volume as u32);
        let mut occupied = vec![0u64; volume.div_ceil(64) as usize];
        let mut filled = 0u64;
        for t in 1..=t_max {
            for j in 0..block_size {
                let swap_with = j + uniform(&mut rng, volume - j);
                cells.swap(j as usize, swap_with as usize);
            }
            for &cell in &cells[..block_size as usize] {
                let (word, bit) = (cell as usize / 64, 1u64 << (cell % 64));
                if occupied[word] & bit == 0 {
                    occupied[word] |= bit;
                    filled += 1;
                }
            }
            if filled == volume {
                break;
            }
            survivors[t as usize] += 1;
        }
    }
    Ok((1..=t_max)
        .map(|t| {
            let d = survivors[t as usize] as f64 / trials as f64;
            CurvePoint::at(t, n, block_size, Some(d), None)
        })
        .collect())
}
