//! Solving by carving clause cubes out of assignment space.
//!
//! Inserting every forbidden cube into a [`SubspaceTrie`] leaves the
//! models as the uncovered complement: the instance is unsatisfiable
//! exactly when the trie fills, and the free volume is the model count.
//! The interesting degree of freedom is insertion order. It cannot
//! change the outcome, but it moves the peak size of the intermediate
//! trie, which is the actual cost of a run, so the solver treats clause
//! ordering as a pluggable strategy and records a per-step trace for
//! comparing them.

use crate::cube::{Trit, TritCube};
use crate::rng::{derive_seed, rng_from_seed, shuffle};
use crate::sat::{Clause, Instance, InstanceError};
use crate::trie::SubspaceTrie;
use crate::MAX_COUNT_WIDTH;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write as _;

/// How the solver orders clause insertion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderingStrategy {
    /// Input order, untouched.
    AsGiven,
    /// A seeded uniform permutation of the input order.
    RandomShuffle {
        /// Seed for the permutation stream.
        seed: u64,
    },
    /// At each step, insert the remaining clause whose tentative insert
    /// leaves the fewest trie nodes, breaking ties by serialized length
    /// and then input position. Quadratic in clause count.
    GreedyMinGrowth,
    /// Group clauses over shared variables and renumber trie positions
    /// so those variables sit together, keeping carved regions compact.
    DensityOptimized,
}

/// Trie size and coverage after one insertion step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    /// One-based insertion step.
    pub step: usize,
    /// Trie nodes after the step, excluding the root.
    pub node_count: u64,
    /// Maximal subspaces in the canonical cover.
    pub leaf_count: u64,
    /// Characters in the compressed serialization.
    pub serialized_length: u64,
    /// Cells covered so far.
    pub occupied_volume: u128,
    /// Covered fraction of the whole space.
    pub fill_fraction: f64,
}

/// Outcome of a [`solve`] run.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    /// Whether uncovered cells remain.
    pub satisfiable: bool,
    /// Exact number of satisfying assignments.
    pub model_count: u128,
    /// Up to the requested number of models, as assignment vectors
    /// indexed by variable.
    pub solutions: Vec<Vec<bool>>,
    /// Insertions performed before the outcome was known; the full
    /// clause count unless the trie filled early.
    pub clauses_consumed: usize,
    /// One record per performed insertion.
    pub trace: Vec<TraceRecord>,
    /// Planned insertion order, as original clause indices.
    pub clause_order: Vec<usize>,
    /// Variable occupying each trie position; the identity except under
    /// [`OrderingStrategy::DensityOptimized`].
    pub var_order: Vec<u32>,
}

/// Aggregate peak trie size over repeated shuffled runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeSizeStats {
    /// Mean of per-trial peak node counts.
    pub mean_peak: f64,
    /// Smallest peak seen.
    pub min_peak: u64,
    /// Largest peak seen.
    pub max_peak: u64,
}

/// Decides and counts an instance by carving its clause cubes into a
/// trie, collecting up to `solution_limit` models.
///
/// Counting widths are capped at [`MAX_COUNT_WIDTH`] variables.
pub fn solve(
    instance: &Instance,
    strategy: &OrderingStrategy,
    solution_limit: usize,
) -> Result<SolveReport, InstanceError> {
    let n = instance.n_vars();
    if n > MAX_COUNT_WIDTH {
        return Err(InstanceError::WidthTooLarge {
            n_vars: n,
            max: MAX_COUNT_WIDTH,
        });
    }
    let m = instance.n_clauses();
    let identity = || (1..=n).collect::<Vec<u32>>();
    let (clause_order, var_order) = match strategy {
        OrderingStrategy::AsGiven => ((0..m).collect(), identity()),
        OrderingStrategy::RandomShuffle { seed } => {
            let mut order: Vec<usize> = (0..m).collect();
            shuffle(&mut order, &mut rng_from_seed(*seed));
            (order, identity())
        }
        OrderingStrategy::GreedyMinGrowth => (greedy_order(instance), identity()),
        OrderingStrategy::DensityOptimized => density_plan(instance),
    };

    // pos_of[v] = trie position holding variable v.
    let mut pos_of = vec![0u32; n as usize + 1];
    for (k, &v) in var_order.iter().enumerate() {
        pos_of[v as usize] = k as u32;
    }

    let mut trie = SubspaceTrie::new(n).expect("width already validated");
    let mut trace = Vec::with_capacity(m);
    let mut consumed = 0;
    for (step, &ci) in clause_order.iter().enumerate() {
        let cube = cube_under_positions(&instance.clauses()[ci], &pos_of, n);
        trie.insert(&cube).expect("cube width matches trie");
        consumed += 1;
        let metrics = trie.size_metrics();
        trace.push(TraceRecord {
            step: step + 1,
            node_count: metrics.node_count,
            leaf_count: metrics.leaf_count,
            serialized_length: metrics.serialized_length,
            occupied_volume: trie.occupied_volume(),
            fill_fraction: trie.fill_fraction(),
        });
        if trie.is_full() {
            break;
        }
    }

    let satisfiable = !trie.is_full();
    let solutions = if satisfiable && solution_limit > 0 {
        trie.enumerate_solutions(solution_limit)
            .into_iter()
            .map(|s| unpermute(&s, &var_order))
            .collect()
    } else {
        Vec::new()
    };
    Ok(SolveReport {
        satisfiable,
        model_count: trie.free_volume(),
        solutions,
        clauses_consumed: consumed,
        trace,
        clause_order,
        var_order,
    })
}

/// Largest node count reached along a trace.
pub fn peak_node_count(trace: &[TraceRecord]) -> u64 {
    trace.iter().map(|r| r.node_count).max().unwrap_or(0)
}

/// Runs `trials` shuffled solves with seeds derived from `master_seed`
/// and aggregates their peak trie sizes.
pub fn shuffle_peak_stats(
    instance: &Instance,
    trials: usize,
    master_seed: u64,
) -> Result<TreeSizeStats, InstanceError> {
    assert!(trials > 0, "at least one trial");
    let mut total = 0u64;
    let mut min_peak = u64::MAX;
    let mut max_peak = 0u64;
    for trial in 0..trials {
        let seed = derive_seed(master_seed, 0, trial as u64);
        let report = solve(instance, &OrderingStrategy::RandomShuffle { seed }, 0)?;
        let peak = peak_node_count(&report.trace);
        total += peak;
        min_peak = min_peak.min(peak);
        max_peak = max_peak.max(peak);
    }
    Ok(TreeSizeStats {
        mean_peak: total as f64 / trials as f64,
        min_peak,
        max_peak,
    })
}

/// Renders a trace as CSV with a header row.
pub fn trace_to_csv(trace: &[TraceRecord]) -> String {
    let mut out =
        String::from("step,node_count,leaf_count,serialized_length,occupied_volume,fill_fraction\n");
    for r in trace {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.step, r.node_count, r.leaf_count, r.serialized_length, r.occupied_volume, r.fill_fraction
        );
    }
    out
}

/// Builds a clause's forbidden cube with variables remapped onto trie
/// positions by `pos_of`.
fn cube_under_positions(clause: &Clause, pos_of: &[u32], width: u32) -> TritCube {
    let mut cube = TritCube::all_free(width).expect("validated width");
    for lit in clause.literals() {
        let trit = if lit.is_negated() { Trit::One } else { Trit::Zero };
        cube.set_trit(pos_of[lit.var() as usize], trit);
    }
    cube
}

/// Maps a position-indexed assignment back to variable indexing.
fn unpermute(solution: &[bool], var_order: &[u32]) -> Vec<bool> {
    let mut out = vec![false; solution.len()];
    for (k, &v) in var_order.iter().enumerate() {
        out[v as usize - 1] = solution[k];
    }
    out
}

/// Repeatedly picks the remaining clause whose insertion leaves the
/// smallest trie; once the trie fills, survivors are appended in input
/// order since their insertion no longer changes anything.
fn greedy_order(instance: &Instance) -> Vec<usize> {
    let cubes = instance.to_cubes();
    let mut remaining: Vec<usize> = (0..cubes.len()).collect();
    let mut order = Vec::with_capacity(cubes.len());
    let mut trie = SubspaceTrie::new(instance.n_vars()).expect("validated width");
    while !remaining.is_empty() {
        if trie.is_full() {
            order.append(&mut remaining);
            break;
        }
        let mut best: Option<(u64, u64, usize, usize)> = None;
        for (slot, &ci) in remaining.iter().enumerate() {
            let mut probe = trie.clone();
            probe.insert(&cubes[ci]).expect("cube width matches trie");
            let metrics = probe.size_metrics();
            let key = (metrics.node_count, metrics.serialized_length, ci, slot);
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        }
        let (_, _, ci, slot) = best.expect("remaining is non-empty");
        remaining.remove(slot);
        trie.insert(&cubes[ci]).expect("cube width matches trie");
        order.push(ci);
    }
    order
}

/// Plans a clause order and a variable placement that keep early
/// insertions on a small set of adjacent trie positions.
///
/// Seeds an active variable set from the pair of clauses sharing the
/// most variables, then alternates between emitting every unprocessed
/// clause confined to the active set (in input order) and growing the
/// set by the variable that completes the most waiting clauses. The
/// variable placement lists active-set entry order, with untouched
/// variables appended in ascending order.
fn density_plan(instance: &Instance) -> (Vec<usize>, Vec<u32>) {
    let n = instance.n_vars();
    let m = instance.n_clauses();
    let mut var_order: Vec<u32> = Vec::with_capacity(n as usize);
    let mut in_set = vec![false; n as usize + 1];
    let mut order = Vec::with_capacity(m);
    if m > 0 {
        let clause_vars: Vec<Vec<u32>> = instance
            .clauses()
            .iter()
            .map(|c| {
                let mut vars: Vec<u32> = c.vars().collect();
                vars.sort_unstable();
                vars
            })
            .collect();
        let shared = |i: usize, j: usize| {
            clause_vars[i]
                .iter()
                .filter(|v| clause_vars[j].contains(v))
                .count()
        };
        let mut seed_clause = 0;
        if m >= 2 {
            let mut best_count = 0;
            for i in 0..m {
                for j in i + 1..m {
                    let count = shared(i, j);
                    if count > best_count {
                        best_count = count;
                        seed_clause = i;
                    }
                }
            }
        }
        for &v in &clause_vars[seed_clause] {
            in_set[v as usize] = true;
            var_order.push(v);
        }
        let mut emitted = vec![false; m];
        loop {
            for i in 0..m {
                if !emitted[i] && clause_vars[i].iter().all(|&v| in_set[v as usize]) {
                    emitted[i] = true;
                    order.push(i);
                }
            }
            if order.len() == m {
                break;
            }
            // Every waiting clause misses at least one variable, so a
            // candidate completes a clause exactly when it is the only
            // one missing.
            let mut completes = vec![0u32; n as usize + 1];
            for i in 0..m {
                if emitted[i] {
                    continue;
                }
                let missing: Vec<u32> = clause_vars[i]
                    .iter()
                    .copied()
                    .filter(|&v| !in_set[v as usize])
                    .collect();
                if let [only] = missing[..] {
                    completes[only as usize] += 1;
                }
            }
            let mut pick = 0u32;
            let mut pick_score = 0u32;
            for i in 0..m {
                if emitted[i] {
                    continue;
                }
                for &v in &clause_vars[i] {
                    if in_set[v as usize] {
                        continue;
                    }
                    let score = completes[v as usize];
                    if pick == 0 || score > pick_score || (score == pick_score && v < pick) {
                        pick = v;
                        pick_score = score;
                    }
                }
            }
            debug_assert!(pick != 0, "waiting clauses always offer a candidate");
            in_set[pick as usize] = true;
            var_order.push(pick);
        }
    }
    for v in 1..=n {
        if !in_set[v as usize] {
            var_order.push(v);
        }
    }
    (order, var_order)
}
