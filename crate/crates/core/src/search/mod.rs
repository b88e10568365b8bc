//! Exact search for small sets without tangents, complete enumeration at a
//! fixed size, and classification up to PGL(3,q).

mod brute;
mod engine;
pub mod group;

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::constructions;
use crate::error::{Error, Result};
use crate::plane::{Plane, PointSet};
use crate::tangency;

pub use brute::{brute_force_min, brute_force_size_counts};
use engine::{Engine, Flow, Params, State};
pub use group::{classify_up_to_pgl, pgl_order, OrbitRep, PglGroup};

const MAX_SPLIT_DEPTH: usize = 8;
// Fixed, so that node counts do not depend on the worker count.
const SPLIT_TARGET: usize = 512;

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub workers: usize,
    pub deadline: Option<Instant>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            workers: std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
            deadline: None,
        }
    }
}

impl SearchOptions {
    pub fn workers(workers: usize) -> SearchOptions {
        SearchOptions { workers: workers.max(1), deadline: None }
    }

    pub fn with_budget(mut self, budget: Duration) -> SearchOptions {
        self.deadline = Some(Instant::now() + budget);
        self
    }

    fn pool(&self) -> rayon::ThreadPool {
        rayon::ThreadPoolBuilder::new().num_threads(self.workers).build().expect("thread pool")
    }
}

/// The standard frame `(1,0,0), (0,1,0), (0,0,1), (1,1,1)`. Every set
/// without tangents contains four points in general position, and PGL(3,q)
/// is transitive on ordered frames, so rooting at it loses nothing up to
/// equivalence.
pub fn frame(plane: &Plane) -> [u32; 4] {
    [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]].map(|c| plane.point_from_codes(c).expect("valid").0)
}

fn frame_state(plane: &Plane) -> State {
    let mut st = State::new(plane);
    for p in frame(plane) {
        st.add(plane, p);
    }
    st
}

enum Task {
    Solution(Vec<u32>),
    Subtree(State),
}

/// Expands the top of the tree level by level (keeping DFS order) until
/// there are enough independent subtrees for the workers.
fn split(plane: &Plane, params: Params, root: State, target: usize) -> (u64, Vec<Task>) {
    let mut eng = Engine::new(plane, params);
    let mut tasks = vec![Task::Subtree(root)];
    for _ in 0..MAX_SPLIT_DEPTH {
        let subtrees = tasks.iter().filter(|t| matches!(t, Task::Subtree(_))).count();
        if subtrees == 0 || subtrees >= target {
            break;
        }
        let mut next = Vec::with_capacity(tasks.len() * 4);
        for t in tasks {
            match t {
                Task::Solution(_) => next.push(t),
                Task::Subtree(st) => {
                    let (tangent_free, kids) = eng.children(&st);
                    if tangent_free {
                        next.push(Task::Solution(st.sorted_members()));
                    }
                    next.extend(kids.into_iter().map(Task::Subtree));
                }
            }
        }
        tasks = next;
    }
    (eng.nodes, tasks)
}

struct FindResult {
    found: Option<Vec<u32>>,
    nodes: u64,
    timed_out: bool,
}

/// First tangent-free set (in sequential DFS order) of size at most `cap`
/// below `root`. The witness and node count do not depend on `workers`.
fn find_first(plane: &Plane, cap: usize, root: State, opts: &SearchOptions) -> FindResult {
    let params = Params { cap, extend: false };
    let (split_nodes, tasks) = split(plane, params, root, SPLIT_TARGET);
    let counts: Vec<AtomicU64> = tasks.iter().map(|_| AtomicU64::new(0)).collect();
    let hit = opts.pool().install(|| {
        tasks.par_iter().enumerate().find_map_first(|(i, t)| match t {
            Task::Solution(v) => Some((i, Some(v.clone()))),
            Task::Subtree(st) => {
                let mut eng = Engine::new(plane, params);
                eng.deadline = opts.deadline;
                let mut st = st.clone();
                let mut found = None;
                eng.run(&mut st, &mut |s| {
                    found = Some(s.sorted_members());
                    Flow::Stop
                });
                counts[i].store(eng.nodes, Ordering::Relaxed);
                if found.is_some() {
                    Some((i, found))
                } else if eng.timed_out {
                    Some((i, None))
                } else {
                    None
                }
            }
        })
    });
    let upto = hit.as_ref().map_or(tasks.len(), |(i, _)| i + 1);
    let nodes = split_nodes + counts[..upto].iter().map(|c| c.load(Ordering::Relaxed)).sum::<u64>();
    match hit {
        Some((_, Some(found))) => FindResult { found: Some(found), nodes, timed_out: false },
        Some((_, None)) => FindResult { found: None, nodes, timed_out: true },
        None => FindResult { found: None, nodes, timed_out: false },
    }
}

/// Every tangent-free node below `root` with size in `[min_size, cap]`, in
/// sequential DFS order.
fn collect_all(
    plane: &Plane,
    min_size: usize,
    cap: usize,
    root: State,
    opts: &SearchOptions,
) -> Result<(Vec<Vec<u32>>, u64)> {
    let params = Params { cap, extend: true };
    let (split_nodes, tasks) = split(plane, params, root, SPLIT_TARGET);
    let cancel = AtomicBool::new(false);
    let parts: Vec<(Vec<Vec<u32>>, u64, bool)> = opts.pool().install(|| {
        tasks
            .par_iter()
            .map(|t| match t {
                Task::Solution(v) => (if v.len() >= min_size { vec![v.clone()] } else { vec![] }, 0, false),
                Task::Subtree(st) => {
                    let mut eng = Engine::new(plane, params);
                    eng.deadline = opts.deadline;
                    eng.cancel = Some(&cancel);
                    let mut st = st.clone();
                    let mut out = Vec::new();
                    eng.run(&mut st, &mut |s| {
                        if s.size() >= min_size {
                            out.push(s.sorted_members());
                        }
                        Flow::Continue
                    });
                    if eng.timed_out {
                        cancel.store(true, Ordering::Relaxed);
                    }
                    (out, eng.nodes, eng.timed_out)
                }
            })
            .collect()
    });
    if parts.iter().any(|p| p.2) {
        return Err(Error::TimeBudgetExceeded { lower_bound: 0, best: None });
    }
    let nodes = split_nodes + parts.iter().map(|p| p.1).sum::<u64>();
    let mut sets: Vec<Vec<u32>> = parts.into_iter().flat_map(|p| p.0).collect();
    sets.sort();
    sets.dedup();
    Ok((sets, nodes))
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelReport {
    pub size: usize,
    pub nodes: u64,
    pub found: bool,
}

#[derive(Clone, Debug)]
pub struct MinSearchReport {
    pub q: u32,
    pub u: usize,
    pub witness: PointSet,
    pub nodes_expanded: u64,
    pub levels: Vec<LevelReport>,
    /// Rounded-up `q + √(2q)/4 + 2` (or `q + 2` for even `q`).
    pub lower_bound: usize,
    pub wall_time: Duration,
}

impl MinSearchReport {
    pub fn bound_gap(&self) -> usize {
        self.u - self.lower_bound
    }
}

/// Outcome of a budgeted search that did not finish.
#[derive(Clone, Debug)]
pub struct PartialReport {
    pub q: u32,
    /// No set without tangents is smaller: every smaller size was either
    /// searched exhaustively or lies below the theoretical bound.
    pub verified_lower_bound: usize,
    pub best_witness: Option<PointSet>,
    pub levels: Vec<LevelReport>,
    pub wall_time: Duration,
}

#[derive(Clone, Debug)]
pub enum MinSearch {
    Exact(MinSearchReport),
    Partial(PartialReport),
}

/// Smallest non-empty set without tangents of size at most `cap`, by
/// iterative deepening from `q + 2` over frame-rooted exact searches.
pub fn min_tangent_free(plane: &Plane, cap: usize, opts: &SearchOptions) -> Result<MinSearchReport> {
    match min_tangent_free_budgeted(plane, cap, opts)? {
        MinSearch::Exact(r) => Ok(r),
        MinSearch::Partial(p) => Err(Error::TimeBudgetExceeded {
            lower_bound: p.verified_lower_bound,
            best: p.best_witness.map(|w| w.len()),
        }),
    }
}

pub fn min_tangent_free_budgeted(plane: &Plane, cap: usize, opts: &SearchOptions) -> Result<MinSearch> {
    let start = Instant::now();
    let q = plane.q();
    let bound = tangency::size_lower_bound(q);
    if cap < bound {
        return Err(Error::CapTooSmall { cap, bound });
    }
    let mut levels = Vec::new();
    let mut nodes = 0;
    for size in q as usize + 2..=cap {
        let late = opts.deadline.is_some_and(|d| Instant::now() >= d);
        let res = if late {
            FindResult { found: None, nodes: 0, timed_out: true }
        } else {
            find_first(plane, size, frame_state(plane), opts)
        };
        nodes += res.nodes;
        levels.push(LevelReport { size, nodes: res.nodes, found: res.found.is_some() });
        if res.timed_out {
            return Ok(MinSearch::Partial(PartialReport {
                q,
                verified_lower_bound: size.max(bound),
                best_witness: best_known_construction(plane),
                levels,
                wall_time: start.elapsed(),
            }));
        }
        if let Some(members) = res.found {
            let witness = PointSet::from_indices(plane, &members);
            assert!(tangency::is_set_without_tangents(&witness), "search returned a set with tangents");
            assert!(witness.len() >= bound, "set without tangents below the lower bound");
            return Ok(MinSearch::Exact(MinSearchReport {
                q,
                u: witness.len(),
                witness,
                nodes_expanded: nodes,
                levels,
                lower_bound: bound,
                wall_time: start.elapsed(),
            }));
        }
    }
    Err(Error::NotFound(cap))
}

/// Smallest explicit construction available for `plane`, verified.
pub fn best_known_construction(plane: &Plane) -> Option<PointSet> {
    use constructions::Construction as C;
    let mut cands = vec![C::Trivial, C::TwoConics { a: None }, C::TraceGraph, C::FrobeniusGraph, C::Interior];
    let q = plane.q() as usize;
    cands.extend((1..=q.saturating_sub(5) / 2).map(|r| C::PuncturedInterior { r }));
    cands
        .iter()
        .filter_map(|c| c.build(plane).ok())
        .map(|(s, _)| s)
        .filter(tangency::is_set_without_tangents)
        .min_by_key(|s| s.len())
}

/// Long-running exact values (`q ∈ {9, 11}`), within a time budget.
pub fn u_extended(plane: &Plane, budget: Duration, workers: usize) -> Result<MinSearch> {
    let q = plane.q();
    if q != 9 && q != 11 {
        return Err(Error::TooLarge(format!("extended search is defined for q = 9, 11, got {q}")));
    }
    let opts = SearchOptions::workers(workers).with_budget(budget);
    min_tangent_free_budgeted(plane, 2 * q as usize, &opts)
}

/// All sets without tangents of exactly `n` points (not up to equivalence).
pub fn enumerate_tangent_free(plane: &Plane, n: usize, opts: &SearchOptions) -> Result<Vec<PointSet>> {
    let q = plane.q();
    if q > 5 || (q == 5 && n > 10) {
        return Err(Error::Infeasible(format!("q = {q}, n = {n}")));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let (sets, _) = collect_all(plane, n, n, State::new(plane), opts)?;
    Ok(sets.iter().filter(|s| s.len() == n).map(|s| PointSet::from_indices(plane, s)).collect())
}

/// All sets without tangents of size at most `cap` that contain the frame.
pub fn enumerate_rooted(plane: &Plane, cap: usize, opts: &SearchOptions) -> Result<Vec<PointSet>> {
    let (sets, _) = collect_all(plane, 1, cap, frame_state(plane), opts)?;
    Ok(sets.iter().map(|s| PointSet::from_indices(plane, s)).collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct SecantBoundReport {
    pub q: u32,
    /// Number of frame-rooted sets without tangents of size ≤ 2p, by size.
    pub sets_by_size: BTreeMap<usize, usize>,
    /// Sets with a line carrying at least `|S|/2 − (p−1)/4` of their points.
    pub long_secant_sets: usize,
    /// Of those, how many are not the trivial set.
    pub violations: usize,
    /// Sets of size < 2p with a line carrying more than `|S|/2 − (p−5)/4` points.
    pub corollary_violations: usize,
}

impl SecantBoundReport {
    pub fn holds(&self) -> bool {
        self.violations == 0 && self.corollary_violations == 0
    }
}

/// Exhaustive (up to equivalence) check of the long-secant characterization
/// of the trivial set in PG(2,p), p prime.
pub fn secant_bound_check(plane: &Plane, opts: &SearchOptions) -> Result<SecantBoundReport> {
    let f = plane.field();
    let p = plane.q() as i64;
    if f.h() != 1 || p == 2 {
        return Err(Error::TooLarge("secant bound check needs an odd prime q".into()));
    }
    if p > 7 {
        return Err(Error::TooLarge(format!("q = {p} beyond desk scale")));
    }
    let sets = enumerate_rooted(plane, 2 * p as usize, opts)?;
    let mut report = SecantBoundReport {
        q: plane.q(),
        sets_by_size: BTreeMap::new(),
        long_secant_sets: 0,
        violations: 0,
        corollary_violations: 0,
    };
    for s in &sets {
        let size = s.len() as i64;
        *report.sets_by_size.entry(s.len()).or_default() += 1;
        let x = tangency::spectrum(s).max_secant() as i64;
        // x ≥ |S|/2 − (p−1)/4  <=>  4x ≥ 2|S| − (p−1)
        if 4 * x >= 2 * size - (p - 1) {
            report.long_secant_sets += 1;
            if !tangency::is_trivial(s) {
                report.violations += 1;
            }
        }
        // x ≤ |S|/2 − (p−5)/4  <=>  4x ≤ 2|S| − (p−5)
        if size < 2 * p && 4 * x > 2 * size - (p - 5) {
            report.corollary_violations += 1;
        }
    }
    Ok(report)
}
