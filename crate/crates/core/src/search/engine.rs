//! Repair-style depth-first search over tangent-free sets.
//!
//! A node is a partial set together with a set of forbidden points. If the
//! partial set has a tangent line, every tangent-free superset contains one
//! more point of that line, so the search branches over the available points
//! of the tangent with the fewest of them; branch `i` adds candidate `i` and
//! forbids candidates `0..i`, which makes sibling subtrees disjoint.
//!
//! Tangents through a common member meet only in that member, so each of
//! them needs its own new point; the number of tangents through a member is
//! a lower bound on the points still missing. The bound is extended greedily
//! with further tangents whose meets with the chosen ones are unavailable.

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use crate::plane::{Plane, Point};

const DEADLINE_POLL: u64 = 1 << 12;

#[derive(Clone, Debug)]
pub(crate) struct State {
    member: Vec<bool>,
    forbidden: Vec<bool>,
    cnt: Vec<u8>,
    sum: Vec<u32>,
    avail: Vec<u8>,
    members: Vec<u32>,
}

impl State {
    pub(crate) fn new(plane: &Plane) -> State {
        let n = plane.n();
        State {
            member: vec![false; n],
            forbidden: vec![false; n],
            cnt: vec![0; n],
            sum: vec![0; n],
            avail: vec![plane.q() as u8 + 1; n],
            members: Vec::new(),
        }
    }

    pub(crate) fn size(&self) -> usize {
        self.members.len()
    }

    fn available(&self, p: u32) -> bool {
        !self.member[p as usize] && !self.forbidden[p as usize]
    }

    pub(crate) fn add(&mut self, plane: &Plane, p: u32) {
        debug_assert!(self.available(p));
        self.member[p as usize] = true;
        self.members.push(p);
        for &l in plane.lines_through(Point(p)) {
            let l = l as usize;
            self.cnt[l] += 1;
            self.sum[l] += p;
            self.avail[l] -= 1;
        }
    }

    fn remove_last(&mut self, plane: &Plane) {
        let p = self.members.pop().expect("non-empty");
        self.member[p as usize] = false;
        for &l in plane.lines_through(Point(p)) {
            let l = l as usize;
            self.cnt[l] -= 1;
            self.sum[l] -= p;
            self.avail[l] += 1;
        }
    }

    fn forbid(&mut self, plane: &Plane, p: u32) {
        self.forbidden[p as usize] = true;
        for &l in plane.lines_through(Point(p)) {
            self.avail[l as usize] -= 1;
        }
    }

    fn allow(&mut self, plane: &Plane, p: u32) {
        self.forbidden[p as usize] = false;
        for &l in plane.lines_through(Point(p)) {
            self.avail[l as usize] += 1;
        }
    }

    pub(crate) fn sorted_members(&self) -> Vec<u32> {
        let mut v = self.members.clone();
        v.sort_unstable();
        v
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Flow {
    Continue,
    Stop,
}

pub(crate) enum Examined {
    /// Some tangent has no available point left, or the bound exceeds the cap.
    Pruned,
    /// Non-empty and tangent-free.
    TangentFree,
    /// Branch over these points (ascending), each forbidding its predecessors.
    Branch(Vec<u32>),
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Params {
    /// Largest set size explored.
    pub cap: usize,
    /// Keep growing tangent-free sets (needed for complete enumeration).
    pub extend: bool,
}

pub(crate) struct Engine<'a> {
    pub plane: &'a Plane,
    pub params: Params,
    pub deadline: Option<Instant>,
    pub cancel: Option<&'a AtomicBool>,
    pub nodes: u64,
    pub timed_out: bool,
    tcount: Vec<u16>,
    tangents: Vec<u32>,
    chosen: Vec<u32>,
}

impl<'a> Engine<'a> {
    pub(crate) fn new(plane: &'a Plane, params: Params) -> Engine<'a> {
        Engine {
            plane,
            params,
            deadline: None,
            cancel: None,
            nodes: 0,
            timed_out: false,
            tcount: vec![0; plane.n()],
            tangents: Vec::new(),
            chosen: Vec::new(),
        }
    }

    pub(crate) fn examine(&mut self, st: &State) -> Examined {
        let n = self.plane.n();
        if st.members.is_empty() {
            return Examined::Branch((0..n as u32).filter(|&p| st.available(p)).collect());
        }
        self.tangents.clear();
        let mut best_line = usize::MAX;
        let mut best_avail = u8::MAX;
        for l in 0..n {
            if st.cnt[l] != 1 {
                continue;
            }
            let a = st.avail[l];
            if a == 0 {
                self.reset_tcount(st);
                return Examined::Pruned;
            }
            if a < best_avail {
                best_avail = a;
                best_line = l;
            }
            self.tangents.push(l as u32);
            self.tcount[st.sum[l] as usize] += 1;
        }
        if best_line == usize::MAX {
            return Examined::TangentFree;
        }
        let (star_member, star) = st
            .members
            .iter()
            .map(|&m| (m, self.tcount[m as usize]))
            .max_by_key(|&(m, c)| (c, std::cmp::Reverse(m)))
            .expect("non-empty");
        self.reset_tcount(st);
        let budget = self.params.cap - st.size();
        if star as usize > budget {
            return Examined::Pruned;
        }
        if self.greedy_bound(st, star_member, star as usize, budget) > budget {
            return Examined::Pruned;
        }
        let cands = self
            .plane
            .points_on(crate::plane::Line(best_line as u32))
            .iter()
            .copied()
            .filter(|&p| st.available(p))
            .collect();
        Examined::Branch(cands)
    }

    fn reset_tcount(&mut self, st: &State) {
        for &m in &st.members {
            self.tcount[m as usize] = 0;
        }
    }

    /// Size of a family of tangents no two of which can be repaired by one
    /// new point; stops as soon as it exceeds `budget`.
    fn greedy_bound(&mut self, st: &State, star_member: u32, star: usize, budget: usize) -> usize {
        if star == budget && self.tangents.len() == star {
            return star;
        }
        self.chosen.clear();
        for &t in &self.tangents {
            if st.sum[t as usize] == star_member {
                self.chosen.push(t);
            }
        }
        for i in 0..self.tangents.len() {
            let t = self.tangents[i];
            if st.sum[t as usize] == star_member {
                continue;
            }
            let independent = self.chosen.iter().all(|&c| {
                let x = self.plane.join(Point(t), Point(c)).expect("distinct lines").0;
                !st.available(x)
            });
            if independent {
                self.chosen.push(t);
                if self.chosen.len() > budget {
                    break;
                }
            }
        }
        self.chosen.len()
    }

    fn out_of_time(&mut self) -> bool {
        if self.timed_out {
            return true;
        }
        if self.nodes % DEADLINE_POLL == 1 {
            let late = self.deadline.is_some_and(|d| Instant::now() >= d);
            let cancelled = self.cancel.is_some_and(|c| c.load(Ordering::Relaxed));
            if late || cancelled {
                self.timed_out = true;
            }
        }
        self.timed_out
    }

    /// Runs the subtree below `st`, calling `visit` on every tangent-free
    /// node. `st` is restored on return.
    pub(crate) fn run(&mut self, st: &mut State, visit: &mut dyn FnMut(&State) -> Flow) -> Flow {
        self.nodes += 1;
        if self.out_of_time() {
            return Flow::Stop;
        }
        let cands = match self.examine(st) {
            Examined::Pruned => return Flow::Continue,
            Examined::TangentFree => {
                if visit(st) == Flow::Stop {
                    return Flow::Stop;
                }
                if !self.params.extend || st.size() >= self.params.cap {
                    return Flow::Continue;
                }
                (0..self.plane.n() as u32).filter(|&p| st.available(p)).collect()
            }
            Examined::Branch(c) => c,
        };
        self.branch(st, &cands, visit)
    }

    fn branch(&mut self, st: &mut State, cands: &[u32], visit: &mut dyn FnMut(&State) -> Flow) -> Flow {
        if st.size() >= self.params.cap {
            return Flow::Continue;
        }
        let mut flow = Flow::Continue;
        let mut forbidden = 0;
        for &c in cands {
            st.add(self.plane, c);
            flow = self.run(st, visit);
            st.remove_last(self.plane);
            if flow == Flow::Stop {
                break;
            }
            st.forbid(self.plane, c);
            forbidden += 1;
        }
        for &c in &cands[..forbidden] {
            st.allow(self.plane, c);
        }
        flow
    }

    /// Children of `st` in branch order, for splitting work across threads.
    /// Returns `None` when `st` is pruned; a tangent-free `st` is reported
    /// through the flag.
    pub(crate) fn children(&mut self, st: &State) -> (bool, Vec<State>) {
        self.nodes += 1;
        let (tangent_free, cands) = match self.examine(st) {
            Examined::Pruned => return (false, Vec::new()),
            Examined::TangentFree => {
                if !self.params.extend || st.size() >= self.params.cap {
                    return (true, Vec::new());
                }
                (true, (0..self.plane.n() as u32).filter(|&p| st.available(p)).collect::<Vec<_>>())
            }
            Examined::Branch(c) => (false, c),
        };
        if st.size() >= self.params.cap {
            return (tangent_free, Vec::new());
        }
        let mut out = Vec::with_capacity(cands.len());
        let mut base = st.clone();
        for &c in &cands {
            let mut child = base.clone();
            child.add(self.plane, c);
            out.push(child);
            base.forbid(self.plane, c);
        }
        (tangent_free, out)
    }
}
