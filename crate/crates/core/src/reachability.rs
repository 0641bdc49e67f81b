//! Exact reachability search over strict 0/1 configurations.
//!
//! Moves are modelled as flips: a transition needs some cells full and some
//! cells empty, and swaps all of them. Forward jumps (two full, one empty)
//! and reversed moves (one full, the gains empty) both fit.
//!
//! Goal-directed searches can use a stubborn-set reduction: at each state
//! only a subset of the enabled transitions is explored, chosen so that
//! every path to the goal is preserved up to reordering. Both move systems
//! are acyclic (every transition changes the peg count in the same
//! direction), so no extra ignoring condition is needed.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::board::{Board, Configuration, Position};
use crate::moves::{Direction, Jump, MoveMatrix};
use crate::relaxed::IlpInstance;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Transition {
    /// Cells that must hold a peg; emptied by the move.
    pub full: Vec<usize>,
    /// Cells that must be empty; filled by the move.
    pub empty: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Literal {
    Full(usize),
    Empty(usize),
}

/// Transition system over the cells of a board.
#[derive(Clone, Debug)]
pub struct Net {
    transitions: Vec<Transition>,
    /// Transitions with the cell in `full`: they make it empty.
    uses_full: Vec<Vec<usize>>,
    /// Transitions with the cell in `empty`: they make it full.
    uses_empty: Vec<Vec<usize>>,
}

impl Net {
    pub fn new(n: usize, transitions: Vec<Transition>) -> Self {
        let mut uses_full = vec![Vec::new(); n];
        let mut uses_empty = vec![Vec::new(); n];
        for (t, tr) in transitions.iter().enumerate() {
            for &c in &tr.full {
                uses_full[c].push(t);
            }
            for &c in &tr.empty {
                uses_empty[c].push(t);
            }
        }
        Net {
            transitions,
            uses_full,
            uses_empty,
        }
    }

    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    fn enabled(&self, s: &[u64], t: usize) -> bool {
        let tr = &self.transitions[t];
        tr.full.iter().all(|&c| get(s, c)) && tr.empty.iter().all(|&c| !get(s, c))
    }

    fn fire(&self, s: &mut [u64], t: usize) {
        let tr = &self.transitions[t];
        for &c in tr.full.iter().chain(&tr.empty) {
            s[c / 64] ^= 1 << (c % 64);
        }
    }

    fn producers(&self, lit: Literal) -> &[usize] {
        match lit {
            Literal::Full(c) => &self.uses_empty[c],
            Literal::Empty(c) => &self.uses_full[c],
        }
    }

    /// Enabled members of a stubborn set seeded by the producers of `lit`.
    fn stubborn(&self, s: &[u64], lit: Literal, in_set: &mut [bool]) -> Vec<usize> {
        let mut work: Vec<usize> = Vec::new();
        let mut members: Vec<usize> = Vec::new();
        let mut add = |t: usize, work: &mut Vec<usize>, members: &mut Vec<usize>| {
            if !in_set[t] {
                in_set[t] = true;
                work.push(t);
                members.push(t);
            }
        };
        for &t in self.producers(lit) {
            add(t, &mut work, &mut members);
        }
        let mut enabled = Vec::new();
        while let Some(t) = work.pop() {
            let tr = &self.transitions[t];
            if self.enabled(s, t) {
                enabled.push(t);
                for &c in &tr.full {
                    for &u in &self.uses_full[c] {
                        add(u, &mut work, &mut members);
                    }
                }
                for &c in &tr.empty {
                    for &u in &self.uses_empty[c] {
                        add(u, &mut work, &mut members);
                    }
                }
            } else {
                // a missing precondition with the fewest ways to establish it
                let missing = tr
                    .full
                    .iter()
                    .filter(|&&c| !get(s, c))
                    .map(|&c| Literal::Full(c))
                    .chain(tr.empty.iter().filter(|&&c| get(s, c)).map(|&c| Literal::Empty(c)))
                    .min_by_key(|&l| self.producers(l).len())
                    .expect("disabled transition has an unmet precondition");
                for &u in self.producers(missing) {
                    add(u, &mut work, &mut members);
                }
            }
        }
        for t in members {
            in_set[t] = false;
        }
        enabled.sort_unstable();
        enabled
    }
}

fn get(s: &[u64], c: usize) -> bool {
    s[c / 64] >> (c % 64) & 1 == 1
}

fn bits_of(config: &Configuration) -> Vec<u64> {
    let n = config.counts().len();
    let mut s = vec![0u64; n.div_ceil(64).max(1)];
    for (i, &v) in config.counts().iter().enumerate() {
        if v == 1 {
            s[i / 64] |= 1 << (i % 64);
        }
    }
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub max_states: u64,
    /// Use the stubborn-set reduction in goal-directed searches.
    pub reduction: bool,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_states: 5_000_000,
            reduction: true,
        }
    }
}

impl Limits {
    pub fn plain(max_states: u64) -> Self {
        Limits {
            max_states,
            reduction: false,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReachError {
    #[error("state budget exhausted after {explored} states")]
    StateBudgetExhausted { explored: u64 },
    #[error("start configuration is not 0/1")]
    StartNotStrict,
    #[error("{0} is not on the board")]
    OffBoard(Position),
}

/// Outcome of a goal search on a [`Net`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetSearch {
    /// Transition indices leading to a goal state, if one is reachable.
    pub path: Option<Vec<usize>>,
    pub final_state: Option<Vec<u64>>,
    pub explored: u64,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Zobrist key of a cell: a state's fingerprint is the xor over its full cells.
fn cell_key(c: usize) -> u128 {
    let c = c as u64;
    (splitmix(2 * c) as u128) << 64 | splitmix(2 * c + 1) as u128
}

/// 128-bit state fingerprint; goal searches store these instead of full
/// states so that boards with thousands of cells fit in memory.
fn fingerprint(s: &[u64]) -> u128 {
    let mut fp = 0;
    for (w, &word) in s.iter().enumerate() {
        let mut bits = word;
        while bits != 0 {
            fp ^= cell_key(w * 64 + bits.trailing_zeros() as usize);
            bits &= bits - 1;
        }
    }
    fp
}

struct Frame {
    state: Vec<u64>,
    fp: u128,
    succ: Vec<usize>,
    next: usize,
}

/// Depth-first search for a state satisfying every literal in `goal`.
/// Visited states are kept as fingerprints (hash compaction).
pub fn search_net(net: &Net, start: &[u64], goal: &[Literal], limits: Limits) -> Result<NetSearch, ReachError> {
    let holds = |s: &[u64], l: &Literal| match *l {
        Literal::Full(c) => get(s, c),
        Literal::Empty(c) => !get(s, c),
    };
    let mut in_set = vec![false; net.len()];
    let mut touched = vec![false; net.len()];
    // Without the reduction the enabled set is updated from the parent's:
    // only transitions sharing a cell with the fired one can change.
    let mut successors = |s: &[u64], parent: Option<(&[usize], usize)>| -> Vec<usize> {
        if limits.reduction {
            if let Some(&lit) = goal.iter().find(|l| !holds(s, l)) {
                return net.stubborn(s, lit, &mut in_set);
            }
        }
        let Some((enabled, fired)) = parent else {
            return (0..net.len()).filter(|&t| net.enabled(s, t)).collect();
        };
        let tr = &net.transitions[fired];
        let near: Vec<usize> = tr
            .full
            .iter()
            .chain(&tr.empty)
            .flat_map(|&c| net.uses_full[c].iter().chain(&net.uses_empty[c]))
            .copied()
            .filter(|&t| !std::mem::replace(&mut touched[t], true))
            .collect();
        let mut out: Vec<usize> = enabled.iter().copied().filter(|&t| !touched[t]).collect();
        out.extend(near.iter().copied().filter(|&t| net.enabled(s, t)));
        for t in near {
            touched[t] = false;
        }
        out.sort_unstable();
        out
    };
    let mut seen: HashSet<u128> = HashSet::new();
    let mut explored = 1u64;
    if goal.iter().all(|l| holds(start, l)) {
        return Ok(NetSearch {
            path: Some(Vec::new()),
            final_state: Some(start.to_vec()),
            explored,
        });
    }
    let fp = fingerprint(start);
    seen.insert(fp);
    let mut stack = vec![Frame {
        state: start.to_vec(),
        fp,
        succ: successors(start, None),
        next: 0,
    }];
    while let Some(top) = stack.last_mut() {
        if top.next == top.succ.len() {
            stack.pop();
            continue;
        }
        let t = top.succ[top.next];
        top.next += 1;
        let mut child = top.state.clone();
        net.fire(&mut child, t);
        let tr = &net.transitions[t];
        let key = tr.full.iter().chain(&tr.empty).fold(top.fp, |k, &c| k ^ cell_key(c));
        if seen.contains(&key) {
            continue;
        }
        explored += 1;
        if explored > limits.max_states {
            return Err(ReachError::StateBudgetExhausted { explored });
        }
        if goal.iter().all(|l| holds(&child, l)) {
            let path: Vec<usize> = stack.iter().map(|f| f.succ[f.next - 1]).collect();
            return Ok(NetSearch {
                path: Some(path),
                final_state: Some(child),
                explored,
            });
        }
        seen.insert(key);
        let succ = successors(&child, Some((&top.succ, t)));
        stack.push(Frame {
            state: child,
            fp: key,
            succ,
            next: 0,
        });
    }
    Ok(NetSearch {
        path: None,
        final_state: None,
        explored,
    })
}

/// Every state reachable from `start`, with no reduction.
pub fn enumerate_states(net: &Net, start: &[u64], max_states: u64) -> Result<Vec<Vec<u64>>, ReachError> {
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut order = Vec::new();
    let mut stack = vec![start.to_vec()];
    seen.insert(start.to_vec());
    while let Some(s) = stack.pop() {
        for t in 0..net.len() {
            if net.enabled(&s, t) {
                let mut c = s.clone();
                net.fire(&mut c, t);
                if seen.insert(c.clone()) {
                    if seen.len() as u64 > max_states {
                        return Err(ReachError::StateBudgetExhausted {
                            explored: seen.len() as u64,
                        });
                    }
                    stack.push(c);
                }
            }
        }
        order.push(s);
    }
    Ok(order)
}

/// Forward solitaire jumps on a board, with the jump for each transition.
pub fn forward_net(board: &Board) -> (Net, Vec<Jump>) {
    let mut ts = Vec::new();
    let mut jumps = Vec::new();
    for &p in board.cells() {
        for d in Direction::ALL {
            let j = Jump { from: p, dir: d };
            if let (Some(b), Some(c)) = (board.index_of(j.over()), board.index_of(j.to())) {
                let a = board.index_of(p).unwrap();
                ts.push(Transition {
                    full: vec![a, b],
                    empty: vec![c],
                });
                jumps.push(j);
            }
        }
    }
    (Net::new(board.len(), ts), jumps)
}

/// Reversed moves of a move matrix: remove the loss peg, fill the gains.
pub fn reversed_net(moves: &MoveMatrix) -> Net {
    let ts = moves
        .columns()
        .iter()
        .map(|c| Transition {
            full: c.loss.into_iter().collect(),
            empty: c.gains.clone(),
        })
        .collect();
    Net::new(moves.n_rows(), ts)
}

fn strict_bits(start: &Configuration) -> Result<Vec<u64>, ReachError> {
    if !start.is_strict() {
        return Err(ReachError::StartNotStrict);
    }
    Ok(bits_of(start))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub reachable: bool,
    pub witness: Option<Vec<Jump>>,
    pub explored: u64,
}

/// Can forward play put a peg on `target`?
pub fn search_target(
    board: &Board,
    start: &Configuration,
    target: Position,
    limits: Limits,
) -> Result<SearchResult, ReachError> {
    let t = board.index_of(target).ok_or(ReachError::OffBoard(target))?;
    let s = strict_bits(start)?;
    let (net, jumps) = forward_net(board);
    let r = search_net(&net, &s, &[Literal::Full(t)], limits)?;
    Ok(SearchResult {
        reachable: r.path.is_some(),
        witness: r.path.map(|p| p.into_iter().map(|k| jumps[k]).collect()),
        explored: r.explored,
    })
}

/// Family of port subsets that can be simultaneously occupied. Subsets are
/// bitmasks over `ports`; the family is closed under taking subsets and
/// always contains the empty set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PortFamily {
    pub ports: Vec<Position>,
    /// Maximal achievable masks.
    pub maximal: Vec<u32>,
    pub explored: u64,
}

impl PortFamily {
    pub fn contains_mask(&self, mask: u32) -> bool {
        self.maximal.iter().any(|&m| m & mask == mask)
    }

    pub fn contains(&self, cells: &[Position]) -> bool {
        let mut mask = 0;
        for c in cells {
            match self.ports.iter().position(|p| p == c) {
                Some(k) => mask |= 1 << k,
                None => return false,
            }
        }
        self.contains_mask(mask)
    }

    /// All members, sorted.
    pub fn masks(&self) -> Vec<u32> {
        (0..1u32 << self.ports.len())
            .filter(|&m| self.contains_mask(m))
            .collect()
    }
}

fn maximal_only(mut masks: Vec<u32>) -> Vec<u32> {
    masks.sort_unstable();
    masks.dedup();
    let all = masks.clone();
    masks.retain(|&m| !all.iter().any(|&o| o != m && o & m == m));
    masks
}

fn port_mask(s: &[u64], ports: &[usize]) -> u32 {
    ports
        .iter()
        .enumerate()
        .filter(|&(_, &c)| get(s, c))
        .fold(0, |m, (k, _)| m | 1 << k)
}

/// Exact family of simultaneously occupiable port subsets under forward
/// play. With `limits.reduction` each candidate subset is a separate
/// goal-directed search; otherwise the whole state space is enumerated.
pub fn achievable_output_sets(
    board: &Board,
    start: &Configuration,
    ports: &[Position],
    limits: Limits,
) -> Result<PortFamily, ReachError> {
    assert!(ports.len() <= 16, "too many ports");
    let idx: Vec<usize> = ports
        .iter()
        .map(|&p| board.index_of(p).ok_or(ReachError::OffBoard(p)))
        .collect::<Result<_, _>>()?;
    let s = strict_bits(start)?;
    let (net, _) = forward_net(board);
    if !limits.reduction {
        let states = enumerate_states(&net, &s, limits.max_states)?;
        return Ok(PortFamily {
            ports: ports.to_vec(),
            maximal: maximal_only(states.iter().map(|st| port_mask(st, &idx)).collect()),
            explored: states.len() as u64,
        });
    }
    let k = ports.len();
    let mut found: Vec<u32> = vec![port_mask(&s, &idx)];
    let mut explored = 0u64;
    let mut candidates: Vec<u32> = (1..1u32 << k).collect();
    candidates.sort_by_key(|m| (std::cmp::Reverse(m.count_ones()), *m));
    for mask in candidates {
        if found.iter().any(|&f| f & mask == mask) {
            continue;
        }
        let goal: Vec<Literal> = (0..k)
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| Literal::Full(idx[b]))
            .collect();
        let budget = Limits {
            max_states: limits.max_states.saturating_sub(explored).max(1),
            ..limits
        };
        let r = search_net(&net, &s, &goal, budget)?;
        explored += r.explored;
        if let Some(st) = r.final_state {
            found.push(port_mask(&st, &idx));
        }
    }
    Ok(PortFamily {
        ports: ports.to_vec(),
        maximal: maximal_only(found),
        explored,
    })
}

/// Strict side of the relaxed/strict equivalence: is there a sequence of
/// reversed moves from `b` that keeps every cell 0/1, ends within the caps
/// `c`, and uses each move no more often than its multiplicity cap?
///
/// Every reversed move adds a peg, so a strict sequence has fewer moves
/// than the board has cells; caps at or above that never bind and the
/// plain goal search applies.
pub fn reachability_equiv_oracle(ilp: &IlpInstance, limits: Limits) -> Result<bool, ReachError> {
    let start = ilp.start();
    let s = strict_bits(&start)?;
    let net = reversed_net(ilp.moves());
    let goal: Vec<Literal> = (0..ilp.n_positions())
        .filter(|&i| ilp.c()[i] == 0)
        .map(Literal::Empty)
        .collect();
    let longest = ilp.n_positions().saturating_sub(1) as u32;
    if ilp.caps().iter().all(|&k| k >= longest) {
        return Ok(search_net(&net, &s, &goal, limits)?.path.is_some());
    }
    capped_search(&net, &s, &goal, ilp.caps(), limits.max_states)
}

/// Goal search whose states also count how often each transition fired.
fn capped_search(
    net: &Net,
    start: &[u64],
    goal: &[Literal],
    caps: &[u32],
    max_states: u64,
) -> Result<bool, ReachError> {
    let holds = |s: &[u64]| {
        goal.iter().all(|l| match *l {
            Literal::Full(c) => get(s, c),
            Literal::Empty(c) => !get(s, c),
        })
    };
    let init = (start.to_vec(), vec![0u32; net.len()]);
    let mut seen: HashSet<(Vec<u64>, Vec<u32>)> = HashSet::new();
    let mut stack = vec![init.clone()];
    seen.insert(init);
    while let Some((state, used)) = stack.pop() {
        if holds(&state) {
            return Ok(true);
        }
        for t in 0..net.len() {
            if used[t] >= caps[t] || !net.enabled(&state, t) {
                continue;
            }
            let mut next = state.clone();
            net.fire(&mut next, t);
            let mut u = used.clone();
            u[t] += 1;
            let key = (next, u);
            if !seen.contains(&key) {
                if seen.len() as u64 >= max_states {
                    return Err(ReachError::StateBudgetExhausted {
                        explored: seen.len() as u64,
                    });
                }
                seen.insert(key.clone());
                stack.push(key);
            }
        }
    }
    Ok(false)
}

/// Cell occupancy after applying a transition path; for tests and reports.
pub fn replay_path(net: &Net, start: &[u64], path: &[usize]) -> Option<Vec<u64>> {
    let mut s = start.to_vec();
    for &t in path {
        if !net.enabled(&s, t) {
            return None;
        }
        net.fire(&mut s, t);
    }
    Some(s)
}

/// Bitset for a configuration over the board's cell order.
pub fn config_bits(config: &Configuration) -> Vec<u64> {
    bits_of(config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verifier::replay_forward;

    fn line(n: i32) -> Board {
        Board::new((1..=n).map(|x| Position::new(x, 0)), [], Position::new(n, 0)).unwrap()
    }

    fn pegs(b: &Board, xs: &[i32]) -> Configuration {
        Configuration::from_pegs(b, xs.iter().map(|&x| Position::new(x, 0))).unwrap()
    }

    #[test]
    fn line_jump() {
        let b = line(3);
        for reduction in [false, true] {
            let lim = Limits {
                max_states: 100,
                reduction,
            };
            let r = search_target(&b, &pegs(&b, &[1, 2]), Position::new(3, 0), lim).unwrap();
            assert!(r.reachable);
            let w = r.witness.unwrap();
            assert_eq!(w.len(), 1);
            let end = replay_forward(&b, &pegs(&b, &[1, 2]), &w).unwrap();
            assert_eq!(end.at(&b, Position::new(3, 0)), Some(1));
            let r = search_target(&b, &pegs(&b, &[1]), Position::new(3, 0), lim).unwrap();
            assert!(!r.reachable);
        }
    }

    #[test]
    fn two_by_two_has_no_jumps() {
        let b = Board::rectangle(0, 1, 0, 1, Position::new(0, 0)).unwrap();
        let (net, _) = forward_net(&b);
        assert!(net.is_empty());
        let full = Configuration::from_pegs(&b, [Position::new(0, 0), Position::new(1, 1)]).unwrap();
        assert!(
            search_target(&b, &full, Position::new(0, 0), Limits::default())
                .unwrap()
                .reachable
        );
        assert!(
            !search_target(&b, &full, Position::new(1, 0), Limits::default())
                .unwrap()
                .reachable
        );
    }

    #[test]
    fn plain_search_visits_every_state() {
        let b = Board::rectangle(0, 3, 0, 2, Position::new(0, 0)).unwrap();
        let mut start = Configuration::empty(&b);
        for i in 1..b.len() {
            start.counts_mut()[i] = 1;
        }
        let (net, _) = forward_net(&b);
        let bits = config_bits(&start);
        let all = enumerate_states(&net, &bits, 1_000_000).unwrap();
        // a goal no state meets: every full cell empty and the target full
        let mut goal: Vec<Literal> = (0..b.len()).map(Literal::Empty).collect();
        goal.push(Literal::Full(0));
        let r = search_net(&net, &bits, &goal, Limits::plain(1_000_000)).unwrap();
        assert!(r.path.is_none());
        assert_eq!(r.explored, all.len() as u64);
    }

    #[test]
    fn budget_reported() {
        let b = Board::rectangle(0, 4, 0, 2, Position::new(0, 0)).unwrap();
        let mut start = Configuration::empty(&b);
        for i in 1..b.len() {
            start.counts_mut()[i] = 1;
        }
        let r = achievable_output_sets(&b, &start, &[Position::new(0, 0)], Limits::plain(3));
        assert!(matches!(r, Err(ReachError::StateBudgetExhausted { .. })));
    }

    #[test]
    fn port_family_downward_closed() {
        let b = line(5);
        let f = achievable_output_sets(
            &b,
            &pegs(&b, &[1, 2, 4]),
            &[Position::new(3, 0), Position::new(5, 0)],
            Limits::default(),
        )
        .unwrap();
        let plain = achievable_output_sets(
            &b,
            &pegs(&b, &[1, 2, 4]),
            &[Position::new(3, 0), Position::new(5, 0)],
            Limits::plain(1000),
        )
        .unwrap();
        assert_eq!(f.masks(), plain.masks());
        assert!(f.contains(&[]));
        assert!(f.contains(&[Position::new(3, 0)]));
    }

    #[test]
    fn equivalence_oracle_small() {
        use crate::moves::enumerate_jump_moves;
        use crate::relaxed::build_ilp;
        let b = line(3).with_desert([Position::new(3, 0)]).unwrap();
        let m = enumerate_jump_moves(&b);
        let ilp = build_ilp(&b, &m, &Configuration::single_peg_at_target(&b)).unwrap();
        assert!(reachability_equiv_oracle(&ilp, Limits::default()).unwrap());

        let b = Board::new(
            [Position::new(0, 0), Position::new(1, 0)],
            [Position::new(0, 0)],
            Position::new(0, 0),
        )
        .unwrap();
        let m = enumerate_jump_moves(&b);
        let ilp = build_ilp(&b, &m, &Configuration::single_peg_at_target(&b)).unwrap();
        assert!(!reachability_equiv_oracle(&ilp, Limits::default()).unwrap());
    }
}
