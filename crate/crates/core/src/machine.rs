//! Turing machine configurations, micro-rules, deterministic rules, and
//! forward/inverse successor enumeration.
//!
//! A *micro-rule* is a single `(state, color) -> (state', color', move)`
//! transition case. The rulial multiway graph applies every micro-rule at
//! every step; a deterministic rule is a total assignment of one outcome
//! per case, so there are `(|moves|*s*k)^(s*k)` deterministic machines.

use crate::error::Error;
use crate::Result;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Tape topology. Finite models carry the tape length `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TapeModel {
    /// Two-way infinite tape, blank (color 0) outside the stored window.
    Unbounded,
    /// Length-n tape with wraparound head moves.
    Cyclic(u32),
    /// Length-n tape; moves that would leave `[0, n)` are inapplicable.
    Bounded(u32),
}

impl TapeModel {
    pub fn len(&self) -> Option<u32> {
        match self {
            TapeModel::Unbounded => None,
            TapeModel::Cyclic(n) | TapeModel::Bounded(n) => Some(*n),
        }
    }
}

/// The machine family under consideration: state count, color count, the
/// allowed head displacements, and the tape model.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MachineSpec {
    pub s: u8,
    pub k: u8,
    pub moves: Vec<i32>,
    pub tape_model: TapeModel,
}

impl MachineSpec {
    /// Default move set `{-1, +1}` on an unbounded tape.
    pub fn new(s: u8, k: u8) -> Result<Self> {
        Self::with_moves(s, k, vec![-1, 1], TapeModel::Unbounded)
    }

    pub fn with_tape(s: u8, k: u8, tape_model: TapeModel) -> Result<Self> {
        Self::with_moves(s, k, vec![-1, 1], tape_model)
    }

    pub fn with_moves(s: u8, k: u8, moves: Vec<i32>, tape_model: TapeModel) -> Result<Self> {
        if s < 1 {
            return Err(Error::InvalidSpec("s must be >= 1".into()));
        }
        if k < 1 {
            return Err(Error::InvalidSpec("k must be >= 1".into()));
        }
        if k > 36 {
            return Err(Error::InvalidSpec("k > 36 not supported by the key format".into()));
        }
        if moves.is_empty() {
            return Err(Error::InvalidSpec("moves must be nonempty".into()));
        }
        for (i, m) in moves.iter().enumerate() {
            if moves[..i].contains(m) {
                return Err(Error::InvalidSpec(format!("duplicate move {m}")));
            }
        }
        if let Some(n) = tape_model.len() {
            if n < 1 {
                return Err(Error::InvalidSpec("finite tape requires n >= 1".into()));
            }
        }
        Ok(MachineSpec { s, k, moves, tape_model })
    }

    /// Number of `(state, color)` rule cases.
    pub fn case_count(&self) -> usize {
        self.s as usize * self.k as usize
    }

    /// Number of outcomes per case (`|moves|*s*k`).
    pub fn outcome_count(&self) -> usize {
        self.moves.len() * self.case_count()
    }

    /// Total micro-rules: `case_count * outcome_count`. For the default
    /// move set this is `2*s^2*k^2`.
    pub fn micro_rule_count(&self) -> usize {
        self.case_count() * self.outcome_count()
    }

    /// Number of deterministic rules `(|moves|*s*k)^(s*k)`, if it fits in u64.
    pub fn rule_count(&self) -> Result<u64> {
        let base = self.outcome_count() as u64;
        let mut total: u64 = 1;
        for _ in 0..self.case_count() {
            total = total.checked_mul(base).ok_or(Error::RuleCountOverflow)?;
        }
        Ok(total)
    }

    pub fn move_index(&self, mv: i32) -> Option<usize> {
        self.moves.iter().position(|&m| m == mv)
    }
}

/// Tape content in canonical form.
///
/// Unbounded tapes store the finite non-blank window: `left` is the
/// absolute position of `cells[0]`, and the window is trimmed so its first
/// and last cells are non-blank (or the window is empty, with `left = 0`).
/// Finite tapes store all `n` cells.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tape {
    Unbounded { left: i32, cells: Vec<u8> },
    Finite { cells: Vec<u8> },
}

/// A machine configuration: head state, absolute head position, tape.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Config {
    pub state: u8,
    pub pos: i32,
    pub tape: Tape,
}

fn digit_char(c: u8) -> char {
    char::from_digit(c as u32, 36).expect("color < 36")
}

fn digit_val(ch: char) -> Option<u8> {
    ch.to_digit(36).map(|d| d as u8)
}

impl Config {
    /// The blank-tape start configuration: state 0, position 0, all blank.
    pub fn blank(spec: &MachineSpec) -> Config {
        let tape = match spec.tape_model {
            TapeModel::Unbounded => Tape::Unbounded { left: 0, cells: Vec::new() },
            TapeModel::Cyclic(n) | TapeModel::Bounded(n) => {
                Tape::Finite { cells: vec![0; n as usize] }
            }
        };
        Config { state: 0, pos: 0, tape }
    }

    /// Validate ranges and canonical trimming against `spec`.
    pub fn validate(&self, spec: &MachineSpec) -> Result<()> {
        if self.state >= spec.s {
            return Err(Error::InvalidConfig(format!("state {} >= s {}", self.state, spec.s)));
        }
        let cells = match &self.tape {
            Tape::Unbounded { left, cells } => {
                if spec.tape_model != TapeModel::Unbounded {
                    return Err(Error::InvalidConfig("tape kind does not match spec".into()));
                }
                if cells.is_empty() && *left != 0 {
                    return Err(Error::InvalidConfig("empty window must have left = 0".into()));
                }
                if !cells.is_empty() && (cells[0] == 0 || cells[cells.len() - 1] == 0) {
                    return Err(Error::InvalidConfig("window not trimmed".into()));
                }
                cells
            }
            Tape::Finite { cells } => {
                let n = spec.tape_model.len().ok_or_else(|| {
                    Error::InvalidConfig("finite tape with unbounded spec".into())
                })?;
                if cells.len() != n as usize {
                    return Err(Error::InvalidConfig("tape length != n".into()));
                }
                if self.pos < 0 || self.pos >= n as i32 {
                    return Err(Error::InvalidConfig("head position outside [0, n)".into()));
                }
                cells
            }
        };
        if cells.iter().any(|&c| c >= spec.k) {
            return Err(Error::InvalidConfig("color out of range".into()));
        }
        Ok(())
    }

    /// Color under an absolute position (blank outside the stored window).
    pub fn color_at(&self, pos: i32) -> u8 {
        match &self.tape {
            Tape::Unbounded { left, cells } => {
                let idx = pos as i64 - *left as i64;
                if idx < 0 || idx >= cells.len() as i64 {
                    0
                } else {
                    cells[idx as usize]
                }
            }
            Tape::Finite { cells } => cells[pos as usize],
        }
    }

    /// Color under the head.
    pub fn head_color(&self) -> u8 {
        self.color_at(self.pos)
    }

    /// Copy of this config with `color` written at absolute position
    /// `pos`, re-trimmed to canonical form.
    pub fn with_written(&self, pos: i32, color: u8) -> Config {
        let mut c = self.clone();
        match &mut c.tape {
            Tape::Finite { cells } => {
                cells[pos as usize] = color;
            }
            Tape::Unbounded { left, cells } => {
                if cells.is_empty() {
                    if color != 0 {
                        *left = pos;
                        cells.push(color);
                    }
                } else {
                    let idx = pos as i64 - *left as i64;
                    if idx < 0 {
                        if color != 0 {
                            let pad = (-idx) as usize;
                            let mut new = vec![0u8; pad];
                            new[0] = color;
                            new.extend_from_slice(cells);
                            *cells = new;
                            *left = pos;
                        }
                    } else if idx >= cells.len() as i64 {
                        if color != 0 {
                            cells.resize(idx as usize + 1, 0);
                            cells[idx as usize] = color;
                        }
                    } else {
                        cells[idx as usize] = color;
                    }
                }
                trim(left, cells);
            }
        }
        c
    }

    /// Canonical text key: `s<state>:p<pos>:L<left>:<colors>` for unbounded
    /// tapes, `s<state>:p<pos>:n<n>:<colors>` for finite ones. This exact
    /// string is the node key in every export.
    pub fn key(&self) -> String {
        let mut out = String::with_capacity(16);
        match &self.tape {
            Tape::Unbounded { left, cells } => {
                out.push_str(&format!("s{}:p{}:L{}:", self.state, self.pos, left));
                for &c in cells {
                    out.push(digit_char(c));
                }
            }
            Tape::Finite { cells } => {
                out.push_str(&format!("s{}:p{}:n{}:", self.state, self.pos, cells.len()));
                for &c in cells {
                    out.push(digit_char(c));
                }
            }
        }
        out
    }

    /// Inverse of [`Config::key`].
    pub fn parse(key: &str) -> Result<Config> {
        let err = |msg: &str| Error::BadConfigKey(key.to_string(), msg.to_string());
        let parts: Vec<&str> = key.splitn(4, ':').collect();
        if parts.len() != 4 {
            return Err(err("expected 4 colon-separated fields"));
        }
        let state: u8 = parts[0]
            .strip_prefix('s')
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| err("bad state field"))?;
        let pos: i32 = parts[1]
            .strip_prefix('p')
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| err("bad pos field"))?;
        let mut cells = Vec::with_capacity(parts[3].len());
        for ch in parts[3].chars() {
            cells.push(digit_val(ch).ok_or_else(|| err("bad color digit"))?);
        }
        let tape = if let Some(left) = parts[2].strip_prefix('L') {
            let left: i32 = left.parse().map_err(|_| err("bad left field"))?;
            if cells.is_empty() && left != 0 {
                return Err(err("empty window must have left = 0"));
            }
            if !cells.is_empty() && (cells[0] == 0 || cells[cells.len() - 1] == 0) {
                return Err(err("window not trimmed"));
            }
            Tape::Unbounded { left, cells }
        } else if let Some(n) = parts[2].strip_prefix('n') {
            let n: usize = n.parse().map_err(|_| err("bad n field"))?;
            if cells.len() != n {
                return Err(err("color count != n"));
            }
            Tape::Finite { cells }
        } else {
            return Err(err("third field must be L<left> or n<n>"));
        };
        Ok(Config { state, pos, tape })
    }
}

fn trim(left: &mut i32, cells: &mut Vec<u8>) {
    let start = cells.iter().position(|&c| c != 0);
    match start {
        None => {
            cells.clear();
            *left = 0;
        }
        Some(start) => {
            let end = cells.iter().rposition(|&c| c != 0).unwrap();
            cells.drain(end + 1..);
            cells.drain(..start);
            *left += start as i32;
        }
    }
}

/// One transition case with one outcome; the atomic edge label of the
/// rulial multiway graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MicroRule {
    pub read_state: u8,
    pub read_color: u8,
    pub write_state: u8,
    pub write_color: u8,
    pub mv: i32,
}

impl MicroRule {
    /// Index in [`enumerate_micro_rules`] order: lexicographic by
    /// `(read_state, read_color, write_state, write_color, move index)`.
    pub fn index(&self, spec: &MachineSpec) -> usize {
        let s = spec.s as usize;
        let k = spec.k as usize;
        let mv = spec.move_index(self.mv).expect("move in spec");
        ((((self.read_state as usize * k + self.read_color as usize) * s
            + self.write_state as usize)
            * k
            + self.write_color as usize)
            * spec.moves.len())
            + mv
    }

    pub fn from_index(spec: &MachineSpec, idx: usize) -> Option<MicroRule> {
        if idx >= spec.micro_rule_count() {
            return None;
        }
        let nm = spec.moves.len();
        let k = spec.k as usize;
        let s = spec.s as usize;
        let mv = spec.moves[idx % nm];
        let rest = idx / nm;
        let write_color = (rest % k) as u8;
        let rest = rest / k;
        let write_state = (rest % s) as u8;
        let rest = rest / s;
        let read_color = (rest % k) as u8;
        let read_state = (rest / k) as u8;
        Some(MicroRule { read_state, read_color, write_state, write_color, mv })
    }
}

impl fmt::Display for MicroRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{}>{},{},{:+}",
            self.read_state, self.read_color, self.write_state, self.write_color, self.mv
        )
    }
}

/// All micro-rules for a spec, in the documented deterministic order.
pub fn enumerate_micro_rules(spec: &MachineSpec) -> Vec<MicroRule> {
    let mut out = Vec::with_capacity(spec.micro_rule_count());
    for rs in 0..spec.s {
        for rc in 0..spec.k {
            for ws in 0..spec.s {
                for wc in 0..spec.k {
                    for &mv in &spec.moves {
                        out.push(MicroRule {
                            read_state: rs,
                            read_color: rc,
                            write_state: ws,
                            write_color: wc,
                            mv,
                        });
                    }
                }
            }
        }
    }
    out
}

/// The outcome a deterministic rule assigns to one case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CaseOutcome {
    pub write_state: u8,
    pub write_color: u8,
    pub move_idx: u8,
}

/// A total rule table: one outcome per `(state, color)` case, cases
/// ordered lexicographically (case `j` handles state `j / k`, color `j % k`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DetRule {
    pub outcomes: Vec<CaseOutcome>,
}

impl DetRule {
    pub fn outcome(&self, spec: &MachineSpec, state: u8, color: u8) -> CaseOutcome {
        self.outcomes[state as usize * spec.k as usize + color as usize]
    }

    /// The micro-rule this rule applies to configuration `c`.
    pub fn micro_rule_at(&self, spec: &MachineSpec, c: &Config) -> MicroRule {
        let color = c.head_color();
        let o = self.outcome(spec, c.state, color);
        MicroRule {
            read_state: c.state,
            read_color: color,
            write_state: o.write_state,
            write_color: o.write_color,
            mv: spec.moves[o.move_idx as usize],
        }
    }
}

/// Decode a rule id. The id is read base `|moves|*s*k` with `s*k` digits,
/// most significant digit first; digit `j` selects the outcome of case `j`
/// as `(write_state*k + write_color)*|moves| + move_idx`.
pub fn rule_from_id(spec: &MachineSpec, id: u64) -> Result<DetRule> {
    let count = spec.rule_count()?;
    if id >= count {
        return Err(Error::RuleIdOutOfRange { id, count });
    }
    let base = spec.outcome_count() as u64;
    let cases = spec.case_count();
    let nm = spec.moves.len() as u64;
    let k = spec.k as u64;
    let mut outcomes = vec![
        CaseOutcome { write_state: 0, write_color: 0, move_idx: 0 };
        cases
    ];
    let mut rest = id;
    for j in (0..cases).rev() {
        let digit = rest % base;
        rest /= base;
        let move_idx = (digit % nm) as u8;
        let wsc = digit / nm;
        outcomes[j] = CaseOutcome {
            write_state: (wsc / k) as u8,
            write_color: (wsc % k) as u8,
            move_idx,
        };
    }
    Ok(DetRule { outcomes })
}

/// Inverse of [`rule_from_id`].
pub fn id_from_rule(spec: &MachineSpec, rule: &DetRule) -> u64 {
    let base = spec.outcome_count() as u64;
    let nm = spec.moves.len() as u64;
    let k = spec.k as u64;
    let mut id = 0u64;
    for o in &rule.outcomes {
        let digit = (o.write_state as u64 * k + o.write_color as u64) * nm + o.move_idx as u64;
        id = id * base + digit;
    }
    id
}

/// Apply one micro-rule. `None` means inapplicable: the rule case does not
/// match the configuration, or a bounded-tape move would leave the tape.
pub fn apply_micro_rule(spec: &MachineSpec, c: &Config, m: &MicroRule) -> Option<Config> {
    if c.state != m.read_state || c.head_color() != m.read_color {
        return None;
    }
    apply_outcome(spec, c, m.write_state, m.write_color, m.mv)
}

fn apply_outcome(spec: &MachineSpec, c: &Config, ws: u8, wc: u8, mv: i32) -> Option<Config> {
    let new_pos = match spec.tape_model {
        TapeModel::Unbounded => c.pos + mv,
        TapeModel::Cyclic(n) => (c.pos + mv).rem_euclid(n as i32),
        TapeModel::Bounded(n) => {
            let p = c.pos + mv;
            if p < 0 || p >= n as i32 {
                return None;
            }
            p
        }
    };
    let mut next = c.with_written(c.pos, wc);
    next.state = ws;
    next.pos = new_pos;
    Some(next)
}

/// All applicable micro-rule applications from `c`, ordered by micro-rule
/// index. Exactly `|moves|*s*k` entries on unbounded and cyclic tapes;
/// distinct micro-rules may share a target (the multiplicity is kept).
pub fn successors(spec: &MachineSpec, c: &Config) -> Vec<(MicroRule, Config)> {
    let color = c.head_color();
    let mut out = Vec::with_capacity(spec.outcome_count());
    for ws in 0..spec.s {
        for wc in 0..spec.k {
            for &mv in &spec.moves {
                let m = MicroRule {
                    read_state: c.state,
                    read_color: color,
                    write_state: ws,
                    write_color: wc,
                    mv,
                };
                if let Some(next) = apply_outcome(spec, c, ws, wc, mv) {
                    out.push((m, next));
                }
            }
        }
    }
    out
}

/// All `(m, c')` with `apply_micro_rule(c', m) = c`, ordered by micro-rule
/// index. Constructed by inversion: the prior head position is `pos - d`,
/// the micro-rule must have written the current state and the color now at
/// that cell, and the prior `(state, color)` there ranges over all cases.
pub fn predecessors(spec: &MachineSpec, c: &Config) -> Vec<(MicroRule, Config)> {
    let mut out = Vec::with_capacity(spec.outcome_count());
    for &mv in &spec.moves {
        let prev_pos = match spec.tape_model {
            TapeModel::Unbounded => c.pos - mv,
            TapeModel::Cyclic(n) => (c.pos - mv).rem_euclid(n as i32),
            TapeModel::Bounded(n) => {
                let p = c.pos - mv;
                if p < 0 || p >= n as i32 {
                    continue;
                }
                p
            }
        };
        let written = c.color_at(prev_pos);
        for rs in 0..spec.s {
            for rc in 0..spec.k {
                let m = MicroRule {
                    read_state: rs,
                    read_color: rc,
                    write_state: c.state,
                    write_color: written,
                    mv,
                };
                let mut prev = c.with_written(prev_pos, rc);
                prev.state = rs;
                prev.pos = prev_pos;
                out.push((m, prev));
            }
        }
    }
    out.sort_by_key(|(m, _)| m.index(spec));
    out
}

/// A deterministic evolution trace. `halted_at = Some(i)` means step `i+1`
/// would have moved the head off a bounded tape; the trace is truncated
/// after `trace[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub configs: Vec<Config>,
    pub halted_at: Option<usize>,
}

/// One deterministic step; `None` on a bounded-tape boundary exit.
pub fn det_step(spec: &MachineSpec, rule: &DetRule, c: &Config) -> Option<Config> {
    let o = rule.outcome(spec, c.state, c.head_color());
    apply_outcome(spec, c, o.write_state, o.write_color, spec.moves[o.move_idx as usize])
}

/// Evolve `rule` for `t` steps from `init`.
pub fn det_evolve(spec: &MachineSpec, rule: &DetRule, init: &Config, t: usize) -> Trace {
    let mut configs = Vec::with_capacity(t + 1);
    configs.push(init.clone());
    for i in 0..t {
        match det_step(spec, rule, &configs[i]) {
            Some(next) => configs.push(next),
            None => return Trace { configs, halted_at: Some(i) },
        }
    }
    Trace { configs, halted_at: None }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: u8, k: u8) -> MachineSpec {
        MachineSpec::new(s, k).unwrap()
    }

    #[test]
    fn micro_rule_counts() {
        assert_eq!(enumerate_micro_rules(&spec(2, 2)).len(), 32);
        assert_eq!(enumerate_micro_rules(&spec(1, 1)).len(), 2);
        let stay =
            MachineSpec::with_moves(2, 2, vec![-1, 0, 1], TapeModel::Unbounded).unwrap();
        assert_eq!(enumerate_micro_rules(&stay).len(), 48);
        // closed form 2*s^2*k^2 for the default move set
        for s in 1..=4u8 {
            for k in 1..=4u8 {
                let sp = spec(s, k);
                let expect = 2 * (s as usize * k as usize).pow(2);
                assert_eq!(enumerate_micro_rules(&sp).len(), expect);
                assert_eq!(sp.micro_rule_count(), expect);
            }
        }
    }

    #[test]
    fn micro_rule_index_round_trip() {
        let sp = MachineSpec::with_moves(2, 3, vec![-1, 0, 1], TapeModel::Unbounded).unwrap();
        for (i, m) in enumerate_micro_rules(&sp).iter().enumerate() {
            assert_eq!(m.index(&sp), i);
            assert_eq!(MicroRule::from_index(&sp, i).unwrap(), *m);
        }
        assert_eq!(MicroRule::from_index(&sp, sp.micro_rule_count()), None);
    }

    #[test]
    fn rule_counts_match_paper() {
        assert_eq!(spec(2, 2).rule_count().unwrap(), 4096);
        assert_eq!(spec(2, 3).rule_count().unwrap(), 2_985_984);
    }

    #[test]
    fn rule_id_round_trip() {
        for sp in [spec(2, 2), spec(2, 3)] {
            let count = sp.rule_count().unwrap();
            // deterministic stride sample of 100 ids
            for i in 0..100u64 {
                let id = (i * 2_654_435_761) % count;
                let rule = rule_from_id(&sp, id).unwrap();
                assert_eq!(id_from_rule(&sp, &rule), id);
            }
            assert!(rule_from_id(&sp, count).is_err());
        }
    }

    #[test]
    fn apply_basics() {
        let sp = spec(1, 2);
        let blank = Config::blank(&sp);
        let m = MicroRule { read_state: 0, read_color: 0, write_state: 0, write_color: 1, mv: 1 };
        let next = apply_micro_rule(&sp, &blank, &m).unwrap();
        assert_eq!(next.pos, 1);
        assert_eq!(next.color_at(0), 1);
        assert_eq!(next.key(), "s0:p1:L0:1");

        let miss = MicroRule { read_state: 0, read_color: 1, write_state: 0, write_color: 0, mv: 1 };
        assert_eq!(apply_micro_rule(&sp, &blank, &miss), None);
    }

    #[test]
    fn cyclic_wraparound() {
        let sp = MachineSpec::with_tape(1, 2, TapeModel::Cyclic(3)).unwrap();
        let mut c = Config::blank(&sp);
        c.pos = 2;
        let m = MicroRule { read_state: 0, read_color: 0, write_state: 0, write_color: 0, mv: 1 };
        assert_eq!(apply_micro_rule(&sp, &c, &m).unwrap().pos, 0);
    }

    #[test]
    fn successor_counts() {
        let sp = spec(2, 2);
        assert_eq!(successors(&sp, &Config::blank(&sp)).len(), 8);
        let sp = spec(1, 1);
        let succ = successors(&sp, &Config::blank(&sp));
        assert_eq!(succ.len(), 2);
        let positions: Vec<i32> = succ.iter().map(|(_, c)| c.pos).collect();
        assert_eq!(positions, vec![-1, 1]);

        let sp = MachineSpec::with_tape(1, 1, TapeModel::Bounded(3)).unwrap();
        let at_edge = Config::blank(&sp);
        assert!(successors(&sp, &at_edge).len() < 2 * sp.case_count());
        assert_eq!(successors(&sp, &at_edge).len(), 1);
    }

    #[test]
    fn forward_backward_consistency() {
        for sp in [spec(2, 2), MachineSpec::with_tape(1, 2, TapeModel::Cyclic(3)).unwrap()] {
            let mut frontier = vec![Config::blank(&sp)];
            for _ in 0..2 {
                let mut next = Vec::new();
                for c in &frontier {
                    for (m, c2) in successors(&sp, c) {
                        let preds = predecessors(&sp, &c2);
                        assert!(
                            preds.iter().any(|(pm, pc)| *pm == m && pc == c),
                            "missing inverse for {m} from {}",
                            c.key()
                        );
                        next.push(c2);
                    }
                }
                frontier = next;
            }
        }
    }

    #[test]
    fn predecessors_of_blank_by_brute_force() {
        // oracle: enumerate every canonical config with support in [-2, 2]
        // and head in [-2, 2], apply all micro-rules, and invert
        let sp = spec(2, 2);
        let blank = Config::blank(&sp);
        let mut expected = Vec::new();
        for state in 0..sp.s {
            for pos in -2i32..=2 {
                for bits in 0..(1u32 << 5) {
                    let mut c = Config::blank(&sp);
                    for j in 0..5 {
                        let color = ((bits >> j) & 1) as u8;
                        c = c.with_written(j as i32 - 2, color);
                    }
                    c.state = state;
                    c.pos = pos;
                    for m in enumerate_micro_rules(&sp) {
                        if apply_micro_rule(&sp, &c, &m) == Some(blank.clone()) {
                            expected.push((m, c.clone()));
                        }
                    }
                }
            }
        }
        expected.sort_by_key(|(m, c)| (m.index(&sp), c.key()));
        expected.dedup();
        let mut got = predecessors(&sp, &blank);
        got.sort_by_key(|(m, c)| (m.index(&sp), c.key()));
        assert_eq!(got.len(), 8);
        assert_eq!(got, expected);
    }

    #[test]
    fn undirected_neighborhood_of_blank_s1k2() {
        let sp = spec(1, 2);
        let blank = Config::blank(&sp);
        let mut seen: std::collections::BTreeSet<String> = std::collections::BTreeSet::new();
        seen.insert(blank.key());
        for (_, c) in successors(&sp, &blank) {
            seen.insert(c.key());
        }
        for (_, c) in predecessors(&sp, &blank) {
            seen.insert(c.key());
        }
        assert_eq!(seen.len(), 7);
    }

    #[test]
    fn det_evolve_basics() {
        let sp = spec(1, 1);
        // the single-case rule "write 0, move right"
        let rule = rule_from_id(&sp, id_from_rule(&sp, &DetRule {
            outcomes: vec![CaseOutcome { write_state: 0, write_color: 0, move_idx: 1 }],
        }))
        .unwrap();
        let trace = det_evolve(&sp, &rule, &Config::blank(&sp), 5);
        let positions: Vec<i32> = trace.configs.iter().map(|c| c.pos).collect();
        assert_eq!(positions, vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(trace.halted_at, None);

        let t0 = det_evolve(&sp, &rule, &Config::blank(&sp), 0);
        assert_eq!(t0.configs, vec![Config::blank(&sp)]);
    }

    #[test]
    fn det_evolve_boundary_halt() {
        let sp = MachineSpec::with_tape(1, 1, TapeModel::Bounded(3)).unwrap();
        let rule = DetRule {
            outcomes: vec![CaseOutcome { write_state: 0, write_color: 0, move_idx: 1 }],
        };
        let trace = det_evolve(&sp, &rule, &Config::blank(&sp), 10);
        assert_eq!(trace.configs.len(), 3); // positions 0, 1, 2
        assert_eq!(trace.halted_at, Some(2));
    }

    #[test]
    fn k1_rules_never_touch_tape() {
        let sp = spec(3, 1);
        for id in 0..sp.rule_count().unwrap() {
            let rule = rule_from_id(&sp, id).unwrap();
            let trace = det_evolve(&sp, &rule, &Config::blank(&sp), 6);
            for c in &trace.configs {
                assert_eq!(c.tape, Tape::Unbounded { left: 0, cells: vec![] });
            }
        }
    }

    #[test]
    fn degree_invariants() {
        // out-degree and in-degree |moves|*s*k on unbounded and cyclic tapes
        for sp in [
            spec(1, 2),
            spec(2, 2),
            spec(3, 2),
            MachineSpec::with_tape(2, 2, TapeModel::Cyclic(3)).unwrap(),
            MachineSpec::with_moves(2, 1, vec![-1, 0, 1], TapeModel::Unbounded).unwrap(),
        ] {
            let expect = sp.outcome_count();
            let mut frontier = vec![Config::blank(&sp)];
            for _ in 0..2 {
                let mut next = Vec::new();
                for c in &frontier {
                    let succ = successors(&sp, c);
                    assert_eq!(succ.len(), expect);
                    assert_eq!(predecessors(&sp, c).len(), expect);
                    next.extend(succ.into_iter().map(|(_, c)| c));
                }
                frontier = next;
            }
        }
    }

    #[test]
    fn key_parse_round_trip_examples() {
        let sp = spec(2, 3);
        let mut c = Config::blank(&sp);
        c = c.with_written(-1, 2);
        c = c.with_written(1, 1);
        c.state = 1;
        c.pos = -3;
        assert_eq!(c.key(), "s1:p-3:L-1:201");
        assert_eq!(Config::parse(&c.key()).unwrap(), c);
        assert_eq!(Config::parse("s0:p0:L0:").unwrap(), Config::blank(&spec(1, 1)));
        assert!(Config::parse("s0:p0:L1:").is_err());
        assert!(Config::parse("s0:p0:L0:01").is_err());
    }

    #[test]
    fn write_blank_trims() {
        let sp = spec(1, 2);
        let c = Config::blank(&sp).with_written(0, 1).with_written(0, 0);
        assert_eq!(c, Config::blank(&sp));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_config(s: u8, k: u8) -> impl Strategy<Value = Config> {
            (
                0..s,
                -8i32..8,
                proptest::collection::vec(0..k, 0..6),
                -8i32..8,
            )
                .prop_map(move |(state, pos, colors, left)| {
                    let sp = spec(s, k);
                    let mut c = Config::blank(&sp);
                    for (j, color) in colors.iter().enumerate() {
                        c = c.with_written(left + j as i32, *color);
                    }
                    c.state = state;
                    c.pos = pos;
                    c
                })
        }

        proptest! {
            #[test]
            fn key_round_trips(c in arb_config(3, 3)) {
                prop_assert_eq!(Config::parse(&c.key()).unwrap(), c);
            }

            #[test]
            fn successor_edges_invert(c in arb_config(2, 2)) {
                let sp = spec(2, 2);
                for (m, next) in successors(&sp, &c) {
                    prop_assert!(predecessors(&sp, &next)
                        .iter()
                        .any(|(pm, pc)| *pm == m && *pc == c));
                    prop_assert_eq!(apply_micro_rule(&sp, &c, &m), Some(next));
                }
            }
        }
    }
}
