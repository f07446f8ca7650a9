//! Event-driven computation of the leximin and leximax core imputations.
//!
//! A run starts from any core imputation. The always-tight (essential and
//! viable) edges form the starting tight subgraph; its connected components
//! either have a unique imputation (frozen immediately) or consist entirely
//! of essential vertices (fundamental components, placed in the bin). A
//! global clock Ω rises (leximin) or falls (leximax) and components respond:
//! a bin component whose extreme profit meets Ω activates and starts
//! rotating: one side's profits move with Ω at unit rate, the other side's
//! move against it. Rotating components absorb subpar edges the moment
//! continued rotation would drive them under-tight. Everything in between is
//! bookkeeping about which sub-component is finished when a rotation gets
//! blocked.
//!
//! All motion is simulated by exact event times; profits jump by rational
//! deltas and every tightness test is exact.

use crate::classify::{classify, Classification, Label};
use crate::game::{AssignmentGame, Imputation, Side, Vertex};
use crate::profile::Mode;
use crate::rational::Rational;
use crate::solutions::check_core;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

pub type CompId = usize;

#[derive(Debug, Error)]
pub enum MechanismError {
    #[error("starting imputation is not a core imputation")]
    NotACoreImputation,
    #[error("starting imputation has wrong dimensions")]
    DimensionMismatch,
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("internal error: {0}")]
    Internal(String),
}

/// Rotation of an active component. Clockwise raises the U side and lowers
/// the V side at unit rate; anticlockwise is the reverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rotation {
    Clockwise,
    Anticlockwise,
}

impl Rotation {
    fn u_rate(self) -> i8 {
        match self {
            Rotation::Clockwise => 1,
            Rotation::Anticlockwise => -1,
        }
    }

    fn rate(self, side: Side) -> i8 {
        match side {
            Side::U => self.u_rate(),
            Side::V => -self.u_rate(),
        }
    }

    /// The side whose profits move together with Ω.
    fn tracking_side(self, mode: Mode) -> Side {
        let omega_rate: i8 = match mode {
            Mode::Leximin => 1,
            Mode::Leximax => -1,
        };
        if self.rate(Side::U) == omega_rate {
            Side::U
        } else {
            Side::V
        }
    }
}

/// A connected component of the starting tight subgraph. Fixed for the whole
/// run; dynamic structure lives in [`ValidComponent`].
#[derive(Clone, Debug)]
pub struct FundamentalComponent {
    pub id: CompId,
    pub u_vertices: Vec<usize>,
    pub v_vertices: Vec<usize>,
    /// True when every vertex is essential; only such components rotate.
    pub fundamental: bool,
}

impl FundamentalComponent {
    fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.u_vertices
            .iter()
            .map(|&i| Vertex::u(i))
            .chain(self.v_vertices.iter().map(|&j| Vertex::v(j)))
    }

    fn side_vertices(&self, side: Side) -> impl Iterator<Item = Vertex> + '_ {
        let (u, v) = match side {
            Side::U => (&self.u_vertices[..], &[][..]),
            Side::V => (&[][..], &self.v_vertices[..]),
        };
        u.iter()
            .map(|&i| Vertex::u(i))
            .chain(v.iter().map(|&j| Vertex::v(j)))
    }
}

/// A tree of fundamental components joined by absorbed tight subpar edges,
/// rotating as one unit.
#[derive(Clone, Debug)]
pub struct ValidComponent {
    pub root: CompId,
    /// Insertion order, root first.
    pub members: Vec<CompId>,
    /// child -> (parent, absorbed edge id)
    pub parent: BTreeMap<CompId, (CompId, usize)>,
    pub rotation: Rotation,
}

impl ValidComponent {
    fn path_to_root(&self, mut comp: CompId) -> Vec<CompId> {
        let mut path = vec![comp];
        while let Some(&(p, _)) = self.parent.get(&comp) {
            path.push(p);
            comp = p;
        }
        path
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Bin,
    /// Member of the valid component rooted at the given id.
    Active(CompId),
    Frozen,
    FullyRepaired,
}

/// Where the passive endpoint of an absorbed edge was at absorption time.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeCase {
    ToBin,
    ToActive,
    ToFrozen,
    ToFullyRepaired,
}

impl EdgeCase {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeCase::ToBin => "to_bin",
            EdgeCase::ToActive => "to_active",
            EdgeCase::ToFrozen => "to_frozen",
            EdgeCase::ToFullyRepaired => "to_fully_repaired",
        }
    }
}

/// A scheduled state change, tagged with the absolute Ω at which it fires.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Event {
    pub omega_time: Rational,
    pub kind: EventKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EventKind {
    /// Bin component whose extreme profit reached Ω starts rotating.
    Activation { component: CompId },
    /// Active component attained its extreme on both sides.
    FullyRepaired { valid: CompId },
    /// Tight subpar edge about to go under-tight is absorbed.
    LegitimateEdge { edge: usize },
    /// Leximax only: a falling profit reached the zero bound.
    ZeroProfit { vertex: Vertex },
}

impl EventKind {
    fn priority(&self) -> u8 {
        match self {
            EventKind::FullyRepaired { .. } => 0,
            EventKind::ZeroProfit { .. } => 1,
            EventKind::LegitimateEdge { .. } => 2,
            EventKind::Activation { .. } => 3,
        }
    }

    fn tie_key(&self, nu: usize) -> usize {
        match self {
            EventKind::Activation { component } => *component,
            EventKind::FullyRepaired { valid } => *valid,
            EventKind::LegitimateEdge { edge } => *edge,
            EventKind::ZeroProfit { vertex } => match vertex.side {
                Side::U => vertex.index,
                Side::V => nu + vertex.index,
            },
        }
    }
}

/// One applied event, as recorded in the run's trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEvent {
    pub omega: Rational,
    pub kind: TraceKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceKind {
    Activation {
        component: CompId,
    },
    FullyRepaired {
        valid: CompId,
        kept: Vec<CompId>,
    },
    LegitimateEdge {
        edge: (usize, usize),
        case: EdgeCase,
        kept: Vec<CompId>,
    },
    ZeroProfit {
        vertex: Vertex,
        kept: Vec<CompId>,
    },
    Termination,
}

/// Ordered event log of a run; snapshots are per-event imputations.
#[derive(Clone, Debug, Default)]
pub struct Trace {
    pub events: Vec<TraceEvent>,
    pub snapshots: Option<Vec<Imputation>>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    pub snapshots: bool,
}

pub struct MechanismState {
    game: AssignmentGame,
    classification: Classification,
    mode: Mode,
    profits: Imputation,
    omega: Rational,
    comps: Vec<FundamentalComponent>,
    comp_of: Vec<CompId>, // dense vertex id (u0.., then v at nu+j)
    location: Vec<Location>,
    valids: BTreeMap<CompId, ValidComponent>,
    always_tight: Vec<bool>,
    /// Absorbed subpar edges currently constrained to stay tight.
    extra_tight: BTreeSet<usize>,
    worth: Rational,
    trace: Trace,
    events_applied: usize,
    event_cap: usize,
}

impl MechanismState {
    fn dense(&self, q: Vertex) -> usize {
        match q.side {
            Side::U => q.index,
            Side::V => self.game.left_size() + q.index,
        }
    }

    fn profit(&self, q: Vertex) -> &Rational {
        self.profits.get(q)
    }

    fn vertex_rate(&self, q: Vertex) -> i8 {
        match self.location[self.comp_of[self.dense(q)]] {
            Location::Active(root) => self.valids[&root].rotation.rate(q.side),
            _ => 0,
        }
    }

    /// Extreme profit of a component: min in leximin mode, max in leximax.
    fn track_value(&self, comp: CompId) -> Rational {
        let vals = self.comps[comp].vertices().map(|q| self.profit(q).clone());
        match self.mode {
            Mode::Leximin => vals.min(),
            Mode::Leximax => vals.max(),
        }
        .expect("components are nonempty")
    }

    fn comp_has_value_on_side(&self, comp: CompId, side: Side, value: &Rational) -> bool {
        self.comps[comp]
            .side_vertices(side)
            .any(|q| self.profit(q) == value)
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn omega(&self) -> &Rational {
        &self.omega
    }

    pub fn imputation(&self) -> &Imputation {
        &self.profits
    }

    pub fn classification(&self) -> &Classification {
        &self.classification
    }

    pub fn components(&self) -> &[FundamentalComponent] {
        &self.comps
    }

    pub fn location_of(&self, comp: CompId) -> Location {
        self.location[comp]
    }

    pub fn trace(&self) -> &Trace {
        &self.trace
    }

    pub fn is_finished(&self) -> bool {
        self.location
            .iter()
            .all(|l| !matches!(l, Location::Bin | Location::Active(_)))
    }

    fn edge_slack(&self, edge: usize) -> Rational {
        let e = &self.game.edges()[edge];
        &(&self.profits.u[e.u] + &self.profits.v[e.v]) - &e.weight
    }

    /// Tight subpar edges outside the tight set whose slack is strictly
    /// falling under the current rotations, i.e. the ones that must be absorbed
    /// right now. Each is returned with its rotating endpoint's component and
    /// the component on the other side.
    pub fn find_legitimate_edges(&self) -> Vec<(usize, CompId, CompId)> {
        let mut out = Vec::new();
        for (k, e) in self.game.edges().iter().enumerate() {
            if self.always_tight[k] || self.extra_tight.contains(&k) {
                continue;
            }
            if !self.edge_slack(k).is_zero() {
                continue;
            }
            let (qu, qv) = (Vertex::u(e.u), Vertex::v(e.v));
            let rate = self.vertex_rate(qu) + self.vertex_rate(qv);
            if rate >= 0 {
                continue;
            }
            let cu = self.comp_of[self.dense(qu)];
            let cv = self.comp_of[self.dense(qv)];
            if self.vertex_rate(qu) < 0 {
                out.push((k, cu, cv));
            } else {
                out.push((k, cv, cu));
            }
        }
        out
    }

    /// Earliest pending event and its Ω-distance from now. Simultaneous
    /// events resolve by kind (fully-repaired, zero-profit, edge, activation)
    /// and then by smallest id.
    pub fn next_event(&self) -> Result<(Rational, Event), MechanismError> {
        if self.is_finished() {
            return Err(MechanismError::Internal(
                "next_event called on a finished run".into(),
            ));
        }
        let nu = self.game.left_size();
        let mut best: Option<(Rational, u8, usize, EventKind)> = None;
        let mut offer = |delta: Rational, kind: EventKind| {
            debug_assert!(!delta.is_negative());
            let prio = kind.priority();
            let key = kind.tie_key(nu);
            let better = match &best {
                None => true,
                Some((d, p, k, _)) => (&delta, prio, key) < (d, *p, *k),
            };
            if better {
                best = Some((delta, prio, key, kind));
            }
        };

        for comp in &self.comps {
            if self.location[comp.id] != Location::Bin {
                continue;
            }
            let t = self.track_value(comp.id);
            let delta = match self.mode {
                Mode::Leximin => &t - &self.omega,
                Mode::Leximax => &self.omega - &t,
            };
            if delta.is_negative() {
                return Err(MechanismError::InvariantViolation(format!(
                    "bin component {} passed Ω",
                    comp.id
                )));
            }
            offer(delta, EventKind::Activation { component: comp.id });
        }

        for (root, valid) in &self.valids {
            let tracking = valid.rotation.tracking_side(self.mode);
            let closing = tracking.opposite();
            for &m in &valid.members {
                for q in self.comps[m].side_vertices(closing) {
                    let gap = match self.mode {
                        Mode::Leximin => self.profit(q) - &self.omega,
                        Mode::Leximax => &self.omega - self.profit(q),
                    };
                    if gap.is_negative() {
                        return Err(MechanismError::InvariantViolation(format!(
                            "vertex {} overtook Ω",
                            q
                        )));
                    }
                    offer(gap.halve(), EventKind::FullyRepaired { valid: *root });
                }
                // falling profits stop at the zero bound (leximax runs only;
                // in leximin mode min-on-both-sides always happens first)
                for q in self.comps[m].vertices() {
                    if valid.rotation.rate(q.side) < 0 {
                        offer(self.profit(q).clone(), EventKind::ZeroProfit { vertex: q });
                    }
                }
            }
        }

        for (k, e) in self.game.edges().iter().enumerate() {
            if self.always_tight[k] || self.extra_tight.contains(&k) {
                continue;
            }
            let slack = self.edge_slack(k);
            if slack.is_negative() {
                return Err(MechanismError::InvariantViolation(format!(
                    "edge (u{}, v{}) is under-tight",
                    e.u, e.v
                )));
            }
            let rate = self.vertex_rate(Vertex::u(e.u)) + self.vertex_rate(Vertex::v(e.v));
            if rate < 0 {
                let delta = match rate {
                    -1 => slack,
                    -2 => slack.halve(),
                    _ => unreachable!("edge rates are in -2..=2"),
                };
                offer(delta, EventKind::LegitimateEdge { edge: k });
            }
        }

        let (delta, _, _, kind) = best.ok_or_else(|| {
            MechanismError::Internal("no pending event on an unfinished run".into())
        })?;
        let omega_time = match self.mode {
            Mode::Leximin => &self.omega + &delta,
            Mode::Leximax => &self.omega - &delta,
        };
        Ok((delta, Event { omega_time, kind }))
    }

    fn advance_to(&mut self, omega_time: &Rational) -> Result<(), MechanismError> {
        let delta = match self.mode {
            Mode::Leximin => omega_time - &self.omega,
            Mode::Leximax => &self.omega - omega_time,
        };
        if delta.is_negative() {
            return Err(MechanismError::Internal("event lies in the past".into()));
        }
        if delta.is_zero() {
            self.omega = omega_time.clone();
            return Ok(());
        }
        let mut moves: Vec<(Vertex, i8)> = Vec::new();
        for valid in self.valids.values() {
            for &m in &valid.members {
                for q in self.comps[m].vertices() {
                    moves.push((q, valid.rotation.rate(q.side)));
                }
            }
        }
        for (q, rate) in moves {
            let p = self.profits.get_mut(q);
            *p = if rate > 0 { &*p + &delta } else { &*p - &delta };
        }
        self.omega = omega_time.clone();
        Ok(())
    }

    /// Applies an event produced by [`Self::next_event`] on this exact state.
    pub fn apply_event(&mut self, event: Event) -> Result<(), MechanismError> {
        self.events_applied += 1;
        if self.events_applied > self.event_cap {
            return Err(MechanismError::Internal(format!(
                "event count exceeded the safety cap {}",
                self.event_cap
            )));
        }
        self.advance_to(&event.omega_time)?;
        let kind = match event.kind {
            EventKind::Activation { component } => self.apply_activation(component)?,
            EventKind::FullyRepaired { valid } => self.apply_fully_repaired(valid)?,
            EventKind::LegitimateEdge { edge } => self.apply_legitimate_edge(edge)?,
            EventKind::ZeroProfit { vertex } => self.apply_zero_profit(vertex)?,
        };
        self.trace.events.push(TraceEvent {
            omega: self.omega.clone(),
            kind,
        });
        if let Some(snaps) = &mut self.trace.snapshots {
            snaps.push(self.profits.clone());
        }
        self.validate()
    }

    fn apply_activation(&mut self, comp: CompId) -> Result<TraceKind, MechanismError> {
        if self.location[comp] != Location::Bin {
            return Err(MechanismError::Internal(format!(
                "activation of component {} outside the bin",
                comp
            )));
        }
        let t = self.track_value(comp);
        if t != self.omega {
            return Err(MechanismError::Internal(format!(
                "component {} activated away from Ω",
                comp
            )));
        }
        let on_u = self.comp_has_value_on_side(comp, Side::U, &t);
        // the side holding the extreme must move with Ω
        let rotation = match (self.mode, on_u) {
            (Mode::Leximin, true) => Rotation::Clockwise,
            (Mode::Leximin, false) => Rotation::Anticlockwise,
            (Mode::Leximax, true) => Rotation::Anticlockwise,
            (Mode::Leximax, false) => Rotation::Clockwise,
        };
        self.location[comp] = Location::Active(comp);
        self.valids.insert(
            comp,
            ValidComponent {
                root: comp,
                members: vec![comp],
                parent: BTreeMap::new(),
                rotation,
            },
        );
        Ok(TraceKind::Activation { component: comp })
    }

    fn fully_repaired_selection(
        &self,
        valid: &ValidComponent,
    ) -> Result<BTreeSet<CompId>, MechanismError> {
        min_sub_selection(valid, &self.comps, self.mode, &self.omega, &|q| {
            self.profit(q).clone()
        })
    }

    /// Dismantles the valid component rooted at `root`: `kept` members move
    /// to `target` keeping their connecting edges tight, the rest return to
    /// the bin and their connecting edges leave the tight set.
    fn dissolve(&mut self, root: CompId, kept: &BTreeSet<CompId>, target: Location) {
        let valid = self.valids.remove(&root).expect("valid component exists");
        for &m in &valid.members {
            if kept.contains(&m) {
                if let Some((p, _)) = valid.parent.get(&m) {
                    debug_assert!(kept.contains(p), "kept members form a subtree");
                }
                self.location[m] = target;
            } else {
                self.location[m] = Location::Bin;
                if let Some((_, eid)) = valid.parent.get(&m) {
                    self.extra_tight.remove(eid);
                }
            }
        }
    }

    fn apply_fully_repaired(&mut self, root: CompId) -> Result<TraceKind, MechanismError> {
        let valid = self
            .valids
            .get(&root)
            .ok_or_else(|| {
                MechanismError::Internal(format!("no active component rooted at {}", root))
            })?
            .clone();
        let kept = self.fully_repaired_selection(&valid)?;
        self.dissolve(root, &kept, Location::FullyRepaired);
        Ok(TraceKind::FullyRepaired {
            valid: root,
            kept: kept.into_iter().collect(),
        })
    }

    fn apply_legitimate_edge(&mut self, edge: usize) -> Result<TraceKind, MechanismError> {
        let e = self.game.edges()[edge].clone();
        if !self.edge_slack(edge).is_zero() {
            return Err(MechanismError::Internal(
                "legitimate-edge event on a non-tight edge".into(),
            ));
        }
        let (qu, qv) = (Vertex::u(e.u), Vertex::v(e.v));
        let (ru, rv) = (self.vertex_rate(qu), self.vertex_rate(qv));
        let cu = self.comp_of[self.dense(qu)];
        let cv = self.comp_of[self.dense(qv)];
        if ru + rv >= 0 {
            return Err(MechanismError::Internal(
                "legitimate-edge event without falling slack".into(),
            ));
        }

        if ru < 0 && rv < 0 {
            // two active components rotating toward each other: the merged
            // component is finished along both root-to-endpoint paths
            let root_u = match self.location[cu] {
                Location::Active(r) => r,
                _ => unreachable!("rotating vertex lies in an active component"),
            };
            let root_v = match self.location[cv] {
                Location::Active(r) => r,
                _ => unreachable!(),
            };
            if root_u == root_v {
                return Err(MechanismError::InvariantViolation(
                    "an edge inside one valid component cannot lose slack".into(),
                ));
            }
            let kept_u: BTreeSet<CompId> =
                self.valids[&root_u].path_to_root(cu).into_iter().collect();
            let kept_v: BTreeSet<CompId> =
                self.valids[&root_v].path_to_root(cv).into_iter().collect();
            self.extra_tight.insert(edge);
            self.dissolve(root_u, &kept_u, Location::FullyRepaired);
            self.dissolve(root_v, &kept_v, Location::FullyRepaired);
            let mut kept: Vec<CompId> = kept_u.union(&kept_v).copied().collect();
            kept.sort_unstable();
            return Ok(TraceKind::LegitimateEdge {
                edge: (e.u, e.v),
                case: EdgeCase::ToActive,
                kept,
            });
        }

        // exactly one endpoint rotates downward
        let (active_comp, other_comp) = if ru < 0 { (cu, cv) } else { (cv, cu) };
        let root = match self.location[active_comp] {
            Location::Active(r) => r,
            _ => unreachable!("rotating vertex lies in an active component"),
        };
        match self.location[other_comp] {
            Location::Active(_) => Err(MechanismError::Internal(
                "still endpoint cannot be active".into(),
            )),
            Location::Bin => {
                // absorb as a child and keep rotating
                self.extra_tight.insert(edge);
                let valid = self.valids.get_mut(&root).expect("active root");
                valid.members.push(other_comp);
                valid.parent.insert(other_comp, (active_comp, edge));
                self.location[other_comp] = Location::Active(root);
                Ok(TraceKind::LegitimateEdge {
                    edge: (e.u, e.v),
                    case: EdgeCase::ToBin,
                    kept: Vec::new(),
                })
            }
            loc @ (Location::Frozen | Location::FullyRepaired) => {
                let kept: BTreeSet<CompId> = self.valids[&root]
                    .path_to_root(active_comp)
                    .into_iter()
                    .collect();
                self.extra_tight.insert(edge);
                self.dissolve(root, &kept, loc);
                let case = if loc == Location::Frozen {
                    EdgeCase::ToFrozen
                } else {
                    EdgeCase::ToFullyRepaired
                };
                Ok(TraceKind::LegitimateEdge {
                    edge: (e.u, e.v),
                    case,
                    kept: kept.into_iter().collect(),
                })
            }
        }
    }

    fn apply_zero_profit(&mut self, vertex: Vertex) -> Result<TraceKind, MechanismError> {
        debug_assert_eq!(
            self.mode,
            Mode::Leximax,
            "zero-profit events cannot fire before full repair in leximin mode"
        );
        if !self.profit(vertex).is_zero() || self.vertex_rate(vertex) >= 0 {
            return Err(MechanismError::Internal(
                "zero-profit event on a vertex not at the bound".into(),
            ));
        }
        let comp = self.comp_of[self.dense(vertex)];
        let root = match self.location[comp] {
            Location::Active(r) => r,
            _ => unreachable!("rotating vertex lies in an active component"),
        };
        let kept: BTreeSet<CompId> = self.valids[&root].path_to_root(comp).into_iter().collect();
        self.dissolve(root, &kept, Location::Frozen);
        Ok(TraceKind::ZeroProfit {
            vertex,
            kept: kept.into_iter().collect(),
        })
    }

    /// Full consistency check, run after every event.
    fn validate(&self) -> Result<(), MechanismError> {
        let fail = |msg: String| Err(MechanismError::InvariantViolation(msg));
        for (k, e) in self.game.edges().iter().enumerate() {
            let slack = self.edge_slack(k);
            if slack.is_negative() {
                return fail(format!("edge (u{}, v{}) under-tight", e.u, e.v));
            }
            if (self.always_tight[k] || self.extra_tight.contains(&k)) && !slack.is_zero() {
                return fail(format!("tight-set edge (u{}, v{}) not tight", e.u, e.v));
            }
        }
        for (i, x) in self.profits.u.iter().enumerate() {
            if x.is_negative() {
                return fail(format!("negative profit at u{}", i + 1));
            }
        }
        for (j, x) in self.profits.v.iter().enumerate() {
            if x.is_negative() {
                return fail(format!("negative profit at v{}", j + 1));
            }
        }
        if self.profits.total() != self.worth {
            return fail("total profit drifted from the worth".into());
        }
        for comp in &self.comps {
            match self.location[comp.id] {
                Location::Bin | Location::Active(_) => {
                    let t = self.track_value(comp.id);
                    let ok = match self.mode {
                        Mode::Leximin => t >= self.omega,
                        Mode::Leximax => t <= self.omega,
                    };
                    if !ok {
                        return fail(format!("component {} violates the Ω bound", comp.id));
                    }
                }
                _ => {}
            }
        }
        for (root, valid) in &self.valids {
            if self.track_value(*root) != self.omega {
                return fail(format!("active root {} detached from Ω", root));
            }
            for &m in &valid.members {
                if self.location[m] != Location::Active(*root) {
                    return fail(format!("member {} of valid {} mislabeled", m, root));
                }
            }
        }
        Ok(())
    }

    /// Applies every zero-delta event pending at the current Ω.
    fn drain_cascade(&mut self) -> Result<(), MechanismError> {
        while !self.is_finished() {
            let (delta, event) = self.next_event()?;
            if !delta.is_zero() {
                break;
            }
            self.apply_event(event)?;
        }
        Ok(())
    }

    fn finish(&mut self) {
        self.trace.events.push(TraceEvent {
            omega: self.omega.clone(),
            kind: TraceKind::Termination,
        });
        if let Some(snaps) = &mut self.trace.snapshots {
            snaps.push(self.profits.clone());
        }
    }
}

/// Smallest finished sub-component of a valid component that attained its
/// extreme on both sides: the root, every member holding the extreme at Ω on
/// the closing side (those are the ones actually blocked), and all members
/// on tree paths between them. Members whose Ω vertex sits only on the
/// tracking side are not blocked; they return to the bin and resume on
/// their own.
pub(crate) fn min_sub_selection(
    valid: &ValidComponent,
    comps: &[FundamentalComponent],
    mode: Mode,
    omega: &Rational,
    profit: &dyn Fn(Vertex) -> Rational,
) -> Result<BTreeSet<CompId>, MechanismError> {
    let tracking = valid.rotation.tracking_side(mode);
    let closing = tracking.opposite();
    let has_on_side =
        |comp: CompId, side: Side| comps[comp].side_vertices(side).any(|q| &profit(q) == omega);
    if !has_on_side(valid.root, tracking) {
        return Err(MechanismError::InvariantViolation(format!(
            "root {} lost the Ω vertex on its tracking side",
            valid.root
        )));
    }
    let mut targets = Vec::new();
    for &m in &valid.members {
        if has_on_side(m, closing) {
            targets.push(m);
        }
    }
    if targets.is_empty() {
        return Err(MechanismError::Internal(
            "fully-repaired event without a closing-side extreme".into(),
        ));
    }
    let mut kept = BTreeSet::new();
    kept.insert(valid.root);
    for t in targets {
        kept.extend(valid.path_to_root(t));
    }
    Ok(kept)
}

/// Builds the starting state: tight set = essential and viable edges,
/// unique-imputation components frozen, fundamental components binned,
/// Ω at the extreme essential profit, and the opening cascade of zero-time
/// activations already applied.
pub fn initialize(
    game: &AssignmentGame,
    classification: &Classification,
    initial: Imputation,
    mode: Mode,
    options: RunOptions,
) -> Result<MechanismState, MechanismError> {
    if !initial.matches_dimensions(game) {
        return Err(MechanismError::DimensionMismatch);
    }
    let report = check_core(game, &initial).map_err(|_| MechanismError::DimensionMismatch)?;
    if !report.is_core {
        return Err(MechanismError::NotACoreImputation);
    }

    let nu = game.left_size();
    let n = nu + game.right_size();
    let always_tight: Vec<bool> = classification
        .edge_labels
        .iter()
        .map(|l| *l != Label::Subpar)
        .collect();

    // connected components of the starting tight subgraph
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    for (k, e) in game.edges().iter().enumerate() {
        if always_tight[k] {
            let (a, b) = (find(&mut parent, e.u), find(&mut parent, nu + e.v));
            if a != b {
                parent[a] = b;
            }
        }
    }
    let mut essential = vec![false; n];
    for (i, l) in classification.u_labels.iter().enumerate() {
        essential[i] = *l == Label::Essential;
    }
    for (j, l) in classification.v_labels.iter().enumerate() {
        essential[nu + j] = *l == Label::Essential;
    }

    let mut comp_ids: BTreeMap<usize, CompId> = BTreeMap::new();
    let mut comps: Vec<FundamentalComponent> = Vec::new();
    let mut comp_of = vec![usize::MAX; n];
    for d in 0..n {
        let r = find(&mut parent, d);
        let id = *comp_ids.entry(r).or_insert_with(|| {
            comps.push(FundamentalComponent {
                id: comps.len(),
                u_vertices: Vec::new(),
                v_vertices: Vec::new(),
                fundamental: true,
            });
            comps.len() - 1
        });
        comp_of[d] = id;
        if d < nu {
            comps[id].u_vertices.push(d);
        } else {
            comps[id].v_vertices.push(d - nu);
        }
        comps[id].fundamental &= essential[d];
    }

    let location: Vec<Location> = comps
        .iter()
        .map(|c| {
            if c.fundamental {
                Location::Bin
            } else {
                Location::Frozen
            }
        })
        .collect();

    let essential_profits = essential
        .iter()
        .enumerate()
        .filter(|(_, is_ess)| **is_ess)
        .map(|(d, _)| {
            if d < nu {
                initial.u[d].clone()
            } else {
                initial.v[d - nu].clone()
            }
        });
    let omega = match mode {
        Mode::Leximin => essential_profits.min(),
        Mode::Leximax => essential_profits.max(),
    }
    .unwrap_or_else(Rational::zero);

    let worth = classification.worth.clone();
    let event_cap = 8 * (n + 2) * (n + 2) + 64;
    let mut state = MechanismState {
        game: game.clone(),
        classification: classification.clone(),
        mode,
        profits: initial,
        omega,
        comps,
        comp_of,
        location,
        valids: BTreeMap::new(),
        always_tight,
        extra_tight: BTreeSet::new(),
        worth,
        trace: Trace {
            events: Vec::new(),
            snapshots: options.snapshots.then(Vec::new),
        },
        events_applied: 0,
        event_cap,
    };
    state.validate()?;
    state.drain_cascade()?;
    Ok(state)
}

/// Runs the whole mechanism. Returns the optimal imputation and the trace.
pub fn run_with_options(
    game: &AssignmentGame,
    mode: Mode,
    initial: Option<Imputation>,
    options: RunOptions,
) -> Result<(Imputation, Trace), MechanismError> {
    let classification = classify(game);
    let initial = initial.unwrap_or_else(|| crate::solutions::initial_core_imputation(game));
    let mut state = initialize(game, &classification, initial, mode, options)?;
    while !state.is_finished() {
        let (_, event) = state.next_event()?;
        state.apply_event(event)?;
    }
    state.finish();
    let MechanismState { profits, trace, .. } = state;
    Ok((profits, trace))
}

/// Leximin or leximax core imputation from the solver's own starting dual.
pub fn run(game: &AssignmentGame, mode: Mode) -> Result<(Imputation, Trace), MechanismError> {
    run_with_options(game, mode, None, RunOptions::default())
}

/// Same, but from a caller-supplied core imputation.
pub fn run_from(
    game: &AssignmentGame,
    mode: Mode,
    initial: Imputation,
) -> Result<(Imputation, Trace), MechanismError> {
    run_with_options(game, mode, Some(initial), RunOptions::default())
}
