//! Located actions, justified sequences, views, paths, shuffles, and
//! completion of paths into designs.
//!
//! A located action is daimon, a positive probe `x|a<ys>`, or a negative
//! answer `a^x(ys)`. Sequences carry explicit justifier pointers, computed
//! once and revalidated by every constructor: an action is justified by the
//! unique earlier opposite-polarity action holding its address among its
//! arguments, and is initial when no action anywhere in the sequence does.
//! Paths are the sequences that additionally satisfy both visibility
//! conditions. Sequences are identified up to renaming of bound variables
//! (variables that occur as arguments); [`AjSequence::canonical`] picks the
//! representative used for set membership.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::term::{v_index, Branch, Design, Name, Polarity, Signature, Var};

// ===== located actions =====

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LocatedAction {
    Daimon,
    /// `x|a<ys>`
    Pos { address: Var, name: Name, args: Vec<Var> },
    /// `a^x(ys)`
    Neg { address: Var, name: Name, args: Vec<Var> },
}

impl LocatedAction {
    pub fn daimon() -> Self {
        LocatedAction::Daimon
    }

    pub fn pos<'a>(address: &str, name: &str, args: impl IntoIterator<Item = &'a str>) -> Self {
        LocatedAction::Pos {
            address: Var::new(address),
            name: Name::new(name),
            args: args.into_iter().map(Var::new).collect(),
        }
    }

    pub fn neg<'a>(address: &str, name: &str, args: impl IntoIterator<Item = &'a str>) -> Self {
        LocatedAction::Neg {
            address: Var::new(address),
            name: Name::new(name),
            args: args.into_iter().map(Var::new).collect(),
        }
    }

    pub fn polarity(&self) -> Polarity {
        match self {
            LocatedAction::Daimon | LocatedAction::Pos { .. } => Polarity::Pos,
            LocatedAction::Neg { .. } => Polarity::Neg,
        }
    }

    pub fn is_proper(&self) -> bool {
        !matches!(self, LocatedAction::Daimon)
    }

    pub fn address(&self) -> Option<&Var> {
        match self {
            LocatedAction::Daimon => None,
            LocatedAction::Pos { address, .. } | LocatedAction::Neg { address, .. } => Some(address),
        }
    }

    pub fn name(&self) -> Option<&Name> {
        match self {
            LocatedAction::Daimon => None,
            LocatedAction::Pos { name, .. } | LocatedAction::Neg { name, .. } => Some(name),
        }
    }

    pub fn args(&self) -> &[Var] {
        match self {
            LocatedAction::Daimon => &[],
            LocatedAction::Pos { args, .. } | LocatedAction::Neg { args, .. } => args,
        }
    }

    /// Same address, name, and arguments with the polarity flipped.
    pub fn dual(&self) -> Self {
        match self {
            LocatedAction::Daimon => LocatedAction::Daimon,
            LocatedAction::Pos { address, name, args } => LocatedAction::Neg {
                address: address.clone(),
                name: name.clone(),
                args: args.clone(),
            },
            LocatedAction::Neg { address, name, args } => LocatedAction::Pos {
                address: address.clone(),
                name: name.clone(),
                args: args.clone(),
            },
        }
    }

    fn rename(&self, map: &BTreeMap<Var, Var>) -> Self {
        let fix = |v: &Var| map.get(v).cloned().unwrap_or_else(|| v.clone());
        match self {
            LocatedAction::Daimon => LocatedAction::Daimon,
            LocatedAction::Pos { address, name, args } => LocatedAction::Pos {
                address: fix(address),
                name: name.clone(),
                args: args.iter().map(fix).collect(),
            },
            LocatedAction::Neg { address, name, args } => LocatedAction::Neg {
                address: fix(address),
                name: name.clone(),
                args: args.iter().map(fix).collect(),
            },
        }
    }

    fn shape_ok(&self) -> Result<(), String> {
        let (address, args) = match self {
            LocatedAction::Daimon => return Ok(()),
            LocatedAction::Pos { address, args, .. } | LocatedAction::Neg { address, args, .. } => {
                (address, args)
            }
        };
        let distinct: BTreeSet<_> = args.iter().collect();
        if distinct.len() != args.len() {
            return Err("arguments must be pairwise distinct".into());
        }
        if args.contains(address) {
            return Err("address may not occur among the arguments".into());
        }
        Ok(())
    }
}

impl fmt::Display for LocatedAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocatedAction::Daimon => f.write_str("daimon"),
            LocatedAction::Pos { address, name, args } => {
                let list: Vec<String> = args.iter().map(|v| v.to_string()).collect();
                write!(f, "{address}|{name}<{}>", list.join(","))
            }
            LocatedAction::Neg { address, name, args } => {
                let list: Vec<String> = args.iter().map(|v| v.to_string()).collect();
                write!(f, "{name}^{address}({})", list.join(","))
            }
        }
    }
}

// ===== justified sequences =====

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AjViolation {
    IllFormedAction,
    Alternation,
    Linearity,
    DaimonNotLast,
    Justification,
    UnknownName,
    ArityMismatch,
}

impl fmt::Display for AjViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AjViolation::IllFormedAction => "ill-formed action",
            AjViolation::Alternation => "alternation",
            AjViolation::Linearity => "linearity",
            AjViolation::DaimonNotLast => "daimon before the end",
            AjViolation::Justification => "justification",
            AjViolation::UnknownName => "unknown name",
            AjViolation::ArityMismatch => "arity mismatch",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("action {index}: {violation} violation")]
pub struct AjError {
    pub index: usize,
    pub violation: AjViolation,
    pub detail: Option<String>,
}

/// An alternating, linear, justified sequence of located actions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AjSequence {
    actions: Vec<LocatedAction>,
    justifiers: Vec<Option<usize>>,
}

/// Computes justifier pointers, or reports the first violation.
fn justifiers_of(actions: &[LocatedAction]) -> Result<Vec<Option<usize>>, AjError> {
    let mut out = Vec::with_capacity(actions.len());
    for (i, act) in actions.iter().enumerate() {
        let Some(address) = act.address() else {
            out.push(None);
            continue;
        };
        let holders: Vec<usize> = actions
            .iter()
            .enumerate()
            .filter(|(_, other)| other.args().contains(address))
            .map(|(j, _)| j)
            .collect();
        match holders.as_slice() {
            [] => out.push(None),
            [j] if *j < i && actions[*j].polarity() != act.polarity() => out.push(Some(*j)),
            _ => {
                return Err(AjError {
                    index: i,
                    violation: AjViolation::Justification,
                    detail: Some(format!(
                        "address {address} needs a unique earlier opposite-polarity holder"
                    )),
                })
            }
        }
    }
    Ok(out)
}

fn structural_checks(actions: &[LocatedAction]) -> Result<(), AjError> {
    let mut addresses = BTreeSet::new();
    for (i, act) in actions.iter().enumerate() {
        if let Err(why) = act.shape_ok() {
            return Err(AjError {
                index: i,
                violation: AjViolation::IllFormedAction,
                detail: Some(why),
            });
        }
        if i > 0 && act.polarity() == actions[i - 1].polarity() {
            return Err(AjError { index: i, violation: AjViolation::Alternation, detail: None });
        }
        if !act.is_proper() && i + 1 != actions.len() {
            return Err(AjError { index: i, violation: AjViolation::DaimonNotLast, detail: None });
        }
        if let Some(address) = act.address() {
            if !addresses.insert(address.clone()) {
                return Err(AjError {
                    index: i,
                    violation: AjViolation::Linearity,
                    detail: Some(format!("{address} is the address of two actions")),
                });
            }
        }
    }
    Ok(())
}

/// Validates a raw action list against the signature and assembles the sequence.
pub fn check_aj(actions: Vec<LocatedAction>, sig: &Signature) -> Result<AjSequence, AjError> {
    for (i, act) in actions.iter().enumerate() {
        if let Some(name) = act.name() {
            match sig.arity(name) {
                None => {
                    return Err(AjError {
                        index: i,
                        violation: AjViolation::UnknownName,
                        detail: Some(name.to_string()),
                    })
                }
                Some(k) if k != act.args().len() => {
                    return Err(AjError {
                        index: i,
                        violation: AjViolation::ArityMismatch,
                        detail: Some(format!("{name} expects {k} arguments")),
                    })
                }
                _ => {}
            }
        }
    }
    AjSequence::from_actions(actions)
}

impl AjSequence {
    pub fn empty() -> Self {
        AjSequence { actions: vec![], justifiers: vec![] }
    }

    /// Validates alternation, linearity, daimon placement, and justification.
    pub fn from_actions(actions: Vec<LocatedAction>) -> Result<Self, AjError> {
        structural_checks(&actions)?;
        let justifiers = justifiers_of(&actions)?;
        Ok(AjSequence { actions, justifiers })
    }

    fn from_valid(actions: Vec<LocatedAction>) -> Self {
        Self::from_actions(actions).expect("sequence derived from a valid one")
    }

    pub fn actions(&self) -> &[LocatedAction] {
        &self.actions
    }

    pub fn justifier(&self, i: usize) -> Option<usize> {
        self.justifiers[i]
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    /// Polarity of the sequence: that of its first action; the empty
    /// sequence is negative.
    pub fn polarity(&self) -> Polarity {
        self.actions.first().map_or(Polarity::Neg, |a| a.polarity())
    }

    pub fn is_daimon_ended(&self) -> bool {
        matches!(self.actions.last(), Some(LocatedAction::Daimon))
    }

    /// Prefixes of valid sequences are valid with the same justifiers.
    pub fn prefix(&self, n: usize) -> AjSequence {
        AjSequence {
            actions: self.actions[..n].to_vec(),
            justifiers: self.justifiers[..n].to_vec(),
        }
    }

    /// Bound variables: those occurring as arguments of some action.
    pub fn bound_vars(&self) -> BTreeSet<Var> {
        self.actions.iter().flat_map(|a| a.args().iter().cloned()).collect()
    }

    pub fn max_reserved_index(&self) -> Option<usize> {
        self.actions
            .iter()
            .flat_map(|a| a.address().into_iter().chain(a.args().iter()))
            .filter_map(|v| v_index(v.as_str()))
            .max()
    }

    /// Renames bound variables to `v0`, `v1`, ... in order of first
    /// occurrence. In valid sequences a bound variable always occurs as an
    /// argument before it occurs as an address, so a single pass suffices.
    pub fn canonical(&self) -> AjSequence {
        let mut map: BTreeMap<Var, Var> = BTreeMap::new();
        let mut counter = 0;
        let mut out = Vec::with_capacity(self.actions.len());
        for act in &self.actions {
            for arg in act.args() {
                if !map.contains_key(arg) {
                    map.insert(arg.clone(), Var::fresh(counter));
                    counter += 1;
                }
            }
            out.push(act.rename(&map));
        }
        AjSequence { actions: out, justifiers: self.justifiers.clone() }
    }

    /// Applies a variable renaming to every address and argument.
    pub fn rename(&self, map: &BTreeMap<Var, Var>) -> AjSequence {
        AjSequence {
            actions: self.actions.iter().map(|a| a.rename(map)).collect(),
            justifiers: self.justifiers.clone(),
        }
    }
}

impl fmt::Display for AjSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list: Vec<String> = self.actions.iter().map(|a| a.to_string()).collect();
        write!(f, "[{}]", list.join(", "))
    }
}

/// Equality modulo renaming of bound variables.
pub fn alpha_eq_seq(a: &AjSequence, b: &AjSequence) -> bool {
    a.canonical().actions == b.canonical().actions
}

// ===== dual, views, visibility =====

/// Flips every action's polarity; a trailing daimon is dropped, and one is
/// appended when the flipped sequence would otherwise wait for an answer
/// (it ends negatively, or is empty). An involution everywhere except on
/// sequences ending with a proper negative action.
pub fn dual_seq(s: &AjSequence) -> AjSequence {
    let actions: Vec<LocatedAction> = if s.is_daimon_ended() {
        s.actions[..s.len() - 1].iter().map(|a| a.dual()).collect()
    } else {
        let mut v: Vec<LocatedAction> = s.actions.iter().map(|a| a.dual()).collect();
        if v.last().map_or(true, |a| a.polarity() == Polarity::Neg) {
            v.push(LocatedAction::Daimon);
        }
        v
    };
    AjSequence::from_valid(actions)
}

/// Indices of the view of `s[0..upto]`: positive actions extend the view,
/// negative actions jump to their justifier (initial ones restart it).
fn view_indices(s: &AjSequence, upto: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut k = upto;
    // Collect from the right, then reverse.
    while k > 0 {
        let i = k - 1;
        out.push(i);
        match &s.actions[i] {
            LocatedAction::Daimon | LocatedAction::Pos { .. } => k = i,
            LocatedAction::Neg { .. } => match s.justifiers[i] {
                None => break,
                Some(j) => k = j + 1,
            },
        }
    }
    out.reverse();
    out
}

/// Indices of the anti-view of `s[0..upto]`: the view of the dual, mapped
/// back. Positive actions jump, negative actions extend.
fn anti_view_indices(s: &AjSequence, upto: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut k = upto;
    while k > 0 {
        let i = k - 1;
        out.push(i);
        match &s.actions[i] {
            LocatedAction::Neg { .. } => k = i,
            LocatedAction::Daimon => k = i,
            LocatedAction::Pos { .. } => match s.justifiers[i] {
                None => break,
                Some(j) => k = j + 1,
            },
        }
    }
    out.reverse();
    out
}

fn subsequence(s: &AjSequence, indices: &[usize]) -> AjSequence {
    AjSequence::from_valid(indices.iter().map(|&i| s.actions[i].clone()).collect())
}

/// The view of the whole sequence.
pub fn view(s: &AjSequence) -> AjSequence {
    subsequence(s, &view_indices(s, s.len()))
}

/// The anti-view `~view(~s)`.
pub fn anti_view(s: &AjSequence) -> AjSequence {
    if s.is_daimon_ended() {
        // Literal reading: the dual drops the daimon, the view is taken,
        // and the outer dual re-appends one.
        return dual_seq(&view(&dual_seq(s)));
    }
    subsequence(s, &anti_view_indices(s, s.len()))
}

/// The bi-view: every proper action jumps to its justifier, daimon extends.
pub fn biview(s: &AjSequence) -> AjSequence {
    let mut out = Vec::new();
    let mut k = s.len();
    while k > 0 {
        let i = k - 1;
        out.push(i);
        match &s.actions[i] {
            LocatedAction::Daimon => k = i,
            _ => match s.justifiers[i] {
                None => break,
                Some(j) => k = j + 1,
            },
        }
    }
    out.reverse();
    subsequence(s, &out)
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PathError {
    #[error("visibility violation at action {index} ({side})")]
    Visibility { index: usize, side: &'static str },
    #[error("not a justified sequence: {0}")]
    Sequence(#[from] AjError),
    #[error("design is not usable here: {0}")]
    NotStandard(String),
    #[error("sequence is not a path of the design: action {index} has no matching position")]
    NoPosition { index: usize },
    #[error("polarity mismatch: {0}")]
    PolarityMismatch(String),
    #[error("sequence too long for exhaustive restriction ({0} actions)")]
    TooLong(usize),
}

/// Checks both visibility conditions.
pub fn path_violation(s: &AjSequence) -> Option<(usize, &'static str)> {
    for (i, act) in s.actions.iter().enumerate() {
        let Some(j) = s.justifiers[i] else { continue };
        match act.polarity() {
            Polarity::Pos => {
                if !view_indices(s, i).contains(&j) {
                    return Some((i, "P"));
                }
            }
            Polarity::Neg => {
                if !anti_view_indices(s, i).contains(&j) {
                    return Some((i, "O"));
                }
            }
        }
    }
    None
}

/// A justified sequence satisfying P- and O-visibility.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path(AjSequence);

impl Path {
    pub fn try_new(s: AjSequence) -> Result<Self, PathError> {
        match path_violation(&s) {
            None => Ok(Path(s)),
            Some((index, side)) => Err(PathError::Visibility { index, side }),
        }
    }

    pub fn empty() -> Self {
        Path(AjSequence::empty())
    }

    pub fn seq(&self) -> &AjSequence {
        &self.0
    }

    pub fn into_seq(self) -> AjSequence {
        self.0
    }

    pub fn canonical(&self) -> Path {
        Path(self.0.canonical())
    }

    /// Duality preserves both visibilities.
    pub fn dual(&self) -> Path {
        Path(dual_seq(&self.0))
    }

    /// Positive-ended: ends with a proper positive action or daimon.
    pub fn is_positive_ended(&self) -> bool {
        self.0.actions.last().is_some_and(|a| a.polarity() == Polarity::Pos)
    }
}

impl std::ops::Deref for Path {
    type Target = AjSequence;
    fn deref(&self) -> &AjSequence {
        &self.0
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

// ===== views of designs =====

#[derive(Debug, Clone)]
struct ViewNode {
    action: LocatedAction,
    children: Vec<usize>,
}

/// The located-action forest of a multi-design: one positive root per
/// positive member (or a daimon leaf), one negative node per branch of each
/// binding, with fresh argument addresses for application positions.
#[derive(Debug, Clone)]
pub struct DesignViews {
    nodes: Vec<ViewNode>,
    roots: Vec<usize>,
    polarity: Polarity,
    has_binding: bool,
    /// Root-to-node chains, for exact membership of tree-named views.
    chains: BTreeSet<Vec<LocatedAction>>,
}

impl DesignViews {
    /// `positive` is the positive member if any; `bindings` pair an address
    /// with a negative design. Members must be cut- and identity-free.
    pub fn build(
        positive: Option<&Design>,
        bindings: &[(Var, Design)],
    ) -> Result<Self, PathError> {
        let mut max_idx: Option<usize> = positive.and_then(|p| p.max_reserved_index());
        for (x, n) in bindings {
            max_idx = max_idx.max(n.max_reserved_index()).max(v_index(x.as_str()));
        }
        let mut b = Builder {
            nodes: Vec::new(),
            fresh: max_idx.map_or(0, |i| i + 1),
        };
        let mut roots = Vec::new();
        if let Some(p) = positive {
            if let Some(r) = b.build_pos(p)? {
                roots.push(r);
            }
        }
        for (x, n) in bindings {
            let group = b.build_neg(n, x)?;
            roots.extend(group);
        }
        let mut views = DesignViews {
            nodes: b.nodes,
            roots,
            polarity: if positive.is_some() { Polarity::Pos } else { Polarity::Neg },
            has_binding: !bindings.is_empty(),
            chains: BTreeSet::new(),
        };
        views.index_chains();
        Ok(views)
    }

    pub fn of_positive(p: &Design) -> Result<Self, PathError> {
        Self::build(Some(p), &[])
    }

    /// Views of a negative design at the atomic address `x0`.
    pub fn of_negative(n: &Design) -> Result<Self, PathError> {
        Self::build(None, &[(Var::x0(), n.clone())])
    }

    fn index_chains(&mut self) {
        let mut chains = BTreeSet::new();
        let mut stack: Vec<(usize, Vec<LocatedAction>)> = self
            .roots
            .iter()
            .map(|&r| (r, vec![self.nodes[r].action.clone()]))
            .collect();
        while let Some((n, chain)) = stack.pop() {
            for &c in &self.nodes[n].children {
                let mut next = chain.clone();
                next.push(self.nodes[c].action.clone());
                stack.push((c, next));
            }
            chains.insert(chain);
        }
        self.chains = chains;
    }

    pub fn polarity(&self) -> Polarity {
        self.polarity
    }

    /// All views, in tree naming. The empty view is included exactly when a
    /// binding is present.
    pub fn all_views(&self) -> BTreeSet<Vec<LocatedAction>> {
        let mut out = self.chains.clone();
        if self.has_binding {
            out.insert(vec![]);
        }
        out
    }

    /// Membership of a sequence among the views, modulo renaming of bound
    /// variables. Free addresses must match literally.
    pub fn is_view(&self, q: &[LocatedAction]) -> bool {
        if q.is_empty() {
            return self.has_binding;
        }
        let bound: BTreeSet<Var> = q.iter().flat_map(|a| a.args().iter().cloned()).collect();
        self.roots
            .iter()
            .any(|&r| self.match_at(r, q, 0, &bound, &BTreeMap::new()))
    }

    fn match_at(
        &self,
        node: usize,
        q: &[LocatedAction],
        i: usize,
        bound: &BTreeSet<Var>,
        map: &BTreeMap<Var, Var>,
    ) -> bool {
        let Some(map2) = unify_action(&q[i], &self.nodes[node].action, bound, map) else {
            return false;
        };
        if i + 1 == q.len() {
            return true;
        }
        self.nodes[node]
            .children
            .iter()
            .any(|&c| self.match_at(c, q, i + 1, bound, &map2))
    }
}

/// Matches a query action against a tree action, extending the injective
/// renaming of the query's bound variables. Free query variables must equal
/// the tree's literally.
fn unify_action(
    q: &LocatedAction,
    t: &LocatedAction,
    bound: &BTreeSet<Var>,
    map: &BTreeMap<Var, Var>,
) -> Option<BTreeMap<Var, Var>> {
    if q.polarity() != t.polarity() || q.is_proper() != t.is_proper() {
        return None;
    }
    if !q.is_proper() {
        return Some(map.clone());
    }
    if q.name() != t.name() || q.args().len() != t.args().len() {
        return None;
    }
    let (qa, ta) = (q.address().unwrap(), t.address().unwrap());
    let expect = map.get(qa).unwrap_or(qa);
    if expect != ta {
        return None;
    }
    let mut map2 = map.clone();
    for (x, y) in q.args().iter().zip(t.args()) {
        match map2.get(x) {
            Some(prev) if prev != y => return None,
            Some(_) => {}
            None => {
                if bound.contains(x) {
                    if map2.values().any(|v| v == y) {
                        return None;
                    }
                    map2.insert(x.clone(), y.clone());
                } else if x != y {
                    return None;
                }
            }
        }
    }
    Some(map2)
}

struct Builder {
    nodes: Vec<ViewNode>,
    fresh: usize,
}

impl Builder {
    fn push(&mut self, action: LocatedAction) -> usize {
        self.nodes.push(ViewNode { action, children: vec![] });
        self.nodes.len() - 1
    }

    /// Returns the root node of a positive design, or None for `Omega`.
    fn build_pos(&mut self, p: &Design) -> Result<Option<usize>, PathError> {
        match p {
            Design::Omega => Ok(None),
            Design::Daimon => Ok(Some(self.push(LocatedAction::Daimon))),
            Design::Var(x) => Err(PathError::NotStandard(format!("identity {x}"))),
            Design::Sum(_) => Err(PathError::NotStandard("negative where positive expected".into())),
            Design::App { head, name, args } => {
                let Design::Var(address) = &**head else {
                    return Err(PathError::NotStandard("cut in design".into()));
                };
                let fresh_args: Vec<Var> = args
                    .iter()
                    .map(|_| {
                        let v = Var::fresh(self.fresh);
                        self.fresh += 1;
                        v
                    })
                    .collect();
                let node = self.push(LocatedAction::Pos {
                    address: address.clone(),
                    name: name.clone(),
                    args: fresh_args.clone(),
                });
                for (arg, addr) in args.iter().zip(&fresh_args) {
                    let group = self.build_neg(arg, addr)?;
                    self.nodes[node].children.extend(group);
                }
                Ok(Some(node))
            }
        }
    }

    /// Returns one node per branch of a negative design located at `address`.
    fn build_neg(&mut self, n: &Design, address: &Var) -> Result<Vec<usize>, PathError> {
        let Design::Sum(branches) = n else {
            return Err(PathError::NotStandard(format!(
                "negative position must be a sum, got {n:?}"
            )));
        };
        let mut out = Vec::new();
        for (name, Branch { params, body }) in branches {
            let node = self.push(LocatedAction::Neg {
                address: address.clone(),
                name: name.clone(),
                args: params.clone(),
            });
            if let Some(child) = self.build_pos(body)? {
                self.nodes[node].children.push(child);
            }
            out.push(node);
        }
        Ok(out)
    }
}

/// Is `p` a path of the multi-design whose views are given? Checks the
/// polarity convention and the view of every prefix (the empty prefix is
/// included for negative targets).
pub fn is_path_of(p: &AjSequence, views: &DesignViews) -> bool {
    if path_violation(p).is_some() {
        return false;
    }
    if p.is_empty() {
        return views.polarity() == Polarity::Neg && views.is_view(&[]);
    }
    if p.polarity() != views.polarity() {
        return false;
    }
    if views.polarity() == Polarity::Neg && !views.is_view(&[]) {
        return false;
    }
    (1..=p.len()).all(|k| {
        let v = subsequence(p, &view_indices(p, k));
        views.is_view(v.actions())
    })
}

/// All paths of the target, in tree naming canonicalized, up to `max_len`
/// actions. The empty path appears exactly for negative targets.
pub fn paths_of(views: &DesignViews, max_len: usize) -> BTreeSet<Path> {
    let mut out = BTreeSet::new();
    let mut frontier: Vec<Vec<LocatedAction>> = Vec::new();
    if views.polarity() == Polarity::Neg {
        out.insert(Path::empty());
    }
    // Seeds: single actions that are themselves views.
    for chain in &views.chains {
        if chain.len() == 1 && chain[0].polarity() == views.polarity() {
            frontier.push(chain.clone());
        }
    }
    let all_actions: Vec<LocatedAction> =
        views.nodes.iter().map(|n| n.action.clone()).collect();
    while let Some(actions) = frontier.pop() {
        let Ok(s) = AjSequence::from_actions(actions.clone()) else { continue };
        let Ok(p) = Path::try_new(s.clone()) else { continue };
        out.insert(p.canonical());
        if actions.len() >= max_len {
            continue;
        }
        for next in &all_actions {
            let mut cand = actions.clone();
            cand.push(next.clone());
            let Ok(seq) = AjSequence::from_actions(cand.clone()) else { continue };
            if path_violation(&seq).is_some() {
                continue;
            }
            let v = subsequence(&seq, &view_indices(&seq, seq.len()));
            if views.chains.contains(v.actions()) {
                frontier.push(cand);
            }
        }
    }
    out
}

// ===== restriction =====

/// The subsequence of `s` whose actions occur (literally) in `within`.
pub fn restrict_to_sequence(s: &AjSequence, within: &AjSequence) -> Vec<LocatedAction> {
    s.actions
        .iter()
        .filter(|a| within.actions.contains(a))
        .cloned()
        .collect()
}

/// The longest subsequence of `p` that is a path of the given views.
/// Exhaustive over subsequences; guarded against long inputs.
pub fn restrict_to_views(p: &AjSequence, views: &DesignViews) -> Result<AjSequence, PathError> {
    let n = p.len();
    if n > 20 {
        return Err(PathError::TooLong(n));
    }
    let mut masks: Vec<u32> = (0..(1u32 << n)).collect();
    masks.sort_by_key(|m| (std::cmp::Reverse(m.count_ones()), *m));
    for mask in masks {
        let picked: Vec<LocatedAction> = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| p.actions[i].clone())
            .collect();
        let Ok(seq) = AjSequence::from_actions(picked) else { continue };
        if is_path_of(&seq, views) {
            return Ok(seq);
        }
    }
    Ok(AjSequence::empty())
}

// ===== shuffles =====

/// The shuffle `p ⧢ q`: interleavings agreeing with both inputs, sharing
/// actions that unify. `None` means undefined (mixed polarities, or positive
/// paths whose first actions differ).
pub fn shuffle(p: &Path, q: &Path) -> Option<BTreeSet<Path>> {
    if p.polarity() != q.polarity() {
        return None;
    }
    // Rename q's bound variables clear of p's, so sharing is explicit
    // unification rather than accidental name equality.
    let start = p
        .max_reserved_index()
        .max(q.max_reserved_index())
        .map_or(0, |i| i + 1);
    let mut ren = BTreeMap::new();
    for (k, v) in q.bound_vars().into_iter().enumerate() {
        ren.insert(v, Var::fresh(start + k));
    }
    let q = q.rename(&ren);
    let q_bound = q.bound_vars();

    let pa = p.actions();
    let qa = q.actions();
    let mut results = BTreeSet::new();
    if p.polarity() == Polarity::Pos {
        // Positive shuffles must share their first action.
        let (Some(first_p), Some(first_q)) = (pa.first(), qa.first()) else {
            return None;
        };
        let map = unify_action(first_q, first_p, &q_bound, &BTreeMap::new())?;
        let mut acc = vec![first_p.clone()];
        merge(pa, qa, 1, 1, &map, &q_bound, &mut acc, &mut results);
    } else {
        let mut acc = Vec::new();
        merge(pa, qa, 0, 0, &BTreeMap::new(), &q_bound, &mut acc, &mut results);
    }
    let paths = results
        .into_iter()
        .filter_map(|actions| {
            let seq = AjSequence::from_actions(actions).ok()?;
            Path::try_new(seq).ok()
        })
        .map(|p| p.canonical())
        .collect();
    Some(paths)
}

#[allow(clippy::too_many_arguments)]
fn merge(
    p: &[LocatedAction],
    q: &[LocatedAction],
    i: usize,
    j: usize,
    map: &BTreeMap<Var, Var>,
    q_bound: &BTreeSet<Var>,
    acc: &mut Vec<LocatedAction>,
    out: &mut BTreeSet<Vec<LocatedAction>>,
) {
    // Local pruning: alternation and daimon placement fail early.
    if let (Some(last), Some(prev)) = (acc.last(), acc.len().checked_sub(2).map(|k| &acc[k])) {
        if last.polarity() == prev.polarity() {
            return;
        }
    }
    if acc.len() >= 2 && !acc[acc.len() - 2].is_proper() {
        return;
    }
    if i == p.len() && j == q.len() {
        out.insert(acc.clone());
        return;
    }
    if i < p.len() {
        acc.push(p[i].clone());
        merge(p, q, i + 1, j, map, q_bound, acc, out);
        acc.pop();
    }
    if j < q.len() {
        acc.push(q[j].rename(map));
        merge(p, q, i, j + 1, map, q_bound, acc, out);
        acc.pop();
    }
    if i < p.len() && j < q.len() {
        if let Some(map2) = unify_action(&q[j], &p[i], q_bound, map) {
            acc.push(p[i].clone());
            merge(p, q, i + 1, j + 1, &map2, q_bound, acc, out);
            acc.pop();
        }
    }
}

/// Union of the defined pairwise shuffles of two sets of paths.
pub fn shuffle_sets(d: &BTreeSet<Path>, e: &BTreeSet<Path>) -> BTreeSet<Path> {
    let mut out = BTreeSet::new();
    for p in d {
        for q in e {
            if let Some(rs) = shuffle(p, q) {
                out.extend(rs);
            }
        }
    }
    out
}

// ===== completion of sequences into designs =====

/// Builds the maximal design having the positive-ended alternating sequence
/// as a path: the visited branch of every sum is kept and every other
/// signature name answers daimon.
pub fn positive_design_of_sequence(s: &AjSequence, sig: &Signature) -> Result<Design, PathError> {
    if s.is_empty() || s.polarity() != Polarity::Pos {
        return Err(PathError::PolarityMismatch("positive sequence required".into()));
    }
    let mut fresh = s.max_reserved_index().map_or(0, |i| i + 1);
    build_pos_design(s, 0, sig, &mut fresh)
}

/// Builds the bindings of the maximal anti-design having the negative
/// sequence as a path: one binding per initial negative action.
pub fn bindings_of_negative_sequence(
    s: &AjSequence,
    sig: &Signature,
) -> Result<BTreeMap<Var, Design>, PathError> {
    if s.polarity() != Polarity::Neg && !s.is_empty() {
        return Err(PathError::PolarityMismatch("negative sequence required".into()));
    }
    let mut fresh = s.max_reserved_index().map_or(0, |i| i + 1);
    let mut out = BTreeMap::new();
    for (i, act) in s.actions().iter().enumerate() {
        let LocatedAction::Neg { address, .. } = act else { continue };
        if s.justifier(i).is_some() {
            continue;
        }
        let body = body_after(s, i, sig, &mut fresh)?;
        let design = filled_sum(act, body, sig, &mut fresh);
        out.insert(address.clone(), design);
    }
    Ok(out)
}

/// The body of the branch opened at the negative action `i`: the next action
/// if any, daimon if the sequence ends here.
fn body_after(s: &AjSequence, i: usize, sig: &Signature, fresh: &mut usize) -> Result<Design, PathError> {
    if i + 1 < s.len() {
        build_pos_design(s, i + 1, sig, fresh)
    } else {
        Ok(Design::Daimon)
    }
}

/// A total sum: the given action's branch has the given body, every other
/// signature name answers daimon.
fn filled_sum(action: &LocatedAction, body: Design, sig: &Signature, fresh: &mut usize) -> Design {
    let mut branches = BTreeMap::new();
    for (name, arity) in sig.names() {
        let params: Vec<Var> = (0..arity)
            .map(|_| {
                let v = Var::fresh(*fresh);
                *fresh += 1;
                v
            })
            .collect();
        branches.insert(name.clone(), Branch::new(params, Design::Daimon));
    }
    if let (Some(name), args) = (action.name(), action.args()) {
        branches.insert(name.clone(), Branch::new(args.to_vec(), body));
    }
    Design::Sum(branches)
}

fn build_pos_design(
    s: &AjSequence,
    i: usize,
    sig: &Signature,
    fresh: &mut usize,
) -> Result<Design, PathError> {
    match &s.actions()[i] {
        LocatedAction::Daimon => Ok(Design::Daimon),
        LocatedAction::Neg { .. } => Err(PathError::PolarityMismatch(
            "positive action expected".into(),
        )),
        LocatedAction::Pos { address, name, args } => {
            let mut built_args = Vec::with_capacity(args.len());
            for y in args {
                // Linearity: at most one action is addressed at y.
                let visited = s
                    .actions()
                    .iter()
                    .enumerate()
                    .skip(i + 1)
                    .find(|(_, a)| a.address() == Some(y) && a.polarity() == Polarity::Neg);
                let sum = match visited {
                    None => filled_sum(&LocatedAction::Daimon, Design::Daimon, sig, fresh),
                    Some((l, act)) => {
                        let body = body_after(s, l, sig, fresh)?;
                        filled_sum(&act.clone(), body, sig, fresh)
                    }
                };
                built_args.push(sum);
            }
            Ok(Design::App {
                head: Box::new(Design::Var(address.clone())),
                name: name.clone(),
                args: built_args,
            })
        }
    }
}

/// Replaces with daimon every positive subdesign of `t` that diverges or
/// whose first action is never visited by `p`. The result is the maximal
/// design (for the observational order) with `p` as a path.
pub fn path_completion(p: &AjSequence, t: &Design, views: &DesignViews) -> Result<Design, PathError> {
    // Match p's actions onto tree nodes to learn which positions are visited.
    let bound = p.bound_vars();
    let mut matched: BTreeSet<usize> = BTreeSet::new();
    let mut map: BTreeMap<Var, Var> = BTreeMap::new();
    for (idx, act) in p.actions().iter().enumerate() {
        if !act.is_proper() {
            continue;
        }
        let found = views.nodes.iter().enumerate().find_map(|(n, node)| {
            unify_action(act, &node.action, &bound, &map).map(|m| (n, m))
        });
        match found {
            None => return Err(PathError::NoPosition { index: idx }),
            Some((n, m)) => {
                matched.insert(n);
                map = m;
            }
        }
    }
    rebuild(t, views, &matched, RebuildSite::Root)
}

enum RebuildSite {
    Root,
    Node(usize),
}

fn rebuild(
    t: &Design,
    views: &DesignViews,
    matched: &BTreeSet<usize>,
    site: RebuildSite,
) -> Result<Design, PathError> {
    match t {
        Design::Var(x) => Err(PathError::NotStandard(format!("identity {x}"))),
        Design::Omega => Ok(Design::Daimon),
        Design::Daimon => Ok(Design::Daimon),
        Design::App { head, name, args } => {
            let node = match site {
                RebuildSite::Node(n) => n,
                RebuildSite::Root => {
                    let Some(&r) = views
                        .roots
                        .iter()
                        .find(|&&r| matches!(views.nodes[r].action, LocatedAction::Pos { .. }))
                    else {
                        return Ok(Design::Daimon);
                    };
                    r
                }
            };
            if !matched.contains(&node) {
                return Ok(Design::Daimon);
            }
            // Children of the positive node are grouped per argument by the
            // fresh address the builder assigned, in argument order.
            let LocatedAction::Pos { args: addresses, .. } = &views.nodes[node].action else {
                return Err(PathError::NotStandard("tree shape".into()));
            };
            let mut rebuilt = Vec::with_capacity(args.len());
            for (arg, address) in args.iter().zip(addresses) {
                rebuilt.push(rebuild_neg(arg, views, matched, node, address)?);
            }
            Ok(Design::App { head: head.clone(), name: name.clone(), args: rebuilt })
        }
        Design::Sum(_) => {
            // Negative root: rebuild against the root group (binding case).
            let Some((address, _)) = views
                .roots
                .first()
                .and_then(|&r| views.nodes[r].action.address().map(|a| (a.clone(), r)))
            else {
                return Err(PathError::NotStandard("no negative root".into()));
            };
            rebuild_neg_group(t, views, matched, &views.roots.clone(), &address)
        }
    }
}

fn rebuild_neg(
    n: &Design,
    views: &DesignViews,
    matched: &BTreeSet<usize>,
    parent: usize,
    address: &Var,
) -> Result<Design, PathError> {
    let group: Vec<usize> = views.nodes[parent]
        .children
        .iter()
        .copied()
        .filter(|&c| views.nodes[c].action.address() == Some(address))
        .collect();
    rebuild_neg_group(n, views, matched, &group, address)
}

fn rebuild_neg_group(
    n: &Design,
    views: &DesignViews,
    matched: &BTreeSet<usize>,
    group: &[usize],
    _address: &Var,
) -> Result<Design, PathError> {
    let Design::Sum(branches) = n else {
        return Err(PathError::NotStandard("sum expected".into()));
    };
    let mut out = BTreeMap::new();
    for (name, br) in branches {
        let node = group
            .iter()
            .copied()
            .find(|&c| views.nodes[c].action.name() == Some(name));
        let body = match node {
            None => Design::Daimon,
            Some(c) => match views.nodes[c].children.first() {
                None => Design::Daimon,
                Some(&child) => rebuild(&br.body, views, matched, RebuildSite::Node(child))?,
            },
        };
        out.insert(name.clone(), Branch::new(br.params.clone(), body));
    }
    Ok(Design::Sum(out))
}
