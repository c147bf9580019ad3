//! Core term calculus: signatures, designs, alpha-handling, classification,
//! and the two approximation orders with intersection.
//!
//! Designs are finite, polarized trees. Positive designs are `Daimon`,
//! `Omega`, or applications `head|name<args>` whose head and arguments are
//! negative; negative designs are variables or branch sums. Sums are stored
//! sparsely: a missing branch means divergence, and constructors drop
//! explicit `Omega` bodies so structural equality matches that convention.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// Reserved fresh-variable prefix: `v0`, `v1`, ... Engine-generated names
/// always allocate above every index already present in the inputs.
pub fn v_index(s: &str) -> Option<usize> {
    let rest = s.strip_prefix('v')?;
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

/// A variable name. Ordered so that var-keyed maps iterate deterministically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(String);

impl Var {
    pub fn new(s: impl Into<String>) -> Self {
        Var(s.into())
    }

    /// The distinguished address used by atomic designs.
    pub fn x0() -> Self {
        Var("x0".into())
    }

    /// The n-th engine-generated variable.
    pub fn fresh(n: usize) -> Self {
        Var(format!("v{n}"))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Self {
        Var::new(s)
    }
}

/// An action name from the signature.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Name(String);

impl Name {
    pub fn new(s: impl Into<String>) -> Self {
        Name(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name::new(s)
    }
}

/// Finite map from action names to arities.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    arities: BTreeMap<Name, usize>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, usize)>) -> Self {
        let mut sig = Signature::new();
        for (n, k) in pairs {
            sig.insert(Name::new(n), k);
        }
        sig
    }

    pub fn insert(&mut self, name: Name, arity: usize) {
        self.arities.insert(name, arity);
    }

    pub fn arity(&self, name: &Name) -> Option<usize> {
        self.arities.get(name).copied()
    }

    pub fn contains(&self, name: &Name) -> bool {
        self.arities.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = (&Name, usize)> {
        self.arities.iter().map(|(n, k)| (n, *k))
    }

    pub fn is_empty(&self) -> bool {
        self.arities.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    Pos,
    Neg,
}

impl Polarity {
    pub fn flip(self) -> Self {
        match self {
            Polarity::Pos => Polarity::Neg,
            Polarity::Neg => Polarity::Pos,
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Polarity::Pos => f.write_str("pos"),
            Polarity::Neg => f.write_str("neg"),
        }
    }
}

/// One branch of a sum: `name(params) => body`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Branch {
    pub params: Vec<Var>,
    pub body: Design,
}

impl Branch {
    pub fn new(params: Vec<Var>, body: Design) -> Self {
        Branch { params, body }
    }
}

/// A c-design. Sparse sums: absent branches diverge.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Design {
    Daimon,
    Omega,
    /// `head|name<args>`; positive. Head and arguments are negative.
    App {
        head: Box<Design>,
        name: Name,
        args: Vec<Design>,
    },
    /// Negative place.
    Var(Var),
    /// Branch sum; negative. Only non-`Omega` bodies are stored.
    Sum(BTreeMap<Name, Branch>),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TermError {
    #[error("malformed design at {at}: {why}")]
    Malformed { at: String, why: String },
    #[error("polarity mismatch: {0}")]
    PolarityMismatch(String),
}

impl Design {
    pub fn var(v: impl Into<String>) -> Self {
        Design::Var(Var::new(v))
    }

    pub fn app(head: Design, name: impl Into<String>, args: Vec<Design>) -> Self {
        Design::App {
            head: Box::new(head),
            name: Name::new(name),
            args,
        }
    }

    /// Builds a sum, dropping `Omega` bodies so the representation stays sparse.
    pub fn sum(branches: impl IntoIterator<Item = (Name, Branch)>) -> Self {
        let map = branches
            .into_iter()
            .filter(|(_, br)| br.body != Design::Omega)
            .collect();
        Design::Sum(map)
    }

    /// Single-branch sum `name(params) => body`.
    pub fn sum1(name: impl Into<String>, params: Vec<&str>, body: Design) -> Self {
        Design::sum([(
            Name::new(name),
            Branch::new(params.into_iter().map(Var::new).collect(), body),
        )])
    }

    /// The empty sum: the negative design all of whose branches diverge.
    pub fn empty_sum() -> Self {
        Design::Sum(BTreeMap::new())
    }

    pub fn polarity(&self) -> Polarity {
        match self {
            Design::Daimon | Design::Omega | Design::App { .. } => Polarity::Pos,
            Design::Var(_) | Design::Sum(_) => Polarity::Neg,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.polarity() == Polarity::Pos
    }

    pub fn is_negative(&self) -> bool {
        self.polarity() == Polarity::Neg
    }

    /// Checks arities, branch binding lists, and polarity of every position.
    pub fn validate(&self, sig: &Signature) -> Result<(), TermError> {
        self.validate_at(sig, "root")
    }

    fn validate_at(&self, sig: &Signature, at: &str) -> Result<(), TermError> {
        match self {
            Design::Daimon | Design::Omega | Design::Var(_) => Ok(()),
            Design::App { head, name, args } => {
                let arity = sig.arity(name).ok_or_else(|| TermError::Malformed {
                    at: at.to_string(),
                    why: format!("unknown name {name}"),
                })?;
                if args.len() != arity {
                    return Err(TermError::Malformed {
                        at: at.to_string(),
                        why: format!("{name} expects {arity} arguments, got {}", args.len()),
                    });
                }
                if head.is_positive() {
                    return Err(TermError::Malformed {
                        at: format!("{at}.head"),
                        why: "application head must be negative".into(),
                    });
                }
                head.validate_at(sig, &format!("{at}.head"))?;
                for (i, arg) in args.iter().enumerate() {
                    if arg.is_positive() {
                        return Err(TermError::Malformed {
                            at: format!("{at}.args[{i}]"),
                            why: "application argument must be negative".into(),
                        });
                    }
                    arg.validate_at(sig, &format!("{at}.args[{i}]"))?;
                }
                Ok(())
            }
            Design::Sum(branches) => {
                for (name, br) in branches {
                    let at_br = format!("{at}.branch[{name}]");
                    let arity = sig.arity(name).ok_or_else(|| TermError::Malformed {
                        at: at_br.clone(),
                        why: format!("unknown name {name}"),
                    })?;
                    if br.params.len() != arity {
                        return Err(TermError::Malformed {
                            at: at_br.clone(),
                            why: format!("{name} binds {arity} variables, got {}", br.params.len()),
                        });
                    }
                    let distinct: BTreeSet<_> = br.params.iter().collect();
                    if distinct.len() != br.params.len() {
                        return Err(TermError::Malformed {
                            at: at_br.clone(),
                            why: "branch binders must be pairwise distinct".into(),
                        });
                    }
                    if br.body == Design::Omega {
                        return Err(TermError::Malformed {
                            at: at_br.clone(),
                            why: "omega branch must be left out of the sparse sum".into(),
                        });
                    }
                    if br.body.is_negative() {
                        return Err(TermError::Malformed {
                            at: at_br.clone(),
                            why: "branch body must be positive".into(),
                        });
                    }
                    br.body.validate_at(sig, &at_br)?;
                }
                Ok(())
            }
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut BTreeSet::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut BTreeSet<Var>, out: &mut BTreeSet<Var>) {
        match self {
            Design::Daimon | Design::Omega => {}
            Design::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            Design::App { head, args, .. } => {
                head.collect_free(bound, out);
                for a in args {
                    a.collect_free(bound, out);
                }
            }
            Design::Sum(branches) => {
                for br in branches.values() {
                    let fresh: Vec<_> = br
                        .params
                        .iter()
                        .filter(|p| bound.insert((*p).clone()))
                        .cloned()
                        .collect();
                    br.body.collect_free(bound, out);
                    for p in fresh {
                        bound.remove(&p);
                    }
                }
            }
        }
    }

    /// Every variable occurring anywhere, free or bound. Used for freshness scans.
    pub fn all_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Design::Daimon | Design::Omega => {}
            Design::Var(x) => {
                out.insert(x.clone());
            }
            Design::App { head, args, .. } => {
                head.all_vars(out);
                for a in args {
                    a.all_vars(out);
                }
            }
            Design::Sum(branches) => {
                for br in branches.values() {
                    for p in &br.params {
                        out.insert(p.clone());
                    }
                    br.body.all_vars(out);
                }
            }
        }
    }

    /// Largest reserved index (`v<n>`) occurring anywhere in the design.
    pub fn max_reserved_index(&self) -> Option<usize> {
        let mut vars = BTreeSet::new();
        self.all_vars(&mut vars);
        vars.iter().filter_map(|v| v_index(v.as_str())).max()
    }

    /// Renames bound variables to `v0`, `v1`, ... in pre-order (head before
    /// arguments, sum branches in name order, binders numbered on entry).
    /// Free variables are untouched. Idempotent on its own output.
    pub fn canonicalize(&self) -> Design {
        self.canonicalize_from(0)
    }

    /// Same renaming, starting the counter at `start`.
    pub fn canonicalize_from(&self, start: usize) -> Design {
        let mut counter = start;
        self.canon(&BTreeMap::new(), &mut counter)
    }

    fn canon(&self, env: &BTreeMap<Var, Var>, counter: &mut usize) -> Design {
        match self {
            Design::Daimon => Design::Daimon,
            Design::Omega => Design::Omega,
            Design::Var(x) => Design::Var(env.get(x).cloned().unwrap_or_else(|| x.clone())),
            Design::App { head, name, args } => Design::App {
                head: Box::new(head.canon(env, counter)),
                name: name.clone(),
                args: args.iter().map(|a| a.canon(env, counter)).collect(),
            },
            Design::Sum(branches) => {
                let mut out = BTreeMap::new();
                for (name, br) in branches {
                    let mut env2 = env.clone();
                    let mut params = Vec::with_capacity(br.params.len());
                    for p in &br.params {
                        let fresh = Var::fresh(*counter);
                        *counter += 1;
                        env2.insert(p.clone(), fresh.clone());
                        params.push(fresh);
                    }
                    out.insert(name.clone(), Branch::new(params, br.body.canon(&env2, counter)));
                }
                Design::Sum(out)
            }
        }
    }
}

/// Equality modulo renaming of bound variables.
pub fn alpha_eq(a: &Design, b: &Design) -> bool {
    a.canonicalize() == b.canonicalize()
}

impl fmt::Display for Design {
    /// Concrete syntax: `daimon`, `omega`, `x`, `head|name<args>`, and
    /// `{a(x, y) => P, b() => Q}`. Sum-headed applications (unreduced cuts)
    /// render with the sum braced in head position.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Design::Daimon => f.write_str("daimon"),
            Design::Omega => f.write_str("omega"),
            Design::Var(x) => write!(f, "{x}"),
            Design::App { head, name, args } => {
                write!(f, "{head}|{name}<")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(">")
            }
            Design::Sum(branches) => {
                f.write_str("{")?;
                for (i, (name, br)) in branches.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{name}(")?;
                    for (j, p) in br.params.iter().enumerate() {
                        if j > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{p}")?;
                    }
                    write!(f, ") => {}", br.body)?;
                }
                f.write_str("}")
            }
        }
    }
}

// ===== substitution =====

/// Capture-avoiding simultaneous substitution of negative designs for free
/// variables. The result is canonicalized.
pub fn substitute(t: &Design, subs: &BTreeMap<Var, Design>) -> Result<Design, TermError> {
    for (x, d) in subs {
        if d.is_positive() {
            return Err(TermError::PolarityMismatch(format!(
                "substituting a positive design for {x}"
            )));
        }
    }
    // Rename t's binders above every reserved index in sight, so no binder
    // can capture a free variable of any replacement.
    let mut max_idx = t.max_reserved_index().map_or(0, |i| i + 1);
    for d in subs.values() {
        max_idx = max_idx.max(d.max_reserved_index().map_or(0, |i| i + 1));
    }
    let renamed = t.canonicalize_from(max_idx);
    Ok(naive_subst(&renamed, subs).canonicalize())
}

fn naive_subst(t: &Design, subs: &BTreeMap<Var, Design>) -> Design {
    match t {
        Design::Daimon => Design::Daimon,
        Design::Omega => Design::Omega,
        Design::Var(x) => subs.get(x).cloned().unwrap_or_else(|| t.clone()),
        Design::App { head, name, args } => Design::App {
            head: Box::new(naive_subst(head, subs)),
            name: name.clone(),
            args: args.iter().map(|a| naive_subst(a, subs)).collect(),
        },
        Design::Sum(branches) => Design::Sum(
            branches
                .iter()
                .map(|(n, br)| {
                    // Binders are disjoint from the substitution keys after the
                    // canonicalize_from pass, so no masking is needed.
                    (n.clone(), Branch::new(br.params.clone(), naive_subst(&br.body, subs)))
                })
                .collect(),
        ),
    }
}

/// Substitute a single binding.
pub fn substitute1(t: &Design, x: &Var, n: &Design) -> Result<Design, TermError> {
    let mut m = BTreeMap::new();
    m.insert(x.clone(), n.clone());
    substitute(t, &m)
}

// ===== classification =====

/// Which standardness ingredients hold, with a witness path per failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationReport {
    pub cut_free: bool,
    pub identity_free: bool,
    pub total: bool,
    pub linear: bool,
    pub atomic: bool,
    pub standard: bool,
    /// predicate name -> subterm path of the first violation
    pub witnesses: BTreeMap<String, String>,
}

pub fn classify(t: &Design) -> ClassificationReport {
    let mut witnesses = BTreeMap::new();

    let mut cut_at = None;
    let mut identity_at = None;
    let mut nonlinear_at = None;
    scan(t, "root", &mut cut_at, &mut identity_at, &mut nonlinear_at);

    if matches!(t, Design::Var(_)) {
        identity_at.get_or_insert_with(|| "root".to_string());
    }
    let total = *t != Design::Omega;
    if !total {
        witnesses.insert("total".into(), "root".into());
    }
    if let Some(at) = &cut_at {
        witnesses.insert("cut_free".into(), at.clone());
    }
    if let Some(at) = &identity_at {
        witnesses.insert("identity_free".into(), at.clone());
    }
    if let Some(at) = &nonlinear_at {
        witnesses.insert("linear".into(), at.clone());
    }

    let fv = t.free_vars();
    let atomic = match t.polarity() {
        Polarity::Pos => fv.iter().all(|v| *v == Var::x0()),
        Polarity::Neg => fv.is_empty(),
    };

    let cut_free = cut_at.is_none();
    let identity_free = identity_at.is_none();
    let linear = nonlinear_at.is_none();
    ClassificationReport {
        cut_free,
        identity_free,
        total,
        linear,
        atomic,
        standard: cut_free && identity_free && total && linear,
        witnesses,
    }
}

fn scan(
    t: &Design,
    at: &str,
    cut: &mut Option<String>,
    identity: &mut Option<String>,
    nonlinear: &mut Option<String>,
) {
    match t {
        Design::Daimon | Design::Omega | Design::Var(_) => {}
        Design::App { head, args, .. } => {
            if matches!(**head, Design::Sum(_)) && cut.is_none() {
                cut.get_or_insert_with(|| at.to_string());
            }
            for (i, a) in args.iter().enumerate() {
                if matches!(a, Design::Var(_)) {
                    identity.get_or_insert_with(|| format!("{at}.args[{i}]"));
                }
            }
            if nonlinear.is_none() {
                let mut seen: BTreeSet<Var> = BTreeSet::new();
                let parts = std::iter::once(&**head).chain(args.iter());
                'outer: for part in parts {
                    for v in part.free_vars() {
                        if !seen.insert(v) {
                            nonlinear.get_or_insert_with(|| at.to_string());
                            break 'outer;
                        }
                    }
                }
            }
            scan(head, &format!("{at}.head"), cut, identity, nonlinear);
            for (i, a) in args.iter().enumerate() {
                scan(a, &format!("{at}.args[{i}]"), cut, identity, nonlinear);
            }
        }
        Design::Sum(branches) => {
            for (name, br) in branches {
                scan(&br.body, &format!("{at}.branch[{name}]"), cut, identity, nonlinear);
            }
        }
    }
}

pub fn is_standard(t: &Design) -> bool {
    classify(t).standard
}

/// Atomic positive: free variables within `{x0}`. Atomic negative: closed.
pub fn is_atomic(t: &Design) -> bool {
    classify(t).atomic
}

// ===== approximation orders =====

#[derive(Clone, Copy, PartialEq, Eq)]
enum Order {
    Stable,
    Obs,
}

/// Stable order: `Omega` below every positive design, applications and sums
/// compared componentwise, branch absent on the right forces absence on the left.
pub fn stable_leq(t: &Design, u: &Design) -> Result<bool, TermError> {
    cmp_order(t, u, Order::Stable)
}

/// Observational order: the stable clauses plus `P` below `Daimon` for every
/// positive `P`.
pub fn obs_leq(t: &Design, u: &Design) -> Result<bool, TermError> {
    cmp_order(t, u, Order::Obs)
}

fn cmp_order(t: &Design, u: &Design, ord: Order) -> Result<bool, TermError> {
    if t.polarity() != u.polarity() {
        return Err(TermError::PolarityMismatch(
            "orders compare designs of equal polarity".into(),
        ));
    }
    Ok(leq(t, u, &BTreeMap::new(), ord))
}

/// `env` maps u-side binders to t-side binders.
fn leq(t: &Design, u: &Design, env: &BTreeMap<Var, Var>, ord: Order) -> bool {
    if *t == Design::Omega && u.is_positive() {
        return true;
    }
    if ord == Order::Obs && *u == Design::Daimon && t.is_positive() {
        return true;
    }
    match (t, u) {
        (Design::Daimon, Design::Daimon) => true,
        (Design::Var(x), Design::Var(y)) => {
            let y = env.get(y).unwrap_or(y);
            x == y
        }
        (
            Design::App { head: h1, name: n1, args: a1 },
            Design::App { head: h2, name: n2, args: a2 },
        ) => {
            n1 == n2
                && a1.len() == a2.len()
                && leq(h1, h2, env, ord)
                && a1.iter().zip(a2).all(|(x, y)| leq(x, y, env, ord))
        }
        (Design::Sum(b1), Design::Sum(b2)) => b1.iter().all(|(name, br1)| {
            // Stored bodies are non-Omega, so the branch must exist on the right.
            let Some(br2) = b2.get(name) else { return false };
            if br1.params.len() != br2.params.len() {
                return false;
            }
            let mut env2 = env.clone();
            for (p2, p1) in br2.params.iter().zip(&br1.params) {
                env2.insert(p2.clone(), p1.clone());
            }
            leq(&br1.body, &br2.body, &env2, ord)
        }),
        _ => false,
    }
}

/// Intersection of designs: greatest lower bound for the stable order when
/// defined. `None` means undefined.
pub fn intersect(t: &Design, u: &Design) -> Option<Design> {
    if t.polarity() != u.polarity() {
        return None;
    }
    meet(t, u, &BTreeMap::new())
}

/// `env` maps u-side binders to t-side binders; output reuses t's names.
fn meet(t: &Design, u: &Design, env: &BTreeMap<Var, Var>) -> Option<Design> {
    if *t == Design::Omega && u.is_positive() {
        return Some(Design::Omega);
    }
    if *u == Design::Omega && t.is_positive() {
        return Some(Design::Omega);
    }
    match (t, u) {
        (Design::Daimon, Design::Daimon) => Some(Design::Daimon),
        (Design::Var(x), Design::Var(y)) => {
            let y = env.get(y).unwrap_or(y);
            if x == y {
                Some(Design::Var(x.clone()))
            } else {
                None
            }
        }
        (
            Design::App { head: h1, name: n1, args: a1 },
            Design::App { head: h2, name: n2, args: a2 },
        ) => {
            // Only variable-headed applications intersect.
            let (Design::Var(x1), Design::Var(x2)) = (&**h1, &**h2) else {
                return None;
            };
            let x2 = env.get(x2).unwrap_or(x2);
            if x1 != x2 || n1 != n2 || a1.len() != a2.len() {
                return None;
            }
            let mut args = Vec::with_capacity(a1.len());
            for (x, y) in a1.iter().zip(a2) {
                args.push(meet(x, y, env)?);
            }
            Some(Design::App {
                head: h1.clone(),
                name: n1.clone(),
                args,
            })
        }
        (Design::Sum(b1), Design::Sum(b2)) => {
            let mut out = BTreeMap::new();
            for (name, br1) in b1 {
                // Branch present on one side only meets Omega: drop it.
                let Some(br2) = b2.get(name) else { continue };
                if br1.params.len() != br2.params.len() {
                    return None;
                }
                let mut env2 = env.clone();
                for (p2, p1) in br2.params.iter().zip(&br1.params) {
                    env2.insert(p2.clone(), p1.clone());
                }
                let body = meet(&br1.body, &br2.body, &env2)?;
                if body != Design::Omega {
                    out.insert(name.clone(), Branch::new(br1.params.clone(), body));
                }
            }
            Some(Design::Sum(out))
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn sig() -> Signature {
        fixtures::golden_signature()
    }

    #[test]
    fn polarities() {
        assert_eq!(Design::Daimon.polarity(), Polarity::Pos);
        assert_eq!(Design::Omega.polarity(), Polarity::Pos);
        assert_eq!(Design::var("x").polarity(), Polarity::Neg);
        assert_eq!(Design::empty_sum().polarity(), Polarity::Neg);
        assert_eq!(
            Design::app(Design::var("x"), "c", vec![]).polarity(),
            Polarity::Pos
        );
    }

    #[test]
    fn validate_checks_arity_and_polarity() {
        let ok = Design::app(Design::var("x0"), "b", vec![Design::empty_sum()]);
        assert!(ok.validate(&sig()).is_ok());

        let wrong_arity = Design::app(Design::var("x0"), "b", vec![]);
        assert!(matches!(
            wrong_arity.validate(&sig()),
            Err(TermError::Malformed { .. })
        ));

        let unknown = Design::app(Design::var("x0"), "zz", vec![]);
        assert!(unknown.validate(&sig()).is_err());

        let dup_params = Design::sum([(
            Name::new("a"),
            Branch::new(vec![Var::new("x"), Var::new("x")], Design::Daimon),
        )]);
        assert!(dup_params.validate(&sig()).is_err());
    }

    #[test]
    fn golden_designs_are_standard() {
        let p = fixtures::golden_p();
        let n = fixtures::golden_n();
        assert!(p.validate(&sig()).is_ok());
        assert!(n.validate(&sig()).is_ok());
        let cp = classify(&p);
        let cn = classify(&n);
        assert!(cp.standard && cp.atomic, "{cp:?}");
        assert!(cn.standard && cn.atomic, "{cn:?}");
    }

    #[test]
    fn canonicalize_golden_n_names_binders_in_traversal_order() {
        // Binders in pre-order: a(y1,y2) then the inner a(y5,y6).
        let n = fixtures::golden_n();
        let canon = n.canonicalize();
        let inner_inner = Design::sum([
            (
                Name::new("a"),
                Branch::new(vec![Var::fresh(2), Var::fresh(3)], Design::Daimon),
            ),
            (Name::new("c"), Branch::new(vec![], Design::Daimon)),
        ]);
        let inner = Design::sum1(
            "c",
            vec![],
            Design::app(Design::Var(Var::fresh(1)), "b", vec![inner_inner]),
        );
        let expected = Design::sum([(
            Name::new("a"),
            Branch::new(
                vec![Var::fresh(0), Var::fresh(1)],
                Design::app(Design::Var(Var::fresh(0)), "b", vec![inner]),
            ),
        )]);
        assert_eq!(canon, expected);
        assert_eq!(canon.canonicalize(), canon, "canonicalize is idempotent");
    }

    #[test]
    fn alpha_eq_ignores_bound_names_only() {
        let p = fixtures::golden_p();
        let renamed = Design::app(
            Design::var("x0"),
            "a",
            vec![
                Design::sum1("b", vec!["u"], Design::app(Design::var("u"), "c", vec![])),
                Design::sum1("w", vec![], Design::Daimon),
            ],
        );
        // Same bound structure, different binder names.
        let q = Design::app(
            Design::var("x0"),
            "a",
            vec![
                Design::sum1("b", vec!["u1"], Design::app(Design::var("u1"), "c", vec![])),
                Design::sum1("b", vec!["u2"], Design::app(Design::var("u2"), "c", vec![])),
            ],
        );
        assert!(alpha_eq(&p, &q));
        assert!(!alpha_eq(&p, &renamed));

        // Renaming a free variable is not alpha-equivalence.
        let free = Design::app(Design::var("y9"), "c", vec![]);
        let free2 = Design::app(Design::var("y8"), "c", vec![]);
        assert!(!alpha_eq(&free, &free2));
    }

    #[test]
    fn substitute_creates_cuts_and_avoids_capture() {
        // (x|c<>)[{c() => daimon}/x] is a cut.
        let t = Design::app(Design::var("x"), "c", vec![]);
        let n = Design::sum1("c", vec![], Design::Daimon);
        let cut = substitute1(&t, &Var::new("x"), &n).unwrap();
        assert!(matches!(&cut, Design::App { head, .. } if matches!(**head, Design::Sum(_))));
        assert!(!classify(&cut).cut_free);

        // Binder renaming keeps the free y of the replacement from being captured:
        // in {b(y) => x|c<>}[y/x] the outer y must not bind the substituted one.
        let t = Design::sum1("b", vec!["y"], Design::app(Design::var("x"), "c", vec![]));
        let got = substitute1(&t, &Var::new("x"), &Design::var("y")).unwrap();
        let Design::Sum(branches) = &got else { panic!("sum expected") };
        let br = &branches[&Name::new("b")];
        let Design::App { head, .. } = &br.body else { panic!("app expected") };
        assert_eq!(**head, Design::var("y"), "y stays free");
        assert_ne!(br.params[0], Var::new("y"));

        // Positive replacements are rejected.
        assert!(matches!(
            substitute1(&t, &Var::new("x"), &Design::Daimon),
            Err(TermError::PolarityMismatch(_))
        ));
    }

    #[test]
    fn substitution_is_simultaneous() {
        // [y/x, x|c<> stays x-free] — x's replacement mentions z, z's mentions x;
        // neither replacement is re-substituted.
        let t = Design::app(
            Design::var("x"),
            "a",
            vec![Design::var("z"), Design::empty_sum()],
        );
        let mut subs = BTreeMap::new();
        subs.insert(Var::new("x"), Design::var("z"));
        subs.insert(Var::new("z"), Design::var("x"));
        let got = substitute(&t, &subs).unwrap();
        let expected = Design::app(
            Design::var("z"),
            "a",
            vec![Design::var("x"), Design::empty_sum()],
        );
        assert!(alpha_eq(&got, &expected));
    }

    #[test]
    fn classify_flags_cuts_identities_nonlinearity() {
        let cut = Design::app(Design::empty_sum(), "c", vec![]);
        let r = classify(&cut);
        assert!(!r.cut_free && r.witnesses.contains_key("cut_free"));

        let identity = Design::app(Design::var("x0"), "b", vec![Design::var("y")]);
        let r = classify(&identity);
        assert!(!r.identity_free);
        assert_eq!(r.witnesses["identity_free"], "root.args[0]");

        let r = classify(&Design::var("x"));
        assert!(!r.identity_free, "a bare variable is not identity-free");

        let r = classify(&Design::Omega);
        assert!(!r.total);

        // y occurs in two arguments of the same application.
        let shared = Design::sum1("c", vec![], Design::app(Design::var("y"), "c", vec![]));
        let nonlinear = Design::app(
            Design::var("x0"),
            "a",
            vec![shared.clone(), shared],
        );
        let r = classify(&nonlinear);
        assert!(!r.linear && r.witnesses.contains_key("linear"));
    }

    #[test]
    fn atomicity() {
        assert!(classify(&Design::app(Design::var("x0"), "c", vec![])).atomic);
        assert!(!classify(&Design::app(Design::var("x1"), "c", vec![])).atomic);
        assert!(classify(&Design::empty_sum()).atomic);
        assert!(!classify(&Design::var("x")).atomic);
        assert!(classify(&Design::Daimon).atomic);
    }

    #[test]
    fn stable_order_clauses() {
        let p = fixtures::golden_p();
        assert!(stable_leq(&Design::Omega, &p).unwrap());
        assert!(stable_leq(&Design::Omega, &Design::Daimon).unwrap());
        assert!(stable_leq(&Design::Omega, &Design::Omega).unwrap());
        assert!(!stable_leq(&Design::Daimon, &p).unwrap());
        assert!(!stable_leq(&p, &Design::Daimon).unwrap());
        assert!(stable_leq(&p, &p).unwrap());

        // Branch on the left must appear on the right.
        let small = Design::sum1("c", vec![], Design::Daimon);
        let big = Design::sum([
            (Name::new("c"), Branch::new(vec![], Design::Daimon)),
            (Name::new("b"), Branch::new(vec![Var::new("x")], Design::Daimon)),
        ]);
        assert!(stable_leq(&small, &big).unwrap());
        assert!(!stable_leq(&big, &small).unwrap());

        assert!(stable_leq(&Design::var("x"), &Design::var("x")).unwrap());
        assert!(!stable_leq(&Design::var("x"), &Design::var("y")).unwrap());
        assert!(stable_leq(&Design::Daimon, &Design::var("x")).is_err());
    }

    #[test]
    fn obs_order_extends_stable() {
        let p = fixtures::golden_p();
        assert!(obs_leq(&p, &Design::Daimon).unwrap());
        assert!(obs_leq(&Design::Daimon, &Design::Daimon).unwrap());
        assert!(!obs_leq(&Design::Daimon, &p).unwrap());

        // Inside sums the daimon clause applies branchwise.
        let t = Design::sum1("b", vec!["x"], Design::app(Design::var("x"), "c", vec![]));
        let u = Design::sum1("b", vec!["x"], Design::Daimon);
        assert!(obs_leq(&t, &u).unwrap());
        assert!(!stable_leq(&t, &u).unwrap());
    }

    #[test]
    fn intersect_clauses() {
        let p = fixtures::golden_p();
        assert_eq!(intersect(&Design::Daimon, &Design::Daimon), Some(Design::Daimon));
        assert_eq!(intersect(&Design::Omega, &p), Some(Design::Omega));
        assert_eq!(intersect(&p, &Design::Omega), Some(Design::Omega));
        assert_eq!(intersect(&Design::Omega, &Design::Daimon), Some(Design::Omega));
        assert_eq!(intersect(&Design::Daimon, &p), None);

        // Same head variable and name: argumentwise.
        let left = Design::app(
            Design::var("x0"),
            "a",
            vec![
                Design::sum1("b", vec!["x"], Design::Daimon),
                Design::sum([
                    (Name::new("c"), Branch::new(vec![], Design::Daimon)),
                    (Name::new("b"), Branch::new(vec![Var::new("y")], Design::Daimon)),
                ]),
            ],
        );
        let right = Design::app(
            Design::var("x0"),
            "a",
            vec![
                Design::sum1("b", vec!["u"], Design::Daimon),
                Design::sum1("c", vec![], Design::Daimon),
            ],
        );
        let got = intersect(&left, &right).unwrap();
        let expected = Design::app(
            Design::var("x0"),
            "a",
            vec![
                Design::sum1("b", vec!["x"], Design::Daimon),
                Design::sum1("c", vec![], Design::Daimon),
            ],
        );
        assert!(alpha_eq(&got, &expected));

        // Different head vars or names: undefined.
        let other = Design::app(Design::var("x1"), "a", vec![Design::empty_sum(), Design::empty_sum()]);
        assert_eq!(intersect(&left, &other), None);
        let diff_name = Design::app(Design::var("x0"), "c", vec![]);
        assert_eq!(intersect(&left, &diff_name), None);
    }

    #[test]
    fn intersect_is_lower_bound_here() {
        let a = Design::sum([
            (Name::new("c"), Branch::new(vec![], Design::Daimon)),
            (
                Name::new("b"),
                Branch::new(vec![Var::new("x")], Design::app(Design::var("x"), "c", vec![])),
            ),
        ]);
        let b = Design::sum1("b", vec!["z"], Design::app(Design::var("z"), "c", vec![]));
        let m = intersect(&a, &b).unwrap();
        assert!(stable_leq(&m, &a).unwrap());
        assert!(stable_leq(&m, &b).unwrap());
        assert!(alpha_eq(&m, &b));
    }

    #[test]
    fn reserved_prefix_detection() {
        assert_eq!(v_index("v12"), Some(12));
        assert_eq!(v_index("v0"), Some(0));
        assert_eq!(v_index("v"), None);
        assert_eq!(v_index("v1x"), None);
        assert_eq!(v_index("x0"), None);
        let d = Design::sum1("b", vec!["v7"], Design::Daimon);
        assert_eq!(d.max_reserved_index(), Some(7));
    }
}
