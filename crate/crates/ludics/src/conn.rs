//! Connectives and the harmony condition, with its operational faces and
//! its finite-instance dual-decomposability check.
//!
//! A connective is a triple `(z1..zn, intro, elim)` of bound variables and
//! two sets of negative actions over them. Harmony is the two set
//! inclusions at once: every elimination action is an introduction action
//! (inversion) and conversely (recovery). Inversion is what makes every
//! elimination-after-introduction cut reduce without divergence, and
//! recovery is what makes eta-expansion land back inside the connective;
//! [`beta_condition_check`] and [`eta_condition_check`] exercise both
//! operationally instead of restating the inclusions.
//!
//! Dual decomposability re-reads the same condition at the level of
//! behaviours: the elimination behaviour is exactly the introduction-built
//! designs plus daimon, and membership in the introduction behaviour is
//! exactly branch-wise orthogonality to the argument behaviours. Behaviours
//! are infinite, so [`check_dual_decomposability_connective`] works on
//! workbenches: candidates built from listed generators, counter-set
//! testers built from listed testers. A FAIL carries a concrete
//! counterexample; a PASS is scoped by the workbench caveat.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::ortho::{
    anti_bindings, atomic_orthogonal, orthogonal_positive, OrthoError, Tester, Verdict,
    Workbench, WORKBENCH_CAVEAT,
};
use crate::reduce::{self, StepResult};
use crate::term::{
    alpha_eq, is_atomic, substitute, substitute1, Branch, Design, Name, Polarity, Signature,
    TermError, Var,
};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ConnError {
    #[error("connective {0} is ill-formed: {1}")]
    IllFormed(String, String),
    #[error("connective {label} has {want} bound variables but {got} workbenches were supplied")]
    PlaceCount {
        label: String,
        want: usize,
        got: usize,
    },
    #[error("workbench {0} has polarity {1}, expected {2}")]
    WrongPolarity(String, Polarity, Polarity),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Ortho(#[from] OrthoError),
}

/// A negative action `a(x1, ..., xk)`: a name together with the bound
/// variables it consumes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct NegAction {
    pub name: Name,
    pub args: Vec<Var>,
}

impl NegAction {
    pub fn new(name: impl Into<String>, args: Vec<&str>) -> Self {
        NegAction {
            name: Name::new(name),
            args: args.into_iter().map(Var::new).collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }
}

impl fmt::Display for NegAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.name)?;
        for (i, x) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

/// A connective `(z1..zn, intro, elim)`. The bound variables fix the arity;
/// the actions say which premises each rule consumes. Validity (checked by
/// [`validate_connective`]): bound variables pairwise distinct and not
/// `x0`; action names pairwise distinct across `intro` and `elim` except
/// that the very same action may sit on both sides; every action binds
/// distinct variables drawn from the bound variables; and together the
/// actions use all of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Connective {
    pub label: String,
    pub bound_vars: Vec<Var>,
    pub intro: Vec<NegAction>,
    pub elim: Vec<NegAction>,
}

impl Connective {
    pub fn new(
        label: impl Into<String>,
        bound_vars: Vec<&str>,
        intro: Vec<NegAction>,
        elim: Vec<NegAction>,
    ) -> Self {
        Connective {
            label: label.into(),
            bound_vars: bound_vars.into_iter().map(Var::new).collect(),
            intro,
            elim,
        }
    }

    pub fn arity(&self) -> usize {
        self.bound_vars.len()
    }

    /// The signature the actions of this connective inhabit.
    pub fn signature(&self) -> Signature {
        let mut sig = Signature::new();
        for a in self.intro.iter().chain(&self.elim) {
            sig.insert(a.name.clone(), a.arity());
        }
        sig
    }

    /// All actions, each name once; an action on both sides appears once.
    pub fn actions(&self) -> Vec<&NegAction> {
        let mut seen = BTreeSet::new();
        self.intro
            .iter()
            .chain(&self.elim)
            .filter(|a| seen.insert(&a.name))
            .collect()
    }

    fn position(&self, x: &Var) -> Option<usize> {
        self.bound_vars.iter().position(|z| z == x)
    }

    fn in_intro(&self, a: &NegAction) -> bool {
        self.intro.contains(a)
    }

    fn in_elim(&self, a: &NegAction) -> bool {
        self.elim.contains(a)
    }
}

impl fmt::Display for Connective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |f: &mut fmt::Formatter<'_>, actions: &[NegAction]| -> fmt::Result {
            f.write_str("{")?;
            for (i, a) in actions.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str("}")
        };
        f.write_str("(")?;
        for z in &self.bound_vars {
            write!(f, "{z}, ")?;
        }
        side(f, &self.intro)?;
        f.write_str(", ")?;
        side(f, &self.elim)?;
        f.write_str(")")
    }
}

/// Equality up to a uniform renaming of the bound variables.
pub fn alpha_eq_connective(c: &Connective, d: &Connective) -> bool {
    fn key(c: &Connective) -> Option<(BTreeSet<(Name, Vec<usize>)>, BTreeSet<(Name, Vec<usize>)>)> {
        let pos: BTreeMap<&Var, usize> = c
            .bound_vars
            .iter()
            .enumerate()
            .map(|(i, z)| (z, i))
            .collect();
        let side = |actions: &[NegAction]| {
            actions
                .iter()
                .map(|a| {
                    let idx: Option<Vec<usize>> =
                        a.args.iter().map(|x| pos.get(x).copied()).collect();
                    idx.map(|idx| (a.name.clone(), idx))
                })
                .collect::<Option<BTreeSet<_>>>()
        };
        Some((side(&c.intro)?, side(&c.elim)?))
    }
    c.bound_vars.len() == d.bound_vars.len()
        && match (key(c), key(d)) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        }
}

/// Checks the three validity clauses plus name/arity agreement with `sig`.
/// Hard violations are collected into one error; `Ok` carries advisory
/// notes (a connective may legitimately have an empty side, since the
/// coverage clause ranges over both sides jointly, but such a connective
/// deserves a flag).
pub fn validate_connective(c: &Connective, sig: &Signature) -> Result<Vec<String>, ConnError> {
    let mut violations = Vec::new();
    let mut notes = Vec::new();

    let mut zs = BTreeSet::new();
    for z in &c.bound_vars {
        if *z == Var::x0() {
            violations.push("x0 may not be a bound variable".to_string());
        }
        if !zs.insert(z.clone()) {
            violations.push(format!("bound variable {z} is listed twice"));
        }
    }

    let mut by_name: BTreeMap<&Name, &NegAction> = BTreeMap::new();
    let mut used: BTreeSet<&Var> = BTreeSet::new();
    for (a, side) in c
        .intro
        .iter()
        .map(|a| (a, "introduction"))
        .chain(c.elim.iter().map(|a| (a, "elimination")))
    {
        let mut own = BTreeSet::new();
        for x in &a.args {
            if !zs.contains(x) {
                violations.push(format!("action {a} mentions {x} outside the bound variables"));
            }
            if !own.insert(x) {
                violations.push(format!("action {a} binds {x} twice"));
            }
            used.insert(x);
        }
        match by_name.get(&a.name) {
            Some(prev) if *prev != a => {
                violations.push(format!(
                    "name {} is used by two different actions, {prev} and {a}",
                    a.name
                ));
            }
            _ => {
                by_name.insert(&a.name, a);
            }
        }
        match sig.arity(&a.name) {
            None => violations.push(format!("{side} name {} is not in the signature", a.name)),
            Some(k) if k != a.arity() => violations.push(format!(
                "action {a} has {} arguments but the signature gives {} arity {k}",
                a.arity(),
                a.name
            )),
            Some(_) => {}
        }
    }

    for z in &c.bound_vars {
        if !used.contains(z) {
            violations.push(format!("bound variable {z} is not used by any action"));
        }
    }

    if !violations.is_empty() {
        return Err(ConnError::IllFormed(c.label.clone(), violations.join("; ")));
    }
    if c.intro.is_empty() {
        notes.push("introduction side is empty".to_string());
    }
    if c.elim.is_empty() {
        notes.push("elimination side is empty".to_string());
    }
    if c.bound_vars.is_empty() {
        notes.push("nullary connective".to_string());
    }
    Ok(notes)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarmonyReport {
    pub inversion: bool,
    pub recovery: bool,
    pub harmony: bool,
    /// Elimination actions with no introduction counterpart: inversion failures.
    pub missing_from_intro: Vec<NegAction>,
    /// Introduction actions with no elimination counterpart: recovery failures.
    pub missing_from_elim: Vec<NegAction>,
    /// Actions sitting on both sides; a non-harmonious connective with a
    /// nonempty overlap still supports some reduction steps.
    pub overlap: Vec<NegAction>,
}

/// The harmony condition as the two set inclusions.
pub fn check_harmony(c: &Connective) -> HarmonyReport {
    let missing_from_intro: Vec<NegAction> = c
        .elim
        .iter()
        .filter(|a| !c.in_intro(a))
        .cloned()
        .collect();
    let missing_from_elim: Vec<NegAction> = c
        .intro
        .iter()
        .filter(|a| !c.in_elim(a))
        .cloned()
        .collect();
    let overlap: Vec<NegAction> = c.intro.iter().filter(|a| c.in_elim(a)).cloned().collect();
    let inversion = missing_from_intro.is_empty();
    let recovery = missing_from_elim.is_empty();
    HarmonyReport {
        inversion,
        recovery,
        harmony: inversion && recovery,
        missing_from_intro,
        missing_from_elim,
        overlap,
    }
}

/// `sum a_j(xs_j).P_j` over the introduction actions. Missing family
/// entries diverge, so the sum stays sparse.
pub fn intro_sum(c: &Connective, family: &BTreeMap<Name, Design>) -> Design {
    Design::sum(c.intro.iter().map(|a| {
        let body = family.get(&a.name).cloned().unwrap_or(Design::Omega);
        (a.name.clone(), Branch::new(a.args.clone(), body))
    }))
}

/// One elimination-after-introduction cut: builds
/// `(sum over intro).P_j | elim_action<args>`, fires the cut rule once, and
/// checks that the result is the expected substitution instance and not
/// divergence. Quantifying this over all elimination actions and all total
/// families is exactly the inversion condition.
pub fn beta_condition_check(
    c: &Connective,
    family: &BTreeMap<Name, Design>,
    elim_action: &NegAction,
    args: &[Design],
) -> bool {
    if args.len() != elim_action.arity() {
        return false;
    }
    let cut = Design::App {
        head: Box::new(intro_sum(c, family)),
        name: elim_action.name.clone(),
        args: args.to_vec(),
    };
    let StepResult::Reduced(got) = reduce::step(&cut) else {
        return false;
    };
    if got == Design::Omega {
        return false;
    }
    let Some(body) = family.get(&elim_action.name) else {
        return false;
    };
    let subs: BTreeMap<Var, Design> = elim_action
        .args
        .iter()
        .cloned()
        .zip(args.iter().cloned())
        .collect();
    match substitute(body, &subs) {
        Ok(want) => alpha_eq(&got, &want),
        Err(_) => false,
    }
}

/// `sum a_j(ys_j).(n|a_j<ys_j>)` over the introduction actions, with fresh
/// binders disjoint from the free variables of `n`.
pub fn eta_expand(n: &Design, c: &Connective) -> Design {
    let mut next = n.max_reserved_index().map_or(0, |i| i + 1);
    Design::sum(c.intro.iter().map(|a| {
        let params: Vec<Var> = a
            .args
            .iter()
            .map(|_| {
                let v = Var::fresh(next);
                next += 1;
                v
            })
            .collect();
        let body = Design::App {
            head: Box::new(n.clone()),
            name: a.name.clone(),
            args: params.iter().cloned().map(Design::Var).collect(),
        };
        (a.name.clone(), Branch::new(params, body))
    }))
}

/// Searches for an arity-preserving map `f` from introduction actions to
/// elimination actions such that replaying each introduction action through
/// `f` reproduces the eta-expanded form. Action names are pairwise distinct
/// across the two sides, so the only map that can survive the comparison
/// sends every action to itself and the condition collapses to the
/// recovery inclusion; the search is kept operational anyway so the check
/// runs the definition rather than a shortcut. Returns the witness map.
pub fn eta_condition_check(c: &Connective) -> Option<BTreeMap<Name, Name>> {
    // Sum equality for every N is sum equality for one N that cannot be
    // confused with anything else; a free variable does.
    let probe = Design::var("w_eta");
    let want = eta_expand(&probe, c);
    let mut assign: Vec<Name> = Vec::with_capacity(c.intro.len());
    search_eta(c, &probe, &want, &mut assign)
}

fn search_eta(
    c: &Connective,
    probe: &Design,
    want: &Design,
    assign: &mut Vec<Name>,
) -> Option<BTreeMap<Name, Name>> {
    if assign.len() == c.intro.len() {
        let candidate = Design::sum(c.intro.iter().zip(assign.iter()).map(|(a, target)| {
            let body = Design::App {
                head: Box::new(probe.clone()),
                name: target.clone(),
                args: a.args.iter().cloned().map(Design::Var).collect(),
            };
            (a.name.clone(), Branch::new(a.args.clone(), body))
        }));
        if alpha_eq(&candidate, want) {
            return Some(
                c.intro
                    .iter()
                    .map(|a| a.name.clone())
                    .zip(assign.iter().cloned())
                    .collect(),
            );
        }
        return None;
    }
    let a = &c.intro[assign.len()];
    for e in c.elim.iter().filter(|e| e.arity() == a.arity()) {
        assign.push(e.name.clone());
        if let Some(f) = search_eta(c, probe, want, assign) {
            return Some(f);
        }
        assign.pop();
    }
    None
}

/// Tester designs of a workbench that can stand alone with the given
/// polarity: single designs, atomic, of the right sign. Composite
/// anti-design testers have no single-design reading and are skipped.
pub(crate) fn single_testers(w: &Workbench, polarity: Polarity) -> Vec<Design> {
    w.testers
        .iter()
        .filter_map(|t| match t {
            Tester::Design(d) if d.polarity() == polarity && is_atomic(d) => Some(d.clone()),
            _ => None,
        })
        .collect()
}

pub(crate) fn atomic_generators(w: &Workbench) -> Vec<Design> {
    w.generators.iter().filter(|g| is_atomic(g)).cloned().collect()
}

/// All ways to pick one design per pool.
pub(crate) fn cartesian(pools: &[Vec<Design>]) -> Vec<Vec<Design>> {
    let mut out = vec![Vec::new()];
    for pool in pools {
        let mut next = Vec::with_capacity(out.len() * pool.len());
        for prefix in &out {
            for d in pool {
                let mut row = prefix.clone();
                row.push(d.clone());
                next.push(row);
            }
        }
        out = next;
    }
    out
}

pub(crate) fn expect_benches(
    c: &Connective,
    benches: &[Workbench],
    polarity: Polarity,
) -> Result<(), ConnError> {
    if benches.len() != c.bound_vars.len() {
        return Err(ConnError::PlaceCount {
            label: c.label.clone(),
            want: c.bound_vars.len(),
            got: benches.len(),
        });
    }
    for w in benches {
        if w.polarity != polarity {
            return Err(ConnError::WrongPolarity(w.label.clone(), w.polarity, polarity));
        }
    }
    Ok(())
}

/// Counter set for the introduction behaviour: every `x0|a_i<M1..Mk>` with
/// `a_i` an introduction action and each `M_j` drawn from the tester set of
/// the workbench standing for the argument behaviour at that slot. Each
/// such design is orthogonal to the whole introduction behaviour, so
/// failing one of these refutes membership outright.
pub fn counter_set_intro(
    c: &Connective,
    benches: &[Workbench],
) -> Result<Vec<Design>, ConnError> {
    expect_benches(c, benches, Polarity::Pos)?;
    let mut out = BTreeSet::new();
    for a in &c.intro {
        let pools: Vec<Vec<Design>> = a
            .args
            .iter()
            .map(|x| single_testers(&benches[c.position(x).expect("validated")], Polarity::Neg))
            .collect();
        for combo in cartesian(&pools) {
            out.insert(Design::App {
                head: Box::new(Design::Var(Var::x0())),
                name: a.name.clone(),
                args: combo,
            });
        }
    }
    Ok(out.into_iter().collect())
}

/// Counter set for the elimination behaviour: for every elimination action
/// `a_i`, slot `l`, and tester `Q` of the workbench at that slot, the sum
/// answering `a_i` with `Q[x_(i,l)/x0]` and every other elimination action
/// with daimon.
pub fn counter_set_elim(
    c: &Connective,
    benches: &[Workbench],
) -> Result<Vec<Design>, ConnError> {
    expect_benches(c, benches, Polarity::Neg)?;
    let mut out = BTreeSet::new();
    for a in &c.elim {
        for x in &a.args {
            for q in single_testers(&benches[c.position(x).expect("validated")], Polarity::Pos) {
                let body = substitute1(&q, &Var::x0(), &Design::Var(x.clone()))?;
                out.insert(Design::sum(c.elim.iter().map(|b| {
                    let branch_body = if b == a { body.clone() } else { Design::Daimon };
                    (b.name.clone(), Branch::new(b.args.clone(), branch_body))
                })));
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Swaps the two action sets. An involution; harmony is self-dual under it.
pub fn dual_connective(c: &Connective) -> Connective {
    Connective {
        label: c.label.clone(),
        bound_vars: c.bound_vars.clone(),
        intro: c.elim.clone(),
        elim: c.intro.clone(),
    }
}

#[derive(Debug, Clone)]
pub struct DecompositionReport {
    pub label: String,
    /// Clause for the elimination behaviour: it equals the
    /// introduction-built designs plus daimon.
    pub elim_side: Verdict,
    /// Clause for the introduction behaviour: membership is branch-wise
    /// orthogonality to the argument behaviours at every elimination action.
    pub intro_side: Verdict,
    pub verdict: Verdict,
    pub caveat: &'static str,
    /// One line per checked instance.
    pub notes: Vec<String>,
}

pub(crate) fn combine(a: Verdict, b: Verdict) -> Verdict {
    match (a, b) {
        (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
        (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
        _ => Verdict::Pass,
    }
}

/// Finite-instance check of both dual-decomposability clauses.
///
/// Elimination side: candidates are daimon and every `x0|a<generators>`
/// over actions of either side with arguments from the negative
/// workbenches. A candidate built from an elimination action lies in the
/// elimination behaviour by construction; if its name is not an
/// introduction name, the decomposition misses it and the clause fails. A
/// candidate built from an introduction-only action lies in the claimed
/// decomposition; if it fails one of the counter-set testers it is provably
/// outside the elimination behaviour and the clause fails again.
///
/// Introduction side: sampled sums (all-daimon families over each action
/// set, the empty sum, and generator-lifted bodies from the positive
/// workbenches) are tested for the biconditional between passing the whole
/// introduction counter set and branch-wise convergence against the listed
/// tester products at every elimination action.
pub fn check_dual_decomposability_connective(
    c: &Connective,
    neg: &[Workbench],
    pos: &[Workbench],
    fuel: u64,
) -> Result<DecompositionReport, ConnError> {
    let mut notes = Vec::new();

    // Elimination side.
    let elim_testers = counter_set_elim(c, neg)?;
    let mut elim_fail = false;
    let mut elim_checked = 0usize;
    let mut elim_vacuous = false;
    notes.push(format!(
        "elimination side: {} counter testers, daimon is shared by both sides",
        elim_testers.len()
    ));
    for a in c.actions() {
        let pools: Vec<Vec<Design>> = a
            .args
            .iter()
            .map(|x| atomic_generators(&neg[c.position(x).expect("validated")]))
            .collect();
        for combo in cartesian(&pools) {
            let cand = Design::App {
                head: Box::new(Design::Var(Var::x0())),
                name: a.name.clone(),
                args: combo,
            };
            elim_checked += 1;
            let in_intro = c.intro.contains(a);
            let in_elim = c.elim.contains(a);
            if in_elim && !in_intro {
                elim_fail = true;
                notes.push(format!(
                    "elimination side FAIL: {cand} lies in the elimination behaviour by \
                     construction but {} is not an introduction name",
                    a.name
                ));
                continue;
            }
            let mut refuted = None;
            for t in &elim_testers {
                if !atomic_orthogonal(&cand, t, fuel)? {
                    refuted = Some(t.clone());
                    break;
                }
            }
            match refuted {
                Some(t) if !in_elim => {
                    elim_fail = true;
                    notes.push(format!(
                        "elimination side FAIL: decomposition member {cand} is refuted by \
                         counter tester {t}, so it is outside the elimination behaviour"
                    ));
                }
                Some(t) => {
                    // Generators that fail their own counter testers mean the
                    // supplied workbenches disagree with themselves.
                    elim_fail = true;
                    notes.push(format!(
                        "elimination side FAIL: shared-action candidate {cand} is refuted by {t}"
                    ));
                }
                None => {
                    if elim_testers.is_empty() && !in_elim {
                        elim_vacuous = true;
                    }
                    notes.push(format!("elimination side ok: {cand}"));
                }
            }
        }
    }
    let elim_side = if elim_fail {
        Verdict::Fail
    } else if elim_checked == 0 || elim_vacuous {
        notes.push("elimination side: vacuous, no decisive instance".to_string());
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    };

    // Introduction side.
    let intro_counter = counter_set_intro(c, pos)?;
    let mut intro_fail = false;
    let mut decisive = false;
    for (tag, sum) in sampled_sums(c, pos) {
        let mut passes = true;
        let mut refuter = None;
        for t in &intro_counter {
            if !atomic_orthogonal(t, &sum, fuel)? {
                passes = false;
                refuter = Some(t.clone());
                break;
            }
        }
        let mut branchwise = true;
        let mut branch_witness = None;
        let mut any_product = false;
        'elim: for a in &c.elim {
            let body = match &sum {
                Design::Sum(branches) => branches
                    .get(&a.name)
                    .map(|br| br.body.clone())
                    .unwrap_or(Design::Omega),
                _ => Design::Omega,
            };
            let pools: Vec<Vec<Design>> = a
                .args
                .iter()
                .map(|x| single_testers(&pos[c.position(x).expect("validated")], Polarity::Neg))
                .collect();
            for combo in cartesian(&pools) {
                any_product = true;
                let anti = anti_bindings(a.args.iter().cloned().zip(combo))?;
                if !orthogonal_positive(&body, &anti, fuel)? {
                    branchwise = false;
                    branch_witness = Some(a.name.clone());
                    break 'elim;
                }
            }
        }
        if intro_counter.is_empty() && !any_product {
            notes.push(format!("introduction side: {tag}: vacuous"));
            continue;
        }
        decisive = true;
        if passes != branchwise {
            intro_fail = true;
            let lhs = match refuter {
                None => "passes the whole introduction counter set".to_string(),
                Some(t) => format!("is refuted by counter tester {t}"),
            };
            let rhs = match branch_witness {
                None => "converges branch-wise at every elimination action".to_string(),
                Some(name) => format!("diverges at elimination action {name}"),
            };
            notes.push(format!("introduction side FAIL: {tag}: {lhs} yet {rhs}"));
        } else {
            notes.push(format!(
                "introduction side ok: {tag}: both tests agree ({})",
                if passes { "member" } else { "non-member" }
            ));
        }
    }
    let intro_side = if intro_fail {
        Verdict::Fail
    } else if !decisive {
        notes.push("introduction side: vacuous, no decisive instance".to_string());
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    };

    Ok(DecompositionReport {
        label: c.label.clone(),
        elim_side,
        intro_side,
        verdict: combine(elim_side, intro_side),
        caveat: WORKBENCH_CAVEAT,
        notes,
    })
}

/// Sample sums for the introduction-side clause: all-daimon families over
/// each action set, the empty sum, and one generator-lifted sum per action,
/// slot, and positive generator.
fn sampled_sums(c: &Connective, pos: &[Workbench]) -> Vec<(String, Design)> {
    let all_daimon = |actions: &[NegAction]| {
        Design::sum(
            actions
                .iter()
                .map(|a| (a.name.clone(), Branch::new(a.args.clone(), Design::Daimon))),
        )
    };
    let union: Vec<NegAction> = c.actions().into_iter().cloned().collect();
    let mut out: Vec<(String, Design)> = vec![
        ("all-daimon over the introduction actions".into(), all_daimon(&c.intro)),
        ("all-daimon over the elimination actions".into(), all_daimon(&c.elim)),
        ("all-daimon over all actions".into(), all_daimon(&union)),
        ("empty sum".into(), Design::empty_sum()),
    ];
    for a in &union {
        for (l, x) in a.args.iter().enumerate() {
            let Some(i) = c.position(x) else { continue };
            for g in atomic_generators(&pos[i]) {
                let Ok(body) = substitute1(&g, &Var::x0(), &Design::Var(x.clone())) else {
                    continue;
                };
                let sum = Design::sum(union.iter().map(|b| {
                    let branch_body = if b == a { body.clone() } else { Design::Daimon };
                    (b.name.clone(), Branch::new(b.args.clone(), branch_body))
                }));
                out.push((format!("generator-lifted {} slot {l}", a.name), sum));
            }
        }
    }
    let mut seen = BTreeSet::new();
    out.retain(|(_, d)| seen.insert(d.clone()));
    out
}

// ===== enumeration =====

/// All valid connectives, up to renaming of bound variables, whose actions
/// use at most `max_names` names (drawn from a fixed pool) of arity at most
/// `max_arity`. Canonical representatives assign bound variables in first
/// occurrence order, so no two results are alpha-equivalent.
pub fn enumerate_connectives(max_names: usize, max_arity: usize) -> Vec<Connective> {
    const POOL: [&str; 3] = ["a", "b", "c"];
    let names: Vec<&str> = POOL.iter().copied().take(max_names.min(3)).collect();
    let mut out = Vec::new();
    // Roles per name: absent, introduction, elimination, or both.
    let mut roles = vec![0usize; names.len()];
    loop {
        let present: Vec<usize> = (0..names.len()).filter(|i| roles[*i] != 0).collect();
        let mut arities = vec![0usize; present.len()];
        loop {
            enumerate_assignments(&names, &roles, &present, &arities, &mut out);
            if !bump(&mut arities, max_arity + 1) {
                break;
            }
        }
        if !bump(&mut roles, 4) {
            break;
        }
    }
    out
}

/// Odometer increment over base-`base` digit vectors.
fn bump(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

fn enumerate_assignments(
    names: &[&str],
    roles: &[usize],
    present: &[usize],
    arities: &[usize],
    out: &mut Vec<Connective>,
) {
    // One slot per argument position, in fixed name order.
    let mut slots: Vec<usize> = Vec::new(); // slot -> index into `present`
    for (pi, &ni) in present.iter().enumerate() {
        let _ = ni;
        for _ in 0..arities[pi] {
            slots.push(pi);
        }
    }
    let mut assign: Vec<usize> = Vec::with_capacity(slots.len());
    rgs(&slots, &mut assign, 0, &mut |assign| {
        let n = assign.iter().copied().max().unwrap_or(0);
        let bound: Vec<String> = (1..=n).map(|i| format!("z{i}")).collect();
        let mut intro = Vec::new();
        let mut elim = Vec::new();
        let mut cursor = 0usize;
        for (pi, &ni) in present.iter().enumerate() {
            let args: Vec<&str> = assign[cursor..cursor + arities[pi]]
                .iter()
                .map(|&v| bound[v - 1].as_str())
                .collect();
            cursor += arities[pi];
            let action = NegAction::new(names[ni], args);
            if roles[ni] == 1 || roles[ni] == 3 {
                intro.push(action.clone());
            }
            if roles[ni] == 2 || roles[ni] == 3 {
                elim.push(action);
            }
        }
        out.push(Connective::new(
            "enum",
            bound.iter().map(|s| s.as_str()).collect(),
            intro,
            elim,
        ));
    });
}

/// Restricted-growth enumeration of variable assignments: slot `i` may use
/// an already-used index or the next fresh one, never an index already used
/// by another slot of the same action. Each sharing pattern is produced
/// exactly once, in canonical form.
fn rgs(slots: &[usize], assign: &mut Vec<usize>, max_used: usize, emit: &mut impl FnMut(&[usize])) {
    let i = assign.len();
    if i == slots.len() {
        emit(assign);
        return;
    }
    for v in 1..=max_used + 1 {
        let clash = (0..i).any(|j| slots[j] == slots[i] && assign[j] == v);
        if clash {
            continue;
        }
        assign.push(v);
        rgs(slots, assign, max_used.max(v), emit);
        assign.pop();
    }
}

// ===== library =====

/// The additive conjunction shape: `(x1, x2, {pi1(x1), pi2(x2)})`, both
/// sides equal.
pub fn with2() -> Connective {
    let actions = vec![
        NegAction::new("pi1", vec!["x1"]),
        NegAction::new("pi2", vec!["x2"]),
    ];
    Connective::new("with", vec!["x1", "x2"], actions.clone(), actions)
}

/// The additive disjunction view: the dual of [`with2`].
pub fn plus2() -> Connective {
    let mut c = dual_connective(&with2());
    c.label = "plus".into();
    c
}

/// Negative shift: `(x1, {dn(x1)})`.
pub fn shift_down() -> Connective {
    let a = vec![NegAction::new("dn", vec!["x1"])];
    Connective::new("shift-down", vec!["x1"], a.clone(), a)
}

/// Positive shift: `(x1, {up(x1)})`.
pub fn shift_up() -> Connective {
    let a = vec![NegAction::new("up", vec!["x1"])];
    Connective::new("shift-up", vec!["x1"], a.clone(), a)
}

/// A synthetic binary connective with a single two-place action.
pub fn binary_synth() -> Connective {
    let a = vec![NegAction::new("pair", vec!["x1", "x2"])];
    Connective::new("pair", vec!["x1", "x2"], a.clone(), a)
}

/// `(x1, x2, x3, {a(x1, x2), b(x3)}, {c(x1), d(x2, x3)})`: a ternary
/// connective whose sides share nothing; fails inversion and recovery.
pub fn gamma3() -> Connective {
    Connective::new(
        "gamma",
        vec!["x1", "x2", "x3"],
        vec![
            NegAction::new("a", vec!["x1", "x2"]),
            NegAction::new("b", vec!["x3"]),
        ],
        vec![
            NegAction::new("c", vec!["x1"]),
            NegAction::new("d", vec!["x2", "x3"]),
        ],
    )
}

/// `(x1, x2, {a(x1), b(x2)}, {c(x2, x1)})`: the argument order in the
/// elimination action is deliberately reversed.
pub fn delta2() -> Connective {
    Connective::new(
        "delta",
        vec!["x1", "x2"],
        vec![
            NegAction::new("a", vec!["x1"]),
            NegAction::new("b", vec!["x2"]),
        ],
        vec![NegAction::new("c", vec!["x2", "x1"])],
    )
}

/// `(x1, x2, {a(x1), b(x2)}, {c(x1), b(x2)})`: not harmonious, but the
/// shared action `b(x2)` keeps some reduction steps alive.
pub fn alpha0_2() -> Connective {
    Connective::new(
        "alpha0",
        vec!["x1", "x2"],
        vec![
            NegAction::new("a", vec!["x1"]),
            NegAction::new("b", vec!["x2"]),
        ],
        vec![
            NegAction::new("c", vec!["x1"]),
            NegAction::new("b", vec!["x2"]),
        ],
    )
}
