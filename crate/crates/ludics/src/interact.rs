//! Interaction sequences and the path-level checkers built on them.
//!
//! An interaction sequence is the action-by-action transcript of the cut
//! between two quasi-closed compatible multi-designs, read from the side of
//! the first argument: [`iseq`] records which branch is opened at every
//! step and whose daimon, if any, ends the run. The transcript of a
//! converged interaction is a path of the observed side, and swapping the
//! arguments dualizes it.
//!
//! On top of the raw engine sit the finite checkers. [`visitable`] collects
//! the paths a workbench actually realizes against its own testers.
//! [`check_regularity`] tests path coverage of the material generators and
//! closure under shuffle on both a workbench and its dual.
//! [`check_shuffle_decomposition`] compares a multi-place arrangement
//! against the shuffle of its per-place path sets, and
//! [`check_dual_decomposability_paths`] tests the two path-set equalities
//! that characterize harmony of a connective. Every verdict is scoped:
//! workbenches stand in for behaviours, fuel bounds reduction, and a length
//! bound truncates path sets, so a pass certifies the listed instances only
//! while a failure exhibits a concrete witness.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::conn::{
    atomic_generators, cartesian, combine, counter_set_elim, counter_set_intro, expect_benches,
    single_testers, ConnError, Connective,
};
use crate::multi::{cut, normalized, quasi_closed_compatible, MultiDesign, MultiError};
use crate::ortho::{anti_bindings, OrthoError, Tester, Verdict, Workbench, WORKBENCH_CAVEAT};
use crate::path::{
    alpha_eq_seq, bindings_of_negative_sequence, dual_seq, paths_of,
    positive_design_of_sequence, restrict_to_views, shuffle, shuffle_sets, AjSequence,
    DesignViews, LocatedAction, Path,
};
use crate::term::{
    is_standard, substitute, substitute1, v_index, Branch, Design, Name, Polarity, Signature, Var,
};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum InteractError {
    #[error(transparent)]
    Multi(#[from] MultiError),
    #[error(transparent)]
    Ortho(#[from] OrthoError),
    #[error(transparent)]
    Conn(#[from] ConnError),
    #[error("member {0} is not standard")]
    NotStandard(String),
    #[error("the interaction reached {0}, which no binding covers")]
    UnboundAddress(Var),
    #[error("active member must be positive, found {0}")]
    NonPositive(String),
    #[error("transcript is not a path: {0}")]
    BadTrace(String),
    #[error("name {0} is used with arities {1} and {2}")]
    SignatureConflict(Name, usize, usize),
}

fn bad_trace(e: impl std::fmt::Display) -> InteractError {
    InteractError::BadTrace(e.to_string())
}

/// How an interaction run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InteractionStatus {
    /// A daimon became active: the two sides are orthogonal.
    Converged,
    /// An omega became active: the interaction diverges.
    Omega,
    /// The action budget ran out; the recorded actions are a true prefix.
    FuelExhausted,
}

/// Transcript of one interaction, read from the observed side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interaction {
    pub actions: Vec<LocatedAction>,
    pub status: InteractionStatus,
    /// Proper cut steps performed, including ones that emitted nothing.
    pub steps: u64,
}

impl Interaction {
    pub fn is_orthogonal(&self) -> bool {
        self.status == InteractionStatus::Converged
    }

    pub fn sequence(&self) -> Result<AjSequence, InteractError> {
        AjSequence::from_actions(self.actions.clone()).map_err(bad_trace)
    }

    pub fn path(&self) -> Result<Path, InteractError> {
        Path::try_new(self.sequence()?).map_err(bad_trace)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Observed,
    Counter,
}

fn members(md: &MultiDesign) -> impl Iterator<Item = &Design> {
    md.positive().into_iter().chain(md.bindings().values())
}

/// The interaction sequence of `d` against `e`, read from `d`'s side.
///
/// Both multi-designs must be standard and quasi-closed compatible. The
/// engine keeps one active positive design plus a store of negative
/// bindings tagged with the side they came from. Each step removes the
/// binding at the active head, records the opened branch as an action
/// (positive when the active design sits on `d`'s side), stores the
/// application arguments under the branch binders, and continues with the
/// branch body. A name missing from the consumed sum binds fresh variables
/// over omega, so the failing action is still recorded before the run
/// diverges.
///
/// Fuel bounds recorded actions; on exhaustion the prefix computed so far
/// is returned, flagged. A binder that collides with an address already in
/// play is renamed with the reserved fresh scheme, so transcripts are
/// deterministic and address-linear.
pub fn iseq(d: &MultiDesign, e: &MultiDesign, fuel: u64) -> Result<Interaction, InteractError> {
    quasi_closed_compatible(d, e)?;
    for m in members(d).chain(members(e)) {
        if !is_standard(m) {
            return Err(InteractError::NotStandard(m.to_string()));
        }
    }

    let mut bindings: BTreeMap<Var, (Side, Design)> = BTreeMap::new();
    let mut seen: BTreeSet<Var> = BTreeSet::new();
    let mut fresh = 0usize;
    for (side, md) in [(Side::Observed, d), (Side::Counter, e)] {
        for (x, n) in md.bindings() {
            bindings.insert(x.clone(), (side, n.clone()));
            seen.insert(x.clone());
            fresh = fresh.max(v_index(x.as_str()).map_or(0, |i| i + 1));
        }
        for m in members(md) {
            seen.extend(m.free_vars());
            fresh = fresh.max(m.max_reserved_index().map_or(0, |i| i + 1));
        }
    }
    let (mut side, mut active) = match (d.positive(), e.positive()) {
        (Some(p), None) => (Side::Observed, p.clone()),
        (None, Some(p)) => (Side::Counter, p.clone()),
        // quasi-closed compatibility leaves exactly one positive part
        _ => unreachable!("quasi-closed pair with two or no positive parts"),
    };

    let mut actions: Vec<LocatedAction> = Vec::new();
    let mut steps = 0u64;
    let status = loop {
        match active {
            Design::Daimon => {
                if side == Side::Observed {
                    if actions.len() as u64 >= fuel {
                        break InteractionStatus::FuelExhausted;
                    }
                    actions.push(LocatedAction::daimon());
                }
                break InteractionStatus::Converged;
            }
            Design::Omega => break InteractionStatus::Omega,
            Design::Var(_) | Design::Sum(_) => {
                return Err(InteractError::NonPositive(active.to_string()));
            }
            Design::App { head, name, args } => {
                let Design::Var(x) = *head else {
                    return Err(InteractError::NotStandard(
                        "application headed by a non-variable".into(),
                    ));
                };
                let Some((owner, n)) = bindings.remove(&x) else {
                    return Err(InteractError::UnboundAddress(x));
                };
                let Design::Sum(mut branches) = n else {
                    // standard members are identity-free, so every binding
                    // that survives validation is a sum
                    return Err(InteractError::NotStandard(format!("binding at {x}")));
                };
                steps += 1;
                let (params, body) = match branches.remove(&name) {
                    Some(br) => (br.params, br.body),
                    // sparse sums are total with omega bodies
                    None => {
                        let params = (0..args.len())
                            .map(|_| {
                                let v = Var::fresh(fresh);
                                fresh += 1;
                                v
                            })
                            .collect();
                        (params, Design::Omega)
                    }
                };
                let mut renames: BTreeMap<Var, Design> = BTreeMap::new();
                let binders: Vec<Var> = params
                    .into_iter()
                    .map(|y| {
                        if seen.contains(&y) {
                            let z = Var::fresh(fresh);
                            fresh += 1;
                            renames.insert(y, Design::Var(z.clone()));
                            z
                        } else {
                            y
                        }
                    })
                    .collect();
                let body = if renames.is_empty() {
                    body
                } else {
                    substitute(&body, &renames).map_err(MultiError::from)?
                };
                if actions.len() as u64 >= fuel {
                    break InteractionStatus::FuelExhausted;
                }
                actions.push(match side {
                    Side::Observed => LocatedAction::Pos {
                        address: x,
                        name,
                        args: binders.clone(),
                    },
                    Side::Counter => LocatedAction::Neg {
                        address: x,
                        name,
                        args: binders.clone(),
                    },
                });
                seen.extend(binders.iter().cloned());
                for (z, m) in binders.into_iter().zip(args) {
                    bindings.insert(z, (side, m));
                }
                side = owner;
                active = body;
            }
        }
    };
    Ok(Interaction { actions, status, steps })
}

/// Multi-design orthogonality: normalize the cut member-wise and look for
/// a daimon. Negative members normalize to sums, so only the positive part
/// can witness it.
pub fn msd_orthogonal(
    d: &MultiDesign,
    e: &MultiDesign,
    fuel: u64,
) -> Result<bool, InteractError> {
    quasi_closed_compatible(d, e)?;
    let r = cut(d, e)?;
    Ok(normalized(&r, fuel)?.positive_is_daimon())
}

// ===== visitable paths =====

/// The paths a workbench realizes: every converged transcript over its
/// generators and testers, canonicalized. The generator side is observed,
/// so the workbench polarity fixes the orientation of the paths.
#[derive(Debug, Clone)]
pub struct VisitableSet {
    pub label: String,
    pub paths: BTreeSet<Path>,
    /// Generator and tester pairs whose interaction diverged.
    pub omega_pairs: usize,
    /// Pairs that ran out of fuel; their prefixes are discarded.
    pub exhausted_pairs: usize,
}

impl VisitableSet {
    pub fn contains(&self, p: &Path) -> bool {
        self.paths.contains(&p.canonical())
    }
}

pub fn visitable(w: &Workbench, fuel: u64) -> Result<VisitableSet, InteractError> {
    let mut set = VisitableSet {
        label: w.label.clone(),
        paths: BTreeSet::new(),
        omega_pairs: 0,
        exhausted_pairs: 0,
    };
    for g in &w.generators {
        let observed = w.generator_multi(g)?;
        for t in &w.testers {
            let counter = t.as_anti(w.polarity)?;
            record(&mut set, iseq(&observed, &counter, fuel)?)?;
        }
    }
    Ok(set)
}

fn record(set: &mut VisitableSet, run: Interaction) -> Result<(), InteractError> {
    match run.status {
        InteractionStatus::Converged => {
            set.paths.insert(run.path()?.canonical());
        }
        InteractionStatus::Omega => set.omega_pairs += 1,
        InteractionStatus::FuelExhausted => set.exhausted_pairs += 1,
    }
    Ok(())
}

/// Converged transcripts over explicit pairs, observeds against counters.
fn harvest(
    label: &str,
    observeds: &[MultiDesign],
    counters: &[MultiDesign],
    fuel: u64,
) -> Result<VisitableSet, InteractError> {
    let mut set = VisitableSet {
        label: label.to_string(),
        paths: BTreeSet::new(),
        omega_pairs: 0,
        exhausted_pairs: 0,
    };
    for obs in observeds {
        for ctr in counters {
            record(&mut set, iseq(obs, ctr, fuel)?)?;
        }
    }
    Ok(set)
}

fn describe(md: &MultiDesign) -> String {
    if let Some(p) = md.positive() {
        return p.to_string();
    }
    let parts: Vec<String> = md.bindings().iter().map(|(x, n)| format!("{n} / {x}")).collect();
    format!("[{}]", parts.join(", "))
}

/// Keeps the candidates orthogonal to every fixed member. A synthesized
/// design that fails against a listed member lies outside the orthogonal
/// it was meant to inhabit, so its transcripts would prove nothing.
fn certify(
    fixed: &[MultiDesign],
    candidates: Vec<MultiDesign>,
    fuel: u64,
    notes: &mut Vec<String>,
    what: &str,
) -> Result<Vec<MultiDesign>, InteractError> {
    let mut kept = Vec::new();
    'next: for cand in candidates {
        for f in fixed {
            // which side observes is irrelevant to convergence
            let run = iseq(f, &cand, fuel)?;
            if run.status != InteractionStatus::Converged {
                notes.push(format!(
                    "{what} {} dropped: not orthogonal to {}",
                    describe(&cand),
                    describe(f)
                ));
                continue 'next;
            }
        }
        kept.push(cand);
    }
    Ok(kept)
}

// ===== path plumbing =====

/// Renames the base address `x0` of every path to `to`. Paths are
/// canonicalized first, so no binder can collide with the new address.
fn relocate(paths: &BTreeSet<Path>, to: &Var) -> Result<BTreeSet<Path>, InteractError> {
    if *to == Var::x0() {
        return Ok(paths.iter().map(|p| p.canonical()).collect());
    }
    let map = BTreeMap::from([(Var::x0(), to.clone())]);
    paths
        .iter()
        .map(|p| {
            let canon = p.canonical();
            Path::try_new(canon.seq().rename(&map)).map_err(bad_trace)
        })
        .collect()
}

fn prefixed(first: LocatedAction, tail: &Path) -> Result<Path, InteractError> {
    let mut actions = vec![first];
    actions.extend(tail.seq().actions().iter().cloned());
    let seq = AjSequence::from_actions(actions).map_err(bad_trace)?;
    Ok(Path::try_new(seq).map_err(bad_trace)?.canonical())
}

fn daimon_path() -> Path {
    let seq = AjSequence::from_actions(vec![LocatedAction::daimon()])
        .expect("a lone daimon is justified");
    Path::try_new(seq).expect("a lone daimon is a path")
}

fn show(p: &Path) -> String {
    if p.seq().is_empty() {
        return "the empty path".into();
    }
    p.to_string()
}

fn within(set: &BTreeSet<Path>, max_len: usize) -> BTreeSet<Path> {
    set.iter().filter(|p| p.seq().len() <= max_len).cloned().collect()
}

// ===== signature inference =====

fn record_name(sig: &mut Signature, name: &Name, arity: usize) -> Result<(), InteractError> {
    match sig.arity(name) {
        None => {
            sig.insert(name.clone(), arity);
            Ok(())
        }
        Some(k) if k == arity => Ok(()),
        Some(k) => Err(InteractError::SignatureConflict(name.clone(), k, arity)),
    }
}

fn scan_design(sig: &mut Signature, d: &Design) -> Result<(), InteractError> {
    match d {
        Design::Daimon | Design::Omega | Design::Var(_) => Ok(()),
        Design::App { head, name, args } => {
            record_name(sig, name, args.len())?;
            scan_design(sig, head)?;
            for a in args {
                scan_design(sig, a)?;
            }
            Ok(())
        }
        Design::Sum(branches) => {
            for (n, br) in branches {
                record_name(sig, n, br.params.len())?;
                scan_design(sig, &br.body)?;
            }
            Ok(())
        }
    }
}

fn bench_designs(w: &Workbench) -> Vec<&Design> {
    let mut out: Vec<&Design> = w.generators.iter().collect();
    for t in &w.testers {
        match t {
            Tester::Design(d) => out.push(d),
            Tester::Anti(md) => {
                out.extend(md.positive());
                out.extend(md.bindings().values());
            }
        }
    }
    out
}

/// Every name and arity occurring in the given workbenches, on top of the
/// seed. Completion designs are synthesized over this signature, so a name
/// used with two arities is a hard error rather than a wrong tester.
fn joint_signature(seed: Signature, benches: &[&Workbench]) -> Result<Signature, InteractError> {
    let mut sig = seed;
    for w in benches {
        for d in bench_designs(w) {
            scan_design(&mut sig, d)?;
        }
    }
    Ok(sig)
}

// ===== shuffle decomposition =====

/// Outcome of comparing a computed path set against a decomposition.
#[derive(Debug, Clone)]
pub struct PathSetReport {
    pub label: String,
    /// Paths the arrangement actually realizes, within the length bound.
    pub visited: BTreeSet<Path>,
    /// Paths the decomposition predicts, within the same bound.
    pub decomposed: BTreeSet<Path>,
    pub verdict: Verdict,
    pub caveat: &'static str,
    pub notes: Vec<String>,
}

/// Compares the visitable paths of a multi-place arrangement against the
/// shuffle of the per-place path sets.
///
/// Each place contributes a negative workbench: the left side arranges one
/// atomic generator per place into a single anti-design and runs it against
/// daimon, every place's own positive testers relocated to its address, and
/// one completion tester per predicted path; the right side shuffles the
/// per-place visitable sets, relocated to the place addresses. Synthesized
/// testers are certified against every arrangement before use.
pub fn check_shuffle_decomposition(
    places: &[(Var, Workbench)],
    fuel: u64,
    max_len: usize,
) -> Result<PathSetReport, InteractError> {
    let distinct: BTreeSet<&Var> = places.iter().map(|(x, _)| x).collect();
    if places.is_empty() || distinct.len() != places.len() {
        return Err(InteractError::Ortho(OrthoError::IllFormed(
            "shuffle decomposition".into(),
            "places must be nonempty and distinct".into(),
        )));
    }
    for (x, w) in places {
        if w.polarity != Polarity::Neg {
            return Err(InteractError::Ortho(OrthoError::IllFormed(
                w.label.clone(),
                format!("place {x} needs a negative workbench"),
            )));
        }
    }
    let mut notes = Vec::new();
    let label = format!(
        "[{}]",
        places
            .iter()
            .map(|(x, w)| format!("{} / {x}", w.label))
            .collect::<Vec<_>>()
            .join(", ")
    );

    let mut per_place: Vec<BTreeSet<Path>> = Vec::new();
    for (x, w) in places {
        let v = visitable(w, fuel)?;
        if v.omega_pairs > 0 || v.exhausted_pairs > 0 {
            notes.push(format!(
                "place {x}: {} diverging and {} undecided pairs",
                v.omega_pairs, v.exhausted_pairs
            ));
        }
        per_place.push(relocate(&v.paths, x)?);
    }
    let mut decomposed = per_place[0].clone();
    for set in &per_place[1..] {
        decomposed = shuffle_sets(&decomposed, set);
    }
    let decomposed = within(&decomposed, max_len);

    let pools: Vec<Vec<Design>> = places.iter().map(|(_, w)| atomic_generators(w)).collect();
    let mut observeds = Vec::new();
    for combo in cartesian(&pools) {
        observeds.push(anti_bindings(
            places.iter().map(|(x, _)| x.clone()).zip(combo),
        )?);
    }
    if pools.iter().any(|p| p.is_empty()) {
        notes.push("a place has no atomic generators; nothing to arrange".into());
        return Ok(PathSetReport {
            label,
            visited: BTreeSet::new(),
            decomposed,
            verdict: Verdict::Inconclusive,
            caveat: WORKBENCH_CAVEAT,
            notes,
        });
    }

    let bench_refs: Vec<&Workbench> = places.iter().map(|(_, w)| w).collect();
    let sig = joint_signature(Signature::new(), &bench_refs)?;
    let mut testers: BTreeSet<Design> = BTreeSet::new();
    testers.insert(Design::Daimon);
    for (x, w) in places {
        for t in single_testers(w, Polarity::Pos) {
            testers.insert(substitute1(&t, &Var::x0(), &Design::Var(x.clone())).map_err(MultiError::from)?);
        }
    }
    for p in &decomposed {
        let dual = dual_seq(p.seq());
        if dual.is_empty() {
            continue;
        }
        testers.insert(positive_design_of_sequence(&dual, &sig).map_err(bad_trace)?);
    }
    let counters: Result<Vec<MultiDesign>, MultiError> =
        testers.into_iter().map(MultiDesign::positive_only).collect();
    let counters = certify(&observeds, counters?, fuel, &mut notes, "tester")?;

    let harvested = harvest(&label, &observeds, &counters, fuel)?;
    if harvested.omega_pairs > 0 || harvested.exhausted_pairs > 0 {
        notes.push(format!(
            "arrangement: {} diverging and {} undecided pairs",
            harvested.omega_pairs, harvested.exhausted_pairs
        ));
    }
    let visited = within(&harvested.paths, max_len);

    let mut failed = false;
    for q in visited.difference(&decomposed) {
        failed = true;
        notes.push(format!("{} is visited but not in the shuffle", show(q)));
    }
    for q in decomposed.difference(&visited) {
        failed = true;
        notes.push(format!("{} is in the shuffle but not visited", show(q)));
    }
    let verdict = if failed { Verdict::Fail } else { Verdict::Pass };
    Ok(PathSetReport {
        label,
        visited,
        decomposed,
        verdict,
        caveat: WORKBENCH_CAVEAT,
        notes,
    })
}

// ===== regularity =====

/// Finite-instance regularity check: the three clauses, each with its own
/// verdict. Only a failure is definitive; a pass is relative to the listed
/// designs, the fuel, and the length bound.
#[derive(Debug, Clone)]
pub struct RegularityReport {
    pub label: String,
    /// Positive-ended paths of material generators are all visited.
    pub generator_paths: Verdict,
    /// The same clause on the dual workbench.
    pub dual_generator_paths: Verdict,
    /// Both visitable sets are closed under shuffle within the bound.
    pub shuffle_closure: Verdict,
    pub verdict: Verdict,
    /// True exactly when the verdict is a counterexample.
    pub definitive: bool,
    pub caveat: &'static str,
    pub notes: Vec<String>,
}

pub fn check_regularity(
    w: &Workbench,
    dual_w: &Workbench,
    fuel: u64,
    max_len: usize,
) -> Result<RegularityReport, InteractError> {
    let mut notes = Vec::new();
    let v = visitable(w, fuel)?;
    let vd = visitable(dual_w, fuel)?;
    let generator_paths = clause_generator_paths(w, &v, max_len, &mut notes)?;
    let dual_generator_paths = clause_generator_paths(dual_w, &vd, max_len, &mut notes)?;
    let shuffle_closure = clause_shuffle_closure(
        &[(&w.label, &v), (&dual_w.label, &vd)],
        max_len,
        &mut notes,
    );
    let verdict = combine(combine(generator_paths, dual_generator_paths), shuffle_closure);
    let definitive = verdict == Verdict::Fail;
    if !definitive {
        notes.push(
            "bounded check: a pass certifies the listed designs within the fuel and length bounds only"
                .into(),
        );
    }
    Ok(RegularityReport {
        label: format!("{} vs {}", w.label, dual_w.label),
        generator_paths,
        dual_generator_paths,
        shuffle_closure,
        verdict,
        definitive,
        caveat: WORKBENCH_CAVEAT,
        notes,
    })
}

fn clause_generator_paths(
    w: &Workbench,
    v: &VisitableSet,
    max_len: usize,
    notes: &mut Vec<String>,
) -> Result<Verdict, InteractError> {
    let mut any = false;
    let mut failed = false;
    for g in &w.generators {
        if !w.is_material(g)? {
            notes.push(format!("{}: generator {g} is not material; skipped", w.label));
            continue;
        }
        any = true;
        let views = match w.polarity {
            Polarity::Pos => DesignViews::of_positive(g),
            Polarity::Neg => DesignViews::of_negative(g),
        }
        .map_err(bad_trace)?;
        for p in paths_of(&views, max_len) {
            if p.is_positive_ended() && !v.paths.contains(&p) {
                failed = true;
                notes.push(format!(
                    "{}: positive-ended path {} of a material generator is not visited",
                    w.label,
                    show(&p)
                ));
            }
        }
    }
    Ok(if failed {
        Verdict::Fail
    } else if any {
        Verdict::Pass
    } else {
        Verdict::Inconclusive
    })
}

fn clause_shuffle_closure(
    sets: &[(&String, &VisitableSet)],
    max_len: usize,
    notes: &mut Vec<String>,
) -> Verdict {
    let mut any = false;
    let mut failed = false;
    let mut beyond = 0usize;
    for (label, v) in sets {
        for p in &v.paths {
            for q in &v.paths {
                let Some(results) = shuffle(p, q) else { continue };
                any = true;
                for r in results {
                    if r.seq().len() > max_len {
                        beyond += 1;
                        continue;
                    }
                    if !v.paths.contains(&r) {
                        failed = true;
                        notes.push(format!(
                            "{label}: the shuffle of {} and {} contains {}, which is not visited",
                            show(p),
                            show(q),
                            show(&r)
                        ));
                    }
                }
            }
        }
    }
    if beyond > 0 {
        notes.push(format!(
            "shuffle closure: {beyond} interleavings beyond the length bound were not checked"
        ));
    }
    if failed {
        Verdict::Fail
    } else if any {
        Verdict::Pass
    } else {
        Verdict::Inconclusive
    }
}

// ===== dual decomposability on paths =====

/// Verdicts for the two path-set equalities of a connective: elimination
/// side and introduction side, combined.
#[derive(Debug, Clone)]
pub struct PathDecompositionReport {
    pub label: String,
    pub elim_side: Verdict,
    pub intro_side: Verdict,
    pub verdict: Verdict,
    pub caveat: &'static str,
    pub notes: Vec<String>,
}

fn place_of(c: &Connective, x: &Var) -> Result<usize, InteractError> {
    c.bound_vars.iter().position(|z| z == x).ok_or_else(|| {
        InteractError::Conn(ConnError::IllFormed(
            c.label.clone(),
            format!("action argument {x} is not a bound variable"),
        ))
    })
}

/// Checks both path-level decomposability clauses of a connective on
/// finite workbenches: one negative and one positive workbench per place.
///
/// Elimination side: the paths visited in the behaviour generated by the
/// elimination actions must be daimon plus, for each introduction action,
/// that action prefixed onto a shuffle of its argument path sets.
/// Introduction side, dually: the paths visited in the behaviour generated
/// by the introduction actions must be empty or an elimination action
/// prefixed onto the paths of its argument arrangement. A mismatched head
/// name in a witness is reported as such, since it shows an action of one
/// family missing from the other.
pub fn check_dual_decomposability_paths(
    c: &Connective,
    neg: &[Workbench],
    pos: &[Workbench],
    fuel: u64,
    max_len: usize,
) -> Result<PathDecompositionReport, InteractError> {
    expect_benches(c, neg, Polarity::Neg)?;
    expect_benches(c, pos, Polarity::Pos)?;
    let all: Vec<&Workbench> = neg.iter().chain(pos.iter()).collect();
    let sig = joint_signature(c.signature(), &all)?;
    let mut notes = Vec::new();
    let elim_side = dd_elim(c, neg, &sig, fuel, max_len, &mut notes)?;
    let intro_side = dd_intro(c, pos, &sig, fuel, max_len, &mut notes)?;
    let verdict = combine(elim_side, intro_side);
    Ok(PathDecompositionReport {
        label: c.label.clone(),
        elim_side,
        intro_side,
        verdict,
        caveat: WORKBENCH_CAVEAT,
        notes,
    })
}

fn dd_elim(
    c: &Connective,
    neg: &[Workbench],
    sig: &Signature,
    fuel: u64,
    max_len: usize,
    notes: &mut Vec<String>,
) -> Result<Verdict, InteractError> {
    let mut place_sets: Vec<BTreeSet<Path>> = Vec::new();
    for w in neg {
        place_sets.push(visitable(w, fuel)?.paths);
    }

    // Predicted: daimon, and each introduction action prefixed onto the
    // shuffle of its relocated argument path sets.
    let mut decomposed: BTreeSet<Path> = BTreeSet::new();
    decomposed.insert(daimon_path());
    for a in &c.intro {
        let mut tails: Option<BTreeSet<Path>> = None;
        for x in &a.args {
            let set = relocate(&place_sets[place_of(c, x)?], x)?;
            tails = Some(match tails {
                None => set,
                Some(acc) => shuffle_sets(&acc, &set),
            });
        }
        let first = LocatedAction::Pos {
            address: Var::x0(),
            name: a.name.clone(),
            args: a.args.clone(),
        };
        match tails {
            None => {
                decomposed.insert(prefixed(first, &Path::empty())?);
            }
            Some(ts) => {
                for u in &ts {
                    decomposed.insert(prefixed(first.clone(), u)?);
                }
            }
        }
    }
    let decomposed = within(&decomposed, max_len);

    // Realized: daimon and every elimination application over atomic
    // generators, against the counter testers plus certified completions.
    let mut observeds = vec![MultiDesign::positive_only(Design::Daimon)?];
    let mut built_elim = c.elim.is_empty();
    for a in &c.elim {
        let pools: Vec<Vec<Design>> = a
            .args
            .iter()
            .map(|x| Ok(atomic_generators(&neg[place_of(c, x)?])))
            .collect::<Result<_, InteractError>>()?;
        for combo in cartesian(&pools) {
            built_elim = true;
            observeds.push(MultiDesign::positive_only(Design::App {
                head: Box::new(Design::Var(Var::x0())),
                name: a.name.clone(),
                args: combo,
            })?);
        }
    }
    let mut testers: BTreeSet<Design> = counter_set_elim(c, neg)?.into_iter().collect();
    for p in &decomposed {
        let dual = dual_seq(p.seq());
        if dual.is_empty() {
            continue;
        }
        let mut bound = bindings_of_negative_sequence(&dual, sig).map_err(bad_trace)?;
        match (bound.remove(&Var::x0()), bound.is_empty()) {
            (Some(t), true) => {
                testers.insert(t);
            }
            _ => notes.push(format!(
                "{}: completion of {} is not a single binding; skipped",
                c.label,
                show(p)
            )),
        }
    }
    let counters: Result<Vec<MultiDesign>, MultiError> = testers
        .into_iter()
        .map(|t| MultiDesign::binding(Var::x0(), t))
        .collect();
    let counters = certify(&observeds, counters?, fuel, notes, "elimination-side tester")?;
    if !built_elim {
        notes.push(format!(
            "{}: no elimination application could be built from the listed generators",
            c.label
        ));
        return Ok(Verdict::Inconclusive);
    }
    if counters.is_empty() {
        notes.push(format!("{}: no elimination-side tester survived", c.label));
        return Ok(Verdict::Inconclusive);
    }
    let visited = within(&harvest(&c.label, &observeds, &counters, fuel)?.paths, max_len);

    let intro_names: BTreeSet<&Name> = c.intro.iter().map(|a| &a.name).collect();
    let elim_names: BTreeSet<&Name> = c.elim.iter().map(|a| &a.name).collect();
    let mut failed = false;
    for q in visited.difference(&decomposed) {
        failed = true;
        match q.seq().actions().first().and_then(|a| a.name()) {
            Some(n) if !intro_names.contains(n) => notes.push(format!(
                "{}: {} is visited on the elimination side, but {n} is not an introduction name",
                c.label,
                show(q)
            )),
            _ => notes.push(format!(
                "{}: {} is visited on the elimination side but not predicted",
                c.label,
                show(q)
            )),
        }
    }
    for q in decomposed.difference(&visited) {
        failed = true;
        match q.seq().actions().first().and_then(|a| a.name()) {
            Some(n) if !elim_names.contains(n) => notes.push(format!(
                "{}: the decomposition predicts {}, but {n} is not an elimination name, so no listed application realizes it",
                c.label,
                show(q)
            )),
            _ => notes.push(format!(
                "{}: the decomposition predicts {}, which is not visited",
                c.label,
                show(q)
            )),
        }
    }
    Ok(if failed { Verdict::Fail } else { Verdict::Pass })
}

fn dd_intro(
    c: &Connective,
    pos: &[Workbench],
    sig: &Signature,
    fuel: u64,
    max_len: usize,
    notes: &mut Vec<String>,
) -> Result<Verdict, InteractError> {
    // Predicted: the empty path, and each elimination action prefixed onto
    // the paths of its argument arrangement: probes from the places'
    // generators observed against one tester per argument place.
    let mut decomposed: BTreeSet<Path> = BTreeSet::new();
    decomposed.insert(Path::empty());
    let mut incomplete = false;
    for a in &c.elim {
        let pools: Vec<Vec<Design>> = a
            .args
            .iter()
            .map(|x| Ok(single_testers(&pos[place_of(c, x)?], Polarity::Neg)))
            .collect::<Result<_, InteractError>>()?;
        let mut arrangements = Vec::new();
        for combo in cartesian(&pools) {
            arrangements.push(anti_bindings(a.args.iter().cloned().zip(combo))?);
        }
        if pools.iter().any(|p| p.is_empty()) {
            notes.push(format!(
                "{}: an argument place of {} has no single testers; its paths are unknown",
                c.label, a.name
            ));
            incomplete = true;
            continue;
        }
        let mut probes: BTreeSet<Design> = BTreeSet::new();
        probes.insert(Design::Daimon);
        for x in &a.args {
            for g in atomic_generators(&pos[place_of(c, x)?]) {
                probes.insert(
                    substitute1(&g, &Var::x0(), &Design::Var(x.clone())).map_err(MultiError::from)?,
                );
            }
        }
        let inner_obs: Result<Vec<MultiDesign>, MultiError> =
            probes.into_iter().map(MultiDesign::positive_only).collect();
        let inner = harvest(&format!("{} {}", c.label, a.name), &inner_obs?, &arrangements, fuel)?;
        if inner.omega_pairs > 0 || inner.exhausted_pairs > 0 {
            notes.push(format!(
                "{} {}: {} diverging and {} undecided inner pairs",
                c.label, a.name, inner.omega_pairs, inner.exhausted_pairs
            ));
        }
        let first = LocatedAction::Neg {
            address: Var::x0(),
            name: a.name.clone(),
            args: a.args.clone(),
        };
        for u in &inner.paths {
            decomposed.insert(prefixed(first.clone(), u)?);
        }
    }
    let decomposed = within(&decomposed, max_len);

    // Realized: the sum answering every introduction action with daimon,
    // plus one realizer per predicted path, certified against the counter
    // testers; run against daimon, the counter set, and completions.
    let mut gens: BTreeSet<Design> = BTreeSet::new();
    gens.insert(Design::Sum(
        c.intro
            .iter()
            .map(|a| (a.name.clone(), Branch::new(a.args.clone(), Design::Daimon)))
            .collect(),
    ));
    for p in &decomposed {
        if p.seq().is_empty() {
            continue;
        }
        let mut bound = bindings_of_negative_sequence(p.seq(), sig).map_err(bad_trace)?;
        match (bound.remove(&Var::x0()), bound.is_empty()) {
            (Some(g), true) => {
                gens.insert(g);
            }
            _ => notes.push(format!(
                "{}: realizer of {} is not a single binding; skipped",
                c.label,
                show(p)
            )),
        }
    }
    let observeds: Result<Vec<MultiDesign>, MultiError> = gens
        .into_iter()
        .map(|g| MultiDesign::binding(Var::x0(), g))
        .collect();
    let base_testers = counter_set_intro(c, pos)?;
    let base_counters: Result<Vec<MultiDesign>, MultiError> = base_testers
        .iter()
        .cloned()
        .map(MultiDesign::positive_only)
        .collect();
    let base_counters = base_counters?;
    let observeds = certify(&base_counters, observeds?, fuel, notes, "introduction-side realizer")?;

    let mut testers: BTreeSet<Design> = base_testers.into_iter().collect();
    testers.insert(Design::Daimon);
    for p in &decomposed {
        let dual = dual_seq(p.seq());
        if dual.is_empty() {
            continue;
        }
        testers.insert(positive_design_of_sequence(&dual, sig).map_err(bad_trace)?);
    }
    let counters: Result<Vec<MultiDesign>, MultiError> =
        testers.into_iter().map(MultiDesign::positive_only).collect();
    let counters = certify(&observeds, counters?, fuel, notes, "introduction-side tester")?;
    if observeds.is_empty() || counters.is_empty() {
        notes.push(format!(
            "{}: no certified introduction-side members to compare",
            c.label
        ));
        return Ok(Verdict::Inconclusive);
    }
    let visited = within(&harvest(&c.label, &observeds, &counters, fuel)?.paths, max_len);

    let intro_names: BTreeSet<&Name> = c.intro.iter().map(|a| &a.name).collect();
    let elim_names: BTreeSet<&Name> = c.elim.iter().map(|a| &a.name).collect();
    let mut failed = false;
    for q in visited.difference(&decomposed) {
        failed = true;
        match q.seq().actions().first().and_then(|a| a.name()) {
            Some(n) if !elim_names.contains(n) => notes.push(format!(
                "{}: {} is visited on the introduction side, but {n} is not an elimination name",
                c.label,
                show(q)
            )),
            _ => notes.push(format!(
                "{}: {} is visited on the introduction side but not predicted",
                c.label,
                show(q)
            )),
        }
    }
    for q in decomposed.difference(&visited) {
        failed = true;
        match q.seq().actions().first().and_then(|a| a.name()) {
            Some(n) if !intro_names.contains(n) => notes.push(format!(
                "{}: the decomposition predicts {}, but {n} is not an introduction name, so no introduction member answers it",
                c.label,
                show(q)
            )),
            _ => notes.push(format!(
                "{}: the decomposition predicts {}, which is not visited",
                c.label,
                show(q)
            )),
        }
    }
    if failed {
        Ok(Verdict::Fail)
    } else if incomplete {
        Ok(Verdict::Inconclusive)
    } else {
        Ok(Verdict::Pass)
    }
}

// ===== associativity =====

/// Disjoint union of two multi-designs sharing no places.
fn multi_union(a: &MultiDesign, b: &MultiDesign) -> Result<MultiDesign, InteractError> {
    let positive = match (a.positive(), b.positive()) {
        (Some(_), Some(_)) => {
            return Err(InteractError::Multi(MultiError::Incompatible(
                "two positive parts in a union".into(),
            )));
        }
        (p, q) => p.or(q).cloned(),
    };
    let mut bindings = a.bindings().clone();
    for (x, n) in b.bindings() {
        if bindings.insert(x.clone(), n.clone()).is_some() {
            return Err(InteractError::Multi(MultiError::PlaceOverlap(x.clone())));
        }
    }
    Ok(MultiDesign::new(positive, bindings)?)
}

/// Interacting against a normalized plug equals interacting against the
/// union and keeping the actions visible from `e`'s side: the transcript
/// `<e <- norm(cut(f, d))>` must match `<e u f <- d>` restricted to the
/// views of `e`, up to renaming of bound addresses. Only converged runs
/// are compared; anything else returns false.
pub fn associativity_for_paths(
    e: &MultiDesign,
    f: &MultiDesign,
    d: &MultiDesign,
    fuel: u64,
) -> Result<bool, InteractError> {
    let plugged = normalized(&cut(f, d)?, fuel)?;
    let lhs = iseq(e, &plugged, fuel)?;
    let union = multi_union(e, f)?;
    let rhs = iseq(&union, d, fuel)?;
    if lhs.status != InteractionStatus::Converged || rhs.status != InteractionStatus::Converged {
        return Ok(false);
    }
    let pairs: Vec<(Var, Design)> =
        e.bindings().iter().map(|(x, n)| (x.clone(), n.clone())).collect();
    let views = DesignViews::build(e.positive(), &pairs).map_err(bad_trace)?;
    let restricted = restrict_to_views(&rhs.sequence()?, &views).map_err(bad_trace)?;
    Ok(alpha_eq_seq(&lhs.sequence()?, &restricted))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conn;
    use crate::fixtures;
    use crate::ortho;
    use crate::path::is_path_of;

    const FUEL: u64 = 10_000;

    fn pos_multi(p: Design) -> MultiDesign {
        MultiDesign::positive_only(p).unwrap()
    }

    fn neg_multi(n: Design) -> MultiDesign {
        MultiDesign::binding(Var::x0(), n).unwrap()
    }

    fn path_of(actions: Vec<LocatedAction>) -> Path {
        Path::try_new(AjSequence::from_actions(actions).unwrap()).unwrap()
    }

    fn golden_forward() -> Interaction {
        iseq(&pos_multi(fixtures::golden_p()), &neg_multi(fixtures::golden_n()), FUEL).unwrap()
    }

    #[test]
    fn golden_interaction_replays_the_frozen_trace() {
        let run = golden_forward();
        assert_eq!(run.actions, fixtures::golden_path_actions());
        assert_eq!(run.status, InteractionStatus::Converged);
        assert_eq!(run.steps, 5);
    }

    #[test]
    fn swapping_the_arguments_dualizes_the_transcript() {
        let fwd = golden_forward();
        let rev = iseq(&neg_multi(fixtures::golden_n()), &pos_multi(fixtures::golden_p()), FUEL).unwrap();
        assert_eq!(rev.status, InteractionStatus::Converged);
        // the reverse reading ends with the observed side's daimon
        assert_eq!(rev.actions.len(), 6);
        assert_eq!(rev.actions.last(), Some(&LocatedAction::daimon()));
        let dual = dual_seq(&fwd.sequence().unwrap());
        assert_eq!(rev.actions, dual.actions().to_vec());
    }

    #[test]
    fn daimon_interactions_are_immediate() {
        // an observed daimon announces itself
        let run = iseq(&pos_multi(Design::Daimon), &neg_multi(fixtures::design_nb()), FUEL).unwrap();
        assert_eq!(run.actions, vec![LocatedAction::daimon()]);
        assert_eq!(run.status, InteractionStatus::Converged);
        // a counter daimon converges silently
        let run = iseq(&neg_multi(fixtures::design_nb()), &pos_multi(Design::Daimon), FUEL).unwrap();
        assert!(run.actions.is_empty());
        assert_eq!(run.status, InteractionStatus::Converged);
    }

    #[test]
    fn a_missing_branch_records_the_action_then_diverges() {
        let probe = Design::app(Design::var("x0"), "c", vec![]);
        let run = iseq(&pos_multi(probe), &neg_multi(fixtures::design_nb()), FUEL).unwrap();
        assert_eq!(run.actions, vec![LocatedAction::pos("x0", "c", [])]);
        assert_eq!(run.status, InteractionStatus::Omega);
    }

    #[test]
    fn fuel_cuts_the_transcript_to_a_prefix() {
        let run = iseq(&pos_multi(fixtures::golden_p()), &neg_multi(fixtures::golden_n()), 2).unwrap();
        assert_eq!(run.status, InteractionStatus::FuelExhausted);
        assert_eq!(run.actions, fixtures::golden_path_actions()[..2].to_vec());
    }

    #[test]
    fn non_standard_members_are_rejected() {
        let err = iseq(&pos_multi(Design::Omega), &neg_multi(fixtures::design_nb()), FUEL);
        assert!(matches!(err, Err(InteractError::NotStandard(_))));
    }

    #[test]
    fn duality_and_prefixes_hold_across_the_bench() {
        let pairs = [
            (fixtures::design_nb(), fixtures::design_pb()),
            (fixtures::design_nb(), Design::Daimon),
            (fixtures::design_nb_daimon(), fixtures::design_pb()),
            (fixtures::design_ne(), fixtures::design_pe()),
            (fixtures::golden_n(), fixtures::golden_p()),
        ];
        for (n, p) in pairs {
            let d = neg_multi(n.clone());
            let e = pos_multi(p.clone());
            let fwd = iseq(&d, &e, FUEL).unwrap();
            let rev = iseq(&e, &d, FUEL).unwrap();
            assert_eq!(fwd.status, InteractionStatus::Converged);
            assert_eq!(rev.status, InteractionStatus::Converged);
            let fs = fwd.sequence().unwrap();
            assert_eq!(rev.actions, dual_seq(&fs).actions().to_vec());
            // every nonempty prefix of the transcript is a path of the
            // observed side
            let views = DesignViews::of_negative(&n).unwrap();
            for k in 1..=fs.len() {
                assert!(is_path_of(&fs.prefix(k), &views), "prefix {k} of {fs}");
            }
            let rs = rev.sequence().unwrap();
            let views = DesignViews::of_positive(&p).unwrap();
            for k in 1..=rs.len() {
                assert!(is_path_of(&rs.prefix(k), &views), "prefix {k} of {rs}");
            }
        }
    }

    #[test]
    fn msd_orthogonality_matches_the_engine_and_the_cut() {
        let cases = [
            (pos_multi(fixtures::golden_p()), neg_multi(fixtures::golden_n())),
            (pos_multi(Design::Daimon), neg_multi(fixtures::design_nb())),
            (pos_multi(fixtures::design_pb()), neg_multi(fixtures::design_nb())),
            (pos_multi(fixtures::design_pb()), neg_multi(fixtures::design_ne())),
        ];
        for (d, e) in cases {
            let by_cut = msd_orthogonal(&d, &e, FUEL).unwrap();
            let by_engine = iseq(&d, &e, FUEL).unwrap().is_orthogonal();
            let by_ortho = ortho::orthogonal_multi(&d, &e, FUEL).unwrap();
            assert_eq!(by_cut, by_engine, "{} vs {}", describe(&d), describe(&e));
            assert_eq!(by_cut, by_ortho, "{} vs {}", describe(&d), describe(&e));
        }
    }

    #[test]
    fn visitable_of_the_golden_singleton_is_the_golden_path() {
        let w = Workbench {
            polarity: Polarity::Pos,
            generators: vec![fixtures::golden_p()],
            testers: vec![Tester::Design(fixtures::golden_n())],
            label: "golden-singleton".into(),
        };
        let v = visitable(&w, FUEL).unwrap();
        let golden = path_of(fixtures::golden_path_actions()).canonical();
        assert_eq!(v.paths, BTreeSet::from([golden]));
        assert_eq!((v.omega_pairs, v.exhausted_pairs), (0, 0));
    }

    #[test]
    fn visitable_of_a_daimon_generator_is_the_daimon_path() {
        let w = Workbench {
            polarity: Polarity::Pos,
            generators: vec![Design::Daimon],
            testers: vec![Tester::Design(fixtures::golden_n())],
            label: "daimon".into(),
        };
        let v = visitable(&w, FUEL).unwrap();
        assert_eq!(v.paths, BTreeSet::from([daimon_path()]));
    }

    #[test]
    fn split_testers_reach_distinct_paths_through_a_shared_first_action() {
        // both testers answer `a`, then probe different arguments
        let left = Design::sum1(
            "a",
            vec!["y1", "y2"],
            Design::app(Design::var("y1"), "b", vec![Design::sum1("c", vec![], Design::Daimon)]),
        );
        let right = Design::sum1(
            "a",
            vec!["y1", "y2"],
            Design::app(Design::var("y2"), "b", vec![Design::sum1("c", vec![], Design::Daimon)]),
        );
        let w = Workbench {
            polarity: Polarity::Pos,
            generators: vec![fixtures::golden_p()],
            testers: vec![Tester::Design(left), Tester::Design(right)],
            label: "split".into(),
        };
        let v = visitable(&w, FUEL).unwrap();
        assert_eq!(v.paths.len(), 2);
        let firsts: BTreeSet<_> = v
            .paths
            .iter()
            .map(|p| p.seq().actions().first().cloned().unwrap())
            .collect();
        assert_eq!(firsts.len(), 1, "both paths open with the same action");
    }

    #[test]
    fn visitable_of_the_small_benches_matches_the_hand_count() {
        let v = visitable(&fixtures::bench_neg_b(), FUEL).unwrap();
        let expected = BTreeSet::from([
            Path::empty(),
            path_of(vec![LocatedAction::neg("x0", "b", ["v0"]), LocatedAction::daimon()]),
            path_of(vec![
                LocatedAction::neg("x0", "b", ["v0"]),
                LocatedAction::pos("v0", "c", []),
            ]),
        ]);
        assert_eq!(v.paths, expected);
    }

    #[test]
    fn shuffle_decomposition_holds_on_one_and_two_places() {
        let one = check_shuffle_decomposition(
            &[(Var::new("y1"), fixtures::bench_neg_b())],
            FUEL,
            8,
        )
        .unwrap();
        assert_eq!(one.verdict, Verdict::Pass, "notes: {:?}", one.notes);
        assert_eq!(one.visited.len(), 3);

        let two = check_shuffle_decomposition(
            &[
                (Var::new("y1"), fixtures::bench_neg_b()),
                (Var::new("y2"), fixtures::bench_neg_e()),
            ],
            FUEL,
            8,
        )
        .unwrap();
        assert_eq!(two.verdict, Verdict::Pass, "notes: {:?}", two.notes);
        let b = |args: [&'static str; 1]| LocatedAction::neg("y1", "b", args);
        let e = |args: [&'static str; 1]| LocatedAction::neg("y2", "e", args);
        let expected = BTreeSet::from([
            Path::empty(),
            path_of(vec![b(["v0"]), LocatedAction::daimon()]),
            path_of(vec![b(["v0"]), LocatedAction::pos("v0", "c", [])]),
            path_of(vec![e(["v0"]), LocatedAction::daimon()]),
            path_of(vec![e(["v0"]), LocatedAction::pos("v0", "d", [])]),
            path_of(vec![
                b(["v0"]),
                LocatedAction::pos("v0", "c", []),
                e(["v1"]),
                LocatedAction::daimon(),
            ]),
            path_of(vec![
                e(["v0"]),
                LocatedAction::pos("v0", "d", []),
                b(["v1"]),
                LocatedAction::daimon(),
            ]),
            path_of(vec![
                b(["v0"]),
                LocatedAction::pos("v0", "c", []),
                e(["v1"]),
                LocatedAction::pos("v1", "d", []),
            ]),
            path_of(vec![
                e(["v0"]),
                LocatedAction::pos("v0", "d", []),
                b(["v1"]),
                LocatedAction::pos("v1", "c", []),
            ]),
        ]);
        assert_eq!(two.visited, expected);
        assert_eq!(two.decomposed, expected);
    }

    // --- regularity fixtures around the golden design ---

    fn probe(address: &str) -> Design {
        Design::app(Design::var(address), "b", vec![Design::sum1("c", vec![], Design::Daimon)])
    }

    fn answer_daimon() -> Design {
        Design::sum1("a", vec!["y1", "y2"], Design::Daimon)
    }

    fn answer_first() -> Design {
        Design::sum1("a", vec!["y1", "y2"], probe("y1"))
    }

    fn answer_second() -> Design {
        Design::sum1("a", vec!["y1", "y2"], probe("y2"))
    }

    fn answer_both_reversed() -> Design {
        let inner = Design::sum1("c", vec![], probe("y1"));
        let body = Design::app(Design::var("y2"), "b", vec![inner]);
        Design::sum1("a", vec!["y1", "y2"], body)
    }

    fn arg_daimon() -> Design {
        Design::sum1("b", vec!["x1"], Design::Daimon)
    }

    fn arg_call() -> Design {
        Design::sum1("b", vec!["x1"], Design::app(Design::var("x1"), "c", vec![]))
    }

    fn tester_halves() -> Design {
        Design::app(Design::var("x0"), "a", vec![arg_daimon(), arg_daimon()])
    }

    fn tester_then_second() -> Design {
        Design::app(Design::var("x0"), "a", vec![arg_daimon(), arg_call()])
    }

    fn tester_then_first() -> Design {
        Design::app(Design::var("x0"), "a", vec![arg_call(), arg_daimon()])
    }

    fn tester_deep() -> Design {
        let dig = Design::sum1(
            "b",
            vec!["x2"],
            Design::app(
                Design::var("x2"),
                "a",
                vec![Design::empty_sum(), Design::empty_sum()],
            ),
        );
        Design::app(Design::var("x0"), "a", vec![arg_call(), dig])
    }

    fn regular_bench() -> (Workbench, Workbench) {
        let w = Workbench {
            polarity: Polarity::Pos,
            generators: vec![fixtures::golden_p()],
            testers: vec![
                Tester::Design(fixtures::golden_n()),
                Tester::Design(answer_daimon()),
                Tester::Design(answer_first()),
                Tester::Design(answer_second()),
                Tester::Design(answer_both_reversed()),
            ],
            label: "golden-pos-rich".into(),
        };
        let dual = Workbench {
            polarity: Polarity::Neg,
            generators: vec![
                answer_daimon(),
                answer_first(),
                answer_second(),
                answer_both_reversed(),
                fixtures::golden_n(),
            ],
            testers: vec![
                Tester::Design(fixtures::golden_p()),
                Tester::Design(tester_halves()),
                Tester::Design(tester_then_second()),
                Tester::Design(tester_then_first()),
                Tester::Design(tester_deep()),
            ],
            label: "golden-neg-rich".into(),
        };
        (w, dual)
    }

    #[test]
    fn regularity_passes_on_the_saturated_golden_bench() {
        let (w, dual) = regular_bench();
        let report = check_regularity(&w, &dual, FUEL, 6).unwrap();
        assert_eq!(report.generator_paths, Verdict::Pass, "notes: {:?}", report.notes);
        assert_eq!(report.dual_generator_paths, Verdict::Pass, "notes: {:?}", report.notes);
        assert_eq!(report.shuffle_closure, Verdict::Pass, "notes: {:?}", report.notes);
        assert_eq!(report.verdict, Verdict::Pass);
        assert!(!report.definitive);
    }

    #[test]
    fn regularity_fails_once_an_interleaving_loses_its_tester() {
        let (mut w, dual) = regular_bench();
        // drop the tester that realizes the reversed interleaving
        w.testers.retain(|t| !matches!(t, Tester::Design(d) if *d == answer_both_reversed()));
        let report = check_regularity(&w, &dual, FUEL, 6).unwrap();
        assert_eq!(report.generator_paths, Verdict::Fail);
        assert_eq!(report.shuffle_closure, Verdict::Fail);
        assert_eq!(report.verdict, Verdict::Fail);
        assert!(report.definitive);
        assert!(report.notes.iter().any(|n| n.contains("not visited")));
    }

    #[test]
    fn regularity_is_trivial_on_the_daimon_pair() {
        let w = Workbench {
            polarity: Polarity::Pos,
            generators: vec![Design::Daimon],
            testers: vec![Tester::Design(Design::empty_sum())],
            label: "daimon".into(),
        };
        let dual = Workbench {
            polarity: Polarity::Neg,
            generators: vec![Design::empty_sum()],
            testers: vec![Tester::Design(Design::Daimon)],
            label: "empty-sum".into(),
        };
        let report = check_regularity(&w, &dual, FUEL, 6).unwrap();
        assert_eq!(report.verdict, Verdict::Pass);
    }

    // --- dual decomposability on paths ---

    #[test]
    fn paths_of_the_with_connective_decompose_on_both_sides() {
        let report = check_dual_decomposability_paths(
            &conn::with2(),
            &[fixtures::bench_neg_b(), fixtures::bench_neg_e()],
            &[fixtures::bench_pos_b(), fixtures::bench_pos_e()],
            FUEL,
            8,
        )
        .unwrap();
        assert_eq!(report.elim_side, Verdict::Pass, "notes: {:?}", report.notes);
        assert_eq!(report.intro_side, Verdict::Pass, "notes: {:?}", report.notes);
        assert_eq!(report.verdict, Verdict::Pass);
    }

    #[test]
    fn the_overlapping_connective_fails_on_both_sides_with_witnesses() {
        let report = check_dual_decomposability_paths(
            &conn::alpha0_2(),
            &[fixtures::bench_neg_e(), fixtures::bench_neg_e()],
            &[fixtures::bench_pos_e(), fixtures::bench_pos_e()],
            FUEL,
            8,
        )
        .unwrap();
        assert_eq!(report.elim_side, Verdict::Fail);
        assert_eq!(report.intro_side, Verdict::Fail);
        assert!(
            report.notes.iter().any(|n| n.contains("a is not an elimination name")),
            "notes: {:?}",
            report.notes
        );
        assert!(
            report.notes.iter().any(|n| n.contains("c is not an introduction name")),
            "notes: {:?}",
            report.notes
        );
    }

    #[test]
    fn the_entangled_connective_fails_on_both_sides() {
        let benches_neg: Vec<Workbench> = (0..3)
            .map(|i| fixtures::bench_trivial_neg(&format!("triv-{i}")))
            .collect();
        let benches_pos: Vec<Workbench> = benches_neg
            .iter()
            .map(|w| w.dual_swap().expect("single-design testers swap"))
            .collect();
        let report = check_dual_decomposability_paths(
            &conn::gamma3(),
            &benches_neg,
            &benches_pos,
            FUEL,
            8,
        )
        .unwrap();
        assert_eq!(report.elim_side, Verdict::Fail, "notes: {:?}", report.notes);
        assert_eq!(report.intro_side, Verdict::Fail, "notes: {:?}", report.notes);
    }

    #[test]
    fn an_empty_generator_bench_is_inconclusive() {
        let empty = |label: &str| Workbench {
            polarity: Polarity::Neg,
            generators: vec![],
            testers: vec![Tester::Design(Design::Daimon)],
            label: label.into(),
        };
        let report = check_dual_decomposability_paths(
            &conn::with2(),
            &[empty("e1"), empty("e2")],
            &[fixtures::bench_pos_b(), fixtures::bench_pos_e()],
            FUEL,
            8,
        )
        .unwrap();
        assert_eq!(report.elim_side, Verdict::Inconclusive);
        assert_eq!(report.verdict, Verdict::Inconclusive);
    }

    // --- associativity ---

    #[test]
    fn plugging_then_interacting_matches_the_restricted_union() {
        // depth two: P probes x0, the continuation probes a plugged place
        let p = Design::app(
            Design::var("x0"),
            "b",
            vec![Design::sum1(
                "c",
                vec![],
                Design::app(Design::var("z"), "e", vec![Design::sum1("d", vec![], Design::Daimon)]),
            )],
        );
        let e = neg_multi(fixtures::design_nb());
        let f = MultiDesign::binding(Var::new("z"), fixtures::design_ne()).unwrap();
        let d = pos_multi(p);
        assert_eq!(associativity_for_paths(&e, &f, &d, FUEL), Ok(true));

        // depth three, with a binder collision resolved mid-interaction
        let p2 = Design::app(
            Design::var("x0"),
            "a",
            vec![
                fixtures::design_nb(),
                Design::sum1(
                    "b",
                    vec!["x2"],
                    Design::app(Design::var("w"), "e", vec![Design::sum1("d", vec![], Design::Daimon)]),
                ),
            ],
        );
        let e2 = neg_multi(fixtures::golden_n());
        let f2 = MultiDesign::binding(Var::new("w"), fixtures::design_ne()).unwrap();
        let d2 = pos_multi(p2);
        assert_eq!(associativity_for_paths(&e2, &f2, &d2, FUEL), Ok(true));
    }
}
