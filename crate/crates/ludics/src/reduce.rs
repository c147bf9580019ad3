//! Cut reduction and normalization.
//!
//! The only reduction rule fires on a cut `{.., a(xs) => P, ..}|a<Ns>`,
//! rewriting it to `P[Ns/xs]`; a missing branch rewrites to `Omega`.
//! Every loop below is fuel-bounded: fuel counts rule applications, and
//! running out is a distinct outcome, never conflated with divergence.
//! Closed positive intermediates are additionally fingerprinted so that
//! cyclic cuts are reported as divergence instead of burning fuel.

use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use crate::term::{substitute, Branch, Design, Var};

pub const DEFAULT_FUEL: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("fuel exhausted after {steps} reduction steps")]
pub struct FuelExhausted {
    pub steps: u64,
}

/// Result of evaluating a design.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalOutcome {
    /// Reached a form with no cut left (for normalization, none anywhere).
    Converged(Design),
    /// Proven divergence: the design evaluates to `Omega`.
    Omega,
    FuelExhausted { steps: u64 },
}

impl EvalOutcome {
    pub fn converged(&self) -> Option<&Design> {
        match self {
            EvalOutcome::Converged(d) => Some(d),
            _ => None,
        }
    }
}

/// One reduction step at the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepResult {
    Reduced(Design),
    /// Daimon, a variable-headed application, or anything non-positive.
    NotRedex,
}

/// Applies the cut rule once at the root, if the root is a cut.
pub fn step(p: &Design) -> StepResult {
    let Design::App { head, name, args } = p else {
        return StepResult::NotRedex;
    };
    let Design::Sum(branches) = &**head else {
        return StepResult::NotRedex;
    };
    match branches.get(name) {
        None => StepResult::Reduced(Design::Omega),
        Some(Branch { params, body }) => {
            let subs: BTreeMap<Var, Design> = params
                .iter()
                .cloned()
                .zip(args.iter().cloned())
                .collect();
            // Replacements are argument positions, hence negative; cannot fail.
            StepResult::Reduced(substitute(body, &subs).expect("negative arguments"))
        }
    }
}

/// Iterates `step` at the root until a non-cut appears. Negative designs are
/// returned unchanged. A cycle of closed positive states is divergence.
pub fn head_normal_form(t: &Design, fuel: u64) -> EvalOutcome {
    let mut used = 0;
    match hnf_budgeted(t, fuel, &mut used) {
        Ok(out) => out,
        Err(FuelExhausted { steps }) => EvalOutcome::FuelExhausted { steps },
    }
}

fn hnf_budgeted(t: &Design, fuel: u64, used: &mut u64) -> Result<EvalOutcome, FuelExhausted> {
    if t.is_negative() {
        return Ok(EvalOutcome::Converged(t.clone()));
    }
    let mut current = t.clone();
    let mut seen: HashSet<Design> = HashSet::new();
    loop {
        match step(&current) {
            StepResult::NotRedex => {
                return Ok(if current == Design::Omega {
                    EvalOutcome::Omega
                } else {
                    EvalOutcome::Converged(current)
                });
            }
            StepResult::Reduced(next) => {
                if *used >= fuel {
                    return Err(FuelExhausted { steps: *used });
                }
                *used += 1;
                current = next;
                if current.free_vars().is_empty() && !seen.insert(current.canonicalize()) {
                    return Ok(EvalOutcome::Omega);
                }
            }
        }
    }
}

/// Full normal form: hereditarily cut-free. Sums drop branches whose bodies
/// diverge; a converged result therefore contains no `Omega` anywhere.
pub fn normalize(t: &Design, fuel: u64) -> EvalOutcome {
    let mut used = 0;
    match norm_budgeted(t, fuel, &mut used) {
        Ok(Some(d)) => EvalOutcome::Converged(d),
        Ok(None) => EvalOutcome::Omega,
        Err(FuelExhausted { steps }) => EvalOutcome::FuelExhausted { steps },
    }
}

/// `None` encodes an `Omega` result at this position.
fn norm_budgeted(t: &Design, fuel: u64, used: &mut u64) -> Result<Option<Design>, FuelExhausted> {
    match t {
        Design::Daimon => Ok(Some(Design::Daimon)),
        Design::Omega => Ok(None),
        Design::Var(_) => Ok(Some(t.clone())),
        Design::Sum(branches) => {
            let mut out = BTreeMap::new();
            for (name, br) in branches {
                match norm_budgeted(&br.body, fuel, used)? {
                    // Diverging branch: drop it from the sparse sum.
                    None => {}
                    Some(body) => {
                        out.insert(name.clone(), Branch::new(br.params.clone(), body));
                    }
                }
            }
            Ok(Some(Design::Sum(out)))
        }
        Design::App { .. } => match hnf_budgeted(t, fuel, used)? {
            EvalOutcome::Omega => Ok(None),
            EvalOutcome::FuelExhausted { steps } => Err(FuelExhausted { steps }),
            EvalOutcome::Converged(head_form) => match head_form {
                Design::Daimon => Ok(Some(Design::Daimon)),
                Design::App { head, name, args } => {
                    debug_assert!(matches!(*head, Design::Var(_)));
                    let mut norm_args = Vec::with_capacity(args.len());
                    for a in &args {
                        match norm_budgeted(a, fuel, used)? {
                            Some(d) => norm_args.push(d),
                            // Negative designs never normalize to Omega.
                            None => unreachable!("negative normal form"),
                        }
                    }
                    Ok(Some(Design::App { head, name, args: norm_args }))
                }
                other => Ok(Some(other)),
            },
        },
    }
}

/// Does the positive design converge to daimon? `Err` means out of fuel.
pub fn converges_to_daimon(p: &Design, fuel: u64) -> Result<bool, FuelExhausted> {
    let mut used = 0;
    match hnf_budgeted(p, fuel, &mut used)? {
        EvalOutcome::Converged(Design::Daimon) => Ok(true),
        _ => Ok(false),
    }
}

/// Normal forms of a whole binding map (used by multi-design cuts).
pub fn normalize_bindings(
    bindings: &BTreeMap<Var, Design>,
    fuel: u64,
) -> Result<Option<BTreeMap<Var, Design>>, FuelExhausted> {
    let mut out = BTreeMap::new();
    for (x, n) in bindings {
        match normalize(n, fuel) {
            EvalOutcome::Converged(d) => {
                out.insert(x.clone(), d);
            }
            EvalOutcome::Omega => return Ok(None),
            EvalOutcome::FuelExhausted { steps } => return Err(FuelExhausted { steps }),
        }
    }
    Ok(Some(out))
}
