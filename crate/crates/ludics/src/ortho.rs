//! Orthogonality and finite workbenches for behaviours.
//!
//! A positive design passes a test `[ns/xs]` when plugging the bindings in
//! yields a closed design converging to daimon; a negative design passes
//! `[p, ns/xs]` when it converges against `p` after its own places are
//! served. Both are the quasi-closed multi-design cut followed by
//! evaluation, so this module builds directly on [`crate::multi`] and
//! [`crate::reduce`].
//!
//! Behaviours are closed under bi-orthogonality and almost always infinite;
//! the machine-checkable stand-in is a workbench: finitely many generators
//! of one polarity and finitely many testers for them. Every verdict a
//! workbench produces is stamped with a caveat that it speaks about the
//! listed designs only. The incarnation of a generator is the meet of the
//! generators stably below it, the part of the design the testers can
//! actually visit.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::multi::{cut, quasi_closed_compatible, MultiDesign, MultiError};
use crate::reduce;
use crate::term::{alpha_eq, classify, intersect, is_atomic, stable_leq, Design, Polarity, Var};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum OrthoError {
    #[error(transparent)]
    Multi(#[from] MultiError),
    #[error("fuel exhausted after {0} steps")]
    Fuel(u64),
    #[error("cut produced no positive part")]
    NoPositivePart,
    #[error("workbench {0:?} is ill-formed: {1}")]
    IllFormed(String, String),
    #[error("order comparison failed: {0}")]
    Order(String),
}

/// Generalized orthogonality: quasi-closed compatible multi-designs whose
/// cut converges to daimon.
pub fn orthogonal_multi(
    d: &MultiDesign,
    e: &MultiDesign,
    fuel: u64,
) -> Result<bool, OrthoError> {
    quasi_closed_compatible(d, e)?;
    let r = cut(d, e)?;
    let Some(p) = r.positive() else {
        return Err(OrthoError::NoPositivePart);
    };
    reduce::converges_to_daimon(p, fuel).map_err(|f| OrthoError::Fuel(f.steps))
}

/// `p` against the bindings `[ns/xs]`.
pub fn orthogonal_positive(
    p: &Design,
    anti: &MultiDesign,
    fuel: u64,
) -> Result<bool, OrthoError> {
    orthogonal_multi(&MultiDesign::positive_only(p.clone())?, anti, fuel)
}

/// `n`, placed at `x0`, against `[p, ns/xs]`.
pub fn orthogonal_negative(
    n: &Design,
    anti: &MultiDesign,
    fuel: u64,
) -> Result<bool, OrthoError> {
    orthogonal_multi(&MultiDesign::binding(Var::x0(), n.clone())?, anti, fuel)
}

/// Atomic case: one positive design against one negative design at `x0`.
pub fn atomic_orthogonal(p: &Design, n: &Design, fuel: u64) -> Result<bool, OrthoError> {
    let anti = MultiDesign::binding(Var::x0(), n.clone())?;
    orthogonal_positive(p, &anti, fuel)
}

/// A tester: either a bare design of the opposite polarity (arranged at
/// `x0` or as the positive part as needed) or an explicit multi-design.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tester {
    Design(Design),
    Anti(MultiDesign),
}

impl Tester {
    /// Arranges the tester against generators of the given polarity.
    pub fn as_anti(&self, generators: Polarity) -> Result<MultiDesign, OrthoError> {
        match (self, generators) {
            (Tester::Design(n), Polarity::Pos) => {
                Ok(MultiDesign::binding(Var::x0(), n.clone())?)
            }
            (Tester::Design(p), Polarity::Neg) => Ok(MultiDesign::positive_only(p.clone())?),
            (Tester::Anti(md), _) => Ok(md.clone()),
        }
    }
}

/// A finite stand-in for a behaviour: generators of one polarity and the
/// testers they are measured against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Workbench {
    pub polarity: Polarity,
    pub generators: Vec<Design>,
    pub testers: Vec<Tester>,
    pub label: String,
}

pub const WORKBENCH_CAVEAT: &str =
    "verdict ranges over the listed generators and testers only, not the closed behaviour";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone)]
pub struct WorkbenchReport {
    pub verdict: Verdict,
    pub caveat: &'static str,
    /// One line per non-orthogonal or undecided pair.
    pub notes: Vec<String>,
}

impl Workbench {
    /// Arranges a generator as a multi-design: positive stand alone,
    /// negative sit at `x0`.
    pub fn generator_multi(&self, g: &Design) -> Result<MultiDesign, OrthoError> {
        match self.polarity {
            Polarity::Pos => Ok(MultiDesign::positive_only(g.clone())?),
            Polarity::Neg => Ok(MultiDesign::binding(Var::x0(), g.clone())?),
        }
    }

    /// Structural coherence: polarities line up and members are well-formed
    /// designs. Returns advisory notes (non-atomic generators and the
    /// like); hard mismatches are errors.
    pub fn validate(&self) -> Result<Vec<String>, OrthoError> {
        let ill = |why: String| OrthoError::IllFormed(self.label.clone(), why);
        let mut notes = Vec::new();
        if self.generators.is_empty() {
            notes.push("no generators".into());
        }
        if self.testers.is_empty() {
            notes.push("no testers: every generator passes vacuously".into());
        }
        for (i, g) in self.generators.iter().enumerate() {
            if g.polarity() != self.polarity {
                return Err(ill(format!("generator {i} has the wrong polarity")));
            }
            if !classify(g).standard {
                notes.push(format!("generator {i} is not standard"));
            }
            if !is_atomic(g) {
                notes.push(format!("generator {i} is not atomic"));
            }
        }
        for (j, t) in self.testers.iter().enumerate() {
            let tester_polarity = match t {
                Tester::Design(d) => d.polarity(),
                Tester::Anti(md) => md.polarity(),
            };
            if tester_polarity == self.polarity {
                return Err(ill(format!("tester {j} has the generators' polarity")));
            }
        }
        Ok(notes)
    }

    /// Mutual orthogonality of every generator/tester pair. Fail dominates
    /// Inconclusive dominates Pass; the report carries one note per
    /// offending pair and is always stamped with [`WORKBENCH_CAVEAT`].
    pub fn check(&self, fuel: u64) -> Result<WorkbenchReport, OrthoError> {
        let mut notes = self.validate()?;
        let mut verdict = Verdict::Pass;
        for (i, g) in self.generators.iter().enumerate() {
            let gm = self.generator_multi(g)?;
            for (j, t) in self.testers.iter().enumerate() {
                let anti = t.as_anti(self.polarity)?;
                match orthogonal_multi(&gm, &anti, fuel) {
                    Ok(true) => {}
                    Ok(false) => {
                        verdict = Verdict::Fail;
                        notes.push(format!("generator {i} fails tester {j}"));
                    }
                    Err(OrthoError::Fuel(steps)) => {
                        if verdict == Verdict::Pass {
                            verdict = Verdict::Inconclusive;
                        }
                        notes.push(format!(
                            "generator {i} against tester {j}: undecided after {steps} steps"
                        ));
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(WorkbenchReport { verdict, caveat: WORKBENCH_CAVEAT, notes })
    }

    /// Swaps generators and testers. Defined only when every tester is a
    /// bare design.
    pub fn dual_swap(&self) -> Option<Workbench> {
        let mut generators = Vec::with_capacity(self.testers.len());
        for t in &self.testers {
            match t {
                Tester::Design(d) => generators.push(d.clone()),
                Tester::Anti(_) => return None,
            }
        }
        Some(Workbench {
            polarity: self.polarity.flip(),
            generators,
            testers: self.generators.iter().cloned().map(Tester::Design).collect(),
            label: format!("{}-dual", self.label),
        })
    }

    /// The meet of the generators stably below `u`: the part of `u` the
    /// workbench can actually visit. `None` when no generator is below `u`
    /// or the meet is undefined.
    pub fn incarnation(&self, u: &Design) -> Result<Option<Design>, OrthoError> {
        let mut below = Vec::new();
        for g in &self.generators {
            if stable_leq(g, u).map_err(|e| OrthoError::Order(e.to_string()))? {
                below.push(g.clone());
            }
        }
        let Some(first) = below.first().cloned() else {
            return Ok(None);
        };
        let mut acc = first;
        for g in below.iter().skip(1) {
            match intersect(&acc, g) {
                Some(m) => acc = m,
                None => return Ok(None),
            }
        }
        Ok(Some(acc))
    }

    /// Material: equal to its own incarnation.
    pub fn is_material(&self, u: &Design) -> Result<bool, OrthoError> {
        Ok(self.incarnation(u)?.is_some_and(|m| alpha_eq(&m, u)))
    }
}

/// Bindings-of-testers helper: the anti-design `[n1/x1, ..., nk/xk]`.
pub fn anti_bindings(
    pairs: impl IntoIterator<Item = (Var, Design)>,
) -> Result<MultiDesign, OrthoError> {
    Ok(MultiDesign::negative(BTreeMap::from_iter(pairs))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn golden_designs_are_orthogonal() {
        assert_eq!(
            atomic_orthogonal(&fixtures::golden_p(), &fixtures::golden_n(), 1000),
            Ok(true)
        );
        // Daimon is orthogonal to everything of the right shape.
        assert_eq!(atomic_orthogonal(&Design::Daimon, &fixtures::golden_n(), 10), Ok(true));
        // A tester answering the wrong name is not orthogonal.
        assert_eq!(
            atomic_orthogonal(&fixtures::design_pb(), &fixtures::design_ne(), 10),
            Ok(false)
        );
    }

    #[test]
    fn bench_workbenches_pass_their_own_testers() {
        for w in [
            fixtures::bench_neg_b(),
            fixtures::bench_pos_b(),
            fixtures::bench_neg_e(),
            fixtures::bench_golden_pos(),
            fixtures::bench_trivial_neg("t"),
        ] {
            let report = w.check(1000).unwrap();
            assert_eq!(report.verdict, Verdict::Pass, "{}: {:?}", w.label, report.notes);
            assert_eq!(report.caveat, WORKBENCH_CAVEAT);
        }
    }

    #[test]
    fn failing_pair_is_reported_with_its_indices() {
        let w = Workbench {
            polarity: Polarity::Neg,
            generators: vec![fixtures::design_nb()],
            testers: vec![Tester::Design(fixtures::design_pe())],
            label: "mismatch".into(),
        };
        let report = w.check(1000).unwrap();
        assert_eq!(report.verdict, Verdict::Fail);
        assert_eq!(report.notes, vec!["generator 0 fails tester 0".to_string()]);
    }

    #[test]
    fn fuel_exhaustion_yields_inconclusive() {
        let w = fixtures::bench_neg_b();
        let report = w.check(1).unwrap();
        assert_eq!(report.verdict, Verdict::Inconclusive);
        assert!(report.notes.iter().any(|n| n.contains("undecided")));
    }

    #[test]
    fn polarity_mismatches_are_hard_errors() {
        let w = Workbench {
            polarity: Polarity::Pos,
            generators: vec![fixtures::design_nb()],
            testers: vec![],
            label: "bad".into(),
        };
        assert!(matches!(w.check(10), Err(OrthoError::IllFormed(_, _))));
    }

    #[test]
    fn incarnation_strips_unvisited_branches() {
        let nb = fixtures::design_nb();
        let mut wider = match nb.clone() {
            Design::Sum(mut branches) => {
                branches.insert(
                    crate::term::Name::new("e"),
                    crate::term::Branch::new(vec![Var::new("z")], Design::Daimon),
                );
                Design::Sum(branches)
            }
            _ => unreachable!(),
        };
        let w = Workbench {
            polarity: Polarity::Neg,
            generators: vec![nb.clone(), wider.clone()],
            testers: vec![Tester::Design(fixtures::design_pb())],
            label: "incarnation".into(),
        };
        // nb is below wider, so the meet strips the extra branch.
        let inc = w.incarnation(&wider).unwrap().unwrap();
        assert!(alpha_eq(&inc, &nb));
        assert_eq!(w.is_material(&wider), Ok(false));
        assert_eq!(w.is_material(&nb), Ok(true));
        // Nothing below an unrelated design.
        wider = Design::sum1("c", vec![], Design::Daimon);
        assert_eq!(w.incarnation(&wider), Ok(None));
    }

    #[test]
    fn dual_swap_round_trips_when_testers_are_bare() {
        let w = fixtures::bench_neg_b();
        let d = w.dual_swap().unwrap();
        assert_eq!(d.polarity, Polarity::Pos);
        assert_eq!(d.generators.len(), 2);
        let back = d.dual_swap().unwrap();
        assert_eq!(back.generators, w.generators);

        let anti = Workbench {
            polarity: Polarity::Pos,
            generators: vec![Design::Daimon],
            testers: vec![Tester::Anti(
                MultiDesign::binding(Var::x0(), fixtures::design_nb()).unwrap(),
            )],
            label: "anti".into(),
        };
        assert!(anti.dual_swap().is_none());
    }
}
