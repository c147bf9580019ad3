//! Multi-designs: at most one positive design joined with negative designs
//! bound to pairwise distinct places, and the cut that plugs one
//! multi-design into another.
//!
//! A multi-design is valid when its positive slot (if any) holds a positive
//! design, every binding holds a negative design, the free-variable sets of
//! its members are pairwise disjoint, and no binding key occurs free in a
//! member: free variables always point at the *other* side of a cut. Two
//! multi-designs are compatible when their free variables and places are
//! disjoint and they either have opposite polarities or are both negative
//! with a spare place serving nobody; quasi-closed compatibility further
//! requires opposite polarities with each side's free variables served by
//! the other side's places. Cut consumes exactly the binding keys one side
//! references in the other, by simultaneous substitution; the order keys
//! are consumed in does not matter on acyclic instances, which
//! [`cut_with_order`] lets tests verify directly. Mutually recursive
//! bindings have no finite plugging and are reported as cyclic.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::term::{substitute1, Design, Polarity, TermError, Var};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiDesign {
    positive: Option<Design>,
    bindings: BTreeMap<Var, Design>,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum MultiError {
    #[error("the positive slot must hold a positive design")]
    PositiveSlot,
    #[error("binding {0} must hold a negative design")]
    NegativeSlot(Var),
    #[error("place {0} also occurs free in a member")]
    PlaceOverlap(Var),
    #[error("variable {0} occurs free in two members")]
    SharedFreeVariable(Var),
    #[error("incompatible multi-designs: {0}")]
    Incompatible(String),
    #[error("cut is cyclic: {0} remains free after plugging")]
    CyclicCut(Var),
    #[error("substitution failed: {0}")]
    Substitution(String),
}

impl From<TermError> for MultiError {
    fn from(e: TermError) -> Self {
        MultiError::Substitution(e.to_string())
    }
}

impl MultiDesign {
    pub fn new(
        positive: Option<Design>,
        bindings: BTreeMap<Var, Design>,
    ) -> Result<Self, MultiError> {
        if let Some(p) = &positive {
            if !p.is_positive() {
                return Err(MultiError::PositiveSlot);
            }
        }
        for (x, n) in &bindings {
            if !n.is_negative() {
                return Err(MultiError::NegativeSlot(x.clone()));
            }
        }
        let md = MultiDesign { positive, bindings };
        let mut seen: BTreeSet<Var> = BTreeSet::new();
        for member in md.positive.iter().chain(md.bindings.values()) {
            for x in member.free_vars() {
                if !seen.insert(x.clone()) {
                    return Err(MultiError::SharedFreeVariable(x));
                }
            }
        }
        if let Some(x) = md.bindings.keys().find(|x| seen.contains(*x)) {
            return Err(MultiError::PlaceOverlap(x.clone()));
        }
        Ok(md)
    }

    pub fn positive_only(p: Design) -> Result<Self, MultiError> {
        Self::new(Some(p), BTreeMap::new())
    }

    pub fn negative(bindings: BTreeMap<Var, Design>) -> Result<Self, MultiError> {
        Self::new(None, bindings)
    }

    /// The single-binding multi-design `[n/x]`.
    pub fn binding(x: Var, n: Design) -> Result<Self, MultiError> {
        Self::negative(BTreeMap::from([(x, n)]))
    }

    pub fn positive(&self) -> Option<&Design> {
        self.positive.as_ref()
    }

    pub fn bindings(&self) -> &BTreeMap<Var, Design> {
        &self.bindings
    }

    pub fn polarity(&self) -> Polarity {
        if self.positive.is_some() {
            Polarity::Pos
        } else {
            Polarity::Neg
        }
    }

    /// The places: binding keys.
    pub fn places(&self) -> BTreeSet<Var> {
        self.bindings.keys().cloned().collect()
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        if let Some(p) = &self.positive {
            out.extend(p.free_vars());
        }
        for n in self.bindings.values() {
            out.extend(n.free_vars());
        }
        out
    }

    /// Daimon membership: the positive part is daimon itself.
    pub fn positive_is_daimon(&self) -> bool {
        self.positive == Some(Design::Daimon)
    }

    pub fn is_empty(&self) -> bool {
        self.positive.is_none() && self.bindings.is_empty()
    }
}

/// Disjoint free variables and places, with opposite polarities or, for two
/// negative multi-designs, a spare place that serves nobody.
pub fn compatible(d: &MultiDesign, e: &MultiDesign) -> Result<(), MultiError> {
    if let Some(x) = d.places().intersection(&e.places()).next() {
        return Err(MultiError::Incompatible(format!("shared place {x}")));
    }
    if let Some(x) = d.free_vars().intersection(&e.free_vars()).next() {
        return Err(MultiError::Incompatible(format!("shared free variable {x}")));
    }
    if d.polarity() == e.polarity() {
        if d.positive.is_some() {
            return Err(MultiError::Incompatible("two positive parts".into()));
        }
        let fv: BTreeSet<Var> = d.free_vars().union(&e.free_vars()).cloned().collect();
        let mut places = d.places();
        places.extend(e.places());
        if places.difference(&fv).next().is_none() {
            return Err(MultiError::Incompatible(
                "two negative multi-designs without a spare place".into(),
            ));
        }
    }
    Ok(())
}

/// Opposite polarities with every free variable served across the cut.
pub fn quasi_closed_compatible(d: &MultiDesign, e: &MultiDesign) -> Result<(), MultiError> {
    compatible(d, e)?;
    if d.polarity() == e.polarity() {
        return Err(MultiError::Incompatible("same polarity".into()));
    }
    if let Some(x) = d.free_vars().difference(&e.places()).next() {
        return Err(MultiError::Incompatible(format!("{x} is not served")));
    }
    if let Some(x) = e.free_vars().difference(&d.places()).next() {
        return Err(MultiError::Incompatible(format!("{x} is not served")));
    }
    Ok(())
}

/// Binding keys of either side that the other side references: exactly the
/// keys a cut consumes.
pub fn cut_keys(d: &MultiDesign, e: &MultiDesign) -> BTreeSet<Var> {
    let fv_d = d.free_vars();
    let fv_e = e.free_vars();
    let mut keys: BTreeSet<Var> = d.places().intersection(&fv_e).cloned().collect();
    keys.extend(e.places().intersection(&fv_d).cloned());
    keys
}

/// The cut of two compatible multi-designs, consuming keys in ascending
/// order.
pub fn cut(d: &MultiDesign, e: &MultiDesign) -> Result<MultiDesign, MultiError> {
    let order: Vec<Var> = cut_keys(d, e).into_iter().collect();
    cut_with_order(d, e, &order)
}

/// The cut, consuming the given keys in the given order. Every key must be
/// a place of one of the sides. On acyclic instances the result does not
/// depend on the order.
pub fn cut_with_order(
    d: &MultiDesign,
    e: &MultiDesign,
    order: &[Var],
) -> Result<MultiDesign, MultiError> {
    compatible(d, e)?;
    let mut positive = d.positive.clone().or_else(|| e.positive.clone());
    let mut pool: BTreeMap<Var, Design> = d.bindings.clone();
    pool.extend(e.bindings.clone());
    for x in order {
        let n = pool
            .remove(x)
            .ok_or_else(|| MultiError::Incompatible(format!("{x} is not a place")))?;
        // A binding that has come to need its own key has no finite
        // unfolding; without this check it would be plugged into nothing
        // and silently dropped.
        if n.free_vars().contains(x) {
            return Err(MultiError::CyclicCut(x.clone()));
        }
        if let Some(p) = &positive {
            positive = Some(substitute1(p, x, &n)?);
        }
        for value in pool.values_mut() {
            *value = substitute1(value, x, &n)?;
        }
    }
    // A consumed key still free anywhere witnesses a reference cycle: the
    // plugging has no finite unfolding.
    let result = MultiDesign { positive, bindings: pool };
    let fv = result.free_vars();
    if let Some(x) = order.iter().find(|x| fv.contains(*x)) {
        return Err(MultiError::CyclicCut(x.clone()));
    }
    Ok(result)
}

/// The normal form of a multi-design: every member normalized in place.
/// Fuel exhaustion on any member is reported through the error.
pub fn normalized(d: &MultiDesign, fuel: u64) -> Result<MultiDesign, MultiError> {
    let norm = |t: &Design| -> Result<Design, MultiError> {
        match crate::reduce::normalize(t, fuel) {
            crate::reduce::EvalOutcome::Converged(u) => Ok(u),
            crate::reduce::EvalOutcome::Omega => Ok(Design::Omega),
            crate::reduce::EvalOutcome::FuelExhausted { steps } => Err(MultiError::Substitution(
                format!("fuel exhausted after {steps} steps"),
            )),
        }
    };
    let positive = d.positive.as_ref().map(&norm).transpose()?;
    let mut bindings = BTreeMap::new();
    for (x, n) in &d.bindings {
        bindings.insert(x.clone(), norm(n)?);
    }
    Ok(MultiDesign { positive, bindings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::reduce;
    use crate::term::alpha_eq;

    #[test]
    fn validation_rejects_misplaced_polarities_and_overlaps() {
        assert_eq!(
            MultiDesign::positive_only(fixtures::golden_n()).unwrap_err(),
            MultiError::PositiveSlot
        );
        assert!(matches!(
            MultiDesign::binding(Var::x0(), fixtures::golden_p()),
            Err(MultiError::NegativeSlot(_))
        ));
        // A binding key free in another member.
        let n1 = Design::sum1("b", vec!["z"], Design::app(Design::var("x2"), "c", vec![]));
        let n2 = Design::sum1("b", vec!["z"], Design::Daimon);
        let bindings = BTreeMap::from([(Var::new("x1"), n1), (Var::new("x2"), n2)]);
        assert!(matches!(
            MultiDesign::negative(bindings),
            Err(MultiError::PlaceOverlap(_))
        ));
    }

    #[test]
    fn golden_pair_is_quasi_closed_and_cuts_to_daimon() {
        let d = MultiDesign::positive_only(fixtures::golden_p()).unwrap();
        let e = MultiDesign::binding(Var::x0(), fixtures::golden_n()).unwrap();
        quasi_closed_compatible(&d, &e).unwrap();
        assert_eq!(cut_keys(&d, &e), BTreeSet::from([Var::x0()]));
        let r = cut(&d, &e).unwrap();
        assert!(r.bindings().is_empty());
        let p = r.positive().unwrap();
        assert!(p.free_vars().is_empty());
        assert_eq!(reduce::converges_to_daimon(p, 1000), Ok(true));
    }

    #[test]
    fn cut_is_order_independent_on_acyclic_instances() {
        // P refers to x1 (a place of e); the binding at x1 refers back to
        // x2 (a place of d); the chain resolves in either order.
        let p = Design::app(
            Design::var("x1"),
            "b",
            vec![Design::sum1("c", vec![], Design::Daimon)],
        );
        let n1 = Design::sum1("b", vec!["u"], Design::app(Design::var("x2"), "c", vec![]));
        let n2 = Design::sum1("c", vec![], Design::Daimon);
        let d = MultiDesign::new(Some(p), BTreeMap::from([(Var::new("x2"), n2)])).unwrap();
        let e = MultiDesign::binding(Var::new("x1"), n1).unwrap();
        quasi_closed_compatible(&d, &e).unwrap();
        let k1 = vec![Var::new("x1"), Var::new("x2")];
        let k2 = vec![Var::new("x2"), Var::new("x1")];
        let r1 = cut_with_order(&d, &e, &k1).unwrap();
        let r2 = cut_with_order(&d, &e, &k2).unwrap();
        assert!(alpha_eq(r1.positive().unwrap(), r2.positive().unwrap()));
        assert!(r1.positive().unwrap().free_vars().is_empty());
        assert_eq!(cut(&d, &e).unwrap(), r1);
        assert_eq!(reduce::converges_to_daimon(r1.positive().unwrap(), 100), Ok(true));
    }

    #[test]
    fn unreferenced_places_survive_the_cut() {
        let d = MultiDesign::positive_only(fixtures::golden_p()).unwrap();
        let mut bindings = BTreeMap::from([(Var::x0(), fixtures::golden_n())]);
        bindings.insert(Var::new("y9"), Design::sum1("c", vec![], Design::Daimon));
        let e = MultiDesign::negative(bindings).unwrap();
        let r = cut(&d, &e).unwrap();
        assert_eq!(r.places(), BTreeSet::from([Var::new("y9")]));
        assert!(r.positive().is_some());
    }

    #[test]
    fn mutually_recursive_bindings_are_reported_cyclic() {
        // The binding at y needs x; the binding at x needs y back.
        let m = Design::sum1("c", vec![], Design::app(Design::var("x"), "c", vec![]));
        let n = Design::sum1("c", vec![], Design::app(Design::var("y"), "c", vec![]));
        let d = MultiDesign::new(Some(Design::Daimon), BTreeMap::from([(Var::new("y"), m)]))
            .unwrap();
        let e = MultiDesign::binding(Var::new("x"), n).unwrap();
        quasi_closed_compatible(&d, &e).unwrap();
        assert!(matches!(cut(&d, &e), Err(MultiError::CyclicCut(_))));
    }

    #[test]
    fn members_may_not_share_free_variables() {
        // Both members need x: the pair cannot face a single cut partner.
        let p = Design::app(Design::var("x"), "c", vec![]);
        let m = Design::sum1("c", vec![], Design::app(Design::var("x"), "c", vec![]));
        assert_eq!(
            MultiDesign::new(Some(p), BTreeMap::from([(Var::new("y"), m)])).unwrap_err(),
            MultiError::SharedFreeVariable(Var::new("x"))
        );
    }

    #[test]
    fn negative_pairs_need_a_spare_place() {
        // Every place is referenced across the pair: no spare place, so the
        // mutual cycle is already blocked at compatibility.
        let m = Design::sum1("c", vec![], Design::app(Design::var("x2"), "c", vec![]));
        let n = Design::sum1("c", vec![], Design::app(Design::var("x1"), "c", vec![]));
        let d = MultiDesign::binding(Var::new("x1"), m).unwrap();
        let e = MultiDesign::binding(Var::new("x2"), n).unwrap();
        assert!(compatible(&d, &e).is_err());
    }

    #[test]
    fn compatibility_distinguishes_shared_places_and_double_positives() {
        let d = MultiDesign::binding(Var::x0(), fixtures::golden_n()).unwrap();
        let e = MultiDesign::binding(Var::x0(), fixtures::design_nb()).unwrap();
        assert!(compatible(&d, &e).is_err());

        let d = MultiDesign::positive_only(fixtures::golden_p()).unwrap();
        let e = MultiDesign::positive_only(Design::Daimon).unwrap();
        assert!(compatible(&d, &e).is_err());

        // Two negatives on distinct places are compatible but not
        // quasi-closed (same polarity).
        let d = MultiDesign::binding(Var::new("x1"), fixtures::design_nb()).unwrap();
        let e = MultiDesign::binding(Var::new("x2"), fixtures::design_ne()).unwrap();
        assert!(compatible(&d, &e).is_ok());
        assert!(quasi_closed_compatible(&d, &e).is_err());
    }
}
