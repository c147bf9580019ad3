//! Shared example designs, sequences, and workbenches.
//!
//! The `golden_*` family is the two-design interaction used throughout the
//! docs and the golden tests: a positive design probing both components of
//! a pair, against a negative design that answers each probe in turn. The
//! `bench_*` constructors provide small saturated behaviour workbenches
//! whose visitable paths are known exactly.

use crate::ortho::{Tester, Workbench};
use crate::path::LocatedAction;
use crate::term::{Branch, Design, Name, Polarity, Signature, Var};

/// Names used by the golden-pair designs: `a/2`, `b/1`, `c/0`.
pub fn golden_signature() -> Signature {
    Signature::from_pairs([("a", 2), ("b", 1), ("c", 0)])
}

/// `x0 | a< {b(x1) => x1|c<>}, {b(x2) => x2|c<>} >`
pub fn golden_p() -> Design {
    Design::app(
        Design::var("x0"),
        "a",
        vec![
            Design::sum1("b", vec!["x1"], Design::app(Design::var("x1"), "c", vec![])),
            Design::sum1("b", vec!["x2"], Design::app(Design::var("x2"), "c", vec![])),
        ],
    )
}

/// `{a(y1,y2) => y1 | b< {c() => y2 | b< {a(y5,y6) => daimon, c() => daimon} >} >}`
pub fn golden_n() -> Design {
    let innermost = Design::sum([
        (
            Name::new("a"),
            Branch::new(vec![Var::new("y5"), Var::new("y6")], Design::Daimon),
        ),
        (Name::new("c"), Branch::new(vec![], Design::Daimon)),
    ]);
    let answer_second = Design::sum1(
        "c",
        vec![],
        Design::app(Design::var("y2"), "b", vec![innermost]),
    );
    Design::sum([(
        Name::new("a"),
        Branch::new(
            vec![Var::new("y1"), Var::new("y2")],
            Design::app(Design::var("y1"), "b", vec![answer_second]),
        ),
    )])
}

/// The interaction sequence of `golden_p` against `golden_n`, oriented from the
/// positive side: five proper actions, no daimon.
pub fn golden_path_actions() -> Vec<LocatedAction> {
    vec![
        LocatedAction::pos("x0", "a", ["y1", "y2"]),
        LocatedAction::neg("y1", "b", ["x1"]),
        LocatedAction::pos("x1", "c", []),
        LocatedAction::neg("y2", "b", ["x2"]),
        LocatedAction::pos("x2", "c", []),
    ]
}

/// A closed positive cut that reproduces itself: `U|a<U>` for
/// `U = {a(x) => x|a<x>}`. Reduction never leaves the state.
pub fn looping_cut() -> (Signature, Design) {
    let u = Design::sum1(
        "a",
        vec!["x"],
        Design::app(Design::var("x"), "a", vec![Design::var("x")]),
    );
    let cut = Design::app(u.clone(), "a", vec![u]);
    (Signature::from_pairs([("a", 1)]), cut)
}

// ===== curated workbenches =====

/// Signature for the workbench fixtures: `b/1 c/0 e/1 d/0` plus the
/// pairing names `pi1/1 pi2/1`.
pub fn bench_signature() -> Signature {
    Signature::from_pairs([("b", 1), ("c", 0), ("d", 0), ("e", 1), ("pi1", 1), ("pi2", 1)])
}

/// `{b(x1) => x1|c<>}`: answer a `b` probe, then call `c`.
pub fn design_nb() -> Design {
    Design::sum1("b", vec!["x1"], Design::app(Design::var("x1"), "c", vec![]))
}

/// `{b(x1) => daimon}`: answer a `b` probe by giving up.
pub fn design_nb_daimon() -> Design {
    Design::sum1("b", vec!["x1"], Design::Daimon)
}

/// `x0 | b< {c() => daimon} >`: probe with `b`, accept the `c` reply.
pub fn design_pb() -> Design {
    Design::app(
        Design::var("x0"),
        "b",
        vec![Design::sum1("c", vec![], Design::Daimon)],
    )
}

/// Negative workbench over `b/c` with both generators and the testers that
/// realize every positive-ended path up to length 2.
pub fn bench_neg_b() -> Workbench {
    Workbench {
        polarity: Polarity::Neg,
        generators: vec![design_nb(), design_nb_daimon()],
        testers: vec![Tester::Design(design_pb()), Tester::Design(Design::Daimon)],
        label: "neg-b".into(),
    }
}

/// Positive dual of [`bench_neg_b`].
pub fn bench_pos_b() -> Workbench {
    bench_neg_b().dual_swap().expect("atomic testers")
}

/// `{e(x2) => x2|d<>}` and friends: the same shape over `e/d`, so shuffles
/// of `b`-paths and `e`-paths stay distinguishable.
pub fn design_ne() -> Design {
    Design::sum1("e", vec!["x2"], Design::app(Design::var("x2"), "d", vec![]))
}

pub fn design_ne_daimon() -> Design {
    Design::sum1("e", vec!["x2"], Design::Daimon)
}

pub fn design_pe() -> Design {
    Design::app(
        Design::var("x0"),
        "e",
        vec![Design::sum1("d", vec![], Design::Daimon)],
    )
}

pub fn bench_neg_e() -> Workbench {
    Workbench {
        polarity: Polarity::Neg,
        generators: vec![design_ne(), design_ne_daimon()],
        testers: vec![Tester::Design(design_pe()), Tester::Design(Design::Daimon)],
        label: "neg-e".into(),
    }
}

pub fn bench_pos_e() -> Workbench {
    bench_neg_e().dual_swap().expect("atomic testers")
}

/// Trivial negative workbench: the empty sum against daimon. Useful as a
/// placeholder component; every check over it is vacuous.
pub fn bench_trivial_neg(label: &str) -> Workbench {
    Workbench {
        polarity: Polarity::Neg,
        generators: vec![Design::empty_sum()],
        testers: vec![Tester::Design(Design::Daimon)],
        label: label.into(),
    }
}

/// Positive workbench for the golden pair.
pub fn bench_golden_pos() -> Workbench {
    Workbench {
        polarity: Polarity::Pos,
        generators: vec![golden_p(), Design::Daimon],
        testers: vec![Tester::Design(golden_n())],
        label: "golden-pos".into(),
    }
}
