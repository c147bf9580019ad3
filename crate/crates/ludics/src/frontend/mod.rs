//! Session files: the textual frontend.
//!
//! A session file is a signature block followed by named definitions:
//!
//! ```text
//! sig { a/2, b/1, c/0 }
//! design P  = x0|a<{b(x1) => x1|c<>}, {b(x2) => x2|c<>}>
//! design N  = {a(y1, y2) => y1|b<{c() => daimon}>}
//! seq Probe = [x0|a<y1,y2>, b^y1(x1), x1|c<>]
//! multi M   = {P, [N/x0]}
//! bench W   = pos gens {P} testers {N}
//! ```
//!
//! Connectives are written `conn With = (x1, x2 ; I = {pi1(x1), pi2(x2)} ;
//! E = {pi1(x1), pi2(x2)})`, and an `assign` directive attaches one bench
//! per place to a connective for the decomposability checkers. `#` starts
//! a line comment. The `sig` block is optional: without it the signature
//! is inferred from use, and every name still has to keep one arity across
//! the whole file.
//!
//! Scoping is straight-line: an item may only reference names defined
//! above it, and every name is defined once. Sums are stored sparsely, so
//! an explicit `omega` branch body means the same as omitting the branch,
//! and `{}` is the empty sum. [`render`] writes a file back out in the
//! same grammar; [`parse`] of the result is the identity up to renaming of
//! bound variables ([`session_alpha_eq`]).

mod lex;
mod parse;
pub mod trace;

use thiserror::Error;

use crate::conn::{alpha_eq_connective, Connective};
use crate::multi::MultiDesign;
use crate::ortho::{Tester, Workbench};
use crate::path::{alpha_eq_seq, AjSequence};
use crate::term::{alpha_eq, Design, Signature, Var};

/// Errors carry the position of the offending token. `Syntax` quotes what
/// the parser would have accepted; the others are semantic.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("{line}:{col}: expected {expected}, found {found}")]
    Syntax { line: usize, col: usize, expected: String, found: String },
    #[error("{line}:{col}: unknown name `{name}`: {context}")]
    UnknownName { line: usize, col: usize, name: String, context: String },
    #[error("{line}:{col}: `{name}` is used with {got} arguments but has arity {want}")]
    Arity { line: usize, col: usize, name: String, want: usize, got: usize },
    #[error("{line}:{col}: `{name}` is already defined")]
    Duplicate { line: usize, col: usize, name: String },
    #[error("{line}:{col}: {msg}")]
    Invalid { line: usize, col: usize, msg: String },
}

/// One member of a `multi` definition, by reference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MultiMember {
    Positive(String),
    Binding(Var, String),
}

/// One definition or directive, in file order. Values are fully resolved;
/// the reference lists (`members`, `gens`, `testers`) keep the names as
/// written so rendering reproduces the source shape.
#[derive(Debug, Clone)]
pub enum Item {
    Design { name: String, value: Design },
    Conn { name: String, value: Connective },
    Seq { name: String, value: AjSequence },
    Multi { name: String, members: Vec<MultiMember>, value: MultiDesign },
    Bench { name: String, gens: Vec<String>, testers: Vec<String>, value: Workbench },
    Assign { conn: String, neg: Vec<String>, pos: Vec<String> },
}

/// A parsed session file. `signature` is the declared block when
/// `sig_declared`, the inferred name/arity table otherwise.
#[derive(Debug, Clone)]
pub struct SessionFile {
    pub signature: Signature,
    pub sig_declared: bool,
    pub items: Vec<Item>,
}

impl SessionFile {
    pub fn design(&self, name: &str) -> Option<&Design> {
        self.items.iter().find_map(|it| match it {
            Item::Design { name: n, value } if n == name => Some(value),
            _ => None,
        })
    }

    pub fn connective(&self, name: &str) -> Option<&Connective> {
        self.items.iter().find_map(|it| match it {
            Item::Conn { name: n, value } if n == name => Some(value),
            _ => None,
        })
    }

    pub fn sequence(&self, name: &str) -> Option<&AjSequence> {
        self.items.iter().find_map(|it| match it {
            Item::Seq { name: n, value } if n == name => Some(value),
            _ => None,
        })
    }

    pub fn multi(&self, name: &str) -> Option<&MultiDesign> {
        self.items.iter().find_map(|it| match it {
            Item::Multi { name: n, value, .. } if n == name => Some(value),
            _ => None,
        })
    }

    pub fn bench(&self, name: &str) -> Option<&Workbench> {
        self.items.iter().find_map(|it| match it {
            Item::Bench { name: n, value, .. } if n == name => Some(value),
            _ => None,
        })
    }

    /// The bench lists attached to a connective, negative places first.
    pub fn assignment(&self, conn: &str) -> Option<(&[String], &[String])> {
        self.items.iter().find_map(|it| match it {
            Item::Assign { conn: c, neg, pos } if c == conn => {
                Some((neg.as_slice(), pos.as_slice()))
            }
            _ => None,
        })
    }
}

/// Parses a session file.
pub fn parse(text: &str) -> Result<SessionFile, ParseError> {
    parse::parse_session(text)
}

/// Writes a session file back out, one item per line, in the input
/// grammar. Deterministic: rendering the same value twice gives the same
/// bytes, and parsing the result reproduces the file up to alpha
/// equivalence.
pub fn render(file: &SessionFile) -> String {
    let mut out = String::new();
    if file.sig_declared {
        let decls: Vec<String> = file
            .signature
            .names()
            .map(|(n, k)| format!("{n}/{k}"))
            .collect();
        out.push_str(&format!("sig {{ {} }}\n", decls.join(", ")));
    }
    for item in &file.items {
        let line = match item {
            Item::Design { name, value } => format!("design {name} = {value}"),
            Item::Conn { name, value } => {
                let bound: Vec<String> =
                    value.bound_vars.iter().map(|v| v.to_string()).collect();
                let side = |actions: &[crate::conn::NegAction]| {
                    let list: Vec<String> = actions.iter().map(|a| a.to_string()).collect();
                    format!("{{{}}}", list.join(", "))
                };
                format!(
                    "conn {name} = ({} ; I = {} ; E = {})",
                    bound.join(", "),
                    side(&value.intro),
                    side(&value.elim)
                )
            }
            Item::Seq { name, value } => format!("seq {name} = {value}"),
            Item::Multi { name, members, .. } => {
                let list: Vec<String> = members
                    .iter()
                    .map(|m| match m {
                        MultiMember::Positive(d) => d.clone(),
                        MultiMember::Binding(x, d) => format!("[{d}/{x}]"),
                    })
                    .collect();
                format!("multi {name} = {{{}}}", list.join(", "))
            }
            Item::Bench { name, gens, testers, value } => {
                let pol = match value.polarity {
                    crate::term::Polarity::Pos => "pos",
                    crate::term::Polarity::Neg => "neg",
                };
                format!(
                    "bench {name} = {pol} gens {{{}}} testers {{{}}}",
                    gens.join(", "),
                    testers.join(", ")
                )
            }
            Item::Assign { conn, neg, pos } => format!(
                "assign {conn} neg {{{}}} pos {{{}}}",
                neg.join(", "),
                pos.join(", ")
            ),
        };
        out.push_str(&line);
        out.push('\n');
    }
    out
}

fn multi_alpha_eq(a: &MultiDesign, b: &MultiDesign) -> bool {
    let pos_eq = match (a.positive(), b.positive()) {
        (None, None) => true,
        (Some(p), Some(q)) => alpha_eq(p, q),
        _ => false,
    };
    pos_eq
        && a.bindings().len() == b.bindings().len()
        && a.bindings()
            .iter()
            .zip(b.bindings())
            .all(|((x, m), (y, n))| x == y && alpha_eq(m, n))
}

fn bench_alpha_eq(a: &Workbench, b: &Workbench) -> bool {
    let tester_eq = |s: &Tester, t: &Tester| match (s, t) {
        (Tester::Design(m), Tester::Design(n)) => alpha_eq(m, n),
        (Tester::Anti(m), Tester::Anti(n)) => multi_alpha_eq(m, n),
        _ => false,
    };
    a.polarity == b.polarity
        && a.generators.len() == b.generators.len()
        && a.generators.iter().zip(&b.generators).all(|(m, n)| alpha_eq(m, n))
        && a.testers.len() == b.testers.len()
        && a.testers.iter().zip(&b.testers).all(|(s, t)| tester_eq(s, t))
}

fn item_alpha_eq(a: &Item, b: &Item) -> bool {
    match (a, b) {
        (Item::Design { name: an, value: av }, Item::Design { name: bn, value: bv }) => {
            an == bn && alpha_eq(av, bv)
        }
        (Item::Conn { name: an, value: av }, Item::Conn { name: bn, value: bv }) => {
            an == bn && alpha_eq_connective(av, bv)
        }
        (Item::Seq { name: an, value: av }, Item::Seq { name: bn, value: bv }) => {
            an == bn && alpha_eq_seq(av, bv)
        }
        (
            Item::Multi { name: an, members: am, value: av },
            Item::Multi { name: bn, members: bm, value: bv },
        ) => an == bn && am == bm && multi_alpha_eq(av, bv),
        (
            Item::Bench { name: an, gens: ag, testers: at, value: av },
            Item::Bench { name: bn, gens: bg, testers: bt, value: bv },
        ) => an == bn && ag == bg && at == bt && bench_alpha_eq(av, bv),
        (
            Item::Assign { conn: ac, neg: ang, pos: ap },
            Item::Assign { conn: bc, neg: bng, pos: bp },
        ) => ac == bc && ang == bng && ap == bp,
        _ => false,
    }
}

/// File equality up to renaming of bound variables, item by item.
pub fn session_alpha_eq(a: &SessionFile, b: &SessionFile) -> bool {
    a.signature == b.signature
        && a.sig_declared == b.sig_declared
        && a.items.len() == b.items.len()
        && a.items.iter().zip(&b.items).all(|(x, y)| item_alpha_eq(x, y))
}

/// Convenience used by the command line and tests: a named design or
/// multi-design arranged as a multi-design, positives standing alone and
/// negatives bound at the atomic address.
pub fn resolve_multi(file: &SessionFile, name: &str) -> Result<MultiDesign, String> {
    if let Some(d) = file.design(name) {
        let arranged = if d.is_positive() {
            MultiDesign::positive_only(d.clone())
        } else {
            MultiDesign::binding(Var::x0(), d.clone())
        };
        return arranged.map_err(|e| format!("design `{name}`: {e}"));
    }
    if let Some(m) = file.multi(name) {
        return Ok(m.clone());
    }
    Err(format!("no design or multi-design named `{name}`"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conn::with2;
    use crate::fixtures;
    use crate::term::Polarity;

    const GOLDEN: &str = "\
sig { a/2, b/1, c/0 }
design P = x0 | a< {b(x1) => x1|c<>}, {b(x2) => x2|c<>} >
design N = {a(y1,y2) => y1 | b< {c() => y2 | b< {a(y5,y6) => daimon, c() => daimon} >} >}
seq Probe = [x0|a<y1, y2>, b^y1(x1), x1|c<>, b^y2(x2), x2|c<>]
multi M = {[N/x0]}
";

    #[test]
    fn parses_the_golden_designs_exactly() {
        let file = parse(GOLDEN).unwrap();
        assert_eq!(file.design("P"), Some(&fixtures::golden_p()));
        assert_eq!(file.design("N"), Some(&fixtures::golden_n()));
        assert_eq!(
            file.sequence("Probe").unwrap().actions(),
            fixtures::golden_path_actions().as_slice()
        );
        let m = file.multi("M").unwrap();
        assert_eq!(m.positive(), None);
        assert_eq!(m.bindings().get(&Var::x0()), Some(&fixtures::golden_n()));
    }

    #[test]
    fn multi_with_positive_member_and_disjoint_binding() {
        let file = parse(
            "design Q = y9|c<>\n\
             design N2 = {c() => daimon}\n\
             multi MQ = {Q, [N2/z1]}",
        )
        .unwrap();
        let m = file.multi("MQ").unwrap();
        assert!(m.positive().is_some());
        assert_eq!(m.bindings().len(), 1);
        // A binding place that collides with a member's free variable is
        // rejected with the validator's message.
        assert!(matches!(
            parse("design Q = y9|c<>\ndesign N2 = {c() => daimon}\nmulti MX = {Q, [N2/y9]}")
                .unwrap_err(),
            ParseError::Invalid { msg, .. } if msg.contains("free")
        ));
    }

    #[test]
    fn daimon_and_empty_sum_parse() {
        let file = parse("design D = daimon\ndesign Z = {}").unwrap();
        assert_eq!(file.design("D"), Some(&Design::Daimon));
        assert_eq!(file.design("Z"), Some(&Design::empty_sum()));
    }

    #[test]
    fn connective_literal_matches_the_library_with() {
        let file =
            parse("conn With = (x1,x2 ; I={pi1(x1), pi2(x2)} ; E={pi1(x1), pi2(x2)})").unwrap();
        assert!(alpha_eq_connective(file.connective("With").unwrap(), &with2()));
    }

    #[test]
    fn sum_headed_cut_and_omega_branch_sparsity() {
        let file = parse(
            "design Cut = {a(x1) => daimon} | c< {b(x2) => daimon} >\n\
             design Sparse = {a(x1) => omega, c(y) => daimon}",
        )
        .unwrap();
        assert!(matches!(
            file.design("Cut"),
            Some(Design::App { head, .. }) if head.is_negative()
        ));
        // The omega branch is dropped; only the c branch is stored.
        match file.design("Sparse").unwrap() {
            Design::Sum(branches) => {
                assert_eq!(branches.len(), 1);
                assert!(branches.contains_key(&crate::term::Name::new("c")));
            }
            other => panic!("expected a sum, got {other}"),
        }
    }

    #[test]
    fn bench_and_assign_resolve_and_validate() {
        let file = parse(
            "design Nb = {b(x1) => x1|c<>}\n\
             design Pb = x0|b<{c() => daimon}>\n\
             design Dai = daimon\n\
             bench NB = neg gens {Nb} testers {Pb, Dai}\n\
             bench PB = pos gens {Pb, Dai} testers {Nb}\n\
             conn Shift = (x1 ; I = {up(x1)} ; E = {up(x1)})\n\
             assign Shift neg {NB} pos {PB}",
        )
        .unwrap();
        let nb = file.bench("NB").unwrap();
        assert_eq!(nb.polarity, Polarity::Neg);
        assert_eq!(nb.generators.len(), 1);
        assert_eq!(nb.testers.len(), 2);
        let (neg, pos) = file.assignment("Shift").unwrap();
        assert_eq!(neg, ["NB".to_string()]);
        assert_eq!(pos, ["PB".to_string()]);
    }

    #[test]
    fn round_trip_is_identity_up_to_alpha() {
        let text = "\
sig { a/2, b/1, c/0, pi1/1, pi2/1 }
design P = x0 | a< {b(x1) => x1|c<>}, {b(x2) => x2|c<>} >
design N = {a(y1,y2) => y1 | b< {c() => y2 | b< {a(y5,y6) => daimon, c() => daimon} >} >}
seq Probe = [x0|a<y1, y2>, b^y1(x1), x1|c<>, b^y2(x2), x2|c<>]
multi M = {[N/x0]}
conn With = (x1,x2 ; I={pi1(x1), pi2(x2)} ; E={pi1(x1), pi2(x2)})
design Dai = daimon
bench W = pos gens {P, Dai} testers {N}
";
        let file = parse(text).unwrap();
        let rendered = render(&file);
        let reparsed = parse(&rendered).unwrap();
        assert!(session_alpha_eq(&file, &reparsed));
        // Rendering is stable from the first pass on.
        assert_eq!(rendered, render(&reparsed));
    }

    #[test]
    fn inferred_signature_round_trips_too() {
        let text = "design P = x0|b<{c() => daimon}>\n";
        let file = parse(text).unwrap();
        assert!(!file.sig_declared);
        assert_eq!(file.signature.arity(&crate::term::Name::new("b")), Some(1));
        let reparsed = parse(&render(&file)).unwrap();
        assert!(session_alpha_eq(&file, &reparsed));
    }

    #[test]
    fn errors_carry_positions() {
        // Unknown name under a declared signature.
        let err = parse("sig { a/1 }\ndesign P = x0|zap<>").unwrap_err();
        assert_eq!(
            err,
            ParseError::UnknownName {
                line: 2,
                col: 15,
                name: "zap".into(),
                context: "not in the signature".into()
            }
        );
        // Arity clash between two uses, reported at the second.
        let err = parse("design P = x0|a<>\ndesign Q = x0|a<{b(x) => daimon}>").unwrap_err();
        assert!(matches!(
            err,
            ParseError::Arity { line: 2, name, want: 0, got: 1, .. } if name == "a"
        ));
        // Malformed syntax names the expected tokens.
        let err = parse("design P = x0|a").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { expected, .. } if expected == "`<`"));
    }

    #[test]
    fn semantic_rejections() {
        // Positive argument in application position.
        assert!(matches!(
            parse("design P = x0|a<daimon>").unwrap_err(),
            ParseError::Invalid { msg, .. } if msg.contains("negative")
        ));
        // Negative branch body.
        assert!(matches!(
            parse("design P = {a(x) => {b(y) => daimon}}").unwrap_err(),
            ParseError::Invalid { msg, .. } if msg.contains("positive")
        ));
        // x0 as a binder.
        assert!(matches!(
            parse("design P = {a(x0) => daimon}").unwrap_err(),
            ParseError::Invalid { msg, .. } if msg.contains("reserved")
        ));
        // Forward reference.
        assert!(matches!(
            parse("multi M = {P}").unwrap_err(),
            ParseError::UnknownName { name, .. } if name == "P"
        ));
        // Duplicate definition.
        assert!(matches!(
            parse("design P = daimon\ndesign P = omega").unwrap_err(),
            ParseError::Duplicate { name, .. } if name == "P"
        ));
        // Tester polarity must oppose the generators.
        assert!(matches!(
            parse("design Nb = {b(x1) => daimon}\nbench W = neg gens {Nb} testers {Nb}")
                .unwrap_err(),
            ParseError::Invalid { msg, .. } if msg.contains("tester")
        ));
        // Bench count must match the connective arity.
        assert!(matches!(
            parse(
                "design Dai = daimon\ndesign Z = {}\nbench NB = neg gens {Z} testers {Dai}\n\
                 conn With = (x1,x2 ; I={pi1(x1), pi2(x2)} ; E={pi1(x1), pi2(x2)})\n\
                 assign With neg {NB} pos {}"
            )
            .unwrap_err(),
            ParseError::Invalid { msg, .. } if msg.contains("benches")
        ));
    }

    #[test]
    fn resolve_multi_arranges_by_polarity() {
        let file = parse(GOLDEN).unwrap();
        let p = resolve_multi(&file, "P").unwrap();
        assert!(p.positive().is_some());
        let n = resolve_multi(&file, "N").unwrap();
        assert_eq!(n.bindings().len(), 1);
        let m = resolve_multi(&file, "M").unwrap();
        assert!(m.positive().is_none() && m.bindings().len() == 1);
        assert!(resolve_multi(&file, "nope").is_err());
    }
}
