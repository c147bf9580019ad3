//! JSON interaction traces, schema `ludics-trace/1`.
//!
//! A trace is one object: the schema tag, an array with one entry per
//! transcript action, the terminal status, and the cut-step count. Field
//! order is fixed by the structs and every collection is ordered, so the
//! same run always serializes to the same bytes.

use serde::Serialize;

use crate::interact::{Interaction, InteractionStatus};
use crate::path::AjSequence;
use crate::term::Polarity;

pub const TRACE_SCHEMA: &str = "ludics-trace/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceAction {
    pub polarity: &'static str,
    pub kind: &'static str,
    pub address: Option<String>,
    pub name: Option<String>,
    pub args: Vec<String>,
    /// Index of the action that introduced this action's address, when one
    /// exists in the transcript.
    pub justifier_index: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Trace {
    pub schema: &'static str,
    pub actions: Vec<TraceAction>,
    pub status: &'static str,
    pub steps: u64,
}

pub fn status_str(status: InteractionStatus) -> &'static str {
    match status {
        InteractionStatus::Converged => "converged",
        InteractionStatus::Omega => "omega",
        InteractionStatus::FuelExhausted => "fuel_exhausted",
    }
}

/// The serializable form of a run. Justifier pointers come from the
/// justified-sequence machinery; the engine only emits valid prefixes, so
/// the fallback of leaving them empty is for robustness, not a real path.
pub fn trace_of(run: &Interaction) -> Trace {
    let justifiers: Vec<Option<usize>> = match AjSequence::from_actions(run.actions.clone()) {
        Ok(seq) => (0..seq.len()).map(|i| seq.justifier(i)).collect(),
        Err(_) => vec![None; run.actions.len()],
    };
    let actions = run
        .actions
        .iter()
        .zip(justifiers)
        .map(|(act, justifier_index)| TraceAction {
            polarity: match act.polarity() {
                Polarity::Pos => "pos",
                Polarity::Neg => "neg",
            },
            kind: if act.is_proper() { "proper" } else { "daimon" },
            address: act.address().map(|v| v.to_string()),
            name: act.name().map(|n| n.to_string()),
            args: act.args().iter().map(|v| v.to_string()).collect(),
            justifier_index,
        })
        .collect();
    Trace {
        schema: TRACE_SCHEMA,
        actions,
        status: status_str(run.status),
        steps: run.steps,
    }
}

/// Pretty-printed JSON with a trailing newline.
pub fn emit_trace_json(run: &Interaction) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(&trace_of(run)).expect("trace serializes");
    out.push(b'\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::interact::iseq;
    use crate::multi::MultiDesign;
    use crate::term::Var;

    fn golden_run() -> Interaction {
        let d = MultiDesign::positive_only(fixtures::golden_p()).unwrap();
        let e = MultiDesign::binding(Var::x0(), fixtures::golden_n()).unwrap();
        iseq(&d, &e, 10_000).unwrap()
    }

    #[test]
    fn golden_trace_has_five_proper_actions_and_converges() {
        let t = trace_of(&golden_run());
        assert_eq!(t.schema, TRACE_SCHEMA);
        assert_eq!(t.status, "converged");
        assert_eq!(t.actions.len(), 5);
        assert!(t.actions.iter().all(|a| a.kind == "proper"));
        assert_eq!(t.actions[0].address.as_deref(), Some("x0"));
        assert_eq!(t.actions[0].justifier_index, None);
        // y1 is introduced by the first action.
        assert_eq!(t.actions[1].justifier_index, Some(0));
        assert_eq!(t.actions[4].justifier_index, Some(3));
    }

    #[test]
    fn emission_is_byte_stable() {
        let run = golden_run();
        let once = emit_trace_json(&run);
        let twice = emit_trace_json(&run);
        assert_eq!(once, twice);
        let value: serde_json::Value = serde_json::from_slice(&once).unwrap();
        assert_eq!(value["schema"], TRACE_SCHEMA);
        assert_eq!(value["steps"], 5);
        assert_eq!(value["actions"][2]["name"], "c");
        assert_eq!(value["actions"][1]["polarity"], "neg");
    }

    #[test]
    fn omega_status_is_spelled_out() {
        // A probe on a name the counter-design does not answer.
        let d = MultiDesign::positive_only(crate::term::Design::app(
            crate::term::Design::var("x0"),
            "c",
            vec![],
        ))
        .unwrap();
        let e = MultiDesign::binding(Var::x0(), fixtures::golden_n()).unwrap();
        let run = iseq(&d, &e, 10_000).unwrap();
        let t = trace_of(&run);
        assert_eq!(t.status, "omega");
    }
}
