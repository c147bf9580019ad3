//! Seeded generators shared by the integration suites.
//!
//! Every generator draws from an explicit ChaCha stream, so a failing run
//! reproduces from the seed written in the test source; nothing here reads
//! ambient randomness.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use ludics::term::{is_atomic, is_standard, Branch, Design, Name, Signature, Var};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn names_of(sig: &Signature) -> Vec<(Name, usize)> {
    sig.names().map(|(n, k)| (n.clone(), k)).collect()
}

fn fresh_w(fresh: &mut usize) -> Var {
    let v = Var::new(format!("w{fresh}"));
    *fresh += 1;
    v
}

// ===== arbitrary designs (cuts, omega, bare-variable arguments allowed) =====

/// A positive design over `sig` with free variables drawn from `scope`.
/// Sum-headed applications (cuts) and omega leaves are produced on purpose;
/// these are inputs for normalization laws, not standard designs.
pub fn arbitrary_positive(
    r: &mut ChaCha8Rng,
    sig: &Signature,
    depth: usize,
    scope: &[Var],
    fresh: &mut usize,
) -> Design {
    if depth == 0 {
        return if r.random_bool(0.7) { Design::Daimon } else { Design::Omega };
    }
    match r.random_range(0..10u32) {
        0 => Design::Daimon,
        1 => Design::Omega,
        _ => {
            let names = names_of(sig);
            let (name, k) = names[r.random_range(0..names.len())].clone();
            let head = if !scope.is_empty() && r.random_bool(0.55) {
                Design::Var(scope[r.random_range(0..scope.len())].clone())
            } else {
                arbitrary_sum(r, sig, depth - 1, scope, fresh)
            };
            let args = (0..k)
                .map(|_| arbitrary_negative(r, sig, depth - 1, scope, fresh))
                .collect();
            Design::app(head, name.as_str(), args)
        }
    }
}

/// A negative design: a bare variable from `scope` or a sparse sum.
pub fn arbitrary_negative(
    r: &mut ChaCha8Rng,
    sig: &Signature,
    depth: usize,
    scope: &[Var],
    fresh: &mut usize,
) -> Design {
    if !scope.is_empty() && r.random_bool(0.25) {
        return Design::Var(scope[r.random_range(0..scope.len())].clone());
    }
    arbitrary_sum(r, sig, depth, scope, fresh)
}

fn arbitrary_sum(
    r: &mut ChaCha8Rng,
    sig: &Signature,
    depth: usize,
    scope: &[Var],
    fresh: &mut usize,
) -> Design {
    let mut branches = Vec::new();
    for (name, k) in names_of(sig) {
        // Sparse on purpose: a missing branch is how divergence arises.
        if !r.random_bool(0.6) {
            continue;
        }
        let params: Vec<Var> = (0..k).map(|_| fresh_w(fresh)).collect();
        let mut inner: Vec<Var> = scope.to_vec();
        inner.extend(params.iter().cloned());
        let body = arbitrary_positive(r, sig, depth, &inner, fresh);
        branches.push((name, Branch::new(params, body)));
    }
    Design::sum(branches)
}

/// Closed negative designs for each variable in `zs`, used as substitutions.
pub fn arbitrary_bindings(
    r: &mut ChaCha8Rng,
    sig: &Signature,
    depth: usize,
    zs: &[Var],
    fresh: &mut usize,
) -> BTreeMap<Var, Design> {
    zs.iter()
        .map(|z| (z.clone(), arbitrary_sum(r, sig, depth, &[], fresh)))
        .collect()
}

// ===== standard atomic designs (inputs for the interaction engine) =====

/// A standard atomic positive design: variable heads only (cut-free), no
/// omega (total), sum arguments only (identity-free), and a scope split
/// across argument slots so the free variables of head and arguments stay
/// pairwise disjoint (linear). The root is always an application at `x0`,
/// so the design realizes at least one nonempty path.
pub fn standard_positive(r: &mut ChaCha8Rng, sig: &Signature, depth: usize) -> Design {
    let mut fresh = 0usize;
    let names = names_of(sig);
    let (name, k) = names[r.random_range(0..names.len())].clone();
    let args = (0..k)
        .map(|_| standard_sum(r, sig, depth.saturating_sub(1), Vec::new(), &mut fresh))
        .collect();
    let d = Design::app(Design::var("x0"), name.as_str(), args);
    debug_assert!(is_standard(&d) && is_atomic(&d));
    d
}

fn standard_pos_body(
    r: &mut ChaCha8Rng,
    sig: &Signature,
    depth: usize,
    mut scope: Vec<Var>,
    fresh: &mut usize,
) -> Design {
    if depth == 0 || scope.is_empty() || r.random_bool(0.2) {
        return Design::Daimon;
    }
    let head = scope.remove(r.random_range(0..scope.len()));
    let names = names_of(sig);
    let (name, k) = names[r.random_range(0..names.len())].clone();
    let mut slots: Vec<Vec<Var>> = vec![Vec::new(); k];
    for v in scope {
        let i = r.random_range(0..k + 1);
        if i < k {
            slots[i].push(v);
        }
    }
    let args = slots
        .into_iter()
        .map(|s| standard_sum(r, sig, depth - 1, s, fresh))
        .collect();
    Design::app(Design::Var(head), name.as_str(), args)
}

fn standard_sum(
    r: &mut ChaCha8Rng,
    sig: &Signature,
    depth: usize,
    scope: Vec<Var>,
    fresh: &mut usize,
) -> Design {
    let mut branches = Vec::new();
    for (name, k) in names_of(sig) {
        if !r.random_bool(0.5) {
            continue;
        }
        let params: Vec<Var> = (0..k).map(|_| fresh_w(fresh)).collect();
        let mut inner = scope.clone();
        inner.extend(params.iter().cloned());
        let body = standard_pos_body(r, sig, depth, inner, fresh);
        branches.push((name, Branch::new(params, body)));
    }
    Design::sum(branches)
}
