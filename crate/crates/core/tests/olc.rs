mod common;

use std::collections::BTreeSet;

use common::{product_oracle, random_olc, random_sync, rng};
use olcvar::olc::{OlcError, State, OlcTransition};
use olcvar::{compose, fixtures, olc_paths, CompositeOlc, ObjectLifeCycle, SyncSpec};
use proptest::prelude::*;
use rand::Rng;

fn ids<'a>(it: impl IntoIterator<Item = &'a str>) -> BTreeSet<String> {
    it.into_iter().map(str::to_string).collect()
}

#[test]
fn fig1_states_and_transitions() {
    let olc = fixtures::fig1();
    let states: BTreeSet<String> = olc.states.iter().map(|s| s.id()).collect();
    assert_eq!(
        states,
        ids([
            "PO_I+PR_I+PA_I",
            "PO_RG+PR_I+PA_I",
            "PO_RJ+PR_I+PA_I",
            "PO_closed+PR_I+PA_I",
            "PO_AC+PR_AS+PA_I",
            "PO_AC+PR_SH+PA_CR",
            "PO_closed+PR_SH+PA_RC",
        ])
    );
    let transitions: BTreeSet<String> = olc.transitions.iter().map(|t| t.id.clone()).collect();
    assert_eq!(
        transitions,
        ids(["register", "reject", "accept|assemble", "close_rj", "ship|create", "receive|close_ac"])
    );
    let finals: BTreeSet<String> = olc.finals.iter().map(|s| s.id()).collect();
    assert_eq!(finals, ids(["PO_closed+PR_I+PA_I", "PO_closed+PR_SH+PA_RC"]));
    assert_eq!(olc.initial.id(), "PO_I+PR_I+PA_I");
}

#[test]
fn fig1_fixture_matches_fresh_composition() {
    let fresh = compose(&[fixtures::order(), fixtures::product(), fixtures::payment()], &fixtures::sync()).unwrap();
    assert!(fresh.warnings.is_empty());
    assert_eq!(fresh.olc, CompositeOlc::from_json(fixtures::FIG1_COMPOSITE).unwrap());
    assert_eq!(fresh.olc.to_json(), fixtures::FIG1_COMPOSITE);
}

#[test]
fn single_olc_composes_to_itself() {
    let order = fixtures::order();
    let c = compose(std::slice::from_ref(&order), &SyncSpec::default()).unwrap();
    assert_eq!(c.olc, CompositeOlc::from(order));
}

#[test]
fn sync_with_unknown_transition_is_rejected() {
    let spec = SyncSpec {
        groups: vec![vec!["register".into(), "nope".into()]],
    };
    let err = compose(&[fixtures::order(), fixtures::product()], &spec).unwrap_err();
    assert!(matches!(err, OlcError::InvalidSync(_)), "{err:?}");
}

#[test]
fn duplicate_object_is_rejected() {
    let err = compose(&[fixtures::order(), fixtures::order()], &SyncSpec::default()).unwrap_err();
    assert!(matches!(err, OlcError::Structure(_)));
}

#[test]
fn never_coenabled_group_warns() {
    let spec = SyncSpec {
        groups: vec![
            vec!["accept".into(), "assemble".into()],
            vec!["reject".into(), "ship".into()],
        ],
    };
    let c = compose(&[fixtures::order(), fixtures::product()], &spec).unwrap();
    assert_eq!(c.warnings.len(), 1);
    assert!(c.warnings[0].contains("reject"));
    assert!(c.olc.transitions.iter().all(|t| !t.members.contains(&"reject".to_string())));
}

#[test]
fn order_paths_up_to_two() {
    let order = CompositeOlc::from(fixtures::order());
    let got: BTreeSet<Vec<String>> = olc_paths(&order, 2).into_iter().map(|p| p.transitions).collect();
    let want: BTreeSet<Vec<String>> = [
        vec![],
        vec!["register"],
        vec!["register", "reject"],
        vec!["register", "accept"],
    ]
    .into_iter()
    .map(|p| p.into_iter().map(str::to_string).collect())
    .collect();
    assert_eq!(got, want);
    assert_eq!(olc_paths(&order, 0).len(), 1);
}

#[test]
fn composite_json_round_trips() {
    let olc = fixtures::fig1();
    assert_eq!(CompositeOlc::from_json(&olc.to_json()).unwrap(), olc);
    for text in [fixtures::ORDER_OLC, fixtures::PRODUCT_OLC, fixtures::PAYMENT_OLC] {
        let single = ObjectLifeCycle::from_json(text).unwrap();
        assert_eq!(ObjectLifeCycle::from_json(&single.to_json()).unwrap(), single);
    }
}

#[test]
fn invalid_olc_is_reported() {
    let mut olc = fixtures::order();
    olc.transitions.push(OlcTransition {
        id: "dangling".into(),
        name: "Dangling".into(),
        object: "PO".into(),
        source: "PO_RG".into(),
        target: "PO_nowhere".into(),
        initiator: None,
    });
    olc.states.push(State::new("PO_island", "island"));
    let report = olc.validate();
    assert!(report.has_errors());
    assert_eq!(report.warnings().count(), 1);
}

fn finals_oracle(olcs: &[ObjectLifeCycle], tuple: &[String]) -> bool {
    let mut any = false;
    for (c, s) in olcs.iter().zip(tuple) {
        if c.finals.contains(s) {
            any = true;
        } else if *s != c.initial {
            return false;
        }
    }
    any
}

/// Single-object composites serialize as the plain OLC, in its declaration order.
fn canonical(mut olc: CompositeOlc) -> CompositeOlc {
    olc.states.sort();
    olc.transitions.sort_by(|a, b| a.id.cmp(&b.id));
    olc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn compose_matches_cartesian_product(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = r.random_range(1..=3);
        let olcs: Vec<ObjectLifeCycle> = ["A", "B", "C"][..k]
            .iter()
            .map(|o| {
                let acyclic = r.random_bool(0.5);
                random_olc(&mut r, o, 4, acyclic)
            })
            .collect();
        let sync = random_sync(&mut r, &olcs);
        let got = compose(&olcs, &sync).unwrap().olc;
        let (states, edges) = product_oracle(&olcs, &sync);

        let got_states: BTreeSet<Vec<String>> = got.states.iter().map(|s| s.0.clone()).collect();
        prop_assert_eq!(&got_states, &states);
        let got_edges: BTreeSet<(Vec<String>, Vec<String>, Vec<String>)> = got
            .transitions
            .iter()
            .map(|t| (t.source.0.clone(), t.members.clone(), t.target.0.clone()))
            .collect();
        prop_assert_eq!(got_edges, edges);
        let want_finals: BTreeSet<Vec<String>> = states.iter().filter(|t| finals_oracle(&olcs, t)).cloned().collect();
        let got_finals: BTreeSet<Vec<String>> = got.finals.iter().map(|s| s.0.clone()).collect();
        prop_assert_eq!(got_finals, want_finals);
        prop_assert_eq!(canonical(CompositeOlc::from_json(&got.to_json()).unwrap()), canonical(got));
    }

    #[test]
    fn paths_are_walks_from_the_initial_state(seed in any::<u64>(), max_len in 0usize..5) {
        let mut r = rng(seed);
        let olc = CompositeOlc::from(random_olc(&mut r, "X", 5, false));
        let paths = olc_paths(&olc, max_len);
        for p in &paths {
            prop_assert!(p.transitions.len() <= max_len);
            let mut at = olc.initial.clone();
            for id in &p.transitions {
                let t = olc.transition(id).unwrap();
                prop_assert_eq!(&t.source, &at);
                at = t.target.clone();
            }
            prop_assert_eq!(p.complete, olc.finals.contains(&at));
            if let Some((_, prefix)) = p.transitions.split_last() {
                prop_assert!(paths.iter().any(|q| &q.transitions[..] == prefix));
            }
        }
    }
}
