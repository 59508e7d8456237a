mod common;

use axplr::fixtures::{appendix_counterexample, running_example};
use axplr::gp::{check_all, check_gp, RandomFrameworkSpec, Verdict};
use axplr::pattern::strictly_more_specific;
use axplr::plr::sigmoid;
use axplr::qbaf::{
    build_qbafc, compute_strengths, framework_to_json, inferred_prediction, parse_framework, postprocess, ArgId,
    Qbafc, Variant,
};
use common::*;
use proptest::prelude::*;

/// Edges join present patterns that are adjacent in the specificity order,
/// oriented by variant, and the extreme ones point to the default argument.
fn assert_covering(fw: &Qbafc) {
    let pat = |id: ArgId| fw.argument(id).unwrap().pattern.clone();
    let ids: Vec<ArgId> = fw.ids().filter(|i| !i.is_default()).collect();
    let below = |x: ArgId, y: ArgId| strictly_more_specific(&pat(x).unwrap(), &pat(y).unwrap());
    let covers = |x: ArgId, y: ArgId| below(x, y) && !ids.iter().any(|&z| below(x, z) && below(z, y));
    for &x in &ids {
        for &y in &ids {
            let want = match fw.variant() {
                Variant::TopDown => covers(x, y),
                Variant::BottomUp => covers(y, x),
            };
            assert_eq!(fw.is_support(x, y).is_some(), want, "{x} -> {y}");
        }
        let extreme = match fw.variant() {
            Variant::TopDown => !ids.iter().any(|&z| below(x, z)),
            Variant::BottomUp => !ids.iter().any(|&z| below(z, x)),
        };
        assert_eq!(fw.is_support(x, ArgId::Default).is_some(), extreme, "{x} -> delta");
    }
    assert_eq!(fw.out_degree(ArgId::Default), 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn default_strength_reproduces_the_model(seed in any::<u64>()) {
        let mut r = rng(seed);
        let model = random_model(&mut r, 8);
        let doc = random_doc(&mut r, 8);
        let pred = model.predict(&doc);
        for variant in Variant::ALL {
            let fw = build_qbafc(&model, &doc, variant);
            let s = compute_strengths(&fw).unwrap();
            let inferred = inferred_prediction(&fw, &s);
            prop_assert_eq!(inferred.class, pred.class);
            let delta = fw.argument(ArgId::Default).unwrap();
            let p_class = model.predict_proba(&model.extract_features(&doc)).unwrap();
            let p_class = if delta.class == 1 { p_class } else { 1.0 - p_class };
            prop_assert!((sigmoid(s[&ArgId::Default]) - p_class).abs() < 1e-9);
            prop_assert!((inferred.probability - pred.probability).abs() < 1e-9);
        }
    }

    #[test]
    fn constructions_are_covering_dags(seed in any::<u64>()) {
        let mut r = rng(seed);
        let model = random_model(&mut r, 10);
        let doc = random_doc(&mut r, 10);
        for variant in Variant::ALL {
            let fw = build_qbafc(&model, &doc, variant);
            prop_assert!(fw.topological_order().is_ok());
            assert_covering(&fw);
            for (a, b, support) in fw.edges() {
                let same = fw.argument(a).unwrap().class == fw.argument(b).unwrap().class;
                prop_assert_eq!(support, same);
            }
        }
    }

    #[test]
    fn postprocessing_takes_absolute_values(seed in any::<u64>()) {
        let mut r = rng(seed);
        let spec = RandomFrameworkSpec::default();
        let fw = spec.generate(&mut r);
        let s = compute_strengths(&fw).unwrap();
        let (post, s2) = postprocess(&fw, &s).unwrap();
        prop_assert!(post.is_post_processed());
        for id in fw.ids() {
            prop_assert!(s2[&id] >= 0.0);
            prop_assert!((s2[&id] - s[&id].abs()).abs() < 1e-12);
            let flipped = s[&id] < 0.0;
            prop_assert_eq!(post.argument(id).unwrap().class != fw.argument(id).unwrap().class, flipped);
        }
        for (a, _, _) in post.edges() {
            prop_assert!(s2[&a] != 0.0);
        }
    }

    #[test]
    fn framework_json_round_trips(seed in any::<u64>()) {
        let mut r = rng(seed);
        let fw = RandomFrameworkSpec::default().generate(&mut r);
        let s = compute_strengths(&fw).unwrap();
        let (back, s_back) = parse_framework(&framework_to_json(&fw, Some(&s))).unwrap();
        prop_assert_eq!(&back, &fw);
        prop_assert_eq!(s_back.as_ref(), Some(&s));
    }
}

#[test]
fn post_processing_preserves_the_prediction() {
    let mut r = rng(9);
    for _ in 0..300 {
        let model = random_model(&mut r, 8);
        let doc = random_doc(&mut r, 8);
        for variant in Variant::ALL {
            let fw = build_qbafc(&model, &doc, variant);
            let s = compute_strengths(&fw).unwrap();
            let (post, s2) = postprocess(&fw, &s).unwrap();
            assert_eq!(inferred_prediction(&post, &s2).class, model.predict(&doc).class);
        }
    }
}

#[test]
fn appendix_witnesses() {
    let (fw, s) = appendix_counterexample();
    let gp2 = check_gp(&fw, &s, 2).unwrap();
    assert!(gp2.violations.iter().any(|w| w.alpha.id == ArgId::Pattern(2)));
    let gp3 = check_gp(&fw, &s, 3).unwrap();
    assert!(gp3.violations.iter().any(|w| w.alpha.id == ArgId::Pattern(1)));

    let (post, s2) = postprocess(&fw, &s).unwrap();
    let violated: Vec<u8> = check_all(&post, &s2)
        .into_iter()
        .filter(|r| r.verdict() == Verdict::Violated)
        .map(|r| r.property)
        .collect();
    assert_eq!(violated, vec![10, 11]);
    let pair = |gp: u8| {
        let r = check_gp(&post, &s2, gp).unwrap();
        r.violations.iter().map(|w| (w.alpha.id, w.beta.as_ref().unwrap().id)).collect::<Vec<_>>()
    };
    assert!(pair(10).contains(&(ArgId::Pattern(4), ArgId::Pattern(5))));
    assert!(pair(11).contains(&(ArgId::Pattern(7), ArgId::Pattern(6))));
    for r in check_all(&post, &s2) {
        for w in &r.violations {
            assert!(w.revalidates(&post, &s2));
        }
    }
}

#[test]
fn running_example_graph_edges() {
    let (model, doc) = running_example();
    let a = ArgId::Pattern;
    let td = build_qbafc(&model, &doc, Variant::TopDown);
    let edges: Vec<_> = td.edges();
    assert_eq!(
        edges,
        vec![
            (a(0), a(1), true),
            (a(0), a(2), false),
            (a(1), ArgId::Default, true),
            (a(2), ArgId::Default, false),
            (a(3), ArgId::Default, false),
        ]
    );
    let bu = build_qbafc(&model, &doc, Variant::BottomUp);
    assert_eq!(
        bu.edges(),
        vec![
            (a(0), ArgId::Default, true),
            (a(1), a(0), true),
            (a(2), a(0), false),
            (a(3), ArgId::Default, false),
        ]
    );
}
