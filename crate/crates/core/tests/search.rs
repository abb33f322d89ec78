mod common;

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;
use swrbd_core::presets::{parse_document, preset_document};
use swrbd_core::search::{
    adjunctive_range, check_minimality, finish_report, solve_candidate, tally_indices,
    verify_lemma_hypothesis, Arithmetic, CandidateSpace, ConfigError, SearchError, StageCounts,
};
use swrbd_core::{
    load_preset, parse_config, run_pipeline, run_pipeline_with, serialize_config, BigRat,
    ClassVector, PipelineOptions, SearchConfig, StageReport,
};

use common::{canonical, cv, direct_pair, synthetic_document};

fn int(x: i64) -> BigRat {
    BigRat::from_integer(x.into())
}

fn repair_evals(doc: &swrbd_core::ConfigDocument, k: &[i64]) -> Vec<i64> {
    doc.chain
        .classes
        .iter()
        .chain(&doc.spheres)
        .map(|c| direct_pair(&doc.gram, k, c))
        .collect()
}

#[test]
fn adjunctive_ranges() {
    let p = load_preset("park-p").unwrap();
    let s = p.spheres();
    assert_eq!(adjunctive_range(&s[0]), vec![-2, 0, 2]);
    assert_eq!(adjunctive_range(&s[6]).len(), 10);
    let q = load_preset("park-q").unwrap();
    let s1 = q.spheres().iter().find(|s| s.p() == 3).unwrap();
    assert_eq!(adjunctive_range(s1), vec![-3, -1, 1, 3]);
    let syn = SearchConfig::from_document(&synthetic_document()).unwrap();
    assert_eq!(adjunctive_range(&syn.spheres()[2]), vec![-1, 1]);
}

#[test]
fn canonical_class_round_trips_through_solve() {
    for (label, tuple) in [
        ("park-p", vec![7, 0, 0, 0, 0, 0]),
        ("park-q", vec![5, 0, 0, 0]),
    ] {
        let config = load_preset(label).unwrap();
        let doc = config.document();
        let v: Vec<i64> = canonical(doc.rank).to_i64s().unwrap();
        let evals = repair_evals(doc, &v);
        assert_eq!(evals[..tuple.len()], tuple[..]);
        let k = solve_candidate(&config, &tuple, &evals[tuple.len()..]).unwrap();
        assert_eq!(k.to_integral().unwrap(), cv(&v), "{label}");
    }
}

#[test]
fn canonical_sphere_evaluations() {
    let p = load_preset("park-p").unwrap();
    let k = solve_candidate(&p, &[7, 0, 0, 0, 0, 0], &[0, 0, 0, 0, 0, -1, -1, 0]).unwrap();
    assert_eq!(k.to_integral().unwrap(), canonical(14));
    let q = load_preset("park-q").unwrap();
    let k = solve_candidate(&q, &[5, 0, 0, 0], &[0, 0, 0, 0, 0, 0, 0, 1, 1]).unwrap();
    assert_eq!(k.to_integral().unwrap(), canonical(13));
}

#[test]
fn zero_evaluations_give_zero_class() {
    for label in ["park-p", "park-q"] {
        let config = load_preset(label).unwrap();
        let r = config.chain().classes().len();
        let s = config.spheres().len();
        let k = solve_candidate(&config, &vec![0; r], &vec![0; s]).unwrap();
        assert!(k.coords().iter().all(Zero::is_zero));
    }
}

#[test]
fn solve_checks_arity() {
    let config = load_preset("park-q").unwrap();
    assert!(matches!(
        solve_candidate(&config, &[5, 0, 0], &[0; 9]),
        Err(SearchError::Arity {
            expected: 4,
            found: 3,
            ..
        })
    ));
    assert!(matches!(
        solve_candidate(&config, &[5, 0, 0, 0], &[0; 8]),
        Err(SearchError::Arity {
            expected: 9,
            found: 8,
            ..
        })
    ));
}

#[test]
fn empty_tuple_list_gives_empty_funnel() {
    let mut doc = synthetic_document();
    doc.chain.extension_tuples.clear();
    let config = SearchConfig::from_document(&doc).unwrap();
    let report = run_pipeline(&config);
    assert_eq!(report.counts, StageCounts::default());
    assert!(report.basic_classes.is_empty());
    assert!(report.lemma_verified);
    assert_eq!(report.minimal, Some(true));
}

#[test]
fn canonical_pairings_have_opposite_signs() {
    for (label, kh, hh) in [("park-p", 49, 197), ("park-q", 95, 455)] {
        let config = load_preset(label).unwrap();
        let form = config.form();
        let v = canonical(form.rank());
        assert_eq!(form.pair(&v, config.h()).unwrap(), BigInt::from(kh));
        assert_eq!(form.pair(&v, config.h_prime()).unwrap(), BigInt::from(-4));
        assert_eq!(
            form.pair(config.h(), config.h_prime()).unwrap(),
            BigInt::from(hh)
        );
    }
}

#[test]
fn preset_reports_are_lemma_verified_and_minimal() {
    for (label, doubled) in [("park-p", 8), ("park-q", 4)] {
        let config = load_preset(label).unwrap();
        let report = run_pipeline(&config);
        assert_eq!(report.zero_pairing_diagnostics, 0);
        assert!(verify_lemma_hypothesis(&config, &report));
        assert_eq!(check_minimality(&config, &report), Ok(true));
        let k = &report.basic_classes[0];
        assert_eq!(&-k, &report.basic_classes[1]);
        let two_k = k.scale(2);
        assert_eq!(
            config
                .chain()
                .blown_down_square(config.form(), &two_k)
                .unwrap(),
            int(doubled)
        );
        let c = report.counts;
        assert!(c.candidates >= c.characteristic);
        assert!(c.characteristic >= c.dimension);
        assert!(c.dimension >= c.basic);
    }
}

#[test]
fn lemma_fails_on_positive_dimensional_class() {
    let config = load_preset("park-p").unwrap();
    // PD(A) has ambient square 0, four above the bound.
    let k = ClassVector::unit(14, 0);
    assert_eq!(
        config.form().square(&k).unwrap(),
        config.form().derived_bound() + 4
    );
    assert!(!config
        .chain()
        .formal_dimension(config.form(), &k)
        .unwrap()
        .is_zero());
    let mut report = run_pipeline(&config);
    report.basic_classes.push(k);
    report.lemma_verified = verify_lemma_hypothesis(&config, &report);
    assert!(!report.lemma_verified);
    assert_eq!(
        check_minimality(&config, &report),
        Err(SearchError::IncompleteBasicClasses)
    );
}

#[test]
fn minimality_fails_on_blow_up_witness() {
    let config = SearchConfig::from_document(&synthetic_document()).unwrap();
    // (2,0,2,0) is orthogonal to R0 and has square -4.
    let w = cv(&[2, 0, 2, 0]);
    assert_eq!(
        config.chain().blown_down_square(config.form(), &w).unwrap(),
        int(-4)
    );
    let v = cv(&[0, 2, 1, 1]);
    let report = StageReport {
        counts: StageCounts::default(),
        basic_classes: vec![v.clone(), &v - &w],
        zero_pairing_diagnostics: 0,
        lemma_verified: true,
        minimal: None,
    };
    assert_eq!(check_minimality(&config, &report), Ok(false));
    let single = StageReport {
        basic_classes: vec![v],
        ..report
    };
    assert_eq!(check_minimality(&config, &single), Ok(true));
}

#[test]
fn narrow_and_wide_arithmetic_agree() {
    for label in ["park-p", "park-q"] {
        let config = load_preset(label).unwrap();
        let n = CandidateSpace::new(&config).len();
        let sample = || (0..n).step_by(53);
        let auto = tally_indices(&config, sample(), Arithmetic::Auto);
        let wide = tally_indices(&config, sample(), Arithmetic::Wide);
        assert_eq!(auto, wide, "{label}");
        assert!(auto.counts.characteristic > 0);
    }
    let syn = SearchConfig::from_document(&synthetic_document()).unwrap();
    let wide = PipelineOptions {
        arithmetic: Arithmetic::Wide,
        ..PipelineOptions::default()
    };
    assert_eq!(run_pipeline(&syn), run_pipeline_with(&syn, &wide));
}

#[test]
fn candidate_space_decodes_mixed_radix() {
    let config = SearchConfig::from_document(&synthetic_document()).unwrap();
    let space = CandidateSpace::new(&config);
    assert_eq!(space.len(), 2 * 3 * 6 * 2);
    assert_eq!(space.max_abs_rhs(), 5);
    let mut rhs = [0i64; 4];
    space.decode(0, &mut rhs);
    assert_eq!(rhs, [2, -2, -5, -1]);
    space.decode(1, &mut rhs);
    assert_eq!(rhs, [2, -2, -5, 1]);
    space.decode(space.len() - 1, &mut rhs);
    assert_eq!(rhs, [-2, 2, 5, 1]);
}

#[test]
fn presets_load_with_expected_shapes() {
    let p = load_preset("park-p").unwrap();
    assert_eq!(
        (
            p.form().rank(),
            p.chain().classes().len(),
            p.spheres().len()
        ),
        (14, 6, 8)
    );
    let q = load_preset("park-q").unwrap();
    assert_eq!(
        (
            q.form().rank(),
            q.chain().classes().len(),
            q.spheres().len()
        ),
        (13, 4, 9)
    );
    assert!(matches!(
        load_preset("park-x"),
        Err(ConfigError::UnknownPreset(_))
    ));
}

#[test]
fn serialization_round_trips() {
    for label in ["park-p", "park-q"] {
        let config = load_preset(label).unwrap();
        assert_eq!(parse_config(&serialize_config(&config)).unwrap(), config);
    }
}

#[test]
fn altered_sphere_is_rejected_as_non_orthogonal() {
    let mut doc = preset_document("park-p").unwrap();
    let mut s1 = vec![0i64; 14];
    s1[2 + 4] = 1; // E5
    s1[2 + 6] = -1; // E7
    doc.spheres[0] = s1.clone();
    let r5 = &doc.chain.classes[5];
    assert_ne!(direct_pair(&doc.gram, &s1, r5), 0);
    let err = SearchConfig::from_document(&doc).unwrap_err();
    assert!(
        matches!(err, ConfigError::SphereNotOrthogonal { sphere: 1, .. }),
        "{err}"
    );
    assert!(err.to_string().starts_with("sphere S1 is not orthogonal"));
}

#[test]
fn missing_basis_class_is_an_arity_error() {
    let mut doc = preset_document("park-p").unwrap();
    doc.spheres.pop();
    let err = SearchConfig::from_document(&doc).unwrap_err();
    assert!(
        matches!(
            err,
            ConfigError::Arity {
                expected: 14,
                found: 13,
                ..
            }
        ),
        "{err}"
    );
}

#[test]
fn schema_violations_are_reported() {
    let doc = preset_document("park-q").unwrap();
    let mut value = serde_json::to_value(&doc).unwrap();
    value.as_object_mut().unwrap().remove("H");
    let err = parse_document(&value.to_string()).unwrap_err();
    assert!(
        matches!(err, ConfigError::Schema(ref m) if m.contains("H")),
        "{err}"
    );
}

#[test]
fn non_symmetric_gram_is_rejected() {
    let mut doc = synthetic_document();
    doc.gram[0][2] = 1;
    let err = SearchConfig::from_document(&doc).unwrap_err();
    assert!(err.to_string().contains("not symmetric"), "{err}");
}

#[test]
fn bad_tuples_are_rejected() {
    let mut doc = preset_document("park-q").unwrap();
    doc.chain.extension_tuples[0][0] += 2;
    assert!(matches!(
        SearchConfig::from_document(&doc),
        Err(ConfigError::Blowdown(_))
    ));
    let mut doc = preset_document("park-q").unwrap();
    doc.chain.extension_tuples[0][1] += 1;
    assert!(matches!(
        SearchConfig::from_document(&doc),
        Err(ConfigError::Blowdown(_))
    ));
}

#[test]
fn chamber_conditions_are_enforced() {
    let mut doc = synthetic_document();
    doc.h_prime = doc.h.iter().map(|x| -x).collect();
    assert!(matches!(
        SearchConfig::from_document(&doc),
        Err(ConfigError::ChambersMisaligned { .. })
    ));
    let mut doc = synthetic_document();
    doc.h = vec![1, 0, 0, 0];
    assert!(SearchConfig::from_document(&doc).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn any_partition_of_the_space_gives_the_same_report(
        idx in Just((0..72u64).collect::<Vec<_>>()).prop_shuffle(),
        cut in 0usize..=72,
        chunk in 1u64..100,
    ) {
        let config = SearchConfig::from_document(&synthetic_document()).unwrap();
        let reference = run_pipeline(&config);
        prop_assert_eq!(CandidateSpace::new(&config).len(), 72);
        let (a, b) = idx.split_at(cut);
        let tally = tally_indices(&config, b.iter().copied(), Arithmetic::Auto)
            .merge(tally_indices(&config, a.iter().copied(), Arithmetic::Auto));
        prop_assert_eq!(finish_report(&config, tally), reference.clone());
        let opts = PipelineOptions { chunk_size: chunk, threads: Some(2), ..PipelineOptions::default() };
        prop_assert_eq!(run_pipeline_with(&config, &opts), reference);
    }
}
