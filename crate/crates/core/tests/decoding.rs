use cccs_core::decoder::{classify_residual, residual, Decoder, ResidualClass};
use cccs_core::graph::Role;
use cccs_core::noise::cycle_rng;
use cccs_core::region::{build_simplified_region, CodeFamily};
use cccs_core::Color;
use rand::seq::SliceRandom;

fn decode_and_classify(code: CodeFamily, d: usize, errors_of: impl Fn(&cccs_core::region::SimplifiedRegion) -> Vec<Vec<usize>>) {
    let r = build_simplified_region(code, d, 2 * d).unwrap();
    let dec = Decoder::new(&r).unwrap();
    for errors in errors_of(&r) {
        let syn = r.syndrome_of(&errors);
        let out = dec.decode(&r, &syn).unwrap();
        let res = residual(&errors, &out.correction);
        assert_eq!(classify_residual(&r, &res).unwrap(), ResidualClass::Trivial, "{code} d={d} errors {errors:?}");
    }
}

#[test]
fn every_single_error_is_corrected_at_distance_three() {
    for code in CodeFamily::ALL {
        decode_and_classify(code, 3, |r| r.eligible.iter().map(|&q| vec![q]).collect());
    }
}

#[test]
fn random_two_errors_are_corrected_at_distance_five() {
    for code in CodeFamily::ALL {
        decode_and_classify(code, 5, |r| {
            let mut rng = cycle_rng(99, 0);
            (0..200).map(|_| r.eligible.choose_multiple(&mut rng, 2).copied().collect()).collect()
        });
    }
}

#[test]
fn random_three_errors_are_corrected_at_distance_seven() {
    for code in CodeFamily::ALL {
        decode_and_classify(code, 7, |r| {
            let mut rng = cycle_rng(5, 1);
            (0..50).map(|_| r.eligible.choose_multiple(&mut rng, 3).copied().collect()).collect()
        });
    }
}

#[test]
fn single_errors_decode_to_themselves_for_some_color() {
    for code in [CodeFamily::Cccs488, CodeFamily::Cccs666] {
        let r = build_simplified_region(code, 3, 4).unwrap();
        let dec = Decoder::new(&r).unwrap();
        for &q in &r.eligible {
            let syn = r.syndrome_of(&[q]);
            let out = dec.decode(&r, &syn).unwrap();
            assert_eq!(out.correction, vec![q], "{code} qubit {q}");
        }
    }
}

#[test]
fn ancilla_error_is_found_by_the_other_colors_first_stage() {
    let r = build_simplified_region(CodeFamily::Cccs666, 5, 4).unwrap();
    let dec = Decoder::new(&r).unwrap();
    for &q in r.eligible.iter().filter(|&&q| r.graph.qubits[q].role == Role::Aq) {
        let qc = r.graph.qubits[q].color.unwrap();
        let syn = r.syndrome_of(&[q]);
        assert_eq!(syn.len(), 2);
        for c in Color::ALL.into_iter().filter(|&c| c != qc) {
            let out = dec.decode_color(&r, c, &syn).unwrap();
            assert_eq!(out.correction, vec![q]);
            assert_eq!(out.matchings[0].len(), 1);
            assert!(out.matchings[1].is_empty());
        }
    }
}

#[test]
fn reference_chain_is_logical_and_stays_so() {
    for code in CodeFamily::ALL {
        let r = build_simplified_region(code, 3, 4).unwrap();
        let chain = r.logical_chain().unwrap();
        assert_eq!(chain.len(), 3);
        assert_eq!(classify_residual(&r, &chain).unwrap(), ResidualClass::Logical);
        let dec = Decoder::new(&r).unwrap();
        assert!(dec.decode(&r, &[]).unwrap().correction.is_empty());
    }
}

#[test]
fn trivial_generators_classify_as_trivial() {
    for code in CodeFamily::ALL {
        let r = build_simplified_region(code, 5, 3).unwrap();
        for g in r.trivial_generators() {
            assert_eq!(classify_residual(&r, &g).unwrap(), ResidualClass::Trivial);
        }
    }
}

#[test]
fn decoding_is_deterministic() {
    let r = build_simplified_region(CodeFamily::Cccs488, 5, 5).unwrap();
    let dec = Decoder::new(&r).unwrap();
    let mut rng = cycle_rng(3, 3);
    let errors: Vec<usize> = r.eligible.choose_multiple(&mut rng, 25).copied().collect();
    let syn = r.syndrome_of(&errors);
    let a = dec.decode(&r, &syn).unwrap();
    let b = dec.decode(&r, &syn).unwrap();
    assert_eq!(a.correction, b.correction);
    assert_eq!(a.color, b.color);
}
