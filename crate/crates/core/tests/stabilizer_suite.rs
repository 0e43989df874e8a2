use cccs_core::chain::{Chain, ElementKind};
use cccs_core::graph::Role;
use cccs_core::lattice::LatticeFamily;
use cccs_core::pauli::PauliOperator;
use cccs_core::stabilizer::{correlation_surface, is_stabilizer, j_type_sg, l_type_sg, sg_around, ShrunkLattices};
use cccs_core::verify::{run_suite, torus_graph, SuiteConfig};
use cccs_core::{Color, Primality};
use std::collections::BTreeSet;

#[test]
fn default_suite_passes() {
    let report = run_suite(&SuiteConfig::default()).unwrap();
    for r in &report.results {
        assert!(r.passed, "{} on {}: {:?}", r.property, r.target, r.failures);
    }
    let surfaces: usize = report.results.iter().filter(|r| r.property == "surface-stabilizer-equivalence").map(|r| r.cases).sum();
    assert!(surfaces >= 400);
    let names: BTreeSet<&str> = report.results.iter().map(|r| r.property.as_str()).collect();
    for want in [
        "boundary-squared-zero",
        "pairwise-commutation",
        "joint-identity",
        "surface-stabilizer-equivalence",
        "parity-check-uniqueness",
        "hybrid-pc-membership",
        "defect-surface-relations",
        "logical-anticommutation",
    ] {
        assert!(names.contains(want), "{want}");
    }
}

#[test]
fn corrupted_boundary_is_reported() {
    let report = run_suite(&SuiteConfig { corrupt_boundary: true, surface_samples: 10, ..Default::default() }).unwrap();
    assert!(!report.passed);
    let failed: Vec<_> = report.failed().collect();
    assert!(failed.iter().all(|r| r.property == "boundary-squared-zero"));
    assert!(failed[0].failures[0].contains("∂∘∂ ≠ 0"));
}

#[test]
fn suite_is_deterministic_per_seed() {
    let cfg = SuiteConfig { seed: 7, surface_samples: 50, ..Default::default() };
    let a = serde_json::to_string(&run_suite(&cfg).unwrap()).unwrap();
    let b = serde_json::to_string(&run_suite(&cfg).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn single_spacelike_face_is_an_ancilla_generator() {
    let g = torus_graph(LatticeFamily::Square488, 5).unwrap();
    let lats = ShrunkLattices::build(&g).unwrap();
    let cx = lats.get(Primality::Primal, Color::Red);
    let mut seen = 0;
    for (i, el) in cx.grades[2].iter().enumerate() {
        let cs = correlation_surface(cx, &Chain::new(2, [i])).unwrap();
        let expect = match el.kind {
            ElementKind::SpacelikeFace => sg_around(&g, el.qubits[0]).unwrap(),
            _ => {
                let link = g.links.iter().find(|l| l.t == el.t && l.qubits.to_vec() == el.qubits).unwrap();
                l_type_sg(&g, link).unwrap()
            }
        };
        assert_eq!(cs, expect);
        seen += 1;
    }
    assert!(seen > 0);
    assert!(correlation_surface(cx, &Chain::zero(2)).unwrap().is_identity());
    let cell = Chain::new(3, [0]);
    let closed = correlation_surface(cx, &cx.boundary(&cell).unwrap()).unwrap();
    assert!(closed.z_support().is_empty() && !closed.x_support().is_empty());
    assert!(correlation_surface(cx, &Chain::zero(1)).is_err());
}

#[test]
fn joint_generators_commute_with_ancilla_generators() {
    let g = torus_graph(LatticeFamily::Square488, 5).unwrap();
    let aqs: Vec<PauliOperator> = g.qubits.iter().filter(|q| q.role == Role::Aq).map(|q| sg_around(&g, q.id).unwrap()).collect();
    for q in g.qubits.iter().filter(|q| q.role == Role::Cq) {
        let sj = j_type_sg(&g, q.id).unwrap();
        assert!(aqs.iter().all(|a| a.commutes_with(&sj)));
    }
}

#[test]
fn single_x_inside_q_in_is_not_a_stabilizer() {
    let g = torus_graph(LatticeFamily::Hex666, 5).unwrap();
    let q_in: BTreeSet<usize> = [3].into();
    assert!(!is_stabilizer(&PauliOperator::x_on([3]), &g, &q_in));
    assert!(is_stabilizer(&PauliOperator::identity(), &g, &q_in));
    assert!(is_stabilizer(&sg_around(&g, 4).unwrap(), &g, &q_in));
}
