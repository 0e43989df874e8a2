//! Property suite over small torus CCCS graphs and the d = 3 simulation regions.
//! Every property reports how many cases it examined and the first few failures.

use crate::chain::{Chain, ChainComplex, ElementKey, ElementKind};
use crate::color::{Color, Primality};
use crate::error::Result;
use crate::graph::{build_cccs, ClusterGraph, Role};
use crate::lattice::{build_color_code_lattice, BoundaryKind, LatticeFamily};
use crate::pauli::PauliOperator;
use crate::region::{build_simplified_region, CodeFamily};
use crate::stabilizer::{
    correlation_surface, hybrid_pc, is_compatible, is_stabilizer, is_stabilizer_by_reconstruction, j_type_sg, l_type_sg,
    link_partners, logical_x, logical_z, parity_check, sg_around, DefectSpec, HybridSide, MeasurementPattern, RegionLabel,
    ShrunkLattices, StabilizerOracle,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeSet;

const MAX_REPORTED: usize = 5;

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub layers: usize,
    /// Random 2-chains per family for the correlation-surface membership check.
    pub surface_samples: usize,
    /// Drops one boundary entry before the ∂∘∂ check. Exercises failure reporting.
    pub corrupt_boundary: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 0, layers: 5, surface_samples: 200, corrupt_boundary: false }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyResult {
    pub property: String,
    pub target: String,
    pub passed: bool,
    pub cases: usize,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub passed: bool,
    pub results: Vec<PropertyResult>,
}

impl SuiteReport {
    pub fn failed(&self) -> impl Iterator<Item = &PropertyResult> {
        self.results.iter().filter(|r| !r.passed)
    }
}

struct Tally {
    property: &'static str,
    target: String,
    cases: usize,
    failures: Vec<String>,
    failed: usize,
}

impl Tally {
    fn new(property: &'static str, target: impl Into<String>) -> Self {
        Tally { property, target: target.into(), cases: 0, failures: Vec::new(), failed: 0 }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < MAX_REPORTED {
                self.failures.push(what());
            }
        }
    }

    fn finish(self) -> PropertyResult {
        let mut failures = self.failures;
        if self.failed > failures.len() {
            failures.push(format!("... {} failures in total", self.failed));
        }
        PropertyResult {
            property: self.property.into(),
            target: self.target,
            passed: self.failed == 0 && self.cases > 0,
            cases: self.cases,
            failures,
        }
    }
}

/// Torus CCCS used by the suite: 4-8-8 on (2,2) and 6-6-6 on (3,3).
pub fn torus_graph(family: LatticeFamily, layers: usize) -> Result<ClusterGraph> {
    let size = match family {
        LatticeFamily::Square488 => (2, 2),
        LatticeFamily::Hex666 => (3, 3),
    };
    build_cccs(&build_color_code_lattice(family, size, BoundaryKind::Torus)?, layers)
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut results = Vec::new();
    for family in [LatticeFamily::Square488, LatticeFamily::Hex666] {
        let graph = torus_graph(family, cfg.layers)?;
        let lats = ShrunkLattices::build(&graph)?;
        let name = format!("{} torus", family.name());
        results.push(boundary_squared(&lats, &name, cfg.corrupt_boundary));
        results.push(pairwise_commutation(&graph, &lats, &name)?);
        results.push(joint_identity(&graph, &name)?);
        results.push(surface_membership(&graph, &lats, &name, cfg.surface_samples, &mut rng)?);
        results.push(parity_check_uniqueness(&graph, &lats, &name));
        results.push(hybrid_membership(&graph, &lats, &name)?);
        results.push(defect_relations(&graph, &lats, &name)?);
    }
    for code in CodeFamily::ALL {
        results.push(logical_pair(code)?);
    }
    let passed = results.iter().all(|r| r.passed);
    Ok(SuiteReport { seed: cfg.seed, passed, results })
}

fn complexes() -> impl Iterator<Item = (Primality, Color)> {
    [Primality::Primal, Primality::Dual].into_iter().flat_map(|p| Color::ALL.into_iter().map(move |c| (p, c)))
}

fn boundary_squared(lats: &ShrunkLattices, target: &str, corrupt: bool) -> PropertyResult {
    let mut tally = Tally::new("boundary-squared-zero", target);
    for (p, c) in complexes() {
        let mut cx = lats.get(p, c).clone();
        if corrupt && p == Primality::Primal && c == Color::Red {
            cx.corrupt_boundary(3, 0);
        }
        let bad = cx.boundary_violations();
        tally.check(bad.is_empty(), || format!("∂∘∂ ≠ 0 on {} elements of L^({p:?},{c}), first {:?}", bad.len(), bad[0]));
    }
    tally.finish()
}

/// Every SG species and every complete parity check, with a label for reporting.
fn generator_set(graph: &ClusterGraph, lats: &ShrunkLattices) -> Result<Vec<(String, PauliOperator)>> {
    let mut ops = Vec::new();
    for q in &graph.qubits {
        ops.push((format!("S({})", q.id), sg_around(graph, q.id)?));
    }
    for l in &graph.links {
        ops.push((format!("S_L({},{})", l.qubits[0], l.qubits[1]), l_type_sg(graph, l)?));
    }
    for q in graph.qubits.iter().filter(|q| q.role == Role::Cq) {
        ops.push((format!("S_J({})", q.id), j_type_sg(graph, q.id)?));
    }
    for q in graph.qubits.iter().filter(|q| q.role == Role::Aq) {
        if let Ok(pc) = parity_check(lats, graph, q.id) {
            ops.push((format!("PC({})", q.id), pc));
        }
    }
    Ok(ops)
}

fn pairwise_commutation(graph: &ClusterGraph, lats: &ShrunkLattices, target: &str) -> Result<PropertyResult> {
    let mut tally = Tally::new("pairwise-commutation", target);
    let ops = generator_set(graph, lats)?;
    for i in 0..ops.len() {
        for j in i + 1..ops.len() {
            tally.check(ops[i].1.commutes_with(&ops[j].1), || format!("{} anticommutes with {}", ops[i].0, ops[j].0));
        }
    }
    Ok(tally.finish())
}

fn joint_identity(graph: &ClusterGraph, target: &str) -> Result<PropertyResult> {
    let mut tally = Tally::new("joint-identity", target);
    let last = graph.num_layers - 1;
    for q in graph.qubits.iter().filter(|q| q.role == Role::Cq && q.t > 0 && q.t < last) {
        let sj = j_type_sg(graph, q.id)?;
        let mut prod = sj.clone();
        for p in link_partners(graph, q.id)? {
            let link = graph
                .links
                .iter()
                .find(|l| l.qubits.contains(&q.id) && l.qubits.contains(&p))
                .expect("partner shares a link");
            prod = prod.mul(&l_type_sg(graph, link)?);
        }
        let ok = prod == sg_around(graph, q.id)? && !sj.x_support().contains(&q.id);
        tally.check(ok, || format!("S0 != S_L1 S_L2 S_L3 S_J at CQ {}", q.id));
    }
    Ok(tally.finish())
}

/// Random 2-chains in random complexes: CS(h2) is a stabilizer for Q_IN iff Q(h2)
/// avoids Q_IN. Both the elimination oracle and the reconstruction route must agree.
fn surface_membership(
    graph: &ClusterGraph,
    lats: &ShrunkLattices,
    target: &str,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<PropertyResult> {
    let mut tally = Tally::new("surface-stabilizer-equivalence", target);
    let all: Vec<(Primality, Color)> = complexes().collect();
    let mut hits = 0;
    for k in 0..samples {
        let (p, c) = all[rng.gen_range(0..all.len())];
        let cx = lats.get(p, c);
        let n2 = cx.grades[2].len();
        let size = rng.gen_range(1..=6.min(n2));
        let picks: Vec<usize> = (0..n2).collect::<Vec<_>>().choose_multiple(rng, size).copied().collect();
        let h2 = Chain::new(2, picks);
        let cs = correlation_surface(cx, &h2)?;
        let interior: BTreeSet<usize> = cx.qubits_of(&h2).into_iter().collect();
        let mut q_in: BTreeSet<usize> = (0..rng.gen_range(0..3)).map(|_| rng.gen_range(0..graph.len())).collect();
        if k % 2 == 0 {
            let inner: Vec<usize> = interior.iter().copied().collect();
            q_in.insert(*inner.choose(rng).expect("nonempty 2-chain"));
        }
        let expect = interior.is_disjoint(&q_in);
        hits += usize::from(expect);
        let oracle = StabilizerOracle::new(graph, &q_in).contains(&cs);
        let rebuilt = is_stabilizer_by_reconstruction(&cs, graph, &q_in);
        tally.check(oracle == expect && rebuilt == expect, || {
            format!("L^({p:?},{c}) h2={:?} q_in={q_in:?}: expected {expect}, oracle {oracle}, reconstruction {rebuilt}", h2.elements)
        });
    }
    tally.check(hits > 0 && hits < samples, || "sampled Q_IN never separates the two outcomes".into());
    Ok(tally.finish())
}

fn parity_check_uniqueness(graph: &ClusterGraph, lats: &ShrunkLattices, target: &str) -> PropertyResult {
    let mut tally = Tally::new("parity-check-uniqueness", target);
    let last = graph.num_layers - 1;
    for q in graph.qubits.iter().filter(|q| q.role == Role::Aq && q.t > 0 && q.t < last) {
        let pc = parity_check(lats, graph, q.id);
        let ok = matches!(&pc, Ok(op) if op.z_support().is_empty() && !op.is_identity());
        tally.check(ok, || format!("AQ {}: {:?}", q.id, pc.err()));
    }
    tally.finish()
}

fn hybrid_membership(graph: &ClusterGraph, lats: &ShrunkLattices, target: &str) -> Result<PropertyResult> {
    let mut tally = Tally::new("hybrid-pc-membership", target);
    let oracle = StabilizerOracle::new(graph, &BTreeSet::new());
    let last = graph.num_layers - 1;
    let lat = graph.lattice()?;
    for f in &lat.faces {
        for t in 1..last.saturating_sub(1) {
            let (a, b) = (graph.aq(f.id, t).expect("aq"), graph.aq(f.id, t + 1).expect("aq"));
            for (oa, ob) in [(true, false), (false, true), (true, true)] {
                let op = hybrid_pc(lats, graph, HybridSide { aq: a, open: oa }, HybridSide { aq: b, open: ob })?;
                let y = op.y_support();
                let y_layers: BTreeSet<usize> = y.iter().map(|&q| graph.qubits[q].t).collect();
                let y_cqs = y.iter().all(|&q| graph.qubits[q].role == Role::Cq);
                // One open constituent confines Y to one CQ layer; two open ones use both.
                let want: BTreeSet<usize> = match (oa, ob) {
                    (true, true) => [t, t + 1].into(),
                    (true, false) => [t + 1].into(),
                    _ => [t].into(),
                };
                let ok = oracle.contains(&op) && y_cqs && y_layers == want;
                tally.check(ok, || format!("hybrid PC on face {} layers {t},{} open ({oa},{ob})", f.id, t + 1));
            }
        }
    }
    Ok(tally.finish())
}

/// A two-face timelike defect of primality `p` and color `c`: the c-faces at both ends
/// of one c-link, through all layers, joined by that link.
fn two_face_defect(graph: &ClusterGraph, lats: &ShrunkLattices, p: Primality, c: Color) -> Result<(DefectSpec, usize, [usize; 2])> {
    let lat = graph.lattice()?;
    let cx = lats.get(p.opposite(), c);
    let link = lat
        .edges
        .iter()
        .find(|e| e.color == c && lat.vertex_face(e.ends[0], c) != lat.vertex_face(e.ends[1], c))
        .expect("a c-link joins two distinct c-faces");
    let faces = [lat.vertex_face(link.ends[0], c).expect("face"), lat.vertex_face(link.ends[1], c).expect("face")];
    let mut elems = Vec::new();
    for t in 0..graph.num_layers {
        for f in faces {
            elems.extend(cx.find(ElementKind::TimelikeEdge, ElementKey::Face(f), t));
        }
        elems.extend(cx.find(ElementKind::SpacelikeEdge, ElementKey::Link(link.id), t));
    }
    let defect = DefectSpec::new(lats, p, c, Chain::new(1, elems))?;
    Ok((defect, link.id, faces))
}

fn cs_of(cx: &ChainComplex, kind: ElementKind, key: ElementKey, t: usize) -> Option<PauliOperator> {
    cx.find(kind, key, t).map(|i| correlation_surface(cx, &Chain::new(2, [i])).expect("grade 2"))
}

/// Allowed positions of compatible correlation surfaces relative to a P c defect:
/// same-primality c-surfaces may overlap it only when spacelike, other colors never;
/// opposite-primality c-surfaces can end on it, other colors cannot.
fn defect_relations(graph: &ClusterGraph, lats: &ShrunkLattices, target: &str) -> Result<PropertyResult> {
    let mut tally = Tally::new("defect-surface-relations", target);
    let lat = graph.lattice()?;
    for (p, c) in complexes() {
        let (defect, link, faces) = two_face_defect(graph, lats, p, c)?;
        let pattern = MeasurementPattern::vacuum(graph.len()).with_region(defect.qubits.iter().copied(), RegionLabel::Defect);
        let in_defect: BTreeSet<usize> = defect.qubits.iter().copied().collect();
        let ends = |op: &PauliOperator| -> BTreeSet<usize> { op.z_support().iter().copied().collect() };
        let same = lats.get(p, c);
        let near: Vec<usize> = lat.faces.iter().filter(|g| g.color != c).map(|g| g.id).collect();
        let tag = format!("{p:?} {c} defect");

        for t in 0..graph.num_layers {
            if let Some(op) = cs_of(same, ElementKind::TimelikeFace, ElementKey::Link(link), t) {
                let ok = !is_compatible(&op, &pattern, &ends(&op));
                tally.check(ok, || format!("{tag}: timelike same-color surface at t={t} overlaps yet is compatible"));
            }
            for &g in &near {
                if let Some(op) = cs_of(same, ElementKind::SpacelikeFace, ElementKey::Face(g), t) {
                    let ok = is_compatible(&op, &pattern, &ends(&op));
                    tally.check(ok, || format!("{tag}: spacelike same-color surface on face {g} at t={t} is incompatible"));
                }
            }
        }
        for c2 in c.others() {
            let other = lats.get(p, c2);
            for t in 0..graph.num_layers {
                for f in faces {
                    if let Some(op) = cs_of(other, ElementKind::SpacelikeFace, ElementKey::Face(f), t) {
                        if !op.x_support().iter().any(|q| in_defect.contains(q)) {
                            continue;
                        }
                        let ok = !is_compatible(&op, &pattern, &ends(&op));
                        tally.check(ok, || format!("{tag}: {c2} surface through face {f} at t={t} is compatible"));
                    }
                }
            }
        }

        let opp = lats.get(p.opposite(), c);
        let mut ended = 0;
        for t in 0..graph.num_layers {
            if let Some(op) = cs_of(opp, ElementKind::TimelikeFace, ElementKey::Link(link), t) {
                let ok = ends(&op).is_subset(&in_defect) && is_compatible(&op, &pattern, &BTreeSet::new());
                tally.check(ok, || format!("{tag}: opposite-primality surface on the defect link at t={t} cannot end on it"));
                ended += 1;
            }
        }
        tally.check(ended > 0, || format!("{tag}: no opposite-primality surface ends on the defect"));
        for c2 in c.others() {
            let other = lats.get(p.opposite(), c2);
            for (i, el) in other.grades[2].iter().enumerate() {
                let op = correlation_surface(other, &Chain::new(2, [i]))?;
                if !ends(&op).iter().any(|q| in_defect.contains(q)) {
                    continue;
                }
                let ok = !is_compatible(&op, &pattern, &BTreeSet::new());
                tally.check(ok, || format!("{tag}: {c2} surface {:?} at t={} ends on the defect", el.key, el.t));
            }
        }
    }
    Ok(tally.finish())
}

/// X_L and Z_L on the d = 3 region anticommute; X_L agrees with the product of the
/// generators on its string after layer t0.
fn logical_pair(code: CodeFamily) -> Result<PropertyResult> {
    let mut tally = Tally::new("logical-anticommutation", format!("{code} d=3 region"));
    let region = build_simplified_region(code, 3, 3)?;
    let zl = logical_z(&region)?;
    let t0 = region.graph.qubits[zl.z_support()[0]].t;
    let xl = logical_x(&region, t0)?;
    tally.check(!xl.commutes_with(&zl), || "X_L and Z_L commute".into());
    let mut full = PauliOperator::identity();
    for &q in xl.x_support() {
        full = full.mul(&sg_around(&region.graph, q)?);
    }
    let g = &region.graph;
    let future_ok = xl.x_support() == full.x_support()
        && (0..g.len()).filter(|&q| g.qubits[q].t > t0).all(|q| full.at(q) == xl.at(q));
    tally.check(future_ok, || "X_L is not the future half of its generator product".into());
    let stab = is_stabilizer(&full, g, &BTreeSet::new());
    tally.check(stab, || "generator product is not a stabilizer".into());
    Ok(tally.finish())
}
