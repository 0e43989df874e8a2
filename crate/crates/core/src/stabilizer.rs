//! Stabilizer generators of cluster states, correlation surfaces, parity checks,
//! measurement patterns and the membership / compatibility predicates.

use crate::chain::{build_shrunk_lattice, Chain, ChainComplex, ElementKey, ElementKind};
use crate::color::{Color, Primality};
use crate::error::{Error, Result};
use crate::f2::{Basis, BitVec};
use crate::graph::{ClusterGraph, Link, Role};
use crate::pauli::PauliOperator;
use crate::region::SimplifiedRegion;
use std::collections::{BTreeSet, HashMap};

/// S(v) = X_v ∏ Z_u over graph neighbours u.
pub fn sg_around(graph: &ClusterGraph, v: usize) -> Result<PauliOperator> {
    if v >= graph.len() {
        return Err(Error::InvalidInput(format!("unknown qubit {v}")));
    }
    Ok(PauliOperator::new([v], graph.neighbors(v).iter().copied()))
}

/// L-type generator: product of the C-type generators at both ends of a link.
pub fn l_type_sg(graph: &ClusterGraph, link: &Link) -> Result<PauliOperator> {
    let [a, b] = link.qubits;
    if graph.qubits[a].role != Role::Cq || graph.qubits[b].role != Role::Cq || a == b {
        return Err(Error::InvalidInput("a link joins two distinct CQs".into()));
    }
    Ok(sg_around(graph, a)?.mul(&sg_around(graph, b)?))
}

/// Same-layer CQs joined to `cq` by links of each color.
pub fn link_partners(graph: &ClusterGraph, cq: usize) -> Result<[usize; 3]> {
    let q = &graph.qubits[cq];
    let v = graph.vertex_of(cq).ok_or_else(|| Error::InvalidInput(format!("qubit {cq} is not a CQ")))?;
    let lat = graph.lattice()?;
    let mut out = [0; 3];
    for c in Color::ALL {
        let w = lat
            .partner(v, c)
            .ok_or_else(|| Error::InvalidInput(format!("CQ {cq} has no {c} link")))?;
        out[c.index()] = graph.cq(w, q.t).expect("partner in same layer");
    }
    Ok(out)
}

/// J-type generator: product of the C-type generators of the three link partners.
pub fn j_type_sg(graph: &ClusterGraph, cq: usize) -> Result<PauliOperator> {
    let partners = link_partners(graph, cq)?;
    let mut op = PauliOperator::identity();
    for p in partners {
        op = op.mul(&sg_around(graph, p)?);
    }
    Ok(op)
}

/// Correlation surface X(Q(h2)) Z(Q(∂h2)).
pub fn correlation_surface(complex: &ChainComplex, h2: &Chain) -> Result<PauliOperator> {
    if h2.grade != 2 {
        return Err(Error::ContractViolation(format!("correlation surface needs a 2-chain, got grade {}", h2.grade)));
    }
    let b = complex.boundary(h2)?;
    Ok(PauliOperator::new(complex.qubits_of(h2), complex.qubits_of(&b)))
}

fn symplectic_vector(n: usize, op: &PauliOperator) -> BitVec {
    BitVec::from_ones(2 * n, op.x_support().iter().copied().chain(op.z_support().iter().map(|&q| q + n)))
}

/// Membership oracle for the subgroup generated by {S(v) : v ∉ q_in}.
pub struct StabilizerOracle {
    n: usize,
    basis: Basis,
}

impl StabilizerOracle {
    pub fn new(graph: &ClusterGraph, q_in: &BTreeSet<usize>) -> StabilizerOracle {
        let n = graph.len();
        let mut basis = Basis::new();
        for v in 0..n {
            if !q_in.contains(&v) {
                basis.insert(symplectic_vector(n, &sg_around(graph, v).expect("valid qubit")));
            }
        }
        StabilizerOracle { n, basis }
    }

    pub fn contains(&self, op: &PauliOperator) -> bool {
        self.basis.contains(&symplectic_vector(self.n, op))
    }
}

/// Whether `op` lies in the group generated by the SGs centered outside `q_in`
/// (F2 elimination on symplectic vectors).
pub fn is_stabilizer(op: &PauliOperator, graph: &ClusterGraph, q_in: &BTreeSet<usize>) -> bool {
    StabilizerOracle::new(graph, q_in).contains(op)
}

/// Independent route: a graph-state stabilizer is fixed by its X-support, so `op` is a member
/// iff it equals ∏ S(v) over its X-support and that support avoids `q_in`.
pub fn is_stabilizer_by_reconstruction(op: &PauliOperator, graph: &ClusterGraph, q_in: &BTreeSet<usize>) -> bool {
    if op.x_support().iter().any(|q| q_in.contains(q) || *q >= graph.len()) {
        return false;
    }
    let mut rebuilt = PauliOperator::identity();
    for &v in op.x_support() {
        rebuilt = rebuilt.mul(&sg_around(graph, v).expect("valid qubit"));
    }
    &rebuilt == op
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MeasBasis {
    X,
    Y,
    Z,
    Unmeasured,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RegionLabel {
    Vacuum,
    Defect,
    YPlane,
    Injection,
}

impl RegionLabel {
    pub fn basis(self) -> MeasBasis {
        match self {
            RegionLabel::Vacuum | RegionLabel::Injection => MeasBasis::X,
            RegionLabel::Defect => MeasBasis::Z,
            RegionLabel::YPlane => MeasBasis::Y,
        }
    }
}

/// Measurement basis of every qubit, derived from region labels.
#[derive(Clone, Debug)]
pub struct MeasurementPattern {
    labels: Vec<Option<RegionLabel>>,
}

impl MeasurementPattern {
    /// Every qubit in the vacuum.
    pub fn vacuum(n: usize) -> Self {
        MeasurementPattern { labels: vec![Some(RegionLabel::Vacuum); n] }
    }

    pub fn with_region(mut self, qubits: impl IntoIterator<Item = usize>, label: RegionLabel) -> Self {
        for q in qubits {
            self.labels[q] = Some(label);
        }
        self
    }

    pub fn unmeasured(mut self, qubits: impl IntoIterator<Item = usize>) -> Self {
        for q in qubits {
            self.labels[q] = None;
        }
        self
    }

    pub fn label(&self, q: usize) -> Option<RegionLabel> {
        self.labels[q]
    }

    pub fn basis(&self, q: usize) -> MeasBasis {
        self.labels[q].map_or(MeasBasis::Unmeasured, RegionLabel::basis)
    }
}

/// True iff at every measured qubit outside `q_out` the operator acts as identity or as the
/// measured Pauli.
pub fn is_compatible(op: &PauliOperator, pattern: &MeasurementPattern, q_out: &BTreeSet<usize>) -> bool {
    op.support().into_iter().all(|q| {
        if q_out.contains(&q) {
            return true;
        }
        let want = match pattern.basis(q) {
            MeasBasis::Unmeasured => return true,
            MeasBasis::X => 'X',
            MeasBasis::Y => 'Y',
            MeasBasis::Z => 'Z',
        };
        op.at(q) == want
    })
}

/// The six shrunk lattices of one CCCS.
pub struct ShrunkLattices {
    complexes: HashMap<(Primality, Color), ChainComplex>,
}

impl ShrunkLattices {
    pub fn build(graph: &ClusterGraph) -> Result<Self> {
        let mut complexes = HashMap::new();
        for p in [Primality::Primal, Primality::Dual] {
            for c in Color::ALL {
                complexes.insert((p, c), build_shrunk_lattice(graph, p, c)?);
            }
        }
        Ok(ShrunkLattices { complexes })
    }

    pub fn get(&self, p: Primality, c: Color) -> &ChainComplex {
        &self.complexes[&(p, c)]
    }

    pub fn get_mut(&mut self, p: Primality, c: Color) -> &mut ChainComplex {
        self.complexes.get_mut(&(p, c)).expect("all six complexes exist")
    }

    /// Cells keyed by the AQ `aq`: one per complex of primality opposite to the AQ and
    /// color different from the AQ's.
    pub fn cells_of(&self, graph: &ClusterGraph, aq: usize) -> Result<Vec<(&ChainComplex, usize)>> {
        let q = &graph.qubits[aq];
        let (Role::Aq, Some(color)) = (q.role, q.color) else {
            return Err(Error::InvalidInput(format!("qubit {aq} is not an AQ")));
        };
        let f = graph.face_of(aq).expect("AQ sits on a face");
        let p = q.primality.opposite();
        let mut out = Vec::new();
        for c in color.others() {
            let cx = self.get(p, c);
            if let Some(i) = cx.find(ElementKind::Cell, ElementKey::Face(f), q.t) {
                out.push((cx, i));
            }
        }
        if out.len() != 2 {
            return Err(Error::InvalidInput(format!("AQ {aq} lies on the time boundary; its cell is incomplete")));
        }
        Ok(out)
    }
}

/// X on the boundary of a cell.
pub fn cell_parity_check(complex: &ChainComplex, cell: usize) -> Result<PauliOperator> {
    let faces = complex.boundary(&Chain::new(3, [cell]))?;
    Ok(PauliOperator::x_on(complex.qubits_of(&faces)))
}

/// Parity check keyed by an AQ. Built from both cells the AQ keys; they must coincide.
pub fn parity_check(lattices: &ShrunkLattices, graph: &ClusterGraph, aq: usize) -> Result<PauliOperator> {
    let cells = lattices.cells_of(graph, aq)?;
    let a = cell_parity_check(cells[0].0, cells[0].1)?;
    let b = cell_parity_check(cells[1].0, cells[1].1)?;
    if a != b {
        return Err(Error::ContractViolation(format!("the two cells keyed by AQ {aq} give different PCs")));
    }
    Ok(a)
}

/// PC opened along `face` of `cell`: PC · CS(face).
pub fn open_pc(complex: &ChainComplex, cell: usize, face: usize) -> Result<PauliOperator> {
    let faces = complex.boundary(&Chain::new(3, [cell]))?;
    if !faces.elements.contains(&face) {
        return Err(Error::InvalidInput("the face is not on the cell boundary".into()));
    }
    Ok(cell_parity_check(complex, cell)?.mul(&correlation_surface(complex, &Chain::new(2, [face]))?))
}

/// One constituent of a hybrid PC: the AQ keying it and whether it is opened toward the other.
#[derive(Clone, Copy, Debug)]
pub struct HybridSide {
    pub aq: usize,
    pub open: bool,
}

/// Product of a primal and a dual PC of the same 2D face in adjacent layers, each optionally
/// opened along its spacelike face facing the other constituent.
pub fn hybrid_pc(lattices: &ShrunkLattices, graph: &ClusterGraph, a: HybridSide, b: HybridSide) -> Result<PauliOperator> {
    let (qa, qb) = (&graph.qubits[a.aq], &graph.qubits[b.aq]);
    if qa.role != Role::Aq || qb.role != Role::Aq {
        return Err(Error::InvalidInput("hybrid constituents are keyed by AQs".into()));
    }
    if qa.color != qb.color || graph.face_of(a.aq) != graph.face_of(b.aq) {
        return Err(Error::InvalidInput("hybrid constituents must share the same colored face".into()));
    }
    if qa.t.abs_diff(qb.t) != 1 {
        return Err(Error::InvalidInput("hybrid constituents must be adjacent in time".into()));
    }
    if !a.open && !b.open {
        return Err(Error::InvalidInput("a hybrid PC opens at least one constituent".into()));
    }
    let mut op = PauliOperator::identity();
    for (side, other_t) in [(a, qb.t), (b, qa.t)] {
        let (cx, cell) = lattices.cells_of(graph, side.aq)?[0];
        let pc = if side.open {
            let f = graph.face_of(side.aq).expect("face");
            let face = cx
                .find(ElementKind::SpacelikeFace, ElementKey::Face(f), other_t)
                .ok_or_else(|| Error::InvalidInput("facing spacelike face is outside the graph".into()))?;
            open_pc(cx, cell, face)?
        } else {
            cell_parity_check(cx, cell)?
        };
        op = op.mul(&pc);
    }
    Ok(op)
}

/// A defect along a connected 1-chain of the opposite-primality, same-color complex.
#[derive(Clone, Debug)]
pub struct DefectSpec {
    pub primality: Primality,
    pub color: Color,
    pub chain: Chain,
    pub qubits: Vec<usize>,
}

impl DefectSpec {
    pub fn new(lattices: &ShrunkLattices, primality: Primality, color: Color, chain: Chain) -> Result<DefectSpec> {
        let cx = lattices.get(primality.opposite(), color);
        if !cx.is_connected_one_chain(&chain)? {
            return Err(Error::InvalidInput("defect chain is not connected".into()));
        }
        let qubits = cx.qubits_of(&chain);
        Ok(DefectSpec { primality, color, chain, qubits })
    }
}

/// Z_L on a simplified region: Z along the reference weight-d primal chain. The region's
/// boundaries stand in for the three defects.
pub fn logical_z(region: &SimplifiedRegion) -> Result<PauliOperator> {
    Ok(PauliOperator::z_on(region.logical_chain()?))
}

/// X_L on a simplified region at layer `t0`: X on the first witness string in that layer
/// and Z on the qubits of layer `t0 + 1` adjacent to an odd number of string qubits.
/// This is the future half of the product of the string's generators.
pub fn logical_x(region: &SimplifiedRegion, t0: usize) -> Result<PauliOperator> {
    let g = &region.graph;
    let string: Vec<usize> = region.witnesses[0].iter().copied().filter(|&q| g.qubits[q].t == t0).collect();
    if string.is_empty() {
        return Err(Error::InvalidInput(format!("no witness qubits in layer {t0}")));
    }
    let mut z = Vec::new();
    for &q in &string {
        z.extend(g.neighbors(q).iter().copied().filter(|&n| g.qubits[n].t == t0 + 1));
    }
    Ok(PauliOperator::new(string, crate::pauli::mod2(z)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_cccs;
    use crate::lattice::{build_color_code_lattice, BoundaryKind, LatticeFamily};

    fn graph(layers: usize) -> ClusterGraph {
        let lat = build_color_code_lattice(LatticeFamily::Square488, (2, 2), BoundaryKind::Torus).unwrap();
        build_cccs(&lat, layers).unwrap()
    }

    #[test]
    fn square_aq_generator() {
        let g = graph(5);
        let aq = g.qubits.iter().find(|q| q.color == Some(Color::Red)).unwrap().id;
        let s = sg_around(&g, aq).unwrap();
        assert_eq!((s.x_support().len(), s.z_support().len()), (1, 4));
    }

    #[test]
    fn cq_generators_by_layer() {
        let g = graph(5);
        let mid = g.qubits.iter().find(|q| q.role == Role::Cq && q.t == 2).unwrap().id;
        let first = g.qubits.iter().find(|q| q.role == Role::Cq && q.t == 0).unwrap().id;
        assert_eq!(sg_around(&g, mid).unwrap().z_support().len(), 5);
        assert_eq!(sg_around(&g, first).unwrap().z_support().len(), 4);
    }

    #[test]
    fn joint_identity_and_support() {
        let g = graph(5);
        for q in g.qubits.iter().filter(|q| q.role == Role::Cq) {
            let s0 = sg_around(&g, q.id).unwrap();
            let sj = j_type_sg(&g, q.id).unwrap();
            let mut prod = sj.clone();
            for p in link_partners(&g, q.id).unwrap() {
                let link = g.links.iter().find(|l| l.qubits.contains(&q.id) && l.qubits.contains(&p)).unwrap();
                prod = prod.mul(&l_type_sg(&g, link).unwrap());
            }
            assert_eq!(prod, s0);
            assert!(!sj.x_support().contains(&q.id));
        }
    }

    #[test]
    fn identity_and_single_x() {
        let g = graph(3);
        let q_in: BTreeSet<usize> = [5].into();
        assert!(is_stabilizer(&PauliOperator::identity(), &g, &q_in));
        assert!(!is_stabilizer(&PauliOperator::x_on([5]), &g, &q_in));
        assert!(!is_stabilizer_by_reconstruction(&PauliOperator::x_on([5]), &g, &q_in));
    }

    #[test]
    fn parity_checks_are_unique_and_x_only() {
        let g = graph(5);
        let lats = ShrunkLattices::build(&g).unwrap();
        let mut count = 0;
        for q in g.qubits.iter().filter(|q| q.role == Role::Aq && q.t % 2 == 1) {
            let pc = parity_check(&lats, &g, q.id).unwrap();
            assert!(pc.z_support().is_empty());
            let paqs = pc.x_support().iter().filter(|&&x| g.qubits[x].role == Role::Aq).count();
            assert_eq!(paqs, 2);
            count += 1;
        }
        assert!(count > 0);
        let edge_aq = g.qubits.iter().find(|q| q.role == Role::Aq && q.t == 0).unwrap().id;
        assert!(parity_check(&lats, &g, edge_aq).is_err());
    }

    #[test]
    fn compatibility_basics() {
        let g = graph(3);
        let aq = g.qubits.iter().find(|q| q.role == Role::Aq && q.t == 1).unwrap().id;
        let s = sg_around(&g, aq).unwrap();
        let pat = MeasurementPattern::vacuum(g.len());
        assert!(!is_compatible(&s, &pat, &BTreeSet::new()));
        let out: BTreeSet<usize> = s.z_support().iter().copied().collect();
        assert!(is_compatible(&s, &pat, &out));
    }
}
