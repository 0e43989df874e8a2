//! Shrunk lattices of a CCCS as F2 chain complexes.
//!
//! For primality P and color c, with s the layer parity of P-colored ancillas:
//!
//! | grade | element                     | layers      | qubits              |
//! |-------|-----------------------------|-------------|---------------------|
//! | 0     | c-face F                    | t ≡ s       | AQ(F, t)            |
//! | 1     | c-face F (timelike)         | t ≡ s + 1   | AQ(F, t)            |
//! | 1     | c-link ℓ (spacelike)        | t ≡ s       | both CQs of ℓ at t  |
//! | 2     | c-link ℓ (timelike)         | t ≡ s + 1   | both CQs of ℓ at t  |
//! | 2     | non-c face G (spacelike)    | t ≡ s       | AQ(G, t)            |
//! | 3     | non-c face G                | t ≡ s + 1   | AQ(G, t)            |

use crate::color::{Color, Primality};
use crate::error::{Error, Result};
use crate::graph::{ClusterGraph, GraphKind};
use crate::pauli::mod2;
use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ElementKind {
    Vertex,
    TimelikeEdge,
    SpacelikeEdge,
    TimelikeFace,
    SpacelikeFace,
    Cell,
}

impl ElementKind {
    pub fn grade(self) -> usize {
        match self {
            ElementKind::Vertex => 0,
            ElementKind::TimelikeEdge | ElementKind::SpacelikeEdge => 1,
            ElementKind::TimelikeFace | ElementKind::SpacelikeFace => 2,
            ElementKind::Cell => 3,
        }
    }

    pub fn is_timelike(self) -> bool {
        matches!(self, ElementKind::TimelikeEdge | ElementKind::TimelikeFace)
    }
}

/// Lattice object an element is keyed by: a face or a link (lattice edge id).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ElementKey {
    Face(usize),
    Link(usize),
}

#[derive(Clone, Debug)]
pub struct Element {
    pub kind: ElementKind,
    pub key: ElementKey,
    pub t: usize,
    pub qubits: Vec<usize>,
    /// Indices into the next lower grade.
    pub boundary: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub primality: Primality,
    pub color: Color,
    pub grades: [Vec<Element>; 4],
    index: HashMap<(ElementKind, ElementKey, usize), usize>,
}

/// An F2 chain: a set of element indices of one grade.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chain {
    pub grade: usize,
    pub elements: Vec<usize>,
}

impl Chain {
    pub fn new(grade: usize, elements: impl IntoIterator<Item = usize>) -> Chain {
        Chain { grade, elements: mod2(elements.into_iter().collect()) }
    }

    pub fn zero(grade: usize) -> Chain {
        Chain { grade, elements: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn add(&self, other: &Chain) -> Result<Chain> {
        if self.grade != other.grade {
            return Err(Error::ContractViolation("adding chains of different grades".into()));
        }
        let mut e = self.elements.clone();
        e.extend_from_slice(&other.elements);
        Ok(Chain::new(self.grade, e))
    }
}

impl ChainComplex {
    pub fn element(&self, grade: usize, i: usize) -> &Element {
        &self.grades[grade][i]
    }

    pub fn find(&self, kind: ElementKind, key: ElementKey, t: usize) -> Option<usize> {
        self.index.get(&(kind, key, t)).copied()
    }

    pub fn boundary(&self, chain: &Chain) -> Result<Chain> {
        if chain.grade == 0 {
            return Err(Error::ContractViolation("boundary of a 0-chain".into()));
        }
        let mut out = Vec::new();
        for &e in &chain.elements {
            out.extend_from_slice(&self.grades[chain.grade][e].boundary);
        }
        Ok(Chain::new(chain.grade - 1, out))
    }

    pub fn qubits_of(&self, chain: &Chain) -> Vec<usize> {
        let mut q: Vec<usize> = chain
            .elements
            .iter()
            .flat_map(|&e| self.grades[chain.grade][e].qubits.iter().copied())
            .collect();
        q.sort_unstable();
        q.dedup();
        q
    }

    /// Whether a 1-chain is connected with at most two endpoints.
    pub fn is_connected_one_chain(&self, chain: &Chain) -> Result<bool> {
        if chain.grade != 1 {
            return Err(Error::ContractViolation("connectivity is defined for 1-chains".into()));
        }
        if chain.is_zero() {
            return Ok(true);
        }
        if self.boundary(chain)?.elements.len() > 2 {
            return Ok(false);
        }
        // Union-find over the vertices touched by the chain.
        let mut parent: HashMap<usize, usize> = HashMap::new();
        fn root(p: &mut HashMap<usize, usize>, x: usize) -> usize {
            let mut r = x;
            while let Some(&n) = p.get(&r) {
                if n == r {
                    break;
                }
                r = n;
            }
            p.insert(x, r);
            r
        }
        for &e in &chain.elements {
            let b = &self.grades[1][e].boundary;
            for &v in b {
                parent.entry(v).or_insert(v);
            }
            if b.len() == 2 {
                let (ra, rb) = (root(&mut parent, b[0]), root(&mut parent, b[1]));
                parent.insert(ra, rb);
            }
        }
        let keys: Vec<usize> = parent.keys().copied().collect();
        let mut roots: Vec<usize> = keys.into_iter().map(|k| root(&mut parent, k)).collect();
        roots.sort_unstable();
        roots.dedup();
        Ok(roots.len() == 1)
    }

    /// Elements of `grade` whose boundary of boundary is nonzero.
    pub fn boundary_violations(&self) -> Vec<(usize, usize)> {
        let mut bad = Vec::new();
        for g in 2..4 {
            for i in 0..self.grades[g].len() {
                let c = Chain::new(g, [i]);
                let bb = self.boundary(&self.boundary(&c).expect("grade >= 1")).expect("grade >= 1");
                if !bb.is_zero() {
                    bad.push((g, i));
                }
            }
        }
        bad
    }

    /// Drops one boundary entry of the given element. Used to exercise failure reporting.
    pub fn corrupt_boundary(&mut self, grade: usize, element: usize) {
        self.grades[grade][element].boundary.pop();
    }

    pub fn counts(&self) -> [usize; 4] {
        [self.grades[0].len(), self.grades[1].len(), self.grades[2].len(), self.grades[3].len()]
    }
}

/// Builds L^{P c} of a CCCS. On open-time graphs, elements whose boundary would leave the
/// layer range are omitted, so the result is always a subcomplex.
pub fn build_shrunk_lattice(graph: &ClusterGraph, primality: Primality, color: Color) -> Result<ChainComplex> {
    if graph.kind == GraphKind::Rtcs {
        return Err(Error::Unsupported("shrunk lattices are defined for CCCS graphs only".into()));
    }
    let lat = graph.lattice()?;
    let s = primality.layer_parity();
    let c_faces: Vec<usize> = lat.faces_of_color(color).map(|f| f.id).collect();
    let other_faces: Vec<usize> = lat.faces.iter().filter(|f| f.color != color).map(|f| f.id).collect();
    let c_links: Vec<usize> = lat.edges.iter().filter(|e| e.color == color).map(|e| e.id).collect();
    let link_ends = |e: usize| -> Option<[usize; 2]> {
        let [a, b] = lat.edges[e].ends;
        Some([lat.vertex_face(a, color)?, lat.vertex_face(b, color)?])
    };
    let face_links = |g: usize| -> Vec<usize> {
        let cyc = &lat.faces[g].cycle;
        let mut out = Vec::new();
        for k in 0..cyc.len() {
            let (a, b) = (cyc[k], cyc[(k + 1) % cyc.len()]);
            if let Some(e) = lat.vertex_edge(a, color) {
                if lat.edges[e].ends.contains(&b) {
                    out.push(e);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    };
    let link_qubits = |e: usize, t: usize| -> Vec<usize> {
        let [a, b] = lat.edges[e].ends;
        let mut q = vec![graph.cq(a, t).expect("cq"), graph.cq(b, t).expect("cq")];
        q.sort_unstable();
        q
    };
    let layers = |parity: usize| (0..graph.num_layers).filter(move |t| t % 2 == parity);

    let mut cx = ChainComplex {
        primality,
        color,
        grades: [Vec::new(), Vec::new(), Vec::new(), Vec::new()],
        index: HashMap::new(),
    };
    let push = |cx: &mut ChainComplex, kind: ElementKind, key: ElementKey, t: usize, qubits: Vec<usize>, boundary: Vec<usize>| {
        let g = kind.grade();
        cx.index.insert((kind, key, t), cx.grades[g].len());
        cx.grades[g].push(Element { kind, key, t, qubits, boundary });
    };

    for t in layers(s) {
        for &f in &c_faces {
            push(&mut cx, ElementKind::Vertex, ElementKey::Face(f), t, vec![graph.aq(f, t).expect("aq")], Vec::new());
        }
    }
    for t in layers(s) {
        for &e in &c_links {
            let Some(ends) = link_ends(e) else { continue };
            let b: Vec<usize> = ends.iter().map(|&f| cx.find(ElementKind::Vertex, ElementKey::Face(f), t).expect("vertex")).collect();
            push(&mut cx, ElementKind::SpacelikeEdge, ElementKey::Link(e), t, link_qubits(e, t), mod2(b));
        }
    }
    for t in layers(1 - s) {
        let (Some(lo), Some(hi)) = (graph.shift_layer(t, -1), graph.shift_layer(t, 1)) else { continue };
        for &f in &c_faces {
            let b = vec![
                cx.find(ElementKind::Vertex, ElementKey::Face(f), lo).expect("vertex"),
                cx.find(ElementKind::Vertex, ElementKey::Face(f), hi).expect("vertex"),
            ];
            push(&mut cx, ElementKind::TimelikeEdge, ElementKey::Face(f), t, vec![graph.aq(f, t).expect("aq")], mod2(b));
        }
    }
    for t in layers(s) {
        for &g in &other_faces {
            let b: Option<Vec<usize>> = face_links(g)
                .into_iter()
                .map(|e| cx.find(ElementKind::SpacelikeEdge, ElementKey::Link(e), t))
                .collect();
            let Some(b) = b else { continue };
            push(&mut cx, ElementKind::SpacelikeFace, ElementKey::Face(g), t, vec![graph.aq(g, t).expect("aq")], mod2(b));
        }
    }
    for t in layers(1 - s) {
        let (Some(lo), Some(hi)) = (graph.shift_layer(t, -1), graph.shift_layer(t, 1)) else { continue };
        for &e in &c_links {
            let Some(ends) = link_ends(e) else { continue };
            let mut b = Vec::new();
            for tt in [lo, hi] {
                match cx.find(ElementKind::SpacelikeEdge, ElementKey::Link(e), tt) {
                    Some(i) => b.push(i),
                    None => continue,
                }
            }
            let mut ok = b.len() == 2;
            for f in ends {
                match cx.find(ElementKind::TimelikeEdge, ElementKey::Face(f), t) {
                    Some(i) => b.push(i),
                    None => ok = false,
                }
            }
            if ok {
                push(&mut cx, ElementKind::TimelikeFace, ElementKey::Link(e), t, link_qubits(e, t), mod2(b));
            }
        }
    }
    for t in layers(1 - s) {
        let (Some(lo), Some(hi)) = (graph.shift_layer(t, -1), graph.shift_layer(t, 1)) else { continue };
        for &g in &other_faces {
            let mut b = Vec::new();
            let mut ok = true;
            for tt in [lo, hi] {
                match cx.find(ElementKind::SpacelikeFace, ElementKey::Face(g), tt) {
                    Some(i) => b.push(i),
                    None => ok = false,
                }
            }
            for e in face_links(g) {
                match cx.find(ElementKind::TimelikeFace, ElementKey::Link(e), t) {
                    Some(i) => b.push(i),
                    None => ok = false,
                }
            }
            if ok {
                push(&mut cx, ElementKind::Cell, ElementKey::Face(g), t, vec![graph.aq(g, t).expect("aq")], mod2(b));
            }
        }
    }
    Ok(cx)
}
