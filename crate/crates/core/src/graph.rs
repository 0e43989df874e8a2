//! 3D cluster-state graphs: CCCS (stacked color-code layers) and RTCS (cubic lattice).

use crate::color::{Color, Primality};
use crate::error::{Error, Result};
use crate::lattice::{Lattice2D, LatticeFamily};
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;
use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Role {
    #[serde(rename = "CQ")]
    Cq,
    #[serde(rename = "AQ")]
    Aq,
    #[serde(rename = "RTCS-face")]
    RtcsFace,
    #[serde(rename = "RTCS-edge")]
    RtcsEdge,
}

/// Where a qubit lives: a lattice vertex or face, or a site of the doubled cubic grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Site {
    Vertex(usize),
    Face(usize),
    Cubic([i64; 3]),
}

/// Region labels attached to qubits of bounded graphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Boundary {
    /// Vertex on the boundary where faces of this color are cut away.
    Colored(Color),
    /// RTCS face on one of the two primal (rough) boundaries.
    Primal(u8),
    /// RTCS edge on one of the two dual (smooth) boundaries; measured in Z.
    Dual(u8),
    TimeStart,
    TimeEnd,
}

impl Boundary {
    pub fn label(self) -> String {
        match self {
            Boundary::Colored(c) => c.to_string(),
            Boundary::Primal(k) => format!("primal-{k}"),
            Boundary::Dual(k) => format!("dual-{k}"),
            Boundary::TimeStart => "time-start".into(),
            Boundary::TimeEnd => "time-end".into(),
        }
    }
}

impl Serialize for Boundary {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.label())
    }
}

#[derive(Clone, Debug)]
pub struct Qubit {
    pub id: usize,
    pub role: Role,
    pub color: Option<Color>,
    pub t: usize,
    pub primality: Primality,
    pub site: Site,
    pub pos: [f64; 2],
    pub boundary: Vec<Boundary>,
}

impl Serialize for Qubit {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Qubit", 7)?;
        st.serialize_field("id", &self.id)?;
        st.serialize_field("role", &self.role)?;
        st.serialize_field("color", &self.color)?;
        st.serialize_field("t", &self.t)?;
        st.serialize_field("primality", &self.primality)?;
        st.serialize_field("pos", &self.pos)?;
        st.serialize_field("boundary", &self.boundary)?;
        st.end()
    }
}

/// Same-layer pair of CQs joined by a colored lattice edge. Not a CZ edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Link {
    pub qubits: [usize; 2],
    pub color: Color,
    pub t: usize,
    pub edge: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphKind {
    Cccs(LatticeFamily),
    Rtcs,
}

#[derive(Clone, Debug)]
pub struct ClusterGraph {
    pub kind: GraphKind,
    pub lattice: Option<Lattice2D>,
    pub num_layers: usize,
    pub periodic_time: bool,
    pub qubits: Vec<Qubit>,
    pub edges: Vec<[usize; 2]>,
    pub links: Vec<Link>,
    adjacency: Vec<Vec<usize>>,
    cq_index: Vec<Vec<usize>>,
    aq_index: Vec<Vec<usize>>,
    cubic_index: HashMap<[i64; 3], usize>,
}

#[derive(Serialize)]
struct GraphDump<'a> {
    qubits: &'a [Qubit],
    edges: &'a [[usize; 2]],
    links: Vec<(usize, usize, Color)>,
}

impl ClusterGraph {
    pub fn len(&self) -> usize {
        self.qubits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qubits.is_empty()
    }

    pub fn neighbors(&self, q: usize) -> &[usize] {
        &self.adjacency[q]
    }

    pub fn degree(&self, q: usize) -> usize {
        self.adjacency[q].len()
    }

    pub fn lattice(&self) -> Result<&Lattice2D> {
        self.lattice.as_ref().ok_or_else(|| Error::Unsupported("RTCS graph has no 2D lattice".into()))
    }

    /// CQ at lattice vertex `v` in layer `t`.
    pub fn cq(&self, v: usize, t: usize) -> Option<usize> {
        self.cq_index.get(t).and_then(|l| l.get(v)).copied()
    }

    /// AQ of lattice face `f` in layer `t`.
    pub fn aq(&self, f: usize, t: usize) -> Option<usize> {
        self.aq_index.get(t).and_then(|l| l.get(f)).copied()
    }

    /// RTCS qubit at a doubled-grid site.
    pub fn cubic(&self, site: [i64; 3]) -> Option<usize> {
        self.cubic_index.get(&site).copied()
    }

    pub fn vertex_of(&self, q: usize) -> Option<usize> {
        match self.qubits[q].site {
            Site::Vertex(v) => Some(v),
            _ => None,
        }
    }

    pub fn face_of(&self, q: usize) -> Option<usize> {
        match self.qubits[q].site {
            Site::Face(f) => Some(f),
            _ => None,
        }
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    /// Layer shifted by `dt`, wrapping when time is periodic.
    pub fn shift_layer(&self, t: usize, dt: i64) -> Option<usize> {
        let n = self.num_layers as i64;
        let s = t as i64 + dt;
        if self.periodic_time {
            Some(s.rem_euclid(n) as usize)
        } else if (0..n).contains(&s) {
            Some(s as usize)
        } else {
            None
        }
    }

    pub fn to_json(&self) -> String {
        let dump = GraphDump {
            qubits: &self.qubits,
            edges: &self.edges,
            links: self.links.iter().map(|l| (l.qubits[0], l.qubits[1], l.color)).collect(),
        };
        serde_json::to_string(&dump).expect("graph serializes")
    }

    /// Assigns ids in (t, position, role) order and builds the adjacency lists.
    fn finish(
        kind: GraphKind,
        lattice: Option<Lattice2D>,
        num_layers: usize,
        periodic_time: bool,
        mut qubits: Vec<(([i64; 2], Role), Qubit)>,
        edges_by_site: Vec<[Site; 2]>,
        edge_layers: Vec<[usize; 2]>,
        links_by_site: Vec<(usize, usize, usize, Color, usize)>,
    ) -> ClusterGraph {
        qubits.sort_by(|a, b| (a.1.t, a.0).cmp(&(b.1.t, b.0)));
        let mut site_index: HashMap<(Site, usize), usize> = HashMap::with_capacity(qubits.len());
        let qubits: Vec<Qubit> = qubits
            .into_iter()
            .enumerate()
            .map(|(id, (_, mut q))| {
                q.id = id;
                site_index.insert((q.site, q.t), id);
                q
            })
            .collect();
        let mut edges: Vec<[usize; 2]> = edges_by_site
            .iter()
            .zip(&edge_layers)
            .map(|(s, t)| {
                let a = site_index[&(s[0], t[0])];
                let b = site_index[&(s[1], t[1])];
                if a < b {
                    [a, b]
                } else {
                    [b, a]
                }
            })
            .collect();
        edges.sort();
        edges.dedup();
        let mut adjacency = vec![Vec::new(); qubits.len()];
        for &[a, b] in &edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for l in &mut adjacency {
            l.sort();
        }
        let mut cq_index = vec![Vec::new(); num_layers];
        let mut aq_index = vec![Vec::new(); num_layers];
        let mut cubic_index = HashMap::new();
        if let Some(lat) = &lattice {
            for t in 0..num_layers {
                cq_index[t] = (0..lat.vertices.len()).map(|v| site_index[&(Site::Vertex(v), t)]).collect();
                aq_index[t] = (0..lat.faces.len()).map(|f| site_index[&(Site::Face(f), t)]).collect();
            }
        }
        for q in &qubits {
            if let Site::Cubic(s) = q.site {
                cubic_index.insert(s, q.id);
            }
        }
        let mut links: Vec<Link> = links_by_site
            .into_iter()
            .map(|(va, vb, t, color, edge)| {
                let a = site_index[&(Site::Vertex(va), t)];
                let b = site_index[&(Site::Vertex(vb), t)];
                Link { qubits: if a < b { [a, b] } else { [b, a] }, color, t, edge }
            })
            .collect();
        links.sort_by_key(|l| l.qubits);
        ClusterGraph {
            kind,
            lattice,
            num_layers,
            periodic_time,
            qubits,
            edges,
            links,
            adjacency,
            cq_index,
            aq_index,
            cubic_index,
        }
    }
}

/// Stacks `num_layers` copies of the lattice into a CCCS.
pub fn build_cccs(lattice: &Lattice2D, num_layers: usize) -> Result<ClusterGraph> {
    build_cccs_with(lattice, num_layers, false)
}

/// CCCS variant; with `periodic_time` the last layer also couples back to the first
/// (needs an even layer count so primality stays consistent).
pub fn build_cccs_with(lattice: &Lattice2D, num_layers: usize, periodic_time: bool) -> Result<ClusterGraph> {
    if num_layers == 0 {
        return Err(Error::InvalidInput("a CCCS needs at least one layer".into()));
    }
    if periodic_time && (num_layers % 2 != 0 || num_layers < 4) {
        return Err(Error::InvalidInput("periodic time needs an even layer count >= 4".into()));
    }
    let mut qubits = Vec::new();
    let mut edges = Vec::new();
    let mut layers = Vec::new();
    let mut links = Vec::new();
    for t in 0..num_layers {
        let layer = Primality::of_layer(t);
        for v in &lattice.vertices {
            let boundary = v.missing.iter().map(|&c| Boundary::Colored(c)).collect();
            let q = Qubit {
                id: 0,
                role: Role::Cq,
                color: None,
                t,
                primality: layer.opposite(),
                site: Site::Vertex(v.id),
                pos: v.pos,
                boundary,
            };
            qubits.push(((v.point, Role::Cq), q));
        }
        for f in &lattice.faces {
            let q = Qubit {
                id: 0,
                role: Role::Aq,
                color: Some(f.color),
                t,
                primality: layer,
                site: Site::Face(f.id),
                pos: f.pos,
                boundary: Vec::new(),
            };
            qubits.push(((f.point, Role::Aq), q));
            for &v in &f.cycle {
                edges.push([Site::Face(f.id), Site::Vertex(v)]);
                layers.push([t, t]);
            }
        }
        for e in &lattice.edges {
            links.push((e.ends[0], e.ends[1], t, e.color, e.id));
        }
        let next = if t + 1 < num_layers {
            Some(t + 1)
        } else if periodic_time {
            Some(0)
        } else {
            None
        };
        if let Some(n) = next {
            for v in &lattice.vertices {
                edges.push([Site::Vertex(v.id), Site::Vertex(v.id)]);
                layers.push([t, n]);
            }
        }
    }
    Ok(ClusterGraph::finish(
        GraphKind::Cccs(lattice.family),
        Some(lattice.clone()),
        num_layers,
        periodic_time,
        qubits,
        edges,
        layers,
        links,
    ))
}

/// Number of odd coordinates of a doubled-grid site (2 = face, 1 = edge).
pub fn odd_count(s: [i64; 3]) -> usize {
    s.iter().filter(|x| x.rem_euclid(2) == 1).count()
}

/// Builds an RTCS on the given doubled-grid sites. Faces couple to their four edges
/// when present; `period` wraps coordinates for a torus.
pub fn build_cubic(sites: &[[i64; 3]], period: Option<[i64; 3]>, labels: &HashMap<[i64; 3], Vec<Boundary>>) -> ClusterGraph {
    let wrap = |s: [i64; 3]| match period {
        Some(p) => [s[0].rem_euclid(p[0]), s[1].rem_euclid(p[1]), s[2].rem_euclid(p[2])],
        None => s,
    };
    let present: std::collections::HashSet<[i64; 3]> = sites.iter().map(|&s| wrap(s)).collect();
    let mut qubits = Vec::new();
    let mut edges = Vec::new();
    let mut layers = Vec::new();
    let mut max_t = 0;
    for &s in sites {
        let s = wrap(s);
        let face = odd_count(s) == 2;
        let t = s[2] as usize;
        max_t = max_t.max(t);
        let q = Qubit {
            id: 0,
            role: if face { Role::RtcsFace } else { Role::RtcsEdge },
            color: None,
            t,
            primality: if face { Primality::Primal } else { Primality::Dual },
            site: Site::Cubic(s),
            pos: [s[0] as f64 / 2.0, s[1] as f64 / 2.0],
            boundary: labels.get(&s).cloned().unwrap_or_default(),
        };
        qubits.push((([s[0], s[1]], q.role), q));
        if face {
            for axis in 0..3 {
                if s[axis].rem_euclid(2) == 0 {
                    continue;
                }
                for dx in [-1, 1] {
                    let mut n = s;
                    n[axis] += dx;
                    let n = wrap(n);
                    if present.contains(&n) {
                        edges.push([Site::Cubic(s), Site::Cubic(n)]);
                        layers.push([t, n[2] as usize]);
                    }
                }
            }
        }
    }
    let num_layers = period.map(|p| p[2] as usize).unwrap_or(max_t + 1);
    ClusterGraph::finish(GraphKind::Rtcs, None, num_layers, period.is_some(), qubits, edges, layers, Vec::new())
}

/// RTCS on a cubic torus of Lx × Ly × Lz cells.
pub fn build_rtcs(size: (usize, usize, usize)) -> Result<ClusterGraph> {
    let (lx, ly, lz) = size;
    if lx < 2 || ly < 2 || lz < 2 {
        return Err(Error::InvalidInput(format!("RTCS size {lx}x{ly}x{lz} is below 2")));
    }
    let p = [2 * lx as i64, 2 * ly as i64, 2 * lz as i64];
    let mut sites = Vec::new();
    for x in 0..p[0] {
        for y in 0..p[1] {
            for z in 0..p[2] {
                let s = [x, y, z];
                if matches!(odd_count(s), 1 | 2) {
                    sites.push(s);
                }
            }
        }
    }
    Ok(build_cubic(&sites, Some(p), &HashMap::new()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_color_code_lattice, BoundaryKind};

    fn torus488() -> Lattice2D {
        build_color_code_lattice(LatticeFamily::Square488, (2, 2), BoundaryKind::Torus).unwrap()
    }

    #[test]
    fn cccs_three_layers() {
        let g = build_cccs(&torus488(), 3).unwrap();
        assert_eq!(g.len(), 72);
        assert_eq!(g.edges.len(), 176);
        let degree_sum: usize = (0..g.len()).map(|q| g.degree(q)).sum();
        assert_eq!(degree_sum, 2 * g.edges.len());
    }

    #[test]
    fn single_layer_has_no_time_edges() {
        let lat = torus488();
        let g = build_cccs(&lat, 1).unwrap();
        assert_eq!(g.edges.len(), 2 * lat.edges.len());
    }

    #[test]
    fn degrees_follow_construction() {
        let lat = torus488();
        let g = build_cccs(&lat, 3).unwrap();
        for q in &g.qubits {
            match q.site {
                Site::Face(f) => assert_eq!(g.degree(q.id), lat.faces[f].cycle.len()),
                Site::Vertex(_) => {
                    let time = if q.t == 1 { 2 } else { 1 };
                    assert_eq!(g.degree(q.id), 3 + time);
                }
                Site::Cubic(_) => unreachable!(),
            }
        }
    }

    #[test]
    fn primality_rules() {
        let g = build_cccs(&torus488(), 4).unwrap();
        for q in &g.qubits {
            let layer = Primality::of_layer(q.t);
            match q.role {
                Role::Aq => assert_eq!(q.primality, layer),
                Role::Cq => assert_eq!(q.primality, layer.opposite()),
                _ => unreachable!(),
            }
        }
        for &[a, b] in &g.edges {
            assert_ne!(g.qubits[a].primality, g.qubits[b].primality);
        }
    }

    #[test]
    fn rtcs_torus_counts() {
        let g = build_rtcs((2, 2, 2)).unwrap();
        assert_eq!(g.len(), 48);
        assert_eq!(g.edges.len(), 96);
        let faces = g.qubits.iter().filter(|q| q.role == Role::RtcsFace).count();
        assert_eq!(faces, 24);
        for q in &g.qubits {
            if q.role == Role::RtcsFace {
                assert_eq!(g.degree(q.id), 4);
            }
        }
    }

    #[test]
    fn ids_are_ordered_by_layer() {
        let g = build_cccs(&torus488(), 3).unwrap();
        for w in g.qubits.windows(2) {
            assert!(w[0].t <= w[1].t);
        }
    }
}
