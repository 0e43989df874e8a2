//! 2D three-colorable lattices (4-8-8 and 6-6-6) on a torus or a triangular patch.
//!
//! Both tilings are described on an integer grid. For 6-6-6 the grid is the
//! triangular lattice in (r, c) coordinates: points with (r + c) % 3 == 2 are
//! hexagon centers, the rest are vertices. For 4-8-8, octagons sit at (4i, 4j),
//! squares at (4i + 2, 4j + 2), and vertices at (4i ± 2, 4j ± 1), (4i ± 1, 4j ± 2).

use crate::color::Color;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LatticeFamily {
    #[serde(rename = "4-8-8")]
    Square488,
    #[serde(rename = "6-6-6")]
    Hex666,
}

impl LatticeFamily {
    pub fn name(self) -> &'static str {
        match self {
            LatticeFamily::Square488 => "4-8-8",
            LatticeFamily::Hex666 => "6-6-6",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryKind {
    Torus,
    BoundedTriangle,
}

#[derive(Clone, Debug, Serialize)]
pub struct Vertex {
    pub id: usize,
    /// Integer grid point of the underlying tiling (canonical representative on a torus).
    pub point: [i64; 2],
    /// Coordinate in the family's overhead units.
    pub pos: [f64; 2],
    /// Colors of faces that are cut away at this vertex (empty in the bulk).
    pub missing: Vec<Color>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Edge {
    pub id: usize,
    pub ends: [usize; 2],
    pub color: Color,
}

#[derive(Clone, Debug, Serialize)]
pub struct Face {
    pub id: usize,
    pub point: [i64; 2],
    pub pos: [f64; 2],
    pub color: Color,
    /// Vertices in counter-clockwise order (an open path for truncated boundary faces).
    pub cycle: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Lattice2D {
    pub family: LatticeFamily,
    pub boundary: BoundaryKind,
    pub size: [usize; 2],
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub faces: Vec<Face>,
    vertex_faces: Vec<[Option<usize>; 3]>,
    vertex_edges: Vec<[Option<usize>; 3]>,
}

type Pt = [i64; 2];

const HEX_DIRS: [Pt; 6] = [[1, 0], [1, 1], [0, 1], [-1, 0], [-1, -1], [0, -1]];
const OCT_RING: [Pt; 8] = [
    [2, -1],
    [2, 1],
    [1, 2],
    [-1, 2],
    [-2, 1],
    [-2, -1],
    [-1, -2],
    [1, -2],
];
const SQUARE_RING: [Pt; 4] = [[0, -1], [1, 0], [0, 1], [-1, 0]];

fn is_hex_face(p: Pt) -> bool {
    (p[0] + p[1]).rem_euclid(3) == 2
}

/// Color and counter-clockwise vertex ring of the face centered at `p` in the infinite tiling.
fn face_ring(family: LatticeFamily, p: Pt) -> (Color, Vec<Pt>) {
    match family {
        LatticeFamily::Hex666 => {
            let color = Color::from_index(p[0].rem_euclid(3) as usize);
            let ring = HEX_DIRS.iter().map(|d| [p[0] + d[0], p[1] + d[1]]).collect();
            (color, ring)
        }
        LatticeFamily::Square488 => {
            if p[0].rem_euclid(4) == 2 {
                let ring = SQUARE_RING.iter().map(|d| [p[0] + d[0], p[1] + d[1]]).collect();
                (Color::Red, ring)
            } else {
                let parity = (p[0] / 4 + p[1] / 4).rem_euclid(2);
                let color = if parity == 0 { Color::Green } else { Color::Blue };
                let ring = OCT_RING.iter().map(|d| [p[0] + d[0], p[1] + d[1]]).collect();
                (color, ring)
            }
        }
    }
}

/// The three faces (centers) of the infinite tiling that contain vertex `v`.
fn faces_at(family: LatticeFamily, v: Pt) -> Vec<Pt> {
    match family {
        LatticeFamily::Hex666 => HEX_DIRS
            .iter()
            .map(|d| [v[0] + d[0], v[1] + d[1]])
            .filter(|&p| is_hex_face(p))
            .collect(),
        LatticeFamily::Square488 => {
            let mut out = Vec::with_capacity(3);
            for d in OCT_RING {
                let c = [v[0] - d[0], v[1] - d[1]];
                if c[0].rem_euclid(4) == 0 && c[1].rem_euclid(4) == 0 {
                    out.push(c);
                }
            }
            for d in SQUARE_RING {
                let c = [v[0] - d[0], v[1] - d[1]];
                if c[0].rem_euclid(4) == 2 && c[1].rem_euclid(4) == 2 {
                    out.push(c);
                }
            }
            out.sort();
            out
        }
    }
}

/// Neighbours of a vertex along the edges of the infinite tiling.
fn vertex_neighbors(family: LatticeFamily, v: Pt) -> Vec<Pt> {
    let mut out = BTreeSet::new();
    for f in faces_at(family, v) {
        let (_, ring) = face_ring(family, f);
        let k = ring.iter().position(|&q| q == v).expect("vertex on its face ring");
        let n = ring.len();
        out.insert(ring[(k + 1) % n]);
        out.insert(ring[(k + n - 1) % n]);
    }
    out.into_iter().collect()
}

fn unit_pos(family: LatticeFamily, p: Pt) -> [f64; 2] {
    let (x, y) = (p[0] as f64, p[1] as f64);
    match family {
        // Unit: hexagon center spacing divided by sqrt(3), i.e. 3a/2 for hexagon side a.
        LatticeFamily::Hex666 => [(y - x / 2.0) / 1.5, -(x * 3f64.sqrt() / 2.0) / 1.5],
        // Unit: distance between neighbouring square and octagon centers.
        LatticeFamily::Square488 => [(x + y) / 4.0, (y - x) / 4.0],
    }
}

/// Reduces grid points modulo the torus periods.
struct Torus {
    family: LatticeFamily,
    lx: i64,
    ly: i64,
}

impl Torus {
    fn canon(&self, p: Pt) -> Pt {
        match self.family {
            LatticeFamily::Square488 => [p[0].rem_euclid(4 * self.lx), p[1].rem_euclid(4 * self.ly)],
            LatticeFamily::Hex666 => {
                // Face-lattice basis u = (2, 1), w = (1, 2); a = 2r - c, b = 2c - r.
                let a = (2 * p[0] - p[1]).rem_euclid(3 * self.lx);
                let b = (2 * p[1] - p[0]).rem_euclid(3 * self.ly);
                [(2 * a + b) / 3, (a + 2 * b) / 3]
            }
        }
    }

    fn face_centers(&self) -> Vec<Pt> {
        let mut out = Vec::new();
        for i in 0..self.lx {
            for j in 0..self.ly {
                match self.family {
                    LatticeFamily::Square488 => {
                        out.push([4 * i, 4 * j]);
                        out.push([4 * i + 2, 4 * j + 2]);
                    }
                    LatticeFamily::Hex666 => {
                        out.push(self.canon([1 + 2 * i + j, 1 + i + 2 * j]));
                    }
                }
            }
        }
        out.sort();
        out
    }
}

impl Lattice2D {
    pub fn vertex_face(&self, v: usize, c: Color) -> Option<usize> {
        self.vertex_faces[v][c.index()]
    }

    /// The c-colored edge (link) at vertex `v`, if it lies inside the lattice.
    pub fn vertex_edge(&self, v: usize, c: Color) -> Option<usize> {
        self.vertex_edges[v][c.index()]
    }

    /// The vertex joined to `v` by its c-colored edge.
    pub fn partner(&self, v: usize, c: Color) -> Option<usize> {
        self.vertex_edge(v, c).map(|e| {
            let [a, b] = self.edges[e].ends;
            if a == v {
                b
            } else {
                a
            }
        })
    }

    pub fn degree(&self, v: usize) -> usize {
        self.vertex_edges[v].iter().flatten().count()
    }

    pub fn faces_of_color(&self, c: Color) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(move |f| f.color == c)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// Faces containing both ends of an edge.
    pub fn edge_faces(&self, e: usize) -> Vec<usize> {
        let [a, b] = self.edges[e].ends;
        let fa: Vec<usize> = self.vertex_faces[a].iter().flatten().copied().collect();
        self.vertex_faces[b]
            .iter()
            .flatten()
            .copied()
            .filter(|f| fa.contains(f))
            .collect()
    }

    pub fn is_interior(&self, v: usize) -> bool {
        self.vertices[v].missing.is_empty()
    }

    /// Returns the list of violated lattice invariants (empty when valid).
    pub fn check_invariants(&self) -> Vec<String> {
        let mut bad = Vec::new();
        for v in &self.vertices {
            if v.missing.is_empty() && self.degree(v.id) != 3 {
                bad.push(format!("interior vertex {} has degree {}", v.id, self.degree(v.id)));
            }
        }
        for e in &self.edges {
            let bordering = self.edge_faces(e.id);
            for &f in &bordering {
                if self.faces[f].color == e.color {
                    bad.push(format!("edge {} borders a face of its own color", e.id));
                }
            }
            if bordering.len() == 2 && self.faces[bordering[0]].color == self.faces[bordering[1]].color {
                bad.push(format!("adjacent faces across edge {} share a color", e.id));
            }
            let [a, b] = e.ends;
            if let (Some(fa), Some(fb)) = (self.vertex_face(a, e.color), self.vertex_face(b, e.color)) {
                if fa == fb {
                    bad.push(format!("edge {} does not connect two distinct faces", e.id));
                }
            }
        }
        if self.boundary == BoundaryKind::Torus && self.euler_characteristic() != 0 {
            bad.push(format!("torus Euler characteristic {}", self.euler_characteristic()));
        }
        bad
    }

    fn assemble(
        family: LatticeFamily,
        boundary: BoundaryKind,
        size: [usize; 2],
        vertex_points: Vec<Pt>,
        face_list: Vec<(Pt, Color, Vec<Pt>)>,
        edge_pairs: Vec<[Pt; 2]>,
        missing: impl Fn(Pt) -> Vec<Color>,
        edge_color: impl Fn([Pt; 2]) -> Color,
    ) -> Lattice2D {
        let index: BTreeMap<Pt, usize> = vertex_points.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        let vertices: Vec<Vertex> = vertex_points
            .iter()
            .enumerate()
            .map(|(id, &p)| Vertex { id, point: p, pos: unit_pos(family, p), missing: missing(p) })
            .collect();
        let faces: Vec<Face> = face_list
            .into_iter()
            .enumerate()
            .map(|(id, (p, color, ring))| Face {
                id,
                point: p,
                pos: unit_pos(family, p),
                color,
                cycle: ring.iter().map(|q| index[q]).collect(),
            })
            .collect();
        let mut edges = Vec::with_capacity(edge_pairs.len());
        for (id, pair) in edge_pairs.into_iter().enumerate() {
            let mut ends = [index[&pair[0]], index[&pair[1]]];
            ends.sort();
            edges.push(Edge { id, ends, color: edge_color(pair) });
        }
        let mut vertex_faces = vec![[None; 3]; vertices.len()];
        for f in &faces {
            for &v in &f.cycle {
                vertex_faces[v][f.color.index()] = Some(f.id);
            }
        }
        let mut vertex_edges = vec![[None; 3]; vertices.len()];
        for e in &edges {
            for v in e.ends {
                vertex_edges[v][e.color.index()] = Some(e.id);
            }
        }
        Lattice2D { family, boundary, size, vertices, edges, faces, vertex_faces, vertex_edges }
    }
}

/// Builds a color-code lattice on a torus of `size` unit cells.
///
/// 4-8-8 needs even sizes (octagon colors alternate); 6-6-6 needs multiples of 3.
pub fn build_color_code_lattice(family: LatticeFamily, size: (usize, usize), boundary: BoundaryKind) -> Result<Lattice2D> {
    let (lx, ly) = size;
    if boundary != BoundaryKind::Torus {
        return Err(Error::InvalidInput(
            "bounded lattices are produced by the triangular patch builder".into(),
        ));
    }
    if lx < 2 || ly < 2 {
        return Err(Error::InvalidInput(format!("torus size {lx}x{ly} is below 2")));
    }
    let ok = match family {
        LatticeFamily::Square488 => lx % 2 == 0 && ly % 2 == 0,
        LatticeFamily::Hex666 => lx % 3 == 0 && ly % 3 == 0,
    };
    if !ok {
        return Err(Error::ColoringInfeasible { family: family.name().into(), lx, ly });
    }
    let torus = Torus { family, lx: lx as i64, ly: ly as i64 };
    let mut face_list = Vec::new();
    let mut vset = BTreeSet::new();
    let mut eset = BTreeSet::new();
    for p in torus.face_centers() {
        let (color, ring) = face_ring(family, p);
        let ring: Vec<Pt> = ring.into_iter().map(|q| torus.canon(q)).collect();
        for k in 0..ring.len() {
            let (a, b) = (ring[k], ring[(k + 1) % ring.len()]);
            vset.insert(a);
            eset.insert(if a < b { [a, b] } else { [b, a] });
        }
        face_list.push((p, color, ring));
    }
    let vertex_points: Vec<Pt> = vset.into_iter().collect();
    let edge_pairs: Vec<[Pt; 2]> = eset.into_iter().collect();
    let face_colors: BTreeMap<Pt, Color> = face_list.iter().map(|(p, c, _)| (*p, *c)).collect();
    let lat = Lattice2D::assemble(
        family,
        boundary,
        [lx, ly],
        vertex_points,
        face_list,
        edge_pairs,
        |_| Vec::new(),
        |pair| {
            let fa: BTreeSet<Pt> = faces_at(family, pair[0]).into_iter().map(|f| torus.canon(f)).collect();
            let common: Vec<Color> = faces_at(family, pair[1])
                .into_iter()
                .map(|f| torus.canon(f))
                .filter(|f| fa.contains(f))
                .map(|f| face_colors[&f])
                .collect();
            Color::third(common[0], common[1])
        },
    );
    Ok(lat)
}

/// Triangular patch with three differently colored boundaries and code distance `d`.
///
/// 6-6-6: the points 0 <= c <= r <= 3(d - 1)/2 of the triangular grid.
/// 4-8-8: the wedge x + y >= 2, x - y <= 2 capped by y <= 2d - 1.
pub fn build_triangular_patch(family: LatticeFamily, d: usize) -> Result<Lattice2D> {
    if d < 3 || d % 2 == 0 {
        return Err(Error::InvalidInput(format!("patch distance {d} must be odd and >= 3")));
    }
    let di = d as i64;
    let (inside, window): (Box<dyn Fn(Pt) -> bool>, [i64; 4]) = match family {
        LatticeFamily::Hex666 => {
            let b = 3 * (di - 1) / 2;
            (Box::new(move |p: Pt| p[1] >= 0 && p[1] <= p[0] && p[0] <= b), [-2, b + 2, -2, b + 2])
        }
        LatticeFamily::Square488 => {
            let top = 2 * di - 1;
            (
                Box::new(move |p: Pt| p[0] + p[1] >= 2 && p[0] - p[1] <= 2 && p[1] <= top),
                [-top - 4, top + 6, -4, top + 4],
            )
        }
    };
    let mut candidates = Vec::new();
    for x in window[0]..=window[1] {
        for y in window[2]..=window[3] {
            let p = [x, y];
            let is_center = match family {
                LatticeFamily::Hex666 => is_hex_face(p),
                LatticeFamily::Square488 => {
                    (x.rem_euclid(4) == 0 && y.rem_euclid(4) == 0) || (x.rem_euclid(4) == 2 && y.rem_euclid(4) == 2)
                }
            };
            if is_center {
                candidates.push(p);
            }
        }
    }
    let mut face_list = Vec::new();
    let mut vset = BTreeSet::new();
    for p in candidates {
        let (color, ring) = face_ring(family, p);
        let kept: Vec<Pt> = ring.iter().copied().filter(|&q| inside(q)).collect();
        let include = match family {
            LatticeFamily::Hex666 => inside(p),
            LatticeFamily::Square488 => kept.len() >= 4,
        };
        if include {
            // Rotate the ring so a truncated face reads as a path along its remaining vertices.
            let n = ring.len();
            let start = (0..n).find(|&k| inside(ring[k]) && !inside(ring[(k + n - 1) % n])).unwrap_or(0);
            let path: Vec<Pt> = (0..n).map(|k| ring[(start + k) % n]).filter(|&q| inside(q)).collect();
            vset.extend(path.iter().copied());
            face_list.push((p, color, path));
        }
    }
    face_list.sort_by_key(|f| f.0);
    let vertex_points: Vec<Pt> = vset.into_iter().collect();
    let present: BTreeSet<Pt> = face_list.iter().map(|f| f.0).collect();
    let vpresent: BTreeSet<Pt> = vertex_points.iter().copied().collect();
    let mut eset = BTreeSet::new();
    for &v in &vertex_points {
        for w in vertex_neighbors(family, v) {
            if vpresent.contains(&w) && v < w {
                eset.insert([v, w]);
            }
        }
    }
    let lat = Lattice2D::assemble(
        family,
        BoundaryKind::BoundedTriangle,
        [d, d],
        vertex_points,
        face_list,
        eset.into_iter().collect(),
        |v| {
            let mut m: Vec<Color> = faces_at(family, v)
                .into_iter()
                .filter(|f| !present.contains(f))
                .map(|f| face_ring(family, f).0)
                .collect();
            m.sort();
            m
        },
        |pair| {
            let fa = faces_at(family, pair[0]);
            let common: Vec<Color> = faces_at(family, pair[1])
                .into_iter()
                .filter(|f| fa.contains(f))
                .map(|f| face_ring(family, f).0)
                .collect();
            Color::third(common[0], common[1])
        },
    );
    let bad = lat.check_invariants();
    if !bad.is_empty() {
        return Err(Error::Construction(bad.join("; ")));
    }
    Ok(lat)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count_colors(lat: &Lattice2D) -> [usize; 3] {
        let mut n = [0; 3];
        for f in &lat.faces {
            n[f.color.index()] += 1;
        }
        n
    }

    #[test]
    fn square_octagon_torus_counts() {
        let lat = build_color_code_lattice(LatticeFamily::Square488, (2, 2), BoundaryKind::Torus).unwrap();
        assert_eq!((lat.vertices.len(), lat.edges.len(), lat.faces.len()), (16, 24, 8));
        assert_eq!(count_colors(&lat), [4, 2, 2]);
        assert!(lat.check_invariants().is_empty(), "{:?}", lat.check_invariants());
    }

    #[test]
    fn hexagonal_torus_counts() {
        let lat = build_color_code_lattice(LatticeFamily::Hex666, (3, 3), BoundaryKind::Torus).unwrap();
        assert_eq!((lat.vertices.len(), lat.edges.len(), lat.faces.len()), (18, 27, 9));
        assert_eq!(count_colors(&lat), [3, 3, 3]);
        assert!(lat.check_invariants().is_empty(), "{:?}", lat.check_invariants());
    }

    #[test]
    fn incompatible_sizes_are_rejected() {
        assert!(matches!(
            build_color_code_lattice(LatticeFamily::Square488, (3, 2), BoundaryKind::Torus),
            Err(Error::ColoringInfeasible { .. })
        ));
        assert!(matches!(
            build_color_code_lattice(LatticeFamily::Hex666, (4, 3), BoundaryKind::Torus),
            Err(Error::ColoringInfeasible { .. })
        ));
    }

    #[test]
    fn face_sizes_on_torus() {
        let lat = build_color_code_lattice(LatticeFamily::Square488, (4, 2), BoundaryKind::Torus).unwrap();
        for f in &lat.faces {
            let want = if f.color == Color::Red { 4 } else { 8 };
            assert_eq!(f.cycle.len(), want);
        }
    }

    #[test]
    fn smallest_patches_are_the_seven_qubit_code() {
        for fam in [LatticeFamily::Hex666, LatticeFamily::Square488] {
            let lat = build_triangular_patch(fam, 3).unwrap();
            assert_eq!(lat.vertices.len(), 7);
            assert_eq!(lat.faces.len(), 3);
            assert!(lat.faces.iter().all(|f| f.cycle.len() == 4));
            // One boundary per color.
            for c in Color::ALL {
                let on = lat.vertices.iter().filter(|v| v.missing.contains(&c)).count();
                assert_eq!(on, 3, "{fam:?} boundary {c}");
            }
        }
    }

    #[test]
    fn larger_hex_patch_sizes() {
        let lat = build_triangular_patch(LatticeFamily::Hex666, 5).unwrap();
        assert_eq!(lat.vertices.len(), 19);
        assert_eq!(lat.faces.len(), 9);
    }
}
