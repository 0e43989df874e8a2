//! Minimum-weight perfect-matching decoders.
//!
//! RTCS regions use one matching over cube checks. CCCS regions use two matchings per
//! color c: the first over the non-c checks locates errors on non-c ancillas and the
//! parity of each c-link; the second over the c-checks plus those link parities locates
//! errors on c-ancillas and on individual link qubits. The color whose result has the
//! fewest qubits is kept.

use crate::color::Color;
use crate::error::{Error, Result};
use crate::graph::Role;
use crate::matching::min_weight_perfect_matching;
use crate::pauli::mod2;
use crate::region::{CodeFamily, SimplifiedRegion};
use serde::Serialize;
use std::collections::{HashMap, VecDeque};

const NONE: u32 = u32::MAX;
const BOUNDARY: u32 = u32::MAX - 1;

/// Detectors and single-error mechanisms flipping one or two of them. Mechanisms that
/// flip one detector connect it to the boundary.
#[derive(Clone, Debug)]
pub struct DetectorGraph {
    pub num_detectors: usize,
    pub mechanisms: Vec<Vec<u32>>,
    /// Sorted (neighbour or BOUNDARY, mechanism) pairs per detector.
    adjacency: Vec<Vec<(u32, u32)>>,
    boundary_dist: Vec<u32>,
    /// (next node towards the boundary or BOUNDARY, mechanism).
    boundary_step: Vec<(u32, u32)>,
}

impl DetectorGraph {
    pub fn new(num_detectors: usize, mechanisms: Vec<Vec<u32>>) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); num_detectors];
        for (m, dets) in mechanisms.iter().enumerate() {
            match dets.as_slice() {
                [a] => adjacency[*a as usize].push((BOUNDARY, m as u32)),
                [a, b] => {
                    adjacency[*a as usize].push((*b, m as u32));
                    adjacency[*b as usize].push((*a, m as u32));
                }
                _ => {
                    return Err(Error::ContractViolation(format!(
                        "mechanism {m} flips {} detectors in one stage",
                        dets.len()
                    )))
                }
            }
        }
        for a in &mut adjacency {
            a.sort_unstable();
        }
        let mut boundary_dist = vec![NONE; num_detectors];
        let mut boundary_step = vec![(NONE, NONE); num_detectors];
        let mut queue = VecDeque::new();
        for (u, adj) in adjacency.iter().enumerate() {
            if let Some(&(_, m)) = adj.iter().find(|(v, _)| *v == BOUNDARY) {
                boundary_dist[u] = 1;
                boundary_step[u] = (BOUNDARY, m);
                queue.push_back(u);
            }
        }
        while let Some(u) = queue.pop_front() {
            for &(v, m) in &adjacency[u] {
                if v != BOUNDARY && boundary_dist[v as usize] == NONE {
                    boundary_dist[v as usize] = boundary_dist[u] + 1;
                    boundary_step[v as usize] = (u as u32, m);
                    queue.push_back(v as usize);
                }
            }
        }
        Ok(DetectorGraph { num_detectors, mechanisms, adjacency, boundary_dist, boundary_step })
    }

    /// Number of mechanisms on a shortest chain from `u` to the boundary.
    pub fn boundary_distance(&self, u: usize) -> Option<u32> {
        (self.boundary_dist[u] != NONE).then_some(self.boundary_dist[u])
    }

    /// Shortest-chain weights from `source` to each target, exploring up to `cutoff`.
    fn distances(&self, source: usize, targets: &[usize], cutoff: u32, scratch: &mut Scratch) -> Vec<u32> {
        scratch.bfs(self, source, cutoff, None);
        targets.iter().map(|&t| scratch.dist_of(t)).collect()
    }

    /// Mechanisms on the shortest chain between two detectors.
    fn path(&self, a: usize, b: usize, scratch: &mut Scratch) -> Vec<usize> {
        scratch.bfs(self, a, NONE, Some(b));
        let mut out = Vec::new();
        let mut u = b;
        while u != a {
            let (prev, m) = scratch.parent[u];
            out.push(m as usize);
            u = prev as usize;
        }
        out
    }

    fn boundary_path(&self, a: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut u = a as u32;
        while u != BOUNDARY {
            let (next, m) = self.boundary_step[u as usize];
            out.push(m as usize);
            u = next;
        }
        out
    }

    /// Minimum-weight set of mechanisms reproducing the flipped detectors.
    pub fn decode(&self, flipped: &[usize]) -> Result<Vec<usize>> {
        Ok(self.decode_with_pairs(flipped)?.0)
    }

    /// Also returns matched pairs as (detector, Some(detector) | None for boundary).
    pub fn decode_with_pairs(&self, flipped: &[usize]) -> Result<(Vec<usize>, Vec<(usize, Option<usize>)>)> {
        let k = flipped.len();
        if k == 0 {
            return Ok((Vec::new(), Vec::new()));
        }
        let mut scratch = Scratch::new(self.num_detectors);
        let bd: Vec<u32> = flipped.iter().map(|&u| self.boundary_dist[u]).collect();
        let max_bd = bd.iter().copied().filter(|&b| b != NONE).max().unwrap_or(0);
        let mut pair_edges: Vec<(usize, usize, u32)> = Vec::new();
        for i in 0..k {
            let cutoff = if bd[i] == NONE { NONE } else { bd[i] + max_bd };
            let d = self.distances(flipped[i], &flipped[i + 1..], cutoff, &mut scratch);
            for (off, &w) in d.iter().enumerate() {
                let j = i + 1 + off;
                if w != NONE && (bd[i] == NONE || bd[j] == NONE || w < bd[i] + bd[j]) {
                    pair_edges.push((i, j, w));
                }
            }
        }
        let mut uf: Vec<usize> = (0..k).collect();
        fn find(uf: &mut [usize], mut x: usize) -> usize {
            while uf[x] != x {
                uf[x] = uf[uf[x]];
                x = uf[x];
            }
            x
        }
        for &(i, j, _) in &pair_edges {
            let (a, b) = (find(&mut uf, i), find(&mut uf, j));
            if a != b {
                uf[a.max(b)] = a.min(b);
            }
        }
        let mut comps: HashMap<usize, Vec<usize>> = HashMap::new();
        for i in 0..k {
            let r = find(&mut uf, i);
            comps.entry(r).or_default().push(i);
        }
        let mut edges_by_comp: HashMap<usize, Vec<(usize, usize, u32)>> = HashMap::new();
        for &(i, j, w) in &pair_edges {
            let r = find(&mut uf, i);
            edges_by_comp.entry(r).or_default().push((i, j, w));
        }
        let mut roots: Vec<usize> = comps.keys().copied().collect();
        roots.sort_unstable();
        let mut pairs = Vec::new();
        for r in roots {
            let members = &comps[&r];
            let m = members.len();
            if m == 1 && bd[members[0]] != NONE {
                pairs.push((flipped[members[0]], None));
                continue;
            }
            let local: HashMap<usize, usize> = members.iter().enumerate().map(|(l, &g)| (g, l)).collect();
            // Boundary copies mirror the pair edges at zero weight: the copies of detectors
            // paired with each other can always pair up the same way.
            let mut edges: Vec<(usize, usize, i64)> = Vec::new();
            for &(i, j, w) in edges_by_comp.get(&r).map(|v| v.as_slice()).unwrap_or(&[]) {
                let (a, b) = (local[&i], local[&j]);
                edges.push((a, b, w as i64));
                edges.push((m + a, m + b, 0));
            }
            for a in 0..m {
                if bd[members[a]] != NONE {
                    edges.push((a, m + a, bd[members[a]] as i64));
                }
            }
            let mate = min_weight_perfect_matching(2 * m, &edges).map_err(|_| {
                Error::ContractViolation(format!("detectors {:?} cannot be paired or absorbed", members.iter().map(|&i| flipped[i]).collect::<Vec<_>>()))
            })?;
            for a in 0..m {
                let b = mate[a];
                if b == m + a {
                    pairs.push((flipped[members[a]], None));
                } else if b < m && a < b {
                    pairs.push((flipped[members[a]], Some(flipped[members[b]])));
                }
            }
        }
        let mut chosen = Vec::new();
        for &(a, b) in &pairs {
            match b {
                Some(b) => chosen.extend(self.path(a, b, &mut scratch)),
                None => chosen.extend(self.boundary_path(a)),
            }
        }
        Ok((mod2(chosen), pairs))
    }
}

struct Scratch {
    stamp: Vec<u32>,
    dist: Vec<u32>,
    parent: Vec<(u32, u32)>,
    epoch: u32,
    queue: VecDeque<usize>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Scratch { stamp: vec![0; n], dist: vec![NONE; n], parent: vec![(NONE, NONE); n], epoch: 0, queue: VecDeque::new() }
    }

    fn dist_of(&self, u: usize) -> u32 {
        if self.stamp[u] == self.epoch {
            self.dist[u]
        } else {
            NONE
        }
    }

    fn bfs(&mut self, g: &DetectorGraph, source: usize, cutoff: u32, stop: Option<usize>) {
        self.epoch += 1;
        self.queue.clear();
        self.stamp[source] = self.epoch;
        self.dist[source] = 0;
        self.queue.push_back(source);
        while let Some(u) = self.queue.pop_front() {
            if Some(u) == stop {
                return;
            }
            let du = self.dist[u];
            if du >= cutoff {
                continue;
            }
            for &(v, m) in &g.adjacency[u] {
                if v == BOUNDARY {
                    continue;
                }
                let v = v as usize;
                if self.stamp[v] != self.epoch {
                    self.stamp[v] = self.epoch;
                    self.dist[v] = du + 1;
                    self.parent[v] = (u as u32, m);
                    self.queue.push_back(v);
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum Stage1Mech {
    Qubit(usize),
    Link(usize),
}

#[derive(Clone, Debug)]
struct ColorStages {
    color: Color,
    /// Region check index -> stage detector index.
    stage1_det: Vec<u32>,
    stage1: DetectorGraph,
    stage1_payload: Vec<Stage1Mech>,
    /// Region check index -> stage-2 detector index (c-checks only).
    stage2_det: Vec<u32>,
    /// Stage-2 detector index of each observable link (by region link index).
    link_node: HashMap<usize, u32>,
    stage2: DetectorGraph,
    stage2_payload: Vec<usize>,
}

/// Decoding result for one cycle.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Decoded {
    pub correction: Vec<usize>,
    /// Color whose two-stage result was kept (CCCS only).
    pub color: Option<Color>,
    /// Matched detector pairs per stage; `None` marks the boundary.
    pub matchings: Vec<Vec<(usize, Option<usize>)>>,
}

#[derive(Clone, Debug)]
pub struct Decoder {
    pub code: CodeFamily,
    rtcs: Option<(DetectorGraph, Vec<usize>)>,
    colors: Vec<ColorStages>,
}

impl Decoder {
    pub fn new(region: &SimplifiedRegion) -> Result<Self> {
        match region.code {
            CodeFamily::Rtcs => {
                let mechs = region.eligible.iter().map(|&q| region.qubit_checks[q].clone()).collect();
                let g = DetectorGraph::new(region.checks.len(), mechs)?;
                Ok(Decoder { code: region.code, rtcs: Some((g, region.eligible.clone())), colors: Vec::new() })
            }
            _ => {
                let colors = Color::ALL.iter().map(|&c| color_stages(region, c)).collect::<Result<Vec<_>>>()?;
                Ok(Decoder { code: region.code, rtcs: None, colors })
            }
        }
    }

    pub fn decode(&self, region: &SimplifiedRegion, syndrome: &[usize]) -> Result<Decoded> {
        let decoded = match &self.rtcs {
            Some((g, payload)) => {
                let (mechs, pairs) = g.decode_with_pairs(syndrome)?;
                let mut correction: Vec<usize> = mechs.into_iter().map(|m| payload[m]).collect();
                correction.sort_unstable();
                Decoded { correction, color: None, matchings: vec![pairs] }
            }
            None => {
                let mut best: Option<Decoded> = None;
                for st in &self.colors {
                    let d = decode_color(region, st, syndrome)?;
                    if best.as_ref().is_none_or(|b| d.correction.len() < b.correction.len()) {
                        best = Some(d);
                    }
                }
                best.expect("three colors")
            }
        };
        if region.syndrome_of(&decoded.correction) != syndrome {
            return Err(Error::ContractViolation("decoded correction does not reproduce the syndrome".into()));
        }
        Ok(decoded)
    }

    /// Decodes using one color's two stages only.
    pub fn decode_color(&self, region: &SimplifiedRegion, color: Color, syndrome: &[usize]) -> Result<Decoded> {
        let st = self
            .colors
            .iter()
            .find(|s| s.color == color)
            .ok_or_else(|| Error::Unsupported("per-color decoding applies to CCCS regions".into()))?;
        decode_color(region, st, syndrome)
    }
}

fn color_stages(region: &SimplifiedRegion, c: Color) -> Result<ColorStages> {
    let n_checks = region.checks.len();
    let mut stage1_det = vec![NONE; n_checks];
    let mut stage2_det = vec![NONE; n_checks];
    let (mut n1, mut n2) = (0u32, 0u32);
    for (i, ch) in region.checks.iter().enumerate() {
        if ch.color == Some(c) {
            stage2_det[i] = n2;
            n2 += 1;
        } else {
            stage1_det[i] = n1;
            n1 += 1;
        }
    }
    let restrict = |q: usize, map: &[u32]| -> Vec<u32> {
        let mut v: Vec<u32> = region.qubit_checks[q].iter().map(|&k| map[k as usize]).filter(|&d| d != NONE).collect();
        v.sort_unstable();
        v
    };
    // c-link of each eligible CQ.
    let mut link_of: HashMap<usize, usize> = HashMap::new();
    for (li, l) in region.graph.links.iter().enumerate() {
        if l.color == c && region.is_eligible(l.qubits[0]) && region.is_eligible(l.qubits[1]) {
            link_of.insert(l.qubits[0], li);
            link_of.insert(l.qubits[1], li);
        }
    }
    let mut mechs1 = Vec::new();
    let mut payload1 = Vec::new();
    let mut link_seen: HashMap<usize, Vec<u32>> = HashMap::new();
    for &q in &region.eligible {
        let eff = restrict(q, &stage1_det);
        let role = region.graph.qubits[q].role;
        if role == Role::Cq {
            if let Some(&li) = link_of.get(&q) {
                match link_seen.get(&li) {
                    Some(prev) if *prev != eff => {
                        return Err(Error::Construction(format!("link {li} qubits disagree on {c} first-stage checks")))
                    }
                    Some(_) => continue,
                    None => {
                        link_seen.insert(li, eff.clone());
                        if !eff.is_empty() {
                            mechs1.push(eff);
                            payload1.push(Stage1Mech::Link(li));
                        }
                        continue;
                    }
                }
            }
        }
        if !eff.is_empty() {
            mechs1.push(eff);
            payload1.push(Stage1Mech::Qubit(q));
        }
    }
    let mut link_node = HashMap::new();
    let mut observable: Vec<usize> = link_seen.iter().filter(|(_, e)| !e.is_empty()).map(|(&l, _)| l).collect();
    observable.sort_unstable();
    for l in observable {
        link_node.insert(l, n2);
        n2 += 1;
    }
    let mut mechs2 = Vec::new();
    let mut payload2 = Vec::new();
    for &q in &region.eligible {
        let role = region.graph.qubits[q].role;
        let in_stage1 = !restrict(q, &stage1_det).is_empty();
        let mut eff = restrict(q, &stage2_det);
        match (role, link_of.get(&q)) {
            (Role::Cq, Some(li)) => {
                if let Some(&node) = link_node.get(li) {
                    eff.push(node);
                }
            }
            (Role::Cq, None) if in_stage1 => continue,
            (Role::Aq, _) if in_stage1 => continue,
            _ => {}
        }
        if !eff.is_empty() {
            mechs2.push(eff);
            payload2.push(q);
        }
    }
    Ok(ColorStages {
        color: c,
        stage1_det,
        stage1: DetectorGraph::new(n1 as usize, mechs1)?,
        stage1_payload: payload1,
        stage2_det,
        link_node,
        stage2: DetectorGraph::new(n2 as usize, mechs2)?,
        stage2_payload: payload2,
    })
}

fn decode_color(region: &SimplifiedRegion, st: &ColorStages, syndrome: &[usize]) -> Result<Decoded> {
    let flipped1: Vec<usize> = syndrome.iter().map(|&k| st.stage1_det[k]).filter(|&d| d != NONE).map(|d| d as usize).collect();
    let (chosen1, pairs1) = st.stage1.decode_with_pairs(&flipped1)?;
    let mut correction = Vec::new();
    let mut flipped2: Vec<usize> = syndrome.iter().map(|&k| st.stage2_det[k]).filter(|&d| d != NONE).map(|d| d as usize).collect();
    for m in chosen1 {
        match st.stage1_payload[m] {
            Stage1Mech::Qubit(q) => {
                correction.push(q);
                flipped2.extend(
                    region.qubit_checks[q].iter().map(|&k| st.stage2_det[k as usize]).filter(|&d| d != NONE).map(|d| d as usize),
                );
            }
            Stage1Mech::Link(li) => flipped2.push(st.link_node[&li] as usize),
        }
    }
    let flipped2 = mod2(flipped2);
    let (chosen2, pairs2) = st.stage2.decode_with_pairs(&flipped2)?;
    correction.extend(chosen2.into_iter().map(|m| st.stage2_payload[m]));
    Ok(Decoded { correction: mod2(correction), color: Some(st.color), matchings: vec![pairs1, pairs2] })
}

/// Outcome of a cycle after correction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ResidualClass {
    Trivial,
    Logical,
}

/// Classifies a syndrome-free residual by its parity on the two witness sets.
pub fn classify_residual(region: &SimplifiedRegion, residual: &[usize]) -> Result<ResidualClass> {
    if !region.syndrome_of(residual).is_empty() {
        return Err(Error::ContractViolation("residual error set has a nonzero syndrome".into()));
    }
    let (a, b) = (region.witness_parity(0, residual), region.witness_parity(1, residual));
    if a != b {
        return Err(Error::ContractViolation("witness sets disagree on a syndrome-free residual".into()));
    }
    Ok(if a { ResidualClass::Logical } else { ResidualClass::Trivial })
}

/// Symmetric difference of two sorted-or-unsorted qubit sets.
pub fn residual(errors: &[usize], correction: &[usize]) -> Vec<usize> {
    let mut v = errors.to_vec();
    v.extend_from_slice(correction);
    mod2(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::build_simplified_region;

    #[test]
    fn path_graph_distances() {
        // 0 - 1 - 2 - 3 with boundary mechanisms at both ends.
        let mechs = vec![vec![0], vec![0, 1], vec![1, 2], vec![2, 3], vec![3]];
        let g = DetectorGraph::new(4, mechs).unwrap();
        assert_eq!(g.boundary_distance(1), Some(2));
        assert_eq!(g.decode(&[1, 2]).unwrap(), vec![2]);
        assert_eq!(g.decode(&[0, 3]).unwrap(), vec![0, 4]);
        assert!(g.decode(&[]).unwrap().is_empty());
    }

    #[test]
    fn three_detector_mechanism_is_rejected() {
        assert!(DetectorGraph::new(3, vec![vec![0, 1, 2]]).is_err());
    }

    #[test]
    fn unabsorbable_odd_syndrome_is_reported() {
        let g = DetectorGraph::new(3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        assert!(matches!(g.decode(&[0]), Err(Error::ContractViolation(_))));
    }

    #[test]
    fn empty_syndrome_decodes_to_nothing() {
        for code in CodeFamily::ALL {
            let r = build_simplified_region(code, 3, 3).unwrap();
            let dec = Decoder::new(&r).unwrap();
            assert!(dec.decode(&r, &[]).unwrap().correction.is_empty());
            assert_eq!(classify_residual(&r, &[]).unwrap(), ResidualClass::Trivial);
        }
    }

    #[test]
    fn detectable_residual_is_rejected() {
        let r = build_simplified_region(CodeFamily::Rtcs, 3, 2).unwrap();
        assert!(classify_residual(&r, &r.eligible[..1]).is_err());
    }
}
