//! Bounded simulation regions: an RTCS block between two primal and two dual boundaries,
//! and a CCCS triangular prism whose three sides carry different colors.
//!
//! Every region is checked at build time: the witness sets used for logical
//! classification must have even overlap with every local trivial error set, and the
//! smallest undetectable nontrivial error set must have weight exactly d.

use crate::color::{Color, Primality};
use crate::error::{Error, Result};
use crate::graph::{build_cccs, build_cubic, odd_count, Boundary, ClusterGraph, Role, Site};
use crate::lattice::{build_triangular_patch, Lattice2D, LatticeFamily};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CodeFamily {
    #[serde(rename = "rtcs")]
    Rtcs,
    #[serde(rename = "cccs-488")]
    Cccs488,
    #[serde(rename = "cccs-666")]
    Cccs666,
}

impl CodeFamily {
    pub const ALL: [CodeFamily; 3] = [CodeFamily::Rtcs, CodeFamily::Cccs488, CodeFamily::Cccs666];

    pub fn name(self) -> &'static str {
        match self {
            CodeFamily::Rtcs => "rtcs",
            CodeFamily::Cccs488 => "cccs-488",
            CodeFamily::Cccs666 => "cccs-666",
        }
    }

    pub fn lattice_family(self) -> Option<LatticeFamily> {
        match self {
            CodeFamily::Rtcs => None,
            CodeFamily::Cccs488 => Some(LatticeFamily::Square488),
            CodeFamily::Cccs666 => Some(LatticeFamily::Hex666),
        }
    }
}

impl fmt::Display for CodeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CodeFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rtcs" => Ok(CodeFamily::Rtcs),
            "cccs-488" | "488" | "4-8-8" => Ok(CodeFamily::Cccs488),
            "cccs-666" | "666" | "6-6-6" => Ok(CodeFamily::Cccs666),
            _ => Err(Error::InvalidInput(format!("unknown code family '{s}'"))),
        }
    }
}

/// A primal parity check used as a detector.
#[derive(Clone, Debug)]
pub struct Check {
    /// Dual AQ keying the check (CCCS) or None (RTCS cube).
    pub key: Option<usize>,
    /// Cube center in doubled coordinates (RTCS).
    pub site: Option<[i64; 3]>,
    pub color: Option<Color>,
    pub t: usize,
    /// X-support (may include ineligible time-boundary qubits).
    pub support: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct SimplifiedRegion {
    pub code: CodeFamily,
    pub d: usize,
    pub half_span: usize,
    pub graph: ClusterGraph,
    pub patch: Option<Lattice2D>,
    /// Primal qubits outside the first and final layers, ascending.
    pub eligible: Vec<usize>,
    pub checks: Vec<Check>,
    /// Checks containing each qubit (indexed by qubit id).
    pub qubit_checks: Vec<Vec<u32>>,
    pub witnesses: [Vec<usize>; 2],
    is_eligible: Vec<bool>,
    witness_mask: [Vec<bool>; 2],
}

/// Summary of the build-time validation.
#[derive(Clone, Debug, Serialize)]
pub struct RegionValidation {
    pub generators_checked: usize,
    pub min_weight: usize,
    pub min_weight_example: Vec<usize>,
}

impl SimplifiedRegion {
    pub fn is_eligible(&self, q: usize) -> bool {
        self.is_eligible[q]
    }

    pub fn num_layers(&self) -> usize {
        2 * self.half_span + 1
    }

    /// Sorted ids of checks flipped by an error set.
    pub fn syndrome_of(&self, errors: &[usize]) -> Vec<usize> {
        let mut flips: Vec<usize> = Vec::new();
        for &q in errors {
            flips.extend(self.qubit_checks[q].iter().map(|&c| c as usize));
        }
        crate::pauli::mod2(flips)
    }

    /// Parity of the overlap of an error set with witness `k`.
    pub fn witness_parity(&self, k: usize, errors: &[usize]) -> bool {
        errors.iter().filter(|&&q| self.witness_mask[k][q]).count() % 2 == 1
    }

    /// Local undetectable error sets: neighbourhoods of vacuum dual qubits whose
    /// neighbours are all eligible. Each equals a stabilizer restricted to primal qubits.
    pub fn trivial_generators(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for q in &self.graph.qubits {
            if q.primality != Primality::Dual || q.boundary.iter().any(|b| matches!(b, Boundary::Dual(_))) {
                continue;
            }
            let nb = self.graph.neighbors(q.id);
            if !nb.is_empty() && nb.iter().all(|&n| self.is_eligible[n]) {
                out.push(nb.to_vec());
            }
        }
        out
    }

    /// A nontrivial undetectable error set of weight d.
    pub fn logical_chain(&self) -> Result<Vec<usize>> {
        match self.code {
            CodeFamily::Rtcs => {
                let mut out = Vec::new();
                for k in 0..self.d as i64 {
                    out.push(self.graph.cubic([2 * k, 1, 1]).expect("face in region"));
                }
                Ok(out)
            }
            _ => {
                let patch = self.patch.as_ref().expect("CCCS region has a patch");
                let (_, verts) = patch_min_logical(patch, self.d)
                    .ok_or_else(|| Error::Construction("patch has no logical of weight d".into()))?;
                Ok(verts.into_iter().map(|v| self.graph.cq(v, 1).expect("cq")).collect())
            }
        }
    }

    /// Witness soundness and exact minimum weight. Fails with a construction error.
    pub fn validate(&self) -> Result<RegionValidation> {
        let gens = self.trivial_generators();
        for g in &gens {
            if !self.syndrome_of(g).is_empty() {
                return Err(Error::Construction(format!("local generator {g:?} is detectable")));
            }
            for k in 0..2 {
                if self.witness_parity(k, g) {
                    return Err(Error::Construction(format!("witness {k} has odd overlap with generator {g:?}")));
                }
            }
        }
        let chain = self.logical_chain()?;
        if chain.len() != self.d || !self.syndrome_of(&chain).is_empty() {
            return Err(Error::Construction("reference logical chain is detectable or has the wrong weight".into()));
        }
        if !(self.witness_parity(0, &chain) && self.witness_parity(1, &chain)) {
            return Err(Error::Construction("reference logical chain is not flagged by both witnesses".into()));
        }
        if let Some(light) = self.search_light_logical(self.d - 1) {
            return Err(Error::Construction(format!(
                "undetectable nontrivial error set of weight {} < d = {}: {:?}",
                light.len(),
                self.d,
                light
            )));
        }
        Ok(RegionValidation { generators_checked: gens.len(), min_weight: chain.len(), min_weight_example: chain })
    }

    /// Exhaustive search for an undetectable error set of weight ≤ `budget` with odd
    /// parity on either witness. Time translation lets the smallest qubit sit in the two
    /// lowest eligible layers.
    pub fn search_light_logical(&self, budget: usize) -> Option<Vec<usize>> {
        let first_t = self.eligible.first().map(|&q| self.graph.qubits[q].t)?;
        (0..2).find_map(|k| {
            let view = DetectorView::from_region(self, k);
            let starts: Vec<usize> = (0..view.mechs.len())
                .filter(|&m| self.graph.qubits[view.qubit[m]].t <= first_t + 1)
                .collect();
            view.search(&starts, budget)
        })
    }
}

/// Error mechanisms and the detectors they flip, plus a witness mask.
struct DetectorView {
    qubit: Vec<usize>,
    mechs: Vec<Vec<u32>>,
    det_mechs: Vec<Vec<u32>>,
    witness: Vec<bool>,
}

impl DetectorView {
    fn from_region(r: &SimplifiedRegion, k: usize) -> Self {
        let qubit = r.eligible.clone();
        let mechs: Vec<Vec<u32>> = qubit.iter().map(|&q| r.qubit_checks[q].clone()).collect();
        let witness = qubit.iter().map(|&q| r.witness_mask[k][q]).collect();
        Self::assemble(qubit, mechs, r.checks.len(), witness)
    }

    fn assemble(qubit: Vec<usize>, mechs: Vec<Vec<u32>>, num_dets: usize, witness: Vec<bool>) -> Self {
        let mut det_mechs = vec![Vec::new(); num_dets];
        for (m, ds) in mechs.iter().enumerate() {
            for &d in ds {
                det_mechs[d as usize].push(m as u32);
            }
        }
        DetectorView { qubit, mechs, det_mechs, witness }
    }

    fn search(&self, starts: &[usize], budget: usize) -> Option<Vec<usize>> {
        if budget == 0 {
            return None;
        }
        let max_flip = self.mechs.iter().map(|m| m.len()).max().unwrap_or(1).max(1);
        let mut flipped = vec![false; self.det_mechs.len()];
        let mut n_flipped = 0usize;
        let mut chosen: Vec<usize> = Vec::new();
        let mut in_set = vec![false; self.mechs.len()];
        for &s in starts {
            self.toggle(s, &mut flipped, &mut n_flipped, &mut in_set);
            chosen.push(s);
            let found = self.dfs(s, budget, max_flip, &mut flipped, &mut n_flipped, &mut chosen, &mut in_set);
            if found {
                return Some(chosen.iter().map(|&m| self.qubit[m]).collect());
            }
            chosen.pop();
            self.toggle(s, &mut flipped, &mut n_flipped, &mut in_set);
        }
        None
    }

    fn toggle(&self, m: usize, flipped: &mut [bool], n: &mut usize, in_set: &mut [bool]) {
        in_set[m] = !in_set[m];
        for &d in &self.mechs[m] {
            let d = d as usize;
            flipped[d] = !flipped[d];
            if flipped[d] {
                *n += 1;
            } else {
                *n -= 1;
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &self,
        start: usize,
        budget: usize,
        max_flip: usize,
        flipped: &mut Vec<bool>,
        n_flipped: &mut usize,
        chosen: &mut Vec<usize>,
        in_set: &mut Vec<bool>,
    ) -> bool {
        if *n_flipped == 0 {
            return chosen.iter().filter(|&&m| self.witness[m]).count() % 2 == 1;
        }
        if chosen.len() + n_flipped.div_ceil(max_flip) > budget {
            return false;
        }
        let det = flipped.iter().position(|&f| f).expect("some detector flipped");
        for &m in &self.det_mechs[det] {
            let m = m as usize;
            if m <= start || in_set[m] {
                continue;
            }
            self.toggle(m, flipped, n_flipped, in_set);
            chosen.push(m);
            if self.dfs(start, budget, max_flip, flipped, n_flipped, chosen, in_set) {
                return true;
            }
            chosen.pop();
            self.toggle(m, flipped, n_flipped, in_set);
        }
        false
    }
}

/// Smallest undetectable set of patch vertices with odd overlap on the first colored side,
/// searched up to weight `max_w`. Returns (weight, vertices).
pub fn patch_min_logical(patch: &Lattice2D, max_w: usize) -> Option<(usize, Vec<usize>)> {
    let n = patch.vertices.len();
    let mechs: Vec<Vec<u32>> = (0..n)
        .map(|v| {
            let mut ds: Vec<u32> = Color::ALL.iter().filter_map(|&c| patch.vertex_face(v, c)).map(|f| f as u32).collect();
            ds.sort();
            ds
        })
        .collect();
    let side = patch_side_colors()[0];
    let witness: Vec<bool> = patch.vertices.iter().map(|v| v.missing.contains(&side)).collect();
    let view = DetectorView::assemble((0..n).collect(), mechs, patch.faces.len(), witness);
    let starts: Vec<usize> = (0..n).collect();
    for w in 1..=max_w {
        if let Some(found) = view.search(&starts, w) {
            return Some((found.len(), found));
        }
    }
    None
}

/// Boundary colors whose sides serve as the two witnesses of a CCCS region.
fn patch_side_colors() -> [Color; 2] {
    [Color::Red, Color::Green]
}

/// Builds the bounded region used by threshold simulations and validates it.
pub fn build_simplified_region(code: CodeFamily, d: usize, half_span: usize) -> Result<SimplifiedRegion> {
    let region = build_region_unchecked(code, d, half_span)?;
    region.validate()?;
    Ok(region)
}

/// Same as [`build_simplified_region`] without the validation pass.
pub fn build_region_unchecked(code: CodeFamily, d: usize, half_span: usize) -> Result<SimplifiedRegion> {
    if d < 3 || d % 2 == 0 {
        return Err(Error::InvalidInput(format!("distance {d} must be odd and >= 3")));
    }
    if half_span < 1 {
        return Err(Error::InvalidInput("T must be at least 1".into()));
    }
    match code {
        CodeFamily::Rtcs => build_rtcs_region(d, half_span),
        _ => build_cccs_region(code, d, half_span),
    }
}

fn finish(
    code: CodeFamily,
    d: usize,
    half_span: usize,
    mut graph: ClusterGraph,
    patch: Option<Lattice2D>,
    checks: Vec<Check>,
    witness_of: impl Fn(&ClusterGraph, usize) -> [bool; 2],
) -> SimplifiedRegion {
    let last = 2 * half_span;
    for q in &mut graph.qubits {
        if q.t == 0 {
            q.boundary.push(Boundary::TimeStart);
        }
        if q.t == last {
            q.boundary.push(Boundary::TimeEnd);
        }
    }
    let n = graph.len();
    let is_eligible: Vec<bool> = graph
        .qubits
        .iter()
        .map(|q| q.primality == Primality::Primal && q.t >= 1 && q.t < last)
        .collect();
    let eligible: Vec<usize> = (0..n).filter(|&q| is_eligible[q]).collect();
    let mut qubit_checks = vec![Vec::new(); n];
    for (k, c) in checks.iter().enumerate() {
        for &q in &c.support {
            qubit_checks[q].push(k as u32);
        }
    }
    let mut witness_mask = [vec![false; n], vec![false; n]];
    for &q in &eligible {
        let w = witness_of(&graph, q);
        witness_mask[0][q] = w[0];
        witness_mask[1][q] = w[1];
    }
    let witnesses = [
        (0..n).filter(|&q| witness_mask[0][q]).collect(),
        (0..n).filter(|&q| witness_mask[1][q]).collect(),
    ];
    SimplifiedRegion {
        code,
        d,
        half_span,
        graph,
        patch,
        eligible,
        checks,
        qubit_checks,
        witnesses,
        is_eligible,
        witness_mask,
    }
}

fn build_cccs_region(code: CodeFamily, d: usize, half_span: usize) -> Result<SimplifiedRegion> {
    let family = code.lattice_family().expect("CCCS family");
    let patch = build_triangular_patch(family, d)?;
    let layers = 2 * half_span + 1;
    let graph = build_cccs(&patch, layers)?;
    let mut checks = Vec::new();
    for t in (1..layers - 1).step_by(2) {
        for f in &patch.faces {
            let mut support = vec![graph.aq(f.id, t - 1).expect("aq"), graph.aq(f.id, t + 1).expect("aq")];
            support.extend(f.cycle.iter().map(|&v| graph.cq(v, t).expect("cq")));
            support.sort();
            checks.push(Check { key: graph.aq(f.id, t), site: None, color: Some(f.color), t, support });
        }
    }
    checks.sort_by_key(|c| c.key);
    let sides = patch_side_colors();
    let region = finish(code, d, half_span, graph, Some(patch.clone()), checks, |g, q| {
        let qb = &g.qubits[q];
        if qb.role != Role::Cq {
            return [false, false];
        }
        let v = g.vertex_of(q).expect("cq vertex");
        let missing = &patch.vertices[v].missing;
        [missing.contains(&sides[0]), missing.contains(&sides[1])]
    });
    Ok(region)
}

fn build_rtcs_region(d: usize, half_span: usize) -> Result<SimplifiedRegion> {
    let top = 2 * d as i64 - 2;
    let tmax = 2 * half_span as i64;
    let mut cubes = Vec::new();
    for x in (1..top).step_by(2) {
        for y in (1..top).step_by(2) {
            for z in (1..tmax).step_by(2) {
                cubes.push([x, y, z]);
            }
        }
    }
    let mut faces = BTreeSet::new();
    for c in &cubes {
        for axis in 0..3 {
            for dx in [-1, 1] {
                let mut f = *c;
                f[axis] += dx;
                if axis == 1 && (f[1] == 0 || f[1] == top) {
                    continue;
                }
                faces.insert(f);
            }
        }
    }
    let mut sites: BTreeSet<[i64; 3]> = faces.clone();
    for f in &faces {
        for axis in 0..3 {
            if f[axis].rem_euclid(2) == 1 {
                for dx in [-1, 1] {
                    let mut e = *f;
                    e[axis] += dx;
                    sites.insert(e);
                }
            }
        }
    }
    let mut labels: HashMap<[i64; 3], Vec<Boundary>> = HashMap::new();
    for s in &sites {
        let mut l = Vec::new();
        if odd_count(*s) == 2 && s[0].rem_euclid(2) == 0 {
            if s[0] == 0 {
                l.push(Boundary::Primal(0));
            } else if s[0] == top {
                l.push(Boundary::Primal(1));
            }
        }
        if odd_count(*s) == 1 {
            if s[1] == 0 {
                l.push(Boundary::Dual(0));
            } else if s[1] == top {
                l.push(Boundary::Dual(1));
            }
        }
        if !l.is_empty() {
            labels.insert(*s, l);
        }
    }
    let sites: Vec<[i64; 3]> = sites.into_iter().collect();
    let graph = build_cubic(&sites, None, &labels);
    let mut checks = Vec::new();
    for c in &cubes {
        let mut support = Vec::new();
        for axis in 0..3 {
            for dx in [-1, 1] {
                let mut f = *c;
                f[axis] += dx;
                if let Some(q) = graph.cubic(f) {
                    support.push(q);
                }
            }
        }
        support.sort();
        checks.push(Check { key: None, site: Some(*c), color: None, t: c[2] as usize, support });
    }
    checks.sort_by_key(|c| {
        let s = c.site.expect("cube");
        (s[2], s[0], s[1])
    });
    let region = finish(CodeFamily::Rtcs, d, half_span, graph, None, checks, |g, q| {
        let Site::Cubic(s) = g.qubits[q].site else { return [false, false] };
        let x_normal = odd_count(s) == 2 && s[0].rem_euclid(2) == 0;
        [x_normal && s[0] == 0, x_normal && s[0] == top]
    });
    Ok(region)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_three_regions_validate() {
        for code in CodeFamily::ALL {
            let r = build_simplified_region(code, 3, 4).unwrap();
            assert_eq!(r.num_layers(), 9);
            assert!(!r.checks.is_empty());
        }
    }

    #[test]
    fn rtcs_region_counts() {
        let r = build_simplified_region(CodeFamily::Rtcs, 3, 2).unwrap();
        // 2 x 2 x 2 cubes.
        assert_eq!(r.checks.len(), 8);
        let five = r.checks.iter().filter(|c| c.support.len() == 5).count();
        assert_eq!(five, 8);
    }

    #[test]
    fn single_errors_flip_expected_checks() {
        let r = build_simplified_region(CodeFamily::Cccs666, 3, 4).unwrap();
        for &q in &r.eligible {
            let n = r.qubit_checks[q].len();
            match r.graph.qubits[q].role {
                Role::Aq => assert_eq!(n, 2),
                Role::Cq => assert!((1..=3).contains(&n)),
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn patch_distances() {
        for fam in [LatticeFamily::Square488, LatticeFamily::Hex666] {
            for d in [3, 5] {
                let p = build_triangular_patch(fam, d).unwrap();
                let (w, _) = patch_min_logical(&p, d).unwrap();
                assert_eq!(w, d, "{fam:?} d={d}");
            }
        }
    }

    #[test]
    fn even_distance_is_rejected() {
        assert!(build_simplified_region(CodeFamily::Rtcs, 4, 5).is_err());
    }
}

#[cfg(test)]
mod distance_tests {
    use super::*;

    #[test]
    fn distance_five_and_seven() {
        for code in CodeFamily::ALL {
            for d in [5, 7] {
                let r = build_simplified_region(code, d, 3).unwrap();
                let found = r.search_light_logical(d).expect("weight-d logical is found");
                assert_eq!(found.len(), d);
            }
        }
    }
}
