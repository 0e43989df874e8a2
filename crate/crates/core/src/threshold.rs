//! Monte Carlo logical error rates, Wilson intervals and threshold crossings.

use crate::decoder::{classify_residual, residual, Decoder, ResidualClass};
use crate::error::{Error, Result};
use crate::noise::{extract_syndrome, sample_errors, ErrorModel};
use crate::region::{build_simplified_region, CodeFamily, SimplifiedRegion};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

/// Two-sided 99% standard normal quantile.
pub const Z_99: f64 = 2.5758293035489;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub code: CodeFamily,
    pub distances: Vec<usize>,
    pub p_phys: Vec<f64>,
    pub cycles: u64,
    pub seed: u64,
    /// Half time span; defaults to 4d + 1.
    pub half_span: Option<usize>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.distances.is_empty() || self.p_phys.is_empty() {
            return Err(Error::InvalidInput("need at least one distance and one p_phys".into()));
        }
        if let Some(d) = self.distances.iter().find(|&&d| d < 3 || d % 2 == 0) {
            return Err(Error::InvalidInput(format!("distance {d} must be odd and >= 3")));
        }
        if let Some(p) = self.p_phys.iter().find(|&&p| !(p > 0.0 && p < 0.5)) {
            return Err(Error::InvalidInput(format!("p_phys {p} must lie in (0, 0.5)")));
        }
        if self.cycles < 100 {
            return Err(Error::InvalidInput(format!("cycles = {} must be at least 100", self.cycles)));
        }
        Ok(())
    }

    pub fn half_span_for(&self, d: usize) -> usize {
        self.half_span.unwrap_or(4 * d + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub code: CodeFamily,
    pub d: usize,
    pub p_phys: f64,
    pub cycles: u64,
    pub failures: u64,
    pub p_cycle: f64,
    pub p_log: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson(k: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n_f = n as f64;
    let p = k as f64 / n_f;
    let z2 = z * z;
    let denom = 1.0 + z2 / n_f;
    let center = (p + z2 / (2.0 * n_f)) / denom;
    let half = z * (p * (1.0 - p) / n_f + z2 / (4.0 * n_f * n_f)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Per-layer rate from a per-cycle rate over 2T layers.
pub fn per_layer(p_cycle: f64, half_span: usize) -> f64 {
    1.0 - (1.0 - p_cycle).powf(1.0 / (2 * half_span) as f64)
}

/// Inverse of [`per_layer`].
pub fn per_cycle(p_layer: f64, half_span: usize) -> f64 {
    1.0 - (1.0 - p_layer).powi(2 * half_span as i32)
}

/// Per-layer rate assuming logical flips in different layers compose by parity,
/// which matches classification of the accumulated residual. Saturates at 1/2.
pub fn per_layer_parity(p_cycle: f64, half_span: usize) -> f64 {
    if p_cycle >= 0.5 {
        return 0.5;
    }
    0.5 * (1.0 - (1.0 - 2.0 * p_cycle).powf(1.0 / (2 * half_span) as f64))
}

/// How per-cycle failure rates are converted to per-layer rates for crossings.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LayerModel {
    /// `p_log` as stored: independent layers, no cancellation.
    #[default]
    Independent,
    /// [`per_layer_parity`] recomputed from `p_cycle`.
    Parity,
    /// The raw per-cycle rate.
    Cycle,
}

impl std::str::FromStr for LayerModel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "independent" => Ok(LayerModel::Independent),
            "parity" => Ok(LayerModel::Parity),
            "cycle" => Ok(LayerModel::Cycle),
            _ => Err(Error::InvalidInput(format!("unknown layer model '{s}'"))),
        }
    }
}

/// One sampling cycle. Returns true on a logical failure.
pub fn run_cycle(region: &SimplifiedRegion, decoder: &Decoder, model: &ErrorModel, seed: u64, idx: u64) -> Result<bool> {
    let errors = sample_errors(region, model, seed, idx);
    run_with_errors(region, decoder, &errors)
}

/// Decodes an explicit error set and classifies the residual.
pub fn run_with_errors(region: &SimplifiedRegion, decoder: &Decoder, errors: &[usize]) -> Result<bool> {
    let syndrome = extract_syndrome(region, errors);
    let decoded = decoder.decode(region, &syndrome)?;
    let res = residual(errors, &decoded.correction);
    Ok(classify_residual(region, &res)? == ResidualClass::Logical)
}

/// Seed of one (d, p) point, derived from the base seed.
pub fn point_seed(base: u64, d: usize, p_index: usize) -> u64 {
    base ^ ((d as u64) << 32) ^ ((p_index as u64) << 48) ^ 0x9E37_79B9_7F4A_7C15
}

fn count_failures(region: &SimplifiedRegion, decoder: &Decoder, model: &ErrorModel, seed: u64, cycles: u64) -> Result<u64> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..cycles)
            .into_par_iter()
            .map(|i| run_cycle(region, decoder, model, seed, i).map(u64::from))
            .try_reduce(|| 0, |a, b| Ok(a + b))
    }
    #[cfg(not(feature = "parallel"))]
    {
        let mut n = 0;
        for i in 0..cycles {
            n += u64::from(run_cycle(region, decoder, model, seed, i)?);
        }
        Ok(n)
    }
}

/// One curve point on a prepared region. `seed` is the point seed, see [`point_seed`].
pub fn simulate_point(region: &SimplifiedRegion, decoder: &Decoder, p_phys: f64, seed: u64, cycles: u64) -> Result<CurvePoint> {
    let model = ErrorModel::from_p_phys(p_phys)?;
    let failures = count_failures(region, decoder, &model, seed, cycles)?;
    Ok(make_point(region.code, region.d, p_phys, region.half_span, cycles, failures))
}

pub fn make_point(code: CodeFamily, d: usize, p_phys: f64, half_span: usize, cycles: u64, failures: u64) -> CurvePoint {
    let p_cycle = failures as f64 / cycles as f64;
    let (lo, hi) = wilson(failures, cycles, Z_99);
    CurvePoint {
        code,
        d,
        p_phys,
        cycles,
        failures,
        p_cycle,
        p_log: per_layer(p_cycle, half_span),
        ci_low: per_layer(lo, half_span),
        ci_high: per_layer(hi, half_span),
    }
}

/// Runs every (d, p) point. Output is sorted by (d, p) and independent of scheduling.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<CurvePoint>> {
    run_experiment_with(config, |_| {})
}

pub fn run_experiment_with(config: &ExperimentConfig, mut progress: impl FnMut(&CurvePoint)) -> Result<Vec<CurvePoint>> {
    config.validate()?;
    let mut distances = config.distances.clone();
    distances.sort_unstable();
    distances.dedup();
    let mut ps: Vec<(usize, f64)> = config.p_phys.iter().copied().enumerate().collect();
    ps.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut out = Vec::new();
    for d in distances {
        let t = config.half_span_for(d);
        let region = build_simplified_region(config.code, d, t)?;
        let decoder = Decoder::new(&region)?;
        for &(pi, p) in &ps {
            let point = simulate_point(&region, &decoder, p, point_seed(config.seed, d, pi), config.cycles)?;
            progress(&point);
            out.push(point);
        }
    }
    Ok(out)
}

pub const CSV_HEADER: &str = "code,d,p_phys,cycles,failures,p_cycle,p_log,ci_low,ci_high";

pub fn to_csv(points: &[CurvePoint]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for p in points {
        writeln!(
            s,
            "{},{},{},{},{},{:.10e},{:.10e},{:.10e},{:.10e}",
            p.code, p.d, p.p_phys, p.cycles, p.failures, p.p_cycle, p.p_log, p.ci_low, p.ci_high
        )
        .expect("write to string");
    }
    s
}

pub fn from_csv(text: &str) -> Result<Vec<CurvePoint>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::InvalidInput("empty CSV".into()))?;
    if header.trim() != CSV_HEADER {
        return Err(Error::InvalidInput(format!("unexpected CSV header '{header}'")));
    }
    let mut out = Vec::new();
    for (n, line) in lines.enumerate() {
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != 9 {
            return Err(Error::InvalidInput(format!("CSV row {} has {} fields", n + 2, f.len())));
        }
        let bad = |what: &str| Error::InvalidInput(format!("CSV row {}: bad {what}", n + 2));
        out.push(CurvePoint {
            code: f[0].parse()?,
            d: f[1].parse().map_err(|_| bad("d"))?,
            p_phys: f[2].parse().map_err(|_| bad("p_phys"))?,
            cycles: f[3].parse().map_err(|_| bad("cycles"))?,
            failures: f[4].parse().map_err(|_| bad("failures"))?,
            p_cycle: f[5].parse().map_err(|_| bad("p_cycle"))?,
            p_log: f[6].parse().map_err(|_| bad("p_log"))?,
            ci_low: f[7].parse().map_err(|_| bad("ci_low"))?,
            ci_high: f[8].parse().map_err(|_| bad("ci_high"))?,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub d1: usize,
    pub d2: usize,
    pub crossing: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub code: CodeFamily,
    pub pairs: Vec<Crossing>,
    pub p_thrs: f64,
    pub spread: f64,
}

/// Crossing of two curves sampled at the same p values, by linear interpolation in
/// (log p, log P). Uses the first sign change of log P1 − log P2.
pub fn curve_crossing(a: &[(f64, f64)], b: &[(f64, f64)]) -> Option<f64> {
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for &(p, pa) in a {
        if let Some(&(_, pb)) = b.iter().find(|(q, _)| (q - p).abs() <= 1e-12 * p.abs().max(1.0)) {
            if pa > 0.0 && pb > 0.0 {
                pts.push((p.ln(), pa.ln() - pb.ln()));
            }
        }
    }
    pts.sort_by(|x, y| x.0.total_cmp(&y.0));
    for w in pts.windows(2) {
        let ((x0, g0), (x1, g1)) = (w[0], w[1]);
        if g0 == 0.0 && g1 == 0.0 {
            continue;
        }
        if g0 == 0.0 {
            return Some(x0.exp());
        }
        if g0.signum() != g1.signum() {
            let x = if g1 == 0.0 { x1 } else { x0 + (x1 - x0) * g0 / (g0 - g1) };
            return Some(x.exp());
        }
    }
    None
}

/// Mean and spread (max − min) of the pairwise crossings of one code's curves.
pub fn estimate_threshold(points: &[CurvePoint]) -> Result<ThresholdReport> {
    estimate_threshold_with(points, LayerModel::Independent, |d| 4 * d + 1)
}

/// Threshold under a chosen layer model; `half_span` gives T for each distance.
pub fn estimate_threshold_with(points: &[CurvePoint], model: LayerModel, half_span: impl Fn(usize) -> usize) -> Result<ThresholdReport> {
    let code = points.first().ok_or_else(|| Error::InvalidInput("no curve points".into()))?.code;
    if points.iter().any(|p| p.code != code) {
        return Err(Error::InvalidInput("curve points mix code families".into()));
    }
    let mut ds: Vec<usize> = points.iter().map(|p| p.d).collect();
    ds.sort_unstable();
    ds.dedup();
    if ds.len() < 2 {
        return Err(Error::NoCrossing("need curves for at least two distances".into()));
    }
    let curve = |d: usize| -> Vec<(f64, f64)> { 
        points
            .iter()
            .filter(|p| p.d == d)
            .map(|p| {
                let y = match model {
                    LayerModel::Independent => p.p_log,
                    LayerModel::Parity => per_layer_parity(p.p_cycle, half_span(p.d)),
                    LayerModel::Cycle => p.p_cycle,
                };
                (p.p_phys, y)
            })
            .collect()
    };
    let mut pairs = Vec::new();
    for (i, &d1) in ds.iter().enumerate() {
        for &d2 in &ds[i + 1..] {
            if let Some(x) = curve_crossing(&curve(d1), &curve(d2)) {
                pairs.push(Crossing { d1, d2, crossing: x });
            }
        }
    }
    if pairs.is_empty() {
        return Err(Error::NoCrossing(format!("curves of {code} never cross")));
    }
    let xs: Vec<f64> = pairs.iter().map(|c| c.crossing).collect();
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    let spread = xs.iter().cloned().fold(f64::MIN, f64::max) - xs.iter().cloned().fold(f64::MAX, f64::min);
    Ok(ThresholdReport { code, pairs, p_thrs: mean, spread })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn synthetic(p0: f64) -> Vec<CurvePoint> {
        let mut out = Vec::new();
        for d in [3usize, 5, 7] {
            for p in [0.01, 0.02, 0.025, 0.035, 0.04, 0.05] {
                let v = (p / p0).powi(d as i32) * 1e-2;
                out.push(CurvePoint {
                    code: CodeFamily::Rtcs,
                    d,
                    p_phys: p,
                    cycles: 1000,
                    failures: 0,
                    p_cycle: v,
                    p_log: v,
                    ci_low: v,
                    ci_high: v,
                });
            }
        }
        out
    }

    #[test]
    fn synthetic_power_laws_cross_at_p0() {
        let r = estimate_threshold(&synthetic(0.03)).unwrap();
        assert_eq!(r.pairs.len(), 3);
        assert!((r.p_thrs - 0.03).abs() < 1e-12, "{}", r.p_thrs);
        assert!(r.spread < 1e-12);
    }

    #[test]
    fn identical_curves_have_no_crossing() {
        let mut pts = synthetic(0.03);
        for p in &mut pts {
            p.p_log = p.p_phys;
        }
        assert!(matches!(estimate_threshold(&pts), Err(Error::NoCrossing(_))));
    }

    #[test]
    fn per_layer_round_trip() {
        for &p in &[0.0, 1e-6, 0.01, 0.3, 0.9] {
            let l = per_layer(p, 13);
            assert!((per_cycle(l, 13) - p).abs() < 1e-12);
        }
    }

    #[test]
    fn parity_layers_compose_to_cycle_rate() {
        for &p in &[0.0, 1e-4, 0.05, 0.3, 0.49] {
            let q = per_layer_parity(p, 7);
            let mut odd = 0.0;
            for _ in 0..14 {
                odd = odd * (1.0 - q) + (1.0 - odd) * q;
            }
            assert!((odd - p).abs() < 1e-12, "{p} {odd}");
        }
        assert_eq!(per_layer_parity(0.7, 7), 0.5);
    }

    #[test]
    fn wilson_covers_truth() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut covered = 0;
        for _ in 0..1000 {
            let p: f64 = rng.gen_range(0.01..0.5);
            let n = 500;
            let k = (0..n).filter(|_| rng.gen::<f64>() < p).count() as u64;
            let (lo, hi) = wilson(k, n, Z_99);
            if lo <= p && p <= hi {
                covered += 1;
            }
        }
        assert!(covered >= 970, "{covered}");
    }

    #[test]
    fn wilson_known_value() {
        // k = 0: upper bound z^2 / (n + z^2).
        let (lo, hi) = wilson(0, 100, Z_99);
        assert_eq!(lo, 0.0);
        assert!((hi - Z_99 * Z_99 / (100.0 + Z_99 * Z_99)).abs() < 1e-12);
    }

    #[test]
    fn csv_round_trip() {
        let pts = synthetic(0.03);
        let back = from_csv(&to_csv(&pts)).unwrap();
        assert_eq!(back.len(), pts.len());
        assert_eq!(to_csv(&back), to_csv(&pts));
        assert!(from_csv("nope\n").is_err());
    }

    #[test]
    fn invalid_configs() {
        let mut c = ExperimentConfig { code: CodeFamily::Rtcs, distances: vec![3], p_phys: vec![0.01], cycles: 100, seed: 0, half_span: None };
        assert!(c.validate().is_ok());
        c.cycles = 10;
        assert!(c.validate().is_err());
        c.cycles = 100;
        c.distances = vec![4];
        assert!(c.validate().is_err());
    }

    #[test]
    fn zero_noise_never_fails() {
        let r = build_simplified_region(CodeFamily::Cccs666, 3, 4).unwrap();
        let dec = Decoder::new(&r).unwrap();
        let m = ErrorModel::from_p_phys(0.0).unwrap();
        for i in 0..20 {
            assert!(!run_cycle(&r, &dec, &m, 1, i).unwrap());
        }
    }

    #[test]
    fn experiment_is_reproducible() {
        let c = ExperimentConfig { code: CodeFamily::Rtcs, distances: vec![3], p_phys: vec![0.05, 0.02], cycles: 200, seed: 4, half_span: Some(2) };
        let a = run_experiment(&c).unwrap();
        let b = run_experiment(&c).unwrap();
        assert_eq!(to_csv(&a), to_csv(&b));
        assert!(a[0].p_phys < a[1].p_phys);
    }
}
