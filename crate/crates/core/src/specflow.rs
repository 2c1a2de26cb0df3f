//! Relative index of spectral projections and the partition/weight spectral flow.
//!
//! A path is cut into segments `[tau_i, tau_{i+1}]`, each carrying a weight that
//! stays `gap_tol` away from every eigenvalue on the segment. At every junction
//! the weights change and the spectral flow picks up the relative index of the
//! two spectral projections there. The outermost weights are zero.
//!
//! [`crossing_count_oracle`] counts sign changes of the eigenvalue curves
//! directly and shares no code with the partition engine.

use crate::error::{Error, Result};
use crate::linalg::Spectrum;
use crate::opmodel::{FamilyBacking, SpectralFamily};

pub const DEFAULT_GAP_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SfConfig {
    pub gap_tol: f64,
    /// Samples per segment when bounding the eigenvalue envelope.
    pub samples: usize,
    /// Oversampling factor of the validation pass.
    pub densify: usize,
    /// Number of gap midpoints kept in the weight ladder.
    pub ladder: usize,
    pub max_depth: u32,
}

impl Default for SfConfig {
    fn default() -> Self {
        Self { gap_tol: DEFAULT_GAP_TOL, samples: 64, densify: 10, ladder: 16, max_depth: 20 }
    }
}

/// Segments of `[0, 1]` (in traversal order) and their weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    pub segments: Vec<(f64, f64)>,
    pub weights: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SfReport {
    pub value: i64,
    pub partition: Partition,
    /// Relative index picked up at each junction, including the two ends where
    /// the weight meets zero.
    pub contributions: Vec<i64>,
}

/// `ind(Pi_lambda, Pi_mu) = sgn(mu - lambda) * #{eigenvalues in [min, max)}`.
pub fn rel_index(s: &Spectrum, lambda: f64, mu: f64) -> i64 {
    if lambda == mu {
        return 0;
    }
    let (lo, hi) = if lambda < mu { (lambda, mu) } else { (mu, lambda) };
    let count = s.count_in(lo, hi) as i64;
    if mu > lambda {
        count
    } else {
        -count
    }
}

fn sample_points(f: &SpectralFamily, a: f64, b: f64, n: usize) -> Vec<f64> {
    let n = n.max(1);
    let mut pts: Vec<f64> = (0..=n).map(|k| a + (b - a) * k as f64 / n as f64).collect();
    pts.extend(f.interior_nodes(a, b));
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Envelope `[min, max]` of every eigenvalue branch over the sampled segment.
fn envelopes(f: &SpectralFamily, a: f64, b: f64, n: usize) -> Vec<(f64, f64)> {
    let pts = sample_points(f, a, b, n);
    match f.backing() {
        FamilyBacking::Curves(curves) => curves
            .iter()
            .map(|c| {
                pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &t| {
                    let v = SpectralFamily::curve_value(c, f.grid(), t);
                    (lo.min(v), hi.max(v))
                })
            })
            .collect(),
        FamilyBacking::Matrices(_) => {
            let spectra: Vec<Spectrum> = pts.iter().map(|&t| f.spectrum_at(t)).collect();
            let dim = spectra[0].len();
            (0..dim)
                .map(|k| {
                    spectra.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
                        let v = s.eigenvalues()[k];
                        (lo.min(v), hi.max(v))
                    })
                })
                .collect()
        }
    }
}

fn clear_of(envelopes: &[(f64, f64)], w: f64, tol: f64) -> bool {
    envelopes.iter().all(|&(lo, hi)| w < lo - tol || w > hi + tol)
}

/// A weight on `[a, b]` that stays `gap_tol` away from the spectrum, starting at
/// `hint` and otherwise scanning the midpoints of the largest spectral gaps
/// (and two points just outside the occupied range), nearest to `hint` first.
pub fn find_weight(f: &SpectralFamily, a: f64, b: f64, hint: f64, cfg: &SfConfig) -> Result<f64> {
    if !(a < b) {
        return Err(Error::InvalidArgument(format!("empty segment [{a}, {b}]")));
    }
    let env = envelopes(f, a, b, cfg.samples);
    let dense = envelopes(f, a, b, cfg.samples * cfg.densify.max(1));
    let tol = cfg.gap_tol;
    if clear_of(&env, hint, tol) && clear_of(&dense, hint, tol) {
        return Ok(hint);
    }

    let mut merged: Vec<(f64, f64)> = env.iter().map(|&(lo, hi)| (lo - tol, hi + tol)).collect();
    merged.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut blocks: Vec<(f64, f64)> = Vec::new();
    for (lo, hi) in merged {
        match blocks.last_mut() {
            Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
            _ => blocks.push((lo, hi)),
        }
    }
    let mut gaps: Vec<(f64, f64)> = blocks
        .windows(2)
        .filter(|w| w[1].0 > w[0].1)
        .map(|w| (w[1].0 - w[0].1, 0.5 * (w[0].1 + w[1].0)))
        .collect();
    gaps.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.total_cmp(&y.1)));
    let mut candidates: Vec<f64> = gaps.iter().take(cfg.ladder).map(|g| g.1).collect();
    if let (Some(first), Some(last)) = (blocks.first(), blocks.last()) {
        let span = (last.1 - first.0).max(1.0);
        let delta = 0.25 * span;
        candidates.push(first.0 + tol - delta);
        candidates.push(last.1 - tol + delta);
    }
    candidates.sort_by(|x, y| (x - hint).abs().total_cmp(&(y - hint).abs()).then(x.total_cmp(y)));
    candidates
        .into_iter()
        .find(|&w| clear_of(&env, w, tol) && clear_of(&dense, w, tol))
        .ok_or(Error::NoGapFound { a, b, hint })
}

fn check_invertible(f: &SpectralFamily, tau: f64, tol: f64) -> Result<()> {
    if f.spectrum_at(tau).distance_to(0.0) < tol {
        return Err(Error::EndpointNotInvertible { tau, tol });
    }
    Ok(())
}

/// Splits each piece until every segment carries a weight.
fn refine(f: &SpectralFamily, pieces: &[(f64, f64)], cfg: &SfConfig) -> Result<Partition> {
    let mut segments = Vec::new();
    let mut weights = Vec::new();
    for &(a, b) in pieces {
        let mut stack = vec![(a, b, 0u32)];
        while let Some((lo, hi, depth)) = stack.pop() {
            match find_weight(f, lo, hi, 0.0, cfg) {
                Ok(w) => {
                    segments.push((lo, hi));
                    weights.push(w);
                }
                Err(Error::NoGapFound { .. }) => {
                    if depth >= cfg.max_depth {
                        return Err(Error::PartitionDepthExceeded(cfg.max_depth));
                    }
                    let mid = 0.5 * (lo + hi);
                    // right half first so the left half is processed next
                    stack.push((mid, hi, depth + 1));
                    stack.push((lo, mid, depth + 1));
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(Partition { segments, weights })
}

/// Sums the junction contributions of a partition. The spectrum at a junction is
/// taken at the end of the preceding segment, which also covers the wrap point
/// of a loop.
fn evaluate(f: &SpectralFamily, partition: Partition) -> SfReport {
    let segs = &partition.segments;
    let ws = &partition.weights;
    let mut contributions = Vec::with_capacity(segs.len() + 1);
    contributions.push(rel_index(&f.spectrum_at(segs[0].0), ws[0], 0.0));
    for i in 1..segs.len() {
        contributions.push(rel_index(&f.spectrum_at(segs[i - 1].1), ws[i], ws[i - 1]));
    }
    let last = segs.len() - 1;
    contributions.push(rel_index(&f.spectrum_at(segs[last].1), 0.0, ws[last]));
    let value = contributions.iter().sum();
    SfReport { value, partition, contributions }
}

/// Spectral flow of the family over `[0, 1]`.
pub fn spectral_flow(f: &SpectralFamily, cfg: &SfConfig) -> Result<SfReport> {
    spectral_flow_between(f, 0.0, 1.0, cfg)
}

/// Spectral flow of the restriction to `[a, b]`.
pub fn spectral_flow_between(f: &SpectralFamily, a: f64, b: f64, cfg: &SfConfig) -> Result<SfReport> {
    check_invertible(f, a, cfg.gap_tol)?;
    check_invertible(f, b, cfg.gap_tol)?;
    let partition = refine(f, &[(a, b)], cfg)?;
    Ok(evaluate(f, partition))
}

/// Spectral flow starting from a forced initial partition `0 = taus[0] < ... < taus[N] = 1`.
/// Segments without a weight are refined further.
pub fn spectral_flow_with_partition(f: &SpectralFamily, taus: &[f64], cfg: &SfConfig) -> Result<SfReport> {
    if taus.len() < 2 || taus[0] != 0.0 || *taus.last().unwrap() != 1.0 || taus.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidArgument("forced partition must increase from 0 to 1".into()));
    }
    check_invertible(f, 0.0, cfg.gap_tol)?;
    check_invertible(f, 1.0, cfg.gap_tol)?;
    let pieces: Vec<(f64, f64)> = taus.windows(2).map(|w| (w[0], w[1])).collect();
    let partition = refine(f, &pieces, cfg)?;
    Ok(evaluate(f, partition))
}

/// Spectral flow around a loop, measured from the basepoint with the widest
/// spectral gap at zero.
pub fn loop_spectral_flow(f: &SpectralFamily, cfg: &SfConfig) -> Result<i64> {
    if !f.is_loop() {
        return Err(Error::LoopMismatch("family was not validated as a loop".into()));
    }
    let scan = 256;
    let (best, margin) = (0..scan)
        .map(|k| k as f64 / scan as f64)
        .chain(f.grid().windows(2).map(|w| 0.5 * (w[0] + w[1])))
        .map(|t| (t, f.spectrum_at(t).distance_to(0.0)))
        .fold((0.0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
    if margin < cfg.gap_tol {
        return Err(Error::NowhereInvertible);
    }
    loop_spectral_flow_from(f, best, cfg)
}

/// Spectral flow around a loop starting and ending at `base`.
pub fn loop_spectral_flow_from(f: &SpectralFamily, base: f64, cfg: &SfConfig) -> Result<i64> {
    if !f.is_loop() {
        return Err(Error::LoopMismatch("family was not validated as a loop".into()));
    }
    check_invertible(f, base, cfg.gap_tol)?;
    let pieces: Vec<(f64, f64)> = if base <= 0.0 || base >= 1.0 {
        vec![(0.0, 1.0)]
    } else {
        vec![(base, 1.0), (0.0, base)]
    };
    let partition = refine(f, &pieces, cfg)?;
    Ok(evaluate(f, partition).value)
}

/// Zero tolerance of the crossing oracle, relative to the curve's magnitude.
const ZERO_TOL: f64 = 1e-12;

/// Signed count of zero crossings (up minus down) of the eigenvalue curves.
///
/// For loops a curve that starts or ends on zero contributes half a crossing in
/// the direction it leaves or arrives; the halves pair up across the wrap.
pub fn crossing_count_oracle(f: &SpectralFamily) -> Result<i64> {
    let curves = f.curves().ok_or(Error::CurvesRequired)?;
    let grid = f.grid();
    let mut half_units = 0i64;
    for (k, c) in curves.iter().enumerate() {
        let scale = c.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let signs: Vec<i8> = c
            .iter()
            .map(|&v| if v.abs() <= ZERO_TOL * scale { 0 } else if v > 0.0 { 1 } else { -1 })
            .collect();
        if signs.iter().all(|&s| s == 0) {
            return Err(Error::TangencyDetected { curve: k, tau: 0.0 });
        }
        if !f.is_loop() {
            if signs[0] == 0 {
                return Err(Error::EndpointNotInvertible { tau: 0.0, tol: ZERO_TOL });
            }
            if *signs.last().unwrap() == 0 {
                return Err(Error::EndpointNotInvertible { tau: 1.0, tol: ZERO_TOL });
            }
        }
        let mut last: Option<i8> = None;
        let mut zero_run_start: Option<usize> = None;
        for (i, &s) in signs.iter().enumerate() {
            if s == 0 {
                zero_run_start.get_or_insert(i);
                continue;
            }
            match last {
                None => {
                    // leading zeros of a loop curve: half a crossing leaving zero
                    if zero_run_start.is_some() {
                        half_units += s as i64;
                    }
                }
                Some(prev) if prev != s => half_units += 2 * s as i64,
                Some(_) => {
                    if let Some(z) = zero_run_start {
                        return Err(Error::TangencyDetected { curve: k, tau: grid[z] });
                    }
                }
            }
            last = Some(s);
            zero_run_start = None;
        }
        if zero_run_start.is_some() {
            // trailing zeros: half a crossing arriving at zero
            half_units -= last.unwrap_or(0) as i64;
        }
    }
    if half_units % 2 != 0 {
        return Err(Error::LoopMismatch("unpaired half crossing at the loop endpoints".into()));
    }
    Ok(half_units / 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{DenseHermitian, SpectrumSource};
    use crate::opmodel::{family_from_curves, family_from_matrices, LoopCheck};

    fn spectrum(v: Vec<f64>) -> Spectrum {
        Spectrum::new(v, SpectrumSource::LatticeTruncation)
    }

    fn shifted_lattice_family(n: i32) -> SpectralFamily {
        let curves = (-n..=n).map(|k| vec![k as f64 + 0.5, k as f64 + 1.5]).collect();
        family_from_curves(vec![0.0, 1.0], curves, None).unwrap()
    }

    #[test]
    fn relative_index_counts_half_open_window() {
        let s = spectrum((-5..5).map(|k| k as f64 + 0.5).collect());
        assert_eq!(rel_index(&s, 0.0, 2.0), 2);
        assert_eq!(rel_index(&s, 2.0, 0.0), -2);
        assert_eq!(rel_index(&s, 1.0, 1.0), 0);
        assert_eq!(rel_index(&s, 0.5, 1.5), 1);
    }

    #[test]
    fn weight_on_gapped_family() {
        let curves = (-3..3).map(|k| vec![k as f64 + 0.5; 2]).collect();
        let f = family_from_curves(vec![0.0, 1.0], curves, None).unwrap();
        assert_eq!(find_weight(&f, 0.0, 1.0, 0.0, &SfConfig::default()).unwrap(), 0.0);
    }

    #[test]
    fn weight_falls_back_to_ladder() {
        let f = family_from_curves(vec![0.0, 1.0], vec![vec![-0.5, 0.5]], None).unwrap();
        let cfg = SfConfig::default();
        let w = find_weight(&f, 0.0, 1.0, 0.0, &cfg).unwrap();
        assert!((w.abs() - 0.75).abs() < 1e-5, "w = {w}");
        // densified re-check
        for k in 0..=640 {
            let t = k as f64 / 640.0;
            assert!(f.spectrum_at(t).distance_to(w) >= cfg.gap_tol);
        }
    }

    #[test]
    fn constant_family_has_no_flow() {
        let curves = (-4..4).map(|k| vec![k as f64 + 0.5; 3]).collect();
        let f = family_from_curves(vec![0.0, 0.5, 1.0], curves, None).unwrap();
        assert_eq!(spectral_flow(&f, &SfConfig::default()).unwrap().value, 0);
        assert_eq!(crossing_count_oracle(&f).unwrap(), 0);
    }

    #[test]
    fn shifted_lattice_flows_once() {
        let f = shifted_lattice_family(20);
        let r = spectral_flow(&f, &SfConfig::default()).unwrap();
        assert_eq!(r.value, 1);
        assert_eq!(r.value, r.contributions.iter().sum::<i64>());
        assert_eq!(crossing_count_oracle(&f).unwrap(), 1);
        assert_eq!(spectral_flow(&f.reversed(), &SfConfig::default()).unwrap().value, -1);
    }

    #[test]
    fn single_curves() {
        let up = family_from_curves(vec![0.0, 1.0], vec![vec![-0.5, 0.5]], None).unwrap();
        assert_eq!(crossing_count_oracle(&up).unwrap(), 1);
        assert_eq!(spectral_flow(&up, &SfConfig::default()).unwrap().value, 1);
        let pair =
            family_from_curves(vec![0.0, 1.0], vec![vec![-0.5, 0.5], vec![0.5, -0.5]], None).unwrap();
        assert_eq!(crossing_count_oracle(&pair).unwrap(), 0);
        assert_eq!(spectral_flow(&pair, &SfConfig::default()).unwrap().value, 0);
    }

    #[test]
    fn endpoint_kernel_is_an_error() {
        let f = family_from_curves(vec![0.0, 1.0], vec![vec![0.0, 1.0]], None).unwrap();
        assert_eq!(spectral_flow(&f, &SfConfig::default()).unwrap_err().name(), "EndpointNotInvertible");
        assert_eq!(crossing_count_oracle(&f).unwrap_err().name(), "EndpointNotInvertible");
    }

    #[test]
    fn tangency_is_detected() {
        let f = family_from_curves(vec![0.0, 0.5, 1.0], vec![vec![1.0, 0.0, 1.0]], None).unwrap();
        assert_eq!(crossing_count_oracle(&f).unwrap_err().name(), "TangencyDetected");
    }

    #[test]
    fn concatenation() {
        let f = shifted_lattice_family(10);
        let cfg = SfConfig::default();
        let whole = spectral_flow(&f, &cfg).unwrap().value;
        for &c in &[0.25, 0.3, 0.75] {
            let left = spectral_flow_between(&f, 0.0, c, &cfg).unwrap().value;
            let right = spectral_flow_between(&f, c, 1.0, &cfg).unwrap().value;
            assert_eq!(left + right, whole);
        }
    }

    #[test]
    fn forced_partitions_agree() {
        let f = shifted_lattice_family(10);
        let cfg = SfConfig::default();
        for taus in [vec![0.0, 1.0], vec![0.0, 0.5, 1.0], vec![0.0, 0.1, 0.2, 0.9, 1.0]] {
            assert_eq!(spectral_flow_with_partition(&f, &taus, &cfg).unwrap().value, 1);
        }
    }

    #[test]
    fn lattice_loop() {
        let n = 8;
        let curves = (-n..=n).map(|k| vec![k as f64, k as f64 + 1.0]).collect();
        let window = LoopCheck::Window { lo: (-n + 1) as f64, hi: (n - 1) as f64 };
        let f = family_from_curves(vec![0.0, 1.0], curves, Some(window)).unwrap();
        let cfg = SfConfig::default();
        assert_eq!(loop_spectral_flow(&f, &cfg).unwrap(), 1);
        assert_eq!(loop_spectral_flow_from(&f, 0.3, &cfg).unwrap(), 1);
        assert_eq!(loop_spectral_flow_from(&f, 0.8, &cfg).unwrap(), 1);
        assert_eq!(crossing_count_oracle(&f).unwrap(), 1);
    }

    #[test]
    fn even_class_loop_has_no_flow() {
        // n^2 + v(tau) - v(0) with v(tau) = 0.5 + 0.3 sin(2 pi tau)
        let m = 64;
        let grid: Vec<f64> = (0..=m).map(|k| k as f64 / m as f64).collect();
        let bump: Vec<f64> = grid.iter().map(|t| 0.3 * (2.0 * std::f64::consts::PI * t).sin()).collect();
        let mut curves = vec![bump.clone()];
        for k in 1..6 {
            let base = (k * k) as f64;
            curves.push(bump.iter().map(|b| base + b).collect());
            curves.push(bump.iter().map(|b| base + b).collect());
        }
        let f = family_from_curves(grid, curves, Some(LoopCheck::Full)).unwrap();
        assert_eq!(loop_spectral_flow(&f, &SfConfig::default()).unwrap(), 0);
        assert_eq!(crossing_count_oracle(&f).unwrap(), 0);
    }

    #[test]
    fn constant_loop_and_nowhere_invertible() {
        let f = family_from_curves(vec![0.0, 1.0], vec![vec![0.5, 0.5]], Some(LoopCheck::Full)).unwrap();
        assert_eq!(loop_spectral_flow(&f, &SfConfig::default()).unwrap(), 0);
        let z = family_from_curves(vec![0.0, 1.0], vec![vec![0.0, 0.0]], Some(LoopCheck::Full)).unwrap();
        assert_eq!(loop_spectral_flow(&z, &SfConfig::default()).unwrap_err(), Error::NowhereInvertible);
    }

    #[test]
    fn matrix_family_flow() {
        // diag(-1 + 2 tau, 3) rotated by a fixed unitary keeps the same flow
        let a = DenseHermitian::from_real(2, &[-1.0, 0.0, 0.0, 3.0]).unwrap();
        let b = DenseHermitian::from_real(2, &[1.0, 0.0, 0.0, 3.0]).unwrap();
        let f = family_from_matrices(vec![0.0, 1.0], vec![a, b], None).unwrap();
        assert_eq!(spectral_flow(&f, &SfConfig::default()).unwrap().value, 1);
        let c = DenseHermitian::from_real(2, &[1.0, 2.0, 2.0, 1.0]).unwrap(); // eigenvalues -1, 3
        let d = DenseHermitian::from_real(2, &[2.0, 1.0, 1.0, 2.0]).unwrap(); // eigenvalues 1, 3
        let g = family_from_matrices(vec![0.0, 1.0], vec![c, d], None).unwrap();
        assert_eq!(spectral_flow(&g, &SfConfig::default()).unwrap().value, 1);
        assert_eq!(crossing_count_oracle(&g).unwrap_err(), Error::CurvesRequired);
    }
}
