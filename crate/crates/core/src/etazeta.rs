//! η- and ζ-regularization of lattice spectra.
//!
//! For a component `c (Z + t)` the series `sum sgn(l) |l|^{-s}` splits into the
//! Hurwitz series `zeta_H(s, t)` (positive points) and `zeta_H(s, 1 - t)`
//! (negative points). At `s = 0` the scale drops out and the power `p` only
//! rescales `s`, so every component has a closed form.

use crate::error::{Error, Result};
use crate::linalg::DEFAULT_KERNEL_TOL;
use crate::opmodel::{lift_model, CoverConfig, LatticeComponent, LatticeSpectrumModel, ModelOperator, SignRule};

/// Terms summed directly before the Euler-Maclaurin tail.
const DIRECT_TERMS: usize = 30;

/// `B_2, B_4, ..., B_30`.
const BERNOULLI: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

/// Hurwitz zeta `sum_{n >= 0} (n + a)^{-s}`, continued to `s != 1` by
/// Euler-Maclaurin summation.
pub fn hurwitz_zeta(s: f64, a: f64) -> Result<f64> {
    if (s - 1.0).abs() < 1e-12 {
        return Err(Error::PoleAtOne);
    }
    if !(a > 0.0) || !a.is_finite() || !s.is_finite() {
        return Err(Error::InvalidArgument(format!("hurwitz_zeta needs finite s and a > 0, got s = {s}, a = {a}")));
    }
    let direct: f64 = (0..DIRECT_TERMS).map(|n| (n as f64 + a).powf(-s)).sum();
    let x = DIRECT_TERMS as f64 + a;
    let mut tail = x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s);
    // rising factorial (s)_{2k-1} and (2k)! built incrementally
    let mut rising = s;
    let mut factorial = 2.0;
    let mut power = x.powf(-s - 1.0);
    for (k, b) in BERNOULLI.iter().enumerate() {
        let k = k + 1;
        tail += b / factorial * rising * power;
        let j = 2 * k as u32;
        rising *= (s + j as f64 - 1.0) * (s + j as f64);
        factorial *= (j + 1) as f64 * (j + 2) as f64;
        power /= x * x;
    }
    Ok(direct + tail)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtaMethod {
    ClosedForm,
    Hurwitz,
    Perturbation,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaResult {
    /// `(eta_at_zero + kernel_dim) / 2`
    pub eta: f64,
    pub eta_at_zero: f64,
    pub kernel_dim: usize,
    pub method: EtaMethod,
    pub err_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaResult {
    pub zeta_at_zero: f64,
    pub kernel_dim: usize,
    pub heat_invariant: f64,
}

/// Which continuation evaluates the component series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    ClosedForm,
    Hurwitz,
}

const HURWITZ_ERR: f64 = 1e-10;

/// `(eta(0), zeta(0), kernel)` of a single component.
fn component_values(c: &LatticeComponent, backend: Backend) -> Result<(f64, f64, usize)> {
    let t = c.offset;
    let (pos, neg, kernel) = if c.has_zero() {
        // points n >= 1 on both sides plus the kernel
        match backend {
            Backend::ClosedForm => (-0.5, -0.5, 1),
            Backend::Hurwitz => {
                let z = hurwitz_zeta(0.0, 1.0)?;
                (z, z, 1)
            }
        }
    } else {
        match backend {
            Backend::ClosedForm => (0.5 - t, t - 0.5, 0),
            Backend::Hurwitz => (hurwitz_zeta(0.0, t)?, hurwitz_zeta(0.0, 1.0 - t)?, 0),
        }
    };
    let zeta = pos + neg;
    let eta = match c.sign {
        SignRule::Signed => pos - neg,
        SignRule::Abs => zeta,
        SignRule::NegAbs => -zeta,
    };
    Ok((eta, zeta, kernel))
}

fn sgn(x: f64) -> f64 {
    if x.abs() <= DEFAULT_KERNEL_TOL {
        0.0
    } else {
        x.signum()
    }
}

struct Totals {
    eta0: f64,
    zeta0: f64,
    kernel: i64,
}

fn totals(model: &LatticeSpectrumModel, backend: Backend) -> Result<Totals> {
    if model.added().iter().chain(model.removed()).any(|x| !x.is_finite()) {
        return Err(Error::UnregularizableModel("exceptions must be finite eigenvalues".into()));
    }
    let mut t = Totals { eta0: 0.0, zeta0: 0.0, kernel: 0 };
    for c in model.components() {
        let (e, z, k) = component_values(c, backend)?;
        t.eta0 += e;
        t.zeta0 += z;
        t.kernel += k as i64;
    }
    for (list, sign) in [(model.added(), 1.0), (model.removed(), -1.0)] {
        for &x in list {
            let s = sgn(x);
            t.eta0 += sign * s;
            if s == 0.0 {
                t.kernel += sign as i64;
            } else {
                t.zeta0 += sign;
            }
        }
    }
    if t.kernel < 0 {
        return Err(Error::InvalidArgument("removed more kernel than the model has".into()));
    }
    Ok(t)
}

/// η-invariant of a lattice-backed operator by the closed form.
pub fn eta_invariant(a: &ModelOperator) -> Result<EtaResult> {
    eta_invariant_with(a, Backend::ClosedForm)
}

pub fn eta_invariant_with(a: &ModelOperator, backend: Backend) -> Result<EtaResult> {
    let model = a.lattice()?;
    let t = totals(model, backend)?;
    let method = match backend {
        Backend::Hurwitz => EtaMethod::Hurwitz,
        Backend::ClosedForm if model.has_exceptions() => EtaMethod::Perturbation,
        Backend::ClosedForm => EtaMethod::ClosedForm,
    };
    let err_bound = match backend {
        Backend::Hurwitz => 2.0 * HURWITZ_ERR * model.components().len() as f64,
        Backend::ClosedForm => 0.0,
    };
    Ok(EtaResult {
        eta: 0.5 * (t.eta0 + t.kernel as f64),
        eta_at_zero: t.eta0,
        kernel_dim: t.kernel as usize,
        method,
        err_bound,
    })
}

/// `zeta(A, 0)` by Hurwitz continuation, with the kernel dimension.
pub fn zeta_check(a: &ModelOperator) -> Result<ZetaResult> {
    let t = totals(a.lattice()?, Backend::Hurwitz)?;
    Ok(ZetaResult { zeta_at_zero: t.zeta0, kernel_dim: t.kernel as usize, heat_invariant: t.zeta0 + t.kernel as f64 })
}

/// η of `-|A|^l`, computed from its own spectrum and checked against
/// `k - (zeta(|A|^l, 0) + k) / 2`.
pub fn eta_of_negated_power(a: &ModelOperator, l: u32) -> Result<EtaResult> {
    use crate::opmodel::{positive_power_operator, power_operator};
    let raised = power_operator(a, l)?;
    let direct = eta_invariant(&positive_power_operator(&raised, true)?)?;
    let z = zeta_check(&positive_power_operator(&raised, false)?)?;
    let k = z.kernel_dim as f64;
    let predicted = k - 0.5 * z.heat_invariant;
    if (direct.eta - predicted).abs() > 1e-9 {
        return Err(Error::IdentityViolated(format!(
            "eta(-D^{l}) = {} but k - zeta(D^{l}) = {predicted}",
            direct.eta
        )));
    }
    Ok(direct)
}

/// `eta(lift of A0) - n eta(A0)`, not reduced.
pub fn relative_eta(a0: &ModelOperator, cover: &CoverConfig) -> Result<f64> {
    let model = a0.lattice()?;
    if model.components().iter().any(|c| c.power != 1) {
        return Err(Error::UnsupportedBacking("relative eta needs a first-order lattice".into()));
    }
    let lifted = ModelOperator::from_lattice(lift_model(model, cover)?);
    Ok(eta_invariant(&lifted)?.eta - cover.sheets() as f64 * eta_invariant(a0)?.eta)
}

/// A first-order lattice family whose offsets move linearly:
/// component `k` is `scale_k (Z + start_k + tau (end_k - start_k))`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticePath {
    scales: Vec<f64>,
    start: Vec<f64>,
    end: Vec<f64>,
}

impl LatticePath {
    pub fn new(scales: Vec<f64>, start: Vec<f64>, end: Vec<f64>) -> Result<Self> {
        if scales.len() != start.len() || scales.len() != end.len() {
            return Err(Error::InvalidArgument("path components need a scale, start and end offset each".into()));
        }
        if scales.iter().chain(&start).chain(&end).any(|x| !x.is_finite()) || scales.iter().any(|&c| c <= 0.0) {
            return Err(Error::InvalidArgument("path data must be finite with positive scales".into()));
        }
        Ok(Self { scales, start, end })
    }

    pub fn single(start: f64, end: f64) -> Self {
        Self { scales: vec![1.0], start: vec![start], end: vec![end] }
    }

    fn offset(&self, k: usize, tau: f64) -> f64 {
        self.start[k] + tau * (self.end[k] - self.start[k])
    }

    pub fn at(&self, tau: f64) -> Result<ModelOperator> {
        let components = (0..self.scales.len())
            .map(|k| LatticeComponent::new(self.scales[k], self.offset(k, tau), 1, SignRule::Signed))
            .collect::<Result<Vec<_>>>()?;
        Ok(ModelOperator::from_lattice(LatticeSpectrumModel::new(components, vec![], vec![])?))
    }

    /// Zero crossings between the ends: the eigenvalue `c (n + t)` passes zero
    /// when `t` passes an integer. The kernel counts as positive, so a crossing
    /// sits in `(min, max]` of the offset range.
    pub fn spectral_flow(&self) -> i64 {
        (0..self.scales.len())
            .map(|k| {
                let (s0, s1) = (self.start[k], self.end[k]);
                let passes = (s0.max(s1).floor() - s0.min(s1).floor()) as i64;
                if s1 >= s0 {
                    passes
                } else {
                    -passes
                }
            })
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaJump {
    /// Midpoint of the sampling interval containing the jump.
    pub tau: f64,
    pub size: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EtaDecomposition {
    pub taus: Vec<f64>,
    pub eta: Vec<f64>,
    pub jumps: Vec<EtaJump>,
    pub sf: i64,
    /// Accumulated smooth change of η.
    pub continuous_change: f64,
    /// Largest per-step change of η not explained by integer jumps and the smooth rate.
    pub fractional_residual: f64,
}

/// Samples η along the path and splits its change into integer jumps and a
/// smooth part.
pub fn eta_decomposition(path: &LatticePath, samples: usize) -> Result<EtaDecomposition> {
    let samples = samples.max(1);
    let taus: Vec<f64> = (0..=samples).map(|i| i as f64 / samples as f64).collect();
    let eta_at = |tau: f64| -> Result<f64> { Ok(eta_invariant(&path.at(tau)?)?.eta) };
    let eta: Vec<f64> = taus.iter().map(|&t| eta_at(t)).collect::<Result<_>>()?;
    let h = 1e-7;
    let mut jumps = Vec::new();
    let mut continuous_change = 0.0;
    let mut fractional_residual: f64 = 0.0;
    for i in 0..samples {
        let dt = taus[i + 1] - taus[i];
        // smooth rate from a tiny step, integer jumps rounded away
        let probe = eta_at(taus[i] + h)? - eta[i];
        let omega = (probe - probe.round()) / h;
        let delta = eta[i + 1] - eta[i];
        let size = (delta - omega * dt).round() as i64;
        if size != 0 {
            jumps.push(EtaJump { tau: 0.5 * (taus[i] + taus[i + 1]), size });
        }
        let smooth = delta - size as f64;
        fractional_residual = fractional_residual.max((smooth - omega * dt).abs());
        continuous_change += smooth;
    }
    let sf = path.spectral_flow();
    let total = eta[samples] - eta[0];
    let jump_sum: i64 = jumps.iter().map(|j| j.size).sum();
    if (total - sf as f64 - continuous_change).abs() > 1e-6 || jump_sum != sf {
        return Err(Error::IdentityViolated(format!(
            "eta change {total} does not split as sf {sf} plus smooth part {continuous_change} (jumps sum to {jump_sum})"
        )));
    }
    Ok(EtaDecomposition { taus, eta, jumps, sf, continuous_change, fractional_residual })
}

/// `numerator / 2^log2_denominator` in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DyadicValue {
    pub numerator: i64,
    pub log2_denominator: u32,
}

impl DyadicValue {
    pub fn value(&self) -> f64 {
        self.numerator as f64 / (1u64 << self.log2_denominator) as f64
    }

    /// Closest `k / 2^m` with `m <= 20` within `1e-9`.
    pub fn from_f64(x: f64) -> Result<Self> {
        for m in 0..=20u32 {
            let den = (1u64 << m) as f64;
            let k = (x * den).round();
            if (x - k / den).abs() <= 1e-9 {
                return Ok(Self { numerator: k as i64, log2_denominator: m });
            }
        }
        Err(Error::NotDyadic(x))
    }
}

impl std::fmt::Display for DyadicValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.log2_denominator == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/{}", self.numerator, 1u64 << self.log2_denominator)
        }
    }
}

/// `d(Pi_+(A)) = eta(A)` for operators satisfying the parity condition.
pub fn dimension_functional(a: &ModelOperator) -> Result<DyadicValue> {
    let meta = a.meta();
    if !meta.satisfies_parity() {
        return Err(Error::ParityViolated { order: meta.order, dimension: meta.base_dimension });
    }
    DyadicValue::from_f64(eta_invariant(a)?.eta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opmodel::{lattice_operator, positive_power_operator, pushforward_trivial};
    use std::f64::consts::PI;

    fn riemann_direct(s: f64) -> f64 {
        // partial sum plus integral tail with midpoint correction
        let n = 200_000;
        let partial: f64 = (1..=n).map(|k| (k as f64).powf(-s)).sum();
        partial + (n as f64 + 0.5).powf(1.0 - s) / (s - 1.0)
    }

    #[test]
    fn hurwitz_known_values() {
        for &a in &[0.1, 0.25, 0.5, 0.9, 1.0] {
            assert!((hurwitz_zeta(0.0, a).unwrap() - (0.5 - a)).abs() <= 1e-10);
        }
        assert!((hurwitz_zeta(2.0, 1.0).unwrap() - PI * PI / 6.0).abs() <= 1e-10);
        assert!((hurwitz_zeta(2.0, 1.0).unwrap() - riemann_direct(2.0)).abs() <= 1e-9);
        assert!((hurwitz_zeta(3.0, 1.0).unwrap() - riemann_direct(3.0)).abs() <= 1e-9);
        // zeta_R(-1) = -1/12, zeta_H(-1, a) = -B_2(a)/2
        assert!((hurwitz_zeta(-1.0, 1.0).unwrap() + 1.0 / 12.0).abs() <= 1e-10);
        let a: f64 = 0.3;
        assert!((hurwitz_zeta(-1.0, a).unwrap() + 0.5 * (a * a - a + 1.0 / 6.0)).abs() <= 1e-10);
        // zeta_H(s, 1/2) = (2^s - 1) zeta_R(s)
        let z4 = hurwitz_zeta(4.0, 1.0).unwrap();
        assert!((z4 - PI.powi(4) / 90.0).abs() <= 1e-12);
        assert!((hurwitz_zeta(4.0, 0.5).unwrap() - 15.0 * z4).abs() <= 1e-10);
    }

    #[test]
    fn hurwitz_continuation_is_smooth_at_zero() {
        // central difference of the continuation against zeta'_H(0, a) = ln Gamma(a) - ln sqrt(2 pi);
        // at a = 1/2 this is -ln(2)/2
        let h = 1e-4;
        let d = (hurwitz_zeta(h, 0.5).unwrap() - hurwitz_zeta(-h, 0.5).unwrap()) / (2.0 * h);
        assert!((d + 0.5 * 2f64.ln()).abs() < 1e-7, "{d}");
    }

    #[test]
    fn hurwitz_errors() {
        assert_eq!(hurwitz_zeta(1.0, 0.5).unwrap_err(), Error::PoleAtOne);
        assert_eq!(hurwitz_zeta(0.5, 0.0).unwrap_err().name(), "InvalidArgument");
    }

    #[test]
    fn eta_of_shifted_lattices() {
        for k in 1..10 {
            let t = k as f64 / 10.0;
            let a = lattice_operator(1.0, t, 1).unwrap();
            let closed = eta_invariant(&a).unwrap();
            assert_eq!(closed.eta, 0.5 - t);
            assert_eq!(closed.eta, 0.5 * (closed.eta_at_zero + closed.kernel_dim as f64));
            let hz = eta_invariant_with(&a, Backend::Hurwitz).unwrap();
            assert!((hz.eta - (0.5 - t)).abs() <= 1e-9);
            assert_eq!(hz.method, EtaMethod::Hurwitz);
        }
        assert_eq!(eta_invariant(&lattice_operator(3.0, 0.5, 1).unwrap()).unwrap().eta, 0.0);
        let z = eta_invariant(&lattice_operator(1.0, 0.0, 1).unwrap()).unwrap();
        assert_eq!((z.eta, z.eta_at_zero, z.kernel_dim), (0.5, 0.0, 1));
    }

    #[test]
    fn eta_refuses_matrices() {
        use crate::linalg::DenseHermitian;
        use crate::opmodel::OperatorMeta;
        let m = DenseHermitian::diagonal(&[1.0, -2.0]).unwrap();
        let a = ModelOperator::from_matrix(m, OperatorMeta::default());
        assert_eq!(eta_invariant(&a).unwrap_err(), Error::MatrixBackingUnsupported);
    }

    #[test]
    fn zeta_examples() {
        let lap = lattice_operator(1.0, 0.0, 2).unwrap();
        let z = zeta_check(&lap).unwrap();
        assert!((z.zeta_at_zero + 1.0).abs() <= 1e-10);
        assert!(z.heat_invariant.abs() <= 1e-10);
        let half = zeta_check(&lattice_operator(1.0, 0.5, 1).unwrap()).unwrap();
        assert!(half.zeta_at_zero.abs() <= 1e-10 && half.heat_invariant.abs() <= 1e-10);
        let scaled = zeta_check(&lattice_operator(2.0, 0.0, 2).unwrap()).unwrap();
        assert_eq!(scaled.zeta_at_zero, z.zeta_at_zero);
    }

    #[test]
    fn negated_power_identity() {
        let lap = lattice_operator(1.0, 0.0, 2).unwrap();
        for l in 1..4 {
            let r = eta_of_negated_power(&lap, l).unwrap();
            assert!((r.eta - 1.0).abs() <= 1e-9);
        }
        let no_kernel = lap.with_exceptions(vec![0.0], vec![]).unwrap();
        assert!((eta_of_negated_power(&no_kernel, 1).unwrap().eta - 0.5).abs() <= 1e-9);
        // positive power: eta = (zeta(A,0) + k)/2
        let pos = positive_power_operator(&lap, false).unwrap();
        let z = zeta_check(&pos).unwrap();
        assert!((eta_invariant(&pos).unwrap().eta - 0.5 * z.heat_invariant).abs() <= 1e-9);
    }

    #[test]
    fn perturbation_rule() {
        let a = lattice_operator(1.0, 0.3, 1).unwrap();
        let base = eta_invariant(&a).unwrap().eta;
        // move -0.7 to +2.5
        let moved = a.with_exceptions(vec![-0.7], vec![2.5]).unwrap();
        let r = eta_invariant(&moved).unwrap();
        assert!((r.eta - base - 1.0).abs() <= 1e-12);
        assert_eq!(r.method, EtaMethod::Perturbation);
        let with_zero = a.with_exceptions(vec![], vec![0.0]).unwrap();
        assert!((eta_invariant(&with_zero).unwrap().eta - base - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn relative_eta_on_covers() {
        for n in [2u32, 3, 5] {
            let cover = CoverConfig::connected(n).unwrap();
            let t = 0.5 / n as f64;
            let r = relative_eta(&lattice_operator(1.0, t, 1).unwrap(), &cover).unwrap();
            assert!((r - (1.0 - n as f64) / 2.0).abs() <= 1e-9);
            let trivial = CoverConfig::trivial(n).unwrap();
            assert!(relative_eta(&lattice_operator(1.0, t, 1).unwrap(), &trivial).unwrap().abs() <= 1e-12);
        }
        let cover = CoverConfig::connected(2).unwrap();
        let below = relative_eta(&lattice_operator(1.0, 0.49, 1).unwrap(), &cover).unwrap();
        let above = relative_eta(&lattice_operator(1.0, 0.51, 1).unwrap(), &cover).unwrap();
        assert!((above - below - 1.0).abs() <= 1e-9);
        // pushforward agrees with n copies
        let a0 = lattice_operator(1.0, 0.2, 1).unwrap();
        let push = eta_invariant(&pushforward_trivial(&a0, 3).unwrap()).unwrap().eta;
        assert!((push - 3.0 * eta_invariant(&a0).unwrap().eta).abs() <= 1e-12);
    }

    #[test]
    fn decomposition_without_crossing() {
        let d = eta_decomposition(&LatticePath::single(0.2, 0.8), 120).unwrap();
        assert!(d.jumps.is_empty());
        assert_eq!(d.sf, 0);
        assert!((d.eta[120] - d.eta[0] + 0.6).abs() <= 1e-12);
        assert!(d.fractional_residual <= 1e-6);
    }

    #[test]
    fn decomposition_with_crossing() {
        let d = eta_decomposition(&LatticePath::single(0.5, 1.5), 100).unwrap();
        assert_eq!(d.sf, 1);
        assert_eq!(d.jumps.len(), 1);
        assert_eq!(d.jumps[0].size, 1);
        assert!((d.jumps[0].tau - 0.5).abs() <= 0.01);
        assert!(d.fractional_residual <= 1e-6);
        assert!((d.continuous_change + 1.0).abs() <= 1e-9);
        let back = eta_decomposition(&LatticePath::single(1.5, 0.5), 100).unwrap();
        assert_eq!(back.sf, -1);
        assert_eq!(back.jumps[0].size, -1);
    }

    #[test]
    fn decomposition_of_constant_path() {
        let d = eta_decomposition(&LatticePath::single(0.3, 0.3), 10).unwrap();
        assert!(d.jumps.is_empty() && d.sf == 0 && d.continuous_change == 0.0);
    }

    #[test]
    fn dyadic_dimension() {
        let lap = lattice_operator(1.0, 0.0, 2).unwrap();
        let neg = positive_power_operator(&lap, true).unwrap();
        assert_eq!(dimension_functional(&neg).unwrap(), DyadicValue { numerator: 1, log2_denominator: 0 });
        let pos = positive_power_operator(&lap, false).unwrap();
        assert_eq!(dimension_functional(&pos).unwrap().numerator, 0);
        // flip two negative eigenvalues to positive
        let flipped = neg.with_exceptions(vec![-1.0, -4.0], vec![1.0, 4.0]).unwrap();
        assert_eq!(dimension_functional(&flipped).unwrap().numerator, 3);
        let first_order = lattice_operator(1.0, 0.25, 1).unwrap();
        assert_eq!(dimension_functional(&first_order).unwrap_err().name(), "ParityViolated");
        assert_eq!(DyadicValue::from_f64(0.375).unwrap(), DyadicValue { numerator: 3, log2_denominator: 3 });
        assert_eq!(DyadicValue::from_f64(1.0 / 3.0).unwrap_err().name(), "NotDyadic");
        assert_eq!(DyadicValue::from_f64(-0.75).unwrap().to_string(), "-3/4");
    }
}
