//! Index of spectral boundary value problems on a finite cylinder, by modes.
//!
//! For `D = d/dt + A(t)` with a commuting tangential family, every eigenmode of
//! `A` solves `u' + mu(t) u = 0`, a one-dimensional solution space. The near
//! boundary condition kills it when `mu(0)` lies in the range of `Pi_+(A(0))`,
//! the far one when `-mu(T)` lies in the range of `Pi_+(-A(T))`. A mode with `k`
//! active constraints contributes `1 - k` to the index.

use crate::error::{Error, Result};
use crate::etazeta::eta_invariant;
use crate::linalg::DEFAULT_KERNEL_TOL;
use crate::opmodel::{family_from_curves, lift_model, CoverConfig, LatticeSpectrumModel, ModelOperator};
use crate::specflow::{crossing_count_oracle, spectral_flow, SfConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ApsConventions {
    /// `Pi_+` at `t = 0` projects onto `lambda >= 0` rather than `lambda > 0`.
    pub near_includes_zero: bool,
    /// The far end sees the orientation-reversed operator `-A(T)`.
    pub far_flip: bool,
    pub far_includes_zero: bool,
}

impl Default for ApsConventions {
    fn default() -> Self {
        Self { near_includes_zero: true, far_flip: true, far_includes_zero: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mode {
    pub label: i64,
    /// `mu(t)` on the problem's `t` grid.
    pub values: Vec<f64>,
}

impl Mode {
    fn near(&self) -> f64 {
        self.values[0]
    }

    fn far(&self) -> f64 {
        *self.values.last().unwrap()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeProblem {
    t_grid: Vec<f64>,
    modes: Vec<Mode>,
    conventions: ApsConventions,
    kernel_tol: f64,
}

impl ModeProblem {
    pub fn new(t_grid: Vec<f64>, modes: Vec<Mode>, conventions: ApsConventions, kernel_tol: f64) -> Result<Self> {
        if t_grid.len() < 2 || t_grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidArgument("t grid must be strictly increasing with two points or more".into()));
        }
        if let Some(m) = modes.iter().find(|m| m.values.len() != t_grid.len()) {
            return Err(Error::InvalidArgument(format!("mode {} does not match the t grid", m.label)));
        }
        if modes.iter().flat_map(|m| &m.values).any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("mode coefficients must be finite".into()));
        }
        if !(kernel_tol >= 0.0) {
            return Err(Error::InvalidArgument("kernel tolerance must be nonnegative".into()));
        }
        Ok(Self { t_grid, modes, conventions, kernel_tol })
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn conventions(&self) -> ApsConventions {
        self.conventions
    }

    pub fn t_grid(&self) -> &[f64] {
        &self.t_grid
    }

    fn nonnegative(&self, x: f64, includes_zero: bool) -> bool {
        if includes_zero {
            x >= -self.kernel_tol
        } else {
            x > self.kernel_tol
        }
    }

    /// Eigenvalue of the far-end boundary operator for a mode.
    fn far_value(&self, m: &Mode) -> f64 {
        if self.conventions.far_flip {
            -m.far()
        } else {
            m.far()
        }
    }

    /// Number of active boundary constraints on a mode.
    pub fn constraints(&self, m: &Mode) -> u8 {
        let near = self.nonnegative(m.near(), self.conventions.near_includes_zero);
        let far = self.nonnegative(self.far_value(m), self.conventions.far_includes_zero);
        near as u8 + far as u8
    }
}

/// `sum_n (1 - k_n)` over the mode window. The modes with extreme `mu(0)` must
/// carry exactly one constraint, otherwise the window does not reach the tail.
pub fn aps_index(p: &ModeProblem) -> Result<i64> {
    if p.modes.is_empty() {
        return Ok(0);
    }
    let lowest = p.modes.iter().min_by(|a, b| a.near().total_cmp(&b.near())).unwrap();
    let highest = p.modes.iter().max_by(|a, b| a.near().total_cmp(&b.near())).unwrap();
    for m in [lowest, highest] {
        let k = p.constraints(m);
        if k != 1 {
            return Err(Error::TailViolation { label: m.label, constraints: k });
        }
    }
    Ok(p.modes.iter().map(|m| 1 - p.constraints(m) as i64).sum())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SfTheoremReport {
    pub index_start: i64,
    pub index_end: i64,
    /// Partition spectral flow of the boundary family.
    pub sf: i64,
    /// Signed crossing count of the same family.
    pub crossings: i64,
    pub holds: bool,
}

/// Checks `ind(D_a) - ind(D_b) = sf` for the path `tau in [a, b]`.
///
/// The boundary family is `A_near(tau) (+) -A_far(tau)`, assembled from the
/// mode values at both ends and interpolated linearly between `steps + 1`
/// samples. A kernel counted as positive (negative) by the conventions is moved
/// off zero by a small positive (negative) shift, below every nonzero endpoint
/// eigenvalue, so that both ends become invertible without changing `Pi_+`.
pub fn verify_sf_theorem<F>(problem_at: F, a: f64, b: f64, steps: usize, cfg: &SfConfig) -> Result<SfTheoremReport>
where
    F: Fn(f64) -> Result<ModeProblem>,
{
    let steps = steps.max(1);
    let problems: Vec<ModeProblem> =
        (0..=steps).map(|i| problem_at(a + (b - a) * i as f64 / steps as f64)).collect::<Result<_>>()?;
    let first = &problems[0];
    let last = &problems[steps];
    if problems.iter().any(|p| p.modes.len() != first.modes.len() || p.conventions != first.conventions) {
        return Err(Error::InvalidArgument("problems along the path must share modes and conventions".into()));
    }
    let conv = first.conventions;
    let index_start = aps_index(first)?;
    let index_end = aps_index(last)?;

    let endpoint_values = [first, last]
        .into_iter()
        .flat_map(|p| p.modes.iter().flat_map(move |m| [m.near(), p.far_value(m)]));
    let smallest = endpoint_values
        .map(f64::abs)
        .filter(|&v| v > first.kernel_tol)
        .fold(f64::INFINITY, f64::min);
    let eps = (0.25 * smallest).min(1e-3);
    if eps < 2.0 * cfg.gap_tol {
        return Err(Error::EndpointNotInvertible { tau: a, tol: cfg.gap_tol });
    }
    let shift = |includes_zero: bool| if includes_zero { eps } else { -eps };
    let near_shift = shift(conv.near_includes_zero);
    let far_shift = shift(conv.far_includes_zero);

    let mut curves = Vec::with_capacity(2 * first.modes.len());
    for j in 0..first.modes.len() {
        curves.push(problems.iter().map(|p| p.modes[j].near() + near_shift).collect());
        curves.push(problems.iter().map(|p| p.far_value(&p.modes[j]) + far_shift).collect());
    }
    let grid = (0..=steps).map(|i| i as f64 / steps as f64).collect();
    let family = family_from_curves(grid, curves, None)?;
    let sf = spectral_flow(&family, cfg)?.value;
    let crossings = crossing_count_oracle(&family)?;
    Ok(SfTheoremReport { index_start, index_end, sf, crossings, holds: index_start - index_end == sf && sf == crossings })
}

/// Profile problem on `[0, T] x S^1`: tangential family `A_0 + tau chi(t)` for
/// a first-order lattice model `A_0` and a piecewise-linear profile `chi`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileProblem {
    pub base: LatticeSpectrumModel,
    /// `(t, chi(t))` nodes, `t` increasing from 0 to `T`.
    pub profile: Vec<(f64, f64)>,
    pub tau: f64,
    pub conventions: ApsConventions,
    /// Modes with `|eigenvalue of A_0| <= window` are kept.
    pub window: f64,
    pub kernel_tol: f64,
}

impl ProfileProblem {
    pub fn new(base: LatticeSpectrumModel, profile: Vec<(f64, f64)>, tau: f64) -> Result<Self> {
        if profile.len() < 2 || profile[0].0 != 0.0 || profile.windows(2).any(|w| !(w[0].0 < w[1].0)) {
            return Err(Error::InvalidArgument("profile nodes must start at t = 0 and increase".into()));
        }
        if profile.iter().any(|&(t, v)| !t.is_finite() || !v.is_finite()) || !tau.is_finite() {
            return Err(Error::InvalidArgument("profile and tau must be finite".into()));
        }
        if base.has_exceptions() || base.components().iter().any(|c| c.power != 1) {
            return Err(Error::UnsupportedBacking("profile problems need a first-order lattice without exceptions".into()));
        }
        Ok(Self {
            base,
            profile,
            tau,
            conventions: ApsConventions::default(),
            window: 64.0,
            kernel_tol: DEFAULT_KERNEL_TOL,
        })
    }

    /// `mu_n(t) = -n + tau chi(t)` with `chi(t) = 1 - t` on `[0, 1]`.
    pub fn cylinder(tau: f64) -> Self {
        let base = LatticeSpectrumModel::single(1.0, 0.0, 1).expect("integer lattice");
        Self::new(base, vec![(0.0, 1.0), (1.0, 0.0)], tau).expect("valid profile")
    }

    pub fn with_tau(&self, tau: f64) -> Self {
        Self { tau, ..self.clone() }
    }

    pub fn with_window(&self, window: f64) -> Self {
        Self { window, ..self.clone() }
    }

    pub fn with_conventions(&self, conventions: ApsConventions) -> Self {
        Self { conventions, ..self.clone() }
    }

    pub fn with_base(&self, base: LatticeSpectrumModel) -> Self {
        Self { base, ..self.clone() }
    }

    /// The same profile and coupling over the cover, with the lifted tangential operator.
    pub fn lift(&self, cover: &CoverConfig) -> Result<Self> {
        Ok(self.with_base(lift_model(&self.base, cover)?))
    }

    fn chi_near(&self) -> f64 {
        self.profile[0].1
    }

    fn chi_far(&self) -> f64 {
        self.profile.last().unwrap().1
    }

    pub fn mode_problem(&self) -> Result<ModeProblem> {
        let t_grid: Vec<f64> = self.profile.iter().map(|p| p.0).collect();
        let mut modes = Vec::new();
        for c in self.base.components() {
            for mu in c.lattice_points(self.window) {
                let label = (mu / c.scale - c.offset).round() as i64;
                let values = self.profile.iter().map(|&(_, chi)| c.map(mu) + self.tau * chi).collect();
                modes.push(Mode { label, values });
            }
        }
        ModeProblem::new(t_grid, modes, self.conventions, self.kernel_tol)
    }

    pub fn index(&self) -> Result<i64> {
        aps_index(&self.mode_problem()?)
    }

    /// Tangential operators at both ends as lattice models.
    pub fn boundary_models(&self) -> Result<(LatticeSpectrumModel, LatticeSpectrumModel)> {
        Ok((self.base.shifted(self.tau * self.chi_near())?, self.base.shifted(self.tau * self.chi_far())?))
    }

    /// η of the boundary operator `A_near (+) -A_far`, with each kernel counted
    /// on the side its boundary condition puts it.
    pub fn boundary_eta(&self) -> Result<f64> {
        let (near, far) = self.boundary_models()?;
        let eta = |m: LatticeSpectrumModel, includes_zero: bool| -> Result<f64> {
            let r = eta_invariant(&ModelOperator::from_lattice(m))?;
            Ok(if includes_zero { r.eta } else { r.eta - r.kernel_dim as f64 })
        };
        let far = if self.conventions.far_flip { far.negated() } else { far };
        Ok(eta(near, self.conventions.near_includes_zero)? + eta(far, self.conventions.far_includes_zero)?)
    }
}

fn check_lift(p: &ProfileProblem, cover: &CoverConfig, a0: &LatticeSpectrumModel) -> Result<()> {
    let expected = lift_model(a0, cover).map_err(|e| Error::NotCoverCompatible(e.to_string()))?;
    if !p.base.same_structure(&expected, 1e-12) {
        return Err(Error::NotCoverCompatible("tangential operator is not the lift of the base operator".into()));
    }
    Ok(())
}

/// Index reduced mod `n` for a problem whose tangential operator is the lift of `a0`.
pub fn modn_index(p: &ProfileProblem, cover: &CoverConfig, a0: &LatticeSpectrumModel) -> Result<u32> {
    check_lift(p, cover, a0)?;
    Ok(p.index()?.rem_euclid(cover.sheets() as i64) as u32)
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvResult {
    pub index: i64,
    pub modn: u32,
    pub eta_total: f64,
    pub eta_base: f64,
    /// Representative in `[0, n)`.
    pub inv: f64,
}

/// `x mod n` in `[0, n)`, snapping values within `1e-9` of `0` or `n` to 0.
pub fn reduce_mod(x: f64, n: u32) -> f64 {
    let n = n as f64;
    let r = x.rem_euclid(n);
    if r <= 1e-9 || n - r <= 1e-9 {
        0.0
    } else {
        r
    }
}

/// `inv = (index mod n) + eta(A) - n eta(A_0)` in `R / nZ`, with `A` and `A_0`
/// the boundary operators of `p` and of the same problem over the base.
pub fn inv_invariant(p: &ProfileProblem, cover: &CoverConfig, a0: &LatticeSpectrumModel) -> Result<InvResult> {
    check_lift(p, cover, a0)?;
    let n = cover.sheets();
    let index = p.index()?;
    let modn = index.rem_euclid(n as i64) as u32;
    let eta_total = p.boundary_eta()?;
    let eta_base = p.with_base(a0.clone()).boundary_eta()?;
    let inv = reduce_mod(modn as f64 + eta_total - n as f64 * eta_base, n);
    Ok(InvResult { index, modn, eta_total, eta_base, inv })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lattice(c: f64, t: f64) -> LatticeSpectrumModel {
        LatticeSpectrumModel::single(c, t, 1).unwrap()
    }

    /// Mode-count oracle for the cylinder: near active iff `tau - n >= 0`, far
    /// active iff `n >= 0`.
    fn cylinder_oracle(tau: f64, n_max: i64) -> i64 {
        (-n_max..=n_max)
            .map(|n| {
                let k = (tau - n as f64 >= 0.0) as i64 + (n >= 0) as i64;
                1 - k
            })
            .sum()
    }

    #[test]
    fn cylinder_values() {
        assert_eq!(ProfileProblem::cylinder(0.0).index().unwrap(), -1);
        for &tau in &[0.1, 0.5, 0.9] {
            assert_eq!(ProfileProblem::cylinder(tau).index().unwrap(), -1);
            assert_eq!(ProfileProblem::cylinder(-tau).index().unwrap(), 0);
        }
        for k in -30..30 {
            let tau = k as f64 * 0.13;
            assert_eq!(ProfileProblem::cylinder(tau).index().unwrap(), cylinder_oracle(tau, 64));
        }
    }

    #[test]
    fn constant_invertible_modes_have_index_zero() {
        let p = ProfileProblem::new(lattice(1.0, 0.5), vec![(0.0, 0.0), (1.0, 0.0)], 0.0).unwrap();
        assert_eq!(p.index().unwrap(), 0);
    }

    #[test]
    fn window_independence() {
        let p = ProfileProblem::new(lattice(0.7, 0.2), vec![(0.0, 1.3), (0.4, -2.0), (2.0, 0.4)], 1.7).unwrap();
        let i = p.index().unwrap();
        for w in [10.0, 20.0, 74.0] {
            assert_eq!(p.with_window(w).index().unwrap(), i);
        }
    }

    #[test]
    fn tail_violation() {
        let p = ProfileProblem::cylinder(0.3);
        let spec_defaults = ApsConventions { near_includes_zero: true, far_flip: false, far_includes_zero: false };
        assert_eq!(p.with_conventions(spec_defaults).index().unwrap_err().name(), "TailViolation");
        // the window must reach past the coupling
        assert_eq!(p.with_tau(5.0).with_window(3.0).index().unwrap_err().name(), "TailViolation");
    }

    #[test]
    fn sf_theorem_on_the_cylinder() {
        let cfg = SfConfig::default();
        let at = |tau: f64| ProfileProblem::cylinder(tau).with_window(20.0).mode_problem();
        let r = verify_sf_theorem(at, 0.25, 0.75, 4, &cfg).unwrap();
        assert!(r.holds && r.sf == 0);
        let r = verify_sf_theorem(at, -0.5, 0.5, 4, &cfg).unwrap();
        assert!(r.holds);
        assert_eq!((r.index_start, r.index_end, r.sf), (0, -1, 1));
        let r = verify_sf_theorem(at, 1.5, -1.2, 7, &cfg).unwrap();
        assert!(r.holds);
        assert_eq!(r.sf, -3);
    }

    #[test]
    fn loop_consistency() {
        // tau -> tau + 1 is a loop of boundary operators with loop sf 1
        for &a in &[-0.4, 0.3, 2.2] {
            let i0 = ProfileProblem::cylinder(a).index().unwrap();
            let i1 = ProfileProblem::cylinder(a + 1.0).index().unwrap();
            assert_eq!(i0 - i1, 1);
        }
    }

    #[test]
    fn modn_examples() {
        let one = CoverConfig::connected(1).unwrap();
        let base = ProfileProblem::cylinder(-2.5);
        assert_eq!(base.index().unwrap(), 2);
        // Z_1 is trivial
        assert_eq!(modn_index(&base, &one, &base.base).unwrap(), 0);
        let three = CoverConfig::trivial(3).unwrap();
        let lifted = base.lift(&three).unwrap();
        assert_eq!(lifted.index().unwrap(), 6);
        assert_eq!(modn_index(&lifted, &three, &base.base).unwrap(), 0);
        assert_eq!(modn_index(&lifted.with_tau(-2.6), &three, &base.base).unwrap(), 0);
        let wrong = base.with_base(lattice(1.0, 0.3));
        assert_eq!(modn_index(&wrong, &three, &base.base).unwrap_err().name(), "NotCoverCompatible");
    }

    #[test]
    fn two_cover_sweep_keeps_inv() {
        let cover = CoverConfig::connected(2).unwrap();
        let a0 = |t: f64| lattice(1.0, t);
        let below = ProfileProblem::cylinder(0.3).with_base(a0(0.45)).lift(&cover).unwrap();
        let above = ProfileProblem::cylinder(0.3).with_base(a0(0.55)).lift(&cover).unwrap();
        let rb = inv_invariant(&below, &cover, &a0(0.45)).unwrap();
        let ra = inv_invariant(&above, &cover, &a0(0.55)).unwrap();
        assert_eq!((rb.index, ra.index), (-1, 0));
        assert_eq!((rb.modn + 1) % 2, ra.modn);
        let defect = |r: &InvResult| r.eta_total - 2.0 * r.eta_base;
        assert!((defect(&ra) - defect(&rb) + 1.0).abs() <= 1e-9);
        assert!(rb.inv.abs() <= 1e-9 && ra.inv.abs() <= 1e-9);
    }

    #[test]
    fn lifted_problem_index_is_not_a_multiple() {
        // index over the cover differs from n times the base index, inv still vanishes
        let cover = CoverConfig::connected(2).unwrap();
        let a0 = lattice(1.0, 0.25);
        let base = ProfileProblem::cylinder(0.3).with_base(a0.clone());
        let lifted = base.lift(&cover).unwrap();
        let r = inv_invariant(&lifted, &cover, &a0).unwrap();
        assert_eq!(base.index().unwrap(), 0);
        assert_eq!(r.index, -1);
        assert!((r.eta_total - 0.4).abs() <= 1e-12);
        assert!((r.eta_base + 0.3).abs() <= 1e-12);
        assert!(r.inv.abs() <= 1e-9);
    }

    #[test]
    fn trivial_cover_inv_is_modn() {
        let cover = CoverConfig::trivial(3).unwrap();
        let a0 = lattice(1.0, 0.4);
        let p = ProfileProblem::cylinder(-1.7).with_base(a0.clone()).lift(&cover).unwrap();
        let r = inv_invariant(&p, &cover, &a0).unwrap();
        assert_eq!(r.inv, r.modn as f64);
    }

    #[test]
    fn reduction_folds_near_n() {
        assert_eq!(reduce_mod(2.0 - 1e-12, 2), 0.0);
        assert_eq!(reduce_mod(-1e-12, 2), 0.0);
        assert!((reduce_mod(-0.5, 2) - 1.5).abs() < 1e-15);
        assert!((reduce_mod(7.25, 3) - 1.25).abs() < 1e-12);
    }
}
