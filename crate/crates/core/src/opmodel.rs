//! Model self-adjoint operators on the circle and parametrized families of them.
//!
//! The circle is normalized so that `-i d/dphi` has the integer lattice as its
//! spectrum. A circle of length `2 pi` with eigenvalues `tau + 2 pi n`
//! maps onto this normalization by dividing every eigenvalue by `2 pi`.

use crate::error::{Error, Result};
use crate::linalg::{eigvalsh, DenseHermitian, Spectrum, SpectrumSource};

/// Offsets closer than this to an integer snap onto the integer lattice.
pub const OFFSET_SNAP: f64 = 1e-12;

/// Tolerance used when comparing spectra as multisets.
pub const MULTISET_TOL: f64 = 1e-9;

/// Reduces `t` into `(0, 1]`, sending integers to `1`.
pub fn frac_star(t: f64) -> f64 {
    let r = t - t.floor();
    if !(OFFSET_SNAP..=1.0 - OFFSET_SNAP).contains(&r) {
        1.0
    } else {
        r
    }
}

/// How a lattice point `mu` is mapped to an eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignRule {
    /// `sgn(mu) |mu|^p`
    Signed,
    /// `|mu|^p`
    Abs,
    /// `-|mu|^p`
    NegAbs,
}

impl SignRule {
    fn negated(self) -> Self {
        match self {
            SignRule::Signed => SignRule::Signed,
            SignRule::Abs => SignRule::NegAbs,
            SignRule::NegAbs => SignRule::Abs,
        }
    }
}

/// One shifted integer lattice `scale * (Z + offset)` pushed through the power map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeComponent {
    pub scale: f64,
    pub offset: f64,
    pub power: u32,
    pub sign: SignRule,
}

impl LatticeComponent {
    pub fn new(scale: f64, offset: f64, power: u32, sign: SignRule) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidArgument(format!("lattice scale must be positive, got {scale}")));
        }
        if !offset.is_finite() {
            return Err(Error::InvalidArgument("lattice offset must be finite".into()));
        }
        if power == 0 {
            return Err(Error::InvalidArgument("lattice power must be at least 1".into()));
        }
        Ok(Self { scale, offset: frac_star(offset), power, sign })
    }

    /// Zero is a lattice point exactly when the offset is the integer representative.
    pub fn has_zero(&self) -> bool {
        self.offset == 1.0
    }

    pub fn map(&self, mu: f64) -> f64 {
        let m = mu.abs().powi(self.power as i32);
        match self.sign {
            SignRule::Signed => {
                if mu < 0.0 {
                    -m
                } else {
                    m
                }
            }
            SignRule::Abs => m,
            SignRule::NegAbs => -m,
        }
    }

    /// Lattice points `mu` with `|mu| <= window`, ascending.
    pub fn lattice_points(&self, window: f64) -> Vec<f64> {
        let lo = (-window / self.scale - self.offset).ceil() as i64;
        let hi = (window / self.scale - self.offset).floor() as i64;
        (lo..=hi)
            .map(|m| self.scale * (m as f64 + self.offset))
            .filter(|mu| mu.abs() <= window * (1.0 + 1e-15))
            .collect()
    }

    /// How many lattice points of this component map onto `value`.
    fn multiplicity_of(&self, value: f64) -> usize {
        let root = value.abs().powf(1.0 / self.power as f64);
        let candidates: Vec<f64> = match self.sign {
            SignRule::Signed => vec![if value < 0.0 { -root } else { root }],
            SignRule::Abs if value >= 0.0 => {
                if root == 0.0 {
                    vec![0.0]
                } else {
                    vec![root, -root]
                }
            }
            SignRule::NegAbs if value <= 0.0 => {
                if root == 0.0 {
                    vec![0.0]
                } else {
                    vec![root, -root]
                }
            }
            _ => vec![],
        };
        candidates
            .into_iter()
            .filter(|&mu| {
                let k = mu / self.scale - self.offset;
                (k - k.round()).abs() <= MULTISET_TOL * (1.0 + k.abs())
            })
            .count()
    }
}

/// Exact description of a spectrum as a union of mapped lattices plus finitely
/// many added and removed eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSpectrumModel {
    components: Vec<LatticeComponent>,
    removed: Vec<f64>,
    added: Vec<f64>,
}

impl LatticeSpectrumModel {
    pub fn new(components: Vec<LatticeComponent>, removed: Vec<f64>, added: Vec<f64>) -> Result<Self> {
        if removed.iter().chain(&added).any(|x| !x.is_finite()) {
            return Err(Error::UnregularizableModel("exceptional eigenvalues must be finite".into()));
        }
        let model = Self { components, removed, added };
        model.check_removed()?;
        Ok(model)
    }

    pub fn single(scale: f64, offset: f64, power: u32) -> Result<Self> {
        Self::new(vec![LatticeComponent::new(scale, offset, power, SignRule::Signed)?], vec![], vec![])
    }

    fn check_removed(&self) -> Result<()> {
        let mut sorted = self.removed.clone();
        sorted.sort_by(f64::total_cmp);
        let mut i = 0;
        while i < sorted.len() {
            let v = sorted[i];
            let mut j = i;
            while j < sorted.len() && (sorted[j] - v).abs() <= MULTISET_TOL * (1.0 + v.abs()) {
                j += 1;
            }
            let available: usize = self.components.iter().map(|c| c.multiplicity_of(v)).sum();
            if j - i > available {
                return Err(Error::InvalidArgument(format!(
                    "removed eigenvalue {v} occurs {} times but the lattice provides {available}",
                    j - i
                )));
            }
            i = j;
        }
        Ok(())
    }

    pub fn components(&self) -> &[LatticeComponent] {
        &self.components
    }

    pub fn removed(&self) -> &[f64] {
        &self.removed
    }

    pub fn added(&self) -> &[f64] {
        &self.added
    }

    pub fn has_exceptions(&self) -> bool {
        !self.removed.is_empty() || !self.added.is_empty()
    }

    fn max_power(&self) -> u32 {
        self.components.iter().map(|c| c.power).max().unwrap_or(1)
    }

    /// Eigenvalues coming from lattice points with `|mu| <= window`, plus the
    /// exceptions whose pre-image lies in the same window, sorted ascending.
    pub fn enumerate(&self, window: f64) -> Spectrum {
        let mut values: Vec<f64> = self
            .components
            .iter()
            .flat_map(|c| c.lattice_points(window).into_iter().map(move |mu| c.map(mu)))
            .collect();
        let p = self.max_power() as f64;
        let inside = |x: &f64| x.abs().powf(1.0 / p) <= window * (1.0 + 1e-15);
        values.extend(self.added.iter().copied().filter(inside));
        for r in self.removed.iter().filter(|x| inside(x)) {
            if let Some(pos) = values
                .iter()
                .position(|v| (v - r).abs() <= MULTISET_TOL * (1.0 + r.abs()))
            {
                values.swap_remove(pos);
            }
        }
        Spectrum::new(values, SpectrumSource::LatticeTruncation)
    }

    pub fn with_exceptions(&self, removed: Vec<f64>, added: Vec<f64>) -> Result<Self> {
        let mut r = self.removed.clone();
        r.extend(removed);
        let mut a = self.added.clone();
        a.extend(added);
        Self::new(self.components.clone(), r, a)
    }

    pub fn negated(&self) -> Self {
        Self {
            components: self
                .components
                .iter()
                .map(|c| LatticeComponent {
                    offset: frac_star(1.0 - c.offset),
                    sign: c.sign.negated(),
                    ..*c
                })
                .collect(),
            removed: self.removed.iter().map(|x| -x).collect(),
            added: self.added.iter().map(|x| -x).collect(),
        }
    }

    /// Spectrum multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::InvalidArgument("scale factor must be positive".into()));
        }
        Ok(Self {
            components: self
                .components
                .iter()
                .map(|c| LatticeComponent { scale: c.scale * factor.powf(1.0 / c.power as f64), ..*c })
                .collect(),
            removed: self.removed.iter().map(|x| x * factor).collect(),
            added: self.added.iter().map(|x| x * factor).collect(),
        })
    }

    /// Spectrum translated by `shift`; only first-order signed lattices translate
    /// into lattices again.
    pub fn shifted(&self, shift: f64) -> Result<Self> {
        self.require_first_order("shift")?;
        Ok(Self {
            components: self
                .components
                .iter()
                .map(|c| LatticeComponent { offset: frac_star(c.offset + shift / c.scale), ..*c })
                .collect(),
            removed: self.removed.iter().map(|x| x + shift).collect(),
            added: self.added.iter().map(|x| x + shift).collect(),
        })
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut components = self.components.clone();
        components.extend_from_slice(&other.components);
        let mut removed = self.removed.clone();
        removed.extend_from_slice(&other.removed);
        let mut added = self.added.clone();
        added.extend_from_slice(&other.added);
        Self { components, removed, added }
    }

    fn require_first_order(&self, what: &str) -> Result<()> {
        if self.components.iter().any(|c| c.power != 1 || c.sign != SignRule::Signed) {
            return Err(Error::UnsupportedBacking(format!(
                "{what} requires first-order signed lattice components"
            )));
        }
        Ok(())
    }

    /// True when both models have the same lattice components (as a multiset,
    /// offsets compared on the circle) and the same exceptions.
    pub fn same_structure(&self, other: &Self, tol: f64) -> bool {
        fn key(c: &LatticeComponent) -> (u32, u8, f64, f64) {
            let s = match c.sign {
                SignRule::Signed => 0,
                SignRule::Abs => 1,
                SignRule::NegAbs => 2,
            };
            (c.power, s, c.scale, c.offset)
        }
        if self.components.len() != other.components.len() {
            return false;
        }
        let mut used = vec![false; other.components.len()];
        for c in &self.components {
            let (p, s, sc, off) = key(c);
            let hit = other.components.iter().enumerate().position(|(i, d)| {
                let (q, t, sd, od) = key(d);
                let circ = (off - od).abs();
                !used[i]
                    && p == q
                    && s == t
                    && (sc - sd).abs() <= tol * sc.max(1.0)
                    && circ.min(1.0 - circ) <= tol
            });
            match hit {
                Some(i) => used[i] = true,
                None => return false,
            }
        }
        multiset_eq(&self.removed, &other.removed, tol) && multiset_eq(&self.added, &other.added, tol)
    }
}

pub(crate) fn multiset_eq(a: &[f64], b: &[f64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    x.iter().zip(&y).all(|(u, v)| (u - v).abs() <= tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParityClass {
    Even,
    Odd,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OperatorMeta {
    pub order: u32,
    pub base_dimension: u32,
    pub parity_class: ParityClass,
    pub rstar_invariant: bool,
}

impl OperatorMeta {
    /// `ord + dim` odd.
    pub fn satisfies_parity(&self) -> bool {
        (self.order + self.base_dimension) % 2 == 1
    }

    fn for_lattice(model: &LatticeSpectrumModel) -> Self {
        let order = model.components.first().map_or(1, |c| c.power);
        let uniform = model.components.iter().all(|c| c.power == order);
        // symbol sgn(xi)|xi|^p is odd in xi, |xi|^p is even
        let classes: Vec<ParityClass> = model
            .components
            .iter()
            .map(|c| match c.sign {
                SignRule::Signed => ParityClass::Odd,
                SignRule::Abs | SignRule::NegAbs => ParityClass::Even,
            })
            .collect();
        let parity_class = match classes.first() {
            Some(&first) if uniform && classes.iter().all(|&k| k == first) => first,
            _ => ParityClass::None,
        };
        let rstar_invariant = uniform
            && !model.components.is_empty()
            && model.components.iter().all(|c| match c.sign {
                SignRule::Signed => c.power % 2 == 1,
                SignRule::Abs | SignRule::NegAbs => c.power % 2 == 0,
            });
        Self { order, base_dimension: 1, parity_class, rstar_invariant }
    }
}

impl Default for OperatorMeta {
    fn default() -> Self {
        Self { order: 1, base_dimension: 1, parity_class: ParityClass::None, rstar_invariant: false }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Backing {
    Lattice(LatticeSpectrumModel),
    Matrix(DenseHermitian),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelOperator {
    backing: Backing,
    meta: OperatorMeta,
}

impl ModelOperator {
    pub fn from_lattice(model: LatticeSpectrumModel) -> Self {
        let meta = OperatorMeta::for_lattice(&model);
        Self { backing: Backing::Lattice(model), meta }
    }

    pub fn from_matrix(m: DenseHermitian, meta: OperatorMeta) -> Self {
        Self { backing: Backing::Matrix(m), meta }
    }

    pub fn backing(&self) -> &Backing {
        &self.backing
    }

    pub fn meta(&self) -> &OperatorMeta {
        &self.meta
    }

    pub fn lattice(&self) -> Result<&LatticeSpectrumModel> {
        match &self.backing {
            Backing::Lattice(l) => Ok(l),
            Backing::Matrix(_) => Err(Error::MatrixBackingUnsupported),
        }
    }

    /// Eigenvalues in the window (lattice) or all eigenvalues (matrix).
    pub fn spectrum(&self, window: f64) -> Spectrum {
        match &self.backing {
            Backing::Lattice(l) => l.enumerate(window),
            Backing::Matrix(m) => eigvalsh(m),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        match (&self.backing, &other.backing) {
            (Backing::Lattice(a), Backing::Lattice(b)) => Ok(Self::from_lattice(a.direct_sum(b))),
            (Backing::Matrix(a), Backing::Matrix(b)) => Ok(Self::from_matrix(a.direct_sum(b), self.meta)),
            _ => Err(Error::UnsupportedBacking("cannot sum lattice and matrix operators".into())),
        }
    }

    pub fn negated(&self) -> Self {
        match &self.backing {
            Backing::Lattice(l) => Self::from_lattice(l.negated()),
            Backing::Matrix(m) => Self::from_matrix(m.scaled(-1.0), self.meta),
        }
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        match &self.backing {
            Backing::Lattice(l) => Ok(Self::from_lattice(l.scaled(factor)?)),
            Backing::Matrix(m) => Ok(Self::from_matrix(m.scaled(factor), self.meta)),
        }
    }

    pub fn with_exceptions(&self, removed: Vec<f64>, added: Vec<f64>) -> Result<Self> {
        Ok(Self::from_lattice(self.lattice()?.with_exceptions(removed, added)?))
    }
}

/// `c * (Z + t)` pushed through `mu -> sgn(mu) |mu|^p`.
pub fn lattice_operator(scale: f64, offset: f64, power: u32) -> Result<ModelOperator> {
    Ok(ModelOperator::from_lattice(LatticeSpectrumModel::single(scale, offset, power)?))
}

/// `|A|^p`, or `-|A|^p` off the kernel when `negate` is set.
pub fn positive_power_operator(a: &ModelOperator, negate: bool) -> Result<ModelOperator> {
    let model = a.lattice()?;
    let sign = if negate { SignRule::NegAbs } else { SignRule::Abs };
    let components = model.components.iter().map(|c| LatticeComponent { sign, ..*c }).collect();
    let flip = |x: &f64| if negate { -x.abs() } else { x.abs() };
    let removed = model.removed.iter().map(flip).collect();
    let added = model.added.iter().map(flip).collect();
    Ok(ModelOperator::from_lattice(LatticeSpectrumModel::new(components, removed, added)?))
}

/// `A^l` in the sense of the spectral calculus `lambda -> sgn(lambda) |lambda|^l`
/// (or `|lambda|^l` for definite components).
pub fn power_operator(a: &ModelOperator, l: u32) -> Result<ModelOperator> {
    if l == 0 {
        return Err(Error::InvalidArgument("power must be at least 1".into()));
    }
    let model = a.lattice()?;
    let components = model
        .components
        .iter()
        .map(|c| LatticeComponent { power: c.power * l, ..*c })
        .collect();
    let raise = |x: &f64| x.signum() * x.abs().powi(l as i32);
    let removed = model.removed.iter().map(raise).collect();
    let added = model.added.iter().map(raise).collect();
    Ok(ModelOperator::from_lattice(LatticeSpectrumModel::new(components, removed, added)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoverConfig {
    sheets: u32,
    trivial: bool,
}

impl CoverConfig {
    pub fn new(sheets: u32, trivial: bool) -> Result<Self> {
        if sheets == 0 {
            return Err(Error::InvalidArgument("a covering needs at least one sheet".into()));
        }
        Ok(Self { sheets, trivial })
    }

    pub fn connected(sheets: u32) -> Result<Self> {
        Self::new(sheets, false)
    }

    pub fn trivial(sheets: u32) -> Result<Self> {
        Self::new(sheets, true)
    }

    pub fn sheets(&self) -> u32 {
        self.sheets
    }

    pub fn is_trivial(&self) -> bool {
        self.trivial || self.sheets == 1
    }
}

/// Lift of a base operator to the connected `n`-fold cover of the circle.
/// `c (Z + t)` becomes `(c / n) (Z + n t)`.
pub fn pullback_cover(a0: &ModelOperator, cover: &CoverConfig) -> Result<ModelOperator> {
    let model = a0.lattice().map_err(|_| Error::UnsupportedBacking("pullback of a matrix operator".into()))?;
    if model.components.len() != 1 || model.has_exceptions() {
        return Err(Error::UnsupportedBacking(
            "pullback requires a single lattice offset without exceptions".into(),
        ));
    }
    Ok(ModelOperator::from_lattice(lift_model(model, cover)?))
}

/// Componentwise lift of a first-order lattice model through `cover`: trivial
/// covers replicate the model, connected covers rescale every component.
pub fn lift_model(model: &LatticeSpectrumModel, cover: &CoverConfig) -> Result<LatticeSpectrumModel> {
    if model.has_exceptions() {
        return Err(Error::UnsupportedBacking("cannot lift finite exceptions".into()));
    }
    model.require_first_order("pullback")?;
    let n = cover.sheets;
    if cover.is_trivial() {
        let components = (0..n).flat_map(|_| model.components.iter().copied()).collect();
        return LatticeSpectrumModel::new(components, vec![], vec![]);
    }
    let components = model
        .components
        .iter()
        .map(|c| LatticeComponent {
            scale: c.scale / n as f64,
            offset: frac_star(n as f64 * c.offset),
            ..*c
        })
        .collect();
    LatticeSpectrumModel::new(components, vec![], vec![])
}

/// Direct sum of `n` copies, the operator on a trivial `n`-sheeted cover.
pub fn pushforward_trivial(a0: &ModelOperator, n: u32) -> Result<ModelOperator> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    match a0.backing() {
        Backing::Lattice(model) => {
            let components = (0..n).flat_map(|_| model.components.iter().copied()).collect();
            let removed = (0..n).flat_map(|_| model.removed.iter().copied()).collect();
            let added = (0..n).flat_map(|_| model.added.iter().copied()).collect();
            Ok(ModelOperator::from_lattice(LatticeSpectrumModel::new(components, removed, added)?))
        }
        Backing::Matrix(m) => {
            let mut sum = m.clone();
            for _ in 1..n {
                sum = sum.direct_sum(m);
            }
            Ok(ModelOperator::from_matrix(sum, a0.meta))
        }
    }
}

/// Coefficients in the flat line bundle with holonomy `e^{2 pi i t}`: every
/// lattice offset moves by `t`.
pub fn twist_flat(a0: &ModelOperator, holonomy: f64) -> Result<ModelOperator> {
    if !(0.0..1.0).contains(&holonomy) {
        return Err(Error::InvalidArgument(format!("holonomy parameter {holonomy} outside [0, 1)")));
    }
    let model = a0.lattice().map_err(|_| Error::UnsupportedBacking("twist of a matrix operator".into()))?;
    model.require_first_order("twist")?;
    if model.has_exceptions() {
        return Err(Error::UnsupportedBacking("twist of a model with exceptions".into()));
    }
    let components = model
        .components
        .iter()
        .map(|c| LatticeComponent { offset: frac_star(c.offset + holonomy), ..*c })
        .collect();
    Ok(ModelOperator::from_lattice(LatticeSpectrumModel::new(components, vec![], vec![])?))
}

/// How the endpoint spectra of a loop are compared.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LoopCheck {
    /// Full multisets must agree.
    Full,
    /// Only eigenvalues inside `[lo, hi]` are compared; for truncated lattices
    /// whose edge curves leave the window along the loop.
    Window { lo: f64, hi: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum FamilyBacking {
    /// `curves[k][i]` is the k-th eigenvalue curve at `grid[i]`, linear in between.
    Curves(Vec<Vec<f64>>),
    /// Matrices at the grid points, linearly interpolated in between.
    Matrices(Vec<DenseHermitian>),
}

/// A path `tau in [0, 1] -> A_tau` of self-adjoint operators.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFamily {
    grid: Vec<f64>,
    backing: FamilyBacking,
    is_loop: bool,
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 2 {
        return Err(Error::InvalidArgument("a family needs at least two grid points".into()));
    }
    if grid[0] != 0.0 || *grid.last().unwrap() != 1.0 {
        return Err(Error::InvalidArgument("family grid must start at 0 and end at 1".into()));
    }
    if grid.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::InvalidArgument("family grid must be sorted".into()));
    }
    Ok(())
}

/// Builds a curve-backed family. A repeated grid point with two different
/// values encodes a jump and is rejected.
pub fn family_from_curves(
    grid: Vec<f64>,
    curves: Vec<Vec<f64>>,
    loop_check: Option<LoopCheck>,
) -> Result<SpectralFamily> {
    check_grid(&grid)?;
    for (k, c) in curves.iter().enumerate() {
        if c.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "curve {k} has {} samples, grid has {}",
                c.len(),
                grid.len()
            )));
        }
        if c.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument(format!("curve {k} has non-finite samples")));
        }
        for i in 1..grid.len() {
            if grid[i] == grid[i - 1] && c[i] != c[i - 1] {
                return Err(Error::DiscontinuousCurve { curve: k, index: i, jump: c[i] - c[i - 1] });
            }
        }
    }
    // drop repeated grid points, they carry no information once continuity holds
    let keep: Vec<usize> = (0..grid.len()).filter(|&i| i == 0 || grid[i] != grid[i - 1]).collect();
    let grid: Vec<f64> = keep.iter().map(|&i| grid[i]).collect();
    let curves: Vec<Vec<f64>> = curves.into_iter().map(|c| keep.iter().map(|&i| c[i]).collect()).collect();
    let family = SpectralFamily { grid, backing: FamilyBacking::Curves(curves), is_loop: loop_check.is_some() };
    if let Some(check) = loop_check {
        family.check_loop(check)?;
    }
    Ok(family)
}

pub fn family_from_matrices(
    grid: Vec<f64>,
    matrices: Vec<DenseHermitian>,
    loop_check: Option<LoopCheck>,
) -> Result<SpectralFamily> {
    check_grid(&grid)?;
    if grid.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidArgument("matrix family grid must be strictly increasing".into()));
    }
    if matrices.len() != grid.len() {
        return Err(Error::InvalidArgument("one matrix per grid point is required".into()));
    }
    let dim = matrices[0].dim();
    if matrices.iter().any(|m| m.dim() != dim) {
        return Err(Error::InvalidArgument("all matrices in a family must share a dimension".into()));
    }
    let family = SpectralFamily { grid, backing: FamilyBacking::Matrices(matrices), is_loop: loop_check.is_some() };
    if let Some(check) = loop_check {
        family.check_loop(check)?;
    }
    Ok(family)
}

impl SpectralFamily {
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn backing(&self) -> &FamilyBacking {
        &self.backing
    }

    pub fn is_loop(&self) -> bool {
        self.is_loop
    }

    pub fn curves(&self) -> Option<&[Vec<f64>]> {
        match &self.backing {
            FamilyBacking::Curves(c) => Some(c),
            FamilyBacking::Matrices(_) => None,
        }
    }

    fn check_loop(&self, check: LoopCheck) -> Result<()> {
        let filter = |s: Spectrum| -> Vec<f64> {
            match check {
                LoopCheck::Full => s.eigenvalues().to_vec(),
                LoopCheck::Window { lo, hi } => {
                    s.eigenvalues().iter().copied().filter(|x| (lo..=hi).contains(x)).collect()
                }
            }
        };
        let start = filter(self.spectrum_at(0.0));
        let end = filter(self.spectrum_at(1.0));
        if !multiset_eq(&start, &end, MULTISET_TOL) {
            return Err(Error::LoopMismatch(format!(
                "{} eigenvalues at tau = 0 versus {} at tau = 1",
                start.len(),
                end.len()
            )));
        }
        Ok(())
    }

    /// Locates `tau` on the grid: segment index and interpolation weight.
    fn locate(&self, tau: f64) -> (usize, f64) {
        let tau = tau.clamp(0.0, 1.0);
        let n = self.grid.len();
        let i = self.grid.partition_point(|&g| g <= tau).clamp(1, n - 1) - 1;
        let (a, b) = (self.grid[i], self.grid[i + 1]);
        let s = if b > a { (tau - a) / (b - a) } else { 0.0 };
        (i, s.clamp(0.0, 1.0))
    }

    pub fn curve_value(curve: &[f64], grid: &[f64], tau: f64) -> f64 {
        let n = grid.len();
        let tau = tau.clamp(0.0, 1.0);
        let i = grid.partition_point(|&g| g <= tau).clamp(1, n - 1) - 1;
        let (a, b) = (grid[i], grid[i + 1]);
        if b <= a {
            return curve[i];
        }
        let s = ((tau - a) / (b - a)).clamp(0.0, 1.0);
        if s == 0.0 {
            curve[i]
        } else if s == 1.0 {
            curve[i + 1]
        } else {
            curve[i] + s * (curve[i + 1] - curve[i])
        }
    }

    pub fn spectrum_at(&self, tau: f64) -> Spectrum {
        match &self.backing {
            FamilyBacking::Curves(curves) => Spectrum::new(
                curves.iter().map(|c| Self::curve_value(c, &self.grid, tau)).collect(),
                SpectrumSource::LatticeTruncation,
            ),
            FamilyBacking::Matrices(ms) => {
                let (i, s) = self.locate(tau);
                if s == 0.0 {
                    eigvalsh(&ms[i])
                } else if s == 1.0 {
                    eigvalsh(&ms[i + 1])
                } else {
                    // dimensions agree by construction
                    eigvalsh(&ms[i].lerp(&ms[i + 1], s).expect("matching dimensions"))
                }
            }
        }
    }

    /// Grid points strictly inside `(a, b)`.
    pub fn interior_nodes(&self, a: f64, b: f64) -> impl Iterator<Item = f64> + '_ {
        self.grid.iter().copied().filter(move |&g| g > a && g < b)
    }

    /// Same family traversed backwards.
    pub fn reversed(&self) -> Self {
        let grid: Vec<f64> = self.grid.iter().rev().map(|g| 1.0 - g).collect();
        let backing = match &self.backing {
            FamilyBacking::Curves(c) => {
                FamilyBacking::Curves(c.iter().map(|v| v.iter().rev().copied().collect()).collect())
            }
            FamilyBacking::Matrices(m) => FamilyBacking::Matrices(m.iter().rev().cloned().collect()),
        };
        Self { grid, backing, is_loop: self.is_loop }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn values(op: &ModelOperator, w: f64) -> Vec<f64> {
        op.spectrum(w).eigenvalues().to_vec()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn shifted_lattice_spectrum() {
        let op = lattice_operator(1.0, 0.3, 1).unwrap();
        let v = values(&op, 2.0);
        assert!(close(&v, &[-1.7, -0.7, 0.3, 1.3], 1e-12), "{v:?}");
    }

    #[test]
    fn integer_lattice_has_kernel() {
        let op = lattice_operator(1.0, 0.0, 1).unwrap();
        let s = op.spectrum(3.0);
        assert_eq!(s.eigenvalues(), &[-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0]);
        assert_eq!(crate::linalg::kernel_dimension(&s, 1e-9), 1);
        assert!(op.lattice().unwrap().components()[0].has_zero());
    }

    #[test]
    fn signed_square_lattice() {
        let op = lattice_operator(1.0, 0.0, 2).unwrap();
        // brute force: sgn(n) n^2 for n in -2..=2
        let expected: Vec<f64> = (-2i32..=2).map(|n| (n.signum() * n * n) as f64).collect();
        assert_eq!(values(&op, 2.0), expected);
    }

    #[test]
    fn positive_powers() {
        let z2 = lattice_operator(1.0, 0.0, 2).unwrap();
        let lap = positive_power_operator(&z2, false).unwrap();
        assert_eq!(values(&lap, 2.0), vec![0.0, 1.0, 1.0, 4.0, 4.0]);
        let neg = positive_power_operator(&z2, true).unwrap();
        let v = values(&neg, 10.0);
        assert_eq!(crate::linalg::kernel_dimension(&neg.spectrum(10.0), 1e-9), 1);
        assert!(v.iter().filter(|x| **x != 0.0).all(|x| *x < 0.0));
        // brute force squaring of the lattice points in the window
        let mut brute: Vec<f64> = (-10i32..=10).map(|n| (n * n) as f64).collect();
        brute.sort_by(f64::total_cmp);
        assert_eq!(values(&lap, 10.0), brute);
        assert_eq!(positive_power_operator(&lap, false).unwrap().meta().parity_class, ParityClass::Even);
    }

    #[test]
    fn positive_power_of_matrix_is_refused() {
        let m = ModelOperator::from_matrix(DenseHermitian::diagonal(&[1.0]).unwrap(), OperatorMeta::default());
        assert_eq!(positive_power_operator(&m, false).unwrap_err(), Error::MatrixBackingUnsupported);
    }

    #[test]
    fn pullback_matches_direct_listing() {
        for &(t, n) in &[(0.25, 2u32), (0.5, 2), (0.1, 3), (0.7, 5), (1.0, 4)] {
            let base = lattice_operator(1.0, t, 1).unwrap();
            let lifted = pullback_cover(&base, &CoverConfig::connected(n).unwrap()).unwrap();
            // oracle: list {m / n + t : m in Z} directly
            let mut direct: Vec<f64> = (-40..=40)
                .map(|m| m as f64 / n as f64 + t)
                .filter(|x| x.abs() <= 3.0)
                .collect();
            direct.sort_by(f64::total_cmp);
            assert!(close(&values(&lifted, 3.0), &direct, 1e-12), "t={t} n={n}");
        }
    }

    #[test]
    fn pullback_structure() {
        let base = lattice_operator(1.0, 0.25, 1).unwrap();
        let lifted = pullback_cover(&base, &CoverConfig::connected(2).unwrap()).unwrap();
        let c = lifted.lattice().unwrap().components()[0];
        assert_eq!((c.scale, c.offset), (0.5, 0.5));
        let half = pullback_cover(&lattice_operator(1.0, 0.5, 1).unwrap(), &CoverConfig::connected(2).unwrap()).unwrap();
        assert!(half.lattice().unwrap().components()[0].has_zero());
        let same = pullback_cover(&base, &CoverConfig::connected(1).unwrap()).unwrap();
        assert_eq!(same, base);
        let two = lattice_operator(1.0, 0.25, 1).unwrap().direct_sum(&base).unwrap();
        assert_eq!(
            pullback_cover(&two, &CoverConfig::connected(2).unwrap()).unwrap_err().name(),
            "UnsupportedBacking"
        );
    }

    #[test]
    fn pushforward_multiplicities() {
        let base = lattice_operator(1.0, 0.5, 1).unwrap();
        assert_eq!(pushforward_trivial(&base, 1).unwrap(), base);
        let three = pushforward_trivial(&base, 3).unwrap();
        let v = values(&three, 4.0);
        assert_eq!(v.len(), 3 * values(&base, 4.0).len());
        for chunk in v.chunks(3) {
            assert!(chunk.iter().all(|x| *x == chunk[0]));
        }
    }

    #[test]
    fn flat_twists() {
        let z = lattice_operator(1.0, 0.0, 1).unwrap();
        assert_eq!(twist_flat(&z, 0.0).unwrap(), z);
        let twisted = twist_flat(&z, 0.3).unwrap();
        assert!(close(&values(&twisted, 3.0), &values(&lattice_operator(1.0, 0.3, 1).unwrap(), 3.0), 1e-12));
        let back = twist_flat(&twisted, 0.7).unwrap();
        assert!(close(&values(&back, 5.0), &values(&z, 5.0), 1e-12));
        assert!(twist_flat(&z, 1.0).is_err());
    }

    #[test]
    fn reflection_symmetry() {
        for &t in &[0.1, 0.3, 0.5, 0.9, 1.0] {
            let a = lattice_operator(1.5, t, 1).unwrap();
            let b = lattice_operator(1.5, 1.0 - t, 1).unwrap();
            let mut neg: Vec<f64> = values(&a, 6.0).iter().map(|x| -x).collect();
            neg.sort_by(f64::total_cmp);
            assert!(close(&values(&b, 6.0), &neg, 1e-12));
            assert!(close(&values(&a.negated(), 6.0), &neg, 1e-12));
        }
    }

    #[test]
    fn exceptions_enumerate() {
        let z = lattice_operator(1.0, 0.0, 1).unwrap();
        let e = z.with_exceptions(vec![-1.0, 0.0], vec![0.25, 7.0]).unwrap();
        assert_eq!(values(&e, 2.0), vec![-2.0, 0.25, 1.0, 2.0]);
        assert!(z.with_exceptions(vec![0.5], vec![]).is_err());
        assert!(z.with_exceptions(vec![1.0, 1.0], vec![]).is_err());
    }

    #[test]
    fn meta_parity() {
        let d = lattice_operator(1.0, 0.3, 1).unwrap();
        assert_eq!(d.meta().order, 1);
        assert!(!d.meta().satisfies_parity());
        assert!(d.meta().rstar_invariant);
        let lap = positive_power_operator(&lattice_operator(1.0, 0.0, 2).unwrap(), false).unwrap();
        assert!(lap.meta().satisfies_parity());
        assert!(lap.meta().rstar_invariant);
        let odd_sq = lattice_operator(1.0, 0.0, 2).unwrap();
        assert!(!odd_sq.meta().rstar_invariant);
    }

    #[test]
    fn curve_families() {
        let grid = vec![0.0, 0.5, 1.0];
        let constant = family_from_curves(grid.clone(), vec![vec![0.5; 3], vec![-0.5; 3]], Some(LoopCheck::Full));
        assert!(constant.is_ok());

        let n = 6;
        let grid2 = vec![0.0, 1.0];
        let shift: Vec<Vec<f64>> = (-n..=n).map(|k| vec![k as f64, k as f64 + 1.0]).collect();
        assert!(family_from_curves(grid2.clone(), shift.clone(), Some(LoopCheck::Full)).is_err());
        let window = LoopCheck::Window { lo: (-n + 1) as f64, hi: (n - 1) as f64 };
        assert!(family_from_curves(grid2, shift, Some(window)).is_ok());

        let jump = family_from_curves(vec![0.0, 0.5, 0.5, 1.0], vec![vec![1.0, 1.0, 2.0, 2.0]], None);
        assert_eq!(jump.unwrap_err().name(), "DiscontinuousCurve");
        let bad_loop = family_from_curves(grid, vec![vec![1.0, 1.5, 2.0]], Some(LoopCheck::Full));
        assert_eq!(bad_loop.unwrap_err().name(), "LoopMismatch");
    }

    #[test]
    fn matrix_family_interpolates() {
        let a = DenseHermitian::diagonal(&[-1.0, 2.0]).unwrap();
        let b = DenseHermitian::diagonal(&[1.0, 2.0]).unwrap();
        let f = family_from_matrices(vec![0.0, 1.0], vec![a, b], None).unwrap();
        let s = f.spectrum_at(0.25);
        assert!((s.eigenvalues()[0] + 0.5).abs() < 1e-14);
    }
}
