//! Scenario execution.

use index_defect::apsindex::{aps_index, inv_invariant, modn_index, ApsConventions, ProfileProblem};
use index_defect::etazeta::{eta_decomposition, eta_invariant_with, zeta_check, Backend, EtaMethod, LatticePath};
use index_defect::linalg::DenseHermitian;
use index_defect::opmodel::{
    family_from_curves, family_from_matrices, CoverConfig, LatticeComponent, LatticeSpectrumModel, LoopCheck,
    ModelOperator, OperatorMeta, ParityClass, SignRule, SpectralFamily,
};
use index_defect::seeley::{local_zeta, parity_report, DiffSymbol, TrigPoly};
use index_defect::specflow::{crossing_count_oracle, loop_spectral_flow, spectral_flow, SfConfig};
use index_defect::Error;
use num_complex::Complex64;

use crate::config::{
    BackendSpec, Config, CoverSpec, FamilySpec, LoopSpec, MatrixSpec, OperatorSpec, ScenarioSpec, SignSpec, SweepParam,
    SweepSpec,
};
use crate::suite;
use crate::table::{Cell, Table};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    pub mode_window: usize,
    pub gap_tol: f64,
    pub kernel_tol: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Self { mode_window: 64, gap_tol: 1e-6, kernel_tol: 1e-9 }
    }
}

impl Settings {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.mode_window == 0 {
            return Err(CliError::Config("--mode-window must be at least 1".into()));
        }
        if !(self.gap_tol > 0.0 && self.gap_tol.is_finite()) {
            return Err(CliError::Config("--gap-tol must be positive".into()));
        }
        if !(self.kernel_tol >= 0.0 && self.kernel_tol.is_finite()) {
            return Err(CliError::Config("--kernel-tol must be nonnegative".into()));
        }
        Ok(())
    }

    fn sf_config(&self) -> SfConfig {
        SfConfig { gap_tol: self.gap_tol, ..SfConfig::default() }
    }
}

/// Library errors raised while building objects from the config are
/// validation failures, not computation failures.
fn invalid<'a>(what: &str, name: &'a str) -> impl FnOnce(Error) -> CliError + 'a {
    let what = what.to_string();
    move |e| CliError::Config(format!("{what}.{name}: {}: {e}", e.name()))
}

fn lookup<'a, T>(map: &'a std::collections::BTreeMap<String, T>, what: &str, name: &str) -> Result<&'a T, CliError> {
    map.get(name).ok_or_else(|| CliError::Config(format!("unknown {what} `{name}`")))
}

fn matrix(m: &MatrixSpec) -> Result<DenseHermitian, Error> {
    let n = m.dim * m.dim;
    if m.re.len() != n || !(m.im.is_empty() || m.im.len() == n) {
        return Err(Error::InvalidArgument(format!("a {0}x{0} matrix needs {n} entries", m.dim)));
    }
    let entries = (0..n).map(|i| Complex64::new(m.re[i], m.im.get(i).copied().unwrap_or(0.0))).collect();
    DenseHermitian::new(m.dim, entries)
}

fn sign_rule(s: SignSpec) -> SignRule {
    match s {
        SignSpec::Signed => SignRule::Signed,
        SignSpec::Abs => SignRule::Abs,
        SignSpec::NegAbs => SignRule::NegAbs,
    }
}

pub fn build_operator(config: &Config, name: &str) -> Result<ModelOperator, CliError> {
    let spec = lookup(&config.operators, "operator", name)?;
    let built = match spec {
        OperatorSpec::Lattice { components, removed, added } => components
            .iter()
            .map(|c| LatticeComponent::new(c.scale, c.offset, c.power, sign_rule(c.sign)))
            .collect::<Result<Vec<_>, _>>()
            .and_then(|cs| LatticeSpectrumModel::new(cs, removed.clone(), added.clone()))
            .map(ModelOperator::from_lattice),
        OperatorSpec::Matrix { dim, re, im, order } => {
            let spec = MatrixSpec { dim: *dim, re: re.clone(), im: im.clone() };
            let meta = OperatorMeta { order: *order, base_dimension: 1, parity_class: ParityClass::None, rstar_invariant: false };
            matrix(&spec).map(|m| ModelOperator::from_matrix(m, meta))
        }
    };
    built.map_err(invalid("operators", name))
}

pub fn build_family(config: &Config, name: &str, settings: &Settings) -> Result<SpectralFamily, CliError> {
    let spec = lookup(&config.families, "family", name)?;
    let loop_check = |l: &Option<LoopSpec>| {
        l.map(|l| match l {
            LoopSpec::Full => LoopCheck::Full,
            LoopSpec::Window { lo, hi } => LoopCheck::Window { lo, hi },
        })
    };
    let built = match spec {
        FamilySpec::Curves { grid, curves, loop_check: l } => family_from_curves(grid.clone(), curves.clone(), loop_check(l)),
        FamilySpec::Matrices { grid, matrices, loop_check: l } => matrices
            .iter()
            .map(matrix)
            .collect::<Result<Vec<_>, _>>()
            .and_then(|ms| family_from_matrices(grid.clone(), ms, loop_check(l))),
        FamilySpec::LatticeShift { scale, from, to } => {
            let w = settings.mode_window as i64;
            let curves = (-w..=w).map(|k| vec![scale * (k as f64 + from), scale * (k as f64 + to)]).collect();
            family_from_curves(vec![0.0, 1.0], curves, None)
        }
    };
    built.map_err(invalid("families", name))
}

pub fn build_symbol(config: &Config, name: &str) -> Result<DiffSymbol, CliError> {
    let spec = lookup(&config.symbols, "symbol", name)?;
    spec.terms
        .iter()
        .map(|t| TrigPoly::from_f64(&t.fourier_coeffs).map(|p| (t.xi_power, p)))
        .collect::<Result<Vec<_>, _>>()
        .and_then(|terms| DiffSymbol::new(spec.order, terms))
        .map_err(invalid("symbols", name))
}

pub fn build_problem(config: &Config, name: &str, settings: &Settings) -> Result<ProfileProblem, CliError> {
    let spec = lookup(&config.problems, "problem", name)?;
    let base = build_operator(config, &spec.base)?;
    let model = base.lattice().map_err(invalid("problems", name))?.clone();
    let mut p = ProfileProblem::new(model, spec.profile.clone(), spec.tau).map_err(invalid("problems", name))?;
    let d = ApsConventions::default();
    if let Some(c) = spec.conventions {
        p.conventions = ApsConventions {
            near_includes_zero: c.near_includes_zero.unwrap_or(d.near_includes_zero),
            far_flip: c.far_flip.unwrap_or(d.far_flip),
            far_includes_zero: c.far_includes_zero.unwrap_or(d.far_includes_zero),
        };
    }
    p.window = spec.window.unwrap_or(settings.mode_window as f64);
    p.kernel_tol = settings.kernel_tol;
    Ok(p)
}

fn cover(spec: &CoverSpec) -> Result<CoverConfig, CliError> {
    CoverConfig::new(spec.sheets, spec.trivial).map_err(|e| CliError::Config(format!("cover: {e}")))
}

/// Replaces the offset of a single-component lattice.
fn with_offset(model: &LatticeSpectrumModel, offset: f64) -> Result<LatticeSpectrumModel, CliError> {
    match model.components() {
        [c] if !model.has_exceptions() => {
            let c = LatticeComponent::new(c.scale, offset, c.power, c.sign)?;
            Ok(LatticeSpectrumModel::new(vec![c], vec![], vec![])?)
        }
        _ => Err(CliError::Config("offset sweeps need a single lattice component without exceptions".into())),
    }
}

fn sweep_values(sweep: &Option<SweepSpec>) -> Result<Option<(SweepParam, Vec<f64>)>, CliError> {
    sweep.as_ref().map(|s| Ok((s.param, s.values()?))).transpose()
}

fn param_name(p: SweepParam) -> &'static str {
    match p {
        SweepParam::Tau => "tau",
        SweepParam::Offset => "offset",
    }
}

type ProblemSweep = (&'static str, Vec<(f64, ProfileProblem)>);

/// Problem instances along the sweep, paired with the sweep value.
fn problem_sweep(p: &ProfileProblem, sweep: &Option<SweepSpec>) -> Result<ProblemSweep, CliError> {
    Ok(match sweep_values(sweep)? {
        None => ("tau", vec![(p.tau, p.clone())]),
        Some((SweepParam::Tau, vs)) => ("tau", vs.into_iter().map(|v| (v, p.with_tau(v))).collect()),
        Some((SweepParam::Offset, vs)) => (
            "offset",
            vs.into_iter().map(|v| Ok((v, p.with_base(with_offset(&p.base, v)?)))).collect::<Result<_, CliError>>()?,
        ),
    })
}

fn method_tag(m: EtaMethod) -> &'static str {
    match m {
        EtaMethod::ClosedForm => "closed-form",
        EtaMethod::Hurwitz => "hurwitz",
        EtaMethod::Perturbation => "perturbation",
    }
}

pub fn run_scenario(config: &Config, name: &str, settings: &Settings) -> Result<Table, CliError> {
    settings.validate()?;
    let scenario = lookup(&config.scenarios, "scenario", name)?;
    match scenario {
        ScenarioSpec::Eta { operators, backend, sweep } => {
            let backend = match backend {
                BackendSpec::ClosedForm => Backend::ClosedForm,
                BackendSpec::Hurwitz => Backend::Hurwitz,
            };
            let ops = operators.iter().map(|o| Ok((o, build_operator(config, o)?))).collect::<Result<Vec<_>, CliError>>()?;
            let sweep = sweep_values(sweep)?;
            let mut headers = vec!["operator"];
            if let Some((p, _)) = &sweep {
                headers.push(param_name(*p));
            }
            headers.extend(["eta", "eta_at_zero", "kernel_dim", "method", "err_bound"]);
            let mut t = Table::new(&headers);
            let values: Vec<Option<f64>> = match &sweep {
                None => vec![None],
                Some((SweepParam::Offset, vs)) => vs.iter().map(|&v| Some(v)).collect(),
                Some((SweepParam::Tau, _)) => {
                    return Err(CliError::Config(format!("scenarios.{name}: eta sweeps take `offset`")))
                }
            };
            for v in values {
                for (oname, op) in &ops {
                    let op = match v {
                        Some(off) => ModelOperator::from_lattice(with_offset(op.lattice()?, off)?),
                        None => op.clone(),
                    };
                    let r = eta_invariant_with(&op, backend)?;
                    let mut row: Vec<Cell> = vec![oname.as_str().into()];
                    if let Some(off) = v {
                        row.push(off.into());
                    }
                    row.extend([
                        r.eta.into(),
                        r.eta_at_zero.into(),
                        r.kernel_dim.into(),
                        method_tag(r.method).into(),
                        r.err_bound.into(),
                    ]);
                    t.push(row);
                }
            }
            Ok(t)
        }
        ScenarioSpec::Zeta { operators } => {
            let mut t = Table::new(&["operator", "zeta_at_zero", "kernel_dim", "heat_invariant"]);
            for o in operators {
                let r = zeta_check(&build_operator(config, o)?)?;
                t.push(vec![o.as_str().into(), r.zeta_at_zero.into(), r.kernel_dim.into(), r.heat_invariant.into()]);
            }
            Ok(t)
        }
        ScenarioSpec::Sf { family } => {
            let f = build_family(config, family, settings)?;
            let r = spectral_flow(&f, &settings.sf_config())?;
            let crossings: Cell = match crossing_count_oracle(&f) {
                Ok(c) => c.into(),
                Err(Error::CurvesRequired) => "n/a".into(),
                Err(e) => return Err(e.into()),
            };
            let mut t = Table::new(&["family", "sf", "crossings", "segments"]);
            t.push(vec![family.as_str().into(), r.value.into(), crossings, r.partition.segments.len().into()]);
            Ok(t)
        }
        ScenarioSpec::LoopSf { family } => {
            let f = build_family(config, family, settings)?;
            let v = loop_spectral_flow(&f, &settings.sf_config())?;
            let mut t = Table::new(&["family", "loop_sf"]);
            t.push(vec![family.as_str().into(), v.into()]);
            Ok(t)
        }
        ScenarioSpec::Aps { problem, sweep } => {
            let p = build_problem(config, problem, settings)?;
            let (param, points) = problem_sweep(&p, sweep)?;
            let mut t = Table::new(&[param, "index"]);
            for (v, q) in points {
                t.push(vec![v.into(), aps_index(&q.mode_problem()?)?.into()]);
            }
            Ok(t)
        }
        ScenarioSpec::Modn { problem, cover: c, sweep } => {
            let p = build_problem(config, problem, settings)?;
            let cover = cover(c)?;
            let (param, points) = problem_sweep(&p, sweep)?;
            let mut t = Table::new(&[param, "index", "modn"]);
            for (v, q) in points {
                let lifted = q.lift(&cover)?;
                let m = modn_index(&lifted, &cover, &q.base)?;
                t.push(vec![v.into(), lifted.index()?.into(), m.into()]);
            }
            Ok(t)
        }
        ScenarioSpec::Inv { problem, cover: c, sweep } => {
            let p = build_problem(config, problem, settings)?;
            let cover = cover(c)?;
            let (param, points) = problem_sweep(&p, sweep)?;
            let mut t = Table::new(&[param, "index", "modn", "eta_total", "eta_base", "inv"]);
            for (v, q) in points {
                let r = inv_invariant(&q.lift(&cover)?, &cover, &q.base)?;
                t.push(vec![v.into(), r.index.into(), r.modn.into(), r.eta_total.into(), r.eta_base.into(), r.inv.into()]);
            }
            Ok(t)
        }
        ScenarioSpec::SeeleyZeta { symbols } => {
            let mut t = Table::new(&[
                "symbol",
                "order",
                "local_zeta",
                "rstar_invariant",
                "parity_condition",
                "vanishing_predicted",
            ]);
            for s in symbols {
                let sym = build_symbol(config, s)?;
                let z = local_zeta(&sym)?;
                let r = parity_report(&sym);
                t.push(vec![
                    s.as_str().into(),
                    sym.order().into(),
                    z.into(),
                    r.rstar_invariant.into(),
                    r.parity_condition.into(),
                    r.vanishing_predicted.into(),
                ]);
            }
            Ok(t)
        }
        ScenarioSpec::Decomposition { path, samples } => {
            let spec = lookup(&config.paths, "path", path)?;
            let scales = spec.scales.clone().unwrap_or_else(|| vec![1.0; spec.start.len()]);
            let lp = LatticePath::new(scales, spec.start.clone(), spec.end.clone()).map_err(invalid("paths", path))?;
            let d = eta_decomposition(&lp, *samples)?;
            let mut t = Table::new(&["tau", "eta", "fractional_part", "jump", "sf"]);
            for (i, (&tau, &eta)) in d.taus.iter().zip(&d.eta).enumerate() {
                // jumps are reported at the sample ending their interval
                let jump: i64 = if i == 0 {
                    0
                } else {
                    let mid = 0.5 * (d.taus[i - 1] + tau);
                    d.jumps.iter().filter(|j| j.tau == mid).map(|j| j.size).sum()
                };
                t.push(vec![tau.into(), eta.into(), (eta - eta.floor()).into(), jump.into(), d.sf.into()]);
            }
            Ok(t)
        }
        ScenarioSpec::Suite { name } => {
            let results = suite::run_suite(name)?;
            Ok(suite::results_table(&results))
        }
    }
}
