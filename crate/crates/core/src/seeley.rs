//! Exact resolvent-symbol calculus for differential operators on the circle.
//!
//! A symbol is `sum_j coef_j(x) xi^j` with trigonometric-polynomial
//! coefficients and a positive constant leading coefficient `c`. Every term of
//! the resolvent parametrix is then a finite sum `p_k(x, xi) / (c xi^m - lambda)^k`
//! and all arithmetic stays in complex rationals.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;
pub type ComplexRational = Complex<BigRational>;

fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn cq(re: Rational, im: Rational) -> ComplexRational {
    Complex::new(re, im)
}

fn c_int(n: i64) -> ComplexRational {
    cq(q(n), q(0))
}

fn minus_i() -> ComplexRational {
    cq(q(0), q(-1))
}

fn to_c64(z: &ComplexRational) -> Complex64 {
    Complex64::new(z.re.to_f64().unwrap_or(f64::NAN), z.im.to_f64().unwrap_or(f64::NAN))
}

fn exact(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or_else(|| Error::InvalidArgument(format!("non-finite coefficient {x}")))
}

/// Finite Fourier series `sum_k c_k e^{i k x}`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrigPoly {
    coeffs: BTreeMap<i64, ComplexRational>,
}

impl TrigPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: ComplexRational) -> Self {
        Self::from_coeffs([(0, c)])
    }

    pub fn from_coeffs(coeffs: impl IntoIterator<Item = (i64, ComplexRational)>) -> Self {
        let mut out = Self::zero();
        for (k, c) in coeffs {
            out.add_term(k, c);
        }
        out
    }

    /// Coefficients given as `(k, re, im)` floats, converted exactly.
    pub fn from_f64(coeffs: &[(i64, f64, f64)]) -> Result<Self> {
        let mut terms = Vec::with_capacity(coeffs.len());
        for &(k, re, im) in coeffs {
            terms.push((k, cq(exact(re)?, exact(im)?)));
        }
        Ok(Self::from_coeffs(terms))
    }

    fn add_term(&mut self, k: i64, c: ComplexRational) {
        let slot = self.coeffs.entry(k).or_insert_with(ComplexRational::zero);
        *slot = &*slot + c;
        if slot.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn coeff(&self, k: i64) -> ComplexRational {
        self.coeffs.get(&k).cloned().unwrap_or_else(ComplexRational::zero)
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, ComplexRational> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.keys().all(|&k| k == 0)
    }

    /// `c_{-k} = conj(c_k)` for every `k`.
    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|(k, c)| self.coeff(-k) == c.conj())
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.coeffs.iter().map(|(&k, c)| to_c64(c) * Complex64::from_polar(1.0, k as f64 * x)).sum()
    }

    /// `(-i d/dx)^alpha` sends `c_k` to `k^alpha c_k`.
    fn dx_pow(&self, alpha: u32) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|(&k, c)| (k, c * c_int(k.pow(alpha)))))
    }
}

/// `sum_{j <= m} coef_j(x) xi^j` with a positive constant leading coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffSymbol {
    order: u32,
    coefs: Vec<TrigPoly>,
    leading: Rational,
}

impl DiffSymbol {
    /// `terms` are `(xi power, coefficient)` pairs; repeated powers add up.
    pub fn new(order: u32, terms: Vec<(u32, TrigPoly)>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument("symbol order must be at least 1".into()));
        }
        let mut coefs = vec![TrigPoly::zero(); order as usize + 1];
        for (p, c) in terms {
            if p > order {
                return Err(Error::InvalidArgument(format!("xi power {p} exceeds the order {order}")));
            }
            for (k, v) in c.coeffs {
                coefs[p as usize].add_term(k, v);
            }
        }
        let top = &coefs[order as usize];
        if !top.is_constant() {
            return Err(Error::NonConstantLeadingCoefficient);
        }
        let c = top.coeff(0);
        if !c.im.is_zero() || !c.re.is_positive() {
            return Err(Error::NonConstantLeadingCoefficient);
        }
        Ok(Self { order, coefs, leading: c.re })
    }

    /// Symbol with constant rational coefficients, `coefs[j]` multiplying `xi^j`.
    pub fn constant_coefficients(coefs: &[i64]) -> Result<Self> {
        let order = coefs.len().checked_sub(1).ok_or_else(|| Error::InvalidArgument("empty symbol".into()))?;
        let terms = coefs.iter().enumerate().map(|(j, &c)| (j as u32, TrigPoly::constant(c_int(c)))).collect();
        Self::new(order as u32, terms)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coefficient(&self, j: u32) -> &TrigPoly {
        &self.coefs[j as usize]
    }

    pub fn leading(&self) -> &Rational {
        &self.leading
    }

    /// Each term `coef_j xi^j` is homogeneous of degree `j` under real scalings,
    /// so monomial symbols always satisfy `a_j(x, -xi) = (-1)^j a_j(x, xi)`.
    pub fn is_rstar_invariant(&self) -> bool {
        true
    }
}

type Numerator = BTreeMap<(u32, i64), ComplexRational>;

fn add_into(n: &mut Numerator, key: (u32, i64), c: ComplexRational) {
    let slot = n.entry(key).or_insert_with(ComplexRational::zero);
    *slot = &*slot + c;
    if slot.is_zero() {
        n.remove(&key);
    }
}

/// `sum_k p_k(x, xi) / (c xi^m - lambda)^k`, keyed by pole power `k`;
/// numerators map `(xi power, Fourier mode)` to coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolventTerm {
    poles: BTreeMap<u32, Numerator>,
    leading: Rational,
    order: u32,
}

impl ResolventTerm {
    fn zero(s: &DiffSymbol) -> Self {
        Self { poles: BTreeMap::new(), leading: s.leading.clone(), order: s.order }
    }

    pub fn is_zero(&self) -> bool {
        self.poles.is_empty()
    }

    pub fn pole_powers(&self) -> impl Iterator<Item = u32> + '_ {
        self.poles.keys().copied()
    }

    /// Coefficient of `xi^p e^{ikx} / (c xi^m - lambda)^pole`.
    pub fn coefficient(&self, pole: u32, xi_power: u32, mode: i64) -> ComplexRational {
        self.poles
            .get(&pole)
            .and_then(|n| n.get(&(xi_power, mode)))
            .cloned()
            .unwrap_or_else(ComplexRational::zero)
    }

    fn add(&mut self, pole: u32, key: (u32, i64), c: ComplexRational) {
        let n = self.poles.entry(pole).or_default();
        add_into(n, key, c);
        if n.is_empty() {
            self.poles.remove(&pole);
        }
    }

    fn add_assign(&mut self, other: &Self) {
        for (&k, n) in &other.poles {
            for (&key, c) in n {
                self.add(k, key, c.clone());
            }
        }
    }

    fn map_coeffs(&self, f: impl Fn(&ComplexRational) -> ComplexRational) -> Self {
        let mut out = Self { poles: BTreeMap::new(), ..self.clone() };
        for (&k, n) in &self.poles {
            for (&key, c) in n {
                out.add(k, key, f(c));
            }
        }
        out
    }

    /// `-i d/dxi`.
    fn d_xi(&self) -> Self {
        let mut out = Self { poles: BTreeMap::new(), ..self.clone() };
        let cm = cq(&self.leading * q(self.order as i64), q(0));
        for (&k, n) in &self.poles {
            for (&(p, f), c) in n {
                if p > 0 {
                    out.add(k, (p - 1, f), c * c_int(p as i64) * minus_i());
                }
                // derivative of the pole factor: -k c m xi^{m-1} / D^{k+1}
                out.add(k + 1, (p + self.order - 1, f), c * &cm * c_int(-(k as i64)) * minus_i());
            }
        }
        out
    }

    /// Product with `coef(x) xi^p`.
    fn mul_monomial(&self, coef: &TrigPoly, p: u32) -> Self {
        let mut out = Self { poles: BTreeMap::new(), ..self.clone() };
        for (&k, n) in &self.poles {
            for (&(xp, f), c) in n {
                for (&g, d) in &coef.coeffs {
                    out.add(k, (xp + p, f + g), c * d);
                }
            }
        }
        out
    }

    fn divide_by_pole(&self) -> Self {
        Self { poles: self.poles.iter().map(|(&k, n)| (k + 1, n.clone())).collect(), ..self.clone() }
    }

    pub fn eval(&self, x: f64, xi: f64, lambda: Complex64) -> Complex64 {
        let c = self.leading.to_f64().unwrap_or(f64::NAN);
        let d = Complex64::new(c * xi.powi(self.order as i32), 0.0) - lambda;
        self.poles
            .iter()
            .map(|(&k, n)| {
                let num: Complex64 = n
                    .iter()
                    .map(|(&(p, f), v)| to_c64(v) * xi.powi(p as i32) * Complex64::from_polar(1.0, f as f64 * x))
                    .sum();
                num / d.powi(k as i32)
            })
            .sum()
    }

    /// Behaviour under `(xi, lambda) -> (-xi, (-1)^m lambda)`.
    pub fn parity(&self) -> TermParity {
        let mut even = false;
        let mut odd = false;
        for (&k, n) in &self.poles {
            for &(p, _) in n.keys() {
                let flips = p + if self.order % 2 == 1 { k } else { 0 };
                if flips % 2 == 0 {
                    even = true;
                } else {
                    odd = true;
                }
            }
        }
        match (even, odd) {
            (false, false) => TermParity::Zero,
            (true, false) => TermParity::Even,
            (false, true) => TermParity::Odd,
            (true, true) => TermParity::Mixed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermParity {
    Even,
    Odd,
    Zero,
    Mixed,
}

/// `b_{-m}, ..., b_{-m-J}` of the resolvent parametrix of `a - lambda`:
/// `b_{-m} = 1 / (a_m - lambda)` and for `j >= 1`
/// `b_{-m-j} = -(sum over k < j, k + l + alpha = j of
///   (1/alpha!) (-i d_xi)^alpha b_{-m-k} (-i d_x)^alpha a_{m-l}) / (a_m - lambda)`.
pub fn resolvent_symbols(s: &DiffSymbol, depth: u32) -> Result<Vec<ResolventTerm>> {
    let m = s.order;
    let mut base = ResolventTerm::zero(s);
    base.add(1, (0, 0), c_int(1));
    let mut b = vec![base];
    // derivs[k][alpha] = (-i d_xi)^alpha b_{-m-k}
    let mut derivs: Vec<Vec<ResolventTerm>> = Vec::new();
    let mut factorial = vec![q(1)];
    for a in 1..=depth as i64 {
        let f = &factorial[a as usize - 1] * q(a);
        factorial.push(f);
    }
    for j in 1..=depth {
        let k_new = derivs.len();
        derivs.push(vec![b[k_new].clone()]);
        let mut acc = ResolventTerm::zero(s);
        for k in 0..j {
            while derivs[k as usize].len() <= (j - k) as usize {
                let next = derivs[k as usize].last().unwrap().d_xi();
                derivs[k as usize].push(next);
            }
            for l in 0..=(j - k).min(m) {
                let alpha = j - k - l;
                let coef = s.coefficient(m - l).dx_pow(alpha);
                if coef.is_zero() {
                    continue;
                }
                let inv_fact = cq(Rational::one() / &factorial[alpha as usize], q(0));
                let term = derivs[k as usize][alpha as usize].mul_monomial(&coef, m - l).map_coeffs(|c| c * &inv_fact);
                acc.add_assign(&term);
            }
        }
        b.push(acc.map_coeffs(|c| -c.clone()).divide_by_pole());
    }
    Ok(b)
}

/// `(1 / (2 pi m)) sum_{xi0 = +-1} int_{S^1} dx int_0^inf b_{-1-m}(x, xi0, -lambda) dlambda`,
/// exact in rationals and converted to `f64` at the end. The value is read as
/// `zeta(A, 0) + dim ker A`.
pub fn local_zeta(s: &DiffSymbol) -> Result<f64> {
    let z = local_zeta_exact(s)?;
    Ok(z.re.to_f64().unwrap_or(f64::NAN))
}

pub fn local_zeta_exact(s: &DiffSymbol) -> Result<ComplexRational> {
    let m = s.order;
    let b = resolvent_symbols(s, 1)?.pop().expect("depth 1 yields two terms");
    let mut total = ComplexRational::zero();
    for xi0 in [1i64, -1] {
        // a = c xi0^m; int_0^inf (a + lambda)^{-k} dlambda = a^{1-k} / (k - 1)
        let a = &s.leading * q(xi0.pow(m));
        for (&k, n) in &b.poles {
            // only the constant Fourier mode survives the x-integral
            let value: ComplexRational = n
                .iter()
                .filter(|((_, f), _)| *f == 0)
                .map(|(&(p, _), c)| c * c_int(xi0.pow(p)))
                .fold(ComplexRational::zero(), |acc, v| acc + v);
            if value.is_zero() {
                continue;
            }
            if k <= 1 {
                return Err(Error::DivergentLambdaIntegral(k));
            }
            if !a.is_positive() {
                return Err(Error::NonPositiveLeadingSymbol(a.to_f64().unwrap_or(f64::NAN)));
            }
            let integral = Rational::one() / (a.pow(k as i32 - 1) * q(k as i64 - 1));
            total += value * cq(integral, q(0));
        }
    }
    // 2 pi from the x-integral cancels against 1 / (2 pi m)
    Ok(total * cq(Rational::one() / q(m as i64), q(0)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParityReport {
    pub order: u32,
    pub dimension: u32,
    pub rstar_invariant: bool,
    /// `order + dimension` odd.
    pub parity_condition: bool,
    /// `(j, parity of b_{-m-j})` for `j = 0..=2`.
    pub term_parity: Vec<(u32, TermParity)>,
    pub vanishing_predicted: bool,
    /// `local_zeta == 0` when vanishing was predicted.
    pub vanishing_confirmed: Option<bool>,
}

/// Parity bookkeeping for the vanishing of the local ζ-formula.
pub fn parity_report(s: &DiffSymbol) -> ParityReport {
    let m = s.order;
    let terms = resolvent_symbols(s, 2).expect("symbol already validated");
    let term_parity: Vec<(u32, TermParity)> =
        terms.iter().enumerate().map(|(j, t)| (j as u32, t.parity())).collect();
    // homogeneity of degree -m-j forces the sign (-1)^{m+j} under the reflection
    let rstar_invariant = s.is_rstar_invariant()
        && term_parity.iter().all(|&(j, p)| {
            let expected = if (m + j).is_multiple_of(2) { TermParity::Even } else { TermParity::Odd };
            p == expected || p == TermParity::Zero
        });
    let parity_condition = (m + 1) % 2 == 1;
    let integrand = term_parity[1].1;
    let vanishing_predicted = parity_condition
        && rstar_invariant
        && matches!(integrand, TermParity::Odd | TermParity::Zero);
    let vanishing_confirmed = vanishing_predicted.then(|| matches!(local_zeta_exact(s), Ok(z) if z.is_zero()));
    ParityReport {
        order: m,
        dimension: 1,
        rstar_invariant,
        parity_condition,
        term_parity,
        vanishing_predicted,
        vanishing_confirmed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trig(coeffs: &[(i64, i64, i64)]) -> TrigPoly {
        TrigPoly::from_coeffs(coeffs.iter().map(|&(k, re, im)| (k, cq(q(re), q(im)))))
    }

    #[test]
    fn laplacian_terms() {
        let s = DiffSymbol::constant_coefficients(&[0, 0, 1]).unwrap();
        let b = resolvent_symbols(&s, 2).unwrap();
        assert_eq!(b.len(), 3);
        assert_eq!(b[0].coefficient(1, 0, 0), c_int(1));
        assert!(b[1].is_zero());
        assert!(b[2].is_zero());
        assert_eq!(resolvent_symbols(&s, 0).unwrap().len(), 1);
        assert_eq!(local_zeta(&s).unwrap(), 0.0);
    }

    #[test]
    fn first_order_perturbation() {
        // xi^2 + 3 xi: b_{-3} = -3 xi / (xi^2 - lambda)^2
        let s = DiffSymbol::constant_coefficients(&[0, 3, 1]).unwrap();
        let b = resolvent_symbols(&s, 1).unwrap();
        assert_eq!(b[1].pole_powers().collect::<Vec<_>>(), vec![2]);
        assert_eq!(b[1].coefficient(2, 1, 0), c_int(-3));
        assert_eq!(local_zeta(&s).unwrap(), 0.0);
        let lam = Complex64::new(-1.3, 0.4);
        let v = b[1].eval(0.7, 1.5, lam);
        let expected = -3.0 * 1.5 / (Complex64::new(2.25, 0.0) - lam).powi(2);
        assert!((v - expected).norm() < 1e-14);
    }

    #[test]
    fn potential_term_hand_check() {
        // xi^2 + v: b_{-3} = 0 and b_{-4} = -v / (xi^2 - lambda)^2 for constant v
        let s = DiffSymbol::constant_coefficients(&[5, 0, 1]).unwrap();
        let b = resolvent_symbols(&s, 2).unwrap();
        assert!(b[1].is_zero());
        assert_eq!(b[2].pole_powers().collect::<Vec<_>>(), vec![2]);
        assert_eq!(b[2].coefficient(2, 0, 0), c_int(-5));
        assert_eq!(local_zeta(&s).unwrap(), 0.0);
    }

    #[test]
    fn x_dependent_potential() {
        let v = trig(&[(-1, 1, 0), (0, 2, 0), (1, 1, 0)]); // 2 + 2 cos x
        let s = DiffSymbol::new(2, vec![(2, TrigPoly::constant(c_int(1))), (0, v)]).unwrap();
        assert_eq!(local_zeta(&s).unwrap(), 0.0);
        let b = resolvent_symbols(&s, 3).unwrap();
        // j = 3: the derivative of v enters as (-i d_xi) b_{-2} (-i d_x) v
        assert!(!b[3].is_zero());
        assert!(s.coefficient(0).is_real());
    }

    #[test]
    fn leading_coefficient_checks() {
        let bad = DiffSymbol::new(2, vec![(2, trig(&[(1, 1, 0), (0, 1, 0)]))]);
        assert_eq!(bad.unwrap_err(), Error::NonConstantLeadingCoefficient);
        let negative = DiffSymbol::constant_coefficients(&[0, 0, -1]);
        assert_eq!(negative.unwrap_err(), Error::NonConstantLeadingCoefficient);
    }

    #[test]
    fn homogeneity() {
        let v = trig(&[(-2, 1, -1), (0, 3, 0), (2, 1, 1)]);
        let w = trig(&[(-1, 0, 2), (1, 0, -2)]);
        let s = DiffSymbol::new(2, vec![(2, TrigPoly::constant(c_int(2))), (1, w), (0, v)]).unwrap();
        let b = resolvent_symbols(&s, 4).unwrap();
        let t: f64 = 2.0;
        for (j, term) in b.iter().enumerate() {
            for &(x, xi, lam) in &[(0.3, 1.1, Complex64::new(-0.5, 0.8)), (2.0, -0.7, Complex64::new(1.0, -2.0))] {
                let lhs = term.eval(x, t * xi, lam * t * t);
                let rhs = term.eval(x, xi, lam) * t.powi(-2 - j as i32);
                assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()), "j = {j}");
            }
        }
    }

    #[test]
    fn parity_reports() {
        let drift = DiffSymbol::constant_coefficients(&[0, 2, 1]).unwrap();
        let r = parity_report(&drift);
        assert!(r.rstar_invariant && r.parity_condition && r.vanishing_predicted);
        assert_eq!(r.vanishing_confirmed, Some(true));

        let potential = DiffSymbol::constant_coefficients(&[3, 0, 1]).unwrap();
        let r = parity_report(&potential);
        assert!(r.rstar_invariant);
        assert_eq!(r.term_parity[2], (2, TermParity::Even));
        assert_eq!(r.term_parity[1], (1, TermParity::Zero));

        let cubic = DiffSymbol::constant_coefficients(&[0, 0, 0, 1]).unwrap();
        let r = parity_report(&cubic);
        assert!(!r.parity_condition && !r.vanishing_predicted);
        assert_eq!(r.vanishing_confirmed, None);
    }

    #[test]
    fn locality() {
        let make = || DiffSymbol::new(4, vec![(4, TrigPoly::constant(c_int(3))), (3, trig(&[(1, 2, 1)])), (0, trig(&[(0, 7, 0)]))]).unwrap();
        assert_eq!(local_zeta_exact(&make()).unwrap(), local_zeta_exact(&make()).unwrap());
    }

    #[test]
    fn float_coefficients_are_exact() {
        let p = TrigPoly::from_f64(&[(0, 0.25, 0.0), (3, 1.5, -0.5)]).unwrap();
        assert_eq!(p.coeff(0), cq(Rational::new(BigInt::from(1), BigInt::from(4)), q(0)));
        assert!(!p.is_real());
        assert!((p.eval(0.0) - Complex64::new(1.75, -0.5)).norm() < 1e-15);
    }
}
