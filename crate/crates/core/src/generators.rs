//! Monotone generator functions on closed bounded intervals.
//!
//! A generator is one entry of a small closed catalog (optionally wrapped in
//! affine maps `c * g + d`) restricted to an [`Interval`]. Every catalog entry
//! carries closed-form first and second derivatives; the numeric inverse is a
//! bracketed bisection that exploits strict monotonicity.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{QamError, Result};
use crate::scalar::Scalar;

/// Absolute slack used for domain membership checks.
pub const DOMAIN_SLACK: f64 = 1e-12;
/// Slack (scaled by `1 + |y|`) accepted by [`Generator::inverse`] outside the range.
pub const RANGE_SLACK: f64 = 1e-10;
/// Iteration cap of the inverse bisection.
pub const INVERSE_MAX_ITER: usize = 200;

/// Closed bounded interval `[lo, hi]` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "(T, T)", into = "(T, T)", bound = "T: Scalar")]
pub struct Interval<T> {
    lo: T,
    hi: T,
}

impl<T: Scalar> Interval<T> {
    pub fn new(lo: T, hi: T) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(QamError::Argument(format!(
                "interval endpoints must be finite, got [{lo}, {hi}]"
            )));
        }
        if lo >= hi {
            return Err(QamError::Argument(format!(
                "interval requires lo < hi, got [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi })
    }

    #[inline]
    pub fn lo(&self) -> T {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> T {
        self.hi
    }

    #[inline]
    pub fn length(&self) -> T {
        self.hi - self.lo
    }

    #[inline]
    pub fn midpoint(&self) -> T {
        self.lo + self.length() / T::lit(2.0)
    }

    /// Membership with absolute slack [`DOMAIN_SLACK`].
    #[inline]
    pub fn contains(&self, x: T) -> bool {
        let slack = T::lit(DOMAIN_SLACK);
        x >= self.lo - slack && x <= self.hi + slack
    }

    pub fn contains_interval(&self, other: &Interval<T>) -> bool {
        self.contains(other.lo) && self.contains(other.hi)
    }

    #[inline]
    pub fn clamp(&self, x: T) -> T {
        x.max(self.lo).min(self.hi)
    }

    /// The `i`-th node of a uniform grid with `cells` cells; node `cells` is exactly `hi`.
    #[inline]
    pub fn node(&self, i: usize, cells: usize) -> T {
        if i >= cells {
            self.hi
        } else {
            self.lo + self.length() * T::from_count(i) / T::from_count(cells)
        }
    }

    /// `cells + 1` uniformly spaced nodes from `lo` to `hi`.
    pub fn grid(&self, cells: usize) -> Vec<T> {
        (0..=cells).map(|i| self.node(i, cells)).collect()
    }
}

impl<T: Scalar> TryFrom<(T, T)> for Interval<T> {
    type Error = QamError;

    fn try_from((lo, hi): (T, T)) -> Result<Self> {
        Interval::new(lo, hi)
    }
}

impl<T: Scalar> From<Interval<T>> for (T, T) {
    fn from(iv: Interval<T>) -> Self {
        (iv.lo, iv.hi)
    }
}

impl<T: Scalar> fmt::Display for Interval<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl<T: Scalar> FromStr for Interval<T> {
    type Err = QamError;

    /// Parses `lo,hi`; either endpoint may use a `pi` token such as `2pi`.
    fn from_str(s: &str) -> Result<Self> {
        let (lo, hi) = s
            .split_once(',')
            .ok_or_else(|| QamError::Parse(format!("interval `{s}` is not `lo,hi`")))?;
        Interval::new(parse_real(lo)?, parse_real(hi)?)
    }
}

/// Parses a real literal. Accepts plain numbers and multiples of pi written
/// `pi`, `-pi`, `2pi`, `0.5pi` or `2*pi`.
pub fn parse_real<T: Scalar>(s: &str) -> Result<T> {
    let s = s.trim();
    let err = || QamError::Parse(format!("`{s}` is not a real number"));
    if let Some(coef) = s.strip_suffix("pi") {
        let coef = coef.trim().trim_end_matches('*').trim();
        let c = match coef {
            "" | "+" => 1.0,
            "-" => -1.0,
            c => c.parse::<f64>().map_err(|_| err())?,
        };
        return Ok(T::lit(c) * T::PI());
    }
    let v: f64 = s.parse().map_err(|_| err())?;
    if !v.is_finite() {
        return Err(err());
    }
    Ok(T::lit(v))
}

/// Catalog of generator shapes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub enum GeneratorKind<T> {
    /// `x`
    Identity,
    /// `x^p`
    Power(T),
    /// `ln x`
    Log,
    /// `exp(c x)`
    Exp(T),
    /// `x + sin(n x) / n^2`, `n >= 2`
    Sine(u32),
    /// `scale * inner(x) + shift`
    Affine {
        scale: T,
        shift: T,
        inner: Box<GeneratorKind<T>>,
    },
}

impl<T: Scalar> GeneratorKind<T> {
    pub fn affine(scale: T, shift: T, inner: GeneratorKind<T>) -> Self {
        GeneratorKind::Affine {
            scale,
            shift,
            inner: Box::new(inner),
        }
    }

    /// Unchecked evaluation of the catalog rule.
    pub fn value(&self, x: T) -> T {
        match self {
            GeneratorKind::Identity => x,
            GeneratorKind::Power(p) => x.powf(*p),
            GeneratorKind::Log => x.ln(),
            GeneratorKind::Exp(c) => (*c * x).exp(),
            GeneratorKind::Sine(n) => {
                let n = T::from_u32(*n).unwrap();
                x + (n * x).sin() / (n * n)
            }
            GeneratorKind::Affine { scale, shift, inner } => *scale * inner.value(x) + *shift,
        }
    }

    pub fn first_derivative(&self, x: T) -> T {
        match self {
            GeneratorKind::Identity => T::one(),
            GeneratorKind::Power(p) => *p * x.powf(*p - T::one()),
            GeneratorKind::Log => x.recip(),
            GeneratorKind::Exp(c) => *c * (*c * x).exp(),
            GeneratorKind::Sine(n) => {
                let n = T::from_u32(*n).unwrap();
                T::one() + (n * x).cos() / n
            }
            GeneratorKind::Affine { scale, inner, .. } => *scale * inner.first_derivative(x),
        }
    }

    pub fn second_derivative(&self, x: T) -> T {
        match self {
            GeneratorKind::Identity => T::zero(),
            GeneratorKind::Power(p) => *p * (*p - T::one()) * x.powf(*p - T::lit(2.0)),
            GeneratorKind::Log => -(x * x).recip(),
            GeneratorKind::Exp(c) => *c * *c * (*c * x).exp(),
            GeneratorKind::Sine(n) => {
                let n = T::from_u32(*n).unwrap();
                -(n * x).sin()
            }
            GeneratorKind::Affine { scale, inner, .. } => *scale * inner.second_derivative(x),
        }
    }

    /// Closed form of `f''/f'`. Affine wrapping leaves it unchanged.
    pub fn arrow_pratt(&self, x: T) -> T {
        match self {
            GeneratorKind::Identity => T::zero(),
            GeneratorKind::Power(p) => (*p - T::one()) / x,
            GeneratorKind::Log => -x.recip(),
            GeneratorKind::Exp(c) => *c,
            GeneratorKind::Sine(n) => {
                let n = T::from_u32(*n).unwrap();
                -n * (n * x).sin() / (n + (n * x).cos())
            }
            GeneratorKind::Affine { inner, .. } => inner.arrow_pratt(x),
        }
    }

    fn validate(&self, domain: &Interval<T>) -> Result<()> {
        match self {
            GeneratorKind::Identity => Ok(()),
            GeneratorKind::Sine(n) => {
                if *n < 2 {
                    Err(QamError::Argument(format!("sine generator needs n >= 2, got {n}")))
                } else {
                    Ok(())
                }
            }
            GeneratorKind::Power(p) => {
                if !p.is_finite() || p.is_zero() {
                    return Err(QamError::Argument(format!("power exponent must be finite and nonzero, got {p}")));
                }
                let integral = p.fract().is_zero();
                let even = integral && (*p / T::lit(2.0)).fract().is_zero();
                if (!integral || *p < T::one()) && domain.lo() <= T::zero() {
                    return Err(QamError::Argument(format!(
                        "power:{p} requires a domain with lo > 0, got {domain}"
                    )));
                }
                if even && domain.lo() < T::zero() {
                    return Err(QamError::Argument(format!(
                        "power:{p} is not monotone on {domain}"
                    )));
                }
                Ok(())
            }
            GeneratorKind::Log => {
                if domain.lo() <= T::zero() {
                    Err(QamError::Argument(format!("log requires a domain with lo > 0, got {domain}")))
                } else {
                    Ok(())
                }
            }
            GeneratorKind::Exp(c) => {
                if !c.is_finite() || c.is_zero() {
                    Err(QamError::Argument(format!("exp rate must be finite and nonzero, got {c}")))
                } else {
                    Ok(())
                }
            }
            GeneratorKind::Affine { scale, shift, inner } => {
                if !scale.is_finite() || scale.is_zero() || !shift.is_finite() {
                    return Err(QamError::Argument(format!(
                        "affine wrap needs finite c != 0 and finite d, got c = {scale}, d = {shift}"
                    )));
                }
                inner.validate(domain)
            }
        }
    }
}

impl<T: Scalar> fmt::Display for GeneratorKind<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorKind::Identity => write!(f, "identity"),
            GeneratorKind::Power(p) => write!(f, "power:{p}"),
            GeneratorKind::Log => write!(f, "log"),
            GeneratorKind::Exp(c) => write!(f, "exp:{c}"),
            GeneratorKind::Sine(n) => write!(f, "sine:{n}"),
            GeneratorKind::Affine { scale, shift, inner } => write!(f, "affine:{scale},{shift}:{inner}"),
        }
    }
}

impl<T: Scalar> FromStr for GeneratorKind<T> {
    type Err = QamError;

    /// Grammar: `identity | power:P | log | exp[:C] | sine:N | affine:C,D:<spec>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, rest) = match s.split_once(':') {
            Some((h, r)) => (h.trim(), Some(r.trim())),
            None => (s, None),
        };
        let missing = |what: &str| QamError::Parse(format!("`{s}`: {head} needs {what}"));
        match (head, rest) {
            ("identity" | "id", None) => Ok(GeneratorKind::Identity),
            ("log" | "ln", None) => Ok(GeneratorKind::Log),
            ("exp", None) => Ok(GeneratorKind::Exp(T::one())),
            ("exp", Some(c)) => Ok(GeneratorKind::Exp(parse_real(c)?)),
            ("power" | "pow", Some(p)) => Ok(GeneratorKind::Power(parse_real(p)?)),
            ("power" | "pow", None) => Err(missing("an exponent")),
            ("sine" | "sin", Some(n)) => n
                .parse::<u32>()
                .map(GeneratorKind::Sine)
                .map_err(|_| QamError::Parse(format!("`{s}`: sine needs an integer n"))),
            ("sine" | "sin", None) => Err(missing("an integer n")),
            ("affine", Some(r)) => {
                let (coefs, inner) = r
                    .split_once(':')
                    .ok_or_else(|| missing("`c,d:<inner>`"))?;
                let (c, d) = coefs.split_once(',').ok_or_else(|| missing("`c,d`"))?;
                Ok(GeneratorKind::affine(parse_real(c)?, parse_real(d)?, inner.parse()?))
            }
            ("affine", None) => Err(missing("`c,d:<inner>`")),
            _ => Err(QamError::Parse(format!("unknown generator `{s}`"))),
        }
    }
}

/// A catalog generator bound to its domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Generator<T> {
    kind: GeneratorKind<T>,
    domain: Interval<T>,
    increasing: bool,
}

impl<T: Scalar> Generator<T> {
    pub fn new(kind: GeneratorKind<T>, domain: Interval<T>) -> Result<Self> {
        kind.validate(&domain)?;
        let (a, b) = (kind.value(domain.lo()), kind.value(domain.hi()));
        if !a.is_finite() || !b.is_finite() || a == b {
            return Err(QamError::Argument(format!(
                "{kind} is not finite and strictly monotone on {domain}"
            )));
        }
        Ok(Self {
            increasing: b > a,
            kind,
            domain,
        })
    }

    /// Parses a compact spec such as `power:2` or `affine:3,-1:log`.
    pub fn parse(spec: &str, domain: Interval<T>) -> Result<Self> {
        Self::new(spec.parse()?, domain)
    }

    pub fn identity(domain: Interval<T>) -> Result<Self> {
        Self::new(GeneratorKind::Identity, domain)
    }

    pub fn power(p: T, domain: Interval<T>) -> Result<Self> {
        Self::new(GeneratorKind::Power(p), domain)
    }

    pub fn log(domain: Interval<T>) -> Result<Self> {
        Self::new(GeneratorKind::Log, domain)
    }

    pub fn exp(c: T, domain: Interval<T>) -> Result<Self> {
        Self::new(GeneratorKind::Exp(c), domain)
    }

    pub fn sine(n: u32, domain: Interval<T>) -> Result<Self> {
        Self::new(GeneratorKind::Sine(n), domain)
    }

    /// `scale * self + shift` on the same domain.
    pub fn affine_wrap(&self, scale: T, shift: T) -> Result<Self> {
        Self::new(GeneratorKind::affine(scale, shift, self.kind.clone()), self.domain)
    }

    /// Same rule on another domain.
    pub fn with_domain(&self, domain: Interval<T>) -> Result<Self> {
        Self::new(self.kind.clone(), domain)
    }

    pub fn kind(&self) -> &GeneratorKind<T> {
        &self.kind
    }

    pub fn domain(&self) -> Interval<T> {
        self.domain
    }

    pub fn is_increasing(&self) -> bool {
        self.increasing
    }

    /// Evaluation without the domain check, for hot loops over known-good grids.
    #[inline]
    pub fn value(&self, x: T) -> T {
        self.kind.value(x)
    }

    pub fn eval(&self, x: T) -> Result<T> {
        self.check_domain(x)?;
        Ok(self.kind.value(x))
    }

    /// Closed-form derivative of order 1 or 2.
    pub fn deriv(&self, x: T, order: u32) -> Result<T> {
        self.check_order(order)?;
        self.check_domain(x)?;
        let v = match order {
            1 => self.kind.first_derivative(x),
            _ => self.kind.second_derivative(x),
        };
        finite_or(v, || format!("derivative of {} at {x}", self.kind))
    }

    /// Central finite-difference derivative of order 1 or 2, used as a cross-check
    /// on the closed forms.
    pub fn finite_difference(&self, x: T, order: u32) -> Result<T> {
        self.check_order(order)?;
        self.check_domain(x)?;
        let v = central_difference(|t| self.kind.value(t), x, order);
        finite_or(v, || format!("finite difference of {} at {x}", self.kind))
    }

    /// Solves `f(x) = y` on the domain by bisection.
    ///
    /// Values within `1e-10 (1 + |y|)` outside the range are clamped to the
    /// nearest endpoint. Bisection runs until the bracket collapses to adjacent
    /// floats (at most [`INVERSE_MAX_ITER`] halvings) and returns the bracket end
    /// with the smaller residual.
    pub fn inverse(&self, y: T) -> Result<T> {
        let (lo, hi) = (self.domain.lo(), self.domain.hi());
        let (f_lo, f_hi) = (self.kind.value(lo), self.kind.value(hi));
        let (y_min, y_max, x_at_min, x_at_max) = if self.increasing {
            (f_lo, f_hi, lo, hi)
        } else {
            (f_hi, f_lo, hi, lo)
        };
        let slack = T::lit(RANGE_SLACK) * (T::one() + y.abs());
        if !y.is_finite() || y < y_min - slack || y > y_max + slack {
            return Err(QamError::Range(format!(
                "{y} is outside the range [{y_min}, {y_max}] of {} on {}",
                self.kind, self.domain
            )));
        }
        if y <= y_min {
            return Ok(x_at_min);
        }
        if y >= y_max {
            return Ok(x_at_max);
        }
        // Orient so that residual(a) < 0 < residual(b).
        let sign = if self.increasing { T::one() } else { -T::one() };
        let residual = |x: T| sign * (self.kind.value(x) - y);
        let (mut a, mut b) = (lo, hi);
        for _ in 0..INVERSE_MAX_ITER {
            let mid = a + (b - a) / T::lit(2.0);
            if mid <= a || mid >= b {
                break;
            }
            let r = residual(mid);
            if r.is_zero() {
                return Ok(mid);
            }
            if r < T::zero() {
                a = mid;
            } else {
                b = mid;
            }
        }
        let x = if residual(a).abs() <= residual(b).abs() { a } else { b };
        Ok(self.domain.clamp(x))
    }

    fn check_domain(&self, x: T) -> Result<()> {
        if self.domain.contains(x) {
            Ok(())
        } else {
            Err(QamError::Range(format!("{x} is outside the domain {}", self.domain)))
        }
    }

    fn check_order(&self, order: u32) -> Result<()> {
        if order == 1 || order == 2 {
            Ok(())
        } else {
            Err(QamError::Argument(format!("derivative order must be 1 or 2, got {order}")))
        }
    }
}

impl<T: Scalar> fmt::Display for Generator<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on {}", self.kind, self.domain)
    }
}

/// Central difference of order 1 (step `max(1e-6, sqrt(eps)) * max(1, |x|)`)
/// or order 2 (3-point stencil, step `max(1e-4, eps^(1/4)) * max(1, |x|)`).
pub fn central_difference<T: Scalar>(f: impl Fn(T) -> T, x: T, order: u32) -> T {
    let two = T::lit(2.0);
    let scale = T::one().max(x.abs());
    if order == 1 {
        let h = T::lit(1e-6).max(T::epsilon().sqrt()) * scale;
        (f(x + h) - f(x - h)) / (two * h)
    } else {
        let h = T::lit(1e-4).max(T::epsilon().sqrt().sqrt()) * scale;
        (f(x + h) - two * f(x) + f(x - h)) / (h * h)
    }
}

fn finite_or<T: Scalar>(v: T, what: impl FnOnce() -> String) -> Result<T> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(QamError::Evaluation(format!("{} is not finite", what())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn iv(lo: f64, hi: f64) -> Interval<f64> {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn eval_examples() {
        let g = Generator::identity(iv(0.0, 10.0)).unwrap();
        assert_eq!(g.eval(3.0).unwrap(), 3.0);
        let g = Generator::power(2.0, iv(1.0, 10.0)).unwrap();
        assert_eq!(g.eval(5.0).unwrap(), 25.0);
        let g = Generator::sine(2, iv(0.0, 2.0 * PI)).unwrap();
        assert_eq!(g.eval(0.0).unwrap(), 0.0);
    }

    #[test]
    fn eval_outside_domain_is_range_error() {
        let g = Generator::power(2.0, iv(1.0, 10.0)).unwrap();
        assert!(matches!(g.eval(10.5), Err(QamError::Range(_))));
        assert!(g.eval(10.0 + 1e-13).is_ok());
    }

    #[test]
    fn deriv_examples() {
        let g = Generator::exp(1.0, iv(-1.0, 1.0)).unwrap();
        assert_eq!(g.deriv(0.0, 1).unwrap(), 1.0);
        let g = Generator::power(3.0, iv(0.0, 4.0)).unwrap();
        assert_eq!(g.deriv(2.0, 2).unwrap(), 12.0);
        let g = Generator::sine(2, iv(0.0, 2.0 * PI)).unwrap();
        assert_eq!(g.deriv(0.0, 1).unwrap(), 1.5);
        assert!((g.finite_difference(0.0, 1).unwrap() - 1.5).abs() < 1e-9);
        assert!(matches!(g.deriv(1.0, 3), Err(QamError::Argument(_))));
    }

    #[test]
    fn inverse_examples() {
        let g = Generator::power(2.0, iv(1.0, 10.0)).unwrap();
        assert_eq!(g.inverse(25.0).unwrap(), 5.0);
        let g = Generator::identity(iv(0.0, 4.0)).unwrap();
        assert_eq!(g.inverse(PI).unwrap(), PI);

        let g = Generator::sine(2, iv(0.0, 2.0 * PI)).unwrap();
        let x = g.inverse(1.0).unwrap();
        // independent bisection oracle on f(x) - 1
        let (mut a, mut b) = (0.0_f64, 2.0 * PI);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if m + (2.0 * m).sin() / 4.0 < 1.0 {
                a = m
            } else {
                b = m
            }
        }
        assert!((x - a).abs() < 1e-12);
        assert!((g.eval(x).unwrap() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn inverse_rejects_values_outside_range() {
        let g = Generator::power(2.0, iv(1.0, 10.0)).unwrap();
        assert!(matches!(g.inverse(101.0), Err(QamError::Range(_))));
        assert_eq!(g.inverse(100.0 + 1e-9).unwrap(), 10.0);
        assert_eq!(g.inverse(1.0 - 1e-11).unwrap(), 1.0);
    }

    #[test]
    fn inverse_of_decreasing_generator() {
        let g = Generator::power(-1.0, iv(0.5, 4.0)).unwrap();
        assert!(!g.is_increasing());
        assert!((g.inverse(0.5).unwrap() - 2.0).abs() < 1e-15);
        let g = Generator::log(iv(1.0, 5.0)).unwrap().affine_wrap(-3.0, 2.0).unwrap();
        assert!((g.inverse(2.0 - 3.0 * 2f64.ln()).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn domain_restrictions() {
        assert!(Generator::power(0.5, iv(0.0, 1.0)).is_err());
        assert!(Generator::power(-1.0, iv(-1.0, 1.0)).is_err());
        assert!(Generator::power(2.0, iv(-1.0, 1.0)).is_err());
        assert!(Generator::power(2.0, iv(0.0, 1.0)).is_ok());
        assert!(Generator::power(3.0, iv(-1.0, 1.0)).is_ok());
        assert!(Generator::power(0.0, iv(1.0, 2.0)).is_err());
        assert!(Generator::log(iv(0.0, 1.0)).is_err());
        assert!(Generator::exp(0.0, iv(0.0, 1.0)).is_err());
        assert!(Generator::sine(1, iv(0.0, 1.0)).is_err());
        let id = Generator::identity(iv(0.0, 1.0)).unwrap();
        assert!(id.affine_wrap(0.0, 1.0).is_err());
        assert!(Interval::new(1.0, 1.0).is_err());
        assert!(Interval::new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn affine_wrap_evaluates_scaled_inner() {
        let g = Generator::log(iv(1.0, 8.0)).unwrap().affine_wrap(3.0, -1.0).unwrap();
        assert!((g.eval(4.0).unwrap() - (3.0 * 4f64.ln() - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn spec_text_round_trip() {
        for spec in ["identity", "power:2", "power:-0.5", "log", "exp:1", "sine:4", "affine:3,-1:log", "affine:2,0:affine:-1,5:sine:3"] {
            let k: GeneratorKind<f64> = spec.parse().unwrap();
            assert_eq!(k.to_string(), spec);
        }
        assert_eq!("exp".parse::<GeneratorKind<f64>>().unwrap(), GeneratorKind::Exp(1.0));
        assert!("power".parse::<GeneratorKind<f64>>().is_err());
        assert!("sine:x".parse::<GeneratorKind<f64>>().is_err());
        assert!("cosh".parse::<GeneratorKind<f64>>().is_err());
        assert!("affine:3:log".parse::<GeneratorKind<f64>>().is_err());
    }

    #[test]
    fn interval_parsing_accepts_pi_tokens() {
        let u: Interval<f64> = "0,2pi".parse().unwrap();
        assert_eq!(u.hi(), 2.0 * PI);
        let u: Interval<f64> = "-pi, pi".parse().unwrap();
        assert_eq!(u.lo(), -PI);
        let u: Interval<f64> = "0.5,8".parse().unwrap();
        assert_eq!((u.lo(), u.hi()), (0.5, 8.0));
        assert!("1".parse::<Interval<f64>>().is_err());
        assert!("2,1".parse::<Interval<f64>>().is_err());
    }

    #[test]
    fn grid_ends_exactly_at_hi() {
        let u = iv(0.0, 2.0 * PI);
        let g = u.grid(7);
        assert_eq!(g.len(), 8);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[7], 2.0 * PI);
    }

    #[test]
    fn works_in_single_precision() {
        let u = Interval::new(1.0_f32, 10.0).unwrap();
        let g = Generator::power(2.0_f32, u).unwrap();
        assert!((g.inverse(25.0).unwrap() - 5.0).abs() < 1e-6);
    }
}
