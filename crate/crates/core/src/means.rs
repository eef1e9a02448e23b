//! Weighted samples, quasi-arithmetic means and the power-mean reference.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{QamError, Result};
use crate::generators::{parse_real, Generator, Interval};
use crate::scalar::{neumaier_sum, Scalar};

/// Weight sums within this distance of 1 are renormalized; larger deviations are rejected.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-6;

/// Points `a` with positive weights `w`, `sum(w) = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct WeightedSample<T> {
    points: Vec<T>,
    weights: Vec<T>,
}

impl<T: Scalar> WeightedSample<T> {
    /// Validates the weights and divides them by their sum.
    pub fn new(points: Vec<T>, weights: Vec<T>) -> Result<Self> {
        if points.is_empty() {
            return Err(QamError::Argument("sample needs at least one point".into()));
        }
        if points.len() != weights.len() {
            return Err(QamError::Argument(format!(
                "{} points but {} weights",
                points.len(),
                weights.len()
            )));
        }
        if let Some(a) = points.iter().find(|a| !a.is_finite()) {
            return Err(QamError::Argument(format!("non-finite point {a}")));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > T::zero())) {
            return Err(QamError::Argument(format!("weights must be positive, got {w}")));
        }
        let total = neumaier_sum(weights.iter().copied());
        if (total - T::one()).abs() > T::lit(WEIGHT_SUM_TOLERANCE) {
            return Err(QamError::Argument(format!("weights sum to {total}, expected 1")));
        }
        let weights = if total == T::one() {
            weights
        } else {
            weights.into_iter().map(|w| w / total).collect()
        };
        Ok(Self { points, weights })
    }

    /// Equal weights `1/n`.
    pub fn uniform(points: Vec<T>) -> Result<Self> {
        let n = T::from_count(points.len().max(1));
        let weights = vec![T::one() / n; points.len()];
        Self::new(points, weights)
    }

    pub fn points(&self) -> &[T] {
        &self.points
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn min_point(&self) -> T {
        self.points.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn max_point(&self) -> T {
        self.points.iter().copied().fold(T::neg_infinity(), T::max)
    }

    /// Errors unless every point lies in `domain`.
    pub fn check_within(&self, domain: &Interval<T>) -> Result<()> {
        match self.points.iter().find(|a| !domain.contains(**a)) {
            Some(a) => Err(QamError::Range(format!("point {a} is outside {domain}"))),
            None => Ok(()),
        }
    }

    /// Parses `a=1,3,5 w=0.2,0.3,0.5`; uniform weights when `w` is omitted.
    pub fn parse(text: &str) -> Result<Self> {
        let mut points = None;
        let mut weights = None;
        for field in text.split_whitespace() {
            let (key, values) = field
                .split_once('=')
                .ok_or_else(|| QamError::Parse(format!("expected key=values, got `{field}`")))?;
            let values = parse_list(values)?;
            match key {
                "a" => points = Some(values),
                "w" => weights = Some(values),
                _ => return Err(QamError::Parse(format!("unknown sample field `{key}`"))),
            }
        }
        let points = points.ok_or_else(|| QamError::Parse("sample needs `a=...`".into()))?;
        match weights {
            Some(w) => Self::new(points, w),
            None => Self::uniform(points),
        }
    }
}

impl<T: Scalar> FromStr for WeightedSample<T> {
    type Err = QamError;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl<T: Scalar> fmt::Display for WeightedSample<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[T]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "a={} w={}", join(&self.points), join(&self.weights))
    }
}

/// Comma-separated reals (pi tokens allowed).
pub fn parse_list<T: Scalar>(s: &str) -> Result<Vec<T>> {
    s.split(',').map(parse_real).collect()
}

/// `f^{-1}(sum w_i f(a_i))`, clamped to `[min a, max a]`.
pub fn qa_mean<T: Scalar>(gen: &Generator<T>, sample: &WeightedSample<T>) -> Result<T> {
    sample.check_within(&gen.domain())?;
    Ok(qa_mean_unchecked(gen, sample.points(), sample.weights()))
}

/// [`qa_mean`] without validation. Points must lie in the domain and weights
/// must be positive and sum to one.
pub fn qa_mean_unchecked<T: Scalar>(gen: &Generator<T>, points: &[T], weights: &[T]) -> T {
    let (lo, hi) = points
        .iter()
        .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &a| (lo.min(a), hi.max(a)));
    if lo == hi {
        return lo;
    }
    let y = neumaier_sum(points.iter().zip(weights).map(|(&a, &w)| w * gen.value(a)));
    // The weighted sum always lies in the range, so the inverse cannot fail
    // beyond rounding; fall back to clamping the argument by hand.
    let x = gen.inverse(y).unwrap_or_else(|_| {
        let (f_lo, f_hi) = (gen.value(lo), gen.value(hi));
        if (y - f_lo).abs() < (y - f_hi).abs() {
            lo
        } else {
            hi
        }
    });
    x.max(lo).min(hi)
}

/// Weighted power mean `(sum w_i a_i^p)^(1/p)`; geometric mean at `p = 0`.
pub fn power_mean<T: Scalar>(p: T, sample: &WeightedSample<T>) -> Result<T> {
    if let Some(a) = sample.points().iter().find(|a| **a <= T::zero()) {
        return Err(QamError::Range(format!("power mean needs positive points, got {a}")));
    }
    let terms = sample.points().iter().zip(sample.weights());
    let m = if p.is_zero() {
        neumaier_sum(terms.map(|(&a, &w)| w * a.ln())).exp()
    } else {
        neumaier_sum(terms.map(|(&a, &w)| w * a.powf(p))).powf(p.recip())
    };
    Ok(m.max(sample.min_point()).min(sample.max_point()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::GeneratorKind;
    use proptest::prelude::*;

    fn iv(lo: f64, hi: f64) -> Interval<f64> {
        Interval::new(lo, hi).unwrap()
    }

    fn sample(a: &[f64], w: &[f64]) -> WeightedSample<f64> {
        WeightedSample::new(a.to_vec(), w.to_vec()).unwrap()
    }

    #[test]
    fn qa_mean_examples() {
        let s = sample(&[1.0, 3.0], &[0.5, 0.5]);
        assert_eq!(qa_mean(&Generator::identity(iv(0.0, 4.0)).unwrap(), &s).unwrap(), 2.0);
        let s = sample(&[1.0, 4.0], &[0.5, 0.5]);
        let m = qa_mean(&Generator::log(iv(0.5, 8.0)).unwrap(), &s).unwrap();
        assert!((m - 2.0).abs() < 1e-15);
        let s = sample(&[1.0, 7.0], &[0.5, 0.5]);
        let m = qa_mean(&Generator::power(2.0, iv(1.0, 10.0)).unwrap(), &s).unwrap();
        assert!((m - 5.0).abs() < 1e-15);
    }

    #[test]
    fn power_mean_examples() {
        assert_eq!(power_mean(1.0, &sample(&[2.0, 4.0], &[0.5, 0.5])).unwrap(), 3.0);
        assert!((power_mean(-1.0, &sample(&[1.0, 3.0], &[0.5, 0.5])).unwrap() - 1.5).abs() < 1e-15);
        assert!((power_mean(0.0, &sample(&[1.0, 4.0], &[0.5, 0.5])).unwrap() - 2.0).abs() < 1e-15);
        assert!(matches!(power_mean(2.0, &sample(&[0.0, 4.0], &[0.5, 0.5])), Err(QamError::Range(_))));
    }

    #[test]
    fn point_outside_domain_is_range_error() {
        let g = Generator::log(iv(1.0, 2.0)).unwrap();
        let s = sample(&[1.5, 3.0], &[0.5, 0.5]);
        assert!(matches!(qa_mean(&g, &s), Err(QamError::Range(_))));
    }

    #[test]
    fn single_point_and_constant_samples() {
        let g = Generator::sine(3, iv(0.0, 6.0)).unwrap();
        assert_eq!(qa_mean(&g, &WeightedSample::uniform(vec![2.5]).unwrap()).unwrap(), 2.5);
        let c = 1.234_567_890_123;
        let s = sample(&[c, c, c], &[0.2, 0.3, 0.5]);
        assert_eq!(qa_mean(&g, &s).unwrap(), c);
    }

    #[test]
    fn weight_validation() {
        assert!(WeightedSample::new(vec![1.0, 2.0], vec![0.5, 0.5 + 1e-7]).is_ok());
        let s = WeightedSample::new(vec![1.0, 2.0], vec![0.5, 0.5 + 1e-7]).unwrap();
        assert!((s.weights().iter().sum::<f64>() - 1.0).abs() <= 1e-15);
        assert!(WeightedSample::new(vec![1.0, 2.0], vec![0.5, 0.6]).is_err());
        assert!(WeightedSample::new(vec![1.0, 2.0], vec![1.0, 0.0]).is_err());
        assert!(WeightedSample::new(vec![1.0, 2.0], vec![1.0]).is_err());
        assert!(WeightedSample::<f64>::new(vec![], vec![]).is_err());
    }

    #[test]
    fn sample_text_form() {
        let s: WeightedSample<f64> = "a=1,3,5 w=0.2,0.3,0.5".parse().unwrap();
        assert_eq!(s.points(), &[1.0, 3.0, 5.0]);
        assert_eq!(s.weights(), &[0.2, 0.3, 0.5]);
        let s: WeightedSample<f64> = "a=1,2,3,4".parse().unwrap();
        assert_eq!(s.weights(), &[0.25; 4]);
        assert!("w=1".parse::<WeightedSample<f64>>().is_err());
        assert!("a=1,x".parse::<WeightedSample<f64>>().is_err());
        assert!("b=1".parse::<WeightedSample<f64>>().is_err());
    }

    fn catalog(u: Interval<f64>) -> Vec<Generator<f64>> {
        let kinds = [
            "identity", "power:2", "power:-1", "power:0.5", "power:3", "log", "exp:1", "exp:-0.7",
            "sine:2", "sine:5", "affine:-2,1:log", "affine:0.5,3:power:-2",
        ];
        kinds.iter().map(|k| Generator::parse(k, u).unwrap()).collect()
    }

    fn sample_strategy() -> impl Strategy<Value = WeightedSample<f64>> {
        (1usize..=8)
            .prop_flat_map(|n| {
                (
                    prop::collection::vec(0.5f64..4.0, n),
                    prop::collection::vec(0.01f64..1.0, n),
                )
            })
            .prop_map(|(a, w)| {
                let total: f64 = w.iter().sum();
                WeightedSample::new(a, w.into_iter().map(|x| x / total).collect()).unwrap()
            })
    }

    proptest! {
        #[test]
        fn internality(s in sample_strategy()) {
            for g in catalog(iv(0.5, 4.0)) {
                let m = qa_mean(&g, &s).unwrap();
                prop_assert!(s.min_point() <= m && m <= s.max_point(), "{g}: {m}");
            }
        }

        #[test]
        fn affine_invariance(s in sample_strategy()) {
            for g in catalog(iv(0.5, 4.0)) {
                let m = qa_mean(&g, &s).unwrap();
                for c in [-3.0, -1.0, 0.5, 2.0] {
                    for d in [-1.0, 0.0, 7.0] {
                        let h = g.affine_wrap(c, d).unwrap();
                        let mh = qa_mean(&h, &s).unwrap();
                        prop_assert!((m - mh).abs() <= 1e-9, "{h}: {m} vs {mh}");
                    }
                }
            }
        }

        #[test]
        fn power_generator_matches_power_mean(s in sample_strategy()) {
            let u = iv(0.5, 4.0);
            for p in [-2.0, -1.0, 0.5, 1.0, 2.0, 3.0] {
                let g = Generator::new(GeneratorKind::Power(p), u).unwrap();
                let m = qa_mean(&g, &s).unwrap();
                prop_assert!((m - power_mean(p, &s).unwrap()).abs() <= 1e-10);
            }
            let m = qa_mean(&Generator::log(u).unwrap(), &s).unwrap();
            prop_assert!((m - power_mean(0.0, &s).unwrap()).abs() <= 1e-10);
        }

        #[test]
        fn monotone_in_each_point(s in sample_strategy(), i in 0usize..8, bump in 0.0f64..1.0) {
            let i = i % s.len();
            let mut a = s.points().to_vec();
            a[i] = (a[i] + bump).min(4.0);
            let t = WeightedSample::new(a, s.weights().to_vec()).unwrap();
            for g in catalog(iv(0.5, 4.0)) {
                prop_assert!(qa_mean(&g, &t).unwrap() >= qa_mean(&g, &s).unwrap() - 1e-12);
            }
        }
    }
}
