//! The three-point operator `B_f(x, y, z) = (f(x) - f(y)) / (f(x) - f(z))` and
//! the Arrow-Pratt operator `A_f = f'' / f'`.

use serde::{Deserialize, Serialize};

use crate::error::{QamError, Result};
use crate::generators::Generator;
use crate::means::{qa_mean, WeightedSample};
use crate::scalar::{neumaier_sum, Scalar};

/// Minimum separation `|x - z|` (absolute).
pub const DEGENERACY_THRESHOLD: f64 = 1e-12;
/// `|f'|` below this makes `A_f` undefined.
pub const VANISHING_DERIVATIVE: f64 = 1e-12;

/// A point `(x, y, z)` with `x != z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct DeltaPoint<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Scalar> DeltaPoint<T> {
    pub fn new(x: T, y: T, z: T) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(QamError::Argument(format!("non-finite point ({x}, {y}, {z})")));
        }
        if (x - z).abs() < T::lit(DEGENERACY_THRESHOLD) {
            return Err(QamError::DegeneratePoint(format!("x = {x} and z = {z} coincide")));
        }
        Ok(Self { x, y, z })
    }

    /// Membership in `{|x - z| >= alpha}`.
    pub fn in_delta_alpha(&self, alpha: T) -> bool {
        (self.x - self.z).abs() >= alpha
    }

    /// `(z, y, x)`.
    pub fn dual(&self) -> Self {
        Self {
            x: self.z,
            y: self.y,
            z: self.x,
        }
    }
}

/// Evaluates `B_f` at a validated point.
pub fn pales_b<T: Scalar>(gen: &Generator<T>, p: &DeltaPoint<T>) -> Result<T> {
    let dom = gen.domain();
    for c in [p.x, p.y, p.z] {
        if !dom.contains(c) {
            return Err(QamError::Range(format!("{c} is outside the domain {dom}")));
        }
    }
    Ok(pales_b_values(gen.value(p.x), gen.value(p.y), gen.value(p.z)))
}

/// `B` from precomputed generator values `f(x), f(y), f(z)`.
#[inline]
pub fn pales_b_values<T: Scalar>(fx: T, fy: T, fz: T) -> T {
    (fx - fy) / (fx - fz)
}

/// `A_f(x) = f''(x) / f'(x)` from the closed forms.
pub fn arrow_pratt<T: Scalar>(gen: &Generator<T>, x: T) -> Result<T> {
    let d1 = gen.deriv(x, 1)?;
    if d1.abs() < T::lit(VANISHING_DERIVATIVE) {
        return Err(QamError::VanishingDerivative(x.to_f64_lossy()));
    }
    let a = gen.kind().arrow_pratt(x);
    if a.is_finite() {
        Ok(a)
    } else {
        Err(QamError::Evaluation(format!("A_f({x}) is not finite for {}", gen.kind())))
    }
}

/// `A_f(x)` from finite-difference derivatives; used to cross-check the closed forms.
pub fn arrow_pratt_numeric<T: Scalar>(gen: &Generator<T>, x: T) -> Result<T> {
    let d1 = gen.finite_difference(x, 1)?;
    if d1.abs() < T::lit(VANISHING_DERIVATIVE) {
        return Err(QamError::VanishingDerivative(x.to_f64_lossy()));
    }
    Ok(gen.finite_difference(x, 2)? / d1)
}

/// `sum w_i B_f(M, a_i, z)` with `M` the quasi-arithmetic mean of the sample.
/// Vanishes identically in exact arithmetic.
pub fn weighted_b_sum<T: Scalar>(gen: &Generator<T>, sample: &WeightedSample<T>, z: T) -> Result<T> {
    if !gen.domain().contains(z) {
        return Err(QamError::Range(format!("z = {z} is outside {}", gen.domain())));
    }
    let m = qa_mean(gen, sample)?;
    if (m - z).abs() < T::lit(DEGENERACY_THRESHOLD) {
        return Err(QamError::DegeneratePoint(format!("z = {z} equals the mean {m}")));
    }
    let (fm, fz) = (gen.value(m), gen.value(z));
    Ok(neumaier_sum(
        sample
            .points()
            .iter()
            .zip(sample.weights())
            .map(|(&a, &w)| w * pales_b_values(fm, gen.value(a), fz)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::Interval;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn iv(lo: f64, hi: f64) -> Interval<f64> {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn pales_b_examples() {
        let id = Generator::identity(iv(0.0, 3.0)).unwrap();
        assert_eq!(pales_b(&id, &DeltaPoint::new(2.0, 1.0, 0.0).unwrap()).unwrap(), 0.5);
        let g = Generator::sine(3, iv(0.0, 3.0)).unwrap();
        assert_eq!(pales_b(&g, &DeltaPoint::new(1.3, 1.3, 0.2).unwrap()).unwrap(), 0.0);
        let lg = Generator::log(iv(0.5, 8.0)).unwrap();
        let b = pales_b(&lg, &DeltaPoint::new(4.0, 2.0, 1.0).unwrap()).unwrap();
        assert!((b - 0.5).abs() < 1e-15);
    }

    #[test]
    fn degenerate_points_rejected() {
        assert!(matches!(DeltaPoint::new(1.0, 0.0, 1.0 + 1e-13), Err(QamError::DegeneratePoint(_))));
        let p = DeltaPoint::new(1.0, 0.0, 1.5).unwrap();
        assert!(p.in_delta_alpha(0.5));
        assert!(!p.in_delta_alpha(0.51));
    }

    #[test]
    fn arrow_pratt_examples() {
        let g = Generator::exp(1.0, iv(-2.0, 2.0)).unwrap();
        for x in [-1.5, 0.0, 1.7] {
            assert_eq!(arrow_pratt(&g, x).unwrap(), 1.0);
        }
        let id = Generator::identity(iv(-2.0, 2.0)).unwrap();
        assert_eq!(arrow_pratt(&id, 0.3).unwrap(), 0.0);
        let p3 = Generator::power(3.0, iv(-1.0, 1.0)).unwrap();
        assert!(matches!(arrow_pratt(&p3, 0.0), Err(QamError::VanishingDerivative(_))));
    }

    #[test]
    fn arrow_pratt_sine_matches_finite_differences() {
        for n in [2u32, 3, 7, 16] {
            let g = Generator::sine(n, iv(0.0, 2.0 * PI)).unwrap();
            let nf = n as f64;
            for i in 1..200 {
                let x = 2.0 * PI * i as f64 / 200.0;
                let closed = -nf * (nf * x).sin() / (nf + (nf * x).cos());
                let a = arrow_pratt(&g, x).unwrap();
                assert!((a - closed).abs() <= 1e-14 * (1.0 + closed.abs()));
                let fd = arrow_pratt_numeric(&g, x).unwrap();
                assert!((fd - a).abs() <= 1e-5 * (1.0 + a.abs()), "n={n} x={x}: {fd} vs {a}");
            }
        }
    }

    #[test]
    fn weighted_b_sum_examples() {
        let id = Generator::identity(iv(0.0, 4.0)).unwrap();
        let s = WeightedSample::new(vec![1.0, 3.0], vec![0.5, 0.5]).unwrap();
        assert_eq!(weighted_b_sum(&id, &s, 0.0).unwrap(), 0.0);
        let lg = Generator::log(iv(0.5, 8.0)).unwrap();
        let s = WeightedSample::new(vec![1.0, 4.0], vec![0.5, 0.5]).unwrap();
        assert!(weighted_b_sum(&lg, &s, 8.0).unwrap().abs() <= 1e-10);
        assert!(matches!(weighted_b_sum(&id, &WeightedSample::uniform(vec![1.0, 3.0]).unwrap(), 2.0), Err(QamError::DegeneratePoint(_))));
    }

    fn catalog(u: Interval<f64>) -> Vec<Generator<f64>> {
        ["identity", "power:2", "power:-1", "power:0.5", "log", "exp:1.5", "sine:2", "sine:6", "affine:-4,2:exp:-1"]
            .iter()
            .map(|k| Generator::parse(k, u).unwrap())
            .collect()
    }

    fn triple() -> impl Strategy<Value = (f64, f64, f64)> {
        (0.5f64..4.0, 0.5f64..4.0, 0.5f64..4.0).prop_filter("x != z", |(x, _, z)| (x - z).abs() > 1e-3)
    }

    proptest! {
        #[test]
        fn dual_identity((x, y, z) in triple()) {
            let p = DeltaPoint::new(x, y, z).unwrap();
            for g in catalog(iv(0.5, 4.0)) {
                let s = pales_b(&g, &p).unwrap() + pales_b(&g, &p.dual()).unwrap();
                prop_assert!((s - 1.0).abs() <= 1e-10, "{g}: {s}");
            }
        }

        #[test]
        fn affine_invariance_of_b((x, y, z) in triple().prop_filter("separated", |(x, _, z)| (x - z).abs() > 0.05), c in prop::sample::select(vec![-3.0, -0.5, 2.0, 10.0]), d in -5.0f64..5.0) {
            let p = DeltaPoint::new(x, y, z).unwrap();
            for g in catalog(iv(0.5, 4.0)) {
                let h = g.affine_wrap(c, d).unwrap();
                let (bg, bh) = (pales_b(&g, &p).unwrap(), pales_b(&h, &p).unwrap());
                prop_assert!((bg - bh).abs() <= 1e-11 * (1.0 + bg.abs()), "{h}: {bg} vs {bh}");
            }
        }

        #[test]
        fn sign_agreement((x, y, z) in triple()) {
            prop_assume!((x - y).abs() > 1e-9);
            let p = DeltaPoint::new(x, y, z).unwrap();
            let gens = catalog(iv(0.5, 4.0));
            let sign = pales_b(&gens[0], &p).unwrap().signum();
            for g in &gens[1..] {
                prop_assert_eq!(pales_b(g, &p).unwrap().signum(), sign);
            }
        }
    }
}
