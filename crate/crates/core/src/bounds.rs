//! Upper bounds on `rho(M_f, M_g)`.
//!
//! | name           | formula (ordering `(f, g)`)                                   |
//! |----------------|---------------------------------------------------------------|
//! | `CARGO_SHISHA` | `2 sup|f - g| / inf|f'|`                                      |
//! | `L1_SINH`      | `|U| exp(2 ||A_f||_1) sinh(2 ||A_g - A_f||_1)`                |
//! | `OSC`          | `|U| exp(||A_f||_*) (exp(||A_f - A_g||_*) - 1)`               |
//! | `PALES_ALPHA`  | smallest `alpha` with `sup_{|x-z|>=alpha} |B_f - B_g| <= 1`   |
//!
//! The first three are asymmetric in `(f, g)`; by default both orderings are
//! evaluated and the smaller value is kept. Every reported `value` is capped
//! at `|U|`, since both means always lie in `U`; `raw_value` keeps the
//! uncapped formula value.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Result;
use crate::generators::{Generator, Interval};
use crate::norms::{inf_abs_deriv, quadrature_norms, sup_b_diff, sup_norm, NormEstimate};
use crate::scalar::Scalar;

/// `inf |f'|` must exceed this for derivative-based hypotheses to hold.
pub const MIN_DERIVATIVE: f64 = 1e-10;
/// Multiple of the grid refinement error added to `sup |B_f - B_g|` before comparing with 1.
pub const PALES_INFLATION: f64 = 3.0;
/// Bisection tolerance on `alpha`, relative to `|U|`; also the smallest `alpha` tried.
pub const PALES_ALPHA_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BoundName {
    CargoShisha,
    L1Sinh,
    Osc,
    PalesAlpha,
}

impl BoundName {
    pub const ALL: [BoundName; 4] = [BoundName::CargoShisha, BoundName::L1Sinh, BoundName::Osc, BoundName::PalesAlpha];

    pub fn as_str(&self) -> &'static str {
        match self {
            BoundName::CargoShisha => "CARGO_SHISHA",
            BoundName::L1Sinh => "L1_SINH",
            BoundName::Osc => "OSC",
            BoundName::PalesAlpha => "PALES_ALPHA",
        }
    }
}

impl std::fmt::Display for BoundName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundOptions {
    /// Take the minimum over both argument orderings.
    pub symmetrize: bool,
}

impl Default for BoundOptions {
    fn default() -> Self {
        Self { symmetrize: true }
    }
}

/// One upper bound on `rho`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct BoundReport<T> {
    pub bound_name: BoundName,
    /// Bound after the `|U|` cap; `|U|` whenever the hypotheses fail.
    pub value: T,
    /// Formula value before the cap (`null` in JSON when infinite).
    #[serde(serialize_with = "ser_finite_or_null", deserialize_with = "de_finite_or_null")]
    pub raw_value: T,
    pub hypotheses_ok: bool,
    pub symmetrized: bool,
    pub details: Vec<NormEstimate<T>>,
}

impl<T: Scalar> BoundReport<T> {
    /// Header matching [`BoundReport::csv_row`].
    pub const CSV_HEADER: &'static str = "bound_name,value,raw_value,hypotheses_ok,symmetrized,details";

    /// One CSV row; `details` is `KIND=value~refinement_error` joined by `;`.
    pub fn csv_row(&self) -> String {
        let details = self
            .details
            .iter()
            .map(|d| format!("{:?}={}~{}", d.kind, d.value, d.refinement_error))
            .collect::<Vec<_>>()
            .join(";");
        format!(
            "{},{},{},{},{},{}",
            self.bound_name, self.value, self.raw_value, self.hypotheses_ok, self.symmetrized, details
        )
    }

    fn failed(bound_name: BoundName, u: Interval<T>, symmetrized: bool, details: Vec<NormEstimate<T>>) -> Self {
        Self {
            bound_name,
            value: u.length(),
            raw_value: T::infinity(),
            hypotheses_ok: false,
            symmetrized,
            details,
        }
    }
}

fn ser_finite_or_null<T: Scalar, S: Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        v.serialize(s)
    } else {
        s.serialize_none()
    }
}

fn de_finite_or_null<'de, T: Scalar, D: Deserializer<'de>>(d: D) -> std::result::Result<T, D::Error> {
    Option::<T>::deserialize(d).map(|v| v.unwrap_or_else(T::infinity))
}

/// The formula evaluated for one argument ordering.
struct Ordering<T> {
    raw: T,
    ok: bool,
    details: Vec<NormEstimate<T>>,
}

/// Keeps the smallest ordering whose hypotheses hold and applies the cap.
fn assemble<T: Scalar>(name: BoundName, u: Interval<T>, orderings: Vec<Ordering<T>>) -> BoundReport<T> {
    let symmetrized = orderings.len() > 1;
    let mut chosen: Option<Ordering<T>> = None;
    let mut fallback = Vec::new();
    for o in orderings {
        if !o.ok {
            if fallback.is_empty() {
                fallback = o.details;
            }
            continue;
        }
        if chosen.as_ref().is_none_or(|c| o.raw < c.raw) {
            chosen = Some(o);
        }
    }
    match chosen {
        Some(o) => BoundReport {
            bound_name: name,
            value: o.raw.max(T::zero()).min(u.length()),
            raw_value: o.raw,
            hypotheses_ok: true,
            symmetrized,
            details: o.details,
        },
        None => BoundReport::failed(name, u, symmetrized, fallback),
    }
}

fn both<T: Scalar>(
    opts: BoundOptions,
    first: impl FnOnce() -> Result<Ordering<T>>,
    second: impl FnOnce() -> Result<Ordering<T>>,
) -> Result<Vec<Ordering<T>>> {
    let mut out = vec![first()?];
    if opts.symmetrize {
        out.push(second()?);
    }
    Ok(out)
}

/// `2 sup|f - g| / inf|f'|`.
pub fn bound_cargo_shisha<T: Scalar>(
    f: &Generator<T>,
    g: &Generator<T>,
    u: Interval<T>,
    opts: BoundOptions,
) -> Result<BoundReport<T>> {
    let one = |f: &Generator<T>, g: &Generator<T>| -> Result<Ordering<T>> {
        let inf = inf_abs_deriv(f, u)?;
        let sup = sup_norm(|x| f.value(x) - g.value(x), u)?;
        let ok = inf.value > T::lit(MIN_DERIVATIVE);
        let raw = if ok { T::lit(2.0) * sup.value / inf.value } else { T::infinity() };
        Ok(Ordering {
            raw,
            ok,
            details: vec![sup, inf],
        })
    };
    Ok(assemble(BoundName::CargoShisha, u, both(opts, || one(f, g), || one(g, f))?))
}

/// Derivative checks plus `(L1, OSC)` norms of `A_f`, `A_g` and `A_f - A_g`.
enum ArrowPrattNorms<T> {
    Ready {
        af: (NormEstimate<T>, NormEstimate<T>),
        ag: (NormEstimate<T>, NormEstimate<T>),
        diff: (NormEstimate<T>, NormEstimate<T>),
    },
    /// `f'` or `g'` vanishes on `U`, or `A` is not finite there.
    Unmet(Vec<NormEstimate<T>>),
}

fn arrow_pratt_norms<T: Scalar>(f: &Generator<T>, g: &Generator<T>, u: Interval<T>) -> Result<ArrowPrattNorms<T>> {
    let inf_f = inf_abs_deriv(f, u)?;
    let inf_g = inf_abs_deriv(g, u)?;
    let threshold = T::lit(MIN_DERIVATIVE);
    if inf_f.value <= threshold || inf_g.value <= threshold {
        return Ok(ArrowPrattNorms::Unmet(vec![inf_f, inf_g]));
    }
    let (kf, kg) = (f.kind(), g.kind());
    let norms = (|| -> Result<_> {
        Ok((
            quadrature_norms(|x| kf.arrow_pratt(x), u)?,
            quadrature_norms(|x| kg.arrow_pratt(x), u)?,
            quadrature_norms(|x| kf.arrow_pratt(x) - kg.arrow_pratt(x), u)?,
        ))
    })();
    Ok(match norms {
        Ok((af, ag, diff)) => ArrowPrattNorms::Ready { af, ag, diff },
        Err(_) => ArrowPrattNorms::Unmet(vec![inf_f, inf_g]),
    })
}

/// `|U| exp(2 ||A_f||_1) sinh(2 ||A_g - A_f||_1)`.
pub fn bound_l1<T: Scalar>(f: &Generator<T>, g: &Generator<T>, u: Interval<T>, opts: BoundOptions) -> Result<BoundReport<T>> {
    let (af, ag, diff) = match arrow_pratt_norms(f, g, u)? {
        ArrowPrattNorms::Ready { af, ag, diff } => (af.0, ag.0, diff.0),
        ArrowPrattNorms::Unmet(details) => return Ok(BoundReport::failed(BoundName::L1Sinh, u, opts.symmetrize, details)),
    };
    let two = T::lit(2.0);
    let one = |a: NormEstimate<T>, d: NormEstimate<T>| -> Result<Ordering<T>> {
        let raw = if d.value.is_zero() {
            T::zero()
        } else {
            u.length() * (two * a.value).exp() * (two * d.value).sinh()
        };
        Ok(Ordering {
            raw,
            ok: true,
            details: vec![a, d],
        })
    };
    Ok(assemble(BoundName::L1Sinh, u, both(opts, || one(af, diff), || one(ag, diff))?))
}

/// `|U| exp(||A_f||_*) (exp(||A_f - A_g||_*) - 1)`.
pub fn bound_osc<T: Scalar>(f: &Generator<T>, g: &Generator<T>, u: Interval<T>, opts: BoundOptions) -> Result<BoundReport<T>> {
    let (af, ag, diff) = match arrow_pratt_norms(f, g, u)? {
        ArrowPrattNorms::Ready { af, ag, diff } => (af.1, ag.1, diff.1),
        ArrowPrattNorms::Unmet(details) => return Ok(BoundReport::failed(BoundName::Osc, u, opts.symmetrize, details)),
    };
    let one = |a: NormEstimate<T>, d: NormEstimate<T>| -> Result<Ordering<T>> {
        let raw = if d.value.is_zero() {
            T::zero()
        } else {
            u.length() * a.value.exp() * d.value.exp_m1()
        };
        Ok(Ordering {
            raw,
            ok: true,
            details: vec![a, d],
        })
    };
    Ok(assemble(BoundName::Osc, u, both(opts, || one(af, diff), || one(ag, diff))?))
}

/// Smallest `alpha` in `(0, |U|]` for which the inflated estimate of
/// `sup_{|x-z|>=alpha} |B_f - B_g|` is at most 1, found by bisection.
///
/// `B_f - B_g` is antisymmetric in `(f, g)`, so the result does not depend
/// on the argument order and `symmetrized` is always reported.
pub fn bound_pales<T: Scalar>(f: &Generator<T>, g: &Generator<T>, u: Interval<T>, _opts: BoundOptions) -> Result<BoundReport<T>> {
    let k = T::lit(PALES_INFLATION);
    let inflated = |alpha: T| -> Result<(T, NormEstimate<T>)> {
        let e = sup_b_diff(f, g, alpha, u)?;
        Ok((e.inflated(k), e))
    };
    let len = u.length();
    let tol = T::lit(PALES_ALPHA_TOL) * len;

    let (s_full, e_full) = inflated(len)?;
    if s_full > T::one() {
        return Ok(BoundReport::failed(BoundName::PalesAlpha, u, true, vec![e_full]));
    }
    let (s_min, e_min) = inflated(tol)?;
    let (alpha, detail) = if s_min <= T::one() {
        (tol, e_min)
    } else {
        let (mut lo, mut hi, mut at_hi) = (tol, len, e_full);
        while hi - lo > tol {
            let mid = lo + (hi - lo) / T::lit(2.0);
            let (s, e) = inflated(mid)?;
            if s <= T::one() {
                hi = mid;
                at_hi = e;
            } else {
                lo = mid;
            }
        }
        (hi, at_hi)
    };
    Ok(BoundReport {
        bound_name: BoundName::PalesAlpha,
        value: alpha,
        raw_value: alpha,
        hypotheses_ok: true,
        symmetrized: true,
        details: vec![detail],
    })
}

/// All four bounds sorted by value. A bound whose computation fails is
/// reported at the `|U|` cap with `hypotheses_ok = false`.
pub fn best_bound<T: Scalar>(f: &Generator<T>, g: &Generator<T>, u: Interval<T>, opts: BoundOptions) -> Vec<BoundReport<T>> {
    let settle = |name: BoundName, r: Result<BoundReport<T>>| {
        r.unwrap_or_else(|_| BoundReport::failed(name, u, opts.symmetrize, vec![]))
    };
    let ((cs, l1), (osc, pales)) = rayon::join(
        || {
            rayon::join(
                || settle(BoundName::CargoShisha, bound_cargo_shisha(f, g, u, opts)),
                || settle(BoundName::L1Sinh, bound_l1(f, g, u, opts)),
            )
        },
        || {
            rayon::join(
                || settle(BoundName::Osc, bound_osc(f, g, u, opts)),
                || settle(BoundName::PalesAlpha, bound_pales(f, g, u, opts)),
            )
        },
    );
    let mut reports = vec![cs, l1, osc, pales];
    reports.sort_by(|a, b| a.value.partial_cmp(&b.value).unwrap_or(std::cmp::Ordering::Equal));
    reports
}
