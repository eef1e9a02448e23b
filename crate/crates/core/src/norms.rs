//! Norm estimates consumed by the bounds: `L1`, sup, `inf |f'|`, the
//! oscillation norm `sup_{a,b} |int_a^b h|`, and `sup |B_f - B_g|` over
//! `{|x - z| >= alpha}`.
//!
//! Every estimate comes from a doubling grid and records the change between
//! the last two levels as its `refinement_error`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{QamError, Result};
use crate::generators::{Generator, Interval};
use crate::operators::pales_b_values;
use crate::scalar::{neumaier_sum, Scalar};

/// First quadrature level (cells).
pub const QUAD_START_CELLS: usize = 64;
/// Quadrature cap (cells).
pub const QUAD_MAX_CELLS: usize = 1 << 20;
/// Relative change between quadrature levels that counts as converged.
pub const QUAD_REL_TOL: f64 = 1e-11;

/// First and last levels of the 1-D extremum search (cells).
pub const EXTREMUM_START_CELLS: usize = 64;
pub const EXTREMUM_MAX_CELLS: usize = 1 << 16;
pub const EXTREMUM_REL_TOL: f64 = 1e-12;

/// Points per axis of the `sup |B_f - B_g|` grid levels.
pub const B_GRID_LEVELS: [usize; 4] = [33, 65, 129, 257];
/// Relative change between `B` grid levels that counts as converged.
pub const B_GRID_REL_TOL: f64 = 1e-3;

const PAR_THRESHOLD: usize = 4096;
const GOLDEN_MAX_ITER: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum NormKind {
    L1,
    Sup,
    InfDeriv,
    Osc,
    SupBDiff,
}

/// A norm value with the change observed at the last grid refinement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct NormEstimate<T> {
    pub kind: NormKind,
    pub value: T,
    pub refinement_error: T,
    pub grid_size: usize,
}

impl<T: Scalar> NormEstimate<T> {
    /// `value + k * refinement_error`.
    pub fn inflated(&self, k: T) -> T {
        self.value + k * self.refinement_error
    }
}

/// `int_U |h|`.
pub fn l1_norm<T: Scalar, H>(h: H, u: Interval<T>) -> Result<NormEstimate<T>>
where
    H: Fn(T) -> T + Sync,
{
    quadrature_norms(h, u).map(|(l1, _)| l1)
}

/// `sup_{a,b in U} |int_a^b h|`, computed as the range of the antiderivative.
pub fn osc_norm<T: Scalar, H>(h: H, u: Interval<T>) -> Result<NormEstimate<T>>
where
    H: Fn(T) -> T + Sync,
{
    quadrature_norms(h, u).map(|(_, osc)| osc)
}

/// `L1` and oscillation norms from the same quadrature levels.
///
/// Each level splits `U` at the sign changes of `h` found on a uniform grid,
/// integrates every piece with composite Simpson, and reads off
/// `sum |piece|` and `max H - min H` over the cumulative sums `H`. The
/// antiderivative is monotone on each piece, so its extrema sit at the
/// breakpoints. Levels double until both values change by less than
/// [`QUAD_REL_TOL`] relative.
pub fn quadrature_norms<T: Scalar, H>(h: H, u: Interval<T>) -> Result<(NormEstimate<T>, NormEstimate<T>)>
where
    H: Fn(T) -> T + Sync,
{
    let rel = T::tol(QUAD_REL_TOL);
    let mut prev: Option<(T, T)> = None;
    let mut cells = QUAD_START_CELLS;
    loop {
        let level = quadrature_level(&h, u, cells)?;
        let (l1, osc) = (level.l1, level.osc);
        if let Some((pl1, posc)) = prev {
            let (dl1, dosc) = ((l1 - pl1).abs(), (osc - posc).abs());
            let floor = T::epsilon() * T::lit(16.0) * u.length() * level.max_abs;
            let done = |d: T, v: T| d <= rel * v.abs() || d <= floor;
            if (done(dl1, l1) && done(dosc, osc)) || cells >= QUAD_MAX_CELLS {
                let est = |kind, value, refinement_error| NormEstimate {
                    kind,
                    value,
                    refinement_error,
                    grid_size: cells,
                };
                return Ok((est(NormKind::L1, l1, dl1), est(NormKind::Osc, osc, dosc)));
            }
        }
        prev = Some((l1, osc));
        cells *= 2;
    }
}

struct QuadratureLevel<T> {
    l1: T,
    osc: T,
    max_abs: T,
}

fn quadrature_level<T: Scalar, H>(h: &H, u: Interval<T>, cells: usize) -> Result<QuadratureLevel<T>>
where
    H: Fn(T) -> T + Sync,
{
    let xs = u.grid(cells);
    let hs = eval_all(h, &xs)?;
    let max_abs = hs.iter().fold(T::zero(), |m, v| m.max(v.abs()));

    let mut breaks = vec![u.lo()];
    for i in 0..cells {
        let (a, b) = (hs[i], hs[i + 1]);
        if i > 0 && a.is_zero() && (hs[i - 1] * b) < T::zero() {
            breaks.push(xs[i]);
        } else if a * b < T::zero() {
            breaks.push(bisect_root(h, xs[i], xs[i + 1], a));
        }
    }
    breaks.push(u.hi());
    breaks.dedup();

    let len = u.length();
    let pieces = breaks
        .windows(2)
        .map(|w| {
            let frac = (w[1] - w[0]) / len;
            let m = (frac * T::from_count(2 * cells)).ceil().to_usize().unwrap_or(2).max(2);
            simpson(h, w[0], w[1], m + m % 2)
        })
        .collect::<Result<Vec<T>>>()?;

    let l1 = neumaier_sum(pieces.iter().map(|p| p.abs()));
    let (mut run, mut lo, mut hi) = (T::zero(), T::zero(), T::zero());
    for p in &pieces {
        run = run + *p;
        lo = lo.min(run);
        hi = hi.max(run);
    }
    Ok(QuadratureLevel {
        l1,
        osc: hi - lo,
        max_abs,
    })
}

fn eval_all<T: Scalar, H>(h: &H, xs: &[T]) -> Result<Vec<T>>
where
    H: Fn(T) -> T + Sync,
{
    let hs: Vec<T> = if xs.len() >= PAR_THRESHOLD {
        xs.par_iter().map(|&x| h(x)).collect()
    } else {
        xs.iter().map(|&x| h(x)).collect()
    };
    match hs.iter().zip(xs).find(|(v, _)| !v.is_finite()) {
        Some((v, x)) => Err(QamError::Evaluation(format!("h({x}) = {v}"))),
        None => Ok(hs),
    }
}

/// Root of `h` in `[a, b]` given `h(a) * h(b) < 0`, bisected to adjacent floats.
fn bisect_root<T: Scalar, H: Fn(T) -> T>(h: &H, mut a: T, mut b: T, ha: T) -> T {
    let sa = ha.signum();
    for _ in 0..GOLDEN_MAX_ITER {
        let m = a + (b - a) / T::lit(2.0);
        if m <= a || m >= b {
            break;
        }
        let hm = h(m);
        if hm.is_zero() {
            return m;
        }
        if hm.signum() == sa {
            a = m;
        } else {
            b = m;
        }
    }
    a + (b - a) / T::lit(2.0)
}

/// Composite Simpson with `m` (even) subintervals.
fn simpson<T: Scalar, H: Fn(T) -> T>(h: &H, a: T, b: T, m: usize) -> Result<T> {
    let step = (b - a) / T::from_count(m);
    let (two, four) = (T::lit(2.0), T::lit(4.0));
    let mut terms = Vec::with_capacity(m + 1);
    for i in 0..=m {
        let x = if i == m { b } else { a + step * T::from_count(i) };
        let v = h(x);
        if !v.is_finite() {
            return Err(QamError::Evaluation(format!("h({x}) = {v}")));
        }
        let w = if i == 0 || i == m {
            T::one()
        } else if i % 2 == 1 {
            four
        } else {
            two
        };
        terms.push(w * v);
    }
    Ok(neumaier_sum(terms) * step / T::lit(3.0))
}

/// `sup_U |h|`.
pub fn sup_norm<T: Scalar, H>(h: H, u: Interval<T>) -> Result<NormEstimate<T>>
where
    H: Fn(T) -> T + Sync,
{
    grid_extremum(|x| h(x).abs(), u, true, NormKind::Sup)
}

/// `inf_U |f'|`.
pub fn inf_abs_deriv<T: Scalar>(gen: &Generator<T>, u: Interval<T>) -> Result<NormEstimate<T>> {
    check_within(gen, &u)?;
    grid_extremum(|x| gen.kind().first_derivative(x).abs(), u, false, NormKind::InfDeriv)
}

/// Extremum of `q` over a doubling grid, polished at every level by a
/// golden-section search on the two cells around the best node.
fn grid_extremum<T: Scalar, Q>(q: Q, u: Interval<T>, maximize: bool, kind: NormKind) -> Result<NormEstimate<T>>
where
    Q: Fn(T) -> T + Sync,
{
    let better = |a: T, b: T| if maximize { a > b } else { a < b };
    let rel = T::tol(EXTREMUM_REL_TOL);
    let mut prev: Option<T> = None;
    let mut cells = EXTREMUM_START_CELLS;
    loop {
        let xs = u.grid(cells);
        let vs = eval_all(&q, &xs)?;
        let mut j = 0;
        for (i, v) in vs.iter().enumerate() {
            if better(*v, vs[j]) {
                j = i;
            }
        }
        let a = xs[j.saturating_sub(1)];
        let b = xs[(j + 1).min(cells)];
        let (_, polished) = golden_section(&q, a, b, maximize);
        let value = if polished.is_finite() && better(polished, vs[j]) {
            polished
        } else {
            vs[j]
        };
        if let Some(p) = prev {
            let change = (value - p).abs();
            if change <= rel * (T::one() + value.abs()) || cells >= EXTREMUM_MAX_CELLS {
                return Ok(NormEstimate {
                    kind,
                    value,
                    refinement_error: change,
                    grid_size: cells,
                });
            }
        }
        prev = Some(value);
        cells *= 2;
    }
}

/// Golden-section search for a local extremum of `q` on `[a, b]`; returns
/// `(argument, value)`.
pub fn golden_section<T: Scalar, Q: Fn(T) -> T>(q: &Q, mut a: T, mut b: T, maximize: bool) -> (T, T) {
    let sign = if maximize { -T::one() } else { T::one() };
    let obj = |x: T| sign * q(x);
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (obj(c), obj(d));
    let tol = T::epsilon().sqrt();
    for _ in 0..GOLDEN_MAX_ITER {
        if (b - a).abs() <= tol * (T::one() + a.abs() + b.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = obj(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = obj(d);
        }
    }
    let x = if fc < fd { c } else { d };
    (x, q(x))
}

fn check_within<T: Scalar>(gen: &Generator<T>, u: &Interval<T>) -> Result<()> {
    if gen.domain().contains_interval(u) {
        Ok(())
    } else {
        Err(QamError::Argument(format!("{u} is not inside the domain of {gen}")))
    }
}

/// Location and value of the largest `|B_f - B_g|` found.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BDiffWitness<T> {
    pub x: T,
    pub y: T,
    pub z: T,
    pub value: T,
}

/// `sup |B_f - B_g|` over `{(x, y, z) in U^3 : |x - z| >= alpha}`.
///
/// Each level scans a uniform grid with [`B_GRID_LEVELS`] points per axis,
/// adds the constraint-boundary partners `z = x +- alpha` for every `x`, and
/// polishes the incumbent with a coordinate-wise compass search. Levels
/// double until the relative change drops below [`B_GRID_REL_TOL`].
pub fn sup_b_diff<T: Scalar>(f: &Generator<T>, g: &Generator<T>, alpha: T, u: Interval<T>) -> Result<NormEstimate<T>> {
    sup_b_diff_with_witness(f, g, alpha, u).map(|(est, _)| est)
}

/// [`sup_b_diff`] together with its maximizing point.
pub fn sup_b_diff_with_witness<T: Scalar>(
    f: &Generator<T>,
    g: &Generator<T>,
    alpha: T,
    u: Interval<T>,
) -> Result<(NormEstimate<T>, BDiffWitness<T>)> {
    check_within(f, &u)?;
    check_within(g, &u)?;
    if !(alpha.is_finite() && alpha > T::zero()) {
        return Err(QamError::Argument(format!("alpha must be positive, got {alpha}")));
    }
    if alpha > u.length() * (T::one() + T::epsilon() * T::lit(4.0)) {
        return Err(QamError::Argument(format!(
            "alpha = {alpha} exceeds |U| = {}: the separated set is empty",
            u.length()
        )));
    }
    let alpha = alpha.min(u.length());
    let rel = T::tol(B_GRID_REL_TOL);
    let mut prev: Option<T> = None;
    let mut last = None;
    for &points in B_GRID_LEVELS.iter() {
        let cells = points - 1;
        let coarse = b_diff_grid(f, g, alpha, u, cells, true);
        let w = compass_refine(f, g, alpha, u, coarse, u.length() / T::from_count(cells));
        let value = w.value;
        let change = prev.map(|p| (value - p).abs());
        last = Some((value, change.unwrap_or(value), points, w));
        if let Some(c) = change {
            if c <= rel * value || (value.is_zero() && c.is_zero()) {
                break;
            }
        }
        prev = Some(value);
    }
    let (value, refinement_error, grid_size, w) = last.expect("at least one level");
    Ok((
        NormEstimate {
            kind: NormKind::SupBDiff,
            value,
            refinement_error,
            grid_size,
        },
        w,
    ))
}

/// Max of `|B_f - B_g|` over a uniform grid with `cells` cells, restricted to
/// `|x - z| >= min_sep`. With `boundary`, each `x` is also paired with
/// `z = x +- min_sep`. Ties go to the lowest `x` index.
pub fn b_diff_grid<T: Scalar>(
    f: &Generator<T>,
    g: &Generator<T>,
    min_sep: T,
    u: Interval<T>,
    cells: usize,
    boundary: bool,
) -> BDiffWitness<T> {
    let xs = u.grid(cells);
    let fs: Vec<T> = xs.iter().map(|&x| f.value(x)).collect();
    let gs: Vec<T> = xs.iter().map(|&x| g.value(x)).collect();
    let per_x = |i: usize| -> BDiffWitness<T> {
        let (x, fx, gx) = (xs[i], fs[i], gs[i]);
        let mut best = BDiffWitness {
            x,
            y: x,
            z: x,
            value: T::neg_infinity(),
        };
        let mut scan = |z: T, fz: T, gz: T| {
            let (rf, rg) = ((fx - fz).recip(), (gx - gz).recip());
            for (j, (&fy, &gy)) in fs.iter().zip(&gs).enumerate() {
                let d = ((fx - fy) * rf - (gx - gy) * rg).abs();
                if d > best.value {
                    best = BDiffWitness { x, y: xs[j], z, value: d };
                }
            }
        };
        for k in 0..=cells {
            if (x - xs[k]).abs() >= min_sep {
                scan(xs[k], fs[k], gs[k]);
            }
        }
        if boundary {
            for z in [x - min_sep, x + min_sep] {
                if z >= u.lo() && z <= u.hi() {
                    scan(z, f.value(z), g.value(z));
                }
            }
        }
        best
    };
    let pick = |a: (usize, BDiffWitness<T>), b: (usize, BDiffWitness<T>)| {
        if b.1.value > a.1.value || (b.1.value == a.1.value && b.0 < a.0) {
            b
        } else {
            a
        }
    };
    let init = (
        usize::MAX,
        BDiffWitness {
            x: u.lo(),
            y: u.lo(),
            z: u.hi(),
            value: T::neg_infinity(),
        },
    );
    let (_, best) = (0..=cells)
        .into_par_iter()
        .map(|i| (i, per_x(i)))
        .reduce(|| init, pick);
    if best.value.is_finite() {
        best
    } else {
        BDiffWitness {
            value: T::zero(),
            ..init.1
        }
    }
}

/// Coordinate-wise compass search on `(x, y, z)` subject to `|x - z| >= alpha`.
fn compass_refine<T: Scalar>(
    f: &Generator<T>,
    g: &Generator<T>,
    alpha: T,
    u: Interval<T>,
    start: BDiffWitness<T>,
    step0: T,
) -> BDiffWitness<T> {
    let objective = |x: T, y: T, z: T| -> T {
        if (x - z).abs() < alpha {
            return T::neg_infinity();
        }
        let d = pales_b_values(f.value(x), f.value(y), f.value(z)) - pales_b_values(g.value(x), g.value(y), g.value(z));
        if d.is_finite() {
            d.abs()
        } else {
            T::neg_infinity()
        }
    };
    // Moving x or z into the forbidden band snaps it onto the band edge on its own side.
    let snap = |moved: T, other: T, from: T| -> T {
        let moved = u.clamp(moved);
        if (moved - other).abs() >= alpha {
            return moved;
        }
        let edge = if from >= other { other + alpha } else { other - alpha };
        if edge >= u.lo() && edge <= u.hi() {
            edge
        } else {
            from
        }
    };
    let mut best = start;
    if !best.value.is_finite() || best.value <= T::zero() {
        return BDiffWitness {
            value: best.value.max(T::zero()),
            ..best
        };
    }
    let mut step = step0;
    let min_step = T::lit(1e-10) * u.length();
    let mut iters = 0;
    while step > min_step && iters < 10_000 {
        iters += 1;
        let mut improved = false;
        for coord in 0..3 {
            for dir in [T::one(), -T::one()] {
                let delta = dir * step;
                let (x, y, z) = (best.x, best.y, best.z);
                let cand = match coord {
                    0 => (snap(x + delta, z, x), y, z),
                    1 => (x, u.clamp(y + delta), z),
                    _ => (x, y, snap(z + delta, x, z)),
                };
                let v = objective(cand.0, cand.1, cand.2);
                if v > best.value {
                    best = BDiffWitness {
                        x: cand.0,
                        y: cand.1,
                        z: cand.2,
                        value: v,
                    };
                    improved = true;
                }
            }
        }
        if !improved {
            step = step / T::lit(2.0);
        }
    }
    best
}
