use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use qam_core::norms::{quadrature_norms, sup_b_diff};
use qam_core::{
    arrow_pratt, best_bound, inf_abs_deriv, pales_b, qa_mean, rho_lower_bound, sup_norm, BoundOptions, BoundReport64,
    ConvergenceReport64, DeltaPoint64, Generator64, Interval64, NormEstimate64, QamError, Result, RhoEstimate64,
    SearchConfig, WeightedSample64,
};

use crate::args::{
    ConvergeArgs, ExampleArgs, Family, GenArgs, MeanArgs, NormArgs, NormChoice, OpArgs, PairArgs,
};
use crate::output::{cell, Render};
use crate::repro::{run_example, ExampleReport};

/// Slack allowed between the searched lower bound and an upper bound.
pub const SOUNDNESS_SLACK: f64 = 1e-6;

impl GenArgs {
    fn generator(&self) -> Result<Generator64> {
        Generator64::parse(&self.spec, self.interval)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanReport {
    pub generator: String,
    pub interval: Interval64,
    pub sample: WeightedSample64,
    pub mean: f64,
}

pub fn mean(args: &MeanArgs) -> Result<MeanReport> {
    let gen = args.gen.generator()?;
    let sample = match &args.w {
        Some(w) => WeightedSample64::new(args.a.clone(), w.clone())?,
        None => WeightedSample64::uniform(args.a.clone())?,
    };
    let mean = qa_mean(&gen, &sample)?;
    Ok(MeanReport {
        generator: gen.kind().to_string(),
        interval: args.gen.interval,
        sample,
        mean,
    })
}

impl Render for MeanReport {
    fn csv_header(&self) -> String {
        "generator,lo,hi,points,weights,mean".into()
    }
    fn csv_rows(&self) -> Vec<String> {
        vec![format!(
            "{},{},{},{},{},{}",
            self.generator,
            self.interval.lo(),
            self.interval.hi(),
            cell(self.sample.points()),
            cell(self.sample.weights()),
            self.mean
        )]
    }
    fn plain(&self) -> String {
        self.mean.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpReport {
    pub generator: String,
    pub interval: Interval64,
    pub point: Option<DeltaPoint64>,
    /// `B_f(x, y, z)`.
    pub b: Option<f64>,
    /// `B_f(z, y, x)`; adds to 1 with `b`.
    pub b_dual: Option<f64>,
    pub at: Option<f64>,
    pub arrow_pratt: Option<f64>,
}

pub fn op(args: &OpArgs) -> Result<OpReport> {
    if args.point.is_none() && args.at.is_none() {
        return Err(QamError::Argument("op needs --point x,y,z and/or --at x".into()));
    }
    let gen = args.gen.generator()?;
    let point = match args.point.as_deref() {
        Some(&[x, y, z]) => Some(DeltaPoint64::new(x, y, z)?),
        Some(other) => return Err(QamError::Parse(format!("--point needs 3 values, got {}", other.len()))),
        None => None,
    };
    let (b, b_dual) = match &point {
        Some(p) => (Some(pales_b(&gen, p)?), Some(pales_b(&gen, &p.dual())?)),
        None => (None, None),
    };
    let arrow_pratt = match args.at {
        Some(x) => {
            gen.eval(x)?;
            Some(arrow_pratt(&gen, x)?)
        }
        None => None,
    };
    Ok(OpReport {
        generator: gen.kind().to_string(),
        interval: args.gen.interval,
        point,
        b,
        b_dual,
        at: args.at,
        arrow_pratt,
    })
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl Render for OpReport {
    fn csv_header(&self) -> String {
        "generator,x,y,z,b,b_dual,at,arrow_pratt".into()
    }
    fn csv_rows(&self) -> Vec<String> {
        let p = self.point;
        vec![format!(
            "{},{},{},{},{},{},{},{}",
            self.generator,
            opt(p.map(|p| p.x)),
            opt(p.map(|p| p.y)),
            opt(p.map(|p| p.z)),
            opt(self.b),
            opt(self.b_dual),
            opt(self.at),
            opt(self.arrow_pratt)
        )]
    }
    fn plain(&self) -> String {
        let mut s = String::new();
        if let (Some(p), Some(b), Some(d)) = (self.point, self.b, self.b_dual) {
            let _ = writeln!(s, "B({}, {}, {}) = {b}", p.x, p.y, p.z);
            let _ = writeln!(s, "B({}, {}, {}) = {d}", p.z, p.y, p.x);
        }
        if let (Some(x), Some(a)) = (self.at, self.arrow_pratt) {
            let _ = writeln!(s, "A({x}) = {a}");
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormRow {
    /// The function measured, e.g. `A_f - A_g`.
    pub target: String,
    pub estimate: NormEstimate64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub generator: String,
    pub generator2: Option<String>,
    pub interval: Interval64,
    pub alpha: Option<f64>,
    pub norms: Vec<NormRow>,
}

pub fn norm(args: &NormArgs) -> Result<NormReport> {
    let u = args.gen.interval;
    let f = args.gen.generator()?;
    let g = args.gen2.as_deref().map(|s| Generator64::parse(s, u)).transpose()?;
    let kinds = if args.kind.is_empty() {
        let mut all = vec![NormChoice::L1, NormChoice::Osc];
        if g.is_some() {
            all.push(NormChoice::Sup);
            if args.alpha.is_some() {
                all.push(NormChoice::SupBDiff);
            }
        } else {
            all.push(NormChoice::InfDeriv);
        }
        all
    } else {
        args.kind.clone()
    };

    let (kf, kg) = (f.kind().clone(), g.as_ref().map(|g| g.kind().clone()));
    let ap_target = if g.is_some() { "A_f - A_g" } else { "A_f" };
    let ap = |x: f64| kf.arrow_pratt(x) - kg.as_ref().map_or(0.0, |k| k.arrow_pratt(x));
    let mut quad = None;
    let mut norms = Vec::new();
    for kind in kinds {
        let row = match kind {
            NormChoice::L1 | NormChoice::Osc => {
                if quad.is_none() {
                    quad = Some(quadrature_norms(ap, u)?);
                }
                let (l1, osc) = quad.expect("computed above");
                NormRow {
                    target: ap_target.into(),
                    estimate: if kind == NormChoice::L1 { l1 } else { osc },
                }
            }
            NormChoice::Sup => {
                let g = g.as_ref().ok_or_else(|| QamError::Argument("sup needs --gen2".into()))?;
                NormRow {
                    target: "f - g".into(),
                    estimate: sup_norm(|x| f.value(x) - g.value(x), u)?,
                }
            }
            NormChoice::InfDeriv => NormRow {
                target: "f'".into(),
                estimate: inf_abs_deriv(&f, u)?,
            },
            NormChoice::SupBDiff => {
                let g = g.as_ref().ok_or_else(|| QamError::Argument("sup-b-diff needs --gen2".into()))?;
                let alpha = args.alpha.ok_or_else(|| QamError::Argument("sup-b-diff needs --alpha".into()))?;
                NormRow {
                    target: "B_f - B_g".into(),
                    estimate: sup_b_diff(&f, g, alpha, u)?,
                }
            }
        };
        norms.push(row);
    }
    Ok(NormReport {
        generator: f.kind().to_string(),
        generator2: g.map(|g| g.kind().to_string()),
        interval: u,
        alpha: args.alpha,
        norms,
    })
}

impl Render for NormReport {
    fn csv_header(&self) -> String {
        "target,kind,value,refinement_error,grid_size".into()
    }
    fn csv_rows(&self) -> Vec<String> {
        self.norms
            .iter()
            .map(|r| {
                let e = &r.estimate;
                format!("{},{:?},{},{},{}", r.target, e.kind, e.value, e.refinement_error, e.grid_size)
            })
            .collect()
    }
    fn plain(&self) -> String {
        let mut s = String::new();
        for r in &self.norms {
            let e = &r.estimate;
            let _ = writeln!(s, "{:?}({}) = {} (+- {:e})", e.kind, r.target, e.value, e.refinement_error);
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub f: String,
    pub g: String,
    pub interval: Interval64,
    pub bounds: Vec<BoundReport64>,
    pub rho: RhoEstimate64,
    pub sound: bool,
}

pub fn bounds(args: &PairArgs) -> Result<BoundsReport> {
    let u = args.gen.interval;
    let f = args.gen.generator()?;
    let g = Generator64::parse(&args.gen2, u)?;
    let opts = BoundOptions {
        symmetrize: !args.no_symmetrize,
    };
    let cfg = args.search.config(SearchConfig::default());
    let (bounds, rho) = rayon::join(|| best_bound(&f, &g, u, opts), || rho_lower_bound(&f, &g, u, &cfg));
    let rho = rho?;
    let sound = bounds.iter().all(|b| !b.hypotheses_ok || rho.value <= b.value + SOUNDNESS_SLACK);
    Ok(BoundsReport {
        f: f.kind().to_string(),
        g: g.kind().to_string(),
        interval: u,
        bounds,
        rho,
        sound,
    })
}

impl Render for BoundsReport {
    fn csv_header(&self) -> String {
        BoundReport64::CSV_HEADER.into()
    }
    fn csv_rows(&self) -> Vec<String> {
        let mut rows: Vec<String> = self.bounds.iter().map(BoundReport64::csv_row).collect();
        rows.push(format!("RHO_LOWER_BOUND,{},{},true,true,", self.rho.value, self.rho.value));
        rows
    }
    fn plain(&self) -> String {
        let mut s = format!("f = {}, g = {} on {}\n", self.f, self.g, self.interval);
        for b in &self.bounds {
            let flag = if b.hypotheses_ok { "" } else { "  (hypotheses fail)" };
            let _ = writeln!(s, "{:<12} {:>22} raw {:>22}{flag}", b.bound_name.as_str(), b.value, b.raw_value);
        }
        let _ = writeln!(s, "{:<12} {:>22}", "rho_LB", self.rho.value);
        let _ = write!(s, "{}", if self.sound { "sound" } else { "SOUNDNESS VIOLATED" });
        s
    }
    fn violations(&self) -> Vec<String> {
        self.bounds
            .iter()
            .filter(|b| b.hypotheses_ok && self.rho.value > b.value + SOUNDNESS_SLACK)
            .map(|b| format!("rho_LB {} exceeds {} = {}", self.rho.value, b.bound_name, b.value))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhoReport {
    pub f: String,
    pub g: String,
    pub interval: Interval64,
    pub search: SearchConfig,
    pub rho: RhoEstimate64,
}

pub fn rho(args: &PairArgs) -> Result<RhoReport> {
    let u = args.gen.interval;
    let f = args.gen.generator()?;
    let g = Generator64::parse(&args.gen2, u)?;
    let cfg = args.search.config(SearchConfig::default());
    let rho = rho_lower_bound(&f, &g, u, &cfg)?;
    Ok(RhoReport {
        f: f.kind().to_string(),
        g: g.kind().to_string(),
        interval: u,
        search: cfg,
        rho,
    })
}

impl Render for RhoReport {
    fn csv_header(&self) -> String {
        "f,g,rho,witness_points,witness_weights,evaluations".into()
    }
    fn csv_rows(&self) -> Vec<String> {
        vec![format!(
            "{},{},{},{},{},{}",
            self.f,
            self.g,
            self.rho.value,
            cell(&self.rho.witness_points),
            cell(&self.rho.witness_weights),
            self.rho.evaluations
        )]
    }
    fn plain(&self) -> String {
        format!(
            "rho >= {} at a = {:?}, w = {:?} ({} evaluations)",
            self.rho.value, self.rho.witness_points, self.rho.witness_weights, self.rho.evaluations
        )
    }
}

pub fn example(args: &ExampleArgs) -> Result<ExampleReport> {
    run_example(args.which, args.n_range.clone(), &args.search.config(SearchConfig::default()))
}

pub fn converge(args: &ConvergeArgs) -> Result<ConvergenceReport64> {
    let (limit, specs, default_u) = match (&args.family, &args.seq) {
        (Some(Family::Sine), _) => (
            "identity".to_string(),
            args.n_range.clone().map(|n| format!("sine:{n}")).collect::<Vec<_>>(),
            Some(crate::repro::period()),
        ),
        (Some(Family::Power), _) => (
            "identity".to_string(),
            args.n_range.clone().map(|n| format!("power:{}", 1.0 + 1.0 / n as f64)).collect(),
            Some(Interval64::new(1.0, 4.0)?),
        ),
        (None, Some(seq)) => (
            args.gen.clone().ok_or_else(|| QamError::Argument("--seq needs --gen".into()))?,
            seq.split(';').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
            None,
        ),
        (None, None) => return Err(QamError::Argument("converge needs --family or --seq".into())),
    };
    let u = args
        .interval
        .or(default_u)
        .ok_or_else(|| QamError::Argument("--seq needs --interval".into()))?;
    let f = Generator64::parse(&limit, u)?;
    let seq = specs.iter().map(|s| Generator64::parse(s, u)).collect::<Result<Vec<_>>>()?;
    qam_core::search::convergence_diagnostic_with(&seq, &f, u, args.b_grid, &args.search.config(SearchConfig::quick()))
}

impl Render for ConvergenceReport64 {
    fn csv_header(&self) -> String {
        "index,generator,limit,b_deviation,rho".into()
    }
    fn csv_rows(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| format!("{},{},{},{},{}", r.index, r.generator, self.limit, r.b_deviation, r.rho.value))
            .collect()
    }
    fn plain(&self) -> String {
        let mut s = format!("limit {} on {} (B grid {})\n", self.limit, self.interval, self.grid);
        let _ = writeln!(s, "{:>3} {:<24} {:>14} {:>14}", "#", "generator", "max|dB|", "rho_LB");
        for r in &self.rows {
            let _ = writeln!(s, "{:>3} {:<24} {:>14.6e} {:>14.6e}", r.index, r.generator, r.b_deviation, r.rho.value);
        }
        s
    }
}
