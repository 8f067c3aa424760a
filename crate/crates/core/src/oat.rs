//! One-at-a-time sensitivity: each parameter in turn is moved to its
//! minimum, maximum, mean minus one sd and mean plus one sd while the others
//! stay at their means, and the output is expressed as a percentage of the
//! baseline prediction.
//!
//! The spread `t = 100 f(x_i) / f(x_b)` and its range over the four
//! experiments, `t_delta = max t - min t`, are what the literature sometimes
//! calls `t_s` and `t_s(delta)`.

use std::io::Write;

use serde::Serialize;

use crate::equations::{critical_velocity, predict, EquationId, InputParam, PierShape, ScourInputs, ShapeTag};
use crate::error::{Error, Result};
use crate::par;
use crate::reference::{published_stats, Source, DEFAULT_SPACING, LENGTH_RATIO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Min,
    Max,
    MeanMinusSd,
    MeanPlusSd,
}

impl Experiment {
    pub const ALL: [Experiment; 4] = [
        Experiment::Min,
        Experiment::Max,
        Experiment::MeanMinusSd,
        Experiment::MeanPlusSd,
    ];
}

/// A perturbed value moved back inside its physical range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Clamp {
    pub param: InputParam,
    pub experiment: Experiment,
    pub requested: f64,
    pub used: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Perturbation {
    pub param: InputParam,
    /// Values in [`Experiment::ALL`] order.
    pub values: [f64; 4],
}

/// Baseline and perturbations for one dataset.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OatPlan {
    pub source: Source,
    pub baseline: ScourInputs,
    pub perturbations: Vec<Perturbation>,
    pub clamps: Vec<Clamp>,
}

/// Parameters varied for a dataset. Lab data fixes theta and the shape, and
/// has no pier lengths; field data has no critical velocities.
pub fn oat_params(source: Source) -> &'static [InputParam] {
    use InputParam::*;
    match source {
        Source::Field => &[Width, Length, Depth, Velocity, Angle, D50],
        Source::Lab => &[Width, Depth, Velocity, CriticalVelocity, D50],
    }
}

/// Fills the quantities that are derived rather than varied: the field
/// critical velocity from y1 and D50, the lab pier length from B.
pub fn complete(source: Source, x: &ScourInputs) -> ScourInputs {
    let mut out = *x;
    match source {
        Source::Field => {
            if let Some(d50) = x.d50_mm {
                if x.flow_depth > 0.0 {
                    out.critical_velocity = Some(critical_velocity(x.flow_depth, d50));
                }
            }
        }
        Source::Lab => out.pier_length = Some(LENGTH_RATIO * x.pier_width),
    }
    out
}

/// Smallest admissible value of a varied parameter. Non-positive values of
/// positive quantities fall back to the dataset minimum.
fn floor(source: Source, param: InputParam) -> f64 {
    match param {
        InputParam::Angle => 0.0,
        _ => published_stats(source, param).map_or(f64::MIN_POSITIVE, |s| s.min),
    }
}

fn needs_clamp(param: InputParam, v: f64) -> bool {
    match param {
        InputParam::Angle => v < 0.0,
        _ => v <= 0.0,
    }
}

impl OatPlan {
    /// The all-means baseline with the published ranges. The pier is
    /// cylindrical and spaced 3 m apart; field runs use the mean attack
    /// angle, lab runs theta = 0.
    pub fn for_source(source: Source) -> Result<Self> {
        let stat = |p: InputParam| {
            published_stats(source, p).ok_or_else(|| Error::Config(format!("no {source} statistics for {}", p.symbol())))
        };
        let mut baseline = ScourInputs::new(
            stat(InputParam::Width)?.mean,
            stat(InputParam::Depth)?.mean,
            stat(InputParam::Velocity)?.mean,
        )
        .with_shape(PierShape::Categorical(ShapeTag::Cylindrical))
        .with_spacing(DEFAULT_SPACING)
        .with_d50_mm(stat(InputParam::D50)?.mean);
        match source {
            Source::Field => {
                baseline = baseline
                    .with_length(stat(InputParam::Length)?.mean)
                    .with_angle(stat(InputParam::Angle)?.mean);
            }
            Source::Lab => {
                baseline = baseline
                    .with_critical_velocity(stat(InputParam::CriticalVelocity)?.mean)
                    .with_angle(0.0);
            }
        }

        let mut perturbations = Vec::new();
        let mut clamps = Vec::new();
        for &param in oat_params(source) {
            let s = stat(param)?;
            let requested = [s.min, s.max, s.mean - s.sd, s.mean + s.sd];
            let mut values = requested;
            for (i, v) in values.iter_mut().enumerate() {
                if needs_clamp(param, *v) {
                    let used = floor(source, param);
                    clamps.push(Clamp {
                        param,
                        experiment: Experiment::ALL[i],
                        requested: *v,
                        used,
                    });
                    *v = used;
                }
            }
            perturbations.push(Perturbation { param, values });
        }
        Ok(OatPlan {
            source,
            baseline: complete(source, &baseline),
            perturbations,
            clamps,
        })
    }

    /// Variant with theta = 0 at the baseline (the angle is still perturbed).
    pub fn with_zero_angle_baseline(mut self) -> Self {
        self.baseline.attack_angle = Some(0.0);
        self
    }

    /// Baseline with exactly one coordinate replaced, derived quantities
    /// recomputed.
    pub fn perturbed(&self, param: InputParam, value: f64) -> ScourInputs {
        let mut x = self.baseline;
        x.set(param, value);
        complete(self.source, &x)
    }
}

/// `100 f(x_i) / f(x_b)`.
pub fn spread(eq: EquationId, plan: &OatPlan, param: InputParam, value: f64) -> Result<f64> {
    spread_with(&|x| predict(eq, x), eq, plan, param, value)
}

fn spread_with<F>(f: &F, eq: EquationId, plan: &OatPlan, param: InputParam, value: f64) -> Result<f64>
where
    F: Fn(&ScourInputs) -> Result<f64>,
{
    let base = f(&plan.baseline)?;
    if base == 0.0 {
        return Err(Error::DegenerateBaseline(eq));
    }
    // ratio first, so an unchanged prediction gives exactly 100
    Ok(f(&plan.perturbed(param, value))? / base * 100.0)
}

/// `max t - min t`.
pub fn spread_delta(t: &[f64; 4]) -> f64 {
    let max = t.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = t.iter().copied().fold(f64::INFINITY, f64::min);
    max - min
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OatRow {
    pub param: InputParam,
    /// Spreads in [`Experiment::ALL`] order (percent).
    pub t: [f64; 4],
    pub t_delta: f64,
    /// 1 = most influential.
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OatResult {
    pub equation: EquationId,
    pub source: Source,
    pub baseline_ys: f64,
    /// In the plan's parameter order.
    pub rows: Vec<OatRow>,
    pub clamps: Vec<Clamp>,
}

impl OatResult {
    pub fn row(&self, param: InputParam) -> Option<&OatRow> {
        self.rows.iter().find(|r| r.param == param)
    }

    /// Parameters from most to least influential.
    pub fn ranking(&self) -> Vec<InputParam> {
        let mut rows: Vec<&OatRow> = self.rows.iter().collect();
        rows.sort_by_key(|r| r.rank);
        rows.into_iter().map(|r| r.param).collect()
    }
}

/// Runs the four experiments for every parameter of the source.
pub fn run_oat(eq: EquationId, source: Source) -> Result<OatResult> {
    run_oat_plan(eq, &OatPlan::for_source(source)?)
}

pub fn run_oat_plan(eq: EquationId, plan: &OatPlan) -> Result<OatResult> {
    run_oat_model(eq, plan, |x| predict(eq, x))
}

/// [`run_oat_plan`] with an arbitrary model standing in for the equation.
pub fn run_oat_model<F>(eq: EquationId, plan: &OatPlan, f: F) -> Result<OatResult>
where
    F: Fn(&ScourInputs) -> Result<f64> + Sync + Send,
{
    let baseline_ys = f(&plan.baseline)?;
    if baseline_ys == 0.0 {
        return Err(Error::DegenerateBaseline(eq));
    }
    let jobs: Vec<(usize, usize)> = (0..plan.perturbations.len())
        .flat_map(|i| (0..4).map(move |j| (i, j)))
        .collect();
    let ts = par::map_slice(&jobs, |&(i, j)| {
        let p = &plan.perturbations[i];
        spread_with(&f, eq, plan, p.param, p.values[j])
    })
    .into_iter()
    .collect::<Result<Vec<f64>>>()?;
    let mut rows = Vec::with_capacity(plan.perturbations.len());
    for (i, p) in plan.perturbations.iter().enumerate() {
        let t: [f64; 4] = ts[4 * i..4 * i + 4].try_into().expect("four experiments");
        rows.push(OatRow {
            param: p.param,
            t,
            t_delta: spread_delta(&t),
            rank: 0,
        });
    }
    let mut order: Vec<usize> = (0..rows.len()).collect();
    // stable sort keeps declaration order among ties
    order.sort_by(|&a, &b| rows[b].t_delta.total_cmp(&rows[a].t_delta));
    for (rank, &i) in order.iter().enumerate() {
        rows[i].rank = rank + 1;
    }
    Ok(OatResult {
        equation: eq,
        source: plan.source,
        baseline_ys,
        rows,
        clamps: plan.clamps.clone(),
    })
}

pub const CSV_HEADER: [&str; 8] = [
    "equation",
    "parameter",
    "t_min",
    "t_max",
    "t_mu_minus_sigma",
    "t_mu_plus_sigma",
    "t_delta",
    "rank",
];

pub fn write_csv<W: Write>(out: W, results: &[OatResult]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in results {
        for row in &r.rows {
            w.write_record([
                r.equation.key().to_string(),
                row.param.symbol().to_string(),
                row.t[0].to_string(),
                row.t[1].to_string(),
                row.t[2].to_string(),
                row.t[3].to_string(),
                row.t_delta.to_string(),
                row.rank.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}
