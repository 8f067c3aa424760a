//! Published parameter statistics and marginal distributions for the lab and
//! field datasets, published accuracy counts, and the resolution of the
//! bracket conventions used to print the distributions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distributions::{ParamDistribution, Truncated};
use crate::equations::{EquationId, InputParam, SHAPE_FACTOR_RANGE};
use crate::error::{Error, Result};

/// Which dataset a record or a parameter range comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Lab,
    Field,
}

impl Source {
    pub const ALL: [Source; 2] = [Source::Lab, Source::Field];

    pub fn as_str(self) -> &'static str {
        match self {
            Source::Lab => "lab",
            Source::Field => "field",
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Source {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lab" | "laboratory" => Ok(Source::Lab),
            "field" => Ok(Source::Field),
            _ => Err(Error::Config(format!("unknown source {s:?} (expected lab or field)"))),
        }
    }
}

/// Field records in the published dataset.
pub const FIELD_RECORDS: usize = 936;
/// Lab records in the published dataset.
pub const LAB_RECORDS: usize = 569;
/// Lab records behind the published accuracy counts (one fewer than above).
pub const LAB_RECORDS_SCORED: usize = 568;
/// Field records excluded from the y1 statistics for y1 = 0.
pub const FIELD_ZERO_DEPTH: usize = 6;
/// Field records excluded from the V1 statistics for V1 = 0.
pub const FIELD_ZERO_VELOCITY: usize = 13;
/// Field records without a pier length.
pub const FIELD_MISSING_LENGTH: usize = 309;
/// Mean of the known L/B ratios, used to impute missing lengths.
pub const LENGTH_RATIO: f64 = 11.7;
/// The alternative ratios used to test sensitivity to the imputation.
pub const LENGTH_RATIO_VARIANTS: [f64; 3] = [5.85, 11.7, 23.4];
/// Pier spacing assumed when none is recorded (m).
pub const DEFAULT_SPACING: f64 = 3.0;

/// min, max, mean and standard deviation of one parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub sd: f64,
}

const fn stats(min: f64, max: f64, mean: f64, sd: f64) -> Option<Stats> {
    Some(Stats { min, max, mean, sd })
}

/// A distribution exactly as printed, bracket values in printed order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PublishedDist {
    Gev([f64; 3]),
    Gamma([f64; 2]),
    LogNormal([f64; 2]),
    Uniform([f64; 2]),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamStatsRow {
    pub param: InputParam,
    pub field: Option<Stats>,
    pub field_dist: Option<PublishedDist>,
    pub lab: Option<Stats>,
    pub lab_dist: Option<PublishedDist>,
}

use InputParam as P;
use PublishedDist as D;

pub const PARAM_TABLE: [ParamStatsRow; 9] = [
    ParamStatsRow {
        param: P::Width,
        field: stats(0.29, 22.86, 1.23, 1.14),
        field_dist: Some(D::Gev([0.26, 0.82, 0.42])),
        lab: stats(0.02, 0.92, 0.11, 0.14),
        lab_dist: Some(D::Gev([0.50, 0.06, 0.032])),
    },
    ParamStatsRow {
        param: P::Length,
        field: stats(2.44, 74.88, 11.15, 5.49),
        field_dist: Some(D::Gev([0.015, 9.18, 3.12])),
        lab: None,
        lab_dist: None,
    },
    ParamStatsRow {
        param: P::Depth,
        field: stats(0.10, 22.52, 3.96, 3.07),
        field_dist: Some(D::Gev([0.23, 2.38, 1.87])),
        lab: stats(0.02, 1.90, 0.27, 0.24),
        lab_dist: Some(D::Gev([0.47, 0.15, 0.10])),
    },
    ParamStatsRow {
        param: P::Velocity,
        field: stats(0.02, 4.48, 1.26, 0.78),
        field_dist: Some(D::Gamma([2.23, 0.71])),
        lab: stats(0.15, 2.16, 0.51, 0.32),
        lab_dist: Some(D::Gev([0.40, 0.34, 0.16])),
    },
    ParamStatsRow {
        param: P::CriticalVelocity,
        field: None,
        field_dist: None,
        lab: stats(0.22, 1.27, 0.44, 0.22),
        lab_dist: Some(D::Gev([0.50, 0.33, 0.089])),
    },
    ParamStatsRow {
        param: P::Angle,
        field: stats(0.0, 85.00, 19.91, 17.55),
        field_dist: Some(D::Gev([0.37, 11.18, 8.36])),
        lab: None,
        lab_dist: None,
    },
    ParamStatsRow {
        param: P::D50,
        field: stats(0.01, 108.00, 19.08, 28.04),
        field_dist: Some(D::LogNormal([1.25, 2.12])),
        lab: stats(0.22, 7.80, 1.23, 1.41),
        lab_dist: Some(D::Gev([0.85, 0.50, 0.38])),
    },
    ParamStatsRow {
        param: P::Shape,
        field: None,
        field_dist: Some(D::Uniform([0.9, 2.0])),
        lab: None,
        lab_dist: Some(D::Uniform([0.9, 2.0])),
    },
    ParamStatsRow {
        param: P::Spacing,
        field: None,
        field_dist: Some(D::Uniform([1.0, 30.0])),
        lab: None,
        lab_dist: Some(D::Uniform([1.0, 5.0])),
    },
];

pub fn param_row(param: InputParam) -> &'static ParamStatsRow {
    PARAM_TABLE.iter().find(|r| r.param == param).expect("every parameter has a row")
}

pub fn published_stats(source: Source, param: InputParam) -> Option<Stats> {
    let row = param_row(param);
    match source {
        Source::Lab => row.lab,
        Source::Field => row.field,
    }
}

pub fn published_dist(source: Source, param: InputParam) -> Option<PublishedDist> {
    let row = param_row(param);
    match source {
        Source::Lab => row.lab_dist,
        Source::Field => row.field_dist,
    }
}

/// How the three GEV bracket values are ordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GevOrder {
    ShapeScaleLocation,
    ShapeLocationScale,
}

/// Whether the second Gamma bracket value is a scale or a rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GammaOrder {
    ShapeScale,
    ShapeRate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Conventions {
    pub gev: GevOrder,
    pub gamma: GammaOrder,
}

impl PublishedDist {
    pub fn to_distribution(self, conv: Conventions) -> Result<ParamDistribution> {
        match self {
            D::Gev([k, a, b]) => match conv.gev {
                GevOrder::ShapeScaleLocation => ParamDistribution::gev(k, a, b),
                GevOrder::ShapeLocationScale => ParamDistribution::gev(k, b, a),
            },
            D::Gamma([k, t]) => match conv.gamma {
                GammaOrder::ShapeScale => ParamDistribution::gamma(k, t),
                GammaOrder::ShapeRate => ParamDistribution::gamma(k, 1.0 / t),
            },
            D::LogNormal([m, s]) => ParamDistribution::lognormal(m, s),
            D::Uniform([lo, hi]) => ParamDistribution::uniform(lo, hi),
        }
    }
}

/// Moment comparison of one printed distribution under one reading.
#[derive(Debug, Clone, Serialize)]
pub struct MomentCheck {
    pub source: Source,
    pub param: InputParam,
    pub reading: String,
    pub implied_mean: Option<f64>,
    pub implied_sd: Option<f64>,
    pub published_mean: f64,
    pub published_sd: f64,
    /// |mean error| / sd, plus |ln(sd ratio)| when the implied sd is finite.
    pub discrepancy: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConventionReport {
    pub chosen: Conventions,
    pub checks: Vec<MomentCheck>,
    pub gev_totals: [(String, f64); 2],
    pub gamma_totals: [(String, f64); 2],
}

fn discrepancy(d: &ParamDistribution, s: &Stats) -> f64 {
    let mut score = 0.0;
    match d.mean() {
        Some(m) => score += (m - s.mean).abs() / s.sd,
        None => score += 10.0,
    }
    if let Some(sd) = d.std_dev() {
        score += (sd / s.sd).ln().abs();
    }
    score
}

/// Chooses the GEV and Gamma bracket readings whose implied moments best
/// match the published mean and standard deviation, summed over every row.
///
/// The literal GEV reading (shape, scale, location) is kept unless the
/// alternative is strictly closer overall; likewise shape/scale for Gamma.
pub fn resolve_conventions() -> ConventionReport {
    let mut checks = Vec::new();
    let mut gev = [0.0; 2];
    let mut gam = [0.0; 2];
    let gev_orders = [GevOrder::ShapeScaleLocation, GevOrder::ShapeLocationScale];
    let gamma_orders = [GammaOrder::ShapeScale, GammaOrder::ShapeRate];
    for row in &PARAM_TABLE {
        for source in Source::ALL {
            let (Some(pd), Some(st)) = (published_dist(source, row.param), published_stats(source, row.param))
            else {
                continue;
            };
            let readings: Vec<(String, Conventions, usize)> = match pd {
                D::Gev(_) => gev_orders
                    .iter()
                    .enumerate()
                    .map(|(i, &o)| (format!("{o:?}"), Conventions { gev: o, gamma: GammaOrder::ShapeScale }, i))
                    .collect(),
                D::Gamma(_) => gamma_orders
                    .iter()
                    .enumerate()
                    .map(|(i, &o)| (format!("{o:?}"), Conventions { gev: GevOrder::ShapeScaleLocation, gamma: o }, i))
                    .collect(),
                _ => continue,
            };
            for (name, conv, i) in readings {
                let Ok(d) = pd.to_distribution(conv) else { continue };
                let score = discrepancy(&d, &st);
                match pd {
                    D::Gev(_) => gev[i] += score,
                    _ => gam[i] += score,
                }
                checks.push(MomentCheck {
                    source,
                    param: row.param,
                    reading: name,
                    implied_mean: d.mean(),
                    implied_sd: d.std_dev(),
                    published_mean: st.mean,
                    published_sd: st.sd,
                    discrepancy: score,
                });
            }
        }
    }
    let chosen = Conventions {
        gev: if gev[1] < gev[0] { gev_orders[1] } else { gev_orders[0] },
        gamma: if gam[1] < gam[0] { gamma_orders[1] } else { gamma_orders[0] },
    };
    ConventionReport {
        chosen,
        checks,
        gev_totals: [
            (format!("{:?}", gev_orders[0]), gev[0]),
            (format!("{:?}", gev_orders[1]), gev[1]),
        ],
        gamma_totals: [
            (format!("{:?}", gamma_orders[0]), gam[0]),
            (format!("{:?}", gamma_orders[1]), gam[1]),
        ],
    }
}

/// The conventions picked by [`resolve_conventions`].
pub fn conventions() -> Conventions {
    resolve_conventions().chosen
}

/// Physical range of a parameter: lengths, velocities and grain size are
/// positive, the attack angle lies in [0, 90] degrees.
pub fn physical_bounds(param: InputParam) -> (f64, f64) {
    match param {
        P::Angle => (0.0, 90.0),
        P::Shape => SHAPE_FACTOR_RANGE,
        _ => (0.0, f64::INFINITY),
    }
}

/// The published marginal for `param`, truncated to its physical range.
pub fn published_marginal(source: Source, param: InputParam) -> Result<Truncated> {
    let pd = published_dist(source, param)
        .ok_or_else(|| Error::Config(format!("no published {source} distribution for {}", param.symbol())))?;
    let d = pd.to_distribution(conventions())?;
    let (lo, hi) = physical_bounds(param);
    Truncated::new(d, lo, hi)
}

/// One published accuracy row: (n, %) for under, over, within ±50% and
/// within a factor of 1.5.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PublishedAccuracy {
    pub equation: EquationId,
    /// Records behind the row.
    pub n: usize,
    pub under: (usize, f64),
    pub over: (usize, f64),
    pub pm50: (usize, f64),
    pub factor15: (usize, f64),
}

/// The three published accuracy blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Block {
    Lab,
    Field,
    FieldUpTo2m,
}

impl Block {
    pub const ALL: [Block; 3] = [Block::Lab, Block::Field, Block::FieldUpTo2m];

    pub fn as_str(self) -> &'static str {
        match self {
            Block::Lab => "lab",
            Block::Field => "field",
            Block::FieldUpTo2m => "field<=2m",
        }
    }
}

const fn acc_row(
    equation: EquationId,
    n: usize,
    under: (usize, f64),
    over: (usize, f64),
    pm50: (usize, f64),
    factor15: (usize, f64),
) -> PublishedAccuracy {
    PublishedAccuracy { equation, n, under, over, pm50, factor15 }
}

use EquationId as E;

pub const ACCURACY_LAB: [PublishedAccuracy; 8] = [
    acc_row(E::Ciria, 568, (498, 87.5), (71, 12.5), (277, 48.7), (267, 46.9)),
    acc_row(E::Tamu, 568, (325, 57.1), (244, 42.9), (304, 53.4), (254, 44.6)),
    acc_row(E::Hec18, 568, (138, 24.3), (431, 75.7), (472, 83.0), (402, 70.7)),
    acc_row(E::Melville, 568, (541, 95.1), (28, 4.90), (51, 9.00), (42, 7.4)),
    acc_row(E::Froehlich, 568, (52, 9.1), (517, 90.9), (157, 27.6), (83, 14.6)),
    acc_row(E::MelvilleSutherland, 568, (306, 53.8), (263, 46.2), (119, 20.9), (64, 11.2)),
    acc_row(E::Chitale, 568, (34, 6.0), (535, 94.0), (44, 7.7), (22, 3.9)),
    acc_row(E::Laursen, 568, (105, 18.5), (464, 81.5), (464, 81.5), (416, 73.1)),
];

pub const ACCURACY_FIELD: [PublishedAccuracy; 8] = [
    acc_row(E::Ciria, 936, (178, 19.0), (758, 81.0), (339, 36.2), (232, 24.8)),
    acc_row(E::Tamu, 936, (113, 12.1), (732, 78.2), (142, 15.2), (87, 9.3)),
    acc_row(E::Hec18, 936, (97, 10.4), (839, 89.6), (207, 22.1), (135, 14.4)),
    acc_row(E::Melville, 936, (54, 5.8), (882, 94.2), (71, 7.60), (38, 4.1)),
    acc_row(E::Froehlich, 936, (641, 68.5), (295, 31.5), (272, 29.1), (226, 24.1)),
    acc_row(E::MelvilleSutherland, 936, (131, 14.0), (805, 86.0), (203, 21.7), (97, 10.4)),
    acc_row(E::Chitale, 936, (17, 1.8), (919, 98.2), (44, 4.7), (22, 2.4)),
    acc_row(E::Laursen, 936, (20, 2.1), (916, 97.9), (172, 18.4), (63, 6.7)),
];

pub const ACCURACY_FIELD_2M: [PublishedAccuracy; 8] = [
    acc_row(E::Ciria, 619, (161, 23.3), (458, 74.0), (267, 38.6), (184, 26.6)),
    acc_row(E::Tamu, 495, (204, 41.2), (291, 58.8), (119, 24.0), (75, 15.2)),
    acc_row(E::Hec18, 548, (90, 16.4), (458, 83.6), (131, 23.9), (91, 16.6)),
    acc_row(E::Melville, 512, (53, 21.8), (190, 78.2), (65, 26.7), (35, 14.4)),
    acc_row(E::Froehlich, 916, (641, 70.0), (275, 30.0), (271, 29.6), (225, 24.6)),
    acc_row(E::MelvilleSutherland, 512, (128, 25.0), (384, 75.0), (129, 25.2), (73, 14.3)),
    acc_row(E::Chitale, 162, (17, 10.6), (144, 89.4), (37, 23.0), (21, 13.0)),
    acc_row(E::Laursen, 446, (12, 2.7), (434, 97.3), (67, 15.0), (20, 4.5)),
];

pub fn published_accuracy(block: Block) -> &'static [PublishedAccuracy; 8] {
    match block {
        Block::Lab => &ACCURACY_LAB,
        Block::Field => &ACCURACY_FIELD,
        Block::FieldUpTo2m => &ACCURACY_FIELD_2M,
    }
}

pub fn published_accuracy_row(block: Block, eq: EquationId) -> &'static PublishedAccuracy {
    &published_accuracy(block)[eq.index()]
}
