//! The eight empirical local pier-scour equations.
//!
//! Every equation is a pure function of [`ScourInputs`] and its correction
//! factor table. Lengths are in metres except `d50_mm`; the median grain size
//! is converted to metres only where an equation forms a ratio with it.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factors::{FactorTable, FactorTables};

/// Gravitational acceleration (m/s²).
pub const G: f64 = 9.81;

/// Admissible range of the continuous nose-shape multiplier.
pub const SHAPE_FACTOR_RANGE: (f64, f64) = (0.9, 2.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EquationId {
    Ciria,
    Tamu,
    Hec18,
    Melville,
    Froehlich,
    MelvilleSutherland,
    Chitale,
    Laursen,
}

impl EquationId {
    pub const ALL: [EquationId; 8] = [
        EquationId::Ciria,
        EquationId::Tamu,
        EquationId::Hec18,
        EquationId::Melville,
        EquationId::Froehlich,
        EquationId::MelvilleSutherland,
        EquationId::Chitale,
        EquationId::Laursen,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Short machine name, used on the command line and in reports.
    pub fn key(self) -> &'static str {
        match self {
            EquationId::Ciria => "ciria",
            EquationId::Tamu => "tamu",
            EquationId::Hec18 => "hec18",
            EquationId::Melville => "melville",
            EquationId::Froehlich => "froehlich",
            EquationId::MelvilleSutherland => "melville-sutherland",
            EquationId::Chitale => "chitale",
            EquationId::Laursen => "laursen",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            EquationId::Ciria => "CIRIA",
            EquationId::Tamu => "TAMU",
            EquationId::Hec18 => "HEC-18",
            EquationId::Melville => "Melville",
            EquationId::Froehlich => "Froehlich",
            EquationId::MelvilleSutherland => "Melville & Sutherland",
            EquationId::Chitale => "Chitale",
            EquationId::Laursen => "Laursen",
        }
    }

    /// Input parameters the equation consumes.
    pub fn inputs(self) -> &'static [InputParam] {
        use InputParam::*;
        match self {
            EquationId::Ciria => &[Width, Length, Depth, Velocity, CriticalVelocity, Angle, Shape],
            EquationId::Tamu => &[
                Width,
                Length,
                Depth,
                Velocity,
                CriticalVelocity,
                Angle,
                Shape,
                Spacing,
            ],
            EquationId::Hec18 => &[Width, Length, Depth, Velocity, Angle, Shape],
            EquationId::Melville | EquationId::MelvilleSutherland => &[
                Width,
                Length,
                Depth,
                Velocity,
                CriticalVelocity,
                D50,
                Angle,
                Shape,
            ],
            EquationId::Froehlich => &[Width, Length, Depth, Velocity, D50, Angle, Shape],
            EquationId::Chitale => &[Depth, Velocity],
            EquationId::Laursen => &[Width, Length, Depth, Angle, Shape],
        }
    }

    pub fn uses(self, p: InputParam) -> bool {
        self.inputs().contains(&p)
    }
}

impl fmt::Display for EquationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.display_name())
    }
}

impl FromStr for EquationId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        EquationId::ALL
            .into_iter()
            .find(|eq| {
                let k: String = eq.key().chars().filter(|c| c.is_ascii_alphanumeric()).collect();
                k == norm
            })
            .ok_or_else(|| Error::Config(format!("unknown equation {s:?}")))
    }
}

/// Names of the quantities in [`ScourInputs`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum InputParam {
    Width,
    Length,
    Depth,
    Velocity,
    CriticalVelocity,
    Angle,
    D50,
    Shape,
    Spacing,
}

impl InputParam {
    pub const ALL: [InputParam; 9] = [
        InputParam::Width,
        InputParam::Length,
        InputParam::Depth,
        InputParam::Velocity,
        InputParam::CriticalVelocity,
        InputParam::Angle,
        InputParam::D50,
        InputParam::Shape,
        InputParam::Spacing,
    ];

    /// Conventional symbol: B, L, y1, V1, Vc, theta, D50, Sh, S.
    pub fn symbol(self) -> &'static str {
        match self {
            InputParam::Width => "B",
            InputParam::Length => "L",
            InputParam::Depth => "y1",
            InputParam::Velocity => "V1",
            InputParam::CriticalVelocity => "Vc",
            InputParam::Angle => "theta",
            InputParam::D50 => "D50",
            InputParam::Shape => "Sh",
            InputParam::Spacing => "S",
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            InputParam::Width | InputParam::Length | InputParam::Depth | InputParam::Spacing => "m",
            InputParam::Velocity | InputParam::CriticalVelocity => "m/s",
            InputParam::Angle => "deg",
            InputParam::D50 => "mm",
            InputParam::Shape => "-",
        }
    }

    /// Hydraulic (flow) parameters as opposed to geometry or sediment.
    pub fn is_hydraulic(self) -> bool {
        matches!(
            self,
            InputParam::Depth | InputParam::Velocity | InputParam::CriticalVelocity
        )
    }
}

impl fmt::Display for InputParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for InputParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        InputParam::ALL
            .into_iter()
            .find(|p| p.symbol().to_ascii_lowercase() == lower)
            .ok_or_else(|| Error::Config(format!("unknown parameter {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ShapeTag {
    Cylindrical,
    RoundNose,
    SquareNose,
    SharpNose,
    Group,
}

impl ShapeTag {
    pub const ALL: [ShapeTag; 5] = [
        ShapeTag::Cylindrical,
        ShapeTag::RoundNose,
        ShapeTag::SquareNose,
        ShapeTag::SharpNose,
        ShapeTag::Group,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ShapeTag::Cylindrical => "cylindrical",
            ShapeTag::RoundNose => "round-nose",
            ShapeTag::SquareNose => "square-nose",
            ShapeTag::SharpNose => "sharp-nose",
            ShapeTag::Group => "group",
        }
    }
}

impl FromStr for ShapeTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace(['_', ' '], "-");
        let tag = match norm.as_str() {
            "cylindrical" | "circular" | "cylinder" => ShapeTag::Cylindrical,
            "round-nose" | "round" | "rounded" => ShapeTag::RoundNose,
            "square-nose" | "square" | "rectangular" => ShapeTag::SquareNose,
            "sharp-nose" | "sharp" | "lenticular" => ShapeTag::SharpNose,
            "group" | "group-of-cylinders" | "pile-group" => ShapeTag::Group,
            _ => return Err(Error::domain(format!("unknown pier shape {s:?}"))),
        };
        Ok(tag)
    }
}

/// Pier nose shape: a categorical tag looked up per equation, or a continuous
/// multiplier that replaces the equation's shape factor outright.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PierShape {
    Categorical(ShapeTag),
    ContinuousFactor(f64),
}

impl fmt::Display for PierShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PierShape::Categorical(tag) => f.write_str(tag.as_str()),
            PierShape::ContinuousFactor(v) => write!(f, "{v}"),
        }
    }
}

impl FromStr for PierShape {
    type Err = Error;

    /// Accepts a tag name or a bare number (continuous factor).
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().parse::<f64>() {
            Ok(v) => Ok(PierShape::ContinuousFactor(v)),
            Err(_) => s.parse().map(PierShape::Categorical),
        }
    }
}

/// The parameter vector an equation consumes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScourInputs {
    /// B (m)
    pub pier_width: f64,
    /// L (m)
    pub pier_length: Option<f64>,
    /// y1 (m)
    pub flow_depth: f64,
    /// V1 (m/s)
    pub velocity: f64,
    /// Vc (m/s)
    pub critical_velocity: Option<f64>,
    /// theta (degrees)
    pub attack_angle: Option<f64>,
    /// D50 (mm)
    pub d50_mm: Option<f64>,
    pub shape: Option<PierShape>,
    /// S (m)
    pub spacing: Option<f64>,
}

impl ScourInputs {
    /// Inputs with only the always-required quantities set.
    pub fn new(pier_width: f64, flow_depth: f64, velocity: f64) -> Self {
        ScourInputs {
            pier_width,
            pier_length: None,
            flow_depth,
            velocity,
            critical_velocity: None,
            attack_angle: None,
            d50_mm: None,
            shape: None,
            spacing: None,
        }
    }

    pub fn with_length(mut self, l: f64) -> Self {
        self.pier_length = Some(l);
        self
    }

    pub fn with_critical_velocity(mut self, vc: f64) -> Self {
        self.critical_velocity = Some(vc);
        self
    }

    pub fn with_angle(mut self, theta: f64) -> Self {
        self.attack_angle = Some(theta);
        self
    }

    pub fn with_d50_mm(mut self, d50: f64) -> Self {
        self.d50_mm = Some(d50);
        self
    }

    pub fn with_shape(mut self, shape: PierShape) -> Self {
        self.shape = Some(shape);
        self
    }

    pub fn with_spacing(mut self, s: f64) -> Self {
        self.spacing = Some(s);
        self
    }

    /// Value of `p`, `None` when absent. The shape is reported only when it
    /// is a continuous factor.
    pub fn get(&self, p: InputParam) -> Option<f64> {
        match p {
            InputParam::Width => Some(self.pier_width),
            InputParam::Length => self.pier_length,
            InputParam::Depth => Some(self.flow_depth),
            InputParam::Velocity => Some(self.velocity),
            InputParam::CriticalVelocity => self.critical_velocity,
            InputParam::Angle => self.attack_angle,
            InputParam::D50 => self.d50_mm,
            InputParam::Shape => match self.shape {
                Some(PierShape::ContinuousFactor(v)) => Some(v),
                _ => None,
            },
            InputParam::Spacing => self.spacing,
        }
    }

    /// Sets `p` to `value`; `Shape` becomes a continuous factor.
    pub fn set(&mut self, p: InputParam, value: f64) {
        match p {
            InputParam::Width => self.pier_width = value,
            InputParam::Length => self.pier_length = Some(value),
            InputParam::Depth => self.flow_depth = value,
            InputParam::Velocity => self.velocity = value,
            InputParam::CriticalVelocity => self.critical_velocity = Some(value),
            InputParam::Angle => self.attack_angle = Some(value),
            InputParam::D50 => self.d50_mm = Some(value),
            InputParam::Shape => self.shape = Some(PierShape::ContinuousFactor(value)),
            InputParam::Spacing => self.spacing = Some(value),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |name: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::domain(format!("{name} must be finite")))
            }
        };
        finite("B", self.pier_width)?;
        finite("y1", self.flow_depth)?;
        finite("V1", self.velocity)?;
        if self.pier_width <= 0.0 {
            return Err(Error::domain("B must be > 0"));
        }
        if self.flow_depth < 0.0 {
            return Err(Error::domain("y1 must be >= 0"));
        }
        if self.velocity < 0.0 {
            return Err(Error::domain("V1 must be >= 0"));
        }
        if let Some(l) = self.pier_length {
            finite("L", l)?;
            if l <= 0.0 {
                return Err(Error::domain("L must be > 0"));
            }
        }
        if let Some(vc) = self.critical_velocity {
            finite("Vc", vc)?;
            if vc <= 0.0 {
                return Err(Error::domain("Vc must be > 0"));
            }
        }
        if let Some(t) = self.attack_angle {
            finite("theta", t)?;
            if !(0.0..=90.0).contains(&t) {
                return Err(Error::domain(format!("theta = {t} outside [0, 90] degrees")));
            }
        }
        if let Some(d) = self.d50_mm {
            finite("D50", d)?;
            if d <= 0.0 {
                return Err(Error::domain("D50 must be > 0"));
            }
        }
        if let Some(PierShape::ContinuousFactor(v)) = self.shape {
            let (lo, hi) = SHAPE_FACTOR_RANGE;
            if !(lo..=hi).contains(&v) {
                return Err(Error::domain(format!("shape factor {v} outside [{lo}, {hi}]")));
            }
        }
        if let Some(s) = self.spacing {
            finite("S", s)?;
        }
        Ok(())
    }
}

/// A prediction together with the correction factors that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    /// Scour depth (m).
    pub depth: f64,
    pub factors: Vec<(&'static str, f64)>,
}

/// Froude number `V / sqrt(g * length)`.
pub fn froude(velocity: f64, length_scale: f64) -> Result<f64> {
    if !(length_scale > 0.0) {
        return Err(Error::domain(format!(
            "Froude length scale must be > 0, got {length_scale}"
        )));
    }
    if velocity < 0.0 {
        return Err(Error::domain("Froude velocity must be >= 0"));
    }
    Ok(velocity / (G * length_scale).sqrt())
}

/// Pier width projected normal to the flow: `B cos(theta) + L sin(theta)`.
pub fn effective_width(width: f64, length: f64, theta_deg: f64) -> f64 {
    let t = theta_deg.to_radians();
    width * t.cos() + length * t.sin()
}

/// Critical velocity for incipient motion, `Ku y1^(1/6) D50^(1/3)` (SI).
pub fn critical_velocity(flow_depth: f64, d50_mm: f64) -> f64 {
    critical_velocity_with(flow_depth, d50_mm, FactorTables::embedded().table(EquationId::Hec18))
}

fn critical_velocity_with(flow_depth: f64, d50_mm: f64, hec18: &FactorTable) -> f64 {
    let ku = hec18.get_or("critical.ku", 6.19);
    ku * flow_depth.powf(1.0 / 6.0) * (d50_mm / 1000.0).cbrt()
}

/// Skew factor fitted to the Laursen & Toch chart,
/// `(cos(theta) + min(L/B, cap) sin(theta))^exponent`.
pub fn skew_factor(theta_deg: f64, length_ratio: f64, exponent: f64, max_ratio: f64) -> f64 {
    let t = theta_deg.to_radians();
    (t.cos() + length_ratio.min(max_ratio) * t.sin()).powf(exponent)
}

/// Predicts scour depth (m) with the embedded factor tables.
pub fn predict(eq: EquationId, inputs: &ScourInputs) -> Result<f64> {
    predict_detailed(eq, inputs, FactorTables::embedded()).map(|p| p.depth)
}

/// Predicts scour depth and reports the applied correction factors.
pub fn predict_detailed(
    eq: EquationId,
    inputs: &ScourInputs,
    tables: &FactorTables,
) -> Result<Prediction> {
    inputs.validate()?;
    let table = tables.table(eq);
    let pred = match eq {
        EquationId::Ciria => ciria(inputs, table)?,
        EquationId::Tamu => tamu(inputs, table)?,
        EquationId::Hec18 => hec18(inputs, table)?,
        EquationId::Melville => melville(inputs, table)?,
        EquationId::Froehlich => froehlich(inputs, table)?,
        EquationId::MelvilleSutherland => melville_sutherland(inputs, table)?,
        EquationId::Chitale => chitale(inputs)?,
        EquationId::Laursen => laursen(inputs, table)?,
    };
    debug_assert!(pred.depth >= 0.0 && pred.depth.is_finite(), "{eq}: {}", pred.depth);
    Ok(pred)
}

struct Required<'a> {
    eq: EquationId,
    inputs: &'a ScourInputs,
}

impl Required<'_> {
    fn get(&self, p: InputParam) -> Result<f64> {
        let v = match p {
            InputParam::Shape => None,
            _ => self.inputs.get(p),
        };
        v.ok_or(Error::IncompleteInputs {
            equation: self.eq,
            parameter: p.symbol(),
        })
    }

    fn shape(&self) -> Result<PierShape> {
        self.inputs.shape.ok_or(Error::IncompleteInputs {
            equation: self.eq,
            parameter: InputParam::Shape.symbol(),
        })
    }
}

fn shape_factor(table: &FactorTable, shape: PierShape, theta_deg: f64) -> Result<f64> {
    match shape {
        PierShape::ContinuousFactor(v) => Ok(v),
        PierShape::Categorical(tag) => {
            let max_skew = table.get_or("shape.max_skew_deg", f64::INFINITY);
            if theta_deg > max_skew {
                Ok(1.0)
            } else {
                table.shape(tag)
            }
        }
    }
}

fn table_skew(table: &FactorTable, theta: f64, width: f64, length: f64) -> Result<f64> {
    Ok(skew_factor(
        theta,
        length / width,
        table.get("angle.exponent")?,
        table.get_or("angle.max_length_ratio", f64::INFINITY),
    ))
}

/// Depth factor shared by CIRIA and Melville, as a multiple of `B`.
fn width_depth_factor(table: &FactorTable, prefix: &str, width: f64, depth: f64) -> Result<f64> {
    if depth == 0.0 {
        return Ok(0.0);
    }
    let key = |k: &str| format!("{prefix}.{k}");
    let ratio = width / depth;
    let f = if ratio < table.get(&key("narrow_limit"))? {
        table.get(&key("narrow_coeff"))?
    } else if ratio <= table.get(&key("wide_limit"))? {
        table.get(&key("transition_coeff"))? * (depth / width).sqrt()
    } else {
        table.get(&key("wide_coeff"))? * depth / width
    };
    Ok(f)
}

fn sediment_factor(table: &FactorTable, width: f64, d50_mm: f64) -> Result<f64> {
    let ratio = width / (d50_mm / 1000.0);
    if ratio > table.get("sediment.limit")? {
        return Ok(1.0);
    }
    let f = table.get("sediment.coeff")? * (table.get("sediment.inner")? * ratio).log10();
    Ok(f.clamp(0.0, 1.0))
}

fn velocity_ratio(velocity: f64, critical: f64) -> f64 {
    (velocity / critical).min(1.0)
}

/// `B * Kshape * Kdepth * Kvelocity * Kangle`.
pub fn ciria_formula(width: f64, k_shape: f64, k_depth: f64, k_velocity: f64, k_angle: f64) -> f64 {
    width * k_shape * k_depth * k_velocity * k_angle
}

pub fn ciria(inputs: &ScourInputs, table: &FactorTable) -> Result<Prediction> {
    let r = Required { eq: EquationId::Ciria, inputs };
    let b = inputs.pier_width;
    let l = r.get(InputParam::Length)?;
    let y1 = inputs.flow_depth;
    let vc = r.get(InputParam::CriticalVelocity)?;
    let theta = r.get(InputParam::Angle)?;
    let k_shape = shape_factor(table, r.shape()?, theta)?;
    let k_depth = width_depth_factor(table, "depth", b, y1)?;
    let k_velocity = velocity_ratio(inputs.velocity, vc).min(table.get_or("velocity.cap", 1.0));
    let k_angle = table_skew(table, theta, b, l)?;
    Ok(Prediction {
        depth: ciria_formula(b, k_shape, k_depth, k_velocity, k_angle),
        factors: vec![
            ("Kshape", k_shape),
            ("Kdepth", k_depth),
            ("Kvelocity", k_velocity),
            ("Kangle", k_angle),
        ],
    })
}

/// `2.2 B' Kpw Kpsh Kpa Kpsp max(0, 2.6 F - Fc)^0.7`.
pub fn tamu_formula(effective_width: f64, k_product: f64, froude_pier: f64, froude_critical: f64) -> f64 {
    let base = (2.6 * froude_pier - froude_critical).max(0.0);
    2.2 * effective_width * k_product * base.powf(0.7)
}

pub fn tamu(inputs: &ScourInputs, table: &FactorTable) -> Result<Prediction> {
    let r = Required { eq: EquationId::Tamu, inputs };
    let l = r.get(InputParam::Length)?;
    let vc = r.get(InputParam::CriticalVelocity)?;
    let theta = r.get(InputParam::Angle)?;
    let s = r.get(InputParam::Spacing)?;
    if s <= 0.0 {
        return Err(Error::domain(format!("TAMU spacing S must be > 0, got {s}")));
    }
    let bp = effective_width(inputs.pier_width, l, theta);
    let f_pier = froude(inputs.velocity, bp)?;
    let f_crit = froude(vc, bp)?;
    let depth_ratio = inputs.flow_depth / bp;
    let k_pw = if depth_ratio < table.get("water_depth.limit")? {
        table.get("water_depth.coeff")? * depth_ratio.powf(table.get("water_depth.exponent")?)
    } else {
        1.0
    };
    let k_psh = shape_factor(table, r.shape()?, theta)?;
    let k_pa = table.get("aspect")?;
    let k_psp = (table.get("spacing.coeff")? * (s / bp).powf(table.get("spacing.exponent")?)).max(1.0);
    Ok(Prediction {
        depth: tamu_formula(bp, k_pw * k_psh * k_pa * k_psp, f_pier, f_crit),
        factors: vec![
            ("B'", bp),
            ("Kpw", k_pw),
            ("Kpsh", k_psh),
            ("Kpa", k_pa),
            ("Kpsp", k_psp),
            ("F(pier)", f_pier),
            ("Fc(pier)", f_crit),
        ],
    })
}

/// `2.0 y1 K1 K2 K3 (B/y1)^0.65 Fr1^0.43`.
pub fn hec18_formula(depth: f64, width: f64, froude: f64, k1: f64, k2: f64, k3: f64) -> f64 {
    2.0 * depth * k1 * k2 * k3 * (width / depth).powf(0.65) * froude.powf(0.43)
}

pub fn hec18(inputs: &ScourInputs, table: &FactorTable) -> Result<Prediction> {
    let r = Required { eq: EquationId::Hec18, inputs };
    let l = r.get(InputParam::Length)?;
    let theta = r.get(InputParam::Angle)?;
    let y1 = inputs.flow_depth;
    if y1 == 0.0 {
        return Err(Error::domain("HEC-18 requires y1 > 0"));
    }
    let fr = froude(inputs.velocity, y1)?;
    let k1 = shape_factor(table, r.shape()?, theta)?;
    let k2 = table_skew(table, theta, inputs.pier_width, l)?;
    let k3 = table.get("bed")?;
    Ok(Prediction {
        depth: hec18_formula(y1, inputs.pier_width, fr, k1, k2, k3),
        factors: vec![("K1", k1), ("K2", k2), ("K3", k3), ("Fr1", fr)],
    })
}

/// `Ks Ktheta KI KyB KG Kd`; `k_yb` carries the length dimension.
pub fn melville_formula(k_s: f64, k_theta: f64, k_i: f64, k_yb: f64, k_g: f64, k_d: f64) -> f64 {
    k_s * k_theta * k_i * k_yb * k_g * k_d
}

pub fn melville(inputs: &ScourInputs, table: &FactorTable) -> Result<Prediction> {
    let r = Required { eq: EquationId::Melville, inputs };
    let b = inputs.pier_width;
    let l = r.get(InputParam::Length)?;
    let vc = r.get(InputParam::CriticalVelocity)?;
    let d50 = r.get(InputParam::D50)?;
    let theta = r.get(InputParam::Angle)?;
    let k_s = shape_factor(table, r.shape()?, theta)?;
    let k_theta = table_skew(table, theta, b, l)?;
    let k_i = velocity_ratio(inputs.velocity, vc).min(table.get_or("intensity.cap", 1.0));
    let k_yb = b * width_depth_factor(table, "flow_depth", b, inputs.flow_depth)?;
    let k_g = table.get("geometry")?;
    let k_d = sediment_factor(table, b, d50)?;
    Ok(Prediction {
        depth: melville_formula(k_s, k_theta, k_i, k_yb, k_g, k_d),
        factors: vec![
            ("Ks", k_s),
            ("Ktheta", k_theta),
            ("KI", k_i),
            ("KyB", k_yb),
            ("KG", k_g),
            ("Kd", k_d),
        ],
    })
}

/// `0.32 B phi (B'/B)^0.62 (y1/B)^0.46 Fr^0.20 (B/D50)^0.08` with D50 in metres.
pub fn froehlich_formula(
    width: f64,
    effective_width: f64,
    depth: f64,
    froude: f64,
    d50_m: f64,
    phi: f64,
) -> f64 {
    0.32 * width
        * phi
        * (effective_width / width).powf(0.62)
        * (depth / width).powf(0.46)
        * froude.powf(0.20)
        * (width / d50_m).powf(0.08)
}

pub fn froehlich(inputs: &ScourInputs, table: &FactorTable) -> Result<Prediction> {
    let r = Required { eq: EquationId::Froehlich, inputs };
    let b = inputs.pier_width;
    let l = r.get(InputParam::Length)?;
    let d50 = r.get(InputParam::D50)?;
    let theta = r.get(InputParam::Angle)?;
    if inputs.flow_depth == 0.0 {
        return Err(Error::domain("Froehlich requires y1 > 0"));
    }
    let bp = effective_width(b, l, theta);
    let fr = froude(inputs.velocity, inputs.flow_depth)?;
    let phi = shape_factor(table, r.shape()?, theta)?;
    Ok(Prediction {
        depth: froehlich_formula(b, bp, inputs.flow_depth, fr, d50 / 1000.0, phi),
        factors: vec![("phi", phi), ("B'", bp), ("Fr1", fr)],
    })
}

/// `B Ks Ka KI Ky Kd Ksigma`, with the six factors given as a product.
pub fn melville_sutherland_formula(width: f64, k_product: f64) -> f64 {
    width * k_product
}

pub fn melville_sutherland(inputs: &ScourInputs, table: &FactorTable) -> Result<Prediction> {
    let r = Required { eq: EquationId::MelvilleSutherland, inputs };
    let b = inputs.pier_width;
    let l = r.get(InputParam::Length)?;
    let vc = r.get(InputParam::CriticalVelocity)?;
    let d50 = r.get(InputParam::D50)?;
    let theta = r.get(InputParam::Angle)?;
    let k_s = shape_factor(table, r.shape()?, theta)?;
    let k_a = table_skew(table, theta, b, l)?;
    let k_i = table.get("intensity.coeff")? * velocity_ratio(inputs.velocity, vc);
    let depth_ratio = inputs.flow_depth / b;
    let k_y = if depth_ratio < table.get("flow_depth.limit")? {
        table.get("flow_depth.coeff")? * depth_ratio.powf(table.get("flow_depth.exponent")?)
    } else {
        1.0
    };
    let k_d = sediment_factor(table, b, d50)?;
    let k_sigma = table.get("gradation")?;
    Ok(Prediction {
        depth: melville_sutherland_formula(b, k_s * k_a * k_i * k_y * k_d * k_sigma),
        factors: vec![
            ("Ks", k_s),
            ("Ka", k_a),
            ("KI", k_i),
            ("Ky", k_y),
            ("Kd", k_d),
            ("Ksigma", k_sigma),
        ],
    })
}

/// `max(0, y1 (-0.51 + 6.65 Fr - 5.49 Fr^2) + y1)`.
pub fn chitale_formula(depth: f64, froude: f64) -> f64 {
    (depth * (-0.51 + 6.65 * froude - 5.49 * froude * froude) + depth).max(0.0)
}

pub fn chitale(inputs: &ScourInputs) -> Result<Prediction> {
    if inputs.flow_depth == 0.0 {
        return Err(Error::domain("Chitale requires y1 > 0"));
    }
    let fr = froude(inputs.velocity, inputs.flow_depth)?;
    Ok(Prediction {
        depth: chitale_formula(inputs.flow_depth, fr),
        factors: vec![("Fr", fr)],
    })
}

/// `1.5 B (y1/B)^0.3 KaL Ksh`.
pub fn laursen_formula(width: f64, depth: f64, k_al: f64, k_sh: f64) -> f64 {
    1.5 * width * (depth / width).powf(0.3) * k_al * k_sh
}

pub fn laursen(inputs: &ScourInputs, table: &FactorTable) -> Result<Prediction> {
    let r = Required { eq: EquationId::Laursen, inputs };
    let l = r.get(InputParam::Length)?;
    let theta = r.get(InputParam::Angle)?;
    let k_al = table_skew(table, theta, inputs.pier_width, l)?;
    let k_sh = shape_factor(table, r.shape()?, theta)?;
    Ok(Prediction {
        depth: laursen_formula(inputs.pier_width, inputs.flow_depth, k_al, k_sh),
        factors: vec![("KaL", k_al), ("Ksh", k_sh)],
    })
}
