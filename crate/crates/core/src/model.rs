//! Domain types for the one-phase solidification problem with an isothermal
//! mushy zone, and validation of their positivity/interval constraints.
//!
//! Units are documented on the fields but never checked dimensionally. The
//! bulk temperature at the fixed face is stored as the positive magnitude
//! `d_inf`; the physical temperature there is `-d_inf`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One of the six thermal coefficients. Used both as a slot name and as the
/// selector of which coefficient is unknown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coefficient {
    L,
    Gamma,
    Epsilon,
    K,
    Rho,
    C,
}

/// The unknown-coefficient selector; cases 1 to 6 in order.
pub type UnknownCase = Coefficient;

impl Coefficient {
    pub const ALL: [Coefficient; 6] = [
        Coefficient::L,
        Coefficient::Gamma,
        Coefficient::Epsilon,
        Coefficient::K,
        Coefficient::Rho,
        Coefficient::C,
    ];

    /// Case number, 1..=6.
    pub fn case_number(self) -> u8 {
        match self {
            Coefficient::L => 1,
            Coefficient::Gamma => 2,
            Coefficient::Epsilon => 3,
            Coefficient::K => 4,
            Coefficient::Rho => 5,
            Coefficient::C => 6,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Coefficient::L => "l",
            Coefficient::Gamma => "gamma",
            Coefficient::Epsilon => "epsilon",
            Coefficient::K => "k",
            Coefficient::Rho => "rho",
            Coefficient::C => "c",
        }
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Coefficient {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Coefficient::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| ModelError::UnknownName(s.to_string()))
    }
}

/// Which overspecified condition is imposed at the fixed face x = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FaceCondition {
    /// k T_x(0,t) = (h0/√t) (T(0,t) + D∞)
    Convective,
    /// T(0,t) = -D∞
    Dirichlet,
}

impl fmt::Display for FaceCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FaceCondition::Convective => "convective",
            FaceCondition::Dirichlet => "dirichlet",
        })
    }
}

impl FromStr for FaceCondition {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "convective" => Ok(FaceCondition::Convective),
            "dirichlet" => Ok(FaceCondition::Dirichlet),
            other => Err(ModelError::UnknownName(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("coefficient `{0}` is required but missing")]
    Missing(Coefficient),
    #[error("coefficient `{0}` is the unknown of this case and must not be supplied")]
    OverSpecified(Coefficient),
    #[error("`{name}` must be positive and finite, got {value}")]
    NotPositive { name: &'static str, value: f64 },
    #[error("epsilon must lie in (0, 1), got {0}")]
    EpsilonOutOfRange(f64),
    #[error("h0 is required for the convective problem")]
    MissingH0,
    #[error("unrecognised name `{0}`")]
    UnknownName(String),
    #[error("the direct problem has no unknown coefficient to recover")]
    NoUnknown,
}

fn positive(name: &'static str, value: f64) -> Result<f64, ModelError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(ModelError::NotPositive { name, value })
    }
}

fn unit_interval(value: f64) -> Result<f64, ModelError> {
    if value.is_finite() && value > 0.0 && value < 1.0 {
        Ok(value)
    } else {
        Err(ModelError::EpsilonOutOfRange(value))
    }
}

/// Bulk solid-phase constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalCoefficients {
    /// Latent heat per unit mass (energy/mass).
    pub l: f64,
    /// Thermal conductivity (power/(length·temperature)).
    pub k: f64,
    /// Mass density (mass/volume).
    pub rho: f64,
    /// Specific heat (energy/(mass·temperature)).
    pub c: f64,
}

impl ThermalCoefficients {
    pub fn new(l: f64, k: f64, rho: f64, c: f64) -> Result<Self, ModelError> {
        Ok(Self {
            l: positive("l", l)?,
            k: positive("k", k)?,
            rho: positive("rho", rho)?,
            c: positive("c", c)?,
        })
    }

    /// Thermal diffusivity k/(ρc).
    pub fn alpha(&self) -> f64 {
        self.k / (self.rho * self.c)
    }

    /// Thermal effusivity √(kρc).
    pub fn effusivity(&self) -> f64 {
        (self.k * self.rho * self.c).sqrt()
    }
}

/// The pair characterising the isothermal mushy zone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MushyCoefficients {
    /// Fraction of latent heat released at the liquid-mushy front, in (0, 1).
    pub epsilon: f64,
    /// Mushy-width constant (temperature): width × gradient at s(t).
    pub gamma: f64,
}

impl MushyCoefficients {
    pub fn new(epsilon: f64, gamma: f64) -> Result<Self, ModelError> {
        Ok(Self {
            epsilon: unit_interval(epsilon)?,
            gamma: positive("gamma", gamma)?,
        })
    }
}

/// Data measured at the fixed face x = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryData {
    /// Heat-flux amplitude: k T_x(0,t) = q0/√t.
    pub q0: f64,
    /// Heat-transfer amplitude of the convective condition; unused for Dirichlet.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h0: Option<f64>,
    /// Magnitude of the bulk temperature; the face sees -d_inf.
    pub d_inf: f64,
}

impl BoundaryData {
    pub fn convective(q0: f64, h0: f64, d_inf: f64) -> Self {
        Self {
            q0,
            h0: Some(h0),
            d_inf,
        }
    }

    pub fn dirichlet(q0: f64, d_inf: f64) -> Self {
        Self { q0, h0: None, d_inf }
    }

    /// 1 - q0/(h0·D∞) for the convective condition; exactly 1 for Dirichlet.
    pub fn face_factor(&self, face: FaceCondition) -> f64 {
        match (face, self.h0) {
            (FaceCondition::Convective, Some(h0)) => 1.0 - self.q0 / (h0 * self.d_inf),
            _ => 1.0,
        }
    }

    pub fn validate(&self, face: FaceCondition) -> Result<Self, ModelError> {
        let q0 = positive("q0", self.q0)?;
        let d_inf = positive("d_inf", self.d_inf)?;
        let h0 = match face {
            FaceCondition::Convective => Some(positive("h0", self.h0.ok_or(ModelError::MissingH0)?)?),
            FaceCondition::Dirichlet => None,
        };
        Ok(Self { q0, h0, d_inf })
    }
}

/// A partially known coefficient set; `None` marks an absent slot.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientSet {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

impl CoefficientSet {
    pub fn complete(thermal: &ThermalCoefficients, mushy: &MushyCoefficients) -> Self {
        Self {
            l: Some(thermal.l),
            k: Some(thermal.k),
            rho: Some(thermal.rho),
            c: Some(thermal.c),
            epsilon: Some(mushy.epsilon),
            gamma: Some(mushy.gamma),
        }
    }

    pub fn get(&self, slot: Coefficient) -> Option<f64> {
        match slot {
            Coefficient::L => self.l,
            Coefficient::Gamma => self.gamma,
            Coefficient::Epsilon => self.epsilon,
            Coefficient::K => self.k,
            Coefficient::Rho => self.rho,
            Coefficient::C => self.c,
        }
    }

    pub fn set(&mut self, slot: Coefficient, value: Option<f64>) {
        let field = match slot {
            Coefficient::L => &mut self.l,
            Coefficient::Gamma => &mut self.gamma,
            Coefficient::Epsilon => &mut self.epsilon,
            Coefficient::K => &mut self.k,
            Coefficient::Rho => &mut self.rho,
            Coefficient::C => &mut self.c,
        };
        *field = value;
    }

    /// Copy with `slot` cleared.
    pub fn without(mut self, slot: Coefficient) -> Self {
        self.set(slot, None);
        self
    }

    /// Copy with `slot` set to `value`.
    pub fn with(mut self, slot: Coefficient, value: f64) -> Self {
        self.set(slot, Some(value));
        self
    }

    pub fn require(&self, slot: Coefficient) -> Result<f64, ModelError> {
        self.get(slot).ok_or(ModelError::Missing(slot))
    }
}

/// A validated problem instance: every coefficient except the case's unknown
/// is present and within range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Problem {
    pub face: FaceCondition,
    /// `None` for the direct problem (all coefficients known).
    pub case: Option<UnknownCase>,
    pub known: CoefficientSet,
    pub boundary: BoundaryData,
}

impl Problem {
    /// Diffusivity, available whenever k, ρ and c are all known.
    pub fn alpha(&self) -> Option<f64> {
        Some(self.known.k? / (self.known.rho? * self.known.c?))
    }

    /// Re-run validation on this instance.
    pub fn revalidate(&self) -> Result<Problem, ModelError> {
        validate(&self.known, &self.boundary, self.face, self.case)
    }

    /// Complete coefficient sets, only for the direct problem.
    pub fn complete(&self) -> Result<(ThermalCoefficients, MushyCoefficients), ModelError> {
        let k = &self.known;
        Ok((
            ThermalCoefficients::new(
                k.require(Coefficient::L)?,
                k.require(Coefficient::K)?,
                k.require(Coefficient::Rho)?,
                k.require(Coefficient::C)?,
            )?,
            MushyCoefficients::new(k.require(Coefficient::Epsilon)?, k.require(Coefficient::Gamma)?)?,
        ))
    }
}

/// Check that exactly the case's slot is absent and everything supplied is in range.
pub fn validate(
    known: &CoefficientSet,
    boundary: &BoundaryData,
    face: FaceCondition,
    case: Option<UnknownCase>,
) -> Result<Problem, ModelError> {
    let mut normalized = CoefficientSet::default();
    for slot in Coefficient::ALL {
        let value = known.get(slot);
        if Some(slot) == case {
            if value.is_some() {
                return Err(ModelError::OverSpecified(slot));
            }
            continue;
        }
        let value = value.ok_or(ModelError::Missing(slot))?;
        let value = match slot {
            Coefficient::Epsilon => unit_interval(value)?,
            other => positive(other.name(), value)?,
        };
        normalized.set(slot, Some(value));
    }
    Ok(Problem {
        face,
        case,
        known: normalized,
        boundary: boundary.validate(face)?,
    })
}

/// The similarity solution T = A + B·erf(x/(2√(αt))), s = 2ξ√(αt), r = 2μ√(αt).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimilaritySolution {
    pub a_coef: f64,
    pub b_coef: f64,
    pub xi: f64,
    pub mu: f64,
    pub alpha: f64,
}

/// Data restrictions R1..R9.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RestrictionId {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
    R9,
}

impl RestrictionId {
    /// The inequality, written as `lhs < rhs`.
    pub fn inequality(self) -> &'static str {
        match self {
            RestrictionId::R1 => "q0 < h0*D_inf",
            RestrictionId::R2 => "(D_inf/q0)*sqrt(k*rho*c/pi)*(1 - q0/(h0*D_inf)) < 1",
            RestrictionId::R3 => "f2(xi) < (q0/l)*sqrt(c/(rho*k))",
            RestrictionId::R4 => {
                "(q0/l)*sqrt(c/(rho*k)) < gamma*sqrt(k*rho*c)/(2*q0)*exp(2*xi^2) + f2(xi)"
            }
            RestrictionId::R5 => "1 - q0/(h0*D_inf) < (2*q0^2/(rho*l*k) - gamma*(1-epsilon))/D_inf",
            RestrictionId::R6 => "(D_inf/q0)*sqrt(k*rho*c/pi) < 1",
            RestrictionId::R7 => "(D_inf/q0)*sqrt(k*rho*c/pi) < erf(eta7), f2(eta7) = (q0/l)*sqrt(c/(rho*k))",
            RestrictionId::R8 => {
                "erf(eta8) < (D_inf/q0)*sqrt(k*rho*c/pi), \
                 f2(eta8) + gamma*sqrt(k*rho*c)/(2*q0)*exp(2*eta8^2) = (q0/l)*sqrt(c/(rho*k)) (eta8 = 0 when no positive root)"
            }
            RestrictionId::R9 => {
                "rho*l*k*(D_inf + gamma*(1-epsilon))/(2*q0^2) < 1 \
                 [printed form: l*k*rho*D_inf/(2*q0)*(1 + gamma*(1-epsilon)/D_0) < 1]"
            }
        }
    }
}

impl fmt::Display for RestrictionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// One evaluated restriction, oriented as `lhs < rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RestrictionReport {
    pub id: RestrictionId,
    pub satisfied: bool,
    pub lhs: f64,
    pub rhs: f64,
    /// rhs - lhs; positive exactly when satisfied.
    pub margin: f64,
}

impl RestrictionReport {
    pub fn new(id: RestrictionId, lhs: f64, rhs: f64) -> Self {
        Self {
            id,
            // strict, and false whenever either side is NaN
            satisfied: lhs < rhs,
            lhs,
            rhs,
            margin: rhs - lhs,
        }
    }
}

impl fmt::Display for RestrictionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: {} < {} [{}] (margin {:e})",
            self.id,
            if self.satisfied { "holds" } else { "VIOLATED" },
            self.lhs,
            self.rhs,
            self.id.inequality(),
            self.margin
        )
    }
}

/// Outcome of one inverse case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub face: FaceCondition,
    pub case: UnknownCase,
    /// The recovered coefficient, in the unit of its slot.
    pub value: f64,
    pub xi: f64,
    pub thermal: ThermalCoefficients,
    pub mushy: MushyCoefficients,
    pub boundary: BoundaryData,
    pub solution: SimilaritySolution,
    pub reports: Vec<RestrictionReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}
