//! Consistent data built from a chosen ξ: D∞ from the face equation, l from
//! the latent-heat balance. Every case can then be checked against the
//! coefficient it hides.

use serde::{Deserialize, Serialize};

use crate::inverse::{latent_heat, SQRT_PI};
use crate::model::{
    BoundaryData, Coefficient, CoefficientSet, FaceCondition, ModelError, MushyCoefficients, ThermalCoefficients,
};
use crate::specfun::erf;

/// Everything except ξ, l and D∞.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ManufactureInput {
    pub xi: f64,
    pub k: f64,
    pub rho: f64,
    pub c: f64,
    pub epsilon: f64,
    pub gamma: f64,
    pub q0: f64,
    /// Required for the convective face, ignored for Dirichlet.
    pub h0: Option<f64>,
}

impl Default for ManufactureInput {
    fn default() -> Self {
        Self {
            xi: 0.5,
            k: 1.0,
            rho: 1.0,
            c: 1.0,
            epsilon: 0.5,
            gamma: 0.1,
            q0: 1.0,
            h0: Some(2.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ManufacturedScenario {
    pub face: FaceCondition,
    pub xi: f64,
    pub thermal: ThermalCoefficients,
    pub mushy: MushyCoefficients,
    pub boundary: BoundaryData,
}

impl ManufacturedScenario {
    pub fn coefficients(&self) -> CoefficientSet {
        CoefficientSet::complete(&self.thermal, &self.mushy)
    }

    pub fn known_without(&self, case: Coefficient) -> CoefficientSet {
        self.coefficients().without(case)
    }

    pub fn hidden_value(&self, case: Coefficient) -> f64 {
        self.coefficients().get(case).expect("complete set")
    }
}

pub fn manufacture(input: &ManufactureInput, face: FaceCondition) -> Result<ManufacturedScenario, ModelError> {
    let xi = input.xi;
    if !(xi > 0.0 && xi.is_finite()) {
        return Err(ModelError::NotPositive { name: "xi", value: xi });
    }
    let mushy = MushyCoefficients::new(input.epsilon, input.gamma)?;
    // validates k, ρ, c with a placeholder l
    ThermalCoefficients::new(1.0, input.k, input.rho, input.c)?;
    let (k, rho, c, q0) = (input.k, input.rho, input.c, input.q0);
    let dirichlet_d = q0 * SQRT_PI * erf(xi) / (k * rho * c).sqrt();
    let boundary = match face {
        FaceCondition::Dirichlet => BoundaryData::dirichlet(q0, dirichlet_d),
        FaceCondition::Convective => {
            let h0 = input.h0.ok_or(ModelError::MissingH0)?;
            BoundaryData::convective(q0, h0, dirichlet_d + q0 / h0)
        }
    }
    .validate(face)?;
    let l = latent_heat(xi, k, rho, c, mushy.epsilon, mushy.gamma, q0);
    let thermal = ThermalCoefficients::new(l, k, rho, c)?;
    Ok(ManufacturedScenario {
        face,
        xi,
        thermal,
        mushy,
        boundary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::direct::consistency_residuals;

    #[test]
    fn unit_example() {
        let conv = manufacture(&ManufactureInput::default(), FaceCondition::Convective).unwrap();
        assert!((conv.boundary.d_inf - 1.422562012825585).abs() < 1e-15);
        assert!((conv.thermal.l - 1.4636343789756726).abs() < 1e-15);
        let dir = manufacture(&ManufactureInput::default(), FaceCondition::Dirichlet).unwrap();
        assert!((dir.boundary.d_inf - 0.9225620128255849).abs() < 1e-15);
        assert_eq!(dir.boundary.h0, None);
    }

    #[test]
    fn scenarios_are_consistent() {
        for face in [FaceCondition::Convective, FaceCondition::Dirichlet] {
            for xi in [0.05, 0.5, 1.3, 2.0] {
                let input = ManufactureInput {
                    xi,
                    k: 3.0,
                    rho: 0.2,
                    c: 7.0,
                    epsilon: 0.3,
                    gamma: 0.4,
                    q0: 2.5,
                    h0: Some(9.0),
                };
                let s = manufacture(&input, face).unwrap();
                let r = consistency_residuals(&s.thermal, &s.mushy, &s.boundary, xi, face);
                assert!(r.within(1e-13), "{face} {xi}: {r:?}");
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        let bad_xi = ManufactureInput {
            xi: 0.0,
            ..Default::default()
        };
        assert!(manufacture(&bad_xi, FaceCondition::Dirichlet).is_err());
        let no_h0 = ManufactureInput {
            h0: None,
            ..Default::default()
        };
        assert_eq!(
            manufacture(&no_h0, FaceCondition::Convective),
            Err(ModelError::MissingH0)
        );
        assert!(manufacture(&no_h0, FaceCondition::Dirichlet).is_ok());
    }
}
