//! Physical parameters, the dimensionless reduced problem, and the map from
//! reduced eigenvalues back to physical energies. Natural units hbar = c = 1.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Raw model constants. `s` is the spin label (+1 or -1), `l` the rotational
/// quantum number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub m: f64,
    pub g: f64,
    pub b: f64,
    #[serde(rename = "B0")]
    pub b0: f64,
    pub k: f64,
    pub omega: f64,
    pub l: i64,
    pub s: i64,
}

const PARAM_KEYS: [&str; 8] = ["m", "g", "b", "B0", "k", "omega", "l", "s"];

impl PhysicalParams {
    pub fn validated(self) -> Result<Self> {
        let finite = [
            ("m", self.m),
            ("g", self.g),
            ("b", self.b),
            ("B0", self.b0),
            ("k", self.k),
            ("omega", self.omega),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(Error::ParamFile(format!("key \"{name}\" must be finite")));
            }
        }
        if self.m <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "m",
                message: format!("mass must be positive, got {}", self.m),
            });
        }
        if self.omega <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "omega",
                message: format!("frequency must be positive, got {}", self.omega),
            });
        }
        if self.b < 0.0 {
            return Err(Error::InvalidParameter {
                name: "b",
                message: format!("vector magnitude must be non-negative, got {}", self.b),
            });
        }
        if self.s != 1 && self.s != -1 {
            return Err(Error::InvalidParameter {
                name: "s",
                message: format!("spin label must be +1 or -1, got {}", self.s),
            });
        }
        Ok(self)
    }

    /// Parse the JSON parameter file format: an object with exactly the keys
    /// {"m","g","b","B0","k","omega","l","s"}. Errors name the offending key.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::ParamFile(e.to_string()))?;
        let obj = value
            .as_object()
            .ok_or_else(|| Error::ParamFile("expected a JSON object".into()))?;
        for key in obj.keys() {
            if !PARAM_KEYS.contains(&key.as_str()) {
                return Err(Error::ParamFile(format!("unknown key \"{key}\"")));
            }
        }
        let number = |key: &'static str| -> Result<f64> {
            let v = obj
                .get(key)
                .ok_or_else(|| Error::ParamFile(format!("missing key \"{key}\"")))?;
            v.as_f64()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::ParamFile(format!("key \"{key}\" must be a finite number")))
        };
        let integer = |key: &'static str| -> Result<i64> {
            let v = obj
                .get(key)
                .ok_or_else(|| Error::ParamFile(format!("missing key \"{key}\"")))?;
            v.as_i64()
                .ok_or_else(|| Error::ParamFile(format!("key \"{key}\" must be an integer")))
        };
        PhysicalParams {
            m: number("m")?,
            g: number("g")?,
            b: number("b")?,
            b0: number("B0")?,
            k: number("k")?,
            omega: number("omega")?,
            l: integer("l")?,
            s: integer("s")?,
        }
        .validated()
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::ParamFile(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_json_str(&text)
    }

    /// Product g b B0, the strength that feeds the Coulomb-like term.
    pub fn gb_b0(&self) -> f64 {
        self.g * self.b * self.b0
    }

    /// Effective angular momentum nu_s = l + (1 - s)/2.
    pub fn nu_s(&self) -> f64 {
        self.l as f64 + (1.0 - self.s as f64) / 2.0
    }

    /// Coulomb strength numerator delta = 2 g b B0 nu_s + s g b B0.
    pub fn delta(&self) -> f64 {
        2.0 * self.gb_b0() * self.nu_s() + self.s as f64 * self.gb_b0()
    }

    /// Constant energy shift (g b B0)^2 / (2m) + k^2 / (2m).
    pub fn energy_shift(&self) -> f64 {
        (self.gb_b0().powi(2) + self.k * self.k) / (2.0 * self.m)
    }
}

/// Energy-like input accepted by [`derive`].
#[derive(Debug, Clone, Copy)]
pub enum EnergyInput {
    /// Physical energy.
    Physical(f64),
    /// Reduced eigenvalue W = zeta^2 / (m omega).
    ReducedW(f64),
}

/// Everything derived from the raw constants.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DerivedQuantities {
    pub nu_s: f64,
    pub gamma: f64,
    pub delta: f64,
    pub zeta_sq: f64,
    pub beta: f64,
    pub w: f64,
}

/// Populate every derived field from the closed-form definitions.
pub fn derive(params: &PhysicalParams, energy: EnergyInput) -> Result<DerivedQuantities> {
    let params = params.validated()?;
    let nu_s = params.nu_s();
    let gamma = nu_s.abs();
    let delta = params.delta();
    let m_omega = params.m * params.omega;
    let beta = delta / m_omega.sqrt();
    let (zeta_sq, w) = match energy {
        EnergyInput::Physical(e) => {
            let zeta_sq = 2.0 * params.m * e - params.k * params.k - params.gb_b0().powi(2);
            (zeta_sq, zeta_sq / m_omega)
        }
        EnergyInput::ReducedW(w) => (w * m_omega, w),
    };
    Ok(DerivedQuantities {
        nu_s,
        gamma,
        delta,
        zeta_sq,
        beta,
        w,
    })
}

/// The dimensionless reduced problem every solver consumes.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RadialProblem {
    pub gamma: f64,
    pub beta: f64,
}

impl RadialProblem {
    pub fn new(gamma: f64, beta: f64) -> Result<Self> {
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(Error::InvalidParameter {
                name: "gamma",
                message: format!("must be finite and >= 0, got {gamma}"),
            });
        }
        if !beta.is_finite() {
            return Err(Error::InvalidParameter {
                name: "beta",
                message: format!("must be finite, got {beta}"),
            });
        }
        Ok(RadialProblem { gamma, beta })
    }
}

/// Reduce raw constants to (gamma, beta).
pub fn reduce(params: &PhysicalParams) -> Result<RadialProblem> {
    let d = derive(params, EnergyInput::ReducedW(0.0))?;
    RadialProblem::new(d.gamma, d.beta)
}

/// A physical energy reconstructed from a reduced eigenvalue.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EnergyRecord {
    #[serde(rename = "W")]
    pub w: f64,
    pub omega: f64,
    pub energy: f64,
    pub k: f64,
    #[serde(rename = "gbB0_sq_over_2m")]
    pub gb_b0_sq_over_2m: f64,
}

/// Physical energy of the true spectrum:
/// E = omega W / 2 + (g b B0)^2 / (2m) + k^2 / (2m).
pub fn energy_from_w(w: f64, omega: f64, params: &PhysicalParams) -> Result<EnergyRecord> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::InvalidParameter {
            name: "omega",
            message: format!("frequency must be positive, got {omega}"),
        });
    }
    let params = params.validated()?;
    let gb = params.gb_b0();
    let energy = omega * w / 2.0 + gb * gb / (2.0 * params.m) + params.k * params.k / (2.0 * params.m);
    Ok(EnergyRecord {
        w,
        omega,
        energy,
        k: params.k,
        gb_b0_sq_over_2m: gb * gb / (2.0 * params.m),
    })
}

/// Physical energy the truncation condition assigns to one root: the root
/// fixes the frequency omega = delta^2 / (m beta_root^2), and the shared
/// eigenvalue W = 2(n + gamma + 1) gives E = omega (gamma + n + 1) + shifts.
///
/// The beta_root = 0 roots (even n) have no associated frequency unless
/// delta = 0, so they are a hard error here.
pub fn energy_from_truncation(
    n: u32,
    gamma: f64,
    beta_root: f64,
    params: &PhysicalParams,
) -> Result<EnergyRecord> {
    let params = params.validated()?;
    if beta_root == 0.0 {
        return Err(Error::FrequencyUndefined);
    }
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(Error::InvalidParameter {
            name: "gamma",
            message: format!("must be finite and >= 0, got {gamma}"),
        });
    }
    let delta = params.delta();
    let omega = delta * delta / (params.m * beta_root * beta_root);
    let w = 2.0 * (f64::from(n) + gamma + 1.0);
    let energy = omega * (gamma + f64::from(n) + 1.0) + params.energy_shift();
    Ok(EnergyRecord {
        w,
        omega,
        energy,
        k: params.k,
        gb_b0_sq_over_2m: params.gb_b0().powi(2) / (2.0 * params.m),
    })
}
