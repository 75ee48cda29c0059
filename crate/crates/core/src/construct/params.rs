use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{
    check_wavenumbers, chi_from_nu, closed_form_two_ss_potential, gaussian_nu, odd_singular_rho,
    odd_singular_rho_constraint, pseudo_hermitian_chi, second_order_potential, selfdual_potential_from_chi,
    singular_node_chi, tanh_sech_chi, three_ss_potential, two_ss_potential, ConstructError, Potential, Result,
};
use crate::numerics::ComplexProfile;

/// Complex numbers in configs: a bare number or a `[re, im]` pair.
pub(crate) mod complex_serde {
    use num_complex::Complex64 as C64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Real(f64),
        Pair([f64; 2]),
    }

    pub fn serialize<S: Serializer>(z: &C64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
        Ok(match Repr::deserialize(d)? {
            Repr::Real(r) => C64::new(r, 0.0),
            Repr::Pair([re, im]) => C64::new(re, im),
        })
    }
}

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

/// Parameters of one construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Construction {
    TwoSs {
        k1: f64,
        k2: f64,
        #[serde(with = "complex_serde")]
        a0: C64,
        #[serde(with = "complex_serde", default = "zero")]
        a1: C64,
    },
    SelfDual {
        k1: f64,
        #[serde(with = "complex_serde")]
        a0: C64,
        #[serde(with = "complex_serde", default = "zero")]
        a1: C64,
    },
    ClosedForm {
        k1: f64,
        #[serde(with = "complex_serde")]
        a0: C64,
        #[serde(with = "complex_serde", default = "zero")]
        a1: C64,
    },
    SingularNode {
        k1: f64,
        k2: f64,
    },
    SecondOrder {
        k1: f64,
    },
    PseudoHermitian {
        a: f64,
        k1: f64,
        k2: f64,
    },
    ThreeSs {
        k1: f64,
        k2: f64,
        k3: f64,
        #[serde(with = "complex_serde")]
        z: C64,
    },
    Free,
}

/// Output of [`Construction::build`]: the potential and the designer
/// functions it came from.
#[derive(Clone, Debug)]
pub struct Constructed {
    pub potential: Potential,
    pub chi: Option<ComplexProfile>,
    pub nu: Option<ComplexProfile>,
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(ConstructError::InvalidParameters(format!("{name} must be finite")))
    }
}

fn amplitude(a0: C64, a1: C64) -> Result<()> {
    finite("a0", a0.re + a0.im)?;
    finite("a1", a1.re + a1.im)?;
    if a0.norm() == 0.0 {
        return Err(ConstructError::ZeroAmplitude);
    }
    Ok(())
}

impl Construction {
    pub fn kind(&self) -> &'static str {
        match self {
            Construction::TwoSs { .. } => "two_ss",
            Construction::SelfDual { .. } => "self_dual",
            Construction::ClosedForm { .. } => "closed_form",
            Construction::SingularNode { .. } => "singular_node",
            Construction::SecondOrder { .. } => "second_order",
            Construction::PseudoHermitian { .. } => "pseudo_hermitian",
            Construction::ThreeSs { .. } => "three_ss",
            Construction::Free => "free",
        }
    }

    /// Checks the preconditions that do not need any numerics.
    pub fn validate(&self) -> Result<()> {
        match *self {
            Construction::TwoSs { k1, k2, a0, a1 } => {
                check_wavenumbers(&[k1, k2])?;
                amplitude(a0, a1)
            }
            Construction::SelfDual { k1, a0, a1 } | Construction::ClosedForm { k1, a0, a1 } => {
                check_wavenumbers(&[k1, -k1])?;
                amplitude(a0, a1)
            }
            Construction::SingularNode { k1, k2 } => check_wavenumbers(&[k1, k2]),
            Construction::SecondOrder { k1 } => check_wavenumbers(&[k1]),
            Construction::PseudoHermitian { a, k1, k2 } => {
                check_wavenumbers(&[k1, k2])?;
                if !(a > 0.0 && a.is_finite()) {
                    return Err(ConstructError::InvalidParameters(format!("a must be positive, got {a}")));
                }
                let residual = odd_singular_rho_constraint(a, k1, k2);
                if residual.abs() > 1e-12 {
                    return Err(ConstructError::ConstraintViolated { residual });
                }
                Ok(())
            }
            Construction::ThreeSs { k1, k2, k3, z } => {
                check_wavenumbers(&[k1, k2, k3])?;
                finite("z", z.re + z.im)
            }
            Construction::Free => Ok(()),
        }
    }

    pub fn build(&self) -> Result<Constructed> {
        self.validate()?;
        let plain = |potential| Constructed { potential, chi: None, nu: None };
        Ok(match *self {
            Construction::TwoSs { k1, k2, a0, a1 } => {
                let chi = tanh_sech_chi(k1, k2, a0, a1)?;
                Constructed { potential: two_ss_potential(&chi, k1, k2)?, chi: Some(chi), nu: None }
            }
            Construction::SelfDual { k1, a0, a1 } => {
                let chi = tanh_sech_chi(k1, -k1, a0, a1)?;
                Constructed { potential: selfdual_potential_from_chi(&chi, k1)?, chi: Some(chi), nu: None }
            }
            Construction::ClosedForm { k1, a0, a1 } => Constructed {
                potential: closed_form_two_ss_potential(k1, a0, a1)?,
                chi: Some(tanh_sech_chi(k1, -k1, a0, a1)?),
                nu: None,
            },
            Construction::SingularNode { k1, k2 } => {
                let chi = singular_node_chi(k1, k2)?;
                Constructed { potential: two_ss_potential(&chi, k1, k2)?, chi: Some(chi), nu: None }
            }
            Construction::SecondOrder { k1 } => plain(second_order_potential(k1)?),
            Construction::PseudoHermitian { a, k1, k2 } => {
                let chi = pseudo_hermitian_chi(&odd_singular_rho(a, k1, k2)?, k1, k2)?;
                Constructed { potential: super::pseudo_hermitian_potential(a, k1, k2)?, chi: Some(chi), nu: None }
            }
            Construction::ThreeSs { k1, k2, k3, z } => {
                let nu = gaussian_nu(k1, k2, k3, z)?;
                let chi = chi_from_nu(&nu, k1, k2, k3)?;
                Constructed { potential: three_ss_potential(&nu, k1, k2, k3)?, chi: Some(chi), nu: Some(nu) }
            }
            Construction::Free => plain(Potential::free()),
        })
    }
}
