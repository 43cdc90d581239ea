//! Named constants and the table of stored published digits.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::agm::{elliptic_k, pi};
use super::lseries::lvalue_eta8;
use super::real::{Precision, Real};
use super::special::{log2, trigamma, zeta_int};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstantId {
    Pi,
    Log2,
    Sqrt2,
    Golden,
    Zeta2,
    Zeta3,
    LChi3_2,
    /// (Gamma(1/4)/Gamma(3/4))^2
    GammaQ4,
    /// 2^(-1/3) (Gamma(1/3)/Gamma(2/3))^6
    GammaQ3,
    OmegaPlus,
    EtaPlus,
    OmegaMinusIm,
    EtaMinusIm,
}

impl ConstantId {
    pub const ALL: [ConstantId; 13] = [
        ConstantId::Pi,
        ConstantId::Log2,
        ConstantId::Sqrt2,
        ConstantId::Golden,
        ConstantId::Zeta2,
        ConstantId::Zeta3,
        ConstantId::LChi3_2,
        ConstantId::GammaQ4,
        ConstantId::GammaQ3,
        ConstantId::OmegaPlus,
        ConstantId::EtaPlus,
        ConstantId::OmegaMinusIm,
        ConstantId::EtaMinusIm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConstantId::Pi => "pi",
            ConstantId::Log2 => "log2",
            ConstantId::Sqrt2 => "sqrt2",
            ConstantId::Golden => "golden",
            ConstantId::Zeta2 => "zeta2",
            ConstantId::Zeta3 => "zeta3",
            ConstantId::LChi3_2 => "l_chi3_2",
            ConstantId::GammaQ4 => "gamma_q4",
            ConstantId::GammaQ3 => "gamma_q3",
            ConstantId::OmegaPlus => "omega_plus",
            ConstantId::EtaPlus => "eta_plus",
            ConstantId::OmegaMinusIm => "omega_minus_im",
            ConstantId::EtaMinusIm => "eta_minus_im",
        }
    }
}

impl fmt::Display for ConstantId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConstantId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ConstantId::ALL
            .iter()
            .copied()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::UnknownConstant(s.to_string()))
    }
}

/// Published digits kept verbatim.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StoredId {
    OmegaPlus,
    OmegaMinusIm,
    EtaPlus,
    EtaMinusIm,
    /// Limit of [[0,4n(68n^2+3)],[48,-(2n+1)^6]].
    SBigLimit,
}

#[derive(Clone, Copy, Debug)]
pub struct StoredValue {
    pub id: StoredId,
    pub decimal: &'static str,
    /// Significant digits printed.
    pub digits: u32,
    pub source: &'static str,
}

pub const STORED: [StoredValue; 5] = [
    StoredValue {
        id: StoredId::OmegaPlus,
        decimal: "6.9975630166806323595567578268530960",
        digits: 35,
        source: "published period of the eta product (real period)",
    },
    StoredValue {
        id: StoredId::OmegaMinusIm,
        decimal: "8.6711873312659436466050308394689215",
        digits: 35,
        source: "published period of the eta product (imaginary part)",
    },
    StoredValue {
        id: StoredId::EtaPlus,
        decimal: "-261.3739159094042031485947045700717759",
        digits: 37,
        source: "published quasiperiod table (real)",
    },
    StoredValue {
        id: StoredId::EtaMinusIm,
        decimal: "-359.3354423254855950047613470695853950",
        digits: 37,
        source: "published quasiperiod table (imaginary part)",
    },
    StoredValue {
        id: StoredId::SBigLimit,
        decimal: "0.16921170657881854838709526498834093533256251638822745276659373255666458",
        digits: 71,
        source: "published limit of the half-shifted big Apery fraction",
    },
];

pub fn stored(id: StoredId) -> &'static StoredValue {
    STORED.iter().find(|s| s.id == id).expect("stored table is complete")
}

/// Stored value at the requested precision; errors when more digits are asked for than printed.
pub fn stored_value(id: StoredId, prec: Precision) -> Result<Real> {
    let s = stored(id);
    if prec.digits() > s.digits {
        return Err(Error::StoredDigitsExceeded {
            name: format!("{id:?}"),
            available: s.digits,
            requested: prec.digits(),
        });
    }
    Real::parse(s.decimal, prec)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Provenance {
    Computed { method: String },
    Stored { digits: u32, source: String },
}

#[derive(Clone, Debug)]
pub struct Constant {
    pub value: Real,
    pub provenance: Provenance,
}

fn computed(value: Real, method: &str) -> Constant {
    Constant {
        value,
        provenance: Provenance::Computed {
            method: method.to_string(),
        },
    }
}

/// A named constant at the requested precision.
pub fn constant(id: ConstantId, prec: Precision) -> Result<Constant> {
    let work = prec.guarded();
    let c = match id {
        ConstantId::Pi => computed(pi(work), "Brent-Salamin AGM"),
        ConstantId::Log2 => computed(log2(work), "series sum 1/(k 2^k)"),
        ConstantId::Sqrt2 => computed(Real::from_i64(2, work).sqrt(), "square root"),
        ConstantId::Golden => computed(
            (&Real::one(work) + &Real::from_i64(5, work).sqrt()).mul_pow2(-1),
            "(1+sqrt5)/2",
        ),
        ConstantId::Zeta2 => computed(zeta_int(2, work)?, "Euler-Maclaurin"),
        ConstantId::Zeta3 => computed(zeta_int(3, work)?, "Euler-Maclaurin"),
        ConstantId::LChi3_2 => {
            let a = trigamma(&Real::ratio(1, 3, work), work)?;
            let b = trigamma(&Real::ratio(2, 3, work), work)?;
            computed((&a - &b).div_i64(9), "(psi1(1/3)-psi1(2/3))/9")
        }
        ConstantId::GammaQ4 => {
            // Gamma(1/4)^2 = 4 sqrt(pi) K(1/2) and Gamma(1/4)Gamma(3/4) = pi sqrt2.
            let k = elliptic_k(&Real::ratio(1, 2, work), work)?;
            computed((&(&k * &k) / &pi(work)).mul_i64(8), "lemniscatic AGM, 8K(1/2)^2/pi")
        }
        ConstantId::GammaQ3 => {
            // Gamma(1/3)^3 = 2^(7/3) pi K(z3) / 3^(1/4), z3 = (2-sqrt3)/4, and
            // Gamma(1/3)Gamma(2/3) = 2pi/sqrt3 reduce the quotient to 72 K^4/pi^2.
            let z3 = (&Real::from_i64(2, work) - &Real::from_i64(3, work).sqrt()).mul_pow2(-2);
            let k = elliptic_k(&z3, work)?;
            let p = pi(work);
            computed((&k.powi(4) / &(&p * &p)).mul_i64(72), "third singular value AGM, 72K^4/pi^2")
        }
        ConstantId::OmegaPlus => {
            let l = lvalue_eta8(3, work)?;
            computed(l.value.mul_pow2(3), &format!("8 L(f,3), root number {:+}", l.epsilon))
        }
        ConstantId::OmegaMinusIm => {
            let l = lvalue_eta8(2, work)?;
            computed(
                &pi(work).mul_pow2(2) * &l.value,
                &format!("4 pi L(f,2), root number {:+}", l.epsilon),
            )
        }
        ConstantId::EtaPlus | ConstantId::EtaMinusIm => {
            let sid = if id == ConstantId::EtaPlus {
                StoredId::EtaPlus
            } else {
                StoredId::EtaMinusIm
            };
            let s = stored(sid);
            return Ok(Constant {
                value: stored_value(sid, prec)?,
                provenance: Provenance::Stored {
                    digits: s.digits,
                    source: s.source.to_string(),
                },
            });
        }
    };
    Ok(Constant {
        value: c.value.round_to(prec),
        provenance: c.provenance,
    })
}

/// Digits available for a constant (None = unlimited).
pub fn available_digits(id: ConstantId) -> Option<u32> {
    match id {
        ConstantId::EtaPlus => Some(stored(StoredId::EtaPlus).digits),
        ConstantId::EtaMinusIm => Some(stored(StoredId::EtaMinusIm).digits),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::special::gamma;

    fn p(d: u32) -> Precision {
        Precision::new(d).unwrap()
    }

    #[test]
    fn names_round_trip() {
        for c in ConstantId::ALL {
            assert_eq!(c.name().parse::<ConstantId>().unwrap(), c);
        }
        assert!(matches!("nope".parse::<ConstantId>(), Err(Error::UnknownConstant(_))));
    }

    #[test]
    fn eta_plus_is_stored() {
        let c = constant(ConstantId::EtaPlus, p(30)).unwrap();
        assert!(c.value.to_decimal_string(30).starts_with("-261.373915909404203148594704570"));
        assert!(matches!(c.provenance, Provenance::Stored { .. }));
        assert!(matches!(
            constant(ConstantId::EtaPlus, p(40)),
            Err(Error::StoredDigitsExceeded { .. })
        ));
    }

    #[test]
    fn omega_plus_from_l_value() {
        let c = constant(ConstantId::OmegaPlus, p(30)).unwrap();
        let s = stored_value(StoredId::OmegaPlus, p(35)).unwrap();
        assert!(c.value.agreement_digits(&s) > 29.0);
    }

    #[test]
    fn gamma_quotients_match_log_gamma() {
        let pr = p(30);
        let g = |n, d| gamma(&Real::ratio(n, d, pr), pr).unwrap();
        let q4 = (&g(1, 4) / &g(3, 4)).powi(2);
        assert!(constant(ConstantId::GammaQ4, pr).unwrap().value.agreement_digits(&q4) > 28.0);
        let q3 = (&g(1, 3) / &g(2, 3)).powi(6);
        let cube_root_two = Real::from_i64(2, pr).pow(&Real::ratio(1, 3, pr));
        let q3 = &q3 / &cube_root_two;
        assert!(constant(ConstantId::GammaQ3, pr).unwrap().value.agreement_digits(&q3) > 28.0);
        assert!(constant(ConstantId::GammaQ4, p(20)).unwrap().value.to_decimal_string(6).starts_with("8.7537"));
    }

    #[test]
    fn l_chi3_direct_series() {
        // sum chi(n)/n^2 as pairs 1/(3k+1)^2 - 1/(3k+2)^2; the dropped tail is below 1e-11
        let mut s = 0.0f64;
        let kmax = 200_000;
        for k in 0..kmax {
            let a = 3.0 * k as f64;
            s += 1.0 / ((a + 1.0) * (a + 1.0)) - 1.0 / ((a + 2.0) * (a + 2.0));
        }
        let c = constant(ConstantId::LChi3_2, p(20)).unwrap().value.to_f64();
        assert!((c - s).abs() < 1e-10);
    }
}
