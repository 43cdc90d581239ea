use super::{CatalogEntry, Limit, ObservationBattery, Param, ParamName, ZFunction};
use crate::cfcore::{q, CFSpec, RateModel, RateSign};
use crate::numkit::{ConstExpr, ConstantId, Func};

fn c(id: ConstantId) -> ConstExpr {
    ConstExpr::c(id)
}

fn int(n: i64) -> ConstExpr {
    ConstExpr::int(n)
}

fn pi() -> ConstExpr {
    c(ConstantId::Pi)
}

fn silver() -> ConstExpr {
    int(1) + int(2).sqrt()
}

/// (Gamma(1/4)/Gamma(3/4))^4
fn g4() -> ConstExpr {
    c(ConstantId::GammaQ4).powi(2)
}

fn geometric(sign: RateSign, c: Option<ConstExpr>, rho: ConstExpr, slope: u32, offset: i64) -> Option<RateModel> {
    Some(RateModel::Geometric {
        sign,
        c,
        rho,
        slope,
        offset,
    })
}

fn algebraic(sign: RateSign, power: ConstExpr) -> Option<RateModel> {
    Some(RateModel::Algebraic { sign, power })
}

/// rho(z) = (1 + sqrt(1-z))^2 / z
fn rho_z() -> ConstExpr {
    (int(1) + (int(1) - ConstExpr::var()).sqrt()).powi(2) / ConstExpr::var()
}

fn entry(
    id: &str,
    cf: &str,
    param: Option<(ParamName, &[(i64, i64)])>,
    limit: Limit,
    rate: Option<RateModel>,
    provenance: &str,
) -> CatalogEntry {
    CatalogEntry {
        id: id.to_string(),
        cf: CFSpec::parse(cf).unwrap_or_else(|e| panic!("builtin fraction {id}: {e}")),
        param: param.map(|(name, s)| Param {
            name,
            samples: s.iter().map(|(n, d)| q(*n, *d)).collect(),
        }),
        limit,
        rate,
        published: None,
        observations: None,
        provenance: provenance.to_string(),
    }
}

/// The shipped catalog.
pub fn builtin_catalog() -> Vec<CatalogEntry> {
    use RateSign::*;
    let expr = Limit::Expr;
    let omega_p2 = || c(ConstantId::OmegaPlus).powi(2);
    let omega_m2 = || c(ConstantId::OmegaMinusIm).powi(2);
    let mut s_big = entry(
        "s-big",
        "[[0,4n(68n^2+3)],[48,-(2n+1)^6]]",
        None,
        expr(int(-336) - int(9) * c(ConstantId::EtaPlus) / c(ConstantId::OmegaPlus)),
        geometric(
            Plus,
            Some(int(576) * pi().powi(3) / omega_p2()),
            silver(),
            8,
            8,
        ),
        "big Apery fraction shifted by n -> n+1/2",
    );
    s_big.published = Some(crate::numkit::stored(crate::numkit::StoredId::SBigLimit).decimal.to_string());

    let mut f_z = entry(
        "f-z",
        "[[1,12(1-z^2),44n^2+1+36z^2],[60z^2,((2n+1)^2+16z^2)((2n+1)^2+36z^2)]]",
        Some((ParamName::Z, &[(1, 5), (3, 10)])),
        Limit::Exploratory,
        None,
        "hyperbolic cosine family shifted by n -> n+1/2",
    );
    f_z.observations = Some(ObservationBattery::ShiftedCosh);

    vec![
        entry(
            "tiny-apery",
            "[[0,3(2n-1)],[2,-n^2]]",
            None,
            expr(c(ConstantId::Log2)),
            geometric(Plus, Some(int(2) * pi()), silver(), 4, 2),
            "tiny Apery fraction for log 2",
        ),
        entry(
            "small-apery",
            "[[0,11n^2-11n+3],[5,n^4]]",
            None,
            expr(c(ConstantId::Zeta2)),
            geometric(AltN, Some(int(4) * pi().powi(2)), c(ConstantId::Golden), 10, 5),
            "small Apery fraction for zeta(2)",
        ),
        entry(
            "big-apery",
            "[[0,(2n-1)(17n^2-17n+5)],[6,-n^6]]",
            None,
            expr(c(ConstantId::Zeta3)),
            geometric(Plus, Some(int(4) * pi().powi(3)), silver(), 8, 4),
            "big Apery fraction for zeta(3)",
        ),
        entry(
            "thm2",
            "[[80,47,44n^2+1],[-160,(2n+1)^4]]",
            None,
            expr(g4()),
            geometric(AltN1, Some(int(8) * g4()), c(ConstantId::Golden), 10, 10),
            "lemniscatic gamma quotient, fourth power",
        ),
        entry(
            "ramanujan-q4",
            "[[80,17,16n],[-64,(2n+1)^4]]",
            None,
            expr(g4()),
            algebraic(AltN1, int(4)),
            "Ramanujan-type fraction for the fourth-power gamma quotient",
        ),
        entry(
            "s-small",
            "[[0,44n^2+1],[20,(2n+1)^4]]",
            None,
            expr(int(-10) + int(800) / g4()),
            geometric(AltN, Some(int(6400) / g4()), c(ConstantId::Golden), 10, 10),
            "small Apery fraction shifted by n -> n+1/2",
        ),
        entry(
            "s-tiny",
            "[[0,12n],[4,-(2n+1)^2]]",
            None,
            expr(int(4) - int(32) / c(ConstantId::GammaQ4)),
            geometric(Plus, Some(int(128) / c(ConstantId::GammaQ4)), silver(), 4, 4),
            "tiny Apery fraction shifted by n -> n+1/2",
        ),
        s_big,
        entry(
            "thm3",
            "[[112,4n(68n^2+3)],[16,-(2n+1)^6]]",
            None,
            expr(int(-3) * c(ConstantId::EtaPlus) / c(ConstantId::OmegaPlus)),
            geometric(
                Plus,
                Some(int(192) * pi().powi(3) / omega_p2()),
                silver(),
                8,
                8,
            ),
            "quasiperiod quotient of the level-8 eta product, real period",
        ),
        entry(
            "lchi3",
            "[[0,10n^2-10n+3],[2,-9n^4]]",
            None,
            expr(c(ConstantId::LChi3_2)),
            geometric(Plus, None, int(9), 1, 0),
            "known fraction for L(chi_-3, 2)",
        ),
        entry(
            "thm4",
            "[[36,33,40n^2+2],[324,-9(2n+1)^4]]",
            None,
            expr(c(ConstantId::GammaQ3)),
            geometric(Plus, Some(int(4) * c(ConstantId::GammaQ3)), int(3), 2, 2),
            "cubic gamma quotient 2^(-1/3)(Gamma(1/3)/Gamma(2/3))^6",
        ),
        entry(
            "zeta3-alt",
            "[[0,(2n-1)(5n^2-5n+2)],[12/7,-16n^6]]",
            None,
            expr(c(ConstantId::Zeta3)),
            geometric(Plus, None, int(4), 1, 0),
            "known fraction for zeta(3) with ratio 4",
        ),
        entry(
            "bessel42",
            "[[0,n(20n^2+3)],[1,-(2n+1)^6]]",
            None,
            expr(int(2) + int(3) * c(ConstantId::EtaMinusIm) / (int(64) * c(ConstantId::OmegaMinusIm))),
            geometric(
                Plus,
                Some(int(3) * pi().powi(3) / (int(16) * omega_m2())),
                int(2),
                2,
                0,
            ),
            "Bessel moment quotient 8 c(4,2)/c(4,0), quadratic reading",
        ),
        entry(
            "bessel42-cubic",
            "[[0,n(20n^3+3)],[1,-(2n+1)^6]]",
            None,
            Limit::Exploratory,
            None,
            "Bessel moment quotient 8 c(4,2)/c(4,0), cubic reading",
        ),
        entry(
            "thm5",
            "[[-128,n(20n^2+3)],[64,-(2n+1)^6]]",
            None,
            expr(int(3) * c(ConstantId::EtaMinusIm) / c(ConstantId::OmegaMinusIm)),
            geometric(Plus, Some(int(12) * pi().powi(3) / omega_m2()), int(2), 2, 0),
            "quasiperiod quotient of the level-8 eta product, imaginary period",
        ),
        entry(
            "thm6",
            "[[8,11,12n],[8,-(2n+1)^2]]",
            None,
            expr(c(ConstantId::GammaQ4)),
            geometric(Plus, Some(int(4) * c(ConstantId::GammaQ4)), silver(), 4, 4),
            "lemniscatic gamma quotient, square",
        ),
        entry(
            "gamma-s",
            "[[0,4s-1,8s-2],[4,(2n-1)^2]]",
            Some((ParamName::S, &[(1, 2), (3, 4), (1, 1)])),
            expr(Func::Exp.of(
                int(2) * (Func::LnGamma.of(ConstExpr::var()) - Func::LnGamma.of(ConstExpr::var() + ConstExpr::q(1, 2))),
            )),
            algebraic(AltN, int(4) * ConstExpr::var() - int(1)),
            "classical fraction for (Gamma(s)/Gamma(s+1/2))^2",
        ),
        entry(
            "gamma-q4-inv",
            "[[8,4],[4,(2n+1)^2]]",
            None,
            expr(c(ConstantId::GammaQ4)),
            algebraic(AltN, int(2)),
            "classical fraction at s = 1/4",
        ),
        entry(
            "gamma-q4-alt",
            "[[4,1,2],[8,(2n-1)(2n+1)]]",
            None,
            expr(c(ConstantId::GammaQ4)),
            algebraic(AltN, int(1)),
            "auxiliary fraction for the lemniscatic quotient",
        ),
        entry(
            "thm7",
            "[[0,(2n-1)(2-z)],[2z,-n^2z^2]]",
            Some((ParamName::Z, &[(-1, 1), (1, 2), (1, 4)])),
            Limit::Named(ZFunction::NegLog1Minus),
            geometric(Plus, Some(int(2) * pi()), rho_z(), 2, 1),
            "logarithm family specializing to tiny Apery",
        ),
        entry(
            "thm8",
            "[[2-z,4n(2-z)],[-(2n+1)^2z^2]]",
            Some((ParamName::Z, &[(-1, 1), (1, 4), (1, 2)])),
            Limit::Named(ZFunction::TwoEOverK),
            geometric(
                Plus,
                Some(int(-2) * pi() / Func::EllipticK.of(ConstExpr::var()).powi(2)),
                rho_z(),
                2,
                2,
            ),
            "complete elliptic integrals 2E/K",
        ),
        entry(
            "thm9",
            "[[0,3(1-z^2),11n^2-11n+3+9z^2],[5,(n^2+4z^2)(n^2+9z^2)]]",
            Some((ParamName::Z, &[(0, 1), (1, 5), (2, 5)])),
            Limit::Named(ZFunction::CoshShift),
            geometric(
                AltN,
                Some(
                    int(4)
                        * pi().powi(2)
                        * Func::Sinhc.of(int(2) * pi() * ConstExpr::var())
                        * Func::Sinhc.of(int(3) * pi() * ConstExpr::var()),
                ),
                c(ConstantId::Golden),
                10,
                5,
            ),
            "hyperbolic cosine family specializing to small Apery",
        ),
        f_z,
    ]
}
