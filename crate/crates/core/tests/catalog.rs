use cfvar::catalog::{
    self, builtin_catalog, verify_all, verify_entry, CatalogEntry, EntryStatus, Limit, VerifyConfig,
};
use cfvar::cfcore::{q, CFSpec, Poly2, RateModel, ZArg, Q};
use cfvar::numkit::{constant, elliptic_e, elliptic_k, ConstExpr, ConstantId, Precision, Real};

/// (id, b_0..b_4, a_1..a_4), from the displayed fractions; parameter entries at 1/2.
const LAYERS: [(&str, [&str; 5], [&str; 4]); 23] = [
    ("tiny-apery", ["0", "3", "9", "15", "21"], ["2", "-1", "-4", "-9"]),
    ("small-apery", ["0", "3", "25", "69", "135"], ["5", "1", "16", "81"]),
    ("big-apery", ["0", "5", "117", "535", "1463"], ["6", "-1", "-64", "-729"]),
    ("thm2", ["80", "47", "177", "397", "705"], ["-160", "81", "625", "2401"]),
    ("ramanujan-q4", ["80", "17", "32", "48", "64"], ["-64", "81", "625", "2401"]),
    ("s-small", ["0", "45", "177", "397", "705"], ["20", "81", "625", "2401"]),
    ("s-tiny", ["0", "12", "24", "36", "48"], ["4", "-9", "-25", "-49"]),
    ("s-big", ["0", "284", "2200", "7380", "17456"], ["48", "-729", "-15625", "-117649"]),
    ("thm3", ["112", "284", "2200", "7380", "17456"], ["16", "-729", "-15625", "-117649"]),
    ("lchi3", ["0", "3", "23", "63", "123"], ["2", "-9", "-144", "-729"]),
    ("thm4", ["36", "33", "162", "362", "642"], ["324", "-729", "-5625", "-21609"]),
    ("zeta3-alt", ["0", "2", "36", "160", "434"], ["12/7", "-16", "-1024", "-11664"]),
    ("bessel42", ["0", "23", "166", "549", "1292"], ["1", "-729", "-15625", "-117649"]),
    ("bessel42-cubic", ["0", "23", "326", "1629", "5132"], ["1", "-729", "-15625", "-117649"]),
    ("thm5", ["-128", "23", "166", "549", "1292"], ["64", "-729", "-15625", "-117649"]),
    ("thm6", ["8", "11", "24", "36", "48"], ["8", "-9", "-25", "-49"]),
    ("gamma-q4-inv", ["8", "4", "4", "4", "4"], ["4", "9", "25", "49"]),
    ("gamma-q4-alt", ["4", "1", "2", "2", "2"], ["8", "3", "15", "35"]),
    ("gamma-s", ["0", "1", "2", "2", "2"], ["4", "1", "9", "25"]),
    ("thm7", ["0", "3/2", "9/2", "15/2", "21/2"], ["1", "-1/4", "-1", "-9/4"]),
    ("thm8", ["3/2", "6", "12", "18", "24"], ["-1/4", "-9/4", "-25/4", "-49/4"]),
    ("thm9", ["0", "9/4", "109/4", "285/4", "549/4"], ["5", "13/2", "125/4", "225/2"]),
    ("f-z", ["1", "9", "186", "406", "714"], ["15", "234", "986", "3074"]),
];

fn qs(s: &str) -> Q {
    s.parse().unwrap()
}

fn find<'a>(cat: &'a [CatalogEntry], id: &str) -> &'a CatalogEntry {
    catalog::find(cat, id).unwrap_or_else(|| panic!("missing {id}"))
}

#[test]
fn builtin_layers_match_displays() {
    let cat = builtin_catalog();
    assert_eq!(cat.len(), LAYERS.len());
    let half = ZArg::Real(q(1, 2));
    for (id, b, a) in LAYERS {
        let e = find(&cat, id);
        let z = e.param.as_ref().map(|_| &half);
        for (n, want) in b.iter().enumerate() {
            assert_eq!(e.cf.b(n, z).unwrap(), qs(want), "{id} b_{n}");
        }
        for (n, want) in a.iter().enumerate() {
            assert_eq!(e.cf.a(n + 1, z).unwrap(), qs(want), "{id} a_{}", n + 1);
        }
    }
}

#[test]
fn builtin_is_valid_and_ids_unique() {
    let cat = builtin_catalog();
    assert!(catalog::validate_all(&cat).is_empty());
    let mut ids: Vec<&str> = cat.iter().map(|e| e.id.as_str()).collect();
    ids.sort();
    ids.dedup();
    assert_eq!(ids.len(), cat.len());
}

#[test]
fn limit_expressions() {
    let cat = builtin_catalog();
    let Limit::Expr(e) = &find(&cat, "thm6").limit else {
        panic!("thm6 has a closed-form limit")
    };
    assert_eq!(*e, ConstExpr::c(ConstantId::GammaQ4));
    let Limit::Expr(e) = &find(&cat, "thm5").limit else {
        panic!("thm5 has a closed-form limit")
    };
    let want = ConstExpr::int(3) * ConstExpr::c(ConstantId::EtaMinusIm) / ConstExpr::c(ConstantId::OmegaMinusIm);
    assert_eq!(*e, want);
    assert!(find(&cat, "f-z").limit.is_exploratory());
}

#[test]
fn json_round_trip() {
    let cat = builtin_catalog();
    let text = catalog::to_json(&cat);
    assert!(text.contains("cfvar-catalog/1"));
    assert_eq!(catalog::from_json(&text).unwrap(), cat);

    let dir = std::env::temp_dir().join(format!("cfvar-catalog-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("catalog.json");
    catalog::save(&path, &cat).unwrap();
    assert_eq!(catalog::load(&path).unwrap(), cat);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn schema_errors_name_the_field() {
    let cat = builtin_catalog();
    let text = catalog::to_json(&cat[..1]);
    let broken = text.replacen("\"id\"", "\"identifier\"", 1);
    let err = catalog::from_json(&broken).unwrap_err().to_string();
    assert!(err.contains("id"), "{err}");
    let wrong_format = text.replace("cfvar-catalog/1", "cfvar-catalog/9");
    assert!(catalog::from_json(&wrong_format).is_err());
    assert!(catalog::from_json("[1, 2").is_err());
}

#[test]
fn validation_rejects_zero_numerator_and_unit_rate() {
    let cat = builtin_catalog();
    let mut e = find(&cat, "tiny-apery").clone();
    e.cf.a_poly = Poly2::zero();
    let d = catalog::validate(&e);
    assert!(d.iter().any(|d| d.field == "cf.a_poly"), "{d:?}");

    let mut e = find(&cat, "tiny-apery").clone();
    if let Some(RateModel::Geometric { rho, .. }) = &mut e.rate {
        *rho = ConstExpr::int(1);
    }
    let d = catalog::validate(&e);
    assert!(d.iter().any(|d| d.field == "rate.rho"), "{d:?}");

    let mut dup = cat.clone();
    dup.push(cat[0].clone());
    assert!(catalog::validate_all(&dup).iter().any(|d| d.message == "duplicate id"));

    let mut e = find(&cat, "tiny-apery").clone();
    e.cf = CFSpec::parse("[[0,3(2n-1)+z],[2,-n^2]]").unwrap();
    assert!(!catalog::validate(&e).is_empty());
}

#[test]
fn empty_catalog_passes() {
    let r = verify_all(&[], &VerifyConfig::default());
    assert!(r.entries.is_empty());
    assert!(r.passed);
}

#[test]
fn corrupted_head_is_flagged_alone() {
    let mut cat: Vec<CatalogEntry> = ["tiny-apery", "thm6", "s-tiny"]
        .iter()
        .map(|id| find(&builtin_catalog(), id).clone())
        .collect();
    cat[1].cf.b_heads[1] = Poly2::int(12);
    let r = verify_all(&cat, &VerifyConfig::default());
    assert!(!r.passed);
    let failed: Vec<&str> = r.entries.iter().filter(|e| !e.passed()).map(|e| e.id.as_str()).collect();
    assert_eq!(failed, ["thm6"]);
}

#[test]
fn tiny_apery_to_forty_digits() {
    let cat = builtin_catalog();
    let cfg = VerifyConfig {
        skip_rates: true,
        ..VerifyConfig::default()
    };
    let r = verify_entry(find(&cat, "tiny-apery"), &cfg);
    assert_eq!(r.status, EntryStatus::Pass);
    let p = Precision::new(40).unwrap();
    let v = find(&cat, "tiny-apery").cf.limit(p, None, 400).unwrap().value;
    let d = (&v - &constant(ConstantId::Log2, p).unwrap().value).abs();
    assert!(d.to_f64() < 1e-40);
}

#[test]
fn parameter_entries_against_oracles() {
    let cat = builtin_catalog();
    let p = Precision::new(40).unwrap();
    // (cosh(pi z) - 1)/(3 z^2) at z = 1/5
    let z = Real::ratio(1, 5, p);
    let pz = &constant(ConstantId::Pi, p).unwrap().value * &z;
    let want = &(&pz.cosh() - &Real::one(p)) / &(&z * &z).mul_i64(3);
    let got = find(&cat, "thm9").cf.limit(p, Some(&ZArg::Real(q(1, 5))), 5000).unwrap().value;
    assert!((&got - &want).abs().to_f64() < 1e-30);

    let half = Real::ratio(1, 2, p);
    let want = &elliptic_e(&half, p).unwrap().mul_i64(2) / &elliptic_k(&half, p).unwrap();
    let got = find(&cat, "thm8").cf.limit(p, Some(&ZArg::Real(q(1, 2))), 5000).unwrap().value;
    assert!((&got - &want).abs().to_f64() < 1e-30);

    // At z = 0 the elliptic fraction terminates at b_0 = 2.
    let r = find(&cat, "thm8").cf.limit(p, Some(&ZArg::Real(q(0, 1))), 5000).unwrap();
    assert!(r.terminated);
    assert_eq!(r.value.to_f64(), 2.0);
}

#[test]
fn cosh_family_at_zero_is_small_apery_tail() {
    let cat = builtin_catalog();
    let zero = ZArg::Real(q(0, 1));
    let thm9 = &find(&cat, "thm9").cf;
    let small = &find(&cat, "small-apery").cf;
    for n in 1..=30 {
        assert_eq!(thm9.b(n, Some(&zero)).unwrap(), small.b(n, None).unwrap());
        assert_eq!(thm9.a(n, Some(&zero)).unwrap(), small.a(n, None).unwrap());
    }
}

#[test]
fn unknown_constant_is_an_error() {
    let cat = builtin_catalog();
    let text = catalog::to_json(&cat[..1]).replace("log2", "log3");
    assert!(catalog::from_json(&text).is_err());
}
