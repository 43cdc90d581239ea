use num_bigint::BigInt;
use num_traits::ToPrimitive;

use cfvar::cfcore::{q, qi, Q};
use cfvar::integrals::{
    big_apery, cmatrix3, hyperg_identity_check, i2_coords, i3_coords, lattice_bases, quad_i1, quad_i2, quad_i2_n,
    quad_i3, quad_i3_n, quad_r1, scales_to_integer, Params2, Params3, QuadSpec,
};
use cfvar::rvgroup::{
    apply, generators_g3, growth_fit3, integrality2, integrality3, invariance_scan, lcm_d, successive_maxima, Params,
};
use cfvar::Error;

fn f(x: &Q) -> f64 {
    x.to_f64().unwrap()
}

#[test]
fn double_integrals_sit_on_the_lattice() {
    let ((a, b), _) = lattice_bases().unwrap();
    let spec = QuadSpec::two_dim();
    for n in 0..4 {
        let v = quad_i2_n(n, &spec).unwrap().value;
        let (p, qq) = i2_coords(n as usize);
        let want = f(&p) * a - f(&qq) * b;
        assert!((v - want).abs() < 1e-8 * want.abs().max(1.0), "n={n}: {v} vs {want}");
    }
}

#[test]
fn triple_integrals_sit_on_the_lattice() {
    let (_, (w, e)) = lattice_bases().unwrap();
    let spec = QuadSpec::three_dim();
    for n in 0..3 {
        let v = quad_i3_n(n, &spec).unwrap().value;
        let (al, be) = i3_coords(n as usize);
        let want = f(&al) * w + f(&be) * e;
        assert!((v - want).abs() < 1e-6 * want.abs(), "n={n}: {v} vs {want}");
    }
}

#[test]
fn profile_wrappers_agree_with_parameter_form() {
    let s2 = QuadSpec::two_dim();
    let s3 = QuadSpec::three_dim();
    // The double profile carries the sign (-1)^n.
    let v = quad_i2(&Params2::profile(1), &s2).unwrap().value;
    assert!((quad_i2_n(1, &s2).unwrap().value + v).abs() < 1e-12);
    let v = quad_i3(&Params3::profile(1), &s3).unwrap().value;
    assert!((quad_i3_n(1, &s3).unwrap().value - v).abs() < 1e-12);
}

#[test]
fn divergent_parameters_are_rejected() {
    let mut a = Params3::uniform(q(1, 2));
    a.0[1] = q(-3, 2);
    assert!(matches!(quad_i3(&a, &QuadSpec::three_dim()), Err(Error::Domain(_))));
    assert!(quad_i1(-1.0, 0.5, &QuadSpec::one_dim()).is_err());
    assert!(quad_r1(1, 1.5, &QuadSpec::one_dim()).is_err());
    assert!(QuadSpec::new(3, 1e-12).is_err());
}

#[test]
fn hypergeometric_identities() {
    let r = hyperg_identity_check(15).unwrap();
    assert!(r.passed);
    for id in &r.identities {
        assert!(id.residual < id.tolerance, "{}", id.name);
        assert!(id.truncation_monotone(), "{}", id.name);
    }
}

#[test]
fn big_apery_numbers_grow_like_the_silver_ratio() {
    // A(n+1)/A(n) -> (1 + sqrt 2)^4
    let r = |n: u64| f(&(Q::from_integer(big_apery(n + 1)) / Q::from_integer(big_apery(n))));
    let rho4 = (1.0 + 2f64.sqrt()).powi(4);
    assert!((r(200) / rho4 - 1.0).abs() < 0.02);
    assert_eq!(big_apery(5), BigInt::from(819005));
}

#[test]
fn integrality_examples() {
    let d3 = lcm_d(3);
    assert_eq!(d3, BigInt::from(6));
    let (a, b) = i3_coords(2);
    assert!(scales_to_integer(&d3.pow(3), &a) && scales_to_integer(&d3.pow(3), &b));
    let (p, qq) = i2_coords(2);
    assert!(scales_to_integer(&d3.pow(2), &p) && scales_to_integer(&d3.pow(2), &qq));
    assert_eq!(&qq * qi(36), qi(-47));

    let r3 = integrality3(15);
    assert_eq!(r3.failures(), vec![1]);
    let r2 = integrality2(15);
    assert_eq!(r2.failures(), vec![1]);
}

#[test]
fn successive_maxima_of_the_profile() {
    let c = cmatrix3(&Params3::profile(3));
    let m = successive_maxima(&c.multiset(), 3).unwrap();
    assert_eq!(m, vec![q(5, 2), q(5, 2), q(5, 2)]);
}

#[test]
fn growth_of_scaled_coordinates() {
    let g = growth_fit3(20, 40);
    assert!(g.relative_error < 0.1, "{g:?}");
}

#[test]
fn uniform_half_orbit_is_a_single_point() {
    let c = cmatrix3(&Params3::uniform(q(1, 2)));
    for g in generators_g3() {
        assert_eq!(apply(&g, &c).unwrap(), c);
    }
    let r = invariance_scan(&Params::Triple(Params3::uniform(q(1, 2))), 10, &QuadSpec::three_dim()).unwrap();
    assert!(r.passed);
    assert_eq!(r.max_deviation, 0.0);
}
