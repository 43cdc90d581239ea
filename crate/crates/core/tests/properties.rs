use std::sync::OnceLock;

use proptest::prelude::*;

use cfvar::cfcore::{check_recurrence_exact, q, qi, CFSpec, Poly2, Q};
use cfvar::integrals::{
    cmatrix2, cmatrix3, eq1, eq2, i2_coords, i3_coords, recover2, recover3, CMatrix, Layout, Params2, Params3,
};
use cfvar::rvgroup::{apply, generators_g2, generators_g3, group_closure, GroupClosure};
use cfvar::transforms::{
    clear_denominators, euler_transform, head_edit, integer_shift, moebius_between, MoebiusMap, TermRatio,
};

fn g3() -> &'static GroupClosure {
    static G: OnceLock<GroupClosure> = OnceLock::new();
    G.get_or_init(|| group_closure(&generators_g3()).unwrap())
}

fn g2() -> &'static GroupClosure {
    static G: OnceLock<GroupClosure> = OnceLock::new();
    G.get_or_init(|| group_closure(&generators_g2()).unwrap())
}

fn rational() -> impl Strategy<Value = Q> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| q(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = Q> {
    rational().prop_filter("nonzero", |x| *x != qi(0))
}

fn params3() -> impl Strategy<Value = Params3> {
    proptest::array::uniform6(rational()).prop_map(Params3)
}

fn params2() -> impl Strategy<Value = Params2> {
    proptest::array::uniform5(rational()).prop_map(Params2)
}

fn row_sum(c: &CMatrix, i: usize) -> Q {
    (0..4).filter_map(|j| c.get(i, j)).cloned().sum()
}

/// b_0 + a_1/(b_1 + ... + a_n/b_n) evaluated from the bottom; None on a zero denominator.
fn backward(cf: &CFSpec, n: usize) -> Option<Q> {
    let mut tail = cf.b(n, None).ok()?;
    for k in (1..=n).rev() {
        if tail == qi(0) {
            return None;
        }
        tail = cf.b(k - 1, None).ok()? + cf.a(k, None).ok()? / tail;
    }
    Some(tail)
}

/// A z-free fraction [[h, b1 n + b0],[g, a2 n^2 + a1 n + a0]].
fn small_cf() -> impl Strategy<Value = CFSpec> {
    (-5i64..=5, 1i64..=6, -4i64..=4, 1i64..=5, -3i64..=3, 1i64..=4, -6i64..=6)
        .prop_filter_map("valid fraction", |(h, b1, b0, g, a2, a1, a0)| {
            if a2 == 0 && a1 == 0 && a0 == 0 {
                return None;
            }
            CFSpec::parse(&format!("[[{h},{b1}n+{b0}],[{g},{a2}n^2+{a1}n+{a0}]]")).ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn recover_inverts_cmatrix3(a in params3()) {
        prop_assert_eq!(recover3(&cmatrix3(&a)), Some(a));
    }

    #[test]
    fn recover_inverts_cmatrix2(a in params2()) {
        prop_assert_eq!(recover2(&cmatrix2(&a)), Some(a));
    }

    #[test]
    fn triple_matrix_rows_and_columns(a in params3()) {
        let c = cmatrix3(&a);
        let r0 = row_sum(&c, 0);
        for i in 1..4 {
            prop_assert_eq!(row_sum(&c, i), r0.clone());
        }
        let d0 = c.get(0, 2).unwrap() - c.get(0, 3).unwrap();
        for i in 1..4 {
            prop_assert_eq!(c.get(i, 2).unwrap() - c.get(i, 3).unwrap(), d0.clone());
        }
    }

    #[test]
    fn g3_preserves_multiset_and_family(a in params3(), k in 0usize..1920) {
        let c = cmatrix3(&a);
        let img = apply(&g3().elements[k], &c).unwrap();
        prop_assert_eq!(img.multiset(), c.multiset());
        let back = recover3(&img);
        prop_assert!(back.is_some());
        prop_assert_eq!(cmatrix3(&back.unwrap()), img);
    }

    #[test]
    fn g2_preserves_multiset_and_family(a in params2(), k in 0usize..120) {
        let c = cmatrix2(&a);
        prop_assert_eq!(c.layout, Layout::Double);
        let img = apply(&g2().elements[k], &c).unwrap();
        prop_assert_eq!(img.multiset(), c.multiset());
        let back = recover2(&img);
        prop_assert!(back.is_some());
        prop_assert_eq!(cmatrix2(&back.unwrap()), img);
    }

    #[test]
    fn group_elements_compose_inside_the_group(i in 0usize..1920, j in 0usize..1920) {
        let g = g3();
        let prod = g.elements[i].after(&g.elements[j]);
        prop_assert!(g.elements.iter().any(|e| e.map == prod.map));
    }

    #[test]
    fn propagation_is_exact(y0 in rational(), y1 in rational(), cubic in any::<bool>()) {
        let rec = if cubic { eq2() } else { eq1() };
        let ys = rec.propagate(&y0, &y1, 25, None).unwrap();
        let rep = check_recurrence_exact(&rec, 0, &ys, None).unwrap();
        prop_assert!(rep.failures.is_empty());
        // Linearity: the solution through (y0, y1) is y0 u + y1 v.
        let u = rec.propagate(&qi(1), &qi(0), 25, None).unwrap();
        let v = rec.propagate(&qi(0), &qi(1), 25, None).unwrap();
        for n in 0..=25 {
            prop_assert_eq!(ys[n].clone(), &y0 * &u[n] + &y1 * &v[n]);
        }
    }

    #[test]
    fn convergents_match_backward_evaluation(cf in small_cf(), n in 1usize..14) {
        if let Some(want) = backward(&cf, n) {
            if let Ok(got) = cf.convergent(n, None) {
                prop_assert_eq!(got, want);
            }
        }
    }

    #[test]
    fn clearing_denominators_keeps_convergents(b in 1i64..6, bd in 2i64..5, a in -4i64..4, ad in 2i64..7) {
        prop_assume!(a != 0);
        let cf = CFSpec::parse(&format!("[[1,{b}n/{bd}+1],[1,{a}(n+1)^2/{ad}]]")).unwrap();
        let (out, c) = clear_denominators(&cf).unwrap();
        prop_assert!(c >= qi(1));
        for n in 0..12 {
            prop_assert_eq!(out.convergent(n, None).ok(), cf.convergent(n, None).ok());
        }
    }

    #[test]
    fn integer_shift_map_is_exact(cf in small_cf(), m in 1usize..4) {
        if let Ok((tail, map)) = integer_shift(&cf, m, None) {
            for d in 1..10 {
                if let (Ok(lhs), Ok(t)) = (cf.convergent(d + m, None), tail.convergent(d, None)) {
                    if let Ok(rhs) = map.apply_q(&t) {
                        prop_assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn head_edit_relates_convergents(h0 in -9i64..9, h1 in 1i64..9, g in 1i64..9) {
        let base = CFSpec::parse("[[0,12n],[4,-(2n+1)^2]]").unwrap();
        let (edited, map) = head_edit(&base, vec![Poly2::int(h0), Poly2::int(h1)], vec![Poly2::int(g)], None).unwrap();
        prop_assert_eq!(moebius_between(&base, &edited, None).unwrap(), map.clone());
        for n in 3..15 {
            let lhs = edited.convergent(n, None).unwrap();
            let rhs = map.apply_q(&base.convergent(n, None).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn moebius_inverse_and_composition(
        m in proptest::array::uniform4(rational()),
        k in proptest::array::uniform4(rational()),
        x in rational(),
    ) {
        let (Ok(a), Ok(b)) = (
            MoebiusMap::new(m[0].clone(), m[1].clone(), m[2].clone(), m[3].clone()),
            MoebiusMap::new(k[0].clone(), k[1].clone(), k[2].clone(), k[3].clone()),
        ) else {
            return Ok(());
        };
        if let Ok(y) = a.apply_q(&x) {
            prop_assert_eq!(a.inverse().apply_q(&y).unwrap(), x.clone());
        }
        if let Ok(bx) = b.apply_q(&x) {
            if let (Ok(lhs), Ok(rhs)) = (a.compose(&b).apply_q(&x), a.apply_q(&bx)) {
                prop_assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn euler_transform_geometric(x in nonzero_rational(), t0 in nonzero_rational()) {
        prop_assume!(x != qi(1));
        let cf = euler_transform(
            &Poly2::constant(t0.clone()),
            &TermRatio { num: Poly2::constant(x.clone()), den: Poly2::int(1) },
            0,
        ).unwrap();
        let mut term = t0.clone();
        let mut sum = t0.clone();
        for n in 0..30 {
            prop_assert_eq!(cf.convergent(n, None).unwrap(), sum.clone());
            term = &term * &x;
            sum = &sum + &term;
        }
    }
}

#[test]
fn lattice_coordinates_solve_the_recurrences() {
    let (p, qq): (Vec<Q>, Vec<Q>) = (0..20).map(i2_coords).unzip();
    assert!(check_recurrence_exact(&eq1(), 0, &p, None).unwrap().failures.is_empty());
    assert!(check_recurrence_exact(&eq1(), 0, &qq, None).unwrap().failures.is_empty());
    let (a, b): (Vec<Q>, Vec<Q>) = (0..20).map(i3_coords).unzip();
    assert!(check_recurrence_exact(&eq2(), 0, &a, None).unwrap().failures.is_empty());
    assert!(check_recurrence_exact(&eq2(), 0, &b, None).unwrap().failures.is_empty());
}
