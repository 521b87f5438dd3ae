use proptest::prelude::*;

use envelope_core::analysis::Analysis;
use envelope_core::discriminant::{circle_circle_intersect, Intersection};
use envelope_core::envelope::creator_branches;
use envelope_core::expr::{parse_expr, Expr, Func};
use envelope_core::family::{CircleFamilySpec, Interval};
use envelope_core::render::fmt_num;
use envelope_core::Vec2;

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (1i32..9).prop_map(|v| Expr::num(v as f64)),
        Just(Expr::var())
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), 1i32..4).prop_map(|(a, n)| Expr::Pow(Box::new(a), n)),
            (
                prop_oneof![Just(Func::Sin), Just(Func::Cos), Just(Func::Exp)],
                inner
            )
                .prop_map(|(f, a)| Expr::Call(f, Box::new(a))),
        ]
    })
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #[test]
    fn printed_expressions_reparse(e in expr(), t in -1.0f64..1.0) {
        let text = e.to_string();
        let back = parse_expr(&text).unwrap();
        prop_assert_eq!(back.to_string(), text);
        if let (Ok(a), Ok(b)) = (e.eval(t), back.eval(t)) {
            if a.is_finite() {
                prop_assert!(close(a, b, 1e-12), "{} vs {}", a, b);
            }
        }
    }

    #[test]
    fn derivative_matches_central_difference(e in expr(), t in -0.8f64..0.8) {
        let h = 1e-5;
        let (Ok(d), Ok(p), Ok(m)) = (e.diff().eval(t), e.eval(t + h), e.eval(t - h)) else {
            return Ok(());
        };
        prop_assume!(d.abs() < 1e6 && p.abs() < 1e6);
        let fd = (p - m) / (2.0 * h);
        prop_assert!(close(d, fd, 1e-4), "{}: {} vs {}", e, d, fd);
    }

    #[test]
    fn intersection_points_lie_on_both_circles(
        x1 in -5.0f64..5.0, y1 in -5.0f64..5.0, r1 in 0.1f64..5.0,
        x2 in -5.0f64..5.0, y2 in -5.0f64..5.0, r2 in 0.1f64..5.0,
    ) {
        let (c1, c2) = (Vec2::new(x1, y1), Vec2::new(x2, y2));
        prop_assume!(c1.distance(c2) > 1e-6);
        let hit = circle_circle_intersect(c1, r1, c2, r2).unwrap();
        let d = c1.distance(c2);
        let crosses = d < r1 + r2 - 1e-9 && d > (r1 - r2).abs() + 1e-9;
        if crosses {
            prop_assert!(matches!(hit, Intersection::Pair(..)));
        }
        for p in hit.points() {
            prop_assert!((p.distance(c1) - r1).abs() < 1e-8);
            prop_assert!((p.distance(c2) - r2).abs() < 1e-8);
        }
    }

    #[test]
    fn midpoint_grid_is_symmetric(half in 0.1f64..10.0, k in 1usize..500) {
        let n = 2 * k + 1;
        let g = Interval::new(-half, half).unwrap().midpoint_grid(n);
        prop_assert_eq!(g.len(), n);
        prop_assert!(g[k].abs() <= 1e-15 * half);
        for i in 0..n {
            prop_assert!((g[i] + g[n - 1 - i]).abs() < 1e-12 * half);
        }
    }

    #[test]
    fn formatted_numbers_parse_back(v in prop::num::f64::NORMAL) {
        let back: f64 = fmt_num(v).parse().unwrap();
        prop_assert!((back - v).abs() <= 1e-8 * v.abs());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn creators_are_unit_and_sign_of_normal_is_irrelevant(a in 0.2f64..2.0, r in 0.05f64..0.4) {
        let lambda = r.to_string();
        let s = format!("sqrt(1+4*{a}^2*t^2)");
        let (nx, ny) = (format!("-2*{a}*t/{s}"), format!("1/{s}"));
        let (mx, my) = (format!("2*{a}*t/{s}"), format!("-1/{s}"));
        let gy = format!("{a}*t^2");
        let up = CircleFamilySpec::from_sources(("t", &gy), &lambda, Some((&nx, &ny)), (-1.0, 1.0), 401).unwrap();
        let down = CircleFamilySpec::from_sources(("t", &gy), &lambda, Some((&mx, &my)), (-1.0, 1.0), 401).unwrap();
        let au = Analysis::run(&up, &Default::default()).unwrap();
        let ad = Analysis::run(&down, &Default::default()).unwrap();
        prop_assert_eq!(au.report.classification, ad.report.classification);

        for b in creator_branches(&au.report, &au.frames).unwrap() {
            for c in &b.creator {
                prop_assert!((c.norm() - 1.0).abs() < 1e-12);
            }
        }

        let eu = au.envelopes().unwrap();
        let ed = ad.envelopes().unwrap();
        prop_assert_eq!(eu.len(), ed.len());
        for b in &eu {
            let matched = ed.iter().any(|o| b.points.iter().zip(&o.points).all(|(p, q)| p.distance(*q) < 1e-12));
            prop_assert!(matched);
        }
    }
}
