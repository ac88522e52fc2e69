use fockcat::dsl::{parse_expr_with_vars, Expr};
use fockcat::scalar::{factorial, rat, rational_to_f64, Angle, Rational};
use fockcat::weyl::{field_power_expect, WeylElement};
use proptest::prelude::*;

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        Just(Expr::Z),
        Just(Expr::E),
        Just(Expr::Eplus),
        Just(Expr::O),
        (0u32..6).prop_map(Expr::En),
        (0u64..12).prop_map(Expr::Nat),
        Just(Expr::Var("X".into())),
        Just(Expr::OpA),
        Just(Expr::OpAstar),
        Just(Expr::OpPhi),
        Just(Expr::OpN),
    ]
}

fn angle() -> impl Strategy<Value = Angle> {
    prop_oneof![(-7i64..7, 1i64..9).prop_map(|(p, q)| Angle::turns(rat(p, q))), (-10.0f64..10.0).prop_map(Angle::radians),]
}

/// Expressions of depth at most 6.
fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(6, 64, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|x| Expr::Derivative(Box::new(x))),
            inner.clone().prop_map(|x| Expr::Create(Box::new(x))),
            inner.clone().prop_map(|x| Expr::Conj(Box::new(x))),
            (inner.clone(), angle()).prop_map(|(x, a)| Expr::Phase(Box::new(x), a)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::sum(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::product(a, b)),
            (inner.clone(), 0u32..5).prop_map(|(a, n)| Expr::pow(a, n)),
            (inner.clone(), inner).prop_map(|(a, b)| Expr::compose(a, b)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn render_then_parse_is_identity(e in expr()) {
        let text = e.to_string();
        let back = parse_expr_with_vars(&text, &["X"]).map_err(|err| TestCaseError::fail(format!("{text}: {err}")))?;
        prop_assert_eq!(back, e, "rendered as {}", text);
    }
}

fn phi_power(m: u32) -> WeylElement<Rational> {
    WeylElement::<Rational>::field().pow(m)
}

#[test]
fn matrix_elements_match_normal_ordered_expectations() {
    for m in 0..=6u32 {
        let matrix = phi_power(m).to_matrix(12).unwrap();
        for k in 0..=5usize {
            for l in 0..=5usize {
                let norm = (rational_to_f64(&Rational::from_integer(factorial(k).into()))
                    * rational_to_f64(&Rational::from_integer(factorial(l).into())))
                .sqrt();
                let expected = rational_to_f64(&field_power_expect(k, m, l));
                let got = matrix.entry(k, l) * norm;
                assert!((got.re - expected).abs() < 1e-8 && got.im.abs() < 1e-8, "k={k} m={m} l={l}: {got} vs {expected}");
            }
        }
    }
}

#[test]
fn low_matrix_elements_do_not_depend_on_the_cutoff() {
    let small = phi_power(4).to_matrix(8).unwrap();
    let large = phi_power(4).to_matrix(20).unwrap();
    for r in 0..=8 {
        for c in 0..=8 {
            assert!((small.entry(r, c) - large.entry(r, c)).norm() < 1e-9);
        }
    }
}
