use fano::riemannroch::{h0_fundamental, hilbert_polynomial, FanoNumerics, HilbertPolynomial};
use fano::Rational;
use proptest::prelude::*;

/// Closed forms obtained by hand from Riemann-Roch on curves, surfaces and
/// threefolds, used as an oracle independent of the linear solver.
fn oracle(n: u32, iota: i64, d: i64, t: i64) -> Rational {
    let t = Rational::integer(t);
    let d = Rational::integer(d);
    let i = Rational::integer(iota);
    match n {
        1 => &d * &t + 1,
        2 => &d * &t * (&t + &i) / 2 + 1,
        3 if iota == 1 => (&d / 2) * &t * (&t + 1) * (&t * 2 + 1) / 6 + &t * 2 + 1,
        3 => &d * &t * (&t + &i) * (&t * 2 + &i) / 12 + &t * 2 / &i + 1,
        _ => unreachable!(),
    }
}

fn chi(n: u32, iota: u32, d: i64) -> HilbertPolynomial {
    hilbert_polynomial(&FanoNumerics::new(n, iota, d).unwrap()).unwrap()
}

#[test]
fn anticanonical_sections_index_one() {
    for g in (2..=10).chain([12]) {
        let c = hilbert_polynomial(&FanoNumerics::from_genus(3, g).unwrap()).unwrap();
        assert_eq!(c.eval_int(1), g + 2, "g = {g}");
    }
}

#[test]
fn del_pezzo_threefolds() {
    for d in 1..=5 {
        let c = chi(3, 2, d);
        assert_eq!(c.eval_int(1), d + 2);
        // -K = 2H, and h0(-K) = g + 2 with 2g - 2 = 8d.
        assert_eq!(c.eval_int(2), 4 * d + 3);
    }
}

#[test]
fn quadric_and_projective_space() {
    assert_eq!(chi(3, 3, 2).eval_int(1), 5);
    assert_eq!(chi(3, 3, 2).eval_int(3), 30);
    assert_eq!(chi(3, 4, 1).eval_int(4), 35);
}

#[test]
fn h0_is_chi_at_one() {
    for (n, i, d) in [(3, 4, 1), (3, 3, 2), (3, 2, 1), (3, 2, 5), (3, 1, 22), (2, 1, 6), (2, 3, 1), (1, 2, 1)] {
        let fv = FanoNumerics::new(n, i, d).unwrap();
        assert_eq!(hilbert_polynomial(&fv).unwrap().eval_int(1), h0_fundamental(&fv).unwrap());
    }
}

#[test]
fn discrete_derivative_index_one() {
    for g in 2..=40 {
        let c = hilbert_polynomial(&FanoNumerics::from_genus(3, g).unwrap()).unwrap();
        // Third difference of a cubic with leading coefficient (g-1)/3 is 2(g-1).
        let d3 = c.eval_int(3) - c.eval_int(2) * 3 + c.eval_int(1) * 3 - c.eval_int(0);
        assert_eq!(d3, 2 * (g - 1));
    }
}

fn numerics() -> impl Strategy<Value = (u32, u32, i64)> {
    (1u32..=3).prop_flat_map(|n| {
        let lo = if n >= 3 { n - 2 } else { 1 };
        (Just(n), lo..=n + 1).prop_flat_map(move |(n, i)| {
            let d = if i == n + 1 {
                Just(1i64).boxed()
            } else if i == n {
                Just(2i64).boxed()
            } else if n == 3 && i == 1 {
                (1i64..40).prop_map(|h| 2 * h).boxed()
            } else {
                (1i64..60).boxed()
            };
            (Just(n), Just(i), d)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn functional_equation_and_normalisation((n, i, d) in numerics()) {
        let c = chi(n, i, d);
        prop_assert_eq!(c.eval_int(0), Rational::one());
        let sign = if n % 2 == 0 { 1 } else { -1 };
        for t in -10..=10 {
            prop_assert_eq!(c.eval_int(-(i as i64) - t), c.eval_int(t) * sign);
            prop_assert_eq!(c.eval_int(t), oracle(n, i as i64, d, t));
        }
        for k in 1..i as i64 {
            prop_assert!(c.eval_int(-k).is_zero());
        }
    }
}
