use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use proptest::prelude::*;

use fibsum::*;

fn quad() -> impl Strategy<Value = QuadExt> {
    (-50i64..=50, 1i64..=12, -50i64..=50, 1i64..=12)
        .prop_map(|(an, ad, bn, bd)| QuadExt::from_parts(an, ad, bn, bd))
}

fn arith() -> impl Strategy<Value = SeqSpec> {
    (1u64..=6, 1u64..=5).prop_map(|(u1, r)| SeqSpec::arith(u1, r))
}

/// Index growth stays small enough for a dozen terms to remain cheap.
fn any_seq() -> impl Strategy<Value = SeqSpec> {
    prop_oneof![
        arith(),
        (1u64..=3).prop_map(|k| SeqSpec::geom(k, 2)),
        Just(SeqSpec::FibIndex),
    ]
}

fn fib_r(n: i64) -> BigRational {
    BigRational::from_integer(fib(n).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn field_axioms(x in quad(), y in quad(), z in quad()) {
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x + &y) * &z, &(&x * &z) + &(&y * &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
        prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
        if !x.is_zero() {
            prop_assert_eq!(&x * &x.inv().unwrap(), QuadExt::one());
            prop_assert_eq!(qarith(ArithKind::Div, &y, &x).unwrap(), &y * &x.inv().unwrap());
        } else {
            prop_assert!(matches!(x.inv(), Err(Error::DivisionByZero)));
        }
    }

    #[test]
    fn ordering_is_total_and_additive(x in quad(), y in quad(), z in quad()) {
        let lt = x < y;
        prop_assert_eq!(lt, &x + &z < &y + &z);
        prop_assert_eq!(qsign(&(&y - &x)) > 0, lt);
        prop_assert_eq!(qsign(&(&x * &y)), qsign(&x) * qsign(&y));
    }

    #[test]
    fn phi_powers(n in -300i64..=300, m in -300i64..=300) {
        let two = BigRational::from_integer(2.into());
        let expect = QuadExt::new(
            BigRational::from_integer(lucas(n).unwrap()) / &two,
            fib_r(n) / &two,
        );
        prop_assert_eq!(phi_pow(n).unwrap(), expect);
        prop_assert_eq!(phi_pow(n).unwrap() * phi_pow(m).unwrap(), phi_pow(n + m).unwrap());
        prop_assert_eq!(QuadExt::phi().pow(n).unwrap(), phi_pow(n).unwrap());
    }

    #[test]
    fn decimal_rendering_is_within_one_ulp(x in quad(), p in 1u32..=40) {
        let d = to_decimal(&x, p);
        let shown = QuadExt::rational(d.value());
        let ulp = BigRational::new(BigInt::one(), BigInt::from(10).pow(p));
        prop_assert!((&shown - &x).abs_upper(p + 20) <= ulp);
        if qsign(&x) > 0 {
            prop_assert!(d.digits >= BigInt::zero());
        }
        if qsign(&x) < 0 {
            prop_assert!(d.digits <= BigInt::zero());
        }
        prop_assert_eq!(d.exact, x.is_rational() && (&x.a * BigRational::from_integer(BigInt::from(10).pow(p))).is_integer());
    }

    #[test]
    fn telescoping(seq in any_seq(), k in 1u64..=4, t in -6i64..=6, n_max in 1u64..=8) {
        // sum_{n<=N} (x_{n+k} - x_n) = sum_{N<n<=N+k} x_n - sum_{n<=k} x_n
        let x = |n: u64| -> BigRational {
            let u = seq.term(n).unwrap() as i64;
            fib_r(u + t) / fib_r(u)
        };
        let lhs: BigRational = (1..=n_max).map(|n| x(n + k) - x(n)).sum();
        let head: BigRational = (1..=k).map(&x).sum();
        let tail: BigRational = (n_max + 1..=n_max + k).map(&x).sum();
        prop_assert_eq!(lhs, tail - head);
    }

    #[test]
    fn general_closed_form_is_t_independent(seq in any_seq(), k in 1u64..=5, t1 in 1i64..=9, t2 in -9i64..=-1) {
        let at = |t| closed_form(FormulaId::Thm2_1, &ParamSet::new().seq(seq.clone()).k(k).t(t)).unwrap();
        prop_assert_eq!(at(t1), at(t2));
    }

    #[test]
    fn sign_rules_reduce_to_plain(u1 in 1u64..=6, half in 1u64..=3, k in 1u64..=3, n in 1u64..=30) {
        let even = SeqSpec::arith(u1, 2 * half);
        let odd = SeqSpec::arith(u1, 2 * half - 1);
        let term = |seq: &SeqSpec, sign| term_value(&SeriesSpec::type1(seq.clone(), k, sign), n).unwrap();
        prop_assert_eq!(term(&even, SignRule::AltR), term(&even, SignRule::None));
        prop_assert_eq!(term(&odd, SignRule::AltRMinus1), term(&odd, SignRule::None));
    }

    #[test]
    fn partial_sums_extend_by_one_term(seq in arith(), k in 1u64..=3, n in 0u64..=40) {
        let spec = SeriesSpec::type1(seq, k, SignRule::AltUn);
        let next = partial_sum(&spec, n).unwrap() + term_value(&spec, spec.from + n).unwrap();
        prop_assert_eq!(partial_sum(&spec, n + 1).unwrap(), next);
    }

    #[test]
    fn tail_bounds_shrink(seq in arith(), n in 2u64..=60) {
        for spec in [
            SeriesSpec::type1(seq.clone(), 1, SignRule::None),
            SeriesSpec::type2(seq.clone(), SignRule::AltUnMinusN),
            SeriesSpec::reciprocal(seq.clone()),
            SeriesSpec::pair_product(seq.clone()),
        ] {
            let a = tail_bound(&spec, n).bound().cloned().unwrap();
            let b = tail_bound(&spec, n + 1).bound().cloned().unwrap();
            prop_assert!(b <= a, "{}", spec);
        }
    }

    #[test]
    fn series_text_round_trips(seq in any_seq(), k in 1u64..=6, from in 1u64..=3, pick in 0usize..6) {
        let spec = match pick {
            0 => SeriesSpec::type1(seq, k, SignRule::AltUnMinusN),
            1 => SeriesSpec::type2(seq, SignRule::AltUn),
            2 => SeriesSpec::reciprocal(seq),
            3 => SeriesSpec::grouped_pair(seq),
            4 => SeriesSpec::abs_err(seq),
            _ => SeriesSpec::lucas_over_fib(k),
        }
        .starting_at(from);
        prop_assert_eq!(parse_series(&spec.to_string()).unwrap(), spec);
    }

    #[test]
    fn integer_identities(n in -200i64..=200, m in -200i64..=200, r in -200i64..=200) {
        for tag in IdentityTag::ALL {
            prop_assert!(check_int_identity(tag, n, m, r, DEFAULT_INDEX_CAP).unwrap());
        }
        for tag in PhiIdentity::ALL {
            prop_assert!(check_phi_identity(tag, n, r, DEFAULT_INDEX_CAP).unwrap());
        }
    }
}

#[test]
fn odd_and_even_halves_recombine() {
    let odd = SeriesSpec::type2(SeqSpec::arith(1, 2), SignRule::None);
    let even = SeriesSpec::type2(SeqSpec::arith(2, 2), SignRule::None);
    let whole = SeriesSpec::type2(SeqSpec::arith(1, 1), SignRule::None);
    let mut halves = QuadExt::zero();
    for n in 1..=20 {
        halves = halves + term_value(&odd, n).unwrap() + term_value(&even, n).unwrap();
        assert_eq!(halves, partial_sum(&whole, 2 * n).unwrap());
    }
    // shifting the odd sequence by one step flips the alternating sign
    let b = SeriesSpec::type2(SeqSpec::arith(1, 2), SignRule::AltUnMinusN);
    let c = SeriesSpec::type2(SeqSpec::arith(3, 2), SignRule::AltUnMinusN);
    for n in 1..=20 {
        assert_eq!(term_value(&c, n).unwrap(), -term_value(&b, n + 1).unwrap());
    }
}

#[test]
fn shifted_pair_sums_interleave_into_the_odd_index_sum() {
    let b = SeriesSpec::pair_product(SeqSpec::arith(1, 2));
    let c = SeriesSpec::pair_product(SeqSpec::arith(3, 2));
    let whole = SeriesSpec::type1(SeqSpec::arith(1, 2), 1, SignRule::None);
    for n in 1..=30 {
        assert_eq!(
            partial_sum(&b, n).unwrap() + partial_sum(&c, n).unwrap(),
            partial_sum(&whole, 2 * n).unwrap()
        );
    }
}

#[test]
fn doubled_geometric_sum_splits_off_two_terms() {
    for k in 1..=4 {
        let lhs = closed_form(FormulaId::Eq2_10, &ParamSet::new().k(k)).unwrap();
        let rest =
            closed_form(FormulaId::Cor2_3, &ParamSet::new().seq(SeqSpec::geom(k, 2))).unwrap();
        let head = BigRational::new(1.into(), fib(k as i64).unwrap())
            + BigRational::new(1.into(), fib(2 * k as i64).unwrap());
        assert_eq!(lhs, QuadExt::rational(head) + rest);
    }
}
