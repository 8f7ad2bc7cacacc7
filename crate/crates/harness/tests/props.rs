//! Randomized properties of the harness layer: series bookkeeping,
//! config precedence, psi monotonicity, float rendering.

use num_traits::One;
use proptest::prelude::*;

use sdioph::bc;
use sdioph::config::{parse_config_text, resolve, Overrides};
use sdioph::psi::PsiFunction;
use sdioph::report::{sig12, Scalar};
use sdioph_core::{Int, Rational};

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(Int::from(n), Int::from(d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bc_partial_sums_accumulate_the_terms(
        cn in 1i64..=8, cd in 1i64..=4,
        tn in 1i64..=12, td in 1i64..=4,
        d in 1usize..=3,
        ad in 1i64..=3,
        n_max in 2u32..=20,
    ) {
        let tau = rat(tn, td);
        let psi = PsiFunction::PowerLaw { c: rat(cn, cd), tau: tau.clone() };
        let alpha = Scalar::Exact(rat(1, ad));
        let rep = bc::bc_sum(&psi, &alpha, d, n_max).unwrap();
        prop_assert_eq!(rep.rows.len(), n_max as usize);

        let mut running = 0.0;
        let mut prev = f64::NEG_INFINITY;
        for row in &rep.rows {
            let term = row.term.to_f64();
            prop_assert!(term > 0.0);
            running += term;
            let partial = row.partial.to_f64();
            prop_assert!((partial - running).abs() <= 1e-9 * running.max(1.0));
            prop_assert!(partial >= prev);
            prev = partial;
        }

        let crit = bc::critical_exponent(d);
        let expected = if tau > crit {
            bc::Classification::Convergent
        } else {
            bc::Classification::Divergent
        };
        prop_assert_eq!(rep.classification, Some(expected));
        prop_assert_eq!(rep.boundary, tau == crit);
    }

    #[test]
    fn flags_override_file_keys_and_leave_the_rest(
        file_min in 0u32..=6,
        extra in 0u32..=4,
        bump in 1u32..=5,
        file_seed in 0u64..=1000,
        flag_seed in 0u64..=1000,
    ) {
        let file_max = file_min + extra;
        let text = format!(
            "primes = 2\nn-min = {file_min}\nn-max = {file_max}\nseed = {file_seed}\n"
        );
        let file = parse_config_text(&text).unwrap();
        let cli = Overrides {
            n_max: Some(file_max + bump),
            seed: Some(flag_seed),
            ..Overrides::default()
        };
        let settings = resolve(&file, &cli).unwrap();
        prop_assert_eq!(settings.n_min, file_min);
        prop_assert_eq!(settings.n_max, file_max + bump);
        prop_assert_eq!(settings.seed, flag_seed);
    }

    #[test]
    fn power_law_psi_never_increases(
        cn in 1i64..=9, cd in 1i64..=9,
        tn in 0i64..=9, td in 1i64..=3,
        h1 in 2u64..=200, gap in 1u64..=100,
    ) {
        let psi = PsiFunction::PowerLaw { c: rat(cn, cd), tau: rat(tn, td) };
        let lo = psi.eval_f64(&Int::from(h1));
        let hi = psi.eval_f64(&Int::from(h1 + gap));
        prop_assert!(hi <= lo * (1.0 + 1e-12));
    }

    #[test]
    fn integer_power_laws_evaluate_exactly(
        cn in 1i64..=9, cd in 1i64..=9,
        tau in 0i64..=6,
        h in 1u64..=64,
    ) {
        let psi = PsiFunction::PowerLaw { c: rat(cn, cd), tau: rat(tau, 1) };
        let exact = psi.eval_exact(&Int::from(h)).unwrap();
        let expected = rat(cn, cd) / Rational::from_integer(Int::from(h).pow(tau as u32));
        prop_assert_eq!(exact, expected);
    }

    #[test]
    fn rendered_floats_parse_back_within_a_part_in_ten_billion(
        mantissa in -1.0f64..1.0,
        exp in -30i32..=30,
    ) {
        prop_assume!(mantissa != 0.0);
        let x = mantissa * 10f64.powi(exp);
        let text = sig12(x);
        let back: f64 = text.parse().unwrap();
        prop_assert!((back - x).abs() <= 1e-10 * x.abs(), "{x} -> {text} -> {back}");
        prop_assert_eq!(text.clone(), sig12(back), "rendering is not idempotent: {}", text);
    }

    #[test]
    fn the_alpha_of_one_is_the_identity_on_terms(
        tn in 1i64..=8,
        n_max in 2u32..=12,
    ) {
        // alpha = 1 must not perturb an exact geometric term sequence
        let psi = PsiFunction::PowerLaw { c: Rational::one(), tau: rat(tn, 1) };
        let rep = bc::bc_sum(&psi, &Scalar::Exact(Rational::one()), 1, n_max).unwrap();
        for row in &rep.rows {
            let expect = rat(1, 1) * Rational::new(
                Int::one(),
                Int::one() << ((tn - 2).max(0) as u32 * row.n),
            );
            if tn >= 2 {
                prop_assert_eq!(row.term.clone(), Scalar::Exact(expect));
            }
        }
    }
}
