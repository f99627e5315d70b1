mod common;

use aliquot_core::arith::{self, factorize};
use aliquot_core::rational::{format_rational, parse_rational};
use aliquot_core::sieve::{sieve_block, BasePrimes};
use aliquot_core::Rational;
use common::{naive_gcd, naive_is_prime, naive_sigma};
use proptest::prelude::*;

fn prime_below(bound: u64) -> impl Strategy<Value = u64> {
    (3u64..bound).prop_filter_map("prime", |n| naive_is_prime(n).then_some(n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn sigma_is_multiplicative(d in 1u64..1_000_000, e in 1u64..1_000_000) {
        prop_assume!(naive_gcd(d, e) == 1);
        prop_assert_eq!(
            arith::sigma(d * e).unwrap() as u128,
            arith::sigma(d).unwrap() as u128 * arith::sigma(e).unwrap() as u128
        );
    }

    #[test]
    fn coprime_split(d in 1u64..1_000_000, e in 1u64..1_000_000) {
        prop_assume!(naive_gcd(d, e) == 1);
        prop_assert!(arith::check_coprime_split_identity(d, e).unwrap());
    }

    #[test]
    fn semiprime_expansion(n0 in 1u64..5_000, p in prime_below(100_000), q in prime_below(100_000)) {
        prop_assume!(p != q && n0 % p != 0 && n0 % q != 0);
        prop_assert!(arith::check_analogue_identity(n0, p, q).unwrap());
        prop_assert_eq!(
            arith::s_of_semiprime_expansion(n0, p, q).unwrap(),
            arith::aliquot_sum(n0 * p * q).unwrap()
        );
    }

    #[test]
    fn shifted_expansion(n0 in 1u64..5_000, p in prime_below(100_000), q in prime_below(100_000), k in 1u64..6) {
        prop_assume!(p != q && n0 % p != 0 && n0 % q != 0);
        prop_assert!(arith::check_analogue2_identity(n0, p, q, k).unwrap());
    }

    #[test]
    fn composites_have_large_s(n in 4u64..10_000_000) {
        let f = factorize(n).unwrap();
        prop_assume!(!f.is_prime());
        let s = arith::aliquot_sum(n).unwrap();
        prop_assert!(s as u128 * s as u128 >= n as u128);
    }

    #[test]
    fn factorization_round_trips(n in 1u64..u64::MAX) {
        let f = factorize(n).unwrap();
        prop_assert_eq!(f.product(), n as u128);
        for pp in f.factors() {
            prop_assert!(arith::is_prime(pp.prime));
        }
    }

    #[test]
    fn sigma_matches_divisor_sum(n in 1u64..10_000_000) {
        prop_assert_eq!(arith::sigma(n).unwrap(), naive_sigma(n));
    }

    #[test]
    fn divisors_match_tau(n in 1u64..1_000_000) {
        let f = factorize(n).unwrap();
        let ds = f.divisors();
        prop_assert_eq!(ds.len() as u64, f.tau());
        prop_assert!(ds.iter().all(|d| n % d == 0));
        prop_assert_eq!(ds.iter().sum::<u64>(), naive_sigma(n));
    }

    #[test]
    fn sieve_block_matches_pointwise(lo in 1u64..1_000_000_000_000, len in 1u64..2_000) {
        let hi = lo + len - 1;
        let block = sieve_block(lo, hi, &BasePrimes::for_bound(hi)).unwrap();
        for e in block.iter().step_by(37) {
            let f = factorize(e.n).unwrap();
            prop_assert_eq!(e.sigma, f.sigma().unwrap());
            prop_assert_eq!(e.spf, f.smallest_prime().unwrap_or(1));
        }
    }

    #[test]
    fn rational_round_trip(num in -1_000_000i128..1_000_000, den in 1i128..1_000_000) {
        let r = Rational::new(num, den);
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }
}
