use approxdeg::cert::{tensor_power, verify_witness};
use approxdeg::domain::DomainPoint;
use approxdeg::lp::{min_error_at_degree, LpOptions, Sided};
use approxdeg::rational::{int, parse_rational, rat, format_rational};
use approxdeg::sim::{derive_seed, s_grid, sample_no_instance, stream};
use approxdeg::witness::DualWitness;
use approxdeg::zoo::{compose_and, make_and};
use num_traits::Zero;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_text_roundtrips(num in -10_000i64..10_000, den in 1i64..10_000) {
        let q = rat(num, den);
        prop_assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q);
    }

    #[test]
    fn no_instances_keep_the_promise(n in 2usize..200, seed in any::<u64>()) {
        let alpha = rat(1, 2);
        let phi = sample_no_instance(n, &alpha, &mut stream(seed, &[n as u64])).unwrap();
        prop_assert!(phi.image_size() <= n / 2);
        prop_assert_eq!(phi.rows(), n);
    }

    #[test]
    fn seeds_depend_on_every_tag(master in any::<u64>(), a in any::<u64>(), b in any::<u64>()) {
        prop_assume!(a != b);
        prop_assert_ne!(derive_seed(master, &[a]), derive_seed(master, &[b]));
    }

    #[test]
    fn s_grid_is_increasing_and_ends_at_n(n in 1usize..5000, ratio in 1.01f64..3.0) {
        let g = s_grid(n, ratio);
        prop_assert_eq!(g[0], 1);
        prop_assert_eq!(*g.last().unwrap(), n);
        prop_assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    /// Any zero-mean witness on AND_1 has orth 1; its tensor powers keep the
    /// claimed orthogonality and correlate with AND_k.
    #[test]
    fn tensor_powers_of_balanced_and1_witnesses_verify(p in 1i64..20, k in 1usize..4) {
        let psi = DualWitness::new(
            1,
            2,
            [(DomainPoint::new(vec![0]), rat(-p, 2 * p)), (DomainPoint::new(vec![1]), rat(p, 2 * p))],
            1,
            rat(1, 3),
        ).unwrap();
        let w = tensor_power(&psi, k, &rat(1, 3)).unwrap();
        let f = compose_and(k, &make_and(1).unwrap()).unwrap();
        prop_assert!(w.orth_at_least(k));
        prop_assert!(verify_witness(&w, &f, &w.claimed_eps, k).passed);
    }
}

#[test]
fn eps_star_is_nonincreasing_in_degree() {
    let opts = LpOptions::default();
    for n in 1..=4 {
        let f = make_and(n).unwrap();
        let errs: Vec<_> = (0..=n)
            .map(|d| min_error_at_degree(&f, d, Sided::Two, &opts).unwrap().eps_star)
            .collect();
        assert!(errs.windows(2).all(|w| w[0] >= w[1]));
        assert!(errs[n].is_zero());
        assert!(errs[0] <= int(1));
    }
}
