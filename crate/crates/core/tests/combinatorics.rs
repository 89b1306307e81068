use num_integer::Integer;
use num_rational::Ratio;
use proptest::prelude::*;
use sfk_core::cfrac::{eval_negative_cfrac, hj_expand};
use sfk_core::resolution::{
    blow_down_fully, blow_down_trace, blowup_count, complement, fiber_chain, singular_strings,
    CurveChain,
};
use sfk_core::Fraction;

fn coprime() -> impl Strategy<Value = (i64, i64)> {
    (2i64..400)
        .prop_flat_map(|q| (1..q, Just(q)))
        .prop_filter("coprime", |(p, q)| p.gcd(q) == 1)
}

proptest! {
    #[test]
    fn expansion_evaluates_back((p, q) in coprime()) {
        let hj = hj_expand(p, q).unwrap();
        prop_assert!(hj.digits().iter().all(|&e| e >= 2));
        prop_assert_eq!(eval_negative_cfrac(hj.digits()).unwrap(), Ratio::new(q, p));
        let k = hj.len();
        prop_assert_eq!(hj.approximants()[k + 1], (q, p));
    }

    #[test]
    fn consecutive_approximants_are_unimodular((p, q) in coprime()) {
        let hj = hj_expand(p, q).unwrap();
        let det = hj.determinants();
        let k = hj.len();
        prop_assert!(det[..=k].iter().all(|&d| d == 1));
        prop_assert_eq!(det[k + 1], q);
    }

    #[test]
    fn fiber_chain_blows_down_to_zero((p, q) in coprime()) {
        let alpha = Fraction::new(p, q);
        let chain = fiber_chain(&alpha).unwrap();
        prop_assert_eq!(blow_down_fully(&chain).unwrap(), CurveChain::new(vec![0]));
        prop_assert_eq!(blowup_count(&alpha).unwrap(), chain.len() - 1);
        // every step removes exactly one curve
        let trace = blow_down_trace(&chain).unwrap();
        prop_assert_eq!(trace.len(), chain.len());
    }

    #[test]
    fn strings_are_dual((p, q) in coprime()) {
        let alpha = Fraction::new(p, q);
        let (a, b) = singular_strings(&alpha).unwrap();
        let (b2, a2) = singular_strings(&complement(&alpha)).unwrap();
        prop_assert_eq!(&a, &a2);
        prop_assert_eq!(&b, &b2);
        // Riemenschneider duality: the two digit sums differ from the
        // lengths by the same amount
        let excess = |c: &CurveChain| c.selfints().iter().map(|e| -e - 2).sum::<i64>();
        prop_assert_eq!(excess(&a) + 1, b.len() as i64);
        prop_assert_eq!(excess(&b) + 1, a.len() as i64);
    }

    #[test]
    fn crepant_iff_all_twos((p, q) in coprime()) {
        prop_assert_eq!(hj_expand(p, q).unwrap().is_crepant(), p == q - 1);
    }
}

#[test]
fn small_chains() {
    let chain = |p, q| {
        fiber_chain(&Fraction::new(p, q))
            .unwrap()
            .selfints()
            .to_vec()
    };
    assert_eq!(chain(1, 2), [-2, -1, -2]);
    assert_eq!(chain(2, 3), [-2, -2, -1, -3]);
    assert_eq!(chain(1, 3), [-3, -1, -2, -2]);
    assert_eq!(hj_expand(5, 7).unwrap().digits(), [2, 2, 3]);
}

#[test]
fn rejects_bad_fractions() {
    assert!(hj_expand(2, 4).is_err());
    assert!(hj_expand(0, 3).is_err());
    assert!(hj_expand(3, 3).is_err());
    assert!(hj_expand(-1, 3).is_err());
    assert!(eval_negative_cfrac::<i64>(&[2, 1]).is_err());
    assert!(blow_down_fully(&CurveChain::new(vec![-1])).is_err());
}

#[test]
fn generic_over_integer_width() {
    let small = hj_expand(5i32, 7i32).unwrap();
    let wide = hj_expand(5i128, 7i128).unwrap();
    assert_eq!(small.digits(), [2, 2, 3]);
    assert_eq!(wide.approximants().last(), Some(&(0, 1)));
}
