//! Randomized algebraic laws. Proptest drives the seeds; the library's own
//! generators turn each seed into exact data, so failures shrink to a seed
//! that reproduces deterministically.

use discjet::{random, JetAutomorphism, Ring};
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 48, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn base_ring_is_a_commutative_ring(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let desc = random::descriptor(&mut rng, 5);
        let [a, b, c] = [0; 3].map(|_| random::element(&mut rng, &desc, false));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn units_invert_and_nilpotents_do_not(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let desc = random::descriptor(&mut rng, 5);
        let u = random::unit(&mut rng, &desc);
        let one = Ring::one(&desc);
        prop_assert_eq!(u.mul(&u.try_inverse().unwrap()), one);
        let e = random::element(&mut rng, &desc, true);
        prop_assert!(e.try_inverse().is_none());
        // Nil(R)^nu = 0
        let nu = discjet::BaseRingElement::nilpotency_index(&desc);
        let power = (0..nu).fold(Ring::one(&desc), |acc: discjet::BaseRingElement, _| acc.mul(&e));
        prop_assert!(power.is_zero());
    }

    #[test]
    fn jets_form_a_group(seed in any::<u64>(), n in 1usize..=2, c in 1usize..=3) {
        let mut rng = random::rng(seed);
        let desc = random::descriptor(&mut rng, 3);
        let [f, g, h] = [0; 3].map(|_| random::g_element(&mut rng, n, c, &desc));
        prop_assert_eq!(f.compose(&g)?.compose(&h)?, f.compose(&g.compose(&h)?)?);
        let id = JetAutomorphism::identity(n, c, &desc)?;
        prop_assert_eq!(&f.compose(&id)?, &f);
        prop_assert_eq!(&id.compose(&f)?, &f);
        prop_assert!(f.compose(&f.invert()?)?.is_identity());
        prop_assert!(f.invert()?.compose(&f)?.is_identity());
    }

    #[test]
    fn truncation_is_a_homomorphism_on_k(seed in any::<u64>(), c in 2usize..=4, lower in 1usize..=3) {
        let lower = lower.min(c - 1);
        let mut rng = random::rng(seed);
        let desc = random::descriptor(&mut rng, 3);
        let g = random::k_element(&mut rng, 2, c, &desc);
        let h = random::k_element(&mut rng, 2, c, &desc);
        let lhs = g.compose(&h)?.truncate(lower)?;
        let rhs = g.truncate(lower)?.compose(&h.truncate(lower)?)?;
        prop_assert!(lhs.c_equivalent(&rhs, lower));
    }

    #[test]
    fn congruence_subgroup_is_normal_in_k(seed in any::<u64>(), c in 2usize..=4, level in 1usize..=3) {
        let level = level.min(c - 1);
        let mut rng = random::rng(seed);
        let desc = random::descriptor(&mut rng, 2);
        let k = random::k_element(&mut rng, 1, c, &desc);
        // an element of N_level: u times the zero-tail lift of its truncation's inverse
        let u = random::k_u_element(&mut rng, 1, c, &desc);
        let n = u.compose(&u.truncate(level)?.invert().and_then(|t| lift(&t, c))?)?;
        prop_assert!(n.is_in_n(level));
        let conj = k.compose(&n)?.compose(&k.invert()?)?;
        prop_assert!(conj.is_in_n(level));
    }
}

/// Zero-tail lift of a lower-order jet back to order `c`.
fn lift(g: &JetAutomorphism, c: usize) -> discjet::Result<JetAutomorphism> {
    let polys = g.c_jet().iter().map(|s| s.as_polynomial().clone()).collect();
    JetAutomorphism::from_polynomials(c, polys)
}
