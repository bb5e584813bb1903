use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;

use qdisk_core::cli::phi_preimage;
use qdisk_core::cluster::ClusterChart;
use qdisk_core::dilog::{verify_push_through, DoubleSeed};
use qdisk_core::duality::n_l;
use qdisk_core::lamination::{default_boundary_box, enumerate_alaminations, phi};
use qdisk_core::polygon::{enumerate_triangulations, IntMatrix};
use qdisk_core::skein::{superpose, Multicurve, SkeinElement};
use qdisk_core::{OmegaLaurent, SkewForm, TorusElement};

fn laurent() -> impl Strategy<Value = OmegaLaurent> {
    prop::collection::vec((-8i32..8, -5i64..6), 0..5)
        .prop_map(|ts| OmegaLaurent::from_terms(ts.into_iter().map(|(e, c)| (e, BigInt::from(c)))))
}

fn skew(r: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-3i64..4, r * (r - 1) / 2).prop_map(move |up| {
        let mut rows = vec![vec![0; r]; r];
        let mut it = up.into_iter();
        for i in 0..r {
            for j in i + 1..r {
                let x = it.next().unwrap();
                rows[i][j] = x;
                rows[j][i] = -x;
            }
        }
        IntMatrix::from_rows(&rows)
    })
}

fn torus_element(form: Arc<SkewForm>) -> impl Strategy<Value = TorusElement> {
    let r = form.rank();
    prop::collection::vec((prop::collection::vec(-2i64..3, r), laurent()), 0..4)
        .prop_map(move |ts| TorusElement::from_terms(&form, ts))
}

fn torus_triple() -> impl Strategy<Value = (TorusElement, TorusElement, TorusElement)> {
    (2usize..4).prop_flat_map(skew).prop_flat_map(|m| {
        let f = SkewForm::new(m).unwrap();
        (torus_element(f.clone()), torus_element(f.clone()), torus_element(f))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coefficient_ring_axioms(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, OmegaLaurent::zero());
        prop_assert_eq!(&a * &OmegaLaurent::one(), a.clone());
        prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
        prop_assert_eq!(a.bar().bar(), a);
    }

    #[test]
    fn torus_product_is_associative((x, y, z) in torus_triple()) {
        let l = x.try_mul(&y).unwrap().try_mul(&z).unwrap();
        let r = x.try_mul(&y.try_mul(&z).unwrap()).unwrap();
        prop_assert_eq!(l, r);
        let d = x.try_mul(&y.try_add(&z).unwrap()).unwrap();
        prop_assert_eq!(d, x.try_mul(&y).unwrap().try_add(&x.try_mul(&z).unwrap()).unwrap());
    }

    #[test]
    fn star_is_an_involutive_antiautomorphism((x, y, _z) in torus_triple()) {
        prop_assert_eq!(x.try_mul(&y).unwrap().star(), y.star().try_mul(&x.star()).unwrap());
        prop_assert_eq!(x.star().star(), x);
    }

    #[test]
    fn push_through_holds_for_random_series(
        eps in (2usize..4).prop_flat_map(skew),
        phi in prop::collection::vec(laurent(), 1..5),
        k in 0usize..4,
    ) {
        let seed = DoubleSeed::new(eps).unwrap();
        let k = k % seed.rank();
        for c in verify_push_through(&seed, k, &phi) {
            prop_assert!(c.passed, "{}", c);
        }
    }

    #[test]
    fn phi_images_are_valid_with_zero_n_l(n in 5usize..7, pick in any::<prop::sample::Index>(), chart in any::<prop::sample::Index>()) {
        let ls = enumerate_alaminations(n, 2, default_boundary_box(n, 2)).unwrap();
        let l = pick.get(&ls);
        let d = phi(l).unwrap();
        prop_assert!(d.is_valid());
        prop_assert!(d.front().keys().all(|c| c.is_boundary(n)));
        prop_assert_eq!(phi_preimage(&d), Some(l.clone()));
        let ts = enumerate_triangulations(n).unwrap();
        let ch = ClusterChart::new(chart.get(&ts)).unwrap();
        prop_assert_eq!(n_l(&ch, &d).unwrap(), 0);
    }

    #[test]
    fn skein_product_is_associative(n in 4usize..6, picks in prop::collection::vec((any::<prop::sample::Index>(), 1u32..3), 3)) {
        let chords = qdisk_core::MarkedDisk::new(n).unwrap().all_chords();
        let m: Vec<SkeinElement> = picks
            .iter()
            .map(|(i, k)| SkeinElement::from_multicurve(Multicurve::new(n, &[(*i.get(&chords), *k)]).unwrap()))
            .collect();
        prop_assert_eq!(m[0].mul(&m[1]).mul(&m[2]), m[0].mul(&m[1].mul(&m[2])));
        let a = match m[0].terms().keys().next() { Some(a) => a.clone(), None => Multicurve::empty(n) };
        let b = match m[1].terms().keys().next() { Some(b) => b.clone(), None => Multicurve::empty(n) };
        prop_assert_eq!(superpose(&a, &b), m[0].mul(&m[1]));
    }
}
