use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use fricke_core::analytic::NumericSeries;
use fricke_core::exactseries::{eta_product, ExactRational, Grid, QExpansion};
use fricke_core::generators::FormSpace;
use fricke_core::heckeforms::newspace_level4;
use fricke_core::sl2words::{
    char_eval, decompose_gamma0_4, enumerate_characters, matrix_to_word, membership,
    random_gamma0_4_element, random_word, word_to_matrix, CongruenceGroup, GroupWord, Letter, Mat2,
};

fn letter() -> impl Strategy<Value = Letter> {
    prop_oneof![Just(Letter::S), Just(Letter::T), Just(Letter::TInv)]
}

fn word() -> impl Strategy<Value = GroupWord> {
    (any::<bool>(), prop::collection::vec(letter(), 0..40))
        .prop_map(|(neg, letters)| GroupWord::from_letters(neg, &letters))
}

fn series(grid: Grid) -> impl Strategy<Value = QExpansion> {
    prop::collection::vec((-20i64..20, 1i64..5), 0..12).prop_map(move |cs| {
        let terms = cs.into_iter().enumerate().map(|(i, (n, d))| {
            let key = match grid {
                Grid::Integer => 2 * i as u64,
                Grid::Half => i as u64,
            };
            (key, ExactRational::new(n.into(), d.into()))
        });
        QExpansion::from_coeffs(grid, 24, terms).unwrap()
    })
}

proptest! {
    #[test]
    fn word_matrix_round_trip(w in word()) {
        let m = word_to_matrix(&w);
        let back = matrix_to_word(&m).unwrap();
        prop_assert_eq!(word_to_matrix(&back), m);
    }

    #[test]
    fn word_text_round_trip(w in word()) {
        let parsed: GroupWord = w.to_string().parse().unwrap();
        prop_assert_eq!(parsed, w);
    }

    #[test]
    fn inverse_word_gives_identity(w in word()) {
        let prod = word_to_matrix(&w).mul(&word_to_matrix(&w.inverse()));
        prop_assert_eq!(prod, Mat2::identity());
    }

    #[test]
    fn matrix_text_round_trip(w in word()) {
        let m = word_to_matrix(&w);
        prop_assert_eq!(m.to_string().parse::<Mat2>().unwrap(), m);
    }

    #[test]
    fn series_ring_laws(a in series(Grid::Integer), b in series(Grid::Integer), c in series(Grid::Integer)) {
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        let left = a.mul(&b.add(&c).unwrap()).unwrap();
        let right = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(a.sub(&a).unwrap(), QExpansion::zero(Grid::Integer, 24));
    }

    #[test]
    fn half_grid_json_round_trip(a in series(Grid::Half)) {
        prop_assert_eq!(QExpansion::from_json(&a.to_json()).unwrap(), a);
    }
}

#[test]
fn character_is_a_homomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let m = word_to_matrix(&random_word(&mut rng, 20));
        let n = word_to_matrix(&random_word(&mut rng, 20));
        let mn = m.mul(&n);
        for chi in enumerate_characters() {
            let lhs = char_eval(chi, &mn).unwrap();
            let rhs = char_eval(chi, &m).unwrap() * char_eval(chi, &n).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn character_respects_relations() {
    let st = word_to_matrix(&GroupWord::from_letters(false, &[Letter::S, Letter::T]));
    for chi in enumerate_characters() {
        assert!(char_eval(chi, &Mat2::s()).unwrap().pow(2).is_one());
        assert!(char_eval(chi, &st).unwrap().pow(3).is_one());
        // Unreduced letters evaluate like the reduced word.
        let long = GroupWord::from_letters(
            false,
            &[Letter::T, Letter::S, Letter::S, Letter::TInv, Letter::S],
        );
        assert_eq!(
            chi.eval_word(&long),
            char_eval(chi, &word_to_matrix(&long)).unwrap()
        );
    }
}

#[test]
fn gamma0_4_words_recompose() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..500 {
        let m = random_gamma0_4_element(&mut rng, 30);
        assert!(membership(&m, CongruenceGroup::Gamma0_4));
        let w = decompose_gamma0_4(&m).unwrap();
        assert_eq!(w.to_matrix(), m);
        assert!(w.uses_even_translations());
        assert_eq!(
            w.to_string()
                .parse::<fricke_core::sl2words::Gamma04Word>()
                .unwrap(),
            w
        );
    }
}

#[test]
fn word_length_linear_in_bits() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..200 {
        let m = word_to_matrix(&random_word(&mut rng, 200));
        let w = matrix_to_word(&m).unwrap();
        assert!(w.syllable_count() as u64 <= 4 * (m.max_bits() + 2));
    }
}

#[test]
fn error_bound_shrinks_with_terms() {
    let d = eta_product(&[(1, 24)], 402).unwrap();
    let tau = Complex64::new(0.2, 0.4);
    let mut last = f64::INFINITY;
    for terms in [20, 50, 100, 200, 400] {
        let s = NumericSeries::new(&d, 12, terms).unwrap();
        let bound = s.tail_bound(tau.im);
        assert!(bound <= last, "{terms}: {bound} > {last}");
        last = bound;
    }
}

#[test]
fn form_space_json_round_trip() {
    let space = newspace_level4(10, None).unwrap();
    let back: FormSpace = serde_json::from_str(&space.to_json()).unwrap();
    assert_eq!(back, space);
}
