//! Randomized invariants across the public API.

use num_integer::Integer;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zpartial_core::cli::corpus_generate;
use zpartial_core::exactcat::{
    baer_sum, conflation_of_mono, conflations_equivalent, is_pure_mono, pullback, pure_by_divisor_criterion,
    pure_by_hom_exactness, purity_witness, pushout, verify_purity_witness, Conflation, ExactStructure,
};
use zpartial_core::hulls::{essential_by_cyclic_criterion, is_injective_closed_form, structural_injective_hull};
use zpartial_core::modcat::{
    cokernel, enumerate_subgroups, is_epi, is_mono, kernel, modules_up_to, Caps, FpModule, Morphism,
};
use zpartial_core::partial::{check_partial, find_extension, PartialMorphism};
use zpartial_core::suites::oracle::{systems_partial, systems_pure, MultipleTable};
use zpartial_core::workspace::Workspace;

const RINGS: [i64; 4] = [4, 8, 12, 36];

fn pick_module(m: i64, max: u128, k: usize) -> FpModule {
    let all = modules_up_to(m, max).unwrap();
    all[k % all.len()].clone()
}

fn random_hom(a: &FpModule, b: &FpModule, rng: &mut ChaCha8Rng) -> Morphism {
    let rows = a
        .factors()
        .iter()
        .map(|&x| {
            b.factors()
                .iter()
                .map(|&y| {
                    let g = x.gcd(&y);
                    rng.gen_range(0..g) * (y / g)
                })
                .collect()
        })
        .collect();
    Morphism::from_rows(a.clone(), b.clone(), rows).unwrap()
}

fn random_subobject(x: &FpModule, rng: &mut ChaCha8Rng) -> Morphism {
    let subs = enumerate_subgroups(x, None, &Caps::default()).unwrap();
    subs[rng.gen_range(0..subs.len())].inclusion(x)
}

prop_compose! {
    fn setting()(r in 0..RINGS.len(), a in 0usize..64, b in 0usize..64, seed in any::<u64>())
        -> (i64, FpModule, FpModule, ChaCha8Rng) {
        let m = RINGS[r];
        (m, pick_module(m, 64, a), pick_module(m, 32, b), ChaCha8Rng::seed_from_u64(seed))
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn kernel_cokernel_exact((_, a, b, mut rng) in setting()) {
        let f = random_hom(&a, &b, &mut rng);
        let (_, k) = kernel(&f);
        let (_, c) = cokernel(&f);
        prop_assert!(is_mono(&k));
        prop_assert!(is_epi(&c));
        prop_assert!(f.after(&k).unwrap().is_zero());
        prop_assert!(c.after(&f).unwrap().is_zero());
        prop_assert_eq!(
            k.source().order() * b.order(),
            a.order() * c.target().order()
        );
    }

    #[test]
    fn pushout_and_pullback_squares((_, a, b, mut rng) in setting()) {
        let f = random_hom(&a, &b, &mut rng);
        let g = random_hom(&a, &b, &mut rng);
        let po = pushout(&f, &g).unwrap();
        prop_assert_eq!(po.i1.after(&f).unwrap(), po.i2.after(&g).unwrap());
        let h = random_hom(&b, &a, &mut rng);
        let pb = pullback(&h, &h).unwrap();
        prop_assert_eq!(h.after(&pb.p1).unwrap(), h.after(&pb.p2).unwrap());
    }

    #[test]
    fn purity_methods_agree((_, a, _, mut rng) in setting()) {
        let i = random_subobject(&a, &mut rng);
        let eta = conflation_of_mono(&i).unwrap();
        let cert = is_pure_mono(&i).unwrap();
        prop_assert_eq!(cert.pure, pure_by_hom_exactness(&eta));
        prop_assert_eq!(cert.pure, pure_by_divisor_criterion(&i));
        prop_assert_eq!(cert.pure, purity_witness(&i).is_none());
        let oracle = systems_pure(&i, &MultipleTable::new(i.source()), &MultipleTable::new(&a));
        prop_assert_eq!(cert.pure, oracle);
        if let Some(w) = cert.witness {
            prop_assert!(verify_purity_witness(&i, &w));
        }
    }

    #[test]
    fn pure_partial_matches_systems((_, x, y, mut rng) in setting()) {
        let u = random_subobject(&x, &mut rng);
        let f = random_hom(u.source(), &y, &mut rng);
        let pm = PartialMorphism::new(u.clone(), f.clone()).unwrap();
        let v = check_partial(&pm, &ExactStructure::Pure).unwrap();
        let oracle = systems_partial(&u, &f, &MultipleTable::new(&x), &MultipleTable::new(&y));
        prop_assert_eq!(v.is_partial, oracle);
        prop_assert_eq!(v.is_partial, find_extension(&pm).is_some());
        prop_assert_eq!(v.is_partial, v.system_witness.is_none());
    }

    #[test]
    fn abelian_partial_always((_, x, y, mut rng) in setting()) {
        let u = random_subobject(&x, &mut rng);
        let f = random_hom(u.source(), &y, &mut rng);
        let v = check_partial(&PartialMorphism::new(u, f.clone()).unwrap(), &ExactStructure::Abelian).unwrap();
        prop_assert!(v.is_partial);
        prop_assert_eq!(v.is_partial_iso, is_mono(&f));
    }

    #[test]
    fn structural_hull_is_injective_and_essential((_, a, _, _) in setting()) {
        let h = structural_injective_hull(&a).unwrap();
        prop_assert!(is_mono(&h.embedding));
        prop_assert!(is_injective_closed_form(&h.module));
        prop_assert!(essential_by_cyclic_criterion(&h.embedding, &Caps::default()).unwrap().is_none());
        if is_injective_closed_form(&a) {
            prop_assert_eq!(h.module.order(), a.order());
        }
    }

    #[test]
    fn split_conflation_is_neutral((m, _, _, mut rng) in setting()) {
        let small = modules_up_to(m, 16).unwrap();
        let mid = &small[rng.gen_range(0..small.len())];
        let eta = conflation_of_mono(&random_subobject(mid, &mut rng)).unwrap();
        let zero = Conflation::split(eta.left(), eta.right()).unwrap();
        let caps = Caps { hom: 1 << 16, ..Caps::default() };
        let sum = baer_sum(&eta, &zero).unwrap();
        prop_assert!(conflations_equivalent(&sum, &eta, &caps).unwrap().is_some());
    }

    #[test]
    fn workspace_round_trip(r in 0..RINGS.len(), seed in any::<u64>(), n in 0usize..12) {
        let ws = corpus_generate(RINGS[r], 32, seed, n).unwrap();
        let text = ws.to_json();
        let back = Workspace::from_json(&text).unwrap();
        prop_assert_eq!(&back, &ws);
        prop_assert_eq!(back.to_json(), text);
    }
}
