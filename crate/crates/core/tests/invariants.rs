use proptest::prelude::*;
use stablehom::dsl;
use stablehom::fmod::{hilbert_function, resolve, transpose, ModMap, Presentation};
use stablehom::ring::{gallery, RingCtx};
use stablehom::sample::{random_map, random_module, random_morphism, rng, SampleShape};
use stablehom::stable::{
    ext_dual_vanishes, is_perfect_exact, is_rbm, lift_chain_map, psi, pseudo_kernel_cokernel, rbm_report,
    standard_resolution, stably_similar, theta, torsionless, torsionless_by_evaluation,
};
use std::sync::Arc;

fn ring(i: usize) -> Arc<RingCtx> {
    gallery::suite().swap_remove(i).1
}

fn module(i: usize, seed: u64) -> Presentation {
    random_module(&ring(i), SampleShape::default(), &mut rng(seed)).unwrap()
}

fn morphism(i: usize, seed: u64) -> ModMap {
    random_morphism(&ring(i), SampleShape::default(), &mut rng(seed)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, .. ProptestConfig::default() })]

    #[test]
    fn resolutions_are_exact(i in 0usize..5, seed in any::<u64>()) {
        let m = module(i, seed);
        let c = resolve(&m, 3).unwrap();
        prop_assert!(c.is_complex());
        for n in (c.lo() + 1)..0 {
            prop_assert!(c.homology(n).unwrap().is_zero().unwrap());
        }
        let h0 = c.homology(0).unwrap();
        let lo = m.gens().iter().copied().min().unwrap_or(0);
        prop_assert_eq!(hilbert_function(&h0, lo, lo + 3).unwrap(), hilbert_function(&m, lo, lo + 3).unwrap());
    }

    #[test]
    fn double_transpose_is_stably_the_module(i in 0usize..5, seed in any::<u64>()) {
        let m = module(i, seed);
        let tt = transpose(&transpose(&m).unwrap()).unwrap();
        prop_assert!(stably_similar(&tt, &m).unwrap());
    }

    #[test]
    fn standard_resolutions_satisfy_their_conditions(i in 0usize..5, seed in any::<u64>()) {
        let s = standard_resolution(&module(i, seed), -2, 2).unwrap();
        prop_assert!(s.verify().unwrap());
    }

    #[test]
    fn lifted_chain_maps_commute(i in 0usize..5, seed in any::<u64>()) {
        let f = morphism(i, seed).minimized().unwrap();
        let fa = standard_resolution(&f.source, -2, 1).unwrap();
        let fb = standard_resolution(&f.target, -2, 1).unwrap();
        prop_assert!(lift_chain_map(&f, &fa, &fb).unwrap().verify().unwrap());
    }

    #[test]
    fn pseudo_objects_are_certified(i in 0usize..5, seed in any::<u64>()) {
        let p = pseudo_kernel_cokernel(&morphism(i, seed)).unwrap();
        prop_assert!(p.kernel_certified);
        prop_assert!(p.cokernel_certified);
    }

    #[test]
    fn rbm_maps_have_perfect_theta(i in 0usize..5, seed in any::<u64>()) {
        let f = morphism(i, seed);
        if is_rbm(&f).unwrap().rbm {
            let t = theta(&f).unwrap();
            prop_assert!(t.check.perfect);
            prop_assert!(rbm_report(&f).unwrap().syzygy_match);
        } else {
            prop_assert!(theta(&f).is_err());
        }
    }

    #[test]
    fn torsionless_tests_agree(i in 0usize..5, seed in any::<u64>()) {
        let m = module(i, seed);
        prop_assert_eq!(torsionless(&m).unwrap(), torsionless_by_evaluation(&m).unwrap());
    }

    #[test]
    fn identity_sequences_are_perfect(i in 0usize..5, seed in any::<u64>()) {
        let m = module(i, seed);
        let id = ModMap::identity(&m);
        let z = ModMap::zero(&m, &Presentation::zero(m.ctx()));
        prop_assert!(is_perfect_exact(&id, &z).unwrap().perfect);
    }

    #[test]
    fn free_modules_have_trivial_psi(i in 0usize..5, d in -1i32..2) {
        let f = Presentation::free(&ring(i), vec![d, d + 1]);
        prop_assert!(psi(&f).unwrap().is_zero().unwrap());
        prop_assert!(ext_dual_vanishes(&f).unwrap());
    }

    #[test]
    fn map_to_zero_is_rbm_iff_torsionless(i in 0usize..5, seed in any::<u64>()) {
        // M → 0 is stably equivalent to any M → P, so it is rbm iff M embeds in a free module.
        let m = module(i, seed);
        let z = random_map(&m, &Presentation::zero(m.ctx()), &mut rng(seed)).unwrap();
        prop_assert_eq!(is_rbm(&z).unwrap().rbm, torsionless(&m).unwrap());
    }
}

fn poly_text() -> impl Strategy<Value = String> {
    let term = (-3i64..=3, 0u8..3, 0u8..3).prop_map(|(c, a, b)| format!("{c}*x^{a}*y^{b}"));
    prop::collection::vec(term, 1..3).prop_map(|ts| ts.join(" + "))
}

fn session_text() -> impl Strategy<Value = String> {
    let gens = prop::collection::vec(-2i32..3, 1..3);
    (gens, prop::collection::vec(poly_text(), 0..3), any::<bool>()).prop_map(|(gens, polys, gor)| {
        let n = gens.len();
        let rels: Vec<String> = polys
            .iter()
            .map(|p| {
                let entries: Vec<String> = (0..n).map(|i| if i == 0 { p.clone() } else { "0".into() }).collect();
                format!("[{}]", entries.join(", "))
            })
            .collect();
        let flag = if gor { " gorenstein" } else { "" };
        let degs: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
        format!(
            "#! stablehom 1\nring R = QQ[x,y]/(x*y){flag};\nmodule M = coker gens [{}] rels [{}];\nquery resolve M 2;\nquery ext (transpose M) 1 with verify;\n",
            degs.join(", "),
            rels.join(", ")
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, .. ProptestConfig::default() })]

    #[test]
    fn printing_is_a_parse_fixed_point(text in session_text()) {
        // Random relations may be inhomogeneous; the syntax tree must round-trip regardless.
        let ast = dsl::parse_syntax(&text).unwrap();
        let printed = ast.to_string();
        let again = dsl::parse_syntax(&printed).unwrap();
        prop_assert_eq!(again.to_string(), printed);
        prop_assert_eq!(dsl::parse(&text).is_ok(), dsl::parse(&ast.to_string()).is_ok());
    }

    #[test]
    fn parser_never_panics(text in "[ -~\n]{0,80}") {
        let _ = dsl::parse(&text);
    }

    #[test]
    fn parser_never_panics_on_mutated_sessions(text in session_text(), cut in 0usize..200, junk in "[\\[\\](),;=a-z0-9 ]{0,6}") {
        let at = text.char_indices().map(|(i, _)| i).nth(cut % text.len()).unwrap_or(0);
        let mutated = format!("{}{}{}", &text[..at], junk, &text[at..]);
        let _ = dsl::parse(&mutated);
    }
}
