use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use reltilt::analysis::{combine, hom_basis, hom_dim, projective_cover, tau, Catalog, Limits};
use reltilt::classify::*;
use reltilt::examples::*;
use reltilt::linalg::Field;
use reltilt::module::{
    cokernel, direct_sum, factor_through_epi, factor_through_mono, kernel, map_direct_sum, DirectSum, ModuleMap,
    Representation,
};
use reltilt::quiver::BoundAlgebra;
use reltilt::relative::FContext;
use reltilt::torsion::{f_proj_inj, subset_module, TorsionChecker};

struct Fixture {
    ctx: FContext,
    catalog: Catalog,
    complexes: Arc<BoundAlgebra>,
}

fn lim() -> Limits {
    Limits::default()
}

fn fixtures() -> &'static [Fixture] {
    static CELL: OnceLock<Vec<Fixture>> = OnceLock::new();
    CELL.get_or_init(|| {
        let f = Field::new(5).unwrap();
        let (a2, e4, nf) = (a2(f).unwrap(), ejem4(f).unwrap(), nofadm(f).unwrap());
        let cases = vec![
            (regular_context(&a2, lim()).unwrap(), catalog(&a2, &A2_BOUND, lim()).unwrap()),
            (regular_context(&e4, lim()).unwrap(), catalog(&e4, &EJEM4_BOUND, lim()).unwrap()),
            (ejem4_context(&e4, lim()).unwrap(), catalog(&e4, &EJEM4_BOUND, lim()).unwrap()),
            (regular_context(&nf, lim()).unwrap(), catalog(&nf, &NOFADM_BOUND, lim()).unwrap()),
            (nofadm_context(&nf, lim()).unwrap(), catalog(&nf, &NOFADM_BOUND, lim()).unwrap()),
        ];
        cases
            .into_iter()
            .map(|(ctx, catalog)| {
                let complexes = complex_algebra(ctx.algebra()).unwrap();
                Fixture { ctx, catalog, complexes }
            })
            .collect()
    })
}

fn is_regular(ctx: &FContext) -> bool {
    ctx.rank() == ctx.algebra().vertex_count()
}

fn subset_from_mask(n: usize, mask: u32) -> Vec<usize> {
    (0..n).filter(|k| mask >> k & 1 == 1).collect()
}

fn nonempty(fx: &Fixture, mask: u32) -> Vec<usize> {
    let n = fx.catalog.len();
    let mask = mask % ((1 << n) - 1) + 1;
    subset_from_mask(n, mask)
}

#[test]
fn regular_generator_collapses_to_classical_theory() {
    for fx in fixtures().iter().filter(|fx| is_regular(&fx.ctx)) {
        let cat = &fx.catalog;
        for s in subsets(cat.len()).unwrap() {
            let m = subset_module(cat, &s).unwrap();
            let v = is_f_presilting(&fx.ctx, &m).unwrap();
            let classical = m.is_zero() || hom_dim(&m, &tau(&m).unwrap()).unwrap() == 0;
            assert!(v.agreed());
            assert_eq!(v.value(), classical, "{s:?}");
        }
    }
}

#[test]
fn f_exact_is_exact_for_the_regular_generator() {
    for fx in fixtures().iter().filter(|fx| is_regular(&fx.ctx)) {
        let cat = &fx.catalog;
        for b in 0..cat.len() {
            for c in 0..cat.len() {
                let basis = hom_basis(cat.get(b), cat.get(c)).unwrap();
                if basis.is_empty() {
                    continue;
                }
                let zero = ModuleMap::zero(cat.get(b), cat.get(c));
                let g = combine(&zero, &basis, &vec![1; basis.len()]);
                let (_, f) = kernel(&g).unwrap();
                assert_eq!(fx.ctx.is_f_exact(&f, &g).unwrap().is_some(), g.is_surjective());
            }
        }
    }
}

#[test]
fn tilting_modules_have_perpendicular_closures() {
    for fx in fixtures() {
        let ch = TorsionChecker::new(&fx.ctx, &fx.catalog).unwrap();
        let cat = &fx.catalog;
        for s in subsets(cat.len()).unwrap().into_iter().skip(1) {
            let t = subset_module(cat, &s).unwrap();
            if !is_f_tilting(&fx.ctx, &t).unwrap().is_tilting {
                continue;
            }
            let perp: Vec<usize> =
                (0..cat.len()).filter(|&z| fx.ctx.ext_f_dim(&t, cat.get(z), 1).unwrap() == 0).collect();
            assert_eq!(ch.closure(&s), perp, "{s:?}");
        }
    }
}

#[test]
fn f_injectives_detect_tilting_classes() {
    for fx in fixtures() {
        let ch = TorsionChecker::new(&fx.ctx, &fx.catalog).unwrap();
        let cat = &fx.catalog;
        let (_, inj) = f_proj_inj(&fx.ctx, cat).unwrap();
        let tilting_classes: Vec<Vec<usize>> = subsets(cat.len())
            .unwrap()
            .into_iter()
            .skip(1)
            .filter(|s| is_f_tilting(&fx.ctx, &subset_module(cat, s).unwrap()).unwrap().is_tilting)
            .map(|s| ch.closure(&s))
            .collect();
        for s in enumerate_torsion_classes(&ch, &[TorsionFilter::All]).unwrap() {
            let contains_inj = inj.iter().all(|i| s.contains(i));
            let fp = reltilt::torsion::is_f_preenveloping(&fx.ctx, cat, &s).unwrap();
            assert_eq!(contains_inj && fp, tilting_classes.contains(&s), "{s:?}");
        }
    }
}

#[test]
fn pairs_embed_into_tau_rigid_pairs() {
    for fx in fixtures() {
        let ch = TorsionChecker::new(&fx.ctx, &fx.catalog).unwrap();
        let pairs = presilting_pairs(&ch).unwrap();
        let mut images = Vec::new();
        for (m, x, _) in &pairs {
            let mm = subset_module(&fx.catalog, m).unwrap();
            let xm = fx.ctx.sum_of(x).unwrap().module;
            let (em, ex) = (fx.ctx.eval_module(&mm).unwrap(), fx.ctx.eval_module(&xm).unwrap());
            // (eM, eX') is a τ-rigid pair over Γ
            assert!(is_tau_rigid(&em).unwrap());
            assert_eq!(hom_dim(&ex, &em).unwrap(), 0);
            for (pm, px) in &images {
                assert!(!eval_pair_is_iso(&fx.ctx, (&mm, &xm), (pm, px)).unwrap(), "{m:?} {x:?}");
            }
            images.push((mm, xm));
        }
    }
}

fn check_subset(fx: &Fixture, s: &[usize]) {
    let ctx = &fx.ctx;
    let cat = &fx.catalog;
    let ch = TorsionChecker::new(ctx, cat).unwrap();
    let m = subset_module(cat, s).unwrap();
    let closure = ch.closure(s);
    let v = is_f_presilting(ctx, &m).unwrap();
    assert!(v.agreed(), "{s:?}: {v:?}");
    if v.value() {
        for &z in &closure {
            assert_eq!(ctx.ext_f_dim(&m, cat.get(z), 1).unwrap(), 0, "{s:?} -> {z}");
        }
    }
    if is_tau_rigid(&ctx.eval_module(&m).unwrap()).unwrap() {
        assert!(ch.is_torsion(&closure).unwrap(), "{s:?}");
    }
    let reduct = gen_f_minimal_reduct(ctx, &m).unwrap();
    assert_eq!(ch.closure_of(&reduct).unwrap(), closure);
    let reduct_is_m = reltilt::analysis::is_isomorphic(&reduct, &m, lim()).unwrap().is_some();
    if reduct_is_m && ch.is_torsion(&closure).unwrap() {
        for &z in &closure {
            assert_eq!(ctx.ext_f_dim(&m, cat.get(z), 1).unwrap(), 0, "{s:?} -> {z}");
        }
    }
    let c = ctx.presentation_complex(&m).unwrap();
    assert_eq!(complex_rank(&fx.complexes, &c, lim()).unwrap(), s.len(), "{s:?}");
}

#[test]
fn torsion_classes_are_generated_by_their_reduct() {
    for fx in fixtures() {
        let ch = TorsionChecker::new(&fx.ctx, &fx.catalog).unwrap();
        for s in enumerate_torsion_classes(&ch, &[TorsionFilter::Nonzero]).unwrap() {
            let sum = subset_module(&fx.catalog, &s).unwrap();
            let reduct = gen_f_minimal_reduct(&fx.ctx, &sum).unwrap();
            assert_eq!(ch.closure_of(&reduct).unwrap(), s);
            for &z in &s {
                assert_eq!(fx.ctx.ext_f_dim(&reduct, fx.catalog.get(z), 1).unwrap(), 0, "{s:?} -> {z}");
            }
        }
    }
}

#[test]
fn direct_sums_with_summands_of_x_stay_in_add_x() {
    for fx in fixtures() {
        let x = direct_sum(fx.ctx.algebra(), fx.ctx.summands()).unwrap();
        assert!(in_add(&x, fx.ctx.summands(), lim()).unwrap());
        let z = Representation::zero(fx.ctx.algebra());
        assert!(pair_classify(&fx.ctx, &z, &x).unwrap().is_pair);
    }
}

#[test]
fn relative_projectives_and_injectives_are_add_x_and_add_tau_x_plus_injectives() {
    for fx in fixtures() {
        let cat = &fx.catalog;
        let alg = fx.ctx.algebra();
        let (proj, inj) = f_proj_inj(&fx.ctx, cat).unwrap();
        let mut taus: Vec<Representation> = Vec::new();
        for x in fx.ctx.summands() {
            let t = tau(x).unwrap();
            if !t.is_zero() {
                taus.push(t);
            }
        }
        taus.extend((0..alg.vertex_count()).map(|v| reltilt::module::injective(alg, v)));
        for z in 0..cat.len() {
            assert_eq!(proj.contains(&z), in_add(cat.get(z), fx.ctx.summands(), lim()).unwrap(), "{z}");
            assert_eq!(inj.contains(&z), in_add(cat.get(z), &taus, lim()).unwrap(), "{z}");
        }
    }
}

#[test]
fn basic_part_and_evaluation_preserve_closures() {
    for fx in fixtures() {
        let ch = TorsionChecker::new(&fx.ctx, &fx.catalog).unwrap();
        let all: Vec<Vec<usize>> = subsets(fx.catalog.len()).unwrap().into_iter().skip(1).collect();
        for s in &all {
            let m = subset_module(&fx.catalog, s).unwrap();
            let doubled = direct_sum(fx.ctx.algebra(), &[m.clone(), fx.catalog.get(s[0]).clone()]).unwrap();
            assert_eq!(ch.closure_of(&doubled).unwrap(), ch.closure(s));
        }
        let evals: Vec<Representation> =
            all.iter().map(|s| fx.ctx.eval_module(&subset_module(&fx.catalog, s).unwrap()).unwrap()).collect();
        for a in 0..all.len() {
            for b in a + 1..all.len() {
                if ch.closure(&all[a]) == ch.closure(&all[b]) {
                    assert!(in_gen(&evals[a], &evals[b]).unwrap() && in_gen(&evals[b], &evals[a]).unwrap());
                }
            }
        }
    }
}

/// A random F-exact sequence `0 -> A -> B -> C -> 0` from the catalog.
fn random_sequence(fx: &Fixture, c: usize, a: usize, coeff: u32) -> (ModuleMap, ModuleMap) {
    let (cm, am) = (fx.catalog.get(c), fx.catalog.get(a));
    let ext = fx.ctx.ext_f(cm, am, 1).unwrap();
    let z = ext.cocycles.iter().fold(ModuleMap::zero(&ext.omega, am), |acc, k| acc.add(&k.scale(coeff)));
    let t = fx.ctx.middle_term(cm, am, &z).unwrap();
    (t.f, t.g)
}

fn some_map(m: &Representation, n: &Representation, coeff: u32) -> ModuleMap {
    let basis = hom_basis(m, n).unwrap();
    let coeffs: Vec<u32> = (0..basis.len()).map(|k| coeff.wrapping_add(k as u32) % m.field().p()).collect();
    combine(&ModuleMap::zero(m, n), &basis, &coeffs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pushouts_and_pullbacks_stay_f_exact(which in 0usize..5, c in any::<usize>(), a in any::<usize>(), t in any::<usize>(), coeff in 0u32..5) {
        let fx = &fixtures()[which];
        let n = fx.catalog.len();
        let (c, a, t) = (c % n, a % n, t % n);
        let (f, g) = random_sequence(fx, c, a, coeff);
        prop_assert!(fx.ctx.is_f_exact(&f, &g).unwrap().is_some());
        let alg = fx.ctx.algebra();
        let neg = alg.field().neg(1);
        let (am, bm, cm) = (f.source().clone(), f.target().clone(), g.target().clone());
        let other = fx.catalog.get(t).clone();

        // pushout along h: A -> A'
        let h = some_map(&am, &other, coeff + 1);
        let ds = DirectSum::new(alg, &[bm.clone(), other.clone()]).unwrap();
        let u = ds.into_components(&am, &[f.clone(), h.scale(neg)]);
        let (_, q) = cokernel(&u).unwrap();
        let f2 = ds.inclusion(1).then(&q);
        let g2 = factor_through_epi(&q, &ds.from_components(&cm, &[g.clone(), ModuleMap::zero(&other, &cm)])).unwrap();
        prop_assert!(fx.ctx.is_f_exact(&f2, &g2).unwrap().is_some());

        // pullback along k: C' -> C
        let k = some_map(&other, &cm, coeff + 2);
        let ds = DirectSum::new(alg, &[bm.clone(), other.clone()]).unwrap();
        let v = ds.from_components(&cm, &[g.clone(), k.scale(neg)]);
        let (_, i) = kernel(&v).unwrap();
        let g3 = i.then(&ds.projection(1));
        let f3 = factor_through_mono(&i, &ds.into_components(&am, &[f.clone(), ModuleMap::zero(&am, &other)])).unwrap();
        prop_assert!(fx.ctx.is_f_exact(&f3, &g3).unwrap().is_some());
    }

    #[test]
    fn subset_invariants(which in 0usize..5, mask in any::<u32>()) {
        let fx = &fixtures()[which];
        let s = nonempty(fx, mask);
        check_subset(fx, &s);
    }

    #[test]
    fn pair_rank_never_exceeds_rank_of_x(which in 0usize..5, mask in any::<u32>(), xmask in any::<u32>()) {
        let fx = &fixtures()[which];
        let s = nonempty(fx, mask);
        let x = subset_from_mask(fx.ctx.rank(), xmask);
        let m = subset_module(&fx.catalog, &s).unwrap();
        let xm = fx.ctx.sum_of(&x).unwrap().module;
        let pair = pair_classify(&fx.ctx, &m, &xm).unwrap();
        if pair.is_pair {
            prop_assert!(pair.rk_m + pair.rk_x_part <= fx.ctx.rank());
        }
    }

    #[test]
    fn sums_of_sequences_are_f_exact_iff_both_are(which in 0usize..5, c in any::<usize>(), a in any::<usize>(), t in any::<usize>(), coeff in 0u32..5) {
        let fx = &fixtures()[which];
        let n = fx.catalog.len();
        let (f1, g1) = random_sequence(fx, c % n, a % n, coeff);
        // the projective cover sequence need not be F-exact
        let (_, _, pi) = projective_cover(fx.catalog.get(t % n)).unwrap();
        let (_, k) = kernel(&pi).unwrap();
        let sum_f = map_direct_sum(&[f1.clone(), k.clone()]).unwrap();
        let sum_g = map_direct_sum(&[g1.clone(), pi.clone()]).unwrap();
        let both = fx.ctx.is_f_exact(&f1, &g1).unwrap().is_some() && fx.ctx.is_f_exact(&k, &pi).unwrap().is_some();
        prop_assert_eq!(fx.ctx.is_f_exact(&sum_f, &sum_g).unwrap().is_some(), both);
    }

    #[test]
    fn f_epics_compose_and_cancel(which in 0usize..5, t in any::<usize>(), x in any::<usize>(), coeff in 0u32..5) {
        let fx = &fixtures()[which];
        let ctx = &fx.ctx;
        let (_, _, g) = projective_cover(fx.catalog.get(t % fx.catalog.len())).unwrap();
        let cover = ctx.f_cover(g.source()).unwrap().map;
        // cover is F-epic, so g.cover is F-epic exactly when g is
        prop_assert!(ctx.hom_x_surjective(&cover).unwrap());
        prop_assert_eq!(ctx.hom_x_surjective(&cover.then(&g)).unwrap(), ctx.hom_x_surjective(&g).unwrap());
        let f = some_map(&ctx.summands()[x % ctx.rank()], g.source(), coeff);
        if ctx.hom_x_surjective(&f.then(&g)).unwrap() {
            prop_assert!(ctx.hom_x_surjective(&g).unwrap());
        }
    }
}
