mod common;

use common::*;
use regcat::inverses::{
    closure_composite, enumerate_inverses, generalized_from_inner, inner_inverse_count,
    invertibility_class, is_inverse, projectors, section_inner_inverse,
};
use regcat::space::DEFAULT_MAX_SPACE;
use regcat::{classify_map, compose, InverseKind};

fn count_formula(f: &[usize], x: usize, y: usize) -> u128 {
    let mut fibre = vec![0u128; y];
    for &v in f {
        fibre[v] += 1;
    }
    let hit: u128 = fibre.iter().filter(|&&n| n > 0).product();
    let missed = fibre.iter().filter(|&&n| n == 0).count() as u32;
    hit * (x as u128).pow(missed)
}

#[test]
fn section_is_an_inner_inverse_up_to_size_four() {
    for f in small_maps(4) {
        let nonempty = f.dom().cardinality() > 0 || f.cod().cardinality() == 0;
        match section_inner_inverse(&f) {
            Ok(g) => {
                assert!(nonempty);
                assert!(is_inner(f.table(), g.table()), "{f}");
            }
            Err(_) => assert!(!nonempty),
        }
    }
}

#[test]
fn enumeration_matches_naive_filters() {
    for f in small_maps(3) {
        let (x, y) = (f.dom().cardinality(), f.cod().cardinality());
        for (kind, keep) in [
            (InverseKind::Inner, is_inner as fn(&[usize], &[usize]) -> bool),
            (InverseKind::Outer, is_outer),
            (InverseKind::Generalized, |f: &[usize], g: &[usize]| is_inner(f, g) && is_outer(f, g)),
        ] {
            let got = enumerate_inverses(&f, kind, None, DEFAULT_MAX_SPACE).unwrap();
            let want = naive_inverses(&f, keep);
            let tables: Vec<Vec<usize>> = got.inverses.iter().map(|g| g.table().to_vec()).collect();
            assert_eq!(tables, want, "{f} {kind:?}");
            assert_eq!(got.count, want.len() as u128);
            assert!(got.exhaustive);
        }
        assert_eq!(inner_inverse_count(&f), count_formula(f.table(), x, y), "{f}");
    }
}

#[test]
fn generalized_from_every_inner_inverse() {
    for f in small_maps(3) {
        for g in naive_inverses(&f, is_inner) {
            let g = map("g", f.cod(), f.dom(), g);
            let h = generalized_from_inner(&f, &g).unwrap();
            assert!(is_inner(f.table(), h.table()) && is_outer(f.table(), h.table()), "{f} {g}");
        }
    }
}

#[test]
fn projector_laws_for_generalized_pairs() {
    for (f, g) in generalized_pairs(3) {
        let p = projectors(&f, &g).unwrap();
        assert!(p.p_f_idempotent && p.p_fstar_idempotent);
        assert!(p.absorbs_f && p.absorbs_fstar);
        assert!(idempotent(p.p_f.table()) && idempotent(p.p_fstar.table()));
        assert_eq!(after(p.p_f.table(), f.table()), f.table());
        assert_eq!(after(f.table(), p.p_fstar.table()), f.table());
    }
}

#[test]
fn retractions_are_epi_and_coretractions_mono() {
    for f in small_maps(3) {
        let c = invertibility_class(&f);
        let class = classify_map(&f);
        assert_eq!(c.is_retraction(), class.surjective && (f.dom().cardinality() > 0 || f.cod().cardinality() == 0), "{f}");
        assert_eq!(c.is_coretraction(), class.injective && (f.dom().cardinality() > 0 || f.cod().cardinality() == 0), "{f}");
        if let Some(r) = &c.retraction {
            assert!(is_identity(&after(f.table(), r.table())));
        }
        if let Some(l) = &c.coretraction {
            assert!(is_identity(&after(l.table(), f.table())));
        }
    }
}

/// With `w` an inner inverse of `g.f`: cancelling an injective `g` on the
/// left makes `w.g` an inner inverse of `f`; cancelling a surjective `f` on
/// the right makes `f.w` an inner inverse of `g`. Without the cancellation
/// hypothesis the factorized witness can fail.
#[test]
fn factorization_witnesses() {
    let sets: Vec<_> = (1..=3).map(|n| set(&format!("S{n}"), n)).collect();
    let (mut left_fails, mut right_fails) = (false, false);
    for a in &sets {
        for b in &sets {
            for c in &sets {
                for f in all_maps(a, b) {
                    for g in all_maps(b, c) {
                        let gf = compose(&g, &f).unwrap();
                        let w = section_inner_inverse(&gf).unwrap();
                        assert!(is_inverse(&gf, &w, InverseKind::Inner).unwrap());
                        let wg = compose(&w, &g).unwrap();
                        let fw = compose(&f, &w).unwrap();
                        if classify_map(&g).injective {
                            assert!(is_inner(f.table(), wg.table()), "{f} {g}");
                        } else {
                            left_fails |= !is_inner(f.table(), wg.table());
                        }
                        if classify_map(&f).surjective {
                            assert!(is_inner(g.table(), fw.table()), "{f} {g}");
                        } else {
                            right_fails |= !is_inner(g.table(), fw.table());
                        }
                    }
                }
            }
        }
    }
    assert!(left_fails && right_fails);
}

#[test]
fn closure_under_commuting_projectors() {
    let pairs = generalized_pairs(3);
    let mut commuting = 0;
    for (f, fs) in &pairs {
        for (g, gs) in pairs.iter().filter(|(g, _)| g.dom().cardinality() == f.cod().cardinality()) {
            let g = map("g", f.cod(), &set("Z", g.cod().cardinality()), g.table().to_vec());
            let gs = map("gs", g.cod(), f.cod(), gs.table().to_vec());
            let r = closure_composite(f, fs, &g, &gs).unwrap();
            if r.projectors_commute {
                commuting += 1;
                assert!(r.composite_regular, "{f} {fs} {g} {gs}");
            }
        }
    }
    assert!(commuting > 0);
}
