mod common;

use std::collections::BTreeMap;
use std::sync::OnceLock;

use proptest::prelude::*;

use bitrade_core::canon::{
    accepts, canonical_parent, canonical_site, is_canonical_augmentation, CanonicalForm,
};
use bitrade_core::enumerate::{children, run_tasks_sequential, split_tasks};
use bitrade_core::moves::{expansion_sites, has_contraction_site, slide_expand};
use bitrade_core::{enumerate_all, Canonical, SlideSite, TauTriple};

use common::*;

fn classes() -> &'static [TauTriple] {
    static CLASSES: OnceLock<Vec<TauTriple>> = OnceLock::new();
    CLASSES.get_or_init(|| classes_up_to(11))
}

fn class_and_relabelling() -> impl Strategy<Value = (TauTriple, Vec<usize>)> {
    (0..classes().len(), any::<u64>()).prop_map(|(i, seed)| {
        let t = classes()[i].clone();
        let theta = shuffled(t.n_points(), seed);
        (t, theta)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn canonical_form_ignores_labels((t, theta) in class_and_relabelling()) {
        let renamed = t.relabel(&theta);
        let (a, b) = (Canonical::of(&t), Canonical::of(&renamed));
        prop_assert_eq!(&a.form, &b.form);
        prop_assert_eq!(a.aut_order(), b.aut_order());
        // the canonical labelling of the copy undoes the renaming
        let k = b.relabelling();
        let direct: Vec<usize> = (0..t.n_points()).map(|x| k.label(theta[x])).collect();
        prop_assert_eq!(t.relabel(&direct), t.relabel(a.relabelling().forward()));
    }

    #[test]
    fn expansion_commutes_with_renaming((t, theta) in class_and_relabelling(), pick in any::<prop::sample::Index>()) {
        let sites = expansion_sites(&t);
        prop_assume!(!sites.is_empty());
        let s = sites[pick.index(sites.len())];
        let renamed = t.relabel(&theta);
        let moved = SlideSite::new(s.dir, theta[s.point]);
        let a = slide_expand(&t, s).unwrap();
        let b = slide_expand(&renamed, moved).unwrap();
        prop_assert_eq!(Canonical::of(&a).form, Canonical::of(&b).form);
        let mut extended = theta.clone();
        extended.push(t.n_points());
        prop_assert_eq!(a.relabel(&extended), b);
    }

    #[test]
    fn canonical_parent_ignores_labels((t, theta) in class_and_relabelling()) {
        let renamed = t.relabel(&theta);
        match (canonical_parent(&t), canonical_parent(&renamed)) {
            (Ok((p, s)), Ok((q, r))) => {
                prop_assert_eq!(Canonical::of(&p).form, Canonical::of(&q).form);
                prop_assert_eq!(s.dir, r.dir);
                prop_assert!(Canonical::of(&renamed).same_orbit(theta[s.point], r.point));
            }
            (Err(_), Err(_)) => prop_assert!(!has_contraction_site(&t)),
            _ => prop_assert!(false, "parent exists for only one labelling"),
        }
    }

    #[test]
    fn acceptance_ignores_labels((t, theta) in class_and_relabelling(), pick in any::<prop::sample::Index>()) {
        let sites = expansion_sites(&t);
        prop_assume!(!sites.is_empty());
        let s = sites[pick.index(sites.len())];
        let child = slide_expand(&t, s).unwrap();
        let u = t.n_points();
        let mut extended = theta.clone();
        extended.push(u);
        let renamed = child.relabel(&extended);
        prop_assert_eq!(
            is_canonical_augmentation(&child, SlideSite::new(s.dir, u)).unwrap(),
            is_canonical_augmentation(&renamed, SlideSite::new(s.dir, u)).unwrap()
        );
    }

    #[test]
    fn automorphisms_form_a_group(i in 0..classes().len()) {
        let t = &classes()[i];
        let aut = Canonical::of(t).automorphisms();
        let elems = aut.elements();
        prop_assert!(elems.iter().any(|g| g.iter().enumerate().all(|(x, &y)| x == y)));
        for g in elems {
            prop_assert_eq!(&t.relabel(g), t);
            for h in elems {
                let gh: Vec<usize> = g.iter().map(|&x| h[x]).collect();
                prop_assert!(elems.contains(&gh));
            }
        }
        prop_assert_eq!(elems.len(), brute_aut_order(t));
    }
}

#[test]
fn code_equality_is_isomorphism() {
    let small: Vec<&TauTriple> = classes().iter().filter(|t| t.n_points() <= 8).collect();
    for (i, a) in small.iter().enumerate() {
        for (j, b) in small.iter().enumerate() {
            let renamed = b.relabel(&shuffled(b.n_points(), (i * 131 + j) as u64));
            assert_eq!(
                brute_isomorphic(a, &renamed),
                i == j,
                "classes {i} and {j} of sizes {} and {}",
                a.n_points(),
                b.n_points()
            );
        }
    }
}

#[test]
fn every_class_has_exactly_one_accepted_parent() {
    let mut accepted: BTreeMap<CanonicalForm, usize> = BTreeMap::new();
    for t in classes().iter().filter(|t| t.n_points() < 10) {
        for (child, undo) in children(t) {
            if is_canonical_augmentation(&child, undo).unwrap() {
                *accepted.entry(Canonical::of(&child).form).or_default() += 1;
            }
        }
    }
    for t in classes().iter().filter(|t| t.n_points() <= 10) {
        let form = Canonical::of(t).form;
        let times = accepted.get(&form).copied().unwrap_or(0);
        let want = usize::from(has_contraction_site(t));
        assert_eq!(times, want, "{form}");
    }
}

#[test]
fn canonical_site_is_accepted() {
    for t in classes() {
        let canon = Canonical::of(t);
        if let Some(site) = canonical_site(t, &canon) {
            assert!(accepts(t, &canon, site).unwrap());
        }
    }
}

#[test]
fn split_then_run_equals_whole_search() {
    let whole = enumerate_all(12, 1, 0);
    for depth in 0..=4 {
        let split = split_tasks(12, depth, false);
        let mut census = split.prefix.clone();
        for part in run_tasks_sequential(&split.tasks, false, |_, _| {}).unwrap() {
            census.merge(&part);
        }
        census.normalize();
        assert_eq!(census, whole, "depth {depth}");
        for task in &split.tasks {
            let back: bitrade_core::SearchTask = task.to_string().parse().unwrap();
            assert_eq!(&back, task);
        }
    }
}
