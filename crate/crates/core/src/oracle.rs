//! Brute-force closure of the bicyclic roots under slide expansion and
//! inversion, deduplicated by canonical form.
//!
//! This shares the move and canonical-form code with the enumerator but none
//! of its pruning: no automorphism orbits, no canonical parent, no
//! acceptance test. It stores every class, so it is only meant for small
//! sizes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::canon::{decode, Canonical, CanonicalForm};
use crate::enumerate::{bicyclic_roots, CensusTable, MIN_SIZE};
use crate::error::Error;
use crate::moves::{expansion_sites, slide_expand};
use crate::trade::{from_pair, to_pair};

pub const DEFAULT_BOUND: usize = 13;

/// Canonical forms bucketed by size.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClassStore {
    by_size: BTreeMap<usize, BTreeSet<CanonicalForm>>,
}

impl ClassStore {
    pub fn new() -> Self {
        ClassStore::default()
    }

    /// Inserts without validating. Returns whether the form was new.
    pub fn insert(&mut self, size: usize, form: CanonicalForm) -> bool {
        self.by_size.entry(size).or_default().insert(form)
    }

    pub fn contains(&self, size: usize, form: &CanonicalForm) -> bool {
        self.by_size.get(&size).is_some_and(|s| s.contains(form))
    }

    pub fn classes(&self, size: usize) -> impl Iterator<Item = &CanonicalForm> {
        self.by_size.get(&size).into_iter().flatten()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &CanonicalForm)> {
        self.by_size
            .iter()
            .flat_map(|(&s, set)| set.iter().map(move |f| (s, f)))
    }

    pub fn len(&self) -> usize {
        self.by_size.values().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Census with forms retained, covering sizes `4..=max_size`.
    pub fn census(&self, max_size: usize) -> CensusTable {
        let mut c = CensusTable::new(max_size, true);
        for (s, f) in self.iter() {
            c.record(s, f);
        }
        c.normalize();
        c
    }
}

/// Every spherical class of size up to `max_size` reachable from the
/// bicyclic roots by expansions of a class or of its inverse.
pub fn naive_closure(max_size: usize, bound: usize) -> Result<ClassStore, Error> {
    if max_size > bound {
        return Err(Error::BoundExceeded {
            requested: max_size,
            bound,
        });
    }
    let mut store = ClassStore::new();
    for size in MIN_SIZE..=max_size {
        if size.is_multiple_of(2) {
            for r in bicyclic_roots(size)? {
                store.insert(size, Canonical::of(&r).form);
            }
        }
        let level: Vec<CanonicalForm> = store.classes(size).cloned().collect();
        for f in &level {
            let inv = decode(f)?.inverse();
            store.insert(size, Canonical::of(&inv).form);
        }
        if size == max_size {
            break;
        }
        let level: Vec<CanonicalForm> = store.classes(size).cloned().collect();
        for f in &level {
            let t = decode(f)?;
            for s in expansion_sites(&t) {
                let child = slide_expand(&t, s)?;
                store.insert(size + 1, Canonical::of(&child).form);
            }
        }
    }
    Ok(store)
}

/// [`naive_closure`] with the default bound, as a census.
pub fn naive_enumerate(max_size: usize) -> Result<CensusTable, Error> {
    Ok(naive_closure(max_size, DEFAULT_BOUND)?.census(max_size))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub size: usize,
    pub form: CanonicalForm,
    pub problem: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InvariantReport {
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl InvariantReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for InvariantReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "checked {} classes, {} violations",
            self.checked,
            self.violations.len()
        )?;
        for v in &self.violations {
            writeln!(f, "{}\t{}\t{}", v.size, v.problem, v.form)?;
        }
        Ok(())
    }
}

/// Re-checks every stored class: it decodes to a spherical triple of the
/// stored size, survives the array-form round trip, has at most `size`
/// automorphisms, and its inverse is stored too.
pub fn verify_class_invariants(store: &ClassStore) -> InvariantReport {
    let mut report = InvariantReport::default();
    for (size, form) in store.iter() {
        report.checked += 1;
        let mut flag = |problem: String| {
            report.violations.push(Violation {
                size,
                form: form.clone(),
                problem,
            })
        };
        let t = match decode(form) {
            Ok(t) => t,
            Err(e) => {
                flag(format!("does not decode: {e}"));
                continue;
            }
        };
        if t.n_points() != size {
            flag(format!("decodes to {} points", t.n_points()));
        }
        let r = t.validate();
        if !r.is_spherical() {
            flag(format!("not spherical: {}", r.to_string().replace('\n', "; ")));
            continue;
        }
        match from_pair(&to_pair(&t)) {
            Ok(back) if Canonical::of(&back).form == *form => {}
            Ok(_) => flag("array-form round trip changes the class".into()),
            Err(e) => flag(format!("array-form round trip fails: {e}")),
        }
        let aut = Canonical::of(&t).aut_order();
        if aut > size {
            flag(format!("{aut} automorphisms exceed the size"));
        }
        if !store.contains(size, &Canonical::of(&t.inverse()).form) {
            flag("inverse class missing".into());
        }
    }
    report
}
