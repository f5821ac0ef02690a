//! Canonical form by breadth-first traversal, automorphisms and the
//! canonical parent used by canonical augmentation.
//!
//! From a start point `x` the traversal keeps a FIFO queue of
//! `(direction, point)` pairs seeded with `(1, x), (2, x), (3, x)`. Popping
//! `(i, v)` whose `τᵢ`-cycle has not been emitted walks that cycle from `v`
//! along `τᵢ`, giving each unseen point the next label, appending the labels
//! and a `-1` terminator to the code, and queueing the two other cycles
//! through every walked point that are still unvisited. The canonical form
//! is the least code over all start points.
//!
//! For transitive triples the code determines the triple (see [`decode`]),
//! and the starts that reach the least code are in bijection with the
//! automorphisms.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::moves::{try_contract, SlideSite};
use crate::triple::{Direction, TauTriple};

/// End-of-cycle marker.
pub const END: i32 = -1;

/// A traversal code: 1-based labels with `-1` after each cycle. Ordered
/// lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(Vec<i32>);

impl CanonicalForm {
    pub fn code(&self) -> &[i32] {
        &self.0
    }

    /// Number of points, i.e. the largest label.
    pub fn size(&self) -> usize {
        self.0.iter().copied().max().unwrap_or(0).max(0) as usize
    }

    /// Number of cycles, i.e. the number of markers.
    pub fn num_cycles(&self) -> usize {
        self.0.iter().filter(|&&c| c == END).count()
    }
}

impl From<Vec<i32>> for CanonicalForm {
    fn from(code: Vec<i32>) -> Self {
        CanonicalForm(code)
    }
}

/// Space separated integers on one line.
impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for CanonicalForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        s.split_whitespace()
            .map(|tok| {
                tok.parse::<i32>()
                    .map_err(|e| Error::MalformedCode(format!("bad token {tok:?}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(CanonicalForm)
    }
}

/// A bijection from a triple's points to canonical (0-based) labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relabelling {
    forward: Vec<usize>,
    inverse: Vec<usize>,
}

impl Relabelling {
    fn from_forward(forward: Vec<usize>) -> Self {
        let mut inverse = vec![0; forward.len()];
        for (p, &l) in forward.iter().enumerate() {
            inverse[l] = p;
        }
        Relabelling { forward, inverse }
    }

    /// Point to canonical label.
    pub fn forward(&self) -> &[usize] {
        &self.forward
    }

    /// Canonical label to point.
    pub fn inverse(&self) -> &[usize] {
        &self.inverse
    }

    #[inline]
    pub fn label(&self, point: usize) -> usize {
        self.forward[point]
    }

    #[inline]
    pub fn point(&self, label: usize) -> usize {
        self.inverse[label]
    }
}

/// The τ-automorphisms of a triple as explicit point maps. The identity is
/// always the first element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutGroup {
    elements: Vec<Vec<usize>>,
}

impl AutGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Vec<usize>] {
        &self.elements
    }

    /// The orbit of `point`, sorted.
    pub fn orbit(&self, point: usize) -> Vec<usize> {
        let mut o: Vec<usize> = self.elements.iter().map(|g| g[point]).collect();
        o.sort_unstable();
        o.dedup();
        o
    }
}

enum Outcome {
    Less(Vec<i32>, Vec<usize>),
    Equal(Vec<usize>),
    Greater,
}

/// Runs the traversal from `start`. With a `bound`, stops as soon as the
/// code is known to exceed it.
fn traverse(t: &TauTriple, start: usize, bound: Option<&[i32]>) -> Outcome {
    let n = t.n_points();
    let perms = t.perms();
    let mut label = vec![usize::MAX; n];
    let mut next_label = 0;
    let mut visited: [Vec<bool>; 3] = [0, 1, 2].map(|i| vec![false; perms[i].num_cycles()]);
    let mut code = Vec::with_capacity(bound.map_or(4 * n, <[i32]>::len));
    // true while the code so far is a prefix of bound
    let mut tied = bound.is_some();

    let mut queue = VecDeque::with_capacity(2 * n + 3);
    queue.extend(Direction::ALL.map(|d| (d, start)));

    macro_rules! emit {
        ($value:expr) => {{
            let value: i32 = $value;
            if tied {
                let b = bound.unwrap()[code.len()];
                if value > b {
                    return Outcome::Greater;
                }
                if value < b {
                    tied = false;
                }
            }
            code.push(value);
        }};
    }

    while let Some((d, v)) = queue.pop_front() {
        let p = &perms[d.index()];
        let cid = p.cycle_id(v);
        if visited[d.index()][cid] {
            continue;
        }
        visited[d.index()][cid] = true;
        let mut w = v;
        loop {
            if label[w] == usize::MAX {
                label[w] = next_label;
                next_label += 1;
            }
            emit!(label[w] as i32 + 1);
            for o in d.others() {
                if !visited[o.index()][perms[o.index()].cycle_id(w)] {
                    queue.push_back((o, w));
                }
            }
            w = p.apply(w);
            if w == v {
                break;
            }
        }
        emit!(END);
    }
    assert_eq!(next_label, n, "traversal did not reach every point");

    if bound.is_some() && tied {
        Outcome::Equal(label)
    } else {
        Outcome::Less(code, label)
    }
}

/// The traversal code `C(x)` from a single start point.
pub fn canonical_code_from(t: &TauTriple, x: usize) -> CanonicalForm {
    match traverse(t, x, None) {
        Outcome::Less(code, _) => CanonicalForm(code),
        _ => unreachable!("unbounded traversal always completes"),
    }
}

/// The canonical form of a triple together with every relabelling that
/// attains it.
///
/// `labellings[0]` comes from the smallest minimizing start point and is the
/// reference relabelling `κ`. The automorphisms are `κᵢ⁻¹ ∘ κ`.
#[derive(Clone, Debug)]
pub struct Canonical {
    pub form: CanonicalForm,
    labellings: Vec<Relabelling>,
}

impl Canonical {
    /// Panics on an empty or non-transitive triple.
    pub fn of(t: &TauTriple) -> Self {
        assert!(t.n_points() > 0, "canonical form of an empty triple");
        let mut best: Option<Vec<i32>> = None;
        let mut labellings = Vec::new();
        for x in 0..t.n_points() {
            match traverse(t, x, best.as_deref()) {
                Outcome::Less(code, label) => {
                    best = Some(code);
                    labellings.clear();
                    labellings.push(Relabelling::from_forward(label));
                }
                Outcome::Equal(label) => labellings.push(Relabelling::from_forward(label)),
                Outcome::Greater => {}
            }
        }
        Canonical {
            form: CanonicalForm(best.expect("at least one start point")),
            labellings,
        }
    }

    pub fn relabelling(&self) -> &Relabelling {
        &self.labellings[0]
    }

    pub fn labellings(&self) -> &[Relabelling] {
        &self.labellings
    }

    pub fn aut_order(&self) -> usize {
        self.labellings.len()
    }

    pub fn automorphisms(&self) -> AutGroup {
        let reference = &self.labellings[0];
        let elements = self
            .labellings
            .iter()
            .map(|k| {
                reference
                    .forward
                    .iter()
                    .map(|&l| k.inverse[l])
                    .collect::<Vec<_>>()
            })
            .collect();
        AutGroup { elements }
    }

    /// Smallest point in the automorphism orbit of `point`.
    pub fn orbit_min(&self, point: usize) -> usize {
        let l = self.labellings[0].forward[point];
        self.labellings.iter().map(|k| k.inverse[l]).min().unwrap()
    }

    /// Whether some automorphism maps `p` to `q`.
    pub fn same_orbit(&self, p: usize, q: usize) -> bool {
        let lq = self.labellings[0].forward[q];
        self.labellings.iter().any(|k| k.forward[p] == lq)
    }
}

/// The least code over all start points and a relabelling attaining it.
pub fn canonical_form(t: &TauTriple) -> (CanonicalForm, Relabelling) {
    let mut c = Canonical::of(t);
    let k = c.labellings.swap_remove(0);
    (c.form, k)
}

pub fn automorphisms(t: &TauTriple) -> AutGroup {
    Canonical::of(t).automorphisms()
}

/// The triple in canonical labels, `t` relabelled by `κ`.
pub fn canonical_triple(t: &TauTriple) -> TauTriple {
    let (_, k) = canonical_form(t);
    t.relabel(k.forward())
}

/// Rebuilds the triple, in canonical labels, that a traversal code was
/// read from by replaying the traversal.
pub fn decode(form: &CanonicalForm) -> Result<TauTriple, Error> {
    let code = form.code();
    let n = form.size();
    if n == 0 {
        return Err(Error::MalformedCode("no points".into()));
    }
    let bad = |msg: String| Err(Error::MalformedCode(msg));
    let mut succ: [Vec<usize>; 3] = [0, 1, 2].map(|_| vec![usize::MAX; n]);
    let mut queue: VecDeque<(Direction, usize)> = Direction::ALL.map(|d| (d, 0)).into();
    let mut pos = 0;
    while let Some((d, v)) = queue.pop_front() {
        if succ[d.index()][v] != usize::MAX {
            continue;
        }
        let mut cycle = Vec::new();
        loop {
            match code.get(pos) {
                None => return bad(format!("code ends inside a cycle at position {pos}")),
                Some(&END) => break,
                Some(&c) if c >= 1 && (c as usize) <= n => cycle.push(c as usize - 1),
                Some(&c) => return bad(format!("label {c} out of range at position {pos}")),
            }
            pos += 1;
        }
        pos += 1;
        if cycle.first() != Some(&v) {
            return bad(format!(
                "cycle ending at position {} should start at label {}",
                pos - 1,
                v + 1
            ));
        }
        for (i, &p) in cycle.iter().enumerate() {
            let s = &mut succ[d.index()][p];
            if *s != usize::MAX {
                return bad(format!("label {} repeated in direction {d}", p + 1));
            }
            *s = cycle[(i + 1) % cycle.len()];
        }
        for &p in &cycle {
            for o in d.others() {
                if succ[o.index()][p] == usize::MAX {
                    queue.push_back((o, p));
                }
            }
        }
    }
    if pos != code.len() {
        return bad(format!("{} trailing code entries", code.len() - pos));
    }
    if succ.iter().any(|s| s.contains(&usize::MAX)) {
        return bad("code does not cover every point in every direction".into());
    }
    let t = TauTriple::from_images(succ)?;
    if canonical_code_from(&t, 0) != *form {
        return bad("labels are not in traversal order".into());
    }
    Ok(t)
}

/// The canonical contraction site: the lexicographically greatest
/// `(j, κ(u))` among valid contractions, returned in `t`'s own labels.
pub fn canonical_site(t: &TauTriple, canon: &Canonical) -> Option<SlideSite> {
    let k = canon.relabelling();
    for dir in Direction::ALL.into_iter().rev() {
        for label in (0..t.n_points()).rev() {
            let site = SlideSite::new(dir, k.point(label));
            if try_contract(t, site).is_some() {
                return Some(site);
            }
        }
    }
    None
}

/// The canonical parent `m(t)` (in `t`'s labels, with the contracted point
/// removed) and the site that produces it.
pub fn canonical_parent(t: &TauTriple) -> Result<(TauTriple, SlideSite), Error> {
    let canon = Canonical::of(t);
    let site = canonical_site(t, &canon).ok_or(Error::NoParent)?;
    let parent = try_contract(t, site).expect("canonical site contracts");
    Ok((parent, site))
}

/// Whether `site` lies in the automorphism orbit of the canonical site.
pub fn accepts(t: &TauTriple, canon: &Canonical, site: SlideSite) -> Result<bool, Error> {
    let best = canonical_site(t, canon).ok_or(Error::NoParent)?;
    Ok(best.dir == site.dir && canon.same_orbit(site.point, best.point))
}

/// Whether `child`, reached by the expansion that `undo_site` reverses, was
/// generated by canonical augmentation.
pub fn is_canonical_augmentation(child: &TauTriple, undo_site: SlideSite) -> Result<bool, Error> {
    accepts(child, &Canonical::of(child), undo_site)
}
