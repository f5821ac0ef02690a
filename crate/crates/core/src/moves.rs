//! Slide expansion and slide contraction.
//!
//! With `k = j + 1` and `l = k + 1`, an expansion at `x` in direction `j`
//! adds a new point `u`:
//!
//! ```text
//! τj: (a, x, w, b, …)  ->  (a, u, b, …) and (x, w)      where w = xτj
//! τk: (…, x, z, …)     ->  (…, x, u, z, …)
//! τl: (…, y, w, …)     ->  (…, y, u, w, …)
//! ```
//!
//! and a contraction at `u` undoes it.

use std::fmt;

use crate::error::Error;
use crate::triple::{Direction, TauTriple};

/// A direction together with a point: `x` for an expansion, `u` for a
/// contraction. Ordered by direction first, then point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SlideSite {
    pub dir: Direction,
    pub point: usize,
}

impl SlideSite {
    pub fn new(dir: Direction, point: usize) -> Self {
        SlideSite { dir, point }
    }
}

/// `j:point`
impl fmt::Display for SlideSite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.dir, self.point)
    }
}

impl std::str::FromStr for SlideSite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (j, p) = s.split_once(':').ok_or_else(|| format!("expected `j:point`, got {s:?}"))?;
        let dir = j
            .parse()
            .ok()
            .and_then(Direction::from_number)
            .ok_or_else(|| format!("bad direction {j:?}"))?;
        let point = p.parse().map_err(|e| format!("bad point {p:?}: {e}"))?;
        Ok(SlideSite { dir, point })
    }
}

/// Conditions (1) and (2) for an expansion at `site`.
pub fn can_expand(t: &TauTriple, site: SlideSite) -> bool {
    let SlideSite { dir: j, point: x } = site;
    if x >= t.n_points() || t.tau(j).cycle_len_at(x) < 3 {
        return false;
    }
    let (k, l) = (j.next(), j.next().next());
    let w = t.tau(j).apply(x);
    let k_cycle = t.tau(k).cycle_at(x);
    let l_cycle = t.tau(l).cycle_at(w);
    // cycles are short; a linear scan beats hashing here
    !l_cycle.iter().any(|p| k_cycle.contains(p))
}

/// All expansion sites, sorted by `(j, x)`.
pub fn expansion_sites(t: &TauTriple) -> Vec<SlideSite> {
    Direction::ALL
        .into_iter()
        .flat_map(|dir| (0..t.n_points()).map(move |point| SlideSite { dir, point }))
        .filter(|&s| can_expand(t, s))
        .collect()
}

/// Expands at `site`. The new point is `t.n_points()`, so the expansion is
/// undone by contracting at `(j, t.n_points())`.
pub fn slide_expand(t: &TauTriple, site: SlideSite) -> Result<TauTriple, Error> {
    if !can_expand(t, site) {
        return Err(Error::InvalidSite { site });
    }
    let SlideSite { dir: j, point: x } = site;
    let (k, l) = (j.next(), j.next().next());
    let u = t.n_points();
    let mut images: [Vec<usize>; 3] = [0, 1, 2].map(|i| {
        let mut v = t.perms()[i].images().to_vec();
        v.push(u);
        v
    });

    let tj = t.tau(j);
    let w = tj.apply(x);
    let a = tj.apply_inverse(x);
    let b = tj.apply(w);
    let img = &mut images[j.index()];
    img[a] = u;
    img[u] = b;
    img[x] = w;
    img[w] = x;

    let z = t.tau(k).apply(x);
    let img = &mut images[k.index()];
    img[x] = u;
    img[u] = z;

    let y = t.tau(l).apply_inverse(w);
    let img = &mut images[l.index()];
    img[y] = u;
    img[u] = w;

    let child = TauTriple::from_images(images)?;
    debug_assert!(child.is_bitrade(), "expansion at {site} broke the bitrade axioms");
    Ok(child)
}

/// Shape test for a contraction at `site`, without the axiom check: the
/// `u`-cycles of `τk` and `τl` have length at least 3 and `(x, w)` is a
/// 2-cycle of `τj`, where `x = uτk⁻¹` and `w = uτl`.
fn contraction_shape(t: &TauTriple, site: SlideSite) -> Option<(usize, usize)> {
    let SlideSite { dir: j, point: u } = site;
    if u >= t.n_points() {
        return None;
    }
    let (k, l) = (j.next(), j.next().next());
    let (tk, tl) = (t.tau(k), t.tau(l));
    if tk.cycle_len_at(u) < 3 || tl.cycle_len_at(u) < 3 {
        return None;
    }
    let x = tk.apply_inverse(u);
    let w = tl.apply(u);
    let tj = t.tau(j);
    if x == w || tj.apply(x) != w || tj.apply(w) != x {
        return None;
    }
    Some((x, w))
}

/// Attempts the contraction; `None` unless the shape fits and the result is
/// a transitive bitrade.
pub fn try_contract(t: &TauTriple, site: SlideSite) -> Option<TauTriple> {
    let (x, w) = contraction_shape(t, site)?;
    let SlideSite { dir: j, point: u } = site;
    let (k, l) = (j.next(), j.next().next());
    let mut images: [Vec<usize>; 3] = [0, 1, 2].map(|i| t.perms()[i].images().to_vec());

    let tj = t.tau(j);
    let (a, b) = (tj.apply_inverse(u), tj.apply(u));
    let img = &mut images[j.index()];
    img[a] = x;
    img[x] = w;
    img[w] = b;

    let z = t.tau(k).apply(u);
    images[k.index()][x] = z;

    let y = t.tau(l).apply_inverse(u);
    images[l.index()][y] = w;

    // drop u and close the gap
    let shift = |p: usize| if p > u { p - 1 } else { p };
    let images = images.map(|img| {
        img.iter()
            .enumerate()
            .filter(|&(p, _)| p != u)
            .map(|(_, &q)| shift(q))
            .collect::<Vec<_>>()
    });
    let parent = TauTriple::from_images(images).ok()?;
    (parent.is_bitrade() && parent.is_transitive()).then_some(parent)
}

/// All sites at which a contraction yields a valid bitrade, sorted by
/// `(j, u)`.
pub fn contraction_sites(t: &TauTriple) -> Vec<SlideSite> {
    Direction::ALL
        .into_iter()
        .flat_map(|dir| (0..t.n_points()).map(move |point| SlideSite { dir, point }))
        .filter(|&s| try_contract(t, s).is_some())
        .collect()
}

/// Whether any contraction is possible; stops at the first one.
pub fn has_contraction_site(t: &TauTriple) -> bool {
    Direction::ALL
        .into_iter()
        .flat_map(|dir| (0..t.n_points()).map(move |point| SlideSite { dir, point }))
        .any(|s| try_contract(t, s).is_some())
}

/// Contracts at `site`, removing `u` and renumbering the points above it
/// down by one.
pub fn slide_contract(t: &TauTriple, site: SlideSite) -> Result<TauTriple, Error> {
    try_contract(t, site).ok_or(Error::InvalidSite { site })
}
