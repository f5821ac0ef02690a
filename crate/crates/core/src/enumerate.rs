//! Isomorph-free enumeration of spherical bitrades by canonical
//! augmentation.
//!
//! Every bicyclic root class is seeded once. From a node, the children are
//! the expansions at one representative of each automorphism orbit of
//! expansion sites; a child is kept when the contraction undoing its
//! expansion lies in the orbit of its canonical contraction site. After a
//! kept child `Z`, the inverse `Z⁻¹` is visited as well when it admits no
//! contraction and is not isomorphic to `Z`.
//!
//! The search tree is cut at a fixed depth into [`SearchTask`]s that are
//! independent of each other; their censuses are summed, so the result does
//! not depend on the number of workers or the order in which tasks finish.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::canon::{accepts, decode, Canonical, CanonicalForm};
use crate::error::Error;
use crate::moves::{expansion_sites, has_contraction_site, slide_expand, SlideSite};
use crate::triple::{Direction, TauTriple};

/// Smallest bitrade size.
pub const MIN_SIZE: usize = 4;

/// Number of τ-isomorphism classes per size, and optionally the classes'
/// canonical forms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CensusTable {
    counts: BTreeMap<usize, u64>,
    forms: Option<BTreeMap<usize, Vec<CanonicalForm>>>,
}

impl CensusTable {
    /// An all-zero table covering sizes `4..=max_size`.
    pub fn new(max_size: usize, retain_forms: bool) -> Self {
        CensusTable {
            counts: (MIN_SIZE..=max_size).map(|s| (s, 0)).collect(),
            forms: retain_forms.then(BTreeMap::new),
        }
    }

    pub fn record(&mut self, size: usize, form: &CanonicalForm) {
        *self.counts.entry(size).or_default() += 1;
        if let Some(forms) = &mut self.forms {
            forms.entry(size).or_default().push(form.clone());
        }
    }

    pub fn add_count(&mut self, size: usize, count: u64) {
        *self.counts.entry(size).or_default() += count;
    }

    pub fn count(&self, size: usize) -> u64 {
        self.counts.get(&size).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &BTreeMap<usize, u64> {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn forms(&self) -> Option<&BTreeMap<usize, Vec<CanonicalForm>>> {
        self.forms.as_ref()
    }

    /// Adds `other` into `self`. Retained forms are kept sorted.
    pub fn merge(&mut self, other: &CensusTable) {
        for (&s, &c) in &other.counts {
            self.add_count(s, c);
        }
        if let (Some(mine), Some(theirs)) = (&mut self.forms, &other.forms) {
            for (&s, fs) in theirs {
                let v = mine.entry(s).or_default();
                v.extend(fs.iter().cloned());
                v.sort_unstable();
            }
        }
    }

    /// Sorts retained forms by size and code.
    pub fn normalize(&mut self) {
        if let Some(forms) = &mut self.forms {
            for v in forms.values_mut() {
                v.sort_unstable();
            }
        }
    }

    /// The form stream: one `size<TAB>code` line per class, ascending.
    pub fn forms_text(&self) -> String {
        let mut out = String::new();
        for (s, fs) in self.forms.iter().flatten() {
            for f in fs {
                out.push_str(&format!("{s}\t{f}\n"));
            }
        }
        out
    }
}

/// One `size<TAB>count` line per size, ascending.
impl fmt::Display for CensusTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (s, c) in &self.counts {
            writeln!(f, "{s}\t{c}")?;
        }
        Ok(())
    }
}

impl FromStr for CensusTable {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self, Error> {
        let mut table = CensusTable::default();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (s, c) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(i + 1, 1, "expected `size<TAB>count`"))?;
            let s = s
                .parse()
                .map_err(|e| Error::parse(i + 1, 1, format!("bad size: {e}")))?;
            let c = c
                .parse()
                .map_err(|e| Error::parse(i + 1, line.len() - c.len() + 1, format!("bad count: {e}")))?;
            table.add_count(s, c);
        }
        Ok(table)
    }
}

/// Bicyclic triples of the given even size, one per τ-isomorphism class,
/// in canonical labels and sorted by canonical form.
///
/// `τⱼ = (x₀ … x_{n−1})(x′_{n−1} … x′₀)` with `τ_{j+1}` pairing `xᵢ` with
/// `x′ᵢ`. For `τ_{j−1}` both pairings `(x_{i+1}, x′ᵢ)` and `(xᵢ, x′_{i+1})`
/// are tried and only spherical results are kept.
pub fn bicyclic_roots(size: usize) -> Result<Vec<TauTriple>, Error> {
    if size < MIN_SIZE || !size.is_multiple_of(2) {
        return Err(Error::InvalidSize(size));
    }
    let n = size / 2;
    let x = |i: usize| i % n;
    let xp = |i: usize| n + i % n;
    let mut forms = Vec::new();
    for j in Direction::ALL {
        for shift_primed in [false, true] {
            let mut images: [Vec<usize>; 3] = [0, 1, 2].map(|_| vec![0; size]);
            let cyc = &mut images[j.index()];
            for i in 0..n {
                cyc[x(i)] = x(i + 1);
                cyc[xp(i + 1)] = xp(i);
            }
            let pair = &mut images[j.next().index()];
            for i in 0..n {
                pair[x(i)] = xp(i);
                pair[xp(i)] = x(i);
            }
            let pair = &mut images[j.prev().index()];
            for i in 0..n {
                let (a, b) = if shift_primed {
                    (x(i), xp(i + 1))
                } else {
                    (x(i + 1), xp(i))
                };
                pair[a] = b;
                pair[b] = a;
            }
            let t = TauTriple::from_images(images)?;
            if t.is_spherical() {
                forms.push(Canonical::of(&t).form);
            }
        }
    }
    forms.sort_unstable();
    forms.dedup();
    forms
        .iter()
        .map(decode)
        .collect::<Result<Vec<_>, _>>()
}

/// Expansions at one representative (the least point) of each
/// automorphism orbit of expansion sites. Each child comes with the
/// contraction site that undoes it.
pub fn children(t: &TauTriple) -> Vec<(TauTriple, SlideSite)> {
    children_with(t, &Canonical::of(t))
        .into_iter()
        .map(|(_, child, undo)| (child, undo))
        .collect()
}

/// `(expansion site, child, undo site)` per orbit representative.
fn children_with(t: &TauTriple, canon: &Canonical) -> Vec<(SlideSite, TauTriple, SlideSite)> {
    let u = t.n_points();
    expansion_sites(t)
        .into_iter()
        .filter(|s| canon.orbit_min(s.point) == s.point)
        .map(|s| {
            let child = slide_expand(t, s).expect("listed expansion site");
            (s, child, SlideSite::new(s.dir, u))
        })
        .collect()
}

/// One edge of the search tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    Expand(SlideSite),
    Inverse,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Expand(s) => write!(f, "{s}"),
            Step::Inverse => f.write_str("inv"),
        }
    }
}

impl FromStr for Step {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "inv" {
            Ok(Step::Inverse)
        } else {
            s.parse().map(Step::Expand)
        }
    }
}

struct Node {
    triple: TauTriple,
    canon: Canonical,
}

impl Node {
    fn new(triple: TauTriple) -> Self {
        let canon = Canonical::of(&triple);
        Node { triple, canon }
    }

    /// Accepted successors in search order, each with the steps leading to
    /// it from `self`.
    fn successors(&self) -> Vec<(Step, Option<Step>, Node)> {
        let mut out = Vec::new();
        for (site, child, undo) in children_with(&self.triple, &self.canon) {
            let cc = Canonical::of(&child);
            if !accepts(&child, &cc, undo).expect("an expansion can always be undone") {
                continue;
            }
            let inv = child.inverse();
            let inv_node = if has_contraction_site(&inv) {
                None
            } else {
                let ic = Canonical::of(&inv);
                (ic.form != cc.form).then_some(Node {
                    triple: inv,
                    canon: ic,
                })
            };
            let expand = Step::Expand(site);
            out.push((expand, None, Node {
                triple: child,
                canon: cc,
            }));
            if let Some(n) = inv_node {
                out.push((expand, Some(Step::Inverse), n));
            }
        }
        out
    }
}

fn walk<F: FnMut(&TauTriple, &Canonical)>(node: &Node, max_size: usize, visit: &mut F) {
    visit(&node.triple, &node.canon);
    if node.triple.n_points() >= max_size {
        return;
    }
    for (_, _, next) in node.successors() {
        walk(&next, max_size, visit);
    }
}

/// Depth-first canonical-augmentation search below `root`, reporting every
/// visited node of size at most `max_size` exactly once.
pub fn canaug_spherical<F>(root: &TauTriple, max_size: usize, mut visitor: F)
where
    F: FnMut(&TauTriple, &Canonical),
{
    walk(&Node::new(root.clone()), max_size, &mut visitor);
}

/// A subtree of the search: a root class and the steps from the root's
/// canonical labelling to the subtree's entry node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchTask {
    pub root: CanonicalForm,
    pub path: Vec<Step>,
    pub max_size: usize,
}

impl SearchTask {
    /// Rebuilds the entry node.
    pub fn replay(&self) -> Result<TauTriple, Error> {
        let mut t = decode(&self.root)?;
        for step in &self.path {
            t = match step {
                Step::Expand(s) => slide_expand(&t, *s)?,
                Step::Inverse => t.inverse(),
            };
        }
        Ok(t)
    }

    /// Census of the subtree below the entry node.
    pub fn run(&self, retain_forms: bool) -> Result<CensusTable, Error> {
        let entry = self.replay()?;
        let mut table = CensusTable::new(self.max_size, retain_forms);
        canaug_spherical(&entry, self.max_size, |t, c| table.record(t.n_points(), &c.form));
        table.normalize();
        Ok(table)
    }
}

/// `max<TAB>root code<TAB>steps`, with `-` for an empty path.
impl fmt::Display for SearchTask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t", self.max_size, self.root)?;
        if self.path.is_empty() {
            return f.write_str("-");
        }
        for (i, s) in self.path.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for SearchTask {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self, Error> {
        let fields: Vec<&str> = line.trim_end_matches(['\r', '\n']).split('\t').collect();
        let [max, root, path] = fields[..] else {
            return Err(Error::parse(1, 1, "expected three tab-separated fields"));
        };
        let max_size = max
            .parse()
            .map_err(|e| Error::parse(1, 1, format!("bad max size: {e}")))?;
        let col = max.len() + root.len() + 3;
        let root: CanonicalForm = root.parse()?;
        let path = if path == "-" {
            Vec::new()
        } else {
            path.split_whitespace()
                .map(|s| s.parse::<Step>().map_err(|m| Error::parse(1, col, m)))
                .collect::<Result<_, _>>()?
        };
        Ok(SearchTask {
            root,
            path,
            max_size,
        })
    }
}

/// The top of the search tree above the split depth, counted directly, and
/// one task per node at the split depth.
#[derive(Clone, Debug)]
pub struct TaskSplit {
    pub prefix: CensusTable,
    pub tasks: Vec<SearchTask>,
}

/// All bicyclic root classes of even size up to `max_size`.
pub fn all_roots(max_size: usize) -> Vec<TauTriple> {
    (MIN_SIZE..=max_size)
        .step_by(2)
        .flat_map(|s| bicyclic_roots(s).expect("even size >= 4"))
        .collect()
}

/// Walks the tree to `split_depth` expansions below the roots. Nodes above
/// that depth go into the prefix census; nodes at it become tasks.
pub fn split_tasks(max_size: usize, split_depth: usize, retain_forms: bool) -> TaskSplit {
    let mut split = TaskSplit {
        prefix: CensusTable::new(max_size, retain_forms),
        tasks: Vec::new(),
    };
    for root in all_roots(max_size) {
        let node = Node::new(root);
        let code = node.canon.form.clone();
        split_below(&node, &code, &mut Vec::new(), 0, max_size, split_depth, &mut split);
    }
    split.prefix.normalize();
    split
}

fn split_below(
    node: &Node,
    root: &CanonicalForm,
    path: &mut Vec<Step>,
    depth: usize,
    max_size: usize,
    split_depth: usize,
    out: &mut TaskSplit,
) {
    if depth == split_depth {
        out.tasks.push(SearchTask {
            root: root.clone(),
            path: path.clone(),
            max_size,
        });
        return;
    }
    out.prefix.record(node.triple.n_points(), &node.canon.form);
    if node.triple.n_points() >= max_size {
        return;
    }
    for (step, extra, next) in node.successors() {
        let len = path.len();
        path.push(step);
        path.extend(extra);
        split_below(&next, root, path, depth + 1, max_size, split_depth, out);
        path.truncate(len);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerateConfig {
    pub max_size: usize,
    pub workers: usize,
    pub split_depth: usize,
    pub retain_forms: bool,
}

impl EnumerateConfig {
    pub fn new(max_size: usize) -> Self {
        EnumerateConfig {
            max_size,
            workers: 1,
            split_depth: 0,
            retain_forms: false,
        }
    }
}

/// Runs `tasks` on one thread. `on_done(i, census)` fires as task `i`
/// finishes.
pub fn run_tasks_sequential<F>(
    tasks: &[SearchTask],
    retain_forms: bool,
    on_done: F,
) -> Result<Vec<CensusTable>, Error>
where
    F: Fn(usize, &CensusTable),
{
    tasks
        .iter()
        .enumerate()
        .map(|(i, task)| {
            let c = task.run(retain_forms)?;
            on_done(i, &c);
            Ok(c)
        })
        .collect()
}

/// Runs `tasks` on a pool of `workers` threads. Results come back in task
/// order regardless of completion order.
#[cfg(feature = "parallel")]
pub fn run_tasks_parallel<F>(
    tasks: &[SearchTask],
    workers: usize,
    retain_forms: bool,
    on_done: F,
) -> Result<Vec<CensusTable>, Error>
where
    F: Fn(usize, &CensusTable) + Sync + Send,
{
    use rayon::prelude::*;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("failed to start worker threads");
    pool.install(|| {
        tasks
            .par_iter()
            .enumerate()
            .map(|(i, task)| {
                let c = task.run(retain_forms)?;
                on_done(i, &c);
                Ok(c)
            })
            .collect()
    })
}

/// Dispatches to the thread pool when built with `parallel` and more than
/// one worker is requested.
pub fn run_tasks<F>(
    tasks: &[SearchTask],
    workers: usize,
    retain_forms: bool,
    on_done: F,
) -> Result<Vec<CensusTable>, Error>
where
    F: Fn(usize, &CensusTable) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if workers > 1 {
        return run_tasks_parallel(tasks, workers, retain_forms, on_done);
    }
    let _ = workers;
    run_tasks_sequential(tasks, retain_forms, on_done)
}

pub fn enumerate(config: &EnumerateConfig) -> CensusTable {
    let split = split_tasks(config.max_size, config.split_depth, config.retain_forms);
    let parts = run_tasks(&split.tasks, config.workers, config.retain_forms, |_, _| {})
        .expect("tasks from split_tasks replay");
    let mut census = split.prefix;
    for p in &parts {
        census.merge(p);
    }
    census.normalize();
    census
}

/// Census of τ-isomorphism classes of spherical bitrades of every size
/// `4..=max_size`.
pub fn enumerate_all(max_size: usize, workers: usize, split_depth: usize) -> CensusTable {
    enumerate(&EnumerateConfig {
        max_size,
        workers,
        split_depth,
        retain_forms: false,
    })
}
