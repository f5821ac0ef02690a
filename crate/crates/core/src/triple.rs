//! The permutation representation `[τ₁, τ₂, τ₃]` of a separated bitrade.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::perm::{parse_cycles, Perm};

/// One of the three directions (rows, columns, symbols).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    One,
    Two,
    Three,
}

impl Direction {
    pub const ALL: [Direction; 3] = [Direction::One, Direction::Two, Direction::Three];

    /// Zero-based index, used to address `TauTriple::tau`.
    #[inline]
    pub fn index(self) -> usize {
        match self {
            Direction::One => 0,
            Direction::Two => 1,
            Direction::Three => 2,
        }
    }

    /// The label 1, 2 or 3.
    pub fn number(self) -> usize {
        self.index() + 1
    }

    pub fn from_number(j: usize) -> Option<Self> {
        match j {
            1 => Some(Direction::One),
            2 => Some(Direction::Two),
            3 => Some(Direction::Three),
            _ => None,
        }
    }

    fn from_index(i: usize) -> Self {
        Direction::ALL[i % 3]
    }

    /// `j + 1` taken cyclically on {1, 2, 3}.
    #[inline]
    pub fn next(self) -> Self {
        Direction::from_index(self.index() + 1)
    }

    /// `j − 1` taken cyclically on {1, 2, 3}.
    #[inline]
    pub fn prev(self) -> Self {
        Direction::from_index(self.index() + 2)
    }

    /// The two other directions in increasing order.
    #[inline]
    pub fn others(self) -> [Direction; 2] {
        match self {
            Direction::One => [Direction::Two, Direction::Three],
            Direction::Two => [Direction::One, Direction::Three],
            Direction::Three => [Direction::One, Direction::Two],
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// Three permutations of the points `0..n_points`.
///
/// Construction only checks that the three permutations share a degree. The
/// bitrade axioms are checked by [`TauTriple::validate`], so malformed
/// triples can still be represented and reported on.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TauTriple {
    tau: [Perm; 3],
}

impl TauTriple {
    pub fn new(tau: [Perm; 3]) -> Result<Self, Error> {
        let [a, b, c] = &tau;
        if a.len() != b.len() || b.len() != c.len() {
            return Err(Error::DegreeMismatch(a.len(), b.len(), c.len()));
        }
        Ok(TauTriple { tau })
    }

    pub fn from_cycles<C: AsRef<[usize]>>(n: usize, cycles: [&[C]; 3]) -> Result<Self, Error> {
        TauTriple::new([
            Perm::from_cycles(n, cycles[0])?,
            Perm::from_cycles(n, cycles[1])?,
            Perm::from_cycles(n, cycles[2])?,
        ])
    }

    pub(crate) fn from_images(images: [Vec<usize>; 3]) -> Result<Self, Error> {
        let [a, b, c] = images;
        TauTriple::new([
            Perm::from_images(a)?,
            Perm::from_images(b)?,
            Perm::from_images(c)?,
        ])
    }

    /// `|Γ|`.
    #[inline]
    pub fn n_points(&self) -> usize {
        self.tau[0].len()
    }

    #[inline]
    pub fn tau(&self, d: Direction) -> &Perm {
        &self.tau[d.index()]
    }

    pub fn perms(&self) -> &[Perm; 3] {
        &self.tau
    }

    /// Total number of cycles over all three permutations.
    pub fn order(&self) -> usize {
        self.tau.iter().map(Perm::num_cycles).sum()
    }

    /// Some `τⱼ` has exactly two cycles.
    pub fn is_bicyclic(&self) -> bool {
        self.tau.iter().any(|p| p.num_cycles() == 2)
    }

    /// Genus from `order = size + 2 − 2g`.
    pub fn genus(&self) -> Result<u32, Error> {
        genus_of(self.n_points(), self.order()).ok_or(Error::NonIntegralGenus {
            size: self.n_points(),
            order: self.order(),
        })
    }

    pub fn validate(&self) -> ValidationReport {
        ValidationReport {
            t1: self.check_product(),
            t2: self.check_cycle_intersections(),
            t3: self.check_fixed_point_free(),
            transitive: self.is_transitive(),
            genus: genus_of(self.n_points(), self.order()),
        }
    }

    /// (T1)–(T3) hold. Cheaper than a full [`validate`](Self::validate).
    pub fn is_bitrade(&self) -> bool {
        self.check_fixed_point_free().is_pass()
            && self.check_product().is_pass()
            && self.check_cycle_intersections().is_pass()
    }

    /// A valid, transitive, genus-0 triple.
    pub fn is_spherical(&self) -> bool {
        self.validate().is_spherical()
    }

    fn check_fixed_point_free(&self) -> AxiomStatus {
        self.tau
            .iter()
            .filter_map(Perm::fixed_point)
            .min()
            .map_or(AxiomStatus::Pass, |point| AxiomStatus::Fail { point })
    }

    fn check_product(&self) -> AxiomStatus {
        let [a, b, c] = &self.tau;
        (0..self.n_points())
            .find(|&x| c.apply(b.apply(a.apply(x))) != x)
            .map_or(AxiomStatus::Pass, |point| AxiomStatus::Fail { point })
    }

    fn check_cycle_intersections(&self) -> AxiomStatus {
        let mut witness: Option<usize> = None;
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let (pi, pj) = (&self.tau[i], &self.tau[j]);
            // stamp[c] = id of the last τᵢ cycle seen meeting τⱼ cycle c
            let mut stamp = vec![usize::MAX; pj.num_cycles()];
            for (ci, cycle) in pi.cycles().iter().enumerate() {
                for &p in cycle {
                    let cj = pj.cycle_id(p);
                    if stamp[cj] == ci {
                        witness = Some(witness.map_or(p, |w| w.min(p)));
                        break;
                    }
                    stamp[cj] = ci;
                }
            }
        }
        witness.map_or(AxiomStatus::Pass, |point| AxiomStatus::Fail { point })
    }

    /// `⟨τ₁, τ₂, τ₃⟩` has a single orbit on the points.
    pub fn is_transitive(&self) -> bool {
        let n = self.n_points();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = queue.pop_front() {
            for p in &self.tau {
                let y = p.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    queue.push_back(y);
                }
            }
        }
        count == n
    }

    /// The inverse bitrade `[τ₁⁻¹, τ₂⁻¹, τ₂τ₁]`, on the same points.
    pub fn inverse(&self) -> TauTriple {
        let [a, b, _] = &self.tau;
        TauTriple {
            tau: [a.inverse(), b.inverse(), b.then(a)],
        }
    }

    /// The τ-isomorphic copy obtained by renaming each point `x` to
    /// `theta[x]`.
    pub fn relabel(&self, theta: &[usize]) -> TauTriple {
        assert_eq!(theta.len(), self.n_points(), "relabelling has wrong length");
        TauTriple {
            tau: [
                self.tau[0].conjugate(theta),
                self.tau[1].conjugate(theta),
                self.tau[2].conjugate(theta),
            ],
        }
    }
}

fn genus_of(size: usize, order: usize) -> Option<u32> {
    let twice = (size + 2).checked_sub(order)?;
    (twice % 2 == 0).then_some((twice / 2) as u32)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AxiomStatus {
    Pass,
    /// Fails, with the smallest witness point found.
    Fail { point: usize },
}

impl AxiomStatus {
    pub fn is_pass(self) -> bool {
        self == AxiomStatus::Pass
    }
}

impl fmt::Display for AxiomStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomStatus::Pass => f.write_str("pass"),
            AxiomStatus::Fail { point } => write!(f, "fail at point {point}"),
        }
    }
}

/// Outcome of checking (T1)–(T4) and the genus of a triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    /// `τ₁τ₂τ₃ = 1`
    pub t1: AxiomStatus,
    /// cycles from different permutations meet in at most one point
    pub t2: AxiomStatus,
    /// fixed-point free
    pub t3: AxiomStatus,
    pub transitive: bool,
    /// `None` when `size − order + 2` is odd or negative.
    pub genus: Option<u32>,
}

impl ValidationReport {
    pub fn is_bitrade(&self) -> bool {
        self.t1.is_pass() && self.t2.is_pass() && self.t3.is_pass()
    }

    pub fn is_spherical(&self) -> bool {
        self.is_bitrade() && self.transitive && self.genus == Some(0)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "T1 {}", self.t1)?;
        writeln!(f, "T2 {}", self.t2)?;
        writeln!(f, "T3 {}", self.t3)?;
        writeln!(f, "T4 {}", if self.transitive { "pass" } else { "fail" })?;
        match self.genus {
            Some(g) => writeln!(f, "genus {g}"),
            None => writeln!(f, "genus undefined"),
        }
    }
}

/// The `.tau` text format:
///
/// ```text
/// size 6
/// t1 (0 1 2)(3 5 4)
/// t2 (0 3)(1 4)(2 5)
/// t3 (0 4)(1 5)(2 3)
/// ```
impl fmt::Display for TauTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "size {}", self.n_points())?;
        for d in Direction::ALL {
            writeln!(f, "t{} {}", d, self.tau(d))?;
        }
        Ok(())
    }
}

impl FromStr for TauTriple {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let mut size: Option<usize> = None;
        let mut cycles: [Option<Vec<Vec<usize>>>; 3] = [None, None, None];
        for (idx, raw) in s.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim_end();
            let body = line.trim_start();
            if body.is_empty() || body.starts_with('#') {
                continue;
            }
            let indent = line.len() - body.len();
            let (key, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
            let rest_col = indent + key.len() + 2;
            match key {
                "size" => {
                    if size.is_some() {
                        return Err(Error::parse(line_no, indent + 1, "duplicate size line"));
                    }
                    let n = rest.trim().parse::<usize>().map_err(|e| {
                        Error::parse(line_no, rest_col, format!("bad size: {e}"))
                    })?;
                    size = Some(n);
                }
                "t1" | "t2" | "t3" => {
                    let i = key.as_bytes()[1] as usize - b'1' as usize;
                    if size.is_none() {
                        return Err(Error::parse(line_no, 1, "expected `size N` first"));
                    }
                    if cycles[i].is_some() {
                        return Err(Error::parse(line_no, indent + 1, format!("duplicate {key}")));
                    }
                    let parsed = parse_cycles(rest)
                        .map_err(|(col, msg)| Error::parse(line_no, rest_col + col - 1, msg))?;
                    cycles[i] = Some(parsed);
                }
                other => {
                    return Err(Error::parse(
                        line_no,
                        indent + 1,
                        format!("unexpected token {other:?}"),
                    ))
                }
            }
        }
        let n = size.ok_or_else(|| Error::parse(1, 1, "missing `size N` line"))?;
        let mut perms = Vec::with_capacity(3);
        for (i, c) in cycles.into_iter().enumerate() {
            let c = c.ok_or_else(|| Error::parse(1, 1, format!("missing t{} line", i + 1)))?;
            perms.push(Perm::from_cycles(n, &c)?);
        }
        let [a, b, c]: [Perm; 3] = perms.try_into().expect("three permutations");
        TauTriple::new([a, b, c])
    }
}
