//! Finite permutations on dense points `0..n`, stored with their cycle
//! decomposition.
//!
//! Permutations act on the right: `x.then(p).then(q)` applies `p` first.
//! Cycles are kept in normal form: each cycle is rotated so its smallest
//! point comes first and the cycles are sorted by that point.

use std::fmt;

use crate::error::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Perm {
    succ: Vec<usize>,
    pred: Vec<usize>,
    cycle_of: Vec<usize>,
    cycles: Vec<Vec<usize>>,
}

impl Perm {
    /// Builds a permutation from its image table, `images[x] = x·π`.
    pub fn from_images(images: Vec<usize>) -> Result<Self, Error> {
        let n = images.len();
        let mut pred = vec![usize::MAX; n];
        for (x, &y) in images.iter().enumerate() {
            if y >= n {
                return Err(Error::NotAPermutation(format!(
                    "image {y} of point {x} is out of range 0..{n}"
                )));
            }
            if pred[y] != usize::MAX {
                return Err(Error::NotAPermutation(format!(
                    "point {y} is the image of both {} and {x}",
                    pred[y]
                )));
            }
            pred[y] = x;
        }
        let mut cycle_of = vec![usize::MAX; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if cycle_of[start] != usize::MAX {
                continue;
            }
            let id = cycles.len();
            let mut cycle = Vec::new();
            let mut p = start;
            loop {
                cycle_of[p] = id;
                cycle.push(p);
                p = images[p];
                if p == start {
                    break;
                }
            }
            cycles.push(cycle);
        }
        Ok(Perm {
            succ: images,
            pred,
            cycle_of,
            cycles,
        })
    }

    /// Builds a permutation on `0..n` from disjoint cycles. Points not
    /// mentioned are fixed.
    pub fn from_cycles<C: AsRef<[usize]>>(n: usize, cycles: &[C]) -> Result<Self, Error> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut seen = vec![false; n];
        for cycle in cycles {
            let cycle = cycle.as_ref();
            for (i, &p) in cycle.iter().enumerate() {
                if p >= n {
                    return Err(Error::NotAPermutation(format!(
                        "cycle point {p} is out of range 0..{n}"
                    )));
                }
                if seen[p] {
                    return Err(Error::NotAPermutation(format!(
                        "point {p} appears in more than one cycle position"
                    )));
                }
                seen[p] = true;
                images[p] = cycle[(i + 1) % cycle.len()];
            }
        }
        Perm::from_images(images)
    }

    pub fn identity(n: usize) -> Self {
        Perm::from_images((0..n).collect()).expect("identity is a permutation")
    }

    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.succ[x]
    }

    #[inline]
    pub fn apply_inverse(&self, x: usize) -> usize {
        self.pred[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.succ
    }

    /// Id of the cycle through `x`, an index into [`Perm::cycles`].
    #[inline]
    pub fn cycle_id(&self, x: usize) -> usize {
        self.cycle_of[x]
    }

    #[inline]
    pub fn cycle(&self, id: usize) -> &[usize] {
        &self.cycles[id]
    }

    #[inline]
    pub fn cycle_at(&self, x: usize) -> &[usize] {
        &self.cycles[self.cycle_of[x]]
    }

    #[inline]
    pub fn cycle_len_at(&self, x: usize) -> usize {
        self.cycle_at(x).len()
    }

    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    pub fn num_cycles(&self) -> usize {
        self.cycles.len()
    }

    /// First fixed point, if any.
    pub fn fixed_point(&self) -> Option<usize> {
        (0..self.len()).find(|&x| self.succ[x] == x)
    }

    pub fn inverse(&self) -> Perm {
        Perm::from_images(self.pred.clone()).expect("inverse of a permutation")
    }

    /// The product `self · other`: apply `self`, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        assert_eq!(self.len(), other.len(), "degree mismatch");
        Perm::from_images(self.succ.iter().map(|&y| other.succ[y]).collect())
            .expect("product of permutations")
    }

    /// Conjugate by the relabelling `theta` (`theta[old] = new`), so that
    /// `(x·theta)·self^theta = (x·self)·theta`.
    pub fn conjugate(&self, theta: &[usize]) -> Perm {
        let mut images = vec![0; self.len()];
        for (x, &y) in self.succ.iter().enumerate() {
            images[theta[x]] = theta[y];
        }
        Perm::from_images(images).expect("conjugate of a permutation")
    }
}

/// Cycle notation, e.g. `(0 1 2)(3 5 4)`. Fixed points print as 1-cycles.
impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for cycle in &self.cycles {
            f.write_str("(")?;
            for (i, p) in cycle.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Parses cycle notation into a list of cycles. Whitespace between cycles is
/// ignored; an empty string is the empty list. Errors carry the 1-based
/// column of the offending character.
pub(crate) fn parse_cycles(text: &str) -> Result<Vec<Vec<usize>>, (usize, String)> {
    let mut cycles = Vec::new();
    let mut current: Option<Vec<usize>> = None;
    let mut number: Option<(usize, usize)> = None;
    let flush = |number: &mut Option<(usize, usize)>, current: &mut Option<Vec<usize>>| {
        if let Some((value, _)) = number.take() {
            current.as_mut().expect("number inside a cycle").push(value);
        }
    };
    for (i, ch) in text.char_indices() {
        let col = i + 1;
        match ch {
            '(' => {
                if current.is_some() {
                    return Err((col, "nested '('".into()));
                }
                current = Some(Vec::new());
            }
            ')' => {
                if current.is_none() {
                    return Err((col, "unmatched ')'".into()));
                }
                flush(&mut number, &mut current);
                let cycle = current.take().unwrap();
                if cycle.is_empty() {
                    return Err((col, "empty cycle".into()));
                }
                cycles.push(cycle);
            }
            '0'..='9' => {
                if current.is_none() {
                    return Err((col, "point outside a cycle".into()));
                }
                let digit = ch as usize - '0' as usize;
                let (value, start) = number.unwrap_or((0, col));
                let value = value
                    .checked_mul(10)
                    .and_then(|v| v.checked_add(digit))
                    .ok_or((start, "point label overflows".to_string()))?;
                number = Some((value, start));
            }
            c if c.is_whitespace() || c == ',' => flush(&mut number, &mut current),
            other => return Err((col, format!("unexpected character {other:?}"))),
        }
    }
    if current.is_some() {
        return Err((text.len() + 1, "unterminated cycle".into()));
    }
    Ok(cycles)
}
