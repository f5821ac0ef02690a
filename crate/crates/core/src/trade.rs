//! The array form `(T⊛, T⊚)` of a bitrade and conversion to and from
//! [`TauTriple`].

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::triple::{Direction, TauTriple};

/// A `(row, column, symbol)` entry.
pub type Entry = [usize; 3];

/// Two sets of entries. Nothing is checked on construction; see
/// [`from_pair`] for the bitrade conditions.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TradePair {
    pub entries_a: BTreeSet<Entry>,
    pub entries_b: BTreeSet<Entry>,
}

impl TradePair {
    pub fn new(
        entries_a: impl IntoIterator<Item = Entry>,
        entries_b: impl IntoIterator<Item = Entry>,
    ) -> Self {
        TradePair {
            entries_a: entries_a.into_iter().collect(),
            entries_b: entries_b.into_iter().collect(),
        }
    }

    /// Swaps the two partial latin squares.
    pub fn swapped(&self) -> Self {
        TradePair {
            entries_a: self.entries_b.clone(),
            entries_b: self.entries_a.clone(),
        }
    }
}

// Coordinates shared by the two entries related by β_r, r = 1, 2, 3.
const KEEP: [[usize; 2]; 3] = [[1, 2], [0, 2], [0, 1]];

fn key(e: &Entry, keep: [usize; 2]) -> (usize, usize) {
    (e[keep[0]], e[keep[1]])
}

/// Index of a set of entries by a pair of coordinates. Fails if two entries
/// agree on that pair.
fn index_by(
    entries: &[Entry],
    keep: [usize; 2],
    side: &str,
) -> Result<HashMap<(usize, usize), usize>, Error> {
    let mut map = HashMap::with_capacity(entries.len());
    for (i, e) in entries.iter().enumerate() {
        if let Some(j) = map.insert(key(e, keep), i) {
            return Err(Error::NotABitrade(format!(
                "{side} entries {:?} and {:?} agree in coordinates {} and {}",
                entries[j],
                e,
                keep[0] + 1,
                keep[1] + 1
            )));
        }
    }
    Ok(map)
}

/// Converts an array-form bitrade into its permutation representation.
///
/// Points are the entries of `T⊛` numbered in lexicographic order, and
/// `τ₁ = β₂⁻¹β₃`, `τ₂ = β₃⁻¹β₁`, `τ₃ = β₁⁻¹β₂`.
pub fn from_pair(pair: &TradePair) -> Result<TauTriple, Error> {
    if let Some(e) = pair.entries_a.intersection(&pair.entries_b).next() {
        return Err(Error::NotABitrade(format!("entry {e:?} lies in both squares")));
    }
    if pair.entries_a.len() != pair.entries_b.len() {
        return Err(Error::NotABitrade(format!(
            "squares have {} and {} entries",
            pair.entries_a.len(),
            pair.entries_b.len()
        )));
    }
    let a: Vec<Entry> = pair.entries_a.iter().copied().collect();
    let b: Vec<Entry> = pair.entries_b.iter().copied().collect();

    let mut a_by = Vec::with_capacity(3);
    let mut b_by = Vec::with_capacity(3);
    for keep in KEEP {
        a_by.push(index_by(&a, keep, "A")?);
        b_by.push(index_by(&b, keep, "B")?);
    }
    // (R2) and (R3): every entry has a partner in the other square for each
    // pair of coordinates. Uniqueness is already given by the indices.
    for r in 0..3 {
        for e in &a {
            if !b_by[r].contains_key(&key(e, KEEP[r])) {
                return Err(missing_partner("A", e, KEEP[r]));
            }
        }
        for e in &b {
            if !a_by[r].contains_key(&key(e, KEEP[r])) {
                return Err(missing_partner("B", e, KEEP[r]));
            }
        }
    }

    // x β_r⁻¹ then β_s: from A to the B entry sharing KEEP[r], then to the A
    // entry sharing KEEP[s] with it.
    let compose = |r: usize, s: usize| -> Vec<usize> {
        a.iter()
            .map(|x| {
                let bi = b_by[r][&key(x, KEEP[r])];
                a_by[s][&key(&b[bi], KEEP[s])]
            })
            .collect()
    };
    let t = TauTriple::from_images([compose(1, 2), compose(2, 0), compose(0, 1)])?;

    for (d, name) in Direction::ALL.into_iter().zip(["row", "column", "symbol"]) {
        let coord = d.index();
        let mut cycles_per_line: HashMap<usize, usize> = HashMap::new();
        for cycle in t.tau(d).cycles() {
            *cycles_per_line.entry(a[cycle[0]][coord]).or_default() += 1;
        }
        if let Some((&id, &cycles)) = cycles_per_line
            .iter()
            .filter(|(_, &c)| c > 1)
            .min_by_key(|(&id, _)| id)
        {
            return Err(Error::NotSeparated {
                coordinate: name,
                id,
                cycles,
            });
        }
    }
    Ok(t)
}

fn missing_partner(side: &str, e: &Entry, keep: [usize; 2]) -> Error {
    Error::NotABitrade(format!(
        "{side} entry {e:?} has no partner agreeing in coordinates {} and {}",
        keep[0] + 1,
        keep[1] + 1
    ))
}

/// Builds the array form whose rows, columns and symbols are the cycle ids
/// of `τ₁`, `τ₂`, `τ₃`.
///
/// `T⊛` holds one entry per point (the three cycles through it); `T⊚` holds
/// the entry `(ρ₁, ρ₂, ρ₃)` for each chain `xρ₁ = x′, x′ρ₂ = x″, x″ρ₃ = x`.
pub fn to_pair(t: &TauTriple) -> TradePair {
    let [p1, p2, p3] = t.perms();
    let mut pair = TradePair::default();
    for x in 0..t.n_points() {
        pair.entries_a
            .insert([p1.cycle_id(x), p2.cycle_id(x), p3.cycle_id(x)]);
        let x1 = p1.apply(x);
        let x2 = p2.apply(x1);
        pair.entries_b
            .insert([p1.cycle_id(x), p2.cycle_id(x1), p3.cycle_id(x2)]);
    }
    pair
}

/// The `.trade` text format: `A r c s` lines, then `B r c s` lines, each
/// block in ascending order.
impl fmt::Display for TradePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (tag, set) in [("A", &self.entries_a), ("B", &self.entries_b)] {
            for [r, c, s] in set {
                writeln!(f, "{tag} {r} {c} {s}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for TradePair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let mut pair = TradePair::default();
        for (idx, line) in s.lines().enumerate() {
            let line_no = idx + 1;
            let mut fields = Vec::with_capacity(4);
            let mut start = None;
            for (i, ch) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
                match (ch.is_whitespace(), start) {
                    (false, None) => start = Some(i),
                    (true, Some(b)) => {
                        fields.push((b + 1, &line[b..i]));
                        start = None;
                    }
                    _ => {}
                }
            }
            if fields.is_empty() || fields[0].1.starts_with('#') {
                continue;
            }
            let set = match fields[0].1 {
                "A" => &mut pair.entries_a,
                "B" => &mut pair.entries_b,
                other => {
                    return Err(Error::parse(
                        line_no,
                        fields[0].0,
                        format!("expected `A` or `B`, found {other:?}"),
                    ))
                }
            };
            if fields.len() != 4 {
                let col = fields.get(4).map_or(line.len() + 1, |f| f.0);
                return Err(Error::parse(line_no, col, "expected three coordinates"));
            }
            let mut entry = [0; 3];
            for (slot, &(col, text)) in entry.iter_mut().zip(&fields[1..]) {
                *slot = text
                    .parse()
                    .map_err(|e| Error::parse(line_no, col, format!("bad coordinate: {e}")))?;
            }
            if !set.insert(entry) {
                return Err(Error::parse(line_no, 1, "duplicate entry"));
            }
        }
        Ok(pair)
    }
}
