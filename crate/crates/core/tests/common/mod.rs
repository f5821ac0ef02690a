#![allow(dead_code)]

use std::collections::VecDeque;

use bitrade_core::canon::decode;
use bitrade_core::enumerate::{enumerate, EnumerateConfig};
use bitrade_core::{Direction, TauTriple, TradePair};

/// Every class of size `4..=max_size`, decoded into canonical labels, with
/// its size.
pub fn classes_up_to(max_size: usize) -> Vec<TauTriple> {
    let mut config = EnumerateConfig::new(max_size);
    config.retain_forms = true;
    let census = enumerate(&config);
    census
        .forms()
        .unwrap()
        .values()
        .flatten()
        .map(|f| decode(f).unwrap())
        .collect()
}

/// Extends `0 ↦ y` to a map `θ` with `τᵢ(x)θ = νᵢ(xθ)` by following the
/// three permutations; `None` on any conflict. Independent of the
/// canonical-form code.
pub fn propagate(a: &TauTriple, b: &TauTriple, y: usize) -> Option<Vec<usize>> {
    let n = a.n_points();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    map[0] = y;
    used[y] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(x) = queue.pop_front() {
        for d in Direction::ALL {
            let (px, py) = (a.tau(d).apply(x), b.tau(d).apply(map[x]));
            if map[px] == usize::MAX {
                if used[py] {
                    return None;
                }
                map[px] = py;
                used[py] = true;
                queue.push_back(px);
            } else if map[px] != py {
                return None;
            }
        }
    }
    map.iter().all(|&m| m != usize::MAX).then_some(map)
}

/// Brute-force τ-isomorphism test for transitive triples.
pub fn brute_isomorphic(a: &TauTriple, b: &TauTriple) -> bool {
    a.n_points() == b.n_points()
        && (0..b.n_points()).any(|y| propagate(a, b, y).is_some_and(|m| a.relabel(&m) == *b))
}

/// Brute-force automorphism count.
pub fn brute_aut_order(t: &TauTriple) -> usize {
    (0..t.n_points())
        .filter(|&y| propagate(t, t, y).is_some_and(|m| t.relabel(&m) == *t))
        .count()
}

/// A pseudo-random permutation of `0..n` from a seed (xorshift + shuffle).
pub fn shuffled(n: usize, mut seed: u64) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    seed |= 1;
    for i in (1..n).rev() {
        seed ^= seed << 13;
        seed ^= seed >> 7;
        seed ^= seed << 17;
        v.swap(i, (seed % (i as u64 + 1)) as usize);
    }
    v
}

pub fn intercalate_pair() -> TradePair {
    TradePair::new(
        [[0, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0]],
        [[0, 0, 1], [0, 1, 0], [1, 0, 0], [1, 1, 1]],
    )
}

pub fn example2_pair() -> TradePair {
    // rows of T⊛ and T⊚, '.' = empty
    let a = ["0.2.4", "...42", "1302.", "41.3.", "....."];
    let b = ["4.0.2", "...24", "0123.", "13.4.", "....."];
    let read = |rows: [&str; 5]| {
        let mut out = Vec::new();
        for (r, row) in rows.iter().enumerate() {
            for (c, ch) in row.chars().enumerate() {
                if let Some(s) = ch.to_digit(10) {
                    out.push([r, c, s as usize]);
                }
            }
        }
        out
    };
    TradePair::new(read(a), read(b))
}

/// The printed cycle lists of the 12-point example, with points written
/// as `rcs` entries of `T⊛`.
pub const EXAMPLE2_TAU: [&[&[usize]]; 3] = [
    &[&[0, 22, 44], &[134, 142], &[201, 213, 232, 220], &[304, 333, 311]],
    &[&[0, 304, 201], &[213, 311], &[22, 220], &[134, 232, 333], &[44, 142]],
    &[&[0, 220], &[201, 311], &[22, 232, 142], &[213, 333], &[44, 134, 304]],
];

/// Builds a triple from cycles written over entries, numbering the entries
/// of `entries` in the given (sorted) order.
pub fn triple_from_entry_cycles(entries: &[[usize; 3]], cycles: [&[&[usize]]; 3]) -> TauTriple {
    let index = |rcs: usize| {
        let e = [rcs / 100, rcs / 10 % 10, rcs % 10];
        entries.iter().position(|&x| x == e).expect("entry listed")
    };
    let conv = |c: &[&[usize]]| -> Vec<Vec<usize>> {
        c.iter().map(|cy| cy.iter().map(|&p| index(p)).collect()).collect()
    };
    let (c1, c2, c3) = (conv(cycles[0]), conv(cycles[1]), conv(cycles[2]));
    TauTriple::from_cycles(entries.len(), [&c1[..], &c2[..], &c3[..]]).unwrap()
}
