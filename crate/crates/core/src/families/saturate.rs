//! Greedy saturation of binary pattern demands: for every subset `S` of at
//! most `k` base positions and every `f: S -> {0,1}`, at least `m`
//! witnesses `w` with `w[s] = f(s)` on `S`. A witness may be undefined at
//! some positions (a foot has no colour towards itself).

use std::collections::HashMap;

use itertools::Itertools;

pub(crate) type Pattern = (Vec<usize>, Vec<u8>);

pub(crate) fn deficits(
    n: usize,
    k: usize,
    m: usize,
    witnesses: &[Vec<Option<u8>>],
) -> Vec<Pattern> {
    let mut counts: HashMap<Pattern, usize> = HashMap::new();
    for w in witnesses {
        let defined: Vec<usize> = (0..n).filter(|&i| w[i].is_some()).collect();
        for size in 1..=k {
            for s in defined.iter().copied().combinations(size) {
                let f = s.iter().map(|&i| w[i].expect("defined")).collect();
                *counts.entry((s, f)).or_insert(0) += 1;
            }
        }
    }
    let mut out = Vec::new();
    for size in 1..=k.min(n) {
        for s in (0..n).combinations(size) {
            for bits in 0..1u32 << size {
                let f: Vec<u8> = (0..size)
                    .map(|i| ((bits >> (size - 1 - i)) & 1) as u8)
                    .collect();
                let key = (s.clone(), f);
                if counts.get(&key).copied().unwrap_or(0) < m {
                    out.push(key);
                }
            }
        }
    }
    out
}

/// A new witness over `0..n` realizing the first deficit. Each remaining
/// position takes the value agreeing with the most still-consistent
/// deficits; ties go to `free(i)`.
pub(crate) fn next_witness(n: usize, open: &[Pattern], free: &dyn Fn(usize) -> u8) -> Vec<u8> {
    let mut row: Vec<Option<u8>> = vec![None; n];
    if let Some((s, f)) = open.first() {
        for (&i, &v) in s.iter().zip(f) {
            row[i] = Some(v);
        }
    }
    for i in 0..n {
        if row[i].is_some() {
            continue;
        }
        let score = |v: u8| {
            open.iter()
                .filter(|(s, f)| {
                    s.iter().zip(f).any(|(&j, &w)| j == i && w == v)
                        && s.iter()
                            .zip(f)
                            .all(|(&j, &w)| row[j].is_none_or(|x| x == w))
                })
                .count()
        };
        let (s0, s1) = (score(0), score(1));
        row[i] = Some(match s0.cmp(&s1) {
            std::cmp::Ordering::Greater => 0,
            std::cmp::Ordering::Less => 1,
            std::cmp::Ordering::Equal => free(i),
        });
    }
    row.into_iter().map(|v| v.expect("assigned")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn saturates_pairs() {
        let mut ws: Vec<Vec<Option<u8>>> = Vec::new();
        loop {
            let open = deficits(4, 2, 2, &ws);
            if open.is_empty() {
                break;
            }
            ws.push(
                next_witness(4, &open, &|_| 0)
                    .into_iter()
                    .map(Some)
                    .collect(),
            );
            assert!(ws.len() < 64);
        }
        assert!(deficits(4, 2, 2, &ws).is_empty());
    }
}
