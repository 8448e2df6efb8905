//! Enumeration of word balls `{ g | |g| <= r }` in a group with solved word
//! problem.

use std::collections::HashSet;

use crate::order::Group;
use crate::words::Word;

/// All distinct elements of word length at most `radius`, as normal forms,
/// in breadth-first order (generator letters tried in alphabet order).
pub fn ball(group: &dyn Group, radius: usize) -> Vec<Word> {
    let letters = group.alphabet().letters();
    let mut seen: HashSet<Word> = HashSet::new();
    let mut out = vec![Word::identity()];
    seen.insert(Word::identity());
    let mut frontier = vec![Word::identity()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for w in &frontier {
            for &l in &letters {
                let v = group.normalize(&w.mul(&Word::letter(l)));
                if seen.insert(v.clone()) {
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Ball sizes `1 + 2k((2k-1)^r - 1)/(2k-2)` of the free group of rank `k`.
pub fn free_ball_size(rank: usize, radius: usize) -> usize {
    if rank == 0 {
        return 1;
    }
    let mut total = 1;
    let mut sphere = 2 * rank;
    for _ in 0..radius {
        total += sphere;
        sphere *= 2 * rank - 1;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::FreeGroup;
    use crate::words::Alphabet;

    #[test]
    fn free_ball_counts() {
        let g = FreeGroup::new(Alphabet::from_names(&["a", "b"]).unwrap());
        assert_eq!(ball(&g, 0).len(), 1);
        assert_eq!(ball(&g, 2).len(), 17);
        assert_eq!(ball(&g, 5).len(), 485);
        assert_eq!(ball(&g, 6).len(), 1457);
        assert_eq!(free_ball_size(2, 6), 1457);
        let g1 = FreeGroup::new(Alphabet::from_names(&["a"]).unwrap());
        assert_eq!(ball(&g1, 2).len(), 5);
    }
}
