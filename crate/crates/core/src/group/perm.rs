//! Explicit permutations and the 2n-point permutation representation of
//! the Turing machine group.

use std::collections::HashSet;

/// A permutation of `{0, .., n-1}` in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm((0..n).collect())
    }

    pub fn from_mapping(map: Vec<usize>) -> Perm {
        Perm(map)
    }

    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Perm {
        let mut map: Vec<usize> = (0..n).collect();
        for cycle in cycles {
            for w in 0..cycle.len() {
                map[cycle[w]] = cycle[(w + 1) % cycle.len()];
            }
        }
        Perm(map)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, point: usize) -> usize {
        self.0[point]
    }

    /// `self` then `other`: `(self.then(other))(x) = other(self(x))`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&x| other.0[x]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v] = i;
        }
        Perm(inv)
    }

    pub fn order(&self) -> u32 {
        let id = Perm::identity(self.0.len());
        let mut acc = self.clone();
        let mut ord = 1;
        while acc != id {
            acc = acc.then(self);
            ord += 1;
        }
        ord
    }

    pub fn parity_even(&self) -> bool {
        let mut seen = vec![false; self.0.len()];
        let mut transpositions = 0;
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut v = start;
            while !seen[v] {
                seen[v] = true;
                v = self.0[v];
                len += 1;
            }
            transpositions += len - 1;
        }
        transpositions % 2 == 0
    }
}

/// The two generating permutations on `2n` points (0-indexed): the
/// transposition `(0 1)`, and the pair of n-cycles
/// `(0 2 4 .. 2n-2)(1 3 5 .. 2n-1)`. Returned as `(flip, rotate)`; the
/// transposition represents F and the double cycle represents R.
pub fn permutation_representation(n: u32) -> (Perm, Perm) {
    let points = 2 * n as usize;
    let flip = Perm::from_cycles(points, &[&[0, 1]]);
    let evens: Vec<usize> = (0..n as usize).map(|j| 2 * j).collect();
    let odds: Vec<usize> = (0..n as usize).map(|j| 2 * j + 1).collect();
    let rotate = Perm::from_cycles(points, &[&evens, &odds]);
    (flip, rotate)
}

/// Closure of a set of permutations under composition (BFS).
pub fn perm_closure(gens: &[Perm]) -> Vec<Perm> {
    let Some(first) = gens.first() else {
        return Vec::new();
    };
    let id = Perm::identity(first.len());
    let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for p in frontier {
            for g in gens {
                let q = p.then(g);
                if seen.insert(q.clone()) {
                    next.push(q);
                }
            }
        }
        frontier = next;
    }
    seen.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_and_invert() {
        let p = Perm::from_cycles(4, &[&[0, 1, 2]]);
        assert_eq!(p.then(&p.inverse()), Perm::identity(4));
        assert_eq!(p.order(), 3);
        assert!(p.parity_even());
        assert!(!Perm::from_cycles(4, &[&[0, 1]]).parity_even());
    }

    #[test]
    fn representation_shape_n3() {
        let (flip, rotate) = permutation_representation(3);
        // one-line images match the documented generators on 6 points
        assert_eq!(flip, Perm::from_mapping(vec![1, 0, 2, 3, 4, 5]));
        assert_eq!(rotate, Perm::from_mapping(vec![2, 3, 4, 5, 0, 1]));
        assert_eq!(rotate.order(), 3);
    }
}
