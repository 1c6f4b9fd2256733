use serde::{Deserialize, Serialize};

/// Foliated torus T^n with leaves spanned by the first `v` coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FoliationShape {
    pub v: usize,
    pub h: usize,
}

impl FoliationShape {
    pub fn new(v: usize, h: usize) -> Self {
        assert!(v >= 1, "leaf dimension must be positive");
        assert!(v + h <= 16, "dimension too large");
        FoliationShape { v, h }
    }

    pub fn n(&self) -> usize {
        self.v + self.h
    }

    /// Homogeneous dimension v + 2h.
    pub fn q(&self) -> i64 {
        (self.v + 2 * self.h) as i64
    }

    /// Heisenberg weight of coordinate i (zero-based): 1 on leaves, 2 transversally.
    pub fn weight(&self, i: usize) -> i64 {
        if i < self.v {
            1
        } else {
            2
        }
    }

    /// ⟨α⟩ = Σ weight(i)·α_i.
    pub fn weighted(&self, alpha: &[u32]) -> i64 {
        alpha
            .iter()
            .enumerate()
            .map(|(i, &a)| self.weight(i) * a as i64)
            .sum()
    }
}

impl std::fmt::Display for FoliationShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.v, self.h)
    }
}

/// All multi-indices of length `n` with weighted size at most `max`.
pub fn multi_indices(shape: &FoliationShape, max: i64) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; shape.n()];
    fn rec(
        shape: &FoliationShape,
        i: usize,
        left: i64,
        cur: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        let w = shape.weight(i);
        let mut a = 0;
        while a as i64 * w <= left {
            cur[i] = a;
            rec(shape, i + 1, left - a as i64 * w, cur, out);
            a += 1;
        }
        cur[i] = 0;
    }
    if max >= 0 {
        rec(shape, 0, max, &mut cur, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        let s = FoliationShape::new(2, 1);
        assert_eq!((s.n(), s.q()), (3, 4));
        assert_eq!(s.weighted(&[1, 0, 2]), 5);
    }

    #[test]
    fn enumeration() {
        let s = FoliationShape::new(1, 1);
        let m = multi_indices(&s, 2);
        assert_eq!(m, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![2, 0]]);
        assert!(multi_indices(&s, -1).is_empty());
    }
}
