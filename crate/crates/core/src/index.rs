use std::cmp::Ordering;
use std::fmt;

/// Exponent vector `J = (j_1, .., j_n)` of a monomial.
///
/// Ordered graded-lexicographically: total degree first, then the larger
/// leading exponent first, so `t1^2 < t1 t2 < t2^2` within degree 2.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// The unit vector `e_k`.
    pub fn unit(n: usize, k: usize) -> Self {
        let mut v = vec![0; n];
        v[k] = 1;
        MultiIndex(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Index of the single nonzero exponent if this is some `e_k`.
    pub fn as_unit(&self) -> Option<usize> {
        if self.degree() != 1 {
            return None;
        }
        self.0.iter().position(|&e| e == 1)
    }

    /// All indices of dimension `n` with `lo <= |J| <= hi`, in graded-lex order.
    pub fn all_up_to(n: usize, lo: usize, hi: usize) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        for d in lo..=hi {
            let mut cur = vec![0u32; n];
            of_degree(n, d, 0, &mut cur, &mut out);
        }
        out
    }
}

fn of_degree(n: usize, remaining: usize, pos: usize, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
    if n == 0 {
        if remaining == 0 {
            out.push(MultiIndex(Vec::new()));
        }
        return;
    }
    if pos == n - 1 {
        cur[pos] = remaining as u32;
        out.push(MultiIndex(cur.clone()));
        cur[pos] = 0;
        return;
    }
    for e in (0..=remaining).rev() {
        cur[pos] = e as u32;
        of_degree(n, remaining - e, pos + 1, cur, out);
    }
    cur[pos] = 0;
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order() {
        let all = MultiIndex::all_up_to(2, 1, 2);
        let raw: Vec<_> = all.iter().map(|j| j.exponents().to_vec()).collect();
        assert_eq!(raw, vec![vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(sorted, all);
    }

    #[test]
    fn counts() {
        assert_eq!(MultiIndex::all_up_to(1, 1, 4).len(), 4);
        assert_eq!(MultiIndex::all_up_to(3, 0, 2).len(), 10);
        assert_eq!(MultiIndex::all_up_to(2, 3, 3).len(), 4);
    }
}
