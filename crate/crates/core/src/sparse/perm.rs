use crate::error::{Error, Result};
use serde::Serialize;

/// A permutation of `0..n`, stored as the forward map: `forward[old] = new`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Permutation {
    forward: Vec<usize>,
}

impl Permutation {
    /// Validates that `forward` is a bijection on `0..forward.len()`.
    pub fn new(forward: Vec<usize>) -> Result<Self> {
        let n = forward.len();
        let mut seen = vec![false; n];
        for &t in &forward {
            if t >= n {
                return Err(Error::Invalid(format!(
                    "permutation target {t} out of range for length {n}"
                )));
            }
            if seen[t] {
                return Err(Error::Invalid(format!("permutation target {t} repeated")));
            }
            seen[t] = true;
        }
        Ok(Permutation { forward })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            forward: (0..n).collect(),
        }
    }

    /// Builds the permutation that sends `order[k]` to position `k`; in other
    /// words, `order` lists old indices in their new sequence.
    pub fn from_order(order: &[usize]) -> Result<Self> {
        let mut forward = vec![usize::MAX; order.len()];
        for (pos, &old) in order.iter().enumerate() {
            if old >= order.len() || forward[old] != usize::MAX {
                return Err(Error::Invalid(format!(
                    "order is not a permutation: bad or repeated index {old}"
                )));
            }
            forward[old] = pos;
        }
        Ok(Permutation { forward })
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    /// New position of old index `i`.
    pub fn map(&self, i: usize) -> usize {
        self.forward[i]
    }

    pub fn forward(&self) -> &[usize] {
        &self.forward
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0usize; self.forward.len()];
        for (old, &new) in self.forward.iter().enumerate() {
            inv[new] = old;
        }
        Permutation { forward: inv }
    }

    /// Old indices listed in new-position order (the inverse map as a list).
    pub fn order(&self) -> Vec<usize> {
        self.inverse().forward
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_bijection() {
        assert!(Permutation::new(vec![0, 2, 1]).is_ok());
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
        assert!(Permutation::new(vec![0, 3, 1]).is_err());
    }

    #[test]
    fn inverse_undoes() {
        let p = Permutation::new(vec![2, 0, 1]).unwrap();
        let inv = p.inverse();
        for i in 0..3 {
            assert_eq!(inv.map(p.map(i)), i);
        }
    }

    #[test]
    fn from_order_matches_order() {
        let order = vec![2, 0, 1];
        let p = Permutation::from_order(&order).unwrap();
        assert_eq!(p.order(), order);
        assert_eq!(p.map(2), 0);
        assert!(Permutation::from_order(&[1, 1, 0]).is_err());
    }
}
