use std::fmt;

use crate::error::{Error, Result};

/// An ordered composition `(r_1, ..., r_m)` of `r`: the block sizes of a
/// standard Levi subgroup of `GL_r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Composition {
    parts: Vec<usize>,
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::precondition(format!("invalid composition {parts:?}")));
        }
        Ok(Composition { parts })
    }

    /// `(r)`, the composition of the longest Weyl element.
    pub fn whole(r: usize) -> Self {
        Composition { parts: vec![r] }
    }

    /// `(1, ..., 1)`, the diagonal torus.
    pub fn ones(r: usize) -> Self {
        Composition { parts: vec![1; r] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn rank(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Block index of every row.
    pub fn block_of(&self) -> Vec<usize> {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(b, &len)| std::iter::repeat_n(b, len))
            .collect()
    }

    /// First row of every block.
    pub fn block_starts(&self) -> Vec<usize> {
        self.parts
            .iter()
            .scan(0, |acc, &len| {
                let start = *acc;
                *acc += len;
                Some(start)
            })
            .collect()
    }

    /// All `2^(r-1)` compositions of `r`.
    pub fn all(r: usize) -> Vec<Composition> {
        assert!(r >= 1);
        (0..1u64 << (r - 1))
            .map(|mask| {
                let mut parts = Vec::new();
                let mut len = 1;
                for i in 0..r - 1 {
                    if mask >> i & 1 == 1 {
                        parts.push(len);
                        len = 1;
                    } else {
                        len += 1;
                    }
                }
                parts.push(len);
                Composition { parts }
            })
            .collect()
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        for r in 1..=8 {
            let all = Composition::all(r);
            assert_eq!(all.len(), 1 << (r - 1));
            assert!(all.iter().all(|c| c.rank() == r));
        }
        assert_eq!(Composition::all(3).len(), 4);
    }

    #[test]
    fn blocks() {
        let c = Composition::new(vec![2, 1]).unwrap();
        assert_eq!(c.block_of(), vec![0, 0, 1]);
        assert_eq!(c.block_starts(), vec![0, 2]);
        assert!(Composition::new(vec![]).is_err());
        assert!(Composition::new(vec![1, 0]).is_err());
        assert_eq!(c.to_string(), "(2,1)");
    }
}
