use std::fmt;

use super::datum::Datum;
use super::lattice::RootVec;
use crate::error::Result;

/// Order of `r_i r_j` in the Weyl group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BraidOrder {
    Finite(usize),
    Infinite,
}

impl fmt::Display for BraidOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BraidOrder::Finite(m) => write!(f, "{m}"),
            BraidOrder::Infinite => write!(f, "infinite"),
        }
    }
}

impl Datum {
    pub fn braid_order(&self, i: usize, j: usize) -> Result<BraidOrder> {
        self.require_real(i)?;
        self.require_real(j)?;
        if i == j {
            return Err(crate::Error::domain(
                "braid order needs two distinct indices",
            ));
        }
        Ok(match self.a(i, j) * self.a(j, i) {
            0 => BraidOrder::Finite(2),
            1 => BraidOrder::Finite(3),
            2 => BraidOrder::Finite(4),
            3 => BraidOrder::Finite(6),
            _ => BraidOrder::Infinite,
        })
    }

    /// A word is reduced iff each appended letter `i` satisfies
    /// `w(alpha_i) > 0` for the prefix `w` read so far.
    pub fn is_reduced(&self, word: &[usize]) -> Result<bool> {
        for &i in word {
            self.require_real(i)?;
        }
        for k in 0..word.len() {
            let mut root = RootVec::simple(self.rank(), word[k], 1);
            for &p in word[..k].iter().rev() {
                root = self.reflect_root(p, &root)?;
            }
            if !root.is_nonneg() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rank2(aij: i64, aji: i64) -> Datum {
        let s = if aij == aji {
            [1, 1]
        } else if aij == -1 {
            [-aji, 1]
        } else {
            [1, -aij]
        };
        Datum::from_matrix(&[vec![2, aij], vec![aji, 2]], &s, 1).unwrap()
    }

    #[test]
    fn table_of_orders() {
        assert_eq!(
            rank2(0, 0).braid_order(0, 1).unwrap(),
            BraidOrder::Finite(2)
        );
        assert_eq!(
            rank2(-1, -1).braid_order(0, 1).unwrap(),
            BraidOrder::Finite(3)
        );
        assert_eq!(
            rank2(-1, -2).braid_order(1, 0).unwrap(),
            BraidOrder::Finite(4)
        );
        assert_eq!(
            rank2(-1, -3).braid_order(0, 1).unwrap(),
            BraidOrder::Finite(6)
        );
        assert_eq!(
            rank2(-1, -5).braid_order(0, 1).unwrap(),
            BraidOrder::Infinite
        );
    }

    #[test]
    fn reduced_words_in_dihedral_groups() {
        let d = rank2(-1, -1);
        assert!(d.is_reduced(&[0]).unwrap());
        assert!(!d.is_reduced(&[0, 0]).unwrap());
        assert!(d.is_reduced(&[0, 1, 0]).unwrap());
        assert!(!d.is_reduced(&[0, 1, 0, 1]).unwrap());
        let g2 = rank2(-1, -3);
        assert!(g2.is_reduced(&[0, 1, 0, 1, 0, 1]).unwrap());
        assert!(!g2.is_reduced(&[0, 1, 0, 1, 0, 1, 0]).unwrap());
    }
}
