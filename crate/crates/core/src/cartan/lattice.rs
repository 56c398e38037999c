//! Root lattice vectors, weights and coweights, stored densely over the index list.

use std::fmt;

use serde::{Deserialize, Serialize};

/// An element `sum_i k_i alpha_i` of the root lattice.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootVec(pub Vec<i64>);

impl RootVec {
    pub fn zero(rank: usize) -> Self {
        RootVec(vec![0; rank])
    }

    pub fn simple(rank: usize, i: usize, k: i64) -> Self {
        let mut v = vec![0; rank];
        v[i] = k;
        RootVec(v)
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&k| k == 0)
    }

    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|&k| k >= 0)
    }

    pub fn get(&self, i: usize) -> i64 {
        self.0[i]
    }

    pub fn add(&self, o: &RootVec) -> RootVec {
        RootVec(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &RootVec) -> RootVec {
        RootVec(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> RootVec {
        RootVec(self.0.iter().map(|a| a * k).collect())
    }

    pub fn add_simple(&self, i: usize, k: i64) -> RootVec {
        let mut v = self.clone();
        v.0[i] += k;
        v
    }
}

impl fmt::Debug for RootVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A weight `lambda`, recorded by its values on the coroots `h_i` and on the `d_i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Weight {
    pub h_values: Vec<i64>,
    pub d_values: Vec<i64>,
}

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight {
            h_values: vec![0; rank],
            d_values: vec![0; rank],
        }
    }

    /// `Lambda_i`: `Lambda_i(h_j) = delta_ij`, `Lambda_i(d_j) = 0`.
    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut w = Weight::zero(rank);
        w.h_values[i] = 1;
        w
    }

    pub fn add(&self, o: &Weight) -> Weight {
        Weight {
            h_values: self
                .h_values
                .iter()
                .zip(&o.h_values)
                .map(|(a, b)| a + b)
                .collect(),
            d_values: self
                .d_values
                .iter()
                .zip(&o.d_values)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, o: &Weight) -> Weight {
        self.add(&o.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight {
            h_values: self.h_values.iter().map(|a| a * k).collect(),
            d_values: self.d_values.iter().map(|a| a * k).collect(),
        }
    }

    /// `lambda(h)` for a coweight `h`.
    pub fn eval(&self, h: &Coweight) -> i64 {
        let a: i64 = self.h_values.iter().zip(&h.h).map(|(x, y)| x * y).sum();
        let b: i64 = self.d_values.iter().zip(&h.d).map(|(x, y)| x * y).sum();
        a + b
    }
}

/// An element `sum_i x_i h_i + sum_i y_i d_i` of the dual weight lattice.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Coweight {
    pub h: Vec<i64>,
    pub d: Vec<i64>,
}

impl Coweight {
    pub fn zero(rank: usize) -> Self {
        Coweight {
            h: vec![0; rank],
            d: vec![0; rank],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.h.iter().chain(&self.d).all(|&x| x == 0)
    }

    /// `k * h_i`
    pub fn coroot(rank: usize, i: usize, k: i64) -> Self {
        let mut c = Coweight::zero(rank);
        c.h[i] = k;
        c
    }

    pub fn add(&self, o: &Coweight) -> Coweight {
        Coweight {
            h: self.h.iter().zip(&o.h).map(|(a, b)| a + b).collect(),
            d: self.d.iter().zip(&o.d).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn neg(&self) -> Coweight {
        Coweight {
            h: self.h.iter().map(|a| -a).collect(),
            d: self.d.iter().map(|a| -a).collect(),
        }
    }

    pub fn add_coroot(&self, i: usize, k: i64) -> Coweight {
        let mut c = self.clone();
        c.h[i] += k;
        c
    }
}
