//! Exact dense linear algebra over Q(q), fraction-free elimination over Z[q],
//! and randomized pivot selection modulo 2^61 - 1.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::modp;
use crate::scalar::{Int, IntPoly, Scalar};

pub type Matrix = Vec<Vec<Scalar>>;

/// Deterministic evaluation points for the modular pivot search.
pub fn eval_points(count: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x005e_ed0f_9a11);
    (0..count).map(|_| rng.gen_range(2..modp::P - 1)).collect()
}

fn pick_pivot(m: &Matrix, col: usize, from: usize) -> Option<usize> {
    (from..m.len())
        .filter(|&r| !m[r][col].is_zero())
        .min_by_key(|&r| m[r][col].weight())
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = pick_pivot(m, c, r) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        if !inv.is_one() {
            for v in m[r].iter_mut().skip(c) {
                *v = &*v * &inv;
            }
        }
        let pivot_row = m[r].clone();
        for (k, row) in m.iter_mut().enumerate() {
            if k == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for j in c..cols {
                if !pivot_row[j].is_zero() {
                    row[j] = &row[j] - &(&f * &pivot_row[j]);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let mut w = m.clone();
    rref(&mut w).len()
}

/// Solve `a x = b` for several right-hand sides (the columns of `b`).
/// Free variables are set to zero; `None` when the system is inconsistent.
pub fn solve(a: &Matrix, b: &Matrix) -> Option<Matrix> {
    let n = a.first().map_or(0, |r| r.len());
    let k = b.first().map_or(0, |r| r.len());
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().chain(rb).cloned().collect())
        .collect();
    let pivots = rref(&mut aug);
    if pivots.iter().any(|&c| c >= n) {
        return None;
    }
    let mut x = vec![vec![Scalar::zero(); k]; n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][n..].to_vec();
    }
    Some(x)
}

pub fn solve_vec(a: &Matrix, b: &[Scalar]) -> Option<Vec<Scalar>> {
    let bm: Matrix = b.iter().map(|v| vec![v.clone()]).collect();
    solve(a, &bm).map(|x| x.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

pub fn inverse(a: &Matrix) -> Result<Matrix> {
    let n = a.len();
    let id: Matrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Scalar::one()
                    } else {
                        Scalar::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mut aug: Matrix = a
        .iter()
        .zip(&id)
        .map(|(ra, rb)| ra.iter().chain(rb).cloned().collect())
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return Err(Error::Degenerate(format!("singular {n}x{n} matrix")));
    }
    Ok(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Basis of the right null space `{x : m x = 0}`.
pub fn kernel(m: &Matrix, ncols: usize) -> Vec<Vec<Scalar>> {
    let mut w = m.clone();
    let pivots = rref(&mut w);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Scalar::zero(); ncols];
        v[free] = Scalar::one();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = -&w[r][free];
        }
        out.push(v);
    }
    out
}

pub fn mat_vec(m: &Matrix, v: &[Scalar]) -> Vec<Scalar> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                .map(|(a, b)| a * b)
                .sum()
        })
        .collect()
}

/// Greedy independent rows over a prime field: row `k` is kept iff it is not in
/// the span of the rows kept before it.
pub fn greedy_rows_mod(rows: &[Vec<u64>]) -> Vec<usize> {
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut kept = Vec::new();
    for (k, row) in rows.iter().enumerate() {
        let mut v = row.clone();
        for (pc, b) in &basis {
            let f = v[*pc];
            if f != 0 {
                for (x, y) in v.iter_mut().zip(b) {
                    *x = modp::sub(*x, modp::mul(f, *y));
                }
            }
        }
        if let Some(pc) = v.iter().position(|&x| x != 0) {
            let inv = modp::inv(v[pc]);
            for x in v.iter_mut() {
                *x = modp::mul(*x, inv);
            }
            basis.push((pc, v));
            kept.push(k);
        }
    }
    kept
}

/// Evaluate a matrix at a point; `None` when some denominator vanishes there.
pub fn eval_matrix(m: &Matrix, x: u64) -> Option<Vec<Vec<u64>>> {
    m.iter()
        .map(|row| {
            row.iter()
                .map(|s| s.eval_mod(x))
                .collect::<Option<Vec<u64>>>()
        })
        .collect()
}

/// Lexicographically greedy independent rows of a matrix over Q(q), found by
/// elimination at random points. The rank over Q(q) is the maximum of the
/// specialized ranks, so the larger of two independent draws is kept.
pub fn greedy_rows(m: &Matrix) -> Vec<usize> {
    let mut best: Vec<usize> = Vec::new();
    for x in eval_points(4) {
        if let Some(mx) = eval_matrix(m, x) {
            let rows = greedy_rows_mod(&mx);
            if rows.len() > best.len() {
                best = rows;
            }
        }
    }
    best
}

/// Clear denominators of a row: returns integer polynomials proportional to it.
fn row_to_polys(row: &[Scalar]) -> Vec<IntPoly> {
    let nonzero: Vec<&Scalar> = row.iter().filter(|s| !s.is_zero()).collect();
    if nonzero.is_empty() {
        return vec![IntPoly::zero(); row.len()];
    }
    let min_shift = nonzero.iter().map(|s| s.shift()).min().unwrap();
    let mut common = IntPoly::one();
    for s in &nonzero {
        let d = s.denominator();
        let g = common.gcd(d);
        common = common.mul(&d.div_exact(&g).expect("gcd divides"));
    }
    row.iter()
        .map(|s| {
            if s.is_zero() {
                return IntPoly::zero();
            }
            let f = common.div_exact(s.denominator()).expect("common multiple");
            s.numerator()
                .mul(&f)
                .shift_up((s.shift() - min_shift) as usize)
        })
        .collect()
}

/// Exact rank and pivot columns by fraction-free (Bareiss) elimination over Z[q].
pub fn bareiss_rank(m: &Matrix) -> (usize, Vec<usize>) {
    let mut a: Vec<Vec<IntPoly>> = m.iter().map(|r| row_to_polys(r)).collect();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut prev = IntPoly::one();
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows)
            .filter(|&k| !a[k][c].is_zero())
            .min_by_key(|&k| a[k][c].degree())
        else {
            continue;
        };
        a.swap(r, p);
        for k in r + 1..rows {
            for j in c + 1..cols {
                let v = a[r][c].mul(&a[k][j]).sub(&a[k][c].mul(&a[r][j]));
                a[k][j] = v.div_exact(&prev).expect("Bareiss division is exact");
            }
            a[k][c] = IntPoly::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    (r, pivots)
}

/// `true` when every entry is zero.
pub fn is_zero_matrix(m: &Matrix) -> bool {
    m.iter().all(|r| r.iter().all(Scalar::is_zero))
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Scalar::one()
                    } else {
                        Scalar::zero()
                    }
                })
                .collect()
        })
        .collect()
}

pub fn int_scalar(v: i64) -> Scalar {
    Scalar::from_int(Int::from(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Scalar {
        t.parse().unwrap()
    }

    #[test]
    fn inverse_round_trip() {
        let a = vec![vec![s("q"), s("1")], vec![s("1"), s("q^-1+q")]];
        let inv = inverse(&a).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let v: Scalar = (0..2).map(|k| &a[i][k] * &inv[k][j]).sum();
                assert_eq!(
                    v,
                    if i == j {
                        Scalar::one()
                    } else {
                        Scalar::zero()
                    }
                );
            }
        }
    }

    #[test]
    fn kernel_of_rank_one() {
        let m = vec![vec![s("1"), s("q")], vec![s("q"), s("q^2")]];
        let k = kernel(&m, 2);
        assert_eq!(k.len(), 1);
        assert!(mat_vec(&m, &k[0]).iter().all(Scalar::is_zero));
        assert_eq!(bareiss_rank(&m).0, 1);
        assert_eq!(greedy_rows(&m), vec![0]);
    }

    #[test]
    fn bareiss_agrees_with_gauss() {
        let m = vec![
            vec![s("1+q^2"), s("q"), s("1/(q-1)")],
            vec![s("q"), s("2"), s("q^-1")],
            vec![s("1+q^2+q"), s("q+2"), s("1/(q-1)+q^-1")],
        ];
        assert_eq!(rank(&m), 2);
        assert_eq!(bareiss_rank(&m), (2, vec![0, 1]));
    }

    #[test]
    fn inconsistent_system() {
        let a = vec![vec![s("1"), s("1")], vec![s("1"), s("1")]];
        assert!(solve_vec(&a, &[s("1"), s("2")]).is_none());
        let x = solve_vec(&a, &[s("q"), s("q")]).unwrap();
        assert_eq!(&x[0] + &x[1], s("q"));
    }
}
