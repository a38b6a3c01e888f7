use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Invariants of a finitely generated abelian group `Z^r ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k`
/// with `d_1 | d_2 | ... | d_k` and each `d_i ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianInvariants {
    pub fn free(rank: usize) -> Self {
        AbelianInvariants { free_rank: rank, torsion: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// The group `Z^generators / ⟨rows⟩`.
    pub fn from_relations(generators: usize, rows: &[Vec<BigInt>]) -> Self {
        let snf = smith_normal_form(rows, generators);
        snf.invariants(generators)
    }

    /// Torsion coefficients as machine integers, if they fit.
    pub fn torsion_u64(&self) -> Option<Vec<u64>> {
        self.torsion.iter().map(|d| u64::try_from(d).ok()).collect()
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `D = U·M·V` with `U`, `V` unimodular and `D` diagonal, each diagonal
/// entry dividing the next.
#[derive(Clone, Debug)]
pub struct Snf {
    pub d: Vec<Vec<BigInt>>,
    pub u: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
    pub v_inv: Vec<Vec<BigInt>>,
}

impl Snf {
    /// Nonzero diagonal entries, in order.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let k = self.d.len().min(self.d.first().map_or(0, Vec::len));
        (0..k).map(|i| self.d[i][i].clone()).take_while(|x| !x.is_zero()).collect()
    }

    /// Invariants of the cokernel, reading rows as relations on `columns`
    /// generators.
    pub fn invariants(&self, columns: usize) -> AbelianInvariants {
        let diag = self.diagonal();
        AbelianInvariants {
            free_rank: columns - diag.len(),
            torsion: diag.into_iter().filter(|x| !x.is_one()).collect(),
        }
    }
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

/// Smith normal form of a `rows.len() × columns` matrix.
pub fn smith_normal_form(rows: &[Vec<BigInt>], columns: usize) -> Snf {
    let m = rows.len();
    let n = columns;
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let mut u = identity(m);
    let mut v = identity(n);
    let mut v_inv = identity(n);

    let row_axpy = |a: &mut Vec<Vec<BigInt>>, u: &mut Vec<Vec<BigInt>>, dst: usize, src: usize, q: &BigInt| {
        for j in 0..n {
            let t = &a[src][j] * q;
            a[dst][j] -= t;
        }
        for j in 0..m {
            let t = &u[src][j] * q;
            u[dst][j] -= t;
        }
    };
    // column operations on V act as the inverse row operations on V^-1
    type M = Vec<Vec<BigInt>>;
    let col_axpy = |a: &mut M, v: &mut M, vi: &mut M, dst: usize, src: usize, q: &BigInt| {
        for row in a.iter_mut() {
            let t = &row[src] * q;
            row[dst] -= t;
        }
        for row in v.iter_mut() {
            let t = &row[src] * q;
            row[dst] -= t;
        }
        for j in 0..n {
            let t = &vi[dst][j] * q;
            vi[src][j] += t;
        }
    };
    let swap_cols = |a: &mut M, v: &mut M, vi: &mut M, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
        vi.swap(i, j);
    };

    for t in 0..m.min(n) {
        // smallest nonzero entry of the remaining block becomes the pivot
        let Some((pi, pj)) = (t..m)
            .flat_map(|i| (t..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !a[i][j].is_zero())
            .min_by(|&(i, j), &(k, l)| a[i][j].abs().cmp(&a[k][l].abs()))
        else {
            break;
        };
        a.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut a, &mut v, &mut v_inv, t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..m {
                if !a[i][t].is_zero() {
                    let q = &a[i][t] / &a[t][t];
                    row_axpy(&mut a, &mut u, i, t, &q);
                    clean &= a[i][t].is_zero();
                }
            }
            for j in t + 1..n {
                if !a[t][j].is_zero() {
                    let q = &a[t][j] / &a[t][t];
                    col_axpy(&mut a, &mut v, &mut v_inv, j, t, &q);
                    clean &= a[t][j].is_zero();
                }
            }
            if !clean {
                let best_row = (t + 1..m).filter(|&i| !a[i][t].is_zero()).min_by_key(|&i| a[i][t].abs());
                let best_col = (t + 1..n).filter(|&j| !a[t][j].is_zero()).min_by_key(|&j| a[t][j].abs());
                match (best_row, best_col) {
                    (Some(i), Some(j)) if a[t][j].abs() < a[i][t].abs() => swap_cols(&mut a, &mut v, &mut v_inv, t, j),
                    (Some(i), _) => {
                        a.swap(t, i);
                        u.swap(t, i);
                    }
                    (None, Some(j)) => swap_cols(&mut a, &mut v, &mut v_inv, t, j),
                    (None, None) => unreachable!(),
                }
                continue;
            }
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match bad {
                Some(i) => {
                    // row_t += row_i brings a non-multiple into row t
                    row_axpy(&mut a, &mut u, t, i, &-BigInt::one());
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
    }
    Snf { d: a, u, v, v_inv }
}

/// An integer solution of `A x = b`, if one exists.
pub fn solve_integer_system(a: &[Vec<BigInt>], columns: usize, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.len(), b.len());
    let snf = smith_normal_form(a, columns);
    let ub: Vec<BigInt> = snf.u.iter().map(|row| row.iter().zip(b).map(|(x, y)| x * y).sum()).collect();
    let mut y = vec![BigInt::zero(); columns];
    for (k, c) in ub.iter().enumerate() {
        let d = if k < columns { &snf.d[k][k] } else { &BigInt::zero() };
        if d.is_zero() {
            if !c.is_zero() {
                return None;
            }
        } else if !c.is_multiple_of(d) {
            return None;
        } else {
            y[k] = c / d;
        }
    }
    Some((0..columns).map(|i| (0..columns).map(|k| &snf.v[i][k] * &y[k]).sum()).collect())
}

/// Convenience wrapper for small integer matrices.
pub fn smith_normal_form_i64(rows: &[Vec<i64>], columns: usize) -> Snf {
    let rows: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    smith_normal_form(&rows, columns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn matmul(a: &[Vec<BigInt>], b: &[Vec<BigInt>], inner: usize, cols: usize) -> Vec<Vec<BigInt>> {
        a.iter().map(|row| (0..cols).map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum()).collect()).collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    fn det(m: &[Vec<BigInt>]) -> BigInt {
        let n = m.len();
        if n == 0 {
            return BigInt::one();
        }
        let mut a = m.to_vec();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                let Some(s) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap(k, s);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    fn invariants(rows: &[Vec<i64>], cols: usize) -> (usize, Vec<i64>) {
        let inv = AbelianInvariants::from_relations(cols, &big(rows));
        (inv.free_rank, inv.torsion.iter().map(|d| i64::try_from(d).unwrap()).collect())
    }

    #[test]
    fn examples() {
        assert_eq!(invariants(&[vec![2, 0], vec![0, 6]], 2), (0, vec![2, 6]));
        assert_eq!(invariants(&[vec![2, 3]], 2), (1, vec![]));
        assert_eq!(invariants(&[vec![0, 0], vec![0, 0]], 2), (2, vec![]));
        assert_eq!(invariants(&[vec![4, 0], vec![0, 6]], 2), (0, vec![2, 12]));
        assert_eq!(invariants(&[], 3), (3, vec![]));
    }

    #[test]
    fn display() {
        let inv = AbelianInvariants::from_relations(3, &big(&[vec![2, 0, 0]]));
        assert_eq!(inv.to_string(), "Z^2 + Z/2");
        assert_eq!(AbelianInvariants::default().to_string(), "0");
    }

    #[test]
    fn reconstruction_on_random_matrices() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let m = rng.gen_range(1..=8);
            let n = rng.gen_range(1..=8);
            let rows: Vec<Vec<i64>> = (0..m).map(|_| (0..n).map(|_| rng.gen_range(-9..=9)).collect()).collect();
            let a = big(&rows);
            let s = smith_normal_form(&a, n);
            let d = matmul(&matmul(&s.u, &a, m, n), &s.v, n, n);
            assert_eq!(d, s.d);
            assert_eq!(det(&s.u).abs(), BigInt::one());
            assert_eq!(det(&s.v).abs(), BigInt::one());
            let id: Vec<Vec<BigInt>> =
                (0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect()).collect();
            assert_eq!(matmul(&s.v, &s.v_inv, n, n), id);
            let diag = s.diagonal();
            for i in 0..m {
                for j in 0..n {
                    if i != j {
                        assert!(s.d[i][j].is_zero());
                    }
                }
            }
            for w in diag.windows(2) {
                assert!(w[1].is_multiple_of(&w[0]));
            }
            assert!(diag.iter().all(|x| x.is_positive()));
            // rank agrees with an independent rational elimination
            assert_eq!(diag.len(), rational_rank(&rows));
        }
    }

    #[test]
    fn integer_systems() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        for _ in 0..200 {
            let m = rng.gen_range(1..=6);
            let n = rng.gen_range(1..=6);
            let a = big(&(0..m).map(|_| (0..n).map(|_| rng.gen_range(-9..=9)).collect()).collect::<Vec<_>>());
            let x: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.gen_range(-9..=9))).collect();
            let b: Vec<BigInt> = a.iter().map(|row| row.iter().zip(&x).map(|(p, q)| p * q).sum()).collect();
            let sol = solve_integer_system(&a, n, &b).expect("solvable by construction");
            let back: Vec<BigInt> = a.iter().map(|row| row.iter().zip(&sol).map(|(p, q)| p * q).sum()).collect();
            assert_eq!(back, b);
        }
        assert!(solve_integer_system(&big(&[vec![2, 4]]), 2, &[BigInt::from(1)]).is_none());
        assert!(solve_integer_system(&big(&[vec![0, 0]]), 2, &[BigInt::from(3)]).is_none());
        assert_eq!(solve_integer_system(&big(&[vec![2, 3]]), 2, &[BigInt::from(1)]).map(|v| v.len()), Some(2));
    }

    fn rational_rank(rows: &[Vec<i64>]) -> usize {
        let mut a: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
        let (m, n) = (a.len(), a[0].len());
        let mut rank = 0;
        for c in 0..n {
            let Some(p) = (rank..m).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())) else { break };
            if a[p][c].abs() < 1e-9 {
                continue;
            }
            a.swap(rank, p);
            for i in 0..m {
                if i != rank {
                    let f = a[i][c] / a[rank][c];
                    for j in 0..n {
                        a[i][j] -= f * a[rank][j];
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}
