//! Exact ranks over Q by fraction-free elimination on integer rows.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::poly::{QPoly, Q};

/// Clears denominators; the result spans the same line.
fn integer_row(row: &[Q]) -> Vec<BigInt> {
    let den = row
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    row.iter()
        .map(|c| (c * Q::from_integer(den.clone())).to_integer())
        .collect()
}

fn make_primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for c in row.iter_mut() {
            *c /= &g;
        }
    }
}

/// Row echelon form grown one vector at a time.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    ncols: usize,
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Self {
            ncols,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, row: &[Q]) -> Vec<BigInt> {
        assert_eq!(row.len(), self.ncols, "row length");
        let mut t = integer_row(row);
        make_primitive(&mut t);
        for (pivot, r) in &self.rows {
            let b = &t[*pivot];
            if b.is_zero() {
                continue;
            }
            let a = &r[*pivot];
            let g = a.gcd(b);
            let (fa, fb) = (a / &g, b / &g);
            for (tc, rc) in t.iter_mut().zip(r) {
                *tc = &*tc * &fa - rc * &fb;
            }
            make_primitive(&mut t);
        }
        t
    }

    /// Adds `row`; returns whether it was independent of the rows so far.
    pub fn insert(&mut self, row: &[Q]) -> bool {
        let t = self.reduce(row);
        match t.iter().position(|c| !c.is_zero()) {
            None => false,
            Some(pivot) => {
                let mut t = t;
                if t[pivot].is_negative() {
                    t.iter_mut().for_each(|c| *c = -&*c);
                }
                self.rows.push((pivot, t));
                true
            }
        }
    }

    pub fn contains(&self, row: &[Q]) -> bool {
        self.reduce(row).iter().all(Zero::is_zero)
    }
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    let Some(first) = rows.first() else { return 0 };
    let mut e = Echelon::new(first.len());
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Rank of a matrix over the field of fractions `Q(x)`.
pub fn rank_over_rational_functions(mut m: Vec<Vec<QPoly>>) -> usize {
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank].clone();
        for row in m.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let b = row[col].clone();
            for (c, pc) in row.iter_mut().zip(&pivot) {
                *c = &(&*c * &pivot[col]) - &(pc * &b);
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn row(c: &[i64]) -> Vec<Q> {
        c.iter().map(|&v| q(v)).collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&[row(&[1, 2, 3]), row(&[2, 4, 6]), row(&[0, 1, 1])]), 2);
        assert_eq!(rank(&[row(&[0, 0]), row(&[0, 0])]), 0);
        let half = Q::new(1.into(), 2.into());
        assert_eq!(rank(&[vec![half.clone(), q(1)], row(&[1, 2])]), 1);
    }

    #[test]
    fn membership() {
        let mut e = Echelon::new(3);
        e.insert(&row(&[1, 0, 1]));
        e.insert(&row(&[0, 1, 1]));
        assert!(e.contains(&row(&[2, 3, 5])));
        assert!(!e.contains(&row(&[0, 0, 1])));
    }

    /// Oracle: rank via determinant-free elimination over Q with plain fractions.
    fn rational_rank(mut m: Vec<Vec<Q>>) -> usize {
        let ncols = m.first().map_or(0, Vec::len);
        let mut r = 0;
        for c in 0..ncols {
            let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
            m.swap(r, p);
            let inv = m[r][c].recip();
            let pivot: Vec<Q> = m[r].iter().map(|v| v * &inv).collect();
            for i in 0..m.len() {
                if i != r && !m[i][c].is_zero() {
                    let f = m[i][c].clone();
                    for j in 0..ncols {
                        let t = &pivot[j] * &f;
                        m[i][j] -= t;
                    }
                }
            }
            r += 1;
        }
        r
    }

    #[test]
    fn agrees_with_rational_elimination() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let rows = rng.gen_range(1..8);
            let cols = rng.gen_range(1..8);
            let basis: Vec<Vec<Q>> = (0..rng.gen_range(1..5))
                .map(|_| (0..cols).map(|_| q(rng.gen_range(-3..4))).collect())
                .collect();
            // random combinations of a few vectors force rank deficiency
            let m: Vec<Vec<Q>> = (0..rows)
                .map(|_| {
                    let mut v = vec![q(0); cols];
                    for b in &basis {
                        let f = Q::new(rng.gen_range(-3..4).into(), rng.gen_range(1..4).into());
                        for j in 0..cols {
                            v[j] += &b[j] * &f;
                        }
                    }
                    v
                })
                .collect();
            assert_eq!(rank(&m), rational_rank(m.clone()));
        }
    }

    #[test]
    fn rank_over_function_field() {
        let x = QPoly::x();
        let one = QPoly::one();
        // [[x, 1], [x^2, x]] is singular, [[x, 1], [1, x]] is not
        let m = vec![vec![x.clone(), one.clone()], vec![x.pow(2), x.clone()]];
        assert_eq!(rank_over_rational_functions(m), 1);
        let m = vec![vec![x.clone(), one.clone()], vec![one, x]];
        assert_eq!(rank_over_rational_functions(m), 2);
    }
}
