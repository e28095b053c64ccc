//! Random objects and independent reference computations for tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use locweinstein::intlin::Matrix;
use locweinstein::{BigInt, FreeComplex, IntMatrix};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let sparse = rng.gen_bool(0.3);
    let entries = (0..rows * cols)
        .map(|_| {
            if sparse && rng.gen_bool(0.6) {
                BigInt::zero()
            } else {
                BigInt::from(rng.gen_range(-bound..=bound))
            }
        })
        .collect();
    Matrix::from_vec(rows, cols, entries).unwrap()
}

/// Parameters of [`random_complex`].
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub lo: i64,
    pub hi: i64,
    pub max_rank: usize,
    pub bound: i64,
    /// Chance that a block is a single free generator.
    pub free_prob: f64,
    /// Number of basis scrambling attempts per degree.
    pub scramble: usize,
}

impl Shape {
    pub const SMALL: Shape = Shape {
        lo: -2,
        hi: 2,
        max_rank: 3,
        bound: 10,
        free_prob: 0.25,
        scramble: 8,
    };

    pub fn torsion_only(self) -> Shape {
        Shape {
            free_prob: 0.0,
            ..self
        }
    }
}

/// A random complex: a direct sum of elementary blocks (free generators and
/// `Z --m--> Z` pieces) conjugated by random elementary basis changes. A
/// basis change is rejected when it would push an entry outside
/// `[-bound, bound]`, so entries stay bounded while the block structure is
/// hidden.
pub fn random_complex(rng: &mut impl Rng, shape: Shape) -> FreeComplex {
    let width = (shape.hi - shape.lo + 1) as usize;
    let mut ranks: BTreeMap<i64, usize> = (shape.lo..=shape.hi).map(|k| (k, 0)).collect();
    // (source degree, multiplicity); None is a free generator
    let mut blocks: Vec<(i64, Option<i64>)> = Vec::new();
    let count = rng.gen_range(0..=width * shape.max_rank / 2 + 1);
    for _ in 0..count {
        let k = rng.gen_range(shape.lo..=shape.hi);
        // a block starting in the top degree can only be free
        let free = k == shape.hi || rng.gen_bool(shape.free_prob);
        if free && k == shape.hi && shape.free_prob == 0.0 {
            continue;
        }
        if free {
            if ranks[&k] < shape.max_rank {
                *ranks.get_mut(&k).unwrap() += 1;
                blocks.push((k, None));
            }
        } else if ranks[&k] < shape.max_rank && ranks[&(k + 1)] < shape.max_rank {
            let m = if rng.gen_bool(0.25) {
                1
            } else {
                rng.gen_range(2..=shape.bound.max(2))
            };
            *ranks.get_mut(&k).unwrap() += 1;
            *ranks.get_mut(&(k + 1)).unwrap() += 1;
            blocks.push((k, Some(m)));
        }
    }
    let mut next: BTreeMap<i64, usize> = BTreeMap::new();
    let mut d: BTreeMap<i64, IntMatrix> = (shape.lo - 1..=shape.hi)
        .map(|k| {
            let rows = ranks.get(&(k + 1)).copied().unwrap_or(0);
            let cols = ranks.get(&k).copied().unwrap_or(0);
            (k, Matrix::zeros(rows, cols))
        })
        .collect();
    for &(k, m) in &blocks {
        let mut take = |deg: i64| {
            let slot = next.entry(deg).or_insert(0);
            *slot += 1;
            *slot - 1
        };
        let src = take(k);
        if let Some(m) = m {
            let dst = take(k + 1);
            d.get_mut(&k).unwrap()[(dst, src)] = BigInt::from(m);
        }
    }
    let bound = BigInt::from(shape.bound);
    let fits = |m: &IntMatrix| m.entries().iter().all(|x| x.abs() <= bound);
    for k in shape.lo..=shape.hi {
        let n = ranks[&k];
        if n == 0 {
            continue;
        }
        for _ in 0..shape.scramble {
            // basis change P in degree k: d^{k-1} <- P d^{k-1}, d^k <- d^k P^{-1}
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            let mut inc = d[&(k - 1)].clone();
            let mut out = d[&k].clone();
            match rng.gen_range(0..4) {
                0 | 1 if i != j => {
                    let c = BigInt::from(if rng.gen_bool(0.5) { 1 } else { -1 });
                    inc.add_row_multiple(i, j, &c);
                    out.add_col_multiple(j, i, &(-c));
                }
                2 => {
                    inc.swap_rows(i, j);
                    out.swap_cols(i, j);
                }
                _ => {
                    inc.negate_row(i);
                    out.negate_col(i);
                }
            }
            if fits(&inc) && fits(&out) {
                d.insert(k - 1, inc);
                d.insert(k, out);
            }
        }
    }
    ranks.retain(|_, r| *r > 0);
    let c = FreeComplex::new(ranks, d);
    c.check().expect("generator produces complexes");
    c
}

/// Determinant by fraction-free elimination.
pub fn det(m: &IntMatrix) -> BigInt {
    assert!(m.is_square());
    let n = m.rows();
    let mut a = m.to_rows();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * prev
}

/// Rank over `Q` and a nonzero `r × r` minor, by fraction-free elimination
/// with full pivoting. The minor is `1` for the zero matrix.
pub fn rational_rank_and_minor(m: &IntMatrix) -> (usize, BigInt) {
    let (rows, cols) = m.shape();
    let mut a = m.to_rows();
    let mut prev = BigInt::one();
    let mut r = 0;
    while r < rows.min(cols) {
        let pivot = (r..rows)
            .flat_map(|i| (r..cols).map(move |j| (i, j)))
            .find(|&(i, j)| !a[i][j].is_zero());
        let Some((pi, pj)) = pivot else { break };
        a.swap(r, pi);
        for row in a.iter_mut() {
            row.swap(r, pj);
        }
        for i in r + 1..rows {
            for j in r + 1..cols {
                a[i][j] = (&a[i][j] * &a[r][r] - &a[i][r] * &a[r][j]) / &prev;
            }
            a[i][r] = BigInt::zero();
        }
        prev = a[r][r].clone();
        r += 1;
    }
    (r, prev.abs())
}

/// Rank over `F_q` by Gaussian elimination on `i128` residues.
pub fn rank_over_fp(m: &IntMatrix, q: u64) -> usize {
    let q = q as i128;
    let qb = BigInt::from(q);
    let mut a: Vec<Vec<i128>> = m
        .to_rows()
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| x.mod_floor(&qb).to_i128().unwrap())
                .collect()
        })
        .collect();
    let (rows, cols) = m.shape();
    let pow = |mut b: i128, mut e: i128| {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % q;
            }
            b = b * b % q;
            e >>= 1;
        }
        acc
    };
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, p);
        let inv = pow(a[r][c], q - 2);
        for i in r + 1..rows {
            let f = a[i][c] * inv % q;
            let pivot_row = a[r].clone();
            for (x, &y) in a[i][c..].iter_mut().zip(&pivot_row[c..]) {
                *x = (*x - f * y).rem_euclid(q);
            }
        }
        r += 1;
    }
    r
}

/// Prime factors by trial division.
pub fn trial_factor(n: &BigInt) -> Vec<u64> {
    let mut n = n.abs().to_u64().expect("small enough for trial division");
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The differentials of `c` in every degree where one can be nonzero.
pub fn all_differentials(c: &FreeComplex) -> Vec<(i64, IntMatrix)> {
    let Some((lo, hi)) = c.support() else {
        return Vec::new();
    };
    (lo - 1..=hi)
        .map(|k| (k, c.differential(k).into_owned()))
        .collect()
}
