//! Dense matrices over Z/mZ and the linear algebra the invariants need:
//! unimodular diagonalization (valid for composite m), kernels, linear
//! solves, rank over a prime field and Smith-type forms over Z/mZ.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct ZmMatrix {
    rows: usize,
    cols: usize,
    modulus: u64,
    entries: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    modulus: u64,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<i64>>,
}

impl TryFrom<MatrixJson> for ZmMatrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        if j.entries.len() != j.rows {
            return Err(Error::SizeMismatch {
                expected: j.rows,
                found: j.entries.len(),
            });
        }
        if let Some(bad) = j.entries.iter().find(|r| r.len() != j.cols) {
            return Err(Error::SizeMismatch {
                expected: j.cols,
                found: bad.len(),
            });
        }
        ZmMatrix::from_rows(j.modulus, j.rows, j.cols, &j.entries)
    }
}

impl From<ZmMatrix> for MatrixJson {
    fn from(m: ZmMatrix) -> Self {
        MatrixJson {
            modulus: m.modulus,
            rows: m.rows,
            cols: m.cols,
            entries: m.to_rows().into_iter().map(|r| r.into_iter().map(|v| v as i64).collect()).collect(),
        }
    }
}

pub(crate) fn check_modulus(m: u64) -> Result<()> {
    if m < 2 {
        Err(Error::InvalidModulus(m))
    } else {
        Ok(())
    }
}

/// Reduce a signed integer into `0..m`.
pub fn reduce(v: i64, m: u64) -> u64 {
    (v as i128).rem_euclid(m as i128) as u64
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

#[inline]
pub(crate) fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    add_mod(a, m - b % m, m)
}

/// Extended gcd on non-negative integers: returns (g, s, t) with s*a + t*b = g.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let e = a.extended_gcd(&b);
    (e.gcd, e.x, e.y)
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (g, s, _) = ext_gcd(a as i128 % m as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(s.rem_euclid(m as i128) as u64)
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Canonical generator of the ideal (a) in Z/mZ: gcd(a, m), with m mapped to 0.
pub fn ideal_generator(a: u64, m: u64) -> u64 {
    let g = a.gcd(&m);
    if g == m {
        0
    } else {
        g
    }
}

impl ZmMatrix {
    pub fn zeros(modulus: u64, rows: usize, cols: usize) -> Result<Self> {
        check_modulus(modulus)?;
        Ok(ZmMatrix {
            rows,
            cols,
            modulus,
            entries: vec![0; rows * cols],
        })
    }

    pub fn identity(modulus: u64, n: usize) -> Result<Self> {
        let mut m = Self::zeros(modulus, n, n)?;
        for i in 0..n {
            m.set(i, i, 1);
        }
        Ok(m)
    }

    /// Build from signed integer rows; entries are reduced mod `modulus`.
    pub fn from_rows(modulus: u64, rows: usize, cols: usize, data: &[Vec<i64>]) -> Result<Self> {
        let mut m = Self::zeros(modulus, rows, cols)?;
        if data.len() != rows {
            return Err(Error::SizeMismatch {
                expected: rows,
                found: data.len(),
            });
        }
        for (i, row) in data.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::SizeMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                m.entries[i * cols + j] = reduce(v, modulus);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.entries[i * self.cols + j] = v % self.modulus;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: u64) {
        let idx = i * self.cols + j;
        self.entries[idx] = add_mod(self.entries[idx], v, self.modulus);
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0)
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows)
            .map(|i| self.entries[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }

    /// Integer lift with representatives in `0..m`.
    pub fn lift(&self) -> Vec<Vec<i64>> {
        self.to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(|v| v as i64).collect())
            .collect()
    }

    pub fn transpose(&self) -> ZmMatrix {
        let mut t = ZmMatrix {
            rows: self.cols,
            cols: self.rows,
            modulus: self.modulus,
            entries: vec![0; self.entries.len()],
        };
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entries[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul(&self, other: &ZmMatrix) -> Result<ZmMatrix> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                expected: self.modulus,
                found: other.modulus,
            });
        }
        if self.cols != other.rows {
            return Err(Error::SizeMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let m = self.modulus;
        let mut out = ZmMatrix::zeros(m, self.rows, other.cols)?;
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b != 0 {
                        let idx = i * other.cols + j;
                        out.entries[idx] = add_mod(out.entries[idx], mul_mod(a, b, m), m);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        let m = self.modulus;
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(0, |acc, j| add_mod(acc, mul_mod(self.get(i, j), v[j], m), m))
            })
            .collect()
    }

    /// Reorder rows and columns: entry (i, j) of the result is
    /// entry (row_perm[i], col_perm[j]) of `self`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> ZmMatrix {
        let mut out = self.clone();
        for (i, &ri) in row_perm.iter().enumerate() {
            for (j, &cj) in col_perm.iter().enumerate() {
                out.entries[i * self.cols + j] = self.get(ri, cj);
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// rows (a, b) <- (s*a + t*b, u*a + v*b)
    fn combine_rows(&mut self, a: usize, b: usize, [s, t, u, v]: [u64; 4]) {
        let m = self.modulus;
        for j in 0..self.cols {
            let x = self.get(a, j);
            let y = self.get(b, j);
            if x == 0 && y == 0 {
                continue;
            }
            self.entries[a * self.cols + j] = add_mod(mul_mod(s, x, m), mul_mod(t, y, m), m);
            self.entries[b * self.cols + j] = add_mod(mul_mod(u, x, m), mul_mod(v, y, m), m);
        }
    }

    /// cols (a, b) <- (s*a + t*b, u*a + v*b)
    fn combine_cols(&mut self, a: usize, b: usize, [s, t, u, v]: [u64; 4]) {
        let m = self.modulus;
        for i in 0..self.rows {
            let x = self.get(i, a);
            let y = self.get(i, b);
            if x == 0 && y == 0 {
                continue;
            }
            self.entries[i * self.cols + a] = add_mod(mul_mod(s, x, m), mul_mod(t, y, m), m);
            self.entries[i * self.cols + b] = add_mod(mul_mod(u, x, m), mul_mod(v, y, m), m);
        }
    }

    /// Unimodular diagonalization: returns `U`, `V` invertible over Z/mZ and
    /// the diagonal `d` with `U * self * V = diag(d)` (padded with zeros).
    pub fn diagonalize(&self) -> Diagonalization {
        let m = self.modulus;
        let mut a = self.clone();
        let mut u = ZmMatrix::identity(m, self.rows).expect("modulus checked");
        let mut v = ZmMatrix::identity(m, self.cols).expect("modulus checked");
        let k = self.rows.min(self.cols);
        let mut diag = Vec::with_capacity(k);

        for t in 0..k {
            // pivot: nonzero entry of smallest ideal generator
            let mut best: Option<(u64, usize, usize)> = None;
            for i in t..a.rows {
                for j in t..a.cols {
                    let x = a.get(i, j);
                    if x != 0 {
                        let g = x.gcd(&m);
                        if best.map_or(true, |(bg, _, _)| g < bg) {
                            best = Some((g, i, j));
                        }
                    }
                }
            }
            let Some((_, pi, pj)) = best else {
                diag.extend(std::iter::repeat(0).take(k - t));
                break;
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);

            loop {
                let mut dirty = false;
                for i in t + 1..a.rows {
                    let b = a.get(i, t);
                    if b == 0 {
                        continue;
                    }
                    let ops = bezout_ops(a.get(t, t), b, m);
                    a.combine_rows(t, i, ops);
                    u.combine_rows(t, i, ops);
                }
                for j in t + 1..a.cols {
                    let b = a.get(t, j);
                    if b == 0 {
                        continue;
                    }
                    let ops = bezout_ops(a.get(t, t), b, m);
                    a.combine_cols(t, j, ops);
                    v.combine_cols(t, j, ops);
                }
                for i in t + 1..a.rows {
                    if a.get(i, t) != 0 {
                        dirty = true;
                        break;
                    }
                }
                if !dirty {
                    break;
                }
            }
            diag.push(a.get(t, t));
        }
        Diagonalization { u, v, diag }
    }

    /// Generators of {x : self * x = 0} as a Z/mZ-module.
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let m = self.modulus;
        let Diagonalization { v, diag, .. } = self.diagonalize();
        let mut gens = Vec::new();
        for i in 0..self.cols {
            let d = diag.get(i).copied().unwrap_or(0);
            let scale = if d == 0 { 1 } else { m / d.gcd(&m) };
            if scale == m {
                continue;
            }
            let col: Vec<u64> = (0..self.cols).map(|r| mul_mod(v.get(r, i), scale, m)).collect();
            if col.iter().any(|&x| x != 0) {
                gens.push(col);
            }
        }
        gens
    }

    /// Some solution of `self * x = b`, if one exists.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        let m = self.modulus;
        assert_eq!(b.len(), self.rows, "right-hand side length");
        let Diagonalization { u, v, diag } = self.diagonalize();
        let c = u.mul_vec(b);
        let mut y = vec![0u64; self.cols];
        for (i, &ci) in c.iter().enumerate() {
            let d = diag.get(i).copied().unwrap_or(0);
            if d == 0 {
                if ci != 0 {
                    return None;
                }
                continue;
            }
            let g = d.gcd(&m);
            if ci % g != 0 {
                return None;
            }
            let mg = m / g;
            if mg == 1 {
                continue;
            }
            let inv = inv_mod((d / g) % mg, mg).expect("d/g is a unit mod m/g");
            y[i] = mul_mod((ci / g) % mg, inv, mg);
        }
        Some(v.mul_vec(&y))
    }

    /// Diagonal form with entries normalized to divisors of m (m -> 0) and
    /// arranged so each divides the next.
    pub fn smith_form(&self) -> Vec<u64> {
        let m = self.modulus;
        let mut d: Vec<u64> = self
            .diagonalize()
            .diag
            .into_iter()
            .map(|x| if x == 0 { m } else { x.gcd(&m) })
            .collect();
        // diag(a, b) ~ diag(gcd, lcm) for divisors a, b of m
        for i in 0..d.len() {
            for j in i + 1..d.len() {
                let (a, b) = (d[i], d[j]);
                d[i] = a.gcd(&b);
                d[j] = a.lcm(&b);
            }
        }
        d.into_iter().map(|x| if x == m { 0 } else { x }).collect()
    }

    /// Rank of the matrix reduced mod the prime `p`.
    pub fn rank_mod_p(&self, p: u64) -> Result<usize> {
        if !is_prime(p) {
            return Err(Error::NonPrimeModulus(p));
        }
        let mut rows: Vec<Vec<u64>> = self
            .to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(|x| x % p).collect())
            .collect();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
                continue;
            };
            rows.swap(rank, piv);
            let inv = inv_mod(rows[rank][c], p).expect("nonzero mod prime");
            for x in rows[rank].iter_mut() {
                *x = mul_mod(*x, inv, p);
            }
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row[c] != 0 {
                    let f = row[c];
                    for (x, &y) in row.iter_mut().zip(&pivot_row) {
                        *x = sub_mod(*x, mul_mod(f, y, p), p);
                    }
                }
            }
            rank += 1;
        }
        Ok(rank)
    }
}

/// 2x2 transform with determinant 1 sending (a, b) to (gcd, 0).
fn bezout_ops(a: u64, b: u64, m: u64) -> [u64; 4] {
    let r = |x: i128| x.rem_euclid(m as i128) as u64;
    if a != 0 && b % a == 0 {
        // a | b: keep the pivot line untouched
        return [1, 0, r(-((b / a) as i128)), 1];
    }
    let (g, s, t) = ext_gcd(a as i128, b as i128);
    [r(s), r(t), r(-(b as i128) / g), r(a as i128 / g)]
}

#[derive(Clone, Debug)]
pub struct Diagonalization {
    pub u: ZmMatrix,
    pub v: ZmMatrix,
    pub diag: Vec<u64>,
}
