//! Weighted incidence matrices of cocycle quivers and their invariants:
//! characteristic polynomial, Smith normal form, rank mod p and elementary
//! ideals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quiver::CocycleQuiver;
use crate::zmat::{add_mod, check_modulus, mul_mod, ZmMatrix};

/// Largest side accepted by [`permutation_equivalent`].
pub const DEFAULT_PERMUTATION_LIMIT: usize = 16;

/// Vertices by edges. Column `k` holds `-φ(source)` in the source row and
/// `+φ(target)` in the target row; on a self-loop the two are summed to 0.
pub fn build_matrix(quiver: &CocycleQuiver) -> ZmMatrix {
    let m = quiver.modulus();
    let w = quiver.weights();
    let mut mat = ZmMatrix::zeros(m, quiver.vertex_count(), quiver.edge_count()).expect("valid modulus");
    for (k, e) in quiver.edges().iter().enumerate() {
        mat.add_to(e.source, k, (m - w[e.source]) % m);
        mat.add_to(e.target, k, w[e.target]);
    }
    mat
}

/// A monic polynomial in `x` over Z/mZ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CharPoly {
    modulus: u64,
    /// `coeffs[i]` is the coefficient of `x^i`.
    coeffs: Vec<u64>,
}

impl CharPoly {
    /// From coefficients listed lowest degree first.
    pub fn from_coefficients(modulus: u64, coeffs: &[i64]) -> Result<Self> {
        check_modulus(modulus)?;
        let mut coeffs: Vec<u64> = coeffs.iter().map(|&c| crate::zmat::reduce(c, modulus)).collect();
        while coeffs.len() > 1 && coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Ok(CharPoly { modulus, coeffs })
    }

    /// `(x - r)`, with `r` given as any integer.
    pub fn linear(modulus: u64, r: i64) -> Result<Self> {
        Self::from_coefficients(modulus, &[-r, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Coefficients lowest degree first.
    pub fn coefficients(&self) -> &[u64] {
        &self.coeffs
    }

    /// Multiplicity of the root 0.
    pub fn zero_root_multiplicity(&self) -> usize {
        self.coeffs.iter().take_while(|&&c| c == 0).count()
    }

    pub fn mul(&self, other: &CharPoly) -> CharPoly {
        let m = self.modulus;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = add_mod(out[i + j], mul_mod(a, b, m), m);
            }
        }
        CharPoly { modulus: m, coeffs: out }
    }

    pub fn pow(&self, k: u32) -> CharPoly {
        let one = CharPoly {
            modulus: self.modulus,
            coeffs: vec![1 % self.modulus],
        };
        (0..k).fold(one, |acc, _| acc.mul(self))
    }
}

/// Highest degree first, e.g. `x^9+3x^8+x+2`.
impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (deg, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str("+")?;
            }
            first = false;
            match (deg, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => f.write_str("x")?,
                (1, _) => write!(f, "{c}x")?,
                (_, 1) => write!(f, "x^{deg}")?,
                _ => write!(f, "{c}x^{deg}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CharPolyJson {
    modulus: u64,
    /// highest degree first
    coefficients: Vec<u64>,
}

impl Serialize for CharPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CharPolyJson {
            modulus: self.modulus,
            coefficients: self.coeffs.iter().rev().copied().collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CharPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = CharPolyJson::deserialize(d)?;
        let low_first: Vec<i64> = raw.coefficients.iter().rev().map(|&c| c as i64).collect();
        CharPoly::from_coefficients(raw.modulus, &low_first).map_err(serde::de::Error::custom)
    }
}

/// `det(xI - M)` by the Berkowitz algorithm, carried out in Z/mZ.
///
/// The algorithm is division-free, so this equals the reduction mod m of
/// the integer characteristic polynomial of the lift to `0..m`.
pub fn char_poly(mat: &ZmMatrix) -> Result<CharPoly> {
    if !mat.is_square() {
        return Err(Error::NonSquare {
            rows: mat.rows(),
            cols: mat.cols(),
        });
    }
    let m = mat.modulus();
    let n = mat.rows();
    // v holds det(xI - A_k) for the leading k x k block, highest degree first
    let mut v = vec![1 % m];
    for k in 0..n {
        // first column of the Toeplitz factor: 1, -a, -R C, -R M C, ...
        let mut col = Vec::with_capacity(k + 2);
        col.push(1 % m);
        col.push((m - mat.get(k, k)) % m);
        let mut w: Vec<u64> = (0..k).map(|i| mat.get(i, k)).collect();
        for _ in 0..k {
            let rc = (0..k).fold(0, |acc, j| add_mod(acc, mul_mod(mat.get(k, j), w[j], m), m));
            col.push((m - rc) % m);
            w = (0..k)
                .map(|i| (0..k).fold(0, |acc, j| add_mod(acc, mul_mod(mat.get(i, j), w[j], m), m)))
                .collect();
        }
        let next: Vec<u64> = (0..k + 2)
            .map(|i| {
                (0..=i.min(k)).fold(0, |acc, j| add_mod(acc, mul_mod(col[i - j], v[j], m), m))
            })
            .collect();
        v = next;
    }
    v.reverse();
    Ok(CharPoly {
        modulus: m,
        coeffs: v,
    })
}

/// Invariant factors `d1 | d2 | ... | dr` of an integer matrix, `r` its rank.
pub fn smith_normal_form(rows: &[Vec<i64>]) -> Vec<BigInt> {
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let nr = a.len();
    let nc = a.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();
    for t in 0..nr.min(nc) {
        loop {
            let pivot = (t..nr)
                .flat_map(|i| (t..nc).map(move |j| (i, j)))
                .filter(|&(i, j)| !a[i][j].is_zero())
                .min_by(|&(i, j), &(k, l)| a[i][j].abs().cmp(&a[k][l].abs()));
            let Some((pi, pj)) = pivot else {
                return finish_smith(diag);
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let p = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..nr {
                let q = a[i][t].div_floor(&p);
                if !q.is_zero() {
                    for j in t..nc {
                        let s = &q * &a[t][j];
                        a[i][j] -= s;
                    }
                }
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..nc {
                let q = a[t][j].div_floor(&p);
                if !q.is_zero() {
                    for row in a.iter_mut().skip(t) {
                        let s = &q * &row[t];
                        row[j] -= s;
                    }
                }
                clean &= a[t][j].is_zero();
            }
            if clean {
                diag.push(p.abs());
                break;
            }
        }
    }
    finish_smith(diag)
}

/// Turn a diagonal into invariant factors: `diag(a, b) ~ diag(gcd, lcm)`.
fn finish_smith(mut d: Vec<BigInt>) -> Vec<BigInt> {
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
    d
}

/// Rank over the field Z/pZ of the entries reduced mod `p`.
pub fn rank_mod_p(mat: &ZmMatrix, p: u64) -> Result<usize> {
    mat.rank_mod_p(p)
}

/// Generator of the ideal of `k x k` minors in Z/mZ for `k = 1..=min(rows, cols)`,
/// normalized to a divisor of m with the zero ideal written as 0.
pub fn elementary_ideals(mat: &ZmMatrix) -> Vec<u64> {
    let m = mat.modulus();
    let mut prod = 1 % m;
    mat.smith_form()
        .into_iter()
        .map(|d| {
            prod = mul_mod(prod, d, m);
            crate::zmat::ideal_generator(prod, m)
        })
        .collect()
}

/// Whether `P a Q = b` for some permutation matrices `P`, `Q`.
pub fn permutation_equivalent(a: &ZmMatrix, b: &ZmMatrix) -> Result<bool> {
    permutation_equivalent_with_limit(a, b, DEFAULT_PERMUTATION_LIMIT)
}

pub fn permutation_equivalent_with_limit(a: &ZmMatrix, b: &ZmMatrix, limit: usize) -> Result<bool> {
    let side = a.rows().max(a.cols());
    if side > limit {
        return Err(Error::SizeLimitExceeded {
            what: "permutation equivalence",
            size: side,
            limit,
        });
    }
    if (a.rows(), a.cols(), a.modulus()) != (b.rows(), b.cols(), b.modulus()) {
        return Ok(false);
    }
    let sorted = |row: Vec<u64>| {
        let mut r = row;
        r.sort_unstable();
        r
    };
    let ra: Vec<Vec<u64>> = a.to_rows().into_iter().map(sorted).collect();
    let rb: Vec<Vec<u64>> = b.to_rows().into_iter().map(sorted).collect();
    let mut assignment = Vec::with_capacity(a.rows());
    let mut used = vec![false; b.rows()];
    Ok(match_rows(a, b, &ra, &rb, &mut assignment, &mut used))
}

fn match_rows(
    a: &ZmMatrix,
    b: &ZmMatrix,
    ra: &[Vec<u64>],
    rb: &[Vec<u64>],
    assignment: &mut Vec<usize>,
    used: &mut [bool],
) -> bool {
    let i = assignment.len();
    if i == a.rows() {
        // rows of `a` reordered to line up with `b`; compare column multisets
        let mut ca: Vec<Vec<u64>> = (0..a.cols())
            .map(|j| {
                let mut col = vec![0; a.rows()];
                for (r, &target) in assignment.iter().enumerate() {
                    col[target] = a.get(r, j);
                }
                col
            })
            .collect();
        let mut cb: Vec<Vec<u64>> = (0..b.cols()).map(|j| (0..b.rows()).map(|r| b.get(r, j)).collect()).collect();
        ca.sort_unstable();
        cb.sort_unstable();
        return ca == cb;
    }
    let mut tried: Vec<Vec<u64>> = Vec::new();
    for k in 0..b.rows() {
        if used[k] || ra[i] != rb[k] {
            continue;
        }
        // identical target rows are interchangeable
        let row_k: Vec<u64> = (0..b.cols()).map(|j| b.get(k, j)).collect();
        if tried.contains(&row_k) {
            continue;
        }
        used[k] = true;
        assignment.push(k);
        if match_rows(a, b, ra, rb, assignment, used) {
            return true;
        }
        assignment.pop();
        used[k] = false;
        tried.push(row_k);
    }
    false
}

/// Recomputed matrix invariants set against reference values.
#[derive(Clone, Debug, Serialize)]
pub struct DiscrepancyReport {
    pub recomputed: ZmMatrix,
    pub recomputed_char_poly: CharPoly,
    pub reference: ZmMatrix,
    pub reference_char_poly: CharPoly,
    pub stated_char_poly: Option<CharPoly>,
    pub permutation_equivalent: bool,
    pub char_poly_matches: bool,
}

impl DiscrepancyReport {
    /// Compare a recomputed square matrix with a reference matrix and,
    /// optionally, a separately stated characteristic polynomial.
    pub fn new(recomputed: &ZmMatrix, reference: &ZmMatrix, stated_char_poly: Option<CharPoly>) -> Result<Self> {
        let recomputed_char_poly = char_poly(recomputed)?;
        let reference_char_poly = char_poly(reference)?;
        let target = stated_char_poly.as_ref().unwrap_or(&reference_char_poly);
        Ok(DiscrepancyReport {
            permutation_equivalent: permutation_equivalent(recomputed, reference)?,
            char_poly_matches: &recomputed_char_poly == target,
            recomputed: recomputed.clone(),
            recomputed_char_poly,
            reference: reference.clone(),
            reference_char_poly,
            stated_char_poly,
        })
    }

    pub fn is_consistent(&self) -> bool {
        self.permutation_equivalent && self.char_poly_matches
    }
}

impl fmt::Display for DiscrepancyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "recomputed matrix (mod {}):", self.recomputed.modulus())?;
        for row in self.recomputed.to_rows() {
            let cells: Vec<String> = row.iter().map(u64::to_string).collect();
            writeln!(f, "  [{}]", cells.join(" "))?;
        }
        writeln!(f, "recomputed char poly: {}", self.recomputed_char_poly)?;
        writeln!(f, "reference char poly:  {}", self.reference_char_poly)?;
        if let Some(s) = &self.stated_char_poly {
            writeln!(f, "stated char poly:     {s}")?;
        }
        writeln!(f, "permutation equivalent to reference: {}", self.permutation_equivalent)?;
        write!(f, "char poly matches: {}", self.char_poly_matches)
    }
}
