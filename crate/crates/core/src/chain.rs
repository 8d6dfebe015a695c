//! Quandle chain and cochain complexes with Z/mZ coefficients.
//!
//! The boundary follows the usual convention
//!
//! ```text
//! ∂(x1..xk) = Σ_{i=1..k} (-1)^i [ (x1..x̂i..xk) - (x1▷xi, .., x(i-1)▷xi, x(i+1)..xk) ]
//! ```
//!
//! on the quotient by degenerate tuples (some `xj = x(j+1)`). In degree 2 the
//! cocycle condition it produces is
//! `φ(x,y) + φ(x▷y,z) = φ(x,z) + φ(x▷z,y▷z)` together with `φ(x,x) = 0`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::Quandle;
use crate::error::{Error, Result};
use crate::zmat::{add_mod, check_modulus, reduce, sub_mod, ZmMatrix};

/// Cap on `n^k` when enumerating chain bases.
pub const DEFAULT_CHAIN_BASIS_LIMIT: usize = 200_000;
/// Largest quandle accepted by [`cocycle_space`].
pub const DEFAULT_COCYCLE_SPACE_LIMIT: usize = 8;

/// A 1-cochain `ψ: X -> Z/mZ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cochain1 {
    modulus: u64,
    values: Vec<u64>,
}

impl Cochain1 {
    pub fn new(modulus: u64, values: &[i64]) -> Result<Self> {
        check_modulus(modulus)?;
        Ok(Cochain1 {
            modulus,
            values: values.iter().map(|&v| reduce(v, modulus)).collect(),
        })
    }

    pub fn zero(n: usize, modulus: u64) -> Result<Self> {
        Self::new(modulus, &vec![0; n])
    }

    pub fn quandle_size(&self) -> usize {
        self.values.len()
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn get(&self, x: usize) -> u64 {
        self.values[x]
    }
}

/// A 2-cochain `φ: X × X -> Z/mZ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cochain2 {
    size: usize,
    modulus: u64,
    values: Vec<u64>,
}

impl Cochain2 {
    pub fn zero(n: usize, modulus: u64) -> Result<Self> {
        check_modulus(modulus)?;
        Ok(Cochain2 {
            size: n,
            modulus,
            values: vec![0; n * n],
        })
    }

    /// From rows of signed integers, reduced mod `modulus`.
    pub fn from_rows(modulus: u64, rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        let mut c = Self::zero(n, modulus)?;
        for (x, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::SizeMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            for (y, &v) in row.iter().enumerate() {
                c.values[x * n + y] = reduce(v, modulus);
            }
        }
        Ok(c)
    }

    /// The elementary function `χ_{i,j}` (0-based `i`, `j`).
    pub fn chi(n: usize, modulus: u64, i: usize, j: usize) -> Result<Self> {
        let mut c = Self::zero(n, modulus)?;
        c.set(i, j, 1);
        Ok(c)
    }

    pub fn quandle_size(&self) -> usize {
        self.size
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u64 {
        self.values[x * self.size + y]
    }

    pub fn set(&mut self, x: usize, y: usize, v: u64) {
        self.values[x * self.size + y] = v % self.modulus;
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.values.chunks(self.size.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn add(&self, other: &Cochain2) -> Result<Cochain2> {
        self.same_shape(other)?;
        let m = self.modulus;
        Ok(Cochain2 {
            size: self.size,
            modulus: m,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| add_mod(a, b, m))
                .collect(),
        })
    }

    pub fn scale(&self, k: u64) -> Cochain2 {
        let m = self.modulus;
        Cochain2 {
            size: self.size,
            modulus: m,
            values: self.values.iter().map(|&a| crate::zmat::mul_mod(a, k, m)).collect(),
        }
    }

    fn same_shape(&self, other: &Cochain2) -> Result<()> {
        if self.size != other.size {
            return Err(Error::SizeMismatch {
                expected: self.size,
                found: other.size,
            });
        }
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                expected: self.modulus,
                found: other.modulus,
            });
        }
        Ok(())
    }

    /// Values on the non-degenerate pairs `(x, y)`, `x != y`, in lexicographic order.
    fn off_diagonal(&self) -> Vec<u64> {
        let n = self.size;
        (0..n)
            .flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y)))
            .map(|(x, y)| self.get(x, y))
            .collect()
    }

    /// Parse the `x(i,j)` notation, e.g. `x(1,2)+2x(1,3)+3*x(4,1)`.
    pub fn parse(expr: &str, n: usize, modulus: u64) -> Result<Self> {
        let mut c = Self::zero(n, modulus)?;
        let mut p = CochainParser {
            chars: expr.char_indices().filter(|(_, ch)| !ch.is_whitespace()).collect(),
            at: 0,
            len: expr.len(),
        };
        if p.peek().is_none() {
            return Ok(c);
        }
        loop {
            let coeff = if p.peek().is_some_and(|ch| ch.is_ascii_digit()) {
                let k = p.int()?;
                if p.peek() == Some('*') {
                    p.at += 1;
                }
                k
            } else {
                1
            };
            p.expect('x')?;
            p.expect('(')?;
            let i = p.int()?;
            p.expect(',')?;
            let j = p.int()?;
            p.expect(')')?;
            for v in [i, j] {
                if v < 1 || v > n as u128 {
                    return Err(Error::OutOfRange {
                        what: "cochain index",
                        value: i64::try_from(v).unwrap_or(i64::MAX),
                        max: n,
                    });
                }
            }
            let (i, j) = (i as usize - 1, j as usize - 1);
            let cur = c.get(i, j);
            c.set(i, j, add_mod(cur, (coeff % modulus as u128) as u64, modulus));
            match p.peek() {
                None => break,
                Some('+') => p.at += 1,
                Some(ch) => {
                    return Err(Error::Syntax {
                        pos: p.pos(),
                        message: format!("expected '+' or end, found {ch:?}"),
                    })
                }
            }
        }
        Ok(c)
    }
}

struct CochainParser {
    chars: Vec<(usize, char)>,
    at: usize,
    len: usize,
}

impl CochainParser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).map(|&(_, c)| c)
    }

    fn pos(&self) -> usize {
        self.chars.get(self.at).map_or(self.len, |&(p, _)| p)
    }

    fn expect(&mut self, want: char) -> Result<()> {
        match self.peek() {
            Some(c) if c == want => {
                self.at += 1;
                Ok(())
            }
            other => Err(Error::Syntax {
                pos: self.pos(),
                message: match other {
                    Some(c) => format!("expected {want:?}, found {c:?}"),
                    None => format!("expected {want:?}, found end of input"),
                },
            }),
        }
    }

    fn int(&mut self) -> Result<u128> {
        let start = self.pos();
        let mut v: u128 = 0;
        let mut any = false;
        while let Some(c) = self.peek().filter(|c| c.is_ascii_digit()) {
            v = v
                .checked_mul(10)
                .and_then(|v| v.checked_add(c as u128 - '0' as u128))
                .ok_or(Error::Syntax {
                    pos: start,
                    message: "integer too large".into(),
                })?;
            self.at += 1;
            any = true;
        }
        if !any {
            return Err(Error::Syntax {
                pos: start,
                message: "expected an integer".into(),
            });
        }
        Ok(v)
    }
}

/// Canonical form: terms in lexicographic `(i, j)` order, coefficient 1
/// suppressed, zero cochain printed as the empty string.
impl fmt::Display for Cochain2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for x in 0..self.size {
            for y in 0..self.size {
                let v = self.get(x, y);
                if v == 0 {
                    continue;
                }
                if !first {
                    f.write_str("+")?;
                }
                first = false;
                if v != 1 {
                    write!(f, "{v}")?;
                }
                write!(f, "x({},{})", x + 1, y + 1)?;
            }
        }
        Ok(())
    }
}

/// Where a cochain fails to be a 2-cocycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CocycleDefect {
    /// `φ(x, x) != 0`
    Diagonal(usize),
    /// the identity fails at `(x, y, z)`
    Triple(usize, usize, usize),
}

impl CocycleDefect {
    pub fn into_error(self) -> Error {
        let witness = match self {
            CocycleDefect::Diagonal(x) => vec![x + 1, x + 1],
            CocycleDefect::Triple(x, y, z) => vec![x + 1, y + 1, z + 1],
        };
        Error::NonCocycle { witness }
    }
}

fn check_size(q: &Quandle, n: usize) -> Result<()> {
    if q.size() != n {
        return Err(Error::SizeMismatch {
            expected: q.size(),
            found: n,
        });
    }
    Ok(())
}

/// First failure of the 2-cocycle condition, if any.
pub fn cocycle_defect(q: &Quandle, phi: &Cochain2) -> Result<Option<CocycleDefect>> {
    check_size(q, phi.quandle_size())?;
    let n = q.size();
    let m = phi.modulus();
    if let Some(x) = (0..n).find(|&x| phi.get(x, x) != 0) {
        return Ok(Some(CocycleDefect::Diagonal(x)));
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let lhs = add_mod(phi.get(x, y), phi.get(q.op(x, y), z), m);
                let rhs = add_mod(phi.get(x, z), phi.get(q.op(x, z), q.op(y, z)), m);
                if lhs != rhs {
                    return Ok(Some(CocycleDefect::Triple(x, y, z)));
                }
            }
        }
    }
    Ok(None)
}

pub fn is_cocycle(q: &Quandle, phi: &Cochain2) -> Result<bool> {
    Ok(cocycle_defect(q, phi)?.is_none())
}

/// `NonCocycle` with a witness unless `phi` is a 2-cocycle.
pub fn check_cocycle(q: &Quandle, phi: &Cochain2) -> Result<()> {
    match cocycle_defect(q, phi)? {
        None => Ok(()),
        Some(d) => Err(d.into_error()),
    }
}

/// Whether an operation verifies the 2-cocycle condition before using a
/// cochain. `Skip` evaluates weights for arbitrary cochains; the results are
/// then diagram-dependent rather than link invariants.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CocycleCheck {
    #[default]
    Verify,
    Skip,
}

impl CocycleCheck {
    pub fn run(self, q: &Quandle, phi: &Cochain2) -> Result<()> {
        match self {
            CocycleCheck::Verify => check_cocycle(q, phi),
            CocycleCheck::Skip => check_size(q, phi.quandle_size()),
        }
    }
}

/// `(δψ)(x, y) = ψ(x) - ψ(x ▷ y)`.
pub fn coboundary(q: &Quandle, psi: &Cochain1) -> Result<Cochain2> {
    check_size(q, psi.quandle_size())?;
    let n = q.size();
    let m = psi.modulus();
    let mut out = Cochain2::zero(n, m)?;
    for x in 0..n {
        for y in 0..n {
            out.set(x, y, sub_mod(psi.get(x), psi.get(q.op(x, y)), m));
        }
    }
    Ok(out)
}

/// A `ψ` with `δψ = φ`, if `φ` is a coboundary.
pub fn is_coboundary(q: &Quandle, phi: &Cochain2) -> Result<Option<Cochain1>> {
    check_size(q, phi.quandle_size())?;
    let n = q.size();
    let m = phi.modulus();
    // δ in degree 1 is the transpose of ∂ in degree 2
    let delta = boundary_matrix(q, 2, m)?.transpose();
    let Some(sol) = delta.solve(&phi.off_diagonal()) else {
        return Ok(None);
    };
    if (0..n).any(|x| phi.get(x, x) != 0) {
        return Ok(None);
    }
    let psi = Cochain1 {
        modulus: m,
        values: sol,
    };
    debug_assert_eq!(&coboundary(q, &psi)?, phi);
    Ok(Some(psi))
}

/// Generators of the Z/mZ-module of 2-cocycles.
pub fn cocycle_space(q: &Quandle, m: u64) -> Result<Vec<Cochain2>> {
    cocycle_space_with_limit(q, m, DEFAULT_COCYCLE_SPACE_LIMIT)
}

pub fn cocycle_space_with_limit(q: &Quandle, m: u64, limit: usize) -> Result<Vec<Cochain2>> {
    check_modulus(m)?;
    let n = q.size();
    if n > limit {
        return Err(Error::SizeLimitExceeded {
            what: "cocycle space",
            size: n,
            limit,
        });
    }
    let constraints = boundary_matrix(q, 3, m)?.transpose();
    let pairs = nondegenerate_tuples(n, 2);
    let mut out = Vec::new();
    for g in constraints.kernel() {
        let mut phi = Cochain2::zero(n, m)?;
        for (t, v) in pairs.iter().zip(g) {
            phi.set(t[0], t[1], v);
        }
        debug_assert!(is_cocycle(q, &phi)?);
        out.push(phi);
    }
    Ok(out)
}

/// Non-degenerate `k`-tuples in lexicographic order.
pub fn nondegenerate_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in 0..n {
            if cur.last() == Some(&x) {
                continue;
            }
            cur.push(x);
            rec(n, k, cur, out);
            cur.pop();
        }
    }
    rec(n, k, &mut cur, &mut out);
    out
}

/// Matrix of `∂_k : C_k^Q -> C_(k-1)^Q` in the bases of non-degenerate
/// tuples (rows: degree `k-1`, columns: degree `k`).
pub fn boundary_matrix(q: &Quandle, k: usize, m: u64) -> Result<ZmMatrix> {
    boundary_matrix_with_limit(q, k, m, DEFAULT_CHAIN_BASIS_LIMIT)
}

pub fn boundary_matrix_with_limit(q: &Quandle, k: usize, m: u64, limit: usize) -> Result<ZmMatrix> {
    check_modulus(m)?;
    if k == 0 {
        return Err(Error::OutOfRange {
            what: "boundary degree",
            value: 0,
            max: usize::MAX,
        });
    }
    let n = q.size();
    let size = n.checked_pow(k as u32).unwrap_or(usize::MAX);
    if size > limit {
        return Err(Error::SizeLimitExceeded {
            what: "chain basis",
            size,
            limit,
        });
    }
    let domain = nondegenerate_tuples(n, k);
    let codomain = nondegenerate_tuples(n, k - 1);
    let index: HashMap<&[usize], usize> = codomain
        .iter()
        .enumerate()
        .map(|(i, t)| (t.as_slice(), i))
        .collect();
    let mut mat = ZmMatrix::zeros(m, codomain.len(), domain.len())?;
    let one = 1 % m;
    let minus_one = m - one;
    for (col, t) in domain.iter().enumerate() {
        for i in 0..k {
            let sign = if i % 2 == 0 { minus_one } else { one }; // (-1)^(i+1)
            let face0: Vec<usize> = t.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
            let face1: Vec<usize> = t
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(j, &x)| if j < i { q.op(x, t[i]) } else { x })
                .collect();
            if let Some(&row) = index.get(face0.as_slice()) {
                mat.add_to(row, col, sign);
            }
            if let Some(&row) = index.get(face1.as_slice()) {
                mat.add_to(row, col, m - sign);
            }
        }
    }
    Ok(mat)
}
