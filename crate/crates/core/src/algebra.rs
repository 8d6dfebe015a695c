//! Finite quandles and maps between them.
//!
//! Elements are `0..n` inside the library. The text format, JSON, `Display`
//! output and error witnesses use `1..=n`, matching the usual operation-table
//! layout where row `x`, column `y` holds `x ▷ y`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest quandle for which [`Quandle::endomorphisms`] runs by default.
pub const DEFAULT_ENDOMORPHISM_LIMIT: usize = 8;

/// A finite quandle given by its operation table, validated against the
/// three axioms. The right-inverse table is precomputed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quandle {
    size: usize,
    table: Vec<usize>,
    inv_table: Vec<usize>,
}

impl Quandle {
    /// Validate a table of 1-based entries (`rows[x-1][y-1] = x ▷ y`).
    pub fn from_table(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Parse("empty quandle table".into()));
        }
        let mut table = Vec::with_capacity(n * n);
        for (x, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::SizeMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            for (y, &v) in row.iter().enumerate() {
                if v < 1 || v as usize > n {
                    return Err(Error::OutOfRangeEntry {
                        row: x + 1,
                        col: y + 1,
                        value: v,
                        size: n,
                    });
                }
                table.push(v as usize - 1);
            }
        }
        Self::from_zero_based(n, table)
    }

    /// Validate a flat row-major table of 0-based entries.
    pub fn from_zero_based(size: usize, table: Vec<usize>) -> Result<Self> {
        if size == 0 {
            return Err(Error::Parse("empty quandle table".into()));
        }
        if table.len() != size * size {
            return Err(Error::SizeMismatch {
                expected: size * size,
                found: table.len(),
            });
        }
        if let Some(i) = table.iter().position(|&v| v >= size) {
            return Err(Error::OutOfRangeEntry {
                row: i / size + 1,
                col: i % size + 1,
                value: table[i] as i64 + 1,
                size,
            });
        }
        let at = |x: usize, y: usize| table[x * size + y];

        for x in 0..size {
            if at(x, x) != x {
                return Err(Error::AxiomViolation {
                    axiom: 1,
                    witness: vec![x + 1],
                });
            }
        }

        let mut inv_table = vec![usize::MAX; size * size];
        for y in 0..size {
            for x in 0..size {
                let z = at(x, y);
                let slot = &mut inv_table[z * size + y];
                if *slot != usize::MAX {
                    // x and *slot both map to z under (- ▷ y)
                    return Err(Error::AxiomViolation {
                        axiom: 2,
                        witness: vec![*slot + 1, x + 1, y + 1],
                    });
                }
                *slot = x;
            }
        }

        for x in 0..size {
            for y in 0..size {
                for z in 0..size {
                    if at(at(x, y), z) != at(at(x, z), at(y, z)) {
                        return Err(Error::AxiomViolation {
                            axiom: 3,
                            witness: vec![x + 1, y + 1, z + 1],
                        });
                    }
                }
            }
        }

        Ok(Quandle {
            size,
            table,
            inv_table,
        })
    }

    /// Trivial quandle: `x ▷ y = x`.
    pub fn trivial(n: usize) -> Self {
        let table = (0..n * n).map(|i| i / n).collect();
        Self::from_zero_based(n, table).expect("trivial quandle")
    }

    /// Dihedral quandle: `x ▷ y = 2y - x mod n`.
    pub fn dihedral(n: usize) -> Self {
        let table = (0..n * n).map(|i| (2 * (i % n) + n - i / n) % n).collect();
        Self::from_zero_based(n, table).expect("dihedral quandle")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// `x ▷ y`
    #[inline]
    pub fn op(&self, x: usize, y: usize) -> usize {
        self.table[x * self.size + y]
    }

    /// The unique `z` with `z ▷ y = x`.
    #[inline]
    pub fn inv_op(&self, x: usize, y: usize) -> usize {
        self.inv_table[x * self.size + y]
    }

    pub fn checked_op(&self, x: usize, y: usize) -> Result<usize> {
        self.check_element(x)?;
        self.check_element(y)?;
        Ok(self.op(x, y))
    }

    pub fn checked_inv_op(&self, x: usize, y: usize) -> Result<usize> {
        self.check_element(x)?;
        self.check_element(y)?;
        Ok(self.inv_op(x, y))
    }

    fn check_element(&self, x: usize) -> Result<()> {
        if x < self.size {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                what: "element",
                value: x as i64 + 1,
                max: self.size,
            })
        }
    }

    /// Rows of 1-based entries.
    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.size)
            .map(|x| (0..self.size).map(|y| self.op(x, y) + 1).collect())
            .collect()
    }

    /// First pair `(x, y)` with `f(x ▷ y) != f(x) ▷ f(y)`, or `None` when
    /// `f` is an endomorphism.
    pub fn endomorphism_defect(&self, f: &QuandleMap) -> Result<Option<(usize, usize)>> {
        if f.source_size() != self.size || f.target_size() != self.size {
            return Err(Error::SizeMismatch {
                expected: self.size,
                found: if f.source_size() != self.size {
                    f.source_size()
                } else {
                    f.target_size()
                },
            });
        }
        for x in 0..self.size {
            for y in 0..self.size {
                if f.apply(self.op(x, y)) != self.op(f.apply(x), f.apply(y)) {
                    return Ok(Some((x, y)));
                }
            }
        }
        Ok(None)
    }

    pub fn is_endomorphism(&self, f: &QuandleMap) -> Result<bool> {
        Ok(self.endomorphism_defect(f)?.is_none())
    }

    /// Like [`Quandle::is_endomorphism`] but reports the failing pair.
    pub fn check_endomorphism(&self, f: &QuandleMap) -> Result<()> {
        match self.endomorphism_defect(f)? {
            None => Ok(()),
            Some((x, y)) => Err(Error::NotEndomorphism {
                map: f.to_string(),
                x: x + 1,
                y: y + 1,
            }),
        }
    }

    /// All endomorphisms in lexicographic order of their value arrays.
    pub fn endomorphisms(&self) -> Result<Vec<QuandleMap>> {
        self.endomorphisms_with_limit(DEFAULT_ENDOMORPHISM_LIMIT)
    }

    pub fn endomorphisms_with_limit(&self, limit: usize) -> Result<Vec<QuandleMap>> {
        if self.size > limit {
            return Err(Error::SizeLimitExceeded {
                what: "endomorphism enumeration",
                size: self.size,
                limit,
            });
        }
        let n = self.size;
        let mut out = Vec::new();
        let mut values = vec![0usize; n];
        self.extend_endomorphism(&mut values, 0, &mut out);
        Ok(out)
    }

    // Assign f(k); prune on any (x, y) with x, y, x▷y all already assigned.
    fn extend_endomorphism(&self, values: &mut [usize], k: usize, out: &mut Vec<QuandleMap>) {
        let n = self.size;
        if k == n {
            out.push(QuandleMap {
                target_size: n,
                values: values.to_vec(),
            });
            return;
        }
        'candidate: for c in 0..n {
            values[k] = c;
            for x in 0..=k {
                for y in 0..=k {
                    let z = self.op(x, y);
                    if z > k || (x != k && y != k && z != k) {
                        continue;
                    }
                    if values[z] != self.op(values[x], values[y]) {
                        continue 'candidate;
                    }
                }
            }
            self.extend_endomorphism(values, k + 1, out);
        }
    }

    /// Text format: `n` on the first line, then `n` rows of `n` entries.
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.size);
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            s.push_str(&cells.join(" "));
            s.push('\n');
        }
        s
    }
}

impl FromStr for Quandle {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut nums = text.split_whitespace().map(|tok| {
            tok.parse::<i64>()
                .map_err(|_| Error::Parse(format!("quandle file: bad integer {tok:?}")))
        });
        let n = nums
            .next()
            .ok_or_else(|| Error::Parse("quandle file: missing size".into()))??;
        if n < 1 {
            return Err(Error::Parse(format!("quandle file: size {n} must be positive")));
        }
        let n = n as usize;
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            let mut row = Vec::with_capacity(n);
            for _ in 0..n {
                let v = nums
                    .next()
                    .ok_or_else(|| Error::Parse("quandle file: table too short".into()))??;
                row.push(v);
            }
            rows.push(row);
        }
        if nums.next().is_some() {
            return Err(Error::Parse("quandle file: trailing entries".into()));
        }
        Quandle::from_table(&rows)
    }
}

/// A map `{1..n} -> {1..m}`, written `[f(1),...,f(n)]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuandleMap {
    target_size: usize,
    values: Vec<usize>,
}

impl QuandleMap {
    pub fn from_one_based(values: &[i64], target_size: usize) -> Result<Self> {
        let values = values
            .iter()
            .map(|&v| {
                if v < 1 || v as usize > target_size {
                    Err(Error::OutOfRange {
                        what: "map value",
                        value: v,
                        max: target_size,
                    })
                } else {
                    Ok(v as usize - 1)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(QuandleMap {
            target_size,
            values,
        })
    }

    pub fn from_zero_based(values: Vec<usize>, target_size: usize) -> Result<Self> {
        if let Some(&v) = values.iter().find(|&&v| v >= target_size) {
            return Err(Error::OutOfRange {
                what: "map value",
                value: v as i64 + 1,
                max: target_size,
            });
        }
        Ok(QuandleMap {
            target_size,
            values,
        })
    }

    pub fn identity(n: usize) -> Self {
        QuandleMap {
            target_size: n,
            values: (0..n).collect(),
        }
    }

    pub fn constant(n: usize, c: usize) -> Self {
        assert!(c < n, "constant value out of range");
        QuandleMap {
            target_size: n,
            values: vec![c; n],
        }
    }

    pub fn source_size(&self) -> usize {
        self.values.len()
    }

    pub fn target_size(&self) -> usize {
        self.target_size
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.values.iter().map(|v| v + 1).collect()
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &QuandleMap) -> Result<QuandleMap> {
        if other.target_size != self.source_size() {
            return Err(Error::SizeMismatch {
                expected: self.source_size(),
                found: other.target_size,
            });
        }
        Ok(QuandleMap {
            target_size: self.target_size,
            values: other.values.iter().map(|&x| self.values[x]).collect(),
        })
    }

    /// Parse `[4,3,3,3]` or `4,3,3,3` (1-based) as an endomorphism candidate
    /// of an `n`-element quandle.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let t = text.trim();
        let t = t.strip_prefix('[').unwrap_or(t);
        let t = t.strip_suffix(']').unwrap_or(t);
        let values = t
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<i64>()
                    .map_err(|_| Error::Parse(format!("map: bad integer {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if values.len() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                found: values.len(),
            });
        }
        Self::from_one_based(&values, n)
    }
}

impl fmt::Display for QuandleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.to_one_based().iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", vals.join(","))
    }
}
