//! Tabulating quiver polynomials over a list of diagrams, one column per
//! endomorphism.

use std::fmt;

use serde::Serialize;

use crate::algebra::{Quandle, QuandleMap};
use crate::chain::{CocycleCheck, Cochain2};
use crate::diagram::LinkDiagram;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::poly::QuiverPolynomial;
use crate::quiver::build_quiver_with;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BatchRow {
    pub name: String,
    /// One polynomial per endomorphism, or the error that stopped this row.
    pub result: std::result::Result<Vec<QuiverPolynomial>, Error>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BatchTable {
    pub maps: Vec<QuandleMap>,
    pub rows: Vec<BatchRow>,
}

/// `Φ^{f,φ}` for every diagram and every `f` in `maps`. The cocycle and the
/// maps are validated once up front; per-diagram failures are kept in the
/// row instead of aborting the table. Rows come back in input order.
pub fn batch(
    diagrams: &[LinkDiagram],
    q: &Quandle,
    phi: &Cochain2,
    maps: &[QuandleMap],
    check: CocycleCheck,
    exec: Execution,
) -> Result<BatchTable> {
    check.run(q, phi)?;
    for (i, f) in maps.iter().enumerate() {
        if !q.is_endomorphism(f)? {
            return Err(Error::NonEndomorphismInS { index: i + 1 });
        }
    }
    // rows run in parallel; each row's own work stays sequential
    let rows = exec.map(diagrams, |d| BatchRow {
        name: d.name().unwrap_or("?").to_string(),
        result: row(d, q, phi, maps, check),
    });
    Ok(BatchTable {
        maps: maps.to_vec(),
        rows,
    })
}

fn row(
    d: &LinkDiagram,
    q: &Quandle,
    phi: &Cochain2,
    maps: &[QuandleMap],
    check: CocycleCheck,
) -> Result<Vec<QuiverPolynomial>> {
    let quiver = build_quiver_with(d, q, maps, phi, check, Execution::Sequential)?;
    let mut polys = vec![QuiverPolynomial::zero(phi.modulus())?; maps.len()];
    let w = quiver.weights();
    for e in quiver.edges() {
        polys[e.map].add_term(w[e.source], w[e.target], 1);
    }
    Ok(polys)
}

/// Tab-separated: a header line, then one line per diagram.
impl fmt::Display for BatchTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "diagram")?;
        for m in &self.maps {
            write!(f, "\t{m}")?;
        }
        writeln!(f)?;
        for r in &self.rows {
            write!(f, "{}", r.name)?;
            match &r.result {
                Ok(polys) => {
                    for p in polys {
                        write!(f, "\t{p}")?;
                    }
                }
                Err(e) => write!(f, "\terror: {e}")?,
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct RowJson<'a> {
    name: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    polynomials: Option<&'a [QuiverPolynomial]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    text: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

impl Serialize for BatchTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let rows: Vec<RowJson> = self
            .rows
            .iter()
            .map(|r| match &r.result {
                Ok(p) => RowJson {
                    name: &r.name,
                    polynomials: Some(p),
                    text: Some(p.iter().map(|x| x.to_string()).collect()),
                    error: None,
                },
                Err(e) => RowJson {
                    name: &r.name,
                    polynomials: None,
                    text: None,
                    error: Some(e.to_string()),
                },
            })
            .collect();
        let mut st = s.serialize_struct("BatchTable", 2)?;
        st.serialize_field("maps", &self.maps.iter().map(|m| m.to_one_based()).collect::<Vec<_>>())?;
        st.serialize_field("rows", &rows)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn empty_batch() {
        let q = Quandle::dihedral(3);
        let phi = Cochain2::zero(3, 3).unwrap();
        let t = batch(&[], &q, &phi, &[QuandleMap::identity(3)], CocycleCheck::Verify, Execution::default()).unwrap();
        assert!(t.rows.is_empty());
        assert_eq!(t.to_string(), "diagram\t[1,2,3]\n");
    }

    #[test]
    fn order_and_execution_independent() {
        let q = Quandle::dihedral(3);
        let phi = Cochain2::zero(3, 3).unwrap();
        let maps = q.endomorphisms().unwrap();
        let ds: Vec<LinkDiagram> = corpus::all().iter().take(12).cloned().collect();
        let a = batch(&ds, &q, &phi, &maps, CocycleCheck::Verify, Execution::Parallel).unwrap();
        let b = batch(&ds, &q, &phi, &maps, CocycleCheck::Verify, Execution::Sequential).unwrap();
        assert_eq!(a, b);
        let names: Vec<&str> = a.rows.iter().map(|r| r.name.as_str()).collect();
        let want: Vec<&str> = ds.iter().map(|d| d.name().unwrap()).collect();
        assert_eq!(names, want);
    }
}
