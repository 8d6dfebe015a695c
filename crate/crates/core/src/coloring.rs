//! X-colorings of link diagrams, Boltzmann weights and the 2-cocycle
//! invariant `Σ_v s^{φ(v)}`.
//!
//! A coloring is a vector of 0-based quandle elements indexed by arc.

use crate::algebra::{Quandle, QuandleMap};
use crate::chain::{CocycleCheck, Cochain2};
use crate::diagram::{Crossing, LinkDiagram, Sign};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::poly::WeightPolynomial;
use crate::zmat::{add_mod, sub_mod};

pub type Coloring = Vec<usize>;

const UNSET: usize = usize::MAX;

/// `(source, target)` arcs of the relation `color[target] = color[source] ▷ color[over]`.
#[inline]
fn relation(c: &Crossing) -> (usize, usize) {
    match c.sign {
        Sign::Positive => (c.under_in, c.under_out),
        Sign::Negative => (c.under_out, c.under_in),
    }
}

struct Search<'a> {
    d: &'a LinkDiagram,
    q: &'a Quandle,
    touching: Vec<Vec<usize>>,
}

impl<'a> Search<'a> {
    fn new(d: &'a LinkDiagram, q: &'a Quandle) -> Self {
        let mut touching = vec![Vec::new(); d.arc_count()];
        for (i, c) in d.crossings().iter().enumerate() {
            for arc in [c.over, c.under_in, c.under_out] {
                if !touching[arc].contains(&i) {
                    touching[arc].push(i);
                }
            }
        }
        Search { d, q, touching }
    }

    /// Assign `arc := color` and close under the crossing relations.
    /// Returns false on a contradiction.
    fn assign(&self, colors: &mut [usize], arc: usize, color: usize) -> bool {
        colors[arc] = color;
        let mut stack = vec![arc];
        while let Some(a) = stack.pop() {
            for &ci in &self.touching[a] {
                let c = &self.d.crossings()[ci];
                let (src, dst) = relation(c);
                let (x, y, z) = (colors[src], colors[c.over], colors[dst]);
                if y == UNSET {
                    continue;
                }
                if x != UNSET {
                    let want = self.q.op(x, y);
                    if z == UNSET {
                        colors[dst] = want;
                        stack.push(dst);
                    } else if z != want {
                        return false;
                    }
                } else if z != UNSET {
                    colors[src] = self.q.inv_op(z, y);
                    stack.push(src);
                }
            }
        }
        true
    }

    fn extend(&self, colors: &mut Vec<usize>, out: &mut Vec<Coloring>) {
        let Some(arc) = colors.iter().position(|&c| c == UNSET) else {
            out.push(colors.clone());
            return;
        };
        for color in 0..self.q.size() {
            let saved = colors.clone();
            if self.assign(colors, arc, color) {
                self.extend(colors, out);
            }
            *colors = saved;
        }
    }

    fn from_first(&self, color: usize) -> Vec<Coloring> {
        let mut colors = vec![UNSET; self.d.arc_count()];
        let mut out = Vec::new();
        if self.assign(&mut colors, 0, color) {
            self.extend(&mut colors, &mut out);
        }
        out
    }
}

/// All colorings in lexicographic order. Free loops are not arcs; see
/// [`coloring_count`] for the count including them.
pub fn enumerate_colorings(d: &LinkDiagram, q: &Quandle) -> Vec<Coloring> {
    enumerate_colorings_in(d, q, Execution::default())
}

pub fn enumerate_colorings_in(d: &LinkDiagram, q: &Quandle, exec: Execution) -> Vec<Coloring> {
    if d.arc_count() == 0 {
        return vec![Vec::new()];
    }
    let search = Search::new(d, q);
    let firsts: Vec<usize> = (0..q.size()).collect();
    let mut all: Vec<Coloring> = exec.map(&firsts, |&c| search.from_first(c)).into_iter().flatten().collect();
    all.sort_unstable();
    all
}

/// The counting invariant, including a factor `n` per free loop.
pub fn coloring_count(d: &LinkDiagram, q: &Quandle) -> u64 {
    enumerate_colorings(d, q).len() as u64 * free_loop_factor(d, q)
}

pub(crate) fn free_loop_factor(d: &LinkDiagram, q: &Quandle) -> u64 {
    (q.size() as u64).pow(d.free_loops() as u32)
}

/// Check that `v` assigns an element to every arc and satisfies every crossing.
pub fn check_coloring(d: &LinkDiagram, q: &Quandle, v: &[usize]) -> Result<()> {
    if v.len() != d.arc_count() {
        return Err(Error::SizeMismatch {
            expected: d.arc_count(),
            found: v.len(),
        });
    }
    if let Some(&x) = v.iter().find(|&&x| x >= q.size()) {
        return Err(Error::OutOfRange {
            what: "color",
            value: x as i64 + 1,
            max: q.size(),
        });
    }
    for (i, c) in d.crossings().iter().enumerate() {
        let (src, dst) = relation(c);
        if v[dst] != q.op(v[src], v[c.over]) {
            return Err(Error::InvalidColoring { crossing: i + 1 });
        }
    }
    Ok(())
}

pub fn is_coloring(d: &LinkDiagram, q: &Quandle, v: &[usize]) -> bool {
    check_coloring(d, q, v).is_ok()
}

/// Weight of a coloring already known to be valid.
pub(crate) fn weight_of(d: &LinkDiagram, phi: &Cochain2, v: &[usize]) -> u64 {
    let m = phi.modulus();
    d.crossings().iter().fold(0, |acc, c| match c.sign {
        Sign::Positive => add_mod(acc, phi.get(v[c.under_in], v[c.over]), m),
        Sign::Negative => sub_mod(acc, phi.get(v[c.under_out], v[c.over]), m),
    })
}

/// `Σ_c ε(c) φ(x_c, y_c) mod m`: `x_c` is the incoming under color at a
/// positive crossing and the outgoing one at a negative crossing, `y_c` the
/// over color.
pub fn boltzmann_weight(d: &LinkDiagram, q: &Quandle, phi: &Cochain2, v: &[usize]) -> Result<u64> {
    if phi.quandle_size() != q.size() {
        return Err(Error::SizeMismatch {
            expected: q.size(),
            found: phi.quandle_size(),
        });
    }
    check_coloring(d, q, v)?;
    Ok(weight_of(d, phi, v))
}

/// The quandle 2-cocycle invariant. Fails with `NonCocycle` unless `phi` is
/// a 2-cocycle.
pub fn cocycle_invariant(d: &LinkDiagram, q: &Quandle, phi: &Cochain2) -> Result<WeightPolynomial> {
    cocycle_invariant_with(d, q, phi, CocycleCheck::Verify, Execution::default())
}

pub fn cocycle_invariant_with(
    d: &LinkDiagram,
    q: &Quandle,
    phi: &Cochain2,
    check: CocycleCheck,
    exec: Execution,
) -> Result<WeightPolynomial> {
    check.run(q, phi)?;
    let colorings = enumerate_colorings_in(d, q, exec);
    let weights = exec.map(&colorings, |v| weight_of(d, phi, v));
    let mult = free_loop_factor(d, q);
    let mut p = WeightPolynomial::zero(phi.modulus())?;
    for w in weights {
        p.add_term(w, mult);
    }
    Ok(p)
}

/// Apply an endomorphism arcwise.
pub fn apply_map_to_coloring(q: &Quandle, f: &QuandleMap, v: &[usize]) -> Result<Coloring> {
    q.check_endomorphism(f)?;
    v.iter()
        .map(|&x| {
            if x < q.size() {
                Ok(f.apply(x))
            } else {
                Err(Error::OutOfRange {
                    what: "color",
                    value: x as i64 + 1,
                    max: q.size(),
                })
            }
        })
        .collect()
}
