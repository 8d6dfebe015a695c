//! Shared fixtures and brute-force oracles for the integration tests.
#![allow(dead_code)]

use cocycle_quiver::diagram::{Crossing, LinkDiagram, Sign};
use cocycle_quiver::{Cochain1, Cochain2, Quandle, QuandleMap, ZmMatrix};

pub fn quandle(rows: &[&[i64]]) -> Quandle {
    let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
    Quandle::from_table(&rows).unwrap()
}

/// 4-element quandle coloring the figure-eight knot surjectively.
pub fn figure_eight_quandle() -> Quandle {
    quandle(&[&[1, 3, 4, 2], &[4, 2, 1, 3], &[2, 4, 3, 1], &[3, 1, 2, 4]])
}

/// 4-element quandle whose coloring quivers for `[4,3,3,3]` agree on L7n1 and L7n2.
pub fn l7n_quandle() -> Quandle {
    quandle(&[&[1, 1, 1, 1], &[4, 2, 2, 2], &[3, 3, 3, 3], &[2, 4, 4, 4]])
}

pub fn l7n_map() -> QuandleMap {
    QuandleMap::from_one_based(&[4, 3, 3, 3], 4).unwrap()
}

pub fn l7n_cocycle() -> Cochain2 {
    Cochain2::parse("x(1,2)+2x(1,3)+x(1,4)+2x(2,1)+3x(3,2)+3x(3,4)+x(4,1)", 4, 4).unwrap()
}

pub fn six_quandle() -> Quandle {
    quandle(&[
        &[1, 3, 2, 5, 4, 1],
        &[3, 2, 1, 6, 2, 4],
        &[2, 1, 3, 3, 6, 5],
        &[5, 6, 4, 4, 1, 2],
        &[4, 5, 6, 1, 5, 3],
        &[6, 4, 5, 2, 3, 6],
    ])
}

pub fn six_map() -> QuandleMap {
    QuandleMap::from_one_based(&[2, 4, 6, 6, 4, 2], 6).unwrap()
}

pub const SIX_COCYCLE_Z3: &str = "2x(1,2)+2x(1,3)+2x(1,4)+2x(1,5)+x(2,3)+2x(2,4)+x(3,2)+2x(3,5)\
+2x(4,2)+x(4,5)+2x(5,3)+x(5,4)+x(6,2)+x(6,3)+x(6,4)+x(6,5)";

pub fn six_cocycle_z3() -> Cochain2 {
    Cochain2::parse(SIX_COCYCLE_Z3, 6, 3).unwrap()
}

pub const TABLE_COCHAIN_Z4: &str = "x(1,3)+3x(1,4)+2x(1,5)+3x(2,1)+3x(2,3)+2x(2,4)+x(2,5)\
+x(3,1)+3x(3,5)+3x(3,6)+x(4,1)+x(4,2)+2x(4,5)+3x(4,6)\
+3x(5,1)+x(5,4)+x(5,6)+3x(6,2)+3x(6,4)+x(6,5)";

pub fn table_cochain_z4() -> Cochain2 {
    Cochain2::parse(TABLE_COCHAIN_Z4, 6, 4).unwrap()
}

pub fn table_maps() -> Vec<QuandleMap> {
    [[1, 2, 3, 3, 2, 1], [1, 5, 4, 3, 2, 6], [3, 1, 2, 5, 6, 4]]
        .iter()
        .map(|v| QuandleMap::from_one_based(v, 6).unwrap())
        .collect()
}

pub fn three_quandle() -> Quandle {
    quandle(&[&[1, 1, 2], &[2, 2, 1], &[3, 3, 3]])
}

pub fn three_cocycle_z5() -> Cochain2 {
    Cochain2::parse("2x(1,3)+3x(2,3)+4x(3,1)+4x(3,2)", 3, 5).unwrap()
}

pub fn l6_quandle() -> Quandle {
    quandle(&[&[1, 3, 1, 3], &[4, 2, 4, 2], &[3, 1, 3, 1], &[2, 4, 2, 4]])
}

pub fn l6_map() -> QuandleMap {
    QuandleMap::from_one_based(&[4, 2, 4, 2], 4).unwrap()
}

/// All quandles in the test battery of size at most `max`.
pub fn battery(max: usize) -> Vec<(&'static str, Quandle)> {
    let mut out = vec![
        ("T1", Quandle::trivial(1)),
        ("T2", Quandle::trivial(2)),
        ("T3", Quandle::trivial(3)),
        ("R3", Quandle::dihedral(3)),
        ("T4", Quandle::trivial(4)),
        ("R4", Quandle::dihedral(4)),
        ("F8", figure_eight_quandle()),
        ("L7N", l7n_quandle()),
        ("L6", l6_quandle()),
        ("Q3", three_quandle()),
        ("R5", Quandle::dihedral(5)),
        ("Q6", six_quandle()),
    ];
    out.retain(|(_, q)| q.size() <= max);
    out
}

/// Every assignment of colors to arcs, filtered by the crossing relations.
pub fn brute_force_colorings(d: &LinkDiagram, q: &Quandle) -> Vec<Vec<usize>> {
    let n = q.size();
    let arcs = d.arc_count();
    let total = n.pow(arcs as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut v = vec![0; arcs];
        let mut c = code;
        for slot in v.iter_mut().rev() {
            *slot = c % n;
            c /= n;
        }
        let ok = d.crossings().iter().all(|c| match c.sign {
            Sign::Positive => v[c.under_out] == q.op(v[c.under_in], v[c.over]),
            Sign::Negative => v[c.under_in] == q.op(v[c.under_out], v[c.over]),
        });
        if ok {
            out.push(v);
        }
    }
    out
}

/// `ψ` with `ψ(x) - ψ(x▷y) = φ(x, y)` by trying every `ψ`.
pub fn exhaustive_coboundary_preimage(q: &Quandle, phi: &Cochain2) -> Option<Vec<u64>> {
    let n = q.size();
    let m = phi.modulus();
    let total = (m as usize).pow(n as u32);
    (0..total).find_map(|code| {
        let mut psi = vec![0u64; n];
        let mut c = code;
        for slot in psi.iter_mut() {
            *slot = (c % m as usize) as u64;
            c /= m as usize;
        }
        let ok = (0..n).all(|x| (0..n).all(|y| (psi[x] + m - psi[q.op(x, y)]) % m == phi.get(x, y)));
        ok.then_some(psi)
    })
}

/// Polynomials over Z/mZ as coefficient vectors, lowest degree first.
fn poly_mul(a: &[i64], b: &[i64], m: i64) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y).rem_euclid(m);
        }
    }
    out
}

fn poly_add(a: &[i64], b: &[i64], sign: i64, m: i64) -> Vec<i64> {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] = *x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] = (out[i] + sign * y).rem_euclid(m);
    }
    out
}

/// `det(xI - M)` by cofactor expansion along the first row, lowest degree first.
pub fn cofactor_char_poly(rows: &[Vec<i64>], m: i64) -> Vec<i64> {
    let n = rows.len();
    let entry = |i: usize, j: usize| -> Vec<i64> {
        let c = (-rows[i][j]).rem_euclid(m);
        if i == j {
            vec![c, 1 % m]
        } else {
            vec![c]
        }
    };
    fn det(entry: &dyn Fn(usize, usize) -> Vec<i64>, rows: &[usize], cols: &[usize], m: i64) -> Vec<i64> {
        if rows.is_empty() {
            return vec![1 % m];
        }
        let mut acc = vec![0];
        for (k, &c) in cols.iter().enumerate() {
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let minor = det(entry, &rows[1..], &rest, m);
            let term = poly_mul(&entry(rows[0], c), &minor, m);
            acc = poly_add(&acc, &term, if k % 2 == 0 { 1 } else { -1 }, m);
        }
        acc
    }
    let idx: Vec<usize> = (0..n).collect();
    let mut p = det(&entry, &idx, &idx, m);
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
    p
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Integer determinant by cofactor expansion (small matrices only).
pub fn int_det(a: &[Vec<i128>]) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|c| {
            let minor: Vec<Vec<i128>> = a[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &x)| x).collect())
                .collect();
            let s = if c % 2 == 0 { 1 } else { -1 };
            s * a[0][c] * int_det(&minor)
        })
        .sum()
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// gcd of all `k x k` minors, for `k = 1..=min(rows, cols)`.
pub fn minor_gcds(rows: &[Vec<i64>]) -> Vec<i128> {
    let r = rows.len();
    let c = rows.first().map_or(0, |x| x.len());
    (1..=r.min(c))
        .map(|k| {
            let mut g = 0;
            for rs in subsets(r, k) {
                for cs in subsets(c, k) {
                    let sub: Vec<Vec<i128>> = rs
                        .iter()
                        .map(|&i| cs.iter().map(|&j| rows[i][j] as i128).collect())
                        .collect();
                    g = gcd(g, int_det(&sub));
                }
            }
            g
        })
        .collect()
}

/// Ideal generators of the `k x k` minors in Z/mZ by enumeration.
pub fn minor_ideals_mod(mat: &ZmMatrix) -> Vec<u64> {
    let m = mat.modulus() as i128;
    let rows: Vec<Vec<i64>> = mat.lift();
    minor_gcds(&rows)
        .into_iter()
        .map(|g| {
            let g = gcd(g, m);
            if g == m {
                0
            } else {
                g as u64
            }
        })
        .collect()
}

pub fn coboundary_of(q: &Quandle, psi: &[i64], m: u64) -> Cochain2 {
    cocycle_quiver::chain::coboundary(q, &Cochain1::new(m, psi).unwrap()).unwrap()
}

/// Insert a kink into the arc `arc`: a new arc `new` is created downstream
/// of a one-crossing loop. `over_first` picks which of the two loop strands
/// passes over; the crossing sign is free.
pub fn add_kink(d: &LinkDiagram, arc: usize, sign: Sign, over_first: bool) -> LinkDiagram {
    let new = d.arc_count();
    let mut crossings: Vec<Crossing> = d
        .crossings()
        .iter()
        .map(|c| {
            let mut c = *c;
            if c.under_in == arc {
                c.under_in = new;
            }
            c
        })
        .collect();
    // the strand goes arc -> (under) -> new, and the loop passes over it using
    // whichever arc is on top
    let over = if over_first { arc } else { new };
    crossings.push(Crossing::new(sign, over, arc, new));
    LinkDiagram::new(new + 1, crossings, d.free_loops()).unwrap()
}

/// Closure of a braid word on `strands` strands; generator `i` (1-based,
/// negative for inverses) crosses strand `i` over strand `i+1`.
pub fn braid_closure(strands: usize, word: &[i64]) -> LinkDiagram {
    // arc currently on each strand position, arcs allocated as we go
    let mut pos: Vec<usize> = (0..strands).collect();
    let mut next = strands;
    let mut crossings = Vec::new();
    for &g in word {
        let i = g.unsigned_abs() as usize - 1;
        // the strand at i moves to i+1 and passes over; the strand at i+1 goes under
        let (over, under) = if g > 0 { (pos[i], pos[i + 1]) } else { (pos[i + 1], pos[i]) };
        let out = next;
        next += 1;
        let sign = if g > 0 { Sign::Positive } else { Sign::Negative };
        crossings.push(Crossing::new(sign, over, under, out));
        if g > 0 {
            pos[i + 1] = over;
            pos[i] = out;
        } else {
            pos[i] = over;
            pos[i + 1] = out;
        }
    }
    // close up: the arc leaving the bottom of position p is the one that
    // entered the top of position p
    let mut parent: Vec<usize> = (0..next).collect();
    fn find(parent: &mut [usize], mut a: usize) -> usize {
        while parent[a] != a {
            a = parent[a];
        }
        a
    }
    for (p, &bottom) in pos.iter().enumerate() {
        let (a, b) = (find(&mut parent, bottom), find(&mut parent, p));
        parent[a.max(b)] = a.min(b);
    }
    let roots: Vec<usize> = (0..next).map(|a| find(&mut parent, a)).collect();
    let mut uniq = roots.clone();
    uniq.sort_unstable();
    uniq.dedup();
    let ids: Vec<usize> = roots.iter().map(|r| uniq.binary_search(r).unwrap()).collect();
    let crossings = crossings
        .into_iter()
        .map(|c: Crossing| Crossing::new(c.sign, ids[c.over], ids[c.under_in], ids[c.under_out]))
        .collect();
    LinkDiagram::new(uniq.len(), crossings, 0).unwrap()
}
