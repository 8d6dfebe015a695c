//! Cocycle quivers: colorings as vertices weighted by their Boltzmann
//! weight, with an edge `v -> f(v)` for every endomorphism `f` in `S`.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::algebra::{Quandle, QuandleMap};
use crate::chain::{CocycleCheck, Cochain2};
use crate::coloring::{enumerate_colorings_in, weight_of, Coloring};
use crate::diagram::LinkDiagram;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::poly::{IntPolynomial, QuiverPolynomial, WeightPolynomial};

/// Largest quiver accepted by [`quiver_isomorphic`].
pub const DEFAULT_ISOMORPHISM_LIMIT: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    /// Index into the endomorphism list.
    pub map: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleQuiver {
    modulus: u64,
    vertices: Vec<Coloring>,
    weights: Vec<u64>,
    edges: Vec<Edge>,
    maps: Vec<QuandleMap>,
}

/// Build the cocycle quiver, verifying that `phi` is a 2-cocycle.
pub fn build_quiver(d: &LinkDiagram, q: &Quandle, maps: &[QuandleMap], phi: &Cochain2) -> Result<CocycleQuiver> {
    build_quiver_with(d, q, maps, phi, CocycleCheck::Verify, Execution::default())
}

/// Build the cocycle quiver. A diagram with free loops has each coloring
/// extended by one coordinate per loop (in `0..n`), so vertices number
/// `n^free_loops` times the colorings of the arcs.
pub fn build_quiver_with(
    d: &LinkDiagram,
    q: &Quandle,
    maps: &[QuandleMap],
    phi: &Cochain2,
    check: CocycleCheck,
    exec: Execution,
) -> Result<CocycleQuiver> {
    for (i, f) in maps.iter().enumerate() {
        if f.source_size() != q.size() || f.target_size() != q.size() {
            return Err(Error::SizeMismatch {
                expected: q.size(),
                found: f.source_size(),
            });
        }
        if !q.is_endomorphism(f)? {
            return Err(Error::NonEndomorphismInS { index: i + 1 });
        }
    }
    check.run(q, phi)?;

    let colorings = enumerate_colorings_in(d, q, exec);
    let arc_weights = exec.map(&colorings, |v| weight_of(d, phi, v));
    let n = q.size();
    let loops = d.free_loops();
    let mut vertices = Vec::new();
    let mut weights = Vec::new();
    for (v, &w) in colorings.iter().zip(&arc_weights) {
        let mut extra = vec![0usize; loops];
        loop {
            let mut vertex = v.clone();
            vertex.extend_from_slice(&extra);
            vertices.push(vertex);
            weights.push(w);
            // next free-loop assignment in lexicographic order
            let Some(k) = (0..loops).rev().find(|&k| extra[k] + 1 < n) else {
                break;
            };
            extra[k] += 1;
            extra[k + 1..].iter_mut().for_each(|x| *x = 0);
        }
    }

    let targets: Vec<Vec<usize>> = exec.map(&vertices, |v| {
        maps.iter()
            .map(|f| {
                let image: Coloring = v.iter().map(|&x| f.apply(x)).collect();
                vertices.binary_search(&image).expect("endomorphism image is a coloring")
            })
            .collect()
    });
    let edges = targets
        .iter()
        .enumerate()
        .flat_map(|(source, ts)| {
            ts.iter()
                .enumerate()
                .map(move |(map, &target)| Edge { source, target, map })
        })
        .collect();
    Ok(CocycleQuiver {
        modulus: phi.modulus(),
        vertices,
        weights,
        edges,
        maps: maps.to_vec(),
    })
}

impl CocycleQuiver {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn vertices(&self) -> &[Coloring] {
        &self.vertices
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    /// Edges ordered by `(source, map)`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn maps(&self) -> &[QuandleMap] {
        &self.maps
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for e in &self.edges {
            deg[e.target] += 1;
        }
        deg
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for e in &self.edges {
            deg[e.source] += 1;
        }
        deg
    }

    /// The same quiver with vertex `i` renamed `perm[i]`.
    pub fn relabeled(&self, perm: &[usize]) -> CocycleQuiver {
        let n = self.vertices.len();
        assert_eq!(perm.len(), n, "permutation length");
        let mut vertices = vec![Vec::new(); n];
        let mut weights = vec![0; n];
        for i in 0..n {
            vertices[perm[i]] = self.vertices[i].clone();
            weights[perm[i]] = self.weights[i];
        }
        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .map(|e| Edge {
                source: perm[e.source],
                target: perm[e.target],
                map: e.map,
            })
            .collect();
        edges.sort_by_key(|e| (e.source, e.map));
        CocycleQuiver {
            modulus: self.modulus,
            vertices,
            weights,
            edges,
            maps: self.maps.clone(),
        }
    }

    /// Graphviz rendering with 1-based vertex names.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph quiver {\n");
        for (i, w) in self.weights.iter().enumerate() {
            let _ = writeln!(out, "  v{0} [label=\"v{0} [w={1}]\"];", i + 1, w);
        }
        for e in &self.edges {
            let _ = writeln!(out, "  v{} -> v{} [label=\"f{}\"];", e.source + 1, e.target + 1, e.map + 1);
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Serialize)]
struct QuiverJson<'a> {
    modulus: u64,
    maps: Vec<Vec<usize>>,
    vertices: Vec<Vec<usize>>,
    weights: &'a [u64],
    edges: Vec<[usize; 3]>,
}

impl Serialize for CocycleQuiver {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QuiverJson {
            modulus: self.modulus,
            maps: self.maps.iter().map(|f| f.to_one_based()).collect(),
            vertices: self
                .vertices
                .iter()
                .map(|v| v.iter().map(|&x| x + 1).collect())
                .collect(),
            weights: &self.weights,
            edges: self
                .edges
                .iter()
                .map(|e| [e.source + 1, e.target + 1, e.map + 1])
                .collect(),
        }
        .serialize(s)
    }
}

/// `Σ_e s^{φ(source)} t^{φ(target)}`.
pub fn quiver_polynomial(quiver: &CocycleQuiver) -> QuiverPolynomial {
    let mut p = QuiverPolynomial::zero(quiver.modulus).expect("valid modulus");
    for e in &quiver.edges {
        p.add_term(quiver.weights[e.source], quiver.weights[e.target], 1);
    }
    p
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Specialization {
    /// `t = 1`: sum over the target exponent.
    TToOne,
    /// `s^a t^b -> s^(a+b)`.
    DiagonalSt,
}

pub fn specialize(p: &QuiverPolynomial, mode: Specialization) -> WeightPolynomial {
    let mut out = WeightPolynomial::zero(p.modulus()).expect("valid modulus");
    for (a, b, c) in p.terms() {
        match mode {
            Specialization::TToOne => out.add_term(a, c),
            Specialization::DiagonalSt => out.add_term(a + b, c),
        }
    }
    out
}

/// `Σ_v s^{in-degree(v)}`.
pub fn in_degree_polynomial(quiver: &CocycleQuiver) -> IntPolynomial {
    let mut p = IntPolynomial::new();
    for d in quiver.in_degrees() {
        p.add_term(d as u64, 1);
    }
    p
}

/// Whether a vertex bijection preserves edge multiplicities (endomorphism
/// labels forgotten) and, if `use_weights`, vertex weights.
pub fn quiver_isomorphic(a: &CocycleQuiver, b: &CocycleQuiver, use_weights: bool) -> Result<bool> {
    quiver_isomorphic_with_limit(a, b, use_weights, DEFAULT_ISOMORPHISM_LIMIT)
}

pub fn quiver_isomorphic_with_limit(
    a: &CocycleQuiver,
    b: &CocycleQuiver,
    use_weights: bool,
    limit: usize,
) -> Result<bool> {
    let n = a.vertex_count().max(b.vertex_count());
    if n > limit {
        return Err(Error::SizeLimitExceeded {
            what: "quiver isomorphism",
            size: n,
            limit,
        });
    }
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return Ok(false);
    }
    let ga = Multigraph::new(a, use_weights);
    let gb = Multigraph::new(b, use_weights);
    Ok(Matcher::new(&ga, &gb).run())
}

struct Multigraph {
    n: usize,
    /// `adj[i * n + j]` = number of edges `i -> j`
    adj: Vec<u32>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
    label: Vec<u64>,
}

impl Multigraph {
    fn new(q: &CocycleQuiver, use_weights: bool) -> Self {
        let n = q.vertex_count();
        let mut adj = vec![0u32; n * n];
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        for e in q.edges() {
            if adj[e.source * n + e.target] == 0 {
                out[e.source].push(e.target);
                inc[e.target].push(e.source);
            }
            adj[e.source * n + e.target] += 1;
        }
        let label = if use_weights { q.weights().to_vec() } else { vec![0; n] };
        Multigraph {
            n,
            adj,
            out,
            inc,
            label,
        }
    }

    fn mult(&self, i: usize, j: usize) -> u32 {
        self.adj[i * self.n + j]
    }
}

/// Colour refinement on both graphs at once (so colours are comparable),
/// followed by backtracking over colour-respecting bijections.
struct Matcher<'a> {
    a: &'a Multigraph,
    b: &'a Multigraph,
    colour_a: Vec<usize>,
    colour_b: Vec<usize>,
}

type Signature = (usize, Vec<(u32, usize)>, Vec<(u32, usize)>);

impl<'a> Matcher<'a> {
    fn new(a: &'a Multigraph, b: &'a Multigraph) -> Self {
        let initial = |g: &Multigraph, v: usize| (g.label[v], g.mult(v, v), g.out[v].len(), g.inc[v].len());
        let mut ids = HashMap::new();
        let mut colour = |key| {
            let next = ids.len();
            *ids.entry(key).or_insert(next)
        };
        let colour_a = (0..a.n).map(|v| colour(initial(a, v))).collect();
        let colour_b = (0..b.n).map(|v| colour(initial(b, v))).collect();
        let mut m = Matcher {
            a,
            b,
            colour_a,
            colour_b,
        };
        m.refine();
        m
    }

    fn signature(g: &Multigraph, colour: &[usize], v: usize) -> Signature {
        let mut out: Vec<(u32, usize)> = g.out[v].iter().map(|&w| (g.mult(v, w), colour[w])).collect();
        let mut inc: Vec<(u32, usize)> = g.inc[v].iter().map(|&w| (g.mult(w, v), colour[w])).collect();
        out.sort_unstable();
        inc.sort_unstable();
        (colour[v], out, inc)
    }

    fn class_count(&self) -> usize {
        let mut all: Vec<usize> = self.colour_a.iter().chain(&self.colour_b).copied().collect();
        all.sort_unstable();
        all.dedup();
        all.len()
    }

    fn refine(&mut self) {
        loop {
            let before = self.class_count();
            let mut ids: HashMap<Signature, usize> = HashMap::new();
            let mut recolour = |g: &Multigraph, colour: &[usize]| -> Vec<usize> {
                (0..g.n)
                    .map(|v| {
                        let next = ids.len();
                        *ids.entry(Self::signature(g, colour, v)).or_insert(next)
                    })
                    .collect()
            };
            let new_a = recolour(self.a, &self.colour_a);
            let new_b = recolour(self.b, &self.colour_b);
            self.colour_a = new_a;
            self.colour_b = new_b;
            if self.class_count() == before {
                return;
            }
        }
    }

    fn run(&self) -> bool {
        let mut ca = self.colour_a.clone();
        let mut cb = self.colour_b.clone();
        ca.sort_unstable();
        cb.sort_unstable();
        if ca != cb {
            return false;
        }
        let order = self.search_order();
        let mut map = vec![usize::MAX; self.a.n];
        let mut used = vec![false; self.b.n];
        self.extend(&order, 0, &mut map, &mut used)
    }

    /// Vertices of `a`, each (where possible) adjacent to an earlier one.
    fn search_order(&self) -> Vec<usize> {
        let n = self.a.n;
        let mut class_size = HashMap::new();
        for &c in &self.colour_a {
            *class_size.entry(c).or_insert(0usize) += 1;
        }
        let mut placed = vec![false; n];
        let mut links = vec![0usize; n];
        let mut order = Vec::with_capacity(n);
        for _ in 0..n {
            let v = (0..n)
                .filter(|&v| !placed[v])
                .min_by_key(|&v| (std::cmp::Reverse(links[v]), class_size[&self.colour_a[v]], v))
                .expect("unplaced vertex");
            placed[v] = true;
            order.push(v);
            for &w in self.a.out[v].iter().chain(&self.a.inc[v]) {
                links[w] += 1;
            }
        }
        order
    }

    fn extend(&self, order: &[usize], depth: usize, map: &mut [usize], used: &mut [bool]) -> bool {
        let Some(&v) = order.get(depth) else {
            return true;
        };
        for w in 0..self.b.n {
            if used[w] || self.colour_b[w] != self.colour_a[v] || !self.consistent(order, depth, map, v, w) {
                continue;
            }
            map[v] = w;
            used[w] = true;
            if self.extend(order, depth + 1, map, used) {
                return true;
            }
            used[w] = false;
        }
        map[v] = usize::MAX;
        false
    }

    fn consistent(&self, order: &[usize], depth: usize, map: &[usize], v: usize, w: usize) -> bool {
        order[..depth].iter().all(|&u| {
            let x = map[u];
            self.a.mult(v, u) == self.b.mult(w, x) && self.a.mult(u, v) == self.b.mult(x, w)
        })
    }
}
