//! Oriented link diagrams as signed crossing records, with PD-code import.
//!
//! A crossing record names the over arc and the incoming/outgoing under arcs.
//! The coloring rule is `under_out = under_in ▷ over` at a positive crossing
//! and `under_in = under_out ▷ over` at a negative one.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn from_int(s: i64) -> Result<Sign> {
        match s {
            1 => Ok(Sign::Positive),
            -1 => Ok(Sign::Negative),
            _ => Err(Error::Parse(format!("crossing sign must be 1 or -1, got {s}"))),
        }
    }

    pub fn as_int(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

/// One crossing; arc ids are 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub sign: Sign,
    pub over: usize,
    pub under_in: usize,
    pub under_out: usize,
}

impl Crossing {
    pub fn new(sign: Sign, over: usize, under_in: usize, under_out: usize) -> Self {
        Crossing {
            sign,
            over,
            under_in,
            under_out,
        }
    }
}

/// A validated oriented link diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkDiagram {
    name: Option<String>,
    arc_count: usize,
    crossings: Vec<Crossing>,
    free_loops: usize,
}

impl LinkDiagram {
    /// Check that every arc is entered and left exactly once by an
    /// understrand and that all ids are in range.
    pub fn new(arc_count: usize, crossings: Vec<Crossing>, free_loops: usize) -> Result<Self> {
        let mut ins = vec![0usize; arc_count];
        let mut outs = vec![0usize; arc_count];
        for (i, c) in crossings.iter().enumerate() {
            for arc in [c.over, c.under_in, c.under_out] {
                if arc >= arc_count {
                    return Err(Error::OutOfRangeArc {
                        crossing: i + 1,
                        arc: arc + 1,
                        arc_count,
                    });
                }
            }
            ins[c.under_in] += 1;
            outs[c.under_out] += 1;
        }
        for arc in 0..arc_count {
            if ins[arc] != 1 || outs[arc] != 1 {
                return Err(Error::ArcUnderUseCount {
                    arc: arc + 1,
                    in_count: ins[arc],
                    out_count: outs[arc],
                });
            }
        }
        Ok(LinkDiagram {
            name: None,
            arc_count,
            crossings,
            free_loops,
        })
    }

    /// The crossing-free unknot.
    pub fn unknot() -> Self {
        LinkDiagram {
            name: Some("0_1".into()),
            arc_count: 0,
            crossings: Vec::new(),
            free_loops: 1,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|c| c.sign.as_int()).sum()
    }

    /// Import a PD code. Each tuple `[a, b, c, d]` lists edge labels
    /// counterclockwise from the incoming under-edge `a`. `components`
    /// optionally gives the `(first, last)` edge label of each component.
    pub fn from_pd(pd: &[[i64; 4]], components: Option<&[(i64, i64)]>) -> Result<Self> {
        let oriented = orient_pd(pd, components)?;
        let arcs = merge_arcs(pd, &oriented);
        let crossings = pd
            .iter()
            .zip(&oriented)
            .map(|(t, &(sign, over_in))| Crossing::new(sign, arcs[&over_in], arcs[&t[0]], arcs[&t[2]]))
            .collect();
        let arc_count = arcs.values().max().map_or(0, |&a| a + 1);
        LinkDiagram::new(arc_count, crossings, 0)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: DiagramJson = serde_json::from_str(text)?;
        raw.into_diagram()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&DiagramJson::from(self)).expect("diagram serializes")
    }
}

/// Per PD tuple: the sign and the over-strand's incoming edge label.
fn orient_pd(pd: &[[i64; 4]], components: Option<&[(i64, i64)]>) -> Result<Vec<(Sign, i64)>> {
    let mut occurrences: HashMap<i64, Vec<(usize, usize)>> = HashMap::new();
    for (ci, t) in pd.iter().enumerate() {
        for (pos, &e) in t.iter().enumerate() {
            occurrences.entry(e).or_default().push((ci, pos));
        }
    }
    if let Some((e, occ)) = occurrences.iter().find(|(_, occ)| occ.len() != 2) {
        return Err(Error::MalformedPd(format!(
            "edge label {e} appears {} times, expected 2",
            occ.len()
        )));
    }

    // For each edge: the slot where it enters a crossing (head) and leaves (tail).
    let mut orient = Orientation {
        occurrences: &occurrences,
        head: HashMap::new(),
        tail: HashMap::new(),
    };
    for (ci, t) in pd.iter().enumerate() {
        orient.set_head(t[0], (ci, 0))?;
        orient.set_tail(t[2], (ci, 2))?;
    }
    orient.propagate(pd)?;

    // Components that never pass under: fall back on edge numbering.
    for (ci, t) in pd.iter().enumerate() {
        if orient.over_in(ci, t).is_some() {
            continue;
        }
        let (b, d) = (t[1], t[3]);
        let b_first = match components {
            Some(ranges) => succession_from_ranges(ranges, b, d).ok_or_else(|| Error::AmbiguousOrientation {
                crossing: ci + 1,
                reason: format!("edges {b} and {d} are not consecutive in any listed component"),
            })?,
            None => {
                // consecutive numbering: min -> max, except wraparound max -> min
                if (b - d).abs() == 1 {
                    b < d
                } else {
                    b > d
                }
            }
        };
        let (in_edge, in_pos) = if b_first { (b, 1) } else { (d, 3) };
        orient.set_head(in_edge, (ci, in_pos)).map_err(|_| Error::AmbiguousOrientation {
            crossing: ci + 1,
            reason: "edge numbering contradicts the under-strand orientation".into(),
        })?;
        orient.propagate(pd).map_err(|_| Error::AmbiguousOrientation {
            crossing: ci + 1,
            reason: "edge numbering is not consecutive along components; supply component ranges".into(),
        })?;
    }

    pd.iter()
        .enumerate()
        .map(|(ci, t)| {
            orient.over_in(ci, t).ok_or_else(|| Error::AmbiguousOrientation {
                crossing: ci + 1,
                reason: "over-strand direction undetermined".into(),
            })
        })
        .collect()
}

/// Whether `b -> d` is a step along some component (as opposed to `d -> b`).
fn succession_from_ranges(ranges: &[(i64, i64)], b: i64, d: i64) -> Option<bool> {
    let next = |e: i64| {
        ranges
            .iter()
            .find(|&&(lo, hi)| lo <= e && e <= hi)
            .map(|&(lo, hi)| if e == hi { lo } else { e + 1 })
    };
    match (next(b) == Some(d), next(d) == Some(b)) {
        (true, false) => Some(true),
        (false, true) => Some(false),
        _ => None,
    }
}

type Slot = (usize, usize);

struct Orientation<'a> {
    occurrences: &'a HashMap<i64, Vec<Slot>>,
    head: HashMap<i64, Slot>,
    tail: HashMap<i64, Slot>,
}

impl Orientation<'_> {
    fn other_slot(&self, e: i64, s: Slot) -> Slot {
        let occ = &self.occurrences[&e];
        if occ[0] == s {
            occ[1]
        } else {
            occ[0]
        }
    }

    fn set_head(&mut self, e: i64, s: Slot) -> Result<()> {
        let t = self.other_slot(e, s);
        self.assign(e, s, t)
    }

    fn set_tail(&mut self, e: i64, s: Slot) -> Result<()> {
        let h = self.other_slot(e, s);
        self.assign(e, h, s)
    }

    fn assign(&mut self, e: i64, head: Slot, tail: Slot) -> Result<()> {
        let clash = self.head.get(&e).is_some_and(|&h| h != head) || self.tail.get(&e).is_some_and(|&t| t != tail);
        if clash {
            return Err(Error::MalformedPd(format!("edge {e} is oriented inconsistently")));
        }
        self.head.insert(e, head);
        self.tail.insert(e, tail);
        Ok(())
    }

    /// Carry over-strand directions through each crossing until nothing changes.
    fn propagate(&mut self, pd: &[[i64; 4]]) -> Result<()> {
        loop {
            let mut changed = false;
            for (ci, t) in pd.iter().enumerate() {
                let (b, d) = (t[1], t[3]);
                for (x, px, y, py) in [(b, 1, d, 3), (d, 3, b, 1)] {
                    let x_enters = self.head.get(&x) == Some(&(ci, px));
                    let x_leaves = self.tail.get(&x) == Some(&(ci, px));
                    if x_enters && !self.tail.contains_key(&y) {
                        self.set_tail(y, (ci, py))?;
                        changed = true;
                    } else if x_leaves && !self.head.contains_key(&y) {
                        self.set_head(y, (ci, py))?;
                        changed = true;
                    }
                }
            }
            if !changed {
                return Ok(());
            }
        }
    }

    fn over_in(&self, ci: usize, t: &[i64; 4]) -> Option<(Sign, i64)> {
        if self.head.get(&t[3]) == Some(&(ci, 3)) {
            Some((Sign::Positive, t[3]))
        } else if self.head.get(&t[1]) == Some(&(ci, 1)) {
            Some((Sign::Negative, t[1]))
        } else {
            None
        }
    }
}

/// Merge edges joined by over-passes into arcs, numbered by smallest edge label.
fn merge_arcs(pd: &[[i64; 4]], oriented: &[(Sign, i64)]) -> HashMap<i64, usize> {
    let mut labels: Vec<i64> = pd.iter().flatten().copied().collect();
    labels.sort_unstable();
    labels.dedup();
    let index: HashMap<i64, usize> = labels.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut parent: Vec<usize> = (0..labels.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (t, &(_, over_in)) in pd.iter().zip(oriented) {
        let over_out = if over_in == t[1] { t[3] } else { t[1] };
        let (a, b) = (find(&mut parent, index[&over_in]), find(&mut parent, index[&over_out]));
        parent[a.max(b)] = a.min(b);
    }
    // labels are sorted, so roots in ascending order are ordered by their minimum label
    let mut arc_of_root = BTreeMap::new();
    let mut out = HashMap::new();
    for (i, &e) in labels.iter().enumerate() {
        let r = find(&mut parent, i);
        let next = arc_of_root.len();
        let arc = *arc_of_root.entry(r).or_insert(next);
        out.insert(e, arc);
    }
    out
}

#[derive(Serialize, Deserialize)]
struct CrossingJson {
    sign: i64,
    over: usize,
    under_in: usize,
    under_out: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagramJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    arcs: Option<usize>,
    #[serde(default)]
    free_loops: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    crossings: Option<Vec<CrossingJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pd: Option<Vec<[i64; 4]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    components: Option<Vec<(i64, i64)>>,
}

impl DiagramJson {
    fn into_diagram(self) -> Result<LinkDiagram> {
        let diagram = match (self.pd, self.crossings) {
            (Some(pd), None) => {
                let mut d = LinkDiagram::from_pd(&pd, self.components.as_deref())?;
                d.free_loops = self.free_loops;
                d
            }
            (None, Some(records)) => {
                let arcs = self.arcs.ok_or_else(|| Error::Parse("diagram is missing \"arcs\"".into()))?;
                let crossings = records
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        let arc = |a: usize| {
                            a.checked_sub(1).ok_or(Error::OutOfRangeArc {
                                crossing: i + 1,
                                arc: 0,
                                arc_count: arcs,
                            })
                        };
                        Ok(Crossing::new(
                            Sign::from_int(c.sign)?,
                            arc(c.over)?,
                            arc(c.under_in)?,
                            arc(c.under_out)?,
                        ))
                    })
                    .collect::<Result<Vec<_>>>()?;
                LinkDiagram::new(arcs, crossings, self.free_loops)?
            }
            _ => {
                return Err(Error::Parse(
                    "diagram needs exactly one of \"crossings\" or \"pd\"".into(),
                ))
            }
        };
        Ok(LinkDiagram {
            name: self.name,
            ..diagram
        })
    }
}

impl From<&LinkDiagram> for DiagramJson {
    fn from(d: &LinkDiagram) -> Self {
        DiagramJson {
            name: d.name.clone(),
            arcs: Some(d.arc_count),
            free_loops: d.free_loops,
            crossings: Some(
                d.crossings
                    .iter()
                    .map(|c| CrossingJson {
                        sign: c.sign.as_int(),
                        over: c.over + 1,
                        under_in: c.under_in + 1,
                        under_out: c.under_out + 1,
                    })
                    .collect(),
            ),
            pd: None,
            components: None,
        }
    }
}

impl Serialize for LinkDiagram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DiagramJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for LinkDiagram {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        DiagramJson::deserialize(d)?
            .into_diagram()
            .map_err(serde::de::Error::custom)
    }
}

impl FromStr for LinkDiagram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LinkDiagram::from_json(s)
    }
}

impl fmt::Display for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}: {} arcs, {} crossings, {} free loops",
            self.name.as_deref().unwrap_or("diagram"),
            self.arc_count,
            self.crossings.len(),
            self.free_loops
        )?;
        for c in &self.crossings {
            writeln!(
                f,
                "  {:+} over {} under {} -> {}",
                c.sign.as_int(),
                c.over + 1,
                c.under_in + 1,
                c.under_out + 1
            )?;
        }
        Ok(())
    }
}

/// Parse a JSON array of diagrams, or a single diagram object.
pub fn parse_diagrams(text: &str) -> Result<Vec<LinkDiagram>> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    match value {
        serde_json::Value::Array(items) => items
            .into_iter()
            .map(|v| Ok(serde_json::from_value::<DiagramJson>(v)?.into_diagram()?))
            .collect(),
        v => Ok(vec![serde_json::from_value::<DiagramJson>(v)?.into_diagram()?]),
    }
}
