//! Bundled prime knots through 8 crossings and prime links through 7
//! crossings (KnotInfo/LinkInfo PD codes), plus the unknot `0_1`.

use std::sync::OnceLock;

use crate::diagram::{parse_diagrams, LinkDiagram};
use crate::error::{Error, Result};

const CORPUS_JSON: &str = include_str!("../data/corpus.json");

/// All bundled diagrams in table order. Parsed and validated on first use.
pub fn all() -> &'static [LinkDiagram] {
    static CORPUS: OnceLock<Vec<LinkDiagram>> = OnceLock::new();
    CORPUS.get_or_init(|| parse_diagrams(CORPUS_JSON).expect("bundled corpus is valid"))
}

pub fn get(name: &str) -> Result<&'static LinkDiagram> {
    all()
        .iter()
        .find(|d| d.name() == Some(name))
        .ok_or_else(|| Error::UnknownDiagram(name.to_string()))
}

pub fn names() -> impl Iterator<Item = &'static str> {
    all().iter().filter_map(|d| d.name())
}
