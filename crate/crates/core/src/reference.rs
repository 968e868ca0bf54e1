//! Shipped reference lists of sporadic quadruples and diffs against computed ones.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::enumerate::{classify_family, Quadruple, SolutionRecord};
use crate::error::{Error, Result};
use crate::quadratic::QuadraticSurd;
use crate::rational::parse_q;

/// The three shipped lists: Q(sqrt 5) at m = 60, Q(sqrt 2) at m = 48, Q(sqrt 3) at m = 24.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Table {
    A,
    B,
    C,
}

impl Table {
    pub fn all() -> [Table; 3] {
        [Table::A, Table::B, Table::C]
    }

    pub fn sqrt_d(self) -> u64 {
        match self {
            Table::A => 5,
            Table::B => 2,
            Table::C => 3,
        }
    }

    pub fn n(self) -> u64 {
        match self {
            Table::A => 5,
            Table::B => 8,
            Table::C => 12,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Table::A => "a",
            Table::B => "b",
            Table::C => "c",
        }
    }

    pub fn parse_name(s: &str) -> Result<Table> {
        match s.to_ascii_lowercase().as_str() {
            "a" => Ok(Table::A),
            "b" => Ok(Table::B),
            "c" => Ok(Table::C),
            _ => Err(Error::Parse(format!("unknown table {s:?}"))),
        }
    }

    fn text(self) -> &'static str {
        match self {
            Table::A => include_str!("../data/table_a.txt"),
            Table::B => include_str!("../data/table_b.txt"),
            Table::C => include_str!("../data/table_c.txt"),
        }
    }

    pub fn load(self) -> ReferenceTable {
        parse_reference(self.text()).expect("shipped table parses")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReferenceTable {
    pub m: u64,
    /// `(entry number, quadruple)` in file order.
    pub entries: Vec<(usize, Quadruple)>,
}

impl ReferenceTable {
    pub fn without_entry(&self, entry: usize) -> ReferenceTable {
        ReferenceTable {
            m: self.m,
            entries: self
                .entries
                .iter()
                .filter(|e| e.0 != entry)
                .cloned()
                .collect(),
        }
    }
}

/// Parse `# m = M` followed by lines `entry k1 k2 k3 k4`; other `#` lines are comments.
pub fn parse_reference(text: &str) -> Result<ReferenceTable> {
    let bad = |l: usize, why: &str| Error::MalformedReference(format!("line {l}: {why}"));
    let mut m = None;
    let mut entries = Vec::new();
    let mut numbers = BTreeSet::new();
    for (i, line) in text.lines().enumerate() {
        let l = i + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(v) = rest.trim().strip_prefix("m =") {
                m = Some(v.trim().parse::<u64>().map_err(|_| bad(l, "bad order"))?);
            }
            continue;
        }
        let m = m.ok_or_else(|| bad(l, "entry before order header"))?;
        let f: Vec<u64> = line
            .split_whitespace()
            .map(|t| t.parse::<u64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad(l, "non-integer field"))?;
        if f.len() != 5 {
            return Err(bad(l, "expected 5 fields"));
        }
        let q = Quadruple::new(m, [f[1], f[2], f[3], f[4]]).map_err(|_| bad(l, "not in D_m"))?;
        if !numbers.insert(f[0]) {
            return Err(bad(l, "duplicate entry number"));
        }
        entries.push((f[0] as usize, q));
    }
    let m = m.ok_or_else(|| Error::MalformedReference("missing order header".into()))?;
    Ok(ReferenceTable { m, entries })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DiffReport {
    /// Computed sporadic solutions absent from the reference.
    pub missing_from_reference: Vec<(Quadruple, QuadraticSurd)>,
    /// Reference entries that are not computed solutions.
    pub missing_from_computation: Vec<(usize, Quadruple)>,
    /// Reference entries whose primitive reduction is a family form.
    pub family_in_reference: Vec<(usize, Quadruple)>,
    /// Reference entries listed more than once, with all their numbers.
    pub duplicated_in_reference: Vec<(Vec<usize>, Quadruple)>,
}

impl DiffReport {
    pub fn is_empty(&self) -> bool {
        self.missing_from_reference.is_empty()
            && self.missing_from_computation.is_empty()
            && self.family_in_reference.is_empty()
            && self.duplicated_in_reference.is_empty()
    }
}

impl fmt::Display for DiffReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "no differences");
        }
        for (q, v) in &self.missing_from_reference {
            writeln!(f, "computed, not in reference: {q} value {v}")?;
        }
        for (e, q) in &self.missing_from_computation {
            writeln!(f, "entry {e}: {q} not a solution")?;
        }
        for (e, q) in &self.family_in_reference {
            writeln!(f, "entry {e}: {q} reduces to a family form")?;
        }
        for (es, q) in &self.duplicated_in_reference {
            writeln!(f, "entries {es:?}: {q} listed twice")?;
        }
        Ok(())
    }
}

/// Compare the sporadic part of `records` with a reference list at the same order.
pub fn reconcile_with_reference(
    records: &[SolutionRecord],
    reference: &ReferenceTable,
) -> Result<DiffReport> {
    if let Some(r) = records.iter().find(|r| r.quadruple.m != reference.m) {
        return Err(Error::OrderMismatch(reference.m, r.quadruple.m));
    }
    let computed: BTreeMap<Quadruple, &SolutionRecord> = records
        .iter()
        .filter(|r| r.is_sporadic())
        .map(|r| (r.quadruple, r))
        .collect();
    let all: BTreeSet<Quadruple> = records.iter().map(|r| r.quadruple).collect();
    let mut by_quad: BTreeMap<Quadruple, Vec<usize>> = BTreeMap::new();
    for (e, q) in &reference.entries {
        by_quad.entry(*q).or_default().push(*e);
    }
    let mut rep = DiffReport::default();
    for (q, r) in &computed {
        if !by_quad.contains_key(q) {
            rep.missing_from_reference.push((*q, r.value.clone()));
        }
    }
    for (e, q) in &reference.entries {
        if classify_family(q).is_some() {
            rep.family_in_reference.push((*e, *q));
        } else if !all.contains(q) {
            rep.missing_from_computation.push((*e, *q));
        }
    }
    for (q, es) in by_quad {
        if es.len() > 1 {
            rep.duplicated_in_reference.push((es, q));
        }
    }
    Ok(rep)
}

/// Printed maximal direction ranges for n in {5, 8, 12}, in file order.
pub fn printed_ranges(n: u64) -> Result<Vec<Vec<u64>>> {
    parse_ranges(include_str!("../data/ranges_printed.txt"), n)
}

/// Parse `# n = N` sections of whitespace-separated h values.
pub fn parse_ranges(text: &str, n: u64) -> Result<Vec<Vec<u64>>> {
    let mut current = None;
    let mut seen = false;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(v) = rest.trim().strip_prefix("n =") {
                let v = v.trim().parse::<u64>();
                current = Some(v.map_err(|_| Error::MalformedReference(format!("line {}: bad n", i + 1)))?);
                seen |= current == Some(n);
            }
            continue;
        }
        if current != Some(n) {
            continue;
        }
        let hs = line
            .split_whitespace()
            .map(|t| t.parse::<u64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::MalformedReference(format!("line {}: non-integer field", i + 1)))?;
        out.push(hs);
    }
    if !seen {
        return Err(Error::UnsupportedN(n));
    }
    Ok(out)
}

/// Printed cross-ratio value sets for n in {5, 8, 12}, in file order.
pub fn printed_obstruction(n: u64) -> Result<Vec<QuadraticSurd>> {
    parse_obstruction(include_str!("../data/obstruction_printed.txt"), n)
}

/// Parse `# n = N` sections with a `# d = D` line and values `a b` meaning a + b sqrt(D).
pub fn parse_obstruction(text: &str, n: u64) -> Result<Vec<QuadraticSurd>> {
    let bad = |l: usize, why: &str| Error::MalformedReference(format!("line {l}: {why}"));
    let (mut current, mut d, mut seen) = (None, None, false);
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let l = i + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(v) = rest.strip_prefix("n =") {
                current = Some(v.trim().parse::<u64>().map_err(|_| bad(l, "bad n"))?);
                d = None;
                seen |= current == Some(n);
            } else if let Some(v) = rest.strip_prefix("d =") {
                d = Some(v.trim().parse::<u64>().map_err(|_| bad(l, "bad d"))?);
            }
            continue;
        }
        if current != Some(n) {
            continue;
        }
        let d = d.ok_or_else(|| bad(l, "value before d header"))?;
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 2 {
            return Err(bad(l, "expected 2 fields"));
        }
        let a = parse_q(f[0]).map_err(|_| bad(l, "bad rational"))?;
        let b = parse_q(f[1]).map_err(|_| bad(l, "bad rational"))?;
        out.push(QuadraticSurd::new(a, b, d).map_err(|e| bad(l, &e.to_string()))?);
    }
    if !seen {
        return Err(Error::UnsupportedN(n));
    }
    Ok(out)
}

/// Set comparison of two value lists.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValueDiff {
    pub only_computed: Vec<QuadraticSurd>,
    pub only_printed: Vec<QuadraticSurd>,
    /// Printed values listed more than once.
    pub repeated: Vec<QuadraticSurd>,
}

impl ValueDiff {
    pub fn is_empty(&self) -> bool {
        self.only_computed.is_empty() && self.only_printed.is_empty() && self.repeated.is_empty()
    }
}

pub fn reconcile_values(computed: &[QuadraticSurd], printed: &[QuadraticSurd]) -> ValueDiff {
    let c: BTreeSet<&QuadraticSurd> = computed.iter().collect();
    let mut p = BTreeSet::new();
    let mut repeated = Vec::new();
    for v in printed {
        if !p.insert(v) {
            repeated.push(v.clone());
        }
    }
    ValueDiff {
        only_computed: c.difference(&p).map(|v| (*v).clone()).collect(),
        only_printed: p.difference(&c).map(|v| (*v).clone()).collect(),
        repeated,
    }
}

/// Set comparison of two range lists, each range taken as a set.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RangeDiff {
    pub only_computed: Vec<Vec<u64>>,
    pub only_printed: Vec<Vec<u64>>,
}

impl RangeDiff {
    pub fn is_empty(&self) -> bool {
        self.only_computed.is_empty() && self.only_printed.is_empty()
    }
}

pub fn reconcile_ranges(computed: &[Vec<u64>], printed: &[Vec<u64>]) -> RangeDiff {
    let norm = |v: &[Vec<u64>]| -> BTreeSet<Vec<u64>> {
        v.iter()
            .map(|r| r.iter().copied().collect::<BTreeSet<u64>>().into_iter().collect())
            .collect()
    };
    let (c, p) = (norm(computed), norm(printed));
    RangeDiff {
        only_computed: c.difference(&p).cloned().collect(),
        only_printed: p.difference(&c).cloned().collect(),
    }
}
