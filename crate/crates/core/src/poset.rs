//! Finite partial orders, monotone self-maps, and least-fixed-point
//! iteration.
//!
//! Elements are indices `0..n`; the order is stored as a full n×n table that
//! is validated to be reflexive, antisymmetric, and transitive, with a
//! designated bottom element below everything. On a finite poset every
//! monotone map is Scott-continuous, so iterating from bottom
//! (⊥, f(⊥), f²(⊥), …) climbs an ascending chain and stops at the least
//! fixed point.

use crate::textio::{fields, TextError};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PosetError {
    #[error("poset must have at least one element")]
    Empty,
    #[error("order table has {got} entries, expected {expected}")]
    TableSize { expected: usize, got: usize },
    #[error("not reflexive: {elem} is not ≤ itself")]
    NotReflexive { elem: usize },
    #[error("not antisymmetric: {a} ≤ {b} and {b} ≤ {a} for distinct elements")]
    NotAntisymmetric { a: usize, b: usize },
    #[error("not transitive: {a} ≤ {b} ≤ {c} but not {a} ≤ {c}")]
    NotTransitive { a: usize, b: usize, c: usize },
    #[error("bottom {bottom} is not below element {elem}")]
    BottomNotLeast { bottom: usize, elem: usize },
    #[error("element {elem} out of range for {count} elements")]
    ElementOutOfRange { elem: usize, count: usize },
}

/// A finite partial order with a least element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePoset {
    n: usize,
    leq: Vec<bool>, // row-major n×n, leq[i*n + j] ⇔ i ⊑ j
    bottom: usize,
}

impl FinitePoset {
    /// Builds a poset from a full ≤ table, validating every axiom. The first
    /// violation found (scanning indices in ascending order) is reported
    /// with its witnessing elements.
    pub fn from_leq_table(n: usize, leq: Vec<bool>, bottom: usize) -> Result<Self, PosetError> {
        if n == 0 {
            return Err(PosetError::Empty);
        }
        if leq.len() != n * n {
            return Err(PosetError::TableSize {
                expected: n * n,
                got: leq.len(),
            });
        }
        if bottom >= n {
            return Err(PosetError::ElementOutOfRange {
                elem: bottom,
                count: n,
            });
        }
        let poset = Self { n, leq, bottom };
        poset.validate()?;
        Ok(poset)
    }

    /// Builds a poset from a cover (Hasse) relation: the reflexive-transitive
    /// closure is computed here, then antisymmetry and the bottom axiom are
    /// checked on the result.
    pub fn from_cover(n: usize, covers: &[(usize, usize)], bottom: usize) -> Result<Self, PosetError> {
        if n == 0 {
            return Err(PosetError::Empty);
        }
        if bottom >= n {
            return Err(PosetError::ElementOutOfRange {
                elem: bottom,
                count: n,
            });
        }
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(a, b) in covers {
            for &e in &[a, b] {
                if e >= n {
                    return Err(PosetError::ElementOutOfRange { elem: e, count: n });
                }
            }
            leq[a * n + b] = true;
        }
        // Warshall closure.
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        let poset = Self { n, leq, bottom };
        poset.validate()?;
        Ok(poset)
    }

    fn validate(&self) -> Result<(), PosetError> {
        let n = self.n;
        for i in 0..n {
            if !self.leq(i, i) {
                return Err(PosetError::NotReflexive { elem: i });
            }
        }
        for a in 0..n {
            for b in 0..n {
                if a != b && self.leq(a, b) && self.leq(b, a) {
                    return Err(PosetError::NotAntisymmetric { a, b });
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if !self.leq(a, b) {
                    continue;
                }
                for c in 0..n {
                    if self.leq(b, c) && !self.leq(a, c) {
                        return Err(PosetError::NotTransitive { a, b, c });
                    }
                }
            }
        }
        for i in 0..n {
            if !self.leq(self.bottom, i) {
                return Err(PosetError::BottomNotLeast {
                    bottom: self.bottom,
                    elem: i,
                });
            }
        }
        Ok(())
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.n + j]
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false // n ≥ 1 by construction
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    /// Length of the longest chain, counted in edges (a single element has
    /// height 0).
    pub fn height(&self) -> usize {
        let mut memo = vec![usize::MAX; self.n];
        (0..self.n).map(|i| self.height_from(i, &mut memo)).max().unwrap_or(0)
    }

    fn height_from(&self, i: usize, memo: &mut [usize]) -> usize {
        if memo[i] != usize::MAX {
            return memo[i];
        }
        let mut best = 0;
        for j in 0..self.n {
            if j != i && self.leq(i, j) {
                best = best.max(1 + self.height_from(j, memo));
            }
        }
        memo[i] = best;
        best
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum MapError {
    #[error("map table has {got} entries for {expected} elements")]
    WrongLength { expected: usize, got: usize },
    #[error("map sends {from} to {to}, out of range for {count} elements")]
    TargetOutOfRange { from: usize, to: usize, count: usize },
    #[error("map is not monotone: {a} ≤ {b} but f({a}) is not ≤ f({b})")]
    NotMonotone { a: usize, b: usize },
}

/// A total self-map on a poset's elements. Construction checks totality and
/// range, not monotonicity; use [`MonotoneMap::check_monotone`] for that.
#[derive(Debug, Clone)]
pub struct MonotoneMap<'a> {
    poset: &'a FinitePoset,
    table: Vec<usize>,
}

impl<'a> MonotoneMap<'a> {
    pub fn new(poset: &'a FinitePoset, table: Vec<usize>) -> Result<Self, MapError> {
        if table.len() != poset.len() {
            return Err(MapError::WrongLength {
                expected: poset.len(),
                got: table.len(),
            });
        }
        for (from, &to) in table.iter().enumerate() {
            if to >= poset.len() {
                return Err(MapError::TargetOutOfRange {
                    from,
                    to,
                    count: poset.len(),
                });
            }
        }
        Ok(Self { poset, table })
    }

    pub fn apply(&self, i: usize) -> usize {
        self.table[i]
    }

    pub fn poset(&self) -> &FinitePoset {
        self.poset
    }

    /// Returns the first pair (in lexicographic order) witnessing a
    /// monotonicity violation, or `None` if the map is monotone.
    pub fn check_monotone(&self) -> Option<(usize, usize)> {
        let n = self.poset.len();
        for i in 0..n {
            for j in 0..n {
                if self.poset.leq(i, j) && !self.poset.leq(self.table[i], self.table[j]) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_monotone(&self) -> bool {
        self.check_monotone().is_none()
    }
}

/// Result of Kleene iteration: the least fixed point and the ascending
/// chain of iterates that reached it (starting at bottom, ending at the
/// fixed point itself).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KleeneIteration {
    pub fixed_point: usize,
    pub trace: Vec<usize>,
}

/// Iterates ⊥, f(⊥), f²(⊥), … until a fixed point is reached.
///
/// Non-monotone maps are rejected before iterating; for monotone maps the
/// iterates form a strictly ascending chain, so the trace length is bounded
/// by the poset height plus one and the returned element is the least fixed
/// point of the map.
pub fn kleene_lfp(map: &MonotoneMap) -> Result<KleeneIteration, MapError> {
    if let Some((a, b)) = map.check_monotone() {
        return Err(MapError::NotMonotone { a, b });
    }
    let mut current = map.poset().bottom();
    let mut trace = vec![current];
    for _ in 0..map.poset().len() {
        let next = map.apply(current);
        if next == current {
            return Ok(KleeneIteration {
                fixed_point: current,
                trace,
            });
        }
        current = next;
        trace.push(current);
    }
    unreachable!("monotone map on a finite poset must reach a fixed point");
}

/// Every fixed point of the map, by exhaustive scan. Oracle counterpart of
/// [`kleene_lfp`]: the least element of this set is the least fixed point.
pub fn brute_force_fixed_points(map: &MonotoneMap) -> Vec<usize> {
    (0..map.poset().len()).filter(|&e| map.apply(e) == e).collect()
}

/// A parsed poset/map description: element names, the poset built from the
/// cover lines, and the raw map table (pair it with the poset via
/// [`MonotoneMap::new`]).
#[derive(Debug, Clone)]
pub struct PosetSpec {
    pub names: Vec<String>,
    pub poset: FinitePoset,
    pub map_table: Vec<usize>,
}

impl PosetSpec {
    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses the line-oriented poset/map format:
///
/// ```text
/// elem <name>        # declare an element
/// bottom <name>      # designate the least element (exactly once)
/// cover <a> <b>      # a is covered by b (a ⊑ b generator)
/// map <a> <b>        # f(a) = b (required for every element)
/// ```
///
/// Names are ASCII identifiers. Blank lines and `#` comments are ignored.
pub fn parse_poset_spec(text: &str) -> Result<PosetSpec, TextError> {
    let mut names: Vec<String> = Vec::new();
    let mut covers: Vec<(usize, usize)> = Vec::new();
    let mut map_entries: Vec<Option<usize>> = Vec::new();
    let mut bottom: Option<(usize, usize)> = None; // (element, line)

    let lookup = |names: &[String], name: &str, line: usize| -> Result<usize, TextError> {
        names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| TextError::at(line, format!("unknown element `{name}`")))
    };

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let Some(parts) = fields(raw) else { continue };
        match parts.as_slice() {
            ["elem", name] => {
                if !valid_name(name) {
                    return Err(TextError::at(line, format!("invalid element name `{name}`")));
                }
                if names.iter().any(|n| n == name) {
                    return Err(TextError::at(line, format!("duplicate element `{name}`")));
                }
                names.push((*name).to_string());
                map_entries.push(None);
            }
            ["bottom", name] => {
                let e = lookup(&names, name, line)?;
                if let Some((_, first)) = bottom {
                    return Err(TextError::at(
                        line,
                        format!("bottom already declared on line {first}"),
                    ));
                }
                bottom = Some((e, line));
            }
            ["cover", a, b] => {
                let a = lookup(&names, a, line)?;
                let b = lookup(&names, b, line)?;
                covers.push((a, b));
            }
            ["map", a, b] => {
                let a = lookup(&names, a, line)?;
                let b = lookup(&names, b, line)?;
                if map_entries[a].is_some() {
                    return Err(TextError::at(
                        line,
                        format!("duplicate map entry for `{}`", names[a]),
                    ));
                }
                map_entries[a] = Some(b);
            }
            [directive, ..] => {
                return Err(TextError::at(line, format!("unknown directive `{directive}`")));
            }
            [] => unreachable!(),
        }
    }

    if names.is_empty() {
        return Err(TextError::whole_file("no `elem` lines"));
    }
    let (bottom, _) = bottom.ok_or_else(|| TextError::whole_file("no `bottom` line"))?;
    let mut map_table = Vec::with_capacity(names.len());
    for (i, entry) in map_entries.iter().enumerate() {
        match entry {
            Some(to) => map_table.push(*to),
            None => {
                return Err(TextError::whole_file(format!(
                    "no `map` entry for element `{}`",
                    names[i]
                )))
            }
        }
    }

    let poset = FinitePoset::from_cover(names.len(), &covers, bottom)
        .map_err(|e| TextError::whole_file(e.to_string()))?;
    Ok(PosetSpec {
        names,
        poset,
        map_table,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> FinitePoset {
        let covers: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        FinitePoset::from_cover(n, &covers, 0).unwrap()
    }

    fn diamond() -> FinitePoset {
        // 0 = ⊥, 1 = a, 2 = b, 3 = ⊤
        FinitePoset::from_cover(4, &[(0, 1), (0, 2), (1, 3), (2, 3)], 0).unwrap()
    }

    #[test]
    fn identity_on_chain_is_monotone() {
        let p = chain(2);
        let f = MonotoneMap::new(&p, vec![0, 1]).unwrap();
        assert_eq!(f.check_monotone(), None);
    }

    #[test]
    fn swap_on_chain_is_not_monotone() {
        let p = chain(2);
        let f = MonotoneMap::new(&p, vec![1, 0]).unwrap();
        assert_eq!(f.check_monotone(), Some((0, 1)));
    }

    #[test]
    fn constant_map_on_diamond_is_monotone() {
        let p = diamond();
        let f = MonotoneMap::new(&p, vec![1, 1, 1, 1]).unwrap();
        assert!(f.is_monotone());
    }

    #[test]
    fn map_with_out_of_range_target_is_malformed() {
        let p = chain(2);
        assert_eq!(
            MonotoneMap::new(&p, vec![0, 2]).unwrap_err(),
            MapError::TargetOutOfRange {
                from: 1,
                to: 2,
                count: 2
            }
        );
    }

    #[test]
    fn kleene_identity_stays_at_bottom() {
        let p = chain(2);
        let f = MonotoneMap::new(&p, vec![0, 1]).unwrap();
        let k = kleene_lfp(&f).unwrap();
        assert_eq!(k.fixed_point, 0);
        assert_eq!(k.trace, vec![0]);
    }

    #[test]
    fn kleene_climbs_three_chain() {
        // f(x) = min(x + 1, 2) on 0 ⊑ 1 ⊑ 2
        let p = chain(3);
        let f = MonotoneMap::new(&p, vec![1, 2, 2]).unwrap();
        let k = kleene_lfp(&f).unwrap();
        assert_eq!(brute_force_fixed_points(&f), vec![2]);
        assert_eq!(k.fixed_point, 2);
        assert_eq!(k.trace, vec![0, 1, 2]);
    }

    #[test]
    fn kleene_on_diamond_stops_at_least_fixed_point() {
        // f(⊥)=a, f(a)=a, f(b)=⊤, f(⊤)=⊤; fixed points {a, ⊤}, least a.
        let p = diamond();
        let f = MonotoneMap::new(&p, vec![1, 1, 3, 3]).unwrap();
        assert_eq!(brute_force_fixed_points(&f), vec![1, 3]);
        let k = kleene_lfp(&f).unwrap();
        assert_eq!(k.fixed_point, 1);
        assert_eq!(k.trace, vec![0, 1]);
    }

    #[test]
    fn kleene_rejects_non_monotone_maps() {
        let p = chain(2);
        let f = MonotoneMap::new(&p, vec![1, 0]).unwrap();
        assert_eq!(kleene_lfp(&f).unwrap_err(), MapError::NotMonotone { a: 0, b: 1 });
    }

    #[test]
    fn identity_fixes_everything() {
        let p = chain(2);
        let f = MonotoneMap::new(&p, vec![0, 1]).unwrap();
        assert_eq!(brute_force_fixed_points(&f), vec![0, 1]);
    }

    #[test]
    fn constant_map_fixes_only_its_value() {
        let p = diamond();
        let f = MonotoneMap::new(&p, vec![1, 1, 1, 1]).unwrap();
        assert_eq!(brute_force_fixed_points(&f), vec![1]);
    }

    #[test]
    fn trace_length_bounded_by_height() {
        let p = diamond();
        assert_eq!(p.height(), 2);
        let f = MonotoneMap::new(&p, vec![1, 3, 3, 3]).unwrap();
        let k = kleene_lfp(&f).unwrap();
        assert!(k.trace.len() <= p.height() + 1);
    }

    #[test]
    fn trace_is_ascending() {
        let p = chain(4);
        let f = MonotoneMap::new(&p, vec![1, 2, 3, 3]).unwrap();
        let k = kleene_lfp(&f).unwrap();
        for pair in k.trace.windows(2) {
            assert!(p.leq(pair[0], pair[1]));
        }
    }

    #[test]
    fn cycle_in_covers_fails_antisymmetry() {
        let err = FinitePoset::from_cover(2, &[(0, 1), (1, 0)], 0).unwrap_err();
        assert_eq!(err, PosetError::NotAntisymmetric { a: 0, b: 1 });
    }

    #[test]
    fn missing_bottom_relation_is_reported() {
        // Two incomparable elements; 0 cannot be the bottom.
        let err = FinitePoset::from_cover(2, &[], 0).unwrap_err();
        assert_eq!(err, PosetError::BottomNotLeast { bottom: 0, elem: 1 });
    }

    #[test]
    fn raw_table_validation_finds_transitivity_witness() {
        // 0 ≤ 1, 1 ≤ 2, but not 0 ≤ 2.
        let n = 3;
        let mut leq = vec![false; 9];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        leq[1] = true; // 0 ≤ 1
        leq[n + 2] = true; // 1 ≤ 2
        let err = FinitePoset::from_leq_table(n, leq, 0).unwrap_err();
        assert_eq!(err, PosetError::NotTransitive { a: 0, b: 1, c: 2 });
    }

    #[test]
    fn reflexivity_violation_is_reported_with_witness() {
        let mut leq = vec![false; 4];
        leq[0] = true; // only 0 ≤ 0
        let err = FinitePoset::from_leq_table(2, leq, 0).unwrap_err();
        assert_eq!(err, PosetError::NotReflexive { elem: 1 });
    }

    const DIAMOND_SPEC: &str = "\
elem bot
elem a
elem b
elem top
bottom bot
cover bot a
cover bot b
cover a top
cover b top
map bot a
map a a
map b top
map top top
";

    #[test]
    fn parses_diamond_spec() {
        let spec = parse_poset_spec(DIAMOND_SPEC).unwrap();
        assert_eq!(spec.names, vec!["bot", "a", "b", "top"]);
        assert_eq!(spec.poset.bottom(), 0);
        let f = MonotoneMap::new(&spec.poset, spec.map_table.clone()).unwrap();
        assert_eq!(kleene_lfp(&f).unwrap().fixed_point, 1);
    }

    #[test]
    fn parser_reports_unknown_directive_with_line() {
        let err = parse_poset_spec("elem a\nfoo a\n").unwrap_err();
        assert_eq!(err.line, Some(2));
        assert!(err.message.contains("foo"));
    }

    #[test]
    fn parser_reports_unknown_element() {
        let err = parse_poset_spec("elem a\nbottom a\nmap a z\n").unwrap_err();
        assert_eq!(err.line, Some(3));
        assert!(err.message.contains('z'));
    }

    #[test]
    fn parser_requires_total_map() {
        let err = parse_poset_spec("elem a\nelem b\nbottom a\ncover a b\nmap a a\n").unwrap_err();
        assert_eq!(err.line, None);
        assert!(err.message.contains('b'));
    }

    #[test]
    fn parser_rejects_duplicate_bottom() {
        let err = parse_poset_spec("elem a\nbottom a\nbottom a\nmap a a\n").unwrap_err();
        assert_eq!(err.line, Some(3));
    }
}
