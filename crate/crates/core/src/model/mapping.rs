use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::graph::Constant;
use crate::model::Variable;

/// A finite partial function from variables to constants.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mapping(BTreeMap<Variable, Constant>);

impl Mapping {
    /// The mapping with empty domain.
    pub fn empty() -> Self {
        Mapping(BTreeMap::new())
    }

    pub fn from_pairs<I, V, C>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (V, C)>,
        V: Into<Variable>,
        C: Into<Constant>,
    {
        Mapping(pairs.into_iter().map(|(v, c)| (v.into(), c.into())).collect())
    }

    pub fn get(&self, v: &Variable) -> Option<&Constant> {
        self.0.get(v)
    }

    /// Bind `v`; returns false (leaving the mapping unchanged) if `v` is
    /// already bound to a different constant.
    pub fn bind(&mut self, v: Variable, c: Constant) -> bool {
        match self.0.get(&v) {
            Some(existing) => *existing == c,
            None => {
                self.0.insert(v, c);
                true
            }
        }
    }

    pub fn domain(&self) -> impl Iterator<Item = &Variable> {
        self.0.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Variable, &Constant)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Agreement on every shared variable.
    pub fn compatible(&self, other: &Mapping) -> bool {
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        small.0.iter().all(|(v, c)| large.0.get(v).is_none_or(|d| d == c))
    }

    /// `μ1 ∪ μ2`, or `None` when the two are incompatible.
    pub fn merge(&self, other: &Mapping) -> Option<Mapping> {
        let mut out = self.clone();
        for (v, c) in &other.0 {
            if !out.bind(v.clone(), c.clone()) {
                return None;
            }
        }
        Some(out)
    }

    /// Restriction to `dom(μ) ∩ vars`.
    pub fn restrict<'a, I>(&self, vars: I) -> Mapping
    where
        I: IntoIterator<Item = &'a Variable>,
    {
        Mapping(vars.into_iter().filter_map(|v| self.0.get(v).map(|c| (v.clone(), c.clone()))).collect())
    }
}

impl fmt::Debug for Mapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, c)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}→{c}")?;
        }
        f.write_str("}")
    }
}

/// A set of mappings.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct MappingSet(BTreeSet<Mapping>);

impl MappingSet {
    pub fn new() -> Self {
        MappingSet(BTreeSet::new())
    }

    /// `{μ∅}`, the identity of [`MappingSet::join`].
    pub fn unit() -> Self {
        MappingSet(BTreeSet::from([Mapping::empty()]))
    }

    pub fn insert(&mut self, m: Mapping) -> bool {
        self.0.insert(m)
    }

    pub fn contains(&self, m: &Mapping) -> bool {
        self.0.contains(m)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Mapping> {
        self.0.iter()
    }

    pub fn is_subset(&self, other: &MappingSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(mut self, other: MappingSet) -> MappingSet {
        if self.0.len() < other.0.len() {
            let mut other = other;
            other.0.append(&mut self.0);
            return other;
        }
        let mut other = other;
        self.0.append(&mut other.0);
        self
    }

    /// The common domain when every member has the same one.
    pub fn uniform_domain(&self) -> Option<Vec<Variable>> {
        let mut it = self.0.iter();
        let first: Vec<Variable> = it.next()?.domain().cloned().collect();
        it.all(|m| m.len() == first.len() && m.domain().eq(first.iter())).then_some(first)
    }

    /// Distinct values bound to `v` across all members.
    pub fn values_of(&self, v: &Variable) -> BTreeSet<Constant> {
        self.0.iter().filter_map(|m| m.get(v).cloned()).collect()
    }

    /// `Ω1 ⋈ Ω2`: unions of all compatible pairs. Uses a hash join on the
    /// shared variables when both sides have uniform domains.
    pub fn join(&self, other: &MappingSet) -> MappingSet {
        if self.is_empty() || other.is_empty() {
            return MappingSet::new();
        }
        let (Some(left_dom), Some(right_dom)) = (self.uniform_domain(), other.uniform_domain()) else {
            return self.nested_loop_join(other);
        };
        let shared: Vec<Variable> = left_dom.iter().filter(|v| right_dom.contains(v)).cloned().collect();
        let (build, probe) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let key = |m: &Mapping| -> Vec<Constant> { shared.iter().map(|v| m.get(v).unwrap().clone()).collect() };
        let mut table: HashMap<Vec<Constant>, Vec<&Mapping>> = HashMap::new();
        for m in build.iter() {
            table.entry(key(m)).or_default().push(m);
        }
        let mut out = MappingSet::new();
        for m in probe.iter() {
            if let Some(matches) = table.get(&key(m)) {
                for b in matches {
                    let mut merged = m.clone();
                    merged.0.extend(b.0.iter().map(|(v, c)| (v.clone(), c.clone())));
                    out.insert(merged);
                }
            }
        }
        out
    }

    fn nested_loop_join(&self, other: &MappingSet) -> MappingSet {
        let mut out = MappingSet::new();
        for a in self.iter() {
            for b in other.iter() {
                if let Some(m) = a.merge(b) {
                    out.insert(m);
                }
            }
        }
        out
    }

    /// Restrict every member to `vars`, merging duplicates.
    pub fn restrict<'a, I>(&self, vars: I) -> MappingSet
    where
        I: IntoIterator<Item = &'a Variable>,
    {
        let vars: Vec<&Variable> = vars.into_iter().collect();
        self.iter().map(|m| m.restrict(vars.iter().copied())).collect()
    }
}

impl FromIterator<Mapping> for MappingSet {
    fn from_iter<T: IntoIterator<Item = Mapping>>(iter: T) -> Self {
        MappingSet(iter.into_iter().collect())
    }
}

impl IntoIterator for MappingSet {
    type Item = Mapping;
    type IntoIter = std::collections::btree_set::IntoIter<Mapping>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a MappingSet {
    type Item = &'a Mapping;
    type IntoIter = std::collections::btree_set::Iter<'a, Mapping>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Debug for MappingSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}
