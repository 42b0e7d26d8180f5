//! The predicate space: comparison atoms `t[A] ρ t'[B]` and `t[A] ρ t[B]`.
//!
//! Predicates are laid out so that every redundancy group (same pattern and
//! column pair, different operator) occupies a contiguous id range whose
//! offsets follow [`Operator::ALL`]. Complement and group lookups are then
//! simple offset arithmetic.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::Range;

use crate::bitset::PredicateSet;
use crate::dataset::{ColumnType, Dataset};
use crate::error::{Error, Result};

pub type PredicateId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Operator {
    Eq,
    Neq,
    Gt,
    Lt,
    Geq,
    Leq,
}

impl Operator {
    pub const ALL: [Operator; 6] = [
        Operator::Eq,
        Operator::Neq,
        Operator::Gt,
        Operator::Lt,
        Operator::Geq,
        Operator::Leq,
    ];

    pub fn complement(self) -> Operator {
        match self {
            Operator::Eq => Operator::Neq,
            Operator::Neq => Operator::Eq,
            Operator::Gt => Operator::Leq,
            Operator::Leq => Operator::Gt,
            Operator::Lt => Operator::Geq,
            Operator::Geq => Operator::Lt,
        }
    }

    /// Operators admissible for a column type.
    pub fn allowed(ty: ColumnType) -> &'static [Operator] {
        match ty {
            ColumnType::String => &Self::ALL[..2],
            ColumnType::Numeric => &Self::ALL,
        }
    }

    /// Whether `left ρ right` holds given `left.cmp(right)`.
    pub fn holds(self, ord: Ordering) -> bool {
        match self {
            Operator::Eq => ord == Ordering::Equal,
            Operator::Neq => ord != Ordering::Equal,
            Operator::Gt => ord == Ordering::Greater,
            Operator::Lt => ord == Ordering::Less,
            Operator::Geq => ord != Ordering::Less,
            Operator::Leq => ord != Ordering::Greater,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Operator::Eq => "=",
            Operator::Neq => "!=",
            Operator::Gt => ">",
            Operator::Lt => "<",
            Operator::Geq => ">=",
            Operator::Leq => "<=",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Operator> {
        Self::ALL.into_iter().find(|op| op.symbol() == s)
    }

    #[inline]
    fn offset(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pattern {
    /// `t[A] ρ t'[B]`
    CrossTuple,
    /// `t[A] ρ t[B]`, evaluated on the first tuple of the ordered pair.
    SameTuple,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Predicate {
    pub left: usize,
    pub right: usize,
    pub op: Operator,
    pub pattern: Pattern,
}

/// A redundancy group: all predicates over one `(pattern, left, right)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Group {
    pub pattern: Pattern,
    pub left: usize,
    pub right: usize,
    pub ty: ColumnType,
    pub first: PredicateId,
}

impl Group {
    pub fn len(&self) -> usize {
        Operator::allowed(self.ty).len()
    }

    pub fn ids(&self) -> Range<PredicateId> {
        self.first..self.first + self.len()
    }
}

#[derive(Debug, Clone)]
pub struct PredicateSpace {
    predicates: Vec<Predicate>,
    group_of: Vec<usize>,
    groups: Vec<Group>,
    column_names: Vec<String>,
}

/// `|values(A) ∩ values(B)| / min(|values(A)|, |values(B)|)` over sorted,
/// deduplicated keys.
fn common_value_ratio(a: &[u64], b: &[u64]) -> f64 {
    let denom = a.len().min(b.len());
    if denom == 0 {
        return 0.0;
    }
    let (mut i, mut j, mut common) = (0, 0, 0usize);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    common as f64 / denom as f64
}

impl PredicateSpace {
    /// Generates the predicate space of `d`.
    ///
    /// Every column is compared with itself across tuples. Two distinct
    /// same-type columns are compared (across tuples in both directions, and
    /// within a tuple once per unordered pair) when their common-value ratio
    /// reaches `common_value_threshold`.
    pub fn generate(d: &Dataset, common_value_threshold: f64) -> Result<Self> {
        if d.column_count() == 0 {
            return Err(Error::NoColumns);
        }
        if !(0.0..=1.0).contains(&common_value_threshold) {
            return Err(Error::InvalidParameter {
                name: "common-value threshold",
                reason: "must lie in [0, 1]",
            });
        }
        let k = d.column_count();
        let keys: Vec<Vec<u64>> = (0..k).map(|c| d.distinct_keys(c)).collect();
        let comparable = |a: usize, b: usize| {
            d.column_type(a) == d.column_type(b)
                && common_value_ratio(&keys[a], &keys[b]) >= common_value_threshold
        };

        let mut pairs: Vec<(Pattern, usize, usize)> = Vec::new();
        for a in 0..k {
            for b in 0..k {
                if a == b || comparable(a, b) {
                    pairs.push((Pattern::CrossTuple, a, b));
                }
            }
        }
        for a in 0..k {
            for b in a + 1..k {
                if comparable(a, b) {
                    pairs.push((Pattern::SameTuple, a, b));
                }
            }
        }

        let mut predicates = Vec::new();
        let mut group_of = Vec::new();
        let mut groups = Vec::with_capacity(pairs.len());
        for (pattern, left, right) in pairs {
            let ty = d.column_type(left);
            let gid = groups.len();
            groups.push(Group {
                pattern,
                left,
                right,
                ty,
                first: predicates.len(),
            });
            for &op in Operator::allowed(ty) {
                predicates.push(Predicate {
                    left,
                    right,
                    op,
                    pattern,
                });
                group_of.push(gid);
            }
        }
        Ok(PredicateSpace {
            predicates,
            group_of,
            groups,
            column_names: (0..k).map(|c: usize| String::from(d.column_name(c))).collect(),
        })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.predicates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.predicates.is_empty()
    }

    #[inline]
    pub fn predicate(&self, id: PredicateId) -> &Predicate {
        &self.predicates[id]
    }

    pub fn predicates(&self) -> &[Predicate] {
        &self.predicates
    }

    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    pub fn column_names(&self) -> &[String] {
        &self.column_names
    }

    #[inline]
    pub fn complement(&self, id: PredicateId) -> PredicateId {
        let g = &self.groups[self.group_of[id]];
        g.first + self.predicates[id].op.complement().offset()
    }

    pub fn complement_set(&self, s: &PredicateSet) -> PredicateSet {
        PredicateSet::from_ids(self.len(), s.iter().map(|id| self.complement(id)))
    }

    #[inline]
    pub fn redundancy_group_of(&self, id: PredicateId) -> usize {
        self.group_of[id]
    }

    /// All ids sharing `id`'s redundancy group, `id` included.
    pub fn redundancy_group(&self, id: PredicateId) -> Range<PredicateId> {
        self.groups[self.group_of[id]].ids()
    }

    pub fn find(
        &self,
        pattern: Pattern,
        left: usize,
        right: usize,
        op: Operator,
    ) -> Option<PredicateId> {
        self.groups
            .iter()
            .find(|g| g.pattern == pattern && g.left == left && g.right == right)
            .filter(|g| Operator::allowed(g.ty).contains(&op))
            .map(|g| g.first + op.offset())
    }

    /// Looks a predicate up by column names.
    pub fn find_named(
        &self,
        pattern: Pattern,
        left: &str,
        op: Operator,
        right: &str,
    ) -> Option<PredicateId> {
        let l = self.column_names.iter().position(|c| c == left)?;
        let r = self.column_names.iter().position(|c| c == right)?;
        self.find(pattern, l, r, op)
    }

    /// `t.A op t'.B`, or `t.A op t.B` for same-tuple predicates.
    pub fn render(&self, id: PredicateId) -> String {
        let p = &self.predicates[id];
        let rhs = match p.pattern {
            Pattern::CrossTuple => "t'",
            Pattern::SameTuple => "t",
        };
        format!(
            "t.{} {} {}.{}",
            self.column_names[p.left],
            p.op.symbol(),
            rhs,
            self.column_names[p.right]
        )
    }

    /// True if no two ids of `s` share a redundancy group.
    pub fn is_nontrivial(&self, s: &PredicateSet) -> bool {
        let mut seen = PredicateSet::new(self.groups.len());
        s.iter().all(|id| seen.insert(self.group_of[id]))
    }
}
