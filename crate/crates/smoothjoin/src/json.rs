//! Serialized forms. Rationals travel as strings `"p/q"`.

use std::fmt;
use std::str::FromStr;

use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smoothjoin_core::continuity::{ConditionKind, ConditionSet, SmoothnessSystem};
use smoothjoin_core::geometry::{JoinKind, RationalPoint};
use smoothjoin_core::verify::{Failure, VerificationReport};
use smoothjoin_core::{BlockedMultiIndex, MultiIndex, Rational};

/// Exact rational, written as `"p/q"` and read from a string or an integer.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Q(pub Rational);

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

struct QVisitor;

impl Visitor<'_> for QVisitor {
    type Value = Q;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a rational as \"p/q\" or an integer")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Q, E> {
        let t = v.trim();
        let (num, den) = t.split_once('/').unwrap_or((t, "1"));
        let ok = |s: &str| !s.is_empty() && s.trim_start_matches('-').chars().all(|c| c.is_ascii_digit());
        if !ok(num) || !ok(den.trim()) {
            return Err(E::custom(format!("not a rational: {v:?}")));
        }
        let r = Rational::from_str(&format!("{}/{}", num.trim(), den.trim())).map_err(|_| E::custom(format!("not a rational: {v:?}")))?;
        Ok(Q(r))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Q, E> {
        Ok(Q(smoothjoin_core::int(v)))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Q, E> {
        Ok(Q(Rational::from_integer(v.into())))
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        d.deserialize_any(QVisitor)
    }
}

pub fn qs(v: &[Rational]) -> Vec<Q> {
    v.iter().cloned().map(Q).collect()
}

pub fn floats(v: &[Rational]) -> Vec<f64> {
    v.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
}

pub fn index(k: &BlockedMultiIndex) -> Vec<Vec<u32>> {
    k.blocks().iter().map(|b| b.entries().to_vec()).collect()
}

pub fn from_index(k: &[Vec<u32>]) -> BlockedMultiIndex {
    BlockedMultiIndex::new(k.iter().map(|b| MultiIndex::new(b.clone())).collect())
}

pub fn point(p: &RationalPoint) -> Vec<Q> {
    qs(p.coords())
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct TermJson {
    pub patch: String,
    pub index: Vec<Vec<u32>>,
    pub weight: Q,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct ConditionJson {
    pub order: u32,
    pub kind: String,
    pub terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct ConditionSetJson {
    pub left: String,
    pub right: String,
    pub order: u32,
    pub direction: Vec<Q>,
    pub join: String,
    pub swapped: bool,
    pub normalized_degrees: Vec<u32>,
    pub cospatiality_test: String,
    pub conditions: Vec<ConditionJson>,
}

impl From<&ConditionSet> for ConditionSetJson {
    fn from(cs: &ConditionSet) -> Self {
        let m = &cs.metadata;
        ConditionSetJson {
            left: m.left.id.clone(),
            right: m.right.id.clone(),
            order: cs.order,
            direction: qs(&cs.direction),
            join: match m.join {
                Some(JoinKind::Coincident) => "coincident",
                Some(JoinKind::Redistributed) => "redistributed",
                None => "simplex",
            }
            .into(),
            swapped: m.swapped,
            normalized_degrees: m.normalized_degrees.clone(),
            cospatiality_test: m.cospatiality_test.into(),
            conditions: cs
                .conditions
                .iter()
                .map(|c| ConditionJson {
                    order: c.order(),
                    kind: match c.kind() {
                        ConditionKind::Transfer => "transfer",
                        ConditionKind::Reducibility => "reducibility",
                    }
                    .into(),
                    terms: c
                        .terms()
                        .iter()
                        .map(|(r, w)| TermJson { patch: r.patch.clone(), index: index(&r.index), weight: Q(w.clone()) })
                        .collect(),
                })
                .collect(),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct ColumnJson {
    pub patch: String,
    pub index: Vec<Vec<u32>>,
}

/// Coordinate-format matrix with its column manifest.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub columns: Vec<ColumnJson>,
    /// `(row, col, weight)` triples, row-major.
    pub entries: Vec<(usize, usize, Q)>,
}

impl From<&SmoothnessSystem> for MatrixJson {
    fn from(sys: &SmoothnessSystem) -> Self {
        MatrixJson {
            rows: sys.rows.len(),
            cols: sys.columns.len(),
            columns: sys.columns.iter().map(|c| ColumnJson { patch: c.patch.clone(), index: index(&c.index) }).collect(),
            entries: sys
                .rows
                .iter()
                .enumerate()
                .flat_map(|(i, row)| row.iter().map(move |(j, w)| (i, *j, Q(w.clone()))))
                .collect(),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct FailureJson {
    pub point: Vec<Q>,
    pub order: u32,
    pub directions: Vec<Vec<Q>>,
    pub lhs: Q,
    pub rhs: Q,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct ReportJson {
    pub pair: String,
    pub orders: Vec<u32>,
    pub samples: usize,
    pub max_discrepancy: Q,
    pub passed: bool,
    pub failures: Vec<FailureJson>,
}

impl From<&VerificationReport> for ReportJson {
    fn from(r: &VerificationReport) -> Self {
        let failure = |f: &Failure| FailureJson {
            point: point(&f.point),
            order: f.order,
            directions: f.directions.iter().map(|d| qs(d)).collect(),
            lhs: Q(f.lhs.clone()),
            rhs: Q(f.rhs.clone()),
        };
        ReportJson {
            pair: r.pair.clone(),
            orders: r.orders.clone(),
            samples: r.samples,
            max_discrepancy: Q(r.max_discrepancy.clone()),
            passed: r.passed,
            failures: r.failures.iter().map(failure).collect(),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct VerifyJson {
    pub passed: bool,
    pub seed: u64,
    pub replayed_matrix: bool,
    pub pairs: Vec<ReportJson>,
}
