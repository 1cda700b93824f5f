//! Coefficient values: either plain rationals or symbolic linear forms.
//!
//! The degree operators and De Casteljau steps are generic over
//! [`Coefficient`], so the same code evaluates numeric B-nets and builds the
//! symbolic right-hand sides of continuity conditions.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::Rational;

pub trait Coefficient: Clone {
    fn null() -> Self;
    fn is_null(&self) -> bool;
    /// `self += factor * other`
    fn add_scaled(&mut self, other: &Self, factor: &Rational);

    fn scaled(&self, factor: &Rational) -> Self {
        let mut out = Self::null();
        out.add_scaled(self, factor);
        out
    }
}

impl Coefficient for Rational {
    fn null() -> Self {
        Zero::zero()
    }

    fn is_null(&self) -> bool {
        Zero::is_zero(self)
    }

    fn add_scaled(&mut self, other: &Self, factor: &Rational) {
        if !Zero::is_zero(factor) {
            *self += other * factor;
        }
    }
}

/// A sparse linear combination `Σ w_k x_k` of symbols `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm<K: Ord>(BTreeMap<K, Rational>);

impl<K: Ord + Clone> LinearForm<K> {
    pub fn variable(key: K) -> Self {
        let mut m = BTreeMap::new();
        m.insert(key, Rational::from_integer(1.into()));
        LinearForm(m)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&K, &Rational)> {
        self.0.iter()
    }

    pub fn get(&self, key: &K) -> Rational {
        self.0.get(key).cloned().unwrap_or_else(Zero::zero)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_term(&mut self, key: K, weight: &Rational) {
        if Zero::is_zero(weight) {
            return;
        }
        let entry = self.0.entry(key.clone()).or_insert_with(Zero::zero);
        *entry += weight;
        if Zero::is_zero(entry) {
            self.0.remove(&key);
        }
    }

    /// Substitutes values for the symbols.
    pub fn evaluate(&self, mut value: impl FnMut(&K) -> Rational) -> Rational {
        self.0
            .iter()
            .fold(Rational::zero(), |acc, (k, w)| acc + w * value(k))
    }

    /// Renames every symbol.
    pub fn map_keys<J: Ord + Clone>(&self, mut f: impl FnMut(&K) -> J) -> LinearForm<J> {
        let mut out = LinearForm(BTreeMap::new());
        for (k, w) in &self.0 {
            out.add_term(f(k), w);
        }
        out
    }

    pub fn into_terms(self) -> Vec<(K, Rational)> {
        self.0.into_iter().collect()
    }
}

impl<K: Ord + Clone> Coefficient for LinearForm<K> {
    fn null() -> Self {
        LinearForm(BTreeMap::new())
    }

    fn is_null(&self) -> bool {
        self.0.is_empty()
    }

    fn add_scaled(&mut self, other: &Self, factor: &Rational) {
        if Zero::is_zero(factor) {
            return;
        }
        for (k, w) in &other.0 {
            self.add_term(k.clone(), &(w * factor));
        }
    }
}
