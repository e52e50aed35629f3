//! Exact linear algebra over the two-element field on bit-packed vectors.
//!
//! Everything downstream (relation subspaces of tensor powers, quotient
//! dimensions, basis extension for witness construction) reduces to the
//! handful of primitives in this module: spans in reduced row echelon form,
//! membership tests, canonical coset representatives and tensor-index
//! bookkeeping. Vectors are immutable after construction as far as callers
//! are concerned; all operations return fresh values.

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use std::fmt;

/// Default hard cap on ambient dimensions (2^20). `HYPERK_MAX_AMBIENT` may
/// lower it, never raise it.
pub const DEFAULT_AMBIENT_CAP: usize = 1 << 20;

/// Effective ambient-dimension cap for tensor powers and spans.
pub fn ambient_cap() -> usize {
    match std::env::var("HYPERK_MAX_AMBIENT") {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n >= 1 => n.min(DEFAULT_AMBIENT_CAP),
            _ => DEFAULT_AMBIENT_CAP,
        },
        Err(_) => DEFAULT_AMBIENT_CAP,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum F2Error {
    #[error("vector length {found} does not match ambient dimension {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("input vectors are linearly dependent")]
    DependentInput,
    #[error("ambient dimension {requested} exceeds the cap {cap}")]
    AmbientTooLarge { requested: usize, cap: usize },
}

/// A vector in F2^n, 64 coordinates per machine word.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Vector {
    len: usize,
    words: Vec<u64>,
}

impl F2Vector {
    pub fn zeros(len: usize) -> Self {
        F2Vector {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    /// Standard basis vector e_i.
    pub fn basis(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_ones(len: usize, ones: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in ones {
            v.set(i, true);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Coordinate access. Panics on out-of-range indices; coordinates are
    /// never silently truncated.
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "coordinate {} out of range 0..{}", i, self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "coordinate {} out of range 0..{}", i, self.len);
        if value {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    /// Coordinatewise XOR. v + v = 0 for every v.
    pub fn xor_assign(&mut self, other: &F2Vector) {
        assert_eq!(
            self.len, other.len,
            "xor of vectors with different lengths"
        );
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
    }

    pub fn xor(&self, other: &F2Vector) -> F2Vector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the leftmost nonzero coordinate.
    pub fn leading_one(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Kronecker (tensor) product: (v ⊗ w)[i·|w| + j] = v[i]·w[j].
    pub fn kron(&self, other: &F2Vector) -> F2Vector {
        let mut out = F2Vector::zeros(self.len * other.len);
        for i in self.ones() {
            for j in other.ones() {
                out.set(i * other.len + j, true);
            }
        }
        out
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }
}

impl fmt::Debug for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", self.get(i) as u8)?;
        }
        Ok(())
    }
}

impl Serialize for F2Vector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len))?;
        for i in 0..self.len {
            seq.serialize_element(&(self.get(i) as u8))?;
        }
        seq.end()
    }
}

/// A subspace of F2^d held as a reduced row echelon basis.
///
/// Pivots are leftmost nonzero coordinates; each pivot column has exactly
/// one nonzero entry across the basis rows, so reduction against the rows
/// yields a canonical coset representative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct F2Subspace {
    ambient_dim: usize,
    basis: Vec<F2Vector>,
    pivot_columns: Vec<usize>,
}

impl F2Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        F2Subspace {
            ambient_dim,
            basis: Vec::new(),
            pivot_columns: Vec::new(),
        }
    }

    /// RREF span of a generating set.
    pub fn span(vectors: &[F2Vector], ambient_dim: usize) -> Result<Self, F2Error> {
        let mut s = Self::zero(ambient_dim);
        for v in vectors {
            s.insert(v)?;
        }
        Ok(s)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[F2Vector] {
        &self.basis
    }

    pub fn pivot_columns(&self) -> &[usize] {
        &self.pivot_columns
    }

    /// Columns without a pivot; canonical representatives live on these.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient_dim];
        for &p in &self.pivot_columns {
            is_pivot[p] = true;
        }
        (0..self.ambient_dim).filter(|&c| !is_pivot[c]).collect()
    }

    /// Adds a generator, keeping RREF. Returns true when the dimension grew.
    pub fn insert(&mut self, v: &F2Vector) -> Result<bool, F2Error> {
        if v.len() != self.ambient_dim {
            return Err(F2Error::LengthMismatch {
                expected: self.ambient_dim,
                found: v.len(),
            });
        }
        let mut r = v.clone();
        for (row, &p) in self.basis.iter().zip(&self.pivot_columns) {
            if r.get(p) {
                r.xor_assign(row);
            }
        }
        let Some(pivot) = r.leading_one() else {
            return Ok(false);
        };
        // Clear the new pivot column in existing rows, then insert sorted.
        for row in &mut self.basis {
            if row.get(pivot) {
                row.xor_assign(&r);
            }
        }
        let at = self
            .pivot_columns
            .iter()
            .position(|&p| p > pivot)
            .unwrap_or(self.pivot_columns.len());
        self.basis.insert(at, r);
        self.pivot_columns.insert(at, pivot);
        Ok(true)
    }

    /// Membership test: reduction of v against the basis leaves zero.
    pub fn contains(&self, v: &F2Vector) -> Result<bool, F2Error> {
        Ok(self.reduce(v)?.is_zero())
    }

    /// Canonical reduced representative of the coset v + S. Two vectors get
    /// equal output iff they differ by an element of the subspace.
    pub fn reduce(&self, v: &F2Vector) -> Result<F2Vector, F2Error> {
        if v.len() != self.ambient_dim {
            return Err(F2Error::LengthMismatch {
                expected: self.ambient_dim,
                found: v.len(),
            });
        }
        let mut r = v.clone();
        for (row, &p) in self.basis.iter().zip(&self.pivot_columns) {
            if r.get(p) {
                r.xor_assign(row);
            }
        }
        Ok(r)
    }

    /// Coordinates of the coset of v in the quotient F2^d / S, read off the
    /// free columns of the canonical representative.
    pub fn coset_coordinates(&self, v: &F2Vector) -> Result<F2Vector, F2Error> {
        let r = self.reduce(v)?;
        let free = self.free_columns();
        let mut out = F2Vector::zeros(free.len());
        for (k, &c) in free.iter().enumerate() {
            if r.get(c) {
                out.set(k, true);
            }
        }
        Ok(out)
    }

    /// Coordinates of v with respect to this RREF basis, when v lies in the
    /// subspace.
    pub fn coordinates_of(&self, v: &F2Vector) -> Result<Option<F2Vector>, F2Error> {
        if v.len() != self.ambient_dim {
            return Err(F2Error::LengthMismatch {
                expected: self.ambient_dim,
                found: v.len(),
            });
        }
        let mut r = v.clone();
        let mut coords = F2Vector::zeros(self.basis.len());
        for (i, (row, &p)) in self.basis.iter().zip(&self.pivot_columns).enumerate() {
            if r.get(p) {
                r.xor_assign(row);
                coords.set(i, true);
            }
        }
        Ok(if r.is_zero() { Some(coords) } else { None })
    }
}

/// Extends a linearly independent list to a basis of span(independent ∪ pool).
///
/// The output starts with the input list, in order; ties among pool vectors
/// are broken by pool order (first pool vector that enlarges the span wins).
pub fn extend_to_basis(
    independent: &[F2Vector],
    pool: &[F2Vector],
) -> Result<Vec<F2Vector>, F2Error> {
    let ambient = independent
        .first()
        .or_else(|| pool.first())
        .map_or(0, F2Vector::len);
    let mut span = F2Subspace::zero(ambient);
    for v in independent {
        if !span.insert(v)? {
            return Err(F2Error::DependentInput);
        }
    }
    let mut out = independent.to_vec();
    for v in pool {
        if span.insert(v)? {
            out.push(v.clone());
        }
    }
    Ok(out)
}

/// Incremental span that remembers, for every row, which input generators
/// produced it, so members can be expressed as explicit generator sums.
#[derive(Debug, Clone)]
pub struct SpanTracker {
    ambient_dim: usize,
    num_gens: usize,
    next_gen: usize,
    rows: Vec<F2Vector>,
    combos: Vec<F2Vector>,
    pivots: Vec<usize>,
}

impl SpanTracker {
    pub fn new(ambient_dim: usize, num_gens: usize) -> Self {
        SpanTracker {
            ambient_dim,
            num_gens,
            next_gen: 0,
            rows: Vec::new(),
            combos: Vec::new(),
            pivots: Vec::new(),
        }
    }

    /// Adds the next generator. Returns true when the span grew.
    pub fn push(&mut self, v: &F2Vector) -> Result<bool, F2Error> {
        assert!(self.next_gen < self.num_gens, "more generators than declared");
        if v.len() != self.ambient_dim {
            return Err(F2Error::LengthMismatch {
                expected: self.ambient_dim,
                found: v.len(),
            });
        }
        let mut r = v.clone();
        let mut combo = F2Vector::basis(self.num_gens, self.next_gen);
        self.next_gen += 1;
        for i in 0..self.rows.len() {
            if r.get(self.pivots[i]) {
                r.xor_assign(&self.rows[i]);
                combo.xor_assign(&self.combos[i]);
            }
        }
        let Some(pivot) = r.leading_one() else {
            return Ok(false);
        };
        self.rows.push(r);
        self.combos.push(combo);
        self.pivots.push(pivot);
        Ok(true)
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Writes v as a sum of pushed generators, if it lies in their span.
    /// The result is a bit per generator index.
    pub fn express(&self, v: &F2Vector) -> Result<Option<F2Vector>, F2Error> {
        if v.len() != self.ambient_dim {
            return Err(F2Error::LengthMismatch {
                expected: self.ambient_dim,
                found: v.len(),
            });
        }
        let mut r = v.clone();
        let mut combo = F2Vector::zeros(self.num_gens);
        for i in 0..self.rows.len() {
            if r.get(self.pivots[i]) {
                r.xor_assign(&self.rows[i]);
                combo.xor_assign(&self.combos[i]);
            }
        }
        Ok(if r.is_zero() { Some(combo) } else { None })
    }
}

/// Index bookkeeping for the n-th tensor power of a d-dimensional space.
///
/// Tuples are ordered lexicographically with the first slot most
/// significant, so the tuple↔flat mapping is the base-d expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorIndex {
    degree: usize,
    factor_dim: usize,
    ambient_dim: usize,
}

impl TensorIndex {
    pub fn new(degree: usize, factor_dim: usize) -> Result<Self, F2Error> {
        assert!(degree >= 1, "tensor degree must be at least 1");
        let cap = ambient_cap();
        let mut ambient: usize = 1;
        for _ in 0..degree {
            ambient = ambient
                .checked_mul(factor_dim)
                .filter(|&a| a <= cap)
                .ok_or(F2Error::AmbientTooLarge {
                    requested: usize::MAX,
                    cap,
                })?;
        }
        Ok(TensorIndex {
            degree,
            factor_dim,
            ambient_dim: ambient,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn factor_dim(&self) -> usize {
        self.factor_dim
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn flat(&self, tuple: &[usize]) -> usize {
        assert_eq!(tuple.len(), self.degree);
        let mut idx = 0;
        for &t in tuple {
            assert!(t < self.factor_dim);
            idx = idx * self.factor_dim + t;
        }
        idx
    }

    pub fn tuple(&self, mut flat: usize) -> Vec<usize> {
        assert!(flat < self.ambient_dim);
        let mut out = vec![0; self.degree];
        for slot in (0..self.degree).rev() {
            out[slot] = flat % self.factor_dim;
            flat /= self.factor_dim;
        }
        out
    }
}
