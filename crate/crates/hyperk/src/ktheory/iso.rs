//! Exact graded-isomorphism search: brute force over invertible degree-1
//! maps, accepting one whose tensor powers carry relations into relations.

use super::graded::GradedKData;
use super::KError;
use crate::f2linalg::{F2Subspace, F2Vector, TensorIndex};

/// Degree-1 dimensions above this make GL enumeration unreasonable.
pub const ISO_SEARCH_BOUND: usize = 4;

/// Searches for an invertible degree-1 map whose induced maps send relations
/// into relations degree by degree. Dimension equality per degree is checked
/// first as a fast necessary condition; with equal dimensions, forward
/// inclusion of relation spaces under an invertible map forces equality, so
/// one direction suffices.
///
/// Returns the witness columns (images of the basis) or None when the search
/// is exhausted.
pub fn graded_iso_exists(
    a: &GradedKData,
    b: &GradedKData,
) -> Result<Option<Vec<F2Vector>>, KError> {
    let d = a.k1_dim();
    if d > ISO_SEARCH_BOUND || b.k1_dim() > ISO_SEARCH_BOUND {
        return Err(KError::SearchBoundExceeded(
            d.max(b.k1_dim()),
            ISO_SEARCH_BOUND,
        ));
    }
    let max_degree = a.max_degree().min(b.max_degree());
    if b.k1_dim() != d {
        return Ok(None);
    }
    for n in 0..=max_degree {
        if a.quotient_dim(n) != b.quotient_dim(n) {
            return Ok(None);
        }
    }
    if d == 0 {
        return Ok(Some(Vec::new()));
    }

    let mut columns = vec![0usize; d];
    'matrices: loop {
        // advance to the next matrix (base 2^d counter over columns)
        // but test the current one first
        let cols: Vec<F2Vector> = columns
            .iter()
            .map(|&mask| {
                let mut v = F2Vector::zeros(d);
                for i in 0..d {
                    if mask >> i & 1 == 1 {
                        v.set(i, true);
                    }
                }
                v
            })
            .collect();
        let invertible = F2Subspace::span(&cols, d).map(|s| s.dim() == d)?;
        if invertible && relations_map_forward(a, b, &cols, max_degree)? {
            return Ok(Some(cols));
        }
        // increment
        for slot in (0..d).rev() {
            columns[slot] += 1;
            if columns[slot] < 1 << d {
                continue 'matrices;
            }
            columns[slot] = 0;
        }
        break;
    }
    Ok(None)
}

fn relations_map_forward(
    a: &GradedKData,
    b: &GradedKData,
    cols: &[F2Vector],
    max_degree: usize,
) -> Result<bool, KError> {
    let d = a.k1_dim();
    for n in 2..=max_degree {
        let idx = TensorIndex::new(n, d)?;
        for rel in a.relations(n).basis() {
            let mut image = F2Vector::zeros(b.ambient_dim(n));
            for flat in rel.ones() {
                let tuple = idx.tuple(flat);
                let mut acc = F2Vector::basis(1, 0);
                for &t in &tuple {
                    acc = acc.kron(&cols[t]);
                }
                image.xor_assign(&acc);
            }
            if !b.relations(n).contains(&image)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
