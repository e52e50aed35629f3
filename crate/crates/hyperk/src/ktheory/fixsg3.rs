//! Constructive witnesses for degree-2 zero sums: when
//! sum_k rho(a_k) rho(b_k) vanishes in k_2 of a pre-special hyperfield, the
//! vanishing is certified by an explicit basis extension {c_i}, elements
//! r_S ∈ (1 - c_S) \ {0} indexed by nonempty subsets S of the basis, and
//! products d_i = prod_{S ∋ i} r_S recovering the b's. The backward checker
//! validates a claimed witness structurally and re-verifies the zero sum
//! against an independently rebuilt relation subspace.
//!
//! Relation pairs here follow the same convention as the K-theory quotient:
//! (u, v) qualifies when v ∈ 1 - u, equivalently 1 ∈ u + v. The subset
//! products r_S stay inside 1 - c_S because pre-special hyperfields compose
//! such memberships multiplicatively, and the default r_S = 1 works because
//! hyperbolicity puts 1 in every 1 - c.

use super::graded::unit_group_coordinates;
use super::KError;
use crate::f2linalg::{extend_to_basis, F2Subspace, F2Vector, SpanTracker};
use crate::hyperstructures::{classify, Classification, FiniteHyperfield};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Fixsg3Witness {
    /// Number of original (a, b) pairs.
    pub n: usize,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    /// Extended basis c_0..c_{m-1} with c_i = a_i for i < n.
    pub c: Vec<usize>,
    /// d_i = b_i for i < n and 1 afterwards.
    pub d: Vec<usize>,
    /// (subset mask over 0..m, element) for every nonempty subset, sorted by
    /// mask; the element lies in (1 - c_S) \ {0}.
    pub r: Vec<(u32, usize)>,
}

#[derive(Debug, Clone, Serialize)]
pub enum Fixsg3Outcome {
    Witness(Fixsg3Witness),
    /// The degree-2 sum is nonzero; carries the canonical reduced
    /// representative of its class.
    NonZero { reduced: F2Vector },
}

#[derive(Debug, Clone, Serialize)]
pub struct BackwardReport {
    pub ok: bool,
    /// Name of the first failing clause when not ok.
    pub failed_clause: Option<String>,
}

struct UnitCoords {
    dim: usize,
    rho: Vec<Option<F2Vector>>,
    elem_of_mask: Vec<usize>,
}

fn unit_coords(f: &FiniteHyperfield) -> Result<UnitCoords, KError> {
    if classify(f) < Classification::PreSpecial {
        return Err(KError::NotPreSpecial(format!("{}", classify(f))));
    }
    let (dim, rho, _) = unit_group_coordinates(f);
    // in a pre-special hyperfield every unit squares to 1, so rho is a
    // bijection between units and masks
    let mut elem_of_mask = vec![usize::MAX; 1 << dim];
    for a in f.nonzero() {
        let mask = mask_of(rho[a].as_ref().unwrap());
        if elem_of_mask[mask] != usize::MAX {
            return Err(KError::Internal(
                "unit group has squares other than 1; rho is not injective".to_string(),
            ));
        }
        elem_of_mask[mask] = a;
    }
    Ok(UnitCoords { dim, rho, elem_of_mask })
}

fn mask_of(v: &F2Vector) -> usize {
    v.ones().fold(0usize, |acc, i| acc | 1 << i)
}

/// Qualifying degree-2 relation pairs with both slots nonzero in
/// coordinates, in lexicographic element order.
fn relation_pairs(f: &FiniteHyperfield) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for u in f.nonzero() {
        for v in f.nonzero() {
            if u != f.one() && v != f.one() && f.add(u, v).contains(f.one()) {
                out.push((u, v));
            }
        }
    }
    out
}

fn subset_product(f: &FiniteHyperfield, c: &[usize], mask: u32) -> usize {
    let mut acc = f.one();
    for (i, &ci) in c.iter().enumerate() {
        if mask >> i & 1 == 1 {
            acc = f.mul(acc, ci);
        }
    }
    acc
}

/// Decides whether sum_k rho(a_k) rho(b_k) = 0 in k_2 and, when it is,
/// returns the structured witness; `a` must be F2-linearly independent in
/// unit-group coordinates.
pub fn fixsg3_forward(
    f: &FiniteHyperfield,
    a: &[usize],
    b: &[usize],
) -> Result<Fixsg3Outcome, KError> {
    if a.is_empty() || a.len() != b.len() {
        return Err(KError::Internal("a and b must be nonempty equal-length lists".to_string()));
    }
    let coords = unit_coords(f)?;
    for &x in a.iter().chain(b) {
        if x == 0 || x >= f.size() {
            return Err(KError::InvalidElement(x));
        }
    }
    let n = a.len();
    let d = coords.dim;
    let rho = |x: usize| coords.rho[x].clone().unwrap();

    // independence of the a's
    {
        let mut t = SpanTracker::new(d, n);
        for &x in a {
            if !t.push(&rho(x))? {
                return Err(KError::DependentInput);
            }
        }
    }

    // express the sum in the degree-2 relation generators
    let pairs = relation_pairs(f);
    let ambient = d * d;
    let mut tracker = SpanTracker::new(ambient, pairs.len());
    for &(u, v) in &pairs {
        tracker.push(&rho(u).kron(&rho(v)))?;
    }
    let mut eta = F2Vector::zeros(ambient);
    for k in 0..n {
        eta.xor_assign(&rho(a[k]).kron(&rho(b[k])));
    }
    let Some(combo) = tracker.express(&eta)? else {
        // reduce against the span for a canonical nonzero representative
        let basis: Vec<F2Vector> = pairs.iter().map(|&(u, v)| rho(u).kron(&rho(v))).collect();
        let sub = F2Subspace::span(&basis, ambient)?;
        return Ok(Fixsg3Outcome::NonZero { reduced: sub.reduce(&eta)? });
    };
    let used: Vec<(usize, usize)> = combo.ones().map(|t| pairs[t]).collect();

    // extend {a_i} to a basis of the span of the a's and the u's
    let a_vectors: Vec<F2Vector> = a.iter().map(|&x| rho(x)).collect();
    let pool: Vec<F2Vector> = used.iter().map(|&(u, _)| rho(u)).collect();
    let c_vectors = extend_to_basis(&a_vectors, &pool)?;
    let m = c_vectors.len();
    let c: Vec<usize> = c_vectors
        .iter()
        .map(|v| coords.elem_of_mask[mask_of(v)])
        .collect();

    // subset decomposition of each used u in the c-basis
    let mut c_tracker = SpanTracker::new(d, m);
    for v in &c_vectors {
        c_tracker.push(v)?;
    }
    let mut r_of_mask: Vec<usize> = vec![f.one(); 1usize << m];
    for &(u, v) in &used {
        let support = c_tracker
            .express(&rho(u))?
            .ok_or_else(|| KError::Internal("generator escapes the extended basis".to_string()))?;
        let mask = mask_of(&support) as u32;
        debug_assert!(mask != 0, "rho(u) = 0 was filtered out of the generators");
        r_of_mask[mask as usize] = f.mul(r_of_mask[mask as usize], v);
    }

    // the products must stay inside (1 - c_S) \ {0}
    let mut r = Vec::with_capacity((1usize << m) - 1);
    for mask in 1u32..1 << m {
        let r_s = r_of_mask[mask as usize];
        let c_s = subset_product(f, &c, mask);
        if r_s == 0 || !f.one_minus(c_s).contains(r_s) {
            return Err(KError::Internal(format!(
                "subset product escaped 1 - c_S at mask {mask:#b}"
            )));
        }
        r.push((mask, r_s));
    }

    // d_i = prod over subsets containing i; the coefficient comparison in
    // the c-basis forces d_i = b_i for i < n and 1 afterwards
    let mut dlist = Vec::with_capacity(m);
    for i in 0..m {
        let mut acc = f.one();
        for &(mask, r_s) in &r {
            if mask >> i & 1 == 1 {
                acc = f.mul(acc, r_s);
            }
        }
        dlist.push(acc);
    }
    for (i, &di) in dlist.iter().enumerate() {
        let expected = if i < n { b[i] } else { f.one() };
        if di != expected {
            return Err(KError::Internal(format!(
                "recovered d_{i} does not match the input pattern"
            )));
        }
    }

    Ok(Fixsg3Outcome::Witness(Fixsg3Witness {
        n,
        a: a.to_vec(),
        b: b.to_vec(),
        c,
        d: dlist,
        r,
    }))
}

/// Validates a witness structurally and re-verifies the zero sum: the c's
/// extend the a's independently, the d's match the b's then pad with 1, the
/// r_S lie in (1 - c_S) \ {0}, the d's are the subset products, and the sum
/// rho(c_k) rho(d_k) really lies in the relation subspace.
pub fn fixsg3_backward(f: &FiniteHyperfield, w: &Fixsg3Witness) -> Result<BackwardReport, KError> {
    let coords = unit_coords(f)?;
    let rho = |x: usize| coords.rho[x].clone().unwrap();
    let fail = |clause: &str| BackwardReport {
        ok: false,
        failed_clause: Some(clause.to_string()),
    };

    let m = w.c.len();
    if w.n == 0 || w.n > m || w.a.len() != w.n || w.b.len() != w.n || w.d.len() != m {
        return Ok(fail("shape"));
    }
    for &x in w.a.iter().chain(&w.b).chain(&w.c).chain(&w.d) {
        if x == 0 || x >= f.size() {
            return Ok(fail("shape"));
        }
    }

    // (a): c extends a and is independent
    if w.c[..w.n] != w.a[..] {
        return Ok(fail("a.prefix"));
    }
    {
        let mut t = SpanTracker::new(coords.dim, m);
        for &x in &w.c {
            if !t.push(&rho(x))? {
                return Ok(fail("a.independent"));
            }
        }
    }

    // (b): d matches b then pads with 1
    for i in 0..m {
        let expected = if i < w.n { w.b[i] } else { f.one() };
        if w.d[i] != expected {
            return Ok(fail("b.d_pattern"));
        }
    }

    // (c): an r_S in (1 - c_S) \ {0} for every nonempty subset
    if w.r.len() != (1usize << m) - 1 {
        return Ok(fail("c.coverage"));
    }
    for (k, &(mask, r_s)) in w.r.iter().enumerate() {
        if mask as usize != k + 1 {
            return Ok(fail("c.coverage"));
        }
        if r_s == 0 || r_s >= f.size() {
            return Ok(fail("c.membership"));
        }
        let c_s = subset_product(f, &w.c, mask);
        if !f.one_minus(c_s).contains(r_s) {
            return Ok(fail("c.membership"));
        }
    }

    // (c continued): d_i = prod_{S ∋ i} r_S
    for i in 0..m {
        let mut acc = f.one();
        for &(mask, r_s) in &w.r {
            if mask >> i & 1 == 1 {
                acc = f.mul(acc, r_s);
            }
        }
        if acc != w.d[i] {
            return Ok(fail("c.d_products"));
        }
    }

    // zero re-check against a freshly built relation subspace
    let d = coords.dim;
    let pairs = relation_pairs(f);
    let gens: Vec<F2Vector> = pairs.iter().map(|&(u, v)| rho(u).kron(&rho(v))).collect();
    let sub = F2Subspace::span(&gens, d * d)?;
    let mut eta = F2Vector::zeros(d * d);
    for i in 0..m {
        eta.xor_assign(&rho(w.c[i]).kron(&rho(w.d[i])));
    }
    if !sub.contains(&eta)? {
        return Ok(fail("k2.zero"));
    }

    Ok(BackwardReport {
        ok: true,
        failed_clause: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{builtin, m_of_g, BuilderSpec};
    use crate::specialgroups::SpecialGroupTable;

    fn q2() -> FiniteHyperfield {
        FiniteHyperfield::try_new(builtin(&BuilderSpec::Q2).unwrap()).unwrap()
    }

    #[test]
    fn single_relation_pair_is_its_own_witness() {
        // elements of M(fan(2)) are indexed mask+1; a0 = g1 (mask 2, index 3)
        // and b0 = -g1 (mask 3, index 4) satisfy b0 ∈ 1 - a0
        let g = SpecialGroupTable::fan(2).unwrap();
        let mg = m_of_g(&g).unwrap();
        let a0 = 3;
        let b0 = 4;
        assert!(mg.one_minus(a0).contains(b0));
        match fixsg3_forward(&mg, &[a0], &[b0]).unwrap() {
            Fixsg3Outcome::Witness(w) => {
                assert_eq!(w.n, 1);
                assert_eq!(w.c[0], a0);
                assert_eq!(w.d[0], b0);
                let back = fixsg3_backward(&mg, &w).unwrap();
                assert!(back.ok, "clause {:?}", back.failed_clause);
            }
            Fixsg3Outcome::NonZero { .. } => panic!("expected a witness"),
        }
    }

    #[test]
    fn q2_minus_one_squared_fails_the_zero_check() {
        let f = q2();
        let minus = f.neg(f.one());
        match fixsg3_forward(&f, &[minus], &[minus]).unwrap() {
            Fixsg3Outcome::NonZero { reduced } => assert!(!reduced.is_zero()),
            Fixsg3Outcome::Witness(_) => panic!("rho(-1)² ≠ 0 in k2(Q2)"),
        }
    }

    #[test]
    fn dependent_input_is_rejected() {
        let g = SpecialGroupTable::fan(2).unwrap();
        let mg = m_of_g(&g).unwrap();
        let err = fixsg3_forward(&mg, &[3, 3], &[4, 4]).unwrap_err();
        assert!(matches!(err, KError::DependentInput));
    }

    #[test]
    fn tampered_witness_fails_the_named_clause() {
        let g = SpecialGroupTable::fan(2).unwrap();
        let mg = m_of_g(&g).unwrap();
        let w = match fixsg3_forward(&mg, &[3], &[4]).unwrap() {
            Fixsg3Outcome::Witness(w) => w,
            _ => panic!(),
        };
        // plant r_S outside 1 - c_S
        let mut bad = w.clone();
        let (mask, _) = bad.r[0];
        let c_s = subset_product(&mg, &bad.c, mask);
        let outside = mg
            .nonzero()
            .find(|&x| !mg.one_minus(c_s).contains(x))
            .expect("some element outside 1 - c_S");
        bad.r[0] = (mask, outside);
        let back = fixsg3_backward(&mg, &bad).unwrap();
        assert!(!back.ok);
        let clause = back.failed_clause.unwrap();
        assert!(
            clause == "c.membership" || clause == "c.d_products",
            "unexpected clause {clause}"
        );
    }

    #[test]
    fn all_ones_witness_is_degenerate() {
        // with every r_S = 1 the products d_i are 1, so the witness is
        // accepted exactly when the b's are 1
        let g = SpecialGroupTable::fan(2).unwrap();
        let mg = m_of_g(&g).unwrap();
        let one = mg.one();
        let a0 = 3;
        let w = Fixsg3Witness {
            n: 1,
            a: vec![a0],
            b: vec![one],
            c: vec![a0],
            d: vec![one],
            r: vec![(1, one)],
        };
        assert!(fixsg3_backward(&mg, &w).unwrap().ok);
        let bad = Fixsg3Witness {
            b: vec![4],
            ..w
        };
        assert!(!fixsg3_backward(&mg, &bad).unwrap().ok);
    }
}
