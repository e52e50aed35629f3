//! The unit of the K-theory / hyperfield-extraction adjunction and the
//! induced morphism out of the K-theory of a pre-special hyperfield.

use super::graded::{reduced_k, GradedKData, RelationMode};
use super::igr::{igr_plus, IgrData};
use super::KError;
use crate::f2linalg::{F2Vector, TensorIndex};
use crate::hyperstructures::{
    check_morphism, classify, AxiomReport, Classification, FiniteHyperfield,
};

/// Report for the unit map a ↦ e(rho(a)) from a pre-special hyperfield into
/// the hyperfield extracted from its own K-theory.
#[derive(Debug, Clone)]
pub struct AdjunctionUnitReport {
    pub gamma: FiniteHyperfield,
    /// Index map from the source to `gamma`.
    pub unit: Vec<usize>,
    pub morphism: AxiomReport,
    pub unit_group_bijective: bool,
    /// Forward and inverse morphism checks both pass.
    pub hyperfield_iso: bool,
}

/// Builds Γ(k(F)) and the unit map, then verifies the morphism conditions,
/// bijectivity on units and the two-sided isomorphism property.
pub fn adjunction_unit(
    f: &FiniteHyperfield,
    max_degree: usize,
) -> Result<AdjunctionUnitReport, KError> {
    if classify(f) < Classification::PreSpecial {
        return Err(KError::NotPreSpecial(format!("{}", classify(f))));
    }
    let data = reduced_k(f, max_degree.max(2), RelationMode::Distinct)?;
    let igr = IgrData::from_graded(&data)?;
    let gamma = crate::constructions::gamma_of_igr(&igr)
        .map_err(|e| KError::Internal(format!("gamma construction failed: {e}")))?;
    let mut unit = vec![0usize; f.size()];
    for a in f.nonzero() {
        let coords = data.rho(a).ok_or(KError::InvalidElement(a))?;
        unit[a] = crate::constructions::gamma_index_of_mask(coords);
    }
    let morphism = check_morphism(&unit, f.ring(), gamma.ring())
        .map_err(|e| KError::Internal(e.to_string()))?;
    let mut seen = vec![false; gamma.size()];
    for &v in &unit {
        seen[v] = true;
    }
    let bijective = f.size() == gamma.size() && seen.iter().all(|&s| s);
    let hyperfield_iso = if bijective {
        let mut inverse = vec![0usize; gamma.size()];
        for (a, &v) in unit.iter().enumerate() {
            inverse[v] = a;
        }
        let back = check_morphism(&inverse, gamma.ring(), f.ring())
            .map_err(|e| KError::Internal(e.to_string()))?;
        morphism.all_pass() && back.all_pass()
    } else {
        false
    };
    Ok(AdjunctionUnitReport {
        gamma,
        unit,
        morphism,
        unit_group_bijective: bijective,
        hyperfield_iso,
    })
}

/// The graded morphism k(F) -> R induced by a hyperfield morphism
/// f: F -> Γ(R), given degreewise on generators by products of the degree-1
/// images.
#[derive(Debug, Clone)]
pub struct FSharpResult {
    /// Per degree: columns (per quotient basis vector of k(F)) in R_n.
    pub maps: Vec<Vec<F2Vector>>,
    pub triangle_holds: bool,
    /// Some(true) when exhaustive search over degree-1 maps confirmed
    /// uniqueness; None when the search bound was exceeded and only the
    /// triangle identity was verified.
    pub uniqueness: Option<bool>,
}

/// Builds f♯ and verifies that relations annihilate, that the triangle
/// identity Γ(f♯)∘φ_F = f holds pointwise, and (within the search bound)
/// that f♯ is the unique morphism with that property.
pub fn f_sharp(
    f_map: &[usize],
    f: &FiniteHyperfield,
    data: &GradedKData,
    r: &IgrData,
) -> Result<FSharpResult, KError> {
    if classify(f) < Classification::PreSpecial {
        return Err(KError::NotPreSpecial(format!("{}", classify(f))));
    }
    let d1 = r.dim(1);
    let gamma_size = (1usize << d1) + 1;
    if f_map.len() != f.size() || f_map.iter().any(|&v| v >= gamma_size) {
        return Err(KError::Internal("morphism map has wrong shape".to_string()));
    }
    if f_map[0] != 0 || f_map.iter().skip(1).any(|&v| v == 0) {
        return Err(KError::Internal("units must map to units".to_string()));
    }

    // e_R^{-1}(f(g_i)) for the degree-1 basis elements g_i of k(F)
    let image_of_basis: Vec<F2Vector> = data
        .k1_basis_elements()
        .iter()
        .map(|&g| mask_to_vector(f_map[g] - 1, d1))
        .collect();

    let max_degree = data.max_degree().min(r.max_degree());
    // multilinear image of a flat tensor index: the left-associated product
    // of the degree-1 images along the tuple
    let flat_image = |n: usize, flat: usize| -> F2Vector {
        if n == 0 {
            return r.top(0).clone();
        }
        let idx = TensorIndex::new(n, data.k1_dim()).expect("within cap");
        let tuple = idx.tuple(flat);
        let mut acc = image_of_basis[tuple[0]].clone();
        for (pos, &t) in tuple.iter().enumerate().skip(1) {
            acc = r.star(pos, 1, &acc, &image_of_basis[t]);
        }
        acc
    };
    let ambient_image = |n: usize, v: &F2Vector| -> F2Vector {
        let mut acc = F2Vector::zeros(r.dim(n));
        for flat in v.ones() {
            acc.xor_assign(&flat_image(n, flat));
        }
        acc
    };

    // relations must annihilate; if one survives, diagnose which
    // precondition is violated
    for n in 2..=max_degree {
        for rel in data.relations(n).basis() {
            let image = ambient_image(n, rel);
            if !image.is_zero() {
                let plus = igr_plus(r)?;
                let mor = check_morphism(f_map, f.ring(), gamma_of(r)?.ring())
                    .map_err(|e| KError::Internal(e.to_string()))?;
                return Err(KError::RelationNotAnnihilated {
                    degree: n,
                    r_in_igr_plus: plus.holds(),
                    f_is_morphism: mor.all_pass(),
                });
            }
        }
    }

    let mut maps = Vec::with_capacity(max_degree + 1);
    for n in 0..=max_degree {
        let cols: Vec<F2Vector> = (0..data.quotient_dim(n))
            .map(|k| {
                let rep = data.lift(n, &F2Vector::basis(data.quotient_dim(n), k));
                ambient_image(n, &rep)
            })
            .collect();
        maps.push(cols);
    }

    // triangle identity: e_R(f♯_1(rho(a))) = f(a) for every unit a
    let apply1 = |coords: &F2Vector| -> F2Vector {
        let mut acc = F2Vector::zeros(d1);
        for i in coords.ones() {
            acc.xor_assign(&maps[1][i]);
        }
        acc
    };
    let mut triangle_holds = true;
    for a in f.nonzero() {
        let coords = data.rho(a).ok_or(KError::InvalidElement(a))?;
        let image = apply1(coords);
        if crate::constructions::gamma_index_of_mask(&image) != f_map[a] {
            triangle_holds = false;
            break;
        }
    }

    // uniqueness by exhausting degree-1 linear maps
    let bits = data.k1_dim() * d1;
    let uniqueness = if d1 <= 4 && bits <= 16 {
        let mut count = 0usize;
        for mask in 0u32..1 << bits {
            let cols: Vec<F2Vector> = (0..data.k1_dim())
                .map(|i| {
                    let mut v = F2Vector::zeros(d1);
                    for j in 0..d1 {
                        if mask >> (i * d1 + j) & 1 == 1 {
                            v.set(j, true);
                        }
                    }
                    v
                })
                .collect();
            let agrees = f.nonzero().all(|a| {
                let coords = data.rho(a).unwrap();
                let mut acc = F2Vector::zeros(d1);
                for i in coords.ones() {
                    acc.xor_assign(&cols[i]);
                }
                crate::constructions::gamma_index_of_mask(&acc) == f_map[a]
            });
            if agrees {
                count += 1;
            }
        }
        Some(count == 1)
    } else {
        None
    };

    Ok(FSharpResult {
        maps,
        triangle_holds,
        uniqueness,
    })
}

fn gamma_of(r: &IgrData) -> Result<FiniteHyperfield, KError> {
    crate::constructions::gamma_of_igr(r).map_err(|e| KError::Internal(e.to_string()))
}

fn mask_to_vector(mask: usize, dim: usize) -> F2Vector {
    let mut v = F2Vector::zeros(dim);
    for i in 0..dim {
        if mask >> i & 1 == 1 {
            v.set(i, true);
        }
    }
    v
}
