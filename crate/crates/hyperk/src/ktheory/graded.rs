//! Graded K-theory data: per-degree relation subspaces of tensor powers of
//! the degree-1 component, quotient coordinates, products on representatives,
//! induced maps, multiplication by rho(-a) and the injectivity report.

use super::KError;
use crate::f2linalg::{F2Subspace, F2Vector, TensorIndex};
use crate::hyperstructures::FiniteHyperfield;
use itertools::Itertools;
use serde::Serialize;

/// Which slot pairs qualify a pure tensor as a relation generator.
///
/// The subgroup description quantifies "a_i ∈ 1 - a_j for some i, j" while
/// the generator pattern two paragraphs later uses adjacent i < j; the
/// readings can genuinely differ on non-hyperbolic inputs, so all three are
/// implemented and the default is distinct unordered slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum RelationMode {
    /// Some pair of distinct slots (the default).
    #[default]
    Distinct,
    /// Consecutive slots only, as in the homogeneous-ideal reading.
    Adjacent,
    /// Distinct slots plus the i = j reading (a single slot with a ∈ 1-a).
    IncludeEqual,
}

impl std::str::FromStr for RelationMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "distinct" => Ok(RelationMode::Distinct),
            "adjacent" => Ok(RelationMode::Adjacent),
            "include-equal" => Ok(RelationMode::IncludeEqual),
            other => Err(format!(
                "unknown relation mode `{other}` (expected distinct, adjacent or include-equal)"
            )),
        }
    }
}

/// Where relation pairs are embedded when generating degree-n relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairPlacement {
    Adjacent,
    AllDistinct,
}

#[derive(Debug, Clone, Serialize)]
pub struct DegreeData {
    pub n: usize,
    pub ambient_dim: usize,
    pub relations: F2Subspace,
    pub quotient_dim: usize,
    free_columns: Vec<usize>,
}

/// The reduced K-theory of a hyperfield or special group up to a fixed
/// degree: for every n the ambient tensor dimension d^n, the relation
/// subspace, the quotient dimension and enough bookkeeping to multiply
/// classes on representatives.
#[derive(Debug, Clone)]
pub struct GradedKData {
    k1_dim: usize,
    max_degree: usize,
    rho: Vec<Option<F2Vector>>,
    k1_basis_elements: Vec<usize>,
    minus_one: F2Vector,
    degrees: Vec<DegreeData>,
}

/// Assembles graded data from a degree-2 relation-pair list.
///
/// `rho` maps source element indices to degree-1 coordinates (None for the
/// additive zero). `pairs` lists the qualifying ordered value pairs
/// (coordinates of both slots); `singles` lists lone-slot values for the
/// i = j reading. Pads run over the degree-1 basis.
#[allow(clippy::too_many_arguments)]
pub fn build_graded(
    k1_dim: usize,
    rho: Vec<Option<F2Vector>>,
    k1_basis_elements: Vec<usize>,
    minus_one: F2Vector,
    max_degree: usize,
    pairs: &[(F2Vector, F2Vector)],
    singles: &[F2Vector],
    placement: PairPlacement,
) -> Result<GradedKData, KError> {
    let mut degrees = Vec::with_capacity(max_degree + 1);
    degrees.push(DegreeData {
        n: 0,
        ambient_dim: 1,
        relations: F2Subspace::zero(1),
        quotient_dim: 1,
        free_columns: vec![0],
    });
    for n in 1..=max_degree {
        let ambient = TensorIndex::new(n, k1_dim)?.ambient_dim();
        let mut gens: Vec<F2Vector> = Vec::new();
        if n >= 2 {
            let positions: Vec<(usize, usize)> = match placement {
                PairPlacement::Adjacent => (0..n - 1).map(|i| (i, i + 1)).collect(),
                PairPlacement::AllDistinct => (0..n)
                    .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                    .collect(),
            };
            for &(i, j) in &positions {
                for (u, w) in pairs {
                    push_padded(&mut gens, n, k1_dim, &[(i, u), (j, w)]);
                }
            }
            for i in 0..n {
                for s in singles {
                    push_padded(&mut gens, n, k1_dim, &[(i, s)]);
                }
            }
        }
        let relations = F2Subspace::span(&gens, ambient)?;
        let quotient_dim = ambient - relations.dim();
        let free_columns = relations.free_columns();
        degrees.push(DegreeData {
            n,
            ambient_dim: ambient,
            relations,
            quotient_dim,
            free_columns,
        });
    }
    Ok(GradedKData {
        k1_dim,
        max_degree,
        rho,
        k1_basis_elements,
        minus_one,
        degrees,
    })
}

/// Appends all basis-padded tensors with the given slots fixed.
fn push_padded(gens: &mut Vec<F2Vector>, n: usize, d: usize, fixed: &[(usize, &F2Vector)]) {
    if fixed.iter().any(|(_, v)| v.is_zero()) {
        return;
    }
    let free_slots: Vec<usize> = (0..n)
        .filter(|slot| !fixed.iter().any(|(i, _)| i == slot))
        .collect();
    let choices = free_slots.iter().map(|_| 0..d).multi_cartesian_product();
    if free_slots.is_empty() {
        gens.push(kron_slots(n, d, fixed, &[], &[]));
        return;
    }
    for pad in choices {
        gens.push(kron_slots(n, d, fixed, &free_slots, &pad));
    }
}

fn kron_slots(
    n: usize,
    d: usize,
    fixed: &[(usize, &F2Vector)],
    free_slots: &[usize],
    pad: &[usize],
) -> F2Vector {
    let mut slot_vecs: Vec<F2Vector> = vec![F2Vector::zeros(d); n];
    for (i, v) in fixed {
        slot_vecs[*i] = (*v).clone();
    }
    for (k, &slot) in free_slots.iter().enumerate() {
        slot_vecs[slot] = F2Vector::basis(d, pad[k]);
    }
    let mut acc = F2Vector::basis(1, 0);
    for v in &slot_vecs {
        acc = acc.kron(v);
    }
    acc
}

impl GradedKData {
    pub fn k1_dim(&self) -> usize {
        self.k1_dim
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn dims(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.quotient_dim).collect()
    }

    pub fn degree(&self, n: usize) -> &DegreeData {
        &self.degrees[n]
    }

    pub fn degrees(&self) -> &[DegreeData] {
        &self.degrees
    }

    pub fn quotient_dim(&self, n: usize) -> usize {
        self.degrees[n].quotient_dim
    }

    pub fn ambient_dim(&self, n: usize) -> usize {
        self.degrees[n].ambient_dim
    }

    pub fn relations(&self, n: usize) -> &F2Subspace {
        &self.degrees[n].relations
    }

    pub fn check_degree(&self, n: usize) -> Result<(), KError> {
        if n > self.max_degree {
            return Err(KError::DegreeOutOfRange {
                degree: n,
                max_degree: self.max_degree,
            });
        }
        Ok(())
    }

    /// Degree-1 coordinates of a source element; None for the additive zero.
    pub fn rho(&self, element: usize) -> Option<&F2Vector> {
        self.rho.get(element).and_then(|v| v.as_ref())
    }

    /// Source elements whose rho coordinates are the standard basis.
    pub fn k1_basis_elements(&self) -> &[usize] {
        &self.k1_basis_elements
    }

    pub fn minus_one_coords(&self) -> &F2Vector {
        &self.minus_one
    }

    /// Ambient tensor of a degree-n monomial rho(a_1)⊗...⊗rho(a_n).
    pub fn monomial(&self, elements: &[usize]) -> Result<F2Vector, KError> {
        let mut acc = F2Vector::basis(1, 0);
        for &e in elements {
            let coords = self.rho(e).ok_or(KError::InvalidElement(e))?;
            acc = acc.kron(coords);
        }
        Ok(acc)
    }

    /// Ambient representative of the k-th quotient basis vector of degree n.
    pub fn basis_rep(&self, n: usize, k: usize) -> F2Vector {
        let d = &self.degrees[n];
        F2Vector::basis(d.ambient_dim, d.free_columns[k])
    }

    /// Quotient coordinates of an ambient vector.
    pub fn class_coords(&self, n: usize, ambient: &F2Vector) -> Result<F2Vector, KError> {
        self.check_degree(n)?;
        Ok(self.degrees[n].relations.coset_coordinates(ambient)?)
    }

    /// Ambient representative of quotient coordinates.
    pub fn lift(&self, n: usize, coords: &F2Vector) -> F2Vector {
        let d = &self.degrees[n];
        let mut out = F2Vector::zeros(d.ambient_dim);
        for k in coords.ones() {
            out.set(d.free_columns[k], true);
        }
        out
    }

    pub fn is_zero_class(&self, n: usize, ambient: &F2Vector) -> Result<bool, KError> {
        self.check_degree(n)?;
        Ok(self.degrees[n].relations.contains(ambient)?)
    }

    /// Product k_n x k_m -> k_{n+m} on quotient coordinates, realized by
    /// tensor concatenation of representatives followed by reduction.
    pub fn product(
        &self,
        n: usize,
        m: usize,
        a: &F2Vector,
        b: &F2Vector,
    ) -> Result<F2Vector, KError> {
        self.check_degree(n + m)?;
        let ra = self.lift(n, a);
        let rb = self.lift(m, b);
        self.class_coords(n + m, &ra.kron(&rb))
    }

    /// Quotient coordinates of rho(-1)^{⊗n}; the scalar 1 in degree 0.
    pub fn top_coords(&self, n: usize) -> Result<F2Vector, KError> {
        self.check_degree(n)?;
        let mut acc = F2Vector::basis(1, 0);
        for _ in 0..n {
            acc = acc.kron(&self.minus_one);
        }
        self.class_coords(n, &acc)
    }
}

/// F2 coordinates on the unit group modulo squares: returns (dim, rho table,
/// basis elements). Deterministic: basis elements are chosen greedily in
/// index order.
pub fn unit_group_coordinates(
    f: &FiniteHyperfield,
) -> (usize, Vec<Option<F2Vector>>, Vec<usize>) {
    let n = f.size();
    // squares form a subgroup of the unit group
    let mut squares: Vec<bool> = vec![false; n];
    for a in f.nonzero() {
        squares[f.mul(a, a)] = true;
    }
    // multiplicative closure (products of squares are squares already, but
    // keep the sweep in case of exotic tables)
    loop {
        let mut grew = false;
        for a in 1..n {
            if !squares[a] {
                continue;
            }
            for b in 1..n {
                if squares[b] && !squares[f.mul(a, b)] {
                    squares[f.mul(a, b)] = true;
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }

    // pass 1: pick coset representatives greedily
    let mut basis: Vec<usize> = Vec::new();
    let mut covered = squares.clone();
    for a in 1..n {
        if covered[a] {
            continue;
        }
        basis.push(a);
        let snapshot: Vec<usize> = (1..n).filter(|&x| covered[x]).collect();
        for x in snapshot {
            covered[f.mul(x, a)] = true;
        }
        covered[a] = true;
    }
    let dim = basis.len();

    // pass 2: assign coordinates
    let mut rho: Vec<Option<F2Vector>> = vec![None; n];
    for a in 1..n {
        if squares[a] {
            rho[a] = Some(F2Vector::zeros(dim));
        }
    }
    for (i, &g) in basis.iter().enumerate() {
        let assigned: Vec<(usize, F2Vector)> = (1..n)
            .filter_map(|x| rho[x].clone().map(|c| (x, c)))
            .collect();
        for (x, coords) in assigned {
            let y = f.mul(x, g);
            if rho[y].is_none() {
                let mut c = coords.clone();
                c.set(i, true);
                rho[y] = Some(c);
            }
        }
    }
    (dim, rho, basis)
}

/// The reduced K-theory of a verified hyperfield: degree 1 is the unit group
/// modulo squares; for n ≥ 2 the relation subspace is generated by
/// basis-padded tensors containing qualifying slot values (u, w) with
/// 1 ∈ u + w, under the chosen relation mode.
pub fn reduced_k(
    f: &FiniteHyperfield,
    max_degree: usize,
    mode: RelationMode,
) -> Result<GradedKData, KError> {
    let (dim, rho, basis) = unit_group_coordinates(f);
    let mut pairs = Vec::new();
    for u in f.nonzero() {
        for w in f.nonzero() {
            if f.add(u, w).contains(f.one()) {
                pairs.push((rho[u].clone().unwrap(), rho[w].clone().unwrap()));
            }
        }
    }
    let mut singles = Vec::new();
    if mode == RelationMode::IncludeEqual {
        for u in f.nonzero() {
            if f.add(u, u).contains(f.one()) {
                singles.push(rho[u].clone().unwrap());
            }
        }
    }
    let placement = match mode {
        RelationMode::Adjacent => PairPlacement::Adjacent,
        _ => PairPlacement::AllDistinct,
    };
    let minus_one = rho[f.neg(f.one())].clone().unwrap();
    build_graded(dim, rho, basis, minus_one, max_degree, &pairs, &singles, placement)
}

/// A formal sum of degree-homogeneous monomials rho(a_1)...rho(a_n) over
/// unit indices.
#[derive(Debug, Clone)]
pub struct KExpression {
    degree: usize,
    monomials: Vec<Vec<usize>>,
}

impl KExpression {
    pub fn new(monomials: Vec<Vec<usize>>) -> Result<Self, KError> {
        let degree = monomials.first().map_or(0, Vec::len);
        for m in &monomials {
            if m.len() != degree {
                return Err(KError::Internal(
                    "expression monomials must share one degree".to_string(),
                ));
            }
        }
        Ok(KExpression { degree, monomials })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn ambient(&self, data: &GradedKData) -> Result<F2Vector, KError> {
        let mut acc = F2Vector::zeros(data.ambient_dim(self.degree));
        for m in &self.monomials {
            acc.xor_assign(&data.monomial(m)?);
        }
        Ok(acc)
    }
}

/// True iff the expression's coordinate vector lies in the relation
/// subspace of its degree.
pub fn expr_is_zero(data: &GradedKData, expr: &KExpression) -> Result<bool, KError> {
    data.check_degree(expr.degree())?;
    let v = expr.ambient(data)?;
    data.is_zero_class(expr.degree(), &v)
}

/// Matrix (columns per quotient basis vector of degree n) of left
/// multiplication by a degree-1 class, landing in degree n+1.
pub fn mult_by_degree_one(
    data: &GradedKData,
    one_coords: &F2Vector,
    n: usize,
) -> Result<Vec<F2Vector>, KError> {
    data.check_degree(n + 1)?;
    let mut cols = Vec::with_capacity(data.quotient_dim(n));
    for k in 0..data.quotient_dim(n) {
        let rep = data.basis_rep(n, k);
        let image = one_coords.kron(&rep);
        cols.push(data.class_coords(n + 1, &image)?);
    }
    Ok(cols)
}

/// Left multiplication by rho(-a): k_n -> k_{n+1}.
///
/// The degree-raising maps are defined as multiplication by rho(-a); the
/// distinguished instance used everywhere downstream multiplies by rho(-1),
/// i.e. `a = 1`. Passing `a = -1` yields the literal reading rho(-(-1)) =
/// rho(1) = 0, which is exposed deliberately rather than silently remapped.
pub fn omega(
    f: &FiniteHyperfield,
    data: &GradedKData,
    a: usize,
    n: usize,
) -> Result<Vec<F2Vector>, KError> {
    if a == 0 {
        return Err(KError::InvalidElement(0));
    }
    let neg = f.neg(a);
    let coords = data.rho(neg).ok_or(KError::InvalidElement(neg))?.clone();
    mult_by_degree_one(data, &coords, n)
}

#[derive(Debug, Clone, Serialize)]
pub struct SmcLevel {
    pub n: usize,
    pub domain_dim: usize,
    pub kernel_dim: usize,
    pub injective: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SmcReport {
    pub levels: Vec<SmcLevel>,
    pub injective_everywhere: bool,
}

/// Kernel ranks of multiplication by rho(-1) per degree 1..max_degree-1.
pub fn smc_check(data: &GradedKData) -> Result<SmcReport, KError> {
    let mut levels = Vec::new();
    for n in 1..data.max_degree() {
        let cols = mult_by_degree_one(data, data.minus_one_coords(), n)?;
        let rank = F2Subspace::span(&cols, data.quotient_dim(n + 1))?.dim();
        let kernel_dim = data.quotient_dim(n) - rank;
        levels.push(SmcLevel {
            n,
            domain_dim: data.quotient_dim(n),
            kernel_dim,
            injective: kernel_dim == 0,
        });
    }
    let injective_everywhere = levels.iter().all(|l| l.injective);
    Ok(SmcReport { levels, injective_everywhere })
}

#[derive(Debug, Clone)]
pub struct InducedMap {
    /// Whether every relation mapped into a relation (verified, not assumed).
    pub well_defined: bool,
    /// First failing degree and relation representative if not well-defined.
    pub failure: Option<(usize, F2Vector)>,
    /// Per degree: columns (per quotient basis vector of the source) as
    /// quotient coordinates in the target.
    pub maps: Vec<Vec<F2Vector>>,
    pub ranks: Vec<usize>,
    pub surjective: Vec<bool>,
}

/// The graded map induced by a hyperfield morphism, built on degree-1 basis
/// elements and extended per degree by tensor powers.
pub fn induced_map(
    phi: &[usize],
    source: &GradedKData,
    target: &GradedKData,
) -> Result<InducedMap, KError> {
    let max_degree = source.max_degree().min(target.max_degree());
    // degree-1 matrix: image of e_i is rho_target(phi(g_i))
    let mut m1: Vec<F2Vector> = Vec::with_capacity(source.k1_dim());
    for &g in source.k1_basis_elements() {
        let image = phi
            .get(g)
            .copied()
            .ok_or(KError::InvalidElement(g))?;
        let coords = target.rho(image).ok_or(KError::InvalidElement(image))?;
        m1.push(coords.clone());
    }

    // ambient image of a flat tensor index in degree n
    let flat_image = |n: usize, flat: usize| -> F2Vector {
        let idx = TensorIndex::new(n, source.k1_dim()).expect("within cap");
        let tuple = idx.tuple(flat);
        let mut acc = F2Vector::basis(1, 0);
        for &t in &tuple {
            acc = acc.kron(&m1[t]);
        }
        acc
    };
    let ambient_image = |n: usize, v: &F2Vector| -> F2Vector {
        let mut acc = F2Vector::zeros(target.ambient_dim(n));
        for flat in v.ones() {
            acc.xor_assign(&flat_image(n, flat));
        }
        acc
    };

    let mut well_defined = true;
    let mut failure = None;
    for n in 2..=max_degree {
        for r in source.relations(n).basis() {
            let image = ambient_image(n, r);
            if !target.relations(n).contains(&image)? {
                well_defined = false;
                failure = Some((n, r.clone()));
                break;
            }
        }
        if !well_defined {
            break;
        }
    }

    let mut maps = Vec::with_capacity(max_degree + 1);
    let mut ranks = Vec::with_capacity(max_degree + 1);
    let mut surjective = Vec::with_capacity(max_degree + 1);
    for n in 0..=max_degree {
        let cols: Vec<F2Vector> = if n == 0 {
            vec![F2Vector::basis(1, 0)]
        } else {
            (0..source.quotient_dim(n))
                .map(|k| {
                    let rep = source.lift(n, &F2Vector::basis(source.quotient_dim(n), k));
                    target.class_coords(n, &ambient_image(n, &rep))
                })
                .collect::<Result<_, _>>()?
        };
        let rank = F2Subspace::span(&cols, target.quotient_dim(n))?.dim();
        ranks.push(rank);
        surjective.push(rank == target.quotient_dim(n));
        maps.push(cols);
    }

    Ok(InducedMap {
        well_defined,
        failure,
        maps,
        ranks,
        surjective,
    })
}
