//! JSON document formats for hyperfields, special groups and graded
//! K-theory data. Emission is canonical (fixed field order, sorted index
//! lists, one trailing newline); loading validates everything the in-memory
//! constructors require and rejects malformed documents with a typed error,
//! never a panic.

use crate::f2linalg::F2Subspace;
use crate::hyperstructures::{ElemSet, FiniteMultiring, StructureError, MAX_CARRIER};
use crate::ktheory::GradedKData;
use crate::specialgroups::{SgError, SpecialGroupTable, MAX_SG_DIM};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum DocError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("document violates the format: {0}")]
    Format(String),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    SpecialGroup(#[from] SgError),
}

/// The hyperfield document: tables must be symmetric and element 0 must be
/// the additive zero.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HyperfieldDoc {
    pub name: String,
    pub elements: Vec<String>,
    pub zero: usize,
    pub one: usize,
    pub neg: Vec<usize>,
    pub mul: Vec<Vec<usize>>,
    pub add: Vec<Vec<Vec<usize>>>,
}

impl HyperfieldDoc {
    pub fn from_multiring(m: &FiniteMultiring) -> Self {
        let n = m.size();
        HyperfieldDoc {
            name: m.name().to_string(),
            elements: m.element_names().to_vec(),
            zero: 0,
            one: m.one(),
            neg: (0..n).map(|i| m.neg(i)).collect(),
            mul: (0..n).map(|i| (0..n).map(|j| m.mul(i, j)).collect()).collect(),
            add: (0..n)
                .map(|i| (0..n).map(|j| m.add(i, j).to_sorted_vec()).collect())
                .collect(),
        }
    }

    pub fn into_multiring(self) -> Result<FiniteMultiring, DocError> {
        let n = self.elements.len();
        if n == 0 || n > MAX_CARRIER {
            return Err(DocError::Format(format!(
                "carrier must have between 1 and {MAX_CARRIER} elements"
            )));
        }
        if self.zero != 0 {
            return Err(DocError::Format("element 0 must be the additive zero".to_string()));
        }
        if self.neg.len() != n || self.mul.len() != n || self.add.len() != n {
            return Err(DocError::Format("tables must cover the carrier".to_string()));
        }
        let mut add = Vec::with_capacity(n);
        for (i, row) in self.add.into_iter().enumerate() {
            if row.len() != n {
                return Err(DocError::Format(format!("add row {i} has wrong length")));
            }
            let mut out = Vec::with_capacity(n);
            for (j, cell) in row.into_iter().enumerate() {
                if cell.iter().any(|&x| x >= n) {
                    return Err(DocError::Format(format!(
                        "add[{i}][{j}] contains an out-of-range index"
                    )));
                }
                out.push(ElemSet::from_indices(n, &cell));
            }
            add.push(out);
        }
        Ok(FiniteMultiring::new(
            self.name,
            self.elements,
            self.one,
            self.neg,
            self.mul,
            add,
        )?)
    }
}

/// Canonical byte rendering: serde field order, plus one trailing newline.
pub fn render_hyperfield(m: &FiniteMultiring, pretty: bool) -> String {
    render(&HyperfieldDoc::from_multiring(m), pretty)
}

pub fn parse_hyperfield(bytes: &[u8]) -> Result<FiniteMultiring, DocError> {
    let doc: HyperfieldDoc = serde_json::from_slice(bytes)?;
    doc.into_multiring()
}

/// The special-group document: coordinate bit vectors for -1 and for each
/// related 4-tuple of elements. Symmetry closure is applied on load.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpecialGroupDoc {
    pub dim: usize,
    pub minus_one: Vec<u8>,
    pub iso: Vec<Vec<Vec<u8>>>,
}

impl SpecialGroupDoc {
    pub fn from_table(g: &SpecialGroupTable) -> Self {
        let dim = g.dim();
        let bits = |mask: usize| (0..dim).map(|i| (mask >> i & 1) as u8).collect::<Vec<u8>>();
        SpecialGroupDoc {
            dim,
            minus_one: bits(g.minus_one()),
            iso: g
                .iso_pairs()
                .into_iter()
                .map(|(a, b, c, d)| vec![bits(a), bits(b), bits(c), bits(d)])
                .collect(),
        }
    }

    pub fn into_table(self) -> Result<SpecialGroupTable, DocError> {
        if self.dim > MAX_SG_DIM {
            return Err(DocError::Format(format!(
                "group dimension must be at most {MAX_SG_DIM}"
            )));
        }
        let mask = |bits: &[u8], what: &str| -> Result<usize, DocError> {
            if bits.len() != self.dim {
                return Err(DocError::Format(format!("{what} must have {} bits", self.dim)));
            }
            if bits.iter().any(|&b| b > 1) {
                return Err(DocError::Format(format!("{what} must be a 0/1 vector")));
            }
            Ok(bits
                .iter()
                .enumerate()
                .fold(0usize, |acc, (i, &b)| acc | (b as usize) << i))
        };
        let minus_one = mask(&self.minus_one, "minus_one")?;
        let mut pairs = Vec::with_capacity(self.iso.len());
        for (k, entry) in self.iso.iter().enumerate() {
            if entry.len() != 4 {
                return Err(DocError::Format(format!(
                    "iso entry {k} must list exactly 4 coordinate vectors"
                )));
            }
            pairs.push((
                mask(&entry[0], "iso entry")?,
                mask(&entry[1], "iso entry")?,
                mask(&entry[2], "iso entry")?,
                mask(&entry[3], "iso entry")?,
            ));
        }
        Ok(SpecialGroupTable::new(self.dim, minus_one, &pairs)?)
    }
}

pub fn render_special_group(g: &SpecialGroupTable, pretty: bool) -> String {
    render(&SpecialGroupDoc::from_table(g), pretty)
}

pub fn parse_special_group(bytes: &[u8]) -> Result<SpecialGroupTable, DocError> {
    let doc: SpecialGroupDoc = serde_json::from_slice(bytes)?;
    doc.into_table()
}

/// Per-degree slice of the graded document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GradedDegreeDoc {
    pub n: usize,
    pub ambient: usize,
    pub relation_basis: Vec<Vec<u8>>,
    pub dim: usize,
}

/// The graded K-theory document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GradedDoc {
    pub k1_dim: usize,
    pub degrees: Vec<GradedDegreeDoc>,
}

impl GradedDoc {
    pub fn from_data(data: &GradedKData) -> Self {
        GradedDoc {
            k1_dim: data.k1_dim(),
            degrees: (0..=data.max_degree())
                .map(|n| {
                    let relations: &F2Subspace = data.relations(n);
                    GradedDegreeDoc {
                        n,
                        ambient: data.ambient_dim(n),
                        relation_basis: relations.basis().iter().map(|v| v.to_bits()).collect(),
                        dim: data.quotient_dim(n),
                    }
                })
                .collect(),
        }
    }
}

pub fn render<T: Serialize>(value: &T, pretty: bool) -> String {
    let mut s = if pretty {
        serde_json::to_string_pretty(value).expect("serializable")
    } else {
        serde_json::to_string(value).expect("serializable")
    };
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{builtin, BuilderSpec};

    #[test]
    fn hyperfield_round_trip_is_canonical() {
        let q2 = builtin(&BuilderSpec::Q2).unwrap();
        let bytes = render_hyperfield(&q2, false);
        let parsed = parse_hyperfield(bytes.as_bytes()).unwrap();
        assert_eq!(parsed, q2);
        assert_eq!(render_hyperfield(&parsed, false), bytes);
        assert!(bytes.ends_with('\n'));
    }

    #[test]
    fn malformed_documents_are_rejected() {
        // truncated JSON
        assert!(matches!(parse_hyperfield(b"{\"name\": \"x\""), Err(DocError::Json(_))));
        // zero not at index 0
        let mut doc = HyperfieldDoc::from_multiring(&builtin(&BuilderSpec::Q2).unwrap());
        doc.zero = 1;
        let bytes = serde_json::to_vec(&doc).unwrap();
        assert!(matches!(parse_hyperfield(&bytes), Err(DocError::Format(_))));
        // asymmetric addition
        let mut doc = HyperfieldDoc::from_multiring(&builtin(&BuilderSpec::Q2).unwrap());
        doc.add[1][2] = vec![1];
        let bytes = serde_json::to_vec(&doc).unwrap();
        assert!(matches!(parse_hyperfield(&bytes), Err(DocError::Structure(_))));
        // empty addition set
        let mut doc = HyperfieldDoc::from_multiring(&builtin(&BuilderSpec::Q2).unwrap());
        doc.add[1][1] = vec![];
        let bytes = serde_json::to_vec(&doc).unwrap();
        assert!(matches!(parse_hyperfield(&bytes), Err(DocError::Structure(_))));
    }

    #[test]
    fn unsorted_add_lists_are_normalized() {
        let mut doc = HyperfieldDoc::from_multiring(&builtin(&BuilderSpec::Q2).unwrap());
        doc.add[1][2] = vec![2, 0, 1, 1];
        doc.add[2][1] = vec![1, 2, 0];
        let parsed = parse_hyperfield(&serde_json::to_vec(&doc).unwrap()).unwrap();
        assert_eq!(parsed.add(1, 2).to_sorted_vec(), vec![0, 1, 2]);
    }

    #[test]
    fn special_group_round_trip() {
        let g = crate::specialgroups::SpecialGroupTable::fan(2).unwrap();
        let bytes = render_special_group(&g, false);
        let parsed = parse_special_group(bytes.as_bytes()).unwrap();
        assert_eq!(parsed.iso_pairs(), g.iso_pairs());
        assert_eq!(parsed.minus_one(), g.minus_one());
    }

    #[test]
    fn oversized_documents_are_rejected() {
        let doc = SpecialGroupDoc {
            dim: 7,
            minus_one: vec![1, 0, 0, 0, 0, 0, 0],
            iso: vec![],
        };
        let bytes = serde_json::to_vec(&doc).unwrap();
        assert!(matches!(parse_special_group(&bytes), Err(DocError::Format(_))));

        let mut hf = HyperfieldDoc::from_multiring(&builtin(&BuilderSpec::Q2).unwrap());
        hf.elements = (0..=MAX_CARRIER).map(|i| i.to_string()).collect();
        let bytes = serde_json::to_vec(&hf).unwrap();
        assert!(matches!(parse_hyperfield(&bytes), Err(DocError::Format(_))));
    }

    #[test]
    fn special_group_symmetry_closure_on_load() {
        // a single seeded pair closes under swaps and relation symmetry
        let doc = SpecialGroupDoc {
            dim: 2,
            minus_one: vec![1, 0],
            iso: vec![vec![vec![0, 1], vec![1, 0], vec![1, 1], vec![0, 0]]],
        };
        let g = doc.into_table().unwrap();
        assert!(g.iso_contains(2, 1, 3, 0));
        assert!(g.iso_contains(1, 2, 3, 0));
        assert!(g.iso_contains(2, 1, 0, 3));
        assert!(g.iso_contains(3, 0, 2, 1));
        // reflexivity is part of the closure
        assert!(g.iso_contains(3, 3, 3, 3));
    }

    mod robustness {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            // byte-level mutations of valid documents must parse to Ok or a
            // typed error, never panic
            #[test]
            fn hyperfield_parser_survives_mutations(
                seed in 0..3usize,
                edits in prop::collection::vec((any::<prop::sample::Index>(), any::<u8>()), 0..16)
            ) {
                let spec = [BuilderSpec::Q2, BuilderSpec::H(3), BuilderSpec::Gf(5)][seed];
                let mut bytes = render_hyperfield(&builtin(&spec).unwrap(), false).into_bytes();
                for (at, byte) in edits {
                    let i = at.index(bytes.len());
                    bytes[i] = byte;
                }
                let _ = parse_hyperfield(&bytes);
            }

            #[test]
            fn special_group_parser_survives_mutations(
                edits in prop::collection::vec((any::<prop::sample::Index>(), any::<u8>()), 0..16)
            ) {
                let g = crate::specialgroups::SpecialGroupTable::fan(2).unwrap();
                let mut bytes = render_special_group(&g, false).into_bytes();
                for (at, byte) in edits {
                    let i = at.index(bytes.len());
                    bytes[i] = byte;
                }
                let _ = parse_special_group(&bytes);
            }
        }
    }

    #[test]
    fn graded_doc_shape() {
        use crate::ktheory::{reduced_k, RelationMode};
        let f = crate::hyperstructures::FiniteHyperfield::try_new(
            builtin(&BuilderSpec::Gf(3)).unwrap(),
        )
        .unwrap();
        let k = reduced_k(&f, 3, RelationMode::Distinct).unwrap();
        let doc = GradedDoc::from_data(&k);
        assert_eq!(doc.k1_dim, 1);
        assert_eq!(doc.degrees.len(), 4);
        assert_eq!(doc.degrees[2].dim, 0);
        assert_eq!(doc.degrees[2].ambient, 1);
        assert_eq!(doc.degrees[2].relation_basis, vec![vec![1u8]]);
    }
}
