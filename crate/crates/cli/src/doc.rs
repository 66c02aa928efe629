//! The textual document format: algebras, morphisms, congruences, squares
//! and cubes in one JSON file, resolved into a validated workspace.
//! Emission is canonical, so parse-then-emit is byte-stable.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use centrex_core::algebra::{validate_algebra, FiniteAlgebra, OpSymbol, Signature};
use centrex_core::congruence::Congruence;
use centrex_core::galois::{ExtSquare, TowerMorphism, TowerObject};
use centrex_core::hom::{check_homomorphism, Homomorphism};

#[derive(Clone, Debug)]
pub enum DocError {
    Parse(String),
    Validation { name: String, message: String },
    DuplicateName(String),
    DanglingReference { kind: &'static str, name: String, referenced_by: String },
}

impl fmt::Display for DocError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DocError::Parse(msg) => write!(f, "parse error: {}", msg),
            DocError::Validation { name, message } => {
                write!(f, "validation failed for `{}`: {}", name, message)
            }
            DocError::DuplicateName(name) => write!(f, "duplicate name `{}`", name),
            DocError::DanglingReference { kind, name, referenced_by } => {
                write!(f, "`{}` references unknown {} `{}`", referenced_by, kind, name)
            }
        }
    }
}

impl std::error::Error for DocError {}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SignatureEntry {
    pub op: String,
    pub arity: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct AlgebraDocument {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    pub size: usize,
    pub signature: Vec<SignatureEntry>,
    /// One entry per signature symbol: nested row-major arrays of depth equal
    /// to the arity; a bare number for constants.
    pub tables: Vec<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MorphismDocument {
    pub name: String,
    pub source: String,
    pub target: String,
    pub map: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CongruenceDocument {
    pub name: String,
    pub algebra: String,
    pub blocks: Vec<Vec<usize>>,
}

/// A commuting square, referencing morphisms by name. `top: A' -> B'` and
/// `bottom: A -> B` are the compared extensions, `left: A' -> A` and
/// `right: B' -> B` the connecting maps.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SquareDocument {
    pub name: String,
    pub top: String,
    pub left: String,
    pub right: String,
    pub bottom: String,
}

/// A morphism of squares: a depth-3 tower. Corner morphisms are listed in
/// the order top-source, top-target, bottom-source, bottom-target of the
/// squares being connected.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CubeDocument {
    pub name: String,
    pub from: String,
    pub to: String,
    pub corners: Vec<String>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
pub struct DocumentFile {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub algebras: Vec<AlgebraDocument>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub morphisms: Vec<MorphismDocument>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub congruences: Vec<CongruenceDocument>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub squares: Vec<SquareDocument>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cubes: Vec<CubeDocument>,
}

impl DocumentFile {
    pub fn parse(text: &str) -> Result<Self, DocError> {
        serde_json::from_str(text).map_err(|e| DocError::Parse(e.to_string()))
    }

    /// Canonical emission: stable field order, two-space indentation, one
    /// trailing newline.
    pub fn emit(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("documents serialize");
        out.push('\n');
        out
    }
}

fn flatten_table(value: &Value, size: usize, arity: usize, op: &str) -> Result<Vec<u32>, DocError> {
    let mut out = Vec::new();
    fn rec(
        value: &Value,
        size: usize,
        depth: usize,
        op: &str,
        out: &mut Vec<u32>,
    ) -> Result<(), DocError> {
        if depth == 0 {
            let n = value.as_u64().ok_or_else(|| DocError::Parse(format!(
                "table for `{}` contains a non-integer at depth 0",
                op
            )))?;
            out.push(n as u32);
            return Ok(());
        }
        let arr = value.as_array().ok_or_else(|| DocError::Parse(format!(
            "table for `{}` is not nested to its arity",
            op
        )))?;
        if arr.len() != size {
            return Err(DocError::Parse(format!(
                "table for `{}` has a row of length {}, expected {}",
                op,
                arr.len(),
                size
            )));
        }
        for v in arr {
            rec(v, size, depth - 1, op, out)?;
        }
        Ok(())
    }
    rec(value, size, arity, op, &mut out)?;
    Ok(out)
}

fn nest_table(table: &[u32], size: usize, arity: usize) -> Value {
    fn rec(table: &[u32], size: usize, depth: usize) -> Value {
        if depth == 0 {
            return Value::from(table[0]);
        }
        let chunk = table.len() / size;
        Value::Array((0..size).map(|i| rec(&table[i * chunk..(i + 1) * chunk], size, depth - 1)).collect())
    }
    rec(table, size, arity)
}

impl AlgebraDocument {
    pub fn to_algebra(&self) -> Result<Arc<FiniteAlgebra>, DocError> {
        let signature = Arc::new(Signature::new(
            self.signature.iter().map(|e| OpSymbol::new(&e.op, e.arity)).collect(),
        ));
        if self.tables.len() != self.signature.len() {
            return Err(DocError::Validation {
                name: self.name.clone(),
                message: format!(
                    "{} tables for {} operations",
                    self.tables.len(),
                    self.signature.len()
                ),
            });
        }
        let mut tables = Vec::with_capacity(self.tables.len());
        for (entry, value) in self.signature.iter().zip(&self.tables) {
            tables.push(flatten_table(value, self.size, entry.arity, &entry.op)?);
        }
        let alg = FiniteAlgebra::from_tables_unchecked(&self.name, self.size, signature, tables);
        let report = validate_algebra(&alg);
        if !report.is_valid() {
            return Err(DocError::Validation {
                name: self.name.clone(),
                message: report.to_string(),
            });
        }
        match self.kind.as_deref() {
            Some("group") => {
                let violations = centrex_core::varieties::group_axiom_violations(&alg);
                if !violations.is_empty() {
                    return Err(DocError::Validation {
                        name: self.name.clone(),
                        message: violations.join("; "),
                    });
                }
            }
            Some("ring") => {
                let violations = centrex_core::varieties::ring_axiom_violations(&alg);
                if !violations.is_empty() {
                    return Err(DocError::Validation {
                        name: self.name.clone(),
                        message: violations.join("; "),
                    });
                }
            }
            _ => {}
        }
        Ok(Arc::new(alg))
    }

    pub fn from_algebra(alg: &FiniteAlgebra, kind: Option<&str>, provenance: Option<&str>) -> Result<Self, DocError> {
        let dense = alg.materialized().map_err(|e| DocError::Validation {
            name: alg.name().to_string(),
            message: e.to_string(),
        })?;
        let signature: Vec<SignatureEntry> = dense
            .signature()
            .ops()
            .iter()
            .map(|o| SignatureEntry { op: o.name.clone(), arity: o.arity })
            .collect();
        let tables = (0..signature.len())
            .map(|op| nest_table(dense.table(op), dense.size(), signature[op].arity))
            .collect();
        Ok(AlgebraDocument {
            name: alg.name().to_string(),
            kind: kind.map(|s| s.to_string()),
            size: alg.size(),
            signature,
            tables,
            provenance: provenance.map(|s| s.to_string()),
        })
    }
}

/// All named objects from a set of documents, resolved and validated.
#[derive(Debug, Default)]
pub struct Workspace {
    pub algebras: BTreeMap<String, Arc<FiniteAlgebra>>,
    pub algebra_kinds: BTreeMap<String, Option<String>>,
    pub morphisms: BTreeMap<String, Homomorphism>,
    pub congruences: BTreeMap<String, Congruence>,
    pub squares: BTreeMap<String, ExtSquare>,
    pub cubes: BTreeMap<String, TowerObject>,
}

impl Workspace {
    pub fn resolve(files: &[DocumentFile]) -> Result<Workspace, DocError> {
        let mut ws = Workspace::default();
        for file in files {
            for doc in &file.algebras {
                if ws.algebras.contains_key(&doc.name) {
                    return Err(DocError::DuplicateName(doc.name.clone()));
                }
                ws.algebra_kinds.insert(doc.name.clone(), doc.kind.clone());
                ws.algebras.insert(doc.name.clone(), doc.to_algebra()?);
            }
        }
        for file in files {
            for doc in &file.morphisms {
                if ws.morphisms.contains_key(&doc.name) {
                    return Err(DocError::DuplicateName(doc.name.clone()));
                }
                let source = ws.algebras.get(&doc.source).ok_or_else(|| {
                    DocError::DanglingReference {
                        kind: "algebra",
                        name: doc.source.clone(),
                        referenced_by: doc.name.clone(),
                    }
                })?;
                let target = ws.algebras.get(&doc.target).ok_or_else(|| {
                    DocError::DanglingReference {
                        kind: "algebra",
                        name: doc.target.clone(),
                        referenced_by: doc.name.clone(),
                    }
                })?;
                let hom = Homomorphism::new(source.clone(), target.clone(), doc.map.clone())
                    .map_err(|e| DocError::Validation {
                        name: doc.name.clone(),
                        message: e.to_string(),
                    })?;
                if !check_homomorphism(&hom).map_err(|e| DocError::Validation {
                    name: doc.name.clone(),
                    message: e.to_string(),
                })? {
                    return Err(DocError::Validation {
                        name: doc.name.clone(),
                        message: "map does not preserve the operations".to_string(),
                    });
                }
                ws.morphisms.insert(doc.name.clone(), hom);
            }
        }
        for file in files {
            for doc in &file.congruences {
                if ws.congruences.contains_key(&doc.name) {
                    return Err(DocError::DuplicateName(doc.name.clone()));
                }
                let algebra = ws.algebras.get(&doc.algebra).ok_or_else(|| {
                    DocError::DanglingReference {
                        kind: "algebra",
                        name: doc.algebra.clone(),
                        referenced_by: doc.name.clone(),
                    }
                })?;
                let cong = Congruence::from_blocks(algebra.clone(), &doc.blocks).map_err(|e| {
                    DocError::Validation { name: doc.name.clone(), message: e.to_string() }
                })?;
                ws.congruences.insert(doc.name.clone(), cong);
            }
        }
        for file in files {
            for doc in &file.squares {
                if ws.squares.contains_key(&doc.name) {
                    return Err(DocError::DuplicateName(doc.name.clone()));
                }
                let get = |name: &str| {
                    ws.morphisms.get(name).cloned().ok_or_else(|| DocError::DanglingReference {
                        kind: "morphism",
                        name: name.to_string(),
                        referenced_by: doc.name.clone(),
                    })
                };
                let square = ExtSquare::new(
                    get(&doc.top)?,
                    get(&doc.left)?,
                    get(&doc.right)?,
                    get(&doc.bottom)?,
                )
                .map_err(|e| DocError::Validation {
                    name: doc.name.clone(),
                    message: e.to_string(),
                })?;
                ws.squares.insert(doc.name.clone(), square);
            }
        }
        for file in files {
            for doc in &file.cubes {
                if ws.cubes.contains_key(&doc.name) {
                    return Err(DocError::DuplicateName(doc.name.clone()));
                }
                let tower = ws.resolve_cube(doc)?;
                ws.cubes.insert(doc.name.clone(), tower);
            }
        }
        Ok(ws)
    }

    fn resolve_cube(&self, doc: &CubeDocument) -> Result<TowerObject, DocError> {
        let from = self.squares.get(&doc.from).ok_or_else(|| DocError::DanglingReference {
            kind: "square",
            name: doc.from.clone(),
            referenced_by: doc.name.clone(),
        })?;
        let to = self.squares.get(&doc.to).ok_or_else(|| DocError::DanglingReference {
            kind: "square",
            name: doc.to.clone(),
            referenced_by: doc.name.clone(),
        })?;
        if doc.corners.len() != 4 {
            return Err(DocError::Validation {
                name: doc.name.clone(),
                message: format!("expected 4 corner morphisms, got {}", doc.corners.len()),
            });
        }
        let corner = |name: &String| {
            self.morphisms.get(name).cloned().ok_or_else(|| DocError::DanglingReference {
                kind: "morphism",
                name: name.clone(),
                referenced_by: doc.name.clone(),
            })
        };
        let m1 = from.as_tower_morphism().map_err(|e| DocError::Validation {
            name: doc.name.clone(),
            message: e.to_string(),
        })?;
        let m2 = to.as_tower_morphism().map_err(|e| DocError::Validation {
            name: doc.name.clone(),
            message: e.to_string(),
        })?;
        // Corners: maps between the four matching corners of the two squares.
        let dom = TowerMorphism::square(
            TowerObject::from_arrow(from.top.clone()),
            TowerObject::from_arrow(to.top.clone()),
            TowerMorphism::from_hom(corner(&doc.corners[0])?),
            TowerMorphism::from_hom(corner(&doc.corners[1])?),
        )
        .map_err(|e| DocError::Validation { name: doc.name.clone(), message: e.to_string() })?;
        let cod = TowerMorphism::square(
            TowerObject::from_arrow(from.bottom.clone()),
            TowerObject::from_arrow(to.bottom.clone()),
            TowerMorphism::from_hom(corner(&doc.corners[2])?),
            TowerMorphism::from_hom(corner(&doc.corners[3])?),
        )
        .map_err(|e| DocError::Validation { name: doc.name.clone(), message: e.to_string() })?;
        let cube = TowerMorphism::square(
            TowerObject::Extension(Box::new(m1)),
            TowerObject::Extension(Box::new(m2)),
            dom,
            cod,
        )
        .map_err(|e| DocError::Validation { name: doc.name.clone(), message: e.to_string() })?;
        Ok(TowerObject::Extension(Box::new(cube)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z4_doc() -> &'static str {
        r#"{
  "algebras": [
    {"name": "z4", "kind": "group", "size": 4,
     "signature": [{"op": "mul", "arity": 2}, {"op": "inv", "arity": 1}, {"op": "e", "arity": 0}],
     "tables": [[[0,1,2,3],[1,2,3,0],[2,3,0,1],[3,0,1,2]], [0,3,2,1], 0]},
    {"name": "z2", "kind": "group", "size": 2,
     "signature": [{"op": "mul", "arity": 2}, {"op": "inv", "arity": 1}, {"op": "e", "arity": 0}],
     "tables": [[[0,1],[1,0]], [0,1], 0]}
  ],
  "morphisms": [
    {"name": "mod2", "source": "z4", "target": "z2", "map": [0,1,0,1]}
  ]
}"#
    }

    #[test]
    fn well_formed_document_resolves() {
        let file = DocumentFile::parse(z4_doc()).unwrap();
        let ws = Workspace::resolve(std::slice::from_ref(&file)).unwrap();
        assert_eq!(ws.algebras["z4"].size(), 4);
        assert!(ws.morphisms["mod2"].is_surjective());
    }

    #[test]
    fn out_of_range_entry_is_a_validation_error() {
        let text = z4_doc().replace("[0,3,2,1]", "[0,9,2,1]");
        let file = DocumentFile::parse(&text).unwrap();
        let err = Workspace::resolve(std::slice::from_ref(&file)).unwrap_err();
        assert!(matches!(err, DocError::Validation { .. }), "{}", err);
    }

    #[test]
    fn dangling_reference_is_reported() {
        let text = z4_doc().replace("\"target\": \"z2\"", "\"target\": \"nope\"");
        let file = DocumentFile::parse(&text).unwrap();
        let err = Workspace::resolve(std::slice::from_ref(&file)).unwrap_err();
        assert!(matches!(err, DocError::DanglingReference { .. }), "{}", err);
    }

    #[test]
    fn emission_is_canonical_and_round_trips() {
        let file = DocumentFile::parse(z4_doc()).unwrap();
        let emitted = file.emit();
        let reparsed = DocumentFile::parse(&emitted).unwrap();
        assert_eq!(file, reparsed);
        assert_eq!(emitted, reparsed.emit());
    }
}
