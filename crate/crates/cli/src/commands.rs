//! Verb implementations shared by the binary and the integration tests.
//! Exit-status convention: 0 = verdict true / suite clean, 1 = verdict
//! false / suite failures, 2 = usage or validation error.

use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use centrex_core::algebra::FiniteAlgebra;
use centrex_core::commutator::{smith_commutator, CommutatorQuery};
use centrex_core::galois::{
    centralize, is_covering, is_in_e1, is_n_fold_central, is_trivial_covering, GaloisStructure,
    TowerObject,
};
use centrex_core::hom::Homomorphism;
use centrex_core::varieties::{has_ring_signature, CorpusSelector};

use crate::doc::{
    AlgebraDocument, DocError, DocumentFile, MorphismDocument, Workspace,
};
use crate::report::{Report, VerdictReport};
use crate::suite::{run_property_suite, SuiteOptions};

pub const EXIT_TRUE: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug)]
pub struct CliError(pub String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for CliError {}

impl From<DocError> for CliError {
    fn from(e: DocError) -> Self {
        CliError(e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructureChoice {
    Auto,
    Abelianization,
    Boolean,
    Identity,
}

impl StructureChoice {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        match text {
            "auto" => Ok(StructureChoice::Auto),
            "ab" | "abelianization" => Ok(StructureChoice::Abelianization),
            "boolean" => Ok(StructureChoice::Boolean),
            "identity" => Ok(StructureChoice::Identity),
            other => Err(CliError(format!(
                "unknown structure `{}`; expected auto, ab, boolean or identity",
                other
            ))),
        }
    }

    /// Resolves `Auto` by signature: ring-shaped algebras get the Boolean
    /// reflection, everything else abelianization.
    pub fn structure_for(&self, sample: &FiniteAlgebra) -> GaloisStructure {
        match self {
            StructureChoice::Abelianization => GaloisStructure::abelianization(),
            StructureChoice::Boolean => GaloisStructure::boolean_rings(),
            StructureChoice::Identity => GaloisStructure::identity_reflector(),
            StructureChoice::Auto => {
                if has_ring_signature(sample) {
                    GaloisStructure::boolean_rings()
                } else {
                    GaloisStructure::abelianization()
                }
            }
        }
    }
}

pub fn load_workspace(paths: &[PathBuf]) -> Result<Workspace, CliError> {
    let mut files = Vec::new();
    for path in paths {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError(format!("cannot read {}: {}", path.display(), e)))?;
        files.push(DocumentFile::parse(&text)?);
    }
    Ok(Workspace::resolve(&files)?)
}

fn lookup_morphism<'a>(ws: &'a Workspace, name: &str) -> Result<&'a Homomorphism, CliError> {
    ws.morphisms
        .get(name)
        .ok_or_else(|| CliError(format!("unknown morphism `{}`", name)))
}

pub fn check_trivial(
    ws: &Workspace,
    name: &str,
    choice: StructureChoice,
) -> Result<VerdictReport, CliError> {
    let hom = lookup_morphism(ws, name)?;
    let gamma = choice.structure_for(hom.source());
    let verdict = is_trivial_covering(&gamma, hom).map_err(|e| CliError(e.to_string()))?;
    Ok(VerdictReport {
        command: "check-trivial".to_string(),
        instance: name.to_string(),
        verdict,
        witness: None,
    })
}

pub fn check_central(
    ws: &Workspace,
    name: &str,
    choice: StructureChoice,
) -> Result<VerdictReport, CliError> {
    let hom = lookup_morphism(ws, name)?;
    let gamma = choice.structure_for(hom.source());
    let verdict = is_covering(&gamma, hom).map_err(|e| CliError(e.to_string()))?;
    Ok(VerdictReport {
        command: "check-central".to_string(),
        instance: name.to_string(),
        verdict,
        witness: None,
    })
}

pub fn centralize_to_file(
    ws: &Workspace,
    name: &str,
    choice: StructureChoice,
    out: &Path,
) -> Result<VerdictReport, CliError> {
    let hom = lookup_morphism(ws, name)?;
    let gamma = choice.structure_for(hom.source());
    let result = centralize(&gamma, hom).map_err(|e| CliError(e.to_string()))?;
    let reflected_carrier = result
        .reflected
        .source()
        .as_ref()
        .clone()
        .renamed(&format!("{}_centralized_carrier", name));
    let reflected_carrier = Arc::new(reflected_carrier);

    let source_doc = AlgebraDocument::from_algebra(hom.source(), None, Some("input source"))?;
    let target_doc = AlgebraDocument::from_algebra(hom.target(), None, Some("input base"))?;
    let carrier_doc = AlgebraDocument::from_algebra(
        &reflected_carrier,
        None,
        Some("coequalizer of the span obtained by pulling the reflected kernel-pair data back along the units"),
    )?;
    let file = DocumentFile {
        algebras: vec![source_doc, target_doc, carrier_doc],
        morphisms: vec![
            MorphismDocument {
                name: format!("{}_centralized", name),
                source: reflected_carrier.name().to_string(),
                target: hom.target().name().to_string(),
                map: result.reflected.map().iter().map(|&v| v as usize).collect(),
                provenance: Some("induced arrow from the coequalizer to the base".to_string()),
            },
            MorphismDocument {
                name: format!("{}_unit", name),
                source: hom.source().name().to_string(),
                target: reflected_carrier.name().to_string(),
                map: result.unit.map().iter().map(|&v| v as usize).collect(),
                provenance: Some(
                    "diagonal into the kernel pair followed by the comparison into the unit pullback and the coequalizer".to_string(),
                ),
            },
        ],
        ..Default::default()
    };
    std::fs::write(out, file.emit())
        .map_err(|e| CliError(format!("cannot write {}: {}", out.display(), e)))?;
    Ok(VerdictReport {
        command: "centralize".to_string(),
        instance: name.to_string(),
        verdict: true,
        witness: Some(format!(
            "carrier with {} elements written to {}",
            reflected_carrier.size(),
            out.display()
        )),
    })
}

pub fn check_e1(ws: &Workspace, name: &str) -> Result<VerdictReport, CliError> {
    let square = ws
        .squares
        .get(name)
        .ok_or_else(|| CliError(format!("unknown square `{}`", name)))?;
    let verdict = is_in_e1(square).map_err(|e| CliError(e.to_string()))?;
    let witness = if verdict {
        None
    } else {
        let comparison = square.comparison().map_err(|e| CliError(e.to_string()))?;
        let image = comparison.image();
        let missing = (0..comparison.target().size()).find(|i| !image.contains(i));
        missing.map(|i| format!("pullback element {} is not in the comparison image", i))
    };
    Ok(VerdictReport {
        command: "check-e1".to_string(),
        instance: name.to_string(),
        verdict,
        witness,
    })
}

pub fn check_n_central(
    ws: &Workspace,
    name: &str,
    depth: usize,
    choice: StructureChoice,
) -> Result<VerdictReport, CliError> {
    let tower: TowerObject = match depth {
        1 => TowerObject::from_arrow(lookup_morphism(ws, name)?.clone()),
        2 => {
            let square = ws
                .squares
                .get(name)
                .ok_or_else(|| CliError(format!("unknown square `{}`", name)))?;
            TowerObject::Extension(Box::new(
                square.as_tower_morphism().map_err(|e| CliError(e.to_string()))?,
            ))
        }
        3 => ws
            .cubes
            .get(name)
            .cloned()
            .ok_or_else(|| CliError(format!("unknown cube `{}`", name)))?,
        other => return Err(CliError(format!("unsupported depth {}", other))),
    };
    let sample = sample_algebra(&tower);
    let gamma = choice.structure_for(&sample);
    let verdict = is_n_fold_central(&gamma, &tower, depth).map_err(|e| CliError(e.to_string()))?;
    Ok(VerdictReport {
        command: format!("check-{}-central", depth),
        instance: name.to_string(),
        verdict,
        witness: None,
    })
}

fn sample_algebra(tower: &TowerObject) -> Arc<FiniteAlgebra> {
    match tower {
        TowerObject::Algebra(a) => a.clone(),
        TowerObject::Extension(m) => sample_algebra(m.source()),
    }
}

pub fn commutator_command(
    ws: &Workspace,
    algebra: &str,
    left: &str,
    right: &str,
) -> Result<VerdictReport, CliError> {
    let alg = ws
        .algebras
        .get(algebra)
        .ok_or_else(|| CliError(format!("unknown algebra `{}`", algebra)))?;
    let lookup = |name: &str| {
        ws.congruences
            .get(name)
            .cloned()
            .ok_or_else(|| CliError(format!("unknown congruence `{}`", name)))
    };
    let query = CommutatorQuery::new(alg.clone(), lookup(left)?, lookup(right)?)
        .map_err(|e| CliError(e.to_string()))?;
    let result = smith_commutator(&query).map_err(|e| CliError(e.to_string()))?;
    let blocks = result.congruence.blocks();
    let mut witness = format!("blocks: {:?}", blocks);
    if !result.permutable {
        witness.push_str(" (inputs do not permute; outside the theory's guarantees)");
    }
    Ok(VerdictReport {
        command: "commutator".to_string(),
        instance: format!("[{}, {}] on {}", left, right, algebra),
        verdict: true,
        witness: Some(witness),
    })
}

pub fn verify_lemmas(
    corpus: &str,
    mutate: Option<&str>,
    extra_groups: Vec<Arc<FiniteAlgebra>>,
    extra_rings: Vec<Arc<FiniteAlgebra>>,
) -> Result<Report, CliError> {
    let corpus = match corpus {
        "small" => CorpusSelector::Small,
        "full" => CorpusSelector::Full,
        other => return Err(CliError(format!("unknown corpus `{}`; expected small or full", other))),
    };
    let mutation = match mutate {
        None => None,
        Some(name) => Some(
            centrex_core::galois::EngineFault::all()
                .into_iter()
                .find(|f| f.name() == name)
                .ok_or_else(|| {
                    CliError(format!(
                        "unknown fault `{}`; expected one of {:?}",
                        name,
                        centrex_core::galois::EngineFault::all()
                            .iter()
                            .map(|f| f.name())
                            .collect::<Vec<_>>()
                    ))
                })?,
        ),
    };
    let opts = SuiteOptions { corpus, mutation, extra_groups, extra_rings };
    Ok(run_property_suite(&opts))
}

/// Extra group and ring corpus members.
pub type CorpusExtras = (Vec<Arc<FiniteAlgebra>>, Vec<Arc<FiniteAlgebra>>);

/// Extra corpus members from the directory named by `CENTREX_CORPUS_DIR`:
/// every algebra in every document there joins the corpus by its kind tag.
pub fn corpus_dir_extras() -> Result<CorpusExtras, CliError> {
    let Some(dir) = std::env::var_os("CENTREX_CORPUS_DIR") else {
        return Ok((Vec::new(), Vec::new()));
    };
    let mut groups = Vec::new();
    let mut rings = Vec::new();
    let entries = std::fs::read_dir(&dir)
        .map_err(|e| CliError(format!("cannot read corpus dir {:?}: {}", dir, e)))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
        .collect();
    paths.sort();
    for path in paths {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError(format!("cannot read {}: {}", path.display(), e)))?;
        let file = DocumentFile::parse(&text)?;
        for doc in &file.algebras {
            let alg = doc.to_algebra()?;
            match doc.kind.as_deref() {
                Some("ring") => rings.push(alg),
                _ => groups.push(alg),
            }
        }
    }
    Ok((groups, rings))
}
