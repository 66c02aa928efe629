//! End-to-end checks of the binary: exit-status conventions, document
//! round-trips, emitted centralization documents, and report determinism.

use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::Arc;

use proptest::prelude::*;

use centrex_cli::doc::{
    AlgebraDocument, CongruenceDocument, CubeDocument, DocumentFile, MorphismDocument,
    SquareDocument, Workspace,
};
use centrex_core::algebra::{FiniteAlgebra, OpSymbol, Signature};
use centrex_core::varieties::{
    coset_congruence, cyclic_group, derived_subgroup, dihedral_group, direct_product_group,
    symmetric_group,
};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_centrex"))
}

/// A workspace document with the witnesses the verb tests need.
fn fixture_document() -> DocumentFile {
    let z4 = cyclic_group(4);
    let z2 = cyclic_group(2);
    let one = cyclic_group(1);
    let v4 = direct_product_group(&z2, &z2).as_ref().clone().renamed("v4");
    let v4 = Arc::new(v4);
    let s3 = symmetric_group(3);
    let d4 = dihedral_group(4);

    let algebras = vec![
        AlgebraDocument::from_algebra(&z4, Some("group"), None).unwrap(),
        AlgebraDocument::from_algebra(&z2, Some("group"), None).unwrap(),
        AlgebraDocument::from_algebra(&one, Some("group"), None).unwrap(),
        AlgebraDocument::from_algebra(&v4, Some("group"), None).unwrap(),
        AlgebraDocument::from_algebra(&s3, Some("group"), None).unwrap(),
        AlgebraDocument::from_algebra(&d4, Some("group"), None).unwrap(),
    ];
    let sign_blocks = {
        let a3 = derived_subgroup(&s3).unwrap();
        let theta = coset_congruence(&s3, &a3).unwrap();
        (0..6).map(|x| theta.block_of(x)).collect::<Vec<_>>()
    };
    let morphisms = vec![
        MorphismDocument {
            name: "mod2".into(),
            source: "z4".into(),
            target: "z2".into(),
            map: vec![0, 1, 0, 1],
            provenance: None,
        },
        MorphismDocument {
            name: "sign".into(),
            source: "s3".into(),
            target: "z2".into(),
            map: sign_blocks,
            provenance: None,
        },
        MorphismDocument {
            name: "v4_first".into(),
            source: "v4".into(),
            target: "z2".into(),
            map: vec![0, 0, 1, 1],
            provenance: None,
        },
        MorphismDocument {
            name: "v4_second".into(),
            source: "v4".into(),
            target: "z2".into(),
            map: vec![0, 1, 0, 1],
            provenance: None,
        },
        MorphismDocument {
            name: "z2_to_one".into(),
            source: "z2".into(),
            target: "1".into(),
            map: vec![0, 0],
            provenance: None,
        },
        MorphismDocument {
            name: "v4_to_one".into(),
            source: "v4".into(),
            target: "1".into(),
            map: vec![0, 0, 0, 0],
            provenance: None,
        },
        MorphismDocument {
            name: "d4_r_parity".into(),
            source: "d4".into(),
            target: "z2".into(),
            map: vec![0, 1, 0, 1, 0, 1, 0, 1],
            provenance: None,
        },
        MorphismDocument {
            name: "d4_s_parity".into(),
            source: "d4".into(),
            target: "z2".into(),
            map: vec![0, 0, 0, 0, 1, 1, 1, 1],
            provenance: None,
        },
    ];
    let squares = vec![
        SquareDocument {
            name: "klein".into(),
            top: "v4_first".into(),
            left: "v4_second".into(),
            right: "z2_to_one".into(),
            bottom: "z2_to_one".into(),
        },
        SquareDocument {
            name: "d4sq".into(),
            top: "d4_r_parity".into(),
            left: "d4_s_parity".into(),
            right: "z2_to_one".into(),
            bottom: "z2_to_one".into(),
        },
        // Both maps the first projection: the comparison image is the
        // diagonal, so the square is outside the double class.
        SquareDocument {
            name: "diagonal".into(),
            top: "v4_first".into(),
            left: "v4_first".into(),
            right: "z2_to_one".into(),
            bottom: "z2_to_one".into(),
        },
    ];
    let congruences = vec![CongruenceDocument {
        name: "parity".into(),
        algebra: "z4".into(),
        blocks: vec![vec![0, 2], vec![1, 3]],
    }];
    let mut morphisms = morphisms;
    for (name, source, size) in
        [("id_v4", "v4", 4usize), ("id_z2", "z2", 2), ("id_one", "1", 1)]
    {
        morphisms.push(MorphismDocument {
            name: name.into(),
            source: source.into(),
            target: source.into(),
            map: (0..size).collect(),
            provenance: None,
        });
    }
    let cubes = vec![CubeDocument {
        name: "klein_identity_cube".into(),
        from: "klein".into(),
        to: "klein".into(),
        corners: vec!["id_v4".into(), "id_z2".into(), "id_z2".into(), "id_one".into()],
    }];
    DocumentFile { algebras, morphisms, congruences, squares, cubes }
}

fn write_fixture(dir: &tempfile::TempDir) -> PathBuf {
    let path = dir.path().join("fixture.json");
    std::fs::write(&path, fixture_document().emit()).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

#[test]
fn verdict_true_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let ws = write_fixture(&dir);
    let out = run(&["check-trivial", "mod2", "-w", ws.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("true"));
    let out = run(&["check-central", "mod2", "-w", ws.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verdict_false_exits_one_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let ws = write_fixture(&dir);
    let out = run(&["check-central", "sign", "-w", ws.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("false"), "{}", stdout);

    let out = run(&["check-e1", "diagonal", "-w", ws.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("witness"), "{}", stdout);
}

#[test]
fn validation_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let text = fixture_document().emit().replace("\"mod2\"", "\"mod2-dup\"");
    // Dangling reference instead: point a morphism at a missing algebra.
    let broken = text.replace("\"target\": \"z2\"", "\"target\": \"missing\"");
    let path = dir.path().join("broken.json");
    std::fs::write(&path, broken).unwrap();
    let out = run(&["check-trivial", "mod2-dup", "-w", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing"));
}

#[test]
fn double_central_verdicts_match_the_witness_squares() {
    let dir = tempfile::tempdir().unwrap();
    let ws = write_fixture(&dir);
    let out = run(&["check-double-central", "klein", "-w", ws.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let out = run(&["check-double-central", "d4sq", "-w", ws.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    // check-n-central at depth 2 agrees.
    let out = run(&["check-n-central", "klein", "--depth", "2", "-w", ws.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn identity_cube_is_triply_central() {
    // The identity morphism of a doubly central square is a covering at the
    // next level, so the cube passes the depth-3 test.
    let dir = tempfile::tempdir().unwrap();
    let ws = write_fixture(&dir);
    let out = run(&[
        "check-n-central",
        "klein_identity_cube",
        "--depth",
        "3",
        "-w",
        ws.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn centralize_emits_a_resolvable_document() {
    let dir = tempfile::tempdir().unwrap();
    let ws = write_fixture(&dir);
    let out_path = dir.path().join("sign_central.json");
    let out = run(&[
        "centralize",
        "sign",
        "-w",
        ws.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&out_path).unwrap();
    let file = DocumentFile::parse(&text).unwrap();
    let resolved = Workspace::resolve(std::slice::from_ref(&file)).unwrap();
    // The sign map is not central, and [A3, S3] = A3, so the centralized
    // carrier is the two-element quotient.
    assert_eq!(resolved.algebras["sign_centralized_carrier"].size(), 2);
    assert!(resolved.morphisms["sign_centralized"].is_bijective());
    assert!(resolved.morphisms["sign_unit"].is_surjective());
    assert!(!resolved.morphisms["sign_unit"].is_injective());
    // Canonical emission round-trips byte-stably.
    assert_eq!(file.emit(), text);
}

#[test]
fn commutator_verb_reports_blocks() {
    let dir = tempfile::tempdir().unwrap();
    let ws = write_fixture(&dir);
    let out = run(&["commutator", "z4", "parity", "parity", "-w", ws.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("blocks"));
}

#[test]
fn mutation_reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let r1 = dir.path().join("r1.json");
    let r2 = dir.path().join("r2.json");
    for path in [&r1, &r2] {
        let out = run(&[
            "verify-lemmas",
            "--mutate",
            "skip-coequalizer",
            "--report",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(1));
    }
    assert_eq!(std::fs::read(&r1).unwrap(), std::fs::read(&r2).unwrap());
}

#[test]
fn corpus_dir_extends_the_corpus() {
    // A corpus-directory algebra with a deliberately broken table is
    // rejected at load time with a validation error.
    let dir = tempfile::tempdir().unwrap();
    let mut doc = AlgebraDocument::from_algebra(&cyclic_group(3), Some("group"), None).unwrap();
    doc.name = "corpus_z3".into();
    let file = DocumentFile { algebras: vec![doc], ..Default::default() };
    std::fs::write(dir.path().join("extra.json"), file.emit()).unwrap();
    let out = bin()
        .args(["verify-lemmas", "--mutate", "skip-coequalizer"])
        .env("CENTREX_CORPUS_DIR", dir.path())
        .output()
        .unwrap();
    // The run completes (exit 1 from the injected fault) with the extra
    // member included.
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Documents round-trip: algebra -> document -> text -> document ->
    /// algebra is the identity, and emission is canonical.
    #[test]
    fn algebra_documents_round_trip(
        n in 1usize..5,
        unary in proptest::collection::vec(0usize..4, 4),
        binary in proptest::collection::vec(0usize..4, 16),
    ) {
        let sig = Arc::new(Signature::new(vec![
            OpSymbol::new("f", 2),
            OpSymbol::new("u", 1),
            OpSymbol::new("c", 0),
        ]));
        let binary_t: Vec<usize> = binary.iter().take(n * n).map(|&x| x % n).collect();
        let unary_t: Vec<usize> = unary.iter().take(n).map(|&x| x % n).collect();
        let alg = Arc::new(
            FiniteAlgebra::from_usize_tables("rt", n, sig, vec![binary_t, unary_t, vec![0]]).unwrap(),
        );
        let doc = AlgebraDocument::from_algebra(&alg, None, None).unwrap();
        let file = DocumentFile { algebras: vec![doc], ..Default::default() };
        let text = file.emit();
        let reparsed = DocumentFile::parse(&text).unwrap();
        prop_assert_eq!(&reparsed.emit(), &text);
        let back = reparsed.algebras[0].to_algebra().unwrap();
        prop_assert_eq!(back.as_ref(), alg.as_ref());
    }
}
