//! End-to-end checks of the `baode` binary: artifact round trips, exit
//! codes, and byte-identical reports for equal seeds.

use baode::amalgam::AmalgamationInstance;
use baode::bao::{FiniteBao, Signature};
use baode::boolean::{Elem, FiniteBA};
use baode::frame::{frame_isomorphism, AlgebraMorphism, Frame, Rel};
use baode::gen::fold_morphism;
use baode::io::{
    save_document, BaoDoc, Document, FrameDoc, InstanceDoc, MorphismDoc, SchemaDoc,
};
use std::path::Path;
use std::process::{Command, Output};

fn baode(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_baode"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

/// Two-point frame with full operator relations over the trivial
/// signature; its complex algebra satisfies the default schema.
fn full_two_point() -> Frame {
    let sig = Signature::trivial(2, false).unwrap();
    let full: Rel = [(0, 0), (0, 1), (1, 0), (1, 1)].into_iter().collect();
    let diag: Rel = [(0, 0), (1, 1)].into_iter().collect();
    Frame::new(sig, 2, vec![full.clone(), full], vec![diag], vec![]).unwrap()
}

fn discrete(n: usize) -> FiniteBao {
    let ba = FiniteBA::new(n).unwrap();
    let sig = Signature::trivial(2, false).unwrap();
    let atoms: Vec<Elem> = ba.atoms().collect();
    FiniteBao::new(ba, sig, vec![atoms.clone(), atoms.clone()], vec![atoms], vec![]).unwrap()
}

#[test]
fn cm_at_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let frame = full_two_point();
    let path = dir.path().join("frame.json");
    save_document(&path, &Document::Frame(FrameDoc::of(&frame))).unwrap();

    let out = baode(dir.path(), &["cm", "frame.json"]);
    assert_eq!(code(&out), 0, "{out:?}");
    let out = baode(dir.path(), &["at", "cm.json"]);
    assert_eq!(code(&out), 0, "{out:?}");

    let back = match baode::io::load_document(&dir.path().join("at.json")).unwrap() {
        Document::Frame(d) => d.build().unwrap(),
        other => panic!("expected a frame, got {other:?}"),
    };
    assert!(frame_isomorphism(&frame, &back).is_some());
}

#[test]
fn kind_mismatch_and_missing_file_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let a = discrete(2);
    save_document(&dir.path().join("bao.json"), &Document::Bao(BaoDoc::of(&a))).unwrap();
    // An algebra fed to `cm`, which wants a frame.
    let out = baode(dir.path(), &["cm", "bao.json"]);
    assert_eq!(code(&out), 2, "{out:?}");
    assert!(String::from_utf8_lossy(&out.stderr).contains("error:"));
    let out = baode(dir.path(), &["cm", "no-such-file.json"]);
    assert_eq!(code(&out), 2);
    let out = baode(dir.path(), &["property", "no-such-campaign"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn failing_check_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let frame = full_two_point();
    save_document(
        &dir.path().join("frame.json"),
        &Document::Frame(FrameDoc::of(&frame)),
    )
    .unwrap();
    // c0(1) = 0 fails on a frame with a nonempty relation.
    let schema = SchemaDoc {
        axioms: vec![("refutable".into(), "(c 0 1) = 0".into())],
    };
    save_document(&dir.path().join("schema.json"), &Document::Schema(schema)).unwrap();
    let out = baode(
        dir.path(),
        &["check", "frame.json", "--schema", "schema.json"],
    );
    assert_eq!(code(&out), 1, "{out:?}");
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
    // The default schema of the trivial signature holds here.
    let out = baode(dir.path(), &["check", "frame.json"]);
    assert_eq!(code(&out), 0, "{out:?}");
}

#[test]
fn zigzag_writes_insep_frame() {
    let dir = tempfile::tempdir().unwrap();
    let target = full_two_point();
    let f = fold_morphism(&target, 2).unwrap();
    save_document(
        &dir.path().join("f.json"),
        &Document::Morphism(MorphismDoc::of_frame(&f)),
    )
    .unwrap();
    save_document(
        &dir.path().join("h.json"),
        &Document::Morphism(MorphismDoc::of_frame(&f)),
    )
    .unwrap();
    let out = baode(dir.path(), &["zigzag", "f.json", "h.json"]);
    assert_eq!(code(&out), 0, "{out:?}");
    assert!(dir.path().join("insep.json").exists());
    assert!(dir.path().join("zigzag.json").exists());
}

#[test]
fn amalgamate_identity_instance() {
    let dir = tempfile::tempdir().unwrap();
    let a = discrete(2);
    let inst = AmalgamationInstance::new(
        AlgebraMorphism::identity(&a),
        AlgebraMorphism::identity(&a),
        vec![],
    )
    .unwrap();
    save_document(
        &dir.path().join("instance.json"),
        &Document::Instance(InstanceDoc::of(&inst)),
    )
    .unwrap();
    let out = baode(dir.path(), &["amalgamate", "instance.json"]);
    assert_eq!(code(&out), 0, "{out:?}");
    for artifact in ["amalgam.json", "g.json", "k.json"] {
        assert!(dir.path().join(artifact).exists());
    }
}

#[test]
fn property_reports_are_deterministic() {
    let dir1 = tempfile::tempdir().unwrap();
    let dir2 = tempfile::tempdir().unwrap();
    for dir in [dir1.path(), dir2.path()] {
        let out = baode(dir, &["property", "positivity", "--seed", "7"]);
        assert_eq!(code(&out), 0, "{out:?}");
    }
    let a = std::fs::read(dir1.path().join("property-positivity.json")).unwrap();
    let b = std::fs::read(dir2.path().join("property-positivity.json")).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b, "equal seeds must give byte-identical reports");
}

#[test]
fn out_directory_is_respected() {
    let dir = tempfile::tempdir().unwrap();
    let frame = full_two_point();
    save_document(
        &dir.path().join("frame.json"),
        &Document::Frame(FrameDoc::of(&frame)),
    )
    .unwrap();
    let out = baode(dir.path(), &["cm", "frame.json", "--out", "artifacts"]);
    assert_eq!(code(&out), 0, "{out:?}");
    assert!(dir.path().join("artifacts/cm.json").exists());
}
