use kpoint_conic::sdpa::{export_sdpa, import_sdpa};
use kpoint_conic::{BlockKind, BlockSparse, ConicProgram, Constraint, Sense};

fn toy() -> ConicProgram {
    // maximize X12 subject to X11 + X22 = 2 over a 2x2 PSD block
    ConicProgram::new(
        vec![BlockKind::Psd(2)],
        Sense::Maximize,
        BlockSparse::new().with(0, 0, 1, 1.0),
        vec![Constraint::new(BlockSparse::new().with(0, 0, 0, 1.0).with(0, 1, 1, 1.0), 2.0)],
    )
    .unwrap()
}

#[test]
fn toy_matches_golden_file() {
    let golden = include_str!("data/toy.dat-s");
    assert_eq!(export_sdpa(&toy()), golden);
}

#[test]
fn golden_reimports_to_same_program() {
    let p = import_sdpa(include_str!("data/toy.dat-s")).unwrap();
    assert_eq!(p, toy());
}

#[test]
fn export_import_export_is_byte_identical() {
    let mixed = ConicProgram::new(
        vec![BlockKind::Psd(3), BlockKind::Diagonal(4)],
        Sense::Minimize,
        BlockSparse::new().with(0, 0, 2, 0.1).with(1, 3, 3, -1.0 / 3.0).with(0, 1, 1, 7.0),
        vec![
            Constraint::new(BlockSparse::new().with(0, 0, 0, 1.0).with(1, 0, 0, 2.5e-9), -4.0),
            Constraint::new(BlockSparse::new().with(0, 1, 2, 1e17).with(1, 2, 2, 1.0), 1.0 / 7.0),
        ],
    )
    .unwrap();
    let first = export_sdpa(&mixed);
    let back = import_sdpa(&first).unwrap();
    assert_eq!(back, mixed);
    assert_eq!(export_sdpa(&back), first);
}

#[test]
fn minimization_stores_negated_objective() {
    let p = ConicProgram::new(
        vec![BlockKind::Diagonal(1)],
        Sense::Minimize,
        BlockSparse::new().with(0, 0, 0, 3.0),
        vec![Constraint::new(BlockSparse::new().with(0, 0, 0, 1.0), 1.0)],
    )
    .unwrap();
    let text = export_sdpa(&p);
    assert!(text.lines().any(|l| l == "0 1 1 1 -3"), "{text}");
}
