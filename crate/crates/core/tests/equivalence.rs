use pqft_core::circuit::{build_qft_program, output_wire, QubitRef};
use pqft_core::validation::{qft_equivalence_error, scheduler_matches, swap_identity_error};

#[test]
fn swap_sequence_is_swap() {
    assert!(swap_identity_error().unwrap() < 1e-12);
}

#[test]
fn program_matches_ideal_transform_up_to_relabeling() {
    for n in 1..=7 {
        assert!(qft_equivalence_error(n).unwrap() < 1e-10, "n = {n}");
    }
}

#[test]
fn output_convention() {
    // y₁ stays on the atom, photon 1 leaves carrying the ancilla and y_m
    // rides photon n − m + 2.
    assert_eq!(output_wire(4, 1), QubitRef::Atom);
    assert_eq!(output_wire(4, 2), QubitRef::Photon(4));
    assert_eq!(output_wire(4, 4), QubitRef::Photon(2));
}

#[test]
fn gate_counts() {
    for n in 1..=10usize {
        let p = build_qft_program(n, n as u32).unwrap();
        let counts = p.cr_counts();
        assert_eq!(counts[1], 3 * n);
        assert_eq!(p.len(), 6 * n + n * (n - 1) / 2);
    }
}

#[test]
fn schedule_matches_program() {
    for n in 1..=12 {
        for k in 1..=n as u32 {
            assert!(scheduler_matches(n, k).unwrap(), "n = {n}, K = {k}");
        }
    }
}
