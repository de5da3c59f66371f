mod common;

use std::collections::BTreeSet;

use common::*;
use ldpc_conv::codes::{cyclic_example, proto_5x10, random_regular, tanner_qc, TANNER_EXPONENTS};
use ldpc_conv::convcode::ConvCode;
use ldpc_conv::cover::{CoverKind, CoverSpec, PermSpec, ProtoMatrix};
use ldpc_conv::gf2::{gf2_rank, nullspace_basis, row_space_equal};
use ldpc_conv::unwrap::*;
use ldpc_conv::{PolyMatrix, SparseBinMatrix};
use proptest::prelude::*;

fn ti_code(p: &PolyMatrix) -> ConvCode {
    ConvCode::from_tanner_poly(&tanner_unwrap(p).unwrap()).unwrap()
}

/// Rows of a terminated window as a sorted list, ignoring row order.
fn row_set(code: &ConvCode, blocks: usize) -> Vec<Vec<usize>> {
    code.materialize_window(0, blocks).unwrap().sorted_rows()
}

#[test]
fn tanner_unwrap_keeps_exponents() {
    for r in [29, 31, 48] {
        let d = tanner_unwrap(&tanner_qc(r).unwrap()).unwrap();
        assert_eq!(d.modulus(), None);
        for j in 0..3 {
            for i in 0..5 {
                assert_eq!(d.entry(j, i), &[TANNER_EXPONENTS[j][i]]);
            }
        }
        let code = ConvCode::from_tanner_poly(&d).unwrap();
        assert_eq!((code.m_s(), code.nu_s()), (28, 145));
    }
    let z = PolyMatrix::from_monomials(&[[0u32, 0], [0, 0]], Some(5)).unwrap();
    let zd = tanner_unwrap(&z).unwrap();
    assert_eq!(zd, z.with_modulus(None).unwrap());
    assert_eq!(ConvCode::from_tanner_poly(&zd).unwrap().m_s(), 0);
    assert_eq!(ti_code(&cyclic_example()).m_s(), 6);
    assert!(tanner_unwrap(&zd).is_err());
}

#[test]
fn wrap_examples() {
    assert_eq!(tanner_wrap(&[vec![], vec![]], 7).unwrap(), vec![Vec::<u32>::new(); 2]);
    assert_eq!(tanner_wrap(&[vec![7], vec![]], 7).unwrap(), vec![vec![0], vec![]]);
}

/// Terminated codewords of the unwrapped code, wrapped back, satisfy H_QC(X).
fn check_wrap(qc: &PolyMatrix, blocks: usize, samples: usize) {
    let r = qc.modulus().unwrap();
    let code = ti_code(qc);
    let h = qc.expand().unwrap();
    let w = code.materialize_window(0, blocks).unwrap();
    let basis = nullspace_basis(&w);
    assert!(!basis.is_empty());
    let mut g = rng(3);
    for s in 0..samples {
        // Basis vectors and random sums of them.
        let v: Vec<u8> = if s < basis.len() && s < samples / 2 {
            basis[s].clone()
        } else {
            let pick = random_dense(1, basis.len(), 0.5, &mut g).remove(0);
            let mut v = vec![0u8; w.cols()];
            for (b, &p) in basis.iter().zip(&pick) {
                if p == 1 {
                    v.iter_mut().zip(b).for_each(|(x, y)| *x ^= y);
                }
            }
            v
        };
        let vx = tanner_wrap(&stream_to_poly(&v, code.c()), r).unwrap();
        assert!(h.is_in_nullspace(&poly_to_bits(&vx, r).unwrap()).unwrap());
    }
}

#[test]
fn wrapped_conv_codewords_are_qc_codewords() {
    check_wrap(&cyclic_example(), 30, 40);
    check_wrap(&tanner_qc(31).unwrap(), 80, 40);
}

#[test]
fn memory_reduction_fixture() {
    let d = tanner_unwrap(&cyclic_example()).unwrap();
    let red = reduce_memory(&d).unwrap();
    let want = PolyMatrix::from_monomials(&[[0u32, 1, 3], [3, 2, 0]], None).unwrap();
    assert_eq!(red, want);
    let (a, b) = (ConvCode::from_tanner_poly(&d).unwrap(), ConvCode::from_tanner_poly(&red).unwrap());
    assert_eq!((a.m_s(), b.m_s()), (6, 3));
    assert_eq!((b.c(), b.b()), (3, 1));
    assert_eq!(row_set(&a, 30), row_set(&b, 30));
    // Already reduced rows stay put.
    assert_eq!(reduce_memory(&red).unwrap(), red);
}

#[test]
fn tanner_and_jfz_unwrappings_agree() {
    // A_0 / A_1: lower / strictly upper block triangle of the GCC2 matrix.
    let bbar = CoverSpec::from_poly(&cyclic_example(), CoverKind::Gcc2)
        .unwrap()
        .build()
        .unwrap()
        .matrix();
    let (lower, upper): (Vec<_>, Vec<_>) = bbar.entries().partition(|&(j, i)| i / 3 <= j / 2);
    let a0 = SparseBinMatrix::from_entries(14, 21, lower).unwrap();
    let a1 = SparseBinMatrix::from_entries(14, 21, upper).unwrap();
    let jfz = jfz_unwrap(&Decomposition::new(vec![a0, a1]).unwrap()).unwrap();
    let tanner = ti_code(&cyclic_example());
    let (wj, wt) = (jfz.materialize_window(0, 30).unwrap(), tanner.materialize_window(0, 210).unwrap());
    assert_eq!(wj.sorted_rows(), wt.sorted_rows());
    assert!(row_space_equal(&wj, &wt));
}

#[test]
fn seven_part_decomposition_is_the_tanner_code() {
    let exps = [[1u32, 2, 4], [6, 5, 3]];
    let mut parts = vec![SparseBinMatrix::zeros(2, 3); 7];
    for j in 0..2 {
        for i in 0..3 {
            let s = exps[j][i] as usize;
            parts[s] = SparseBinMatrix::from_entries(2, 3, [(j, i)]).unwrap();
        }
    }
    let code = jfz_unwrap(&Decomposition::new(parts.clone()).unwrap()).unwrap();
    let tanner = ti_code(&cyclic_example());
    for s in 0..7 {
        assert_eq!(code.block(s, 0), tanner.block(s, 0));
    }
    // Same code from a Toeplitz cover with one part per shift.
    let toeplitz: Vec<_> = (0..7)
        .filter(|&s| parts[s].nnz() > 0)
        .map(|s| (ProtoMatrix::from_binary(&parts[s]), PermSpec::ToeplitzShift(s)))
        .collect();
    let spec = CoverSpec::from_parts(2, 3, toeplitz, CoverKind::Gcc2).unwrap();
    let from_cover = from_toeplitz_cover(&spec).unwrap();
    assert_eq!(row_set(&from_cover, 20), row_set(&tanner, 20));
}

#[test]
fn diagonal_cut_of_the_5x10_matrix() {
    let h = proto_5x10();
    let (d, p) = jfz_diagonal_cut(&h, 1).unwrap();
    assert_eq!((p.c, p.b, p.m_s, p.period, p.nu_s()), (2, 1, 4, 5, 10));
    assert_eq!(d.sum().unwrap(), h);
    // Staircase: row j keeps columns below 2 (j + 1) in H_0.
    for (j, i) in d.parts()[0].entries() {
        assert!(i < 2 * (j + 1));
    }
    for (j, i) in d.parts()[1].entries() {
        assert!(i >= 2 * (j + 1));
    }
    let (code, _) = diagonal_cut_code(&h, 1).unwrap();
    let rep = code.params_report();
    assert_eq!((rep.m_s, rep.nu_s, rep.period), (4, 10, 5));
    // The periodic matrix keeps the row and column weights of H.
    assert!(code.period_col_degrees().iter().all(|&w| w == 3));
    let w = code.materialize_window(0, 25).unwrap();
    let full: Vec<usize> = w.row_weights();
    assert!(full[5..20].iter().all(|&x| x == 6));
    assert!(full[..4].iter().any(|&x| x < 6));
}

#[test]
fn cut_with_ell_eta_is_trivial() {
    let h = proto_5x10();
    let (d, p) = jfz_diagonal_cut(&h, 5).unwrap();
    assert_eq!(p.m_s, 0);
    assert_eq!(d.parts()[0], h);
    assert_eq!(d.parts()[1].nnz(), 0);
}

#[test]
fn large_cut_parameters() {
    let p = CutParams::new(1024, 2048, 1).unwrap();
    assert_eq!((p.c, p.b, p.m_s), (2, 1, 1023));
}

#[test]
fn random_cut_degree_profile_and_count() {
    let h = random_regular(6, 12, 3, 6, 5).unwrap();
    for seed in 0..5 {
        let code = jfz_unwrap(&jfz_random_cut(&h, seed)).unwrap();
        assert_eq!(code.period_col_degrees(), h.col_weights());
    }
    let small = SparseBinMatrix::from_dense(&[[1u8, 1, 0], [0, 1, 1]]).unwrap();
    let cuts: BTreeSet<Vec<Vec<usize>>> = (0..3000)
        .map(|s| jfz_random_cut(&small, s).parts()[0].support().to_vec())
        .collect();
    assert_eq!(cuts.len(), 1 << small.nnz());
}

#[test]
fn single_part_decomposition_is_block_diagonal() {
    let h = proto_5x10();
    let code = jfz_unwrap(&Decomposition::new(vec![h.clone()]).unwrap()).unwrap();
    assert_eq!(code.m_s(), 0);
    let w = code.materialize_window(0, 3).unwrap();
    assert_eq!(w.nnz(), 3 * h.nnz());
    assert_eq!(gf2_rank(&w), 3 * gf2_rank(&h));
}

#[test]
fn padding_enables_a_cut() {
    let h = SparseBinMatrix::from_dense(&[[1u8, 1, 0, 1, 0], [0, 1, 1, 0, 1], [1, 0, 1, 1, 1]]).unwrap();
    assert!(CutParams::new(3, 5, 2).is_err());
    let (p, mask) = pad_for_cut(&h, &[5]).unwrap();
    let cut = CutParams::new(p.rows(), p.cols(), 3).unwrap();
    assert_eq!(cut.eta, 3);
    assert_eq!(mask.iter().filter(|&&b| b).count(), 1);
    assert!(mask[5]);
    // Information bits counted over the real positions only.
    let real = mask.iter().filter(|&&b| !b).count();
    assert_eq!(real - gf2_rank(&p), h.cols() - gf2_rank(&h));
}

fn arb_monomials() -> impl Strategy<Value = Vec<Vec<u32>>> {
    (1usize..4, 2usize..5).prop_flat_map(|(m, n)| prop::collection::vec(prop::collection::vec(0u32..9, n), m))
}

proptest! {
    #[test]
    fn reduction_zeroes_row_minima_and_keeps_the_code(exps in arb_monomials()) {
        let p = PolyMatrix::from_monomials(&exps, None).unwrap();
        let red = reduce_memory(&p).unwrap();
        for j in 0..red.rows() {
            prop_assert_eq!(red.row_exponents(j).min(), Some(0));
        }
        if exps.len() < exps[0].len() {
            let (a, b) = (ConvCode::from_tanner_poly(&p).unwrap(), ConvCode::from_tanner_poly(&red).unwrap());
            prop_assert!(b.m_s() <= a.m_s());
            prop_assert_eq!(row_set(&a, 12), row_set(&b, 12));
        }
    }

    #[test]
    fn diagonal_cut_parts_sum_to_h(seed in any::<u64>(), ell in prop::sample::select(vec![1usize, 2, 3, 6])) {
        let h = random_regular(6, 12, 3, 6, seed).unwrap();
        let (d, p) = jfz_diagonal_cut(&h, ell).unwrap();
        prop_assert_eq!(d.sum().unwrap(), h.clone());
        let (code, _) = diagonal_cut_code(&h, ell).unwrap();
        prop_assert_eq!(code.nu_s(), 12);
        prop_assert_eq!((code.c(), code.b(), code.period()), (p.c, p.b, p.period));
        // One period of the unwrapped matrix has the columns of H.
        prop_assert_eq!(code.period_col_degrees(), h.col_weights());
    }
}
