
use ldpc_conv::analysis::{cycle_spectrum, girth};
use ldpc_conv::codes::{cyclic_example, tanner_qc, TANNER_EXPONENTS};
use ldpc_conv::cover::{
    kron_perm, kron_perm_left, per_entry_decomposition, validate_cover, CoverKind, CoverSpec, PermSpec, ProtoMatrix,
    Projection,
};
use ldpc_conv::SparseBinMatrix;
use proptest::prelude::*;

fn dense_perm(p: &PermSpec) -> Vec<Vec<u32>> {
    let r = p.size().unwrap();
    let mut m = vec![vec![0u32; r]; r];
    for j in 0..r {
        m[j][p.image(j).unwrap()] = 1;
    }
    m
}

fn dense_kron(a: &[Vec<u32>], b: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let (ar, ac, br, bc) = (a.len(), a[0].len(), b.len(), b[0].len());
    let mut out = vec![vec![0u32; ac * bc]; ar * br];
    for j in 0..ar {
        for i in 0..ac {
            for k in 0..br {
                for l in 0..bc {
                    out[j * br + k][i * bc + l] = a[j][i] * b[k][l];
                }
            }
        }
    }
    out
}

fn proto_dense(a: &ProtoMatrix) -> Vec<Vec<u32>> {
    (0..a.rows()).map(|j| (0..a.cols()).map(|i| a.get(j, i)).collect()).collect()
}

fn ones(rows: usize, cols: usize) -> ProtoMatrix {
    ProtoMatrix::from_rows(&vec![vec![1u32; cols]; rows]).unwrap()
}

fn cyclic_spec(kind: CoverKind) -> CoverSpec {
    let a = ones(2, 3);
    let shifts = [1usize, 2, 4, 6, 5, 3];
    let parts = per_entry_decomposition(&a)
        .into_iter()
        .zip(shifts)
        .map(|(p, s)| (p, PermSpec::CirculantShift { s, r: 7 }))
        .collect();
    CoverSpec::new(a, parts, kind).unwrap()
}

#[test]
fn single_shift_is_one_cycle() {
    let p = PermSpec::CirculantShift { s: 2, r: 5 };
    let m = kron_perm(&ones(1, 1), &p).unwrap().to_support();
    assert!(m.row_weights().iter().all(|&w| w == 1) && m.col_weights().iter().all(|&w| w == 1));
    let mut k = 0;
    for step in 1..=5 {
        k = m.row(k)[0];
        assert_eq!(k == 0, step == 5);
    }
}

#[test]
fn gcc1_gives_the_cyclic_example() {
    let cover = cyclic_spec(CoverKind::Gcc1).build().unwrap();
    assert_eq!(cover.matrix(), cyclic_example().expand().unwrap());
    assert!(cover.parallel_edges().is_empty());
}

#[test]
fn gcc2_gives_block_circulant() {
    let bbar = cyclic_spec(CoverKind::Gcc2).build().unwrap().matrix();
    let exps = [[1usize, 2, 4], [6, 5, 3]];
    for tau in 0..7 {
        for kappa in 0..7 {
            let d = (tau + 7 - kappa) % 7;
            for j in 0..2 {
                for i in 0..3 {
                    assert_eq!(bbar.get(tau * 2 + j, kappa * 3 + i), exps[j][i] == d);
                }
            }
        }
    }
}

#[test]
fn single_shifted_identity_block() {
    let mut a = ProtoMatrix::zeros(2, 3);
    a.set(0, 0, 1);
    let m = kron_perm(&a, &PermSpec::CirculantShift { s: 1, r: 7 }).unwrap().to_support();
    assert_eq!((m.rows(), m.cols()), (14, 21));
    assert_eq!(m.nnz(), 7);
    for j in 0..7 {
        assert!(m.get(j, (j + 6) % 7));
    }
}

#[test]
fn identity_part_gives_disjoint_copies() {
    let a = ProtoMatrix::from_rows(&[[1u32, 0, 1], [1, 1, 0]]).unwrap();
    let base = SparseBinMatrix::from_dense(&[[1u8, 0, 1], [1, 1, 0]]).unwrap();
    let g1 = CoverSpec::new(a.clone(), vec![(a.clone(), PermSpec::Identity(4))], CoverKind::Gcc1)
        .unwrap()
        .build()
        .unwrap()
        .matrix();
    let g2 = CoverSpec::new(a.clone(), vec![(a.clone(), PermSpec::Identity(4))], CoverKind::Gcc2)
        .unwrap()
        .build()
        .unwrap()
        .matrix();
    // I ⊗ A is block diagonal.
    for c in 0..4 {
        for (j, i) in base.entries() {
            assert!(g2.get(c * 2 + j, c * 3 + i));
        }
    }
    assert_eq!(g2.nnz(), 4 * base.nnz());
    assert_eq!(g1.nnz(), 4 * base.nnz());
    assert_eq!(cycle_spectrum(&g1, 6).unwrap().counts, cycle_spectrum(&g2, 6).unwrap().counts);
}

#[test]
fn tanner_lift_is_column_regular() {
    let a = ones(3, 5);
    let parts = per_entry_decomposition(&a)
        .into_iter()
        .enumerate()
        .map(|(k, p)| {
            let s = TANNER_EXPONENTS[k / 5][k % 5] as usize;
            (p, PermSpec::CirculantShift { s, r: 31 })
        })
        .collect();
    let m = CoverSpec::new(a, parts, CoverKind::Gcc1).unwrap().build().unwrap().matrix();
    assert_eq!((m.rows(), m.cols()), (93, 155));
    assert!(m.col_weights().iter().all(|&w| w == 3));
    assert_eq!(m, tanner_qc(31).unwrap().expand().unwrap());
}

#[test]
fn multiplicity_against_dense_kronecker() {
    let a = ProtoMatrix::from_rows(&[[2u32, 1], [0, 1]]).unwrap();
    for p in [PermSpec::Identity(2), PermSpec::Explicit(vec![1, 0])] {
        let want = dense_kron(&proto_dense(&a), &dense_perm(&p));
        let got = kron_perm(&a, &p).unwrap();
        for (j, row) in want.iter().enumerate() {
            for (i, &v) in row.iter().enumerate() {
                assert_eq!(got.get(j, i), v);
            }
        }
        let want_left = dense_kron(&dense_perm(&p), &proto_dense(&a));
        let got_left = kron_perm_left(&p, &a).unwrap();
        for (j, row) in want_left.iter().enumerate() {
            for (i, &v) in row.iter().enumerate() {
                assert_eq!(got_left.get(j, i), v);
            }
        }
        assert_eq!(got.col_degrees(), vec![2, 2, 2, 2]);
        assert_eq!(got.parallel_edges().len(), 2);
    }
}

#[test]
fn canonical_projection_is_a_cover() {
    let base = SparseBinMatrix::from_dense(&[[1u8, 1, 1], [1, 1, 1]]).unwrap();
    let cover = cyclic_spec(CoverKind::Gcc1).build().unwrap();
    assert!(validate_cover(&base, &cover.matrix(), &cover.projection).unwrap());
    let cover2 = cyclic_spec(CoverKind::Gcc2).build().unwrap();
    assert!(validate_cover(&base, &cover2.matrix(), &cover2.projection).unwrap());
    assert!(validate_cover(&base, &base, &Projection::identity(2, 3)).unwrap());
}

#[test]
fn deleting_an_edge_breaks_the_cover() {
    let base = SparseBinMatrix::from_dense(&[[1u8, 1, 1], [1, 1, 1]]).unwrap();
    let cover = cyclic_spec(CoverKind::Gcc1).build().unwrap();
    let h = cover.matrix();
    let first = h.entries().next().unwrap();
    let cut = SparseBinMatrix::from_entries(h.rows(), h.cols(), h.entries().filter(|&e| e != first)).unwrap();
    assert!(!validate_cover(&base, &cut, &cover.projection).unwrap());
}

#[test]
fn per_entry_parts() {
    let parts = per_entry_decomposition(&ones(2, 3));
    assert_eq!(parts.len(), 6);
    assert!(parts.iter().all(|p| p.nonzeros().count() == 1));
    assert!(per_entry_decomposition(&ProtoMatrix::zeros(2, 2)).is_empty());
    let a = ProtoMatrix::from_rows(&[[3u32, 0], [1, 1]]).unwrap();
    let parts = per_entry_decomposition(&a);
    assert_eq!(parts.len(), 3);
    assert_eq!(parts[0].get(0, 0), 3);
    let mut sum = ProtoMatrix::zeros(2, 2);
    for p in &parts {
        for (j, i, v) in p.nonzeros() {
            sum.set(j, i, sum.get(j, i) + v);
        }
    }
    assert_eq!(sum, a);
}

#[test]
fn parts_file_round_trip() {
    let spec = cyclic_spec(CoverKind::Gcc2);
    let back: CoverSpec = spec.to_string().parse().unwrap();
    assert_eq!(back, spec);
}

/// Random 0/1 proto plus one random permutation per nonzero entry.
fn arb_spec() -> impl Strategy<Value = (ProtoMatrix, Vec<PermSpec>)> {
    (1usize..4, 2usize..5, 2usize..6).prop_flat_map(|(m, n, r)| {
        (
            prop::collection::vec(prop::bool::weighted(0.7), m * n),
            prop::collection::vec(Just((0..r).collect::<Vec<usize>>()).prop_shuffle(), m * n),
        )
            .prop_map(move |(bits, perms)| {
                let mut a = ProtoMatrix::zeros(m, n);
                for (k, &b) in bits.iter().enumerate() {
                    if b {
                        a.set(k / n, k % n, 1);
                    }
                }
                let perms = perms.into_iter().take(a.nonzeros().count()).map(PermSpec::Explicit).collect();
                (a, perms)
            })
    })
}

fn build_spec(a: &ProtoMatrix, perms: &[PermSpec], kind: CoverKind) -> Option<CoverSpec> {
    let parts: Vec<_> = per_entry_decomposition(a).into_iter().zip(perms.iter().cloned()).collect();
    if parts.is_empty() {
        return None;
    }
    Some(CoverSpec::new(a.clone(), parts, kind).unwrap())
}

proptest! {
    #[test]
    fn degrees_are_replicated((a, perms) in arb_spec()) {
        let Some(spec) = build_spec(&a, &perms, CoverKind::Gcc1) else { return Ok(()) };
        let r = spec.degree().unwrap();
        let cover = spec.build().unwrap();
        let cols: Vec<usize> = a.col_degrees().iter().flat_map(|&d| std::iter::repeat(d).take(r)).collect();
        let rows: Vec<usize> = a.row_degrees().iter().flat_map(|&d| std::iter::repeat(d).take(r)).collect();
        prop_assert_eq!(cover.counts.col_degrees(), cols);
        prop_assert_eq!(cover.counts.row_degrees(), rows);
    }

    #[test]
    fn gcc1_and_gcc2_are_isomorphic_covers((a, perms) in arb_spec()) {
        let Some(s1) = build_spec(&a, &perms, CoverKind::Gcc1) else { return Ok(()) };
        let s2 = build_spec(&a, &perms, CoverKind::Gcc2).unwrap();
        let (c1, c2) = (s1.build().unwrap(), s2.build().unwrap());
        let base = SparseBinMatrix::from_entries(a.rows(), a.cols(), a.nonzeros().map(|(j, i, _)| (j, i))).unwrap();
        prop_assert!(validate_cover(&base, &c1.matrix(), &c1.projection).unwrap());
        prop_assert!(validate_cover(&base, &c2.matrix(), &c2.projection).unwrap());
        let (h1, h2) = (c1.matrix(), c2.matrix());
        prop_assert_eq!(girth(&h1), girth(&h2));
        if let Some(g) = girth(&h1) {
            prop_assert_eq!(cycle_spectrum(&h1, 2 * g - 2).unwrap().counts, cycle_spectrum(&h2, 2 * g - 2).unwrap().counts);
        }
        // Covers never shorten the shortest cycle.
        match (girth(&base), girth(&h1)) {
            (Some(gb), Some(gc)) => prop_assert!(gc >= gb),
            (None, Some(_)) => prop_assert!(false, "cover of a forest has a cycle"),
            _ => {}
        }
    }

    #[test]
    fn stride_permutation_maps_gcc1_onto_gcc2((a, perms) in arb_spec()) {
        // Row j r + k of the GCC1 matrix is row k m + j of the GCC2 matrix,
        // and likewise for columns.
        let Some(s1) = build_spec(&a, &perms, CoverKind::Gcc1) else { return Ok(()) };
        let s2 = build_spec(&a, &perms, CoverKind::Gcc2).unwrap();
        let (m, n, r) = (a.rows(), a.cols(), s1.degree().unwrap());
        let h1 = s1.build().unwrap().matrix();
        let moved = SparseBinMatrix::from_entries(
            m * r,
            n * r,
            h1.entries().map(|(j, i)| ((j % r) * m + j / r, (i % r) * n + i / r)),
        )
        .unwrap();
        prop_assert_eq!(moved, s2.build().unwrap().matrix());
    }
}
