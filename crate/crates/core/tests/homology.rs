use kosz::homology::{duality_partner, GlIndex, HomologyEngine};
use kosz::{FieldSpec, RingParams};

fn engine(n: usize, c: u32, field: FieldSpec) -> HomologyEngine {
    HomologyEngine::new(RingParams::new(n, c).unwrap(), field)
}

#[test]
fn n3_c3_entries() {
    let e = engine(3, 3, FieldSpec::multi_prime(3, 7));
    assert_eq!(e.homology_dim(0, 1).unwrap().dim, 3);
    assert_eq!(e.homology_dim(1, 4).unwrap().dim, 15);
    assert_eq!(e.homology_dim(2, 8).unwrap().dim, 105);
    assert_eq!(e.homology_dim(3, 12).unwrap().dim, 189);
    assert_eq!(e.homology_dim(7, 27).unwrap().dim, 1);
    assert_eq!(e.betti(0, 1, 2).unwrap(), 27);
    assert_eq!(e.betti(0, 0, 0).unwrap(), 1);
    assert_eq!(e.disagreements(), 0);
}

#[test]
fn fast_path_agrees_with_direct() {
    let e = engine(3, 3, FieldSpec::exact());
    for t in 0..=7 {
        for j in 0..=7 {
            let d = 3 * t as u32 + j;
            assert_eq!(e.homology_dim_fast(t, d).unwrap(), e.homology_dim(t, d).unwrap().dim);
        }
    }
}

#[test]
fn duality_corners() {
    let e = engine(3, 3, FieldSpec::exact());
    let p = *e.params();
    assert_eq!(duality_partner(&p, 0, 0), Some((7, 27)));
    assert_eq!(e.homology_dim(0, 0).unwrap().dim, e.homology_dim(7, 27).unwrap().dim);
    assert_eq!(duality_partner(&p, 1, 4), Some((6, 23)));
    assert_eq!(e.homology_dim(6, 23).unwrap().dim, 15);
}

#[test]
fn veronese_module_example() {
    let e = engine(2, 2, FieldSpec::exact());
    assert_eq!(e.betti(1, 1, 1).unwrap(), 2);
    let table = e.betti_table(0, 1).unwrap();
    assert_eq!(table.entries[&(0, 0)], 1);
    assert!(table.entries.iter().filter(|(k, _)| k.0 == 0 && k.1 > 0).all(|(_, &v)| v == 0));
}

#[test]
fn index_examples() {
    let e = engine(3, 3, FieldSpec::exact());
    assert!(matches!(e.gl_index(7).unwrap(), GlIndex::Exact { value: 6, witness: (7, 9, 1), .. }));
    let e = engine(4, 2, FieldSpec::exact());
    assert!(matches!(e.gl_index(6).unwrap(), GlIndex::Exact { value: 5, .. }));
    for c in 2..=4 {
        let e = engine(2, c, FieldSpec::exact());
        let top = e.params().top_degree();
        assert_eq!(e.gl_index(top).unwrap(), GlIndex::AtLeast { i_max: top });
    }
    assert!(engine(3, 2, FieldSpec::exact()).gl_index(9).is_err());
}

#[test]
fn index_lower_bound_c_plus_one() {
    for (n, c) in [(3, 2), (3, 3), (4, 2)] {
        let e = engine(n, c, FieldSpec::exact());
        let top = e.params().top_degree();
        let value = match e.gl_index(top).unwrap() {
            GlIndex::Exact { value, .. } => value,
            GlIndex::AtLeast { i_max } => i_max,
        };
        assert!(value >= c as usize + 1, "n={n} c={c}: {value}");
        if c >= 3 {
            assert!(value <= 3 * c as usize - 3);
        }
    }
}

#[test]
fn characteristic_three_support() {
    let e = engine(7, 2, FieldSpec::prime(3).unwrap());
    let h = e.homology_dim(2, 7).unwrap();
    assert_eq!(h.dim, 1);
    assert_eq!(h.support.len(), 1);
    assert_eq!(h.support[0].representative, vec![1; 7]);
    assert_eq!(engine(7, 2, FieldSpec::exact()).homology_dim(2, 7).unwrap().dim, 0);
    // the drop happens in d_3; d_2 keeps its rank
    let alpha = kosz::ExponentVec::new(vec![1; 7]);
    let q = engine(7, 2, FieldSpec::exact());
    assert_eq!(e.block_rank(2, &alpha).unwrap(), q.block_rank(2, &alpha).unwrap());
    assert_eq!(e.block_rank(3, &alpha).unwrap() + 1, q.block_rank(3, &alpha).unwrap());
}

#[test]
fn chardep_finds_three() {
    let e = engine(7, 2, FieldSpec::exact());
    let report = e.chardep_scan(2, 7, 7).unwrap();
    assert!(report.primes.contains(&3));
    let e = engine(3, 2, FieldSpec::exact());
    let report = e.chardep_scan(2, 0, 6).unwrap();
    assert!(report.blocks_scanned > 0);
}

#[test]
fn threads_do_not_change_results() {
    let params = RingParams::new(3, 3).unwrap();
    let one = HomologyEngine::with_options(
        params,
        FieldSpec::exact(),
        kosz::homology::EngineOptions {
            threads: Some(1),
            ..Default::default()
        },
    );
    let four = HomologyEngine::with_options(
        params,
        FieldSpec::exact(),
        kosz::homology::EngineOptions {
            threads: Some(4),
            ..Default::default()
        },
    );
    assert_eq!(
        one.homology_window(7, 7).unwrap().entries,
        four.homology_window(7, 7).unwrap().entries
    );
}
