mod common;

use ogclab_core::complex::euler_characteristic;
use ogclab_core::enumerate::Flavor;

/// Nonzero Betti numbers by cohomological degree, computed once with the
/// dense oracle and frozen.
const FROZEN: &[((u32, usize), &[(i64, usize)])] = &[
    ((0, 3), &[(-1, 1)]),
    ((0, 4), &[(0, 2)]),
    ((0, 5), &[(1, 6)]),
    ((1, 1), &[(0, 1)]),
    ((1, 2), &[]),
    ((1, 3), &[(2, 1)]),
    ((2, 1), &[]),
];

#[test]
fn both_flavors_reproduce_frozen_tables() {
    for &((g, n), expected) in FROZEN {
        for flavor in [Flavor::Marked, Flavor::Oriented] {
            let c = common::complex(flavor, g, n);
            let t = common::table(&c);
            assert_eq!(common::hc_betti(&t), expected, "{flavor:?} ({g},{n})");
            let (basis, cohomology) = euler_characteristic(&c, &t).unwrap();
            assert_eq!(basis, cohomology);
        }
    }
}

#[test]
fn marked_tables_in_higher_genus() {
    for ((g, n), expected) in [
        ((1, 4), vec![(3, 3)]),
        ((2, 2), vec![(4, 1)]),
        ((3, 1), vec![(5, 1)]),
        ((3, 0), vec![(5, 1)]),
        ((2, 0), vec![]),
    ] {
        let c = common::complex(Flavor::Marked, g, n);
        assert_eq!(common::hc_betti(&common::table(&c)), expected, "({g},{n})");
    }
}

#[test]
fn smallest_pair_has_one_generator_per_flavor() {
    let m = common::complex(Flavor::Marked, 1, 1);
    let o = common::complex(Flavor::Oriented, 1, 1);
    assert_eq!((m.dim(1), o.dim(2)), (1, 1));
    assert!(m.differential(1).is_zero() && o.differential(2).is_zero());
    assert_eq!(common::table(&m).betti(1), 1);
    assert_eq!(common::table(&o).betti(2), 1);
}

#[test]
fn no_markings_leaves_the_oriented_complex_empty() {
    let o = common::complex(Flavor::Oriented, 2, 0);
    assert!(o.catalog().is_empty());
    let o = common::complex(Flavor::Oriented, 3, 0);
    assert!(o.catalog().is_empty());
}
