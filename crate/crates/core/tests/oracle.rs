mod common;

use common::{chi_square_sf, free_excess, kernel_gap_brute, NaiveCounts};
use fodensity::counting::atom_kernel_gap;
use fodensity::enumerate::enumerate;
use fodensity::{Connective, CountTable, Openness, Signature, Template};
use num_bigint::BigUint;
use num_rational::BigRational;

fn bounds() -> Vec<Openness> {
    let mut b: Vec<_> = (0..=4).map(Openness::AtMost).collect();
    b.push(Openness::Any);
    b
}

fn check_against_enumeration(sig: &Signature, max_n: usize) {
    let table = CountTable::build(max_n, sig);
    for n in 0..=max_n {
        let all = enumerate(n, Openness::Any, sig).unwrap();
        for bound in bounds() {
            let by_scope = all
                .iter()
                .filter(|f| match bound {
                    Openness::AtMost(m) => free_excess(f) <= m,
                    Openness::Any => true,
                })
                .count();
            let listed = enumerate(n, bound, sig).unwrap().len();
            let dp = table.count(bound, n).unwrap();
            assert_eq!(listed, by_scope, "n={n} m={bound}");
            assert_eq!(*dp, BigUint::from(by_scope), "n={n} m={bound}");
        }
    }
}

#[test]
fn standard_signature_matches_enumeration() {
    check_against_enumeration(&Signature::standard(), 12);
}

#[test]
fn nand_signature_matches_enumeration() {
    check_against_enumeration(&Signature::nand(), 10);
}

#[test]
fn weighted_signature_matches_enumeration() {
    let sig = Signature::with_weights(
        vec![Connective::new("ite", 3, 2), Connective::new("not", 1, 1)],
        2,
        2,
        1,
        1,
    )
    .unwrap();
    check_against_enumeration(&sig, 13);
}

#[test]
fn first_values_by_enumeration() {
    let sig = Signature::standard();
    let all: Vec<usize> = (3..=7)
        .map(|n| enumerate(n, Openness::Any, &sig).unwrap().len())
        .collect();
    assert_eq!(all, [1, 5, 18, 58, 181]);
    let closed: Vec<usize> = (4..=7)
        .map(|n| enumerate(n, Openness::AtMost(0), &sig).unwrap().len())
        .collect();
    assert_eq!(closed, [2, 8, 34, 124]);
}

#[test]
fn table_matches_plain_recurrence() {
    for sig in [Signature::standard(), Signature::nand()] {
        let n_max = 60;
        let table = CountTable::build(n_max, &sig);
        let mut naive = NaiveCounts::new(&sig);
        for n in 0..=n_max {
            assert_eq!(table.infinity()[n], naive.count(n, None));
            for m in 0..=n + 1 {
                assert_eq!(
                    table.count(Openness::AtMost(m), n).unwrap(),
                    &naive.count(n, Some(m)),
                    "m={m} n={n}"
                );
            }
        }
    }
}

#[test]
fn partial_tables_match_full_tables() {
    let sig = Signature::standard();
    let full = CountTable::build(80, &sig);
    let part = CountTable::with_rows(80, 5, &sig);
    for m in 0..=5 {
        assert_eq!(part.row(Openness::AtMost(m)), full.row(Openness::AtMost(m)));
    }
    assert!(part.row(Openness::AtMost(6)).is_none());
}

#[test]
fn kernel_gap_matches_brute_force() {
    let sig = Signature::standard();
    for n in 0..=60 {
        for m in 0..=60 {
            assert_eq!(
                atom_kernel_gap(n, m, &sig),
                BigUint::from(kernel_gap_brute(n, m, &sig))
            );
        }
    }
}

#[test]
fn template_densities_match_enumeration() {
    let sig = Signature::standard();
    let table = CountTable::build(10, &sig);
    for text in [
        "(exists (forall _))",
        "(forall _)",
        "(and _ (exists (in 0 0)))",
        "(exists (or (in 0 0) _))",
    ] {
        let t = Template::parse(text, &sig).unwrap();
        for n in 4..=10 {
            let sentences = enumerate(n, Openness::AtMost(0), &sig).unwrap();
            let hits = sentences.iter().filter(|f| t.matches(f)).count();
            let expected = BigRational::new(hits.into(), sentences.len().into());
            assert_eq!(
                fodensity::density::template_density_exact(&t, n, &table).unwrap(),
                expected,
                "{text} n={n}"
            );
        }
    }
}

#[test]
fn chi_square_tail_reference_points() {
    // published upper 0.001 points
    assert!((chi_square_sf(63.870, 33) - 0.001).abs() < 2e-6);
    assert!((chi_square_sf(65.247, 34) - 0.001).abs() < 2e-6);
    assert!((chi_square_sf(10.828, 1) - 0.001).abs() < 2e-6);
}
