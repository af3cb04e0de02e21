mod common;

use std::collections::BTreeSet;

use unital::cyclotomic::rat;
use unital::{
    conjecture_report_for, enumerate_with, orbit_decompose, orbit_decompose_with, totient,
    values_of, CycField, CycNum, EnumerateOptions, P1Value, SymmetryGroup,
};

fn fin(c: CycNum) -> P1Value {
    P1Value::Finite(c)
}

fn sizes(n: u32, group: SymmetryGroup) -> Vec<usize> {
    let mut s: Vec<_> = orbit_decompose_with(common::set(n), group)
        .unwrap()
        .iter()
        .map(|o| o.size)
        .collect();
    s.sort_unstable();
    s
}

#[test]
fn counts() {
    let got: Vec<_> = (1..=4).map(|n| common::set(n).len()).collect();
    assert_eq!(got, [6, 36, 84, 252]);
}

#[test]
fn u1_keys_match_golden_file() {
    let golden: Vec<&str> = include_str!("golden/u1_keys.txt").lines().collect();
    let keys: Vec<&str> = common::set(1).keys().map(String::as_str).collect();
    assert_eq!(keys, golden);
}

#[test]
fn worker_count_does_not_change_the_result() {
    let base: Vec<String> = common::set(3).keys().cloned().collect();
    for jobs in [1, 2, 3] {
        let opts = EnumerateOptions {
            jobs: Some(jobs),
            exhaustive: false,
        };
        let keys: Vec<String> = enumerate_with(3, &opts).keys().cloned().collect();
        assert_eq!(keys, base, "jobs = {jobs}");
    }
}

#[test]
fn value_set_of_u2() {
    let f = CycField::new(2);
    let expected: BTreeSet<P1Value> = [
        fin(CycNum::zero(&f)),
        fin(CycNum::one(&f)),
        fin(CycNum::from_int(&f, -1)),
        fin(CycNum::from_int(&f, 2)),
        fin(CycNum::from_rat(&f, rat(1, 2))),
        P1Value::Infinity,
    ]
    .into_iter()
    .collect();
    assert_eq!(values_of(common::set(2)), expected);
}

#[test]
fn value_set_of_u3() {
    let f = CycField::new(3);
    let one = CycNum::one(&f);
    let u = CycNum::root_of_unity(&f, 1);
    let ub = CycNum::root_of_unity(&f, 2);
    let mut expected: BTreeSet<P1Value> = [P1Value::Infinity].into_iter().collect();
    for c in [
        CycNum::zero(&f),
        one.clone(),
        u.clone(),
        -&u,
        ub.clone(),
        -&ub,
        &one + &u,
        &one - &u,
        &one + &ub,
        &one - &ub,
        (&one - &u).inv().unwrap(),
        (&one - &ub).inv().unwrap(),
    ] {
        expected.insert(fin(c));
    }
    assert_eq!(expected.len(), 11);
    assert_eq!(values_of(common::set(3)), expected);
}

#[test]
fn value_set_of_u4() {
    let f = CycField::new(4);
    let one = CycNum::one(&f);
    let i = CycNum::root_of_unity(&f, 1);
    let half = rat(1, 2);
    let mut expected: BTreeSet<P1Value> = [P1Value::Infinity].into_iter().collect();
    for c in [
        CycNum::zero(&f),
        one.clone(),
        CycNum::from_int(&f, -1),
        CycNum::from_int(&f, 2),
        CycNum::from_rat(&f, half.clone()),
        i.clone(),
        -&i,
        &one + &i,
        &one - &i,
        (&one + &i).scale(&half),
        (&one - &i).scale(&half),
    ] {
        expected.insert(fin(c));
    }
    assert_eq!(values_of(common::set(4)), expected);
}

#[test]
fn conjecture_holds_through_four() {
    for (n, card, bound) in [(1, 3, 3), (2, 6, 6), (3, 11, 15), (4, 12, 12)] {
        let r = conjecture_report_for(n, common::set(n));
        assert!(r.matches, "N = {n}");
        assert_eq!((r.cardinality, r.bound), (card, bound));
        assert!(r.bound_holds);
        assert!(r.missing_from_computed.is_empty() && r.extra_in_computed.is_empty());
        assert_eq!(r.note.is_some(), n == 1);
    }
}

#[test]
fn orbits_partition_and_are_closed() {
    for n in 1..=4 {
        let set = common::set(n);
        let orbits = orbit_decompose(set).unwrap();
        let order = 6 * n as usize * totient(n) as usize;
        let mut seen = BTreeSet::new();
        for o in &orbits {
            assert_eq!(o.size, o.members.len());
            assert_eq!(
                order % o.size,
                0,
                "orbit size {} does not divide {order}",
                o.size
            );
            assert_eq!(o.members.first(), Some(&o.generator.canonical_key()));
            for m in &o.members {
                assert!(seen.insert(m.clone()), "{m} in two orbits");
                let f = set.get(m).unwrap();
                for g in unital::enumerate::symmetry_images(f).unwrap() {
                    assert!(o.members.contains(&g.canonical_key()));
                }
            }
        }
        assert_eq!(seen.len(), set.len());
        let gens: Vec<_> = orbits.iter().map(|o| o.generator.canonical_key()).collect();
        let mut sorted = gens.clone();
        sorted.sort();
        assert_eq!(gens, sorted);
    }
}

#[test]
fn orbit_sizes_under_each_group() {
    use SymmetryGroup::*;
    assert_eq!(sizes(1, Rotations), [6]);
    assert_eq!(sizes(2, Rotations), [6, 6, 6, 6, 12]);
    assert_eq!(sizes(2, WithInversion), [6, 6, 12, 12]);
    assert_eq!(sizes(3, Rotations), [6, 6, 18, 18, 18, 18]);
    assert_eq!(
        sizes(4, Rotations),
        [6, 6, 6, 6, 12, 12, 12, 12, 12, 12, 12, 24, 24, 24, 24, 24, 24]
    );
    assert_eq!(sizes(4, PointSymmetries), [6, 18, 36, 36, 36, 48, 72]);
}

#[test]
fn point_symmetry_count() {
    let counts: Vec<_> = (1..=4)
        .map(|n| unital::point_symmetries(&CycField::new(n)).len())
        .collect();
    assert_eq!(counts, [6, 8, 6, 24]);
}
