use std::collections::BTreeSet;
use std::sync::Arc;

use unitary_graphs::gf::{Elem, Field};
use unitary_graphs::hermitian::Unital;

/// The form -x x̄ + y z̄ + z ȳ, evaluated with powers instead of the library's conjugation.
fn form(f: &Field, u: &[Elem; 3], v: &[Elem; 3]) -> Elem {
    let q = f.q() as i64;
    let bar = |a: Elem| f.pow(a, q);
    let t0 = f.neg(f.mul(u[0], bar(v[0])));
    let t1 = f.mul(u[1], bar(v[2]));
    let t2 = f.mul(u[2], bar(v[1]));
    f.add(t0, f.add(t1, t2))
}

fn proportional(f: &Field, u: &[Elem; 3], v: &[Elem; 3]) -> bool {
    f.nonzero().any(|s| (0..3).all(|i| f.mul(s, u[i]) == v[i]))
}

#[test]
fn points_and_lines_from_first_principles() {
    for (p, e) in [(3, 1), (2, 2)] {
        let f = Arc::new(Field::new(p, e).unwrap());
        let u = Unital::build(f.clone()).unwrap();
        let q = f.q() as usize;

        for pt in u.points() {
            assert!(form(&f, pt, pt).is_zero());
        }
        for (i, a) in u.points().iter().enumerate() {
            for b in &u.points()[i + 1..] {
                assert!(!proportional(&f, a, b));
            }
        }
        assert_eq!(u.points().len(), q * q * q + 1);

        // A secant line meets the unital in the points orthogonal to its pole.
        let mut seen = BTreeSet::new();
        for line in u.lines() {
            let on: BTreeSet<u32> = (0..u.num_points() as u32)
                .filter(|&i| {
                    let pt = u.point(i);
                    let d = line.dual;
                    f.add(
                        f.mul(d[0], pt[0]),
                        f.add(f.mul(d[1], pt[1]), f.mul(d[2], pt[2])),
                    )
                    .is_zero()
                })
                .collect();
            assert_eq!(on.len(), q + 1);
            assert_eq!(on, line.points.iter().copied().collect());
            assert!(seen.insert(line.points.clone()));
        }
        assert_eq!(u.lines().len(), q * q * (q * q - q + 1));

        for a in 0..u.num_points() as u32 {
            assert_eq!(u.lines_on(a).len(), q * q);
            for b in a + 1..u.num_points() as u32 {
                let through: Vec<_> = u
                    .lines()
                    .iter()
                    .filter(|l| l.points.contains(&a) && l.points.contains(&b))
                    .collect();
                assert_eq!(through.len(), 1);
            }
        }
    }
}

#[test]
fn flags_are_point_major_blocks() {
    let f = Arc::new(Field::new(3, 1).unwrap());
    let u = Unital::build(f).unwrap();
    let bs = u.block_size();
    assert_eq!(bs, 9);
    for (i, flag) in u.flags().iter().enumerate() {
        assert_eq!(flag.point as usize, i / bs);
        assert!(u.line(flag.line).points.contains(&flag.point));
        assert_eq!(u.flag_of(flag.point, flag.line), Some(i as u32));
        assert_eq!(u.block_of(i as u32), flag.point);
    }
}

#[test]
fn canonical_objects_reject_zero() {
    let f = Arc::new(Field::new(3, 1).unwrap());
    let u = Unital::build(f).unwrap();
    assert!(u.canonical_objects(Elem::ZERO).is_err());
    let c = u.canonical_objects(Elem::ONE).unwrap();
    assert_ne!(c.infinity, c.zero);
    assert!(u.line(c.l).points.contains(&c.infinity));
}
