//! Semilinear maps preserving the Hermitian form, their action on the unital,
//! and breadth-first orbit closure with witnesses.
//!
//! A map is a pair (M, m) acting on coordinates as v ↦ M·ψ^m(v), where ψ is
//! the Frobenius automorphism applied entrywise. Composition follows from
//! that convention: (M₁, m₁)∘(M₂, m₂) = (M₁·ψ^{m₁}(M₂), m₁ + m₂ mod 2e).

use std::hash::Hash;

use indexmap::IndexMap;
use serde::Serialize;
use thiserror::Error;

use crate::gf::{Elem, Field, FieldError};
use crate::hermitian::{Flag, Unital, Vec3};

pub type Matrix3 = [[Elem; 3]; 3];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("parameter constraint violated: {0}")]
    Constraint(String),
    #[error("matrix is singular")]
    Singular,
    #[error("image of {0} is not an object of the unital; the map is not unitary")]
    ImageNotFound(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SemilinearMap {
    pub matrix: Matrix3,
    /// Frobenius exponent m in [0, 2e).
    pub frob: u32,
}

fn mat_mul(f: &Field, a: &Matrix3, b: &Matrix3) -> Matrix3 {
    let mut out = [[Elem::ZERO; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let mut acc = Elem::ZERO;
            for k in 0..3 {
                acc = f.add(acc, f.mul(a[i][k], b[k][j]));
            }
            *cell = acc;
        }
    }
    out
}

fn mat_frob(f: &Field, a: &Matrix3, m: u32) -> Matrix3 {
    a.map(|row| row.map(|x| f.frobenius_p(x, m)))
}

fn mat_vec(f: &Field, a: &Matrix3, v: &Vec3) -> Vec3 {
    a.map(|row| {
        f.add(
            f.add(f.mul(row[0], v[0]), f.mul(row[1], v[1])),
            f.mul(row[2], v[2]),
        )
    })
}

fn det(f: &Field, a: &Matrix3) -> Elem {
    let minor = |r1: usize, r2: usize, c1: usize, c2: usize| {
        f.sub(f.mul(a[r1][c1], a[r2][c2]), f.mul(a[r1][c2], a[r2][c1]))
    };
    let t0 = f.mul(a[0][0], minor(1, 2, 1, 2));
    let t1 = f.mul(a[0][1], minor(1, 2, 0, 2));
    let t2 = f.mul(a[0][2], minor(1, 2, 0, 1));
    f.add(f.sub(t0, t1), t2)
}

fn mat_inv(f: &Field, a: &Matrix3) -> Result<Matrix3, GroupError> {
    let d = det(f, a);
    if d.is_zero() {
        return Err(GroupError::Singular);
    }
    let d_inv = f.inv(d)?;
    let mut out = [[Elem::ZERO; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            // Cofactor of a[j][i].
            let rows: Vec<usize> = (0..3).filter(|&r| r != j).collect();
            let cols: Vec<usize> = (0..3).filter(|&c| c != i).collect();
            let m = f.sub(
                f.mul(a[rows[0]][cols[0]], a[rows[1]][cols[1]]),
                f.mul(a[rows[0]][cols[1]], a[rows[1]][cols[0]]),
            );
            let signed = if (i + j) % 2 == 0 { m } else { f.neg(m) };
            *cell = f.mul(signed, d_inv);
        }
    }
    Ok(out)
}

/// Gram matrix D of the form: β(u, v) = uᵀ·D·v̄.
pub fn form_matrix(f: &Field) -> Matrix3 {
    let (o, i) = (Elem::ZERO, Elem::ONE);
    [[f.neg(i), o, o], [o, o, i], [o, i, o]]
}

impl SemilinearMap {
    pub fn identity() -> SemilinearMap {
        let (o, i) = (Elem::ZERO, Elem::ONE);
        SemilinearMap {
            matrix: [[i, o, o], [o, i, o], [o, o, i]],
            frob: 0,
        }
    }

    pub fn linear(matrix: Matrix3) -> SemilinearMap {
        SemilinearMap { matrix, frob: 0 }
    }

    pub fn apply(&self, f: &Field, v: &Vec3) -> Vec3 {
        let twisted = v.map(|x| f.frobenius_p(x, self.frob));
        mat_vec(f, &self.matrix, &twisted)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, f: &Field, other: &SemilinearMap) -> SemilinearMap {
        SemilinearMap {
            matrix: mat_mul(f, &self.matrix, &mat_frob(f, &other.matrix, self.frob)),
            frob: (self.frob + other.frob) % f.degree(),
        }
    }

    pub fn inverse(&self, f: &Field) -> Result<SemilinearMap, GroupError> {
        let back = (f.degree() - self.frob) % f.degree();
        Ok(SemilinearMap {
            matrix: mat_frob(f, &mat_inv(f, &self.matrix)?, back),
            frob: back,
        })
    }

    /// Image of a line given by dual coordinates: l ↦ ψ^m(l)·M⁻¹.
    pub fn apply_dual(&self, f: &Field, l: &Vec3) -> Result<Vec3, GroupError> {
        let inv = mat_inv(f, &self.matrix)?;
        let twisted = l.map(|x| f.frobenius_p(x, self.frob));
        let mut out = [Elem::ZERO; 3];
        for (j, cell) in out.iter_mut().enumerate() {
            let mut acc = Elem::ZERO;
            for (k, &t) in twisted.iter().enumerate() {
                acc = f.add(acc, f.mul(t, inv[k][j]));
            }
            *cell = acc;
        }
        Ok(out)
    }

    /// Whether Mᵀ·D·M̄ = c·D for some c ≠ 0, i.e. the matrix part is a
    /// similitude of the form. The Frobenius part preserves the form since D
    /// has entries in the prime field.
    pub fn preserves_form(&self, f: &Field) -> bool {
        let m = &self.matrix;
        let d = form_matrix(f);
        let mt: Matrix3 = [0, 1, 2].map(|i| [0, 1, 2].map(|j| m[j][i]));
        let m_bar = m.map(|row| row.map(|x| f.conj(x)));
        let g = mat_mul(f, &mat_mul(f, &mt, &d), &m_bar);
        // c is read off the (1, 2) entry, where D has a 1.
        let c = g[1][2];
        if c.is_zero() {
            return false;
        }
        (0..3).all(|i| (0..3).all(|j| g[i][j] == f.mul(c, d[i][j])))
    }

    pub fn act_point(&self, unital: &Unital, point: u32) -> Result<u32, GroupError> {
        let f = unital.field();
        let image = self.apply(f, unital.point(point));
        unital
            .point_of(&image)
            .ok_or_else(|| GroupError::ImageNotFound(format!("point {point}")))
    }

    pub fn act_line(&self, unital: &Unital, line: u32) -> Result<u32, GroupError> {
        let f = unital.field();
        let image = self.apply_dual(f, &unital.line(line).dual)?;
        unital
            .line_of(&image)
            .ok_or_else(|| GroupError::ImageNotFound(format!("line {line}")))
    }

    pub fn act_flag_pair(&self, unital: &Unital, flag: Flag) -> Result<Flag, GroupError> {
        Ok(Flag {
            point: self.act_point(unital, flag.point)?,
            line: self.act_line(unital, flag.line)?,
        })
    }

    /// Image of a flag given by index.
    pub fn act_flag(&self, unital: &Unital, flag: u32) -> Result<u32, GroupError> {
        let image = self.act_flag_pair(unital, unital.flag(flag))?;
        unital
            .flag_index(image)
            .ok_or_else(|| GroupError::ImageNotFound(format!("flag {flag}")))
    }

    /// The permutations induced on points, lines and flags.
    pub fn permutations(&self, unital: &Unital) -> Result<Permutations, GroupError> {
        let points = (0..unital.num_points() as u32)
            .map(|p| self.act_point(unital, p))
            .collect::<Result<Vec<_>, _>>()?;
        let lines = (0..unital.lines().len() as u32)
            .map(|l| self.act_line(unital, l))
            .collect::<Result<Vec<_>, _>>()?;
        let flags = unital
            .flags()
            .iter()
            .map(|fl| {
                let image = Flag {
                    point: points[fl.point as usize],
                    line: lines[fl.line as usize],
                };
                unital
                    .flag_index(image)
                    .ok_or_else(|| GroupError::ImageNotFound(format!("flag {fl:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Permutations {
            points,
            lines,
            flags,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutations {
    pub points: Vec<u32>,
    pub lines: Vec<u32>,
    pub flags: Vec<u32>,
}

/// (x, y, z) ↦ (x + a·z, y + a^q·x + b·z, z), subject to b + b^q = a^{q+1}.
pub fn unipotent(f: &Field, a: Elem, b: Elem) -> Result<SemilinearMap, GroupError> {
    if f.add(b, f.conj(b)) != f.norm(a) {
        return Err(GroupError::Constraint(format!(
            "unipotent({a}, {b}) needs b + b^q = a^(q+1)"
        )));
    }
    let (o, i) = (Elem::ZERO, Elem::ONE);
    Ok(SemilinearMap::linear([
        [i, o, a],
        [f.conj(a), i, b],
        [o, o, i],
    ]))
}

/// (x, y, z) ↦ (d·x, t·y, (t^q)⁻¹·z), subject to d^{q+1} = 1 and t ≠ 0.
pub fn torus(f: &Field, d: Elem, t: Elem) -> Result<SemilinearMap, GroupError> {
    if f.norm(d) != Elem::ONE {
        return Err(GroupError::Constraint(format!(
            "torus({d}, {t}) needs d^(q+1) = 1"
        )));
    }
    if t.is_zero() {
        return Err(GroupError::Constraint("torus needs t != 0".into()));
    }
    let o = Elem::ZERO;
    Ok(SemilinearMap::linear([
        [d, o, o],
        [o, t, o],
        [o, o, f.inv(f.conj(t))?],
    ]))
}

/// (x, y, z) ↦ (x, z, y), swapping ∞ = ⟨0,1,0⟩ and 0 = ⟨0,0,1⟩.
pub fn weyl() -> SemilinearMap {
    let (o, i) = (Elem::ZERO, Elem::ONE);
    SemilinearMap::linear([[i, o, o], [o, o, i], [o, i, o]])
}

/// The field automorphism ψ^r applied to coordinates.
pub fn frobenius_map(f: &Field, r: u32) -> Result<SemilinearMap, GroupError> {
    f.check_step(r)?;
    Ok(SemilinearMap {
        frob: r % f.degree(),
        ..SemilinearMap::identity()
    })
}

/// Generators of PGU(3, q) ⋊ ⟨ψ^r⟩, in a fixed order:
/// unipotent(1, b₀), unipotent(g, b₁), torus(g^{q−1}, g), torus(1, g), the
/// Weyl involution and ψ^r. Here g is the field generator and b₀, b₁ are the
/// smallest-encoded solutions of the respective trace equations.
///
/// torus(g^{q−1}, g) has determinant 1; torus(1, g) has determinant
/// g^{1−q} of order q+1 and is needed to leave PSU(3, q) when 3 divides q+1.
pub fn generating_set(f: &Field, r: u32) -> Result<Vec<SemilinearMap>, GroupError> {
    f.check_step(r)?;
    let g = f.generator();
    let q = f.q() as i64;
    let b0 = f.solve_trace_eq(f.norm(Elem::ONE))?[0];
    let b1 = f.solve_trace_eq(f.norm(g))?[0];
    let d0 = f.pow(g, q - 1);
    Ok(vec![
        unipotent(f, Elem::ONE, b0)?,
        unipotent(f, g, b1)?,
        torus(f, d0, g)?,
        torus(f, Elem::ONE, g)?,
        weyl(),
        frobenius_map(f, r)?,
    ])
}

/// Breadth-first closure of `seed` under `gens`, recording for every reached
/// object one map carrying the seed to it. Generators are tried in the given
/// order from a FIFO queue, so the witnesses are deterministic. The witness
/// of a newly reached object is `gen ∘ witness(parent)`.
pub fn orbit_with_witnesses<T, F, E>(
    f: &Field,
    seed: T,
    gens: &[SemilinearMap],
    mut act: F,
) -> Result<IndexMap<T, SemilinearMap>, E>
where
    T: Clone + Eq + Hash,
    F: FnMut(&SemilinearMap, &T) -> Result<T, E>,
{
    let mut orbit: IndexMap<T, SemilinearMap> = IndexMap::new();
    orbit.insert(seed, SemilinearMap::identity());
    let mut head = 0;
    while head < orbit.len() {
        let (obj, witness) = {
            let (o, w) = orbit.get_index(head).expect("index in range");
            (o.clone(), w.clone())
        };
        for gen in gens {
            let image = act(gen, &obj)?;
            if !orbit.contains_key(&image) {
                orbit.insert(image, gen.compose(f, &witness));
            }
        }
        head += 1;
    }
    Ok(orbit)
}

/// Orbit of `seed` under a set of permutations of `0..n`, in BFS order.
pub fn permutation_orbit(seed: u32, perms: &[&[u32]]) -> Vec<u32> {
    let n = perms.first().map_or(0, |p| p.len());
    let mut seen = vec![false; n.max(seed as usize + 1)];
    seen[seed as usize] = true;
    let mut orbit = vec![seed];
    let mut head = 0;
    while head < orbit.len() {
        let x = orbit[head];
        for p in perms {
            let y = p[x as usize];
            if !seen[y as usize] {
                seen[y as usize] = true;
                orbit.push(y);
            }
        }
        head += 1;
    }
    orbit
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::hermitian::beta;

    fn unital(p: u32, e: u32) -> Unital {
        Unital::build(Arc::new(Field::new(p, e).unwrap())).unwrap()
    }

    fn sample_vectors(f: &Field) -> Vec<Vec3> {
        (0..60u32)
            .map(|k| {
                [
                    Elem(k * 7 % f.size()),
                    Elem((k * 3 + 1) % f.size()),
                    Elem((k * k + 2) % f.size()),
                ]
            })
            .collect()
    }

    #[test]
    fn unipotent_examples() {
        let f = Field::new(3, 1).unwrap();
        let id = unipotent(&f, Elem::ZERO, Elem::ZERO).unwrap();
        assert_eq!(id, SemilinearMap::identity());
        let b = f.solve_trace_eq(Elem::ZERO).unwrap()[1];
        let u = unipotent(&f, Elem::ZERO, b).unwrap();
        let (o, i) = (Elem::ZERO, Elem::ONE);
        assert_eq!(u.apply(&f, &[o, i, o]), [o, i, o]);
        assert_eq!(u.apply(&f, &[o, o, i]), [o, b, i]);
        assert!(unipotent(&f, Elem::ONE, Elem::ZERO).is_err());
        for a in f.elements() {
            for &b in f.solve_trace_eq(f.norm(a)).unwrap() {
                assert!(unipotent(&f, a, b).unwrap().preserves_form(&f));
            }
        }
    }

    #[test]
    fn torus_examples() {
        let f = Field::new(3, 1).unwrap();
        assert_eq!(
            torus(&f, Elem::ONE, Elem::ONE).unwrap(),
            SemilinearMap::identity()
        );
        let u = unital(3, 1);
        let c = u.canonical_objects(Elem::ONE).unwrap();
        let inf_lstar = u.flag_of(c.infinity, c.l_star).unwrap();
        let zero_lstar = u.flag_of(c.zero, c.l_star).unwrap();
        let mut count = 0;
        for d in f.nonzero().filter(|&d| f.norm(d) == Elem::ONE) {
            for t in f.nonzero() {
                let g = torus(&f, d, t).unwrap();
                assert!(g.preserves_form(&f));
                assert_eq!(g.act_flag(&u, inf_lstar).unwrap(), inf_lstar);
                assert_eq!(g.act_flag(&u, zero_lstar).unwrap(), zero_lstar);
                count += 1;
            }
        }
        assert_eq!(count, 4 * 8);
        assert!(torus(&f, f.generator(), Elem::ONE).is_err());
        assert!(torus(&f, Elem::ONE, Elem::ZERO).is_err());
    }

    #[test]
    fn weyl_and_frobenius() {
        let f = Field::new(3, 1).unwrap();
        let w = weyl();
        assert_eq!(w.compose(&f, &w), SemilinearMap::identity());
        assert!(w.preserves_form(&f));
        let u = unital(3, 1);
        let c = u.canonical_objects(Elem::ONE).unwrap();
        assert_eq!(w.act_point(&u, c.infinity).unwrap(), c.zero);
        assert_eq!(
            w.act_flag(&u, u.flag_of(c.infinity, c.l_star).unwrap())
                .unwrap(),
            u.flag_of(c.zero, c.l_star).unwrap()
        );

        let psi = frobenius_map(&f, 1).unwrap();
        assert!(psi.preserves_form(&f));
        assert!(frobenius_map(&f, 3).is_err());
        assert_eq!(psi.act_point(&u, c.infinity).unwrap(), c.infinity);
        assert_eq!(psi.act_point(&u, c.zero).unwrap(), c.zero);
        assert_eq!(psi.act_line(&u, c.l_star).unwrap(), c.l_star);
        let mut power = SemilinearMap::identity();
        for _ in 0..f.degree() {
            power = psi.compose(&f, &power);
        }
        assert_eq!(power, SemilinearMap::identity());
        for eta in f.nonzero() {
            let line = u.line_of(&u.n_eta(eta)).unwrap();
            let image = u.line_of(&u.n_eta(f.frobenius_p(eta, 1))).unwrap();
            assert_eq!(psi.act_line(&u, line).unwrap(), image);
        }
    }

    #[test]
    fn preserves_form_rejects_generic_diagonal() {
        let f = Field::new(3, 1).unwrap();
        let (o, i) = (Elem::ZERO, Elem::ONE);
        assert!(SemilinearMap::identity().preserves_form(&f));
        let g = SemilinearMap::linear([[i, o, o], [o, i, o], [o, o, f.generator()]]);
        assert!(!g.preserves_form(&f));
    }

    #[test]
    fn form_preserving_maps_scale_beta() {
        let f = Field::new(3, 1).unwrap();
        let vs = sample_vectors(&f);
        for g in generating_set(&f, 1).unwrap() {
            let mut factor = None;
            for u in &vs {
                for v in &vs {
                    let before = beta(&f, u, v);
                    let after = beta(&f, &g.apply(&f, u), &g.apply(&f, v));
                    let after = f.frobenius_p(after, f.degree() - g.frob);
                    if before.is_zero() {
                        assert!(after.is_zero());
                    } else {
                        let c = f.div(after, before).unwrap();
                        assert_eq!(*factor.get_or_insert(c), c);
                    }
                }
            }
        }
    }

    #[test]
    fn composition_is_associative_and_matches_application() {
        let f = Field::new(2, 2).unwrap();
        let gens = generating_set(&f, 1).unwrap();
        let vs = sample_vectors(&f);
        for a in &gens {
            for b in &gens {
                let ab = a.compose(&f, b);
                for v in &vs {
                    assert_eq!(ab.apply(&f, v), a.apply(&f, &b.apply(&f, v)));
                }
                for c in &gens {
                    assert_eq!(ab.compose(&f, c), a.compose(&f, &b.compose(&f, c)),);
                }
                let inv = a.inverse(&f).unwrap();
                assert_eq!(inv.compose(&f, a), SemilinearMap::identity());
                assert_eq!(a.compose(&f, &inv), SemilinearMap::identity());
            }
        }
    }

    #[test]
    fn generators_preserve_unital() {
        for (p, e) in [(3, 1), (2, 2)] {
            let u = unital(p, e);
            let f = u.field().clone();
            for r in (1..=f.degree()).filter(|r| f.degree() % r == 0) {
                for g in generating_set(&f, r).unwrap() {
                    assert!(g.preserves_form(&f));
                    let perms = g.permutations(&u).unwrap();
                    let mut seen = perms.points.clone();
                    seen.sort_unstable();
                    assert_eq!(seen, (0..u.num_points() as u32).collect::<Vec<_>>());
                    let mut seen = perms.flags.clone();
                    seen.sort_unstable();
                    assert_eq!(seen, (0..u.num_flags() as u32).collect::<Vec<_>>());
                    for (l, line) in u.lines().iter().enumerate() {
                        let mut image: Vec<u32> = line
                            .points
                            .iter()
                            .map(|&x| perms.points[x as usize])
                            .collect();
                        image.sort_unstable();
                        assert_eq!(image, u.line(perms.lines[l]).points);
                    }
                }
            }
        }
    }

    #[test]
    fn flag_and_point_transitivity() {
        for (p, e) in [(3, 1), (2, 2), (5, 1)] {
            let u = unital(p, e);
            let f = u.field().clone();
            let q = f.q() as usize;
            let c = u.canonical_objects(Elem::ONE).unwrap();
            for r in (1..=f.degree()).filter(|r| f.degree() % r == 0) {
                let gens = generating_set(&f, r).unwrap();
                let points =
                    orbit_with_witnesses(&f, c.infinity, &gens, |g, &x| g.act_point(&u, x))
                        .unwrap();
                assert_eq!(points.len(), q * q * q + 1);
                let seed = u.flag_of(c.infinity, c.l_star).unwrap();
                let flags =
                    orbit_with_witnesses(&f, seed, &gens, |g, &x| g.act_flag(&u, x)).unwrap();
                assert_eq!(flags.len(), q * q * (q * q * q + 1));
                assert_eq!(flags[&seed], SemilinearMap::identity());
                for (obj, w) in &flags {
                    assert_eq!(w.act_flag(&u, seed).unwrap(), *obj);
                }
            }
        }
    }

    #[test]
    fn stabilizer_of_infinity_and_zero_is_transitive_on_remaining_flags() {
        // Schreier generators of the stabilizer of the ordered pair (∞, 0).
        let u = unital(3, 1);
        let f = u.field().clone();
        let c = u.canonical_objects(Elem::ONE).unwrap();
        let gens = generating_set(&f, 1).unwrap();
        let linear: Vec<SemilinearMap> = gens.iter().filter(|g| g.frob == 0).cloned().collect();
        let pairs = orbit_with_witnesses(&f, (c.infinity, c.zero), &linear, |g, &(a, b)| {
            Ok::<_, GroupError>((g.act_point(&u, a)?, g.act_point(&u, b)?))
        })
        .unwrap();
        assert_eq!(pairs.len(), 28 * 27);
        let mut stab = Vec::new();
        for (obj, w) in &pairs {
            for s in &linear {
                let image = (
                    s.act_point(&u, obj.0).unwrap(),
                    s.act_point(&u, obj.1).unwrap(),
                );
                let back = pairs[&image].inverse(&f).unwrap();
                let elt = back.compose(&f, &s.compose(&f, w));
                assert_eq!(elt.act_point(&u, c.infinity).unwrap(), c.infinity);
                assert_eq!(elt.act_point(&u, c.zero).unwrap(), c.zero);
                stab.push(elt.permutations(&u).unwrap().flags);
            }
        }
        let refs: Vec<&[u32]> = stab.iter().map(|p| p.as_slice()).collect();
        let zero_lstar = u.flag_of(c.zero, c.l_star).unwrap();
        let start = u.flag_of(c.zero, c.n).unwrap();
        let mut orbit = permutation_orbit(start, &refs);
        orbit.sort_unstable();
        let expected: Vec<u32> = u.blocks()[c.zero as usize]
            .iter()
            .copied()
            .filter(|&x| x != zero_lstar)
            .collect();
        assert_eq!(orbit, expected);
    }
}
