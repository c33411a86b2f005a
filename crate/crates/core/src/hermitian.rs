//! The Hermitian form, its absolute points, and the Hermitian unital U_H(q).
//!
//! The form is β(u, v) = −x₁x₂^q + y₁z₂^q + z₁y₂^q. Projective points and
//! line duals are stored by their monic representative (first nonzero
//! coordinate equal to 1). Points, lines and flags are indexed in increasing
//! lexicographic order of their encoded coordinate triples, so indices are
//! stable across runs.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::gf::{Elem, Field, FieldError};

/// Coordinates (x, y, z) of a vector of V(3, q²), or the dual coordinates
/// (l₀, l₁, l₂) of the line l₀x + l₁y + l₂z = 0.
pub type Vec3 = [Elem; 3];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UnitalError {
    #[error("zero vector has no projective point")]
    ZeroVector,
    #[error("points are equal or proportional")]
    Proportional,
    #[error("unital construction: {0}")]
    Construction(String),
    #[error("lambda must be nonzero")]
    ZeroLambda,
    #[error("no unital line with dual coordinates {0:?}")]
    NotAUnitalLine(Vec3),
    #[error(transparent)]
    Field(#[from] FieldError),
}

pub fn add3(f: &Field, u: &Vec3, v: &Vec3) -> Vec3 {
    [f.add(u[0], v[0]), f.add(u[1], v[1]), f.add(u[2], v[2])]
}

pub fn scale3(f: &Field, s: Elem, u: &Vec3) -> Vec3 {
    [f.mul(s, u[0]), f.mul(s, u[1]), f.mul(s, u[2])]
}

/// Bilinear pairing l₀x + l₁y + l₂z used for point/line incidence.
pub fn dot(f: &Field, l: &Vec3, u: &Vec3) -> Elem {
    f.add(
        f.add(f.mul(l[0], u[0]), f.mul(l[1], u[1])),
        f.mul(l[2], u[2]),
    )
}

pub fn cross(f: &Field, u: &Vec3, v: &Vec3) -> Vec3 {
    [
        f.sub(f.mul(u[1], v[2]), f.mul(u[2], v[1])),
        f.sub(f.mul(u[2], v[0]), f.mul(u[0], v[2])),
        f.sub(f.mul(u[0], v[1]), f.mul(u[1], v[0])),
    ]
}

pub fn conj3(f: &Field, u: &Vec3) -> Vec3 {
    [f.conj(u[0]), f.conj(u[1]), f.conj(u[2])]
}

pub fn is_zero3(u: &Vec3) -> bool {
    u.iter().all(|c| c.is_zero())
}

/// Scales `u` so that its first nonzero coordinate is 1.
pub fn normalize(f: &Field, u: &Vec3) -> Result<Vec3, UnitalError> {
    let lead = u
        .iter()
        .copied()
        .find(|c| !c.is_zero())
        .ok_or(UnitalError::ZeroVector)?;
    Ok(scale3(f, f.inv(lead)?, u))
}

pub fn beta(f: &Field, u: &Vec3, v: &Vec3) -> Elem {
    let t0 = f.neg(f.mul(u[0], f.conj(v[0])));
    let t1 = f.mul(u[1], f.conj(v[2]));
    let t2 = f.mul(u[2], f.conj(v[1]));
    f.add(f.add(t0, t1), t2)
}

pub fn is_isotropic(f: &Field, u: &Vec3) -> Result<bool, UnitalError> {
    if is_zero3(u) {
        return Err(UnitalError::ZeroVector);
    }
    Ok(beta(f, u, u).is_zero())
}

/// Dual coordinates of the linear functional v ↦ β(v, u), whose kernel is
/// u^⊥. For an absolute point this is the tangent line at that point.
pub fn polar(f: &Field, u: &Vec3) -> Vec3 {
    [f.neg(f.conj(u[0])), f.conj(u[2]), f.conj(u[1])]
}

/// Monic spanning vector of ⟨u₁, u₂⟩^⊥.
pub fn orthogonal_complement(f: &Field, u1: &Vec3, u2: &Vec3) -> Result<Vec3, UnitalError> {
    let w = cross(f, &polar(f, u1), &polar(f, u2));
    if is_zero3(&w) {
        return Err(UnitalError::Proportional);
    }
    normalize(f, &w)
}

/// Sort key: lexicographic order of the encoded coordinates.
fn key(u: &Vec3) -> (u32, u32, u32) {
    (u[0].0, u[1].0, u[2].0)
}

/// All monic isotropic triples in lexicographic order; there are q³+1.
pub fn absolute_points(f: &Field) -> Vec<Vec3> {
    let mut points = Vec::new();
    // x = 0, y = 0
    points.push([Elem::ZERO, Elem::ZERO, Elem::ONE]);
    // x = 0, y = 1: z + z^q = 0
    for &z in f.solve_trace_eq(Elem::ZERO).expect("0 lies in GF(q)") {
        points.push([Elem::ZERO, Elem::ONE, z]);
    }
    // x = 1: y z^q + z y^q = 1
    for y in f.elements() {
        for z in f.elements() {
            let u = [Elem::ONE, y, z];
            if beta(f, &u, &u).is_zero() {
                points.push(u);
            }
        }
    }
    points.sort_by_key(key);
    points
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnitalLine {
    /// Monic dual coordinates.
    pub dual: Vec3,
    /// Sorted indices of the q+1 absolute points on the line.
    pub points: Vec<u32>,
}

/// An incident point-line pair, by index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Flag {
    pub point: u32,
    pub line: u32,
}

#[derive(Debug)]
pub struct Unital {
    field: Arc<Field>,
    points: Vec<Vec3>,
    point_index: HashMap<Vec3, u32>,
    lines: Vec<UnitalLine>,
    line_index: HashMap<Vec3, u32>,
    /// Dense n×n table; `u32::MAX` on the diagonal.
    line_through: Vec<u32>,
    /// Sorted line indices through each point.
    lines_on: Vec<Vec<u32>>,
    flags: Vec<Flag>,
}

/// Indices of the distinguished points and lines ∞, 0, L, N, L*.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CanonicalObjects {
    pub infinity: u32,
    pub zero: u32,
    /// x = z
    pub l: u32,
    /// y = λ^q x
    pub n: u32,
    /// x = 0
    pub l_star: u32,
}

/// Incidence counts of a built unital, recounted by full scans.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IncidenceReport {
    pub q: u32,
    pub points: usize,
    pub lines: usize,
    pub points_per_line: (usize, usize),
    pub lines_per_point: (usize, usize),
    /// Point pairs covered by exactly one line, out of all pairs.
    pub pairs_on_unique_line: usize,
    pub point_pairs: usize,
    pub flags: usize,
    pub blocks: usize,
    pub block_size: (usize, usize),
    pub ok: bool,
}

impl Unital {
    /// Enumerates the unital lines as the absolute points of the secant lines
    /// of PG(2, q²). Any count that disagrees with the known parameters of
    /// U_H(q) is a construction error.
    pub fn build(field: Arc<Field>) -> Result<Unital, UnitalError> {
        let f = field.as_ref();
        let q = f.q() as usize;
        let points = absolute_points(f);
        let n = points.len();
        if n != q * q * q + 1 {
            return Err(UnitalError::Construction(format!(
                "{n} absolute points, expected {}",
                q * q * q + 1
            )));
        }
        let point_index: HashMap<Vec3, u32> = points
            .iter()
            .enumerate()
            .map(|(i, u)| (*u, i as u32))
            .collect();

        let mut through = vec![u32::MAX; n * n];
        let mut raw_lines: Vec<UnitalLine> = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if through[i * n + j] != u32::MAX {
                    continue;
                }
                let (u, v) = (&points[i], &points[j]);
                let dual = normalize(f, &cross(f, u, v))?;
                let mut on_line = vec![i as u32];
                for t in f.elements() {
                    let w = add3(f, v, &scale3(f, t, u));
                    if is_zero3(&w) {
                        continue;
                    }
                    let w = normalize(f, &w)?;
                    if let Some(&idx) = point_index.get(&w) {
                        if idx as usize != i {
                            on_line.push(idx);
                        }
                    }
                }
                on_line.sort_unstable();
                on_line.dedup();
                if on_line.len() != q + 1 {
                    return Err(UnitalError::Construction(format!(
                        "secant through points {i} and {j} meets {} absolute points, expected {}",
                        on_line.len(),
                        q + 1
                    )));
                }
                let id = raw_lines.len() as u32;
                for &a in &on_line {
                    for &b in &on_line {
                        if a != b {
                            let slot = &mut through[a as usize * n + b as usize];
                            if *slot != u32::MAX {
                                return Err(UnitalError::Construction(format!(
                                    "points {a} and {b} lie on two lines"
                                )));
                            }
                            *slot = id;
                        }
                    }
                }
                raw_lines.push(UnitalLine {
                    dual,
                    points: on_line,
                });
            }
        }

        let expected_lines = q * q * (q * q - q + 1);
        if raw_lines.len() != expected_lines {
            return Err(UnitalError::Construction(format!(
                "{} lines, expected {expected_lines}",
                raw_lines.len()
            )));
        }

        // Re-index lines by dual encoding.
        let mut order: Vec<usize> = (0..raw_lines.len()).collect();
        order.sort_by_key(|&i| key(&raw_lines[i].dual));
        let mut rank = vec![0u32; raw_lines.len()];
        for (new, &old) in order.iter().enumerate() {
            rank[old] = new as u32;
        }
        let lines: Vec<UnitalLine> = order.iter().map(|&i| raw_lines[i].clone()).collect();
        for slot in through.iter_mut().filter(|s| **s != u32::MAX) {
            *slot = rank[*slot as usize];
        }
        let line_index: HashMap<Vec3, u32> = lines
            .iter()
            .enumerate()
            .map(|(i, l)| (l.dual, i as u32))
            .collect();

        let mut lines_on = vec![Vec::with_capacity(q * q); n];
        for (li, line) in lines.iter().enumerate() {
            for &pt in &line.points {
                lines_on[pt as usize].push(li as u32);
            }
        }
        for (pt, on) in lines_on.iter().enumerate() {
            if on.len() != q * q {
                return Err(UnitalError::Construction(format!(
                    "point {pt} lies on {} lines, expected {}",
                    on.len(),
                    q * q
                )));
            }
        }
        let flags = lines_on
            .iter()
            .enumerate()
            .flat_map(|(pt, on)| {
                on.iter().map(move |&line| Flag {
                    point: pt as u32,
                    line,
                })
            })
            .collect();

        Ok(Unital {
            field,
            points,
            point_index,
            lines,
            line_index,
            line_through: through,
            lines_on,
            flags,
        })
    }

    pub fn incidence_report(&self) -> IncidenceReport {
        let q = self.q() as usize;
        let n = self.num_points();
        let span = |it: &mut dyn Iterator<Item = usize>| {
            it.fold((usize::MAX, 0), |(lo, hi), x| (lo.min(x), hi.max(x)))
        };
        let mut cover = vec![0u8; n * n];
        for line in &self.lines {
            for (i, &a) in line.points.iter().enumerate() {
                for &b in &line.points[i + 1..] {
                    let c = &mut cover[a as usize * n + b as usize];
                    *c = c.saturating_add(1);
                }
            }
        }
        let pairs_on_unique_line = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .filter(|&(a, b)| cover[a * n + b] == 1)
            .count();
        let blocks = self.blocks();
        let mut report = IncidenceReport {
            q: self.q(),
            points: n,
            lines: self.lines.len(),
            points_per_line: span(&mut self.lines.iter().map(|l| l.points.len())),
            lines_per_point: span(&mut self.lines_on.iter().map(Vec::len)),
            pairs_on_unique_line,
            point_pairs: n * (n - 1) / 2,
            flags: self.flags.len(),
            blocks: blocks.len(),
            block_size: span(&mut blocks.iter().map(Vec::len)),
            ok: false,
        };
        report.ok = report.points == q * q * q + 1
            && report.lines == q * q * (q * q - q + 1)
            && report.points_per_line == (q + 1, q + 1)
            && report.lines_per_point == (q * q, q * q)
            && report.pairs_on_unique_line == report.point_pairs
            && report.flags == q * q * (q * q * q + 1)
            && report.blocks == q * q * q + 1
            && report.block_size == (q * q, q * q);
        report
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn point(&self, idx: u32) -> &Vec3 {
        &self.points[idx as usize]
    }

    pub fn lines(&self) -> &[UnitalLine] {
        &self.lines
    }

    pub fn line(&self, idx: u32) -> &UnitalLine {
        &self.lines[idx as usize]
    }

    pub fn flags(&self) -> &[Flag] {
        &self.flags
    }

    pub fn flag(&self, idx: u32) -> Flag {
        self.flags[idx as usize]
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn num_flags(&self) -> usize {
        self.flags.len()
    }

    pub fn lines_on(&self, point: u32) -> &[u32] {
        &self.lines_on[point as usize]
    }

    /// Index of the projective point spanned by `u`, if it is absolute.
    pub fn point_of(&self, u: &Vec3) -> Option<u32> {
        let u = normalize(&self.field, u).ok()?;
        self.point_index.get(&u).copied()
    }

    /// Index of the unital line with the given (unnormalized) dual coordinates.
    pub fn line_of(&self, dual: &Vec3) -> Option<u32> {
        let d = normalize(&self.field, dual).ok()?;
        self.line_index.get(&d).copied()
    }

    /// The line L(στ) through two distinct points.
    pub fn line_through(&self, a: u32, b: u32) -> Option<u32> {
        let n = self.points.len();
        match self.line_through[a as usize * n + b as usize] {
            u32::MAX => None,
            l => Some(l),
        }
    }

    /// Flags are ordered by point, then by line, so each block B(σ) is the
    /// contiguous index range `σ·q² .. (σ+1)·q²`.
    pub fn flag_index(&self, flag: Flag) -> Option<u32> {
        let q2 = self.q() as usize * self.q() as usize;
        let pos = self.lines_on[flag.point as usize]
            .binary_search(&flag.line)
            .ok()?;
        Some((flag.point as usize * q2 + pos) as u32)
    }

    pub fn flag_of(&self, point: u32, line: u32) -> Option<u32> {
        self.flag_index(Flag { point, line })
    }

    pub fn block_size(&self) -> usize {
        let q = self.q() as usize;
        q * q
    }

    /// The point-entry σ of a flag, i.e. the block B(σ) containing it.
    pub fn block_of(&self, flag: u32) -> u32 {
        (flag as usize / self.block_size()) as u32
    }

    /// The partition 𝓑 = {B(σ)} as flag index lists, indexed by σ.
    pub fn blocks(&self) -> Vec<Vec<u32>> {
        let b = self.block_size();
        (0..self.points.len())
            .map(|s| ((s * b) as u32..((s + 1) * b) as u32).collect())
            .collect()
    }

    pub fn canonical_objects(&self, lambda: Elem) -> Result<CanonicalObjects, UnitalError> {
        let f = self.field.as_ref();
        if lambda.is_zero() {
            return Err(UnitalError::ZeroLambda);
        }
        let (zero_e, one) = (Elem::ZERO, Elem::ONE);
        let find_point = |u: Vec3| {
            self.point_of(&u)
                .ok_or_else(|| UnitalError::Construction(format!("{u:?} is not absolute")))
        };
        let find_line = |d: Vec3| self.line_of(&d).ok_or(UnitalError::NotAUnitalLine(d));
        Ok(CanonicalObjects {
            infinity: find_point([zero_e, one, zero_e])?,
            zero: find_point([zero_e, zero_e, one])?,
            l: find_line([one, zero_e, f.neg(one)])?,
            n: find_line([f.conj(lambda), f.neg(one), zero_e])?,
            l_star: find_line([one, zero_e, zero_e])?,
        })
    }

    /// Dual coordinates of the line N(η): y = ηx.
    pub fn n_eta(&self, eta: Elem) -> Vec3 {
        let f = self.field.as_ref();
        [eta, f.neg(Elem::ONE), Elem::ZERO]
    }
}
