//! Parameters (r, λ, k) of the unitary graphs Γ_{r,λ}(q) and their
//! construction.
//!
//! Two builders produce the edge set independently:
//!
//! * [`build_graph_orbit`] closes the single arc ((∞, L), (0, N)) under the
//!   generators of PGU(3, q) ⋊ ⟨ψ^r⟩ acting on ordered flag pairs. It uses no
//!   representative convention at all and is the reference.
//! * [`build_graph_transport`] writes down Γ(∞, L) from the closed-form
//!   neighbourhood family and carries it to every vertex with a flag-orbit
//!   witness.
//!
//! [`adjacency_def21`] tests the determinant definition of adjacency directly
//! for a pair of flags.
//!
//! # Representative scaling
//!
//! The determinant definition depends on which vectors represent the points
//! ⟨u₁⟩, ⟨u₂⟩ and the orthogonal point ⟨u₀⟩. Under [`Convention::Balanced`]
//! the representatives satisfy β(u₀, u₀) = −β(u₁, u₂); this is invariant
//! under the unitary group and under common rescaling, so the relation is a
//! union of group orbitals. In the closed-form families it fixes the free
//! scalar of each family: c = (1−a)^{−q} for Γ(∞, L), c = a^{−(q+1)} for
//! Γ(∞, L*), h = η^q(1−f)^{−q} for Γ(0, N(η)) and h = f^{−(q+1)} for Γ(0, L*).
//! [`Convention::Monic`] uses the monic representatives and c = h = 1
//! throughout; it is kept as a diagnostic and does not give a group-invariant
//! relation.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::gf::{Elem, Field, FieldError};
use crate::graph::Graph;
use crate::group::{orbit_with_witnesses, GroupError, SemilinearMap};
use crate::hermitian::{
    add3, beta, cross, dot, normalize, orthogonal_complement, scale3, Unital, UnitalError, Vec3,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("lambda = {0} is zero")]
    ZeroLambda(Elem),
    #[error("lambda = {lambda} is not valid for r = {r}: lambda^q is outside its <psi^r>-orbit")]
    InvalidLambda { lambda: Elem, r: u32 },
    #[error("parameter constraint violated: {0}")]
    Constraint(String),
    #[error("closed-form neighbour is not a flag of the unital: {0}")]
    NotAFlag(String),
    #[error(
        "flag orbit has {found} flags, expected {expected}; generators are not flag-transitive"
    )]
    NotTransitive { found: usize, expected: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Unital(#[from] UnitalError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Validated parameters of Γ_{r,λ}(q).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphParams {
    pub p: u32,
    pub e: u32,
    pub q: u32,
    pub r: u32,
    pub lambda: Elem,
    /// Size of the ⟨ψ^r⟩-orbit of λ.
    pub k: u32,
    /// Smallest t with λ^{p^{tr}} = λ^q.
    pub t_witness: u32,
    /// λ^{q·p^{ir}} for 0 ≤ i < k.
    pub mus: Vec<Elem>,
}

impl GraphParams {
    /// λ^{q·p^{ir}}; the sequence has period k in i.
    pub fn mu(&self, i: u32) -> Elem {
        self.mus[(i % self.k) as usize]
    }

    /// The degree kq(q²−1) of Γ_{r,λ}(q).
    pub fn expected_degree(&self) -> usize {
        let q = self.q as usize;
        self.k as usize * q * (q * q - 1)
    }

    pub fn order(&self) -> usize {
        let q = self.q as usize;
        q * q * (q * q * q + 1)
    }
}

/// Checks that λ^q lies in the ⟨ψ^r⟩-orbit of λ and computes k.
pub fn validate_lambda(f: &Field, r: u32, lambda: Elem) -> Result<GraphParams, ConstructError> {
    f.check_step(r)?;
    if lambda.is_zero() {
        return Err(ConstructError::ZeroLambda(lambda));
    }
    let orbit = f.psi_orbit(lambda, r)?;
    let target = f.conj(lambda);
    let t_witness = orbit
        .iter()
        .position(|&x| x == target)
        .ok_or(ConstructError::InvalidLambda { lambda, r })? as u32;
    let k = orbit.len() as u32;
    let mus = (0..k).map(|i| f.frobenius_p(target, i * r)).collect();
    Ok(GraphParams {
        p: f.p(),
        e: f.e(),
        q: f.q(),
        r,
        lambda,
        k,
        t_witness,
        mus,
    })
}

pub fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// One valid parameter set per ⟨ψ^r⟩-orbit of λ, for every divisor r of 2e,
/// with λ the smallest-encoded member of its orbit.
pub fn enumerate_params(f: &Field) -> Vec<GraphParams> {
    let mut out = Vec::new();
    for r in divisors(f.degree()) {
        let mut seen = vec![false; f.size() as usize];
        for lambda in f.nonzero() {
            if seen[lambda.0 as usize] {
                continue;
            }
            for x in f.psi_orbit(lambda, r).expect("r divides 2e") {
                seen[x.0 as usize] = true;
            }
            if let Ok(params) = validate_lambda(f, r, lambda) {
                out.push(params);
            }
        }
    }
    out
}

fn require(cond: bool, what: &str) -> Result<(), ConstructError> {
    if cond {
        Ok(())
    } else {
        Err(ConstructError::Constraint(what.to_string()))
    }
}

/// N^i_{a,b,c}: (μ + a^q c)x − cy − (μa + b^q c)z = 0, with μ = λ^{qp^{ir}}.
pub fn line_n(
    f: &Field,
    params: &GraphParams,
    i: u32,
    a: Elem,
    b: Elem,
    c: Elem,
) -> Result<Vec3, ConstructError> {
    require(a != Elem::ONE, "N-family needs a != 1")?;
    require(!c.is_zero(), "N-family needs c != 0")?;
    require(
        f.add(b, f.conj(b)) == f.norm(a),
        "N-family needs b + b^q = a^(q+1)",
    )?;
    let mu = params.mu(i);
    let dual = [
        f.add(mu, f.mul(f.conj(a), c)),
        f.neg(c),
        f.neg(f.add(f.mul(mu, a), f.mul(f.conj(b), c))),
    ];
    Ok(normalize(f, &dual)?)
}

/// M^i_{a,b,c}: (a^{q+1}c − μ)x − acy + a(μ − b^q c)z = 0.
pub fn line_m(
    f: &Field,
    params: &GraphParams,
    i: u32,
    a: Elem,
    b: Elem,
    c: Elem,
) -> Result<Vec3, ConstructError> {
    require(
        !a.is_zero() && !b.is_zero() && !c.is_zero(),
        "M-family needs a, b, c != 0",
    )?;
    require(
        f.add(b, f.conj(b)) == f.norm(a),
        "M-family needs b + b^q = a^(q+1)",
    )?;
    let mu = params.mu(i);
    let dual = [
        f.sub(f.mul(f.norm(a), c), mu),
        f.neg(f.mul(a, c)),
        f.mul(a, f.sub(mu, f.mul(f.conj(b), c))),
    ];
    Ok(normalize(f, &dual)?)
}

/// L(η)^i_{f,g,h}: (μη^q + f^q h)x − (μη^{q−1}f + g^q h)y − η^q h z = 0.
pub fn line_leta(
    fld: &Field,
    params: &GraphParams,
    eta: Elem,
    i: u32,
    f: Elem,
    g: Elem,
    h: Elem,
) -> Result<Vec3, ConstructError> {
    require(!eta.is_zero(), "L(eta)-family needs eta != 0")?;
    require(f != Elem::ONE, "L(eta)-family needs f != 1")?;
    require(!h.is_zero(), "L(eta)-family needs h != 0")?;
    let lhs = fld.add(fld.mul(fld.conj(eta), g), fld.mul(eta, fld.conj(g)));
    require(
        lhs == fld.norm(f),
        "L(eta)-family needs eta^q g + eta g^q = f^(q+1)",
    )?;
    let mu = params.mu(i);
    let eta_q = fld.conj(eta);
    let eta_q1 = fld.div(eta_q, eta)?;
    let dual = [
        fld.add(fld.mul(mu, eta_q), fld.mul(fld.conj(f), h)),
        fld.neg(fld.add(fld.mul(fld.mul(mu, eta_q1), f), fld.mul(fld.conj(g), h))),
        fld.neg(fld.mul(eta_q, h)),
    ];
    Ok(normalize(fld, &dual)?)
}

/// K^i_{f,g,h}: (μ − f^{q+1}h)x − f(μ − g^q h)y + fhz = 0.
pub fn line_k(
    fld: &Field,
    params: &GraphParams,
    i: u32,
    f: Elem,
    g: Elem,
    h: Elem,
) -> Result<Vec3, ConstructError> {
    require(
        !f.is_zero() && !g.is_zero() && !h.is_zero(),
        "K-family needs f, g, h != 0",
    )?;
    require(
        fld.add(g, fld.conj(g)) == fld.norm(f),
        "K-family needs g + g^q = f^(q+1)",
    )?;
    let mu = params.mu(i);
    let dual = [
        fld.sub(mu, fld.mul(fld.norm(f), h)),
        fld.neg(fld.mul(f, fld.sub(mu, fld.mul(fld.conj(g), h)))),
        fld.mul(f, h),
    ];
    Ok(normalize(fld, &dual)?)
}

/// Convention for representative scaling; see the module docs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    Balanced,
    Monic,
}

impl Convention {
    pub fn as_str(self) -> &'static str {
        match self {
            Convention::Balanced => "balanced",
            Convention::Monic => "monic",
        }
    }
}

/// The four base flags whose neighbourhoods have closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseFlag {
    /// (∞, L)
    InfinityL,
    /// (∞, L*)
    InfinityLStar,
    /// (0, N(η))
    ZeroN(Elem),
    /// (0, L*)
    ZeroLStar,
}

impl BaseFlag {
    pub fn flag_index(&self, unital: &Unital, params: &GraphParams) -> Result<u32, ConstructError> {
        let c = unital.canonical_objects(params.lambda)?;
        let f = unital.field();
        let (point, line) = match *self {
            BaseFlag::InfinityL => (c.infinity, c.l),
            BaseFlag::InfinityLStar => (c.infinity, c.l_star),
            BaseFlag::ZeroN(eta) => {
                require(!eta.is_zero(), "N(eta) needs eta != 0")?;
                let line = unital
                    .line_of(&unital.n_eta(eta))
                    .ok_or_else(|| ConstructError::NotAFlag(format!("N({})", f.format(eta))))?;
                (c.zero, line)
            }
            BaseFlag::ZeroLStar => (c.zero, c.l_star),
        };
        unital
            .flag_of(point, line)
            .ok_or_else(|| ConstructError::NotAFlag(format!("base flag {self:?}")))
    }
}

fn flag_for(unital: &Unital, point: Vec3, dual: Vec3) -> Result<u32, ConstructError> {
    let pt = unital
        .point_of(&point)
        .ok_or_else(|| ConstructError::NotAFlag(format!("point {point:?} is not absolute")))?;
    let line = unital
        .line_of(&dual)
        .ok_or_else(|| ConstructError::NotAFlag(format!("{dual:?} is not a unital line")))?;
    unital
        .flag_of(pt, line)
        .ok_or_else(|| ConstructError::NotAFlag(format!("point {pt} is not on line {line}")))
}

/// Neighbourhood of a base flag from its closed-form parametrization, with
/// i ranging over [0, k). Returns sorted, deduplicated flag indices.
pub fn base_neighbourhood(
    unital: &Unital,
    params: &GraphParams,
    base: BaseFlag,
    convention: Convention,
) -> Result<Vec<u32>, ConstructError> {
    let f = unital.field().as_ref();
    let one = Elem::ONE;
    let balanced = convention == Convention::Balanced;
    let mut out = Vec::with_capacity(params.expected_degree());
    match base {
        BaseFlag::InfinityL => {
            for a in f.elements().filter(|&a| a != one) {
                let c = if balanced {
                    f.inv(f.conj(f.sub(one, a)))?
                } else {
                    one
                };
                for &b in f.solve_trace_eq(f.norm(a))? {
                    for i in 0..params.k {
                        let dual = line_n(f, params, i, a, b, c)?;
                        out.push(flag_for(unital, [a, b, one], dual)?);
                    }
                }
            }
        }
        BaseFlag::InfinityLStar => {
            for a in f.nonzero() {
                let c = if balanced { f.inv(f.norm(a))? } else { one };
                for &b in f.solve_trace_eq(f.norm(a))? {
                    for i in 0..params.k {
                        let dual = line_m(f, params, i, a, b, c)?;
                        out.push(flag_for(unital, [a, b, one], dual)?);
                    }
                }
            }
        }
        BaseFlag::ZeroN(eta) => {
            require(!eta.is_zero(), "N(eta) needs eta != 0")?;
            let eta_q = f.conj(eta);
            for fv in f.elements().filter(|&x| x != one) {
                let h = if balanced {
                    f.div(eta_q, f.conj(f.sub(one, fv)))?
                } else {
                    one
                };
                // η^q g + η g^q = f^{q+1} is the trace equation in w = η^q g.
                for &w in f.solve_trace_eq(f.norm(fv))? {
                    let g = f.div(w, eta_q)?;
                    for i in 0..params.k {
                        let dual = line_leta(f, params, eta, i, fv, g, h)?;
                        out.push(flag_for(unital, [fv, eta, g], dual)?);
                    }
                }
            }
        }
        BaseFlag::ZeroLStar => {
            for fv in f.nonzero() {
                let h = if balanced { f.inv(f.norm(fv))? } else { one };
                for &g in f.solve_trace_eq(f.norm(fv))? {
                    for i in 0..params.k {
                        let dual = line_k(f, params, i, fv, g, h)?;
                        out.push(flag_for(unital, [fv, one, g], dual)?);
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Flags (0, N(λ^{qp^{ir}})) for 0 ≤ i < k.
pub fn zero_block_expected(
    unital: &Unital,
    params: &GraphParams,
) -> Result<Vec<u32>, ConstructError> {
    let mut out = params
        .mus
        .iter()
        .map(|&mu| BaseFlag::ZeroN(mu).flag_index(unital, params))
        .collect::<Result<Vec<_>, _>>()?;
    out.sort_unstable();
    Ok(out)
}

/// Tests the determinant definition of adjacency for two flags, scanning
/// 0 ≤ i < 2e/r.
pub fn adjacency_def21(
    unital: &Unital,
    params: &GraphParams,
    flag1: u32,
    flag2: u32,
    convention: Convention,
) -> bool {
    let f = unital.field().as_ref();
    let (fl1, fl2) = (unital.flag(flag1), unital.flag(flag2));
    if fl1.point == fl2.point {
        return false;
    }
    let m1 = *unital.point(fl1.point);
    let m2 = *unital.point(fl2.point);
    let l1 = unital.line(fl1.line).dual;
    let l2 = unital.line(fl2.line).dual;
    let Ok(w0) = orthogonal_complement(f, &m1, &m2) else {
        return false;
    };

    let (u2, u0) = match convention {
        Convention::Monic => {
            let first = normalize(f, &cross(f, &m1, &add3(f, &w0, &m2)));
            if first.ok() != Some(l1) {
                return false;
            }
            (m2, w0)
        }
        Convention::Balanced => {
            // u₀ + u₂ = s(ρw₀ + m₂) must lie on the first line.
            let alpha = dot(f, &l1, &m2);
            let gamma = dot(f, &l1, &w0);
            if alpha.is_zero() || gamma.is_zero() {
                return false;
            }
            let rho = f.neg(f.div(alpha, gamma).expect("gamma != 0"));
            let b12 = beta(f, &m1, &m2);
            let b00 = beta(f, &w0, &w0);
            let denom = f.mul(f.norm(rho), b00);
            let s = f.neg(f.div(b12, denom).expect("nonisotropic w0"));
            (scale3(f, s, &m2), scale3(f, f.mul(rho, s), &w0))
        }
    };
    (0..f.degree() / params.r).any(|i| {
        let mu = params.mu(i);
        let second = cross(f, &u2, &add3(f, &u0, &scale3(f, mu, &m1)));
        normalize(f, &second).ok() == Some(l2)
    })
}

/// A claim violated during construction. Construction still completes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub kind: DiscrepancyKind,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiscrepancyKind {
    Degree,
    Asymmetric,
    BuilderMismatch,
    NeighbourSet,
    Definition,
}

/// Γ_{r,λ}(q) with its vertices identified with flags of the unital.
#[derive(Debug, Clone)]
pub struct UnitaryGraph {
    pub params: GraphParams,
    pub unital: Arc<Unital>,
    pub graph: Graph,
}

impl UnitaryGraph {
    pub fn block_of(&self, v: u32) -> u32 {
        self.unital.block_of(v)
    }

    pub fn num_blocks(&self) -> usize {
        self.unital.num_points()
    }

    pub fn block_size(&self) -> usize {
        self.unital.block_size()
    }

    pub fn block(&self, point: u32) -> std::ops::Range<u32> {
        let b = self.block_size() as u32;
        point * b..(point + 1) * b
    }

    /// Flag (∞, L).
    pub fn base_vertex(&self) -> u32 {
        BaseFlag::InfinityL
            .flag_index(&self.unital, &self.params)
            .expect("(∞, L) is a flag")
    }
}

#[derive(Debug, Clone)]
pub struct BuildOutcome {
    pub graph: UnitaryGraph,
    pub discrepancies: Vec<Discrepancy>,
}

fn degree_check(graph: &Graph, params: &GraphParams, out: &mut Vec<Discrepancy>) {
    let expected = params.expected_degree();
    let bad: Vec<u32> = (0..graph.order() as u32)
        .filter(|&v| graph.degree(v) != expected)
        .collect();
    if let Some(&first) = bad.first() {
        out.push(Discrepancy {
            kind: DiscrepancyKind::Degree,
            detail: format!(
                "{} vertices have degree != kq(q^2-1) = {expected}; vertex {first} has {}",
                bad.len(),
                graph.degree(first)
            ),
        });
    }
}

/// Closes the arc ((∞, L), (0, N)) under the generators acting on ordered
/// flag pairs and symmetrizes.
pub fn build_graph_orbit(
    unital: Arc<Unital>,
    params: &GraphParams,
    gens: &[SemilinearMap],
) -> Result<BuildOutcome, ConstructError> {
    let n = unital.num_flags();
    let perms = gens
        .iter()
        .map(|g| g.permutations(&unital).map(|p| p.flags))
        .collect::<Result<Vec<_>, _>>()?;
    let c = unital.canonical_objects(params.lambda)?;
    let seed = (
        unital.flag_of(c.infinity, c.l).expect("(∞, L) is a flag"),
        unital.flag_of(c.zero, c.n).expect("(0, N) is a flag"),
    );

    let words = n.div_ceil(64);
    let mut seen = vec![0u64; n * words];
    let mark = |seen: &mut Vec<u64>, (u, v): (u32, u32)| -> bool {
        let idx = u as usize * words + v as usize / 64;
        let bit = 1u64 << (v % 64);
        let fresh = seen[idx] & bit == 0;
        seen[idx] |= bit;
        fresh
    };
    mark(&mut seen, seed);
    let mut arcs = vec![seed];
    let mut head = 0;
    while head < arcs.len() {
        let (u, v) = arcs[head];
        for p in &perms {
            let image = (p[u as usize], p[v as usize]);
            if mark(&mut seen, image) {
                arcs.push(image);
            }
        }
        head += 1;
    }

    let mut discrepancies = Vec::new();
    let reversed_missing = arcs
        .iter()
        .filter(|&&(u, v)| seen[v as usize * words + u as usize / 64] >> (u % 64) & 1 == 0)
        .count();
    if reversed_missing > 0 {
        discrepancies.push(Discrepancy {
            kind: DiscrepancyKind::Asymmetric,
            detail: format!("{reversed_missing} arcs of the orbit have their reverse outside it"),
        });
    }
    let mut adj = vec![Vec::new(); n];
    for (u, v) in arcs {
        adj[u as usize].push(v);
    }
    let graph = Graph::from_lists(adj);
    degree_check(&graph, params, &mut discrepancies);
    Ok(BuildOutcome {
        graph: UnitaryGraph {
            params: params.clone(),
            unital,
            graph,
        },
        discrepancies,
    })
}

/// Transports Γ(∞, L) from its closed form to every vertex along flag-orbit
/// witnesses.
pub fn build_graph_transport(
    unital: Arc<Unital>,
    params: &GraphParams,
    gens: &[SemilinearMap],
    convention: Convention,
) -> Result<BuildOutcome, ConstructError> {
    let f = unital.field().clone();
    let n = unital.num_flags();
    let base = BaseFlag::InfinityL.flag_index(&unital, params)?;
    let base_nb = base_neighbourhood(&unital, params, BaseFlag::InfinityL, convention)?;
    let witnesses = orbit_with_witnesses(&f, base, gens, |g, &x| g.act_flag(&unital, x))?;
    if witnesses.len() != n {
        return Err(ConstructError::NotTransitive {
            found: witnesses.len(),
            expected: n,
        });
    }
    let mut adj = vec![Vec::new(); n];
    for (&v, w) in &witnesses {
        adj[v as usize] = base_nb
            .iter()
            .map(|&x| w.act_flag(&unital, x))
            .collect::<Result<Vec<_>, _>>()?;
        adj[v as usize].sort_unstable();
    }

    let mut discrepancies = Vec::new();
    let asymmetric = adj
        .iter()
        .enumerate()
        .flat_map(|(u, list)| list.iter().map(move |&v| (u as u32, v)))
        .filter(|&(u, v)| adj[v as usize].binary_search(&u).is_err())
        .count();
    if asymmetric > 0 {
        discrepancies.push(Discrepancy {
            kind: DiscrepancyKind::Asymmetric,
            detail: format!("{asymmetric} transported arcs have no reverse arc"),
        });
    }
    let graph = Graph::from_lists(adj);
    degree_check(&graph, params, &mut discrepancies);
    Ok(BuildOutcome {
        graph: UnitaryGraph {
            params: params.clone(),
            unital,
            graph,
        },
        discrepancies,
    })
}

/// Compares two edge sets; `None` when they are identical.
pub fn compare_graphs(a: &Graph, b: &Graph, label_a: &str, label_b: &str) -> Option<Discrepancy> {
    let ea: std::collections::BTreeSet<_> = a.edges().collect();
    let eb: std::collections::BTreeSet<_> = b.edges().collect();
    if ea == eb && a.order() == b.order() {
        return None;
    }
    let only_a: Vec<_> = ea.difference(&eb).take(3).collect();
    let only_b: Vec<_> = eb.difference(&ea).take(3).collect();
    Some(Discrepancy {
        kind: DiscrepancyKind::BuilderMismatch,
        detail: format!(
            "{label_a} has {} edges, {label_b} has {}; {} only in {label_a} (e.g. {only_a:?}), {} only in {label_b} (e.g. {only_b:?})",
            ea.len(),
            eb.len(),
            ea.difference(&eb).count(),
            eb.difference(&ea).count(),
        ),
    })
}

/// Number of unordered vertex pairs on which the determinant definition and
/// the graph disagree, scanning all pairs.
pub fn definition_disagreements(ug: &UnitaryGraph, convention: Convention) -> usize {
    use rayon::prelude::*;
    let n = ug.graph.order() as u32;
    (0..n)
        .into_par_iter()
        .map(|u| {
            ((u + 1)..n)
                .filter(|&v| {
                    adjacency_def21(&ug.unital, &ug.params, u, v, convention)
                        != ug.graph.is_adjacent(u, v)
                })
                .count()
        })
        .sum()
}

/// Which builder produces the graph. `Both` returns the orbit graph and
/// records any difference from the transported one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Orbit,
    Transport,
    Both,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Orbit => "orbit",
            Method::Transport => "transport",
            Method::Both => "both",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BuildSummary {
    pub method: Method,
    pub convention: Convention,
    pub discrepancies: Vec<Discrepancy>,
}

impl BuildSummary {
    pub fn has(&self, kind: DiscrepancyKind) -> bool {
        self.discrepancies.iter().any(|d| d.kind == kind)
    }
}

/// Builds Γ_{r,λ}(q) with the requested method.
pub fn build(
    ws: &Workspace,
    params: &GraphParams,
    method: Method,
    convention: Convention,
) -> Result<(UnitaryGraph, BuildSummary), ConstructError> {
    let gens = crate::group::generating_set(&ws.field, params.r)?;
    let (graph, discrepancies) = match method {
        Method::Orbit => {
            let out = build_graph_orbit(ws.unital.clone(), params, &gens)?;
            (out.graph, out.discrepancies)
        }
        Method::Transport => {
            let out = build_graph_transport(ws.unital.clone(), params, &gens, convention)?;
            (out.graph, out.discrepancies)
        }
        Method::Both => {
            let orbit = build_graph_orbit(ws.unital.clone(), params, &gens)?;
            let transport = build_graph_transport(ws.unital.clone(), params, &gens, convention)?;
            let mut d = orbit.discrepancies;
            d.extend(transport.discrepancies.into_iter().map(|mut x| {
                x.detail = format!("transport: {}", x.detail);
                x
            }));
            d.extend(compare_graphs(
                &orbit.graph.graph,
                &transport.graph.graph,
                "orbit",
                "transport",
            ));
            (orbit.graph, d)
        }
    };
    Ok((
        graph,
        BuildSummary {
            method,
            convention,
            discrepancies,
        },
    ))
}

/// Everything needed to build graphs for one field: the field, its unital
/// and the generating sets per r.
pub struct Workspace {
    pub field: Arc<Field>,
    pub unital: Arc<Unital>,
}

impl Workspace {
    pub fn new(p: u32, e: u32) -> Result<Workspace, ConstructError> {
        let field = Arc::new(Field::new(p, e)?);
        let unital = Arc::new(Unital::build(field.clone())?);
        Ok(Workspace { field, unital })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::generating_set;

    fn ws(p: u32, e: u32) -> Workspace {
        Workspace::new(p, e).unwrap()
    }

    #[test]
    fn validate_lambda_examples() {
        let f = Field::new(3, 1).unwrap();
        let t = Elem(3);
        let params = validate_lambda(&f, 1, t).unwrap();
        assert_eq!((params.k, params.t_witness), (2, 1));
        let params = validate_lambda(&f, 2, Elem(2)).unwrap();
        assert_eq!(params.k, 1);
        assert_eq!(
            validate_lambda(&f, 2, t),
            Err(ConstructError::InvalidLambda { lambda: t, r: 2 })
        );
        assert!(matches!(
            validate_lambda(&f, 1, Elem::ZERO),
            Err(ConstructError::ZeroLambda(_))
        ));
        assert!(validate_lambda(&f, 3, t).is_err());

        for (p, e) in [(3, 1), (2, 2), (5, 1), (2, 3)] {
            let f = Field::new(p, e).unwrap();
            for lambda in f.nonzero().filter(|&x| f.in_subfield(x)) {
                let params = validate_lambda(&f, e, lambda).unwrap();
                assert_eq!(params.k, 1);
            }
        }
    }

    #[test]
    fn enumerate_params_census() {
        let f = Field::new(3, 1).unwrap();
        let all = enumerate_params(&f);
        let mut classes: Vec<(u32, u32)> = all.iter().map(|p| (p.r, p.k)).collect();
        classes.dedup();
        assert_eq!(classes, vec![(1, 1), (1, 2), (2, 1)]);
        assert_eq!(all.len(), 7);
        for p in &all {
            assert_eq!(validate_lambda(&f, p.r, p.lambda).as_ref(), Ok(p));
        }
        let f = Field::new(2, 2).unwrap();
        let all = enumerate_params(&f);
        assert!(all.iter().any(|p| p.r == 1 && p.k == 4));
        assert!(all.iter().all(|p| f.degree() / p.r % p.k == 0));
    }

    #[test]
    fn line_family_examples() {
        let w = ws(3, 1);
        let f = w.field.as_ref();
        let (o, one) = (Elem::ZERO, Elem::ONE);
        for params in enumerate_params(f) {
            for i in 0..params.k {
                let mu = params.mu(i);
                let dual = line_n(f, &params, i, o, o, one).unwrap();
                assert_eq!(dual, normalize(f, &w.unital.n_eta(mu)).unwrap());
            }
            let lq = f.conj(params.lambda);
            let dual = line_leta(f, &params, lq, 0, o, o, lq).unwrap();
            assert_eq!(dual, [one, o, f.neg(one)]);
        }
    }

    #[test]
    fn line_families_pass_through_their_points() {
        let w = ws(3, 1);
        let f = w.field.as_ref();
        let one = Elem::ONE;
        for params in enumerate_params(f) {
            for i in 0..params.k {
                for a in f.elements() {
                    for &b in f.solve_trace_eq(f.norm(a)).unwrap() {
                        for c in f.nonzero() {
                            if a != one {
                                let d = line_n(f, &params, i, a, b, c).unwrap();
                                assert!(dot(f, &d, &[a, b, one]).is_zero());
                            }
                            if !a.is_zero() {
                                let d = line_m(f, &params, i, a, b, c).unwrap();
                                assert!(dot(f, &d, &[a, b, one]).is_zero());
                                let d = line_k(f, &params, i, a, b, c).unwrap();
                                assert!(dot(f, &d, &[a, one, b]).is_zero());
                            }
                        }
                    }
                }
            }
        }
        let params = validate_lambda(f, 2, one).unwrap();
        assert!(line_n(f, &params, 0, one, Elem::ZERO, one).is_err());
        assert!(line_n(f, &params, 0, Elem::ZERO, one, one).is_err());
        assert!(line_k(f, &params, 0, Elem::ZERO, one, one).is_err());
    }

    #[test]
    fn base_neighbourhood_sizes_and_point_sets() {
        for (p, e) in [(3, 1), (2, 2)] {
            let w = ws(p, e);
            let u = &w.unital;
            for params in enumerate_params(&w.field) {
                let c = u.canonical_objects(params.lambda).unwrap();
                for base in [
                    BaseFlag::InfinityL,
                    BaseFlag::InfinityLStar,
                    BaseFlag::ZeroN(w.field.generator()),
                    BaseFlag::ZeroLStar,
                ] {
                    for conv in [Convention::Balanced, Convention::Monic] {
                        let nb = base_neighbourhood(u, &params, base, conv).unwrap();
                        assert_eq!(nb.len(), params.expected_degree(), "{base:?} {conv:?}");
                    }
                }
                let nb = base_neighbourhood(u, &params, BaseFlag::InfinityL, Convention::Balanced)
                    .unwrap();
                let mut pts: Vec<u32> = nb.iter().map(|&x| u.block_of(x)).collect();
                pts.dedup();
                let off_l: Vec<u32> = (0..u.num_points() as u32)
                    .filter(|x| !u.line(c.l).points.contains(x))
                    .collect();
                assert_eq!(pts, off_l);
            }
        }
    }

    #[test]
    fn q3_k1_base_neighbourhood_has_one_flag_per_block() {
        let w = ws(3, 1);
        let params = validate_lambda(&w.field, 2, Elem(2)).unwrap();
        let nb = base_neighbourhood(
            &w.unital,
            &params,
            BaseFlag::InfinityL,
            Convention::Balanced,
        )
        .unwrap();
        assert_eq!(nb.len(), 24);
        let mut blocks: Vec<u32> = nb.iter().map(|&x| w.unital.block_of(x)).collect();
        blocks.dedup();
        assert_eq!(blocks.len(), 24);
    }

    #[test]
    fn builders_agree_and_match_closed_forms_q3() {
        let w = ws(3, 1);
        let u = &w.unital;
        for params in enumerate_params(&w.field) {
            let gens = generating_set(&w.field, params.r).unwrap();
            let orbit = build_graph_orbit(u.clone(), &params, &gens).unwrap();
            assert!(orbit.discrepancies.is_empty(), "{:?}", orbit.discrepancies);
            let transport =
                build_graph_transport(u.clone(), &params, &gens, Convention::Balanced).unwrap();
            assert!(
                transport.discrepancies.is_empty(),
                "{:?}",
                transport.discrepancies
            );
            let g = &orbit.graph;
            assert_eq!(
                compare_graphs(&g.graph, &transport.graph.graph, "orbit", "transport"),
                None
            );
            assert_eq!(g.graph.regular_degree(), Some(params.expected_degree()));

            for base in [
                BaseFlag::InfinityL,
                BaseFlag::InfinityLStar,
                BaseFlag::ZeroN(w.field.generator()),
                BaseFlag::ZeroN(Elem::ONE),
                BaseFlag::ZeroLStar,
            ] {
                let v = base.flag_index(u, &params).unwrap();
                let nb = base_neighbourhood(u, &params, base, Convention::Balanced).unwrap();
                assert_eq!(g.graph.neighbours(v), nb.as_slice(), "{base:?}");
            }

            let v = g.base_vertex();
            let zero = u.canonical_objects(params.lambda).unwrap().zero;
            let in_zero: Vec<u32> = g
                .graph
                .neighbours(v)
                .iter()
                .copied()
                .filter(|&x| u.block_of(x) == zero)
                .collect();
            assert_eq!(in_zero, zero_block_expected(u, &params).unwrap());
        }
    }

    #[test]
    fn zero_n_into_infinity_block_is_x_equals_lambda_over_mu_z() {
        for (p, e) in [(3, 1), (2, 2)] {
            let w = ws(p, e);
            let (f, u) = (w.field.as_ref(), &w.unital);
            for params in enumerate_params(f) {
                let gens = generating_set(f, params.r).unwrap();
                let g = build_graph_orbit(u.clone(), &params, &gens).unwrap().graph;
                let c = u.canonical_objects(params.lambda).unwrap();
                let v = u.flag_of(c.zero, c.n).unwrap();
                let measured: Vec<u32> = g
                    .graph
                    .neighbours(v)
                    .iter()
                    .copied()
                    .filter(|&x| u.block_of(x) == c.infinity)
                    .collect();
                let mut expected: Vec<u32> = params
                    .mus
                    .iter()
                    .map(|&mu| {
                        let dual = [
                            Elem::ONE,
                            Elem::ZERO,
                            f.neg(f.div(params.lambda, mu).unwrap()),
                        ];
                        u.flag_of(c.infinity, u.line_of(&dual).unwrap()).unwrap()
                    })
                    .collect();
                expected.sort_unstable();
                assert_eq!(measured, expected);
            }
        }
    }

    #[test]
    fn definition_predicate_balanced_matches_orbit_graph_q3() {
        let w = ws(3, 1);
        for params in enumerate_params(&w.field) {
            let gens = generating_set(&w.field, params.r).unwrap();
            let g = build_graph_orbit(w.unital.clone(), &params, &gens)
                .unwrap()
                .graph;
            assert_eq!(definition_disagreements(&g, Convention::Balanced), 0);
            let c = w.unital.canonical_objects(params.lambda).unwrap();
            let inf_l = w.unital.flag_of(c.infinity, c.l).unwrap();
            let zero_n = w.unital.flag_of(c.zero, c.n).unwrap();
            let inf_ls = w.unital.flag_of(c.infinity, c.l_star).unwrap();
            let zero_ls = w.unital.flag_of(c.zero, c.l_star).unwrap();
            for conv in [Convention::Balanced, Convention::Monic] {
                assert!(adjacency_def21(&w.unital, &params, inf_l, zero_n, conv));
                assert!(!adjacency_def21(&w.unital, &params, inf_ls, zero_ls, conv));
                assert!(!adjacency_def21(&w.unital, &params, inf_l, inf_ls, conv));
            }
        }
    }
}
