//! Exhaustive certification of built graphs: distances, girth, common
//! neighbour spectra, the block quotient, and degree/diameter arithmetic.
//!
//! Pair statistics run on the current rayon pool; wrap calls in
//! `ThreadPool::install` to bound the worker count. All reductions are
//! order independent, so results do not depend on the pool size.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::construct::{
    definition_disagreements, zero_block_expected, BaseFlag, BuildSummary, Convention,
    DiscrepancyKind, GraphParams, Method, UnitaryGraph,
};
use crate::gf::Field;
use crate::graph::Graph;
use crate::hermitian::normalize;

pub const CERTIFICATE_SCHEMA: u32 = 1;

/// Number of excess-distance pairs kept as examples.
pub const EXCESS_SAMPLE: usize = 16;

/// Above this order the direct adjacency-definition scan is skipped unless
/// explicitly requested.
pub const DEFINITION_SCAN_LIMIT: usize = 1040;

fn iter_bits(words: &[u64]) -> impl Iterator<Item = u32> + '_ {
    words.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros();
            w &= w - 1;
            Some(i as u32 * 64 + b)
        })
    })
}

/// A vertex pair at distance greater than two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExcessPair {
    pub u: u32,
    pub v: u32,
    pub distance: u32,
    pub same_block: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DistanceReport {
    /// `None` when the graph is disconnected.
    pub diameter: Option<u32>,
    pub connected: bool,
    pub eccentricity_min: Option<u32>,
    pub eccentricity_max: Option<u32>,
    /// Unordered pairs per distance, starting at distance 1.
    pub pairs_by_distance: Vec<u64>,
    pub unreachable_pairs: u64,
    pub excess_pairs: u64,
    pub excess_same_block: u64,
    /// Largest distance over cross-block pairs.
    pub cross_block_max: Option<u32>,
    pub excess_examples: Vec<ExcessPair>,
}

impl DistanceReport {
    pub fn eccentricity_uniform(&self) -> bool {
        self.connected && self.eccentricity_min == self.eccentricity_max
    }
}

struct SourceDistances {
    ecc: Option<u32>,
    counts: Vec<u64>,
    unreachable: u64,
    excess: u64,
    excess_same: u64,
    cross_max: u32,
    examples: Vec<ExcessPair>,
}

fn bfs_from(g: &Graph, blocks: &[u32], s: u32) -> SourceDistances {
    let n = g.order();
    let words = g.words();
    let mut visited = vec![0u64; words];
    visited[s as usize / 64] |= 1 << (s % 64);
    let mut frontier = vec![s];
    let mut next = vec![0u64; words];
    let mut out = SourceDistances {
        ecc: None,
        counts: Vec::new(),
        unreachable: 0,
        excess: 0,
        excess_same: 0,
        cross_max: 0,
        examples: Vec::new(),
    };
    let mut reached = 1usize;
    let mut depth = 0u32;
    while !frontier.is_empty() {
        depth += 1;
        next.iter_mut().for_each(|w| *w = 0);
        for &v in &frontier {
            for (a, b) in next.iter_mut().zip(g.row(v)) {
                *a |= b;
            }
        }
        for (a, b) in next.iter_mut().zip(&visited) {
            *a &= !b;
        }
        for (a, b) in visited.iter_mut().zip(&next) {
            *a |= b;
        }
        frontier.clear();
        frontier.extend(iter_bits(&next));
        if frontier.is_empty() {
            break;
        }
        reached += frontier.len();
        let later = frontier.iter().filter(|&&v| v > s);
        let mut count = 0u64;
        for &v in later {
            count += 1;
            let same = blocks[v as usize] == blocks[s as usize];
            if !same {
                out.cross_max = out.cross_max.max(depth);
            }
            if depth > 2 {
                out.excess += 1;
                out.excess_same += same as u64;
                if out.examples.len() < EXCESS_SAMPLE {
                    out.examples.push(ExcessPair {
                        u: s,
                        v,
                        distance: depth,
                        same_block: same,
                    });
                }
            }
        }
        out.counts.push(count);
    }
    if reached == n {
        out.ecc = Some(out.counts.len() as u32);
    } else {
        out.unreachable = (s as usize + 1..n)
            .filter(|&v| visited[v / 64] >> (v % 64) & 1 == 0)
            .count() as u64;
    }
    out
}

/// Exact distance statistics from a BFS at every vertex.
pub fn distances(g: &Graph, blocks: &[u32]) -> DistanceReport {
    let n = g.order() as u32;
    let per_source: Vec<SourceDistances> = (0..n)
        .into_par_iter()
        .map(|s| bfs_from(g, blocks, s))
        .collect();
    let connected = per_source.iter().all(|s| s.ecc.is_some());
    let eccs: Vec<u32> = per_source.iter().filter_map(|s| s.ecc).collect();
    let mut pairs_by_distance = Vec::new();
    let mut report = DistanceReport {
        diameter: None,
        connected,
        eccentricity_min: None,
        eccentricity_max: None,
        pairs_by_distance: Vec::new(),
        unreachable_pairs: 0,
        excess_pairs: 0,
        excess_same_block: 0,
        cross_block_max: None,
        excess_examples: Vec::new(),
    };
    for s in &per_source {
        if pairs_by_distance.len() < s.counts.len() {
            pairs_by_distance.resize(s.counts.len(), 0);
        }
        for (acc, c) in pairs_by_distance.iter_mut().zip(&s.counts) {
            *acc += c;
        }
        report.unreachable_pairs += s.unreachable;
        report.excess_pairs += s.excess;
        report.excess_same_block += s.excess_same;
        if s.cross_max > 0 {
            report.cross_block_max = report.cross_block_max.max(Some(s.cross_max));
        }
        let room = EXCESS_SAMPLE - report.excess_examples.len();
        report.excess_examples.extend(s.examples.iter().take(room));
    }
    if connected && n > 0 {
        report.eccentricity_min = eccs.iter().copied().min();
        report.eccentricity_max = eccs.iter().copied().max();
        report.diameter = report.eccentricity_max;
    }
    report.pairs_by_distance = pairs_by_distance;
    report
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GirthReport {
    /// `None` for a forest.
    pub girth: Option<u32>,
    /// Lexicographically smallest triangle, when one exists.
    pub triangle: Option<[u32; 3]>,
}

pub fn find_triangle(g: &Graph) -> Option<[u32; 3]> {
    for (u, v) in g.edges() {
        let w = g
            .row(u)
            .iter()
            .zip(g.row(v))
            .map(|(a, b)| a & b)
            .enumerate()
            .find(|&(_, x)| x != 0)
            .map(|(i, x)| i as u32 * 64 + x.trailing_zeros());
        if let Some(w) = w {
            let mut t = [u, v, w];
            t.sort_unstable();
            return Some(t);
        }
    }
    None
}

/// Shortest cycle length. Triangles are found by row intersection; longer
/// girths fall back to a BFS from every vertex.
pub fn girth(g: &Graph) -> GirthReport {
    if let Some(t) = find_triangle(g) {
        return GirthReport {
            girth: Some(3),
            triangle: Some(t),
        };
    }
    let n = g.order();
    let best = (0..n as u32)
        .into_par_iter()
        .filter_map(|s| {
            let mut dist = vec![u32::MAX; n];
            let mut parent = vec![u32::MAX; n];
            dist[s as usize] = 0;
            let mut queue = std::collections::VecDeque::from([s]);
            let mut best: Option<u32> = None;
            while let Some(x) = queue.pop_front() {
                if best.is_some_and(|b| 2 * dist[x as usize] + 1 >= b) {
                    break;
                }
                for &y in g.neighbours(x) {
                    if dist[y as usize] == u32::MAX {
                        dist[y as usize] = dist[x as usize] + 1;
                        parent[y as usize] = x;
                        queue.push_back(y);
                    } else if parent[x as usize] != y {
                        let len = dist[x as usize] + dist[y as usize] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
            best
        })
        .min();
    GirthReport {
        girth: best,
        triangle: None,
    }
}

/// Minimum and maximum of a count over a set of pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct MinMax {
    pub min: Option<u32>,
    pub max: Option<u32>,
    pub pairs: u64,
}

impl MinMax {
    fn add(&mut self, x: u32) {
        self.min = Some(self.min.map_or(x, |m| m.min(x)));
        self.max = Some(self.max.map_or(x, |m| m.max(x)));
        self.pairs += 1;
    }

    fn merge(mut self, other: MinMax) -> MinMax {
        self.min = match (self.min, other.min) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.max = self.max.max(other.max);
        self.pairs += other.pairs;
        self
    }

    /// True when there is at least one pair and all share one value.
    pub fn constant(&self) -> Option<u32> {
        (self.pairs > 0 && self.min == self.max)
            .then_some(self.min)
            .flatten()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CommonNeighbourStats {
    pub same_block_nonadjacent: MinMax,
    pub same_block_adjacent: MinMax,
    pub cross_block_nonadjacent: MinMax,
    pub cross_block_adjacent: MinMax,
}

impl CommonNeighbourStats {
    fn merge(self, o: CommonNeighbourStats) -> CommonNeighbourStats {
        CommonNeighbourStats {
            same_block_nonadjacent: self.same_block_nonadjacent.merge(o.same_block_nonadjacent),
            same_block_adjacent: self.same_block_adjacent.merge(o.same_block_adjacent),
            cross_block_nonadjacent: self
                .cross_block_nonadjacent
                .merge(o.cross_block_nonadjacent),
            cross_block_adjacent: self.cross_block_adjacent.merge(o.cross_block_adjacent),
        }
    }
}

/// |Γ(u) ∩ Γ(v)| over all n(n−1)/2 pairs, split by block relation and
/// adjacency.
pub fn common_neighbour_stats(g: &Graph, blocks: &[u32]) -> CommonNeighbourStats {
    let n = g.order() as u32;
    (0..n)
        .into_par_iter()
        .map(|u| {
            let mut s = CommonNeighbourStats::default();
            for v in u + 1..n {
                let c = g.common_neighbours(u, v);
                let same = blocks[u as usize] == blocks[v as usize];
                let slot = match (same, g.is_adjacent(u, v)) {
                    (true, false) => &mut s.same_block_nonadjacent,
                    (true, true) => &mut s.same_block_adjacent,
                    (false, false) => &mut s.cross_block_nonadjacent,
                    (false, true) => &mut s.cross_block_adjacent,
                };
                slot.add(c);
            }
            s
        })
        .reduce(CommonNeighbourStats::default, CommonNeighbourStats::merge)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MulticoverReport {
    pub quotient_complete: bool,
    /// Every ordered block pair has exactly one vertex without neighbours
    /// in the target block.
    pub almost_multicover: bool,
    /// That vertex is always (σ, L(στ)).
    pub exceptional_vertex_matches: bool,
    /// All other vertices have exactly k neighbours in the target block.
    pub others_have_k: bool,
    pub within_block_edges: u64,
    /// Ordered block pairs whose count multiset is not {0} ∪ {k}^{q²−1}.
    pub multiset_violations: u64,
    /// Histogram of into-block neighbour counts over all (vertex, other
    /// block) pairs.
    pub count_histogram: BTreeMap<u32, u64>,
}

pub fn quotient_and_multicover(ug: &UnitaryGraph) -> MulticoverReport {
    let u = &ug.unital;
    let nb = ug.num_blocks();
    let k = ug.params.k;
    let g = &ug.graph;

    struct Partial {
        complete: bool,
        almost: bool,
        exceptional: bool,
        others_k: bool,
        within: u64,
        violations: u64,
        hist: BTreeMap<u32, u64>,
    }

    let parts: Vec<Partial> = (0..nb as u32)
        .into_par_iter()
        .map(|sigma| {
            let block = ug.block(sigma);
            let verts: Vec<u32> = block.clone().collect();
            let counts: Vec<Vec<u32>> = verts
                .iter()
                .map(|&v| {
                    let mut c = vec![0u32; nb];
                    for &w in g.neighbours(v) {
                        c[u.block_of(w) as usize] += 1;
                    }
                    c
                })
                .collect();
            let mut p = Partial {
                complete: true,
                almost: true,
                exceptional: true,
                others_k: true,
                within: 0,
                violations: 0,
                hist: BTreeMap::new(),
            };
            p.within = counts.iter().map(|c| c[sigma as usize] as u64).sum();
            for tau in (0..nb as u32).filter(|&t| t != sigma) {
                let column: Vec<u32> = counts.iter().map(|c| c[tau as usize]).collect();
                for &x in &column {
                    *p.hist.entry(x).or_default() += 1;
                }
                let zeros: Vec<usize> = (0..column.len()).filter(|&i| column[i] == 0).collect();
                if zeros.len() == column.len() {
                    p.complete = false;
                }
                if zeros.len() != 1 {
                    p.almost = false;
                }
                let expected = u
                    .line_through(sigma, tau)
                    .and_then(|line| u.flag_of(sigma, line));
                if zeros.len() != 1 || Some(verts[zeros[0]]) != expected {
                    p.exceptional = false;
                }
                let others_ok = column.iter().filter(|&&x| x != 0).all(|&x| x == k);
                if !others_ok {
                    p.others_k = false;
                }
                if zeros.len() != 1 || !others_ok {
                    p.violations += 1;
                }
            }
            p
        })
        .collect();

    let mut report = MulticoverReport {
        quotient_complete: true,
        almost_multicover: true,
        exceptional_vertex_matches: true,
        others_have_k: true,
        within_block_edges: 0,
        multiset_violations: 0,
        count_histogram: BTreeMap::new(),
    };
    for p in parts {
        report.quotient_complete &= p.complete;
        report.almost_multicover &= p.almost;
        report.exceptional_vertex_matches &= p.exceptional;
        report.others_have_k &= p.others_k;
        report.within_block_edges += p.within;
        report.multiset_violations += p.violations;
        for (c, m) in p.hist {
            *report.count_histogram.entry(c).or_default() += m;
        }
    }
    report.within_block_edges /= 2;
    report
}

/// Sign of A + B·s + C·s² for s = Δ^{1/3}, via the norm of the pure cubic
/// field Q(s): the two complex embeddings contribute a positive factor, so
/// the norm A³ + ΔB³ + Δ²C³ − 3ΔABC has the same sign.
pub fn cubic_sign(a: &BigInt, b: &BigInt, c: &BigInt, delta: &BigInt) -> std::cmp::Ordering {
    let norm = a.pow(3) + delta * b.pow(3) + delta * delta * c.pow(3)
        - BigInt::from(3) * delta * a * b * c;
    norm.sign().cmp(&num_bigint::Sign::NoSign)
}

/// Exact test of n ≥ Δ^{5/3} + Δ + Δ^{2/3} + Δ^{1/3}, i.e.
/// (n − Δ) − s − (Δ + 1)s² ≥ 0 with s = Δ^{1/3}.
pub fn exceeds_cubic_bound(n: u64, delta: u64) -> bool {
    let d = BigInt::from(delta);
    let a = BigInt::from(n) - &d;
    let c: BigInt = -(&d + 1u32);
    cubic_sign(&a, &BigInt::from(-1), &c, &d) != std::cmp::Ordering::Less
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MooreRow {
    pub q: u32,
    pub degree: u64,
    pub order: u64,
    /// Δ² + 1.
    pub moore_bound: u64,
    pub moore_gap: f64,
    /// Δ^{5/3} + Δ + Δ^{2/3} + Δ^{1/3}, for display only.
    pub cubic_bound_approx: f64,
    /// Exact comparison against the cubic bound.
    pub exceeds_cubic_bound: bool,
    pub measured_diameter: Option<u32>,
    pub supports_record: bool,
}

pub fn moore_row(q: u32, measured_diameter: Option<u32>) -> MooreRow {
    let q64 = q as u64;
    let degree = q64 * (q64 * q64 - 1);
    let order = q64 * q64 * (q64 * q64 * q64 + 1);
    let s = (degree as f64).cbrt();
    let cubic_bound_approx = s.powi(5) + s.powi(3) + s.powi(2) + s;
    let moore_bound = degree * degree + 1;
    MooreRow {
        q,
        degree,
        order,
        moore_bound,
        moore_gap: order as f64 / moore_bound as f64,
        cubic_bound_approx: (cubic_bound_approx * 10.0).round() / 10.0,
        exceeds_cubic_bound: exceeds_cubic_bound(order, degree),
        measured_diameter,
        supports_record: measured_diameter == Some(2),
    }
}

/// Degree/diameter table from certificates of k = 1 graphs, one row per q.
/// A q with a disconnected k = 1 graph reports no diameter; otherwise the
/// largest measured diameter is shown.
pub fn moore_report(certs: &[Certificate]) -> Vec<MooreRow> {
    let mut by_q: BTreeMap<u32, Vec<Option<u32>>> = BTreeMap::new();
    for c in certs.iter().filter(|c| c.params.k == 1) {
        by_q.entry(c.params.q).or_default().push(c.diameter);
    }
    by_q.into_iter()
        .map(|(q, ds)| {
            let d = if ds.contains(&None) {
                None
            } else {
                ds.into_iter().flatten().max()
            };
            moore_row(q, d)
        })
        .collect()
}

/// How a claim failure is treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimKind {
    /// Must hold for any correct build; failure is an internal error.
    Invariant,
    /// A published statement; failure is a recorded divergence.
    Published,
    /// Compared and reported, never asserted.
    Reference,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimStatus {
    Pass,
    Fail,
    MeasuredDivergent,
    Reported,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub id: String,
    pub kind: ClaimKind,
    pub status: ClaimStatus,
    pub expected: String,
    pub measured: String,
}

impl Claim {
    fn new(
        id: &str,
        kind: ClaimKind,
        ok: bool,
        expected: impl ToString,
        measured: impl ToString,
    ) -> Claim {
        let status = match (kind, ok) {
            (_, true) if kind != ClaimKind::Reference => ClaimStatus::Pass,
            (ClaimKind::Invariant, false) => ClaimStatus::Fail,
            (ClaimKind::Published, false) => ClaimStatus::MeasuredDivergent,
            _ => ClaimStatus::Reported,
        };
        Claim {
            id: id.to_string(),
            kind,
            status,
            expected: expected.to_string(),
            measured: measured.to_string(),
        }
    }

    fn skipped(id: &str, kind: ClaimKind, why: &str) -> Claim {
        Claim {
            id: id.to_string(),
            kind,
            status: ClaimStatus::Skipped,
            expected: String::new(),
            measured: why.to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ParamsEcho {
    pub p: u32,
    pub e: u32,
    pub q: u32,
    pub r: u32,
    pub lambda: u32,
    pub lambda_poly: String,
    pub k: u32,
    pub t_witness: u32,
    pub modulus: String,
}

impl ParamsEcho {
    pub fn new(f: &Field, params: &GraphParams) -> ParamsEcho {
        ParamsEcho {
            p: params.p,
            e: params.e,
            q: params.q,
            r: params.r,
            lambda: params.lambda.0,
            lambda_poly: f.format(params.lambda),
            k: params.k,
            t_witness: params.t_witness,
            modulus: f.format_modulus(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Certificate {
    pub schema: u32,
    pub params: ParamsEcho,
    pub method: Method,
    pub convention: Convention,
    pub order: usize,
    pub size: usize,
    pub degree_expected: usize,
    /// `None` if the graph is not regular.
    pub degree_measured: Option<usize>,
    pub diameter: Option<u32>,
    pub girth: Option<u32>,
    pub triangle: Option<[u32; 3]>,
    pub same_block_common: MinMax,
    pub cross_block_common: MinMax,
    pub cross_block_adjacent_common: MinMax,
    pub quotient_complete: bool,
    pub almost_multicover: bool,
    pub exceptional_vertex_matches: bool,
    pub sampled: bool,
    pub distances: DistanceReport,
    pub multicover: MulticoverReport,
    pub moore: Option<MooreRow>,
    pub build_discrepancies: Vec<crate::construct::Discrepancy>,
    pub claims: Vec<Claim>,
}

/// Overall verdict, in increasing severity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Ok,
    Divergent,
    InvariantFailure,
}

impl Certificate {
    pub fn claim(&self, id: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.id == id)
    }

    pub fn verdict(&self) -> Verdict {
        let mut v = Verdict::Ok;
        for c in &self.claims {
            match c.status {
                ClaimStatus::Fail => return Verdict::InvariantFailure,
                ClaimStatus::MeasuredDivergent => v = Verdict::Divergent,
                _ => {}
            }
        }
        v
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DefinitionScan {
    Auto,
    Always,
    Never,
}

#[derive(Debug, Clone, Copy)]
pub struct CertifyOptions {
    pub definition_scan: DefinitionScan,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            definition_scan: DefinitionScan::Auto,
        }
    }
}

fn fmt_opt<T: std::fmt::Display>(x: Option<T>) -> String {
    x.map_or_else(|| "none".to_string(), |v| v.to_string())
}

fn fmt_flags(ug: &UnitaryGraph, flags: &[u32]) -> String {
    let parts: Vec<String> = flags
        .iter()
        .map(|&v| {
            let fl = ug.unital.flag(v);
            format!("{v}:(P{},L{})", fl.point, fl.line)
        })
        .collect();
    format!("[{}]", parts.join(", "))
}

/// Runs every check on a built graph.
pub fn certify(ug: &UnitaryGraph, build: &BuildSummary, opts: &CertifyOptions) -> Certificate {
    let g = &ug.graph;
    let u = &ug.unital;
    let params = &ug.params;
    let f = u.field().as_ref();
    let n = g.order();
    let blocks: Vec<u32> = (0..n as u32).map(|v| u.block_of(v)).collect();
    let (q, k) = (params.q as u64, params.k as u64);

    let dist = distances(g, &blocks);
    let gi = girth(g);
    let cn = common_neighbour_stats(g, &blocks);
    let mc = quotient_and_multicover(ug);

    use ClaimKind::*;
    let mut claims = Vec::new();
    let expected_order = params.order();
    claims.push(Claim::new(
        "order",
        Invariant,
        n == expected_order,
        expected_order,
        n,
    ));
    claims.push(Claim::new(
        "no-within-block-edges",
        Invariant,
        mc.within_block_edges == 0,
        0,
        mc.within_block_edges,
    ));
    claims.push(Claim::new(
        "cross-block-distance-at-most-2",
        Published,
        dist.connected && dist.cross_block_max.is_some_and(|d| d <= 2),
        "<= 2",
        if dist.connected {
            fmt_opt(dist.cross_block_max)
        } else {
            "disconnected".to_string()
        },
    ));
    claims.push(Claim::new(
        "eccentricity-uniform",
        Invariant,
        dist.eccentricity_uniform(),
        "all equal",
        format!(
            "{}..{}",
            fmt_opt(dist.eccentricity_min),
            fmt_opt(dist.eccentricity_max)
        ),
    ));
    let same_all = cn.same_block_nonadjacent.merge(cn.same_block_adjacent);
    claims.push(Claim::new(
        "same-block-common-constant",
        Invariant,
        same_all.constant().is_some(),
        "constant",
        format!("{}..{}", fmt_opt(same_all.min), fmt_opt(same_all.max)),
    ));

    let degree_expected = params.expected_degree();
    let degree_measured = g.regular_degree();
    claims.push(Claim::new(
        "degree",
        Published,
        degree_measured == Some(degree_expected),
        degree_expected,
        fmt_opt(degree_measured),
    ));
    if build.method == Method::Both {
        let agree = !build.has(DiscrepancyKind::BuilderMismatch);
        claims.push(Claim::new(
            "builders-agree",
            Published,
            agree,
            "identical edge sets",
            if agree { "identical" } else { "different" },
        ));
    }
    if build.method != Method::Orbit {
        let sym = !build.has(DiscrepancyKind::Asymmetric);
        claims.push(Claim::new(
            "transport-symmetric",
            Published,
            sym,
            "symmetric",
            if sym { "symmetric" } else { "asymmetric" },
        ));
    }
    match (opts.definition_scan, n <= DEFINITION_SCAN_LIMIT) {
        (DefinitionScan::Always, _) | (DefinitionScan::Auto, true) => {
            let bad = definition_disagreements(ug, build.convention);
            claims.push(Claim::new(
                "definition-agrees",
                Published,
                bad == 0,
                "0 disagreeing pairs",
                format!("{bad} disagreeing pairs"),
            ));
        }
        _ => claims.push(Claim::skipped(
            "definition-agrees",
            Published,
            "pair scan skipped for this order",
        )),
    }

    let base = ug.base_vertex();
    let zero = u
        .canonical_objects(params.lambda)
        .expect("λ is nonzero")
        .zero;
    let measured: Vec<u32> = g
        .neighbours(base)
        .iter()
        .copied()
        .filter(|&x| u.block_of(x) == zero)
        .collect();
    let expected = zero_block_expected(u, params).expect("canonical flags exist");
    claims.push(Claim::new(
        "infinity-l-into-zero-block",
        Published,
        measured == expected,
        fmt_flags(ug, &expected),
        fmt_flags(ug, &measured),
    ));

    let lq = f.conj(params.lambda);
    let zero_n = BaseFlag::ZeroN(lq)
        .flag_index(u, params)
        .expect("(0, N) is a flag");
    let infinity = u.canonical_objects(params.lambda).expect("λ≠0").infinity;
    let mut companion: Vec<u32> = params
        .mus
        .iter()
        .filter_map(|&mu| {
            let dual = normalize(f, &[mu, crate::gf::Elem::ZERO, f.neg(lq)]).ok()?;
            u.flag_of(infinity, u.line_of(&dual)?)
        })
        .collect();
    companion.sort_unstable();
    let measured: Vec<u32> = g
        .neighbours(zero_n)
        .iter()
        .copied()
        .filter(|&x| u.block_of(x) == infinity)
        .collect();
    claims.push(Claim::new(
        "zero-n-into-infinity-block",
        Published,
        measured == companion,
        fmt_flags(ug, &companion),
        fmt_flags(ug, &measured),
    ));

    claims.push(Claim::new(
        "quotient-complete",
        Published,
        mc.quotient_complete,
        true,
        mc.quotient_complete,
    ));
    let multicover_ok = mc.almost_multicover && mc.exceptional_vertex_matches && mc.others_have_k;
    claims.push(Claim::new(
        "almost-multicover",
        Published,
        multicover_ok,
        format!(
            "{{0}} + {{{k}}}^{} per ordered block pair, 0 at (s, L(st))",
            q * q - 1
        ),
        format!("{} violating block pairs", mc.multiset_violations),
    ));
    let same_expected = (k * (k - 1) * q) as u32;
    claims.push(Claim::new(
        "same-block-common",
        Published,
        same_all.constant() == Some(same_expected),
        same_expected,
        format!("{}..{}", fmt_opt(same_all.min), fmt_opt(same_all.max)),
    ));
    claims.push(Claim::new(
        "diameter-two",
        Published,
        dist.diameter == Some(2),
        2,
        fmt_opt(dist.diameter),
    ));
    claims.push(Claim::new(
        "girth-three",
        Published,
        gi.girth == Some(3) && gi.triangle.is_some_and(|t| is_triangle(g, t)),
        3,
        fmt_opt(gi.girth),
    ));

    let cross = cn.cross_block_nonadjacent;
    let bound_a = q * q * (q - 2);
    let bound_b = (q * q - 1) * (q - 2);
    let min_cross = cross.min.map(u64::from);
    claims.push(Claim::new(
        "cross-block-common-vs-q2(q-2)",
        Reference,
        min_cross.is_some_and(|m| m >= bound_a),
        format!(">= {bound_a}"),
        format!(
            "min {} ({})",
            fmt_opt(cross.min),
            if min_cross.is_some_and(|m| m >= bound_a) {
                "holds"
            } else {
                "below"
            }
        ),
    ));
    claims.push(Claim::new(
        "cross-block-common-vs-(q2-1)(q-2)",
        Reference,
        min_cross.is_some_and(|m| m >= bound_b),
        format!(">= {bound_b}"),
        format!(
            "min {} ({})",
            fmt_opt(cross.min),
            if min_cross.is_some_and(|m| m >= bound_b) {
                "holds"
            } else {
                "below"
            }
        ),
    ));

    let moore = (params.k == 1).then(|| moore_row(params.q, dist.diameter));
    if let Some(m) = &moore {
        claims.push(Claim::new(
            "cubic-bound",
            Published,
            m.exceeds_cubic_bound,
            format!("n >= {:.1}", m.cubic_bound_approx),
            m.order,
        ));
    }

    Certificate {
        schema: CERTIFICATE_SCHEMA,
        params: ParamsEcho::new(f, params),
        method: build.method,
        convention: build.convention,
        order: n,
        size: g.size(),
        degree_expected,
        degree_measured,
        diameter: dist.diameter,
        girth: gi.girth,
        triangle: gi.triangle,
        same_block_common: cn.same_block_nonadjacent,
        cross_block_common: cn.cross_block_nonadjacent,
        cross_block_adjacent_common: cn.cross_block_adjacent,
        quotient_complete: mc.quotient_complete,
        almost_multicover: mc.almost_multicover,
        exceptional_vertex_matches: mc.exceptional_vertex_matches,
        sampled: false,
        distances: dist,
        multicover: mc,
        moore,
        build_discrepancies: build.discrepancies.clone(),
        claims,
    }
}

/// Adds a hard check that an externally supplied graph equals the
/// constructed one.
pub fn add_construction_match(cert: &mut Certificate, supplied: &Graph, built: &Graph) {
    let same = supplied == built;
    let detail = crate::construct::compare_graphs(supplied, built, "supplied", "constructed")
        .map_or_else(|| "identical".to_string(), |d| d.detail);
    cert.claims.insert(
        0,
        Claim::new(
            "matches-construction",
            ClaimKind::Invariant,
            same,
            "identical to constructed graph",
            detail,
        ),
    );
}

pub fn is_triangle(g: &Graph, [a, b, c]: [u32; 3]) -> bool {
    g.is_adjacent(a, b) && g.is_adjacent(b, c) && g.is_adjacent(a, c)
}
