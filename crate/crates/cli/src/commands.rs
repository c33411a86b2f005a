use std::path::Path;

use serde_json::json;

use unitary_graphs::analysis::{add_construction_match, certify, CertifyOptions};
use unitary_graphs::construct::{
    build as build_graph, enumerate_params, validate_lambda, BuildSummary, GraphParams,
    UnitaryGraph, Workspace,
};
use unitary_graphs::formats::{
    encode_graph6, parse_edge_list, sha256_hex, write_edge_list, EdgeListHeader, Manifest,
    ManifestFile,
};
use unitary_graphs::gf::Field;

use crate::fsio::{emit, ensure_dir, write_atomic};
use crate::{BuildArgs, CliError, ExportArgs, FormatArg, GraphArgs, Status, VerifyArgs};

const ELEMENT_TABLE_LIMIT: u32 = 1024;

pub fn thread_pool(jobs: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Internal(format!("thread pool: {e}")))
}

pub fn field_info(p: u32, e: u32, as_json: bool) -> Result<Status, CliError> {
    let f = Field::new(p, e)?;
    let table = f.size() <= ELEMENT_TABLE_LIMIT;
    let rows: Vec<_> = f
        .elements()
        .filter(|_| table)
        .map(|a| {
            json!({
                "enc": a.0,
                "poly": f.format(a),
                "log": f.log(a),
                "conj": f.conj(a).0,
                "inSubfield": f.in_subfield(a),
            })
        })
        .collect();
    let out = if as_json {
        let body = json!({
            "p": p,
            "e": e,
            "q": f.q(),
            "size": f.size(),
            "modulus": f.format_modulus(),
            "generator": f.generator().0,
            "generatorPoly": f.format(f.generator()),
            "elements": rows,
        });
        format!("{}\n", serde_json::to_string_pretty(&body).expect("json"))
    } else {
        let mut s = format!(
            "GF({}) = GF({p})[t]/({}), q = {}\ngenerator: {} (enc {})\n",
            f.size(),
            f.format_modulus(),
            f.q(),
            f.format(f.generator()),
            f.generator().0
        );
        if table {
            s.push_str("enc\tpoly\tlog\tconj\tin GF(q)\n");
            for a in f.elements() {
                s.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\n",
                    a.0,
                    f.format(a),
                    f.log(a).map_or("-".to_string(), |l| l.to_string()),
                    f.conj(a).0,
                    f.in_subfield(a)
                ));
            }
        } else {
            s.push_str(&format!("({} elements; table omitted)\n", f.size()));
        }
        s
    };
    emit(None, &out)?;
    Ok(Status::Ok)
}

pub fn unital(p: u32, e: u32, as_json: bool) -> Result<Status, CliError> {
    let ws = workspace(p, e)?;
    let r = ws.unital.incidence_report();
    let out = if as_json {
        format!("{}\n", serde_json::to_string_pretty(&r).expect("json"))
    } else {
        format!(
            "U_H({q}): {} points, {} lines\npoints per line: {:?}\nlines per point: {:?}\n\
             pairs on a unique line: {}/{}\nflags: {} in {} blocks of size {:?}\nstatus: {}\n",
            r.points,
            r.lines,
            r.points_per_line,
            r.lines_per_point,
            r.pairs_on_unique_line,
            r.point_pairs,
            r.flags,
            r.blocks,
            r.block_size,
            if r.ok { "ok" } else { "FAILED" },
            q = r.q,
        )
    };
    emit(None, &out)?;
    Ok(if r.ok {
        Status::Ok
    } else {
        Status::InvariantFailure
    })
}

pub fn workspace(p: u32, e: u32) -> Result<Workspace, CliError> {
    Workspace::new(p, e).map_err(CliError::from)
}

fn require<T>(x: Option<T>, flag: &str) -> Result<T, CliError> {
    x.ok_or_else(|| CliError::Usage(format!("missing required flag --{flag}")))
}

pub fn resolve(args: &GraphArgs) -> Result<(Workspace, GraphParams), CliError> {
    let p = require(args.p, "p")?;
    let e = require(args.e, "e")?;
    let r = require(args.r, "r")?;
    let lambda = require(args.lambda, "lambda")?;
    let ws = workspace(p, e)?;
    let lambda = ws.field.elem(lambda)?;
    let params = validate_lambda(&ws.field, r, lambda)?;
    Ok((ws, params))
}

fn header(params: &GraphParams, ug: &UnitaryGraph) -> EdgeListHeader {
    EdgeListHeader {
        p: params.p,
        e: params.e,
        r: params.r,
        lambda: params.lambda.0,
        k: params.k,
        n: ug.graph.order(),
        m: ug.graph.size(),
    }
}

fn manifest(
    params: &GraphParams,
    ug: &UnitaryGraph,
    summary: &BuildSummary,
    files: Vec<ManifestFile>,
) -> Manifest {
    let edge_text = write_edge_list(&header(params, ug), &ug.graph);
    Manifest {
        schema: 1,
        params: header(params, ug),
        order: ug.graph.order(),
        size: ug.graph.size(),
        degree: ug.graph.regular_degree(),
        method: summary.method.as_str().to_string(),
        convention: summary.convention.as_str().to_string(),
        edge_list_sha256: sha256_hex(edge_text.as_bytes()),
        files,
    }
}

fn divergence(summary: &BuildSummary) -> Status {
    for d in &summary.discrepancies {
        eprintln!("discrepancy ({:?}): {}", d.kind, d.detail);
    }
    if summary.discrepancies.is_empty() {
        Status::Ok
    } else {
        Status::Divergent
    }
}

fn lambda_list(args: &GraphArgs) -> Result<Status, CliError> {
    let ws = workspace(require(args.p, "p")?, require(args.e, "e")?)?;
    let f = &ws.field;
    let mut out = String::from("r\tlambda\tpoly\tk\n");
    for params in enumerate_params(f) {
        if args.r.is_some_and(|r| r != params.r) {
            continue;
        }
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            params.r,
            params.lambda.0,
            f.format(params.lambda),
            params.k
        ));
    }
    emit(None, &out)?;
    Ok(Status::Ok)
}

pub fn build(args: BuildArgs) -> Result<Status, CliError> {
    if args.lambda_list {
        return lambda_list(&args.graph);
    }
    let (ws, params) = resolve(&args.graph)?;
    let (ug, summary) = build_graph(
        &ws,
        &params,
        args.graph.method.into(),
        args.graph.convention.into(),
    )?;
    let text = match args.format {
        FormatArg::Edgelist => write_edge_list(&header(&params, &ug), &ug.graph),
        FormatArg::Graph6 => encode_graph6(&ug.graph),
        FormatArg::Json => manifest(&params, &ug, &summary, Vec::new()).to_json(),
    };
    emit(args.out.as_deref(), &text)?;
    Ok(divergence(&summary))
}

pub fn export(args: ExportArgs) -> Result<Status, CliError> {
    let (ws, params) = resolve(&args.graph)?;
    let (ug, summary) = build_graph(
        &ws,
        &params,
        args.graph.method.into(),
        args.graph.convention.into(),
    )?;
    ensure_dir(&args.out_dir)?;
    let stem = format!(
        "unitary-p{}-e{}-r{}-l{}",
        params.p, params.e, params.r, params.lambda.0
    );
    let mut files = Vec::new();
    for (ext, format, body) in [
        (
            "edges",
            "edgelist",
            write_edge_list(&header(&params, &ug), &ug.graph),
        ),
        ("g6", "graph6", encode_graph6(&ug.graph)),
    ] {
        let name = format!("{stem}.{ext}");
        write_atomic(&args.out_dir.join(&name), body.as_bytes())?;
        files.push(ManifestFile {
            name,
            format: format.to_string(),
            sha256: sha256_hex(body.as_bytes()),
        });
    }
    let m = manifest(&params, &ug, &summary, files);
    write_atomic(
        &args.out_dir.join(format!("{stem}.manifest.json")),
        m.to_json().as_bytes(),
    )?;
    Ok(divergence(&summary))
}

fn check_header_flag(flag: Option<u32>, value: u32, name: &str) -> Result<(), CliError> {
    match flag {
        Some(v) if v != value => Err(CliError::Usage(format!(
            "--{name} {v} conflicts with the edge-list header ({name}={value})"
        ))),
        _ => Ok(()),
    }
}

pub fn verify(args: VerifyArgs) -> Result<Status, CliError> {
    let pool = thread_pool(args.jobs)?;
    let opts = CertifyOptions {
        definition_scan: args.definition_scan.into(),
    };
    let mut g = args.graph.clone();
    let supplied = match &args.edges {
        Some(path) => {
            let text = read(path)?;
            let (h, graph) = parse_edge_list(&text)?;
            check_header_flag(g.p, h.p, "p")?;
            check_header_flag(g.e, h.e, "e")?;
            check_header_flag(g.r, h.r, "r")?;
            check_header_flag(g.lambda, h.lambda, "lambda")?;
            (g.p, g.e, g.r, g.lambda) = (Some(h.p), Some(h.e), Some(h.r), Some(h.lambda));
            Some((h, graph))
        }
        None => None,
    };
    let (ws, params) = resolve(&g)?;
    let (built, summary) = build_graph(&ws, &params, g.method.into(), g.convention.into())?;
    let cert = pool.install(|| match &supplied {
        Some((h, graph)) => {
            let candidate = UnitaryGraph {
                params: params.clone(),
                unital: ws.unital.clone(),
                graph: graph.clone(),
            };
            let order_ok = h.n == params.order() && h.k == params.k;
            let mut cert = if order_ok {
                certify(&candidate, &summary, &opts)
            } else {
                certify(&built, &summary, &opts)
            };
            add_construction_match(&mut cert, graph, &built.graph);
            cert
        }
        None => certify(&built, &summary, &opts),
    });
    emit(args.out.as_deref(), &cert.to_json())?;
    let failing: Vec<_> = cert
        .claims
        .iter()
        .filter(|c| {
            matches!(
                c.status,
                unitary_graphs::analysis::ClaimStatus::Fail
                    | unitary_graphs::analysis::ClaimStatus::MeasuredDivergent
            )
        })
        .collect();
    for c in failing {
        eprintln!(
            "{} [{:?}]: expected {}, measured {}",
            c.id, c.status, c.expected, c.measured
        );
    }
    Ok(cert.verdict().into())
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}
