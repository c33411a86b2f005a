use std::collections::BTreeMap;

use serde::Serialize;

use unitary_graphs::analysis::{
    certify, moore_report, Certificate, CertifyOptions, ClaimStatus, MooreRow, Verdict,
};
use unitary_graphs::construct::{build, enumerate_params, Method};

use crate::commands::{thread_pool, workspace};
use crate::fsio::{emit, ensure_dir, write_atomic};
use crate::{CliError, Status, SurveyArgs};

#[derive(Serialize)]
struct Group<'a> {
    r: u32,
    k: u32,
    classes: Vec<&'a Certificate>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Survey<'a> {
    schema: u32,
    p: u32,
    e: u32,
    q: u32,
    modulus: String,
    verdict: Verdict,
    groups: Vec<Group<'a>>,
    moore: Vec<MooreRow>,
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map_or_else(|| "-".to_string(), |v| v.to_string())
}

fn markdown(s: &Survey) -> String {
    let mut out = format!(
        "# Unitary graph survey, q = {} (p = {}, e = {})\n\nGF(q²) modulus: {}\n\n",
        s.q, s.p, s.e, s.modulus
    );
    out.push_str(
        "| r | k | λ | n | Δ | diameter | girth | same-block common | cross-block common (non-adj) | verdict | divergent claims |\n",
    );
    out.push_str("|---|---|---|---|---|---|---|---|---|---|---|\n");
    for g in &s.groups {
        for c in &g.classes {
            let divergent: Vec<&str> = c
                .claims
                .iter()
                .filter(|x| matches!(x.status, ClaimStatus::MeasuredDivergent | ClaimStatus::Fail))
                .map(|x| x.id.as_str())
                .collect();
            out.push_str(&format!(
                "| {} | {} | {} ({}) | {} | {} | {} | {} | {}..{} | {}..{} | {} | {} |\n",
                g.r,
                g.k,
                c.params.lambda,
                c.params.lambda_poly,
                c.order,
                opt(c.degree_measured),
                opt(c.diameter),
                opt(c.girth),
                opt(c.same_block_common.min),
                opt(c.same_block_common.max),
                opt(c.cross_block_common.min),
                opt(c.cross_block_common.max),
                serde_json::to_value(c.verdict())
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_string))
                    .unwrap_or_default(),
                if divergent.is_empty() {
                    "-".to_string()
                } else {
                    divergent.join(", ")
                },
            ));
        }
    }
    if !s.moore.is_empty() {
        out.push_str("\n## Degree/diameter (k = 1)\n\n");
        out.push_str("| q | Δ | n | Δ²+1 | n/(Δ²+1) | Δ^(5/3)+Δ+Δ^(2/3)+Δ^(1/3) | n exceeds it | measured diameter |\n");
        out.push_str("|---|---|---|---|---|---|---|---|\n");
        for m in &s.moore {
            out.push_str(&format!(
                "| {} | {} | {} | {} | {:.4} | {:.1} | {} | {} |\n",
                m.q,
                m.degree,
                m.order,
                m.moore_bound,
                m.moore_gap,
                m.cubic_bound_approx,
                m.exceeds_cubic_bound,
                opt(m.measured_diameter)
            ));
        }
    }
    out
}

pub fn run(args: SurveyArgs) -> Result<Status, CliError> {
    let ws = workspace(args.p, args.e)?;
    let pool = thread_pool(args.jobs)?;
    let opts = CertifyOptions::default();
    let mut certs = Vec::new();
    for params in enumerate_params(&ws.field) {
        let (ug, summary) = build(&ws, &params, Method::Both, args.convention.into())?;
        certs.push(pool.install(|| certify(&ug, &summary, &opts)));
    }
    let verdict = certs
        .iter()
        .map(Certificate::verdict)
        .max()
        .unwrap_or(Verdict::Ok);
    let mut grouped: BTreeMap<(u32, u32), Vec<&Certificate>> = BTreeMap::new();
    for c in &certs {
        grouped.entry((c.params.r, c.params.k)).or_default().push(c);
    }
    let survey = Survey {
        schema: 1,
        p: args.p,
        e: args.e,
        q: ws.field.q(),
        modulus: ws.field.format_modulus(),
        verdict,
        groups: grouped
            .into_iter()
            .map(|((r, k), classes)| Group { r, k, classes })
            .collect(),
        moore: moore_report(&certs),
    };
    let md = markdown(&survey);
    match &args.out_dir {
        Some(dir) => {
            ensure_dir(dir)?;
            let mut json = serde_json::to_string_pretty(&survey).expect("survey serializes");
            json.push('\n');
            write_atomic(&dir.join("survey.json"), json.as_bytes())?;
            write_atomic(&dir.join("survey.md"), md.as_bytes())?;
        }
        None => emit(None, &md)?,
    }
    Ok(verdict.into())
}
