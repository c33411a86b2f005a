use unitary_graphs::construct::{
    build, build_graph_orbit, build_graph_transport, compare_graphs, enumerate_params, Convention,
    Method, Workspace,
};
use unitary_graphs::group::generating_set;

#[test]
fn orbit_and_transport_agree_for_q4() {
    let ws = Workspace::new(2, 2).unwrap();
    let params = enumerate_params(&ws.field);
    assert_eq!(params.len(), 17);
    for p in &params {
        let gens = generating_set(&ws.field, p.r).unwrap();
        let orbit = build_graph_orbit(ws.unital.clone(), p, &gens).unwrap();
        let transport =
            build_graph_transport(ws.unital.clone(), p, &gens, Convention::Balanced).unwrap();
        assert!(
            compare_graphs(
                &orbit.graph.graph,
                &transport.graph.graph,
                "orbit",
                "transport"
            )
            .is_none(),
            "r={} λ={}",
            p.r,
            p.lambda
        );
        assert_eq!(
            orbit.graph.graph.regular_degree(),
            Some(p.expected_degree())
        );
    }
}

#[test]
fn monic_convention_is_reported_divergent() {
    let ws = Workspace::new(3, 1).unwrap();
    let p = &enumerate_params(&ws.field)[0];
    let (_, summary) = build(&ws, p, Method::Both, Convention::Monic).unwrap();
    assert!(!summary.discrepancies.is_empty());
    let (_, summary) = build(&ws, p, Method::Both, Convention::Balanced).unwrap();
    assert!(summary.discrepancies.is_empty());
}
