#![no_main]

use libfuzzer_sys::{fuzz_target, Corpus};
use qgchi::MetricGraph;

fuzz_target!(|data: &[u8]| -> Corpus {
    let Ok(text) = std::str::from_utf8(data) else {
        return Corpus::Reject;
    };
    let Ok(graph) = MetricGraph::from_json(text) else {
        return Corpus::Keep;
    };
    let report = graph.validate();
    if report.is_valid() {
        let summary = graph.summarize().expect("valid graphs summarize");
        assert_eq!(summary.chi, graph.vertex_count() as i64 - graph.edge_count() as i64);
    }
    let again = MetricGraph::from_json(&graph.to_json()).expect("serialized graph parses");
    assert_eq!(again, graph);
    Corpus::Keep
});
