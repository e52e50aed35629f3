#![no_main]

//! Fuzzes the hyperfield JSON document parser: arbitrary bytes must either
//! parse into a structurally valid table or fail with a typed error, never
//! panic. Parsed tables are round-tripped through the canonical rendering
//! and fed to the exhaustive verifiers when small enough for the cubic
//! scans to stay cheap.

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(ring) = hyperk::doc::parse_hyperfield(data) else {
        return;
    };
    // canonical rendering parses back to the same table
    let rendered = hyperk::doc::render_hyperfield(&ring, false);
    let reparsed = hyperk::doc::parse_hyperfield(rendered.as_bytes()).expect("round trip");
    assert_eq!(reparsed, ring);

    if ring.size() <= 24 {
        let report = hyperk::check_hyperfield(&ring);
        if report.all_pass() {
            let f = hyperk::FiniteHyperfield::try_new(ring).expect("verified hyperfield");
            let _ = hyperk::classify(&f);
            let _ = hyperk::reduced_k(&f, 2, hyperk::RelationMode::Distinct);
        }
    }
});
