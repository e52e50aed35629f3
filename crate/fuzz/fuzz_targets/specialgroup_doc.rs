#![no_main]

//! Fuzzes the special-group JSON document parser and the axiom checker on
//! small tables: load applies the symmetry closure, so whatever parses must
//! survive check_sg and the degree-3 extension without panicking.

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(table) = hyperk::doc::parse_special_group(data) else {
        return;
    };
    let rendered = hyperk::doc::render_special_group(&table, false);
    let reparsed = hyperk::doc::parse_special_group(rendered.as_bytes()).expect("round trip");
    assert_eq!(reparsed.iso_pairs(), table.iso_pairs());

    if table.dim() <= 3 {
        let sg = hyperk::check_sg(&table);
        if sg.classification >= hyperk::SgClass::PreSpecial {
            let _ = hyperk::dm_ktheory(&table, 2);
        }
        let _ = hyperk::reality_check(&table, 2 * table.group_size());
    }
});
