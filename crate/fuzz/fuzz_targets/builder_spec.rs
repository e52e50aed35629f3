#![no_main]

//! Fuzzes the builder-name parser used by the command line, building the
//! table whenever the parsed parameters are small.

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(spec) = text.parse::<hyperk::BuilderSpec>() else {
        return;
    };
    let small = match spec {
        hyperk::BuilderSpec::Q2 | hyperk::BuilderSpec::Krasner => true,
        hyperk::BuilderSpec::Kaleidoscope(n) => n <= 32,
        hyperk::BuilderSpec::H(p) | hyperk::BuilderSpec::Gf(p) => p <= 64,
    };
    if small {
        let _ = hyperk::builtin(&spec);
    }
});
