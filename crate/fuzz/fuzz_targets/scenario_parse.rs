#![no_main]

use libfuzzer_sys::fuzz_target;

// Scenario files are untrusted JSON documents: structural parsing, family
// resolution (catalog ids and declared fields, including the embedded
// expression grammar and the Herglotz probe validation) must never panic.
fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = loewner::scenario::Scenario::from_json_str(text);
    }
});
