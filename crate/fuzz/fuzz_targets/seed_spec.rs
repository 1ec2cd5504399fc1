#![no_main]

use libfuzzer_sys::fuzz_target;
use rapoly::census::parse_seed_spec;

// Only parses; building `file:` sources would touch the filesystem.
fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = parse_seed_spec(text);
    }
});
