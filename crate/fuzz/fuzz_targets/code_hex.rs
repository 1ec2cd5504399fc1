#![no_main]

use libfuzzer_sys::fuzz_target;
use rapoly::{canonical_code, CanonicalCode};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Some(p) = CanonicalCode::from_hex(text).and_then(|c| c.decode()) {
        // A decoded map re-encodes to a code that decodes to the same map.
        let again = canonical_code(&p).decode().unwrap();
        assert_eq!(canonical_code(&again), canonical_code(&p));
    }
});
