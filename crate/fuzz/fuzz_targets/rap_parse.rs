#![no_main]

use libfuzzer_sys::fuzz_target;
use rapoly::CombinatorialPolyhedron;

fuzz_target!(|data: &[u8]| {
    let text = String::from_utf8_lossy(data);
    if let Ok(p) = CombinatorialPolyhedron::parse(&text) {
        // Whatever parses must serialize back to itself.
        assert_eq!(CombinatorialPolyhedron::parse(&p.serialize()).unwrap(), p);
    }
});
