#![no_main]

use libfuzzer_sys::fuzz_target;
use rapoly::census::ReferenceTable;

fuzz_target!(|data: &[u8]| {
    let text = String::from_utf8_lossy(data);
    if let Ok(t) = ReferenceTable::parse(&text) {
        assert!(t.volumes().iter().all(|v| *v > 0.0));
    }
});
