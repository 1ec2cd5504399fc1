#![no_main]

use libfuzzer_sys::fuzz_target;
use rapoly::census::CensusDatabase;

fuzz_target!(|data: &[u8]| {
    let text = String::from_utf8_lossy(data);
    let _ = CensusDatabase::parse_entries(&text);
});
