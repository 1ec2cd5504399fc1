#![no_main]

use libfuzzer_sys::fuzz_target;
use rapoly::render::svg_metadata_all;

fuzz_target!(|data: &[u8]| {
    let text = String::from_utf8_lossy(data);
    let _ = svg_metadata_all(&text);
});
