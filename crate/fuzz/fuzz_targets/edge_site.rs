#![no_main]

use libfuzzer_sys::fuzz_target;
use rapoly::surgery::{apply_edge_addition, lobell, EdgeAdditionSite};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let p = lobell(8).unwrap();
    if let Ok(site) = EdgeAdditionSite::parse(&p, text) {
        apply_edge_addition(&p, &site).unwrap();
    }
});
