#![no_main]

use libfuzzer_sys::fuzz_target;
use rapoly::FaceVector;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Some(fv) = FaceVector::parse_sparse(text) {
        assert_eq!(FaceVector::parse_sparse(&fv.to_sparse_string()), Some(fv));
    }
});
