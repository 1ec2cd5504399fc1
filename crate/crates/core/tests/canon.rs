mod common;

use proptest::prelude::*;
use rapoly::surgery::{edge_additions, lobell};
use rapoly::{canonical_code, canonical_form, isomorphic, CanonicalCode, CombinatorialPolyhedron};

use common::*;

/// Fixtures with at most 24 vertices, plus a relabeled copy of each.
fn fixtures() -> Vec<(String, CombinatorialPolyhedron)> {
    let mut out = small_maps();
    for (name, p) in small_valid() {
        if p.num_vertices() <= 24 {
            out.push((name.to_string(), p));
        }
    }
    for (i, (c, _)) in edge_additions(&lobell(5).unwrap()).into_iter().enumerate().take(6) {
        if c.num_vertices() <= 24 {
            out.push((format!("L5+{i}"), c));
        }
    }
    let copies: Vec<_> = out
        .iter()
        .enumerate()
        .map(|(i, (n, p))| (format!("{n}'"), p.relabel(&shuffled(p.num_vertices(), i as u64)).mirror()))
        .collect();
    out.extend(copies);
    out
}

#[test]
fn code_equality_matches_brute_force_isomorphism() {
    let fx = fixtures();
    let codes: Vec<CanonicalCode> = fx.iter().map(|(_, p)| canonical_code(p)).collect();
    let mut positives = 0;
    for i in 0..fx.len() {
        for j in i..fx.len() {
            let (a, b) = (&fx[i].1, &fx[j].1);
            if a.num_vertices() != b.num_vertices() {
                assert_ne!(codes[i], codes[j]);
                continue;
            }
            let iso = brute_force_isomorphic(a, b);
            assert_eq!(codes[i] == codes[j], iso, "{} vs {}", fx[i].0, fx[j].0);
            assert_eq!(isomorphic(a, b), iso);
            positives += iso as usize;
        }
    }
    // Every fixture matches at least itself and its copy.
    assert!(positives >= fx.len() + fx.len() / 2);
}

#[test]
fn code_layout() {
    let p = lobell(5).unwrap();
    let code = canonical_code(&p);
    let bytes = code.as_bytes();
    assert_eq!(bytes.len(), 4 + 2 * 3 * 20);
    assert_eq!(u32::from_be_bytes(bytes[..4].try_into().unwrap()), 20);
    assert_eq!(CanonicalCode::from_hex(&code.to_hex()), Some(code.clone()));
    assert!(isomorphic(&code.decode().unwrap(), &p));
    for bad in ["", "0", "zz", "00000001"] {
        let decoded = CanonicalCode::from_hex(bad).and_then(|c| c.decode());
        assert!(decoded.is_none(), "{bad:?}");
    }
}

#[test]
fn canonical_form_is_a_fixed_point() {
    for (name, p) in fixtures() {
        let c = canonical_form(&p);
        assert_eq!(canonical_form(&c), c, "{name}");
        assert_eq!(canonical_code(&c), canonical_code(&p), "{name}");
    }
}

fn any_fixture() -> impl Strategy<Value = CombinatorialPolyhedron> {
    proptest::sample::select(fixtures().into_iter().map(|(_, p)| p).collect::<Vec<_>>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn code_invariant_under_relabel_and_mirror(p in any_fixture(), seed in any::<u64>(), mirror in any::<bool>()) {
        let mut q = p.relabel(&shuffled(p.num_vertices(), seed));
        if mirror {
            q = q.mirror();
        }
        prop_assert_eq!(canonical_code(&q), canonical_code(&p));
        prop_assert_eq!(canonical_form(&q), canonical_form(&p));
    }

    #[test]
    fn hex_decoding_never_panics(s in "[0-9a-f]{0,120}") {
        if let Some(code) = CanonicalCode::from_hex(&s) {
            let _ = code.decode();
        }
    }
}
