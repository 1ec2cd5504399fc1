mod common;

use std::path::PathBuf;

use rapoly::census::{parse_seed_spec, CensusDatabase, CensusOptions, DEFAULT_SEEDS};
use rapoly::render::{
    contact_sheet, crossings, default_outer_face, render, svg_metadata, svg_metadata_all, to_svg,
    tutte_embedding, tutte_residual, Embedding2D, RenderError, RenderOptions,
};
use rapoly::surgery::lobell;
use rapoly::{canonical_code, canonical_form, CombinatorialPolyhedron};

use common::*;

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Compares with a checked-in file; `RAPOLY_BLESS=1` rewrites it.
fn check_golden(name: &str, actual: &str) {
    let path = golden(name);
    if std::env::var_os("RAPOLY_BLESS").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "{name} differs from the golden file");
}

fn rank7() -> CombinatorialPolyhedron {
    let sources = parse_seed_spec(DEFAULT_SEEDS).unwrap();
    let mut db = CensusDatabase::init_from_sources(&sources, None, CensusOptions::default()).unwrap();
    db.extend(7).unwrap();
    db.polyhedron(db.ranked()[6]).unwrap().clone()
}

#[test]
fn dodecahedron_drawing_has_fivefold_symmetry() {
    let p = lobell(5).unwrap();
    let outer = default_outer_face(&p);
    assert_eq!(p.face_len(outer), 5);
    let emb = tutte_embedding(&p, outer).unwrap();
    assert!(tutte_residual(&p, &emb) < 1e-10);
    assert!(crossings(&p, &emb).is_empty());
    let (c, s) = ((0.4 * std::f64::consts::PI).cos(), (0.4 * std::f64::consts::PI).sin());
    for &[x, y] in &emb.coords {
        let r = [c * x - s * y, s * x + c * y];
        let hit = emb.coords.iter().any(|q| (q[0] - r[0]).abs() < 1e-9 && (q[1] - r[1]).abs() < 1e-9);
        assert!(hit, "rotated ({x}, {y}) is not a vertex");
    }
}

#[test]
fn interior_vertices_are_barycenters() {
    for (name, p) in small_valid() {
        for outer in [default_outer_face(&p), 0, p.num_faces() - 1] {
            let emb = tutte_embedding(&p, outer).unwrap();
            assert_eq!(emb.outer_face, outer);
            assert!(tutte_residual(&p, &emb) < 1e-10, "{name}");
            assert!(crossings(&p, &emb).is_empty(), "{name}");
            let boundary = p.face_vertices(outer);
            for v in 0..p.num_vertices() {
                let [x, y] = emb.coords[v];
                if boundary.contains(&v) {
                    assert!((x * x + y * y - 1.0).abs() < 1e-12);
                } else {
                    let nb = p.rotation(v);
                    let mx = nb.iter().map(|&w| emb.coords[w][0]).sum::<f64>() / 3.0;
                    let my = nb.iter().map(|&w| emb.coords[w][1]).sum::<f64>() / 3.0;
                    assert!((x - mx).abs() < 1e-10 && (y - my).abs() < 1e-10, "{name}");
                }
            }
        }
    }
    assert!(matches!(tutte_embedding(&lobell(5).unwrap(), 99), Err(RenderError::UnknownFace(99))));
}

#[test]
fn golden_drawings() {
    let opts = RenderOptions::default();
    check_golden("l5.svg", &render(&canonical_form(&lobell(5).unwrap()), &opts).unwrap());
    check_golden("rank7.svg", &render(&rank7(), &opts).unwrap());
}

#[test]
fn outer_face_choice_keeps_the_polyhedron() {
    let p = a3();
    let code = canonical_code(&p);
    let mut drawings = std::collections::BTreeSet::new();
    for outer in 0..p.num_faces() {
        let emb = tutte_embedding(&p, outer).unwrap();
        let svg = to_svg(&p, &emb, &RenderOptions::default()).unwrap();
        assert_eq!(canonical_code(&svg_metadata(&svg).unwrap()), code);
        drawings.insert(svg);
    }
    assert!(drawings.len() > 1);
}

#[test]
fn crossing_drawings_are_refused() {
    let p = lobell(6).unwrap();
    let mut emb = tutte_embedding(&p, default_outer_face(&p)).unwrap();
    let inner = (0..p.num_vertices()).find(|v| !p.face_vertices(emb.outer_face).contains(v)).unwrap();
    emb.coords[inner] = [5.0, 5.0];
    assert!(!crossings(&p, &emb).is_empty());
    assert!(matches!(to_svg(&p, &emb, &RenderOptions::default()), Err(RenderError::Crossing(..))));
    let empty = Embedding2D { coords: vec![[0.0, 0.0]; p.num_vertices()], outer_face: 0 };
    assert!(to_svg(&p, &empty, &RenderOptions::default()).is_err());
}

#[test]
fn contact_sheet_holds_every_panel() {
    let polys: Vec<(String, CombinatorialPolyhedron)> =
        small_valid().into_iter().map(|(n, p)| (format!("{n} <&>"), p)).collect();
    let items: Vec<(String, &CombinatorialPolyhedron)> = polys.iter().map(|(n, p)| (n.clone(), p)).collect();
    let opts = RenderOptions { size: 100, ..RenderOptions::default() };
    let svg = contact_sheet(&items, 3, &opts).unwrap();
    assert!(svg.contains("width=\"300.000\""));
    assert!(svg.contains("L5 &lt;&amp;&gt;"));
    let back = svg_metadata_all(&svg).unwrap();
    assert_eq!(back.len(), polys.len());
    for (b, (_, p)) in back.iter().zip(&polys) {
        assert_eq!(b, p);
    }
    assert!(matches!(svg_metadata_all("<svg></svg>"), Err(RenderError::NoMetadata)));
    assert!(matches!(svg_metadata("<metadata>RAP1 x</metadata>"), Err(RenderError::Metadata(_))));
}

#[test]
fn options_reach_the_output() {
    let p = lobell(5).unwrap();
    let opts = RenderOptions { size: 200, stroke_width: 2.5, vertex_radius: 3.0, margin: 10.0 };
    let svg = render(&p, &opts).unwrap();
    assert!(svg.starts_with("<?xml"));
    assert!(svg.contains("width=\"200\""));
    assert!(svg.contains("stroke-width=\"2.500\""));
    assert_eq!(svg.matches("<circle").count(), 20);
    assert_eq!(svg.matches("<line").count(), 30);
    assert!(!svg.contains("-0.000"));
}
