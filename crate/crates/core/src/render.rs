//! Tutte embeddings of the 1-skeleton and SVG output.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt::Write as _;

use nalgebra::DMatrix;
use thiserror::Error;

use crate::polyhedron::{CombinatorialPolyhedron, Edge, FaceId, ParseError};

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("face {0} does not exist")]
    UnknownFace(FaceId),
    #[error("singular Laplacian")]
    Singular,
    #[error("edges {0} and {1} cross")]
    Crossing(Edge, Edge),
    #[error("no polyhedron metadata in SVG")]
    NoMetadata,
    #[error("bad polyhedron metadata: {0}")]
    Metadata(#[from] ParseError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Embedding2D {
    pub coords: Vec<[f64; 2]>,
    pub outer_face: FaceId,
}

/// A largest face, lowest id first.
pub fn default_outer_face(p: &CombinatorialPolyhedron) -> FaceId {
    let mut best = 0;
    for f in 1..p.num_faces() {
        if p.face_len(f) > p.face_len(best) {
            best = f;
        }
    }
    best
}

/// Pins `outer` to a regular polygon on the unit circle and places every
/// other vertex at the mean of its neighbors.
pub fn tutte_embedding(p: &CombinatorialPolyhedron, outer: FaceId) -> Result<Embedding2D, RenderError> {
    if outer >= p.num_faces() {
        return Err(RenderError::UnknownFace(outer));
    }
    let n = p.num_vertices();
    let ring = p.face_vertices(outer);
    let mut coords = vec![[0.0; 2]; n];
    let mut pinned = vec![false; n];
    for (i, &v) in ring.iter().enumerate() {
        let a = FRAC_PI_2 + TAU * i as f64 / ring.len() as f64;
        coords[v] = [a.cos(), a.sin()];
        pinned[v] = true;
    }
    let free: Vec<usize> = (0..n).filter(|&v| !pinned[v]).collect();
    let mut index = vec![usize::MAX; n];
    for (i, &v) in free.iter().enumerate() {
        index[v] = i;
    }
    let m = free.len();
    let mut a = DMatrix::<f64>::zeros(m, m);
    let mut b = DMatrix::<f64>::zeros(m, 2);
    for (i, &v) in free.iter().enumerate() {
        a[(i, i)] = 3.0;
        for w in p.rotation(v) {
            if pinned[w] {
                b[(i, 0)] += coords[w][0];
                b[(i, 1)] += coords[w][1];
            } else {
                a[(i, index[w])] -= 1.0;
            }
        }
    }
    let lu = a.clone().lu();
    let mut x = lu.solve(&b).ok_or(RenderError::Singular)?;
    // One round of refinement.
    let r = &b - &a * &x;
    if let Some(dx) = lu.solve(&r) {
        x += dx;
    }
    for (i, &v) in free.iter().enumerate() {
        coords[v] = [x[(i, 0)], x[(i, 1)]];
    }
    Ok(Embedding2D {
        coords,
        outer_face: outer,
    })
}

/// Largest deviation of a free vertex from the mean of its neighbors.
pub fn tutte_residual(p: &CombinatorialPolyhedron, emb: &Embedding2D) -> f64 {
    let ring = p.face_vertices(emb.outer_face);
    let mut worst: f64 = 0.0;
    for v in 0..p.num_vertices() {
        if ring.contains(&v) {
            continue;
        }
        for c in 0..2 {
            let mean: f64 = p.rotation(v).iter().map(|&w| emb.coords[w][c]).sum::<f64>() / 3.0;
            worst = worst.max((emb.coords[v][c] - mean).abs());
        }
    }
    worst
}

fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn on_segment(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> bool {
    c[0] >= a[0].min(b[0]) && c[0] <= a[0].max(b[0]) && c[1] >= a[1].min(b[1]) && c[1] <= a[1].max(b[1])
}

fn segments_meet(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    let eps = 1e-12;
    let (o1, o2) = (orient(a, b, c), orient(a, b, d));
    let (o3, o4) = (orient(c, d, a), orient(c, d, b));
    if ((o1 > eps && o2 < -eps) || (o1 < -eps && o2 > eps)) && ((o3 > eps && o4 < -eps) || (o3 < -eps && o4 > eps)) {
        return true;
    }
    (o1.abs() <= eps && on_segment(a, b, c))
        || (o2.abs() <= eps && on_segment(a, b, d))
        || (o3.abs() <= eps && on_segment(c, d, a))
        || (o4.abs() <= eps && on_segment(c, d, b))
}

/// Pairs of edges without a common endpoint whose segments meet.
pub fn crossings(p: &CombinatorialPolyhedron, emb: &Embedding2D) -> Vec<(Edge, Edge)> {
    let edges = p.edges();
    let mut out = Vec::new();
    for (i, &e) in edges.iter().enumerate() {
        for &g in &edges[i + 1..] {
            if e.0 == g.0 || e.0 == g.1 || e.1 == g.0 || e.1 == g.1 {
                continue;
            }
            let c = |v: usize| emb.coords[v];
            if segments_meet(c(e.0), c(e.1), c(g.0), c(g.1)) {
                out.push((e, g));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderOptions {
    /// Canvas width and height in pixels.
    pub size: u32,
    pub stroke_width: f64,
    /// Radius of vertex dots; none when zero.
    pub vertex_radius: f64,
    pub margin: f64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            size: 512,
            stroke_width: 1.5,
            vertex_radius: 0.0,
            margin: 16.0,
        }
    }
}

fn panel(out: &mut String, p: &CombinatorialPolyhedron, emb: &Embedding2D, size: f64, opts: &RenderOptions) {
    let half = size / 2.0;
    let scale = half - opts.margin;
    let px = |v: usize| {
        let [x, y] = emb.coords[v];
        (half + scale * x, half - scale * y)
    };
    let _ = writeln!(
        out,
        "<g stroke=\"black\" stroke-width=\"{}\" stroke-linecap=\"round\" fill=\"none\">",
        fmt_num(opts.stroke_width)
    );
    for e in p.edges() {
        let (x1, y1) = px(e.0);
        let (x2, y2) = px(e.1);
        let _ = writeln!(
            out,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
            fmt_num(x1),
            fmt_num(y1),
            fmt_num(x2),
            fmt_num(y2)
        );
    }
    out.push_str("</g>\n");
    if opts.vertex_radius > 0.0 {
        out.push_str("<g fill=\"black\">\n");
        for v in 0..p.num_vertices() {
            let (x, y) = px(v);
            let _ = writeln!(
                out,
                "<circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
                fmt_num(x),
                fmt_num(y),
                fmt_num(opts.vertex_radius)
            );
        }
        out.push_str("</g>\n");
    }
}

/// Three decimals, with negative zero printed as zero.
fn fmt_num(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn metadata(out: &mut String, p: &CombinatorialPolyhedron) {
    out.push_str("<metadata>\n");
    out.push_str(&p.serialize());
    out.push_str("</metadata>\n");
}

/// Draws the skeleton after checking that no two edges cross. The
/// polyhedron is embedded in a `<metadata>` element as RAP1 text.
pub fn to_svg(p: &CombinatorialPolyhedron, emb: &Embedding2D, opts: &RenderOptions) -> Result<String, RenderError> {
    if let Some(&(e, g)) = crossings(p, emb).first() {
        return Err(RenderError::Crossing(e, g));
    }
    let s = opts.size;
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{s}\" height=\"{s}\" viewBox=\"0 0 {s} {s}\">"
    );
    metadata(&mut out, p);
    let _ = writeln!(out, "<rect width=\"{s}\" height=\"{s}\" fill=\"white\"/>");
    panel(&mut out, p, emb, s as f64, opts);
    out.push_str("</svg>\n");
    Ok(out)
}

/// Renders with the default outer face.
pub fn render(p: &CombinatorialPolyhedron, opts: &RenderOptions) -> Result<String, RenderError> {
    let emb = tutte_embedding(p, default_outer_face(p))?;
    to_svg(p, &emb, opts)
}

/// A grid of labeled panels, `columns` per row, each `opts.size` wide.
pub fn contact_sheet(
    items: &[(String, &CombinatorialPolyhedron)],
    columns: usize,
    opts: &RenderOptions,
) -> Result<String, RenderError> {
    let columns = columns.max(1);
    let rows = items.len().div_ceil(columns).max(1);
    let cell = opts.size as f64;
    let label = (cell / 10.0).max(10.0);
    let (w, h) = (cell * columns as f64, (cell + label) * rows as f64);
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        fmt_num(w),
        fmt_num(h),
        fmt_num(w),
        fmt_num(h)
    );
    let _ = writeln!(out, "<rect width=\"{}\" height=\"{}\" fill=\"white\"/>", fmt_num(w), fmt_num(h));
    for (i, (name, p)) in items.iter().enumerate() {
        let emb = tutte_embedding(p, default_outer_face(p))?;
        if let Some(&(e, g)) = crossings(p, &emb).first() {
            return Err(RenderError::Crossing(e, g));
        }
        let (x, y) = ((i % columns) as f64 * cell, (i / columns) as f64 * (cell + label));
        let _ = writeln!(out, "<g transform=\"translate({},{})\">", fmt_num(x), fmt_num(y));
        metadata(&mut out, p);
        panel(&mut out, p, &emb, cell, opts);
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"{}\" text-anchor=\"middle\">{}</text>",
            fmt_num(cell / 2.0),
            fmt_num(cell + label * 0.7),
            fmt_num(label * 0.8),
            escape(name)
        );
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Every polyhedron stored in `<metadata>` elements, in document order.
pub fn svg_metadata_all(svg: &str) -> Result<Vec<CombinatorialPolyhedron>, RenderError> {
    let mut out = Vec::new();
    let mut rest = svg;
    while let Some(start) = rest.find("<metadata>") {
        let body = &rest[start + "<metadata>".len()..];
        let end = body.find("</metadata>").ok_or(RenderError::NoMetadata)?;
        out.push(CombinatorialPolyhedron::parse(&body[..end])?);
        rest = &body[end..];
    }
    if out.is_empty() {
        return Err(RenderError::NoMetadata);
    }
    Ok(out)
}

/// The polyhedron stored in the first `<metadata>` element.
pub fn svg_metadata(svg: &str) -> Result<CombinatorialPolyhedron, RenderError> {
    svg_metadata_all(svg).map(|mut v| v.swap_remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prism(n: usize) -> CombinatorialPolyhedron {
        let mut faces = vec![(0..n).collect::<Vec<_>>(), (0..n).rev().map(|i| i + n).collect()];
        for i in 0..n {
            let j = (i + 1) % n;
            faces.push(vec![j, i, i + n, j + n]);
        }
        CombinatorialPolyhedron::from_face_cycles(2 * n, &faces).unwrap()
    }

    #[test]
    fn prism_embedding() {
        let p = prism(6);
        let emb = tutte_embedding(&p, 0).unwrap();
        assert!(tutte_residual(&p, &emb) < 1e-12);
        assert!(crossings(&p, &emb).is_empty());
    }

    #[test]
    fn detects_crossing() {
        let p = prism(4);
        let mut emb = tutte_embedding(&p, 0).unwrap();
        emb.coords.swap(4, 6);
        assert!(!crossings(&p, &emb).is_empty());
    }

    #[test]
    fn metadata_round_trip() {
        let p = prism(5);
        let svg = render(&p, &RenderOptions::default()).unwrap();
        assert_eq!(svg_metadata(&svg).unwrap(), p);
        assert!(matches!(svg_metadata("<svg/>"), Err(RenderError::NoMetadata)));
    }

    #[test]
    fn default_outer_is_largest() {
        for n in [3, 6] {
            let p = prism(n);
            let f = default_outer_face(&p);
            let max = (0..p.num_faces()).map(|g| p.face_len(g)).max().unwrap();
            assert_eq!(p.face_len(f), max);
            assert!((0..f).all(|g| p.face_len(g) < max));
        }
    }
}
