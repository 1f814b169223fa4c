//! SVG rendering of a packing. The unit square maps to 1000×1000 user units
//! with the origin at the bottom left.

use std::fmt::Write;

use crate::model::{Container, KnapsackInstance, Packing, Rect};

const SCALE: f64 = 1000.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn rect_attrs(r: &Rect) -> String {
    format!(
        r#"x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}""#,
        r.x * SCALE,
        (1.0 - r.y - r.h) * SCALE,
        r.w * SCALE,
        r.h * SCALE
    )
}

/// Containers as dashed outlines, items as filled rectangles; rotated items
/// are hatched. Placements naming unknown items are skipped.
pub fn render_svg(instance: &KnapsackInstance, packing: &Packing, containers: &[Container]) -> String {
    let mut out = String::new();
    out.push_str(concat!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 1000 1000" width="1000" height="1000">"#,
        "\n<defs>\n",
        r#"<pattern id="hatch" patternUnits="userSpaceOnUse" width="12" height="12" patternTransform="rotate(45)">"#,
        r##"<rect width="12" height="12" fill="#9ecae1"/><line x1="0" y1="0" x2="0" y2="12" stroke="#08519c" stroke-width="4"/></pattern>"##,
        "\n</defs>\n",
        r#"<rect x="0" y="0" width="1000" height="1000" fill="white" stroke="black" stroke-width="2"/>"#,
        "\n"
    ));
    for c in containers {
        let _ = writeln!(
            out,
            r##"<rect class="container {}" {} fill="none" stroke="#d62728" stroke-width="3" stroke-dasharray="12 6"/>"##,
            c.kind,
            rect_attrs(&c.rect())
        );
    }
    for p in &packing.placements {
        let Some(i) = instance.index_of(&p.id) else { continue };
        let r = p.rect(&instance.items()[i]);
        let fill = if p.rotated { "url(#hatch)" } else { "#9ecae1" };
        let _ = writeln!(
            out,
            r##"<rect class="item" {} fill="{fill}" stroke="#08306b" stroke-width="1.5"><title>{}</title></rect>"##,
            rect_attrs(&r),
            escape(&p.id)
        );
    }
    out.push_str("</svg>\n");
    out
}
