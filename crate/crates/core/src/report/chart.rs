//! Horizontal bar chart of `w`, one bar per unit in rank order.

use std::fmt::Write as _;

use crate::measure::AnalysisResult;
use crate::model::Group;

const WIDTH: f64 = 760.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 40.0;
const TOP: f64 = 40.0;
const BAR: f64 = 18.0;
const GAP: f64 = 4.0;

fn colour(group: Group) -> &'static str {
    match group {
        Group::I => "#1a9850",
        Group::II => "#91cf60",
        Group::III => "#fc8d59",
        Group::IV => "#d73027",
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
        .replace('\'', "&apos;")
}

/// Renders the chart. The x axis spans `[0, 1]`; threshold lines falling
/// outside it are clamped to the plot edge.
pub fn render_svg(result: &AnalysisResult, title: &str) -> String {
    let n = result.scores.len() as f64;
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = n * (BAR + GAP);
    let height = TOP + plot_h + 50.0;
    let x = |w: f64| LEFT + plot_w * w.clamp(0.0, 1.0);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    for (k, s) in result.scores.iter().enumerate() {
        let group = result.group_of(&s.unit).expect("classified");
        let y = TOP + k as f64 * (BAR + GAP);
        let _ = writeln!(
            svg,
            r#"<rect class="bar group-{g}" x="{LEFT}" y="{y}" width="{w:.3}" height="{BAR}" fill="{c}"><title>{u}: w={val:.6}, group {g}</title></rect>"#,
            g = group,
            w = x(s.w) - LEFT,
            c = colour(group),
            u = escape(&s.unit),
            val = s.w,
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            y + BAR * 0.75,
            escape(&s.unit)
        );
    }
    let c = &result.classification;
    for (label, value, dash) in [
        ("mean+S", c.mean_w + c.sd_w, "6,3"),
        ("mean", c.mean_w, ""),
        ("mean-S", c.mean_w - c.sd_w, "6,3"),
    ] {
        let px = x(value);
        let _ = writeln!(
            svg,
            r##"<line class="threshold" x1="{px:.3}" y1="{}" x2="{px:.3}" y2="{}" stroke="#333" stroke-dasharray="{dash}"/>"##,
            TOP - 6.0,
            TOP + plot_h
        );
        let _ = writeln!(
            svg,
            r#"<text x="{px:.3}" y="{}" text-anchor="middle">{label} = {value:.4}</text>"#,
            TOP + plot_h + 14.0
        );
    }
    for tick in 0..=10 {
        let v = tick as f64 / 10.0;
        let _ = writeln!(
            svg,
            r##"<text x="{:.3}" y="{}" text-anchor="middle" fill="#666">{v:.1}</text>"##,
            x(v),
            TOP + plot_h + 32.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}
