use std::fmt::Write as _;

use eigenlocus_model::{Eigenlocus, GridSpec, LevelSetTrace};
use kernel_core::LabeledSample;

const PLOT: f64 = 640.0;
const MARGIN: f64 = 46.0;

/// Affine map from grid coordinates to SVG pixels (y axis flipped).
#[derive(Debug, Clone, Copy)]
pub struct Mapper {
    grid: GridSpec,
}

impl Mapper {
    pub fn new(grid: GridSpec) -> Self {
        Mapper { grid }
    }

    pub fn map(&self, x: f64, y: f64) -> (f64, f64) {
        let sx = MARGIN + (x - self.grid.xmin) / (self.grid.xmax - self.grid.xmin) * PLOT;
        let sy = MARGIN + (self.grid.ymax - y) / (self.grid.ymax - self.grid.ymin) * PLOT;
        (sx, sy)
    }
}

fn level_color(level: f64) -> &'static str {
    if level > 0.0 {
        "#cc2222" // class 1 border
    } else if level < 0.0 {
        "#2244cc" // class 2 border
    } else {
        "#000000" // decision boundary
    }
}

/// One self-contained page: training scatter colored by class, extreme
/// points ring-marked, and the traced d = -1, 0, +1 polylines drawn with
/// the segment vertices exactly as handed over (affinely mapped to pixels).
pub fn render_plot(
    name: &str,
    seed: u64,
    train: &[LabeledSample],
    model: &Eigenlocus,
    traces: &[LevelSetTrace],
    grid: GridSpec,
) -> String {
    let m = Mapper::new(grid);
    let size = PLOT + 2.0 * MARGIN;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"##
    );
    let _ = writeln!(s, r##"<rect width="{size}" height="{size}" fill="#ffffff"/>"##);
    let _ = writeln!(
        s,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{PLOT}" height="{PLOT}" fill="none" stroke="#888888"/>"##
    );
    let _ = writeln!(
        s,
        r##"<text x="{MARGIN}" y="{}" font-family="sans-serif" font-size="15">{name}, seed {seed}</text>"##,
        MARGIN - 14.0
    );

    // axis extents
    let labels = [
        (MARGIN, size - MARGIN + 18.0, format!("{:.3}", grid.xmin), "start"),
        (size - MARGIN, size - MARGIN + 18.0, format!("{:.3}", grid.xmax), "end"),
        (MARGIN - 6.0, size - MARGIN, format!("{:.3}", grid.ymin), "end"),
        (MARGIN - 6.0, MARGIN + 12.0, format!("{:.3}", grid.ymax), "end"),
    ];
    for (x, y, text, anchor) in labels {
        let _ = writeln!(
            s,
            r##"<text x="{x}" y="{y}" font-family="sans-serif" font-size="12" text-anchor="{anchor}">{text}</text>"##
        );
    }

    for p in train {
        let (cx, cy) = m.map(p.features[0], p.features[1]);
        let fill = if p.label > 0.0 { "#cc2222" } else { "#2244cc" };
        let _ = writeln!(
            s,
            r##"<circle cx="{cx}" cy="{cy}" r="2.4" fill="{fill}" fill-opacity="0.75"/>"##
        );
    }

    // extreme points of the model, ring-marked in black
    for point in &model.extreme_points {
        let (cx, cy) = m.map(point[0], point[1]);
        let _ = writeln!(
            s,
            r##"<circle cx="{cx}" cy="{cy}" r="5" fill="none" stroke="#000000" stroke-width="1.1"/>"##
        );
    }

    for trace in traces {
        let color = level_color(trace.level);
        let width = if trace.level == 0.0 { 1.8 } else { 1.2 };
        for ((x1, y1), (x2, y2)) in &trace.segments {
            let (ax, ay) = m.map(*x1, *y1);
            let (bx, by) = m.map(*x2, *y2);
            let _ = writeln!(
                s,
                r##"<path d="M {ax} {ay} L {bx} {by}" stroke="{color}" stroke-width="{width}" fill="none"/>"##
            );
        }
    }

    // legend
    let lx = size - MARGIN - 150.0;
    let mut ly = MARGIN + 16.0;
    let entries: [(&str, &str); 6] = [
        ("#cc2222", "class +1"),
        ("#2244cc", "class -1"),
        ("#000000", "extreme point"),
        ("#000000", "d = 0"),
        ("#cc2222", "d = +1"),
        ("#2244cc", "d = -1"),
    ];
    for (i, (color, label)) in entries.iter().enumerate() {
        match i {
            0 | 1 => {
                let _ = writeln!(s, r##"<circle cx="{lx}" cy="{ly}" r="3" fill="{color}"/>"##);
            }
            2 => {
                let _ = writeln!(
                    s,
                    r##"<circle cx="{lx}" cy="{ly}" r="5" fill="none" stroke="{color}"/>"##
                );
            }
            _ => {
                let _ = writeln!(
                    s,
                    r##"<path d="M {} {ly} L {} {ly}" stroke="{color}" stroke-width="1.6"/>"##,
                    lx - 6.0,
                    lx + 6.0
                );
            }
        }
        let _ = writeln!(
            s,
            r##"<text x="{}" y="{}" font-family="sans-serif" font-size="12">{label}</text>"##,
            lx + 12.0,
            ly + 4.0
        );
        ly += 18.0;
    }

    s.push_str("</svg>\n");
    s
}
