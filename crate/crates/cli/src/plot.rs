//! Level-set SVG rendering for planar clouds: marching squares over a float
//! grid of `d_X`, cloud points as dots, critical points as labeled markers,
//! and differential-critical-but-regular points as hollow markers.
//!
//! Float-only and non-contractual: no exactness claims near degenerate
//! level sets. Output is deterministic for fixed inputs.

use distmorse::morse::{Classification, CriticalPointRecord, PointCloud, RegularReason};
use std::fmt::Write;

pub struct PlotOptions {
    pub grid: usize,
    pub levels: usize,
    /// `[min_x, min_y, max_x, max_y]`; `None` picks a padded bounding box.
    pub bbox: Option<[f64; 4]>,
}

impl Default for PlotOptions {
    fn default() -> Self {
        PlotOptions {
            grid: 400,
            levels: 10,
            bbox: None,
        }
    }
}

const CANVAS: f64 = 600.0;
const MARGIN: f64 = 30.0;

struct Frame {
    min_x: f64,
    min_y: f64,
    scale: f64,
    height: f64,
    width: f64,
}

impl Frame {
    fn new(bbox: [f64; 4]) -> Frame {
        let w = (bbox[2] - bbox[0]).max(1e-9);
        let h = (bbox[3] - bbox[1]).max(1e-9);
        let scale = (CANVAS - 2.0 * MARGIN) / w.max(h);
        Frame {
            min_x: bbox[0],
            min_y: bbox[1],
            scale,
            width: w * scale + 2.0 * MARGIN,
            height: h * scale + 2.0 * MARGIN,
        }
    }

    /// World (y up) to SVG (y down).
    fn to_svg(&self, x: f64, y: f64) -> (f64, f64) {
        (
            MARGIN + (x - self.min_x) * self.scale,
            self.height - MARGIN - (y - self.min_y) * self.scale,
        )
    }
}

fn auto_bbox(cloud: &PointCloud<f64>) -> [f64; 4] {
    let xs: Vec<f64> = cloud.points().iter().map(|p| p[0]).collect();
    let ys: Vec<f64> = cloud.points().iter().map(|p| p[1]).collect();
    let (min_x, max_x) = (
        xs.iter().cloned().fold(f64::INFINITY, f64::min),
        xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    );
    let (min_y, max_y) = (
        ys.iter().cloned().fold(f64::INFINITY, f64::min),
        ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    );
    let pad = 0.6 * (max_x - min_x).max(max_y - min_y).max(1.0);
    [min_x - pad, min_y - pad, max_x + pad, max_y + pad]
}

type Segment = ((f64, f64), (f64, f64));

/// Marching squares on one cell; emits up to two segments in grid
/// coordinates. Corner values are compared against the level `t`.
#[allow(clippy::too_many_arguments)]
fn cell_segments(
    t: f64,
    x: f64,
    y: f64,
    bl: f64,
    br: f64,
    tr: f64,
    tl: f64,
    out: &mut Vec<Segment>,
) {
    let frac = |a: f64, b: f64| -> f64 {
        if (b - a).abs() < 1e-300 {
            0.5
        } else {
            ((t - a) / (b - a)).clamp(0.0, 1.0)
        }
    };
    // Edge crossing points, lazily valid only when used by the case table.
    let south = (x + frac(bl, br), y);
    let east = (x + 1.0, y + frac(br, tr));
    let north = (x + frac(tl, tr), y + 1.0);
    let west = (x, y + frac(bl, tl));
    let mut case = 0usize;
    if bl > t {
        case |= 1;
    }
    if br > t {
        case |= 2;
    }
    if tr > t {
        case |= 4;
    }
    if tl > t {
        case |= 8;
    }
    match case {
        0 | 15 => {}
        1 | 14 => out.push((west, south)),
        2 | 13 => out.push((south, east)),
        3 | 12 => out.push((west, east)),
        4 | 11 => out.push((east, north)),
        5 => {
            out.push((west, north));
            out.push((south, east));
        }
        10 => {
            out.push((west, south));
            out.push((north, east));
        }
        6 | 9 => out.push((south, north)),
        7 | 8 => out.push((west, north)),
        _ => unreachable!(),
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.3}")
}

/// Renders the level sets of `d_X` with all enumerated records marked.
pub fn render_svg(
    cloud: &PointCloud<f64>,
    records: &[CriticalPointRecord<f64>],
    options: &PlotOptions,
) -> String {
    assert_eq!(cloud.ambient(), 2, "plotting is planar only");
    let bbox = options.bbox.unwrap_or_else(|| auto_bbox(cloud));
    let frame = Frame::new(bbox);
    let n = options.grid.max(2);

    let step_x = (bbox[2] - bbox[0]) / (n - 1) as f64;
    let step_y = (bbox[3] - bbox[1]) / (n - 1) as f64;
    let mut values = vec![0.0f64; n * n];
    for row in 0..n {
        for col in 0..n {
            let p = distmorse::FloatPoint::new(vec![
                bbox[0] + col as f64 * step_x,
                bbox[1] + row as f64 * step_y,
            ]);
            values[row * n + col] = cloud.distance_f64(&p);
        }
    }
    let max_value = values.iter().cloned().fold(0.0f64, f64::max);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        fmt(frame.width),
        fmt(frame.height),
        fmt(frame.width),
        fmt(frame.height)
    );
    let _ = writeln!(
        svg,
        "<!-- generator: distmorse {} -->",
        env!("CARGO_PKG_VERSION")
    );
    let _ = writeln!(
        svg,
        "<!-- world-to-svg: svg_x = {} + (x - {}) * {}; svg_y = {} - (y - {}) * {} (y axis flipped) -->",
        fmt(MARGIN),
        fmt(frame.min_x),
        fmt(frame.scale),
        fmt(frame.height - MARGIN),
        fmt(frame.min_y),
        fmt(frame.scale)
    );
    let _ = writeln!(
        svg,
        "<rect width=\"{}\" height=\"{}\" fill=\"white\"/>",
        fmt(frame.width),
        fmt(frame.height)
    );

    for level in 1..=options.levels {
        let t = max_value * level as f64 / (options.levels + 1) as f64;
        let mut segments = Vec::new();
        for row in 0..n - 1 {
            for col in 0..n - 1 {
                cell_segments(
                    t,
                    col as f64,
                    row as f64,
                    values[row * n + col],
                    values[row * n + col + 1],
                    values[(row + 1) * n + col + 1],
                    values[(row + 1) * n + col],
                    &mut segments,
                );
            }
        }
        let mut path = String::new();
        for ((ax, ay), (bx, by)) in segments {
            let a = frame.to_svg(bbox[0] + ax * step_x, bbox[1] + ay * step_y);
            let b = frame.to_svg(bbox[0] + bx * step_x, bbox[1] + by * step_y);
            let _ = write!(
                path,
                "M{} {} L{} {} ",
                fmt(a.0),
                fmt(a.1),
                fmt(b.0),
                fmt(b.1)
            );
        }
        let _ = writeln!(
            svg,
            "<path class=\"level\" d=\"{}\" fill=\"none\" stroke=\"#7a9cc6\" stroke-width=\"1\"/>",
            path.trim_end()
        );
    }

    // cloud points
    for p in cloud.points() {
        let (x, y) = frame.to_svg(p[0], p[1]);
        let _ = writeln!(
            svg,
            "<circle class=\"cloud\" cx=\"{}\" cy=\"{}\" r=\"3.5\" fill=\"black\"/>",
            fmt(x),
            fmt(y)
        );
    }

    // markers for enumerated records beyond the cloud points themselves
    for record in records {
        match &record.classification {
            Classification::Critical { index, .. } => {
                let (x, y) = frame.to_svg(record.location[0], record.location[1]);
                let _ = writeln!(
                    svg,
                    "<path class=\"critical\" d=\"M{} {} L{} {} M{} {} L{} {}\" stroke=\"#c0392b\" stroke-width=\"2\"/>",
                    fmt(x - 4.0),
                    fmt(y - 4.0),
                    fmt(x + 4.0),
                    fmt(y + 4.0),
                    fmt(x - 4.0),
                    fmt(y + 4.0),
                    fmt(x + 4.0),
                    fmt(y - 4.0)
                );
                let _ = writeln!(
                    svg,
                    "<text x=\"{}\" y=\"{}\" font-size=\"11\" fill=\"#c0392b\">{}</text>",
                    fmt(x + 5.0),
                    fmt(y - 5.0),
                    index
                );
            }
            Classification::Regular(RegularReason::CertificateExists { .. }) => {
                let (x, y) = frame.to_svg(record.location[0], record.location[1]);
                let _ = writeln!(
                    svg,
                    "<circle class=\"regular\" cx=\"{}\" cy=\"{}\" r=\"4.5\" fill=\"none\" stroke=\"#2c3e50\" stroke-width=\"1.5\"/>",
                    fmt(x),
                    fmt(y)
                );
            }
            _ => {}
        }
    }

    svg.push_str("</svg>\n");
    svg
}
