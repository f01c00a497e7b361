//! Static SVG figures rendered from a saved run report.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::report::{BackendReport, RunReport};
use crate::{write_file, CliError};

const W: f64 = 720.0;
const H: f64 = 420.0;
const MARGIN: f64 = 60.0;
const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn open(title: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="16">{}</text>"#,
        W / 2.0,
        esc(title)
    );
    s
}

fn axes(s: &mut String, y_label: &str) {
    let (x0, y0, x1, y1) = (MARGIN, H - MARGIN, W - MARGIN / 2.0, MARGIN);
    let _ = writeln!(s, r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#);
    let _ = writeln!(s, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" font-size="12" transform="rotate(-90 16 {})" text-anchor="middle">{}</text>"#,
        H / 2.0,
        H / 2.0,
        esc(y_label)
    );
}

fn no_data(s: &mut String, msg: &str) {
    let _ = writeln!(
        s,
        r##"<text x="{}" y="{}" text-anchor="middle" font-size="18" fill="#b00">{}</text>"##,
        W / 2.0,
        H / 2.0,
        esc(msg)
    );
}

/// Bars for `(label, value, highlighted)` triples; values in `[0, 1]`.
fn bars(s: &mut String, items: &[(String, f64, bool)], rotate_labels: bool) {
    let ymax = items.iter().map(|i| i.1).fold(0.0, f64::max).max(1e-12);
    let plot_w = W - 1.5 * MARGIN;
    let plot_h = H - 2.0 * MARGIN;
    let slot = plot_w / items.len().max(1) as f64;
    for (k, (label, v, hi)) in items.iter().enumerate() {
        let h = plot_h * v / ymax;
        let x = MARGIN + k as f64 * slot + 0.1 * slot;
        let y = H - MARGIN - h;
        let fill = if *hi { "#2ca02c" } else { "#999999" };
        let _ = writeln!(
            s,
            r#"<rect x="{x:.2}" y="{y:.2}" width="{:.2}" height="{h:.2}" fill="{fill}"><title>{} {v:.4}</title></rect>"#,
            0.8 * slot,
            esc(label)
        );
        let cx = x + 0.4 * slot;
        let ly = H - MARGIN + 12.0;
        if rotate_labels {
            let _ = writeln!(
                s,
                r#"<text x="{cx:.2}" y="{ly}" font-size="9" font-family="monospace" text-anchor="end" transform="rotate(-60 {cx:.2} {ly})">{}</text>"#,
                esc(label)
            );
        } else {
            let _ = writeln!(
                s,
                r#"<text x="{cx:.2}" y="{}" font-size="12" text-anchor="middle">{}</text>"#,
                ly + 4.0,
                esc(label)
            );
        }
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-size="11" text-anchor="end">{ymax:.3}</text>"#,
        MARGIN - 4.0,
        MARGIN + 4.0
    );
}

/// Top sampled bitstrings; independent sets in green.
pub fn top_bitstrings_svg(b: &BackendReport) -> String {
    let mut s = open(&format!("{}: top {} bitstrings", b.name, b.top.len()));
    axes(&mut s, "probability");
    let items: Vec<(String, f64, bool)> = b
        .top
        .iter()
        .map(|e| (e.bitstring.to_string(), e.probability, e.independent))
        .collect();
    bars(&mut s, &items, true);
    if !b.best.valid {
        no_data(&mut s, "no valid samples");
    }
    s.push_str("</svg>\n");
    s
}

/// Distribution of the number of selected clusters.
pub fn cluster_count_svg(b: &BackendReport, reference: Option<usize>) -> String {
    let mut s = open(&format!("{}: selected cluster count", b.name));
    axes(&mut s, "probability");
    let items: Vec<(String, f64, bool)> = b
        .histogram
        .iter()
        .map(|(&k, &p)| (k.to_string(), p, Some(k) == reference))
        .collect();
    bars(&mut s, &items, false);
    if !b.best.valid {
        no_data(&mut s, "no valid samples");
    }
    s.push_str("</svg>\n");
    s
}

/// Points coloured by selected cluster; uncovered points in light grey.
pub fn scatter_svg(points: &[(f64, f64)], labels: Option<&[Option<usize>]>, title: &str) -> String {
    let mut s = open(title);
    if points.is_empty() {
        no_data(&mut s, "empty dataset");
        s.push_str("</svg>\n");
        return s;
    }
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in points {
        xmin = xmin.min(x);
        xmax = xmax.max(x);
        ymin = ymin.min(y);
        ymax = ymax.max(y);
    }
    let sx = (W - 2.0 * MARGIN) / (xmax - xmin).max(1e-9);
    let sy = (H - 2.0 * MARGIN) / (ymax - ymin).max(1e-9);
    let scale = sx.min(sy);
    let mut colours: Vec<usize> = labels.map_or_else(Vec::new, |l| l.iter().flatten().copied().collect());
    colours.sort_unstable();
    colours.dedup();
    for (i, &(x, y)) in points.iter().enumerate() {
        let px = MARGIN + (x - xmin) * scale;
        let py = H - MARGIN - (y - ymin) * scale;
        let fill = match labels.and_then(|l| l.get(i).copied().flatten()) {
            Some(c) => PALETTE[colours.binary_search(&c).unwrap_or(0) % PALETTE.len()],
            None => "#d0d0d0",
        };
        let _ = writeln!(s, r#"<circle cx="{px:.2}" cy="{py:.2}" r="2.5" fill="{fill}"/>"#);
    }
    if labels.is_none() {
        no_data(&mut s, "no valid samples");
    }
    s.push_str("</svg>\n");
    s
}

fn read_labels(path: &Path) -> Result<Vec<Option<usize>>, CliError> {
    let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
    text.lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let v = l.split(',').nth(1).map(str::trim).unwrap_or("");
            let v: i64 = v
                .parse()
                .map_err(|_| CliError::Validation(format!("{}: bad label row {l:?}", path.display())))?;
            Ok(usize::try_from(v).ok())
        })
        .collect()
}

/// Writes one bar chart and one cluster-count histogram per backend plus a
/// scatter plot of the selected clustering. Returns the files written.
pub fn render(report_path: &Path, out_dir: Option<&Path>) -> Result<Vec<PathBuf>, CliError> {
    let report = RunReport::load(report_path)?;
    let base = report_path.parent().unwrap_or(Path::new("."));
    let out = out_dir.unwrap_or(base);
    std::fs::create_dir_all(out).map_err(CliError::io(out))?;
    let mut written = Vec::new();
    for b in &report.backends {
        let stem: String = b
            .name
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
            .collect();
        let p = out.join(format!("top_bitstrings_{stem}.svg"));
        write_file(&p, top_bitstrings_svg(b))?;
        written.push(p);
        let p = out.join(format!("cluster_counts_{stem}.svg"));
        write_file(&p, cluster_count_svg(b, report.reference_clusters))?;
        written.push(p);
    }
    let data_path = base.join(&report.dataset.file);
    let data = clusteragg::data::load_csv(&data_path).map_err(CliError::stage("reading dataset"))?;
    let pts: Vec<(f64, f64)> = data.points().iter().map(|p| (p.x, p.y)).collect();
    let labels = match &report.selected {
        Some(sel) => Some(read_labels(&base.join(&sel.labels_file))?),
        None => None,
    };
    let title = match &report.selected {
        Some(sel) => format!("selected clustering ({} clusters, {})", sel.n_clusters, sel.backend),
        None => "selected clustering".to_string(),
    };
    let p = out.join("selected_clustering.svg");
    write_file(&p, scatter_svg(&pts, labels.as_deref(), &title))?;
    written.push(p);
    Ok(written)
}
