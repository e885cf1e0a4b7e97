//! Report emission: CSV tables, a JSON summary, and static SVG charts.
//!
//! CSV schemas:
//! - `language_counts.csv`: `language,group,monolingual,bilingual,translation_instances,translation_pairs`;
//!   one row per language observed in the corpus, ordered by language code.
//!   The anchor language belongs to no resource group and carries group `-`.
//! - `group_counts.csv`: `group,languages,monolingual,bilingual,translation_instances,translation_pairs`;
//!   one row per resource group plus a final `all` row summing the three
//!   groups (the ungrouped anchor is not part of any row but `-`-grouped
//!   counts remain visible in `language_counts.csv`).
//! - `corpus_summary.csv`: `metric,value` rows for whole-corpus totals;
//!   fractions are printed with five decimal places.
//!
//! `summary.json` carries the same totals as machine-readable JSON together
//! with the monolingual-vs-bilingual and monolingual-vs-translation Pearson
//! correlations on raw and `log10(x+1)` scales (null when undefined).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::json;

use crate::langid::Lang;

use super::{
    correlation_pair, CorrelationPair, LanguageCounts, ResourceGroup, ResourceGrouping,
    StatsError, Tally,
};

/// Which artifact families [`emit_report`] writes.
#[derive(Clone, Copy, Debug)]
pub struct ReportFormats {
    pub csv: bool,
    pub json: bool,
    pub svg: bool,
}

impl Default for ReportFormats {
    fn default() -> Self {
        ReportFormats { csv: true, json: true, svg: true }
    }
}

/// Per-language correlation inputs, anchor excluded: monolingual, bilingual,
/// and translation-instance counts in language-code order.
pub fn correlation_inputs(tally: &Tally) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let mut mono = Vec::new();
    let mut bil = Vec::new();
    let mut tra = Vec::new();
    for (&lang, counts) in &tally.per_language {
        if lang == tally.anchor {
            continue;
        }
        mono.push(counts.monolingual as f64);
        bil.push(counts.bilingual as f64);
        tra.push(counts.translation_instances as f64);
    }
    (mono, bil, tra)
}

fn group_label(grouping: &ResourceGrouping, lang: Lang, monolingual: u64) -> &'static str {
    grouping.group(lang, monolingual).map_or("-", ResourceGroup::label)
}

fn language_counts_csv(tally: &Tally, grouping: &ResourceGrouping) -> String {
    let mut out =
        String::from("language,group,monolingual,bilingual,translation_instances,translation_pairs\n");
    for (&lang, c) in &tally.per_language {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            lang.code(),
            group_label(grouping, lang, c.monolingual),
            c.monolingual,
            c.bilingual,
            c.translation_instances,
            c.translation_pairs,
        );
    }
    out
}

fn group_counts_csv(tally: &Tally, grouping: &ResourceGrouping) -> String {
    let mut rows: [(u64, LanguageCounts); 3] = Default::default();
    for (&lang, c) in &tally.per_language {
        if let Some(group) = grouping.group(lang, c.monolingual) {
            let row = &mut rows[group as usize];
            row.0 += 1;
            row.1.monolingual += c.monolingual;
            row.1.bilingual += c.bilingual;
            row.1.translation_instances += c.translation_instances;
            row.1.translation_pairs += c.translation_pairs;
        }
    }
    let mut out =
        String::from("group,languages,monolingual,bilingual,translation_instances,translation_pairs\n");
    let mut all = (0u64, LanguageCounts::default());
    for group in ResourceGroup::ALL {
        let (langs, c) = rows[group as usize];
        let _ = writeln!(
            out,
            "{},{langs},{},{},{},{}",
            group.label(),
            c.monolingual,
            c.bilingual,
            c.translation_instances,
            c.translation_pairs,
        );
        all.0 += langs;
        all.1.monolingual += c.monolingual;
        all.1.bilingual += c.bilingual;
        all.1.translation_instances += c.translation_instances;
        all.1.translation_pairs += c.translation_pairs;
    }
    let _ = writeln!(
        out,
        "all,{},{},{},{},{}",
        all.0,
        all.1.monolingual,
        all.1.bilingual,
        all.1.translation_instances,
        all.1.translation_pairs,
    );
    out
}

fn corpus_summary_csv(tally: &Tally) -> String {
    let mut out = String::from("metric,value\n");
    let _ = writeln!(out, "run_id,{}", tally.run_id);
    let _ = writeln!(out, "anchor,{}", tally.anchor.code());
    let _ = writeln!(out, "instances,{}", tally.instances);
    let _ = writeln!(out, "monolingual,{}", tally.monolingual);
    let _ = writeln!(out, "bilingual,{}", tally.bilingual);
    let _ = writeln!(out, "excluded_focus,{}", tally.excluded_focus);
    let _ = writeln!(out, "excluded_undefined,{}", tally.excluded_undefined);
    let _ = writeln!(out, "translation_instances,{}", tally.translation_instances);
    let _ = writeln!(out, "translation_pairs,{}", tally.translation_pairs);
    let _ = writeln!(out, "bilingual_frac,{:.5}", tally.bilingual_frac());
    let _ = writeln!(out, "translation_frac,{:.5}", tally.translation_frac());
    out
}

fn correlations(tally: &Tally) -> (CorrelationPair, CorrelationPair) {
    let (mono, bil, tra) = correlation_inputs(tally);
    (correlation_pair(&mono, &bil), correlation_pair(&mono, &tra))
}

fn summary_json(tally: &Tally, grouping: &ResourceGrouping) -> String {
    let per_language: Vec<serde_json::Value> = tally
        .per_language
        .iter()
        .map(|(&lang, c)| {
            json!({
                "language": lang.code(),
                "group": group_label(grouping, lang, c.monolingual),
                "monolingual": c.monolingual,
                "bilingual": c.bilingual,
                "translation_instances": c.translation_instances,
                "translation_pairs": c.translation_pairs,
            })
        })
        .collect();
    let (r_bil, r_tra) = correlations(tally);
    if r_bil.raw.is_none() || r_tra.raw.is_none() {
        log::warn!(
            "Pearson correlation undefined for run {:?} (needs >= 2 non-anchor languages with variance)",
            tally.run_id
        );
    }
    let value = json!({
        "run_id": tally.run_id,
        "anchor": tally.anchor.code(),
        "instances": tally.instances,
        "monolingual": tally.monolingual,
        "bilingual": tally.bilingual,
        "excluded_focus": tally.excluded_focus,
        "excluded_undefined": tally.excluded_undefined,
        "translation_instances": tally.translation_instances,
        "translation_pairs": tally.translation_pairs,
        "bilingual_frac": tally.bilingual_frac(),
        "translation_frac": tally.translation_frac(),
        "per_language": per_language,
        "pearson": {
            "bilingual": r_bil.raw,
            "translation": r_tra.raw,
            "bilingual_log10": r_bil.log10,
            "translation_log10": r_tra.log10,
        },
    });
    let mut text = serde_json::to_string_pretty(&value).expect("static JSON shape");
    text.push('\n');
    text
}

fn log1p10(v: u64) -> f64 {
    (v as f64 + 1.0).log10()
}

const BAR_SERIES: [(&str, &str); 2] = [("bilingual", "#4472c4"), ("translation", "#ed7d31")];

fn counts_bar_svg(tally: &Tally) -> Option<String> {
    let mut rows: Vec<(Lang, LanguageCounts)> =
        tally.per_language.iter().map(|(&l, &c)| (l, c)).collect();
    if rows.is_empty() {
        return None;
    }
    rows.sort_by(|a, b| {
        b.1.bilingual
            .cmp(&a.1.bilingual)
            .then(b.1.translation_instances.cmp(&a.1.translation_instances))
            .then(a.0.code().cmp(b.0.code()))
    });
    let max = rows
        .iter()
        .map(|(_, c)| c.bilingual.max(c.translation_instances))
        .max()
        .unwrap_or(0)
        .max(1);
    let scale = log1p10(max);
    let (left, top, plot_w, row_h) = (70.0, 48.0, 640.0, 20.0);
    let height = top + rows.len() as f64 * row_h + 28.0;
    let width = left + plot_w + 120.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" \
         viewBox=\"0 0 {width:.0} {height:.0}\" font-family=\"sans-serif\" font-size=\"11\">"
    );
    let _ = writeln!(s, "<rect width=\"{width:.0}\" height=\"{height:.0}\" fill=\"white\"/>");
    let _ = writeln!(
        s,
        "<text x=\"{left}\" y=\"20\" font-size=\"14\" fill=\"#333\">Per-language instance counts \
         (bar length on log10(count+1) scale)</text>"
    );
    for (i, (name, color)) in BAR_SERIES.iter().enumerate() {
        let lx = left + plot_w - 180.0 + i as f64 * 100.0;
        let _ = writeln!(s, "<rect x=\"{lx:.1}\" y=\"30\" width=\"10\" height=\"10\" fill=\"{color}\"/>");
        let _ = writeln!(s, "<text x=\"{:.1}\" y=\"39\" fill=\"#333\">{name}</text>", lx + 14.0);
    }
    for (i, (lang, c)) in rows.iter().enumerate() {
        let y = top + i as f64 * row_h;
        let _ = writeln!(
            s,
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\" fill=\"#333\">{}</text>",
            left - 6.0,
            y + 13.0,
            lang.code()
        );
        for (j, &(v, color)) in
            [(c.bilingual, BAR_SERIES[0].1), (c.translation_instances, BAR_SERIES[1].1)]
                .iter()
                .enumerate()
        {
            let w = log1p10(v) / scale * plot_w;
            let by = y + 2.0 + j as f64 * 8.0;
            let _ = writeln!(
                s,
                "<rect x=\"{left}\" y=\"{by:.1}\" width=\"{w:.2}\" height=\"7\" fill=\"{color}\"/>"
            );
        }
        let _ = writeln!(
            s,
            "<text x=\"{:.1}\" y=\"{:.1}\" fill=\"#666\">{} / {}</text>",
            left + plot_w + 6.0,
            y + 13.0,
            c.bilingual,
            c.translation_instances
        );
    }
    s.push_str("</svg>\n");
    Some(s)
}

fn fit_line(pts: &[(f64, f64)]) -> Option<(f64, f64)> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

fn padded_range(vals: impl Iterator<Item = f64>) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in vals {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo > hi {
        return (0.0, 1.0);
    }
    if lo == hi {
        return (lo - 0.5, hi + 0.5);
    }
    let pad = (hi - lo) * 0.06;
    (lo - pad, hi + pad)
}

fn r_annotation(r: CorrelationPair) -> String {
    let fmt = |v: Option<f64>| v.map_or_else(|| "n/a".to_string(), |r| format!("{r:.3}"));
    format!("r = {} (log10 scale: {})", fmt(r.raw), fmt(r.log10))
}

fn scatter_panel(
    s: &mut String,
    origin_x: f64,
    pts: &[(f64, f64)],
    y_title: &str,
    r: CorrelationPair,
) {
    let (x0, y0, w, h) = (origin_x, 40.0, 320.0, 280.0);
    let (xmin, xmax) = padded_range(pts.iter().map(|p| p.0));
    let (ymin, ymax) = padded_range(pts.iter().map(|p| p.1));
    let px = |x: f64| x0 + (x - xmin) / (xmax - xmin) * w;
    let py = |y: f64| y0 + h - (y - ymin) / (ymax - ymin) * h;
    let _ = writeln!(
        s,
        "<rect x=\"{x0}\" y=\"{y0}\" width=\"{w}\" height=\"{h}\" fill=\"none\" stroke=\"#999\"/>"
    );
    let _ = writeln!(
        s,
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\" fill=\"#333\">monolingual instances, log10(x+1)</text>",
        x0 + w / 2.0,
        y0 + h + 32.0
    );
    let _ = writeln!(
        s,
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\" fill=\"#333\" \
         transform=\"rotate(-90 {:.1} {:.1})\">{y_title}, log10(y+1)</text>",
        x0 - 40.0,
        y0 + h / 2.0,
        x0 - 40.0,
        y0 + h / 2.0
    );
    for (v, horizontal) in [(xmin, false), (xmax, false), (ymin, true), (ymax, true)] {
        if horizontal {
            let _ = writeln!(
                s,
                "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\" font-size=\"10\" fill=\"#666\">{v:.1}</text>",
                x0 - 4.0,
                py(v) + 3.0
            );
        } else {
            let _ = writeln!(
                s,
                "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-size=\"10\" fill=\"#666\">{v:.1}</text>",
                px(v),
                y0 + h + 14.0
            );
        }
    }
    if let Some((slope, intercept)) = fit_line(pts) {
        let clip_y = |y: f64| y.clamp(ymin, ymax);
        let (ya, yb) = (clip_y(slope * xmin + intercept), clip_y(slope * xmax + intercept));
        let (xa, xb) = if slope != 0.0 {
            ((ya - intercept) / slope, (yb - intercept) / slope)
        } else {
            (xmin, xmax)
        };
        let _ = writeln!(
            s,
            "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"#c00000\" stroke-width=\"1.5\"/>",
            px(xa),
            py(ya),
            px(xb),
            py(yb)
        );
    }
    for &(x, y) in pts {
        let _ = writeln!(
            s,
            "<circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"3\" fill=\"#4472c4\" fill-opacity=\"0.8\"/>",
            px(x),
            py(y)
        );
    }
    let _ = writeln!(
        s,
        "<text x=\"{:.1}\" y=\"{:.1}\" fill=\"#333\">{}</text>",
        x0 + 8.0,
        y0 + 16.0,
        r_annotation(r)
    );
}

fn correlation_scatter_svg(tally: &Tally) -> Option<String> {
    let (mono, bil, tra) = correlation_inputs(tally);
    if mono.len() < 2 {
        return None;
    }
    let to_pts = |ys: &[f64]| -> Vec<(f64, f64)> {
        mono.iter().zip(ys).map(|(&x, &y)| ((x + 1.0).log10(), (y + 1.0).log10())).collect()
    };
    let (r_bil, r_tra) = correlations(tally);
    let (width, height) = (860.0, 380.0);
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" \
         viewBox=\"0 0 {width:.0} {height:.0}\" font-family=\"sans-serif\" font-size=\"11\">"
    );
    let _ = writeln!(s, "<rect width=\"{width:.0}\" height=\"{height:.0}\" fill=\"white\"/>");
    let _ = writeln!(
        s,
        "<text x=\"60\" y=\"20\" font-size=\"14\" fill=\"#333\">Monolingual presence vs bilingual and \
         translation yield (per language)</text>"
    );
    scatter_panel(&mut s, 60.0, &to_pts(&bil), "bilingual instances", r_bil);
    scatter_panel(&mut s, 490.0, &to_pts(&tra), "translation instances", r_tra);
    s.push_str("</svg>\n");
    Some(s)
}

fn write_file(
    dir: &Path,
    name: &str,
    contents: &str,
    files: &mut Vec<PathBuf>,
) -> Result<(), StatsError> {
    let path = dir.join(name);
    fs::write(&path, contents)
        .map_err(|e| StatsError::Io { path: path.display().to_string(), source: e })?;
    files.push(path);
    Ok(())
}

/// Write the report artifacts selected by `formats` into `out_dir` and
/// return the paths written. The scatter plot needs at least two non-anchor
/// languages and the bar chart at least one; below that they are skipped
/// with a warning rather than failing the report.
pub fn emit_report(
    tally: &Tally,
    grouping: &ResourceGrouping,
    out_dir: impl AsRef<Path>,
    formats: ReportFormats,
) -> Result<Vec<PathBuf>, StatsError> {
    let dir = out_dir.as_ref();
    fs::create_dir_all(dir)
        .map_err(|e| StatsError::Io { path: dir.display().to_string(), source: e })?;
    let mut files = Vec::new();
    if formats.csv {
        write_file(dir, "language_counts.csv", &language_counts_csv(tally, grouping), &mut files)?;
        write_file(dir, "group_counts.csv", &group_counts_csv(tally, grouping), &mut files)?;
        write_file(dir, "corpus_summary.csv", &corpus_summary_csv(tally), &mut files)?;
    }
    if formats.json {
        write_file(dir, "summary.json", &summary_json(tally, grouping), &mut files)?;
    }
    if formats.svg {
        match counts_bar_svg(tally) {
            Some(svg) => write_file(dir, "counts_bar.svg", &svg, &mut files)?,
            None => log::warn!("no per-language counts; skipping counts_bar.svg"),
        }
        match correlation_scatter_svg(tally) {
            Some(svg) => write_file(dir, "correlation_scatter.svg", &svg, &mut files)?,
            None => {
                log::warn!("fewer than 2 non-anchor languages; skipping correlation_scatter.svg")
            }
        }
    }
    Ok(files)
}
