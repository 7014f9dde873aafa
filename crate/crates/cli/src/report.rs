//! Terminal and JSON rendering for metric reports.
//!
//! Core keeps metrics in raw units (fractions, meters, voxels). The
//! table view converts to the conventional display units: success and
//! foot sliding as percentages, distances as centimeters. The JSON view
//! keeps raw units and spells them out in the key names.

use occu_core::metrics::MetricReport;
use serde_json::json;

const COLUMNS: [&str; 6] = ["Suc.", "DT", "Time", "FS", "PEN", "ERP"];

fn cell(text: &str, width: usize) -> String {
    format!("{text:<width$}")
}

/// Aligned two-line table: header then values, one column per metric.
pub fn render_table(report: &MetricReport) -> String {
    let values = [
        format!("{:.1}%", 100.0 * report.success_rate),
        format!("{:.1}cm", 100.0 * report.mean_min_distance),
        match report.mean_time_to_reach {
            Some(t) => format!("{t:.2}s"),
            None => "-".into(),
        },
        format!("{:.1}%", 100.0 * report.mean_foot_sliding),
        format!("{:.2}", report.mean_penetration),
        match report.mean_erp {
            Some(e) => format!("{:.1}cm", 100.0 * e),
            None => "-".into(),
        },
    ];
    let widths: Vec<usize> = COLUMNS
        .iter()
        .zip(&values)
        .map(|(h, v)| h.len().max(v.len()) + 2)
        .collect();
    let mut out = format!("episodes: {}\n", report.episodes);
    for (h, w) in COLUMNS.iter().zip(&widths) {
        out.push_str(&cell(h, *w));
    }
    out.push('\n');
    for (v, w) in values.iter().zip(&widths) {
        out.push_str(&cell(v, *w));
    }
    out.push('\n');
    out
}

/// Raw-unit JSON object, `null` for metrics that did not apply.
pub fn report_json(report: &MetricReport) -> serde_json::Value {
    json!({
        "episodes": report.episodes,
        "success_rate": report.success_rate,
        "mean_min_distance_m": report.mean_min_distance,
        "mean_time_to_reach_s": report.mean_time_to_reach,
        "mean_foot_sliding": report.mean_foot_sliding,
        "mean_penetration_voxels": report.mean_penetration,
        "mean_erp_m": report.mean_erp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> MetricReport {
        MetricReport {
            episodes: 20,
            success_rate: 0.95,
            mean_min_distance: 0.123,
            mean_time_to_reach: Some(4.207),
            mean_foot_sliding: 0.031,
            mean_penetration: 0.0,
            mean_erp: Some(0.084),
        }
    }

    #[test]
    fn table_shows_display_units_in_metric_order() {
        let t = render_table(&sample());
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "episodes: 20");
        let header: Vec<&str> = lines[1].split_whitespace().collect();
        assert_eq!(header, COLUMNS);
        let vals: Vec<&str> = lines[2].split_whitespace().collect();
        assert_eq!(vals, ["95.0%", "12.3cm", "4.21s", "3.1%", "0.00", "8.4cm"]);
    }

    #[test]
    fn columns_line_up() {
        let t = render_table(&sample());
        let lines: Vec<&str> = t.lines().collect();
        // every header label starts at the same byte offset as its value
        let mut h = 0;
        let mut v = 0;
        for (head, val) in lines[1].split_whitespace().zip(lines[2].split_whitespace()) {
            assert_eq!(
                lines[1][h..].find(head).unwrap() + h,
                lines[2][v..].find(val).unwrap() + v,
            );
            h = lines[1][h..].find(head).unwrap() + h + head.len();
            v = lines[2][v..].find(val).unwrap() + v + val.len();
        }
    }

    #[test]
    fn absent_metrics_render_as_dashes_and_nulls() {
        let mut r = sample();
        r.mean_time_to_reach = None;
        r.mean_erp = None;
        let t = render_table(&r);
        let vals: Vec<&str> = t.lines().nth(2).unwrap().split_whitespace().collect();
        assert_eq!(vals[2], "-");
        assert_eq!(vals[5], "-");
        let j = report_json(&r);
        assert!(j["mean_time_to_reach_s"].is_null());
        assert!(j["mean_erp_m"].is_null());
        assert_eq!(j["episodes"], 20);
        assert!((j["success_rate"].as_f64().unwrap() - 0.95).abs() < 1e-12);
    }
}
