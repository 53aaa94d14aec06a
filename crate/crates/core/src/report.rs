//! Gain tables, profile plots and condition summaries for the command-line tool.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::conditions::{validate_conditions, ConditionReport};
use crate::error::{Error, Result};
use crate::fluid::{FingeringModel, ViscosityModel};
use crate::optimizer::{
    self, insertion_scan, limiting_profile, InsertionScan, LimitingProfile, OptimizationResult,
};
use crate::scenario::Scenario;
use crate::schedule::ProfileCurve;

/// Rows of the companion CSV written next to a profile plot.
pub const PROFILE_CSV_ROWS: usize = 1001;
/// Grid used by `check` for conditions (B)–(D).
pub const CHECK_GRID: usize = 128;
/// Interior points of the insertion scan run when (D) fails.
pub const CHECK_SCAN_POINTS: usize = 999;

#[derive(Debug, Clone, PartialEq)]
pub struct GainCell {
    pub n: usize,
    pub result: OptimizationResult,
}

impl GainCell {
    pub fn gain(&self) -> f64 {
        self.result.gain
    }

    pub fn converged(&self) -> bool {
        self.result.converged
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GainRow {
    pub model: FingeringModel,
    pub cells: Vec<GainCell>,
    pub limit: LimitingProfile,
}

/// Gains `η` (fractions) per model and slug count, plus the limit column.
#[derive(Debug, Clone, PartialEq)]
pub struct GainTable {
    pub slug_counts: Vec<usize>,
    pub rows: Vec<GainRow>,
}

impl GainTable {
    pub fn any_unconverged(&self) -> bool {
        self.rows
            .iter()
            .flat_map(|r| &r.cells)
            .any(|c| !c.converged())
    }

    pub fn cell(&self, model: &FingeringModel, n: usize) -> Option<&GainCell> {
        self.rows
            .iter()
            .find(|r| &r.model == model)?
            .cells
            .iter()
            .find(|c| c.n == n)
    }

    /// `model,n,gain` with one row per cell and a `limit` row per model.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("model,n,gain\n");
        for row in &self.rows {
            for cell in &row.cells {
                let _ = writeln!(out, "{},{},{:.12}", row.model, cell.n, cell.gain());
            }
            let _ = writeln!(out, "{},limit,{:.12}", row.model, row.limit.gain);
        }
        out
    }

    /// Aligned percentage table; unconverged cells carry a `*`.
    pub fn render(&self) -> String {
        let mut header = vec!["model".to_string()];
        header.extend(self.slug_counts.iter().map(|n| format!("n={n}")));
        header.push("Limit".into());
        let mut lines = vec![header];
        for row in &self.rows {
            let mut line = vec![row.model.to_string()];
            for cell in &row.cells {
                let mark = if cell.converged() { "" } else { "*" };
                line.push(format!("{:.2}{mark}", 100.0 * cell.gain()));
            }
            line.push(format!("{:.2}", 100.0 * row.limit.gain));
            lines.push(line);
        }
        let widths: Vec<usize> = (0..lines[0].len())
            .map(|i| {
                lines
                    .iter()
                    .map(|l| l[i].chars().count())
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = String::new();
        for line in &lines {
            let cells: Vec<String> = line
                .iter()
                .zip(&widths)
                .enumerate()
                .map(|(i, (s, &w))| {
                    if i == 0 {
                        format!("{s:<w$}")
                    } else {
                        format!("{s:>w$}")
                    }
                })
                .collect();
            out.push_str(cells.join("  ").trim_end());
            out.push('\n');
        }
        if self.any_unconverged() {
            out.push_str("* optimizer starts disagreed; value is the best found\n");
        }
        out
    }

    /// Writes `gains.csv` and one `result_<model>_<n>.json` per cell.
    pub fn write(&self, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir)?;
        let mut written = vec![dir.join("gains.csv")];
        fs::write(&written[0], self.to_csv())?;
        for row in &self.rows {
            for cell in &row.cells {
                written.push(write_result(dir, &row.model, &cell.result)?);
            }
        }
        Ok(written)
    }
}

/// Writes `result_<model>_<n>.json` into `dir`.
pub fn write_result(
    dir: impl AsRef<Path>,
    model: &FingeringModel,
    result: &OptimizationResult,
) -> Result<PathBuf> {
    let path = dir.as_ref().join(format!(
        "result_{}_{}.json",
        model.slug(),
        result.slug_count()
    ));
    fs::write(&path, result.to_json() + "\n")?;
    Ok(path)
}

/// Optimizes every (model, n) cell of the scenario and the limit of each model.
pub fn run_table(scenario: &Scenario) -> Result<GainTable> {
    scenario.validate()?;
    let viscosity = scenario.viscosity_model()?;
    let jobs: Vec<(usize, usize)> = (0..scenario.models.len())
        .flat_map(|m| scenario.slug_counts.iter().map(move |&n| (m, n)))
        .collect();
    let results = jobs
        .par_iter()
        .map(|&(m, n)| optimizer::optimize(&scenario.models[m], &viscosity, n, &scenario.optimizer))
        .collect::<Result<Vec<_>>>()?;

    let mut results = results.into_iter();
    let rows = scenario
        .models
        .iter()
        .map(|model| {
            let cells = scenario
                .slug_counts
                .iter()
                .map(|&n| GainCell {
                    n,
                    result: results.next().expect("one result per job"),
                })
                .collect();
            Ok(GainRow {
                model: model.clone(),
                cells,
                limit: limiting_profile(model, &viscosity)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GainTable {
        slug_counts: scenario.slug_counts.clone(),
        rows,
    })
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 36.0;
const BOTTOM: f64 = 52.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];
const LIMIT_SAMPLES: usize = 400;

struct Frame {
    c_min: f64,
    c_max: f64,
}

impl Frame {
    fn x(&self, c: f64) -> f64 {
        LEFT + (c - self.c_min) / (self.c_max - self.c_min) * (WIDTH - LEFT - RIGHT)
    }

    fn y(&self, t: f64) -> f64 {
        HEIGHT - BOTTOM - t.clamp(0.0, 1.0) * (HEIGHT - TOP - BOTTOM)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Path of the CSV written alongside the SVG at `svg_path`.
pub fn companion_csv_path(svg_path: impl AsRef<Path>) -> PathBuf {
    svg_path.as_ref().with_extension("csv")
}

fn profile_domain(
    results: &[OptimizationResult],
    limiting: Option<&LimitingProfile>,
) -> Result<(f64, f64)> {
    if let Some(limit) = limiting {
        return Ok(limit.domain());
    }
    let first = results
        .first()
        .ok_or_else(|| Error::Domain("nothing to plot".into()))?;
    Ok(first.configuration.profile().domain())
}

/// Builds the SVG document: one step curve per result plus the limit curve.
pub fn profiles_svg(
    results: &[OptimizationResult],
    limiting: Option<&LimitingProfile>,
    title: &str,
) -> Result<String> {
    let (c_min, c_max) = profile_domain(results, limiting)?;
    let frame = Frame { c_min, c_max };
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    if !title.is_empty() {
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
            frame.x(0.5 * (c_min + c_max)),
            escape(title)
        );
    }

    // Axes, grid and ticks.
    let (x0, x1, y0, y1) = (frame.x(c_min), frame.x(c_max), frame.y(0.0), frame.y(1.0));
    let _ = writeln!(svg, r##"<g stroke="#000" stroke-width="1" fill="none">"##);
    let _ = writeln!(
        svg,
        r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y0:.2}"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{y1:.2}"/>"#
    );
    let _ = writeln!(svg, "</g>");
    for i in 0..=5 {
        let frac = i as f64 / 5.0;
        let c = c_min + frac * (c_max - c_min);
        let (x, y) = (frame.x(c), frame.y(frac));
        let _ = writeln!(
            svg,
            r##"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{:.2}" stroke="#000"/>"##,
            y0 + 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{c:.2}</text>"#,
            y0 + 19.0
        );
        let _ = writeln!(
            svg,
            r##"<line x1="{x0:.2}" y1="{y:.2}" x2="{x1:.2}" y2="{y:.2}" stroke="#ddd"/>"##
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{frac:.1}</text>"#,
            x0 - 8.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">concentration c</text>"#,
        0.5 * (x0 + x1),
        HEIGHT - 12.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">switch time T</text>"#,
        0.5 * (y0 + y1),
        0.5 * (y0 + y1)
    );

    let mut legend = Vec::new();
    for (i, result) in results.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let c = result.configuration.concentrations();
        let t = result.configuration.switch_times();
        let mut d = format!("M{:.2},{:.2}", frame.x(c[0]), frame.y(t[0]));
        for j in 0..result.slug_count() {
            let _ = write!(d, " H{:.2}", frame.x(c[j + 1]));
            if j + 1 < result.slug_count() {
                let _ = write!(d, " V{:.2}", frame.y(t[j + 1]));
            }
        }
        let _ = writeln!(
            svg,
            r#"<path d="{d}" fill="none" stroke="{color}" stroke-width="1.6"/>"#
        );
        legend.push((format!("n = {}", result.slug_count()), color, false));
    }
    if let Some(limit) = limiting {
        let points: Vec<String> = (0..=LIMIT_SAMPLES)
            .map(|i| {
                let c = c_min + (c_max - c_min) * i as f64 / LIMIT_SAMPLES as f64;
                format!("{:.2},{:.2}", frame.x(c), frame.y(limit.eval(c)))
            })
            .collect();
        let _ = writeln!(
            svg,
            r##"<polyline points="{}" fill="none" stroke="#000" stroke-width="1.6" stroke-dasharray="6 4"/>"##,
            points.join(" ")
        );
        legend.push(("limit".into(), "#000", true));
    }

    let lx = WIDTH - RIGHT + 18.0;
    for (i, (label, color, dashed)) in legend.iter().enumerate() {
        let y = TOP + 12.0 + 20.0 * i as f64;
        let dash = if *dashed {
            r#" stroke-dasharray="6 4""#
        } else {
            ""
        };
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{color}" stroke-width="1.6"{dash}/>"#,
            lx + 26.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 32.0,
            y + 4.0,
            escape(label)
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Samples every profile on `PROFILE_CSV_ROWS` points from `c_min` to `c_max`.
/// Header `c,T_n<n>,...,T_inf`.
pub fn profiles_csv(
    results: &[OptimizationResult],
    limiting: Option<&LimitingProfile>,
) -> Result<String> {
    let (c_min, c_max) = profile_domain(results, limiting)?;
    let profiles: Vec<_> = results.iter().map(|r| r.configuration.profile()).collect();
    let mut out = String::from("c");
    for r in results {
        let _ = write!(out, ",T_n{}", r.slug_count());
    }
    if limiting.is_some() {
        out.push_str(",T_inf");
    }
    out.push('\n');
    let last = PROFILE_CSV_ROWS - 1;
    for i in 0..PROFILE_CSV_ROWS {
        let c = if i == last {
            c_max
        } else {
            c_min + (c_max - c_min) * i as f64 / last as f64
        };
        out.push_str(&c.to_string());
        for p in &profiles {
            let _ = write!(out, ",{}", p.eval(c));
        }
        if let Some(limit) = limiting {
            let _ = write!(out, ",{}", limit.eval(c));
        }
        out.push('\n');
    }
    Ok(out)
}

/// Writes the SVG to `path` and its companion CSV next to it.
pub fn render_profiles(
    results: &[OptimizationResult],
    limiting: Option<&LimitingProfile>,
    path: impl AsRef<Path>,
) -> Result<String> {
    let path = path.as_ref();
    let title = limiting
        .map(|l| format!("Injection profiles, β = {:.4}", l.beta))
        .unwrap_or_default();
    let svg = profiles_svg(results, limiting, &title)?;
    let csv = profiles_csv(results, limiting)?;
    let io = |e: std::io::Error| Error::Io(format!("{}: {e}", path.display()));
    fs::write(path, &svg).map_err(io)?;
    fs::write(companion_csv_path(path), csv).map_err(io)?;
    Ok(svg)
}

/// Condition check for one model of a scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelCheck {
    pub model: FingeringModel,
    /// `None` for TFE, which has no flux factor.
    pub conditions: Option<ConditionReport>,
    /// Run only when (D) fails.
    pub insertion: Option<InsertionScan>,
}

impl ModelCheck {
    pub fn passed(&self) -> bool {
        self.conditions
            .as_ref()
            .is_none_or(ConditionReport::all_satisfied)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckSummary {
    pub viscosity: ViscosityModel,
    pub models: Vec<ModelCheck>,
}

impl CheckSummary {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "viscosity on [{}, {}]: positive and increasing, M = {:.6}",
            self.viscosity.c_min(),
            self.viscosity.c_max(),
            self.viscosity.max_mobility_ratio()
        );
        for check in &self.models {
            let Some(report) = &check.conditions else {
                let _ = writeln!(
                    out,
                    "{}: no flux factor; viscosity checks pass",
                    check.model
                );
                continue;
            };
            let status: Vec<String> = report
                .checks()
                .iter()
                .map(|(name, c)| {
                    format!("({name}) {}", if c.satisfied { "ok" } else { "violated" })
                })
                .collect();
            let _ = writeln!(out, "{}: {}", check.model, status.join(", "));
            for (name, c) in report.checks() {
                if !c.satisfied {
                    let _ = writeln!(
                        out,
                        "  ({name}) worst violation {:.3e} at {:?}",
                        c.worst_violation, c.witness
                    );
                }
            }
            if !report.convex.satisfied {
                let _ = writeln!(
                    out,
                    "  warning: (D) violated; splitting the slug may not reduce polymer volume"
                );
            }
            if let Some(scan) = &check.insertion {
                if scan.improves() {
                    let _ = writeln!(
                        out,
                        "  a 2-configuration beats one slug: c = {:.4} gives V = {:.6} < {:.6}",
                        scan.best_concentration, scan.best_volume, scan.single_slug_volume
                    );
                } else {
                    let _ = writeln!(
                        out,
                        "  (D) violated; no improving 2-configuration found (best V = {:.6} vs one slug {:.6})",
                        scan.best_volume, scan.single_slug_volume
                    );
                }
            }
        }
        out
    }
}

/// Runs the condition checks for every model in the scenario.
pub fn check_command(scenario: &Scenario) -> Result<CheckSummary> {
    let viscosity = scenario.viscosity_model()?;
    let models = scenario
        .models
        .iter()
        .map(|model| {
            let Some(flux) = model.flux() else {
                return Ok(ModelCheck {
                    model: model.clone(),
                    conditions: None,
                    insertion: None,
                });
            };
            let report = validate_conditions(flux, &viscosity, CHECK_GRID)?;
            let insertion = if report.convex.satisfied {
                None
            } else {
                Some(insertion_scan(model, &viscosity, CHECK_SCAN_POINTS)?)
            };
            Ok(ModelCheck {
                model: model.clone(),
                conditions: Some(report),
                insertion,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CheckSummary { viscosity, models })
}
