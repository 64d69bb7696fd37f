//! Self-contained SVG figures.
//!
//! Every plotted marker is a `<circle>` with a class naming what it marks
//! (`chip`, `empty`, `point`, `plus`, `zero`, `minus`), so a figure can be
//! checked by counting elements.

use std::fmt::{self, Write};
use std::str::FromStr;

use crate::difftable::{diff_table, signs, Sign};
use crate::error::{CoreError, Result};
use crate::lattice::intermediate_configuration;
use crate::stable::{
    distance_distribution, stable_configuration, DistanceDistribution, StableConfig,
};
use crate::structure::segment;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureKind {
    /// Stable configuration: filled dots for chips, hollow dots for even entries.
    StableDots,
    /// Distance distribution as dots joined by a polyline.
    DistancePolyline,
    /// Entry profiles of a few characteristic rows.
    RowProfiles,
    /// Signs of the difference table.
    DiffSignmap,
}

impl FigureKind {
    pub const ALL: [FigureKind; 4] = [
        FigureKind::StableDots,
        FigureKind::DistancePolyline,
        FigureKind::RowProfiles,
        FigureKind::DiffSignmap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureKind::StableDots => "stable-dots",
            FigureKind::DistancePolyline => "distance-polyline",
            FigureKind::RowProfiles => "row-profiles",
            FigureKind::DiffSignmap => "diff-signmap",
        }
    }
}

impl fmt::Display for FigureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureKind {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        FigureKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| CoreError::InvalidArgument(format!("unknown figure kind '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureOptions {
    pub width: u32,
    pub height: u32,
    pub radius: f64,
}

impl Default for FigureOptions {
    fn default() -> Self {
        FigureOptions {
            width: 800,
            height: 600,
            radius: 3.0,
        }
    }
}

impl FigureOptions {
    pub fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(CoreError::InvalidArgument(format!(
                "figure dimensions must be positive, got {}x{}",
                self.width, self.height
            )));
        }
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(CoreError::InvalidArgument(format!(
                "dot radius must be positive, got {}",
                self.radius
            )));
        }
        Ok(())
    }
}

const MARGIN: f64 = 20.0;

/// Maps data coordinates onto the drawing area, y axis pointing up.
struct Canvas {
    out: String,
    opts: FigureOptions,
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Canvas {
    fn new(opts: FigureOptions, title: &str, (x0, x1): (f64, f64), (y0, y1): (f64, f64)) -> Canvas {
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
            w = opts.width,
            h = opts.height
        );
        let _ = writeln!(out, "<title>{title}</title>");
        let _ = writeln!(
            out,
            "<style>.chip,.plus{{fill:#000}}.empty,.zero{{fill:none;stroke:#000}}\
             .minus{{fill:#999}}.point{{fill:#c00}}polyline{{fill:none;stroke-width:1}}</style>"
        );
        Canvas {
            out,
            opts,
            x0,
            x1: if x1 > x0 { x1 } else { x0 + 1.0 },
            y0,
            y1: if y1 > y0 { y1 } else { y0 + 1.0 },
        }
    }

    fn px(&self, x: f64) -> f64 {
        let span = (f64::from(self.opts.width) - 2.0 * MARGIN).max(1.0);
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * span
    }

    fn py(&self, y: f64) -> f64 {
        let span = (f64::from(self.opts.height) - 2.0 * MARGIN).max(1.0);
        f64::from(self.opts.height) - MARGIN - (y - self.y0) / (self.y1 - self.y0) * span
    }

    fn dot(&mut self, class: &str, x: f64, y: f64) {
        let (cx, cy) = (self.px(x), self.py(y));
        let _ = writeln!(
            self.out,
            r#"<circle class="{class}" cx="{cx:.2}" cy="{cy:.2}" r="{:.2}"/>"#,
            self.opts.radius
        );
    }

    fn polyline(&mut self, attrs: &str, pts: &[(f64, f64)]) {
        let coords: Vec<String> = pts
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", self.px(x), self.py(y)))
            .collect();
        let _ = writeln!(
            self.out,
            r#"<polyline {attrs} points="{}"/>"#,
            coords.join(" ")
        );
    }

    fn finish(mut self) -> String {
        self.out.push_str("</svg>\n");
        self.out
    }
}

/// Renders the figure `kind` for `2^n` chips.
pub fn render(kind: FigureKind, n: u32, opts: &FigureOptions) -> Result<String> {
    opts.validate()?;
    match kind {
        FigureKind::StableDots => Ok(stable_dots(&stable_configuration(n)?, opts)),
        FigureKind::DistancePolyline => {
            let d = distance_distribution(&stable_configuration(n)?);
            Ok(distance_polyline(&d, opts))
        }
        FigureKind::RowProfiles => row_profiles(n, opts),
        FigureKind::DiffSignmap => diff_signmap(n, opts),
    }
}

/// Rows run left to right, distance `y − x` bottom to top.
pub fn stable_dots(cfg: &StableConfig, opts: &FigureOptions) -> String {
    let rows = cfg.rows();
    let last = rows.last().map_or(0, |r| r.index);
    let reach = rows.iter().map(|r| r.index).max().unwrap_or(0) as f64;
    let mut c = Canvas::new(
        *opts,
        &format!("stable configuration, n = {}", cfg.n()),
        (0.0, last as f64),
        (-reach, reach),
    );
    for r in rows {
        for k in 0..r.bits.len() {
            let y = r.y_min + k;
            let d = 2.0 * y as f64 - r.index as f64;
            let class = if r.bits.get(k) { "chip" } else { "empty" };
            c.dot(class, r.index as f64, d);
        }
    }
    c.finish()
}

pub fn distance_polyline(d: &DistanceDistribution, opts: &FigureOptions) -> String {
    let m = d.half_width() as f64;
    let top = d.counts().iter().copied().max().unwrap_or(0) as f64;
    let mut c = Canvas::new(
        *opts,
        &format!("distance distribution, n = {}", d.n()),
        (-m, m),
        (0.0, top),
    );
    let pts: Vec<(f64, f64)> = d.iter().map(|(i, v)| (i as f64, v as f64)).collect();
    c.polyline(r##"class="distribution" stroke="#c00""##, &pts);
    for &(x, y) in &pts {
        c.dot("point", x, y);
    }
    c.finish()
}

/// Profiles of row `n`, the first longest row and the first row of the
/// bottom triangle, plotted against distance.
pub fn row_profiles(n: u32, opts: &FigureOptions) -> Result<String> {
    opts.validate()?;
    let seg = segment(n)?;
    let mut wanted = vec![
        ("top", n as usize),
        ("longest", seg.first_longest_row),
        ("bottom", seg.total_rows - seg.bottom_triangle_height),
    ];
    wanted.dedup_by_key(|w| w.1);
    let mut picked = Vec::new();
    for row in intermediate_configuration(n, None)? {
        let row = row?;
        for &(label, idx) in &wanted {
            if row.index() == idx {
                picked.push((label, row.clone()));
            }
        }
    }
    let reach = picked.iter().map(|(_, r)| r.index()).max().unwrap_or(0) as f64;
    let top = picked
        .iter()
        .flat_map(|(_, r)| r.values().iter().copied())
        .max()
        .unwrap_or(0) as f64;
    let mut c = Canvas::new(
        *opts,
        &format!("row profiles, n = {n}"),
        (-reach, reach),
        (0.0, top),
    );
    let strokes = ["#000", "#c00", "#06c"];
    for (k, (label, row)) in picked.iter().enumerate() {
        let pts: Vec<(f64, f64)> = row
            .points()
            .map(|(p, v)| (p.distance() as f64, v as f64))
            .collect();
        let attrs = format!(
            r#"class="profile {label}" data-row="{}" stroke="{}""#,
            row.index(),
            strokes[k % strokes.len()]
        );
        c.polyline(&attrs, &pts);
    }
    Ok(c.finish())
}

pub fn diff_signmap(n: u32, opts: &FigureOptions) -> Result<String> {
    opts.validate()?;
    let rows = diff_table(n)?.collect::<Result<Vec<_>>>()?;
    let last = rows.last().map_or(0, |r| r.index() - 1);
    let reach = last as f64;
    let mut c = Canvas::new(
        *opts,
        &format!("difference signs, n = {n}"),
        (0.0, reach),
        (-reach, reach),
    );
    // The sign of `F'(y + 1) - F'(y)` sits on the entry of `F` at height `y`,
    // one row above the difference row.
    for r in &rows {
        let i = r.index() - 1;
        for (k, s) in signs(r).into_iter().enumerate() {
            let y = r.y_min() + k;
            let d = 2.0 * y as f64 - i as f64;
            let class = match s {
                Sign::Plus => "plus",
                Sign::Zero => "zero",
                Sign::Minus => "minus",
            };
            c.dot(class, i as f64, d);
        }
    }
    Ok(c.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(svg: &str, class: &str) -> usize {
        svg.matches(&format!(r#"class="{class}""#)).count()
    }

    #[test]
    fn stable_dot_counts() {
        let o = FigureOptions::default();
        let s = render(FigureKind::StableDots, 1, &o).unwrap();
        assert_eq!(count(&s, "chip"), 2);
        assert_eq!(count(&s, "empty"), 1);
        let s = render(FigureKind::StableDots, 4, &o).unwrap();
        assert_eq!(count(&s, "chip"), 16);
        assert!(s.starts_with("<svg") && s.ends_with("</svg>\n"));
    }

    #[test]
    fn distance_points() {
        let s = render(FigureKind::DistancePolyline, 4, &FigureOptions::default()).unwrap();
        assert_eq!(count(&s, "point"), 9);
        assert_eq!(s.matches("<polyline").count(), 1);
    }

    #[test]
    fn profiles_and_signs() {
        let o = FigureOptions::default();
        let s = render(FigureKind::RowProfiles, 9, &o).unwrap();
        assert_eq!(s.matches("<polyline").count(), 3);
        assert!(s.contains(r#"data-row="9""#));
        let s = render(FigureKind::DiffSignmap, 4, &o).unwrap();
        // One sign per entry of F.
        let total: usize = [1, 2, 3, 4, 5, 4, 5, 4, 3, 2].iter().sum();
        assert_eq!(
            count(&s, "plus") + count(&s, "zero") + count(&s, "minus"),
            total
        );
    }

    #[test]
    fn options_are_checked() {
        let bad = FigureOptions {
            width: 0,
            ..FigureOptions::default()
        };
        assert!(render(FigureKind::StableDots, 2, &bad).is_err());
        let bad = FigureOptions {
            radius: -1.0,
            ..FigureOptions::default()
        };
        assert!(bad.validate().is_err());
        assert_eq!(
            "diff-signmap".parse::<FigureKind>().unwrap(),
            FigureKind::DiffSignmap
        );
        assert!("pie".parse::<FigureKind>().is_err());
    }
}
