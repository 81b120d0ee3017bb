//! Command-line front end: `list`, `density` and `verify`.
//!
//! Exit codes: 0 all checks passed, 1 a value disagrees with its table,
//! 2 usage error or unknown symbol, 3 numerical failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use unicode_width::UnicodeWidthStr;

use crate::catalog::{load_catalog, Catalog};
use crate::error::{Error, Result};
use crate::packing::{optimize, verify_all, Optimum, PackingOptions};
use crate::volume::{
    closed_form_volume, decomposition_check, quadrature_volume, DecompositionReport,
    QuadratureOptions,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

/// Tolerance of the quadrature cross-check in `verify --oracle on`.
pub const ORACLE_TOL: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

#[derive(Debug, Parser)]
#[command(
    name = "horopack",
    version,
    about = "Optimal horoball packings of the noncompact Coxeter simplex tilings of H³"
)]
pub struct Cli {
    /// Catalog JSON to use instead of the bundled one.
    #[arg(long, global = true)]
    pub catalog: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Summarize the catalog.
    List {
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Optimal packing of one tiling.
    Density {
        /// Witt symbol, e.g. V3, HP3 or V̄₃.
        witt: String,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Check every tiling against its tabulated density.
    Verify {
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
        /// Also cross-check every volume by quadrature.
        #[arg(long, value_enum, default_value = "off")]
        oracle: Switch,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Ok,
    Mismatch,
    Flagged,
}

impl Status {
    fn as_str(&self) -> &'static str {
        match self {
            Status::Ok => "OK",
            Status::Mismatch => "MISMATCH",
            Status::Flagged => "FLAGGED",
        }
    }
}

/// One line of the verification report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub witt: String,
    pub class: String,
    pub n_ideal: usize,
    pub density: f64,
    pub paper_density: f64,
    pub residual: f64,
    pub ratios: Vec<f64>,
    pub status: Status,
}

/// Quadrature cross-check of one catalog volume.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeRow {
    pub witt: String,
    pub reference: f64,
    pub quadrature: f64,
    pub residual: f64,
    pub status: Status,
}

/// Output of `verify`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub rows: Vec<ReportRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub volumes: Option<Vec<VolumeRow>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decompositions: Option<Vec<DecompositionReport>>,
}

impl VerifyReport {
    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(|r| r.status != Status::Mismatch)
            && self
                .volumes
                .iter()
                .flatten()
                .all(|v| v.status == Status::Ok)
            && self
                .decompositions
                .iter()
                .flatten()
                .all(|d| d.residual <= ORACLE_TOL && d.quadrature_residual <= ORACLE_TOL)
    }
}

/// Formats `x` with `digits` significant digits.
pub fn significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Small-denominator fraction equal to `x` within `1e-9`, if one exists.
pub fn as_fraction(x: f64) -> Option<(i64, i64)> {
    (1..=1000i64).find_map(|d| {
        let n = (x * d as f64).round();
        ((x * d as f64 - n).abs() <= 1e-9 * d as f64).then_some((n as i64, d))
    })
}

/// Ratio vector as `a/b|c/d`, with decimals where no small fraction fits.
pub fn format_ratios(ratios: &[f64]) -> String {
    ratios
        .iter()
        .map(|&r| match as_fraction(r) {
            Some((n, 1)) => n.to_string(),
            Some((n, d)) => format!("{n}/{d}"),
            None => significant(r, 9),
        })
        .collect::<Vec<_>>()
        .join("|")
}

fn csv_string(write: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    write(&mut w).expect("writing to memory");
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8")
}

fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.width()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.width());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let mut s = String::new();
        for (i, (c, w)) in cells.iter().zip(&widths).enumerate() {
            if i > 0 {
                s.push_str("  ");
            }
            s.push_str(c);
            s.push_str(&" ".repeat(w - c.width()));
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    out.push_str(&line(
        widths
            .iter()
            .map(|w| "-".repeat(*w))
            .collect::<Vec<_>>()
            .iter()
            .map(String::as_str)
            .collect(),
    ));
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}

/// Catalog summary; the JSON form is the catalog document itself.
pub fn cmd_list(catalog: &Catalog, format: Format) -> String {
    let rows: Vec<Vec<String>> = catalog
        .entries
        .iter()
        .map(|e| {
            vec![
                e.witt.clone(),
                e.display.clone(),
                e.notation.clone(),
                e.class.to_string(),
                e.n_ideal().to_string(),
                e.volume.to_string(),
                significant(closed_form_volume(&e.volume), 9),
            ]
        })
        .collect();
    let header = [
        "witt", "symbol", "schlafli", "class", "n_ideal", "volume", "value",
    ];
    match format {
        Format::Json => catalog.to_json() + "\n",
        Format::Csv => csv_string(|w| {
            w.write_record(header)?;
            for r in &rows {
                w.write_record(r)?;
            }
            Ok(())
        }),
        Format::Table => table(&header, &rows),
    }
}

#[derive(Serialize)]
struct DensityJson<'a> {
    witt: &'a str,
    density: f64,
    paper_density: f64,
    residual: f64,
    status: Status,
    optimum: &'a Optimum,
}

fn status_of(residual: f64, tolerance: f64, anomaly: bool) -> Status {
    if residual <= tolerance {
        Status::Ok
    } else if anomaly {
        Status::Flagged
    } else {
        Status::Mismatch
    }
}

/// Optimal packing of one tiling, with every anchored alternative.
pub fn cmd_density(
    catalog: &Catalog,
    witt: &str,
    opts: &PackingOptions,
    format: Format,
) -> Result<(String, Status)> {
    let s = catalog.find(witt)?;
    let opt = optimize(s, opts)?;
    let paper = s.paper_density.printed();
    let residual = (opt.best.density - paper).abs();
    let status = status_of(
        residual,
        opts.tolerance,
        s.has_anomaly(crate::catalog::Anomaly::Density),
    );
    let out = match format {
        Format::Json => {
            serde_json::to_string_pretty(&DensityJson {
                witt: &s.witt,
                density: opt.best.density,
                paper_density: paper,
                residual,
                status,
                optimum: &opt,
            })
            .expect("serializable")
                + "\n"
        }
        Format::Csv => csv_string(|w| {
            w.write_record(["anchor", "vertex", "s", "piece_volume", "ratio", "density"])?;
            for r in &opt.configurations {
                for (i, v) in &r.piece_volumes {
                    w.write_record([
                        r.configuration.anchor.to_string(),
                        i.to_string(),
                        significant(r.configuration.s[i], 12),
                        significant(*v, 12),
                        format_ratios(&[r.ratios[i]]),
                        significant(r.density, 9),
                    ])?;
                }
            }
            Ok(())
        }),
        Format::Table => {
            let mut o = String::new();
            let b = &opt.best;
            let _ = writeln!(o, "{} ({}, {})", s.display, s.witt, s.notation);
            let _ = writeln!(o, "density        {}", significant(b.density, 9));
            let sym = s
                .paper_density
                .symbol()
                .map(|x| format!(" ({x})"))
                .unwrap_or_default();
            let _ = writeln!(o, "table value    {paper}{sym}");
            let _ = writeln!(o, "residual       {residual:.2e}  {}", status.as_str());
            let _ = writeln!(o, "anchor         A{}", b.configuration.anchor);
            let ratios: Vec<f64> = b.ratios.values().copied().collect();
            let _ = writeln!(o, "ratios         {}", format_ratios(&ratios));
            let _ = writeln!(o, "simplex volume {}", significant(b.simplex_volume, 12));
            let rows: Vec<Vec<String>> = opt
                .configurations
                .iter()
                .flat_map(|r| {
                    r.piece_volumes.iter().map(move |(i, v)| {
                        vec![
                            format!("A{}", r.configuration.anchor),
                            format!("A{i}"),
                            significant(r.configuration.s[i], 12),
                            significant(*v, 12),
                            format_ratios(&[r.ratios[i]]),
                            significant(r.density, 9),
                        ]
                    })
                })
                .collect();
            o.push('\n');
            o.push_str(&table(
                &["anchor", "vertex", "s", "piece volume", "ratio", "density"],
                &rows,
            ));
            if let Some(f) = &opt.falsification {
                let _ = writeln!(
                    o,
                    "\ninterior search: {} samples ({} drawn), best {}, {} above optimum",
                    f.samples,
                    f.drawn,
                    significant(f.best_sampled, 9),
                    f.violations
                );
            }
            o
        }
    };
    Ok((out, status))
}

/// Runs the full verification, optionally with the quadrature oracle.
pub fn run_verify(catalog: &Catalog, opts: &PackingOptions, oracle: bool) -> Result<VerifyReport> {
    let rows = verify_all(catalog, opts)?
        .into_iter()
        .map(|v| {
            let s = catalog.find(&v.witt).expect("from catalog");
            ReportRow {
                witt: v.witt.clone(),
                class: s.class.to_string(),
                n_ideal: s.n_ideal(),
                density: v.optimum.best.density,
                paper_density: v.paper_density,
                residual: v.residual,
                ratios: v.optimum.best.ratios.values().copied().collect(),
                status: status_of(v.residual, opts.tolerance, v.anomaly),
            }
        })
        .collect();
    let (volumes, decompositions) = if oracle {
        let q = QuadratureOptions::default();
        let mut vols = Vec::new();
        for s in &catalog.entries {
            let quad = quadrature_volume(s, None, &q)?.volume;
            let reference = s
                .volume
                .printed_value
                .unwrap_or_else(|| closed_form_volume(&s.volume));
            let residual = (quad - reference).abs();
            vols.push(VolumeRow {
                witt: s.witt.clone(),
                reference,
                quadrature: quad,
                residual,
                status: status_of(residual, ORACLE_TOL, false),
            });
        }
        let decs = ["AVhat3", "BVhat3", "HVhat3", "CRhat3"]
            .iter()
            .map(|w| decomposition_check(catalog, w, &q))
            .collect::<Result<Vec<_>>>()?;
        (Some(vols), Some(decs))
    } else {
        (None, None)
    };
    Ok(VerifyReport {
        rows,
        volumes,
        decompositions,
    })
}

/// Renders a verification report.
pub fn render_verify(report: &VerifyReport, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("serializable") + "\n",
        Format::Csv => {
            let mut out = csv_string(|w| {
                w.write_record([
                    "witt",
                    "class",
                    "n_ideal",
                    "density",
                    "paper_density",
                    "residual",
                    "status",
                    "ratios",
                ])?;
                for r in &report.rows {
                    w.write_record([
                        r.witt.clone(),
                        r.class.clone(),
                        r.n_ideal.to_string(),
                        significant(r.density, 9),
                        r.paper_density.to_string(),
                        format!("{:.2e}", r.residual),
                        r.status.as_str().to_string(),
                        format_ratios(&r.ratios),
                    ])?;
                }
                Ok(())
            });
            if let Some(vols) = &report.volumes {
                out.push('\n');
                out.push_str(&csv_string(|w| {
                    w.write_record(["witt", "reference", "quadrature", "residual", "status"])?;
                    for v in vols {
                        w.write_record([
                            v.witt.clone(),
                            significant(v.reference, 12),
                            significant(v.quadrature, 12),
                            format!("{:.2e}", v.residual),
                            v.status.as_str().to_string(),
                        ])?;
                    }
                    Ok(())
                }));
            }
            out
        }
        Format::Table => {
            let rows: Vec<Vec<String>> = report
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.witt.clone(),
                        r.class.clone(),
                        r.n_ideal.to_string(),
                        significant(r.density, 9),
                        r.paper_density.to_string(),
                        format!("{:.2e}", r.residual),
                        r.status.as_str().to_string(),
                        format_ratios(&r.ratios),
                    ]
                })
                .collect();
            let mut out = table(
                &[
                    "witt", "class", "n_ideal", "density", "paper", "residual", "status", "ratios",
                ],
                &rows,
            );
            if let Some(vols) = &report.volumes {
                let rows: Vec<Vec<String>> = vols
                    .iter()
                    .map(|v| {
                        vec![
                            v.witt.clone(),
                            significant(v.reference, 12),
                            significant(v.quadrature, 12),
                            format!("{:.2e}", v.residual),
                            v.status.as_str().to_string(),
                        ]
                    })
                    .collect();
                out.push('\n');
                out.push_str(&table(
                    &["witt", "volume", "quadrature", "residual", "status"],
                    &rows,
                ));
            }
            if let Some(decs) = &report.decompositions {
                out.push('\n');
                for d in decs {
                    let terms: Vec<String> = d
                        .terms
                        .iter()
                        .map(|t| format!("{} {}", t.label, significant(t.value, 10)))
                        .collect();
                    let _ = writeln!(
                        out,
                        "{}: {} = {} (table {}, residual {:.2e}; quadrature residual {:.2e})",
                        d.witt,
                        terms.join(" + "),
                        significant(d.sum, 10),
                        d.table_value,
                        d.residual,
                        d.quadrature_residual
                    );
                }
            }
            out
        }
    }
}

fn exit_for(e: &Error) -> i32 {
    match e {
        Error::UnknownSymbol(_) => EXIT_USAGE,
        Error::ParseError { .. } | Error::ValidationError { .. } => EXIT_USAGE,
        _ => EXIT_NUMERIC,
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok((text, code)) => {
            let _ = write!(out, "{text}");
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_for(&e)
        }
    }
}

fn execute(cli: &Cli) -> Result<(String, i32)> {
    let catalog = load_catalog(cli.catalog.as_deref())?;
    match &cli.command {
        Command::List { format } => Ok((cmd_list(&catalog, *format), EXIT_OK)),
        Command::Density {
            witt,
            format,
            tolerance,
            seed,
            samples,
        } => {
            let opts = PackingOptions {
                tolerance: *tolerance,
                samples: *samples,
                seed: *seed,
            };
            let (text, status) = cmd_density(&catalog, witt, &opts, *format)?;
            let code = if status == Status::Mismatch {
                EXIT_MISMATCH
            } else {
                EXIT_OK
            };
            Ok((text, code))
        }
        Command::Verify {
            format,
            tolerance,
            oracle,
            jobs,
            seed,
            samples,
        } => {
            let opts = PackingOptions {
                tolerance: *tolerance,
                samples: *samples,
                seed: *seed,
            };
            let work = || run_verify(&catalog, &opts, *oracle == Switch::On);
            let report = match jobs {
                Some(n) => rayon::ThreadPoolBuilder::new()
                    .num_threads(*n)
                    .build()
                    .map_err(|e| Error::InvalidConfiguration(e.to_string()))?
                    .install(work)?,
                None => work()?,
            };
            let code = if report.all_ok() {
                EXIT_OK
            } else {
                EXIT_MISMATCH
            };
            Ok((render_verify(&report, *format), code))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fractions() {
        assert_eq!(as_fraction(0.75), Some((3, 4)));
        assert_eq!(as_fraction(1.0 / 12.0), Some((1, 12)));
        assert_eq!(as_fraction(0.881854), None);
        assert_eq!(
            format_ratios(&[2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0]),
            "2/3|1/6|1/6"
        );
        assert_eq!(format_ratios(&[1.0]), "1");
    }

    #[test]
    fn significant_digits() {
        assert_eq!(significant(0.8532760883, 9), "0.853276088");
        assert_eq!(significant(12.5, 3), "12.5");
        assert_eq!(significant(0.0422892336, 4), "0.04229");
    }
}
