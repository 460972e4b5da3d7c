//! Datasets behind the standard figures: one CSV per panel plus a plotting
//! script stub that reads it.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use cvwerner::bounds::{p_ppt, p_sep};
use cvwerner::{Error, Measure, Param, Result, Settings};

use crate::format::fmt_sig;
use crate::sweep::{parse_range, run_sweep, SweepSpec};

const SCRIPT_TEMPLATE: &str = r#"# Plot stub for {name}; reads the CSV files written next to it.
import csv
import matplotlib.pyplot as plt

FILES = [{files}]
X = '{x}'
YS = {ys}

for path in FILES:
    with open(path) as f:
        rows = list(csv.DictReader(f))
    x_key = 'lambda' if path.endswith('-vs-lambda.csv') else X
    for y in YS:
        pts = [(float(r[x_key]), float(r[y])) for r in rows if r[y]]
        plt.plot([a for a, _ in pts], [b for _, b in pts], label=f'{path}: {y}')
"#;

const THRESHOLD_LINES: &str = r#"with open('fig-bounds-mu4-thresholds.csv') as f:
    for r in csv.DictReader(f):
        plt.axvline(float(r['p']), linestyle='--', color='gray')
"#;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Surface,
    Gaussian,
    Gap,
    BoundsEq,
    BoundsMu4,
    Ppt,
}

impl Figure {
    pub const ALL: [Figure; 6] = [
        Figure::Surface,
        Figure::Gaussian,
        Figure::Gap,
        Figure::BoundsEq,
        Figure::BoundsMu4,
        Figure::Ppt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Surface => "fig-surface",
            Figure::Gaussian => "fig-gaussian",
            Figure::Gap => "fig-gap",
            Figure::BoundsEq => "fig-bounds-eq",
            Figure::BoundsMu4 => "fig-bounds-mu4",
            Figure::Ppt => "fig-ppt",
        }
    }

    /// `(file stem, sweep)` for each panel.
    fn panels(self, settings: &Settings) -> Result<Vec<(String, SweepSpec)>> {
        let spec = |measure, ranges: &[(Param, &str)]| -> Result<SweepSpec> {
            let ranges = ranges
                .iter()
                .map(|&(p, r)| Ok((p, parse_range(r)?)))
                .collect::<Result<BTreeMap<_, _>>>()?;
            Ok(SweepSpec {
                measure,
                ranges,
                settings: settings.clone(),
            })
        };
        let name = self.name().to_string();
        Ok(match self {
            Figure::Surface => vec![(
                name,
                spec(
                    Measure::Discord0,
                    &[(Param::P, "0:1:0.02"), (Param::Lambda, "0:0.98:0.02")],
                )?,
            )],
            Figure::Gaussian => vec![(
                name,
                spec(
                    Measure::GaussianDiscord,
                    &[(Param::P, "0:1:0.02"), (Param::Lambda, "0.1,0.5,0.9")],
                )?,
            )],
            Figure::Gap => vec![
                (
                    format!("{name}-vs-p"),
                    spec(
                        Measure::Gap,
                        &[(Param::P, "0:1:0.02"), (Param::Lambda, "0.2,0.8")],
                    )?,
                ),
                (
                    format!("{name}-vs-lambda"),
                    spec(
                        Measure::Gap,
                        &[(Param::P, "0.5"), (Param::Lambda, "0:0.98:0.02")],
                    )?,
                ),
            ],
            Figure::BoundsEq => vec![(
                name,
                spec(
                    Measure::Bounds,
                    &[
                        (Param::P, "0:1:0.01"),
                        (Param::Lambda, "0.8"),
                        (Param::Mu, "0.8"),
                    ],
                )?,
            )],
            Figure::BoundsMu4 => {
                let mut s = spec(
                    Measure::Bounds,
                    &[(Param::P, "0:1:0.005"), (Param::Mu, "0.8")],
                )?;
                s.ranges.insert(Param::Lambda, vec![0.8f64.powi(4)]);
                vec![(name, s)]
            }
            Figure::Ppt => vec![(
                name,
                spec(Measure::PptBounds, &[(Param::Lambda, "0:0.99:0.01")])?,
            )],
        })
    }

    fn script(self, stems: &[String]) -> String {
        let (x, ys) = match self {
            Figure::Surface => ("p", "['discord (nats)']"),
            Figure::Gaussian => ("p", "['discord (nats)', 'gaussian_discord (nats)']"),
            Figure::Gap => ("p", "['gap_normalized (nats)', 'delta0 (nats)']"),
            Figure::BoundsEq | Figure::BoundsMu4 => {
                ("p", "['U (nats)', 'clipped (nats)', 'mid (nats)']")
            }
            Figure::Ppt => ("lambda", "['U (nats)', 'clipped (nats)']"),
        };
        let files: Vec<String> = stems.iter().map(|s| format!("'{s}.csv'")).collect();
        let mut text = SCRIPT_TEMPLATE
            .replace("{name}", self.name())
            .replace("{files}", &files.join(", "))
            .replace("{x}", x)
            .replace("{ys}", ys);
        if self == Figure::BoundsMu4 {
            text.push_str(THRESHOLD_LINES);
        }
        text.push_str("plt.legend()\nplt.show()\n");
        text
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Figure {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Figure::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown figure `{s}`"))
    }
}

/// Files written for one figure and the number of rows that failed.
pub struct FigureOutput {
    pub files: Vec<PathBuf>,
    pub failed_rows: usize,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn write_figure(figure: Figure, outdir: &Path, settings: &Settings) -> Result<FigureOutput> {
    std::fs::create_dir_all(outdir).map_err(|e| Error::Io(format!("{}: {e}", outdir.display())))?;
    let mut files = Vec::new();
    let mut failed_rows = 0;
    let mut stems = Vec::new();
    for (stem, spec) in figure.panels(settings)? {
        let table = run_sweep(&spec)?;
        failed_rows += table.failures();
        let path = outdir.join(format!("{stem}.csv"));
        table.write_csv(create(&path)?)?;
        files.push(path);
        stems.push(stem);
    }
    if figure == Figure::BoundsMu4 {
        let path = outdir.join("fig-bounds-mu4-thresholds.csv");
        let mut out = create(&path)?;
        writeln!(out, "name,p")?;
        writeln!(out, "p_sep,{}", fmt_sig(p_sep(0.8)?))?;
        writeln!(out, "p_PPT,{}", fmt_sig(p_ppt(0.8)?))?;
        out.flush()?;
        files.push(path);
    }
    let script = outdir.join(format!("{}.py", figure.name()));
    let mut out = create(&script)?;
    out.write_all(figure.script(&stems).as_bytes())?;
    out.flush()?;
    files.push(script);
    Ok(FigureOutput { files, failed_rows })
}
