//! Parameter sweeps: a Cartesian grid over the measure's parameters,
//! evaluated in parallel and assembled in lexicographic order.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use cvwerner::{compute, Error, Measure, MeasureReport, Param, PointInputs, Result, Settings};
use rayon::prelude::*;
use serde_json::{Map, Value};

use crate::format::{fmt_sig, header, round_sig};

/// Values of one parameter: `start:stop:step` (inclusive), a comma list, or
/// a single number.
pub fn parse_range(text: &str) -> Result<Vec<f64>> {
    let bad = |message: String| Error::Parse { line: 0, message };
    let num = |s: &str| -> Result<f64> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| bad(format!("invalid number `{s}` in range `{text}`")))
    };
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [start, stop, step] => {
            let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
            if step.is_nan() || step <= 0.0 {
                return Err(bad(format!("step must be > 0 in `{text}`")));
            }
            if stop < start {
                return Err(bad(format!("stop < start in `{text}`")));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            Ok((0..count)
                .map(|i| round_sig(start + i as f64 * step))
                .collect())
        }
        [_] => text.split(',').map(num).collect(),
        _ => Err(bad(format!("expected start:stop:step, got `{text}`"))),
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub measure: Measure,
    pub ranges: BTreeMap<Param, Vec<f64>>,
    pub settings: Settings,
}

impl SweepSpec {
    /// Grid points with the first listed parameter varying slowest.
    pub fn points(&self) -> Result<Vec<PointInputs>> {
        let mut points = vec![PointInputs::default()];
        for param in Param::ALL {
            let Some(values) = self.ranges.get(&param) else {
                continue;
            };
            if values.is_empty() {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("empty range for `{}`", param.name()),
                });
            }
            points = points
                .into_iter()
                .flat_map(|pt| {
                    values.iter().map(move |&v| {
                        let mut next = pt;
                        next.set(param, v);
                        next
                    })
                })
                .collect();
        }
        Ok(points)
    }
}

pub struct SweepRow {
    pub inputs: PointInputs,
    pub outcome: std::result::Result<MeasureReport, Error>,
}

pub struct SweepTable {
    pub measure: Measure,
    pub params: Vec<Param>,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.outcome.is_err()).count()
    }

    fn result_columns(&self) -> Vec<String> {
        let keys: BTreeSet<&String> = self
            .rows
            .iter()
            .filter_map(|r| r.outcome.as_ref().ok())
            .flat_map(|r| r.results.keys())
            .collect();
        keys.into_iter().cloned().collect()
    }

    fn has_region(&self) -> bool {
        matches!(self.measure, Measure::Bounds | Measure::Region)
    }

    fn has_cutoff(&self) -> bool {
        matches!(self.measure, Measure::Bounds | Measure::PtMin)
    }

    /// Column names and formatted cells; numbers at twelve significant digits.
    pub fn cells(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let results = self.result_columns();
        let mut names: Vec<String> = self.params.iter().map(|p| p.name().to_string()).collect();
        names.extend(results.iter().cloned());
        if self.has_region() {
            names.push("region".into());
        }
        if self.has_cutoff() {
            names.push("cutoff".into());
        }
        names.extend(
            [
                "truncation_tail",
                "quadrature_budget",
                "series_tail",
                "error",
            ]
            .map(String::from),
        );
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut cells: Vec<String> = self
                    .params
                    .iter()
                    .map(|&p| row.inputs.get(p).map(fmt_sig).unwrap_or_default())
                    .collect();
                match &row.outcome {
                    Ok(r) => {
                        cells.extend(
                            results
                                .iter()
                                .map(|k| r.result(k).map(fmt_sig).unwrap_or_default()),
                        );
                        if self.has_region() {
                            cells.push(r.region.map(|g| g.to_string()).unwrap_or_default());
                        }
                        if self.has_cutoff() {
                            cells.push(r.cutoff.map(|c| c.to_string()).unwrap_or_default());
                        }
                        let b = r.error_budget;
                        cells.extend([b.truncation_tail, b.quadrature, b.series_tail].map(fmt_sig));
                        cells.push(String::new());
                    }
                    Err(e) => {
                        let blanks = names.len() - cells.len() - 1;
                        cells.extend(std::iter::repeat_n(String::new(), blanks));
                        cells.push(e.to_string());
                    }
                }
                cells
            })
            .collect();
        (names, rows)
    }

    /// CSV with a header row of column names and units.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let (names, rows) = self.cells();
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        let io = |e: csv::Error| Error::Io(e.to_string());
        writer
            .write_record(names.iter().map(|n| header(n)))
            .map_err(io)?;
        for row in rows {
            writer.write_record(&row).map_err(io)?;
        }
        writer.flush()?;
        Ok(())
    }

    /// JSON array with one object per row; empty cells are omitted.
    pub fn write_json<W: Write>(&self, mut out: W) -> Result<()> {
        let (names, rows) = self.cells();
        let objects: Vec<Value> = rows
            .into_iter()
            .map(|row| {
                let mut obj = Map::new();
                for (name, cell) in names.iter().zip(row) {
                    if cell.is_empty() {
                        continue;
                    }
                    let value = match cell.parse::<f64>() {
                        Ok(x) if name != "region" && name != "error" => Value::from(x),
                        _ => Value::from(cell),
                    };
                    obj.insert(name.clone(), value);
                }
                Value::Object(obj)
            })
            .collect();
        serde_json::to_writer_pretty(&mut out, &objects).map_err(|e| Error::Io(e.to_string()))?;
        writeln!(out)?;
        Ok(())
    }
}

/// Evaluates every grid point; failures are kept per row.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    let points = spec.points()?;
    let rows = points
        .into_par_iter()
        .map(|inputs| SweepRow {
            inputs,
            outcome: compute(spec.measure, &inputs, &spec.settings),
        })
        .collect();
    let mut params: Vec<Param> = spec.measure.parameters().to_vec();
    for p in Param::ALL {
        if spec.ranges.contains_key(&p) && !params.contains(&p) {
            params.push(p);
        }
    }
    params.sort();
    Ok(SweepTable {
        measure: spec.measure,
        params,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        let r = parse_range("0:1:0.01").unwrap();
        assert_eq!(r.len(), 101);
        assert_eq!(r[30], 0.3);
        assert_eq!(*r.last().unwrap(), 1.0);
        assert_eq!(parse_range("0.1,0.5,0.9").unwrap(), vec![0.1, 0.5, 0.9]);
        assert_eq!(parse_range("0.25").unwrap(), vec![0.25]);
        assert!(parse_range("0:1:0").is_err());
        assert!(parse_range("1:0:0.1").is_err());
        assert!(parse_range("0:1").is_err());
    }

    #[test]
    fn points_are_lexicographic() {
        let spec = SweepSpec {
            measure: Measure::Bounds,
            ranges: BTreeMap::from([
                (Param::Mu, vec![0.1, 0.2]),
                (Param::P, vec![0.0, 1.0]),
                (Param::Lambda, vec![0.5]),
            ]),
            settings: Settings::default(),
        };
        let pts: Vec<(f64, f64)> = spec
            .points()
            .unwrap()
            .iter()
            .map(|p| (p.p.unwrap(), p.mu.unwrap()))
            .collect();
        assert_eq!(pts, vec![(0.0, 0.1), (0.0, 0.2), (1.0, 0.1), (1.0, 0.2)]);
    }
}
