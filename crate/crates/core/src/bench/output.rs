//! CSV and plot-data output.
//!
//! The CSV header is the [`BenchmarkRow`] field list:
//!
//! ```text
//! instance,n,edges,density,hq_fraction,hq_absolute,solver,seed,total,hosting,public_comm,hybrid_comm,gap_to_optimal,wall_time,evaluations,feasible,error
//! ```
//!
//! Plot data is one file per instance and metric (`<instance>_cost.dat`,
//! `<instance>_time.dat`). Each file holds one block per solver: a
//! `# solver: <name>` line followed by whitespace-separated `hq_fraction value`
//! pairs, with blocks separated by two blank lines (gnuplot `index` style).

use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::summary::Summary;
use super::sweep::BenchmarkRow;
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 17] = [
    "instance",
    "n",
    "edges",
    "density",
    "hq_fraction",
    "hq_absolute",
    "solver",
    "seed",
    "total",
    "hosting",
    "public_comm",
    "hybrid_comm",
    "gap_to_optimal",
    "wall_time",
    "evaluations",
    "feasible",
    "error",
];

/// Incremental CSV writer; every row is flushed so a crash keeps finished work.
pub struct CsvSink {
    writer: csv::Writer<File>,
    path: PathBuf,
}

impl CsvSink {
    pub fn create(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let file = File::create(&path).map_err(|e| Error::io(&path, e))?;
        let mut writer = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(file);
        writer
            .write_record(CSV_HEADER)
            .map_err(|e| csv_error(&path, e))?;
        writer.flush().map_err(|e| Error::io(&path, e))?;
        Ok(CsvSink { writer, path })
    }

    pub fn write(&mut self, row: &BenchmarkRow) -> Result<()> {
        self.writer
            .serialize(row)
            .map_err(|e| csv_error(&self.path, e))?;
        self.writer.flush().map_err(|e| Error::io(&self.path, e))
    }

    pub fn finish(mut self) -> Result<()> {
        self.writer.flush().map_err(|e| Error::io(&self.path, e))
    }
}

fn csv_error(path: &Path, source: csv::Error) -> Error {
    Error::Csv {
        path: path.to_path_buf(),
        source,
    }
}

pub fn emit_csv(rows: &[BenchmarkRow], path: impl AsRef<Path>) -> Result<()> {
    let mut sink = CsvSink::create(path)?;
    for row in rows {
        sink.write(row)?;
    }
    sink.finish()
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<BenchmarkRow>> {
    let path = path.as_ref();
    let mut reader = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let headers = reader.headers().map_err(|e| csv_error(path, e))?;
    if headers.iter().ne(CSV_HEADER) {
        return Err(Error::Parse {
            path: path.display().to_string(),
            line: 1,
            message: format!("unexpected header; expected {}", CSV_HEADER.join(",")),
        });
    }
    reader
        .deserialize()
        .collect::<std::result::Result<Vec<BenchmarkRow>, _>>()
        .map_err(|e| csv_error(path, e))
}

/// Writes cost-vs-hq and time-vs-hq series for every instance into `dir`
/// and returns the paths written.
pub fn emit_plot_data(summary: &Summary, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;

    let mut instances: Vec<&str> = Vec::new();
    for cell in &summary.cells {
        if !instances.contains(&cell.instance.as_str()) {
            instances.push(&cell.instance);
        }
    }

    let mut written = Vec::new();
    for instance in instances {
        let cells: Vec<_> = summary
            .cells
            .iter()
            .filter(|c| c.instance == instance && c.runs > 0)
            .collect();
        let mut solvers: Vec<&str> = Vec::new();
        for cell in &cells {
            if !solvers.contains(&cell.solver.as_str()) {
                solvers.push(&cell.solver);
            }
        }
        for (metric, value) in [("cost", pick_cost as fn(&_) -> f64), ("time", pick_time)] {
            let path = dir.join(format!("{}_{metric}.dat", file_stem(instance)));
            let mut out = String::new();
            for (i, solver) in solvers.iter().enumerate() {
                if i > 0 {
                    out.push_str("\n\n");
                }
                out.push_str(&format!("# solver: {solver}\n# hq_fraction {metric}\n"));
                for cell in cells.iter().filter(|c| c.solver == *solver) {
                    out.push_str(&format!("{} {}\n", cell.hq_fraction, value(cell)));
                }
            }
            let mut file = File::create(&path).map_err(|e| Error::io(&path, e))?;
            file.write_all(out.as_bytes())
                .map_err(|e| Error::io(&path, e))?;
            written.push(path);
        }
    }
    Ok(written)
}

fn pick_cost(cell: &super::summary::CellSummary) -> f64 {
    cell.median_total
}

fn pick_time(cell: &super::summary::CellSummary) -> f64 {
    cell.median_wall_time
}

fn file_stem(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_csv_is_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rows.csv");
        emit_csv(&[], &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, format!("{}\n", CSV_HEADER.join(",")));
        assert!(read_csv(&path).unwrap().is_empty());
    }

    #[test]
    fn rejects_foreign_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rows.csv");
        std::fs::write(&path, "a,b\n1,2\n").unwrap();
        assert!(matches!(read_csv(&path), Err(Error::Parse { .. })));
    }

    #[test]
    fn stems_are_filesystem_safe() {
        assert_eq!(file_stem("G1"), "G1");
        assert_eq!(file_stem("a/b c"), "a_b_c");
    }
}
