//! CSV file formats: datasets, chains, summaries, diagnostics, histograms
//! and predictions.
//!
//! Every file may start with `#` comment lines. Written files carry
//! provenance lines there; dataset files may also carry one
//! `#orders: o1,o2,...` line with the effect order of each predictor.
//! Floats are written in shortest round-trip form, so parsing a written file
//! reproduces the values bit for bit.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::metrics::{acf, effective_sample_size, histogram, PosteriorSummary};
use crate::model::{Dataset, Draw, EffectOrders, PosteriorDraws};
use crate::sampler::ChainOutput;

const ORDERS_PREFIX: &str = "#orders:";

/// Ordered `key: value` lines written as a `#` header into every output.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Provenance {
    entries: Vec<(String, String)>,
}

impl Provenance {
    pub fn new(command: &str) -> Self {
        let mut p = Self::default();
        p.push("blqq", env!("CARGO_PKG_VERSION"));
        p.push("command", command);
        p
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.entries.push((key.into(), value.to_string()));
        self
    }

    pub fn with(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.push(key, value);
        self
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    fn write_to(&self, w: &mut impl Write) -> std::io::Result<()> {
        for (k, v) in &self.entries {
            writeln!(w, "# {k}: {v}")?;
        }
        Ok(())
    }
}

fn path_str(path: &Path) -> String {
    path.display().to_string()
}

fn parse_err(path: &Path, line: u64, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path_str(path),
        line,
        message: message.into(),
    }
}

/// Raw table: header, data rows with their 1-based line numbers, and the
/// comment lines.
struct Table {
    header: Vec<String>,
    header_line: u64,
    rows: Vec<(u64, Vec<String>)>,
    comments: Vec<(u64, String)>,
}

fn read_table(path: &Path) -> Result<Table> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(format!("cannot read {}", path_str(path)), e))?;
    let comments = text
        .lines()
        .enumerate()
        .filter(|(_, l)| l.starts_with('#'))
        .map(|(i, l)| (i as u64 + 1, l.to_string()))
        .collect();
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .flexible(true)
        .has_headers(false)
        .from_reader(text.as_bytes());
    let mut records = reader.records();
    let first = records
        .next()
        .ok_or_else(|| parse_err(path, 1, "file has no header row"))?
        .map_err(|e| parse_err(path, 1, e.to_string()))?;
    let header_line = first.position().map_or(1, |p| p.line());
    let header: Vec<String> = first.iter().map(|s| s.trim().to_string()).collect();
    let mut rows = Vec::new();
    for rec in records {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(path, line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() == 1 && rec.get(0).is_some_and(|s| s.trim().is_empty()) {
            continue;
        }
        if rec.len() != header.len() {
            return Err(parse_err(
                path,
                line,
                format!("row has {} fields, header has {}", rec.len(), header.len()),
            ));
        }
        rows.push((line, rec.iter().map(|s| s.trim().to_string()).collect()));
    }
    Ok(Table {
        header,
        header_line,
        rows,
        comments,
    })
}

fn parse_real(path: &Path, line: u64, column: &str, cell: &str) -> Result<f64> {
    match cell.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(parse_err(
            path,
            line,
            format!("column `{column}`: expected a finite number, got \"{cell}\""),
        )),
    }
}

/// A design file: predictors plus the responses when present.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignFile {
    pub x: DMatrix<f64>,
    pub y: Option<DVector<f64>>,
    pub z: Option<Vec<u8>>,
    pub names: Vec<String>,
    pub orders: EffectOrders,
    /// Line number of the header row, for error messages.
    pub header_line: u64,
}

/// Parse a CSV with optional `y` and `z` columns; every other column is a
/// predictor, in file order.
pub fn parse_design_csv(path: impl AsRef<Path>) -> Result<DesignFile> {
    let path = path.as_ref();
    let table = read_table(path)?;
    let y_col = table.header.iter().position(|h| h == "y");
    let z_col = table.header.iter().position(|h| h == "z");
    let pred: Vec<usize> = (0..table.header.len())
        .filter(|&j| Some(j) != y_col && Some(j) != z_col)
        .collect();
    if pred.is_empty() {
        return Err(parse_err(path, table.header_line, "no predictor columns"));
    }
    let n = table.rows.len();
    let p = pred.len();
    let mut x = DMatrix::zeros(n, p);
    let mut y = y_col.map(|_| DVector::zeros(n));
    let mut z = z_col.map(|_| Vec::with_capacity(n));
    for (i, (line, cells)) in table.rows.iter().enumerate() {
        for (k, &j) in pred.iter().enumerate() {
            x[(i, k)] = parse_real(path, *line, &table.header[j], &cells[j])?;
        }
        if let (Some(j), Some(y)) = (y_col, y.as_mut()) {
            y[i] = parse_real(path, *line, "y", &cells[j])?;
        }
        if let (Some(j), Some(z)) = (z_col, z.as_mut()) {
            match cells[j].as_str() {
                "0" => z.push(0),
                "1" => z.push(1),
                other => {
                    return Err(parse_err(
                        path,
                        *line,
                        format!("column `z`: expected 0 or 1, got \"{other}\""),
                    ))
                }
            }
        }
    }
    let mut orders = EffectOrders::linear(p);
    for (line, text) in &table.comments {
        if let Some(rest) = text.strip_prefix(ORDERS_PREFIX) {
            let parsed: std::result::Result<Vec<u32>, _> = rest.split(',').map(|s| s.trim().parse::<u32>()).collect();
            let values = parsed.map_err(|_| parse_err(path, *line, format!("bad effect orders \"{}\"", rest.trim())))?;
            if values.len() != p {
                return Err(parse_err(
                    path,
                    *line,
                    format!("{} effect orders for {p} predictors", values.len()),
                ));
            }
            orders = EffectOrders::new(values);
        }
    }
    Ok(DesignFile {
        x,
        y,
        z,
        names: pred.iter().map(|&j| table.header[j].clone()).collect(),
        orders,
        header_line: table.header_line,
    })
}

/// Parse a dataset CSV: header row, one `y` column (real), one `z` column
/// (0/1) and predictor columns; effect orders default to all 1.
pub fn parse_dataset_csv(path: impl AsRef<Path>) -> Result<(Dataset, EffectOrders)> {
    let path = path.as_ref();
    let d = parse_design_csv(path)?;
    let y = d.y.ok_or_else(|| parse_err(path, d.header_line, "missing column `y`"))?;
    let z = d.z.ok_or_else(|| parse_err(path, d.header_line, "missing column `z`"))?;
    let data = Dataset::new(d.x, y, z, d.names)?;
    Ok((data, d.orders))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(format!("cannot create {}", dir.display()), e))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(format!("cannot create {}", path_str(path)), e))
}

/// Write `# provenance`, any extra comment lines, a header and rows.
fn write_table<I>(path: &Path, prov: &Provenance, extra: &[String], header: &[String], rows: I) -> Result<()>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let ctx = |e: std::io::Error| Error::io(format!("cannot write {}", path_str(path)), e);
    let mut out = create(path)?;
    prov.write_to(&mut out).map_err(ctx)?;
    for line in extra {
        writeln!(out, "{line}").map_err(ctx)?;
    }
    let mut w = csv::WriterBuilder::new().from_writer(out);
    let csv_err = |e: csv::Error| Error::io(format!("cannot write {}", path_str(path)), e.into());
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(ctx)
}

fn fmt(v: f64) -> String {
    format!("{v}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), fmt)
}

pub fn write_dataset_csv(path: impl AsRef<Path>, data: &Dataset, orders: &EffectOrders, prov: &Provenance) -> Result<()> {
    let orders_line = format!(
        "{ORDERS_PREFIX} {}",
        orders.as_slice().iter().map(u32::to_string).collect::<Vec<_>>().join(",")
    );
    let mut header = vec!["y".to_string(), "z".to_string()];
    header.extend(data.names().iter().cloned());
    let rows = (0..data.n()).map(|i| {
        let mut r = vec![fmt(data.y()[i]), data.z()[i].to_string()];
        r.extend(data.x().row(i).iter().map(|&v| fmt(v)));
        r
    });
    write_table(path.as_ref(), prov, &[orders_line], &header, rows)
}

fn chain_header(p: usize) -> Vec<String> {
    let mut h = vec!["iteration".to_string()];
    h.extend((1..=p).map(|j| format!("beta1_{j}")));
    h.extend((1..=p).map(|j| format!("beta2_{j}")));
    for name in ["sigma2", "rho", "tau1_sq", "tau2_sq", "r1", "r2"] {
        h.push(name.to_string());
    }
    h
}

/// One row per stored draw.
pub fn write_chain_csv(path: impl AsRef<Path>, draws: &PosteriorDraws, prov: &Provenance) -> Result<()> {
    let p = draws.p();
    let rows = (0..draws.len()).map(|k| {
        let mut r = vec![draws.iteration[k].to_string()];
        r.extend(draws.beta1[k].iter().map(|&v| fmt(v)));
        r.extend(draws.beta2[k].iter().map(|&v| fmt(v)));
        for v in [
            draws.sigma2[k],
            draws.rho[k],
            draws.tau1_sq[k],
            draws.tau2_sq[k],
            draws.r1[k],
            draws.r2[k],
        ] {
            r.push(fmt(v));
        }
        r
    });
    write_table(path.as_ref(), prov, &[], &chain_header(p), rows)
}

pub fn read_chain_csv(path: impl AsRef<Path>) -> Result<PosteriorDraws> {
    let path = path.as_ref();
    let table = read_table(path)?;
    let p = table.header.iter().filter(|h| h.starts_with("beta1_")).count();
    if table.header != chain_header(p) {
        return Err(parse_err(path, table.header_line, "not a chain file: unexpected columns"));
    }
    let mut draws = PosteriorDraws::with_capacity(table.rows.len());
    for (line, cells) in &table.rows {
        let iteration = cells[0]
            .parse::<usize>()
            .map_err(|_| parse_err(path, *line, format!("bad iteration \"{}\"", cells[0])))?;
        let v: Vec<f64> = cells[1..]
            .iter()
            .zip(&table.header[1..])
            .map(|(c, h)| parse_real(path, *line, h, c))
            .collect::<Result<_>>()?;
        draws.push(Draw {
            iteration,
            beta1: DVector::from_column_slice(&v[..p]),
            beta2: DVector::from_column_slice(&v[p..2 * p]),
            sigma2: v[2 * p],
            rho: v[2 * p + 1],
            tau1_sq: v[2 * p + 2],
            tau2_sq: v[2 * p + 3],
            r1: v[2 * p + 4],
            r2: v[2 * p + 5],
        });
    }
    if draws.is_empty() {
        return Err(parse_err(path, table.header_line, "chain file has no draws"));
    }
    Ok(draws)
}

pub fn write_summary_csv(path: impl AsRef<Path>, summary: &PosteriorSummary, prov: &Provenance) -> Result<()> {
    let header: Vec<String> = ["parameter", "mean", "sd", "q2.5", "q97.5", "excludes_zero"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let rows = summary.entries.iter().map(|(name, s)| {
        vec![
            name.clone(),
            fmt(s.mean),
            fmt(s.sd),
            fmt(s.q025),
            fmt(s.q975),
            u8::from(s.excludes_zero()).to_string(),
        ]
    });
    write_table(path.as_ref(), prov, &[], &header, rows)
}

/// ESS and autocorrelations up to `max_lag` (capped at half the chain
/// length) for every traced parameter. ESS is `NA` below 100 draws.
pub fn write_diagnostics_csv(path: impl AsRef<Path>, draws: &PosteriorDraws, max_lag: usize, prov: &Provenance) -> Result<()> {
    let lag = max_lag.min(draws.len() / 2);
    let mut header: Vec<String> = vec!["parameter".into(), "ess".into(), "degenerate".into()];
    header.extend((1..=lag).map(|k| format!("acf_{k}")));
    let mut rows = Vec::new();
    for (name, col) in draws.named_columns() {
        let (ess, degenerate) = match effective_sample_size(&col) {
            Ok(e) => (fmt(e.ess), u8::from(e.degenerate).to_string()),
            Err(_) => ("NA".into(), "NA".into()),
        };
        let mut r = vec![name, ess, degenerate];
        if lag > 0 {
            r.extend(acf(&col, lag)?.into_iter().skip(1).map(fmt));
        }
        rows.push(r);
    }
    write_table(path.as_ref(), prov, &[], &header, rows)
}

/// Post-burn-in acceptance counts and the adapted step of each
/// Metropolis–Hastings target; held-fixed targets show `NA` rates.
pub fn write_acceptance_csv(path: impl AsRef<Path>, chain: &ChainOutput, prov: &Provenance) -> Result<()> {
    let header: Vec<String> = ["target", "accepted", "proposed", "rate", "step"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let a = &chain.acceptance;
    let s = &chain.steps;
    let rows = [
        ("sigma2", a.sigma2, s.sigma2),
        ("rho", a.rho, s.rho),
        ("r1", a.r1, s.r1),
        ("r2", a.r2, s.r2),
    ]
    .into_iter()
    .map(|(name, c, step)| {
        vec![
            name.to_string(),
            c.accepted.to_string(),
            c.proposed.to_string(),
            fmt_opt(c.rate()),
            fmt(step),
        ]
    });
    write_table(path.as_ref(), prov, &[], &header, rows)
}

/// Histograms of σ², ρ and every coefficient, one file each, named
/// `hist_<parameter>.csv` inside `dir`.
pub fn write_histograms(dir: impl AsRef<Path>, draws: &PosteriorDraws, bins: usize, prov: &Provenance) -> Result<()> {
    let dir = dir.as_ref();
    let header: Vec<String> = ["bin_lo", "bin_hi", "count"].iter().map(|s| s.to_string()).collect();
    for (name, col) in draws.named_columns() {
        if !(name.starts_with("beta") || name == "sigma2" || name == "rho") {
            continue;
        }
        let h = histogram(&col, bins)?;
        let rows = (0..bins).map(|k| vec![fmt(h.edges[k]), fmt(h.edges[k + 1]), h.counts[k].to_string()]);
        write_table(&dir.join(format!("hist_{name}.csv")), prov, &[], &header, rows)?;
    }
    Ok(())
}

/// Point predictions for each row of a design file.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionTable {
    pub y_hat: Vec<f64>,
    pub p_z1: Vec<f64>,
    pub z_hat: Vec<u8>,
}

/// Per-row predictions; when `losses` is given it is appended as trailing
/// `# loss:` comment lines.
pub fn write_predictions_csv(
    path: impl AsRef<Path>,
    pred: &PredictionTable,
    losses: &[(String, f64)],
    prov: &Provenance,
) -> Result<()> {
    let path = path.as_ref();
    let header: Vec<String> = ["row", "y_hat", "p_z1", "z_hat"].iter().map(|s| s.to_string()).collect();
    let rows = (0..pred.y_hat.len()).map(|i| {
        vec![
            (i + 1).to_string(),
            fmt(pred.y_hat[i]),
            fmt(pred.p_z1[i]),
            pred.z_hat[i].to_string(),
        ]
    });
    write_table(path, prov, &[], &header, rows)?;
    if !losses.is_empty() {
        let mut f = fs::OpenOptions::new()
            .append(true)
            .open(path)
            .map_err(|e| Error::io(format!("cannot append to {}", path_str(path)), e))?;
        for (k, v) in losses {
            writeln!(f, "# loss {k}: {v}").map_err(|e| Error::io(format!("cannot write {}", path_str(path)), e))?;
        }
    }
    Ok(())
}

/// Generic CSV writer for tables assembled elsewhere (loss tables, truth
/// files).
pub fn write_rows(path: impl AsRef<Path>, prov: &Provenance, header: &[&str], rows: Vec<Vec<String>>) -> Result<()> {
    let header: Vec<String> = header.iter().map(|s| s.to_string()).collect();
    write_table(path.as_ref(), prov, &[], &header, rows)
}
