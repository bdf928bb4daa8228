use std::io::Write;
use std::path::Path;

use crate::code::Code;
use crate::error::Result;

use super::ExperimentSpec;

/// Swept parameter value of one row.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SweepPoint {
    Probability(f64),
    EsN0Db(f64),
}

impl SweepPoint {
    pub fn value(&self) -> f64 {
        match *self {
            SweepPoint::Probability(x) | SweepPoint::EsN0Db(x) => x,
        }
    }
}

/// Counts for one code at one sweep point.
#[derive(Clone, Debug, PartialEq)]
pub struct SerRow {
    pub code_id: String,
    pub n: usize,
    pub q: usize,
    /// `None` for codes with fewer than two words.
    pub d: Option<usize>,
    pub swt: usize,
    pub point: SweepPoint,
    /// Background probability `Q`; `None` on the waveform path.
    pub background: Option<f64>,
    pub trials: u64,
    pub nb_detect: bool,
    pub ties: u64,
    pub symbol_errors: u64,
    pub symbols_total: u64,
}

impl SerRow {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn new(
        code: &Code,
        d: Option<usize>,
        swt: usize,
        point: SweepPoint,
        background: Option<f64>,
        spec: &ExperimentSpec,
        ties: u64,
        symbol_errors: u64,
    ) -> Self {
        SerRow {
            code_id: code.id().to_string(),
            n: code.n(),
            q: code.q(),
            d,
            swt,
            point,
            background,
            trials: spec.trials,
            nb_detect: spec.nb_detection,
            ties,
            symbol_errors,
            symbols_total: spec.trials * code.n() as u64,
        }
    }

    pub fn ser(&self) -> f64 {
        if self.symbols_total == 0 {
            0.0
        } else {
            self.symbol_errors as f64 / self.symbols_total as f64
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SerReport {
    pub rows: Vec<SerRow>,
}

impl SerReport {
    /// Rows of one code, in sweep order.
    pub fn rows_for<'a>(&'a self, code_id: &'a str) -> impl Iterator<Item = &'a SerRow> + 'a {
        self.rows.iter().filter(move |r| r.code_id == code_id)
    }
}

/// Column layout of a CSV report.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CsvLayout {
    /// Every field of [`SerRow`].
    #[default]
    Full,
    /// `code_id, esn0_db, trials, symbol_errors, ser`.
    Waveform,
}

/// Decimal rendering with six significant digits.
pub fn format_ser(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let decimals = (5 - x.abs().log10().floor() as i64).max(0) as usize;
    format!("{x:.decimals$}")
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// Writes the header and every row.
pub fn emit_csv<W: Write>(report: &SerReport, layout: CsvLayout, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let point_name = match report.rows.first().map(|r| r.point) {
        Some(SweepPoint::EsN0Db(_)) => "esn0_db",
        _ => "p",
    };
    match layout {
        CsvLayout::Full => {
            w.write_record([
                "code_id",
                "n",
                "q",
                "d",
                "swt",
                point_name,
                "Q",
                "trials",
                "nb_detect",
                "ties",
                "symbol_errors",
                "symbols_total",
                "ser",
            ])?;
            for r in &report.rows {
                w.write_record([
                    r.code_id.clone(),
                    r.n.to_string(),
                    r.q.to_string(),
                    opt(r.d),
                    r.swt.to_string(),
                    r.point.value().to_string(),
                    opt(r.background),
                    r.trials.to_string(),
                    (if r.nb_detect { "on" } else { "off" }).to_string(),
                    r.ties.to_string(),
                    r.symbol_errors.to_string(),
                    r.symbols_total.to_string(),
                    format_ser(r.ser()),
                ])?;
            }
        }
        CsvLayout::Waveform => {
            w.write_record(["code_id", "esn0_db", "trials", "symbol_errors", "ser"])?;
            for r in &report.rows {
                w.write_record([
                    r.code_id.clone(),
                    r.point.value().to_string(),
                    r.trials.to_string(),
                    r.symbol_errors.to_string(),
                    format_ser(r.ser()),
                ])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// [`emit_csv`] to a file.
pub fn write_csv(report: &SerReport, layout: CsvLayout, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    emit_csv(report, layout, std::io::BufWriter::new(file))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row() -> SerRow {
        SerRow {
            code_id: "c".into(),
            n: 4,
            q: 5,
            d: Some(3),
            swt: 1,
            point: SweepPoint::Probability(0.1),
            background: Some(0.05),
            trials: 10,
            nb_detect: true,
            ties: 1,
            symbol_errors: 3,
            symbols_total: 40,
        }
    }

    fn render(rep: &SerReport, layout: CsvLayout) -> String {
        let mut buf = Vec::new();
        emit_csv(rep, layout, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn six_significant_digits() {
        assert_eq!(format_ser(0.075), "0.0750000");
        assert_eq!(format_ser(1.0), "1.00000");
        assert_eq!(format_ser(1.0 / 3.0), "0.333333");
        assert_eq!(format_ser(0.0), "0");
        assert_eq!(format_ser(2.5e-7), "0.000000250000");
    }

    #[test]
    fn empty_report_is_header_only() {
        let text = render(&SerReport::default(), CsvLayout::Full);
        assert_eq!(text.lines().count(), 1);
        assert!(text.starts_with("code_id,n,q,d,swt,p,Q,trials"));
    }

    #[test]
    fn one_row_two_lines_and_stable_bytes() {
        let rep = SerReport { rows: vec![row()] };
        let a = render(&rep, CsvLayout::Full);
        assert_eq!(a, render(&rep, CsvLayout::Full));
        assert_eq!(
            a.lines().nth(1).unwrap(),
            "c,4,5,3,1,0.1,0.05,10,on,1,3,40,0.0750000"
        );
        let w = render(&rep, CsvLayout::Waveform);
        assert_eq!(w.lines().count(), 2);
        assert_eq!(
            w.lines().next().unwrap(),
            "code_id,esn0_db,trials,symbol_errors,ser"
        );
    }
}
