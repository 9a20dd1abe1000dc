use std::io::Write;

use crate::experiments::SweepRow;

pub const CSV_HEADER: &str = "omega,kappa,exact_distance,bound,equation_tag";

/// Twelve significant digits in scientific notation.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn write_csv(rows: &[SweepRow], mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            fmt_float(r.omega),
            r.kappa.map(fmt_float).unwrap_or_default(),
            fmt_float(r.exact_distance),
            fmt_float(r.bound),
            r.equation_tag
        )?;
    }
    Ok(())
}

pub fn to_csv_string(rows: &[SweepRow]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ASCII output")
}

#[cfg(test)]
mod tests {
    use super::*;
    use openrwa::bounds::EquationTag;

    #[test]
    fn blank_kappa_for_qubit_rows() {
        let rows = [SweepRow {
            omega: 100.0,
            kappa: None,
            exact_distance: 0.0123,
            bound: 0.26,
            equation_tag: EquationTag::Contractive,
        }];
        let text = to_csv_string(&rows);
        let line = text.lines().nth(1).unwrap();
        assert_eq!(line, "1.00000000000e2,,1.23000000000e-2,2.60000000000e-1,contractive");
    }
}
