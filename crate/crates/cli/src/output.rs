//! Deterministic table rendering: fixed 12-significant-digit numbers so
//! identical flags produce byte-identical output on any platform.

use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Tsv,
}

impl Format {
    pub fn separator(self) -> char {
        match self {
            Format::Csv => ',',
            Format::Tsv => '\t',
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "tsv" => Ok(Format::Tsv),
            other => Err(format!("unknown format {other:?} (expected csv or tsv)")),
        }
    }
}

/// Table accumulated in memory and rendered in one pass.
pub struct Table {
    format: Format,
    buffer: String,
    columns: usize,
}

impl Table {
    pub fn new(format: Format, header: &[&str]) -> Self {
        let mut table = Self { format, buffer: String::new(), columns: header.len() };
        table.push_line(header.iter().copied());
        table
    }

    pub fn row(&mut self, cells: &[String]) {
        assert_eq!(cells.len(), self.columns, "row width mismatch");
        self.push_line(cells.iter().map(String::as_str));
    }

    pub fn finish(self) -> String {
        self.buffer
    }

    fn push_line<'a>(&mut self, cells: impl Iterator<Item = &'a str>) {
        let sep = self.format.separator();
        for (i, cell) in cells.enumerate() {
            if i > 0 {
                self.buffer.push(sep);
            }
            self.buffer.push_str(cell);
        }
        self.buffer.push('\n');
    }
}

/// Formats with 12 significant digits, positional where reasonable and
/// exponent notation otherwise, trailing zeros trimmed (like printf "%g"
/// but with a fixed digit budget).
pub fn num(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    // 12 significant digits: one leading digit plus 11 decimals.
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponential form");
    let exp: i32 = exp.parse().expect("exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    debug_assert_eq!(digits.len(), 12);

    let sign = if negative { "-" } else { "" };
    let body = if (-4..12).contains(&exp) {
        if exp >= 0 {
            let split = exp as usize + 1;
            let int_part = &digits[..split];
            let frac = digits[split..].trim_end_matches('0');
            if frac.is_empty() {
                int_part.to_string()
            } else {
                format!("{int_part}.{frac}")
            }
        } else {
            let frac = digits.trim_end_matches('0');
            format!("0.{}{}", "0".repeat((-exp - 1) as usize), frac)
        }
    } else {
        let frac = digits[1..].trim_end_matches('0');
        if frac.is_empty() {
            format!("{}e{exp}", &digits[..1])
        } else {
            format!("{}.{frac}e{exp}", &digits[..1])
        }
    };
    format!("{sign}{body}")
}

/// Renders an optional value, empty cell for `None`.
pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}
