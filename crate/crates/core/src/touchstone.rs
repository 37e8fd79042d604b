//! Touchstone v1 (`.sNp`) reader and writer, plus a plain CSV carrier for
//! the representations Touchstone cannot hold (A, B, T).
//!
//! Reading rules:
//! * `!` starts a comment, anywhere on a line.
//! * The first `#` line sets the options; later option lines are ignored.
//!   Tokens are case-insensitive and may come in any order. Defaults are
//!   `HZ S MA R 50`.
//! * Version 2 keywords (`[Version]`, `[Number of Ports]`, ...) are refused.
//! * 1- and 2-port files carry one frequency per line. 2-port data is
//!   ordered `N11 N21 N12 N22`. Larger networks are row-major and may wrap
//!   across lines, but every frequency starts on a new line.
//! * Z, Y, G and H data are normalized to the reference resistance `R`.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::error::Error as NetError;
use crate::matrix::ComplexMatrix;
use crate::network::NetworkSweep;
use crate::repr::Representation;
use crate::scalar::{Cx, Real};
use crate::wave::{PortNormalization, WaveConvention};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TouchstoneError {
    #[error("line {line}: malformed option line: {reason}")]
    MalformedOptionLine { line: usize, reason: String },

    #[error("line {line}: frequency does not increase")]
    NonMonotonicFrequency { line: usize },

    #[error("line {line}: expected {expected} values per frequency, found {found}")]
    DataCountMismatch { line: usize, expected: usize, found: usize },

    #[error("line {line}: Touchstone v2 keyword {keyword} is not supported")]
    UnsupportedVersionKeyword { line: usize, keyword: String },

    #[error("line {line}: invalid number {token:?}")]
    InvalidNumber { line: usize, token: String },

    #[error("{0} parameters cannot be stored in Touchstone v1")]
    UnsupportedRepresentation(Representation),

    #[error("sweep normalization is not a uniform real {expected} ohm")]
    NormalizationMismatch { expected: f64 },

    #[error("option line declares {declared} parameters but the sweep holds {actual}")]
    ParameterMismatch {
        declared: Representation,
        actual: Representation,
    },

    #[error("csv line {line}: {reason}")]
    MalformedCsv { line: usize, reason: String },

    #[error(transparent)]
    Network(#[from] NetError),
}

pub type Result<T, E = TouchstoneError> = std::result::Result<T, E>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FreqUnit {
    #[default]
    Hz,
    KHz,
    MHz,
    GHz,
}

impl FreqUnit {
    pub fn multiplier(self) -> f64 {
        match self {
            FreqUnit::Hz => 1.0,
            FreqUnit::KHz => 1e3,
            FreqUnit::MHz => 1e6,
            FreqUnit::GHz => 1e9,
        }
    }

    fn keyword(self) -> &'static str {
        match self {
            FreqUnit::Hz => "HZ",
            FreqUnit::KHz => "KHZ",
            FreqUnit::MHz => "MHZ",
            FreqUnit::GHz => "GHZ",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DataFormat {
    /// Real and imaginary part.
    RI,
    /// Magnitude and angle in degrees.
    #[default]
    MA,
    /// `20·log10(magnitude)` and angle in degrees.
    DB,
}

impl DataFormat {
    fn keyword(self) -> &'static str {
        match self {
            DataFormat::RI => "RI",
            DataFormat::MA => "MA",
            DataFormat::DB => "DB",
        }
    }
}

impl FromStr for DataFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_uppercase().as_str() {
            "RI" => Ok(DataFormat::RI),
            "MA" => Ok(DataFormat::MA),
            "DB" => Ok(DataFormat::DB),
            _ => Err(format!("unknown data format {s:?} (expected ri, ma or db)")),
        }
    }
}

/// Contents of the `#` option line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TouchstoneOptions {
    pub freq_unit: FreqUnit,
    pub param: Representation,
    pub format: DataFormat,
    pub resistance: f64,
}

impl Default for TouchstoneOptions {
    fn default() -> Self {
        Self {
            freq_unit: FreqUnit::Hz,
            param: Representation::S,
            format: DataFormat::MA,
            resistance: 50.0,
        }
    }
}

impl TouchstoneOptions {
    fn parse_line(body: &str, line: usize) -> Result<Self> {
        let malformed = |reason: String| TouchstoneError::MalformedOptionLine { line, reason };
        let mut opts = Self::default();
        let (mut unit_seen, mut param_seen, mut format_seen, mut r_seen) = (false, false, false, false);
        let once = |seen: &mut bool, what: &str| {
            if std::mem::replace(seen, true) {
                Err(malformed(format!("{what} given twice")))
            } else {
                Ok(())
            }
        };
        let mut tokens = body.split_whitespace();
        while let Some(tok) = tokens.next() {
            match tok.to_ascii_uppercase().as_str() {
                "HZ" | "KHZ" | "MHZ" | "GHZ" => {
                    once(&mut unit_seen, "frequency unit")?;
                    opts.freq_unit = match tok.to_ascii_uppercase().as_str() {
                        "HZ" => FreqUnit::Hz,
                        "KHZ" => FreqUnit::KHz,
                        "MHZ" => FreqUnit::MHz,
                        _ => FreqUnit::GHz,
                    };
                }
                "S" | "Y" | "Z" | "G" | "H" => {
                    once(&mut param_seen, "parameter type")?;
                    opts.param = tok.parse().expect("matched letter");
                }
                "RI" | "MA" | "DB" => {
                    once(&mut format_seen, "data format")?;
                    opts.format = tok.parse().expect("matched format");
                }
                "R" => {
                    once(&mut r_seen, "reference resistance")?;
                    let value = tokens
                        .next()
                        .ok_or_else(|| malformed("R without a value".into()))?;
                    let r: f64 = value
                        .parse()
                        .map_err(|_| malformed(format!("invalid resistance {value:?}")))?;
                    if !(r.is_finite() && r > 0.0) {
                        return Err(malformed(format!("resistance must be positive, got {value}")));
                    }
                    opts.resistance = r;
                }
                _ => return Err(malformed(format!("unknown token {tok:?}"))),
            }
        }
        Ok(opts)
    }

    /// The option line as written by [`write`].
    pub fn render(&self) -> String {
        format!(
            "# {} {} {} R {}",
            self.freq_unit.keyword(),
            self.param,
            self.format.keyword(),
            self.resistance
        )
    }
}

/// Port count encoded in a `.sNp` extension, e.g. `4` for `amp.s4p`.
pub fn port_count_from_path(path: &Path) -> Option<usize> {
    let ext = path.extension()?.to_str()?.to_ascii_lowercase();
    let digits = ext.strip_prefix('s')?.strip_suffix('p')?;
    digits.parse().ok().filter(|&n| n >= 1)
}

fn is_touchstone_param(rep: Representation) -> bool {
    matches!(
        rep,
        Representation::S | Representation::Y | Representation::Z | Representation::G | Representation::H
    )
}

/// Factor by which a stored (normalized) entry is multiplied to obtain the
/// physical value.
fn denormalization(rep: Representation, row: usize, col: usize, r: f64) -> f64 {
    match rep {
        Representation::Z => r,
        Representation::Y => 1.0 / r,
        Representation::H => match (row, col) {
            (0, 0) => r,
            (1, 1) => 1.0 / r,
            _ => 1.0,
        },
        Representation::G => match (row, col) {
            (0, 0) => 1.0 / r,
            (1, 1) => r,
            _ => 1.0,
        },
        _ => 1.0,
    }
}

/// Position in the matrix of the `idx`-th value pair of a record.
fn entry_position(idx: usize, n_ports: usize) -> (usize, usize) {
    if n_ports == 2 {
        // N11 N21 N12 N22
        [(0, 0), (1, 0), (0, 1), (1, 1)][idx]
    } else {
        (idx / n_ports, idx % n_ports)
    }
}

fn decode_pair<T: Real>(format: DataFormat, x: f64, y: f64) -> Cx<T> {
    let z = match format {
        DataFormat::RI => num_complex::Complex64::new(x, y),
        DataFormat::MA => num_complex::Complex64::from_polar(x, y.to_radians()),
        DataFormat::DB => num_complex::Complex64::from_polar(10f64.powf(x / 20.0), y.to_radians()),
    };
    Cx::new(T::lit(z.re), T::lit(z.im))
}

/// Parses Touchstone v1 text describing an `n_ports` network. The sweep
/// uses a uniform normalization equal to the file's `R` and the default
/// wave convention.
pub fn parse<T: Real>(text: &str, n_ports: usize) -> Result<(NetworkSweep<T>, TouchstoneOptions)> {
    assert!(n_ports >= 1, "port count must be positive");
    let per_record = 1 + 2 * n_ports * n_ports;
    let mut options: Option<TouchstoneOptions> = None;
    let mut records: Vec<(usize, Vec<f64>)> = Vec::new();
    let mut pending: Option<(usize, Vec<f64>)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('!').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(body) = content.strip_prefix('#') {
            if options.is_none() {
                options = Some(TouchstoneOptions::parse_line(body, line_no)?);
            }
            continue;
        }
        if content.starts_with('[') {
            let keyword = content.split(']').next().unwrap_or(content).to_string() + "]";
            return Err(TouchstoneError::UnsupportedVersionKeyword { line: line_no, keyword });
        }
        let values = content
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| TouchstoneError::InvalidNumber {
                        line: line_no,
                        token: tok.to_string(),
                    })
            })
            .collect::<Result<Vec<f64>>>()?;

        if n_ports <= 2 {
            if values.len() != per_record {
                return Err(TouchstoneError::DataCountMismatch {
                    line: line_no,
                    expected: per_record,
                    found: values.len(),
                });
            }
            records.push((line_no, values));
            continue;
        }
        let (start, mut acc) = pending.take().unwrap_or((line_no, Vec::with_capacity(per_record)));
        acc.extend(values);
        if acc.len() > per_record {
            return Err(TouchstoneError::DataCountMismatch {
                line: start,
                expected: per_record,
                found: acc.len(),
            });
        }
        if acc.len() == per_record {
            records.push((start, acc));
        } else {
            pending = Some((start, acc));
        }
    }
    if let Some((start, acc)) = pending {
        return Err(TouchstoneError::DataCountMismatch {
            line: start,
            expected: per_record,
            found: acc.len(),
        });
    }

    let options = options.unwrap_or_default();
    let mult = options.freq_unit.multiplier();
    let r = options.resistance;
    let mut freqs: Vec<T> = Vec::with_capacity(records.len());
    let mut matrices = Vec::with_capacity(records.len());
    let mut last = None;
    for (line, rec) in &records {
        let f_hz = rec[0] * mult;
        if f_hz < 0.0 || last.is_some_and(|prev| f_hz <= prev) {
            return Err(TouchstoneError::NonMonotonicFrequency { line: *line });
        }
        last = Some(f_hz);
        let mut m = ComplexMatrix::zeros(n_ports, n_ports);
        for (idx, pair) in rec[1..].chunks_exact(2).enumerate() {
            let (row, col) = entry_position(idx, n_ports);
            let scale = T::lit(denormalization(options.param, row, col, r));
            m[(row, col)] = decode_pair::<T>(options.format, pair[0], pair[1]) * scale;
        }
        freqs.push(T::lit(f_hz));
        matrices.push(m);
    }
    let norm = PortNormalization::uniform_real(n_ports, T::lit(r))?;
    let sweep = NetworkSweep::from_matrices(&freqs, options.param, matrices, norm, WaveConvention::default())?;
    Ok((sweep, options))
}

/// Shortest round-trip decimal, in fixed notation unless the magnitude is
/// extreme; always carries a decimal point or exponent.
fn fmt_value<T: Real>(x: T) -> String {
    let ax = x.abs();
    if ax.is_zero() {
        return "0.0".into();
    }
    if ax < T::lit(1e-6) || ax >= T::lit(1e15) {
        return format!("{x:e}");
    }
    let s = format!("{x}");
    if s.contains('.') {
        s
    } else {
        s + ".0"
    }
}

/// Smallest dB value written for a zero magnitude.
const DB_FLOOR: f64 = -400.0;

fn encode_pair<T: Real>(format: DataFormat, z: Cx<T>) -> (T, T) {
    match format {
        DataFormat::RI => (z.re, z.im),
        DataFormat::MA => (z.norm(), z.arg().to_degrees()),
        DataFormat::DB => {
            let db = T::lit(20.0) * z.norm().log10();
            (db.max(T::lit(DB_FLOOR)), z.arg().to_degrees())
        }
    }
}

/// Writes a sweep as Touchstone v1 text. The sweep must be in
/// `options.param` and normalized to a uniform real `options.resistance`.
pub fn write<T: Real>(sweep: &NetworkSweep<T>, options: &TouchstoneOptions) -> Result<String> {
    if !is_touchstone_param(options.param) {
        return Err(TouchstoneError::UnsupportedRepresentation(options.param));
    }
    if let Some(rep) = sweep.rep() {
        if !is_touchstone_param(rep) {
            return Err(TouchstoneError::UnsupportedRepresentation(rep));
        }
        if rep != options.param {
            return Err(TouchstoneError::ParameterMismatch {
                declared: options.param,
                actual: rep,
            });
        }
    }
    let r = options.resistance;
    if let Some(norm) = sweep.norm() {
        let uniform = norm.uniform_real_value().and_then(|v| v.to_f64());
        let matches = uniform.is_some_and(|v| (v - r).abs() <= 1e-12 * r);
        if !matches {
            return Err(TouchstoneError::NormalizationMismatch { expected: r });
        }
    }

    let mut out = String::new();
    let _ = writeln!(out, "{}", options.render());
    let _ = writeln!(out, "! generated by netconv {}", env!("CARGO_PKG_VERSION"));
    let mult = options.freq_unit.multiplier();
    for point in sweep.points() {
        let n = point.n_ports();
        let freq = point.frequency().to_f64().unwrap_or(f64::NAN) / mult;
        let m = point.matrix();
        let mut line = format!("{freq}");
        for idx in 0..n * n {
            let (row, col) = entry_position(idx, n);
            let scale = T::lit(1.0 / denormalization(options.param, row, col, r));
            let (x, y) = encode_pair(options.format, m[(row, col)] * scale);
            let _ = write!(line, " {} {}", fmt_value(x), fmt_value(y));
            // v1: rows of 3+ port networks start on a new line, at most four
            // pairs per line.
            let last = idx + 1 == n * n;
            if n >= 3 && !last && ((idx + 1) % n == 0 || (idx % n + 1) % 4 == 0) {
                let _ = writeln!(out, "{line}");
                line = String::new();
            }
        }
        let _ = writeln!(out, "{}", line.trim_start());
    }
    Ok(out)
}

fn csv_entry_label(row: usize, col: usize, n: usize) -> String {
    if n < 10 {
        format!("M_{}{}", row + 1, col + 1)
    } else {
        format!("M_{}_{}", row + 1, col + 1)
    }
}

/// Writes `freq_hz,rep,re(M_11),im(M_11),...` (row-major), one line per
/// frequency.
pub fn write_csv<T: Real>(sweep: &NetworkSweep<T>) -> String {
    let mut out = String::from("freq_hz,rep");
    let n = sweep.n_ports().unwrap_or(0);
    for row in 0..n {
        for col in 0..n {
            let label = csv_entry_label(row, col, n);
            let _ = write!(out, ",re({label}),im({label})");
        }
    }
    out.push('\n');
    for point in sweep.points() {
        let _ = write!(out, "{},{}", point.frequency(), point.rep());
        for z in point.matrix().as_slice() {
            let _ = write!(out, ",{},{}", z.re, z.im);
        }
        out.push('\n');
    }
    out
}

/// Reads text produced by [`write_csv`]. The CSV carries no reference
/// impedance, so the caller supplies normalization and convention.
pub fn parse_csv<T: Real>(
    text: &str,
    norm: &PortNormalization<T>,
    convention: WaveConvention<T>,
) -> Result<NetworkSweep<T>> {
    let malformed = |line: usize, reason: String| TouchstoneError::MalformedCsv { line, reason };
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let Some((_, header)) = lines.next() else {
        return Ok(NetworkSweep::empty());
    };
    let columns = header.split(',').count();
    if columns < 2 || !header.starts_with("freq_hz,rep") {
        return Err(malformed(1, "missing freq_hz,rep header".into()));
    }
    let entries = (columns - 2) / 2;
    let n = (entries as f64).sqrt().round() as usize;
    if (columns - 2) % 2 != 0 || n * n != entries {
        return Err(malformed(1, format!("{} value columns do not form a square matrix", columns - 2)));
    }

    let mut freqs = Vec::new();
    let mut matrices = Vec::new();
    let mut rep: Option<Representation> = None;
    for (idx, line) in lines {
        let line_no = idx + 1;
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != columns {
            return Err(malformed(line_no, format!("expected {columns} fields, found {}", fields.len())));
        }
        let number = |tok: &str| {
            tok.parse::<T>().ok().filter(|v| v.is_finite()).ok_or_else(|| TouchstoneError::InvalidNumber {
                line: line_no,
                token: tok.to_string(),
            })
        };
        let this_rep: Representation = fields[1]
            .parse()
            .map_err(|e: crate::repr::UnknownRepresentation| malformed(line_no, e.to_string()))?;
        if rep.is_some_and(|r| r != this_rep) {
            return Err(malformed(line_no, "representation changes within the file".into()));
        }
        rep = Some(this_rep);
        freqs.push(number(fields[0])?);
        let data = fields[2..]
            .chunks_exact(2)
            .map(|p| Ok(Cx::new(number(p[0])?, number(p[1])?)))
            .collect::<Result<Vec<_>>>()?;
        matrices.push(ComplexMatrix::new(n, n, data)?);
    }
    match rep {
        None => Ok(NetworkSweep::empty()),
        Some(rep) => Ok(NetworkSweep::from_matrices(&freqs, rep, matrices, norm.clone(), convention)?),
    }
}
