//! Reading and writing network files by extension: `.sNp` is Touchstone
//! v1, `.csv` is the generic carrier.

use std::fs;
use std::path::{Path, PathBuf};

use netconv::touchstone::{self, port_count_from_path};
use netconv::{Cx, DataFormat, FreqUnit, NetworkSweep, PortNormalization, Representation, TouchstoneOptions, WaveConvention};

use crate::failure::Failure;

/// Normalization settings from the command line.
#[derive(Clone, Debug, Default)]
pub struct NormSpec {
    /// `--z0`: one value for all ports, or one per port.
    pub z0: Option<Vec<Cx<f64>>>,
    pub convention: WaveConvention<f64>,
}

impl NormSpec {
    fn normalization(&self, n_ports: usize) -> Result<Option<PortNormalization<f64>>, Failure> {
        let Some(z0) = &self.z0 else { return Ok(None) };
        let values = match z0.len() {
            1 => vec![z0[0]; n_ports],
            len if len == n_ports => z0.clone(),
            len => {
                return Err(Failure::usage(format!(
                    "--z0 lists {len} values but the network has {n_ports} ports"
                )))
            }
        };
        PortNormalization::new(values).map(Some).map_err(Failure::from)
    }
}

fn is_csv(path: &Path) -> bool {
    path.extension().and_then(|e| e.to_str()).is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn csv_port_count(text: &str) -> Option<usize> {
    let header = text.lines().find(|l| !l.trim().is_empty())?;
    let values = header.split(',').count().checked_sub(2)?;
    let n = ((values / 2) as f64).sqrt().round() as usize;
    (values % 2 == 0 && n * n * 2 == values && n > 0).then_some(n)
}

/// Loads a sweep. `--z0` replaces the normalization recorded in (or, for
/// CSV, assumed for) the file; the default is 50 Ω on every port.
pub fn read_network(path: &Path, spec: &NormSpec) -> Result<NetworkSweep<f64>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    let sweep = if is_csv(path) {
        let n = csv_port_count(&text).ok_or_else(|| Failure::parse(path, "csv header does not describe a square matrix"))?;
        let norm = match spec.normalization(n)? {
            Some(norm) => norm,
            None => PortNormalization::uniform_real(n, 50.0)?,
        };
        touchstone::parse_csv(&text, &norm, spec.convention).map_err(|e| Failure::touchstone(path, e))?
    } else {
        let n = port_count_from_path(path)
            .ok_or_else(|| Failure::parse(path, "cannot tell the port count; expected a .sNp or .csv file"))?;
        let (sweep, _) = touchstone::parse::<f64>(&text, n).map_err(|e| Failure::touchstone(path, e))?;
        match spec.normalization(n)? {
            None if spec.convention == WaveConvention::default() => sweep,
            norm => {
                let norm = norm.unwrap_or_else(|| sweep.norm().cloned().expect("non-empty sweeps have a normalization"));
                renormalize_metadata(sweep, norm, spec.convention)?
            }
        }
    };
    if sweep.is_empty() {
        return Err(Failure::parse(path, "no data points"));
    }
    Ok(sweep)
}

fn renormalize_metadata(
    sweep: NetworkSweep<f64>,
    norm: PortNormalization<f64>,
    convention: WaveConvention<f64>,
) -> Result<NetworkSweep<f64>, Failure> {
    let Some(rep) = sweep.rep() else { return Ok(sweep) };
    let freqs = sweep.frequencies();
    let matrices = sweep.into_points().into_iter().map(|p| p.into_matrix()).collect();
    Ok(NetworkSweep::from_matrices(&freqs, rep, matrices, norm, convention)?)
}

fn touchstone_capable(rep: Representation) -> bool {
    matches!(
        rep,
        Representation::S | Representation::Y | Representation::Z | Representation::G | Representation::H
    )
}

/// Writes `sweep` to `path`, falling back to CSV (next to the requested
/// path) when Touchstone cannot hold it. Returns the path written.
pub fn write_network(path: &Path, sweep: &NetworkSweep<f64>, format: DataFormat) -> Result<PathBuf, Failure> {
    let (target, text) = if is_csv(path) {
        (path.to_path_buf(), touchstone::write_csv(sweep))
    } else {
        let n = port_count_from_path(path)
            .ok_or_else(|| Failure::usage(format!("{}: output must be a .sNp or .csv file", path.display())))?;
        if sweep.n_ports().is_some_and(|m| m != n) {
            return Err(Failure::usage(format!(
                "{}: extension says {n} ports but the network has {}",
                path.display(),
                sweep.n_ports().unwrap_or(0)
            )));
        }
        let rep = sweep.rep().unwrap_or(Representation::S);
        let r = sweep.norm().and_then(|norm| norm.uniform_real_value());
        match r {
            Some(r) if touchstone_capable(rep) => {
                let options = TouchstoneOptions {
                    freq_unit: FreqUnit::Hz,
                    param: rep,
                    format,
                    resistance: r,
                };
                let text = touchstone::write(sweep, &options).map_err(|e| Failure::touchstone(path, e))?;
                (path.to_path_buf(), text)
            }
            _ => {
                let csv = path.with_extension("csv");
                let reason = if touchstone_capable(rep) {
                    "the normalization is not a uniform real impedance".to_string()
                } else {
                    format!("{rep} parameters cannot be stored in Touchstone v1")
                };
                eprintln!("netconv: warning: {reason}; writing CSV to {}", csv.display());
                (csv, touchstone::write_csv(sweep))
            }
        }
    };
    fs::write(&target, text).map_err(|e| Failure::io(&target, e))?;
    Ok(target)
}
