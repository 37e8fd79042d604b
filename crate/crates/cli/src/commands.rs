use std::path::{Path, PathBuf};

use netconv::oracle::{run_verification, VerificationPlan};
use netconv::{cascade_sweeps, convert_sweep, Cx, DataFormat, NetworkSweep, Representation};

use crate::failure::{Failure, EXIT_SELFTEST};
use crate::files::{read_network, write_network, NormSpec};

pub fn convert(
    input: &Path,
    output: &Path,
    target: Representation,
    spec: &NormSpec,
    format: DataFormat,
) -> Result<(), Failure> {
    let sweep = read_network(input, spec)?;
    let converted = convert_sweep(&sweep, target)?;
    write_network(output, &converted, format)?;
    Ok(())
}

pub fn cascade(
    inputs: &[PathBuf],
    output: &Path,
    target: Option<Representation>,
    spec: &NormSpec,
    format: DataFormat,
) -> Result<(), Failure> {
    if inputs.len() < 2 {
        return Err(Failure::usage("cascade needs at least two input files"));
    }
    let sweeps = inputs
        .iter()
        .map(|p| read_network(p, spec))
        .collect::<Result<Vec<NetworkSweep<f64>>, _>>()?;
    let target = target.or_else(|| sweeps[0].rep()).unwrap_or(Representation::S);
    let mut chain = sweeps[0].clone();
    for next in &sweeps[1..] {
        chain = cascade_sweeps(&chain, next)?;
    }
    let converted = convert_sweep(&chain, target)?;
    write_network(output, &converted, format)?;
    Ok(())
}

/// Ten significant digits, trailing zeros dropped.
fn sig10(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let rounded: f64 = format!("{x:.9e}").parse().unwrap_or(x);
    let ax = rounded.abs();
    if (1e-5..1e12).contains(&ax) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

fn rect(z: Cx<f64>) -> String {
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("{}{sign}{}j", sig10(z.re), sig10(z.im.abs()))
}

fn entry_name(rep: Representation, row: usize, col: usize, n: usize) -> String {
    if n < 10 {
        format!("{rep}{}{}", row + 1, col + 1)
    } else {
        format!("{rep}{}_{}", row + 1, col + 1)
    }
}

pub fn show(input: &Path, rep: Option<Representation>, spec: &NormSpec) -> Result<String, Failure> {
    let mut sweep = read_network(input, spec)?;
    if let Some(rep) = rep {
        sweep = convert_sweep(&sweep, rep)?;
    }
    let n = sweep.n_ports().unwrap_or(0);
    let z0 = sweep
        .norm()
        .map(|norm| norm.z0().iter().map(|&z| rect_or_real(z)).collect::<Vec<_>>().join(","))
        .unwrap_or_default();
    let mut out = format!(
        "{}: {} point(s), {n} port(s), {} parameters, z0 = {z0} ohm\n",
        input.display(),
        sweep.len(),
        sweep.rep().map(|r| r.to_string()).unwrap_or_default()
    );
    for point in sweep.points() {
        out.push_str(&format!("f = {} Hz\n", point.frequency()));
        let m = point.matrix();
        for row in 0..n {
            for col in 0..n {
                let z = m[(row, col)];
                out.push_str(&format!(
                    "  {} = {}  ({} @ {} deg)\n",
                    entry_name(point.rep(), row, col, n),
                    rect(z),
                    sig10(z.norm()),
                    sig10(z.arg().to_degrees())
                ));
            }
        }
    }
    Ok(out)
}

fn rect_or_real(z: Cx<f64>) -> String {
    if z.im == 0.0 {
        sig10(z.re)
    } else {
        rect(z)
    }
}

pub fn parse_pair(text: &str) -> Result<(Representation, Representation), String> {
    let (a, b) = text
        .split_once(':')
        .ok_or_else(|| format!("pair {text:?} must look like from:to, e.g. z:g"))?;
    let from: Representation = a.parse().map_err(|e| format!("{e}"))?;
    let to: Representation = b.parse().map_err(|e| format!("{e}"))?;
    if from == to {
        return Err(format!("pair {text:?} converts a representation to itself"));
    }
    Ok((from, to))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ReportFormat {
    Text,
    Lines,
}

pub fn selftest(
    pairs: &[(Representation, Representation)],
    seed: u64,
    trials: usize,
    format: ReportFormat,
) -> Result<(), Failure> {
    let plan = if pairs.is_empty() {
        VerificationPlan::full(seed, trials)
    } else {
        VerificationPlan::two_port(seed, trials, pairs)
    };
    let report = run_verification(&plan)?;
    let text = match format {
        ReportFormat::Text => report.render_text(),
        ReportFormat::Lines => report.render_lines(),
    };
    print!("{text}");
    if report.passed() {
        Ok(())
    } else {
        let failed = report.pairs.iter().filter(|p| !p.oracle_passed()).count();
        Err(Failure::new(
            EXIT_SELFTEST,
            "selftest-failed",
            format!(
                "{failed} pair(s) disagree with the oracle (max deviation {:.3e})",
                report.max_deviation()
            ),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ten_digit_formatting() {
        assert_eq!(sig10(0.0), "0");
        assert_eq!(sig10(-0.0), "0");
        assert_eq!(sig10(50.0), "50");
        assert_eq!(sig10(1.0 / 3.0), "0.3333333333");
        assert_eq!(sig10(-0.02), "-0.02");
        assert_eq!(sig10(1e-20), "1e-20");
        assert_eq!(rect(Cx::new(0.5, -0.25)), "0.5-0.25j");
    }

    #[test]
    fn pair_syntax() {
        assert_eq!(parse_pair("z:g"), Ok((Representation::Z, Representation::G)));
        assert_eq!(parse_pair("S:abcd"), Ok((Representation::S, Representation::A)));
        assert!(parse_pair("zg").is_err());
        assert!(parse_pair("z:z").is_err());
        assert!(parse_pair("z:q").is_err());
    }
}
