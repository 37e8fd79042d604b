//! Cross-checks of the generated transforms against the sampling oracle and
//! against the published table.

use std::fmt::Write as _;

use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::printed::{lookup, PrintedEntry, WORKED_EXAMPLES};
use super::sampling::{fit_representation, sample_network};
use crate::error::Result;
use crate::matrix::ComplexMatrix;
use crate::network::NetworkPoint;
use crate::repr::{descriptor, Representation, SignalKind};
use crate::scalar::{Cx, Real};
use crate::transform::{build_p, convert, denominator_rcond};
use crate::wave::{wave_k, PortNormalization, WaveConvention};

/// Maximum relative disagreement between the transform and the oracle.
pub const ORACLE_TOLERANCE: f64 = 1e-9;

/// Reciprocal condition a random trial must exceed, both for the matrix
/// itself and for the conversion denominator.
pub const TRIAL_RCOND: f64 = 1e-6;

/// Agreement threshold when comparing a generated `P` with a printed one.
pub const PRINTED_TOLERANCE: f64 = 1e-12;

/// Reference impedance at which printed entries are evaluated.
pub const PRINTED_Z0: f64 = 50.0;

const MAX_DRAWS: usize = 1000;

fn signal_scale(kind: SignalKind) -> f64 {
    match kind {
        SignalKind::V => 50.0,
        SignalKind::I | SignalKind::A | SignalKind::B => 1.0,
    }
}

/// Random parameter matrix for `rep` with entries of realistic magnitude:
/// an entry mapping a current to a voltage is scaled by 50 Ω, the reverse
/// by 1/50 S, dimensionless entries are left at unit scale.
pub fn random_matrix<T: Real, R: Rng + ?Sized>(rep: Representation, n_ports: usize, rng: &mut R) -> ComplexMatrix<T> {
    let desc = descriptor(rep, n_ports).expect("caller checks port count");
    ComplexMatrix::from_fn(n_ports, n_ports, |r, c| {
        let scale = signal_scale(desc.outputs[r].kind) / signal_scale(desc.inputs[c].kind);
        let re = rng.gen_range(-1.0..1.0) * scale;
        let im = rng.gen_range(-1.0..1.0) * scale;
        Cx::new(T::lit(re), T::lit(im))
    })
}

/// Random per-port complex reference impedances, `Re ∈ [20, 100)` and
/// `Im ∈ [−30, 30)` ohm.
pub fn random_normalization<T: Real, R: Rng + ?Sized>(n_ports: usize, rng: &mut R) -> PortNormalization<T> {
    let z0 = (0..n_ports)
        .map(|_| Cx::new(T::lit(rng.gen_range(20.0..100.0)), T::lit(rng.gen_range(-30.0..30.0))))
        .collect();
    PortNormalization::new(z0).expect("positive real parts")
}

/// Either wave convention, the traveling one with a random phase.
pub fn random_convention<T: Real, R: Rng + ?Sized>(rng: &mut R) -> WaveConvention<T> {
    if rng.gen_bool(0.5) {
        WaveConvention::kurokawa()
    } else {
        let phase = T::lit(rng.gen_range(0.0..std::f64::consts::TAU));
        WaveConvention::traveling(Cx::from_polar(T::one(), phase)).expect("unit modulus")
    }
}

/// Draws networks in `from` until one is well conditioned as a matrix and
/// as a conversion to `to`. Returns the point and the number of rejected
/// draws, or `None` when no acceptable draw was found.
pub fn well_conditioned_trial<T: Real, R: Rng + ?Sized>(
    from: Representation,
    to: Representation,
    n_ports: usize,
    rng: &mut R,
) -> Option<(NetworkPoint<T>, usize)> {
    let min_rcond = T::lit(TRIAL_RCOND);
    for draw in 0..MAX_DRAWS {
        let norm = random_normalization::<T, _>(n_ports, rng);
        let convention = random_convention::<T, _>(rng);
        let r = random_matrix::<T, _>(from, n_ports, rng);
        let Ok(lu) = r.lu() else { continue };
        if lu.rcond() <= min_rcond {
            continue;
        }
        let Ok(p) = build_p(from, to, &norm, &convention) else { continue };
        match denominator_rcond(&p, &r) {
            Ok(rc) if rc > min_rcond => {}
            _ => continue,
        }
        let point = NetworkPoint::new(T::zero(), from, r, norm, convention).ok()?;
        return Some((point, draw));
    }
    None
}

/// How a printed table entry compares with the generated transform.
#[derive(Clone, Debug, PartialEq)]
pub enum PrintedVerdict {
    /// Equal entry by entry.
    Match,
    /// Equal after multiplying the printed matrix by `scale`.
    ScalarMatch { scale: Complex64 },
    /// Not proportional to the generated transform.
    Mismatch { residual: f64 },
    /// The table has no entry for this pair.
    NotPrinted,
}

impl PrintedVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            PrintedVerdict::Match => "MATCH",
            PrintedVerdict::ScalarMatch { .. } => "SCALAR_MATCH",
            PrintedVerdict::Mismatch { .. } => "MISMATCH",
            PrintedVerdict::NotPrinted => "NOT_PRINTED",
        }
    }
}

/// A printed matrix next to the generated one, both at [`PRINTED_Z0`] with
/// the Kurokawa wave constant.
#[derive(Clone, Debug, PartialEq)]
pub struct PrintedComparison {
    pub printed: ComplexMatrix<f64>,
    pub generated: ComplexMatrix<f64>,
    pub verdict: PrintedVerdict,
    /// For mismatches, a recognized explanation of the difference.
    pub diagnosis: Option<String>,
}

/// Compares a printed entry with `P` generated from the signal definitions.
pub fn compare_printed(entry: &PrintedEntry) -> Result<PrintedComparison> {
    let z0 = Complex64::new(PRINTED_Z0, 0.0);
    let convention = WaveConvention::kurokawa();
    let norm = PortNormalization::uniform(2, z0)?;
    let k = wave_k(&convention, z0)?;
    let printed = entry.evaluate(z0, k)?;
    let generated = build_p(entry.from, entry.to, &norm, &convention)?.matrix().clone();
    let verdict = scalar_verdict(&printed, &generated);
    let diagnosis = match verdict {
        PrintedVerdict::Mismatch { .. } => diagnose(entry, &printed, &generated),
        _ => None,
    };
    Ok(PrintedComparison {
        printed,
        generated,
        verdict,
        diagnosis,
    })
}

/// `P` with the T-side signal blocks stacked in the opposite order
/// (rows for a T target, columns for a T source).
fn swap_t_blocks(p: &ComplexMatrix<f64>, rows: bool, cols: bool) -> ComplexMatrix<f64> {
    let n = p.rows() / 2;
    let flip = |i: usize| (i + n) % (2 * n);
    ComplexMatrix::from_fn(p.rows(), p.cols(), |r, c| {
        p[(if rows { flip(r) } else { r }, if cols { flip(c) } else { c })]
    })
}

fn diagnose(entry: &PrintedEntry, printed: &ComplexMatrix<f64>, generated: &ComplexMatrix<f64>) -> Option<String> {
    use Representation::T;
    if entry.from == T || entry.to == T {
        let swapped = swap_t_blocks(generated, entry.to == T, entry.from == T);
        if !matches!(scalar_verdict(printed, &swapped), PrintedVerdict::Mismatch { .. }) {
            return Some(
                "consistent with the T signals stacked as [B2; A2; A1; B1], i.e. the entry converts the inverse of T"
                    .into(),
            );
        }
    }
    let tol = PRINTED_TOLERANCE * generated.max_abs();
    let mut flipped = 0;
    for (p, g) in printed.as_slice().iter().zip(generated.as_slice()) {
        if (p - g).norm() <= tol {
            continue;
        }
        if (p + g).norm() <= tol {
            flipped += 1;
        } else {
            return None;
        }
    }
    (flipped > 0).then(|| format!("agrees except for the sign of {flipped} entries"))
}

/// Best `c` minimizing `‖c·printed − generated‖_F`, then a verdict from the
/// remaining relative error.
fn scalar_verdict(printed: &ComplexMatrix<f64>, generated: &ComplexMatrix<f64>) -> PrintedVerdict {
    let (mut num, mut den) = (Complex64::zero(), 0.0);
    for (p, g) in printed.as_slice().iter().zip(generated.as_slice()) {
        num += p.conj() * g;
        den += p.norm_sqr();
    }
    if den == 0.0 {
        return PrintedVerdict::Mismatch { residual: f64::INFINITY };
    }
    let scale = num / den;
    let residual = printed.scale(scale).rel_diff(generated);
    if residual > PRINTED_TOLERANCE {
        PrintedVerdict::Mismatch { residual }
    } else if (scale - Complex64::one()).norm() <= PRINTED_TOLERANCE {
        PrintedVerdict::Match
    } else {
        PrintedVerdict::ScalarMatch { scale }
    }
}

/// Result of checking one ordered pair.
#[derive(Clone, Debug, PartialEq)]
pub struct PairReport {
    pub from: Representation,
    pub to: Representation,
    pub n_ports: usize,
    /// Trials in which both the transform and the oracle produced a matrix.
    pub evaluated: usize,
    /// Trials abandoned because one side reported a structural singularity
    /// or no well-conditioned draw was found.
    pub skipped: usize,
    /// Random draws rejected as ill-conditioned before a trial was formed.
    pub resampled: usize,
    pub max_deviation: f64,
    pub printed: Option<PrintedComparison>,
}

impl PairReport {
    pub fn oracle_passed(&self) -> bool {
        self.evaluated > 0 && self.max_deviation < ORACLE_TOLERANCE
    }

    pub fn printed_verdict(&self) -> PrintedVerdict {
        self.printed
            .as_ref()
            .map_or(PrintedVerdict::NotPrinted, |c| c.verdict.clone())
    }
}

fn pair_seed(seed: u64, from: Representation, to: Representation, n_ports: usize) -> u64 {
    let tag = (from as u64) << 16 | (to as u64) << 8 | n_ports as u64;
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ tag.wrapping_mul(0xD1B5_4A32_D192_ED03)
}

/// Runs `trials` random comparisons of `convert` against the oracle for one
/// ordered pair, plus the printed-table comparison for 2-port pairs.
pub fn verify_pair<T: Real>(
    from: Representation,
    to: Representation,
    n_ports: usize,
    trials: usize,
    seed: u64,
) -> Result<PairReport> {
    from.check_ports(n_ports)?;
    to.check_ports(n_ports)?;
    let mut rng = ChaCha8Rng::seed_from_u64(pair_seed(seed, from, to, n_ports));
    let mut report = PairReport {
        from,
        to,
        n_ports,
        evaluated: 0,
        skipped: 0,
        resampled: 0,
        max_deviation: 0.0,
        printed: None,
    };
    for _ in 0..trials {
        let Some((point, rejected)) = well_conditioned_trial::<T, _>(from, to, n_ports, &mut rng) else {
            report.skipped += 1;
            continue;
        };
        report.resampled += rejected;
        let sample_seed = rng.gen::<u64>();
        let converted = convert(&point, to);
        let fitted = sample_network(from, point.matrix(), point.norm(), point.convention(), sample_seed)
            .and_then(|s| fit_representation(&s, to, point.norm(), point.convention()));
        match (converted, fitted) {
            (Ok(c), Ok(f)) => {
                let dev = c.matrix().rel_diff(&f.matrix).to_f64().unwrap_or(f64::INFINITY);
                report.max_deviation = report.max_deviation.max(dev);
                report.evaluated += 1;
            }
            _ => report.skipped += 1,
        }
    }
    if n_ports == 2 {
        if let Some(entry) = lookup(from, to) {
            report.printed = Some(compare_printed(entry)?);
        }
    }
    Ok(report)
}

/// Two-port check of one printed table pair.
pub fn verify_table_entry(from: Representation, to: Representation, trials: usize, seed: u64) -> Result<PairReport> {
    verify_pair::<f64>(from, to, 2, trials, seed)
}

/// Outcome of comparing one of the worked examples with the generated `P`.
#[derive(Clone, Debug, PartialEq)]
pub struct WorkedExampleCheck {
    pub label: &'static str,
    pub comparison: PrintedComparison,
}

pub fn check_worked_examples() -> Result<Vec<WorkedExampleCheck>> {
    WORKED_EXAMPLES
        .iter()
        .map(|(label, entry)| {
            Ok(WorkedExampleCheck {
                label,
                comparison: compare_printed(entry)?,
            })
        })
        .collect()
}

/// Which pairs a verification run covers.
#[derive(Clone, Debug, PartialEq)]
pub struct VerificationPlan {
    pub seed: u64,
    pub trials: usize,
    /// `(from, to, n_ports)` triples, in report order.
    pub pairs: Vec<(Representation, Representation, usize)>,
}

impl VerificationPlan {
    /// All 56 ordered 2-port pairs, then Z/Y/S among themselves at 3 and 4
    /// ports.
    pub fn full(seed: u64, trials: usize) -> Self {
        let mut pairs = Vec::new();
        for from in Representation::ALL {
            for to in Representation::ALL {
                if from != to {
                    pairs.push((from, to, 2));
                }
            }
        }
        let multiport = [Representation::Z, Representation::Y, Representation::S];
        for n in [3, 4] {
            for from in multiport {
                for to in multiport {
                    if from != to {
                        pairs.push((from, to, n));
                    }
                }
            }
        }
        Self { seed, trials, pairs }
    }

    pub fn two_port(seed: u64, trials: usize, pairs: &[(Representation, Representation)]) -> Self {
        Self {
            seed,
            trials,
            pairs: pairs.iter().map(|&(a, b)| (a, b, 2)).collect(),
        }
    }
}

/// Collected results of a verification run.
#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub seed: u64,
    pub trials: usize,
    pub pairs: Vec<PairReport>,
    pub worked_examples: Vec<WorkedExampleCheck>,
}

/// Runs every pair of `plan` (in parallel, reported in plan order).
pub fn run_verification(plan: &VerificationPlan) -> Result<VerificationReport> {
    let pairs = plan
        .pairs
        .par_iter()
        .map(|&(from, to, n)| verify_pair::<f64>(from, to, n, plan.trials, plan.seed))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport {
        seed: plan.seed,
        trials: plan.trials,
        pairs,
        worked_examples: check_worked_examples()?,
    })
}

impl VerificationReport {
    /// True when every generated transform agrees with the oracle. Printed
    /// table verdicts do not enter.
    pub fn passed(&self) -> bool {
        self.pairs.iter().all(PairReport::oracle_passed)
    }

    pub fn max_deviation(&self) -> f64 {
        self.pairs.iter().map(|p| p.max_deviation).fold(0.0, f64::max)
    }

    /// Printed entries (table and worked examples) that are not an exact
    /// match.
    pub fn errata(&self) -> Vec<(String, &PrintedComparison)> {
        let table = self.pairs.iter().filter_map(|p| {
            p.printed
                .as_ref()
                .filter(|c| c.verdict != PrintedVerdict::Match)
                .map(|c| (format!("table entry {} -> {}", p.from, p.to), c))
        });
        let worked = self
            .worked_examples
            .iter()
            .filter(|w| w.comparison.verdict != PrintedVerdict::Match)
            .map(|w| (w.label.to_string(), &w.comparison));
        table.chain(worked).collect()
    }

    /// Human-readable report with an errata section.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "netconv self-test: generated transforms vs. definitional oracle");
        let _ = writeln!(
            out,
            "seed {}, {} trials per pair, oracle tolerance {:.1e}",
            self.seed, self.trials, ORACLE_TOLERANCE
        );
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "{:<4} {:<4} {:>5} {:>9} {:>7} {:>13}  {:<6}  printed table",
            "from", "to", "ports", "evaluated", "skipped", "max deviation", "oracle"
        );
        for p in &self.pairs {
            let verdict = p.printed_verdict();
            let printed = match &verdict {
                PrintedVerdict::ScalarMatch { scale } => format!("{} (x {})", verdict.label(), fmt_complex(*scale)),
                _ => verdict.label().to_string(),
            };
            let _ = writeln!(
                out,
                "{:<4} {:<4} {:>5} {:>9} {:>7} {:>13.3e}  {:<6}  {}",
                p.from.to_string(),
                p.to.to_string(),
                p.n_ports,
                p.evaluated,
                p.skipped,
                p.max_deviation,
                if p.oracle_passed() { "PASS" } else { "FAIL" },
                printed
            );
        }

        let _ = writeln!(out);
        let _ = writeln!(out, "worked examples");
        for w in &self.worked_examples {
            let _ = writeln!(out, "  {}: {}", w.label, w.comparison.verdict.label());
        }

        let errata = self.errata();
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "errata ({} printed entries differ from the signal definitions; z0 = {PRINTED_Z0} ohm, Kurokawa k)",
            errata.len()
        );
        for (label, cmp) in &errata {
            let _ = writeln!(out, "  {label}: {}", describe_verdict(&cmp.verdict));
            if let Some(why) = &cmp.diagnosis {
                let _ = writeln!(out, "    {why}");
            }
            let _ = writeln!(out, "    printed:");
            write_matrix(&mut out, &cmp.printed);
            let _ = writeln!(out, "    generated:");
            write_matrix(&mut out, &cmp.generated);
        }

        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "result: {} ({} pairs, max deviation {:.3e})",
            if self.passed() { "PASS" } else { "FAIL" },
            self.pairs.len(),
            self.max_deviation()
        );
        out
    }

    /// One whitespace-separated line per pair:
    /// `from to ports verdict max_deviation skipped evaluated`.
    pub fn render_lines(&self) -> String {
        let mut out = String::from("# from to ports verdict max_deviation skipped evaluated\n");
        for p in &self.pairs {
            let _ = writeln!(
                out,
                "{} {} {} {} {:.6e} {} {}",
                p.from,
                p.to,
                p.n_ports,
                p.printed_verdict().label(),
                p.max_deviation,
                p.skipped,
                p.evaluated
            );
        }
        let _ = writeln!(out, "# result {}", if self.passed() { "PASS" } else { "FAIL" });
        out
    }
}

fn describe_verdict(v: &PrintedVerdict) -> String {
    match v {
        PrintedVerdict::Match => "MATCH".into(),
        PrintedVerdict::ScalarMatch { scale } => {
            format!("SCALAR_MATCH, generated = {} x printed", fmt_complex(*scale))
        }
        PrintedVerdict::Mismatch { residual } => {
            format!("MISMATCH, not proportional (relative residual {residual:.3e})")
        }
        PrintedVerdict::NotPrinted => "NOT_PRINTED".into(),
    }
}

fn fmt_complex(z: Complex64) -> String {
    if z.im.abs() <= 1e-12 * z.re.abs().max(1.0) {
        format!("{:.6}", z.re)
    } else {
        format!("{:.6}{:+.6}j", z.re, z.im)
    }
}

fn write_matrix(out: &mut String, m: &ComplexMatrix<f64>) {
    for r in 0..m.rows() {
        let row: Vec<String> = m.row(r).iter().map(|z| format!("{:>10}", fmt_complex(clean(*z)))).collect();
        let _ = writeln!(out, "      [{} ]", row.join(""));
    }
}

fn clean(z: Complex64) -> Complex64 {
    let f = |x: f64| if x.abs() < 1e-14 { 0.0 } else { x };
    Complex64::new(f(z.re), f(z.im))
}

#[cfg(test)]
mod tests {
    use super::*;
    use Representation::*;

    #[test]
    fn z_to_g_printed_matches_exactly() {
        let r = verify_table_entry(Z, G, 20, 1).unwrap();
        assert_eq!(r.printed_verdict(), PrintedVerdict::Match);
        assert!(r.oracle_passed(), "{r:?}");
        assert_eq!(r.evaluated, 20);
    }

    #[test]
    fn s_to_y_printed_matches_table_not_worked_example() {
        let r = verify_table_entry(S, Y, 20, 1).unwrap();
        assert_eq!(r.printed_verdict(), PrintedVerdict::Match);
        let worked = check_worked_examples().unwrap();
        assert_eq!(worked[0].comparison.verdict, PrintedVerdict::Match);
        assert!(matches!(worked[1].comparison.verdict, PrintedVerdict::Mismatch { .. }));
    }

    #[test]
    fn s_to_h_printed_differs_by_prefactor() {
        let r = verify_table_entry(S, H, 5, 1).unwrap();
        match r.printed_verdict() {
            PrintedVerdict::ScalarMatch { scale } => {
                let half_inv_k = 1.0 / (2.0 * 0.070_710_678_118_654_75);
                assert!((scale - Complex64::new(half_inv_k, 0.0)).norm() < 1e-12);
            }
            other => panic!("unexpected verdict {other:?}"),
        }
    }

    #[test]
    fn b_pairs_are_not_printed() {
        let r = verify_table_entry(B, S, 5, 1).unwrap();
        assert_eq!(r.printed_verdict(), PrintedVerdict::NotPrinted);
        assert!(r.oracle_passed());
    }

    #[test]
    fn report_is_deterministic() {
        let plan = VerificationPlan::two_port(7, 10, &[(Z, G), (S, T), (T, A)]);
        let a = run_verification(&plan).unwrap();
        let b = run_verification(&plan).unwrap();
        assert_eq!(a.render_text(), b.render_text());
        assert_eq!(a.render_lines(), b.render_lines());
    }

    #[test]
    fn random_matrices_have_physical_scale() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let z: ComplexMatrix<f64> = random_matrix(Z, 2, &mut rng);
        let y: ComplexMatrix<f64> = random_matrix(Y, 2, &mut rng);
        assert!(z.max_abs() > 1.0);
        assert!(y.max_abs() < 0.05);
    }

    #[test]
    fn t_entries_describe_inverse_stacking() {
        for (from, to) in [(S, T), (T, S), (Z, T), (T, A)] {
            let cmp = compare_printed(lookup(from, to).unwrap()).unwrap();
            assert!(matches!(cmp.verdict, PrintedVerdict::Mismatch { .. }), "{from}->{to}");
            assert!(cmp.diagnosis.unwrap().contains("[B2; A2; A1; B1]"), "{from}->{to}");
        }
    }

    #[test]
    fn worked_s_to_y_is_a_sign_slip() {
        let worked = check_worked_examples().unwrap();
        assert_eq!(
            worked[1].comparison.diagnosis.as_deref(),
            Some("agrees except for the sign of 2 entries")
        );
    }
}
