//! The published conversion table, kept verbatim as reference data.
//!
//! Entries are symbolic in `Z0`, `Y0 = 1/Z0` and `k`, and are evaluated at a
//! concrete normalization only when compared with a generated transform.
//! They are never used to convert anything. The table covers the 2-port
//! representations Y, Z, G, H, A, S and T; B does not appear in it.

use num_traits::{One, Zero};

use crate::error::Result;
use crate::matrix::ComplexMatrix;
use crate::repr::Representation;
use crate::scalar::{Cx, Real};

/// Overall factor printed in front of an entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Prefactor {
    None,
    K,
    HalfInvK,
}

/// One printed `4×4` transformation matrix.
#[derive(Clone, Copy, Debug)]
pub struct PrintedEntry {
    pub from: Representation,
    pub to: Representation,
    pub prefactor: Prefactor,
    /// Four rows of four whitespace-separated symbols from
    /// `0 1 -1 Z0 -Z0 Y0 -Y0`, rows separated by `/`.
    pub body: &'static str,
}

impl PrintedEntry {
    /// Numeric value for reference impedance `z0` and wave constant `k`.
    pub fn evaluate<T: Real>(&self, z0: Cx<T>, k: Cx<T>) -> Result<ComplexMatrix<T>> {
        let y0 = Cx::<T>::one() / z0;
        let rows: Vec<Vec<Cx<T>>> = self
            .body
            .split('/')
            .map(|row| {
                row.split_whitespace()
                    .map(|sym| match sym {
                        "0" => Cx::zero(),
                        "1" => Cx::one(),
                        "-1" => -Cx::<T>::one(),
                        "Z0" => z0,
                        "-Z0" => -z0,
                        "Y0" => y0,
                        "-Y0" => -y0,
                        other => panic!("unknown symbol {other:?} in printed table"),
                    })
                    .collect()
            })
            .collect();
        let m = ComplexMatrix::from_rows(&rows)?;
        let factor = match self.prefactor {
            Prefactor::None => Cx::one(),
            Prefactor::K => k,
            Prefactor::HalfInvK => Cx::<T>::one() / (k * T::lit(2.0)),
        };
        Ok(m.scale(factor))
    }
}

macro_rules! entry {
    ($from:ident -> $to:ident, $pre:ident, $body:expr) => {
        PrintedEntry {
            from: Representation::$from,
            to: Representation::$to,
            prefactor: Prefactor::$pre,
            body: $body,
        }
    };
}

/// The conversion table, row by row (source representation), column by
/// column (target).
pub const PRINTED_TABLE: [PrintedEntry; 42] = [
    entry!(Y -> Z, None, "0 0 1 0 / 0 0 0 1 / 1 0 0 0 / 0 1 0 0"),
    entry!(Y -> G, None, "1 0 0 0 / 0 0 0 1 / 0 0 1 0 / 0 1 0 0"),
    entry!(Y -> H, None, "0 0 1 0 / 0 1 0 0 / 1 0 0 0 / 0 0 0 1"),
    entry!(Y -> A, None, "0 0 1 0 / 1 0 0 0 / 0 0 0 1 / 0 -1 0 0"),
    entry!(Y -> S, K, "-Z0 0 1 0 / 0 -Z0 0 1 / Z0 0 1 0 / 0 Z0 0 1"),
    entry!(Y -> T, K, "0 -Z0 0 1 / 0 Z0 0 1 / Z0 0 1 0 / -Z0 0 1 0"),
    entry!(Z -> Y, None, "0 0 1 0 / 0 0 0 1 / 1 0 0 0 / 0 1 0 0"),
    entry!(Z -> G, None, "0 0 1 0 / 0 1 0 0 / 1 0 0 0 / 0 0 0 1"),
    entry!(Z -> H, None, "1 0 0 0 / 0 0 0 1 / 0 0 1 0 / 0 1 0 0"),
    entry!(Z -> A, None, "1 0 0 0 / 0 0 1 0 / 0 1 0 0 / 0 0 0 -1"),
    entry!(Z -> S, K, "1 0 -Z0 0 / 0 1 0 -Z0 / 1 0 Z0 0 / 0 1 0 Z0"),
    entry!(Z -> T, K, "0 1 0 -Z0 / 0 1 0 Z0 / 1 0 Z0 0 / 1 0 -Z0 0"),
    entry!(G -> Y, None, "1 0 0 0 / 0 0 0 1 / 0 0 1 0 / 0 1 0 0"),
    entry!(G -> Z, None, "0 0 1 0 / 0 1 0 0 / 1 0 0 0 / 0 0 0 1"),
    entry!(G -> H, None, "0 0 1 0 / 0 0 0 1 / 1 0 0 0 / 0 1 0 0"),
    entry!(G -> A, None, "0 0 1 0 / 1 0 0 0 / 0 1 0 0 / 0 0 0 -1"),
    entry!(G -> S, K, "-Z0 0 1 0 / 0 1 0 -Z0 / Z0 0 1 0 / 0 1 0 Z0"),
    entry!(G -> T, K, "0 1 0 -Z0 / 0 1 0 Z0 / Z0 0 1 0 / -Z0 0 1 0"),
    entry!(H -> Y, None, "0 0 1 0 / 0 1 0 0 / 1 0 0 0 / 0 0 0 1"),
    entry!(H -> Z, None, "1 0 0 0 / 0 0 0 1 / 0 0 1 0 / 0 1 0 0"),
    entry!(H -> G, None, "0 0 1 0 / 0 0 0 1 / 1 0 0 0 / 0 1 0 0"),
    entry!(H -> A, None, "1 0 0 0 / 0 0 1 0 / 0 0 0 1 / 0 -1 0 0"),
    entry!(H -> S, K, "1 0 -Z0 0 / 0 -Z0 0 1 / 1 0 Z0 0 / 0 Z0 0 1"),
    entry!(H -> T, K, "0 -Z0 0 1 / 0 Z0 0 1 / 1 0 Z0 0 / 1 0 -Z0 0"),
    entry!(A -> Y, None, "0 1 0 0 / 0 0 0 -1 / 1 0 0 0 / 0 0 1 0"),
    entry!(A -> Z, None, "1 0 0 0 / 0 0 1 0 / 0 1 0 0 / 0 0 0 -1"),
    entry!(A -> G, None, "0 1 0 0 / 0 0 1 0 / 1 0 0 0 / 0 0 0 -1"),
    entry!(A -> H, None, "1 0 0 0 / 0 0 0 -1 / 0 1 0 0 / 0 0 1 0"),
    entry!(A -> S, K, "1 -Z0 0 0 / 0 0 1 Z0 / 1 Z0 0 0 / 0 0 1 -Z0"),
    entry!(A -> T, K, "0 0 1 Z0 / 0 0 1 -Z0 / 1 Z0 0 0 / 1 -Z0 0 0"),
    entry!(S -> Y, HalfInvK, "-Y0 0 Y0 0 / 0 -Y0 0 Y0 / 1 0 1 0 / 0 1 0 1"),
    entry!(S -> Z, HalfInvK, "1 0 1 0 / 0 1 0 1 / -Y0 0 Y0 0 / 0 -Y0 0 Y0"),
    entry!(S -> G, HalfInvK, "-Y0 0 Y0 0 / 0 1 0 1 / 1 0 1 0 / 0 -Y0 0 Y0"),
    entry!(S -> H, None, "1 0 1 0 / 0 -Y0 0 Y0 / -Y0 0 Y0 0 / 0 1 0 1"),
    entry!(S -> A, HalfInvK, "1 0 1 0 / -Y0 0 Y0 0 / 0 1 0 1 / 0 Y0 0 -Y0"),
    entry!(S -> T, None, "0 1 0 0 / 0 0 0 1 / 0 0 1 0 / 1 0 0 0"),
    entry!(T -> Y, HalfInvK, "0 0 Y0 -Y0 / -Y0 Y0 0 0 / 0 0 1 1 / 1 1 0 0"),
    entry!(T -> Z, HalfInvK, "0 0 1 1 / 1 1 0 0 / 0 0 Y0 -Y0 / -Y0 Y0 0 0"),
    entry!(T -> G, HalfInvK, "0 0 Y0 -Y0 / 1 1 0 0 / 0 0 1 1 / -Y0 Y0 0 0"),
    entry!(T -> H, HalfInvK, "0 0 1 1 / -Y0 Y0 0 0 / 0 0 Y0 -Y0 / 1 1 0 0"),
    entry!(T -> A, HalfInvK, "0 0 1 1 / 0 0 Y0 -Y0 / 1 1 0 0 / Y0 -Y0 0 0"),
    entry!(T -> S, None, "0 0 0 1 / 1 0 0 0 / 0 0 1 0 / 0 1 0 0"),
];

/// The two worked examples printed in the body text.
pub const WORKED_EXAMPLES: [(&str, PrintedEntry); 2] = [
    ("worked example Z->G", entry!(Z -> G, None, "0 0 1 0 / 0 1 0 0 / 1 0 0 0 / 0 0 0 1")),
    ("worked example S->Y", entry!(S -> Y, HalfInvK, "Y0 0 Y0 0 / 0 Y0 0 Y0 / 1 0 1 0 / 0 1 0 1")),
];

pub fn lookup(from: Representation, to: Representation) -> Option<&'static PrintedEntry> {
    PRINTED_TABLE.iter().find(|e| e.from == from && e.to == to)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_is_complete_for_printed_reps() {
        use Representation::*;
        let reps = [Y, Z, G, H, A, S, T];
        for from in reps {
            for to in reps {
                assert_eq!(lookup(from, to).is_some(), from != to, "{from}->{to}");
            }
        }
        assert!(lookup(B, Z).is_none());
    }

    #[test]
    fn entries_are_four_by_four() {
        let z0 = Cx::new(50.0, 0.0);
        let k = Cx::new(0.1, 0.0);
        for e in PRINTED_TABLE.iter().chain(WORKED_EXAMPLES.iter().map(|(_, e)| e)) {
            let m = e.evaluate(z0, k).unwrap();
            assert_eq!((m.rows(), m.cols()), (4, 4), "{}->{}", e.from, e.to);
        }
    }
}
