//! Representations and the signal lists that define them.
//!
//! Each representation relates an ordered list of output signals to an
//! ordered list of input signals, `outputs = R · inputs`. Writing those lists
//! down is all that is needed to derive every conversion.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A network parameter set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Representation {
    /// Impedance: `V = Z·I`.
    Z,
    /// Admittance: `I = Y·V`.
    Y,
    /// Inverse hybrid: `[I1, V2] = G·[V1, I2]`.
    G,
    /// Hybrid: `[V1, I2] = H·[I1, V2]`.
    H,
    /// Chain (ABCD): `[V1, I1] = A·[V2, −I2]`.
    A,
    /// Inverse chain: `[V2, −I2] = B·[V1, I1]`.
    B,
    /// Scattering: `b = S·a`.
    S,
    /// Wave transfer: `[a1, b1] = T·[b2, a2]`.
    T,
}

impl Representation {
    pub const ALL: [Representation; 8] = [
        Representation::Z,
        Representation::Y,
        Representation::G,
        Representation::H,
        Representation::A,
        Representation::B,
        Representation::S,
        Representation::T,
    ];

    /// Only Z, Y and S are defined for an arbitrary number of ports.
    pub fn is_two_port_only(self) -> bool {
        !matches!(self, Representation::Z | Representation::Y | Representation::S)
    }

    /// Whether the inputs and outputs are incident/reflected waves.
    pub fn is_wave_based(self) -> bool {
        matches!(self, Representation::S | Representation::T)
    }

    pub fn supports_ports(self, n_ports: usize) -> bool {
        if self.is_two_port_only() {
            n_ports == 2
        } else {
            n_ports >= 1
        }
    }

    pub fn check_ports(self, n_ports: usize) -> Result<()> {
        if self.supports_ports(n_ports) {
            Ok(())
        } else {
            Err(Error::PortCountMismatch {
                rep: self,
                expected: if self.is_two_port_only() { 2 } else { 1 },
                got: n_ports,
            })
        }
    }

    pub fn letter(self) -> char {
        match self {
            Representation::Z => 'Z',
            Representation::Y => 'Y',
            Representation::G => 'G',
            Representation::H => 'H',
            Representation::A => 'A',
            Representation::B => 'B',
            Representation::S => 'S',
            Representation::T => 'T',
        }
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown representation {0:?} (expected one of Z Y G H A B S T)")]
pub struct UnknownRepresentation(pub String);

impl FromStr for Representation {
    type Err = UnknownRepresentation;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "Z" => Ok(Representation::Z),
            "Y" => Ok(Representation::Y),
            "G" => Ok(Representation::G),
            "H" => Ok(Representation::H),
            "A" | "ABCD" => Ok(Representation::A),
            "B" => Ok(Representation::B),
            "S" => Ok(Representation::S),
            "T" => Ok(Representation::T),
            _ => Err(UnknownRepresentation(s.to_string())),
        }
    }
}

/// The four kinds of port signal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SignalKind {
    /// Port voltage.
    V,
    /// Current flowing into the port.
    I,
    /// Incident wave.
    A,
    /// Reflected wave.
    B,
}

impl SignalKind {
    pub fn is_wave(self) -> bool {
        matches!(self, SignalKind::A | SignalKind::B)
    }
}

/// One signed port signal, e.g. `−I2` in the chain-matrix definition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SignalRef {
    pub kind: SignalKind,
    /// 1-based port index.
    pub port: usize,
    /// `+1` or `−1`.
    pub sign: i8,
}

impl SignalRef {
    pub const fn new(kind: SignalKind, port: usize) -> Self {
        Self { kind, port, sign: 1 }
    }

    pub const fn negated(kind: SignalKind, port: usize) -> Self {
        Self { kind, port, sign: -1 }
    }
}

impl fmt::Display for SignalRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.sign < 0 { "-" } else { "" };
        write!(f, "{sign}{:?}{}", self.kind, self.port)
    }
}

/// Ordered output and input signal lists of a representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepresentationDescriptor {
    pub rep: Representation,
    pub outputs: Vec<SignalRef>,
    pub inputs: Vec<SignalRef>,
}

impl RepresentationDescriptor {
    pub fn n_ports(&self) -> usize {
        self.outputs.len()
    }

    /// Outputs followed by inputs, the order of the stacked vector.
    pub fn stacked(&self) -> impl Iterator<Item = &SignalRef> {
        self.outputs.iter().chain(self.inputs.iter())
    }
}

/// Returns the signal lists defining `rep` on `n_ports` ports.
pub fn descriptor(rep: Representation, n_ports: usize) -> Result<RepresentationDescriptor> {
    use SignalKind::{A as Wa, B as Wb, I, V};
    rep.check_ports(n_ports)?;
    let all = |kind| (1..=n_ports).map(|p| SignalRef::new(kind, p)).collect::<Vec<_>>();
    let s = SignalRef::new;
    let (outputs, inputs) = match rep {
        Representation::Z => (all(V), all(I)),
        Representation::Y => (all(I), all(V)),
        Representation::S => (all(Wb), all(Wa)),
        Representation::G => (vec![s(I, 1), s(V, 2)], vec![s(V, 1), s(I, 2)]),
        Representation::H => (vec![s(V, 1), s(I, 2)], vec![s(I, 1), s(V, 2)]),
        Representation::A => (
            vec![s(V, 1), s(I, 1)],
            vec![s(V, 2), SignalRef::negated(I, 2)],
        ),
        Representation::B => (
            vec![s(V, 2), SignalRef::negated(I, 2)],
            vec![s(V, 1), s(I, 1)],
        ),
        Representation::T => (vec![s(Wa, 1), s(Wb, 1)], vec![s(Wb, 2), s(Wa, 2)]),
    };
    Ok(RepresentationDescriptor { rep, outputs, inputs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use SignalKind::*;

    fn names(list: &[SignalRef]) -> Vec<String> {
        list.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn hybrid_g_signals() {
        let d = descriptor(Representation::G, 2).unwrap();
        assert_eq!(names(&d.outputs), ["I1", "V2"]);
        assert_eq!(names(&d.inputs), ["V1", "I2"]);
    }

    #[test]
    fn transfer_t_signals() {
        let d = descriptor(Representation::T, 2).unwrap();
        assert_eq!(names(&d.outputs), ["A1", "B1"]);
        assert_eq!(names(&d.inputs), ["B2", "A2"]);
    }

    #[test]
    fn chain_a_signals_carry_negated_current() {
        let d = descriptor(Representation::A, 2).unwrap();
        assert_eq!(names(&d.outputs), ["V1", "I1"]);
        assert_eq!(names(&d.inputs), ["V2", "-I2"]);
        assert_eq!(d.inputs[1], SignalRef { kind: I, port: 2, sign: -1 });
    }

    #[test]
    fn multiport_z_y_s() {
        let d = descriptor(Representation::S, 4).unwrap();
        assert_eq!(names(&d.outputs), ["B1", "B2", "B3", "B4"]);
        assert_eq!(names(&d.inputs), ["A1", "A2", "A3", "A4"]);
        let d = descriptor(Representation::Y, 3).unwrap();
        assert_eq!(names(&d.outputs), ["I1", "I2", "I3"]);
    }

    #[test]
    fn two_port_only_reps_reject_other_counts() {
        for rep in [Representation::G, Representation::H, Representation::A, Representation::B, Representation::T] {
            for n in [1, 3, 4] {
                assert_eq!(
                    descriptor(rep, n).unwrap_err(),
                    Error::PortCountMismatch { rep, expected: 2, got: n }
                );
            }
        }
        assert!(descriptor(Representation::Z, 0).is_err());
    }

    #[test]
    fn every_port_covered_once_per_domain() {
        for rep in Representation::ALL {
            let n = if rep.is_two_port_only() { 2 } else { 3 };
            let d = descriptor(rep, n).unwrap();
            for port in 1..=n {
                let kinds: Vec<_> = d.stacked().filter(|s| s.port == port).map(|s| s.kind).collect();
                assert_eq!(kinds.len(), 2, "{rep} port {port}");
                assert_ne!(kinds[0], kinds[1]);
                assert_eq!(kinds[0].is_wave(), kinds[1].is_wave());
                assert_eq!(kinds[0].is_wave(), rep.is_wave_based());
            }
        }
    }

    #[test]
    fn parse_letters() {
        assert_eq!("abcd".parse::<Representation>().unwrap(), Representation::A);
        assert_eq!("t".parse::<Representation>().unwrap(), Representation::T);
        assert!("q".parse::<Representation>().is_err());
    }
}
