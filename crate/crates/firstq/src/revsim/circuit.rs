use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::cost::CostRecord;
use crate::error::Error;
use crate::Result;

/// Integer encoding of a register.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Encoding {
    TwosComplement,
    Unsigned,
}

/// A named, contiguous group of wires.
#[derive(Debug, Clone)]
pub struct Register {
    pub label: String,
    pub wires: Vec<usize>,
    pub encoding: Encoding,
}

impl Register {
    pub fn width(&self) -> u32 {
        self.wires.len() as u32
    }

    fn range(&self) -> (i128, i128) {
        let w = self.width();
        match self.encoding {
            Encoding::TwosComplement => (-(1i128 << (w - 1)), (1i128 << (w - 1)) - 1),
            Encoding::Unsigned => (0, (1i128 << w) - 1),
        }
    }

    fn encode(&self, value: i128) -> Result<u128> {
        let (lo, hi) = self.range();
        if value < lo || value > hi {
            return Err(Error::usage(format!(
                "value {value} out of range [{lo}, {hi}] for register {:?}",
                self.label
            )));
        }
        Ok((value as u128) & ((1u128 << self.width()) - 1))
    }

    fn decode(&self, bits: u128) -> i128 {
        let w = self.width();
        match self.encoding {
            Encoding::Unsigned => bits as i128,
            Encoding::TwosComplement => {
                if (bits >> (w - 1)) & 1 == 1 {
                    bits as i128 - (1i128 << w)
                } else {
                    bits as i128
                }
            }
        }
    }
}

/// A control wire with polarity: closed triggers on 1, open on 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ctl {
    pub wire: usize,
    pub closed: bool,
}

impl Ctl {
    pub fn on(wire: usize) -> Self {
        Ctl { wire, closed: true }
    }
    pub fn off(wire: usize) -> Self {
        Ctl {
            wire,
            closed: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateKind {
    X {
        target: usize,
    },
    Cx {
        control: Ctl,
        target: usize,
    },
    Ccx {
        c1: Ctl,
        c2: Ctl,
        target: usize,
    },
    /// Phase (−1) when the wire matches its polarity.
    Z {
        wire: Ctl,
    },
    /// Phase (−1) when both wires match their polarities.
    Cz {
        a: Ctl,
        b: Ctl,
    },
    /// Phase (−1) when all three wires match.
    Ccz {
        a: Ctl,
        b: Ctl,
        c: Ctl,
    },
    /// X applied when a compile-time flag is set.
    ClassicalX {
        enabled: bool,
        target: usize,
    },
}

/// One gate, possibly tagged as measurement-based uncomputation (free).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gate {
    pub kind: GateKind,
    pub uncompute: bool,
}

impl Gate {
    pub fn wires(&self) -> Vec<usize> {
        match self.kind {
            GateKind::X { target } | GateKind::ClassicalX { target, .. } => vec![target],
            GateKind::Cx { control, target } => vec![control.wire, target],
            GateKind::Ccx { c1, c2, target } => vec![c1.wire, c2.wire, target],
            GateKind::Z { wire } => vec![wire.wire],
            GateKind::Cz { a, b } => vec![a.wire, b.wire],
            GateKind::Ccz { a, b, c } => vec![a.wire, b.wire, c.wire],
        }
    }

    fn is_toffoli(&self) -> bool {
        matches!(self.kind, GateKind::Ccx { .. } | GateKind::Ccz { .. })
    }

    fn mnemonic(&self) -> String {
        let body = match self.kind {
            GateKind::X { target } => format!("X {target}"),
            GateKind::Cx { control, target } => format!("CX {} {target}", fmt_ctl(control)),
            GateKind::Ccx { c1, c2, target } => {
                format!("CCX {} {} {target}", fmt_ctl(c1), fmt_ctl(c2))
            }
            GateKind::Z { wire } => format!("Z {}", fmt_ctl(wire)),
            GateKind::Cz { a, b } => format!("CZ {} {}", fmt_ctl(a), fmt_ctl(b)),
            GateKind::Ccz { a, b, c } => {
                format!("CCZ {} {} {}", fmt_ctl(a), fmt_ctl(b), fmt_ctl(c))
            }
            GateKind::ClassicalX { enabled, target } => {
                format!("CLX {} {target}", u8::from(enabled))
            }
        };
        if self.uncompute {
            format!("~{body}")
        } else {
            body
        }
    }
}

fn fmt_ctl(c: Ctl) -> String {
    if c.closed {
        c.wire.to_string()
    } else {
        format!("!{}", c.wire)
    }
}

/// Deterministic basis-state simulator state: one bit per wire plus a ±1
/// phase accumulated from the Z-type flags.
#[derive(Debug, Clone)]
pub struct SimState {
    pub bits: Vec<bool>,
    pub phase: i8,
}

impl SimState {
    pub fn zeros(n: usize) -> Self {
        SimState {
            bits: vec![false; n],
            phase: 1,
        }
    }

    fn matches(&self, c: Ctl) -> bool {
        self.bits[c.wire] == c.closed
    }

    pub fn apply(&mut self, gate: &Gate) {
        match gate.kind {
            GateKind::X { target } => self.bits[target] = !self.bits[target],
            GateKind::ClassicalX { enabled, target } => {
                if enabled {
                    self.bits[target] = !self.bits[target];
                }
            }
            GateKind::Cx { control, target } => {
                if self.matches(control) {
                    self.bits[target] = !self.bits[target];
                }
            }
            GateKind::Ccx { c1, c2, target } => {
                if self.matches(c1) && self.matches(c2) {
                    self.bits[target] = !self.bits[target];
                }
            }
            GateKind::Z { wire } => {
                if self.matches(wire) {
                    self.phase = -self.phase;
                }
            }
            GateKind::Cz { a, b } => {
                if self.matches(a) && self.matches(b) {
                    self.phase = -self.phase;
                }
            }
            GateKind::Ccz { a, b, c } => {
                if self.matches(a) && self.matches(b) && self.matches(c) {
                    self.phase = -self.phase;
                }
            }
        }
    }
}

/// Output of a simulation run: decoded register values and the global phase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub values: BTreeMap<String, i128>,
    pub phase: i8,
}

/// An ordered gate list over named registers with a declared cost.
#[derive(Debug, Clone)]
pub struct Circuit {
    pub registers: Vec<Register>,
    pub gates: Vec<Gate>,
    pub wire_count: usize,
    pub declared_cost: CostRecord,
}

impl Circuit {
    pub fn register(&self, label: &str) -> Result<&Register> {
        self.registers
            .iter()
            .find(|r| r.label == label)
            .ok_or_else(|| Error::usage(format!("no register named {label:?}")))
    }

    /// Costed Toffoli count: CCX/CCZ gates not tagged as uncomputation.
    pub fn measured_toffolis(&self) -> u64 {
        self.gates
            .iter()
            .filter(|g| g.is_toffoli() && !g.uncompute)
            .count() as u64
    }

    /// Reversed gate order. Every supported gate is self-inverse.
    pub fn inverse(&self) -> Circuit {
        let mut inv = self.clone();
        inv.gates.reverse();
        inv
    }

    /// Simulate on a basis-state input given by register label.
    ///
    /// Unassigned registers start at zero. Internal wires always start at
    /// zero.
    pub fn run(&self, inputs: &[(&str, i128)]) -> Result<RunOutput> {
        let mut state = SimState::zeros(self.wire_count);
        for (label, value) in inputs {
            let reg = self.register(label)?;
            let bits = reg.encode(*value)?;
            for (i, w) in reg.wires.iter().enumerate() {
                state.bits[*w] = (bits >> i) & 1 == 1;
            }
        }
        self.run_from(&mut state)?;
        let mut values = BTreeMap::new();
        for reg in &self.registers {
            let mut bits = 0u128;
            for (i, w) in reg.wires.iter().enumerate() {
                if state.bits[*w] {
                    bits |= 1 << i;
                }
            }
            values.insert(reg.label.clone(), reg.decode(bits));
        }
        Ok(RunOutput {
            values,
            phase: state.phase,
        })
    }

    /// Apply the gate list to an existing state.
    pub fn run_from(&self, state: &mut SimState) -> Result<()> {
        if state.bits.len() != self.wire_count {
            return Err(Error::usage("state width does not match the circuit"));
        }
        for gate in &self.gates {
            state.apply(gate);
        }
        Ok(())
    }

    /// Line-oriented text dump, one gate per line; open controls carry a `!`
    /// prefix and measurement-uncompute gates a `~` prefix on the mnemonic.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for g in &self.gates {
            let _ = writeln!(out, "{}", g.mnemonic());
        }
        out
    }
}

/// Assert that no gate touches the same wire twice; used by the builders.
pub(crate) fn check_gate(gate: &Gate) -> Result<()> {
    let wires = gate.wires();
    for (i, w) in wires.iter().enumerate() {
        if wires[i + 1..].contains(w) {
            return Err(Error::internal(format!(
                "gate touches wire {w} twice: {gate:?}"
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn register_codecs() {
        let r = Register {
            label: "a".into(),
            wires: vec![0, 1, 2, 3],
            encoding: Encoding::TwosComplement,
        };
        for v in -8..=7 {
            assert_eq!(r.decode(r.encode(v).unwrap()), v);
        }
        assert!(r.encode(8).is_err());
        assert!(r.encode(-9).is_err());
        let u = Register {
            label: "b".into(),
            wires: vec![0, 1, 2],
            encoding: Encoding::Unsigned,
        };
        for v in 0..8 {
            assert_eq!(u.decode(u.encode(v).unwrap()), v);
        }
        assert!(u.encode(-1).is_err());
    }

    #[test]
    fn phase_tracking() {
        let mut s = SimState::zeros(2);
        s.bits[0] = true;
        s.apply(&Gate {
            kind: GateKind::Z { wire: Ctl::on(0) },
            uncompute: false,
        });
        assert_eq!(s.phase, -1);
        s.apply(&Gate {
            kind: GateKind::Cz {
                a: Ctl::on(0),
                b: Ctl::off(1),
            },
            uncompute: false,
        });
        assert_eq!(s.phase, 1);
        s.apply(&Gate {
            kind: GateKind::Cz {
                a: Ctl::on(0),
                b: Ctl::on(1),
            },
            uncompute: false,
        });
        assert_eq!(s.phase, 1);
    }

    #[test]
    fn dump_format() {
        let c = Circuit {
            registers: vec![],
            gates: vec![
                Gate {
                    kind: GateKind::Ccx {
                        c1: Ctl::off(3),
                        c2: Ctl::on(5),
                        target: 9,
                    },
                    uncompute: false,
                },
                Gate {
                    kind: GateKind::Ccx {
                        c1: Ctl::on(1),
                        c2: Ctl::on(2),
                        target: 4,
                    },
                    uncompute: true,
                },
                Gate {
                    kind: GateKind::ClassicalX {
                        enabled: true,
                        target: 0,
                    },
                    uncompute: false,
                },
            ],
            wire_count: 10,
            declared_cost: CostRecord::ZERO,
        };
        assert_eq!(c.dump(), "CCX !3 5 9\n~CCX 1 2 4\nCLX 1 0\n");
        assert_eq!(c.measured_toffolis(), 1);
    }

    #[test]
    fn duplicate_wire_rejected() {
        let g = Gate {
            kind: GateKind::Ccx {
                c1: Ctl::on(1),
                c2: Ctl::on(1),
                target: 2,
            },
            uncompute: false,
        };
        assert!(check_gate(&g).is_err());
    }
}
