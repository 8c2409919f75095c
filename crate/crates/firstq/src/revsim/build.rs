//! Gate-level builders for the arithmetic directives.
//!
//! Additions use the temporary-AND convention: one costed Toffoli per carry,
//! with carries uncomputed by measurement (modelled here as mirrored gates
//! tagged free). Subtractions go through complement-add-complement, and
//! classical constants enter as carry-ins or sparse addend bits, never as
//! loaded registers.

use super::circuit::{check_gate, Circuit, Ctl, Encoding, Gate, GateKind, Register};
use crate::cost::CostRecord;
use crate::error::Error;
use crate::Result;

/// One addend bit position: a wire or nothing.
#[derive(Debug, Clone, Copy)]
enum AddendBit {
    Wire(usize),
    Zero,
}

/// Carry state threaded through the ripple chain.
#[derive(Debug, Clone, Copy)]
enum Carry {
    Zero,
    One,
    Wire(usize),
}

struct Builder {
    registers: Vec<Register>,
    gates: Vec<Gate>,
    wires: usize,
    temp_wires: usize,
}

impl Builder {
    fn new() -> Self {
        Builder {
            registers: Vec::new(),
            gates: Vec::new(),
            wires: 0,
            temp_wires: 0,
        }
    }

    fn named(&mut self, label: &str, width: u32, encoding: Encoding) -> Vec<usize> {
        let wires: Vec<usize> = (self.wires..self.wires + width as usize).collect();
        self.wires += width as usize;
        self.registers.push(Register {
            label: label.to_string(),
            wires: wires.clone(),
            encoding,
        });
        wires
    }

    /// Alias an existing wire range under a new label and encoding.
    fn alias(&mut self, label: &str, wires: &[usize], encoding: Encoding) {
        self.registers.push(Register {
            label: label.to_string(),
            wires: wires.to_vec(),
            encoding,
        });
    }

    fn temp(&mut self) -> usize {
        let w = self.wires;
        self.wires += 1;
        self.temp_wires += 1;
        w
    }

    fn push(&mut self, kind: GateKind, uncompute: bool) {
        let gate = Gate { kind, uncompute };
        debug_assert!(check_gate(&gate).is_ok(), "{gate:?}");
        self.gates.push(gate);
    }

    fn x(&mut self, t: usize) {
        self.push(GateKind::X { target: t }, false);
    }

    fn cx(&mut self, c: Ctl, t: usize) {
        self.push(
            GateKind::Cx {
                control: c,
                target: t,
            },
            false,
        );
    }

    fn ccx(&mut self, c1: Ctl, c2: Ctl, t: usize, uncompute: bool) {
        self.push(GateKind::Ccx { c1, c2, target: t }, uncompute);
    }

    fn cz(&mut self, a: Ctl, b: Ctl) {
        self.push(GateKind::Cz { a, b }, false);
    }

    /// In-place target += addend + cin, little-endian, modulo 2^len(target);
    /// `cout`, when given, must be a zeroed wire and receives the final carry.
    ///
    /// Temporary carries are uncomputed before returning. Costed Toffolis:
    /// one per carry that needs an AND; pure copies (a single live input) are
    /// Clifford.
    fn ripple_add(
        &mut self,
        addend: &[AddendBit],
        target: &[usize],
        cin: Carry,
        cout: Option<usize>,
    ) {
        let k = target.len();
        assert!(addend.len() <= k, "addend wider than target");
        let bit = |j: usize| addend.get(j).copied().unwrap_or(AddendBit::Zero);

        // Forward pass: compute carries c_1..c_{k-1} (and c_k into cout).
        let mut carries: Vec<Carry> = vec![cin];
        let mut temp_slots: Vec<Option<usize>> = vec![None];
        for j in 0..k {
            let produce_cout = j == k - 1 && cout.is_some();
            if j == k - 1 && cout.is_none() {
                break;
            }
            let c = carries[j];
            let t = target[j];
            let next = match (bit(j), c) {
                (AddendBit::Zero, Carry::Zero) => (Carry::Zero, None),
                (AddendBit::Zero, Carry::One) => {
                    // Carry equals the target bit: plain copy.
                    let dst = if produce_cout {
                        cout.unwrap()
                    } else {
                        self.temp()
                    };
                    self.cx(Ctl::on(t), dst);
                    (Carry::Wire(dst), Some(dst))
                }
                (AddendBit::Zero, Carry::Wire(w)) => {
                    let dst = if produce_cout {
                        cout.unwrap()
                    } else {
                        self.temp()
                    };
                    self.ccx(Ctl::on(t), Ctl::on(w), dst, false);
                    (Carry::Wire(dst), Some(dst))
                }
                (AddendBit::Wire(v), Carry::Zero) => {
                    let dst = if produce_cout {
                        cout.unwrap()
                    } else {
                        self.temp()
                    };
                    self.ccx(Ctl::on(v), Ctl::on(t), dst, false);
                    (Carry::Wire(dst), Some(dst))
                }
                (AddendBit::Wire(v), Carry::One) => {
                    let dst = if produce_cout {
                        cout.unwrap()
                    } else {
                        self.temp()
                    };
                    self.ccx(Ctl::off(v), Ctl::off(t), dst, false);
                    self.x(dst);
                    (Carry::Wire(dst), Some(dst))
                }
                (AddendBit::Wire(v), Carry::Wire(w)) => {
                    // Conjugated majority: one Toffoli, inputs restored.
                    let dst = if produce_cout {
                        cout.unwrap()
                    } else {
                        self.temp()
                    };
                    self.cx(Ctl::on(w), v);
                    self.cx(Ctl::on(w), t);
                    self.ccx(Ctl::on(v), Ctl::on(t), dst, false);
                    self.cx(Ctl::on(w), dst);
                    self.cx(Ctl::on(w), v);
                    self.cx(Ctl::on(w), t);
                    (Carry::Wire(dst), Some(dst))
                }
            };
            carries.push(next.0);
            temp_slots.push(if produce_cout { None } else { next.1 });
        }

        // Sum pass.
        for (j, &t) in target.iter().enumerate() {
            if let AddendBit::Wire(v) = bit(j) {
                self.cx(Ctl::on(v), t);
            }
            match carries.get(j) {
                Some(Carry::Wire(w)) => self.cx(Ctl::on(*w), t),
                Some(Carry::One) => self.x(t),
                _ => {}
            }
        }

        // Uncompute temporary carries from the summed state, high to low.
        for j in (0..k).rev() {
            let Some(Some(dst)) = temp_slots.get(j + 1) else {
                continue;
            };
            let dst = *dst;
            let t = target[j];
            match (bit(j), carries[j]) {
                (AddendBit::Zero, Carry::One) => {
                    // c = original t = t' xor 1.
                    self.push(
                        GateKind::Cx {
                            control: Ctl::off(t),
                            target: dst,
                        },
                        true,
                    );
                }
                (AddendBit::Zero, Carry::Wire(w)) => {
                    self.cx(Ctl::on(w), t);
                    self.ccx(Ctl::on(t), Ctl::on(w), dst, true);
                    self.cx(Ctl::on(w), t);
                }
                (AddendBit::Wire(v), Carry::Zero) => {
                    self.cx(Ctl::on(v), t);
                    self.ccx(Ctl::on(v), Ctl::on(t), dst, true);
                    self.cx(Ctl::on(v), t);
                }
                (AddendBit::Wire(v), Carry::One) => {
                    self.cx(Ctl::on(v), t);
                    self.x(t);
                    self.x(dst);
                    self.ccx(Ctl::off(t), Ctl::off(v), dst, true);
                    self.x(t);
                    self.cx(Ctl::on(v), t);
                }
                (AddendBit::Wire(v), Carry::Wire(w)) => {
                    self.cx(Ctl::on(v), t);
                    self.cx(Ctl::on(w), t);
                    self.cx(Ctl::on(w), v);
                    self.cx(Ctl::on(w), t);
                    self.ccx(Ctl::on(v), Ctl::on(t), dst, true);
                    self.cx(Ctl::on(w), dst);
                    self.cx(Ctl::on(w), v);
                    self.cx(Ctl::on(w), t);
                    self.cx(Ctl::on(w), t);
                    self.cx(Ctl::on(v), t);
                }
                (AddendBit::Zero, Carry::Zero) => unreachable!(),
            }
        }
    }

    /// Absolute value over `bits` (two's complement, little-endian), sign
    /// copied to `sign`.
    fn emit_abs(&mut self, bits: &[usize], sign: usize) {
        let n = bits.len();
        let top = bits[n - 1];
        self.cx(Ctl::on(top), sign);
        for &b in bits {
            self.cx(Ctl::on(sign), b);
        }
        let (low, high) = bits.split_at(n - 1);
        self.ripple_add(&[], low, Carry::Wire(sign), Some(high[0]));
    }

    /// In-place a := a − b over two's-complement registers of equal width,
    /// with `ovf` extending the result to width+1 bits.
    fn emit_sub(&mut self, a: &[usize], b: &[usize], ovf: usize) {
        let n = a.len();
        self.cx(Ctl::on(a[n - 1]), ovf);
        for &w in b {
            self.x(w);
        }
        let mut addend: Vec<AddendBit> = b.iter().map(|w| AddendBit::Wire(*w)).collect();
        addend.push(AddendBit::Wire(b[n - 1])); // sign extension of the complement
        let mut target = a.to_vec();
        target.push(ovf);
        self.ripple_add(&addend, &target, Carry::One, None);
        for &w in b {
            self.x(w);
        }
    }

    /// Unsigned product: u (n_a+n_b+1 zeroed wires) receives 2ab; the product
    /// is read from u[1..].
    fn emit_mult(&mut self, a: &[usize], b: &[usize], u: &[usize]) {
        let n_a = a.len();
        let n_b = b.len();
        assert_eq!(u.len(), n_a + n_b + 1);

        let not_ak = self.temp();
        for k in 0..n_a {
            self.x(not_ak);
            self.cx(Ctl::on(a[k]), not_ak);
            // Conditionally complemented addend: adds b when a_k, else 2^nb − b.
            if k == 0 {
                for j in 0..n_b {
                    self.cx(Ctl::on(b[j]), u[j]);
                    self.cx(Ctl::on(not_ak), u[j]);
                }
                self.ripple_add(&[], &u[0..n_b], Carry::Wire(not_ak), Some(u[n_b]));
            } else {
                for &w in b {
                    self.cx(Ctl::on(not_ak), w);
                }
                let addend: Vec<AddendBit> = b.iter().map(|w| AddendBit::Wire(*w)).collect();
                self.ripple_add(
                    &addend,
                    &u[k..k + n_b],
                    Carry::Wire(not_ak),
                    Some(u[k + n_b]),
                );
                for &w in b {
                    self.cx(Ctl::on(not_ak), w);
                }
            }
            self.cx(Ctl::on(a[k]), not_ak);
            self.x(not_ak);
        }

        // +2^{n_a}·b
        let addend: Vec<AddendBit> = b.iter().map(|w| AddendBit::Wire(*w)).collect();
        self.ripple_add(&addend, &u[n_a..n_a + n_b], Carry::Zero, Some(u[n_a + n_b]));

        // ±2^{n_a+n_b} modulo the register.
        self.x(u[n_a + n_b]);

        // +(2^{n_b}(a+1) − b) as one concatenated addend [~b | a] with carry-in 1.
        for &w in b {
            self.x(w);
        }
        let mut addend: Vec<AddendBit> = b.iter().map(|w| AddendBit::Wire(*w)).collect();
        addend.extend(a.iter().map(|w| AddendBit::Wire(*w)));
        self.ripple_add(&addend, u, Carry::One, None);
        for &w in b {
            self.x(w);
        }
    }

    /// a := a − 2^k over an n-wire two's-complement register.
    fn emit_sub_pow2(&mut self, a: &[usize], k: usize) {
        for &w in &a[k..] {
            self.x(w);
        }
        self.ripple_add(&[], &a[k..], Carry::One, None);
        for &w in &a[k..] {
            self.x(w);
        }
    }

    /// Equality flag over two equal-width registers.
    fn emit_is_eq(&mut self, a: &[usize], b: &[usize], flag: usize) {
        let n = a.len();
        for (&x, &y) in a.iter().zip(b) {
            self.cx(Ctl::on(x), y);
        }
        if n == 1 {
            self.cx(Ctl::off(b[0]), flag);
        } else {
            let mut chain: Vec<usize> = Vec::new();
            let mut prev = Ctl::off(b[0]);
            for (j, &bit) in b.iter().enumerate().skip(1) {
                let dst = if j == n - 1 { flag } else { self.temp() };
                self.ccx(prev, Ctl::off(bit), dst, false);
                if j != n - 1 {
                    chain.push(dst);
                }
                prev = Ctl::on(dst);
            }
            // Unwind the AND chain.
            for j in (1..n - 1).rev() {
                let dst = chain[j - 1];
                let prev = if j == 1 {
                    Ctl::off(b[0])
                } else {
                    Ctl::on(chain[j - 2])
                };
                self.ccx(prev, Ctl::off(b[j]), dst, true);
            }
        }
        for (&x, &y) in a.iter().zip(b) {
            self.cx(Ctl::on(x), y);
        }
    }

    fn finish(self, declared_cost: CostRecord) -> Circuit {
        Circuit {
            registers: self.registers,
            gates: self.gates,
            wire_count: self.wires,
            declared_cost,
        }
    }

    fn measured(&self) -> u64 {
        self.gates
            .iter()
            .filter(|g| {
                matches!(g.kind, GateKind::Ccx { .. } | GateKind::Ccz { .. }) && !g.uncompute
            })
            .count() as u64
    }
}

/// |a⟩|0⟩ → ||a|⟩|sign(a)⟩ on an n-bit two's-complement register. The most
/// negative input overflows into the top result bit.
pub fn build_abs(n: u32) -> Result<Circuit> {
    if n < 2 {
        return Err(Error::usage("abs needs width >= 2"));
    }
    let mut b = Builder::new();
    let a = b.named("a", n, Encoding::TwosComplement);
    let sign = b.named("sign", 1, Encoding::Unsigned)[0];
    b.alias("result", &a, Encoding::Unsigned);
    b.emit_abs(&a, sign);
    let toffolis = b.measured();
    let temp = b.temp_wires as u64;
    Ok(b.finish(CostRecord::new(toffolis, 0, 1, temp)))
}

/// |a⟩|b⟩|0⟩ → ||a−b|⟩|b⟩|sign(a−b)⟩; the difference register is n unsigned
/// bits.
pub fn build_abs_diff(n: u32) -> Result<Circuit> {
    if n < 2 {
        return Err(Error::usage("abs-diff needs width >= 2"));
    }
    let mut b = Builder::new();
    let a = b.named("a", n, Encoding::TwosComplement);
    let bb = b.named("b", n, Encoding::TwosComplement);
    let sign = b.named("sign", 1, Encoding::Unsigned)[0];
    b.alias("result", &a, Encoding::Unsigned);
    let ovf = b.temp();
    b.emit_sub(&a, &bb, ovf);
    let mut wide = a.clone();
    wide.push(ovf);
    b.emit_abs(&wide, sign);
    let toffolis = b.measured();
    let temp = b.temp_wires as u64;
    Ok(b.finish(CostRecord::new(toffolis, 0, 1, temp)))
}

/// |a⟩|b⟩|0⟩ → |a⟩|b⟩|ab⟩ for unsigned inputs of widths n_a ≤ n_b; the
/// product occupies n_a+n_b bits.
pub fn build_mult(n_a: u32, n_b: u32) -> Result<Circuit> {
    if n_a < 2 || n_a > n_b {
        return Err(Error::usage("mult needs 2 <= n_a <= n_b"));
    }
    let mut b = Builder::new();
    let a = b.named("a", n_a, Encoding::Unsigned);
    let bb = b.named("b", n_b, Encoding::Unsigned);
    let u = b.named("work", n_a + n_b + 1, Encoding::Unsigned);
    b.alias("product", &u[1..], Encoding::Unsigned);
    b.emit_mult(&a, &bb, &u);
    let toffolis = b.measured();
    let temp = b.temp_wires as u64 + 1; // the bottom work wire returns to zero
    Ok(b.finish(CostRecord::new(toffolis, 0, 0, temp)))
}

/// |a⟩|b⟩|0⟩ → |a⟩|b⟩|a=b⟩ over two n-bit registers.
pub fn build_is_eq(n: u32) -> Result<Circuit> {
    if n < 1 {
        return Err(Error::usage("equality check needs width >= 1"));
    }
    let mut b = Builder::new();
    let a = b.named("a", n, Encoding::Unsigned);
    let bb = b.named("b", n, Encoding::Unsigned);
    let flag = b.named("flag", 1, Encoding::Unsigned)[0];
    b.emit_is_eq(&a, &bb, flag);
    let toffolis = b.measured();
    let temp = b.temp_wires as u64;
    Ok(b.finish(CostRecord::new(toffolis, 0, 1, temp)))
}

/// |a⟩ → |a−2^k⟩ in two's complement; the sign bit doubles as the comparator
/// output.
pub fn build_sub_pow2(n: u32, k: u32) -> Result<Circuit> {
    if k >= n {
        return Err(Error::usage("power-of-two subtraction needs k < n"));
    }
    let mut b = Builder::new();
    let a = b.named("a", n, Encoding::TwosComplement);
    b.emit_sub_pow2(&a, k as usize);
    let toffolis = b.measured();
    let temp = b.temp_wires as u64;
    Ok(b.finish(CostRecord::new(toffolis, 0, 0, temp)))
}

/// |β⟩|a⟩ → |β⟩|a − 2^{2n_M + β·n_γ}⟩ over a q-bit two's-complement
/// register: the subtracted constant keeps Hamming weight one while its bit
/// position moves under the control.
pub fn build_csub(q: u32, n_m: u32, n_gamma: u32) -> Result<Circuit> {
    let p_lo = 2 * n_m;
    let p_hi = 2 * n_m + n_gamma;
    if p_hi >= q {
        return Err(Error::usage(
            "constant position 2n_M + n_gamma must stay inside the register",
        ));
    }
    if n_gamma == 0 {
        return Err(Error::usage("control shift n_gamma must be positive"));
    }
    let mut b = Builder::new();
    let beta = b.named("beta", 1, Encoding::Unsigned)[0];
    let a = b.named("a", q, Encoding::TwosComplement);
    let e_lo = b.temp();
    let e_hi = b.temp();
    b.x(e_lo);
    b.cx(Ctl::on(beta), e_lo);
    b.cx(Ctl::on(beta), e_hi);
    for &w in &a {
        b.x(w);
    }
    let mut addend = vec![AddendBit::Zero; q as usize];
    addend[p_lo as usize] = AddendBit::Wire(e_lo);
    addend[p_hi as usize] = AddendBit::Wire(e_hi);
    b.ripple_add(&addend, &a, Carry::Zero, None);
    for &w in &a {
        b.x(w);
    }
    b.cx(Ctl::on(beta), e_hi);
    b.cx(Ctl::on(beta), e_lo);
    b.x(e_lo);
    let toffolis = b.measured();
    let temp = b.temp_wires as u64;
    Ok(b.finish(CostRecord::new(toffolis, 0, 0, temp)))
}

/// The Coulomb flagging arithmetic for one particle pair on basis inputs:
/// computes the squared distance, squares the index register, multiplies,
/// compares against the squared cutoff, applies the sign flip, and mirrors
/// the arithmetic.
///
/// On input (m, q1, q2) the run phase equals the alternating-sign function of
/// x = ‖q1−q2‖² at index m.
pub fn build_uv_arithmetic(n_g: u32, n_m: u32) -> Result<Circuit> {
    if n_g < 2 {
        return Err(Error::usage("flagging arithmetic needs n_g >= 2"));
    }
    if n_m <= n_g + 1 {
        return Err(Error::usage("flagging arithmetic requires n_M > n_g + 1"));
    }
    let mut b = Builder::new();
    let m = b.named("m", n_m, Encoding::Unsigned);
    let axes = ["x", "y", "z"];
    let mut q1 = Vec::new();
    let mut q2 = Vec::new();
    for ax in axes {
        q1.push(b.named(&format!("q1{ax}"), n_g, Encoding::TwosComplement));
        q2.push(b.named(&format!("q2{ax}"), n_g, Encoding::TwosComplement));
    }

    let start = b.gates.len();

    // Per-axis |q1 − q2| into the q1 wires.
    let mut diff_regs = Vec::new();
    for w in 0..3 {
        let ovf = b.temp();
        let sign = b.temp();
        b.emit_sub(&q1[w], &q2[w], ovf);
        let mut wide = q1[w].clone();
        wide.push(ovf);
        b.emit_abs(&wide, sign);
        diff_regs.push(q1[w].clone());
    }

    // Squares via multiplication against a copy, accumulated into x.
    let acc_width = 2 * n_g + 2;
    let acc = b.named("sumsq", acc_width, Encoding::Unsigned);
    for d in diff_regs.iter() {
        let copy: Vec<usize> = (0..d.len()).map(|_| b.temp()).collect();
        for (s, t) in d.iter().zip(&copy) {
            b.cx(Ctl::on(*s), *t);
        }
        let u: Vec<usize> = (0..2 * d.len() + 1).map(|_| b.temp()).collect();
        b.emit_mult(d, &copy, &u);
        let addend: Vec<AddendBit> = u[1..].iter().map(|w| AddendBit::Wire(*w)).collect();
        b.ripple_add(&addend, &acc, Carry::Zero, None);
    }

    // m² via multiplication against a copy.
    let m_copy: Vec<usize> = (0..n_m as usize).map(|_| b.temp()).collect();
    for (s, t) in m.iter().zip(&m_copy) {
        b.cx(Ctl::on(*s), *t);
    }
    let m_sq_work: Vec<usize> = (0..2 * n_m as usize + 1).map(|_| b.temp()).collect();
    b.emit_mult(&m, &m_copy, &m_sq_work);
    let m_sq = &m_sq_work[1..];

    // m²·x, with the shorter factor first.
    let prod_width = acc_width as usize + 2 * n_m as usize;
    let prod_work: Vec<usize> = (0..prod_width + 1).map(|_| b.temp()).collect();
    b.emit_mult(&acc, m_sq, &prod_work);
    let prod = &prod_work[1..];

    // Compare against 2^{2n_M}: sign of prod − M² on a widened register.
    let top = b.temp();
    let mut cmp = prod.to_vec();
    cmp.push(top);
    b.emit_sub_pow2(&cmp, 2 * n_m as usize);

    // Phase: (−1)^{m_0} exactly when m²x ≥ M², i.e. no borrow.
    let mirror: Vec<Gate> = b.gates[start..].to_vec();
    b.cz(Ctl::off(top), Ctl::on(m[0]));
    for g in mirror.into_iter().rev() {
        b.gates.push(g);
    }

    let toffolis = b.measured();
    let temp = b.temp_wires as u64;
    Ok(b.finish(CostRecord::new(toffolis, 0, 0, temp)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn out(c: &Circuit, inputs: &[(&str, i128)], label: &str) -> i128 {
        *c.run(inputs).unwrap().values.get(label).unwrap()
    }

    #[test]
    fn abs_exhaustive_small() {
        for n in 2..=6u32 {
            let c = build_abs(n).unwrap();
            assert_eq!(c.measured_toffolis(), (n - 1) as u64);
            assert_eq!(c.measured_toffolis(), c.declared_cost.toffolis);
            let half = 1i128 << (n - 1);
            for a in -half..half {
                let run = c.run(&[("a", a)]).unwrap();
                assert_eq!(run.values["result"], a.abs(), "n={n} a={a}");
                assert_eq!(run.values["sign"], i128::from(a < 0), "n={n} a={a}");
            }
        }
    }

    #[test]
    fn abs_overflow_case() {
        let c = build_abs(4).unwrap();
        // The most negative input is representable in the unsigned output.
        assert_eq!(out(&c, &[("a", -8)], "result"), 8);
        assert_eq!(out(&c, &[("a", -5)], "result"), 5);
        assert_eq!(out(&c, &[("a", -5)], "sign"), 1);
        assert_eq!(out(&c, &[("a", 3)], "result"), 3);
        assert_eq!(out(&c, &[("a", 3)], "sign"), 0);
    }

    #[test]
    fn abs_diff_exhaustive() {
        for n in 2..=5u32 {
            let c = build_abs_diff(n).unwrap();
            assert_eq!(c.measured_toffolis(), 2 * n as u64);
            let half = 1i128 << (n - 1);
            for a in -half..half {
                for bv in -half..half {
                    let run = c.run(&[("a", a), ("b", bv)]).unwrap();
                    assert_eq!(run.values["result"], (a - bv).abs(), "a={a} b={bv}");
                    assert_eq!(run.values["b"], bv);
                    assert_eq!(run.values["sign"], i128::from(a < bv));
                }
            }
        }
    }

    #[test]
    fn abs_diff_extreme_fits_unsigned() {
        let c = build_abs_diff(4).unwrap();
        assert_eq!(out(&c, &[("a", -8), ("b", 7)], "result"), 15);
        assert_eq!(out(&c, &[("a", 5), ("b", 5)], "result"), 0);
        assert_eq!(out(&c, &[("a", 5), ("b", 5)], "sign"), 0);
    }

    #[test]
    fn mult_exhaustive_4x4() {
        let c = build_mult(4, 4).unwrap();
        for a in 0..16 {
            for bv in 0..16 {
                let run = c.run(&[("a", a), ("b", bv)]).unwrap();
                assert_eq!(run.values["product"], a * bv, "a={a} b={bv}");
                assert_eq!(run.values["a"], a);
                assert_eq!(run.values["b"], bv);
            }
        }
    }

    #[test]
    fn mult_rectangular_and_identity() {
        let c = build_mult(3, 6).unwrap();
        for a in 0..8 {
            for bv in 0..64 {
                assert_eq!(out(&c, &[("a", a), ("b", bv)], "product"), a * bv);
            }
        }
        // Zero and one factors.
        let c = build_mult(4, 4).unwrap();
        for bv in 0..16 {
            assert_eq!(out(&c, &[("a", 0), ("b", bv)], "product"), 0);
            assert_eq!(out(&c, &[("a", 1), ("b", bv)], "product"), bv);
        }
    }

    #[test]
    fn mult_toffoli_count_is_three_under_formula() {
        for (na, nb) in [(2u32, 2u32), (3, 5), (4, 4), (6, 6), (8, 8), (5, 12)] {
            let c = build_mult(na, nb).unwrap();
            let formula = (na * nb + 2 * nb + na + 3) as u64;
            assert_eq!(c.measured_toffolis(), formula - 3, "na={na} nb={nb}");
        }
    }

    #[test]
    fn is_eq_behaviour() {
        for n in 1..=6u32 {
            let c = build_is_eq(n).unwrap();
            assert_eq!(c.measured_toffolis(), (n - 1) as u64);
            let lim = 1i128 << n;
            for a in 0..lim.min(16) {
                for bv in 0..lim.min(16) {
                    let run = c.run(&[("a", a), ("b", bv)]).unwrap();
                    assert_eq!(run.values["flag"], i128::from(a == bv));
                    assert_eq!(run.values["a"], a);
                    assert_eq!(run.values["b"], bv);
                }
            }
        }
    }

    #[test]
    fn sub_pow2_comparator_semantics() {
        let c = build_sub_pow2(6, 3).unwrap();
        // a = 2^k: result zero, sign clear. a = 2^k − 1: negative.
        assert_eq!(out(&c, &[("a", 8)], "a"), 0);
        assert_eq!(out(&c, &[("a", 7)], "a"), -1);
        for a in -32..32 {
            let run = c.run(&[("a", a)]).unwrap();
            let expect = a - 8;
            let wrapped = ((expect + 32).rem_euclid(64)) - 32;
            assert_eq!(run.values["a"], wrapped, "a={a}");
        }
    }

    #[test]
    fn csub_selects_the_shifted_constant() {
        // q = 10, n_m = 2, n_gamma = 3: subtract 16 or 128.
        let c = build_csub(10, 2, 3).unwrap();
        for a in [-400i128, -100, 0, 77, 200, 511] {
            for beta in 0..2 {
                let run = c.run(&[("a", a), ("beta", beta)]).unwrap();
                let sub = if beta == 1 { 1 << 7 } else { 1 << 4 };
                let expect = (((a - sub) + 512).rem_euclid(1024)) - 512;
                assert_eq!(run.values["a"], expect, "a={a} beta={beta}");
                assert_eq!(run.values["beta"], beta);
            }
        }
        assert!(build_csub(6, 2, 3).is_err());
    }

    #[test]
    fn wide_extremes() {
        // The most negative minus the most positive input saturates the
        // unsigned difference register.
        let c = build_abs_diff(16).unwrap();
        let run = c.run(&[("a", -32768), ("b", 32767)]).unwrap();
        assert_eq!(run.values["result"], 65535);
        assert_eq!(run.values["sign"], 1);
        let c = build_mult(16, 16).unwrap();
        let run = c.run(&[("a", 65535), ("b", 65535)]).unwrap();
        assert_eq!(run.values["product"], 65535 * 65535);
    }

    #[test]
    fn builders_mirror_to_identity() {
        let cases: Vec<Circuit> = vec![
            build_abs(5).unwrap(),
            build_abs_diff(4).unwrap(),
            build_mult(4, 5).unwrap(),
            build_is_eq(5).unwrap(),
            build_sub_pow2(6, 2).unwrap(),
            build_csub(10, 2, 3).unwrap(),
        ];
        for c in cases {
            let inv = c.inverse();
            let mut state = super::super::circuit::SimState::zeros(c.wire_count);
            // A fixed nontrivial pattern.
            for (i, bit) in state.bits.iter_mut().enumerate() {
                *bit = i % 3 == 0;
            }
            let before = state.bits.clone();
            c.run_from(&mut state).unwrap();
            inv.run_from(&mut state).unwrap();
            assert_eq!(state.bits, before);
        }
    }
}
