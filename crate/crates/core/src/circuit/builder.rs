//! Gate-level construction of arithmetic over two's complement bit vectors.
//! Bit vectors are least significant bit first.

use alloc::vec::Vec;

use super::{Gate, Wire};

#[derive(Clone, Debug, Default)]
pub struct Builder {
    pub next: Wire,
    pub gates: Vec<Gate>,
}

impl Builder {
    pub fn new() -> Self {
        Builder::default()
    }

    /// A fresh wire not driven by any gate.
    pub fn fresh(&mut self) -> Wire {
        let w = self.next;
        self.next += 1;
        w
    }

    pub fn konst(&mut self, bit: bool) -> Wire {
        let out = self.fresh();
        self.gates.push(Gate::Const { bit, out });
        out
    }

    pub fn xor(&mut self, a: Wire, b: Wire) -> Wire {
        let out = self.fresh();
        self.gates.push(Gate::Xor { a, b, out });
        out
    }

    pub fn and(&mut self, a: Wire, b: Wire) -> Wire {
        let out = self.fresh();
        self.gates.push(Gate::And { a, b, out });
        out
    }

    pub fn not(&mut self, a: Wire) -> Wire {
        let out = self.fresh();
        self.gates.push(Gate::Not { a, out });
        out
    }

    pub fn or(&mut self, a: Wire, b: Wire) -> Wire {
        let x = self.xor(a, b);
        let y = self.and(a, b);
        self.xor(x, y)
    }

    /// `if c then t else e`
    pub fn mux(&mut self, c: Wire, t: Wire, e: Wire) -> Wire {
        let d = self.xor(t, e);
        let m = self.and(c, d);
        self.xor(e, m)
    }

    pub fn mux_vec(&mut self, c: Wire, t: &[Wire], e: &[Wire]) -> Vec<Wire> {
        t.iter().zip(e).map(|(&x, &y)| self.mux(c, x, y)).collect()
    }

    /// Constant `n` truncated to `w` bits.
    pub fn konst_int(&mut self, n: i64, w: u32) -> Vec<Wire> {
        (0..w).map(|i| self.konst((n >> i.min(63)) & 1 == 1)).collect()
    }

    pub fn all(&mut self, ws: &[Wire]) -> Wire {
        match ws.split_first() {
            None => self.konst(true),
            Some((&first, rest)) => rest.iter().fold(first, |acc, &w| self.and(acc, w)),
        }
    }

    pub fn any(&mut self, ws: &[Wire]) -> Wire {
        match ws.split_first() {
            None => self.konst(false),
            Some((&first, rest)) => rest.iter().fold(first, |acc, &w| self.or(acc, w)),
        }
    }

    /// Ripple-carry addition modulo `2^len`.
    pub fn add(&mut self, x: &[Wire], y: &[Wire]) -> Vec<Wire> {
        self.add_carry(x, y, None)
    }

    fn add_carry(&mut self, x: &[Wire], y: &[Wire], carry_in: Option<Wire>) -> Vec<Wire> {
        let mut out = Vec::with_capacity(x.len());
        let mut carry = carry_in;
        for (i, (&a, &b)) in x.iter().zip(y).enumerate() {
            let t = self.xor(a, b);
            let s = match carry {
                Some(c) => self.xor(t, c),
                None => t,
            };
            out.push(s);
            if i + 1 < x.len() {
                // carry' = (a & b) ^ (c & (a ^ b))
                let g = self.and(a, b);
                carry = Some(match carry {
                    Some(c) => {
                        let p = self.and(c, t);
                        self.xor(g, p)
                    }
                    None => g,
                });
            }
        }
        out
    }

    /// `x - y` modulo `2^len`.
    pub fn sub(&mut self, x: &[Wire], y: &[Wire]) -> Vec<Wire> {
        let ny: Vec<Wire> = y.iter().map(|&b| self.not(b)).collect();
        let one = self.konst(true);
        self.add_carry(x, &ny, Some(one))
    }

    pub fn eq(&mut self, x: &[Wire], y: &[Wire]) -> Wire {
        let same: Vec<Wire> = x
            .iter()
            .zip(y)
            .map(|(&a, &b)| {
                let d = self.xor(a, b);
                self.not(d)
            })
            .collect();
        self.all(&same)
    }

    /// Signed `x < y`: the sign of `x - y` computed one bit wider.
    pub fn lt(&mut self, x: &[Wire], y: &[Wire]) -> Wire {
        let mut xs = x.to_vec();
        let mut ys = y.to_vec();
        xs.push(*x.last().expect("non-empty"));
        ys.push(*y.last().expect("non-empty"));
        let d = self.sub(&xs, &ys);
        *d.last().unwrap()
    }

    /// Sign extension (or truncation) to `len` bits.
    pub fn resize(&mut self, x: &[Wire], len: usize) -> Vec<Wire> {
        let sign = *x.last().expect("non-empty");
        (0..len).map(|i| if i < x.len() { x[i] } else { sign }).collect()
    }
}
