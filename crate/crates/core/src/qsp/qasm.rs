//! OpenQASM 2.0 text for elementary circuits, and a reader for the same subset.
//!
//! The global phase has no QASM counterpart and travels as a `// global_phase` comment.

use std::fmt::Write as _;

use super::circuit::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};

pub const HEADER: &str = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";

/// Scientific notation with 17 significant digits, which round-trips every `f64`.
fn angle(a: f64) -> String {
    format!("{a:.16e}")
}

fn gate_line(g: &Gate) -> Result<String> {
    if g.is_cx() {
        return Ok(format!("cx q[{}],q[{}];", g.controls[0].qubit, g.target));
    }
    if !g.controls.is_empty() {
        return Err(Error::InvalidCircuit(format!(
            "`{g}` is not elementary; lower the circuit before export"
        )));
    }
    Ok(match g.kind {
        GateKind::PauliX => format!("x q[{}];", g.target),
        GateKind::RotY(a) => format!("ry({}) q[{}];", angle(a), g.target),
        GateKind::RotZ(a) => format!("rz({}) q[{}];", angle(a), g.target),
        GateKind::Phase(a) => format!("u1({}) q[{}];", angle(a), g.target),
    })
}

/// QASM program for an elementary circuit. `measure` appends a full
/// computational-basis readout into `c`.
pub fn to_qasm(circuit: &Circuit, measure: bool) -> Result<String> {
    let n = circuit.qubit_count();
    let mut out = String::from(HEADER);
    writeln!(out, "// global_phase {}", angle(circuit.global_phase())).unwrap();
    writeln!(out, "qreg q[{n}];").unwrap();
    if measure {
        writeln!(out, "creg c[{n}];").unwrap();
    }
    for g in circuit.gates() {
        out.push_str(&gate_line(g)?);
        out.push('\n');
    }
    if measure {
        for q in 0..n {
            writeln!(out, "measure q[{q}] -> c[{q}];").unwrap();
        }
    }
    Ok(out)
}

struct Expr<'a> {
    s: &'a [u8],
    pos: usize,
}

/// `+ - * /`, parentheses, unary minus, decimal literals and `pi`.
impl Expr<'_> {
    fn skip(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip();
        self.s.get(self.pos).copied()
    }

    fn sum(&mut self) -> std::result::Result<f64, String> {
        let mut v = self.product()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.product()?;
            v = if op == b'+' { v + rhs } else { v - rhs };
        }
        Ok(v)
    }

    fn product(&mut self) -> std::result::Result<f64, String> {
        let mut v = self.unary()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            v = if op == b'*' { v * rhs } else { v / rhs };
        }
        Ok(v)
    }

    fn unary(&mut self) -> std::result::Result<f64, String> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.sum()?;
                if self.peek() != Some(b')') {
                    return Err("unbalanced parenthesis".into());
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b'p') if self.s[self.pos..].starts_with(b"pi") => {
                self.pos += 2;
                Ok(std::f64::consts::PI)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let start = self.pos;
                while self.pos < self.s.len() {
                    let c = self.s[self.pos];
                    let exp_sign = (c == b'-' || c == b'+') && matches!(self.s[self.pos - 1], b'e' | b'E');
                    if c.is_ascii_digit() || c == b'.' || c == b'e' || c == b'E' || exp_sign {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                text.parse().map_err(|_| format!("bad number `{text}`"))
            }
            _ => Err("expected a number".into()),
        }
    }
}

fn parse_angle(text: &str) -> std::result::Result<f64, String> {
    let mut e = Expr {
        s: text.as_bytes(),
        pos: 0,
    };
    let v = e.sum()?;
    if e.peek().is_some() {
        return Err(format!("trailing input in `{text}`"));
    }
    Ok(v)
}

fn parse_qubit(arg: &str, n: usize) -> std::result::Result<usize, String> {
    let arg = arg.trim();
    let inner = arg
        .strip_prefix("q[")
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| format!("expected `q[i]`, found `{arg}`"))?;
    let q: usize = inner.parse().map_err(|_| format!("bad qubit index `{inner}`"))?;
    if q >= n {
        return Err(format!("qubit {q} outside register of {n}"));
    }
    Ok(q)
}

/// Reads the subset written by [`to_qasm`]: one `qreg q`, gates `x ry rz u1 cx`,
/// plus `creg`, `measure` and `barrier`, which are ignored.
pub fn parse_qasm(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    let mut phase = 0.0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |message: String| Error::Qasm {
            line: line_no,
            message,
        };
        let line = raw.trim();
        if let Some(comment) = line.strip_prefix("//") {
            if let Some(v) = comment.trim().strip_prefix("global_phase") {
                phase = parse_angle(v).map_err(err)?;
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let stmt = line
            .strip_suffix(';')
            .ok_or_else(|| err("missing `;`".into()))?
            .trim();
        if stmt.starts_with("OPENQASM") || stmt.starts_with("include") {
            continue;
        }
        if let Some(decl) = stmt.strip_prefix("qreg") {
            if circuit.is_some() {
                return Err(err("only one qreg is supported".into()));
            }
            let n = decl
                .trim()
                .strip_prefix("q[")
                .and_then(|s| s.strip_suffix(']'))
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| err(format!("bad register declaration `{stmt}`")))?;
            circuit = Some(Circuit::new(n));
            continue;
        }
        if stmt.starts_with("creg") || stmt.starts_with("measure") || stmt.starts_with("barrier") {
            continue;
        }
        let c = circuit
            .as_mut()
            .ok_or_else(|| err("gate before qreg declaration".into()))?;
        let n = c.qubit_count();
        let (head, args) = match stmt.rfind(')') {
            Some(close) => (&stmt[..=close], stmt[close + 1..].trim()),
            None => stmt
                .split_once(char::is_whitespace)
                .ok_or_else(|| err(format!("cannot parse `{stmt}`")))?,
        };
        let (name, param) = match head.split_once('(') {
            Some((name, rest)) => (name.trim(), Some(rest.strip_suffix(')').unwrap_or(rest))),
            None => (head.trim(), None),
        };
        let theta = || -> Result<f64> {
            let p = param.ok_or_else(|| err(format!("`{name}` needs an angle")))?;
            parse_angle(p).map_err(err)
        };
        let gate = match name {
            "x" => Gate::x(parse_qubit(args, n).map_err(err)?),
            "ry" => Gate::ry(theta()?, parse_qubit(args, n).map_err(err)?),
            "rz" => Gate::rz(theta()?, parse_qubit(args, n).map_err(err)?),
            "u1" | "p" => Gate::phase(theta()?, parse_qubit(args, n).map_err(err)?),
            "cx" | "CX" => {
                let (a, b) = args
                    .split_once(',')
                    .ok_or_else(|| err("cx needs two qubits".into()))?;
                Gate::cx(parse_qubit(a, n).map_err(err)?, parse_qubit(b, n).map_err(err)?)
            }
            other => return Err(err(format!("unsupported gate `{other}`"))),
        };
        c.push(gate).map_err(|e| err(e.to_string()))?;
    }
    let mut c = circuit.ok_or(Error::Qasm {
        line: text.lines().count(),
        message: "no qreg declaration".into(),
    })?;
    c.add_global_phase(phase);
    Ok(c)
}
