//! Logical circuits on N computational qubits (1-based operands).

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rotation::{check_angle, Axis};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LogicalGate {
    R {
        q: usize,
        theta: f64,
        axis: Axis,
    },
    X {
        q: usize,
    },
    Z {
        q: usize,
    },
    H {
        q: usize,
    },
    /// Control `a`, target `b`.
    Cnot {
        a: usize,
        b: usize,
    },
    Cz {
        a: usize,
        b: usize,
    },
    Swap {
        a: usize,
        b: usize,
    },
    /// Controls `a`, `b`; target `c`.
    Toffoli {
        a: usize,
        b: usize,
        c: usize,
    },
}

impl LogicalGate {
    pub fn name(&self) -> &'static str {
        match self {
            LogicalGate::R { .. } => "R",
            LogicalGate::X { .. } => "X",
            LogicalGate::Z { .. } => "Z",
            LogicalGate::H { .. } => "H",
            LogicalGate::Cnot { .. } => "CNOT",
            LogicalGate::Cz { .. } => "CZ",
            LogicalGate::Swap { .. } => "SWAP",
            LogicalGate::Toffoli { .. } => "TOFFOLI",
        }
    }

    pub fn operands(&self) -> Vec<usize> {
        match *self {
            LogicalGate::R { q, .. }
            | LogicalGate::X { q }
            | LogicalGate::Z { q }
            | LogicalGate::H { q } => vec![q],
            LogicalGate::Cnot { a, b } | LogicalGate::Cz { a, b } | LogicalGate::Swap { a, b } => {
                vec![a, b]
            }
            LogicalGate::Toffoli { a, b, c } => vec![a, b, c],
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let ops = self.operands();
        for (i, &q) in ops.iter().enumerate() {
            if q == 0 || q > n {
                return Err(Error::InvalidGate(format!(
                    "{self}: qubit {q} outside 1..={n}"
                )));
            }
            if ops[..i].contains(&q) {
                return Err(Error::InvalidGate(format!("{self}: repeated qubit {q}")));
            }
        }
        if let LogicalGate::R { theta, .. } = self {
            check_angle(*theta)?;
        }
        Ok(())
    }
}

impl fmt::Display for LogicalGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            LogicalGate::R { q, theta, axis } => {
                let [x, y, z] = axis.components();
                write!(
                    f,
                    "R q={q} theta={theta:.16e} axis={x:.16e},{y:.16e},{z:.16e}"
                )
            }
            LogicalGate::X { q } | LogicalGate::Z { q } | LogicalGate::H { q } => {
                write!(f, "{} q={q}", self.name())
            }
            LogicalGate::Cnot { a, b } | LogicalGate::Cz { a, b } | LogicalGate::Swap { a, b } => {
                write!(f, "{} a={a} b={b}", self.name())
            }
            LogicalGate::Toffoli { a, b, c } => write!(f, "TOFFOLI a={a} b={b} c={c}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogicalCircuit {
    n: usize,
    gates: Vec<LogicalGate>,
}

impl LogicalCircuit {
    pub fn new(n: usize, gates: Vec<LogicalGate>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGate(
                "circuit needs at least one qubit".into(),
            ));
        }
        for g in &gates {
            g.validate(n)?;
        }
        Ok(LogicalCircuit { n, gates })
    }

    pub fn empty(n: usize) -> Self {
        LogicalCircuit {
            n,
            gates: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[LogicalGate] {
        &self.gates
    }

    pub fn push(&mut self, gate: LogicalGate) -> Result<()> {
        gate.validate(self.n)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn to_text(&self) -> String {
        self.gates.iter().map(|g| format!("{g}\n")).collect()
    }

    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let mut gates = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let g = parse_gate(line).map_err(|message| Error::Parse {
                line: no + 1,
                message,
            })?;
            g.validate(n).map_err(|e| Error::Parse {
                line: no + 1,
                message: e.to_string(),
            })?;
            gates.push(g);
        }
        Ok(LogicalCircuit { n, gates })
    }

    /// Random circuit of `depth` gates drawn uniformly from all eight kinds.
    pub fn random<R: Rng + ?Sized>(n: usize, depth: usize, rng: &mut R) -> Self {
        assert!(n >= 3, "random circuits need three qubits for TOFFOLI");
        let pick = |rng: &mut R, k: usize| -> Vec<usize> {
            let mut v: Vec<usize> = (1..=n).collect();
            for i in 0..k {
                let j = rng.random_range(i..n);
                v.swap(i, j);
            }
            v.truncate(k);
            v
        };
        let mut gates = Vec::with_capacity(depth);
        for _ in 0..depth {
            let g = match rng.random_range(0..8) {
                0 => {
                    let q = pick(rng, 1)[0];
                    let theta = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
                    let (x, y, z): (f64, f64, f64) = (
                        rng.random_range(-1.0..1.0),
                        rng.random_range(-1.0..1.0),
                        rng.random_range(-1.0..1.0),
                    );
                    let axis = Axis::normalized(x, y, z).unwrap_or(Axis::Z);
                    LogicalGate::R { q, theta, axis }
                }
                1 => LogicalGate::X { q: pick(rng, 1)[0] },
                2 => LogicalGate::Z { q: pick(rng, 1)[0] },
                3 => LogicalGate::H { q: pick(rng, 1)[0] },
                4 => {
                    let v = pick(rng, 2);
                    LogicalGate::Cnot { a: v[0], b: v[1] }
                }
                5 => {
                    let v = pick(rng, 2);
                    LogicalGate::Cz { a: v[0], b: v[1] }
                }
                6 => {
                    let v = pick(rng, 2);
                    LogicalGate::Swap { a: v[0], b: v[1] }
                }
                _ => {
                    let v = pick(rng, 3);
                    LogicalGate::Toffoli {
                        a: v[0],
                        b: v[1],
                        c: v[2],
                    }
                }
            };
            gates.push(g);
        }
        LogicalCircuit { n, gates }
    }
}

fn parse_gate(line: &str) -> std::result::Result<LogicalGate, String> {
    let mut words = line.split_whitespace();
    let kind = words.next().ok_or("empty line")?;
    let mut q = None;
    let (mut a, mut b, mut c) = (None, None, None);
    let mut theta = None;
    let mut axis = None;
    for w in words {
        let (k, v) = w
            .split_once('=')
            .ok_or(format!("expected key=value, got `{w}`"))?;
        let int = || v.parse::<usize>().map_err(|e| format!("{k}: {e}"));
        match k {
            "q" => q = Some(int()?),
            "a" => a = Some(int()?),
            "b" => b = Some(int()?),
            "c" => c = Some(int()?),
            "theta" => theta = Some(v.parse::<f64>().map_err(|e| format!("theta: {e}"))?),
            "axis" => {
                let comps: Vec<f64> = v
                    .split(',')
                    .map(|x| x.trim().parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| format!("axis: {e}"))?;
                if comps.len() != 3 {
                    return Err("axis needs 3 components".into());
                }
                axis = Some(Axis::new(comps[0], comps[1], comps[2]).map_err(|e| e.to_string())?);
            }
            _ => return Err(format!("unknown key `{k}`")),
        }
    }
    let need = |x: Option<usize>, key: &str| x.ok_or(format!("{kind} needs {key}="));
    Ok(match kind {
        "R" => LogicalGate::R {
            q: need(q, "q")?,
            theta: theta.ok_or("R needs theta=")?,
            axis: axis.ok_or("R needs axis=")?,
        },
        "X" => LogicalGate::X { q: need(q, "q")? },
        "Z" => LogicalGate::Z { q: need(q, "q")? },
        "H" => LogicalGate::H { q: need(q, "q")? },
        "CNOT" => LogicalGate::Cnot {
            a: need(a, "a")?,
            b: need(b, "b")?,
        },
        "CZ" => LogicalGate::Cz {
            a: need(a, "a")?,
            b: need(b, "b")?,
        },
        "SWAP" => LogicalGate::Swap {
            a: need(a, "a")?,
            b: need(b, "b")?,
        },
        "TOFFOLI" => LogicalGate::Toffoli {
            a: need(a, "a")?,
            b: need(b, "b")?,
            c: need(c, "c")?,
        },
        other => return Err(format!("unknown gate `{other}`")),
    })
}
