//! Instance files and initial-state specifications.
//!
//! Graph files hold one edge per line, `u v [weight]`, with `#` starting a
//! comment. The vertex count is one more than the largest index. Hamiltonian
//! files are JSON objects `{"n": int, "terms": [{"qubits": [..], "coeff": x}]}`
//! whose terms are already Z strings.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{invalid, Error, Result};
use crate::pauli_model::{maxcut_hamiltonian, parse_bits, Edge, PauliHamiltonian, Spectrum};
use crate::state_prep::{uniform_state, warm_start, Preparer, QuantumState, WarmStartSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceKind {
    MaxCut,
    Hubo,
}

impl FromStr for InstanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "maxcut" => Ok(Self::MaxCut),
            "hubo" => Ok(Self::Hubo),
            other => Err(invalid(format!(
                "unknown instance type '{other}' (maxcut|hubo)"
            ))),
        }
    }
}

impl InstanceKind {
    /// Guess from the file extension: `.json` is a Hamiltonian file, anything
    /// else a graph.
    pub fn infer(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => Self::Hubo,
            _ => Self::MaxCut,
        }
    }
}

fn parse_error(source: &str, line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        source_name: source.to_string(),
        line,
        column,
        message: message.into(),
    }
}

/// Parses graph text. `source` names the input in diagnostics.
pub fn parse_graph(text: &str, source: &str) -> Result<(usize, Vec<Edge>)> {
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut fields = Vec::new();
        let mut offset = 0;
        for tok in content.split_whitespace() {
            let col = content[offset..].find(tok).unwrap() + offset;
            offset = col + tok.len();
            fields.push((col + 1, tok));
        }
        if fields.is_empty() {
            continue;
        }
        if fields.len() < 2 || fields.len() > 3 {
            return Err(parse_error(
                source,
                line_no,
                fields[0].0,
                format!("expected 'u v [weight]', found {} fields", fields.len()),
            ));
        }
        let vertex = |(col, tok): (usize, &str)| {
            tok.parse::<usize>()
                .map_err(|_| parse_error(source, line_no, col, format!("invalid vertex '{tok}'")))
        };
        let u = vertex(fields[0])?;
        let v = vertex(fields[1])?;
        if u == v {
            return Err(parse_error(
                source,
                line_no,
                fields[1].0,
                format!("self-loop on vertex {u}"),
            ));
        }
        let weight = match fields.get(2) {
            Some(&(col, tok)) => match tok.parse::<f64>() {
                Ok(w) if w.is_finite() => w,
                _ => {
                    return Err(parse_error(
                        source,
                        line_no,
                        col,
                        format!("invalid weight '{tok}'"),
                    ))
                }
            },
            None => 1.0,
        };
        edges.push(Edge::weighted(u, v, weight));
    }
    let n = edges.iter().map(|e| e.u.max(e.v) + 1).max().unwrap_or(0);
    Ok((n, edges))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct HuboFile {
    n: usize,
    terms: Vec<HuboTerm>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct HuboTerm {
    qubits: Vec<usize>,
    coeff: f64,
}

/// Parses Hamiltonian JSON. An empty qubit list contributes to the identity shift.
pub fn parse_hubo(text: &str, source: &str) -> Result<PauliHamiltonian> {
    let file: HuboFile = serde_json::from_str(text)
        .map_err(|e| parse_error(source, e.line(), e.column(), e.to_string()))?;
    let mut shift = 0.0;
    let mut terms = Vec::with_capacity(file.terms.len());
    for t in file.terms {
        if t.qubits.is_empty() {
            shift += t.coeff;
        } else {
            terms.push((t.qubits, t.coeff));
        }
    }
    PauliHamiltonian::from_qubit_terms(file.n, terms, shift)
}

/// Reads an instance file, inferring its kind from the extension when `kind` is `None`.
pub fn load_instance(path: &Path, kind: Option<InstanceKind>) -> Result<PauliHamiltonian> {
    let text = fs::read_to_string(path)?;
    let source = path.display().to_string();
    match kind.unwrap_or_else(|| InstanceKind::infer(path)) {
        InstanceKind::MaxCut => {
            let (n, edges) = parse_graph(&text, &source)?;
            maxcut_hamiltonian(n, &edges)
        }
        InstanceKind::Hubo => parse_hubo(&text, &source),
    }
}

/// Parses `re im` lines (blank lines and `#` comments skipped) into raw amplitudes.
pub fn parse_amplitudes(text: &str, source: &str) -> Result<Vec<Complex64>> {
    let mut amps = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        let col = content.find(fields[0]).unwrap() + 1;
        if fields.len() != 2 {
            return Err(parse_error(source, idx + 1, col, "expected 're im'"));
        }
        let part = |tok: &str| {
            tok.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| parse_error(source, idx + 1, col, format!("invalid number '{tok}'")))
        };
        amps.push(Complex64::new(part(fields[0])?, part(fields[1])?));
    }
    Ok(amps)
}

/// Choice of warm-start target bitstring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroundGuess {
    Bits(String),
    /// Smallest ground-state index found by enumeration.
    Auto,
}

/// An `--init` value: `uniform`, `warm:p=<bias>,gstar=<bits|auto>` or `file:<path>`.
#[derive(Debug, Clone, PartialEq)]
pub enum InitSpec {
    Uniform,
    Warm { bias: f64, gstar: GroundGuess },
    File(String),
}

impl FromStr for InitSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "uniform" {
            return Ok(Self::Uniform);
        }
        if let Some(path) = s.strip_prefix("file:") {
            if path.is_empty() {
                return Err(invalid("file: init needs a path"));
            }
            return Ok(Self::File(path.to_string()));
        }
        let Some(body) = s.strip_prefix("warm:") else {
            return Err(invalid(format!(
                "unknown init '{s}' (uniform | warm:p=<p>,gstar=<bits|auto> | file:<path>)"
            )));
        };
        let mut bias = None;
        let mut gstar = None;
        for part in body.split(',') {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| invalid(format!("expected key=value in '{part}'")))?;
            match key.trim() {
                "p" => {
                    let p: f64 = value
                        .trim()
                        .parse()
                        .map_err(|_| invalid(format!("invalid bias '{value}'")))?;
                    bias = Some(p);
                }
                "gstar" => {
                    let v = value.trim();
                    gstar = Some(if v == "auto" {
                        GroundGuess::Auto
                    } else {
                        GroundGuess::Bits(v.to_string())
                    });
                }
                other => return Err(invalid(format!("unknown warm-start key '{other}'"))),
            }
        }
        let bias = bias.ok_or_else(|| invalid("warm start needs p=<bias>"))?;
        if !(0.0..=1.0).contains(&bias) {
            return Err(invalid(format!("bias must lie in [0, 1], got {bias}")));
        }
        Ok(Self::Warm {
            bias,
            gstar: gstar.unwrap_or(GroundGuess::Auto),
        })
    }
}

impl InitSpec {
    /// Builds the state and a matching preparation unitary for `n` qubits.
    /// `spectrum` is required only for `gstar=auto`.
    pub fn resolve(
        &self,
        n: usize,
        spectrum: Option<&Spectrum>,
    ) -> Result<(QuantumState, Preparer)> {
        match self {
            Self::Uniform => Ok((uniform_state(n)?, Preparer::uniform(n))),
            Self::Warm { bias, gstar } => {
                let target = match gstar {
                    GroundGuess::Bits(bits) => parse_bits(bits, n)?,
                    GroundGuess::Auto => spectrum
                        .ok_or_else(|| invalid("gstar=auto needs the spectrum"))?
                        .first_ground(),
                };
                let spec = WarmStartSpec::new(target, *bias)?;
                Ok((warm_start(n, &spec)?, Preparer::warm_start(n, &spec)))
            }
            Self::File(path) => {
                let text = fs::read_to_string(path)?;
                let amps = parse_amplitudes(&text, path)?;
                if amps.len() != 1usize << n {
                    return Err(invalid(format!(
                        "{path} holds {} amplitudes, expected 2^{n} = {}",
                        amps.len(),
                        1usize << n
                    )));
                }
                let state = QuantumState::from_amplitudes(amps)?;
                let prep = Preparer::householder(&state);
                Ok((state, prep))
            }
        }
    }
}

/// The five-vertex benchmark graph: a triangle with a two-edge tail.
pub fn maxcut_five_vertex() -> PauliHamiltonian {
    let edges = [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4)].map(|(u, v)| Edge::new(u, v));
    maxcut_hamiltonian(5, &edges).expect("valid graph")
}

/// The eight-qubit parity Hamiltonian with two weakly coupled blocks.
pub fn parity_hubo_eight() -> PauliHamiltonian {
    let terms = [
        (vec![0, 1, 2], 2.0),
        (vec![1, 2, 3], 1.5),
        (vec![4, 5, 6], 2.0),
        (vec![5, 6, 7], 1.5),
        (vec![0, 4], 1.0),
        (vec![3, 7], 1.0),
        (vec![0, 3], 1.2),
        (vec![4, 7], 1.2),
    ];
    PauliHamiltonian::from_qubit_terms(8, terms, 0.0).expect("valid terms")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_parsing() {
        let text = "# triangle\n0 1\n  0 2 2.5 # heavy\n\n1 2\n";
        let (n, edges) = parse_graph(text, "g").unwrap();
        assert_eq!(n, 3);
        assert_eq!(edges.len(), 3);
        assert_eq!(edges[1].weight, 2.5);
    }

    #[test]
    fn graph_errors_carry_positions() {
        match parse_graph("0 1\n0  x\n", "g") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 4)),
            other => panic!("unexpected {other:?}"),
        }
        match parse_graph("0 1 2 3\n", "g") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 1)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_graph("3 3\n", "g").is_err());
        assert!(parse_graph("0 1 nan\n", "g").is_err());
    }

    #[test]
    fn empty_graph_is_zero_qubits() {
        let (n, edges) = parse_graph("# nothing\n", "g").unwrap();
        assert_eq!((n, edges.len()), (0, 0));
    }

    #[test]
    fn hubo_parsing() {
        let h = parse_hubo(
            r#"{"n": 3, "terms": [{"qubits": [0, 2], "coeff": -1.5}, {"qubits": [], "coeff": 0.25}]}"#,
            "h",
        )
        .unwrap();
        assert_eq!(h.n(), 3);
        assert_eq!(h.num_terms(), 1);
        assert_eq!(h.identity_shift(), 0.25);
        assert_eq!(h.l1_norm(), 1.5);
    }

    #[test]
    fn hubo_errors_carry_positions() {
        match parse_hubo(
            "{\"n\": 3,\n \"terms\": [ {\"qubits\": [0], \"coeff\": \"x\"} ]}",
            "h",
        ) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_hubo(r#"{"n": 2, "terms": [{"qubits": [2], "coeff": 1}]}"#, "h").is_err());
        assert!(parse_hubo(
            r#"{"n": 2, "terms": [{"qubits": [1, 1], "coeff": 1}]}"#,
            "h"
        )
        .is_err());
    }

    #[test]
    fn bundled_instances() {
        let mc = maxcut_five_vertex();
        assert_eq!(mc.l1_norm(), 5.0);
        let s = mc.spectrum().unwrap();
        assert_eq!(
            (s.e0(), s.gap(), s.ground_set().len()),
            (-3.0, Some(2.0), 6)
        );

        let hubo = parity_hubo_eight();
        assert!((hubo.l1_norm() - 11.4).abs() < 1e-12);
        let s = hubo.spectrum().unwrap();
        assert!((s.e0() + 6.6).abs() < 1e-12);
        assert!((s.gap().unwrap() - 1.2).abs() < 1e-9);
        assert_eq!(s.ground_set(), &[41, 47, 73, 79, 146, 148, 242, 244]);
    }

    #[test]
    fn bundled_files_match_builders() {
        let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../instances");
        let mc = load_instance(&root.join("maxcut5.txt"), None).unwrap();
        assert_eq!(mc, maxcut_five_vertex());
        let hubo = load_instance(&root.join("hubo8.json"), None).unwrap();
        assert_eq!(hubo, parity_hubo_eight());
    }

    #[test]
    fn init_spec_parsing() {
        assert_eq!("uniform".parse::<InitSpec>().unwrap(), InitSpec::Uniform);
        assert_eq!(
            "warm:p=0.85,gstar=auto".parse::<InitSpec>().unwrap(),
            InitSpec::Warm {
                bias: 0.85,
                gstar: GroundGuess::Auto
            }
        );
        assert_eq!(
            "warm:gstar=00101,p=0.6".parse::<InitSpec>().unwrap(),
            InitSpec::Warm {
                bias: 0.6,
                gstar: GroundGuess::Bits("00101".into())
            }
        );
        assert_eq!(
            "file:/tmp/a.txt".parse::<InitSpec>().unwrap(),
            InitSpec::File("/tmp/a.txt".into())
        );
        for bad in ["warm:p=1.5", "warm:gstar=auto", "warm:q=1", "nope", "file:"] {
            assert!(bad.parse::<InitSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn warm_auto_picks_smallest_ground_index() {
        let h = parity_hubo_eight();
        let s = h.spectrum().unwrap();
        let spec: InitSpec = "warm:p=0.85,gstar=auto".parse().unwrap();
        let (state, prep) = spec.resolve(8, Some(&s)).unwrap();
        let want = warm_start(8, &WarmStartSpec::new(41, 0.85).unwrap()).unwrap();
        assert!((state.fidelity(&want).unwrap() - 1.0).abs() < 1e-12);
        assert!((prep.prepared_state().fidelity(&state).unwrap() - 1.0).abs() < 1e-12);
        assert!(spec.resolve(8, None).is_err());
    }

    #[test]
    fn amplitude_file_parsing() {
        let amps = parse_amplitudes("1 0\n# c\n0 1\n", "f").unwrap();
        assert_eq!(
            amps,
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)]
        );
        match parse_amplitudes("1 0\n 0\n", "f") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 2)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn file_init_round_trip() {
        let dir = std::env::temp_dir().join(format!("finite-init-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("amps.txt");
        fs::write(&path, "0.6 0\n0 0.8\n0 0\n0 0\n").unwrap();
        let spec = InitSpec::File(path.display().to_string());
        let (state, prep) = spec.resolve(2, None).unwrap();
        assert!((state.amplitudes()[1].im - 0.8).abs() < 1e-15);
        assert!((prep.prepared_state().fidelity(&state).unwrap() - 1.0).abs() < 1e-12);
        assert!(spec.resolve(3, None).is_err());
        fs::remove_dir_all(&dir).unwrap();
    }
}
