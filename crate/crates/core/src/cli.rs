//! Command-line front end. Results go to stdout as one JSON object per line,
//! a short human summary goes to stderr.
//!
//! Exit codes: 0 on success, 1 when a command fails, 2 on usage errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::circuit::{parse_circuit, Circuit};
use crate::error::{Error, ParseError};
use crate::linalg::{diag, C64};
use crate::local2::{simulate_2local, ProductState};
use crate::oracle::{parse_basis, Observable, OracleConfig, StateVector};
use crate::pauli::{parse_pauli_list, PauliOperator};
use crate::paulisim::{
    pauli_gates, simulate_commuting_pauli, simulate_noncommuting_pauli, EstimatorConfig, PauliItem, DEFAULT_MAX_EXTRAS,
};
use crate::stabilizer::{diagonalize_commuting_set, CliffordCircuit};
use crate::transformers::{
    alternate_hadamard_test, estimate_cd_clifford_overlap, estimate_cd_overlap, hadamard_test, two_layer_merge,
    DenseExecutor, OverlapConfig, Part, DEFAULT_LIGHTCONE_BOUND,
};
use crate::BitString;

#[derive(Parser, Debug)]
#[command(name = "commsim", version, about = "Classical simulation of commuting quantum circuits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Target accuracy of Monte-Carlo estimates.
    #[arg(long, global = true, default_value_t = 0.05)]
    pub epsilon: f64,
    /// Allowed failure probability.
    #[arg(long, global = true, default_value_t = 0.01)]
    pub delta: f64,
    /// RNG seed; drawn at random (and reported) when omitted.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Overrides the sample count (paulisim) or the shots per subset
    /// (depth-overlap).
    #[arg(long, global = true)]
    pub shots: Option<u64>,
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,
    /// Largest statevector the oracle may allocate. Overrides
    /// COMMSIM_MAX_AMPLITUDES.
    #[arg(long, global = true)]
    pub max_amplitudes: Option<usize>,
    /// Include wall-clock time in the output.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact expectation value on the statevector oracle.
    Oracle {
        circuit: PathBuf,
        /// Input basis state, one digit per qudit.
        #[arg(long)]
        input: Option<String>,
        /// Observable: `Z1`, a Pauli string such as `+XZI`, `diag3:1,0,-1`,
        /// or the path of a matrix file.
        #[arg(long, default_value = "Z1")]
        obs: String,
    },
    /// Exact simulation of a 2-local commuting circuit.
    Sim2local {
        circuit: PathBuf,
        /// Basis string, or per-qudit vectors such as `0.6,0.8;1,0` (complex
        /// entries written `re:im`).
        #[arg(long)]
        input: Option<String>,
        #[arg(long, default_value = "Z1")]
        obs: String,
    },
    /// Monte-Carlo estimate of ⟨Z_q⟩ for a Pauli-exponential circuit.
    Paulisim {
        circuit: PathBuf,
        #[arg(long, default_value_t = 1)]
        qubit: usize,
        #[arg(long)]
        input: Option<String>,
        /// Non-commuting gates to interleave, one `<position> <theta> <pauli>`
        /// per line; position counts the circuit gates applied before it.
        #[arg(long)]
        extras: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_MAX_EXTRAS)]
        max_extras: usize,
    },
    /// Clifford circuit diagonalizing a commuting Pauli list.
    Diagonalize {
        paulis: PathBuf,
        /// Also write the Clifford circuit to this file.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Commuting Hadamard-test circuit for ⟨0|C|0⟩.
    HadamardTest {
        circuit: PathBuf,
        #[arg(long, default_value = "re")]
        part: Part,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Half-size Hadamard test of an arbitrary circuit.
    AltHadamardTest {
        circuit: PathBuf,
        #[arg(long, default_value = "re")]
        part: Part,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// One commuting circuit for ⟨0|C1 C2|0⟩.
    MergeLayers {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, default_value = "re")]
        part: Part,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Estimate |⟨0|U|0⟩|² (or |⟨0|C U|0⟩|²) for a shallow circuit.
    DepthOverlap {
        circuit: PathBuf,
        /// Clifford circuit applied after U.
        #[arg(long)]
        clifford: Option<PathBuf>,
        /// Overrides the number of sampled subsets.
        #[arg(long)]
        subsets: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_LIGHTCONE_BOUND)]
        lightcone_bound: usize,
    },
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok((values, summary)) => {
            for v in values {
                let _ = writeln!(out, "{v}");
            }
            let _ = writeln!(err, "{summary}");
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

#[derive(Debug)]
enum CliError {
    Io(PathBuf, std::io::Error),
    Input(String),
    Run(Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::Input(m) => f.write_str(m),
            CliError::Run(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Run(e)
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn load_circuit(path: &Path) -> Result<Circuit, CliError> {
    parse_circuit(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn oracle_config(cli: &Cli) -> OracleConfig {
    match cli.max_amplitudes {
        Some(m) => OracleConfig { max_amplitudes: m },
        None => OracleConfig::from_env(),
    }
}

fn input_digits(input: &Option<String>, n: usize, d: usize) -> Result<Vec<usize>, CliError> {
    let digits = match input {
        Some(s) => parse_basis(s, d)?,
        None => vec![0; n],
    };
    if digits.len() != n {
        return Err(CliError::Input(format!("input has {} digits, circuit has {n} qudits", digits.len())));
    }
    Ok(digits)
}

fn parse_complex(t: &str) -> Option<C64> {
    match t.split_once(':') {
        Some((re, im)) => Some(C64::new(re.trim().parse().ok()?, im.trim().parse().ok()?)),
        None => Some(C64::new(t.trim().parse().ok()?, 0.0)),
    }
}

fn product_input(input: &Option<String>, n: usize, d: usize) -> Result<ProductState, CliError> {
    match input {
        Some(s) if s.contains(',') || s.contains(';') => {
            let factors = s
                .split(';')
                .map(|f| f.split(',').map(parse_complex).collect::<Option<Vec<_>>>())
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| CliError::Input(format!("bad product input {s:?}")))?;
            if factors.len() != n {
                return Err(CliError::Input(format!("input has {} factors, circuit has {n} qudits", factors.len())));
            }
            Ok(ProductState::new(factors, d)?)
        }
        _ => Ok(ProductState::basis(&input_digits(input, n, d)?, d)?),
    }
}

/// Matrix file: the 1-based support qudits on the first line, then the
/// `d^k × d^k` matrix row-major as `re im` pairs.
pub fn parse_matrix_observable(text: &str, n: usize, d: usize) -> Result<Observable, Error> {
    let bad = |m: String| Error::InvalidConfig(format!("observable file: {m}"));
    let mut lines = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| bad("empty".into()))?;
    let support = header
        .split_whitespace()
        .map(|t| match t.parse::<usize>() {
            Ok(q) if (1..=n).contains(&q) => Ok(q - 1),
            _ => Err(bad(format!("bad qudit {t:?}"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let vals = lines
        .flat_map(|l| l.split_whitespace())
        .map(|t| t.parse::<f64>().map_err(|_| bad(format!("bad number {t:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let dim = crate::linalg::pow_usize(d, support.len()).ok_or_else(|| bad("support too large".into()))?;
    if vals.len() != 2 * dim * dim {
        return Err(bad(format!("expected {} numbers, found {}", 2 * dim * dim, vals.len())));
    }
    let m = crate::linalg::CMatrix::from_fn(dim, dim, |r, c| {
        let k = 2 * (r * dim + c);
        C64::new(vals[k], vals[k + 1])
    });
    Observable::new(support, m)
}

fn observable_arg(s: &str, n: usize, d: usize) -> Result<Observable, CliError> {
    let path = Path::new(s);
    if path.is_file() {
        return Ok(parse_matrix_observable(&read(path)?, n, d)?);
    }
    Ok(parse_observable(s, n, d)?)
}

/// `Z1`/`X2`/`Y3`, a full signed Pauli string, or `diag<q>:v0,v1,…`.
pub fn parse_observable(s: &str, n: usize, d: usize) -> Result<Observable, Error> {
    let bad = |m: String| Error::InvalidConfig(format!("observable {s:?}: {m}"));
    let qudit = |t: &str| -> Result<usize, Error> {
        let q: usize = t.parse().map_err(|_| bad(format!("bad qudit index {t:?}")))?;
        if q == 0 || q > n {
            return Err(bad(format!("qudit {q} out of range 1..={n}")));
        }
        Ok(q - 1)
    };
    if let Some(rest) = s.strip_prefix("diag") {
        let (q, vals) = rest.split_once(':').ok_or_else(|| bad("expected diag<q>:v0,v1,...".into()))?;
        let q = qudit(q)?;
        let vals: Vec<C64> = vals
            .split(',')
            .map(|v| v.trim().parse::<f64>().map(|x| C64::new(x, 0.0)))
            .collect::<Result<_, _>>()
            .map_err(|_| bad("bad diagonal entry".into()))?;
        if vals.len() != d {
            return Err(bad(format!("need {d} diagonal entries, got {}", vals.len())));
        }
        return Observable::new(vec![q], diag(&vals));
    }
    if d != 2 {
        return Err(bad("Pauli observables need qubits; use diag<q>:...".into()));
    }
    let mut chars = s.chars();
    if let (Some(l @ ('X' | 'Y' | 'Z')), rest) = (chars.next(), chars.as_str()) {
        if !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()) {
            let q = qudit(rest)?;
            let p = match l {
                'X' => PauliOperator::single_x(n, q),
                'Y' => PauliOperator::single_y(n, q),
                _ => PauliOperator::single_z(n, q),
            };
            return Observable::from_pauli(&p);
        }
    }
    let p = PauliOperator::parse(s).map_err(|e| bad(e.message))?;
    if p.num_qubits() != n {
        return Err(bad(format!("{} qubits, circuit has {n}", p.num_qubits())));
    }
    Observable::from_pauli(&p)
}

fn estimator(cli: &Cli) -> EstimatorConfig {
    let seed = cli.seed.unwrap_or_else(rand::random);
    let mut cfg = EstimatorConfig::new(cli.epsilon, cli.delta, seed).with_workers(cli.workers.max(1));
    cfg.samples = cli.shots;
    cfg
}

fn to_object<T: serde::Serialize>(v: &T, timing: bool) -> Map<String, Value> {
    let Value::Object(mut m) = serde_json::to_value(v).expect("serializable") else {
        unreachable!("results serialize to objects")
    };
    if !timing {
        m.remove("elapsed_ms");
    }
    m
}

fn emitted(name: &str, c: &Circuit, output: &Option<PathBuf>) -> Result<(Vec<Value>, String), CliError> {
    let text = c.to_text();
    if let Some(p) = output {
        write_file(p, &text)?;
    }
    let v = json!({
        "command": name,
        "qubits": c.num_qudits(),
        "gates": c.len(),
        "locality": c.locality(),
        "circuit": text,
    });
    Ok((vec![v], format!("{name}: {} gates on {} qubits", c.len(), c.num_qudits())))
}

fn execute(cli: &Cli) -> Result<(Vec<Value>, String), CliError> {
    match &cli.command {
        Command::Oracle { circuit, input, obs } => {
            let c = load_circuit(circuit)?;
            let (n, d) = (c.num_qudits(), c.dim());
            let digits = input_digits(input, n, d)?;
            let o = observable_arg(obs, n, d)?;
            let mut s = StateVector::basis(&digits, d, &oracle_config(cli))?;
            s.apply_circuit(&c)?;
            let value = s.expectation(&o)?;
            let v = json!({ "command": "oracle", "value": value, "n": n, "d": d, "obs": obs });
            Ok((vec![v], format!("oracle: <{obs}> = {value}")))
        }
        Command::Sim2local { circuit, input, obs } => {
            let c = load_circuit(circuit)?;
            let (n, d) = (c.num_qudits(), c.dim());
            let o = observable_arg(obs, n, d)?;
            let value = simulate_2local(&c, &product_input(input, n, d)?, &o)?;
            let v = json!({ "command": "sim2local", "value": value, "n": n, "d": d, "obs": obs });
            Ok((vec![v], format!("sim2local: <{obs}> = {value}")))
        }
        Command::Paulisim {
            circuit,
            qubit,
            input,
            extras,
            max_extras,
        } => {
            let c = load_circuit(circuit)?;
            let n = c.num_qudits();
            let gates = pauli_gates(&c)?;
            let x = match input {
                Some(s) => BitString::parse(s)
                    .filter(|b| b.len() == n)
                    .ok_or_else(|| CliError::Input(format!("input {s:?} is not a {n}-bit string")))?,
                None => BitString::zeros(n),
            };
            if *qubit == 0 || *qubit > n {
                return Err(CliError::Input(format!("qubit {qubit} out of range 1..={n}")));
            }
            let cfg = estimator(cli);
            let (r, found) = match extras {
                None => (simulate_commuting_pauli(n, &gates, &x, qubit - 1, &cfg)?, 0),
                Some(path) => {
                    let extra = parse_extras(&read(path)?, n, gates.len())
                        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                    let found = extra.len();
                    let items = interleave(&gates, extra);
                    (simulate_noncommuting_pauli(n, &items, &x, qubit - 1, &cfg, *max_extras)?, found)
                }
            };
            let mut m = to_object(&r, cli.timing);
            m.insert("command".into(), json!("paulisim"));
            m.insert("qubit".into(), json!(qubit));
            m.insert("extras".into(), json!(found));
            let summary = format!("paulisim: <Z{qubit}> ~ {} (K = {}, seed {})", r.value, r.samples, r.seed);
            Ok((vec![Value::Object(m)], summary))
        }
        Command::Diagonalize { paulis, output } => {
            let ps = parse_pauli_list(&read(paulis)?).map_err(|e| CliError::Input(format!("{}: {e}", paulis.display())))?;
            if ps.is_empty() {
                return Err(CliError::Input("empty Pauli list".into()));
            }
            let (cl, qs) = diagonalize_commuting_set(&ps)?;
            let text = cl.to_circuit().to_text();
            if let Some(p) = output {
                write_file(p, &text)?;
            }
            let v = json!({
                "command": "diagonalize",
                "n": cl.num_qubits(),
                "clifford_gates": cl.len(),
                "clifford": text,
                "diagonal": qs.iter().map(|q| q.format()).collect::<Vec<_>>(),
            });
            Ok((vec![v], format!("diagonalize: {} operators, {} Clifford gates", qs.len(), cl.len())))
        }
        Command::HadamardTest { circuit, part, output } => {
            let c = hadamard_test(&load_circuit(circuit)?, *part)?;
            emitted("hadamard-test", &c, output)
        }
        Command::AltHadamardTest { circuit, part, output } => {
            let c = alternate_hadamard_test(&load_circuit(circuit)?, *part)?;
            emitted("alt-hadamard-test", &c, output)
        }
        Command::MergeLayers {
            first,
            second,
            part,
            output,
        } => {
            let c = two_layer_merge(&load_circuit(first)?, &load_circuit(second)?, *part)?;
            emitted("merge-layers", &c, output)
        }
        Command::DepthOverlap {
            circuit,
            clifford,
            subsets,
            lightcone_bound,
        } => {
            let u = load_circuit(circuit)?;
            let mut est = estimator(cli);
            est.samples = *subsets;
            let cfg = OverlapConfig {
                estimator: est,
                shots: cli.shots,
                lightcone_bound: *lightcone_bound,
            };
            let exec = DenseExecutor::new(oracle_config(cli));
            let r = match clifford {
                Some(p) => {
                    let cl = CliffordCircuit::from_circuit(&load_circuit(p)?)?;
                    estimate_cd_clifford_overlap(&u, &cl, &cfg, &exec)?
                }
                None => estimate_cd_overlap(&u, &cfg, &exec)?,
            };
            let mut m = to_object(&r, cli.timing);
            m.insert("command".into(), json!("depth-overlap"));
            m.insert("shots_per_subset".into(), json!(cfg.shot_count()));
            let summary = format!("depth-overlap: {} (subsets {}, seed {})", r.value, r.terms, r.seed);
            Ok((vec![Value::Object(m)], summary))
        }
    }
}

/// Parses an extras file: `<position> <theta> <pauli>` per line, `#`
/// comments allowed. Positions run from 0 to `m`.
pub fn parse_extras(text: &str, n: usize, m: usize) -> Result<Vec<(usize, f64, PauliOperator)>, ParseError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |m: String| ParseError::new(i + 1, m);
        let tok: Vec<&str> = line.split_whitespace().collect();
        let [pos, theta, pauli] = tok[..] else {
            return Err(err("expected <position> <theta> <pauli>".into()));
        };
        let pos: usize = pos.parse().map_err(|_| err(format!("bad position {pos:?}")))?;
        if pos > m {
            return Err(err(format!("position {pos} beyond the {m} circuit gates")));
        }
        let theta: f64 = theta.parse().map_err(|_| err(format!("bad angle {theta:?}")))?;
        let p = PauliOperator::parse(pauli).map_err(|e| err(e.message))?;
        if p.num_qubits() != n {
            return Err(err(format!("{} qubits, circuit has {n}", p.num_qubits())));
        }
        if !p.is_hermitian() {
            return Err(err(format!("{pauli} is not Hermitian")));
        }
        out.push((pos, theta, p));
    }
    Ok(out)
}

/// Members in circuit order with each extra inserted after `position`
/// members; extras at the same position keep file order.
pub fn interleave(members: &[(f64, PauliOperator)], mut extras: Vec<(usize, f64, PauliOperator)>) -> Vec<PauliItem> {
    extras.sort_by_key(|e| e.0);
    let mut out = Vec::with_capacity(members.len() + extras.len());
    let mut it = extras.into_iter().peekable();
    for k in 0..=members.len() {
        while let Some((_, t, p)) = it.next_if(|e| e.0 == k) {
            out.push(PauliItem::Extra(t, p));
        }
        if let Some((t, p)) = members.get(k) {
            out.push(PauliItem::Member(*t, p.clone()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn observables() {
        assert_eq!(parse_observable("Z2", 3, 2).unwrap().support(), &[1]);
        assert_eq!(parse_observable("+XZI", 3, 2).unwrap().support(), &[0, 1]);
        assert!(parse_observable("Z4", 3, 2).is_err());
        assert!(parse_observable("diag1:1,0,-1", 2, 3).is_ok());
        assert!(parse_observable("Z1", 2, 3).is_err());
        let o = parse_matrix_observable("# Z on qubit 2\n2\n1 0 0 0\n0 0 -1 0\n", 2, 2).unwrap();
        assert_eq!(o.support(), &[1]);
        assert!(parse_matrix_observable("1\n0 1 0 0\n0 0 0 0\n", 1, 2).is_err());
    }

    #[test]
    fn product_inputs() {
        let p = product_input(&Some("0.6,0.8;0:1,0".into()), 2, 2).unwrap();
        assert_eq!(p.factor(1)[0], C64::new(0.0, 1.0));
        assert!(product_input(&Some("1,1".into()), 1, 2).is_err());
        assert!(product_input(&Some("01".into()), 2, 2).is_ok());
    }

    #[test]
    fn usage_error_exits_2() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(run(["commsim", "frobnicate"], &mut o, &mut e), 2);
        assert_eq!(run(["commsim", "oracle"], &mut o, &mut e), 2);
    }

    #[test]
    fn extras_file() {
        let p = |s: &str| PauliOperator::parse(s).unwrap();
        let ex = parse_extras("# two extras\n1 0.5 +ZI\n0 -0.1 XX\n", 2, 2).unwrap();
        let items = interleave(&[(0.1, p("XI")), (0.2, p("IX"))], ex);
        let kinds: Vec<bool> = items.iter().map(|i| matches!(i, PauliItem::Extra(..))).collect();
        assert_eq!(kinds, vec![true, false, true, false]);
        assert_eq!(parse_extras("3 0.1 ZI", 2, 2).unwrap_err().line, 1);
        assert!(parse_extras("0 0.1 ZZZ", 2, 2).is_err());
    }
}
