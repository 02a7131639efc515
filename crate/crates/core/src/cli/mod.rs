//! Command implementations behind the `selfsim` binary. Each returns its
//! standard output as a string so it can be tested without a process.

pub mod file;

use std::fmt::Write as _;
use std::ops::Range;

use thiserror::Error;

pub use file::{AtomDecl, Check, DiagramFile, FileError};

use crate::coherence::{decide, decide_paths, Diagram, Verdict};
use crate::model_matrix::{block_sum, nesting_permutation, non_strictness_witness, TruncMatrix};
use crate::model_nat::{alpha_map, eval_monoid_term, AtomEnv, EvalError, LiteralError};
use crate::syntax::{parse_monoid_term, TermParseError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    File(#[from] FileError),
    #[error(transparent)]
    Term(#[from] TermParseError),
    #[error("environment {0}")]
    Literal(#[from] LiteralError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("bad range `{0}`: expected `a..b` or `a..=b`")]
    Range(String),
    #[error("{0}")]
    Usage(String),
}

/// Text for standard output plus the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub output: String,
    pub exit_code: i32,
}

fn severity(v: &Verdict) -> i32 {
    match v {
        Verdict::Guaranteed(_) => 0,
        Verdict::Refuted(_) => 2,
        Verdict::ModelCommutesUnproven { .. } | Verdict::IllTyped(_) => 1,
    }
}

/// One verdict line per check. Exit 0 if all are guaranteed, 2 if any is
/// refuted, 1 otherwise.
pub fn check_file(file: &DiagramFile, env: Option<&AtomEnv>, bound: u64) -> Report {
    let d = &file.diagram;
    let mut output = String::new();
    let mut exit_code = 0;
    for check in file.effective_checks() {
        let result = match &check {
            Check::All => decide(d, env, bound),
            Check::Paths(l, r) => decide_paths(d, l, r, env, bound),
        };
        let (line, code) = match result {
            Ok(v) => {
                let mut line = v.to_string();
                if let (Check::All, Verdict::Refuted(r)) = (&check, &v) {
                    write!(line, " at {} = {}", d.path_names(&r.lhs_path), d.path_names(&r.rhs_path)).unwrap();
                }
                (line, severity(&v))
            }
            Err(e) => (format!("ERROR {e}"), 1),
        };
        output.push_str(&line);
        output.push('\n');
        exit_code = exit_code.max(code);
    }
    Report { output, exit_code }
}

pub fn cmd_check(text: &str, env: Option<&AtomEnv>, bound: u64) -> Result<Report, CliError> {
    Ok(check_file(&DiagramFile::parse(text)?, env, bound))
}

/// Parses `a..b` (half-open) or `a..=b` (inclusive).
pub fn parse_range(s: &str) -> Result<Range<u64>, CliError> {
    let bad = || CliError::Range(s.to_string());
    let (lo, hi, inclusive) = if let Some((lo, hi)) = s.split_once("..=") {
        (lo, hi, true)
    } else {
        let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
        (lo, hi, false)
    };
    let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
    let end = if inclusive { hi.checked_add(1).ok_or_else(bad)? } else { hi };
    if end < lo {
        return Err(bad());
    }
    Ok(lo..end)
}

/// One `n value` row per input; `-` marks undefined.
pub fn cmd_eval(term: &str, range: Range<u64>, env: Option<&AtomEnv>) -> Result<String, CliError> {
    let empty = AtomEnv::new();
    let env = env.unwrap_or(&empty);
    // Atoms bound to non-bijections are read as partial.
    let invertible = |name: &str| env.get(name).is_none_or(|m| m.is_total_bijection());
    let m = parse_monoid_term(term, &invertible)?;
    let map = eval_monoid_term(&m, env)?;
    let mut out = String::new();
    for n in range {
        match map.apply(n) {
            Some(v) => writeln!(out, "{n} {v}").unwrap(),
            None => writeln!(out, "{n} -").unwrap(),
        }
    }
    Ok(out)
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// DOT rendering; nodes and edges in declaration order.
pub fn dot(d: &Diagram) -> String {
    let mut out = String::from("digraph diagram {\n");
    for (i, n) in d.nodes().iter().enumerate() {
        let label = match &n.label {
            Some(t) => format!("{}\\n{t}", dot_escape(&n.name)),
            None => dot_escape(&n.name),
        };
        writeln!(out, "  n{i} [label=\"{label}\"];").unwrap();
    }
    for e in d.edges() {
        let label = format!("{}: {}", e.name, e.label);
        writeln!(out, "  n{} -> n{} [label=\"{}\"];", e.src.0, e.tgt.0, dot_escape(&label)).unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn cmd_dot(text: &str) -> Result<String, CliError> {
    Ok(dot(&DiagramFile::parse(text)?.diagram))
}

/// Compares the block sum with the interleaving sum on seeded matrices.
pub fn cmd_matrix_demo(seed: u64, size: usize) -> Result<String, CliError> {
    if size < 8 {
        return Err(CliError::Usage(format!("matrix size must be at least 8, got {size}")));
    }
    let mut out = String::new();
    let strict = (0..100).all(|i| {
        let s = seed.wrapping_add(3 * i);
        let a = TruncMatrix::random(s, 2, 2, -9, 9);
        let b = TruncMatrix::random(s.wrapping_add(1), 2, 2, -9, 9);
        let c = TruncMatrix::random(s.wrapping_add(2), 2, 2, -9, 9);
        block_sum(&block_sum(&a, &b), &c) == block_sum(&a, &block_sum(&b, &c))
    });
    writeln!(out, "block sum associative on 100 random 2x2 triples: {}", if strict { "yes" } else { "no" }).unwrap();
    let broken = (0..100).filter(|&i| non_strictness_witness(seed.wrapping_add(i), size)).count();
    writeln!(out, "interleaving sum differs between nestings: {broken}/100 random 0/1 triples at size {size}").unwrap();
    writeln!(out, "index  a+(b+c) -> (a+b)+c  alpha").unwrap();
    let alpha = alpha_map();
    for (i, p) in nesting_permutation(size).into_iter().enumerate() {
        let shown = p.map_or_else(|| "-".to_string(), |j| j.to_string());
        let a = alpha.apply(i as u64).map_or_else(|| "-".to_string(), |v| v.to_string());
        writeln!(out, "{i:>5}  {shown:>20}  {a:>5}").unwrap();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model_nat::sigma_map;

    #[test]
    fn eval_examples() {
        let col = |s: &str| -> Vec<String> { s.lines().map(|l| l.split(' ').nth(1).unwrap().to_string()).collect() };
        assert_eq!(col(&cmd_eval("alpha", 0..8, None).unwrap()), ["0", "2", "4", "1", "8", "6", "12", "3"]);
        assert_eq!(col(&cmd_eval("one", parse_range("0..=3").unwrap(), None).unwrap()), ["0", "1", "2", "3"]);
        let id = cmd_eval("alpha . inv(alpha)", 100..140, None).unwrap();
        assert!(id.lines().all(|l| {
            let (n, v) = l.split_once(' ').unwrap();
            n == v
        }));
    }

    #[test]
    fn eval_marks_undefined() {
        let env = AtomEnv::new().with("p", crate::model_nat::parse_map("{ 0/2 -> 0/2 }").unwrap());
        assert_eq!(cmd_eval("p", 0..3, Some(&env)).unwrap(), "0 0\n1 -\n2 2\n");
        assert!(matches!(cmd_eval("inv(p)", 0..3, Some(&env)), Err(CliError::Eval(_))));
        assert!(matches!(cmd_eval("q", 0..3, Some(&env)), Err(CliError::Eval(_))));
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("0..8").unwrap(), 0..8);
        assert_eq!(parse_range("0..=3").unwrap(), 0..4);
        assert!(parse_range("5..2").is_err());
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn check_exit_codes() {
        let guaranteed = "node a\nnode b\narrow f : a -> b = alpha\narrow g : a -> b = alpha\ncheck f = g\n";
        assert_eq!(cmd_check(guaranteed, None, 4096).unwrap(), Report { output: "GUARANTEED\n".into(), exit_code: 0 });

        let refuted = "node a\nnode b\narrow f : a -> b = alpha\narrow g : a -> b = one\ncheck all\ncheck f = f\n";
        let r = cmd_check(refuted, None, 4096).unwrap();
        assert_eq!(r.output, "REFUTED n=1 lhs=2 rhs=1 at f = g\nGUARANTEED\n");
        assert_eq!(r.exit_code, 2);

        let atoms = "node a\nnode b\narrow f : a -> b = s # one\narrow g : a -> b = s # one\n";
        let env = AtomEnv::new().with("s", sigma_map());
        let r = cmd_check(atoms, Some(&env), 4096).unwrap();
        assert_eq!(r, Report { output: "MODEL_COMMUTES_UNPROVEN bound=4096\n".into(), exit_code: 1 });
        let r = cmd_check(atoms, None, 4096).unwrap();
        assert!(r.output.starts_with("ERROR"));
        assert_eq!(r.exit_code, 1);
    }

    #[test]
    fn dot_is_deterministic() {
        let text = "object a = (x*x)\nobject b = x\narrow c : a -> b = code((x*x))\n";
        let first = cmd_dot(text).unwrap();
        assert_eq!(first, cmd_dot(text).unwrap());
        assert_eq!(
            first,
            "digraph diagram {\n  n0 [label=\"a\\n(x*x)\"];\n  n1 [label=\"b\\nx\"];\n  n0 -> n1 [label=\"c: code((x*x))\"];\n}\n"
        );
    }

    #[test]
    fn matrix_demo_matches_alpha() {
        let out = cmd_matrix_demo(0, 8).unwrap();
        assert!(out.contains("associative on 100 random 2x2 triples: yes"));
        assert!(out.contains("    1                     2      2"), "{out}");
        assert!(cmd_matrix_demo(0, 4).is_err());
    }
}
