//! Command-line front end. Every result is one JSON object per line with
//! the fields `command`, `inputs`, `outcome` and `cost`; `--human` prints
//! the same records as aligned text.
//!
//! Exit codes: 0 for any computed outcome (an exhausted search or an
//! overflowing evaluation included), 1 for usage errors, 2 when a machine
//! runs out of fuel.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::clock::{ClockSpec, ClockedMachine};
use crate::codec::{self, CodedMachine};
use crate::fgh::{dominates_on_window, fgh_at_least, fgh_eval, EvalOutcome, FnDesc, HierarchyIndex};
use crate::machine::{run, MachineTable, RunResult};
use crate::ordinal::Ordinal;
use crate::par::Exec;
use crate::qfam::{self, StrideReport};
use crate::registry::FRegistry;
use crate::sat::{self, CnfFormula, SearchOutcome};
use crate::words::{numeral_word, pair, unpair, Word};
use crate::{DEFAULT_BUDGET, DEFAULT_FUEL, DEFAULT_WIDTH};

#[derive(Debug, Parser)]
#[command(name = "tmlab", version, about = "Machines, clocks, SAT counterexamples and the fast-growing hierarchy")]
pub struct Cli {
    /// Human-readable output instead of JSON lines
    #[arg(long, global = true)]
    pub human: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct BudgetArg {
    /// Step budget for searches and hierarchy evaluation
    #[arg(long, env = "CLOCKWORK_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
}

#[derive(Debug, Args)]
pub struct FuelArg {
    /// Step limit for unclocked machine runs
    #[arg(long, default_value_t = DEFAULT_FUEL)]
    pub fuel: u64,
}

#[derive(Debug, Args)]
pub struct ExecArg {
    /// Run scans on one thread
    #[arg(long)]
    pub sequential: bool,
}

impl ExecArg {
    fn exec(&self) -> Exec {
        if self.sequential {
            Exec::Sequential
        } else {
            Exec::default()
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a machine table file on an input word
    TmRun {
        table: PathBuf,
        /// Input word over {0,1}; empty for the blank tape
        #[arg(default_value = "")]
        input: String,
        #[command(flatten)]
        fuel: FuelArg,
    },
    /// Goedel index of a machine table file
    TmEncode { table: PathBuf },
    /// Decode a Goedel index
    TmDecode { index: BigUint },
    /// Run a table under a clock (`poly:p` or `fgh:alpha:k`)
    ClockRun {
        table: PathBuf,
        #[arg(default_value = "")]
        input: String,
        #[arg(long)]
        clock: String,
        #[command(flatten)]
        budget: BudgetArg,
    },
    /// Evaluate the verifier V on z, or on the pair <x, y>
    SatVerify {
        #[arg(required_unless_present_all = ["x", "y"], conflicts_with_all = ["x", "y"])]
        z: Option<BigUint>,
        #[arg(long, requires = "y")]
        x: Option<BigUint>,
        #[arg(long, requires = "x")]
        y: Option<BigUint>,
    },
    /// Solve a coded formula x, or a DIMACS file
    SatSolve {
        #[arg(required_unless_present = "cnf", conflicts_with = "cnf")]
        x: Option<BigUint>,
        #[arg(long)]
        cnf: Option<PathBuf>,
    },
    /// Least counterexample z below the budget for machine m
    FnaSearch {
        m: BigUint,
        #[command(flatten)]
        budget: BudgetArg,
        #[command(flatten)]
        fuel: FuelArg,
        /// Use the extension f' (0 outside clocked and registered machines)
        #[arg(long)]
        prime: bool,
        #[arg(long, requires = "prime")]
        registry: Option<PathBuf>,
        #[command(flatten)]
        exec: ExecArg,
    },
    /// Evaluate F_alpha(x)
    OrdEval {
        alpha: String,
        #[arg(long)]
        x: BigUint,
        /// Only decide F_alpha(x) >= this threshold
        #[arg(long)]
        at_least: Option<BigUint>,
        #[command(flatten)]
        budget: BudgetArg,
    },
    /// The x-th element of the fundamental sequence of a limit ordinal
    OrdFs {
        alpha: String,
        #[arg(long)]
        x: u64,
    },
    /// Check f(x) >= g(x) for lo <= x <= hi
    Dominate {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        lo: u64,
        #[arg(long)]
        hi: u64,
        #[command(flatten)]
        budget: BudgetArg,
        #[command(flatten)]
        exec: ExecArg,
    },
    /// Build the threshold machine Q for (alpha, n)
    QfamBuild {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = DEFAULT_WIDTH)]
        width: u32,
        #[command(flatten)]
        budget: BudgetArg,
        /// Record the built machine in this registry file
        #[arg(long)]
        registry: Option<PathBuf>,
    },
    /// Index spacing of Q over n in [from, to)
    QfamStride {
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = 0)]
        from: u64,
        #[arg(long)]
        to: u64,
        #[arg(long, default_value_t = DEFAULT_WIDTH)]
        width: u32,
        #[command(flatten)]
        budget: BudgetArg,
        #[command(flatten)]
        exec: ExecArg,
    },
    /// Counterexample search on the clocked Q, one record per n
    QfamPeaks {
        #[arg(long)]
        alpha: String,
        #[arg(long, num_args = 1.., required = true)]
        n: Vec<u64>,
        #[arg(long, default_value_t = DEFAULT_WIDTH)]
        width: u32,
        #[command(flatten)]
        budget: BudgetArg,
        #[command(flatten)]
        fuel: FuelArg,
        #[command(flatten)]
        exec: ExecArg,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Operational(Record),
}

type Outcome = Result<Vec<Record>, Failure>;

#[derive(Debug, Clone, serde::Serialize)]
struct Record {
    command: &'static str,
    inputs: Value,
    outcome: Value,
    cost: Value,
}

impl Record {
    fn json(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }

    fn human(&self) -> String {
        let flat = |v: &Value| match v {
            Value::Object(m) => m.iter().map(|(k, v)| format!("{k}={}", plain(v))).collect::<Vec<_>>().join(" "),
            other => plain(other),
        };
        format!("{:<12} {} -> {} [cost {}]", self.command, flat(&self.inputs), flat(&self.outcome), flat(&self.cost))
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn read_table(path: &Path) -> Result<MachineTable, Failure> {
    read_file(path)?.parse().map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn parse_word(s: &str) -> Result<Word, Failure> {
    s.parse().map_err(|_| usage(format!("not a binary word: {s:?}")))
}

fn parse_index(s: &str) -> Result<HierarchyIndex, Failure> {
    s.parse().map_err(|e| usage(format!("bad ordinal {s:?}: {e}")))
}

fn big(v: &BigUint) -> Value {
    Value::String(v.to_string())
}

fn search_value(o: &SearchOutcome) -> Value {
    match o {
        SearchOutcome::Found { witness, value } => {
            let (x, y) = unpair(witness);
            json!({"result": "found", "z": big(value), "x": big(&x), "y": big(&y)})
        }
        SearchOutcome::Exhausted { budget } => json!({"result": "exhausted", "budget": budget}),
    }
}

fn stride_value(r: &StrideReport) -> Value {
    json!({
        "indices": r.indices.iter().map(big).collect::<Vec<_>>(),
        "base": r.base.as_ref().map(big),
        "stride": r.stride.as_ref().map(|d| d.to_string()),
    })
}

fn eval_value(o: &EvalOutcome) -> (Value, Value) {
    match o {
        EvalOutcome::Value { value, cost } => (json!({"value": big(value)}), json!({"calls": cost})),
        EvalOutcome::Overflow { budget } => (json!({"overflow": true}), json!({"budget": budget})),
    }
}

fn execute(cmd: &Command) -> Outcome {
    let one = |command, inputs, outcome, cost| Ok(vec![Record { command, inputs, outcome, cost }]);
    match cmd {
        Command::TmRun { table, input, fuel } => {
            let t = read_table(table)?;
            let x = parse_word(input)?;
            let inputs = json!({"table": table.display().to_string(), "input": input, "fuel": fuel.fuel});
            match run(&t, &x, fuel.fuel) {
                RunResult::Halted { output, steps } => {
                    one("tm-run", inputs, json!({"halted": true, "output": output.to_string()}), json!({"steps": steps}))
                }
                RunResult::OutOfFuel { steps } => Err(Failure::Operational(Record {
                    command: "tm-run",
                    inputs,
                    outcome: json!({"error": "fuel_exhausted"}),
                    cost: json!({"steps": steps}),
                })),
            }
        }
        Command::TmEncode { table } => {
            let t = read_table(table)?;
            let i = codec::encode_table(&t);
            one(
                "tm-encode",
                json!({"table": table.display().to_string()}),
                json!({"index": big(&i), "serialization": codec::table_text(&t)}),
                json!({"rules": t.rules().len()}),
            )
        }
        Command::TmDecode { index } => {
            let d = codec::decode_index(index);
            let kind = match &d {
                CodedMachine::Clocked(_) => "clocked",
                CodedMachine::Plain(crate::clock::MachineBody::Threshold(_)) => "threshold",
                CodedMachine::Plain(_) => "table",
            };
            let mut outcome = json!({
                "kind": kind,
                "sigma_image": d.is_clocked(),
                "serialization": codec::serialization(index),
            });
            if let CodedMachine::Clocked(c) = &d {
                outcome["clock"] = json!(c.clock.to_string());
                outcome["exponent"] = json!(c.clock.exponent());
            }
            match (&d, d.table()) {
                (CodedMachine::Plain(crate::clock::MachineBody::Table(_)) | CodedMachine::Clocked(_), Some(t)) => {
                    outcome["table"] = json!(t.to_string())
                }
                (_, Some(t)) => outcome["states"] = json!(t.states()),
                _ => {}
            }
            let bits = crate::words::index_word(index).len();
            one("tm-decode", json!({"index": big(index)}), outcome, json!({"word_bits": bits}))
        }
        Command::ClockRun { table, input, clock, budget } => {
            let t = read_table(table)?;
            let x = parse_word(input)?;
            let c = ClockSpec::parse(clock, budget.budget).map_err(|e| usage(e.to_string()))?;
            let r = ClockedMachine::new(t, c.clone()).run(&x);
            one(
                "clock-run",
                json!({"table": table.display().to_string(), "input": input, "clock": clock}),
                json!({"output": r.output.to_string(), "cut": r.cut, "bound": big(&c.bound(x.len() as u64))}),
                json!({"steps": r.steps}),
            )
        }
        Command::SatVerify { z, x, y } => {
            let z = match (z, x, y) {
                (Some(z), _, _) => z.clone(),
                (None, Some(x), Some(y)) => pair(x, y),
                _ => return Err(usage("give z, or both --x and --y")),
            };
            let (ok, ops) = sat::verify_with_cost(&z);
            let (x, y) = unpair(&z);
            one(
                "sat-verify",
                json!({"z": big(&z), "x": big(&x), "y": big(&y)}),
                json!(u8::from(ok)),
                json!({"ops": ops}),
            )
        }
        Command::SatSolve { x, cnf } => {
            let (x, inputs) = match (x, cnf) {
                (Some(x), _) => (x.clone(), json!({"x": big(x)})),
                (None, Some(path)) => {
                    let f: CnfFormula = read_file(path)?.parse().map_err(|e| usage(format!("{}: {e}", path.display())))?;
                    let w = sat::encode_cnf(&f);
                    let x = crate::words::word_numeral(&w).unwrap_or_default();
                    (x.clone(), json!({"cnf": path.display().to_string(), "x": big(&x)}))
                }
                _ => return Err(usage("give x or --cnf")),
            };
            let y = sat::solve_e(&x);
            let satisfied = sat::verify(&pair(&x, &y));
            let vars = sat::decode_cnf(&numeral_word(&x)).map(|f| f.num_vars()).unwrap_or(0);
            one(
                "sat-solve",
                inputs,
                json!({"y": big(&y), "assignment": numeral_word(&y).to_string(), "satisfied": satisfied}),
                json!({"assignments_max": 1u64.checked_shl(vars).map(|v| v.to_string())}),
            )
        }
        Command::FnaSearch { m, budget, fuel, prime, registry, exec } => {
            let inputs = json!({"m": big(m), "budget": budget.budget, "fuel": fuel.fuel, "prime": prime});
            let result = if *prime {
                let reg = match registry {
                    Some(p) => FRegistry::load(p).map_err(|e| usage(format!("{}: {e}", p.display())))?,
                    None => FRegistry::new(),
                };
                sat::f_prime(m, &reg, budget.budget, fuel.fuel)
            } else {
                sat::f_neg_a_decoded(&codec::decode_index(m), budget.budget, fuel.fuel, exec.exec())
            };
            match result {
                Ok(o) => one("fna-search", inputs, search_value(&o), json!({"budget": budget.budget})),
                Err(sat::SearchError::Indeterminate(z)) => Err(Failure::Operational(Record {
                    command: "fna-search",
                    inputs,
                    outcome: json!({"error": "indeterminate", "z": z}),
                    cost: json!({"budget": budget.budget}),
                })),
            }
        }
        Command::OrdEval { alpha, x, at_least, budget } => {
            let idx = parse_index(alpha)?;
            let mut inputs = json!({"alpha": idx.to_string(), "x": big(x), "budget": budget.budget});
            match at_least {
                Some(t) => {
                    inputs["at_least"] = big(t);
                    let r = fgh_at_least(&idx, x, t, budget.budget);
                    one("ord-eval", inputs, json!({"at_least": r}), json!({"budget": budget.budget}))
                }
                None => {
                    let (outcome, cost) = eval_value(&fgh_eval(&idx, x, budget.budget));
                    one("ord-eval", inputs, outcome, cost)
                }
            }
        }
        Command::OrdFs { alpha, x } => {
            let a: Ordinal = alpha.parse().map_err(|e| usage(format!("bad ordinal {alpha:?}: {e}")))?;
            let e = a.fundamental(*x).map_err(|e| usage(e.to_string()))?;
            one("ord-fs", json!({"alpha": a.to_string(), "x": x}), json!({"element": e.to_string()}), json!(null))
        }
        Command::Dominate { f, g, lo, hi, budget, exec } => {
            let fd: FnDesc = f.parse().map_err(|e| usage(format!("--f: {e}")))?;
            let gd: FnDesc = g.parse().map_err(|e| usage(format!("--g: {e}")))?;
            if lo > hi {
                return Err(usage("--lo must not exceed --hi"));
            }
            let v = dominates_on_window(&fd, &gd, *lo, *hi, budget.budget, exec.exec());
            one(
                "dominate",
                json!({"f": fd.to_string(), "g": gd.to_string(), "lo": lo, "hi": hi}),
                json!({"verdict": v}),
                json!({"budget": budget.budget}),
            )
        }
        Command::QfamBuild { alpha, n, width, budget, registry } => {
            let idx = parse_index(alpha)?;
            let q = qfam::build_q(&idx, *n, *width, budget.budget).map_err(|e| usage(e.to_string()))?;
            if let Some(p) = registry {
                let mut reg = FRegistry::load(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
                reg.insert(q.godel.clone());
                reg.save(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            }
            one(
                "qfam-build",
                json!({"alpha": q.spec.alpha, "n": n, "width": width}),
                json!({
                    "k": big(&q.spec.k),
                    "godel": big(&q.godel),
                    "clock": q.clock.to_string(),
                    "clock_index": big(&q.clock_index),
                    "sigma": big(&q.sigma),
                    "p_index": big(&qfam::p_index(&q.godel, &q.clock_index)),
                }),
                json!({"states": q.table().states(), "max_steps": q.max_steps}),
            )
        }
        Command::QfamStride { alpha, from, to, width, budget, exec } => {
            let idx = parse_index(alpha)?;
            if from >= to {
                return Err(usage("--from must be below --to"));
            }
            let s = qfam::stride_analysis(&idx, *from..*to, *width, budget.budget, exec.exec())
                .map_err(|e| usage(e.to_string()))?;
            one(
                "qfam-stride",
                json!({"alpha": idx.to_string(), "from": from, "to": to, "width": width}),
                json!({
                    "machines": stride_value(&s.machines),
                    "clocks": stride_value(&s.clocks),
                    "sigma": stride_value(&s.sigma),
                    "p_indices": s.p_indices.iter().map(big).collect::<Vec<_>>(),
                    "p_degree": s.p_degree,
                }),
                json!({"builds": to - from}),
            )
        }
        Command::QfamPeaks { alpha, n, width, budget, fuel, exec } => {
            let idx = parse_index(alpha)?;
            let mut out = Vec::new();
            for &n in n {
                let inputs = json!({"alpha": idx.to_string(), "n": n, "width": width, "budget": budget.budget});
                match qfam::peak_probe(&idx, n, *width, budget.budget, budget.budget, fuel.fuel, exec.exec()) {
                    Ok(p) => {
                        let mut outcome = search_value(&p.outcome);
                        outcome["k"] = big(&p.threshold);
                        outcome["sigma"] = big(&p.index);
                        out.push(Record { command: "qfam-peaks", inputs, outcome, cost: json!({"budget": budget.budget}) });
                    }
                    Err(qfam::QfamError::Search(e)) => {
                        return Err(Failure::Operational(Record {
                            command: "qfam-peaks",
                            inputs,
                            outcome: json!({"error": e.to_string()}),
                            cost: json!({"budget": budget.budget}),
                        }))
                    }
                    Err(e) => return Err(usage(e.to_string())),
                }
            }
            Ok(out)
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = if e.use_stderr() {
                e.render().to_string().lines().next().unwrap_or("usage error").to_string()
            } else {
                e.render().to_string()
            };
            let _ = if e.use_stderr() { writeln!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let print = |r: &Record, out: &mut dyn Write| {
        let line = if cli.human { r.human() } else { r.json() };
        let _ = writeln!(out, "{line}");
    };
    match execute(&cli.command) {
        Ok(records) => {
            for r in &records {
                print(r, out);
            }
            0
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Operational(r)) => {
            print(&r, out);
            2
        }
    }
}
