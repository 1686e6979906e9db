//! Command implementations. Each returns the process exit code.

use std::fs;
use std::path::Path;
use std::time::Duration;

use anyhow::{anyhow, Context};
use aspt_core::bridge::{to_asp, to_cnf};
use aspt_core::experiment::{self, BenchSpec, Family};
use aspt_core::families;
use aspt_core::formats::*;
use aspt_core::proofkit::{self, Verdict};
use aspt_core::tableau::{solve, CutScope, Heuristic, Preset};
use aspt_core::{EngineConfig, ExtensionSet, Outcome, Program};

use crate::{Command, Direction, EngineArgs, Failure, HeuristicArg, RulesArg, TIMEOUT_ENV};

type Res<T> = std::result::Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(anyhow!(msg.into()))
}

trait OrInput<T> {
    fn input(self) -> Res<T>;
}

impl<T, E: Into<anyhow::Error>> OrInput<T> for std::result::Result<T, E> {
    fn input(self) -> Res<T> {
        self.map_err(|e| Failure::Input(e.into()))
    }
}

fn read(path: &Path) -> Res<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display())).input()
}

fn write(path: &Path, text: &str) -> Res<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display())).input()
}

fn read_program(path: &Path) -> Res<Program> {
    parse_program(&read(path)?).with_context(|| path.display().to_string()).input()
}

fn read_cnf(path: &Path) -> Res<aspt_core::ClauseSet> {
    parse_dimacs(&read(path)?).with_context(|| path.display().to_string()).input()
}

fn env_timeout() -> Res<Option<f64>> {
    match std::env::var(TIMEOUT_ENV) {
        Ok(v) => v.trim().parse::<f64>().map(Some).map_err(|_| usage(format!("{TIMEOUT_ENV}={v} is not a number"))),
        Err(_) => Ok(None),
    }
}

fn seconds(s: f64) -> Res<Duration> {
    Duration::try_from_secs_f64(s).map_err(|_| usage(format!("bad timeout {s}")))
}

fn engine_config(a: &EngineArgs) -> Res<EngineConfig> {
    let preset = match a.rules {
        RulesArg::Full => Preset::Full,
        RulesArg::Supported => Preset::Supported,
        RulesArg::Nomore => Preset::NoMore,
        RulesArg::Smodels => Preset::Smodels,
    };
    let mut c = EngineConfig::preset(preset).with_lookahead(a.lookahead);
    if let Some(s) = &a.cut_scope {
        c = c.with_cut_scope(CutScope::parse(s).ok_or_else(|| usage(format!("unknown cut scope `{s}`")))?);
    }
    c = c.with_heuristic(match a.heuristic {
        HeuristicArg::Lex => Heuristic::Lex,
        HeuristicArg::Moms => Heuristic::Moms,
        HeuristicArg::Random => Heuristic::Random(a.seed),
    });
    Ok(c)
}

fn print_verdict(v: &Verdict) -> u8 {
    println!("{v}");
    if v.is_valid() {
        0
    } else {
        2
    }
}

pub fn run(cmd: Command) -> Res<u8> {
    match cmd {
        Command::Solve { file, engine, emit_proof, timeout } => {
            let program = read_program(&file)?;
            let limit = match timeout.or(env_timeout()?) {
                Some(s) => Some(seconds(s)?),
                None => None,
            };
            let config = engine_config(&engine)?.with_proof(emit_proof.is_some()).with_time_limit(limit);
            let sol = solve(&program, &ExtensionSet::new(), &config).input()?;
            let code = match &sol.outcome {
                Outcome::Sat { model, semantics } => {
                    println!("SAT ({})", semantics.label());
                    println!("model: {}", program.names_of(model).join(" "));
                    10
                }
                Outcome::Unsat { proof } => {
                    println!("UNSAT");
                    if let (Some(path), Some(proof)) = (&emit_proof, proof) {
                        write(path, &serialize_tableau_proof(&program, proof).input()?)?;
                    }
                    20
                }
                Outcome::Unknown => {
                    println!("UNKNOWN (time limit)");
                    0
                }
            };
            let s = &sol.stats;
            println!("decisions: {}", s.decisions);
            println!("entries: {}", s.entries);
            println!("lookahead probes: {}", s.lookahead_probes);
            if let Some(l) = s.proof_length {
                println!("proof length: {l}");
            }
            println!("time: {:.3}s", s.elapsed.as_secs_f64());
            Ok(code)
        }
        Command::CheckProof { tableau, res, input, proof, .. } => {
            let text = read(&proof)?;
            let verdict = if tableau {
                let program = read_program(&input)?;
                let p = parse_tableau_proof(&program, &text).input()?;
                proofkit::check_tableau_proof(&program, &p)
            } else {
                let cnf = read_cnf(&input)?;
                let p = parse_res_proof(&text).input()?;
                if res {
                    proofkit::check_res_proof(&cnf, &p)
                } else {
                    proofkit::check_eres_proof(&cnf, &p)
                }
            };
            Ok(print_verdict(&verdict))
        }
        Command::Translate { to_cnf: forward, input, output, namemap, .. } => {
            let (text, names) = if forward {
                let (cnf, names) = to_cnf(&read_program(&input)?);
                (serialize_dimacs(&cnf), names)
            } else {
                let (program, names) = to_asp(&read_cnf(&input)?);
                (serialize_program(&program), names)
            };
            write(&output, &text)?;
            if let Some(path) = namemap {
                write(&path, &serialize_namemap(&names))?;
            }
            Ok(0)
        }
        Command::Gen { kind, arg, output, n, p, seed } => gen(&kind, &arg, &output, n, p, seed),
        Command::Simplify { input, output, .. } => {
            let program = read_program(&input)?;
            let reduced = families::red_star(&program);
            write(&output, &serialize_program_with_header(&reduced, "red* applied"))?;
            println!("rules: {} -> {}", program.rules().len(), reduced.rules().len());
            Ok(0)
        }
        Command::Simulate { direction, input, proof, output, problem_out } => {
            simulate(direction, &input, &proof, &output, problem_out.as_deref())
        }
        Command::Bench { family, min, max, engine, csv, plotdata, summary, repeats, timeout, threads } => {
            let fam = Family::parse(&family).ok_or_else(|| usage(format!("unknown family `{family}`")))?;
            let mut spec = BenchSpec::new(fam, min, max, engine_config(&engine)?.with_proof(true));
            spec.repeats = repeats;
            spec.seed = engine.seed;
            spec.threads = threads;
            spec.timeout = seconds(timeout.or(env_timeout()?).unwrap_or(60.0))?;
            let records = experiment::bench_run(&spec).map_err(|e| usage(e.to_string()))?;
            write(&csv, &experiment::records_to_csv(&records))?;
            if let Some(path) = plotdata {
                write(&path, &experiment::plot_data(&records))?;
            }
            let rows = experiment::addred_summary(&records);
            if let Some(path) = summary {
                write(&path, &experiment::addred_csv(&rows))?;
            }
            println!("records: {}", records.len());
            if rows.is_empty() {
                print!("{}", experiment::scaling_report(&records).text());
            } else {
                print!("{}", experiment::addred_csv(&rows));
            }
            Ok(0)
        }
    }
}

fn gen(kind: &str, arg: &str, output: &Path, n: Option<usize>, p: Option<usize>, seed: u64) -> Res<u8> {
    let (program, header) = if kind == "addred" {
        let n = n.ok_or_else(|| usage("addred needs --n"))?;
        let p = p.ok_or_else(|| usage("addred needs --p"))?;
        let base = read_program(Path::new(arg))?;
        let out = families::add_random_redundancy(&base, n, p, seed).input()?;
        (out, format!("addred input={arg} n={n} p={p} seed={seed}"))
    } else {
        let fam = Family::parse(kind)
            .filter(|f| *f != Family::AddredPhp)
            .ok_or_else(|| usage(format!("unknown family `{kind}`")))?;
        let n: usize = arg.parse().map_err(|_| usage(format!("N must be a positive integer, got `{arg}`")))?;
        (fam.generate(n).map_err(|e| usage(e.to_string()))?, format!("family={kind} n={n}"))
    };
    write(output, &serialize_program_with_header(&program, &header))?;
    Ok(0)
}

fn simulate(dir: Direction, input: &Path, proof: &Path, output: &Path, problem_out: Option<&Path>) -> Res<u8> {
    let text = read(proof)?;
    match dir {
        Direction::Aspt2tres | Direction::Easpt2eres => {
            let program = read_program(input)?;
            let tab = parse_tableau_proof(&program, &text).input()?;
            let res = if dir == Direction::Aspt2tres {
                proofkit::aspt_to_tres(&program, &tab)
            } else {
                proofkit::easpt_to_eres(&program, &tab)
            }
            .input()?;
            write(output, &serialize_res_proof(&res))?;
            if let Some(path) = problem_out {
                write(path, &serialize_dimacs(&to_cnf(&program).0))?;
            }
            println!("steps: {}", res.size());
        }
        Direction::Tres2aspt | Direction::Eres2easpt => {
            let cnf = read_cnf(input)?;
            let res = parse_res_proof(&text).input()?;
            let tab = if dir == Direction::Tres2aspt {
                proofkit::tres_to_aspt(&cnf, &res)
            } else {
                proofkit::eres_to_easpt(&cnf, &res)
            }
            .input()?;
            let program = to_asp(&cnf).0;
            write(output, &serialize_tableau_proof(&program, &tab).input()?)?;
            if let Some(path) = problem_out {
                write(path, &serialize_program(&program))?;
            }
            println!("records: {}", aspt_core::tableau::proof_length(&tab));
        }
    }
    Ok(0)
}
