//! Batch driver: load a run configuration, run checks and constructions,
//! print a human summary and optionally a machine-readable JSON report.
//!
//! Exit codes: 0 positive verdict, 1 negative verdict or infeasible
//! construction, 2 input error (including oracle disagreement, which
//! indicates a bug and is reported loudly).

use clap::{Args, Parser, Subcommand};
use flagj::classify::{self, Seeds};
use flagj::gacs::{RootJ, Structure};
use flagj::io::{
    self, parse_config, resolve, ConfigFormat, OracleReport, RawConfig, Report, RootInfo,
    SurveyRow, TripleReport,
};
use flagj::liealg::{RegularElement, StructureConstants};
use flagj::nijenhuis::{self, BruteOptions};
use flagj::rootsystem::{AlgebraSpec, RootSystem};
use flagj::twisted::{self, InvariantThreeForm, OmegaIssue, SolveResult};
use flagj::FlagError;
use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "flagj", version, about = "Invariant generalized complex structures on maximal flag manifolds, exactly")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide integrability of a structure
    Check(RunArgs),
    /// Build the integrable structure attached to a theta set and seeds
    Construct(RunArgs),
    /// Twisted integrability, or synthesize the twisting form (--solve)
    Twist(TwistArgs),
    /// Enumerate theta sets and admissible complex sign patterns
    Survey(RunArgs),
    /// Dump the root system and structure constants
    Rootsys(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Algebra name such as A3 (overrides the config's algebra)
    #[arg(long)]
    algebra: Option<String>,
    /// Run configuration, JSON (or TOML by extension)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Cross-run the brute-force Nijenhuis oracle and fail loudly on any
    /// disagreement
    #[arg(long)]
    oracle: bool,
    /// Write the JSON report to this path
    #[arg(long)]
    json: Option<PathBuf>,
    /// Raise the rank cap of the brute-force oracle and the survey
    #[arg(long)]
    max_rank: Option<usize>,
}

#[derive(Args)]
struct TwistArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Synthesize the twisting 3-form instead of checking a given 2-form
    #[arg(long)]
    solve: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let code = match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    };
    eprintln!("elapsed: {:.3}s", started.elapsed().as_secs_f64());
    ExitCode::from(code)
}

fn exit_code_for(e: &FlagError) -> u8 {
    match e {
        FlagError::ZeroDenominator(_) | FlagError::SignTable(_) | FlagError::NotIntegrable => 1,
        _ => 2,
    }
}

fn dispatch(cli: &Cli) -> Result<u8, FlagError> {
    match &cli.command {
        Command::Check(args) => cmd_check(args),
        Command::Construct(args) => cmd_construct(args),
        Command::Twist(args) => cmd_twist(args),
        Command::Survey(args) => cmd_survey(args),
        Command::Rootsys(args) => cmd_rootsys(args),
    }
}

struct Loaded {
    rs: RootSystem,
    h: RegularElement,
    resolved: io::Resolved,
}

fn load(args: &RunArgs) -> Result<Loaded, FlagError> {
    let raw = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| FlagError::Parse(format!("{}: {e}", path.display())))?;
            let format = match path.extension().and_then(|e| e.to_str()) {
                Some("toml") => ConfigFormat::Toml,
                _ => ConfigFormat::Json,
            };
            parse_config(&text, format)?
        }
        None => RawConfig::default(),
    };
    let algebra = args
        .algebra
        .as_deref()
        .map(AlgebraSpec::parse)
        .transpose()?;
    let resolved = resolve(&raw, algebra)?;
    let rs = RootSystem::build(resolved.rs.spec)?;
    let h = resolved.h.clone();
    Ok(Loaded { rs, h, resolved })
}

fn constants(rs: &RootSystem) -> Result<StructureConstants, FlagError> {
    StructureConstants::build(rs)
}

fn brute_opts(args: &RunArgs) -> BruteOptions {
    BruteOptions {
        max_rank: args.max_rank.unwrap_or(4),
    }
}

fn write_report(args: &RunArgs, report: &Report) -> Result<(), FlagError> {
    if let Some(path) = &args.json {
        std::fs::write(path, report.to_json())
            .map_err(|e| FlagError::Parse(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn triple_reports(rs: &RootSystem, out: &classify::ClassifyOutcome) -> Vec<TripleReport> {
    out.failures
        .iter()
        .map(|(t, v)| TripleReport {
            triple: rs.triple_name(t),
            status: "obstructed".into(),
            case: v.case.into(),
            residuals: v
                .residuals
                .as_ref()
                .map(|(r1, r2)| [r1.to_string(), r2.to_string()]),
        })
        .collect()
}

fn positive_system_map(rs: &RootSystem, sel: &[bool]) -> BTreeMap<String, String> {
    sel.iter()
        .enumerate()
        .map(|(idx, &plus)| {
            (
                rs.root_name(idx),
                if plus { "+".to_string() } else { "-".to_string() },
            )
        })
        .collect()
}

fn run_oracle(
    loaded: &Loaded,
    sc: &StructureConstants,
    s: &Structure,
    classified: bool,
    args: &RunArgs,
) -> Result<OracleReport, FlagError> {
    let out = nijenhuis::is_integrable_bruteforce(&loaded.rs, sc, &loaded.h, s, brute_opts(args))?;
    let witness = out.witness.as_ref().map(|w| {
        let name = |l: &nijenhuis::EigLabel| format!("L({})[{}]", loaded.rs.root_name(l.root), l.member);
        format!(
            "nij({}, {}, {}) = {}",
            name(&w.labels[0]),
            name(&w.labels[1]),
            name(&w.labels[2]),
            w.value
        )
    });
    let rep = OracleReport {
        agreed: out.integrable == classified,
        integrable: out.integrable,
        witness,
    };
    if !rep.agreed {
        eprintln!(
            "ORACLE DISAGREEMENT: table says {}, brute force says {} — this is a bug",
            classified, out.integrable
        );
    }
    Ok(rep)
}

fn cmd_check(args: &RunArgs) -> Result<u8, FlagError> {
    let loaded = load(args)?;
    let rs = &loaded.rs;
    let s = loaded
        .resolved
        .structure
        .clone()
        .ok_or_else(|| FlagError::Parse("check needs a \"structure\" in the config".into()))?;

    let out = classify::is_integrable(rs, &s)?;
    let mut report = Report::new("check", &rs.spec.name());
    report.ok = out.integrable;
    report.verdict = if out.integrable {
        "integrable".into()
    } else {
        "obstructed".into()
    };
    report.triples = Some(triple_reports(rs, &out));

    println!("algebra {}: {}", rs.spec.name(), report.verdict);
    for f in report.triples.as_deref().unwrap_or(&[]) {
        match &f.residuals {
            Some([r1, r2]) => println!(
                "  triple {}: {} (residuals {}, {})",
                f.triple, f.case, r1, r2
            ),
            None => println!("  triple {}: {}", f.triple, f.case),
        }
    }

    if out.integrable {
        let td = classify::extract_theta(rs, &s)?;
        let names: Vec<String> = td.theta.iter().map(|&i| rs.root_name(i)).collect();
        println!("theta = {{{}}}", names.join(", "));
        report.theta = Some(names);
        let sel = classify::positive_system(rs, &s)?;
        report.positive_system = Some(positive_system_map(rs, &sel));
    }

    let mut code = if out.integrable { 0 } else { 1 };
    if args.oracle {
        let oracle = run_oracle(&loaded, &constants(rs)?, &s, out.integrable, args)?;
        if !oracle.agreed {
            code = 2;
        }
        report.oracle = Some(oracle);
    }
    write_report(args, &report)?;
    Ok(code)
}

fn cmd_construct(args: &RunArgs) -> Result<u8, FlagError> {
    let loaded = load(args)?;
    let rs = &loaded.rs;
    let theta = loaded
        .resolved
        .theta
        .clone()
        .ok_or_else(|| FlagError::Parse("construct needs \"theta\" in the config".into()))?;
    let seeds = loaded.resolved.seeds.clone().unwrap_or_default();
    let signs = loaded.resolved.signs.clone();

    let s = classify::construct_from_theta(rs, &theta, &seeds, signs.as_ref())?;
    let out = classify::is_integrable(rs, &s)?;

    let mut report = Report::new("construct", &rs.spec.name());
    report.ok = out.integrable;
    report.verdict = "constructed".into();
    report.structure = Some(io::structure_to_raw(rs, &s));
    let names: Vec<String> = theta.iter().map(|&i| rs.root_name(i)).collect();
    println!(
        "algebra {}: constructed structure for theta = {{{}}}",
        rs.spec.name(),
        names.join(", ")
    );
    for idx in 0..rs.num_positive() {
        println!("  {} -> {}", rs.root_name(idx), s.block(idx));
    }
    report.theta = Some(names);
    let sel = classify::positive_system(rs, &s)?;
    report.positive_system = Some(positive_system_map(rs, &sel));

    let mut code = 0;
    if args.oracle {
        let oracle = run_oracle(&loaded, &constants(rs)?, &s, out.integrable, args)?;
        if !oracle.agreed {
            code = 2;
        }
        report.oracle = Some(oracle);
    }
    write_report(args, &report)?;
    Ok(code)
}

const DOMEGA_NOTE: &str = "three-form values use dw(X_a, X_b, X_-(a+b)) = m_(a,b)*(w_a + w_b - w_(a+b)); some conventions insert an extra 1/12 prefactor here, this tool does not";

fn cmd_twist(targs: &TwistArgs) -> Result<u8, FlagError> {
    let args = &targs.run;
    let loaded = load(args)?;
    let rs = &loaded.rs;
    let sc = constants(rs)?;
    let s = loaded
        .resolved
        .structure
        .clone()
        .ok_or_else(|| FlagError::Parse("twist needs a \"structure\" in the config".into()))?;

    let mut report = Report::new("twist", &rs.spec.name());

    if targs.solve {
        match twisted::solve_omega(rs, &sc, &s)? {
            SolveResult::Feasible { omega3, potential } => {
                report.ok = true;
                report.verdict = "omega-integrable with the synthesized form".into();
                report.omega3 = Some(io::three_form_to_map(rs, &omega3));
                println!("algebra {}: twisting form found", rs.spec.name());
                for t in rs.zero_sum_triples() {
                    let v = omega3.value(t);
                    if !v.is_zero() {
                        println!("  Omega({}) = {}", rs.triple_name(t), v);
                    }
                }
                match &potential {
                    Some(w) => {
                        report.omega = Some(io::two_form_to_map(rs, w));
                        println!("  potential two-form recovered (d omega reproduces the twist)");
                    }
                    None => println!("  no diagonal potential reproduces the twist"),
                }
                report.notes.push(DOMEGA_NOTE.into());
                let mut code = 0;
                if args.oracle {
                    let agreed = twisted_oracle_agrees(rs, &sc, &loaded.h, &s, &omega3, true, args)?;
                    report.oracle = Some(OracleReport {
                        agreed,
                        integrable: true,
                        witness: None,
                    });
                    if !agreed {
                        code = 2;
                    }
                }
                write_report(args, &report)?;
                Ok(code)
            }
            SolveResult::Infeasible { triple, verdict } => {
                report.ok = false;
                report.verdict = "infeasible: obstructed triple not all non-complex".into();
                report.triples = Some(vec![TripleReport {
                    triple: rs.triple_name(&triple),
                    status: "obstructed".into(),
                    case: verdict.case.into(),
                    residuals: None,
                }]);
                println!(
                    "algebra {}: no twisting form exists (triple {} is {})",
                    rs.spec.name(),
                    rs.triple_name(&triple),
                    verdict.case
                );
                write_report(args, &report)?;
                Ok(1)
            }
        }
    } else {
        let w = loaded.resolved.omega.clone().unwrap_or_default();
        let omega3 = twisted::d_omega(rs, &sc, &w);
        let out = twisted::is_omega_integrable(rs, &sc, &s, &omega3)?;
        report.ok = out.ok;
        report.verdict = if out.ok {
            "omega-integrable".into()
        } else {
            "not omega-integrable".into()
        };
        report.omega3 = Some(io::three_form_to_map(rs, &omega3));
        let failures: Vec<TripleReport> = out
            .failures
            .iter()
            .map(|(t, issue)| match issue {
                OmegaIssue::Untwisted(v) => TripleReport {
                    triple: rs.triple_name(t),
                    status: "obstructed".into(),
                    case: v.case.into(),
                    residuals: None,
                },
                OmegaIssue::Mismatch { required, given } => TripleReport {
                    triple: rs.triple_name(t),
                    status: "obstructed".into(),
                    case: "omega-mismatch".into(),
                    residuals: Some([required.to_string(), given.to_string()]),
                },
            })
            .collect();
        println!("algebra {}: {}", rs.spec.name(), report.verdict);
        for f in &failures {
            match &f.residuals {
                Some([req, given]) => println!(
                    "  triple {}: {} (required {}, given {})",
                    f.triple, f.case, req, given
                ),
                None => println!("  triple {}: {}", f.triple, f.case),
            }
        }
        report.triples = Some(failures);
        let mut code = if out.ok { 0 } else { 1 };
        if args.oracle {
            let agreed = twisted_oracle_agrees(rs, &sc, &loaded.h, &s, &omega3, out.ok, args)?;
            report.oracle = Some(OracleReport {
                agreed,
                integrable: out.ok,
                witness: None,
            });
            if !agreed {
                code = 2;
            }
        }
        write_report(args, &report)?;
        Ok(code)
    }
}

fn twisted_oracle_agrees(
    rs: &RootSystem,
    sc: &StructureConstants,
    h: &RegularElement,
    s: &Structure,
    omega3: &InvariantThreeForm,
    verdict: bool,
    args: &RunArgs,
) -> Result<bool, FlagError> {
    if rs.rank() > brute_opts(args).max_rank {
        return Err(FlagError::RankCap {
            rank: rs.rank(),
            cap: brute_opts(args).max_rank,
        });
    }
    let basis = nijenhuis::eigenbasis_of(s, rs);
    let mut vanish = true;
    'outer: for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            for k in j + 1..basis.len() {
                if !twisted::nij_twisted(rs, sc, h, omega3, &basis[i].1, &basis[j].1, &basis[k].1)
                    .is_zero()
                {
                    vanish = false;
                    break 'outer;
                }
            }
        }
    }
    if vanish != verdict {
        eprintln!(
            "ORACLE DISAGREEMENT: twisted table says {verdict}, brute force says {vanish} — this is a bug"
        );
    }
    Ok(vanish == verdict)
}

fn cmd_survey(args: &RunArgs) -> Result<u8, FlagError> {
    let loaded = load(args)?;
    let rs = &loaded.rs;
    let cap = args.max_rank.unwrap_or(4);
    if rs.rank() > cap {
        return Err(FlagError::RankCap {
            rank: rs.rank(),
            cap,
        });
    }
    let sc = constants(rs)?;
    let rank = rs.rank();
    let n = rs.num_positive();

    let mut rows = Vec::new();
    println!("algebra {}: theta survey", rs.spec.name());
    for mask in 0..(1u32 << rank) {
        let theta: BTreeSet<usize> = (0..rank).filter(|i| mask & (1 << i) != 0).collect();
        let closure = rs.theta_closure(&theta);
        let free: Vec<usize> = (0..n).filter(|i| !closure.contains(i)).collect();

        // generic positive seeds for the non-complex part
        let mut seeds = Seeds::new();
        for &i in &theta {
            seeds.insert(i, (flagj::scalar::rat_i(i as i64), flagj::scalar::rat_i(i as i64 + 2)));
        }
        let base = classify::construct_from_theta(rs, &theta, &seeds, None)?;

        let total: u64 = 1u64 << free.len();
        let mut admissible: u64 = 0;
        for bits in 0..total {
            let mut s = base.clone();
            for (pos, &idx) in free.iter().enumerate() {
                s.set_block(idx, RootJ::complex(bits & (1 << pos) != 0));
            }
            let ok = classify::is_integrable(rs, &s)?.integrable;
            if ok {
                admissible += 1;
                if args.oracle {
                    let out =
                        nijenhuis::is_integrable_bruteforce(rs, &sc, &loaded.h, &s, brute_opts(args))?;
                    if !out.integrable {
                        eprintln!("ORACLE DISAGREEMENT in survey at theta mask {mask} pattern {bits}");
                        return Err(FlagError::Internal(
                            "survey pattern accepted by the table but rejected by the oracle".into(),
                        ));
                    }
                }
            }
        }

        let names: Vec<String> = theta.iter().map(|&i| rs.root_name(i)).collect();
        println!(
            "  theta = {{{}}}: closure {} roots, {}/{} sign patterns admissible",
            names.join(", "),
            closure.len(),
            admissible,
            total
        );
        rows.push(SurveyRow {
            theta: names,
            closure_size: closure.len(),
            admissible_patterns: admissible,
            total_patterns: total,
        });
    }

    let mut report = Report::new("survey", &rs.spec.name());
    report.ok = true;
    report.verdict = "survey".into();
    report.survey = Some(rows);
    write_report(args, &report)?;
    Ok(0)
}

fn cmd_rootsys(args: &RunArgs) -> Result<u8, FlagError> {
    let loaded = load(args)?;
    let rs = &loaded.rs;
    let sc = constants(rs)?;

    let mut report = Report::new("rootsys", &rs.spec.name());
    report.ok = true;
    report.verdict = "ok".into();

    println!(
        "algebra {}: rank {}, {} positive roots, {} zero-sum triples",
        rs.spec.name(),
        rs.rank(),
        rs.num_positive(),
        rs.zero_sum_triples().len()
    );
    let roots: Vec<RootInfo> = (0..rs.num_positive())
        .map(|idx| {
            let info = RootInfo {
                name: rs.root_name(idx),
                height: rs.height(idx),
                coeffs: rs.root(idx).coeffs.clone(),
                length_sq: rs.len_sq(idx).to_string(),
            };
            println!(
                "  {:<12} height {:<2} length^2 {}",
                info.name, info.height, info.length_sq
            );
            info
        })
        .collect();
    report.roots = Some(roots);

    let mut constants_map = BTreeMap::new();
    for (t, m) in sc.positive_pairs(rs) {
        let key = format!("{},{}", rs.root_name(t.a), rs.root_name(t.b));
        println!("  m({key}) = {m}");
        constants_map.insert(key, m.to_string());
    }
    report.constants = Some(constants_map);

    write_report(args, &report)?;
    Ok(0)
}
