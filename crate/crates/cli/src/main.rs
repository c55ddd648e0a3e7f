mod svg;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use decagon::dynamics::OrbitRecord;
use decagon::geometry::decagon;
use decagon::partition::{periodic_fraction_x, Color, Partitioner};
use decagon::periods::{enumerate_periods, series_b2, witnesses};
use decagon::selfsim::{aperiodic_point, Tower};
use decagon::suites::{self, SuiteConfig};
use decagon::{CycNum, MapChoice, Rational, Table};

use svg::Shape;

#[derive(Parser)]
#[command(name = "decagon", version, about = "Exact outer billiard outside the regular decagon")]
struct Cli {
    /// Write output to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Json,
    Csv,
    Svg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MapArg {
    #[value(name = "T", alias = "t")]
    T,
    #[value(name = "Tinv", alias = "t-inv")]
    TInv,
    #[value(name = "Tprime", alias = "t-prime")]
    TPrime,
    /// the quadrilateral map (X, f)
    #[value(name = "f")]
    F,
}

#[derive(Subcommand)]
enum Command {
    /// Exact orbit of a point
    Orbit {
        /// Four comma- or semicolon-separated rationals, coefficients of 1, ζ, ζ², ζ³
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        point: CycNum,
        #[arg(long, value_enum, default_value = "T")]
        map: MapArg,
        #[arg(long, default_value_t = 1_000_000)]
        cap: usize,
        #[arg(long, value_enum, default_value = "json")]
        emit: Emit,
    },
    /// Run verification suites
    Verify {
        /// exact-cyclotomic, billiard-core, return-systems, self-similarity,
        /// period-calculus, measure-partitions or all
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1_000_000)]
        cap: usize,
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
        #[arg(long, default_value_t = 8)]
        nesting: usize,
        #[arg(long, default_value_t = 6)]
        levels: usize,
        #[arg(long, default_value_t = 1000)]
        limit: u64,
    },
    /// Enumerate the period set, or test one value
    Periods {
        #[arg(long, default_value_t = 1000)]
        limit: u64,
        /// Membership of one value, with witnesses
        #[arg(long)]
        check: Option<u64>,
        #[arg(long, value_enum, default_value = "csv")]
        emit: Emit,
    },
    /// Certify the aperiodic point
    Aperiodic {
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
        #[arg(long, default_value_t = 8)]
        nesting: usize,
        #[arg(long, value_enum, default_value = "json")]
        emit: Emit,
    },
    /// Red/green partition of X at one level
    Partition {
        #[arg(long, default_value_t = 2)]
        level: usize,
        #[arg(long, value_enum, default_value = "json")]
        emit: Emit,
    },
    /// SVG of the table, the pieces αᵢ near A₁ and the polygons βᵢ
    Overlay,
    /// Periodic fraction of seeded samples of X
    Measure {
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 1_000_000)]
        cap: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        emit: Emit,
    },
}

fn parse_point(s: &str) -> Result<CycNum, String> {
    s.replace(';', ",").parse().map_err(|e| format!("{e}"))
}

struct Output {
    body: String,
    ok: bool,
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn unsupported(what: &str, emit: Emit) -> Result<Output, String> {
    let name = match emit {
        Emit::Json => "json",
        Emit::Csv => "csv",
        Emit::Svg => "svg",
    };
    Err(format!("{what} cannot be emitted as {name}"))
}

fn orbit_csv(rec: &OrbitRecord) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["step", "kind", "z", "sector", "symbol"]).unwrap();
    for (i, s) in rec.steps.iter().enumerate() {
        w.write_record([i.to_string(), "step".into(), s.z.to_string(), s.sector.to_string(), s.symbol.to_string()])
            .unwrap();
    }
    let (kind, step) = match rec.halt {
        decagon::Halt::Boundary { step } => ("boundary", step),
        decagon::Halt::Period { step } => ("period", step),
        decagon::Halt::Cap { step } => ("cap", step),
    };
    w.write_record([step.to_string(), kind.into(), String::new(), String::new(), String::new()])
        .unwrap();
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

fn tower(t: &Table) -> Result<Tower, String> {
    Tower::build(t).map_err(|e| e.to_string())
}

fn run(cmd: Command) -> Result<Output, String> {
    let t = Table::new();
    match cmd {
        Command::Orbit { point, map, cap, emit } => {
            let rec = match map {
                MapArg::T => t.orbit(&point, MapChoice::T, cap),
                MapArg::TInv => t.orbit(&point, MapChoice::TInverse, cap),
                MapArg::TPrime => t.orbit(&point, MapChoice::TPrime, cap),
                MapArg::F => tower(&t)?.x().f.orbit(&point, cap),
            };
            let body = match emit {
                Emit::Json => pretty(&rec),
                Emit::Csv => orbit_csv(&rec),
                Emit::Svg => return unsupported("an orbit", emit),
            };
            Ok(Output { body, ok: true })
        }
        Command::Verify { suite, samples, seed, cap, steps, nesting, levels, limit } => {
            let cfg = SuiteConfig { samples, seed, cap, steps, nesting, levels, limit };
            let mut rep = suites::run(&suite, &cfg).ok_or_else(|| {
                format!("unknown suite {suite}; expected one of {} or all", suites::SUITES.join(", "))
            })?;
            rep.sort();
            Ok(Output { ok: rep.ok(), body: pretty(&rep) })
        }
        Command::Periods { limit, check, emit } => {
            if let Some(n) = check {
                let ws = witnesses(&series_b2(), n);
                let v = json!({ "period": n, "member": !ws.is_empty(), "witnesses": ws });
                return match emit {
                    Emit::Json => Ok(Output { body: pretty(&v), ok: true }),
                    _ => unsupported("a membership check", emit),
                };
            }
            let map = enumerate_periods(limit);
            let body = match emit {
                Emit::Json => pretty(&map.values().collect::<Vec<_>>()),
                Emit::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(["period", "series", "k", "l"]).unwrap();
                    for e in map.values() {
                        for wt in &e.witnesses {
                            w.write_record([e.period.to_string(), wt.series.clone(), wt.k.to_string(), wt.l.to_string()])
                                .unwrap();
                        }
                    }
                    String::from_utf8(w.into_inner().unwrap()).unwrap()
                }
                Emit::Svg => return unsupported("the period set", emit),
            };
            Ok(Output { body, ok: true })
        }
        Command::Aperiodic { steps, nesting, emit } => {
            if emit != Emit::Json {
                return unsupported("a certificate", emit);
            }
            let tw = tower(&t)?;
            let cert = aperiodic_point(tw.x(), &tw.gamma, nesting, steps).map_err(|e| e.to_string())?;
            Ok(Output { ok: cert.report.ok(), body: pretty(&cert) })
        }
        Command::Partition { level, emit } => {
            if level == 0 {
                return Err("levels start at 1".into());
            }
            let p = Partitioner::new(&tower(&t)?).map_err(|e| e.to_string())?;
            let part = p.level(level);
            match emit {
                Emit::Json => {
                    let (red, green) = p.areas(&part);
                    let cells: Vec<_> = part
                        .cells
                        .iter()
                        .map(|c| json!({ "cell": c, "vertices": p.region(c).vertices() }))
                        .collect();
                    let v = json!({
                        "level": part.level,
                        "red_area": red,
                        "green_area": green,
                        "total_area": p.total_area(),
                        "red": part.count(Color::Red),
                        "green": part.count(Color::Green),
                        "cells": cells,
                    });
                    Ok(Output { body: pretty(&v), ok: true })
                }
                Emit::Svg => {
                    let shapes: Vec<Shape> = part
                        .cells
                        .iter()
                        .map(|c| {
                            let r = p.region(c);
                            let (fill, class) = match c.color {
                                Color::Red => (svg::RED, "red"),
                                Color::Green => (svg::GREEN, "green"),
                            };
                            Shape::new(r.vertices().unwrap_or(&[]), fill, class)
                        })
                        .collect();
                    Ok(Output { body: svg::document(&shapes), ok: true })
                }
                Emit::Csv => unsupported("a partition", emit),
            }
        }
        Command::Overlay => {
            let window = decagon(t.vertex(1), &Rational::from_integer(5.into()));
            let table = decagon(&CycNum::zero(), &Rational::from_integer(1.into()));
            let mut shapes = vec![Shape::new(table.vertices().unwrap(), svg::TABLE, "table")];
            for i in 1..=5 {
                let piece = window.intersect(t.alpha(i)).map_err(|e| e.to_string())?;
                if let Some(r) = piece {
                    shapes.push(Shape::new(r.vertices().unwrap(), "none", &format!("alpha{i}")));
                }
            }
            for i in 1..=4 {
                let b = t.beta(i).map_err(|e| e.to_string())?;
                shapes.push(Shape::new(&b.labels, svg::GREEN, &format!("beta{i}")));
            }
            Ok(Output { body: svg::document(&shapes), ok: true })
        }
        Command::Measure { samples, cap, seed, emit } => {
            if emit != Emit::Json {
                return unsupported("a measurement", emit);
            }
            let tw = tower(&t)?;
            let r = periodic_fraction_x(tw.x(), samples, cap, seed);
            let v = json!({
                "samples": r.samples,
                "cap": cap,
                "seed": seed,
                "periodic": r.periodic,
                "boundary": r.boundary,
                "undecided": r.undecided,
                "periodic_fraction": r.periodic_fraction(),
                "boundary_fraction": r.boundary_fraction(),
                "periods": r.periods,
            });
            Ok(Output { body: pretty(&v), ok: true })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.out {
        Some(path) => fs::write(path, &out.body),
        None => io::stdout().lock().write_all(out.body.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(3);
    }
    if out.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
