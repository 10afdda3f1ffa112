use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use wheeler_core::analytics::{export_trajectory, parse_log, session_metrics, summarize};
use wheeler_core::cost::{compare, CostParams, CostReport, EdgeKind};
use wheeler_core::device::DeviceConfig;
use wheeler_core::hnav::HnavEngine;
use wheeler_core::model::{Scene, UiTree};
use wheeler_core::movement::MoveSpec;
use wheeler_core::replay::{parse_script, run_script, write_log, ReplaySetup};

use crate::{AnalyzeArgs, CostArgs, MtArgs, SimArgs};

fn read(path: &Path, what: &str) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {what} {}", path.display()))
}

fn load_tree(path: &Path) -> Result<UiTree> {
    UiTree::parse(&read(path, "tree")?).with_context(|| format!("tree {}", path.display()))
}

pub fn sim(args: &SimArgs, config: DeviceConfig) -> Result<()> {
    let tree = args.tree.as_deref().map(load_tree).transpose()?;
    let scene = match &args.scene {
        Some(p) => Scene::parse(&read(p, "scene")?).with_context(|| format!("scene {}", p.display()))?,
        None => Scene::default(),
    };
    let script = parse_script(&read(&args.script, "script")?)
        .with_context(|| format!("script {}", args.script.display()))?;
    if args.focus.is_some() && tree.is_none() {
        bail!("--focus needs --tree");
    }
    let setup = ReplaySetup {
        config,
        tree: tree.as_ref(),
        scene: &scene,
        focus: args.focus.as_deref(),
    };
    let log = write_log(&run_script(&setup, &script)?);
    match &args.out {
        Some(p) => fs::write(p, log).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{log}"),
    }
    Ok(())
}

fn route(r: &CostReport) -> String {
    let moves: Vec<String> = r
        .steps
        .iter()
        .map(|s| {
            let arrow = if s.kind == EdgeKind::Teleport { "=>" } else { "->" };
            match s.wheel {
                Some(w) if s.kind != EdgeKind::Teleport => format!("[w{w}] {} {arrow} {}", s.from, s.to),
                _ => format!("{} {arrow} {}", s.from, s.to),
            }
        })
        .collect();
    if moves.is_empty() {
        "(already there)".into()
    } else {
        moves.join(", ")
    }
}

pub fn cost(args: &CostArgs) -> Result<()> {
    let tree = load_tree(&args.tree)?;
    let params = match args.level_shift {
        Some(l) => CostParams::with_level_shift(args.alpha, args.beta, args.gamma, l)?,
        None => CostParams::new(args.alpha, args.beta, args.gamma)?,
    };
    let start = HnavEngine::new(&tree, false)
        .focusing(&args.from)
        .with_context(|| format!("start node {:?}", args.from))?;
    let c = compare(&tree, &start, &args.from, &args.to, &params)?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&c)?);
        return Ok(());
    }
    println!("{} -> {}  (α={}, β={}, γ={})", args.from, args.to, params.alpha, params.beta, params.gamma);
    println!("{:<10}{:<20}{}", "keyboard", c.keyboard.to_string(), c.keyboard.path.join(" -> "));
    println!("{:<10}{:<20}{}", "wheeler", c.wheeler.to_string(), route(&c.wheeler));
    println!("{:<10}{}", "ratio", c.ratio);
    Ok(())
}

pub fn mt(args: &MtArgs) -> Result<()> {
    let mut spec = MoveSpec::new(args.a1, args.a2, args.w, args.k);
    if let Some(s) = args.s {
        spec.s = s;
    }
    let r = spec.report()?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&r)?);
        return Ok(());
    }
    let rows = [
        ("A", r.a),
        ("theta", r.theta),
        ("ID", r.id),
        ("ID_manhattan", r.id_manhattan),
        ("t1", r.t1),
        ("t2", r.t2),
        ("T_rec", r.t_rec),
        ("T_shortest", r.t_shortest),
        ("ΔT", r.delta_t),
        ("s", r.s_fitts),
        ("s_manhattan", r.s_manhattan),
        ("T_rec_speed", r.t_rec_speed),
        ("excess_px", r.excess_px),
    ];
    for (name, v) in rows {
        println!("{name:<13}{v:.4}");
    }
    Ok(())
}

fn opt(v: Option<f64>, digits: usize) -> String {
    v.map_or_else(|| "-".into(), |x| format!("{x:.digits$}"))
}

pub fn analyze(args: &AnalyzeArgs) -> Result<()> {
    let text = read(&args.log, "log")?;
    let log = parse_log(&text).with_context(|| format!("log {}", args.log.display()))?;
    let metrics = session_metrics(&log);
    if let Some(n) = args.trajectory {
        let Some(m) = metrics.get(n) else {
            bail!("log has {} trials, no trial {n}", metrics.len());
        };
        let poly = export_trajectory(m);
        if args.csv {
            print!("{}", poly.to_csv());
        } else {
            println!("{}", poly.to_json());
        }
        return Ok(());
    }
    let summary = summarize(&metrics);
    if args.json {
        let doc = serde_json::json!({ "trials": metrics, "summary": summary });
        println!("{}", serde_json::to_string_pretty(&doc)?);
        return Ok(());
    }
    let mut out = String::new();
    writeln!(out, "{:<4}{:<16}{:>12}{:>8}{:>8}{:>12}{:>8}", "#", "target", "time_s", "probes", "speed±", "mean_speed", "events")?;
    for (i, m) in metrics.iter().enumerate() {
        let time = if m.timed_out { "timeout".to_string() } else { opt(m.completion_s, 2) };
        writeln!(
            out,
            "{:<4}{:<16}{:>12}{:>8}{:>8}{:>12.2}{:>8}",
            i, m.target, time, m.probe_count, m.speed_change_count, m.mean_speed, m.event_count
        )?;
    }
    writeln!(
        out,
        "{} trials, {} timed out, mean time {} s, {} probes, {} speed changes, mean speed {}",
        summary.trials,
        summary.timeouts,
        opt(summary.mean_completion_s, 2),
        summary.total_probes,
        summary.total_speed_changes,
        opt(summary.mean_speed, 2),
    )?;
    print!("{out}");
    Ok(())
}
