//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criterion 5 states `s = 1.5492` for (A1, A2, W) = (3, 4, 1), which is not
//! what `s = sqrt(2 A1 A2 / (A W))` gives (`sqrt(24/5) = 2.1909`); 1.5492 is
//! `sqrt(2.4)`, the same expression without the factor 2. Using 1.5492 would
//! break the `T_rec_speed(s) = T_shortest` identity of criterion 4, so that
//! line is expected to stay red. The run fails on any other red line, and on
//! criterion 5 turning green without this note being revisited.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, LN_2, SQRT_2};
use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::Rng;
use wheeler_core::analytics::fit_power_law;
use wheeler_core::cost::{keyboard_min_cost, wheeler_min_cost, CostParams, EdgeKind};
use wheeler_core::device::{dispatch, DeviceConfig, DeviceState};
use wheeler_core::event::{Button, FeedbackEvent, InputEvent, InputKind, Mode};
use wheeler_core::fixtures;
use wheeler_core::flat::{FlatEngine, FlatState};
use wheeler_core::hnav::HnavEngine;
use wheeler_core::model::Scene;
use wheeler_core::movement::{delta_t, speedup_fitts, speedup_manhattan, t_rect_speed, MoveSpec};
use wheeler_core::replay::{parse_script, run_script, LogRecord, ReplaySetup};

const EXPECTED_RED: &[u8] = &[5];

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict { ok, detail: detail.into() }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn worked_cost() -> Verdict {
    let clock = Instant::now();
    let tree = fixtures::cost_tree();
    let p = CostParams::new(1.0, 2.0, 1.0).unwrap();
    let kb = keyboard_min_cost(&tree, "7", "17", &p).unwrap();
    let start = HnavEngine::new(&tree, false).focusing("7").unwrap();
    let wh = wheeler_min_cost(&tree, &start, "17", &p).unwrap();
    let elapsed = clock.elapsed();
    let kb_ok = (kb.counts.get(EdgeKind::Forward), kb.counts.get(EdgeKind::Backward), kb.counts.get(EdgeKind::Cross))
        == (3, 1, 2)
        && kb.total == 7.0;
    let wh_ok = wh.counts.get(EdgeKind::Cross) == 2
        && wh.counts.get(EdgeKind::Forward) + wh.counts.get(EdgeKind::Backward) + wh.counts.get(EdgeKind::LevelShift) == 0
        && wh.total == 2.0;
    verdict(
        kb_ok && wh_ok && elapsed.as_secs_f64() < 1.0,
        format!("keyboard {kb}, wheeler {wh} in {:.1} ms", elapsed.as_secs_f64() * 1e3),
    )
}

fn three_turns() -> Verdict {
    let tree = fixtures::menu_tree();
    let scene = Scene::default();
    let setup = ReplaySetup {
        config: DeviceConfig::default(),
        tree: Some(&tree),
        scene: &scene,
        focus: Some("c.2"),
    };
    let log = run_script(&setup, &parse_script(fixtures::THREE_TURNS).unwrap()).unwrap();
    let seen: Vec<String> = log
        .iter()
        .filter_map(|r| match r {
            LogRecord::State(s) => Some(s.snapshot.hnav.triple().map(|c| c.unwrap_or("-")).join(",")),
            _ => None,
        })
        .collect();
    let want = ["a.1,b.1,c.2", "a.2,b.3,c.5", "a.2,b.4,c.7", "a.2,b.4,c.8"];
    verdict(seen == want, seen.join(" -> "))
}

fn oracles() -> Verdict {
    let clock = Instant::now();
    let w = support::wheeler_oracle(2024, 300);
    let k = support::keyboard_oracle(2025, 300, 12);
    let secs = clock.elapsed().as_secs_f64();
    verdict(
        w.mismatches == 0 && k.mismatches == 0 && secs < 60.0,
        format!(
            "wheeler {}/{} over 300 trees, keyboard {}/{} over 300 trees, {:.1} s",
            w.cases - w.mismatches,
            w.cases,
            k.cases - k.mismatches,
            k.cases,
            secs
        ),
    )
}

fn movement_identities() -> Verdict {
    let mut rng = support::rng(99);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let w = rng.gen_range(1.0..100.0);
        let (a1, a2) = (w * rng.gen_range(1.0..=1000.0), w * rng.gen_range(1.0..=1000.0));
        let k = rng.gen_range(0.05..20.0);
        let r = MoveSpec::new(a1, a2, w, k).report().unwrap();
        let s = speedup_fitts(a1, a2, w).unwrap();
        worst = worst
            .max(rel(r.t_rec, r.t1 + r.t2))
            .max(rel(r.delta_t, r.t_rec - r.t_shortest))
            .max(rel(t_rect_speed(a1, a2, w, k, s).unwrap(), r.t_shortest));
    }
    let (a, w) = (300.0, 10.0);
    let grid: Vec<f64> = (1..=1000).map(|i| i as f64 * FRAC_PI_2 / 1000.0).collect();
    let dts: Vec<f64> = grid
        .iter()
        .map(|t| delta_t(a * t.cos(), a * t.sin(), w, 1.0).unwrap())
        .collect();
    let best = (0..dts.len()).max_by(|&i, &j| dts[i].total_cmp(&dts[j])).unwrap();
    let argmax_ok = grid[best] == FRAC_PI_4;
    let sm = speedup_manhattan(FRAC_PI_4).unwrap();
    let sm_ok = rel(sm, SQRT_2) <= 1e-12;
    verdict(
        worst <= 1e-12 && argmax_ok && sm_ok,
        format!(
            "worst relative error {worst:.1e} over 10000 inputs, argmax θ = {:.6} (π/4 = {FRAC_PI_4:.6}), s(π/4) - √2 = {:.1e}",
            grid[best],
            sm - SQRT_2
        ),
    )
}

#[allow(clippy::approx_constant)]
fn worked_point() -> Verdict {
    let r = MoveSpec::new(3.0, 4.0, 1.0, LN_2).report().unwrap();
    let stated = [("T_rec", r.t_rec, 5.5850), ("T_shortest", r.t_shortest, 3.3219), ("ΔT", r.delta_t, 2.2630), ("s", r.s_fitts, 1.5492)];
    let misses: Vec<String> = stated
        .iter()
        .filter(|(_, got, want)| (got - want).abs() > 1e-3)
        .map(|(name, got, want)| format!("{name} = {got:.4}, stated {want}"))
        .collect();
    let derived_ok = (r.s_fitts - (24.0f64 / 5.0).sqrt()).abs() < 1e-12;
    let shown = format!(
        "T_rec {:.4}, T_shortest {:.4}, ΔT {:.4}, s {:.4}",
        r.t_rec, r.t_shortest, r.delta_t, r.s_fitts
    );
    if misses.is_empty() {
        verdict(true, shown)
    } else {
        verdict(
            false,
            format!(
                "{shown}; mismatch: {}; s = √(2·3·4/(5·1)) = √4.8 = 2.1909 {} and keeps T_rec_speed(s) = T_shortest; 1.5492 = √2.4",
                misses.join(", "),
                if derived_ok { "holds" } else { "does NOT hold" }
            ),
        )
    }
}

fn probe() -> Verdict {
    let scene = Scene::blank(1366, 768);
    let cfg = DeviceConfig::default();
    let state = FlatState { x: 410.0, y: 77.0, ..FlatState::new(&cfg) };
    let ev = FlatEngine::new(&scene, &cfg).probe(&state);
    let text = match &ev {
        FeedbackEvent::LocationAnnouncement { text, .. } => text.clone(),
        _ => String::new(),
    };
    verdict(text == "30% from the left and 10% from the top", format!("{text:?}"))
}

/// What a table row is allowed to change.
#[derive(Debug, PartialEq)]
enum Category {
    HnavMove,
    LevelShift,
    FlatMove,
    Speed,
    Tnav,
    Announce,
    Click(Button),
    ModeSwitch,
}

fn classify(before: &DeviceState, after: &DeviceState, fb: &[FeedbackEvent]) -> Option<Category> {
    let hnav = before.hnav != after.hnav;
    let flat_pos = (before.flat.x, before.flat.y) != (after.flat.x, after.flat.y);
    let speed = before.flat.speed != after.flat.speed;
    let mode = before.mode != after.mode;
    let tnav = before.tnav_active != after.tnav_active;
    let speech = |s: &str| fb.iter().any(|e| *e == FeedbackEvent::speech(s));
    match (hnav, flat_pos, speed, mode, tnav) {
        (true, false, false, false, false) if fb.iter().any(|e| matches!(e, FeedbackEvent::Speech { text } if text.starts_with("Level "))) => {
            Some(Category::LevelShift)
        }
        (true, false, false, false, false) if fb.contains(&FeedbackEvent::Haptic) => Some(Category::HnavMove),
        (false, true, false, false, false) if fb.iter().any(|e| matches!(e, FeedbackEvent::TwoTone { .. })) => Some(Category::FlatMove),
        (false, false, true, false, false) if fb.iter().any(|e| matches!(e, FeedbackEvent::SpeedChanged { .. })) => Some(Category::Speed),
        (false, false, false, false, true) if speech("T-nav on") || speech("T-nav off") => Some(Category::Tnav),
        (false, false, false, true, _) if speech("H-nav mode") || speech("2D-nav mode") => Some(Category::ModeSwitch),
        (false, false, false, false, false) => match fb {
            [FeedbackEvent::LocationAnnouncement { .. }] => Some(Category::Announce),
            [FeedbackEvent::Activation { button, .. }] => Some(Category::Click(*button)),
            _ => None,
        },
        _ => None,
    }
}

fn dispatcher() -> Verdict {
    let tree = fixtures::depth4_tree();
    let scene = fixtures::grid_scene();
    let hnav = DeviceState::new(DeviceConfig::default(), Some(&tree)).unwrap();
    let mut flat = hnav.clone();
    flat.mode = Mode::Flat;
    (flat.flat.x, flat.flat.y) = (300.0, 300.0);
    let mut hnav_mid = hnav.clone();
    hnav_mid.hnav = HnavEngine::new(&tree, false).focusing("n4").unwrap();
    let rows: Vec<(&DeviceState, InputKind, Category)> = vec![
        (&hnav, InputKind::rotate(1, 1), Category::HnavMove),
        (&hnav, InputKind::rotate(2, 1), Category::HnavMove),
        (&hnav_mid, InputKind::rotate(3, 1), Category::HnavMove),
        (&hnav, InputKind::CtrlPrimary, Category::LevelShift),
        (&hnav_mid, InputKind::CtrlSecondary, Category::LevelShift),
        (&flat, InputKind::rotate(1, 1), Category::FlatMove),
        (&flat, InputKind::rotate(2, 1), Category::FlatMove),
        (&flat, InputKind::rotate(3, 1), Category::Speed),
        (&flat, InputKind::SecondaryHold { duration_ms: 300 }, Category::Tnav),
        (&flat, InputKind::CtrlPress, Category::Announce),
        (&hnav, InputKind::PrimaryPress, Category::Click(Button::Primary)),
        (&flat, InputKind::SecondaryPress, Category::Click(Button::Secondary)),
        (&hnav, InputKind::CtrlBothButtons, Category::ModeSwitch),
    ];
    let mut bad = Vec::new();
    for (i, (s, kind, want)) in rows.iter().enumerate() {
        let (n, fb) = dispatch(s, &InputEvent::new(1, kind.clone()), Some(&tree), &scene).unwrap();
        let got = classify(s, &n, &fb);
        if got.as_ref() != Some(want) {
            bad.push(format!("row {} gave {got:?}", i + 1));
        }
    }
    // Row 11-13 also apply in the other mode.
    for (s, kind, want) in [
        (&flat, InputKind::PrimaryPress, Category::Click(Button::Primary)),
        (&hnav, InputKind::SecondaryPress, Category::Click(Button::Secondary)),
        (&flat, InputKind::CtrlBothButtons, Category::ModeSwitch),
    ] {
        let (n, fb) = dispatch(s, &InputEvent::new(1, kind.clone()), Some(&tree), &scene).unwrap();
        if classify(s, &n, &fb).as_ref() != Some(&want) {
            bad.push(format!("{kind:?} in {:?}", s.mode));
        }
    }

    let menu = fixtures::menu_tree();
    let mut rng = support::rng(7);
    let mut violations = 0;
    for _ in 0..10_000 {
        let mut s = DeviceState::new(DeviceConfig::default(), Some(&menu)).unwrap();
        for t in 0..rng.gen_range(0..40) {
            s = dispatch(&s, &support::random_input(&mut rng, t), Some(&menu), &scene).unwrap().0;
            if s.tnav_active && s.mode != Mode::Flat {
                violations += 1;
            }
        }
        let toggle = InputEvent::new(s.clock_ms, InputKind::CtrlBothButtons);
        let once = dispatch(&s, &toggle, Some(&menu), &scene).unwrap().0;
        let twice = dispatch(&once, &toggle, Some(&menu), &scene).unwrap().0;
        if (twice.mode, &twice.hnav, &twice.flat) != (s.mode, &s.hnav, &s.flat) {
            violations += 1;
        }
    }
    verdict(
        bad.is_empty() && violations == 0,
        format!("13 rows checked, {} wrong {bad:?}; 10000 fuzz streams, {violations} violations", bad.len()),
    )
}

fn teleport() -> Verdict {
    let t = support::teleport_oracle(31, 1000);
    let runs = support::teleport_runs(32, 1000);
    verdict(
        t.mismatches == 0 && runs.mismatches == 0,
        format!(
            "{}/{} cases match brute force; {}/{} +X runs end within |elements| hops",
            t.cases - t.mismatches,
            t.cases,
            runs.cases - runs.mismatches,
            runs.cases
        ),
    )
}

fn power_law() -> Verdict {
    let sample = |a: f64, b: f64| -> Vec<(f64, f64)> { (1..=6).map(|x| (x as f64, a * (x as f64).powf(b))).collect() };
    let fit = fit_power_law(&sample(124.28, -0.42)).unwrap();
    let reference_ok = (fit.a - 124.28).abs() < 1e-6 && (fit.b + 0.42).abs() < 1e-6 && (fit.r2 - 1.0).abs() < 1e-6;
    let mut rng = support::rng(5);
    let mut misses = 0;
    for _ in 0..1000 {
        let (a, b) = (rng.gen_range(1.0..=1000.0), rng.gen_range(-2.0..=0.0));
        let f = fit_power_law(&sample(a, b)).unwrap();
        if (f.a - a).abs() > 1e-6 || (f.b - b).abs() > 1e-6 || (f.r2 - 1.0).abs() > 1e-6 {
            misses += 1;
        }
    }
    verdict(
        reference_ok && misses == 0,
        format!("a = {:.6}, b = {:.6}, r² = {:.9}; {misses}/1000 random (a, b) missed", fit.a, fit.b, fit.r2),
    )
}

fn replay_determinism() -> Verdict {
    let dir = std::env::temp_dir().join(format!("wheeler-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut rng = support::rng(17);
    let mut script = String::new();
    for t in 0..3000 {
        script.push_str(&serde_json::to_string(&support::random_input(&mut rng, t * 7)).unwrap());
        script.push('\n');
    }
    let script_path = dir.join("script.jsonl");
    std::fs::write(&script_path, script).unwrap();
    let fixture = |n: &str| format!("{}/../core/fixtures/{n}", env!("CARGO_MANIFEST_DIR"));
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_wheeler"))
            .args(["sim", "--tree", &fixture("menu_tree.json"), "--scene", &fixture("grid_scene.json")])
            .arg("--script")
            .arg(&script_path)
            .env_remove("WHEELER_CONFIG")
            .output()
            .unwrap()
    };
    let (a, b) = (run(), run());
    let ok = a.status.success() && b.status.success() && !a.stdout.is_empty() && a.stdout == b.stdout;
    verdict(ok, format!("two runs over 3000 inputs, {} and {} bytes, identical: {}", a.stdout.len(), b.stdout.len(), a.stdout == b.stdout))
}

type Criterion = (u8, &'static str, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "worked cost example", worked_cost),
        (2, "three-detent sequence", three_turns),
        (3, "oracle equivalence", oracles),
        (4, "movement-model identities", movement_identities),
        (5, "worked numeric point", worked_point),
        (6, "probe announcement", probe),
        (7, "dispatcher table and toggle fuzz", dispatcher),
        (8, "T-nav oracle", teleport),
        (9, "power-law fitter", power_law),
        (10, "replay determinism", replay_determinism),
    ];
    let mut unexpected = Vec::new();
    for (n, name, check) in criteria {
        let v = check();
        println!("{} [{n:>2}] {name}: {}", if v.ok { "PASS" } else { "FAIL" }, v.detail);
        if v.ok == EXPECTED_RED.contains(&n) {
            unexpected.push(n);
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: {} expected red ({EXPECTED_RED:?}), all other criteria green", EXPECTED_RED.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected result for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
