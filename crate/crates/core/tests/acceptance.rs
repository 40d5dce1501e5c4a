//! One line per acceptance criterion. Exact arithmetic throughout; the
//! runtime limits are part of each criterion.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{random_composite_rep, random_graded_op, random_rat};
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use witt_core::arith::{parse_rat, rat_int, Rat};
use witt_core::composite::check_representation;
use witt_core::harness::{burnside_window, run, ConfigLayer, RunConfig};
use witt_core::linalg::Matrix;
use witt_core::octahedron::{default_fixture_path, octahedron, verify_octahedron_model, ModelFixture, VERTICES};
use witt_core::overlay::{build_lc, is_overlay_rep, Decomposition};
use witt_core::witt::{default_h_sample, sl2_triple, verify_composite_defects, verify_current_closure, WeightParam};
use witt_core::{GradedOp, VermaVec};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn weights() -> Vec<WeightParam> {
    default_h_sample().into_iter().map(|h| WeightParam::new(h).unwrap()).collect()
}

fn sl2_relations() -> Outcome {
    let mut checked = 0;
    for w in weights() {
        let ops = sl2_triple(&w).map_err(|e| e.to_string())?;
        for i in -1i64..=1 {
            for j in -1i64..=1 {
                let lhs = ops[(i + 1) as usize].commutator(&ops[(j + 1) as usize]).unwrap();
                let rhs = if (i + j).abs() <= 1 {
                    ops[(i + j + 1) as usize].scale(&rat_int(i - j))
                } else {
                    GradedOp::zero()
                };
                ensure(lhs == rhs, format!("[L_{i}, L_{j}] at h = {}", w.h()))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} exact bracket identities"))
}

fn composite_defects() -> Outcome {
    let (mut zero_pairs, mut hs) = (0, Vec::new());
    for w in weights() {
        let r = verify_composite_defects(&w, 6).map_err(|e| e.to_string())?;
        ensure(r.passes(), format!("in-piece defects {:?} at h = {}", r.in_piece_failures(), w.h()))?;
        zero_pairs += r.entries.iter().filter(|e| e.in_piece()).count();
        let cross = r.get(2, -2).ok_or("D(2,-2) missing")?;
        ensure(!cross.is_zero(), format!("D(2,-2) vanishes at h = {}", w.h()))?;
        hs.push(w.h().to_string());
    }
    Ok(format!("{zero_pairs} in-piece defects zero; D(2,-2) nonzero at h = {}", hs.join(", ")))
}

fn current_closure() -> Outcome {
    let mut rule = String::new();
    for w in weights() {
        let r = verify_current_closure(&w, 6).map_err(|e| e.to_string())?;
        ensure(r.passes(), format!("current brackets do not close at h = {}", w.h()))?;
        let json = r.to_json_value();
        ensure(json["rule"].is_string(), "rule missing from report")?;
        let note = json["naive_rule_note"].as_str().ok_or("Jacobi note missing")?;
        ensure(note.contains("j f_j") && note.contains("Jacobi"), "Jacobi note malformed")?;
        rule = json["rule"].as_str().unwrap().to_string();
    }
    Ok(format!("resolved rule {rule}; printed j f_j rule flagged by a Jacobi witness"))
}

fn octahedron_model(rng: &mut ChaCha8Rng) -> Outcome {
    let t = ModelFixture::load(default_fixture_path()).and_then(|f| f.rep()).map_err(|e| e.to_string())?;
    ensure(check_representation(&octahedron(), &t).unwrap().passes(), "face check fails")?;
    let r = verify_octahedron_model(&t).map_err(|e| e.to_string())?;
    ensure(r.opposite.iter().all(|o| o.central), "opposite commutator not central")?;
    ensure(r.irreducible, "model is not Burnside-irreducible")?;
    ensure(r.passes(), "octahedron check fails on the model")?;
    let mut vertices: Vec<usize> = (0..6).collect();
    vertices.shuffle(rng);
    let mut shifted = t.clone();
    let mut injected = vec![Rat::zero(); 6];
    for &v in &vertices[..3] {
        let mu = random_rat(rng);
        shifted.mats[v] = &shifted.mats[v] + &Matrix::scalar(t.dim, mu.clone());
        injected[v] = mu;
    }
    let l = verify_octahedron_model(&shifted).unwrap().lambdas.ok_or("no lambdas recovered")?;
    ensure(l == injected, format!("recovered {l:?}, injected {injected:?}"))?;
    let shown: Vec<String> = vertices[..3].iter().map(|&v| format!("{}={}", VERTICES[v], injected[v])).collect();
    Ok(format!("faces, centrality, irreducibility; shifts {} recovered", shown.join(" ")))
}

fn composite_in_overlay(rng: &mut ChaCha8Rng) -> Outcome {
    let (mut pass, mut fail) = (0, 0);
    for _ in 0..25 {
        let (c, t) = random_composite_rep(rng);
        ensure(t.dim <= 5, "instance too large")?;
        let lc = build_lc(&Decomposition::trivial(t.dim)).unwrap();
        let plain = check_representation(&c, &t).unwrap().passes();
        let overlay = is_overlay_rep(&c, &t, &lc, &vec![0; c.pieces.len()]).unwrap().passes();
        ensure(plain == overlay, "overlay and composite checks disagree")?;
        if plain {
            pass += 1;
        } else {
            fail += 1;
        }
    }
    Ok(format!("25 instances agree ({pass} representations, {fail} non-representations)"))
}

fn tensor_irreducibility() -> Outcome {
    let w = WeightParam::new(rat_int(1)).unwrap();
    let f = burnside_window(&w, 6).map_err(|e| e.to_string())?;
    ensure(f.window_irreducible, "degree-6 window is reducible")?;
    ensure(
        f.tensor_irreducible,
        format!(
            "window irreducible, but its tensor square on the joint window (dim {}) is reducible: \
             the factor swap commutes with it (swap_commutes = {}); symmetric part (dim {}) irreducible = {}, \
             antisymmetric part (dim {}) irreducible = {}",
            f.joint_window_dim,
            f.swap_commutes,
            f.symmetric_dim,
            f.symmetric_irreducible,
            f.antisymmetric_dim,
            f.antisymmetric_irreducible
        ),
    )?;
    Ok("window and joint tensor window irreducible".into())
}

fn determinism(rng: &mut ChaCha8Rng) -> Outcome {
    let layer = ConfigLayer::parse("h = 1/2, 1\nK = 4\nN = 5\n").unwrap();
    let config = RunConfig::from_layer(&layer).map_err(|e| e.to_string())?;
    let a = run(&config).map_err(|e| e.to_string())?.to_json();
    let b = run(&config).map_err(|e| e.to_string())?.to_json();
    ensure(a == b, "two runs differ")?;
    let w = WeightParam::new(parse_rat("1").unwrap()).unwrap();
    let report = verify_composite_defects(&w, 4).unwrap();
    let csv = report.to_csv();
    let mut shuffled = report.clone();
    for _ in 0..5 {
        shuffled.entries.shuffle(rng);
        ensure(shuffled.to_csv() == csv, "csv depends on entry order")?;
    }
    ensure(csv.starts_with("i,j,status\n"), "csv header")?;
    Ok(format!("{} byte report reproduced; {} csv rows stable", a.len(), csv.lines().count() - 1))
}

fn compose_matches_action(rng: &mut ChaCha8Rng) -> Outcome {
    for pair in 0..100 {
        let (a, b) = (random_graded_op(rng), random_graded_op(rng));
        let bracket = a.commutator(&b).map_err(|e| e.to_string())?;
        for n in 0..=30 {
            let zn = VermaVec::monomial(n);
            let direct = a.apply(&b.apply(&zn)).sub(&b.apply(&a.apply(&zn)));
            ensure(bracket.apply(&zn) == direct, format!("pair {pair} differs on z^{n}"))?;
        }
    }
    Ok("100 pairs agree on z^0..z^30".into())
}

fn main() -> ExitCode {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    type Check<'a> = Box<dyn FnMut() -> Outcome + 'a>;
    let mut rng4 = ChaCha8Rng::seed_from_u64(4);
    let mut rng5 = ChaCha8Rng::seed_from_u64(5);
    let mut rng7 = ChaCha8Rng::seed_from_u64(7);
    let criteria: Vec<(&str, Option<Duration>, Check)> = vec![
        ("sl(2) relations", Some(Duration::from_secs(1)), Box::new(sl2_relations)),
        ("composite defects", Some(Duration::from_secs(10)), Box::new(composite_defects)),
        ("current closure", Some(Duration::from_secs(10)), Box::new(current_closure)),
        ("octahedron model", Some(Duration::from_secs(5)), Box::new(|| octahedron_model(&mut rng4))),
        ("composite within overlay", None, Box::new(|| composite_in_overlay(&mut rng5))),
        ("tensor irreducibility", Some(Duration::from_secs(60)), Box::new(tensor_irreducibility)),
        ("determinism", None, Box::new(|| determinism(&mut rng7))),
        ("compose against action", None, Box::new(|| compose_matches_action(&mut rng))),
    ];
    let mut failures = 0;
    for (no, (name, limit, mut check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let result = match (result, limit) {
            (Ok(msg), Some(l)) if elapsed > l => Err(format!("{msg}, but took {elapsed:.2?} (limit {l:?})")),
            (r, _) => r,
        };
        let (tag, msg) = match result {
            Ok(m) => ("PASS", m),
            Err(m) => {
                failures += 1;
                ("FAIL", m)
            }
        };
        println!("criterion {} {tag} {name} [{elapsed:.2?}]: {msg}", no + 1);
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criterion failed");
        ExitCode::FAILURE
    }
}
