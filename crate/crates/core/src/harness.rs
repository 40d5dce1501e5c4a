//! Suite runner behind the command-line front end.
//!
//! A run is configured by a flat `key = value` file plus overrides and
//! produces a report whose serialization depends only on the configuration.
//! Rationals appear only as `p/q` strings.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::arith::{parse_rat, rat, Rat};
use crate::burnside::burnside_irreducible;
use crate::composite::{check_representation, joint_window, tensor_rep, truncated_witt_composite, truncated_witt_rep};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::octahedron::{default_fixture_path, verify_octahedron_model, ModelFixture};
use crate::operator::{GradedOp, VermaVec};
use crate::overlay::overlay_window_search;
use crate::witt::{
    current, default_h_sample, passing_conventions, qr_symmetry, resolved_current_rule, sl2_triple,
    verify_composite_defects, verify_current_closure, witt_assignment, WeightParam,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Sl2,
    Defects,
    Currents,
    Octahedron,
    Overlay,
    Tensor,
    Burnside,
}

impl Suite {
    pub const ALL: [Suite; 7] =
        [Suite::Sl2, Suite::Defects, Suite::Currents, Suite::Octahedron, Suite::Overlay, Suite::Tensor, Suite::Burnside];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Sl2 => "sl2",
            Suite::Defects => "thm1a",
            Suite::Currents => "thm1b",
            Suite::Octahedron => "octahedron",
            Suite::Overlay => "overlay",
            Suite::Tensor => "tensor",
            Suite::Burnside => "burnside",
        }
    }

    /// Findings are reported but never fail a run.
    pub fn must_pass(self) -> bool {
        matches!(self, Suite::Sl2 | Suite::Defects | Suite::Currents | Suite::Octahedron)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s.trim())
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::Parse(format!("unknown format {other:?}"))),
        }
    }
}

/// Unvalidated settings; later layers override earlier ones.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConfigLayer {
    pub h: Option<String>,
    pub k: Option<String>,
    pub n: Option<String>,
    pub suites: Option<String>,
    pub out: Option<String>,
    pub format: Option<String>,
    pub fixture: Option<String>,
}

impl ConfigLayer {
    /// Parses `key = value` lines; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut layer = ConfigLayer::default();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", no + 1)))?;
            let value = Some(value.trim().to_string());
            match key.trim() {
                "h" => layer.h = value,
                "K" => layer.k = value,
                "N" => layer.n = value,
                "suites" => layer.suites = value,
                "out" => layer.out = value,
                "format" => layer.format = value,
                "fixture" => layer.fixture = value,
                other => return Err(Error::Parse(format!("line {}: unknown key {other:?}", no + 1))),
            }
        }
        Ok(layer)
    }

    pub fn merge(self, over: ConfigLayer) -> ConfigLayer {
        ConfigLayer {
            h: over.h.or(self.h),
            k: over.k.or(self.k),
            n: over.n.or(self.n),
            suites: over.suites.or(self.suites),
            out: over.out.or(self.out),
            format: over.format.or(self.format),
            fixture: over.fixture.or(self.fixture),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub h: Vec<Rat>,
    pub k: i64,
    pub n: usize,
    /// Deduplicated, in fixed suite order.
    pub suites: Vec<Suite>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub fixture: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            h: default_h_sample(),
            k: 4,
            n: 6,
            suites: Suite::ALL.to_vec(),
            out: None,
            format: Format::Json,
            fixture: None,
        }
    }
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty())
}

impl RunConfig {
    pub fn from_layer(layer: &ConfigLayer) -> Result<Self> {
        let mut c = RunConfig::default();
        if let Some(h) = &layer.h {
            c.h = split_list(h).map(parse_rat).collect::<Result<_>>()?;
        }
        if let Some(k) = &layer.k {
            c.k = k.trim().parse().map_err(|_| Error::Parse(format!("K must be an integer, got {k:?}")))?;
        }
        if let Some(n) = &layer.n {
            c.n = n.trim().parse().map_err(|_| Error::Parse(format!("N must be a nonnegative integer, got {n:?}")))?;
        }
        if let Some(s) = &layer.suites {
            let mut suites: Vec<Suite> = split_list(s).map(str::parse).collect::<Result<_>>()?;
            suites.sort();
            suites.dedup();
            c.suites = suites;
        }
        if let Some(f) = &layer.format {
            c.format = f.parse()?;
        }
        c.out = layer.out.as_ref().map(PathBuf::from);
        c.fixture = layer.fixture.as_ref().map(PathBuf::from);
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.h.is_empty() {
            return Err(Error::Precondition("at least one h value is required".into()));
        }
        for h in &self.h {
            WeightParam::new(h.clone())?;
        }
        if self.k < 2 {
            return Err(Error::Precondition(format!("K = {} must be at least 2", self.k)));
        }
        if self.n < 4 {
            return Err(Error::Precondition(format!("N = {} must be at least 4", self.n)));
        }
        if self.suites.is_empty() {
            return Err(Error::Precondition("no suites selected".into()));
        }
        if self.format == Format::Csv && !self.suites.contains(&Suite::Defects) {
            return Err(Error::Precondition("csv output is the thm1a defect table; select thm1a".into()));
        }
        Ok(())
    }

    fn echo(&self) -> Value {
        json!({
            "h": self.h.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "K": self.k,
            "N": self.n,
            "suites": self.suites.iter().map(|s| s.name()).collect::<Vec<_>>(),
        })
    }

    pub fn fixture_path(&self) -> &Path {
        match &self.fixture {
            Some(p) => p,
            None => default_fixture_path(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Finding,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Finding => "finding",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteResult {
    pub suite: Suite,
    pub status: Status,
    pub counts: Value,
    pub payload: Value,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub config: RunConfig,
    pub conventions: Value,
    pub results: Vec<SuiteResult>,
    /// Defect tables per weight, kept for csv output.
    pub defect_csv: Vec<(Rat, String)>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.status != Status::Fail)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "config": self.config.echo(),
            "status": if self.passed() { "pass" } else { "fail" },
            "conventions": self.conventions,
            "suites": self.results.iter().map(|r| json!({
                "suite": r.suite.name(),
                "contract": if r.suite.must_pass() { "must-pass" } else { "finding" },
                "status": r.status.name(),
                "counts": r.counts,
                "payload": r.payload,
            })).collect::<Vec<_>>(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("report serializes") + "\n"
    }

    /// The thm1a defect tables; several weights are separated by `# h=…` lines.
    pub fn to_csv(&self) -> String {
        if self.defect_csv.len() == 1 {
            return self.defect_csv[0].1.clone();
        }
        self.defect_csv.iter().map(|(h, t)| format!("# h={h}\n{t}")).collect()
    }

    pub fn render(&self) -> String {
        match self.config.format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }
}

fn weights(config: &RunConfig) -> Result<Vec<WeightParam>> {
    config.h.iter().map(|h| WeightParam::new(h.clone())).collect()
}

fn conventions(ws: &[WeightParam]) -> Result<Value> {
    let mut out = Vec::new();
    for w in ws {
        let map = witt_assignment(w)?;
        let passing: Vec<String> = passing_conventions(w)?.iter().map(ToString::to_string).collect();
        out.push(json!({
            "h": w.h().to_string(),
            "witt_index_map": map.to_string(),
            "passing_maps": passing,
            "current_rule": resolved_current_rule(w)?.to_string(),
        }));
    }
    Ok(Value::Array(out))
}

fn status(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn suite_sl2(ws: &[WeightParam]) -> Result<SuiteResult> {
    let mut payload = Vec::new();
    let mut failures = 0;
    for w in ws {
        let ops = sl2_triple(w)?;
        let get = |i: i64| if (-1..=1).contains(&i) { Some(&ops[(i + 1) as usize]) } else { None };
        let mut pairs = Vec::new();
        for i in -1..=1 {
            for j in -1..=1 {
                let lhs = get(i).unwrap().commutator(get(j).unwrap())?;
                let rhs = match get(i + j) {
                    Some(op) => op.scale(&Rat::from_integer((i - j).into())),
                    None => GradedOp::zero(),
                };
                let ok = lhs == rhs;
                failures += usize::from(!ok);
                pairs.push(json!({ "i": i, "j": j, "ok": ok }));
            }
        }
        payload.push(json!({ "h": w.h().to_string(), "pairs": pairs }));
    }
    Ok(SuiteResult {
        suite: Suite::Sl2,
        status: status(failures == 0),
        counts: json!({ "checked": 9 * ws.len(), "failures": failures }),
        payload: Value::Array(payload),
    })
}

fn suite_thm1a(ws: &[WeightParam], k: i64, csv: &mut Vec<(Rat, String)>) -> Result<SuiteResult> {
    let mut payload = Vec::new();
    let (mut in_piece, mut failures, mut nonzero) = (0, 0, 0);
    for w in ws {
        let r = verify_composite_defects(w, k)?;
        in_piece += r.entries.iter().filter(|e| e.in_piece()).count();
        failures += r.in_piece_failures().len();
        nonzero += r.nonzero_count();
        let cross = r.get(2, -2).map(|e| !e.is_zero());
        payload.push(json!({
            "convention": r.convention.to_string(),
            "in_piece_failures": r.in_piece_failures(),
            "cross_defect_2_-2_nonzero": cross,
            "defects": r.to_json_value(),
        }));
        csv.push((w.h().clone(), r.to_csv()));
    }
    Ok(SuiteResult {
        suite: Suite::Defects,
        status: status(failures == 0),
        counts: json!({ "in_piece_pairs": in_piece, "in_piece_failures": failures, "nonzero_defects": nonzero }),
        payload: Value::Array(payload),
    })
}

fn suite_thm1b(ws: &[WeightParam], k: i64) -> Result<SuiteResult> {
    let mut payload = Vec::new();
    let mut failures = 0;
    for w in ws {
        let r = verify_current_closure(w, k)?;
        failures += usize::from(!r.passes());
        payload.push(r.to_json_value());
    }
    Ok(SuiteResult {
        suite: Suite::Currents,
        status: status(failures == 0),
        counts: json!({ "weights": ws.len(), "failures": failures }),
        payload: Value::Array(payload),
    })
}

/// Shifts injected by the perturbation check, on vertices `A, C, E`.
fn perturbation() -> [(usize, Rat); 3] {
    [(0, rat(1, 2)), (2, rat(-3, 1)), (4, rat(2, 7))]
}

fn suite_octahedron(path: &Path) -> Result<SuiteResult> {
    let rep = match ModelFixture::load(path).and_then(|f| f.rep()) {
        Ok(rep) => rep,
        Err(e) => {
            return Ok(SuiteResult {
                suite: Suite::Octahedron,
                status: Status::Fail,
                counts: json!({ "checks": 0 }),
                payload: json!({ "error": e.to_string() }),
            })
        }
    };
    if rep.mats.len() != 6 || rep.dim == 0 {
        return Err(Error::Dimension("octahedron fixture must hold six square matrices".into()));
    }
    let model = verify_octahedron_model(&rep)?;
    let mut shifted = rep.clone();
    let mut injected = vec![Rat::zero(); 6];
    for (v, mu) in perturbation() {
        shifted.mats[v] = &shifted.mats[v] + &Matrix::scalar(rep.dim, mu.clone());
        injected[v] = mu;
    }
    let perturbed = verify_octahedron_model(&shifted)?;
    let base = model.lambdas.clone().unwrap_or_default();
    let recovered_ok = match (&perturbed.lambdas, model.lambdas.as_ref()) {
        (Some(l), Some(_)) => l.iter().zip(&base).zip(&injected).all(|((x, b), mu)| x - b == *mu),
        _ => false,
    };
    let ok = model.passes() && recovered_ok;
    Ok(SuiteResult {
        suite: Suite::Octahedron,
        status: status(ok),
        counts: json!({ "faces": 4, "face_violations": model.faces.violations.len(), "opposite_pairs": 3 }),
        payload: json!({
            "model": model.to_json_value(),
            "perturbation": {
                "injected": injected.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "recovered": perturbed.lambdas.as_ref().map(|l| l.iter().map(ToString::to_string).collect::<Vec<_>>()),
                "ok": recovered_ok,
            },
        }),
    })
}

fn suite_overlay(ws: &[WeightParam], n: usize) -> Result<SuiteResult> {
    let mut payload = Vec::new();
    let mut passing = 0;
    for w in ws {
        for spin in [2, 1] {
            let s = overlay_window_search(w, n, spin)?;
            passing += s.passing().count();
            payload.push(serde_json::to_value(&s).expect("search serializes"));
        }
    }
    Ok(SuiteResult {
        suite: Suite::Overlay,
        status: Status::Finding,
        counts: json!({ "searches": payload.len(), "passing_candidates": passing }),
        payload: Value::Array(payload),
    })
}

fn window_k(n: usize) -> i64 {
    (n / 2).max(2) as i64
}

fn suite_tensor(ws: &[WeightParam], n: usize) -> Result<SuiteResult> {
    let k = window_k(n);
    let c = truncated_witt_composite(k, None)?;
    let mut payload = Vec::new();
    for w in ws {
        let t = truncated_witt_rep(w, k, n, None)?;
        let single = check_representation(&c, &t)?;
        let tensor = check_representation(&c, &tensor_rep(&t, &t)?)?;
        payload.push(json!({
            "h": w.h().to_string(),
            "K": k,
            "window_rep": single.passes(),
            "tensor_rep_on_joint_window": tensor.passes(),
            "checked_pairs": tensor.checked_pairs,
            "violations": tensor.violations,
        }));
    }
    Ok(SuiteResult {
        suite: Suite::Tensor,
        status: Status::Finding,
        counts: json!({ "weights": ws.len() }),
        payload: Value::Array(payload),
    })
}

/// Irreducibility data for the degree-`n` window and its tensor square
/// compressed to total degree `≤ n`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct BurnsideFinding {
    pub window_dim: usize,
    pub window_irreducible: bool,
    pub joint_window_dim: usize,
    pub tensor_irreducible: bool,
    /// The factor swap commutes with every tensor operator.
    pub swap_commutes: bool,
    pub symmetric_dim: usize,
    pub symmetric_irreducible: bool,
    pub antisymmetric_dim: usize,
    pub antisymmetric_irreducible: bool,
}

pub fn burnside_window(w: &WeightParam, n: usize) -> Result<BurnsideFinding> {
    let t = truncated_witt_rep(w, window_k(n), n, None)?;
    let keep = joint_window(n);
    let joint = tensor_rep(&t, &t)?.compress(&keep);
    let pos = |a: usize, b: usize| keep.iter().position(|&c| c == a * (n + 1) + b).unwrap();
    let dim = keep.len();
    let mut swap = Matrix::zeros(dim, dim);
    let (mut sym, mut alt) = (Vec::new(), Vec::new());
    for a in 0..=n {
        for b in 0..=n - a {
            swap.set(pos(b, a), pos(a, b), Rat::from_integer(1.into()));
            if a <= b {
                let mut v = vec![Rat::zero(); dim];
                v[pos(a, b)] += Rat::from_integer(1.into());
                v[pos(b, a)] += Rat::from_integer(1.into());
                sym.push(v.clone());
                if a < b {
                    v[pos(b, a)] = Rat::from_integer((-1).into());
                    alt.push(v);
                }
            }
        }
    }
    let part = |basis: &[Vec<Rat>]| -> Result<bool> {
        let rep = joint
            .restrict(&Matrix::from_columns(basis)?)
            .ok_or_else(|| Error::Precondition("swap eigenspace is not invariant".into()))?;
        Ok(burnside_irreducible(&rep.mats))
    };
    let swap_commutes = joint.mats.iter().all(|m| m.commutator(&swap).is_zero());
    Ok(BurnsideFinding {
        window_dim: n + 1,
        window_irreducible: burnside_irreducible(&t.mats),
        joint_window_dim: dim,
        tensor_irreducible: burnside_irreducible(&joint.mats),
        swap_commutes,
        symmetric_dim: sym.len(),
        symmetric_irreducible: swap_commutes && part(&sym)?,
        antisymmetric_dim: alt.len(),
        antisymmetric_irreducible: swap_commutes && part(&alt)?,
    })
}

fn suite_burnside(ws: &[WeightParam], n: usize) -> Result<SuiteResult> {
    let mut payload = Vec::new();
    for w in ws {
        let f = burnside_window(w, n)?;
        let mut v = serde_json::to_value(&f).expect("finding serializes");
        v["h"] = Value::String(w.h().to_string());
        payload.push(v);
    }
    Ok(SuiteResult {
        suite: Suite::Burnside,
        status: Status::Finding,
        counts: json!({ "weights": ws.len() }),
        payload: Value::Array(payload),
    })
}

/// Runs the selected suites in fixed order.
pub fn run(config: &RunConfig) -> Result<SuiteReport> {
    config.validate()?;
    let ws = weights(config)?;
    let mut defect_csv = Vec::new();
    let mut results = Vec::new();
    for &suite in &config.suites {
        results.push(match suite {
            Suite::Sl2 => suite_sl2(&ws)?,
            Suite::Defects => suite_thm1a(&ws, config.k, &mut defect_csv)?,
            Suite::Currents => suite_thm1b(&ws, config.k)?,
            Suite::Octahedron => suite_octahedron(config.fixture_path())?,
            Suite::Overlay => suite_overlay(&ws, config.n)?,
            Suite::Tensor => suite_tensor(&ws, config.n)?,
            Suite::Burnside => suite_burnside(&ws, config.n)?,
        });
    }
    Ok(SuiteReport { config: config.clone(), conventions: conventions(&ws)?, results, defect_csv })
}

/// Operator named on the command line: `sl2.Lm1`, `sl2.L0`, `sl2.Lp1`,
/// `qr(k)` or `current(i)`.
pub fn named_operator(name: &str, w: &WeightParam) -> Result<GradedOp> {
    let name = name.trim();
    let arg = |prefix: &str| -> Option<Result<i64>> {
        let inner = name.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')?;
        Some(inner.trim().parse().map_err(|_| Error::Parse(format!("bad index in {name:?}"))))
    };
    match name {
        "sl2.Lm1" | "sl2.L0" | "sl2.Lp1" => {
            let [lm1, l0, lp1] = sl2_triple(w)?;
            Ok(match name {
                "sl2.Lm1" => lm1,
                "sl2.L0" => l0,
                _ => lp1,
            })
        }
        _ => {
            if let Some(k) = arg("qr") {
                return qr_symmetry(w, k?);
            }
            if let Some(i) = arg("current") {
                return current(w, i?);
            }
            Err(Error::Parse(format!(
                "unknown operator {name:?}; expected sl2.Lm1, sl2.L0, sl2.Lp1, qr(k) or current(i)"
            )))
        }
    }
}

/// Image of a polynomial in `z` under a named operator.
pub fn apply_cmd(op: &str, h: &str, vec: &str) -> Result<String> {
    let w = WeightParam::new(parse_rat(h)?)?;
    let v = VermaVec::parse(vec)?;
    Ok(named_operator(op, &w)?.apply(&v).to_string())
}

/// Shift-by-shift dump of a named operator.
pub fn dump_cmd(op: &str, h: &str) -> Result<String> {
    let w = WeightParam::new(parse_rat(h)?)?;
    Ok(named_operator(op, &w)?.dump())
}
