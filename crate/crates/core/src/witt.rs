//! Spin-2 and spin-1 tensor operators on the Verma module `V_h` and exact
//! verification of the Witt composite relations they satisfy.
//!
//! Two operator displays are in play. The sl(2) triple `z, ξ+h, z∂²+2h∂`
//! lowers index with degree (`L_{-1} = z` raises degree), while the family
//! `L_{-k} = (ξ+h(k+1))∂^k`, `L_k = z^k (ξ+h(k+1))/((ξ+2h)…(ξ+2h+k-1))`
//! uses the opposite grading. [`witt_assignment`] decides empirically which
//! index convention turns the family into a map of the abstract generators
//! `e_i` with `[e_i, e_j] = (i-j) e_{i+j}`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{rat, rat_int, Poly, Rat, RatFun};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::operator::GradedOp;

/// Default sample of weights used by the suites.
pub fn default_h_sample() -> Vec<Rat> {
    vec![rat(1, 2), rat_int(1), rat(3, 2), rat(7, 3), rat_int(5)]
}

/// Extremal weight `h` with `2h` not a nonpositive integer, so every
/// denominator `(n+2h)…(n+2h+k-1)` is nonzero for `n ≥ 0`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct WeightParam {
    h: Rat,
    q_r: Option<Rat>,
}

impl WeightParam {
    pub fn new(h: Rat) -> Result<Self> {
        let two_h = &h * rat_int(2);
        if two_h.is_integer() && two_h <= Rat::zero() {
            return Err(Error::InvalidWeight(h));
        }
        let q_r = (two_h - Rat::one()).recip_checked();
        Ok(WeightParam { h, q_r })
    }

    pub fn h(&self) -> &Rat {
        &self.h
    }

    /// `q_R = 1/(2h-1)`; `None` at `h = 1/2`.
    pub fn q_r(&self) -> Option<&Rat> {
        self.q_r.as_ref()
    }

    /// Inverse of `q_R`: `h = (1/q_R + 1)/2`.
    pub fn from_q_r(q_r: &Rat) -> Result<Self> {
        if q_r.is_zero() {
            return Err(Error::Precondition("q_R = 0 has no weight".into()));
        }
        WeightParam::new((q_r.recip() + Rat::one()) / rat_int(2))
    }
}

trait RecipChecked {
    fn recip_checked(self) -> Option<Rat>;
}

impl RecipChecked for Rat {
    fn recip_checked(self) -> Option<Rat> {
        (!self.is_zero()).then(|| self.recip())
    }
}

fn z_pow(k: i64) -> GradedOp {
    GradedOp::mul_z(k).expect("nonnegative power")
}

fn d_pow(k: i64) -> GradedOp {
    GradedOp::diff(k).expect("nonnegative order")
}

/// `[L_{-1}, L_0, L_1] = [z, ξ+h, z∂²+2h∂]`.
pub fn sl2_triple(w: &WeightParam) -> Result<[GradedOp; 3]> {
    let l_m1 = z_pow(1);
    let l_0 = GradedOp::fun_xi(RatFun::from_poly(Poly::linear(w.h.clone())))?;
    let l_p1 = z_pow(1).compose(&d_pow(2))?.add(&d_pow(1).scale(&(&w.h * rat_int(2))))?;
    Ok([l_m1, l_0, l_p1])
}

/// The family display: shift `-k` for `k ≤ 0` is `(ξ+h(1-k))∂^(-k)`, and
/// shift `+k` for `k ≥ 1` is `z^k (ξ+h(k+1))/((ξ+2h)…(ξ+2h+k-1))`.
pub fn qr_symmetry(w: &WeightParam, k: i64) -> Result<GradedOp> {
    let h = &w.h;
    if k <= 0 {
        let m = -k;
        let xi = GradedOp::fun_xi(RatFun::from_poly(Poly::linear(h * rat_int(m + 1))))?;
        xi.compose(&d_pow(m))
    } else {
        let f = RatFun::new(
            Poly::linear(h * rat_int(k + 1)),
            Poly::rising(&(h * rat_int(2)), k as u32),
        )?;
        z_pow(k).compose(&GradedOp::fun_xi(f)?)
    }
}

/// Spin-1 current: `f_i ↦ ∂^i` for `i ≥ 0`, `f_{-i} ↦ z^i/((ξ+2h)…(ξ+2h+i-1))`.
pub fn current(w: &WeightParam, i: i64) -> Result<GradedOp> {
    if i >= 0 {
        return Ok(d_pow(i));
    }
    let k = -i;
    let f = RatFun::new(Poly::one(), Poly::rising(&(&w.h * rat_int(2)), k as u32))?;
    z_pow(k).compose(&GradedOp::fun_xi(f)?)
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexConvention {
    /// `ρ(e_i) = L_i` in family indices
    Standard,
    /// `ρ(e_i) = L_{-i}` in family indices
    Flipped,
}

/// Dictionary from abstract Witt generators to the operator family.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct WittIndexMap {
    pub convention: IndexConvention,
    pub sign: i8,
    /// Whether `ρ(e_{-1}), ρ(e_0), ρ(e_1)` equal the sl(2) triple verbatim.
    pub matches_sl2_display: bool,
}

impl WittIndexMap {
    pub fn family_index(&self, i: i64) -> i64 {
        match self.convention {
            IndexConvention::Standard => i,
            IndexConvention::Flipped => -i,
        }
    }

    pub fn rho(&self, w: &WeightParam, i: i64) -> Result<GradedOp> {
        Ok(qr_symmetry(w, self.family_index(i))?.scale(&rat_int(self.sign as i64)))
    }

    /// Degree in `h` of the denominator of `ρ(e_i)`.
    pub fn h_den_degree(&self, i: i64) -> u32 {
        self.family_index(i).max(0) as u32
    }

    /// Upper bound on the `h`-degree of every `ν`-coefficient of the
    /// numerator of `D(i, j)` over the product of the three denominators.
    pub fn defect_h_degree_bound(&self, i: i64, j: i64) -> u32 {
        let (a, b, c) = (self.h_den_degree(i), self.h_den_degree(j), self.h_den_degree(i + j));
        (2 + a + b + c).max(1 + 2 * (a + b))
    }
}

impl fmt::Display for WittIndexMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx = match self.convention {
            IndexConvention::Standard => "L_{i}",
            IndexConvention::Flipped => "L_{-i}",
        };
        let sign = if self.sign < 0 { "-" } else { "" };
        write!(f, "rho(e_i) = {sign}{idx}")
    }
}

/// Which composite pieces contain `e_i`.
pub fn in_p_plus(i: i64) -> bool {
    i >= -1
}

pub fn in_p_minus(i: i64) -> bool {
    i <= 1
}

/// Both indices lie in a common piece of `(w; p+, p-)`.
pub fn same_piece(i: i64, j: i64) -> bool {
    (in_p_plus(i) && in_p_plus(j)) || (in_p_minus(i) && in_p_minus(j))
}

fn window_pairs(k: i64) -> impl Iterator<Item = (i64, i64)> {
    (-k..=k).flat_map(move |i| (-k..=k).map(move |j| (i, j))).filter(move |(i, j)| (i + j).abs() <= k)
}

/// `[ρ(e_i), ρ(e_j)] - (i-j) ρ(e_{i+j})`.
pub fn witt_defect(rho: &BTreeMap<i64, GradedOp>, i: i64, j: i64) -> Result<GradedOp> {
    let get = |x: i64| rho.get(&x).ok_or_else(|| Error::Precondition(format!("e_{x} outside window")));
    get(i)?.commutator(get(j)?)?.sub(&get(i + j)?.scale(&rat_int(i - j)))
}

fn rho_table(w: &WeightParam, map: &WittIndexMap, k: i64) -> Result<BTreeMap<i64, GradedOp>> {
    (-k..=k).map(|i| Ok((i, map.rho(w, i)?))).collect()
}

/// Every (convention, sign) candidate under which the bracket holds
/// exactly on in-piece pairs of a small window. Candidates come in pairs
/// related by the Witt automorphism `e_i ↦ -e_{-i}`, which swaps `p+` and `p-`.
pub fn passing_conventions(w: &WeightParam) -> Result<Vec<WittIndexMap>> {
    const PROBE: i64 = 3;
    let sl2 = sl2_triple(w)?;
    let mut out = Vec::new();
    for convention in [IndexConvention::Standard, IndexConvention::Flipped] {
        for sign in [1i8, -1] {
            let mut map = WittIndexMap { convention, sign, matches_sl2_display: false };
            let table = rho_table(w, &map, PROBE)?;
            let mut ok = true;
            for (i, j) in window_pairs(PROBE).filter(|&(i, j)| same_piece(i, j)) {
                if !witt_defect(&table, i, j)?.is_zero() {
                    ok = false;
                    break;
                }
            }
            if ok {
                map.matches_sl2_display = (-1..=1).all(|i| table[&i] == sl2[(i + 1) as usize]);
                out.push(map);
            }
        }
    }
    Ok(out)
}

/// The passing convention that also reproduces the sl(2) triple verbatim,
/// falling back to the first passing one.
pub fn witt_assignment(w: &WeightParam) -> Result<WittIndexMap> {
    let found = passing_conventions(w)?;
    found
        .iter()
        .find(|m| m.matches_sl2_display)
        .or(found.first())
        .copied()
        .ok_or(Error::NoConvention)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefectEntry {
    pub i: i64,
    pub j: i64,
    pub defect: GradedOp,
}

impl DefectEntry {
    pub fn is_zero(&self) -> bool {
        self.defect.is_zero()
    }

    pub fn in_piece(&self) -> bool {
        same_piece(self.i, self.j)
    }
}

/// Commutator defects of the composed representation on the window
/// `|i|, |j|, |i+j| ≤ K`, ordered by `(i, j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefectReport {
    pub h: Rat,
    pub k: i64,
    pub convention: WittIndexMap,
    pub entries: Vec<DefectEntry>,
}

impl DefectReport {
    pub fn get(&self, i: i64, j: i64) -> Option<&DefectEntry> {
        self.entries.iter().find(|e| e.i == i && e.j == j)
    }

    /// In-piece pairs whose defect is not zero.
    pub fn in_piece_failures(&self) -> Vec<(i64, i64)> {
        self.entries.iter().filter(|e| e.in_piece() && !e.is_zero()).map(|e| (e.i, e.j)).collect()
    }

    pub fn passes(&self) -> bool {
        self.in_piece_failures().is_empty()
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.iter().filter(|e| !e.is_zero()).count()
    }

    /// `D(i,j) = -D(j,i)` for every pair present in both orders.
    pub fn is_antisymmetric(&self) -> bool {
        self.entries.iter().all(|e| match self.get(e.j, e.i) {
            Some(t) => t.defect == e.defect.neg(),
            None => true,
        })
    }

    pub fn max_h_degree_bound(&self) -> u32 {
        self.entries
            .iter()
            .filter(|e| e.in_piece())
            .map(|e| self.convention.defect_h_degree_bound(e.i, e.j))
            .max()
            .unwrap_or(0)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .entries
            .iter()
            .map(|e| {
                serde_json::json!({
                    "i": e.i,
                    "j": e.j,
                    "status": if e.is_zero() { "zero" } else { "nonzero" },
                    "defect": e.defect.dump(),
                })
            })
            .collect();
        serde_json::json!({ "h": self.h.to_string(), "K": self.k, "entries": entries })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("json")
    }

    /// `i,j,status` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut rows: Vec<&DefectEntry> = self.entries.iter().collect();
        rows.sort_by_key(|e| (e.i, e.j));
        let mut out = String::from("i,j,status\n");
        for e in rows {
            let s = if e.is_zero() { "zero" } else { "nonzero" };
            out.push_str(&format!("{},{},{}\n", e.i, e.j, s));
        }
        out
    }
}

pub fn verify_composite_defects(w: &WeightParam, k: i64) -> Result<DefectReport> {
    if k < 2 {
        return Err(Error::Precondition(format!("index window K = {k} must be at least 2")));
    }
    let map = witt_assignment(w)?;
    let table = rho_table(w, &map, k)?;
    let entries = window_pairs(k)
        .map(|(i, j)| Ok(DefectEntry { i, j, defect: witt_defect(&table, i, j)? }))
        .collect::<Result<Vec<_>>>()?;
    Ok(DefectReport { h: w.h.clone(), k, convention: map, entries })
}

/// Outcome of checking the in-piece identities at enough weights to pin
/// them down as identities of rational functions in `h`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HCertificate {
    pub k: i64,
    pub degree_bound: u32,
    #[serde(serialize_with = "ser_rats")]
    pub h_values: Vec<Rat>,
    pub all_zero: bool,
}

fn ser_rats<S: serde::Serializer>(v: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

/// Weights `sample`, then `1/2, 1, 3/2, …` skipping repeats, until there
/// are `count` distinct values.
pub fn h_points(sample: &[Rat], count: usize) -> Vec<Rat> {
    let mut out: Vec<Rat> = Vec::new();
    let extra = (1i64..).map(|n| rat(n, 2));
    for h in sample.iter().cloned().chain(extra) {
        if out.len() >= count {
            break;
        }
        if !out.contains(&h) && WeightParam::new(h.clone()).is_ok() {
            out.push(h);
        }
    }
    out
}

/// Each `ν`-coefficient of an in-piece defect numerator is a polynomial in
/// `h` of degree at most the bound, so vanishing at `bound + 1` weights
/// makes the identity hold for every admissible `h`.
pub fn certify_in_h(k: i64, sample: &[Rat]) -> Result<HCertificate> {
    let w0 = WeightParam::new(rat_int(1))?;
    let map = witt_assignment(&w0)?;
    let pairs: Vec<(i64, i64)> = window_pairs(k).filter(|&(i, j)| same_piece(i, j)).collect();
    let degree_bound = pairs.iter().map(|&(i, j)| map.defect_h_degree_bound(i, j)).max().unwrap_or(0);
    let h_values = h_points(sample, degree_bound as usize + 1);
    let mut all_zero = true;
    for h in &h_values {
        let w = WeightParam::new(h.clone())?;
        let table = rho_table(&w, &map, k)?;
        for &(i, j) in &pairs {
            if !witt_defect(&table, i, j)?.is_zero() {
                all_zero = false;
            }
        }
    }
    Ok(HCertificate { k, degree_bound, h_values, all_zero })
}

/// Affine rule `[e_i, f_j] = (α i + β j + γ) f_{i+j}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CurrentRule {
    pub alpha: Rat,
    pub beta: Rat,
    pub gamma: Rat,
}

impl CurrentRule {
    pub fn coefficient(&self, i: i64, j: i64) -> Rat {
        &self.alpha * rat_int(i) + &self.beta * rat_int(j) + &self.gamma
    }
}

impl fmt::Display for CurrentRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lin = Poly::new(vec![self.gamma.clone(), self.beta.clone()]);
        let mut terms = Vec::new();
        if !self.alpha.is_zero() {
            terms.push(format!("{}*i", self.alpha));
        }
        let rest = lin.render("j");
        if rest != "0" || terms.is_empty() {
            terms.push(rest);
        }
        write!(f, "[e_i,f_j] = ({}) f_{{i+j}}", terms.join(" + "))
    }
}

/// Jacobi identity on the abstract extension `[e_a,[e_b,f_k]] - [e_b,[e_a,f_k]] = [[e_a,e_b],f_k]`
/// for a bracket `[e_i, f_j] = c(i,j) f_{t(i,j)}`; returns a violating
/// `(a, b, k)` or `None`.
pub fn jacobi_violation(
    bracket: impl Fn(i64, i64) -> (Rat, i64),
    window: i64,
) -> Option<(i64, i64, i64)> {
    let act = |i: i64, v: &BTreeMap<i64, Rat>| -> BTreeMap<i64, Rat> {
        let mut out: BTreeMap<i64, Rat> = BTreeMap::new();
        for (&j, c) in v {
            let (coef, t) = bracket(i, j);
            *out.entry(t).or_insert_with(Rat::zero) += coef * c;
        }
        out.retain(|_, c| !c.is_zero());
        out
    };
    for a in -window..=window {
        for b in -window..=window {
            for k in -window..=window {
                let f = BTreeMap::from([(k, Rat::one())]);
                let lhs1 = act(a, &act(b, &f));
                let lhs2 = act(b, &act(a, &f));
                let rhs: BTreeMap<i64, Rat> = act(a + b, &f)
                    .into_iter()
                    .map(|(t, c)| (t, c * rat_int(a - b)))
                    .filter(|(_, c)| !c.is_zero())
                    .collect();
                let mut diff = lhs1;
                for (t, c) in lhs2 {
                    *diff.entry(t).or_insert_with(Rat::zero) -= c;
                }
                for (t, c) in rhs {
                    *diff.entry(t).or_insert_with(Rat::zero) -= c;
                }
                if diff.values().any(|c| !c.is_zero()) {
                    return Some((a, b, k));
                }
            }
        }
    }
    None
}

/// In the extended composite `e_i` pairs with `f_j` when both sit in the
/// same extended piece: `i ≥ -1, j ≥ 0` or `i ≤ 1, j ≤ 0`.
pub fn same_extended_piece(i: i64, j: i64) -> bool {
    (in_p_plus(i) && j >= 0) || (in_p_minus(i) && j <= 0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedEntry {
    pub i: i64,
    pub j: i64,
    /// `c` with `[ρ(e_i), φ(f_j)] = c·φ(f_{i+j})`, or `None` if the bracket
    /// leaves the current family.
    pub coefficient: Option<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurrentReport {
    pub h: Rat,
    pub k: i64,
    pub entries: Vec<MixedEntry>,
    /// In-piece pairs `(i, j)` with `[φ(f_i), φ(f_j)] ≠ 0`.
    pub abelian_failures: Vec<(i64, i64)>,
    pub rule: Option<CurrentRule>,
    /// Whether the resolved rule satisfies Jacobi on the window.
    pub rule_jacobi_ok: bool,
    /// Jacobi witness against the `i`-independent rule `[e_i, f_j] = j f_j`.
    pub naive_rule_violation: Option<(i64, i64, i64)>,
}

impl CurrentReport {
    pub fn passes(&self) -> bool {
        self.entries.iter().all(|e| e.coefficient.is_some())
            && self.abelian_failures.is_empty()
            && self.rule.is_some()
            && self.rule_jacobi_ok
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .entries
            .iter()
            .map(|e| {
                serde_json::json!({
                    "i": e.i,
                    "j": e.j,
                    "status": if e.coefficient.is_some() { "closes" } else { "leaves-family" },
                    "coefficient": e.coefficient.as_ref().map(ToString::to_string),
                })
            })
            .collect();
        let note = self.naive_rule_violation.map(|(a, b, k)| {
            format!(
                "[e_i,f_j] = j f_j violates the Jacobi identity at (e_{a}, e_{b}, f_{k})"
            )
        });
        serde_json::json!({
            "h": self.h.to_string(),
            "K": self.k,
            "rule": self.rule.as_ref().map(ToString::to_string),
            "rule_jacobi_ok": self.rule_jacobi_ok,
            "abelian_failures": self.abelian_failures,
            "naive_rule_note": note,
            "entries": entries,
        })
    }
}

/// `Some(c)` when `op = c·target`.
fn proportionality(op: &GradedOp, target: &GradedOp) -> Option<Rat> {
    if op.is_zero() {
        return Some(Rat::zero());
    }
    let (shift, coeff) = target.components().next()?;
    let n = (0u64..).find(|&n| !coeff.eval(n).is_zero() || n > 64)?;
    let tc = coeff.eval(n);
    if tc.is_zero() {
        return None;
    }
    let c = op.coefficient_at(shift, n) / tc;
    (op == &target.scale(&c)).then_some(c)
}

fn fit_rule(samples: &[(i64, i64, Rat)]) -> Option<CurrentRule> {
    let rows: Vec<Vec<Rat>> =
        samples.iter().map(|(i, j, _)| vec![rat_int(*i), rat_int(*j), Rat::one()]).collect();
    let a = Matrix::from_rows(rows).ok()?;
    let b: Vec<Rat> = samples.iter().map(|(_, _, c)| c.clone()).collect();
    let x = a.solve(&b)?;
    // The window always has rank 3, so the fit is unique.
    (a.rank() == 3).then(|| CurrentRule { alpha: x[0].clone(), beta: x[1].clone(), gamma: x[2].clone() })
}

pub fn verify_current_closure(w: &WeightParam, k: i64) -> Result<CurrentReport> {
    if k < 2 {
        return Err(Error::Precondition(format!("index window K = {k} must be at least 2")));
    }
    let map = witt_assignment(w)?;
    let rho = rho_table(w, &map, k)?;
    let phi: BTreeMap<i64, GradedOp> = (-k..=k).map(|j| Ok((j, current(w, j)?))).collect::<Result<_>>()?;

    let mut entries = Vec::new();
    for (i, j) in window_pairs(k).filter(|&(i, j)| same_extended_piece(i, j)) {
        let b = rho[&i].commutator(&phi[&j])?;
        entries.push(MixedEntry { i, j, coefficient: proportionality(&b, &phi[&(i + j)]) });
    }

    let mut abelian_failures = Vec::new();
    for (i, j) in window_pairs(k).filter(|&(i, j)| (i >= 0 && j >= 0) || (i <= 0 && j <= 0)) {
        if !phi[&i].commutator(&phi[&j])?.is_zero() {
            abelian_failures.push((i, j));
        }
    }

    let samples: Vec<(i64, i64, Rat)> =
        entries.iter().filter_map(|e| Some((e.i, e.j, e.coefficient.clone()?))).collect();
    let rule = if samples.len() == entries.len() { fit_rule(&samples) } else { None };
    let rule_jacobi_ok = rule
        .as_ref()
        .is_some_and(|r| jacobi_violation(|i, j| (r.coefficient(i, j), i + j), 3).is_none());
    let naive_rule_violation = jacobi_violation(|_, j| (rat_int(j), j), 3);

    Ok(CurrentReport {
        h: w.h.clone(),
        k,
        entries,
        abelian_failures,
        rule,
        rule_jacobi_ok,
        naive_rule_violation,
    })
}

/// The `[e, f]` rule satisfied by the displayed operators at weight `w`.
pub fn resolved_current_rule(w: &WeightParam) -> Result<CurrentRule> {
    verify_current_closure(w, 3)?.rule.ok_or(Error::NoConvention)
}
