//! Finite-dimensional Lie composites: a space with distinguished subspaces,
//! each carrying its own Lie bracket, and linear maps that restrict to a
//! representation on every piece.
//!
//! Connectivity is read as "consecutive pieces meet in a nonzero subspace";
//! the set-theoretic reading (`∩ ≠ ∅`) is vacuous for subspaces.

use std::collections::VecDeque;

use num_traits::Zero;
use serde::Serialize;

use crate::arith::{rat_int, Rat};
use crate::error::{Error, Result};
use crate::linalg::{intersect_spans, Matrix};
use crate::operator::GradedOp;
use crate::witt::{current, in_p_minus, in_p_plus, witt_assignment, CurrentRule, WeightParam};

/// Structure constants of one piece: `bracket[a][b]` holds the coordinates
/// of `[u_a, u_b]` in the piece basis, or `None` where the bracket is not
/// defined (outside a truncation window).
pub type Brackets = Vec<Vec<Option<Vec<Rat>>>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub name: String,
    /// Columns are the piece basis in ambient coordinates.
    pub basis: Matrix,
    pub bracket: Brackets,
}

impl Piece {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    fn coords(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        self.basis.solve(v)
    }

    fn ambient(&self, coords: &[Rat]) -> Vec<Rat> {
        self.basis.mul_vec(coords)
    }

    /// Bracket of two piece-coordinate vectors, in piece coordinates.
    fn bracket_coords(&self, x: &[Rat], y: &[Rat]) -> Option<Vec<Rat>> {
        let mut out = vec![Rat::zero(); self.dim()];
        for (a, xa) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (b, yb) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let c = self.bracket[a][b].as_ref()?;
                let f = xa * yb;
                for (o, cv) in out.iter_mut().zip(c) {
                    *o += &f * cv;
                }
            }
        }
        Some(out)
    }
}

/// Records the truncation contract of a windowed composite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindowContract {
    pub k: i64,
    pub extended: bool,
    pub description: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieComposite {
    pub labels: Vec<String>,
    pub pieces: Vec<Piece>,
    pub window: Option<WindowContract>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CompositeFlags {
    pub compatible: bool,
    pub dense: bool,
    pub connected: bool,
}

impl LieComposite {
    /// Validates piece dimensions, antisymmetry and the Jacobi identity
    /// (on every triple whose brackets are all defined).
    pub fn new(labels: Vec<String>, pieces: Vec<Piece>, window: Option<WindowContract>) -> Result<Self> {
        let n = labels.len();
        for p in &pieces {
            let k = p.dim();
            if p.basis.rows() != n {
                return Err(Error::Dimension(format!("piece {} lives in wrong space", p.name)));
            }
            if k <= 1 {
                return Err(Error::Precondition(format!("piece {} has dimension {k} ≤ 1", p.name)));
            }
            if p.basis.rank() != k {
                return Err(Error::Precondition(format!("piece {} basis is dependent", p.name)));
            }
            if p.bracket.len() != k || p.bracket.iter().any(|r| r.len() != k) {
                return Err(Error::Dimension(format!("piece {} bracket table shape", p.name)));
            }
            for a in 0..k {
                for b in 0..k {
                    if let (Some(x), Some(y)) = (&p.bracket[a][b], &p.bracket[b][a]) {
                        if x.len() != k || x.iter().zip(y).any(|(u, v)| *u != -v) {
                            return Err(Error::Precondition(format!(
                                "piece {} bracket not antisymmetric at ({a},{b})",
                                p.name
                            )));
                        }
                    }
                }
            }
            if let Some((a, b, c)) = jacobi_failure(p) {
                return Err(Error::Precondition(format!("piece {} fails Jacobi at ({a},{b},{c})", p.name)));
            }
        }
        Ok(LieComposite { labels, pieces, window })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Induced brackets agree on every pairwise intersection.
    pub fn is_compatible(&self) -> bool {
        for (i, p) in self.pieces.iter().enumerate() {
            for q in &self.pieces[i + 1..] {
                let w = intersect_spans(&p.basis, &q.basis);
                for a in 0..w.cols() {
                    for b in a + 1..w.cols() {
                        let (x, y) = (w.column(a), w.column(b));
                        let via = |piece: &Piece| {
                            let bc = piece.bracket_coords(&piece.coords(&x)?, &piece.coords(&y)?)?;
                            Some(piece.ambient(&bc))
                        };
                        if let (Some(u), Some(v)) = (via(p), via(q)) {
                            if u != v {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }

    pub fn is_dense(&self) -> bool {
        let Some(first) = self.pieces.first() else {
            return self.dim() == 0;
        };
        let all = self.pieces[1..].iter().fold(first.basis.clone(), |acc, p| acc.hcat(&p.basis).unwrap());
        all.rank() == self.dim()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.pieces.len();
        if n == 0 {
            return true;
        }
        let adj: Vec<Vec<bool>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| i != j && intersect_spans(&self.pieces[i].basis, &self.pieces[j].basis).cols() > 0)
                    .collect()
            })
            .collect();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(i) = queue.pop_front() {
            for j in 0..n {
                if adj[i][j] && !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn flags(&self) -> CompositeFlags {
        CompositeFlags {
            compatible: self.is_compatible(),
            dense: self.is_dense(),
            connected: self.is_connected(),
        }
    }

    /// Copy keeping only the listed pieces.
    pub fn restrict_pieces(&self, keep: &[usize]) -> LieComposite {
        LieComposite {
            labels: self.labels.clone(),
            pieces: keep.iter().map(|&i| self.pieces[i].clone()).collect(),
            window: self.window.clone(),
        }
    }
}

pub fn composite_check(c: &LieComposite) -> CompositeFlags {
    c.flags()
}

fn jacobi_failure(p: &Piece) -> Option<(usize, usize, usize)> {
    let k = p.dim();
    let unit = |i: usize| {
        let mut v = vec![Rat::zero(); k];
        v[i] = rat_int(1);
        v
    };
    for a in 0..k {
        for b in a + 1..k {
            for c in b + 1..k {
                let (ea, eb, ec) = (unit(a), unit(b), unit(c));
                let term = |x: &[Rat], y: &[Rat], z: &[Rat]| -> Option<Vec<Rat>> {
                    let yz = p.bracket_coords(y, z)?;
                    p.bracket_coords(x, &yz)
                };
                let parts = [term(&ea, &eb, &ec), term(&eb, &ec, &ea), term(&ec, &ea, &eb)];
                if parts.iter().any(Option::is_none) {
                    continue;
                }
                let sum = parts.into_iter().flatten().fold(vec![Rat::zero(); k], |acc, v| {
                    acc.iter().zip(&v).map(|(x, y)| x + y).collect()
                });
                if sum.iter().any(|x| !x.is_zero()) {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

/// Degree window attached to a truncated representation: which matrix
/// columns are exact for a given product of operators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepWindow {
    /// Largest upward shift of each basis operator.
    pub raise: Vec<usize>,
    /// Per column, the remaining headroom `N - n` in each tensor factor.
    pub headroom: Vec<Vec<usize>>,
}

impl RepWindow {
    fn column_ok(&self, col: usize, need: usize) -> bool {
        self.headroom[col].iter().all(|&h| h >= need)
    }
}

/// Exact matrices assigned to the basis labels of a composite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixRep {
    pub dim: usize,
    pub mats: Vec<Matrix>,
    pub window: Option<RepWindow>,
}

impl MatrixRep {
    pub fn new(dim: usize, mats: Vec<Matrix>) -> Result<Self> {
        if mats.iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(Error::Dimension(format!("representation matrices must be {dim}x{dim}")));
        }
        Ok(MatrixRep { dim, mats, window: None })
    }

    pub fn zero(labels: usize, dim: usize) -> Self {
        MatrixRep { dim, mats: vec![Matrix::zeros(dim, dim); labels], window: None }
    }

    /// Truncates graded operators to degrees `0..=n`, recording the window.
    pub fn truncated(ops: &[GradedOp], n: usize) -> Self {
        MatrixRep {
            dim: n + 1,
            mats: ops.iter().map(|o| o.truncate(n)).collect(),
            window: Some(RepWindow {
                raise: ops.iter().map(GradedOp::raise).collect(),
                headroom: (0..=n).map(|c| vec![n - c]).collect(),
            }),
        }
    }

    /// Image of an ambient vector.
    pub fn image(&self, v: &[Rat]) -> Matrix {
        let mut out = Matrix::zeros(self.dim, self.dim);
        for (m, c) in self.mats.iter().zip(v) {
            if !c.is_zero() {
                out = &out + &m.scale(c);
            }
        }
        out
    }

    fn raise_of(&self, v: &[Rat]) -> usize {
        match &self.window {
            None => 0,
            Some(w) => v.iter().zip(&w.raise).filter(|(c, _)| !c.is_zero()).map(|(_, &r)| r).max().unwrap_or(0),
        }
    }

    /// Compression onto the coordinate subspace `keep`.
    pub fn compress(&self, keep: &[usize]) -> MatrixRep {
        let sub = |m: &Matrix| {
            let rows = keep.iter().map(|&r| keep.iter().map(|&c| m.get(r, c).clone()).collect()).collect();
            Matrix::from_rows(rows).unwrap()
        };
        MatrixRep {
            dim: keep.len(),
            mats: self.mats.iter().map(sub).collect(),
            window: self.window.as_ref().map(|w| RepWindow {
                raise: w.raise.clone(),
                headroom: keep.iter().map(|&c| w.headroom[c].clone()).collect(),
            }),
        }
    }

    /// Restriction to the span of the columns of `basis`, or `None` when
    /// that span is not invariant. Any window is dropped.
    pub fn restrict(&self, basis: &Matrix) -> Option<MatrixRep> {
        let mats = self
            .mats
            .iter()
            .map(|m| {
                let cols = (0..basis.cols())
                    .map(|c| basis.solve(&m.mul_vec(&basis.column(c))))
                    .collect::<Option<Vec<_>>>()?;
                Matrix::from_columns(&cols).ok()
            })
            .collect::<Option<Vec<_>>>()?;
        Some(MatrixRep { dim: basis.cols(), mats, window: None })
    }

    /// Columns that are exact for a product of operators raising by `need`.
    pub fn exact_columns(&self, need: usize) -> Vec<usize> {
        match &self.window {
            None => (0..self.dim).collect(),
            Some(w) => (0..self.dim).filter(|&c| w.column_ok(c, need)).collect(),
        }
    }
}

fn columns_agree(a: &Matrix, b: &Matrix, cols: &[usize]) -> bool {
    cols.iter().all(|&c| (0..a.rows()).all(|r| a.get(r, c) == b.get(r, c)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub piece: String,
    pub a: usize,
    pub b: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepReport {
    pub piece_pass: Vec<(String, bool)>,
    pub checked_pairs: usize,
    pub violations: Vec<Violation>,
}

impl RepReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `[T(x), T(y)] = T([x, y])` for every defined bracket of piece basis
/// vectors; windowed representations are compared on exact columns only.
pub fn check_representation(c: &LieComposite, t: &MatrixRep) -> Result<RepReport> {
    if t.mats.len() != c.dim() {
        return Err(Error::Dimension(format!(
            "representation assigns {} matrices to {} basis labels",
            t.mats.len(),
            c.dim()
        )));
    }
    let mut violations = Vec::new();
    let mut piece_pass = Vec::new();
    let mut checked_pairs = 0;
    for p in &c.pieces {
        let vecs: Vec<Vec<Rat>> = (0..p.dim()).map(|a| p.basis.column(a)).collect();
        let imgs: Vec<Matrix> = vecs.iter().map(|v| t.image(v)).collect();
        let mut ok = true;
        for a in 0..p.dim() {
            for b in a + 1..p.dim() {
                let Some(bc) = &p.bracket[a][b] else { continue };
                checked_pairs += 1;
                let lhs = imgs[a].commutator(&imgs[b]);
                let rhs = t.image(&p.ambient(bc));
                let cols = t.exact_columns(t.raise_of(&vecs[a]) + t.raise_of(&vecs[b]));
                if !columns_agree(&lhs, &rhs, &cols) {
                    ok = false;
                    violations.push(Violation { piece: p.name.clone(), a, b });
                }
            }
        }
        piece_pass.push((p.name.clone(), ok));
    }
    Ok(RepReport { piece_pass, checked_pairs, violations })
}

/// `x ↦ T1(x)⊗1 + 1⊗T2(x)`.
pub fn tensor_rep(t1: &MatrixRep, t2: &MatrixRep) -> Result<MatrixRep> {
    if t1.mats.len() != t2.mats.len() {
        return Err(Error::Dimension("tensor factors represent different composites".into()));
    }
    let (i1, i2) = (Matrix::identity(t1.dim), Matrix::identity(t2.dim));
    let mats = t1.mats.iter().zip(&t2.mats).map(|(a, b)| &a.kron(&i2) + &i1.kron(b)).collect();
    let window = match (&t1.window, &t2.window) {
        (None, None) => None,
        (w1, w2) => {
            let labels = t1.mats.len();
            let raise = (0..labels)
                .map(|l| {
                    let r1 = w1.as_ref().map_or(0, |w| w.raise[l]);
                    let r2 = w2.as_ref().map_or(0, |w| w.raise[l]);
                    r1.max(r2)
                })
                .collect();
            let head = |w: &Option<RepWindow>, c: usize| w.as_ref().map_or(Vec::new(), |w| w.headroom[c].clone());
            let mut headroom = Vec::with_capacity(t1.dim * t2.dim);
            for c1 in 0..t1.dim {
                for c2 in 0..t2.dim {
                    let mut h = head(w1, c1);
                    h.extend(head(w2, c2));
                    headroom.push(h);
                }
            }
            Some(RepWindow { raise, headroom })
        }
    };
    Ok(MatrixRep { dim: t1.dim * t2.dim, mats, window })
}

/// Label of `e_i` / `f_j` in a truncated Witt composite.
pub fn witt_label(i: i64) -> String {
    format!("e_{i}")
}

pub fn current_label(j: i64) -> String {
    format!("f_{j}")
}

/// Index of `e_i` (or `f_i` when `current`) among the composite labels.
pub fn witt_index(k: i64, i: i64, current: bool) -> usize {
    let base = if current { 2 * k + 1 } else { 0 };
    (base + i + k) as usize
}

/// Truncation of `(w; p+, p-)` to `e_{-K}..e_K`, optionally extended by
/// `f_{-K}..f_K` with the given `[e, f]` rule and `[f, f] = 0`. Brackets are
/// defined only when `|i + j| ≤ K`.
pub fn truncated_witt_composite(k: i64, extended: Option<&CurrentRule>) -> Result<LieComposite> {
    if k < 2 {
        return Err(Error::Precondition(format!("index window K = {k} must be at least 2")));
    }
    let mut labels: Vec<String> = (-k..=k).map(witt_label).collect();
    if extended.is_some() {
        labels.extend((-k..=k).map(current_label));
    }
    let n = labels.len();

    // (is_current, index) for every member of a piece
    let build = |name: &str, e_in: fn(i64) -> bool, f_in: fn(i64) -> bool| -> Result<Piece> {
        let mut members: Vec<(bool, i64)> = (-k..=k).filter(|&i| e_in(i)).map(|i| (false, i)).collect();
        if extended.is_some() {
            members.extend((-k..=k).filter(|&j| f_in(j)).map(|j| (true, j)));
        }
        let idx: Vec<usize> = members.iter().map(|&(f, i)| witt_index(k, i, f)).collect();
        let pos = |m: (bool, i64)| members.iter().position(|&x| x == m);
        let dim = members.len();
        let mut bracket: Brackets = vec![vec![None; dim]; dim];
        for (a, &(fa, ia)) in members.iter().enumerate() {
            for (b, &(fb, ib)) in members.iter().enumerate() {
                if (ia + ib).abs() > k {
                    continue;
                }
                let (coef, target) = match (fa, fb) {
                    (false, false) => (rat_int(ia - ib), (false, ia + ib)),
                    (false, true) => (extended.unwrap().coefficient(ia, ib), (true, ia + ib)),
                    (true, false) => (-extended.unwrap().coefficient(ib, ia), (true, ia + ib)),
                    (true, true) => (Rat::zero(), (true, ia + ib)),
                };
                let mut v = vec![Rat::zero(); dim];
                if !coef.is_zero() {
                    let t = pos(target).ok_or_else(|| {
                        Error::Precondition(format!("bracket leaves piece {name} at ({a},{b})"))
                    })?;
                    v[t] = coef;
                }
                bracket[a][b] = Some(v);
            }
        }
        Ok(Piece { name: name.into(), basis: Matrix::coordinate_columns(n, &idx), bracket })
    };
    let plus = build("p+", in_p_plus, |j| j >= 0)?;
    let minus = build("p-", in_p_minus, |j| j <= 0)?;
    let window = WindowContract {
        k,
        extended: extended.is_some(),
        description: format!("brackets defined only for window-closed pairs |i+j| <= {k}"),
    };
    LieComposite::new(labels, vec![plus, minus], Some(window))
}

/// Degree-`n` truncation of `ρ(e_i)` (and `φ(f_j)` when a rule is given)
/// for `|i|, |j| ≤ k`, labelled as in [`truncated_witt_composite`].
pub fn truncated_witt_rep(w: &WeightParam, k: i64, n: usize, rule: Option<&CurrentRule>) -> Result<MatrixRep> {
    let map = witt_assignment(w)?;
    let mut ops: Vec<GradedOp> = (-k..=k).map(|i| map.rho(w, i)).collect::<Result<_>>()?;
    if rule.is_some() {
        for j in -k..=k {
            ops.push(current(w, j)?);
        }
    }
    Ok(MatrixRep::truncated(&ops, n))
}

/// Coordinates of the tensor square of a degree-`n` window with total degree `≤ n`.
pub fn joint_window(n: usize) -> Vec<usize> {
    (0..=n).flat_map(|a| (0..=n - a).map(move |b| a * (n + 1) + b)).collect()
}
