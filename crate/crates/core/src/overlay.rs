//! Operator Lie composites `LC(H)` for a direct decomposition
//! `H = H_1 ⊕ … ⊕ H_k` and overlay representations into them.
//!
//! `End(H_i)` sits inside `End(H)` as the operators with image in `H_i`
//! that vanish on the other summands, i.e. the `X` with `π_i X π_i = X`
//! for the projection `π_i` along the complement. Non-direct sums have no
//! such embedding and are rejected.

use num_traits::Zero;
use serde::Serialize;

use crate::arith::Rat;
use crate::composite::{check_representation, truncated_witt_composite, truncated_witt_rep, LieComposite, MatrixRep};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::witt::{resolved_current_rule, WeightParam};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub dim: usize,
    pub subspaces: Vec<Matrix>,
    pub direct: bool,
}

impl Decomposition {
    pub fn new(dim: usize, subspaces: Vec<Matrix>) -> Result<Self> {
        if subspaces.iter().any(|s| s.rows() != dim) {
            return Err(Error::Dimension(format!("subspaces must live in dimension {dim}")));
        }
        let spanning = subspaces.iter().fold(Matrix::zeros(dim, 0), |acc, s| acc.hcat(s).unwrap());
        if spanning.rank() != dim {
            return Err(Error::Precondition("subspaces do not span the ambient space".into()));
        }
        let direct = spanning.cols() == dim && subspaces.iter().all(|s| s.rank() == s.cols());
        Ok(Decomposition { dim, subspaces, direct })
    }

    pub fn trivial(dim: usize) -> Self {
        Decomposition { dim, subspaces: vec![Matrix::identity(dim)], direct: true }
    }

    /// Graded bands `span{z^a..z^b}` of a degree window.
    pub fn bands(dim: usize, bands: &[(usize, usize)]) -> Result<Self> {
        let subs = bands
            .iter()
            .map(|&(a, b)| Matrix::coordinate_columns(dim, &(a..=b).collect::<Vec<_>>()))
            .collect();
        Decomposition::new(dim, subs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorPiece {
    /// Projection onto `H_i` along the other summands.
    pub projection: Matrix,
    /// Basis of `End(H_i)` as ambient operators.
    pub basis: Vec<Matrix>,
}

impl OperatorPiece {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, x: &Matrix) -> bool {
        &(&self.projection * x) * &self.projection == *x
    }

    fn contains_on(&self, x: &Matrix, cols: &[usize]) -> bool {
        let y = &(&self.projection * x) * &self.projection;
        cols.iter().all(|&c| (0..x.rows()).all(|r| y.get(r, c) == x.get(r, c)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorComposite {
    pub decomposition: Decomposition,
    pub pieces: Vec<OperatorPiece>,
}

pub fn build_lc(d: &Decomposition) -> Result<OperatorComposite> {
    if !d.direct {
        return Err(Error::NotDirect(
            "End(H_i) is only embedded in End(H) for a direct sum; this decomposition overlaps".into(),
        ));
    }
    let p = d.subspaces.iter().fold(Matrix::zeros(d.dim, 0), |acc, s| acc.hcat(s).unwrap());
    let pinv = p.inverse().expect("direct spanning decomposition is invertible");
    let mut start = 0;
    let mut pieces = Vec::new();
    for s in &d.subspaces {
        let k = s.cols();
        let dual: Vec<Vec<Rat>> = (start..start + k).map(|r| pinv.row(r).to_vec()).collect();
        let cols: Vec<Vec<Rat>> = (0..k).map(|c| s.column(c)).collect();
        let outer = |u: &[Rat], phi: &[Rat]| {
            Matrix::from_rows(u.iter().map(|a| phi.iter().map(|b| a * b).collect()).collect()).unwrap()
        };
        let projection = (0..k).fold(Matrix::zeros(d.dim, d.dim), |acc, c| &acc + &outer(&cols[c], &dual[c]));
        let basis = cols.iter().flat_map(|u| dual.iter().map(|phi| outer(u, phi))).collect();
        pieces.push(OperatorPiece { projection, basis });
        start += k;
    }
    Ok(OperatorComposite { decomposition: d.clone(), pieces })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OverlayViolation {
    pub piece: String,
    pub kind: String,
    pub detail: String,
}

impl std::fmt::Display for OverlayViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} ({}): {}", self.piece, self.kind, self.detail)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OverlayReport {
    pub violations: Vec<OverlayViolation>,
}

impl OverlayReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that each piece maps into its assigned `End(H_a)` as a Lie
/// homomorphism and that intersections land in the common operator pieces.
/// Windowed representations are compared on exact columns only.
pub fn is_overlay_rep(
    c: &LieComposite,
    t: &MatrixRep,
    lc: &OperatorComposite,
    assignment: &[usize],
) -> Result<OverlayReport> {
    if t.dim != lc.decomposition.dim {
        return Err(Error::Dimension(format!(
            "representation acts on dimension {}, decomposition on {}",
            t.dim, lc.decomposition.dim
        )));
    }
    if assignment.len() != c.pieces.len() || assignment.iter().any(|&a| a >= lc.pieces.len()) {
        return Err(Error::Dimension("assignment must send every piece to an operator piece".into()));
    }
    let raise = |v: &[Rat]| match &t.window {
        None => 0,
        Some(w) => v.iter().zip(&w.raise).filter(|(x, _)| !x.is_zero()).map(|(_, &r)| r).max().unwrap_or(0),
    };
    let mut violations = Vec::new();
    for (i, p) in c.pieces.iter().enumerate() {
        let target = &lc.pieces[assignment[i]];
        for a in 0..p.dim() {
            let v = p.basis.column(a);
            if !target.contains_on(&t.image(&v), &t.exact_columns(raise(&v))) {
                violations.push(OverlayViolation {
                    piece: p.name.clone(),
                    kind: "containment".into(),
                    detail: format!("basis vector {a} leaves End(H_{})", assignment[i] + 1),
                });
            }
        }
        let hom = check_representation(&c.restrict_pieces(&[i]), t)?;
        violations.extend(hom.violations.into_iter().map(|v| OverlayViolation {
            piece: v.piece,
            kind: "bracket".into(),
            detail: format!("[u_{}, u_{}]", v.a, v.b),
        }));
    }
    for (i, p) in c.pieces.iter().enumerate() {
        for (j, q) in c.pieces.iter().enumerate().skip(i + 1) {
            let w = crate::linalg::intersect_spans(&p.basis, &q.basis);
            let (pi, pj) = (&lc.pieces[assignment[i]], &lc.pieces[assignment[j]]);
            for col in 0..w.cols() {
                let v = w.column(col);
                let img = t.image(&v);
                let cols = t.exact_columns(raise(&v));
                if !(pi.contains_on(&img, &cols) && pj.contains_on(&img, &cols)) {
                    violations.push(OverlayViolation {
                        piece: format!("{}∩{}", p.name, q.name),
                        kind: "glueing".into(),
                        detail: format!("intersection vector {col} leaves End(H_{}) ∩ End(H_{})", assignment[i] + 1, assignment[j] + 1),
                    });
                }
            }
        }
    }
    Ok(OverlayReport { violations })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BandCandidate {
    pub bands: Vec<(usize, usize)>,
    pub pass: bool,
    /// Passing piece-to-band assignment (1-based bands).
    pub assignment: Option<Vec<usize>>,
    pub first_violation: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindowSearch {
    pub h: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub spin: u8,
    #[serde(rename = "K")]
    pub k: i64,
    pub candidates: Vec<BandCandidate>,
}

impl WindowSearch {
    pub fn passing(&self) -> impl Iterator<Item = &BandCandidate> {
        self.candidates.iter().filter(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("search report serializes")
    }
}

/// Every partition of `0..=n` into contiguous bands, in lexicographic order.
pub fn band_partitions(n: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out: Vec<Vec<(usize, usize)>> = (0u32..(1 << n))
        .map(|cuts| {
            let mut bands = Vec::new();
            let mut start = 0;
            for k in 0..n {
                if cuts >> k & 1 == 1 {
                    bands.push((start, k));
                    start = k + 1;
                }
            }
            bands.push((start, n));
            bands
        })
        .collect();
    out.sort();
    out
}

fn assignments(pieces: usize, targets: usize) -> Vec<Vec<usize>> {
    (0..pieces).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|a| {
                (0..targets).map(move |t| {
                    let mut b = a.clone();
                    b.push(t);
                    b
                })
            })
            .collect()
    })
}

/// Exhaustive overlay search over graded band decompositions of the
/// degree-`n` window, using the spin-2 family (`spin = 2`) or its extension
/// by the spin-1 currents (`spin = 1`), both with index window `K = n/2`.
/// A candidate passes when some piece-to-band assignment passes; its
/// `first_violation` comes from the first assignment tried.
pub fn overlay_window_search(w: &WeightParam, n: usize, spin: u8) -> Result<WindowSearch> {
    if n < 4 {
        return Err(Error::Precondition(format!("degree window N = {n} must be at least 4")));
    }
    let k = (n / 2) as i64;
    let rule = match spin {
        2 => None,
        1 => Some(resolved_current_rule(w)?),
        _ => return Err(Error::Precondition(format!("spin must be 1 or 2, got {spin}"))),
    };
    let c = truncated_witt_composite(k, rule.as_ref())?;
    let t = truncated_witt_rep(w, k, n, rule.as_ref())?;
    let mut candidates = Vec::new();
    for bands in band_partitions(n) {
        let lc = build_lc(&Decomposition::bands(n + 1, &bands)?)?;
        let mut first_violation = None;
        let mut assignment = None;
        for a in assignments(c.pieces.len(), bands.len()) {
            let r = is_overlay_rep(&c, &t, &lc, &a)?;
            if r.passes() {
                assignment = Some(a.iter().map(|x| x + 1).collect());
                break;
            }
            if first_violation.is_none() {
                first_violation = r.violations.first().map(ToString::to_string);
            }
        }
        let pass = assignment.is_some();
        candidates.push(BandCandidate {
            bands,
            pass,
            assignment,
            first_violation: if pass { None } else { first_violation },
        });
    }
    Ok(WindowSearch { h: w.h().to_string(), n, spin, k, candidates })
}
