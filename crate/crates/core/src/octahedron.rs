//! The octahedron composite: six vertices, the four alternating faces
//! `(ABC), (ADE), (CDF), (EBF)` each carrying cyclic so(3) constants, and a
//! concrete so(4) model representation on the quaternions.
//!
//! The model uses two commuting su(2) triples on `H ≅ Q^4`:
//! `J_a = ½·(left multiplication by i, j, k)` and
//! `K_a = -½·(right multiplication by i, j, k)`. Opposite vertices share an
//! axis, and every vertex is `±J_a ± K_a`; the signs are found by exhaustive
//! search over the face-closure conditions.

use std::path::Path;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{rat, rat_int, Rat};
use crate::burnside::burnside_irreducible;
use crate::composite::{check_representation, Brackets, LieComposite, MatrixRep, Piece, RepReport};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

pub const VERTICES: [&str; 6] = ["A", "B", "C", "D", "E", "F"];
/// Faces as cyclically ordered vertex triples: `[x, y] = z` and cyclic.
pub const FACES: [[usize; 3]; 4] = [[0, 1, 2], [0, 3, 4], [2, 3, 5], [4, 1, 5]];
pub const OPPOSITE: [(usize, usize); 3] = [(0, 5), (1, 3), (2, 4)];
/// su(2) axis used by each vertex (opposite vertices share one).
pub const AXIS: [usize; 6] = [0, 1, 2, 1, 2, 0];

pub fn default_fixture_path() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/octahedron_so4.json"))
}

pub fn octahedron() -> LieComposite {
    let pieces = FACES
        .iter()
        .map(|face| {
            let mut bracket: Brackets = vec![vec![None; 3]; 3];
            for a in 0..3 {
                for b in 0..3 {
                    let mut v = vec![Rat::zero(); 3];
                    if a != b {
                        let sign = if (a + 1) % 3 == b { 1 } else { -1 };
                        v[3 - a - b] = rat_int(sign);
                    }
                    bracket[a][b] = Some(v);
                }
            }
            Piece {
                name: face.iter().map(|&v| VERTICES[v]).collect(),
                basis: Matrix::coordinate_columns(6, face),
                bracket,
            }
        })
        .collect();
    let labels = VERTICES.iter().map(|s| s.to_string()).collect();
    LieComposite::new(labels, pieces, None).expect("octahedron faces are so(3)")
}

/// Vertex `v ↦ alpha·J_axis + beta·K_axis`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexSigns {
    pub alpha: i8,
    pub beta: i8,
}

/// `[u_a, u_b] = ε u_c` in each su(2) triple.
fn levi_civita(a: usize, b: usize) -> (usize, i8) {
    let c = 3 - a - b;
    (c, if (a + 1) % 3 == b { 1 } else { -1 })
}

fn faces_close(s: &[VertexSigns; 6]) -> bool {
    FACES.iter().all(|f| {
        (0..3).all(|r| {
            let (x, y, z) = (f[r], f[(r + 1) % 3], f[(r + 2) % 3]);
            let (c, eps) = levi_civita(AXIS[x], AXIS[y]);
            c == AXIS[z]
                && eps * s[x].alpha * s[y].alpha == s[z].alpha
                && eps * s[x].beta * s[y].beta == s[z].beta
        })
    })
}

/// Opposite vertices must be independent for the images to span so(4).
fn spans_so4(s: &[VertexSigns; 6]) -> bool {
    OPPOSITE.iter().all(|&(x, y)| s[x].alpha * s[y].beta != s[x].beta * s[y].alpha)
}

/// All sign assignments closing every face, in lexicographic order with
/// `+1` before `-1`, restricted to those spanning so(4).
pub fn solve_model_signs() -> Vec<[VertexSigns; 6]> {
    let mut out = Vec::new();
    for bits in 0u32..(1 << 12) {
        let sign = |k: u32| if bits >> (11 - k) & 1 == 0 { 1 } else { -1 };
        let s: [VertexSigns; 6] =
            std::array::from_fn(|v| VertexSigns { alpha: sign(2 * v as u32), beta: sign(2 * v as u32 + 1) });
        if faces_close(&s) && spans_so4(&s) {
            out.push(s);
        }
    }
    out
}

/// Quaternion product on coordinates `(1, i, j, k)`.
fn quat_mul(p: [i64; 4], q: [i64; 4]) -> [i64; 4] {
    let [a1, b1, c1, d1] = p;
    let [a2, b2, c2, d2] = q;
    [
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    ]
}

fn unit(k: usize) -> [i64; 4] {
    let mut u = [0; 4];
    u[k] = 1;
    u
}

fn mult_matrix(left: bool, axis: usize, scale: Rat) -> Matrix {
    let q = unit(axis + 1);
    let cols: Vec<Vec<Rat>> = (0..4)
        .map(|k| {
            let img = if left { quat_mul(q, unit(k)) } else { quat_mul(unit(k), q) };
            img.iter().map(|&x| rat_int(x) * &scale).collect()
        })
        .collect();
    Matrix::from_columns(&cols).unwrap()
}

/// `J_a`, acting by left multiplication.
pub fn j_gen(axis: usize) -> Matrix {
    mult_matrix(true, axis, rat(1, 2))
}

/// `K_a`, acting by right multiplication.
pub fn k_gen(axis: usize) -> Matrix {
    mult_matrix(false, axis, rat(-1, 2))
}

pub fn model_from_signs(s: &[VertexSigns; 6]) -> MatrixRep {
    let mats = (0..6)
        .map(|v| {
            let a = AXIS[v];
            &j_gen(a).scale(&rat_int(s[v].alpha as i64)) + &k_gen(a).scale(&rat_int(s[v].beta as i64))
        })
        .collect();
    MatrixRep::new(4, mats).unwrap()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureVertex {
    pub vertex: String,
    pub axis: usize,
    pub alpha: i8,
    pub beta: i8,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelFixture {
    pub description: String,
    pub space: String,
    pub vertices: Vec<FixtureVertex>,
}

/// Fixture content derived from the first solution of the sign search.
pub fn derive_model_fixture() -> ModelFixture {
    let signs = solve_model_signs()[0];
    let rep = model_from_signs(&signs);
    ModelFixture {
        description: "octahedron vertices as alpha*J_axis + beta*K_axis with J_a = l_a/2, K_a = -r_a/2".into(),
        space: "quaternions, basis 1, i, j, k".into(),
        vertices: (0..6)
            .map(|v| FixtureVertex {
                vertex: VERTICES[v].into(),
                axis: AXIS[v] + 1,
                alpha: signs[v].alpha,
                beta: signs[v].beta,
                matrix: rep.mats[v].to_grid(),
            })
            .collect(),
    }
}

impl ModelFixture {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("fixture serializes") + "\n"
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("octahedron fixture: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Matrices in vertex order `A..F`.
    pub fn rep(&self) -> Result<MatrixRep> {
        let mut mats = Vec::with_capacity(6);
        for name in VERTICES {
            let v = self
                .vertices
                .iter()
                .find(|v| v.vertex == name)
                .ok_or_else(|| Error::Parse(format!("fixture lacks vertex {name}")))?;
            mats.push(Matrix::from_grid(&v.matrix)?);
        }
        let dim = mats[0].rows();
        MatrixRep::new(dim, mats)
    }
}

pub fn model_rep() -> MatrixRep {
    model_from_signs(&solve_model_signs()[0])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OppositeCheck {
    pub pair: (String, String),
    pub commutator_zero: bool,
    pub central: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OctahedronReport {
    pub faces: RepReport,
    pub opposite: Vec<OppositeCheck>,
    pub irreducible: bool,
    /// Shifts `λ_A..λ_F`; `None` when not attempted or inconsistent.
    pub lambdas: Option<Vec<Rat>>,
    /// Shifted operators satisfy every so(4) bracket of the octahedron.
    pub so4_relations: bool,
    pub hypothesis_failure: Option<String>,
}

impl OctahedronReport {
    pub fn passes(&self) -> bool {
        self.faces.passes()
            && self.hypothesis_failure.is_none()
            && self.irreducible
            && self.lambdas.is_some()
            && self.so4_relations
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "faces": self.faces.piece_pass.iter().map(|(n, ok)| serde_json::json!({"face": n, "pass": ok})).collect::<Vec<_>>(),
            "face_violations": self.faces.violations,
            "opposite": self.opposite,
            "irreducible": self.irreducible,
            "lambdas": self.lambdas.as_ref().map(|l| {
                VERTICES.iter().zip(l).map(|(v, x)| (v.to_string(), serde_json::Value::String(x.to_string()))).collect::<serde_json::Map<_, _>>()
            }),
            "so4_relations": self.so4_relations,
            "hypothesis_failure": self.hypothesis_failure,
            "pass": self.passes(),
        })
    }
}

/// Every octahedron bracket `[x, y] = c·z` (faces) and `[x, x'] = 0`.
fn so4_relations() -> Vec<(usize, usize, Option<usize>)> {
    let mut rel: Vec<(usize, usize, Option<usize>)> = FACES
        .iter()
        .flat_map(|f| (0..3).map(move |r| (f[r], f[(r + 1) % 3], Some(f[(r + 2) % 3]))))
        .collect();
    rel.extend(OPPOSITE.iter().map(|&(x, y)| (x, y, None)));
    rel
}

fn relations_hold(mats: &[Matrix]) -> bool {
    so4_relations().into_iter().all(|(x, y, z)| {
        let c = mats[x].commutator(&mats[y]);
        match z {
            Some(z) => c == mats[z],
            None => c.is_zero(),
        }
    })
}

/// Solves `T(z) - [T(x), T(y)] = λ_z·1` over the face relations; the
/// commutators are unchanged by scalar shifts, so this is linear in `λ`.
fn recover_lambdas(t: &MatrixRep) -> Option<Vec<Rat>> {
    let m = t.dim;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (x, y, z) in so4_relations() {
        let c = t.mats[x].commutator(&t.mats[y]);
        let target = match z {
            Some(z) => &t.mats[z] - &c,
            None => -&c,
        };
        for i in 0..m {
            for j in 0..m {
                let mut row = vec![Rat::zero(); 6];
                if let (Some(z), true) = (z, i == j) {
                    row[z] = rat_int(1);
                }
                rows.push(row);
                rhs.push(target.get(i, j).clone());
            }
        }
    }
    Matrix::from_rows(rows).ok()?.solve(&rhs)
}

pub fn verify_octahedron_model(t: &MatrixRep) -> Result<OctahedronReport> {
    let c = octahedron();
    let faces = check_representation(&c, t)?;
    let opposite: Vec<OppositeCheck> = OPPOSITE
        .iter()
        .map(|&(x, y)| {
            let comm = t.mats[x].commutator(&t.mats[y]);
            OppositeCheck {
                pair: (VERTICES[x].into(), VERTICES[y].into()),
                commutator_zero: comm.is_zero(),
                central: t.mats.iter().all(|v| comm.commutator(v).is_zero()),
            }
        })
        .collect();
    let hypothesis_failure = opposite.iter().find(|o| !o.central).map(|o| {
        format!("[T({}), T({})] is not central", o.pair.0, o.pair.1)
    });
    let irreducible = t.dim > 0 && burnside_irreducible(&t.mats);
    let lambdas = if irreducible && hypothesis_failure.is_none() { recover_lambdas(t) } else { None };
    let so4_relations = lambdas.as_ref().is_some_and(|l| {
        let shifted: Vec<Matrix> =
            t.mats.iter().zip(l).map(|(m, x)| m - &Matrix::scalar(t.dim, x.clone())).collect();
        relations_hold(&shifted)
    });
    Ok(OctahedronReport { faces, opposite, irreducible, lambdas, so4_relations, hypothesis_failure })
}
