//! Numeric Fuchsian layer: surface-group words as isometries of the
//! hyperbolic plane, translation lengths, certified systole upper bounds
//! for covers, and empirical quasi-isometry constants.

use crate::baumslag::Sg2Action;
use crate::error::{Error, Result};
use crate::words::{enumerate_ball, SLetter, SurfaceWord, DEFAULT_RADIUS};
use serde::{Deserialize, Serialize};

/// Determinant tolerance for renormalized matrices.
pub const DET_TOL: f64 = 1e-9;
/// Margin above |trace| = 2 required to call a matrix hyperbolic.
pub const TRACE_TOL: f64 = 1e-9;

/// A real 2x2 matrix of determinant 1, stored row-major; every product is
/// renormalized so the determinant stays pinned.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat2(pub [f64; 4]);

impl Mat2 {
    pub fn identity() -> Mat2 {
        Mat2([1.0, 0.0, 0.0, 1.0])
    }

    pub fn new(entries: [f64; 4]) -> Result<Mat2> {
        let m = Mat2(entries);
        let det = m.det();
        if det <= 0.0 {
            return Err(Error::BadRep(format!("determinant {det} not positive")));
        }
        let m = m.renormalized();
        if (m.det() - 1.0).abs() > DET_TOL {
            return Err(Error::BadRep(format!(
                "determinant {} off unity beyond tolerance",
                m.det()
            )));
        }
        Ok(m)
    }

    pub fn det(&self) -> f64 {
        // Compensated a*d - b*c (Kahan): accurate even when a*d and b*c are
        // huge and nearly cancel, which happens for long hyperbolic words.
        let [a, b, c, d] = self.0;
        let w = b * c;
        let e = (-b).mul_add(c, w);
        let f = a.mul_add(d, -w);
        f + e
    }

    pub fn trace(&self) -> f64 {
        self.0[0] + self.0[3]
    }

    fn renormalized(self) -> Mat2 {
        let s = self.det().sqrt();
        let [a, b, c, d] = self.0;
        Mat2([a / s, b / s, c / s, d / s])
    }

    pub fn mul(&self, other: &Mat2) -> Mat2 {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = other.0;
        // No automatic renormalization: for long hyperbolic words the
        // computed determinant drift lives almost entirely in the tiny
        // eigenvalue, and dividing by sqrt(det) would corrupt the dominant
        // one (and with it every trace and length). Inputs are normalized
        // once at load time; products keep full relative accuracy of the
        // dominant eigenvalue.
        Mat2([
            a * e + b * g,
            a * f + b * h,
            c * e + d * g,
            c * f + d * h,
        ])
    }

    /// Inverse of a determinant-1 matrix.
    pub fn inv(&self) -> Mat2 {
        let [a, b, c, d] = self.0;
        Mat2([d, -b, -c, a]).renormalized()
    }

    /// Distance to another matrix up to projective sign: min over signs of
    /// the max entrywise deviation.
    pub fn projective_distance(&self, other: &Mat2) -> f64 {
        let dev = |sign: f64| -> f64 {
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(x, y)| (x - sign * y).abs())
                .fold(0.0, f64::max)
        };
        dev(1.0).min(dev(-1.0))
    }

    /// Image of the point i under the Moebius action, as (re, im).
    pub fn act_on_i(&self) -> (f64, f64) {
        let [a, b, c, d] = self.0;
        // (a*i + b) / (c*i + d)
        let denom = c * c + d * d;
        ((b * d + a * c) / denom, (a * d - b * c) / denom)
    }
}

/// Hyperbolic distance between upper-half-plane points.
pub fn hyperbolic_distance(z1: (f64, f64), z2: (f64, f64)) -> f64 {
    let dx = z1.0 - z2.0;
    let dy = z1.1 - z2.1;
    let cosh_d = 1.0 + (dx * dx + dy * dy) / (2.0 * z1.1 * z2.1);
    cosh_d.acosh()
}

/// Translation length of a hyperbolic isometry: 2 arccosh(|tr| / 2).
pub fn translation_length(m: &Mat2) -> Result<f64> {
    let t = m.trace().abs();
    if t <= 2.0 + TRACE_TOL {
        return Err(Error::NotHyperbolic(t));
    }
    Ok(2.0 * (t / 2.0).acosh())
}

/// A discrete faithful representation of SG2 into PSL(2, R): matrices for
/// the four generators, validated against the relator and hyperbolicity.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FuchsianRep {
    pub x: Mat2,
    pub y: Mat2,
    pub a: Mat2,
    pub b: Mat2,
    pub tolerance: f64,
}

/// Wire form of a representation config: row-major entry arrays.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepConfig {
    pub x: [f64; 4],
    pub y: [f64; 4],
    pub a: [f64; 4],
    pub b: [f64; 4],
    pub tolerance: f64,
}

/// Generator matrices for the Bolza surface, the genus-2 surface of maximal
/// systole 2 arccosh(1 + sqrt 2). x is diagonal with eigenvalues
/// (1 + sqrt 2) +/- sqrt(2 + 2 sqrt 2); the others are conjugates of equal
/// trace arranged so the genus-2 relator holds to machine precision.
pub fn bolza_config() -> RepConfig {
    RepConfig {
        x: [4.611581789308718, 0.0, 0.0, 0.216845335437475],
        y: [
            -2.4142135623731047,
            0.47648905024950755,
            10.133343299741906,
            -2.414213562373103,
        ],
        a: [
            -1.6738572771851272,
            -4.828427124746198,
            4.828427124746196,
            13.330711526677522,
        ],
        b: [
            6.1653557633387495,
            4.967987536403132,
            -1.8604395883430573,
            -1.3369286385925623,
        ],
        tolerance: 1e-8,
    }
}

/// Validate and load a representation from its config.
pub fn load_rep(config: &RepConfig) -> Result<FuchsianRep> {
    if !(config.tolerance > 0.0) {
        return Err(Error::BadRep("tolerance must be positive".into()));
    }
    let rep = FuchsianRep {
        x: Mat2::new(config.x)?,
        y: Mat2::new(config.y)?,
        a: Mat2::new(config.a)?,
        b: Mat2::new(config.b)?,
        tolerance: config.tolerance,
    };
    let mut problems = Vec::new();
    for (name, m) in [("x", &rep.x), ("y", &rep.y), ("a", &rep.a), ("b", &rep.b)] {
        if m.trace().abs() <= 2.0 + TRACE_TOL {
            problems.push(format!("generator {name} not hyperbolic (|tr| = {})", m.trace().abs()));
        }
    }
    let rel = evaluate(&rep, &SurfaceWord::from_letters(crate::words::relator().clone()));
    let residual = rel.projective_distance(&Mat2::identity());
    if residual > config.tolerance {
        problems.push(format!(
            "relator residual {residual:e} above tolerance {:e}",
            config.tolerance
        ));
    }
    if !problems.is_empty() {
        return Err(Error::BadRep(problems.join("; ")));
    }
    Ok(rep)
}

/// The default validated representation (Bolza).
pub fn default_rep() -> FuchsianRep {
    load_rep(&bolza_config()).expect("frozen config validates")
}

/// Evaluate a surface word as a matrix.
pub fn evaluate(rep: &FuchsianRep, w: &SurfaceWord) -> Mat2 {
    let of = |s: SLetter| -> Mat2 {
        match s {
            SLetter::X => rep.x,
            SLetter::Xi => rep.x.inv(),
            SLetter::Y => rep.y,
            SLetter::Yi => rep.y.inv(),
            SLetter::A => rep.a,
            SLetter::Ai => rep.a.inv(),
            SLetter::B => rep.b,
            SLetter::Bi => rep.b.inv(),
        }
    };
    w.letters()
        .iter()
        .fold(Mat2::identity(), |acc, &s| acc.mul(&of(s)))
}

/// A certified systole upper bound for the cover defined by an action.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundReport {
    pub upper_bound: f64,
    pub witness: String,
    pub cutoff: usize,
}

/// Minimum translation length over all nontrivial base-stabilizing elements
/// of the ball of the given radius: an upper bound on the cover's systole
/// (it ranges over a subset of the subgroup's conjugacy classes).
pub fn systole_upper_bound(
    rep: &FuchsianRep,
    action: &Sg2Action,
    cutoff: usize,
) -> Result<BoundReport> {
    if cutoff == 0 || cutoff > DEFAULT_RADIUS {
        return Err(Error::Usage(format!(
            "cutoff must be in 1..={DEFAULT_RADIUS}"
        )));
    }
    let mut best: Option<(f64, SurfaceWord)> = None;
    for el in enumerate_ball(cutoff)? {
        if el.length == 0 || !action.contains(&el.word) {
            continue;
        }
        let len = translation_length(&evaluate(rep, &el.word))?;
        if best.as_ref().map_or(true, |(b, _)| len < *b) {
            best = Some((len, el.word));
        }
    }
    match best {
        Some((upper_bound, w)) => Ok(BoundReport {
            upper_bound,
            witness: w.to_string(),
            cutoff,
        }),
        None => Err(Error::NoStabilizer(cutoff)),
    }
}

/// Empirical quasi-isometry constants: lexicographically least (q, beta) on
/// a fixed grid such that for every element w of the ball,
///   l_B(w)/q - beta <= dist(i, w.i) <= q l_B(w) + beta.
/// Valid only for the sampled radius.
pub fn estimate_milnor_schwarz(rep: &FuchsianRep, radius: usize) -> Result<(f64, f64)> {
    if radius < 2 || radius > DEFAULT_RADIUS {
        return Err(Error::Usage(format!(
            "radius must be in 2..={DEFAULT_RADIUS}"
        )));
    }
    let p = (0.0, 1.0);
    let data: Vec<(usize, f64)> = enumerate_ball(radius)?
        .into_iter()
        .map(|el| {
            let z = evaluate(rep, &el.word).act_on_i();
            (el.length, hyperbolic_distance(p, z))
        })
        .collect();
    const STEP: f64 = 0.05;
    const GRID_MAX: f64 = 20.0;
    let mut q = 1.0;
    while q <= GRID_MAX {
        let mut beta = 0.0;
        while beta <= GRID_MAX {
            if data
                .iter()
                .all(|&(l, d)| l as f64 / q - beta <= d && d <= q * l as f64 + beta)
            {
                return Ok((q, beta));
            }
            beta += STEP;
        }
        q += STEP;
    }
    Err(Error::Assertion("no (q, beta) on the grid".into()))
}

/// Genus of a degree-n cover of a genus-2 surface (Euler characteristic
/// multiplicativity).
pub fn genus_of_cover(n: usize) -> usize {
    n + 1
}
