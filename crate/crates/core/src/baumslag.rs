//! Quantitative residual-freeness machinery: the retraction homomorphisms
//! psi_k from the genus-2 surface group onto F2, delta-word normal forms,
//! and preimage subgroups of SG2 pulled back along psi_k.

use crate::error::{Error, Result};
use crate::schreier::SchreierAction;
use crate::words::{
    enumerate_ball, in_cyclic_u, reduce, u_pow, FLetter, FreeWord, SLetter, SurfaceWord,
};
use serde::{Deserialize, Serialize};

/// The retraction psi_k: SG2 -> F2 fixing x, y and sending the second-handle
/// generators a, b to u^l y u^{-l}, u^l x u^{-l} with l = d*k. The defaults
/// d = 7 (hence epsilon = 9d = 63) are the only supported values for
/// acceptance runs; d is overridable for experiments.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PsiMap {
    pub k: usize,
    pub d: usize,
}

/// The default conjugation depth d.
pub const DEFAULT_D: usize = 7;
/// The length-comparison constant epsilon = 9d for the default d.
pub const EPSILON: usize = 9 * DEFAULT_D;

impl PsiMap {
    pub fn new(k: usize) -> Result<PsiMap> {
        PsiMap::with_d(k, DEFAULT_D)
    }

    pub fn with_d(k: usize, d: usize) -> Result<PsiMap> {
        if k < 1 || d < 1 {
            return Err(Error::Usage("psi map needs k >= 1 and d >= 1".into()));
        }
        Ok(PsiMap { k, d })
    }

    /// The conjugation exponent l = d*k.
    pub fn l(&self) -> usize {
        self.d * self.k
    }

    pub fn epsilon(&self) -> usize {
        9 * self.d
    }

    /// Image of a single surface-group letter.
    fn letter_image(&self, s: SLetter) -> FreeWord {
        let l = self.l() as i64;
        let conj = |mid: FreeWord| u_pow(l).mul(&mid).mul(&u_pow(-l));
        match s {
            SLetter::X => FreeWord::parse("x").expect("static"),
            SLetter::Xi => FreeWord::parse("X").expect("static"),
            SLetter::Y => FreeWord::parse("y").expect("static"),
            SLetter::Yi => FreeWord::parse("Y").expect("static"),
            SLetter::A => conj(FreeWord::parse("y").expect("static")),
            SLetter::Ai => conj(FreeWord::parse("Y").expect("static")),
            SLetter::B => conj(FreeWord::parse("x").expect("static")),
            SLetter::Bi => conj(FreeWord::parse("X").expect("static")),
        }
    }
}

/// Apply psi to a surface word: substitute letterwise and freely reduce.
/// Well-defined on group elements because the relator maps to the identity,
/// so any two representatives of the same element land on the same reduced
/// word.
pub fn psi_apply(map: &PsiMap, w: &SurfaceWord) -> FreeWord {
    let mut letters = Vec::new();
    for &s in w.letters() {
        letters.extend_from_slice(map.letter_image(s).letters());
    }
    reduce(&letters)
}

/// Report of an exhaustive injectivity sweep over an exact ball in SG2.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InjectivityReport {
    pub k: usize,
    pub radius: usize,
    pub elements_checked: usize,
    pub violations: usize,
    pub max_image_length: usize,
}

/// Check that psi_k is injective-off-identity on the ball of the given
/// radius: every element with 1 < l_B <= radius has nontrivial image, every
/// generator maps to a nontrivial word, and every image obeys the length
/// bound l_A(psi(w)) <= epsilon * k * l_B(w).
pub fn verify_ball_injectivity(map: &PsiMap, radius: usize) -> Result<InjectivityReport> {
    if radius > map.k {
        return Err(Error::Usage(format!(
            "radius {radius} exceeds k = {}; the sweep certifies nothing beyond k",
            map.k
        )));
    }
    let ball = enumerate_ball(radius)?;
    let mut report = InjectivityReport {
        k: map.k,
        radius,
        elements_checked: 0,
        violations: 0,
        max_image_length: 0,
    };
    for el in &ball {
        if el.length == 0 {
            continue;
        }
        report.elements_checked += 1;
        let image = psi_apply(map, &el.word);
        report.max_image_length = report.max_image_length.max(image.len());
        // Length-1 elements are outside the quantifier of the injectivity
        // statement but must still map to nontrivial words.
        if image.is_empty() {
            report.violations += 1;
        }
        if image.len() > map.epsilon() * map.k * el.length {
            return Err(Error::Assertion(format!(
                "length bound fails: {} > {}*{}*{} for {}",
                image.len(),
                map.epsilon(),
                map.k,
                el.length,
                el.word
            )));
        }
    }
    if report.violations > 0 {
        return Err(Error::Assertion(format!(
            "{} ball elements map to the identity (implementation falsified)",
            report.violations
        )));
    }
    Ok(report)
}

/// Report of a delta-word normal-form check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeltaReport {
    pub k: usize,
    pub r: usize,
    pub variants_checked: usize,
    pub all_nontrivial: bool,
    pub min_variant_length: usize,
    pub undeleted_length: usize,
}

/// Check the four delta-variants of
///   gamma_1 u^{dk} eta_1 u^{-dk} gamma_2 ... u^{-dk} gamma_{r+1}
/// (deleting or keeping each of gamma_1, gamma_{r+1}): all reduce to
/// nontrivial words, and the undeleted variant keeps length > 18k.
pub fn delta_word_check(gammas: &[FreeWord], etas: &[FreeWord], k: usize) -> Result<DeltaReport> {
    if k < 1 || etas.is_empty() || gammas.len() != etas.len() + 1 {
        return Err(Error::Usage(
            "need k >= 1, r >= 1 inner words, and r+1 outer words".into(),
        ));
    }
    let r = etas.len();
    // Inner gammas and all etas must avoid the cyclic subgroup of u; the
    // two outer gammas are unconstrained.
    for g in &gammas[1..r] {
        if in_cyclic_u(g) {
            return Err(Error::WordInCyclicU);
        }
    }
    for e in etas {
        if in_cyclic_u(e) {
            return Err(Error::WordInCyclicU);
        }
    }
    let total: usize =
        gammas.iter().map(FreeWord::len).sum::<usize>() + etas.iter().map(FreeWord::len).sum::<usize>();
    if total > k {
        return Err(Error::WordTooLong {
            len: total,
            budget: k,
        });
    }
    let dk = (DEFAULT_D * k) as i64;
    let build = |drop_first: bool, drop_last: bool| -> FreeWord {
        let mut w = if drop_first {
            FreeWord::identity()
        } else {
            gammas[0].clone()
        };
        for i in 0..r {
            w = w.mul(&u_pow(dk)).mul(&etas[i]).mul(&u_pow(-dk));
            if i + 1 < r || !drop_last {
                w = w.mul(&gammas[i + 1]);
            }
        }
        w
    };
    let variants = [
        build(false, false),
        build(true, false),
        build(false, true),
        build(true, true),
    ];
    let min_len = variants.iter().map(FreeWord::len).min().unwrap();
    let all_nontrivial = variants.iter().all(|v| !v.is_empty());
    if !all_nontrivial {
        return Err(Error::Assertion("a delta variant reduced to identity".into()));
    }
    let undeleted = variants[0].len();
    if undeleted <= 18 * k {
        return Err(Error::Assertion(format!(
            "undeleted variant too short: {undeleted} <= 18k = {}",
            18 * k
        )));
    }
    Ok(DeltaReport {
        k,
        r,
        variants_checked: 4,
        all_nontrivial,
        min_variant_length: min_len,
        undeleted_length: undeleted,
    })
}

/// A transitive action of SG2 on {0..n-1}: permutations for the four
/// generators plus a base point. Produced by pulling a free-group action
/// back along psi.
#[derive(Debug, Clone, Serialize)]
pub struct Sg2Action {
    perms: [Vec<usize>; 4],
    inv_perms: [Vec<usize>; 4],
    base: usize,
}

impl Sg2Action {
    pub fn degree(&self) -> usize {
        self.perms[0].len()
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn step(&self, point: usize, s: SLetter) -> usize {
        match s {
            SLetter::X => self.perms[0][point],
            SLetter::Xi => self.inv_perms[0][point],
            SLetter::Y => self.perms[1][point],
            SLetter::Yi => self.inv_perms[1][point],
            SLetter::A => self.perms[2][point],
            SLetter::Ai => self.inv_perms[2][point],
            SLetter::B => self.perms[3][point],
            SLetter::Bi => self.inv_perms[3][point],
        }
    }

    pub fn apply(&self, point: usize, w: &SurfaceWord) -> usize {
        w.letters().iter().fold(point, |p, &s| self.step(p, s))
    }

    /// Membership in the base stabilizer.
    pub fn contains(&self, w: &SurfaceWord) -> bool {
        self.apply(self.base, w) == self.base
    }

    pub fn perm(&self, s: SLetter) -> &[usize] {
        match s {
            SLetter::X | SLetter::Xi => &self.perms[0],
            SLetter::Y | SLetter::Yi => &self.perms[1],
            SLetter::A | SLetter::Ai => &self.perms[2],
            SLetter::B | SLetter::Bi => &self.perms[3],
        }
    }
}

/// Pull a free-group coset action back along psi: each SG2 generator acts
/// as the evaluation of its psi-image. The relator acts trivially because
/// its image reduces to the empty word, so this is a genuine SG2 action of
/// the same degree, and its base stabilizer is the psi-preimage subgroup.
pub fn preimage_action(map: &PsiMap, gamma_action: &SchreierAction) -> Result<Sg2Action> {
    if !gamma_action.is_transitive() {
        return Err(Error::Usage("gamma action must be transitive".into()));
    }
    let n = gamma_action.degree();
    let eval = |w: &FreeWord| -> Vec<usize> { (0..n).map(|p| gamma_action.apply(p, w)).collect() };
    let perms = [
        eval(&map.letter_image(SLetter::X)),
        eval(&map.letter_image(SLetter::Y)),
        eval(&map.letter_image(SLetter::A)),
        eval(&map.letter_image(SLetter::B)),
    ];
    let inv = |p: &Vec<usize>| -> Vec<usize> {
        let mut out = vec![0; n];
        for (i, &q) in p.iter().enumerate() {
            out[q] = i;
        }
        out
    };
    let inv_perms = [inv(&perms[0]), inv(&perms[1]), inv(&perms[2]), inv(&perms[3])];
    Ok(Sg2Action {
        perms,
        inv_perms,
        base: gamma_action.base(),
    })
}

/// Exhaustively confirm that no nontrivial element of l_B < k stabilizes
/// the base of the preimage action; returns the number of elements swept.
pub fn assert_no_short_stabilizers(action: &Sg2Action, k: usize) -> Result<usize> {
    if k <= 1 {
        return Ok(0);
    }
    let ball = enumerate_ball(k - 1)?;
    let mut checked = 0;
    for el in &ball {
        if el.length == 0 {
            continue;
        }
        checked += 1;
        if action.contains(&el.word) {
            return Err(Error::Assertion(format!(
                "short stabilizer found: {} with l_B = {}",
                el.word, el.length
            )));
        }
    }
    Ok(checked)
}

/// The girth-to-k schedule: floor(sqrt(a / epsilon)). Values below epsilon
/// give 0, signalling the caller is under the feasibility threshold.
pub fn k_from_girth(a: usize) -> usize {
    ((a as f64 / EPSILON as f64).sqrt()).floor() as usize
}

/// Embedding of an F2 word as a SurfaceWord on the first handle.
pub fn embed_f2(w: &FreeWord) -> SurfaceWord {
    let letters = w
        .letters()
        .iter()
        .map(|&l| match l {
            FLetter::X => SLetter::X,
            FLetter::Xi => SLetter::Xi,
            FLetter::Y => SLetter::Y,
            FLetter::Yi => SLetter::Yi,
        })
        .collect();
    SurfaceWord::from_letters(letters)
}
