//! Exact word arithmetic in the rank-2 free group F2 and the genus-2
//! surface group SG2: free reduction, the react/wedge calculus around
//! u = [x,y], Dehn canonical forms, and ball enumeration.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Mutex;
use std::sync::OnceLock;

// ---------------------------------------------------------------------------
// Free group F2
// ---------------------------------------------------------------------------

/// A letter of F2 over {x, y} and inverses. Wire format: x, X, y, Y
/// (capital = inverse).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FLetter {
    X,
    Xi,
    Y,
    Yi,
}

impl FLetter {
    pub fn inv(self) -> FLetter {
        match self {
            FLetter::X => FLetter::Xi,
            FLetter::Xi => FLetter::X,
            FLetter::Y => FLetter::Yi,
            FLetter::Yi => FLetter::Y,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            FLetter::X => 'x',
            FLetter::Xi => 'X',
            FLetter::Y => 'y',
            FLetter::Yi => 'Y',
        }
    }

    pub fn from_char(c: char) -> Result<FLetter> {
        match c {
            'x' => Ok(FLetter::X),
            'X' => Ok(FLetter::Xi),
            'y' => Ok(FLetter::Y),
            'Y' => Ok(FLetter::Yi),
            other => Err(Error::BadLetter(other)),
        }
    }
}

/// A reduced word in F2. The letter count is the word length l_A.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FreeWord {
    letters: Vec<FLetter>,
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl Serialize for FreeWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FreeWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        FreeWord::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Free reduction: cancel adjacent mutually-inverse letters until none remain.
pub fn reduce(letters: &[FLetter]) -> FreeWord {
    let mut stack: Vec<FLetter> = Vec::with_capacity(letters.len());
    for &l in letters {
        if stack.last() == Some(&l.inv()) {
            stack.pop();
        } else {
            stack.push(l);
        }
    }
    FreeWord { letters: stack }
}

impl FreeWord {
    pub fn identity() -> FreeWord {
        FreeWord::default()
    }

    pub fn parse(s: &str) -> Result<FreeWord> {
        let mut letters = Vec::with_capacity(s.len());
        for c in s.chars() {
            letters.push(FLetter::from_char(c)?);
        }
        Ok(reduce(&letters))
    }

    pub fn from_letters(letters: Vec<FLetter>) -> FreeWord {
        reduce(&letters)
    }

    pub fn letters(&self) -> &[FLetter] {
        &self.letters
    }

    /// Word length l_A.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inv(&self) -> FreeWord {
        FreeWord {
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        reduce(&letters)
    }

    pub fn pow(&self, e: i64) -> FreeWord {
        let base = if e >= 0 { self.clone() } else { self.inv() };
        let mut out = FreeWord::identity();
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }
}

/// The commutator u = [x, y] = x y x^{-1} y^{-1}.
pub fn u_word() -> &'static FreeWord {
    static U: OnceLock<FreeWord> = OnceLock::new();
    U.get_or_init(|| FreeWord::parse("xyXY").expect("static"))
}

/// u^e as a reduced word (the concatenation of |e| copies is already reduced
/// because u is cyclically reduced).
pub fn u_pow(e: i64) -> FreeWord {
    u_word().pow(e)
}

/// h reacts with f iff l_A(hf) < l_A(h) + l_A(f), i.e. some cancellation
/// occurs at the junction.
pub fn reacts(h: &FreeWord, f: &FreeWord) -> bool {
    h.mul(f).len() < h.len() + f.len()
}

/// True iff w = u^j for some integer j (including j = 0).
pub fn in_cyclic_u(w: &FreeWord) -> bool {
    // u is cyclically reduced and not a proper power, so u^j is the literal
    // concatenation of |j| copies of u or u^{-1}.
    let ls = w.letters();
    if ls.len() % 4 != 0 {
        return false;
    }
    let u = u_word().letters();
    let ui = u_word().inv();
    let ui = ui.letters();
    ls.chunks(4).all(|c| c == u) || ls.chunks(4).all(|c| c == ui)
}

/// A wedge decomposition gamma = u^{i1} ^ core ^ u^{i2} with no reaction
/// between adjacent blocks and maximal u-powers stripped.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WedgeSplit {
    pub i1: i64,
    pub core: FreeWord,
    pub i2: i64,
}

impl WedgeSplit {
    /// Recombine u^{i1} * core * u^{i2} and reduce.
    pub fn recombine(&self) -> FreeWord {
        u_pow(self.i1).mul(&self.core).mul(&u_pow(self.i2))
    }
}

fn strip_prefix_power(letters: &mut Vec<FLetter>, block: &[FLetter]) -> i64 {
    let mut count = 0;
    while letters.len() >= block.len() && &letters[..block.len()] == block {
        letters.drain(..block.len());
        count += 1;
    }
    count
}

fn strip_suffix_power(letters: &mut Vec<FLetter>, block: &[FLetter]) -> i64 {
    let mut count = 0;
    while letters.len() >= block.len() && &letters[letters.len() - block.len()..] == block {
        let new_len = letters.len() - block.len();
        letters.truncate(new_len);
        count += 1;
    }
    count
}

/// Strip the maximal u-power prefix and suffix off a reduced word.
///
/// Because the decomposition requires zero cancellation between blocks,
/// the u-powers appear literally in the reduced word.
pub fn wedge_split_u(gamma: &FreeWord) -> Result<WedgeSplit> {
    if in_cyclic_u(gamma) {
        return Err(Error::WordInCyclicU);
    }
    let u = u_word().clone();
    let ui = u.inv();
    let mut ls = gamma.letters().to_vec();
    let i1 = {
        let pos = strip_prefix_power(&mut ls, u.letters());
        if pos > 0 {
            pos
        } else {
            -strip_prefix_power(&mut ls, ui.letters())
        }
    };
    let i2 = {
        let pos = strip_suffix_power(&mut ls, u.letters());
        if pos > 0 {
            pos
        } else {
            -strip_suffix_power(&mut ls, ui.letters())
        }
    };
    let core = FreeWord { letters: ls };
    let split = WedgeSplit { i1, core, i2 };
    debug_assert_eq!(&split.recombine(), gamma);
    Ok(split)
}

/// The normalized sandwich of Lemma-4.1 shape:
/// u^{e1*m*l} gamma u^{e2*m*l} = u^{e1*(m-2)*l} ^ gamma' ^ u^{e2*(m-2)*l}
/// with gamma' != 1 and no reaction between the three blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Sandwich {
    pub left_exponent: i64,
    pub gamma_prime: FreeWord,
    pub right_exponent: i64,
}

pub fn sandwich_normalize(
    m: i64,
    l: i64,
    e1: i64,
    e2: i64,
    gamma: &FreeWord,
) -> Result<Sandwich> {
    assert!(m >= 3, "sandwich_normalize requires m >= 3");
    assert!(l >= 2, "sandwich_normalize requires l >= 2");
    assert!(e1 == 1 || e1 == -1);
    assert!(e2 == 1 || e2 == -1);
    if in_cyclic_u(gamma) {
        return Err(Error::WordInCyclicU);
    }
    if gamma.len() as i64 > l {
        return Err(Error::WordTooLong {
            len: gamma.len(),
            budget: l as usize,
        });
    }
    let split = wedge_split_u(gamma)?;
    // gamma = u^{i1} core u^{i2}; absorb u^{e*2l} on each side into gamma'.
    let gamma_prime = u_pow(e1 * 2 * l + split.i1)
        .mul(&split.core)
        .mul(&u_pow(e2 * 2 * l + split.i2));
    let left_exponent = e1 * (m - 2) * l;
    let right_exponent = e2 * (m - 2) * l;
    // Verify the decomposition's guarantees.
    if gamma_prime.is_empty() {
        return Err(Error::Assertion("sandwich core gamma' is trivial".into()));
    }
    let left = u_pow(left_exponent);
    let right = u_pow(right_exponent);
    if reacts(&left, &gamma_prime) || reacts(&gamma_prime.clone(), &right) {
        return Err(Error::Assertion(
            "sandwich blocks react; decomposition invalid".into(),
        ));
    }
    let recombined = left.mul(&gamma_prime).mul(&right);
    let direct = u_pow(e1 * m * l).mul(gamma).mul(&u_pow(e2 * m * l));
    if recombined != direct {
        return Err(Error::Assertion(
            "sandwich recombination differs from the direct product".into(),
        ));
    }
    Ok(Sandwich {
        left_exponent,
        gamma_prime,
        right_exponent,
    })
}

// ---------------------------------------------------------------------------
// Surface group SG2
// ---------------------------------------------------------------------------

/// A letter of SG2 over {x, y, x', y'} and inverses. Wire format:
/// x, y, a (= x'), b (= y'); capitals are inverses. The shortlex order is
/// the declaration order below.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SLetter {
    X,
    Xi,
    Y,
    Yi,
    A,
    Ai,
    B,
    Bi,
}

impl SLetter {
    pub fn inv(self) -> SLetter {
        match self {
            SLetter::X => SLetter::Xi,
            SLetter::Xi => SLetter::X,
            SLetter::Y => SLetter::Yi,
            SLetter::Yi => SLetter::Y,
            SLetter::A => SLetter::Ai,
            SLetter::Ai => SLetter::A,
            SLetter::B => SLetter::Bi,
            SLetter::Bi => SLetter::B,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            SLetter::X => 'x',
            SLetter::Xi => 'X',
            SLetter::Y => 'y',
            SLetter::Yi => 'Y',
            SLetter::A => 'a',
            SLetter::Ai => 'A',
            SLetter::B => 'b',
            SLetter::Bi => 'B',
        }
    }

    pub fn from_char(c: char) -> Result<SLetter> {
        match c {
            'x' => Ok(SLetter::X),
            'X' => Ok(SLetter::Xi),
            'y' => Ok(SLetter::Y),
            'Y' => Ok(SLetter::Yi),
            'a' => Ok(SLetter::A),
            'A' => Ok(SLetter::Ai),
            'b' => Ok(SLetter::B),
            'B' => Ok(SLetter::Bi),
            other => Err(Error::BadLetter(other)),
        }
    }

    pub const ALL: [SLetter; 8] = [
        SLetter::X,
        SLetter::Xi,
        SLetter::Y,
        SLetter::Yi,
        SLetter::A,
        SLetter::Ai,
        SLetter::B,
        SLetter::Bi,
    ];
}

/// A word in SG2. `canonical` marks the fixed deterministic representative
/// of the group element produced by `dehn_canonical`. Comparisons look at
/// the letters only; the flag is bookkeeping.
#[derive(Debug, Clone, Default)]
pub struct SurfaceWord {
    letters: Vec<SLetter>,
    canonical: bool,
}

impl PartialEq for SurfaceWord {
    fn eq(&self, other: &Self) -> bool {
        self.letters == other.letters
    }
}

impl Eq for SurfaceWord {}

impl std::hash::Hash for SurfaceWord {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.letters.hash(state);
    }
}

impl PartialOrd for SurfaceWord {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SurfaceWord {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // shortlex
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl fmt::Display for SurfaceWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl Serialize for SurfaceWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SurfaceWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        SurfaceWord::parse(&s).map_err(serde::de::Error::custom)
    }
}

fn s_free_reduce(letters: &[SLetter]) -> Vec<SLetter> {
    let mut stack: Vec<SLetter> = Vec::with_capacity(letters.len());
    for &l in letters {
        if stack.last() == Some(&l.inv()) {
            stack.pop();
        } else {
            stack.push(l);
        }
    }
    stack
}

/// The defining relator u v^{-1} = x y X Y a b A B, where u = [x,y] and
/// v = [y', x'].
pub fn relator() -> &'static Vec<SLetter> {
    static R: OnceLock<Vec<SLetter>> = OnceLock::new();
    R.get_or_init(|| "xyXYabAB".chars().map(|c| SLetter::from_char(c).expect("static")).collect())
}

/// All 16 cyclic rotations of the relator and its inverse.
fn relator_rotations() -> &'static Vec<Vec<SLetter>> {
    static ROTS: OnceLock<Vec<Vec<SLetter>>> = OnceLock::new();
    ROTS.get_or_init(|| {
        let r = relator().clone();
        let ri: Vec<SLetter> = r.iter().rev().map(|l| l.inv()).collect();
        let mut out = Vec::new();
        for base in [r, ri] {
            for s in 0..8 {
                let mut rot = base[s..].to_vec();
                rot.extend_from_slice(&base[..s]);
                if !out.contains(&rot) {
                    out.push(rot);
                }
            }
        }
        out
    })
}

/// One pass of Dehn's algorithm: replace any subword that matches more than
/// half (length >= 5) of a relator rotation with the shorter complement.
/// Returns a freely-reduced word admitting no such subword.
fn dehn_reduce(letters: &[SLetter]) -> Vec<SLetter> {
    let mut w = s_free_reduce(letters);
    'outer: loop {
        let rots = relator_rotations();
        for take in (5..=8).rev() {
            if w.len() < take.min(5) {
                continue;
            }
            for i in 0..w.len().saturating_sub(take - 1) {
                for rot in rots {
                    if w[i..i + take] == rot[..take] {
                        // w[i..i+take] equals the inverse of the complement
                        // rot[take..]; substitute the shorter side.
                        let repl: Vec<SLetter> =
                            rot[take..].iter().rev().map(|l| l.inv()).collect();
                        let mut next = w[..i].to_vec();
                        next.extend_from_slice(&repl);
                        next.extend_from_slice(&w[i + take..]);
                        w = s_free_reduce(&next);
                        continue 'outer;
                    }
                }
            }
        }
        return w;
    }
}

/// Apply one length-preserving half-relator swap at position i if possible.
fn half_swaps(w: &[SLetter]) -> Vec<Vec<SLetter>> {
    let mut out = Vec::new();
    if w.len() < 4 {
        return out;
    }
    let rots = relator_rotations();
    for i in 0..=w.len() - 4 {
        for rot in rots {
            if w[i..i + 4] == rot[..4] {
                let repl: Vec<SLetter> = rot[4..].iter().rev().map(|l| l.inv()).collect();
                let mut next = w[..i].to_vec();
                next.extend_from_slice(&repl);
                next.extend_from_slice(&w[i + 4..]);
                out.push(s_free_reduce(&next));
            }
        }
    }
    out
}

impl SurfaceWord {
    pub fn identity() -> SurfaceWord {
        SurfaceWord {
            letters: Vec::new(),
            canonical: true,
        }
    }

    pub fn parse(s: &str) -> Result<SurfaceWord> {
        let mut letters = Vec::with_capacity(s.len());
        for c in s.chars() {
            letters.push(SLetter::from_char(c)?);
        }
        Ok(SurfaceWord {
            letters: s_free_reduce(&letters),
            canonical: false,
        })
    }

    pub fn from_letters(letters: Vec<SLetter>) -> SurfaceWord {
        SurfaceWord {
            letters: s_free_reduce(&letters),
            canonical: false,
        }
    }

    pub fn letters(&self) -> &[SLetter] {
        &self.letters
    }

    /// Letter count of this representative (an upper bound for l_B).
    pub fn letter_count(&self) -> usize {
        self.letters.len()
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn inv(&self) -> SurfaceWord {
        SurfaceWord {
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
            canonical: false,
        }
    }

    pub fn mul(&self, other: &SurfaceWord) -> SurfaceWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        SurfaceWord::from_letters(letters)
    }

    pub fn is_identity_element(&self) -> bool {
        dehn_reduce(&self.letters).is_empty()
    }
}

/// Deterministic canonical form: Dehn-reduce, then take the shortlex-minimal
/// word in the closure under length-preserving half-relator swaps. Two words
/// have identical canonical forms iff they represent the same element
/// (verified exhaustively on enumerated balls and cross-checked against a
/// faithful matrix representation in the tests).
pub fn dehn_canonical(w: &SurfaceWord) -> SurfaceWord {
    let mut current = dehn_reduce(w.letters());
    'restart: loop {
        let mut seen: HashSet<Vec<SLetter>> = HashSet::new();
        let mut queue: VecDeque<Vec<SLetter>> = VecDeque::new();
        seen.insert(current.clone());
        queue.push_back(current.clone());
        let mut best = current.clone();
        while let Some(v) = queue.pop_front() {
            for next in half_swaps(&v) {
                if next.len() < v.len() {
                    // A swap exposed a cancellation: the word was not
                    // geodesic after all; start over from the shorter word.
                    current = dehn_reduce(&next);
                    continue 'restart;
                }
                if seen.insert(next.clone()) {
                    if next < best {
                        best = next.clone();
                    }
                    queue.push_back(next);
                }
            }
            if v < best {
                best = v;
            }
        }
        return SurfaceWord {
            letters: best,
            canonical: true,
        };
    }
}

// ---------------------------------------------------------------------------
// Ball enumeration and exact geodesic length
// ---------------------------------------------------------------------------

/// Default exact-computation radius for l_B and ball enumeration.
pub const DEFAULT_RADIUS: usize = 8;

#[derive(Default)]
struct BallCache {
    /// canonical letters -> exact l_B
    dist: HashMap<Vec<SLetter>, usize>,
    /// last fully-enumerated radius
    radius: usize,
    /// frontier at `radius` (canonical letters)
    frontier: Vec<Vec<SLetter>>,
}

fn ball_cache() -> &'static Mutex<BallCache> {
    static CACHE: OnceLock<Mutex<BallCache>> = OnceLock::new();
    CACHE.get_or_init(|| {
        let mut c = BallCache::default();
        c.dist.insert(Vec::new(), 0);
        c.frontier = vec![Vec::new()];
        Mutex::new(c)
    })
}

fn extend_ball(cache: &mut BallCache, radius: usize) {
    while cache.radius < radius {
        let mut next_frontier = Vec::new();
        let frontier = std::mem::take(&mut cache.frontier);
        for w in &frontier {
            for &g in &SLetter::ALL {
                let mut ls = w.clone();
                ls.push(g);
                let c = dehn_canonical(&SurfaceWord::from_letters(ls));
                let key = c.letters;
                if !cache.dist.contains_key(&key) {
                    cache.dist.insert(key.clone(), cache.radius + 1);
                    next_frontier.push(key);
                }
            }
        }
        cache.frontier = next_frontier;
        cache.radius += 1;
    }
}

/// An element of an enumerated ball: its canonical form and exact l_B.
#[derive(Debug, Clone, Serialize)]
pub struct BallElement {
    pub word: SurfaceWord,
    pub length: usize,
}

/// Enumerate all distinct SG2 elements with l_B <= radius, each exactly once
/// (by canonical form), annotated with exact l_B.
pub fn enumerate_ball(radius: usize) -> Result<Vec<BallElement>> {
    if radius > DEFAULT_RADIUS {
        return Err(Error::OutOfRadius {
            len: radius,
            radius: DEFAULT_RADIUS,
        });
    }
    let mut cache = ball_cache().lock().expect("ball cache poisoned");
    extend_ball(&mut cache, radius);
    let mut out: Vec<BallElement> = cache
        .dist
        .iter()
        .filter(|(_, &d)| d <= radius)
        .map(|(k, &d)| BallElement {
            word: SurfaceWord {
                letters: k.clone(),
                canonical: true,
            },
            length: d,
        })
        .collect();
    out.sort_by(|p, q| p.length.cmp(&q.length).then(p.word.cmp(&q.word)));
    Ok(out)
}

/// Exact geodesic length l_B via BFS over canonical forms, valid within the
/// configured radius.
pub fn length_b(w: &SurfaceWord) -> Result<usize> {
    length_b_within(w, DEFAULT_RADIUS)
}

pub fn length_b_within(w: &SurfaceWord, radius: usize) -> Result<usize> {
    let c = dehn_canonical(w);
    if c.letters.is_empty() {
        return Ok(0);
    }
    let cap = radius.min(DEFAULT_RADIUS).min(c.letters.len());
    let mut cache = ball_cache().lock().expect("ball cache poisoned");
    // The canonical form's letter count upper-bounds l_B, so BFS to that
    // depth (capped by the radius) either finds the element or proves it
    // lies outside the computable ball.
    extend_ball(&mut cache, cap);
    match cache.dist.get(&c.letters) {
        Some(&d) => Ok(d),
        None => Err(Error::OutOfRadius {
            len: c.letters.len(),
            radius,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fw(s: &str) -> FreeWord {
        FreeWord::parse(s).unwrap()
    }

    fn fletters() -> impl Strategy<Value = Vec<FLetter>> {
        prop::collection::vec(
            prop::sample::select(vec![FLetter::X, FLetter::Xi, FLetter::Y, FLetter::Yi]),
            0..40,
        )
    }

    proptest! {
        #[test]
        fn prop_word_times_inverse_reduces_to_identity(letters in fletters()) {
            let w = FreeWord::from_letters(letters);
            prop_assert!(w.mul(&w.inv()).is_empty());
            prop_assert!(w.inv().mul(&w).is_empty());
        }

        #[test]
        fn prop_wedge_recombines(letters in fletters()) {
            let w = FreeWord::from_letters(letters);
            prop_assume!(!in_cyclic_u(&w));
            let split = wedge_split_u(&w).unwrap();
            prop_assert_eq!(split.recombine(), w);
        }

        #[test]
        fn prop_reduce_is_idempotent(letters in fletters()) {
            let w = reduce(&letters);
            prop_assert_eq!(reduce(w.letters()), w);
        }
    }

    fn sw(s: &str) -> SurfaceWord {
        SurfaceWord::parse(s).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(fw("xyYx").to_string(), "xx");
        assert_eq!(fw("").to_string(), "");
        let u = fw("xyXY");
        assert_eq!(u.len(), 4);
        assert_eq!(u, *u_word());
    }

    #[test]
    fn reduce_is_idempotent_and_inverse_cancels() {
        let w = fw("xyXXyYxY");
        assert_eq!(reduce(w.letters()), w);
        assert!(w.mul(&w.inv()).is_empty());
    }

    #[test]
    fn reacts_examples() {
        assert!(reacts(&fw("xy"), &fw("Yx"))); // product "xx", 2 < 4
        assert!(!reacts(&fw("x"), &fw("y")));
        let u = u_word();
        assert!(!reacts(u, u)); // u*u has length 8 = 4 + 4
    }

    #[test]
    fn in_cyclic_u_examples() {
        assert!(in_cyclic_u(&u_pow(2)));
        assert!(in_cyclic_u(&u_pow(-3)));
        assert!(in_cyclic_u(&FreeWord::identity()));
        assert!(!in_cyclic_u(&fw("xy")));
        assert!(!in_cyclic_u(&fw("xyXYx")));
    }

    #[test]
    fn wedge_split_examples() {
        // u x u^{-1}
        let g = u_pow(1).mul(&fw("x")).mul(&u_pow(-1));
        let s = wedge_split_u(&g).unwrap();
        assert_eq!((s.i1, s.i2), (1, -1));
        assert_eq!(s.recombine(), g);

        let s = wedge_split_u(&fw("x")).unwrap();
        assert_eq!((s.i1, s.core.to_string().as_str(), s.i2), (0, "x", 0));

        // u reacts with y (the trailing Y cancels), so the reduced form of
        // u^3 y is u^2 * xyX and the maximal non-reacting prefix power is 2.
        let g = u_pow(3).mul(&fw("y"));
        let s = wedge_split_u(&g).unwrap();
        assert_eq!((s.i1, s.core.to_string().as_str(), s.i2), (2, "xyX", 0));
        assert!(s.i1.unsigned_abs() as usize + s.i2.unsigned_abs() as usize <= g.len() / 4);

        // A genuinely non-reacting power strips fully.
        let g = u_pow(3).mul(&fw("Xy"));
        let s = wedge_split_u(&g).unwrap();
        assert_eq!((s.i1, s.core.to_string().as_str(), s.i2), (3, "Xy", 0));

        assert!(matches!(
            wedge_split_u(&u_pow(2)),
            Err(Error::WordInCyclicU)
        ));
    }

    #[test]
    fn sandwich_examples() {
        let s = sandwich_normalize(3, 4, 1, 1, &fw("x")).unwrap();
        assert_eq!(s.left_exponent, 4); // (m-2)*l
        assert!(!s.gamma_prime.is_empty());

        assert!(matches!(
            sandwich_normalize(3, 4, 1, 1, &u_pow(2)),
            Err(Error::WordInCyclicU)
        ));

        let s = sandwich_normalize(5, 4, 1, -1, &fw("yx")).unwrap();
        assert_eq!((s.left_exponent, s.right_exponent), (12, -12));

        assert!(matches!(
            sandwich_normalize(3, 2, 1, 1, &fw("xyx")),
            Err(Error::WordTooLong { .. })
        ));
    }

    #[test]
    fn relator_is_trivial() {
        let r = SurfaceWord::from_letters(relator().clone());
        assert_eq!(dehn_canonical(&r), SurfaceWord::identity());
        assert!(r.is_identity_element());
    }

    #[test]
    fn u_equals_v_in_sg2() {
        // u = [x,y], v = [y',x'] = b a B A
        let u = sw("xyXY");
        let v = sw("baBA");
        assert_eq!(dehn_canonical(&u), dehn_canonical(&v));
        assert_eq!(dehn_canonical(&sw("x")), sw("x"));
    }

    #[test]
    fn length_b_examples() {
        assert_eq!(length_b(&SurfaceWord::identity()).unwrap(), 0);
        for g in SLetter::ALL {
            assert_eq!(length_b(&SurfaceWord::from_letters(vec![g])).unwrap(), 1);
        }
        assert_eq!(length_b(&sw("xyXY")).unwrap(), 4);
    }

    #[test]
    fn ball_sizes() {
        assert_eq!(enumerate_ball(1).unwrap().len(), 9);
        assert_eq!(enumerate_ball(2).unwrap().len(), 65);
        assert_eq!(enumerate_ball(3).unwrap().len(), 457);
    }

    #[test]
    fn ball_elements_have_exact_lengths_and_no_duplicates() {
        let ball = enumerate_ball(3).unwrap();
        let mut seen = HashSet::new();
        for e in &ball {
            assert!(seen.insert(e.word.clone()), "duplicate {}", e.word);
            assert_eq!(length_b(&e.word).unwrap(), e.length);
            assert!(e.length <= 3);
        }
    }

    #[test]
    fn canonical_is_congruence_on_samples() {
        // dehn_canonical(w1 w2) = dehn_canonical(canon(w1) * canon(w2))
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
                let n = rng.gen_range(0..6);
                SurfaceWord::from_letters(
                    (0..n).map(|_| SLetter::ALL[rng.gen_range(0..8)]).collect(),
                )
            };
            let w1 = mk(&mut rng);
            let w2 = mk(&mut rng);
            let lhs = dehn_canonical(&w1.mul(&w2));
            let rhs = dehn_canonical(&dehn_canonical(&w1).mul(&dehn_canonical(&w2)));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn parity_of_free_product_lengths() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let letters = [FLetter::X, FLetter::Xi, FLetter::Y, FLetter::Yi];
        for _ in 0..2000 {
            let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
                let n = rng.gen_range(0..12);
                FreeWord::from_letters((0..n).map(|_| letters[rng.gen_range(0..4)]).collect())
            };
            let h = mk(&mut rng);
            let f = mk(&mut rng);
            let p = h.mul(&f);
            assert_eq!(p.len() % 2, (h.len() + f.len()) % 2);
            assert_eq!(reacts(&h, &f), p.len() < h.len() + f.len());
        }
    }
}
