//! Strings: reduced walks in the quiver avoiding ρ⁺ in both directions.

use std::cmp::Ordering;

use serde::Serialize;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::presentation::{Quiver, Sign};

/// An arrow or its formal inverse. Direct letters sort before inverse ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Letter {
    pub arrow: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn direct(arrow: usize) -> Self {
        Letter { arrow, inverse: false }
    }

    pub fn inverse_of(arrow: usize) -> Self {
        Letter { arrow, inverse: true }
    }

    pub fn inv(self) -> Self {
        Letter { arrow: self.arrow, inverse: !self.inverse }
    }

    pub fn source(self, q: &Quiver) -> usize {
        if self.inverse { q.target(self.arrow) } else { q.source(self.arrow) }
    }

    pub fn target(self, q: &Quiver) -> usize {
        if self.inverse { q.source(self.arrow) } else { q.target(self.arrow) }
    }
}

/// A string: a nonempty word in letters, or a trivial string `1_(i,t)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum StringWord {
    Trivial { vertex: usize, sign: Sign },
    Word(Vec<Letter>),
}

impl StringWord {
    pub fn trivial(vertex: usize, sign: Sign) -> Self {
        StringWord::Trivial { vertex, sign }
    }

    pub fn len(&self) -> usize {
        match self {
            StringWord::Trivial { .. } => 0,
            StringWord::Word(w) => w.len(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, StringWord::Trivial { .. })
    }

    pub fn letters(&self) -> &[Letter] {
        match self {
            StringWord::Trivial { .. } => &[],
            StringWord::Word(w) => w,
        }
    }

    pub fn source(&self, q: &Quiver) -> usize {
        match self {
            StringWord::Trivial { vertex, .. } => *vertex,
            StringWord::Word(w) => w[0].source(q),
        }
    }

    pub fn target(&self, q: &Quiver) -> usize {
        match self {
            StringWord::Trivial { vertex, .. } => *vertex,
            StringWord::Word(w) => w[w.len() - 1].target(q),
        }
    }

    pub fn inverse(&self) -> StringWord {
        match self {
            StringWord::Trivial { vertex, sign } => StringWord::Trivial { vertex: *vertex, sign: -*sign },
            StringWord::Word(w) => StringWord::Word(w.iter().rev().map(|l| l.inv()).collect()),
        }
    }

    /// Direct: trivial, or every letter an arrow.
    pub fn is_direct(&self) -> bool {
        self.letters().iter().all(|l| !l.inverse)
    }

    pub fn is_inverse(&self) -> bool {
        self.letters().iter().all(|l| l.inverse)
    }

    /// `v_C`: the vertex of each canonical basis index (0-based).
    pub fn vertices(&self, q: &Quiver) -> Vec<usize> {
        match self {
            StringWord::Trivial { vertex, .. } => vec![*vertex],
            StringWord::Word(w) => {
                let mut v: Vec<usize> = w.iter().map(|l| l.source(q)).collect();
                v.push(w[w.len() - 1].target(q));
                v
            }
        }
    }

    /// Sub-word of letters `i..j` (0-based, half open) as a string; an empty
    /// range gives the trivial string at basis index `i` with sign `t`.
    pub fn slice(&self, q: &Quiver, i: usize, j: usize, t: Sign) -> StringWord {
        if i == j {
            StringWord::Trivial { vertex: self.vertices(q)[i], sign: t }
        } else {
            StringWord::Word(self.letters()[i..j].to_vec())
        }
    }

    fn order_key(&self) -> (usize, &[Letter], usize, Sign) {
        match self {
            StringWord::Trivial { vertex, sign } => (0, &[], *vertex, *sign),
            StringWord::Word(w) => (w.len(), w, 0, Sign::Plus),
        }
    }

    /// The word with arrow names, e.g. `x- y`, or `1(v,+1)` for a trivial string.
    pub fn display(&self, q: &Quiver) -> String {
        match self {
            StringWord::Trivial { vertex, sign } => format!("1({},{})", q.vertices[*vertex], sign),
            StringWord::Word(w) => w
                .iter()
                .map(|l| format!("{}{}", q.arrows[l.arrow].name, if l.inverse { "-" } else { "" }))
                .collect::<Vec<_>>()
                .join(" "),
        }
    }
}

impl PartialOrd for StringWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shorter words first, then lexicographic on letters; `1_(i,+1)` before `1_(i,-1)`.
impl Ord for StringWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

/// Parses a string literal: `a b- c`, or `1(<vertex>,+1)` / `1(<vertex>,-1)`.
pub fn parse_string(q: &Quiver, text: &str) -> Result<StringWord> {
    let t = text.trim();
    let bad = |reason: &str| Error::InvalidString { word: t.to_string(), reason: reason.to_string() };
    if let Some(inner) = t.strip_prefix("1(").and_then(|r| r.strip_suffix(')')) {
        let (v, s) = inner.split_once(',').ok_or_else(|| bad("expected 1(<vertex>,<sign>)"))?;
        let vertex = q.vertex_index(v.trim()).ok_or_else(|| Error::UnknownVertex(v.trim().to_string()))?;
        let sign = match s.trim() {
            "+1" | "1" | "+" => Sign::Plus,
            "-1" | "-" => Sign::Minus,
            _ => return Err(bad("sign must be +1 or -1")),
        };
        return Ok(StringWord::Trivial { vertex, sign });
    }
    let mut letters = Vec::new();
    for tok in t.split_whitespace() {
        let (name, inverse) = match tok.strip_suffix('-').or_else(|| tok.strip_suffix('⁻')) {
            Some(n) => (n, true),
            None => (tok, false),
        };
        let arrow = q.arrow_index(name).ok_or_else(|| Error::UnknownArrow(name.to_string()))?;
        letters.push(Letter { arrow, inverse });
    }
    if letters.is_empty() {
        return Err(bad("empty word"));
    }
    Ok(StringWord::Word(letters))
}

/// Whether the last letter of `w` (given the rest was already checked)
/// keeps `w` a string. Returns the reason it does not.
fn check_last(alg: &Algebra, w: &[Letter]) -> std::result::Result<(), String> {
    let q = alg.quiver();
    let n = w.len();
    if n < 2 {
        return Ok(());
    }
    let (a, b) = (w[n - 2], w[n - 1]);
    if a.target(q) != b.source(q) {
        return Err(format!("letters {} and {} do not chain", n - 1, n));
    }
    if a == b.inv() {
        return Err(format!("letter {} is followed by its inverse", n - 1));
    }
    let longest = alg.rho.longest();
    let mut path = Vec::with_capacity(longest);
    for k in 2..=longest.min(n) {
        let tail = &w[n - k..];
        if tail.iter().all(|l| !l.inverse) {
            path.clear();
            path.extend(tail.iter().map(|l| l.arrow));
        } else if tail.iter().all(|l| l.inverse) {
            path.clear();
            path.extend(tail.iter().rev().map(|l| l.arrow));
        } else {
            break;
        }
        if alg.rho.contains(&path) {
            return Err(format!("letters {}..{} contain a relation", n - k + 1, n));
        }
    }
    Ok(())
}

/// String conditions (1)–(3); `Err` carries a witness.
pub fn check_string(alg: &Algebra, w: &StringWord) -> std::result::Result<(), String> {
    let StringWord::Word(letters) = w else {
        return match w {
            StringWord::Trivial { vertex, .. } if *vertex < alg.vertex_count() => Ok(()),
            _ => Err("unknown vertex".into()),
        };
    };
    if letters.iter().any(|l| l.arrow >= alg.arrow_count()) {
        return Err("unknown arrow".into());
    }
    for n in 2..=letters.len() {
        check_last(alg, &letters[..n])?;
    }
    Ok(())
}

pub fn is_valid_string(alg: &Algebra, w: &StringWord) -> bool {
    check_string(alg, w).is_ok()
}

/// Parses and validates a string literal.
pub fn string_from_literal(alg: &Algebra, text: &str) -> Result<StringWord> {
    let w = parse_string(alg.quiver(), text)?;
    check_string(alg, &w).map_err(|reason| Error::InvalidString { word: text.trim().to_string(), reason })?;
    Ok(w)
}

fn letter_sigma(alg: &Algebra, l: Letter) -> Sign {
    if l.inverse { alg.signs.epsilon[l.arrow] } else { alg.signs.sigma[l.arrow] }
}

fn letter_epsilon(alg: &Algebra, l: Letter) -> Sign {
    if l.inverse { alg.signs.sigma[l.arrow] } else { alg.signs.epsilon[l.arrow] }
}

pub fn sign_sigma(alg: &Algebra, w: &StringWord) -> Sign {
    match w {
        StringWord::Trivial { sign, .. } => *sign,
        StringWord::Word(l) => letter_sigma(alg, l[0]),
    }
}

pub fn sign_epsilon(alg: &Algebra, w: &StringWord) -> Sign {
    match w {
        StringWord::Trivial { sign, .. } => -*sign,
        StringWord::Word(l) => letter_epsilon(alg, l[l.len() - 1]),
    }
}

/// `CD` when defined, including the unit rules for trivial strings.
pub fn concat(alg: &Algebra, c: &StringWord, d: &StringWord) -> Option<StringWord> {
    let q = alg.quiver();
    match (c, d) {
        (StringWord::Trivial { vertex, sign }, _) => {
            (d.source(q) == *vertex && sign_sigma(alg, d) == *sign).then(|| d.clone())
        }
        (_, StringWord::Trivial { vertex, sign }) => {
            (c.target(q) == *vertex && sign_epsilon(alg, c) == -*sign).then(|| c.clone())
        }
        (StringWord::Word(a), StringWord::Word(b)) => {
            let mut w = a.clone();
            for &l in b {
                w.push(l);
                if check_last(alg, &w).is_err() {
                    return None;
                }
            }
            Some(StringWord::Word(w))
        }
    }
}

/// Representative of `{w, w⁻}`: the smaller of the two.
pub fn canonical(w: &StringWord) -> StringWord {
    let inv = w.inverse();
    if inv < *w { inv } else { w.clone() }
}

/// One representative per ∼-class of strings of length at most `max_len`,
/// ordered by length and then lexicographically.
pub fn enumerate_strings(alg: &Algebra, max_len: usize) -> Vec<StringWord> {
    let mut out: Vec<StringWord> =
        (0..alg.vertex_count()).map(|v| StringWord::trivial(v, Sign::Plus)).collect();
    let letters: Vec<Letter> = (0..alg.arrow_count())
        .flat_map(|a| [Letter::direct(a), Letter::inverse_of(a)])
        .collect();
    let mut layer: Vec<Vec<Letter>> = if max_len >= 1 { letters.iter().map(|&l| vec![l]).collect() } else { Vec::new() };
    let mut len = 1;
    while !layer.is_empty() {
        let mut words: Vec<StringWord> = layer
            .iter()
            .map(|w| StringWord::Word(w.clone()))
            .filter(|w| canonical(w) == *w)
            .collect();
        words.sort();
        out.extend(words);
        if len == max_len {
            break;
        }
        let q = alg.quiver();
        let mut next = Vec::new();
        for w in &layer {
            let end = w[w.len() - 1].target(q);
            for &l in &letters {
                if l.source(q) != end {
                    continue;
                }
                let mut e = w.clone();
                e.push(l);
                if check_last(alg, &e).is_ok() {
                    next.push(e);
                }
            }
        }
        layer = next;
        len += 1;
    }
    out
}

/// Longest string length, or `None` if strings exist of every length up to `cap`.
pub fn max_string_length(alg: &Algebra, cap: usize) -> Option<usize> {
    let all = enumerate_strings(alg, cap + 1);
    let longest = all.iter().map(StringWord::len).max().unwrap_or(0);
    (longest <= cap).then_some(longest)
}

/// A band: cyclic, repeatable forever, primitive, and neither direct nor inverse.
pub fn is_band(alg: &Algebra, w: &StringWord) -> bool {
    let StringWord::Word(letters) = w else { return false };
    let q = alg.quiver();
    if w.is_direct() || w.is_inverse() || w.source(q) != w.target(q) || !is_valid_string(alg, w) {
        return false;
    }
    let n = letters.len();
    let primitive = (1..n).filter(|d| n % d == 0).all(|d| (0..n).any(|i| letters[i] != letters[i % d]));
    if !primitive {
        return false;
    }
    let copies = alg.rho.longest() / n + 2;
    let repeated = StringWord::Word(letters.iter().copied().cycle().take(n * copies).collect());
    is_valid_string(alg, &repeated)
}

/// Canonical rotation of a band: smallest among all rotations of `b` and `b⁻`.
pub fn band_rotation(b: &StringWord) -> StringWord {
    let letters = b.letters();
    let n = letters.len();
    let inv = b.inverse();
    let mut best: Option<StringWord> = None;
    for word in [letters, inv.letters()] {
        for r in 0..n {
            let rot = StringWord::Word(word[r..].iter().chain(&word[..r]).copied().collect());
            if best.as_ref().is_none_or(|b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    best.unwrap_or_else(|| b.clone())
}
