//! Graph maps between string modules, and the generic Hom solver.

use serde::Serialize;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Mat, SparseEchelon, SparseVec};
use crate::modules::ExplicitModule;
use crate::presentation::Sign;
use crate::strings::{sign_epsilon, sign_sigma, StringWord};

/// A decomposition `C = DEF`, remembering where `E` sits in `C`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Triple {
    pub d: StringWord,
    pub e: StringWord,
    pub f: StringWord,
}

impl Triple {
    /// `(F⁻, E⁻, D⁻)`, a decomposition of `C⁻`.
    pub fn reversed(&self) -> Triple {
        Triple { d: self.f.inverse(), e: self.e.inverse(), f: self.d.inverse() }
    }

    pub fn display(&self, alg: &Algebra) -> String {
        let q = alg.quiver();
        format!("({}, {}, {})", self.d.display(q), self.e.display(q), self.f.display(q))
    }
}

/// All decompositions `C = DEF`, with the sign conventions for length-0 parts.
fn decompositions(alg: &Algebra, c: &StringWord) -> Vec<(Triple, usize, usize)> {
    let q = alg.quiver();
    let StringWord::Word(letters) = c else {
        return vec![(Triple { d: c.clone(), e: c.clone(), f: c.clone() }, 0, 0)];
    };
    let n = letters.len();
    let mut out = Vec::new();
    for i in 0..=n {
        for j in i..=n {
            let e = if i == j {
                let t = if i < n {
                    sign_sigma(alg, &StringWord::Word(vec![letters[i]]))
                } else {
                    -sign_epsilon(alg, c)
                };
                c.slice(q, i, i, t)
            } else {
                c.slice(q, i, j, Sign::Plus)
            };
            let d = if i == 0 { c.slice(q, 0, 0, sign_sigma(alg, &e)) } else { c.slice(q, 0, i, Sign::Plus) };
            let f = if j == n {
                let de_eps = if j == 0 { sign_epsilon(alg, &e) } else { sign_epsilon(alg, &c.slice(q, 0, j, Sign::Plus)) };
                c.slice(q, n, n, -de_eps)
            } else {
                c.slice(q, j, n, Sign::Plus)
            };
            out.push((Triple { d, e, f }, i, j));
        }
    }
    out
}

/// Factor strings: `D` empty or ending in an inverse letter, `F` empty or
/// starting with a direct letter.
pub fn factor_strings(alg: &Algebra, c: &StringWord) -> Vec<Triple> {
    decompositions(alg, c)
        .into_iter()
        .filter(|(t, _, _)| {
            t.d.letters().last().is_none_or(|l| l.inverse) && t.f.letters().first().is_none_or(|l| !l.inverse)
        })
        .map(|(t, _, _)| t)
        .collect()
}

/// Substrings: `D` empty or ending in a direct letter, `F` empty or starting
/// with an inverse letter.
pub fn substrings(alg: &Algebra, c: &StringWord) -> Vec<Triple> {
    decompositions(alg, c)
        .into_iter()
        .filter(|(t, _, _)| {
            t.d.letters().last().is_none_or(|l| !l.inverse) && t.f.letters().first().is_none_or(|l| l.inverse)
        })
        .map(|(t, _, _)| t)
        .collect()
}

/// An element of `𝒜(C₁, C₂)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AdmissiblePair {
    pub fac: Triple,
    pub sub: Triple,
    /// `E₁ = E₂` (as opposed to `E₁ = E₂⁻`).
    pub oriented: bool,
}

fn is_one_sided(fac: &Triple, sub: &Triple) -> (bool, bool) {
    if fac.e != sub.e {
        return (false, false);
    }
    let left = fac.d.len() == 0 && sub.d.len() == 0;
    let right = fac.f.len() == 0 && sub.f.len() == 0;
    (left, right)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub oriented: bool,
    pub left_sided: bool,
    pub right_sided: bool,
    pub one_sided: bool,
    pub weakly_one_sided: bool,
    pub two_sided: bool,
    /// `(left-sided, right-sided)` flags of `a(l)` and of `a(r)`.
    pub a_l_sides: (bool, bool),
    pub a_r_sides: (bool, bool),
}

impl AdmissiblePair {
    /// `a(l)`: orient by reversing the source string if needed.
    pub fn a_l(&self) -> AdmissiblePair {
        if self.oriented {
            self.clone()
        } else {
            AdmissiblePair { fac: self.fac.reversed(), sub: self.sub.clone(), oriented: true }
        }
    }

    /// `a(r)`: orient by reversing the target string if needed.
    pub fn a_r(&self) -> AdmissiblePair {
        if self.oriented {
            self.clone()
        } else {
            AdmissiblePair { fac: self.fac.clone(), sub: self.sub.reversed(), oriented: true }
        }
    }

    pub fn classify(&self) -> Classification {
        let (left, right) = is_one_sided(&self.fac, &self.sub);
        let flipped = is_one_sided(&self.fac, &self.sub.reversed());
        let weakly = left || right || flipped.0 || flipped.1;
        let l = self.a_l();
        let r = self.a_r();
        Classification {
            oriented: self.oriented,
            left_sided: left,
            right_sided: right,
            one_sided: left || right,
            weakly_one_sided: weakly,
            two_sided: !weakly,
            a_l_sides: is_one_sided(&l.fac, &l.sub),
            a_r_sides: is_one_sided(&r.fac, &r.sub),
        }
    }

    pub fn display(&self, alg: &Algebra) -> String {
        format!("({}, {})", self.fac.display(alg), self.sub.display(alg))
    }
}

/// A graph map `f_a: M(C₁) → M(C₂)`. Its matrix has 0/1 entries and is
/// stored as the image index of each canonical basis vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphMap {
    pub source: StringWord,
    pub target: StringWord,
    pub pair: AdmissiblePair,
    pub images: Vec<Option<usize>>,
    pub target_dim: usize,
}

impl GraphMap {
    pub fn matrix<F: Field>(&self) -> Mat<F> {
        let mut m = Mat::zeros(self.images.len(), self.target_dim);
        for (i, j) in self.images.iter().enumerate() {
            if let Some(j) = j {
                m.set(i, *j, F::one());
            }
        }
        m
    }

    pub fn rank(&self) -> usize {
        self.images.iter().flatten().count()
    }

    pub fn classify(&self) -> Classification {
        self.pair.classify()
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.images.iter().enumerate().all(|(i, j)| *j == Some(i))
    }

    fn sort_key(&self) -> (usize, usize, bool, usize) {
        (self.pair.fac.d.len(), self.pair.fac.e.len(), !self.pair.oriented, self.pair.sub.d.len())
    }
}

/// All of `𝒜(C₁, C₂)` with orientation flags, in deterministic order.
pub fn admissible_pairs(alg: &Algebra, c1: &StringWord, c2: &StringWord) -> Vec<AdmissiblePair> {
    let subs = substrings(alg, c2);
    let mut out = Vec::new();
    for fac in factor_strings(alg, c1) {
        for sub in &subs {
            if fac.e == sub.e {
                out.push(AdmissiblePair { fac: fac.clone(), sub: sub.clone(), oriented: true });
            } else if fac.e == sub.e.inverse() {
                out.push(AdmissiblePair { fac: fac.clone(), sub: sub.clone(), oriented: false });
            }
        }
    }
    out.sort_by_key(|a| (a.fac.d.len(), a.fac.e.len(), !a.oriented, a.sub.d.len()));
    out
}

/// The graph map `f_a`, checked to be a homomorphism.
pub fn graph_map(alg: &Algebra, c1: &StringWord, c2: &StringWord, a: &AdmissiblePair) -> Result<GraphMap> {
    let gm = graph_map_unchecked(c1, c2, a);
    let (m1, _) = crate::modules::string_module::<crate::field::Rational>(alg, c1)?;
    let (m2, _) = crate::modules::string_module::<crate::field::Rational>(alg, c2)?;
    if !m1.is_homomorphism(&m2, &gm.matrix()) {
        return Err(Error::Internal(format!("graph map {} is not a homomorphism", a.display(alg))));
    }
    Ok(gm)
}

pub fn graph_map_unchecked(c1: &StringWord, c2: &StringWord, a: &AdmissiblePair) -> GraphMap {
    let mut images = vec![None; c1.len() + 1];
    let (i1, i2, e) = (a.fac.d.len(), a.sub.d.len(), a.fac.e.len());
    for k in 0..=e {
        images[i1 + k] = Some(if a.oriented { i2 + k } else { i2 + e - k });
    }
    GraphMap { source: c1.clone(), target: c2.clone(), pair: a.clone(), images, target_dim: c2.len() + 1 }
}

/// One graph map per admissible pair, deduplicated by matrix.
pub fn hom_basis_graph(alg: &Algebra, c1: &StringWord, c2: &StringWord) -> Vec<GraphMap> {
    let mut out: Vec<GraphMap> = Vec::new();
    for a in admissible_pairs(alg, c1, c2) {
        let gm = graph_map_unchecked(c1, c2, &a);
        if !out.iter().any(|g| g.images == gm.images) {
            out.push(gm);
        }
    }
    out.sort_by_key(GraphMap::sort_key);
    out
}

/// `f` followed by `g`: zero, or the index of the graph map in `candidates`
/// (a basis of `Hom(M(C₁), M(C₃))`) with the same matrix.
pub fn compose_in(f: &GraphMap, g: &GraphMap, candidates: &[GraphMap]) -> Result<Option<usize>> {
    if f.target != g.source {
        return Err(Error::Precondition("composition of graph maps with mismatched strings".into()));
    }
    let images: Vec<Option<usize>> = f.images.iter().map(|j| j.and_then(|j| g.images[j])).collect();
    if images.iter().all(Option::is_none) {
        return Ok(None);
    }
    candidates
        .iter()
        .position(|c| c.images == images)
        .map(Some)
        .ok_or_else(|| Error::Internal("product of graph maps is neither zero nor a graph map".into()))
}

pub fn compose(alg: &Algebra, f: &GraphMap, g: &GraphMap) -> Result<Option<GraphMap>> {
    let candidates = hom_basis_graph(alg, &f.source, &g.target);
    Ok(compose_in(f, g, &candidates)?.map(|i| candidates[i].clone()))
}

/// The sidedness law for a composable pair of graph maps: if `a(l)` and
/// `b(r)` are both left-sided or both right-sided the product is a nonzero
/// weakly one-sided graph map, otherwise it is zero or two-sided.
/// Pairs that are not both weakly one-sided satisfy it vacuously.
pub fn sidedness_law_holds(alg: &Algebra, f: &GraphMap, g: &GraphMap, candidates: &[GraphMap]) -> Result<bool> {
    let (cf, cg) = (f.classify(), g.classify());
    if !(cf.weakly_one_sided && cg.weakly_one_sided) {
        return Ok(true);
    }
    let product = compose_in(f, g, candidates)?;
    let realizations: Vec<Classification> = match product {
        None => Vec::new(),
        Some(k) => admissible_pairs(alg, &f.source, &g.target)
            .into_iter()
            .filter(|a| graph_map_unchecked(&f.source, &g.target, a).images == candidates[k].images)
            .map(|a| a.classify())
            .collect(),
    };
    let matching = (cf.a_l_sides.0 && cg.a_r_sides.0) || (cf.a_l_sides.1 && cg.a_r_sides.1);
    Ok(if matching {
        realizations.iter().any(|c| c.weakly_one_sided)
    } else {
        realizations.is_empty() || realizations.iter().any(|c| c.two_sided)
    })
}

/// Basis of `Hom(m, n)`: solutions of `A_M(α)·F = F·A_N(α)` with `F`
/// respecting the vertex grading.
pub fn hom_linear<F: Field>(m: &ExplicitModule<F>, n: &ExplicitModule<F>) -> Vec<Mat<F>> {
    let (dm, dn) = (m.dim(), n.dim());
    let vertices = m.vertex_of.iter().chain(&n.vertex_of).copied().max().map_or(0, |v| v + 1);
    let mut m_at: Vec<Vec<usize>> = vec![Vec::new(); vertices];
    let mut n_at: Vec<Vec<usize>> = vec![Vec::new(); vertices];
    let mut pos_m = vec![0; dm];
    let mut pos_n = vec![0; dn];
    for (i, &v) in m.vertex_of.iter().enumerate() {
        pos_m[i] = m_at[v].len();
        m_at[v].push(i);
    }
    for (j, &v) in n.vertex_of.iter().enumerate() {
        pos_n[j] = n_at[v].len();
        n_at[v].push(j);
    }
    let mut offset = vec![0; vertices + 1];
    for v in 0..vertices {
        offset[v + 1] = offset[v] + m_at[v].len() * n_at[v].len();
    }
    let unknowns = offset[vertices];
    if unknowns == 0 {
        return Vec::new();
    }
    let idx = |i: usize, j: usize| {
        let v = m.vertex_of[i];
        offset[v] + pos_m[i] * n_at[v].len() + pos_n[j]
    };
    let mut ech = SparseEchelon::new(unknowns);
    for (am, an) in m.action.iter().zip(&n.action) {
        let rows_m: Vec<Vec<(usize, F)>> = (0..dm)
            .map(|i| (0..dm).filter(|&j| !am.get(i, j).is_zero()).map(|j| (j, am.get(i, j).clone())).collect())
            .collect();
        let cols_n: Vec<Vec<(usize, F)>> = (0..dn)
            .map(|l| (0..dn).filter(|&j| !an.get(j, l).is_zero()).map(|j| (j, an.get(j, l).clone())).collect())
            .collect();
        for i in 0..dm {
            for l in 0..dn {
                if rows_m[i].is_empty() && cols_n[l].is_empty() {
                    continue;
                }
                let mut row: SparseVec<F> = Vec::new();
                for (j, a) in &rows_m[i] {
                    if m.vertex_of[*j] == n.vertex_of[l] {
                        row.push((idx(*j, l), a.clone()));
                    }
                }
                for (j, b) in &cols_n[l] {
                    if m.vertex_of[i] == n.vertex_of[*j] {
                        row.push((idx(i, *j), b.neg()));
                    }
                }
                if row.is_empty() {
                    continue;
                }
                row.sort_by_key(|(c, _)| *c);
                let mut merged: SparseVec<F> = Vec::with_capacity(row.len());
                for (c, x) in row {
                    match merged.last_mut() {
                        Some((lc, lx)) if *lc == c => *lx = lx.add(&x),
                        _ => merged.push((c, x)),
                    }
                }
                merged.retain(|(_, x)| !x.is_zero());
                if !merged.is_empty() {
                    ech.insert(&merged);
                }
            }
        }
    }
    ech.nullspace()
        .into_iter()
        .map(|v| {
            let mut f = Mat::zeros(dm, dn);
            for i in 0..dm {
                let vi = m.vertex_of[i];
                for &j in &n_at[vi] {
                    let x = &v[idx(i, j)];
                    if !x.is_zero() {
                        f.set(i, j, x.clone());
                    }
                }
            }
            f
        })
        .collect()
}

/// Rank of a family of graph maps between the same pair of strings.
pub fn graph_map_rank(maps: &[GraphMap]) -> usize {
    let Some(first) = maps.first() else { return 0 };
    let width = first.target_dim;
    let mut ech = SparseEchelon::<crate::field::Rational>::new(first.images.len() * width);
    let mut rank = 0;
    for g in maps {
        let v: SparseVec<crate::field::Rational> = g
            .images
            .iter()
            .enumerate()
            .filter_map(|(i, j)| j.map(|j| (i * width + j, crate::field::Rational::one())))
            .collect();
        if ech.insert(&v) {
            rank += 1;
        }
    }
    rank
}
