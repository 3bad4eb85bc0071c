//! Projective covers, syzygies, `Ext¹` as a cokernel, and overlap extensions.

use serde_json::json;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graph_maps::{hom_linear, AdmissiblePair};
use crate::linalg::{nullspace_basis, quotient_basis, rank, Echelon, Mat};
use crate::modules::{direct_sum, string_module, ExplicitModule, Provenance, Toolkit};
use crate::strings::{canonical, concat, StringWord};

/// `P0 ↠ m` with `P0 = ⊕ P_{v(t)}` over the top basis of `m`.
#[derive(Clone, Debug)]
pub struct ProjectiveCover<F> {
    pub cover: ExplicitModule<F>,
    pub epi: Mat<F>,
    /// `(vertex, offset)` of every summand `P_v` inside `cover`.
    pub summands: Vec<(usize, usize)>,
}

/// `0 → Ω m → P0 → m → 0`, with the rows of `kernel` spanning `Ω m` inside `P0`.
#[derive(Clone, Debug)]
pub struct Syzygy<F> {
    pub cover: ProjectiveCover<F>,
    pub kernel: Mat<F>,
    pub omega: ExplicitModule<F>,
}

#[derive(Clone, Debug)]
pub struct Ext1Space<F> {
    pub dim: usize,
    /// Homomorphisms `Ω m → n` whose classes form a basis.
    pub representatives: Vec<Mat<F>>,
    pub hom_dim: usize,
    pub restriction_rank: usize,
}

#[derive(Clone, Debug)]
pub struct ShortExactSequence<F> {
    pub left: ExplicitModule<F>,
    pub middle: ExplicitModule<F>,
    pub right: ExplicitModule<F>,
    pub inj: Mat<F>,
    pub surj: Mat<F>,
    /// For overlap sequences: `[X, Y1, Y2, Z]` as in `0 → M(X) → M(Y1) ⊕ M(Y2) → M(Z) → 0`.
    pub strings: Option<[StringWord; 4]>,
}

/// How non-splitness of a sequence was established.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NonSplit {
    EndDimension { middle: usize, ends: usize },
    StringMultiset,
    NotCertified,
}

impl NonSplit {
    pub fn certified(&self) -> bool {
        !matches!(self, NonSplit::NotCertified)
    }
}

fn unit<F: Field>(n: usize, i: usize) -> Vec<F> {
    let mut e = vec![F::zero(); n];
    e[i] = F::one();
    e
}

impl<F: Field> Toolkit<'_, F> {
    pub fn projective_cover(&self, m: &ExplicitModule<F>) -> Result<ProjectiveCover<F>> {
        let top = crate::modules::top_basis(m);
        let parts: Vec<&ExplicitModule<F>> = top.iter().map(|&t| self.projective(m.vertex_of[t])).collect();
        let (cover, ranges) = direct_sum(self.alg, &parts)?;
        let mut rows = Vec::with_capacity(cover.dim());
        let mut summands = Vec::new();
        for (&t, r) in top.iter().zip(&ranges) {
            let v = m.vertex_of[t];
            summands.push((v, r.start));
            let e = unit::<F>(m.dim(), t);
            for &c in &self.alg.basis.starting_at(v) {
                rows.push(m.act_path(&e, &self.alg.basis.classes[c].representative().arrows));
            }
        }
        let epi = Mat::from_rows(rows, m.dim());
        if rank(&epi) != m.dim() {
            return Err(Error::Internal("projective cover is not surjective".into()));
        }
        Ok(ProjectiveCover { cover, epi, summands })
    }

    pub fn syzygy(&self, m: &ExplicitModule<F>) -> Result<Syzygy<F>> {
        let pc = self.projective_cover(m)?;
        let p = &pc.cover;
        let mut kernel_rows: Vec<Vec<F>> = Vec::new();
        let mut vertex_of = Vec::new();
        let mut per_vertex: Vec<Vec<usize>> = vec![Vec::new(); self.alg.vertex_count()];
        for v in 0..self.alg.vertex_count() {
            let rows_v = p.at_vertex(v);
            if rows_v.is_empty() {
                continue;
            }
            let cols_v = m.at_vertex(v);
            // left kernel of epi restricted to vertex v
            let t = Mat::from_rows(
                cols_v.iter().map(|&j| rows_v.iter().map(|&i| pc.epi.get(i, j).clone()).collect()).collect(),
                rows_v.len(),
            );
            let t = if cols_v.is_empty() { Mat::zeros(0, rows_v.len()) } else { t };
            for k in nullspace_basis(&t) {
                let mut u = vec![F::zero(); p.dim()];
                for (&i, x) in rows_v.iter().zip(k) {
                    u[i] = x;
                }
                per_vertex[v].push(kernel_rows.len());
                kernel_rows.push(u);
                vertex_of.push(v);
            }
        }
        let k = kernel_rows.len();
        if k + m.dim() != p.dim() {
            return Err(Error::Internal("syzygy has the wrong dimension".into()));
        }
        let echelons: Vec<Echelon<F>> = per_vertex
            .iter()
            .map(|idx| {
                let mut e = Echelon::tracking(p.dim());
                for &i in idx {
                    e.insert(&kernel_rows[i]);
                }
                e
            })
            .collect();
        let q = self.alg.quiver();
        let mut action = vec![Mat::zeros(k, k); self.alg.arrow_count()];
        for (a, mat) in action.iter_mut().enumerate() {
            let t = q.target(a);
            for i in 0..k {
                if vertex_of[i] != q.source(a) {
                    continue;
                }
                let w = p.action[a].apply_row(&kernel_rows[i]);
                if w.iter().all(F::is_zero) {
                    continue;
                }
                let coeffs = echelons[t]
                    .express(&w)
                    .ok_or_else(|| Error::Internal("syzygy is not a submodule".into()))?;
                for (pos, c) in coeffs.into_iter().enumerate() {
                    if !c.is_zero() {
                        mat.set(i, per_vertex[t][pos], c);
                    }
                }
            }
        }
        let omega = ExplicitModule::new(self.alg, vertex_of, action, Provenance::Syzygy(Box::new(m.provenance.clone())))?;
        let kernel = Mat::from_rows(kernel_rows, p.dim());
        Ok(Syzygy { cover: pc, kernel, omega })
    }

    /// `Ext¹(m, n) = coker(Hom(P0, n) → Hom(Ω m, n))`.
    pub fn ext1(&self, m: &ExplicitModule<F>, n: &ExplicitModule<F>) -> Result<Ext1Space<F>> {
        let syz = self.syzygy(m)?;
        Ok(self.ext1_from(&syz, n))
    }

    /// [`Toolkit::ext1`] with a precomputed syzygy of the first argument.
    pub fn ext1_from(&self, syz: &Syzygy<F>, n: &ExplicitModule<F>) -> Ext1Space<F> {
        let homs = hom_linear(&syz.omega, n);
        if homs.is_empty() {
            return Ext1Space { dim: 0, representatives: Vec::new(), hom_dim: 0, restriction_rank: 0 };
        }
        let p = &syz.cover.cover;
        let mut restrictions = Vec::new();
        for &(v, off) in &syz.cover.summands {
            let pv = self.projective(v).dim();
            for j in n.at_vertex(v) {
                let h = self.map_from_projective(v, n, j);
                let mut full = Mat::zeros(p.dim(), n.dim());
                for r in 0..pv {
                    for c in 0..n.dim() {
                        if !h.get(r, c).is_zero() {
                            full.set(off + r, c, h.get(r, c).clone());
                        }
                    }
                }
                restrictions.push(syz.kernel.mul(&full).into_flat());
            }
        }
        let flat: Vec<Vec<F>> = homs.iter().map(|h| h.flat().to_vec()).collect();
        let reps = quotient_basis(&flat, &restrictions).expect("restrictions are homomorphisms");
        let (rows, cols) = (syz.omega.dim(), n.dim());
        let restriction_rank = homs.len() - reps.len();
        Ext1Space {
            dim: reps.len(),
            representatives: reps.into_iter().map(|v| Mat::from_flat(rows, cols, v)).collect(),
            hom_dim: homs.len(),
            restriction_rank,
        }
    }

    /// Whether `ses` does not split, by comparing `dim End(middle)` with
    /// `dim End(left ⊕ right)`, falling back to comparing the string summands.
    pub fn nonsplit_certificate(&self, ses: &ShortExactSequence<F>) -> Result<NonSplit> {
        let middle = hom_linear(&ses.middle, &ses.middle).len();
        let (ends, _) = direct_sum(self.alg, &[&ses.left, &ses.right])?;
        let ends = hom_linear(&ends, &ends).len();
        if middle != ends {
            return Ok(NonSplit::EndDimension { middle, ends });
        }
        if let Some([x, y1, y2, z]) = &ses.strings {
            let norm = |w: &StringWord| match canonical(w) {
                StringWord::Trivial { vertex, .. } => StringWord::trivial(vertex, crate::presentation::Sign::Plus),
                w => w,
            };
            let mut a = vec![norm(y1), norm(y2)];
            let mut b = vec![norm(x), norm(z)];
            a.sort();
            b.sort();
            if a != b {
                return Ok(NonSplit::StringMultiset);
            }
        }
        Ok(NonSplit::NotCertified)
    }
}

/// Rank, composition and homomorphism checks for `0 → left → middle → right → 0`.
pub fn verify_exact<F: Field>(s: &ShortExactSequence<F>) -> bool {
    let (l, m, r) = (s.left.dim(), s.middle.dim(), s.right.dim());
    s.inj.rows() == l
        && s.inj.cols() == m
        && s.surj.rows() == m
        && s.surj.cols() == r
        && l + r == m
        && rank(&s.inj) == l
        && rank(&s.surj) == r
        && s.inj.mul(&s.surj).is_zero()
        && s.left.is_homomorphism(&s.middle, &s.inj)
        && s.middle.is_homomorphism(&s.right, &s.surj)
}

fn join(alg: &Algebra, d: Option<&StringWord>, e: &StringWord, f: Option<&StringWord>) -> Option<StringWord> {
    let mut w = e.clone();
    if let Some(d) = d {
        w = concat(alg, d, &w)?;
    }
    if let Some(f) = f {
        w = concat(alg, &w, f)?;
    }
    Some(w)
}

/// The sequence `0 → M(D₁EF₁) → M(D₁EF₂) ⊕ M(D₂EF₁) → M(D₂EF₂) → 0`.
///
/// `None` stands for an empty part. `D₁` must end and `F₂` start with an
/// inverse letter, `F₁` must start and `D₂` end with a direct letter.
pub fn overlap_extension<F: Field>(
    alg: &Algebra,
    d1: Option<&StringWord>,
    e: &StringWord,
    f1: Option<&StringWord>,
    d2: Option<&StringWord>,
    f2: Option<&StringWord>,
) -> Result<ShortExactSequence<F>> {
    let q = alg.quiver();
    let nonempty = |w: Option<&StringWord>| w.filter(|w| !w.is_trivial()).cloned();
    let (d1, f1, d2, f2) = (nonempty(d1), nonempty(f1), nonempty(d2), nonempty(f2));
    let shape_ok = d1.as_ref().is_none_or(|w| w.letters().last().unwrap().inverse)
        && f1.as_ref().is_none_or(|w| !w.letters()[0].inverse)
        && d2.as_ref().is_none_or(|w| !w.letters().last().unwrap().inverse)
        && f2.as_ref().is_none_or(|w| w.letters()[0].inverse);
    if !shape_ok {
        return Err(Error::Precondition("hypothesis violated: the parts do not form an admissible pair".into()));
    }
    let build = |d: &Option<StringWord>, f: &Option<StringWord>, name: &str| {
        join(alg, d.as_ref(), e, f.as_ref())
            .ok_or_else(|| Error::Precondition(format!("hypothesis violated: {name} is not a string")))
    };
    let x = build(&d1, &f1, "D1 E F1")?;
    let y1 = build(&d1, &f2, "D1 E F2")?;
    let y2 = build(&d2, &f1, "D2 E F1")?;
    let z = build(&d2, &f2, "D2 E F2")?;
    let len = |w: &Option<StringWord>| w.as_ref().map_or(0, StringWord::len);
    let (l1, l2, le) = (len(&d1), len(&d2), e.len());
    let (mx, _) = string_module::<F>(alg, &x)?;
    let (my1, _) = string_module::<F>(alg, &y1)?;
    let (my2, _) = string_module::<F>(alg, &y2)?;
    let (mz, _) = string_module::<F>(alg, &z)?;
    let (middle, ranges) = direct_sum(alg, &[&my1, &my2])?;
    let mut inj = Mat::zeros(mx.dim(), middle.dim());
    for i in 0..=l1 + le {
        inj.set(i, ranges[0].start + i, F::one());
    }
    for k in 0..=le + len(&f1) {
        inj.set(l1 + k, ranges[1].start + l2 + k, F::one());
    }
    let mut surj = Mat::zeros(middle.dim(), mz.dim());
    for k in 0..=le + len(&f2) {
        surj.set(ranges[0].start + l1 + k, l2 + k, F::one());
    }
    for i in 0..=l2 + le {
        surj.set(ranges[1].start + i, i, F::one().neg());
    }
    let ses = ShortExactSequence { left: mx, middle, right: mz, inj, surj, strings: Some([x, y1, y2, z]) };
    if !verify_exact(&ses) {
        let [x, ..] = ses.strings.as_ref().unwrap();
        return Err(Error::Precondition(format!("overlap sequence starting at {} is not exact", x.display(q))));
    }
    Ok(ses)
}

/// A witness for `Ext¹(M(C₂), M(C₁)) ≠ 0` for a two-sided pair whose
/// overlap is neither direct nor inverse, via one of the two overlap branches.
pub fn nondirect_middle_ext_witness<F: Field>(alg: &Algebra, a: &AdmissiblePair) -> Result<ShortExactSequence<F>> {
    let class = a.classify();
    if !class.two_sided {
        return Err(Error::Precondition("the admissible pair is weakly one-sided".into()));
    }
    let a = a.a_l();
    let e = &a.fac.e;
    if e.is_direct() || e.is_inverse() {
        return Err(Error::Precondition("the overlap string is direct or inverse".into()));
    }
    let (d1, f1, d2, f2) = (&a.fac.d, &a.fac.f, &a.sub.d, &a.sub.f);
    if let Ok(ses) = overlap_extension(alg, Some(d1), e, Some(f1), Some(d2), Some(f2)) {
        return Ok(ses);
    }
    let (d2r, f2r) = (f2.inverse(), d2.inverse());
    overlap_extension(alg, Some(d1), e, Some(f1), Some(&d2r), Some(&f2r)).map_err(|err| {
        Error::Precondition(format!("neither overlap branch applies to {}: {err}", a.display(alg)))
    })
}

impl<F: Field> ShortExactSequence<F> {
    pub fn to_json(&self, alg: &Algebra) -> serde_json::Value {
        json!({
            "left": self.left.to_json(alg),
            "middle": self.middle.to_json(alg),
            "right": self.right.to_json(alg),
            "inj": self.inj.to_json(),
            "surj": self.surj.to_json(),
        })
    }
}
