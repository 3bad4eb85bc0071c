//! Stable Hom, the stable endomorphism algebra of a sum of string modules,
//! extraction of its quiver with relations, and the main-theorem verdict.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::graph_maps::{admissible_pairs, graph_map_unchecked, hom_basis_graph, hom_linear, compose_in, GraphMap};
use crate::linalg::{quotient_basis, Echelon, Mat};
use crate::modules::{is_projective_string, ExplicitModule, Toolkit};
use crate::presentation::{Arrow, Presentation, Quiver, Relation, ValidationReport};
use crate::strings::{canonical, check_string, StringWord};

/// The maps `m → n` factoring through a projective module.
#[derive(Clone, Debug)]
pub struct ProjTrivialSubspace<F> {
    pub source_dim: usize,
    pub target_dim: usize,
    pub basis: Vec<Mat<F>>,
    echelon: Echelon<F>,
}

impl<F: Field> ProjTrivialSubspace<F> {
    fn empty(source_dim: usize, target_dim: usize) -> Self {
        ProjTrivialSubspace { source_dim, target_dim, basis: Vec::new(), echelon: Echelon::new(source_dim * target_dim) }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, f: &Mat<F>) -> bool {
        self.echelon.contains(f.flat())
    }

    fn insert(&mut self, f: Mat<F>) {
        if self.echelon.insert(f.flat()) {
            self.basis.push(f);
        }
    }
}

#[derive(Clone, Debug)]
pub struct StableHom<F> {
    pub hom: Vec<Mat<F>>,
    pub subspace: ProjTrivialSubspace<F>,
    pub representatives: Vec<Mat<F>>,
}

impl<F> StableHom<F> {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }
}

/// A string module with its maps into every indecomposable projective.
#[derive(Clone, Debug)]
pub struct StringData<F> {
    pub word: StringWord,
    pub module: ExplicitModule<F>,
    to_projectives: Vec<Vec<Mat<F>>>,
}

impl<F: Field> Toolkit<'_, F> {
    /// A basis of `Hom(m, P_i)` for every vertex `i`.
    pub fn maps_to_projectives(&self, m: &ExplicitModule<F>) -> Vec<Vec<Mat<F>>> {
        (0..self.alg.vertex_count()).map(|i| hom_linear(m, self.projective(i))).collect()
    }

    pub fn string_data(&self, c: &StringWord) -> Result<StringData<F>> {
        let module = self.string_module(c)?;
        let to_projectives = self.maps_to_projectives(&module);
        Ok(StringData { word: c.clone(), module, to_projectives })
    }

    /// Span of `g·h` over `g ∈ Hom(m, P_i)`, `h ∈ Hom(P_i, n)`, given the first factors.
    pub fn proj_trivial_with(&self, m_dim: usize, to_projectives: &[Vec<Mat<F>>], n: &ExplicitModule<F>) -> ProjTrivialSubspace<F> {
        let mut sub = ProjTrivialSubspace::empty(m_dim, n.dim());
        for (i, gs) in to_projectives.iter().enumerate() {
            if gs.is_empty() {
                continue;
            }
            for j in n.at_vertex(i) {
                let h = self.map_from_projective(i, n, j);
                for g in gs {
                    let f = g.mul(&h);
                    if !f.is_zero() {
                        sub.insert(f);
                    }
                }
            }
        }
        sub
    }

    pub fn proj_trivial_subspace(&self, m: &ExplicitModule<F>, n: &ExplicitModule<F>) -> ProjTrivialSubspace<F> {
        self.proj_trivial_with(m.dim(), &self.maps_to_projectives(m), n)
    }

    pub fn stable_hom(&self, m: &ExplicitModule<F>, n: &ExplicitModule<F>) -> StableHom<F> {
        let hom = hom_linear(m, n);
        let subspace = self.proj_trivial_subspace(m, n);
        let flat: Vec<Vec<F>> = hom.iter().map(|h| h.flat().to_vec()).collect();
        let sub: Vec<Vec<F>> = subspace.basis.iter().map(|h| h.flat().to_vec()).collect();
        let reps = quotient_basis(&flat, &sub).expect("maps through projectives are homomorphisms");
        let representatives = reps.into_iter().map(|v| Mat::from_flat(m.dim(), n.dim(), v)).collect();
        StableHom { hom, subspace, representatives }
    }
}

/// A graph map between two summands whose stable class is nonzero.
#[derive(Clone, Debug, Serialize)]
pub struct Survivor {
    pub from: usize,
    pub to: usize,
    pub map: GraphMap,
    pub weakly_one_sided: bool,
}

fn check_summands(tk: &Toolkit<'_, impl Field>, strings: &[StringWord], allow_projective: bool) -> Result<()> {
    let q = tk.alg.quiver();
    for (i, c) in strings.iter().enumerate() {
        check_string(tk.alg, c).map_err(|reason| Error::InvalidString { word: c.display(q), reason })?;
        if *c != canonical(c) {
            return Err(Error::Precondition(format!("string {} is not canonical", c.display(q))));
        }
        if strings[..i].contains(c) {
            return Err(Error::Precondition(format!("string {} appears twice", c.display(q))));
        }
        if !allow_projective && is_projective_string(tk.alg, c) {
            return Err(Error::Precondition(format!("M({}) is projective", c.display(q))));
        }
    }
    Ok(())
}

/// Graph maps, proj-trivial subspace and survivors between two summands.
struct Block<F> {
    maps: Vec<GraphMap>,
    subspace: ProjTrivialSubspace<F>,
    survivors: Vec<usize>,
    multiplicative: bool,
}

fn block<F: Field>(tk: &Toolkit<'_, F>, a: &StringData<F>, b: &StringData<F>, stable: bool) -> Block<F> {
    let maps = hom_basis_graph(tk.alg, &a.word, &b.word);
    let subspace = if stable {
        tk.proj_trivial_with(a.module.dim(), &a.to_projectives, &b.module)
    } else {
        ProjTrivialSubspace::empty(a.module.dim(), b.module.dim())
    };
    let survivors: Vec<usize> = (0..maps.len()).filter(|&k| !subspace.contains(&maps[k].matrix())).collect();
    let mut ech = subspace.echelon.clone();
    let independent = survivors.iter().all(|&k| ech.insert(maps[k].matrix::<F>().flat()));
    let multiplicative = independent && survivors.len() + subspace.dim() == maps.len();
    Block { maps, subspace, survivors, multiplicative }
}

fn blocks<F: Field>(tk: &Toolkit<'_, F>, data: &[StringData<F>], stable: bool) -> Vec<Vec<Block<F>>> {
    data.iter().map(|a| data.iter().map(|b| block(tk, a, b, stable)).collect()).collect()
}

fn string_data<F: Field>(tk: &Toolkit<'_, F>, strings: &[StringWord]) -> Result<Vec<StringData<F>>> {
    strings.iter().map(|c| tk.string_data(c)).collect()
}

/// For each ordered pair of summands, the graph maps not factoring through a projective.
pub fn surviving_graph_basis<F: Field>(tk: &Toolkit<'_, F>, strings: &[StringWord]) -> Result<Vec<Survivor>> {
    check_summands(tk, strings, false)?;
    let data = string_data(tk, strings)?;
    let mut out = Vec::new();
    for (i, row) in blocks(tk, &data, true).into_iter().enumerate() {
        for (j, b) in row.into_iter().enumerate() {
            for k in b.survivors {
                let map = b.maps[k].clone();
                let weakly_one_sided = map.classify().weakly_one_sided;
                out.push(Survivor { from: i, to: j, map, weakly_one_sided });
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ElementKind {
    Identity,
    GraphMap,
    Coset,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisElement {
    pub from: usize,
    pub to: usize,
    pub kind: ElementKind,
    pub label: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BasisKind {
    Multiplicative,
    Generic,
}

/// A finite-dimensional algebra given by a basis and its multiplication table.
/// Basis element `e` maps summand `from` to summand `to`; `a·b` is "`a` then `b`".
#[derive(Clone, Debug)]
pub struct StructureConstantAlgebra<F> {
    pub summands: Vec<String>,
    pub elements: Vec<BasisElement>,
    pub kind: BasisKind,
    pub table: Vec<Vec<Vec<(usize, F)>>>,
    pub idempotents: Vec<usize>,
}

impl<F: Field> StructureConstantAlgebra<F> {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn product(&self, a: usize, b: usize) -> &[(usize, F)] {
        &self.table[a][b]
    }

    fn mul_vec(&self, x: &[F], y: &[F]) -> Vec<F> {
        let mut out = vec![F::zero(); self.dim()];
        for (a, xa) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (b, yb) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                for (c, k) in &self.table[a][b] {
                    out[*c] = out[*c].add(&xa.mul(yb).mul(k));
                }
            }
        }
        out
    }

    fn unit_vec(&self, a: usize) -> Vec<F> {
        let mut v = vec![F::zero(); self.dim()];
        v[a] = F::one();
        v
    }

    pub fn is_associative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|a| {
            (0..n).all(|b| {
                let ab = self.mul_vec(&self.unit_vec(a), &self.unit_vec(b));
                (0..n).all(|c| {
                    let bc = self.mul_vec(&self.unit_vec(b), &self.unit_vec(c));
                    self.mul_vec(&ab, &self.unit_vec(c)) == self.mul_vec(&self.unit_vec(a), &bc)
                })
            })
        })
    }

    /// The listed idempotents are orthogonal and sum to the identity.
    pub fn has_unit_decomposition(&self) -> bool {
        let n = self.dim();
        let mut one = vec![F::zero(); n];
        for &e in &self.idempotents {
            one[e] = F::one();
        }
        let orthogonal = self.idempotents.iter().all(|&e| {
            self.idempotents.iter().all(|&f| {
                let p = self.mul_vec(&self.unit_vec(e), &self.unit_vec(f));
                if e == f { p == self.unit_vec(e) } else { p.iter().all(F::is_zero) }
            })
        });
        orthogonal
            && (0..n).all(|a| {
                let x = self.unit_vec(a);
                self.mul_vec(&one, &x) == x && self.mul_vec(&x, &one) == x
            })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let table: Vec<serde_json::Value> = (0..self.dim())
            .flat_map(|a| (0..self.dim()).map(move |b| (a, b)))
            .filter(|&(a, b)| !self.table[a][b].is_empty())
            .map(|(a, b)| {
                serde_json::json!({
                    "left": a,
                    "right": b,
                    "product": self.table[a][b].iter().map(|(c, k)| serde_json::json!([c, k.to_string()])).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::json!({
            "summands": self.summands,
            "kind": self.kind,
            "elements": self.elements,
            "idempotents": self.idempotents,
            "nonzero_products": table,
        })
    }
}

fn build_endo_algebra<F: Field>(tk: &Toolkit<'_, F>, strings: &[StringWord], stable: bool) -> Result<StructureConstantAlgebra<F>> {
    check_summands(tk, strings, !stable)?;
    let q = tk.alg.quiver();
    let data = string_data(tk, strings)?;
    let blocks = blocks(tk, &data, stable);
    let t = strings.len();
    let summands = strings.iter().map(|c| c.display(q)).collect();
    let multiplicative = blocks.iter().flatten().all(|b| b.multiplicative);

    let mut elements = Vec::new();
    // (from, to, position in block) -> element
    let mut ids: HashMap<(usize, usize, usize), usize> = HashMap::new();
    let mut matrices: Vec<Mat<F>> = Vec::new();
    let mut reps: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); t]; t];
    if multiplicative {
        for i in 0..t {
            let b = &blocks[i][i];
            let k = b.maps.iter().position(GraphMap::is_identity).ok_or_else(|| Error::Internal("identity is not a graph map".into()))?;
            ids.insert((i, i, k), elements.len());
            elements.push(BasisElement { from: i, to: i, kind: ElementKind::Identity, label: format!("id{}", i + 1) });
        }
        for i in 0..t {
            for j in 0..t {
                for &k in &blocks[i][j].survivors {
                    if ids.contains_key(&(i, j, k)) {
                        continue;
                    }
                    ids.insert((i, j, k), elements.len());
                    let label = blocks[i][j].maps[k].pair.display(tk.alg);
                    elements.push(BasisElement { from: i, to: j, kind: ElementKind::GraphMap, label });
                }
            }
        }
        let n = elements.len();
        let mut table = vec![vec![Vec::new(); n]; n];
        let mut index: Vec<(usize, usize, usize)> = vec![(0, 0, 0); n];
        for (&key, &e) in &ids {
            index[e] = key;
        }
        for a in 0..n {
            let (i, j, ka) = index[a];
            for b in 0..n {
                let (j2, k, kb) = index[b];
                if j != j2 {
                    continue;
                }
                let f = &blocks[i][j].maps[ka];
                let g = &blocks[j][k].maps[kb];
                if let Some(c) = compose_in(f, g, &blocks[i][k].maps)? {
                    if let Some(&e) = ids.get(&(i, k, c)) {
                        table[a][b].push((e, F::one()));
                    }
                }
            }
        }
        return Ok(StructureConstantAlgebra { summands, elements, kind: BasisKind::Multiplicative, table, idempotents: (0..t).collect() });
    }

    // generic coset representatives, identities first
    for i in 0..t {
        let d = data[i].module.dim();
        matrices.push(Mat::identity(d));
        reps[i][i].push(elements.len());
        elements.push(BasisElement { from: i, to: i, kind: ElementKind::Identity, label: format!("id{}", i + 1) });
    }
    for i in 0..t {
        for j in 0..t {
            let b = &blocks[i][j];
            let mut ech = b.subspace.echelon.clone();
            if i == j {
                ech.insert(Mat::<F>::identity(data[i].module.dim()).flat());
            }
            for (k, g) in b.maps.iter().enumerate() {
                let m = g.matrix::<F>();
                if ech.insert(m.flat()) {
                    reps[i][j].push(elements.len());
                    matrices.push(m);
                    elements.push(BasisElement { from: i, to: j, kind: ElementKind::Coset, label: format!("[{}]", b.maps[k].pair.display(tk.alg)) });
                }
            }
        }
    }
    let n = elements.len();
    let mut solvers: Vec<Vec<Echelon<F>>> = Vec::new();
    for i in 0..t {
        let mut row = Vec::new();
        for j in 0..t {
            let b = &blocks[i][j];
            let mut ech = Echelon::tracking(data[i].module.dim() * data[j].module.dim());
            for &e in &reps[i][j] {
                ech.insert(matrices[e].flat());
            }
            for s in &b.subspace.basis {
                ech.insert(s.flat());
            }
            row.push(ech);
        }
        solvers.push(row);
    }
    let mut table = vec![vec![Vec::new(); n]; n];
    for a in 0..n {
        for b in 0..n {
            let (i, j) = (elements[a].from, elements[a].to);
            if elements[b].from != j {
                continue;
            }
            let k = elements[b].to;
            let p = matrices[a].mul(&matrices[b]);
            let coeffs = solvers[i][k].express(p.flat()).ok_or_else(|| Error::Internal("product left the Hom space".into()))?;
            for (pos, &e) in reps[i][k].iter().enumerate() {
                if !coeffs[pos].is_zero() {
                    table[a][b].push((e, coeffs[pos].clone()));
                }
            }
        }
    }
    Ok(StructureConstantAlgebra { summands, elements, kind: BasisKind::Generic, table, idempotents: (0..t).collect() })
}

/// `End(⊕ M(C_i))` modulo maps factoring through projectives.
pub fn stable_endo_algebra<F: Field>(tk: &Toolkit<'_, F>, strings: &[StringWord]) -> Result<StructureConstantAlgebra<F>> {
    build_endo_algebra(tk, strings, true)
}

/// `End(⊕ M(C_i))` itself, on the basis of graph maps.
pub fn endo_algebra<F: Field>(tk: &Toolkit<'_, F>, strings: &[StringWord]) -> Result<StructureConstantAlgebra<F>> {
    build_endo_algebra(tk, strings, false)
}

/// Quiver with relations of a basic algebra with a multiplicative basis.
#[derive(Clone, Debug)]
pub struct AlgebraPresentation {
    pub presentation: Presentation,
    /// Basis element realizing each arrow.
    pub arrow_elements: Vec<usize>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut x = x;
        while self.0[x] != r {
            let next = self.0[x];
            self.0[x] = r;
            x = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

/// Arrows are the radical basis elements that are not products of radical
/// elements; relations are found degree by degree by comparing paths with the table.
pub fn extract_presentation<F: Field>(alg: &StructureConstantAlgebra<F>) -> Result<AlgebraPresentation> {
    if alg.kind != BasisKind::Multiplicative {
        return Err(Error::GenericBasis);
    }
    let n = alg.dim();
    if alg.table.iter().flatten().any(|p| p.len() > 1) {
        return Err(Error::GenericBasis);
    }
    let radical: Vec<usize> = (0..n).filter(|e| !alg.idempotents.contains(e)).collect();
    let mut decomposable = vec![false; n];
    for &a in &radical {
        for &b in &radical {
            for (c, k) in &alg.table[a][b] {
                if !k.is_zero() {
                    decomposable[*c] = true;
                }
            }
        }
    }
    let arrow_elements: Vec<usize> = radical.iter().copied().filter(|&e| !decomposable[e]).collect();
    let vertex_pos = |e: usize| alg.idempotents.iter().position(|&i| alg.elements[i].from == e).unwrap();
    let quiver = Quiver {
        vertices: (1..=alg.idempotents.len()).map(|i| i.to_string()).collect(),
        arrows: arrow_elements
            .iter()
            .enumerate()
            .map(|(k, &e)| Arrow {
                name: format!("f{}", k + 1),
                source: vertex_pos(alg.elements[e].from),
                target: vertex_pos(alg.elements[e].to),
            })
            .collect(),
    };

    let mut relations = Vec::new();
    let mut reached = vec![false; n];
    // alive paths of the current length: arrows, class, value
    let mut alive: Vec<(Vec<usize>, usize, usize, F)> = Vec::new();
    for (a, &e) in arrow_elements.iter().enumerate() {
        alive.push((vec![a], a, e, F::one()));
        reached[e] = true;
    }
    let mut length = 1;
    while !alive.is_empty() {
        length += 1;
        if length > n + 1 {
            return Err(Error::Internal("radical is not nilpotent".into()));
        }
        let class_of: HashMap<&[usize], usize> = alive.iter().map(|(p, c, _, _)| (p.as_slice(), *c)).collect();
        let mut cands: Vec<(Vec<usize>, Option<(usize, F)>)> = Vec::new();
        let mut by_prefix: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        let mut by_suffix: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (p, class, e, s) in &alive {
            let end = quiver.arrows[*p.last().unwrap()].target;
            for b in quiver.out_arrows(end) {
                let mut path = p.clone();
                path.push(b);
                let Some(&suffix) = class_of.get(&path[1..]) else {
                    continue;
                };
                let value = alg.table[*e][arrow_elements[b]].first().map(|(c, k)| (*c, s.mul(k)));
                by_prefix.entry((*class, b)).or_default().push(cands.len());
                by_suffix.entry((path[0], suffix)).or_default().push(cands.len());
                cands.push((path, value));
            }
        }
        let mut uf = UnionFind((0..cands.len()).collect());
        for group in by_prefix.values().chain(by_suffix.values()) {
            for w in group.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        let mut components: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..cands.len() {
            components.entry(uf.find(i)).or_default().push(i);
        }
        let mut by_value: BTreeMap<usize, Vec<(usize, F)>> = BTreeMap::new();
        let mut next = Vec::new();
        for (&root, members) in &components {
            let value = &cands[root].1;
            if members.iter().any(|&m| cands[m].1 != *value) {
                return Err(Error::Internal("extracted relations are inconsistent with the table".into()));
            }
            match value {
                None => relations.push(Relation::Zero(cands[root].0.clone())),
                Some((e, s)) => by_value.entry(*e).or_default().push((root, s.clone())),
            }
        }
        let mut class = vec![usize::MAX; cands.len()];
        for (e, roots) in &by_value {
            reached[*e] = true;
            let (first, s0) = &roots[0];
            for (r, s) in &roots[1..] {
                if s != s0 {
                    return Err(Error::Precondition("paths agree only up to a scalar".into()));
                }
                relations.push(Relation::Commutativity(cands[*first].0.clone(), cands[*r].0.clone()));
            }
            for (r, _) in roots {
                for &m in &components[r] {
                    class[m] = *first;
                }
            }
        }
        for (i, (path, value)) in cands.into_iter().enumerate() {
            if let Some((e, s)) = value {
                next.push((path, class[i], e, s));
            }
        }
        alive = next;
    }
    if radical.iter().any(|&e| !reached[e]) {
        return Err(Error::Internal("arrows do not generate the radical".into()));
    }
    let presentation = Presentation { quiver, relations };
    if presentation.validate_special_biserial().pass {
        let count = presentation.algebra_basis()?.len();
        if count != n {
            return Err(Error::Internal(format!("extracted presentation has dimension {count}, the table {n}")));
        }
    }
    Ok(AlgebraPresentation { presentation, arrow_elements })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    GentleConfirmed { presentation: String, stable_dim: usize },
    ExtNonzero { from: String, to: String, dim: usize, total: usize },
    /// Ext¹ vanishes but the extracted presentation is not gentle: a counterexample.
    NotGentle { presentation: String, report: ValidationReport },
    Inconclusive { reason: String },
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::GentleConfirmed { .. } => "GENTLE_CONFIRMED",
            Verdict::ExtNonzero { .. } => "EXT_NONZERO",
            Verdict::NotGentle { .. } => "NOT_GENTLE",
            Verdict::Inconclusive { .. } => "INCONCLUSIVE",
        }
    }

    pub fn is_counterexample(&self) -> bool {
        matches!(self, Verdict::NotGentle { .. })
    }
}

/// If `Ext¹(M, M) = 0` for `M = ⊕ M(C_i)`, the stable endomorphism algebra
/// should be gentle; this runs the whole pipeline and reports which branch applied.
pub fn check_main_theorem<F: Field>(tk: &Toolkit<'_, F>, strings: &[StringWord]) -> Result<Verdict> {
    check_summands(tk, strings, false)?;
    let q = tk.alg.quiver();
    let data = string_data(tk, strings)?;
    let mut witness = None;
    let mut total = 0;
    for a in &data {
        let syz = tk.syzygy(&a.module)?;
        for b in &data {
            let d = tk.ext1_from(&syz, &b.module).dim;
            if d > 0 && witness.is_none() {
                witness = Some((a.word.display(q), b.word.display(q), d));
            }
            total += d;
        }
    }
    if let Some((from, to, dim)) = witness {
        return Ok(Verdict::ExtNonzero { from, to, dim, total });
    }
    let end = stable_endo_algebra(tk, strings)?;
    if end.kind == BasisKind::Generic {
        return Ok(Verdict::Inconclusive { reason: "generic basis, extraction not attempted".into() });
    }
    let extracted = match extract_presentation(&end) {
        Ok(p) => p,
        Err(e) => return Ok(Verdict::Inconclusive { reason: e.to_string() }),
    };
    let report = extracted.presentation.validate_gentle();
    let presentation = extracted.presentation.to_string();
    Ok(if report.pass {
        Verdict::GentleConfirmed { presentation, stable_dim: end.dim() }
    } else {
        Verdict::NotGentle { presentation, report }
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TwoSidedReport {
    pub two_sided: usize,
    pub checked: usize,
    pub skipped: usize,
    pub ext_dim: Option<usize>,
    pub violations: Vec<String>,
}

/// Every two-sided graph map `M(C₁) → M(C₂)` should factor through a
/// projective once `Ext¹(M(C₂), M(C₁)) = 0`.
pub fn two_sided_vanishing_check<F: Field>(tk: &Toolkit<'_, F>, c1: &StringWord, c2: &StringWord) -> Result<TwoSidedReport> {
    let a = tk.string_data(c1)?;
    let b = tk.string_module(c2)?;
    two_sided_vanishing_with(tk, &a, &b, c2, None)
}

/// [`two_sided_vanishing_check`] with precomputed data; `ext` may carry a
/// known value of `dim Ext¹(M(C₂), M(C₁))`.
pub fn two_sided_vanishing_with<F: Field>(
    tk: &Toolkit<'_, F>,
    a: &StringData<F>,
    b: &ExplicitModule<F>,
    c2: &StringWord,
    ext: Option<usize>,
) -> Result<TwoSidedReport> {
    let alg = tk.alg;
    let two_sided: Vec<GraphMap> = admissible_pairs(alg, &a.word, c2)
        .into_iter()
        .filter(|p| p.classify().two_sided)
        .map(|p| graph_map_unchecked(&a.word, c2, &p))
        .collect();
    let mut report = TwoSidedReport { two_sided: two_sided.len(), ..Default::default() };
    if two_sided.is_empty() {
        return Ok(report);
    }
    let ext = match ext {
        Some(d) => d,
        None => tk.ext1(b, &a.module)?.dim,
    };
    report.ext_dim = Some(ext);
    if ext > 0 {
        report.skipped = two_sided.len();
        return Ok(report);
    }
    let sub = tk.proj_trivial_with(a.module.dim(), &a.to_projectives, b);
    for g in two_sided {
        report.checked += 1;
        if !sub.contains(&g.matrix()) {
            report.violations.push(g.pair.display(alg));
        }
    }
    Ok(report)
}

impl<F: Field> StringData<F> {
    pub fn maps_to_projective(&self, vertex: usize) -> &[Mat<F>] {
        &self.to_projectives[vertex]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{a3, ex1, ex2, ex2_big, ex3, square};
    use crate::ext::ShortExactSequence;
    use crate::field::{Fp, Rational};
    use crate::modules::{band_module, direct_sum, simple_module, ProjectiveKind};
    use crate::presentation::Sign;
    use crate::strings::{enumerate_strings, string_from_literal};

    type Q = Rational;

    fn s(alg: &crate::Algebra, t: &str) -> StringWord {
        canonical(&string_from_literal(alg, t).unwrap())
    }

    #[test]
    fn proj_trivial_examples() {
        let alg = ex3();
        let tk = Toolkit::<Q>::new(&alg).unwrap();
        let simple = simple_module::<Q>(&alg, 0).unwrap();
        assert_eq!(tk.proj_trivial_subspace(&simple, &simple).dim(), 0);
        let p = tk.projective(0);
        assert_eq!(tk.proj_trivial_subspace(p, p).dim(), hom_linear(p, p).len());

        let alg = ex1();
        let tk = Toolkit::<Q>::new(&alg).unwrap();
        let m = tk.string_module(&s(&alg, "x- y x- y")).unwrap();
        let st = tk.stable_hom(&m, &m);
        assert_eq!((st.hom.len(), st.subspace.dim(), st.dim()), (7, 6, 1));
    }

    /// Oracle: a map factors through a projective iff it factors through the
    /// projective cover of the target.
    fn proj_trivial_via_cover(tk: &Toolkit<'_, Q>, m: &ExplicitModule<Q>, n: &ExplicitModule<Q>) -> usize {
        let pc = tk.projective_cover(n).unwrap();
        let mut ech = Echelon::new(m.dim() * n.dim());
        for g in hom_linear(m, &pc.cover) {
            ech.insert(g.mul(&pc.epi).flat());
        }
        ech.rank()
    }

    #[test]
    fn proj_trivial_matches_cover_factorization() {
        for alg in [ex1(), ex2(), a3(), square()] {
            let tk = Toolkit::<Q>::new(&alg).unwrap();
            let strings = enumerate_strings(&alg, 3);
            let mods: Vec<_> = strings.iter().map(|c| tk.string_module(c).unwrap()).collect();
            for m in &mods {
                for n in &mods {
                    assert_eq!(tk.proj_trivial_subspace(m, n).dim(), proj_trivial_via_cover(&tk, m, n));
                }
            }
        }
    }

    #[test]
    fn stable_hom_from_projectives_vanishes() {
        for alg in [ex1(), ex3(), square()] {
            let tk = Toolkit::<Q>::new(&alg).unwrap();
            for c in enumerate_strings(&alg, 3) {
                let n = tk.string_module(&c).unwrap();
                for v in 0..alg.vertex_count() {
                    assert_eq!(tk.stable_hom(tk.projective(v), &n).dim(), 0);
                }
            }
        }
    }

    #[test]
    fn proj_trivial_is_an_ideal() {
        let alg = square();
        let tk = Toolkit::<Q>::new(&alg).unwrap();
        let strings = enumerate_strings(&alg, 2);
        let mods: Vec<_> = strings.iter().map(|c| tk.string_module(c).unwrap()).collect();
        for m in &mods {
            for n in &mods {
                let sub = tk.proj_trivial_subspace(m, n);
                for x in &mods {
                    let after = tk.proj_trivial_subspace(m, x);
                    for h in hom_linear(n, x) {
                        assert!(sub.basis.iter().all(|f| after.contains(&f.mul(&h))));
                    }
                }
            }
        }
    }

    #[test]
    fn example_band_stable_ends() {
        let a = ex2();
        let tk = Toolkit::<Q>::new(&a).unwrap();
        let band = string_from_literal(&a, "x- x- y x- y y").unwrap();
        let m = band_module(&a, &band, &Q::one(), 1).unwrap();
        let st = tk.stable_hom(&m, &m);
        assert_eq!(st.hom.len() - proj_trivial_via_cover(&tk, &m, &m), st.dim());
        // one radical endomorphism survives besides the identity
        assert_eq!(st.dim(), 2);

        let b = ex2_big();
        let tkb = Toolkit::<Q>::new(&b).unwrap();
        let band_b = string_from_literal(&b, "x- x- y x- y y").unwrap();
        let mb = band_module(&b, &band_b, &Q::one(), 1).unwrap();
        let end_a = hom_linear(&m, &m).len();
        let end_b = hom_linear(&mb, &mb).len();
        assert_eq!(end_a, end_b);
        assert_eq!(tkb.stable_hom(&mb, &mb).dim(), end_b);
    }

    #[test]
    fn survivors_examples() {
        let alg = ex1();
        let tk = Toolkit::<Q>::new(&alg).unwrap();
        let sv = surviving_graph_basis(&tk, &[s(&alg, "x- y x- y")]).unwrap();
        assert_eq!(sv.len(), 1);
        assert!(sv[0].map.is_identity());

        let alg = ex3();
        let tk = Toolkit::<Q>::new(&alg).unwrap();
        let simple = StringWord::trivial(0, Sign::Plus);
        let sv = surviving_graph_basis(&tk, &[simple]).unwrap();
        assert_eq!(sv.len(), 1);
        assert!(sv[0].map.is_identity());
        assert!(matches!(
            surviving_graph_basis(&tk, &[s(&alg, "x")]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn duplicate_summands_are_rejected() {
        let alg = ex3();
        let tk = Toolkit::<Q>::new(&alg).unwrap();
        let simple = StringWord::trivial(0, Sign::Plus);
        assert!(stable_endo_algebra(&tk, &[simple.clone(), simple]).is_err());
    }

    #[test]
    fn example_one_end_algebras() {
        let alg = ex1();
        let tk = Toolkit::<Q>::new(&alg).unwrap();
        let c = [s(&alg, "x- y x- y")];
        let end = endo_algebra(&tk, &c).unwrap();
        assert_eq!(end.dim(), 7);
        assert!(end.is_associative() && end.has_unit_decomposition());
        for a in 1..7 {
            for b in 1..7 {
                assert!(end.product(a, b).is_empty());
            }
        }
        let ap = extract_presentation(&end).unwrap();
        let p = &ap.presentation;
        assert_eq!((p.quiver.vertices.len(), p.quiver.arrows.len(), p.relations.len()), (1, 6, 36));
        assert!(p.relations.iter().all(|r| matches!(r, Relation::Zero(z) if z.len() == 2)));

        let st = stable_endo_algebra(&tk, &c).unwrap();
        assert_eq!(st.dim(), 1);
        let ap = extract_presentation(&st).unwrap();
        assert_eq!((ap.presentation.quiver.vertices.len(), ap.presentation.quiver.arrows.len()), (1, 0));
        assert!(ap.presentation.relations.is_empty());
        assert!(matches!(check_main_theorem(&tk, &c).unwrap(), Verdict::GentleConfirmed { stable_dim: 1, .. }));
    }

    #[test]
    fn example_three_verdict() {
        let alg = ex3();
        let tk = Toolkit::<Q>::new(&alg).unwrap();
        let v = check_main_theorem(&tk, &[StringWord::trivial(0, Sign::Plus)]).unwrap();
        assert!(matches!(v, Verdict::ExtNonzero { dim: 1, .. }));
    }

    #[test]
    fn a3_examples() {
        let alg = a3();
        let tk = Toolkit::<Q>::new(&alg).unwrap();
        let (a, b) = (s(&alg, "a"), s(&alg, "b"));
        // M(b) = P2 is projective
        assert!(check_main_theorem(&tk, &[a.clone(), b]).is_err());
        let s2 = StringWord::trivial(1, Sign::Plus);
        let st = stable_endo_algebra(&tk, &[a.clone(), s2.clone()]).unwrap();
        assert!(st.is_associative() && st.has_unit_decomposition());
        let ma = tk.string_module(&a).unwrap();
        let m2 = tk.string_module(&s2).unwrap();
        let expected = 2 + tk.stable_hom(&ma, &m2).dim() + tk.stable_hom(&m2, &ma).dim();
        assert_eq!(st.dim(), expected);
        assert_eq!(st.kind, BasisKind::Multiplicative);
        let s2 = StringWord::trivial(1, Sign::Plus);
        let v = check_main_theorem(&tk, &[s2.clone(), a.clone()]).unwrap();
        let total: usize = [&s2, &a]
            .iter()
            .flat_map(|x| [&s2, &a].map(|y| (x, y)))
            .map(|(x, y)| tk.ext1(&tk.string_module(x).unwrap(), &tk.string_module(y).unwrap()).unwrap().dim)
            .sum();
        assert_eq!(matches!(v, Verdict::ExtNonzero { .. }), total > 0);
        let v = check_main_theorem(&tk, &[a]).unwrap();
        assert!(matches!(v, Verdict::GentleConfirmed { .. }));
    }

    #[test]
    fn k_times_k_extracts_to_two_vertices() {
        let alg = StructureConstantAlgebra::<Q> {
            summands: vec!["a".into(), "b".into()],
            elements: vec![
                BasisElement { from: 0, to: 0, kind: ElementKind::Identity, label: "id1".into() },
                BasisElement { from: 1, to: 1, kind: ElementKind::Identity, label: "id2".into() },
            ],
            kind: BasisKind::Multiplicative,
            table: vec![vec![vec![(0, Q::one())], vec![]], vec![vec![], vec![(1, Q::one())]]],
            idempotents: vec![0, 1],
        };
        let p = extract_presentation(&alg).unwrap().presentation;
        assert_eq!((p.quiver.vertices.len(), p.quiver.arrows.len()), (2, 0));
        let generic = StructureConstantAlgebra { kind: BasisKind::Generic, ..alg };
        assert!(matches!(extract_presentation(&generic), Err(Error::GenericBasis)));
    }

    #[test]
    fn extraction_recovers_path_algebras() {
        // End of P1 ⊕ P2 ⊕ P3 over A3 is the opposite of A3 (or A3 itself).
        let alg = a3();
        let tk = Toolkit::<Q>::new(&alg).unwrap();
        let strings: Vec<StringWord> = (0..3)
            .map(|v| match tk.projective_kind(v) {
                ProjectiveKind::String(w) => w.clone(),
                _ => unreachable!(),
            })
            .collect();
        let end = endo_algebra(&tk, &strings).unwrap();
        assert_eq!(end.dim(), alg.dim());
        let p = extract_presentation(&end).unwrap().presentation;
        assert_eq!((p.quiver.vertices.len(), p.quiver.arrows.len(), p.relations.len()), (3, 2, 0));
        assert!(p.validate_gentle().pass);
    }

    #[test]
    fn two_sided_vanishing_examples() {
        let alg = ex1();
        let tk = Toolkit::<Q>::new(&alg).unwrap();
        let c = s(&alg, "x- y x- y");
        let r = two_sided_vanishing_check(&tk, &c, &c).unwrap();
        assert!(r.two_sided > 0);
        assert_eq!(r.checked, r.two_sided);
        assert!(r.violations.is_empty());

        let alg = ex3();
        let tk = Toolkit::<Q>::new(&alg).unwrap();
        let simple = StringWord::trivial(0, Sign::Plus);
        let r = two_sided_vanishing_check(&tk, &simple, &simple).unwrap();
        assert_eq!(r, TwoSidedReport::default());
    }

    #[test]
    fn two_sided_vanishing_over_small_algebras() {
        for alg in [ex1(), ex2(), a3(), square()] {
            let tk = Toolkit::<Q>::new(&alg).unwrap();
            let strings = enumerate_strings(&alg, 3);
            for c1 in &strings {
                let a = tk.string_data(c1).unwrap();
                for c2 in &strings {
                    let b = tk.string_module(c2).unwrap();
                    let r = two_sided_vanishing_with(&tk, &a, &b, c2, None).unwrap();
                    assert!(r.violations.is_empty(), "{:?}", r.violations);
                }
            }
        }
    }

    #[test]
    fn survivors_are_independent_and_stably_multiplicative() {
        for alg in [ex1(), ex2(), a3()] {
            let tk = Toolkit::<Q>::new(&alg).unwrap();
            let strings: Vec<_> =
                enumerate_strings(&alg, 3).into_iter().filter(|c| !is_projective_string(&alg, c)).collect();
            let data: Vec<_> = strings.iter().map(|c| tk.string_data(c).unwrap()).collect();
            let bl = blocks(&tk, &data, true);
            for i in 0..data.len() {
                for j in 0..data.len() {
                    let b = &bl[i][j];
                    let mut ech = b.subspace.echelon.clone();
                    for &k in &b.survivors {
                        if b.maps[k].classify().weakly_one_sided {
                            assert!(ech.insert(b.maps[k].matrix::<Q>().flat()));
                        }
                    }
                    for k in 0..data.len() {
                        for &x in &b.survivors {
                            for &y in &bl[j][k].survivors {
                                let (f, g) = (&b.maps[x], &bl[j][k].maps[y]);
                                let (cf, cg) = (f.classify(), g.classify());
                                if !(cf.weakly_one_sided && cg.weakly_one_sided) {
                                    continue;
                                }
                                let same = (cf.a_l_sides.0 && cg.a_r_sides.0) || (cf.a_l_sides.1 && cg.a_r_sides.1);
                                if same {
                                    let p = f.matrix::<Q>().mul(&g.matrix());
                                    assert!(!bl[i][k].subspace.contains(&p));
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    /// Vertices passed through by a commutativity relation.
    fn interior_vertices(alg: &crate::Algebra) -> Vec<usize> {
        let q = alg.quiver();
        alg.presentation
            .commutativity_relations()
            .flat_map(|(_, p, r)| p[..p.len() - 1].iter().chain(&r[..r.len() - 1]).map(|&a| q.target(a)).collect::<Vec<_>>())
            .collect()
    }

    #[test]
    fn nonserial_factorizations_are_two_sided_combinations() {
        // up to graph maps whose overlap is a trivial string at a vertex
        // inside a commutativity relation, see the pinned case below
        let alg = square();
        let tk = Toolkit::<Q>::new(&alg).unwrap();
        let nonserial: Vec<usize> = (0..alg.vertex_count())
            .filter(|&v| matches!(tk.projective_kind(v), ProjectiveKind::NonserialProjInj { .. }))
            .collect();
        assert_eq!(nonserial, vec![0]);
        let interior = interior_vertices(&alg);
        let strings = enumerate_strings(&alg, 3);
        for c1 in &strings {
            let m = tk.string_module(c1).unwrap();
            for c2 in &strings {
                let n = tk.string_module(c2).unwrap();
                let mut span = Echelon::new(m.dim() * n.dim());
                for p in admissible_pairs(&alg, c1, c2) {
                    let corner = matches!(p.fac.e, StringWord::Trivial { vertex, .. } if interior.contains(&vertex));
                    if p.classify().two_sided || corner {
                        span.insert(graph_map_unchecked(c1, c2, &p).matrix::<Q>().flat());
                    }
                }
                for &v in &nonserial {
                    let p = tk.projective(v);
                    for g in hom_linear(&m, p) {
                        for h in hom_linear(p, &n) {
                            assert!(span.contains(g.mul(&h).flat()));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn radical_to_socle_factor_is_one_sided() {
        let alg = square();
        let tk = Toolkit::<Q>::new(&alg).unwrap();
        let ProjectiveKind::NonserialProjInj { rad, socfactor } = tk.projective_kind(0).clone() else {
            panic!("P1 is non-serial");
        };
        let maps = hom_basis_graph(&alg, &rad, &socfactor);
        // rad P → P → P/soc P is the sum of the two corner graph maps
        let through: Vec<Mat<Q>> = {
            let m = tk.string_module(&rad).unwrap();
            let n = tk.string_module(&socfactor).unwrap();
            let p = tk.projective(0);
            hom_linear(&m, p).iter().flat_map(|g| hom_linear(p, &n).into_iter().map(move |h| g.mul(&h))).collect()
        };
        let sum = maps.iter().filter(|g| g.rank() == 1).fold(Mat::zeros(3, 3), |acc, g| acc.add(&g.matrix()));
        assert!(maps.iter().all(|g| !g.classify().two_sided));
        assert!(through.iter().any(|f| *f == sum));
    }

    #[test]
    fn stable_multiplicativity_fails_at_commutativity_corners() {
        let alg = square();
        let tk = Toolkit::<Q>::new(&alg).unwrap();
        let (c1, c2, c3) = (s(&alg, "b d-"), StringWord::trivial(1, Sign::Plus), s(&alg, "a"));
        let f = hom_basis_graph(&alg, &c1, &c2).remove(0);
        let g = hom_basis_graph(&alg, &c2, &c3).remove(0);
        let (cf, cg) = (f.classify(), g.classify());
        assert!(cf.weakly_one_sided && cg.weakly_one_sided && cf.a_l_sides.0 && cg.a_r_sides.0);
        let (m1, m2, m3) = (tk.string_module(&c1).unwrap(), tk.string_module(&c2).unwrap(), tk.string_module(&c3).unwrap());
        assert!(!tk.proj_trivial_subspace(&m1, &m2).contains(&f.matrix()));
        assert!(!tk.proj_trivial_subspace(&m2, &m3).contains(&g.matrix()));
        assert!(tk.proj_trivial_subspace(&m1, &m3).contains(&f.matrix::<Q>().mul(&g.matrix())));
    }

    #[test]
    fn two_sided_map_survives_at_commutativity_corner() {
        let alg = crate::Algebra::parse(
            "vertex 1 2 3 4 5\narrow a: 5 -> 4\narrow b: 4 -> 1\narrow c: 5 -> 3\narrow d: 3 -> 1\n\
             arrow e: 4 -> 2\narrow f: 2 -> 4\nzero a e\nzero f b\nzero f e\ncomm a b = c d\n",
        )
        .unwrap();
        let tk = Toolkit::<Q>::new(&alg).unwrap();
        let (c1, c2) = (s(&alg, "e"), s(&alg, "a"));
        let (m1, m2) = (tk.string_module(&c1).unwrap(), tk.string_module(&c2).unwrap());
        assert_eq!(tk.ext1(&m2, &m1).unwrap().dim, 0);
        let r = two_sided_vanishing_check(&tk, &c1, &c2).unwrap();
        assert_eq!((r.two_sided, r.violations.len()), (1, 1));
        // M(a) ⊕ M(e) still has an extension, so the theorem is not at stake
        assert_eq!(tk.ext1(&m1, &m2).unwrap().dim, 1);
    }

    #[test]
    fn prime_field_agrees_with_rationals() {
        let alg = ex1();
        let c = [s(&alg, "x- y x- y")];
        let tq = Toolkit::<Q>::new(&alg).unwrap();
        let tp = Toolkit::<Fp<101>>::new(&alg).unwrap();
        assert_eq!(check_main_theorem(&tq, &c).unwrap(), check_main_theorem(&tp, &c).unwrap());
    }

    #[test]
    fn end_dimension_certificate_for_split_sequences_fails() {
        let alg = ex3();
        let tk = Toolkit::<Q>::new(&alg).unwrap();
        let simple = simple_module::<Q>(&alg, 0).unwrap();
        let (sum, _) = direct_sum(&alg, &[&simple, &simple]).unwrap();
        let split = ShortExactSequence {
            left: simple.clone(),
            middle: sum,
            right: simple,
            inj: Mat::from_i64(&[&[1, 0]]),
            surj: Mat::from_i64(&[&[0], &[1]]),
            strings: None,
        };
        assert!(!tk.nonsplit_certificate(&split).unwrap().certified());
    }
}
