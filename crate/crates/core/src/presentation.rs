//! Quivers with zero and commutativity relations.
//!
//! A [`Presentation`] is a quiver together with a relation set made of paths
//! (zero relations) and differences of two parallel paths (commutativity
//! relations). This module parses the line-oriented `.sba` format, checks the
//! special biserial and gentle axioms, computes the sign maps σ/ε, and
//! enumerates the path-class basis of the algebra.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Quiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn out_arrows(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.arrows.iter().enumerate().filter(move |(_, a)| a.source == v).map(|(i, _)| i)
    }

    pub fn in_arrows(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.arrows.iter().enumerate().filter(move |(_, a)| a.target == v).map(|(i, _)| i)
    }

    pub fn source(&self, arrow: usize) -> usize {
        self.arrows[arrow].source
    }

    pub fn target(&self, arrow: usize) -> usize {
        self.arrows[arrow].target
    }

    pub fn is_composable(&self, arrows: &[usize]) -> bool {
        arrows.windows(2).all(|w| self.target(w[0]) == self.source(w[1]))
    }

    pub fn path_name(&self, arrows: &[usize]) -> String {
        arrows.iter().map(|&a| self.arrows[a].name.as_str()).collect::<Vec<_>>().join(" ")
    }
}

/// A path: a trivial path `e_i` when `arrows` is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Path {
    pub source: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(vertex: usize) -> Self {
        Path { source: vertex, arrows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn target(&self, q: &Quiver) -> usize {
        self.arrows.last().map_or(self.source, |&a| q.target(a))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Relation {
    Zero(Vec<usize>),
    Commutativity(Vec<usize>, Vec<usize>),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Presentation {
    pub quiver: Quiver,
    pub relations: Vec<Relation>,
}

/// One failed axiom, with a human-readable witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub condition: String,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub pass: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        ValidationReport { pass: violations.is_empty(), violations }
    }

    /// The first violated condition, if any.
    pub fn violated_condition(&self) -> Option<&str> {
        self.violations.first().map(|v| v.condition.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_value(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl std::ops::Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// σ and ε on arrows, indexed by arrow.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignAssignment {
    pub sigma: Vec<Sign>,
    pub epsilon: Vec<Sign>,
}

/// A basis element of `kQ/(ρ)`: a path avoiding ρ⁺, or the merged class of
/// the two paths of a commutativity relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum PathClass {
    Path(Path),
    Merged { relation: usize, p: Path, q: Path },
}

impl PathClass {
    pub fn source(&self) -> usize {
        match self {
            PathClass::Path(p) => p.source,
            PathClass::Merged { p, .. } => p.source,
        }
    }

    pub fn representative(&self) -> &Path {
        match self {
            PathClass::Path(p) => p,
            PathClass::Merged { p, .. } => p,
        }
    }

    pub fn len(&self) -> usize {
        self.representative().len()
    }

    pub fn is_empty(&self) -> bool {
        self.representative().is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct PathClassBasis {
    pub classes: Vec<PathClass>,
    index: HashMap<Path, usize>,
}

impl PathClassBasis {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Class of a path, `None` if the path is zero in the algebra.
    pub fn class_of(&self, path: &Path) -> Option<usize> {
        self.index.get(path).copied()
    }

    /// Class of `class · arrow`, `None` if the product vanishes.
    pub fn right_mul(&self, class: usize, arrow: usize, q: &Quiver) -> Option<usize> {
        let rep = self.classes[class].representative();
        if rep.target(q) != q.source(arrow) {
            return None;
        }
        let mut arrows = rep.arrows.clone();
        arrows.push(arrow);
        self.class_of(&Path { source: rep.source, arrows })
    }

    /// Classes whose paths start at `vertex`, in basis order.
    pub fn starting_at(&self, vertex: usize) -> Vec<usize> {
        (0..self.classes.len()).filter(|&i| self.classes[i].source() == vertex).collect()
    }
}

impl Presentation {
    pub fn parse(text: &str) -> Result<Self> {
        parse_presentation(text)
    }

    pub fn zero_relations(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.relations.iter().filter_map(|r| match r {
            Relation::Zero(p) => Some(p),
            Relation::Commutativity(..) => None,
        })
    }

    pub fn commutativity_relations(&self) -> impl Iterator<Item = (usize, &Vec<usize>, &Vec<usize>)> {
        self.relations.iter().enumerate().filter_map(|(i, r)| match r {
            Relation::Commutativity(p, q) => Some((i, p, q)),
            Relation::Zero(_) => None,
        })
    }

    /// ρ⁺: zero-relation paths together with both paths of every commutativity relation.
    pub fn rho_plus(&self) -> BTreeSet<Vec<usize>> {
        let mut out = BTreeSet::new();
        for r in &self.relations {
            match r {
                Relation::Zero(p) => {
                    out.insert(p.clone());
                }
                Relation::Commutativity(p, q) => {
                    out.insert(p.clone());
                    out.insert(q.clone());
                }
            }
        }
        out
    }

    fn longest_relation(&self) -> usize {
        self.rho_plus().iter().map(Vec::len).max().unwrap_or(2).max(2)
    }

    fn is_zero_pair(&self, a: usize, b: usize) -> bool {
        self.zero_relations().any(|p| p.len() == 2 && p[0] == a && p[1] == b)
    }

    /// An infinite path avoiding ρ⁺, as the arrow sequence of a cycle that can
    /// be repeated forever; `None` if every long enough path meets ρ⁺.
    pub fn avoidable_cycle(&self) -> Option<Vec<usize>> {
        let rho = self.rho_plus();
        let window = self.longest_relation() - 1;
        let q = &self.quiver;
        let avoids = |path: &[usize]| {
            (0..path.len().saturating_sub(1)).all(|i| !rho.contains(&path[i..]))
        };

        // state: the last `window` arrows of an avoiding path
        let mut color: HashMap<Vec<usize>, u8> = HashMap::new();
        for start in 0..q.arrows.len() {
            let root = vec![start];
            if color.contains_key(&root) {
                continue;
            }
            // iterative DFS keeping the gray stack for cycle extraction
            let mut stack: Vec<(Vec<usize>, Vec<usize>, usize)> = Vec::new();
            let succ = |state: &Vec<usize>| -> Vec<usize> {
                let last = *state.last().unwrap();
                q.out_arrows(q.target(last))
                    .filter(|&g| {
                        let mut p = state.clone();
                        p.push(g);
                        avoids(&p)
                    })
                    .collect()
            };
            color.insert(root.clone(), 1);
            let s = succ(&root);
            stack.push((root, s, 0));
            while let Some((state, succs, next)) = stack.last_mut() {
                if *next == succs.len() {
                    color.insert(state.clone(), 2);
                    stack.pop();
                    continue;
                }
                let g = succs[*next];
                *next += 1;
                let mut p = state.clone();
                p.push(g);
                let child: Vec<usize> = p[p.len().saturating_sub(window)..].to_vec();
                match color.get(&child) {
                    Some(1) => {
                        let pos = stack.iter().position(|(s, _, _)| *s == child).unwrap();
                        let mut cycle: Vec<usize> =
                            stack[pos + 1..].iter().map(|(s, _, _)| *s.last().unwrap()).collect();
                        cycle.push(g);
                        return Some(cycle);
                    }
                    Some(_) => {}
                    None => {
                        color.insert(child.clone(), 1);
                        let s = succ(&child);
                        stack.push((child, s, 0));
                    }
                }
            }
        }
        None
    }

    fn commutativity_violations(&self) -> Vec<Violation> {
        let q = &self.quiver;
        let zeros: Vec<&Vec<usize>> = self.zero_relations().collect();
        let contains_zero = |path: &[usize]| {
            zeros.iter().any(|z| path.windows(z.len()).any(|w| w == z.as_slice()))
        };
        let rho = self.rho_plus();
        let mut out = Vec::new();
        for (_, p, r) in self.commutativity_relations() {
            let name = format!("{} = {}", q.path_name(p), q.path_name(r));
            for path in [p, r] {
                let inner = (0..path.len()).any(|i| {
                    (i + 2..=path.len()).any(|j| (j - i) < path.len() && rho.contains(&path[i..j]))
                });
                if contains_zero(path) || inner {
                    out.push(Violation {
                        condition: "commutativity".into(),
                        witness: format!("{name}: a side contains another relation"),
                    });
                }
            }
            for a in q.in_arrows(q.source(p[0])) {
                let ap: Vec<usize> = std::iter::once(a).chain(p.iter().copied()).collect();
                let ar: Vec<usize> = std::iter::once(a).chain(r.iter().copied()).collect();
                if !contains_zero(&ap) && !contains_zero(&ar) {
                    out.push(Violation {
                        condition: "commutativity".into(),
                        witness: format!("{name}: extension by {} on the left is nonzero", q.arrows[a].name),
                    });
                }
            }
            for a in q.out_arrows(q.target(*p.last().unwrap())) {
                let pa: Vec<usize> = p.iter().copied().chain(std::iter::once(a)).collect();
                let ra: Vec<usize> = r.iter().copied().chain(std::iter::once(a)).collect();
                if !contains_zero(&pa) && !contains_zero(&ra) {
                    out.push(Violation {
                        condition: "commutativity".into(),
                        witness: format!("{name}: extension by {} on the right is nonzero", q.arrows[a].name),
                    });
                }
            }
        }
        out
    }

    /// Special biserial axioms (1)–(3), plus the shape requirements on
    /// commutativity relations that the path-class basis relies on.
    pub fn validate_special_biserial(&self) -> ValidationReport {
        let q = &self.quiver;
        let mut v = Vec::new();
        for (i, name) in q.vertices.iter().enumerate() {
            let outs = q.out_arrows(i).count();
            let ins = q.in_arrows(i).count();
            if outs > 2 || ins > 2 {
                v.push(Violation {
                    condition: "1".into(),
                    witness: format!("vertex {name} has {outs} outgoing and {ins} incoming arrows"),
                });
            }
        }
        for (b, arrow) in q.arrows.iter().enumerate() {
            let before: Vec<usize> =
                q.in_arrows(arrow.source).filter(|&a| !self.is_zero_pair(a, b)).collect();
            if before.len() > 1 {
                v.push(Violation {
                    condition: "2".into(),
                    witness: format!(
                        "arrows {} all compose nonzero into {}",
                        q.path_name(&before),
                        arrow.name
                    ),
                });
            }
            let after: Vec<usize> =
                q.out_arrows(arrow.target).filter(|&c| !self.is_zero_pair(b, c)).collect();
            if after.len() > 1 {
                v.push(Violation {
                    condition: "2".into(),
                    witness: format!(
                        "{} composes nonzero with all of {}",
                        arrow.name,
                        q.path_name(&after)
                    ),
                });
            }
        }
        if let Some(cycle) = self.avoidable_cycle() {
            v.push(Violation {
                condition: "3".into(),
                witness: format!("infinite path repeating ({}) avoids every relation", q.path_name(&cycle)),
            });
        }
        v.extend(self.commutativity_violations());
        ValidationReport::from_violations(v)
    }

    /// Gentle axioms (4)–(5) on top of the special biserial ones.
    pub fn validate_gentle(&self) -> ValidationReport {
        let q = &self.quiver;
        let mut v = self.validate_special_biserial().violations;
        for r in &self.relations {
            match r {
                Relation::Zero(p) if p.len() != 2 => v.push(Violation {
                    condition: "4".into(),
                    witness: format!("relation {} has length {}", q.path_name(p), p.len()),
                }),
                Relation::Commutativity(p, r) => v.push(Violation {
                    condition: "4".into(),
                    witness: format!("commutativity relation {} = {}", q.path_name(p), q.path_name(r)),
                }),
                _ => {}
            }
        }
        for (b, arrow) in q.arrows.iter().enumerate() {
            let before: Vec<usize> = q.in_arrows(arrow.source).filter(|&a| self.is_zero_pair(a, b)).collect();
            if before.len() > 1 {
                v.push(Violation {
                    condition: "5".into(),
                    witness: format!(
                        "relations {} all end with {}",
                        before.iter().map(|&a| q.path_name(&[a, b])).collect::<Vec<_>>().join(", "),
                        arrow.name
                    ),
                });
            }
            let after: Vec<usize> = q.out_arrows(arrow.target).filter(|&c| self.is_zero_pair(b, c)).collect();
            if after.len() > 1 {
                v.push(Violation {
                    condition: "5".into(),
                    witness: format!(
                        "relations {} all start with {}",
                        after.iter().map(|&c| q.path_name(&[b, c])).collect::<Vec<_>>().join(", "),
                        arrow.name
                    ),
                });
            }
        }
        ValidationReport::from_violations(v)
    }

    /// Sign constraints as (variable, variable, equal?) triples. A variable is
    /// `2 * arrow` for σ and `2 * arrow + 1` for ε.
    fn sign_constraints(&self) -> Vec<(usize, usize, bool)> {
        let q = &self.quiver;
        let rho = self.rho_plus();
        let sigma = |a: usize| 2 * a;
        let eps = |a: usize| 2 * a + 1;
        let mut out = Vec::new();
        for v in 0..q.vertices.len() {
            let ins: Vec<usize> = q.in_arrows(v).collect();
            let outs: Vec<usize> = q.out_arrows(v).collect();
            for (i, &a1) in ins.iter().enumerate() {
                for &a2 in &ins[i + 1..] {
                    out.push((eps(a1), eps(a2), false));
                }
            }
            for (i, &b1) in outs.iter().enumerate() {
                for &b2 in &outs[i + 1..] {
                    out.push((sigma(b1), sigma(b2), false));
                }
            }
            for &a in &ins {
                for &b in &outs {
                    if !rho.contains(&vec![a, b]) {
                        out.push((eps(a), sigma(b), false));
                    }
                }
            }
            if let ([a], [b]) = (ins.as_slice(), outs.as_slice()) {
                if rho.contains(&vec![*a, *b]) {
                    out.push((eps(*a), sigma(*b), true));
                }
            }
        }
        out
    }

    /// Deterministic σ/ε: backtracking over arrows in declaration order,
    /// σ before ε, `+1` tried before `-1`.
    pub fn compute_signs(&self) -> Result<SignAssignment> {
        let n = 2 * self.quiver.arrows.len();
        let constraints = self.sign_constraints();
        let mut by_var: Vec<Vec<(usize, bool)>> = vec![Vec::new(); n];
        for &(x, y, eq) in &constraints {
            by_var[x.max(y)].push((x.min(y), eq));
        }
        let mut values: Vec<Sign> = Vec::with_capacity(n);
        let mut tried: Vec<u8> = Vec::with_capacity(n);
        loop {
            if values.len() == n {
                let (sigma, epsilon) = values.chunks(2).map(|c| (c[0], c[1])).unzip();
                return Ok(SignAssignment { sigma, epsilon });
            }
            let var = values.len();
            if tried.len() == var {
                tried.push(0);
            }
            let attempt = tried[var];
            if attempt >= 2 {
                tried.pop();
                if values.pop().is_none() {
                    return Err(Error::NoSignAssignment);
                }
                continue;
            }
            tried[var] += 1;
            let s = if attempt == 0 { Sign::Plus } else { Sign::Minus };
            let ok = by_var[var]
                .iter()
                .all(|&(other, eq)| (values[other] == s) == eq);
            if ok {
                values.push(s);
            }
        }
    }

    /// Violations of the sign conditions (1)–(4) by an assignment.
    pub fn sign_violations(&self, signs: &SignAssignment) -> Vec<(usize, usize, bool)> {
        let get = |v: usize| if v % 2 == 0 { signs.sigma[v / 2] } else { signs.epsilon[v / 2] };
        self.sign_constraints()
            .into_iter()
            .filter(|&(x, y, eq)| (get(x) == get(y)) != eq)
            .collect()
    }

    /// Path-class basis of `kQ/(ρ)`: trivial paths, paths avoiding ρ⁺, and one
    /// merged class per commutativity relation.
    pub fn algebra_basis(&self) -> Result<PathClassBasis> {
        let q = &self.quiver;
        let rho = self.rho_plus();
        let cap = q.arrows.len() * self.longest_relation() + self.longest_relation();
        let mut classes = Vec::new();
        let mut index = HashMap::new();
        for v in 0..q.vertices.len() {
            let mut frontier = vec![Path::trivial(v)];
            while let Some(path) = frontier.pop() {
                if path.len() > cap {
                    return Err(Error::PathCapExceeded(cap));
                }
                index.insert(path.clone(), classes.len());
                let end = path.target(q);
                classes.push(PathClass::Path(path.clone()));
                for a in q.out_arrows(end).collect::<Vec<_>>().into_iter().rev() {
                    let mut arrows = path.arrows.clone();
                    arrows.push(a);
                    let avoids = (0..arrows.len() - 1).all(|i| !rho.contains(&arrows[i..]));
                    if avoids {
                        frontier.push(Path { source: v, arrows });
                    }
                }
            }
        }
        for (i, p, r) in self.commutativity_relations() {
            let pp = Path { source: q.source(p[0]), arrows: p.clone() };
            let rr = Path { source: q.source(r[0]), arrows: r.clone() };
            index.insert(pp.clone(), classes.len());
            index.insert(rr.clone(), classes.len());
            classes.push(PathClass::Merged { relation: i, p: pp, q: rr });
        }
        // order: by source, then length, then arrows
        let mut order: Vec<usize> = (0..classes.len()).collect();
        order.sort_by(|&a, &b| {
            let (x, y) = (classes[a].representative(), classes[b].representative());
            (x.source, x.len(), &x.arrows).cmp(&(y.source, y.len(), &y.arrows))
        });
        let mut remap = vec![0; classes.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        let classes: Vec<PathClass> = order.iter().map(|&i| classes[i].clone()).collect();
        let index = index.into_iter().map(|(k, v)| (k, remap[v])).collect();
        Ok(PathClassBasis { classes, index })
    }

    /// The same presentation with vertices and arrows renamed and reordered.
    pub fn relabeled(&self, vertex_perm: &[usize], arrow_perm: &[usize]) -> Presentation {
        let q = &self.quiver;
        let mut vertices = vec![String::new(); q.vertices.len()];
        for (old, &new) in vertex_perm.iter().enumerate() {
            vertices[new] = format!("v{}", q.vertices[old]);
        }
        let mut arrows = vec![Arrow { name: String::new(), source: 0, target: 0 }; q.arrows.len()];
        for (old, &new) in arrow_perm.iter().enumerate() {
            let a = &q.arrows[old];
            arrows[new] = Arrow {
                name: format!("r{}", a.name),
                source: vertex_perm[a.source],
                target: vertex_perm[a.target],
            };
        }
        let map = |p: &Vec<usize>| p.iter().map(|&a| arrow_perm[a]).collect::<Vec<_>>();
        let relations = self
            .relations
            .iter()
            .map(|r| match r {
                Relation::Zero(p) => Relation::Zero(map(p)),
                Relation::Commutativity(p, s) => Relation::Commutativity(map(p), map(s)),
            })
            .collect();
        Presentation { quiver: Quiver { vertices, arrows }, relations }
    }
}

impl fmt::Display for Presentation {
    /// Canonical `.sba` serialization.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = &self.quiver;
        writeln!(f, "vertex {}", q.vertices.join(" "))?;
        for a in &q.arrows {
            writeln!(f, "arrow {}: {} -> {}", a.name, q.vertices[a.source], q.vertices[a.target])?;
        }
        for r in &self.relations {
            match r {
                Relation::Zero(p) => writeln!(f, "zero {}", q.path_name(p))?,
                Relation::Commutativity(p, s) => {
                    writeln!(f, "comm {} = {}", q.path_name(p), q.path_name(s))?
                }
            }
        }
        Ok(())
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

struct LineCursor<'a> {
    line_no: usize,
    text: &'a str,
    pos: usize,
}

impl<'a> LineCursor<'a> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Syntax { line: self.line_no, column: self.pos + 1, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.text.len()
    }

    fn ident(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.text[self.pos..].chars().next() {
            if !is_ident_char(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        if start == self.pos {
            return Err(self.err("expected an identifier"));
        }
        Ok(&self.text[start..self.pos])
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        self.skip_ws();
        if self.text[self.pos..].starts_with(token) {
            self.pos += token.len();
            Ok(())
        } else {
            Err(self.err(format!("expected `{token}`")))
        }
    }

    fn peek_is(&mut self, token: &str) -> bool {
        self.skip_ws();
        self.text[self.pos..].starts_with(token)
    }
}

fn resolve_path(q: &Quiver, names: &[&str]) -> Result<Vec<usize>> {
    let arrows = names
        .iter()
        .map(|n| q.arrow_index(n).ok_or_else(|| Error::UnknownArrow(n.to_string())))
        .collect::<Result<Vec<_>>>()?;
    if !q.is_composable(&arrows) {
        return Err(Error::NotComposable(names.join(" ")));
    }
    Ok(arrows)
}

/// Parses the `.sba` presentation format.
///
/// ```text
/// # k[x]/(x^2)
/// vertex 1
/// arrow x: 1 -> 1
/// zero x x
/// ```
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let mut q = Quiver::default();
    let mut relations = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let mut cur = LineCursor { line_no: i + 1, text: content, pos: 0 };
        if cur.at_end() {
            continue;
        }
        let keyword = cur.ident()?;
        match keyword {
            "vertex" => {
                while !cur.at_end() {
                    let name = cur.ident()?;
                    if q.vertex_index(name).is_some() {
                        return Err(cur.err(format!("duplicate vertex `{name}`")));
                    }
                    q.vertices.push(name.to_string());
                }
            }
            "arrow" => {
                let name = cur.ident()?;
                cur.expect(":")?;
                let src = cur.ident()?;
                cur.expect("->")?;
                let dst = cur.ident()?;
                if !cur.at_end() {
                    return Err(cur.err("trailing input after arrow"));
                }
                if q.arrow_index(name).is_some() {
                    return Err(cur.err(format!("duplicate arrow `{name}`")));
                }
                let source = q.vertex_index(src).ok_or_else(|| Error::UnknownVertex(src.to_string()))?;
                let target = q.vertex_index(dst).ok_or_else(|| Error::UnknownVertex(dst.to_string()))?;
                q.arrows.push(Arrow { name: name.to_string(), source, target });
            }
            "zero" => {
                let mut names = Vec::new();
                while !cur.at_end() {
                    names.push(cur.ident()?);
                }
                if names.len() < 2 {
                    return Err(Error::InvalidRelation(format!(
                        "line {}: zero relation needs a path of length at least 2",
                        i + 1
                    )));
                }
                relations.push(Relation::Zero(resolve_path(&q, &names)?));
            }
            "comm" => {
                let mut left = Vec::new();
                while !cur.peek_is("=") {
                    if cur.at_end() {
                        return Err(cur.err("expected `=` in commutativity relation"));
                    }
                    left.push(cur.ident()?);
                }
                cur.expect("=")?;
                let mut right = Vec::new();
                while !cur.at_end() {
                    right.push(cur.ident()?);
                }
                let p = resolve_path(&q, &left)?;
                let r = resolve_path(&q, &right)?;
                if p.len() < 2 || r.len() < 2 {
                    return Err(Error::InvalidRelation(format!(
                        "line {}: commutativity paths need length at least 2",
                        i + 1
                    )));
                }
                if p == r {
                    return Err(Error::InvalidRelation(format!("line {}: identical paths", i + 1)));
                }
                if q.source(p[0]) != q.source(r[0])
                    || q.target(*p.last().unwrap()) != q.target(*r.last().unwrap())
                {
                    return Err(Error::InvalidRelation(format!(
                        "line {}: commutativity paths are not parallel",
                        i + 1
                    )));
                }
                relations.push(Relation::Commutativity(p, r));
            }
            other => {
                cur.pos = 0;
                cur.skip_ws();
                return Err(cur.err(format!("unknown keyword `{other}`")));
            }
        }
    }
    Ok(Presentation { quiver: q, relations })
}

/// Membership test for ρ⁺ against arbitrary arrow sequences.
#[derive(Clone, Debug)]
pub struct RhoPlus {
    paths: HashSet<Vec<usize>>,
    longest: usize,
}

impl RhoPlus {
    pub fn new(p: &Presentation) -> Self {
        let paths: HashSet<Vec<usize>> = p.rho_plus().into_iter().collect();
        let longest = paths.iter().map(Vec::len).max().unwrap_or(0);
        RhoPlus { paths, longest }
    }

    pub fn contains(&self, path: &[usize]) -> bool {
        self.paths.contains(path)
    }

    pub fn longest(&self) -> usize {
        self.longest
    }
}
