//! Nerves of categories and 2-categories.
//!
//! Three constructions live here. `nerve1` is the classical nerve of a
//! finite category: q-simplices are composable arrow chains. For a
//! 2-category there are two: `street_nerve2` builds the simplicial set
//! whose n-simplices are lax triangle data (vertices, 1-cells on every
//! edge, comparison 2-cells on every triangle, one equation per
//! tetrahedron), and `multinerve2` builds the bisimplicial set whose
//! (p,q)-cells are q-chains in the category of length-p paths. Both are
//! cut off at a caller-chosen dimension, and everything downstream
//! tracks how far the cut keeps the answers exact.

use std::collections::{BTreeMap, HashMap};

use crate::cat2::{s_degeneracy, s_face, s_p, Fin2Cat, FinCat, SpCat};
use crate::error::{Budget, Error, Result};
use crate::homology::ChainComplexZ;
use crate::matrix::IntMat;
use num_bigint::BigInt;

/// A truncated simplicial set with explicit face and degeneracy tables.
#[derive(Clone, Debug)]
pub struct SimplicialSet {
    pub dmax: usize,
    /// labels[n][x] names simplex x of dimension n
    pub labels: Vec<Vec<String>>,
    /// faces[n][i][x] = d_i(x) for 1 ≤ n ≤ dmax, 0 ≤ i ≤ n
    faces: Vec<Vec<Vec<usize>>>,
    /// degens[n][i][x] = s_i(x) for 0 ≤ n < dmax, 0 ≤ i ≤ n
    degens: Vec<Vec<Vec<usize>>>,
}

impl SimplicialSet {
    pub fn new(
        labels: Vec<Vec<String>>,
        faces: Vec<Vec<Vec<usize>>>,
        degens: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        let dmax = labels.len().checked_sub(1).ok_or_else(|| {
            Error::Invalid("a simplicial set needs at least dimension 0".into())
        })?;
        if faces.len() != dmax + 1 || degens.len() != dmax {
            return Err(Error::Invalid("face/degeneracy table count mismatch".into()));
        }
        for n in 1..=dmax {
            if faces[n].len() != n + 1 {
                return Err(Error::Invalid(format!("dimension {n} needs {} face maps", n + 1)));
            }
            for (i, tab) in faces[n].iter().enumerate() {
                if tab.len() != labels[n].len() {
                    return Err(Error::Invalid(format!("face table d_{i} in dim {n} wrong size")));
                }
                if tab.iter().any(|&y| y >= labels[n - 1].len()) {
                    return Err(Error::Invalid(format!("face d_{i} in dim {n} out of range")));
                }
            }
        }
        for n in 0..dmax {
            if degens[n].len() != n + 1 {
                return Err(Error::Invalid(format!(
                    "dimension {n} needs {} degeneracy maps",
                    n + 1
                )));
            }
            for (i, tab) in degens[n].iter().enumerate() {
                if tab.len() != labels[n].len() {
                    return Err(Error::Invalid(format!(
                        "degeneracy table s_{i} in dim {n} wrong size"
                    )));
                }
                if tab.iter().any(|&y| y >= labels[n + 1].len()) {
                    return Err(Error::Invalid(format!("degeneracy s_{i} in dim {n} out of range")));
                }
            }
        }
        Ok(SimplicialSet { dmax, labels, faces, degens })
    }

    pub fn card(&self, n: usize) -> usize {
        self.labels.get(n).map_or(0, Vec::len)
    }

    pub fn face(&self, n: usize, i: usize, x: usize) -> usize {
        self.faces[n][i][x]
    }

    pub fn degen(&self, n: usize, i: usize, x: usize) -> usize {
        self.degens[n][i][x]
    }

    /// x = s_i(y) for some i and y. Uses the retraction test: x is an
    /// i-th degeneracy exactly when s_i(d_i(x)) = x.
    pub fn is_degenerate(&self, n: usize, x: usize) -> bool {
        if n == 0 {
            return false;
        }
        (0..n).any(|i| self.degens[n - 1][i][self.faces[n][i][x]] == x)
    }

    pub fn nondegenerate_counts(&self) -> Vec<usize> {
        (0..=self.dmax)
            .map(|n| (0..self.card(n)).filter(|&x| !self.is_degenerate(n, x)).count())
            .collect()
    }

    /// Checks every simplicial identity across all stored dimensions.
    pub fn validate(&self) -> Result<()> {
        for n in 2..=self.dmax {
            for x in 0..self.card(n) {
                for j in 1..=n {
                    for i in 0..j {
                        let lhs = self.face(n - 1, i, self.face(n, j, x));
                        let rhs = self.face(n - 1, j - 1, self.face(n, i, x));
                        if lhs != rhs {
                            return Err(Error::Invalid(format!(
                                "d_{i} d_{j} ≠ d_{} d_{i} on simplex {x} of dim {n}",
                                j - 1
                            )));
                        }
                    }
                }
            }
        }
        for n in 0..self.dmax.saturating_sub(1) {
            for x in 0..self.card(n) {
                for j in 0..=n {
                    for i in 0..=j {
                        let lhs = self.degen(n + 1, i, self.degen(n, j, x));
                        let rhs = self.degen(n + 1, j + 1, self.degen(n, i, x));
                        if lhs != rhs {
                            return Err(Error::Invalid(format!(
                                "s_{i} s_{j} ≠ s_{} s_{i} on simplex {x} of dim {n}",
                                j + 1
                            )));
                        }
                    }
                }
            }
        }
        for n in 0..self.dmax {
            for x in 0..self.card(n) {
                for j in 0..=n {
                    let sx = self.degen(n, j, x);
                    for i in 0..=n + 1 {
                        let got = self.face(n + 1, i, sx);
                        let want = if i < j {
                            if n == 0 {
                                // i < j ≤ n = 0 impossible
                                unreachable!()
                            } else {
                                self.degen(n - 1, j - 1, self.face(n, i, x))
                            }
                        } else if i == j || i == j + 1 {
                            x
                        } else if n == 0 {
                            unreachable!("i > j + 1 needs n ≥ 1")
                        } else {
                            self.degen(n - 1, j, self.face(n, i - 1, x))
                        };
                        if got != want {
                            return Err(Error::Invalid(format!(
                                "d_{i} s_{j} identity fails on simplex {x} of dim {n}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Nerve data of a finite category, kept in chain form so functors can
/// be pushed through it.
struct CatNerve {
    /// chains[q][x]: for q = 0 the singleton [object], for q ≥ 1 the
    /// composable arrow list, source first
    chains: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

impl CatNerve {
    fn build(c: &FinCat, qmax: usize, budget: &mut Budget) -> Result<CatNerve> {
        let mut chains: Vec<Vec<Vec<usize>>> = Vec::with_capacity(qmax + 1);
        chains.push((0..c.n_objects()).map(|o| vec![o]).collect());
        for q in 1..=qmax {
            let mut cur = Vec::new();
            for ch in &chains[q - 1] {
                budget.tick()?;
                let tail = if q == 1 { ch[0] } else { c.arrows[*ch.last().unwrap()].tgt };
                for a in 0..c.n_arrows() {
                    if c.arrows[a].src != tail {
                        continue;
                    }
                    let mut next = if q == 1 { Vec::new() } else { ch.clone() };
                    next.push(a);
                    cur.push(next);
                }
            }
            chains.push(cur);
        }
        let index = chains
            .iter()
            .map(|dim| {
                dim.iter()
                    .enumerate()
                    .map(|(i, ch)| (ch.clone(), i))
                    .collect::<HashMap<_, _>>()
            })
            .collect();
        Ok(CatNerve { chains, index })
    }

    fn face_chain(&self, c: &FinCat, q: usize, i: usize, ch: &[usize]) -> Vec<usize> {
        if q == 1 {
            let a = &c.arrows[ch[0]];
            return vec![if i == 0 { a.tgt } else { a.src }];
        }
        if i == 0 {
            ch[1..].to_vec()
        } else if i == q {
            ch[..q - 1].to_vec()
        } else {
            let mut out = ch[..i - 1].to_vec();
            out.push(
                c.try_compose(ch[i], ch[i - 1])
                    .expect("consecutive chain arrows compose"),
            );
            out.extend_from_slice(&ch[i + 1..]);
            out
        }
    }

    fn degen_chain(&self, c: &FinCat, q: usize, i: usize, ch: &[usize]) -> Vec<usize> {
        if q == 0 {
            return vec![c.identity[ch[0]]];
        }
        let vertex_obj = if i == 0 { c.arrows[ch[0]].src } else { c.arrows[ch[i - 1]].tgt };
        let mut out = ch.to_vec();
        out.insert(i, c.identity[vertex_obj]);
        out
    }

    fn label(&self, c: &FinCat, q: usize, ch: &[usize]) -> String {
        if q == 0 {
            c.obj_labels[ch[0]].clone()
        } else {
            ch.iter()
                .map(|&a| c.arrows[a].label.as_str())
                .collect::<Vec<_>>()
                .join(";")
        }
    }

    fn into_simplicial(self, c: &FinCat, qmax: usize) -> Result<SimplicialSet> {
        let mut labels = Vec::with_capacity(qmax + 1);
        let mut faces: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
        let mut degens = Vec::new();
        for q in 0..=qmax {
            labels.push(
                self.chains[q]
                    .iter()
                    .map(|ch| self.label(c, q, ch))
                    .collect(),
            );
            if q >= 1 {
                let mut per_i = Vec::with_capacity(q + 1);
                for i in 0..=q {
                    per_i.push(
                        self.chains[q]
                            .iter()
                            .map(|ch| self.index[q - 1][&self.face_chain(c, q, i, ch)])
                            .collect(),
                    );
                }
                faces.push(per_i);
            }
            if q < qmax {
                let mut per_i = Vec::with_capacity(q + 1);
                for i in 0..=q {
                    per_i.push(
                        self.chains[q]
                            .iter()
                            .map(|ch| self.index[q + 1][&self.degen_chain(c, q, i, ch)])
                            .collect(),
                    );
                }
                degens.push(per_i);
            }
        }
        SimplicialSet::new(labels, faces, degens)
    }
}

/// Classical nerve of a finite category, truncated at `dmax`.
pub fn nerve1(c: &FinCat, dmax: usize, budget: &mut Budget) -> Result<SimplicialSet> {
    CatNerve::build(c, dmax, budget)?.into_simplicial(c, dmax)
}

/// An n-simplex of the lax nerve of a 2-category: an object per vertex,
/// a 1-cell per edge, and a comparison 2-cell per triangle, going from
/// the long edge to the composite of the two short ones. Every
/// tetrahedron must paste equal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct StreetSimplex {
    pub v: Vec<usize>,
    /// f[(i,j)] for i < j: object index in Hom(v_i, v_j)
    pub f: BTreeMap<(usize, usize), usize>,
    /// a[(i,j,k)] for i < j < k: arrow index in Hom(v_i, v_k) from
    /// f[(i,k)] to f[(j,k)] ∘ f[(i,j)]
    pub a: BTreeMap<(usize, usize, usize), usize>,
}

impl StreetSimplex {
    pub fn dim(&self) -> usize {
        self.v.len() - 1
    }

    pub fn vertex(o: usize) -> StreetSimplex {
        StreetSimplex { v: vec![o], f: BTreeMap::new(), a: BTreeMap::new() }
    }

    pub fn face(&self, m: usize) -> StreetSimplex {
        let re = |x: usize| if x < m { x } else { x - 1 };
        StreetSimplex {
            v: self
                .v
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != m)
                .map(|(_, &o)| o)
                .collect(),
            f: self
                .f
                .iter()
                .filter(|(&(i, j), _)| i != m && j != m)
                .map(|(&(i, j), &e)| ((re(i), re(j)), e))
                .collect(),
            a: self
                .a
                .iter()
                .filter(|(&(i, j, k), _)| i != m && j != m && k != m)
                .map(|(&(i, j, k), &t)| ((re(i), re(j), re(k)), t))
                .collect(),
        }
    }

    /// s_m: duplicate vertex m, connecting the copies by the unit 1-cell
    /// and filling the new triangles with identity 2-cells.
    pub fn degeneracy(&self, c: &Fin2Cat, m: usize) -> StreetSimplex {
        let n1 = self.v.len() + 1;
        let sig = |x: usize| if x <= m { x } else { x - 1 };
        let v: Vec<usize> = (0..n1).map(|x| self.v[sig(x)]).collect();
        let mut f = BTreeMap::new();
        for i in 0..n1 {
            for j in i + 1..n1 {
                let (si, sj) = (sig(i), sig(j));
                let e = if si == sj { c.unit[self.v[si]] } else { self.f[&(si, sj)] };
                f.insert((i, j), e);
            }
        }
        let mut a = BTreeMap::new();
        for i in 0..n1 {
            for j in i + 1..n1 {
                for k in j + 1..n1 {
                    let (si, sj, sk) = (sig(i), sig(j), sig(k));
                    let t = if si == sj || sj == sk {
                        // the collapsed triangle compares a 1-cell with
                        // its unit whiskering; that is an identity
                        c.hom(self.v[si], self.v[sk]).identity[self.f[&(si, sk)]]
                    } else {
                        self.a[&(si, sj, sk)]
                    };
                    a.insert((i, j, k), t);
                }
            }
        }
        StreetSimplex { v, f, a }
    }
}

/// Checks one simplex against the 2-category: edge and triangle data in
/// range, triangle endpoints correct, tetrahedra pasting equal.
pub fn check_street_simplex(c: &Fin2Cat, s: &StreetSimplex) -> Result<()> {
    let n = s.dim();
    for i in 0..=n {
        for j in i + 1..=n {
            let e = *s
                .f
                .get(&(i, j))
                .ok_or_else(|| Error::Invalid(format!("missing edge ({i},{j})")))?;
            if e >= c.hom(s.v[i], s.v[j]).n_objects() {
                return Err(Error::Invalid(format!("edge ({i},{j}) out of range")));
            }
        }
    }
    for i in 0..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                let t = *s
                    .a
                    .get(&(i, j, k))
                    .ok_or_else(|| Error::Invalid(format!("missing triangle ({i},{j},{k})")))?;
                let hom = c.hom(s.v[i], s.v[k]);
                if t >= hom.n_arrows() {
                    return Err(Error::Invalid(format!("triangle ({i},{j},{k}) out of range")));
                }
                let want_src = s.f[&(i, k)];
                let want_tgt = c.hcomp_ob(s.v[i], s.v[j], s.v[k], s.f[&(j, k)], s.f[&(i, j)]);
                if hom.arrows[t].src != want_src || hom.arrows[t].tgt != want_tgt {
                    return Err(Error::Invalid(format!(
                        "triangle ({i},{j},{k}) does not compare the long edge with the composite"
                    )));
                }
            }
        }
    }
    for i in 0..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                for l in k + 1..=n {
                    if !tetrahedron_ok(c, s, i, j, k, l) {
                        return Err(Error::Invalid(format!(
                            "tetrahedron ({i},{j},{k},{l}) pastes unequal"
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

fn tetrahedron_ok(c: &Fin2Cat, s: &StreetSimplex, i: usize, j: usize, k: usize, l: usize) -> bool {
    let (vi, vj, vk, vl) = (s.v[i], s.v[j], s.v[k], s.v[l]);
    let hom_il = c.hom(vi, vl);
    // (α_{jkl} ⋆ f_{ij}) • α_{ijl}
    let lhs_whisker = c.whisker_r(vi, vj, vl, s.a[&(j, k, l)], s.f[&(i, j)]);
    let lhs = hom_il.try_compose(lhs_whisker, s.a[&(i, j, l)]);
    // (f_{kl} ⋆ α_{ijk}) • α_{ikl}
    let rhs_whisker = c.whisker_l(vi, vk, vl, s.f[&(k, l)], s.a[&(i, j, k)]);
    let rhs = hom_il.try_compose(rhs_whisker, s.a[&(i, k, l)]);
    lhs.is_some() && lhs == rhs
}

/// All lax-nerve simplices of dimension ≤ dmax, grouped by dimension.
/// Each n-simplex is found once, as an extension of its last face.
pub fn street_simplices(
    c: &Fin2Cat,
    dmax: usize,
    budget: &mut Budget,
) -> Result<Vec<Vec<StreetSimplex>>> {
    let mut by_dim: Vec<Vec<StreetSimplex>> = Vec::with_capacity(dmax + 1);
    by_dim.push((0..c.n_objects()).map(StreetSimplex::vertex).collect());
    for n in 1..=dmax {
        let mut cur = Vec::new();
        for s in &by_dim[n - 1] {
            for w in 0..c.n_objects() {
                extend_simplex(c, s, w, &mut cur, budget)?;
            }
        }
        by_dim.push(cur);
    }
    Ok(by_dim)
}

/// Extends an (n-1)-simplex by a new final vertex w: choose an edge
/// into w from every old vertex, then a triangle over every old edge,
/// checking each new tetrahedron as soon as its triangles exist.
fn extend_simplex(
    c: &Fin2Cat,
    s: &StreetSimplex,
    w: usize,
    out: &mut Vec<StreetSimplex>,
    budget: &mut Budget,
) -> Result<()> {
    let n = s.dim();
    let mut edges = vec![0usize; n + 1];

    // edge phase: edges[i] ∈ Ob Hom(v_i, w)
    fn edge_phase(
        c: &Fin2Cat,
        s: &StreetSimplex,
        w: usize,
        i: usize,
        edges: &mut Vec<usize>,
        out: &mut Vec<StreetSimplex>,
        budget: &mut Budget,
    ) -> Result<()> {
        let n = s.dim();
        if i > n {
            let mut tris: BTreeMap<(usize, usize), usize> = BTreeMap::new();
            return triangle_phase(c, s, w, 0, 1, edges, &mut tris, out, budget);
        }
        budget.tick()?;
        'cand: for e in 0..c.hom(s.v[i], w).n_objects() {
            edges[i] = e;
            // a triangle over (i', i) must exist for every earlier vertex
            for ip in 0..i {
                let tgt = c.hcomp_ob(s.v[ip], s.v[i], w, e, s.f[&(ip, i)]);
                let hom = c.hom(s.v[ip], w);
                let src = edges[ip];
                if !hom
                    .arrows
                    .iter()
                    .any(|arr| arr.src == src && arr.tgt == tgt)
                {
                    continue 'cand;
                }
            }
            edge_phase(c, s, w, i + 1, edges, out, budget)?;
        }
        Ok(())
    }

    // triangle phase over pairs (i, j), i < j ≤ n, in lex order
    #[allow(clippy::too_many_arguments)]
    fn triangle_phase(
        c: &Fin2Cat,
        s: &StreetSimplex,
        w: usize,
        i: usize,
        j: usize,
        edges: &[usize],
        tris: &mut BTreeMap<(usize, usize), usize>,
        out: &mut Vec<StreetSimplex>,
        budget: &mut Budget,
    ) -> Result<()> {
        let n = s.dim();
        let new = n + 1;
        let (i, j) = if j > n { (i + 1, i + 2) } else { (i, j) };
        if i >= n {
            // all triangles chosen: assemble
            out.push(assemble(s, w, edges, tris));
            return Ok(());
        }
        budget.tick()?;
        let hom = c.hom(s.v[i], w);
        let src = edges[i];
        let tgt = c.hcomp_ob(s.v[i], s.v[j], w, edges[j], s.f[&(i, j)]);
        for t in 0..hom.n_arrows() {
            if hom.arrows[t].src != src || hom.arrows[t].tgt != tgt {
                continue;
            }
            tris.insert((i, j), t);
            // tetrahedra (x, i, j, new) are complete once (i, j) is set
            let cand = assemble(s, w, edges, tris);
            if (0..i).all(|x| tetrahedron_ok(c, &cand, x, i, j, new)) {
                triangle_phase(c, s, w, i, j + 1, edges, tris, out, budget)?;
            }
            tris.remove(&(i, j));
        }
        Ok(())
    }

    fn assemble(
        s: &StreetSimplex,
        w: usize,
        edges: &[usize],
        tris: &BTreeMap<(usize, usize), usize>,
    ) -> StreetSimplex {
        let new = s.dim() + 1;
        let mut v = s.v.clone();
        v.push(w);
        let mut f = s.f.clone();
        for (idx, &e) in edges.iter().enumerate() {
            f.insert((idx, new), e);
        }
        let mut a = s.a.clone();
        for (&(x, y), &t) in tris.iter() {
            a.insert((x, y, new), t);
        }
        StreetSimplex { v, f, a }
    }

    edge_phase(c, s, w, 0, &mut edges, out, budget)
}

fn street_label(c: &Fin2Cat, s: &StreetSimplex) -> String {
    let verts = s.v.iter().map(|o| c.obj_labels[*o].clone()).collect::<Vec<_>>().join(",");
    if s.dim() == 0 {
        return format!("⟨{verts}⟩");
    }
    let edges = s
        .f
        .iter()
        .map(|(&(i, j), &e)| format!("{i}{j}:{}", c.hom(s.v[i], s.v[j]).obj_labels[e]))
        .collect::<Vec<_>>()
        .join(" ");
    if s.dim() == 1 {
        return format!("⟨{verts}|{edges}⟩");
    }
    let tris = s
        .a
        .iter()
        .map(|(&(i, j, k), &t)| format!("{i}{j}{k}:{}", c.hom(s.v[i], s.v[k]).arrows[t].label))
        .collect::<Vec<_>>()
        .join(" ");
    format!("⟨{verts}|{edges}|{tris}⟩")
}

/// The lax nerve, truncated at `dmax`.
pub fn street_nerve2(c: &Fin2Cat, dmax: usize, budget: &mut Budget) -> Result<SimplicialSet> {
    let by_dim = street_simplices(c, dmax, budget)?;
    let index: Vec<BTreeMap<&StreetSimplex, usize>> = by_dim
        .iter()
        .map(|dim| dim.iter().enumerate().map(|(i, s)| (s, i)).collect())
        .collect();
    let labels = by_dim
        .iter()
        .map(|dim| dim.iter().map(|s| street_label(c, s)).collect())
        .collect();
    let mut faces: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for n in 1..=dmax {
        let mut per_i = Vec::with_capacity(n + 1);
        for i in 0..=n {
            per_i.push(
                by_dim[n]
                    .iter()
                    .map(|s| index[n - 1][&s.face(i)])
                    .collect(),
            );
        }
        faces.push(per_i);
    }
    let mut degens = Vec::with_capacity(dmax);
    for n in 0..dmax {
        let mut per_i = Vec::with_capacity(n + 1);
        for i in 0..=n {
            per_i.push(
                by_dim[n]
                    .iter()
                    .map(|s| index[n + 1][&s.degeneracy(c, i)])
                    .collect(),
            );
        }
        degens.push(per_i);
    }
    SimplicialSet::new(labels, faces, degens)
}

/// A truncated bisimplicial set: horizontal direction p (path length),
/// vertical direction q (chains of 2-cells).
#[derive(Clone, Debug)]
pub struct BiSimplicialSet {
    pub pmax: usize,
    pub qmax: usize,
    pub labels: Vec<Vec<Vec<String>>>,
    h_faces: Vec<Vec<Vec<Vec<usize>>>>,
    h_degens: Vec<Vec<Vec<Vec<usize>>>>,
    v_faces: Vec<Vec<Vec<Vec<usize>>>>,
    v_degens: Vec<Vec<Vec<Vec<usize>>>>,
}

impl BiSimplicialSet {
    pub fn card(&self, p: usize, q: usize) -> usize {
        self.labels
            .get(p)
            .and_then(|row| row.get(q))
            .map_or(0, Vec::len)
    }

    pub fn h_face(&self, p: usize, q: usize, i: usize, x: usize) -> usize {
        self.h_faces[p][q][i][x]
    }

    pub fn h_degen(&self, p: usize, q: usize, i: usize, x: usize) -> usize {
        self.h_degens[p][q][i][x]
    }

    pub fn v_face(&self, p: usize, q: usize, j: usize, x: usize) -> usize {
        self.v_faces[p][q][j][x]
    }

    pub fn v_degen(&self, p: usize, q: usize, j: usize, x: usize) -> usize {
        self.v_degens[p][q][j][x]
    }

    pub fn is_h_degenerate(&self, p: usize, q: usize, x: usize) -> bool {
        if p == 0 {
            return false;
        }
        (0..p).any(|i| self.h_degens[p - 1][q][i][self.h_faces[p][q][i][x]] == x)
    }

    pub fn is_v_degenerate(&self, p: usize, q: usize, x: usize) -> bool {
        if q == 0 {
            return false;
        }
        (0..q).any(|j| self.v_degens[p][q - 1][j][self.v_faces[p][q][j][x]] == x)
    }

    /// Full bisimplicial identity check: both directions are simplicial
    /// and they commute (faces and degeneracies alike).
    pub fn validate(&self) -> Result<()> {
        for p in 0..=self.pmax {
            for q in 0..=self.qmax {
                for x in 0..self.card(p, q) {
                    // horizontal-horizontal
                    if p >= 2 {
                        for j in 1..=p {
                            for i in 0..j {
                                let lhs = self.h_face(p - 1, q, i, self.h_face(p, q, j, x));
                                let rhs = self.h_face(p - 1, q, j - 1, self.h_face(p, q, i, x));
                                if lhs != rhs {
                                    return Err(Error::Invalid(format!(
                                        "horizontal faces clash at ({p},{q}) i={i} j={j}"
                                    )));
                                }
                            }
                        }
                    }
                    // vertical-vertical
                    if q >= 2 {
                        for j in 1..=q {
                            for i in 0..j {
                                let lhs = self.v_face(p, q - 1, i, self.v_face(p, q, j, x));
                                let rhs = self.v_face(p, q - 1, j - 1, self.v_face(p, q, i, x));
                                if lhs != rhs {
                                    return Err(Error::Invalid(format!(
                                        "vertical faces clash at ({p},{q}) i={i} j={j}"
                                    )));
                                }
                            }
                        }
                    }
                    // horizontal-vertical commutation
                    if p >= 1 && q >= 1 {
                        for i in 0..=p {
                            for j in 0..=q {
                                let lhs = self.v_face(p - 1, q, j, self.h_face(p, q, i, x));
                                let rhs = self.h_face(p, q - 1, i, self.v_face(p, q, j, x));
                                if lhs != rhs {
                                    return Err(Error::Invalid(format!(
                                        "face directions do not commute at ({p},{q})"
                                    )));
                                }
                            }
                        }
                    }
                    if p < self.pmax && q < self.qmax {
                        for i in 0..=p {
                            for j in 0..=q {
                                let lhs = self.v_degen(p + 1, q, j, self.h_degen(p, q, i, x));
                                let rhs = self.h_degen(p, q + 1, i, self.v_degen(p, q, j, x));
                                if lhs != rhs {
                                    return Err(Error::Invalid(format!(
                                        "degeneracy directions do not commute at ({p},{q})"
                                    )));
                                }
                            }
                        }
                    }
                    if p >= 1 && q < self.qmax {
                        for i in 0..=p {
                            for j in 0..=q {
                                let lhs = self.h_face(p, q + 1, i, self.v_degen(p, q, j, x));
                                let rhs = self.v_degen(p - 1, q, j, self.h_face(p, q, i, x));
                                if lhs != rhs {
                                    return Err(Error::Invalid(format!(
                                        "horizontal face and vertical degeneracy clash at ({p},{q})"
                                    )));
                                }
                            }
                        }
                    }
                    if q >= 1 && p < self.pmax {
                        for i in 0..=p {
                            for j in 0..=q {
                                let lhs = self.v_face(p + 1, q, j, self.h_degen(p, q, i, x));
                                let rhs = self.h_degen(p, q - 1, i, self.v_face(p, q, j, x));
                                if lhs != rhs {
                                    return Err(Error::Invalid(format!(
                                        "vertical face and horizontal degeneracy clash at ({p},{q})"
                                    )));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// The bisimplicial nerve: (p,q)-cells are q-chains of 2-cell tuples
/// along length-p paths, horizontal structure from path composition,
/// vertical structure from the nerve of each path category.
pub fn multinerve2(
    c: &Fin2Cat,
    pmax: usize,
    qmax: usize,
    budget: &mut Budget,
) -> Result<BiSimplicialSet> {
    let sps: Vec<SpCat> = (0..=pmax).map(|p| s_p(c, p)).collect();
    let nerves: Vec<CatNerve> = sps
        .iter()
        .map(|sp| CatNerve::build(&sp.cat, qmax, budget))
        .collect::<Result<_>>()?;
    let labels: Vec<Vec<Vec<String>>> = (0..=pmax)
        .map(|p| {
            (0..=qmax)
                .map(|q| {
                    nerves[p].chains[q]
                        .iter()
                        .map(|ch| format!("p{p}:{}", nerves[p].label(&sps[p].cat, q, ch)))
                        .collect()
                })
                .collect()
        })
        .collect();

    let push_chain = |f: &crate::cat2::Functor, q: usize, ch: &[usize]| -> Vec<usize> {
        if q == 0 {
            vec![f.obj_map[ch[0]]]
        } else {
            ch.iter().map(|&a| f.arr_map[a]).collect()
        }
    };

    let mut h_faces = Vec::with_capacity(pmax + 1);
    let mut h_degens = Vec::with_capacity(pmax + 1);
    for p in 0..=pmax {
        let mut fp = Vec::new();
        if p >= 1 {
            for i in 0..=p {
                let func = s_face(c, &sps[p], &sps[p - 1], p, i);
                let mut per_q = Vec::with_capacity(qmax + 1);
                for q in 0..=qmax {
                    per_q.push(
                        nerves[p].chains[q]
                            .iter()
                            .map(|ch| nerves[p - 1].index[q][&push_chain(&func, q, ch)])
                            .collect::<Vec<usize>>(),
                    );
                }
                fp.push(per_q);
            }
        }
        // reshape [i][q] → [q][i]
        let fq: Vec<Vec<Vec<usize>>> = (0..=qmax)
            .map(|q| fp.iter().map(|per_q: &Vec<Vec<usize>>| per_q[q].clone()).collect())
            .collect();
        h_faces.push(fq);

        let mut dp = Vec::new();
        if p < pmax {
            for i in 0..=p {
                let func = s_degeneracy(c, &sps[p], &sps[p + 1], p, i);
                let mut per_q = Vec::with_capacity(qmax + 1);
                for q in 0..=qmax {
                    per_q.push(
                        nerves[p].chains[q]
                            .iter()
                            .map(|ch| nerves[p + 1].index[q][&push_chain(&func, q, ch)])
                            .collect::<Vec<usize>>(),
                    );
                }
                dp.push(per_q);
            }
        }
        let dq: Vec<Vec<Vec<usize>>> = (0..=qmax)
            .map(|q| dp.iter().map(|per_q: &Vec<Vec<usize>>| per_q[q].clone()).collect())
            .collect();
        h_degens.push(dq);
    }

    let mut v_faces = Vec::with_capacity(pmax + 1);
    let mut v_degens = Vec::with_capacity(pmax + 1);
    for p in 0..=pmax {
        let cat = &sps[p].cat;
        let mut fq = Vec::with_capacity(qmax + 1);
        let mut dq = Vec::with_capacity(qmax + 1);
        for q in 0..=qmax {
            let mut per_j = Vec::new();
            if q >= 1 {
                for j in 0..=q {
                    per_j.push(
                        nerves[p].chains[q]
                            .iter()
                            .map(|ch| {
                                nerves[p].index[q - 1][&nerves[p].face_chain(cat, q, j, ch)]
                            })
                            .collect::<Vec<usize>>(),
                    );
                }
            }
            fq.push(per_j);
            let mut per_j = Vec::new();
            if q < qmax {
                for j in 0..=q {
                    per_j.push(
                        nerves[p].chains[q]
                            .iter()
                            .map(|ch| {
                                nerves[p].index[q + 1][&nerves[p].degen_chain(cat, q, j, ch)]
                            })
                            .collect::<Vec<usize>>(),
                    );
                }
            }
            dq.push(per_j);
        }
        v_faces.push(fq);
        v_degens.push(dq);
    }

    Ok(BiSimplicialSet {
        pmax,
        qmax,
        labels,
        h_faces,
        h_degens,
        v_faces,
        v_degens,
    })
}

/// Diagonal simplicial set of a square-truncated bisimplicial set.
pub fn diagonal(x: &BiSimplicialSet) -> Result<SimplicialSet> {
    if x.pmax != x.qmax {
        return Err(Error::TruncationMismatch(format!(
            "diagonal needs a square truncation, got pmax {} ≠ qmax {}",
            x.pmax, x.qmax
        )));
    }
    let dmax = x.pmax;
    let labels: Vec<Vec<String>> = (0..=dmax).map(|n| x.labels[n][n].clone()).collect();
    let mut faces: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for n in 1..=dmax {
        let mut per_i = Vec::with_capacity(n + 1);
        for i in 0..=n {
            per_i.push(
                (0..x.card(n, n))
                    .map(|s| x.v_face(n - 1, n, i, x.h_face(n, n, i, s)))
                    .collect(),
            );
        }
        faces.push(per_i);
    }
    let mut degens = Vec::with_capacity(dmax);
    for n in 0..dmax {
        let mut per_i = Vec::with_capacity(n + 1);
        for i in 0..=n {
            per_i.push(
                (0..x.card(n, n))
                    .map(|s| x.v_degen(n + 1, n, i, x.h_degen(n, n, i, s)))
                    .collect(),
            );
        }
        degens.push(per_i);
    }
    SimplicialSet::new(labels, faces, degens)
}

/// Chain complex of the normalized simplicial chains in degrees
/// 0..=dmax+1. The input must be truncated no lower than dmax+1, so
/// homology read off this complex is exact through degree dmax.
pub fn normalized_chains(x: &SimplicialSet, dmax: usize) -> Result<ChainComplexZ> {
    if x.dmax < dmax + 1 {
        return Err(Error::InsufficientTruncation(format!(
            "need simplices through dimension {}, have {}",
            dmax + 1,
            x.dmax
        )));
    }
    let top = dmax + 1;
    let mut keep: Vec<Vec<usize>> = Vec::with_capacity(top + 1);
    let mut pos: Vec<Vec<Option<usize>>> = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let mut k = Vec::new();
        let mut p = vec![None; x.card(n)];
        for s in 0..x.card(n) {
            if !x.is_degenerate(n, s) {
                p[s] = Some(k.len());
                k.push(s);
            }
        }
        keep.push(k);
        pos.push(p);
    }
    let ranks: Vec<usize> = keep.iter().map(Vec::len).collect();
    let mut diffs = Vec::with_capacity(top);
    for n in 1..=top {
        let mut triplets: Vec<(usize, usize, BigInt)> = Vec::new();
        for (col, &s) in keep[n].iter().enumerate() {
            for i in 0..=n {
                let y = x.face(n, i, s);
                if let Some(row) = pos[n - 1][y] {
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    triplets.push((row, col, BigInt::from(sign)));
                }
            }
        }
        diffs.push(IntMat::from_triplets(ranks[n - 1], ranks[n], triplets));
    }
    ChainComplexZ::new(ranks, diffs)
}

/// Total complex of the doubly-normalized bisimplicial chains in total
/// degrees 0..=dmax+1; exact through degree dmax. Needs both truncation
/// directions to reach dmax+1.
pub fn total_complex(x: &BiSimplicialSet, dmax: usize) -> Result<ChainComplexZ> {
    if x.pmax < dmax + 1 || x.qmax < dmax + 1 {
        return Err(Error::InsufficientTruncation(format!(
            "need cells through bidegree ({0},{0}), have ({1},{2})",
            dmax + 1,
            x.pmax,
            x.qmax
        )));
    }
    let top = dmax + 1;
    // basis per total degree: (p, q, cell) with the cell neither
    // horizontally nor vertically degenerate
    let mut keep: Vec<Vec<(usize, usize, usize)>> = Vec::with_capacity(top + 1);
    let mut pos: Vec<HashMap<(usize, usize, usize), usize>> = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let mut k = Vec::new();
        let mut m = HashMap::new();
        for p in 0..=n {
            let q = n - p;
            for s in 0..x.card(p, q) {
                if !x.is_h_degenerate(p, q, s) && !x.is_v_degenerate(p, q, s) {
                    m.insert((p, q, s), k.len());
                    k.push((p, q, s));
                }
            }
        }
        keep.push(k);
        pos.push(m);
    }
    let ranks: Vec<usize> = keep.iter().map(Vec::len).collect();
    let mut diffs = Vec::with_capacity(top);
    for n in 1..=top {
        let mut triplets: Vec<(usize, usize, BigInt)> = Vec::new();
        for (col, &(p, q, s)) in keep[n].iter().enumerate() {
            if p >= 1 {
                for i in 0..=p {
                    let y = x.h_face(p, q, i, s);
                    if let Some(&row) = pos[n - 1].get(&(p - 1, q, y)) {
                        let sign = if i % 2 == 0 { 1 } else { -1 };
                        triplets.push((row, col, BigInt::from(sign)));
                    }
                }
            }
            if q >= 1 {
                for j in 0..=q {
                    let y = x.v_face(p, q, j, s);
                    if let Some(&row) = pos[n - 1].get(&(p, q - 1, y)) {
                        let mut sign = if j % 2 == 0 { 1 } else { -1 };
                        if p % 2 == 1 {
                            sign = -sign;
                        }
                        triplets.push((row, col, BigInt::from(sign)));
                    }
                }
            }
        }
        diffs.push(IntMat::from_triplets(ranks[n - 1], ranks[n], triplets));
    }
    ChainComplexZ::new(ranks, diffs)
}
