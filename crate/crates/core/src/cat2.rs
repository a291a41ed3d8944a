//! Finite categories and finite 2-categories with fully materialized
//! composition tables.
//!
//! A `FinCat` stores every arrow (identities included) and the complete
//! binary composition table. A `Fin2Cat` stores one `FinCat` per ordered
//! pair of objects (missing pair = empty hom) plus horizontal composition
//! tables per composable triple, on hom objects and on hom arrows.
//!
//! Realizations of the tree objects from `theta` land here: a width-n
//! tree becomes the 2-category with objects 0..n whose hom from i to j
//! is the product of the realized children strictly between them, with
//! horizontal composition by tuple concatenation. `wreath_glue` is the
//! same gluing for arbitrary hom categories.

pub mod enumerate;
pub mod json;

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::theta::ThetaObject;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub src: usize,
    pub tgt: usize,
    pub label: String,
}

/// Finite category: all arrows listed explicitly, composition total on
/// composable pairs.
#[derive(Clone, Debug)]
pub struct FinCat {
    pub obj_labels: Vec<String>,
    pub arrows: Vec<Arrow>,
    /// identity arrow per object
    pub identity: Vec<usize>,
    comp: HashMap<(usize, usize), usize>,
}

impl FinCat {
    pub fn new(
        obj_labels: Vec<String>,
        arrows: Vec<Arrow>,
        identity: Vec<usize>,
        comp: HashMap<(usize, usize), usize>,
    ) -> Result<Self> {
        if identity.len() != obj_labels.len() {
            return Err(Error::CategoryAxiom(format!(
                "{} objects but {} identities",
                obj_labels.len(),
                identity.len()
            )));
        }
        for (o, &i) in identity.iter().enumerate() {
            let a = arrows.get(i).ok_or_else(|| {
                Error::CategoryAxiom(format!("identity index {i} of object {o} out of range"))
            })?;
            if a.src != o || a.tgt != o {
                return Err(Error::CategoryAxiom(format!(
                    "identity of object {o} has endpoints {}→{}",
                    a.src, a.tgt
                )));
            }
        }
        for a in &arrows {
            if a.src >= obj_labels.len() || a.tgt >= obj_labels.len() {
                return Err(Error::CategoryAxiom(format!(
                    "arrow {} has endpoint out of range",
                    a.label
                )));
            }
        }
        Ok(FinCat { obj_labels, arrows, identity, comp })
    }

    pub fn n_objects(&self) -> usize {
        self.obj_labels.len()
    }

    pub fn n_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_identity(&self, a: usize) -> bool {
        self.identity[self.arrows[a].src] == a && self.arrows[a].src == self.arrows[a].tgt
    }

    pub fn try_compose(&self, g: usize, f: usize) -> Option<usize> {
        self.comp.get(&(g, f)).copied()
    }

    /// g ∘ f; requires tgt(f) = src(g).
    pub fn compose(&self, g: usize, f: usize) -> Result<usize> {
        self.comp.get(&(g, f)).copied().ok_or_else(|| {
            Error::CategoryAxiom(format!(
                "composite {}∘{} missing from table",
                self.arrows[g].label, self.arrows[f].label
            ))
        })
    }

    pub fn arrows_between(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.n_arrows())
            .filter(|&i| self.arrows[i].src == a && self.arrows[i].tgt == b)
            .collect()
    }

    /// Full axiom check: identity endpoints and neutrality, composition
    /// totality and endpoints, associativity over every composable triple.
    pub fn validate(&self) -> Result<()> {
        for (o, &i) in self.identity.iter().enumerate() {
            if self.arrows[i].src != o || self.arrows[i].tgt != o {
                return Err(Error::CategoryAxiom(format!("identity of {o} mislabeled")));
            }
        }
        for g in 0..self.n_arrows() {
            for f in 0..self.n_arrows() {
                let composable = self.arrows[f].tgt == self.arrows[g].src;
                match self.try_compose(g, f) {
                    None if composable => {
                        return Err(Error::CategoryAxiom(format!(
                            "missing composite {}∘{}",
                            self.arrows[g].label, self.arrows[f].label
                        )))
                    }
                    Some(_) if !composable => {
                        return Err(Error::CategoryAxiom(format!(
                            "composite of non-composable {}∘{}",
                            self.arrows[g].label, self.arrows[f].label
                        )))
                    }
                    Some(h) => {
                        if self.arrows[h].src != self.arrows[f].src
                            || self.arrows[h].tgt != self.arrows[g].tgt
                        {
                            return Err(Error::CategoryAxiom(format!(
                                "composite {}∘{} has wrong endpoints",
                                self.arrows[g].label, self.arrows[f].label
                            )));
                        }
                    }
                    None => {}
                }
            }
        }
        for f in 0..self.n_arrows() {
            let idt = self.identity[self.arrows[f].tgt];
            let ids = self.identity[self.arrows[f].src];
            if self.try_compose(idt, f) != Some(f) || self.try_compose(f, ids) != Some(f) {
                return Err(Error::CategoryAxiom(format!(
                    "identity not neutral on {}",
                    self.arrows[f].label
                )));
            }
        }
        for h in 0..self.n_arrows() {
            for g in 0..self.n_arrows() {
                let Some(hg) = self.try_compose(h, g) else { continue };
                for f in 0..self.n_arrows() {
                    let Some(gf) = self.try_compose(g, f) else { continue };
                    if self.try_compose(h, gf) != self.try_compose(hg, f) {
                        return Err(Error::CategoryAxiom(format!(
                            "associativity fails on {}∘{}∘{}",
                            self.arrows[h].label, self.arrows[g].label, self.arrows[f].label
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn point() -> FinCat {
        FinCat {
            obj_labels: vec!["*".into()],
            arrows: vec![Arrow { src: 0, tgt: 0, label: "id:*".into() }],
            identity: vec![0],
            comp: HashMap::from([((0, 0), 0)]),
        }
    }

    pub fn discrete(n: usize) -> FinCat {
        let obj_labels = (0..n).map(|i| i.to_string()).collect();
        let arrows = (0..n)
            .map(|i| Arrow { src: i, tgt: i, label: format!("id:{i}") })
            .collect();
        let identity = (0..n).collect();
        let comp = (0..n).map(|i| ((i, i), i)).collect();
        FinCat { obj_labels, arrows, identity, comp }
    }

    /// Linear poset 0 < 1 < ... < n: one arrow i→j per i ≤ j.
    pub fn chain(n: usize) -> FinCat {
        let obj_labels = (0..=n).map(|i| i.to_string()).collect();
        let mut arrows = Vec::new();
        let mut index = HashMap::new();
        for i in 0..=n {
            for j in i..=n {
                index.insert((i, j), arrows.len());
                let label = if i == j { format!("id:{i}") } else { format!("{i}->{j}") };
                arrows.push(Arrow { src: i, tgt: j, label });
            }
        }
        let identity = (0..=n).map(|i| index[&(i, i)]).collect();
        let mut comp = HashMap::new();
        for i in 0..=n {
            for j in i..=n {
                for k in j..=n {
                    comp.insert((index[&(j, k)], index[&(i, j)]), index[&(i, k)]);
                }
            }
        }
        FinCat { obj_labels, arrows, identity, comp }
    }

    /// Two objects, two parallel non-identity arrows a, b: 0 → 1.
    pub fn parallel_pair() -> FinCat {
        let obj_labels = vec!["0".into(), "1".into()];
        let arrows = vec![
            Arrow { src: 0, tgt: 0, label: "id:0".into() },
            Arrow { src: 1, tgt: 1, label: "id:1".into() },
            Arrow { src: 0, tgt: 1, label: "a".into() },
            Arrow { src: 0, tgt: 1, label: "b".into() },
        ];
        let identity = vec![0, 1];
        let comp = HashMap::from([
            ((0, 0), 0),
            ((1, 1), 1),
            ((2, 0), 2),
            ((1, 2), 2),
            ((3, 0), 3),
            ((1, 3), 3),
        ]);
        FinCat { obj_labels, arrows, identity, comp }
    }

    /// Product category; the leftmost factor is the most significant in
    /// the object/arrow index. An empty factor list gives the point.
    pub fn product_of(factors: &[&FinCat]) -> FinCat {
        if factors.is_empty() {
            return FinCat::point();
        }
        let obj_sizes: Vec<usize> = factors.iter().map(|c| c.n_objects()).collect();
        let arr_sizes: Vec<usize> = factors.iter().map(|c| c.n_arrows()).collect();
        let n_obj: usize = obj_sizes.iter().product();
        let n_arr: usize = arr_sizes.iter().product();
        let decode = |mut idx: usize, sizes: &[usize]| -> Vec<usize> {
            let mut out = vec![0; sizes.len()];
            for k in (0..sizes.len()).rev() {
                out[k] = idx % sizes[k];
                idx /= sizes[k];
            }
            out
        };
        let encode = |parts: &[usize], sizes: &[usize]| -> usize {
            parts.iter().zip(sizes).fold(0, |acc, (p, s)| acc * s + p)
        };
        let obj_labels: Vec<String> = (0..n_obj)
            .map(|o| {
                let parts = decode(o, &obj_sizes);
                let labels: Vec<&str> = parts
                    .iter()
                    .zip(factors)
                    .map(|(&p, c)| c.obj_labels[p].as_str())
                    .collect();
                format!("({})", labels.join(","))
            })
            .collect();
        let mut arrows = Vec::with_capacity(n_arr);
        for a in 0..n_arr {
            let parts = decode(a, &arr_sizes);
            let src = encode(
                &parts
                    .iter()
                    .zip(factors)
                    .map(|(&p, c)| c.arrows[p].src)
                    .collect::<Vec<_>>(),
                &obj_sizes,
            );
            let tgt = encode(
                &parts
                    .iter()
                    .zip(factors)
                    .map(|(&p, c)| c.arrows[p].tgt)
                    .collect::<Vec<_>>(),
                &obj_sizes,
            );
            let labels: Vec<&str> = parts
                .iter()
                .zip(factors)
                .map(|(&p, c)| c.arrows[p].label.as_str())
                .collect();
            arrows.push(Arrow { src, tgt, label: format!("({})", labels.join(",")) });
        }
        let identity: Vec<usize> = (0..n_obj)
            .map(|o| {
                let parts = decode(o, &obj_sizes);
                encode(
                    &parts
                        .iter()
                        .zip(factors)
                        .map(|(&p, c)| c.identity[p])
                        .collect::<Vec<_>>(),
                    &arr_sizes,
                )
            })
            .collect();
        let mut comp = HashMap::new();
        for g in 0..n_arr {
            let gp = decode(g, &arr_sizes);
            for f in 0..n_arr {
                let fp = decode(f, &arr_sizes);
                let mut parts = Vec::with_capacity(factors.len());
                let mut ok = true;
                for k in 0..factors.len() {
                    match factors[k].try_compose(gp[k], fp[k]) {
                        Some(h) => parts.push(h),
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    comp.insert((g, f), encode(&parts, &arr_sizes));
                }
            }
        }
        FinCat { obj_labels, arrows, identity, comp }
    }

    /// Opposite category: same arrow indices, endpoints swapped.
    pub fn op(&self) -> FinCat {
        let arrows = self
            .arrows
            .iter()
            .map(|a| Arrow { src: a.tgt, tgt: a.src, label: a.label.clone() })
            .collect();
        let comp = self.comp.iter().map(|(&(g, f), &h)| ((f, g), h)).collect();
        FinCat {
            obj_labels: self.obj_labels.clone(),
            arrows,
            identity: self.identity.clone(),
            comp,
        }
    }

    /// Component index per object, connecting objects joined by any arrow.
    pub fn components(&self) -> Vec<usize> {
        let mut uf = UnionFind::new(self.n_objects());
        for a in &self.arrows {
            uf.union(a.src, a.tgt);
        }
        uf.labels()
    }

    pub fn is_connected(&self) -> bool {
        let comps = self.components();
        comps.iter().max().map_or(true, |&m| m == 0)
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    /// Dense component labels in first-seen order.
    pub(crate) fn labels(&mut self) -> Vec<usize> {
        let n = self.parent.len();
        let mut label = HashMap::new();
        let mut out = Vec::with_capacity(n);
        for x in 0..n {
            let r = self.find(x);
            let next = label.len();
            out.push(*label.entry(r).or_insert(next));
        }
        out
    }
}

/// Finite 2-category. `homs[a * n + b]` is Hom(a,b) when present; a
/// missing slot is the empty category. Horizontal composition tables are
/// stored per composable triple, indexed `g * |Hom(a,b)| + f` on objects
/// and `β * |Arr Hom(a,b)| + α` on arrows.
#[derive(Clone, Debug)]
pub struct Fin2Cat {
    pub obj_labels: Vec<String>,
    homs: Vec<Option<FinCat>>,
    /// unit 1-cell of each object, as an object index in Hom(a,a)
    pub unit: Vec<usize>,
    hcomp_obj: HashMap<(usize, usize, usize), Vec<usize>>,
    hcomp_arr: HashMap<(usize, usize, usize), Vec<usize>>,
}

static EMPTY_CAT: std::sync::OnceLock<FinCat> = std::sync::OnceLock::new();

fn empty_cat() -> &'static FinCat {
    EMPTY_CAT.get_or_init(|| FinCat {
        obj_labels: Vec::new(),
        arrows: Vec::new(),
        identity: Vec::new(),
        comp: HashMap::new(),
    })
}

impl Fin2Cat {
    pub fn n_objects(&self) -> usize {
        self.obj_labels.len()
    }

    pub fn hom(&self, a: usize, b: usize) -> &FinCat {
        self.homs[a * self.n_objects() + b]
            .as_ref()
            .unwrap_or_else(|| empty_cat())
    }

    pub fn hom_nonempty(&self, a: usize, b: usize) -> bool {
        self.hom(a, b).n_objects() > 0
    }

    /// Horizontal composite of 1-cells g ∈ Hom(b,c), f ∈ Hom(a,b).
    pub fn hcomp_ob(&self, a: usize, b: usize, c: usize, g: usize, f: usize) -> usize {
        let nf = self.hom(a, b).n_objects();
        self.hcomp_obj[&(a, b, c)][g * nf + f]
    }

    /// Horizontal composite of 2-cells β ∈ Arr Hom(b,c), α ∈ Arr Hom(a,b).
    pub fn hcomp_ar(&self, a: usize, b: usize, c: usize, beta: usize, alpha: usize) -> usize {
        let nf = self.hom(a, b).n_arrows();
        self.hcomp_arr[&(a, b, c)][beta * nf + alpha]
    }

    /// β ⋆ f: whisker a 2-cell on the right by a 1-cell.
    pub fn whisker_r(&self, a: usize, b: usize, c: usize, beta: usize, f: usize) -> usize {
        let id_f = self.hom(a, b).identity[f];
        self.hcomp_ar(a, b, c, beta, id_f)
    }

    /// g ⋆ α: whisker a 2-cell on the left by a 1-cell.
    pub fn whisker_l(&self, a: usize, b: usize, c: usize, g: usize, alpha: usize) -> usize {
        let id_g = self.hom(b, c).identity[g];
        self.hcomp_ar(a, b, c, id_g, alpha)
    }

    /// Total cell count: objects, 1-cells, and 2-cells, identities
    /// included.
    pub fn cells(&self) -> usize {
        let n = self.n_objects();
        let mut total = n;
        for a in 0..n {
            for b in 0..n {
                total += self.hom(a, b).n_objects() + self.hom(a, b).n_arrows();
            }
        }
        total
    }

    /// Component labels induced by nonempty homs (in either direction).
    pub fn pi0(&self) -> Vec<usize> {
        let n = self.n_objects();
        let mut uf = UnionFind::new(n);
        for a in 0..n {
            for b in 0..n {
                if self.hom_nonempty(a, b) {
                    uf.union(a, b);
                }
            }
        }
        uf.labels()
    }

    pub fn is_connected(&self) -> bool {
        self.pi0().iter().max().map_or(true, |&m| m == 0)
    }

    /// Full 2-category axiom check: hom categories, unit cells, table
    /// totality and endpoint compatibility, functoriality (interchange),
    /// horizontal associativity, and unit laws.
    pub fn validate2(&self) -> Result<()> {
        let n = self.n_objects();
        if self.unit.len() != n {
            return Err(Error::CategoryAxiom("unit vector length mismatch".into()));
        }
        for a in 0..n {
            for b in 0..n {
                self.hom(a, b).validate()?;
            }
        }
        for a in 0..n {
            if self.unit[a] >= self.hom(a, a).n_objects() {
                return Err(Error::CategoryAxiom(format!(
                    "unit cell of object {a} out of range"
                )));
            }
        }
        // Table presence and shape.
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let (hab, hbc, hac) = (self.hom(a, b), self.hom(b, c), self.hom(a, c));
                    let key = (a, b, c);
                    if hab.n_objects() == 0 || hbc.n_objects() == 0 {
                        if self.hcomp_obj.contains_key(&key) || self.hcomp_arr.contains_key(&key) {
                            return Err(Error::CategoryAxiom(format!(
                                "hcomp table for empty triple {key:?}"
                            )));
                        }
                        continue;
                    }
                    let obj_tab = self.hcomp_obj.get(&key).ok_or_else(|| {
                        Error::CategoryAxiom(format!("missing hcomp object table {key:?}"))
                    })?;
                    let arr_tab = self.hcomp_arr.get(&key).ok_or_else(|| {
                        Error::CategoryAxiom(format!("missing hcomp arrow table {key:?}"))
                    })?;
                    if obj_tab.len() != hab.n_objects() * hbc.n_objects() {
                        return Err(Error::CategoryAxiom(format!(
                            "hcomp object table {key:?} has wrong size"
                        )));
                    }
                    if arr_tab.len() != hab.n_arrows() * hbc.n_arrows() {
                        return Err(Error::CategoryAxiom(format!(
                            "hcomp arrow table {key:?} has wrong size"
                        )));
                    }
                    if obj_tab.iter().any(|&x| x >= hac.n_objects()) {
                        return Err(Error::CategoryAxiom(format!(
                            "hcomp object table {key:?} maps outside Hom({a},{c})"
                        )));
                    }
                    if arr_tab.iter().any(|&x| x >= hac.n_arrows()) {
                        return Err(Error::CategoryAxiom(format!(
                            "hcomp arrow table {key:?} maps outside Arr Hom({a},{c})"
                        )));
                    }
                    // Endpoint compatibility and functoriality.
                    for beta in 0..hbc.n_arrows() {
                        for alpha in 0..hab.n_arrows() {
                            let out = self.hcomp_ar(a, b, c, beta, alpha);
                            let want_src =
                                self.hcomp_ob(a, b, c, hbc.arrows[beta].src, hab.arrows[alpha].src);
                            let want_tgt =
                                self.hcomp_ob(a, b, c, hbc.arrows[beta].tgt, hab.arrows[alpha].tgt);
                            if hac.arrows[out].src != want_src || hac.arrows[out].tgt != want_tgt {
                                return Err(Error::CategoryAxiom(format!(
                                    "hcomp endpoints broken at {key:?}"
                                )));
                            }
                        }
                    }
                    for g in 0..hbc.n_objects() {
                        for f in 0..hab.n_objects() {
                            let out = self.hcomp_ob(a, b, c, g, f);
                            if self.hcomp_ar(a, b, c, hbc.identity[g], hab.identity[f])
                                != hac.identity[out]
                            {
                                return Err(Error::CategoryAxiom(format!(
                                    "hcomp does not preserve identity 2-cells at {key:?}"
                                )));
                            }
                        }
                    }
                    // Interchange: hcomp of vertical composites.
                    for b2 in 0..hbc.n_arrows() {
                        for b1 in 0..hbc.n_arrows() {
                            let Some(bb) = hbc.try_compose(b2, b1) else { continue };
                            for a2 in 0..hab.n_arrows() {
                                for a1 in 0..hab.n_arrows() {
                                    let Some(aa) = hab.try_compose(a2, a1) else { continue };
                                    let lhs = self.hcomp_ar(a, b, c, bb, aa);
                                    let rhs = hac.compose(
                                        self.hcomp_ar(a, b, c, b2, a2),
                                        self.hcomp_ar(a, b, c, b1, a1),
                                    )?;
                                    if lhs != rhs {
                                        return Err(Error::CategoryAxiom(format!(
                                            "interchange fails at {key:?}"
                                        )));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        // Horizontal associativity.
        for a in 0..n {
            for b in 0..n {
                if !self.hom_nonempty(a, b) {
                    continue;
                }
                for c in 0..n {
                    if !self.hom_nonempty(b, c) {
                        continue;
                    }
                    for d in 0..n {
                        if !self.hom_nonempty(c, d) {
                            continue;
                        }
                        for h in 0..self.hom(c, d).n_objects() {
                            for g in 0..self.hom(b, c).n_objects() {
                                for f in 0..self.hom(a, b).n_objects() {
                                    let gf = self.hcomp_ob(a, b, c, g, f);
                                    let hg = self.hcomp_ob(b, c, d, h, g);
                                    if self.hcomp_ob(a, c, d, h, gf)
                                        != self.hcomp_ob(a, b, d, hg, f)
                                    {
                                        return Err(Error::CategoryAxiom(format!(
                                            "horizontal associativity fails on objects at ({a},{b},{c},{d})"
                                        )));
                                    }
                                }
                            }
                        }
                        for h in 0..self.hom(c, d).n_arrows() {
                            for g in 0..self.hom(b, c).n_arrows() {
                                for f in 0..self.hom(a, b).n_arrows() {
                                    let gf = self.hcomp_ar(a, b, c, g, f);
                                    let hg = self.hcomp_ar(b, c, d, h, g);
                                    if self.hcomp_ar(a, c, d, h, gf)
                                        != self.hcomp_ar(a, b, d, hg, f)
                                    {
                                        return Err(Error::CategoryAxiom(format!(
                                            "horizontal associativity fails on arrows at ({a},{b},{c},{d})"
                                        )));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        // Unit 1-cells are horizontally neutral.
        for a in 0..n {
            for b in 0..n {
                if !self.hom_nonempty(a, b) {
                    continue;
                }
                let hab = self.hom(a, b);
                for f in 0..hab.n_objects() {
                    if self.hcomp_ob(a, a, b, f, self.unit[a]) != f {
                        return Err(Error::CategoryAxiom(format!(
                            "right unit law fails in Hom({a},{b})"
                        )));
                    }
                    if self.hcomp_ob(a, b, b, self.unit[b], f) != f {
                        return Err(Error::CategoryAxiom(format!(
                            "left unit law fails in Hom({a},{b})"
                        )));
                    }
                }
                let id_ua = self.hom(a, a).identity[self.unit[a]];
                let id_ub = self.hom(b, b).identity[self.unit[b]];
                for alpha in 0..hab.n_arrows() {
                    if self.hcomp_ar(a, a, b, alpha, id_ua) != alpha
                        || self.hcomp_ar(a, b, b, id_ub, alpha) != alpha
                    {
                        return Err(Error::CategoryAxiom(format!(
                            "unit law fails on 2-cells in Hom({a},{b})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Builder for hand-made and derived 2-categories: set the nonempty
/// homs, then supply horizontal composition as closures and the tables
/// get materialized.
pub struct Fin2CatBuilder {
    obj_labels: Vec<String>,
    homs: Vec<Option<FinCat>>,
    unit: Vec<usize>,
}

impl Fin2CatBuilder {
    /// Starts with Hom(a,a) = point for every object and every other hom
    /// empty.
    pub fn new(obj_labels: Vec<String>) -> Self {
        let n = obj_labels.len();
        let mut homs = vec![None; n * n];
        for a in 0..n {
            homs[a * n + a] = Some(FinCat::point());
        }
        Fin2CatBuilder { obj_labels, homs, unit: vec![0; n] }
    }

    pub fn set_hom(&mut self, a: usize, b: usize, hom: FinCat) -> &mut Self {
        let n = self.obj_labels.len();
        self.homs[a * n + b] = if hom.n_objects() == 0 { None } else { Some(hom) };
        self
    }

    pub fn set_unit(&mut self, a: usize, unit_obj: usize) -> &mut Self {
        self.unit[a] = unit_obj;
        self
    }

    /// Materializes hcomp tables from the two closures. The closures are
    /// consulted for every composable triple of nonempty homs.
    pub fn finish(
        self,
        mut ob: impl FnMut(usize, usize, usize, usize, usize) -> usize,
        mut ar: impl FnMut(usize, usize, usize, usize, usize) -> usize,
    ) -> Fin2Cat {
        let n = self.obj_labels.len();
        let mut hcomp_obj = HashMap::new();
        let mut hcomp_arr = HashMap::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let (hab, hbc) = (
                        self.homs[a * n + b].as_ref(),
                        self.homs[b * n + c].as_ref(),
                    );
                    let (Some(hab), Some(hbc)) = (hab, hbc) else { continue };
                    let mut obj_tab = Vec::with_capacity(hab.n_objects() * hbc.n_objects());
                    for g in 0..hbc.n_objects() {
                        for f in 0..hab.n_objects() {
                            obj_tab.push(ob(a, b, c, g, f));
                        }
                    }
                    let mut arr_tab = Vec::with_capacity(hab.n_arrows() * hbc.n_arrows());
                    for beta in 0..hbc.n_arrows() {
                        for alpha in 0..hab.n_arrows() {
                            arr_tab.push(ar(a, b, c, beta, alpha));
                        }
                    }
                    hcomp_obj.insert((a, b, c), obj_tab);
                    hcomp_arr.insert((a, b, c), arr_tab);
                }
            }
        }
        Fin2Cat {
            obj_labels: self.obj_labels,
            homs: self.homs,
            unit: self.unit,
            hcomp_obj,
            hcomp_arr,
        }
    }
}

/// Realizes a tree of depth ≤ 1 as the chain poset of its width.
pub fn realize1(s: &ThetaObject) -> Result<FinCat> {
    if s.depth() > 1 {
        return Err(Error::Dimension(format!(
            "{} has depth {}, but a 1-categorical realization needs depth ≤ 1",
            s,
            s.depth()
        )));
    }
    Ok(FinCat::chain(s.width()))
}

/// Glues hom categories along a chain of p+1 objects: Hom(i,j) is the
/// product of `hom_cats[i..j]` and horizontal composition concatenates
/// tuples. `hom_cats` must have length p.
pub fn wreath_glue(p: usize, hom_cats: &[FinCat]) -> Result<Fin2Cat> {
    if hom_cats.len() != p {
        return Err(Error::Invalid(format!(
            "wreath gluing over a chain of {p} steps needs {p} hom categories, got {}",
            hom_cats.len()
        )));
    }
    for (k, c) in hom_cats.iter().enumerate() {
        if c.n_objects() == 0 {
            return Err(Error::Invalid(format!("hom category {k} is empty")));
        }
    }
    let n = p + 1;
    let obj_labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let mut homs: Vec<Option<FinCat>> = vec![None; n * n];
    for i in 0..n {
        for j in i..n {
            let factors: Vec<&FinCat> = hom_cats[i..j].iter().collect();
            homs[i * n + j] = Some(FinCat::product_of(&factors));
        }
    }
    // Index arithmetic for concatenation: Hom(i,k) = Hom(i,j) × Hom(j,k)
    // with the left block most significant, in both objects and arrows.
    let obj_size = |i: usize, j: usize| -> usize {
        hom_cats[i..j].iter().map(|c| c.n_objects()).product()
    };
    let arr_size = |i: usize, j: usize| -> usize {
        hom_cats[i..j].iter().map(|c| c.n_arrows()).product()
    };
    let mut hcomp_obj = HashMap::new();
    let mut hcomp_arr = HashMap::new();
    for i in 0..n {
        for j in i..n {
            for k in j..n {
                let (nf_o, ng_o) = (obj_size(i, j), obj_size(j, k));
                let mut obj_tab = Vec::with_capacity(nf_o * ng_o);
                for g in 0..ng_o {
                    for f in 0..nf_o {
                        obj_tab.push(f * ng_o + g);
                    }
                }
                let (nf_a, ng_a) = (arr_size(i, j), arr_size(j, k));
                let mut arr_tab = Vec::with_capacity(nf_a * ng_a);
                for g in 0..ng_a {
                    for f in 0..nf_a {
                        arr_tab.push(f * ng_a + g);
                    }
                }
                hcomp_obj.insert((i, j, k), obj_tab);
                hcomp_arr.insert((i, j, k), arr_tab);
            }
        }
    }
    Ok(Fin2Cat {
        obj_labels,
        homs,
        unit: vec![0; n],
        hcomp_obj,
        hcomp_arr,
    })
}

/// Realizes a tree of depth ≤ 2 as a 2-category: objects 0..width, hom
/// from i to j the product of the realized children strictly between
/// them, horizontal composition by concatenation.
pub fn realize2(s: &ThetaObject) -> Result<Fin2Cat> {
    if s.depth() > 2 {
        return Err(Error::Dimension(format!(
            "{} has depth {}, but a 2-categorical realization needs depth ≤ 2",
            s,
            s.depth()
        )));
    }
    let hom_cats: Vec<FinCat> = s
        .children()
        .iter()
        .map(realize1)
        .collect::<Result<_>>()?;
    wreath_glue(s.width(), &hom_cats)
}

/// One-step suspension: two objects, Hom(0,1) = D, no arrows back.
pub fn sigma_prime(d: &FinCat) -> Fin2Cat {
    let mut b = Fin2CatBuilder::new(vec!["0".into(), "1".into()]);
    b.set_hom(0, 1, d.clone());
    b.finish(
        |a, bb, c, g, f| match (a, bb, c) {
            (0, 0, 0) | (1, 1, 1) => 0,
            (0, 0, 1) => g,
            (0, 1, 1) => f,
            _ => unreachable!("no composable triple {a},{bb},{c}"),
        },
        |a, bb, c, beta, alpha| match (a, bb, c) {
            (0, 0, 0) | (1, 1, 1) => 0,
            (0, 0, 1) => beta,
            (0, 1, 1) => alpha,
            _ => unreachable!("no composable triple {a},{bb},{c}"),
        },
    )
}

/// Views a category as a 2-category with discrete homs.
pub fn embed1as2(c: &FinCat) -> Fin2Cat {
    let n = c.n_objects();
    let mut b = Fin2CatBuilder::new(c.obj_labels.clone());
    // hom_members[a][b] = arrow indices of c from a to b, in index order;
    // the hom category is discrete on them.
    let mut hom_members: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); n]; n];
    for (i, a) in c.arrows.iter().enumerate() {
        hom_members[a.src][a.tgt].push(i);
    }
    let mut position: HashMap<usize, usize> = HashMap::new();
    for a in 0..n {
        for t in 0..n {
            for (pos, &arr) in hom_members[a][t].iter().enumerate() {
                position.insert(arr, pos);
            }
            if !hom_members[a][t].is_empty() {
                let labels = hom_members[a][t]
                    .iter()
                    .map(|&i| c.arrows[i].label.clone())
                    .collect::<Vec<_>>();
                let m = labels.len();
                let hom = FinCat {
                    obj_labels: labels.clone(),
                    arrows: labels
                        .iter()
                        .enumerate()
                        .map(|(i, l)| Arrow { src: i, tgt: i, label: format!("id:{l}") })
                        .collect(),
                    identity: (0..m).collect(),
                    comp: (0..m).map(|i| ((i, i), i)).collect(),
                };
                b.set_hom(a, t, hom);
            }
        }
    }
    for a in 0..n {
        b.set_unit(a, position[&c.identity[a]]);
    }
    let members = hom_members.clone();
    let cc = c.clone();
    let pos2 = position.clone();
    let ob = move |a: usize, bb: usize, cobj: usize, g: usize, f: usize| -> usize {
        let gf = cc
            .try_compose(members[bb][cobj][g], members[a][bb][f])
            .expect("underlying composition is total");
        pos2[&gf]
    };
    let ob2 = ob.clone();
    b.finish(ob, move |a, bb, cobj, beta, alpha| ob2(a, bb, cobj, beta, alpha))
}

/// Forgets the 2-cells: objects and 1-cells with horizontal composition.
pub fn underlying1(c: &Fin2Cat) -> FinCat {
    let n = c.n_objects();
    let mut arrows = Vec::new();
    let mut offset: HashMap<(usize, usize), usize> = HashMap::new();
    for a in 0..n {
        for b in 0..n {
            offset.insert((a, b), arrows.len());
            for f in 0..c.hom(a, b).n_objects() {
                arrows.push(Arrow {
                    src: a,
                    tgt: b,
                    label: c.hom(a, b).obj_labels[f].clone(),
                });
            }
        }
    }
    let identity: Vec<usize> = (0..n).map(|a| offset[&(a, a)] + c.unit[a]).collect();
    let mut comp = HashMap::new();
    for a in 0..n {
        for b in 0..n {
            if !c.hom_nonempty(a, b) {
                continue;
            }
            for d in 0..n {
                if !c.hom_nonempty(b, d) {
                    continue;
                }
                for g in 0..c.hom(b, d).n_objects() {
                    for f in 0..c.hom(a, b).n_objects() {
                        let h = c.hcomp_ob(a, b, d, g, f);
                        comp.insert(
                            (offset[&(b, d)] + g, offset[&(a, b)] + f),
                            offset[&(a, d)] + h,
                        );
                    }
                }
            }
        }
    }
    FinCat {
        obj_labels: c.obj_labels.clone(),
        arrows,
        identity,
        comp,
    }
}

/// The free 2-cell triangle: objects 0,1,2; one generating 1-cell per
/// step, the long edge, and a single 2-cell from the long edge to the
/// composite.
pub fn oriental2() -> Fin2Cat {
    let mut b = Fin2CatBuilder::new(vec!["0".into(), "1".into(), "2".into()]);
    let single = |label: &str| FinCat {
        obj_labels: vec![label.into()],
        arrows: vec![Arrow { src: 0, tgt: 0, label: format!("id:{label}") }],
        identity: vec![0],
        comp: HashMap::from([((0, 0), 0)]),
    };
    b.set_hom(0, 1, single("01"));
    b.set_hom(1, 2, single("12"));
    // Hom(0,2): direct edge 02, composite 12∘01, and γ: 02 → 12∘01.
    let hom02 = FinCat {
        obj_labels: vec!["02".into(), "12∘01".into()],
        arrows: vec![
            Arrow { src: 0, tgt: 0, label: "id:02".into() },
            Arrow { src: 1, tgt: 1, label: "id:12∘01".into() },
            Arrow { src: 0, tgt: 1, label: "γ".into() },
        ],
        identity: vec![0, 1],
        comp: HashMap::from([((0, 0), 0), ((1, 1), 1), ((2, 0), 2), ((1, 2), 2)]),
    };
    b.set_hom(0, 2, hom02);
    b.finish(
        |a, bb, c, g, f| match (a, bb, c) {
            (0, 0, 0) | (1, 1, 1) | (2, 2, 2) => 0,
            (0, 0, 1) => g,
            (0, 1, 1) => f,
            (1, 1, 2) => g,
            (1, 2, 2) => f,
            (0, 0, 2) => g,
            (0, 2, 2) => f,
            (0, 1, 2) => 1, // 12 ∘ 01 is the composite object of Hom(0,2)
            _ => unreachable!(),
        },
        |a, bb, c, beta, alpha| match (a, bb, c) {
            (0, 0, 0) | (1, 1, 1) | (2, 2, 2) => 0,
            (0, 0, 1) => beta,
            (0, 1, 1) => alpha,
            (1, 1, 2) => beta,
            (1, 2, 2) => alpha,
            (0, 0, 2) => beta,
            (0, 2, 2) => alpha,
            (0, 1, 2) => 1, // only identity 2-cells to pair; id:12∘01
            _ => unreachable!(),
        },
    )
}

/// The 2-category with one generating 2-cell between parallel generating
/// 1-cells: hom from 0 to 1 is the walking arrow category.
pub fn two_disc() -> Fin2Cat {
    let mut b = Fin2CatBuilder::new(vec!["0".into(), "1".into()]);
    b.set_hom(0, 1, FinCat::chain(1));
    b.finish(
        |a, bb, c, g, f| match (a, bb, c) {
            (0, 0, 0) | (1, 1, 1) => 0,
            (0, 0, 1) => g,
            (0, 1, 1) => f,
            _ => unreachable!(),
        },
        |a, bb, c, beta, alpha| match (a, bb, c) {
            (0, 0, 0) | (1, 1, 1) => 0,
            (0, 0, 1) => beta,
            (0, 1, 1) => alpha,
            _ => unreachable!(),
        },
    )
}

/// Point 2-category.
pub fn point2() -> Fin2Cat {
    Fin2CatBuilder::new(vec!["*".into()]).finish(|_, _, _, _, _| 0, |_, _, _, _, _| 0)
}

/// Intelligent 1-truncation: same objects, arrows are zigzag classes of
/// hom objects, composition induced on least representatives. Errors if
/// the induced composition is not constant on classes (cannot happen for
/// a lawful 2-category, but inputs from files are checked, not trusted).
pub fn tau1(c: &Fin2Cat) -> Result<FinCat> {
    let n = c.n_objects();
    // Zigzag classes per hom.
    let mut class_of: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    let mut class_count: HashMap<(usize, usize), usize> = HashMap::new();
    for a in 0..n {
        for b in 0..n {
            let hom = c.hom(a, b);
            if hom.n_objects() == 0 {
                continue;
            }
            let comps = hom.components();
            let count = comps.iter().max().map_or(0, |m| m + 1);
            class_of.insert((a, b), comps);
            class_count.insert((a, b), count);
        }
    }
    // Least representative per class.
    let mut rep: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (&(a, b), comps) in &class_of {
        let mut reps = vec![usize::MAX; class_count[&(a, b)]];
        for (obj, &cls) in comps.iter().enumerate() {
            if reps[cls] == usize::MAX {
                reps[cls] = obj;
            }
        }
        rep.insert((a, b), reps);
    }
    // Well-definedness: horizontally composing with each side of a hom
    // arrow must not change the class of the composite.
    for a in 0..n {
        for b in 0..n {
            if !c.hom_nonempty(a, b) {
                continue;
            }
            for d in 0..n {
                if !c.hom_nonempty(b, d) {
                    continue;
                }
                let (hab, hbd) = (c.hom(a, b), c.hom(b, d));
                let cls_ad = &class_of[&(a, d)];
                for alpha in &hab.arrows {
                    for g in 0..hbd.n_objects() {
                        let x = c.hcomp_ob(a, b, d, g, alpha.src);
                        let y = c.hcomp_ob(a, b, d, g, alpha.tgt);
                        if cls_ad[x] != cls_ad[y] {
                            return Err(Error::IllDefinedTruncation(format!(
                                "composing with {} changes the class in Hom({a},{d})",
                                alpha.label
                            )));
                        }
                    }
                }
                for beta in &hbd.arrows {
                    for f in 0..hab.n_objects() {
                        let x = c.hcomp_ob(a, b, d, beta.src, f);
                        let y = c.hcomp_ob(a, b, d, beta.tgt, f);
                        if cls_ad[x] != cls_ad[y] {
                            return Err(Error::IllDefinedTruncation(format!(
                                "composing with {} changes the class in Hom({a},{d})",
                                beta.label
                            )));
                        }
                    }
                }
            }
        }
    }
    // Build the quotient category.
    let mut arrows = Vec::new();
    let mut offset: HashMap<(usize, usize), usize> = HashMap::new();
    for a in 0..n {
        for b in 0..n {
            let Some(&count) = class_count.get(&(a, b)) else { continue };
            offset.insert((a, b), arrows.len());
            for cls in 0..count {
                let r = rep[&(a, b)][cls];
                arrows.push(Arrow {
                    src: a,
                    tgt: b,
                    label: format!("[{}]", c.hom(a, b).obj_labels[r]),
                });
            }
        }
    }
    let identity: Vec<usize> = (0..n)
        .map(|a| offset[&(a, a)] + class_of[&(a, a)][c.unit[a]])
        .collect();
    let mut comp = HashMap::new();
    for a in 0..n {
        for b in 0..n {
            if !c.hom_nonempty(a, b) {
                continue;
            }
            for d in 0..n {
                if !c.hom_nonempty(b, d) {
                    continue;
                }
                let cls_ad = &class_of[&(a, d)];
                for gc in 0..class_count[&(b, d)] {
                    for fc in 0..class_count[&(a, b)] {
                        let g = rep[&(b, d)][gc];
                        let f = rep[&(a, b)][fc];
                        let h = cls_ad[c.hcomp_ob(a, b, d, g, f)];
                        comp.insert(
                            (offset[&(b, d)] + gc, offset[&(a, b)] + fc),
                            offset[&(a, d)] + h,
                        );
                    }
                }
            }
        }
    }
    Ok(FinCat {
        obj_labels: c.obj_labels.clone(),
        arrows,
        identity,
        comp,
    })
}

/// Level-selective duality on a 2-category. Level 1 reverses 1-cells
/// (Hom(a,b) becomes Hom(b,a), horizontal composition swaps arguments),
/// level 2 reverses 2-cells (each hom category is replaced by its
/// opposite). An involution for a fixed level set.
pub fn dualize(c: &Fin2Cat, levels: &[usize]) -> Fin2Cat {
    let n = c.n_objects();
    let rev1 = levels.contains(&1);
    let rev2 = levels.contains(&2);
    let src_pair = |a: usize, b: usize| if rev1 { (b, a) } else { (a, b) };
    let mut homs: Vec<Option<FinCat>> = vec![None; n * n];
    for a in 0..n {
        for b in 0..n {
            let (sa, sb) = src_pair(a, b);
            let hom = c.hom(sa, sb);
            if hom.n_objects() == 0 {
                continue;
            }
            homs[a * n + b] = Some(if rev2 { hom.op() } else { hom.clone() });
        }
    }
    let mut hcomp_obj = HashMap::new();
    let mut hcomp_arr = HashMap::new();
    for a in 0..n {
        for b in 0..n {
            for cc in 0..n {
                let hab = &homs[a * n + b];
                let hbc = &homs[b * n + cc];
                let (Some(hab), Some(hbc)) = (hab.as_ref(), hbc.as_ref()) else { continue };
                let mut obj_tab = Vec::with_capacity(hab.n_objects() * hbc.n_objects());
                for g in 0..hbc.n_objects() {
                    for f in 0..hab.n_objects() {
                        // In the 1-cell-reversed world, Hom'(a,b) is the
                        // old Hom(b,a), so (g, f) composes as old (f, g)
                        // over the triple (cc, b, a).
                        let out = if rev1 {
                            c.hcomp_ob(cc, b, a, f, g)
                        } else {
                            c.hcomp_ob(a, b, cc, g, f)
                        };
                        obj_tab.push(out);
                    }
                }
                let mut arr_tab = Vec::with_capacity(hab.n_arrows() * hbc.n_arrows());
                for beta in 0..hbc.n_arrows() {
                    for alpha in 0..hab.n_arrows() {
                        let out = if rev1 {
                            c.hcomp_ar(cc, b, a, alpha, beta)
                        } else {
                            c.hcomp_ar(a, b, cc, beta, alpha)
                        };
                        arr_tab.push(out);
                    }
                }
                hcomp_obj.insert((a, b, cc), obj_tab);
                hcomp_arr.insert((a, b, cc), arr_tab);
            }
        }
    }
    Fin2Cat {
        obj_labels: c.obj_labels.clone(),
        homs,
        unit: c.unit.clone(),
        hcomp_obj,
        hcomp_arr,
    }
}

/// The category of length-p paths: one object per path of 1-cells
/// (c_0 → ... → c_p with a chosen hom object in every step), one arrow
/// per tuple of hom arrows. A disjoint union over object tuples of
/// products of homs.
pub struct SpCat {
    pub cat: FinCat,
    pub tuples: Vec<Vec<usize>>,
    /// per object of `cat`: (tuple index, factor hom objects)
    pub objs: Vec<(usize, Vec<usize>)>,
    /// per arrow of `cat`: (tuple index, factor hom arrows)
    pub arrs: Vec<(usize, Vec<usize>)>,
    obj_lookup: HashMap<(usize, Vec<usize>), usize>,
    arr_lookup: HashMap<(usize, Vec<usize>), usize>,
    tuple_lookup: HashMap<Vec<usize>, usize>,
}

impl SpCat {
    pub fn obj_index(&self, tuple: &[usize], factors: &[usize]) -> Option<usize> {
        let t = *self.tuple_lookup.get(tuple)?;
        self.obj_lookup.get(&(t, factors.to_vec())).copied()
    }

    pub fn arr_index(&self, tuple: &[usize], factors: &[usize]) -> Option<usize> {
        let t = *self.tuple_lookup.get(tuple)?;
        self.arr_lookup.get(&(t, factors.to_vec())).copied()
    }
}

/// Object tuples (c_0..c_p) with every consecutive hom nonempty, in
/// lexicographic order.
pub fn admissible_tuples(c: &Fin2Cat, p: usize) -> Vec<Vec<usize>> {
    let n = c.n_objects();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(p + 1);
    fn rec(c: &Fin2Cat, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p + 1 {
            out.push(cur.clone());
            return;
        }
        for next in 0..n {
            if let Some(&last) = cur.last() {
                if !c.hom_nonempty(last, next) {
                    continue;
                }
            }
            cur.push(next);
            rec(c, n, p, cur, out);
            cur.pop();
        }
    }
    rec(c, n, p, &mut cur, &mut out);
    out
}

pub fn s_p(c: &Fin2Cat, p: usize) -> SpCat {
    let tuples = admissible_tuples(c, p);
    let tuple_lookup: HashMap<Vec<usize>, usize> =
        tuples.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
    let mut objs = Vec::new();
    let mut arrs = Vec::new();
    let mut obj_lookup = HashMap::new();
    let mut arr_lookup = HashMap::new();
    let mut obj_labels = Vec::new();
    let mut arrows = Vec::new();
    let mut identity = Vec::new();
    let mut comp = HashMap::new();
    for (t, tuple) in tuples.iter().enumerate() {
        let homs: Vec<&FinCat> = (1..=p).map(|k| c.hom(tuple[k - 1], tuple[k])).collect();
        // objects: mixed radix over hom objects
        let obj_base = objs.len();
        let mut factor = vec![0usize; p];
        'objs: loop {
            let idx = objs.len();
            obj_lookup.insert((t, factor.clone()), idx);
            let label = format!(
                "[{}|{}]",
                tuple.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
                factor
                    .iter()
                    .enumerate()
                    .map(|(k, &f)| homs[k].obj_labels[f].clone())
                    .collect::<Vec<_>>()
                    .join(",")
            );
            obj_labels.push(label);
            objs.push((t, factor.clone()));
            for k in 0..p {
                factor[k] += 1;
                if factor[k] < homs[k].n_objects() {
                    continue 'objs;
                }
                factor[k] = 0;
            }
            break;
        }
        // arrows: mixed radix over hom arrows
        let arr_base = arrs.len();
        let mut afac = vec![0usize; p];
        'arrs: loop {
            let idx = arrs.len();
            arr_lookup.insert((t, afac.clone()), idx);
            let src_fac: Vec<usize> = (0..p).map(|k| homs[k].arrows[afac[k]].src).collect();
            let tgt_fac: Vec<usize> = (0..p).map(|k| homs[k].arrows[afac[k]].tgt).collect();
            let src = obj_lookup[&(t, src_fac)];
            let tgt = obj_lookup[&(t, tgt_fac)];
            let label = format!(
                "[{}|{}]",
                tuple.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
                afac.iter()
                    .enumerate()
                    .map(|(k, &f)| homs[k].arrows[f].label.clone())
                    .collect::<Vec<_>>()
                    .join(",")
            );
            arrows.push(Arrow { src, tgt, label });
            arrs.push((t, afac.clone()));
            for k in 0..p {
                afac[k] += 1;
                if afac[k] < homs[k].n_arrows() {
                    continue 'arrs;
                }
                afac[k] = 0;
            }
            break;
        }
        // identities and composition within this summand
        for o in obj_base..objs.len() {
            let (_, fac) = &objs[o];
            let id_fac: Vec<usize> = (0..p).map(|k| homs[k].identity[fac[k]]).collect();
            identity.push(arr_lookup[&(t, id_fac)]);
        }
        for g in arr_base..arrs.len() {
            for f in arr_base..arrs.len() {
                let mut parts = Vec::with_capacity(p);
                let mut ok = true;
                for k in 0..p {
                    match homs[k].try_compose(arrs[g].1[k], arrs[f].1[k]) {
                        Some(h) => parts.push(h),
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    comp.insert((g, f), arr_lookup[&(t, parts)]);
                }
            }
        }
    }
    SpCat {
        cat: FinCat { obj_labels, arrows, identity, comp },
        tuples,
        objs,
        arrs,
        obj_lookup,
        arr_lookup,
        tuple_lookup,
    }
}

/// Functor between finite categories as index maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functor {
    pub obj_map: Vec<usize>,
    pub arr_map: Vec<usize>,
}

impl Functor {
    pub fn identity_of(c: &FinCat) -> Functor {
        Functor {
            obj_map: (0..c.n_objects()).collect(),
            arr_map: (0..c.n_arrows()).collect(),
        }
    }

    /// g ∘ f.
    pub fn compose(g: &Functor, f: &Functor) -> Functor {
        Functor {
            obj_map: f.obj_map.iter().map(|&o| g.obj_map[o]).collect(),
            arr_map: f.arr_map.iter().map(|&a| g.arr_map[a]).collect(),
        }
    }
}

pub fn validate_functor(src: &FinCat, tgt: &FinCat, f: &Functor) -> Result<()> {
    if f.obj_map.len() != src.n_objects() || f.arr_map.len() != src.n_arrows() {
        return Err(Error::Invalid("functor map lengths mismatch".into()));
    }
    for a in 0..src.n_arrows() {
        let im = f.arr_map[a];
        if im >= tgt.n_arrows()
            || tgt.arrows[im].src != f.obj_map[src.arrows[a].src]
            || tgt.arrows[im].tgt != f.obj_map[src.arrows[a].tgt]
        {
            return Err(Error::Invalid(format!(
                "functor breaks endpoints on {}",
                src.arrows[a].label
            )));
        }
    }
    for (o, &i) in src.identity.iter().enumerate() {
        if f.arr_map[i] != tgt.identity[f.obj_map[o]] {
            return Err(Error::Invalid(format!("functor drops identity of object {o}")));
        }
    }
    for g in 0..src.n_arrows() {
        for h in 0..src.n_arrows() {
            let Some(gh) = src.try_compose(g, h) else { continue };
            let im = tgt
                .try_compose(f.arr_map[g], f.arr_map[h])
                .ok_or_else(|| Error::Invalid("image arrows not composable".into()))?;
            if im != f.arr_map[gh] {
                return Err(Error::Invalid(format!(
                    "functor breaks composition on {}∘{}",
                    src.arrows[g].label, src.arrows[h].label
                )));
            }
        }
    }
    Ok(())
}

/// The face functor S_p → S_{p−1} dropping or composing at position i:
/// inner faces horizontally compose slots i and i+1, the outer faces
/// drop the first or last slot.
pub fn s_face(c: &Fin2Cat, sp: &SpCat, target: &SpCat, p: usize, i: usize) -> Functor {
    assert!(p >= 1 && i <= p);
    let map_tuple = |tuple: &[usize]| -> Vec<usize> {
        let mut t = tuple.to_vec();
        t.remove(i);
        t
    };
    let map_obj_factors = |tuple: &[usize], fac: &[usize]| -> Vec<usize> {
        let mut out = Vec::with_capacity(p - 1);
        if i == 0 {
            out.extend_from_slice(&fac[1..]);
        } else if i == p {
            out.extend_from_slice(&fac[..p - 1]);
        } else {
            out.extend_from_slice(&fac[..i - 1]);
            out.push(c.hcomp_ob(tuple[i - 1], tuple[i], tuple[i + 1], fac[i], fac[i - 1]));
            out.extend_from_slice(&fac[i + 1..]);
        }
        out
    };
    let map_arr_factors = |tuple: &[usize], fac: &[usize]| -> Vec<usize> {
        let mut out = Vec::with_capacity(p - 1);
        if i == 0 {
            out.extend_from_slice(&fac[1..]);
        } else if i == p {
            out.extend_from_slice(&fac[..p - 1]);
        } else {
            out.extend_from_slice(&fac[..i - 1]);
            out.push(c.hcomp_ar(tuple[i - 1], tuple[i], tuple[i + 1], fac[i], fac[i - 1]));
            out.extend_from_slice(&fac[i + 1..]);
        }
        out
    };
    let obj_map = sp
        .objs
        .iter()
        .map(|(t, fac)| {
            let tuple = &sp.tuples[*t];
            target
                .obj_index(&map_tuple(tuple), &map_obj_factors(tuple, fac))
                .expect("face image object exists")
        })
        .collect();
    let arr_map = sp
        .arrs
        .iter()
        .map(|(t, fac)| {
            let tuple = &sp.tuples[*t];
            target
                .arr_index(&map_tuple(tuple), &map_arr_factors(tuple, fac))
                .expect("face image arrow exists")
        })
        .collect();
    Functor { obj_map, arr_map }
}

/// The degeneracy functor S_p → S_{p+1} inserting the unit 1-cell after
/// position i.
pub fn s_degeneracy(c: &Fin2Cat, sp: &SpCat, target: &SpCat, _p: usize, i: usize) -> Functor {
    let obj_map = sp
        .objs
        .iter()
        .map(|(t, fac)| {
            let tuple = &sp.tuples[*t];
            let mut tt = tuple.to_vec();
            tt.insert(i, tuple[i]);
            let mut ff = fac.to_vec();
            ff.insert(i, c.unit[tuple[i]]);
            target.obj_index(&tt, &ff).expect("degeneracy image object exists")
        })
        .collect();
    let arr_map = sp
        .arrs
        .iter()
        .map(|(t, fac)| {
            let tuple = &sp.tuples[*t];
            let mut tt = tuple.to_vec();
            tt.insert(i, tuple[i]);
            let mut ff = fac.to_vec();
            let unit_id = c.hom(tuple[i], tuple[i]).identity[c.unit[tuple[i]]];
            ff.insert(i, unit_id);
            target.arr_index(&tt, &ff).expect("degeneracy image arrow exists")
        })
        .collect();
    Functor { obj_map, arr_map }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::parse_object;

    fn obj(s: &str) -> ThetaObject {
        parse_object(s).unwrap()
    }

    #[test]
    fn chain_counts_and_laws() {
        let c = FinCat::chain(3);
        assert_eq!(c.n_objects(), 4);
        assert_eq!(c.n_arrows(), 10);
        c.validate().unwrap();
        assert!(c.is_connected());
    }

    #[test]
    fn realize1_accepts_depth_at_most_1() {
        let c = realize1(&obj("Δ3")).unwrap();
        assert_eq!((c.n_objects(), c.n_arrows()), (4, 10));
        assert!(matches!(realize1(&obj("(Δ1; Δ1)")), Err(Error::Dimension(_))));
        let p = realize1(&obj("Δ0")).unwrap();
        assert_eq!((p.n_objects(), p.n_arrows()), (1, 1));
    }

    #[test]
    fn product_and_op_are_lawful() {
        let a = FinCat::chain(2);
        let b = FinCat::parallel_pair();
        let p = FinCat::product_of(&[&a, &b]);
        p.validate().unwrap();
        assert_eq!(p.n_objects(), 6);
        assert_eq!(p.n_arrows(), 24);
        b.op().validate().unwrap();
        assert_eq!(b.op().op().arrows, b.arrows);
    }

    #[test]
    fn realize2_cell_counts() {
        let c = realize2(&obj("(Δ3; Δ3, Δ0, Δ2)")).unwrap();
        c.validate2().unwrap();
        assert_eq!(c.n_objects(), 4);
        let one_cells: usize = (0..4)
            .flat_map(|a| (0..4).map(move |b| (a, b)))
            .map(|(a, b)| c.hom(a, b).n_objects())
            .sum();
        let two_cells: usize = (0..4)
            .flat_map(|a| (0..4).map(move |b| (a, b)))
            .map(|(a, b)| c.hom(a, b).n_arrows())
            .sum();
        assert_eq!(one_cells, 31);
        assert_eq!(two_cells, 97);
        assert_eq!(c.cells(), 132);
    }

    #[test]
    fn realize2_matches_generator_count_boundaries() {
        // m_2(2,3) realizes with 153 cells.
        let c = realize2(&crate::theta::m_n(&[2, 3])).unwrap();
        assert_eq!(c.cells(), 153);
    }

    #[test]
    fn realize2_rejects_depth_3() {
        let deep = obj("(Δ1; (Δ1; (Δ1; Δ1)))");
        assert!(matches!(realize2(&deep), Err(Error::Dimension(_))));
    }

    #[test]
    fn wreath_glue_equals_realize2_and_validates() {
        let s = obj("(Δ2; Δ1, Δ2)");
        let via_tree = realize2(&s).unwrap();
        let via_glue = wreath_glue(2, &[FinCat::chain(1), FinCat::chain(2)]).unwrap();
        via_glue.validate2().unwrap();
        assert!(enumerate::iso2_isomorphic(&via_tree, &via_glue, &mut crate::error::Budget::new(1_000_000)).unwrap());
    }

    #[test]
    fn sigma_prime_of_walking_arrow_is_suspension_object() {
        let d = FinCat::chain(1);
        let s = sigma_prime(&d);
        s.validate2().unwrap();
        let t = realize2(&obj("(Δ1; Δ1)")).unwrap();
        assert!(enumerate::iso2_isomorphic(&s, &t, &mut crate::error::Budget::new(1_000_000)).unwrap());
    }

    #[test]
    fn oriental2_cell_counts() {
        let c = oriental2();
        c.validate2().unwrap();
        assert_eq!(c.n_objects(), 3);
        let one_cells: usize = (0..3)
            .flat_map(|a| (0..3).map(move |b| (a, b)))
            .map(|(a, b)| c.hom(a, b).n_objects())
            .sum();
        let two_cells: usize = (0..3)
            .flat_map(|a| (0..3).map(move |b| (a, b)))
            .map(|(a, b)| c.hom(a, b).n_arrows())
            .sum();
        assert_eq!(one_cells, 7);
        assert_eq!(two_cells, 8);
        // Hom(0,2) has two objects and one non-identity arrow.
        assert_eq!(c.hom(0, 2).n_objects(), 2);
        assert_eq!(
            c.hom(0, 2).n_arrows() - c.hom(0, 2).n_objects(),
            1
        );
    }

    #[test]
    fn two_disc_and_point_validate() {
        two_disc().validate2().unwrap();
        point2().validate2().unwrap();
        embed1as2(&FinCat::parallel_pair()).validate2().unwrap();
        sigma_prime(&FinCat::parallel_pair()).validate2().unwrap();
    }

    #[test]
    fn underlying_category_of_oriental2() {
        let u = underlying1(&oriental2());
        u.validate().unwrap();
        assert_eq!(u.n_objects(), 3);
        assert_eq!(u.n_arrows(), 7);
    }

    #[test]
    fn pi0_counts_components() {
        let c = realize2(&obj("(Δ1; Δ1)")).unwrap();
        assert!(c.is_connected());
        let two_points = embed1as2(&FinCat::discrete(2));
        assert_eq!(two_points.pi0(), vec![0, 1]);
    }

    #[test]
    fn tau1_of_oriental2_is_the_triangle_poset() {
        // Collapsing the 2-cell identifies the long edge with the
        // composite, leaving the chain poset on three objects.
        let t = tau1(&oriental2()).unwrap();
        t.validate().unwrap();
        assert_eq!(t.n_objects(), 3);
        assert_eq!(t.n_arrows(), 6);
        let c = FinCat::chain(2);
        assert!(enumerate::iso1_isomorphic(&t, &c, &mut crate::error::Budget::new(1_000_000)).unwrap());
    }

    #[test]
    fn tau1_of_realized_tree_is_chain() {
        for s in ["(Δ2; Δ1, Δ2)", "(Δ1; Δ3)", "(Δ3; Δ3, Δ0, Δ2)"] {
            let c = realize2(&obj(s)).unwrap();
            let t = tau1(&c).unwrap();
            t.validate().unwrap();
            let chain = FinCat::chain(obj(s).width());
            assert!(enumerate::iso1_isomorphic(&t, &chain, &mut crate::error::Budget::new(10_000_000)).unwrap());
        }
    }

    #[test]
    fn tau1_of_two_disc_is_walking_arrow() {
        let t = tau1(&two_disc()).unwrap();
        assert_eq!((t.n_objects(), t.n_arrows()), (2, 3));
        assert!(enumerate::iso1_isomorphic(&t, &FinCat::chain(1), &mut crate::error::Budget::new(10_000)).unwrap());
    }

    #[test]
    fn tau1_rejects_inconsistent_tables() {
        // Hand-built broken 2-category: Hom(0,1) is the walking arrow
        // u → v, Hom(1,2) a point {g}, Hom(0,2) discrete on {x, y}, and
        // the object table sends (g,u) to x but (g,v) to y. Composition
        // then separates the endpoints of a 2-cell into different
        // zigzag classes, which a lawful 2-category cannot do.
        let mut b = Fin2CatBuilder::new(vec!["0".into(), "1".into(), "2".into()]);
        b.set_hom(0, 1, FinCat::chain(1));
        b.set_hom(1, 2, FinCat::point());
        b.set_hom(0, 2, FinCat::discrete(2));
        let broken = b.finish(
            |a, bb, c, g, f| match (a, bb, c) {
                (0, 1, 2) => f,
                (0, 0, 1) | (0, 0, 2) | (1, 1, 2) => g,
                (0, 1, 1) | (0, 2, 2) | (1, 2, 2) => f,
                _ => 0,
            },
            |a, bb, c, beta, alpha| match (a, bb, c) {
                (0, 1, 2) => match alpha {
                    0 => 0,
                    2 => 1,
                    _ => 0, // the walking 2-cell has nowhere to go
                },
                (0, 0, 1) | (0, 0, 2) | (1, 1, 2) => beta,
                (0, 1, 1) | (0, 2, 2) | (1, 2, 2) => alpha,
                _ => 0,
            },
        );
        assert!(broken.validate2().is_err());
        assert!(matches!(tau1(&broken), Err(Error::IllDefinedTruncation(_))));
    }

    #[test]
    fn dualize_is_involutive_and_lawful() {
        let c = realize2(&obj("(Δ2; Δ1, Δ2)")).unwrap();
        for levels in [vec![], vec![1], vec![2], vec![1, 2]] {
            let d = dualize(&c, &levels);
            d.validate2().unwrap();
            let dd = dualize(&d, &levels);
            assert!(
                enumerate::iso2_isomorphic(&c, &dd, &mut crate::error::Budget::new(10_000_000)).unwrap(),
                "levels {levels:?}"
            );
        }
        let o = oriental2();
        for levels in [vec![1], vec![2], vec![1, 2]] {
            dualize(&o, &levels).validate2().unwrap();
        }
    }

    #[test]
    fn dualize_commutes_with_tree_dual() {
        for s in ["(Δ2; Δ1, Δ2)", "(Δ1; Δ2)", "(Δ3; Δ1, Δ0, Δ2)"] {
            let t = obj(s);
            for levels in [vec![1usize], vec![2], vec![1, 2]] {
                let lhs = dualize(&realize2(&t).unwrap(), &levels);
                let rhs = realize2(&crate::theta::theta_dual(&t, &levels)).unwrap();
                assert!(
                    enumerate::iso2_isomorphic(&lhs, &rhs, &mut crate::error::Budget::new(50_000_000)).unwrap(),
                    "object {s}, levels {levels:?}"
                );
            }
        }
    }

    #[test]
    fn s_p_object_counts_match_path_formula() {
        for (c, p) in [
            (oriental2(), 1usize),
            (oriental2(), 2),
            (realize2(&obj("(Δ1; Δ1)")).unwrap(), 1),
            (realize2(&obj("(Δ1; Δ1)")).unwrap(), 2),
            (realize2(&obj("(Δ2; Δ1, Δ0)")).unwrap(), 2),
        ] {
            let sp = s_p(&c, p);
            sp.cat.validate().unwrap();
            // Independent count: sum over admissible object tuples of the
            // product of hom object counts.
            let expect: usize = admissible_tuples(&c, p)
                .iter()
                .map(|t| {
                    (1..=p)
                        .map(|k| c.hom(t[k - 1], t[k]).n_objects())
                        .product::<usize>()
                })
                .sum();
            assert_eq!(sp.cat.n_objects(), expect);
        }
    }

    #[test]
    fn s_1_of_suspension_has_known_shape() {
        let c = realize2(&obj("(Δ1; Δ1)")).unwrap();
        let sp = s_p(&c, 1);
        assert_eq!(sp.cat.n_objects(), 4);
        assert_eq!(sp.cat.n_arrows(), 5);
        let comps = sp.cat.components();
        assert_eq!(comps.iter().max().unwrap() + 1, 3);
    }

    #[test]
    fn s_0_is_discrete_on_objects() {
        let c = oriental2();
        let sp = s_p(&c, 0);
        assert_eq!(sp.cat.n_objects(), 3);
        assert_eq!(sp.cat.n_arrows(), 3);
    }

    #[test]
    fn simplicial_identities_hold_up_to_p_4() {
        let cats = vec![
            realize2(&obj("(Δ1; Δ1)")).unwrap(),
            oriental2(),
            realize2(&obj("(Δ2; Δ1, Δ0)")).unwrap(),
        ];
        for c in &cats {
            let sp: Vec<SpCat> = (0..=4).map(|p| s_p(c, p)).collect();
            // Validate the face/degeneracy functors themselves.
            for p in 1..=4usize {
                for i in 0..=p {
                    let f = s_face(c, &sp[p], &sp[p - 1], p, i);
                    validate_functor(&sp[p].cat, &sp[p - 1].cat, &f).unwrap();
                }
            }
            for p in 0..=3usize {
                for i in 0..=p {
                    let s = s_degeneracy(c, &sp[p], &sp[p + 1], p, i);
                    validate_functor(&sp[p].cat, &sp[p + 1].cat, &s).unwrap();
                }
            }
            // d_i d_j = d_{j-1} d_i for i < j
            for p in 2..=4usize {
                for j in 1..=p {
                    for i in 0..j {
                        let lhs = Functor::compose(
                            &s_face(c, &sp[p - 1], &sp[p - 2], p - 1, i),
                            &s_face(c, &sp[p], &sp[p - 1], p, j),
                        );
                        let rhs = Functor::compose(
                            &s_face(c, &sp[p - 1], &sp[p - 2], p - 1, j - 1),
                            &s_face(c, &sp[p], &sp[p - 1], p, i),
                        );
                        assert_eq!(lhs, rhs, "faces p={p} i={i} j={j}");
                    }
                }
            }
            // s_i s_j = s_{j+1} s_i for i ≤ j
            for p in 0..=2usize {
                for j in 0..=p {
                    for i in 0..=j {
                        let lhs = Functor::compose(
                            &s_degeneracy(c, &sp[p + 1], &sp[p + 2], p + 1, i),
                            &s_degeneracy(c, &sp[p], &sp[p + 1], p, j),
                        );
                        let rhs = Functor::compose(
                            &s_degeneracy(c, &sp[p + 1], &sp[p + 2], p + 1, j + 1),
                            &s_degeneracy(c, &sp[p], &sp[p + 1], p, i),
                        );
                        assert_eq!(lhs, rhs, "degens p={p} i={i} j={j}");
                    }
                }
            }
            // mixed identities
            for p in 1..=3usize {
                for j in 0..=p {
                    for i in 0..=p + 1 {
                        let left = Functor::compose(
                            &s_face(c, &sp[p + 1], &sp[p], p + 1, i),
                            &s_degeneracy(c, &sp[p], &sp[p + 1], p, j),
                        );
                        let expect = if i < j {
                            Functor::compose(
                                &s_degeneracy(c, &sp[p - 1], &sp[p], p - 1, j - 1),
                                &s_face(c, &sp[p], &sp[p - 1], p, i),
                            )
                        } else if i == j || i == j + 1 {
                            Functor::identity_of(&sp[p].cat)
                        } else {
                            Functor::compose(
                                &s_degeneracy(c, &sp[p - 1], &sp[p], p - 1, j),
                                &s_face(c, &sp[p], &sp[p - 1], p, i - 1),
                            )
                        };
                        assert_eq!(left, expect, "mixed p={p} i={i} j={j}");
                    }
                }
            }
        }
    }
}
