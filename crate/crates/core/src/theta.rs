//! Objects and morphisms of the wreath-tree category (levels ≤ 2 are the
//! ones realized as 2-categories, but the tree combinatorics is uniform
//! in the depth, so nothing here caps it).
//!
//! An object is a planar tree: `Δ0` is the leaf, and `(Δn; c1, ..., cn)`
//! is a root of width n with child trees c_i. A width-0 node is the same
//! thing as the leaf and `node()` normalizes it away, so structural
//! equality is the right notion of equality. The compact notation `Δn`
//! means the width-n node whose children are all leaves.
//!
//! A morphism (φ; f) from `(Δm; c⃗)` to `(Δn; c⃗′)` is a weakly monotone
//! map φ: {0..m} → {0..n} together with one child morphism
//! f_{i,i′}: c_i → c′_{i′} for every 1 ≤ i ≤ m and φ(i−1) < i′ ≤ φ(i).
//! Composition pairs each outer slot (i, i″) with the unique middle
//! index i′ whose φ-intervals nest, and composes the child morphisms.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};

/// Weakly monotone map {0..source_n} → {0..target_n}.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SimplexMap {
    pub target_n: usize,
    pub values: Vec<usize>,
}

impl SimplexMap {
    pub fn new(target_n: usize, values: Vec<usize>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Morphism("simplex map needs at least one value".into()));
        }
        for w in values.windows(2) {
            if w[0] > w[1] {
                return Err(Error::Morphism(format!("values {values:?} are not monotone")));
            }
        }
        if *values.last().unwrap() > target_n {
            return Err(Error::Morphism(format!(
                "value {} exceeds target {}",
                values.last().unwrap(),
                target_n
            )));
        }
        Ok(SimplexMap { target_n, values })
    }

    pub fn identity(n: usize) -> Self {
        SimplexMap { target_n: n, values: (0..=n).collect() }
    }

    pub fn source_n(&self) -> usize {
        self.values.len() - 1
    }

    pub fn at(&self, i: usize) -> usize {
        self.values[i]
    }

    /// g ∘ f.
    pub fn compose(g: &SimplexMap, f: &SimplexMap) -> Result<SimplexMap> {
        if f.target_n != g.source_n() {
            return Err(Error::EndpointMismatch {
                g: format!("[{}]→[{}]", g.source_n(), g.target_n),
                f: format!("[{}]→[{}]", f.source_n(), f.target_n),
            });
        }
        SimplexMap::new(g.target_n, f.values.iter().map(|&v| g.values[v]).collect())
    }

    /// All monotone maps {0..m} → {0..n}.
    pub fn enumerate(m: usize, n: usize) -> Vec<SimplexMap> {
        let mut out = Vec::new();
        let mut cur = vec![0usize; m + 1];
        loop {
            out.push(SimplexMap { target_n: n, values: cur.clone() });
            let mut i = m + 1;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] < n {
                    cur[i] += 1;
                    for j in i + 1..=m {
                        cur[j] = cur[i];
                    }
                    break;
                }
            }
        }
    }
}

/// Planar tree object. `node(vec![])` normalizes to `Leaf`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ThetaObject {
    Leaf,
    Node(Vec<ThetaObject>),
}

/// Canonical constructor: a width-0 node is the leaf.
pub fn node(children: Vec<ThetaObject>) -> ThetaObject {
    if children.is_empty() {
        ThetaObject::Leaf
    } else {
        ThetaObject::Node(children)
    }
}

/// The width-n object whose children are all leaves (`Δn`).
pub fn simplex_object(n: usize) -> ThetaObject {
    node(vec![ThetaObject::Leaf; n])
}

impl ThetaObject {
    pub fn width(&self) -> usize {
        match self {
            ThetaObject::Leaf => 0,
            ThetaObject::Node(cs) => cs.len(),
        }
    }

    pub fn children(&self) -> &[ThetaObject] {
        match self {
            ThetaObject::Leaf => &[],
            ThetaObject::Node(cs) => cs,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            ThetaObject::Leaf => 0,
            ThetaObject::Node(cs) => 1 + cs.iter().map(|c| c.depth()).max().unwrap_or(0),
        }
    }

    fn is_all_leaves(&self) -> bool {
        self.children().iter().all(|c| *c == ThetaObject::Leaf)
    }

    /// Canonical notation: `Δn` when every child is a leaf, otherwise
    /// `(Δn; c1, ..., cn)` with children rendered the same way.
    pub fn notation(&self) -> String {
        if self.is_all_leaves() {
            return format!("Δ{}", self.width());
        }
        let children = self
            .children()
            .iter()
            .map(|c| c.notation())
            .collect::<Vec<_>>()
            .join(", ");
        format!("(Δ{}; {})", self.width(), children)
    }
}

impl fmt::Display for ThetaObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.notation())
    }
}

impl fmt::Debug for ThetaObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.notation())
    }
}

/// Parses the object notation. Accepts `Δ` or `D`, compact simplex
/// shorthand anywhere, and arbitrary whitespace after separators.
pub fn parse_object(s: &str) -> Result<ThetaObject> {
    let mut p = Parser { text: s, pos: 0 };
    let obj = p.object()?;
    p.skip_ws();
    if p.pos != p.text.len() {
        return Err(Error::Notation(format!(
            "trailing input at byte {}: {:?}",
            p.pos,
            &p.text[p.pos..]
        )));
    }
    Ok(obj)
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, expect: char) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == expect => {
                self.pos += c.len_utf8();
                Ok(())
            }
            other => Err(Error::Notation(format!(
                "expected {expect:?} at byte {}, found {other:?}",
                self.pos
            ))),
        }
    }

    fn delta_number(&mut self) -> Result<usize> {
        self.skip_ws();
        match self.peek() {
            Some('Δ') => self.pos += 'Δ'.len_utf8(),
            Some('D') => self.pos += 1,
            other => {
                return Err(Error::Notation(format!(
                    "expected Δ at byte {}, found {other:?}",
                    self.pos
                )))
            }
        }
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Notation(format!("missing width after Δ at byte {start}")));
        }
        self.text[start..self.pos]
            .parse()
            .map_err(|_| Error::Notation(format!("bad width {:?}", &self.text[start..self.pos])))
    }

    fn object(&mut self) -> Result<ThetaObject> {
        self.skip_ws();
        if self.peek() == Some('(') {
            self.eat('(')?;
            let n = self.delta_number()?;
            self.eat(';')?;
            let mut children = Vec::with_capacity(n);
            for i in 0..n {
                if i > 0 {
                    self.eat(',')?;
                }
                children.push(self.object()?);
            }
            self.eat(')')?;
            if n == 0 {
                return Err(Error::Notation(
                    "width 0 in parenthesized form; write Δ0 for the point".into(),
                ));
            }
            Ok(node(children))
        } else {
            Ok(simplex_object(self.delta_number()?))
        }
    }
}

/// Morphism (φ; f) with `children[(i, i′)]`: c_i → c′_{i′} for every
/// 1 ≤ i ≤ source width and φ(i−1) < i′ ≤ φ(i).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ThetaMorphism {
    pub source: ThetaObject,
    pub target: ThetaObject,
    pub phi: SimplexMap,
    pub children: BTreeMap<(usize, usize), ThetaMorphism>,
}

impl ThetaMorphism {
    pub fn validate(&self) -> Result<()> {
        if self.phi.source_n() != self.source.width() || self.phi.target_n != self.target.width() {
            return Err(Error::Morphism(format!(
                "φ is [{}]→[{}] but endpoints have widths {} and {}",
                self.phi.source_n(),
                self.phi.target_n,
                self.source.width(),
                self.target.width()
            )));
        }
        let mut expected = Vec::new();
        for i in 1..=self.source.width() {
            for ip in self.phi.at(i - 1) + 1..=self.phi.at(i) {
                expected.push((i, ip));
            }
        }
        let keys: Vec<(usize, usize)> = self.children.keys().copied().collect();
        if keys != expected {
            return Err(Error::Morphism(format!(
                "child slots {keys:?} do not match φ intervals {expected:?}"
            )));
        }
        for ((i, ip), f) in &self.children {
            if f.source != self.source.children()[i - 1] {
                return Err(Error::Morphism(format!(
                    "child ({i},{ip}) has source {}, expected {}",
                    f.source,
                    self.source.children()[i - 1]
                )));
            }
            if f.target != self.target.children()[ip - 1] {
                return Err(Error::Morphism(format!(
                    "child ({i},{ip}) has target {}, expected {}",
                    f.target,
                    self.target.children()[ip - 1]
                )));
            }
            f.validate()?;
        }
        Ok(())
    }
}

pub fn identity(s: &ThetaObject) -> ThetaMorphism {
    let n = s.width();
    let mut children = BTreeMap::new();
    for (i, c) in s.children().iter().enumerate() {
        children.insert((i + 1, i + 1), identity(c));
    }
    ThetaMorphism {
        source: s.clone(),
        target: s.clone(),
        phi: SimplexMap::identity(n),
        children,
    }
}

/// g ∘ f. Fails with an endpoint mismatch unless f.target == g.source.
pub fn compose(g: &ThetaMorphism, f: &ThetaMorphism) -> Result<ThetaMorphism> {
    if f.target != g.source {
        return Err(Error::EndpointMismatch {
            g: format!("{} → {}", g.source, g.target),
            f: format!("{} → {}", f.source, f.target),
        });
    }
    let phi = SimplexMap::compose(&g.phi, &f.phi)?;
    let mut children = BTreeMap::new();
    for i in 1..=f.source.width() {
        for ipp in phi.at(i - 1) + 1..=phi.at(i) {
            // The middle index i′ is the unique one with
            // f.φ(i−1) < i′ ≤ f.φ(i) and g.φ(i′−1) < i″ ≤ g.φ(i′).
            let mut mid = None;
            for ip in f.phi.at(i - 1) + 1..=f.phi.at(i) {
                if g.phi.at(ip - 1) < ipp && ipp <= g.phi.at(ip) {
                    debug_assert!(mid.is_none(), "middle index not unique");
                    mid = Some(ip);
                }
            }
            let ip = mid.ok_or_else(|| {
                Error::Morphism(format!("no middle index for slot ({i},{ipp})"))
            })?;
            let inner = compose(&g.children[&(ip, ipp)], &f.children[&(i, ip)])?;
            children.insert((i, ipp), inner);
        }
    }
    Ok(ThetaMorphism {
        source: f.source.clone(),
        target: g.target.clone(),
        phi,
        children,
    })
}

/// All morphisms S → T.
pub fn enumerate_morphisms(s: &ThetaObject, t: &ThetaObject) -> Vec<ThetaMorphism> {
    let mut out = Vec::new();
    for phi in SimplexMap::enumerate(s.width(), t.width()) {
        let mut slots = Vec::new();
        for i in 1..=s.width() {
            for ip in phi.at(i - 1) + 1..=phi.at(i) {
                slots.push((i, ip));
            }
        }
        let per_slot: Vec<Vec<ThetaMorphism>> = slots
            .iter()
            .map(|(i, ip)| {
                enumerate_morphisms(&s.children()[i - 1], &t.children()[ip - 1])
            })
            .collect();
        let mut pick = vec![0usize; slots.len()];
        'assign: loop {
            let mut children = BTreeMap::new();
            for (k, slot) in slots.iter().enumerate() {
                children.insert(*slot, per_slot[k][pick[k]].clone());
            }
            out.push(ThetaMorphism {
                source: s.clone(),
                target: t.clone(),
                phi: phi.clone(),
                children,
            });
            // advance the mixed-radix counter
            for k in 0..slots.len() {
                pick[k] += 1;
                if pick[k] < per_slot[k].len() {
                    continue 'assign;
                }
                pick[k] = 0;
            }
            break;
        }
    }
    out
}

/// One-level suspension (Δ1; S).
pub fn sigma(s: &ThetaObject) -> ThetaObject {
    node(vec![s.clone()])
}

pub fn sigma_map(f: &ThetaMorphism) -> ThetaMorphism {
    let mut children = BTreeMap::new();
    children.insert((1, 1), f.clone());
    ThetaMorphism {
        source: sigma(&f.source),
        target: sigma(&f.target),
        phi: SimplexMap::identity(1),
        children,
    }
}

/// Width projection target: the simplex object of the same width.
pub fn pi(s: &ThetaObject) -> ThetaObject {
    simplex_object(s.width())
}

/// Canonical projection S → Δ(width of S): identity on the spine, each
/// child collapsed to the leaf.
pub fn pi_map(s: &ThetaObject) -> ThetaMorphism {
    let n = s.width();
    let mut children = BTreeMap::new();
    for (i, c) in s.children().iter().enumerate() {
        children.insert((i + 1, i + 1), collapse_to_leaf(c));
    }
    ThetaMorphism {
        source: s.clone(),
        target: pi(s),
        phi: SimplexMap::identity(n),
        children,
    }
}

/// The unique morphism S → Δ0.
pub fn collapse_to_leaf(s: &ThetaObject) -> ThetaMorphism {
    ThetaMorphism {
        source: s.clone(),
        target: ThetaObject::Leaf,
        phi: SimplexMap { target_n: 0, values: vec![0; s.width() + 1] },
        children: BTreeMap::new(),
    }
}

/// Lifts a simplex map to a morphism between simplex objects.
pub fn simplex_morphism(phi: &SimplexMap) -> ThetaMorphism {
    let s = simplex_object(phi.source_n());
    let t = simplex_object(phi.target_n);
    let mut children = BTreeMap::new();
    for i in 1..=phi.source_n() {
        for ip in phi.at(i - 1) + 1..=phi.at(i) {
            children.insert((i, ip), identity(&ThetaObject::Leaf));
        }
    }
    ThetaMorphism { source: s, target: t, phi: phi.clone(), children }
}

/// Homogeneous wreath object (Δn; c, ..., c).
pub fn mu(n: usize, c: &ThetaObject) -> ThetaObject {
    node(vec![c.clone(); n])
}

/// (φ; g in every slot): mu(m, g.source) → mu(n, g.target).
pub fn mu_map(phi: &SimplexMap, g: &ThetaMorphism) -> ThetaMorphism {
    let mut children = BTreeMap::new();
    for i in 1..=phi.source_n() {
        for ip in phi.at(i - 1) + 1..=phi.at(i) {
            children.insert((i, ip), g.clone());
        }
    }
    ThetaMorphism {
        source: mu(phi.source_n(), &g.source),
        target: mu(phi.target_n, &g.target),
        phi: phi.clone(),
        children,
    }
}

/// Iterated homogeneous object: m_n(p1, ..., pn) = μ(Δp1, m_{n−1}(p2..)).
/// No arguments gives the point, one argument the simplex Δp.
pub fn m_n(ps: &[usize]) -> ThetaObject {
    match ps.split_first() {
        None => ThetaObject::Leaf,
        Some((&p, rest)) => mu(p, &m_n(rest)),
    }
}

/// Morphism version, one simplex map per level.
pub fn m_n_map(phis: &[SimplexMap]) -> ThetaMorphism {
    match phis.split_first() {
        None => identity(&ThetaObject::Leaf),
        Some((phi, rest)) => mu_map(phi, &m_n_map(rest)),
    }
}

/// Cell counts of the realization, one entry per level: a leaf
/// contributes [1]; a node of width n contributes n+1 at its level and
/// the children shifted one level down, summed elementwise.
pub fn generator_counts(s: &ThetaObject) -> Vec<usize> {
    match s {
        ThetaObject::Leaf => vec![1],
        ThetaObject::Node(cs) => {
            let mut out = vec![cs.len() + 1];
            for c in cs {
                for (k, v) in generator_counts(c).iter().enumerate() {
                    if out.len() <= k + 1 {
                        out.push(0);
                    }
                    out[k + 1] += v;
                }
            }
            out
        }
    }
}

/// Level-selective duality: reverses the child order at every level in
/// `levels` (level 1 is the root). An involution for fixed levels.
pub fn theta_dual(s: &ThetaObject, levels: &[usize]) -> ThetaObject {
    match s {
        ThetaObject::Leaf => ThetaObject::Leaf,
        ThetaObject::Node(cs) => {
            let deeper: Vec<usize> = levels
                .iter()
                .filter(|&&j| j > 1)
                .map(|&j| j - 1)
                .collect();
            let mut children: Vec<ThetaObject> =
                cs.iter().map(|c| theta_dual(c, &deeper)).collect();
            if levels.contains(&1) {
                children.reverse();
            }
            node(children)
        }
    }
}

/// Random object with widths drawn uniformly from 0..=max_width and
/// depth at most max_depth.
pub fn random_object(rng: &mut impl Rng, max_width: usize, max_depth: usize) -> ThetaObject {
    if max_depth == 0 {
        return ThetaObject::Leaf;
    }
    let w = rng.gen_range(0..=max_width);
    node((0..w).map(|_| random_object(rng, max_width, max_depth - 1)).collect())
}

/// Random morphism S → T: a uniformly chosen monotone φ, then random
/// child morphisms slot by slot.
pub fn random_morphism(
    rng: &mut impl Rng,
    s: &ThetaObject,
    t: &ThetaObject,
) -> ThetaMorphism {
    let phis = SimplexMap::enumerate(s.width(), t.width());
    let phi = phis[rng.gen_range(0..phis.len())].clone();
    let mut children = BTreeMap::new();
    for i in 1..=s.width() {
        for ip in phi.at(i - 1) + 1..=phi.at(i) {
            let f = random_morphism(rng, &s.children()[i - 1], &t.children()[ip - 1]);
            children.insert((i, ip), f);
        }
    }
    ThetaMorphism { source: s.clone(), target: t.clone(), phi, children }
}

/// JSON encoding of a morphism:
/// {"source": notation, "target": notation, "phi": [..], "children": {"i,i'": {...}}}
pub fn morphism_to_json(f: &ThetaMorphism) -> Value {
    let mut children = Map::new();
    for ((i, ip), g) in &f.children {
        children.insert(format!("{i},{ip}"), morphism_to_json(g));
    }
    json!({
        "source": f.source.notation(),
        "target": f.target.notation(),
        "phi": f.phi.values,
        "children": Value::Object(children),
    })
}

pub fn morphism_from_json(v: &Value) -> Result<ThetaMorphism> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("morphism JSON must be an object".into()))?;
    let get_str = |key: &str| -> Result<&str> {
        obj.get(key)
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse(format!("missing string field {key:?}")))
    };
    let source = parse_object(get_str("source")?)?;
    let target = parse_object(get_str("target")?)?;
    let values: Vec<usize> = obj
        .get("phi")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing array field \"phi\"".into()))?
        .iter()
        .map(|x| {
            x.as_u64()
                .map(|u| u as usize)
                .ok_or_else(|| Error::Parse(format!("bad phi entry {x}")))
        })
        .collect::<Result<_>>()?;
    let phi = SimplexMap::new(target.width(), values)?;
    let mut children = BTreeMap::new();
    if let Some(ch) = obj.get("children") {
        let ch = ch
            .as_object()
            .ok_or_else(|| Error::Parse("\"children\" must be an object".into()))?;
        for (key, sub) in ch {
            let (i, ip) = key
                .split_once(',')
                .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
                .ok_or_else(|| Error::Parse(format!("bad child slot key {key:?}")))?;
            children.insert((i, ip), morphism_from_json(sub)?);
        }
    }
    let f = ThetaMorphism { source, target, phi, children };
    f.validate()?;
    Ok(f)
}
