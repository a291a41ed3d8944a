//! Augmented directed chain complexes of free Z-modules.
//!
//! A `DirectedComplex` is a nonnegatively graded chain complex of free
//! abelian groups with a chosen basis in every degree, an augmentation
//! `C_0 -> Z`, and the positivity submonoid spanned by the basis (a chain
//! is positive when all its coordinates are ≥ 0). The main family here is
//! `oriental_complex(n)`: degree p has one generator per strictly
//! increasing (p+1)-tuple in {0..n}, the differential is the alternating
//! sum of deletions, and every vertex augments to 1.
//!
//! `retraction_sr(n)` is the chain map collapsing onto the spine (the
//! chain of consecutive edges), `homotopy_h(n)` the explicit homotopy
//! from the identity to it, and `verify_homotopy` the exact checker for
//! the equation d∘h + h∘d = target − source together with positivity
//! of h. `tensor` forms the tensor product complex with the Koszul sign.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::IntMat;

/// Basis label: either an increasing tuple (orientals and friends) or a
/// tensor pair.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AdcLabel {
    Tuple(Vec<u32>),
    Pair(Box<AdcLabel>, Box<AdcLabel>),
}

impl AdcLabel {
    pub fn tuple(xs: &[u32]) -> Self {
        AdcLabel::Tuple(xs.to_vec())
    }
}

impl fmt::Display for AdcLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdcLabel::Tuple(xs) => {
                write!(f, "(")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            AdcLabel::Pair(a, b) => write!(f, "({a}⊗{b})"),
        }
    }
}

impl fmt::Debug for AdcLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Free based chain complex with augmentation.
///
/// `diffs[p-1]` is the matrix of d_p: C_p -> C_{p-1}, with shape
/// rank_{p-1} × rank_p; columns are indexed by the degree-p basis.
#[derive(Clone, Debug)]
pub struct DirectedComplex {
    pub basis: Vec<Vec<AdcLabel>>,
    pub diffs: Vec<IntMat>,
    pub augmentation: IntMat,
    index: Vec<HashMap<AdcLabel, usize>>,
}

impl DirectedComplex {
    pub fn new(basis: Vec<Vec<AdcLabel>>, diffs: Vec<IntMat>, augmentation: IntMat) -> Result<Self> {
        if basis.is_empty() {
            return Err(Error::Invalid("complex needs at least degree 0".into()));
        }
        if diffs.len() + 1 != basis.len() {
            return Err(Error::DegreeMismatch(format!(
                "{} degrees but {} differentials",
                basis.len(),
                diffs.len()
            )));
        }
        for (p, d) in diffs.iter().enumerate() {
            let (want_r, want_c) = (basis[p].len(), basis[p + 1].len());
            if (d.rows, d.cols) != (want_r, want_c) {
                return Err(Error::DegreeMismatch(format!(
                    "d_{} has shape {}x{}, expected {}x{}",
                    p + 1,
                    d.rows,
                    d.cols,
                    want_r,
                    want_c
                )));
            }
        }
        if (augmentation.rows, augmentation.cols) != (1, basis[0].len()) {
            return Err(Error::DegreeMismatch(format!(
                "augmentation has shape {}x{}, expected 1x{}",
                augmentation.rows,
                augmentation.cols,
                basis[0].len()
            )));
        }
        let index = basis
            .iter()
            .map(|bs| {
                bs.iter()
                    .enumerate()
                    .map(|(i, l)| (l.clone(), i))
                    .collect::<HashMap<_, _>>()
            })
            .collect::<Vec<_>>();
        for (p, bs) in basis.iter().enumerate() {
            if index[p].len() != bs.len() {
                return Err(Error::Invalid(format!("duplicate basis label in degree {p}")));
            }
        }
        Ok(DirectedComplex { basis, diffs, augmentation, index })
    }

    pub fn top_degree(&self) -> usize {
        self.basis.len() - 1
    }

    pub fn rank(&self, p: usize) -> usize {
        self.basis.get(p).map_or(0, |b| b.len())
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.basis.iter().map(|b| b.len()).collect()
    }

    /// Matrix of d_p for 1 ≤ p ≤ top_degree.
    pub fn d(&self, p: usize) -> &IntMat {
        &self.diffs[p - 1]
    }

    pub fn label_index(&self, p: usize, label: &AdcLabel) -> Option<usize> {
        self.index.get(p).and_then(|m| m.get(label)).copied()
    }

    /// Checks d∘d = 0 and e∘d_1 = 0, reporting the first offending basis
    /// element.
    pub fn validate(&self) -> Result<()> {
        for p in 2..=self.top_degree() {
            let dd = self.d(p - 1).mul(self.d(p));
            if !dd.is_zero() {
                let (_, col, _) = &dd.entries()[0];
                return Err(Error::NotAComplex {
                    degree: p,
                    basis: self.basis[p][*col].to_string(),
                    detail: format!("d_{}∘d_{} has a nonzero column", p - 1, p),
                });
            }
        }
        if self.top_degree() >= 1 {
            let ed = self.augmentation.mul(self.d(1));
            if !ed.is_zero() {
                let (_, col, _) = &ed.entries()[0];
                return Err(Error::Augmentation(format!(
                    "e∘d ≠ 0 on {}",
                    self.basis[1][*col]
                )));
            }
        }
        Ok(())
    }
}

/// Degreewise chain map between complexes of the same length.
/// `maps[p]` has shape (target rank_p × source rank_p).
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub maps: Vec<IntMat>,
}

impl ChainMap {
    pub fn identity(k: &DirectedComplex) -> Self {
        ChainMap {
            maps: k.ranks().iter().map(|&r| IntMat::identity(r)).collect(),
        }
    }

    /// g ∘ f, degreewise.
    pub fn compose(g: &ChainMap, f: &ChainMap) -> ChainMap {
        assert_eq!(g.maps.len(), f.maps.len());
        ChainMap {
            maps: g
                .maps
                .iter()
                .zip(f.maps.iter())
                .map(|(gm, fm)| gm.mul(fm))
                .collect(),
        }
    }
}

/// Chain-map laws for f: source -> target: degree count, commuting
/// squares, augmentation preservation, and columnwise positivity (the
/// map must send positive chains to positive chains).
pub fn validate_chain_map(
    source: &DirectedComplex,
    target: &DirectedComplex,
    f: &ChainMap,
) -> Result<()> {
    if f.maps.len() != source.basis.len() || f.maps.len() != target.basis.len() {
        return Err(Error::DegreeMismatch(format!(
            "map has {} degrees, source {} target {}",
            f.maps.len(),
            source.basis.len(),
            target.basis.len()
        )));
    }
    for (p, m) in f.maps.iter().enumerate() {
        if (m.rows, m.cols) != (target.rank(p), source.rank(p)) {
            return Err(Error::DegreeMismatch(format!(
                "degree {} map is {}x{}, expected {}x{}",
                p,
                m.rows,
                m.cols,
                target.rank(p),
                source.rank(p)
            )));
        }
        if m.entries().iter().any(|(_, _, v)| v.is_negative()) {
            return Err(Error::Invalid(format!(
                "degree {p} map has a negative entry; positivity is required"
            )));
        }
    }
    for p in 1..source.basis.len() {
        let lhs = target.d(p).mul(&f.maps[p]);
        let rhs = f.maps[p - 1].mul(source.d(p));
        if lhs != rhs {
            return Err(Error::Invalid(format!(
                "square at degree {p} does not commute"
            )));
        }
    }
    if target.augmentation.mul(&f.maps[0]) != source.augmentation {
        return Err(Error::Augmentation("chain map does not preserve augmentation".into()));
    }
    Ok(())
}

/// Oriental complex on vertices {0..n}: one degree-p generator per
/// strictly increasing (p+1)-tuple, alternating-sum differential,
/// augmentation 1 on every vertex.
pub fn oriental_complex(n: u32) -> DirectedComplex {
    let n_us = n as usize;
    let mut basis: Vec<Vec<AdcLabel>> = Vec::with_capacity(n_us + 1);
    for p in 0..=n_us {
        let mut layer = Vec::new();
        let mut tuple: Vec<u32> = (0..=p as u32).collect();
        loop {
            layer.push(AdcLabel::Tuple(tuple.clone()));
            // next strictly increasing (p+1)-tuple in {0..n}, lexicographic
            let mut i = p + 1;
            loop {
                if i == 0 {
                    i = usize::MAX;
                    break;
                }
                i -= 1;
                if tuple[i] < n - (p - i) as u32 {
                    tuple[i] += 1;
                    for j in i + 1..=p {
                        tuple[j] = tuple[j - 1] + 1;
                    }
                    break;
                }
            }
            if i == usize::MAX {
                break;
            }
        }
        basis.push(layer);
    }
    let index: Vec<HashMap<&AdcLabel, usize>> = basis
        .iter()
        .map(|bs| bs.iter().enumerate().map(|(i, l)| (l, i)).collect())
        .collect();
    let mut diffs = Vec::with_capacity(n_us);
    for p in 1..=n_us {
        let mut triplets = Vec::new();
        for (j, label) in basis[p].iter().enumerate() {
            let AdcLabel::Tuple(xs) = label else { unreachable!() };
            for l in 0..xs.len() {
                let mut face = xs.clone();
                face.remove(l);
                let i = index[p - 1][&AdcLabel::Tuple(face)];
                let sign = if l % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                triplets.push((i, j, sign));
            }
        }
        diffs.push(IntMat::from_triplets(basis[p - 1].len(), basis[p].len(), triplets));
    }
    let augmentation = IntMat::from_triplets(
        1,
        basis[0].len(),
        (0..basis[0].len()).map(|j| (0, j, BigInt::one())),
    );
    DirectedComplex::new(basis, diffs, augmentation).expect("oriental complex is well formed")
}

/// Chain map collapsing the oriental complex onto its spine: vertices are
/// fixed, an edge (i0,i1) goes to the sum of consecutive edges between i0
/// and i1, everything of degree ≥ 2 goes to zero.
pub fn retraction_sr(n: u32) -> ChainMap {
    let k = oriental_complex(n);
    let mut maps = Vec::with_capacity(k.basis.len());
    maps.push(IntMat::identity(k.rank(0)));
    if n >= 1 {
        let mut triplets = Vec::new();
        for (j, label) in k.basis[1].iter().enumerate() {
            let AdcLabel::Tuple(xs) = label else { unreachable!() };
            let (i0, i1) = (xs[0], xs[1]);
            for step in i0 + 1..=i1 {
                let target = AdcLabel::Tuple(vec![step - 1, step]);
                let i = k.label_index(1, &target).expect("consecutive edge exists");
                triplets.push((i, j, BigInt::one()));
            }
        }
        maps.push(IntMat::from_triplets(k.rank(1), k.rank(1), triplets));
    }
    for p in 2..k.basis.len() {
        maps.push(IntMat::zero(k.rank(p), k.rank(p)));
    }
    ChainMap { maps }
}

/// The homotopy from the identity to `retraction_sr(n)`:
/// h(i0) = 0 and h(i0,...,ip) = Σ_{i0<k<i1} (k−1, k, i1, ..., ip).
pub fn homotopy_h(n: u32) -> ChainHomotopy {
    let k = oriental_complex(n);
    let top = k.top_degree();
    let mut h = Vec::with_capacity(top + 1);
    for p in 0..=top {
        let out_rank = if p + 1 <= top { k.rank(p + 1) } else { 0 };
        if p == 0 {
            h.push(IntMat::zero(out_rank, k.rank(0)));
            continue;
        }
        let mut triplets = Vec::new();
        if p + 1 <= top {
            for (j, label) in k.basis[p].iter().enumerate() {
                let AdcLabel::Tuple(xs) = label else { unreachable!() };
                for step in xs[0] + 1..xs[1] {
                    let mut out = vec![step - 1, step];
                    out.extend_from_slice(&xs[1..]);
                    let i = k
                        .label_index(p + 1, &AdcLabel::Tuple(out))
                        .expect("homotopy image tuple is increasing");
                    triplets.push((i, j, BigInt::one()));
                }
            }
        }
        h.push(IntMat::from_triplets(out_rank, k.rank(p), triplets));
    }
    ChainHomotopy {
        source_map: ChainMap::identity(&k),
        target_map: retraction_sr(n),
        h,
    }
}

/// A claimed homotopy `h` between two chain self-maps, with `h[p]`
/// raising degree by one (shape rank_{p+1} × rank_p; the top map has
/// zero rows).
#[derive(Clone, Debug)]
pub struct ChainHomotopy {
    pub source_map: ChainMap,
    pub target_map: ChainMap,
    pub h: Vec<IntMat>,
}

/// One failure found by `verify_homotopy`: the degree and basis element
/// where the homotopy identity (or positivity) first breaks, with both
/// sides printed against the target basis.
#[derive(Clone, Debug)]
pub struct HomotopyWitness {
    pub degree: usize,
    pub basis: String,
    pub lhs: String,
    pub rhs: String,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct HomotopyVerdict {
    pub ok: bool,
    pub witness: Option<HomotopyWitness>,
}

fn format_chain(k: &DirectedComplex, degree: usize, col: &[(usize, BigInt)]) -> String {
    if col.is_empty() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (i, v) in col {
        let sign = if v.is_negative() { "-" } else { "+" };
        if !s.is_empty() {
            s.push(' ');
        }
        s.push_str(&format!("{sign}{}·{}", v.abs(), k.basis[degree][*i]));
    }
    s
}

/// Exact check of d∘h + h∘d = target − source in every degree, plus
/// positivity of every h entry. Scans degrees in ascending order and
/// basis elements in ascending index; the witness is the first failure
/// in that order (positivity is checked before the identity at each
/// degree).
pub fn verify_homotopy(k: &DirectedComplex, hom: &ChainHomotopy) -> Result<HomotopyVerdict> {
    let top = k.top_degree();
    if hom.h.len() != top + 1
        || hom.source_map.maps.len() != top + 1
        || hom.target_map.maps.len() != top + 1
    {
        return Err(Error::DegreeMismatch(format!(
            "homotopy carries {} degrees, complex has {}",
            hom.h.len(),
            top + 1
        )));
    }
    for p in 0..=top {
        let out_rank = if p + 1 <= top { k.rank(p + 1) } else { 0 };
        if (hom.h[p].rows, hom.h[p].cols) != (out_rank, k.rank(p)) {
            return Err(Error::DegreeMismatch(format!(
                "h[{}] has shape {}x{}, expected {}x{}",
                p,
                hom.h[p].rows,
                hom.h[p].cols,
                out_rank,
                k.rank(p)
            )));
        }
        for m in [&hom.source_map.maps[p], &hom.target_map.maps[p]] {
            if (m.rows, m.cols) != (k.rank(p), k.rank(p)) {
                return Err(Error::DegreeMismatch(format!(
                    "endpoint map at degree {p} is not square of rank {}",
                    k.rank(p)
                )));
            }
        }
    }
    for p in 0..=top {
        if let Some((r, c, v)) = hom.h[p]
            .entries()
            .iter()
            .find(|(_, _, v)| v.is_negative())
        {
            return Ok(HomotopyVerdict {
                ok: false,
                witness: Some(HomotopyWitness {
                    degree: p,
                    basis: k.basis[p][*c].to_string(),
                    lhs: format!("{v}·{}", k.basis[p + 1][*r]),
                    rhs: "a nonnegative combination".to_string(),
                    reason: "h has a negative coefficient".to_string(),
                }),
            });
        }
        // lhs = d_{p+1}·h_p + h_{p-1}·d_p, rhs = target_p − source_p
        let mut lhs = if p + 1 <= top {
            k.d(p + 1).mul(&hom.h[p])
        } else {
            IntMat::zero(k.rank(p), k.rank(p))
        };
        if p >= 1 {
            lhs = lhs.add(&hom.h[p - 1].mul(k.d(p)));
        }
        let rhs = hom.target_map.maps[p].add(&hom.source_map.maps[p].neg());
        if lhs != rhs {
            let diff = lhs.add(&rhs.neg());
            let (_, j, _) = &diff.entries()[0];
            return Ok(HomotopyVerdict {
                ok: false,
                witness: Some(HomotopyWitness {
                    degree: p,
                    basis: k.basis[p][*j].to_string(),
                    lhs: format_chain(k, p, &lhs.col(*j)),
                    rhs: format_chain(k, p, &rhs.col(*j)),
                    reason: "d∘h + h∘d differs from target − source".to_string(),
                }),
            });
        }
    }
    Ok(HomotopyVerdict { ok: true, witness: None })
}

/// Tensor product complex with the Koszul sign:
/// d(x⊗y) = dx⊗y + (−1)^{|x|} x⊗dy, e(x⊗y) = e(x)·e(y).
/// Degree-n basis is ordered by |x| ascending, then x index, then y index.
pub fn tensor(k: &DirectedComplex, l: &DirectedComplex) -> DirectedComplex {
    let top = k.top_degree() + l.top_degree();
    let mut basis: Vec<Vec<AdcLabel>> = Vec::with_capacity(top + 1);
    // positions[n] maps (p, i, j) -> index in degree n
    let mut positions: Vec<HashMap<(usize, usize, usize), usize>> = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let mut layer = Vec::new();
        let mut pos = HashMap::new();
        for p in 0..=n.min(k.top_degree()) {
            let q = n - p;
            if q > l.top_degree() {
                continue;
            }
            for (i, x) in k.basis[p].iter().enumerate() {
                for (j, y) in l.basis[q].iter().enumerate() {
                    pos.insert((p, i, j), layer.len());
                    layer.push(AdcLabel::Pair(Box::new(x.clone()), Box::new(y.clone())));
                }
            }
        }
        basis.push(layer);
        positions.push(pos);
    }
    let mut diffs = Vec::with_capacity(top);
    for n in 1..=top {
        let mut triplets = Vec::new();
        for p in 0..=n.min(k.top_degree()) {
            let q = n - p;
            if q > l.top_degree() {
                continue;
            }
            for i in 0..k.rank(p) {
                for j in 0..l.rank(q) {
                    let col = positions[n][&(p, i, j)];
                    if p >= 1 {
                        for (r, v) in k.d(p).col(i) {
                            let row = positions[n - 1][&(p - 1, r, j)];
                            triplets.push((row, col, v));
                        }
                    }
                    if q >= 1 {
                        let sign = if p % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                        for (r, v) in l.d(q).col(j) {
                            let row = positions[n - 1][&(p, i, r)];
                            triplets.push((row, col, v * &sign));
                        }
                    }
                }
            }
        }
        diffs.push(IntMat::from_triplets(basis[n - 1].len(), basis[n].len(), triplets));
    }
    let mut aug_triplets = Vec::new();
    for i in 0..k.rank(0) {
        for j in 0..l.rank(0) {
            let col = positions[0][&(0, i, j)];
            let v = k.augmentation.get(0, i) * l.augmentation.get(0, j);
            aug_triplets.push((0, col, v));
        }
    }
    let augmentation = IntMat::from_triplets(1, basis[0].len(), aug_triplets);
    DirectedComplex::new(basis, diffs, augmentation).expect("tensor complex is well formed")
}

/// Checks that `map` is a degree-preserving basis bijection A -> B
/// commuting with differentials and augmentations.
pub fn is_isomorphism_via(
    map: impl Fn(&AdcLabel) -> AdcLabel,
    a: &DirectedComplex,
    b: &DirectedComplex,
) -> bool {
    if a.basis.len() != b.basis.len() {
        return false;
    }
    let mut perms: Vec<Vec<usize>> = Vec::new();
    for p in 0..a.basis.len() {
        if a.rank(p) != b.rank(p) {
            return false;
        }
        let mut perm = Vec::with_capacity(a.rank(p));
        let mut seen = vec![false; b.rank(p)];
        for label in &a.basis[p] {
            match b.label_index(p, &map(label)) {
                Some(i) if !seen[i] => {
                    seen[i] = true;
                    perm.push(i);
                }
                _ => return false,
            }
        }
        perms.push(perm);
    }
    for p in 1..a.basis.len() {
        for j in 0..a.rank(p) {
            let mut image: Vec<(usize, BigInt)> = a
                .d(p)
                .col(j)
                .into_iter()
                .map(|(r, v)| (perms[p - 1][r], v))
                .collect();
            image.sort_by_key(|(r, _)| *r);
            if image != b.d(p).col(perms[p][j]) {
                return false;
            }
        }
    }
    for j in 0..a.rank(0) {
        if a.augmentation.get(0, j) != b.augmentation.get(0, perms[0][j]) {
            return false;
        }
    }
    true
}

/// Plain-text rendering: basis declarations `p: label`, then
/// differential lines `d(label) = ±c·label ...` (with `= 0` spelled out),
/// then augmentation lines `e(label) = c` for nonzero values.
pub fn dump(k: &DirectedComplex) -> String {
    let mut out = String::new();
    for (p, layer) in k.basis.iter().enumerate() {
        for label in layer {
            out.push_str(&format!("{p}: {label}\n"));
        }
    }
    for p in 1..=k.top_degree() {
        for (j, label) in k.basis[p].iter().enumerate() {
            let col = k.d(p).col(j);
            out.push_str(&format!("d({label}) = {}\n", format_chain(k, p - 1, &col)));
        }
    }
    for (j, label) in k.basis[0].iter().enumerate() {
        let v = k.augmentation.get(0, j);
        if !v.is_zero() {
            out.push_str(&format!("e({label}) = {v}\n"));
        }
    }
    out
}

fn parse_label(s: &str) -> Result<AdcLabel> {
    let s = s.trim();
    let inner = s
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("label must be parenthesized: {s}")))?;
    // A pair has a top-level ⊗; a tuple has only digits and commas.
    let mut depth = 0usize;
    for (i, ch) in inner.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| Error::Parse(format!("unbalanced parens in {s}")))?
            }
            '⊗' if depth == 0 => {
                let left = parse_label(&inner[..i])?;
                let right = parse_label(&inner[i + '⊗'.len_utf8()..])?;
                return Ok(AdcLabel::Pair(Box::new(left), Box::new(right)));
            }
            _ => {}
        }
    }
    let mut xs = Vec::new();
    for part in inner.split(',') {
        let part = part.trim();
        if part.is_empty() {
            return Err(Error::Parse(format!("empty tuple component in {s}")));
        }
        xs.push(
            part.parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad tuple component {part:?} in {s}")))?,
        );
    }
    Ok(AdcLabel::Tuple(xs))
}

/// Splits a chain expression `+1·(0,1) -2·(1,2)` (also accepts `*` for
/// the product dot and a bare `0`) into (coefficient, label) terms.
fn parse_chain(s: &str) -> Result<Vec<(BigInt, AdcLabel)>> {
    let s = s.trim();
    if s == "0" {
        return Ok(Vec::new());
    }
    let mut terms = Vec::new();
    // Terms are separated by whitespace; each is SIGN COEFF·LABEL or
    // COEFF·LABEL (first term may omit the sign).
    for raw in s.split_whitespace() {
        let (sign, rest) = match raw.strip_prefix('-') {
            Some(r) => (-1, r),
            None => (1, raw.strip_prefix('+').unwrap_or(raw)),
        };
        let (coeff_str, label_str) = rest
            .split_once('·')
            .or_else(|| rest.split_once('*'))
            .ok_or_else(|| Error::Parse(format!("term {raw:?} lacks a coefficient separator")))?;
        let coeff: BigInt = coeff_str
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad coefficient {coeff_str:?}")))?;
        terms.push((coeff * sign, parse_label(label_str)?));
    }
    Ok(terms)
}

/// Parses the `dump` format back into a complex. Basis order follows
/// declaration order; every degree ≥ 1 element needs a `d(...)` line and
/// degree-0 elements may carry `e(...)` lines.
pub fn parse_dump(text: &str) -> Result<DirectedComplex> {
    let mut layers: Vec<Vec<AdcLabel>> = Vec::new();
    let mut d_lines: Vec<(AdcLabel, Vec<(BigInt, AdcLabel)>)> = Vec::new();
    let mut e_lines: Vec<(AdcLabel, BigInt)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::Parse(format!("line {}: {msg}", lineno + 1));
        // `d(` and `e(` wrap a label that carries its own parentheses, so
        // the text between the wrapper parens is already a full label.
        if let Some(rest) = line.strip_prefix("d(") {
            let (label_str, chain_str) = rest
                .rsplit_once(") =")
                .ok_or_else(|| err("malformed d line".into()))?;
            let label = parse_label(label_str).map_err(|e| err(e.to_string()))?;
            let chain = parse_chain(chain_str).map_err(|e| err(e.to_string()))?;
            d_lines.push((label, chain));
        } else if let Some(rest) = line.strip_prefix("e(") {
            let (label_str, val_str) = rest
                .rsplit_once(") =")
                .ok_or_else(|| err("malformed e line".into()))?;
            let label = parse_label(label_str).map_err(|e| err(e.to_string()))?;
            let v: BigInt = val_str
                .trim()
                .parse()
                .map_err(|_| err(format!("bad augmentation value {val_str:?}")))?;
            e_lines.push((label, v));
        } else if let Some((deg_str, label_str)) = line.split_once(':') {
            let p: usize = deg_str
                .trim()
                .parse()
                .map_err(|_| err(format!("bad degree {deg_str:?}")))?;
            while layers.len() <= p {
                layers.push(Vec::new());
            }
            layers[p].push(parse_label(label_str).map_err(|e| err(e.to_string()))?);
        } else {
            return Err(err(format!("unrecognized line {line:?}")));
        }
    }
    if layers.is_empty() {
        return Err(Error::Parse("no basis declarations".into()));
    }
    let index: Vec<HashMap<&AdcLabel, usize>> = layers
        .iter()
        .map(|bs| bs.iter().enumerate().map(|(i, l)| (l, i)).collect())
        .collect();
    let degree_of: HashMap<&AdcLabel, usize> = layers
        .iter()
        .enumerate()
        .flat_map(|(p, bs)| bs.iter().map(move |l| (l, p)))
        .collect();
    let mut diff_triplets: Vec<Vec<(usize, usize, BigInt)>> =
        (1..layers.len()).map(|_| Vec::new()).collect();
    for (label, chain) in d_lines {
        let p = *degree_of
            .get(&label)
            .ok_or_else(|| Error::Parse(format!("d line for undeclared {label}")))?;
        if p == 0 {
            return Err(Error::Parse(format!("d line for degree-0 element {label}")));
        }
        let col = index[p][&label];
        for (coeff, target) in chain {
            let row = *index[p - 1].get(&target).ok_or_else(|| {
                Error::Parse(format!("d({label}) mentions {target}, not declared in degree {}", p - 1))
            })?;
            diff_triplets[p - 1].push((row, col, coeff));
        }
    }
    let diffs: Vec<IntMat> = diff_triplets
        .into_iter()
        .enumerate()
        .map(|(i, t)| IntMat::from_triplets(layers[i].len(), layers[i + 1].len(), t))
        .collect();
    let mut aug_triplets = Vec::new();
    for (label, v) in e_lines {
        let p = *degree_of
            .get(&label)
            .ok_or_else(|| Error::Parse(format!("e line for undeclared {label}")))?;
        if p != 0 {
            return Err(Error::Parse(format!("e line for degree-{p} element {label}")));
        }
        aug_triplets.push((0, index[0][&label], v));
    }
    let augmentation = IntMat::from_triplets(1, layers[0].len(), aug_triplets);
    DirectedComplex::new(layers, diffs, augmentation)
}
