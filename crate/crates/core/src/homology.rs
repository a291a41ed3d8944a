//! Integer homology of bounded chain complexes.
//!
//! Betti numbers come from exact ranks of the differentials, torsion
//! from Smith normal form. A complex may be a truncation of something
//! bigger; the result records up to which degree the answers are exact,
//! so a consumer can never mistake a truncation artifact for homology.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::adc::DirectedComplex;
use crate::error::{Error, Result};
use crate::matrix::IntMat;

/// Chain complex of free Z-modules in degrees 0..=ranks.len()-1.
/// `diffs[p]` is d_{p+1}: C_{p+1} → C_p, with shape ranks[p] × ranks[p+1].
#[derive(Clone, Debug)]
pub struct ChainComplexZ {
    pub ranks: Vec<usize>,
    pub diffs: Vec<IntMat>,
}

impl ChainComplexZ {
    pub fn new(ranks: Vec<usize>, diffs: Vec<IntMat>) -> Result<Self> {
        if ranks.is_empty() {
            return Err(Error::Invalid("chain complex needs at least degree 0".into()));
        }
        if diffs.len() + 1 != ranks.len() {
            return Err(Error::Invalid(format!(
                "{} degrees need {} differentials, got {}",
                ranks.len(),
                ranks.len() - 1,
                diffs.len()
            )));
        }
        for (p, d) in diffs.iter().enumerate() {
            if d.rows != ranks[p] || d.cols != ranks[p + 1] {
                return Err(Error::Invalid(format!(
                    "differential into degree {p} has shape {}×{}, want {}×{}",
                    d.rows,
                    d.cols,
                    ranks[p],
                    ranks[p + 1]
                )));
            }
        }
        Ok(ChainComplexZ { ranks, diffs })
    }

    pub fn top_degree(&self) -> usize {
        self.ranks.len() - 1
    }

    /// d ∘ d = 0 in every degree.
    pub fn validate(&self) -> Result<()> {
        for p in 0..self.diffs.len().saturating_sub(1) {
            let dd = self.diffs[p].mul(&self.diffs[p + 1]);
            if !dd.is_zero() {
                return Err(Error::NotAComplex {
                    degree: p + 2,
                    basis: format!("column {}", first_nonzero_col(&dd)),
                    detail: "composite of consecutive differentials is nonzero".into(),
                });
            }
        }
        Ok(())
    }

    pub fn from_directed(k: &DirectedComplex) -> ChainComplexZ {
        ChainComplexZ {
            ranks: k.ranks(),
            diffs: k.diffs.clone(),
        }
    }
}

fn first_nonzero_col(m: &IntMat) -> usize {
    m.entries().first().map(|&(_, c, _)| c).unwrap_or(0)
}

/// Whether the top end of the complex is the real end or a cut.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Completeness {
    Complete,
    Truncated,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyResult {
    /// betti[p] for p ≤ valid_range
    pub betti: Vec<usize>,
    /// torsion[p] = invariant factors > 1 of H_p, ascending, each
    /// dividing the next
    pub torsion: Vec<Vec<BigInt>>,
    /// degrees 0..=valid_range are exact; higher degrees are not
    /// reported at all
    pub valid_range: usize,
    pub completeness: Completeness,
}

impl HomologyResult {
    /// Homology of a point: H_0 = Z and nothing else, as far as the
    /// valid range can see.
    pub fn is_point(&self) -> bool {
        self.betti.first() == Some(&1)
            && self.betti.iter().skip(1).all(|&b| b == 0)
            && self.torsion.iter().all(|t| t.is_empty())
    }
}

/// Integer homology in degrees 0..=maxdim. For a truncated complex the
/// top degree is never reported, since its boundaries-in are unknown.
/// Ranks are computed by fraction-free elimination and cross-checked
/// against the Smith normal forms that produce the torsion.
pub fn betti(c: &ChainComplexZ, maxdim: usize, completeness: Completeness) -> Result<HomologyResult> {
    c.validate()?;
    let top = c.top_degree();
    let exact_top = match completeness {
        Completeness::Complete => top,
        Completeness::Truncated => {
            if top == 0 {
                return Err(Error::InsufficientTruncation(
                    "a truncated complex with only degree 0 determines nothing".into(),
                ));
            }
            top - 1
        }
    };
    let valid_range = exact_top.min(maxdim);
    // rank of d_p for p = 1..=valid_range+1 (d beyond the complex is 0)
    let mut d_rank = vec![0usize; valid_range + 2];
    let mut snfs: Vec<Option<Vec<BigInt>>> = vec![None; valid_range + 2];
    for p in 1..=valid_range + 1 {
        if p > top {
            continue;
        }
        let d = &c.diffs[p - 1];
        let r = d.rank();
        let snf = d.smith_normal_form();
        let snf_rank = snf.iter().filter(|x| !x.is_zero()).count();
        if snf_rank != r {
            return Err(Error::Invalid(format!(
                "rank disagreement in degree {p}: elimination {r}, normal form {snf_rank}"
            )));
        }
        d_rank[p] = r;
        snfs[p] = Some(snf);
    }
    let mut betti = Vec::with_capacity(valid_range + 1);
    let mut torsion = Vec::with_capacity(valid_range + 1);
    for p in 0..=valid_range {
        let rank_in = d_rank[p]; // rank d_p (0 for p = 0)
        let rank_out = d_rank[p + 1];
        let b = c.ranks[p]
            .checked_sub(rank_in + rank_out)
            .ok_or_else(|| Error::Invalid(format!("negative betti number in degree {p}")))?;
        betti.push(b);
        let t: Vec<BigInt> = match &snfs[p + 1] {
            Some(snf) => snf
                .iter()
                .filter(|x| !x.is_zero() && !x.abs().is_one())
                .map(|x| x.abs())
                .collect(),
            None => Vec::new(),
        };
        torsion.push(t);
    }
    // For a complete complex seen in full, the alternating sums of
    // chain ranks and betti numbers must agree.
    if completeness == Completeness::Complete && valid_range == top {
        let chi_chain: i64 = c
            .ranks
            .iter()
            .enumerate()
            .map(|(p, &r)| if p % 2 == 0 { r as i64 } else { -(r as i64) })
            .sum();
        let chi_homology: i64 = betti
            .iter()
            .enumerate()
            .map(|(p, &b)| if p % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum();
        if chi_chain != chi_homology {
            return Err(Error::Invalid(format!(
                "Euler characteristic mismatch: chains {chi_chain}, homology {chi_homology}"
            )));
        }
    }
    Ok(HomologyResult {
        betti,
        torsion,
        valid_range,
        completeness,
    })
}

/// Serializes a chain complex with sparse differentials.
pub fn chains_to_value(c: &ChainComplexZ, completeness: Completeness) -> Result<Value> {
    let mut diffs = Vec::with_capacity(c.diffs.len());
    for d in &c.diffs {
        let entries: Vec<Value> = d
            .entries()
            .iter()
            .map(|(r, col, v)| {
                let small: i64 = v.try_into().map_err(|_| {
                    Error::Invalid("differential entry too large for interchange format".into())
                })?;
                Ok(json!([r, col, small]))
            })
            .collect::<Result<_>>()?;
        diffs.push(json!({"rows": d.rows, "cols": d.cols, "entries": entries}));
    }
    Ok(json!({
        "ranks": c.ranks,
        "diffs": diffs,
        "complete": completeness == Completeness::Complete,
    }))
}

pub fn chains_from_value(v: &Value) -> Result<(ChainComplexZ, Completeness)> {
    let ranks: Vec<usize> = v
        .get("ranks")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing ranks array".into()))?
        .iter()
        .map(|x| {
            x.as_u64()
                .map(|n| n as usize)
                .ok_or_else(|| Error::Parse("rank must be a nonnegative integer".into()))
        })
        .collect::<Result<_>>()?;
    let diffs_v = v
        .get("diffs")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing diffs array".into()))?;
    let mut diffs = Vec::with_capacity(diffs_v.len());
    for dv in diffs_v {
        let rows = dv
            .get("rows")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("differential missing rows".into()))? as usize;
        let cols = dv
            .get("cols")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("differential missing cols".into()))? as usize;
        let entries_v = dv
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("differential missing entries".into()))?;
        let mut triplets = Vec::with_capacity(entries_v.len());
        for e in entries_v {
            let t = e
                .as_array()
                .filter(|t| t.len() == 3)
                .ok_or_else(|| Error::Parse("entry must be [row, col, value]".into()))?;
            let r = t[0]
                .as_u64()
                .ok_or_else(|| Error::Parse("entry row must be a nonnegative integer".into()))?
                as usize;
            let col = t[1]
                .as_u64()
                .ok_or_else(|| Error::Parse("entry col must be a nonnegative integer".into()))?
                as usize;
            let val = t[2]
                .as_i64()
                .ok_or_else(|| Error::Parse("entry value must be an integer".into()))?;
            if r >= rows || col >= cols {
                return Err(Error::Parse(format!("entry ({r},{col}) outside {rows}×{cols}")));
            }
            triplets.push((r, col, BigInt::from(val)));
        }
        diffs.push(IntMat::from_triplets(rows, cols, triplets));
    }
    let complete = v
        .get("complete")
        .and_then(Value::as_bool)
        .ok_or_else(|| Error::Parse("missing complete flag".into()))?;
    let c = ChainComplexZ::new(ranks, diffs)?;
    Ok((
        c,
        if complete { Completeness::Complete } else { Completeness::Truncated },
    ))
}
