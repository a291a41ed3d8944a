//! The `verify` subcommands. Each one runs a batch of checks, prints a
//! line-oriented report, and turns the overall outcome into an exit code.

use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Result};
use nervelab_core::adc::{homotopy_h, oriental_complex, verify_homotopy, HomotopyWitness};
use nervelab_core::cat2::enumerate::enumerate_2functors;
use nervelab_core::cat2::{dualize, embed1as2, s_p, tau1, wreath_glue, Fin2Cat};
use nervelab_core::homology::{betti, Completeness};
use nervelab_core::matrix::IntMat;
use nervelab_core::nerve::{
    diagonal, multinerve2, nerve1, normalized_chains, street_nerve2, total_complex,
};
use nervelab_core::{fin2cat_from_value, two_functor_from_value, Budget, FinCat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::inspect::{is_loop_free, read_cat2, read_json};
use crate::report::Report;

fn outs(pairs: Vec<(&str, Value)>) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn witness_outs(w: &HomotopyWitness) -> Map<String, Value> {
    outs(vec![
        ("degree", json!(w.degree)),
        ("basis", json!(w.basis)),
        ("lhs", json!(w.lhs)),
        ("rhs", json!(w.rhs)),
        ("reason", json!(w.reason)),
    ])
}

/// Street-nerve Betti numbers of a 2-category, exact through `dmax - 1`.
fn street_betti(c: &Fin2Cat, dmax: usize, budget: &mut Budget) -> Result<Vec<usize>> {
    let ner = street_nerve2(c, dmax, budget)?;
    let ch = normalized_chains(&ner, dmax - 1)?;
    Ok(betti(&ch, dmax - 1, Completeness::Truncated)?.betti)
}

fn nerve1_betti(c: &FinCat, dmax: usize, budget: &mut Budget) -> Result<Vec<usize>> {
    let ner = nerve1(c, dmax, budget)?;
    let ch = normalized_chains(&ner, dmax - 1)?;
    Ok(betti(&ch, dmax - 1, Completeness::Truncated)?.betti)
}

pub fn cmd_verify_homotopy(n_max: u32, perturb: bool, seed: u64, json: bool) -> Result<i32> {
    if perturb && n_max == 0 {
        bail!("--perturb needs --n at least 1: the 0-dimensional homotopy has no entries to damage");
    }
    let mut report = Report::new();
    for n in 0..=n_max {
        let k = oriental_complex(n);
        let mut hom = homotopy_h(n);
        let mut damaged = false;
        if perturb && n == n_max {
            // bump one entry of h so dh + hd drifts off target − source
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let spots: Vec<usize> = (0..hom.h.len())
                .filter(|&p| hom.h[p].rows > 0 && hom.h[p].cols > 0)
                .collect();
            let p = spots[rng.gen_range(0..spots.len())];
            let r = rng.gen_range(0..hom.h[p].rows);
            let c = rng.gen_range(0..hom.h[p].cols);
            let mut triplets = hom.h[p].entries().to_vec();
            triplets.push((r, c, 1.into()));
            hom.h[p] = IntMat::from_triplets(hom.h[p].rows, hom.h[p].cols, triplets);
            damaged = true;
        }
        let t0 = Instant::now();
        let verdict = verify_homotopy(&k, &hom)?;
        let mut o = outs(vec![("ranks", json!(k.ranks()))]);
        if damaged {
            o.insert("perturbed".to_string(), json!(true));
        }
        if let Some(w) = &verdict.witness {
            o.extend(witness_outs(w));
        }
        report.add(
            "homotopy",
            &format!("oriental_{n}"),
            verdict.ok,
            format!("n={n}"),
            o,
            t0.elapsed().as_millis() as u64,
        );
    }
    Ok(report.emit(json))
}

pub fn cmd_compare_nerves(
    input: &Path,
    dmax: Option<usize>,
    json: bool,
    budget: &mut Budget,
) -> Result<i32> {
    let c = read_cat2(input)?;
    let dmax = match dmax {
        Some(0) => bail!("--dmax must be at least 1 to leave an exact degree"),
        Some(d) => d,
        None if is_loop_free(&c) => 3,
        None => bail!(
            "{} is not loop-free, so no default truncation level is safe; pass --dmax",
            input.display()
        ),
    };
    let mut report = Report::new();
    let inputs = format!("{} dmax={dmax}", input.display());

    let t0 = Instant::now();
    let street = street_betti(&c, dmax, budget)?;
    let street_ms = t0.elapsed().as_millis() as u64;

    let t0 = Instant::now();
    let multi = multinerve2(&c, dmax, dmax, budget)?;
    let diag_ch = normalized_chains(&diagonal(&multi)?, dmax - 1)?;
    let diag = betti(&diag_ch, dmax - 1, Completeness::Truncated)?.betti;
    let diag_ms = t0.elapsed().as_millis() as u64;

    let t0 = Instant::now();
    let tot_ch = total_complex(&multi, dmax - 1)?;
    let tot = betti(&tot_ch, dmax - 1, Completeness::Truncated)?.betti;
    let tot_ms = t0.elapsed().as_millis() as u64;

    report.add(
        "compare-nerves",
        "street_vs_diagonal",
        street == diag,
        inputs.clone(),
        outs(vec![
            ("street", json!(street)),
            ("diagonal", json!(diag)),
            ("exact_through", json!(dmax - 1)),
        ]),
        street_ms + diag_ms,
    );
    report.add(
        "compare-nerves",
        "street_vs_total",
        street == tot,
        inputs,
        outs(vec![
            ("street", json!(street)),
            ("total", json!(tot)),
            ("exact_through", json!(dmax - 1)),
        ]),
        street_ms + tot_ms,
    );
    Ok(report.emit(json))
}

pub fn cmd_verify_duality(
    input: &Path,
    levels: Option<Vec<usize>>,
    dmax: usize,
    json: bool,
    budget: &mut Budget,
) -> Result<i32> {
    if dmax == 0 {
        bail!("--dmax must be at least 1 to leave an exact degree");
    }
    let c = read_cat2(input)?;
    let js: Vec<Vec<usize>> = match levels {
        Some(j) => vec![j],
        None => vec![vec![], vec![1], vec![2], vec![1, 2]],
    };
    let base = street_betti(&c, dmax, budget)?;
    let mut report = Report::new();
    for j in &js {
        let t0 = Instant::now();
        let dual = dualize(&c, j);
        let dual_betti = street_betti(&dual, dmax, budget)?;
        let name = if j.is_empty() {
            "J={}".to_string()
        } else {
            let parts: Vec<String> = j.iter().map(|x| x.to_string()).collect();
            format!("J={{{}}}", parts.join(","))
        };
        report.add(
            "duality",
            &name,
            base == dual_betti,
            format!("{} dmax={dmax}", input.display()),
            outs(vec![
                ("original", json!(base)),
                ("dual", json!(dual_betti)),
                ("exact_through", json!(dmax - 1)),
            ]),
            t0.elapsed().as_millis() as u64,
        );
    }
    Ok(report.emit(json))
}

pub fn cmd_verify_pu_sc(
    t_path: &Path,
    c_path: &Path,
    pmax: usize,
    json: bool,
    budget: &mut Budget,
) -> Result<i32> {
    let t = read_cat2(t_path)?;
    let c = read_cat2(c_path)?;
    if !t.is_connected() {
        bail!(
            "{} is disconnected; the counting bijection needs a connected test shape",
            t_path.display()
        );
    }
    let t1 = tau1(&t)?;
    let mut report = Report::new();
    for p in 0..=pmax {
        let t0 = Instant::now();
        let mapped = enumerate_2functors(&t, &embed1as2(&s_p(&c, p).cat), budget)?.len();
        let glued_src = wreath_glue(p, &vec![t1.clone(); p])?;
        let glued = enumerate_2functors(&glued_src, &c, budget)?.len();
        report.add(
            "pu-sc",
            &format!("p={p}"),
            mapped == glued,
            format!("t={} c={}", t_path.display(), c_path.display()),
            outs(vec![
                ("into_path_category", json!(mapped)),
                ("from_wreath", json!(glued)),
            ]),
            t0.elapsed().as_millis() as u64,
        );
    }
    Ok(report.emit(json))
}

pub fn cmd_dwyer_kan(input: &Path, dmax: usize, json: bool, budget: &mut Budget) -> Result<i32> {
    if dmax == 0 {
        bail!("--dmax must be at least 1 to leave an exact degree");
    }
    let v = read_json(input)?;
    let bundle = v
        .as_object()
        .filter(|m| {
            m.contains_key("source") && m.contains_key("target") && m.contains_key("functor")
        })
        .ok_or_else(|| {
            anyhow::anyhow!(
                "{} must be an object with source, target and functor fields",
                input.display()
            )
        })?;
    let c = fin2cat_from_value(&bundle["source"])?;
    let d = fin2cat_from_value(&bundle["target"])?;
    let f = two_functor_from_value(&bundle["functor"], &c, &d)?;

    let mut report = Report::new();
    let inputs = format!("{} dmax={dmax}", input.display());

    let t0 = Instant::now();
    let mut seen = vec![false; d.n_objects()];
    for &b in &f.obj_map {
        seen[b] = true;
    }
    let bijective = c.n_objects() == d.n_objects() && seen.iter().all(|&s| s);
    report.add(
        "dwyer-kan",
        "object_bijection",
        bijective,
        inputs.clone(),
        outs(vec![
            ("source_objects", json!(c.n_objects())),
            ("target_objects", json!(d.n_objects())),
        ]),
        t0.elapsed().as_millis() as u64,
    );

    let mut homs_ok = true;
    for a in 0..c.n_objects() {
        for b in 0..c.n_objects() {
            let t0 = Instant::now();
            let upstairs = nerve1_betti(c.hom(a, b), dmax, budget)?;
            let downstairs = nerve1_betti(d.hom(f.obj_map[a], f.obj_map[b]), dmax, budget)?;
            let pass = upstairs == downstairs;
            homs_ok &= pass;
            report.add(
                "dwyer-kan",
                &format!("hom_nerve_{a}_{b}"),
                pass,
                inputs.clone(),
                outs(vec![
                    ("source_hom", json!(upstairs)),
                    ("target_hom", json!(downstairs)),
                ]),
                t0.elapsed().as_millis() as u64,
            );
        }
    }

    if bijective && homs_ok {
        let t0 = Instant::now();
        let up = street_betti(&c, dmax, budget)?;
        let down = street_betti(&d, dmax, budget)?;
        report.add(
            "dwyer-kan",
            "conclusion_nerve_betti",
            up == down,
            inputs,
            outs(vec![
                ("source", json!(up)),
                ("target", json!(down)),
                ("exact_through", json!(dmax - 1)),
            ]),
            t0.elapsed().as_millis() as u64,
        );
    } else {
        eprintln!("hypotheses failed; the nerve comparison is not asserted");
    }
    Ok(report.emit(json))
}

pub fn parse_levels(s: &str) -> Result<Vec<usize>> {
    if s.is_empty() || s == "none" {
        return Ok(vec![]);
    }
    let mut out = Vec::new();
    for part in s.split(',') {
        match part.trim() {
            "1" => out.push(1),
            "2" => out.push(2),
            other => bail!("level {other:?} is not 1 or 2"),
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::parse_levels;

    #[test]
    fn level_sets_parse() {
        assert_eq!(parse_levels("").unwrap(), Vec::<usize>::new());
        assert_eq!(parse_levels("none").unwrap(), Vec::<usize>::new());
        assert_eq!(parse_levels("2,1,2").unwrap(), vec![1, 2]);
        assert!(parse_levels("3").is_err());
    }
}
