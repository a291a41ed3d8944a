//! Plumbing subcommands: build, inspect, and convert objects.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use nervelab_core::adc;
use nervelab_core::cat2::{oriental2, point2, realize2, two_disc, Fin2Cat};
use nervelab_core::homology::{betti, chains_from_value, chains_to_value, Completeness};
use nervelab_core::nerve::{diagonal, multinerve2, normalized_chains, street_nerve2};
use nervelab_core::theta::{
    compose, generator_counts, morphism_from_json, morphism_to_json, parse_object, theta_dual,
};
use nervelab_core::{fin2cat_from_value, fin2cat_to_value, Budget, ChainComplexZ};
use serde_json::{json, Value};

pub fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("{} is not JSON", path.display()))
}

pub fn read_cat2(path: &Path) -> Result<Fin2Cat> {
    let v = read_json(path)?;
    Ok(fin2cat_from_value(&v)?)
}

fn write_or_print(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => println!("{text}"),
    }
    Ok(())
}

pub fn cmd_oriental(n: u32, json: bool, chains: Option<&PathBuf>) -> Result<i32> {
    let k = adc::oriental_complex(n);
    if let Some(path) = chains {
        let c = ChainComplexZ::from_directed(&k);
        let v = chains_to_value(&c, Completeness::Complete)?;
        fs::write(path, serde_json::to_string(&v)?)
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    if json {
        let basis: Vec<Vec<String>> = k
            .basis
            .iter()
            .map(|row| row.iter().map(|l| l.to_string()).collect())
            .collect();
        println!("{}", json!({ "n": n, "ranks": k.ranks(), "basis": basis }));
    } else {
        print!("{}", adc::dump(&k));
    }
    Ok(0)
}

pub fn cmd_theta_compose(g: &Path, f: &Path) -> Result<i32> {
    let g = morphism_from_json(&read_json(g)?)?;
    let f = morphism_from_json(&read_json(f)?)?;
    let gf = compose(&g, &f)?;
    println!("{}", morphism_to_json(&gf));
    Ok(0)
}

pub fn cmd_theta_dual(object: &str, levels: &[usize], json: bool) -> Result<i32> {
    let s = parse_object(object)?;
    let d = theta_dual(&s, levels);
    if json {
        println!("{}", json!({ "object": s.notation(), "levels": levels, "dual": d.notation() }));
    } else {
        println!("{}", d.notation());
    }
    Ok(0)
}

pub fn cmd_theta_counts(object: &str, json: bool) -> Result<i32> {
    let s = parse_object(object)?;
    let counts = generator_counts(&s);
    if json {
        println!("{}", json!({ "object": s.notation(), "counts": counts }));
    } else {
        println!("{counts:?}");
    }
    Ok(0)
}

pub fn cmd_cat2_validate(input: &Path, json: bool) -> Result<i32> {
    let v = read_json(input)?;
    match fin2cat_from_value(&v) {
        Ok(c) => {
            if json {
                println!(
                    "{}",
                    json!({ "valid": true, "objects": c.n_objects(), "cells": c.cells() })
                );
            } else {
                println!("valid: {} object(s), {} cell(s)", c.n_objects(), c.cells());
            }
            Ok(0)
        }
        Err(e) => {
            if json {
                println!("{}", json!({ "valid": false, "error": e.to_string() }));
            } else {
                println!("invalid: {e}");
            }
            Ok(1)
        }
    }
}

pub fn cmd_cat2_export(input: &Path, out: Option<&PathBuf>) -> Result<i32> {
    let c = read_cat2(input)?;
    write_or_print(out, &serde_json::to_string(&fin2cat_to_value(&c))?)?;
    Ok(0)
}

pub fn cmd_cat2_realize(object: &str, out: Option<&PathBuf>) -> Result<i32> {
    let c = match object {
        "oriental2" => oriental2(),
        "two-disc" => two_disc(),
        "point" => point2(),
        notation => realize2(&parse_object(notation)?)?,
    };
    write_or_print(out, &serde_json::to_string(&fin2cat_to_value(&c))?)?;
    Ok(0)
}

fn chains_out(
    x: &nervelab_core::SimplicialSet,
    dmax: usize,
    path: &PathBuf,
) -> Result<()> {
    if dmax == 0 {
        bail!("chain export needs --dmax at least 1");
    }
    let c = normalized_chains(x, dmax - 1)?;
    let v = chains_to_value(&c, Completeness::Truncated)?;
    fs::write(path, serde_json::to_string(&v)?)
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

pub fn cmd_nerve_street(
    input: &Path,
    dmax: usize,
    json: bool,
    chains: Option<&PathBuf>,
    budget: &mut Budget,
) -> Result<i32> {
    let c = read_cat2(input)?;
    let ner = street_nerve2(&c, dmax, budget)?;
    if let Some(path) = chains {
        chains_out(&ner, dmax, path)?;
    }
    let cards: Vec<usize> = (0..=dmax).map(|n| ner.card(n)).collect();
    let nondeg = ner.nondegenerate_counts();
    if json {
        println!("{}", json!({ "dmax": dmax, "cells": cards, "nondegenerate": nondeg }));
    } else {
        println!("lax nerve through dimension {dmax}");
        for n in 0..=dmax {
            println!("  dim {n}: {} simplices, {} nondegenerate", cards[n], nondeg[n]);
        }
    }
    Ok(0)
}

pub fn cmd_nerve_multi(
    input: &Path,
    pmax: usize,
    qmax: usize,
    json: bool,
    budget: &mut Budget,
) -> Result<i32> {
    let c = read_cat2(input)?;
    let x = multinerve2(&c, pmax, qmax, budget)?;
    let cards: Vec<Vec<usize>> =
        (0..=pmax).map(|p| (0..=qmax).map(|q| x.card(p, q)).collect()).collect();
    if json {
        println!("{}", json!({ "pmax": pmax, "qmax": qmax, "cells": cards }));
    } else {
        println!("bisimplicial nerve, horizontal ≤ {pmax}, vertical ≤ {qmax}");
        for (p, row) in cards.iter().enumerate() {
            println!("  p={p}: {row:?}");
        }
    }
    Ok(0)
}

pub fn cmd_nerve_diag(
    input: &Path,
    dmax: usize,
    json: bool,
    chains: Option<&PathBuf>,
    budget: &mut Budget,
) -> Result<i32> {
    let c = read_cat2(input)?;
    let x = multinerve2(&c, dmax, dmax, budget)?;
    let diag = diagonal(&x)?;
    if let Some(path) = chains {
        chains_out(&diag, dmax, path)?;
    }
    let cards: Vec<usize> = (0..=dmax).map(|n| diag.card(n)).collect();
    let nondeg = diag.nondegenerate_counts();
    if json {
        println!("{}", json!({ "dmax": dmax, "cells": cards, "nondegenerate": nondeg }));
    } else {
        println!("diagonal nerve through dimension {dmax}");
        for n in 0..=dmax {
            println!("  dim {n}: {} simplices, {} nondegenerate", cards[n], nondeg[n]);
        }
    }
    Ok(0)
}

pub fn cmd_homology(input: &Path, dmax: Option<usize>, json: bool) -> Result<i32> {
    let (c, completeness) = chains_from_value(&read_json(input)?)?;
    let natural = match completeness {
        Completeness::Complete => c.top_degree(),
        Completeness::Truncated => c.top_degree().saturating_sub(1),
    };
    let maxdim = dmax.unwrap_or(natural).min(natural);
    let h = betti(&c, maxdim, completeness)?;
    let torsion: Vec<Vec<String>> = h
        .torsion
        .iter()
        .map(|row| row.iter().map(|t| t.to_string()).collect())
        .collect();
    if json {
        println!(
            "{}",
            json!({
                "betti": h.betti,
                "torsion": torsion,
                "valid_through": h.valid_range,
                "complete": completeness == Completeness::Complete,
            })
        );
    } else {
        println!("betti: {:?}", h.betti);
        for (p, row) in torsion.iter().enumerate() {
            if !row.is_empty() {
                println!("torsion in degree {p}: {row:?}");
            }
        }
        let tag = match completeness {
            Completeness::Complete => "complete complex",
            Completeness::Truncated => "truncated complex",
        };
        println!("exact through degree {} ({tag})", h.valid_range);
    }
    Ok(0)
}

/// Underlying directed graph has no cycles and every endo-hom is just
/// the unit cell.
pub fn is_loop_free(c: &Fin2Cat) -> bool {
    let n = c.n_objects();
    for a in 0..n {
        let h = c.hom(a, a);
        if h.n_objects() != 1 || h.n_arrows() != 1 {
            return false;
        }
    }
    // cycle detection on a→b edges (a ≠ b, nonempty hom)
    let mut state = vec![0u8; n]; // 0 unvisited, 1 on stack, 2 done
    fn dfs(c: &Fin2Cat, a: usize, state: &mut Vec<u8>) -> bool {
        state[a] = 1;
        for b in 0..c.n_objects() {
            if b == a || c.hom(a, b).n_objects() == 0 {
                continue;
            }
            if state[b] == 1 {
                return false;
            }
            if state[b] == 0 && !dfs(c, b, state) {
                return false;
            }
        }
        state[a] = 2;
        true
    }
    (0..n).all(|a| state[a] != 0 || dfs(c, a, &mut state))
}
