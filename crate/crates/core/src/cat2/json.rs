//! JSON interchange for finite 2-categories and 2-functors.
//!
//! The on-disk form lists identities implicitly: within every hom the
//! canonical arrow numbering puts the identity of object i at index i
//! and the listed non-identity arrows after them, in order. Composition
//! triples `[g, f, g∘f]` are listed only when both factors are
//! non-identity; horizontal arrow triples `[β, α, β⋆α]` omit the pairs
//! where both cells are identities, since those follow from the object
//! table. Missing homs are empty, and every import is fully validated.

use std::collections::HashMap;

use serde_json::{json, Map, Value};

use super::enumerate::TwoFunctor;
use super::{Arrow, Fin2Cat, FinCat, Functor};
use crate::error::{Error, Result};

fn pair_key(a: usize, b: usize) -> String {
    format!("{a}->{b}")
}

fn triple_key(a: usize, b: usize, c: usize) -> String {
    format!("{a}->{b}->{c}")
}

fn parse_key(key: &str, parts: usize) -> Result<Vec<usize>> {
    let split: Vec<&str> = key.split("->").collect();
    if split.len() != parts {
        return Err(Error::Parse(format!("bad key {key:?}")));
    }
    split
        .iter()
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad index in key {key:?}")))
        })
        .collect()
}

/// Renumbers every hom so identities come first in object order; the
/// exported form and all index-based references assume this layout.
pub fn canonicalize(c: &Fin2Cat) -> Fin2Cat {
    let n = c.n_objects();
    // old→new arrow index per nonempty hom
    let mut maps: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    let mut homs: Vec<Option<FinCat>> = vec![None; n * n];
    for a in 0..n {
        for b in 0..n {
            let hom = c.hom(a, b);
            if hom.n_objects() == 0 {
                continue;
            }
            let mut new_order: Vec<usize> = hom.identity.clone();
            for i in 0..hom.n_arrows() {
                if !hom.is_identity(i) {
                    new_order.push(i);
                }
            }
            let mut old_to_new = vec![0usize; hom.n_arrows()];
            for (new, &old) in new_order.iter().enumerate() {
                old_to_new[old] = new;
            }
            let arrows: Vec<Arrow> = new_order.iter().map(|&i| hom.arrows[i].clone()).collect();
            let comp = hom
                .comp
                .iter()
                .map(|(&(g, f), &h)| ((old_to_new[g], old_to_new[f]), old_to_new[h]))
                .collect();
            homs[a * n + b] = Some(FinCat {
                obj_labels: hom.obj_labels.clone(),
                arrows,
                identity: (0..hom.n_objects()).collect(),
                comp,
            });
            maps.insert((a, b), old_to_new);
        }
    }
    let mut hcomp_obj = HashMap::new();
    let mut hcomp_arr = HashMap::new();
    for (&(a, b, cc), tab) in &c.hcomp_obj {
        hcomp_obj.insert((a, b, cc), tab.clone());
    }
    for (&(a, b, cc), tab) in &c.hcomp_arr {
        let nf = c.hom(a, b).n_arrows();
        let (m_ab, m_bc, m_ac) = (&maps[&(a, b)], &maps[&(b, cc)], &maps[&(a, cc)]);
        let mut new_tab = vec![0usize; tab.len()];
        for beta in 0..c.hom(b, cc).n_arrows() {
            for alpha in 0..nf {
                new_tab[m_bc[beta] * nf + m_ab[alpha]] = m_ac[tab[beta * nf + alpha]];
            }
        }
        hcomp_arr.insert((a, b, cc), new_tab);
    }
    Fin2Cat {
        obj_labels: c.obj_labels.clone(),
        homs,
        unit: c.unit.clone(),
        hcomp_obj,
        hcomp_arr,
    }
}

/// Serializes a 2-category. The output is canonical: homs renumbered
/// with identities first, keys sorted, derivable entries omitted.
pub fn fin2cat_to_value(c: &Fin2Cat) -> Value {
    let c = canonicalize(c);
    let n = c.n_objects();
    let mut homs = Map::new();
    for a in 0..n {
        for b in 0..n {
            let hom = c.hom(a, b);
            if hom.n_objects() == 0 {
                continue;
            }
            let arrows: Vec<Value> = hom
                .arrows
                .iter()
                .enumerate()
                .filter(|(i, _)| !hom.is_identity(*i))
                .map(|(_, arr)| {
                    json!({"id": arr.label, "src": arr.src, "tgt": arr.tgt})
                })
                .collect();
            let mut comp: Vec<Value> = hom
                .comp
                .iter()
                .filter(|(&(g, f), _)| !hom.is_identity(g) && !hom.is_identity(f))
                .map(|(&(g, f), &gf)| json!([g, f, gf]))
                .collect();
            comp.sort_by_key(|v| v.to_string());
            homs.insert(
                pair_key(a, b),
                json!({
                    "objects": hom.obj_labels,
                    "arrows": arrows,
                    "comp": comp,
                }),
            );
        }
    }
    let mut hcomp = Map::new();
    for a in 0..n {
        for b in 0..n {
            for cc in 0..n {
                let (hab, hbc) = (c.hom(a, b), c.hom(b, cc));
                if hab.n_objects() == 0 || hbc.n_objects() == 0 {
                    continue;
                }
                let mut objects = Vec::new();
                for g in 0..hbc.n_objects() {
                    for f in 0..hab.n_objects() {
                        objects.push(json!([g, f, c.hcomp_ob(a, b, cc, g, f)]));
                    }
                }
                let mut arrows = Vec::new();
                for beta in 0..hbc.n_arrows() {
                    for alpha in 0..hab.n_arrows() {
                        if hbc.is_identity(beta) && hab.is_identity(alpha) {
                            continue;
                        }
                        arrows.push(json!([beta, alpha, c.hcomp_ar(a, b, cc, beta, alpha)]));
                    }
                }
                hcomp.insert(
                    triple_key(a, b, cc),
                    json!({"objects": objects, "arrows": arrows}),
                );
            }
        }
    }
    json!({
        "objects": c.obj_labels,
        "unit_cells": c.unit,
        "homs": homs,
        "hcomp": hcomp,
    })
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::Parse(format!("{what} must be a nonnegative integer, got {v}")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("{what} must be an array")))
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| Error::Parse(format!("{what} must be a string")))
}

fn field<'a>(v: &'a Value, name: &str) -> Result<&'a Value> {
    v.get(name)
        .ok_or_else(|| Error::Parse(format!("missing field {name:?}")))
}

fn hom_from_value(v: &Value, key: &str) -> Result<FinCat> {
    let obj_labels: Vec<String> = as_array(field(v, "objects")?, "objects")?
        .iter()
        .map(|x| as_str(x, "object label").map(str::to_owned))
        .collect::<Result<_>>()?;
    let n_obj = obj_labels.len();
    if n_obj == 0 {
        return Err(Error::Parse(format!("hom {key} listed but empty")));
    }
    let mut arrows: Vec<Arrow> = obj_labels
        .iter()
        .map(|l| Arrow { src: 0, tgt: 0, label: format!("id:{l}") })
        .collect();
    for (i, a) in arrows.iter_mut().enumerate() {
        a.src = i;
        a.tgt = i;
    }
    for entry in as_array(field(v, "arrows")?, "arrows")? {
        let label = as_str(field(entry, "id")?, "arrow id")?.to_owned();
        let src = as_usize(field(entry, "src")?, "src")?;
        let tgt = as_usize(field(entry, "tgt")?, "tgt")?;
        if src >= n_obj || tgt >= n_obj {
            return Err(Error::Parse(format!(
                "arrow {label} in hom {key} has endpoint out of range"
            )));
        }
        arrows.push(Arrow { src, tgt, label });
    }
    let n_arr = arrows.len();
    let mut comp: HashMap<(usize, usize), usize> = HashMap::new();
    for x in 0..n_arr {
        let (s, t) = (arrows[x].src, arrows[x].tgt);
        comp.insert((t, x), x); // identity arrow of object t is arrow t
        comp.insert((x, s), x);
    }
    for entry in as_array(field(v, "comp")?, "comp")? {
        let triple = as_array(entry, "comp entry")?;
        if triple.len() != 3 {
            return Err(Error::Parse(format!("comp entry in hom {key} is not a triple")));
        }
        let g = as_usize(&triple[0], "comp g")?;
        let f = as_usize(&triple[1], "comp f")?;
        let gf = as_usize(&triple[2], "comp g∘f")?;
        if g >= n_arr || f >= n_arr || gf >= n_arr {
            return Err(Error::Parse(format!("comp entry out of range in hom {key}")));
        }
        if g < n_obj || f < n_obj {
            return Err(Error::Parse(format!(
                "comp entry in hom {key} names an identity; identity composites are implicit"
            )));
        }
        if let Some(&prev) = comp.get(&(g, f)) {
            if prev != gf {
                return Err(Error::Parse(format!(
                    "conflicting composites for ({g},{f}) in hom {key}"
                )));
            }
        }
        comp.insert((g, f), gf);
    }
    FinCat::new(obj_labels, arrows, (0..n_obj).collect(), comp)
}

/// Deserializes and fully validates a 2-category.
pub fn fin2cat_from_value(v: &Value) -> Result<Fin2Cat> {
    let obj_labels: Vec<String> = as_array(field(v, "objects")?, "objects")?
        .iter()
        .map(|x| as_str(x, "object label").map(str::to_owned))
        .collect::<Result<_>>()?;
    let n = obj_labels.len();
    if n == 0 {
        return Err(Error::Parse("2-category with no objects".into()));
    }
    let mut homs: Vec<Option<FinCat>> = vec![None; n * n];
    let homs_value = field(v, "homs")?
        .as_object()
        .ok_or_else(|| Error::Parse("homs must be an object".into()))?;
    for (key, hv) in homs_value {
        let idx = parse_key(key, 2)?;
        let (a, b) = (idx[0], idx[1]);
        if a >= n || b >= n {
            return Err(Error::Parse(format!("hom key {key} out of range")));
        }
        homs[a * n + b] = Some(hom_from_value(hv, key)?);
    }
    for a in 0..n {
        if homs[a * n + a].is_none() {
            return Err(Error::Parse(format!(
                "hom {a}->{a} is required (it carries the unit cell)"
            )));
        }
    }
    let unit: Vec<usize> = as_array(field(v, "unit_cells")?, "unit_cells")?
        .iter()
        .map(|x| as_usize(x, "unit cell"))
        .collect::<Result<_>>()?;
    if unit.len() != n {
        return Err(Error::Parse("unit_cells length mismatch".into()));
    }
    let mut hcomp_obj = HashMap::new();
    let mut hcomp_arr = HashMap::new();
    let hcomp_value = field(v, "hcomp")?
        .as_object()
        .ok_or_else(|| Error::Parse("hcomp must be an object".into()))?;
    for (key, tv) in hcomp_value {
        let idx = parse_key(key, 3)?;
        let (a, b, c) = (idx[0], idx[1], idx[2]);
        if a >= n || b >= n || c >= n {
            return Err(Error::Parse(format!("hcomp key {key} out of range")));
        }
        let hab = homs[a * n + b]
            .as_ref()
            .ok_or_else(|| Error::Parse(format!("hcomp {key} over missing hom {a}->{b}")))?;
        let hbc = homs[b * n + c]
            .as_ref()
            .ok_or_else(|| Error::Parse(format!("hcomp {key} over missing hom {b}->{c}")))?;
        let hac = homs[a * n + c]
            .as_ref()
            .ok_or_else(|| Error::Parse(format!("hcomp {key} lands in missing hom {a}->{c}")))?;
        let (nf_o, ng_o) = (hab.n_objects(), hbc.n_objects());
        let mut obj_tab = vec![usize::MAX; nf_o * ng_o];
        for entry in as_array(field(tv, "objects")?, "hcomp objects")? {
            let t = as_array(entry, "hcomp object entry")?;
            if t.len() != 3 {
                return Err(Error::Parse(format!("hcomp object entry in {key} not a triple")));
            }
            let g = as_usize(&t[0], "g")?;
            let f = as_usize(&t[1], "f")?;
            let out = as_usize(&t[2], "g∘f")?;
            if g >= ng_o || f >= nf_o || out >= hac.n_objects() {
                return Err(Error::Parse(format!("hcomp object entry out of range in {key}")));
            }
            obj_tab[g * nf_o + f] = out;
        }
        if obj_tab.iter().any(|&x| x == usize::MAX) {
            return Err(Error::Parse(format!("hcomp object table {key} incomplete")));
        }
        let (nf_a, ng_a) = (hab.n_arrows(), hbc.n_arrows());
        let mut arr_tab = vec![usize::MAX; nf_a * ng_a];
        // identity ⋆ identity follows from the object table
        for g in 0..ng_o {
            for f in 0..nf_o {
                arr_tab[g * nf_a + f] = obj_tab[g * nf_o + f];
            }
        }
        for entry in as_array(field(tv, "arrows")?, "hcomp arrows")? {
            let t = as_array(entry, "hcomp arrow entry")?;
            if t.len() != 3 {
                return Err(Error::Parse(format!("hcomp arrow entry in {key} not a triple")));
            }
            let beta = as_usize(&t[0], "β")?;
            let alpha = as_usize(&t[1], "α")?;
            let out = as_usize(&t[2], "β⋆α")?;
            if beta >= ng_a || alpha >= nf_a || out >= hac.n_arrows() {
                return Err(Error::Parse(format!("hcomp arrow entry out of range in {key}")));
            }
            let slot = &mut arr_tab[beta * nf_a + alpha];
            if *slot != usize::MAX && *slot != out {
                return Err(Error::Parse(format!(
                    "hcomp arrow entry ({beta},{alpha}) in {key} conflicts with the implied identity pair"
                )));
            }
            *slot = out;
        }
        if arr_tab.iter().any(|&x| x == usize::MAX) {
            return Err(Error::Parse(format!("hcomp arrow table {key} incomplete")));
        }
        hcomp_obj.insert((a, b, c), obj_tab);
        hcomp_arr.insert((a, b, c), arr_tab);
    }
    let out = Fin2Cat { obj_labels, homs, unit, hcomp_obj, hcomp_arr };
    out.validate2()?;
    Ok(out)
}

/// Serializes a 2-functor; indices refer to the given in-memory cats.
pub fn two_functor_to_value(f: &TwoFunctor) -> Value {
    let mut hom_maps = Map::new();
    let mut keys: Vec<&(usize, usize)> = f.hom_maps.keys().collect();
    keys.sort();
    for &(a, b) in keys {
        let hf = &f.hom_maps[&(a, b)];
        hom_maps.insert(
            pair_key(a, b),
            json!({"objects": hf.obj_map, "arrows": hf.arr_map}),
        );
    }
    json!({"obj_map": f.obj_map, "hom_maps": hom_maps})
}

/// Deserializes a 2-functor and validates it against the given cats.
pub fn two_functor_from_value(
    v: &Value,
    source: &Fin2Cat,
    target: &Fin2Cat,
) -> Result<TwoFunctor> {
    let obj_map: Vec<usize> = as_array(field(v, "obj_map")?, "obj_map")?
        .iter()
        .map(|x| as_usize(x, "obj_map entry"))
        .collect::<Result<_>>()?;
    let mut hom_maps = HashMap::new();
    let maps = field(v, "hom_maps")?
        .as_object()
        .ok_or_else(|| Error::Parse("hom_maps must be an object".into()))?;
    for (key, hv) in maps {
        let idx = parse_key(key, 2)?;
        let om: Vec<usize> = as_array(field(hv, "objects")?, "objects")?
            .iter()
            .map(|x| as_usize(x, "object image"))
            .collect::<Result<_>>()?;
        let am: Vec<usize> = as_array(field(hv, "arrows")?, "arrows")?
            .iter()
            .map(|x| as_usize(x, "arrow image"))
            .collect::<Result<_>>()?;
        hom_maps.insert((idx[0], idx[1]), Functor { obj_map: om, arr_map: am });
    }
    let f = TwoFunctor { obj_map, hom_maps };
    super::enumerate::validate_2functor(source, target, &f)?;
    Ok(f)
}
