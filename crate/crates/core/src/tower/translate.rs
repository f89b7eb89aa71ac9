//! Constructive translation of a thin set into the top stage set.
//!
//! A translator is lifted one stage at a time. With `g_{i-1} π(Y) ⊆ X_{i-1}`
//! take `g̃ = section(g_{i-1})`. Every `g̃y` then sits in a fibre over `X_{i-1}`
//! as `n_y · section(π(g̃y))` with `n_y` in the kernel; a kernel element `u`
//! with `u{n_y} ⊆ L_i` exists because `L_i` is `i`-covering in the kernel and
//! there are at most `f(i) = i` offsets. Then `g_i = u g̃`.

use super::build::Tower;
use super::thin::ThinSet;
use crate::covering::translate_into;
use crate::error::{Error, Result};
use crate::group::Element;
use crate::subset::GroupSubset;

/// Largest `|G_d|` for which the sets `T_i` are enumerated.
pub const NESTING_LIMIT: u64 = 1 << 20;

#[derive(Debug, Clone)]
pub struct NestingReport {
    /// `T_i = {g ∈ G_d : π_{d->i}(gY) ⊆ X_i}` for `i = 0..=d`.
    pub t_sets: Vec<GroupSubset>,
    /// `T_{i+1} ⊆ T_i` for every `i`.
    pub nested: bool,
    /// Every `T_i` is a union of fibres of `G_d -> G_i`.
    pub fibre_unions: bool,
    pub translator_in_every_t: bool,
}

#[derive(Debug, Clone)]
pub struct Translation {
    /// `g_d` with `g_d Y ⊆ X_d`.
    pub translator: Element,
    /// `g_0, g_1, …, g_d`, one per stage.
    pub lifts: Vec<Element>,
    /// Every `g_d y` passed the factored membership test.
    pub verified: bool,
    pub nesting: Option<NestingReport>,
}

pub fn translate_thin(tower: &Tower, y: &ThinSet) -> Result<Translation> {
    let spec = tower.spec();
    let d = y.depth();
    if d > tower.depth() {
        return Err(Error::Precondition(format!(
            "thin set depth {d} exceeds tower depth {}",
            tower.depth()
        )));
    }
    let mut g = spec.group(0).identity();
    let mut lifts = vec![g];
    for i in 1..=d {
        let step = spec.step(i);
        let src = step.source();
        let lifted = step.section(g);
        let mut offsets = Vec::new();
        for &yi in y.projection(i) {
            let z = src.mul(lifted, yi);
            let h = step.map(z);
            if !tower.contains(i - 1, h) {
                return Err(Error::Soundness(format!(
                    "stage {i}: g_{} = {} does not translate level {} into X_{}",
                    i - 1,
                    g,
                    i - 1,
                    i - 1
                )));
            }
            let offset = src.div(z, step.section(h));
            offsets.push(step.kernel_index(offset).expect("offset lies in the kernel"));
        }
        offsets.sort_unstable();
        offsets.dedup();
        let cover = &tower.stage(i).cover.as_ref().expect("stage cover").set;
        let u = translate_into(&offsets, cover).ok_or_else(|| {
            Error::Soundness(format!(
                "stage {i}: kernel offsets {offsets:?} do not translate into L_{i} (|L_{i}| = {}), lifts so far {lifts:?}",
                cover.len()
            ))
        })?;
        g = src.mul(step.kernel_embed(u), lifted);
        lifts.push(g);
    }
    let top = spec.group(d);
    let verified = y.elements().iter().all(|&yi| tower.membership(d, top.mul(g, yi)));
    let nesting = (top.order() <= NESTING_LIMIT).then(|| nesting_report(tower, y, g));
    Ok(Translation {
        translator: g,
        lifts,
        verified,
        nesting,
    })
}

fn nesting_report(tower: &Tower, y: &ThinSet, translator: Element) -> NestingReport {
    let spec = tower.spec();
    let d = y.depth();
    let top = spec.group(d);
    let t_sets: Vec<GroupSubset> = (0..=d)
        .map(|i| {
            let members = top.elements().filter(|&g| {
                y.elements()
                    .iter()
                    .all(|&yi| tower.contains(i, spec.project(d, i, top.mul(g, yi))))
            });
            GroupSubset::from_elements(top, members).expect("elements of G_d")
        })
        .collect();
    let nested = t_sets.windows(2).all(|w| w[1].is_subset(&w[0]));
    let fibre_unions = t_sets.iter().enumerate().all(|(i, t)| {
        top.elements().all(|g| {
            let rep = spec.lift(i, d, spec.project(d, i, g));
            t.contains(g) == t.contains(rep)
        })
    });
    let translator_in_every_t = t_sets.iter().all(|t| t.contains(translator));
    NestingReport {
        t_sets,
        nested,
        fibre_unions,
        translator_in_every_t,
    }
}
