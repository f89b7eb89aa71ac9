//! Thin sets, slaloms and the dimension diagnostic.

use std::collections::BTreeSet;

use rand::Rng;

use super::spec::{ThinFunction, TowerSpec};
use crate::error::{Error, Result};
use crate::group::Element;

/// A subset `Y ⊆ G_d` with `|π_{d->i}(Y)| <= f(i)` for every `i <= d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThinSet {
    depth: usize,
    elements: Vec<Element>,
    /// `projections[i] = π_{d->i}(Y)`, sorted.
    projections: Vec<Vec<Element>>,
}

impl ThinSet {
    /// Validates the thinness bounds at every level.
    pub fn new(spec: &TowerSpec, depth: usize, elements: impl IntoIterator<Item = Element>) -> Result<Self> {
        if depth > spec.depth() {
            return Err(Error::Precondition(format!("depth {depth} exceeds tower depth {}", spec.depth())));
        }
        let order = spec.group(depth).order();
        let elements: BTreeSet<Element> = elements.into_iter().collect();
        if let Some(&x) = elements.iter().find(|&&x| x >= order) {
            return Err(Error::Precondition(format!("element {x} outside G_{depth}")));
        }
        let projections: Vec<Vec<Element>> = (0..=depth)
            .map(|i| {
                let p: BTreeSet<Element> = elements.iter().map(|&x| spec.project(depth, i, x)).collect();
                p.into_iter().collect()
            })
            .collect();
        let f = ThinFunction;
        if let Some((i, p)) = projections.iter().enumerate().find(|(i, p)| p.len() > f.at(*i)) {
            return Err(Error::Precondition(format!(
                "not thin: level {i} image has {} > {} elements",
                p.len(),
                f.at(i)
            )));
        }
        Ok(ThinSet {
            depth,
            elements: elements.into_iter().collect(),
            projections,
        })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn projection(&self, i: usize) -> &[Element] {
        &self.projections[i]
    }
}

/// Random thin set at depth `d`.
///
/// Level sets `S_0 = {e}, S_1, …, S_d` are grown fibre by fibre: every element
/// of `S_{i-1}` gets one random child in its fibre, then random children are
/// added until `|S_i| = f(i)`. Each element of `S_d` is kept with probability
/// `fullness`.
pub fn sample_thin_set<R: Rng + ?Sized>(spec: &TowerSpec, d: usize, rng: &mut R, fullness: f64) -> Result<ThinSet> {
    if d > spec.depth() {
        return Err(Error::Precondition(format!("depth {d} exceeds tower depth {}", spec.depth())));
    }
    if !(fullness > 0.0 && fullness <= 1.0) {
        return Err(Error::Precondition(format!("fullness {fullness} not in (0, 1]")));
    }
    let f = ThinFunction;
    let mut level = vec![spec.group(0).identity()];
    for i in 1..=d {
        let step = spec.step(i);
        let n = step.kernel_order();
        let child = |parent: Element, rng: &mut R| {
            step.source().mul(step.kernel_embed(rng.gen_range(0..n)), step.section(parent))
        };
        let mut next: BTreeSet<Element> = level.iter().map(|&p| child(p, rng)).collect();
        let capacity = level.len() as u64 * n;
        while next.len() < f.at(i) && (next.len() as u64) < capacity {
            let parent = level[rng.gen_range(0..level.len())];
            next.insert(child(parent, rng));
        }
        level = next.into_iter().collect();
    }
    let chosen: Vec<Element> = if fullness >= 1.0 {
        level
    } else {
        level.into_iter().filter(|_| rng.gen_bool(fullness)).collect()
    };
    ThinSet::new(spec, d, chosen)
}

/// Levels `S_0, …, S_d` with `S_i ⊆ G_i` and `|S_i| <= f(i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slalom {
    levels: Vec<Vec<Element>>,
}

impl Slalom {
    pub fn new(spec: &TowerSpec, levels: Vec<Vec<Element>>) -> Result<Self> {
        if levels.is_empty() || levels.len() > spec.depth() + 1 {
            return Err(Error::Precondition(format!(
                "slalom needs between 1 and {} levels",
                spec.depth() + 1
            )));
        }
        let f = ThinFunction;
        let mut clean = Vec::with_capacity(levels.len());
        for (i, level) in levels.into_iter().enumerate() {
            let set: BTreeSet<Element> = level.into_iter().collect();
            if set.len() > f.at(i) {
                return Err(Error::Precondition(format!("slalom level {i} has {} > {} elements", set.len(), f.at(i))));
            }
            if let Some(&x) = set.iter().find(|&&x| x >= spec.group(i).order()) {
                return Err(Error::Precondition(format!("element {x} outside G_{i}")));
            }
            clean.push(set.into_iter().collect());
        }
        Ok(Slalom { levels: clean })
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, i: usize) -> &[Element] {
        &self.levels[i]
    }
}

/// `{g ∈ G_d : π_{d->i}(g) ∈ S_i for all i <= d}`.
pub fn slalom_to_thin(spec: &TowerSpec, s: &Slalom) -> Result<ThinSet> {
    let mut alive: Vec<Element> = s.level(0).to_vec();
    for i in 1..=s.depth() {
        let step = spec.step(i);
        alive = s
            .level(i)
            .iter()
            .copied()
            .filter(|&x| alive.binary_search(&step.map(x)).is_ok())
            .collect();
    }
    ThinSet::new(spec, s.depth(), alive)
}

/// `min_{1<=i<=d} log|π_{d->i}(Y)| / log|G_i|`, a finite-depth stand-in for
/// the liminf dimension along the chain.
pub fn dimension_estimate(spec: &TowerSpec, d: usize, y: &[Element]) -> Result<f64> {
    if d == 0 || d > spec.depth() {
        return Err(Error::Precondition(format!("depth must be in 1..={}", spec.depth())));
    }
    if y.is_empty() {
        return Err(Error::Precondition("dimension of the empty set".into()));
    }
    if let Some(&x) = y.iter().find(|&&x| x >= spec.group(d).order()) {
        return Err(Error::Precondition(format!("element {x} outside G_{d}")));
    }
    let ratio = |i: usize| {
        let image: BTreeSet<Element> = y.iter().map(|&x| spec.project(d, i, x)).collect();
        (image.len() as f64).ln() / (spec.group(i).order() as f64).ln()
    };
    Ok((1..=d).map(ratio).fold(f64::INFINITY, f64::min))
}
