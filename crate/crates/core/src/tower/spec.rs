use crate::covering::{covering_condition, covering_condition_lhs};
use crate::epimorphism::{cyclic_tower_map, Epimorphism};
use crate::error::{Error, Result};
use crate::group::{Element, FiniteGroup};

/// The thinness bound: `f(0) = 1` and `f(i) = i` for `i >= 1`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ThinFunction;

impl ThinFunction {
    pub fn at(self, i: usize) -> usize {
        if i == 0 {
            1
        } else {
            i
        }
    }
}

/// Checks `(4k)^k (k log n + log 2) < n` for a kernel of order `n`. With
/// `strengthened` the check runs at `k + 1`, the covering degree the kernel set
/// actually has to reach.
pub fn check_ragaszt(kernel_order: u64, k: u32, strengthened: bool) -> Result<bool> {
    if kernel_order < 3 {
        return Err(Error::Precondition(format!("kernel order {kernel_order} < 3")));
    }
    let k = if strengthened { k + 1 } else { k };
    Ok(covering_condition(kernel_order, k))
}

#[derive(Debug, Clone, PartialEq)]
pub struct StageAdmissibility {
    /// Stage `i + 1` extends through the kernel of order `n_i`.
    pub stage: usize,
    pub kernel_order: u64,
    /// Lemma parameter `k = i`; the kernel set must be `(k+1)`-covering.
    pub k: u32,
    pub literal_lhs: f64,
    pub literal_ok: bool,
    pub strengthened_lhs: f64,
    pub strengthened_ok: bool,
    /// Stage 1 needs only a 1-covering set, which `{e}` always is.
    pub exempt: bool,
}

impl StageAdmissibility {
    pub fn admissible(&self) -> bool {
        self.exempt || self.strengthened_ok
    }
}

/// A chain of cyclic quotients `G_0 <- G_1 <- … <- G_d` with
/// `|ker(G_{i+1} -> G_i)| = n_i`, so `G_i = C_{n_0 ⋯ n_{i-1}}` and `G_0` is trivial.
#[derive(Clone, Debug)]
pub struct TowerSpec {
    kernel_orders: Vec<u64>,
    groups: Vec<FiniteGroup>,
    /// `steps[i]` maps `G_{i+1}` onto `G_i`.
    steps: Vec<Epimorphism>,
}

impl TowerSpec {
    pub fn new(kernel_orders: &[u64]) -> Result<Self> {
        if let Some(&n) = kernel_orders.iter().find(|&&n| n < 2) {
            return Err(Error::InvalidGroup(format!("kernel orders must be at least 2, got {n}")));
        }
        let mut groups = vec![FiniteGroup::cyclic(1)?];
        let mut steps = Vec::with_capacity(kernel_orders.len());
        let mut order = 1u64;
        for &n in kernel_orders {
            let next = order.checked_mul(n).ok_or(Error::OrderOverflow)?;
            let step = cyclic_tower_map(order, next)?;
            groups.push(step.source().clone());
            steps.push(step);
            order = next;
        }
        Ok(TowerSpec {
            kernel_orders: kernel_orders.to_vec(),
            groups,
            steps,
        })
    }

    pub fn depth(&self) -> usize {
        self.kernel_orders.len()
    }

    pub fn kernel_orders(&self) -> &[u64] {
        &self.kernel_orders
    }

    /// `G_i`
    pub fn group(&self, i: usize) -> &FiniteGroup {
        &self.groups[i]
    }

    /// `π_i : G_i -> G_{i-1}`, for `1 <= i <= depth`.
    pub fn step(&self, i: usize) -> &Epimorphism {
        &self.steps[i - 1]
    }

    /// `π_{from -> to}(x)` computed one step at a time.
    pub fn project(&self, from: usize, to: usize, x: Element) -> Element {
        assert!(to <= from && from <= self.depth());
        (to + 1..=from).rev().fold(x, |y, i| self.step(i).map(y))
    }

    /// Canonical lift of `x ∈ G_from` to `G_to` through successive sections.
    pub fn lift(&self, from: usize, to: usize, x: Element) -> Element {
        assert!(from <= to && to <= self.depth());
        (from + 1..=to).fold(x, |y, i| self.step(i).section(y))
    }

    /// `π_{from -> to}` as a single epimorphism.
    pub fn projection(&self, from: usize, to: usize) -> Result<Epimorphism> {
        if to > from || from > self.depth() {
            return Err(Error::Precondition(format!("no projection from G_{from} to G_{to}")));
        }
        if from == to {
            let n = self.group(from).order();
            return cyclic_tower_map(n, n);
        }
        let mut map = self.step(from).clone();
        for i in (to + 1..from).rev() {
            map = Epimorphism::compose(&map, self.step(i))?;
        }
        Ok(map)
    }

    pub fn admissibility(&self) -> Vec<StageAdmissibility> {
        self.kernel_orders
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                let k = i as u32;
                let literal_lhs = covering_condition_lhs(n, k);
                let strengthened_lhs = covering_condition_lhs(n, k + 1);
                StageAdmissibility {
                    stage: i + 1,
                    kernel_order: n,
                    k,
                    literal_lhs,
                    literal_ok: literal_lhs < n as f64,
                    strengthened_lhs,
                    strengthened_ok: strengthened_lhs < n as f64,
                    exempt: i == 0,
                }
            })
            .collect()
    }

    /// First stage failing the strengthened condition, as an error.
    pub fn check_admissible(&self) -> Result<()> {
        match self.admissibility().into_iter().find(|a| !a.admissible()) {
            None => Ok(()),
            Some(a) => Err(Error::Inadmissible {
                stage: a.stage,
                kernel_order: a.kernel_order,
                literal: a.literal_lhs,
                literal_ok: a.literal_ok,
                strengthened: a.strengthened_lhs,
                strengthened_ok: a.strengthened_ok,
            }),
        }
    }

    /// `tower:n_0,n_1,…`
    pub fn descriptor(&self) -> String {
        let parts: Vec<String> = self.kernel_orders.iter().map(u64::to_string).collect();
        format!("tower:{}", parts.join(","))
    }
}
