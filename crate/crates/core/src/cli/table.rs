//! The covering-number table: bounds, exact values for small groups and the
//! size achieved by the randomized construction.

use serde::{Deserialize, Serialize};

use crate::covering::{
    construct_intersecting_family, construct_k_covering, cov_bounds, covering_condition, exact_cov, feasibility,
    ConstructOptions, EXACT_COV_MAX_ORDER,
};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, MAX_SYMMETRIC_DEGREE};
use crate::round::{sig12, sig12_string};
use crate::subset::GroupSubset;

pub const FAMILIES: [&str; 5] = ["cyclic", "dihedral", "symmetric", "elementary", "product"];

/// Largest order a table row may ask for.
pub const TABLE_MAX_ORDER: u64 = 1 << 20;

fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|&d| n.is_multiple_of(d))?;
    let mut m = n;
    let mut d = 0;
    while m.is_multiple_of(p) {
        m /= p;
        d += 1;
    }
    (m == 1).then_some((p, d))
}

/// Members of a built-in family with order exactly `n`. Products are
/// `C_a x C_b` with `2 <= a <= b`.
pub fn family_groups(family: &str, n: u64) -> Result<Vec<FiniteGroup>> {
    Ok(match family {
        "cyclic" if n >= 1 => vec![FiniteGroup::cyclic(n)?],
        "dihedral" if n >= 2 && n.is_multiple_of(2) => vec![FiniteGroup::dihedral(n / 2)?],
        "symmetric" => {
            let mut f = 1u64;
            let mut out = Vec::new();
            for m in 1..=MAX_SYMMETRIC_DEGREE {
                f *= m as u64;
                if f == n {
                    out.push(FiniteGroup::symmetric(m)?);
                }
            }
            out
        }
        "elementary" => match prime_power(n) {
            Some((p, d)) => vec![FiniteGroup::elementary_abelian(p, d)?],
            None => Vec::new(),
        },
        "product" => {
            let mut out = Vec::new();
            for a in (2..).take_while(|a| a * a <= n) {
                if n.is_multiple_of(a) {
                    out.push(FiniteGroup::product(&FiniteGroup::cyclic(a)?, &FiniteGroup::cyclic(n / a)?)?);
                }
            }
            out
        }
        "cyclic" | "dihedral" => Vec::new(),
        other => {
            return Err(Error::parse(
                other,
                format!("unknown family; expected one of {}", FAMILIES.join(", ")),
            ))
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub group: String,
    pub n: u64,
    pub k: u32,
    pub lower: f64,
    pub exact: Option<usize>,
    pub achieved: Option<usize>,
    pub upper: f64,
}

/// Size of a verified randomized `k`-covering set: the union of an
/// intersecting family, taken from the covering construction when its
/// precondition holds.
fn achieved(g: &FiniteGroup, k: u32, seed: u64, opts: &ConstructOptions) -> Result<Option<usize>> {
    let n = g.order();
    if covering_condition(n, k) {
        return match construct_k_covering(g, k, seed, opts) {
            Ok(c) if c.verdict.holds => Ok(Some(c.set.len())),
            Ok(_) | Err(Error::AttemptsExhausted { .. }) => Ok(None),
            Err(e) => Err(e),
        };
    }
    if !feasibility(n, k)? {
        return Ok(None);
    }
    match construct_intersecting_family(g, k, seed, opts) {
        Ok(f) => Ok(Some(
            f.subsets.iter().fold(GroupSubset::empty(g), |acc, x| acc.union(x)).len(),
        )),
        Err(Error::AttemptsExhausted { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn table_row(g: &FiniteGroup, k: u32, seed: u64, opts: &ConstructOptions) -> Result<TableRow> {
    let n = g.order();
    let (lower, upper) = cov_bounds(n, k)?;
    let exact = if n <= EXACT_COV_MAX_ORDER && k as u64 <= n {
        Some(exact_cov(g, k)?)
    } else {
        None
    };
    Ok(TableRow {
        group: g.descriptor(),
        n,
        k,
        lower: sig12(lower),
        exact,
        achieved: achieved(g, k, seed, opts)?,
        upper: sig12(upper),
    })
}

/// One row per group and `k`; orders below 3 are skipped.
pub fn cov_table(families: &[String], orders: &[u64], ks: &[u32], seed: u64, opts: &ConstructOptions) -> Result<Vec<TableRow>> {
    if let Some(&n) = orders.iter().find(|&&n| n > TABLE_MAX_ORDER) {
        return Err(Error::Precondition(format!("order {n} above the table limit {TABLE_MAX_ORDER}")));
    }
    if ks.contains(&0) {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    let mut rows = Vec::new();
    for family in families {
        for &n in orders.iter().filter(|&&n| n >= 3) {
            for g in family_groups(family, n)? {
                for &k in ks {
                    rows.push(table_row(&g, k, seed, opts)?);
                }
            }
        }
    }
    Ok(rows)
}

pub fn to_csv(rows: &[TableRow]) -> String {
    let mut out = String::from("group,n,k,lower,exact,achieved,upper\n");
    let opt = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.group,
            r.n,
            r.k,
            sig12_string(r.lower),
            opt(r.exact),
            opt(r.achieved),
            sig12_string(r.upper)
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families_by_order() {
        assert_eq!(family_groups("symmetric", 24).unwrap()[0].descriptor(), "S4");
        assert_eq!(family_groups("elementary", 16).unwrap()[0].descriptor(), "EA(2,4)");
        assert!(family_groups("elementary", 12).unwrap().is_empty());
        assert!(family_groups("dihedral", 7).unwrap().is_empty());
        let p: Vec<String> = family_groups("product", 12).unwrap().iter().map(|g| g.descriptor()).collect();
        assert_eq!(p, vec!["C2xC6", "C3xC4"]);
        assert!(family_groups("quaternion", 8).is_err());
    }

    #[test]
    fn spot_rows() {
        let opts = ConstructOptions::default();
        let c7 = table_row(&FiniteGroup::cyclic(7).unwrap(), 2, 0, &opts).unwrap();
        assert_eq!(sig12_string(c7.lower), "2.64575131106");
        assert_eq!(c7.exact, Some(3));
        let c4 = table_row(&FiniteGroup::cyclic(4).unwrap(), 2, 0, &opts).unwrap();
        assert_eq!(c4.lower, 2.0);
        assert_eq!(c4.exact, Some(3));
        let big = table_row(&FiniteGroup::cyclic(1024).unwrap(), 2, 0, &opts).unwrap();
        assert!(big.achieved.unwrap() <= 512);
        let formula = 2.0 * crate::covering::size_threshold(1024, 2);
        assert_eq!(big.upper, sig12(formula.min(1024.0)));
        assert!(big.exact.is_none());
    }

    #[test]
    fn csv_layout() {
        let rows = cov_table(&["cyclic".into()], &[2, 7], &[2], 0, &ConstructOptions::default()).unwrap();
        let csv = to_csv(&rows);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("group,n,k,lower,exact,achieved,upper"));
        let row = lines.next().unwrap();
        assert!(row.starts_with("C7,7,2,2.64575131106,3,"), "{row}");
        assert_eq!(lines.next(), None);
    }
}
