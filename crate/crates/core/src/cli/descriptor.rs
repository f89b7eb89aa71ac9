//! Parsing of group, tower, mode and list arguments.

use crate::covering::{VerifyMode, DEFAULT_TRIALS};
use crate::error::{Error, Result};
use crate::group::{Element, FiniteGroup};
use crate::tower::TowerSpec;

fn number<T: std::str::FromStr>(token: &str, whole: &str) -> Result<T> {
    token
        .trim()
        .parse()
        .map_err(|_| Error::parse(whole, format!("`{token}` is not a non-negative integer")))
}

/// Splits on `sep` outside parentheses.
fn split_top(s: &str, sep: char) -> Result<Vec<&str>> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::parse(s, "unbalanced parentheses"));
                }
            }
            c if c == sep && depth == 0 => {
                parts.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::parse(s, "unbalanced parentheses"));
    }
    parts.push(&s[start..]);
    Ok(parts)
}

/// `C12`, `D5`, `S4`, `EA(2,3)`, and products such as `C2xC3` or `(C2xC3)xS3`.
pub fn parse_group(s: &str) -> Result<FiniteGroup> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::parse(s, "empty group descriptor"));
    }
    let factors = split_top(t, 'x')?;
    if factors.len() > 1 {
        let mut g = parse_group(factors[0])?;
        for f in &factors[1..] {
            g = FiniteGroup::product(&g, &parse_group(f)?)?;
        }
        return Ok(g);
    }
    if let Some(inner) = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        return parse_group(inner);
    }
    let named = |r: Result<FiniteGroup>| r.map_err(|e| Error::parse(t, e.to_string()));
    if let Some(args) = t.strip_prefix("EA(").and_then(|r| r.strip_suffix(')')) {
        let [p, d] = args.split(',').collect::<Vec<_>>()[..] else {
            return Err(Error::parse(t, "expected EA(p,d)"));
        };
        return named(FiniteGroup::elementary_abelian(number(p, t)?, number(d, t)?));
    }
    let (head, rest) = t.split_at(1);
    match head {
        "C" => named(FiniteGroup::cyclic(number(rest, t)?)),
        "D" => named(FiniteGroup::dihedral(number(rest, t)?)),
        "S" => named(FiniteGroup::symmetric(number(rest, t)?)),
        _ => Err(Error::parse(t, "unknown group family; expected C<n>, D<m>, S<m>, EA(p,d) or a product AxB")),
    }
}

/// `tower:n_0,n_1,…`
pub fn parse_tower(s: &str) -> Result<TowerSpec> {
    let t = s.trim();
    let Some(list) = t.strip_prefix("tower:") else {
        return Err(Error::parse(t, "expected tower:n0,n1,..."));
    };
    let orders = if list.is_empty() {
        Vec::new()
    } else {
        list.split(',').map(|x| number(x, t)).collect::<Result<Vec<u64>>>()?
    };
    TowerSpec::new(&orders).map_err(|e| match e {
        Error::InvalidGroup(r) => Error::parse(t, r),
        other => other,
    })
}

/// Verification mode as written on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeArg {
    Exhaustive,
    Sampled(u64),
}

impl ModeArg {
    pub fn to_mode(self, seed: u64) -> VerifyMode {
        match self {
            ModeArg::Exhaustive => VerifyMode::Exhaustive,
            ModeArg::Sampled(trials) => VerifyMode::Sampled { trials, seed },
        }
    }

    pub fn trials(self) -> u64 {
        match self {
            ModeArg::Exhaustive => DEFAULT_TRIALS,
            ModeArg::Sampled(m) => m,
        }
    }
}

impl std::fmt::Display for ModeArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModeArg::Exhaustive => write!(f, "exhaustive"),
            ModeArg::Sampled(m) => write!(f, "sampled:{m}"),
        }
    }
}

/// `exhaustive` or `sampled:<m>`
pub fn parse_mode(s: &str) -> Result<ModeArg> {
    let t = s.trim();
    if t == "exhaustive" {
        return Ok(ModeArg::Exhaustive);
    }
    if let Some(m) = t.strip_prefix("sampled:") {
        let m: u64 = number(m, t)?;
        if m == 0 {
            return Err(Error::parse(t, "sampled mode needs at least one trial"));
        }
        return Ok(ModeArg::Sampled(m));
    }
    if t == "sampled" {
        return Ok(ModeArg::Sampled(DEFAULT_TRIALS));
    }
    Err(Error::parse(t, "expected exhaustive or sampled:<m>"))
}

/// Comma-separated element indices.
pub fn parse_elements(s: &str) -> Result<Vec<Element>> {
    let t = s.trim();
    if t.is_empty() {
        return Ok(Vec::new());
    }
    t.split(',').map(|x| number(x, t)).collect()
}

/// `a..b` (inclusive) or a comma list.
pub fn parse_range(s: &str) -> Result<Vec<u64>> {
    let t = s.trim();
    if let Some((a, b)) = t.split_once("..") {
        let (a, b): (u64, u64) = (number(a, t)?, number(b.trim_start_matches('='), t)?);
        if a > b {
            return Err(Error::parse(t, "empty range"));
        }
        return Ok((a..=b).collect());
    }
    parse_elements(t)
}
