/// Rounds to 12 significant digits, the precision every document and table uses.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// `x` at 12 significant digits without exponent noise, for CSV cells.
pub fn sig12_string(x: f64) -> String {
    let r = sig12(x);
    if r == r.trunc() && r.abs() < 1e15 {
        format!("{r:.1}")
    } else {
        format!("{r}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(sig12(2.6457513110645907), 2.64575131106);
        assert_eq!(sig12(0.0), 0.0);
        assert_eq!(sig12(164.23077831592), 164.230778316);
        assert_eq!(sig12_string(2.0), "2.0");
        assert_eq!(sig12_string(1.0 / 3.0), "0.333333333333");
        assert_eq!(sig12_string(1e-7), "0.0000001");
    }
}
