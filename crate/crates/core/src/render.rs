//! Text rendering shared by polynomials, series and operators.

use num_traits::{One, Signed, Zero};

use crate::rational::{to_display_string, Rational};

/// `x^k` with `x` for `k = 1`, nothing for `k = 0`, `1/x^k` style for negatives
/// (the caller folds the `1/` into the coefficient, see [`join_terms`]).
fn monomial(var: &str, k: i64) -> String {
    match k {
        0 => String::new(),
        1 => var.to_string(),
        _ if k > 0 => format!("{var}^{k}"),
        -1 => var.to_string(),
        _ => format!("{var}^{}", -k),
    }
}

fn magnitude(c: &Rational, var: &str, k: i64) -> String {
    let c = c.abs();
    let mono = monomial(var, k);
    if k < 0 {
        // c / x^j
        let num = c.numer().to_string();
        return if c.is_integer() {
            format!("{num}/{mono}")
        } else {
            format!("{num}/({}{mono})", c.denom())
        };
    }
    if mono.is_empty() {
        to_display_string(&c)
    } else if c.is_one() {
        mono
    } else if c.is_integer() {
        format!("{c}{mono}")
    } else {
        format!("({}){mono}", to_display_string(&c))
    }
}

/// Joins `(coefficient, exponent)` pairs, in the order given, into
/// `a x^k + b x^j - ...`. Zero coefficients are skipped; an empty sum prints `0`.
pub fn join_terms<'a, I>(terms: I, var: &str) -> String
where
    I: IntoIterator<Item = (&'a Rational, i64)>,
{
    let mut out = String::new();
    for (c, k) in terms {
        if c.is_zero() {
            continue;
        }
        let body = magnitude(c, var, k);
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn renders_mixed_terms() {
        let cs = [int(320), int(-1440), int(1)];
        let s = join_terms([(&cs[0], 6), (&cs[1], 4), (&cs[2], 0)], "x");
        assert_eq!(s, "320x^6 - 1440x^4 + 1");
        let cs = [rat(1, 3), int(-2)];
        assert_eq!(join_terms([(&cs[0], 3), (&cs[1], -1)], "x"), "(1/3)x^3 - 2/x");
        assert_eq!(join_terms(std::iter::empty(), "x"), "0");
    }
}
