//! Brute-force Magnus coefficients, independent of [`crate::series`].
//!
//! Letters are plain `(generator, inverse)` pairs and coefficients are `i64`.
//! Every coefficient is obtained by summing over all ways of choosing a power
//! of `x` from each letter factor, which is exponential but obviously correct.

use std::collections::HashMap;

/// Coefficient of `x_{I}` in the expansion of the letter product.
///
/// A positive letter `g` contributes `1` or `x_g`; an inverse letter
/// contributes `(-x_g)^k` for any `k >= 0`.
pub fn coefficient(letters: &[(usize, bool)], index: &[usize]) -> i64 {
    fn go(letters: &[(usize, bool)], index: &[usize]) -> i64 {
        if index.is_empty() {
            return 1;
        }
        if letters.is_empty() {
            return 0;
        }
        let (g, inverse) = letters[0];
        let rest = &letters[1..];
        let mut total = go(rest, index);
        let mut k = 0;
        while k < index.len() && index[k] == g {
            k += 1;
            let sign = if inverse && k % 2 == 1 { -1 } else { 1 };
            total += sign * go(rest, &index[k..]);
            if !inverse {
                break;
            }
        }
        total
    }
    go(letters, index)
}

/// All nonzero coefficients of degree at most `q`, keyed by variable index
/// sequence.
pub fn expansion(letters: &[(usize, bool)], q: usize) -> HashMap<Vec<usize>, i64> {
    let mut out: HashMap<Vec<usize>, i64> = HashMap::new();
    let mut stack: Vec<usize> = Vec::new();
    fn go(
        letters: &[(usize, bool)],
        q: usize,
        sign: i64,
        stack: &mut Vec<usize>,
        out: &mut HashMap<Vec<usize>, i64>,
    ) {
        if letters.is_empty() {
            *out.entry(stack.clone()).or_insert(0) += sign;
            return;
        }
        let (g, inverse) = letters[0];
        let rest = &letters[1..];
        go(rest, q, sign, stack, out);
        let max_power = if inverse { q - stack.len() } else { (q - stack.len()).min(1) };
        for k in 1..=max_power {
            stack.push(g);
            let s = if inverse && k % 2 == 1 { -sign } else { sign };
            go(rest, q, s, stack, out);
        }
        for _ in 0..max_power {
            stack.pop();
        }
    }
    go(letters, q, 1, &mut stack, &mut out);
    out.retain(|_, c| *c != 0);
    out
}

/// Letters of a textual word over generators named `<prefix><k>`, 1-based.
pub fn letters_from_text(prefix: &str, text: &str) -> Vec<(usize, bool)> {
    text.split_whitespace()
        .filter(|t| *t != "1")
        .map(|t| {
            let (name, inverse) = match t.strip_suffix("^-1") {
                Some(n) => (n, true),
                None => (t, false),
            };
            let k: usize = name
                .strip_prefix(prefix)
                .and_then(|d| d.parse().ok())
                .expect("oracle token");
            (k - 1, inverse)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commutator_by_hand() {
        let w = letters_from_text("m", "m1^-1 m2^-1 m1 m2");
        assert_eq!(coefficient(&w, &[0, 1]), 1);
        assert_eq!(coefficient(&w, &[1, 0]), -1);
        assert_eq!(coefficient(&w, &[0]), 0);
        assert_eq!(coefficient(&w, &[]), 1);
        let e = expansion(&w, 2);
        assert_eq!(e.len(), 3);
        assert_eq!(e[&vec![0, 1]], 1);
    }

    #[test]
    fn inverse_letter_series() {
        let w = letters_from_text("m", "m1^-1");
        assert_eq!(coefficient(&w, &[0, 0, 0]), -1);
        assert_eq!(expansion(&w, 3).len(), 4);
    }

    #[test]
    fn both_methods_agree() {
        let w = letters_from_text("m", "m1 m2^-1 m2^-1 m1 m3 m1^-1 m2");
        for (idx, c) in expansion(&w, 4) {
            assert_eq!(coefficient(&w, &idx), c, "{idx:?}");
        }
    }
}
