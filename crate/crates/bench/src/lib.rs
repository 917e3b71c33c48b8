//! Benchmark inputs shared by the criterion benches.

use ndviz_core::{word, Symbol};

/// `(a b)^n b^m` over the `ab* ∪ (ab)*b*` machine's alphabet.
pub fn ab_word(n: usize, m: usize) -> Vec<Symbol> {
    let text = "a b ".repeat(n) + &"b ".repeat(m);
    word(&text)
}

/// A balanced `a`/`b` word of length `2n` in which the pushdown machine has
/// many competing computations.
pub fn balanced_word(n: usize) -> Vec<Symbol> {
    let text = "a b b a ".repeat(n / 2) + if n % 2 == 1 { "a b" } else { "" };
    word(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words() {
        assert_eq!(ab_word(2, 1).len(), 5);
        assert_eq!(balanced_word(3).len(), 6);
        let a = balanced_word(5).iter().filter(|s| s.as_str() == "a").count();
        assert_eq!(a, 5);
    }
}
