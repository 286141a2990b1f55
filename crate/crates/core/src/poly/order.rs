use std::cmp::Ordering;

use super::Monomial;

/// Term orders. Variables rank in declaration order: `x0 > x1 > ...`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum MonomialOrder {
    Lex,
    GrevLex,
    /// Elimination order: compare the eliminated variables first (grevlex
    /// within the block), then the remaining ones (grevlex).
    Block { eliminate: Vec<bool> },
}

impl MonomialOrder {
    pub fn block(nvars: usize, eliminate: &[usize]) -> Self {
        let mut mask = vec![false; nvars];
        for &i in eliminate {
            mask[i] = true;
        }
        MonomialOrder::Block { eliminate: mask }
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let (ea, eb) = (a.exponents(), b.exponents());
        match self {
            MonomialOrder::Lex => ea.cmp(eb),
            MonomialOrder::GrevLex => grevlex(ea, eb, |_| true),
            MonomialOrder::Block { eliminate } => grevlex(ea, eb, |i| eliminate[i])
                .then_with(|| grevlex(ea, eb, |i| !eliminate[i])),
        }
    }
}

fn grevlex(a: &[u32], b: &[u32], keep: impl Fn(usize) -> bool) -> Ordering {
    let deg = |e: &[u32]| -> u64 {
        e.iter()
            .enumerate()
            .filter(|(i, _)| keep(*i))
            .map(|(_, &x)| x as u64)
            .sum()
    };
    match deg(a).cmp(&deg(b)) {
        Ordering::Equal => {}
        o => return o,
    }
    for i in (0..a.len()).rev() {
        if !keep(i) {
            continue;
        }
        match a[i].cmp(&b[i]) {
            Ordering::Equal => continue,
            // a smaller exponent in the last variable wins
            o => return o.reverse(),
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e.to_vec())
    }

    #[test]
    fn grevlex_textbook_cases() {
        let o = MonomialOrder::GrevLex;
        // x^2 > xy > y^2 > xz > yz > z^2 in degree 2
        let seq = [
            m(&[2, 0, 0]),
            m(&[1, 1, 0]),
            m(&[0, 2, 0]),
            m(&[1, 0, 1]),
            m(&[0, 1, 1]),
            m(&[0, 0, 2]),
        ];
        for w in seq.windows(2) {
            assert_eq!(o.cmp(&w[0], &w[1]), Ordering::Greater);
        }
        // x y^5 z^2 > x^4 y z^3 under grevlex, reverse under lex
        assert_eq!(o.cmp(&m(&[1, 5, 2]), &m(&[4, 1, 3])), Ordering::Greater);
        assert_eq!(
            MonomialOrder::Lex.cmp(&m(&[1, 5, 2]), &m(&[4, 1, 3])),
            Ordering::Less
        );
    }

    #[test]
    fn block_order_eliminates_first_block() {
        let o = MonomialOrder::block(3, &[2]);
        // z beats any power of x, y
        assert_eq!(o.cmp(&m(&[0, 0, 1]), &m(&[5, 5, 0])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[2, 0, 1]), &m(&[0, 1, 1])), Ordering::Greater);
    }
}
