//! Monomials in four variables, packed into one machine word.
//!
//! Exponents occupy 16 bits each with the first variable in the high bits, so
//! comparing packed words is lexicographic comparison of exponent vectors.
//! Within a fixed degree, monomials are listed in decreasing lexicographic
//! order (`x^d, x^(d-1) y, ..., t^d`), and [`Monomial::rank_in_degree`] gives
//! the position in that listing in constant time.

use std::fmt;

pub const NVARS: usize = 4;
const BITS: u32 = 16;
const MASK: u64 = (1 << BITS) - 1;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(u64);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn new(exps: [u32; NVARS]) -> Self {
        let mut packed = 0u64;
        for e in exps {
            assert!(u64::from(e) <= MASK, "exponent {e} too large");
            packed = (packed << BITS) | u64::from(e);
        }
        Monomial(packed)
    }

    pub fn var(i: usize) -> Self {
        let mut exps = [0; NVARS];
        exps[i] = 1;
        Monomial::new(exps)
    }

    #[inline]
    pub fn exponent(self, i: usize) -> u32 {
        ((self.0 >> (BITS * (NVARS - 1 - i) as u32)) & MASK) as u32
    }

    pub fn exponents(self) -> [u32; NVARS] {
        [self.exponent(0), self.exponent(1), self.exponent(2), self.exponent(3)]
    }

    #[inline]
    pub fn degree(self) -> u32 {
        (0..NVARS).map(|i| self.exponent(i)).sum()
    }

    /// Exponent-wise sum; exponents must not overflow 16 bits.
    #[inline]
    pub fn mul(self, other: Monomial) -> Monomial {
        debug_assert!((0..NVARS).all(|i| self.exponent(i) + other.exponent(i) <= MASK as u32));
        Monomial(self.0 + other.0)
    }

    pub fn divides(self, other: Monomial) -> bool {
        (0..NVARS).all(|i| self.exponent(i) <= other.exponent(i))
    }

    /// `other / self`, if `self` divides `other`.
    pub fn quotient_of(self, other: Monomial) -> Option<Monomial> {
        self.divides(other).then(|| Monomial(other.0 - self.0))
    }

    /// Position of `self` among the monomials of its degree in decreasing lex order.
    #[inline]
    pub fn rank_in_degree(self) -> usize {
        let [a, b, c, _] = self.exponents().map(|e| e as usize);
        let t = self.degree() as usize;
        binom3(t - a + 2) + binom2(t - a - b + 1) + (t - a - b - c)
    }
}

#[inline]
fn binom2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

#[inline]
fn binom3(n: usize) -> usize {
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

/// Number of monomials of degree `t` in four variables, `C(t+3, 3)`; zero for `t < 0`.
pub fn count_in_degree(t: i64) -> usize {
    if t < 0 {
        0
    } else {
        binom3(t as usize + 3)
    }
}

/// All monomials of degree `t` in decreasing lex order.
pub fn monomials_of_degree(t: u32) -> Vec<Monomial> {
    let mut out = Vec::with_capacity(count_in_degree(t as i64));
    for a in (0..=t).rev() {
        for b in (0..=t - a).rev() {
            for c in (0..=t - a - b).rev() {
                out.push(Monomial::new([a, b, c, t - a - b - c]));
            }
        }
    }
    out
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Monomial{:?}", self.exponents())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listing_is_decreasing_and_ranked() {
        for t in 0..12 {
            let mons = monomials_of_degree(t);
            assert_eq!(mons.len(), count_in_degree(t as i64));
            assert!(mons.windows(2).all(|w| w[0] > w[1]));
            for (i, m) in mons.iter().enumerate() {
                assert_eq!(m.rank_in_degree(), i);
                assert_eq!(m.degree(), t);
            }
        }
        assert_eq!(count_in_degree(-1), 0);
        assert_eq!(count_in_degree(7), 120);
    }

    #[test]
    fn arithmetic() {
        let x2y = Monomial::new([2, 1, 0, 0]);
        let xy = Monomial::new([1, 1, 0, 0]);
        assert_eq!(xy.mul(Monomial::var(0)), x2y);
        assert!(xy.divides(x2y));
        assert!(!x2y.divides(xy));
        assert_eq!(xy.quotient_of(x2y), Some(Monomial::var(0)));
        assert_eq!(Monomial::var(3).exponents(), [0, 0, 0, 1]);
    }
}
