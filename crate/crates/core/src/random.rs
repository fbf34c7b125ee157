//! Seeded sampling of hypersurfaces and form spaces.
//!
//! All generators take an explicit RNG; callers use `ChaCha8Rng` seeded from
//! a `u64` so that a seed reproduces the same samples on every platform.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::RationalField;
use crate::form::Form;
use crate::koszul::FormSpace;
use crate::monomial::{monomials_of_degree, Monomial};
use crate::ring::GradedHypersurfaceRing;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Dense form of degree `d` with integer coefficients in `[-bound, bound]` and
/// coefficient 1 on the last variable's pure power.
pub fn random_hypersurface<R: Rng>(rng: &mut R, d: u32, bound: i64) -> Form {
    let terms = monomials_of_degree(d).into_iter().map(|m| {
        let c = if m == Monomial::new([0, 0, 0, d]) { 1 } else { rng.gen_range(-bound..=bound) };
        (m, int(c))
    });
    Form::from_terms(d, terms).unwrap()
}

/// Nonzero form of degree `a` with between 1 and `max_terms` terms.
pub fn random_form<R: Rng>(rng: &mut R, a: u32, max_terms: usize, bound: i64) -> Form {
    let monomials = monomials_of_degree(a);
    loop {
        let k = rng.gen_range(1..=max_terms.min(monomials.len()));
        let terms: Vec<_> = monomials
            .choose_multiple(rng, k)
            .map(|m| {
                let mut c = 0;
                while c == 0 {
                    c = rng.gen_range(-bound..=bound);
                }
                (*m, int(c))
            })
            .collect();
        let form = Form::from_terms(a, terms).unwrap();
        if !form.is_zero() {
            return form;
        }
    }
}

fn check_room(ring: &GradedHypersurfaceRing<RationalField>, a: u32, w: usize) -> Result<()> {
    let room = ring.graded_dim(a as i64);
    if w > room {
        return Err(Error::InvalidFormSpace(format!("{w} independent forms of degree {a} do not fit in a space of dimension {room}")));
    }
    Ok(())
}

/// `w` random forms of degree `a`, resampled until independent in `R_a`.
pub fn random_form_space<R: Rng>(
    rng: &mut R,
    ring: &GradedHypersurfaceRing<RationalField>,
    a: u32,
    w: usize,
    max_terms: usize,
) -> Result<FormSpace> {
    check_room(ring, a, w)?;
    loop {
        let forms = (0..w).map(|_| random_form(rng, a, max_terms, 3)).collect();
        if let Ok(space) = FormSpace::new(forms, ring) {
            return Ok(space);
        }
    }
}

/// `w` distinct monomials of degree `a`, independent in `R_a`.
pub fn random_monomial_space<R: Rng>(
    rng: &mut R,
    ring: &GradedHypersurfaceRing<RationalField>,
    a: u32,
    w: usize,
) -> Result<FormSpace> {
    check_room(ring, a, w)?;
    let monomials = monomials_of_degree(a);
    loop {
        let forms = monomials.choose_multiple(rng, w).map(|m| Form::monomial(*m, int(1))).collect();
        if let Ok(space) = FormSpace::new(forms, ring) {
            return Ok(space);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::default_variables;

    #[test]
    fn samples_are_reproducible_and_bounded() {
        let f = random_hypersurface(&mut seeded(1), 4, 3);
        assert_eq!(f, random_hypersurface(&mut seeded(1), 4, 3));
        let ring = GradedHypersurfaceRing::new(RationalField, f, default_variables()).unwrap();
        let s = random_form_space(&mut seeded(2), &ring, 2, 5, 3).unwrap();
        assert_eq!((s.degree(), s.dim()), (2, 5));
        assert!(random_form_space(&mut seeded(2), &ring, 1, 5, 3).is_err());
        assert!(random_monomial_space(&mut seeded(2), &ring, 1, 5).is_err());
        assert_eq!(random_monomial_space(&mut seeded(2), &ring, 1, 4).unwrap().dim(), 4);
    }
}
