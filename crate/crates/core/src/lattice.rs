//! Numerical invariants of sheaves on a K3 surface.
//!
//! A sheaf class is recorded by its rank, first Chern class (a vector in an
//! even lattice) and second Chern number. Everything here is exact integer
//! or rational arithmetic: Euler characteristics, dimensions of moduli of
//! simple sheaves, the syzygy and extension transforms, and the dimension
//! identities relating a family of sheaves to the family of its transforms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Even symmetric bilinear form together with a polarization class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionLattice {
    gram: Vec<Vec<BigInt>>,
    polarization: Vec<BigInt>,
}

impl IntersectionLattice {
    pub fn new(gram: Vec<Vec<BigInt>>, polarization: Vec<BigInt>) -> Result<Self> {
        let n = gram.len();
        if n == 0 {
            return Err(Error::InvalidLattice("gram matrix is empty".into()));
        }
        if gram.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidLattice("gram matrix is not square".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::InvalidLattice(format!("gram matrix is not symmetric at ({i}, {j})")));
                }
            }
            if gram[i][i].is_odd() {
                return Err(Error::InvalidLattice(format!("diagonal entry {i} is odd; the lattice must be even")));
            }
        }
        if polarization.len() != n {
            return Err(Error::InvalidLattice(format!(
                "polarization has length {}, lattice has rank {n}",
                polarization.len()
            )));
        }
        let lattice = IntersectionLattice { gram, polarization };
        if !lattice.pair(&lattice.polarization, &lattice.polarization).is_positive() {
            return Err(Error::InvalidLattice("polarization must have positive self-intersection".into()));
        }
        Ok(lattice)
    }

    /// Rank-one lattice `<2k>` polarized by its generator.
    pub fn rank_one(self_intersection: i64) -> Result<Self> {
        Self::new(vec![vec![self_intersection.into()]], vec![BigInt::one()])
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<BigInt>] {
        &self.gram
    }

    pub fn polarization(&self) -> &[BigInt] {
        &self.polarization
    }

    pub fn pair(&self, a: &[BigInt], b: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                acc += ai * &self.gram[i][j] * bj;
            }
        }
        acc
    }

    pub fn square(&self, a: &[BigInt]) -> BigInt {
        self.pair(a, a)
    }

    /// `L^2`
    pub fn polarization_degree(&self) -> BigInt {
        self.square(&self.polarization)
    }
}

/// Rank, first Chern class and second Chern number of a sheaf class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SheafInvariants {
    #[serde(serialize_with = "crate::io::ser_bigint")]
    pub rank: BigInt,
    #[serde(serialize_with = "crate::io::ser_bigint_vec")]
    pub c1: Vec<BigInt>,
    #[serde(serialize_with = "crate::io::ser_bigint")]
    pub c2: BigInt,
}

impl SheafInvariants {
    pub fn new(rank: BigInt, c1: Vec<BigInt>, c2: BigInt) -> Result<Self> {
        if rank < BigInt::one() {
            return Err(Error::InvalidInvariants(format!("rank must be at least 1, got {rank}")));
        }
        Ok(SheafInvariants { rank, c1, c2 })
    }

    pub fn from_i64(rank: i64, c1: &[i64], c2: i64) -> Result<Self> {
        Self::new(rank.into(), c1.iter().map(|&x| x.into()).collect(), c2.into())
    }

    /// Checks that `c1` lives in `lat` and that `c1^2` is even.
    pub fn validate(&self, lat: &IntersectionLattice) -> Result<()> {
        if self.c1.len() != lat.rank() {
            return Err(Error::InvalidInvariants(format!(
                "c1 has length {}, lattice has rank {}",
                self.c1.len(),
                lat.rank()
            )));
        }
        if self.c1_squared(lat).is_odd() {
            return Err(Error::InvalidInvariants("c1^2 is odd".into()));
        }
        Ok(())
    }

    pub fn c1_squared(&self, lat: &IntersectionLattice) -> BigInt {
        lat.square(&self.c1)
    }
}

/// Whether range preconditions (nonempty Grassmannians) are enforced.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Preconditions {
    #[default]
    Enforced,
    /// Only require that the transformed rank stays positive.
    Formal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DoublingReport {
    #[serde(serialize_with = "crate::io::ser_bigint")]
    pub base_dim: BigInt,
    #[serde(serialize_with = "crate::io::ser_bigint")]
    pub fiber_dim: BigInt,
    #[serde(serialize_with = "crate::io::ser_bigint")]
    pub target_dim: BigInt,
    pub holds: bool,
}

impl DoublingReport {
    fn new(base_dim: BigInt, fiber_dim: BigInt, target_dim: BigInt) -> Self {
        let holds = target_dim == &base_dim + BigInt::from(2) * &fiber_dim;
        DoublingReport { base_dim, fiber_dim, target_dim, holds }
    }
}

/// `chi(E) = 2r + c1^2/2 - c2`
pub fn euler_characteristic(inv: &SheafInvariants, lat: &IntersectionLattice) -> BigInt {
    let c1sq = inv.c1_squared(lat);
    debug_assert!(c1sq.is_even());
    BigInt::from(2) * &inv.rank + c1sq / 2 - &inv.c2
}

/// `chi(E^* (x) E) = 2 r chi(E) - c1^2 - 2 r^2`
pub fn chi_end(inv: &SheafInvariants, lat: &IntersectionLattice) -> BigInt {
    let r = &inv.rank;
    BigInt::from(2) * r * euler_characteristic(inv, lat) - inv.c1_squared(lat) - BigInt::from(2) * r * r
}

/// Dimension of the moduli space of simple sheaves with these invariants.
///
/// Evaluated as `-2r^2 + (1-r) c1^2 + 2 r c2 + 2` and cross-checked against
/// `2 - chi(E^* (x) E)`.
pub fn spl_dim(inv: &SheafInvariants, lat: &IntersectionLattice) -> Result<BigInt> {
    let r = &inv.rank;
    let two = BigInt::from(2);
    let direct = -(&two * r * r) + (BigInt::one() - r) * inv.c1_squared(lat) + &two * r * &inv.c2 + &two;
    let via_chi = &two - chi_end(inv, lat);
    if direct != via_chi {
        return Err(Error::InternalInconsistency(format!(
            "moduli dimension {direct} disagrees with 2 - chi(End) = {via_chi}"
        )));
    }
    Ok(direct)
}

/// Invariants of the kernel of `W (x) O_X -> F` with `dim W = w`.
pub fn syzygy_transform(
    inv: &SheafInvariants,
    lat: &IntersectionLattice,
    w: &BigInt,
    mode: Preconditions,
) -> Result<SheafInvariants> {
    check_w(inv, lat, w, mode)?;
    let c1sq = inv.c1_squared(lat);
    SheafInvariants::new(w - &inv.rank, inv.c1.iter().map(|x| -x).collect(), c1sq - &inv.c2)
}

fn check_w(inv: &SheafInvariants, lat: &IntersectionLattice, w: &BigInt, mode: Preconditions) -> Result<()> {
    let (min, max) = match mode {
        Preconditions::Enforced => (&inv.rank + 2, euler_characteristic(inv, lat)),
        Preconditions::Formal => (&inv.rank + 1, w.max(&(&inv.rank + 1)).clone()),
    };
    if w < &min || w > &max {
        return Err(Error::WNotInRange { w: w.to_string(), min: min.to_string(), max: max.to_string() });
    }
    Ok(())
}

/// `u = h^1(F^*) = -chi(F)` on the locus where `F` has no sections and no co-sections.
pub fn extension_space_dim(inv: &SheafInvariants, lat: &IntersectionLattice) -> BigInt {
    -euler_characteristic(inv, lat)
}

fn check_v(inv: &SheafInvariants, lat: &IntersectionLattice, v: &BigInt, mode: Preconditions) -> Result<()> {
    let (min, max) = match mode {
        Preconditions::Enforced => (BigInt::one(), extension_space_dim(inv, lat)),
        Preconditions::Formal => (BigInt::one() - &inv.rank, v.max(&(BigInt::one() - &inv.rank)).clone()),
    };
    if v < &min || v > &max {
        return Err(Error::VNotInRange { v: v.to_string(), min: min.to_string(), max: max.to_string() });
    }
    Ok(())
}

/// Invariants of an extension `0 -> V (x) O_X -> E -> F -> 0` with `dim V = v`.
pub fn extension_transform(
    inv: &SheafInvariants,
    lat: &IntersectionLattice,
    v: &BigInt,
    mode: Preconditions,
) -> Result<SheafInvariants> {
    check_v(inv, lat, v, mode)?;
    SheafInvariants::new(&inv.rank + v, inv.c1.clone(), inv.c2.clone())
}

/// Dimension of the Grassmannian of `w`-planes in `H^0(F)`, `w (chi(F) - w)`.
pub fn syzygy_fiber_dim(
    inv: &SheafInvariants,
    lat: &IntersectionLattice,
    w: &BigInt,
    mode: Preconditions,
) -> Result<BigInt> {
    check_w(inv, lat, w, mode)?;
    Ok(w * (euler_characteristic(inv, lat) - w))
}

/// Dimension of the Grassmannian of `v`-planes in `H^1(F^*)`, `v (u - v)`.
pub fn extension_fiber_dim(
    inv: &SheafInvariants,
    lat: &IntersectionLattice,
    v: &BigInt,
    mode: Preconditions,
) -> Result<BigInt> {
    check_v(inv, lat, v, mode)?;
    Ok(v * (extension_space_dim(inv, lat) - v))
}

pub fn doubling_check_syzygy(
    inv: &SheafInvariants,
    lat: &IntersectionLattice,
    w: &BigInt,
    mode: Preconditions,
) -> Result<DoublingReport> {
    let target = syzygy_transform(inv, lat, w, mode)?;
    Ok(DoublingReport::new(
        spl_dim(inv, lat)?,
        syzygy_fiber_dim(inv, lat, w, mode)?,
        spl_dim(&target, lat)?,
    ))
}

pub fn doubling_check_extension(
    inv: &SheafInvariants,
    lat: &IntersectionLattice,
    v: &BigInt,
    mode: Preconditions,
) -> Result<DoublingReport> {
    let target = extension_transform(inv, lat, v, mode)?;
    Ok(DoublingReport::new(
        spl_dim(inv, lat)?,
        extension_fiber_dim(inv, lat, v, mode)?,
        spl_dim(&target, lat)?,
    ))
}

/// `mu_L = (c1 . L) / r`
pub fn slope(inv: &SheafInvariants, lat: &IntersectionLattice) -> BigRational {
    BigRational::new(lat.pair(&inv.c1, lat.polarization()), inv.rank.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quartic() -> IntersectionLattice {
        IntersectionLattice::rank_one(4).unwrap()
    }

    fn inv(r: i64, c1: &[i64], c2: i64) -> SheafInvariants {
        SheafInvariants::from_i64(r, c1, c2).unwrap()
    }

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    /// Two skew lines on a quartic: H^2 = 4, H.C_i = 1, C_i^2 = -2.
    fn skew_lines() -> IntersectionLattice {
        let g = |rows: [[i64; 3]; 3]| rows.iter().map(|r| r.iter().map(|&x| big(x)).collect()).collect();
        IntersectionLattice::new(g([[4, 1, 1], [1, -2, 0], [1, 0, -2]]), vec![big(1), big(0), big(0)]).unwrap()
    }

    #[test]
    fn lattice_validation() {
        assert!(IntersectionLattice::rank_one(3).is_err());
        assert!(IntersectionLattice::rank_one(-2).is_err());
        assert!(IntersectionLattice::rank_one(0).is_err());
        let asym = vec![vec![big(2), big(1)], vec![big(0), big(2)]];
        assert!(matches!(
            IntersectionLattice::new(asym, vec![big(1), big(0)]),
            Err(Error::InvalidLattice(_))
        ));
        let neg_def = vec![vec![big(-2), big(0)], vec![big(0), big(-2)]];
        assert!(IntersectionLattice::new(neg_def, vec![big(1), big(0)]).is_err());
        assert!(SheafInvariants::from_i64(0, &[1], 0).is_err());
        assert!(inv(1, &[1, 2], 0).validate(&quartic()).is_err());
    }

    #[test]
    fn euler_characteristic_examples() {
        let lat = quartic();
        assert_eq!(euler_characteristic(&inv(1, &[1], 0), &lat), big(4));
        assert_eq!(euler_characteristic(&inv(1, &[0], 0), &lat), big(2));
        assert_eq!(euler_characteristic(&inv(1, &[7], 0), &lat), big(100));
    }

    #[test]
    fn chi_end_and_spl_dim_examples() {
        let lat = quartic();
        assert_eq!(chi_end(&inv(1, &[0], 0), &lat), big(2));
        assert_eq!(chi_end(&inv(2, &[-1], 4), &lat), big(-4));
        assert_eq!(chi_end(&inv(1, &[7], 0), &lat), big(2));
        assert_eq!(spl_dim(&inv(2, &[-1], 4), &lat).unwrap(), big(6));
        assert_eq!(spl_dim(&inv(1, &[5], 0), &lat).unwrap(), big(0));
        assert_eq!(spl_dim(&inv(4, &[-7], 196), &lat).unwrap(), big(950));
    }

    #[test]
    fn syzygy_transform_examples() {
        let lat = quartic();
        let m = syzygy_transform(&inv(1, &[1], 0), &lat, &big(3), Preconditions::Enforced).unwrap();
        assert_eq!(m, inv(2, &[-1], 4));
        let s = syzygy_transform(&inv(1, &[7], 0), &lat, &big(5), Preconditions::Enforced).unwrap();
        assert_eq!(s, inv(4, &[-7], 196));
        let err = syzygy_transform(&inv(1, &[1], 0), &lat, &big(2), Preconditions::Enforced).unwrap_err();
        assert_eq!(err, Error::WNotInRange { w: "2".into(), min: "3".into(), max: "4".into() });
        assert!(syzygy_transform(&inv(1, &[1], 0), &lat, &big(5), Preconditions::Enforced).is_err());
        // formal mode drops both bounds that encode nonemptiness
        assert!(syzygy_transform(&inv(1, &[1], 0), &lat, &big(9), Preconditions::Formal).is_ok());
        assert!(syzygy_transform(&inv(1, &[1], 0), &lat, &big(2), Preconditions::Formal).is_ok());
        assert!(syzygy_transform(&inv(1, &[1], 0), &lat, &big(1), Preconditions::Formal).is_err());
    }

    #[test]
    fn extension_transform_examples() {
        let lat = skew_lines();
        let l2 = inv(1, &[0, 2, -2], 0);
        assert_eq!(l2.c1_squared(&lat), big(-16));
        let e = extension_transform(&l2, &lat, &big(1), Preconditions::Enforced).unwrap();
        assert_eq!(e, inv(2, &[0, 2, -2], 0));
        assert!(matches!(
            extension_transform(&l2, &lat, &big(7), Preconditions::Enforced),
            Err(Error::VNotInRange { .. })
        ));
        let u = extension_space_dim(&l2, &lat);
        assert_eq!(u, big(6));
        assert_eq!(extension_transform(&l2, &lat, &u, Preconditions::Enforced).unwrap().rank, big(7));
        assert_eq!(extension_fiber_dim(&l2, &lat, &u, Preconditions::Enforced).unwrap(), big(0));
        assert_eq!(extension_fiber_dim(&l2, &lat, &big(1), Preconditions::Enforced).unwrap(), big(5));

        let l1 = inv(1, &[0, 1, -1], 0);
        assert!(matches!(
            extension_fiber_dim(&l1, &lat, &big(1), Preconditions::Enforced),
            Err(Error::VNotInRange { .. })
        ));
    }

    #[test]
    fn fiber_dims() {
        let lat = quartic();
        assert_eq!(syzygy_fiber_dim(&inv(1, &[7], 0), &lat, &big(5), Preconditions::Enforced).unwrap(), big(475));
        assert_eq!(syzygy_fiber_dim(&inv(1, &[1], 0), &lat, &big(3), Preconditions::Enforced).unwrap(), big(3));
        assert_eq!(syzygy_fiber_dim(&inv(1, &[1], 0), &lat, &big(4), Preconditions::Enforced).unwrap(), big(0));
    }

    #[test]
    fn doubling_reports() {
        let lat = quartic();
        let toy = doubling_check_syzygy(&inv(1, &[1], 0), &lat, &big(3), Preconditions::Enforced).unwrap();
        assert_eq!((toy.base_dim, toy.fiber_dim, toy.target_dim, toy.holds), (big(0), big(3), big(6), true));
        let s = doubling_check_syzygy(&inv(1, &[7], 0), &lat, &big(5), Preconditions::Enforced).unwrap();
        assert_eq!((s.base_dim, s.fiber_dim, s.target_dim, s.holds), (big(0), big(475), big(950), true));

        let lat = skew_lines();
        for (n, fiber, target) in [(2, 5, 10), (3, 15, 30)] {
            let ln = inv(1, &[0, n, -n], 0);
            let r = doubling_check_extension(&ln, &lat, &big(1), Preconditions::Enforced).unwrap();
            assert_eq!((r.base_dim, r.fiber_dim, r.target_dim, r.holds), (big(0), big(fiber), big(target), true));
        }
        let l2 = inv(1, &[0, 2, -2], 0);
        let r = doubling_check_extension(&l2, &lat, &big(6), Preconditions::Enforced).unwrap();
        assert_eq!((r.fiber_dim.clone(), r.target_dim == r.base_dim, r.holds), (big(0), true, true));
    }

    #[test]
    fn slopes() {
        let lat = quartic();
        assert_eq!(slope(&inv(4, &[-7], 196), &lat), BigRational::from_integer(big(-7)));
        assert_eq!(slope(&inv(3, &[0], 5), &lat), BigRational::zero());
        assert_eq!(slope(&inv(2, &[-1], 4), &lat), BigRational::from_integer(big(-2)));
    }
}
