//! Cohomological stability of syzygy bundles `S = ker(W (x) O_X -> O_X(a))`
//! on a hypersurface polarized by its hyperplane class.
//!
//! `S` has rank `w - 1` and slope `mu = -a d / (w - 1)`. It is cohomologically
//! stable when `H^0(wedge^q S (x) F^*) = 0` for every `0 < q < w - 1` and every
//! line bundle `F` with `F.L >= q mu`. Taking `F = O_X(m)`, the binding case is
//! the least admissible `m`, namely `m_q = ceil(q mu / d)`; larger `m` inject
//! into it by multiplying with a section of `O_X(m - m_q)`.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::koszul::{BasepointStatus, FormSpace, KernelBackend, KernelDim};

pub const PICARD_NOTE: &str = "Kernel dimensions are exact for the given hypersurface. \
The conclusion that a cohomologically stable bundle is slope-stable for O_X(1) assumes \
Pic(X) is generated by O_X(1), i.e. every line bundle is a multiple of the hyperplane class; \
smoothness of the hypersurface is assumed and not checked.";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistCheck {
    pub q: usize,
    /// Least `m` with `m d >= q mu`.
    pub m_q: i64,
    /// `-m_q`: the check is `H^0(wedge^q S(twist)) = 0`.
    pub twist: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistSchedule {
    pub a: u32,
    pub w: usize,
    pub d: u32,
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub mu: BigRational,
    pub checks: Vec<TwistCheck>,
}

/// `mu(S) = -a d / (w - 1)`
pub fn syzygy_slope(a: u32, w: usize, d: u32) -> BigRational {
    BigRational::new(-BigInt::from(a) * d, BigInt::from(w - 1))
}

pub fn twist_schedule(a: u32, w: usize, d: u32) -> Result<TwistSchedule> {
    if w < 3 || a < 1 || d < 1 {
        return Err(Error::InvalidInput(format!("twist schedule needs w >= 3, a >= 1, d >= 1 (got a = {a}, w = {w}, d = {d})")));
    }
    let mu = syzygy_slope(a, w, d);
    let checks = (1..w - 1)
        .map(|q| {
            let bound = &mu * BigInt::from(q) / BigInt::from(d);
            let m_q: i64 = bound.ceil().to_integer().try_into().expect("twist fits in i64");
            TwistCheck { q, m_q, twist: u32::try_from(-m_q).expect("slope is negative") }
        })
        .collect();
    Ok(TwistSchedule { a, w, d, mu, checks })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    CohomologicallyStable,
    /// Some scheduled kernel is nonzero and no destabilizing section was found.
    NotCohomologicallyStable,
    /// A line subbundle of strictly larger slope was found.
    Unstable,
    /// A line subbundle of equal slope was found.
    StrictlySemistableCandidate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DestabilizerReport {
    /// The subbundle is `O_X(-m)`.
    pub m: u32,
    pub h0: usize,
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub sub_slope: BigRational,
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub mu: BigRational,
    pub verdict: Verdict,
}

/// Looks for `O_X(-m) -> S` with `m = 1 ..= floor(a / (w - 1))`, the only
/// twists whose slope `-m d` can reach `mu`. Returns the first hit.
pub fn destabilizing_search(backend: &KernelBackend, space: &FormSpace) -> Result<Option<DestabilizerReport>> {
    let (a, w, d) = (space.degree(), space.dim(), backend.degree());
    let mu = syzygy_slope(a, w, d);
    let m_max = a / (w as u32 - 1);
    for m in 1..=m_max {
        let h0 = backend.h0_wedge_syzygy(space, 1, m)?;
        if h0.dim > 0 {
            let sub_slope = BigRational::from_integer(-BigInt::from(m) * d);
            let verdict = if sub_slope > mu { Verdict::Unstable } else { Verdict::StrictlySemistableCandidate };
            return Ok(Some(DestabilizerReport { m, h0: h0.dim, sub_slope, mu, verdict }));
        }
    }
    Ok(None)
}

/// `max(w a, 3a + d - 3)`.
///
/// If `W` has no base points on the surface, three general members of `W`
/// together with `f` form a regular sequence, and the quotient by a complete
/// intersection of degrees `a, a, a, d` vanishes from degree `3a + d - 3` on.
/// So a base-point free `W` is always certified within this bound.
pub fn default_basepoint_bound(a: u32, w: usize, d: u32) -> u32 {
    (a * w as u32).max(3 * a + d - 3)
}

#[derive(Clone, Debug, Default)]
pub struct StabilityOptions {
    /// Largest degree tried by the base-point check; defaults to [`default_basepoint_bound`].
    pub max_degree: Option<u32>,
    /// Rank of the target bundle of the evaluation map; only 1 is supported.
    pub target_rank: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SurfaceSummary {
    pub variables: Vec<String>,
    pub hypersurface: String,
    pub degree: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct FormSpaceSummary {
    pub degree: u32,
    pub forms: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilityCertificate {
    pub surface: SurfaceSummary,
    pub form_space: FormSpaceSummary,
    pub rank: usize,
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub mu: BigRational,
    pub schedule: TwistSchedule,
    pub checks: Vec<KernelDim>,
    pub kernel_dims: Vec<usize>,
    pub basepoints: BasepointStatus,
    pub destabilizer: Option<DestabilizerReport>,
    /// `None` when base-point freeness could not be certified.
    pub verdict: Option<Verdict>,
    pub warnings: Vec<String>,
    pub picard_assumption_note: String,
    pub prime: Option<u64>,
    /// Wall-clock time per scheduled check, in schedule order.
    #[serde(skip)]
    pub timings: Vec<Duration>,
}

impl StabilityCertificate {
    pub fn is_cohomologically_stable(&self) -> bool {
        self.kernel_dims.iter().all(|&k| k == 0)
    }
}

pub fn check_cohomological_stability(
    backend: &KernelBackend,
    space: &FormSpace,
    options: &StabilityOptions,
) -> Result<StabilityCertificate> {
    if let Some(r) = options.target_rank.filter(|&r| r != 1) {
        return Err(Error::UnsupportedRank(r));
    }
    let (a, w, d) = (space.degree(), space.dim(), backend.degree());
    let schedule = twist_schedule(a, w, d)?;
    let max_degree = options.max_degree.unwrap_or_else(|| default_basepoint_bound(a, w, d));
    let basepoints = backend.basepoint_check(space, max_degree)?;

    let results: Vec<(KernelDim, Duration)> = schedule
        .checks
        .par_iter()
        .map(|c| {
            let start = Instant::now();
            backend.h0_wedge_syzygy(space, c.q, c.twist).map(|k| (k, start.elapsed()))
        })
        .collect::<Result<_>>()?;
    let (checks, timings): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    let kernel_dims: Vec<usize> = checks.iter().map(|k| k.dim).collect();

    let mut warnings = Vec::new();
    let mut destabilizer = None;
    let verdict = if kernel_dims.iter().all(|&k| k == 0) {
        Verdict::CohomologicallyStable
    } else {
        destabilizer = destabilizing_search(backend, space)?;
        destabilizer.as_ref().map_or(Verdict::NotCohomologicallyStable, |r| r.verdict)
    };
    let verdict = match basepoints {
        BasepointStatus::Certified { .. } => Some(verdict),
        BasepointStatus::Undetermined { max_degree } => {
            warnings.push(format!(
                "BasepointUndetermined: could not certify that W generates O_X({a}) up to degree {max_degree}; \
                 kernel dimensions are reported but no verdict is given"
            ));
            None
        }
    };

    let vars = backend.rational_ring().variables();
    Ok(StabilityCertificate {
        surface: SurfaceSummary {
            variables: vars.to_vec(),
            hypersurface: backend.rational_ring().hypersurface().to_text(vars),
            degree: d,
        },
        form_space: FormSpaceSummary { degree: a, forms: space.forms().iter().map(|g| g.to_text(vars)).collect() },
        rank: w - 1,
        mu: schedule.mu.clone(),
        schedule,
        checks,
        kernel_dims,
        basepoints,
        destabilizer,
        verdict,
        warnings,
        picard_assumption_note: PICARD_NOTE.to_string(),
        prime: backend.prime(),
        timings,
    })
}
