//! Koszul differentials of a space of forms and sections of twisted exterior
//! powers of its syzygy bundle.
//!
//! For `W = <g_1, ..., g_w>` of degree `a`, the differential
//! `wedge^q W (x) R_t -> wedge^(q-1) W (x) R_(t+a)` sends `e_I (x) m` to
//! `sum_j (-1)^(j-1) e_(I - i_j) (x) g_(i_j) m`. Global sections of
//! `wedge^q S(t)` are exactly its kernel, since `wedge^(q-1) S(t+a)` sits
//! inside `wedge^(q-1) W (x) O_X(t+a)`.
//!
//! Basis of `wedge^q W (x) R_t`: subsets `I` in colexicographic order (by
//! bitmask), and within each subset the complement basis of `R_t`.
//! Index `(I, m)` is `rank(I) * dim R_t + m`.

use std::collections::HashMap;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, PrimeField, RationalField};
use crate::form::{Form, Variables};
use crate::linalg::{kernel_dim, kernel_dim_fraction_free, rank, SparseMatrix, SparseVec};
use crate::ring::{graded_dim, multiplication_between, GradedHypersurfaceRing, GradedPiece};

/// An ordered basis `g_1, ..., g_w` of a subspace `W` of degree-`a` sections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormSpace {
    degree: u32,
    forms: Vec<Form>,
}

impl FormSpace {
    /// Validates shape (common positive degree, `w >= 3`) and linear
    /// independence of the forms in `R_a`.
    pub fn new(forms: Vec<Form>, ring: &GradedHypersurfaceRing<RationalField>) -> Result<Self> {
        let space = Self::unchecked(forms)?;
        let columns: Vec<SparseVec<_>> = space.forms.iter().map(|g| ring.normal_form(g)).collect::<Result<_>>()?;
        let m = SparseMatrix::from_columns(ring.graded_dim(space.degree as i64), columns);
        let r = crate::linalg::rank_fraction_free(&m);
        if r < space.forms.len() {
            return Err(Error::InvalidFormSpace(format!(
                "the {} forms span only a {r}-dimensional subspace of R_{}",
                space.forms.len(),
                space.degree
            )));
        }
        Ok(space)
    }

    /// Shape checks only; linear independence is not verified.
    pub fn unchecked(forms: Vec<Form>) -> Result<Self> {
        if forms.len() < 3 {
            return Err(Error::InvalidFormSpace(format!("need at least 3 forms, got {}", forms.len())));
        }
        if forms.iter().any(Form::is_zero) {
            return Err(Error::ZeroForm);
        }
        let degree = forms[0].degree();
        if degree == 0 {
            return Err(Error::InvalidFormSpace("forms must have positive degree".into()));
        }
        if let Some(g) = forms.iter().find(|g| g.degree() != degree) {
            return Err(Error::Inhomogeneous { expected: degree, found: g.degree() });
        }
        Ok(FormSpace { degree, forms })
    }

    pub fn parse(texts: &[impl AsRef<str>], vars: &Variables, ring: &GradedHypersurfaceRing<RationalField>) -> Result<Self> {
        let forms = texts.iter().map(|s| Form::parse(s.as_ref(), vars)).collect::<Result<Vec<_>>>()?;
        Self::new(forms, ring)
    }

    /// `a`
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// `w = dim W`
    pub fn dim(&self) -> usize {
        self.forms.len()
    }

    pub fn forms(&self) -> &[Form] {
        &self.forms
    }
}

/// Subsets of `{0..w}` of size `q` in colexicographic order, i.e. by bitmask value.
pub fn subsets(w: usize, q: usize) -> Vec<Vec<usize>> {
    let mut all: Vec<Vec<usize>> = (0..w).combinations(q).collect();
    all.sort_by_key(|s| mask(s));
    all
}

fn mask(subset: &[usize]) -> u64 {
    subset.iter().fold(0, |m, i| m | 1 << i)
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// The differential `wedge^q W (x) R_t -> wedge^(q-1) W (x) R_(t+a)`.
#[derive(Clone, Debug)]
pub struct KoszulMap<F: Field> {
    pub q: usize,
    pub t: u32,
    pub matrix: SparseMatrix<F::Elem>,
    pub source_dim: usize,
    pub target_dim: usize,
}

fn koszul_from_pieces<F: Field>(
    ring: &GradedHypersurfaceRing<F>,
    space: &FormSpace,
    q: usize,
    source: &GradedPiece<F>,
    target: &GradedPiece<F>,
) -> Result<KoszulMap<F>> {
    let w = space.dim();
    if q == 0 || q > w {
        return Err(Error::QNotInRange { q, max: w });
    }
    let field = ring.field();
    // Per-form multiplication maps, stored column-wise once and shared by every block.
    let mult_columns: Vec<Vec<SparseVec<F::Elem>>> = space
        .forms()
        .iter()
        .map(|g| {
            let coeffs = ring.coefficients(g)?;
            Ok(multiplication_between(field, &coeffs, source, target).transpose().rows().to_vec())
        })
        .collect::<Result<_>>()?;

    let (dim_s, dim_t) = (source.dim(), target.dim());
    let target_index: HashMap<u64, usize> =
        subsets(w, q - 1).iter().enumerate().map(|(i, s)| (mask(s), i)).collect();
    let source_subsets = subsets(w, q);
    let mut columns = Vec::with_capacity(source_subsets.len() * dim_s);
    for subset in &source_subsets {
        let full = mask(subset);
        let blocks: Vec<(usize, usize, bool)> = subset
            .iter()
            .enumerate()
            .map(|(pos, &i)| (target_index[&(full & !(1 << i))] * dim_t, i, pos % 2 == 1))
            .collect();
        for m in 0..dim_s {
            let mut col: SparseVec<F::Elem> = Vec::new();
            for &(offset, i, negative) in &blocks {
                for (row, e) in &mult_columns[i][m] {
                    col.push((offset + row, if negative { field.neg(e) } else { e.clone() }));
                }
            }
            col.sort_unstable_by_key(|(r, _)| *r);
            columns.push(col);
        }
    }
    let source_dim = source_subsets.len() * dim_s;
    let target_dim = binomial(w, q - 1) * dim_t;
    Ok(KoszulMap { q, t: source.degree(), matrix: SparseMatrix::from_columns(target_dim, columns), source_dim, target_dim })
}

/// Koszul matrix for `(q, t)`; block `(I - i_j, I)` is `(-1)^(j-1)` times multiplication by `g_(i_j)`.
pub fn koszul_matrix<F: Field>(
    ring: &GradedHypersurfaceRing<F>,
    space: &FormSpace,
    q: usize,
    t: u32,
) -> Result<KoszulMap<F>> {
    if q == 0 || q > space.dim() {
        return Err(Error::QNotInRange { q, max: space.dim() });
    }
    let source = ring.piece(t);
    let target = ring.piece(t + space.degree());
    koszul_from_pieces(ring, space, q, &source, &target)
}

/// `h^0(O_X(t) (x) S^*) = w h^0(O_X(t)) - h^0(O_X(t-a))`, valid when every
/// `h^1(O_X(m))` vanishes.
pub fn h0_s_dual_linebundle(d: u32, a: u32, w: usize, t: i64) -> usize {
    w * graded_dim(d, t) - graded_dim(d, t - a as i64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Provenance {
    /// The kernel vanished modulo a prime, so it vanishes over the rationals.
    #[serde(rename = "prime-certified")]
    PrimeCertified,
    /// Computed by exact elimination over the rationals.
    #[serde(rename = "rational-certified")]
    RationalCertified,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelDim {
    pub q: usize,
    pub t: u32,
    pub dim: usize,
    pub source_dim: usize,
    pub target_dim: usize,
    pub provenance: Provenance,
    /// Kernel dimension modulo the prime, when one was used.
    pub modular_dim: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BackendMode {
    /// Rank modulo `prime`; nonzero kernels are recomputed exactly.
    Modular { prime: u64 },
    /// Exact rational elimination only.
    Exact,
}

/// Kernel computations for one surface: an exact rational ring plus an
/// optional prime-field mirror used for fast ranks.
#[derive(Debug)]
pub struct KernelBackend {
    rational: GradedHypersurfaceRing<RationalField>,
    modular: Option<GradedHypersurfaceRing<PrimeField>>,
}

impl KernelBackend {
    pub fn new(hypersurface: Form, variables: Variables, mode: BackendMode) -> Result<Self> {
        let modular = match mode {
            BackendMode::Modular { prime } => Some(GradedHypersurfaceRing::new(
                PrimeField::new(prime)?,
                hypersurface.clone(),
                variables.clone(),
            )?),
            BackendMode::Exact => None,
        };
        let rational = GradedHypersurfaceRing::new(RationalField, hypersurface, variables)?;
        Ok(KernelBackend { rational, modular })
    }

    pub fn rational_ring(&self) -> &GradedHypersurfaceRing<RationalField> {
        &self.rational
    }

    pub fn modular_ring(&self) -> Option<&GradedHypersurfaceRing<PrimeField>> {
        self.modular.as_ref()
    }

    pub fn prime(&self) -> Option<u64> {
        self.modular.as_ref().map(|r| r.field().modulus())
    }

    /// Degree of the hypersurface.
    pub fn degree(&self) -> u32 {
        self.rational.degree()
    }

    /// `h^0(wedge^q S(t))` as the kernel dimension of the Koszul map.
    pub fn h0_wedge_syzygy(&self, space: &FormSpace, q: usize, t: u32) -> Result<KernelDim> {
        let mut modular_dim = None;
        if let Some(ring) = &self.modular {
            let map = koszul_matrix(ring, space, q, t)?;
            let k = kernel_dim(ring.field(), &map.matrix);
            if k == 0 {
                return Ok(KernelDim {
                    q,
                    t,
                    dim: 0,
                    source_dim: map.source_dim,
                    target_dim: map.target_dim,
                    provenance: Provenance::PrimeCertified,
                    modular_dim: Some(0),
                });
            }
            modular_dim = Some(k);
        }
        let map = koszul_matrix(&self.rational, space, q, t)?;
        let dim = kernel_dim_fraction_free(&map.matrix);
        if let Some(k) = modular_dim {
            if dim > k {
                return Err(Error::InternalInconsistency(format!(
                    "rational kernel {dim} exceeds modular kernel {k} at q = {q}, t = {t}"
                )));
            }
        }
        Ok(KernelDim {
            q,
            t,
            dim,
            source_dim: map.source_dim,
            target_dim: map.target_dim,
            provenance: Provenance::RationalCertified,
            modular_dim,
        })
    }

    /// Base-point check over the prime field when available, else over the rationals.
    pub fn basepoint_check(&self, space: &FormSpace, max_degree: u32) -> Result<BasepointStatus> {
        match &self.modular {
            Some(ring) => basepoint_check(ring, space, max_degree),
            None => basepoint_check(&self.rational, space, max_degree),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum BasepointStatus {
    /// `W * R_(D-a) = R_D`, so the forms have no common zero on the surface.
    Certified { degree: u32 },
    /// No surjective degree up to `max_degree`; says nothing about base points.
    Undetermined { max_degree: u32 },
}

/// Searches for a degree `D <= max_degree` where `sum_i g_i R_(D-a) = R_D`.
///
/// Surjectivity modulo a prime implies surjectivity over the rationals, so a
/// prime-field ring gives a sound certificate.
pub fn basepoint_check<F: Field>(
    ring: &GradedHypersurfaceRing<F>,
    space: &FormSpace,
    max_degree: u32,
) -> Result<BasepointStatus> {
    let field = ring.field();
    let a = space.degree();
    let w = space.dim();
    let coeffs: Vec<_> = space.forms().iter().map(|g| ring.coefficients(g)).collect::<Result<_>>()?;
    // Pieces above the Koszul range are large and used once, so they bypass the ring cache.
    let mut pieces: HashMap<u32, GradedPiece<F>> = HashMap::new();
    for big_d in a..=max_degree {
        let target_dim = ring.graded_dim(big_d as i64);
        if w * ring.graded_dim((big_d - a) as i64) < target_dim {
            continue;
        }
        for t in [big_d - a, big_d] {
            pieces.entry(t).or_insert_with(|| ring.build_piece(t));
        }
        let (source, target) = (&pieces[&(big_d - a)], &pieces[&big_d]);
        let mut columns = Vec::with_capacity(w * source.dim());
        for c in &coeffs {
            columns.extend(multiplication_between(field, c, source, target).transpose().rows().iter().cloned());
        }
        let m = SparseMatrix::from_columns(target_dim, columns);
        if rank(field, &m) == target_dim {
            return Ok(BasepointStatus::Certified { degree: big_d });
        }
        pieces.retain(|&t, _| t + a > big_d);
    }
    Ok(BasepointStatus::Undetermined { max_degree })
}
