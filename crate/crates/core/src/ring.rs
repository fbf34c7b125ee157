//! The homogeneous coordinate ring `R = k[x0, x1, x2, x3] / (f)` of a surface
//! in projective 3-space, one graded piece at a time.
//!
//! `R_t` is the quotient of the degree-`t` monomial space `S_t` by the row
//! space of `f * S_(t-d)`. The complement basis is chosen greedily: walk the
//! monomials of `S_t` in their listing order (`x^t` first) and keep each one
//! that is not in the span of the row space and the monomials kept so far.
//! Because the ideal is principal this greedy choice is explicit: the
//! discarded monomials are exactly the multiples of the last monomial of `f`
//! in listing order, and the reduction map rewrites that monomial by the
//! remaining terms of `f`. Each reducible monomial only ever refers to
//! monomials earlier in the listing, so one pass fills the whole table.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::form::{Form, Variables};
use crate::linalg::{SparseMatrix, SparseVec};
use crate::monomial::{count_in_degree, monomials_of_degree, Monomial};

/// `dim R_t = C(t+3, 3) - C(t-d+3, 3)`, zero for negative `t`.
pub fn graded_dim(d: u32, t: i64) -> usize {
    if t < 0 {
        return 0;
    }
    count_in_degree(t) - count_in_degree(t - d as i64)
}

const NOT_STANDARD: u32 = u32::MAX;

/// Model of `R_t`: the ambient monomials, the complement basis, and the
/// normal form of every ambient monomial in that basis.
#[derive(Debug)]
pub struct GradedPiece<F: Field> {
    degree: u32,
    ambient: Vec<Monomial>,
    complement: Vec<Monomial>,
    /// Complement position of each ambient monomial, `NOT_STANDARD` if reducible.
    complement_index: Vec<u32>,
    /// Normal forms of the reducible ambient monomials, indexed by ambient rank.
    reductions: Vec<SparseVec<F::Elem>>,
}

impl<F: Field> GradedPiece<F> {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    pub fn ambient(&self) -> &[Monomial] {
        &self.ambient
    }

    pub fn complement(&self) -> &[Monomial] {
        &self.complement
    }

    /// Adds `c * NF(m)` into `acc`.
    fn accumulate(&self, field: &F, acc: &mut BTreeMap<usize, F::Elem>, m: Monomial, c: &F::Elem) {
        let rank = m.rank_in_degree();
        let idx = self.complement_index[rank];
        if idx != NOT_STANDARD {
            let slot = acc.entry(idx as usize).or_insert_with(|| field.zero());
            *slot = field.add(slot, c);
        } else {
            for (j, e) in &self.reductions[rank] {
                let slot = acc.entry(*j).or_insert_with(|| field.zero());
                field.add_mul_assign(slot, c, e);
            }
        }
    }

    /// Normal form of `sum c_m * m` over monomials of this degree.
    pub fn normal_form<'a>(&self, field: &F, terms: impl IntoIterator<Item = (Monomial, &'a F::Elem)>) -> SparseVec<F::Elem>
    where
        F::Elem: 'a,
    {
        let mut acc = BTreeMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.degree(), self.degree);
            self.accumulate(field, &mut acc, m, c);
        }
        acc.into_iter().filter(|(_, e)| !field.is_zero(e)).collect()
    }

    pub fn normal_form_of_monomial(&self, field: &F, m: Monomial) -> SparseVec<F::Elem> {
        self.normal_form(field, [(m, &field.one())])
    }

    /// The reduction map `S_t -> R_t` as a `dim R_t x dim S_t` matrix.
    pub fn reduction_matrix(&self, field: &F) -> SparseMatrix<F::Elem> {
        let columns = self.ambient.iter().map(|m| self.normal_form_of_monomial(field, *m)).collect();
        SparseMatrix::from_columns(self.dim(), columns)
    }

    /// The inclusion of the complement basis `R_t -> S_t`.
    pub fn inclusion_matrix(&self, field: &F) -> SparseMatrix<F::Elem> {
        let columns = self.complement.iter().map(|m| vec![(m.rank_in_degree(), field.one())]).collect();
        SparseMatrix::from_columns(self.ambient.len(), columns)
    }
}

/// `R = k[x0..x3] / (f)` over the field `F`, with a construct-once cache of graded pieces.
pub struct GradedHypersurfaceRing<F: Field> {
    field: F,
    hypersurface: Form,
    variables: Variables,
    /// Monomial of `f` eliminated by the reduction.
    lead: Monomial,
    /// `lead == sum c * m` modulo `f`.
    rewrite: Vec<(Monomial, F::Elem)>,
    cache: Mutex<HashMap<u32, Arc<OnceLock<Arc<GradedPiece<F>>>>>>,
}

impl<F: Field> std::fmt::Debug for GradedHypersurfaceRing<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GradedHypersurfaceRing")
            .field("field", &self.field)
            .field("hypersurface", &self.hypersurface.to_text(&self.variables))
            .finish()
    }
}

impl<F: Field> GradedHypersurfaceRing<F> {
    pub fn new(field: F, hypersurface: Form, variables: Variables) -> Result<Self> {
        if hypersurface.is_zero() {
            return Err(Error::ZeroForm);
        }
        if hypersurface.degree() == 0 {
            return Err(Error::InvalidInput("the hypersurface must have positive degree".into()));
        }
        // Smallest exponent vector in lex order = last in the listing.
        let (lead, lead_coeff) = hypersurface.terms().next().map(|(m, c)| (*m, c.clone())).unwrap();
        let bad_prime = |reason: &str| match field.characteristic() {
            0 => Error::InternalInconsistency(reason.to_string()),
            p => Error::BadPrime { p, reason: reason.to_string() },
        };
        let lc = field
            .from_rational(&lead_coeff)
            .filter(|c| !field.is_zero(c))
            .ok_or_else(|| bad_prime("it divides the eliminated coefficient of the hypersurface"))?;
        let minus_inv = field.neg(&field.inv(&lc));
        let mut rewrite = Vec::with_capacity(hypersurface.num_terms() - 1);
        for (m, c) in hypersurface.terms().skip(1) {
            let c = field
                .from_rational(c)
                .ok_or_else(|| bad_prime("it divides a denominator of the hypersurface"))?;
            let c = field.mul(&c, &minus_inv);
            if !field.is_zero(&c) {
                rewrite.push((*m, c));
            }
        }
        Ok(GradedHypersurfaceRing { field, hypersurface, variables, lead, rewrite, cache: Mutex::new(HashMap::new()) })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn hypersurface(&self) -> &Form {
        &self.hypersurface
    }

    pub fn variables(&self) -> &Variables {
        &self.variables
    }

    /// `d = deg f`
    pub fn degree(&self) -> u32 {
        self.hypersurface.degree()
    }

    /// The monomial that normal forms never contain multiples of.
    pub fn eliminated_monomial(&self) -> Monomial {
        self.lead
    }

    pub fn graded_dim(&self, t: i64) -> usize {
        graded_dim(self.degree(), t)
    }

    /// Cached `R_t`; concurrent callers for the same `t` share a single construction.
    pub fn piece(&self, t: u32) -> Arc<GradedPiece<F>> {
        let cell = {
            let mut cache = self.cache.lock().unwrap();
            cache.entry(t).or_default().clone()
        };
        cell.get_or_init(|| Arc::new(self.build_piece(t))).clone()
    }

    /// Builds `R_t` without touching the cache.
    pub fn build_piece(&self, t: u32) -> GradedPiece<F> {
        let field = &self.field;
        let ambient = monomials_of_degree(t);
        let dim = self.graded_dim(t as i64);
        let mut complement = Vec::with_capacity(dim);
        let mut complement_index = vec![NOT_STANDARD; ambient.len()];
        let mut reductions: Vec<SparseVec<F::Elem>> = vec![Vec::new(); ambient.len()];

        let mut dense = vec![field.zero(); dim];
        let mut touched = vec![false; dim];
        let mut support: Vec<usize> = Vec::new();

        for (rank, m) in ambient.iter().enumerate() {
            let Some(cofactor) = self.lead.quotient_of(*m) else {
                complement_index[rank] = complement.len() as u32;
                complement.push(*m);
                continue;
            };
            for (tail, c) in &self.rewrite {
                let r = tail.mul(cofactor).rank_in_degree();
                debug_assert!(r < rank);
                let idx = complement_index[r];
                let mut add = |j: usize, e: &F::Elem, scale: &F::Elem| {
                    if !touched[j] {
                        touched[j] = true;
                        support.push(j);
                    }
                    field.add_mul_assign(&mut dense[j], e, scale);
                };
                if idx != NOT_STANDARD {
                    add(idx as usize, &field.one(), c);
                } else {
                    for (j, e) in &reductions[r] {
                        add(*j, e, c);
                    }
                }
            }
            support.sort_unstable();
            let mut nf = Vec::with_capacity(support.len());
            for &j in &support {
                let e = std::mem::replace(&mut dense[j], field.zero());
                touched[j] = false;
                if !field.is_zero(&e) {
                    nf.push((j, e));
                }
            }
            support.clear();
            reductions[rank] = nf;
        }
        debug_assert_eq!(complement.len(), dim);
        GradedPiece { degree: t, ambient, complement, complement_index, reductions }
    }

    /// Coefficients of `g` in this field.
    pub fn coefficients(&self, g: &Form) -> Result<Vec<(Monomial, F::Elem)>> {
        g.terms()
            .map(|(m, c)| {
                self.field.from_rational(c).map(|e| (*m, e)).ok_or_else(|| {
                    Error::InvalidInput(format!(
                        "coefficient {c} is not defined over {}",
                        self.field.describe()
                    ))
                })
            })
            .collect()
    }

    /// Normal form of `g` in the complement basis of `R_(deg g)`.
    pub fn normal_form(&self, g: &Form) -> Result<SparseVec<F::Elem>> {
        let coeffs = self.coefficients(g)?;
        let piece = self.piece(g.degree());
        Ok(piece.normal_form(&self.field, coeffs.iter().map(|(m, c)| (*m, c))))
    }

    /// Matrix of `m -> NF(g * m)` from `R_t` to `R_(t + deg g)`.
    pub fn multiplication_matrix(&self, g: &Form, t: u32) -> Result<SparseMatrix<F::Elem>> {
        let coeffs = self.coefficients(g)?;
        let source = self.piece(t);
        let target = self.piece(t + g.degree());
        Ok(multiplication_between(&self.field, &coeffs, &source, &target))
    }
}

/// Multiplication by a form (given by its coefficients) between two explicit pieces.
pub fn multiplication_between<F: Field>(
    field: &F,
    coeffs: &[(Monomial, F::Elem)],
    source: &GradedPiece<F>,
    target: &GradedPiece<F>,
) -> SparseMatrix<F::Elem> {
    let columns = source
        .complement()
        .iter()
        .map(|m| target.normal_form(field, coeffs.iter().map(|(g, c)| (g.mul(*m), c))))
        .collect();
    SparseMatrix::from_columns(target.dim(), columns)
}
