//! Annihilator ideals by linear algebra.
//!
//! For `F` of degree `D`, every monomial of degree `D+1` kills `F`, so
//! `Ann_R(F)` contains `m^(D+1)` and is determined by its image in
//! `R / m^(D+2)`, i.e. by the subspace `Ann_R(F) ∩ R_{<=D+1}`. All
//! computations here work in that finite-dimensional space, indexed by the
//! canonical monomial order of [`crate::poly`]. Nothing here knows about
//! binomials; this module is the independent check for [`crate::binomial`].

use std::sync::Arc;

use thiserror::Error;

use crate::field::FieldSpec;
use crate::linalg::{Matrix, SparseVec, Subspace, SubspaceBuilder};
use crate::poly::{
    contract, contract_monomial, monomials_of_degree, ExponentVector, MonomialIndex, Poly, PolyError, VarContext,
    VarRole,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ApolarError {
    #[error("the zero polynomial has no apolar algebra")]
    ZeroPolynomial,
    #[error("expected a {expected:?} polynomial")]
    WrongRole { expected: VarRole },
    #[error("minimal generators need an annihilator computed from a dual generator")]
    WrongProvenance,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("{0} does not annihilate the dual generator")]
    NotInKernel(String),
    #[error("expected a binomial, got {0} terms")]
    NotBinomial(usize),
    #[error("truncation degree {given} is below the required {required}")]
    TruncationTooLow { given: u32, required: u32 },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Where a truncated ideal came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    KernelOfContraction(Poly),
    GeneratedBy(Vec<Poly>),
}

/// An ideal modulo `m^trunc_degree`, stored as a subspace of the coordinate
/// space on monomials of degree `< trunc_degree`.
#[derive(Debug, Clone)]
pub struct TruncatedIdeal {
    n_vars: usize,
    field: FieldSpec,
    trunc_degree: u32,
    index: Arc<MonomialIndex>,
    space: Subspace,
    source: Provenance,
}

impl TruncatedIdeal {
    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// Monomials of this degree and above are quotiented out.
    pub fn trunc_degree(&self) -> u32 {
        self.trunc_degree
    }

    pub fn max_degree(&self) -> u32 {
        self.trunc_degree - 1
    }

    pub fn index(&self) -> &MonomialIndex {
        &self.index
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn source(&self) -> &Provenance {
        &self.source
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// `dim_k R / (I + m^trunc_degree)`; equals `dim_k R/Ann_R(F)` for a kernel ideal.
    pub fn quotient_dim(&self) -> usize {
        self.index.len() - self.space.dim()
    }

    /// Basis elements as ring polynomials, in pivot order.
    pub fn basis_polys(&self) -> Vec<Poly> {
        self.space.basis().iter().map(|v| self.to_poly(v)).collect()
    }

    pub fn to_poly(&self, v: &SparseVec) -> Poly {
        sparse_to_poly(v, &self.index, self.n_vars, self.field)
    }

    /// Coordinates of `f` with terms of degree `>= trunc_degree` dropped.
    pub fn coordinates(&self, f: &Poly) -> SparseVec {
        poly_to_sparse(f, &self.index)
    }

    pub fn contains(&self, f: &Poly) -> bool {
        self.space.contains(&self.coordinates(f))
    }

    /// True when `x_j * I ⊆ I` inside the truncation for every variable.
    pub fn is_closed_under_shifts(&self) -> bool {
        self.space
            .basis()
            .iter()
            .all(|v| (0..self.n_vars).all(|j| self.space.contains(&v.map_columns(|c| self.index.shift(c, j)))))
    }

    /// Same ideal, same truncation, as subspaces.
    pub fn same_space(&self, other: &TruncatedIdeal) -> bool {
        self.n_vars == other.n_vars && self.trunc_degree == other.trunc_degree && self.space == other.space
    }
}

fn sparse_to_poly(v: &SparseVec, index: &MonomialIndex, n_vars: usize, field: FieldSpec) -> Poly {
    Poly::from_terms(
        VarContext::ring(n_vars),
        field,
        v.entries().iter().map(|(c, x)| (index.monomial(*c).clone(), x.clone())),
    )
}

fn poly_to_sparse(f: &Poly, index: &MonomialIndex) -> SparseVec {
    SparseVec::from_pairs(f.terms().filter_map(|(e, c)| index.position(e).map(|i| (i, c.clone()))))
}

fn check_dual(big_f: &Poly) -> Result<u32, ApolarError> {
    if big_f.role() != VarRole::Dual {
        return Err(ApolarError::WrongRole {
            expected: VarRole::Dual,
        });
    }
    big_f.degree().ok_or(ApolarError::ZeroPolynomial)
}

/// `Ann_R(F) ∩ R_{<=D+1}`, as the kernel of `f ↦ f∘F`.
pub fn annihilator_truncated(big_f: &Poly) -> Result<TruncatedIdeal, ApolarError> {
    let d = check_dual(big_f)?;
    annihilator_truncated_at(big_f, d + 1)
}

/// Same as [`annihilator_truncated`] with a larger window `R_{<=max_degree}`
/// (`max_degree >= deg F + 1`).
pub fn annihilator_truncated_at(big_f: &Poly, max_degree: u32) -> Result<TruncatedIdeal, ApolarError> {
    let d = check_dual(big_f)?;
    if max_degree < d + 1 {
        return Err(ApolarError::TruncationTooLow {
            given: max_degree,
            required: d + 1,
        });
    }
    let n = big_f.n_vars();
    let field = big_f.field();
    let index = Arc::new(MonomialIndex::new(n, max_degree));

    // Ring monomials that divide no term of F are in the kernel outright; only
    // the divisors take part in the contraction matrix.
    let mut vectors = Vec::new();
    let mut active = Vec::new();
    let mut images: Vec<Vec<(ExponentVector, crate::field::FieldElem)>> = Vec::new();
    for (i, m) in index.monomials().iter().enumerate() {
        let image: Vec<_> = big_f
            .terms()
            .filter_map(|(t, c)| contract_monomial(m, t).map(|e| (e, c.clone())))
            .collect();
        if image.is_empty() {
            vectors.push(SparseVec::unit(i, field));
        } else {
            active.push(i);
            images.push(image);
        }
    }
    let mut rows: std::collections::BTreeMap<ExponentVector, usize> = Default::default();
    for image in &images {
        for (e, _) in image {
            let next = rows.len();
            rows.entry(e.clone()).or_insert(next);
        }
    }
    let mut mat = Matrix::zeros(rows.len(), active.len(), field);
    for (col, image) in images.iter().enumerate() {
        for (e, c) in image {
            let r = rows[e];
            let v = mat.get(r, col) + c;
            mat.set(r, col, v);
        }
    }
    let kernel = mat.kernel_basis();
    vectors.extend(kernel.basis().iter().map(|v| v.map_columns(|c| Some(active[c]))));
    let space = Subspace::from_vectors(index.len(), field, vectors);
    Ok(TruncatedIdeal {
        n_vars: n,
        field,
        trunc_degree: max_degree + 1,
        index,
        space,
        source: Provenance::KernelOfContraction(big_f.clone()),
    })
}

/// The ideal generated by `gens`, truncated to `R_{<=max_degree}`:
/// the span of every `x^e * g` with terms of degree `> max_degree` dropped.
pub fn generated_truncated(
    gens: &[Poly],
    n_vars: usize,
    field: FieldSpec,
    max_degree: u32,
) -> Result<TruncatedIdeal, ApolarError> {
    for g in gens {
        if g.role() != VarRole::Ring {
            return Err(ApolarError::WrongRole {
                expected: VarRole::Ring,
            });
        }
        if g.n_vars() != n_vars || g.field() != field {
            return Err(PolyError::ContextMismatch(
                format!("{} over {}", g.context(), g.field()),
                format!("{} over {}", VarContext::ring(n_vars), field),
            )
            .into());
        }
    }
    let index = Arc::new(MonomialIndex::new(n_vars, max_degree));
    let mut builder = SubspaceBuilder::new(index.len(), field);
    for g in gens {
        let Some(low) = g.min_degree() else { continue };
        if low > max_degree {
            continue;
        }
        for shift_deg in 0..=(max_degree - low) {
            for e in monomials_of_degree(n_vars, shift_deg) {
                let v = SparseVec::from_pairs(
                    g.terms()
                        .filter_map(|(t, c)| index.position(&t.add(&e)).map(|i| (i, c.clone()))),
                );
                builder.insert(&v);
            }
        }
    }
    Ok(TruncatedIdeal {
        n_vars,
        field,
        trunc_degree: max_degree + 1,
        index,
        space: builder.finish(),
        source: Provenance::GeneratedBy(gens.to_vec()),
    })
}

/// `μ(I) = dim_k I/mI` and a minimal generating set.
///
/// `mI` is the span of all `x_j * f` inside the truncation; it contains
/// `m^(D+2)` because `m^(D+1) ⊆ I`, so the count is exact. Generators are
/// picked greedily from the canonical basis of `I` in pivot order (lowest
/// degree first), each with leading coefficient 1.
pub fn minimal_generators(ideal: &TruncatedIdeal) -> Result<(usize, Vec<Poly>), ApolarError> {
    if !matches!(ideal.source, Provenance::KernelOfContraction(_)) {
        return Err(ApolarError::WrongProvenance);
    }
    let index = &ideal.index;
    let mut m_times_i = SubspaceBuilder::new(index.len(), ideal.field);
    for v in ideal.space.basis() {
        for j in 0..ideal.n_vars {
            m_times_i.insert(&v.map_columns(|c| index.shift(c, j)));
        }
    }
    let mu = ideal.space.dim() - m_times_i.dim();
    let mut gens = Vec::with_capacity(mu);
    for v in ideal.space.basis() {
        if gens.len() == mu {
            break;
        }
        if m_times_i.insert(v) {
            gens.push(ideal.to_poly(v));
        }
    }
    debug_assert_eq!(gens.len(), mu);
    Ok((mu, gens))
}

/// Matrix of `R_i → S_{D-i}`, `m ↦ m∘F`; columns are the degree-`i` ring
/// monomials, rows the degree-`(D-i)` dual monomials, both canonical order.
pub fn catalecticant(big_f: &Poly, i: u32) -> Result<Matrix, ApolarError> {
    let d = check_dual(big_f)?;
    if !big_f.is_homogeneous() {
        return Err(ApolarError::NotHomogeneous);
    }
    let n = big_f.n_vars();
    let cols = monomials_of_degree(n, i);
    if i > d {
        return Ok(Matrix::zeros(0, cols.len(), big_f.field()));
    }
    let rows = monomials_of_degree(n, d - i);
    let row_pos: std::collections::HashMap<&ExponentVector, usize> =
        rows.iter().enumerate().map(|(k, e)| (e, k)).collect();
    let mut mat = Matrix::zeros(rows.len(), cols.len(), big_f.field());
    for (c, m) in cols.iter().enumerate() {
        for (t, coef) in big_f.terms() {
            if let Some(e) = contract_monomial(m, t) {
                mat.set(row_pos[&e], c, coef.clone());
            }
        }
    }
    Ok(mat)
}

/// `h_i = rank` of the degree-`i` catalecticant, for `i = 0..=D`.
pub fn hilbert_function(big_f: &Poly) -> Result<Vec<usize>, ApolarError> {
    let d = check_dual(big_f)?;
    if !big_f.is_homogeneous() {
        return Err(ApolarError::NotHomogeneous);
    }
    (0..=d).map(|i| Ok(catalecticant(big_f, i)?.rank())).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnReport {
    pub n_vars: usize,
    pub mu: usize,
    pub minimal_generators: Vec<Poly>,
    pub is_ci: bool,
    pub socle_degree: u32,
    pub quotient_dim: usize,
    pub hilbert: Option<Vec<usize>>,
}

/// Full oracle report for any nonzero dual polynomial.
pub fn analyze(big_f: &Poly) -> Result<AnnReport, ApolarError> {
    let ideal = annihilator_truncated(big_f)?;
    let (mu, gens) = minimal_generators(&ideal)?;
    let hilbert = if big_f.is_homogeneous() {
        Some(hilbert_function(big_f)?)
    } else {
        None
    };
    Ok(AnnReport {
        n_vars: big_f.n_vars(),
        mu,
        is_ci: mu == big_f.n_vars(),
        minimal_generators: gens,
        socle_degree: big_f.degree().expect("nonzero"),
        quotient_dim: ideal.quotient_dim(),
        hilbert,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdealComparison {
    Equal,
    /// This generator does not annihilate `F`.
    NotContained(Poly),
    /// This annihilator element is not reached by the generators.
    ProperSubideal(Poly),
}

impl IdealComparison {
    pub fn is_equal(&self) -> bool {
        matches!(self, IdealComparison::Equal)
    }
}

impl std::fmt::Display for IdealComparison {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IdealComparison::Equal => write!(f, "Equal"),
            IdealComparison::NotContained(g) => write!(f, "NotContained({g})"),
            IdealComparison::ProperSubideal(g) => write!(f, "ProperSubideal({g})"),
        }
    }
}

/// Decide whether `(gens) = Ann_R(F)`.
///
/// First every generator must kill `F`. Then every element of the
/// truncated annihilator must lie in the truncated ideal `(gens) + m^(D+2)`.
/// Since `m^(D+2) ⊆ m·Ann_R(F)`, Nakayama turns the containment
/// `Ann ⊆ (gens) + m·Ann` into equality.
pub fn ideal_equals_ann(gens: &[Poly], big_f: &Poly) -> Result<IdealComparison, ApolarError> {
    let d = check_dual(big_f)?;
    let ring_f = big_f.with_role(VarRole::Ring);
    for g in gens {
        if g.role() != VarRole::Ring {
            return Err(ApolarError::WrongRole {
                expected: VarRole::Ring,
            });
        }
        if g.n_vars() != ring_f.n_vars() || g.field() != ring_f.field() {
            return Err(PolyError::ContextMismatch(
                format!("{} over {}", g.context(), g.field()),
                format!("{} over {}", ring_f.context(), ring_f.field()),
            )
            .into());
        }
        if !contract(g, big_f)?.is_zero() {
            return Ok(IdealComparison::NotContained(g.clone()));
        }
    }
    let ann = annihilator_truncated(big_f)?;
    let generated = generated_truncated(gens, big_f.n_vars(), big_f.field(), d + 1)?;
    for v in ann.space().basis() {
        if !generated.space().contains(v) {
            return Ok(IdealComparison::ProperSubideal(ann.to_poly(v)));
        }
    }
    Ok(IdealComparison::Equal)
}

/// Term pairing inside an annihilator element of a binomial.
///
/// Write `F = e1*M1 + e2*M2` with `M1` the first term of highest degree,
/// rescale to `F1 - c*F2` (`F1 = M1`, `F2 = M2`, `c = -e2/e1`) and let
/// `X^a = gcd(M1, M2)`, `F1 = X^(a+bL)`, `F2 = X^(a+bR)`. For every term
/// `d*x^s` of `f` with `x^s ∘ F1 ≠ 0` the term `c⁻¹d * x^(s-bL+bR)` must
/// occur in `f`; for every term with `x^s ∘ F2 ≠ 0` the term
/// `c*d * x^(s+bL-bR)` must occur.
pub fn binomial_pairing_check(big_f: &Poly, f: &Poly) -> Result<bool, ApolarError> {
    check_dual(big_f)?;
    if big_f.num_terms() != 2 {
        return Err(ApolarError::NotBinomial(big_f.num_terms()));
    }
    if !contract(f, big_f)?.is_zero() {
        return Err(ApolarError::NotInKernel(f.to_string()));
    }
    let (m1, e1, m2, e2) = ordered_binomial_terms(big_f);
    let c = -&e2.try_div(&e1).expect("nonzero coefficient");
    let c_inv = c.inv().expect("nonzero coefficient");
    let a = m1.meet(&m2);
    let b_left = m1.checked_sub(&a).expect("gcd divides");
    let b_right = m2.checked_sub(&a).expect("gcd divides");
    for (s, d) in f.terms() {
        if contract_monomial(s, &m1).is_some() {
            let Some(partner) = s.checked_sub(&b_left).map(|t| t.add(&b_right)) else {
                return Ok(false);
            };
            if f.coeff(&partner) != Some(&(&c_inv * d)) {
                return Ok(false);
            }
        }
        if contract_monomial(s, &m2).is_some() {
            let Some(partner) = s.checked_sub(&b_right).map(|t| t.add(&b_left)) else {
                return Ok(false);
            };
            if f.coeff(&partner) != Some(&(&c * d)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The two terms of a binomial, higher degree first; ties go to the term that
/// comes first in the canonical order.
pub(crate) fn ordered_binomial_terms(
    big_f: &Poly,
) -> (
    ExponentVector,
    crate::field::FieldElem,
    ExponentVector,
    crate::field::FieldElem,
) {
    let mut terms: Vec<_> = big_f.terms().map(|(e, c)| (e.clone(), c.clone())).collect();
    assert_eq!(terms.len(), 2);
    let (t1, t0) = (terms.pop().unwrap(), terms.pop().unwrap());
    if t1.0.degree() > t0.0.degree() {
        (t1.0, t1.1, t0.0, t0.1)
    } else {
        (t0.0, t0.1, t1.0, t1.1)
    }
}
