//! Graded apolar algebras `A = R/Ann_R(F)` of homogeneous `F` and the search
//! for strong Lefschetz elements.
//!
//! A linear form `ℓ` is a strong Lefschetz element when every map
//! `×ℓ^d : A_i → A_{i+d}` has maximal rank. Ranks are computed exactly.
//! Finding a witness proves the property; failing to find one proves
//! nothing.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::apolarity::{catalecticant, ApolarError};
use crate::field::{sample_nonzero_with, FieldElem, FieldSpec};
use crate::linalg::{Matrix, SparseVec, Subspace};
use crate::poly::{monomials_of_degree, ExponentVector, Poly, VarContext, VarRole};

pub const DEFAULT_TRIALS: usize = 8;
pub const COEFF_POOL: u64 = 5;
pub const NO_WITNESS_FOUND: &str = "NO_WITNESS_FOUND";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LefschetzError {
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("the zero polynomial has no apolar algebra")]
    ZeroPolynomial,
    #[error("expected a dual (uppercase) polynomial")]
    WrongRole,
    #[error("degree out of range: i = {i}, d = {d}, top degree {top}")]
    DegreeOutOfRange { i: u32, d: u32, top: u32 },
    #[error("linear form has {got} coefficients, expected {expected}")]
    BadLinearForm { got: usize, expected: usize },
    #[error("strong Lefschetz search over {0} refused: the statement needs characteristic 0 (pass the override to run anyway)")]
    CharacteristicRefused(FieldSpec),
    #[error(transparent)]
    Apolar(#[from] ApolarError),
}

/// One graded piece: the annihilator slice inside `R_i`, in coordinates
/// indexed by the degree-`i` monomials in reversed canonical order.
#[derive(Debug, Clone)]
struct Slice {
    columns: Vec<ExponentVector>,
    positions: HashMap<ExponentVector, usize>,
    kernel: Subspace,
    /// Column index of each standard monomial, and its inverse.
    standard: Vec<usize>,
    standard_pos: HashMap<usize, usize>,
}

impl Slice {
    fn new(big_f: &Poly, i: u32) -> Result<Slice, LefschetzError> {
        let cat = catalecticant(big_f, i)?;
        let n = cat.n_cols();
        // Reversing the columns puts pivots on the x_N-heavy monomials, so the
        // standard monomials are the x_1-heavy ones.
        let mut rev = Matrix::zeros(cat.n_rows(), n, cat.field());
        for r in 0..cat.n_rows() {
            for c in 0..n {
                rev.set(r, n - 1 - c, cat.get(r, c).clone());
            }
        }
        let kernel = rev.kernel_basis();
        let mut columns = monomials_of_degree(big_f.n_vars(), i);
        columns.reverse();
        let positions = columns.iter().enumerate().map(|(k, e)| (e.clone(), k)).collect();
        let pivots = kernel.pivots();
        // Listed in canonical monomial order.
        let standard: Vec<usize> = (0..n).rev().filter(|c| pivots.binary_search(c).is_err()).collect();
        let standard_pos = standard.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        Ok(Slice {
            columns,
            positions,
            kernel,
            standard,
            standard_pos,
        })
    }

    /// Coordinates of the class of a degree-`i` form in the standard basis.
    fn reduce(&self, f: &Poly, field: FieldSpec) -> Vec<FieldElem> {
        let v = SparseVec::from_pairs(f.terms().map(|(e, c)| (self.positions[e], c.clone())));
        let r = self.kernel.residue(&v);
        let mut out = vec![field.zero(); self.standard.len()];
        for (c, x) in r.entries() {
            out[self.standard_pos[c]] = x.clone();
        }
        out
    }
}

/// `A = R/Ann_R(F)` with a monomial basis in each degree.
#[derive(Debug, Clone)]
pub struct GradedAlgebra {
    n_vars: usize,
    top_degree: u32,
    field: FieldSpec,
    degree_bases: Vec<Vec<ExponentVector>>,
    h: Vec<usize>,
    slices: Vec<Slice>,
}

pub fn build_graded_quotient(big_f: &Poly) -> Result<GradedAlgebra, LefschetzError> {
    if big_f.role() != VarRole::Dual {
        return Err(LefschetzError::WrongRole);
    }
    let top = big_f.degree().ok_or(LefschetzError::ZeroPolynomial)?;
    if !big_f.is_homogeneous() {
        return Err(LefschetzError::NotHomogeneous);
    }
    let slices = (0..=top).map(|i| Slice::new(big_f, i)).collect::<Result<Vec<_>, _>>()?;
    let degree_bases: Vec<Vec<ExponentVector>> = slices
        .iter()
        .map(|s| s.standard.iter().map(|&c| s.columns[c].clone()).collect())
        .collect();
    let h = degree_bases.iter().map(Vec::len).collect();
    Ok(GradedAlgebra {
        n_vars: big_f.n_vars(),
        top_degree: top,
        field: big_f.field(),
        degree_bases,
        h,
        slices,
    })
}

impl GradedAlgebra {
    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn top_degree(&self) -> u32 {
        self.top_degree
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn hilbert(&self) -> &[usize] {
        &self.h
    }

    pub fn degree_basis(&self, i: u32) -> &[ExponentVector] {
        &self.degree_bases[i as usize]
    }

    /// Ring polynomial `Σ coeffs[j] x_{j+1}`.
    pub fn linear_form(&self, coeffs: &[FieldElem]) -> Result<Poly, LefschetzError> {
        if coeffs.len() != self.n_vars {
            return Err(LefschetzError::BadLinearForm {
                got: coeffs.len(),
                expected: self.n_vars,
            });
        }
        let ctx = VarContext::ring(self.n_vars);
        Ok(Poly::from_terms(
            ctx,
            self.field,
            coeffs
                .iter()
                .enumerate()
                .map(|(j, c)| (ExponentVector::unit(self.n_vars, j), c.clone())),
        ))
    }

    /// Coordinates of a homogeneous ring form of degree `<= D` in the basis of its degree.
    pub fn reduce(&self, f: &Poly) -> Option<Vec<FieldElem>> {
        let d = f.degree().unwrap_or(0);
        if d > self.top_degree || !f.is_homogeneous() {
            return None;
        }
        Some(self.slices[d as usize].reduce(f, self.field))
    }
}

/// Matrix of `×ℓ^d : A_i → A_{i+d}` in the degree bases (`h_{i+d} × h_i`).
pub fn mult_matrix(a: &GradedAlgebra, ell: &[FieldElem], i: u32, d: u32) -> Result<Matrix, LefschetzError> {
    if i + d > a.top_degree {
        return Err(LefschetzError::DegreeOutOfRange {
            i,
            d,
            top: a.top_degree,
        });
    }
    let power = a.linear_form(ell)?.pow(d);
    let target = &a.slices[(i + d) as usize];
    let source = a.degree_basis(i);
    let mut m = Matrix::zeros(target.standard.len(), source.len(), a.field);
    for (col, e) in source.iter().enumerate() {
        let image = target.reduce(&power.mul_monomial(e), a.field);
        for (row, x) in image.into_iter().enumerate() {
            m.set(row, col, x);
        }
    }
    Ok(m)
}

/// An `(i, d)` pair whose map dropped rank.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FailedPair {
    pub i: u32,
    pub d: u32,
    pub rank: usize,
    pub max_rank: usize,
}

/// Checks every `(i, d)` with `d >= 1`, `i + d <= D`. Returns the failures
/// in `(i, d)` order.
pub fn has_slp_witness(a: &GradedAlgebra, ell: &[FieldElem]) -> Result<(bool, Vec<FailedPair>), LefschetzError> {
    a.linear_form(ell)?;
    let top = a.top_degree;
    let pairs: Vec<(u32, u32)> = (1..=top).flat_map(|d| (0..=top - d).map(move |i| (i, d))).collect();
    let results = pairs
        .par_iter()
        .map(|&(i, d)| {
            let rank = mult_matrix(a, ell, i, d)?.rank();
            let max_rank = a.h[i as usize].min(a.h[(i + d) as usize]);
            Ok((rank < max_rank).then_some(FailedPair { i, d, rank, max_rank }))
        })
        .collect::<Result<Vec<_>, LefschetzError>>()?;
    let mut failed: Vec<FailedPair> = results.into_iter().flatten().collect();
    failed.sort_by_key(|p| (p.i, p.d));
    Ok((failed.is_empty(), failed))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlpReport {
    /// Coefficients of the witness `ℓ = Σ c_j x_j`.
    pub witness: Option<Vec<FieldElem>>,
    pub trials_used: usize,
    /// Failures of the last rejected candidate.
    pub failed_pairs: Vec<FailedPair>,
    pub note: Option<String>,
}

/// Try `x_1 + … + x_N`, then `trials` random forms with coefficients drawn
/// from `{±1, …, ±5}` (or `{1, …, min(p-1, 5)}`).
pub fn find_slp_witness(
    a: &GradedAlgebra,
    trials: usize,
    seed: u64,
    allow_positive_char: bool,
) -> Result<SlpReport, LefschetzError> {
    if a.field.characteristic() != 0 && !allow_positive_char {
        return Err(LefschetzError::CharacteristicRefused(a.field));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last_failed = Vec::new();
    for t in 0..=trials {
        let ell: Vec<FieldElem> = if t == 0 {
            vec![a.field.one(); a.n_vars]
        } else {
            (0..a.n_vars)
                .map(|_| sample_nonzero_with(&mut rng, a.field, COEFF_POOL))
                .collect()
        };
        let (ok, failed) = has_slp_witness(a, &ell)?;
        if ok {
            return Ok(SlpReport {
                witness: Some(ell),
                trials_used: t + 1,
                failed_pairs: Vec::new(),
                note: None,
            });
        }
        last_failed = failed;
    }
    Ok(SlpReport {
        witness: None,
        trials_used: trials + 1,
        failed_pairs: last_failed,
        note: Some(format!(
            "{NO_WITNESS_FOUND}: {} candidates failed; this is not a proof that no witness exists",
            trials + 1
        )),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apolarity::hilbert_function;
    use crate::poly::parse_poly;
    use proptest::prelude::*;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn alg(s: &str, field: FieldSpec) -> GradedAlgebra {
        build_graded_quotient(&parse_poly(s, field).unwrap()).unwrap()
    }

    fn ones(n: usize, field: FieldSpec) -> Vec<FieldElem> {
        vec![field.one(); n]
    }

    fn ints(field: FieldSpec, xs: &[i64]) -> Vec<FieldElem> {
        xs.iter().map(|&x| field.from_i64(x)).collect()
    }

    #[test]
    fn quotient_examples() {
        let a = alg("X1 - X2", Q);
        assert_eq!(a.hilbert(), &[1, 1]);
        assert_eq!(a.degree_basis(0), &[ExponentVector::zero(2)]);
        assert_eq!(a.degree_basis(1), &[ExponentVector::unit(2, 0)]);
        // x2 ≡ -x1
        let x2 = Poly::var(VarContext::ring(2), Q, 1);
        assert_eq!(a.reduce(&x2).unwrap(), vec![Q.from_i64(-1)]);

        assert_eq!(alg("X1*X2", Q).hilbert(), &[1, 2, 1]);
        assert_eq!(alg("X1*X2 - X3*X4", Q).hilbert(), &[1, 4, 1]);
        assert_eq!(
            build_graded_quotient(&parse_poly("X1^2 - X2", Q).unwrap()).unwrap_err(),
            LefschetzError::NotHomogeneous
        );
        assert_eq!(
            build_graded_quotient(&parse_poly("0", Q).unwrap()).unwrap_err(),
            LefschetzError::ZeroPolynomial
        );
    }

    #[test]
    fn mult_matrix_examples() {
        let a = alg("X1*X2", Q);
        assert_eq!(
            mult_matrix(&a, &ones(2, Q), 0, 2).unwrap(),
            Matrix::from_i64_rows(Q, &[&[2]])
        );
        let f2 = FieldSpec::prime(2).unwrap();
        let a2 = alg("X1*X2", f2);
        assert_eq!(
            mult_matrix(&a2, &ones(2, f2), 0, 2).unwrap(),
            Matrix::from_i64_rows(f2, &[&[0]])
        );
        for i in 0..=2 {
            let m = mult_matrix(&a, &ints(Q, &[3, -1]), i, 0).unwrap();
            assert_eq!(m, Matrix::identity(a.hilbert()[i as usize], Q));
        }
        assert_eq!(
            mult_matrix(&a, &ones(2, Q), 2, 1).unwrap_err(),
            LefschetzError::DegreeOutOfRange { i: 2, d: 1, top: 2 }
        );
    }

    #[test]
    fn witness_examples() {
        let a = alg("X1 - X2", Q);
        assert!(has_slp_witness(&a, &ints(Q, &[1, 0])).unwrap().0);
        // x1 + x2 lies in Ann(X1 - X2), so it is zero in A.
        let (ok, failed) = has_slp_witness(&a, &ones(2, Q)).unwrap();
        assert!(!ok);
        assert_eq!(
            failed,
            vec![FailedPair {
                i: 0,
                d: 1,
                rank: 0,
                max_rank: 1
            }]
        );
        let r = find_slp_witness(&a, DEFAULT_TRIALS, 0, false).unwrap();
        let ell = r.witness.expect("a random form with c1 != c2 works");
        assert_ne!(ell[0], ell[1]);
        assert!(r.trials_used > 1);

        assert!(has_slp_witness(&alg("X1*X2", Q), &ones(2, Q)).unwrap().0);
        let r = find_slp_witness(&alg("X1^2*X2^2", Q), DEFAULT_TRIALS, 0, false).unwrap();
        assert_eq!(r.witness, Some(ones(2, Q)));
    }

    #[test]
    fn characteristic_two_gate() {
        let f2 = FieldSpec::prime(2).unwrap();
        let a = alg("X1*X2", f2);
        let (ok, failed) = has_slp_witness(&a, &ones(2, f2)).unwrap();
        assert!(!ok);
        assert_eq!(
            failed,
            vec![FailedPair {
                i: 0,
                d: 2,
                rank: 0,
                max_rank: 1
            }]
        );
        for ell in [[1, 0], [0, 1], [1, 1]] {
            assert!(!has_slp_witness(&a, &ints(f2, &ell)).unwrap().0);
        }
        assert_eq!(
            find_slp_witness(&a, 10, 0, false).unwrap_err(),
            LefschetzError::CharacteristicRefused(f2)
        );
        let r = find_slp_witness(&a, 10, 0, true).unwrap();
        assert_eq!(r.witness, None);
        assert_eq!(r.trials_used, 11);
        assert!(r.note.unwrap().starts_with(NO_WITNESS_FOUND));
    }

    #[test]
    fn bad_linear_form_is_rejected() {
        let a = alg("X1*X2", Q);
        assert_eq!(
            has_slp_witness(&a, &ones(3, Q)).unwrap_err(),
            LefschetzError::BadLinearForm { got: 3, expected: 2 }
        );
    }

    fn homogeneous_strategy() -> impl Strategy<Value = Poly> {
        // Up to three terms of a common degree in 2 or 3 variables.
        (2usize..4, 1u32..5)
            .prop_flat_map(|(n, d)| {
                let monos = monomials_of_degree(n, d);
                let k = monos.len();
                (Just(monos), proptest::collection::vec((0..k, -3i64..4), 1..4))
            })
            .prop_filter_map("nonzero", |(monos, picks)| {
                let n = monos[0].len();
                let f = Poly::from_terms(
                    VarContext::dual(n),
                    Q,
                    picks.into_iter().map(|(i, c)| (monos[i].clone(), Q.from_i64(c))),
                );
                (!f.is_zero()).then_some(f)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn hilbert_matches_catalecticants(f in homogeneous_strategy()) {
            let a = build_graded_quotient(&f).unwrap();
            prop_assert_eq!(a.hilbert().to_vec(), hilbert_function(&f).unwrap());
            let h = a.hilbert();
            prop_assert!(h.iter().eq(h.iter().rev()));
            prop_assert_eq!((h[0], h[h.len() - 1]), (1, 1));
        }

        #[test]
        fn rank_duality(f in homogeneous_strategy(), c in proptest::collection::vec(1i64..4, 3)) {
            let a = build_graded_quotient(&f).unwrap();
            let ell = ints(Q, &c[..a.n_vars()]);
            let top = a.top_degree();
            for d in 0..=top {
                for i in 0..=top - d {
                    let r1 = mult_matrix(&a, &ell, i, d).unwrap().rank();
                    let r2 = mult_matrix(&a, &ell, top - i - d, d).unwrap().rank();
                    prop_assert_eq!(r1, r2, "i={} d={}", i, d);
                }
            }
        }

        #[test]
        fn composition(f in homogeneous_strategy(), c in proptest::collection::vec(-2i64..3, 3)) {
            let a = build_graded_quotient(&f).unwrap();
            let ell = ints(Q, &c[..a.n_vars()]);
            let top = a.top_degree();
            for i in 0..=top {
                for d1 in 0..=top - i {
                    for d2 in 0..=top - i - d1 {
                        let whole = mult_matrix(&a, &ell, i, d1 + d2).unwrap();
                        let first = mult_matrix(&a, &ell, i, d1).unwrap();
                        let second = mult_matrix(&a, &ell, i + d1, d2).unwrap();
                        prop_assert_eq!(whole, second.mul(&first).unwrap());
                    }
                }
            }
        }

        #[test]
        fn scaled_witness_is_witness(f in homogeneous_strategy(), k in prop_oneof![Just(-1i64), Just(2), Just(-7)]) {
            let a = build_graded_quotient(&f).unwrap();
            let r = find_slp_witness(&a, 2, 1, false).unwrap();
            if let Some(ell) = r.witness {
                let k = Q.from_i64(k);
                let scaled: Vec<FieldElem> = ell.iter().map(|x| x * &k).collect();
                prop_assert!(has_slp_witness(&a, &scaled).unwrap().0);
            }
        }
    }
}
