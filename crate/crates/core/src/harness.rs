//! End-to-end checks: one binomial at a time ([`verify`]) or a seeded
//! random corpus ([`run_corpus`]), plus the JSON records the command line
//! prints.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::apolarity::{analyze, annihilator_truncated, ideal_equals_ann, minimal_generators, ApolarError};
use crate::binomial::{
    classify_poly, construct_annihilator, display_generators, BinomialError, BinomialNormalForm, Classification,
    Normalized, Verdict,
};
use crate::field::{sample_nonzero_with, FieldElem, FieldSpec};
use crate::lefschetz::{build_graded_quotient, find_slp_witness, LefschetzError, SlpReport, DEFAULT_TRIALS};
use crate::poly::{parse_poly_with, ExponentVector, ParseOptions, Poly, PolyError, VarContext, VarRole};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("parse error: {0}")]
    Parse(PolyError),
    #[error("the zero polynomial has no apolar algebra")]
    ZeroPolynomial,
    #[error("expected a dual polynomial in uppercase variables X1, X2, ...")]
    WrongRole,
    #[error("expected a binomial, got {0} terms")]
    NotBinomial(usize),
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("invalid corpus spec: {0}")]
    BadSpec(String),
    #[error(transparent)]
    Apolar(ApolarError),
    #[error(transparent)]
    Binomial(BinomialError),
    #[error(transparent)]
    Lefschetz(LefschetzError),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl HarnessError {
    /// Process exit status for the command line: 2 bad input, 3 not a
    /// binomial, 5 I/O, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Parse(_)
            | HarnessError::ZeroPolynomial
            | HarnessError::WrongRole
            | HarnessError::NotHomogeneous
            | HarnessError::BadSpec(_) => 2,
            HarnessError::NotBinomial(_) => 3,
            HarnessError::Io(_) => 5,
            HarnessError::Lefschetz(LefschetzError::CharacteristicRefused(_)) => 2,
            _ => 1,
        }
    }
}

impl From<PolyError> for HarnessError {
    fn from(e: PolyError) -> Self {
        HarnessError::Parse(e)
    }
}

impl From<ApolarError> for HarnessError {
    fn from(e: ApolarError) -> Self {
        match e {
            ApolarError::ZeroPolynomial => HarnessError::ZeroPolynomial,
            ApolarError::WrongRole { .. } => HarnessError::WrongRole,
            ApolarError::NotHomogeneous => HarnessError::NotHomogeneous,
            ApolarError::NotBinomial(k) => HarnessError::NotBinomial(k),
            e => HarnessError::Apolar(e),
        }
    }
}

impl From<BinomialError> for HarnessError {
    fn from(e: BinomialError) -> Self {
        match e {
            BinomialError::ZeroPolynomial => HarnessError::ZeroPolynomial,
            BinomialError::WrongRole => HarnessError::WrongRole,
            BinomialError::NotBinomial(k) => HarnessError::NotBinomial(k),
            e => HarnessError::Binomial(e),
        }
    }
}

impl From<LefschetzError> for HarnessError {
    fn from(e: LefschetzError) -> Self {
        match e {
            LefschetzError::ZeroPolynomial => HarnessError::ZeroPolynomial,
            LefschetzError::WrongRole => HarnessError::WrongRole,
            LefschetzError::NotHomogeneous => HarnessError::NotHomogeneous,
            e => HarnessError::Lefschetz(e),
        }
    }
}

/// Parse a dual polynomial typed by a user. `n_vars` overrides inference
/// from the largest variable index.
pub fn parse_dual(text: &str, field: FieldSpec, n_vars: Option<usize>) -> Result<Poly, HarnessError> {
    let f = parse_poly_with(
        text,
        field,
        ParseOptions {
            n_vars,
            default_role: VarRole::Dual,
        },
    )?;
    if f.role() != VarRole::Dual {
        return Err(HarnessError::WrongRole);
    }
    if f.is_zero() {
        return Err(HarnessError::ZeroPolynomial);
    }
    Ok(f)
}

fn texts(gens: &[Poly]) -> Vec<String> {
    gens.iter().map(Poly::to_string).collect()
}

/// Normal form in a JSON-friendly shape. `internal_order` lists user
/// variable numbers (1-based): left support, right support, inert.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalFormSummary {
    pub a: Vec<u32>,
    pub b_left: Vec<u32>,
    pub b_right: Vec<u32>,
    pub c1: FieldElem,
    pub c2: FieldElem,
    pub swapped: bool,
    pub internal_order: Vec<usize>,
    pub d1: usize,
    pub d2: usize,
    pub v: Option<u64>,
    pub w: Option<u64>,
    pub case: Option<&'static str>,
}

impl NormalFormSummary {
    pub fn new(nf: &BinomialNormalForm, class: &Classification) -> Self {
        NormalFormSummary {
            a: nf.a.exps().to_vec(),
            b_left: nf.b_left.exps().to_vec(),
            b_right: nf.b_right.exps().to_vec(),
            c1: nf.c1.clone(),
            c2: nf.c2.clone(),
            swapped: nf.swapped,
            internal_order: nf.perm.iter().map(|i| i + 1).collect(),
            d1: class.d1,
            d2: class.d2,
            v: class.v,
            w: class.w,
            case: class.subcase(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorSource {
    /// Built from the classification formulas.
    Theorem,
    /// `x_i^(a_i+1)` for a monomial `X^a`.
    Monomial,
    /// Minimal generators read off the linear-algebra kernel.
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SlpStatus {
    Witness,
    NoneFound,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlpRecord {
    pub status: SlpStatus,
    /// The witness as a linear form, e.g. `"x1 + x2"`.
    pub witness: Option<String>,
    pub coefficients: Option<Vec<FieldElem>>,
    pub trials_used: usize,
    pub failed_pairs: Vec<crate::lefschetz::FailedPair>,
    pub note: Option<String>,
}

impl SlpRecord {
    fn skipped(reason: &str) -> Self {
        SlpRecord {
            status: SlpStatus::Skipped,
            witness: None,
            coefficients: None,
            trials_used: 0,
            failed_pairs: Vec::new(),
            note: Some(reason.to_string()),
        }
    }

    fn from_report(r: SlpReport, n_vars: usize, field: FieldSpec) -> Self {
        let witness = r.witness.as_ref().map(|c| {
            Poly::from_terms(
                VarContext::ring(n_vars),
                field,
                c.iter()
                    .enumerate()
                    .map(|(j, x)| (ExponentVector::unit(n_vars, j), x.clone())),
            )
            .to_string()
        });
        SlpRecord {
            status: if witness.is_some() {
                SlpStatus::Witness
            } else {
                SlpStatus::NoneFound
            },
            witness,
            coefficients: r.witness,
            trials_used: r.trials_used,
            failed_pairs: r.failed_pairs,
            note: r.note,
        }
    }
}

/// Wall-clock milliseconds per stage.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Timings {
    pub classify_ms: f64,
    pub oracle_ms: f64,
    pub construct_ms: f64,
    pub equality_ms: f64,
    pub slp_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyRecord {
    pub input: String,
    pub field: String,
    pub n_vars: usize,
    pub normal_form: Option<NormalFormSummary>,
    pub verdict: Verdict,
    pub oracle_mu: usize,
    pub oracle_ci: bool,
    /// Classifier and oracle agree on the CI question. Inputs outside the
    /// classification count as agreeing; see `fallback`.
    pub agreement: bool,
    /// The CI answer reported for the input.
    pub ci: bool,
    pub ideal_equality: Option<String>,
    pub generator_source: Option<GeneratorSource>,
    pub generators: Vec<String>,
    pub slp: Option<SlpRecord>,
    pub timings: Option<Timings>,
    pub fallback: Option<String>,
}

impl VerifyRecord {
    /// No disagreement and no failed ideal comparison.
    pub fn passed(&self) -> bool {
        self.agreement && self.ideal_equality.as_deref().is_none_or(|s| s == "Equal")
    }

    pub fn case_label(&self) -> String {
        match self.normal_form.as_ref().and_then(|n| n.case) {
            Some(c) => format!("{}:{}", self.verdict.label(), c),
            None => self.verdict.label().to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub with_slp: bool,
    /// Run the SLP search in positive characteristic too.
    pub slp_override: bool,
    pub trials: usize,
    pub seed: u64,
    pub timings: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            with_slp: false,
            slp_override: false,
            trials: DEFAULT_TRIALS,
            seed: 0,
            timings: false,
        }
    }
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

/// `x_i^(a_i + 1)` for every variable.
fn monomial_generators(a: &ExponentVector, field: FieldSpec) -> Vec<Poly> {
    let n = a.len();
    (0..n)
        .map(|i| {
            Poly::monomial(
                VarContext::ring(n),
                ExponentVector::unit(n, i).scale(a.get(i) + 1),
                field.one(),
            )
        })
        .collect()
}

/// Classifier and oracle on one binomial, compared.
pub fn verify(big_f: &Poly, opts: &VerifyOptions) -> Result<VerifyRecord, HarnessError> {
    let mut timings = Timings::default();
    let n = big_f.n_vars();
    let field = big_f.field();

    let t = Instant::now();
    let (normalized, class) = classify_poly(big_f)?;
    timings.classify_ms = ms(t);

    let t = Instant::now();
    let (oracle_mu, oracle_gens) = minimal_generators(&annihilator_truncated(big_f)?)?;
    let oracle_ci = oracle_mu == n;
    timings.oracle_ms = ms(t);

    let predicted = class.verdict.predicts_ci();
    let agreement = predicted.is_none_or(|p| p == oracle_ci);
    let ci = predicted.unwrap_or(oracle_ci);

    let t = Instant::now();
    let (source, gens, fallback) = match (&normalized, class.verdict) {
        (Normalized::Binomial(nf), Verdict::CiCaseA | Verdict::CiCaseB) => {
            (Some(GeneratorSource::Theorem), construct_annihilator(nf)?, None)
        }
        (Normalized::Monomial { a, .. }, _) => (
            Some(GeneratorSource::Monomial),
            monomial_generators(a, field),
            Some("monomial input: generators are x_i^(a_i+1), checked against the oracle".to_string()),
        ),
        (_, Verdict::OutsideTheoremD2Zero) => (
            Some(GeneratorSource::Oracle),
            oracle_gens,
            Some("right residual monomial is 1: outside the classification, answer taken from the oracle".to_string()),
        ),
        _ => (None, Vec::new(), None),
    };
    timings.construct_ms = ms(t);

    let t = Instant::now();
    let ideal_equality = match source {
        Some(_) => Some(ideal_equals_ann(&gens, big_f)?.to_string()),
        None => None,
    };
    timings.equality_ms = ms(t);

    let t = Instant::now();
    let slp = if !opts.with_slp {
        None
    } else if !big_f.is_homogeneous() {
        Some(SlpRecord::skipped("not homogeneous"))
    } else if !ci {
        Some(SlpRecord::skipped("not a complete intersection"))
    } else if field.characteristic() != 0 && !opts.slp_override {
        Some(SlpRecord::skipped(
            "positive characteristic; pass the override to search anyway",
        ))
    } else {
        let a = build_graded_quotient(big_f)?;
        let report = find_slp_witness(&a, opts.trials, opts.seed, opts.slp_override)?;
        Some(SlpRecord::from_report(report, n, field))
    };
    timings.slp_ms = ms(t);

    let normal_form = match &normalized {
        Normalized::Binomial(nf) => Some(NormalFormSummary::new(nf, &class)),
        Normalized::Monomial { .. } => None,
    };
    Ok(VerifyRecord {
        input: big_f.to_string(),
        field: field.to_string(),
        n_vars: n,
        normal_form,
        verdict: class.verdict,
        oracle_mu,
        oracle_ci,
        agreement,
        ci,
        ideal_equality,
        generator_source: source,
        generators: texts(&display_generators(&gens)),
        slp,
        timings: opts.timings.then_some(timings),
        fallback,
    })
}

/// Output of the `classify` command.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassifyRecord {
    pub input: String,
    pub field: String,
    pub n_vars: usize,
    pub normal_form: Option<NormalFormSummary>,
    pub verdict: Verdict,
    /// `a_r + 1` and `v * b_r` for the single right variable.
    pub inequality: Option<(u64, u64)>,
    pub ci: bool,
    pub generator_source: Option<GeneratorSource>,
    pub generators: Vec<String>,
    pub fallback: Option<String>,
}

pub fn classify_record(big_f: &Poly) -> Result<ClassifyRecord, HarnessError> {
    let (normalized, class) = classify_poly(big_f)?;
    let mut out = ClassifyRecord {
        input: big_f.to_string(),
        field: big_f.field().to_string(),
        n_vars: big_f.n_vars(),
        normal_form: None,
        verdict: class.verdict,
        inequality: class.lhs.zip(class.rhs),
        ci: class.verdict.predicts_ci().unwrap_or(false),
        generator_source: None,
        generators: Vec::new(),
        fallback: None,
    };
    match (&normalized, class.verdict) {
        (Normalized::Monomial { a, .. }, _) => {
            out.generator_source = Some(GeneratorSource::Monomial);
            out.generators = texts(&display_generators(&monomial_generators(a, big_f.field())));
        }
        (Normalized::Binomial(nf), v) => {
            out.normal_form = Some(NormalFormSummary::new(nf, &class));
            match v {
                Verdict::CiCaseA | Verdict::CiCaseB => {
                    out.generator_source = Some(GeneratorSource::Theorem);
                    out.generators = texts(&display_generators(&construct_annihilator(nf)?));
                }
                Verdict::OutsideTheoremD2Zero => {
                    let (mu, gens) = minimal_generators(&annihilator_truncated(big_f)?)?;
                    out.ci = mu == big_f.n_vars();
                    out.generator_source = Some(GeneratorSource::Oracle);
                    out.generators = texts(&gens);
                    out.fallback = Some(
                        "right residual monomial is 1: outside the classification, answer taken from the oracle"
                            .to_string(),
                    );
                }
                _ => {}
            }
        }
    }
    Ok(out)
}

/// Output of the `ann` command.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnnRecord {
    pub input: String,
    pub field: String,
    pub n_vars: usize,
    pub mu: usize,
    pub generators: Vec<String>,
    pub ci: bool,
    pub socle_degree: u32,
    pub quotient_dim: usize,
    pub hilbert: Option<Vec<usize>>,
}

pub fn ann_record(big_f: &Poly) -> Result<AnnRecord, HarnessError> {
    let r = analyze(big_f)?;
    Ok(AnnRecord {
        input: big_f.to_string(),
        field: big_f.field().to_string(),
        n_vars: r.n_vars,
        mu: r.mu,
        generators: texts(&r.minimal_generators),
        ci: r.is_ci,
        socle_degree: r.socle_degree,
        quotient_dim: r.quotient_dim,
        hilbert: r.hilbert,
    })
}

/// Output of the `hilbert` command.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HilbertRecord {
    pub input: String,
    pub field: String,
    pub hilbert: Vec<usize>,
    pub palindromic: bool,
    /// Standard monomials spanning each graded piece.
    pub bases: Vec<Vec<String>>,
}

pub fn hilbert_record(big_f: &Poly) -> Result<HilbertRecord, HarnessError> {
    let a = build_graded_quotient(big_f)?;
    let h = a.hilbert().to_vec();
    let ctx = VarContext::ring(a.n_vars());
    let bases = (0..=a.top_degree())
        .map(|i| {
            a.degree_basis(i)
                .iter()
                .map(|e| Poly::monomial(ctx, e.clone(), a.field().one()).to_string())
                .collect()
        })
        .collect();
    Ok(HilbertRecord {
        input: big_f.to_string(),
        field: big_f.field().to_string(),
        palindromic: h.iter().eq(h.iter().rev()),
        hilbert: h,
        bases,
    })
}

/// Output of the `slp` command.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlpCommandRecord {
    pub input: String,
    pub field: String,
    pub hilbert: Vec<usize>,
    #[serde(flatten)]
    pub slp: SlpRecord,
}

pub fn slp_record(
    big_f: &Poly,
    trials: usize,
    seed: u64,
    allow_positive_char: bool,
) -> Result<SlpCommandRecord, HarnessError> {
    let a = build_graded_quotient(big_f)?;
    let report = find_slp_witness(&a, trials, seed, allow_positive_char)?;
    Ok(SlpCommandRecord {
        input: big_f.to_string(),
        field: big_f.field().to_string(),
        hilbert: a.hilbert().to_vec(),
        slp: SlpRecord::from_report(report, a.n_vars(), a.field()),
    })
}

/// Parameters of a random corpus. Generation is a pure function of this.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusSpec {
    pub min_vars: usize,
    pub max_vars: usize,
    pub max_a: u32,
    pub max_b: u32,
    /// Coefficients are drawn from `{±1, …, ±coeff_pool}`.
    pub coeff_pool: u64,
    pub count: usize,
    pub seed: u64,
    pub homogeneous_only: bool,
    pub field: FieldSpec,
    pub verify: VerifyOptions,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            min_vars: 2,
            max_vars: 4,
            max_a: 2,
            max_b: 2,
            coeff_pool: 5,
            count: 100,
            seed: 0,
            homogeneous_only: false,
            field: FieldSpec::Rationals,
            verify: VerifyOptions::default(),
        }
    }
}

impl CorpusSpec {
    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: &str| Err(HarnessError::BadSpec(m.to_string()));
        if self.count == 0 {
            return bad("count must be at least 1");
        }
        if self.min_vars == 0 || self.min_vars > self.max_vars {
            return bad("variable range must be nonempty and start at 1 or more");
        }
        if self.homogeneous_only && self.max_vars < 2 {
            return bad("homogeneous binomials need at least 2 variables");
        }
        if self.max_b == 0 {
            return bad("max_b must be at least 1");
        }
        if self.coeff_pool == 0 {
            return bad("coefficient pool must be nonempty");
        }
        Ok(())
    }
}

/// Draw `X^a (c1 X^bL - c2 X^bR)` with a nonempty left side. Each variable
/// is inert, left or right with equal odds. In homogeneous mode the right
/// exponents are redistributed to the left side's total degree; draws where
/// that is impossible (no right variable, or more right variables than the
/// left degree) are discarded.
fn draw_binomial(rng: &mut ChaCha8Rng, spec: &CorpusSpec) -> Poly {
    loop {
        let n = rng.gen_range(spec.min_vars..=spec.max_vars);
        let a: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=spec.max_a)).collect();
        let mut bl = vec![0u32; n];
        let mut br = vec![0u32; n];
        for i in 0..n {
            match rng.gen_range(0..3) {
                1 => bl[i] = rng.gen_range(1..=spec.max_b),
                2 => br[i] = rng.gen_range(1..=spec.max_b),
                _ => {}
            }
        }
        let left_deg: u32 = bl.iter().sum();
        if left_deg == 0 {
            continue;
        }
        if spec.homogeneous_only {
            let right: Vec<usize> = (0..n).filter(|&i| br[i] > 0).collect();
            if right.is_empty() || right.len() as u32 > left_deg {
                continue;
            }
            for &i in &right {
                br[i] = 1;
            }
            for _ in 0..left_deg - right.len() as u32 {
                br[right[rng.gen_range(0..right.len())]] += 1;
            }
        }
        let c1 = sample_nonzero_with(rng, spec.field, spec.coeff_pool);
        let c2 = sample_nonzero_with(rng, spec.field, spec.coeff_pool);
        let a = ExponentVector::new(a);
        return Poly::from_terms(
            VarContext::dual(n),
            spec.field,
            [
                (a.add(&ExponentVector::new(bl)), c1),
                (a.add(&ExponentVector::new(br)), -c2),
            ],
        );
    }
}

/// The corpus polynomials, in generation order.
pub fn generate_corpus(spec: &CorpusSpec) -> Result<Vec<Poly>, HarnessError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let polys: Vec<Poly> = (0..spec.count).map(|_| draw_binomial(&mut rng, spec)).collect();
    if spec.homogeneous_only {
        for f in &polys {
            assert!(f.is_homogeneous(), "homogeneous draw produced {f}");
            if let Normalized::Binomial(nf) = crate::binomial::normalize(f)? {
                assert!(nf.homogeneous_constraint_holds(), "b_r != sum of b_left for {f}");
            }
        }
    }
    Ok(polys)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CorpusSummary {
    pub total: usize,
    pub per_case: BTreeMap<String, usize>,
    pub disagreements: usize,
    pub equality_failures: usize,
    pub slp_searched: usize,
    pub slp_failures: usize,
    /// Indices (0-based, generation order) of records that did not pass.
    pub failed_records: Vec<usize>,
    pub passed: bool,
}

/// Verify every corpus instance and write one JSON record per line to
/// `out`, in generation order. Instances are checked in parallel.
pub fn run_corpus<W: Write>(spec: &CorpusSpec, out: &mut W) -> Result<CorpusSummary, HarnessError> {
    let polys = generate_corpus(spec)?;
    let records = polys
        .par_iter()
        .map(|f| verify(f, &spec.verify))
        .collect::<Result<Vec<_>, _>>()?;
    let mut summary = CorpusSummary {
        total: records.len(),
        ..Default::default()
    };
    for (k, r) in records.iter().enumerate() {
        serde_json::to_writer(&mut *out, r).map_err(std::io::Error::from)?;
        out.write_all(b"\n")?;
        *summary.per_case.entry(r.case_label()).or_default() += 1;
        if !r.agreement {
            summary.disagreements += 1;
        }
        if r.ideal_equality.as_deref().is_some_and(|s| s != "Equal") {
            summary.equality_failures += 1;
        }
        if let Some(s) = &r.slp {
            if s.status != SlpStatus::Skipped {
                summary.slp_searched += 1;
            }
            if s.status == SlpStatus::NoneFound {
                summary.slp_failures += 1;
            }
        }
        if !r.passed() {
            summary.failed_records.push(k);
        }
    }
    out.flush()?;
    summary.passed = summary.failed_records.is_empty();
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn dual(s: &str) -> Poly {
        parse_poly(s, Q).unwrap()
    }

    #[test]
    fn verify_examples() {
        let opts = VerifyOptions {
            with_slp: true,
            ..Default::default()
        };
        let r = verify(&dual("X1 - X2"), &opts).unwrap();
        assert!(r.agreement && r.ci);
        assert_eq!(r.ideal_equality.as_deref(), Some("Equal"));
        assert_eq!(r.generators, vec!["x1 + x2", "x1*x2"]);
        assert_eq!(r.slp.as_ref().unwrap().status, SlpStatus::Witness);

        let r = verify(&dual("X1*X2 - X3*X4"), &VerifyOptions::default()).unwrap();
        assert!(r.agreement && !r.ci);
        assert_eq!(r.ideal_equality, None);
        assert!(r.generators.is_empty());

        let r = verify(&dual("X2^2*X1 - X2^3"), &VerifyOptions::default()).unwrap();
        assert!(r.passed());
        assert_eq!(r.normal_form.unwrap().case, Some("2a"));
    }

    #[test]
    fn fallbacks() {
        let r = verify(&dual("X1^2 - 1"), &VerifyOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::OutsideTheoremD2Zero);
        assert_eq!(r.generator_source, Some(GeneratorSource::Oracle));
        assert!(r.fallback.is_some() && r.passed());

        let r = verify(&dual("3X1^2*X2"), &VerifyOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::DegenerateMonomial);
        assert_eq!(r.generators, vec!["x2^2", "x1^3"]);
        assert!(r.passed() && r.ci);
    }

    #[test]
    fn errors_and_exit_codes() {
        assert_eq!(parse_dual("0", Q, None).unwrap_err().exit_code(), 2);
        assert_eq!(parse_dual("x1 + x2", Q, None).unwrap_err().exit_code(), 2);
        assert_eq!(parse_dual("X1 +", Q, None).unwrap_err().exit_code(), 2);
        let e = verify(&dual("X1 + X2 + X3"), &VerifyOptions::default()).unwrap_err();
        assert_eq!(e.exit_code(), 3);
        assert_eq!(hilbert_record(&dual("X1^2 - X2")).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn record_json_shape() {
        let r = verify(&dual("2X1 - 3/2X2"), &VerifyOptions::default()).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["verdict"], "CI_case_a");
        assert_eq!(v["normal_form"]["c2"], "3/2");
        assert_eq!(v["normal_form"]["case"], "2c");
        assert!(v.get("timings").unwrap().is_null());
    }

    #[test]
    fn corpus_generation_contract() {
        let spec = CorpusSpec {
            count: 60,
            seed: 3,
            homogeneous_only: true,
            ..Default::default()
        };
        for f in generate_corpus(&spec).unwrap() {
            assert_eq!(f.num_terms(), 2);
            assert!(f.is_homogeneous(), "{f}");
        }
        let bad = CorpusSpec {
            count: 0,
            ..Default::default()
        };
        assert_eq!(generate_corpus(&bad).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn corpus_is_deterministic_and_round_trips() {
        let spec = CorpusSpec {
            count: 25,
            seed: 11,
            ..Default::default()
        };
        let (mut o1, mut o2) = (Vec::new(), Vec::new());
        let s1 = run_corpus(&spec, &mut o1).unwrap();
        let s2 = run_corpus(&spec, &mut o2).unwrap();
        assert_eq!(o1, o2);
        assert_eq!(s1, s2);
        assert!(s1.passed, "{s1:?}");
        let text = String::from_utf8(o1).unwrap();
        let polys = generate_corpus(&spec).unwrap();
        assert_eq!(text.lines().count(), 25);
        for (line, f) in text.lines().zip(&polys) {
            let v: serde_json::Value = serde_json::from_str(line).unwrap();
            let n = v["n_vars"].as_u64().unwrap() as usize;
            let back = parse_dual(v["input"].as_str().unwrap(), Q, Some(n)).unwrap();
            assert_eq!(&back, f);
        }
    }
}
