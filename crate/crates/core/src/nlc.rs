//! The NLC_d family: each party holds `n` dits, and the players must output
//! `a + b = g(x' + y') * (x_n + y_n) mod d`, where `x'` is the `(n-1)`-dit
//! prefix. Inputs are drawn with weight `p(x' + y') / d^(n+1)`.
//!
//! Question `x` is the base-`d` number `x_1 x_2 ... x_n` (`x_1` most
//! significant), so `x_n = x % d` and the prefix index is `x / d`. `g` and `p`
//! are indexed by prefix.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::{is_prime, root_of_unity, OutputGroup};
use crate::bounds::{classical_value, enumeration_count, game_matrix, quantum_bound, ClassicalValue, ENUMERATION_BUDGET};
use crate::error::{Error, Result};
use crate::format::ratio_string;
use crate::games::json::{parse_prob, Prob};
use crate::games::{Distribution, LinearGame};
use crate::numerics::{hermitian_eigen, matmul_adjoint, spectral_norm, CMatrix};

/// Exact arithmetic for the closed forms.
pub type Rational = Ratio<i128>;

/// Cap on `d^n`, the number of questions per party.
pub const MAX_NLC_QUESTIONS: usize = 729;
/// Cap on `d^n` for the eigenstructure checks.
pub const MAX_BLOCK_QUESTIONS: usize = 81;
/// Tolerance for the floating-point structural identities.
pub const STRUCTURE_TOL: f64 = 1e-10;
pub const DEFAULT_EQ_TOL: f64 = 1e-10;

pub const REPORT_SCHEMA: &str = "lingame.nlc-report/1";

#[derive(Debug, Clone, PartialEq)]
pub struct NlcSpec {
    d: u64,
    n: u32,
    g: Vec<u64>,
    p: Distribution,
}

impl NlcSpec {
    pub fn new(d: u64, n: u32, g: Vec<u64>, p: Distribution) -> Result<Self> {
        if !is_prime(d) {
            return Err(Error::NotPrime(d));
        }
        if n == 0 {
            return Err(Error::Hypothesis("n must be at least 1".into()));
        }
        let questions = (d as u128).checked_pow(n).unwrap_or(u128::MAX);
        if questions > MAX_NLC_QUESTIONS as u128 {
            return Err(Error::NlcTooLarge(questions, MAX_NLC_QUESTIONS));
        }
        let prefixes = d.pow(n - 1) as usize;
        if g.len() != prefixes {
            return Err(Error::RaggedTable(format!("g has {} entries, expected d^(n-1) = {prefixes}", g.len())));
        }
        if let Some(z) = g.iter().position(|&t| t >= d) {
            return Err(Error::NotMember(format!("g[{z}] = {} is not a dit mod {d}", g[z])));
        }
        if p.len() != prefixes {
            return Err(Error::RaggedTable(format!("p has {} entries, expected {prefixes}", p.len())));
        }
        Ok(Self { d, n, g, p })
    }

    pub fn uniform(d: u64, n: u32, g: Vec<u64>) -> Result<Self> {
        let prefixes = (d as usize).checked_pow(n.saturating_sub(1)).unwrap_or(usize::MAX).min(MAX_NLC_QUESTIONS);
        Self::new(d, n, g, Distribution::uniform(prefixes))
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn g(&self) -> &[u64] {
        &self.g
    }

    pub fn p(&self) -> &Distribution {
        &self.p
    }

    pub fn prefixes(&self) -> usize {
        self.d.pow(self.n - 1) as usize
    }

    /// `d^n`.
    pub fn questions(&self) -> usize {
        self.d.pow(self.n) as usize
    }

    pub fn is_uniform(&self) -> bool {
        match &self.p {
            Distribution::Exact { numerators, .. } => numerators.iter().all(|&x| x == numerators[0]),
            Distribution::Float(v) => v.iter().all(|x| (x - 1.0 / v.len() as f64).abs() <= 1e-15),
        }
    }

    /// Digitwise sum of two prefix indices.
    fn add_prefix(&self, mut a: usize, mut b: usize) -> usize {
        let d = self.d as usize;
        let (mut out, mut place) = (0, 1);
        for _ in 1..self.n {
            out += ((a % d + b % d) % d) * place;
            a /= d;
            b /= d;
            place *= d;
        }
        out
    }
}

pub fn nlc_game(spec: &NlcSpec) -> Result<LinearGame> {
    let d = spec.d as usize;
    let m = spec.questions();
    let scale = spec.d.pow(spec.n + 1);
    let mut f = Vec::with_capacity(m * m);
    let mut prefix = Vec::with_capacity(m * m);
    for x in 0..m {
        for y in 0..m {
            let z = spec.add_prefix(x / d, y / d);
            f.push(spec.g[z] as usize * ((x % d + y % d) % d) % d);
            prefix.push(z);
        }
    }
    let q = match &spec.p {
        Distribution::Exact { numerators, denominator } => Distribution::Exact {
            numerators: prefix.iter().map(|&z| numerators[z]).collect(),
            denominator: denominator
                .checked_mul(scale)
                .ok_or_else(|| Error::InvalidProbability("denominator overflow".into()))?,
        },
        Distribution::Float(v) => Distribution::Float(prefix.iter().map(|&z| v[z] / scale as f64).collect()),
    };
    LinearGame::new(OutputGroup::cyclic(spec.d)?, m, m, q, f)
}

/// How often, and with what weight, each factor `t = g(z)` occurs across a
/// row of blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaProfile {
    /// `#{z : g(z) = t}`.
    pub counts: Vec<u64>,
    /// `sum_{g(z) = t} p(z) / d^(n+1)`.
    pub weighted: Vec<f64>,
    pub weighted_exact: Option<Vec<Rational>>,
    pub lambda_max: u64,
    pub weighted_max: f64,
    pub weighted_max_exact: Option<Rational>,
    /// Smallest `t` attaining the weighted maximum.
    pub mu: usize,
}

enum RowSums {
    Exact(Vec<u128>),
    Float(Vec<f64>),
}

/// Counts and `p`-sums of `t = g(row + y)` over the blocks `y` of one row.
fn row_sums(spec: &NlcSpec, row: usize) -> (Vec<u64>, RowSums) {
    let d = spec.d as usize;
    let mut counts = vec![0u64; d];
    let mut sums = match &spec.p {
        Distribution::Exact { .. } => RowSums::Exact(vec![0; d]),
        Distribution::Float(_) => RowSums::Float(vec![0.0; d]),
    };
    for y in 0..spec.prefixes() {
        let z = spec.add_prefix(row, y);
        let t = spec.g[z] as usize;
        counts[t] += 1;
        match (&mut sums, &spec.p) {
            (RowSums::Exact(s), Distribution::Exact { numerators, .. }) => s[t] += numerators[z] as u128,
            (RowSums::Float(s), Distribution::Float(v)) => s[t] += v[z],
            _ => unreachable!("sums follow the distribution kind"),
        }
    }
    (counts, sums)
}

pub fn lambda_profile(spec: &NlcSpec) -> Result<LambdaProfile> {
    let (counts, sums) = row_sums(spec, 0);
    if spec.n >= 2 {
        // second row: x' = 10...0
        let (counts2, sums2) = row_sums(spec, spec.prefixes() / spec.d as usize);
        let same = counts == counts2
            && match (&sums, &sums2) {
                (RowSums::Exact(a), RowSums::Exact(b)) => a == b,
                (RowSums::Float(a), RowSums::Float(b)) => a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 1e-14),
                _ => false,
            };
        if !same {
            return Err(Error::Verification {
                leg: "row independence".into(),
                detail: "rows 0 and 10..0 give different profiles".into(),
            });
        }
    }
    let scale = spec.d.pow(spec.n + 1);
    let lambda_max = *counts.iter().max().expect("d >= 2");
    let (weighted, weighted_exact) = match (&sums, &spec.p) {
        (RowSums::Exact(s), Distribution::Exact { denominator, .. }) => {
            let den = *denominator as i128 * scale as i128;
            let exact: Vec<Rational> = s.iter().map(|&x| Rational::new(x as i128, den)).collect();
            (exact.iter().map(to_f64).collect::<Vec<f64>>(), Some(exact))
        }
        (RowSums::Float(s), _) => (s.iter().map(|x| x / scale as f64).collect(), None),
        _ => unreachable!("sums follow the distribution kind"),
    };
    let mu = match &weighted_exact {
        Some(w) => argmax_by(w.len(), |a, b| w[a] > w[b]),
        None => argmax_by(weighted.len(), |a, b| weighted[a] > weighted[b]),
    };
    Ok(LambdaProfile {
        weighted_max: weighted[mu],
        weighted_max_exact: weighted_exact.as_ref().map(|w| w[mu]),
        counts,
        weighted,
        weighted_exact,
        lambda_max,
        mu,
    })
}

fn argmax_by(len: usize, greater: impl Fn(usize, usize) -> bool) -> usize {
    (1..len).fold(0, |best, i| if greater(i, best) { i } else { best })
}

pub fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// A number known as a double and, when the inputs are rational, exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NlcValue {
    pub value: f64,
    pub exact: Option<Rational>,
}

impl NlcValue {
    fn exact(r: Rational) -> Self {
        Self {
            value: to_f64(&r),
            exact: Some(r),
        }
    }

    fn float(value: f64) -> Self {
        Self { value, exact: None }
    }

    pub fn exact_string(&self) -> Option<String> {
        self.exact.map(|r| ratio_string(*r.numer() as u128, *r.denom() as u128))
    }
}

fn pow(d: u64, e: u32) -> i128 {
    (d as i128).pow(e)
}

/// `(1/d) (1 + (d-1) L / d^(n-1))` for the uniform distribution.
pub fn uniform_bound(d: u64, n: u32, lambda: u64) -> Rational {
    let d_ = d as i128;
    Rational::new(1, d_) * (Rational::from_integer(1) + Rational::new((d_ - 1) * lambda as i128, pow(d, n - 1)))
}

/// `(1/d) (1 + d^(n+1) (d-1) L~)`.
pub fn weighted_bound(d: u64, n: u32, weighted_max: Rational) -> Rational {
    let d_ = d as i128;
    Rational::new(1, d_) * (Rational::from_integer(1) + weighted_max * (pow(d, n + 1) * (d_ - 1)))
}

/// `(d^(n-1) / d^(2n)) (L d^2 + (d^(n-1) - L) d)`.
pub fn uniform_strategy_value(d: u64, n: u32, lambda: u64) -> Rational {
    let (d_, l) = (d as i128, lambda as i128);
    Rational::new(pow(d, n - 1), pow(d, 2 * n)) * (l * d_ * d_ + (pow(d, n - 1) - l) * d_)
}

/// `d^(n-1) (L~ d^2 + (1/d^(n+1) - L~) d)`.
pub fn weighted_strategy_value(d: u64, n: u32, weighted_max: Rational) -> Rational {
    let d_ = d as i128;
    (weighted_max * (d_ * d_) + (Rational::new(1, pow(d, n + 1)) - weighted_max) * d_) * pow(d, n - 1)
}

fn weighted_bound_f64(d: u64, n: u32, w: f64) -> f64 {
    (1.0 + (d as f64).powi(n as i32 + 1) * (d as f64 - 1.0) * w) / d as f64
}

fn weighted_strategy_f64(d: u64, n: u32, w: f64) -> f64 {
    let d_ = d as f64;
    d_.powi(n as i32 - 1) * (w * d_ * d_ + (1.0 / d_.powi(n as i32 + 1) - w) * d_)
}

/// Closed-form upper bound on the entangled value.
pub fn nlc_quantum_bound(spec: &NlcSpec) -> Result<NlcValue> {
    let profile = lambda_profile(spec)?;
    Ok(bound_from_profile(spec, &profile))
}

fn bound_from_profile(spec: &NlcSpec, profile: &LambdaProfile) -> NlcValue {
    if spec.is_uniform() {
        NlcValue::exact(uniform_bound(spec.d, spec.n, profile.lambda_max))
    } else if let Some(w) = profile.weighted_max_exact {
        NlcValue::exact(weighted_bound(spec.d, spec.n, w))
    } else {
        NlcValue::float(weighted_bound_f64(spec.d, spec.n, profile.weighted_max))
    }
}

fn strategy_formula(spec: &NlcSpec, profile: &LambdaProfile) -> NlcValue {
    if spec.is_uniform() {
        NlcValue::exact(uniform_strategy_value(spec.d, spec.n, profile.lambda_max))
    } else if let Some(w) = profile.weighted_max_exact {
        NlcValue::exact(weighted_strategy_value(spec.d, spec.n, w))
    } else {
        NlcValue::float(weighted_strategy_f64(spec.d, spec.n, profile.weighted_max))
    }
}

/// The prefix-blind strategy `a = mu x_n`, `b = mu y_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct NlcStrategy {
    pub mu: usize,
    pub alice: Vec<usize>,
    pub bob: Vec<usize>,
    /// Evaluated on the constructed game.
    pub value: NlcValue,
    /// The closed-form score.
    pub formula: NlcValue,
}

/// Plays `a = mu x_n`, `b = mu y_n` on the constructed game.
pub fn strategy_value(game: &LinearGame, d: usize, mu: usize) -> NlcValue {
    let m = game.m_a();
    let wins = |x: usize, y: usize| (mu * (x % d) + mu * (y % d)) % d == game.f(x, y);
    match game.distribution() {
        Distribution::Exact { numerators, denominator } => {
            let mut total: u128 = 0;
            for x in 0..m {
                for y in 0..m {
                    if wins(x, y) {
                        total += numerators[x * m + y] as u128;
                    }
                }
            }
            NlcValue::exact(Rational::new(total as i128, *denominator as i128))
        }
        Distribution::Float(v) => {
            let mut total = 0.0;
            for x in 0..m {
                for y in 0..m {
                    if wins(x, y) {
                        total += v[x * m + y];
                    }
                }
            }
            NlcValue::float(total)
        }
    }
}

pub fn nlc_classical_strategy(spec: &NlcSpec) -> Result<NlcStrategy> {
    let profile = lambda_profile(spec)?;
    let game = nlc_game(spec)?;
    Ok(strategy_for(spec, &profile, &game))
}

fn strategy_for(spec: &NlcSpec, profile: &LambdaProfile, game: &LinearGame) -> NlcStrategy {
    let d = spec.d as usize;
    let mu = profile.mu;
    let answers: Vec<usize> = (0..spec.questions()).map(|x| mu * (x % d) % d).collect();
    NlcStrategy {
        mu,
        alice: answers.clone(),
        bob: answers,
        value: strategy_value(game, d, mu),
        formula: strategy_formula(spec, profile),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EqualityReport {
    pub profile: LambdaProfile,
    pub bound: NlcValue,
    pub strategy: NlcStrategy,
    /// Exhaustive optimum, when `d^(d^n)` fits the enumeration budget.
    pub brute_force: Option<ClassicalValue>,
    /// The character-sum bound evaluated on the constructed game.
    pub spectral_bound: f64,
}

fn agree(a: &NlcValue, b: &NlcValue, tol: f64) -> bool {
    match (a.exact, b.exact) {
        (Some(x), Some(y)) => x == y,
        _ => (a.value - b.value).abs() <= tol,
    }
}

fn leg_failure(leg: &str, detail: String) -> Error {
    Error::Verification {
        leg: leg.into(),
        detail,
    }
}

/// Checks that the prefix-blind strategy attains the closed-form bound, that
/// exhaustive search finds nothing better, and that the character-sum bound
/// of the constructed game equals the closed form.
///
/// Exact legs compare rationals; legs involving doubles use `eq_tol`.
pub fn verify_theorem3(spec: &NlcSpec, eq_tol: f64) -> Result<EqualityReport> {
    let profile = lambda_profile(spec)?;
    let game = nlc_game(spec)?;
    let bound = bound_from_profile(spec, &profile);
    let strategy = strategy_for(spec, &profile, &game);

    if !agree(&strategy.value, &strategy.formula, eq_tol) {
        return Err(leg_failure(
            "strategy",
            format!("played value {} but closed form {}", strategy.value.value, strategy.formula.value),
        ));
    }
    if !agree(&strategy.value, &bound, eq_tol) {
        return Err(leg_failure(
            "strategy = bound",
            format!("strategy {} vs bound {}", strategy.value.value, bound.value),
        ));
    }
    if spec.is_uniform() {
        // the weighted closed forms must reduce to the uniform ones
        let w = profile.weighted_max_exact.unwrap_or(Rational::new(profile.lambda_max as i128, pow(spec.d, 2 * spec.n)));
        if weighted_bound(spec.d, spec.n, w) != uniform_bound(spec.d, spec.n, profile.lambda_max) {
            return Err(leg_failure("strategy = bound", "weighted and uniform bounds differ".into()));
        }
    }

    let brute_force = if enumeration_count(&game) <= ENUMERATION_BUDGET {
        let c = classical_value(&game)?;
        let found = match c.exact {
            Some(r) => NlcValue::exact(Rational::new(*r.numer() as i128, *r.denom() as i128)),
            None => NlcValue::float(c.value),
        };
        if !agree(&found, &bound, eq_tol) {
            return Err(leg_failure(
                "brute force",
                format!("exhaustive optimum {} vs bound {}", c.value, bound.value),
            ));
        }
        Some(c)
    } else {
        None
    };

    let spectral_bound = quantum_bound(&game).raw;
    if (spectral_bound - bound.value).abs() > eq_tol {
        return Err(leg_failure(
            "spectral bound",
            format!("character-sum bound {spectral_bound} vs closed form {}", bound.value),
        ));
    }

    Ok(EqualityReport {
        profile,
        bound,
        strategy,
        brute_force,
        spectral_bound,
    })
}

/// Unnormalized block `M[x][y] = zeta^(k t (x + y))` of size `d x d`.
pub fn building_block_matrix(d: u64, k: u64, t: u64) -> CMatrix {
    let d_ = d as usize;
    CMatrix::from_fn(d_, d_, |x, y| root_of_unity(k * t % d * ((x + y) as u64 % d) % d, d))
}

/// Columns `f_{j_1} (x) ... (x) f_{j_n}` with `f_j = (1, zeta^j, ...) / sqrt(d)`,
/// indexed like questions.
pub fn fourier_tensor(d: u64, n: u32) -> CMatrix {
    let size = d.pow(n) as usize;
    let norm = (size as f64).sqrt().recip();
    CMatrix::from_fn(size, size, |x, j| {
        let (mut x, mut j, mut dot) = (x as u64, j as u64, 0);
        for _ in 0..n {
            dot += (x % d) * (j % d);
            x /= d;
            j /= d;
        }
        root_of_unity(dot % d, d) * norm
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockCirculantReport {
    pub k: u64,
    /// Largest off-diagonal entry of the Fourier-conjugated `Phi_k^dag Phi_k`,
    /// relative to its largest diagonal entry.
    pub off_diagonal: f64,
    pub top_eigenvalue: f64,
    /// Rayleigh quotients of `f_0 (x) ... (x) f_0 (x) f_j`.
    pub rayleigh: Vec<f64>,
    pub top_mode: usize,
    pub residual: f64,
    pub norm: f64,
    /// `d L~`, which is `d L / d^(2n)` for uniform `p`.
    pub expected_norm: f64,
    /// `L~(k)` read off the spectrum.
    pub measured_max: f64,
}

/// Checks the Fourier eigenstructure of `Phi_k` for `1 <= k < d`.
pub fn verify_block_circulant(spec: &NlcSpec, k: u64) -> Result<BlockCirculantReport> {
    let d = spec.d;
    if k == 0 || k >= d {
        return Err(Error::Hypothesis(format!("k = {k} must be a nonzero dit mod {d}")));
    }
    let m = spec.questions();
    if m > MAX_BLOCK_QUESTIONS {
        return Err(Error::NlcTooLarge(m as u128, MAX_BLOCK_QUESTIONS));
    }
    let profile = lambda_profile(spec)?;
    let game = nlc_game(spec)?;
    let phi = game_matrix(&game, k as usize)?;
    let gram = matmul_adjoint(&phi);
    let u = fourier_tensor(d, spec.n);
    let conj = u.adjoint().matmul(&gram)?.matmul(&u)?;

    let mut diag_max: f64 = 0.0;
    let mut off_max: f64 = 0.0;
    for i in 0..m {
        for j in 0..m {
            if i == j {
                diag_max = diag_max.max(conj[(i, i)].norm());
            } else {
                off_max = off_max.max(conj[(i, j)].norm());
            }
        }
    }
    let off_diagonal = off_max / diag_max.max(f64::MIN_POSITIVE);
    if off_diagonal > STRUCTURE_TOL {
        return Err(leg_failure("fourier diagonalization", format!("k = {k}: off-diagonal {off_diagonal:e}")));
    }

    let eigen = hermitian_eigen(&gram)?;
    let top_eigenvalue = eigen.values[0];
    // prefix modes all zero: columns 0..d
    let rayleigh: Vec<f64> = (0..d as usize).map(|j| conj[(j, j)].re).collect();
    let top_mode = argmax_by(rayleigh.len(), |a, b| rayleigh[a] > rayleigh[b]);
    let v = u.column(top_mode);
    let gv = gram.mul_vec(&v);
    let residual = gv
        .iter()
        .zip(&v)
        .map(|(a, b)| (a - b * rayleigh[top_mode]).norm_sqr())
        .sum::<f64>()
        .sqrt();
    if (top_eigenvalue - rayleigh[top_mode]).abs() > STRUCTURE_TOL || residual > STRUCTURE_TOL {
        return Err(leg_failure(
            "top eigenvector",
            format!(
                "k = {k}: top eigenvalue {top_eigenvalue} vs best prefix-constant mode {}, residual {residual:e}",
                rayleigh[top_mode]
            ),
        ));
    }

    let norm = spectral_norm(&phi);
    let expected_norm = d as f64 * profile.weighted_max;
    let uniform_ok = !spec.is_uniform()
        || (norm - d as f64 * profile.lambda_max as f64 / (d as f64).powi(2 * spec.n as i32)).abs() <= STRUCTURE_TOL;
    if (norm - expected_norm).abs() > STRUCTURE_TOL || !uniform_ok {
        return Err(leg_failure("norm", format!("k = {k}: ||Phi_k|| = {norm}, expected {expected_norm}")));
    }

    // mode j carries the factor t = -j / k
    let k_inv = (1..d).find(|x| x * k % d == 1).expect("d prime");
    let mut measured_max: f64 = 0.0;
    for (j, r) in rayleigh.iter().enumerate() {
        let measured = r.max(0.0).sqrt() / d as f64;
        let t = ((d - j as u64 % d) % d * k_inv % d) as usize;
        if (measured - profile.weighted[t]).abs() > STRUCTURE_TOL {
            return Err(leg_failure(
                "lambda(k)",
                format!("k = {k}, mode {j}: measured {measured}, profile {}", profile.weighted[t]),
            ));
        }
        measured_max = measured_max.max(measured);
    }

    Ok(BlockCirculantReport {
        k,
        off_diagonal,
        top_eigenvalue,
        rayleigh,
        top_mode,
        residual,
        norm,
        expected_norm,
        measured_max,
    })
}

/// [`verify_block_circulant`] for every nonzero `k`, plus the check that the
/// measured maximum does not depend on `k`.
pub fn verify_block_circulant_all(spec: &NlcSpec) -> Result<Vec<BlockCirculantReport>> {
    let reports: Vec<BlockCirculantReport> = (1..spec.d).map(|k| verify_block_circulant(spec, k)).collect::<Result<_>>()?;
    let first = reports[0].measured_max;
    if let Some(r) = reports.iter().find(|r| (r.measured_max - first).abs() > STRUCTURE_TOL) {
        return Err(leg_failure(
            "lambda(k)",
            format!("k = 1 gives {first}, k = {} gives {}", r.k, r.measured_max),
        ));
    }
    Ok(reports)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct NlcFile {
    d: u64,
    n: u32,
    g: Vec<u64>,
    p: Value,
}

/// `{"d": 3, "n": 2, "g": [0, 1, 2], "p": "uniform"}`; `p` may also be a list
/// of `[num, den]` pairs or of numbers, indexed like `g`.
pub fn nlc_spec_from_json(text: &str) -> Result<NlcSpec> {
    let file: NlcFile = serde_json::from_str(text)?;
    if file.p.as_str() == Some("uniform") {
        return NlcSpec::uniform(file.d, file.n, file.g);
    }
    let entries = file.p.as_array().ok_or_else(|| Error::Parse("p must be \"uniform\" or an array".into()))?;
    let probs: Vec<Prob> = entries.iter().map(parse_prob).collect::<Result<_>>()?;
    let p = if probs.iter().all(|p| matches!(p, Prob::Rational(..))) {
        let ratios: Vec<Ratio<u64>> = probs
            .iter()
            .enumerate()
            .map(|(i, p)| match *p {
                Prob::Rational(_, den) if den <= 0 => Err(Error::InvalidProbability(format!("p[{i}] has denominator {den}"))),
                Prob::Rational(num, den) if num < 0 => Err(Error::NegativeProbability {
                    u: i,
                    v: 0,
                    value: num as f64 / den as f64,
                }),
                Prob::Rational(num, den) => Ok(Ratio::new(num as u64, den as u64)),
                Prob::Float(_) => unreachable!("all rational"),
            })
            .collect::<Result<_>>()?;
        Distribution::from_ratios(&ratios)?
    } else {
        let values: Vec<f64> = probs
            .iter()
            .map(|p| match *p {
                Prob::Float(x) => x,
                Prob::Rational(num, den) => num as f64 / den as f64,
            })
            .collect();
        if let Some(i) = values.iter().position(|&x| x.is_nan() || x < 0.0) {
            return Err(Error::NegativeProbability { u: i, v: 0, value: values[i] });
        }
        Distribution::from_floats(values)?
    };
    NlcSpec::new(file.d, file.n, file.g, p)
}

/// Machine-readable summary for one spec.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NlcReport {
    pub schema: &'static str,
    pub d: u64,
    pub n: u32,
    pub uniform: bool,
    pub lambda: Vec<u64>,
    pub lambda_weighted: Vec<String>,
    #[serde(rename = "Lambda")]
    pub lambda_max: u64,
    #[serde(rename = "Lambda_weighted")]
    pub weighted_max: String,
    pub mu: usize,
    pub strategy_value: String,
    pub strategy_value_exact: Option<String>,
    pub quantum_bound: String,
    pub quantum_bound_exact: Option<String>,
    pub verified: Option<Verification>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verification {
    pub brute_force: Option<String>,
    pub spectral_bound: String,
    pub block_circulant: Vec<BlockSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockSummary {
    pub k: u64,
    pub off_diagonal: String,
    pub norm: String,
    pub measured_max: String,
}

fn rational_or_sig(exact: Option<&Rational>, value: f64) -> String {
    match exact {
        Some(r) => ratio_string(*r.numer() as u128, *r.denom() as u128),
        None => crate::format::sig(value),
    }
}

/// Builds the report; with `verify`, also runs [`verify_theorem3`] and, when
/// `d^n` is small enough, [`verify_block_circulant_all`].
pub fn nlc_report(spec: &NlcSpec, verify: bool, eq_tol: f64) -> Result<NlcReport> {
    let profile = lambda_profile(spec)?;
    let strategy = nlc_classical_strategy(spec)?;
    let bound = bound_from_profile(spec, &profile);
    let verified = if verify {
        let equality = verify_theorem3(spec, eq_tol)?;
        let blocks = if spec.questions() <= MAX_BLOCK_QUESTIONS {
            verify_block_circulant_all(spec)?
        } else {
            Vec::new()
        };
        Some(Verification {
            brute_force: equality.brute_force.map(|c| match c.exact {
                Some(r) => ratio_string(*r.numer() as u128, *r.denom() as u128),
                None => crate::format::sig(c.value),
            }),
            spectral_bound: crate::format::sig(equality.spectral_bound),
            block_circulant: blocks
                .iter()
                .map(|b| BlockSummary {
                    k: b.k,
                    off_diagonal: crate::format::sig(b.off_diagonal),
                    norm: crate::format::sig(b.norm),
                    measured_max: crate::format::sig(b.measured_max),
                })
                .collect(),
        })
    } else {
        None
    };
    Ok(NlcReport {
        schema: REPORT_SCHEMA,
        d: spec.d,
        n: spec.n,
        uniform: spec.is_uniform(),
        lambda_weighted: match &profile.weighted_exact {
            Some(w) => w.iter().map(|r| rational_or_sig(Some(r), 0.0)).collect(),
            None => profile.weighted.iter().map(|&x| crate::format::sig(x)).collect(),
        },
        weighted_max: rational_or_sig(profile.weighted_max_exact.as_ref(), profile.weighted_max),
        lambda: profile.counts,
        lambda_max: profile.lambda_max,
        mu: profile.mu,
        strategy_value: crate::format::sig(strategy.value.value),
        strategy_value_exact: strategy.value.exact_string(),
        quantum_bound: crate::format::sig(bound.value),
        quantum_bound_exact: bound.exact_string(),
        verified,
    })
}
