//! Values and bounds of a linear game.
//!
//! - [`quantum_bound`]: the character-sum bound
//!   `(1/|G|) (1 + sqrt(mA mB) sum_{x != e} ||Phi_x||)` on the entangled value.
//! - [`classical_value`]: the exact deterministic optimum, by enumerating
//!   Alice's assignments and letting Bob best-respond question by question.
//! - [`lemma1_bound`]: the shared-randomness lower bound `(1/|G|)(1 + (|G|-1)/m)`.
//! - [`ns_winning_box`]: the no-signaling box that always wins.

use std::ops::Add;

use num_complex::Complex64;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::format::{ratio_string, serialize_sig};
use crate::games::{evaluate_box, json::group_to_json, Distribution, LinearGame, ProbabilityBox};
use crate::numerics::{numerical_rank, spectral_norm, CMatrix, DEFAULT_RANK_TOL};
use crate::error::{Error, Result};

/// Maximum number of Alice assignments `|G|^mA` that [`classical_value`] enumerates.
pub const ENUMERATION_BUDGET: u128 = 1_000_000;

pub const REPORT_SCHEMA: &str = "lingame.game-report/1";

/// Assignments per parallel work unit.
const CHUNK: u64 = 4096;

/// `Phi_x = sum_{u,v} q(u,v) chi_x(f(u,v)) |u><v|`.
pub fn game_matrix(game: &LinearGame, x: usize) -> Result<CMatrix> {
    let group = game.group();
    if x == 0 {
        return Err(Error::IdentityCharacter);
    }
    if x >= group.order() {
        return Err(Error::NotMember(format!("character index {x}")));
    }
    // chi_x over the alphabet, evaluated once per call
    let chi: Vec<Complex64> = (0..group.order()).map(|a| group.character(x, a)).collect();
    Ok(CMatrix::from_fn(game.m_a(), game.m_b(), |u, v| chi[game.f(u, v)] * game.q(u, v)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharacterNorm {
    pub character: usize,
    #[serde(serialize_with = "serialize_sig")]
    pub norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumBound {
    /// The analytic expression, possibly above 1.
    pub raw: f64,
    /// `min(raw, 1)`.
    pub clamped: f64,
    pub norms: Vec<CharacterNorm>,
}

pub fn quantum_bound(game: &LinearGame) -> QuantumBound {
    let n = game.group().order();
    let norms: Vec<CharacterNorm> = (1..n)
        .map(|x| CharacterNorm {
            character: x,
            norm: spectral_norm(&game_matrix(game, x).expect("non-identity character")),
        })
        .collect();
    let sum: f64 = norms.iter().map(|c| c.norm).sum();
    let raw = (1.0 + ((game.m_a() * game.m_b()) as f64).sqrt() * sum) / n as f64;
    QuantumBound {
        raw,
        clamped: raw.min(1.0),
        norms,
    }
}

/// `(1/|G|) (1 + (|G| - 1) / min(mA, mB))`.
pub fn lemma1_bound(game: &LinearGame) -> f64 {
    let n = game.group().order() as f64;
    let m = game.m_a().min(game.m_b()) as f64;
    (1.0 + (n - 1.0) / m) / n
}

/// `P(a, b | u, v) = 1/|G|` when `a + b = f(u, v)`, else 0.
pub fn ns_winning_box(game: &LinearGame) -> ProbabilityBox {
    let group = game.group();
    let n = group.order();
    let w = 1.0 / n as f64;
    ProbabilityBox::from_fn(game.m_a(), game.m_b(), n, |u, v, a, b| {
        if group.add(a, b) == game.f(u, v) {
            w
        } else {
            0.0
        }
    })
    .expect("each row holds n entries of 1/n")
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalValue {
    pub value: f64,
    /// Present when `q` is rational.
    pub exact: Option<Ratio<u64>>,
    pub alice: Vec<usize>,
    pub bob: Vec<usize>,
}

/// `|G|^mA`, saturating.
pub fn enumeration_count(game: &LinearGame) -> u128 {
    (game.group().order() as u128)
        .checked_pow(game.m_a() as u32)
        .unwrap_or(u128::MAX)
}

/// Exact classical value with an optimal deterministic strategy.
///
/// Ties are broken toward the lexicographically smallest Alice assignment
/// (question 0 most significant) and, per Bob question, the smallest answer.
/// The result does not depend on how the enumeration is split across threads.
pub fn classical_value(game: &LinearGame) -> Result<ClassicalValue> {
    let count = enumeration_count(game);
    if count > ENUMERATION_BUDGET {
        return Err(Error::Budget {
            count,
            limit: ENUMERATION_BUDGET,
        });
    }
    match game.distribution() {
        Distribution::Exact { numerators, denominator } => {
            let (score, alice, bob) = search(game, numerators, count as u64);
            Ok(ClassicalValue {
                value: score as f64 / *denominator as f64,
                exact: Some(Ratio::new(score, *denominator)),
                alice,
                bob,
            })
        }
        Distribution::Float(weights) => {
            let (score, alice, bob) = search(game, weights, count as u64);
            Ok(ClassicalValue {
                value: score,
                exact: None,
                alice,
                bob,
            })
        }
    }
}

trait Weight: Copy + Default + PartialOrd + Add<Output = Self> + Send + Sync {}
impl Weight for u64 {}
impl Weight for f64 {}

fn search<W: Weight>(game: &LinearGame, weights: &[W], count: u64) -> (W, Vec<usize>, Vec<usize>) {
    let chunks = count.div_ceil(CHUNK);
    let (best, index) = (0..chunks)
        .into_par_iter()
        .map(|c| best_in_range(game, weights, c * CHUNK, ((c + 1) * CHUNK).min(count)))
        .reduce_with(|x, y| if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) { y } else { x })
        .expect("at least one assignment");
    let alice = decode(index, game.group().order(), game.m_a());
    let (score, bob) = best_response(game, weights, &alice, &mut vec![W::default(); game.group().order()]);
    debug_assert!(score == best);
    (best, alice, bob)
}

/// Mixed-radix digits of `index`, question 0 most significant.
fn decode(mut index: u64, n: usize, m: usize) -> Vec<usize> {
    let mut digits = vec![0; m];
    for d in digits.iter_mut().rev() {
        *d = (index % n as u64) as usize;
        index /= n as u64;
    }
    digits
}

fn best_in_range<W: Weight>(game: &LinearGame, weights: &[W], start: u64, end: u64) -> (W, u64) {
    let n = game.group().order();
    let mut alice = decode(start, n, game.m_a());
    let mut scratch = vec![W::default(); n];
    let mut best = (W::default(), start);
    let mut first = true;
    for index in start..end {
        let (score, _) = best_response(game, weights, &alice, &mut scratch);
        if first || score > best.0 {
            best = (score, index);
            first = false;
        }
        // increment the counter, last question fastest
        for d in alice.iter_mut().rev() {
            *d += 1;
            if *d < n {
                break;
            }
            *d = 0;
        }
    }
    best
}

/// Bob's best answer to each question against a fixed Alice assignment.
fn best_response<W: Weight>(game: &LinearGame, weights: &[W], alice: &[usize], scratch: &mut [W]) -> (W, Vec<usize>) {
    let group = game.group();
    let m_b = game.m_b();
    let mut total = W::default();
    let mut bob = Vec::with_capacity(m_b);
    for v in 0..m_b {
        scratch.iter_mut().for_each(|s| *s = W::default());
        for (u, &a) in alice.iter().enumerate() {
            let b = group.sub(game.f(u, v), a);
            scratch[b] = scratch[b] + weights[u * m_b + v];
        }
        let mut arg = 0;
        for b in 1..scratch.len() {
            if scratch[b] > scratch[arg] {
                arg = b;
            }
        }
        total = total + scratch[arg];
        bob.push(arg);
    }
    (total, bob)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PseudoTelepathy {
    pub rank: usize,
    pub rank1: bool,
    pub classical_win: bool,
}

/// Checks that `rank(Phi_1) == 1` exactly when the game is classically winnable,
/// for uniform total-function XOR-d games.
pub fn pseudo_telepathy_check(game: &LinearGame, rank_tol: f64) -> Result<PseudoTelepathy> {
    if !game.group().is_cyclic() {
        return Err(Error::Hypothesis(format!("{} is not cyclic", game.group())));
    }
    if !game.is_uniform() {
        return Err(Error::Hypothesis("input distribution is not uniform".into()));
    }
    let rank = numerical_rank(&game_matrix(game, 1)?, rank_tol);
    let classical = classical_value(game)?;
    let classical_win = match classical.exact {
        Some(r) => r == Ratio::from_integer(1),
        None => (classical.value - 1.0).abs() <= 1e-12,
    };
    let result = PseudoTelepathy {
        rank,
        rank1: rank == 1,
        classical_win,
    };
    if result.rank1 != result.classical_win {
        return Err(Error::Verification {
            leg: "rank-1 equivalence".into(),
            detail: format!("rank {rank} but classical win = {classical_win}"),
        });
    }
    Ok(result)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Strategy {
    pub alice: Vec<usize>,
    pub bob: Vec<usize>,
}

/// Everything computed about one game.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GameReport {
    pub schema: &'static str,
    pub group: serde_json::Value,
    #[serde(rename = "mA")]
    pub m_a: usize,
    #[serde(rename = "mB")]
    pub m_b: usize,
    #[serde(serialize_with = "serialize_sig")]
    pub classical_value: f64,
    pub classical_value_exact: Option<String>,
    pub classical_strategy: Strategy,
    #[serde(serialize_with = "serialize_sig")]
    pub quantum_bound: f64,
    #[serde(serialize_with = "serialize_sig")]
    pub quantum_bound_raw: f64,
    pub norms: Vec<CharacterNorm>,
    #[serde(serialize_with = "serialize_sig")]
    pub lemma1_bound: f64,
    #[serde(serialize_with = "serialize_sig")]
    pub ns_value: f64,
    pub rank_phi1: usize,
    /// The quantum bound does not rule out winning with certainty.
    pub pseudo_telepathy_possible: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct AnalysisOptions {
    pub rank_tol: f64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            rank_tol: DEFAULT_RANK_TOL,
        }
    }
}

pub fn analyze(game: &LinearGame, opts: AnalysisOptions) -> Result<GameReport> {
    let classical = classical_value(game)?;
    let bound = quantum_bound(game);
    let ns_box = ns_winning_box(game);
    let ns_value = evaluate_box(game, &ns_box)?;
    let rank_phi1 = numerical_rank(&game_matrix(game, 1)?, opts.rank_tol);
    Ok(GameReport {
        schema: REPORT_SCHEMA,
        group: group_to_json(game.group()),
        m_a: game.m_a(),
        m_b: game.m_b(),
        classical_value: classical.value,
        classical_value_exact: classical.exact.map(|r| ratio_string(*r.numer() as u128, *r.denom() as u128)),
        classical_strategy: Strategy {
            alice: classical.alice,
            bob: classical.bob,
        },
        quantum_bound: bound.clamped,
        quantum_bound_raw: bound.raw,
        norms: bound.norms,
        lemma1_bound: lemma1_bound(game),
        ns_value,
        rank_phi1,
        pseudo_telepathy_possible: bound.raw >= 1.0 - 1e-9,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{FiniteAbelianGroup, FiniteField, OutputGroup};
    use crate::games::{chsh_d, QTable};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn chsh2() -> LinearGame {
        LinearGame::from_tables(OutputGroup::cyclic(2).unwrap(), QTable::Uniform, &[vec![0, 0], vec![0, 1]]).unwrap()
    }

    fn random_uniform_game(rng: &mut ChaCha8Rng, d: u64, m_a: usize, m_b: usize) -> LinearGame {
        let f: Vec<Vec<usize>> = (0..m_a).map(|_| (0..m_b).map(|_| rng.random_range(0..d as usize)).collect()).collect();
        LinearGame::from_tables(OutputGroup::cyclic(d).unwrap(), QTable::Uniform, &f).unwrap()
    }

    fn random_weighted_game(rng: &mut ChaCha8Rng, group: OutputGroup, m_a: usize, m_b: usize) -> LinearGame {
        let n = group.order();
        let f: Vec<Vec<usize>> = (0..m_a).map(|_| (0..m_b).map(|_| rng.random_range(0..n)).collect()).collect();
        let q: Vec<Vec<Ratio<u64>>> = {
            let raw: Vec<Vec<u64>> = (0..m_a).map(|_| (0..m_b).map(|_| rng.random_range(0..5)).collect()).collect();
            let total: u64 = raw.iter().flatten().sum::<u64>().max(1);
            if raw.iter().flatten().all(|&x| x == 0) {
                vec![vec![Ratio::new(1, (m_a * m_b) as u64); m_b]; m_a]
            } else {
                raw.iter().map(|r| r.iter().map(|&x| Ratio::new(x, total)).collect()).collect()
            }
        };
        LinearGame::from_tables(group, QTable::Exact(q), &f).unwrap()
    }

    /// Independent oracle: enumerate both parties' assignments.
    fn double_enumeration(game: &LinearGame) -> Ratio<u64> {
        let Distribution::Exact { numerators, denominator } = game.distribution() else {
            panic!("exact game expected")
        };
        let n = game.group().order();
        let (m_a, m_b) = (game.m_a(), game.m_b());
        let mut best = 0;
        for ai in 0..(n as u64).pow(m_a as u32) {
            let alice = decode(ai, n, m_a);
            for bi in 0..(n as u64).pow(m_b as u32) {
                let bob = decode(bi, n, m_b);
                let mut score = 0;
                for u in 0..m_a {
                    for v in 0..m_b {
                        if game.group().add(alice[u], bob[v]) == game.f(u, v) {
                            score += numerators[u * m_b + v];
                        }
                    }
                }
                best = best.max(score);
            }
        }
        Ratio::new(best, *denominator)
    }

    #[test]
    fn chsh2_matrix_and_bound() {
        let g = chsh2();
        let phi = game_matrix(&g, 1).unwrap();
        let expected = CMatrix::from_real_rows(&[vec![0.25, 0.25], vec![0.25, -0.25]]).unwrap();
        assert!(phi.sub(&expected).unwrap().max_abs() < 1e-15);
        let b = quantum_bound(&g);
        assert!((b.raw - (0.5 + 1.0 / (2.0 * 2f64.sqrt()))).abs() < 1e-12);
        assert!((b.raw - 0.8535533906).abs() < 1e-9);
        assert!(matches!(game_matrix(&g, 0), Err(Error::IdentityCharacter)));
    }

    #[test]
    fn chsh2_classical() {
        // oracle: 16 (Alice, Bob) pairs, best 3 of 4 constraints
        let c = classical_value(&chsh2()).unwrap();
        assert_eq!(c.exact, Some(Ratio::new(3, 4)));
        assert_eq!(double_enumeration(&chsh2()), Ratio::new(3, 4));
        // tie-break: Alice (0,0) is the first optimum, Bob answers (0,0)
        assert_eq!(c.alice, vec![0, 0]);
        assert_eq!(c.bob, vec![0, 0]);
    }

    #[test]
    fn chsh3_classical_and_rank() {
        let g = chsh_d(3, 1).unwrap();
        let c = classical_value(&g).unwrap();
        assert_eq!(c.exact.unwrap(), double_enumeration(&g));
        assert!(c.value >= lemma1_bound(&g) - 1e-15);
        assert!((lemma1_bound(&g) - 5.0 / 9.0).abs() < 1e-15);
        assert_eq!(numerical_rank(&game_matrix(&g, 1).unwrap(), DEFAULT_RANK_TOL), 3);
        let pt = pseudo_telepathy_check(&g, DEFAULT_RANK_TOL).unwrap();
        assert_eq!((pt.rank1, pt.classical_win), (false, false));
    }

    #[test]
    fn chsh3_phi_identities() {
        let g = chsh_d(3, 1).unwrap();
        let p1 = game_matrix(&g, 1).unwrap();
        let p2 = game_matrix(&g, 2).unwrap();
        let gram = crate::numerics::matmul_adjoint(&p1);
        assert!(gram.sub(&CMatrix::identity(3).scale(Complex64::new(1.0 / 27.0, 0.0))).unwrap().max_abs() < 1e-15);
        // Phi_2 is Phi_1 with rows u -> 2u
        let permuted = CMatrix::from_fn(3, 3, |u, v| p1[((2 * u) % 3, v)]);
        assert!(permuted.sub(&p2).unwrap().max_abs() < 1e-15);
        for c in quantum_bound(&g).norms {
            assert!((c.norm - 1.0 / (3.0 * 3f64.sqrt())).abs() < 1e-12);
        }
    }

    #[test]
    fn rank_one_games_are_winnable() {
        // f(u, v) = s(u) + t(v)
        let s = [2, 0, 1, 1];
        let t = [1, 2, 0];
        let f: Vec<Vec<usize>> = s.iter().map(|&a| t.iter().map(|&b| (a + b) % 3).collect()).collect();
        let g = LinearGame::from_tables(OutputGroup::cyclic(3).unwrap(), QTable::Uniform, &f).unwrap();
        let c = classical_value(&g).unwrap();
        assert_eq!(c.exact, Some(Ratio::from_integer(1)));
        assert!((quantum_bound(&g).raw - 1.0).abs() < 1e-12);
        for x in 1..3 {
            assert!((spectral_norm(&game_matrix(&g, x).unwrap()) - 1.0 / 12f64.sqrt()).abs() < 1e-12);
        }
        let pt = pseudo_telepathy_check(&g, DEFAULT_RANK_TOL).unwrap();
        assert_eq!((pt.rank1, pt.classical_win), (true, true));
        let report = analyze(&g, AnalysisOptions::default()).unwrap();
        assert!(report.pseudo_telepathy_possible);
        assert_eq!(report.rank_phi1, 1);
    }

    #[test]
    fn uniform_game_matrix_row_and_column_sums() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = random_uniform_game(&mut rng, 3, 4, 4);
        for x in 1..3 {
            let phi = game_matrix(&g, x).unwrap();
            assert!((phi.norm_one() - 0.25).abs() < 1e-15);
            assert!((phi.norm_inf() - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn lemma1_values() {
        assert!((lemma1_bound(&chsh2()) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn ns_box_wins_with_uniform_marginals() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for g in [chsh2(), chsh_d(2, 2).unwrap(), random_uniform_game(&mut rng, 3, 2, 4)] {
            let b = ns_winning_box(&g);
            assert!((evaluate_box(&g, &b).unwrap() - 1.0).abs() < 1e-12);
            assert!(b.is_no_signaling());
            let n = g.group().order() as f64;
            for u in 0..g.m_a() {
                for v in 0..g.m_b() {
                    assert!(b.alice_marginal(u, v).iter().all(|p| (p - 1.0 / n).abs() < 1e-12));
                    assert!(b.bob_marginal(u, v).iter().all(|p| (p - 1.0 / n).abs() < 1e-12));
                }
            }
        }
        // CHSH-2: the PR box
        let pr = ns_winning_box(&chsh2());
        for (u, v) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                let expected = if (a ^ b) == (u & v) { 0.5 } else { 0.0 };
                assert_eq!(pr.p(u, v, a, b), expected);
            }
        }
    }

    #[test]
    fn best_response_matches_double_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let groups = [
            OutputGroup::cyclic(2).unwrap(),
            OutputGroup::cyclic(3).unwrap(),
            OutputGroup::cyclic(4).unwrap(),
            OutputGroup::Product(FiniteAbelianGroup::new(vec![2, 2]).unwrap()),
        ];
        let mut checked = 0;
        while checked < 100 {
            let group = groups[rng.random_range(0..groups.len())].clone();
            let (m_a, m_b) = (rng.random_range(1..=4), rng.random_range(1..=4));
            if (group.order() as u64).pow((m_a + m_b) as u32) > 100_000 {
                continue;
            }
            let g = random_weighted_game(&mut rng, group, m_a, m_b);
            let c = classical_value(&g).unwrap();
            assert_eq!(c.exact.unwrap(), double_enumeration(&g));
            let b = ProbabilityBox::deterministic(g.group(), &c.alice, &c.bob).unwrap();
            assert!((evaluate_box(&g, &b).unwrap() - c.value).abs() < 1e-12);
            checked += 1;
        }
    }

    #[test]
    fn ordering_chain_on_random_corpus() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let d = rng.random_range(2..=3);
            let (m_a, m_b) = (rng.random_range(1..=4), rng.random_range(1..=4));
            let g = random_uniform_game(&mut rng, d, m_a, m_b);
            let report = analyze(&g, AnalysisOptions::default()).unwrap();
            assert!(1.0 / d as f64 <= report.lemma1_bound + 1e-15);
            assert!(report.lemma1_bound <= report.classical_value + 1e-12);
            assert!(report.classical_value <= report.quantum_bound + 1e-9);
            assert!((report.ns_value - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bound_invariant_under_relabeling() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let g = random_weighted_game(&mut rng, OutputGroup::cyclic(5).unwrap(), 4, 3);
            let base = quantum_bound(&g).raw;
            let p = g.permute_questions(&[3, 1, 0, 2], &[2, 0, 1]).unwrap();
            assert!((quantum_bound(&p).raw - base).abs() < 1e-12);
            // automorphism x -> 2x of Z_5
            let m = g.map_targets(&[0, 2, 4, 1, 3]).unwrap();
            assert!((quantum_bound(&m).raw - base).abs() < 1e-12);
        }
        let klein = OutputGroup::Product(FiniteAbelianGroup::new(vec![2, 2]).unwrap());
        let g = random_weighted_game(&mut rng, klein, 3, 3);
        let base = quantum_bound(&g).raw;
        // swap the two coordinates: (a, b) -> (b, a), indices 1 <-> 2
        let m = g.map_targets(&[0, 2, 1, 3]).unwrap();
        assert!((quantum_bound(&m).raw - base).abs() < 1e-12);
    }

    #[test]
    fn bound_independent_of_character_identification() {
        // GF(4) trace characters vs componentwise Z2 x Z2 characters
        let field_game = chsh_d(2, 2).unwrap();
        let klein = OutputGroup::Product(FiniteAbelianGroup::new(vec![2, 2]).unwrap());
        // field index c0 + 2 c1 vs product index 2 x1 + x2: swap digits
        let swap = |i: usize| ((i & 1) << 1) | (i >> 1);
        let f: Vec<Vec<usize>> = (0..4).map(|u| (0..4).map(|v| swap(field_game.f(u, v))).collect()).collect();
        let product_game = LinearGame::from_tables(klein, QTable::Uniform, &f).unwrap();
        let a = quantum_bound(&field_game).raw;
        let b = quantum_bound(&product_game).raw;
        assert!((a - b).abs() < 1e-12);
        assert!((a - 0.625).abs() < 1e-12);
    }

    #[test]
    fn chsh_bound_independent_of_modulus() {
        for modulus in FiniteField::irreducible_monics(3, 2).unwrap() {
            let field = FiniteField::with_modulus(3, modulus).unwrap();
            let d = field.order();
            let mut f = Vec::new();
            for u in field.elements() {
                for v in field.elements() {
                    f.push(field.index_of(&field.mul(&u, &v).unwrap()).unwrap());
                }
            }
            let g = LinearGame::new(OutputGroup::Field(field), d, d, Distribution::uniform(d * d), f).unwrap();
            let expected = 1.0 / 9.0 + 8.0 / 27.0;
            assert!((quantum_bound(&g).raw - expected).abs() < 1e-12);
        }
        // GF(4) has a single irreducible quadratic; the GF(8) pair exercises the cubic case
        for modulus in FiniteField::irreducible_monics(2, 3).unwrap() {
            let field = FiniteField::with_modulus(2, modulus).unwrap();
            let mut f = Vec::new();
            for u in field.elements() {
                for v in field.elements() {
                    f.push(field.index_of(&field.mul(&u, &v).unwrap()).unwrap());
                }
            }
            let g = LinearGame::new(OutputGroup::Field(field), 8, 8, Distribution::uniform(64), f).unwrap();
            let expected = 1.0 / 8.0 + 7.0 / (8.0 * 8f64.sqrt());
            assert!((quantum_bound(&g).raw - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn budget_error_reports_count() {
        let f = vec![vec![0; 2]; 13];
        let g = LinearGame::from_tables(OutputGroup::cyclic(3).unwrap(), QTable::Uniform, &f).unwrap();
        assert_eq!(
            classical_value(&g),
            Err(Error::Budget {
                count: 1_594_323,
                limit: ENUMERATION_BUDGET
            })
        );
    }

    #[test]
    fn hypotheses_enforced() {
        let q = QTable::Exact(vec![vec![Ratio::new(1, 2), Ratio::new(1, 4)], vec![Ratio::new(1, 8), Ratio::new(1, 8)]]);
        let g = LinearGame::from_tables(OutputGroup::cyclic(2).unwrap(), q, &[vec![0, 0], vec![0, 1]]).unwrap();
        assert!(matches!(pseudo_telepathy_check(&g, DEFAULT_RANK_TOL), Err(Error::Hypothesis(_))));
        assert!(matches!(pseudo_telepathy_check(&chsh_d(2, 2).unwrap(), DEFAULT_RANK_TOL), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn parallel_split_is_deterministic() {
        // many optimal assignments: enumeration spans several chunks
        let f = vec![vec![0; 3]; 8];
        let g = LinearGame::from_tables(OutputGroup::cyclic(4).unwrap(), QTable::Uniform, &f).unwrap();
        let c = classical_value(&g).unwrap();
        assert_eq!(c.alice, vec![0; 8]);
        assert_eq!(c.bob, vec![0; 3]);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let g = random_uniform_game(&mut rng, 3, 9, 4);
        let first = classical_value(&g).unwrap();
        for _ in 0..3 {
            assert_eq!(classical_value(&g).unwrap(), first);
        }
        let sequential = best_in_range(&g, match g.distribution() {
            Distribution::Exact { numerators, .. } => numerators,
            _ => unreachable!(),
        }, 0, enumeration_count(&g) as u64);
        assert_eq!(decode(sequential.1, 3, 9), first.alice);
    }
}
