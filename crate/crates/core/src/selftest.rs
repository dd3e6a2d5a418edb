//! The acceptance suite: eight checks with fixed corpora, seeds and tolerances.

use std::fmt;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{FiniteAbelianGroup, OutputGroup};
use crate::bounds::{
    analyze, classical_value, lemma1_bound, ns_winning_box, pseudo_telepathy_check, quantum_bound, AnalysisOptions,
};
use crate::error::{Error, Result};
use crate::games::{
    box_from_correlators, chsh_d, correlators_from_box, evaluate_box, random_uniform_game, win_prob_from_correlators,
    Distribution, LinearGame, ProbabilityBox, QTable,
};
use crate::nlc::{
    uniform_bound, uniform_strategy_value, verify_block_circulant_all, verify_theorem3, weighted_bound, NlcSpec, Rational,
};
use crate::numerics::DEFAULT_RANK_TOL;

pub const CHSH_TOL: f64 = 1e-10;
pub const CHSH2_TOL: f64 = 1e-9;
pub const CHSH2_BOUND: f64 = 0.8535533906;
pub const NLC_FLOAT_TOL: f64 = 1e-10;
pub const OFF_DIAGONAL_TOL: f64 = 1e-10;
pub const ROUND_TRIP_TOL: f64 = 1e-12;
pub const WIN_PROB_TOL: f64 = 1e-10;
pub const CHAIN_TOL: f64 = 1e-9;
pub const NS_TOL: f64 = 1e-12;

pub const BOX_SEED: u64 = 0x6c69_6e67_0006;
pub const CHAIN_SEED: u64 = 0x6c69_6e67_0007;
pub const RANK_SEED: u64 = 0x6c69_6e67_0008;

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionOutcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {} {} {} ({:.3} s): {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

fn run(id: u8, title: &'static str, limit: Option<Duration>, check: impl FnOnce() -> Result<String>) -> CriterionOutcome {
    let start = Instant::now();
    let result = check();
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match result {
        Ok(d) => (true, d),
        Err(e) => (false, e.to_string()),
    };
    if let Some(limit) = limit {
        if elapsed > limit {
            passed = false;
            detail = format!("{detail}; exceeded {} s", limit.as_secs());
        }
    }
    CriterionOutcome {
        id,
        title,
        passed,
        detail,
        elapsed,
    }
}

fn fail(leg: &str, detail: String) -> Error {
    Error::Verification {
        leg: leg.into(),
        detail,
    }
}

/// CHSH-d over GF(p^r): bound `1/d + (d-1)/(d sqrt d)`, each norm `1/(d sqrt d)`.
pub fn criterion1() -> CriterionOutcome {
    run(1, "CHSH-d closed form", Some(Duration::from_secs(5)), || {
        let mut worst: f64 = 0.0;
        for (p, r) in [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (3, 2), (2, 3)] {
            let game = chsh_d(p, r)?;
            let d = game.group().order() as f64;
            let bound = quantum_bound(&game);
            let closed = 1.0 / d + (d - 1.0) / (d * d.sqrt());
            let err = (bound.raw - closed).abs();
            if err > CHSH_TOL {
                return Err(fail("bound", format!("GF({p}^{r}): {} vs {closed}", bound.raw)));
            }
            worst = worst.max(err);
            for c in &bound.norms {
                let err = (c.norm - 1.0 / (d * d.sqrt())).abs();
                if err > CHSH_TOL {
                    return Err(fail("norm", format!("GF({p}^{r}) character {}: {}", c.character, c.norm)));
                }
                worst = worst.max(err);
            }
        }
        Ok(format!("7 fields, max deviation {worst:.1e}"))
    })
}

/// CHSH-2: bound 0.8535533906, classical value exactly 3/4.
pub fn criterion2() -> CriterionOutcome {
    run(2, "CHSH-2 values", None, || {
        let game = chsh_d(2, 1)?;
        let bound = quantum_bound(&game).raw;
        if (bound - CHSH2_BOUND).abs() > CHSH2_TOL {
            return Err(fail("bound", format!("{bound}")));
        }
        let c = classical_value(&game)?;
        if c.exact != Some(Ratio::new(3, 4)) {
            return Err(fail("classical", format!("{:?}", c.exact)));
        }
        Ok(format!("bound {bound:.10}, classical 3/4"))
    })
}

fn all_tables(d: u64, len: usize) -> Vec<Vec<u64>> {
    (0..d.pow(len as u32))
        .map(|mut i| {
            let mut g = vec![0; len];
            for t in g.iter_mut().rev() {
                *t = i % d;
                i /= d;
            }
            g
        })
        .collect()
}

/// Every `g` for `d = 2, n = 2, 3` and `d = 3, n = 2`, uniform `p`.
pub fn criterion3() -> CriterionOutcome {
    run(3, "NLC equality, all g, uniform p", Some(Duration::from_secs(60)), || {
        let mut checked = 0;
        for (d, n) in [(2u64, 2u32), (2, 3), (3, 2)] {
            for g in all_tables(d, d.pow(n - 1) as usize) {
                let spec = NlcSpec::uniform(d, n, g.clone())?;
                let report = verify_theorem3(&spec, NLC_FLOAT_TOL)?;
                let lambda = report.profile.lambda_max;
                let expected = uniform_bound(d, n, lambda);
                let brute = report
                    .brute_force
                    .as_ref()
                    .and_then(|c| c.exact)
                    .ok_or_else(|| fail("brute force", format!("d={d} n={n} g={g:?}: not run")))?;
                let legs_agree = report.bound.exact == Some(expected)
                    && report.strategy.value.exact == Some(expected)
                    && uniform_strategy_value(d, n, lambda) == expected
                    && Rational::new(*brute.numer() as i128, *brute.denom() as i128) == expected
                    && (report.spectral_bound - crate::nlc::to_f64(&expected)).abs() <= NLC_FLOAT_TOL;
                if !legs_agree {
                    return Err(fail("equality", format!("d={d} n={n} g={g:?}")));
                }
                checked += 1;
            }
        }
        Ok(format!("{checked} tables"))
    })
}

/// Fixed rational input weights, including a point mass, for `g = identity`.
pub fn weighted_corpus() -> Vec<NlcSpec> {
    let two: [&[(u64, u64)]; 5] = [&[(3, 4), (1, 4)], &[(1, 1), (0, 1)], &[(1, 3), (2, 3)], &[(2, 5), (3, 5)], &[(7, 10), (3, 10)]];
    let three: [&[(u64, u64)]; 5] = [
        &[(1, 2), (1, 3), (1, 6)],
        &[(0, 1), (1, 1), (0, 1)],
        &[(1, 5), (2, 5), (2, 5)],
        &[(1, 4), (1, 4), (1, 2)],
        &[(3, 7), (1, 7), (3, 7)],
    ];
    let build = |d: u64, p: &[(u64, u64)]| {
        let ratios: Vec<Ratio<u64>> = p.iter().map(|&(a, b)| Ratio::new(a, b)).collect();
        NlcSpec::new(d, 2, (0..d).collect(), Distribution::from_ratios(&ratios).expect("normalized")).expect("valid")
    };
    two.iter().map(|p| build(2, p)).chain(three.iter().map(|p| build(3, p))).collect()
}

/// Weighted case: strategy value equals the weighted bound exactly.
pub fn criterion4() -> CriterionOutcome {
    run(4, "NLC equality, weighted p", Some(Duration::from_secs(30)), || {
        let corpus = weighted_corpus();
        let mut brute = 0;
        for spec in &corpus {
            let report = verify_theorem3(spec, NLC_FLOAT_TOL)?;
            let w = report
                .profile
                .weighted_max_exact
                .ok_or_else(|| fail("weighted bound", "profile is not exact".into()))?;
            let expected = weighted_bound(spec.d(), spec.n(), w);
            if report.strategy.value.exact != Some(expected) || report.bound.exact != Some(expected) {
                return Err(fail("weighted bound", format!("d={} p={:?}", spec.d(), spec.p())));
            }
            if let Some(c) = &report.brute_force {
                let r = c.exact.expect("rational game");
                if Rational::new(*r.numer() as i128, *r.denom() as i128) != expected {
                    return Err(fail("brute force", format!("d={} p={:?}", spec.d(), spec.p())));
                }
                brute += 1;
            }
        }
        Ok(format!("{} distributions, {brute} confirmed by brute force", corpus.len()))
    })
}

/// Fourier conjugation diagonalizes `Phi_k^dag Phi_k`; the measured maximum
/// is the same for every `k`.
pub fn criterion5() -> CriterionOutcome {
    run(5, "block-circulant eigenstructure", None, || {
        let mut worst: f64 = 0.0;
        let mut count = 0;
        for d in [2u64, 3] {
            let spec = NlcSpec::uniform(d, 2, (0..d).collect())?;
            let reports = verify_block_circulant_all(&spec)?;
            for r in &reports {
                if r.off_diagonal >= OFF_DIAGONAL_TOL {
                    return Err(fail("off-diagonal", format!("d={d} k={}: {:e}", r.k, r.off_diagonal)));
                }
                worst = worst.max(r.off_diagonal);
                if (r.measured_max - reports[0].measured_max).abs() > OFF_DIAGONAL_TOL {
                    return Err(fail("lambda(k)", format!("d={d} k={}", r.k)));
                }
                count += 1;
            }
        }
        Ok(format!("{count} (d, k) pairs, max off-diagonal {worst:.1e}"))
    })
}

fn random_box(rng: &mut ChaCha8Rng, m_a: usize, m_b: usize, n: usize) -> Result<ProbabilityBox> {
    let mut data = Vec::with_capacity(m_a * m_b * n * n);
    for _ in 0..m_a * m_b {
        let raw: Vec<f64> = (0..n * n).map(|_| rng.random_range(0.0..1.0)).collect();
        let s: f64 = raw.iter().sum();
        data.extend(raw.into_iter().map(|x| x / s));
    }
    ProbabilityBox::new(m_a, m_b, n, data)
}

/// Correlator round trip and the correlator win-probability formula.
pub fn criterion6() -> CriterionOutcome {
    run(6, "Fourier machinery", None, || {
        let mut rng = ChaCha8Rng::seed_from_u64(BOX_SEED);
        let groups = [
            OutputGroup::cyclic(2)?,
            OutputGroup::cyclic(3)?,
            OutputGroup::Product(FiniteAbelianGroup::new(vec![2, 2])?),
        ];
        let (mut round_trip, mut win): (f64, f64) = (0.0, 0.0);
        for i in 0..200 {
            let group = groups[i % groups.len()].clone();
            let n = group.order();
            let (m_a, m_b) = (rng.random_range(1..=3), rng.random_range(1..=3));
            let f: Vec<Vec<usize>> = (0..m_a).map(|_| (0..m_b).map(|_| rng.random_range(0..n)).collect()).collect();
            let game = LinearGame::from_tables(group, QTable::Uniform, &f)?;
            let b = random_box(&mut rng, m_a, m_b, n)?;
            let t = correlators_from_box(&game, &b)?;
            let back = box_from_correlators(&game, &t)?;
            let err = back.iter().zip(b.as_slice()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            round_trip = round_trip.max(err);
            for u in 0..m_a {
                for v in 0..m_b {
                    let target = game.f(u, v);
                    let direct: f64 = (0..n).map(|a| b.p(u, v, a, game.group().sub(target, a))).sum();
                    win = win.max((win_prob_from_correlators(&game, &t, u, v)? - direct).abs());
                }
            }
        }
        if round_trip >= ROUND_TRIP_TOL {
            return Err(fail("round trip", format!("{round_trip:e}")));
        }
        if win >= WIN_PROB_TOL {
            return Err(fail("win probability", format!("{win:e}")));
        }
        Ok(format!("200 boxes, round trip {round_trip:.1e}, win probability {win:.1e}"))
    })
}

/// `1/d <= lemma1 <= classical <= min(1, bound)`, and the no-signaling box wins.
pub fn criterion7() -> CriterionOutcome {
    run(7, "ordering chain", None, || {
        let mut rng = ChaCha8Rng::seed_from_u64(CHAIN_SEED);
        for i in 0..500 {
            let d = rng.random_range(2..=3u64);
            let (m_a, m_b) = (rng.random_range(1..=4), rng.random_range(1..=4));
            let game = random_uniform_game(&mut rng, d, m_a, m_b)?;
            let r = analyze(&game, AnalysisOptions::default())?;
            let l1 = lemma1_bound(&game);
            let chain = 1.0 / d as f64 <= l1 && l1 <= r.classical_value && r.classical_value <= r.quantum_bound.min(1.0) + CHAIN_TOL;
            if !chain {
                return Err(fail(
                    "chain",
                    format!("game {i}: lemma1 {l1}, classical {}, bound {}", r.classical_value, r.quantum_bound),
                ));
            }
            let ns = ns_winning_box(&game);
            let value = evaluate_box(&game, &ns)?;
            let uniform = (0..m_a).all(|u| {
                (0..m_b).all(|v| {
                    ns.alice_marginal(u, v).iter().chain(&ns.bob_marginal(u, v)).all(|p| (p - 1.0 / d as f64).abs() <= NS_TOL)
                })
            });
            if (value - 1.0).abs() > NS_TOL || !uniform {
                return Err(fail("no-signaling box", format!("game {i}: value {value}")));
            }
        }
        Ok("500 games".into())
    })
}

/// `rank(Phi_1) = 1` exactly when the game is classically winnable.
pub fn criterion8() -> CriterionOutcome {
    run(8, "rank-one criterion", None, || {
        let mut games = Vec::new();
        for code in 0..16usize {
            let f = vec![vec![code >> 3 & 1, code >> 2 & 1], vec![code >> 1 & 1, code & 1]];
            games.push(LinearGame::from_tables(OutputGroup::cyclic(2)?, QTable::Uniform, &f)?);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(RANK_SEED);
        for _ in 0..200 {
            games.push(random_uniform_game(&mut rng, 3, 3, 3)?);
        }
        let mut winnable = 0;
        for g in &games {
            if pseudo_telepathy_check(g, DEFAULT_RANK_TOL)?.classical_win {
                winnable += 1;
            }
        }
        Ok(format!("{} games, {winnable} rank one and winnable, rest neither", games.len()))
    })
}

pub fn run_all() -> Vec<CriterionOutcome> {
    vec![
        criterion1(),
        criterion2(),
        criterion3(),
        criterion4(),
        criterion5(),
        criterion6(),
        criterion7(),
        criterion8(),
    ]
}
