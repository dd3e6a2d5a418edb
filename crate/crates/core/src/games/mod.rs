//! Two-player linear games `a + b = f(u, v)` and the boxes they are played with.

mod boxes;
mod fourier;
pub mod json;

pub use boxes::ProbabilityBox;
pub use fourier::{box_from_correlators, correlators_from_box, win_prob_from_correlators, CorrelatorTable};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{FiniteField, OutputGroup};
use crate::error::{Error, Result};

const NORMALIZATION_TOL: f64 = 1e-12;

/// A probability vector, either as exact numerators over a common
/// denominator or as doubles.
#[derive(Debug, Clone, PartialEq)]
pub enum Distribution {
    Exact { numerators: Vec<u64>, denominator: u64 },
    Float(Vec<f64>),
}

impl Distribution {
    pub fn from_ratios(values: &[Ratio<u64>]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::RaggedTable("empty distribution".into()));
        }
        let mut denominator: u64 = 1;
        for r in values {
            if *r.denom() == 0 {
                return Err(Error::InvalidProbability("zero denominator".into()));
            }
            denominator = checked_lcm(denominator, *r.denom())?;
        }
        let numerators: Vec<u64> = values
            .iter()
            .map(|r| {
                r.numer()
                    .checked_mul(denominator / r.denom())
                    .ok_or_else(|| Error::InvalidProbability("numerator overflow".into()))
            })
            .collect::<Result<_>>()?;
        let total = numerators
            .iter()
            .try_fold(0u64, |acc, &n| acc.checked_add(n))
            .ok_or_else(|| Error::InvalidProbability("sum overflow".into()))?;
        if total != denominator {
            return Err(Error::NotNormalized(total as f64 / denominator as f64));
        }
        Ok(Distribution::Exact { numerators, denominator })
    }

    pub fn from_floats(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::RaggedTable("empty distribution".into()));
        }
        if let Some(&bad) = values.iter().find(|x| !x.is_finite()) {
            return Err(Error::InvalidProbability(format!("{bad}")));
        }
        let total: f64 = values.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized(total));
        }
        Ok(Distribution::Float(values))
    }

    /// `n` equal weights `1/n`, exact.
    pub fn uniform(n: usize) -> Self {
        Distribution::Exact {
            numerators: vec![1; n],
            denominator: n as u64,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Distribution::Exact { numerators, .. } => numerators.len(),
            Distribution::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Distribution::Exact { .. })
    }

    pub fn value(&self, i: usize) -> f64 {
        match self {
            Distribution::Exact { numerators, denominator } => numerators[i] as f64 / *denominator as f64,
            Distribution::Float(v) => v[i],
        }
    }

    pub fn ratio(&self, i: usize) -> Option<Ratio<u64>> {
        match self {
            Distribution::Exact { numerators, denominator } => Some(Ratio::new(numerators[i], *denominator)),
            Distribution::Float(_) => None,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.value(i)).collect()
    }
}

fn checked_lcm(a: u64, b: u64) -> Result<u64> {
    let g = num_integer::gcd(a, b);
    (a / g)
        .checked_mul(b)
        .ok_or_else(|| Error::InvalidProbability("common denominator overflows u64".into()))
}

/// Input distribution table supplied by callers.
#[derive(Debug, Clone, PartialEq)]
pub enum QTable {
    Exact(Vec<Vec<Ratio<u64>>>),
    Float(Vec<Vec<f64>>),
    /// `1/(mA mB)` everywhere, shape taken from `f`.
    Uniform,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearGame {
    group: OutputGroup,
    m_a: usize,
    m_b: usize,
    q: Distribution,
    f: Vec<usize>,
}

impl LinearGame {
    /// Validated game from row-major tables. `f` holds canonical element indices.
    pub fn from_tables(group: OutputGroup, q: QTable, f: &[Vec<usize>]) -> Result<Self> {
        let m_a = f.len();
        let m_b = f.first().map_or(0, Vec::len);
        if m_a == 0 || m_b == 0 {
            return Err(Error::RaggedTable("f has no entries".into()));
        }
        if let Some(u) = f.iter().position(|row| row.len() != m_b) {
            return Err(Error::RaggedTable(format!("f row {u} has {} entries, expected {m_b}", f[u].len())));
        }
        let n = group.order();
        for (u, row) in f.iter().enumerate() {
            if let Some(v) = row.iter().position(|&x| x >= n) {
                return Err(Error::NotMember(format!("f({u},{v}) = {} in a group of order {n}", row[v])));
            }
        }
        let check_shape = |row_lens: Vec<usize>| -> Result<()> {
            if row_lens.len() != m_a {
                return Err(Error::RaggedTable(format!("q has {} rows, f has {m_a}", row_lens.len())));
            }
            if let Some(&len) = row_lens.iter().find(|&&len| len != m_b) {
                return Err(Error::RaggedTable(format!("q row of length {len}, expected {m_b}")));
            }
            Ok(())
        };
        let q = match q {
            QTable::Uniform => Distribution::uniform(m_a * m_b),
            QTable::Exact(rows) => {
                check_shape(rows.iter().map(Vec::len).collect())?;
                Distribution::from_ratios(&rows.concat())?
            }
            QTable::Float(rows) => {
                check_shape(rows.iter().map(Vec::len).collect())?;
                for (u, row) in rows.iter().enumerate() {
                    if let Some(v) = row.iter().position(|&x| x < 0.0) {
                        return Err(Error::NegativeProbability { u, v, value: row[v] });
                    }
                }
                Distribution::from_floats(rows.concat())?
            }
        };
        Ok(Self {
            group,
            m_a,
            m_b,
            q,
            f: f.concat(),
        })
    }

    /// Game with a pre-flattened distribution, used by generators.
    pub fn new(group: OutputGroup, m_a: usize, m_b: usize, q: Distribution, f: Vec<usize>) -> Result<Self> {
        if m_a == 0 || m_b == 0 || q.len() != m_a * m_b || f.len() != m_a * m_b {
            return Err(Error::RaggedTable(format!("expected {m_a}x{m_b} tables")));
        }
        if let Some(i) = f.iter().position(|&x| x >= group.order()) {
            return Err(Error::NotMember(format!("f({},{}) = {}", i / m_b, i % m_b, f[i])));
        }
        if let Distribution::Float(v) = &q {
            if let Some(i) = v.iter().position(|&x| x < 0.0) {
                return Err(Error::NegativeProbability { u: i / m_b, v: i % m_b, value: v[i] });
            }
        }
        Ok(Self { group, m_a, m_b, q, f })
    }

    pub fn group(&self) -> &OutputGroup {
        &self.group
    }

    pub fn m_a(&self) -> usize {
        self.m_a
    }

    pub fn m_b(&self) -> usize {
        self.m_b
    }

    pub fn q(&self, u: usize, v: usize) -> f64 {
        self.q.value(u * self.m_b + v)
    }

    pub fn distribution(&self) -> &Distribution {
        &self.q
    }

    pub fn f(&self, u: usize, v: usize) -> usize {
        self.f[u * self.m_b + v]
    }

    pub fn f_table(&self) -> &[usize] {
        &self.f
    }

    /// True when every `q(u, v)` equals `1/(mA mB)` exactly (or within 1e-15 for floats).
    pub fn is_uniform(&self) -> bool {
        match &self.q {
            Distribution::Exact { numerators, .. } => numerators.iter().all(|&n| n == numerators[0]),
            Distribution::Float(v) => {
                let target = 1.0 / v.len() as f64;
                v.iter().all(|x| (x - target).abs() <= 1e-15)
            }
        }
    }

    /// Same game with questions relabeled: row `u` of the new game is row
    /// `alice[u]` of this one, likewise for Bob.
    pub fn permute_questions(&self, alice: &[usize], bob: &[usize]) -> Result<Self> {
        let is_perm = |p: &[usize], n: usize| {
            let mut seen = vec![false; n];
            p.len() == n && p.iter().all(|&i| i < n && !std::mem::replace(&mut seen[i], true))
        };
        if !is_perm(alice, self.m_a) || !is_perm(bob, self.m_b) {
            return Err(Error::ShapeMismatch("not a permutation of the question sets".into()));
        }
        let idx = |u: usize, v: usize| alice[u] * self.m_b + bob[v];
        let mut f = Vec::with_capacity(self.f.len());
        let mut order = Vec::with_capacity(self.f.len());
        for u in 0..self.m_a {
            for v in 0..self.m_b {
                f.push(self.f[idx(u, v)]);
                order.push(idx(u, v));
            }
        }
        let q = match &self.q {
            Distribution::Exact { numerators, denominator } => Distribution::Exact {
                numerators: order.iter().map(|&i| numerators[i]).collect(),
                denominator: *denominator,
            },
            Distribution::Float(v) => Distribution::Float(order.iter().map(|&i| v[i]).collect()),
        };
        Self::new(self.group.clone(), self.m_a, self.m_b, q, f)
    }

    /// Same game with every target relabeled through `map` (indexed by element).
    pub fn map_targets(&self, map: &[usize]) -> Result<Self> {
        if map.len() != self.group.order() {
            return Err(Error::ShapeMismatch("relabeling must cover the group".into()));
        }
        let f = self.f.iter().map(|&x| map[x]).collect();
        Self::new(self.group.clone(), self.m_a, self.m_b, self.q.clone(), f)
    }
}

/// CHSH-d over `GF(p^r)`: uniform questions `u, v` in the field, target `u * v`.
pub fn chsh_d(p: u64, r: u32) -> Result<LinearGame> {
    let field = FiniteField::new(p, r)?;
    let d = field.order();
    let mut f = Vec::with_capacity(d * d);
    for u in field.elements() {
        for v in field.elements() {
            f.push(field.index_of(&field.mul(&u, &v)?)?);
        }
    }
    LinearGame::new(OutputGroup::Field(field), d, d, Distribution::uniform(d * d), f)
}

/// Uniform game over `Z_d` with targets drawn i.i.d. uniformly, row by row.
pub fn random_uniform_game<R: Rng + ?Sized>(rng: &mut R, d: u64, m_a: usize, m_b: usize) -> Result<LinearGame> {
    let f: Vec<usize> = (0..m_a * m_b).map(|_| rng.random_range(0..d as usize)).collect();
    LinearGame::new(OutputGroup::cyclic(d)?, m_a, m_b, Distribution::uniform(m_a * m_b), f)
}

/// `count` games from [`random_uniform_game`] on a ChaCha8 stream seeded with `seed`.
pub fn seeded_uniform_games(seed: u64, count: usize, d: u64, m_a: usize, m_b: usize) -> Result<Vec<LinearGame>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_uniform_game(&mut rng, d, m_a, m_b)).collect()
}

/// Value of the game on a box: `sum q(u,v) sum_{a+b=f(u,v)} P(a,b|u,v)`.
pub fn evaluate_box(game: &LinearGame, b: &ProbabilityBox) -> Result<f64> {
    b.check_shape(game)?;
    let n = game.group.order();
    let mut total = 0.0;
    for u in 0..game.m_a {
        for v in 0..game.m_b {
            let target = game.f(u, v);
            let win: f64 = (0..n).map(|a| b.p(u, v, a, game.group.sub(target, a))).sum();
            total += game.q(u, v) * win;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: u64, d: u64) -> Ratio<u64> {
        Ratio::new(n, d)
    }

    fn chsh2() -> LinearGame {
        let z2 = OutputGroup::cyclic(2).unwrap();
        LinearGame::from_tables(z2, QTable::Exact(vec![vec![r(1, 4); 2]; 2]), &[vec![0, 0], vec![0, 1]]).unwrap()
    }

    #[test]
    fn chsh_from_tables() {
        let g = chsh2();
        assert_eq!((g.m_a(), g.m_b()), (2, 2));
        assert_eq!(g.f(1, 1), 1);
        assert!(g.is_uniform());
        assert_eq!(g, chsh_d(2, 1).unwrap().with_group(OutputGroup::cyclic(2).unwrap()));
    }

    impl LinearGame {
        fn with_group(mut self, group: OutputGroup) -> Self {
            self.group = group;
            self
        }
    }

    #[test]
    fn rejects_bad_tables() {
        let z2 = OutputGroup::cyclic(2).unwrap();
        let f = vec![vec![0, 0], vec![0, 1]];
        let short = QTable::Float(vec![vec![0.2, 0.2], vec![0.25, 0.25]]);
        assert!(matches!(LinearGame::from_tables(z2.clone(), short, &f), Err(Error::NotNormalized(_))));
        let neg = QTable::Float(vec![vec![0.5, -0.25], vec![0.5, 0.25]]);
        assert!(matches!(
            LinearGame::from_tables(z2.clone(), neg, &f),
            Err(Error::NegativeProbability { u: 0, v: 1, .. })
        ));
        let ragged = vec![vec![0, 0], vec![0]];
        assert!(matches!(LinearGame::from_tables(z2.clone(), QTable::Uniform, &ragged), Err(Error::RaggedTable(_))));
        let outside = vec![vec![0, 2], vec![0, 1]];
        assert!(matches!(LinearGame::from_tables(z2.clone(), QTable::Uniform, &outside), Err(Error::NotMember(_))));
        let wrong_q = QTable::Exact(vec![vec![r(1, 2), r(1, 2)]]);
        assert!(matches!(LinearGame::from_tables(z2, wrong_q, &f), Err(Error::RaggedTable(_))));
    }

    #[test]
    fn exact_normalization() {
        let d = Distribution::from_ratios(&[r(1, 2), r(1, 3), r(1, 6)]).unwrap();
        assert_eq!(d, Distribution::Exact { numerators: vec![3, 2, 1], denominator: 6 });
        assert!(matches!(Distribution::from_ratios(&[r(1, 2), r(1, 3)]), Err(Error::NotNormalized(_))));
        assert!(Distribution::from_floats(vec![0.9]).is_err());
    }

    #[test]
    fn chsh_d_tables() {
        let g = chsh_d(3, 1).unwrap();
        for u in 0..3 {
            for v in 0..3 {
                assert_eq!(g.f(u, v), u * v % 3);
                assert_eq!(g.q(u, v), 1.0 / 9.0);
            }
        }
        // GF(4) = {0, 1, x, x+1} as indices 0..4; x * x = x + 1
        let g4 = chsh_d(2, 2).unwrap();
        assert_eq!(g4.f(2, 2), 3);
        assert_eq!(g4.f(3, 3), 2);
        assert_eq!(g4.f(2, 3), 1);
        assert!(matches!(chsh_d(4, 1), Err(Error::NotPrime(4))));
        assert!(chsh_d(2, 5).is_err());
    }

    #[test]
    fn uniform_box_scores_one_over_d() {
        for g in [chsh2(), chsh_d(3, 1).unwrap(), chsh_d(2, 2).unwrap()] {
            let n = g.group().order();
            let b = ProbabilityBox::uniform(g.m_a(), g.m_b(), n);
            assert!((evaluate_box(&g, &b).unwrap() - 1.0 / n as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn deterministic_box_counts_satisfied_mass() {
        let g = chsh_d(3, 1).unwrap();
        let alice = [0, 2, 1];
        let bob = [1, 1, 0];
        let b = ProbabilityBox::deterministic(g.group(), &alice, &bob).unwrap();
        let mut satisfied = 0;
        for (u, a) in alice.iter().enumerate() {
            for (v, b) in bob.iter().enumerate() {
                if (a + b) % 3 == u * v % 3 {
                    satisfied += 1;
                }
            }
        }
        assert!((evaluate_box(&g, &b).unwrap() - satisfied as f64 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn shape_mismatch() {
        let g = chsh2();
        let b = ProbabilityBox::uniform(3, 2, 2);
        assert!(matches!(evaluate_box(&g, &b), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn permutations_and_relabeling_preserve_validity() {
        let g = chsh_d(3, 1).unwrap();
        let p = g.permute_questions(&[2, 0, 1], &[1, 2, 0]).unwrap();
        assert_eq!(p.f(0, 0), g.f(2, 1));
        assert!(g.permute_questions(&[0, 0, 1], &[0, 1, 2]).is_err());
        let m = g.map_targets(&[0, 2, 1]).unwrap();
        assert_eq!(m.f(1, 1), 2);
    }
}
