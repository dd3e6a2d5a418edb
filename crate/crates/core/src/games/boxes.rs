use crate::algebra::OutputGroup;
use crate::error::{Error, Result};

use super::LinearGame;

const BOX_NORMALIZATION_TOL: f64 = 1e-12;
pub const NO_SIGNALING_TOL: f64 = 1e-10;

/// Conditional distribution `P(a, b | u, v)` over a group alphabet of size `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityBox {
    m_a: usize,
    m_b: usize,
    n: usize,
    data: Vec<f64>,
}

impl ProbabilityBox {
    /// `data[((u * mB + v) * n + a) * n + b] = P(a, b | u, v)`.
    pub fn new(m_a: usize, m_b: usize, n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != m_a * m_b * n * n {
            return Err(Error::InvalidBox(format!(
                "expected {} entries, got {}",
                m_a * m_b * n * n,
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|&&x| !(x >= 0.0 && x.is_finite())) {
            return Err(Error::InvalidBox(format!("entry {bad} is not a probability")));
        }
        for (block, chunk) in data.chunks(n * n).enumerate() {
            let s: f64 = chunk.iter().sum();
            if (s - 1.0).abs() > BOX_NORMALIZATION_TOL {
                return Err(Error::InvalidBox(format!(
                    "P(.,.|{},{}) sums to {s}",
                    block / m_b,
                    block % m_b
                )));
            }
        }
        Ok(Self { m_a, m_b, n, data })
    }

    pub fn from_fn(m_a: usize, m_b: usize, n: usize, mut f: impl FnMut(usize, usize, usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(m_a * m_b * n * n);
        for u in 0..m_a {
            for v in 0..m_b {
                for a in 0..n {
                    for b in 0..n {
                        data.push(f(u, v, a, b));
                    }
                }
            }
        }
        Self::new(m_a, m_b, n, data)
    }

    pub fn uniform(m_a: usize, m_b: usize, n: usize) -> Self {
        let w = 1.0 / (n * n) as f64;
        Self {
            m_a,
            m_b,
            n,
            data: vec![w; m_a * m_b * n * n],
        }
    }

    /// Box of the deterministic strategy `a = alice[u]`, `b = bob[v]`.
    pub fn deterministic(group: &OutputGroup, alice: &[usize], bob: &[usize]) -> Result<Self> {
        let n = group.order();
        if alice.iter().chain(bob).any(|&x| x >= n) {
            return Err(Error::NotMember("strategy output outside the group".into()));
        }
        Self::from_fn(alice.len(), bob.len(), n, |u, v, a, b| {
            if a == alice[u] && b == bob[v] {
                1.0
            } else {
                0.0
            }
        })
    }

    /// Local box `P(a|u) P(b|v)` from per-question marginals.
    pub fn product(alice: &[Vec<f64>], bob: &[Vec<f64>]) -> Result<Self> {
        let n = alice.first().or(bob.first()).map_or(0, Vec::len);
        if alice.iter().chain(bob).any(|d| d.len() != n) {
            return Err(Error::InvalidBox("marginals of different lengths".into()));
        }
        Self::from_fn(alice.len(), bob.len(), n, |u, v, a, b| alice[u][a] * bob[v][b])
    }

    pub fn m_a(&self) -> usize {
        self.m_a
    }

    pub fn m_b(&self) -> usize {
        self.m_b
    }

    pub fn outcomes(&self) -> usize {
        self.n
    }

    pub fn p(&self, u: usize, v: usize, a: usize, b: usize) -> f64 {
        self.data[((u * self.m_b + v) * self.n + a) * self.n + b]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn check_shape(&self, game: &LinearGame) -> Result<()> {
        if (self.m_a, self.m_b, self.n) != (game.m_a(), game.m_b(), game.group().order()) {
            return Err(Error::ShapeMismatch(format!(
                "box is {}x{} over {} outcomes, game is {}x{} over {}",
                self.m_a,
                self.m_b,
                self.n,
                game.m_a(),
                game.m_b(),
                game.group().order()
            )));
        }
        Ok(())
    }

    /// Alice's marginal `sum_b P(a, b | u, v)`.
    pub fn alice_marginal(&self, u: usize, v: usize) -> Vec<f64> {
        (0..self.n).map(|a| (0..self.n).map(|b| self.p(u, v, a, b)).sum()).collect()
    }

    /// Bob's marginal `sum_a P(a, b | u, v)`.
    pub fn bob_marginal(&self, u: usize, v: usize) -> Vec<f64> {
        (0..self.n).map(|b| (0..self.n).map(|a| self.p(u, v, a, b)).sum()).collect()
    }

    /// Largest dependence of a party's marginal on the other party's input.
    pub fn signaling_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for u in 0..self.m_a {
            let reference = self.alice_marginal(u, 0);
            for v in 1..self.m_b {
                for (x, y) in self.alice_marginal(u, v).iter().zip(&reference) {
                    dev = dev.max((x - y).abs());
                }
            }
        }
        for v in 0..self.m_b {
            let reference = self.bob_marginal(0, v);
            for u in 1..self.m_a {
                for (x, y) in self.bob_marginal(u, v).iter().zip(&reference) {
                    dev = dev.max((x - y).abs());
                }
            }
        }
        dev
    }

    pub fn is_no_signaling(&self) -> bool {
        self.signaling_deviation() <= NO_SIGNALING_TOL
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_dist(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
        let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
        let s: f64 = raw.iter().sum();
        raw.into_iter().map(|x| x / s).collect()
    }

    #[test]
    fn validation() {
        assert!(ProbabilityBox::new(1, 1, 2, vec![0.5, 0.5, 0.0, 0.0]).is_ok());
        assert!(ProbabilityBox::new(1, 1, 2, vec![0.5, 0.5, 0.1, 0.0]).is_err());
        assert!(ProbabilityBox::new(1, 1, 2, vec![1.5, -0.5, 0.0, 0.0]).is_err());
        assert!(ProbabilityBox::new(1, 1, 2, vec![1.0]).is_err());
    }

    #[test]
    fn product_boxes_never_signal() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let n = rng.random_range(2..5);
            let alice: Vec<_> = (0..3).map(|_| random_dist(&mut rng, n)).collect();
            let bob: Vec<_> = (0..4).map(|_| random_dist(&mut rng, n)).collect();
            let b = ProbabilityBox::product(&alice, &bob).unwrap();
            assert!(b.is_no_signaling());
        }
        let z3 = OutputGroup::cyclic(3).unwrap();
        assert!(ProbabilityBox::deterministic(&z3, &[0, 1, 2], &[2, 2]).unwrap().is_no_signaling());
    }

    #[test]
    fn hand_built_signaling_box_fails() {
        // Bob's output copies Alice's input: P(b = u | u, v) = 1
        let b = ProbabilityBox::from_fn(2, 2, 2, |u, _, a, b| if a == 0 && b == u { 1.0 } else { 0.0 }).unwrap();
        assert!(!b.is_no_signaling());
        assert!((b.signaling_deviation() - 1.0).abs() < 1e-15);
    }
}
