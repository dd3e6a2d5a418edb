//! Fourier transform of boxes over `G x G` and the win probability read off
//! the diagonal correlators `<A_u^x B_v^x>`.

use num_complex::Complex64;

use super::{LinearGame, ProbabilityBox};
use crate::error::{Error, Result};

/// Generalized correlators `<A_u^x (x) B_v^y>` for every `(u, v, x, y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatorTable {
    m_a: usize,
    m_b: usize,
    n: usize,
    data: Vec<Complex64>,
}

impl CorrelatorTable {
    pub fn get(&self, u: usize, v: usize, x: usize, y: usize) -> Complex64 {
        self.data[((u * self.m_b + v) * self.n + x) * self.n + y]
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.m_a, self.m_b, self.n)
    }
}

/// `<A_u^x B_v^y> = sum_{a,b} conj(chi_x(a)) conj(chi_y(b)) P(a, b | u, v)`.
pub fn correlators_from_box(game: &LinearGame, b: &ProbabilityBox) -> Result<CorrelatorTable> {
    b.check_shape(game)?;
    let n = game.group().order();
    let chi = game.group().character_table();
    let (m_a, m_b) = (game.m_a(), game.m_b());
    let mut data = Vec::with_capacity(m_a * m_b * n * n);
    let mut partial = vec![Complex64::new(0.0, 0.0); n * n];
    for u in 0..m_a {
        for v in 0..m_b {
            // partial[a][y] = sum_b conj(chi_y(b)) P(a, b)
            for a in 0..n {
                for y in 0..n {
                    partial[a * n + y] = (0..n).map(|bb| chi[y * n + bb].conj() * b.p(u, v, a, bb)).sum();
                }
            }
            for x in 0..n {
                for y in 0..n {
                    data.push((0..n).map(|a| chi[x * n + a].conj() * partial[a * n + y]).sum());
                }
            }
        }
    }
    Ok(CorrelatorTable { m_a, m_b, n, data })
}

/// Inversion `P(a, b | u, v) = |G|^-2 sum_{x,y} chi_a(x) chi_b(y) <A_u^x B_v^y>`.
///
/// Returns the raw table; round-off can leave tiny negative entries, so no
/// box validation is applied.
pub fn box_from_correlators(game: &LinearGame, t: &CorrelatorTable) -> Result<Vec<f64>> {
    let n = game.group().order();
    if t.shape() != (game.m_a(), game.m_b(), n) {
        return Err(Error::ShapeMismatch("correlator table does not match the game".into()));
    }
    let chi = game.group().character_table();
    let norm = (n * n) as f64;
    let mut out = Vec::with_capacity(game.m_a() * game.m_b() * n * n);
    let mut partial = vec![Complex64::new(0.0, 0.0); n * n];
    for u in 0..game.m_a() {
        for v in 0..game.m_b() {
            // partial[x][b] = sum_y chi_b(y) T[x][y]
            for x in 0..n {
                for b in 0..n {
                    partial[x * n + b] = (0..n).map(|y| chi[b * n + y] * t.get(u, v, x, y)).sum();
                }
            }
            for a in 0..n {
                for b in 0..n {
                    let s: Complex64 = (0..n).map(|x| chi[a * n + x] * partial[x * n + b]).sum();
                    out.push(s.re / norm);
                }
            }
        }
    }
    Ok(out)
}

/// `P(a + b = f(u,v) | u, v) = |G|^-1 sum_x chi_{f(u,v)}(x) <A_u^x B_v^x>`.
pub fn win_prob_from_correlators(game: &LinearGame, t: &CorrelatorTable, u: usize, v: usize) -> Result<f64> {
    let n = game.group().order();
    if t.shape() != (game.m_a(), game.m_b(), n) || u >= game.m_a() || v >= game.m_b() {
        return Err(Error::ShapeMismatch("correlator table does not match the game".into()));
    }
    let target = game.f(u, v);
    let s: Complex64 = (0..n).map(|x| game.group().character(target, x) * t.get(u, v, x, x)).sum();
    Ok(s.re / n as f64)
}
