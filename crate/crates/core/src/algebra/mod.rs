//! Groups, characters, and finite fields.

mod field;
mod group;

pub use field::{FieldElement, FiniteField, MAX_DEGREE, MAX_FIELD_ORDER};
pub use group::{FiniteAbelianGroup, GroupElement, MAX_GROUP_ORDER};

use std::fmt;

use num_complex::Complex64;

/// `exp(2 pi i m / n)` from the exact integer exponent.
///
/// Quarter turns are exact, and `root_of_unity(n - m, n)` is bit-for-bit the
/// conjugate of `root_of_unity(m, n)`.
pub fn root_of_unity(m: u64, n: u64) -> Complex64 {
    let m = m % n;
    if m == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if 2 * m > n {
        return root_of_unity(n - m, n).conj();
    }
    if 2 * m == n {
        return Complex64::new(-1.0, 0.0);
    }
    if 4 * m == n {
        return Complex64::new(0.0, 1.0);
    }
    let angle = 2.0 * std::f64::consts::PI * (m as f64) / (n as f64);
    let (s, c) = angle.sin_cos();
    Complex64::new(c, s)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// The answer alphabet of a linear game: a finite Abelian group with a fixed
/// identification of elements and characters.
///
/// Product groups use componentwise characters; a field uses its additive
/// group with trace characters. Elements and characters are addressed by
/// canonical index, `0` being the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OutputGroup {
    Product(FiniteAbelianGroup),
    Field(FiniteField),
}

impl OutputGroup {
    pub fn cyclic(d: u64) -> crate::Result<Self> {
        FiniteAbelianGroup::cyclic(d).map(OutputGroup::Product)
    }

    pub fn order(&self) -> usize {
        match self {
            OutputGroup::Product(g) => g.order(),
            OutputGroup::Field(f) => f.order(),
        }
    }

    /// True for `Z_d` and for prime fields, the alphabets of XOR-d games.
    pub fn is_cyclic(&self) -> bool {
        match self {
            OutputGroup::Product(g) => g.is_cyclic(),
            OutputGroup::Field(f) => f.degree() == 1,
        }
    }

    pub fn add(&self, i: usize, j: usize) -> usize {
        match self {
            OutputGroup::Product(g) => g.add_index(i, j),
            OutputGroup::Field(f) => f.add_index(i, j),
        }
    }

    pub fn neg(&self, i: usize) -> usize {
        match self {
            OutputGroup::Product(g) => g.neg_index(i),
            OutputGroup::Field(f) => f.neg_index(i),
        }
    }

    pub fn sub(&self, i: usize, j: usize) -> usize {
        self.add(i, self.neg(j))
    }

    /// `chi_x(a)` for element indices `x`, `a`.
    pub fn character(&self, x: usize, a: usize) -> Complex64 {
        match self {
            OutputGroup::Product(g) => g.character_index(x, a),
            OutputGroup::Field(f) => f.character_index(x, a),
        }
    }

    /// `table[x * |G| + a] = chi_x(a)`, evaluated entry by entry.
    pub fn character_table(&self) -> Vec<Complex64> {
        let n = self.order();
        let mut table = Vec::with_capacity(n * n);
        for x in 0..n {
            for a in 0..n {
                table.push(self.character(x, a));
            }
        }
        table
    }

    /// Coordinates of the element at `index` (field: coefficients low degree first).
    pub fn coords(&self, index: usize) -> Vec<u64> {
        match self {
            OutputGroup::Product(g) => g.element_at(index).expect("index in range").coords().to_vec(),
            OutputGroup::Field(f) => f.element_at(index).expect("index in range").coeffs()[..f.degree()].to_vec(),
        }
    }

    /// Canonical index of a coordinate list, rejecting non-members.
    pub fn index_of_coords(&self, coords: &[u64]) -> crate::Result<usize> {
        match self {
            OutputGroup::Product(g) => g.index_of(&g.member(coords)?),
            OutputGroup::Field(f) => {
                if coords.len() != f.degree() {
                    return Err(crate::Error::DimensionMismatch {
                        expected: f.degree(),
                        found: coords.len(),
                    });
                }
                f.index_of(&f.element(coords)?)
            }
        }
    }
}

impl fmt::Display for OutputGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OutputGroup::Product(g) => write!(f, "{g}"),
            OutputGroup::Field(field) => write!(f, "{field}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_unity_conjugate_symmetry() {
        for n in 2..20u64 {
            for m in 0..n {
                let z = root_of_unity(m, n);
                assert!((z.norm() - 1.0).abs() < 1e-15);
                assert_eq!(root_of_unity(n - m, n), z.conj());
            }
        }
        assert_eq!(root_of_unity(3, 4), Complex64::new(0.0, -1.0));
    }

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn output_group_dispatch() {
        let gf4 = OutputGroup::Field(FiniteField::new(2, 2).unwrap());
        let klein = OutputGroup::Product(FiniteAbelianGroup::new(vec![2, 2]).unwrap());
        // same additive structure, different character identification
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(gf4.add(i, j), i ^ j);
                assert_eq!(klein.add(i, j), i ^ j);
            }
        }
        assert!(!gf4.is_cyclic());
        assert!(OutputGroup::Field(FiniteField::new(5, 1).unwrap()).is_cyclic());
        assert_eq!(gf4.index_of_coords(&[1, 1]).unwrap(), 3);
        assert!(gf4.index_of_coords(&[2, 0]).is_err());
        assert_eq!(klein.coords(2), vec![1, 0]);
    }
}
