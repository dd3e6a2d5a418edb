//! Finite Abelian groups in mixed-radix form `Z_{n1} x ... x Z_{nk}`.
//!
//! Elements are kept canonically reduced. Every element also has a
//! canonical index: the mixed-radix number with the first coordinate most
//! significant, so index order is lexicographic order on coordinate tuples.

use std::fmt;

use num_complex::Complex64;

use super::root_of_unity;
use crate::error::{Error, Result};

/// Largest group order accepted, keeps box tables and enumerations finite.
pub const MAX_GROUP_ORDER: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteAbelianGroup {
    factors: Vec<u64>,
    order: usize,
    /// lcm of the factors; characters are evaluated over this common denominator.
    exponent: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    coords: Vec<u64>,
}

impl GroupElement {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl FiniteAbelianGroup {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::EmptyGroup);
        }
        let mut order: u128 = 1;
        let mut exponent: u64 = 1;
        for &n in &factors {
            if n < 2 {
                return Err(Error::InvalidFactor(n));
            }
            order = order.saturating_mul(n as u128);
            if order > MAX_GROUP_ORDER as u128 {
                return Err(Error::GroupTooLarge(order, MAX_GROUP_ORDER));
            }
            exponent = num_integer::lcm(exponent, n);
        }
        Ok(Self {
            factors,
            order: order as usize,
            exponent,
        })
    }

    /// The cyclic group `Z_n`.
    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() == 1
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            coords: vec![0; self.factors.len()],
        }
    }

    /// Builds an element, reducing each coordinate into `[0, n_j)`.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        self.check_len(coords.len())?;
        let coords = coords
            .iter()
            .zip(&self.factors)
            .map(|(&c, &n)| c.rem_euclid(n as i64) as u64)
            .collect();
        Ok(GroupElement { coords })
    }

    /// Accepts an element only if it is already canonically reduced.
    pub fn member(&self, coords: &[u64]) -> Result<GroupElement> {
        self.check_len(coords.len())?;
        if coords.iter().zip(&self.factors).any(|(c, n)| c >= n) {
            return Err(Error::NotMember(format!("{coords:?}")));
        }
        Ok(GroupElement {
            coords: coords.to_vec(),
        })
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        x.coords.len() == self.factors.len() && x.coords.iter().zip(&self.factors).all(|(c, n)| c < n)
    }

    fn check_len(&self, found: usize) -> Result<()> {
        if found != self.factors.len() {
            return Err(Error::DimensionMismatch {
                expected: self.factors.len(),
                found,
            });
        }
        Ok(())
    }

    fn check(&self, x: &GroupElement) -> Result<()> {
        self.check_len(x.coords.len())?;
        if !self.contains(x) {
            return Err(Error::NotMember(x.to_string()));
        }
        Ok(())
    }

    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        self.check(x)?;
        self.check(y)?;
        let coords = x
            .coords
            .iter()
            .zip(&y.coords)
            .zip(&self.factors)
            .map(|((a, b), n)| (a + b) % n)
            .collect();
        Ok(GroupElement { coords })
    }

    pub fn neg(&self, x: &GroupElement) -> Result<GroupElement> {
        self.check(x)?;
        let coords = x
            .coords
            .iter()
            .zip(&self.factors)
            .map(|(a, n)| (n - a) % n)
            .collect();
        Ok(GroupElement { coords })
    }

    /// `chi_a(x) = prod_j exp(2 pi i a_j x_j / n_j)`.
    pub fn character(&self, a: &GroupElement, x: &GroupElement) -> Result<Complex64> {
        self.check(a)?;
        self.check(x)?;
        Ok(root_of_unity(self.character_exponent(&a.coords, &x.coords), self.exponent))
    }

    /// Numerator `m` with `chi_a(x) = exp(2 pi i m / L)`, `L` the group exponent.
    fn character_exponent(&self, a: &[u64], x: &[u64]) -> u64 {
        let l = self.exponent;
        a.iter()
            .zip(x)
            .zip(&self.factors)
            .fold(0u64, |acc, ((&aj, &xj), &n)| {
                let term = (aj * xj % n) * (l / n);
                (acc + term) % l
            })
    }

    pub fn index_of(&self, x: &GroupElement) -> Result<usize> {
        self.check(x)?;
        Ok(x
            .coords
            .iter()
            .zip(&self.factors)
            .fold(0usize, |acc, (&c, &n)| acc * n as usize + c as usize))
    }

    pub fn element_at(&self, mut index: usize) -> Result<GroupElement> {
        if index >= self.order {
            return Err(Error::NotMember(format!("index {index}")));
        }
        let mut coords = vec![0; self.factors.len()];
        for (slot, &n) in coords.iter_mut().zip(&self.factors).rev() {
            *slot = (index % n as usize) as u64;
            index /= n as usize;
        }
        Ok(GroupElement { coords })
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(|i| self.element_at(i).expect("index in range"))
    }

    pub(crate) fn coords_of_index(&self, mut index: usize, out: &mut [u64]) {
        for (slot, &n) in out.iter_mut().zip(&self.factors).rev() {
            *slot = (index % n as usize) as u64;
            index /= n as usize;
        }
    }

    pub(crate) fn add_index(&self, i: usize, j: usize) -> usize {
        // mixed-radix addition without carries between digits
        let mut result = 0usize;
        let mut place = 1usize;
        let (mut i, mut j) = (i, j);
        for &n in self.factors.iter().rev() {
            let n = n as usize;
            let digit = (i % n + j % n) % n;
            result += digit * place;
            place *= n;
            i /= n;
            j /= n;
        }
        result
    }

    pub(crate) fn neg_index(&self, i: usize) -> usize {
        let mut result = 0usize;
        let mut place = 1usize;
        let mut i = i;
        for &n in self.factors.iter().rev() {
            let n = n as usize;
            let digit = (n - i % n) % n;
            result += digit * place;
            place *= n;
            i /= n;
        }
        result
    }

    pub(crate) fn character_index(&self, a: usize, x: usize) -> Complex64 {
        let k = self.factors.len();
        let mut ca = vec![0; k];
        let mut cx = vec![0; k];
        self.coords_of_index(a, &mut ca);
        self.coords_of_index(x, &mut cx);
        root_of_unity(self.character_exponent(&ca, &cx), self.exponent)
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, n) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "Z{n}")?;
        }
        Ok(())
    }
}
