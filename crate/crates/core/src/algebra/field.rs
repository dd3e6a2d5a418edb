//! Finite fields `GF(p^r)` as polynomial residues over `Z_p`.
//!
//! An element is a coefficient vector `c_0 + c_1 x + ... + c_{r-1} x^{r-1}`.
//! Its canonical index is `sum c_i p^i`, so the constant term is the
//! least significant digit.

use std::fmt;

use num_complex::Complex64;

use super::{is_prime, root_of_unity};
use crate::error::{Error, Result};

pub const MAX_DEGREE: usize = 4;
pub const MAX_FIELD_ORDER: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteField {
    p: u64,
    r: usize,
    /// Monic modulus, `modulus[i]` is the coefficient of `x^i`, length `r + 1`.
    modulus: Vec<u64>,
    order: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    coeffs: [u64; MAX_DEGREE],
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u64; MAX_DEGREE] {
        &self.coeffs
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&poly_to_string(&self.coeffs))
    }
}

fn poly_to_string(coeffs: &[u64]) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| match (i, c) {
            (0, c) => c.to_string(),
            (1, 1) => "x".to_string(),
            (1, c) => format!("{c}x"),
            (i, 1) => format!("x^{i}"),
            (i, c) => format!("{c}x^{i}"),
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

// Polynomial helpers over Z_p, coefficient vectors low degree first.

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut a = trim(a.to_vec());
    let m = trim(m.to_vec());
    let dm = m.len() - 1;
    let lead_inv = mod_inv(m[dm], p);
    while a.len() > dm {
        let top = a.len() - 1;
        let factor = a[top] * lead_inv % p;
        let shift = top - dm;
        for (i, &mi) in m.iter().enumerate() {
            a[shift + i] = (a[shift + i] + p - factor * mi % p) % p;
        }
        a = trim(a);
    }
    a
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

fn mod_inv(a: u64, p: u64) -> u64 {
    mod_pow(a, p - 2, p)
}

/// Monic polynomial of degree `deg` whose lower coefficients are the base-`p`
/// digits of `code` (constant term least significant).
fn monic_from_code(mut code: u64, deg: usize, p: u64) -> Vec<u64> {
    let mut poly = vec![0; deg + 1];
    for c in poly.iter_mut().take(deg) {
        *c = code % p;
        code /= p;
    }
    poly[deg] = 1;
    poly
}

fn is_irreducible(poly: &[u64], p: u64) -> bool {
    let deg = poly.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    for fd in 1..=deg / 2 {
        for code in 0..p.pow(fd as u32) {
            let factor = monic_from_code(code, fd, p);
            if poly_rem(poly, &factor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FiniteField {
    /// `GF(p^r)` with the lexicographically smallest monic irreducible modulus
    /// (coefficients compared from `x^{r-1}` down to the constant term).
    pub fn new(p: u64, r: u32) -> Result<Self> {
        Self::check_params(p, r)?;
        let modulus = Self::irreducible_monics(p, r)?
            .into_iter()
            .next()
            .expect("an irreducible polynomial of every degree exists");
        Self::build(p, r as usize, modulus)
    }

    /// `GF(p^r)` with an explicit modulus (coefficients low degree first, monic).
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self> {
        let r = modulus.len().checked_sub(1).ok_or_else(|| Error::NotIrreducible("[]".into()))?;
        Self::check_params(p, r as u32)?;
        if modulus[r] != 1 || modulus.iter().any(|&c| c >= p) || !is_irreducible(&modulus, p) {
            return Err(Error::NotIrreducible(poly_to_string(&modulus)));
        }
        Self::build(p, r, modulus)
    }

    /// All monic irreducible polynomials of degree `r` over `Z_p`, in the
    /// canonical order used by [`FiniteField::new`].
    pub fn irreducible_monics(p: u64, r: u32) -> Result<Vec<Vec<u64>>> {
        Self::check_params(p, r)?;
        Ok((0..p.pow(r))
            .map(|code| monic_from_code(code, r as usize, p))
            .filter(|poly| is_irreducible(poly, p))
            .collect())
    }

    fn check_params(p: u64, r: u32) -> Result<()> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if r == 0 || r as usize > MAX_DEGREE {
            return Err(Error::DegreeOutOfRange(r));
        }
        let order = (p as u128).pow(r);
        if order > MAX_FIELD_ORDER as u128 {
            return Err(Error::FieldTooLarge(order, MAX_FIELD_ORDER));
        }
        Ok(())
    }

    fn build(p: u64, r: usize, modulus: Vec<u64>) -> Result<Self> {
        Ok(Self {
            p,
            r,
            order: p.pow(r as u32) as usize,
            modulus,
        })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.r
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { coeffs: [0; MAX_DEGREE] }
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    /// The prime-field element `c mod p`.
    pub fn from_int(&self, c: i64) -> FieldElement {
        let mut coeffs = [0; MAX_DEGREE];
        coeffs[0] = c.rem_euclid(self.p as i64) as u64;
        FieldElement { coeffs }
    }

    /// Element from a coefficient list (low degree first); must already be reduced.
    pub fn element(&self, coeffs: &[u64]) -> Result<FieldElement> {
        if coeffs.len() > self.r || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::FieldMismatch(format!("{coeffs:?}")));
        }
        let mut out = [0; MAX_DEGREE];
        out[..coeffs.len()].copy_from_slice(coeffs);
        Ok(FieldElement { coeffs: out })
    }

    pub fn contains(&self, a: &FieldElement) -> bool {
        a.coeffs.iter().all(|&c| c < self.p) && a.coeffs[self.r..].iter().all(|&c| c == 0)
    }

    fn check(&self, a: &FieldElement) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::FieldMismatch(a.to_string()))
        }
    }

    pub fn element_at(&self, mut index: usize) -> Result<FieldElement> {
        if index >= self.order {
            return Err(Error::FieldMismatch(format!("index {index}")));
        }
        let mut coeffs = [0; MAX_DEGREE];
        for c in coeffs.iter_mut().take(self.r) {
            *c = (index % self.p as usize) as u64;
            index /= self.p as usize;
        }
        Ok(FieldElement { coeffs })
    }

    pub fn index_of(&self, a: &FieldElement) -> Result<usize> {
        self.check(a)?;
        Ok(a.coeffs[..self.r]
            .iter()
            .rev()
            .fold(0usize, |acc, &c| acc * self.p as usize + c as usize))
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order).map(|i| self.element_at(i).expect("index in range"))
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        let mut coeffs = [0; MAX_DEGREE];
        for (i, c) in coeffs.iter_mut().enumerate().take(self.r) {
            *c = (a.coeffs[i] + b.coeffs[i]) % self.p;
        }
        Ok(FieldElement { coeffs })
    }

    pub fn neg(&self, a: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        let mut coeffs = [0; MAX_DEGREE];
        for (i, c) in coeffs.iter_mut().enumerate().take(self.r) {
            *c = (self.p - a.coeffs[i]) % self.p;
        }
        Ok(FieldElement { coeffs })
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul_unchecked(a, b))
    }

    fn mul_unchecked(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let p = self.p;
        let mut prod = vec![0u64; 2 * self.r - 1];
        for i in 0..self.r {
            if a.coeffs[i] == 0 {
                continue;
            }
            for j in 0..self.r {
                prod[i + j] = (prod[i + j] + a.coeffs[i] * b.coeffs[j]) % p;
            }
        }
        let rem = poly_rem(&prod, &self.modulus, p);
        let mut coeffs = [0; MAX_DEGREE];
        coeffs[..rem.len()].copy_from_slice(&rem);
        FieldElement { coeffs }
    }

    pub fn pow(&self, a: &FieldElement, mut exp: u64) -> Result<FieldElement> {
        self.check(a)?;
        let mut base = *a;
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_unchecked(&acc, &base);
            }
            base = self.mul_unchecked(&base, &base);
            exp >>= 1;
        }
        Ok(acc)
    }

    pub fn inv(&self, a: &FieldElement) -> Result<Option<FieldElement>> {
        self.check(a)?;
        if *a == self.zero() {
            return Ok(None);
        }
        self.pow(a, self.order as u64 - 2).map(Some)
    }

    /// Absolute trace `Tr(z) = z + z^p + ... + z^{p^{r-1}}`, an element of `Z_p`.
    pub fn trace(&self, z: &FieldElement) -> Result<u64> {
        self.check(z)?;
        let mut acc = self.zero();
        let mut frob = *z;
        for _ in 0..self.r {
            acc = self.add(&acc, &frob)?;
            frob = self.pow(&frob, self.p)?;
        }
        debug_assert!(acc.coeffs[1..].iter().all(|&c| c == 0));
        Ok(acc.coeffs[0])
    }

    /// Additive character `chi_k(a) = exp(2 pi i Tr(k a) / p)`.
    pub fn additive_character(&self, k: &FieldElement, a: &FieldElement) -> Result<Complex64> {
        let t = self.trace(&self.mul(k, a)?)?;
        Ok(root_of_unity(t, self.p))
    }

    pub(crate) fn add_index(&self, i: usize, j: usize) -> usize {
        let p = self.p as usize;
        let (mut i, mut j) = (i, j);
        let mut result = 0;
        let mut place = 1;
        for _ in 0..self.r {
            result += ((i % p + j % p) % p) * place;
            place *= p;
            i /= p;
            j /= p;
        }
        result
    }

    pub(crate) fn neg_index(&self, i: usize) -> usize {
        let p = self.p as usize;
        let mut i = i;
        let mut result = 0;
        let mut place = 1;
        for _ in 0..self.r {
            result += ((p - i % p) % p) * place;
            place *= p;
            i /= p;
        }
        result
    }

    pub(crate) fn character_index(&self, k: usize, a: usize) -> Complex64 {
        let k = self.element_at(k).expect("index in range");
        let a = self.element_at(a).expect("index in range");
        self.additive_character(&k, &a).expect("members")
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {}", self.p, self.r, poly_to_string(&self.modulus))
    }
}
