//! Finite abelian groups `Z_{r_1} ⊕ … ⊕ Z_{r_k}`, their characters, and
//! Fourier coefficients of group-indexed tuples.
//!
//! Elements are enumerated lexicographically on their coordinate tuples with
//! the first factor most significant, so the element with index `i` in
//! [`FiniteAbelianGroup::elements`] is the mixed-radix expansion of `i`.
//! Every value tuple in this module is indexed by that enumeration.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element `(g_1, …, g_k)` with `0 ≤ g_j < r_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(pub Vec<usize>);

impl GroupElement {
    pub fn coords(&self) -> &[usize] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Parses the comma-joined form produced by `Display`.
    pub fn parse(s: &str) -> Result<Self> {
        s.split(',')
            .map(|part| {
                part.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Malformed(format!("bad group element `{s}`")))
            })
            .collect::<Result<Vec<_>>>()
            .map(GroupElement)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// `G = Z_{r_1} ⊕ … ⊕ Z_{r_k}` with every `r_j ≥ 2`.
#[derive(Clone, Debug)]
pub struct FiniteAbelianGroup {
    factors: Vec<usize>,
    order: usize,
    // roots[j][a] = exp(2πi a / r_j)
    roots: Vec<Vec<Complex64>>,
}

impl PartialEq for FiniteAbelianGroup {
    fn eq(&self, other: &Self) -> bool {
        self.factors == other.factors
    }
}

impl Eq for FiniteAbelianGroup {}

impl FiniteAbelianGroup {
    pub fn new(factors: &[usize]) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidGroup("a group needs at least one factor".into()));
        }
        if let Some(&bad) = factors.iter().find(|&&r| r < 2) {
            return Err(Error::InvalidGroup(format!("factor {bad} is smaller than 2")));
        }
        let order = factors
            .iter()
            .try_fold(1usize, |acc, &r| acc.checked_mul(r))
            .ok_or_else(|| Error::InvalidGroup("group order overflows".into()))?;
        let roots = factors
            .iter()
            .map(|&r| {
                (0..r)
                    .map(|a| Complex64::from_polar(1.0, TAU * a as f64 / r as f64))
                    .collect()
            })
            .collect();
        Ok(Self {
            factors: factors.to_vec(),
            order,
            roots,
        })
    }

    /// The cyclic group `Z_r`.
    pub fn cyclic(r: usize) -> Result<Self> {
        Self::new(&[r])
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() == 1
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![0; self.rank()])
    }

    /// The generator `e_i` of the `i`-th factor.
    pub fn basis(&self, i: usize) -> GroupElement {
        let mut c = vec![0; self.rank()];
        c[i] = 1;
        GroupElement(c)
    }

    pub fn element(&self, index: usize) -> GroupElement {
        debug_assert!(index < self.order);
        let mut coords = vec![0; self.rank()];
        let mut rest = index;
        for (slot, &r) in coords.iter_mut().zip(&self.factors).rev() {
            *slot = rest % r;
            rest /= r;
        }
        GroupElement(coords)
    }

    /// Position of `g` in the lexicographic enumeration.
    pub fn index_of(&self, g: &GroupElement) -> Result<usize> {
        self.check(g)?;
        Ok(g.0
            .iter()
            .zip(&self.factors)
            .fold(0, |acc, (&c, &r)| acc * r + c))
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(|i| self.element(i))
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.0.len() == self.rank() && g.0.iter().zip(&self.factors).all(|(&c, &r)| c < r)
    }

    fn check(&self, g: &GroupElement) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::GroupMismatch(format!(
                "{g} is not an element of Z{:?}",
                self.factors
            )))
        }
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.factors)
                .map(|((&x, &y), &r)| (x + y) % r)
                .collect(),
        )
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&self.factors)
                .map(|(&x, &r)| (r - x) % r)
                .collect(),
        )
    }

    /// `lcm_j r_j / gcd(h_j, r_j)`.
    pub fn element_order(&self, h: &GroupElement) -> usize {
        h.0.iter()
            .zip(&self.factors)
            .map(|(&c, &r)| r / gcd(c, r))
            .fold(1, lcm)
    }

    /// `χ_h(g) = Π_j ζ_{r_j}^{h_j g_j}`.
    pub fn character(&self, h: &GroupElement, g: &GroupElement) -> Result<Complex64> {
        self.check(h)?;
        self.check(g)?;
        Ok(self.character_unchecked(h, g))
    }

    pub(crate) fn character_unchecked(&self, h: &GroupElement, g: &GroupElement) -> Complex64 {
        h.0.iter()
            .zip(&g.0)
            .zip(&self.factors)
            .zip(&self.roots)
            .fold(Complex64::new(1.0, 0.0), |acc, (((&a, &b), &r), roots)| {
                acc * roots[(a * b) % r]
            })
    }

    /// Character table indexed `[h][g]` in enumeration order.
    pub fn character_table(&self) -> Vec<Vec<Complex64>> {
        let elems: Vec<_> = self.elements().collect();
        elems
            .iter()
            .map(|h| elems.iter().map(|g| self.character_unchecked(h, g)).collect())
            .collect()
    }

    fn check_values(&self, values: &[Complex64]) -> Result<()> {
        if values.len() != self.order {
            return Err(Error::IncompleteValues {
                expected: self.order,
                got: values.len(),
            });
        }
        Ok(())
    }

    /// `c_h = (1/|G|) Σ_g values(g) · conj(χ_h(g))`.
    pub fn fourier_coefficient(&self, values: &[Complex64], h: &GroupElement) -> Result<Complex64> {
        self.check_values(values)?;
        self.check(h)?;
        let sum: Complex64 = self
            .elements()
            .zip(values)
            .map(|(g, v)| v * self.character_unchecked(h, &g).conj())
            .sum();
        Ok(sum / self.order as f64)
    }

    pub fn full_spectrum(&self, values: &[Complex64]) -> Result<Spectrum> {
        self.check_values(values)?;
        let table = self.character_table();
        let n = self.order as f64;
        let coefficients = table
            .iter()
            .map(|chi| {
                chi.iter()
                    .zip(values)
                    .map(|(c, v)| v * c.conj())
                    .sum::<Complex64>()
                    / n
            })
            .collect();
        Ok(Spectrum { coefficients })
    }

    /// `values(g) = Σ_h c_h χ_h(g)`.
    pub fn inverse_transform(&self, spectrum: &Spectrum) -> Result<Vec<Complex64>> {
        self.check_values(&spectrum.coefficients)?;
        let elems: Vec<_> = self.elements().collect();
        Ok(elems
            .iter()
            .map(|g| {
                elems
                    .iter()
                    .zip(&spectrum.coefficients)
                    .map(|(h, c)| c * self.character_unchecked(h, g))
                    .sum()
            })
            .collect())
    }
}

/// Fourier coefficients `c_h`, indexed by `h` in enumeration order.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub coefficients: Vec<Complex64>,
}

impl Spectrum {
    pub fn get(&self, group: &FiniteAbelianGroup, h: &GroupElement) -> Result<Complex64> {
        Ok(self.coefficients[group.index_of(h)?])
    }
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}
