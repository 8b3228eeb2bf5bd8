//! Prime-field arithmetic, the additive and quadratic characters, and the
//! diagonal quadratic form `‖m‖ = m_1² + … + m_d²`.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest grid `q^d` that enumeration routines will scan.
pub const GRID_BUDGET: u128 = 100_000_000;

/// Values of `χ(a) = exp(2πi a/q)` and the quadratic character `η`.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    chi: Vec<Complex64>,
    eta: Vec<i8>,
}

impl CharacterTable {
    fn new(q: u32, squares: &[bool]) -> Self {
        let chi = (0..q)
            .map(|a| Complex64::from_polar(1.0, TAU * f64::from(a) / f64::from(q)))
            .collect();
        let eta = (0..q as usize)
            .map(|a| match (a, squares[a]) {
                (0, _) => 0,
                (_, true) => 1,
                (_, false) => -1,
            })
            .collect();
        Self { chi, eta }
    }

    /// `χ(a)` for a residue `a` in `0..q`.
    #[inline]
    pub fn chi(&self, a: u32) -> Complex64 {
        self.chi[a as usize]
    }

    /// `η(a)`, with `η(0) = 0`.
    #[inline]
    pub fn eta(&self, a: u32) -> i8 {
        self.eta[a as usize]
    }

    pub fn chi_values(&self) -> &[Complex64] {
        &self.chi
    }
}

/// An odd prime field `F_q` together with the ambient dimension `d`.
///
/// Immutable after construction; cloning copies the `O(q)` lookup tables.
#[derive(Clone, Debug)]
pub struct FieldCtx {
    q: u32,
    d: usize,
    inv_table: Vec<u32>,
    square_set: Vec<bool>,
    chars: CharacterTable,
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

impl FieldCtx {
    pub fn new(q: u64, d: usize) -> Result<Self> {
        if q < 3 || q.is_multiple_of(2) || !is_prime(q) || q > u64::from(u16::MAX) {
            return Err(Error::NotOddPrime(q));
        }
        if d < 2 {
            return Err(Error::BadDimension(d));
        }
        let q32 = q as u32;
        let qu = q as usize;

        let mut square_set = vec![false; qu];
        for s in 1..q {
            square_set[((s * s) % q) as usize] = true;
        }

        let mut inv_table = vec![0u32; qu];
        for a in 1..q {
            // Fermat: a^(q-2)
            inv_table[a as usize] = pow_mod(a, q - 2, q) as u32;
        }

        let chars = CharacterTable::new(q32, &square_set);
        Ok(Self {
            q: q32,
            d,
            inv_table,
            square_set,
            chars,
        })
    }

    /// Same field, different dimension.
    pub fn with_dim(&self, d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::BadDimension(d));
        }
        Ok(Self { d, ..self.clone() })
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn chars(&self) -> &CharacterTable {
        &self.chars
    }

    /// Number of points `q^d` of the ambient space.
    pub fn grid_size(&self) -> u128 {
        u128::from(self.q).pow(self.d as u32)
    }

    /// Errors with `TooLarge` when `q^d` exceeds [`GRID_BUDGET`].
    pub fn check_budget(&self) -> Result<usize> {
        let n = self.grid_size();
        if n > GRID_BUDGET {
            return Err(Error::TooLarge(n));
        }
        Ok(n as usize)
    }

    #[inline]
    pub fn reduce(&self, a: i64) -> u32 {
        a.rem_euclid(i64::from(self.q)) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        (a + b) % self.q
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        (self.q - a % self.q) % self.q
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((u64::from(a) * u64::from(b)) % u64::from(self.q)) as u32
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        let a = a % self.q;
        if a == 0 {
            return Err(Error::ZeroInverse(a));
        }
        Ok(self.inv_table[a as usize])
    }

    pub fn is_square(&self, a: u32) -> bool {
        self.square_set[(a % self.q) as usize]
    }

    /// Nonzero squares of `F_q`, ascending.
    pub fn squares(&self) -> Vec<u32> {
        (1..self.q).filter(|&a| self.square_set[a as usize]).collect()
    }

    pub fn eta(&self, a: u32) -> i8 {
        self.chars.eta(a % self.q)
    }

    pub fn chi(&self, a: u32) -> Complex64 {
        self.chars.chi(a % self.q)
    }

    pub fn norm_form(&self, m: &[u32]) -> Result<u32> {
        if m.len() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: m.len(),
            });
        }
        Ok(self.norm_unchecked(m))
    }

    #[inline]
    pub(crate) fn norm_unchecked(&self, m: &[u32]) -> u32 {
        let q = u64::from(self.q);
        (m.iter().map(|&c| u64::from(c) * u64::from(c)).sum::<u64>() % q) as u32
    }

    #[inline]
    pub(crate) fn dot_unchecked(&self, m: &[u32], x: &[u32]) -> u32 {
        let q = u64::from(self.q);
        (m.iter()
            .zip(x)
            .map(|(&a, &b)| u64::from(a) * u64::from(b))
            .sum::<u64>()
            % q) as u32
    }

    /// Decodes a lexicographic index (`m_1` most significant) into `out`.
    #[inline]
    pub fn decode_into(&self, mut index: usize, out: &mut [u32]) {
        let q = self.q as usize;
        for slot in out.iter_mut().rev() {
            *slot = (index % q) as u32;
            index /= q;
        }
    }

    #[inline]
    pub fn encode(&self, m: &[u32]) -> usize {
        let q = self.q as usize;
        m.iter().fold(0, |acc, &c| acc * q + c as usize)
    }

    /// Checks that `x` has `d` coordinates and reduces them mod `q`.
    pub fn reduce_vector(&self, x: &[i64]) -> Result<Vec<u32>> {
        if x.len() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: x.len(),
            });
        }
        Ok(x.iter().map(|&c| self.reduce(c)).collect())
    }
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}
