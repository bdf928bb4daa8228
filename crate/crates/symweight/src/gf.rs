//! Arithmetic in GF(2^m) through exp/log tables.

use crate::error::{Error, Result};

/// Fixed primitive polynomial for each supported degree, as a bitmask
/// including the leading term.
pub fn primitive_poly(m: u32) -> Option<u32> {
    match m {
        2 => Some(0b111),
        3 => Some(0b1011),
        4 => Some(0b1_0011),
        5 => Some(0b10_0101),
        6 => Some(0b100_0011),
        _ => None,
    }
}

/// The field GF(2^m) for `2 <= m <= 6`.
#[derive(Clone, Debug)]
pub struct FieldSpec {
    m: u32,
    q: usize,
    poly: u32,
    exp: Vec<u8>,
    log: Vec<u8>,
}

impl FieldSpec {
    /// Field of size `2^m` with the fixed primitive polynomial for `m`.
    pub fn new(m: u32) -> Result<Self> {
        let poly = primitive_poly(m)
            .ok_or_else(|| Error::UnsupportedField(format!("degree {m} not in [2, 6]")))?;
        let q = 1usize << m;
        let mut exp = vec![0u8; 2 * q];
        let mut log = vec![0u8; q];
        let mut x = 1u32;
        for i in 0..q - 1 {
            if i > 0 && x == 1 {
                return Err(Error::UnsupportedField(format!(
                    "{poly:#b} is not primitive"
                )));
            }
            exp[i] = x as u8;
            log[x as usize] = i as u8;
            x <<= 1;
            if x & (1 << m) != 0 {
                x ^= poly;
            }
        }
        for i in q - 1..2 * q {
            exp[i] = exp[i - (q - 1)];
        }
        Ok(FieldSpec {
            m,
            q,
            poly,
            exp,
            log,
        })
    }

    /// Field of size `q`, which must be a power of two.
    pub fn with_size(q: usize) -> Result<Self> {
        if !q.is_power_of_two() || q < 4 {
            return Err(Error::UnsupportedField(format!(
                "size {q} is not 2^m with m >= 2"
            )));
        }
        Self::new(q.trailing_zeros())
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn poly(&self) -> u32 {
        self.poly
    }

    /// `α^i` for the primitive element `α`.
    pub fn alpha_pow(&self, i: usize) -> u8 {
        self.exp[i % (self.q - 1)]
    }

    pub fn add(&self, a: u8, b: u8) -> u8 {
        a ^ b
    }

    pub fn mul(&self, a: u8, b: u8) -> u8 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[self.log[a as usize] as usize + self.log[b as usize] as usize]
        }
    }

    pub fn inv(&self, a: u8) -> Option<u8> {
        (a != 0).then(|| self.exp[(self.q - 1 - self.log[a as usize] as usize) % (self.q - 1)])
    }

    pub fn pow(&self, a: u8, e: usize) -> u8 {
        if e == 0 {
            1
        } else if a == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] as usize * e) % (self.q - 1)]
        }
    }

    /// Horner evaluation of `Σ coeffs[j] x^j`.
    pub fn eval(&self, coeffs: &[u8], x: u8) -> u8 {
        coeffs.iter().rev().fold(0, |acc, &c| self.mul(acc, x) ^ c)
    }
}
