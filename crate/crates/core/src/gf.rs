//! Table-driven arithmetic in GF(q) for prime powers q ≤ 16.
//!
//! Elements are coded as integers `0..q`. For extension fields the code is the
//! coefficient vector of the polynomial residue read as base-p digits, lowest
//! degree first, so in GF(4) the code `2` is `x` and `3` is `x + 1`.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest field order with built-in tables.
pub const MAX_Q: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("GF({0}) is not supported (q must be at most {MAX_Q})")]
    Unsupported(u32),
    #[error("division by zero")]
    DivideByZero,
}

/// Irreducible moduli for the extension fields, low-degree coefficient first
/// (leading coefficient 1 implied by the degree).
fn modulus(q: u32) -> Option<&'static [u8]> {
    match q {
        4 => Some(&[1, 1]),       // x^2 + x + 1
        8 => Some(&[1, 1, 0]),    // x^3 + x + 1
        9 => Some(&[1, 0]),       // x^2 + 1
        16 => Some(&[1, 1, 0, 0]), // x^4 + x + 1
        _ => None,
    }
}

fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        // q itself is prime
        return Some((q, 1));
    }
    let (mut rest, mut deg) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        deg += 1;
    }
    (rest == 1).then_some((p, deg))
}

/// The finite field GF(q) with complete operation tables. Cloning is cheap;
/// the tables are shared.
#[derive(Clone)]
pub struct Field(Arc<Tables>);

struct Tables {
    q: u32,
    p: u32,
    deg: u32,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.q == other.0.q
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0.q)
    }
}

impl Field {
    pub fn new(q: u32) -> Result<Self, GfError> {
        let (p, deg) = prime_power(q).ok_or(GfError::NotPrimePower(q))?;
        if q > MAX_Q {
            return Err(GfError::Unsupported(q));
        }
        let qs = q as usize;
        let digits = |mut x: u32| -> Vec<u32> {
            (0..deg)
                .map(|_| {
                    let d = x % p;
                    x /= p;
                    d
                })
                .collect()
        };
        let code = |ds: &[u32]| -> u8 { ds.iter().rev().fold(0, |acc, &d| acc * p + d) as u8 };

        let mut add = vec![0u8; qs * qs];
        let mut mul = vec![0u8; qs * qs];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = code(&sum);
                mul[(a * q + b) as usize] = if deg == 1 {
                    ((a * b) % p) as u8
                } else {
                    code(&poly_mul_mod(&da, &db, p, modulus(q).expect("extension modulus")))
                };
            }
        }

        let mut neg = vec![0u8; qs];
        let mut inv = vec![0u8; qs];
        for a in 0..qs {
            neg[a] = (0..qs).find(|&b| add[a * qs + b] == 0).expect("additive inverse") as u8;
            if a != 0 {
                inv[a] = (1..qs).find(|&b| mul[a * qs + b] == 1).expect("multiplicative inverse") as u8;
            }
        }

        Ok(Field(Arc::new(Tables { q, p, deg, add, mul, neg, inv })))
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    /// Characteristic.
    pub fn p(&self) -> u32 {
        self.0.p
    }

    /// Extension degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.0.deg
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.0.add[a as usize * self.0.q as usize + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.0.mul[a as usize * self.0.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.0.neg[a as usize]
    }

    pub fn inv(&self, a: u8) -> Result<u8, GfError> {
        if a == 0 {
            return Err(GfError::DivideByZero);
        }
        Ok(self.0.inv[a as usize])
    }

    /// Inverse of a nonzero element; panics on zero.
    #[inline]
    pub(crate) fn inv_nonzero(&self, a: u8) -> u8 {
        debug_assert!(a != 0);
        self.0.inv[a as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = u8> {
        0..self.0.q as u8
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: u8) -> Result<u32, GfError> {
        if a == 0 {
            return Err(GfError::DivideByZero);
        }
        let mut x = a;
        let mut k = 1;
        while x != 1 {
            x = self.mul(x, a);
            k += 1;
        }
        Ok(k)
    }
}

fn poly_mul_mod(a: &[u32], b: &[u32], p: u32, modulus: &[u8]) -> Vec<u32> {
    let deg = a.len();
    let mut prod = vec![0u32; 2 * deg];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    // x^deg = -(modulus tail)
    for top in (deg..2 * deg).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        prod[top] = 0;
        for (i, &m) in modulus.iter().enumerate() {
            let idx = top - deg + i;
            prod[idx] = (prod[idx] + (p - c) * m as u32) % p;
        }
    }
    prod.truncate(deg);
    prod
}

#[cfg(test)]
mod tests {
    use super::*;

    const SUPPORTED: [u32; 10] = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16];

    #[test]
    fn gf2_is_xor_and() {
        let f = Field::new(2).unwrap();
        for a in 0..2u8 {
            for b in 0..2u8 {
                assert_eq!(f.add(a, b), a ^ b);
                assert_eq!(f.mul(a, b), a & b);
            }
        }
    }

    #[test]
    fn gf4_has_characteristic_two() {
        let f = Field::new(4).unwrap();
        assert_eq!(f.p(), 2);
        assert!(f.elements().all(|x| f.add(x, x) == 0));
    }

    #[test]
    fn rejects_bad_orders() {
        assert_eq!(Field::new(6), Err(GfError::NotPrimePower(6)));
        assert_eq!(Field::new(1), Err(GfError::NotPrimePower(1)));
        assert_eq!(Field::new(12), Err(GfError::NotPrimePower(12)));
        assert_eq!(Field::new(17), Err(GfError::Unsupported(17)));
        assert_eq!(Field::new(25), Err(GfError::Unsupported(25)));
    }

    #[test]
    fn small_examples() {
        assert_eq!(Field::new(3).unwrap().add(2, 2), 1);
        assert_eq!(Field::new(5).unwrap().inv(2), Ok(3));
        assert_eq!(Field::new(2).unwrap().inv(0), Err(GfError::DivideByZero));
    }

    #[test]
    fn gf4_polynomial_codes() {
        // x * x = x + 1 modulo x^2 + x + 1
        let f = Field::new(4).unwrap();
        assert_eq!(f.mul(2, 2), 3);
        // GF(9) with x^2 + 1: x * x = -1 = 2
        let f = Field::new(9).unwrap();
        assert_eq!(f.mul(3, 3), 2);
    }

    #[test]
    fn field_axioms_exhaustive() {
        for q in SUPPORTED {
            let f = Field::new(q).unwrap();
            let els: Vec<u8> = f.elements().collect();
            for &a in &els {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1, "q={q} a={a}");
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert!((f.add(a, b) as u32) < q);
                    for &c in &els {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn multiplicative_group_is_cyclic() {
        for q in SUPPORTED {
            let f = Field::new(q).unwrap();
            assert!((1..q as u8).any(|g| f.order(g).unwrap() == q - 1), "GF({q})");
        }
    }
}
