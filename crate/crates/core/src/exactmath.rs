//! Exact nonnegative-integer primitives.
//!
//! Every scalar in the crate is a [`Nat`]. Products that can outgrow 64 bits
//! are formed in `u128` and narrowed with a checked conversion, so an
//! out-of-range value surfaces as [`MathError::Overflow`] instead of wrapping.

use thiserror::Error;

/// Nonnegative integer used for every order parameter, count and prime.
pub type Nat = u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum MathError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("integer overflow")]
    Overflow,
    #[error("moduli {0} and {1} are not coprime")]
    NonCoprimeModuli(Nat, Nat),
    #[error("residue {residue} is not reduced modulo {modulus}")]
    UnreducedResidue { residue: Nat, modulus: Nat },
}

pub type MathResult<T> = Result<T, MathError>;

pub(crate) fn narrow(v: u128) -> MathResult<Nat> {
    Nat::try_from(v).map_err(|_| MathError::Overflow)
}

/// Checked product of any number of factors.
pub fn product(factors: &[Nat]) -> MathResult<Nat> {
    let mut acc: u128 = 1;
    for &f in factors {
        acc = acc.checked_mul(f as u128).ok_or(MathError::Overflow)?;
    }
    narrow(acc)
}

pub fn checked_add(a: Nat, b: Nat) -> MathResult<Nat> {
    a.checked_add(b).ok_or(MathError::Overflow)
}

pub fn checked_mul(a: Nat, b: Nat) -> MathResult<Nat> {
    a.checked_mul(b).ok_or(MathError::Overflow)
}

/// Least integer `>= a / b`.
pub fn ceil_div(a: Nat, b: Nat) -> MathResult<Nat> {
    narrow(ceil_div_wide(a as u128, b as u128)?)
}

/// [`ceil_div`] on 128-bit operands.
pub fn ceil_div_wide(a: u128, b: u128) -> MathResult<u128> {
    if b == 0 {
        return Err(MathError::DivisionByZero);
    }
    let q = a / b;
    Ok(if q * b == a { q } else { q + 1 })
}

/// `true` iff `d` divides `n`.
pub fn divides(d: Nat, n: Nat) -> MathResult<bool> {
    if d == 0 {
        return Err(MathError::DivisionByZero);
    }
    Ok(n % d == 0)
}

/// Same as [`divides`] but for a 128-bit dividend, used where the dividend
/// is a product that may not fit in 64 bits.
pub fn divides_wide(d: Nat, n: u128) -> MathResult<bool> {
    if d == 0 {
        return Err(MathError::DivisionByZero);
    }
    Ok(n % d as u128 == 0)
}

pub fn gcd(mut a: Nat, mut b: Nat) -> Nat {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

// The first twelve primes form a deterministic Miller-Rabin witness set for
// every n < 3.3 * 10^24, which covers all of u64.
const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic primality test valid on the whole `u64` range.
pub fn is_prime(n: Nat) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// All primes `<= bound`, in increasing order.
pub fn primes_up_to(bound: Nat) -> Vec<Nat> {
    (2..=bound).filter(|&n| is_prime(n)).collect()
}

/// Distinct prime divisors of `n` in increasing order; empty for `n < 2`.
///
/// Trial division, stopping early once the cofactor is itself prime.
pub fn prime_divisors(mut n: Nat) -> Vec<Nat> {
    let mut out = Vec::new();
    let mut d: Nat = 2;
    let mut cofactor_prime = is_prime(n);
    while n > 1 {
        if cofactor_prime {
            out.push(n);
            break;
        }
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
            cofactor_prime = is_prime(n);
        }
        d += if d == 2 { 1 } else { 2 };
    }
    out
}

/// The unique `r < m1 * m2` with `r ≡ r1 (mod m1)` and `r ≡ r2 (mod m2)`.
pub fn crt_pair(r1: Nat, m1: Nat, r2: Nat, m2: Nat) -> MathResult<Nat> {
    if m1 == 0 || m2 == 0 {
        return Err(MathError::DivisionByZero);
    }
    if r1 >= m1 {
        return Err(MathError::UnreducedResidue {
            residue: r1,
            modulus: m1,
        });
    }
    if r2 >= m2 {
        return Err(MathError::UnreducedResidue {
            residue: r2,
            modulus: m2,
        });
    }
    if gcd(m1, m2) != 1 {
        return Err(MathError::NonCoprimeModuli(m1, m2));
    }
    let modulus = checked_mul(m1, m2)?;
    // r = r1 + m1 * k where k ≡ (r2 - r1) * m1^{-1} (mod m2)
    let inv = mod_inverse(m1 % m2, m2).ok_or(MathError::NonCoprimeModuli(m1, m2))?;
    let diff = (r2 as i128 - r1 as i128).rem_euclid(m2 as i128) as u64;
    let k = mul_mod(diff, inv, m2);
    narrow(r1 as u128 + m1 as u128 * k as u128).map(|r| r % modulus)
}

fn mod_inverse(a: Nat, m: Nat) -> Option<Nat> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m as i128) as Nat)
}
