//! Arithmetic modulo a word-size prime.

/// Residues modulo a prime `q < 2^32`, reduced with a precomputed Barrett
/// constant so that products never need a hardware division.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    q: u64,
    // floor(2^64 / q)
    barrett: u64,
}

impl PrimeField {
    /// Panics unless `2 <= q < 2^32`. Primality is the caller's contract.
    pub fn new(q: u64) -> Self {
        assert!((2..1 << 32).contains(&q), "modulus {q} outside [2, 2^32)");
        let barrett = (u128::from(u64::MAX) + 1) / u128::from(q);
        Self {
            q,
            barrett: barrett as u64,
        }
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// Reduces any `x < 2^64`.
    #[inline(always)]
    pub fn reduce(&self, x: u64) -> u64 {
        let est = ((u128::from(x) * u128::from(self.barrett)) >> 64) as u64;
        let mut r = x - est * self.q;
        while r >= self.q {
            r -= self.q;
        }
        r
    }

    #[inline(always)]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline(always)]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline(always)]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline(always)]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a * b)
    }

    /// `a * b + c`.
    #[inline(always)]
    pub fn mul_add(&self, a: u64, b: u64, c: u64) -> u64 {
        self.reduce(a * b + c)
    }

    /// Right-to-left binary powering.
    pub fn pow(&self, base: u64, exp: u64) -> u64 {
        self.pow_counted(base, exp).0
    }

    /// Like [`pow`](Self::pow), also returning the number of field
    /// multiplications performed.
    #[inline]
    pub fn pow_counted(&self, base: u64, mut exp: u64) -> (u64, u64) {
        let mut result = 1 % self.q;
        let mut b = self.reduce(base);
        let mut mults = 0;
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.mul(result, b);
                mults += 1;
            }
            exp >>= 1;
            if exp > 0 {
                b = self.mul(b, b);
                mults += 1;
            }
        }
        (result, mults)
    }

    /// Inverse by Fermat's little theorem; `a` must be nonzero mod `q`.
    pub fn inv(&self, a: u64) -> u64 {
        let a = self.reduce(a);
        assert!(a != 0, "zero has no inverse modulo {}", self.q);
        self.pow(a, self.q - 2)
    }

    /// Embeds a signed integer.
    pub fn from_i64(&self, x: i64) -> u64 {
        let r = x.rem_euclid(self.q as i64);
        r as u64
    }
}

/// `a^e mod q` for any modulus `q < 2^32`.
pub fn pow_mod(a: u64, e: u64, q: u64) -> u64 {
    PrimeField::new(q).pow(a, e)
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(m)) as u64
}

fn pow_mod_u64(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod_u64(r, a, m);
        }
        a = mul_mod_u64(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin, exact for all `n < 2^64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Extended Euclid: inverse of `a` modulo `m` when `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (i128::from(m), i128::from(a % m));
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(i128::from(m)) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn powers() {
        assert_eq!(pow_mod(3, 5, 7), 5);
        assert_eq!(pow_mod(9, 0, 7), 1);
        assert_eq!(pow_mod(2, 10, 1_000_003), 1024);
        let f = PrimeField::new(101);
        assert_eq!(f.pow_counted(5, 0), (1, 0));
        // 13 = 0b1101: three products, three squarings
        assert_eq!(f.pow_counted(2, 13).1, 6);
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime(2_147_483_647));
        assert!(!is_prime(2_147_483_649));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2, 3, 5, 7
    }

    #[test]
    fn inverses() {
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(6, 9), None);
        let f = PrimeField::new(2_147_483_629);
        assert_eq!(f.mul(f.inv(123_456), 123_456), 1);
    }

    proptest! {
        #[test]
        fn barrett_matches_division(q in 2u64..(1 << 31), a in any::<u64>(), b in any::<u64>()) {
            let f = PrimeField::new(q);
            let (a, b) = (a % q, b % q);
            prop_assert_eq!(f.mul(a, b), mul_mod_u64(a, b, q));
            prop_assert_eq!(f.add(a, b), (a + b) % q);
            prop_assert_eq!(f.sub(a, b), (a + q - b) % q);
        }

        #[test]
        fn reduce_any_word(q in 2u64..(1 << 32), x in any::<u64>()) {
            prop_assert_eq!(PrimeField::new(q).reduce(x), x % q);
        }
    }
}
