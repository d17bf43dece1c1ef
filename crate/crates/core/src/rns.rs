//! Residue number system: modulus selection and mixed-radix reconstruction.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{inv_mod, is_prime};

/// Pairwise coprime moduli with their exact product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulusSet {
    moduli: Vec<u64>,
    dynamic_range: BigUint,
    // inverses[i][j] = m_j^{-1} mod m_i for j < i
    inverses: Vec<Vec<u64>>,
}

/// Residues `x mod m_i` of one integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RnsValue {
    pub residues: Vec<u64>,
}

impl ModulusSet {
    pub fn new(moduli: Vec<u64>) -> Result<Self> {
        if moduli.is_empty() {
            return Err(Error::Config("empty modulus set".into()));
        }
        let mut inverses = Vec::with_capacity(moduli.len());
        for (i, &mi) in moduli.iter().enumerate() {
            if !(2..1 << 32).contains(&mi) {
                return Err(Error::Config(format!("modulus {mi} outside [2, 2^32)")));
            }
            let row = moduli[..i]
                .iter()
                .map(|&mj| inv_mod(mj % mi, mi).ok_or(Error::NotCoprime(mj, mi)))
                .collect::<Result<Vec<_>>>()?;
            inverses.push(row);
        }
        let dynamic_range = moduli.iter().map(|&m| BigUint::from(m)).product();
        Ok(Self {
            moduli,
            dynamic_range,
            inverses,
        })
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn len(&self) -> usize {
        self.moduli.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moduli.is_empty()
    }

    /// `M = prod m_i`.
    pub fn dynamic_range(&self) -> &BigUint {
        &self.dynamic_range
    }

    pub fn reduce(&self, x: &BigInt) -> RnsValue {
        RnsValue {
            residues: self
                .moduli
                .iter()
                .map(|&m| {
                    let r = x.mod_floor(&BigInt::from(m));
                    u64::try_from(r).expect("residue below modulus")
                })
                .collect(),
        }
    }

    /// Digits `a_1..a_s` with `x = a_1 + a_2 m_1 + ... + a_s m_1 ... m_{s-1}`
    /// and `0 <= a_i < m_i`.
    pub fn mixed_radix_digits(&self, v: &RnsValue) -> Result<Vec<u64>> {
        if v.residues.len() != self.moduli.len() {
            return Err(Error::LengthMismatch {
                expected: self.moduli.len(),
                found: v.residues.len(),
            });
        }
        let mut digits: Vec<u64> = Vec::with_capacity(self.moduli.len());
        for (i, (&m, &x)) in self.moduli.iter().zip(&v.residues).enumerate() {
            let m128 = u128::from(m);
            let mut t = u128::from(x) % m128;
            for (&a, &inv) in digits.iter().zip(&self.inverses[i]) {
                let a = u128::from(a) % m128;
                t = ((t + m128 - a) % m128) * u128::from(inv) % m128;
            }
            digits.push(t as u64);
        }
        Ok(digits)
    }

    /// The unique `x` with `x = x_i (mod m_i)` and `-M/2 < x < M/2`.
    pub fn reconstruct(&self, v: &RnsValue) -> Result<BigInt> {
        let digits = self.mixed_radix_digits(v)?;
        // Horner over the radices m_{s-1}, ..., m_1
        let mut unsigned = BigUint::zero();
        for (k, &a) in digits.iter().enumerate().rev() {
            if k + 1 < digits.len() {
                unsigned *= self.moduli[k];
            }
            unsigned += a;
        }
        Ok(if &unsigned * 2u32 > self.dynamic_range {
            BigInt::from_biguint(Sign::Plus, unsigned) - BigInt::from(self.dynamic_range.clone())
        } else {
            BigInt::from(unsigned)
        })
    }
}

/// `ceil(p * log2(weight)) + 2`: bits needed for `|x| <= weight^p` plus a
/// sign bit and one spare.
pub fn coefficient_bound_bits(weight: &BigUint, power: u32) -> u64 {
    assert!(!weight.is_zero(), "weight must be positive");
    let bound = num_traits::pow(weight.clone(), power as usize);
    // smallest b with 2^b >= bound
    let bits = if bound.is_one() {
        0
    } else {
        (bound - 1u32).bits()
    };
    bits + 2
}

/// Largest primes below `2^31` exceeding `min_exclusive`, as many as needed
/// for a product above `2^bound_bits`.
pub fn select_primes(bound_bits: u64, min_exclusive: u64) -> Result<ModulusSet> {
    select_primes_below(bound_bits, min_exclusive, 31)
}

/// As [`select_primes`] with primes below `2^prime_bits`.
pub fn select_primes_below(bound_bits: u64, min_exclusive: u64, prime_bits: u32) -> Result<ModulusSet> {
    if !(2..=32).contains(&prime_bits) {
        return Err(Error::Config(format!("prime size of {prime_bits} bits unsupported")));
    }
    let target = BigUint::one() << bound_bits;
    let mut primes = Vec::new();
    let mut product = BigUint::one();
    let mut candidate = (1u64 << prime_bits) - 1;
    while product <= target {
        loop {
            if candidate <= min_exclusive.max(1) {
                return Err(Error::Config(format!(
                    "not enough primes in ({min_exclusive}, 2^{prime_bits}) for {bound_bits} bits"
                )));
            }
            let c = candidate;
            candidate -= 1;
            if is_prime(c) {
                primes.push(c);
                product *= c;
                break;
            }
        }
    }
    ModulusSet::new(primes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::RandBigInt;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn set(m: &[u64]) -> ModulusSet {
        ModulusSet::new(m.to_vec()).unwrap()
    }

    #[test]
    fn textbook_crt() {
        let ms = set(&[3, 5]);
        let v = RnsValue { residues: vec![2, 3] };
        // 8 = 2 + 2 * 3 unsigned, but 8 > 15 / 2 reads as 8 - 15
        assert_eq!(ms.mixed_radix_digits(&v).unwrap(), vec![2, 2]);
        assert_eq!(ms.reconstruct(&v).unwrap(), BigInt::from(-7));
        assert_eq!(ms.reconstruct(&RnsValue { residues: vec![2, 4] }).unwrap(), BigInt::from(-1));
        assert!(ms.reconstruct(&RnsValue { residues: vec![2] }).is_err());
        let ms = set(&[3, 5, 7]);
        assert_eq!(ms.reconstruct(&RnsValue { residues: vec![2, 3, 1] }).unwrap(), BigInt::from(8));
    }

    #[test]
    fn rejects_common_factors() {
        assert!(matches!(ModulusSet::new(vec![6, 9]), Err(Error::NotCoprime(6, 9))));
    }

    #[test]
    fn bound_bits() {
        assert_eq!(coefficient_bound_bits(&BigUint::from(2u32), 10), 12);
        assert_eq!(coefficient_bound_bits(&BigUint::from(1u32), 5), 2);
        // 151 * log2(23) = 683.06
        assert_eq!(coefficient_bound_bits(&BigUint::from(23u32), 151), 686);
        assert_eq!(coefficient_bound_bits(&BigUint::from(23u32), 0), 2);
        assert_eq!(coefficient_bound_bits(&BigUint::from(3u32), 1), 4);
    }

    #[test]
    fn prime_selection() {
        let one = select_primes(12, 100).unwrap();
        assert_eq!(one.moduli(), &[2_147_483_647]);
        let zero = select_primes(0, 5).unwrap();
        assert_eq!(zero.len(), 1);
        let big = select_primes(686, 302).unwrap();
        assert_eq!(big.len(), 23);
        assert_eq!(select_primes(687, 302).unwrap().len(), 23);
        assert!(big.dynamic_range() > &(BigUint::one() << 686u32));
        for w in big.moduli().windows(2) {
            assert!(w[0] > w[1]);
        }
        let mut last = 0;
        for bits in (0..800).step_by(37) {
            let ms = select_primes(bits, 1000).unwrap();
            assert!(ms.len() >= last);
            assert!(ms.moduli().iter().all(|&m| is_prime(m) && m > 1000 && m < 1 << 31));
            last = ms.len();
        }
        let small = select_primes_below(64, 100, 20).unwrap();
        assert!(small.moduli().iter().all(|&m| m < 1 << 20));
        assert!(select_primes_below(100, 1 << 20, 20).is_err());
    }

    /// Direct CRT with big integers: x = sum r_i * (M/m_i) * ((M/m_i)^{-1} mod m_i).
    fn direct_crt(ms: &ModulusSet, v: &RnsValue) -> BigInt {
        let m = BigInt::from(ms.dynamic_range().clone());
        let mut x = BigInt::zero();
        for (&mi, &ri) in ms.moduli().iter().zip(&v.residues) {
            let mi_big = BigInt::from(mi);
            let cof = &m / &mi_big;
            let cof_mod = u64::try_from(cof.mod_floor(&mi_big)).unwrap();
            let inv = inv_mod(cof_mod, mi).unwrap();
            x += &cof * BigInt::from(ri) * BigInt::from(inv);
        }
        let x = x.mod_floor(&m);
        if &x * 2 > m {
            x - m
        } else {
            x
        }
    }

    #[test]
    fn random_roundtrips_and_digits() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let count = rng.gen_range(1..=12);
            let mut primes: Vec<u64> = Vec::new();
            while primes.len() < count {
                let c = rng.gen_range(3u64..1 << 31);
                if is_prime(c) && !primes.contains(&c) {
                    primes.push(c);
                }
            }
            let ms = set(&primes);
            let m = BigInt::from(ms.dynamic_range().clone());
            let half = &m / 2;
            let x = rng.gen_bigint_range(&(-&half), &(&half + 1));
            let v = ms.reduce(&x);
            assert_eq!(ms.reconstruct(&v).unwrap(), x);
            assert_eq!(direct_crt(&ms, &v), x);

            let digits = ms.mixed_radix_digits(&v).unwrap();
            let mut expansion = BigUint::zero();
            let mut radix = BigUint::one();
            for (&a, &mi) in digits.iter().zip(ms.moduli()) {
                assert!(a < mi);
                expansion += &radix * a;
                radix *= mi;
            }
            assert_eq!(BigInt::from(expansion), x.mod_floor(&m));
        }
    }
}
