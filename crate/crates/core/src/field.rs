//! Exact arithmetic in GF(q), q = p^n with p an odd prime.
//!
//! Elements are encoded by their *index*: the base-p digits of the index,
//! least significant first, are the coefficients c0, c1, ... of the
//! polynomial c0 + c1 t + ... reduced modulo the field's defining
//! polynomial. Index 0 is zero and index 1 is one in every field, and the
//! encoding of a prime field is the usual residue.
//!
//! Prime fields use machine modular arithmetic. Extension fields use
//! exp/log tables over a primitive element together with a Zech logarithm
//! table for addition, so every table is O(q) in size.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 16;

/// Pinned defining polynomials (Conway polynomials), constant term first.
///
/// Covers every odd prime power up to 128 plus a few larger ones.
pub const BUILTIN_MODULI: &[(u32, u32, &[u32])] = &[
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (3, 5, &[1, 2, 0, 0, 0, 1]),
    (5, 2, &[2, 4, 1]),
    (5, 3, &[3, 3, 0, 1]),
    (5, 4, &[2, 4, 4, 0, 1]),
    (7, 2, &[3, 6, 1]),
    (7, 3, &[4, 0, 6, 1]),
    (11, 2, &[2, 7, 1]),
    (13, 2, &[2, 12, 1]),
];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u32),
    #[error("characteristic 2 is not supported, the field order must be odd")]
    EvenCharacteristic,
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("malformed modulus: {0}")]
    MalformedModulus(&'static str),
    #[error("modulus is reducible over GF({0})")]
    ReducibleModulus(u32),
    #[error("no built-in modulus for GF({p}^{n}); pass one explicitly")]
    NoBuiltinModulus { p: u32, n: u32 },
    #[error("GF({p}^{n}) exceeds the supported order {max}", max = MAX_ORDER)]
    OrderTooLarge { p: u32, n: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("element index {index} is out of range for a field of order {order}")]
    ElementOutOfRange { index: u32, order: u32 },
}

/// An element of some [`FieldSpec`], stored as its canonical index.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub const fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Wraps an index without range checking. Callers must guarantee
    /// `index < q` for the field the element is used with.
    #[inline]
    pub(crate) const fn from_index_unchecked(index: u32) -> Self {
        FieldElement(index)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Neg,
}

const NO_LOG: u32 = u32::MAX;

#[derive(Clone)]
struct ExtensionTables {
    /// `exp[k] = g^k` for `k < 2(q-1)`, doubled so sums of logs need no reduction.
    exp: Vec<u32>,
    /// `log[a]` for nonzero `a`; `log[0]` is unused.
    log: Vec<u32>,
    /// `zech[d] = log(1 + g^d)`, or `NO_LOG` when `1 + g^d = 0`.
    zech: Vec<u32>,
}

/// The finite field GF(p^n) with a pinned defining polynomial.
#[derive(Clone)]
pub struct FieldSpec {
    characteristic: u32,
    degree: u32,
    modulus: Vec<u32>,
    order: u32,
    inverse: Vec<u32>,
    ext: Option<ExtensionTables>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.characteristic == other.characteristic
            && self.degree == other.degree
            && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.characteristic)
            .field("n", &self.degree)
            .field("modulus", &self.modulus)
            .finish()
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// If `q` is a prime power p^n returns `(p, n)`.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut n = 0;
    while rest % p == 0 {
        rest /= p;
        n += 1;
    }
    (rest == 1).then_some((p, n))
}

pub fn builtin_modulus(p: u32, n: u32) -> Option<&'static [u32]> {
    BUILTIN_MODULI
        .iter()
        .find(|(bp, bn, _)| *bp == p && *bn == n)
        .map(|(_, _, m)| *m)
}

impl FieldSpec {
    /// GF(p), or GF(p^n) with either the supplied modulus or the built-in one.
    pub fn new(p: u32, n: u32, modulus: Option<&[u32]>) -> Result<Self, FieldError> {
        if p == 2 {
            return Err(FieldError::EvenCharacteristic);
        }
        if !is_prime(p) {
            return Err(FieldError::NonPrimeCharacteristic(p));
        }
        if n == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let order = p
            .checked_pow(n)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or(FieldError::OrderTooLarge { p, n })?;

        let modulus: Vec<u32> = match modulus {
            Some(m) => m.to_vec(),
            None if n == 1 => vec![0, 1],
            None => builtin_modulus(p, n)
                .ok_or(FieldError::NoBuiltinModulus { p, n })?
                .to_vec(),
        };
        if modulus.len() != n as usize + 1 {
            return Err(FieldError::MalformedModulus("length must be degree + 1"));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(FieldError::MalformedModulus("coefficients must lie in [0, p)"));
        }
        if modulus[n as usize] != 1 {
            return Err(FieldError::MalformedModulus("modulus must be monic"));
        }
        if n == 1 {
            // Elements are residues; the modulus is only a placeholder.
            if modulus[0] != 0 {
                return Err(FieldError::MalformedModulus("prime fields use the modulus [0, 1]"));
            }
        } else if !poly::is_irreducible(&modulus, p) {
            return Err(FieldError::ReducibleModulus(p));
        }

        let mut spec = FieldSpec {
            characteristic: p,
            degree: n,
            modulus,
            order,
            inverse: Vec::new(),
            ext: None,
        };
        if n > 1 {
            spec.ext = Some(spec.build_extension_tables());
        }
        spec.inverse = spec.build_inverse_table();
        Ok(spec)
    }

    /// Prime field GF(p).
    pub fn prime(p: u32) -> Result<Self, FieldError> {
        Self::new(p, 1, None)
    }

    /// Field of order `q` using the built-in modulus.
    pub fn of_order(q: u32) -> Result<Self, FieldError> {
        if q % 2 == 0 && q > 0 {
            return Err(FieldError::EvenCharacteristic);
        }
        let (p, n) = prime_power(q).ok_or(FieldError::NonPrimeCharacteristic(q))?;
        Self::new(p, n, None)
    }

    pub fn characteristic(&self) -> u32 {
        self.characteristic
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// q = p^n.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_prime_field(&self) -> bool {
        self.degree == 1
    }

    pub fn element(&self, index: u32) -> Result<FieldElement, FieldError> {
        if index < self.order {
            Ok(FieldElement(index))
        } else {
            Err(FieldError::ElementOutOfRange { index, order: self.order })
        }
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl DoubleEndedIterator<Item = FieldElement> + ExactSizeIterator {
        (0..self.order).map(FieldElement)
    }

    /// Base-p digits of `a`, constant coefficient first.
    pub fn digits(&self, a: FieldElement) -> Vec<u32> {
        let mut rest = a.0;
        (0..self.degree)
            .map(|_| {
                let d = rest % self.characteristic;
                rest /= self.characteristic;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> Result<FieldElement, FieldError> {
        if digits.len() != self.degree as usize {
            return Err(FieldError::MalformedModulus("digit count must equal the degree"));
        }
        let p = self.characteristic;
        let mut index = 0u32;
        for &d in digits.iter().rev() {
            if d >= p {
                return Err(FieldError::ElementOutOfRange { index: d, order: p });
            }
            index = index * p + d;
        }
        Ok(FieldElement(index))
    }

    /// The image of the integer `k` under Z -> GF(q).
    pub fn from_int(&self, k: i64) -> FieldElement {
        FieldElement(k.rem_euclid(self.characteristic as i64) as u32)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.ext {
            None => {
                let s = a.0 + b.0;
                FieldElement(if s >= self.order { s - self.order } else { s })
            }
            Some(t) => {
                if a.0 == 0 {
                    return b;
                }
                if b.0 == 0 {
                    return a;
                }
                let la = t.log[a.0 as usize];
                let lb = t.log[b.0 as usize];
                let m = self.order - 1;
                // a + b = a (1 + g^(lb - la))
                let d = if lb >= la { lb - la } else { lb + m - la };
                match t.zech[d as usize] {
                    NO_LOG => FieldElement::ZERO,
                    z => FieldElement(t.exp[(la + z) as usize]),
                }
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if a.0 == 0 {
            return a;
        }
        match &self.ext {
            None => FieldElement(self.order - a.0),
            // -1 = g^((q-1)/2)
            Some(t) => FieldElement(t.exp[(t.log[a.0 as usize] + (self.order - 1) / 2) as usize]),
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.ext {
            None => FieldElement(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + self.order - b.0 }),
            Some(_) => self.add(a, self.neg(b)),
        }
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.ext {
            None => FieldElement(((a.0 as u64 * b.0 as u64) % self.order as u64) as u32),
            Some(t) => {
                if a.0 == 0 || b.0 == 0 {
                    FieldElement::ZERO
                } else {
                    FieldElement(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize])
                }
            }
        }
    }

    #[inline]
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.0 == 0 {
            Err(FieldError::DivisionByZero)
        } else {
            Ok(FieldElement(self.inverse[a.0 as usize]))
        }
    }

    #[inline]
    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Binary operation by name; `Neg` ignores `b`.
    pub fn arith(&self, op: ArithOp, a: FieldElement, b: FieldElement) -> FieldElement {
        match op {
            ArithOp::Add => self.add(a, b),
            ArithOp::Sub => self.sub(a, b),
            ArithOp::Mul => self.mul(a, b),
            ArithOp::Neg => self.neg(a),
        }
    }

    fn build_inverse_table(&self) -> Vec<u32> {
        let q = self.order;
        let mut inverse = vec![0u32; q as usize];
        match &self.ext {
            None => {
                // Units of Z/p in O(p): inv(i) = -(p / i) * inv(p mod i).
                if q > 1 {
                    inverse[1] = 1;
                }
                for i in 2..q as u64 {
                    let p = q as u64;
                    inverse[i as usize] =
                        ((p - p / i) * inverse[(p % i) as usize] as u64 % p) as u32;
                }
            }
            Some(t) => {
                let m = q - 1;
                for a in 1..q {
                    let la = t.log[a as usize];
                    inverse[a as usize] = t.exp[((m - la) % m) as usize];
                }
            }
        }
        inverse
    }

    fn build_extension_tables(&self) -> ExtensionTables {
        let p = self.characteristic;
        let q = self.order;
        let m = q - 1;
        let to_digits = |mut x: u32| -> Vec<u32> {
            (0..self.degree)
                .map(|_| {
                    let d = x % p;
                    x /= p;
                    d
                })
                .collect()
        };
        let to_index = |d: &[u32]| d.iter().rev().fold(0u32, |acc, &c| acc * p + c);

        // Powers of a candidate generator; the generator is primitive iff
        // the sequence first returns to 1 after exactly q-1 steps.
        let powers_of = |g: u32| -> Option<Vec<u32>> {
            let gd = to_digits(g);
            let mut cur = vec![0u32; self.degree as usize];
            cur[0] = 1;
            let mut out = Vec::with_capacity(m as usize);
            for k in 0..m {
                let idx = to_index(&cur);
                if k > 0 && idx == 1 {
                    return None;
                }
                out.push(idx);
                cur = poly::mul_mod(&cur, &gd, &self.modulus, p);
            }
            (to_index(&cur) == 1).then_some(out)
        };
        // t itself is primitive for every built-in modulus.
        let (_, powers) = core::iter::once(p)
            .chain(2..q)
            .find_map(|g| powers_of(g).map(|pw| (g, pw)))
            .expect("the multiplicative group of a finite field is cyclic");

        let mut exp = Vec::with_capacity(2 * m as usize);
        exp.extend_from_slice(&powers);
        exp.extend_from_slice(&powers);
        let mut log = vec![0u32; q as usize];
        for (k, &v) in powers.iter().enumerate() {
            log[v as usize] = k as u32;
        }
        let zech = powers
            .iter()
            .map(|&v| {
                let mut d = to_digits(v);
                d[0] = (d[0] + 1) % p;
                match to_index(&d) {
                    0 => NO_LOG,
                    s => log[s as usize],
                }
            })
            .collect();
        ExtensionTables { exp, log, zech }
    }
}

/// Dense polynomials over GF(p), constant term first.
pub(crate) mod poly {
    use alloc::vec;
    use alloc::vec::Vec;

    /// `a * b mod modulus`, with `a`, `b` of length `deg(modulus)`.
    pub fn mul_mod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
        let n = modulus.len() - 1;
        let mut prod = vec![0u64; 2 * n];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        let mut prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
        reduce(&mut prod, modulus, p);
        prod.truncate(n);
        prod
    }

    /// Reduces `r` in place modulo the monic polynomial `modulus`.
    fn reduce(r: &mut [u32], modulus: &[u32], p: u32) {
        let n = modulus.len() - 1;
        for top in (n..r.len()).rev() {
            let c = r[top];
            if c == 0 {
                continue;
            }
            for (k, &mk) in modulus.iter().enumerate() {
                let at = top - n + k;
                r[at] = ((r[at] as u64 + (p - c) as u64 * mk as u64) % p as u64) as u32;
            }
        }
    }

    /// Trial division by every monic polynomial of degree 1..=n/2.
    pub fn is_irreducible(modulus: &[u32], p: u32) -> bool {
        let n = modulus.len() - 1;
        for d in 1..=n / 2 {
            let count = (p as u64).pow(d as u32);
            for code in 0..count {
                let mut divisor = Vec::with_capacity(d + 1);
                let mut rest = code;
                for _ in 0..d {
                    divisor.push((rest % p as u64) as u32);
                    rest /= p as u64;
                }
                divisor.push(1);
                let mut r = modulus.to_vec();
                reduce(&mut r, &divisor, p);
                if r[..d].iter().all(|&c| c == 0) {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: u32) -> FieldElement {
        FieldElement(i)
    }

    #[test]
    fn prime_field_construction() {
        let f = FieldSpec::new(3, 1, None).unwrap();
        assert_eq!(f.order(), 3);
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(FieldSpec::new(2, 1, None), Err(FieldError::EvenCharacteristic));
        assert_eq!(FieldSpec::new(9, 1, None), Err(FieldError::NonPrimeCharacteristic(9)));
        assert_eq!(FieldSpec::new(3, 0, None), Err(FieldError::ZeroDegree));
    }

    #[test]
    fn explicit_modulus_t2_plus_1() {
        // t^2 + 1 has no root in GF(3): 0+1 = 1, 1+1 = 2, 4+1 = 2.
        let f = FieldSpec::new(3, 2, Some(&[1, 0, 1])).unwrap();
        assert_eq!(f.order(), 9);
        // t * t = -1 = 2
        assert_eq!(f.mul(e(3), e(3)), e(2));
    }

    #[test]
    fn modulus_validation() {
        // t^2 + 2 = (t + 1)(t + 2) over GF(3)
        assert_eq!(FieldSpec::new(3, 2, Some(&[2, 0, 1])), Err(FieldError::ReducibleModulus(3)));
        assert!(matches!(
            FieldSpec::new(3, 2, Some(&[1, 0, 2])),
            Err(FieldError::MalformedModulus(_))
        ));
        assert!(matches!(
            FieldSpec::new(3, 2, Some(&[1, 1])),
            Err(FieldError::MalformedModulus(_))
        ));
        assert_eq!(
            FieldSpec::new(3, 7, None),
            Err(FieldError::NoBuiltinModulus { p: 3, n: 7 })
        );
        assert_eq!(FieldSpec::new(3, 11, None), Err(FieldError::OrderTooLarge { p: 3, n: 11 }));
    }

    #[test]
    fn small_examples() {
        let f3 = FieldSpec::prime(3).unwrap();
        assert_eq!(f3.add(e(1), e(2)), e(0));
        let f7 = FieldSpec::prime(7).unwrap();
        assert_eq!(f7.neg(e(3)), e(4));
        assert_eq!(f7.inv(e(3)), Ok(e(5)));
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(f5.inv(e(0)), Err(FieldError::DivisionByZero));
        for q in [3, 9, 25, 27, 49] {
            let f = FieldSpec::of_order(q).unwrap();
            assert_eq!(f.inv(FieldElement::ONE), Ok(FieldElement::ONE));
        }
    }

    #[test]
    fn inverse_by_scanning_the_row() {
        let f7 = FieldSpec::prime(7).unwrap();
        let row: Vec<_> = (0..7).map(|b| f7.mul(e(3), e(b)).index()).collect();
        let scanned = row.iter().position(|&v| v == 1).unwrap() as u32;
        assert_eq!(f7.inv(e(3)).unwrap(), e(scanned));
    }

    #[test]
    fn digits_round_trip() {
        let f = FieldSpec::of_order(27).unwrap();
        for a in f.elements() {
            assert_eq!(f.from_digits(&f.digits(a)).unwrap(), a);
        }
        assert_eq!(f.digits(e(5)), vec![2, 1, 0]);
    }

    #[test]
    fn builtin_moduli_are_irreducible_and_primitive() {
        for &(p, n, m) in BUILTIN_MODULI {
            assert!(poly::is_irreducible(m, p), "GF({p}^{n})");
            let f = FieldSpec::new(p, n, None).unwrap();
            // t has index p; it must generate the multiplicative group.
            let t = e(p);
            let q = f.order() as u64;
            let mut k = 1;
            let mut cur = t;
            while cur != FieldElement::ONE {
                cur = f.mul(cur, t);
                k += 1;
            }
            assert_eq!(k, q - 1, "GF({p}^{n}) modulus not primitive");
        }
    }

    #[test]
    fn prime_fields_agree_with_integers() {
        for p in [3u32, 5, 7, 11, 13] {
            let f = FieldSpec::prime(p).unwrap();
            for a in 0..p {
                for b in 0..p {
                    assert_eq!(f.add(e(a), e(b)).index(), (a + b) % p);
                    assert_eq!(f.sub(e(a), e(b)).index(), (a + p - b) % p);
                    assert_eq!(f.mul(e(a), e(b)).index(), (a * b) % p);
                }
                assert_eq!(f.neg(e(a)).index(), (p - a) % p);
            }
        }
    }

    #[test]
    fn extension_mul_matches_polynomial_product() {
        let f = FieldSpec::of_order(25).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                let want = poly::mul_mod(&f.digits(a), &f.digits(b), f.modulus(), 5);
                assert_eq!(f.digits(f.mul(a, b)), want);
                let sum: Vec<u32> =
                    f.digits(a).iter().zip(f.digits(b)).map(|(x, y)| (x + y) % 5).collect();
                assert_eq!(f.digits(f.add(a, b)), sum);
            }
        }
    }

    #[test]
    fn from_int_reduces() {
        let f = FieldSpec::of_order(9).unwrap();
        assert_eq!(f.from_int(-1), e(2));
        assert_eq!(f.from_int(4), e(1));
    }

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(997), Some((997, 1)));
        assert_eq!(prime_power(15), None);
        assert_eq!(prime_power(1), None);
    }
}
