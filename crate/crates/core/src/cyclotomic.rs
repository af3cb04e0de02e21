//! Exact arithmetic in the cyclotomic field Q(ζ_N).
//!
//! An element is stored in the power basis `1, ζ, …, ζ^{φ(N)-1}` reduced
//! modulo the N-th cyclotomic polynomial Φ_N. The representation is
//! canonical: two elements of the same field are equal iff their coefficient
//! vectors are equal. Every coefficient is an exact rational.
//!
//! A [`CycField`] carries the per-order tables (Φ_N and the reduced powers
//! `ζ^e` for `0 <= e < N`). Elements hold an `Arc` to their field so that
//! arithmetic never needs to rebuild those tables.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational number, always stored reduced with positive denominator.
pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn totient(n: u32) -> u32 {
    (1..=n).filter(|&k| k.gcd(&n) == 1).count() as u32
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Quotient of `num / den` for integer polynomials (lowest degree first)
/// where `den` is monic and divides `num` exactly.
fn int_exact_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    debug_assert!(den[dd].is_one());
    let qlen = rem.len() - dd;
    let mut quot = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    quot
}

/// The N-th cyclotomic polynomial Φ_N, lowest degree first.
///
/// Computed as `(x^N - 1) / ∏_{d | N, d < N} Φ_d`.
pub fn cyclo_poly(n: u32) -> Vec<BigInt> {
    assert!(n >= 1, "cyclotomic polynomial needs N >= 1");
    let mut cache: Vec<(u32, Vec<BigInt>)> = Vec::new();
    for d in divisors(n) {
        let mut p = vec![BigInt::zero(); d as usize + 1];
        p[0] = -BigInt::one();
        p[d as usize] = BigInt::one();
        for (e, phi_e) in &cache {
            if d % e == 0 {
                p = int_exact_div(&p, phi_e);
            }
        }
        cache.push((d, p));
    }
    cache.pop().expect("n is its own divisor").1
}

/// Per-order context for Q(ζ_N).
pub struct CycField {
    n: u32,
    phi: usize,
    modulus: Vec<BigInt>,
    /// `powers[e]` is ζ^e reduced into the power basis.
    powers: Vec<Vec<Rat>>,
}

impl fmt::Debug for CycField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.n)
    }
}

impl CycField {
    pub fn new(n: u32) -> Arc<Self> {
        let modulus = cyclo_poly(n);
        let phi = modulus.len() - 1;
        let mut powers = Vec::with_capacity(n as usize);
        let mut cur: Vec<Rat> = vec![Rat::zero(); phi];
        cur[0] = Rat::one();
        for _ in 0..n {
            powers.push(cur.clone());
            // multiply by ζ, then fold ζ^φ = -Σ Φ_k ζ^k
            let top = cur[phi - 1].clone();
            for k in (1..phi).rev() {
                cur[k] = cur[k - 1].clone();
            }
            cur[0] = Rat::zero();
            if !top.is_zero() {
                for (k, m) in modulus[..phi].iter().enumerate() {
                    cur[k] -= &top * Rat::from_integer(m.clone());
                }
            }
        }
        Arc::new(CycField {
            n,
            phi,
            modulus,
            powers,
        })
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    /// Euler totient φ(N), the field degree.
    pub fn degree(&self) -> usize {
        self.phi
    }

    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }

    fn power(&self, e: i64) -> &[Rat] {
        &self.powers[e.rem_euclid(self.n as i64) as usize]
    }

    /// Residues `k` in `1..=N` with gcd(k, N) = 1 (just `[1]` for N = 1).
    pub fn units(&self) -> Vec<i64> {
        (1..=self.n as i64)
            .filter(|k| k.gcd(&(self.n as i64)) == 1)
            .collect()
    }
}

/// An element of Q(ζ_N).
#[derive(Clone)]
pub struct CycNum {
    field: Arc<CycField>,
    coeffs: Vec<Rat>,
}

impl CycNum {
    pub fn zero(field: &Arc<CycField>) -> Self {
        CycNum {
            field: field.clone(),
            coeffs: vec![Rat::zero(); field.phi],
        }
    }

    pub fn one(field: &Arc<CycField>) -> Self {
        Self::from_rat(field, Rat::one())
    }

    pub fn from_rat(field: &Arc<CycField>, r: Rat) -> Self {
        let mut z = Self::zero(field);
        z.coeffs[0] = r;
        z
    }

    pub fn from_int(field: &Arc<CycField>, k: i64) -> Self {
        Self::from_rat(field, Rat::from_integer(k.into()))
    }

    pub fn from_coeffs(field: &Arc<CycField>, coeffs: Vec<Rat>) -> Result<Self> {
        if coeffs.len() != field.phi {
            return Err(Error::BadLength {
                n: field.n,
                expected: field.phi,
                got: coeffs.len(),
            });
        }
        Ok(CycNum {
            field: field.clone(),
            coeffs,
        })
    }

    /// ζ_N^r for any integer r.
    pub fn root_of_unity(field: &Arc<CycField>, r: i64) -> Self {
        CycNum {
            field: field.clone(),
            coeffs: field.power(r).to_vec(),
        }
    }

    /// Σ c_e ζ^e for arbitrary integer exponents, reduced.
    fn from_power_terms<'a>(
        field: &Arc<CycField>,
        terms: impl IntoIterator<Item = (i64, &'a Rat)>,
    ) -> Self {
        let mut out = vec![Rat::zero(); field.phi];
        for (e, c) in terms {
            if c.is_zero() {
                continue;
            }
            for (o, p) in out.iter_mut().zip(field.power(e)) {
                if !p.is_zero() {
                    *o += c * p;
                }
            }
        }
        CycNum {
            field: field.clone(),
            coeffs: out,
        }
    }

    pub fn field(&self) -> &Arc<CycField> {
        &self.field
    }

    pub fn order(&self) -> u32 {
        self.field.n
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value if the element lies in Q.
    pub fn as_rational(&self) -> Option<&Rat> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| &self.coeffs[0])
    }

    fn check_order(&self, other: &CycNum) -> Result<()> {
        if self.field.n != other.field.n {
            return Err(Error::OrderMismatch {
                left: self.field.n,
                right: other.field.n,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &CycNum) -> Result<CycNum> {
        self.check_order(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &CycNum) -> Result<CycNum> {
        self.check_order(other)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &CycNum) -> Result<CycNum> {
        self.check_order(other)?;
        Ok(self * other)
    }

    pub fn scale(&self, r: &Rat) -> CycNum {
        CycNum {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against Φ_N.
    pub fn inv(&self) -> Result<CycNum> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(CycNum::from_rat(&self.field, r.recip()));
        }
        let modulus: Vec<Rat> = self
            .field
            .modulus
            .iter()
            .map(|m| Rat::from_integer(m.clone()))
            .collect();
        let mut r0 = modulus.clone();
        let mut r1 = qpoly::trim(self.coeffs.clone());
        let mut s0: Vec<Rat> = Vec::new();
        let mut s1: Vec<Rat> = vec![Rat::one()];
        while !r1.is_empty() {
            let (q, r) = qpoly::divrem(&r0, &r1);
            let s2 = qpoly::sub(&s0, &qpoly::mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // Φ_N is irreducible, so the gcd r0 is a nonzero constant.
        debug_assert_eq!(r0.len(), 1);
        let lead = r0[0].recip();
        let (_, s) = qpoly::divrem(&s0, &modulus);
        let mut coeffs = vec![Rat::zero(); self.field.phi];
        for (c, v) in coeffs.iter_mut().zip(s) {
            *c = v * &lead;
        }
        Ok(CycNum {
            field: self.field.clone(),
            coeffs,
        })
    }

    pub fn div(&self, other: &CycNum) -> Result<CycNum> {
        self.check_order(other)?;
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<CycNum> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = CycNum::one(&self.field);
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// The automorphism σ_k : ζ ↦ ζ^k.
    pub fn galois(&self, k: i64) -> Result<CycNum> {
        let n = self.field.n as i64;
        if k.rem_euclid(n).gcd(&n) != 1 {
            return Err(Error::NotCoprime { k, n: self.field.n });
        }
        Ok(CycNum::from_power_terms(
            &self.field,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(r, c)| (k * r as i64, c)),
        ))
    }

    /// Image under ζ_M ↦ ζ_N^{N/M} in a field whose order is a multiple of this one.
    pub fn embed(&self, target: &Arc<CycField>) -> Result<CycNum> {
        let (m, n) = (self.field.n, target.n);
        if n % m != 0 {
            return Err(Error::NotDivisible { m, n });
        }
        let step = (n / m) as i64;
        Ok(CycNum::from_power_terms(
            target,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(r, c)| (step * r as i64, c)),
        ))
    }

    /// Absolute norm ∏_{gcd(k,N)=1} σ_k(a).
    pub fn norm(&self) -> Rat {
        let mut acc = CycNum::one(&self.field);
        for k in self.field.units() {
            acc = &acc * &self.galois(k).expect("unit residue");
        }
        acc.as_rational()
            .expect("norm of a cyclotomic integer is rational")
            .clone()
    }

    /// Norm-based p-adic valuation `v_p(Norm(a)) / φ(N)`.
    ///
    /// For Q(i) and p = 2 this is the exponent v in `|a| = 2^v · (2-unit)`.
    pub fn ord_p(&self, p: u64) -> Valuation {
        debug_assert!(
            p >= 2
                && (2..p)
                    .take_while(|d| d * d <= p)
                    .all(|d| !p.is_multiple_of(d))
        );
        if self.is_zero() {
            return Valuation::Infinite;
        }
        let norm = self.norm();
        let p = BigInt::from(p);
        let v = int_valuation(norm.numer(), &p) - int_valuation(norm.denom(), &p);
        Valuation::Finite(Rat::new(v.into(), (self.field.phi as i64).into()))
    }
}

impl CycNum {
    /// Parses the [`fmt::Display`] form, e.g. `1/2-3*z^2`.
    pub fn parse(field: &Arc<CycField>, s: &str) -> Result<CycNum> {
        let bad = || Error::Parse(s.to_string());
        let s = s.trim();
        if s.is_empty() {
            return Err(bad());
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, ch) in s.char_indices() {
            if (ch == '+' || ch == '-') && i > 0 {
                terms.push(&s[start..i]);
                start = i;
            }
        }
        terms.push(&s[start..]);
        let mut coeffs: Vec<(i64, Rat)> = Vec::new();
        for t in terms {
            let (neg, body) = match t.as_bytes()[0] {
                b'-' => (true, &t[1..]),
                b'+' => (false, &t[1..]),
                _ => (false, t),
            };
            let (coef, power) = match body.find('z') {
                None => (body, 0),
                Some(pos) => {
                    let power = match &body[pos + 1..] {
                        "" => 1,
                        p => p
                            .strip_prefix('^')
                            .and_then(|p| p.parse().ok())
                            .ok_or_else(bad)?,
                    };
                    let coef = &body[..pos];
                    (coef.strip_suffix('*').unwrap_or(coef), power)
                }
            };
            let mut c: Rat = if coef.is_empty() && power > 0 {
                Rat::one()
            } else {
                coef.parse().map_err(|_| bad())?
            };
            if neg {
                c = -c;
            }
            coeffs.push((power, c));
        }
        Ok(CycNum::from_power_terms(
            field,
            coeffs.iter().map(|(e, c)| (*e, c)),
        ))
    }
}

fn int_valuation(x: &BigInt, p: &BigInt) -> i64 {
    let mut x = x.abs();
    let mut v = 0;
    while !x.is_zero() && (&x % p).is_zero() {
        x /= p;
        v += 1;
    }
    v
}

/// Result of [`CycNum::ord_p`]; `Infinite` for the zero element.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(Rat),
    Infinite,
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl<'a> Add<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn add(self, rhs: &CycNum) -> CycNum {
        assert_eq!(self.field.n, rhs.field.n, "order mismatch");
        CycNum {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<'a> Sub<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &CycNum) -> CycNum {
        assert_eq!(self.field.n, rhs.field.n, "order mismatch");
        CycNum {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl<'a> Mul<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &CycNum) -> CycNum {
        assert_eq!(self.field.n, rhs.field.n, "order mismatch");
        let phi = self.field.phi;
        let mut prod = vec![Rat::zero(); 2 * phi - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        if prod.len() <= phi {
            return CycNum {
                field: self.field.clone(),
                coeffs: prod,
            };
        }
        let high = prod.split_off(phi);
        let mut out = CycNum {
            field: self.field.clone(),
            coeffs: prod,
        };
        for (k, c) in high.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, p) in out
                .coeffs
                .iter_mut()
                .zip(self.field.power((phi + k) as i64))
            {
                if !p.is_zero() {
                    *o += c * p;
                }
            }
        }
        out
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        self.field.n == other.field.n && self.coeffs == other.coeffs
    }
}

impl Eq for CycNum {}

impl Hash for CycNum {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.n.hash(state);
        self.coeffs.hash(state);
    }
}

impl PartialOrd for CycNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CycNum {
    fn cmp(&self, other: &Self) -> Ordering {
        self.field
            .n
            .cmp(&other.field.n)
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

/// Human rendering in powers of `z` = ζ_N, e.g. `1/2-z^2`.
impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (r, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if neg {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            first = false;
            match (r, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => {}
                (_, false) => write!(f, "{mag}*")?,
            }
            match r {
                0 => {}
                1 => f.write_str("z")?,
                _ => write!(f, "z^{r}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.field.n, self)
    }
}

#[derive(Serialize, Deserialize)]
struct CycNumRepr {
    n: u32,
    coeffs: Vec<[String; 2]>,
}

impl Serialize for CycNum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycNumRepr {
            n: self.field.n,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| [c.numer().to_string(), c.denom().to_string()])
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycNum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = CycNumRepr::deserialize(d)?;
        if repr.n == 0 {
            return Err(D::Error::custom("order must be positive"));
        }
        let field = CycField::new(repr.n);
        let mut coeffs = Vec::with_capacity(repr.coeffs.len());
        for [num, den] in &repr.coeffs {
            let num: BigInt = num.parse().map_err(D::Error::custom)?;
            let den: BigInt = den.parse().map_err(D::Error::custom)?;
            if !den.is_positive() {
                return Err(D::Error::custom("denominator must be positive"));
            }
            coeffs.push(Rat::new(num, den));
        }
        CycNum::from_coeffs(&field, coeffs).map_err(D::Error::custom)
    }
}

/// Dense polynomials over Q, lowest degree first, no trailing zeros.
mod qpoly {
    use super::Rat;
    use num_traits::Zero;

    pub fn trim(mut p: Vec<Rat>) -> Vec<Rat> {
        while p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
        p
    }

    pub fn sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        let len = a.len().max(b.len());
        let out = (0..len)
            .map(|i| {
                let x = a.get(i).cloned().unwrap_or_else(Rat::zero);
                match b.get(i) {
                    Some(y) => x - y,
                    None => x,
                }
            })
            .collect();
        trim(out)
    }

    pub fn mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        trim(out)
    }

    pub fn divrem(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
        let b = trim(b.to_vec());
        assert!(!b.is_empty(), "polynomial division by zero");
        let mut rem = trim(a.to_vec());
        if rem.len() < b.len() {
            return (Vec::new(), rem);
        }
        let lead = b.last().unwrap().recip();
        let mut quot = vec![Rat::zero(); rem.len() - b.len() + 1];
        while rem.len() >= b.len() {
            let shift = rem.len() - b.len();
            let c = rem.last().unwrap() * &lead;
            for (j, bj) in b.iter().enumerate() {
                rem[shift + j] -= &c * bj;
            }
            quot[shift] = c;
            rem.pop();
            rem = trim(rem);
        }
        (trim(quot), rem)
    }
}
