//! Dense univariate polynomials over Q(ζ_N) and root peeling over the
//! allowed root set {0} ∪ {ζ_N^r}.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::cyclotomic::{CycField, CycNum};
use crate::error::{Error, Result};

/// A member of {0} ∪ Γ_N. Ordered origin first, then roots by residue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Point {
    Origin,
    Root(u32),
}

impl Point {
    /// All points for order N in peel order: origin, then r = 0..N-1.
    pub fn all(n: u32) -> impl Iterator<Item = Point> {
        std::iter::once(Point::Origin).chain((0..n).map(Point::Root))
    }

    pub fn value(self, field: &Arc<CycField>) -> CycNum {
        match self {
            Point::Origin => CycNum::zero(field),
            Point::Root(r) => CycNum::root_of_unity(field, r as i64),
        }
    }

    /// Bit position used for support masks.
    pub fn index(self) -> usize {
        match self {
            Point::Origin => 0,
            Point::Root(r) => r as usize + 1,
        }
    }

    pub fn from_index(i: usize) -> Point {
        match i {
            0 => Point::Origin,
            _ => Point::Root(i as u32 - 1),
        }
    }

    pub fn label(self) -> String {
        self.to_string()
    }

    pub fn parse(s: &str) -> Result<Point> {
        if s == "origin" {
            return Ok(Point::Origin);
        }
        s.strip_prefix("root:")
            .and_then(|r| r.parse().ok())
            .map(Point::Root)
            .ok_or_else(|| Error::InvalidPoint(s.to_string()))
    }

    pub fn check(self, n: u32) -> Result<()> {
        match self {
            Point::Root(r) if r >= n => Err(Error::InvalidPoint(self.label())),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Origin => f.write_str("origin"),
            Point::Root(r) => write!(f, "root:{r}"),
        }
    }
}

/// Dense polynomial, lowest degree first; the zero polynomial has no coefficients.
#[derive(Clone)]
pub struct Poly {
    field: Arc<CycField>,
    coeffs: Vec<CycNum>,
}

impl Poly {
    pub fn zero(field: &Arc<CycField>) -> Poly {
        Poly {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn constant(c: CycNum) -> Poly {
        let field = c.field().clone();
        Poly::from_coeffs(&field, vec![c])
    }

    pub fn one(field: &Arc<CycField>) -> Poly {
        Poly::constant(CycNum::one(field))
    }

    /// The monic linear factor `x - mu`.
    pub fn linear(mu: &CycNum) -> Poly {
        let field = mu.field().clone();
        Poly::from_coeffs(&field, vec![-mu, CycNum::one(&field)])
    }

    pub fn from_coeffs(field: &Arc<CycField>, mut coeffs: Vec<CycNum>) -> Poly {
        while coeffs.last().is_some_and(CycNum::is_zero) {
            coeffs.pop();
        }
        debug_assert!(coeffs.iter().all(|c| c.order() == field.order()));
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    /// Integer-coefficient constructor, lowest degree first.
    pub fn from_ints(field: &Arc<CycField>, coeffs: &[i64]) -> Poly {
        let c = coeffs.iter().map(|&k| CycNum::from_int(field, k)).collect();
        Poly::from_coeffs(field, c)
    }

    pub fn field(&self) -> &Arc<CycField> {
        &self.field
    }

    pub fn order(&self) -> u32 {
        self.field.order()
    }

    pub fn coeffs(&self) -> &[CycNum] {
        &self.coeffs
    }

    /// Coefficient of x^k, zero past the degree.
    pub fn coeff(&self, k: usize) -> CycNum {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| CycNum::zero(&self.field))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&CycNum> {
        self.coeffs.last()
    }

    fn check_order(&self, other: &Poly) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.check_order(other)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let c = (0..len).map(|k| &self.coeff(k) + &other.coeff(k)).collect();
        Ok(Poly::from_coeffs(&self.field, c))
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.check_order(other)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let c = (0..len).map(|k| &self.coeff(k) - &other.coeff(k)).collect();
        Ok(Poly::from_coeffs(&self.field, c))
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.check_order(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(&self.field));
        }
        let mut c = vec![CycNum::zero(&self.field); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        Ok(Poly::from_coeffs(&self.field, c))
    }

    pub fn scale(&self, s: &CycNum) -> Result<Poly> {
        if s.order() != self.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: s.order(),
            });
        }
        let c = self.coeffs.iter().map(|a| a * s).collect();
        Ok(Poly::from_coeffs(&self.field, c))
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &CycNum) -> Result<CycNum> {
        if x.order() != self.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: x.order(),
            });
        }
        let mut acc = CycNum::zero(&self.field);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        Ok(acc)
    }

    /// Synthetic division by `x - mu`: returns `(quotient, remainder)`.
    pub fn div_linear(&self, mu: &CycNum) -> (Poly, CycNum) {
        if self.coeffs.is_empty() {
            return (self.clone(), CycNum::zero(&self.field));
        }
        let mut quot = vec![CycNum::zero(&self.field); self.coeffs.len() - 1];
        let mut carry = CycNum::zero(&self.field);
        for k in (0..self.coeffs.len()).rev() {
            let v = &(&carry * mu) + &self.coeffs[k];
            if k == 0 {
                return (Poly::from_coeffs(&self.field, quot), v);
            }
            quot[k - 1] = v.clone();
            carry = v;
        }
        unreachable!()
    }
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.order() == other.order() && self.coeffs == other.coeffs
    }
}

impl Eq for Poly {}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("({c})x^{k}"))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Positive exponents attached to distinct points of {0} ∪ Γ_N.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootSpec {
    n: u32,
    exps: BTreeMap<Point, u32>,
}

impl RootSpec {
    pub fn empty(n: u32) -> RootSpec {
        RootSpec {
            n,
            exps: BTreeMap::new(),
        }
    }

    pub fn new(n: u32, exps: impl IntoIterator<Item = (Point, u32)>) -> Result<RootSpec> {
        let mut map = BTreeMap::new();
        for (p, e) in exps {
            p.check(n)?;
            if e == 0 || map.insert(p, e).is_some() {
                return Err(Error::InvalidPoint(format!("{p}^{e}")));
            }
        }
        Ok(RootSpec { n, exps: map })
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    pub fn exps(&self) -> &BTreeMap<Point, u32> {
        &self.exps
    }

    pub fn get(&self, p: Point) -> u32 {
        self.exps.get(&p).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.exps.values().sum()
    }

    /// Bitmask of the support, bit [`Point::index`] per key.
    pub fn mask(&self) -> u64 {
        self.exps.keys().fold(0, |m, p| m | (1 << p.index()))
    }

    /// Union of two key-disjoint specs.
    pub fn merge(&self, other: &RootSpec) -> Result<RootSpec> {
        RootSpec::new(
            self.n,
            self.exps.iter().chain(&other.exps).map(|(&p, &e)| (p, e)),
        )
    }
}

/// ∏ (x - μ)^e over the spec; the empty spec gives 1.
pub fn from_factored(field: &Arc<CycField>, spec: &RootSpec) -> Poly {
    assert_eq!(field.order(), spec.n, "order mismatch");
    let mut p = Poly::one(field);
    for (&pt, &e) in &spec.exps {
        let lin = Poly::linear(&pt.value(field));
        for _ in 0..e {
            p = p.mul(&lin).expect("same order");
        }
    }
    p
}

/// Writes `p = c · ∏ (x - μ)^{e_μ}` with every μ in {0} ∪ Γ_N, or fails
/// with [`Error::NotUnitalRoots`] when some root lies elsewhere.
///
/// Points are peeled in the fixed order origin, ζ^0, ζ^1, …
pub fn peel_roots(p: &Poly) -> Result<(RootSpec, CycNum)> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let field = p.field().clone();
    let mut rest = p.clone();
    let mut exps = BTreeMap::new();
    for pt in Point::all(field.order()) {
        if rest.degree() == Some(0) {
            break;
        }
        let mu = pt.value(&field);
        let mut e = 0;
        loop {
            let (q, r) = rest.div_linear(&mu);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            exps.insert(pt, e);
        }
    }
    if rest.degree() != Some(0) {
        return Err(Error::NotUnitalRoots);
    }
    let c = rest.coeffs[0].clone();
    Ok((
        RootSpec {
            n: field.order(),
            exps,
        },
        c,
    ))
}
