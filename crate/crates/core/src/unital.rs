//! N-unital rational functions.
//!
//! A [`UnitalFn`] is `D · ∏_{μ} (x - μ)^{e_μ}` where μ runs over
//! {0} ∪ Γ_N, every factor is monic, and the exponents are nonzero
//! integers. Membership in U_N is decided by [`UnitalFn::complement`]:
//! `f` is N-unital iff the numerator of `1 - f` also peels over {0} ∪ Γ_N.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::de::Error as _;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cyclotomic::{CycField, CycNum};
use crate::error::{Error, Result};
use crate::poly::{from_factored, peel_roots, Point, Poly, RootSpec};

/// A point of P¹(Q(ζ_N)).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum P1Value {
    Finite(CycNum),
    Infinity,
}

impl fmt::Display for P1Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            P1Value::Finite(c) => write!(f, "{c}"),
            P1Value::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for P1Value {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            P1Value::Finite(c) => c.serialize(s),
            P1Value::Infinity => s.serialize_str("inf"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UnitalFn {
    constant: CycNum,
    exps: BTreeMap<Point, i32>,
}

impl UnitalFn {
    /// Validates the canonical-form invariants: nonzero constant, nonzero
    /// exponents on in-range points, and at least one exponent.
    pub fn new(constant: CycNum, exps: impl IntoIterator<Item = (Point, i32)>) -> Result<Self> {
        if constant.is_zero() {
            return Err(Error::ZeroConstant);
        }
        let n = constant.order();
        let mut map = BTreeMap::new();
        for (p, e) in exps {
            p.check(n)?;
            if e != 0 && map.insert(p, e).is_some() {
                return Err(Error::InvalidPoint(p.label()));
            }
        }
        if map.is_empty() {
            return Err(Error::ConstantFunction);
        }
        Ok(UnitalFn {
            constant,
            exps: map,
        })
    }

    /// f = x over Q(ζ_N).
    pub fn identity(field: &Arc<CycField>) -> UnitalFn {
        UnitalFn {
            constant: CycNum::one(field),
            exps: BTreeMap::from([(Point::Origin, 1)]),
        }
    }

    pub fn order(&self) -> u32 {
        self.constant.order()
    }

    pub fn field(&self) -> &Arc<CycField> {
        self.constant.field()
    }

    pub fn constant(&self) -> &CycNum {
        &self.constant
    }

    pub fn exps(&self) -> &BTreeMap<Point, i32> {
        &self.exps
    }

    pub fn exponent(&self, p: Point) -> i32 {
        self.exps.get(&p).copied().unwrap_or(0)
    }

    fn part(&self, sign: i32) -> RootSpec {
        RootSpec::new(
            self.order(),
            self.exps
                .iter()
                .filter(|(_, &e)| e.signum() == sign)
                .map(|(&p, &e)| (p, e.unsigned_abs())),
        )
        .expect("stored exponents are valid")
    }

    /// Zeros of f with multiplicity.
    pub fn zeros(&self) -> RootSpec {
        self.part(1)
    }

    /// Poles of f with multiplicity.
    pub fn poles(&self) -> RootSpec {
        self.part(-1)
    }

    pub fn numerator_degree(&self) -> u32 {
        self.zeros().degree()
    }

    pub fn denominator_degree(&self) -> u32 {
        self.poles().degree()
    }

    /// `(constant · zeros, poles)` as coprime polynomials.
    pub fn as_fraction(&self) -> (Poly, Poly) {
        let field = self.field();
        let num = from_factored(field, &self.zeros())
            .scale(&self.constant)
            .expect("same order");
        (num, from_factored(field, &self.poles()))
    }

    /// `1 - f`, or [`Error::NotUnital`] when its numerator has a root
    /// outside {0} ∪ Γ_N.
    pub fn complement(&self) -> Result<UnitalFn> {
        let (num, den) = self.as_fraction();
        let diff = den.sub(&num)?;
        if diff.is_zero() {
            return Err(Error::DegenerateConstant);
        }
        let (zeros, c) = match peel_roots(&diff) {
            Ok(v) => v,
            Err(Error::NotUnitalRoots) => return Err(Error::NotUnital),
            Err(e) => return Err(e),
        };
        let exps = zeros.exps().iter().map(|(&p, &e)| (p, e as i32)).chain(
            self.exps
                .iter()
                .filter(|(_, &e)| e < 0)
                .map(|(&p, &e)| (p, e)),
        );
        UnitalFn::new(c, exps)
    }

    /// `1 / f`.
    pub fn reciprocal(&self) -> UnitalFn {
        UnitalFn {
            constant: self.constant.inv().expect("constant is nonzero"),
            exps: self.exps.iter().map(|(&p, &e)| (p, -e)).collect(),
        }
    }

    /// The six images `f, 1-f, 1/f, f/(f-1), (f-1)/f, 1/(1-f)`, in that order.
    pub fn sextet(&self) -> Result<[UnitalFn; 6]> {
        let c = self.complement()?;
        let r = self.reciprocal();
        let cr = r.complement()?;
        let rcr = cr.reciprocal();
        let rc = c.reciprocal();
        Ok([self.clone(), c, r, rcr, cr, rc])
    }

    /// `f(ζ^r x)`, renormalized so every factor stays monic.
    pub fn scale_sub(&self, r: i64) -> UnitalFn {
        let n = self.order() as i64;
        let total: i64 = self.exps.values().map(|&e| e as i64).sum();
        let unit = CycNum::root_of_unity(self.field(), r * total);
        let exps = self
            .exps
            .iter()
            .map(|(&p, &e)| match p {
                Point::Origin => (p, e),
                Point::Root(s) => (Point::Root((s as i64 - r).rem_euclid(n) as u32), e),
            })
            .collect();
        UnitalFn {
            constant: &self.constant * &unit,
            exps,
        }
    }

    /// Applies σ_k : ζ ↦ ζ^k to the coefficients of f.
    pub fn galois_map(&self, k: i64) -> Result<UnitalFn> {
        let n = self.order() as i64;
        let constant = self.constant.galois(k)?;
        let exps = self
            .exps
            .iter()
            .map(|(&p, &e)| match p {
                Point::Origin => (p, e),
                Point::Root(s) => (Point::Root((k * s as i64).rem_euclid(n) as u32), e),
            })
            .collect();
        Ok(UnitalFn { constant, exps })
    }

    /// The same function viewed over Q(ζ_M) for a multiple M of N.
    pub fn embed(&self, target: &Arc<CycField>) -> Result<UnitalFn> {
        let constant = self.constant.embed(target)?;
        let step = target.order() / self.order();
        let exps = self.exps.iter().map(|(&p, &e)| match p {
            Point::Origin => (p, e),
            Point::Root(s) => (Point::Root(s * step), e),
        });
        UnitalFn::new(constant, exps)
    }

    pub fn value_at_zero(&self) -> P1Value {
        match self.exponent(Point::Origin) {
            e if e > 0 => P1Value::Finite(CycNum::zero(self.field())),
            e if e < 0 => P1Value::Infinity,
            _ => {
                let field = self.field();
                let mut v = self.constant.clone();
                for (&p, &e) in &self.exps {
                    let Point::Root(s) = p else { continue };
                    // (0 - ζ^s)^e = (-1)^e ζ^{se}
                    let mut term = CycNum::root_of_unity(field, s as i64 * e as i64);
                    if e % 2 != 0 {
                        term = -&term;
                    }
                    v = &v * &term;
                }
                P1Value::Finite(v)
            }
        }
    }

    /// Injective, run-stable text key: order, all N+1 exponents in point
    /// order, then the constant's coefficients.
    pub fn canonical_key(&self) -> String {
        let n = self.order();
        let exps: Vec<String> = Point::all(n)
            .map(|p| format!("{:+}", self.exponent(p)))
            .collect();
        let coeffs: Vec<String> = self
            .constant
            .coeffs()
            .iter()
            .map(|c| c.to_string())
            .collect();
        format!("N{n}|{}|{}", exps.join(","), coeffs.join(","))
    }

    /// Parses the text form produced by [`fmt::Display`].
    pub fn parse_text(n: u32, s: &str) -> Result<UnitalFn> {
        let bad = || Error::Parse(s.to_string());
        let field = CycField::new(n);
        let rest = s.strip_prefix('(').ok_or_else(bad)?;
        let close = rest.find(')').ok_or_else(bad)?;
        let constant = CycNum::parse(&field, &rest[..close])?;
        let mut exps = Vec::new();
        let mut tail = &rest[close + 1..];
        while let Some(t) = tail.strip_prefix('*') {
            let (factor, after) = match t.strip_prefix("(x-") {
                Some(r) => {
                    let end = r.find(")^").ok_or_else(bad)?;
                    (Point::parse(&r[..end])?, &r[end + 2..])
                }
                None => (Point::Origin, t.strip_prefix("x^").ok_or_else(bad)?),
            };
            let end = after.find('*').unwrap_or(after.len());
            let e: i32 = after[..end].parse().map_err(|_| bad())?;
            exps.push((factor, e));
            tail = &after[end..];
        }
        if !tail.is_empty() {
            return Err(bad());
        }
        UnitalFn::new(constant, exps)
    }
}

/// A Möbius substitution `x ↦ (a·x + b) / (c·x + d)` over Q(ζ_N).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mobius {
    a: CycNum,
    b: CycNum,
    c: CycNum,
    d: CycNum,
}

impl Mobius {
    /// The unique map sending 0, ∞, 1 to `p`, `q`, `r` (distinct points of P¹).
    pub fn through(field: &Arc<CycField>, p: &P1Value, q: &P1Value, r: &P1Value) -> Mobius {
        use P1Value::{Finite, Infinity};
        let zero = CycNum::zero(field);
        let one = CycNum::one(field);
        let (a, b, c, d) = match (p, q, r) {
            (Finite(p), Finite(q), Finite(r)) => (q * &(r - p), p * &(q - r), r - p, q - r),
            (Finite(p), Infinity, Finite(r)) => (r - p, p.clone(), zero, one),
            (Infinity, Finite(q), Finite(r)) => (q.clone(), r - q, one, zero),
            (Finite(p), Finite(q), Infinity) => (q.clone(), -p, one.clone(), -&one),
            _ => panic!("images of 0, inf, 1 must be distinct"),
        };
        Mobius { a, b, c, d }
    }

    pub fn apply(&self, z: &P1Value) -> P1Value {
        let (num, den) = match z {
            P1Value::Finite(x) => (&(&self.a * x) + &self.b, &(&self.c * x) + &self.d),
            P1Value::Infinity => (self.a.clone(), self.c.clone()),
        };
        if den.is_zero() {
            P1Value::Infinity
        } else {
            P1Value::Finite(num.div(&den).expect("nonzero"))
        }
    }
}

fn p1_points(field: &Arc<CycField>) -> Vec<P1Value> {
    Point::all(field.order())
        .map(|p| P1Value::Finite(p.value(field)))
        .chain(std::iter::once(P1Value::Infinity))
        .collect()
}

/// Every Möbius map that permutes {0, ∞} ∪ Γ_N.
pub fn point_symmetries(field: &Arc<CycField>) -> Vec<Mobius> {
    let pts = p1_points(field);
    let mut out = Vec::new();
    for p in &pts {
        for q in &pts {
            for r in &pts {
                if p == q || q == r || p == r {
                    continue;
                }
                let m = Mobius::through(field, p, q, r);
                if pts.iter().all(|z| pts.contains(&m.apply(z))) {
                    out.push(m);
                }
            }
        }
    }
    out
}

impl UnitalFn {
    /// `f(M(x))` for a map `M` that permutes {0, ∞} ∪ Γ_N.
    pub fn compose_mobius(&self, m: &Mobius) -> Result<UnitalFn> {
        let field = self.field();
        let pts: Vec<(Point, CycNum)> = Point::all(self.order())
            .map(|p| (p, p.value(field)))
            .collect();
        let locate = |alpha: &CycNum, beta: &CycNum| -> Result<Option<Point>> {
            // root of alpha*x + beta, or None when the factor is constant
            if alpha.is_zero() {
                return Ok(None);
            }
            let root = -&beta.div(alpha)?;
            pts.iter()
                .find(|(_, v)| *v == root)
                .map(|(p, _)| Some(*p))
                .ok_or_else(|| Error::InvalidPoint(root.to_string()))
        };
        let mut constant = self.constant.clone();
        let mut exps: BTreeMap<Point, i32> = BTreeMap::new();
        let mut push = |alpha: &CycNum, beta: &CycNum, e: i32| -> Result<()> {
            match locate(alpha, beta)? {
                Some(p) => {
                    constant = &constant * &alpha.pow(e as i64)?;
                    *exps.entry(p).or_insert(0) += e;
                }
                None => constant = &constant * &beta.pow(e as i64)?,
            }
            Ok(())
        };
        let mut total = 0;
        for (&p, &e) in &self.exps {
            let mu = p.value(field);
            // (x - mu) ∘ M = ((a - mu c) x + (b - mu d)) / (c x + d)
            push(&(&m.a - &(&mu * &m.c)), &(&m.b - &(&mu * &m.d)), e)?;
            total += e;
        }
        push(&m.c, &m.d, -total)?;
        UnitalFn::new(constant, exps)
    }
}

/// Canonical text form, e.g. `(2)*x^1*(x-root:1)^-1`.
impl fmt::Display for UnitalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.constant)?;
        for (p, e) in &self.exps {
            match p {
                Point::Origin => write!(f, "*x^{e}")?,
                Point::Root(_) => write!(f, "*(x-{p})^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for UnitalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.order(), self)
    }
}

struct Exponents<'a>(&'a BTreeMap<Point, i32>);

impl Serialize for Exponents<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (p, e) in self.0 {
            m.serialize_entry(&p.label(), e)?;
        }
        m.end()
    }
}

impl Serialize for UnitalFn {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("n", &self.order())?;
        m.serialize_entry("constant", &self.constant)?;
        m.serialize_entry("exponents", &Exponents(&self.exps))?;
        m.end()
    }
}

#[derive(Deserialize)]
struct UnitalRepr {
    n: u32,
    constant: CycNum,
    exponents: BTreeMap<String, i32>,
}

impl<'de> Deserialize<'de> for UnitalFn {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = UnitalRepr::deserialize(d)?;
        if repr.constant.order() != repr.n {
            return Err(D::Error::custom("constant order differs from n"));
        }
        let mut exps = Vec::with_capacity(repr.exponents.len());
        for (k, e) in &repr.exponents {
            exps.push((Point::parse(k).map_err(D::Error::custom)?, *e));
        }
        UnitalFn::new(repr.constant, exps).map_err(D::Error::custom)
    }
}
