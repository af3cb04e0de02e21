//! Complete enumeration of U_N.
//!
//! Every f ∈ U_N together with g = 1 - f can be written with a shared
//! denominator P and coprime numerators:
//!
//! ```text
//!     P - C·Q = D·R,     f = D·R/P,   g = C·Q/P
//! ```
//!
//! where P, Q, R are monic products of linear factors over pairwise disjoint
//! subsets L, K, J of {0} ∪ Γ_N. Mason's theorem bounds every degree by N,
//! so the search over (L, K, J) and their exponents is finite. For each
//! triple the constants (C, D) are found by an exact linear solve over all
//! coefficient rows.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::cyclotomic::{CycField, CycNum};
use crate::error::{Error, Result};
use crate::poly::{from_factored, Point, Poly, RootSpec};
use crate::unital::{point_symmetries, Mobius, P1Value, UnitalFn};

/// Maximum numerator/denominator degree of an N-unital function.
///
/// The N + 2 allowed places ({0}, Γ_N and ∞) give `deg ≤ (N + 2) - 2`
/// by Mason–Stothers.
pub fn degree_bound(n: u32) -> u32 {
    assert!(n >= 1);
    n
}

/// One search atom: key-disjoint root specs for R (= J), Q (= K) and P (= L).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionTriple {
    j: RootSpec,
    k: RootSpec,
    l: RootSpec,
}

impl PartitionTriple {
    pub fn new(j: RootSpec, k: RootSpec, l: RootSpec) -> Result<PartitionTriple> {
        let n = j.order();
        if k.order() != n || l.order() != n {
            return Err(Error::OrderMismatch {
                left: n,
                right: if k.order() != n { k.order() } else { l.order() },
            });
        }
        let bound = degree_bound(n);
        let disjoint =
            j.mask() & k.mask() == 0 && j.mask() & l.mask() == 0 && k.mask() & l.mask() == 0;
        let bounded = [&j, &k, &l].iter().all(|s| s.degree() <= bound);
        if !disjoint || !bounded {
            return Err(Error::InvalidPoint("partition triple out of range".into()));
        }
        if (j.is_empty() && l.is_empty()) || (k.is_empty() && l.is_empty()) {
            return Err(Error::ConstantFunction);
        }
        Ok(PartitionTriple { j, k, l })
    }

    pub fn j(&self) -> &RootSpec {
        &self.j
    }

    pub fn k(&self) -> &RootSpec {
        &self.k
    }

    pub fn l(&self) -> &RootSpec {
        &self.l
    }

    /// Solves the triple, returning `(f, 1 - f)` on success.
    pub fn solve(&self) -> Option<(UnitalFn, UnitalFn)> {
        let field = CycField::new(self.j.order());
        let p = from_factored(&field, &self.l);
        let q = from_factored(&field, &self.k);
        let r = from_factored(&field, &self.j);
        let (c, d) = solve_cd(&p, &q, &r)?;
        Some(assemble(&self.l, &self.k, &self.j, c, d))
    }
}

fn assemble(
    l: &RootSpec,
    k: &RootSpec,
    j: &RootSpec,
    c: CycNum,
    d: CycNum,
) -> (UnitalFn, UnitalFn) {
    let with_den = |num: &RootSpec| {
        num.exps()
            .iter()
            .map(|(&p, &e)| (p, e as i32))
            .chain(l.exps().iter().map(|(&p, &e)| (p, -(e as i32))))
            .collect::<Vec<_>>()
    };
    let f = UnitalFn::new(d, with_den(j)).expect("J or L is nonempty");
    let g = UnitalFn::new(c, with_den(k)).expect("K or L is nonempty");
    (f, g)
}

/// Finds the unique `(C, D)`, both nonzero, with `P - C·Q = D·R`.
///
/// The identity is the linear system `P_i = C·Q_i + D·R_i` over every
/// coefficient position i. Two independent rows fix (C, D); every other row
/// is then checked exactly. When no two rows are independent, Q and R are
/// proportional; with monic factors on disjoint supports that forces
/// Q = R = 1, which admits no non-constant solution, so `None` is returned.
pub fn solve_cd(p: &Poly, q: &Poly, r: &Poly) -> Option<(CycNum, CycNum)> {
    if p.order() != q.order() || p.order() != r.order() {
        return None;
    }
    let rows = [p, q, r]
        .iter()
        .filter_map(|x| x.degree())
        .max()
        .unwrap_or(0)
        + 1;
    let (pc, qc, rc): (Vec<_>, Vec<_>, Vec<_>) = (0..rows)
        .map(|i| (p.coeff(i), q.coeff(i), r.coeff(i)))
        .fold(
            (Vec::new(), Vec::new(), Vec::new()),
            |(mut a, mut b, mut c), (x, y, z)| {
                a.push(x);
                b.push(y);
                c.push(z);
                (a, b, c)
            },
        );
    let mut pivot = None;
    'search: for a in 0..rows {
        if qc[a].is_zero() && rc[a].is_zero() {
            continue;
        }
        for b in a + 1..rows {
            let det = &(&qc[a] * &rc[b]) - &(&qc[b] * &rc[a]);
            if !det.is_zero() {
                pivot = Some((a, b, det));
                break 'search;
            }
        }
    }
    let (a, b, det) = pivot?;
    let det_inv = det.inv().ok()?;
    let c = &(&(&pc[a] * &rc[b]) - &(&pc[b] * &rc[a])) * &det_inv;
    let d = &(&(&qc[a] * &pc[b]) - &(&qc[b] * &pc[a])) * &det_inv;
    if c.is_zero() || d.is_zero() {
        return None;
    }
    for i in 0..rows {
        if i == a || i == b {
            continue;
        }
        if pc[i] != &(&c * &qc[i]) + &(&d * &rc[i]) {
            return None;
        }
    }
    Some((c, d))
}

/// Deduplicated set of functions of one order, ordered by canonical key.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UnitalSet {
    by_key: BTreeMap<String, UnitalFn>,
}

impl UnitalSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns false if an equal function was already present.
    pub fn insert(&mut self, f: UnitalFn) -> bool {
        self.by_key.insert(f.canonical_key(), f).is_none()
    }

    pub fn len(&self) -> usize {
        self.by_key.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_key.is_empty()
    }

    pub fn contains(&self, f: &UnitalFn) -> bool {
        self.by_key.contains_key(&f.canonical_key())
    }

    pub fn get(&self, key: &str) -> Option<&UnitalFn> {
        self.by_key.get(key)
    }

    pub fn keys(&self) -> impl Iterator<Item = &String> {
        self.by_key.keys()
    }

    /// Functions in canonical key order.
    pub fn iter(&self) -> impl Iterator<Item = &UnitalFn> {
        self.by_key.values()
    }
}

impl FromIterator<UnitalFn> for UnitalSet {
    fn from_iter<I: IntoIterator<Item = UnitalFn>>(iter: I) -> Self {
        let mut s = UnitalSet::new();
        for f in iter {
            s.insert(f);
        }
        s
    }
}

impl<'a> IntoIterator for &'a UnitalSet {
    type Item = &'a UnitalFn;
    type IntoIter = std::collections::btree_map::Values<'a, String, UnitalFn>;
    fn into_iter(self) -> Self::IntoIter {
        self.by_key.values()
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct EnumerateOptions {
    /// Worker threads; `None` uses the ambient rayon pool, `Some(1)` runs inline.
    pub jobs: Option<usize>,
    /// Skip the per-triple Mason–Stothers filter and solve every triple.
    pub exhaustive: bool,
}

struct Atom {
    spec: RootSpec,
    poly: Poly,
    degree: u32,
    support: u32,
}

/// Every root spec with total degree ≤ `bound`, grouped by support mask.
fn atoms_by_mask(field: &Arc<CycField>, bound: u32) -> Vec<Vec<Atom>> {
    let n = field.order();
    let points = n as usize + 1;
    let mut groups: Vec<Vec<Atom>> = (0..1usize << points).map(|_| Vec::new()).collect();
    let mut exps = vec![0u32; points];
    fn rec(i: usize, left: u32, exps: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == exps.len() {
            out.push(exps.clone());
            return;
        }
        for e in 0..=left {
            exps[i] = e;
            rec(i + 1, left - e, exps, out);
        }
        exps[i] = 0;
    }
    let mut all = Vec::new();
    rec(0, bound, &mut exps, &mut all);
    for v in all {
        let spec = RootSpec::new(
            n,
            v.iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| (Point::from_index(i), e)),
        )
        .expect("generated spec is valid");
        let mask = spec.mask() as usize;
        groups[mask].push(Atom {
            poly: from_factored(field, &spec),
            degree: spec.degree(),
            support: spec.exps().len() as u32,
            spec,
        });
    }
    groups
}

/// Submasks of `m`, including 0 and `m` itself, in increasing order.
fn submasks(m: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut s = 0usize;
    loop {
        out.push(s);
        if s == m {
            return out;
        }
        s = ((s | !m).wrapping_add(1)) & m;
    }
}

/// Number of partition triples the search visits before symmetry and
/// degree pruning; used as a cost estimate.
pub fn search_size(n: u32) -> u128 {
    fn binom(a: u32, b: u32) -> u128 {
        if b > a {
            return 0;
        }
        (0..b).fold(1u128, |acc, i| acc * (a - i) as u128 / (i + 1) as u128)
    }
    let bound = degree_bound(n);
    let points = n + 1;
    let mut total = 0u128;
    // choose sizes (j, k, l) of the three supports
    for j in 0..=points {
        for k in 0..=points - j {
            for l in 0..=points - j - k {
                if (j + l == 0) || (k + l == 0) {
                    continue;
                }
                let place = binom(points, j) * binom(points - j, k) * binom(points - j - k, l);
                total += place * binom(bound, j) * binom(bound, k) * binom(bound, l);
            }
        }
    }
    total
}

/// The two largest of three degrees must coincide for `P - C·Q = D·R`.
fn degrees_compatible(p: u32, q: u32, r: u32) -> bool {
    let mut d = [p, q, r];
    d.sort_unstable();
    d[1] == d[2]
}

/// Mason–Stothers for coprime `P = C·Q + D·R`: the largest degree is below
/// the number of distinct roots of `P·Q·R`.
fn mason_admissible(l: &Atom, k: &Atom, j: &Atom) -> bool {
    let max = l.degree.max(k.degree).max(j.degree);
    max < l.support + k.support + j.support
}

fn solve_for_denominator(
    groups: &[Vec<Atom>],
    full: usize,
    lmask: usize,
    l: &Atom,
    exhaustive: bool,
) -> Vec<UnitalFn> {
    let mut out = Vec::new();
    let rest = full & !lmask;
    for kmask in submasks(rest) {
        for jmask in submasks(rest & !kmask) {
            if lmask == 0 && (jmask == 0 || kmask == 0) {
                continue;
            }
            // (L, K, J) and (L, J, K) give the same pair {f, 1 - f}
            if kmask > jmask {
                continue;
            }
            for (ki, k) in groups[kmask].iter().enumerate() {
                for (ji, j) in groups[jmask].iter().enumerate() {
                    if kmask == jmask && ki > ji {
                        continue;
                    }
                    if !degrees_compatible(l.degree, k.degree, j.degree) {
                        continue;
                    }
                    if !exhaustive && !mason_admissible(l, k, j) {
                        continue;
                    }
                    if let Some((c, d)) = solve_cd(&l.poly, &k.poly, &j.poly) {
                        let (f, g) = assemble(&l.spec, &k.spec, &j.spec, c, d);
                        out.push(f);
                        out.push(g);
                    }
                }
            }
        }
    }
    out
}

pub fn enumerate(n: u32) -> UnitalSet {
    enumerate_with(n, &EnumerateOptions::default())
}

/// All of U_N. The result does not depend on the number of workers.
pub fn enumerate_with(n: u32, opts: &EnumerateOptions) -> UnitalSet {
    let field = CycField::new(n);
    let groups = atoms_by_mask(&field, degree_bound(n));
    let full = (1usize << (n as usize + 1)) - 1;
    let work: Vec<(usize, &Atom)> = groups
        .iter()
        .enumerate()
        .flat_map(|(m, g)| g.iter().map(move |a| (m, a)))
        .collect();
    let run =
        |(m, a): &(usize, &Atom)| solve_for_denominator(&groups, full, *m, a, opts.exhaustive);
    let chunks: Vec<Vec<UnitalFn>> = match opts.jobs {
        Some(1) => work.iter().map(run).collect(),
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .expect("thread pool")
            .install(|| work.par_iter().map(run).collect()),
        None => work.par_iter().map(run).collect(),
    };
    chunks.into_iter().flatten().collect()
}

/// One orbit of the symmetry group acting on a closed set of functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitReport {
    /// Key-minimal member.
    pub generator: UnitalFn,
    pub size: usize,
    /// Canonical keys, sorted.
    pub members: Vec<String>,
}

/// Which substitutions of `x` join the sextet maps and Galois conjugation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SymmetryGroup {
    /// Rotations `x ↦ ζ^r x`; group order 6·N·φ(N).
    #[default]
    Rotations,
    /// Rotations together with `x ↦ 1/x`.
    WithInversion,
    /// Every Möbius map permuting {0, ∞} ∪ Γ_N (octahedral for N = 4).
    PointSymmetries,
}

/// Images of `f` under the generators of the symmetry group: `1 - f`,
/// `1/f`, `f(ζx)` and every Galois conjugate.
pub fn symmetry_images(f: &UnitalFn) -> Result<Vec<UnitalFn>> {
    let mut out = vec![f.complement()?, f.reciprocal(), f.scale_sub(1)];
    for k in f.field().units() {
        out.push(f.galois_map(k)?);
    }
    Ok(out)
}

/// Splits `fns` into orbits under the group generated by the sextet maps,
/// `x ↦ ζ^r x` and the Galois automorphisms. Orbits are sorted by generator key.
pub fn orbit_decompose(fns: &UnitalSet) -> Result<Vec<OrbitReport>> {
    orbit_decompose_with(fns, SymmetryGroup::Rotations)
}

pub fn orbit_decompose_with(fns: &UnitalSet, group: SymmetryGroup) -> Result<Vec<OrbitReport>> {
    let maps = match (group, fns.iter().next()) {
        (SymmetryGroup::PointSymmetries, Some(f)) => point_symmetries(f.field()),
        (SymmetryGroup::WithInversion, Some(f)) => {
            let field = f.field();
            let zero = P1Value::Finite(CycNum::zero(field));
            let one = P1Value::Finite(CycNum::one(field));
            vec![Mobius::through(field, &P1Value::Infinity, &zero, &one)]
        }
        _ => Vec::new(),
    };
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    let mut reports = Vec::new();
    for start in fns.keys() {
        if seen.contains(start.as_str()) {
            continue;
        }
        let mut members = BTreeSet::new();
        let mut queue = VecDeque::from([start.as_str()]);
        seen.insert(start);
        while let Some(key) = queue.pop_front() {
            members.insert(key.to_string());
            let f = fns.get(key).expect("queued keys are members");
            let mut images = symmetry_images(f).map_err(|_| Error::NotClosed(key.to_string()))?;
            for m in &maps {
                images.push(f.compose_mobius(m)?);
            }
            for g in images {
                let gk = g.canonical_key();
                let (stored, _) = fns
                    .by_key
                    .get_key_value(&gk)
                    .ok_or_else(|| Error::NotClosed(gk.clone()))?;
                if seen.insert(stored.as_str()) {
                    queue.push_back(stored.as_str());
                }
            }
        }
        reports.push(OrbitReport {
            generator: fns.get(start).expect("member").clone(),
            size: members.len(),
            members: members.into_iter().collect(),
        });
    }
    Ok(reports)
}

pub fn value_set(n: u32) -> BTreeSet<P1Value> {
    values_of(&enumerate(n))
}

/// `{f(0) : f ∈ fns}`.
pub fn values_of(fns: &UnitalSet) -> BTreeSet<P1Value> {
    fns.iter().map(UnitalFn::value_at_zero).collect()
}

fn p1_complement(field: &Arc<CycField>, z: &P1Value) -> P1Value {
    match z {
        P1Value::Finite(c) => P1Value::Finite(&CycNum::one(field) - c),
        P1Value::Infinity => P1Value::Infinity,
    }
}

fn p1_reciprocal(field: &Arc<CycField>, z: &P1Value) -> P1Value {
    match z {
        P1Value::Finite(c) if c.is_zero() => P1Value::Infinity,
        P1Value::Finite(c) => P1Value::Finite(c.inv().expect("nonzero")),
        P1Value::Infinity => P1Value::Finite(CycNum::zero(field)),
    }
}

/// Orbit of a constant under `z, 1-z, 1/z, z/(z-1), (z-1)/z, 1/(1-z)` on P¹.
pub fn value_orbit(field: &Arc<CycField>, c: &P1Value) -> BTreeSet<P1Value> {
    let comp = |z: &P1Value| p1_complement(field, z);
    let rec = |z: &P1Value| p1_reciprocal(field, z);
    let r = rec(c);
    let cr = comp(&r);
    [c.clone(), comp(c), rec(&comp(c)), rec(&cr), cr, r]
        .into_iter()
        .collect()
}

pub fn conjectured_value_set(n: u32) -> BTreeSet<P1Value> {
    let field = CycField::new(n);
    let mut out: BTreeSet<P1Value> = [
        P1Value::Finite(CycNum::zero(&field)),
        P1Value::Finite(CycNum::one(&field)),
        P1Value::Infinity,
    ]
    .into_iter()
    .collect();
    let seeds: Vec<CycNum> = if n.is_multiple_of(2) {
        (1..=n / 2)
            .map(|j| CycNum::root_of_unity(&field, j as i64))
            .collect()
    } else {
        (1..=(n - 1) / 2)
            .flat_map(|j| {
                let u = CycNum::root_of_unity(&field, j as i64);
                [-&u, u]
            })
            .collect()
    };
    for s in seeds {
        out.extend(value_orbit(&field, &P1Value::Finite(s)));
    }
    out
}

/// Comparison of the computed value set against the conjectured one.
/// A mismatch is a reported outcome, never an error.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjectureReport {
    pub n: u32,
    #[serde(rename = "match")]
    pub matches: bool,
    pub cardinality: usize,
    pub bound: usize,
    pub bound_holds: bool,
    pub computed: Vec<P1Value>,
    pub conjectured: Vec<P1Value>,
    pub missing_from_computed: Vec<P1Value>,
    pub extra_in_computed: Vec<P1Value>,
    pub note: Option<String>,
}

pub fn conjecture_report(n: u32) -> ConjectureReport {
    conjecture_report_for(n, &enumerate(n))
}

pub fn conjecture_report_for(n: u32, fns: &UnitalSet) -> ConjectureReport {
    let computed = values_of(fns);
    let conjectured = conjectured_value_set(n);
    let bound = if n.is_multiple_of(2) {
        3 * n
    } else {
        6 * n - 3
    } as usize;
    let note = (n == 1).then(|| {
        "N = 1: the root-of-unity union is empty; the conjectured set is taken as {0, 1, inf}"
            .to_string()
    });
    ConjectureReport {
        n,
        matches: computed == conjectured,
        cardinality: computed.len(),
        bound,
        bound_holds: computed.len() <= bound,
        missing_from_computed: conjectured.difference(&computed).cloned().collect(),
        extra_in_computed: computed.difference(&conjectured).cloned().collect(),
        computed: computed.into_iter().collect(),
        conjectured: conjectured.into_iter().collect(),
        note,
    }
}
