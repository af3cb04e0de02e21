use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use unital::{orbit_decompose, values_of, CycField, P1Value, UnitalFn, UnitalSet};

use crate::expr;
use crate::refdata::{sextet_union, RefData, RefError};

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub n: u32,
    pub passed: bool,
    pub count_match: bool,
    pub expected_count: Option<usize>,
    pub computed_count: usize,
    /// Keys of the reference set (union of stated sextets) not found by the search.
    pub missing_from_computed: Vec<String>,
    /// Keys found by the search but absent from the reference set.
    pub extra_in_computed: Vec<String>,
    pub value_set: ValueCheck,
    pub orbits: OrbitCheck,
    pub families: Vec<FamilyCheck>,
    pub listings: ListingCheck,
    pub failures: Vec<String>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValueCheck {
    #[serde(rename = "match")]
    pub matches: bool,
    pub expected: Vec<String>,
    pub computed: Vec<String>,
    pub missing: Vec<String>,
    pub extra: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitCheck {
    pub group: &'static str,
    pub expected: Option<Vec<usize>>,
    pub computed: Vec<usize>,
    #[serde(rename = "match")]
    pub matches: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyCheck {
    pub name: String,
    pub stated_size: usize,
    pub size: usize,
    pub contained: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ListingCheck {
    pub entries: usize,
    pub matched: usize,
    pub flagged: usize,
    pub issues: Vec<Issue>,
    /// Computed functions that no listed entry evaluates to.
    pub unlisted: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Issue {
    pub source: String,
    pub expr: String,
    pub kind: IssueKind,
    pub detail: String,
    pub verbatim_uncertain: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IssueKind {
    /// The expression does not parse or does not factor over {0} ∪ Γ_N.
    Unreadable,
    /// Parses, but 1 - f has a zero or pole off the allowed set.
    NotUnital,
    /// Unital, yet missing from the computed set.
    NotComputed,
    /// Same function as an earlier entry.
    Duplicate,
}

fn texts(vals: impl IntoIterator<Item = P1Value>) -> Vec<String> {
    vals.into_iter().map(|v| v.to_string()).collect()
}

fn sorted_sizes<'a>(it: impl Iterator<Item = &'a usize>) -> Vec<usize> {
    let mut v: Vec<usize> = it.copied().collect();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

fn check_listings(refdata: &RefData, n: u32, computed: &UnitalSet) -> ListingCheck {
    let field = CycField::new(n);
    let mut out = ListingCheck::default();
    let mut listed = BTreeSet::new();
    let mut first: BTreeMap<String, &str> = BTreeMap::new();
    for block in refdata.listings.iter().filter(|b| b.n == n) {
        for e in &block.entries {
            out.entries += 1;
            out.flagged += e.verbatim_uncertain as usize;
            let issue = |kind, detail: String| Issue {
                source: e.source.clone(),
                expr: e.expr.clone(),
                kind,
                detail,
                verbatim_uncertain: e.verbatim_uncertain,
            };
            let f: UnitalFn = match expr::parse_unital(&field, &e.expr) {
                Ok(f) => f,
                Err(err) => {
                    out.issues
                        .push(issue(IssueKind::Unreadable, err.to_string()));
                    continue;
                }
            };
            let key = f.canonical_key();
            if computed.contains(&f) {
                out.matched += 1;
                listed.insert(key.clone());
            } else if f.complement().is_err() {
                out.issues
                    .push(issue(IssueKind::NotUnital, format!("evaluates to {f}")));
            } else {
                out.issues
                    .push(issue(IssueKind::NotComputed, format!("evaluates to {f}")));
            }
            match first.get(&key) {
                Some(src) => out.issues.push(issue(
                    IssueKind::Duplicate,
                    format!("same function as {src}"),
                )),
                None => {
                    first.insert(key, &e.source);
                }
            }
        }
    }
    if out.entries > 0 {
        out.unlisted = computed
            .keys()
            .filter(|k| !listed.contains(*k))
            .cloned()
            .collect();
    }
    out
}

/// Compares `computed` (which must be U_n) against `refdata`.
pub fn verify(refdata: &RefData, n: u32, computed: &UnitalSet) -> Result<VerifyReport, RefError> {
    let mut failures = Vec::new();
    let mut warnings = Vec::new();

    let expected_count = refdata.counts.get(&n).copied();
    let count_match = expected_count == Some(computed.len());
    if !count_match {
        failures.push(match expected_count {
            Some(c) => format!("count: expected {c}, computed {}", computed.len()),
            None => format!("count: no reference count for N = {n}"),
        });
    }

    let (missing_from_computed, extra_in_computed) = match refdata.theorem_set(n)? {
        Some(reference) => (
            reference
                .keys()
                .filter(|k| computed.get(k).is_none())
                .cloned()
                .collect(),
            computed
                .keys()
                .filter(|k| reference.get(k).is_none())
                .cloned()
                .collect(),
        ),
        None => (Vec::new(), Vec::new()),
    };
    let (m, x): (&Vec<String>, &Vec<String>) = (&missing_from_computed, &extra_in_computed);
    if !m.is_empty() || !x.is_empty() {
        let mut w = format!(
            "reference sextets: {} missing from computed, {} extra in computed",
            m.len(),
            x.len()
        );
        if let Some(note) = refdata.theorem_notes.get(&n) {
            w += &format!(" ({note})");
        }
        warnings.push(w);
    }

    let got = values_of(computed);
    let value_set = match refdata.value_set(n)? {
        Some(want) => {
            let missing: Vec<_> = want.difference(&got).cloned().collect();
            let extra: Vec<_> = got.difference(&want).cloned().collect();
            let matches = missing.is_empty() && extra.is_empty();
            if !matches {
                failures.push(format!(
                    "values: expected {}, computed {}; missing [{}], extra [{}]",
                    want.len(),
                    got.len(),
                    texts(missing.clone()).join(", "),
                    texts(extra.clone()).join(", ")
                ));
            }
            ValueCheck {
                matches,
                expected: texts(want),
                computed: texts(got),
                missing: texts(missing),
                extra: texts(extra),
            }
        }
        None => {
            failures.push(format!("values: no reference value set for N = {n}"));
            ValueCheck {
                matches: false,
                expected: Vec::new(),
                computed: texts(got),
                missing: Vec::new(),
                extra: Vec::new(),
            }
        }
    };

    let orbit_sizes = orbit_decompose(computed)
        .map(|o| sorted_sizes(o.iter().map(|r| &r.size)))
        .unwrap_or_default();
    let expected_orbits = (n == 4).then(|| sorted_sizes(refdata.orbit_sizes_4.iter()));
    let orbit_match = expected_orbits.as_ref().map(|e| *e == orbit_sizes);
    if orbit_match == Some(false) {
        warnings.push(format!(
            "orbit sizes under sextet, rotation and Galois maps: reference {:?}, computed {:?}",
            expected_orbits.as_ref().expect("set"),
            orbit_sizes
        ));
    }

    let mut families = Vec::new();
    if n == 4 {
        let field = CycField::new(4);
        for fam in &refdata.families_4 {
            let set = sextet_union(&field, &fam.seeds)?;
            let check = FamilyCheck {
                name: fam.name.clone(),
                stated_size: fam.size,
                size: set.len(),
                contained: set.iter().all(|f| computed.contains(f)),
            };
            if check.size != check.stated_size || !check.contained {
                warnings.push(format!(
                    "family {}: stated size {}, built {}, contained in U_4: {}",
                    check.name, check.stated_size, check.size, check.contained
                ));
            }
            families.push(check);
        }
    }

    let listings = check_listings(refdata, n, computed);
    for i in &listings.issues {
        warnings.push(format!(
            "listing {} `{}`: {:?}, {}{}",
            i.source,
            i.expr,
            i.kind,
            i.detail,
            if i.verbatim_uncertain {
                " (flagged)"
            } else {
                ""
            }
        ));
    }
    if !listings.unlisted.is_empty() {
        warnings.push(format!(
            "listing: {} computed functions are not listed",
            listings.unlisted.len()
        ));
    }

    Ok(VerifyReport {
        n,
        passed: failures.is_empty(),
        count_match,
        expected_count,
        computed_count: computed.len(),
        missing_from_computed,
        extra_in_computed,
        value_set,
        orbits: OrbitCheck {
            group: "rotations",
            expected: expected_orbits,
            computed: orbit_sizes,
            matches: orbit_match,
        },
        families,
        listings,
        failures,
        warnings,
    })
}

impl VerifyReport {
    pub fn to_text(&self) -> String {
        let mut s = format!("verify N = {}\n", self.n);
        match self.expected_count {
            Some(c) => s += &format!("count: {} computed, {} expected\n", self.computed_count, c),
            None => s += &format!("count: {} computed, no reference\n", self.computed_count),
        }
        s += &format!(
            "values: {} computed, {} expected{}\n",
            self.value_set.computed.len(),
            self.value_set.expected.len(),
            if self.value_set.matches {
                ", equal"
            } else {
                ""
            }
        );
        if let Some(m) = self.orbits.matches {
            s += &format!(
                "orbits: {} computed ({}){}\n",
                self.orbits.computed.len(),
                self.orbits.group,
                if m { ", sizes equal" } else { ", sizes differ" }
            );
        }
        if self.listings.entries > 0 {
            s += &format!(
                "listing: {} entries, {} matched, {} flagged, {} issues\n",
                self.listings.entries,
                self.listings.matched,
                self.listings.flagged,
                self.listings.issues.len()
            );
        }
        for w in &self.warnings {
            s += &format!("warning: {w}\n");
        }
        for f in &self.failures {
            s += &format!("MISMATCH {f}\n");
        }
        s += if self.passed {
            "result: PASS\n"
        } else {
            "result: FAIL\n"
        };
        s
    }
}
