use std::fmt::Write as _;

use serde::Serialize;
use unital::{
    conjecture_report_for, enumerate_with, orbit_decompose_with, search_size, values_of,
    ConjectureReport, EnumerateOptions, UnitalSet,
};

use crate::cli::{Cli, Command, Common, Format, Group};
use crate::refdata::RefData;
use crate::verify::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Exit status and captured output of one command.
#[derive(Debug, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: String) -> Outcome {
        Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

fn check_n(common: &Common, max: u32) -> Result<u32, Outcome> {
    match u32::try_from(common.n) {
        Ok(n) if (1..=max).contains(&n) => Ok(n),
        _ => Err(Outcome::usage(format!(
            "--n must be between 1 and {max}, got {}",
            common.n
        ))),
    }
}

fn compute(n: u32, common: &Common, exhaustive: bool, stderr: &mut String) -> UnitalSet {
    if n >= 5 {
        let _ = writeln!(
            stderr,
            "note: N = {n} searches up to {} partition triples; this can take minutes",
            search_size(n)
        );
    }
    let opts = EnumerateOptions {
        jobs: common.jobs.map(usize::from),
        exhaustive,
    };
    enumerate_with(n, &opts)
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("reports serialize")
}

pub fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Enumerate { common, exhaustive } => run_enumerate(common, *exhaustive),
        Command::Verify { common, fixture } => {
            let refdata = match fixture {
                Some(path) => match RefData::load(path) {
                    Ok(r) => r,
                    Err(e) => return Outcome::usage(e.to_string()),
                },
                None => RefData::embedded(),
            };
            run_verify(common, &refdata)
        }
        Command::Values { common } => run_values(common),
        Command::Orbits { common, group } => run_orbits(common, *group),
        Command::Conjecture { common } => run_conjecture(common),
    }
}

fn run_enumerate(common: &Common, exhaustive: bool) -> Outcome {
    let n = match check_n(common, common.cap) {
        Ok(n) => n,
        Err(o) => return o,
    };
    let mut out = Outcome::default();
    let set = compute(n, common, exhaustive, &mut out.stderr);
    match common.format {
        Format::Text => {
            for f in &set {
                let _ = writeln!(out.stdout, "{f}");
            }
        }
        Format::Json => {
            for f in &set {
                let _ = writeln!(out.stdout, "{}", json(f));
            }
        }
        Format::Table => {
            let _ = writeln!(
                out.stdout,
                "{:>4}  {:>3}  {:>3}  {:<16}  function",
                "#", "num", "den", "f(0)"
            );
            for (k, f) in set.iter().enumerate() {
                let _ = writeln!(
                    out.stdout,
                    "{:>4}  {:>3}  {:>3}  {:<16}  {f}",
                    k + 1,
                    f.numerator_degree(),
                    f.denominator_degree(),
                    f.value_at_zero().to_string(),
                );
            }
        }
    }
    out
}

fn run_verify(common: &Common, refdata: &RefData) -> Outcome {
    let n = match check_n(common, 4) {
        Ok(n) => n,
        Err(o) => return o,
    };
    let mut out = Outcome::default();
    let set = compute(n, common, false, &mut out.stderr);
    let report = match verify(refdata, n, &set) {
        Ok(r) => r,
        Err(e) => return Outcome::usage(e.to_string()),
    };
    out.stdout = match common.format {
        Format::Json => json(&report) + "\n",
        Format::Text | Format::Table => report.to_text(),
    };
    if !report.passed {
        for f in &report.failures {
            let _ = writeln!(out.stderr, "mismatch: {f}");
        }
        out.code = EXIT_MISMATCH;
    }
    out
}

#[derive(Serialize)]
struct ValuesOut {
    n: u32,
    count: usize,
    values: Vec<String>,
}

fn run_values(common: &Common) -> Outcome {
    let n = match check_n(common, common.cap) {
        Ok(n) => n,
        Err(o) => return o,
    };
    let mut out = Outcome::default();
    let set = compute(n, common, false, &mut out.stderr);
    let values: Vec<String> = values_of(&set).iter().map(|v| v.to_string()).collect();
    match common.format {
        Format::Json => {
            out.stdout = json(&ValuesOut {
                n,
                count: values.len(),
                values,
            }) + "\n"
        }
        Format::Text => values.iter().for_each(|v| {
            let _ = writeln!(out.stdout, "{v}");
        }),
        Format::Table => {
            let _ = writeln!(out.stdout, "{:>3}  value", "#");
            for (k, v) in values.iter().enumerate() {
                let _ = writeln!(out.stdout, "{:>3}  {v}", k + 1);
            }
        }
    }
    out
}

#[derive(Serialize)]
struct OrbitOut {
    generator: String,
    key: String,
    size: usize,
    members: Vec<String>,
}

#[derive(Serialize)]
struct OrbitsOut {
    n: u32,
    group: Group,
    count: usize,
    sizes: Vec<usize>,
    orbits: Vec<OrbitOut>,
}

impl Serialize for Group {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(match self {
            Group::Rotations => "rotations",
            Group::Inversion => "inversion",
            Group::Points => "points",
        })
    }
}

fn run_orbits(common: &Common, group: Group) -> Outcome {
    let n = match check_n(common, common.cap) {
        Ok(n) => n,
        Err(o) => return o,
    };
    let mut out = Outcome::default();
    let set = compute(n, common, false, &mut out.stderr);
    let orbits = match orbit_decompose_with(&set, group.into()) {
        Ok(o) => o,
        Err(e) => {
            out.code = EXIT_MISMATCH;
            out.stderr += &format!("error: {e}\n");
            return out;
        }
    };
    match common.format {
        Format::Json => {
            let body = OrbitsOut {
                n,
                group,
                count: orbits.len(),
                sizes: orbits.iter().map(|o| o.size).collect(),
                orbits: orbits
                    .into_iter()
                    .map(|o| OrbitOut {
                        generator: o.generator.to_string(),
                        key: o.generator.canonical_key(),
                        size: o.size,
                        members: o.members,
                    })
                    .collect(),
            };
            out.stdout = json(&body) + "\n";
        }
        Format::Text => {
            let _ = writeln!(out.stdout, "{} orbits", orbits.len());
            for (k, o) in orbits.iter().enumerate() {
                let _ = writeln!(
                    out.stdout,
                    "orbit {}: size {}, generator {}",
                    k + 1,
                    o.size,
                    o.generator
                );
            }
        }
        Format::Table => {
            let _ = writeln!(out.stdout, "{:>3}  {:>4}  generator", "#", "size");
            for (k, o) in orbits.iter().enumerate() {
                let _ = writeln!(out.stdout, "{:>3}  {:>4}  {}", k + 1, o.size, o.generator);
            }
        }
    }
    out
}

#[derive(Serialize)]
struct ConjectureOut<'a> {
    #[serde(flatten)]
    report: &'a ConjectureReport,
    statement: String,
}

fn statement(r: &ConjectureReport) -> String {
    if r.matches {
        format!(
            "computed value set equals the conjectured set for N = {} ({} values, bound {})",
            r.n, r.cardinality, r.bound
        )
    } else {
        format!(
            "conjecture NOT asserted: for N = {} the computed value set ({} values) differs from the conjectured set ({} values)",
            r.n,
            r.cardinality,
            r.conjectured.len()
        )
    }
}

fn run_conjecture(common: &Common) -> Outcome {
    let n = match check_n(common, common.cap) {
        Ok(n) => n,
        Err(o) => return o,
    };
    let mut out = Outcome::default();
    let set = compute(n, common, false, &mut out.stderr);
    let r = conjecture_report_for(n, &set);
    let line = statement(&r);
    match common.format {
        Format::Json => {
            out.stdout = json(&ConjectureOut {
                report: &r,
                statement: line,
            }) + "\n"
        }
        Format::Text | Format::Table => {
            let list = |v: &[unital::P1Value]| {
                v.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            let s = &mut out.stdout;
            let _ = writeln!(s, "N = {}: match={}", r.n, r.matches);
            let _ = writeln!(
                s,
                "cardinality {} <= bound {}: {}",
                r.cardinality, r.bound, r.bound_holds
            );
            let _ = writeln!(s, "computed: {{{}}}", list(&r.computed));
            if !r.missing_from_computed.is_empty() {
                let _ = writeln!(
                    s,
                    "missing from computed: {{{}}}",
                    list(&r.missing_from_computed)
                );
            }
            if !r.extra_in_computed.is_empty() {
                let _ = writeln!(s, "extra in computed: {{{}}}", list(&r.extra_in_computed));
            }
            if let Some(note) = &r.note {
                let _ = writeln!(s, "note: {note}");
            }
            let _ = writeln!(s, "{line}");
        }
    }
    out
}
