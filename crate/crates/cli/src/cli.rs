use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "unital",
    version,
    about = "Enumerate and check N-unital rational functions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print every N-unital function in canonical key order.
    Enumerate {
        #[command(flatten)]
        common: Common,
        /// Solve every partition triple, without the degree filter.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Compare the computed U_N against the reference data (N ≤ 4).
    Verify {
        #[command(flatten)]
        common: Common,
        /// Read reference data from this JSON file instead of the built-in copy.
        #[arg(long)]
        fixture: Option<PathBuf>,
    },
    /// Print the value set {f(0) : f ∈ U_N}.
    Values {
        #[command(flatten)]
        common: Common,
    },
    /// Split U_N into orbits of the symmetry group.
    Orbits {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Group::Rotations)]
        group: Group,
    },
    /// Compare the value set with the conjectured one.
    Conjecture {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    /// Order of the roots of unity.
    #[arg(long)]
    pub n: i64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads for the search (default: all cores).
    #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: Option<u16>,
    /// Largest accepted N.
    #[arg(long, default_value_t = 6)]
    pub cap: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Group {
    /// Sextet maps, x ↦ ζ^r x and Galois conjugation.
    Rotations,
    /// As `rotations`, plus x ↦ 1/x.
    Inversion,
    /// Sextet maps, Galois conjugation and every Möbius map permuting {0, ∞} ∪ Γ_N.
    Points,
}

impl From<Group> for unital::SymmetryGroup {
    fn from(g: Group) -> Self {
        match g {
            Group::Rotations => unital::SymmetryGroup::Rotations,
            Group::Inversion => unital::SymmetryGroup::WithInversion,
            Group::Points => unital::SymmetryGroup::PointSymmetries,
        }
    }
}
