use std::fmt;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dtorus::TorusSpec;

#[derive(Parser, Debug)]
#[command(
    name = "dtorus",
    version,
    about = "Exact reduced-cycle and prime-cycle counts on discrete tori"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Reduced-cycle counts N(n) from the closed formula.
    Count {
        #[command(flatten)]
        torus: TorusArgs,
        /// Lengths, `n` or `lo..hi` (inclusive).
        #[arg(long)]
        n: LengthRange,
        /// Also report prime-class counts and their length gcd.
        #[arg(long)]
        pi: bool,
    },
    /// Compare the formula with independent oracles and check spectral identities.
    Verify {
        #[command(flatten)]
        torus: TorusArgs,
        #[arg(long)]
        n: Option<LengthRange>,
        /// Oracles to run; defaults to all three.
        #[arg(long, value_enum, value_delimiter = ',')]
        oracle: Vec<OracleKind>,
        /// Run the theta, zeta and Ihara identity checks.
        #[arg(long)]
        spectral: bool,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Integrality and lattice-path sweeps over the weights X(mu) of a normalized torus.
    Conjectures {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: LengthRange,
        /// Maximum DFS node visits per path count.
        #[arg(long, default_value_t = 100_000_000)]
        budget: u64,
    },
    /// The X(mu) table for d = 2, m = 3.
    Table1 {
        #[arg(long, default_value = "3..10")]
        n: LengthRange,
    },
}

#[derive(Args, Debug, Clone)]
pub struct TorusArgs {
    /// Side lengths `a,b,c`.
    #[arg(long = "M", value_delimiter = ',', conflicts_with_all = ["m", "d"], required_unless_present = "m")]
    pub sides: Option<Vec<u64>>,
    /// Common side length of a normalized torus.
    #[arg(long, requires = "d")]
    pub m: Option<u64>,
    /// Dimension of a normalized torus.
    #[arg(long, requires = "m")]
    pub d: Option<usize>,
}

impl TorusArgs {
    pub fn spec(&self) -> dtorus::Result<TorusSpec> {
        match (&self.sides, self.m, self.d) {
            (Some(sides), _, _) => TorusSpec::new(sides.clone()),
            (None, Some(m), Some(d)) => TorusSpec::normalized(m, d),
            _ => Err(dtorus::Error::InvalidTorus(
                "give --M or both --m and --d".into(),
            )),
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct Tuning {
    /// Maximum DFS node visits per enumerative case.
    #[arg(long, default_value_t = 100_000_000)]
    pub budget: u64,
    /// Translate shells kept in the heat-kernel zeta series.
    #[arg(long = "h-max", default_value_t = 64)]
    pub h_max: u64,
    /// Tolerance for every spectral residual (defaults per identity).
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum OracleKind {
    Trace,
    Path,
    Enumerative,
}

/// Inclusive range of cycle lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LengthRange {
    pub lo: u64,
    pub hi: u64,
}

impl LengthRange {
    pub fn iter(&self) -> impl Iterator<Item = u64> {
        self.lo..=self.hi
    }
}

impl fmt::Display for LengthRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "{}..{}", self.lo, self.hi)
        }
    }
}

impl FromStr for LengthRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |v: &str| {
            v.trim()
                .parse::<u64>()
                .map_err(|_| format!("`{v}` is not a length"))
        };
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?),
            None => {
                let n = parse(s)?;
                (n, n)
            }
        };
        if lo == 0 {
            return Err("lengths start at 1".into());
        }
        if lo > hi {
            return Err(format!("empty range {lo}..{hi}"));
        }
        Ok(LengthRange { lo, hi })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_ranges() {
        assert_eq!("3..10".parse(), Ok(LengthRange { lo: 3, hi: 10 }));
        assert_eq!("3..=10".parse(), Ok(LengthRange { lo: 3, hi: 10 }));
        assert_eq!("7".parse(), Ok(LengthRange { lo: 7, hi: 7 }));
        assert!("0..3".parse::<LengthRange>().is_err());
        assert!("5..3".parse::<LengthRange>().is_err());
        assert!("a..3".parse::<LengthRange>().is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
