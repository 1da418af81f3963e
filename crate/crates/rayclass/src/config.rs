//! Run configuration and its command-line form.

use clap::{Parser, ValueEnum};

pub const DEFAULT_DIGITS: u32 = 256;
pub const MIN_DIGITS: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Epsilon,
    Classical,
    Compare,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Text,
    Json,
}

/// How the modulus was given.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModulusInput {
    /// the ideal `(N)`
    Rational(i64),
    /// HNF triple `[m, n + k omega]`
    Hnf(i64, i64, i64),
    /// generators `a + b tau`
    Gens(Vec<(i64, i64)>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub d: i64,
    pub modulus: ModulusInput,
    pub digits: u32,
    pub mode: Mode,
    pub twist: Option<(i64, i64)>,
    pub exhaustive: bool,
    pub emit: Emit,
    pub include_conjugates: bool,
    pub threads: usize,
    pub class: Option<(i64, i64)>,
    pub class_form: Option<(i64, i64, i64)>,
}

impl RunConfig {
    pub fn new(d: i64, modulus: ModulusInput) -> Self {
        RunConfig {
            d,
            modulus,
            digits: DEFAULT_DIGITS,
            mode: Mode::Epsilon,
            twist: None,
            exhaustive: false,
            emit: Emit::Text,
            include_conjugates: false,
            threads: 1,
            class: None,
            class_form: None,
        }
    }
}

/// Elliptic units generating ray class fields of imaginary quadratic fields.
#[derive(Debug, Parser)]
#[command(name = "rayclass", version)]
pub struct Cli {
    /// discriminant (or squarefree part) of the imaginary quadratic field
    #[arg(long, allow_hyphen_values = true)]
    pub d: i64,
    /// rational modulus N
    #[arg(long, conflicts_with_all = ["ideal", "gens"])]
    pub modulus: Option<i64>,
    /// modulus ideal as the HNF triple m,n,k of [m, n + k*omega]
    #[arg(long, value_parser = parse_triple, conflicts_with = "gens")]
    pub ideal: Option<(i64, i64, i64)>,
    /// modulus ideal generators a+b*tau as a,b pairs separated by ';'
    #[arg(long, value_parser = parse_gens, allow_hyphen_values = true)]
    pub gens: Option<GenList>,
    /// decimal digits of working precision
    #[arg(long, env = "RAYCLASS_DIGITS", default_value_t = DEFAULT_DIGITS)]
    pub digits: u32,
    #[arg(long, value_enum, default_value_t = Mode::Epsilon)]
    pub mode: Mode,
    /// multiply by zeta_n^k, given as n:k
    #[arg(long, value_parser = parse_twist)]
    pub twist: Option<(i64, i64)>,
    /// try every admissible class and root-of-unity twist, keep the smallest
    #[arg(long)]
    pub exhaustive: bool,
    #[arg(long, value_enum, default_value_t = Emit::Text)]
    pub emit: Emit,
    /// include numerical conjugates in the output
    #[arg(long)]
    pub conjugates: bool,
    /// worker threads, 0 for one per core
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// explicit class t + s*tau as s,t
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    pub class: Option<(i64, i64)>,
    /// reduced form a,b,c paired with --class
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true, requires = "class")]
    pub class_form: Option<(i64, i64, i64)>,
}

impl Cli {
    pub fn into_config(self) -> Result<RunConfig, String> {
        let modulus = match (self.modulus, self.ideal, self.gens) {
            (Some(n), None, None) => ModulusInput::Rational(n),
            (None, Some((m, n, k)), None) => ModulusInput::Hnf(m, n, k),
            (None, None, Some(g)) => ModulusInput::Gens(g.0),
            _ => return Err("give exactly one of --modulus, --ideal, --gens".into()),
        };
        if self.digits < MIN_DIGITS {
            return Err(format!("--digits must be at least {MIN_DIGITS}"));
        }
        Ok(RunConfig {
            d: self.d,
            modulus,
            digits: self.digits,
            mode: self.mode,
            twist: self.twist,
            exhaustive: self.exhaustive,
            emit: self.emit,
            include_conjugates: self.conjugates,
            threads: self.threads,
            class: self.class,
            class_form: self.class_form,
        })
    }
}

fn ints(s: &str, sep: char) -> Result<Vec<i64>, String> {
    s.split(sep)
        .map(|x| x.trim().parse::<i64>().map_err(|e| format!("{x:?}: {e}")))
        .collect()
}

pub fn parse_pair(s: &str) -> Result<(i64, i64), String> {
    match ints(s, ',')?[..] {
        [a, b] => Ok((a, b)),
        _ => Err(format!("expected a,b but got {s:?}")),
    }
}

pub fn parse_triple(s: &str) -> Result<(i64, i64, i64), String> {
    match ints(s, ',')?[..] {
        [a, b, c] => Ok((a, b, c)),
        _ => Err(format!("expected a,b,c but got {s:?}")),
    }
}

pub fn parse_twist(s: &str) -> Result<(i64, i64), String> {
    match ints(s, ':')?[..] {
        [n, k] if n > 0 => Ok((n, k)),
        _ => Err(format!("expected n:k with n > 0 but got {s:?}")),
    }
}

/// Generators `a + b tau` of a modulus ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenList(pub Vec<(i64, i64)>);

pub fn parse_gens(s: &str) -> Result<GenList, String> {
    let g: Vec<(i64, i64)> = s.split(';').map(parse_pair).collect::<Result<_, _>>()?;
    Ok(GenList(g))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsers() {
        assert_eq!(parse_twist("12:5"), Ok((12, 5)));
        assert!(parse_twist("0:1").is_err());
        assert_eq!(parse_triple("5,3,5"), Ok((5, 3, 5)));
        assert_eq!(parse_gens("31,0;10,1"), Ok(GenList(vec![(31, 0), (10, 1)])));
        assert!(parse_pair("1").is_err());
    }

    #[test]
    fn cli_round_trip() {
        let cli = Cli::try_parse_from(["rayclass", "--d", "-10", "--modulus", "6", "--mode", "compare", "--twist", "12:5"]).unwrap();
        let c = cli.into_config().unwrap();
        assert_eq!(c.d, -10);
        assert_eq!(c.modulus, ModulusInput::Rational(6));
        assert_eq!(c.mode, Mode::Compare);
        assert_eq!(c.twist, Some((12, 5)));
        let cli = Cli::try_parse_from(["rayclass", "--d", "-10", "--digits", "20", "--modulus", "6"]).unwrap();
        assert!(cli.into_config().is_err());
        assert!(Cli::try_parse_from(["rayclass", "--d", "-10", "--modulus", "6", "--ideal", "6,0,6"]).is_err());
    }
}
