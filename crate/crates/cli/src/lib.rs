//! Command-line front end for `locweinstein`.
//!
//! Every subcommand reads at most one JSON document (a file path, or
//! standard input when the path is omitted or `-`) and writes one report.
//! Exit status is 0 on success, 1 on domain errors (reported as a JSON error
//! object on standard output) and 2 on usage errors. Reports are assembled
//! in memory and written only once complete.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use locweinstein::json::{self, document};
use locweinstein::loopsphere::{self, SphereRing, TwistedComplex, XAction};
use locweinstein::primes::{require_prime, PrimeError};
use locweinstein::weinstein::{self, p_handle_disks, replace_handles};
use locweinstein::{decompose, localize, AbelianGroup, Error, HomologyProfile, PrimeSet};

pub const FORMAT_ENV: &str = "LOCWEINSTEIN_FORMAT";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "locweinstein",
    version,
    about = "Exact invariants of prime-localized Weinstein subdomains"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, env = FORMAT_ENV, default_value = "json")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Input {
    /// Input JSON file; standard input when omitted or `-`.
    input: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integral, localized or field-coefficient homology of a complex.
    Homology {
        #[command(flatten)]
        input: Input,
        /// Invert these primes, e.g. `2,3`.
        #[arg(long = "P", conflicts_with = "field")]
        p: Option<String>,
        /// Coefficients in the prime field F_q.
        #[arg(long)]
        field: Option<u64>,
    },
    /// Elementary decomposition with its basis-change certificate.
    Decompose {
        #[command(flatten)]
        input: Input,
    },
    /// Classify a subdomain given by carved disks or a handle presentation.
    Classify {
        #[command(flatten)]
        input: Input,
        /// Decorate every critical handle with this prime set (for a disk
        /// list, carve the matching disks as well).
        #[arg(long = "P")]
        p: Option<String>,
    },
    /// Decide whether X_P embeds as a subdomain of X_Q.
    Embeddable {
        #[arg(long = "P")]
        p: String,
        #[arg(long = "Q")]
        q: String,
    },
    /// The chain of subdomains obtained by adding one prime at a time.
    Chain {
        /// Primes in order, e.g. `2,3,5`.
        #[arg(long, allow_hyphen_values = true)]
        primes: String,
    },
    /// Cohomology of End(T) in a degree window; T is the zero section
    /// unless an input is given.
    SphereEnd {
        #[command(flatten)]
        input: Input,
        /// Sphere dimension.
        #[arg(long)]
        n: u32,
        /// Degree window `lo,hi`.
        #[arg(long, allow_hyphen_values = true)]
        window: String,
        /// Read a twisted complex from the input instead of using the zero section.
        #[arg(long)]
        from_input: bool,
    },
    /// Zero-section action test on a twisted complex or an integer complex.
    SphereGeometric {
        #[command(flatten)]
        input: Input,
        /// Sphere dimension; required for integer-complex input.
        #[arg(long)]
        n: Option<u32>,
        /// Degree window `lo,hi`; defaults to the certified window.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
    },
}

/// A failure reported with exit status 1.
#[derive(Debug)]
enum Failure {
    Domain(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

macro_rules! domain {
    ($e:expr) => {
        $e.map_err(|e| Failure::Domain(Error::from(e)))
    };
}

impl Failure {
    fn kind(&self) -> &'static str {
        match self {
            Failure::Domain(e) => e.kind(),
            Failure::Io(_) => "io_error",
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Domain(e) => e.to_string(),
            Failure::Io(m) => m.clone(),
        }
    }
}

struct Report {
    json: Value,
    text: String,
}

/// Runs the tool on `args` (including the program name) and returns the
/// exit status.
pub fn run<I, S>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            let code = e.exit_code();
            // help and version go to stdout with status 0
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let (out, code) = match execute(&cli.command, stdin) {
        Ok(r) => match cli.format {
            Format::Json => (json::render(&document(r.json)), 0),
            Format::Text => (r.text, 0),
        },
        Err(f) => match cli.format {
            Format::Json => {
                let mut inner = Map::new();
                inner.insert("kind".into(), Value::from(f.kind()));
                inner.insert("message".into(), Value::from(f.message()));
                let mut body = Map::new();
                body.insert("error".into(), Value::Object(inner));
                (json::render(&document(Value::Object(body))), 1)
            }
            Format::Text => (format!("error ({}): {}\n", f.kind(), f.message()), 1),
        },
    };
    let sink: &mut dyn Write = if code == 0 || cli.format == Format::Json {
        stdout
    } else {
        stderr
    };
    if sink
        .write_all(out.as_bytes())
        .and_then(|_| sink.flush())
        .is_err()
    {
        return 1;
    }
    code
}

fn read_input(input: &Input, stdin: &mut dyn Read) -> Result<Value, Failure> {
    let mut text = String::new();
    match &input.input {
        Some(p) if p.as_os_str() != "-" => {
            text = std::fs::read_to_string(p)
                .map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?;
        }
        _ => {
            stdin
                .read_to_string(&mut text)
                .map_err(|e| Failure::Io(format!("standard input: {e}")))?;
        }
    }
    domain!(json::parse_document(&text))
}

fn parse_primes(s: &str) -> Result<PrimeSet, Failure> {
    domain!(s.parse::<PrimeSet>())
}

fn parse_window(s: &str) -> Result<(i64, i64), Failure> {
    let bad = || {
        Failure::Domain(Error::from(json::FormatError::Field {
            path: "--window".into(),
            message: format!("expected `lo,hi`, got {s:?}"),
        }))
    };
    let (lo, hi) = s.split_once(',').ok_or_else(bad)?;
    let lo = lo.trim().parse().map_err(|_| bad())?;
    let hi = hi.trim().parse().map_err(|_| bad())?;
    Ok((lo, hi))
}

fn execute(cmd: &Command, stdin: &mut dyn Read) -> Result<Report, Failure> {
    match cmd {
        Command::Homology { input, p, field } => {
            let c = json::complex_from_value(&read_input(input, stdin)?, "$")?;
            if let Some(q) = field {
                let ranks = localize::field_homology(&c, *q)?;
                let mut m = Map::new();
                m.insert("field".into(), Value::from(*q));
                m.insert("ranks".into(), json::ranks_to_value(&ranks));
                let mut text = String::new();
                for (k, r) in &ranks {
                    let _ = writeln!(text, "H^{k}(F_{q}) = F_{q}^{r}");
                }
                if ranks.is_empty() {
                    text.push_str("0\n");
                }
                return Ok(Report {
                    json: Value::Object(m),
                    text,
                });
            }
            let h = match p {
                Some(p) => localize::localized_homology(&c, &parse_primes(p)?)?,
                None => domain!(c.homology())?,
            };
            let mut m = Map::new();
            if let Some(p) = p {
                m.insert(
                    "localized_at".into(),
                    json::prime_set_to_value(&parse_primes(p)?),
                );
            }
            m.insert("homology".into(), json::homology_to_value(&h));
            Ok(Report {
                json: Value::Object(m),
                text: homology_text(&h),
            })
        }
        Command::Decompose { input } => {
            let c = json::complex_from_value(&read_input(input, stdin)?, "$")?;
            let s = domain!(decompose::elementary_decomposition(&c))?;
            let mut text = String::new();
            for summand in s.summands() {
                let _ = match summand {
                    decompose::Summand::Free { d } => writeln!(text, "free d={d}"),
                    decompose::Summand::Torsion { d, m } => writeln!(text, "torsion d={d} m={m}"),
                    decompose::Summand::Acyclic { d } => writeln!(text, "acyclic d={d}"),
                };
            }
            let content = domain!(s.prime_content())?;
            let _ = writeln!(text, "prime content {content}");
            Ok(Report {
                json: json::decomposition_to_value(&s)?,
                text,
            })
        }
        Command::Classify { input, p } => {
            let v = read_input(input, stdin)?;
            let extra = p.as_deref().map(parse_primes).transpose()?;
            let spec = if v.get("critical_handles").is_some() {
                let mut h = json::handles_from_value(&v, "$")?;
                if let Some(p) = &extra {
                    h = replace_handles(&h, p);
                }
                h.induced_spec()
            } else {
                let mut s = json::subdomain_from_value(&v, "$")?;
                if let Some(p) = &extra {
                    s.carved.extend(p_handle_disks(p));
                }
                s
            };
            let class = weinstein::subdomain_classify(&spec)?;
            let text = match &class {
                localize::CategoryClass::Localized(p) => format!("localized {p}\n"),
                other => format!("{}\n", other.name()),
            };
            Ok(Report {
                json: json::class_to_value(&class),
                text,
            })
        }
        Command::Embeddable { p, q } => {
            let (p, q) = (parse_primes(p)?, parse_primes(q)?);
            let ok = weinstein::embeddable(&p, &q);
            let witness = weinstein::embedding_witness(&p, &q);
            let mut m = Map::new();
            m.insert("embeddable".into(), Value::from(ok));
            m.insert(
                "witness".into(),
                witness.map(Value::from).unwrap_or(Value::Null),
            );
            let text = match witness {
                None => format!("X_{p} embeds in X_{q}\n"),
                Some(w) => format!("X_{p} does not embed in X_{q} (witness F_{w})\n"),
            };
            Ok(Report {
                json: Value::Object(m),
                text,
            })
        }
        Command::Chain { primes } => {
            let mut list = Vec::new();
            for part in primes.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let q: u64 = part
                    .parse()
                    .map_err(|_| Failure::Domain(PrimeError::NotPrime(part.to_string()).into()))?;
                if q != 0 {
                    domain!(require_prime(q))?;
                }
                list.push(q);
            }
            let chain = domain!(weinstein::lattice_chain(&list))?;
            let mut m = Map::new();
            m.insert(
                "chain".into(),
                Value::Array(chain.iter().map(|p| Value::from(p.elements())).collect()),
            );
            let text = chain.iter().map(|p| format!("X_{p}\n")).collect();
            Ok(Report {
                json: Value::Object(m),
                text,
            })
        }
        Command::SphereEnd {
            input,
            n,
            window,
            from_input,
        } => {
            let ring = domain!(SphereRing::new(*n))?;
            let window = parse_window(window)?;
            let t = if *from_input {
                json::twisted_from_value(&read_input(input, stdin)?, Some(*n), "$")?
            } else {
                TwistedComplex::zero_section(ring)
            };
            if t.ring() != ring {
                return Err(Failure::Domain(
                    loopsphere::TwistedError::RingMismatch(t.ring().n(), *n).into(),
                ));
            }
            let w = domain!(loopsphere::hom_cohomology(&t, &t, window))?;
            let mut m = Map::new();
            m.insert("n".into(), Value::from(*n));
            if let Value::Object(fields) = json::window_profile_to_value(&w) {
                m.extend(fields);
            }
            let text = format!(
                "window [{}, {}]\n{}",
                w.window.0,
                w.window.1,
                homology_text(&w.homology)
            );
            Ok(Report {
                json: Value::Object(m),
                text,
            })
        }
        Command::SphereGeometric { input, n, window } => {
            let v = read_input(input, stdin)?;
            let t = if v.get("degrees").is_some() {
                let n = n.ok_or_else(|| {
                    Failure::Domain(Error::from(json::FormatError::Field {
                        path: "--n".into(),
                        message: "required for an integer complex".into(),
                    }))
                })?;
                let c = json::complex_from_value(&v, "$")?;
                domain!(TwistedComplex::from_zcomplex(
                    &c,
                    domain!(SphereRing::new(n))?
                ))?
            } else {
                let t = json::twisted_from_value(&v, *n, "$")?;
                if let Some(n) = n {
                    if t.ring().n() != *n {
                        return Err(Failure::Domain(
                            loopsphere::TwistedError::RingMismatch(t.ring().n(), *n).into(),
                        ));
                    }
                }
                t
            };
            let window = match window {
                Some(w) => parse_window(w)?,
                None => loopsphere::certified_window(&t).unwrap_or((0, 0)),
            };
            let verdict = domain!(loopsphere::x_action_test(&t, window))?;
            let mut m = Map::new();
            m.insert("n".into(), Value::from(t.ring().n()));
            m.insert("window".into(), Value::from(vec![window.0, window.1]));
            let text = match verdict {
                XAction::Pass => {
                    m.insert("verdict".into(), Value::from("pass"));
                    format!("pass on [{}, {}]\n", window.0, window.1)
                }
                XAction::Fail { degree } => {
                    m.insert("verdict".into(), Value::from("fail"));
                    m.insert("degree".into(), Value::from(degree));
                    format!("fail in degree {degree} on [{}, {}]\n", window.0, window.1)
                }
            };
            Ok(Report {
                json: Value::Object(m),
                text,
            })
        }
    }
}

fn group_text(g: &AbelianGroup) -> String {
    let mut parts = Vec::new();
    match g.free_rank {
        0 => {}
        1 => parts.push("Z".to_string()),
        r => parts.push(format!("Z^{r}")),
    }
    parts.extend(g.torsion.iter().map(|t| format!("Z/{t}")));
    parts.join(" + ")
}

fn homology_text(h: &HomologyProfile) -> String {
    if h.is_zero() {
        return "0\n".to_string();
    }
    let lines: BTreeMap<i64, String> = h
        .groups()
        .iter()
        .map(|(&k, g)| (k, group_text(g)))
        .collect();
    lines
        .iter()
        .map(|(k, g)| format!("H^{k} = {g}\n"))
        .collect()
}
