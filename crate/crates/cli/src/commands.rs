//! Argument parsing and subcommand dispatch.

use crate::hmf1::{parse_hmf1, DocumentError, Ingested};
use crate::report::{Item, Report};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hmf_core::arith::ball::Complex;
use hmf_core::arith::Q;
use hmf_core::dictionary::{self, GaloisAction, LocalComponent};
use hmf_core::field::TotallyRealField;
use hmf_core::hecke::{gauss_sum, HeckeCharacter, ResidueCharacter};
use hmf_core::local::{half_pow_text, NonArchLocalRep};
use hmf_core::lseries::{self, DirichletSeries, TailModel};
use hmf_core::numfield::Automorphism;
use num_bigint::BigInt;
use std::fmt;
use std::path::PathBuf;

pub const DEFAULT_PREC: u32 = 128;

#[derive(Parser, Debug)]
#[command(name = "hmf", version, about = "Hilbert modular eigendata, Hecke characters and L-series")]
pub struct Cli {
    /// HMF1 document to read.
    #[arg(long = "in", global = true, value_name = "PATH")]
    pub input: Option<PathBuf>,
    /// Working precision in bits (default 128, or HMF_PREC).
    #[arg(long, global = true, value_name = "BITS")]
    pub prec: Option<u32>,
    /// Norm bound for expansions and checks.
    #[arg(long, global = true, value_name = "N")]
    pub bound: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Args, Debug, Clone)]
pub struct FieldSource {
    /// Defining polynomial, constant term first, e.g. `-1,-1,1`.
    #[arg(long, allow_hyphen_values = true, value_name = "COEFFS")]
    pub poly: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct WeightSource {
    /// Weight vector, e.g. `2,4`.
    #[arg(long, value_name = "K")]
    pub weights: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Degree, discriminant, integral basis, different and embeddings.
    FieldInfo(FieldSource),
    /// Narrow class group, optionally of a modulus.
    NarrowClass {
        #[command(flatten)]
        field: FieldSource,
        /// Rational integer generating the modulus.
        #[arg(long)]
        modulus: Option<i64>,
    },
    /// Gauss sum of the document's character, or of a character chosen by index.
    GaussSum {
        #[command(flatten)]
        field: FieldSource,
        #[arg(long)]
        modulus: Option<i64>,
        /// Position among all characters of the modulus.
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[arg(long, default_value_t = 1)]
        extension: usize,
    },
    /// Algebraicity class, infinity type and regularity.
    Classify(WeightSource),
    /// Critical points of the classical and cohomological descriptions.
    CriticalPoints(WeightSource),
    /// Local components of the attached representation.
    Attach,
    /// Galois equivariance of the twisted Satake data.
    GaloisCheck {
        /// `identity`, `conjugation` or `cyclotomic:A`.
        #[arg(long, default_value = "identity")]
        sigma: String,
        /// Claimed conjugate form; computed from the document when absent.
        #[arg(long, value_name = "PATH")]
        conjugate: Option<PathBuf>,
    },
    /// Truncated finite L-value with a certified tail bound.
    Lvalue {
        /// `RE` or `RE,IM` with rational parts.
        #[arg(long = "s", allow_hyphen_values = true)]
        s: String,
        #[arg(long, value_enum, default_value_t = Norm::Classical)]
        normalization: Norm,
    },
    /// Euler-product coefficients against the stored table.
    EulerCheck,
    /// Zeta integral of the local new vector against the local L-factor.
    ZetaCheck {
        #[arg(long = "type", value_enum)]
        kind: RepType,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<String>,
        /// Value of the unramified character at a uniformizer.
        #[arg(long, allow_hyphen_values = true)]
        chi: Option<String>,
        #[arg(long)]
        q: i64,
        #[arg(long)]
        conductor: Option<u32>,
        #[arg(long, default_value_t = 30)]
        order: usize,
    },
    /// Cohomological weight and archimedean constants.
    CohConstants {
        #[command(flatten)]
        weights: WeightSource,
        #[arg(long)]
        twisted: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Norm {
    Classical,
    Unitary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RepType {
    Unramified,
    Steinberg,
    OneRamified,
    Depthless,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    UnknownCommand(String),
    Io(String),
    Document(DocumentError),
    Domain(hmf_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::UnknownCommand(_) | CliError::Io(_) => 2,
            CliError::Document(DocumentError::Parse(_)) => 2,
            CliError::Document(DocumentError::Invariant(_)) | CliError::Domain(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(s) => write!(f, "{s}"),
            CliError::UnknownCommand(s) => write!(f, "unknown command `{s}`"),
            CliError::Io(s) => write!(f, "{s}"),
            CliError::Document(e) => write!(f, "{e}"),
            CliError::Domain(e) => write!(f, "{e}"),
        }
    }
}

impl From<hmf_core::Error> for CliError {
    fn from(e: hmf_core::Error) -> Self {
        CliError::Domain(e)
    }
}

impl From<DocumentError> for CliError {
    fn from(e: DocumentError) -> Self {
        CliError::Document(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

pub struct Context {
    pub input: Option<PathBuf>,
    pub prec: u32,
    pub bound: Option<u64>,
}

impl Context {
    fn digits(&self) -> usize {
        ((self.prec as f64 * std::f64::consts::LOG10_2) as usize).saturating_sub(2).max(6)
    }

    fn document(&self) -> Result<Ingested> {
        let path = self.input.as_ref().ok_or_else(|| CliError::Usage("this command needs --in <PATH>".into()))?;
        load(path)
    }

    fn field(&self, src: &FieldSource) -> Result<TotallyRealField> {
        match (&src.poly, &self.input) {
            (Some(p), _) => {
                let c: Vec<BigInt> = split_list(p)
                    .iter()
                    .map(|s| s.parse().map_err(|_| CliError::Usage(format!("bad polynomial coefficient `{s}`"))))
                    .collect::<Result<_>>()?;
                Ok(TotallyRealField::build(&c, None)?)
            }
            (None, Some(_)) => Ok(self.document()?.field),
            (None, None) => Ok(TotallyRealField::new(&[0, 1])?),
        }
    }

    fn weights(&self, src: &WeightSource) -> Result<Vec<i64>> {
        match &src.weights {
            Some(w) => split_list(w)
                .iter()
                .map(|s| s.parse().map_err(|_| CliError::Usage(format!("bad weight `{s}`"))))
                .collect(),
            None if self.input.is_some() => Ok(self.document()?.form.weights),
            None => Err(CliError::Usage("give --weights or --in".into())),
        }
    }
}

fn load(path: &PathBuf) -> Result<Ingested> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(parse_hmf1(&text)?)
}

fn split_list(s: &str) -> Vec<String> {
    s.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).map(String::from).collect()
}

fn rational(s: &str) -> Result<Q> {
    s.trim().parse::<Q>().map_err(|_| CliError::Usage(format!("bad rational number `{s}`")))
}

fn rational_flag(v: &Option<String>, name: &str) -> Result<Q> {
    rational(v.as_deref().ok_or_else(|| CliError::Usage(format!("this representation type needs --{name}")))?)
}

fn conductor_flag(v: Option<u32>) -> Result<u32> {
    v.ok_or_else(|| CliError::Usage("this representation type needs --conductor".into()))
}

fn ideal_item(k: &TotallyRealField, m: &hmf_core::field::Ideal) -> Item {
    Item::text(k.ideal_label(m).unwrap_or_else(|_| m.to_text()))
}

fn q_list(xs: &[Q]) -> Item {
    Item::list(xs, |x| Item::text(x.to_string()))
}

/// Runs one parsed command.
pub fn dispatch(cli: &Cli, ctx: &Context) -> Result<Report> {
    let mut r = Report::new(command_name(&cli.command));
    match &cli.command {
        Command::FieldInfo(src) => {
            let k = ctx.field(src)?;
            r.push("degree", Item::int(k.degree() as i64));
            r.push("poly", Item::text(k.poly().to_string()));
            r.push("discriminant", Item::Int(k.discriminant().clone()));
            r.push("integral_basis", Item::list(k.integral_basis(), |b| q_list(b)));
            r.push("different", Item::text(k.different().to_text()));
            r.push("embeddings", Item::list(k.embeddings(ctx.prec), |e| Item::real(&e, ctx.digits())));
        }
        Command::NarrowClass { field, modulus } => {
            let k = ctx.field(field)?;
            let g = match modulus {
                None => k.narrow_class_data()?,
                Some(m) => k.narrow_class_group(&k.rational_ideal(&Q::from_integer(BigInt::from(*m)))?)?,
            };
            r.push("h", Item::int(g.h as i64));
            r.push("h_plus", Item::int(g.h_plus as i64));
            r.push("order", Item::int(g.order() as i64));
            if let Some(v) = g.unit_norm_minus_one {
                r.push("unit_of_norm_minus_one", Item::Bool(v));
            }
            r.push("representatives", Item::list(&g.reps, |m| ideal_item(&k, m)));
        }
        Command::GaussSum { field, modulus, index, extension } => {
            let (k, chi) = match modulus {
                None if ctx.input.is_some() => {
                    let d = ctx.document()?;
                    (d.field, d.character)
                }
                None => return Err(CliError::Usage("give --modulus or --in".into())),
                Some(m) => {
                    let k = ctx.field(field)?;
                    let md = k.rational_ideal(&Q::from_integer(BigInt::from(*m)))?;
                    let all = ResidueCharacter::all(&k, &md)?;
                    let count = all.len();
                    let omega = all.into_iter().nth(*index).ok_or_else(|| {
                        CliError::Usage(format!("character index {index} out of range (modulus has {count})"))
                    })?;
                    let chi = HeckeCharacter::adelize(&k, &omega, *extension)?;
                    (k, chi)
                }
            };
            let g = gauss_sum(&k, &chi, ctx.prec)?;
            r.push("order", Item::int(chi.residue().order()));
            r.push("conductor", ideal_item(&k, chi.conductor()));
            r.push("conductor_norm", Item::text(g.conductor_norm.to_string()));
            r.push("signature", Item::list(chi.signature(), |s| Item::int(*s)));
            r.push("value", Item::complex(&g.value, ctx.digits()));
            r.push("abs_squared", Item::real(&g.value.norm_sqr(), ctx.digits()));
        }
        Command::Classify(src) => {
            let w = ctx.weights(src)?;
            let c = dictionary::classify(&w);
            let class = match c.class {
                dictionary::AlgebraicClass::Algebraic => "algebraic",
                dictionary::AlgebraicClass::HalfTwistAlgebraic => "algebraic after a half twist",
                dictionary::AlgebraicClass::NotAlgebraic => "not algebraic under any twist",
            };
            r.push("weights", Item::list(&w, |k| Item::int(*k)));
            r.push("class", Item::text(class));
            r.push("regular", Item::Bool(c.regular));
            match &c.infinity_type {
                Some(t) => r.push("infinity_type", Item::list(t, |(p, q)| Item::list([*p, *q], Item::int))),
                None => r.push("infinity_type", Item::text("none")),
            }
        }
        Command::CriticalPoints(src) => {
            let w = ctx.weights(src)?;
            let c = lseries::critical_points(&w)?;
            r.push("k0", Item::int(c.k0));
            r.push("classical", Item::list(&c.classical, |m| Item::int(*m)));
            r.push("cohomological", q_list(&c.cohomological));
            r.push("shift", Item::text(Q::new(BigInt::from(c.k0), BigInt::from(2)).to_string()));
            if c.classical.is_empty() {
                r.warn("no critical points");
            }
        }
        Command::Attach => {
            let d = ctx.document()?;
            let (k, f) = (&d.field, &d.form);
            let rep = f.attach_representation(k)?;
            r.push("arch", Item::list(&rep.arch, |a| Item::text(format!("D_{} t={}", a.l, a.t))));
            r.push("conductor", ideal_item(k, &rep.conductor));
            r.push("central_character_order", Item::int(rep.central.residue().order()));
            let bound = ctx.bound.unwrap_or(f.bound);
            let mut local = Vec::new();
            for p in k.primes_up_to_norm(bound)? {
                let Some(c) = rep.local.get(&(p.p, p.index)) else { continue };
                let mut rec = vec![("prime".to_string(), Item::text(p.label())), ("norm".to_string(), Item::int(p.norm()))];
                match c {
                    LocalComponent::Unramified { trace, det, .. } => {
                        rec.push(("type".into(), Item::text("unramified")));
                        rec.push(("trace".into(), Item::text(half_pow_text(trace))));
                        rec.push(("det".into(), Item::text(det.to_string())));
                    }
                    LocalComponent::Ramified { conductor_exponent, .. } => {
                        rec.push(("type".into(), Item::text("ramified")));
                        rec.push(("conductor_exponent".into(), Item::int(*conductor_exponent)));
                    }
                }
                local.push(Item::Record(rec));
            }
            if local.is_empty() {
                r.warn("no stored prime coefficients within the bound");
            }
            r.push("local", Item::List(local));
        }
        Command::GaloisCheck { sigma, conjugate } => {
            let d = ctx.document()?;
            let (k, f) = (&d.field, &d.form);
            let field = &f.coefficients.field;
            let aut = match sigma.as_str() {
                "identity" => Automorphism::identity(field),
                "conjugation" => Automorphism::quadratic_conjugation(field)?,
                s => match s.strip_prefix("cyclotomic:").and_then(|a| a.parse().ok()) {
                    Some(a) => Automorphism::cyclotomic(field, a)?,
                    None => return Err(CliError::Usage(format!("unknown automorphism `{s}`"))),
                },
            };
            let g = GaloisAction::identity(field, k.degree());
            let g = GaloisAction::new(aut, g.place_permutation)?;
            let claimed = conjugate.as_ref().map(load).transpose()?;
            let bound = ctx.bound.unwrap_or(f.bound);
            let rep = f.equivariance_check(k, &g, claimed.as_ref().map(|c| &c.form), bound)?;
            r.push("sigma", Item::text(sigma.clone()));
            r.push("holds", Item::Bool(rep.holds));
            r.push("checked", Item::int(rep.checked as i64));
            if let Some(p) = rep.offending {
                r.push("offending_prime", Item::text(p));
            }
        }
        Command::Lvalue { s, normalization } => {
            let d = ctx.document()?;
            let (k, f) = (&d.field, &d.form);
            let parts = split_list(s);
            let (re, im) = match parts.as_slice() {
                [re] => (rational(re)?, Q::from_integer(BigInt::from(0))),
                [re, im] => (rational(re)?, rational(im)?),
                _ => return Err(CliError::Usage(format!("bad point `{s}`"))),
            };
            let bound = ctx.bound.unwrap_or(f.bound);
            let series = match normalization {
                Norm::Classical => DirichletSeries::ingest(k, f)?,
                Norm::Unitary => {
                    let rep = f.attach_representation(k)?;
                    lseries::unitary_from_representation(k, &rep, &f.coefficients, bound)?
                }
            };
            let at = Complex::from_q(&re, &im, ctx.prec);
            let v = lseries::evaluate_finite_l(&series, &at, bound, ctx.prec)?;
            r.push("s", Item::text(format!("{re} + {im}*i")));
            r.push("abscissa", Item::text(TailModel::default().abscissa(&series).to_string()));
            r.push("bound", Item::int(v.bound));
            r.push("terms", Item::int(v.terms as i64));
            r.push("partial_sum", Item::complex(&v.partial, ctx.digits()));
            r.push("tail_bound", Item::rational_bound(&v.tail_bound));
            r.push("value", Item::complex(&v.value, ctx.digits()));
        }
        Command::EulerCheck => {
            let d = ctx.document()?;
            let (k, f) = (&d.field, &d.form);
            let bound = ctx.bound.unwrap_or(f.bound).min(f.bound);
            let s = lseries::coefficients_from_euler(k, f, bound)?;
            let mut mismatches = Vec::new();
            let mut compared = 0i64;
            for t in &s.terms {
                if let Some(c) = f.coefficient(&t.ideal) {
                    compared += 1;
                    if *c != t.value {
                        mismatches.push(Item::text(format!("{}: stored {c}, Euler {}", ideal_label(k, &t.ideal), t.value)));
                    }
                }
            }
            r.push("bound", Item::int(bound));
            r.push("compared", Item::int(compared));
            r.push("holds", Item::Bool(mismatches.is_empty()));
            r.push("mismatches", Item::List(mismatches));
        }
        Command::ZetaCheck { kind, alpha, beta, chi, q, conductor, order } => {
            let rep = match kind {
                RepType::Unramified => {
                    NonArchLocalRep::unramified(rational_flag(alpha, "alpha")?, rational_flag(beta, "beta")?, *q)?
                }
                RepType::Steinberg => NonArchLocalRep::steinberg(rational_flag(chi, "chi")?, *q)?,
                RepType::OneRamified => {
                    NonArchLocalRep::one_ramified(rational_flag(chi, "chi")?, *q, conductor_flag(*conductor)?)?
                }
                RepType::Depthless => {
                    let c = chi.as_deref().map(rational).transpose()?;
                    NonArchLocalRep::depthless(c, *q, conductor_flag(*conductor)?)?
                }
            };
            let one = Q::from_integer(BigInt::from(1));
            let poly = rep.local_l_polynomial(&one);
            let series = rep.zeta_newvector_series(*order, &one);
            let holds = rep.zeta_identity_holds(*order, &one);
            r.push("conductor_exponent", Item::int(rep.conductor_exponent));
            r.push("l_polynomial", Item::list(&poly, |c| Item::text(half_pow_text(c))));
            r.push("zeta_series", Item::text(series.to_text()));
            r.push("holds", Item::Bool(holds));
            let verdict = if holds {
                format!("identity holds to order {order}")
            } else {
                format!("identity fails below order {order}")
            };
            r.push("verdict", Item::text(verdict));
        }
        Command::CohConstants { weights, twisted } => {
            let w = ctx.weights(weights)?;
            let mu = dictionary::cohomological_weight(&w, *twisted)?;
            let c = dictionary::archimedean_constants(&mu)?;
            r.push("mu", Item::list(&mu.pairs, |(a, b)| Item::list([*a, *b], Item::int)));
            r.push("purity_weight", Item::int(mu.w));
            r.push("d_inf", Item::int(c.d_inf));
            r.push("c", Item::Int(c.c));
        }
    }
    Ok(r)
}

fn ideal_label(k: &TotallyRealField, m: &hmf_core::field::Ideal) -> String {
    k.ideal_label(m).unwrap_or_else(|_| m.to_text())
}

pub fn command_name(c: &Command) -> &'static str {
    match c {
        Command::FieldInfo(_) => "field-info",
        Command::NarrowClass { .. } => "narrow-class",
        Command::GaussSum { .. } => "gauss-sum",
        Command::Classify(_) => "classify",
        Command::CriticalPoints(_) => "critical-points",
        Command::Attach => "attach",
        Command::GaloisCheck { .. } => "galois-check",
        Command::Lvalue { .. } => "lvalue",
        Command::EulerCheck => "euler-check",
        Command::ZetaCheck { .. } => "zeta-check",
        Command::CohConstants { .. } => "coh-constants",
    }
}
