//! Command-line front end. Every command writes one JSON document to
//! standard output; diagnostics go to standard error.
//!
//! Exit codes: 0 success, 1 a check evaluated to false, 2 usage or input
//! error, 3 undecided within the factorization budget.

use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::genseq::{
    binet_general, d_seq, dtype_closed_form, dtype_exponents, dtype_seq, ratio_limit, relation_prefix,
    relation_seq, DTypeSpec, GroupOracle, IntegersAdditive, LinearRelation, QuadExt, RatioLimit,
    RationalsMultiplicative, Side, UnitsMod,
};
use crate::identities::{
    check_identity, f5_factor, in_ideal_m, in_ring_a, m_element, verify_range, CheckResult, IdentityId, MTerm,
};
use crate::num::{dec, parse_integer, parse_rational, Integer, Rational, SeqIndex};
use crate::quatalg::{
    fib_quaternion, lucas_quaternion, norm_relation_check, quat_add, quat_conj, quat_mul, quat_norm, quat_sub,
    quat_trace, AlgebraParams, NormRelation, Quaternion,
};
use crate::seqcore::{fib, fib_pair, gen_fib_lucas, lucas};
use crate::splitcert::{
    hilbert_report, search_point, verify_point, Certificate, ConicSpec, FactorBudget, FamilyId, HilbertReport,
    RationalPoint,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNDECIDED: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "fibalg",
    version,
    about = "Exact Fibonacci/Lucas arithmetic, identities, quaternion algebras and split certificates"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fibonacci, Lucas and generalized Fibonacci-Lucas numbers
    #[command(subcommand)]
    Seq(SeqCmd),
    /// Check Fibonacci/Lucas identities
    #[command(subcommand)]
    Identity(IdentityCmd),
    /// The ring A and the ideal M inside 5Z
    #[command(subcommand)]
    Ring(RingCmd),
    /// Quaternion arithmetic in H(alpha, beta)
    #[command(subcommand)]
    Quat(QuatCmd),
    /// Split certificates and splitting decisions for H(a, b)
    #[command(subcommand)]
    Cert(CertCmd),
    /// Sequences over x * y = A x + B y
    #[command(subcommand)]
    Genseq(GenseqCmd),
    /// d-type sequences in abelian groups
    #[command(subcommand)]
    Dtype(DtypeCmd),
}

#[derive(Subcommand, Debug)]
enum SeqCmd {
    /// f(N)
    Fib {
        #[arg(allow_negative_numbers = true)]
        n: i64,
    },
    /// l(N)
    Lucas {
        #[arg(allow_negative_numbers = true)]
        n: i64,
    },
    /// g(N) = P f(N-1) + Q l(N)
    Gen {
        #[arg(allow_hyphen_values = true)]
        p: String,
        #[arg(allow_hyphen_values = true)]
        q: String,
        n: i64,
    },
    /// (f(N), f(N+1)) by fast doubling
    Pair { n: i64 },
}

#[derive(Subcommand, Debug)]
enum IdentityCmd {
    /// Evaluate both sides of one identity at N
    Check {
        id: String,
        #[arg(allow_negative_numbers = true)]
        n: i64,
    },
    /// Check one identity on every n in [LO, HI]
    Range {
        id: String,
        #[arg(allow_negative_numbers = true)]
        lo: i64,
        #[arg(allow_negative_numbers = true)]
        hi: i64,
        /// Include wall-clock milliseconds (output is then not reproducible)
        #[arg(long)]
        timing: bool,
    },
    /// List identity tags with their domains
    List,
}

#[derive(Subcommand, Debug)]
enum RingCmd {
    /// Membership of X in A and in M
    Member {
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    /// k with f(5N) = 5k
    F5 { n: u64 },
    /// Sum of M-terms given as p:q:n (put `--` before a term with negative p)
    MElement {
        #[arg(required = true)]
        terms: Vec<String>,
        /// Use the literal index 5n instead of 5n+1
        #[arg(long)]
        as_printed: bool,
    },
}

#[derive(Args, Debug, Clone)]
struct AlgebraArgs {
    /// First structure constant
    #[arg(long, default_value = "-1", allow_hyphen_values = true)]
    alpha: String,
    /// Second structure constant
    #[arg(long, default_value = "-1", allow_hyphen_values = true)]
    beta: String,
}

#[derive(Subcommand, Debug)]
enum QuatCmd {
    /// X Y, quaternions written c0,c1,c2,c3
    Mul {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
        #[command(flatten)]
        alg: AlgebraArgs,
    },
    /// X + Y
    Add {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
        #[command(flatten)]
        alg: AlgebraArgs,
    },
    /// X - Y
    Sub {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
        #[command(flatten)]
        alg: AlgebraArgs,
    },
    /// Conjugate of X
    Conj {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[command(flatten)]
        alg: AlgebraArgs,
    },
    /// Reduced trace of X
    Trace {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[command(flatten)]
        alg: AlgebraArgs,
    },
    /// Reduced norm of X
    Norm {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[command(flatten)]
        alg: AlgebraArgs,
    },
    /// Fibonacci quaternion at N
    Fibq {
        n: i64,
        #[command(flatten)]
        alg: AlgebraArgs,
    },
    /// Lucas quaternion at N
    Lucasq {
        n: i64,
        #[command(flatten)]
        alg: AlgebraArgs,
    },
    /// Check a norm relation (P35_1 or P35_3) at N
    Relation { which: String, n: i64 },
}

#[derive(Subcommand, Debug)]
enum CertCmd {
    /// Certificate of family K (1-7, 8, 8a, 8b, 9) at N
    Family {
        k: String,
        #[arg(allow_negative_numbers = true)]
        n: i64,
        /// Require every point coordinate to be nonzero
        #[arg(long)]
        strict: bool,
    },
    /// Check a X^2 + b Y^2 = Z^2
    Verify {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
        #[arg(allow_hyphen_values = true)]
        z: String,
        #[arg(long)]
        strict: bool,
    },
    /// Brute-force search for a point of height at most --height
    Search {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[arg(long, default_value_t = 100)]
        height: u64,
    },
    /// Decide split or division from local Hilbert symbols
    Decide {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        /// Pollard rho iterations allowed per factorization
        #[arg(long)]
        budget: Option<u64>,
    },
}

#[derive(Args, Debug, Clone)]
struct RelationArgs {
    /// Coefficient A
    #[arg(allow_hyphen_values = true)]
    a: String,
    /// Coefficient B
    #[arg(allow_hyphen_values = true)]
    b: String,
    /// phi(0)
    #[arg(allow_hyphen_values = true)]
    phi0: String,
    /// phi(1)
    #[arg(allow_hyphen_values = true)]
    phi1: String,
}

#[derive(Subcommand, Debug)]
enum GenseqCmd {
    /// phi(N) by iteration
    Iterate {
        #[command(flatten)]
        rel: RelationArgs,
        n: u64,
        #[arg(long, default_value = "left", value_parser = parse_side)]
        side: Side,
        /// Print phi(0..=N)
        #[arg(long)]
        prefix: bool,
    },
    /// phi(N) from the closed form, compared with iteration
    Binet {
        #[command(flatten)]
        rel: RelationArgs,
        n: u64,
    },
    /// Dominant root against phi(201)/phi(200)
    Limit {
        #[command(flatten)]
        rel: RelationArgs,
    },
}

#[derive(Args, Debug, Clone)]
struct DtypeArgs {
    /// integers-additive | rationals-multiplicative | units-mod:M
    group: String,
    #[arg(allow_hyphen_values = true)]
    g0: String,
    #[arg(allow_hyphen_values = true)]
    g1: String,
    n: u64,
    /// Recurrence a,b,alpha,beta
    #[arg(long, default_value = "1,1,0,1", allow_hyphen_values = true)]
    spec: String,
    #[arg(long, default_value = "left", value_parser = parse_side)]
    side: Side,
}

#[derive(Subcommand, Debug)]
enum DtypeCmd {
    /// phi(N) by iteration
    Iterate {
        #[command(flatten)]
        args: DtypeArgs,
        /// Print phi(0..=N)
        #[arg(long)]
        prefix: bool,
    },
    /// g1^d(N) g0^d(N-1), compared with iteration
    Closed {
        #[command(flatten)]
        args: DtypeArgs,
    },
    /// d(N) of the exponent recurrence, N >= -1
    D {
        #[arg(allow_negative_numbers = true)]
        n: i64,
        #[arg(long, default_value = "1,1,0,1", allow_hyphen_values = true)]
        spec: String,
    },
}

fn parse_side(s: &str) -> std::result::Result<Side, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// JSON body and exit code of a finished command.
struct Outcome {
    body: String,
    code: i32,
}

fn emit<T: Serialize>(v: &T, passed: bool) -> Result<Outcome> {
    let body = serde_json::to_string(v).expect("output types serialize");
    Ok(Outcome {
        body,
        code: if passed { EXIT_OK } else { EXIT_FAILED },
    })
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli.command) {
        Ok(o) => {
            let _ = writeln!(out, "{}", o.body);
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Seq(c) => seq(c),
        Command::Identity(c) => identity(c),
        Command::Ring(c) => ring(c),
        Command::Quat(c) => quat(c),
        Command::Cert(c) => cert(c),
        Command::Genseq(c) => genseq(c),
        Command::Dtype(c) => dtype(c),
    }
}

#[derive(Serialize)]
struct Value {
    n: i64,
    #[serde(with = "dec")]
    value: Integer,
}

fn seq(cmd: SeqCmd) -> Result<Outcome> {
    match cmd {
        SeqCmd::Fib { n } => emit(&Value { n, value: fib(SeqIndex::new(n)?) }, true),
        SeqCmd::Lucas { n } => emit(&Value { n, value: lucas(SeqIndex::new(n)?) }, true),
        SeqCmd::Gen { p, q, n } => {
            #[derive(Serialize)]
            struct Gen {
                #[serde(with = "dec")]
                p: Integer,
                #[serde(with = "dec")]
                q: Integer,
                n: i64,
                #[serde(with = "dec")]
                value: Integer,
            }
            let (p, q) = (parse_integer(&p)?, parse_integer(&q)?);
            let value = gen_fib_lucas(&p, &q, SeqIndex::new(n)?)?;
            emit(&Gen { p, q, n, value }, true)
        }
        SeqCmd::Pair { n } => {
            #[derive(Serialize)]
            struct Pair {
                n: i64,
                #[serde(with = "dec")]
                f_n: Integer,
                #[serde(with = "dec")]
                f_next: Integer,
            }
            let (f_n, f_next) = fib_pair(SeqIndex::new(n)?)?;
            emit(&Pair { n, f_n, f_next }, true)
        }
    }
}

fn identity(cmd: IdentityCmd) -> Result<Outcome> {
    match cmd {
        IdentityCmd::Check { id, n } => {
            #[derive(Serialize)]
            struct Checked {
                identity: IdentityId,
                #[serde(flatten)]
                result: CheckResult,
            }
            let identity: IdentityId = id.parse()?;
            let result = check_identity(identity, n)?;
            let holds = result.holds;
            emit(&Checked { identity, result }, holds)
        }
        IdentityCmd::Range { id, lo, hi, timing } => {
            let report = verify_range(id.parse()?, lo, hi)?;
            let report = if timing { report } else { report.without_timing() };
            emit(&report, report.passed())
        }
        IdentityCmd::List => {
            #[derive(Serialize)]
            struct Entry {
                identity: IdentityId,
                min_n: i64,
                max_n: i64,
            }
            let list: Vec<Entry> = IdentityId::VALID
                .iter()
                .map(|&identity| Entry {
                    identity,
                    min_n: identity.domain_min(),
                    max_n: identity.domain_max(),
                })
                .collect();
            emit(&list, true)
        }
    }
}

fn ring(cmd: RingCmd) -> Result<Outcome> {
    match cmd {
        RingCmd::Member { x } => {
            #[derive(Serialize)]
            struct Member {
                #[serde(with = "dec")]
                x: Integer,
                in_ring_a: bool,
                in_ideal_m: bool,
            }
            let x = parse_integer(&x)?;
            let (in_ring_a, in_ideal_m) = (in_ring_a(&x), in_ideal_m(&x));
            emit(&Member { x, in_ring_a, in_ideal_m }, true)
        }
        RingCmd::F5 { n } => {
            #[derive(Serialize)]
            struct F5 {
                n: u64,
                #[serde(with = "dec")]
                f_5n: Integer,
                #[serde(with = "dec")]
                k: Integer,
            }
            let k = f5_factor(n)?;
            emit(&F5 { n, f_5n: &k * 5, k }, true)
        }
        RingCmd::MElement { terms, as_printed } => {
            #[derive(Serialize)]
            struct Element {
                terms: Vec<MTerm>,
                as_printed: bool,
                #[serde(with = "dec")]
                value: Integer,
                in_ideal_m: bool,
            }
            let terms: Vec<MTerm> = terms.iter().map(|t| t.parse()).collect::<Result<_>>()?;
            let value = if as_printed {
                if terms.is_empty() {
                    return Err(Error::EmptyTerms);
                }
                terms
                    .iter()
                    .try_fold(Integer::from(0), |acc, t| Ok::<_, Error>(acc + t.value_as_printed()?))?
            } else {
                m_element(&terms)?
            };
            let member = in_ideal_m(&value);
            emit(
                &Element {
                    terms,
                    as_printed,
                    value,
                    in_ideal_m: member,
                },
                member,
            )
        }
    }
}

fn algebra(args: &AlgebraArgs) -> Result<AlgebraParams> {
    AlgebraParams::new(parse_rational(&args.alpha)?, parse_rational(&args.beta)?)
}

fn quaternion(s: &str, params: &AlgebraParams) -> Result<Quaternion> {
    let parts: Vec<Rational> = s.split(',').map(parse_rational).collect::<Result<_>>()?;
    let coeffs: [Rational; 4] = parts.try_into().map_err(|_| Error::Parse {
        input: s.to_string(),
        expected: "a quaternion `c0,c1,c2,c3`",
    })?;
    Ok(Quaternion::new(coeffs, params.clone()))
}

#[derive(Serialize)]
struct Scalar {
    quaternion: Quaternion,
    #[serde(with = "dec::rational")]
    value: Rational,
}

fn quat(cmd: QuatCmd) -> Result<Outcome> {
    let binary = |x: &str, y: &str, alg: &AlgebraArgs, f: fn(&Quaternion, &Quaternion) -> Result<Quaternion>| {
        let p = algebra(alg)?;
        emit(&f(&quaternion(x, &p)?, &quaternion(y, &p)?)?, true)
    };
    match cmd {
        QuatCmd::Mul { x, y, alg } => binary(&x, &y, &alg, quat_mul),
        QuatCmd::Add { x, y, alg } => binary(&x, &y, &alg, quat_add),
        QuatCmd::Sub { x, y, alg } => binary(&x, &y, &alg, quat_sub),
        QuatCmd::Conj { x, alg } => emit(&quat_conj(&quaternion(&x, &algebra(&alg)?)?), true),
        QuatCmd::Trace { x, alg } => {
            let q = quaternion(&x, &algebra(&alg)?)?;
            let value = quat_trace(&q);
            emit(&Scalar { quaternion: q, value }, true)
        }
        QuatCmd::Norm { x, alg } => {
            let q = quaternion(&x, &algebra(&alg)?)?;
            let value = quat_norm(&q);
            emit(&Scalar { quaternion: q, value }, true)
        }
        QuatCmd::Fibq { n, alg } => emit(&fib_quaternion(SeqIndex::new(n)?, &algebra(&alg)?)?, true),
        QuatCmd::Lucasq { n, alg } => emit(&lucas_quaternion(SeqIndex::new(n)?, &algebra(&alg)?)?, true),
        QuatCmd::Relation { which, n } => {
            #[derive(Serialize)]
            struct Rel {
                relation: String,
                #[serde(flatten)]
                result: CheckResult,
            }
            let rel: NormRelation = which.parse()?;
            let result = norm_relation_check(SeqIndex::new(n)?, rel)?;
            let holds = result.holds;
            emit(
                &Rel {
                    relation: which.to_ascii_uppercase(),
                    result,
                },
                holds,
            )
        }
    }
}

fn conic(a: &str, b: &str) -> Result<ConicSpec> {
    ConicSpec::new(parse_rational(a)?, parse_rational(b)?)
}

fn cert(cmd: CertCmd) -> Result<Outcome> {
    match cmd {
        CertCmd::Family { k, n, strict } => {
            let n = SeqIndex::new(n)?;
            if k.trim() == "8" {
                let both = [
                    Certificate::build(FamilyId::F8a, n, strict)?,
                    Certificate::build(FamilyId::F8b, n, strict)?,
                ];
                let ok = both.iter().all(|c| c.verified);
                return emit(&both, ok);
            }
            let c = Certificate::build(k.parse()?, n, strict)?;
            let ok = c.verified;
            emit(&c, ok)
        }
        CertCmd::Verify { a, b, x, y, z, strict } => {
            #[derive(Serialize)]
            struct Verified {
                #[serde(with = "dec::rational")]
                a: Rational,
                #[serde(with = "dec::rational")]
                b: Rational,
                #[serde(with = "dec::rational_vec")]
                point: Vec<Rational>,
                verified: bool,
                strict: bool,
            }
            let spec = conic(&a, &b)?;
            let coords = [parse_rational(&x)?, parse_rational(&y)?, parse_rational(&z)?];
            let [x, y, z] = coords.clone();
            // the all-zero triple is not a point; it simply fails verification
            let verified = RationalPoint::new(x, y, z).is_ok_and(|p| verify_point(&spec, &p, strict));
            emit(
                &Verified {
                    a: spec.a().clone(),
                    b: spec.b().clone(),
                    point: coords.to_vec(),
                    verified,
                    strict,
                },
                verified,
            )
        }
        CertCmd::Search { a, b, height } => {
            #[derive(Serialize)]
            struct Searched {
                #[serde(with = "dec::rational")]
                a: Rational,
                #[serde(with = "dec::rational")]
                b: Rational,
                height: u64,
                point: Option<RationalPoint>,
            }
            let spec = conic(&a, &b)?;
            let point = search_point(&spec, height)?;
            emit(
                &Searched {
                    a: spec.a().clone(),
                    b: spec.b().clone(),
                    height,
                    point,
                },
                true,
            )
        }
        CertCmd::Decide { a, b, budget } => {
            #[derive(Serialize)]
            struct Decided {
                #[serde(with = "dec::rational")]
                a: Rational,
                #[serde(with = "dec::rational")]
                b: Rational,
                #[serde(flatten)]
                report: HilbertReport,
            }
            #[derive(Serialize)]
            struct Undecided {
                #[serde(with = "dec::rational")]
                a: Rational,
                #[serde(with = "dec::rational")]
                b: Rational,
                verdict: &'static str,
                unfactored: Vec<String>,
            }
            let spec = conic(&a, &b)?;
            let budget = budget.map_or_else(FactorBudget::default, FactorBudget::with_rho_iterations);
            match hilbert_report(&spec, budget) {
                Ok(report) => emit(
                    &Decided {
                        a: spec.a().clone(),
                        b: spec.b().clone(),
                        report,
                    },
                    true,
                ),
                Err(Error::Undecided(what)) => {
                    let body = Undecided {
                        a: spec.a().clone(),
                        b: spec.b().clone(),
                        verdict: "undecided",
                        unfactored: what.split(", ").map(String::from).collect(),
                    };
                    let mut o = emit(&body, true)?;
                    o.code = EXIT_UNDECIDED;
                    Ok(o)
                }
                Err(e) => Err(e),
            }
        }
    }
}

fn relation(args: &RelationArgs) -> Result<(LinearRelation, Rational, Rational)> {
    Ok((
        LinearRelation::new(parse_rational(&args.a)?, parse_rational(&args.b)?),
        parse_rational(&args.phi0)?,
        parse_rational(&args.phi1)?,
    ))
}

fn genseq(cmd: GenseqCmd) -> Result<Outcome> {
    match cmd {
        GenseqCmd::Iterate { rel, n, side, prefix } => {
            let (r, a0, b1) = relation(&rel)?;
            if prefix {
                #[derive(Serialize)]
                struct Prefix {
                    side: Side,
                    #[serde(with = "dec::rational_vec")]
                    values: Vec<Rational>,
                }
                let values = relation_prefix(&r, &a0, &b1, side, n)?;
                return emit(&Prefix { side, values }, true);
            }
            #[derive(Serialize)]
            struct Term {
                side: Side,
                n: u64,
                #[serde(with = "dec::rational")]
                value: Rational,
            }
            let value = relation_seq(&r, &a0, &b1, side, n)?;
            emit(&Term { side, n, value }, true)
        }
        GenseqCmd::Binet { rel, n } => {
            #[derive(Serialize)]
            struct Binet {
                n: u64,
                closed: QuadExt,
                #[serde(with = "dec::rational")]
                iterated: Rational,
                agrees: bool,
            }
            let (r, a0, b1) = relation(&rel)?;
            let closed = binet_general(&r, &a0, &b1, n)?;
            let iterated = relation_seq(&r, &a0, &b1, Side::Left, n)?;
            let agrees = closed.value_eq(&QuadExt::rational(iterated.clone(), &closed.delta));
            emit(
                &Binet {
                    n,
                    closed,
                    iterated,
                    agrees,
                },
                agrees,
            )
        }
        GenseqCmd::Limit { rel } => {
            let (r, a0, b1) = relation(&rel)?;
            let lim: RatioLimit = ratio_limit(&r, &a0, &b1)?;
            emit(&lim, true)
        }
    }
}

fn parse_dtype_spec(s: &str) -> Result<DTypeSpec> {
    let parts: Vec<Integer> = s.split(',').map(parse_integer).collect::<Result<_>>()?;
    let [a, b, alpha, beta]: [Integer; 4] = parts.try_into().map_err(|_| Error::Parse {
        input: s.to_string(),
        expected: "a recurrence `a,b,alpha,beta`",
    })?;
    Ok(DTypeSpec { a, b, alpha, beta })
}

enum Group {
    Integers(IntegersAdditive),
    Rationals(RationalsMultiplicative),
    Units(UnitsMod),
}

fn parse_group(s: &str) -> Result<Group> {
    match s {
        "integers-additive" => Ok(Group::Integers(IntegersAdditive)),
        "rationals-multiplicative" => Ok(Group::Rationals(RationalsMultiplicative)),
        _ => match s.strip_prefix("units-mod:") {
            Some(m) => Ok(Group::Units(UnitsMod::new(parse_integer(m)?)?)),
            None => Err(Error::UnknownId(s.to_string())),
        },
    }
}

fn dtype(cmd: DtypeCmd) -> Result<Outcome> {
    match cmd {
        DtypeCmd::D { n, spec } => {
            let spec = parse_dtype_spec(&spec)?;
            emit(&Value { n, value: d_seq(&spec, SeqIndex::new(n)?)? }, true)
        }
        DtypeCmd::Iterate { args, prefix } => with_group(&args, |g, a| dtype_iterate(g, a, prefix)),
        DtypeCmd::Closed { args } => with_group(&args, dtype_closed),
    }
}

fn with_group(
    args: &DtypeArgs,
    run: impl Fn(&dyn DynGroup, &DtypeArgs) -> Result<Outcome>,
) -> Result<Outcome> {
    match parse_group(&args.group)? {
        Group::Integers(g) => run(&g, args),
        Group::Rationals(g) => run(&g, args),
        Group::Units(g) => run(&g, args),
    }
}

/// Object-safe view of a group for the d-type commands: elements cross the
/// boundary as canonical strings.
trait DynGroup {
    fn name(&self) -> String;
    fn iterate(&self, g0: &str, g1: &str, spec: &DTypeSpec, side: Side, n: u64) -> Result<String>;
    fn closed(&self, g0: &str, g1: &str, spec: &DTypeSpec, n: u64) -> Result<String>;
    fn same(&self, x: &str, y: &str) -> Result<bool>;
}

impl<G: GroupOracle> DynGroup for G {
    fn name(&self) -> String {
        GroupOracle::name(self)
    }

    fn iterate(&self, g0: &str, g1: &str, spec: &DTypeSpec, side: Side, n: u64) -> Result<String> {
        let (g0, g1) = (self.parse(g0)?, self.parse(g1)?);
        Ok(self.render(&dtype_seq(self, &g0, &g1, spec, side, n)?))
    }

    fn closed(&self, g0: &str, g1: &str, spec: &DTypeSpec, n: u64) -> Result<String> {
        let (g0, g1) = (self.parse(g0)?, self.parse(g1)?);
        Ok(self.render(&dtype_closed_form(self, &g0, &g1, spec, n)?))
    }

    fn same(&self, x: &str, y: &str) -> Result<bool> {
        Ok(GroupOracle::eq(self, &self.parse(x)?, &self.parse(y)?))
    }
}

fn dtype_iterate(g: &dyn DynGroup, args: &DtypeArgs, prefix: bool) -> Result<Outcome> {
    let spec = parse_dtype_spec(&args.spec)?;
    if prefix {
        #[derive(Serialize)]
        struct Prefix {
            group: String,
            side: Side,
            values: Vec<String>,
        }
        let values = (0..=args.n)
            .map(|k| g.iterate(&args.g0, &args.g1, &spec, args.side, k))
            .collect::<Result<_>>()?;
        return emit(
            &Prefix {
                group: g.name(),
                side: args.side,
                values,
            },
            true,
        );
    }
    #[derive(Serialize)]
    struct Term {
        group: String,
        side: Side,
        n: u64,
        value: String,
    }
    let value = g.iterate(&args.g0, &args.g1, &spec, args.side, args.n)?;
    emit(
        &Term {
            group: g.name(),
            side: args.side,
            n: args.n,
            value,
        },
        true,
    )
}

fn dtype_closed(g: &dyn DynGroup, args: &DtypeArgs) -> Result<Outcome> {
    #[derive(Serialize)]
    struct Closed {
        group: String,
        side: Side,
        n: u64,
        #[serde(with = "dec")]
        d_n: Integer,
        #[serde(with = "dec")]
        d_prev: Integer,
        closed: String,
        iterated: String,
        agrees: bool,
    }
    let spec = parse_dtype_spec(&args.spec)?;
    let (d_n, d_prev) = dtype_exponents(&spec, args.n)?;
    let closed = g.closed(&args.g0, &args.g1, &spec, args.n)?;
    let iterated = g.iterate(&args.g0, &args.g1, &spec, args.side, args.n)?;
    let agrees = g.same(&closed, &iterated)?;
    emit(
        &Closed {
            group: g.name(),
            side: args.side,
            n: args.n,
            d_n,
            d_prev,
            closed,
            iterated,
            agrees,
        },
        agrees,
    )
}

/// One invocation per leaf command, used by tests to check that every
/// command is wired to the library.
pub const EXAMPLES: &[&[&str]] = &[
    &["seq", "fib", "10"],
    &["seq", "lucas", "-5"],
    &["seq", "gen", "1", "-2", "7"],
    &["seq", "pair", "30"],
    &["identity", "check", "P21_IX", "4"],
    &["identity", "range", "P21_III", "0", "0"],
    &["identity", "list"],
    &["ring", "member", "-35"],
    &["ring", "f5", "3"],
    &["ring", "m-element", "1:1:1", "2:-3:2"],
    &["quat", "mul", "1,2,3,4", "5,6,7,8"],
    &["quat", "add", "1,2,3,4", "5,6,7,8", "--alpha", "2", "--beta", "3"],
    &["quat", "sub", "1,2,3,4", "1/2,0,0,0"],
    &["quat", "conj", "1,2,3,4"],
    &["quat", "trace", "1,2,3,4"],
    &["quat", "norm", "1,2,3,4"],
    &["quat", "fibq", "5"],
    &["quat", "lucasq", "5"],
    &["quat", "relation", "P35_1", "6"],
    &["cert", "family", "4", "2"],
    &["cert", "verify", "5", "-1", "1", "1", "2", "--strict"],
    &["cert", "search", "5", "-1", "--height", "3"],
    &["cert", "decide", "-1", "-1"],
    &["genseq", "iterate", "1", "1", "0", "1", "10"],
    &["genseq", "binet", "2", "1", "0", "1", "12"],
    &["genseq", "limit", "1", "1", "0", "1"],
    &["dtype", "iterate", "units-mod:11", "2", "3", "5"],
    &["dtype", "closed", "units-mod:11", "2", "3", "5"],
    &["dtype", "d", "-1", "--spec", "1,1,2,1"],
];

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("fibalg").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn json(args: &[&str]) -> serde_json::Value {
        let (code, out, err) = call(args);
        assert_eq!(code, 0, "{args:?}: {err}");
        serde_json::from_str(&out).unwrap()
    }

    fn leaves(cmd: &clap::Command, path: Vec<String>, acc: &mut Vec<Vec<String>>) {
        let subs: Vec<_> = cmd.get_subcommands().filter(|c| c.get_name() != "help").collect();
        if subs.is_empty() {
            acc.push(path);
            return;
        }
        for s in subs {
            let mut p = path.clone();
            p.push(s.get_name().to_string());
            leaves(s, p, acc);
        }
    }

    #[test]
    fn every_command_has_a_working_example() {
        let mut all = Vec::new();
        leaves(&Cli::command(), Vec::new(), &mut all);
        for path in &all {
            let covered = EXAMPLES
                .iter()
                .any(|ex| ex.len() >= path.len() && ex[..path.len()] == path[..]);
            assert!(covered, "no example for {path:?}");
        }
        for ex in EXAMPLES {
            let (code, out, err) = call(ex);
            assert_eq!(code, 0, "{ex:?}: {err}");
            serde_json::from_str::<serde_json::Value>(&out).unwrap_or_else(|e| panic!("{ex:?}: {e}"));
        }
    }

    #[test]
    fn worked_outputs() {
        assert_eq!(call(&["seq", "fib", "10"]).1, "{\"n\":10,\"value\":\"55\"}\n");
        assert_eq!(json(&["seq", "lucas", "-5"])["value"], "-11");
        assert_eq!(json(&["seq", "pair", "30"])["f_next"], "1346269");
        assert_eq!(json(&["ring", "f5", "3"])["k"], "122");
        assert_eq!(json(&["quat", "norm", "1,2,3,4"])["value"], "30");
        let q = json(&["quat", "mul", "0,1,0,0", "0,0,1,0"]);
        assert_eq!(q["coeffs"], serde_json::json!(["0", "0", "0", "1"]));
        let d = json(&["dtype", "closed", "units-mod:11", "2", "3", "5"]);
        assert_eq!(d["closed"], "8");
        assert_eq!(d["iterated"], "8");
        assert_eq!(d["d_n"], "5");
        let d = json(&["dtype", "iterate", "units-mod:11", "2", "3", "5", "--prefix"]);
        assert_eq!(d["values"], serde_json::json!(["2", "3", "6", "7", "9", "8"]));
        assert_eq!(json(&["dtype", "d", "5", "--spec", "1,1,2,1"])["value"], "11");
        assert_eq!(json(&["dtype", "d", "-1", "--spec", "1,1,2,1"])["value"], "-1");
        let g = json(&["genseq", "binet", "1", "1", "0", "1", "40"]);
        assert_eq!(g["iterated"], "102334155");
        assert_eq!(g["agrees"], true);
        let s = json(&["cert", "search", "-1", "-1", "--height", "20"]);
        assert!(s["point"].is_null());
        let v = json(&["cert", "decide", "5", "-1"]);
        assert_eq!(v["verdict"], "split");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["identity", "check", "P21_IX_as_printed", "1"]).0, EXIT_FAILED);
        assert_eq!(call(&["identity", "range", "P21_IX_as_printed", "1", "3"]).0, EXIT_FAILED);
        assert_eq!(call(&["cert", "verify", "5", "-1", "1", "0", "2", "--strict"]).0, EXIT_FAILED);
        assert_eq!(call(&["cert", "verify", "5", "-1", "0", "0", "0"]).0, EXIT_FAILED);
        assert_eq!(call(&["ring", "m-element", "1:1:1", "--as-printed"]).0, EXIT_FAILED);
        let (code, out, _) = call(&["cert", "decide", "1000070001221", "-1", "--budget", "0"]);
        assert_eq!(code, EXIT_UNDECIDED);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["verdict"], "undecided");
        let (code, out, err) = call(&["frobnicate"]);
        assert_eq!((code, out.as_str()), (EXIT_USAGE, ""));
        assert!(err.contains("Usage"), "{err}");
        assert_eq!(call(&["cert", "family", "3", "1"]).0, EXIT_USAGE);
        assert_eq!(call(&["seq", "fib", "2000000"]).0, EXIT_USAGE);
        assert_eq!(call(&["dtype", "iterate", "units-mod:12", "2", "3", "5"]).0, EXIT_USAGE);
        assert_eq!(call(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn family_eight_prints_both_halves() {
        let v = json(&["cert", "family", "8", "3"]);
        let arr = v.as_array().unwrap();
        assert_eq!(arr.len(), 2);
        assert_eq!(arr[0]["family"], "8a");
        assert_eq!(arr[1]["family"], "8b");
    }

    #[test]
    fn repeated_runs_are_byte_identical() {
        for ex in EXAMPLES {
            assert_eq!(call(ex), call(ex), "{ex:?}");
        }
    }

    #[test]
    fn hyphenated_values_and_flags_mix() {
        let v = json(&["quat", "norm", "-1,2,-3,4", "--alpha", "-2", "--beta", "3"]);
        // a0^2 - alpha a1^2 - beta a2^2 + alpha beta a3^2
        assert_eq!(v["value"], (1 + 2 * 4 - 3 * 9 - 6 * 16).to_string());
        let v = json(&["cert", "verify", "--strict", "15127/5", "-2/5", "1", "1", "55"]);
        assert_eq!(v["verified"], true);
    }
}
