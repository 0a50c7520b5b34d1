//! Command-line front end.
//!
//! Exit codes: 0 when everything is certified, 1 when some certification is
//! undetermined (or a verify check fails, or precision runs out), 2 for usage
//! and domain errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::dedekind::{self, Certificate, FieldSignature};
use crate::error::{Error, Result};
use crate::lfunc;
use crate::mpreal::{self, parse_decimal, render_err, render_value, BoundedReal, PrecisionContext};
use crate::survey;

pub const DIGITS_ENV: &str = "ZHALF_DIGITS";

#[derive(Debug, Parser)]
#[command(
    name = "zhalf",
    version,
    about = "Dedekind zeta and quadratic L-values at s = 1/2"
)]
pub struct Cli {
    /// Significant decimal digits (default 50, or $ZHALF_DIGITS; floored at 15).
    #[arg(long, global = true)]
    pub digits: Option<u32>,

    /// Output format; `csv` applies to `survey` only.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// γ, π/2, log 8π and the thresholds built from them.
    Constants,
    /// ζ(s) and ζ'(s).
    Zeta {
        #[arg(long, default_value = "1/2", allow_hyphen_values = true)]
        s: String,
    },
    /// L(s, χ_D) and its s-derivative.
    Lvalue {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long, default_value = "1/2", allow_hyphen_values = true)]
        s: String,
    },
    /// Central values of Q(sqrt d) by both derivative routes.
    Field {
        #[arg(long, allow_hyphen_values = true)]
        squarefree: i64,
    },
    /// Certify that A_K'(1/2) is nonzero for a signature.
    Criteria(CriteriaArgs),
    /// Consecutive integers around exp(r1 π/2 + n (log 8π + γ)).
    Exceptional {
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        r1: u32,
    },
    /// Gap between two fields' logarithmic derivatives at 1/2.
    Compare(CompareArgs),
    /// L(1/2, χ_8d) over odd squarefree d ≤ limit.
    Survey {
        #[arg(long)]
        limit: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay the numeric claims and report pass/fail per check.
    Verify,
}

#[derive(Debug, Args)]
pub struct CriteriaArgs {
    #[arg(long)]
    pub degree: u32,
    #[arg(long)]
    pub r1: u32,
    #[arg(long)]
    pub disc_abs: u64,
    /// Enforce d ≡ 0, 1 mod 4.
    #[arg(long)]
    pub strict: bool,
    /// Treat the field as abelian (enables the degree bound).
    #[arg(long)]
    pub abelian: bool,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct CompareArgs {
    /// Two squarefree generators.
    #[arg(long, num_args = 2, value_names = ["D1", "D2"], allow_hyphen_values = true)]
    pub quad: Option<Vec<i64>>,
    /// Signature `n,r1,d`; give exactly two.
    #[arg(long, num_args = 1, allow_hyphen_values = true)]
    pub sig: Option<Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Undetermined,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub name: String,
    pub value: String,
    pub err: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputEnvelope {
    pub command: String,
    pub inputs: Value,
    pub results: Vec<Entry>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl OutputEnvelope {
    fn new(command: &str, inputs: Value) -> Self {
        Self {
            command: command.into(),
            inputs,
            results: Vec::new(),
            status: Status::Ok,
            message: None,
        }
    }

    fn real(&mut self, name: &str, x: &BoundedReal, digits: u32) {
        self.results.push(Entry {
            name: name.into(),
            value: render_value(x.value(), digits),
            err: render_err(x.err()),
        });
    }

    fn exact(&mut self, name: &str, value: impl ToString) {
        self.results.push(Entry {
            name: name.into(),
            value: value.to_string(),
            err: "0".into(),
        });
    }

    fn undetermined(&mut self) {
        if self.status == Status::Ok {
            self.status = Status::Undetermined;
        }
    }

    fn exit_code(&self) -> i32 {
        match self.status {
            Status::Ok => 0,
            Status::Undetermined => 1,
            Status::Error => 2,
        }
    }

    fn print(&self, format: Format, out: &mut dyn Write) -> io::Result<()> {
        if format == Format::Json {
            serde_json::to_writer_pretty(&mut *out, self)?;
            return writeln!(out);
        }
        let width = self.results.iter().map(|e| e.name.len()).max().unwrap_or(0);
        for e in &self.results {
            if e.err == "0" {
                writeln!(out, "{:<width$}  {}", e.name, e.value)?;
            } else {
                writeln!(out, "{:<width$}  {}  ± {}", e.name, e.value, e.err)?;
            }
        }
        match self.status {
            Status::Ok => Ok(()),
            Status::Undetermined => writeln!(out, "status  undetermined"),
            Status::Error => writeln!(out, "error: {}", self.message.as_deref().unwrap_or("")),
        }
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let format = cli.format;
    let name = command_name(&cli.command);
    let result = resolve_digits(cli.digits).and_then(|ctx| dispatch(&cli, &ctx, &mut out));
    match result {
        Ok(code) => code,
        Err(e) => {
            let code = match e {
                Error::Domain(_) | Error::ZeroInput | Error::NotSquarefree(_) => 2,
                _ => 1,
            };
            if format == Format::Json {
                let mut env = OutputEnvelope::new(name, Value::Null);
                env.status = Status::Error;
                env.message = Some(e.to_string());
                let _ = env.print(format, &mut out);
            } else {
                eprintln!("error: {e}");
            }
            code
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Constants => "constants",
        Command::Zeta { .. } => "zeta",
        Command::Lvalue { .. } => "lvalue",
        Command::Field { .. } => "field",
        Command::Criteria(_) => "criteria",
        Command::Exceptional { .. } => "exceptional",
        Command::Compare(_) => "compare",
        Command::Survey { .. } => "survey",
        Command::Verify => "verify",
    }
}

fn resolve_digits(flag: Option<u32>) -> Result<PrecisionContext> {
    let digits = match flag {
        Some(d) => d,
        None => match std::env::var(DIGITS_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| Error::Domain(format!("{DIGITS_ENV}={v:?} is not a digit count")))?,
            Err(_) => PrecisionContext::DEFAULT_DIGITS,
        },
    };
    PrecisionContext::new(digits.max(PrecisionContext::MIN_DIGITS))
}

fn dispatch(cli: &Cli, ctx: &PrecisionContext, out: &mut dyn Write) -> Result<i32> {
    if cli.format == Format::Csv && !matches!(cli.command, Command::Survey { .. }) {
        return Err(Error::Domain(
            "--format csv is only available for survey".into(),
        ));
    }
    let digits = ctx.digits();
    let env = match &cli.command {
        Command::Constants => constants(ctx),
        Command::Zeta { s } => zeta(s, ctx)?,
        Command::Lvalue { disc, s } => lvalue(*disc, s, ctx)?,
        Command::Field { squarefree } => field(*squarefree, ctx)?,
        Command::Criteria(args) => criteria(args, ctx)?,
        Command::Exceptional { degree, r1 } => exceptional(*degree, *r1, ctx)?,
        Command::Compare(args) => compare(args, ctx)?,
        Command::Survey {
            limit,
            jobs,
            out: path,
        } => return run_survey(*limit, *jobs, path.as_ref(), cli.format, ctx, out),
        Command::Verify => verify(ctx),
    };
    let mut env = env;
    if let Value::Object(map) = &mut env.inputs {
        map.insert("digits".into(), json!(digits));
    }
    env.print(cli.format, out)?;
    Ok(env.exit_code())
}

fn constants(ctx: &PrecisionContext) -> OutputEnvelope {
    let d = ctx.digits();
    let mut env = OutputEnvelope::new("constants", json!({}));
    let gamma = mpreal::constant_gamma(ctx);
    let half_pi = mpreal::constant_pi(ctx).mul_pow2(-1);
    let log8pi = mpreal::log_8pi(ctx);
    let low = dedekind::log8pi_plus_gamma(ctx);
    let high = low.add_ref(&half_pi);
    env.real("gamma", &gamma, d);
    env.real("pi/2", &half_pi, d);
    env.real("log(8pi)", &log8pi, d);
    env.real("log(8pi)+gamma", &low, d);
    env.real("pi/2+log(8pi)+gamma", &high, d);
    env.real("exp(log(8pi)+gamma)", &low.exp(), d);
    env.real("exp(pi/2+log(8pi)+gamma)", &high.exp(), d);
    env
}

fn zeta(s: &str, ctx: &PrecisionContext) -> Result<OutputEnvelope> {
    let sq = parse_decimal(s)?;
    let mut env = OutputEnvelope::new("zeta", json!({ "s": s }));
    env.real("zeta(s)", &lfunc::riemann_zeta(&sq, ctx)?, ctx.digits());
    env.real("zeta'(s)", &lfunc::riemann_zeta_ds(&sq, ctx)?, ctx.digits());
    Ok(env)
}

fn lvalue(disc: i64, s: &str, ctx: &PrecisionContext) -> Result<OutputEnvelope> {
    let sq = parse_decimal(s)?;
    let (l, ld) = lfunc::l_value_and_ds(disc, &sq, ctx)?;
    let mut env = OutputEnvelope::new("lvalue", json!({ "disc": disc, "s": s }));
    env.real("L(s,chi_D)", &l, ctx.digits());
    env.real("L'(s,chi_D)", &ld, ctx.digits());
    if !l.is_certified_nonzero() {
        env.undetermined();
    }
    Ok(env)
}

fn push_certificate(env: &mut OutputEnvelope, cert: &Certificate, digits: u32) {
    let status = if cert.is_certified() {
        "certified_nonzero"
    } else {
        "undetermined"
    };
    env.exact("certificate", status);
    env.exact("rule", cert.rule);
    if let Some(sign) = cert.sign {
        env.exact("sign", sign);
    }
    env.real("margin", &cert.margin, digits);
    if !cert.is_certified() {
        env.undetermined();
    }
}

fn field(d: i64, ctx: &PrecisionContext) -> Result<OutputEnvelope> {
    let digits = ctx.digits();
    let cv = lfunc::quad_central(d, ctx)?;
    let sig = cv.signature;
    let mut env = OutputEnvelope::new("field", json!({ "squarefree": d }));
    env.exact("discriminant", sig.disc());
    env.exact("signature", sig);
    env.real("zeta_K(1/2)", &cv.zeta_k, digits);
    env.real("zeta_K'(1/2) product rule", &cv.zeta_k_prime, digits);
    env.real("zeta_K'(1/2) via A_K'", &cv.zeta_k_prime_eq2, digits);
    env.real("A_K'(1/2)", &cv.a_prime, digits);
    match &cv.log_ratio {
        Some(r) => env.real("zeta_K'/zeta_K(1/2)", r, digits),
        None => {
            env.exact("zeta_K'/zeta_K(1/2)", "undetermined");
            env.undetermined();
        }
    }
    push_certificate(&mut env, &dedekind::certify(&sig, ctx), digits);
    Ok(env)
}

fn criteria(args: &CriteriaArgs, ctx: &PrecisionContext) -> Result<OutputEnvelope> {
    let sig = FieldSignature::from_degree(args.degree, args.r1, args.disc_abs)?;
    if args.strict {
        FieldSignature::new_strict(sig.degree(), sig.r1(), sig.r2(), sig.disc())?;
    }
    let cert = if args.abelian {
        dedekind::certify_abelian(&sig, ctx)?
    } else {
        dedekind::certify(&sig, ctx)
    };
    let mut env = OutputEnvelope::new(
        "criteria",
        json!({
            "degree": args.degree,
            "r1": args.r1,
            "disc_abs": args.disc_abs,
            "strict": args.strict,
            "abelian": args.abelian,
        }),
    );
    env.exact("signature", sig);
    env.real(
        "A_K'(1/2)",
        &dedekind::a_prime_half(&sig, ctx),
        ctx.digits(),
    );
    push_certificate(&mut env, &cert, ctx.digits());
    Ok(env)
}

fn exceptional(n: u32, r1: u32, ctx: &PrecisionContext) -> Result<OutputEnvelope> {
    let e = dedekind::exceptional_interval(n, r1, ctx)?;
    let mut env = OutputEnvelope::new("exceptional", json!({ "degree": n, "r1": r1 }));
    env.exact("lower", &e.lower);
    env.exact("upper", &e.upper);
    env.real("x", &e.x, ctx.digits());
    env.real("margin", &e.margin(), ctx.digits());
    env.exact("certified_strictly_between", e.certified_strictly_between);
    if !e.certified_strictly_between {
        env.undetermined();
    }
    Ok(env)
}

fn parse_sig(text: &str) -> Result<FieldSignature> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let bad = || Error::Domain(format!("signature {text:?} is not of the form n,r1,d"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let n: u32 = parts[0].parse().map_err(|_| bad())?;
    let r1: u32 = parts[1].parse().map_err(|_| bad())?;
    let d: i64 = parts[2].parse().map_err(|_| bad())?;
    if r1 > n || !(n - r1).is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "r1 = {r1} is not admissible for degree {n}"
        )));
    }
    FieldSignature::new(n, r1, (n - r1) / 2, d)
}

fn compare(args: &CompareArgs, ctx: &PrecisionContext) -> Result<OutputEnvelope> {
    let digits = ctx.digits();
    let (k, l, gap, mut env) = if let Some(q) = &args.quad {
        let (d1, d2) = (q[0], q[1]);
        let gap = dedekind::theorem1_gap(d1, d2, ctx)?;
        let env = OutputEnvelope::new("compare", json!({ "quad": [d1, d2] }));
        (
            FieldSignature::quadratic(d1)?,
            FieldSignature::quadratic(d2)?,
            gap,
            env,
        )
    } else {
        let sigs = args.sig.as_deref().unwrap_or_default();
        if sigs.len() != 2 {
            return Err(Error::Domain(
                "compare needs exactly two --sig values".into(),
            ));
        }
        let (k, l) = (parse_sig(&sigs[0])?, parse_sig(&sigs[1])?);
        let gap = dedekind::theorem6_gap(&k, &l, ctx);
        let env = OutputEnvelope::new("compare", json!({ "sig": sigs }));
        (k, l, gap, env)
    };
    env.exact("K", k);
    env.exact("L", l);
    env.real("gap", &gap, digits);
    let differ = dedekind::discriminant_powers_differ(&k, &l)?;
    env.exact("|d_K|^deg(L) != |d_L|^deg(K)", differ);
    match gap.certified_sign() {
        Some(sign) => env.exact("gap_sign", sign),
        None => {
            env.exact("gap_sign", "undetermined");
            env.undetermined();
        }
    }
    Ok(env)
}

fn run_survey(
    limit: u64,
    jobs: usize,
    path: Option<&PathBuf>,
    format: Format,
    ctx: &PrecisionContext,
    out: &mut dyn Write,
) -> Result<i32> {
    let report = survey::run_survey(limit, ctx, jobs)?;
    let write_report = |w: &mut dyn Write| -> Result<()> {
        match format {
            Format::Json => report.write_json(w),
            _ => report.write_csv(w),
        }
    };
    let s = &report.summary;
    let code = if s.undetermined == 0 { 0 } else { 1 };
    match path {
        Some(p) => {
            let mut file = BufWriter::new(File::create(p)?);
            write_report(&mut file)?;
            file.flush()?;
            let mut env = OutputEnvelope::new(
                "survey",
                json!({ "limit": limit, "jobs": jobs, "out": p, "digits": ctx.digits() }),
            );
            env.exact("total", s.total);
            env.exact("certified_nonzero", s.certified_nonzero);
            env.exact("undetermined", s.undetermined);
            env.exact("proportion", &s.proportion);
            if code != 0 {
                env.undetermined();
            }
            env.print(
                if format == Format::Json {
                    Format::Json
                } else {
                    Format::Text
                },
                out,
            )?;
        }
        None => write_report(out)?,
    }
    Ok(code)
}

struct Check {
    name: &'static str,
    pass: bool,
}

fn check_suite(ctx: &PrecisionContext) -> Vec<Check> {
    let mut checks = Vec::new();
    let mut push = |name, pass| checks.push(Check { name, pass });
    let zero = Float::new(64);

    for (n, r1, lo, name) in [
        (2, 0, 2003u32, "bracket (n, r1) = (2, 0): 2003 < x < 2004"),
        (2, 2, 46368, "bracket (n, r1) = (2, 2): 46368 < x < 46369"),
        (
            3,
            1,
            431471,
            "bracket (n, r1) = (3, 1): 431471 < x < 431472",
        ),
        (
            3,
            3,
            9984558,
            "bracket (n, r1) = (3, 3): 9984558 < x < 9984559",
        ),
    ] {
        let pass = dedekind::exceptional_interval(n, r1, ctx).is_ok_and(|e| {
            let m = e.margin();
            e.certified_strictly_between
                && e.lower == lo
                && m.lower() > Float::with_val(64, m.err() * 10u32)
        });
        push(name, pass);
    }

    let low = dedekind::log8pi_plus_gamma(ctx);
    let high = low.add_ref(&mpreal::constant_pi(ctx).mul_pow2(-1));
    let inside = |x: &BoundedReal, a: f64, b: f64| x.lower() > a && x.upper() < b;
    push(
        "44.762 < exp(log 8pi + gamma) < 44.764",
        inside(&low.exp(), 44.762, 44.764),
    );
    push(
        "215.332 < exp(pi/2 + log 8pi + gamma) < 215.334",
        inside(&high.exp(), 215.332, 215.334),
    );

    let sign = |n| {
        dedekind::abelian_lower_bound_check(n, ctx)
            .ok()
            .and_then(|b| b.certified_sign())
    };
    push(
        "abelian bound positive at n = 46369",
        sign(46369) == Some(1),
    );
    push(
        "abelian bound negative at n = 46368",
        sign(46368) == Some(-1),
    );

    let half = Rational::from((1, 2));
    let q = FieldSignature::rationals();
    let eq2 = lfunc::riemann_zeta(&half, ctx).and_then(|z| {
        let zd = lfunc::riemann_zeta_ds(&half, ctx)?;
        let a = dedekind::a_prime_half(&q, ctx);
        Ok((
            z.clone(),
            zd.clone(),
            zd.add_ref(&a.mul_ref(&z).mul_pow2(-1)),
        ))
    });
    match eq2 {
        Ok((z, zd, resid)) => {
            push(
                "zeta(1/2) = -1.46035450880 to 1e-11",
                (z.to_f64() + 1.46035450880).abs() < 1e-11,
            );
            push("zeta'(1/2) begins -3.922", inside(&zd, -3.923, -3.922));
            push(
                "zeta'(1/2) = -A_Q'(1/2) zeta(1/2) / 2",
                resid.contains(&zero),
            );
        }
        Err(_) => {
            push("zeta(1/2) = -1.46035450880 to 1e-11", false);
            push("zeta'(1/2) begins -3.922", false);
            push("zeta'(1/2) = -A_Q'(1/2) zeta(1/2) / 2", false);
        }
    }

    let psi = mpreal::digamma_half(ctx)
        .add_ref(&mpreal::constant_gamma(ctx))
        .add_ref(&mpreal::constant_ln2(ctx).mul_int(2));
    push("digamma(1/2) = -gamma - 2 log 2", psi.contains(&zero));

    let one = Float::with_val(64, 1);
    let sigs = [
        FieldSignature::rationals(),
        FieldSignature::new(2, 2, 0, 5).unwrap(),
        FieldSignature::new(2, 0, 1, -4).unwrap(),
        FieldSignature::new(3, 1, 1, -23).unwrap(),
        FieldSignature::new(4, 0, 2, 117).unwrap(),
    ];
    let a_half_ok = sigs
        .iter()
        .all(|s| dedekind::a_factor(s, &half, ctx).is_ok_and(|a| a.contains(&one)));
    push("A_K(1/2) = 1 for five signatures", a_half_ok);

    let c7 = dedekind::corollary7_constant(&q, ctx);
    let quarter_pi = mpreal::constant_pi(ctx).mul_pow2(-2);
    push(
        "corollary constant for Q is pi/4",
        c7.agrees_with(&quarter_pi, &zero),
    );

    let cert = dedekind::certify(&q, ctx);
    push(
        "A_Q'(1/2) certified negative",
        cert.is_certified() && cert.sign == Some(-1),
    );
    checks
}

fn verify(ctx: &PrecisionContext) -> OutputEnvelope {
    let mut env = OutputEnvelope::new("verify", json!({}));
    let checks = check_suite(ctx);
    for c in &checks {
        env.exact(c.name, if c.pass { "pass" } else { "FAIL" });
    }
    if checks.iter().any(|c| !c.pass) {
        env.undetermined();
    }
    env
}

/// Names of the checks `verify` runs paired with their outcome.
pub fn verify_results(ctx: &PrecisionContext) -> Vec<(&'static str, bool)> {
    check_suite(ctx)
        .into_iter()
        .map(|c| (c.name, c.pass))
        .collect()
}
