use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cfvar::catalog::{self, bessel_disambiguation, f_observations, CatalogEntry, VerifyConfig};
use cfvar::cfcore::{CFSpec, ZArg, Q};
use cfvar::integrals::{
    bessel_closed_form, bessel_moment, quad_i1, quad_i2, quad_i2_n, quad_i3, quad_i3_n, quad_r1, quad_r3, Params2,
    Params3, QuadSpec,
};
use cfvar::numkit::Precision;
use cfvar::rvgroup::{
    generators_g2, generators_g3, group_closure, integrality2, integrality3, invariance_scan, Params,
};
use cfvar::transforms::{half_shift, half_shift_tails};

const OUTPUT_FORMAT: &str = "cfvar-cli/1";

#[derive(Parser)]
#[command(name = "cfvar", version, about = "Continued fractions, recurrences and integrals around Apery's constants")]
struct Cli {
    /// Emit a versioned JSON document instead of a table.
    #[arg(long, global = true)]
    structured: bool,

    /// Catalog file; defaults to $CFVAR_CATALOG, then the built-in catalog.
    #[arg(long, global = true, value_name = "PATH")]
    catalog: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check catalog limits, convergence rates and observations.
    Verify(VerifyArgs),
    /// Evaluate the limit of one catalog fraction.
    Eval(EvalArgs),
    /// Substitute n -> n + 1/2 in a catalog fraction.
    Shift(ShiftArgs),
    /// Fit the convergence rate of one catalog fraction.
    Rate(RateArgs),
    /// Permutation groups on the integral parameter matrices.
    Group(GroupArgs),
    /// Exact lcm-scaled integrality of the lattice coordinates.
    Integrality(IntegralityArgs),
    /// Numerical value of one of the integral families.
    Integral(IntegralArgs),
    /// Bessel moment c(n,k) = int t^k K0(t)^n dt.
    Bessel(BesselArgs),
    /// Observations on the hyperbolic cosine family f(z).
    FExplore(FExploreArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Restrict to these entries (repeatable).
    #[arg(long)]
    id: Vec<String>,
    #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u32).range(10..))]
    prec: u32,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
    /// Skip the convergence-rate fits.
    #[arg(long)]
    skip_rates: bool,
    /// Record per-entry wall-clock time.
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    id: String,
    /// Parameter value p/q, or an imaginary value such as 3i/4.
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u32).range(10..))]
    prec: u32,
    /// Term cap.
    #[arg(long, default_value_t = 5000, value_parser = clap::value_parser!(u64).range(4..))]
    terms: u64,
}

#[derive(Args)]
struct ShiftArgs {
    #[arg(long)]
    id: String,
    /// Print the derived fraction in the catalog's JSON encoding.
    #[arg(long)]
    emit: bool,
}

#[derive(Args)]
struct RateArgs {
    #[arg(long)]
    id: String,
    #[arg(long, default_value_t = 40)]
    from: usize,
    #[arg(long, default_value_t = 80)]
    to: usize,
    #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u32).range(10..))]
    prec: u32,
}

#[derive(Clone, Copy, ValueEnum)]
enum Case {
    /// Triple integrals (order 1920 group).
    Zeta3,
    /// Double integrals (order 120 group).
    Zeta2,
}

#[derive(Args)]
struct GroupArgs {
    #[arg(long, value_enum)]
    case: Case,
    /// Print the group order.
    #[arg(long, conflicts_with = "orbit")]
    order: bool,
    /// Scan the gamma-normalized integral over the orbit of these parameters (comma-separated p/q).
    #[arg(long, value_name = "PARAMS", allow_hyphen_values = true)]
    orbit: Option<String>,
    /// Group elements sampled in the orbit scan.
    #[arg(long, default_value_t = 20)]
    sample: usize,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct IntegralityArgs {
    #[arg(long, value_enum)]
    case: Case,
    #[arg(long, default_value_t = 15, value_parser = clap::value_parser!(u64).range(1..))]
    nmax: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    I1,
    R1,
    I2,
    I3,
    R3,
}

#[derive(Args)]
struct IntegralArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Parameters a_0,..: six for i3, five for i2 (comma-separated p/q).
    #[arg(long, allow_hyphen_values = true)]
    params: Option<String>,
    /// Index n (profile n - 1/2 for i2/i3, order for i1/r1) or nu for r3, as p/q.
    #[arg(long, allow_hyphen_values = true)]
    n: Option<String>,
    /// Argument z < 1 for i1 and r1.
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct BesselArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=4))]
    n: u32,
    #[arg(long, value_parser = clap::value_parser!(u32).range(0..=3))]
    k: u32,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct FExploreArgs {
    /// Also evaluate f at this point (p/q, or an imaginary value such as 3i/4).
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u32).range(10..))]
    prec: u32,
}

/// Failure of a command: usage problems exit 2, everything else 1.
enum Failure {
    Usage(String),
    Run(String),
}

impl From<cfvar::Error> for Failure {
    fn from(e: cfvar::Error) -> Self {
        match e {
            cfvar::Error::Domain(_) | cfvar::Error::Parse(_) | cfvar::Error::Precision { .. } => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Run(other.to_string()),
        }
    }
}

type CmdResult = Result<bool, Failure>;

/// Parse an exact rational "p/q" or integer; decimals are rejected.
fn parse_q(s: &str) -> Result<Q, Failure> {
    let t = s.trim();
    if t.contains(['.', 'e', 'E']) {
        return Err(Failure::Usage(format!("`{s}`: exact values must be written p/q, not as decimals")));
    }
    t.parse::<Q>()
        .map_err(|_| Failure::Usage(format!("`{s}` is not a rational p/q")))
}

fn parse_z(s: &str) -> Result<ZArg, Failure> {
    let t = s.trim();
    if t.matches('i').count() != 1 {
        return Ok(ZArg::Real(parse_q(t)?));
    }
    // Accept 3i/4, 3/4i, i/2 and -i.
    let (num, den) = t.split_once('/').unwrap_or((t, "1"));
    let (num, den) = (num.replace(['i', '*'], ""), den.replace(['i', '*'], ""));
    let num = match num.as_str() {
        "" => "1".to_string(),
        "-" => "-1".to_string(),
        _ => num,
    };
    Ok(ZArg::Imag(parse_q(&format!("{num}/{den}"))?))
}

fn parse_list(s: &str) -> Result<Vec<Q>, Failure> {
    s.split(',').map(parse_q).collect()
}

fn q_f64(x: &Q) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

fn load_catalog(path: &Option<PathBuf>) -> Result<Vec<CatalogEntry>, Failure> {
    let path = path
        .clone()
        .or_else(|| std::env::var_os("CFVAR_CATALOG").map(PathBuf::from));
    match path {
        None => Ok(catalog::builtin_catalog()),
        Some(p) => {
            let entries = catalog::load(&p).map_err(|e| Failure::Usage(e.to_string()))?;
            let diags = catalog::validate_all(&entries);
            if !diags.is_empty() {
                let lines: Vec<String> = diags.iter().map(|d| d.to_string()).collect();
                return Err(Failure::Usage(format!("invalid catalog:\n{}", lines.join("\n"))));
            }
            Ok(entries)
        }
    }
}

fn find<'a>(entries: &'a [CatalogEntry], id: &str) -> Result<&'a CatalogEntry, Failure> {
    catalog::find(entries, id).ok_or_else(|| Failure::Usage(format!("unknown catalog id `{id}`")))
}

fn emit(structured: bool, command: &str, body: Value, table: impl FnOnce() -> String) {
    if structured {
        let doc = json!({
            "format": OUTPUT_FORMAT,
            "version": env!("CARGO_PKG_VERSION"),
            "command": command,
            "result": body,
        });
        println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    } else {
        print!("{}", table());
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn cmd_verify(cli: &Cli, a: &VerifyArgs) -> CmdResult {
    let entries = load_catalog(&cli.catalog)?;
    let selected: Vec<CatalogEntry> = if a.id.is_empty() {
        entries
    } else {
        a.id.iter().map(|id| find(&entries, id).cloned()).collect::<Result<_, _>>()?
    };
    let cfg = VerifyConfig {
        prec: a.prec,
        jobs: a.jobs,
        skip_rates: a.skip_rates,
        timings: a.timings,
        ..VerifyConfig::default()
    };
    let report = catalog::verify_all(&selected, &cfg);
    if cli.structured {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_table());
    }
    Ok(report.passed)
}

fn cmd_eval(cli: &Cli, a: &EvalArgs) -> CmdResult {
    let entries = load_catalog(&cli.catalog)?;
    let e = find(&entries, &a.id)?;
    let z = a.z.as_deref().map(parse_z).transpose()?;
    if z.is_none() && e.cf.requires_z() {
        return Err(Failure::Usage(format!("`{}` needs --z", e.id)));
    }
    let p = Precision::new(a.prec)?;
    let r = e.cf.limit(p, z.as_ref(), a.terms as usize)?;
    let value = r.value.to_decimal_string(a.prec as usize);
    let err = r.error.to_sci_string(3);
    emit(
        cli.structured,
        "eval",
        json!({
            "id": e.id,
            "z": z.as_ref().map(|z| z.to_string()),
            "value": value,
            "error_estimate": err,
            "terms": r.terms,
            "terminated": r.terminated,
        }),
        || {
            format!(
                "{}\nerror estimate {}  terms {}{}\n",
                value,
                err,
                r.terms,
                if r.terminated { "  (terminated)" } else { "" }
            )
        },
    );
    Ok(true)
}

fn cmd_shift(cli: &Cli, a: &ShiftArgs) -> CmdResult {
    let entries = load_catalog(&cli.catalog)?;
    let e = find(&entries, &a.id)?;
    let (derived, full) = match half_shift(&e.cf) {
        Ok(cf) => (cf.to_string(), Some(cf)),
        Err(_) => {
            let (b, an, c) = half_shift_tails(&e.cf);
            (format!("tails b(n) = {b}, a(n) = {an} (scale {c})"), None)
        }
    };
    if a.emit {
        let Some(cf) = &full else {
            return Err(Failure::Usage(format!("`{}` has heads the shift cannot carry; only tails exist", e.id)));
        };
        println!("{}", serde_json::to_string_pretty(cf).expect("serializable"));
        return Ok(true);
    }
    let (bt, at, _) = half_shift_tails(&e.cf);
    let matched = entries.iter().find(|o| match &full {
        Some(cf) => o.cf == *cf,
        None => false,
    });
    let tail_match = entries
        .iter()
        .find(|o| o.id != e.id && o.cf.b_poly == bt && o.cf.a_poly == at);
    let (verdict, with) = match (matched, tail_match) {
        (Some(m), _) => ("yes", Some(m.id.clone())),
        (None, Some(m)) => ("tails", Some(m.id.clone())),
        (None, None) => ("no", None),
    };
    emit(
        cli.structured,
        "shift",
        json!({ "id": e.id, "derived": derived, "matches": verdict, "catalog_entry": with }),
        || {
            let mut s = format!("{derived}\n");
            match (verdict, &with) {
                ("yes", Some(id)) => s.push_str(&format!("matches catalog: yes ({id})\n")),
                ("tails", Some(id)) => s.push_str(&format!("matches catalog: tails only ({id})\n")),
                _ => s.push_str("matches catalog: no\n"),
            }
            s
        },
    );
    Ok(true)
}

fn cmd_rate(cli: &Cli, a: &RateArgs) -> CmdResult {
    if a.to < a.from + 3 {
        return Err(Failure::Usage("--to must exceed --from by at least 3".into()));
    }
    let entries = load_catalog(&cli.catalog)?;
    let e = find(&entries, &a.id)?;
    if e.rate.is_none() {
        return Err(Failure::Usage(format!("`{}` has no rate model", e.id)));
    }
    let cfg = VerifyConfig {
        prec: a.prec,
        rate_window: (a.from, a.to),
        ..VerifyConfig::default()
    };
    let r = catalog::verify_entry(e, &cfg);
    let rates: Vec<Value> = r
        .samples
        .iter()
        .map(|s| json!({ "param": s.param, "rate": s.rate, "error": s.error }))
        .collect();
    let ok = r.samples.iter().all(|s| s.rate.as_ref().is_some_and(|x| x.check.passed));
    emit(cli.structured, "rate", json!({ "id": e.id, "samples": rates, "passed": ok }), || {
        let mut s = String::new();
        for x in &r.samples {
            let at = x.param.as_deref().map_or(String::new(), |p| format!(" at {p}"));
            match &x.rate {
                Some(rr) => {
                    s.push_str(&format!("model {}{at}\n", rr.model));
                    if let Some(v) = rr.fit.rho_hat {
                        s.push_str(&format!("  fitted rho {v:.8}\n"));
                    }
                    if let Some(v) = rr.fit.power_hat {
                        s.push_str(&format!("  fitted power {v:.6}\n"));
                    }
                    if let Some(v) = rr.fit.c_hat {
                        s.push_str(&format!("  fitted C {v:.8}\n"));
                    }
                    let pct = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{:.4}%", 100.0 * v));
                    s.push_str(&format!(
                        "  rho err {}  C err {}  power err {}  signs {}  {}\n",
                        pct(rr.check.rho_rel_err),
                        pct(rr.check.c_rel_err),
                        pct(rr.check.power_rel_err),
                        if rr.check.sign_ok { "ok" } else { "BAD" },
                        if rr.check.passed { "pass" } else { "FAIL" }
                    ));
                }
                None => s.push_str(&format!("no rate{at}: {}\n", x.error.as_deref().unwrap_or("-"))),
            }
        }
        s
    });
    Ok(ok)
}

fn params_for(case: Case, list: &[Q]) -> Result<Params, Failure> {
    match (case, list.len()) {
        (Case::Zeta3, 6) => Ok(Params::Triple(Params3(std::array::from_fn(|i| list[i].clone())))),
        (Case::Zeta2, 5) => Ok(Params::Double(Params2(std::array::from_fn(|i| list[i].clone())))),
        (Case::Zeta3, k) => Err(Failure::Usage(format!("zeta3 needs six parameters, got {k}"))),
        (Case::Zeta2, k) => Err(Failure::Usage(format!("zeta2 needs five parameters, got {k}"))),
    }
}

fn quad_spec(dim: usize, tol: Option<f64>) -> Result<QuadSpec, Failure> {
    match tol {
        Some(t) => Ok(QuadSpec::new(dim, t)?),
        None => Ok(match dim {
            1 => QuadSpec::one_dim(),
            2 => QuadSpec::two_dim(),
            _ => QuadSpec::three_dim(),
        }),
    }
}

fn cmd_group(cli: &Cli, a: &GroupArgs) -> CmdResult {
    let gens = match a.case {
        Case::Zeta3 => generators_g3(),
        Case::Zeta2 => generators_g2(),
    };
    if let Some(orbit) = &a.orbit {
        let params = params_for(a.case, &parse_list(orbit)?)?;
        let dim = if matches!(a.case, Case::Zeta3) { 3 } else { 2 };
        let spec = quad_spec(dim, a.tol)?;
        let rep = invariance_scan(&params, a.sample, &spec)?;
        emit(cli.structured, "group", to_value(&rep), || {
            let mut s = format!(
                "orbit of {} under a group of order {}\nbase value {:.15e}\n",
                rep.base_params, rep.group_order, rep.base_value
            );
            for e in &rep.entries {
                match (&e.skipped, e.deviation) {
                    (Some(why), _) => s.push_str(&format!("  {:<36} skipped: {why}\n", e.word)),
                    (None, Some(d)) => s.push_str(&format!("  {:<36} {:<28} dev {d:.1e}\n", e.word, e.params)),
                    _ => {}
                }
            }
            s.push_str(&format!(
                "max deviation {:.2e} (tolerance {:.1e}), multiset preserved: {}, {}\n",
                rep.max_deviation,
                rep.tolerance,
                if rep.multiset_preserved { "yes" } else { "no" },
                if rep.passed { "pass" } else { "FAIL" }
            ));
            s
        });
        return Ok(rep.passed);
    }
    let g = group_closure(&gens)?;
    let gen_orders: Vec<(String, usize)> = gens.iter().map(|x| (x.name.clone(), x.order())).collect();
    let closed = g.is_closed();
    emit(
        cli.structured,
        "group",
        json!({ "order": g.order(), "generators": gen_orders, "closed": closed }),
        || {
            if a.order {
                format!("{}\n", g.order())
            } else {
                let mut s = format!("order {}\n", g.order());
                for (n, o) in &gen_orders {
                    s.push_str(&format!("  generator {n}: order {o}\n"));
                }
                s
            }
        },
    );
    Ok(closed)
}

fn cmd_integrality(cli: &Cli, a: &IntegralityArgs) -> CmdResult {
    let rep = match a.case {
        Case::Zeta3 => integrality3(a.nmax as usize),
        Case::Zeta2 => integrality2(a.nmax as usize),
    };
    emit(cli.structured, "integrality", to_value(&rep), || {
        let mut s = format!("{:>3} {:>24} {:>8} {}\n", "n", "multiplier", "cofactor", "status");
        for r in &rep.rows {
            s.push_str(&format!(
                "{:>3} {:>24} {:>8} {}\n",
                r.n,
                r.multiplier,
                r.cofactor,
                if r.integral { "pass" } else { "FAIL" }
            ));
        }
        let f = rep.failures();
        if f.is_empty() {
            s.push_str("all pass\n");
        } else {
            s.push_str(&format!("failures at n = {f:?}\n"));
        }
        s
    });
    Ok(rep.passed)
}

fn cmd_integral(cli: &Cli, a: &IntegralArgs) -> CmdResult {
    let need = |o: &Option<String>, what: &str| -> Result<Q, Failure> {
        o.as_deref()
            .map(parse_q)
            .transpose()?
            .ok_or_else(|| Failure::Usage(format!("--{what} is required for this family")))
    };
    let (label, v) = match a.family {
        Family::I1 | Family::R1 => {
            let n = need(&a.n, "n")?;
            let z = q_f64(&need(&a.z, "z")?);
            let spec = quad_spec(1, a.tol)?;
            if matches!(a.family, Family::I1) {
                (format!("I1({n}; {z})"), quad_i1(q_f64(&n), z, &spec)?)
            } else {
                if !n.is_integer() || n < Q::from_integer(0.into()) {
                    return Err(Failure::Usage("r1 needs a nonnegative integer n".into()));
                }
                (format!("r({n}; {z})"), quad_r1(q_f64(&n) as u32, z, &spec)?)
            }
        }
        Family::I2 => {
            let spec = quad_spec(2, a.tol)?;
            match (&a.params, &a.n) {
                (Some(p), _) => {
                    let Params::Double(p) = params_for(Case::Zeta2, &parse_list(p)?)? else { unreachable!() };
                    (format!("I2{p}"), quad_i2(&p, &spec)?)
                }
                (None, Some(_)) => {
                    let n = need(&a.n, "n")?;
                    if !n.is_integer() {
                        return Err(Failure::Usage("--n must be an integer for the profile".into()));
                    }
                    (format!("I2({n})"), quad_i2_n(q_f64(&n) as i64, &spec)?)
                }
                _ => return Err(Failure::Usage("give --params or --n".into())),
            }
        }
        Family::I3 => {
            let spec = quad_spec(3, a.tol)?;
            match (&a.params, &a.n) {
                (Some(p), _) => {
                    let Params::Triple(p) = params_for(Case::Zeta3, &parse_list(p)?)? else { unreachable!() };
                    (format!("I3{p}"), quad_i3(&p, &spec)?)
                }
                (None, Some(_)) => {
                    let n = need(&a.n, "n")?;
                    if !n.is_integer() {
                        return Err(Failure::Usage("--n must be an integer for the profile".into()));
                    }
                    (format!("I3({n})"), quad_i3_n(q_f64(&n) as i64, &spec)?)
                }
                _ => return Err(Failure::Usage("give --params or --n".into())),
            }
        }
        Family::R3 => {
            let nu = need(&a.n, "n")?;
            (format!("r({nu})"), quad_r3(q_f64(&nu), &quad_spec(3, a.tol)?)?)
        }
    };
    emit(cli.structured, "integral", json!({ "integral": label, "quad": to_value(&v) }), || {
        format!(
            "{label} = {:.15e}\nlevel difference {:.1e}, level {}, {} evaluations\n",
            v.value, v.error, v.level, v.evaluations
        )
    });
    Ok(true)
}

fn cmd_bessel(cli: &Cli, a: &BesselArgs) -> CmdResult {
    let v = bessel_moment(a.n, a.k, &quad_spec(1, a.tol)?)?;
    let closed = bessel_closed_form(a.n, a.k, Precision::new(30)?)?.map(|c| c.to_f64());
    let diff = closed.map(|c| v.value - c);
    let mut body = json!({ "n": a.n, "k": a.k, "quad": to_value(&v), "closed_form": closed, "difference": diff });
    let mut extra = String::new();
    if a.n == 4 && (a.k == 0 || a.k == 2) {
        let entries = load_catalog(&cli.catalog)?;
        if let Ok(d) = bessel_disambiguation(&entries) {
            extra = format!(
                "8 c(4,2)/c(4,0) = {:.15} matches {} (margin {:.2e})\n",
                d.target, d.best, d.margin
            );
            body["disambiguation"] = to_value(&d);
        }
    }
    emit(cli.structured, "bessel", body, || {
        let mut s = format!("c({},{}) = {:.15e}  (level difference {:.1e})\n", a.n, a.k, v.value, v.error);
        match (closed, diff) {
            (Some(c), Some(d)) => s.push_str(&format!("closed form {c:.15e}, difference {d:.1e}\n")),
            _ => s.push_str("no closed form\n"),
        }
        s.push_str(&extra);
        s
    });
    Ok(true)
}

fn cmd_f_explore(cli: &Cli, a: &FExploreArgs) -> CmdResult {
    let entries = load_catalog(&cli.catalog)?;
    let e = find(&entries, "f-z")?;
    let cf: &CFSpec = &e.cf;
    let at = match &a.z {
        Some(s) => {
            let z = parse_z(s)?;
            let r = cf.limit(Precision::new(a.prec)?, Some(&z), 20000)?;
            Some((z.to_string(), r.value.to_decimal_string(a.prec.min(30) as usize), r.terminated))
        }
        None => None,
    };
    let obs = f_observations(cf, a.prec);
    emit(
        cli.structured,
        "f-explore",
        json!({ "value": at.as_ref().map(|(z, v, t)| json!({ "z": z, "f": v, "terminated": t })), "observations": to_value(&obs) }),
        || {
            let mut s = String::new();
            if let Some((z, v, t)) = &at {
                s.push_str(&format!("f({z}) = {v}{}\n", if *t { " (terminated)" } else { "" }));
            }
            s.push_str(&obs.summary_lines());
            s
        },
    );
    Ok(obs.passed)
}

fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Verify(a) => cmd_verify(cli, a),
        Command::Eval(a) => cmd_eval(cli, a),
        Command::Shift(a) => cmd_shift(cli, a),
        Command::Rate(a) => cmd_rate(cli, a),
        Command::Group(a) => cmd_group(cli, a),
        Command::Integrality(a) => cmd_integrality(cli, a),
        Command::Integral(a) => cmd_integral(cli, a),
        Command::Bessel(a) => cmd_bessel(cli, a),
        Command::FExplore(a) => cmd_f_explore(cli, a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Run(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
