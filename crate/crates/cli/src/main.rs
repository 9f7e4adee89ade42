//! Command-line interface: curve parsing and the report subcommands.
//!
//! Exit codes: 0 success, 1 usage error, 2 verification failure,
//! 3 internal inconsistency.

mod report;

use maxcurves::forms::{self, TernaryForm};
use maxcurves::gf::{self, Fe, FieldCtx};
use maxcurves::groups;
use maxcurves::maximal;
use maxcurves::quotient;
use maxcurves::sziklai;
use maxcurves::Error;
use std::collections::HashMap;
use std::process::ExitCode;
use std::sync::Arc;

const USAGE: &str = "maxcurves - plane curves over small finite fields

USAGE:
    maxcurves <SUBCOMMAND> [FLAGS]

SUBCOMMANDS:
    count-points     --curve <text> --q <q>
        Rational point count of a curve plus the two upper bounds
        (the genus-based Aubry-Perret bound and the Sziklai bound).
    spectrum         --curve <text> --q <q>
        delta-line histogram; for cubics also the (mu0,mu1,mu2,mu3) quadruple.
    nu-table         --q-list <q,q,...> [--jobs <n>]
        CSV with columns q,case,nu_formula,nu_direct,fix_id,fix_12,fix_23,
        fix_13,fix_123,fix_132: the number of coefficient-permutation classes
        of the three-term family, by formula and by direct orbit count, plus
        the per-permutation fixed-point counts.
    sziklai-classify --q <q>
        CSV with columns q,representative,orbit_size,members: one row per
        equivalence class of the three-term family.
    search-maximal   --q 4 [--jobs <n>]
        Exhaustive scan of all normalized cubics over F_4; JSON report with
        scan totals, point-count histogram, and the two projective classes
        (see schema/search-maximal.schema.json).
    equiv            --curve-a <text> --curve-b <text> --q <q>
        Projective equivalence verdict; prints a witness matrix (nine field
        elements, row-major) when equivalent.
    verify-identity
        Checks the function-field identity u^3 + g v^3 + g^2 w^3 = 0 on the
        Fermat cubic over F_4, its intermediate identities, and a negative
        control; PASS/FAIL per check.
    kernel-check     --q <q>
        Verifies the vanishing ideal of the punctured affine plane (F_q*)^2
        in degree <= q-1 is spanned by x^(q-1)-1 and y^(q-1)-1.

COMMON FLAGS:
    --out <path>    write the report to a file instead of stdout
    --jobs <n>      worker threads (default: available parallelism)
    --help          print this help

Curve text grammar: terms c*x0^a*x1^b*x2^c joined by '+', with coefficients
\"0\", \"1\", \"g^k\" (and \"w\", \"w2\" at q = 4); or the raw vector form
\"q=<q> d=<d> coeffs=[...]\" in descending-lexicographic monomial order.";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match run(&args) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("run `maxcurves --help` for usage");
            ExitCode::from(1)
        }
        Err(CliError::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("internal inconsistency: {msg}");
            ExitCode::from(3)
        }
    }
}

enum CliError {
    Usage(String),
    Verification(String),
    Internal(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        match e {
            Error::Inconsistency(_)
            | Error::OrbitCountMismatch { .. }
            | Error::ActionNotClosed
            | Error::MissingIdentity => CliError::Internal(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

struct Flags {
    values: HashMap<String, String>,
}

impl Flags {
    fn parse(args: &[String], allowed: &[&str]) -> Result<Flags, CliError> {
        let mut values = HashMap::new();
        let mut it = args.iter();
        while let Some(arg) = it.next() {
            let Some(name) = arg.strip_prefix("--") else {
                return Err(CliError::Usage(format!("unexpected argument '{arg}'")));
            };
            if !allowed.contains(&name) {
                return Err(CliError::Usage(format!("unknown flag '--{name}'")));
            }
            let value = it
                .next()
                .ok_or_else(|| CliError::Usage(format!("flag '--{name}' needs a value")))?;
            values.insert(name.to_string(), value.clone());
        }
        Ok(Flags { values })
    }

    fn require(&self, name: &str) -> Result<&str, CliError> {
        self.values
            .get(name)
            .map(|s| s.as_str())
            .ok_or_else(|| CliError::Usage(format!("missing required flag '--{name}'")))
    }

    fn get(&self, name: &str) -> Option<&str> {
        self.values.get(name).map(|s| s.as_str())
    }

    fn jobs(&self) -> Result<usize, CliError> {
        match self.get("jobs") {
            None => Ok(std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)),
            Some(v) => v
                .parse::<usize>()
                .ok()
                .filter(|&n| n >= 1)
                .ok_or_else(|| CliError::Usage(format!("invalid --jobs value '{v}'"))),
        }
    }
}

fn emit(flags: &Flags, text: &str) -> Result<(), CliError> {
    match flags.get("out") {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("cannot write '{path}': {e}"))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn field_from_q(q_text: &str) -> Result<Arc<FieldCtx>, CliError> {
    let q: u64 = q_text
        .parse()
        .map_err(|_| CliError::Usage(format!("invalid field order '{q_text}'")))?;
    let (p, n) = gf::prime_power(q)?;
    Ok(Arc::new(FieldCtx::new(p as u32, n)?))
}

fn parse_curve(flags: &Flags, flag: &str, ctx: &Arc<FieldCtx>) -> Result<TernaryForm, CliError> {
    Ok(forms::parse_form(ctx, flags.require(flag)?)?)
}

fn run(args: &[String]) -> Result<ExitCode, CliError> {
    let Some(sub) = args.first() else {
        return Err(CliError::Usage("no subcommand given".to_string()));
    };
    if sub == "--help" || sub == "-h" || sub == "help" {
        println!("{USAGE}");
        return Ok(ExitCode::SUCCESS);
    }
    let rest = &args[1..];
    match sub.as_str() {
        "count-points" => count_points(rest),
        "spectrum" => spectrum(rest),
        "nu-table" => nu_table(rest),
        "sziklai-classify" => sziklai_classify(rest),
        "search-maximal" => search_maximal(rest),
        "equiv" => equiv(rest),
        "verify-identity" => verify_identity(rest),
        "kernel-check" => kernel_check(rest),
        other => Err(CliError::Usage(format!("unknown subcommand '{other}'"))),
    }
}

fn count_points(args: &[String]) -> Result<ExitCode, CliError> {
    let flags = Flags::parse(args, &["curve", "q", "out"])?;
    let ctx = field_from_q(flags.require("q")?)?;
    let f = parse_curve(&flags, "curve", &ctx)?;
    let n = f.count_points();
    let mut out = format!(
        "q = {}, degree = {}\ncurve: {}\nN = {n}\n",
        ctx.q(),
        f.degree(),
        f.to_text()
    );
    match forms::bounds(f.degree() as u64, ctx.q() as u64) {
        Ok((ap, sz)) => {
            out.push_str(&format!("aubry_perret_bound = {ap}\nsziklai_bound = {sz}\n"));
        }
        Err(_) => out.push_str("bounds: not applicable to degree 1\n"),
    }
    emit(&flags, &out)?;
    Ok(ExitCode::SUCCESS)
}

fn spectrum(args: &[String]) -> Result<ExitCode, CliError> {
    let flags = Flags::parse(args, &["curve", "q", "out"])?;
    let ctx = field_from_q(flags.require("q")?)?;
    let f = parse_curve(&flags, "curve", &ctx)?;
    let spec = f.line_spectrum();
    let mut out = format!(
        "q = {}, degree = {}\ncurve: {}\nspectrum: {spec}\n",
        ctx.q(),
        f.degree(),
        f.to_text()
    );
    if f.degree() == 3 {
        let mu: Vec<usize> = (0..=3).map(|d| spec.count(d)).collect();
        out.push_str(&format!(
            "mu = ({}, {}, {}, {})\n",
            mu[0], mu[1], mu[2], mu[3]
        ));
    }
    emit(&flags, &out)?;
    Ok(ExitCode::SUCCESS)
}

fn nu_table(args: &[String]) -> Result<ExitCode, CliError> {
    let flags = Flags::parse(args, &["q-list", "jobs", "out"])?;
    let q_list: Vec<u64> = flags
        .require("q-list")?
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| CliError::Usage(format!("invalid q '{s}' in --q-list")))
        })
        .collect::<Result<_, _>>()?;
    if q_list.is_empty() {
        return Err(CliError::Usage("--q-list is empty".to_string()));
    }
    let jobs = flags.jobs()?.min(q_list.len());
    let rows: Vec<Result<report::NuRow, CliError>> = if jobs <= 1 {
        q_list.iter().map(|&q| nu_row(q)).collect()
    } else {
        std::thread::scope(|scope| {
            let chunk = q_list.len().div_ceil(jobs);
            let handles: Vec<_> = q_list
                .chunks(chunk)
                .map(|qs| scope.spawn(move || qs.iter().map(|&q| nu_row(q)).collect::<Vec<_>>()))
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("nu-table worker panicked"))
                .collect()
        })
    };
    let mut out =
        String::from("q,case,nu_formula,nu_direct,fix_id,fix_12,fix_23,fix_13,fix_123,fix_132\n");
    for row in rows {
        let row = row?;
        if row.nu_formula != row.nu_direct {
            return Err(CliError::Internal(format!(
                "nu mismatch at q = {}: formula {} vs direct {}",
                row.q, row.nu_formula, row.nu_direct
            )));
        }
        out.push_str(&row.to_csv());
        out.push('\n');
    }
    emit(&flags, &out)?;
    Ok(ExitCode::SUCCESS)
}

fn nu_row(q: u64) -> Result<report::NuRow, CliError> {
    let (p, n) = gf::prime_power(q)?;
    let ctx = FieldCtx::new(p as u32, n)?;
    let fixed = sziklai::fixed_point_row(&ctx);
    Ok(report::NuRow {
        q,
        case: sziklai::case_label(p as u32, q as u32).to_string(),
        nu_formula: sziklai::nu_formula(q)?,
        nu_direct: sziklai::nu_direct(&ctx)?,
        fixed,
    })
}

fn sziklai_classify(args: &[String]) -> Result<ExitCode, CliError> {
    let flags = Flags::parse(args, &["q", "out"])?;
    let ctx = field_from_q(flags.require("q")?)?;
    let orbits = sziklai::classify_orbits(&ctx)?;
    let mut out = String::from("q,representative,orbit_size,members\n");
    for (rep, members) in &orbits {
        let member_list: Vec<String> = members.iter().map(|t| t.format(&ctx)).collect();
        out.push_str(&format!(
            "{},{},{},{}\n",
            ctx.q(),
            rep.format(&ctx),
            members.len(),
            member_list.join(";")
        ));
    }
    emit(&flags, &out)?;
    Ok(ExitCode::SUCCESS)
}

fn search_maximal(args: &[String]) -> Result<ExitCode, CliError> {
    let flags = Flags::parse(args, &["q", "jobs", "out"])?;
    let q_text = flags.require("q")?;
    if q_text != "4" {
        return Err(CliError::Usage(format!(
            "the exhaustive search is supported only for --q 4, got '{q_text}'"
        )));
    }
    let ctx = field_from_q(q_text)?;
    let jobs = flags.jobs()?;
    let classification = maximal::classify_maximal(&ctx, jobs)?;
    let json = report::search_maximal_json(&ctx, &classification)
        .map_err(|e| CliError::Internal(e.to_string()))?;
    emit(&flags, &json)?;
    Ok(ExitCode::SUCCESS)
}

fn equiv(args: &[String]) -> Result<ExitCode, CliError> {
    let flags = Flags::parse(args, &["curve-a", "curve-b", "q", "out"])?;
    let ctx = field_from_q(flags.require("q")?)?;
    let a = parse_curve(&flags, "curve-a", &ctx)?;
    let b = parse_curve(&flags, "curve-b", &ctx)?;
    let witness = groups::are_equivalent(&a, &b)?;
    let mut out = format!(
        "q = {}\ncurve-a: {}\ncurve-b: {}\n",
        ctx.q(),
        a.to_text(),
        b.to_text()
    );
    match witness {
        Some(m) => {
            out.push_str("equivalent: true\n");
            out.push_str(&format!("witness: {}\n", m.format(&ctx)));
            if groups::act_on_form(&m, &a) != b {
                return Err(CliError::Internal(
                    "equivalence witness fails to map curve-a to curve-b".to_string(),
                ));
            }
        }
        None => out.push_str("equivalent: false\n"),
    }
    emit(&flags, &out)?;
    Ok(ExitCode::SUCCESS)
}

fn verify_identity(args: &[String]) -> Result<ExitCode, CliError> {
    let flags = Flags::parse(args, &["out"])?;
    let ring = quotient::CurveRing::new()?;
    let mut out = String::new();
    let mut all = true;
    for (section, rep) in [
        ("identity", quotient::verify_identity(&ring)),
        ("corollary", quotient::verify_corollary(&ring)),
    ] {
        for check in &rep.checks {
            let status = if check.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("[{section}] {status} {}", check.name));
            if !check.passed {
                if let Some(residue) = &check.residue {
                    out.push_str(&format!(" (residue: {residue})"));
                }
            }
            out.push('\n');
            all &= check.passed;
        }
    }
    emit(&flags, &out)?;
    if all {
        Ok(ExitCode::SUCCESS)
    } else {
        Err(CliError::Verification(
            "one or more identity checks failed".to_string(),
        ))
    }
}

fn kernel_check(args: &[String]) -> Result<ExitCode, CliError> {
    let flags = Flags::parse(args, &["q", "out"])?;
    let ctx = field_from_q(flags.require("q")?)?;
    let q = ctx.q() as usize;
    let pts: Vec<(Fe, Fe)> = ctx
        .nonzero_elements()
        .flat_map(|x| ctx.nonzero_elements().map(move |y| (x, y)))
        .collect();
    let basis = forms::vanishing_space(&ctx, &pts, q - 1);
    let mut out = format!(
        "q = {q}, points = (F_q*)^2 ({} points), max_deg = {}\ndimension = {}\n",
        pts.len(),
        q - 1,
        basis.dimension()
    );
    for row in 0..basis.dimension() {
        out.push_str(&format!("basis[{row}] = {}\n", basis.format_row(&ctx, row)));
    }
    let ok = check_kernel_shape(&ctx, &basis, q);
    out.push_str(if ok {
        "kernel-check: PASS\n"
    } else {
        "kernel-check: FAIL\n"
    });
    emit(&flags, &out)?;
    if ok {
        Ok(ExitCode::SUCCESS)
    } else {
        Err(CliError::Verification(format!(
            "vanishing ideal at q = {q} is not spanned by x^{}-1 and y^{}-1",
            q - 1,
            q - 1
        )))
    }
}

fn check_kernel_shape(ctx: &FieldCtx, basis: &forms::VanishingBasis, q: usize) -> bool {
    if basis.dimension() != 2 {
        return false;
    }
    let idx = |i: usize, j: usize| basis.monomials.iter().position(|&m| m == (i, j));
    let minus_one = ctx.neg(Fe::ONE);
    for (row, lead) in [(0usize, (q - 1, 0usize)), (1usize, (0usize, q - 1))] {
        let Some(li) = idx(lead.0, lead.1) else {
            return false;
        };
        let Some(ci) = idx(0, 0) else { return false };
        let r = &basis.rows[row];
        if r[li] != Fe::ONE || r[ci] != minus_one {
            return false;
        }
        if r.iter().filter(|c| !c.is_zero()).count() != 2 {
            return false;
        }
    }
    true
}
