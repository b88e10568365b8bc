//! Command-line driver. Reports are JSON on stdout, diagnostics on stderr.
//! Exit status: 0 success, 1 a checked statement failed, 2 usage or input
//! error.

use std::io::Read;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::codes::{self, CodewordSearch};
use crate::conic::Conic;
use crate::constructions::{self, CertStatus, Construction};
use crate::error::{Error, Result};
use crate::exterior;
use crate::field::{Field, Modulus};
use crate::plane::{Plane, PointSet, PointSetFile};
use crate::search::{self, MinSearch, SearchOptions};
use crate::tangency;

#[derive(Parser, Debug)]
#[command(name = "tanfree", version, about = "Sets without tangents in PG(2,q)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Trivial,
    TwoConics,
    Interior,
    Punctured,
    Frobenius,
    Trace,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Quick,
    Full,
    Long,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Field parameters: modulus, primitive element, squares.
    FieldInfo {
        #[arg(long)]
        q: u32,
        /// Monic modulus, ascending coefficients, comma separated.
        #[arg(long, value_delimiter = ',')]
        modulus: Option<Vec<u32>>,
    },
    /// Build a named construction and certify it.
    Construct {
        #[arg(long)]
        q: u32,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        a: Option<u32>,
        #[arg(long, default_value_t = 1)]
        r: usize,
    },
    /// Check that a point set has no tangents.
    Verify {
        #[arg(long)]
        set: PathBuf,
    },
    /// Line spectrum of a set, or the non-negative solutions of the
    /// standard counting equations for `n` points.
    Spectrum {
        #[arg(long, conflicts_with_all = ["n", "q"])]
        set: Option<PathBuf>,
        #[arg(long, requires = "q")]
        n: Option<usize>,
        #[arg(long)]
        q: Option<u32>,
        #[arg(long, default_value_t = 4)]
        max_i: usize,
    },
    /// Smallest set without tangents.
    SearchMin {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        cap: usize,
        /// Allow the long-running orders 9 and 11.
        #[arg(long)]
        long: bool,
        #[arg(long)]
        workers: Option<usize>,
        /// Time budget in seconds for long runs.
        #[arg(long, default_value_t = 6 * 3600)]
        budget: u64,
    },
    /// All sets without tangents of a given size.
    Enumerate {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Projective equivalence classes of all sets without tangents of size n.
    Classify {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Points extending the exterior points of an external line.
    ExteriorExtend {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        all_lines: bool,
        #[arg(long, default_value_t = 3)]
        transforms: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exterior sets of (q+1)/2 exterior points.
    ExteriorClique {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        no3col: bool,
    },
    /// A dual codeword supported exactly on a set.
    DualCodeword {
        #[arg(long)]
        set: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Peeling decoder on an erasure pattern.
    Peel {
        #[arg(long)]
        q: Option<u32>,
        #[arg(long)]
        erased: PathBuf,
    },
    /// Runs the bundled checks.
    Theoremsuite {
        #[arg(long, value_enum, default_value_t = Level::Quick)]
        level: Level,
        #[arg(long)]
        workers: Option<usize>,
    },
}

fn read_input(path: &PathBuf) -> Result<String> {
    let mut s = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Format(e.to_string()))?;
    } else {
        s = std::fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    }
    Ok(s)
}

fn load_set(path: &PathBuf) -> Result<PointSet> {
    PointSetFile::parse(&read_input(path)?)?.load()
}

fn options(workers: Option<usize>) -> SearchOptions {
    workers.map_or_else(SearchOptions::default, SearchOptions::workers)
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

/// Report and whether every checked statement held.
type Outcome = (Value, bool);

fn field_info(q: u32, modulus: Option<Vec<u32>>) -> Result<Outcome> {
    let (p, h) = crate::field::prime_power(q).ok_or(Error::NotPrime(q))?;
    let f = Field::new(p, h, modulus.map_or(Modulus::Auto, Modulus::Given))?;
    let squares = f.nonzero().filter(|&x| f.is_nonzero_square(x)).count();
    Ok((
        json!({
            "field": f.spec(),
            "q": f.q(),
            "primitive": f.primitive(),
            "nonzero_squares": squares,
            "smallest_non_square": f.smallest_non_square(),
        }),
        true,
    ))
}

fn construction(kind: Kind, a: Option<u32>, r: usize) -> Construction {
    match kind {
        Kind::Trivial => Construction::Trivial,
        Kind::TwoConics => Construction::TwoConics { a },
        Kind::Interior => Construction::Interior,
        Kind::Punctured => Construction::PuncturedInterior { r },
        Kind::Frobenius => Construction::FrobeniusGraph,
        Kind::Trace => Construction::TraceGraph,
    }
}

fn construct(q: u32, kind: Kind, a: Option<u32>, r: usize) -> Result<Outcome> {
    let plane = Plane::with_order(q)?;
    let (set, cert) = construction(kind, a, r).build(&plane)?;
    let ok = cert.status != CertStatus::Invalid;
    Ok((json!({ "certificate": cert, "set": set }), ok))
}

fn verify(path: &PathBuf) -> Result<Outcome> {
    let s = load_set(path)?;
    let ok = tangency::is_set_without_tangents(&s);
    let spectrum = tangency::spectrum(&s);
    Ok((
        json!({
            "status": if ok { "VALID" } else { "INVALID" },
            "size": s.len(),
            "spectrum": spectrum,
            "tangents": tangency::tangent_lines(&s).len(),
        }),
        ok,
    ))
}

fn spectrum(set: Option<PathBuf>, n: Option<usize>, q: Option<u32>, max_i: usize) -> Result<Outcome> {
    if let Some(path) = set {
        let s = load_set(&path)?;
        let sp = tangency::spectrum(&s);
        let ok = sp.satisfies_identities(s.plane().q(), s.len());
        return Ok((json!({ "size": s.len(), "spectrum": sp }), ok));
    }
    match (n, q) {
        (Some(n), Some(q)) => {
            let sols = tangency::spectrum_solutions(n, q, max_i)?;
            Ok((json!({ "n": n, "q": q, "max_i": max_i, "solutions": sols }), true))
        }
        _ => Err(Error::Format("give --set, or --n and --q".into())),
    }
}

fn min_report(r: &search::MinSearchReport) -> Value {
    json!({
        "q": r.q,
        "u": r.u,
        "witness": r.witness,
        "spectrum": tangency::spectrum(&r.witness),
        "lower_bound": r.lower_bound,
        "bound_gap": r.bound_gap(),
        "nodes_expanded": r.nodes_expanded,
        "levels": r.levels,
        "wall_time": secs(r.wall_time),
    })
}

fn search_min(q: u32, cap: usize, long: bool, workers: Option<usize>, budget: u64) -> Result<Outcome> {
    let plane = Plane::with_order(q)?;
    if q >= 9 && !long {
        return Err(Error::TooLarge(format!("q = {q} is a long run; pass --long")));
    }
    let mut opts = options(workers);
    if long {
        opts = opts.with_budget(Duration::from_secs(budget));
    }
    match search::min_tangent_free_budgeted(&plane, cap, &opts)? {
        MinSearch::Exact(r) => Ok((min_report(&r), true)),
        MinSearch::Partial(p) => Ok((
            json!({
                "q": p.q,
                "status": "TIME_BUDGET_EXCEEDED",
                "verified_lower_bound": p.verified_lower_bound,
                "best_witness": p.best_witness,
                "best_size": p.best_witness.as_ref().map(|w| w.len()),
                "levels": p.levels,
                "wall_time": secs(p.wall_time),
            }),
            false,
        )),
    }
}

fn enumerate(q: u32, n: usize, workers: Option<usize>) -> Result<Outcome> {
    let plane = Plane::with_order(q)?;
    let sets = search::enumerate_tangent_free(&plane, n, &options(workers))?;
    Ok((json!({ "q": q, "n": n, "count": sets.len(), "sets": sets }), true))
}

fn classify(q: u32, n: usize, workers: Option<usize>) -> Result<Outcome> {
    let plane = Plane::with_order(q)?;
    let sets = search::enumerate_tangent_free(&plane, n, &options(workers))?;
    let classes = search::classify_up_to_pgl(&plane, &sets)?;
    let ok = classes.iter().all(|c| c.class_size * c.stabilizer_order == search::pgl_order(q));
    Ok((
        json!({
            "q": q,
            "n": n,
            "sets": sets.len(),
            "group_order": search::pgl_order(q),
            "classes": classes,
        }),
        ok,
    ))
}

fn exterior_extend(q: u32, all_lines: bool, transforms: usize, seed: u64) -> Result<Outcome> {
    let plane = Plane::with_order(q)?;
    let (conic, l, _) = exterior::canonical_setup(&plane)?;
    let canonical = exterior::find_extenders(&conic, l)?;
    let report = exterior::verify_dichotomy(&plane, transforms, all_lines, seed)?;
    let ok = report.holds();
    Ok((
        json!({
            "canonical": canonical,
            "off_line_extenders": canonical.extenders_off_line.len(),
            "dichotomy": report,
        }),
        ok,
    ))
}

fn exterior_clique(q: u32, no3col: bool) -> Result<Outcome> {
    let plane = Plane::with_order(q)?;
    let conic = Conic::canonical(&plane)?;
    let sets = exterior::exterior_clique_search(&conic, no3col)?;
    let collinear = sets.iter().filter(|s| exterior::is_collinear(s)).count();
    let unions: Vec<&PointSet> = sets.iter().filter(|e| exterior::conic_union_check(&conic, e)).collect();
    let ok = q % 4 != 1 || collinear == sets.len();
    Ok((
        json!({
            "q": q,
            "count": sets.len(),
            "collinear": collinear,
            "tangent_free_unions": unions.len(),
            "union_witness": unions.first().map(|e| conic.points().union(e)),
            "sets": sets,
        }),
        ok,
    ))
}

fn dual_codeword(path: &PathBuf, seed: u64) -> Result<Outcome> {
    let s = load_set(path)?;
    Ok(match codes::dual_codeword_on_support(&s, seed) {
        CodewordSearch::Found(v) => {
            let ok = codes::support_tangency(s.plane(), &v)?;
            (json!({ "result": "FOUND", "weight": v.weight(), "coefficients": v.coefficients }), ok)
        }
        CodewordSearch::NoneFound { exact } => (json!({ "result": "NONE", "exact": exact }), true),
    })
}

fn peel(q: Option<u32>, path: &PathBuf) -> Result<Outcome> {
    let s = load_set(path)?;
    if let Some(q) = q {
        if s.plane().q() != q {
            return Err(Error::Format(format!("erasure file is over q = {}, not {q}", s.plane().q())));
        }
    }
    let r = codes::peel_decode(&s);
    let ok = r == codes::maximal_stopping_subset(&s);
    Ok((json!({ "erased": s.len(), "residual_size": r.len(), "residual": r }), ok))
}

#[derive(serde::Serialize)]
struct Check {
    name: String,
    pass: bool,
    detail: Value,
}

fn check(out: &mut Vec<Check>, name: impl Into<String>, f: impl FnOnce() -> Result<(bool, Value)>) {
    let name = name.into();
    let start = Instant::now();
    let (pass, detail) = f().unwrap_or_else(|e| (false, json!({ "error": e.to_string() })));
    eprintln!("{} {name} ({:.2?})", if pass { "pass" } else { "FAIL" }, start.elapsed());
    out.push(Check { name, pass, detail });
}

fn odd_prime_powers(lo: u32, hi: u32) -> Vec<u32> {
    (lo..=hi).filter(|&q| q % 2 == 1 && crate::field::prime_power(q).is_some()).collect()
}

fn census_check(q: u32) -> Result<(bool, Value)> {
    let plane = Plane::with_order(q)?;
    let c = Conic::canonical(&plane)?;
    let q = q as usize;
    let lines = c.line_census();
    let points = c.point_census();
    let ok = lines == (q + 1, q * (q + 1) / 2, q * (q - 1) / 2) && points == (q + 1, q * (q + 1) / 2, q * (q - 1) / 2);
    Ok((ok, json!({ "lines": [lines.0, lines.1, lines.2], "points": [points.0, points.1, points.2] })))
}

fn constructions_check(q: u32) -> Result<(bool, Value)> {
    let plane = Plane::with_order(q)?;
    let mut kinds = vec![Construction::Trivial, Construction::Interior];
    if q > 5 {
        kinds.push(Construction::TwoConics { a: None });
    }
    kinds.extend((1..=(q as usize).saturating_sub(5) / 2).map(|r| Construction::PuncturedInterior { r }));
    if plane.field().h() > 1 {
        kinds.push(Construction::TraceGraph);
        kinds.push(Construction::FrobeniusGraph);
    }
    let mut ok = true;
    let mut certs = Vec::new();
    for k in kinds {
        let (_, cert) = k.build(&plane)?;
        let want = match k {
            Construction::FrobeniusGraph => {
                let (q, p) = (q as usize, plane.field().p() as usize);
                cert.tangent_free && cert.actual_size == constructions::frobenius_constructed_size(q, p)
            }
            _ => cert.status == CertStatus::Valid,
        };
        ok &= want;
        certs.push(cert);
    }
    Ok((ok, json!(certs)))
}

fn u_check(q: u32, expected: usize, opts: &SearchOptions) -> Result<(bool, Value)> {
    let plane = Plane::with_order(q)?;
    let r = search::min_tangent_free(&plane, 2 * q as usize, opts)?;
    Ok((r.u == expected, min_report(&r)))
}

fn dichotomy_check(q: u32) -> Result<(bool, Value)> {
    let r = exterior::verify_dichotomy(&Plane::with_order(q)?, 3, false, 0)?;
    Ok((r.holds(), json!(r.cases.iter().map(|c| c.off_line.len()).collect::<Vec<_>>())))
}

fn theoremsuite(level: Level, workers: Option<usize>) -> Result<Outcome> {
    let opts = options(workers);
    let mut out = Vec::new();
    let max_q = if level == Level::Quick { 7 } else { 13 };
    for q in odd_prime_powers(3, max_q) {
        check(&mut out, format!("conic census q={q}"), || census_check(q));
    }
    for q in odd_prime_powers(5, max_q) {
        check(&mut out, format!("constructions q={q}"), || constructions_check(q));
    }
    check(&mut out, "spectrum system n=10 q=5", || {
        let sols = tangency::spectrum_solutions(10, 5, 4)?;
        let got: Vec<String> = sols.iter().map(|s| s.to_string()).collect();
        Ok((got == ["0:5 2:21 3:2 4:3", "0:6 2:15 3:10"], json!(got)))
    });
    check(&mut out, "u_3 = 6", || u_check(3, 6, &opts));
    check(&mut out, "u_5 = 10", || u_check(5, 10, &opts));
    let hoofd_max = match level {
        Level::Quick => 7,
        Level::Full => 13,
        Level::Long => 29,
    };
    for q in odd_prime_powers(5, hoofd_max) {
        check(&mut out, format!("extension dichotomy q={q}"), || dichotomy_check(q));
    }
    check(&mut out, "PG(2,5) ten-set", || {
        let t = exterior::pg25_ten_set()?;
        Ok((t.concurrent && tangency::is_set_without_tangents(&t.set) && t.set.len() == 10, json!(t)))
    });
    if level != Level::Quick {
        check(&mut out, "u_7 = 12", || u_check(7, 12, &opts));
        check(&mut out, "PG(2,5) size-10 classification", || {
            let (v, _) = classify(5, 10, workers)?;
            let n = v["classes"].as_array().map_or(0, |c| c.len());
            Ok((n == 2, v["classes"].clone()))
        });
        for q in [5, 7, 11] {
            check(&mut out, format!("exterior cliques q={q}"), || {
                let (v, ok) = exterior_clique(q, false)?;
                let unions = v["tangent_free_unions"].as_u64().unwrap_or(0);
                let want = if q % 4 == 1 { ok } else { unions > 0 };
                Ok((want, json!({ "count": v["count"], "collinear": v["collinear"], "unions": unions })))
            });
        }
    }
    if level == Level::Long {
        let long = SearchOptions { deadline: Some(Instant::now() + Duration::from_secs(12 * 3600)), ..opts.clone() };
        check(&mut out, "u_9 = 15", || u_check(9, 15, &long));
        check(&mut out, "u_11 = 18", || u_check(11, 18, &long));
    }
    let passed = out.iter().filter(|c| c.pass).count();
    let ok = passed == out.len();
    Ok((json!({ "level": format!("{level:?}").to_lowercase(), "passed": passed, "total": out.len(), "checks": out }), ok))
}

pub fn execute(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::FieldInfo { q, modulus } => field_info(q, modulus),
        Command::Construct { q, kind, a, r } => construct(q, kind, a, r),
        Command::Verify { set } => verify(&set),
        Command::Spectrum { set, n, q, max_i } => spectrum(set, n, q, max_i),
        Command::SearchMin { q, cap, long, workers, budget } => search_min(q, cap, long, workers, budget),
        Command::Enumerate { q, n, workers } => enumerate(q, n, workers),
        Command::Classify { q, n, workers } => classify(q, n, workers),
        Command::ExteriorExtend { q, all_lines, transforms, seed } => exterior_extend(q, all_lines, transforms, seed),
        Command::ExteriorClique { q, no3col } => exterior_clique(q, no3col),
        Command::DualCodeword { set, seed } => dual_codeword(&set, seed),
        Command::Peel { q, erased } => peel(q, &erased),
        Command::Theoremsuite { level, workers } => theoremsuite(level, workers),
    }
}

/// Parses `args` (including the program name), runs, prints, and returns
/// the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok((report, ok)) => {
            println!("{}", serde_json::to_string_pretty(&report).expect("plain data"));
            if ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
