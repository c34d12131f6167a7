//! Command-line front end. [`run`] parses arguments, executes one
//! subcommand and returns the process exit code:
//! 0 success or affirmative verdict, 1 negative verdict, 2 usage error,
//! 3 resource bound exceeded.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gabor::{build_max_localized_basis, classify_optimizer, is_orthonormal_basis};
use crate::group::GroupSpec;
use crate::lieb::lieb_check;
use crate::phase::format_rational;
use crate::second_degree::{ambiguity_closed_form, cyclic_subcharacter, Subcharacter};
use crate::symplectic::{
    brute_force_maximal_isotropic, enumerate_maximal_isotropic_bounded, IsotropicTriple,
    PhaseSpace, DEFAULT_ATLAS_COUNT_CAP, DEFAULT_ATLAS_ORDER_BOUND,
};
use crate::tf::{ambiguity, lp_norm, random_unit_window, shift_idx, stft, support, Window, DEFAULT_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BOUND: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "maxloc", version, about = "Maximally localized windows on finite abelian groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List every maximal isotropic subgroup of A × Â.
    Atlas {
        #[command(flatten)]
        common: Common,
        /// Largest |A| accepted.
        #[arg(long, default_value_t = DEFAULT_ATLAS_ORDER_BOUND)]
        bound: usize,
        /// Required together with a --bound above the default.
        #[arg(long)]
        allow_large: bool,
    },
    /// Build and verify the orthonormal basis of a maximally localized window.
    Basis {
        #[command(flatten)]
        common: Common,
        /// Position in the atlas.
        #[arg(long, conflicts_with_all = ["b", "p"])]
        index: Option<usize>,
        /// Cyclic groups: support aZ_N with a = N/b.
        #[arg(long, requires = "p")]
        b: Option<u64>,
        #[arg(long, requires = "b")]
        p: Option<u64>,
        /// Modulation applied to the cyclic window.
        #[arg(long, default_value_t = 0)]
        xi: u64,
    },
    /// Decide whether a window is maximally localized.
    Classify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        window: PathBuf,
    },
    /// L^p norms of V_g f against ‖f‖‖g‖.
    Lieb {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[arg(long = "p-list", value_delimiter = ',', default_value = "0.5,1,2,3,4")]
        p_list: Vec<f64>,
    },
    /// Run the sampled and exhaustive property checks on one group.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// Group such as Z4 or Z2xZ4.
    #[arg(value_name = "GROUP")]
    group_pos: Option<String>,
    #[arg(long)]
    group: Option<String>,
    /// Relative support threshold for floating-point windows.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

enum Output {
    Json(Value),
    Csv(Vec<Vec<String>>),
}

struct Outcome {
    output: Output,
    code: i32,
}

impl Common {
    fn group(&self) -> Result<GroupSpec> {
        let s = match (&self.group_pos, &self.group) {
            (Some(a), Some(b)) if a != b => {
                return Err(Error::InvalidParameter(format!("conflicting groups {a} and {b}")))
            }
            (Some(a), _) | (None, Some(a)) => a,
            (None, None) => return Err(Error::InvalidParameter("no group given".into())),
        };
        s.parse()
    }

    fn tol(&self) -> Result<f64> {
        if self.tol > 0.0 && self.tol.is_finite() {
            Ok(self.tol)
        } else {
            Err(Error::InvalidParameter("--tol must be positive".into()))
        }
    }
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let common = match &cli.command {
        Command::Atlas { common, .. }
        | Command::Basis { common, .. }
        | Command::Classify { common, .. }
        | Command::Lieb { common, .. }
        | Command::Verify { common, .. } => common,
    };
    let result = common
        .tol()
        .and_then(|_| execute(&cli.command))
        .and_then(|o| emit(o, common));
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::BoundExceeded { .. } => EXIT_BOUND,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn emit(o: Outcome, common: &Common) -> Result<i32> {
    let text = match (o.output, common.format) {
        (Output::Json(v), Format::Json) => serde_json::to_string_pretty(&v)? + "\n",
        (Output::Csv(rows), Format::Csv) => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in rows {
                w.write_record(&r).map_err(|e| Error::Malformed(e.to_string()))?;
            }
            String::from_utf8(w.into_inner().map_err(|e| Error::Malformed(e.to_string()))?)
                .expect("csv output is utf-8")
        }
        (Output::Json(_), Format::Csv) => {
            return Err(Error::InvalidParameter("this command only writes JSON".into()))
        }
        (Output::Csv(_), Format::Json) => unreachable!("csv output is only built on request"),
    };
    match &common.out {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(o.code)
}

fn execute(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Atlas {
            common,
            bound,
            allow_large,
        } => {
            if *bound > DEFAULT_ATLAS_ORDER_BOUND && !allow_large {
                return Err(Error::InvalidParameter(format!(
                    "--bound above {DEFAULT_ATLAS_ORDER_BOUND} needs --allow-large"
                )));
            }
            atlas(&common.group()?, *bound, common.format)
        }
        Command::Basis {
            common,
            index,
            b,
            p,
            xi,
        } => basis(&common.group()?, *index, b.zip(*p), *xi, common.tol()?),
        Command::Classify { common, window } => classify(&common.group()?, window, common.tol()?),
        Command::Lieb {
            common, f, g, p_list, ..
        } => lieb(&common.group()?, f, g, p_list, common.format),
        Command::Verify {
            common,
            seed,
            samples,
        } => verify(&common.group()?, *seed, *samples, common.tol()?, common.format),
    }
}

fn coords(g: &GroupSpec, idx: usize) -> Vec<u64> {
    g.element_at(idx).0
}

fn triple_json(t: &IsotropicTriple) -> Value {
    json!({
        "H": t.h().canonical_basis().iter().map(|(e, _)| &e.0).collect::<Vec<_>>(),
        "K": t.k().canonical_basis().iter().map(|(e, _)| &e.0).collect::<Vec<_>>(),
        "phi": t.phi().images().iter().map(|e| &e.0).collect::<Vec<_>>(),
        "measure": format_rational(&t.measure()),
        "maximal": t.is_maximal(),
    })
}

fn sigma(n: u64) -> u64 {
    (1..=n).filter(|d| n % d == 0).sum()
}

fn atlas(a: &GroupSpec, bound: usize, format: Format) -> Result<Outcome> {
    let triples = enumerate_maximal_isotropic_bounded(a, bound, DEFAULT_ATLAS_COUNT_CAP)?;
    let output = match format {
        Format::Json => {
            let mut v = json!({
                "group": a.to_string(),
                "count": triples.len(),
                "triples": triples.iter().map(triple_json).collect::<Vec<_>>(),
            });
            if a.rank() <= 1 {
                let n = a.order() as u64;
                v["cyclic_check"] = json!({
                    "divisor_sum": sigma(n),
                    "matches": sigma(n) == triples.len() as u64,
                });
            }
            Output::Json(v)
        }
        Format::Csv => {
            let mut rows = vec![vec!["index", "H", "K", "phi", "measure", "maximal"]
                .into_iter()
                .map(String::from)
                .collect()];
            for (i, t) in triples.iter().enumerate() {
                let j = triple_json(t);
                rows.push(vec![
                    i.to_string(),
                    j["H"].to_string(),
                    j["K"].to_string(),
                    j["phi"].to_string(),
                    format_rational(&t.measure()),
                    t.is_maximal().to_string(),
                ]);
            }
            Output::Csv(rows)
        }
    };
    Ok(Outcome {
        output,
        code: EXIT_OK,
    })
}

fn basis(
    a: &GroupSpec,
    index: Option<usize>,
    cyclic: Option<(u64, u64)>,
    xi: u64,
    tol: f64,
) -> Result<Outcome> {
    let (t, window) = match (index, cyclic) {
        (Some(i), None) => {
            let all = enumerate_maximal_isotropic_bounded(a, DEFAULT_ATLAS_ORDER_BOUND, DEFAULT_ATLAS_COUNT_CAP)?;
            let t = all
                .get(i)
                .cloned()
                .ok_or_else(|| Error::InvalidParameter(format!("atlas has {} entries", all.len())))?;
            let w = build_max_localized_basis(&t)?.window;
            (t, w)
        }
        (None, Some((b, p))) => {
            if a.rank() > 1 {
                return Err(Error::InvalidParameter("--b/--p need a cyclic group".into()));
            }
            let h = cyclic_subcharacter(a.order() as u64, b, p, xi)?;
            (h.triple()?, h.normalized_window())
        }
        _ => return Err(Error::InvalidParameter("give --index or --b with --p".into())),
    };
    let b = build_max_localized_basis(&t)?;
    let sys = crate::gabor::GaborSystem::from_indices(window.clone(), b.lattice.clone())?;
    let report = is_orthonormal_basis(&sys, 1e-12)?;
    let measure = support(&ambiguity(&window)?, tol).measure();
    let pg = t.space().group().clone();
    let v = json!({
        "window": window.to_json(),
        "triple": triple_json(&t),
        "lattice": b.lattice.iter().map(|&z| coords(&pg, z)).collect::<Vec<_>>(),
        "gram_max_offdiag": report.gram_max_offdiag,
        "rank": report.rank,
        "support_measure": format_rational(&measure),
        "orthonormal_basis": report.is_basis,
    });
    Ok(Outcome {
        output: Output::Json(v),
        code: if report.is_basis { EXIT_OK } else { EXIT_NEGATIVE },
    })
}

fn read_window(a: &GroupSpec, path: &PathBuf) -> Result<Window> {
    let w = Window::from_json(&fs::read_to_string(path)?)?;
    if w.group() != a {
        return Err(Error::GroupMismatch {
            left: w.group().to_string(),
            right: a.to_string(),
        });
    }
    Ok(w)
}

fn classify(a: &GroupSpec, path: &PathBuf, tol: f64) -> Result<Outcome> {
    let f = read_window(a, path)?;
    let v = classify_optimizer(&f, tol)?;
    Ok(Outcome {
        code: if v.is_optimizer() { EXIT_OK } else { EXIT_NEGATIVE },
        output: Output::Json(v.to_json()),
    })
}

fn lieb(a: &GroupSpec, f: &PathBuf, g: &PathBuf, ps: &[f64], format: Format) -> Result<Outcome> {
    let f = read_window(a, f)?;
    let g = read_window(a, g)?;
    let reports = ps
        .iter()
        .map(|&p| lieb_check(&f, &g, p))
        .collect::<Result<Vec<_>>>()?;
    let ok = reports.iter().all(|r| r.margin >= -1e-12 * r.bound);
    let output = match format {
        Format::Json => Output::Json(Value::Array(reports.iter().map(|r| r.to_json()).collect())),
        Format::Csv => {
            let mut rows = vec![["p", "norm", "bound", "margin", "equality"].map(String::from).to_vec()];
            rows.extend(reports.iter().map(|r| {
                vec![
                    r.p.to_string(),
                    r.norm.to_string(),
                    r.bound.to_string(),
                    r.margin.to_string(),
                    r.equality.to_string(),
                ]
            }));
            Output::Csv(rows)
        }
    };
    Ok(Outcome {
        output,
        code: if ok { EXIT_OK } else { EXIT_NEGATIVE },
    })
}

struct Suite {
    name: &'static str,
    checked: usize,
    failures: usize,
}

fn verify(a: &GroupSpec, seed: u64, samples: usize, tol: f64, format: Format) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let space = PhaseSpace::new(a);
    let mut suites = Vec::new();
    let one = crate::phase::Rational::from(1);

    let mut unc = Suite { name: "support_uncertainty", checked: 0, failures: 0 };
    let mut pars = Suite { name: "parseval", checked: 0, failures: 0 };
    let mut lb = Suite { name: "lieb_direction", checked: 0, failures: 0 };
    for _ in 0..samples {
        let f = random_unit_window(a, &mut rng);
        let g = random_unit_window(a, &mut rng);
        let m = support(&ambiguity(&f)?, tol).measure().to_f64().unwrap();
        unc.checked += 1;
        unc.failures += usize::from(m < 1.0 - 1e-9);
        let v = stft(&f, &g)?;
        pars.checked += 1;
        pars.failures += usize::from((lp_norm(&v, 2.0)? - 1.0).abs() > 1e-12);
        for p in [0.5, 1.0, 1.5, 3.0, 4.0] {
            lb.checked += 1;
            lb.failures += usize::from(lieb_check(&f, &g, p)?.margin < -1e-12);
        }
    }
    suites.extend([unc, pars, lb]);

    let triples = enumerate_maximal_isotropic_bounded(a, DEFAULT_ATLAS_ORDER_BOUND, DEFAULT_ATLAS_COUNT_CAP)?;
    if a.order() <= 16 {
        let brute = brute_force_maximal_isotropic(a)?;
        let mut listed: Vec<_> = triples.iter().map(|t| t.subgroup().members().to_vec()).collect();
        listed.sort();
        let mut found: Vec<_> = brute.iter().map(|g| g.members().to_vec()).collect();
        found.sort();
        suites.push(Suite {
            name: "atlas_vs_brute_force",
            checked: 1,
            failures: usize::from(listed != found),
        });
    }
    let mut cf = Suite { name: "closed_form_ambiguity", checked: 0, failures: 0 };
    let mut onb = Suite { name: "orthonormal_basis", checked: 0, failures: 0 };
    let mut cls = Suite { name: "classification_round_trip", checked: 0, failures: 0 };
    for t in &triples {
        let h = Subcharacter::from_triple(t)?;
        cf.checked += 1;
        let same = ambiguity_closed_form(&h)?.exact_eq(&ambiguity(&h.window())?);
        cf.failures += usize::from(same != Some(true));

        let b = build_max_localized_basis(t)?;
        onb.checked += 1;
        let r = is_orthonormal_basis(&b.system(), 1e-12)?;
        onb.failures += usize::from(!r.is_basis);

        let z = rng.random_range(0..space.len());
        let (x, xi) = space.split_idx(z);
        let c = Complex64::from_polar(rng.random_range(0.5..2.0), rng.random_range(0.0..std::f64::consts::TAU));
        let f = shift_idx(&b.window, x, xi).scale(c);
        cls.checked += 1;
        let ok = match classify_optimizer(&f, tol)? {
            v if v.support_measure() == one => v
                .witness()
                .is_some_and(|w| w.reconstruct().distance(&f).unwrap_or(f64::INFINITY) <= 1e-9),
            _ => false,
        };
        cls.failures += usize::from(!ok);
    }
    suites.extend([cf, onb, cls]);

    let pass = suites.iter().all(|s| s.failures == 0);
    let output = match format {
        Format::Json => Output::Json(json!({
            "group": a.to_string(),
            "seed": seed,
            "samples": samples,
            "suites": suites.iter().map(|s| json!({
                "name": s.name,
                "checked": s.checked,
                "failures": s.failures,
                "pass": s.failures == 0,
            })).collect::<Vec<_>>(),
            "pass": pass,
        })),
        Format::Csv => {
            let mut rows = vec![["suite", "checked", "failures", "pass"].map(String::from).to_vec()];
            rows.extend(suites.iter().map(|s| {
                vec![
                    s.name.to_string(),
                    s.checked.to_string(),
                    s.failures.to_string(),
                    (s.failures == 0).to_string(),
                ]
            }));
            Output::Csv(rows)
        }
    };
    Ok(Outcome {
        output,
        code: if pass { EXIT_OK } else { EXIT_NEGATIVE },
    })
}
