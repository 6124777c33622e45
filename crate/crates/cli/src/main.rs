use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_traits::Zero;
use supergerbe::body_soul;
use supergerbe::deligne::{self, IntegerClass};
use supergerbe::examples;
use supergerbe::expr::format_form;
use supergerbe::manifest::{emit_certificate, emit_decomposition, parse_evidence, Evidence, Manifest};
use supergerbe::report::{Check, Report};
use supergerbe::selftest;
use supergerbe::Error;

#[derive(Parser)]
#[command(name = "supergerbe", version, about = "Exact Čech–Deligne calculus for gerbes on supermanifolds")]
struct Cli {
    /// Write the structured report to this file.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, env = "SUPERGERBE_PARALLEL", default_value_t = 0)]
    parallel: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Cocycle and curvature checks on a gerbe.
    Check { manifest: String, gerbe: String },
    /// Dixmier–Douady class and its pairings with declared cycles.
    Dd { manifest: String, gerbe: String },
    /// Global curvature 3-form.
    Curvature { manifest: String, gerbe: String },
    /// Cochain-level identity between the class and the curvature.
    RepIdentity { manifest: String, gerbe: String },
    /// Search for a trivialization certificate.
    Trivialize {
        manifest: String,
        gerbe: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build a gerbe with the given integral curvature; writes the manifest with it added.
    Construct {
        manifest: String,
        form: String,
        #[arg(short, long)]
        output: PathBuf,
        /// Name for the new gerbe.
        #[arg(long, default_value = "G")]
        name: String,
    },
    /// Integral class of a closed 2-form.
    Integral { manifest: String, form: String },
    /// Split a gerbe into a body gerbe and a soul twist.
    Decompose {
        manifest: String,
        gerbe: String,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check a certificate or decomposition document against a gerbe.
    Verify { manifest: String, gerbe: String, certificate: PathBuf },
    /// Built-in example manifests.
    Examples {
        #[command(subcommand)]
        cmd: ExamplesCmd,
    },
    /// Property suite over the built-in corpus.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 40)]
        cases: usize,
    },
}

#[derive(Subcommand)]
enum ExamplesCmd {
    List,
    Emit { name: String },
}

/// A path, or `builtin:<name>` for an example.
fn load(spec: &str) -> Result<Manifest, Error> {
    match spec.strip_prefix("builtin:") {
        Some(name) => examples::build(name),
        None => Manifest::load(Path::new(spec)),
    }
}

fn write(path: &Path, text: &str) -> Result<(), Error> {
    std::fs::write(path, text).map_err(|e| Error::Manifest(format!("cannot write {}: {}", path.display(), e)))
}

fn class_values(rep: &mut Report, m: &Manifest, k: &IntegerClass) -> Result<(), Error> {
    let c = &m.cover;
    rep.value("level", k.level.to_string());
    rep.value("nonzero", k.values.iter().filter(|v| !v.is_zero()).count().to_string());
    rep.value("coboundary", k.is_coboundary(c)?.to_string());
    for (name, z) in &c.cycles {
        if z.level == k.level {
            rep.value(&format!("pairing.{}", name), k.pair(z).to_string());
        }
    }
    Ok(())
}

fn run(cmd: Cmd) -> Result<(Report, Option<String>), Error> {
    Ok(match cmd {
        Cmd::Check { manifest, gerbe } => {
            let m = load(&manifest)?;
            let mut rep = deligne::check(&m.cover, m.gerbe(&gerbe)?);
            rep.title = "check".into();
            (rep, None)
        }
        Cmd::Dd { manifest, gerbe } => {
            let m = load(&manifest)?;
            let c = &m.cover;
            let k = deligne::dd_class(c, m.gerbe(&gerbe)?)?;
            let mut rep = Report::new("dd");
            let dk = c.delta(&k.family())?;
            rep.push(Check::from_option("δk = 0", dk.first_nonzero().map(|i| format!("tuple {}", i))));
            class_values(&mut rep, &m, &k)?;
            (rep, None)
        }
        Cmd::Curvature { manifest, gerbe } => {
            let m = load(&manifest)?;
            let c = &m.cover;
            let g = m.gerbe(&gerbe)?;
            let h = deligne::curvature(c, g)?;
            let mut rep = Report::new("curvature");
            rep.push(Check::from_option("dH = 0", (!c.alg.d(&h).is_zero()).then(|| "not closed".into())));
            let db = c.d_family(&g.b);
            rep.push(Check::from_option("dB = H", (db != c.global_family(&h)?).then(|| "differs".into())));
            rep.value("H", format_form(&c.alg, &h));
            (rep, None)
        }
        Cmd::RepIdentity { manifest, gerbe } => {
            let m = load(&manifest)?;
            let mut rep = deligne::check_rep_identity(&m.cover, m.gerbe(&gerbe)?);
            rep.title = "rep_identity".into();
            (rep, None)
        }
        Cmd::Trivialize { manifest, gerbe, output } => {
            let m = load(&manifest)?;
            let g = m.gerbe(&gerbe)?;
            let cert = deligne::trivialize(&m.cover, g)?;
            let mut rep = deligne::verify_certificate(&m.cover, g, &cert);
            rep.title = "trivialize".into();
            let text = emit_certificate(&m.cover, &gerbe, &cert);
            match output {
                Some(p) => {
                    write(&p, &text)?;
                    (rep, None)
                }
                None => (rep, Some(text)),
            }
        }
        Cmd::Construct { manifest, form, output, name } => {
            let mut m = load(&manifest)?;
            let h = m.form_or_expr(&form)?;
            let g = deligne::construct_from_integral_form(&m.cover, &h)?;
            let mut rep = Report::new("construct");
            let curv = deligne::curvature(&m.cover, &g)?;
            rep.push(Check::from_option("curvature equals input", (curv != h).then(|| format_form(&m.cover.alg, &curv))));
            rep.extend("rep identity", deligne::check_rep_identity(&m.cover, &g));
            class_values(&mut rep, &m, &deligne::dd_class(&m.cover, &g)?)?;
            m.gerbes.insert(name, g);
            write(&output, &m.emit())?;
            (rep, None)
        }
        Cmd::Integral { manifest, form } => {
            let m = load(&manifest)?;
            let w = m.form_or_expr(&form)?;
            let k = deligne::integral_check(&m.cover, &w)?;
            let mut rep = Report::new("integral");
            rep.push(Check::pass("integral"));
            class_values(&mut rep, &m, &k)?;
            (rep, None)
        }
        Cmd::Decompose { manifest, gerbe, output } => {
            let m = load(&manifest)?;
            let g = m.gerbe(&gerbe)?;
            let d = body_soul::decompose(&m.cover, g)?;
            let mut rep = body_soul::verify_decomposition(&m.cover, g, &d);
            rep.title = "decompose".into();
            rep.value("beta", format_form(&m.cover.alg, &d.beta));
            write(&output, &emit_decomposition(&m.cover, &gerbe, &d))?;
            (rep, None)
        }
        Cmd::Verify { manifest, gerbe, certificate } => {
            let m = load(&manifest)?;
            let g = m.gerbe(&gerbe)?;
            let text = std::fs::read_to_string(&certificate)
                .map_err(|e| Error::Manifest(format!("cannot read {}: {}", certificate.display(), e)))?;
            let (named, ev) = parse_evidence(&m.cover, &text)?;
            let mut rep = match ev {
                Evidence::Certificate(c) => deligne::verify_certificate(&m.cover, g, &c),
                Evidence::Decomposition(d) => body_soul::verify_decomposition(&m.cover, g, &d),
            };
            rep.title = "verify".into();
            if let Some(n) = named {
                if n != gerbe {
                    rep.value("note", format!("document names gerbe `{}`", n));
                }
            }
            (rep, None)
        }
        Cmd::Examples { cmd: ExamplesCmd::List } => {
            let mut out = String::new();
            for (n, d) in examples::NAMES {
                out.push_str(&format!("{:<14} {}\n", n, d));
            }
            let mut rep = Report::new("examples");
            rep.value("count", examples::NAMES.len().to_string());
            (rep, Some(out))
        }
        Cmd::Examples { cmd: ExamplesCmd::Emit { name } } => {
            let text = examples::emit(&name)?;
            (Report::new("examples"), Some(text))
        }
        Cmd::Selftest { seed, cases } => (selftest::run(&selftest::Config { seed, cases }), None),
    })
}

fn failure(title: &str, e: &Error) -> Report {
    let mut rep = Report::new(title);
    rep.value("error", e.kind());
    if let Error::NotIntegral { witness } = e {
        rep.value("witness", witness.clone());
    }
    rep.push(Check::fail(e.kind(), e.to_string()));
    rep
}

fn title(cmd: &Cmd) -> &'static str {
    match cmd {
        Cmd::Check { .. } => "check",
        Cmd::Dd { .. } => "dd",
        Cmd::Curvature { .. } => "curvature",
        Cmd::RepIdentity { .. } => "rep_identity",
        Cmd::Trivialize { .. } => "trivialize",
        Cmd::Construct { .. } => "construct",
        Cmd::Integral { .. } => "integral",
        Cmd::Decompose { .. } => "decompose",
        Cmd::Verify { .. } => "verify",
        Cmd::Examples { .. } => "examples",
        Cmd::Selftest { .. } => "selftest",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.parallel > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.parallel).build_global() {
            eprintln!("warning: {}", e);
        }
    }
    let t = title(&cli.cmd);
    let quiet = matches!(cli.cmd, Cmd::Examples { .. });
    let (rep, payload) = match run(cli.cmd) {
        Ok(x) => x,
        Err(e) => (failure(t, &e), None),
    };
    let text = rep.to_text();
    match payload {
        Some(p) => print!("{}", p),
        None => print!("{}", text),
    }
    if !quiet && !rep.passed() {
        if let Some(f) = rep.first_failure() {
            eprintln!("error: {}: {}", f.name, f.detail.clone().unwrap_or_default());
        }
    }
    if let Some(path) = &cli.report {
        if let Err(e) = std::fs::write(path, &text) {
            eprintln!("error: cannot write {}: {}", path.display(), e);
            return ExitCode::from(2);
        }
    }
    if rep.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
