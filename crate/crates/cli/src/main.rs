//! `isocert`: command-line front end for the certification pipeline.
//!
//! Exit status:
//!
//! | status | meaning |
//! |--------|---------|
//! | 0 | `Certified` or `RankOne`, a true check, or a completed computation |
//! | 1 | input, argument or scale error |
//! | 2 | `NotQdFree`, `RankTooHigh`, or a false check |
//! | 3 | `SearchInconclusive`, or a search that hit its bound |

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use isocert_core::certifier::{certify, verify_certificate_report, Certificate, CertifyOptions, Verdict};
use isocert_core::chartab::character_table;
use isocert_core::effective::{fusion_partition, search_p_effective, EffectiveContext, EffectiveSearchSpec, SearchOutcome};
use isocert_core::family::{assemble_family, compatible_family};
use isocert_core::permgroup::{catalog_group, is_prime, parse_group_text, GroupInput};
use isocert_core::pstructure::{is_qd_free, rank_profile, PrimeDecomposition, QdPrimeStatus};
use isocert_core::spheremodel::dimension_function;
use isocert_core::{Error, PermutationGroup, ScaleLimit};

const EXIT_OK: u8 = 0;
const EXIT_ERROR: u8 = 1;
const EXIT_NEGATIVE: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "isocert", version, about = "Decide and certify rank two sphere-action hypotheses for finite groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct GroupArgs {
    /// Catalog id: trivial, Cn:<n> (or C<n>), D2n:<n>, Q8, A4, S4, SL2_3, A5, extraspecial_27_exp3, Qd3.
    #[arg(long, conflicts_with = "file")]
    name: Option<String>,
    /// Group file: `degree:` plus `gen:` lines in 1-based cycle notation, or a `name:` line.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Largest group order accepted by enumeration-heavy stages.
    #[arg(long = "max-order")]
    max_order: Option<u64>,
}

impl GroupArgs {
    fn limit(&self) -> ScaleLimit {
        self.max_order.map(ScaleLimit).unwrap_or_default()
    }

    fn has_input(&self) -> bool {
        self.name.is_some() || self.file.is_some()
    }

    fn load(&self) -> Result<GroupInput, Error> {
        let input = match (&self.name, &self.file) {
            (Some(id), None) => load_catalog(id)?,
            (None, Some(path)) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
                parse_group_text(&text)?
            }
            _ => return Err(Error::InvalidArgument("exactly one of --name or --file is required".into())),
        };
        self.limit().check("input group", input.group.order())?;
        Ok(input)
    }
}

/// `C<n>` is accepted as shorthand for `Cn:<n>`.
fn load_catalog(id: &str) -> Result<GroupInput, Error> {
    let canonical = match id.strip_prefix('C') {
        Some(n) if !n.is_empty() && n.bytes().all(|b| b.is_ascii_digit()) => format!("Cn:{n}"),
        _ => id.to_string(),
    };
    Ok(GroupInput {
        group: catalog_group(&canonical)?,
        catalog_id: Some(canonical),
    })
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the full pipeline and optionally write the certificate.
    Certify {
        #[command(flatten)]
        group: GroupArgs,
        /// Dimension bound for every per-prime search (default |G_p|).
        #[arg(long)]
        bound: Option<u64>,
        /// Join multiplier for the sphere S(V^k).
        #[arg(short, default_value_t = 1)]
        k: u64,
        /// Certificate output path.
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Print the p-rank at each prime and the rank.
    Rank {
        #[command(flatten)]
        group: GroupArgs,
    },
    /// Decide Qd(p)-freeness at every odd prime.
    Qdfree {
        #[command(flatten)]
        group: GroupArgs,
    },
    /// Print the character table.
    Chartab {
        #[command(flatten)]
        group: GroupArgs,
    },
    /// Print the G-fusion partition of the Sylow p-subgroup's classes.
    Fusion {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(short)]
        p: u64,
    },
    /// Find a minimal fusion-stable p-effective character of the Sylow p-subgroup.
    SearchEffective {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(short)]
        p: u64,
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Print the fixed-sphere dimension function of the assembled family.
    Dimfun {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        bound: Option<u64>,
        #[arg(short, default_value_t = 1)]
        k: u64,
    },
    /// Re-check a certificate. The group defaults to the certificate's catalog id.
    Verify {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        cert: PathBuf,
    },
}

fn main() -> ExitCode {
    // Usage errors share status 1 with input errors; 2 is reserved for verdicts.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR } else { EXIT_OK });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn check_prime(g: &PermutationGroup, p: u64) -> Result<(), Error> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if !g.order().is_multiple_of(p) {
        return Err(Error::InvalidArgument(format!("p = {p} does not divide |G| = {}", g.order())));
    }
    Ok(())
}

fn verdict_status(v: Verdict) -> u8 {
    match v {
        Verdict::RankOne | Verdict::Certified => EXIT_OK,
        Verdict::RankTooHigh | Verdict::NotQdFree => EXIT_NEGATIVE,
        Verdict::SearchInconclusive => EXIT_INCONCLUSIVE,
    }
}

fn run(command: Command) -> Result<u8, Error> {
    match command {
        Command::Certify { group, bound, k, o } => {
            let input = group.load()?;
            let opts = CertifyOptions {
                k,
                limit: group.limit(),
                default_bound: bound,
                ..CertifyOptions::default()
            };
            let cert = certify(&input.group, input.catalog_id.as_deref(), &opts)?;
            print_certificate_summary(&cert);
            if let Some(path) = o {
                fs::write(&path, cert.to_canonical_string())
                    .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))?;
                println!("certificate: {}", path.display());
            }
            Ok(verdict_status(cert.verdict))
        }
        Command::Rank { group } => {
            let g = group.load()?.group;
            let profile = rank_profile(&g)?;
            println!("order: {}", g.order());
            for r in &profile.per_prime {
                println!("p = {}: rank {} witness <{}>", r.p, r.rank, r.witness.generators().iter().map(ToString::to_string).collect::<Vec<_>>().join(", "));
            }
            println!("rank: {}", profile.rank);
            Ok(EXIT_OK)
        }
        Command::Qdfree { group } => {
            let limit = group.limit();
            let g = group.load()?.group;
            let report = is_qd_free(&g, limit)?;
            for (p, status) in &report.per_prime {
                println!("p = {p}: {}", status.label());
                if let QdPrimeStatus::Involved(w) = status {
                    let gens: Vec<String> = w.k.generators().iter().map(ToString::to_string).collect();
                    println!("  K = <{}> of order {}", gens.join(", "), w.k.order());
                    println!("  N_G(K)/K has order {} on {} points", w.section.order(), w.section.degree());
                    for (x, y) in w.isomorphism.generators.iter().zip(&w.isomorphism.images) {
                        println!("  {x} -> {y}");
                    }
                }
            }
            println!("qd-free: {}", report.free);
            Ok(if report.free { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Chartab { group } => {
            let limit = group.limit();
            let g = group.load()?.group;
            let table = character_table(&g, limit)?;
            println!("order: {} exponent: {} modulus: {}", g.order(), table.exponent(), table.modulus());
            for (i, c) in g.conjugacy_classes().classes().iter().enumerate() {
                println!("class {i}: {} size {} order {}", c.representative, c.size, c.element_order);
            }
            for (i, chi) in table.irreducibles().iter().enumerate() {
                let row: Vec<String> = chi.values().iter().map(ToString::to_string).collect();
                println!("chi{i}: {}", row.join(" "));
            }
            Ok(EXIT_OK)
        }
        Command::Fusion { group, p } => {
            let g = group.load()?.group;
            check_prime(&g, p)?;
            let fp = fusion_partition(&g, p)?;
            let sylow = fp.sylow();
            println!("Sylow {p}-subgroup order {}", sylow.order());
            let classes = sylow.group().conjugacy_classes().classes();
            for (b, block) in fp.blocks().iter().enumerate() {
                let reps: Vec<String> = block.iter().map(|&c| classes[c].representative.to_string()).collect();
                println!("block {b}: classes {block:?} [{}]", reps.join(", "));
            }
            Ok(EXIT_OK)
        }
        Command::SearchEffective { group, p, bound } => {
            let limit = group.limit();
            let g = group.load()?.group;
            check_prime(&g, p)?;
            let ctx = EffectiveContext::new(EffectiveSearchSpec::new(&g, p, bound)?, limit)?;
            println!("Sylow {p}-subgroup order {} target rank {} bound {}", ctx.sylow().order(), ctx.spec.target_rank, ctx.spec.bound);
            match search_p_effective(&ctx)? {
                SearchOutcome::Found(found) => {
                    println!("dimension: {}", found.dimension);
                    println!("multiplicities: {:?}", found.multiplicities);
                    let values: Vec<String> = found.character.values().iter().map(ToString::to_string).collect();
                    println!("values: {}", values.join(" "));
                    Ok(EXIT_OK)
                }
                SearchOutcome::BoundReached { bound } => {
                    println!("no p-effective character of dimension <= {bound}");
                    Ok(EXIT_INCONCLUSIVE)
                }
            }
        }
        Command::Dimfun { group, bound, k } => {
            let limit = group.limit();
            let g = group.load()?.group;
            let mut inputs = Vec::new();
            for p in PrimeDecomposition::of(g.order()).prime_list() {
                let ctx = EffectiveContext::new(EffectiveSearchSpec::new(&g, p, bound)?, limit)?;
                match search_p_effective(&ctx)? {
                    SearchOutcome::Found(found) => inputs.push((ctx.sylow().clone(), found.character)),
                    SearchOutcome::BoundReached { bound } => {
                        println!("p = {p}: no p-effective character of dimension <= {bound}");
                        return Ok(EXIT_INCONCLUSIVE);
                    }
                }
            }
            if inputs.is_empty() {
                println!("trivial group: no prime-power subgroups beyond 1");
                return Ok(EXIT_OK);
            }
            let cf = compatible_family(&assemble_family(&g, &inputs)?, limit)?;
            let df = dimension_function(&cf, k)?;
            println!("family dimension: {}", cf.dimension());
            for e in &df.entries {
                let gens: Vec<String> = e.subgroup.generators().iter().map(ToString::to_string).collect();
                println!("order {} rank {} <{}>: {}", e.subgroup.order(), e.rank, gens.join(", "), e.sphere);
            }
            Ok(EXIT_OK)
        }
        Command::Verify { group, cert } => {
            let text = fs::read_to_string(&cert)
                .map_err(|e| Error::Parse(format!("cannot read {}: {e}", cert.display())))?;
            let certificate = Certificate::parse(&text)?;
            let g = if group.has_input() {
                group.load()?.group
            } else {
                let id = certificate
                    .group
                    .catalog_id
                    .as_deref()
                    .ok_or_else(|| Error::InvalidArgument("certificate has no catalog id; pass --name or --file".into()))?;
                load_catalog(id)?.group
            };
            let report = verify_certificate_report(&certificate, &g)?;
            for (name, ok) in &report.checks {
                println!("{} {name}", if *ok { "ok  " } else { "FAIL" });
            }
            println!("verified: {}", report.passed());
            Ok(if report.passed() { EXIT_OK } else { EXIT_NEGATIVE })
        }
    }
}

fn print_certificate_summary(cert: &Certificate) {
    let g = &cert.group;
    match &g.catalog_id {
        Some(id) => println!("group: {id} (order {}, degree {})", g.order, g.degree),
        None => println!("group: order {}, degree {}", g.order, g.degree),
    }
    let per_prime: Vec<String> = cert.rank.per_prime.iter().map(|r| format!("{}:{}", r.p, r.rank)).collect();
    println!("rank: {} [{}]", cert.rank.rank, per_prime.join(" "));
    for q in &cert.qd_report {
        println!("Qd({}): {}", q.p, q.status);
    }
    for e in &cert.effective {
        match &e.result {
            Some(r) => println!("p = {}: effective dimension {} multiplicities {:?}", e.p, r.dimension, r.multiplicities),
            None => println!("p = {}: bound {} reached", e.p, e.bound),
        }
    }
    if let Some(f) = &cert.family {
        println!("family dimension: {}", f.dimension);
    }
    for d in &cert.dimension_function {
        let entry = match d.entry {
            isocert_core::certifier::DimensionValue::Sphere(m) => format!("S^{m}"),
            isocert_core::certifier::DimensionValue::Empty(_) => "empty".to_string(),
        };
        println!("  order {} rank {}: {entry}", d.order, d.rank);
    }
    if let Some(m) = cert.sphere_dimension {
        println!("sphere: S^{m}");
    }
    for n in &cert.notes {
        println!("note: {n}");
    }
    println!("verdict: {:?}", cert.verdict);
}
