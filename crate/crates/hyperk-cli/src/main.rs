//! Command-line front end: build structures, run verifications, compute
//! K-theories and run the interchange, zero-sum witness and adjunction
//! checks. All reports are JSON with deterministic bytes for fixed inputs;
//! `--pretty` switches to indented rendering.
//!
//! Exit codes: 0 all checks pass, 1 a verification failed, 2 malformed
//! input or invalid arguments, 3 resource cap exceeded, 4 internal witness
//! round-trip inconsistency.

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use hyperk::doc::{self, GradedDoc};
use hyperk::ktheory::{
    adjunction_unit, f_sharp, fixsg3_backward, fixsg3_forward, graded_iso_exists, reduced_k,
    smc_check, Fixsg3Outcome, GradedKData, IgrData, KError, RelationMode,
};
use hyperk::{
    builtin, check_dm, check_hyperfield, check_igr, check_multiring, check_sg, classify,
    dm_ktheory, m_of_g, marshall_quotient, nonzero_squares, product_h, sg_of_hyperfield,
    AxiomCheck, BuilderSpec, F2Error, FiniteHyperfield, FiniteMultiring, SgError,
};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "hyperk", version, about = "Finite hyperfields, special groups and their K-theories")]
struct Cli {
    /// Render JSON output indented instead of compact.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a structure and emit its canonical JSON document.
    Build(BuildArgs),
    /// Verify an axiom suite against a structure document.
    Verify(VerifyArgs),
    /// Compute the reduced K-theory of a hyperfield document.
    Ktheory(KtheoryArgs),
    /// Compare the K-theory routes through gf(p) modulo squares.
    Interchange(InterchangeArgs),
    /// Decide a degree-2 zero sum and round-trip its witness.
    Fixsg3(Fixsg3Args),
    /// Check the unit map into the hyperfield of the K-theory.
    Adjunction(AdjunctionArgs),
}

#[derive(Args)]
struct BuildArgs {
    /// Builtin name: q2, krasner, kaleidoscope<n>, h<p>, gf<p>.
    #[arg(long, conflicts_with_all = ["product", "quotient"])]
    builtin: Option<String>,
    /// Two builtin names combined with the hyperbolic product.
    #[arg(long, num_args = 2, value_names = ["LEFT", "RIGHT"], conflicts_with = "quotient")]
    product: Option<Vec<String>>,
    /// Builtin name to be quotiented by a multiplicative scalar set.
    #[arg(long)]
    quotient: Option<String>,
    /// Use the nonzero squares as the scalar set.
    #[arg(long, requires = "quotient", conflicts_with = "by")]
    by_squares: bool,
    /// Comma-separated element indices forming the scalar set.
    #[arg(long, requires = "quotient", value_delimiter = ',')]
    by: Option<Vec<usize>>,
    /// Write to this path instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Axiom suite: multiring, hyperfield, dm or sg.
    #[arg(long)]
    level: String,
    /// Structure document (hyperfield JSON; special-group JSON for sg).
    input: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct KtheoryArgs {
    /// Hyperfield document.
    input: PathBuf,
    /// Maximum degree.
    #[arg(short = 'N', long = "max-degree", default_value_t = 4)]
    max_degree: usize,
    /// Which slot pairs generate relations: distinct, adjacent or
    /// include-equal.
    #[arg(long, default_value = "distinct")]
    relation_mode: RelationMode,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct InterchangeArgs {
    /// Odd prime p; the routes go through gf(p) modulo squares.
    #[arg(short, long)]
    prime: usize,
    #[arg(short = 'N', long = "max-degree", default_value_t = 3)]
    max_degree: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct Fixsg3Args {
    /// Pre-special hyperfield document.
    input: PathBuf,
    /// Element name for the a-list; repeat the flag for longer lists.
    #[arg(long = "a-list", action = clap::ArgAction::Append, allow_hyphen_values = true, required = true)]
    a_list: Vec<String>,
    /// Element name for the b-list; repeat the flag for longer lists.
    #[arg(long = "b-list", action = clap::ArgAction::Append, allow_hyphen_values = true, required = true)]
    b_list: Vec<String>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct AdjunctionArgs {
    /// Pre-special hyperfield document.
    input: PathBuf,
    #[arg(short = 'N', long = "max-degree", default_value_t = 2)]
    max_degree: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// Failure carrying the process exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    fn input(error: anyhow::Error) -> Self {
        Failure { code: 2, error }
    }

    fn resource(error: anyhow::Error) -> Self {
        Failure { code: 3, error }
    }
}

fn from_kerror(e: KError) -> Failure {
    match &e {
        KError::F2(F2Error::AmbientTooLarge { .. }) | KError::DegreeOutOfRange { .. } => {
            Failure::resource(anyhow!(e))
        }
        KError::DependentInput => Failure::input(anyhow!(e)),
        _ => Failure::input(anyhow!(e)),
    }
}

fn from_sgerror(e: SgError) -> Failure {
    match &e {
        SgError::FormRelTooLarge { .. } => Failure::resource(anyhow!(e)),
        _ => Failure::input(anyhow!(e)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pretty = cli.pretty;
    let result = match cli.command {
        Command::Build(args) => cmd_build(args, pretty),
        Command::Verify(args) => cmd_verify(args, pretty),
        Command::Ktheory(args) => cmd_ktheory(args, pretty),
        Command::Interchange(args) => cmd_interchange(args, pretty),
        Command::Fixsg3(args) => cmd_fixsg3(args, pretty),
        Command::Adjunction(args) => cmd_adjunction(args, pretty),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn emit<T: Serialize>(value: &T, output: Option<&PathBuf>, pretty: bool) -> Result<(), Failure> {
    let rendered = doc::render(value, pretty);
    match output {
        Some(path) => std::fs::write(path, rendered)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(Failure::input),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

fn parse_builder(name: &str) -> Result<FiniteMultiring, Failure> {
    let spec: BuilderSpec = name.parse().map_err(|e| Failure::input(anyhow!("{e}")))?;
    builtin(&spec).map_err(|e| Failure::input(anyhow!(e)))
}

fn as_hyperfield(m: FiniteMultiring) -> Result<FiniteHyperfield, Failure> {
    FiniteHyperfield::try_new(m).map_err(|e| Failure::input(anyhow!(e)))
}

fn load_hyperfield(path: &PathBuf) -> Result<FiniteMultiring, Failure> {
    let bytes = std::fs::read(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Failure::input)?;
    doc::parse_hyperfield(&bytes).map_err(|e| Failure::input(anyhow!(e)))
}

fn cmd_build(args: BuildArgs, pretty: bool) -> Result<u8, Failure> {
    let ring = if let Some(name) = &args.builtin {
        parse_builder(name)?
    } else if let Some(pair) = &args.product {
        let left = as_hyperfield(parse_builder(&pair[0])?)?;
        let right = as_hyperfield(parse_builder(&pair[1])?)?;
        product_h(&left, &right)
            .map_err(|e| Failure::input(anyhow!(e)))?
            .into_ring()
    } else if let Some(name) = &args.quotient {
        let parent = parse_builder(name)?;
        let scalars = if args.by_squares {
            nonzero_squares(&parent)
        } else {
            args.by.clone().unwrap_or_default()
        };
        if scalars.is_empty() {
            return Err(Failure::input(anyhow!(
                "--quotient needs --by-squares or --by with a nonempty index list"
            )));
        }
        marshall_quotient(&parent, &scalars)
            .map_err(|e| Failure::input(anyhow!(e)))?
            .quotient
    } else {
        return Err(Failure::input(anyhow!(
            "build needs one of --builtin, --product or --quotient"
        )));
    };
    emit(&doc::HyperfieldDoc::from_multiring(&ring), args.output.as_ref(), pretty)?;
    Ok(0)
}

#[derive(Serialize)]
struct VerifyReport {
    level: String,
    name: String,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    classification: Option<String>,
    checks: Vec<AxiomCheck>,
}

fn cmd_verify(args: VerifyArgs, pretty: bool) -> Result<u8, Failure> {
    let (report, name, classification) = match args.level.as_str() {
        "multiring" => {
            let m = load_hyperfield(&args.input)?;
            (check_multiring(&m), m.name().to_string(), None)
        }
        "hyperfield" => {
            let m = load_hyperfield(&args.input)?;
            (check_hyperfield(&m), m.name().to_string(), None)
        }
        "dm" => {
            let m = load_hyperfield(&args.input)?;
            let name = m.name().to_string();
            let f = as_hyperfield(m)?;
            let classification = classify(&f).to_string();
            (check_dm(&f), name, Some(classification))
        }
        "sg" => {
            let bytes = std::fs::read(&args.input)
                .with_context(|| format!("reading {}", args.input.display()))
                .map_err(Failure::input)?;
            let table = doc::parse_special_group(&bytes).map_err(|e| Failure::input(anyhow!(e)))?;
            let sg = check_sg(&table);
            (
                sg.report,
                format!("sg_dim{}", table.dim()),
                Some(sg.classification.to_string()),
            )
        }
        other => {
            return Err(Failure::input(anyhow!(
                "unknown verification level `{other}` (expected multiring, hyperfield, dm or sg)"
            )))
        }
    };
    let pass = report.all_pass();
    let out = VerifyReport {
        level: args.level,
        name,
        pass,
        classification,
        checks: report.checks,
    };
    emit(&out, args.output.as_ref(), pretty)?;
    Ok(if pass { 0 } else { 1 })
}

#[derive(Serialize)]
struct KtheoryReport {
    k1_dim: usize,
    degrees: Vec<doc::GradedDegreeDoc>,
    dims: Vec<usize>,
    relation_mode: RelationMode,
    mode_dims: ModeDims,
    modes_agree: bool,
    smc: hyperk::ktheory::SmcReport,
    igr: IgrVerdict,
}

#[derive(Serialize)]
struct ModeDims {
    distinct: Vec<usize>,
    adjacent: Vec<usize>,
    include_equal: Vec<usize>,
}

#[derive(Serialize)]
struct IgrVerdict {
    pass: bool,
    failed: Vec<String>,
}

fn cmd_ktheory(args: KtheoryArgs, pretty: bool) -> Result<u8, Failure> {
    let f = as_hyperfield(load_hyperfield(&args.input)?)?;
    let data = reduced_k(&f, args.max_degree, args.relation_mode).map_err(from_kerror)?;
    let mode_dims = ModeDims {
        distinct: reduced_k(&f, args.max_degree, RelationMode::Distinct)
            .map_err(from_kerror)?
            .dims(),
        adjacent: reduced_k(&f, args.max_degree, RelationMode::Adjacent)
            .map_err(from_kerror)?
            .dims(),
        include_equal: reduced_k(&f, args.max_degree, RelationMode::IncludeEqual)
            .map_err(from_kerror)?
            .dims(),
    };
    let modes_agree =
        mode_dims.distinct == mode_dims.adjacent && mode_dims.distinct == mode_dims.include_equal;
    let smc = smc_check(&data).map_err(from_kerror)?;
    let igr = IgrData::from_graded(&data).map_err(from_kerror)?;
    let igr_report = check_igr(&igr);
    let graded = GradedDoc::from_data(&data);
    let out = KtheoryReport {
        k1_dim: graded.k1_dim,
        degrees: graded.degrees,
        dims: data.dims(),
        relation_mode: args.relation_mode,
        mode_dims,
        modes_agree,
        smc,
        igr: IgrVerdict {
            pass: igr_report.all_pass(),
            failed: igr_report.failed_axioms().iter().map(|s| s.to_string()).collect(),
        },
    };
    emit(&out, args.output.as_ref(), pretty)?;
    Ok(0)
}

#[derive(Serialize)]
struct InterchangeReport {
    prime: usize,
    max_degree: usize,
    marshall_dims: Vec<usize>,
    dm_dims: Vec<usize>,
    m_of_g_dims: Vec<usize>,
    dims_equal: bool,
    iso_marshall_vs_dm: bool,
    iso_dm_vs_m_of_g: bool,
}

fn is_odd_prime(p: usize) -> bool {
    p > 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn cmd_interchange(args: InterchangeArgs, pretty: bool) -> Result<u8, Failure> {
    if !is_odd_prime(args.prime) {
        return Err(Failure::input(anyhow!(
            "interchange needs an odd prime, got {}; quadratic structure needs characteristic ≠ 2",
            args.prime
        )));
    }
    let field = builtin(&BuilderSpec::Gf(args.prime)).map_err(|e| Failure::input(anyhow!(e)))?;
    let squares = nonzero_squares(&field);
    let quot = marshall_quotient(&field, &squares).map_err(|e| Failure::input(anyhow!(e)))?;
    let qf = as_hyperfield(quot.quotient)?;
    let marshall_k = reduced_k(&qf, args.max_degree, RelationMode::Distinct).map_err(from_kerror)?;
    let sg = sg_of_hyperfield(&qf).map_err(from_sgerror)?;
    let dm_k = dm_ktheory(&sg, args.max_degree).map_err(from_sgerror)?;
    let mg = m_of_g(&sg).map_err(|e| Failure::input(anyhow!(e)))?;
    let mg_k = reduced_k(&mg, args.max_degree, RelationMode::Distinct).map_err(from_kerror)?;

    let dims_equal = marshall_k.dims() == dm_k.dims() && dm_k.dims() == mg_k.dims();
    let iso1 = graded_iso_exists(&marshall_k, &dm_k).map_err(from_kerror)?.is_some();
    let iso2 = graded_iso_exists(&dm_k, &mg_k).map_err(from_kerror)?.is_some();
    let out = InterchangeReport {
        prime: args.prime,
        max_degree: args.max_degree,
        marshall_dims: marshall_k.dims(),
        dm_dims: dm_k.dims(),
        m_of_g_dims: mg_k.dims(),
        dims_equal,
        iso_marshall_vs_dm: iso1,
        iso_dm_vs_m_of_g: iso2,
    };
    let pass = dims_equal && iso1 && iso2;
    emit(&out, args.output.as_ref(), pretty)?;
    Ok(if pass { 0 } else { 1 })
}

#[derive(Serialize)]
#[serde(tag = "outcome")]
enum Fixsg3Report {
    #[serde(rename = "witness")]
    Witness {
        witness: hyperk::ktheory::Fixsg3Witness,
        backward_ok: bool,
    },
    #[serde(rename = "nonzero")]
    NonZero { reduced: Vec<u8> },
}

fn cmd_fixsg3(args: Fixsg3Args, pretty: bool) -> Result<u8, Failure> {
    let f = as_hyperfield(load_hyperfield(&args.input)?)?;
    let resolve = |names: &[String]| -> Result<Vec<usize>, Failure> {
        names
            .iter()
            .map(|n| {
                f.element_by_name(n)
                    .ok_or_else(|| Failure::input(anyhow!("unknown element name `{n}`")))
            })
            .collect()
    };
    let a = resolve(&args.a_list)?;
    let b = resolve(&args.b_list)?;
    match fixsg3_forward(&f, &a, &b).map_err(from_kerror)? {
        Fixsg3Outcome::NonZero { reduced } => {
            let out = Fixsg3Report::NonZero {
                reduced: reduced.to_bits(),
            };
            emit(&out, args.output.as_ref(), pretty)?;
            Ok(1)
        }
        Fixsg3Outcome::Witness(witness) => {
            let back = fixsg3_backward(&f, &witness).map_err(from_kerror)?;
            let out = Fixsg3Report::Witness {
                witness,
                backward_ok: back.ok,
            };
            emit(&out, args.output.as_ref(), pretty)?;
            Ok(if back.ok { 0 } else { 4 })
        }
    }
}

#[derive(Serialize)]
struct AdjunctionReport {
    morphism_pass: bool,
    unit_group_bijective: bool,
    hyperfield_iso: bool,
    f_sharp_of_unit_is_identity: bool,
    triangle_holds: bool,
    uniqueness_verified: Option<bool>,
}

fn cmd_adjunction(args: AdjunctionArgs, pretty: bool) -> Result<u8, Failure> {
    let f = as_hyperfield(load_hyperfield(&args.input)?)?;
    let unit = adjunction_unit(&f, args.max_degree).map_err(from_kerror)?;
    let data: GradedKData =
        reduced_k(&f, args.max_degree.max(2), RelationMode::Distinct).map_err(from_kerror)?;
    let igr = IgrData::from_graded(&data).map_err(from_kerror)?;
    let sharp = f_sharp(&unit.unit, &f, &data, &igr).map_err(from_kerror)?;
    let identity = (1..=data.max_degree()).all(|n| {
        sharp.maps[n]
            .iter()
            .enumerate()
            .all(|(k, col)| col.ones().collect::<Vec<_>>() == vec![k])
    });
    let pass = unit.morphism.all_pass() && unit.unit_group_bijective && identity && sharp.triangle_holds;
    let out = AdjunctionReport {
        morphism_pass: unit.morphism.all_pass(),
        unit_group_bijective: unit.unit_group_bijective,
        hyperfield_iso: unit.hyperfield_iso,
        f_sharp_of_unit_is_identity: identity,
        triangle_holds: sharp.triangle_holds,
        uniqueness_verified: sharp.uniqueness,
    };
    emit(&out, args.output.as_ref(), pretty)?;
    Ok(if pass { 0 } else { 1 })
}
