//! `chg`: command-line front end for chgeom.

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chgeom::hermitian::{line_type, tance, LineType, Point};
use chgeom::holonomy::{holonomy_probe, HolonomyRank, DEFAULT_DS};
use chgeom::isometry::{reflection, CubeRoot, Isometry};
use chgeom::linalg::{c, cr};
use chgeom::paths::{bending, follow_path, PathSample, SphericalBendFixture};
use chgeom::pentagons::{
    apply_pentagon_program, build_pentagon, connect_pentagons, is_real_pentagon,
    pentagon_from_moduli, pentagon_mismatch, sign_law_holds, verify_pentagon_tol, Pentagon,
    PentagonModuli,
};
use chgeom::sample::random_negative_point;
use chgeom::triples::{
    classify_triple, decompose_three_reflections, s_coords, BendProgram, SCoords, Triple,
    TripleClass,
};
use chgeom::{Mat3, C64};
use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::output::{emit, sci, to_json};

#[derive(Parser)]
#[command(name = "chg", version, about = "Reflections, bendings, triples and pentagons in the complex hyperbolic plane")]
struct Cli {
    /// Tolerance for re-validating outputs
    #[arg(long, global = true, env = "CHG_TOL", default_value_t = 1e-9)]
    tol: f64,
    /// Seed for randomized subcommands
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Steps for path-following integrations
    #[arg(long, global = true, default_value_t = 10_000)]
    steps: usize,
    /// Output file (default stdout)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Surface coordinates {t, t1, t2, sigma, alpha, beta} of a triple
    Invariants {
        /// JSON array of three points
        #[arg(long)]
        points: PathBuf,
    },
    /// Reflection in a point, optionally applied to another point
    Reflect {
        #[arg(long)]
        point: PathBuf,
        /// Point to reflect
        #[arg(long)]
        apply: Option<PathBuf>,
    },
    /// Bend a pair of points by s along their geodesic
    Bend {
        /// JSON array of two points
        #[arg(long)]
        pair: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
        /// Also integrate the path-following ODE over [0, s] and report the
        /// distance to the closed form
        #[arg(long)]
        follow: bool,
    },
    /// Write an isometry as R(p3)R(p2)R(p1)
    Decompose {
        #[arg(long)]
        isometry: PathBuf,
    },
    /// Pentagons R(p5)R(p4)R(p3)R(p2)R(p1) = δ
    Pentagon {
        #[command(subcommand)]
        cmd: PentagonCmd,
    },
    /// Rectangle holonomy
    Holonomy {
        #[command(subcommand)]
        cmd: HolonomyCmd,
    },
    /// Reference configurations
    Fixture {
        #[command(subcommand)]
        cmd: FixtureCmd,
    },
}

#[derive(Subcommand)]
enum PentagonCmd {
    /// Construct a pentagon from (p4, p5), from moduli, or from random (p4, p5)
    New {
        /// δ = exp(2πik/3)
        #[arg(long)]
        delta: u8,
        #[arg(long, requires = "p5", conflicts_with = "moduli")]
        p4: Option<PathBuf>,
        #[arg(long, requires = "p4")]
        p5: Option<PathBuf>,
        /// t1,t2,t4,t,s5
        #[arg(long, value_delimiter = ',', num_args = 1, allow_hyphen_values = true)]
        moduli: Option<Vec<f64>>,
    },
    /// Check the relation and report residuals, sign law and realness
    Verify { file: PathBuf },
    /// Bending program carrying the first pentagon to one congruent to the second
    Connect { a: PathBuf, b: PathBuf },
}

#[derive(Subcommand)]
enum HolonomyCmd {
    /// Sample loop holonomies and estimate the dimension they span.
    ///
    /// The verdict is JSON. With --csv the samples are written as CSV with
    /// columns index,c1,c2,off: the two centralizer log-coordinates and the
    /// norm of the component outside the centralizer.
    Probe {
        /// JSON array of three points
        #[arg(long)]
        triple: PathBuf,
        #[arg(long, default_value_t = 12)]
        samples: usize,
        /// Side length of the loops in surface coordinates
        #[arg(long, default_value_t = DEFAULT_DS)]
        ds: f64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum FixtureCmd {
    /// Triple with a spherical line that bends to a hyperbolic one
    SphericalBend {
        /// re[,im]
        #[arg(long, value_delimiter = ',', default_value = "0.125", allow_hyphen_values = true)]
        z: Vec<f64>,
    },
}

enum CliError {
    /// Bad arguments or unreadable input; exit status 2.
    Usage(String),
    /// Domain failure; exit status 1.
    Domain(chgeom::Error),
}

impl From<chgeom::Error> for CliError {
    fn from(e: chgeom::Error) -> Self {
        CliError::Domain(e)
    }
}

type Outcome = Result<String, CliError>;

fn error_name(e: &chgeom::Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|ch: char| !ch.is_alphanumeric()).next().unwrap_or("Error").to_string()
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| match e.classify() {
        serde_json::error::Category::Data => {
            CliError::Domain(chgeom::Error::InvalidInput(format!("{}: {e}", path.display())))
        }
        _ => CliError::Usage(format!("{}: malformed JSON: {e}", path.display())),
    })
}

fn invalid(msg: String) -> CliError {
    CliError::Domain(chgeom::Error::InvalidInput(msg))
}

fn json_line<T: Serialize>(v: &T) -> String {
    let mut s = to_json(v);
    s.push('\n');
    s
}

fn cplx(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Serialize)]
struct ReflectOut {
    isometry: Isometry,
    trace: [f64; 2],
    involution_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    image: Option<Point>,
}

fn reflect(point: &Path, apply: Option<&Path>, tol: f64) -> Outcome {
    let p: Point = read_json(point)?;
    let r = reflection(&p);
    let m = *r.matrix();
    let res = (m * m - Mat3::identity()).norm();
    if res > tol * m.norm_squared().max(1.0) {
        return Err(invalid(format!("R² − I residual {} above tolerance", sci(res))));
    }
    let image = match apply {
        Some(path) => Some(r.apply_point(&read_json::<Point>(path)?)),
        None => None,
    };
    Ok(json_line(&ReflectOut { isometry: r, trace: cplx(r.trace()), involution_residual: res, image }))
}

#[derive(Serialize)]
struct BendOut {
    kind: LineType,
    rate: f64,
    s: f64,
    isometry: Isometry,
    points: [Point; 2],
    product_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    follow_residual: Option<f64>,
}

fn bend(pair: &Path, s: f64, follow: bool, steps: usize, tol: f64) -> Outcome {
    let [p1, p2]: [Point; 2] = read_json(pair)?;
    let b = bending(&p1, &p2)?;
    let g = b.evaluate(s);
    let (q1, q2) = (g.apply_point(&p1), g.apply_point(&p2));
    let before = reflection(&p2) * reflection(&p1);
    let (r1, r2) = (reflection(&q1), reflection(&q2));
    let res = ((r2 * r1).matrix() - before.matrix()).norm();
    // roundoff in reflections of far points scales with their norms
    let scale = r1.matrix().norm() * r2.matrix().norm();
    if res > tol * scale {
        return Err(invalid(format!("product residual {} above tolerance", sci(res))));
    }
    let follow_residual = if follow {
        let dir = if s < 0.0 { -1.0 } else { 1.0 };
        let path = PathSample::from_fn(0.0, s.abs(), steps.max(1), |x| b.evaluate(dir * x).apply(p1.rep()))?;
        let fs = follow_path(&path, &Isometry::identity())?;
        let last = fs.last().expect("path has samples");
        Some((last.matrix() - g.matrix()).norm())
    } else {
        None
    };
    Ok(json_line(&BendOut {
        kind: b.kind,
        rate: b.rate,
        s,
        isometry: g,
        points: [q1, q2],
        product_residual: res,
        follow_residual,
    }))
}

#[derive(Serialize)]
struct DecomposeOut {
    triple: Triple,
    class: TripleClass,
    residual: f64,
}

fn decompose(path: &Path, tol: f64) -> Outcome {
    let f: Isometry = read_json(path)?;
    let t = decompose_three_reflections(&f)?;
    let res = (t.product().matrix() - f.matrix()).norm();
    if res > tol * f.matrix().norm().max(1.0) {
        return Err(invalid(format!("product residual {} above tolerance", sci(res))));
    }
    Ok(json_line(&DecomposeOut { triple: t, class: classify_triple(&t), residual: res }))
}

fn invariants(path: &Path, tol: f64) -> Outcome {
    let t: Triple = read_json(path)?;
    let c: SCoords = s_coords(&t)?;
    c.check(tol)?;
    Ok(json_line(&c))
}

fn pentagon_new(
    delta: u8,
    p4: Option<&Path>,
    p5: Option<&Path>,
    moduli: Option<&[f64]>,
    seed: u64,
    tol: f64,
) -> Outcome {
    let d = CubeRoot::new(delta)?;
    let p = match (p4, p5, moduli) {
        (Some(a), Some(b), _) => build_pentagon(d, &read_json(a)?, &read_json(b)?)?,
        (_, _, Some(m)) => {
            let [t1, t2, t4, t, s5] = <[f64; 5]>::try_from(m)
                .map_err(|_| CliError::Usage("--moduli takes t1,t2,t4,t,s5".into()))?;
            pentagon_from_moduli(&PentagonModuli { t1, t2, t4, t }, d, s5)?
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut last = chgeom::Error::EqualPoints;
            let mut found = None;
            for _ in 0..100 {
                let a = random_negative_point(&mut rng, 0.8);
                let b = random_negative_point(&mut rng, 0.8);
                match build_pentagon(d, &a, &b) {
                    Ok(p) => {
                        found = Some(p);
                        break;
                    }
                    Err(e) => last = e,
                }
            }
            found.ok_or(last)?
        }
    };
    verify_pentagon_tol(&p.points, tol)?;
    Ok(json_line(&p))
}

#[derive(Serialize)]
struct VerifyOut {
    delta: CubeRoot,
    relation_residual: f64,
    trace_identity_residual: f64,
    signs: [i8; 5],
    sign_law: bool,
    real: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    moduli: Option<PentagonModuli>,
}

fn pentagon_verify(path: &Path, tol: f64) -> Outcome {
    let p: Pentagon = read_json(path)?;
    let delta = verify_pentagon_tol(&p.points, tol)?;
    if delta != p.delta {
        return Err(CliError::Domain(chgeom::Error::NotAPentagon(format!(
            "declared k = {} but the product gives k = {}",
            p.delta.k, delta.k
        ))));
    }
    let moduli = if p.positive_index() == Some(0) { p.moduli().ok() } else { None };
    Ok(json_line(&VerifyOut {
        delta,
        relation_residual: p.relation_residual(),
        trace_identity_residual: p.trace_identity_residual(),
        signs: p.signs(),
        sign_law: sign_law_holds(&p),
        real: is_real_pentagon(&p),
        moduli,
    }))
}

#[derive(Serialize)]
struct ConnectOut {
    program: BendProgram,
    moves: usize,
    conjugator: Isometry,
    mismatch: f64,
}

fn pentagon_connect(a: &Path, b: &Path) -> Outcome {
    let (pa, pb): (Pentagon, Pentagon) = (read_json(a)?, read_json(b)?);
    let conn = connect_pentagons(&pa, &pb)?;
    let end = apply_pentagon_program(&pa, &conn.program)?;
    let mismatch = pentagon_mismatch(&end, &pb, &conn.conjugator);
    Ok(json_line(&ConnectOut {
        moves: conn.program.len(),
        program: conn.program,
        conjugator: conn.conjugator,
        mismatch,
    }))
}

#[derive(Serialize)]
struct ProbeOut {
    dimension: usize,
    singular_values: [f64; 3],
    gap: f64,
    conclusive: bool,
    samples: usize,
}

fn holonomy(triple: &Path, samples: usize, ds: f64, csv: Option<&Path>) -> Outcome {
    let t: Triple = read_json(triple)?;
    let h: HolonomyRank = holonomy_probe(&t, samples, ds)?;
    if let Some(path) = csv {
        let mut text = String::from("index,c1,c2,off\n");
        for (k, (c12, off)) in h.samples.iter().zip(&h.off_centralizer).enumerate() {
            text.push_str(&format!("{k},{},{},{}\n", sci(c12[0]), sci(c12[1]), sci(*off)));
        }
        emit(Some(path), &text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    }
    Ok(json_line(&ProbeOut {
        dimension: h.dimension,
        singular_values: h.singular_values,
        gap: h.gap,
        conclusive: h.conclusive,
        samples: h.samples.len(),
    }))
}

#[derive(Serialize)]
struct FixtureOut {
    configuration: SphericalBendFixture,
    ta_p1_p2: f64,
    ta_p2_p3: f64,
    ta_p2_prime_p3: f64,
    line_p2_p3: LineType,
    line_p2_prime_p3: LineType,
}

fn fixture(z: &[f64], tol: f64) -> Outcome {
    let z = match z {
        [re] => c(*re, 0.0),
        [re, im] => c(*re, *im),
        _ => return Err(CliError::Usage("--z takes re[,im]".into())),
    };
    let fx = SphericalBendFixture::new(z)?;
    let out = FixtureOut {
        ta_p1_p2: tance(&fx.p1, &fx.p2),
        ta_p2_p3: tance(&fx.p2, &fx.p3),
        ta_p2_prime_p3: tance(&fx.p2_prime, &fx.p3),
        line_p2_p3: line_type(&fx.p2, &fx.p3)?,
        line_p2_prime_p3: line_type(&fx.p2_prime, &fx.p3)?,
        configuration: fx,
    };
    // |1 + z|² and |½ + 2z|² from the Gram entries
    let want = [(cr(1.0) + z).norm_sqr(), (cr(0.5) + z * cr(2.0)).norm_sqr()];
    for (got, w) in [out.ta_p2_p3, out.ta_p2_prime_p3].into_iter().zip(want) {
        if (got - w).abs() > tol * w.max(1.0) {
            return Err(invalid(format!("tance {} differs from {}", sci(got), sci(w))));
        }
    }
    Ok(json_line(&out))
}

fn run(cli: &Cli) -> Outcome {
    let tol = cli.tol;
    match &cli.command {
        Command::Invariants { points } => invariants(points, tol),
        Command::Reflect { point, apply } => reflect(point, apply.as_deref(), tol),
        Command::Bend { pair, s, follow } => bend(pair, *s, *follow, cli.steps, tol),
        Command::Decompose { isometry } => decompose(isometry, tol),
        Command::Pentagon { cmd } => match cmd {
            PentagonCmd::New { delta, p4, p5, moduli } => pentagon_new(
                *delta,
                p4.as_deref(),
                p5.as_deref(),
                moduli.as_deref(),
                cli.seed,
                tol,
            ),
            PentagonCmd::Verify { file } => pentagon_verify(file, tol),
            PentagonCmd::Connect { a, b } => pentagon_connect(a, b),
        },
        Command::Holonomy { cmd } => match cmd {
            HolonomyCmd::Probe { triple, samples, ds, csv } => {
                holonomy(triple, *samples, *ds, csv.as_deref())
            }
        },
        Command::Fixture { cmd } => match cmd {
            FixtureCmd::SphericalBend { z } => fixture(z, tol),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if !(cli.tol > 0.0) {
        eprintln!("error: --tol must be positive");
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok(text) => match emit(cli.out.as_deref(), &text) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: cannot write output: {e}");
                ExitCode::from(2)
            }
        },
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Domain(e)) => {
            eprintln!("error: {}: {e}", error_name(&e));
            ExitCode::from(1)
        }
    }
}
