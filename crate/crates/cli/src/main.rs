use clap::{Args, Parser, Subcommand, ValueEnum};
use polycube::arithmetic::{gap_spectrum, ArithmeticError, Component, IntervalFamily, IntervalVariant};
use polycube::ergodic_lab::{self, CensusParams, ErgodicError, Rect, RectangleUnionRegion};
use polycube::geodesic::{GeodesicError, Termination};
use polycube::lattice_manifold::{build_manifold, gallery, LatticeError, Manifest};
use polycube::splitting::{self, SplitConfig, SplittingError};
use polycube::{Direction, DirectionSpec, Flow, ManifoldPoint, Polycube3Manifold, YPoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use report::{sha256_hex, to_json, Envelope, ManifestInfo};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

mod report;

#[derive(Parser)]
#[command(name = "polycube", version, about = "Geodesic flow experiments on polycube 3-manifolds")]
struct Cli {
    /// write the JSON report here as well as to stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Target {
    #[arg(long)]
    manifest: PathBuf,
    /// overrides the manifest direction; golden ratio conjugate by default
    #[arg(long)]
    alpha: Option<String>,
    /// overrides the manifest direction; √2−1 by default
    #[arg(long)]
    beta: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    ThreeDistance,
    SpecialIntervals,
    HalfStrips,
    Parseval,
    Overlap,
    Separation,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Check a manifest and list its singular edge classes
    Validate {
        #[arg(long)]
        manifest: PathBuf,
    },
    /// Follow one orbit through face crossings
    Trace {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        /// starting face label; random when absent
        #[arg(long)]
        face: Option<usize>,
        #[arg(long, requires = "face")]
        x: Option<f64>,
        #[arg(long, requires = "face")]
        z: Option<f64>,
        /// CSV of every face crossing
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Splitting permutation of a product manifold
    Permutation {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        h: usize,
    },
    /// Anchored-box discrepancy of a Y-orbit
    Discrepancy {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 1_000_000)]
        steps: usize,
        #[arg(long, default_value_t = 8)]
        grid: usize,
        /// CSV of discrepancy at powers of ten
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Defective power-chain census
    Census {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 4)]
        k: usize,
        #[arg(long)]
        h: Option<usize>,
        /// `lo..hi` restricts the reported good j
        #[arg(long)]
        j_range: Option<String>,
        #[arg(long, default_value_t = 1e-4)]
        epsilon: f64,
        #[arg(long, default_value_t = 64)]
        ratio: u64,
        /// rectangle approximation: full, left-half, left-half-shifted, or a JSON file
        #[arg(long, default_value = "left-half-shifted")]
        w1: String,
        /// stand-in for the invariant set, same forms as --w1
        #[arg(long, default_value = "left-half")]
        w: String,
    },
    /// Arithmetic and measure-theoretic verification battery
    Lemmas {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value = "golden")]
        alpha: String,
        #[arg(long, default_value_t = 5)]
        k: usize,
    },
    /// Regenerate the reference manifests and permutation reports
    Gallery {
        #[arg(long, default_value = "gallery")]
        dir: PathBuf,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Validation(&'static str, String),
    Singular(&'static str, String),
    Numeric(&'static str, String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Validation(..) => 2,
            Failure::Singular(..) => 3,
            Failure::Numeric(..) => 4,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "Usage",
            Failure::Validation(n, _) | Failure::Singular(n, _) | Failure::Numeric(n, _) => n,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Validation(_, m) | Failure::Singular(_, m) | Failure::Numeric(_, m) => m,
        }
    }
}

impl From<LatticeError> for Failure {
    fn from(e: LatticeError) -> Self {
        Failure::Validation(e.name(), e.to_string())
    }
}

impl From<GeodesicError> for Failure {
    fn from(e: GeodesicError) -> Self {
        match e {
            GeodesicError::SingularHit { .. } => Failure::Singular(e.name(), e.to_string()),
            GeodesicError::InvalidDirection(..) | GeodesicError::InvalidPoint(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numeric(e.name(), e.to_string()),
        }
    }
}

impl From<ArithmeticError> for Failure {
    fn from(e: ArithmeticError) -> Self {
        match e {
            ArithmeticError::Parse(_) | ArithmeticError::InvalidDirection(_) | ArithmeticError::IndexOutOfRange { .. } => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Numeric(e.name(), e.to_string()),
        }
    }
}

impl From<SplittingError> for Failure {
    fn from(e: SplittingError) -> Self {
        match e {
            SplittingError::Geodesic(g) => g.into(),
            SplittingError::Arithmetic(a) => a.into(),
            SplittingError::Lattice(l) => l.into(),
            SplittingError::MagnificationTooSmall { .. } => Failure::Validation(e.name(), e.to_string()),
            _ => Failure::Numeric(e.name(), e.to_string()),
        }
    }
}

impl From<ErgodicError> for Failure {
    fn from(e: ErgodicError) -> Self {
        match e {
            ErgodicError::Geodesic(g) => g.into(),
            ErgodicError::Arithmetic(a) => a.into(),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Usage(format!("{}: {e}", path.display()))
}

struct Loaded {
    manifold: Polycube3Manifold,
    info: ManifestInfo,
}

fn load_manifest(path: &Path) -> Result<Loaded, Failure> {
    let bytes = std::fs::read(path).map_err(|e| io_failure(path, e))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| Failure::Usage(format!("{} is not UTF-8", path.display())))?;
    let manifest = Manifest::from_json(&text).map_err(|e| Failure::Validation("ManifestParse", e.to_string()))?;
    let manifold = build_manifold(&manifest)?;
    Ok(Loaded { info: ManifestInfo { name: manifold.name.clone(), sha256: sha256_hex(&bytes) }, manifold })
}

fn direction_for(target: &Target, m: &Polycube3Manifold) -> Result<Direction, Failure> {
    let base = m.direction().cloned().unwrap_or_else(|| Direction::golden_silver().spec());
    let pick = |flag: &Option<String>, fallback: &polycube::arithmetic::ComponentSpec| -> Result<Component, Failure> {
        match flag {
            Some(s) => Ok(Component::parse(s)?),
            None => Ok(Component::from_spec(fallback)?),
        }
    };
    Ok(Direction::new(pick(&target.alpha, &base.alpha)?, pick(&target.beta, &base.beta)?)?)
}

/// Output of one subcommand: the report plus an optional failure to raise
/// after the report has been written.
struct Outcome {
    json: String,
    extra: Vec<(PathBuf, String)>,
    deferred: Option<Failure>,
}

fn envelope<T: Serialize>(command: &str, seed: u64, loaded: Option<&Loaded>, dir: Option<DirectionSpec>, result: T) -> String {
    let mut env = Envelope::new(command, seed, result);
    env.manifest = loaded.map(|l| ManifestInfo { name: l.info.name.clone(), sha256: l.info.sha256.clone() });
    env.direction = dir;
    to_json(&env)
}

#[derive(Serialize)]
struct EdgeSummary {
    id: usize,
    axis: polycube::Axis,
    quadrants: usize,
}

#[derive(Serialize)]
struct ValidateResult {
    cubes: usize,
    circle_axis: Option<polycube::Axis>,
    edge_classes: usize,
    singular_edges: Vec<EdgeSummary>,
}

#[derive(Serialize)]
struct TraceResult {
    start: ManifoldPoint,
    events: usize,
    y_hits: usize,
    terminated_by: Termination,
    end: Option<ManifoldPoint>,
    /// largest torus distance between a Y-hit and the matching shift of the start
    shift_deviation: f64,
}

#[derive(Serialize)]
struct PermutationResult {
    pairs: Vec<splitting::FacePair>,
    permutation: Vec<usize>,
    cycles: Vec<Vec<usize>>,
    cycle_strings: Vec<String>,
    single_cycle: bool,
    max_cycle_len: usize,
    /// the cycle condition `max_cycle_len > d/2`
    exceeds_half: bool,
}

fn permutation_result(m: &Polycube3Manifold, v: &Direction, cfg: &SplitConfig) -> Result<PermutationResult, Failure> {
    let perm = splitting::splitting_permutation(m, v, cfg)?;
    let cs = splitting::cycle_structure(&perm);
    Ok(PermutationResult {
        cycle_strings: perm.cycle_strings(),
        pairs: perm.pairs,
        permutation: perm.permutation,
        cycles: perm.cycles,
        single_cycle: cs.is_single_cycle,
        max_cycle_len: cs.max_cycle_len,
        exceeds_half: cs.exceeds_half,
    })
}

fn circle_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

fn random_start(m: &Polycube3Manifold, seed: u64) -> YPoint {
    YPoint::random(m, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn region_preset(spec: &str, d: usize) -> Result<RectangleUnionRegion, Failure> {
    Ok(match spec {
        "full" => RectangleUnionRegion::full(d),
        "left-half" => RectangleUnionRegion::uniform(d, &[Rect::new((0.0, 0.5), (0.0, 1.0))]),
        "left-half-shifted" => RectangleUnionRegion::uniform(d, &[Rect::new((0.01, 0.51), (0.0, 1.0))]),
        path => {
            let text = std::fs::read_to_string(path).map_err(|e| io_failure(Path::new(path), e))?;
            let r: RectangleUnionRegion =
                serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{path}: {e}")))?;
            if r.face_count() != d {
                return Err(Failure::Usage(format!("{path}: region has {} faces, manifold has {d}", r.face_count())));
            }
            r
        }
    })
}

fn parse_range(s: &str) -> Result<(u64, u64), Failure> {
    let bad = || Failure::Usage(format!("j-range must look like 10..40, got {s}"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

#[derive(Serialize)]
struct GapLine {
    length: f64,
    count: u64,
    /// length truncated to four decimals with its multiplicity
    summary: String,
}

fn lemma_battery(suite: Suite, alpha: &Component, k: usize, seed: u64) -> Result<serde_json::Value, Failure> {
    use serde_json::json;
    let all = matches!(suite, Suite::All);
    let mut out = serde_json::Map::new();
    if all || matches!(suite, Suite::ThreeDistance) {
        let g = gap_spectrum(alpha, k)?;
        let gaps: Vec<GapLine> = g
            .gaps
            .iter()
            .map(|gap| GapLine {
                length: gap.length,
                count: gap.count,
                summary: format!("{:.4}×{}", (gap.length * 1e4).floor() / 1e4, gap.count),
            })
            .collect();
        let expected = if g.q_k1 >= 2 && g.gaps.len() == 2 {
            g.gaps[0].count == g.q_k1 - g.q_k && g.gaps[1].count == g.q_k
        } else {
            g.gaps.len() <= 2
        };
        out.insert("three_distance".into(), json!({ "q_k": g.q_k, "q_k1": g.q_k1, "gaps": gaps, "counts_match": expected }));
    }
    if all || matches!(suite, Suite::SpecialIntervals) {
        let fam = IntervalFamily::new(alpha, k, IntervalVariant::Short)?;
        out.insert("special_intervals".into(), serde_json::to_value(polycube::arithmetic::family_properties(&fam)).expect("serializable"));
    }
    if all || matches!(suite, Suite::HalfStrips) {
        let m = gallery::l_solid();
        let v = Direction::new(alpha.clone(), Component::from_cf(polycube::ContinuedFraction::sqrt2_minus_1()))?;
        let qs = alpha.denominators(k + 1)?;
        let n = qs[k + 1] - 1;
        let mut holds = 0u64;
        let mut both = 0u64;
        for i in 1..qs[k + 1] {
            let h = ergodic_lab::half_strip_chains(&m, &v, i, k, n.max(qs[k]))?;
            holds += h.disjunction() as u64;
            both += (h.minus_free && h.plus_free) as u64;
        }
        out.insert(
            "half_strips".into(),
            json!({ "indices": qs[k + 1] - 1, "steps": n.max(qs[k]), "disjunction_holds": holds, "both_free": both }),
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if all || matches!(suite, Suite::Parseval) {
        let mut worst_excess = f64::MIN;
        for _ in 0..20 {
            let u = random_union(&mut rng, 3);
            let w = random_union(&mut rng, 3);
            let c = ergodic_lab::fourier_parseval_check(&u, &w, rng.gen(), 400)?;
            worst_excess = worst_excess.max((c.exact_lhs - c.truncated_rhs).abs() - c.tail_bound);
        }
        out.insert("parseval".into(), json!({ "trials": 20, "n_max": 400, "worst_excess_over_bound": worst_excess }));
    }
    if all || matches!(suite, Suite::Overlap) {
        let mut worst = 0.0f64;
        for t in 0..10 {
            let rects: Vec<Rect> = (0..3).map(|_| random_rect(&mut rng)).collect();
            let c = ergodic_lab::overlap_identity_check(&rects, 64, seed.wrapping_add(t))?;
            worst = worst.max((c.lhs - c.rhs).abs() / c.std_err.max(1e-300));
        }
        out.insert("overlap".into(), json!({ "regions": 10, "resolution": 64, "worst_standard_errors": worst }));
    }
    if all || matches!(suite, Suite::Separation) {
        let u = polycube::IntervalUnion::new([(0.0, 0.5)]);
        let r = ergodic_lab::shift_separation_measure(&[u], 1 << 12)?;
        out.insert("separation".into(), serde_json::to_value(r).expect("serializable"));
    }
    Ok(serde_json::Value::Object(out))
}

fn random_union(rng: &mut ChaCha8Rng, arcs: usize) -> polycube::IntervalUnion {
    polycube::IntervalUnion::new((0..arcs).map(|_| {
        let a: f64 = rng.gen();
        (a, a + rng.gen::<f64>() * 0.3)
    }))
}

fn random_rect(rng: &mut ChaCha8Rng) -> Rect {
    let (a, b): (f64, f64) = (rng.gen(), rng.gen());
    let (c, d): (f64, f64) = (rng.gen(), rng.gen());
    Rect::new((a.min(b), a.max(b)), (c.min(d), c.max(d)))
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let seed = cli.seed;
    let plain = |json: String| Outcome { json, extra: Vec::new(), deferred: None };
    match &cli.command {
        Command::Validate { manifest } => {
            let l = load_manifest(manifest)?;
            let m = &l.manifold;
            let singular_edges = m
                .edge_classes()
                .iter()
                .filter(|e| e.is_singular())
                .map(|e| EdgeSummary { id: e.id, axis: e.axis, quadrants: e.quadrants })
                .collect();
            let r = ValidateResult { cubes: m.cube_count(), circle_axis: m.circle_axis(), edge_classes: m.edge_classes().len(), singular_edges };
            Ok(plain(envelope("validate", seed, Some(&l), m.direction().cloned(), r)))
        }
        Command::Trace { target, steps, face, x, z, csv } => {
            let l = load_manifest(&target.manifest)?;
            let m = &l.manifold;
            let v = direction_for(target, m)?;
            let flow = Flow::from_direction(m, &v)?;
            let start = match face {
                Some(label) => {
                    let cube = m.cube_with_label(*label).ok_or_else(|| Failure::Usage(format!("no face labelled {label}")))?;
                    YPoint { cube, x: x.unwrap_or(0.5), z: z.unwrap_or(0.5) }
                }
                None => random_start(m, seed),
            };
            let trace = flow.trace(ManifoldPoint::new(start.cube, [start.x, 0.0, start.z])?, *steps);
            let mut dev = 0.0f64;
            for (n, &i) in trace.y_hits.iter().enumerate() {
                let p = trace.events[i].point.local;
                let k = (n + 1) as f64;
                dev = dev.max(circle_dist(p[0], start.x + k * v.alpha.value)).max(circle_dist(p[2], start.z + k * v.beta.value));
            }
            let r = TraceResult {
                start: trace.start,
                events: trace.events.len(),
                y_hits: trace.y_hits.len(),
                terminated_by: trace.terminated_by,
                end: trace.events.last().map(|e| e.point),
                shift_deviation: dev,
            };
            let deferred = (trace.terminated_by == Termination::Singular)
                .then(|| Failure::Singular("SingularHit", format!("orbit stopped at a singular edge after {} crossings", trace.events.len())));
            let extra = csv.iter().map(|p| (p.clone(), trace.to_csv())).collect();
            Ok(Outcome { json: envelope("trace", seed, Some(&l), Some(v.spec()), r), extra, deferred })
        }
        Command::Permutation { target, k, h } => {
            let l = load_manifest(&target.manifest)?;
            let v = direction_for(target, &l.manifold)?;
            let r = permutation_result(&l.manifold, &v, &SplitConfig { k: *k, h: *h, ..SplitConfig::default() })?;
            Ok(plain(envelope("permutation", seed, Some(&l), Some(v.spec()), r)))
        }
        Command::Discrepancy { target, steps, grid, csv } => {
            let l = load_manifest(&target.manifest)?;
            let m = &l.manifold;
            let v = direction_for(target, m)?;
            let flow = Flow::from_direction(m, &v)?;
            let pts = ergodic_lab::y_orbit(&flow, random_start(m, seed), *steps)?;
            let r = ergodic_lab::box_discrepancy(&pts, m.cube_count(), *grid)?;
            let checkpoints: Vec<usize> = (2..=9).map(|e| 10usize.pow(e)).filter(|&n| n <= *steps).collect();
            let extra = csv
                .iter()
                .map(|p| (p.clone(), ergodic_lab::curve_csv(&ergodic_lab::discrepancy_curve(&pts, m.cube_count(), *grid, &checkpoints))))
                .collect();
            Ok(Outcome { json: envelope("discrepancy", seed, Some(&l), Some(v.spec()), r), extra, deferred: None })
        }
        Command::Census { target, k, h, j_range, epsilon, ratio, w1, w } => {
            let l = load_manifest(&target.manifest)?;
            let m = &l.manifold;
            let v = direction_for(target, m)?;
            let d = m.cube_count();
            let params = CensusParams { k: *k, h: *h, epsilon: *epsilon, ratio: *ratio };
            let mut r = ergodic_lab::defective_census(m, &v, &region_preset(w1, d)?, &region_preset(w, d)?, &params)?;
            if let Some(s) = j_range {
                let (lo, hi) = parse_range(s)?;
                r.good_j.retain(|j| (lo..=hi).contains(j));
            }
            Ok(plain(envelope("census", seed, Some(&l), Some(v.spec()), r)))
        }
        Command::Lemmas { suite, alpha, k } => {
            let a = Component::parse(alpha)?;
            let r = lemma_battery(*suite, &a, *k, seed)?;
            Ok(plain(envelope("lemmas", seed, None, None, r)))
        }
        Command::Gallery { dir } => gallery_command(dir, seed),
    }
}

#[derive(Serialize)]
struct GalleryEntry {
    key: &'static str,
    manifest: String,
    cubes: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    cycles: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matches_published: Option<bool>,
}

fn gallery_command(dir: &Path, seed: u64) -> Result<Outcome, Failure> {
    let v = Direction::golden_silver();
    let mut entries = Vec::new();
    let mut extra = Vec::new();
    for (key, m) in gallery::manifests() {
        let text = to_json(&m.to_manifest());
        let file = dir.join(format!("{key}.json"));
        let (mut cycles, mut matches_published) = (None, None);
        if let Some(t) = gallery::published_cycle_type(&m.name) {
            let perm = splitting::splitting_permutation(&m, &v, &SplitConfig::default())?;
            matches_published = Some(match gallery::published_cycles(&m.name) {
                Some(expected) => perm.matches_cycles(&expected),
                None => splitting::cycle_structure(&perm).lengths == t,
            });
            let r = permutation_result(&m, &v, &SplitConfig::default())?;
            let report = Envelope {
                manifest: Some(ManifestInfo { name: m.name.clone(), sha256: sha256_hex(text.as_bytes()) }),
                direction: Some(v.spec()),
                ..Envelope::new("permutation", seed, &r)
            };
            extra.push((dir.join("reports").join(format!("{key}.permutation.json")), to_json(&report)));
            cycles = Some(r.cycles);
        }
        extra.push((file.clone(), text));
        entries.push(GalleryEntry { key, manifest: file.display().to_string(), cubes: m.cube_count(), cycles, matches_published });
    }
    let criterion: Vec<_> = gallery::surfaces()
        .iter()
        .map(|s| splitting::vertex_criterion_check(s, &v, &SplitConfig::default()))
        .collect::<Result<_, _>>()?;
    let result = serde_json::json!({ "entries": entries, "criterion": criterion });
    let json = envelope("gallery", seed, None, Some(v.spec()), result);
    extra.push((dir.join("reports").join("gallery.json"), json.clone()));
    Ok(Outcome { json, extra, deferred: None })
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| io_failure(parent, e))?;
    }
    std::fs::write(path, text).map_err(|e| io_failure(path, e))
}

fn fail(f: &Failure) -> ExitCode {
    let body = serde_json::json!({ "error": f.name(), "message": f.message() });
    eprintln!("{body}");
    ExitCode::from(f.code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(f) => return fail(&f),
    };
    print!("{}", outcome.json);
    let writes = cli.out.iter().map(|p| (p.clone(), outcome.json.clone())).chain(outcome.extra);
    for (path, text) in writes {
        if let Err(f) = write_file(&path, &text) {
            return fail(&f);
        }
    }
    match outcome.deferred {
        Some(f) => fail(&f),
        None => ExitCode::SUCCESS,
    }
}
