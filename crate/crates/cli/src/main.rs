use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use envelope_core::analysis::Analysis;
use envelope_core::creativity::{CreativityParams, DEFAULT_WINDOWS};
use envelope_core::discriminant::{discriminant_set, e1_limit, SliceKind, DEFAULT_EPSILONS};
use envelope_core::envelope::verify_envelope;
use envelope_core::family::{CircleFamily, CircleFamilySpec};
use envelope_core::gallery;
use envelope_core::render::{self, Curve, Scene};
use envelope_core::scenario::{load_scenario, Scenario};
use envelope_core::seismic::{self, Side};

#[derive(Parser)]
#[command(
    name = "envelopes",
    version,
    about = "Envelopes of one-parameter families of circles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Creativity report and envelope classification.
    Analyze(Common),
    /// Envelope branches and their residual check.
    Envelope {
        #[command(flatten)]
        common: Common,
        /// Extra randomized creators on unconstrained stretches.
        #[arg(long, default_value_t = 0)]
        random_creators: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Discriminant slices and their decomposition.
    Discriminant(Common),
    /// Limits of intersections of nearby circles at one parameter.
    E1 {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        t0: f64,
    },
    /// Orthotomic and reflector from a survey CSV.
    Seismic {
        #[command(flatten)]
        common: Common,
        /// CSV with columns t,sensor_x,sensor_y,arrival_s.
        #[arg(long)]
        survey: PathBuf,
        /// Overrides the scenario's side.
        #[arg(long, value_enum)]
        side: Option<SideArg>,
    },
    /// Run the bundled examples; exits nonzero if any check fails.
    Gallery {
        #[arg(long, default_value_t = 2001)]
        samples: usize,
        #[arg(long, env = "ENVELOPES_OUT")]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    scenario: PathBuf,
    /// Sample count (default: the scenario's, else 2001).
    #[arg(long)]
    samples: Option<usize>,
    /// Output directory (default: the scenario's `out`, else `envelopes-out`).
    #[arg(long, env = "ENVELOPES_OUT")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    eps_beta: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_WINDOWS)]
    windows: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Svg,
    Both,
}

impl Format {
    fn csv(self) -> bool {
        self != Format::Svg
    }

    fn svg(self) -> bool {
        self != Format::Csv
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Upper,
    Lower,
}

struct Context_ {
    scenario: Scenario,
    out: PathBuf,
    format: Format,
    params: CreativityParams,
}

impl Context_ {
    fn new(common: &Common) -> Result<Self> {
        let scenario = load_scenario(&common.scenario)
            .with_context(|| format!("loading scenario {}", common.scenario.display()))?;
        let out = common
            .out
            .clone()
            .or_else(|| scenario.out.clone())
            .unwrap_or_else(|| PathBuf::from("envelopes-out"));
        if common.windows == 0 {
            bail!("--windows must be at least 1");
        }
        let params = CreativityParams {
            eps_beta: common.eps_beta,
            windows: common.windows,
            ..Default::default()
        };
        let mut ctx = Context_ {
            scenario,
            out,
            format: common.format,
            params,
        };
        if let (Some(n), Some(f)) = (common.samples, ctx.scenario.family.as_ref()) {
            ctx.scenario.family = Some(f.with_samples(n)?);
        }
        Ok(ctx)
    }

    fn family(&self) -> Result<&CircleFamilySpec> {
        self.scenario
            .family
            .as_ref()
            .context("scenario defines no circle family (gamma.x, gamma.y, lambda)")
    }

    fn analysis(&self) -> Result<Analysis> {
        Ok(Analysis::run(self.family()?, &self.params)?)
    }

    fn write(&self, suffix: &str, contents: &str) -> Result<()> {
        let path = self.out.join(format!("{}_{suffix}", self.scenario.name));
        write_file(&path, contents)
    }

    fn svg(&self, suffix: &str, scene: &Scene) -> Result<()> {
        if self.format.svg() {
            self.write(suffix, &render::render_svg(scene, self.scenario.margin)?)?;
        }
        Ok(())
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    render::write_output(path, contents).with_context(|| format!("writing {}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn analyze(common: &Common) -> Result<()> {
    let ctx = Context_::new(common)?;
    let a = ctx.analysis()?;
    print!("{}", a.report.to_text());
    if ctx.format.csv() {
        ctx.write("creativity.csv", &render::creativity_csv(&a.report))?;
        ctx.write("frontal.csv", &render::frontal_csv(&a.frames))?;
    }
    ctx.svg(
        "family.svg",
        &Scene::from_analysis(&a, &[], ctx.scenario.stride),
    )
}

fn envelope(common: &Common, random_creators: usize, seed: u64) -> Result<()> {
    let ctx = Context_::new(common)?;
    let a = ctx.analysis()?;
    println!("classification: {}", a.report.classification);
    let branches = a.envelopes_with_variants(random_creators, seed)?;
    let radius = a.radius();
    for b in &branches {
        let r = verify_envelope(b, &a.frames.center, &radius);
        println!(
            "branch {}: r1 = {:.3e} (tol {:.3e}), r2 = {:.3e}, {}",
            b.label.name(),
            r.tangency,
            r.tangency_tolerance(),
            r.radius,
            if r.pass { "pass" } else { "FAIL" }
        );
        if !b.warnings.is_empty() {
            println!(
                "  {} warning(s), first: {:?}",
                b.warnings.len(),
                b.warnings[0]
            );
        }
    }
    if ctx.format.csv() {
        ctx.write("envelope.csv", &render::envelope_csv(&branches))?;
    }
    ctx.svg(
        "envelope.svg",
        &Scene::from_analysis(&a, &branches, ctx.scenario.stride),
    )
}

fn discriminant(common: &Common) -> Result<()> {
    let ctx = Context_::new(common)?;
    let a = ctx.analysis()?;
    let branches = a.envelopes()?;
    let set = discriminant_set(&a, &branches)?;
    print!("{}", set.to_text());
    if ctx.format.csv() {
        ctx.write("discriminant.csv", &render::discriminant_csv(&set.slices))?;
    }
    let mut scene = Scene::from_analysis(&a, &branches, ctx.scenario.stride);
    for s in set.slices.iter().step_by(ctx.scenario.stride.max(1)) {
        scene.markers.extend(s.kind.points());
    }
    for s in &set.slices {
        if let SliceKind::FullCircle { center, radius } = s.kind {
            scene.curves.push(Curve {
                label: format!("circle-{}", render::fmt_num(s.t)),
                points: (0..=128)
                    .map(|k| {
                        let a = std::f64::consts::TAU * k as f64 / 128.0;
                        center + radius * envelope_core::Vec2::new(a.cos(), a.sin())
                    })
                    .collect(),
            });
        }
    }
    ctx.svg("discriminant.svg", &scene)
}

fn e1(common: &Common, t0: f64) -> Result<()> {
    let ctx = Context_::new(common)?;
    let a = ctx.analysis()?;
    let family = ctx.family()?;
    let report = e1_limit(family, &a.frames, t0, &DEFAULT_EPSILONS, a.report.eps_beta)?;
    print!("{}", report.to_text());
    if ctx.format.csv() {
        ctx.write("e1.csv", &render::e1_csv(&report))?;
    }
    let mut scene = Scene::default();
    for t in [t0, t0 + DEFAULT_EPSILONS[0]] {
        let s = family.sample(t)?;
        scene.circles.push((s.center, s.radius));
    }
    scene.markers = report.slice.kind.points();
    ctx.svg("e1.svg", &scene)
}

fn seismic_cmd(common: &Common, survey: &Path, side: Option<SideArg>) -> Result<()> {
    let ctx = Context_::new(common)?;
    let config = ctx
        .scenario
        .survey
        .context("scenario must set `source` and `speed` for a survey")?;
    let data = seismic::ingest_survey_file(survey, config.source, config.speed)
        .with_context(|| format!("reading survey {}", survey.display()))?;
    let side = match side {
        Some(SideArg::Upper) => Side::Upper,
        Some(SideArg::Lower) => Side::Lower,
        None => config.side,
    };
    let o = seismic::recover_orthotomic(&data, side, &ctx.params)?;
    println!("classification: {}", o.analysis.report.classification);
    let w = o.selected_branch();
    let sensors = data.sensors();
    let reflector = seismic::reconstruct_reflector(w, data.source(), &sensors)?;
    let flagged = reflector.iter().filter(|m| m.flagged).count();
    println!(
        "selected branch {} ({} records), {} flagged reflector samples",
        w.label.name(),
        w.t.len(),
        flagged
    );
    if ctx.format.csv() {
        ctx.write("orthotomic.csv", &render::orthotomic_csv(w))?;
        ctx.write("reflector.csv", &render::reflector_csv(&reflector))?;
    }
    let mut scene = Scene::from_analysis(&o.analysis, std::slice::from_ref(w), ctx.scenario.stride);
    scene.curves.push(Curve {
        label: "reflector".into(),
        points: reflector.iter().map(|m| m.point).collect(),
    });
    scene.markers.push(data.source());
    ctx.svg("seismic.svg", &scene)
}

fn gallery_cmd(samples: usize, out: Option<&Path>, format: Format) -> Result<bool> {
    let report = gallery::run_gallery(samples);
    print!("{}", report.to_text());
    if let Some(dir) = out {
        for id in gallery::ids() {
            let spec = gallery::family(id, samples)?;
            let a = Analysis::run(&spec, &CreativityParams::default())?;
            let branches = if a.report.classification.is_creative() {
                a.envelopes()?
            } else {
                Vec::new()
            };
            if format.csv() {
                write_file(
                    &dir.join(format!("example{id}_envelope.csv")),
                    &render::envelope_csv(&branches),
                )?;
            }
            if format.svg() {
                let scene = Scene::from_analysis(&a, &branches, render::DEFAULT_STRIDE);
                let svg = render::render_svg(&scene, render::DEFAULT_MARGIN)?;
                write_file(&dir.join(format!("example{id}_envelope.svg")), &svg)?;
            }
        }
    }
    Ok(report.pass())
}

fn run(cli: Cli) -> Result<bool> {
    match &cli.command {
        Command::Analyze(c) => analyze(c)?,
        Command::Envelope {
            common,
            random_creators,
            seed,
        } => envelope(common, *random_creators, *seed)?,
        Command::Discriminant(c) => discriminant(c)?,
        Command::E1 { common, t0 } => e1(common, *t0)?,
        Command::Seismic {
            common,
            survey,
            side,
        } => seismic_cmd(common, survey, *side)?,
        Command::Gallery {
            samples,
            out,
            format,
        } => return gallery_cmd(*samples, out.as_deref(), *format),
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
