use std::fs::{self, File};
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use perceptron_chain::differential::{self, FuzzConfig};
use perceptron_chain::evaluator::classify_batch;
use perceptron_chain::io;
use perceptron_chain::{
    compile, dedup, default_bound, forward, peel, validate, ChainNetwork, ClassLabel, Error,
};

#[derive(Parser)]
#[command(
    name = "pchain",
    version,
    about = "Width-one perceptron chains from nested convex hulls"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dedup, peel and compile a labeled CSV into a network file.
    Compile {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Class whose hull is the outermost region.
        #[arg(long, default_value = "pos", value_parser = parse_class)]
        positive_class: ClassLabel,
        /// Domain bound on |(x, 1)|; defaults to twice the largest in the data.
        #[arg(long)]
        bound: Option<f64>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Label every row of a points CSV.
    Classify {
        #[arg(long)]
        network: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Print the per-unit bit sequence for one point.
    Trace {
        #[arg(long)]
        network: PathBuf,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        point: Point,
    },
    /// Fuzz the network against the geometric oracle on its stored hulls.
    Verify {
        #[arg(long)]
        network: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 1e-6)]
        epsilon: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Render the decision region and hull outlines as SVG.
    Render {
        #[arg(long)]
        network: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value_t = 256)]
        resolution: usize,
    },
}

fn parse_class(s: &str) -> Result<ClassLabel, String> {
    match s.to_ascii_lowercase().as_str() {
        "pos" | "1" => Ok(ClassLabel::Pos),
        "neg" | "0" => Ok(ClassLabel::Neg),
        _ => Err(format!("expected pos or neg, got {s:?}")),
    }
}

/// A comma-separated coordinate list, e.g. `0.2,0.2`.
#[derive(Clone, Debug)]
struct Point(Vec<f64>);

fn parse_point(s: &str) -> Result<Point, String> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("invalid coordinate {t:?}"))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Point)
}

/// A failed command: stderr lines `ERROR <code>: <detail>` and an exit code.
struct Failure {
    lines: Vec<(String, String)>,
    exit: u8,
}

impl Failure {
    fn new(code: &str, detail: impl Into<String>) -> Self {
        Self {
            lines: vec![(code.to_string(), detail.into())],
            exit: 1,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::new(e.code(), e.to_string())
    }
}

fn check_valid(net: &ChainNetwork) -> Result<(), Failure> {
    let diags = validate(net);
    if diags.is_empty() {
        return Ok(());
    }
    Err(Failure {
        lines: diags
            .iter()
            .map(|d| (d.code().to_string(), d.to_string()))
            .collect(),
        exit: 1,
    })
}

fn write_file(path: &PathBuf, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::from(Error::from(e)))
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Compile {
            input,
            output,
            positive_class,
            bound,
            svg,
        } => {
            let data = io::load_dataset_path(&input)?.with_positive_class(positive_class);
            let clean = dedup(&data)?;
            let hulls = peel(&clean)?;
            let bound = bound.unwrap_or_else(|| default_bound(&clean));
            let net = compile(&hulls, bound)?;
            check_valid(&net)?;
            io::save_network(&net, &output)?;
            println!("regions: m={}", hulls.len());
            println!("units: {}", net.units.len());
            println!("domain bound: {bound}");
            for h in &hulls {
                println!(
                    "level {} ({}): {} facets, {} vertices",
                    h.level,
                    h.generator_class,
                    h.cuts.len(),
                    h.vertices.len()
                );
            }
            if let Some(path) = svg {
                write_file(&path, &io::render_svg(&net, Some(&clean), 256)?)?;
            }
        }
        Command::Classify {
            network,
            input,
            output,
        } => {
            let net = io::load_network(&network)?;
            let points = io::load_points(File::open(&input).map_err(Error::from)?, net.dimension)?;
            let labels = classify_batch(&net, &points)
                .into_iter()
                .collect::<Result<Vec<_>, _>>()?;
            let out = File::create(&output).map_err(Error::from)?;
            io::write_labels(BufWriter::new(out), &points, &labels)?;
            println!("classified: {}", labels.len());
        }
        Command::Trace { network, point } => {
            let net = io::load_network(&network)?;
            let trace = forward(&net, &point.0)?;
            println!("bits: {}, label: {}", trace.bit_string(), trace.label);
        }
        Command::Verify {
            network,
            samples,
            epsilon,
            seed,
        } => {
            let net = io::load_network(&network)?;
            check_valid(&net)?;
            let report = differential::verify(
                &net,
                &FuzzConfig {
                    samples,
                    epsilon,
                    seed,
                },
            )?;
            println!(
                "drawn: {} (skipped {} near cuts, {} outside domain)",
                report.drawn, report.skipped_near_cut, report.skipped_out_of_domain
            );
            println!("agreement: {}/{}", report.agreed, report.compared);
            if !report.is_clean() {
                let mut lines: Vec<(String, String)> = report
                    .mismatches
                    .iter()
                    .map(|m| {
                        let show = |r: &Result<ClassLabel, Error>| match r {
                            Ok(l) => l.to_string(),
                            Err(e) => format!("error({})", e.code()),
                        };
                        (
                            "Mismatch".to_string(),
                            format!(
                                "x={:?} network={} oracle={}",
                                m.point,
                                show(&m.network),
                                show(&m.oracle)
                            ),
                        )
                    })
                    .collect();
                if report.compared < report.requested {
                    lines.push((
                        "SampleShortfall".to_string(),
                        format!(
                            "only {} of {} samples retained",
                            report.compared, report.requested
                        ),
                    ));
                }
                return Err(Failure { lines, exit: 1 });
            }
        }
        Command::Render {
            network,
            output,
            resolution,
        } => {
            let net = io::load_network(&network)?;
            write_file(&output, &io::render_svg(&net, None, resolution)?)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.render().to_string();
            let summary = rendered
                .lines()
                .next()
                .unwrap_or_default()
                .trim_start_matches("error: ");
            eprintln!("ERROR UsageError: {summary}");
            eprint!("{rendered}");
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            for (code, detail) in &f.lines {
                eprintln!("ERROR {code}: {detail}");
            }
            ExitCode::from(f.exit)
        }
    }
}
