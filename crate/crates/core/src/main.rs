use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use rangesets::service::{bench, export_svg, prepare, AppState, RangesetDocument, SessionConfig, SvgOptions};

#[derive(Parser)]
#[command(name = "rangesets", version, about = "Attribute-bin contours over 2D embeddings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the batch pipeline and write the rangeset document (JSON).
    Compute {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Render one attribute of a document as SVG.
    ExportSvg {
        #[arg(long)]
        doc: PathBuf,
        #[arg(long)]
        attr: String,
        #[arg(long)]
        out: PathBuf,
        /// Outlier glyph radius relative to regular glyphs.
        #[arg(long, default_value_t = 1.8)]
        outlier_scale: f64,
    },
    /// Print the suggested filter threshold for a config's embedding.
    SuggestEps {
        #[arg(long)]
        config: PathBuf,
    },
    /// Serve the JSON API.
    Serve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
    },
    /// Time rangeset computation on uniform random data.
    Bench {
        /// Comma-separated point counts, e.g. 1000,2500,5000.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        bins: usize,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print the report as JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
}

fn load_config(path: &Path) -> Result<(SessionConfig, PathBuf)> {
    let config = SessionConfig::load(path)?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok((config, base))
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Compute { config, out } => {
            let (config, base) = load_config(&config)?;
            let doc = prepare(&config.resolve(&base))?.document()?;
            std::fs::write(&out, doc.to_json()).with_context(|| format!("writing {}", out.display()))?;
            eprintln!(
                "wrote {} ({} attributes, epsilon {:.6})",
                out.display(),
                doc.attributes.len(),
                doc.topology.epsilon
            );
        }
        Command::ExportSvg { doc, attr, out, outlier_scale } => {
            let text = std::fs::read_to_string(&doc).with_context(|| format!("reading {}", doc.display()))?;
            let doc = RangesetDocument::from_json(&text).context("parsing rangeset document")?;
            let options = SvgOptions { outlier_radius_scale: outlier_scale, ..SvgOptions::default() };
            let svg = export_svg(&doc, &attr, &options)?;
            std::fs::write(&out, svg).with_context(|| format!("writing {}", out.display()))?;
        }
        Command::SuggestEps { config } => {
            let (config, base) = load_config(&config)?;
            let prepared = prepare(&config.resolve(&base))?;
            let t = &prepared.topology_section;
            println!("{}", t.suggested_epsilon);
            eprintln!("mode {}, epsilon_max {}", t.mode, t.epsilon_max);
        }
        Command::Serve { config, port, host } => {
            let (config, base) = load_config(&config)?;
            let state = Arc::new(AppState::new(config, &base)?);
            let runtime = tokio::runtime::Runtime::new()?;
            eprintln!("listening on http://{host}:{port}");
            runtime.block_on(rangesets::service::serve(state, &host, port)).with_context(|| format!("serving on {host}:{port}"))?;
        }
        Command::Bench { n, bins, repeats, seed, json } => {
            if n.is_empty() || n.iter().any(|&v| v < 3) {
                bail!("--n needs point counts of at least 3");
            }
            let report = bench(&n, bins, repeats, seed);
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                println!("{:>8} {:>12} {:>14} {:>9}", "n", "seconds", "us/point", "polygons");
                for r in &report.rows {
                    println!("{:>8} {:>12.6} {:>14.3} {:>9}", r.n, r.seconds, r.per_point_us, r.polygons);
                }
                println!("fit: seconds = {:.3e} * n + {:.3e}, R^2 = {:.4}", report.slope, report.intercept, report.r_squared);
            }
        }
    }
    Ok(())
}
