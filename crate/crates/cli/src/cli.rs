//! Subcommands of the `afmerge` binary.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use afmerge_core::{
    apply_recipe, grounded_labeling, load_csv, parse_apx, parse_recipe, save_csv, stable_labelings, to_apx, to_dot,
    Recipe,
};
use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

use crate::config::{Config, Settings};
use crate::engine::{apply_merged, pretty, Analysis};
use crate::error::ServiceError;
use crate::session::SessionStore;

#[derive(Debug, Parser)]
#[command(
    name = "afmerge",
    version,
    about = "Reconcile data-cleaning recipes with argumentation semantics"
)]
pub struct Cli {
    /// TOML config file (port, stable_cap, dependency_rules, conflict_matrix, ...).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Semantics {
    #[default]
    Grounded,
    Stable,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Label an APX attack graph.
    Solve {
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        semantics: Semantics,
        /// Also write the grounded-colored graph as DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Build the attack graph between recipes.
    Conflicts {
        #[arg(required = true, num_args = 2..)]
        recipes: Vec<PathBuf>,
        #[arg(long)]
        apx: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Grounded labeling plus the stable labelings in canonical order.
    #[command(group(ArgGroup::new("mode").args(["list", "count"])))]
    Extensions {
        #[arg(required = true, num_args = 2..)]
        recipes: Vec<PathBuf>,
        /// One `{"index":i,"labeling":{...}}` line per stable labeling.
        #[arg(long)]
        list: bool,
        /// Only print `stable: N`.
        #[arg(long)]
        count: bool,
        /// Overrides the configured enumeration cap.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Merge the steps accepted by a stable labeling.
    Merge {
        #[arg(required = true, num_args = 2..)]
        recipes: Vec<PathBuf>,
        /// 0-based index into the stable labelings; the grounded labeling if omitted.
        #[arg(long)]
        stable: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run one recipe over a CSV file.
    Apply {
        recipe: PathBuf,
        data: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Detect, merge and apply in one go. The last input is the CSV.
    Pipeline {
        #[arg(required = true, num_args = 3.., value_name = "RECIPES... DATA")]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        stable: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long)]
        port: Option<u16>,
        #[arg(long)]
        ui_dir: Option<PathBuf>,
        #[arg(long)]
        snapshot_dir: Option<PathBuf>,
    },
}

/// Exit status for a failed command.
pub fn exit_code(e: &ServiceError) -> u8 {
    match e {
        ServiceError::Invalid(_) => 2,
        ServiceError::Conflict(_) => 3,
        ServiceError::NotFound(_) => 4,
        ServiceError::Io(_) => 5,
    }
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<(), ServiceError> {
    let config = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let settings = config.settings()?;
    match cli.command {
        Command::Solve { graph, semantics, dot } => {
            let graph = parse_apx(&crate::read_file(&graph)?)?;
            let grounded = grounded_labeling(&graph);
            let text = match semantics {
                Semantics::Grounded => grounded.to_json(),
                Semantics::Stable => serde_json::to_string(&stable_labelings(&graph)).expect("labelings serialize"),
            };
            emit(stdout, None, &(text + "\n"))?;
            if let Some(path) = dot {
                write_file(&path, &to_dot(&graph, Some(&grounded), None))?;
            }
        }
        Command::Conflicts { recipes, apx, dot } => {
            let analysis = analyse(&recipes, &settings)?;
            emit(stdout, None, &pretty(&analysis.graph_json()))?;
            if let Some(path) = apx {
                write_file(&path, &to_apx(&analysis.conflicts.graph))?;
            }
            if let Some(path) = dot {
                write_file(&path, &analysis.dot(&analysis.grounded))?;
            }
        }
        Command::Extensions {
            recipes,
            list,
            count,
            cap,
        } => {
            let settings = Settings {
                stable_cap: cap.unwrap_or(settings.stable_cap),
                ..settings
            };
            let analysis = analyse(&recipes, &settings)?;
            let text = if count {
                analysis.count_line() + "\n"
            } else if list {
                let all = analysis.stable_page(0, analysis.stable.labelings.len());
                all.iter().map(|v| v.to_string() + "\n").collect()
            } else {
                pretty(&analysis.extensions_json())
            };
            emit(stdout, None, &text)?;
        }
        Command::Merge {
            recipes,
            stable,
            output,
        } => {
            let merged = analyse(&recipes, &settings)?.merge(stable)?;
            emit(stdout, output.as_deref(), &merged.to_json())?;
        }
        Command::Apply { recipe, data, output } => {
            let recipe = read_recipe(&recipe)?;
            let data = load_csv(&crate::read_file(&data)?)?;
            let (out, _) = apply_recipe(&data, &recipe)?;
            emit(stdout, output.as_deref(), &save_csv(&out))?;
        }
        Command::Pipeline {
            mut inputs,
            stable,
            output,
        } => {
            let data = inputs.pop().expect("clap enforces at least three inputs");
            let merged = analyse(&inputs, &settings)?.merge(stable)?;
            let data = load_csv(&crate::read_file(&data)?)?;
            let (_, csv) = apply_merged(&data, &merged)?;
            emit(stdout, output.as_deref(), &csv)?;
        }
        Command::Serve {
            port,
            ui_dir,
            snapshot_dir,
        } => {
            let store = Arc::new(SessionStore::new(settings, snapshot_dir.or(config.snapshot_dir)));
            let restored = store.restore()?;
            if restored > 0 {
                eprintln!("restored {restored} session(s)");
            }
            let runtime = tokio::runtime::Runtime::new().map_err(|e| ServiceError::Io(e.to_string()))?;
            runtime.block_on(crate::server::serve(
                store,
                ui_dir.or(config.ui_dir),
                port.unwrap_or(config.port),
            ))?;
        }
    }
    Ok(())
}

fn read_recipe(path: &Path) -> Result<Recipe, ServiceError> {
    parse_recipe(&crate::read_file(path)?).map_err(|e| ServiceError::Invalid(format!("{}: {e}", path.display())))
}

fn analyse(paths: &[PathBuf], settings: &Settings) -> Result<Analysis, ServiceError> {
    let recipes = paths.iter().map(|p| read_recipe(p)).collect::<Result<Vec<_>, _>>()?;
    Analysis::new(recipes, settings)
}

fn write_file(path: &Path, text: &str) -> Result<(), ServiceError> {
    std::fs::write(path, text).map_err(|e| ServiceError::Io(format!("{}: {e}", path.display())))
}

fn emit(stdout: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), ServiceError> {
    match path {
        Some(path) => write_file(path, text),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| ServiceError::Io(e.to_string())),
    }
}
