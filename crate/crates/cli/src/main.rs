use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use pulsefront::config::load_config;
use pulsefront::plot::plot_csv;
use pulsefront::table::{num, Table};
use pulsefront_core::eigen::{adaptive_eigen, CellOperator, DEFAULT_GRID};
use pulsefront_core::homog::{beta_mean_zero, gamma};
use pulsefront_core::patch::frag_sweep;
use pulsefront_core::simulate::{run_front, SimConfig};
use pulsefront_core::speed::{minimal_speed, period_grid, sweep_l};
use pulsefront_core::{PatchConfig, ProfilePair};
use serde_json::Value;

#[derive(Parser, Debug)]
#[command(name = "pulsefront", version, about = "Minimal speeds of pulsating KPP fronts in periodic media")]
struct Cli {
    /// Print nothing on stdout; files given with --out are still written.
    #[arg(long, global = true, conflicts_with = "json")]
    quiet: bool,

    /// Print the report as a single JSON object.
    #[arg(long, global = true)]
    json: bool,

    /// Reserved; every command is deterministic and ignores it.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Grid {
    /// Unit-cell grid size, a power of two >= 16.
    #[arg(long, env = "PULSEFRONT_GRID_N")]
    n: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Principal eigenvalue k(lambda, L) and its eigenfunction.
    Eigen {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        lambda: f64,
        #[arg(long = "L")]
        l: f64,
        #[command(flatten)]
        grid: Grid,
        /// Eigenfunction CSV (x, phi).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimal speed c*_L at one period.
    Speed {
        #[arg(long)]
        config: PathBuf,
        #[arg(long = "L", allow_negative_numbers = true)]
        l: f64,
        #[command(flatten)]
        grid: Grid,
    },
    /// c*_L over a grid of periods.
    SweepL {
        #[arg(long)]
        config: PathBuf,
        #[arg(long = "l-min")]
        l_min: f64,
        #[arg(long = "l-max")]
        l_max: f64,
        #[arg(long, default_value_t = 16)]
        points: usize,
        /// Space the periods geometrically instead of evenly.
        #[arg(long)]
        geometric: bool,
        #[command(flatten)]
        grid: Grid,
        /// Sweep CSV; the table goes to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Homogenised speed and the curvature coefficient of c*_L at L = 0.
    Gamma {
        #[arg(long)]
        config: PathBuf,
    },
    /// Slope of c*_L at L = 0 for a growth rate with zero mean.
    Beta0 {
        #[arg(long)]
        config: PathBuf,
    },
    /// c*_z of the two-fragment habitat over all gap offsets z.
    Frag {
        #[arg(long = "L0")]
        l0: f64,
        #[arg(long)]
        l: f64,
        #[arg(long)]
        m: f64,
        /// Number of z samples, odd and >= 5.
        #[arg(long = "z-steps", default_value_t = 21)]
        z_steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Explicit time integration from step data, measuring the front speed.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long = "L")]
        l: f64,
        #[arg(long = "t-end", default_value_t = 100.0)]
        t_end: f64,
        /// Space step; defaults to min(0.05, L/16).
        #[arg(long)]
        dx: Option<f64>,
        /// Front trace CSV (t, x_front).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also compute c*_L with the eigenvalue solver.
        #[arg(long)]
        compare: bool,
        #[command(flatten)]
        grid: Grid,
    },
    /// Line plot of two CSV columns as SVG.
    Plot {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        svg: PathBuf,
        #[arg(long = "x-col")]
        x_col: String,
        #[arg(long = "y-col")]
        y_col: String,
    },
}

struct Report {
    fields: Vec<(&'static str, Value)>,
}

impl Report {
    fn new() -> Self {
        Self { fields: Vec::new() }
    }

    fn add(&mut self, key: &'static str, value: impl Into<Value>) -> &mut Self {
        self.fields.push((key, value.into()));
        self
    }

    fn print(&self, cli: &Cli) {
        if cli.quiet {
            return;
        }
        if cli.json {
            let obj: serde_json::Map<String, Value> =
                self.fields.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
            println!("{}", Value::Object(obj));
            return;
        }
        for (k, v) in &self.fields {
            match v {
                Value::String(s) => println!("{k} = {s}"),
                Value::Null => println!("{k} = n/a"),
                other => println!("{k} = {other}"),
            }
        }
    }
}

fn model(path: &Path) -> Result<ProfilePair> {
    Ok(load_config(path)?.profiles()?)
}

fn core<T>(r: pulsefront_core::Result<T>) -> pulsefront::Result<T> {
    r.map_err(pulsefront::Error::from)
}

fn opt(v: Option<f64>) -> Value {
    v.map_or(Value::Null, Value::from)
}

fn write_table(table: &Table, out: Option<&Path>, cli: &Cli) -> Result<()> {
    match out {
        Some(path) => table.write(path)?,
        None if !cli.quiet && !cli.json => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            w.write_record(&table.headers)?;
            for row in &table.rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
        None => {}
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Eigen {
            config,
            lambda,
            l,
            grid,
            out,
        } => {
            let profiles = model(config)?;
            let res = match grid.n {
                Some(n) => core(CellOperator::new(&profiles, n).and_then(|op| op.solve(*lambda, *l)))?,
                None => core(adaptive_eigen(&profiles, *lambda, *l))?,
            };
            if let Some(path) = out {
                let mut t = Table::new(&["x", "phi"]);
                for (i, v) in res.phi.iter().enumerate() {
                    t.push(vec![num(i as f64 / res.n as f64), num(*v)]);
                }
                t.write(path)?;
            }
            let mut r = Report::new();
            r.add("k", res.k)
                .add("residual", res.residual)
                .add("n", res.n)
                .add("iterations", res.iterations);
            if let Some(rho1) = res.rho1 {
                r.add("rho1", rho1);
            }
            r.print(cli);
        }
        Command::Speed { config, l, grid } => {
            let profiles = model(config)?;
            let n = grid.n.unwrap_or(DEFAULT_GRID);
            let res = core(minimal_speed(&profiles, *l, n))?;
            Report::new()
                .add("L", res.l)
                .add("c_star", res.c_star)
                .add("lambda_star", res.lambda_star)
                .add("k_at_min", res.k_at_min)
                .add("n_grid", n)
                .add("evals", res.evals)
                .print(cli);
        }
        Command::SweepL {
            config,
            l_min,
            l_max,
            points,
            geometric,
            grid,
            out,
        } => {
            let profiles = model(config)?;
            let n = grid.n.unwrap_or(DEFAULT_GRID);
            let ls = core(period_grid(*l_min, *l_max, *points, *geometric))?;
            let rep = core(sweep_l(&profiles, &ls, n))?;
            let mut t = Table::new(&["L", "c_star", "lambda_star", "k_at_min", "n_grid"]);
            for row in &rep.rows {
                t.push(vec![
                    num(row.l),
                    num(row.c_star),
                    num(row.lambda_star),
                    num(row.k_at_min),
                    row.n_grid.to_string(),
                ]);
            }
            write_table(&t, out.as_deref(), cli)?;
            if out.is_some() || cli.json {
                Report::new()
                    .add("rows", rep.rows.len())
                    .add("d1", opt(rep.d1))
                    .add("d2", opt(rep.d2))
                    .print(cli);
            }
        }
        Command::Gamma { config } => {
            let profiles = model(config)?;
            let g = core(gamma(&profiles))?;
            Report::new()
                .add("a_H", g.a_h)
                .add("mu_A", g.mu_a)
                .add("c_hom", g.c_hom)
                .add("lambda_hom", g.lambda_hom)
                .add("gamma", g.gamma)
                .add("degenerate", g.degenerate)
                .print(cli);
        }
        Command::Beta0 { config } => {
            let profiles = model(config)?;
            let b = core(beta_mean_zero(&profiles))?;
            Report::new()
                .add("beta", b.beta)
                .add("slope", b.slope)
                .add("lambda_slope", b.lambda_slope)
                .print(cli);
        }
        Command::Frag {
            l0,
            l,
            m,
            z_steps,
            out,
        } => {
            let cfg = core(PatchConfig::new(*l0, *l, 0.0, *m))?;
            let rep = core(frag_sweep(&cfg, *z_steps))?;
            if let Some(path) = out {
                let mut t = Table::new(&["z", "c_star", "lambda_star", "k_at_min", "regime_warning"]);
                for row in &rep.rows {
                    t.push(vec![
                        num(row.z),
                        num(row.c_star),
                        num(row.lambda_star),
                        num(row.k_at_min),
                        row.regime_warning.to_string(),
                    ]);
                }
                t.write(path)?;
            }
            if rep.regime_warning && !cli.quiet {
                eprintln!("warning: l <= 3 L0 / 4, where monotonicity in z is not guaranteed");
            }
            Report::new()
                .add("z_steps", rep.rows.len())
                .add("argmin_z", rep.argmin_z)
                .add("c_star_min", rep.rows.iter().map(|r| r.c_star).fold(f64::INFINITY, f64::min))
                .add("monotone_decreasing", rep.monotone_decreasing)
                .add("monotone_increasing", rep.monotone_increasing)
                .add("symmetry_defect", rep.symmetry_defect)
                .add("regime_warning", rep.regime_warning)
                .print(cli);
        }
        Command::Simulate {
            config,
            l,
            t_end,
            dx,
            out,
            compare,
            grid,
        } => {
            let profiles = model(config)?;
            let dx = dx.unwrap_or_else(|| (l / 16.0).min(0.05));
            let cfg = core(SimConfig::new(profiles.clone(), *l, *t_end, dx))?;
            let (trace, res) = core(run_front(&cfg))?;
            if let Some(path) = out {
                let mut t = Table::new(&["t", "x_front"]);
                for (time, x) in trace.times.iter().zip(&trace.positions) {
                    t.push(vec![num(*time), num(*x)]);
                }
                t.write(path)?;
            }
            let mut r = Report::new();
            r.add("measured_speed", res.measured_speed)
                .add("fit_residual", res.fit_residual)
                .add("pulsation_defect", opt(res.pulsation_defect))
                .add("dx", cfg.dx)
                .add("dt", cfg.dt)
                .add("steps", res.steps);
            if *compare {
                let n = grid.n.unwrap_or(DEFAULT_GRID);
                let c = core(minimal_speed(&profiles, *l, n))?.c_star;
                r.add("c_star", c)
                    .add("relative_gap", (res.measured_speed - c).abs() / c);
            }
            r.print(cli);
        }
        Command::Plot {
            csv,
            svg,
            x_col,
            y_col,
        } => {
            plot_csv(csv, svg, x_col, y_col)
                .with_context(|| format!("plotting {}", csv.display()))?;
            Report::new().add("svg", svg.display().to_string()).print(cli);
        }
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    err.chain()
        .find_map(|e| e.downcast_ref::<pulsefront::Error>())
        .map_or(2, pulsefront::Error::exit_code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            // the innermost typed error names the failed contract
            let msg = err
                .chain()
                .find_map(|e| e.downcast_ref::<pulsefront::Error>().map(|e| e.to_string()))
                .unwrap_or_else(|| format!("{err:#}"));
            eprintln!("pulsefront: {msg}");
            ExitCode::from(exit_code(&err))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn exit_codes_follow_error_class() {
        let numerical = anyhow::Error::from(pulsefront::Error::from(
            pulsefront_core::Error::NoRootAboveM { lambda: 1.0, m: 1.0 },
        ));
        assert_eq!(exit_code(&numerical), 3);
        let validation = anyhow::Error::from(pulsefront::Error::Config("x".into()))
            .context("loading");
        assert_eq!(exit_code(&validation), 2);
        assert_eq!(exit_code(&anyhow::anyhow!("plain")), 2);
    }
}
