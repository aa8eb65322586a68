use std::fmt::Display;
use std::fs;
use std::io::{self, Read};
use std::path::Path;

use anyhow::anyhow;
use circlecolor::bnb::{first_fit_by_left, solve_baseline, Baseline, Timings};
use circlecolor::formulations::{build_as, build_cg, build_cl, build_isd};
use circlecolor::instances::{certificate_text, cross_check, experiment_csv, generate, max_clique, run_experiment, GeneratorConfig};
use circlecolor::stowage::LayeredDag;
use circlecolor::{
    build_cgh, solve_chromatic_with, solve_lp_with, solve_mwis, solve_stacks_with, write_lp, write_mps, BnbOptions,
    CircleGraph, ContainmentDag, IntervalRepresentation, LpModel, SimplexOptions,
};
use serde_json::{json, Value};

use crate::{
    BenchArgs, Cli, Command, ExportArgs, ExportFormat, FormulationArg, GenArgs, InputArgs, ModelArgs, MwisArgs,
    SolveArgs, StacksArgs, VerifyArgs,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Usage,
    Input,
    Solver,
}

impl Kind {
    pub fn code(self) -> u8 {
        match self {
            Kind::Usage => 1,
            Kind::Input => 2,
            Kind::Solver => 3,
        }
    }
}

#[derive(Debug)]
pub struct Failure {
    pub kind: Kind,
    pub source: anyhow::Error,
}

type Outcome<T = ()> = Result<T, Failure>;

fn fail(kind: Kind, message: impl Display) -> Failure {
    Failure {
        kind,
        source: anyhow!("{message}"),
    }
}

trait Classify<T> {
    fn or_fail(self, kind: Kind) -> Outcome<T>;
}

impl<T, E: Into<anyhow::Error>> Classify<T> for Result<T, E> {
    fn or_fail(self, kind: Kind) -> Outcome<T> {
        self.map_err(|e| Failure {
            kind,
            source: e.into(),
        })
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let opts = bnb_options(cli)?;
    let ctx = Context { cli, opts };
    match &cli.command {
        Command::Solve(a) => ctx.solve(a),
        Command::Relax(a) => ctx.relax(a),
        Command::Mwis(a) => ctx.mwis(a),
        Command::Stacks(a) => ctx.stacks(a),
        Command::Gen(a) => ctx.generate(a),
        Command::Export(a) => ctx.export(a),
        Command::Bench(a) => ctx.bench(a),
        Command::Verify(a) => ctx.verify(a),
    }
}

fn bnb_options(cli: &Cli) -> Outcome<BnbOptions> {
    let mut opts = BnbOptions {
        node_limit: cli.node_limit,
        ..BnbOptions::default()
    };
    if let Some(tol) = cli.tol {
        if !(tol.is_finite() && tol > 0.0 && tol < 0.5) {
            return Err(fail(Kind::Usage, format!("--tol must lie in (0, 0.5), got {tol}")));
        }
        opts.simplex = SimplexOptions::default().with_tolerance(tol);
        opts.integrality_tol = tol;
    }
    Ok(opts)
}

/// Objective values are printed rounded to nine decimals so that
/// round-off does not leak into reports.
fn value(v: f64) -> f64 {
    let r = (v * 1e9).round() / 1e9;
    if r == 0.0 { 0.0 } else { r }
}

fn read_text(path: &Path) -> Outcome<String> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text).or_fail(Kind::Input)?;
        return Ok(text);
    }
    fs::read_to_string(path).map_err(|e| fail(Kind::Input, format!("{}: {e}", path.display())))
}

fn read_instance(input: &InputArgs) -> Outcome<IntervalRepresentation> {
    let text = read_text(&input.input)?;
    IntervalRepresentation::parse(&text).map_err(|e| fail(Kind::Input, format!("{}: {e}", input.input.display())))
}

fn write_file(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| fail(Kind::Input, format!("{}: {e}", path.display())))
}

fn timings_json(t: &Timings) -> Value {
    json!({
        "build": t.build.as_secs_f64(),
        "root_lp": t.root_lp.as_secs_f64(),
        "search": t.search.as_secs_f64(),
        "total": t.total.as_secs_f64(),
    })
}

fn check_model_args(model: &ModelArgs) -> Outcome {
    match (model.formulation, model.height) {
        (FormulationArg::Cgh, None) => Err(fail(Kind::Usage, "--formulation cgh needs --height")),
        (FormulationArg::Cgh, Some(0)) => Err(fail(Kind::Usage, "--height must be at least 1")),
        (FormulationArg::Cgh, Some(_)) => Ok(()),
        (_, Some(_)) => Err(fail(Kind::Usage, "--height only applies to --formulation cgh")),
        (_, None) => Ok(()),
    }
}

fn build_model(rep: &IntervalRepresentation, model: &ModelArgs) -> Outcome<LpModel> {
    let graph = CircleGraph::from_intervals(rep);
    let built = match model.formulation {
        FormulationArg::Cg => build_cg(rep, &ContainmentDag::new(rep), model.relax),
        FormulationArg::Cl => build_cl(&graph, first_fit_by_left(rep, &graph).num_colors()),
        FormulationArg::As => build_as(&graph),
        FormulationArg::Cgh => {
            let layered = LayeredDag::new(rep, model.height.unwrap_or(1)).or_fail(Kind::Usage)?;
            build_cgh(rep, &layered, model.relax)
        }
    };
    Ok(if model.relax { built.relaxed() } else { built })
}

fn formulation_name(f: FormulationArg) -> &'static str {
    match f {
        FormulationArg::Cg => "cg",
        FormulationArg::Cl => "cl",
        FormulationArg::As => "as",
        FormulationArg::Cgh => "cgh",
    }
}

struct Context<'a> {
    cli: &'a Cli,
    opts: BnbOptions,
}

impl Context<'_> {
    fn emit(&self, command: &str, mut report: Value, timings: Option<Value>, text: &str) {
        if self.cli.json {
            report["schema_version"] = json!(SCHEMA_VERSION);
            report["command"] = json!(command);
            if let Some(t) = timings.filter(|_| !self.cli.no_timing) {
                report["timings"] = t;
            }
            println!("{}", serde_json::to_string_pretty(&report).expect("reports serialize"));
        } else {
            print!("{text}");
        }
    }

    fn lp_value(&self, model: &LpModel) -> Outcome<(f64, usize)> {
        let sol = solve_lp_with(model, &self.opts.simplex).or_fail(Kind::Solver)?;
        if !sol.is_optimal() {
            return Err(fail(Kind::Solver, format!("{} relaxation ended {:?}", model.name, sol.status)));
        }
        Ok((value(sol.objective), sol.iterations))
    }

    fn solve(&self, args: &SolveArgs) -> Outcome {
        check_model_args(&args.model)?;
        let rep = read_instance(&args.input)?;
        let formulation = formulation_name(args.model.formulation);
        if args.certificate.is_some() && (args.model.formulation != FormulationArg::Cg || args.model.relax) {
            return Err(fail(Kind::Usage, "--certificate needs the integer cg formulation"));
        }
        if args.model.relax {
            let model = build_model(&rep, &args.model)?;
            let (lp, iterations) = self.lp_value(&model)?;
            let report = json!({ "formulation": formulation, "relaxation": lp, "lp_iterations": iterations });
            self.emit("solve", report, None, &format!("lp={lp}\n"));
            return Ok(());
        }
        match args.model.formulation {
            FormulationArg::Cg => {
                let r = solve_chromatic_with(&rep, &self.opts).or_fail(Kind::Solver)?;
                let colors = r.coloring.colors();
                let text = format!(
                    "chi={} chi_f={}\ncoloring={}\n",
                    r.chromatic_number,
                    value(r.fractional_chromatic),
                    colors.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
                );
                let report = json!({
                    "formulation": formulation,
                    "n": rep.len(),
                    "chi": r.chromatic_number,
                    "chi_f": value(r.fractional_chromatic),
                    "root_gap": value(r.root_gap),
                    "root_integral": r.root_integral,
                    "nodes": r.nodes_explored,
                    "lp_iterations": r.lp_iterations,
                    "coloring": colors,
                });
                if let Some(path) = &args.certificate {
                    write_file(path, &certificate_text(&rep, &r.coloring))?;
                }
                self.emit("solve", report, Some(timings_json(&r.timings)), &text);
            }
            FormulationArg::Cl | FormulationArg::As => {
                let which = if args.model.formulation == FormulationArg::Cl {
                    Baseline::Classical
                } else {
                    Baseline::Representatives
                };
                let r = solve_baseline(&rep, which, &self.opts).or_fail(Kind::Solver)?;
                let report = json!({
                    "formulation": formulation,
                    "n": rep.len(),
                    "chi": r.optimum,
                    "relaxation": value(r.lp_relaxation),
                    "colors_available": r.colors_available,
                    "nodes": r.nodes_explored,
                });
                let text = format!("chi={} lp={}\n", r.optimum, value(r.lp_relaxation));
                self.emit("solve", report, None, &text);
            }
            FormulationArg::Cgh => self.stacks_report("solve", &rep, args.model.height.unwrap_or(1), None)?,
        }
        Ok(())
    }

    fn relax(&self, args: &InputArgs) -> Outcome {
        let rep = read_instance(args)?;
        let model = build_cg(&rep, &ContainmentDag::new(&rep), true);
        let (chi_f, iterations) = self.lp_value(&model)?;
        let omega = max_clique(&CircleGraph::from_intervals(&rep));
        let report = json!({ "n": rep.len(), "chi_f": chi_f, "omega": omega, "lp_iterations": iterations });
        self.emit("relax", report, None, &format!("chi_f={chi_f} omega={omega}\n"));
        Ok(())
    }

    fn mwis(&self, args: &MwisArgs) -> Outcome {
        let rep = read_instance(&args.input)?;
        let raw = match (&args.weights, &args.weights_file) {
            (Some(list), _) => Some(list.replace(',', " ")),
            (None, Some(path)) => Some(read_text(path)?),
            (None, None) => None,
        };
        let weights: Vec<f64> = match raw {
            Some(text) => text
                .split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|_| fail(Kind::Input, format!("invalid weight {t:?}"))))
                .collect::<Outcome<_>>()?,
            None => vec![1.0; rep.len()],
        };
        if weights.len() != rep.len() || weights.iter().any(|w| !w.is_finite()) {
            return Err(fail(
                Kind::Input,
                format!("expected {} finite weights, got {}", rep.len(), weights.len()),
            ));
        }
        let dag = ContainmentDag::new(&rep);
        let sol = solve_mwis(&rep, &dag, &weights);
        let isd = build_isd(&rep, &dag, &weights).or_fail(Kind::Input)?;
        let (lp, _) = self.lp_value(&isd)?;
        let set: Vec<usize> = sol.set.iter().map(|v| v + 1).collect();
        let text = format!(
            "value={} lp={lp}\nset={}\n",
            value(sol.value),
            set.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
        );
        let report = json!({ "n": rep.len(), "value": value(sol.value), "isd_lp": lp, "set": set });
        self.emit("mwis", report, None, &text);
        Ok(())
    }

    fn stacks(&self, args: &StacksArgs) -> Outcome {
        if args.height == 0 {
            return Err(fail(Kind::Usage, "--height must be at least 1"));
        }
        let rep = read_instance(&args.input)?;
        self.stacks_report("stacks", &rep, args.height, args.plan.as_deref())
    }

    fn stacks_report(&self, command: &str, rep: &IntervalRepresentation, height: usize, plan: Option<&Path>) -> Outcome {
        let r = solve_stacks_with(rep, height, &self.opts).or_fail(Kind::Solver)?;
        if let Some(path) = plan {
            write_file(path, &r.plan.to_text())?;
        }
        let stacks: Vec<Vec<usize>> = r
            .plan
            .stacks()
            .iter()
            .map(|s| s.iter().map(|v| v + 1).collect())
            .collect();
        let report = json!({
            "formulation": "cgh",
            "n": rep.len(),
            "stacks": r.stacks,
            "height": r.requested_height,
            "effective_height": r.effective_height,
            "relaxation": value(r.lp_relaxation),
            "nodes": r.nodes_explored,
            "lp_iterations": r.lp_iterations,
            "plan": stacks,
        });
        let text = format!(
            "stacks={} height={} effective_height={}\n{}",
            r.stacks,
            r.requested_height,
            r.effective_height,
            r.plan.to_text()
        );
        self.emit(command, report, Some(timings_json(&r.timings)), &text);
        Ok(())
    }

    fn generate(&self, args: &GenArgs) -> Outcome {
        if args.n == 0 {
            return Err(fail(Kind::Usage, "-n must be at least 1"));
        }
        let config = GeneratorConfig {
            n: args.n,
            seed: args.seed,
            count: args.count,
        };
        let instances = generate(&config);
        if let Some(dir) = &args.out_dir {
            fs::create_dir_all(dir).map_err(|e| fail(Kind::Input, format!("{}: {e}", dir.display())))?;
            for (k, rep) in instances.iter().enumerate() {
                write_file(&dir.join(format!("instance_{k}.txt")), &rep.to_text())?;
            }
        }
        let intervals: Vec<Vec<[u32; 2]>> = instances
            .iter()
            .map(|rep| rep.intervals().iter().map(|iv| [iv.left, iv.right]).collect())
            .collect();
        let text: String = instances
            .iter()
            .map(|rep| {
                let parts: Vec<String> = rep.intervals().iter().map(|iv| iv.to_string()).collect();
                format!("{}\n", parts.join(" "))
            })
            .collect();
        let report = json!({ "n": args.n, "seed": args.seed, "count": args.count, "instances": intervals });
        self.emit("gen", report, None, &text);
        Ok(())
    }

    fn export(&self, args: &ExportArgs) -> Outcome {
        check_model_args(&args.model)?;
        let rep = read_instance(&args.input)?;
        let (text, model) = match args.format {
            ExportFormat::Dimacs => (CircleGraph::from_intervals(&rep).to_dimacs(), None),
            ExportFormat::Lp | ExportFormat::Mps => {
                let model = build_model(&rep, &args.model)?;
                let text = if args.format == ExportFormat::Lp { write_lp(&model) } else { write_mps(&model) };
                (text, Some(model))
            }
        };
        if let Some(path) = &args.metadata {
            let model = model
                .as_ref()
                .ok_or_else(|| fail(Kind::Usage, "--metadata needs --format lp or mps"))?;
            write_file(path, &format!("{}\n", model.metadata().to_json()))?;
        }
        let format = match args.format {
            ExportFormat::Lp => "lp",
            ExportFormat::Mps => "mps",
            ExportFormat::Dimacs => "dimacs",
        };
        let mut report = json!({ "format": format });
        if let Some(m) = &model {
            report["formulation"] = json!(m.formulation.tag());
            report["variables"] = json!(m.num_variables());
            report["constraints"] = json!(m.num_constraints());
        }
        match &args.output {
            Some(path) => {
                write_file(path, &text)?;
                report["output"] = json!(path.display().to_string());
                self.emit("export", report, None, "");
            }
            None => {
                report["text"] = json!(text);
                self.emit("export", report, None, &text);
            }
        }
        Ok(())
    }

    fn bench(&self, args: &BenchArgs) -> Outcome {
        if args.n.contains(&0) || args.samples == 0 {
            return Err(fail(Kind::Usage, "sizes and --samples must be positive"));
        }
        let run = || run_experiment(&args.n, args.samples, args.seed, &self.opts);
        let rows = match args.threads {
            Some(t) => rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .or_fail(Kind::Usage)?
                .install(run),
            None => run(),
        };
        let timing = !self.cli.no_timing;
        let csv = experiment_csv(&rows, timing);
        if let Some(path) = &args.csv {
            write_file(path, &csv)?;
        }
        let json_rows: Vec<Value> = rows
            .iter()
            .map(|r| {
                let mut row = json!({
                    "n": r.n,
                    "samples": r.samples,
                    "mean_edges": value(r.mean_edges),
                    "count_omega_eq_chi": r.count_omega_eq_chi,
                    "count_chi_f_eq_chi": r.count_chi_f_eq_chi,
                    "max_chi_minus_chi_f": value(r.max_chi_minus_chi_f),
                    "failures": r.failures,
                });
                if timing {
                    row["mean_solve_time"] = json!(r.mean_solve_time);
                }
                row
            })
            .collect();
        let report = json!({ "seed": args.seed, "rows": json_rows });
        self.emit("bench", report, None, &csv);
        let failures: usize = rows.iter().map(|r| r.failures).sum();
        if failures > 0 {
            return Err(fail(Kind::Solver, format!("{failures} instances failed to solve")));
        }
        Ok(())
    }

    fn verify(&self, args: &VerifyArgs) -> Outcome {
        if args.n_max == 0 {
            return Err(fail(Kind::Usage, "--n-max must be at least 1"));
        }
        let summary = cross_check(args.n_max, args.trials, args.seed, &self.opts).or_fail(Kind::Usage)?;
        let mut text = format!(
            "instances={} comparisons={} mismatches={}\n",
            summary.instances,
            summary.comparisons,
            summary.mismatches.len()
        );
        for m in &summary.mismatches {
            text.push_str(m);
            text.push('\n');
        }
        let report = json!({
            "n_max": args.n_max,
            "trials": args.trials,
            "seed": args.seed,
            "instances": summary.instances,
            "comparisons": summary.comparisons,
            "mismatches": summary.mismatches,
        });
        self.emit("verify", report, None, &text);
        if summary.passed() {
            Ok(())
        } else {
            Err(fail(Kind::Solver, format!("{} mismatches", summary.mismatches.len())))
        }
    }
}
