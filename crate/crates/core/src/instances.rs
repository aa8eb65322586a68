//! Random instances, the maximum clique search, the experiment harness and
//! the solution file formats.
//!
//! Instances follow the shuffle procedure: shuffle `1..=2n`, then read the
//! sequence in consecutive pairs `(x, y)` as intervals `[min, max]`. The
//! generator is SplitMix64; per-instance seeds are drawn in order from a
//! master SplitMix64 seeded with the configured seed.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, RngExt, SeedableRng};
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;
use serde::Serialize;

use crate::bnb::{solve_chromatic_with, solve_stacks_with, BnbOptions};
use crate::coloring::{validate_coloring, Arborescence, Coloring};
use crate::dag::{ContainmentDag, Node};
use crate::formulations::build_isd;
use crate::graph::CircleGraph;
use crate::interval::{InstanceError, IntervalRepresentation};
use crate::mwis::solve_mwis;
use crate::oracle::{
    chromatic_exact, clique_number_exact, fractional_chromatic_exact, mwis_exact, stacks_exact, OracleBudget,
    OracleError, STACKS_MAX_VERTICES,
};
use crate::simplex::solve_lp_with;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub n: usize,
    pub seed: u64,
    pub count: usize,
}

/// Per-instance seeds for a configuration.
pub fn instance_seeds(seed: u64, count: usize) -> Vec<u64> {
    let mut master = SplitMix64::seed_from_u64(seed);
    (0..count).map(|_| master.next_u64()).collect()
}

/// One random instance from its own seed.
pub fn random_instance(n: usize, seed: u64) -> IntervalRepresentation {
    assert!(n >= 1, "instances need at least one vertex");
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut seq: Vec<i64> = (1..=2 * n as i64).collect();
    seq.shuffle(&mut rng);
    IntervalRepresentation::from_sequence(&seq).expect("a permutation has distinct endpoints")
}

pub fn generate(config: &GeneratorConfig) -> Vec<IntervalRepresentation> {
    instance_seeds(config.seed, config.count)
        .into_iter()
        .map(|s| random_instance(config.n, s))
        .collect()
}

/// Clique number by branch and bound with a greedy coloring bound.
pub fn max_clique(graph: &CircleGraph) -> usize {
    let n = graph.n();
    let mut best = 0;
    let candidates: Vec<usize> = (0..n).collect();
    expand(graph, 0, candidates, &mut best);
    best
}

fn expand(graph: &CircleGraph, size: usize, candidates: Vec<usize>, best: &mut usize) {
    if candidates.is_empty() {
        *best = (*best).max(size);
        return;
    }
    // Greedy coloring of the candidates; a clique uses each color once.
    let mut color_of = vec![0usize; candidates.len()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (k, &v) in candidates.iter().enumerate() {
        let c = classes
            .iter()
            .position(|cls| cls.iter().all(|&u| !graph.adjacent(u, v)))
            .unwrap_or(classes.len());
        if c == classes.len() {
            classes.push(Vec::new());
        }
        classes[c].push(v);
        color_of[k] = c + 1;
    }
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by_key(|&k| color_of[k]);
    let mut remaining: Vec<usize> = order.iter().map(|&k| candidates[k]).collect();
    let bounds: Vec<usize> = order.iter().map(|&k| color_of[k]).collect();
    for idx in (0..remaining.len()).rev() {
        if size + bounds[idx] <= *best {
            return;
        }
        let v = remaining[idx];
        let next: Vec<usize> = remaining[..idx]
            .iter()
            .copied()
            .filter(|&u| graph.adjacent(u, v))
            .collect();
        expand(graph, size + 1, next, best);
        remaining.truncate(idx);
    }
}

/// Outcome for one instance of an experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceResult {
    pub index: usize,
    pub edges: usize,
    pub omega: usize,
    pub chi: usize,
    pub chi_f: f64,
    pub seconds: f64,
    pub nodes: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRow {
    pub n: usize,
    pub samples: usize,
    pub mean_edges: f64,
    pub mean_solve_time: f64,
    pub count_omega_eq_chi: usize,
    pub count_chi_f_eq_chi: usize,
    pub max_chi_minus_chi_f: f64,
    /// Instances whose solve failed; excluded from the statistics.
    pub failures: usize,
    pub instances: Vec<InstanceResult>,
}

/// CSV record with the table's column names.
#[derive(Serialize)]
struct CsvRow {
    #[serde(rename = "|V|")]
    n: usize,
    #[serde(rename = "|E|")]
    mean_edges: String,
    #[serde(rename = "Ours [s]")]
    mean_solve_time: String,
    #[serde(rename = "# ω = χ")]
    omega_eq_chi: usize,
    #[serde(rename = "# χ_f = χ")]
    chi_f_eq_chi: usize,
    #[serde(rename = "max. χ − χ_f")]
    max_gap: String,
}

/// Tolerance for declaring `chi_f = chi`.
pub const EQUALITY_TOL: f64 = 1e-6;

/// For each `n`, solve `samples` random instances (in parallel, merged in
/// index order) and aggregate the statistics.
pub fn run_experiment(
    n_values: &[usize],
    samples: usize,
    seed: u64,
    opts: &BnbOptions,
) -> Vec<ExperimentRow> {
    n_values
        .iter()
        .map(|&n| {
            let instances = generate(&GeneratorConfig {
                n,
                seed,
                count: samples,
            });
            let outcomes: Vec<Option<InstanceResult>> = instances
                .par_iter()
                .enumerate()
                .map(|(index, rep)| {
                    let graph = CircleGraph::from_intervals(rep);
                    let start = Instant::now();
                    let report = solve_chromatic_with(rep, opts);
                    let seconds = start.elapsed().as_secs_f64();
                    match report {
                        Ok(r) => Some(InstanceResult {
                            index,
                            edges: graph.edge_count(),
                            omega: max_clique(&graph),
                            chi: r.chromatic_number,
                            chi_f: r.fractional_chromatic,
                            seconds,
                            nodes: r.nodes_explored,
                        }),
                        Err(e) => {
                            log::warn!("n = {n}, instance {index}: {e}");
                            None
                        }
                    }
                })
                .collect();
            let failures = outcomes.iter().filter(|o| o.is_none()).count();
            let instances: Vec<InstanceResult> = outcomes.into_iter().flatten().collect();
            let k = instances.len().max(1) as f64;
            ExperimentRow {
                n,
                samples,
                mean_edges: instances.iter().map(|r| r.edges as f64).sum::<f64>() / k,
                mean_solve_time: instances.iter().map(|r| r.seconds).sum::<f64>() / k,
                count_omega_eq_chi: instances.iter().filter(|r| r.omega == r.chi).count(),
                count_chi_f_eq_chi: instances
                    .iter()
                    .filter(|r| (r.chi as f64 - r.chi_f).abs() <= EQUALITY_TOL)
                    .count(),
                max_chi_minus_chi_f: instances
                    .iter()
                    .map(|r| r.chi as f64 - r.chi_f)
                    .fold(0.0, f64::max),
                failures,
                instances,
            }
        })
        .collect()
}

/// Render rows as CSV; `timing` controls whether solve times are printed
/// (they are blank otherwise, for reproducible output).
pub fn experiment_csv(rows: &[ExperimentRow], timing: bool) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer
            .serialize(CsvRow {
                n: row.n,
                mean_edges: format!("{:.2}", row.mean_edges),
                mean_solve_time: if timing {
                    format!("{:.4}", row.mean_solve_time)
                } else {
                    String::new()
                },
                omega_eq_chi: row.count_omega_eq_chi,
                chi_f_eq_chi: row.count_chi_f_eq_chi,
                max_gap: format!("{:.4}", row.max_chi_minus_chi_f),
            })
            .expect("in-memory CSV");
    }
    String::from_utf8(writer.into_inner().expect("in-memory CSV")).expect("CSV is UTF-8")
}

/// Certificate lines `vertex color parent` (1-based, parent 0 is the
/// root). Colorings without an attached arborescence use `T(phi)`.
pub fn certificate_text(rep: &IntervalRepresentation, coloring: &Coloring) -> String {
    let tree = coloring
        .certificate()
        .cloned()
        .unwrap_or_else(|| Arborescence::from_coloring(rep, coloring.colors()));
    let mut out = String::new();
    for v in 0..rep.len() {
        out.push_str(&format!("{} {} {}\n", v + 1, coloring.color(v), tree.parent(v).id()));
    }
    out
}

/// Read certificate lines back into a coloring with its arborescence.
pub fn parse_certificate(text: &str, n: usize) -> Result<Coloring, InstanceError> {
    let mut colors = vec![0usize; n];
    let mut parents = vec![None; n];
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |message: String| InstanceError::Parse { line: i + 1, message };
        let fields: Vec<usize> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| bad(format!("expected three integers, found {line:?}")))?;
        let [v, c, p] = fields[..] else {
            return Err(bad(format!("expected three integers, found {line:?}")));
        };
        if v == 0 || v > n || p > n || c == 0 || parents[v - 1].is_some() {
            return Err(bad(format!("invalid entry {line:?}")));
        }
        colors[v - 1] = c;
        parents[v - 1] = Some(Node::from_id(p));
    }
    let parents: Vec<Node> = parents
        .into_iter()
        .enumerate()
        .map(|(v, p)| {
            p.ok_or(InstanceError::Parse {
                line: 0,
                message: format!("vertex {} is missing", v + 1),
            })
        })
        .collect::<Result<_, _>>()?;
    Ok(Coloring::new(colors).with_certificate(Arborescence::from_parents(parents)))
}

/// Read a stack plan: one line per stack, 1-based ids bottom to top.
pub fn parse_plan(text: &str) -> Result<Vec<Vec<usize>>, InstanceError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| {
            l.split_whitespace()
                .map(|t| match t.parse::<usize>() {
                    Ok(v) if v > 0 => Ok(v - 1),
                    _ => Err(InstanceError::Parse {
                        line: i + 1,
                        message: format!("invalid vertex id {t:?}"),
                    }),
                })
                .collect()
        })
        .collect()
}

/// Outcome of [`cross_check`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CrossCheck {
    pub instances: usize,
    pub comparisons: usize,
    /// One line per disagreement with brute force.
    pub mismatches: Vec<String>,
}

impl CrossCheck {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compare every solver against the brute-force oracles on `trials`
/// random instances with sizes cycling through `1..=n_max`: chromatic and
/// fractional chromatic numbers, clique number, weighted independent sets
/// (integer weights in `[-5, 5]`, by recursion and by LP) and, up to
/// [`STACKS_MAX_VERTICES`] vertices, stack counts for heights 1 to 3.
pub fn cross_check(n_max: usize, trials: usize, seed: u64, opts: &BnbOptions) -> Result<CrossCheck, OracleError> {
    let budget = OracleBudget::default();
    budget.check_vertices(n_max)?;
    let mut rng = SplitMix64::seed_from_u64(seed ^ 0x5eed);
    let mut out = CrossCheck::default();
    for (k, s) in instance_seeds(seed, trials).into_iter().enumerate() {
        let rep = random_instance(1 + k % n_max.max(1), s);
        let graph = CircleGraph::from_intervals(&rep);
        let dag = ContainmentDag::new(&rep);
        let mut check = |what: &str, ok: bool, detail: String| {
            out.comparisons += 1;
            if !ok {
                out.mismatches.push(format!("instance {k} {rep}: {what}: {detail}"));
            }
        };
        let chi = chromatic_exact(&graph, &budget)?;
        let chi_f = fractional_chromatic_exact(&graph, &budget)?;
        match solve_chromatic_with(&rep, opts) {
            Ok(r) => {
                check("chi", r.chromatic_number == chi, format!("{} vs {chi}", r.chromatic_number));
                check(
                    "chi_f",
                    (r.fractional_chromatic - chi_f).abs() <= EQUALITY_TOL,
                    format!("{} vs {chi_f}", r.fractional_chromatic),
                );
                let proper = validate_coloring(&graph, &r.coloring) == Ok(true);
                check("certificate", proper && r.coloring.num_colors() == chi, format!("{:?}", r.coloring.colors()));
            }
            Err(e) => check("chi", false, e.to_string()),
        }
        let omega = clique_number_exact(&graph, &budget)?;
        check("omega", max_clique(&graph) == omega, format!("{} vs {omega}", max_clique(&graph)));

        let weights: Vec<f64> = (0..rep.len()).map(|_| rng.random_range(-5..=5) as f64).collect();
        let brute = mwis_exact(&graph, &weights, &budget)?;
        let dp = solve_mwis(&rep, &dag, &weights).value;
        check("mwis", (dp - brute).abs() <= EQUALITY_TOL, format!("{dp} vs {brute} for {weights:?}"));
        let isd = build_isd(&rep, &dag, &weights).expect("weights match the instance");
        match solve_lp_with(&isd, &opts.simplex) {
            Ok(sol) if sol.is_optimal() => check(
                "isd",
                (sol.objective - brute).abs() <= EQUALITY_TOL,
                format!("{} vs {brute}", sol.objective),
            ),
            Ok(sol) => check("isd", false, format!("LP status {:?}", sol.status)),
            Err(e) => check("isd", false, e.to_string()),
        }

        if rep.len() <= STACKS_MAX_VERTICES {
            for h in 1..=3 {
                let exact = stacks_exact(&rep, h)?;
                match solve_stacks_with(&rep, h, opts) {
                    Ok(r) => check(&format!("stacks H={h}"), r.stacks == exact, format!("{} vs {exact}", r.stacks)),
                    Err(e) => check(&format!("stacks H={h}"), false, e.to_string()),
                }
            }
        }
        out.instances += 1;
    }
    Ok(out)
}
