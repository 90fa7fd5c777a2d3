use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use nbhd_lattice::io::{self as nio, parse_index, parse_set};
use nbhd_lattice::oracle::{brute_decompose, brute_enumerate_po};
use nbhd_lattice::random;
use nbhd_lattice::{
    check_perfect, cholesky_correspondence, component_lattices, compute_lattice, count_po,
    decompose, enumerate_po, graphical_lattice, minimal_separator, pcg, recursive_projection,
    verify_sem_identity, Error, GramMatrix, PoStatement, Subset, Tolerances, PERFECT_MAX_D,
};

#[derive(Parser, Debug)]
#[command(name = "nbhd-lattice", version, about = "Neighborhood lattices and partial orthogonality for Gram matrices")]
pub struct Cli {
    /// Relative zero tolerance for coefficients, residuals and determinants
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Seed for random generation and random permutations
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Args, Debug)]
pub struct MatrixArg {
    /// Gram matrix as CSV or JSON {"d", "sigma"}; `-` reads stdin
    #[arg(long, short)]
    matrix: PathBuf,
}

#[derive(Args, Debug)]
pub struct NodeSetArgs {
    #[command(flatten)]
    m: MatrixArg,
    /// Node, 1-based
    #[arg(long, short)]
    node: String,
    /// Conditioning set, comma-separated 1-based indices
    #[arg(long, short, default_value = "")]
    set: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check that a matrix is a symmetric positive-definite Gram matrix
    Validate(MatrixArg),
    /// Sample Gram matrix (1/n) Σ x xᵀ from CSV observations
    GramFromData {
        /// Observations as CSV, one per line
        #[arg(long)]
        data: PathBuf,
        /// Write CSV instead of JSON
        #[arg(long)]
        csv: bool,
    },
    /// SEM coefficients of a node on a conditioning set
    Coefficients(NodeSetArgs),
    /// Neighborhood lattice of a node through a conditioning set
    Lattice(NodeSetArgs),
    /// Lattice decomposition of one node or of every node
    Decompose {
        #[command(flatten)]
        m: MatrixArg,
        #[arg(long, short, required_unless_present = "all_nodes", conflicts_with = "all_nodes")]
        node: Option<String>,
        /// Decompose every node, one worker thread per node
        #[arg(long)]
        all_nodes: bool,
    },
    /// Stream every partial-orthogonality statement for a node as NDJSON
    EnumeratePo {
        #[command(flatten)]
        m: MatrixArg,
        #[arg(long, short)]
        node: String,
    },
    /// Count the partial-orthogonality statements for a node
    CountPo {
        #[command(flatten)]
        m: MatrixArg,
        #[arg(long, short)]
        node: String,
    },
    /// Partial correlation graph
    Pcg {
        #[command(flatten)]
        m: MatrixArg,
        /// Emit Graphviz DOT instead of JSON
        #[arg(long)]
        dot: bool,
    },
    /// Smallest subset of the set separating the node from the rest of the set
    Separator(NodeSetArgs),
    /// Lattice read off the partial correlation graph (valid only for perfect matrices)
    GraphicalLattice {
        #[command(flatten)]
        a: NodeSetArgs,
        /// Acknowledge that the matrix is perfect with respect to its graph
        #[arg(long)]
        assume_perfect: bool,
    },
    /// Per-component lattices of a node and their merge
    Components(NodeSetArgs),
    /// Recursive SEM factorization along an ordering
    Directed {
        #[command(flatten)]
        m: MatrixArg,
        /// Ordering, comma-separated 1-based; defaults to 1..d
        #[arg(long)]
        perm: Option<String>,
        /// Use a random ordering drawn from --seed
        #[arg(long, conflicts_with = "perm")]
        random_perm: bool,
    },
    /// Compare the factorization with the Cholesky factor of the permuted precision
    CholeskyCheck {
        #[command(flatten)]
        m: MatrixArg,
        #[arg(long)]
        perm: Option<String>,
        #[arg(long, conflicts_with = "perm")]
        random_perm: bool,
    },
    /// Exhaustively test perfectness with respect to the partial correlation graph
    CheckPerfect {
        #[command(flatten)]
        m: MatrixArg,
        /// Refuse matrices above this dimension
        #[arg(long, default_value_t = PERFECT_MAX_D)]
        max_d: usize,
    },
    /// Compare the fast decomposition and statements with the brute-force oracle
    Verify {
        #[command(flatten)]
        m: MatrixArg,
        #[arg(long, short)]
        node: String,
    },
    /// Generate a random positive-definite Gram matrix
    GenRandom {
        #[arg(long, short)]
        d: usize,
        /// Off-diagonal density of a sparse precision matrix; dense AᵀA + dI when absent
        #[arg(long)]
        sparsity: Option<f64>,
        /// Write CSV instead of JSON
        #[arg(long)]
        csv: bool,
    },
}

pub enum Output {
    Document(Value),
    Records(Vec<Value>),
    Text(String),
}

pub enum Failure {
    Usage(String),
    Data { kind: String, message: String },
    /// The command ran but found a discrepancy; the report is still emitted.
    Mismatch(Output),
}

fn kind(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split([' ', '(', '{']).next().unwrap_or("Error").to_string()
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Data {
            kind: kind(&e),
            message: e.to_string(),
        }
    }
}

fn usage(e: Error) -> Failure {
    Failure::Usage(e.to_string())
}

fn read_text(path: &Path) -> Result<String, Failure> {
    let mut text = String::new();
    let res = if path == Path::new("-") {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| Failure::Data {
        kind: "Io".into(),
        message: format!("{}: {e}", path.display()),
    })?;
    Ok(text)
}

struct Ctx {
    tol: Tolerances,
    seed: u64,
}

impl Ctx {
    fn matrix(&self, m: &MatrixArg) -> Result<GramMatrix, Failure> {
        Ok(nio::parse_matrix(&read_text(&m.matrix)?, self.tol)?)
    }

    fn node_set(&self, a: &NodeSetArgs) -> Result<(GramMatrix, usize, Subset), Failure> {
        let g = self.matrix(&a.m)?;
        let j = parse_index(&a.node, g.d()).map_err(usage)?;
        let s = parse_set(&a.set, g.d()).map_err(usage)?;
        if s.contains(j) {
            return Err(usage(Error::NodeInSet { node: j, set: s }));
        }
        Ok((g, j, s))
    }

    fn perm(&self, d: usize, perm: &Option<String>, random_perm: bool) -> Result<Vec<usize>, Failure> {
        if random_perm {
            return Ok(random::permutation(d, &mut random::rng(self.seed)));
        }
        match perm {
            None => Ok((0..d).collect()),
            Some(text) => text
                .split(',')
                .map(|t| parse_index(t, d))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| usage(Error::NotAPermutation { d })),
        }
    }
}

fn interval(m: Subset, big: Subset) -> Value {
    json!({ "m": m.to_one_based(), "M": big.to_one_based() })
}

pub fn run(cli: Cli) -> Result<Output, Failure> {
    let tol = match cli.tol {
        Some(t) if !(t.is_finite() && t >= 0.0) => {
            return Err(Failure::Usage(format!("--tol must be a non-negative number, got {t}")))
        }
        Some(t) => Tolerances::with_zero(t),
        None => Tolerances::default(),
    };
    let ctx = Ctx { tol, seed: cli.seed };
    let doc = match cli.command {
        Command::Validate(m) => {
            let g = ctx.matrix(&m)?;
            json!({ "valid": true, "d": g.d(), "max_abs": g.max_abs(), "tolerances": g.tolerances() })
        }
        Command::GramFromData { data, csv } => {
            let rows = nio::parse_samples(&read_text(&data)?)?;
            let g = GramMatrix::from_observations(&rows, |a: &f64, b: &f64| a * b, ctx.tol)?;
            if csv {
                return Ok(Output::Text(nio::matrix_to_csv(&g)));
            }
            nio::matrix_json(&g)
        }
        Command::Coefficients(a) => {
            let (g, j, s) = ctx.node_set(&a)?;
            nio::coefficients_json(&g.sem_coefficients(j, s)?)
        }
        Command::Lattice(a) => {
            let (g, j, s) = ctx.node_set(&a)?;
            nio::lattice_json(&compute_lattice(&g, j, s)?)
        }
        Command::Decompose { m, node, all_nodes } => {
            let g = ctx.matrix(&m)?;
            if all_nodes {
                let results: Vec<_> = std::thread::scope(|scope| {
                    let handles: Vec<_> = (0..g.d())
                        .map(|j| {
                            let g = &g;
                            scope.spawn(move || decompose(g, j))
                        })
                        .collect();
                    handles.into_iter().map(|h| h.join().expect("decomposition worker panicked")).collect()
                });
                let docs = results
                    .into_iter()
                    .map(|r| r.map(|dec| nio::decomposition_json(&dec)))
                    .collect::<Result<Vec<_>, _>>()?;
                Value::Array(docs)
            } else {
                let node = node.expect("clap requires --node without --all-nodes");
                let j = parse_index(&node, g.d()).map_err(usage)?;
                nio::decomposition_json(&decompose(&g, j)?)
            }
        }
        Command::EnumeratePo { m, node } => {
            let g = ctx.matrix(&m)?;
            let j = parse_index(&node, g.d()).map_err(usage)?;
            let dec = decompose(&g, j)?;
            return Ok(Output::Records(enumerate_po(&dec).map(|st| nio::po_json(&st)).collect()));
        }
        Command::CountPo { m, node } => {
            let g = ctx.matrix(&m)?;
            let j = parse_index(&node, g.d()).map_err(usage)?;
            let dec = decompose(&g, j)?;
            json!({
                "node": j + 1,
                "K": dec.len(),
                "po_count": count_po(&dec) as u64,
                "candidates": nbhd_lattice::candidate_po_count(g.d()) as u64,
            })
        }
        Command::Pcg { m, dot } => {
            let p = pcg(&ctx.matrix(&m)?);
            if dot {
                return Ok(Output::Text(p.to_dot()));
            }
            nio::graph_json(&p)
        }
        Command::Separator(a) => {
            let (g, j, s) = ctx.node_set(&a)?;
            let sep = minimal_separator(&pcg(&g), j, s)?;
            json!({ "node": j + 1, "set": s.to_one_based(), "separator": sep.to_one_based() })
        }
        Command::GraphicalLattice { a, assume_perfect } => {
            if !assume_perfect {
                return Err(Failure::Usage(
                    "graphical-lattice is only valid for matrices that are perfect with respect to \
                     their partial correlation graph; pass --assume-perfect to acknowledge this \
                     (check-perfect tests it for small d)"
                        .into(),
                ));
            }
            let (g, j, s) = ctx.node_set(&a)?;
            let l = graphical_lattice(&pcg(&g), j, s)?;
            json!({
                "node": j + 1,
                "m": l.min_set.to_one_based(),
                "M": l.max_set.to_one_based(),
                "size": l.size(),
            })
        }
        Command::Components(a) => {
            let (g, j, s) = ctx.node_set(&a)?;
            let c = component_lattices(&pcg(&g), j, s)?;
            let parts: Vec<Value> = c
                .components
                .iter()
                .map(|p| {
                    json!({
                        "component": p.component.to_one_based(),
                        "m": p.lattice.min_set.to_one_based(),
                        "M": p.lattice.max_set.to_one_based(),
                    })
                })
                .collect();
            json!({
                "node": j + 1,
                "components": parts,
                "merged": interval(c.merged.min_set, c.merged.max_set),
            })
        }
        Command::Directed { m, perm, random_perm } => {
            let g = ctx.matrix(&m)?;
            let perm = ctx.perm(g.d(), &perm, random_perm)?;
            let f = recursive_projection(&g, &perm).map_err(|e| match e {
                Error::NotAPermutation { .. } => usage(e),
                e => e.into(),
            })?;
            let mut doc = nio::factorization_json(&f);
            doc["identity_residual"] = json!(verify_sem_identity(&g, &f)?);
            doc
        }
        Command::CholeskyCheck { m, perm, random_perm } => {
            let g = ctx.matrix(&m)?;
            let perm = ctx.perm(g.d(), &perm, random_perm)?;
            let dev = cholesky_correspondence(&g, &perm).map_err(|e| match e {
                Error::NotAPermutation { .. } => usage(e),
                e => e.into(),
            })?;
            json!({
                "perm": perm.iter().map(|v| v + 1).collect::<Vec<_>>(),
                "deviation": dev,
                "match": dev < 1e-8,
            })
        }
        Command::CheckPerfect { m, max_d } => {
            let g = ctx.matrix(&m)?;
            let c = check_perfect(&g, max_d)?;
            let counterexample = c.counterexample.map(|(a, s, b)| {
                json!({ "A": a.to_one_based(), "S": s.to_one_based(), "B": b.to_one_based() })
            });
            json!({ "perfect": c.perfect, "counterexample": counterexample })
        }
        Command::Verify { m, node } => {
            let g = ctx.matrix(&m)?;
            let j = parse_index(&node, g.d()).map_err(usage)?;
            let fast = decompose(&g, j)?;
            let slow = brute_decompose(&g, j)?;
            let mut fast_po: Vec<PoStatement> = enumerate_po(&fast).collect();
            fast_po.sort();
            let slow_po = brute_enumerate_po(&g, j)?;
            let intervals_match = fast.sorted_intervals() == slow.sorted_intervals();
            let po_match = fast_po == slow_po;
            let doc = json!({
                "node": j + 1,
                "K": fast.len(),
                "oracle_K": slow.len(),
                "po_count": count_po(&fast) as u64,
                "oracle_po_count": slow_po.len(),
                "partition": fast.is_partition(),
                "intervals_match": intervals_match,
                "po_match": po_match,
                "match": intervals_match && po_match,
            });
            if !(intervals_match && po_match) {
                return Err(Failure::Mismatch(Output::Document(doc)));
            }
            doc
        }
        Command::GenRandom { d, sparsity, csv } => {
            if d == 0 || d > nbhd_lattice::MAX_DIM {
                return Err(Failure::Usage(format!("-d must be in 1..={}", nbhd_lattice::MAX_DIM)));
            }
            let (g, mode, pattern) = match sparsity {
                Some(p) if !(0.0..=1.0).contains(&p) => {
                    return Err(Failure::Usage(format!("--sparsity must lie in [0, 1], got {p}")))
                }
                Some(p) => {
                    let sp = random::sparse_precision(d, ctx.seed, p);
                    let edges: Vec<[usize; 2]> = sp.edges.iter().map(|&(a, b)| [a + 1, b + 1]).collect();
                    (sp.gram, "sparse-precision", Some(edges))
                }
                None => (random::dense(d, ctx.seed), "dense", None),
            };
            if csv {
                return Ok(Output::Text(nio::matrix_to_csv(&g)));
            }
            let mut doc = nio::matrix_json(&g);
            doc["mode"] = json!(mode);
            doc["seed"] = json!(ctx.seed);
            if let Some(edges) = pattern {
                doc["sparsity"] = json!(sparsity);
                doc["pattern_edges"] = json!(edges);
            }
            doc
        }
    };
    Ok(Output::Document(doc))
}
