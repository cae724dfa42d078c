use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use fcell_core::builtin::{builtin_link, builtin_solid_torus, builtin_tree};
use fcell_core::io::{certificate_to_json, link_to_json, parse_link, parse_solid_torus, parse_tree, solid_torus_to_json};
use fcell_core::milnor::{render_compact, render_index};
use fcell_core::obstruction::{bottom_meridian_word, phi_functional, phi_of_word_with};
use fcell_core::selftest::{run_criterion, DEFAULT_SEED};
use fcell_core::series::default_degree;
use fcell_core::solid_torus::admissibility_degree;
use fcell_core::tree::BasisKind;
use fcell_core::{
    compose, homotopy_witness, is_almost_trivial, mu_bar, nilpotent_presentation, Error, FCellTree,
    LinkPresentation, SolidTorusLink, Word,
};

#[derive(Parser)]
#[command(name = "fcell", version, about = "Milnor invariants and flexible-cell obstructions")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Rtilde,
    Q,
}

#[derive(Subcommand)]
enum Command {
    /// Milnor invariant mu_bar(i1,...,ik-1;ik) of a link.
    Mu {
        #[arg(long)]
        link: String,
        /// 1-based multi-index, last entry is the longitude component.
        #[arg(long, value_delimiter = ',', required = true)]
        index: Vec<usize>,
        #[arg(long, env = "FCELL_DEFAULT_Q")]
        q: Option<usize>,
    },
    /// Homotopy triviality up to the truncation degree.
    Trivial {
        #[arg(long)]
        link: String,
        #[arg(long, env = "FCELL_DEFAULT_Q")]
        q: Option<usize>,
        /// Also report whether every proper sublink is trivial.
        #[arg(long)]
        almost: bool,
    },
    /// Admissibility of a solid-torus link.
    Admissible {
        #[arg(long)]
        pattern: String,
        #[arg(long, env = "FCELL_DEFAULT_Q")]
        q: Option<usize>,
    },
    /// The iterated Bing double of the core.
    Bing {
        #[arg(long, default_value_t = 1)]
        depth: usize,
    },
    /// Presentation of the nilpotent quotient of the link group.
    Presentation {
        #[arg(long)]
        link: String,
        #[arg(long, env = "FCELL_DEFAULT_Q")]
        q: Option<usize>,
    },
    /// Satellite of a link with a solid-torus pattern on its last component.
    Compose {
        #[arg(long)]
        link: String,
        #[arg(long)]
        pattern: String,
    },
    /// Basis of the R-tilde or Q subspace at a tree vertex.
    TreeBasis {
        #[arg(long)]
        tree: String,
        #[arg(long, value_enum, default_value_t = Kind::Q)]
        kind: Kind,
        /// Vertex id, defaults to the root.
        #[arg(long)]
        vertex: Option<usize>,
    },
    /// The functional Phi of a tree and its value on a word.
    TreePhi {
        #[arg(long)]
        tree: String,
        /// Word in the tree's meridians; defaults to the bottom meridian word.
        #[arg(long)]
        word: Option<String>,
    },
    /// Try to obstruct the link bounding disjoint cells with the given trees.
    Obstruct {
        #[arg(long)]
        link: String,
        /// Comma-separated tree sources, one per component.
        #[arg(long, value_delimiter = ',', required = true)]
        trees: Vec<String>,
        #[arg(long, env = "FCELL_DEFAULT_Q")]
        q: Option<usize>,
    },
    /// Run the acceptance criteria.
    Selftest {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Run a single criterion.
        #[arg(long)]
        criterion: Option<u32>,
    },
}

enum Failure {
    Refusal(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_refusal() {
            Failure::Refusal(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

type Outcome = Result<(), Failure>;

/// Reads `builtin:NAME` or a file path.
fn source(spec: &str) -> Result<Source<'_>, Failure> {
    match spec.strip_prefix("builtin:") {
        Some(name) => Ok(Source::Builtin(name)),
        None => std::fs::read_to_string(Path::new(spec))
            .map(Source::Text)
            .map_err(|e| Failure::Input(format!("cannot read `{spec}`: {e}"))),
    }
}

enum Source<'a> {
    Builtin(&'a str),
    Text(String),
}

fn load_link(spec: &str) -> Result<LinkPresentation, Failure> {
    Ok(match source(spec)? {
        Source::Builtin(n) => builtin_link(n)?,
        Source::Text(t) => parse_link(&t)?,
    })
}

fn load_pattern(spec: &str) -> Result<SolidTorusLink, Failure> {
    Ok(match source(spec)? {
        Source::Builtin(n) => builtin_solid_torus(n)?,
        Source::Text(t) => parse_solid_torus(&t)?,
    })
}

fn load_tree(spec: &str) -> Result<FCellTree, Failure> {
    Ok(match source(spec)? {
        Source::Builtin(n) => builtin_tree(n)?,
        Source::Text(t) => parse_tree(&t)?,
    })
}

fn print_json(v: serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
}

fn run(cli: Cli) -> Outcome {
    let json = cli.format == Format::Json;
    match cli.command {
        Command::Mu { link, index, q } => {
            let l = load_link(&link)?;
            if index.is_empty() || index.iter().any(|&i| i == 0 || i > l.len()) {
                return Err(Failure::Input(format!(
                    "index entries must lie in 1..={}",
                    l.len()
                )));
            }
            let full: Vec<usize> = index.iter().map(|i| i - 1).collect();
            let q = q.unwrap_or(default_degree(l.len())).max(full.len());
            let (j, init) = full.split_last().expect("nonempty");
            let r = mu_bar(&l, init, *j, q)?;
            if json {
                print_json(json!({ "index": render_index(init, *j), "mu_bar": r }));
            } else {
                println!("mu_bar({}) = {r}", render_compact(&full));
            }
        }
        Command::Trivial { link, q, almost } => {
            let l = load_link(&link)?;
            let q = q.unwrap_or(default_degree(l.len()));
            let w = homotopy_witness(&l, q)?;
            let almost_trivial = if almost { Some(is_almost_trivial(&l, q)?) } else { None };
            if json {
                print_json(json!({
                    "trivial": w.is_none(),
                    "witness": w.as_ref().map(|w| w.to_string()),
                    "almost_trivial": almost_trivial,
                }));
            } else {
                match &w {
                    None => println!("trivial (q = {q})"),
                    Some(w) => println!("nontrivial: {w}"),
                }
                if let Some(a) = almost_trivial {
                    println!("almost trivial: {}", if a { "yes" } else { "no" });
                }
            }
        }
        Command::Admissible { pattern, q } => {
            let t = load_pattern(&pattern)?;
            let q = q.unwrap_or(admissibility_degree(t.len()));
            let r = t.admissibility(q)?;
            if json {
                print_json(json!({
                    "admissible": r.admissible(),
                    "essential": r.essential.as_ref().map(|w| w.to_string()),
                    "nontrivial_deletions": r.nontrivial_deletions.iter().map(|i| i + 1).collect::<Vec<_>>(),
                    "wedge_mu": t.wedge_mu()?.to_string(),
                }));
            } else {
                println!("{r}");
                println!("wedge mu = {}", t.wedge_mu()?);
                println!("admissible: {}", if r.admissible() { "yes" } else { "no" });
            }
        }
        Command::Bing { depth } => {
            let t = SolidTorusLink::iterated_bing(depth)?;
            if json {
                println!("{}", solid_torus_to_json(&t));
            } else {
                println!("components: {}", t.len());
                println!("wedge word: {}", t.wedge_word());
                for (i, w) in t.lhat().longitudes().iter().enumerate() {
                    println!("lhat longitude {}: {w}", i + 1);
                }
                for (i, w) in t.lplus().longitudes().iter().enumerate() {
                    println!("lplus longitude {}: {w}", i + 1);
                }
                let order: Vec<String> = t.preferred_order().iter().map(|i| (i + 1).to_string()).collect();
                println!("preferred order: {}", order.join(","));
            }
        }
        Command::Presentation { link, q } => {
            let l = load_link(&link)?;
            let q = q.unwrap_or(default_degree(l.len()));
            let p = nilpotent_presentation(&l, q)?;
            if json {
                print_json(json!({
                    "generators": p.generators,
                    "relators": p.relators.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
                    "class": p.class,
                }));
            } else {
                println!("{p}");
            }
        }
        Command::Compose { link, pattern } => {
            let l = compose(&load_link(&link)?, &load_pattern(&pattern)?)?;
            if json {
                println!("{}", link_to_json(&l));
            } else {
                for (i, w) in l.longitudes().iter().enumerate() {
                    println!("longitude {}: {w}", i + 1);
                }
            }
        }
        Command::TreeBasis { tree, kind, vertex } => {
            let t = load_tree(&tree)?;
            let v = vertex.unwrap_or(t.root());
            if v >= t.num_vertices() {
                return Err(Failure::Input(format!("no vertex {v}")));
            }
            let b = match kind {
                Kind::Rtilde => t.rtilde_basis(v),
                Kind::Q => t.q_basis(v),
            };
            let monos: Vec<String> = b.monomials.iter().map(|m| m.render(t.alphabet())).collect();
            if json {
                print_json(json!({
                    "vertex": v,
                    "kind": match b.kind { BasisKind::Rtilde => "rtilde", BasisKind::Q => "q" },
                    "monomials": monos,
                }));
            } else {
                println!("dim = {}", monos.len());
                for m in monos {
                    println!("{m}");
                }
            }
        }
        Command::TreePhi { tree, word } => {
            let t = load_tree(&tree)?;
            let w = match word {
                Some(text) => Word::parse(t.alphabet(), &text)?,
                None => bottom_meridian_word(&t)?,
            };
            let phi = phi_functional(&t);
            let value = phi_of_word_with(&t, &phi, &w)?;
            if json {
                let table: serde_json::Map<String, serde_json::Value> = phi
                    .entries()
                    .map(|(m, v)| (m.render(t.alphabet()), json!(v.to_string())))
                    .collect();
                print_json(json!({ "word": w.to_string(), "phi": table, "value": value.to_string() }));
            } else {
                println!("{phi}");
                println!("word: {w}");
                println!("Phi = {value}");
            }
        }
        Command::Obstruct { link, trees, q } => {
            let l = load_link(&link)?;
            let trees = trees.iter().map(|s| load_tree(s)).collect::<Result<Vec<_>, _>>()?;
            let q = q.unwrap_or(default_degree(l.len()));
            let c = fcell_core::obstruct_bounding(&l, &trees, q)?;
            if json {
                println!("{}", certificate_to_json(&c));
            } else {
                let (last, init) = c.order.split_last().expect("nonempty order");
                println!("mu_bar{} = {}", render_index(init, *last), c.mu_link);
                println!("Phi = {} on {}", c.phi_value, c.witness_monomial);
                println!("verdict: {}", c.verdict);
            }
        }
        Command::Selftest { seed, criterion } => {
            let ids: Vec<u32> = match criterion {
                Some(k) if (1..=10).contains(&k) => vec![k],
                Some(k) => return Err(Failure::Input(format!("no criterion {k}"))),
                None => (1..=10).collect(),
            };
            let mut failed = 0;
            for id in ids {
                let r = run_criterion(id, seed);
                if !r.passed {
                    failed += 1;
                }
                if json {
                    println!(
                        "{}",
                        json!({ "id": r.id, "title": r.title, "passed": r.passed, "detail": r.detail })
                    );
                } else {
                    println!("{r}");
                }
            }
            if failed > 0 {
                return Err(Failure::Refusal(format!("{failed} criteria failed")));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Refusal(m)) => {
            eprintln!("refused: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
