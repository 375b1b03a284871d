use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use dualgroup::pipeline::{self, Coefficients, RunConfig};
use dualgroup::rationality;
use dualgroup::soergel::{self, GradedRing, SteinbergBasis, SteinbergType};
use dualgroup::sspoints;
use dualgroup::weyl::WeylGroup;
use dualgroup::{curtis, Error, Result};

const CACHE_ENV: &str = "DUALGROUP_CACHE_DIR";

#[derive(Parser)]
#[command(name = "dualgroup", version, about = "Root data, semisimple series, endoscopy and Bott-Samelson bimodules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// JSON run configuration; flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    /// Catalogue name (GL2, SL3, Sp4, sc:B3, ad:G2, ...) or datum file
    #[arg(long)]
    datum: Option<String>,
    #[arg(long)]
    q: Option<u64>,
    /// id, swap, or a JSON integer matrix
    #[arg(long)]
    tau: Option<String>,
    /// qlbar or zlbar
    #[arg(long)]
    coefficients: Option<String>,
    #[arg(long)]
    ell: Option<u64>,
    #[arg(long)]
    order_bound: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated coordinates such as 1/3,2/3
    #[arg(long, value_delimiter = ',')]
    point: Option<Vec<String>>,
    /// Comma-separated simple reflection indices
    #[arg(long, value_delimiter = ',')]
    word: Option<Vec<usize>>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Accepted for compatibility; output is always JSON
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check the root datum axioms
    Validate(Common),
    /// Print the dual root datum
    Dual(Common),
    /// Weyl group order, degrees and length distribution
    Weyl {
        #[command(flatten)]
        common: Common,
        /// List every element by reduced word
        #[arg(long)]
        elements: bool,
    },
    /// Endoscopic datum at a point
    Endoscopy(Common),
    /// Block groupoid of a point
    Blocks(Common),
    /// Geometric and rational classes
    Series(Common),
    /// Invariant factors of the fixed tori for all w
    Torus(Common),
    /// Spectral Curtis table and orbit bijection
    Curtis(Common),
    /// Gelfand-Graev restriction ranks and shifts
    Gg(Common),
    /// Bott-Samelson bimodules and Steinberg determinants
    Soergel {
        #[command(subcommand)]
        command: SoergelCommand,
    },
    /// Full series report
    Report(Common),
    /// Exhaustive invariant checks up to the order bound
    Verify(Common),
}

#[derive(Subcommand)]
enum SoergelCommand {
    Bs(Common),
    Steinberg {
        #[command(flatten)]
        common: Common,
        /// A1, A1A1, A2 or B2
        #[arg(long = "type")]
        kind: String,
        /// descent or schubert
        #[arg(long, default_value = "descent")]
        basis: String,
    },
}

fn config(c: &Common) -> Result<RunConfig> {
    let mut cfg = match &c.config {
        Some(path) => RunConfig::from_json(&std::fs::read_to_string(path)?)?,
        None => RunConfig::new(c.datum.as_deref().unwrap_or("GL2")),
    };
    if let Some(d) = &c.datum {
        cfg.datum = d.clone();
    }
    if let Some(q) = c.q {
        cfg.q = q;
    }
    if let Some(t) = &c.tau {
        cfg.tau = t.clone();
    }
    if let Some(k) = &c.coefficients {
        cfg.coefficients = match k.to_ascii_lowercase().as_str() {
            "qlbar" => Coefficients::Qlbar,
            "zlbar" => Coefficients::Zlbar,
            other => return Err(Error::Config(format!("unknown coefficients {other}"))),
        };
    }
    if c.ell.is_some() {
        cfg.ell = c.ell;
    }
    if let Some(b) = c.order_bound {
        cfg.order_bound = b;
    }
    if let Some(s) = c.seed {
        cfg.seed = s;
    }
    if c.point.is_some() {
        cfg.point = c.point.clone();
    }
    if c.word.is_some() {
        cfg.word = c.word.clone();
    }
    if let Some(o) = &c.out {
        cfg.out = Some(o.display().to_string());
    }
    Ok(cfg)
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("output serializes")
}

fn datum_and_weyl(cfg: &RunConfig) -> Result<(dualgroup::rootdata::RootDatum, WeylGroup)> {
    let rd = pipeline::load_datum(&cfg.datum)?;
    let w = WeylGroup::enumerate(&rd)?;
    Ok((rd, w))
}

fn series(cfg: &RunConfig) -> Result<Value> {
    let mode = cfg.mode()?;
    let (rd, w, fr) = pipeline::setup(cfg)?;
    let mut classes = Vec::new();
    let mut total = 0;
    for c in rationality::geometric_classes(&w, &fr, mode)? {
        let r = rationality::rational_classes(&rd, &w, &fr, &c.representative)?;
        total += r.rational_count;
        classes.push(json!({
            "representative": c.representative,
            "size": c.members.len(),
            "merged": c.merged,
            "rational_count": r.rational_count,
            "h1": r.h1_structure.map(|g| g.to_string()),
            "inner_forms": rationality::inner_forms(&rd, &w, &fr, &c.representative)?,
        }));
    }
    Ok(json!({ "mode": mode, "geometric": classes.len(), "rational": total, "classes": classes }))
}

fn run(cmd: Command) -> Result<(Value, Option<PathBuf>, bool)> {
    let common_out = |c: &Common| c.out.clone();
    Ok(match cmd {
        Command::Validate(c) => {
            let cfg = config(&c)?;
            let (rd, w) = datum_and_weyl(&cfg)?;
            rd.validate()?;
            let mut v = to_value(&pipeline::datum_summary(&rd, &w)?);
            v["valid"] = json!(true);
            (v, common_out(&c), true)
        }
        Command::Dual(c) => {
            let cfg = config(&c)?;
            let rd = pipeline::load_datum(&cfg.datum)?;
            let d = rd.dual();
            let v = json!({ "datum": d.to_file(), "types": d.classify()?.label(), "involution": d.dual().same_as(&rd) });
            (v, common_out(&c), true)
        }
        Command::Weyl { common, elements } => {
            let cfg = config(&common)?;
            let (rd, w) = datum_and_weyl(&cfg)?;
            let mut lengths = vec![0usize; rd.num_positive() + 1];
            for x in 0..w.order() {
                lengths[w.length(x)] += 1;
            }
            let degrees: Vec<Vec<u64>> = rd.classify()?.types().iter().map(|t| t.degrees()).collect();
            let mut v = json!({
                "order": w.order(),
                "generators": w.num_generators(),
                "longest_word": w.word(w.longest_element()),
                "length_distribution": lengths,
                "degrees": degrees,
            });
            if elements {
                v["elements"] = json!((0..w.order()).map(|x| w.word(x).to_vec()).collect::<Vec<_>>());
            }
            (v, common_out(&common), true)
        }
        Command::Endoscopy(c) => {
            let cfg = config(&c)?;
            let (rd, w) = datum_and_weyl(&cfg)?;
            let s = cfg.parsed_point(&rd)?;
            (to_value(&pipeline::endoscopy_output(&rd, &w, &s)?), common_out(&c), true)
        }
        Command::Blocks(c) => {
            let cfg = config(&c)?;
            let (rd, w) = datum_and_weyl(&cfg)?;
            let s = cfg.parsed_point(&rd)?;
            (to_value(&pipeline::blocks_output(&rd, &w, &s)?), common_out(&c), true)
        }
        Command::Series(c) => {
            let cfg = config(&c)?;
            (series(&cfg)?, common_out(&c), true)
        }
        Command::Torus(c) => {
            let cfg = config(&c)?;
            let (_, w, fr) = pipeline::setup(&cfg)?;
            (to_value(&curtis::torus_table(&w, &fr)?), common_out(&c), true)
        }
        Command::Curtis(c) => {
            let cfg = config(&c)?;
            let (rd, w, fr) = pipeline::setup(&cfg)?;
            let table = curtis::curtis_spectral(&w, &fr)?;
            let bij = curtis::x_orbit_bijection(&rd, &w, &fr, sspoints::DEFAULT_SEARCH_CAP)?;
            (json!({ "table": table, "orbit_bijection": bij }), common_out(&c), true)
        }
        Command::Gg(c) => {
            let cfg = config(&c)?;
            let (_, w, fr) = pipeline::setup(&cfg)?;
            let rows = (0..w.order())
                .map(|x| {
                    let g = curtis::gg_restriction_shadow(&w, &fr, x)?;
                    Ok(json!({ "word": w.word(x), "rank": g.rank, "shift": g.shift }))
                })
                .collect::<Result<Vec<_>>>()?;
            (Value::Array(rows), common_out(&c), true)
        }
        Command::Soergel { command: SoergelCommand::Bs(c) } => {
            let cfg = config(&c)?;
            let (rd, w) = datum_and_weyl(&cfg)?;
            let s = cfg.parsed_point(&rd)?;
            let word = cfg.word.clone().unwrap_or_default();
            if let Some(&bad) = word.iter().find(|&&i| i >= rd.simple_count()) {
                return Err(dualgroup::weyl::WeylError::InvalidWord(format!("no simple reflection {bad}")).into());
            }
            let ring = GradedRing::new(&rd);
            let m = soergel::bs_word(&rd, &ring, &w, &word, &s)?;
            let mut v = to_value(&m.summary(&w));
            v["word"] = json!(word);
            (v, common_out(&c), true)
        }
        Command::Soergel { command: SoergelCommand::Steinberg { common, kind, basis } } => {
            let ty: SteinbergType = kind.parse()?;
            let basis = match basis.as_str() {
                "descent" => SteinbergBasis::DescentProducts,
                "schubert" => SteinbergBasis::Schubert,
                other => return Err(Error::Config(format!("unknown basis {other}"))),
            };
            let r = soergel::steinberg_det(&ty.datum(), basis)?;
            let mut v = to_value(&r);
            v["type"] = json!(ty.to_string());
            (v, common_out(&common), true)
        }
        Command::Report(c) => {
            let cfg = config(&c)?;
            let cache = std::env::var_os(CACHE_ENV).map(PathBuf::from);
            let text = pipeline::cached_report_json(&cfg, cache.as_deref())?;
            let out = cfg.out.as_ref().map(PathBuf::from);
            (serde_json::from_str(&text)?, out, true)
        }
        Command::Verify(c) => {
            let cfg = config(&c)?;
            let r = pipeline::verify(&cfg);
            let ok = r.passed;
            (to_value(&r), common_out(&c), ok)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((value, out, ok)) => {
            let text = serde_json::to_string_pretty(&value).expect("output serializes") + "\n";
            match out {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, &text) {
                        eprintln!("{}", json!({ "error": { "code": "cli.io", "message": e.to_string() } }));
                        return ExitCode::FAILURE;
                    }
                }
                None => print!("{text}"),
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("{}", json!({ "error": { "code": e.code(), "message": e.to_string() } }));
            ExitCode::FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use dualgroup::sspoints::SemisimplePoint;

    #[test]
    fn flags_override_config() {
        let c = Common { datum: Some("SL3".into()), q: Some(4), point: Some(vec!["1/3".into(), "0".into()]), ..Default::default() };
        let cfg = config(&c).unwrap();
        assert_eq!((cfg.datum.as_str(), cfg.q), ("SL3", 4));
        assert_eq!(cfg.parsed_point(&pipeline::load_datum("SL3").unwrap()).unwrap(), SemisimplePoint::parse(&["1/3", "0"]).unwrap());
    }
}
