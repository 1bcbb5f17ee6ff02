//! The `regcat` command line.
//!
//! Exit codes: 0 the checked property holds or the search completed, 1 the
//! property fails (the report carries a witness), 2 usage or parse error,
//! 3 resource limit or internal error.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::braiding::{
    check_regular_braiding, check_symmetry, check_ybe, solve_ybe, Braiding, ObstructorChoice,
    YbeMode, YbeProblem,
};
use crate::diagrams::{
    check_regular_functor, enumerate_cycles, find_regular_3cycles, is_commutative,
    is_semicommutative, non_unique_obstructors, obstruction_number, Diagram, FunctorData,
};
use crate::dsl::{parse_workspace, Workspace};
use crate::error::Error;
use crate::finmap::{classify_map, compose, identity, FinMap};
use crate::higher::{check_chain, extend_periodic, find_chains, higher_projector, make_chain, ChainVerdict};
use crate::inverses::{
    enumerate_inverses, generalized_from_inner, inner_inverse_count, invertibility_class,
    is_inverse, section_inner_inverse, InverseKind,
};
use crate::report::{map_json, Report};
use crate::space::DEFAULT_MAX_SPACE;

#[derive(Debug, Parser)]
#[command(name = "regcat", version, about = "Regularity checks and searches on finite sets and maps")]
pub struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Largest candidate space an exhaustive search may visit without --limit.
    #[arg(long, global = true, value_name = "BOUND", default_value_t = DEFAULT_MAX_SPACE)]
    max_space: u128,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DiagramMode {
    Commutative,
    Semicommutative,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify a map and exhibit an inner and a generalized inverse.
    CheckMap {
        file: PathBuf,
        #[arg(long)]
        map: String,
    },
    /// Enumerate inverses of one kind.
    Inverses {
        file: PathBuf,
        #[arg(long)]
        map: String,
        #[arg(long)]
        kind: InverseKind,
        #[arg(long)]
        count_only: bool,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Check a star chain (given, or the periodic one), or search for chains.
    Chain {
        file: PathBuf,
        #[arg(long)]
        map: String,
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "stars")]
        search: bool,
        #[arg(long, requires = "search")]
        limit: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        stars: Vec<String>,
    },
    /// Build the projector of a star chain.
    Projector {
        file: PathBuf,
        #[arg(long)]
        map: String,
        #[arg(long, value_delimiter = ',', required = true)]
        stars: Vec<String>,
    },
    /// Check commutativity or semicommutativity of a diagram.
    Diagram {
        file: PathBuf,
        #[arg(long)]
        name: String,
        #[arg(long)]
        mode: DiagramMode,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
    /// Least cycle length at an object whose obstructor is not the identity.
    Obstruction {
        file: PathBuf,
        #[arg(long)]
        name: String,
        #[arg(long)]
        object: String,
        #[arg(long)]
        max_n: usize,
    },
    /// List the regular 3-cycles of a diagram.
    Cycles3 {
        file: PathBuf,
        #[arg(long)]
        name: String,
    },
    /// Check that a functor between diagrams preserves obstructors.
    Functor {
        file: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, value_delimiter = ',', required = true)]
        objects: Vec<String>,
        #[arg(long, value_delimiter = ',', required = true)]
        maps: Vec<String>,
        #[arg(long)]
        n: usize,
    },
    /// Check regularity of a braiding and, on X*X, the Yang-Baxter equation.
    BraidCheck {
        file: PathBuf,
        #[arg(long)]
        braiding: String,
        #[arg(long)]
        star: Option<String>,
        #[arg(long)]
        e: Option<String>,
    },
    /// Solve the Yang-Baxter equation on a carrier of the given size.
    Ybe {
        #[arg(long)]
        size: usize,
        #[arg(long)]
        mode: YbeMode,
        /// identity, all, or table:V,V,...
        #[arg(long, default_value = "identity")]
        e: String,
        #[arg(long)]
        bijective: bool,
        #[arg(long)]
        symmetric: bool,
        #[arg(long)]
        count_only: bool,
        #[arg(long)]
        limit: Option<usize>,
        /// Worker threads; 0 uses one per core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
}

enum Failure {
    Usage(String),
    Resource(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::SearchSpaceTooLarge { .. } | Error::CarrierTooLarge { .. } => Failure::Resource(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<Report, Failure>;

/// Runs one invocation and returns its exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let start = Instant::now();
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| dispatch(&cli)))
        .unwrap_or_else(|_| Err(Failure::Resource("internal error".into())));
    match outcome {
        Ok(report) => {
            let report = report.finish(start.elapsed().as_millis() as u64);
            let text = if cli.json {
                report.to_json() + "\n"
            } else {
                report.to_text()
            };
            let _ = out.write_all(text.as_bytes());
            report.exit_code()
        }
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        Err(Failure::Resource(m)) => {
            let _ = writeln!(err, "error: {m}");
            3
        }
    }
}

fn load(path: &Path) -> std::result::Result<Workspace, Failure> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_workspace(&src).map_err(|e| Failure::Usage(format!("{}:{e}", path.display())))
}

fn get<'a, T>(items: &'a BTreeMap<String, T>, kind: &str, name: &str) -> std::result::Result<&'a T, Failure> {
    items
        .get(name)
        .ok_or_else(|| Failure::Usage(format!("no {kind} named `{name}`")))
}

fn saturate(n: u128) -> u64 {
    u64::try_from(n).unwrap_or(u64::MAX)
}

fn dispatch(cli: &Cli) -> Outcome {
    let bound = cli.max_space;
    match &cli.command {
        Command::CheckMap { file, map } => check_map(get(&load(file)?.maps, "map", map)?),
        Command::Inverses {
            file,
            map,
            kind,
            count_only,
            limit,
        } => inverses(get(&load(file)?.maps, "map", map)?, *kind, *count_only, *limit, bound),
        Command::Chain {
            file,
            map,
            n,
            search,
            limit,
            stars,
        } => {
            let w = load(file)?;
            let f = get(&w.maps, "map", map)?;
            if *search {
                chain_search(f, *n, *limit, bound)
            } else {
                chain_check(&w, f, *n, stars)
            }
        }
        Command::Projector { file, map, stars } => {
            let w = load(file)?;
            projector(&w, get(&w.maps, "map", map)?, stars)
        }
        Command::Diagram {
            file,
            name,
            mode,
            max_len,
        } => diagram(get(&load(file)?.diagrams, "diagram", name)?, *mode, *max_len),
        Command::Obstruction {
            file,
            name,
            object,
            max_n,
        } => obstruction(get(&load(file)?.diagrams, "diagram", name)?, object, *max_n),
        Command::Cycles3 { file, name } => cycles3(get(&load(file)?.diagrams, "diagram", name)?),
        Command::Functor {
            file,
            from,
            to,
            objects,
            maps,
            n,
        } => {
            let w = load(file)?;
            functor(
                get(&w.diagrams, "diagram", from)?,
                get(&w.diagrams, "diagram", to)?,
                objects,
                maps,
                *n,
            )
        }
        Command::BraidCheck {
            file,
            braiding,
            star,
            e,
        } => {
            let w = load(file)?;
            braid_check(&w, get(&w.braidings, "braiding", braiding)?, star.as_deref(), e.as_deref())
        }
        Command::Ybe {
            size,
            mode,
            e,
            bijective,
            symmetric,
            count_only,
            limit,
            jobs,
        } => ybe(*size, *mode, e, *bijective, *symmetric, *count_only, *limit, *jobs),
    }
}

fn check_map(f: &FinMap) -> Outcome {
    let mut r = Report::new("check-map");
    r.set("map", map_json(f));
    r.set("class", classify_map(f));
    let inv = invertibility_class(f);
    r.set("retraction", inv.is_retraction());
    r.set("coretraction", inv.is_coretraction());
    let g = section_inner_inverse(f)?;
    let gen = generalized_from_inner(f, &g)?;
    r.set("inner_inverse", map_json(&g));
    r.set("generalized_inverse", map_json(&gen));
    let regular = is_inverse(f, &g, InverseKind::Inner)?;
    r.set("regular", regular);
    if !regular {
        r.witness(json!({"inner_inverse": g.name()}));
    }
    r.count("inner_inverses", saturate(inner_inverse_count(f)));
    Ok(r)
}

fn inverses(f: &FinMap, kind: InverseKind, count_only: bool, limit: Option<usize>, bound: u128) -> Outcome {
    let mut r = Report::new("inverses");
    r.set("map", f.name());
    r.set("kind", kind);
    let (count, exhaustive) = if count_only && kind == InverseKind::Inner && limit.is_none() {
        (inner_inverse_count(f), true)
    } else {
        let e = enumerate_inverses(f, kind, limit, bound)?;
        if !count_only {
            let list: Vec<Value> = e.inverses.iter().map(map_json).collect();
            r.set("inverses", list);
        }
        (e.count, e.exhaustive)
    };
    r.set("exhaustive", exhaustive);
    r.count("inverses", saturate(count));
    Ok(r)
}

fn verdict_report(r: &mut Report, f: &FinMap, v: &ChainVerdict) {
    r.set("order", v.order);
    r.set("odd_closure", v.odd_closure);
    r.set("even_closure", v.even_closure);
    r.set("ef_form", v.ef_form);
    r.set("obstructor", map_json(&v.obstructor));
    r.set("obstructor_idempotent", v.obstructor_idempotent);
    for fail in &v.failures {
        let on = if v.order % 2 == 1 { f.dom() } else { f.cod() };
        r.witness(json!({"equation": fail.equation, "element": on.label(fail.element)}));
    }
}

fn resolve_maps(w: &Workspace, names: &[String]) -> std::result::Result<Vec<FinMap>, Failure> {
    names.iter().map(|s| get(&w.maps, "map", s).cloned()).collect()
}

fn chain_check(w: &Workspace, f: &FinMap, n: usize, stars: &[String]) -> Outcome {
    let mut r = Report::new("chain");
    let chain = if stars.is_empty() {
        let g = generalized_from_inner(f, &section_inner_inverse(f)?)?;
        r.set("stars", "periodic");
        r.set("star", map_json(&g));
        extend_periodic(f, &g, n)?
    } else {
        if stars.len() != n {
            return Err(Failure::Usage(format!("--n {n} but {} stars given", stars.len())));
        }
        r.set("stars", stars);
        make_chain(f.clone(), resolve_maps(w, stars)?)?
    };
    verdict_report(&mut r, f, &check_chain(&chain));
    Ok(r)
}

fn chain_search(f: &FinMap, n: usize, limit: Option<usize>, bound: u128) -> Outcome {
    let mut r = Report::new("chain");
    let found = find_chains(f, n, limit, bound)?;
    let chains: Vec<Vec<Value>> = found
        .chains
        .iter()
        .map(|c| c.stars().iter().map(map_json).collect())
        .collect();
    r.set("order", n);
    r.set("truncated", found.truncated);
    r.set("chains", chains);
    r.count("chains", found.chains.len() as u64);
    Ok(r)
}

fn projector(w: &Workspace, f: &FinMap, stars: &[String]) -> Outcome {
    let mut r = Report::new("projector");
    let chain = make_chain(f.clone(), resolve_maps(w, stars)?)?;
    let p = higher_projector(&chain);
    r.set("projector", map_json(&p.projector));
    r.set("side", p.side);
    r.set("idempotent", p.idempotent);
    r.set("absorption", p.absorption);
    let pp = compose(&p.projector, &p.projector)?;
    if let Some(x) = (0..pp.table().len()).find(|&x| pp.table()[x] != p.projector.table()[x]) {
        r.witness(json!({"property": "idempotent", "element": p.projector.dom().label(x)}));
    }
    if !p.absorption {
        r.witness(json!({"property": "absorption"}));
    }
    Ok(r)
}

fn diagram(d: &Diagram, mode: DiagramMode, max_len: usize) -> Outcome {
    let (name, v) = match mode {
        DiagramMode::Commutative => ("commutative", is_commutative(d, max_len)),
        DiagramMode::Semicommutative => ("semicommutative", is_semicommutative(d, max_len)),
    };
    let mut r = Report::new("diagram");
    r.set("diagram", d.name());
    r.set("mode", name);
    r.set("max_len", max_len);
    r.set("holds", v.holds);
    for violation in &v.violations {
        r.witness(serde_json::to_value(violation).expect("violations serialize"));
    }
    r.count("cycles", enumerate_cycles(d, max_len).len() as u64);
    Ok(r)
}

fn obstruction(d: &Diagram, object: &str, max_n: usize) -> Outcome {
    let mut r = Report::new("obstruction");
    let o = obstruction_number(d, object, max_n)?;
    r.set("diagram", d.name());
    r.set("object", object);
    r.set("max_n", max_n);
    r.set("n_obstr", o.n_obstr);
    r.set("cycle", &o.witness);
    if let Some(c) = &o.witness {
        r.set("obstructor", map_json(&crate::diagrams::path_compose(d, &c.edges)?));
    }
    Ok(r)
}

fn cycles3(d: &Diagram) -> Outcome {
    let mut r = Report::new("cycles3");
    let cycles = find_regular_3cycles(d);
    let list: Vec<Value> = cycles
        .iter()
        .map(|c| {
            let (f, g, h) = c.maps();
            json!({
                "objects": [c.base().id(), c.first_dual().id(), c.second_dual().id()],
                "maps": [f.name(), g.name(), h.name()],
                "obstructor": map_json(c.obstructor()),
                "obstructor_identity": c.obstructor().is_identity(),
            })
        })
        .collect();
    r.set("diagram", d.name());
    r.set("cycles", list);
    r.set("non_unique_obstructors", non_unique_obstructors(&cycles));
    r.count("regular_3cycles", cycles.len() as u64);
    Ok(r)
}

fn pairs(items: &[String], what: &str) -> std::result::Result<BTreeMap<String, String>, Failure> {
    items
        .iter()
        .map(|s| match s.split_once('=') {
            Some((a, b)) if !a.is_empty() && !b.is_empty() => Ok((a.to_owned(), b.to_owned())),
            _ => Err(Failure::Usage(format!("{what} entry `{s}` is not of the form A=B"))),
        })
        .collect()
}

fn functor(src: &Diagram, tgt: &Diagram, objects: &[String], maps: &[String], n: usize) -> Outcome {
    let fd = FunctorData::new(src.clone(), tgt.clone(), pairs(objects, "--objects")?, pairs(maps, "--maps")?)?;
    let v = check_regular_functor(&fd, n)?;
    let mut r = Report::new("functor");
    r.set("from", src.name());
    r.set("to", tgt.name());
    r.set("n", n);
    r.set("composition_preserved", v.composition_preserved);
    r.set("e_preserved", v.e_preserved);
    for violation in &v.violations {
        r.witness(serde_json::to_value(violation).expect("violations serialize"));
    }
    r.count("checked", v.checked as u64);
    r.count("undetermined", v.undetermined as u64);
    Ok(r)
}

fn braid_check(w: &Workspace, b: &Braiding, star: Option<&str>, e: Option<&str>) -> Outcome {
    let mut r = Report::new("braid-check");
    r.set("braiding", map_json(b.map()));
    let canonical = Braiding::from_map(
        b.right().clone(),
        b.left().clone(),
        section_inner_inverse(b.map())?.with_name(format!("{}^*", b.name())),
    )?;
    r.set("canonical_star", map_json(canonical.map()));
    if let Some(s) = star {
        let s = get(&w.braidings, "braiding", s)?;
        r.set("star", s.name());
        r.set("symmetric", check_symmetry(b, s)?);
        let regular = check_regular_braiding(b, s)?;
        r.set("regular", regular);
        if !regular {
            r.witness(json!({"check": "regular", "star": s.name()}));
        }
    }
    if b.left() == b.right() {
        let e = match e {
            Some(name) => get(&w.maps, "map", name)?.clone(),
            None => identity(b.left()),
        };
        let mode = if e.is_identity() { YbeMode::Classical } else { YbeMode::Regular };
        let check = check_ybe(b, &e, mode)?;
        r.set("ybe", json!({"mode": mode, "e": map_json(&e), "holds": check.holds}));
        if let Some(t) = check.witness {
            let labels: Vec<&str> = t.iter().map(|&i| b.left().label(i)).collect();
            r.witness(json!({"check": "ybe", "triple": labels}));
        }
    } else if e.is_some() {
        return Err(Failure::Usage("--e needs a braiding of the form X * X".into()));
    }
    Ok(r)
}

#[allow(clippy::too_many_arguments)]
fn ybe(
    size: usize,
    mode: YbeMode,
    e: &str,
    bijective: bool,
    symmetric: bool,
    count_only: bool,
    limit: Option<usize>,
    jobs: usize,
) -> Outcome {
    let obstructor = match e {
        "identity" => ObstructorChoice::Identity,
        "all" => ObstructorChoice::All,
        other => {
            let table = other
                .strip_prefix("table:")
                .ok_or_else(|| Failure::Usage(format!("--e `{other}`: expected identity, all or table:...")))?;
            let t = table
                .split(',')
                .map(|v| v.trim().parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Failure::Usage(format!("--e `{other}`: bad table")))?;
            ObstructorChoice::Table(t)
        }
    };
    let mut p = YbeProblem::new(size, mode);
    p.obstructor = obstructor;
    p.require_bijective = bijective;
    p.require_symmetric = symmetric;
    p.limit = if count_only { Some(0) } else { limit };
    p.jobs = jobs;
    let s = solve_ybe(&p)?;
    let mut r = Report::new("ybe");
    r.set("size", size);
    r.set("mode", mode);
    r.set("e", e);
    r.set("bijective", bijective);
    r.set("symmetric", symmetric);
    if !count_only {
        r.set("solutions", &s.solutions);
        r.set("truncated", s.truncated);
    }
    r.count("solutions", s.count);
    Ok(r)
}
