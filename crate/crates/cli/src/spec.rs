//! Template specifications and graph files.
//!
//! A spec is one of `clique<k>`, `cycle<k>`, `path<k>` (also written
//! `clique:<k>` etc.), `gnp:<k>,<alpha>,seed=<s>`, or a path to an edge-list
//! file.

use std::path::Path;

use hperc::{parse_edge_list, Graph, Seed, Template};

use crate::error::{CliError, Result};

pub fn read_graph(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    parse_edge_list(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn parse_size(family: &str, rest: &str) -> Result<usize> {
    let digits = rest.strip_prefix(':').unwrap_or(rest);
    digits
        .parse()
        .map_err(|_| CliError::Parse(format!("invalid {family} size {digits:?}")))
}

/// `k,alpha,seed=s`
pub fn parse_gnp(args: &str) -> Result<(usize, f64, u64)> {
    let bad = || CliError::Parse(format!("invalid gnp spec {args:?}, expected k,alpha,seed=S"));
    let parts: Vec<&str> = args.split(',').collect();
    let [k, alpha, seed] = parts.as_slice() else {
        return Err(bad());
    };
    let k = k.trim().parse().map_err(|_| bad())?;
    let alpha: f64 = alpha.trim().parse().map_err(|_| bad())?;
    let seed = seed.trim().strip_prefix("seed=").ok_or_else(bad)?.parse().map_err(|_| bad())?;
    if !(0.0..=1.0).contains(&alpha) {
        return Err(CliError::Domain(format!("gnp edge probability {alpha} is outside [0, 1]")));
    }
    Ok((k, alpha, seed))
}

pub fn gnp_template(k: usize, alpha: f64, seed: u64) -> Result<Template> {
    let g = Graph::sample_gnp(k, alpha, Seed::new(seed)).map_err(|e| CliError::Domain(e.to_string()))?;
    Ok(Template::with_id(format!("gnp:{k},{alpha},seed={seed}"), g)?)
}

pub fn parse_template(spec: &str) -> Result<Template> {
    for (family, build) in [
        ("clique", Template::clique as fn(usize) -> _),
        ("cycle", Template::cycle),
        ("path", Template::path),
    ] {
        if let Some(rest) = spec.strip_prefix(family) {
            if rest.starts_with(':') || rest.starts_with(|c: char| c.is_ascii_digit()) {
                let k = parse_size(family, rest)?;
                return Ok(build(k)?);
            }
        }
    }
    if let Some(args) = spec.strip_prefix("gnp:") {
        let (k, alpha, seed) = parse_gnp(args)?;
        return gnp_template(k, alpha, seed);
    }
    let g = read_graph(Path::new(spec))?;
    Ok(Template::with_id(spec, g)?)
}

/// Templates for the dynamics: at least 3 vertices and 2 edges.
pub fn parse_dynamics_template(spec: &str) -> Result<Template> {
    let h = parse_template(spec)?;
    if h.vertex_count() <= 2 || h.edge_count() <= 1 {
        return Err(CliError::Domain(format!(
            "template {} has {} vertices and {} edges; percolation needs at least 3 vertices and 2 edges",
            h.id(),
            h.vertex_count(),
            h.edge_count()
        )));
    }
    Ok(h)
}
