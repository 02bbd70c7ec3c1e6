use std::fs;
use std::path::Path;

use homlab::graph::{generate, io::parse_graph, Family};
use homlab::Graph;

use crate::CliError;

/// A graph file, or a built-in family: `Z5`, `K4`, `P3`, `Q3`, `K2,3`,
/// `counterexample10`, or the long forms `cycle:5`, `complete:4`, `path:3`,
/// `hypercube:3`, `bipartite:2,3`.
pub fn load_graph(spec: &str) -> Result<Graph, CliError> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{spec}: {e}")))?;
        let g = parse_graph(&text).map_err(|e| CliError::Input(format!("{spec}: {e}")))?;
        return Ok(match g.name() {
            Some(_) => g,
            None => {
                let stem = path.file_stem().map_or(spec.into(), |s| s.to_string_lossy().into_owned());
                g.with_name(stem)
            }
        });
    }
    let family = parse_family(spec)
        .ok_or_else(|| CliError::Input(format!("'{spec}' is neither a readable file nor a known graph family")))?;
    generate(family).map_err(|e| CliError::Input(e.to_string()))
}

pub fn parse_family(spec: &str) -> Option<Family> {
    let s = spec.trim();
    if s.eq_ignore_ascii_case("counterexample10") {
        return Some(Family::Counterexample10);
    }
    let pair = |t: &str| -> Option<(usize, usize)> {
        let (a, b) = t.split_once(',')?;
        Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
    };
    if let Some((kind, arg)) = s.split_once(':') {
        let n = arg.trim().parse::<usize>();
        return match kind.trim().to_ascii_lowercase().as_str() {
            "cycle" => n.ok().map(Family::Cycle),
            "complete" => n.ok().map(Family::Complete),
            "path" => n.ok().map(Family::Path),
            "hypercube" => n.ok().map(Family::Hypercube),
            "bipartite" => pair(arg).map(|(a, b)| Family::CompleteBipartite(a, b)),
            _ => None,
        };
    }
    let (head, rest) = s.split_at(s.char_indices().nth(1)?.0);
    match head {
        "Z" => rest.parse().ok().map(Family::Cycle),
        "P" => rest.parse().ok().map(Family::Path),
        "Q" => rest.parse().ok().map(Family::Hypercube),
        "K" if rest.contains(',') => pair(rest).map(|(a, b)| Family::CompleteBipartite(a, b)),
        "K" => rest.parse().ok().map(Family::Complete),
        _ => None,
    }
}
