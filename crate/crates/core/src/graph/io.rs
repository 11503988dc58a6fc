use std::fs;
use std::io::Write;
use std::path::Path;

use super::Graph;
use crate::error::{Error, Result};

/// Parses the edge-list text format.
///
/// ```text
/// # comment
/// 3
/// 0 1
/// 1 2 -1
/// ```
///
/// The first non-comment line is the node count; each following line is
/// `u v` or `u v w`. Weights default to +1.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut n: Option<usize> = None;
    let mut edges: Vec<(usize, usize, i8)> = Vec::new();
    let mut lines_of: Vec<usize> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse { line: line_no, message };
        let fields: Vec<&str> = body.split_whitespace().collect();
        let Some(count) = n else {
            if fields.len() != 1 {
                return Err(err(format!("expected node count, found {body:?}")));
            }
            let count: usize = fields[0]
                .parse()
                .map_err(|_| err(format!("bad node count {:?}", fields[0])))?;
            if count == 0 {
                return Err(err("node count must be positive".into()));
            }
            n = Some(count);
            continue;
        };
        if !(2..=3).contains(&fields.len()) {
            return Err(err(format!("expected \"u v [w]\", found {body:?}")));
        }
        let node = |s: &str| -> Result<usize> {
            let x: usize = s.parse().map_err(|_| err(format!("bad node label {s:?}")))?;
            if x >= count {
                return Err(err(format!("node {x} outside 0..{count}")));
            }
            Ok(x)
        };
        let (u, v) = (node(fields[0])?, node(fields[1])?);
        if u == v {
            return Err(err(format!("self-loop on node {u}")));
        }
        let w: i8 = match fields.get(2) {
            None => 1,
            Some(s) => match s.parse::<i8>() {
                Ok(w @ (1 | -1)) => w,
                _ => return Err(err(format!("weight {s:?} is not +1 or -1"))),
            },
        };
        if let Some(pos) = edges
            .iter()
            .position(|&(a, b, _)| (a.min(b), a.max(b)) == (u.min(v), u.max(v)))
        {
            return Err(err(format!(
                "duplicate edge ({u}, {v}), first given on line {}",
                lines_of[pos]
            )));
        }
        edges.push((u, v, w));
        lines_of.push(line_no);
    }
    let n = n.ok_or(Error::Parse { line: 1, message: "missing node count".into() })?;
    Graph::new(n, edges)
}

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
    parse_edge_list(&fs::read_to_string(path)?)
}

/// Writes `n` followed by one `u v w` line per edge.
pub fn write_edge_list(graph: &Graph, mut out: impl Write) -> Result<()> {
    writeln!(out, "{}", graph.n())?;
    for e in graph.edges() {
        writeln!(out, "{} {} {}", e.u, e.v, e.w)?;
    }
    Ok(())
}

pub fn save_edge_list(graph: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let mut buf = Vec::new();
    write_edge_list(graph, &mut buf)?;
    fs::write(path, buf)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{assign_random_signs, random_regular};

    #[test]
    fn parses_unit_path() {
        let g = parse_edge_list("3\n0 1\n1 2").unwrap();
        assert_eq!(g, Graph::unweighted(3, &[(0, 1), (1, 2)]).unwrap());
    }

    #[test]
    fn parses_negative_weight() {
        let g = parse_edge_list("2\n0 1 -1").unwrap();
        assert_eq!(g.weight(0, 1), Some(-1));
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = parse_edge_list("# header\n\n3 # nodes\n0 1 # first\n\n2 1\n").unwrap();
        assert_eq!(g.n_edges(), 2);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let line = |text: &str| match parse_edge_list(text) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("expected parse error, got {other:?}"),
        };
        assert_eq!(line("3\n0 1\n0 x"), 3);
        assert_eq!(line("3\n0 1\n\n0 3"), 4);
        assert_eq!(line("3\n0 1\n1 0"), 3);
        assert_eq!(line("# c\n3\n0 1 2"), 3);
        assert_eq!(line("three"), 1);
        assert_eq!(line("3\n0 1 1 1"), 2);
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        for seed in 0..5 {
            let g = assign_random_signs(&random_regular(10, 3, seed).unwrap(), seed);
            let path = dir.path().join(format!("g{seed}.txt"));
            save_edge_list(&g, &path).unwrap();
            let back = load_edge_list(&path).unwrap();
            assert_eq!(back, g);
            save_edge_list(&back, &path).unwrap();
            assert_eq!(load_edge_list(&path).unwrap(), back);
        }
    }
}
