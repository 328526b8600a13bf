//! Graph files.
//!
//! Canonical format (JSON, version 1):
//!
//! ```json
//! {"version": 1,
//!  "nodes": [{"id": 0, "hosting": 12.0}, {"id": 1, "hosting": 45.0}],
//!  "edges": [{"a": 0, "b": 1, "rate": 17.5}]}
//! ```
//!
//! Edge-list format: a header line `n m`, then `n` lines `id hosting`, then
//! `m` lines `a b rate`. Blank lines and lines starting with `#` are skipped.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CommEdge, SbaGraph, ServiceNode};

const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    Json,
    EdgeList,
}

impl GraphFormat {
    /// `.json` is JSON; `.txt`, `.edges` and `.el` are edge lists.
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "json" => Some(GraphFormat::Json),
            "txt" | "edges" | "el" => Some(GraphFormat::EdgeList),
            _ => None,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    version: u32,
    nodes: Vec<ServiceNode>,
    edges: Vec<CommEdge>,
}

/// Reads a graph, choosing the format from the extension or, failing that,
/// from the first non-blank character (`{` means JSON).
pub fn read_graph(path: impl AsRef<Path>) -> Result<SbaGraph> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let format = GraphFormat::from_path(path).unwrap_or_else(|| {
        if text.trim_start().starts_with('{') {
            GraphFormat::Json
        } else {
            GraphFormat::EdgeList
        }
    });
    parse_as(&text, format, &path.display().to_string())
}

pub fn read_graph_as(path: impl AsRef<Path>, format: GraphFormat) -> Result<SbaGraph> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_as(&text, format, &path.display().to_string())
}

fn parse_as(text: &str, format: GraphFormat, origin: &str) -> Result<SbaGraph> {
    match format {
        GraphFormat::Json => parse_json(text, origin),
        GraphFormat::EdgeList => parse_edge_list(text, origin),
    }
}

/// Writes JSON unless the extension names the edge-list format.
pub fn write_graph(graph: &SbaGraph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    write_graph_as(
        graph,
        path,
        GraphFormat::from_path(path).unwrap_or(GraphFormat::Json),
    )
}

pub fn write_graph_as(graph: &SbaGraph, path: impl AsRef<Path>, format: GraphFormat) -> Result<()> {
    let path = path.as_ref();
    let text = match format {
        GraphFormat::Json => format_json(graph),
        GraphFormat::EdgeList => format_edge_list(graph),
    };
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn format_json(graph: &SbaGraph) -> String {
    let doc = GraphDoc {
        version: FORMAT_VERSION,
        nodes: graph.nodes().to_vec(),
        edges: graph.edges().to_vec(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("graph documents always serialize");
    text.push('\n');
    text
}

pub fn parse_json(text: &str, origin: &str) -> Result<SbaGraph> {
    let doc: GraphDoc = serde_json::from_str(text).map_err(|e| Error::Parse {
        path: origin.to_string(),
        line: e.line(),
        message: e.to_string(),
    })?;
    if doc.version != FORMAT_VERSION {
        return Err(Error::Parse {
            path: origin.to_string(),
            line: 0,
            message: format!(
                "field `version`: unsupported version {}, expected {FORMAT_VERSION}",
                doc.version
            ),
        });
    }
    SbaGraph::new(doc.nodes, doc.edges)
}

pub fn format_edge_list(graph: &SbaGraph) -> String {
    let mut out = format!("{} {}\n", graph.node_count(), graph.edge_count());
    for node in graph.nodes() {
        out.push_str(&format!("{} {}\n", node.id, node.hosting));
    }
    for edge in graph.edges() {
        out.push_str(&format!("{} {} {}\n", edge.a, edge.b, edge.rate));
    }
    out
}

pub fn parse_edge_list(text: &str, origin: &str) -> Result<SbaGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.trim()))
        .filter(|(_, line)| !line.is_empty() && !line.starts_with('#'));
    let err = |line: usize, message: String| Error::Parse {
        path: origin.to_string(),
        line,
        message,
    };

    let (header_line, header) = lines
        .next()
        .ok_or_else(|| err(0, "empty file: expected header `n m`".to_string()))?;
    let header_fields = fields::<2>(header, header_line, &["n", "m"], origin)?;
    let n: usize = parse_field(header_fields[0], header_line, "n", origin)?;
    let m: usize = parse_field(header_fields[1], header_line, "m", origin)?;

    let mut nodes = Vec::with_capacity(n);
    for i in 0..n {
        let (line_no, line) = lines.next().ok_or_else(|| {
            err(
                0,
                format!(
                    "unexpected end of file: expected node line {} of {n}",
                    i + 1
                ),
            )
        })?;
        let f = fields::<2>(line, line_no, &["id", "hosting"], origin)?;
        nodes.push(ServiceNode {
            id: parse_field(f[0], line_no, "id", origin)?,
            hosting: parse_field(f[1], line_no, "hosting", origin)?,
        });
    }

    let mut edges = Vec::with_capacity(m);
    for i in 0..m {
        let (line_no, line) = lines.next().ok_or_else(|| {
            err(
                0,
                format!(
                    "unexpected end of file: expected edge line {} of {m}",
                    i + 1
                ),
            )
        })?;
        let f = fields::<3>(line, line_no, &["a", "b", "rate"], origin)?;
        edges.push(CommEdge {
            a: parse_field(f[0], line_no, "a", origin)?,
            b: parse_field(f[1], line_no, "b", origin)?,
            rate: parse_field(f[2], line_no, "rate", origin)?,
        });
    }

    if let Some((line_no, _)) = lines.next() {
        return Err(err(line_no, format!("trailing content after {m} edges")));
    }
    SbaGraph::new(nodes, edges)
}

fn fields<'t, const N: usize>(
    line: &'t str,
    line_no: usize,
    names: &[&str; N],
    origin: &str,
) -> Result<[&'t str; N]> {
    let parts: Vec<&str> = line.split_whitespace().collect();
    parts.try_into().map_err(|parts: Vec<&str>| Error::Parse {
        path: origin.to_string(),
        line: line_no,
        message: format!(
            "expected {N} fields ({}), found {}",
            names.join(" "),
            parts.len()
        ),
    })
}

fn parse_field<T: std::str::FromStr>(raw: &str, line: usize, field: &str, origin: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    raw.parse().map_err(|e: T::Err| Error::Parse {
        path: origin.to_string(),
        line,
        message: format!("field `{field}`: cannot parse {raw:?}: {e}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_edge_list_example() {
        let g = parse_edge_list("3 1\n0 10\n1 20\n2 30\n0 2 5.5", "inline").unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(
            g.edges(),
            &[CommEdge {
                a: 0,
                b: 2,
                rate: 5.5
            }]
        );
        assert_eq!(g.hosting(1), 20.0);
    }

    #[test]
    fn self_loop_is_a_validation_error() {
        let e = parse_edge_list("2 1\n0 1\n1 1\n1 1 4.0\n", "inline").unwrap_err();
        assert!(matches!(e, Error::Validation(_)), "{e}");
    }

    #[test]
    fn parse_errors_name_line_and_field() {
        let e = parse_edge_list("2 1\n0 1\n1 x\n0 1 4.0\n", "g.txt").unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("g.txt:3") && msg.contains("hosting"), "{msg}");

        let e = parse_edge_list("2 1\n0 1\n1 1\n0 1\n", "g.txt").unwrap_err();
        assert!(e.to_string().contains("g.txt:4"), "{e}");

        let e = parse_json(
            "{\"version\": 1, \"nodes\": [{\"id\": 0}], \"edges\": []}",
            "g.json",
        )
        .unwrap_err();
        assert!(e.to_string().contains("hosting"), "{e}");

        let e = parse_json("{\"version\": 2, \"nodes\": [], \"edges\": []}", "g.json").unwrap_err();
        assert!(e.to_string().contains("version"), "{e}");
    }

    #[test]
    fn json_duplicate_edge_rejected() {
        let text = r#"{"version":1,"nodes":[{"id":0,"hosting":1},{"id":1,"hosting":2}],
            "edges":[{"a":0,"b":1,"rate":1},{"a":1,"b":0,"rate":2}]}"#;
        assert!(matches!(
            parse_json(text, "g.json"),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn comments_and_blank_lines_skipped() {
        let g = parse_edge_list("# header\n2 1\n\n0 1.5\n1 2\n# edges\n0 1 3\n", "inline").unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn format_detection() {
        assert_eq!(
            GraphFormat::from_path(Path::new("a.JSON")),
            Some(GraphFormat::Json)
        );
        assert_eq!(
            GraphFormat::from_path(Path::new("a.edges")),
            Some(GraphFormat::EdgeList)
        );
        assert_eq!(GraphFormat::from_path(Path::new("a")), None);
    }
}
