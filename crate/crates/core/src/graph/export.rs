//! Deterministic graph serialization: node/edge CSV, GraphML, DOT and a
//! Cypher script for loading into an external graph database.

use std::fmt::Write as _;
use std::io::Read;
use std::str::FromStr;

use crate::dyadic::{dp_decimal, hw_from_dp_str};
use crate::error::{Error, Result};
use crate::pddt::{hex_digits, hex_word, parse_word};

use super::{DiffGraph, DiffNode, Edge};

pub const NODES_CSV_HEADER: [&str; 6] = ["id", "input_a", "input_b", "output", "weight", "hw"];
pub const EDGES_CSV_HEADER: [&str; 3] = ["src_id", "dst_id", "label"];

/// Cypher node label.
const NODE_LABEL: &str = "DIFFERENTIALS";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    /// Two files: nodes and edges.
    Csv,
    GraphMl,
    Dot,
    Cypher,
}

impl ExportFormat {
    pub const ALL: [ExportFormat; 4] = [
        ExportFormat::Csv,
        ExportFormat::GraphMl,
        ExportFormat::Dot,
        ExportFormat::Cypher,
    ];
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ExportFormat::Csv),
            "graphml" => Ok(ExportFormat::GraphMl),
            "dot" => Ok(ExportFormat::Dot),
            "cypher" => Ok(ExportFormat::Cypher),
            other => Err(Error::config(format!(
                "unknown export format {other:?} (csv, graphml, dot, cypher)"
            ))),
        }
    }
}

/// One serialized document. `suffix` is appended to the output stem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExportFile {
    pub suffix: &'static str,
    pub bytes: Vec<u8>,
}

pub fn export_graph(graph: &DiffGraph, format: ExportFormat) -> Vec<ExportFile> {
    match format {
        ExportFormat::Csv => {
            let (nodes, edges) = graph_to_csv(graph);
            vec![
                ExportFile { suffix: "nodes.csv", bytes: nodes },
                ExportFile { suffix: "edges.csv", bytes: edges },
            ]
        }
        ExportFormat::GraphMl => vec![ExportFile { suffix: "graphml", bytes: graphml(graph).into_bytes() }],
        ExportFormat::Dot => vec![ExportFile { suffix: "dot", bytes: dot(graph).into_bytes() }],
        ExportFormat::Cypher => vec![ExportFile { suffix: "cypher", bytes: cypher(graph).into_bytes() }],
    }
}

/// Node and edge CSV documents.
pub fn graph_to_csv(graph: &DiffGraph) -> (Vec<u8>, Vec<u8>) {
    let digits = hex_digits(graph.word_size());
    let mut nodes = csv::Writer::from_writer(Vec::new());
    nodes.write_record(NODES_CSV_HEADER).expect("in-memory write");
    for n in graph.nodes() {
        nodes
            .write_record([
                n.id.to_string(),
                hex_word(n.a, digits),
                hex_word(n.b, digits),
                hex_word(n.c, digits),
                dp_decimal(n.hw),
                n.hw.to_string(),
            ])
            .expect("in-memory write");
    }
    let mut edges = csv::Writer::from_writer(Vec::new());
    edges.write_record(EDGES_CSV_HEADER).expect("in-memory write");
    for e in graph.edges() {
        edges
            .write_record([e.src.to_string(), e.dst.to_string(), e.label.clone()])
            .expect("in-memory write");
    }
    (
        nodes.into_inner().expect("in-memory flush"),
        edges.into_inner().expect("in-memory flush"),
    )
}

/// Rebuilds a graph from its node and edge CSV documents. The word size
/// defaults to four bits per hex digit.
pub fn read_graph_csv<R1: Read, R2: Read>(
    nodes: R1,
    edges: R2,
    word_size: Option<u32>,
    directed: bool,
) -> Result<DiffGraph> {
    let mut rdr = csv::Reader::from_reader(nodes);
    if rdr.headers()?.iter().ne(NODES_CSV_HEADER) {
        return Err(Error::parse(1, format!("expected node header {}", NODES_CSV_HEADER.join(","))));
    }
    let mut parsed = Vec::new();
    let mut digits = None;
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec?;
        let f = |j: usize| rec.get(j).unwrap_or("").trim();
        let word = |j: usize| parse_word(f(j)).ok_or_else(|| Error::parse(line, format!("bad word {:?}", f(j))));
        digits.get_or_insert(f(1).trim_start_matches("0x").len() as u32);
        let hw: u32 = f(5).parse().map_err(|_| Error::parse(line, format!("bad hw {:?}", f(5))))?;
        if hw_from_dp_str(f(4)) != Some(hw) {
            return Err(Error::parse(line, format!("weight {:?} is not 2^-{hw}", f(4))));
        }
        parsed.push(DiffNode {
            id: f(0).parse().map_err(|_| Error::parse(line, format!("bad id {:?}", f(0))))?,
            a: word(1)?,
            b: word(2)?,
            c: word(3)?,
            hw,
        });
    }
    let mut rdr = csv::Reader::from_reader(edges);
    if rdr.headers()?.iter().ne(EDGES_CSV_HEADER) {
        return Err(Error::parse(1, format!("expected edge header {}", EDGES_CSV_HEADER.join(","))));
    }
    let mut parsed_edges = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec?;
        let id = |j: usize| {
            rec.get(j)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| Error::parse(line, "bad node id"))
        };
        parsed_edges.push(Edge {
            src: id(0)?,
            dst: id(1)?,
            label: rec.get(2).unwrap_or("").trim().to_string(),
        });
    }
    let n = word_size.unwrap_or_else(|| digits.map_or(64, |d| (4 * d).clamp(1, 64)));
    DiffGraph::from_parts(n, directed, parsed, parsed_edges)
}

fn graphml(graph: &DiffGraph) -> String {
    let digits = hex_digits(graph.word_size());
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    s.push_str(
        "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\" \
         xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" \
         xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns \
         http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n",
    );
    for (key, ty) in [("input_a", "string"), ("input_b", "string"), ("output", "string"), ("weight", "double"), ("hw", "int")] {
        let _ = writeln!(s, "  <key id=\"{key}\" for=\"node\" attr.name=\"{key}\" attr.type=\"{ty}\"/>");
    }
    s.push_str("  <key id=\"label\" for=\"edge\" attr.name=\"label\" attr.type=\"string\"/>\n");
    let edgedefault = if graph.is_directed() { "directed" } else { "undirected" };
    let _ = writeln!(s, "  <graph id=\"diffgraph\" edgedefault=\"{edgedefault}\">");
    for n in graph.nodes() {
        let _ = writeln!(s, "    <node id=\"n{}\">", n.id);
        let _ = writeln!(s, "      <data key=\"input_a\">{}</data>", hex_word(n.a, digits));
        let _ = writeln!(s, "      <data key=\"input_b\">{}</data>", hex_word(n.b, digits));
        let _ = writeln!(s, "      <data key=\"output\">{}</data>", hex_word(n.c, digits));
        let _ = writeln!(s, "      <data key=\"weight\">{}</data>", dp_decimal(n.hw));
        let _ = writeln!(s, "      <data key=\"hw\">{}</data>", n.hw);
        s.push_str("    </node>\n");
    }
    for (i, e) in graph.edges().iter().enumerate() {
        let _ = writeln!(s, "    <edge id=\"e{i}\" source=\"n{}\" target=\"n{}\">", e.src, e.dst);
        let _ = writeln!(s, "      <data key=\"label\">{}</data>", e.label);
        s.push_str("    </edge>\n");
    }
    s.push_str("  </graph>\n</graphml>\n");
    s
}

fn dot(graph: &DiffGraph) -> String {
    let digits = hex_digits(graph.word_size());
    let (kind, arrow) = if graph.is_directed() { ("digraph", "->") } else { ("graph", "--") };
    let mut s = format!("{kind} diffgraph {{\n");
    for n in graph.nodes() {
        let _ = writeln!(
            s,
            "  {} [input_a=\"{}\", input_b=\"{}\", output=\"{}\", weight={}, hw={}];",
            n.id,
            hex_word(n.a, digits),
            hex_word(n.b, digits),
            hex_word(n.c, digits),
            dp_decimal(n.hw),
            n.hw
        );
    }
    for e in graph.edges() {
        let _ = writeln!(s, "  {} {arrow} {} [label=\"{}\"];", e.src, e.dst, e.label);
    }
    s.push_str("}\n");
    s
}

/// Cypher integers are signed 64-bit; wider words go out as hex strings.
fn cypher_word(x: u64) -> String {
    if x <= i64::MAX as u64 {
        x.to_string()
    } else {
        format!("'{x:#x}'")
    }
}

fn cypher(graph: &DiffGraph) -> String {
    let mut s = format!(
        "// diffgraph: {} nodes, {} relationships\n",
        graph.nodes().len(),
        graph.edges().len()
    );
    for n in graph.nodes() {
        let _ = writeln!(
            s,
            "CREATE (:{NODE_LABEL} {{id: {}, input_a: {}, input_b: {}, output: {}, weight: {}, hw: {}}});",
            n.id,
            cypher_word(n.a),
            cypher_word(n.b),
            cypher_word(n.c),
            dp_decimal(n.hw),
            n.hw
        );
    }
    for e in graph.edges() {
        let _ = writeln!(
            s,
            "MATCH (a:{NODE_LABEL} {{id: {}}}), (b:{NODE_LABEL} {{id: {}}}) CREATE (a)-[:{}]->(b);",
            e.src, e.dst, e.label
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::{hub_fixture, two_node};

    fn text(f: &ExportFile) -> &str {
        std::str::from_utf8(&f.bytes).unwrap()
    }

    #[test]
    fn two_node_csv_golden() {
        let files = export_graph(&two_node(), ExportFormat::Csv);
        assert_eq!(files[0].suffix, "nodes.csv");
        assert_eq!(
            text(&files[0]),
            "id,input_a,input_b,output,weight,hw\n0,0x0,0x0,0x0,1.0,0\n1,0x1,0x1,0x0,0.5,1\n"
        );
        assert_eq!(text(&files[1]), "src_id,dst_id,label\n0,1,OUTPUT_WEIGHT\n");
    }

    #[test]
    fn two_node_cypher_golden() {
        let files = export_graph(&two_node(), ExportFormat::Cypher);
        assert_eq!(
            text(&files[0]),
            "// diffgraph: 2 nodes, 1 relationships\n\
             CREATE (:DIFFERENTIALS {id: 0, input_a: 0, input_b: 0, output: 0, weight: 1.0, hw: 0});\n\
             CREATE (:DIFFERENTIALS {id: 1, input_a: 1, input_b: 1, output: 0, weight: 0.5, hw: 1});\n\
             MATCH (a:DIFFERENTIALS {id: 0}), (b:DIFFERENTIALS {id: 1}) CREATE (a)-[:OUTPUT_WEIGHT]->(b);\n"
        );
    }

    #[test]
    fn two_node_dot_golden() {
        let files = export_graph(&two_node(), ExportFormat::Dot);
        assert_eq!(
            text(&files[0]),
            "digraph diffgraph {\n\
             \x20 0 [input_a=\"0x0\", input_b=\"0x0\", output=\"0x0\", weight=1.0, hw=0];\n\
             \x20 1 [input_a=\"0x1\", input_b=\"0x1\", output=\"0x0\", weight=0.5, hw=1];\n\
             \x20 0 -> 1 [label=\"OUTPUT_WEIGHT\"];\n\
             }\n"
        );
    }

    #[test]
    fn two_node_graphml_golden() {
        let files = export_graph(&two_node(), ExportFormat::GraphMl);
        let expected = r#"<?xml version="1.0" encoding="UTF-8"?>
<graphml xmlns="http://graphml.graphdrawing.org/xmlns" xmlns:xsi="http://www.w3.org/2001/XMLSchema-instance" xsi:schemaLocation="http://graphml.graphdrawing.org/xmlns http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd">
  <key id="input_a" for="node" attr.name="input_a" attr.type="string"/>
  <key id="input_b" for="node" attr.name="input_b" attr.type="string"/>
  <key id="output" for="node" attr.name="output" attr.type="string"/>
  <key id="weight" for="node" attr.name="weight" attr.type="double"/>
  <key id="hw" for="node" attr.name="hw" attr.type="int"/>
  <key id="label" for="edge" attr.name="label" attr.type="string"/>
  <graph id="diffgraph" edgedefault="directed">
    <node id="n0">
      <data key="input_a">0x0</data>
      <data key="input_b">0x0</data>
      <data key="output">0x0</data>
      <data key="weight">1.0</data>
      <data key="hw">0</data>
    </node>
    <node id="n1">
      <data key="input_a">0x1</data>
      <data key="input_b">0x1</data>
      <data key="output">0x0</data>
      <data key="weight">0.5</data>
      <data key="hw">1</data>
    </node>
    <edge id="e0" source="n0" target="n1">
      <data key="label">OUTPUT_WEIGHT</data>
    </edge>
  </graph>
</graphml>
"#;
        assert_eq!(text(&files[0]), expected);
    }

    #[test]
    fn empty_graph_documents() {
        let g = DiffGraph::from_parts(8, true, vec![], vec![]).unwrap();
        assert_eq!(text(&export_graph(&g, ExportFormat::Dot)[0]), "digraph diffgraph {\n}\n");
        assert_eq!(
            text(&export_graph(&g, ExportFormat::Cypher)[0]),
            "// diffgraph: 0 nodes, 0 relationships\n"
        );
        let csv = export_graph(&g, ExportFormat::Csv);
        assert_eq!(text(&csv[0]), "id,input_a,input_b,output,weight,hw\n");
        assert_eq!(text(&csv[1]), "src_id,dst_id,label\n");
        assert!(text(&export_graph(&g, ExportFormat::GraphMl)[0]).ends_with("</graph>\n</graphml>\n"));
    }

    #[test]
    fn csv_roundtrip() {
        for g in [two_node(), hub_fixture()] {
            let (n, e) = graph_to_csv(&g);
            let back = read_graph_csv(n.as_slice(), e.as_slice(), Some(g.word_size()), true).unwrap();
            assert_eq!(back, g);
        }
    }

    #[test]
    fn format_tags() {
        assert_eq!("GraphML".parse::<ExportFormat>().unwrap(), ExportFormat::GraphMl);
        assert!(matches!("svg".parse::<ExportFormat>(), Err(Error::Config(_))));
    }

    #[test]
    fn wide_words_in_cypher() {
        assert_eq!(cypher_word(5), "5");
        assert_eq!(cypher_word(u64::MAX), "'0xffffffffffffffff'");
    }
}
