//! A tolerant reader for the subset of GML used by the classic benchmark
//! networks: `graph [ node [ id .. label ".." ] edge [ source .. target .. value .. ] ]`.
//! Keys the loader does not know about are parsed and kept, never rejected.

use std::collections::HashMap;
use std::io::Read;

use super::{EdgeListOptions, Graph, GraphBuilder, GraphError};

/// A `key value` pair inside a GML list.
pub type GmlEntry = (String, GmlValue);

#[derive(Debug, Clone, PartialEq)]
pub enum GmlValue {
    Scalar(String),
    List(Vec<GmlEntry>),
}

impl GmlValue {
    fn as_list(&self) -> Option<&[GmlEntry]> {
        match self {
            GmlValue::List(items) => Some(items),
            GmlValue::Scalar(_) => None,
        }
    }

    fn as_scalar(&self) -> Option<&str> {
        match self {
            GmlValue::Scalar(s) => Some(s),
            GmlValue::List(_) => None,
        }
    }
}

/// Parsed GML key/value tree.
#[derive(Debug, Clone, PartialEq)]
pub struct GmlDocument {
    pub root: Vec<GmlEntry>,
}

#[derive(Debug, PartialEq)]
enum Token {
    Open,
    Close,
    Word(String),
    Quoted(String),
}

fn tokenize(text: &str) -> Result<Vec<Token>, GraphError> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '#' => {
                for c in chars.by_ref() {
                    if c == '\n' {
                        break;
                    }
                }
            }
            '[' => {
                chars.next();
                tokens.push(Token::Open);
            }
            ']' => {
                chars.next();
                tokens.push(Token::Close);
            }
            '"' => {
                chars.next();
                let mut s = String::new();
                let mut closed = false;
                for c in chars.by_ref() {
                    if c == '"' {
                        closed = true;
                        break;
                    }
                    s.push(c);
                }
                if !closed {
                    return Err(GraphError::Parse {
                        line: 0,
                        message: "unterminated string in GML".into(),
                    });
                }
                tokens.push(Token::Quoted(
                    s.replace("&quot;", "\"").replace("&amp;", "&"),
                ));
            }
            _ => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || c == '[' || c == ']' || c == '"' {
                        break;
                    }
                    s.push(c);
                    chars.next();
                }
                tokens.push(Token::Word(s));
            }
        }
    }
    Ok(tokens)
}

fn parse_list<I: Iterator<Item = Token>>(
    tokens: &mut I,
    nested: bool,
) -> Result<Vec<GmlEntry>, GraphError> {
    let mut items = Vec::new();
    loop {
        let key = match tokens.next() {
            None if nested => return Err(GraphError::UnbalancedBrackets("missing ']'".into())),
            None => return Ok(items),
            Some(Token::Close) if nested => return Ok(items),
            Some(Token::Close) => {
                return Err(GraphError::UnbalancedBrackets("unexpected ']'".into()))
            }
            Some(Token::Word(k)) => k,
            Some(t) => {
                return Err(GraphError::Parse {
                    line: 0,
                    message: format!("expected a GML key, found {t:?}"),
                })
            }
        };
        let value = match tokens.next() {
            Some(Token::Open) => GmlValue::List(parse_list(tokens, true)?),
            Some(Token::Word(s)) | Some(Token::Quoted(s)) => GmlValue::Scalar(s),
            Some(Token::Close) => {
                return Err(GraphError::Parse {
                    line: 0,
                    message: format!("GML key {key:?} has no value"),
                })
            }
            None => {
                return Err(GraphError::Parse {
                    line: 0,
                    message: format!("GML key {key:?} has no value"),
                })
            }
        };
        items.push((key, value));
    }
}

impl GmlDocument {
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut tokens = tokenize(text)?.into_iter();
        Ok(Self {
            root: parse_list(&mut tokens, false)?,
        })
    }

    fn graph_items(&self) -> Result<&[GmlEntry], GraphError> {
        self.root
            .iter()
            .find(|(k, _)| k == "graph")
            .and_then(|(_, v)| v.as_list())
            .ok_or_else(|| GraphError::Parse {
                line: 0,
                message: "no `graph [ ... ]` block".into(),
            })
    }

    fn nodes(&self) -> Result<Vec<(String, &[GmlEntry])>, GraphError> {
        let mut out = Vec::new();
        for (k, v) in self.graph_items()? {
            if k != "node" {
                continue;
            }
            let items = v.as_list().ok_or_else(|| GraphError::Parse {
                line: 0,
                message: "`node` must be a list".into(),
            })?;
            let id = lookup(items, "id").ok_or_else(|| GraphError::Parse {
                line: 0,
                message: "node without id".into(),
            })?;
            out.push((id.to_owned(), items));
        }
        Ok(out)
    }

    /// Builds the graph. Node labels come from `label`, falling back to `id`;
    /// edge weights from `value` (or `weight`), defaulting to 1.
    pub fn to_graph(&self, opts: EdgeListOptions) -> Result<Graph, GraphError> {
        let items = self.graph_items()?;
        if lookup(items, "directed").is_some_and(|d| d.trim() != "0") {
            return Err(GraphError::Parse {
                line: 0,
                message: "directed graphs are not supported".into(),
            });
        }
        let mut b = GraphBuilder::new();
        let mut by_id: HashMap<String, usize> = HashMap::new();
        for (id, node) in self.nodes()? {
            let label = lookup(node, "label").unwrap_or(&id);
            let idx = b.add_node(label)?;
            if by_id.insert(id.clone(), idx).is_some() {
                return Err(GraphError::DuplicateLabel(id));
            }
        }
        for (k, v) in items {
            if k != "edge" {
                continue;
            }
            let edge = v.as_list().ok_or_else(|| GraphError::Parse {
                line: 0,
                message: "`edge` must be a list".into(),
            })?;
            let endpoint = |key: &str| -> Result<usize, GraphError> {
                let id = lookup(edge, key).ok_or_else(|| GraphError::Parse {
                    line: 0,
                    message: format!("edge without {key}"),
                })?;
                by_id
                    .get(id)
                    .copied()
                    .ok_or_else(|| GraphError::UnknownNode(id.to_owned()))
            };
            let (s, t) = (endpoint("source")?, endpoint("target")?);
            let w = match lookup(edge, "value").or_else(|| lookup(edge, "weight")) {
                Some(raw) => raw.parse::<f64>().map_err(|_| GraphError::Parse {
                    line: 0,
                    message: format!("edge value {raw:?} is not a number"),
                })?,
                None => 1.0,
            };
            if s == t && !opts.allow_self_loops {
                return Err(GraphError::SelfLoop {
                    line: 0,
                    node: lookup(edge, "source").unwrap_or_default().to_owned(),
                });
            }
            b.add_edge(s, t, w)?;
        }
        Ok(b.build())
    }

    /// `(node label, attribute value)` for every node carrying scalar attribute `key`.
    /// Handy for ground truths shipped inside the GML file (e.g. `value "l"`).
    pub fn node_attribute(&self, key: &str) -> Result<Vec<(String, String)>, GraphError> {
        Ok(self
            .nodes()?
            .into_iter()
            .filter_map(|(id, node)| {
                let label = lookup(node, "label").unwrap_or(&id).to_owned();
                lookup(node, key).map(|v| (label, v.to_owned()))
            })
            .collect())
    }
}

fn lookup<'a>(items: &'a [GmlEntry], key: &str) -> Option<&'a str> {
    items
        .iter()
        .find(|(k, _)| k == key)
        .and_then(|(_, v)| v.as_scalar())
}

/// Parses a GML stream and builds its graph.
pub fn load_gml<R: Read>(mut reader: R, opts: EdgeListOptions) -> Result<Graph, GraphError> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    GmlDocument::parse(&text)?.to_graph(opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str) -> Result<Graph, GraphError> {
        load_gml(text.as_bytes(), EdgeListOptions::default())
    }

    #[test]
    fn two_nodes_one_edge() {
        let g = load(
            r#"Creator "test"
graph [
  directed 0
  node [ id 0 label "left" ]
  node [ id 1 ]
  edge [ source 0 target 1 ]
]"#,
        )
        .unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.total_weight(), 1.0);
        assert_eq!(g.labels(), &["left", "1"]);
    }

    #[test]
    fn edge_value_is_weight() {
        let g = load("graph [ node [ id 1 ] node [ id 2 ] edge [ source 1 target 2 value 0.5 ] ]")
            .unwrap();
        assert_eq!(g.edge_weight(0, 1), Some(0.5));
    }

    #[test]
    fn unknown_node_is_rejected() {
        let err = load("graph [ node [ id 1 ] edge [ source 99 target 1 ] ]").unwrap_err();
        assert!(
            matches!(err, GraphError::UnknownNode(ref id) if id == "99"),
            "{err}"
        );
    }

    #[test]
    fn unbalanced_brackets() {
        assert!(matches!(
            load("graph [ node [ id 1 ]"),
            Err(GraphError::UnbalancedBrackets(_))
        ));
        assert!(matches!(
            load("graph [ node [ id 1 ] ] ]"),
            Err(GraphError::UnbalancedBrackets(_))
        ));
    }

    #[test]
    fn unknown_keys_and_attributes() {
        let text = r#"graph [
  node [ id 0 label "Mr. Hi" value "l" graphics [ x 1.0 y 2.0 ] ]
  node [ id 1 label "John A" value "c" ]
  edge [ source 0 target 1 style "dashed" ]
]"#;
        let doc = GmlDocument::parse(text).unwrap();
        let g = doc.to_graph(EdgeListOptions::default()).unwrap();
        assert_eq!(g.index_of("Mr. Hi"), Some(0));
        assert_eq!(
            doc.node_attribute("value").unwrap(),
            vec![("Mr. Hi".into(), "l".into()), ("John A".into(), "c".into())]
        );
    }

    #[test]
    fn directed_graphs_rejected() {
        assert!(load("graph [ directed 1 node [ id 0 ] ]").is_err());
    }
}
