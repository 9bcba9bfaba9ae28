use serde::{Deserialize, Serialize};

use super::{Attrs, NodeTag, ProgramGraph, RelationTag};

/// JSON form of a graph: nodes by id, edges by (src, dst, tag).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphDump {
    pub nodes: Vec<NodeDump>,
    pub edges: Vec<RelationDump>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeDump {
    pub id: u32,
    pub tag: NodeTag,
    pub name: String,
    pub file: Option<String>,
    pub line: Option<u32>,
    pub attrs: Attrs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationDump {
    pub src: u32,
    pub dst: u32,
    pub tag: RelationTag,
}

impl ProgramGraph {
    pub fn dump(&self) -> GraphDump {
        GraphDump {
            nodes: self
                .nodes()
                .map(|n| NodeDump {
                    id: n.id.0,
                    tag: n.tag,
                    name: n.name.clone(),
                    file: n.span.as_ref().map(|s| s.file.clone()),
                    line: n.span.as_ref().map(|s| s.start_line),
                    attrs: n.attrs.clone(),
                })
                .collect(),
            edges: self
                .edges()
                .map(|e| RelationDump {
                    src: e.src.0,
                    dst: e.dst.0,
                    tag: e.tag,
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.dump()).expect("graph dump serializes")
    }
}
