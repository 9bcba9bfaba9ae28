//! The program graph: tagged program locations linked by tagged relations.
//!
//! Nodes carry a [`NodeTag`] and edges a [`RelationTag`]; the tags are the
//! only typing the graph itself has. Typed views live in [`crate::query`].
//! Besides being built from a resolved project, a graph can be augmented with
//! synthetic nodes so that detectors of later microsteps see the effects of
//! earlier ones.

mod augment;
mod build;
mod dump;
pub mod lookup;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

pub use build::build_graph;
pub use dump::{GraphDump, NodeDump, RelationDump};

use crate::frontend::SourceSpan;
use crate::template::{Signature, Visibility};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LocationId(pub u32);

impl fmt::Display for LocationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum NodeTag {
    Project,
    Class,
    Method,
    Field,
    Parameter,
    CallSite,
    FieldAccess,
}

impl NodeTag {
    pub const ALL: [NodeTag; 7] = [
        NodeTag::Project,
        NodeTag::Class,
        NodeTag::Method,
        NodeTag::Field,
        NodeTag::Parameter,
        NodeTag::CallSite,
        NodeTag::FieldAccess,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RelationTag {
    Contains,
    Extends,
    Overrides,
    Calls,
    Reads,
    Writes,
    HasParameter,
    OfType,
    Returns,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReceiverKind {
    ImplicitThis,
    Super,
    Variable,
    Class,
    Expr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AccessKind {
    Read,
    Write,
}

/// Why a call site or field access has no target edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dangling {
    /// Never resolved to a project member.
    Unresolved,
    /// Its target was removed by augmentation.
    TargetRemoved,
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attrs {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub visibility: Option<Visibility>,
    #[serde(skip_serializing_if = "is_false", default)]
    pub is_static: bool,
    #[serde(skip_serializing_if = "is_false", default)]
    pub is_abstract: bool,
    /// Field or parameter type, method return type, or the result type of a
    /// resolved call site / field access.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub type_name: Option<String>,
    /// Methods only: ordered parameter types.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub param_types: Vec<String>,
    /// Parameters only: position in the parameter list.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub receiver_kind: Option<ReceiverKind>,
    /// Static class of the receiver, when it is a project class.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub receiver_class: Option<String>,
    /// Call sites only: argument types, `None` where unknown.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub arg_types: Vec<Option<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub access: Option<AccessKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dangling: Option<Dangling>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unresolved_superclass: Option<String>,
    /// Synthetic nodes: description of the template they were created from.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub template: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgramLocation {
    pub id: LocationId,
    pub tag: NodeTag,
    pub name: String,
    pub span: Option<SourceSpan>,
    pub attrs: Attrs,
    /// Added by augmentation; such nodes have no span.
    pub synthetic: bool,
}

impl ProgramLocation {
    pub fn visibility(&self) -> Visibility {
        self.attrs.visibility.unwrap_or(Visibility::Package)
    }

    pub fn is_private(&self) -> bool {
        self.attrs.visibility == Some(Visibility::Private)
    }

    /// Source location, or the template description for synthetic nodes.
    pub fn describe(&self) -> String {
        match (&self.span, &self.attrs.template) {
            (Some(span), _) => format!("{} at {span}", self.name),
            (None, Some(t)) => format!("synthetic {t}"),
            (None, None) => self.name.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Relation {
    pub src: LocationId,
    pub dst: LocationId,
    pub tag: RelationTag,
}

type Adjacency = BTreeMap<LocationId, BTreeSet<(RelationTag, LocationId)>>;

#[derive(Debug, Clone)]
pub struct ProgramGraph {
    nodes: BTreeMap<LocationId, ProgramLocation>,
    edges: BTreeSet<Relation>,
    outgoing: Adjacency,
    incoming: Adjacency,
    next_id: u32,
    generation: u64,
}

impl Default for ProgramGraph {
    fn default() -> Self {
        Self::new()
    }
}

impl ProgramGraph {
    pub const ROOT: LocationId = LocationId(0);

    /// A graph holding only the project root.
    pub fn new() -> Self {
        let mut g = ProgramGraph {
            nodes: BTreeMap::new(),
            edges: BTreeSet::new(),
            outgoing: BTreeMap::new(),
            incoming: BTreeMap::new(),
            next_id: 0,
            generation: 0,
        };
        g.insert_node(NodeTag::Project, "project", None, Attrs::default(), false);
        g
    }

    /// An independent copy; mutating it never affects `self`.
    pub fn snapshot(&self) -> ProgramGraph {
        self.clone()
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub fn node(&self, id: LocationId) -> Option<&ProgramLocation> {
        self.nodes.get(&id)
    }

    pub fn contains(&self, id: LocationId) -> bool {
        self.nodes.contains_key(&id)
    }

    pub fn tag(&self, id: LocationId) -> Option<NodeTag> {
        self.nodes.get(&id).map(|n| n.tag)
    }

    pub fn name(&self, id: LocationId) -> &str {
        self.nodes.get(&id).map_or("", |n| n.name.as_str())
    }

    pub fn nodes(&self) -> impl Iterator<Item = &ProgramLocation> {
        self.nodes.values()
    }

    pub fn nodes_tagged(&self, tag: NodeTag) -> impl Iterator<Item = &ProgramLocation> {
        self.nodes.values().filter(move |n| n.tag == tag)
    }

    pub fn edges(&self) -> impl Iterator<Item = &Relation> {
        self.edges.iter()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Destinations of `tag` edges leaving `id`, in id order.
    pub fn targets(&self, id: LocationId, tag: RelationTag) -> impl Iterator<Item = LocationId> + '_ {
        self.outgoing
            .get(&id)
            .into_iter()
            .flat_map(move |s| s.iter().filter(move |(t, _)| *t == tag).map(|(_, d)| *d))
    }

    /// Sources of `tag` edges entering `id`, in id order.
    pub fn sources(&self, id: LocationId, tag: RelationTag) -> impl Iterator<Item = LocationId> + '_ {
        self.incoming
            .get(&id)
            .into_iter()
            .flat_map(move |s| s.iter().filter(move |(t, _)| *t == tag).map(|(_, d)| *d))
    }

    /// The CONTAINS parent.
    pub fn parent(&self, id: LocationId) -> Option<LocationId> {
        self.sources(id, RelationTag::Contains).next()
    }

    /// Class declaring a method or field; the owning method's class for call
    /// sites and field accesses.
    pub fn enclosing_class(&self, id: LocationId) -> Option<LocationId> {
        let mut cur = self.parent(id)?;
        loop {
            match self.tag(cur)? {
                NodeTag::Class => return Some(cur),
                NodeTag::Project => return None,
                _ => cur = self.parent(cur)?,
            }
        }
    }

    /// Method owning a call site or field access.
    pub fn enclosing_method(&self, id: LocationId) -> Option<LocationId> {
        self.parent(id).filter(|p| self.tag(*p) == Some(NodeTag::Method))
    }

    /// Signature of a METHOD node.
    pub fn signature(&self, method: LocationId) -> Option<Signature> {
        let n = self.node(method).filter(|n| n.tag == NodeTag::Method)?;
        Some(Signature {
            name: n.name.clone(),
            param_types: n.attrs.param_types.clone(),
        })
    }

    /// `Class`, `Class.field` or `Class.method(types)`; other nodes by name.
    pub fn qualified_name(&self, id: LocationId) -> String {
        let Some(n) = self.node(id) else { return id.to_string() };
        let owner = self.enclosing_class(id).filter(|c| *c != id).map(|c| self.name(c).to_owned());
        match (n.tag, owner) {
            (NodeTag::Method, Some(c)) => format!("{c}.{}", self.signature(id).expect("method")),
            (NodeTag::Field, Some(c)) => format!("{c}.{}", n.name),
            _ => n.name.clone(),
        }
    }

    /// CLASS nodes with the given name, in id order.
    pub fn classes_named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = LocationId> + 'a {
        self.nodes_tagged(NodeTag::Class).filter(move |n| n.name == name).map(|n| n.id)
    }

    /// The class a name refers to. When augmentation has introduced a second
    /// class with the same name, the later one shadows the earlier.
    pub fn class_named(&self, name: &str) -> Option<LocationId> {
        self.classes_named(name).last()
    }

    /// Equality of node and edge sets, ignoring the generation counter and
    /// id allocation state.
    pub fn same_structure(&self, other: &ProgramGraph) -> bool {
        self.nodes == other.nodes && self.edges == other.edges
    }

    /// Checks referential integrity and the tag constraints on relations.
    /// Returns a description of the first violation found.
    pub fn check_integrity(&self) -> Result<(), String> {
        for e in &self.edges {
            let (Some(s), Some(d)) = (self.node(e.src), self.node(e.dst)) else {
                return Err(format!("dangling edge {e:?}"));
            };
            let ok = match e.tag {
                RelationTag::Overrides => s.tag == NodeTag::Method && d.tag == NodeTag::Method,
                RelationTag::Extends => s.tag == NodeTag::Class && d.tag == NodeTag::Class,
                RelationTag::HasParameter => s.tag == NodeTag::Method && d.tag == NodeTag::Parameter,
                RelationTag::Calls => s.tag == NodeTag::CallSite && d.tag == NodeTag::Method,
                RelationTag::Reads | RelationTag::Writes => s.tag == NodeTag::FieldAccess && d.tag == NodeTag::Field,
                RelationTag::Contains => matches!(
                    (s.tag, d.tag),
                    (NodeTag::Project, NodeTag::Class)
                        | (NodeTag::Class, NodeTag::Method | NodeTag::Field)
                        | (NodeTag::Method, NodeTag::CallSite | NodeTag::FieldAccess)
                ),
                RelationTag::OfType | RelationTag::Returns => d.tag == NodeTag::Class,
            };
            if !ok {
                return Err(format!("ill-tagged edge {e:?}: {:?} -> {:?}", s.tag, d.tag));
            }
        }
        for n in self.nodes.values() {
            let parents = self.sources(n.id, RelationTag::Contains).count();
            let expected = match n.tag {
                NodeTag::Project | NodeTag::Parameter => 0,
                _ => 1,
            };
            if parents != expected {
                return Err(format!("{} has {parents} CONTAINS parents", n.id));
            }
            if n.tag != NodeTag::Project && n.synthetic == n.span.is_some() {
                return Err(format!("{} synthetic flag disagrees with span", n.id));
            }
            if self.targets(n.id, RelationTag::Overrides).count() > 1 {
                return Err(format!("{} has more than one OVERRIDES edge", n.id));
            }
        }
        Ok(())
    }

    pub(crate) fn insert_node(
        &mut self,
        tag: NodeTag,
        name: impl Into<String>,
        span: Option<SourceSpan>,
        attrs: Attrs,
        synthetic: bool,
    ) -> LocationId {
        let id = LocationId(self.next_id);
        self.next_id += 1;
        self.nodes.insert(
            id,
            ProgramLocation {
                id,
                tag,
                name: name.into(),
                span,
                attrs,
                synthetic,
            },
        );
        id
    }

    pub(crate) fn node_mut(&mut self, id: LocationId) -> Option<&mut ProgramLocation> {
        self.nodes.get_mut(&id)
    }

    pub(crate) fn add_edge(&mut self, src: LocationId, dst: LocationId, tag: RelationTag) {
        debug_assert!(self.contains(src) && self.contains(dst));
        if self.edges.insert(Relation { src, dst, tag }) {
            self.outgoing.entry(src).or_default().insert((tag, dst));
            self.incoming.entry(dst).or_default().insert((tag, src));
        }
    }

    pub(crate) fn remove_edge(&mut self, e: Relation) {
        if self.edges.remove(&e) {
            if let Some(s) = self.outgoing.get_mut(&e.src) {
                s.remove(&(e.tag, e.dst));
            }
            if let Some(s) = self.incoming.get_mut(&e.dst) {
                s.remove(&(e.tag, e.src));
            }
        }
    }

    /// Removes a node together with every incident edge.
    pub(crate) fn remove_node(&mut self, id: LocationId) {
        let out: Vec<_> = self.outgoing.remove(&id).unwrap_or_default().into_iter().collect();
        for (tag, dst) in out {
            self.edges.remove(&Relation { src: id, dst, tag });
            if let Some(s) = self.incoming.get_mut(&dst) {
                s.remove(&(tag, id));
            }
        }
        let inc: Vec<_> = self.incoming.remove(&id).unwrap_or_default().into_iter().collect();
        for (tag, src) in inc {
            self.edges.remove(&Relation { src, dst: id, tag });
            if let Some(s) = self.outgoing.get_mut(&src) {
                s.remove(&(tag, id));
            }
        }
        self.nodes.remove(&id);
    }

    pub(crate) fn bump_generation(&mut self) {
        self.generation += 1;
    }
}
