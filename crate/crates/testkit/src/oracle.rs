//! Brute-force reimplementations of every generator, subdetector and
//! detector.
//!
//! Nothing here calls refd-core's lookup, query or risk code. Each oracle
//! reads the raw node and edge lists and recomputes its answer by
//! exhaustive scans, so agreement between the two is meaningful evidence.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use refd_core::graph::{LocationId, NodeTag, ProgramGraph, ProgramLocation, ReceiverKind, RelationTag};
use refd_core::template::{ClassTemplate, MethodTemplate, Visibility};

pub type Ids = BTreeSet<LocationId>;

/// Flat view of a graph with the handful of maps every oracle needs.
pub struct World<'g> {
    pub g: &'g ProgramGraph,
    parent: BTreeMap<LocationId, LocationId>,
    children: BTreeMap<LocationId, Vec<LocationId>>,
    sup: BTreeMap<LocationId, LocationId>,
}

impl<'g> World<'g> {
    pub fn new(g: &'g ProgramGraph) -> Self {
        let mut parent = BTreeMap::new();
        let mut children: BTreeMap<LocationId, Vec<LocationId>> = BTreeMap::new();
        let mut sup = BTreeMap::new();
        for e in g.edges() {
            match e.tag {
                RelationTag::Contains => {
                    parent.insert(e.dst, e.src);
                    children.entry(e.src).or_default().push(e.dst);
                }
                RelationTag::Extends => {
                    sup.insert(e.src, e.dst);
                }
                _ => {}
            }
        }
        World { g, parent, children, sup }
    }

    fn node(&self, id: LocationId) -> &'g ProgramLocation {
        self.g.node(id).expect("oracle id exists")
    }

    fn tagged(&self, tag: NodeTag) -> impl Iterator<Item = &'g ProgramLocation> + 'g {
        self.g.nodes().filter(move |n| n.tag == tag)
    }

    fn edges(&self, tag: RelationTag) -> impl Iterator<Item = (LocationId, LocationId)> + 'g {
        self.g.edges().filter(move |e| e.tag == tag).map(|e| (e.src, e.dst))
    }

    pub fn owner(&self, id: LocationId) -> Option<LocationId> {
        let mut cur = *self.parent.get(&id)?;
        loop {
            match self.node(cur).tag {
                NodeTag::Class => return Some(cur),
                NodeTag::Project => return None,
                _ => cur = *self.parent.get(&cur)?,
            }
        }
    }

    /// Latest class with this name.
    pub fn class(&self, name: &str) -> Option<LocationId> {
        self.tagged(NodeTag::Class).filter(|n| n.name == name).map(|n| n.id).max()
    }

    pub fn ancestors(&self, c: LocationId) -> Vec<LocationId> {
        let mut out = Vec::new();
        let mut cur = c;
        while let Some(s) = self.sup.get(&cur) {
            if out.contains(s) || *s == c {
                break;
            }
            out.push(*s);
            cur = *s;
        }
        out
    }

    pub fn descendants(&self, c: LocationId) -> Ids {
        self.tagged(NodeTag::Class)
            .map(|n| n.id)
            .filter(|x| self.ancestors(*x).contains(&c))
            .collect()
    }

    fn sig(&self, m: LocationId) -> (String, Vec<String>) {
        let n = self.node(m);
        (n.name.clone(), n.attrs.param_types.clone())
    }

    fn methods_in(&self, c: LocationId) -> Vec<LocationId> {
        self.children
            .get(&c)
            .into_iter()
            .flatten()
            .copied()
            .filter(|m| self.node(*m).tag == NodeTag::Method)
            .collect()
    }

    fn is_private(&self, id: LocationId) -> bool {
        self.node(id).attrs.visibility == Some(Visibility::Private)
    }

    fn is_abstract(&self, id: LocationId) -> bool {
        self.node(id).attrs.is_abstract
    }

    /// Nearest declaration of a signature seen from `c`, ignoring `skip`.
    fn nearest(&self, c: LocationId, sig: &(String, Vec<String>), skip: Option<LocationId>) -> Option<LocationId> {
        let mut chain = vec![c];
        chain.extend(self.ancestors(c));
        for (depth, k) in chain.into_iter().enumerate() {
            let found = self
                .methods_in(k)
                .into_iter()
                .filter(|m| Some(*m) != skip && self.sig(*m) == *sig && (depth == 0 || !self.is_private(*m)))
                .max();
            if found.is_some() {
                return found;
            }
        }
        None
    }

    /// What a method should override, recomputed from declarations.
    pub fn override_target(&self, m: LocationId) -> Option<LocationId> {
        let sig = self.sig(m);
        let c = self.owner(m)?;
        for a in self.ancestors(c) {
            let found = self
                .methods_in(a)
                .into_iter()
                .filter(|x| self.sig(*x) == sig && !self.is_private(*x))
                .max();
            if found.is_some() {
                return found;
            }
        }
        None
    }

    /// Static resolution of a call site, recomputed from its recorded
    /// receiver class and argument types.
    pub fn resolve(&self, site: LocationId) -> Option<LocationId> {
        let n = self.node(site);
        let receiver = self.class(n.attrs.receiver_class.as_deref()?)?;
        let args = &n.attrs.arg_types;
        let mut chain = vec![receiver];
        chain.extend(self.ancestors(receiver));
        let mut by_sig: BTreeMap<Vec<String>, LocationId> = BTreeMap::new();
        for (depth, k) in chain.into_iter().enumerate() {
            let mut here: Vec<LocationId> = self
                .methods_in(k)
                .into_iter()
                .filter(|m| {
                    let node = self.node(*m);
                    node.name == n.name && node.attrs.param_types.len() == args.len() && (depth == 0 || !self.is_private(*m))
                })
                .collect();
            here.sort();
            here.reverse();
            for m in here {
                by_sig.entry(self.node(m).attrs.param_types.clone()).or_insert(m);
            }
        }
        let mut costs: Vec<(u32, LocationId)> = by_sig
            .values()
            .filter_map(|m| {
                let params = &self.node(*m).attrs.param_types;
                let mut total = 0;
                for (a, p) in args.iter().zip(params) {
                    total += self.convert(a.as_deref(), p)?;
                }
                Some((total, *m))
            })
            .collect();
        costs.sort();
        match costs.as_slice() {
            [] => None,
            [(c, m), rest @ ..] if rest.first().is_none_or(|(c2, _)| c2 > c) => Some(*m),
            _ => None,
        }
    }

    fn convert(&self, from: Option<&str>, to: &str) -> Option<u32> {
        let Some(from) = from else { return Some(0) };
        if from == to {
            return Some(0);
        }
        if is_primitive(from) || is_primitive(to) {
            return widening_bfs(from, to);
        }
        if from == "null" {
            return Some(0);
        }
        let c = self.class(from)?;
        self.ancestors(c).iter().position(|a| self.node(*a).name == to).map(|p| p as u32 + 1)
    }

    fn accessible(&self, member: LocationId, from: Option<LocationId>) -> bool {
        let owner = self.owner(member);
        match self.node(member).attrs.visibility.unwrap_or(Visibility::Package) {
            Visibility::Public | Visibility::Package => true,
            Visibility::Private => from.is_some() && from == owner,
            Visibility::Protected => match (from, owner) {
                (Some(f), Some(o)) => f == o || self.ancestors(f).contains(&o),
                _ => false,
            },
        }
    }
}

fn is_primitive(t: &str) -> bool {
    ["boolean", "byte", "short", "char", "int", "long", "float", "double"].contains(&t)
}

/// Shortest path in the widening relation.
pub fn widening_bfs(from: &str, to: &str) -> Option<u32> {
    const STEPS: &[(&str, &str)] = &[
        ("byte", "short"),
        ("short", "int"),
        ("char", "int"),
        ("int", "long"),
        ("long", "float"),
        ("float", "double"),
    ];
    let mut queue = VecDeque::from([(from, 0u32)]);
    let mut seen = BTreeSet::from([from]);
    while let Some((t, d)) = queue.pop_front() {
        if t == to {
            return Some(d);
        }
        for (a, b) in STEPS {
            if *a == t && seen.insert(b) {
                queue.push_back((b, d + 1));
            }
        }
    }
    None
}

fn fixpoint(start: &Ids, step: impl Fn(LocationId) -> Vec<LocationId>) -> Ids {
    let mut out = Ids::new();
    let mut changed = true;
    let mut frontier: Ids = start.clone();
    while changed {
        changed = false;
        let mut next = Ids::new();
        for x in &frontier {
            for y in step(*x) {
                if out.insert(y) {
                    changed = true;
                    next.insert(y);
                }
            }
        }
        frontier = next;
    }
    out
}

// Generators.

pub fn program_classes(w: &World) -> Ids {
    w.tagged(NodeTag::Class).map(|n| n.id).collect()
}

pub fn instance_methods(w: &World) -> Ids {
    w.tagged(NodeTag::Method).filter(|n| !n.attrs.is_static).map(|n| n.id).collect()
}

// Subdetectors.

pub fn classes_by_name(w: &World, input: &Ids, name: &str) -> Ids {
    input.iter().copied().filter(|c| w.node(*c).name == name).collect()
}

pub fn methods_of(w: &World, input: &Ids) -> Ids {
    w.edges(RelationTag::Contains)
        .filter(|(s, d)| input.contains(s) && w.node(*d).tag == NodeTag::Method)
        .map(|(_, d)| d)
        .collect()
}

pub fn fields_of(w: &World, input: &Ids) -> Ids {
    w.edges(RelationTag::Contains)
        .filter(|(s, d)| input.contains(s) && w.node(*d).tag == NodeTag::Field)
        .map(|(_, d)| d)
        .collect()
}

pub fn superclasses(w: &World, input: &Ids) -> Ids {
    fixpoint(input, |c| w.edges(RelationTag::Extends).filter(|(s, _)| *s == c).map(|(_, d)| d).collect())
}

pub fn superclasses_direct(w: &World, input: &Ids) -> Ids {
    w.edges(RelationTag::Extends).filter(|(s, _)| input.contains(s)).map(|(_, d)| d).collect()
}

pub fn subclasses(w: &World, input: &Ids) -> Ids {
    fixpoint(input, |c| w.edges(RelationTag::Extends).filter(|(_, d)| *d == c).map(|(s, _)| s).collect())
}

pub fn subclasses_direct(w: &World, input: &Ids) -> Ids {
    w.edges(RelationTag::Extends).filter(|(_, d)| input.contains(d)).map(|(s, _)| s).collect()
}

pub fn enclosing_classes(w: &World, input: &Ids) -> Ids {
    input
        .iter()
        .filter_map(|x| if w.node(*x).tag == NodeTag::Class { Some(*x) } else { w.owner(*x) })
        .collect()
}

pub fn methods_matching(w: &World, input: &Ids, name: &str, params: &[String]) -> Ids {
    input
        .iter()
        .copied()
        .filter(|m| {
            let n = w.node(*m);
            n.tag == NodeTag::Method && n.name == name && n.attrs.param_types == params
        })
        .collect()
}

pub fn overridden_by(w: &World, input: &Ids) -> Ids {
    fixpoint(input, |m| w.edges(RelationTag::Overrides).filter(|(s, _)| *s == m).map(|(_, d)| d).collect())
}

pub fn overrides_of(w: &World, input: &Ids) -> Ids {
    fixpoint(input, |m| w.edges(RelationTag::Overrides).filter(|(_, d)| *d == m).map(|(s, _)| s).collect())
}

pub fn callers_of(w: &World, input: &Ids) -> Ids {
    w.edges(RelationTag::Calls).filter(|(_, d)| input.contains(d)).map(|(s, _)| s).collect()
}

pub fn local_context_refs(w: &World, input: &Ids) -> Ids {
    let mut out = Ids::new();
    for m in input {
        let Some(c) = w.owner(*m) else { continue };
        let mut context = vec![c];
        context.extend(w.ancestors(c));
        for r in w.children.get(m).into_iter().flatten().map(|r| w.node(*r)) {
            if !matches!(r.attrs.receiver_kind, Some(ReceiverKind::ImplicitThis | ReceiverKind::Super)) {
                continue;
            }
            for e in w.g.edges() {
                if e.src == r.id
                    && matches!(e.tag, RelationTag::Calls | RelationTag::Reads | RelationTag::Writes)
                    && w.owner(e.dst).is_some_and(|o| context.contains(&o))
                {
                    out.insert(e.dst);
                }
            }
        }
    }
    out
}

// Detectors.

fn template_sig(t: &MethodTemplate) -> (String, Vec<String>) {
    (t.name.clone(), t.params.iter().map(|p| p.type_name.clone()).collect())
}

pub fn am1(w: &World, t: &MethodTemplate) -> Ids {
    let Some(c) = w.class(&t.enclosing.name) else { return Ids::new() };
    let sig = template_sig(t);
    w.methods_in(c).into_iter().filter(|m| w.sig(*m) == sig).collect()
}

pub fn am2(w: &World, t: &MethodTemplate) -> Ids {
    let Some(c) = w.class(&t.enclosing.name) else { return Ids::new() };
    let sig = template_sig(t);
    w.ancestors(c)
        .into_iter()
        .flat_map(|a| w.methods_in(a))
        .filter(|m| w.sig(*m) == sig && !w.is_private(*m))
        .collect()
}

pub fn am3(w: &World, t: &MethodTemplate) -> Ids {
    let Some(c) = w.class(&t.enclosing.name) else { return Ids::new() };
    let sig = template_sig(t);
    w.descendants(c)
        .into_iter()
        .flat_map(|d| w.methods_in(d))
        .filter(|m| w.sig(*m) == sig)
        .collect()
}

/// Adds the method to a copy of the graph, re-resolves every call that
/// currently binds to a same-name, same-arity method with another
/// signature, and keeps the calls that now bind to the new method.
pub fn am4(g: &ProgramGraph, t: &MethodTemplate) -> Ids {
    let before = World::new(g);
    if before.class(&t.enclosing.name).is_none() {
        return Ids::new();
    }
    let mut scratch = g.snapshot();
    let added = scratch.add_method_node(t).expect("destination exists");
    let after = World::new(&scratch);
    let sig = template_sig(t);
    before
        .edges(RelationTag::Calls)
        .filter(|(_, e)| {
            let (name, params) = before.sig(*e);
            name == sig.0 && params.len() == sig.1.len() && params != sig.1
        })
        .filter(|(site, _)| after.resolve(*site) == Some(added))
        .map(|(site, _)| site)
        .collect()
}

pub fn rm1(w: &World, m: LocationId) -> Ids {
    callers_of(w, &Ids::from([m]))
}

pub fn rm2(w: &World, m: LocationId) -> Ids {
    if w.is_abstract(m) {
        return Ids::new();
    }
    w.override_target(m).into_iter().collect()
}

pub fn rm3(w: &World, m: LocationId) -> Ids {
    let methods: Vec<LocationId> = w.tagged(NodeTag::Method).map(|n| n.id).collect();
    fixpoint(&Ids::from([m]), |x| {
        methods.iter().copied().filter(|y| w.override_target(*y) == Some(x)).collect()
    })
}

pub fn rm4(w: &World, m: LocationId) -> Ids {
    if w.is_abstract(m) {
        return Ids::new();
    }
    let sig = w.sig(m);
    let c = w.owner(m).expect("method owner");
    w.descendants(c)
        .into_iter()
        .filter(|d| {
            let declares = w.methods_in(*d).into_iter().any(|x| x != m && w.sig(x) == sig);
            let concrete = w.nearest(*d, &sig, Some(m)).is_some_and(|x| !w.is_abstract(x));
            !declares && !concrete
        })
        .collect()
}

pub fn rm5(w: &World, m: LocationId) -> Ids {
    let mut chain = Ids::new();
    let mut cur = m;
    while let Some(t) = w.override_target(cur) {
        if !chain.insert(t) {
            break;
        }
        cur = t;
    }
    let c = w.owner(m).expect("method owner");
    let mut subtree = w.descendants(c);
    subtree.insert(c);
    chain
        .into_iter()
        .filter(|a| w.is_abstract(*a))
        .filter(|a| {
            let owner = w.owner(*a).expect("method owner");
            let sig = w.sig(*a);
            subtree.iter().any(|k| {
                !w.is_abstract(*k)
                    && (*k == owner || w.ancestors(*k).contains(&owner))
                    && !w.nearest(*k, &sig, Some(m)).is_some_and(|x| !w.is_abstract(x))
            })
        })
        .collect()
}

pub fn mm1(w: &World, m: LocationId, destination: &str) -> Ids {
    let dest = w.class(destination);
    local_context_refs(w, &Ids::from([m]))
        .into_iter()
        .filter(|r| !w.accessible(*r, dest))
        .collect()
}

pub fn ac1(w: &World, t: &ClassTemplate) -> Ids {
    w.tagged(NodeTag::Class).filter(|n| n.name == t.name).map(|n| n.id).collect()
}
