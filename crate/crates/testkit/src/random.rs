//! Seeded generator of small, well-formed Jsub projects with overloading,
//! overriding, field access and calls through several receiver forms.
//!
//! Signatures are drawn first; bodies are written afterwards and mostly call
//! methods that exist on the chosen receiver's class or its ancestors, with
//! arguments that match exactly or by widening. A share of calls is left
//! random so that unresolved and ambiguous calls also occur.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use refd_core::graph::ProgramGraph;

pub const MAX_CLASSES: usize = 8;
pub const MAX_METHODS: usize = 5;
pub const MAX_DEPTH: usize = 3;

const METHOD_NAMES: &[&str] = &["m", "n", "k"];
const FIELD_NAMES: &[&str] = &["f", "g", "h"];
const PRIMITIVE_PARAMS: &[&str] = &["byte", "short", "char", "int", "long", "float", "double"];
const LITERALS: &[(&str, &str)] = &[
    ("5", "int"),
    ("5L", "long"),
    ("1.5", "double"),
    ("2f", "float"),
    ("'c'", "char"),
    ("true", "boolean"),
];
const VISIBILITIES: &[&str] = &["public ", "protected ", "", "private "];

struct Method {
    name: &'static str,
    params: Vec<String>,
    visibility: &'static str,
    is_abstract: bool,
    is_static: bool,
}

struct Class {
    name: String,
    superclass: Option<usize>,
    is_abstract: bool,
    fields: Vec<(String, &'static str, String)>,
    methods: Vec<Method>,
}

struct Project {
    classes: Vec<Class>,
}

impl Project {
    fn lineage(&self, c: usize) -> Vec<usize> {
        let mut out = vec![c];
        let mut cur = c;
        while let Some(s) = self.classes[cur].superclass {
            out.push(s);
            cur = s;
        }
        out
    }

    fn index(&self, name: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.name == name)
    }

    /// Whether a value of class `from` may be passed as `to`.
    fn is_subclass(&self, from: usize, to: usize) -> bool {
        self.lineage(from).contains(&to)
    }
}

/// Sources of a random project: one file per class, `C0.jsub` onwards.
pub fn random_project(seed: u64) -> Vec<(String, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let project = skeleton(&mut rng);
    (0..project.classes.len())
        .map(|i| (format!("{}.jsub", project.classes[i].name), render(&mut rng, &project, i)))
        .collect()
}

pub fn random_graph(seed: u64) -> ProgramGraph {
    crate::graph_from_sources(random_project(seed))
}

fn skeleton(rng: &mut ChaCha8Rng) -> Project {
    let n = rng.gen_range(1..=MAX_CLASSES);
    let names: Vec<String> = (0..n).map(|i| format!("C{i}")).collect();
    let mut depth = vec![0usize; n];
    let mut classes = Vec::with_capacity(n);
    for i in 0..n {
        let mut superclass = None;
        if i > 0 && rng.gen_bool(0.7) {
            let candidates: Vec<usize> = (0..i).filter(|j| depth[*j] < MAX_DEPTH).collect();
            if let Some(&j) = candidates.choose(rng) {
                superclass = Some(j);
                depth[i] = depth[j] + 1;
            }
        }
        let is_abstract = rng.gen_bool(0.25);
        let mut field_names: Vec<&str> = FIELD_NAMES.to_vec();
        field_names.shuffle(rng);
        field_names.truncate(rng.gen_range(0..=2));
        let fields = field_names
            .into_iter()
            .map(|f| (f.to_owned(), *VISIBILITIES.choose(rng).unwrap(), random_type(rng, &names)))
            .collect();
        let mut methods: Vec<Method> = Vec::new();
        for _ in 0..rng.gen_range(0..=MAX_METHODS) {
            let name = *METHOD_NAMES.choose(rng).unwrap();
            let params: Vec<String> = (0..rng.gen_range(0..=2)).map(|_| random_type(rng, &names)).collect();
            if methods.iter().any(|m| m.name == name && m.params == params) {
                continue;
            }
            let is_abstract = is_abstract && rng.gen_bool(0.4);
            methods.push(Method {
                name,
                params,
                visibility: VISIBILITIES.choose(rng).unwrap(),
                is_abstract,
                is_static: !is_abstract && rng.gen_bool(0.05),
            });
        }
        classes.push(Class {
            name: names[i].clone(),
            superclass,
            is_abstract,
            fields,
            methods,
        });
    }
    Project { classes }
}

fn render(rng: &mut ChaCha8Rng, p: &Project, i: usize) -> String {
    let class = &p.classes[i];
    let mut src = String::new();
    src.push_str(if class.is_abstract { "abstract class " } else { "class " });
    src.push_str(&class.name);
    if let Some(s) = class.superclass {
        src.push_str(&format!(" extends {}", p.classes[s].name));
    }
    src.push_str(" {\n");
    for (name, vis, ty) in &class.fields {
        src.push_str(&format!("    {vis}{ty} {name};\n"));
    }
    for m in &class.methods {
        let params: Vec<String> = m.params.iter().enumerate().map(|(i, t)| format!("{t} p{i}")).collect();
        let params = params.join(", ");
        if m.is_abstract {
            src.push_str(&format!("    {}abstract void {}({params});\n", m.visibility, m.name));
            continue;
        }
        let stat = if m.is_static { "static " } else { "" };
        src.push_str(&format!("    {}{stat}void {}({params}) {{\n", m.visibility, m.name));
        for _ in 0..rng.gen_range(0..=3) {
            src.push_str("        ");
            src.push_str(&statement(rng, p, i, &m.params));
            src.push('\n');
        }
        src.push_str("    }\n");
    }
    src.push_str("}\n");
    src
}

fn random_type(rng: &mut ChaCha8Rng, classes: &[String]) -> String {
    if rng.gen_bool(0.3) {
        classes.choose(rng).unwrap().clone()
    } else {
        (*PRIMITIVE_PARAMS.choose(rng).unwrap()).to_owned()
    }
}

/// An argument expression for a parameter of type `ty`: usually one that
/// converts to it, sometimes anything at all.
fn argument(rng: &mut ChaCha8Rng, p: &Project, params: &[String], ty: &str) -> String {
    if rng.gen_bool(0.15) {
        return match rng.gen_range(0..3) {
            0 => LITERALS.choose(rng).unwrap().0.to_owned(),
            1 => "null".to_owned(),
            _ => format!("new {}()", p.classes.choose(rng).unwrap().name),
        };
    }
    let same_param: Vec<usize> = (0..params.len()).filter(|i| params[*i] == ty).collect();
    if !same_param.is_empty() && rng.gen_bool(0.3) {
        return format!("p{}", same_param.choose(rng).unwrap());
    }
    if let Some(target) = p.index(ty) {
        let subs: Vec<usize> = (0..p.classes.len()).filter(|c| p.is_subclass(*c, target)).collect();
        return if rng.gen_bool(0.2) {
            "null".to_owned()
        } else {
            format!("new {}()", p.classes[*subs.choose(rng).unwrap()].name)
        };
    }
    let widening: Vec<&str> = LITERALS
        .iter()
        .filter(|(_, lt)| *lt == ty || widens(lt, ty))
        .map(|(l, _)| *l)
        .collect();
    match widening.choose(rng) {
        Some(l) => (*l).to_owned(),
        None => LITERALS.choose(rng).unwrap().0.to_owned(),
    }
}

fn widens(from: &str, to: &str) -> bool {
    const ORDER: &[&str] = &["byte", "short", "int", "long", "float", "double"];
    let rank = |t: &str| ORDER.iter().position(|o| *o == t);
    match (from, rank(to)) {
        ("char", Some(r)) => r >= 2,
        (f, Some(r)) => rank(f).is_some_and(|fr| fr < r),
        _ => false,
    }
}

/// A call expression on a receiver of class `receiver`.
fn call(rng: &mut ChaCha8Rng, p: &Project, receiver: usize, params: &[String]) -> String {
    let visible: Vec<&Method> = p.lineage(receiver).into_iter().flat_map(|c| &p.classes[c].methods).collect();
    if visible.is_empty() || rng.gen_bool(0.15) {
        let name = METHOD_NAMES.choose(rng).unwrap();
        let args: Vec<String> = (0..rng.gen_range(0..=2)).map(|_| argument(rng, p, params, "?")).collect();
        return format!("{name}({})", args.join(", "));
    }
    let m = visible.choose(rng).unwrap();
    let args: Vec<String> = m.params.iter().map(|t| argument(rng, p, params, t)).collect();
    format!("{}({})", m.name, args.join(", "))
}

fn statement(rng: &mut ChaCha8Rng, p: &Project, class: usize, params: &[String]) -> String {
    let class_params: Vec<(usize, usize)> = params
        .iter()
        .enumerate()
        .filter_map(|(i, t)| p.index(t).map(|c| (i, c)))
        .collect();
    let superclass = p.classes[class].superclass;
    match rng.gen_range(0..9) {
        0..=2 => format!("{};", call(rng, p, class, params)),
        3 if superclass.is_some() => format!("super.{};", call(rng, p, superclass.unwrap(), params)),
        4 if !class_params.is_empty() => {
            let (i, c) = *class_params.choose(rng).unwrap();
            format!("p{i}.{};", call(rng, p, c, params))
        }
        5 => {
            let c = rng.gen_range(0..p.classes.len());
            format!("new {}().{};", p.classes[c].name, call(rng, p, c, params))
        }
        6 => format!("{} = {};", FIELD_NAMES.choose(rng).unwrap(), argument(rng, p, params, "int")),
        7 => format!("long v = {} + 1;", FIELD_NAMES.choose(rng).unwrap()),
        _ => format!("this.{};", call(rng, p, class, params)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use refd_core::graph::{NodeTag, RelationTag};

    #[test]
    fn generated_projects_parse_and_stay_in_bounds() {
        for seed in 0..50 {
            let g = random_graph(seed);
            g.check_integrity().unwrap();
            let classes = g.nodes_tagged(NodeTag::Class).count();
            assert!((1..=MAX_CLASSES).contains(&classes));
        }
    }

    #[test]
    fn same_seed_same_project() {
        assert_eq!(random_project(7), random_project(7));
    }

    #[test]
    fn most_projects_have_resolved_calls_and_overrides() {
        let graphs: Vec<_> = (0..40).map(random_graph).collect();
        let with = |tag| graphs.iter().filter(|g| g.edges().any(|e| e.tag == tag)).count();
        assert!(with(RelationTag::Calls) > 25);
        assert!(with(RelationTag::Overrides) > 5);
    }
}
