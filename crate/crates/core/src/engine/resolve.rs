use crate::error::{Error, Result};
use crate::graph::lookup::{declared_with_signature, superclass};
use crate::graph::{LocationId, NodeTag, ProgramGraph, ProgramLocation, RelationTag};
use crate::template::{ClassTemplate, MethodTemplate, ParameterSpec};

#[derive(Debug, Clone, Copy)]
pub enum TemplateRef<'a> {
    Method(&'a MethodTemplate),
    Class(&'a ClassTemplate),
}

impl<'a> From<&'a MethodTemplate> for TemplateRef<'a> {
    fn from(t: &'a MethodTemplate) -> Self {
        TemplateRef::Method(t)
    }
}

impl<'a> From<&'a ClassTemplate> for TemplateRef<'a> {
    fn from(t: &'a ClassTemplate) -> Self {
        TemplateRef::Class(t)
    }
}

/// The location a template describes, if it exists.
pub fn resolve_template<'g, 't>(
    g: &'g ProgramGraph,
    t: impl Into<TemplateRef<'t>>,
) -> Result<Option<&'g ProgramLocation>> {
    let id = match t.into() {
        TemplateRef::Method(m) => resolve_method(g, m)?,
        TemplateRef::Class(c) => resolve_class(g, c)?,
    };
    Ok(id.and_then(|id| g.node(id)))
}

/// Method matching the template's class and signature. Two declarations
/// with the same signature in that class make the template ambiguous.
pub fn resolve_method(g: &ProgramGraph, t: &MethodTemplate) -> Result<Option<LocationId>> {
    let Some(class) = g.class_named(&t.enclosing.name) else { return Ok(None) };
    match declared_with_signature(g, class, &t.signature())[..] {
        [] => Ok(None),
        [only] => Ok(Some(only)),
        _ => Err(Error::AmbiguousTemplate(t.describe())),
    }
}

pub fn resolve_class(g: &ProgramGraph, t: &ClassTemplate) -> Result<Option<LocationId>> {
    let found: Vec<_> = g.classes_named(&t.name).collect();
    match found[..] {
        [] => Ok(None),
        [only] => Ok(Some(only)),
        _ => Err(Error::AmbiguousTemplate(t.name.clone())),
    }
}

/// Full template of an existing class.
pub fn class_template_of(g: &ProgramGraph, class: LocationId) -> ClassTemplate {
    let n = g.node(class).expect("class exists");
    ClassTemplate {
        name: n.name.clone(),
        superclass_name: superclass(g, class)
            .map(|s| g.name(s).to_owned())
            .or_else(|| n.attrs.unresolved_superclass.clone()),
        is_abstract: n.attrs.is_abstract,
    }
}

/// Full template of an existing method, parameter names included.
pub fn method_template_of(g: &ProgramGraph, method: LocationId) -> MethodTemplate {
    let n = g.node(method).expect("method exists");
    debug_assert_eq!(n.tag, NodeTag::Method);
    let mut params: Vec<_> = g
        .targets(method, RelationTag::HasParameter)
        .filter_map(|p| g.node(p))
        .map(|p| (p.attrs.index.unwrap_or(0), ParameterSpec::new(&p.name, p.attrs.type_name.clone().unwrap_or_default())))
        .collect();
    params.sort_by_key(|(i, _)| *i);
    MethodTemplate {
        name: n.name.clone(),
        params: params.into_iter().map(|(_, p)| p).collect(),
        visibility: n.visibility(),
        is_static: n.attrs.is_static,
        is_abstract: n.attrs.is_abstract,
        return_type: n.attrs.type_name.clone().unwrap_or_else(|| "void".into()),
        enclosing: class_template_of(g, g.enclosing_class(method).expect("method has a class")),
    }
}
