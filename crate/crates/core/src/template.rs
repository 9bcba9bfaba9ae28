//! Descriptions of syntax constructs that may or may not exist yet.
//!
//! A template carries every defining feature of a class or method. Querying
//! the graph for a location matching the template tells whether the construct
//! exists; augmentation uses the same description to create it.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Visibility {
    Public,
    Protected,
    Package,
    Private,
}

impl Visibility {
    pub fn as_str(self) -> &'static str {
        match self {
            Visibility::Public => "public",
            Visibility::Protected => "protected",
            Visibility::Package => "package",
            Visibility::Private => "private",
        }
    }
}

impl fmt::Display for Visibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Method name plus ordered parameter type names. Parameter names, return
/// type and visibility do not take part in equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Signature {
    pub name: String,
    pub param_types: Vec<String>,
}

impl Signature {
    pub fn new(name: impl Into<String>, param_types: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Signature {
            name: name.into(),
            param_types: param_types.into_iter().map(Into::into).collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.param_types.len()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.name, self.param_types.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParameterSpec {
    pub name: String,
    pub type_name: String,
}

impl ParameterSpec {
    pub fn new(name: impl Into<String>, type_name: impl Into<String>) -> Self {
        ParameterSpec {
            name: name.into(),
            type_name: type_name.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassTemplate {
    pub name: String,
    pub superclass_name: Option<String>,
    pub is_abstract: bool,
}

impl ClassTemplate {
    pub fn named(name: impl Into<String>) -> Self {
        ClassTemplate {
            name: name.into(),
            superclass_name: None,
            is_abstract: false,
        }
    }

    pub fn extending(mut self, superclass: impl Into<String>) -> Self {
        self.superclass_name = Some(superclass.into());
        self
    }
}

impl fmt::Display for ClassTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MethodTemplate {
    pub name: String,
    pub params: Vec<ParameterSpec>,
    pub visibility: Visibility,
    pub is_static: bool,
    pub is_abstract: bool,
    pub return_type: String,
    pub enclosing: ClassTemplate,
}

impl MethodTemplate {
    /// A public, concrete, instance `void` method with unnamed parameters of
    /// the given types.
    pub fn new<S: Into<String>>(
        enclosing: ClassTemplate,
        name: impl Into<String>,
        param_types: impl IntoIterator<Item = S>,
    ) -> Self {
        let params = param_types
            .into_iter()
            .enumerate()
            .map(|(i, ty)| ParameterSpec::new(format!("p{i}"), ty))
            .collect();
        MethodTemplate {
            name: name.into(),
            params,
            visibility: Visibility::Public,
            is_static: false,
            is_abstract: false,
            return_type: "void".to_owned(),
            enclosing,
        }
    }

    pub fn with_visibility(mut self, visibility: Visibility) -> Self {
        self.visibility = visibility;
        self
    }

    pub fn with_return_type(mut self, return_type: impl Into<String>) -> Self {
        self.return_type = return_type.into();
        self
    }

    pub fn signature(&self) -> Signature {
        Signature {
            name: self.name.clone(),
            param_types: self.params.iter().map(|p| p.type_name.clone()).collect(),
        }
    }

    /// Copy of this template placed in another class.
    pub fn relocated(&self, destination: ClassTemplate) -> Self {
        MethodTemplate {
            enclosing: destination,
            ..self.clone()
        }
    }

    /// `Class.name(type,...)`, the selector form used across the tool.
    pub fn describe(&self) -> String {
        format!("{}.{}", self.enclosing.name, self.signature())
    }
}

impl fmt::Display for MethodTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}
