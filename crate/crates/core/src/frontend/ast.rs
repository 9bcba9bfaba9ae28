use serde::{Deserialize, Serialize};

use super::span::SourceSpan;
use crate::template::{Signature, Visibility};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AstClass {
    pub name: String,
    pub is_abstract: bool,
    pub extends_name: Option<String>,
    pub fields: Vec<AstField>,
    pub methods: Vec<AstMethod>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AstField {
    pub name: String,
    pub type_name: String,
    pub visibility: Visibility,
    pub is_static: bool,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AstParam {
    pub name: String,
    pub type_name: String,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AstMethod {
    pub name: String,
    pub params: Vec<AstParam>,
    /// `void` for methods without a result.
    pub return_type: String,
    pub visibility: Visibility,
    pub is_static: bool,
    pub is_abstract: bool,
    pub body_refs: Vec<BodyRef>,
    pub span: SourceSpan,
}

impl AstMethod {
    pub fn signature(&self) -> Signature {
        Signature {
            name: self.name.clone(),
            param_types: self.params.iter().map(|p| p.type_name.clone()).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RefKind {
    Call,
    FieldRead,
    FieldWrite,
}

/// Static type of an expression as far as the parser can tell.
///
/// Anything that depends on what a member reference resolves to is kept
/// symbolic (`Ref`) and evaluated once the program graph knows the target.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum TypeHint {
    Known(String),
    /// Result type of the body reference with this index in the same method.
    Ref(usize),
    /// Arithmetic; `plus` additionally turns into string concatenation.
    Arith {
        plus: bool,
        lhs: Box<TypeHint>,
        rhs: Box<TypeHint>,
    },
    Unknown,
}

/// What a member reference is invoked on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Receiver {
    /// Bare name or `this.`.
    ImplicitThis,
    /// `super.`
    Super,
    /// A parameter or local variable.
    Variable { name: String, type_name: String },
    /// A class name (static access).
    Class(String),
    /// Any other expression: member chains, `new T()`, parenthesised values.
    Expr(TypeHint),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BodyRef {
    pub kind: RefKind,
    pub receiver: Receiver,
    pub member_name: String,
    /// One entry per argument for calls; empty for field accesses.
    pub args: Vec<TypeHint>,
    pub span: SourceSpan,
}
