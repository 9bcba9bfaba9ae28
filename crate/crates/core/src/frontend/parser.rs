//! Recursive-descent parser for Jsub. Method bodies are not kept as trees;
//! they are reduced to the ordered list of member references they contain.

use std::collections::HashMap;

use super::ast::{AstClass, AstField, AstMethod, AstParam, BodyRef, RefKind, Receiver, TypeHint};
use super::lexer::{tokenize, Tok, Token};
use super::span::SourceSpan;
use crate::error::{Error, Result};
use crate::template::Visibility;

const PRIMITIVES: &[&str] = &["boolean", "byte", "short", "char", "int", "long", "float", "double"];

/// Parses one compilation unit into its top-level classes.
pub fn parse_file(text: &str, file: &str) -> Result<Vec<AstClass>> {
    let toks = tokenize(text, file)?;
    let mut p = Parser { toks, pos: 0, file };
    p.compilation_unit()
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    file: &'a str,
}

#[derive(Default)]
struct Modifiers {
    visibility: Option<Visibility>,
    is_static: bool,
    is_abstract: bool,
}

/// Per-method state while reducing a body.
struct Body {
    class_name: String,
    locals: HashMap<String, String>,
    refs: Vec<BodyRef>,
}

enum Place {
    None,
    Local(String, String),
    Field(usize),
}

struct Expr {
    hint: TypeHint,
    place: Place,
    span: SourceSpan,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn token(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn advance(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn prev_span_end(&self) -> (u32, u32) {
        let t = &self.toks[self.pos.saturating_sub(1)];
        (t.end_line, t.end_col)
    }

    fn span_from(&self, start: &Token) -> SourceSpan {
        let (end_line, end_col) = self.prev_span_end();
        SourceSpan {
            file: self.file.to_owned(),
            start_line: start.line,
            start_col: start.col,
            end_line,
            end_col,
        }
    }

    fn error_at(&self, tok: &Token, message: impl Into<String>) -> Error {
        Error::Syntax {
            file: self.file.to_owned(),
            line: tok.line,
            col: tok.col,
            message: message.into(),
        }
    }

    fn unexpected(&self, what: &str) -> Error {
        let found = describe(self.peek());
        self.error_at(self.token(), format!("expected {what}, found {found}"))
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Tok::Punct(q) if *q == p)
    }

    fn is_keyword(&self, k: &str) -> bool {
        matches!(self.peek(), Tok::Keyword(q) if *q == k)
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        if self.is_punct(p) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn eat_keyword(&mut self, k: &str) -> bool {
        if self.is_keyword(k) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, p: &str) -> Result<Token> {
        if self.is_punct(p) {
            Ok(self.advance())
        } else {
            Err(self.unexpected(&format!("`{p}`")))
        }
    }

    /// Closing delimiter; a mismatch is reported at the opening one.
    fn expect_close(&mut self, open: &Token, close: &str) -> Result<Token> {
        if self.is_punct(close) {
            Ok(self.advance())
        } else {
            let open_text = match &open.tok {
                Tok::Punct(p) => *p,
                _ => "?",
            };
            Err(self.error_at(
                open,
                format!("unbalanced `{open_text}`: expected `{close}`, found {}", describe(self.peek())),
            ))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.advance();
                Ok(name)
            }
            _ => Err(self.unexpected("identifier")),
        }
    }

    fn compilation_unit(&mut self) -> Result<Vec<AstClass>> {
        if self.eat_keyword("package") {
            self.qualified_name()?;
            self.expect_punct(";")?;
        }
        while self.eat_keyword("import") {
            self.qualified_name()?;
            if self.eat_punct(".") {
                self.expect_punct("*")?;
            }
            self.expect_punct(";")?;
        }
        let mut classes = Vec::new();
        while *self.peek() != Tok::Eof {
            classes.push(self.class_decl()?);
        }
        Ok(classes)
    }

    fn qualified_name(&mut self) -> Result<()> {
        self.ident()?;
        while matches!(self.peek(), Tok::Punct(".")) && matches!(self.peek_at(1), Tok::Ident(_)) {
            self.advance();
            self.advance();
        }
        Ok(())
    }

    fn annotations(&mut self) -> Result<()> {
        while self.is_punct("@") {
            self.advance();
            self.ident()?;
        }
        Ok(())
    }

    fn modifiers(&mut self) -> Result<Modifiers> {
        let mut m = Modifiers::default();
        loop {
            self.annotations()?;
            let Tok::Keyword(k) = *self.peek() else { break };
            match k {
                "public" => m.visibility = Some(Visibility::Public),
                "protected" => m.visibility = Some(Visibility::Protected),
                "private" => m.visibility = Some(Visibility::Private),
                "static" => m.is_static = true,
                "abstract" => m.is_abstract = true,
                "final" => {}
                _ => break,
            }
            self.advance();
        }
        Ok(m)
    }

    fn class_decl(&mut self) -> Result<AstClass> {
        let start = self.token().clone();
        let mods = self.modifiers()?;
        if !self.eat_keyword("class") {
            return Err(self.unexpected("`class`"));
        }
        let name = self.ident()?;
        let extends_name = if self.eat_keyword("extends") {
            Some(self.ident()?)
        } else {
            None
        };
        let open = self.expect_punct("{")?;
        let mut fields = Vec::new();
        let mut methods = Vec::new();
        while !self.is_punct("}") {
            if *self.peek() == Tok::Eof {
                return Err(self.expect_close(&open, "}").unwrap_err());
            }
            self.member(&name, &mut fields, &mut methods)?;
        }
        self.advance();
        Ok(AstClass {
            name,
            is_abstract: mods.is_abstract,
            extends_name,
            fields,
            methods,
            span: self.span_from(&start),
        })
    }

    fn is_type_start(&self) -> bool {
        match self.peek() {
            Tok::Ident(_) => true,
            Tok::Keyword(k) => PRIMITIVES.contains(k),
            _ => false,
        }
    }

    fn type_name(&mut self) -> Result<String> {
        let mut ty = match self.peek().clone() {
            Tok::Ident(name) => name,
            Tok::Keyword(k) if PRIMITIVES.contains(&k) => k.to_owned(),
            _ => return Err(self.unexpected("type")),
        };
        self.advance();
        while self.is_punct("[") && matches!(self.peek_at(1), Tok::Punct("]")) {
            self.advance();
            self.advance();
            ty.push_str("[]");
        }
        Ok(ty)
    }

    fn member(&mut self, class_name: &str, fields: &mut Vec<AstField>, methods: &mut Vec<AstMethod>) -> Result<()> {
        let start = self.token().clone();
        let mods = self.modifiers()?;
        let return_type = if self.eat_keyword("void") {
            "void".to_owned()
        } else {
            self.type_name()?
        };
        let name = self.ident()?;
        let visibility = mods.visibility.unwrap_or(Visibility::Package);
        if self.is_punct("(") {
            let open = self.advance();
            let mut params = Vec::new();
            if !self.is_punct(")") {
                loop {
                    if !self.is_type_start() {
                        return Err(self.expect_close(&open, ")").unwrap_err());
                    }
                    let pstart = self.token().clone();
                    let type_name = self.type_name()?;
                    let pname = self.ident()?;
                    params.push(AstParam {
                        name: pname,
                        type_name,
                        span: self.span_from(&pstart),
                    });
                    if !self.eat_punct(",") {
                        break;
                    }
                }
            }
            self.expect_close(&open, ")")?;
            let mut body = Body {
                class_name: class_name.to_owned(),
                locals: params.iter().map(|p| (p.name.clone(), p.type_name.clone())).collect(),
                refs: Vec::new(),
            };
            if self.is_punct(";") {
                if !mods.is_abstract {
                    return Err(self.error_at(self.token(), format!("method `{name}` has no body")));
                }
                self.advance();
            } else if mods.is_abstract {
                return Err(self.error_at(self.token(), format!("abstract method `{name}` has a body")));
            } else {
                self.block(&mut body)?;
            }
            methods.push(AstMethod {
                name,
                params,
                return_type,
                visibility,
                is_static: mods.is_static,
                is_abstract: mods.is_abstract,
                body_refs: body.refs,
                span: self.span_from(&start),
            });
        } else {
            if return_type == "void" {
                return Err(self.error_at(&start, format!("field `{name}` cannot be void")));
            }
            if self.eat_punct("=") {
                // Initializers are parsed for well-formedness only; their
                // references belong to no method.
                let mut scratch = Body {
                    class_name: class_name.to_owned(),
                    locals: HashMap::new(),
                    refs: Vec::new(),
                };
                self.expr(&mut scratch)?;
            }
            self.expect_punct(";")?;
            fields.push(AstField {
                name,
                type_name: return_type,
                visibility,
                is_static: mods.is_static,
                span: self.span_from(&start),
            });
        }
        Ok(())
    }

    fn block(&mut self, body: &mut Body) -> Result<()> {
        let open = self.expect_punct("{")?;
        while !self.is_punct("}") {
            if *self.peek() == Tok::Eof {
                return Err(self.expect_close(&open, "}").unwrap_err());
            }
            self.statement(body)?;
        }
        self.advance();
        Ok(())
    }

    fn starts_local_decl(&self) -> bool {
        match (self.peek(), self.peek_at(1), self.peek_at(2)) {
            (Tok::Keyword("final"), _, _) => true,
            (Tok::Keyword(k), _, _) if PRIMITIVES.contains(k) => true,
            (Tok::Ident(_), Tok::Ident(_), _) => true,
            (Tok::Ident(_), Tok::Punct("["), Tok::Punct("]")) => true,
            _ => false,
        }
    }

    fn statement(&mut self, body: &mut Body) -> Result<()> {
        if self.is_punct("{") {
            return self.block(body);
        }
        if self.eat_punct(";") {
            return Ok(());
        }
        if self.eat_keyword("return") {
            if !self.is_punct(";") {
                self.expr(body)?;
            }
            self.expect_punct(";")?;
            return Ok(());
        }
        if self.starts_local_decl() {
            self.eat_keyword("final");
            let ty = self.type_name()?;
            let name = self.ident()?;
            if self.eat_punct("=") {
                self.expr(body)?;
            }
            self.expect_punct(";")?;
            body.locals.insert(name, ty);
            return Ok(());
        }
        self.expr(body)?;
        self.expect_punct(";")?;
        Ok(())
    }

    fn expr(&mut self, body: &mut Body) -> Result<Expr> {
        let start = self.token().clone();
        let lhs = self.binary(body, 0)?;
        if !self.is_punct("=") {
            return Ok(lhs);
        }
        match lhs.place {
            Place::Field(i) => body.refs[i].kind = RefKind::FieldWrite,
            Place::Local(..) => {}
            Place::None => return Err(self.error_at(&start, "invalid assignment target")),
        }
        self.advance();
        self.expr(body)?;
        Ok(Expr {
            hint: lhs.hint,
            place: Place::None,
            span: self.span_from(&start),
        })
    }

    fn binary(&mut self, body: &mut Body, level: usize) -> Result<Expr> {
        const LEVELS: &[&[&str]] = &[
            &["||"],
            &["&&"],
            &["==", "!="],
            &["<", ">", "<=", ">="],
            &["+", "-"],
            &["*", "/", "%"],
        ];
        if level == LEVELS.len() {
            return self.unary(body);
        }
        let start = self.token().clone();
        let mut lhs = self.binary(body, level + 1)?;
        while let Tok::Punct(op) = *self.peek() {
            if !LEVELS[level].contains(&op) {
                break;
            }
            self.advance();
            let rhs = self.binary(body, level + 1)?;
            let hint = if level <= 3 {
                TypeHint::Known("boolean".into())
            } else {
                TypeHint::Arith {
                    plus: op == "+",
                    lhs: Box::new(lhs.hint),
                    rhs: Box::new(rhs.hint),
                }
            };
            lhs = Expr {
                hint,
                place: Place::None,
                span: self.span_from(&start),
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self, body: &mut Body) -> Result<Expr> {
        let start = self.token().clone();
        if self.eat_punct("!") {
            self.unary(body)?;
            return Ok(Expr {
                hint: TypeHint::Known("boolean".into()),
                place: Place::None,
                span: self.span_from(&start),
            });
        }
        if self.eat_punct("-") {
            let inner = self.unary(body)?;
            return Ok(Expr {
                hint: inner.hint,
                place: Place::None,
                span: self.span_from(&start),
            });
        }
        let primary = self.primary(body)?;
        self.postfix(body, primary)
    }

    fn args(&mut self, body: &mut Body) -> Result<Vec<TypeHint>> {
        let open = self.expect_punct("(")?;
        let mut args = Vec::new();
        if !self.is_punct(")") {
            loop {
                if matches!(self.peek(), Tok::Punct("}" | ";") | Tok::Eof) {
                    return Err(self.expect_close(&open, ")").unwrap_err());
                }
                args.push(self.expr(body)?.hint);
                if !self.eat_punct(",") {
                    break;
                }
            }
        }
        self.expect_close(&open, ")")?;
        Ok(args)
    }

    /// Parses `name` or `name(args)` after a receiver and records the reference.
    fn member_ref(&mut self, body: &mut Body, receiver: Receiver) -> Result<Expr> {
        let start = self.token().clone();
        let member_name = self.ident()?;
        let (kind, args) = if self.is_punct("(") {
            (RefKind::Call, self.args(body)?)
        } else {
            (RefKind::FieldRead, Vec::new())
        };
        let span = self.span_from(&start);
        body.refs.push(BodyRef {
            kind,
            receiver,
            member_name,
            args,
            span: span.clone(),
        });
        let idx = body.refs.len() - 1;
        Ok(Expr {
            hint: TypeHint::Ref(idx),
            place: if kind == RefKind::FieldRead { Place::Field(idx) } else { Place::None },
            span,
        })
    }

    fn primary(&mut self, body: &mut Body) -> Result<Expr> {
        let start = self.token().clone();
        let known = |p: &Self, ty: &str| Expr {
            hint: TypeHint::Known(ty.to_owned()),
            place: Place::None,
            span: p.span_from(&start),
        };
        match self.peek().clone() {
            Tok::Int => {
                self.advance();
                Ok(known(self, "int"))
            }
            Tok::Long => {
                self.advance();
                Ok(known(self, "long"))
            }
            Tok::Float => {
                self.advance();
                Ok(known(self, "float"))
            }
            Tok::Double => {
                self.advance();
                Ok(known(self, "double"))
            }
            Tok::Str => {
                self.advance();
                Ok(known(self, "String"))
            }
            Tok::Char => {
                self.advance();
                Ok(known(self, "char"))
            }
            Tok::Keyword("true" | "false") => {
                self.advance();
                Ok(known(self, "boolean"))
            }
            Tok::Keyword("null") => {
                self.advance();
                Ok(known(self, "null"))
            }
            Tok::Keyword("this") => {
                self.advance();
                if self.eat_punct(".") {
                    self.member_ref(body, Receiver::ImplicitThis)
                } else {
                    let class_name = body.class_name.clone();
                    Ok(known(self, &class_name))
                }
            }
            Tok::Keyword("super") => {
                self.advance();
                self.expect_punct(".")?;
                self.member_ref(body, Receiver::Super)
            }
            Tok::Keyword("new") => {
                self.advance();
                let ty = self.type_name()?;
                self.args(body)?;
                Ok(known(self, &ty))
            }
            Tok::Punct("(") => {
                let open = self.advance();
                let inner = self.expr(body)?;
                self.expect_close(&open, ")")?;
                Ok(Expr {
                    hint: inner.hint,
                    place: Place::None,
                    span: self.span_from(&start),
                })
            }
            Tok::Ident(name) => {
                if matches!(self.peek_at(1), Tok::Punct("(")) {
                    return self.member_ref(body, Receiver::ImplicitThis);
                }
                if let Some(ty) = body.locals.get(&name).cloned() {
                    self.advance();
                    return Ok(Expr {
                        hint: TypeHint::Known(ty.clone()),
                        place: Place::Local(name, ty),
                        span: self.span_from(&start),
                    });
                }
                if name.starts_with(char::is_uppercase) && matches!(self.peek_at(1), Tok::Punct(".")) {
                    self.advance();
                    self.advance();
                    return self.member_ref(body, Receiver::Class(name));
                }
                self.member_ref(body, Receiver::ImplicitThis)
            }
            _ => Err(self.unexpected("expression")),
        }
    }

    fn postfix(&mut self, body: &mut Body, mut expr: Expr) -> Result<Expr> {
        while self.eat_punct(".") {
            let receiver = match expr.place {
                Place::Local(name, type_name) => Receiver::Variable { name, type_name },
                _ => Receiver::Expr(expr.hint),
            };
            let start_span = expr.span;
            let mut next = self.member_ref(body, receiver)?;
            next.span = start_span.to(&next.span);
            expr = next;
        }
        Ok(expr)
    }
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::Keyword(k) => format!("`{k}`"),
        Tok::Punct(p) => format!("`{p}`"),
        Tok::Eof => "end of file".into(),
        _ => "literal".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MOVE_SOURCES: &str = r#"class Source {

	private int local = 15;

	public void method(Target target) {
		target.doSomething();
		System.out.println("Executing source method with " + local);
	}
}

class Target {

	public void doSomething() {
		System.out.println("Executing target code");
	}
}
"#;

    #[test]
    fn move_method_example_source() {
        let classes = parse_file(MOVE_SOURCES, "Move.jsub").unwrap();
        let names: Vec<_> = classes.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, ["Source", "Target"]);
        let source = &classes[0];
        assert_eq!(source.fields.len(), 1);
        assert_eq!(source.fields[0].name, "local");
        assert_eq!(source.fields[0].visibility, Visibility::Private);
        let m = &source.methods[0];
        assert_eq!(m.signature().to_string(), "method(Target)");
        // Arguments are recorded before the call that consumes them.
        let refs: Vec<_> = m.body_refs.iter().map(|r| (r.kind, r.member_name.as_str())).collect();
        assert_eq!(
            refs,
            [
                (RefKind::Call, "doSomething"),
                (RefKind::FieldRead, "out"),
                (RefKind::FieldRead, "local"),
                (RefKind::Call, "println"),
            ]
        );
        assert_eq!(
            m.body_refs[0].receiver,
            Receiver::Variable {
                name: "target".into(),
                type_name: "Target".into()
            }
        );
        assert_eq!(m.body_refs[1].receiver, Receiver::Class("System".into()));
        assert_eq!(m.body_refs[3].receiver, Receiver::Expr(TypeHint::Ref(1)));
        assert_eq!(m.body_refs[2].receiver, Receiver::ImplicitThis);
        assert_eq!(m.body_refs[0].span.start(), (6, 10));
    }

    #[test]
    fn empty_input() {
        assert!(parse_file("", "e.jsub").unwrap().is_empty());
    }

    #[test]
    fn unbalanced_parenthesis() {
        let err = parse_file("class A { void m( }", "a.jsub").unwrap_err();
        match err {
            Error::Syntax { line, col, message, .. } => {
                assert_eq!((line, col), (1, 17));
                assert!(message.contains("unbalanced `(`"), "{message}");
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn literal_hints_and_assignment() {
        let src = "class P { long f; void m(long x) {} void c() { m(5); m(5L); m(1.5); m('c'); m(\"s\"); m(true); f = 3; this.f = f; } }";
        let classes = parse_file(src, "p.jsub").unwrap();
        let c = &classes[0].methods[1];
        let hints: Vec<_> = c.body_refs.iter().filter(|r| r.kind == RefKind::Call).map(|r| r.args[0].clone()).collect();
        let expected: Vec<_> = ["int", "long", "double", "char", "String", "boolean"]
            .iter()
            .map(|t| TypeHint::Known(t.to_string()))
            .collect();
        assert_eq!(hints, expected);
        let kinds: Vec<_> = c.body_refs.iter().skip(6).map(|r| r.kind).collect();
        assert_eq!(kinds, [RefKind::FieldWrite, RefKind::FieldWrite, RefKind::FieldRead]);
    }

    #[test]
    fn abstract_methods_have_no_body() {
        let classes = parse_file("abstract class A { abstract int m(); }", "a.jsub").unwrap();
        assert!(classes[0].is_abstract);
        assert!(classes[0].methods[0].is_abstract);
        assert!(classes[0].methods[0].body_refs.is_empty());
        assert!(parse_file("class A { void m(); }", "a.jsub").is_err());
        assert!(parse_file("abstract class A { abstract void m() {} }", "a.jsub").is_err());
    }

    #[test]
    fn locals_shadow_fields() {
        let src = "class A { int x; void m() { int x = 1; x = 2; y = x; } }";
        let classes = parse_file(src, "a.jsub").unwrap();
        let refs = &classes[0].methods[0].body_refs;
        assert_eq!(refs.len(), 1);
        assert_eq!((refs[0].kind, refs[0].member_name.as_str()), (RefKind::FieldWrite, "y"));
    }

    #[test]
    fn spans_nest() {
        let classes = parse_file(MOVE_SOURCES, "Move.jsub").unwrap();
        for c in &classes {
            for m in &c.methods {
                assert!(c.span.encloses(&m.span));
                for r in &m.body_refs {
                    assert!(m.span.encloses(&r.span), "{:?} not in {:?}", r.span, m.span);
                }
            }
        }
        assert_eq!(classes[1].span.start(), (11, 1));
        assert_eq!(classes[1].span.end(), (16, 1));
    }
}
