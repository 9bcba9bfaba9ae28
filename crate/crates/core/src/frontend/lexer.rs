use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Keyword(&'static str),
    Int,
    Long,
    Float,
    Double,
    Str,
    Char,
    Punct(&'static str),
    Eof,
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub line: u32,
    pub col: u32,
    pub end_line: u32,
    pub end_col: u32,
}

const KEYWORDS: &[&str] = &[
    "abstract", "boolean", "byte", "char", "class", "double", "extends", "false", "final", "float",
    "import", "int", "long", "new", "null", "package", "private", "protected", "public", "return",
    "short", "static", "super", "this", "true", "void",
];

// Longest first so that `<=` wins over `<`.
const PUNCTS: &[&str] = &[
    "&&", "||", "==", "!=", "<=", ">=", "{", "}", "(", ")", "[", "]", ";", ",", ".", "=", "+", "-",
    "*", "/", "%", "<", ">", "!", "@",
];

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    col: u32,
    // Position of the most recently consumed character.
    last: (u32, u32),
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn peek2(&self) -> Option<char> {
        let mut it = self.chars.clone();
        it.next();
        it.next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        self.last = (self.line, self.col);
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }
}

pub fn tokenize(text: &str, file: &str) -> Result<Vec<Token>> {
    let mut cur = Cursor {
        chars: text.chars().peekable(),
        line: 1,
        col: 1,
        last: (1, 0),
    };
    let err = |line, col, message: String| Error::Syntax {
        file: file.to_owned(),
        line,
        col,
        message,
    };
    let mut out = Vec::new();
    while let Some(c) = cur.peek() {
        let (line, col) = (cur.line, cur.col);
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if c == '/' && cur.peek2() == Some('/') {
            while cur.peek().is_some_and(|c| c != '\n') {
                cur.bump();
            }
            continue;
        }
        if c == '/' && cur.peek2() == Some('*') {
            cur.bump();
            cur.bump();
            loop {
                match cur.bump() {
                    Some('*') if cur.peek() == Some('/') => {
                        cur.bump();
                        break;
                    }
                    Some(_) => {}
                    None => return Err(err(line, col, "unterminated block comment".into())),
                }
            }
            continue;
        }
        let tok = if c.is_alphabetic() || c == '_' || c == '$' {
            let mut word = String::new();
            while let Some(c) = cur.peek().filter(|c| c.is_alphanumeric() || *c == '_' || *c == '$') {
                word.push(c);
                cur.bump();
            }
            match KEYWORDS.iter().find(|k| **k == word) {
                Some(k) => Tok::Keyword(k),
                None => Tok::Ident(word),
            }
        } else if c.is_ascii_digit() {
            lex_number(&mut cur)
        } else if c == '"' || c == '\'' {
            cur.bump();
            loop {
                match cur.bump() {
                    Some('\\') => {
                        cur.bump();
                    }
                    Some(q) if q == c => break,
                    Some('\n') | None => {
                        return Err(err(line, col, "unterminated literal".into()));
                    }
                    Some(_) => {}
                }
            }
            if c == '"' {
                Tok::Str
            } else {
                Tok::Char
            }
        } else {
            let rest: String = {
                let mut it = cur.chars.clone();
                let a = it.next();
                let b = it.next();
                a.into_iter().chain(b).collect()
            };
            let Some(p) = PUNCTS.iter().find(|p| rest.starts_with(**p)) else {
                return Err(err(line, col, format!("unexpected character `{c}`")));
            };
            for _ in 0..p.len() {
                cur.bump();
            }
            Tok::Punct(p)
        };
        out.push(Token {
            tok,
            line,
            col,
            end_line: cur.last.0,
            end_col: cur.last.1,
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        line: cur.line,
        col: cur.col,
        end_line: cur.line,
        end_col: cur.col,
    });
    Ok(out)
}

fn lex_number(cur: &mut Cursor<'_>) -> Tok {
    let mut decimal = false;
    while let Some(c) = cur.peek() {
        if c.is_ascii_digit() || c == '_' {
            cur.bump();
        } else if c == '.' && !decimal && cur.peek2().is_some_and(|d| d.is_ascii_digit()) {
            decimal = true;
            cur.bump();
        } else {
            break;
        }
    }
    match cur.peek() {
        Some('L' | 'l') if !decimal => {
            cur.bump();
            Tok::Long
        }
        Some('f' | 'F') => {
            cur.bump();
            Tok::Float
        }
        Some('d' | 'D') => {
            cur.bump();
            Tok::Double
        }
        _ if decimal => Tok::Double,
        _ => Tok::Int,
    }
}
