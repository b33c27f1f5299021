//! Tokens, declarations and the recursive-descent parser.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorClass {
    Lexical,
    Syntax,
    Resolution,
    Validation,
}

impl fmt::Display for ErrorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorClass::Lexical => "lexical error",
            ErrorClass::Syntax => "syntax error",
            ErrorClass::Resolution => "resolution error",
            ErrorClass::Validation => "validation error",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DslError {
    pub class: ErrorClass,
    pub span: Span,
    pub message: String,
    /// Tokens that would have been accepted (syntax errors only).
    pub expected: Vec<String>,
}

impl DslError {
    pub fn new(class: ErrorClass, span: Span, message: impl Into<String>) -> Self {
        DslError {
            class,
            span,
            message: message.into(),
            expected: Vec::new(),
        }
    }
}

impl fmt::Display for DslError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}: {}", self.span.line, self.span.col, self.class, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected one of: {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for DslError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Semi,
    Comma,
    Colon,
    Arrow,
    DArrow,
    Eq,
    Slash,
    Newline,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::DArrow => f.write_str("`=>`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Newline => f.write_str("end of line"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

/// Characters allowed in an unquoted identifier.
pub fn is_plain_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '\'' | '.')
}

pub fn is_plain_ident(s: &str) -> bool {
    !s.is_empty() && s.chars().all(is_plain_char)
}

pub fn lex(text: &str) -> Result<Vec<(Tok, Span)>, DslError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1, 1);
    while let Some(&c) = chars.peek() {
        let span = Span { line, col };
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        match c {
            '\n' => {
                bump(&mut chars);
                out.push((Tok::Newline, span));
            }
            c if c.is_whitespace() => {
                bump(&mut chars);
            }
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    bump(&mut chars);
                }
            }
            '{' | '}' | '(' | ')' | ';' | ',' | ':' | '/' => {
                bump(&mut chars);
                out.push((
                    match c {
                        '{' => Tok::LBrace,
                        '}' => Tok::RBrace,
                        '(' => Tok::LParen,
                        ')' => Tok::RParen,
                        ';' => Tok::Semi,
                        ',' => Tok::Comma,
                        ':' => Tok::Colon,
                        _ => Tok::Slash,
                    },
                    span,
                ));
            }
            '-' => {
                bump(&mut chars);
                if chars.peek() == Some(&'>') {
                    bump(&mut chars);
                    out.push((Tok::Arrow, span));
                } else {
                    return Err(DslError::new(ErrorClass::Lexical, span, "stray `-` (did you mean `->`?)"));
                }
            }
            '=' => {
                bump(&mut chars);
                if chars.peek() == Some(&'>') {
                    bump(&mut chars);
                    out.push((Tok::DArrow, span));
                } else {
                    out.push((Tok::Eq, span));
                }
            }
            '"' => {
                bump(&mut chars);
                let mut s = String::new();
                loop {
                    match bump(&mut chars) {
                        Some('"') => break,
                        Some('\\') => match bump(&mut chars) {
                            Some(e @ ('"' | '\\')) => s.push(e),
                            Some('n') => s.push('\n'),
                            _ => {
                                return Err(DslError::new(
                                    ErrorClass::Lexical,
                                    span,
                                    "bad escape in quoted identifier",
                                ))
                            }
                        },
                        Some(ch) => s.push(ch),
                        None => {
                            return Err(DslError::new(
                                ErrorClass::Lexical,
                                span,
                                "unterminated quoted identifier",
                            ))
                        }
                    }
                }
                out.push((Tok::Ident(s), span));
            }
            c if is_plain_char(c) => {
                let mut s = String::new();
                while chars.peek().is_some_and(|&c| is_plain_char(c)) {
                    s.push(bump(&mut chars).unwrap());
                }
                out.push((Tok::Ident(s), span));
            }
            other => {
                return Err(DslError::new(
                    ErrorClass::Lexical,
                    span,
                    format!("unexpected character `{other}`"),
                ))
            }
        }
    }
    out.push((Tok::Eof, Span { line, col }));
    Ok(out)
}

pub type Name = (String, Span);

#[derive(Clone, Debug)]
pub enum CatStmt {
    Objects(Vec<Name>),
    Hom { dom: Name, cod: Name, names: Vec<Name> },
    Compose { g: Name, f: Name, h: Name },
    Identity { obj: Name, mor: Name },
}

#[derive(Clone, Debug)]
pub enum ConcreteStmt {
    Carrier { obj: Name, elements: Vec<Name> },
    Action { mor: Name, pairs: Vec<(Name, Name)> },
}

#[derive(Clone, Debug)]
pub struct RelDecl {
    pub name: Name,
    pub arity: usize,
    pub clauses: Vec<(Name, Vec<Vec<Name>>)>,
}

#[derive(Clone, Debug)]
pub enum Decl {
    Category { name: Name, body: Vec<CatStmt> },
    Concrete { cat: Name, body: Vec<ConcreteStmt> },
    Functor { name: Name, source: Name, target: Name, objs: Vec<(Name, Name)>, mors: Vec<(Name, Name)> },
    Nat { name: Name, from: Name, to: Name, at: Vec<(Name, Name)> },
    Signature { name: Name, over: Name, rels: Vec<RelDecl> },
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

type PResult<T> = Result<T, DslError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn advance(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> DslError {
        DslError {
            class: ErrorClass::Syntax,
            span: self.span(),
            message: format!("unexpected {}", self.peek()),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn skip_newlines(&mut self) {
        while *self.peek() == Tok::Newline {
            self.advance();
        }
    }

    fn expect(&mut self, tok: Tok, shown: &str) -> PResult<Span> {
        if *self.peek() == tok {
            Ok(self.advance().1)
        } else {
            Err(self.error(&[shown]))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<Name> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let span = self.advance().1;
                Ok((s, span))
            }
            _ => Err(self.error(&[what])),
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<Span> {
        match self.peek() {
            Tok::Ident(s) if s == kw => Ok(self.advance().1),
            _ => Err(self.error(&[&format!("`{kw}`")])),
        }
    }

    fn at_ident(&self) -> bool {
        matches!(self.peek(), Tok::Ident(_))
    }

    /// Statements separated by `;` or newlines until `}`.
    fn block<T>(&mut self, mut stmt: impl FnMut(&mut Self) -> PResult<T>) -> PResult<Vec<T>> {
        self.skip_newlines();
        self.expect(Tok::LBrace, "`{`")?;
        let mut out = Vec::new();
        loop {
            while matches!(self.peek(), Tok::Newline | Tok::Semi) {
                self.advance();
            }
            if *self.peek() == Tok::RBrace {
                self.advance();
                return Ok(out);
            }
            out.push(stmt(self)?);
            match self.peek() {
                Tok::Newline | Tok::Semi => {}
                Tok::RBrace => {}
                _ => return Err(self.error(&["`;`", "end of line", "`}`"])),
            }
        }
    }

    fn decl(&mut self) -> PResult<Decl> {
        let kw = match self.peek() {
            Tok::Ident(s) => s.clone(),
            _ => return Err(self.error(&["`category`", "`concrete`", "`functor`", "`nat`", "`signature`"])),
        };
        match kw.as_str() {
            "category" => {
                self.advance();
                let name = self.ident("category name")?;
                let body = self.block(Self::cat_stmt)?;
                Ok(Decl::Category { name, body })
            }
            "concrete" => {
                self.advance();
                let cat = self.ident("category name")?;
                let body = self.block(Self::concrete_stmt)?;
                Ok(Decl::Concrete { cat, body })
            }
            "functor" => {
                self.advance();
                let name = self.ident("functor name")?;
                self.expect(Tok::Colon, "`:`")?;
                let source = self.ident("source category")?;
                self.expect(Tok::Arrow, "`->`")?;
                let target = self.ident("target category")?;
                let mut objs = Vec::new();
                let mut mors = Vec::new();
                self.block(|p| {
                    let which = p.ident("`obj` or `mor`")?;
                    let from = p.ident("name")?;
                    p.expect(Tok::Arrow, "`->`")?;
                    let to = p.ident("name")?;
                    match which.0.as_str() {
                        "obj" => objs.push((from, to)),
                        "mor" => mors.push((from, to)),
                        _ => {
                            return Err(DslError {
                                class: ErrorClass::Syntax,
                                span: which.1,
                                message: format!("unexpected identifier `{}`", which.0),
                                expected: vec!["`obj`".into(), "`mor`".into()],
                            })
                        }
                    }
                    Ok(())
                })?;
                Ok(Decl::Functor { name, source, target, objs, mors })
            }
            "nat" => {
                self.advance();
                let name = self.ident("transformation name")?;
                self.expect(Tok::Colon, "`:`")?;
                let from = self.ident("functor name")?;
                self.expect(Tok::DArrow, "`=>`")?;
                let to = self.ident("functor name")?;
                let at = self.block(|p| {
                    p.keyword("at")?;
                    let obj = p.ident("object")?;
                    p.expect(Tok::Eq, "`=`")?;
                    let mor = p.ident("morphism")?;
                    Ok((obj, mor))
                })?;
                Ok(Decl::Nat { name, from, to, at })
            }
            "signature" => {
                self.advance();
                let name = self.ident("signature name")?;
                self.keyword("over")?;
                let over = self.ident("category name")?;
                let rels = self.block(Self::rel_decl)?;
                Ok(Decl::Signature { name, over, rels })
            }
            _ => Err(self.error(&["`category`", "`concrete`", "`functor`", "`nat`", "`signature`"])),
        }
    }

    fn cat_stmt(&mut self) -> PResult<CatStmt> {
        let kw = self.ident("`objects`, `hom`, `compose` or `identity`")?;
        match kw.0.as_str() {
            "objects" => {
                let mut names = Vec::new();
                while self.at_ident() {
                    names.push(self.ident("object")?);
                }
                Ok(CatStmt::Objects(names))
            }
            "hom" => {
                let dom = self.ident("domain object")?;
                let cod = self.ident("codomain object")?;
                self.expect(Tok::Eq, "`=`")?;
                let mut names = vec![self.ident("morphism")?];
                loop {
                    if *self.peek() == Tok::Comma {
                        self.advance();
                    }
                    if !self.at_ident() {
                        break;
                    }
                    names.push(self.ident("morphism")?);
                }
                Ok(CatStmt::Hom { dom, cod, names })
            }
            "compose" => {
                let g = self.ident("morphism")?;
                let f = self.ident("morphism")?;
                self.expect(Tok::Eq, "`=`")?;
                let h = self.ident("morphism")?;
                Ok(CatStmt::Compose { g, f, h })
            }
            "identity" => {
                let obj = self.ident("object")?;
                self.expect(Tok::Eq, "`=`")?;
                let mor = self.ident("morphism")?;
                Ok(CatStmt::Identity { obj, mor })
            }
            _ => Err(DslError {
                class: ErrorClass::Syntax,
                span: kw.1,
                message: format!("unexpected identifier `{}`", kw.0),
                expected: ["`objects`", "`hom`", "`compose`", "`identity`"]
                    .iter()
                    .map(|s| s.to_string())
                    .collect(),
            }),
        }
    }

    fn concrete_stmt(&mut self) -> PResult<ConcreteStmt> {
        let kw = self.ident("`carrier` or `action`")?;
        match kw.0.as_str() {
            "carrier" => {
                let obj = self.ident("object")?;
                self.expect(Tok::Eq, "`=`")?;
                self.expect(Tok::LBrace, "`{`")?;
                let mut elements = Vec::new();
                loop {
                    self.skip_newlines();
                    match self.peek() {
                        Tok::RBrace => {
                            self.advance();
                            break;
                        }
                        Tok::Comma => {
                            self.advance();
                        }
                        Tok::Ident(_) => elements.push(self.ident("element")?),
                        _ => return Err(self.error(&["element", "`}`"])),
                    }
                }
                Ok(ConcreteStmt::Carrier { obj, elements })
            }
            "action" => {
                let mor = self.ident("morphism")?;
                self.expect(Tok::Eq, "`=`")?;
                let braced = *self.peek() == Tok::LBrace;
                if braced {
                    self.advance();
                }
                let mut pairs = Vec::new();
                loop {
                    if braced {
                        self.skip_newlines();
                    }
                    if braced && *self.peek() == Tok::RBrace {
                        self.advance();
                        break;
                    }
                    if !braced && !self.at_ident() {
                        break;
                    }
                    let x = self.ident("element")?;
                    self.expect(Tok::Arrow, "`->`")?;
                    let y = self.ident("element")?;
                    pairs.push((x, y));
                    if *self.peek() == Tok::Comma {
                        self.advance();
                        if !braced {
                            // a trailing comma may continue on the next line
                            self.skip_newlines();
                        }
                    } else if !braced {
                        break;
                    }
                }
                Ok(ConcreteStmt::Action { mor, pairs })
            }
            _ => Err(DslError {
                class: ErrorClass::Syntax,
                span: kw.1,
                message: format!("unexpected identifier `{}`", kw.0),
                expected: vec!["`carrier`".into(), "`action`".into()],
            }),
        }
    }

    fn rel_decl(&mut self) -> PResult<RelDecl> {
        self.keyword("rel")?;
        let name = self.ident("symbol name")?;
        self.expect(Tok::Slash, "`/`")?;
        let (digits, span) = self.ident("arity")?;
        let arity: usize = digits
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| DslError {
                class: ErrorClass::Syntax,
                span,
                message: format!("arity must be a positive integer, found `{digits}`"),
                expected: vec!["arity".into()],
            })?;
        let mut clauses = Vec::new();
        while matches!(self.peek(), Tok::Ident(s) if s == "at") {
            self.advance();
            let obj = self.ident("object")?;
            self.expect(Tok::Eq, "`=`")?;
            self.expect(Tok::LBrace, "`{`")?;
            let mut tuples = Vec::new();
            loop {
                self.skip_newlines();
                match self.peek() {
                    Tok::RBrace => {
                        self.advance();
                        break;
                    }
                    Tok::Comma => {
                        self.advance();
                    }
                    Tok::LParen => {
                        self.advance();
                        let mut t = vec![self.ident("element")?];
                        while *self.peek() == Tok::Comma {
                            self.advance();
                            t.push(self.ident("element")?);
                        }
                        self.expect(Tok::RParen, "`)`")?;
                        tuples.push(t);
                    }
                    _ => return Err(self.error(&["`(`", "`}`"])),
                }
            }
            clauses.push((obj, tuples));
            if *self.peek() == Tok::Comma {
                self.advance();
            }
        }
        Ok(RelDecl { name, arity, clauses })
    }
}

pub fn parse_decls(text: &str) -> Result<Vec<Decl>, DslError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let mut out = Vec::new();
    loop {
        while matches!(p.peek(), Tok::Newline | Tok::Semi) {
            p.advance();
        }
        if *p.peek() == Tok::Eof {
            return Ok(out);
        }
        out.push(p.decl()?);
    }
}

/// Identifier as it must be written in a file.
pub fn render_ident(s: &str) -> String {
    if is_plain_ident(s) {
        s.to_string()
    } else {
        let mut out = String::from("\"");
        for c in s.chars() {
            match c {
                '"' => out.push_str("\\\""),
                '\\' => out.push_str("\\\\"),
                '\n' => out.push_str("\\n"),
                c => out.push(c),
            }
        }
        out.push('"');
        out
    }
}
