//! Surface syntax for terms, types and typed terms.
//!
//! ```text
//! term  := "\" IDENT+ "." term | atom+
//! atom  := IDENT | NUMBER | "(" term ")"
//! type  := "forall" IDENT+ "." type | arrow
//! arrow := tatom ("->" arrow)?
//! tatom := IDENT | "bot" | "~" tatom | "(" type ")"
//! typed := "\" IDENT ":" type "." typed | "/\" IDENT "." typed
//!        | tyatom (tyatom | "[" type "]")*
//! ```
//!
//! Application is left-associative and abstraction bodies extend as far right
//! as possible. `#` starts a comment. A decimal literal `n` stands for the
//! Church numeral `λx.λf. fⁿ x` (its typed version at `N` in typed terms).
//! Identifiers that are neither bound nor defined are free variables.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::term::{Name, Term, TermKind};
use crate::typed::{TypedKind, TypedTerm};
use crate::types::{Type, TypeKind};
use crate::zoo;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Number(usize),
    Lambda,
    TyLambda,
    Forall,
    Dot,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Colon,
    Arrow,
    Tilde,
    Equals,
    Bot,
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub(crate) fn lex(text: &str, first_line: usize) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line_no = first_line + lineno;
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            let push = |tok, out: &mut Vec<Token>| {
                out.push(Token {
                    tok,
                    line: line_no,
                    col,
                })
            };
            match c {
                '#' => break,
                c if c.is_whitespace() => i += 1,
                '\\' | 'λ' => {
                    push(Tok::Lambda, &mut out);
                    i += 1;
                }
                'Λ' => {
                    push(Tok::TyLambda, &mut out);
                    i += 1;
                }
                '/' if chars.get(i + 1) == Some(&'\\') => {
                    push(Tok::TyLambda, &mut out);
                    i += 2;
                }
                '∀' => {
                    push(Tok::Forall, &mut out);
                    i += 1;
                }
                '⊥' => {
                    push(Tok::Bot, &mut out);
                    i += 1;
                }
                '¬' | '~' => {
                    push(Tok::Tilde, &mut out);
                    i += 1;
                }
                '→' => {
                    push(Tok::Arrow, &mut out);
                    i += 1;
                }
                '-' if chars.get(i + 1) == Some(&'>') => {
                    push(Tok::Arrow, &mut out);
                    i += 2;
                }
                '.' => {
                    push(Tok::Dot, &mut out);
                    i += 1;
                }
                '(' => {
                    push(Tok::LParen, &mut out);
                    i += 1;
                }
                ')' => {
                    push(Tok::RParen, &mut out);
                    i += 1;
                }
                '[' => {
                    push(Tok::LBracket, &mut out);
                    i += 1;
                }
                ']' => {
                    push(Tok::RBracket, &mut out);
                    i += 1;
                }
                ':' => {
                    push(Tok::Colon, &mut out);
                    i += 1;
                }
                '=' => {
                    push(Tok::Equals, &mut out);
                    i += 1;
                }
                c if c.is_ascii_digit() => {
                    let start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let s: String = chars[start..i].iter().collect();
                    let n = s.parse().map_err(|_| ParseError {
                        line: line_no,
                        col,
                        message: format!("numeral `{s}` is too large"),
                    })?;
                    push(Tok::Number(n), &mut out);
                }
                c if is_ident_start(c) => {
                    let start = i;
                    while i < chars.len() && is_ident_char(chars[i]) {
                        i += 1;
                    }
                    let s: String = chars[start..i].iter().collect();
                    let tok = match s.as_str() {
                        "forall" => Tok::Forall,
                        "bot" => Tok::Bot,
                        _ => Tok::Ident(s),
                    };
                    push(tok, &mut out);
                }
                other => {
                    return Err(ParseError {
                        line: line_no,
                        col,
                        message: format!("unexpected character `{other}`"),
                    })
                }
            }
        }
    }
    Ok(out)
}

/// Name-resolution environment for parsing: definitions inline by value.
#[derive(Clone, Debug, Default)]
pub struct Scope {
    pub terms: HashMap<Name, Term>,
    pub types: HashMap<Name, Type>,
    pub typed: HashMap<Name, TypedTerm>,
    /// Reject free variables in terms.
    pub strict_closed: bool,
}

pub(crate) struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    scope: &'a Scope,
    end_line: usize,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(toks: Vec<Token>, scope: &'a Scope) -> Parser<'a> {
        let end_line = toks.last().map(|t| t.line).unwrap_or(1);
        Parser {
            toks,
            pos: 0,
            scope,
            end_line,
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = match self.toks.get(self.pos) {
            Some(t) => (t.line, t.col),
            None => (
                self.end_line,
                self.toks.last().map(|t| t.col + 1).unwrap_or(1),
            ),
        };
        ParseError {
            line,
            col,
            message: message.into(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error("expected identifier")),
        }
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub(crate) fn finish(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error("unexpected trailing input"))
        }
    }

    pub(crate) fn take_ident(&mut self) -> Result<String, ParseError> {
        self.ident()
    }

    pub(crate) fn take(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        self.expect(tok, what)
    }

    // ---- untyped terms ----

    pub(crate) fn term(&mut self, bound: &mut Vec<String>) -> Result<Term, ParseError> {
        if self.peek() == Some(&Tok::Lambda) {
            self.pos += 1;
            let mut names = Vec::new();
            while let Some(Tok::Ident(_)) = self.peek() {
                names.push(self.ident()?);
            }
            if names.is_empty() {
                return Err(self.error("expected binder after `\\`"));
            }
            self.expect(Tok::Dot, "`.` after binders")?;
            let depth = bound.len();
            bound.extend(names.iter().cloned());
            let body = self.term(bound);
            bound.truncate(depth);
            let body = body?;
            return Ok(names
                .iter()
                .rev()
                .fold(body, |acc, n| Term::abs(n.as_str().into(), acc)));
        }
        let mut acc = self.term_atom(bound)?;
        loop {
            match self.peek() {
                Some(Tok::Ident(_)) | Some(Tok::Number(_)) | Some(Tok::LParen) => {
                    let a = self.term_atom(bound)?;
                    acc = Term::app(acc, a);
                }
                Some(Tok::Lambda) => {
                    let a = self.term(bound)?;
                    acc = Term::app(acc, a);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term_atom(&mut self, bound: &mut Vec<String>) -> Result<Term, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                let pos = self.pos;
                self.pos += 1;
                if let Some(i) = bound.iter().rposition(|b| *b == name) {
                    return Ok(Term::bound((bound.len() - 1 - i) as u32));
                }
                if let Some(t) = self.scope.terms.get(name.as_str()) {
                    return Ok(t.clone());
                }
                if self.scope.strict_closed {
                    self.pos = pos;
                    return Err(self.error(format!("unbound name `{name}`")));
                }
                Ok(Term::var(&name))
            }
            Some(Tok::Number(n)) => {
                self.pos += 1;
                Ok(zoo::church(n))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.term(bound)?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            _ => Err(self.error("expected a term")),
        }
    }

    // ---- types ----

    /// `tyvars` are the Λ-bound type variables in scope (they shadow aliases).
    pub(crate) fn ty(
        &mut self,
        bound: &mut Vec<String>,
        tyvars: &[String],
    ) -> Result<Type, ParseError> {
        if self.peek() == Some(&Tok::Forall) {
            self.pos += 1;
            let mut names = Vec::new();
            while let Some(Tok::Ident(_)) = self.peek() {
                names.push(self.ident()?);
            }
            if names.is_empty() {
                return Err(self.error("expected type variable after `forall`"));
            }
            self.expect(Tok::Dot, "`.` after forall binders")?;
            let depth = bound.len();
            bound.extend(names.iter().cloned());
            let body = self.ty(bound, tyvars);
            bound.truncate(depth);
            let body = body?;
            return Ok(names
                .iter()
                .rev()
                .fold(body, |acc, n| Type::forall_open(n.as_str().into(), acc)));
        }
        let dom = self.ty_atom(bound, tyvars)?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let cod = self.ty(bound, tyvars)?;
            Ok(Type::arrow(dom, cod))
        } else {
            Ok(dom)
        }
    }

    fn ty_atom(&mut self, bound: &mut Vec<String>, tyvars: &[String]) -> Result<Type, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if let Some(i) = bound.iter().rposition(|b| *b == name) {
                    return Ok(Type::bound((bound.len() - 1 - i) as u32));
                }
                if tyvars.contains(&name) {
                    return Ok(Type::var(&name));
                }
                if let Some(t) = self.scope.types.get(name.as_str()) {
                    return Ok(t.clone());
                }
                Ok(Type::var(&name))
            }
            Some(Tok::Bot) => {
                self.pos += 1;
                Ok(Type::bottom())
            }
            Some(Tok::Tilde) => {
                self.pos += 1;
                let a = self.ty_atom(bound, tyvars)?;
                Ok(Type::not(a))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.ty(bound, tyvars)?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            _ => Err(self.error("expected a type")),
        }
    }

    // ---- typed terms ----

    pub(crate) fn typed(
        &mut self,
        bound: &mut Vec<String>,
        tyvars: &mut Vec<String>,
    ) -> Result<TypedTerm, ParseError> {
        match self.peek() {
            Some(Tok::Lambda) => {
                self.pos += 1;
                let mut binders = Vec::new();
                loop {
                    let name = self.ident()?;
                    self.expect(Tok::Colon, "`:` and a type annotation")?;
                    let ty = self.ty(&mut Vec::new(), tyvars)?;
                    binders.push((name, ty));
                    let another = matches!(self.peek(), Some(Tok::Ident(_)))
                        && self.peek_at(1) == Some(&Tok::Colon);
                    if !another {
                        break;
                    }
                }
                self.expect(Tok::Dot, "`.` after binder")?;
                let depth = bound.len();
                bound.extend(binders.iter().map(|(n, _)| n.clone()));
                let body = self.typed(bound, tyvars);
                bound.truncate(depth);
                let body = body?;
                Ok(binders.into_iter().rev().fold(body, |acc, (n, ty)| {
                    TypedTerm::lam_open(n.as_str().into(), ty, acc)
                }))
            }
            Some(Tok::TyLambda) => {
                self.pos += 1;
                let mut names = Vec::new();
                while let Some(Tok::Ident(_)) = self.peek() {
                    names.push(self.ident()?);
                }
                if names.is_empty() {
                    return Err(self.error("expected type variable after `/\\`"));
                }
                self.expect(Tok::Dot, "`.` after type binder")?;
                let depth = tyvars.len();
                tyvars.extend(names.iter().cloned());
                let body = self.typed(bound, tyvars);
                tyvars.truncate(depth);
                let body = body?;
                Ok(names
                    .iter()
                    .rev()
                    .fold(body, |acc, n| TypedTerm::ty_lam(n, acc)))
            }
            _ => {
                let mut acc = self.typed_atom(bound, tyvars)?;
                loop {
                    match self.peek() {
                        Some(Tok::Ident(_)) | Some(Tok::Number(_)) | Some(Tok::LParen) => {
                            let a = self.typed_atom(bound, tyvars)?;
                            acc = TypedTerm::app(acc, a);
                        }
                        Some(Tok::LBracket) => {
                            self.pos += 1;
                            let g = self.ty(&mut Vec::new(), tyvars)?;
                            self.expect(Tok::RBracket, "`]`")?;
                            acc = TypedTerm::ty_app(acc, g);
                        }
                        Some(Tok::Lambda) | Some(Tok::TyLambda) => {
                            let a = self.typed(bound, tyvars)?;
                            acc = TypedTerm::app(acc, a);
                        }
                        _ => return Ok(acc),
                    }
                }
            }
        }
    }

    fn typed_atom(
        &mut self,
        bound: &mut Vec<String>,
        tyvars: &mut Vec<String>,
    ) -> Result<TypedTerm, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if let Some(i) = bound.iter().rposition(|b| *b == name) {
                    return Ok(TypedTerm::bound((bound.len() - 1 - i) as u32));
                }
                if let Some(t) = self.scope.typed.get(name.as_str()) {
                    return Ok(t.clone());
                }
                Ok(TypedTerm::var(&name))
            }
            Some(Tok::Number(n)) => {
                self.pos += 1;
                Ok(zoo::typed_church(n))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.typed(bound, tyvars)?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            _ => Err(self.error("expected a typed term")),
        }
    }
}

pub fn parse_term_in(text: &str, scope: &Scope) -> Result<Term, ParseError> {
    let mut p = Parser::new(lex(text, 1)?, scope);
    if p.at_end() {
        return Err(p.error("empty input"));
    }
    let t = p.term(&mut Vec::new())?;
    p.finish()?;
    Ok(t)
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    parse_term_in(text, &Scope::default())
}

pub fn parse_type_in(text: &str, scope: &Scope) -> Result<Type, ParseError> {
    let mut p = Parser::new(lex(text, 1)?, scope);
    let t = p.ty(&mut Vec::new(), &[])?;
    p.finish()?;
    Ok(t)
}

pub fn parse_type(text: &str) -> Result<Type, ParseError> {
    parse_type_in(text, &Scope::default())
}

pub fn parse_typed_in(text: &str, scope: &Scope) -> Result<TypedTerm, ParseError> {
    let mut p = Parser::new(lex(text, 1)?, scope);
    let t = p.typed(&mut Vec::new(), &mut Vec::new())?;
    p.finish()?;
    Ok(t)
}

pub fn parse_typed(text: &str) -> Result<TypedTerm, ParseError> {
    parse_typed_in(text, &Scope::default())
}

// ---------------------------------------------------------------- printing

/// Named abbreviations used when printing: closed subterms α-equal to an
/// entry are shown by name. Among several candidates the one with identical
/// binder hints wins, then the earliest registered.
#[derive(Clone, Debug, Default)]
pub struct Folding {
    table: HashMap<Term, Vec<(Name, Term)>>,
}

impl Folding {
    pub fn new() -> Folding {
        Folding::default()
    }

    pub fn add(&mut self, name: &str, term: &Term) {
        if term.is_closed() {
            self.table
                .entry(term.clone())
                .or_default()
                .push((name.into(), term.clone()));
        }
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    fn lookup(&self, t: &Term) -> Option<&Name> {
        let cands = self.table.get(t)?;
        cands
            .iter()
            .find(|(_, c)| c.eq_with_hints(t))
            .or_else(|| cands.first())
            .map(|(n, _)| n)
    }
}

/// Surface syntax for a term; `parse_term` of the result is α-equal to `t`.
pub fn print_term(t: &Term) -> String {
    print_term_folded(t, &Folding::default())
}

pub fn print_term_folded(t: &Term, folding: &Folding) -> String {
    let mut avoid: BTreeSet<String> = t.free_vars().iter().map(|n| n.to_string()).collect();
    if !folding.is_empty() {
        // folded names must not be shadowed by a binder
        for cands in folding.table.values() {
            for (n, _) in cands {
                avoid.insert(n.to_string());
            }
        }
    }
    let mut out = String::new();
    let mut printer = TermPrinter {
        avoid: &avoid,
        folding,
        scope: Vec::new(),
    };
    printer.top(t, &mut out);
    out
}

struct TermPrinter<'a> {
    avoid: &'a BTreeSet<String>,
    folding: &'a Folding,
    scope: Vec<String>,
}

/// Indices `k >= 1` referenced from the top of an abstraction body.
fn outer_refs(t: &Term, depth: u32, out: &mut BTreeSet<u32>) {
    if t.loose() <= depth + 1 {
        return;
    }
    match t.kind() {
        TermKind::Bound(i) => {
            if *i > depth {
                out.insert(i - depth);
            }
        }
        TermKind::Free(_) => {}
        TermKind::Lam(_, b) => outer_refs(b, depth + 1, out),
        TermKind::App(f, a) => {
            outer_refs(f, depth, out);
            outer_refs(a, depth, out);
        }
    }
}

impl TermPrinter<'_> {
    fn fold(&self, t: &Term) -> Option<String> {
        if self.folding.is_empty() || !t.is_closed() {
            return None;
        }
        self.folding.lookup(t).map(|n| n.to_string())
    }

    fn binder_name(&self, hint: &str, body: &Term) -> String {
        let mut refs = BTreeSet::new();
        outer_refs(body, 0, &mut refs);
        let taken: BTreeSet<&str> = refs
            .iter()
            .filter_map(|k| {
                let k = *k as usize;
                (k <= self.scope.len()).then(|| self.scope[self.scope.len() - k].as_str())
            })
            .collect();
        let mut name = if hint.is_empty() {
            "x".to_string()
        } else {
            hint.to_string()
        };
        while self.avoid.contains(&name) || taken.contains(name.as_str()) {
            name.push('\'');
        }
        name
    }

    fn top(&mut self, t: &Term, out: &mut String) {
        if let Some(n) = self.fold(t) {
            out.push_str(&n);
            return;
        }
        match t.kind() {
            TermKind::Lam(h, b) => {
                let name = self.binder_name(h, b);
                out.push('\\');
                out.push_str(&name);
                out.push('.');
                self.scope.push(name);
                self.top(b, out);
                self.scope.pop();
            }
            TermKind::App(f, a) => {
                self.func(f, out);
                out.push(' ');
                self.arg(a, out);
            }
            _ => self.atom(t, out),
        }
    }

    fn func(&mut self, t: &Term, out: &mut String) {
        if self.fold(t).is_none() {
            if let TermKind::App(f, a) = t.kind() {
                self.func(f, out);
                out.push(' ');
                self.arg(a, out);
                return;
            }
        }
        self.arg(t, out);
    }

    fn arg(&mut self, t: &Term, out: &mut String) {
        if let Some(n) = self.fold(t) {
            out.push_str(&n);
            return;
        }
        match t.kind() {
            TermKind::Lam(..) | TermKind::App(..) => {
                out.push('(');
                self.top(t, out);
                out.push(')');
            }
            _ => self.atom(t, out),
        }
    }

    fn atom(&mut self, t: &Term, out: &mut String) {
        match t.kind() {
            TermKind::Bound(i) => {
                let i = *i as usize;
                match self.scope.len().checked_sub(i + 1) {
                    Some(k) => out.push_str(&self.scope[k]),
                    None => out.push_str(&format!("#{i}")),
                }
            }
            TermKind::Free(n) => out.push_str(n),
            _ => unreachable!("atom called on a compound term"),
        }
    }
}

pub fn print_type(t: &Type) -> String {
    let avoid: BTreeSet<String> = t.free_vars().iter().map(|n| n.to_string()).collect();
    let mut out = String::new();
    TypePrinter {
        avoid: &avoid,
        scope: Vec::new(),
    }
    .top(t, &mut out);
    out
}

struct TypePrinter<'a> {
    avoid: &'a BTreeSet<String>,
    scope: Vec<String>,
}

impl TypePrinter<'_> {
    fn fresh(&self, hint: &str) -> String {
        let mut name = if hint.is_empty() {
            "X".to_string()
        } else {
            hint.to_string()
        };
        while self.avoid.contains(&name) || self.scope.contains(&name) {
            name.push('\'');
        }
        name
    }

    fn top(&mut self, t: &Type, out: &mut String) {
        if let TypeKind::Forall(..) = t.kind() {
            let mut cur = t.clone();
            let mut names = Vec::new();
            while let TypeKind::Forall(h, b) = cur.kind() {
                let name = self.fresh(h);
                self.scope.push(name.clone());
                names.push(name);
                let b = b.clone();
                cur = b;
            }
            out.push_str("forall ");
            out.push_str(&names.join(" "));
            out.push_str(". ");
            self.top(&cur, out);
            self.scope.truncate(self.scope.len() - names.len());
        } else {
            self.arrow(t, out);
        }
    }

    fn arrow(&mut self, t: &Type, out: &mut String) {
        match t.kind() {
            TypeKind::Arrow(a, b) if !matches!(b.kind(), TypeKind::Bottom) => {
                self.atom(a, out);
                out.push_str(" -> ");
                self.arrow(b, out);
            }
            _ => self.atom(t, out),
        }
    }

    fn atom(&mut self, t: &Type, out: &mut String) {
        match t.kind() {
            TypeKind::Bound(i) => {
                let i = *i as usize;
                match self.scope.len().checked_sub(i + 1) {
                    Some(k) => out.push_str(&self.scope[k]),
                    None => out.push_str(&format!("#{i}")),
                }
            }
            TypeKind::Var(n) => out.push_str(n),
            TypeKind::Bottom => out.push_str("bot"),
            TypeKind::Arrow(a, b) if matches!(b.kind(), TypeKind::Bottom) => {
                out.push('~');
                self.atom(a, out);
            }
            TypeKind::Arrow(..) | TypeKind::Forall(..) => {
                out.push('(');
                self.top(t, out);
                out.push(')');
            }
        }
    }
}

pub fn print_typed(t: &TypedTerm) -> String {
    let avoid: BTreeSet<String> = t
        .erase()
        .free_vars()
        .iter()
        .map(|n| n.to_string())
        .collect();
    let mut out = String::new();
    TypedPrinter {
        avoid: &avoid,
        scope: Vec::new(),
    }
    .top(t, &mut out);
    out
}

struct TypedPrinter<'a> {
    avoid: &'a BTreeSet<String>,
    scope: Vec<String>,
}

impl TypedPrinter<'_> {
    fn binder_name(&self, hint: &str) -> String {
        let mut name = if hint.is_empty() {
            "x".to_string()
        } else {
            hint.to_string()
        };
        while self.avoid.contains(&name) || self.scope.contains(&name) {
            name.push('\'');
        }
        name
    }

    fn top(&mut self, t: &TypedTerm, out: &mut String) {
        match t.kind() {
            TypedKind::Lam(h, a, b) => {
                let name = self.binder_name(h);
                out.push('\\');
                out.push_str(&name);
                out.push(':');
                out.push_str(&print_type(a));
                out.push_str(". ");
                self.scope.push(name);
                self.top(b, out);
                self.scope.pop();
            }
            TypedKind::TyLam(x, b) => {
                out.push_str("/\\");
                out.push_str(x);
                out.push_str(". ");
                self.top(b, out);
            }
            TypedKind::App(..) | TypedKind::TyApp(..) => self.spine(t, out),
            _ => self.atom(t, out),
        }
    }

    fn spine(&mut self, t: &TypedTerm, out: &mut String) {
        match t.kind() {
            TypedKind::App(f, a) => {
                self.spine(f, out);
                out.push(' ');
                self.atom(a, out);
            }
            TypedKind::TyApp(f, g) => {
                self.spine(f, out);
                out.push_str(" [");
                out.push_str(&print_type(g));
                out.push(']');
            }
            _ => self.atom(t, out),
        }
    }

    fn atom(&mut self, t: &TypedTerm, out: &mut String) {
        match t.kind() {
            TypedKind::Bound(i) => {
                let i = *i as usize;
                match self.scope.len().checked_sub(i + 1) {
                    Some(k) => out.push_str(&self.scope[k]),
                    None => out.push_str(&format!("#{i}")),
                }
            }
            TypedKind::Free(n) => out.push_str(n),
            _ => {
                out.push('(');
                self.top(t, out);
                out.push(')');
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_true() {
        let t = parse_term(r"\x.\y.x").unwrap();
        assert_eq!(t, Term::lams(&["x", "y"], Term::var("x")));
        assert_eq!(print_term(&t), r"\x.\y.x");
        assert_eq!(parse_term(r"\x y.x").unwrap(), t);
    }

    #[test]
    fn self_application_under_binder() {
        let t = parse_term(r"\x.x x").unwrap();
        assert_eq!(t, Term::lam("x", Term::app(Term::var("x"), Term::var("x"))));
    }

    #[test]
    fn church_two() {
        let t = parse_term(r"(\x.\f. f (f x))").unwrap();
        assert_eq!(t, zoo::church(2));
        assert_eq!(parse_term("2").unwrap(), t);
        assert_eq!(print_term(&zoo::church(0)), r"\x.\f.x");
    }

    #[test]
    fn pair_printing_reuses_unreferenced_names() {
        let pair = parse_term(r"\x.x (\x.\y.x) (\x.\y.y)").unwrap();
        assert_eq!(print_term(&pair), r"\x.x (\x.\y.x) (\x.\y.y)");
    }

    #[test]
    fn printing_renames_to_avoid_capture() {
        let t = Term::lam("y", Term::var("x")).substitute("x", &Term::var("y"));
        assert_eq!(print_term(&t), r"\y'.y");
        let nested = parse_term(r"\x.\x'.\x.x x' x'").unwrap();
        assert_eq!(parse_term(&print_term(&nested)).unwrap(), nested);
    }

    #[test]
    fn application_is_left_associative() {
        let t = parse_term("a b c").unwrap();
        assert_eq!(
            t,
            Term::app(Term::app(Term::var("a"), Term::var("b")), Term::var("c"))
        );
        assert_eq!(print_term(&parse_term("a (b c)").unwrap()), "a (b c)");
    }

    #[test]
    fn comments_and_errors() {
        assert_eq!(parse_term("x # trailing").unwrap(), Term::var("x"));
        let e = parse_term("\\x. (x").unwrap_err();
        assert_eq!(e.line, 1);
        let e = parse_term("a\n  )").unwrap_err();
        assert_eq!((e.line, e.col), (2, 3));
        assert!(parse_term("").is_err());
        assert!(parse_term("\\ . x").is_err());
    }

    #[test]
    fn strict_mode_rejects_free_names() {
        let scope = Scope {
            strict_closed: true,
            ..Scope::default()
        };
        assert!(parse_term_in(r"\x.y", &scope).is_err());
        assert!(parse_term_in(r"\x.x", &scope).is_ok());
    }

    #[test]
    fn types() {
        let id = parse_type("forall X. X -> X").unwrap();
        assert_eq!(
            id,
            Type::forall("X", Type::arrow(Type::var("X"), Type::var("X")))
        );
        assert_eq!(print_type(&id), "forall X. X -> X");
        let n = parse_type("forall X. X -> (X -> X) -> X").unwrap();
        assert_eq!(n, zoo::nat_type());
        assert_eq!(parse_type("~X").unwrap(), Type::not(Type::var("X")));
        assert_eq!(print_type(&Type::not(Type::var("X"))), "~X");
        assert_eq!(print_type(&Type::bottom()), "bot");
        let p = parse_type("forall X Y. ((X -> Y) -> X) -> X").unwrap();
        assert_eq!(print_type(&p), "forall X Y. ((X -> Y) -> X) -> X");
        let q = parse_type("~(A -> B) -> ~~A").unwrap();
        assert_eq!(parse_type(&print_type(&q)).unwrap(), q);
    }

    #[test]
    fn typed_terms() {
        let t = parse_typed(r"/\X. \x:X. \y:X. x").unwrap();
        assert_eq!(t.erase(), Term::lams(&["x", "y"], Term::var("x")));
        let printed = print_typed(&t);
        assert_eq!(printed, r"/\X. \x:X. \y:X. x");
        let app = parse_typed(r"(/\X. \x:X. x) [forall Y. Y] z").unwrap();
        assert_eq!(print_typed(&app), r"(/\X. \x:X. x) [forall Y. Y] z");
        let multi = parse_typed(r"\x:X y:~X. y x").unwrap();
        assert_eq!(multi.erase(), parse_term(r"\x y. y x").unwrap());
    }
}
