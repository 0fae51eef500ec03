use super::ast::*;
use super::lexer::{lex, Tok, Token};
use super::{Diagnostic, DiagnosticKind};
use crate::algebra::{Field, OrderKind};

pub(crate) const VERSION: u32 = 1;

type PResult<T> = Result<T, Diagnostic>;

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token>,
    at: usize,
}

/// Parses the header and statements, recovering at `;` after a syntax error.
pub(crate) fn parse_syntax(src: &str) -> Result<SessionAst, Vec<Diagnostic>> {
    let version = header(src).map_err(|d| vec![d])?;
    let toks = lex(src).map_err(|d| vec![d])?;
    let mut p = Parser { src, toks, at: 0 };
    let mut decls = Vec::new();
    let mut diags = Vec::new();
    while p.peek() != &Tok::Eof {
        match p.statement() {
            Ok(d) => decls.push(d),
            Err(d) => {
                diags.push(d);
                p.recover();
            }
        }
    }
    if diags.is_empty() {
        Ok(SessionAst { version, decls })
    } else {
        Err(diags)
    }
}

fn header(src: &str) -> PResult<u32> {
    let Some(first) = src.lines().next() else { return Ok(VERSION) };
    let Some(rest) = first.strip_prefix("#!") else { return Ok(VERSION) };
    let words: Vec<&str> = rest.split_whitespace().collect();
    let version = match words.as_slice() {
        ["stablehom", v] => v.parse::<u32>().ok(),
        _ => None,
    };
    match version {
        Some(VERSION) => Ok(VERSION),
        _ => Err(Diagnostic {
            kind: DiagnosticKind::SyntaxError,
            pos: Pos { line: 1, col: 1 },
            message: format!("unsupported header `{}`", first.trim()),
            expected: vec![format!("`#! stablehom {VERSION}`")],
        }),
    }
}

fn syntax(pos: Pos, message: String, expected: &[&str]) -> Diagnostic {
    Diagnostic {
        kind: DiagnosticKind::SyntaxError,
        pos,
        message,
        expected: expected.iter().map(|s| s.to_string()).collect(),
    }
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn token(&self) -> &Token {
        &self.toks[self.at]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if t.tok != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn recover(&mut self) {
        loop {
            match self.bump().tok {
                Tok::Sym(";") | Tok::Eof => return,
                _ => {}
            }
        }
    }

    fn unexpected(&self, expected: &[&str]) -> Diagnostic {
        let t = self.token();
        syntax(t.pos, format!("unexpected {}", t.tok.describe()), expected)
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(t) if *t == s)
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(t) if t == w)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        let hit = self.is_sym(s);
        if hit {
            self.bump();
        }
        hit
    }

    fn sym(&mut self, s: &'static str) -> PResult<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.unexpected(&[&format!("`{s}`")]))
        }
    }

    fn word(&mut self, w: &'static str) -> PResult<()> {
        if self.is_word(w) {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&[&format!("`{w}`")]))
        }
    }

    fn ident(&mut self) -> PResult<Ident> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let pos = self.bump().pos;
                Ok(Ident { name, pos })
            }
            _ => Err(self.unexpected(&["identifier"])),
        }
    }

    fn int(&mut self) -> PResult<i64> {
        let neg = self.eat_sym("-");
        match self.peek().clone() {
            Tok::Int(n) => {
                let t = self.bump();
                let v = i64::try_from(n).map_err(|_| syntax(t.pos, "integer literal out of range".into(), &[]))?;
                Ok(if neg { -v } else { v })
            }
            _ => Err(self.unexpected(&["integer"])),
        }
    }

    fn small_int(&mut self) -> PResult<i32> {
        let pos = self.token().pos;
        let v = self.int()?;
        i32::try_from(v).map_err(|_| syntax(pos, format!("integer {v} out of range"), &[]))
    }

    fn int_list(&mut self) -> PResult<Vec<i32>> {
        self.sym("[")?;
        let mut out = Vec::new();
        if self.eat_sym("]") {
            return Ok(out);
        }
        loop {
            out.push(self.small_int()?);
            if self.eat_sym("]") {
                return Ok(out);
            }
            if !self.eat_sym(",") {
                return Err(self.unexpected(&["`,`", "`]`"]));
            }
        }
    }

    /// A polynomial is the token run up to a `,` or closing bracket at depth 0.
    fn poly(&mut self) -> PResult<PolyText> {
        let first = self.token().clone();
        let mut depth = 0usize;
        let mut end = first.start;
        loop {
            match self.peek() {
                Tok::Eof | Tok::Sym(";") => break,
                Tok::Sym(",") | Tok::Sym("]") if depth == 0 => break,
                Tok::Sym(")") if depth == 0 => break,
                Tok::Sym("(") => depth += 1,
                Tok::Sym(")") => depth -= 1,
                _ => {}
            }
            end = self.bump().end;
        }
        if end == first.start {
            return Err(self.unexpected(&["polynomial"]));
        }
        let text: String = self.src[first.start..end].chars().filter(|c| !c.is_whitespace()).collect();
        Ok(PolyText { text, pos: first.pos })
    }

    fn poly_list(&mut self, close: &'static str) -> PResult<Vec<PolyText>> {
        let mut out = Vec::new();
        if self.eat_sym(close) {
            return Ok(out);
        }
        loop {
            out.push(self.poly()?);
            if self.eat_sym(close) {
                return Ok(out);
            }
            if !self.eat_sym(",") {
                return Err(self.unexpected(&["`,`", &format!("`{close}`")]));
            }
        }
    }

    fn poly_rows(&mut self) -> PResult<Vec<Vec<PolyText>>> {
        self.sym("[")?;
        let mut rows = Vec::new();
        if self.eat_sym("]") {
            return Ok(rows);
        }
        loop {
            self.sym("[")?;
            rows.push(self.poly_list("]")?);
            if self.eat_sym("]") {
                return Ok(rows);
            }
            if !self.eat_sym(",") {
                return Err(self.unexpected(&["`,`", "`]`"]));
            }
        }
    }

    fn statement(&mut self) -> PResult<Decl> {
        let kw = match self.peek() {
            Tok::Ident(w) => w.clone(),
            _ => return Err(self.unexpected(&["`ring`", "`module`", "`map`", "`query`"])),
        };
        let decl = match kw.as_str() {
            "ring" => Decl::Ring(self.ring()?),
            "module" => Decl::Module(self.module()?),
            "map" => Decl::Map(self.map()?),
            "query" => Decl::Query(self.query()?),
            _ => return Err(self.unexpected(&["`ring`", "`module`", "`map`", "`query`"])),
        };
        self.sym(";")?;
        Ok(decl)
    }

    fn ring(&mut self) -> PResult<RingDecl> {
        self.word("ring")?;
        let name = self.ident()?;
        self.sym("=")?;
        let field_tok = self.ident()?;
        let field = match field_tok.name.as_str() {
            "QQ" => Field::Rationals,
            "GF" => {
                self.sym("(")?;
                let pos = self.token().pos;
                let p = self.int()?;
                self.sym(")")?;
                Field::prime(p.max(0) as u64).map_err(|e| Diagnostic {
                    kind: DiagnosticKind::InvalidValue,
                    pos,
                    message: e.to_string(),
                    expected: Vec::new(),
                })?
            }
            _ => return Err(syntax(field_tok.pos, format!("unknown field `{}`", field_tok.name), &["`QQ`", "`GF`"])),
        };
        self.sym("[")?;
        let mut vars = vec![self.ident()?];
        while self.eat_sym(",") {
            vars.push(self.ident()?);
        }
        self.sym("]")?;
        let ideal = if self.eat_sym("/") {
            self.sym("(")?;
            self.poly_list(")")?
        } else {
            Vec::new()
        };
        let mut decl = RingDecl { name, field, vars, ideal, order: OrderKind::DegRevLex, weights: None, gorenstein: false };
        while let Tok::Ident(w) = self.peek().clone() {
            match w.as_str() {
                "grevlex" => decl.order = OrderKind::DegRevLex,
                "glex" => decl.order = OrderKind::DegLex,
                "gorenstein" => decl.gorenstein = true,
                "weights" => {
                    self.bump();
                    let pos = self.token().pos;
                    let w = self.int_list()?;
                    if w.iter().any(|&x| x < 1) {
                        return Err(Diagnostic {
                            kind: DiagnosticKind::InvalidValue,
                            pos,
                            message: "weights must be positive".into(),
                            expected: Vec::new(),
                        });
                    }
                    decl.weights = Some(w.into_iter().map(|x| x as u32).collect());
                    continue;
                }
                _ => return Err(self.unexpected(&["`grevlex`", "`glex`", "`weights`", "`gorenstein`", "`;`"])),
            }
            self.bump();
        }
        Ok(decl)
    }

    fn over(&mut self) -> PResult<Option<Ident>> {
        if self.is_word("over") {
            self.bump();
            Ok(Some(self.ident()?))
        } else {
            Ok(None)
        }
    }

    fn module(&mut self) -> PResult<ModuleDecl> {
        self.word("module")?;
        let name = self.ident()?;
        let ring = self.over()?;
        self.sym("=")?;
        let body = if self.is_word("coker") {
            self.bump();
            self.word("gens")?;
            let gens = self.int_list()?;
            self.word("rels")?;
            let rels = self.poly_rows()?;
            ModuleBody::Coker { gens, rels }
        } else if self.is_word("free") {
            self.bump();
            ModuleBody::Free { gens: self.int_list()? }
        } else if self.is_word("sum") {
            self.bump();
            self.sym("[")?;
            let mut parts = vec![self.ident()?];
            while self.eat_sym(",") {
                parts.push(self.ident()?);
            }
            self.sym("]")?;
            ModuleBody::Sum(parts)
        } else {
            ModuleBody::Expr(self.application()?)
        };
        Ok(ModuleDecl { name, ring, body })
    }

    fn map(&mut self) -> PResult<MapDecl> {
        self.word("map")?;
        let name = self.ident()?;
        let ring = self.over()?;
        let body = if self.eat_sym(":") {
            let source = self.ident()?;
            self.sym("->")?;
            let target = self.ident()?;
            self.sym("=")?;
            MapBody::Matrix { source, target, images: self.poly_rows()? }
        } else if self.eat_sym("=") {
            MapBody::Expr(self.application()?)
        } else {
            return Err(self.unexpected(&["`:`", "`=`"]));
        };
        Ok(MapDecl { name, ring, body })
    }

    fn query(&mut self) -> PResult<QueryDecl> {
        self.word("query")?;
        let op = self.ident()?;
        let args = self.args()?;
        let mut options = Vec::new();
        if self.is_word("with") {
            self.bump();
            loop {
                let key = self.ident()?;
                let value = if self.eat_sym("=") {
                    let lo = self.int()?;
                    if self.eat_sym("..") {
                        let pos = self.token().pos;
                        let hi = self.int()?;
                        let range = i32::try_from(lo).ok().zip(i32::try_from(hi).ok());
                        let (lo, hi) = range.ok_or_else(|| syntax(pos, "window bound out of range".into(), &[]))?;
                        Some(OptValue::Range(lo, hi))
                    } else {
                        Some(OptValue::Int(lo))
                    }
                } else {
                    None
                };
                options.push(QueryOption { key, value });
                if !self.eat_sym(",") {
                    break;
                }
            }
        }
        Ok(QueryDecl { op, args, options })
    }

    fn args(&mut self) -> PResult<Vec<Expr>> {
        let mut args = Vec::new();
        loop {
            match self.peek() {
                Tok::Ident(w) if w != "with" => args.push(Expr::Name(self.ident()?)),
                Tok::Int(_) | Tok::Sym("-") => {
                    let pos = self.token().pos;
                    args.push(Expr::Int(self.int()?, pos));
                }
                Tok::Sym("(") => {
                    self.bump();
                    let e = self.application()?;
                    self.sym(")")?;
                    args.push(e);
                }
                _ => return Ok(args),
            }
        }
    }

    /// `op arg*`, or a parenthesised application, or a bare name.
    fn application(&mut self) -> PResult<Expr> {
        if self.eat_sym("(") {
            let e = self.application()?;
            self.sym(")")?;
            return Ok(e);
        }
        let op = self.ident()?;
        let args = self.args()?;
        if args.is_empty() {
            Ok(Expr::Name(op))
        } else {
            Ok(Expr::Apply { op, args })
        }
    }
}
