use super::ast::Pos;
use super::{Diagnostic, DiagnosticKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Int(u64),
    Sym(&'static str),
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::Eof => "end of input".to_string(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub pos: Pos,
    /// Byte range in the source.
    pub start: usize,
    pub end: usize,
}

const SYMBOLS: [&str; 15] = ["->", "..", "[", "]", "(", ")", ",", ";", "=", ":", "*", "+", "-", "^", "/"];

pub(crate) fn lex(src: &str) -> Result<Vec<Token>, Diagnostic> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, n: usize| {
        for &b in &bytes[*i..*i + n] {
            if b == b'\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
        }
        *i += n;
    };
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            advance(&mut i, &mut line, &mut col, 1);
            continue;
        }
        if c == b'#' {
            let n = bytes[i..].iter().position(|&b| b == b'\n').unwrap_or(bytes.len() - i);
            advance(&mut i, &mut line, &mut col, n);
            continue;
        }
        let pos = Pos { line, col };
        let start = i;
        if c.is_ascii_alphabetic() || c == b'_' {
            let n = bytes[i..].iter().position(|b| !(b.is_ascii_alphanumeric() || *b == b'_')).unwrap_or(bytes.len() - i);
            advance(&mut i, &mut line, &mut col, n);
            out.push(Token { tok: Tok::Ident(src[start..i].to_string()), pos, start, end: i });
            continue;
        }
        if c.is_ascii_digit() {
            let n = bytes[i..].iter().position(|b| !b.is_ascii_digit()).unwrap_or(bytes.len() - i);
            advance(&mut i, &mut line, &mut col, n);
            let value = src[start..i].parse::<u64>().map_err(|_| Diagnostic {
                kind: DiagnosticKind::SyntaxError,
                pos,
                message: "integer literal out of range".to_string(),
                expected: Vec::new(),
            })?;
            out.push(Token { tok: Tok::Int(value), pos, start, end: i });
            continue;
        }
        match SYMBOLS.iter().find(|s| src[i..].starts_with(**s)) {
            Some(s) => {
                advance(&mut i, &mut line, &mut col, s.len());
                out.push(Token { tok: Tok::Sym(s), pos, start, end: i });
            }
            None => {
                return Err(Diagnostic {
                    kind: DiagnosticKind::SyntaxError,
                    pos,
                    message: format!("unexpected character `{}`", src[i..].chars().next().unwrap_or('?')),
                    expected: Vec::new(),
                })
            }
        }
    }
    out.push(Token { tok: Tok::Eof, pos: Pos { line, col }, start: bytes.len(), end: bytes.len() });
    Ok(out)
}
