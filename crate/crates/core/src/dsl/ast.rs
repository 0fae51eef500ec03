//! Session syntax tree. `Display` prints the canonical form, which parses
//! back to the same tree.

use std::fmt;

use serde::Serialize;

use crate::algebra::{Field, OrderKind};

/// 1-based source position.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ident {
    pub name: String,
    pub pos: Pos,
}

/// Polynomial source text with whitespace removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyText {
    pub text: String,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingDecl {
    pub name: Ident,
    pub field: Field,
    pub vars: Vec<Ident>,
    pub ideal: Vec<PolyText>,
    pub order: OrderKind,
    pub weights: Option<Vec<u32>>,
    pub gorenstein: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleBody {
    /// Each inner list is one relation, written in the generators.
    Coker { gens: Vec<i32>, rels: Vec<Vec<PolyText>> },
    Free { gens: Vec<i32> },
    Sum(Vec<Ident>),
    Expr(Expr),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleDecl {
    pub name: Ident,
    pub ring: Option<Ident>,
    pub body: ModuleBody,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapBody {
    /// Each inner list is the image of one source generator, written in the
    /// target generators.
    Matrix { source: Ident, target: Ident, images: Vec<Vec<PolyText>> },
    Expr(Expr),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapDecl {
    pub name: Ident,
    pub ring: Option<Ident>,
    pub body: MapBody,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Name(Ident),
    Int(i64, Pos),
    Apply { op: Ident, args: Vec<Expr> },
}

impl Expr {
    pub fn pos(&self) -> Pos {
        match self {
            Expr::Name(id) | Expr::Apply { op: id, .. } => id.pos,
            Expr::Int(_, pos) => *pos,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OptValue {
    Int(i64),
    Range(i32, i32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryOption {
    pub key: Ident,
    pub value: Option<OptValue>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryDecl {
    pub op: Ident,
    pub args: Vec<Expr>,
    pub options: Vec<QueryOption>,
}

impl QueryDecl {
    pub fn flag(&self, key: &str) -> bool {
        self.options.iter().any(|o| o.key.name == key)
    }

    pub fn option(&self, key: &str) -> Option<&OptValue> {
        self.options.iter().find(|o| o.key.name == key).and_then(|o| o.value.as_ref())
    }

    /// The query as written, without options.
    pub fn echo(&self) -> String {
        let mut s = self.op.name.clone();
        for a in &self.args {
            s.push(' ');
            s.push_str(&a.to_string());
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decl {
    Ring(RingDecl),
    Module(ModuleDecl),
    Map(MapDecl),
    Query(QueryDecl),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SessionAst {
    pub version: u32,
    pub decls: Vec<Decl>,
}

impl SessionAst {
    pub fn queries(&self) -> impl Iterator<Item = &QueryDecl> {
        self.decls.iter().filter_map(|d| match d {
            Decl::Query(q) => Some(q),
            _ => None,
        })
    }
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn fmt_rows(rows: &[Vec<PolyText>]) -> String {
    let inner: Vec<String> = rows.iter().map(|r| format!("[{}]", join(r))).collect();
    format!("[{}]", inner.join(", "))
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl fmt::Display for PolyText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Name(id) => write!(f, "{id}"),
            Expr::Int(n, _) => write!(f, "{n}"),
            Expr::Apply { .. } => write!(f, "({})", TopLevel(self)),
        }
    }
}

/// An expression printed without its outer parentheses.
struct TopLevel<'a>(&'a Expr);

impl fmt::Display for TopLevel<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Expr::Apply { op, args } => {
                write!(f, "{op}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                Ok(())
            }
            other => write!(f, "{other}"),
        }
    }
}

impl fmt::Display for OptValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OptValue::Int(n) => write!(f, "{n}"),
            OptValue::Range(lo, hi) => write!(f, "{lo}..{hi}"),
        }
    }
}

impl fmt::Display for QueryOption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Some(v) => write!(f, "{} = {v}", self.key),
            None => write!(f, "{}", self.key),
        }
    }
}

fn over(ring: &Option<Ident>) -> String {
    ring.as_ref().map(|r| format!(" over {r}")).unwrap_or_default()
}

impl fmt::Display for Decl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decl::Ring(r) => {
                let vars: Vec<&str> = r.vars.iter().map(|v| v.name.as_str()).collect();
                write!(f, "ring {} = {}[{}]", r.name, r.field, vars.join(","))?;
                if !r.ideal.is_empty() {
                    write!(f, "/({})", join(&r.ideal))?;
                }
                f.write_str(match r.order {
                    OrderKind::DegRevLex => " grevlex",
                    OrderKind::DegLex => " glex",
                })?;
                if let Some(w) = &r.weights {
                    write!(f, " weights [{}]", join(w))?;
                }
                if r.gorenstein {
                    f.write_str(" gorenstein")?;
                }
                f.write_str(";")
            }
            Decl::Module(m) => {
                write!(f, "module {}{} = ", m.name, over(&m.ring))?;
                match &m.body {
                    ModuleBody::Coker { gens, rels } => write!(f, "coker gens [{}] rels {}", join(gens), fmt_rows(rels))?,
                    ModuleBody::Free { gens } => write!(f, "free [{}]", join(gens))?,
                    ModuleBody::Sum(parts) => write!(f, "sum [{}]", join(parts))?,
                    ModuleBody::Expr(e) => write!(f, "{}", TopLevel(e))?,
                }
                f.write_str(";")
            }
            Decl::Map(m) => {
                match &m.body {
                    MapBody::Matrix { source, target, images } => {
                        write!(f, "map {}{} : {source} -> {target} = {}", m.name, over(&m.ring), fmt_rows(images))?
                    }
                    MapBody::Expr(e) => write!(f, "map {}{} = {}", m.name, over(&m.ring), TopLevel(e))?,
                }
                f.write_str(";")
            }
            Decl::Query(q) => {
                write!(f, "query {}", q.echo())?;
                if !q.options.is_empty() {
                    write!(f, " with {}", join(&q.options))?;
                }
                f.write_str(";")
            }
        }
    }
}

impl fmt::Display for SessionAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "#! stablehom {}", self.version)?;
        for d in &self.decls {
            writeln!(f, "{d}")?;
        }
        Ok(())
    }
}
