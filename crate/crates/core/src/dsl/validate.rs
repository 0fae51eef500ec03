use std::collections::BTreeMap;
use std::sync::Arc;

use super::ast::*;
use super::{Diagnostic, DiagnosticKind};
use crate::error::Error;
use crate::fmod::Presentation;
use crate::matrix::Matrix;
use crate::ring::{make_ring, RingCtx, RingSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Module,
    Map,
    Int,
}

impl Kind {
    fn noun(self) -> &'static str {
        match self {
            Kind::Module => "a module",
            Kind::Map => "a map",
            Kind::Int => "an integer",
        }
    }
}

use Kind::{Int, Map, Module};

/// Operators usable inside expressions, with argument kinds and result kind.
/// `dual` is handled separately since it accepts either kind.
pub const EXPR_OPS: &[(&str, &[Kind], Kind)] = &[
    ("transpose", &[Module], Module),
    ("syzygy", &[Module, Int], Module),
    ("ext", &[Module, Int], Module),
    ("j2", &[Module], Module),
    ("psi", &[Module], Map),
    ("natural", &[Module, Int], Map),
    ("kerincl", &[Map], Map),
    ("cokerproj", &[Map], Map),
    ("pseudoker", &[Map], Module),
    ("pseudocoker", &[Map], Module),
    ("thetainj", &[Map], Map),
    ("thetasurj", &[Map], Map),
    ("source", &[Map], Module),
    ("target", &[Map], Module),
];

/// Query operators and their argument kinds.
pub const QUERY_OPS: &[(&str, &[Kind])] = &[
    ("resolve", &[Module, Int]),
    ("transpose", &[Module]),
    ("syzygy", &[Module, Int]),
    ("ext", &[Module, Int]),
    ("torsionless", &[Module]),
    ("j2", &[Module]),
    ("psi", &[Module]),
    ("ext_dual_vanishes", &[Module]),
    ("pseudoker", &[Map]),
    ("pseudocoker", &[Map]),
    ("is_rbm", &[Map]),
    ("theta", &[Map]),
    ("perfect", &[Map, Map]),
    ("report", &[Map]),
    ("stable_iso", &[Map, Map]),
];

const QUERY_FLAGS: &[&str] = &["verify"];
const QUERY_RANGES: &[&str] = &["window"];

/// Turns a declared ring into a context.
pub fn ring_spec(decl: &RingDecl) -> RingSpec {
    RingSpec {
        field: decl.field,
        vars: decl.vars.iter().map(|v| v.name.clone()).collect(),
        order: decl.order,
        weights: decl.weights.clone(),
        ideal: decl.ideal.iter().map(|p| p.text.clone()).collect(),
        gorenstein_fractions: decl.gorenstein,
        max_degree: None,
    }
}

/// Builds the matrix whose columns are `cols`, each of length `rows`.
pub fn column_matrix(ctx: &Arc<RingCtx>, rows: usize, cols: &[Vec<PolyText>]) -> crate::Result<Matrix> {
    let mut m = ctx.zeros(rows, cols.len());
    for (j, col) in cols.iter().enumerate() {
        for (i, entry) in col.iter().enumerate() {
            m.set(i, j, ctx.parse(&entry.text)?);
        }
    }
    Ok(m)
}

struct Scope {
    rings: BTreeMap<String, Arc<RingCtx>>,
    /// Module name to ring name and, when syntactically known, generator degrees.
    modules: BTreeMap<String, (String, Option<Vec<i32>>)>,
    maps: BTreeMap<String, String>,
    current: Option<String>,
    diags: Vec<Diagnostic>,
}

fn diag(kind: DiagnosticKind, pos: Pos, message: impl Into<String>) -> Diagnostic {
    Diagnostic { kind, pos, message: message.into(), expected: Vec::new() }
}

pub(crate) fn validate(ast: &SessionAst) -> Vec<Diagnostic> {
    let mut s = Scope { rings: BTreeMap::new(), modules: BTreeMap::new(), maps: BTreeMap::new(), current: None, diags: Vec::new() };
    for d in &ast.decls {
        match d {
            Decl::Ring(r) => s.ring(r),
            Decl::Module(m) => s.module(m),
            Decl::Map(m) => s.map(m),
            Decl::Query(q) => s.query(q),
        }
    }
    s.diags
}

impl Scope {
    fn ring(&mut self, r: &RingDecl) {
        if self.rings.contains_key(&r.name.name) {
            self.diags.push(diag(DiagnosticKind::DuplicateName, r.name.pos, format!("ring `{}` is already declared", r.name.name)));
            return;
        }
        for (i, v) in r.vars.iter().enumerate() {
            if r.vars[..i].iter().any(|w| w.name == v.name) {
                self.diags.push(diag(DiagnosticKind::DuplicateName, v.pos, format!("variable `{}` is repeated", v.name)));
                return;
            }
        }
        if let Some(w) = &r.weights {
            if w.len() != r.vars.len() {
                self.diags.push(diag(
                    DiagnosticKind::ShapeMismatch,
                    r.name.pos,
                    format!("{} weights given for {} variables", w.len(), r.vars.len()),
                ));
                return;
            }
        }
        match make_ring(ring_spec(r)) {
            Ok(ctx) => {
                self.rings.insert(r.name.name.clone(), ctx);
                self.current = Some(r.name.name.clone());
            }
            Err(e) => {
                let (kind, pos) = match &e {
                    Error::InhomogeneousIdeal { index, .. } => (DiagnosticKind::InhomogeneousEntry, r.ideal[*index].pos),
                    Error::PolySyntax { .. } | Error::UnknownVariable { .. } => {
                        let pos = r.ideal.iter().find(|p| ctx_free_parse_fails(r, p)).map(|p| p.pos).unwrap_or(r.name.pos);
                        (poly_error_kind(&e), pos)
                    }
                    _ => (DiagnosticKind::InvalidValue, r.name.pos),
                };
                self.diags.push(diag(kind, pos, e.to_string()));
            }
        }
    }

    fn ring_for(&mut self, over: &Option<Ident>, at: Pos) -> Option<String> {
        match over {
            Some(r) if self.rings.contains_key(&r.name) => Some(r.name.clone()),
            Some(r) => {
                self.diags.push(diag(DiagnosticKind::UnknownIdentifier, r.pos, format!("unknown ring `{}`", r.name)));
                None
            }
            None if self.current.is_some() => self.current.clone(),
            None => {
                self.diags.push(diag(DiagnosticKind::UnknownIdentifier, at, "no ring has been declared"));
                None
            }
        }
    }

    fn module(&mut self, m: &ModuleDecl) {
        if self.modules.contains_key(&m.name.name) {
            self.diags.push(diag(DiagnosticKind::DuplicateName, m.name.pos, format!("module `{}` is already declared", m.name.name)));
            return;
        }
        let Some(ring) = self.ring_for(&m.ring, m.name.pos) else { return };
        let ctx = self.rings[&ring].clone();
        let gens = match &m.body {
            ModuleBody::Free { gens } => Some(gens.clone()),
            ModuleBody::Coker { gens, rels } => {
                if !self.check_columns(&ctx, gens.len(), rels, "relation") {
                    return;
                }
                match column_matrix(&ctx, gens.len(), rels).and_then(|mat| Presentation::new(&ctx, gens.clone(), mat)) {
                    Ok(_) => Some(gens.clone()),
                    Err(e) => {
                        self.entry_error(e, rels, m.name.pos);
                        return;
                    }
                }
            }
            ModuleBody::Sum(parts) => {
                let mut all = Vec::new();
                let mut known = true;
                for p in parts {
                    match self.modules.get(&p.name) {
                        Some((r, g)) if *r == ring => match g {
                            Some(g) => all.extend(g.iter().copied()),
                            None => known = false,
                        },
                        Some(_) => {
                            self.diags.push(diag(DiagnosticKind::TypeMismatch, p.pos, format!("`{}` lives over another ring", p.name)));
                            return;
                        }
                        None => {
                            self.diags.push(diag(DiagnosticKind::UnknownIdentifier, p.pos, format!("unknown module `{}`", p.name)));
                            return;
                        }
                    }
                }
                known.then_some(all)
            }
            ModuleBody::Expr(e) => {
                if self.expect(e, Module, &ring).is_none() {
                    return;
                }
                match e {
                    Expr::Name(n) => self.modules.get(&n.name).and_then(|(_, g)| g.clone()),
                    _ => None,
                }
            }
        };
        self.modules.insert(m.name.name.clone(), (ring, gens));
    }

    fn map(&mut self, m: &MapDecl) {
        if self.maps.contains_key(&m.name.name) {
            self.diags.push(diag(DiagnosticKind::DuplicateName, m.name.pos, format!("map `{}` is already declared", m.name.name)));
            return;
        }
        let Some(ring) = self.ring_for(&m.ring, m.name.pos) else { return };
        match &m.body {
            MapBody::Matrix { source, target, images } => {
                let mut ends = Vec::new();
                for id in [source, target] {
                    match self.modules.get(&id.name) {
                        Some((r, g)) if *r == ring => ends.push(g.clone()),
                        Some(_) => {
                            self.diags.push(diag(DiagnosticKind::TypeMismatch, id.pos, format!("`{}` lives over another ring", id.name)));
                            return;
                        }
                        None => {
                            self.diags.push(diag(DiagnosticKind::UnknownIdentifier, id.pos, format!("unknown module `{}`", id.name)));
                            return;
                        }
                    }
                }
                let ctx = self.rings[&ring].clone();
                if let (Some(src), Some(tgt)) = (&ends[0], &ends[1]) {
                    if images.len() != src.len() {
                        self.diags.push(diag(
                            DiagnosticKind::ShapeMismatch,
                            m.name.pos,
                            format!("{} images given for {} source generators", images.len(), src.len()),
                        ));
                        return;
                    }
                    if !self.check_columns(&ctx, tgt.len(), images, "image") {
                        return;
                    }
                    self.check_map_degrees(&ctx, src, tgt, images);
                } else {
                    for col in images {
                        for e in col {
                            if let Err(err) = ctx.parse(&e.text) {
                                self.diags.push(diag(poly_error_kind(&err), e.pos, err.to_string()));
                            }
                        }
                    }
                }
            }
            MapBody::Expr(e) => {
                if self.expect(e, Map, &ring).is_none() {
                    return;
                }
            }
        }
        self.maps.insert(m.name.name.clone(), ring);
    }

    fn query(&mut self, q: &QueryDecl) {
        let Some(&(_, sig)) = QUERY_OPS.iter().find(|(n, _)| *n == q.op.name) else {
            let mut d = diag(DiagnosticKind::UnknownIdentifier, q.op.pos, format!("unknown query `{}`", q.op.name));
            d.expected = QUERY_OPS.iter().map(|(n, _)| format!("`{n}`")).collect();
            self.diags.push(d);
            return;
        };
        self.check_args(&q.op, &q.args, sig, None);
        for o in &q.options {
            let ok = match &o.value {
                None => QUERY_FLAGS.contains(&o.key.name.as_str()),
                Some(OptValue::Range(lo, hi)) => QUERY_RANGES.contains(&o.key.name.as_str()) && lo <= &0 && hi >= &0,
                Some(OptValue::Int(_)) => false,
            };
            if !ok {
                let mut d = diag(DiagnosticKind::InvalidValue, o.key.pos, format!("invalid option `{o}`"));
                d.expected = vec!["`verify`".into(), "`window = LO..HI` with LO <= 0 <= HI".into()];
                self.diags.push(d);
            }
        }
    }

    /// Checks `args` against `sig`; all module and map arguments must share
    /// one ring, which is returned.
    fn check_args(&mut self, op: &Ident, args: &[Expr], sig: &[Kind], ring: Option<&str>) -> Option<String> {
        if args.len() != sig.len() {
            self.diags.push(diag(
                DiagnosticKind::TypeMismatch,
                op.pos,
                format!("`{}` takes {} argument(s), found {}", op.name, sig.len(), args.len()),
            ));
            return None;
        }
        let mut ring: Option<String> = ring.map(str::to_string);
        let mut ok = true;
        for (a, &k) in args.iter().zip(sig) {
            if k == Int {
                match a {
                    Expr::Int(n, _) if *n >= 0 => {}
                    _ => {
                        self.diags.push(diag(DiagnosticKind::TypeMismatch, a.pos(), "expected a non-negative integer"));
                        ok = false;
                    }
                }
                continue;
            }
            match self.type_of(a, k) {
                Some(r) => match &ring {
                    Some(prev) if *prev != r => {
                        self.diags.push(diag(DiagnosticKind::TypeMismatch, a.pos(), "arguments live over different rings"));
                        ok = false;
                    }
                    _ => ring = Some(r),
                },
                None => ok = false,
            }
        }
        if ok {
            ring
        } else {
            None
        }
    }

    fn expect(&mut self, e: &Expr, kind: Kind, ring: &str) -> Option<()> {
        let r = self.type_of(e, kind)?;
        if r != ring {
            self.diags.push(diag(DiagnosticKind::TypeMismatch, e.pos(), "expression lives over another ring"));
            return None;
        }
        Some(())
    }

    /// Ring of `e`, given that it must have kind `want`.
    fn type_of(&mut self, e: &Expr, want: Kind) -> Option<String> {
        match e {
            Expr::Int(..) => {
                self.diags.push(diag(DiagnosticKind::TypeMismatch, e.pos(), format!("expected {}, found an integer", want.noun())));
                None
            }
            Expr::Name(id) => {
                let found = match want {
                    Module => self.modules.get(&id.name).map(|(r, _)| r.clone()),
                    _ => self.maps.get(&id.name).cloned(),
                };
                if found.is_none() {
                    let other = match want {
                        Module => self.maps.contains_key(&id.name),
                        _ => self.modules.contains_key(&id.name),
                    };
                    let (kind, msg) = if other {
                        (DiagnosticKind::TypeMismatch, format!("`{}` is not {}", id.name, want.noun()))
                    } else {
                        (DiagnosticKind::UnknownIdentifier, format!("unknown identifier `{}`", id.name))
                    };
                    self.diags.push(diag(kind, id.pos, msg));
                }
                found
            }
            Expr::Apply { op, args } => {
                if op.name == "dual" {
                    return self.check_args(op, args, &[want], None);
                }
                let Some(&(_, sig, result)) = EXPR_OPS.iter().find(|(n, _, _)| *n == op.name) else {
                    let mut d = diag(DiagnosticKind::UnknownIdentifier, op.pos, format!("unknown operator `{}`", op.name));
                    d.expected = EXPR_OPS.iter().map(|(n, _, _)| format!("`{n}`")).chain(["`dual`".to_string()]).collect();
                    self.diags.push(d);
                    return None;
                };
                if result != want {
                    self.diags.push(diag(
                        DiagnosticKind::TypeMismatch,
                        op.pos,
                        format!("`{}` produces {}, expected {}", op.name, result.noun(), want.noun()),
                    ));
                    return None;
                }
                self.check_args(op, args, sig, None)
            }
        }
    }

    fn check_columns(&mut self, ctx: &Arc<RingCtx>, len: usize, cols: &[Vec<PolyText>], what: &str) -> bool {
        let mut ok = true;
        for col in cols {
            if col.len() != len {
                let pos = col.first().map(|p| p.pos).unwrap_or_default();
                self.diags.push(diag(DiagnosticKind::ShapeMismatch, pos, format!("{what} has {} entries, expected {len}", col.len())));
                ok = false;
                continue;
            }
            for e in col {
                if let Err(err) = ctx.parse(&e.text) {
                    self.diags.push(diag(poly_error_kind(&err), e.pos, err.to_string()));
                    ok = false;
                }
            }
        }
        ok
    }

    fn entry_error(&mut self, e: Error, cols: &[Vec<PolyText>], fallback: Pos) {
        match e {
            Error::InhomogeneousEntry { row, col } => {
                let pos = cols.get(col).and_then(|c| c.get(row)).map(|p| p.pos).unwrap_or(fallback);
                self.diags.push(diag(DiagnosticKind::InhomogeneousEntry, pos, format!("entry {} of relation {} is not homogeneous of the column degree", row + 1, col + 1)));
            }
            other => self.diags.push(diag(DiagnosticKind::InvalidValue, fallback, other.to_string())),
        }
    }

    /// Image of source generator `j` in target generator `i` must be zero or
    /// homogeneous of degree `src[j] - tgt[i]`.
    fn check_map_degrees(&mut self, ctx: &Arc<RingCtx>, src: &[i32], tgt: &[i32], images: &[Vec<PolyText>]) {
        for (j, col) in images.iter().enumerate() {
            for (i, e) in col.iter().enumerate() {
                let Ok(p) = ctx.parse(&e.text) else { continue };
                if p.is_zero() {
                    continue;
                }
                let want = src[j] - tgt[i];
                match p.homogeneous_degree(ctx.order()) {
                    Ok(Some(d)) if d == want => {}
                    _ => self.diags.push(diag(
                        DiagnosticKind::InhomogeneousEntry,
                        e.pos,
                        format!("image of generator {} has an entry that is not homogeneous of degree {want}", j + 1),
                    )),
                }
            }
        }
    }
}

fn ctx_free_parse_fails(r: &RingDecl, p: &PolyText) -> bool {
    let probe = RingSpec { ideal: vec![p.text.clone()], ..ring_spec(r) };
    matches!(make_ring(probe), Err(Error::PolySyntax { .. } | Error::UnknownVariable { .. }))
}

fn poly_error_kind(e: &Error) -> DiagnosticKind {
    match e {
        Error::UnknownVariable { .. } => DiagnosticKind::UnknownIdentifier,
        _ => DiagnosticKind::SyntaxError,
    }
}
