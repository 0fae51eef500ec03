//! The session language: rings, modules, maps and queries.
//!
//! ```text
//! #! stablehom 1
//! ring R = QQ[x,y]/(x*y) grevlex gorenstein;
//! module k = coker gens [0] rels [[x], [y]];
//! map f : k -> k = [[0]];
//! query is_rbm (psi k) with verify;
//! ```
//!
//! Statements end with `;` and `#` starts a line comment. Modules and maps
//! live over the most recent ring unless `over R` is given. In `rels` each
//! inner list is one relation; in a map each inner list is the image of one
//! source generator. Entries are listed in generator order.

pub mod ast;
mod lexer;
mod parser;
mod validate;

use std::fmt;

use serde::Serialize;

pub use ast::*;
pub use validate::{column_matrix, ring_spec, Kind, EXPR_OPS, QUERY_OPS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DiagnosticKind {
    SyntaxError,
    UnknownIdentifier,
    DuplicateName,
    InhomogeneousEntry,
    ShapeMismatch,
    TypeMismatch,
    InvalidValue,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub pos: Pos,
    pub message: String,
    /// Tokens that would have been accepted, for syntax errors.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub expected: Vec<String>,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {:?}: {}", self.pos, self.kind, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

/// Parses and validates a session. Syntax errors are reported for every
/// statement; validation runs only on syntactically clean input.
pub fn parse(text: &str) -> Result<SessionAst, Vec<Diagnostic>> {
    let ast = parser::parse_syntax(text)?;
    let diags = validate::validate(&ast);
    if diags.is_empty() {
        Ok(ast)
    } else {
        Err(diags)
    }
}

/// Syntax-only parse, for tooling that formats sessions without checking them.
pub fn parse_syntax(text: &str) -> Result<SessionAst, Vec<Diagnostic>> {
    parser::parse_syntax(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Field, OrderKind};

    fn first_diag(text: &str) -> Diagnostic {
        parse(text).unwrap_err().remove(0)
    }

    #[test]
    fn ring_declaration() {
        let ast = parse("ring R = QQ[x,y]/(x*y) grevlex gorenstein;").unwrap();
        let Decl::Ring(r) = &ast.decls[0] else { panic!("expected a ring") };
        assert_eq!(r.name.name, "R");
        assert_eq!(r.field, Field::Rationals);
        assert_eq!(r.vars.iter().map(|v| v.name.as_str()).collect::<Vec<_>>(), ["x", "y"]);
        assert_eq!(r.ideal[0].text, "x*y");
        assert_eq!(r.order, OrderKind::DegRevLex);
        assert!(r.gorenstein);
    }

    #[test]
    fn module_declaration() {
        let ast = parse("ring R = QQ[x,y]/(x*y);\nmodule k = coker gens [0] rels [[x],[y]];").unwrap();
        let Decl::Module(m) = &ast.decls[1] else { panic!("expected a module") };
        let ModuleBody::Coker { gens, rels } = &m.body else { panic!("expected coker") };
        assert_eq!(gens, &[0]);
        assert_eq!(rels.len(), 2);
        assert_eq!(rels[1][0].text, "y");
    }

    #[test]
    fn unknown_identifier_is_located() {
        let d = first_diag("ring R = QQ[x];\nquery is_rbm f;");
        assert_eq!(d.kind, DiagnosticKind::UnknownIdentifier);
        assert_eq!(d.pos, Pos { line: 2, col: 14 });
    }

    #[test]
    fn duplicate_and_inhomogeneous() {
        let d = first_diag("ring R = QQ[x];\nmodule k = free [0];\nmodule k = free [1];");
        assert_eq!((d.kind, d.pos.line), (DiagnosticKind::DuplicateName, 3));
        let d = first_diag("ring R = QQ[x,y];\nmodule M = coker gens [0, 0] rels [[x, y^2]];");
        assert_eq!(d.kind, DiagnosticKind::InhomogeneousEntry);
        assert_eq!(d.pos, Pos { line: 2, col: 40 });
        let d = first_diag("ring R = QQ[x,y];\nmodule A = free [0];\nmodule B = free [1];\nmap f : A -> B = [[x]];");
        assert_eq!(d.kind, DiagnosticKind::InhomogeneousEntry);
    }

    #[test]
    fn syntax_errors_carry_expected_tokens() {
        let d = first_diag("ring R = QQ[x] grevlex\nmodule k = free [0];");
        assert_eq!(d.kind, DiagnosticKind::SyntaxError);
        assert_eq!(d.pos, Pos { line: 2, col: 1 });
        assert!(d.expected.contains(&"`;`".to_string()));
        let errs = parse("ring R = ;\nring S = QQ[x];\nmodule = free [0];").unwrap_err();
        assert_eq!(errs.len(), 2);
    }

    #[test]
    fn header_version_is_checked() {
        assert!(parse("#! stablehom 1\nring R = QQ[x];").is_ok());
        assert_eq!(first_diag("#! stablehom 2\n").kind, DiagnosticKind::SyntaxError);
    }

    #[test]
    fn types_of_nested_expressions() {
        let base = "ring R = QQ[x]/(x^2);\nmodule k = coker gens [0] rels [[x]];\nmap f : k -> k = [[0]];\n";
        assert!(parse(&format!("{base}query is_rbm (psi (transpose k));")).is_ok());
        assert!(parse(&format!("{base}query perfect (kerincl f) (cokerproj f);")).is_ok());
        let d = first_diag(&format!("{base}query is_rbm k;"));
        assert_eq!(d.kind, DiagnosticKind::TypeMismatch);
        let d = first_diag(&format!("{base}query syzygy k;"));
        assert_eq!(d.kind, DiagnosticKind::TypeMismatch);
        let d = first_diag(&format!("{base}query theta f with depth = 3;"));
        assert_eq!(d.kind, DiagnosticKind::InvalidValue);
    }

    #[test]
    fn round_trip_is_a_fixed_point() {
        let text = "#! stablehom 1\n# comment\nring S = GF(32003)[x, y, z] glex weights [1,1,2];\n\
                    ring R = QQ[x,y]/(x*y, x^2 - 0) gorenstein;\nmodule k over R = coker gens [0] rels [[x], [ y ]];\n\
                    module Y = coker gens [-1,-1] rels [[x,y]];\nmodule F = free [0, 1];\nmodule P = sum [k, F];\n\
                    module T = transpose (syzygy k 1);\nmap f : k -> Y = [[x, y]];\nmap g = kerincl f;\n\
                    query perfect g f with verify, window = -3..2;\nquery report (psi k);";
        let ast = parse(text).unwrap();
        let printed = ast.to_string();
        let again = parse(&printed).unwrap();
        assert_eq!(again.to_string(), printed);
        assert_eq!(again.decls.len(), ast.decls.len());
    }
}
