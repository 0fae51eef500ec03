//! Executes a validated session: declarations in order, then each query,
//! collecting deterministic results.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::Field;
use crate::dsl::{column_matrix, ring_spec, Decl, Expr, Kind, MapBody, ModuleBody, OptValue, QueryDecl, SessionAst};
use crate::error::{Error, Result};
use crate::fmod::{ext, resolve, syzygy, transpose, BettiTable, DualModule, ModMap, Presentation};
use crate::matrix::Matrix;
use crate::ring::{make_ring, RingCtx};
use crate::stable::{self, ConeData};

pub const FORMAT: &str = "stablehom-results/1";

/// Options shared by every query of a run.
#[derive(Clone, Debug, Default)]
pub struct RunConfig {
    /// Replaces the field of every declared ring.
    pub field: Option<Field>,
    /// Degree cap for Gröbner computations.
    pub max_degree: Option<i32>,
    /// Standard-resolution window; must contain `[-2, 1]`.
    pub window: Option<(i32, i32)>,
    /// Enables redundant cross-checks.
    pub verify: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorInfo {
    pub code: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub betti: Option<BettiTable>,
}

impl From<&Error> for ErrorInfo {
    fn from(e: &Error) -> Self {
        let betti = match e {
            Error::NotRbm { betti } => Some(betti.clone()),
            _ => None,
        };
        ErrorInfo { code: e.code().to_string(), message: e.to_string(), betti }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QueryResult {
    pub index: usize,
    pub query: String,
    pub ring: String,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
    pub payload: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RingInfo {
    pub name: String,
    pub ring: String,
    pub gorenstein_fractions: bool,
}

/// Everything a run produces; serialized as the JSON report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SessionReport {
    pub format: &'static str,
    pub version: String,
    pub rings: Vec<RingInfo>,
    pub results: Vec<QueryResult>,
    /// Set when a declaration failed and the remaining statements were skipped.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aborted: Option<ErrorInfo>,
}

impl SessionReport {
    /// 0 when every query succeeded, 3 after a resource limit, otherwise 2.
    pub fn exit_code(&self) -> i32 {
        let errors: Vec<&ErrorInfo> = self.results.iter().filter_map(|r| r.error.as_ref()).chain(self.aborted.as_ref()).collect();
        if errors.iter().any(|e| e.code == "ResourceLimit") {
            3
        } else if errors.is_empty() {
            0
        } else {
            2
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Human-readable report, one block per query.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.rings {
            out.push_str(&format!("ring {} = {}\n", r.name, r.ring));
        }
        for r in &self.results {
            match &r.error {
                None => {
                    out.push_str(&format!("[{}] {}: ok\n", r.index, r.query));
                    summarize(&r.payload, "    ", &mut out);
                }
                Some(e) => out.push_str(&format!("[{}] {}: error {}: {}\n", r.index, r.query, e.code, e.message)),
            }
        }
        if let Some(e) = &self.aborted {
            out.push_str(&format!("aborted: {}: {}\n", e.code, e.message));
        }
        out
    }
}

fn summarize(v: &Value, indent: &str, out: &mut String) {
    let Value::Object(map) = v else { return };
    for (k, v) in map {
        match v {
            Value::Bool(b) => out.push_str(&format!("{indent}{k} = {b}\n")),
            Value::Number(n) => out.push_str(&format!("{indent}{k} = {n}\n")),
            Value::String(s) => out.push_str(&format!("{indent}{k} = {s}\n")),
            Value::Object(inner) if inner.contains_key("betti") => {
                out.push_str(&format!("{indent}{k}: betti {}\n", fmt_betti(&inner["betti"])));
            }
            Value::Array(items) if k == "betti" || k == "h_minus_one_betti" => {
                out.push_str(&format!("{indent}{k} = {}\n", fmt_betti(&Value::Array(items.clone()))));
            }
            _ => {}
        }
    }
}

fn fmt_betti(v: &Value) -> String {
    let Value::Array(items) = v else { return String::new() };
    if items.is_empty() {
        return "0".to_string();
    }
    let parts: Vec<String> = items
        .iter()
        .map(|e| format!("{}:R({})^{}", e["hom_deg"], -e["internal_deg"].as_i64().unwrap_or(0), e["rank"]))
        .collect();
    parts.join(" ")
}

enum Val {
    Module(Presentation),
    Map(ModMap),
    Int(usize),
}

struct Env {
    cfg: RunConfig,
    rings: BTreeMap<String, Arc<RingCtx>>,
    current: Option<String>,
    modules: BTreeMap<String, Presentation>,
    maps: BTreeMap<String, ModMap>,
}

/// Runs a validated session.
pub fn run(ast: &SessionAst, cfg: &RunConfig) -> SessionReport {
    let mut env = Env { cfg: cfg.clone(), rings: BTreeMap::new(), current: None, modules: BTreeMap::new(), maps: BTreeMap::new() };
    let mut report = SessionReport {
        format: FORMAT,
        version: format!("stablehom {}", env!("CARGO_PKG_VERSION")),
        rings: Vec::new(),
        results: Vec::new(),
        aborted: None,
    };
    for d in &ast.decls {
        let outcome = match d {
            Decl::Query(q) => {
                report.results.push(env.query(report.results.len(), q));
                Ok(())
            }
            Decl::Ring(r) => env.ring(r).map(|info| report.rings.push(info)),
            Decl::Module(m) => env.module(m),
            Decl::Map(m) => env.map(m),
        };
        if let Err(e) = outcome {
            let mut info = ErrorInfo::from(&e);
            info.message = format!("in `{d}`: {}", info.message);
            report.aborted = Some(info);
            break;
        }
    }
    report
}

fn ctx_of(v: &Val) -> Option<&Arc<RingCtx>> {
    match v {
        Val::Module(m) => Some(m.ctx()),
        Val::Map(f) => Some(f.ctx()),
        Val::Int(_) => None,
    }
}

impl Env {
    fn ring(&mut self, r: &crate::dsl::RingDecl) -> Result<RingInfo> {
        let mut spec = ring_spec(r);
        if let Some(field) = self.cfg.field {
            spec.field = field;
        }
        spec.max_degree = self.cfg.max_degree;
        let ctx = make_ring(spec)?;
        let info = RingInfo { name: r.name.name.clone(), ring: ctx.describe(), gorenstein_fractions: ctx.gorenstein_fractions() };
        self.rings.insert(r.name.name.clone(), ctx);
        self.current = Some(r.name.name.clone());
        Ok(info)
    }

    fn ring_for(&self, over: &Option<crate::dsl::Ident>) -> Result<Arc<RingCtx>> {
        let name = over.as_ref().map(|i| i.name.clone()).or_else(|| self.current.clone());
        name.and_then(|n| self.rings.get(&n).cloned()).ok_or_else(|| Error::Invalid("no ring in scope".into()))
    }

    fn module(&mut self, m: &crate::dsl::ModuleDecl) -> Result<()> {
        let ctx = self.ring_for(&m.ring)?;
        let pres = match &m.body {
            ModuleBody::Free { gens } => Presentation::free(&ctx, gens.clone()),
            ModuleBody::Coker { gens, rels } => Presentation::new(&ctx, gens.clone(), column_matrix(&ctx, gens.len(), rels)?)?,
            ModuleBody::Sum(parts) => {
                let parts: Vec<&Presentation> = parts.iter().map(|p| &self.modules[&p.name]).collect();
                Presentation::direct_sum(&ctx, &parts)
            }
            ModuleBody::Expr(e) => self.module_expr(e)?,
        };
        self.modules.insert(m.name.name.clone(), pres);
        Ok(())
    }

    fn map(&mut self, m: &crate::dsl::MapDecl) -> Result<()> {
        let ctx = self.ring_for(&m.ring)?;
        let f = match &m.body {
            MapBody::Matrix { source, target, images } => {
                let a = self.modules[&source.name].clone();
                let b = self.modules[&target.name].clone();
                if images.len() != a.num_gens() || images.iter().any(|c| c.len() != b.num_gens()) {
                    return Err(Error::ShapeMismatch(format!(
                        "expected {} images with {} entries each",
                        a.num_gens(),
                        b.num_gens()
                    )));
                }
                let mat = column_matrix(&ctx, b.num_gens(), images)?;
                ModMap::new(a, b, mat)?
            }
            MapBody::Expr(e) => self.map_expr(e)?,
        };
        self.maps.insert(m.name.name.clone(), f);
        Ok(())
    }

    fn window(&self, q: Option<&QueryDecl>) -> (i32, i32) {
        if let Some(OptValue::Range(lo, hi)) = q.and_then(|q| q.option("window")) {
            return (*lo, *hi);
        }
        self.cfg.window.unwrap_or((-2, 1))
    }

    fn cone(&self, f: &ModMap, q: Option<&QueryDecl>) -> Result<ConeData> {
        let (lo, hi) = self.window(q);
        stable::cone_with_window(f, lo, hi)
    }

    fn eval(&self, e: &Expr, want: Kind) -> Result<Val> {
        match (e, want) {
            (Expr::Int(n, _), _) => Ok(Val::Int(*n as usize)),
            (Expr::Name(id), Kind::Module) => Ok(Val::Module(self.modules[&id.name].clone())),
            (Expr::Name(id), _) => Ok(Val::Map(self.maps[&id.name].clone())),
            (Expr::Apply { op, args }, _) => {
                let sig: Vec<Kind> = if op.name == "dual" {
                    vec![want]
                } else {
                    crate::dsl::EXPR_OPS.iter().find(|(n, _, _)| *n == op.name).map(|(_, s, _)| s.to_vec()).unwrap_or_default()
                };
                let vals: Vec<Val> = args.iter().zip(&sig).map(|(a, &k)| self.eval(a, k)).collect::<Result<_>>()?;
                self.apply(&op.name, &vals)
            }
        }
    }

    fn module_expr(&self, e: &Expr) -> Result<Presentation> {
        match self.eval(e, Kind::Module)? {
            Val::Module(m) => Ok(m),
            _ => Err(Error::Invalid("expected a module".into())),
        }
    }

    fn map_expr(&self, e: &Expr) -> Result<ModMap> {
        match self.eval(e, Kind::Map)? {
            Val::Map(f) => Ok(f),
            _ => Err(Error::Invalid("expected a map".into())),
        }
    }

    fn theta(&self, f: &ModMap, q: Option<&QueryDecl>) -> Result<stable::ThetaSequence> {
        let data = self.cone(f, q)?;
        let w = stable::rbm_from_cone(&data)?;
        if !w.rbm {
            return Err(Error::NotRbm { betti: w.betti });
        }
        stable::theta_from_cone(&data)
    }

    fn apply(&self, op: &str, args: &[Val]) -> Result<Val> {
        use Val::{Int as I, Map as F, Module as M};
        Ok(match (op, args) {
            ("transpose", [M(m)]) => M(transpose(m)?),
            ("syzygy", [M(m), I(n)]) => M(syzygy(m, *n)?),
            ("ext", [M(m), I(i)]) => M(ext(m, *i)?),
            ("j2", [M(m)]) => M(stable::j2(m)?),
            ("psi", [M(m)]) => F(stable::psi(m)?),
            ("natural", [M(l), I(n)]) => F(stable::natural_map(l, *n)?),
            ("kerincl", [F(f)]) => F(f.kernel()?),
            ("cokerproj", [F(f)]) => F(f.cokernel()?),
            ("pseudoker", [F(f)]) => M(stable::pseudo_from_cone(&self.cone(f, None)?)?.pseudo_ker),
            ("pseudocoker", [F(f)]) => M(stable::pseudo_from_cone(&self.cone(f, None)?)?.pseudo_coker),
            ("thetainj", [F(f)]) => F(self.theta(f, None)?.inj),
            ("thetasurj", [F(f)]) => F(self.theta(f, None)?.surj),
            ("source", [F(f)]) => M(f.source.clone()),
            ("target", [F(f)]) => M(f.target.clone()),
            ("dual", [M(m)]) => M(DualModule::of(m)?.pres),
            ("dual", [F(f)]) => F(f.dual()?),
            _ => return Err(Error::Invalid(format!("`{op}` cannot be applied to these arguments"))),
        })
    }

    fn query(&self, index: usize, q: &QueryDecl) -> QueryResult {
        let sig = crate::dsl::QUERY_OPS.iter().find(|(n, _)| *n == q.op.name).map(|(_, s)| s.to_vec()).unwrap_or_default();
        let vals: Result<Vec<Val>> = q.args.iter().zip(&sig).map(|(a, &k)| self.eval(a, k)).collect();
        let ring = vals
            .as_ref()
            .ok()
            .and_then(|v| v.iter().find_map(ctx_of))
            .map(|c| c.describe())
            .unwrap_or_default();
        let outcome = vals.and_then(|v| self.answer(q, &v));
        let (status, error, payload) = match outcome {
            Ok(p) => ("ok", None, p),
            Err(e) => ("error", Some(ErrorInfo::from(&e)), Value::Null),
        };
        QueryResult { index, query: q.echo(), ring, status, error, payload }
    }

    fn answer(&self, q: &QueryDecl, args: &[Val]) -> Result<Value> {
        use Val::{Int as I, Map as F, Module as M};
        let verify = self.cfg.verify || q.flag("verify");
        Ok(match (q.op.name.as_str(), args) {
            ("resolve", [M(m), I(n)]) => {
                let c = resolve(m, *n)?;
                let diffs: Vec<Value> = (c.lo()..c.hi())
                    .map(|d| Ok(json!({ "degree": d, "matrix": columns(m.ctx(), &c.diff(d)?) })))
                    .collect::<Result<_>>()?;
                json!({ "betti": c.betti(), "differentials": diffs })
            }
            ("transpose", [M(m)]) => json!({ "module": module_json(&transpose(m)?)? }),
            ("syzygy", [M(m), I(n)]) => json!({ "module": module_json(&syzygy(m, *n)?)? }),
            ("ext", [M(m), I(i)]) => {
                let e = ext(m, *i)?;
                json!({ "module": module_json(&e)?, "vanishes": e.is_zero()? })
            }
            ("j2", [M(m)]) => json!({ "module": module_json(&stable::j2(m)?)? }),
            ("psi", [M(m)]) => {
                let f = stable::psi(m)?;
                json!({ "map": map_json(&f)?, "direction": "J2M -> M", "is_zero": f.is_zero()? })
            }
            ("torsionless", [M(m)]) => {
                let t = stable::torsionless(m)?;
                let mut v = json!({ "torsionless": t });
                if verify {
                    let e = stable::torsionless_by_evaluation(m)?;
                    v["by_evaluation"] = json!(e);
                    v["verified"] = json!(e == t);
                }
                v
            }
            ("ext_dual_vanishes", [M(m)]) => json!({
                "ext_dual_vanishes": stable::ext_dual_vanishes(m)?,
                "ext1_vanishes": ext(m, 1)?.is_zero()?,
            }),
            ("pseudoker", [F(f)]) => {
                let data = self.cone(f, Some(q))?;
                let p = stable::pseudo_from_cone(&data)?;
                let mut v = json!({ "module": module_json(&p.pseudo_ker)?, "n_f": map_json(&p.n_f)?, "certified": p.kernel_certified });
                self.verify_cone(&data, verify, &mut v)?;
                v
            }
            ("pseudocoker", [F(f)]) => {
                let data = self.cone(f, Some(q))?;
                let p = stable::pseudo_from_cone(&data)?;
                let mut v = json!({ "module": module_json(&p.pseudo_coker)?, "c_f": map_json(&p.c_f)?, "certified": p.cokernel_certified });
                self.verify_cone(&data, verify, &mut v)?;
                v
            }
            ("is_rbm", [F(f)]) => {
                let data = self.cone(f, Some(q))?;
                let w = stable::rbm_from_cone(&data)?;
                let mut v = json!({ "is_rbm": w.rbm, "h_minus_one_betti": w.betti });
                self.verify_cone(&data, verify, &mut v)?;
                v
            }
            ("theta", [F(f)]) => {
                let t = self.theta(f, Some(q))?;
                let mut v = json!({
                    "a": module_json(&t.a)?,
                    "middle": module_json(&t.middle)?,
                    "c": module_json(&t.c)?,
                    "sequence": { "inj": map_json(&t.inj)?, "surj": map_json(&t.surj)? },
                    "exact": t.check.exact,
                    "dual_exact": t.check.dual_exact,
                    "perfect": t.check.perfect,
                });
                if verify {
                    let again = stable::is_perfect_exact_minimized(&t.inj, &t.surj)?;
                    v["verified"] = json!(again == t.check);
                    self.verify_cone(&self.cone(f, Some(q))?, true, &mut v)?;
                }
                v
            }
            ("perfect", [F(inj), F(surj)]) => {
                let c = stable::is_perfect_exact(inj, surj)?;
                let mut v = json!({ "exact": c.exact, "dual_exact": c.dual_exact, "perfect": c.perfect });
                if verify {
                    v["verified"] = json!(stable::is_perfect_exact_minimized(inj, surj)? == c);
                }
                v
            }
            ("report", [F(f)]) => {
                let data = self.cone(f, Some(q))?;
                let r = stable::report_from_cone(&data)?;
                let mut v = json!({
                    "is_rbm": r.rbm,
                    "ker_torsionless": r.ker_torsionless,
                    "pseudo_ker_torsionless": r.pseudo_ker_torsionless,
                    "h_minus_one_vanishes": r.h_minus_one_vanishes,
                    "syzygy_match": r.syzygy_match,
                    "gorenstein_fractions": r.gorenstein_fractions,
                    "all_agree": r.all_agree(),
                    "h_minus_one_betti": r.h_minus_one_betti,
                    "pseudo_ker": module_json(&r.pseudo.pseudo_ker)?,
                    "pseudo_coker": module_json(&r.pseudo.pseudo_coker)?,
                    "theta_perfect": r.theta.as_ref().map(|t| t.check.perfect),
                });
                self.verify_cone(&data, verify, &mut v)?;
                v
            }
            ("stable_iso", [F(a), F(b)]) => json!({ "certified": stable::check_stable_iso_certificate(a, b)? }),
            _ => return Err(Error::Invalid(format!("`{}` cannot be applied to these arguments", q.op.name))),
        })
    }

    /// Re-checks both standard resolutions behind a cone.
    fn verify_cone(&self, data: &ConeData, verify: bool, v: &mut Value) -> Result<()> {
        if verify {
            v["resolutions_verified"] = json!(data.fa.verify()? && data.fb.verify()? && data.chain.verify()?);
        }
        Ok(())
    }
}

/// Columns of `m` as polynomial strings.
fn columns(ctx: &Arc<RingCtx>, m: &Matrix) -> Vec<Vec<String>> {
    m.columns().iter().map(|c| c.iter().map(|p| ctx.fmt(p)).collect()).collect()
}

/// A module by its minimal presentation and Betti table.
pub fn module_json(m: &Presentation) -> Result<Value> {
    let min = m.minimal()?;
    Ok(json!({
        "gens": min.gens(),
        "rels": columns(min.ctx(), min.matrix()),
        "betti": min.betti(2)?,
        "is_zero": min.num_gens() == 0,
    }))
}

/// A map by its generator images, with both ends as presented.
pub fn map_json(f: &ModMap) -> Result<Value> {
    let ends = |m: &Presentation| -> Result<Value> {
        Ok(json!({ "gens": m.gens(), "rels": columns(m.ctx(), m.matrix()), "betti": m.betti(2)? }))
    };
    Ok(json!({
        "source": ends(&f.source)?,
        "target": ends(&f.target)?,
        "images": columns(f.ctx(), &f.gen_matrix),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;

    const NODE: &str = "#! stablehom 1\nring R = QQ[x,y]/(x*y) gorenstein;\nmodule k = coker gens [0] rels [[x],[y]];\n\
                        module F = free [0];\nmap p : F -> k = [[1]];\n";

    fn run_text(text: &str, cfg: &RunConfig) -> SessionReport {
        run(&parse(text).unwrap(), cfg)
    }

    #[test]
    fn queries_run_in_order() {
        let rep = run_text(&format!("{NODE}query torsionless k;\nquery is_rbm p;\nquery theta p;"), &RunConfig::default());
        assert_eq!(rep.exit_code(), 0);
        assert_eq!(rep.results[0].payload["torsionless"], json!(false));
        assert_eq!(rep.results[1].payload["is_rbm"], json!(true));
        assert_eq!(rep.results[2].payload["perfect"], json!(true));
        assert!(rep.to_text().contains("[1] is_rbm p: ok"));
    }

    #[test]
    fn not_rbm_is_reported_with_betti_table() {
        let rep = run_text(&format!("{NODE}map z : k -> k = [[0]];\nquery theta z;\nquery is_rbm z;"), &RunConfig::default());
        let err = rep.results[0].error.as_ref().unwrap();
        assert_eq!(err.code, "NotRbm");
        assert!(err.betti.as_ref().is_some_and(|b| !b.is_empty()));
        assert_eq!(rep.results[1].status, "ok");
        assert_eq!(rep.exit_code(), 2);
    }

    #[test]
    fn ill_defined_map_aborts() {
        let rep = run_text(&format!("{NODE}map bad : k -> F = [[1]];\nquery is_rbm p;"), &RunConfig::default());
        assert!(rep.results.is_empty());
        assert_eq!(rep.aborted.as_ref().unwrap().code, "IllDefinedMap");
        assert_eq!(rep.exit_code(), 2);
    }

    #[test]
    fn degree_cap_is_a_resource_limit() {
        let text = "ring R = QQ[x,y,z]/(x^3 - y*z^2, y^3 - x*z^2);\nmodule k = coker gens [0] rels [[x],[y],[z]];\nquery resolve k 3;";
        let cfg = RunConfig { max_degree: Some(3), ..RunConfig::default() };
        let rep = run_text(text, &cfg);
        assert_eq!(rep.exit_code(), 3);
    }

    #[test]
    fn window_must_contain_the_cone() {
        let rep = run_text(&format!("{NODE}query is_rbm p with window = -1..1;"), &RunConfig::default());
        assert_eq!(rep.results[0].error.as_ref().unwrap().code, "WindowTooSmall");
        let cfg = RunConfig { window: Some((-3, 2)), verify: true, ..RunConfig::default() };
        let rep = run_text(&format!("{NODE}query is_rbm p;"), &cfg);
        assert_eq!(rep.results[0].payload["resolutions_verified"], json!(true));
    }

    #[test]
    fn json_is_deterministic() {
        let text = format!("{NODE}query report p;\nquery psi k;\nquery resolve k 2;");
        let a = run_text(&text, &RunConfig::default()).to_json();
        let b = run_text(&text, &RunConfig::default()).to_json();
        assert_eq!(a, b);
        assert!(a.contains("\"version\": \"stablehom "));
    }
}
