mod session;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use multres::driver::{resolve_plane_curve_with_budget, run_script, BlowupScript, RunReport, DEFAULT_BUDGET};
use multres::elimination::{elim_report, image_nfold};
use multres::json::{canonical, ring_json};
use multres::poly::{format_rational, parse_point};
use multres::presentation::zariski_check;
use multres::selftest::{run_criterion, run_selftest, Catalog, SelftestReport, DEFAULT_SEED};
use multres::{
    make_charts, parse, strict_transform_monic, Center, Error, Generator, Grid, MonicPoly, Order, Polynomial,
    Presentation, ReesAlgebra, Result, Ring, RingCtx,
};
use num_rational::BigRational;
use serde_json::{json, Value};

use session::Session;

#[derive(Parser)]
#[command(name = "multres", version, about = "Exact Rees algebras, blow-ups and elimination algebras")]
struct Cli {
    /// Print canonical JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized checks; MULTRES_SEED takes precedence.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Session file with named rings, polynomials, presentations, algebras and scripts.
    #[arg(long, global = true)]
    session: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Order of vanishing of a polynomial at a rational point.
    Order {
        #[arg(long)]
        ring: Option<String>,
        /// Polynomial, or `@name` from the session.
        #[arg(long)]
        poly: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Singular locus of a Rees algebra: derivative generators and grid points.
    Sing {
        #[command(flatten)]
        algebra: AlgebraArgs,
        /// Integer box `lo..hi` to sample.
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        /// Sample all of F_p^dim after reducing mod p.
        #[arg(long, conflicts_with = "grid")]
        field: Option<u32>,
    },
    /// ord of a Rees algebra at a point of its singular locus.
    Ord {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Whether a translated coordinate subspace lies in the singular locus.
    Permissible {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[command(flatten)]
        center: CenterArgs,
    },
    /// Transform of a Rees algebra or a monic polynomial in every chart.
    Transform {
        #[arg(long)]
        ring: Option<String>,
        /// Generator `poly:weight`, repeatable.
        #[arg(long = "gen", value_name = "POLY:WEIGHT")]
        gens: Vec<String>,
        /// Named algebra from the session.
        #[arg(long)]
        algebra: Option<String>,
        /// Transform this monic polynomial instead of an algebra.
        #[arg(long, conflicts_with_all = ["gens", "algebra"])]
        monic: Option<String>,
        #[arg(long, default_value = "Z")]
        var: String,
        #[command(flatten)]
        center: CenterArgs,
    },
    /// Elimination algebra of a monic polynomial.
    Elim {
        #[command(flatten)]
        monic: MonicArgs,
    },
    /// Ideal of the image of the n-fold locus.
    ImageNfold {
        #[command(flatten)]
        monic: MonicArgs,
    },
    /// Local presentations: attach, test, transform.
    Presentation {
        #[command(subcommand)]
        action: PresentationAction,
    },
    /// Rank against the sum of local multiplicities over a rational point.
    Zariski {
        #[command(flatten)]
        monic: MonicArgs,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Run a blow-up script (file path or session script name).
    Run {
        #[arg(long)]
        script: String,
    },
    /// Resolve a plane curve by point blow-ups.
    ResolveCurve {
        #[arg(long, default_value = "Q[x,y]")]
        ring: String,
        /// Polynomial, or `@name` from the session.
        #[arg(long)]
        poly: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Run the acceptance suite.
    Selftest {
        /// Fixture file replacing the built-in catalog.
        #[arg(long)]
        catalog: Option<String>,
        /// Run only this criterion (1-10).
        #[arg(long)]
        criterion: Option<u32>,
    },
    /// Validate a session file and list its contents.
    SessionCheck {
        path: String,
    },
}

#[derive(Subcommand)]
enum PresentationAction {
    /// The Rees algebra generated by f_i W^{d_i} on the ambient space.
    Attach {
        #[command(flatten)]
        p: PresentationArgs,
    },
    /// Transversality test at a point of the base.
    Test {
        #[command(flatten)]
        p: PresentationArgs,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Strict transform in every chart of a blow-up of the base.
    Transform {
        #[command(flatten)]
        p: PresentationArgs,
        #[command(flatten)]
        center: CenterArgs,
    },
}

#[derive(Args)]
struct AlgebraArgs {
    #[arg(long)]
    ring: Option<String>,
    /// Generator `poly:weight`, repeatable.
    #[arg(long = "gen", value_name = "POLY:WEIGHT")]
    gens: Vec<String>,
    /// Named algebra from the session.
    #[arg(long)]
    algebra: Option<String>,
}

#[derive(Args)]
struct MonicArgs {
    /// Base ring of the coefficients.
    #[arg(long)]
    ring: Option<String>,
    #[arg(long)]
    monic: Option<String>,
    #[arg(long, default_value = "Z")]
    var: String,
}

#[derive(Args)]
struct CenterArgs {
    /// Comma-separated center variables.
    #[arg(long, value_delimiter = ',', required = true)]
    center: Vec<String>,
    /// Comma-separated rational shift, one per center variable.
    #[arg(long, allow_hyphen_values = true)]
    shift: Option<String>,
}

#[derive(Args)]
struct PresentationArgs {
    #[arg(long)]
    base: Option<String>,
    /// Entry `VAR:POLY`, repeatable.
    #[arg(long = "entry", value_name = "VAR:POLY")]
    entries: Vec<String>,
    /// Named presentation from the session.
    #[arg(long)]
    presentation: Option<String>,
}

struct Ctx {
    json: bool,
    seed: u64,
    session: Session,
}

/// What a command produced: its JSON form, its text form, and whether the
/// process should report failure.
struct Output {
    json: Value,
    text: String,
    ok: bool,
}

impl Output {
    fn new(json: Value, text: impl Into<String>) -> Self {
        Output { json, text: text.into(), ok: true }
    }
}

type ChartRenderer = Box<dyn Fn(&multres::Chart) -> Result<(Value, String)>>;

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

fn point(text: &str) -> Result<Vec<BigRational>> {
    parse_point(text)
}

fn point_json(p: &[BigRational]) -> Value {
    p.iter().map(format_rational).collect::<Vec<_>>().into()
}

fn point_text(p: &[BigRational]) -> String {
    p.iter().map(format_rational).collect::<Vec<_>>().join(",")
}

impl Ctx {
    fn polynomial(&self, ring: Option<&str>, text: &str) -> Result<Polynomial> {
        if let Some(name) = text.strip_prefix('@') {
            return self.session.polynomial(name);
        }
        let ring = RingCtx::parse(ring.ok_or_else(|| usage("--ring is required unless the polynomial is @name"))?)?;
        parse(text, &ring)
    }

    fn algebra(&self, a: &AlgebraArgs) -> Result<ReesAlgebra> {
        if let Some(name) = &a.algebra {
            return self.session.algebra(name);
        }
        let ring = RingCtx::parse(a.ring.as_deref().ok_or_else(|| usage("--ring or --algebra is required"))?)?;
        if a.gens.is_empty() {
            return Err(usage("at least one --gen POLY:WEIGHT is required"));
        }
        let gens = a
            .gens
            .iter()
            .map(|g| {
                let (poly, weight) = g.rsplit_once(':').ok_or_else(|| usage(format!("generator `{g}` is not POLY:WEIGHT")))?;
                let weight: u32 = weight.trim().parse().map_err(|_| usage(format!("bad weight in `{g}`")))?;
                Ok(Generator::new(parse(poly, &ring)?, weight))
            })
            .collect::<Result<Vec<_>>>()?;
        ReesAlgebra::new(&ring, gens)
    }

    fn monic(&self, m: &MonicArgs) -> Result<MonicPoly> {
        let base = RingCtx::parse(m.ring.as_deref().ok_or_else(|| usage("--ring is required"))?)?;
        let text = m.monic.as_deref().ok_or_else(|| usage("--monic is required"))?;
        MonicPoly::parse(text, &m.var, &base)
    }

    fn presentation(&self, p: &PresentationArgs) -> Result<Presentation> {
        if let Some(name) = &p.presentation {
            return self.session.presentation(name);
        }
        let base = RingCtx::parse(p.base.as_deref().ok_or_else(|| usage("--base or --presentation is required"))?)?;
        let entries: Vec<(&str, &str)> = p
            .entries
            .iter()
            .map(|e| e.split_once(':').ok_or_else(|| usage(format!("entry `{e}` is not VAR:POLY"))))
            .collect::<Result<_>>()?;
        Presentation::parse(&base, &entries)
    }
}

fn center(c: &CenterArgs) -> Result<Center> {
    match &c.shift {
        None => Ok(Center::new(&c.center)),
        Some(s) => {
            let shift = point(s)?;
            if shift.len() != c.center.len() {
                return Err(Error::DimensionMismatch { expected: c.center.len(), got: shift.len() });
            }
            Ok(Center::shifted(&c.center, shift))
        }
    }
}

fn grid(spec: &str) -> Result<Grid> {
    let (lo, hi) = spec.split_once("..").ok_or_else(|| usage(format!("grid `{spec}` is not lo..hi")))?;
    let lo: i64 = lo.trim().parse().map_err(|_| usage(format!("bad grid bound `{lo}`")))?;
    let hi: i64 = hi.trim().parse().map_err(|_| usage(format!("bad grid bound `{hi}`")))?;
    if lo > hi {
        return Err(usage("grid lower bound exceeds upper bound"));
    }
    Ok(Grid::Box { lo, hi })
}

fn order_text(o: Order) -> String {
    match o {
        Order::Finite(k) => k.to_string(),
        Order::Infinity => "inf".into(),
    }
}

fn generators_text(gens: &[Generator]) -> String {
    gens.iter().map(|g| format!("{}  weight {}\n", g.poly, g.weight)).collect()
}

fn algebra_text(g: &ReesAlgebra) -> String {
    format!("ring {}\n{}", g.ring(), generators_text(g.generators()))
}

fn report_text(r: &RunReport) -> String {
    let mut out = format!("kind: {}\nindicators: {:?}\n", r.kind, r.indicators);
    if let Some(seqs) = r.summary["sequences"].as_array() {
        out.push_str(&format!("outcome: {}\nblow-ups: {}\n", r.summary["outcome"].as_str().unwrap_or(""), r.summary["blowups"]));
        if let Some(m) = r.summary["message"].as_str() {
            out.push_str(&format!("note: {m}\n"));
        }
        for s in seqs {
            let pt: Vec<&str> = s["point"].as_array().into_iter().flatten().filter_map(Value::as_str).collect();
            let seq: Vec<String> = s["sequence"].as_array().into_iter().flatten().map(ToString::to_string).collect();
            out.push_str(&format!("point ({}): sequence [{}]\n", pt.join(", "), seq.join(", ")));
        }
    }
    if let Some(leaves) = r.summary["leaves"].as_array() {
        out.push_str("leaves:\n");
        for leaf in leaves {
            let path = leaf["path"].as_array().map(|p| p.iter().filter_map(Value::as_str).collect::<Vec<_>>().join("/")).unwrap_or_default();
            let path = if path.is_empty() { "(root)".to_string() } else { path };
            let body = if let Some(c) = leaf["curve"].as_str() {
                c.to_string()
            } else if let Some(entries) = leaf["object"]["presentation"]["entries"].as_array() {
                entries.iter().filter_map(|e| e["poly"].as_str()).collect::<Vec<_>>().join("; ")
            } else if let Some(gens) = leaf["object"]["algebra"]["generators"].as_array() {
                gens.iter().map(|g| format!("{} weight {}", g["poly"].as_str().unwrap_or(""), g["weight"])).collect::<Vec<_>>().join("; ")
            } else {
                String::new()
            };
            out.push_str(&format!("  {path}: {body}\n"));
        }
    }
    for v in &r.verdicts {
        out.push_str(&format!("[{}] {}: {}\n", if v.passed { "ok" } else { "FAIL" }, v.name, v.detail));
    }
    out
}

fn selftest_output(r: &SelftestReport) -> Output {
    Output { json: r.to_json(), text: r.to_text(), ok: r.passed() }
}

fn dispatch(ctx: &Ctx, cmd: Command) -> Result<Output> {
    Ok(match cmd {
        Command::Order { ring, poly, at } => {
            let f = ctx.polynomial(ring.as_deref(), &poly)?;
            let p = point(&at)?;
            let o = f.order_at_point(&p)?;
            Output::new(json!({"poly": f.to_string(), "point": point_json(&p), "order": o}), order_text(o))
        }
        Command::Sing { algebra, grid: g, field } => {
            let a = ctx.algebra(&algebra)?;
            let sing = match a.ring().characteristic() {
                0 => Some(a.sing_generators()?),
                _ => None,
            };
            let mut text = String::new();
            match &sing {
                Some(s) => s.generators.iter().for_each(|f| text.push_str(&format!("{f}\n"))),
                None => text.push_str("(no derivative generators in positive characteristic; use --field or --grid)\n"),
            }
            let mut out = json!({
                "algebra": a.to_json(),
                "sing_generators": sing.as_ref().map(|s| s.generators.iter().map(ToString::to_string).collect::<Vec<_>>()),
            });
            let sampled = match (g, field) {
                (Some(spec), _) => Some((a.clone(), grid(&spec)?)),
                (None, Some(p)) => Some((a.reduce_mod(p)?, Grid::FiniteField { p })),
                _ => None,
            };
            if let Some((alg, gr)) = sampled {
                let pts = alg.sing_on_grid(&gr)?;
                text.push_str(&format!("{} grid points in Sing\n", pts.len()));
                for p in &pts {
                    text.push_str(&format!("  ({})\n", point_text(p)));
                }
                out["points"] = pts.iter().map(|p| point_json(p)).collect::<Vec<_>>().into();
                out["grid"] = match gr {
                    Grid::Box { lo, hi } => json!({"lo": lo, "hi": hi}),
                    Grid::FiniteField { p } => json!({"field": p}),
                };
            }
            Output::new(out, text)
        }
        Command::Ord { algebra, at } => {
            let a = ctx.algebra(&algebra)?;
            let p = point(&at)?;
            let o = a.ord_at(&p)?;
            Output::new(json!({"point": point_json(&p), "ord": format_rational(&o)}), format_rational(&o))
        }
        Command::Permissible { algebra, center: c } => {
            let a = ctx.algebra(&algebra)?;
            let c = center(&c)?;
            let reason = a.permissibility_failure(&c)?;
            let text = match &reason {
                None => "permissible".to_string(),
                Some(r) => format!("not permissible: {r}"),
            };
            Output::new(json!({"permissible": reason.is_none(), "reason": reason}), text)
        }
        Command::Transform { ring, gens, algebra, monic, var, center: c } => {
            let c = center(&c)?;
            let algebra = AlgebraArgs { ring: ring.clone(), gens, algebra };
            let monic = MonicArgs { ring, monic, var };
            let (ring, object): (Ring, ChartRenderer) = if monic.monic.is_some() {
                let f = ctx.monic(&monic)?;
                let ring = f.base().clone();
                (
                    ring,
                    Box::new(move |chart| {
                        let g = strict_transform_monic(&f, chart)?;
                        Ok((json!({"var": g.var(), "poly": g.to_string()}), format!("{g}\n")))
                    }),
                )
            } else {
                let a = ctx.algebra(&algebra)?;
                let ring = a.ring().clone();
                (
                    ring,
                    Box::new(move |chart| {
                        let g = a.transform(chart)?;
                        Ok((g.to_json(), algebra_text(&g)))
                    }),
                )
            };
            let mut charts = Vec::new();
            let mut text = String::new();
            for chart in make_charts(&ring, &c)? {
                let (obj, t) = object(&chart)?;
                let subs: serde_json::Map<String, Value> =
                    chart.substitution.iter().map(|(k, v)| (k.clone(), Value::from(v.to_string()))).collect();
                text.push_str(&format!("chart {}:\n", chart.path.join("/")));
                for (k, v) in &subs {
                    text.push_str(&format!("  {k} -> {}\n", v.as_str().unwrap_or("")));
                }
                text.push_str(&t.lines().map(|l| format!("  {l}\n")).collect::<String>());
                charts.push(json!({"chart": chart.path, "ring": ring_json(&chart.ring), "substitution": subs, "trivial": chart.trivial, "result": obj}));
            }
            Output::new(json!({"charts": charts}), text)
        }
        Command::Elim { monic } => {
            let f = ctx.monic(&monic)?;
            let report = elim_report(&f)?;
            let mut text = format!("shift: {}\n", report["shift"].as_str().unwrap_or(""));
            for g in report["generators"].as_array().into_iter().flatten() {
                text.push_str(&format!("{}  weight {}\n", g["poly"].as_str().unwrap_or(""), g["weight"]));
            }
            Output::new(report, text)
        }
        Command::ImageNfold { monic } => {
            let f = ctx.monic(&monic)?;
            let ideal = image_nfold(&f)?;
            let text: String = ideal.generators.iter().map(|g| format!("{g}\n")).collect();
            Output::new(ideal.to_json(), text)
        }
        Command::Presentation { action } => match action {
            PresentationAction::Attach { p } => {
                let pres = ctx.presentation(&p)?;
                let a = pres.attach_algebra()?;
                Output::new(json!({"presentation": pres.to_json(), "algebra": a.algebra.to_json()}), algebra_text(&a.algebra))
            }
            PresentationAction::Test { p, at } => {
                let pres = ctx.presentation(&p)?;
                let q = point(&at)?;
                let t = pres.transversality_test(&q)?;
                let mut text = format!(
                    "{} at ({})\nlifted point ({})\n",
                    if t.holds { "n-fold" } else { "not n-fold" },
                    point_text(&q),
                    point_text(&t.lifted)
                );
                for f in &t.factors {
                    let orders: Vec<String> = f.orders.iter().map(|o| order_text(*o)).collect();
                    text.push_str(&format!(
                        "  {} (degree {}): orders of b_2..b_n = [{}] {}\n",
                        f.var,
                        f.degree,
                        orders.join(", "),
                        if f.satisfied { "ok" } else { "fails" }
                    ));
                }
                Output::new(t.to_json(), text)
            }
            PresentationAction::Transform { p, center: c } => {
                let pres = ctx.presentation(&p)?;
                let c = center(&c)?;
                let mut charts = Vec::new();
                let mut text = String::new();
                for chart in make_charts(pres.base(), &c)? {
                    let t = pres.transform(&chart)?;
                    text.push_str(&format!("chart {}:\n", chart.path.join("/")));
                    for e in t.entries() {
                        text.push_str(&format!("  {e}\n"));
                    }
                    charts.push(json!({"chart": chart.path, "presentation": t.to_json()}));
                }
                Output::new(json!({"charts": charts}), text)
            }
        },
        Command::Zariski { monic, at } => {
            let f = ctx.monic(&monic)?;
            let m = point(&at)?;
            let r = zariski_check(&f, &m)?;
            let roots: Vec<String> = r.roots.iter().map(|(c, k)| format!("{} (multiplicity {k})", format_rational(c))).collect();
            let verdict = if r.holds() {
                "holds"
            } else if r.conclusive {
                "FAILS"
            } else {
                "inconclusive (irrational roots)"
            };
            let roots = if roots.is_empty() { "none rational".to_string() } else { roots.join(", ") };
            let text = format!("rank {}, sum of local multiplicities {}: {verdict}\nroots: {roots}\n", r.rank, r.sum);
            Output::new(r.to_json(), text)
        }
        Command::Run { script } => {
            let s = match ctx.session.scripts.get(&script) {
                Some(s) => s.clone(),
                None => {
                    let text = std::fs::read_to_string(&script)
                        .map_err(|e| Error::Format(format!("cannot read script {script}: {e}")))?;
                    BlowupScript::from_json(&text)?
                }
            };
            let r = run_script(&s)?;
            Output { json: r.to_json(), text: report_text(&r), ok: true }
        }
        Command::ResolveCurve { ring, poly, budget } => {
            let f = ctx.polynomial(Some(&ring), &poly)?;
            let r = resolve_plane_curve_with_budget(&f, budget)?;
            Output::new(r.report.to_json(), report_text(&r.report))
        }
        Command::Selftest { catalog, criterion } => {
            let catalog = match catalog {
                None => Catalog::builtin(),
                // An unreadable file behaves like a corrupted one: the
                // criteria that need it fail by name.
                Some(path) => Catalog::from_json(&std::fs::read_to_string(&path).unwrap_or_default()),
            };
            match criterion {
                None => selftest_output(&run_selftest(ctx.seed, &catalog)),
                Some(id) => {
                    let c = run_criterion(id, ctx.seed, &catalog).ok_or_else(|| usage(format!("no criterion {id}; use 1-10")))?;
                    selftest_output(&SelftestReport { seed: ctx.seed, criteria: vec![c] })
                }
            }
        }
        Command::SessionCheck { path } => {
            let s = Session::load(&path)?;
            let summary = s.summary();
            Output::new(summary.clone(), canonical(&summary))
        }
    })
}

fn seed(cli_seed: Option<u64>, session: &Session) -> Result<u64> {
    if let Ok(env) = std::env::var("MULTRES_SEED") {
        return env.trim().parse().map_err(|_| usage(format!("MULTRES_SEED={env} is not an unsigned integer")));
    }
    Ok(cli_seed.or(session.seed).unwrap_or(DEFAULT_SEED))
}

fn run(cli: Cli) -> Result<(bool, Output)> {
    let session = match &cli.session {
        Some(path) => Session::load(path)?,
        None => Session::default(),
    };
    let ctx = Ctx { json: cli.json, seed: seed(cli.seed, &session)?, session };
    let out = dispatch(&ctx, cli.command)?;
    Ok((ctx.json, out))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok((json, out)) => {
            if json {
                println!("{}", canonical(&out.json));
            } else {
                print!("{}", out.text);
                if !out.text.ends_with('\n') {
                    println!();
                }
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            if json {
                println!("{}", canonical(&json!({"error": e.to_string(), "internal": e.is_internal()})));
            }
            eprintln!("error: {e}");
            ExitCode::from(if e.is_internal() { 1 } else { 2 })
        }
    }
}
