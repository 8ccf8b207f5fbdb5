//! Session files: named rings, polynomials, presentations, algebras and
//! scripts in one JSON document.
//!
//! ```json
//! {
//!   "format": 1,
//!   "seed": 7,
//!   "rings": {"S": "Q[x,y]"},
//!   "polynomials": {"cusp": {"ring": "S", "poly": "y^2 - x^3"}},
//!   "presentations": {"whitney": {"ring": "S", "entries": [{"var": "X1", "poly": "X1^2 - x^2*y"}]}},
//!   "algebras": {"g": {"ring": "S", "generators": [{"poly": "x^2", "weight": 2}]}},
//!   "scripts": {"line": {"object": {"presentation": "whitney"}, "steps": [{"center": {"vars": ["x"]}}]}}
//! }
//! ```

use std::collections::{BTreeMap, BTreeSet};

use multres::driver::{BlowupScript, ScriptObject, Step, StepSpec};
use multres::presentation::EntrySpec;
use multres::rees::GeneratorSpec;
use multres::{parse, Error, Generator, MonicPoly, Polynomial, Presentation, ReesAlgebra, Result, Ring, RingCtx};
use serde::Deserialize;
use serde_json::{json, Value};

pub const FORMAT: u32 = 1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SessionFile {
    format: u32,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    rings: BTreeMap<String, String>,
    #[serde(default)]
    polynomials: BTreeMap<String, NamedPoly>,
    #[serde(default)]
    presentations: BTreeMap<String, NamedPresentation>,
    #[serde(default)]
    algebras: BTreeMap<String, NamedAlgebra>,
    #[serde(default)]
    scripts: BTreeMap<String, NamedScript>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct NamedPoly {
    ring: String,
    poly: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct NamedPresentation {
    ring: String,
    entries: Vec<EntrySpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct NamedAlgebra {
    ring: String,
    generators: Vec<GeneratorSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "lowercase")]
enum ObjectRef {
    Presentation(String),
    Algebra(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct NamedScript {
    object: ObjectRef,
    #[serde(default)]
    steps: Vec<StepSpec>,
}

#[derive(Debug, Clone, Default)]
pub struct Session {
    pub seed: Option<u64>,
    pub rings: BTreeMap<String, Ring>,
    pub polynomials: BTreeMap<String, Polynomial>,
    pub presentations: BTreeMap<String, Presentation>,
    pub algebras: BTreeMap<String, ReesAlgebra>,
    pub scripts: BTreeMap<String, BlowupScript>,
}

fn missing(kind: &str, name: &str) -> Error {
    Error::Format(format!("session: unknown {kind} `{name}`"))
}

impl Session {
    pub fn from_json(text: &str) -> Result<Session> {
        let file: SessionFile = multres::json::from_str(text)?;
        if file.format != FORMAT {
            return Err(Error::Format(format!("session format {} is not supported (expected {FORMAT})", file.format)));
        }
        let mut seen = BTreeSet::new();
        let names = file
            .rings
            .keys()
            .chain(file.polynomials.keys())
            .chain(file.presentations.keys())
            .chain(file.algebras.keys())
            .chain(file.scripts.keys());
        for name in names {
            if !seen.insert(name) {
                return Err(Error::Format(format!("session: name `{name}` is used twice")));
            }
        }

        let mut s = Session { seed: file.seed, ..Session::default() };
        for (name, spec) in &file.rings {
            s.rings.insert(name.clone(), RingCtx::parse(spec)?);
        }
        for (name, p) in &file.polynomials {
            let ring = s.ring(&p.ring)?;
            s.polynomials.insert(name.clone(), parse(&p.poly, &ring)?);
        }
        for (name, p) in &file.presentations {
            let base = s.ring(&p.ring)?;
            let entries = p
                .entries
                .iter()
                .map(|e| MonicPoly::parse(&e.poly, &e.var, &base))
                .collect::<Result<Vec<_>>>()?;
            s.presentations.insert(name.clone(), Presentation::new(&base, entries)?);
        }
        for (name, a) in &file.algebras {
            let ring = s.ring(&a.ring)?;
            let gens = a
                .generators
                .iter()
                .map(|g| Ok(Generator::new(parse(&g.poly, &ring)?, g.weight)))
                .collect::<Result<Vec<_>>>()?;
            s.algebras.insert(name.clone(), ReesAlgebra::new(&ring, gens)?);
        }
        for (name, script) in &file.scripts {
            let object = match &script.object {
                ObjectRef::Presentation(p) => ScriptObject::Presentation(
                    s.presentations.get(p).cloned().ok_or_else(|| missing("presentation", p))?,
                ),
                ObjectRef::Algebra(a) => {
                    ScriptObject::Rees(s.algebras.get(a).cloned().ok_or_else(|| missing("algebra", a))?)
                }
            };
            let steps = script
                .steps
                .iter()
                .map(|st| Ok(Step { chart: st.chart.clone(), center: st.center.to_center()? }))
                .collect::<Result<Vec<_>>>()?;
            s.scripts.insert(name.clone(), BlowupScript { object, steps });
        }
        Ok(s)
    }

    pub fn load(path: &str) -> Result<Session> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Format(format!("cannot read {path}: {e}")))?;
        Self::from_json(&text)
    }

    fn ring(&self, name: &str) -> Result<Ring> {
        self.rings.get(name).cloned().ok_or_else(|| missing("ring", name))
    }

    pub fn polynomial(&self, name: &str) -> Result<Polynomial> {
        self.polynomials.get(name).cloned().ok_or_else(|| missing("polynomial", name))
    }

    pub fn presentation(&self, name: &str) -> Result<Presentation> {
        self.presentations.get(name).cloned().ok_or_else(|| missing("presentation", name))
    }

    pub fn algebra(&self, name: &str) -> Result<ReesAlgebra> {
        self.algebras.get(name).cloned().ok_or_else(|| missing("algebra", name))
    }

    pub fn summary(&self) -> Value {
        let keys = |m: Vec<&String>| m.into_iter().cloned().collect::<Vec<_>>();
        json!({
            "format": FORMAT,
            "seed": self.seed,
            "rings": self.rings.iter().map(|(k, r)| (k.clone(), Value::from(r.to_string()))).collect::<serde_json::Map<_, _>>(),
            "polynomials": self.polynomials.iter().map(|(k, p)| (k.clone(), Value::from(p.to_string()))).collect::<serde_json::Map<_, _>>(),
            "presentations": keys(self.presentations.keys().collect()),
            "algebras": keys(self.algebras.keys().collect()),
            "scripts": keys(self.scripts.keys().collect()),
        })
    }
}
