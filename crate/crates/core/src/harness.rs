//! Property suites, case generation and reports.
//!
//! Every case draws from its own stream derived from `(seed, property, case)`,
//! so cases can run in parallel and reports stay byte-identical across runs.

use std::sync::Arc;
use std::time::{Duration, Instant};

use num_traits::Signed;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::codensity::{
    self, check_naturality, hull_membership, lift, naturality_witness, reconstruct_phi, respects_d0, sample_affine,
    AffineDomain, AffineMap, D0Action, D0Map, MeasInto,
};
use crate::counterexample::{self as cx, EventualFn, FinCofSet};
use crate::duality::{self, Functional, FunctionalMixture, LimitWitness};
use crate::error::{Error, Result};
use crate::giry::{self, Kernel, MetaMeasure};
use crate::measure::{self, change_of_variables_check, Continuous, IntervalMeasure, Measure};
use crate::random::{self, CaseRng};
use crate::rational::{self, fmt_vec, one, zero, Rat};
use crate::sigma::{self, FinSpace, IFunction, MeasMap, PointSet, Space};
use crate::verdict::{Outcome, Verdict};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: u64,
    pub max_carrier: usize,
    pub max_arity: usize,
    pub max_hull_dim: usize,
    /// Share of generated functionals that are deliberately not integration operators.
    pub adversarial_percent: u32,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 0, trials: 500, max_carrier: 8, max_arity: 4, max_hull_dim: 3, adversarial_percent: 20 }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("trials", self.trials as usize),
            ("max_carrier", self.max_carrier),
            ("max_arity", self.max_arity),
            ("max_hull_dim", self.max_hull_dim),
        ];
        if let Some((name, _)) = counts.iter().find(|(_, v)| *v == 0) {
            return Err(Error::Invalid(format!("{name} must be at least 1")));
        }
        if self.max_carrier > sigma::DEFAULT_MAX_CARRIER {
            return Err(Error::CarrierTooLarge { len: self.max_carrier, cap: sigma::DEFAULT_MAX_CARRIER });
        }
        if self.max_hull_dim > codensity::DEFAULT_MAX_HULL_DIM {
            return Err(Error::Invalid(format!("max_hull_dim is capped at {}", codensity::DEFAULT_MAX_HULL_DIM)));
        }
        if self.adversarial_percent > 100 {
            return Err(Error::Invalid("adversarial_percent must be at most 100".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyRecord {
    pub name: String,
    pub anchor: String,
    pub result: Outcome,
    pub witness: Value,
    pub trials: u64,
    /// Wall time; kept out of the serialized report so reruns compare byte for byte.
    #[serde(skip)]
    pub duration: Duration,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub config: SuiteConfig,
    pub passed: bool,
    pub properties: Vec<PropertyRecord>,
}

impl Report {
    pub fn failures(&self) -> impl Iterator<Item = &PropertyRecord> {
        self.properties.iter().filter(|p| p.result == Outcome::Fail)
    }

    pub fn property(&self, name: &str) -> Option<&PropertyRecord> {
        self.properties.iter().find(|p| p.name == name)
    }
}

pub const SUITES: [&str; 7] = [
    "monad-laws",
    "duality",
    "change-of-variables",
    "naturality",
    "monoid-reduction",
    "convex-bound",
    "counterexample",
];

/// Runs a named suite, or every suite for `"all"`.
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<Report> {
    cfg.validate()?;
    let names: Vec<&str> = match name {
        "all" => SUITES.to_vec(),
        n if SUITES.contains(&n) => vec![n],
        other => {
            return Err(Error::Invalid(format!(
                "unknown suite `{other}`; expected one of {}, all",
                SUITES.join(", ")
            )))
        }
    };
    let mut properties = Vec::new();
    for n in names {
        let mut s = Suite { cfg, records: Vec::new(), prefix: n };
        match n {
            "monad-laws" => monad_laws(&mut s),
            "duality" => duality_suite(&mut s),
            "change-of-variables" => change_of_variables(&mut s),
            "naturality" => naturality(&mut s),
            "monoid-reduction" => monoid_reduction(&mut s),
            "convex-bound" => convex_bound(&mut s),
            "counterexample" => counterexample(&mut s),
            _ => unreachable!(),
        }
        properties.extend(s.records);
    }
    let passed = properties.iter().all(|p| p.result == Outcome::Pass);
    Ok(Report { suite: name.to_string(), config: cfg.clone(), passed, properties })
}

struct Suite<'a> {
    cfg: &'a SuiteConfig,
    records: Vec<PropertyRecord>,
    prefix: &'a str,
}

type CaseResult = std::result::Result<(), Value>;

impl Suite<'_> {
    fn record(&mut self, name: &str, anchor: &str, trials: u64, started: Instant, failure: Option<Value>, witness: Value) {
        let (result, witness) = match failure {
            Some(w) => (Outcome::Fail, w),
            None => (Outcome::Pass, witness),
        };
        self.records.push(PropertyRecord {
            name: format!("{}/{}", self.prefix, name),
            anchor: anchor.to_string(),
            result,
            witness,
            trials,
            duration: started.elapsed(),
        });
    }

    /// Runs `trials` independent cases in parallel; the failure with the lowest
    /// case index is reported.
    fn cases<F>(&mut self, name: &str, anchor: &str, trials: u64, case: F)
    where
        F: Fn(&mut CaseRng) -> CaseResult + Sync,
    {
        let started = Instant::now();
        let key = format!("{}/{}", self.prefix, name);
        let seed = self.cfg.seed;
        let failure = (0..trials)
            .into_par_iter()
            .filter_map(|i| {
                let mut rng = random::case_rng(seed, &key, i);
                case(&mut rng).err().map(|w| (i, w))
            })
            .min_by_key(|(i, _)| *i)
            .map(|(i, w)| json!({"case": i, "detail": w}));
        self.record(name, anchor, trials, started, failure, Value::Null);
    }

    /// A single deterministic check producing its own witness.
    fn single<F>(&mut self, name: &str, anchor: &str, check: F)
    where
        F: FnOnce(&mut CaseRng) -> (u64, std::result::Result<Value, Value>),
    {
        let started = Instant::now();
        let key = format!("{}/{}", self.prefix, name);
        let mut rng = random::case_rng(self.cfg.seed, &key, 0);
        let (trials, out) = check(&mut rng);
        match out {
            Ok(w) => self.record(name, anchor, trials, started, None, w),
            Err(w) => self.record(name, anchor, trials, started, Some(w), Value::Null),
        }
    }
}

fn ensure(ok: bool, witness: impl FnOnce() -> Value) -> CaseResult {
    if ok {
        Ok(())
    } else {
        Err(witness())
    }
}

fn show_measure(m: &Measure) -> Value {
    json!(fmt_vec(m.weights()))
}

pub fn generate_space(cfg: &SuiteConfig, rng: &mut CaseRng) -> Space {
    Arc::new(random::space(rng, cfg.max_carrier))
}

pub fn generate_measure(space: &Space, rng: &mut CaseRng) -> Measure {
    random::measure(rng, space, random::DEFAULT_MAX_DENOM)
}

pub fn generate_kernel(dom: &Space, cod: &Space, rng: &mut CaseRng) -> Kernel {
    let rows = (0..dom.num_atoms()).map(|_| generate_measure(cod, rng)).collect();
    Kernel::new(dom.clone(), cod.clone(), rows).expect("rows live on the codomain")
}

/// Kinds of generated functionals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FunctionalKind {
    Extensional,
    Max,
    Square { atom: usize },
    ClampedSum,
}

impl FunctionalKind {
    pub fn is_adversarial(self) -> bool {
        self != FunctionalKind::Extensional
    }

    /// Builds the functional on the discrete space of `atoms` points.
    fn build_on_atoms(self, atoms: usize) -> Functional {
        let space = Arc::new(FinSpace::discrete_n(atoms));
        match self {
            FunctionalKind::Max => Functional::max(space),
            FunctionalKind::ClampedSum => Functional::clamped_sum(space),
            FunctionalKind::Square { atom } => Functional::square_at(space, atom).expect("atom in range"),
            FunctionalKind::Extensional => unreachable!("extensional cases are never shrunk"),
        }
    }
}

/// An extensional integration operator, or with probability `adversarial_percent`
/// one of the max, square and clamped-sum non-examples.
pub fn generate_functional(cfg: &SuiteConfig, space: &Space, rng: &mut CaseRng) -> (Functional, FunctionalKind) {
    if rng.gen_range(0..100) < cfg.adversarial_percent {
        match rng.gen_range(0..3) {
            0 => (Functional::max(space.clone()), FunctionalKind::Max),
            1 => {
                let p = rng.gen_range(0..space.len());
                let f = Functional::square_at(space.clone(), p).expect("point in range");
                (f, FunctionalKind::Square { atom: space.atom_of(p) })
            }
            _ => (Functional::clamped_sum(space.clone()), FunctionalKind::ClampedSum),
        }
    } else {
        (extensional(space, rng), FunctionalKind::Extensional)
    }
}

fn extensional(space: &Space, rng: &mut CaseRng) -> Functional {
    duality::lambda_tilde(&generate_measure(space, rng))
}

/// The same evaluation hidden behind a closure, so checks cannot read coefficients.
fn opaque(phi: &Functional) -> Functional {
    let inner = phi.clone();
    Functional::intensional(phi.space().clone(), format!("opaque({})", phi.label()), move |f| {
        inner.eval(f).expect("same space")
    })
}

fn ifn(space: &Space, rng: &mut CaseRng) -> IFunction {
    random::ifunction(rng, space, random::DEFAULT_MAX_DENOM)
}

fn urat(rng: &mut CaseRng) -> Rat {
    random::unit_rat(rng, random::DEFAULT_MAX_DENOM)
}

const MONAD: &str = "Giry monad on finite spaces: unit, multiplication and Kleisli laws";

fn monad_laws(s: &mut Suite<'_>) {
    let t = s.cfg.trials;
    let cfg = s.cfg.clone();
    let space = |rng: &mut CaseRng| generate_space(&cfg, rng);
    let meta = |b: &Space, rng: &mut CaseRng| {
        let k = rng.gen_range(1..=4);
        let ws = random::simplex_point(rng, k, random::DEFAULT_MAX_DENOM);
        let support = ws.into_iter().map(|w| (generate_measure(b, rng), w)).collect();
        MetaMeasure::new(b.clone(), support).expect("weights sum to one")
    };

    s.cases("left-unit", MONAD, t, |rng| {
        let b = space(rng);
        let pi = generate_measure(&b, rng);
        let out = giry::mu(&MetaMeasure::dirac(pi.clone()));
        ensure(out == pi, || json!({"pi": show_measure(&pi), "mu_of_dirac": show_measure(&out)}))
    });
    s.cases("right-unit", MONAD, t, |rng| {
        let b = space(rng);
        let pi = generate_measure(&b, rng);
        let out = giry::mu(&MetaMeasure::of_diracs(&pi));
        ensure(out == pi, || json!({"pi": show_measure(&pi), "mu_of_diracs": show_measure(&out)}))
    });
    s.cases("associativity", MONAD, t, |rng| {
        let b = space(rng);
        let k = rng.gen_range(1..=3);
        let ws = random::simplex_point(rng, k, random::DEFAULT_MAX_DENOM);
        let outer: Vec<(MetaMeasure, Rat)> = ws.into_iter().map(|w| (meta(&b, rng), w)).collect();
        let lhs = giry::mu(&giry::map_mu(b.clone(), &outer).expect("valid mixture"));
        let rhs = giry::mu(&MetaMeasure::flatten(b.clone(), &outer).expect("valid mixture"));
        ensure(lhs == rhs, || json!({"mu_after_map_mu": show_measure(&lhs), "mu_after_mu": show_measure(&rhs)}))
    });
    s.cases("bind-left-unit", MONAD, t, |rng| {
        let (d, c) = (space(rng), space(rng));
        let k = generate_kernel(&d, &c, rng);
        let p = rng.gen_range(0..d.len());
        let out = giry::bind(&giry::unit(d.clone(), p).expect("point"), &k).expect("aligned");
        ensure(out == *k.at_point(p), || json!({"point": p, "bind": show_measure(&out)}))
    });
    s.cases("bind-right-unit", MONAD, t, |rng| {
        let d = space(rng);
        let pi = generate_measure(&d, rng);
        let out = giry::bind(&pi, &Kernel::identity(d.clone())).expect("aligned");
        ensure(out == pi, || json!({"pi": show_measure(&pi), "bind": show_measure(&out)}))
    });
    s.cases("bind-associativity", MONAD, t, |rng| {
        let (a, b, c) = (space(rng), space(rng), space(rng));
        let (k1, k2) = (generate_kernel(&a, &b, rng), generate_kernel(&b, &c, rng));
        let pi = generate_measure(&a, rng);
        let lhs = giry::bind(&giry::bind(&pi, &k1).expect("aligned"), &k2).expect("aligned");
        let rhs = giry::bind(&pi, &giry::kleisli_compose(&k1, &k2).expect("aligned")).expect("aligned");
        ensure(lhs == rhs, || json!({"stepwise": show_measure(&lhs), "composed": show_measure(&rhs)}))
    });
    s.cases("kleisli-associativity", MONAD, t, |rng| {
        let (a, b, c, d) = (space(rng), space(rng), space(rng), space(rng));
        let (k1, k2, k3) = (generate_kernel(&a, &b, rng), generate_kernel(&b, &c, rng), generate_kernel(&c, &d, rng));
        let left = giry::kleisli_compose(&giry::kleisli_compose(&k1, &k2).expect("aligned"), &k3).expect("aligned");
        let right = giry::kleisli_compose(&k1, &giry::kleisli_compose(&k2, &k3).expect("aligned")).expect("aligned");
        ensure(left == right, || json!({"atoms": [a.num_atoms(), b.num_atoms(), c.num_atoms(), d.num_atoms()]}))
    });
    s.cases("unit-naturality", MONAD, t, |rng| {
        let (d, c) = (space(rng), space(rng));
        let g = random::meas_map(rng, &d, &c);
        let p = rng.gen_range(0..d.len());
        let lhs = giry::unit(d.clone(), p).expect("point").pushforward(&g).expect("aligned");
        let rhs = giry::unit(c.clone(), g.apply(p)).expect("point");
        ensure(lhs == rhs, || json!({"point": p, "table": g.table()}))
    });
    s.cases("mu-naturality", MONAD, t, |rng| {
        let (d, c) = (space(rng), space(rng));
        let g = random::meas_map(rng, &d, &c);
        let rho = meta(&d, rng);
        let lhs = giry::mu(&rho).pushforward(&g).expect("aligned");
        let rhs = giry::mu(&rho.map(&g).expect("aligned"));
        ensure(lhs == rhs, || json!({"pushforward_of_mu": show_measure(&lhs), "mu_of_pushforwards": show_measure(&rhs)}))
    });
    s.cases("bind-is-matrix-product", MONAD, t, |rng| {
        let n = rng.gen_range(1..=cfg.max_carrier);
        let m = rng.gen_range(1..=cfg.max_carrier);
        let (d, c) = (Arc::new(FinSpace::discrete_n(n)), Arc::new(FinSpace::discrete_n(m)));
        let k = generate_kernel(&d, &c, rng);
        let pi = generate_measure(&d, rng);
        let product: Vec<Rat> = (0..m)
            .map(|j| (0..n).map(|i| pi.weight(i) * k.row(i).weight(j)).sum())
            .collect();
        let out = giry::bind(&pi, &k).expect("aligned");
        ensure(out.weights() == product.as_slice(), || json!({"bind": show_measure(&out), "matrix": fmt_vec(&product)}))
    });
}

const DUALITY: &str = "measures correspond bijectively to affine weakly averaging functionals";
const MORPHISM: &str = "the measure/functional correspondence preserves unit and multiplication";

fn duality_suite(s: &mut Suite<'_>) {
    let t = s.cfg.trials;
    let cfg = s.cfg.clone();
    s.cases("lambda-after-lambda-tilde", DUALITY, t, |rng| {
        let b = generate_space(&cfg, rng);
        let pi = generate_measure(&b, rng);
        let back = duality::lambda(&duality::lambda_tilde(&pi));
        ensure(back.as_ref() == Ok(&pi), || json!({"pi": show_measure(&pi)}))
    });
    s.cases("lambda-tilde-after-lambda", DUALITY, t, |rng| {
        let b = generate_space(&cfg, rng);
        let phi = extensional(&b, rng);
        match duality::lambda(&phi) {
            Ok(m) => {
                let back = duality::lambda_tilde(&m);
                ensure(duality::same_coefficients(&back, &phi) == Some(true), || json!({"phi": phi.label()}))
            }
            Err(r) => Err(json!({"phi": phi.label(), "rejected": r.witness})),
        }
    });
    s.cases("lambda-on-opaque-operators", DUALITY, t, |rng| {
        let b = generate_space(&cfg, rng);
        let pi = generate_measure(&b, rng);
        let back = duality::lambda(&opaque(&duality::lambda_tilde(&pi)));
        ensure(back.as_ref() == Ok(&pi), || json!({"pi": show_measure(&pi)}))
    });
    s.single("lambda-rejects-max", DUALITY, |rng| {
        let b = Arc::new(random::space_with_atoms(rng, 2, cfg.max_carrier));
        match duality::lambda(&Functional::max(b.clone())) {
            Err(r) if r.witness["check"] == "additivity" => (1, Ok(json!({"atoms": b.num_atoms(), "witness": r.witness}))),
            other => (1, Err(json!({"unexpected": format!("{other:?}")}))),
        }
    });
    s.cases("extensional-characterization", DUALITY, t, |rng| {
        // Affine and weakly averaging (by randomized search) iff the canonical form
        // has a₀ = 0, Σaᵢ = 1, aᵢ ≥ 0 and reproduces φ on random inputs.
        let b = generate_space(&cfg, rng);
        let phi = match rng.gen_range(0..4) {
            0 => opaque(&extensional(&b, rng)),
            1 => {
                let c = (0..b.num_atoms()).map(|_| random::signed_rat(rng, 8)).collect();
                opaque(&Functional::extensional(b.clone(), c).expect("arity"))
            }
            _ => generate_functional(&SuiteConfig { adversarial_percent: 100, ..cfg.clone() }, &b, rng).0,
        };
        let seed = rng.gen();
        let by_search = duality::is_affine(&phi, 30, seed).passed()
            && duality::integration_properties(&phi, 30, seed).iter().any(|v| v.property == "weakly-averaging" && v.passed());
        let (a0, a) = phi.canonical_form();
        let canonical = duality::Functional::extensional(b.clone(), a.clone()).expect("arity");
        let valid_form = a0 == zero() && a.iter().sum::<Rat>() == one() && a.iter().all(|x| *x >= zero());
        let reproduces = (0..30).all(|_| {
            let f = ifn(&b, rng);
            phi.eval(&f) == canonical.eval(&f)
        });
        let by_form = valid_form && reproduces;
        ensure(by_search == by_form, || {
            json!({"phi": phi.label(), "by_search": by_search, "valid_form": valid_form, "reproduces": reproduces})
        })
    });
    s.cases("integration-properties", DUALITY, t, |rng| {
        let b = generate_space(&cfg, rng);
        let phi = opaque(&extensional(&b, rng));
        let seed = rng.gen();
        let verdicts = duality::integration_properties(&phi, 20, seed);
        match verdicts.iter().find(|v| !v.passed()) {
            None => Ok(()),
            Some(v) => Err(json!({"property": v.property, "witness": v.witness})),
        }
    });
    s.single("integration-properties-refute-non-examples", DUALITY, |rng| {
        let b = Arc::new(random::space_with_atoms(rng, 2, cfg.max_carrier));
        let mut found = Vec::new();
        for phi in [Functional::max(b.clone()), Functional::square_at(b.clone(), 0).expect("point"), Functional::clamped_sum(b.clone())] {
            let verdicts = duality::integration_properties(&phi, 200, cfg.seed);
            match verdicts.iter().find(|v| !v.passed()) {
                Some(v) => found.push(json!({"functional": phi.label(), "property": v.property, "witness": v.witness})),
                None => return (3, Err(json!({"not_refuted": phi.label()}))),
            }
        }
        (3, Ok(json!(found)))
    });
    s.cases("s-map-naturality", DUALITY, t, |rng| {
        let (d, c) = (generate_space(&cfg, rng), generate_space(&cfg, rng));
        let g = random::meas_map(rng, &d, &c);
        let phi = extensional(&d, rng);
        let phi = if rng.gen() { opaque(&phi) } else { phi };
        let lhs = duality::lambda(&duality::s_map(&g, &phi).expect("aligned"));
        let rhs = duality::lambda(&phi).map(|m| m.pushforward(&g).expect("aligned"));
        ensure(lhs.is_ok() && lhs == rhs, || json!({"phi": phi.label(), "table": g.table()}))
    });
    s.cases("unit-square", MORPHISM, t, |rng| {
        let b = generate_space(&cfg, rng);
        let p = rng.gen_range(0..b.len());
        let lhs = duality::lambda(&duality::eta_s(b.clone(), p).expect("point"));
        let rhs = giry::unit(b.clone(), p).expect("point");
        ensure(lhs.as_ref() == Ok(&rhs), || json!({"point": p}))
    });
    s.cases("multiplication-square", MORPHISM, t, |rng| {
        let b = generate_space(&cfg, rng);
        let k = rng.gen_range(1..=4);
        let ws = random::simplex_point(rng, k, random::DEFAULT_MAX_DENOM);
        let comps = ws
            .into_iter()
            .map(|w| {
                let phi = extensional(&b, rng);
                (if rng.gen_ratio(1, 3) { opaque(&phi) } else { phi }, w)
            })
            .collect();
        let psi = FunctionalMixture::new(b.clone(), comps).expect("valid mixture");
        let lhs = duality::lambda(&duality::mu_s(&psi));
        let rhs = psi.lambda_image().map(|r| giry::mu(&r));
        ensure(lhs.is_ok() && lhs == rhs, || json!({"components": psi.components().iter().map(|(p, w)| json!([p.label(), rational::fmt(w)])).collect::<Vec<_>>()}))
    });
    s.cases("respects-limits-finite", DUALITY, t, |rng| {
        let b = generate_space(&cfg, rng);
        let phi = extensional(&b, rng);
        let len = rng.gen_range(0..6);
        let terms = (0..len).map(|_| ifn(&b, rng)).collect();
        let w = LimitWitness::from_list(b.clone(), terms).expect("same space");
        let v = duality::respects_limits(&phi, &w).expect("aligned");
        ensure(v.passed(), || v.witness.clone())
    });
}

const CHANGE: &str = "integral of f∘g against π equals integral of f against the pushforward";
const INTEGRAL: &str = "simple-function integral: linear, order-preserving, representation independent";
const SPACES: &str = "finite measurable spaces: σ-algebra closure, atoms, measurable maps";
const APPROX: &str = "integrals of uniformly continuous functions via uniformly converging simple functions";

fn change_of_variables(s: &mut Suite<'_>) {
    let t = s.cfg.trials;
    let cfg = s.cfg.clone();
    s.cases("change-of-variables", CHANGE, t, |rng| {
        let (d, c) = (generate_space(&cfg, rng), generate_space(&cfg, rng));
        let g = random::meas_map(rng, &d, &c);
        let pi = generate_measure(&d, rng);
        let f = ifn(&c, rng);
        ensure(change_of_variables_check(&g, &pi, &f) == Ok(true), || json!({"table": g.table(), "pi": show_measure(&pi), "f": fmt_vec(f.values())}))
    });
    s.cases("pushforward-identity", CHANGE, t, |rng| {
        let d = generate_space(&cfg, rng);
        let pi = generate_measure(&d, rng);
        ensure(pi.pushforward(&MeasMap::identity(d.clone())).as_ref() == Ok(&pi), || show_measure(&pi))
    });
    s.cases("pushforward-composition", CHANGE, t, |rng| {
        let (a, b, c) = (generate_space(&cfg, rng), generate_space(&cfg, rng), generate_space(&cfg, rng));
        let (h, g) = (random::meas_map(rng, &a, &b), random::meas_map(rng, &b, &c));
        let pi = generate_measure(&a, rng);
        let lhs = pi.pushforward(&g.after(&h).expect("aligned")).expect("aligned");
        let rhs = pi.pushforward(&h).and_then(|m| m.pushforward(&g)).expect("aligned");
        ensure(lhs == rhs, || json!({"h": h.table(), "g": g.table()}))
    });
    s.cases("integral-linearity", INTEGRAL, t, |rng| {
        let b = generate_space(&cfg, rng);
        let pi = generate_measure(&b, rng);
        let (f, g, r) = (ifn(&b, rng), ifn(&b, rng), urat(rng));
        let lhs = pi.integrate(&IFunction::mix(&r, &f, &g).expect("same space")).expect("aligned");
        let rhs = &r * pi.integrate(&f).expect("aligned") + (one() - &r) * pi.integrate(&g).expect("aligned");
        ensure(lhs == rhs, || json!({"f": fmt_vec(f.values()), "g": fmt_vec(g.values()), "r": rational::fmt(&r)}))
    });
    s.cases("integral-monotonicity", INTEGRAL, t, |rng| {
        let b = generate_space(&cfg, rng);
        let pi = generate_measure(&b, rng);
        let f = ifn(&b, rng);
        let up: Vec<Rat> = f.values().iter().map(|v| v + (one() - v) * urat(rng)).collect();
        let g = IFunction::new(b.clone(), up).expect("f ≤ g ≤ 1");
        ensure(pi.integrate(&f).expect("aligned") <= pi.integrate(&g).expect("aligned"), || json!({"f": fmt_vec(f.values()), "g": fmt_vec(g.values())}))
    });
    s.cases("representation-independence", INTEGRAL, t, |rng| {
        // f = Σ aᵢχ_{Aᵢ} over random measurable Aᵢ, with Σaᵢ ≤ 1.
        let b = generate_space(&cfg, rng);
        let pi = generate_measure(&b, rng);
        let k = rng.gen_range(1..=4);
        let terms: Vec<(Rat, PointSet)> = (0..k)
            .map(|_| {
                let set = b.atom_set((0..b.num_atoms()).filter(|_| rng.gen()));
                (urat(rng) / rational::int(k as i64), set)
            })
            .collect();
        let values = (0..b.num_atoms())
            .map(|atom| terms.iter().filter(|(_, s)| b.atoms()[atom].is_subset(*s)).map(|(a, _)| a).sum())
            .collect();
        let f = IFunction::new(b.clone(), values).expect("Σaᵢ ≤ 1");
        let by_sets: Rat = terms.iter().map(|(a, s)| a * pi.measure_of(*s).expect("measurable")).sum();
        ensure(by_sets == pi.integrate(&f).expect("aligned"), || json!({"f": fmt_vec(f.values())}))
    });
    s.cases("sigma-closure", SPACES, t, |rng| {
        let b = random::space(rng, cfg.max_carrier);
        let again = FinSpace::from_sigma(b.labels().to_vec(), b.sigma()).map_err(|e| json!(e.to_string()))?;
        ensure(again == b, || json!({"space": b.to_string()}))?;
        let sound = b.sigma().iter().all(|&set| b.atom_set(b.atoms_in(set)) == set);
        ensure(sound, || json!({"atom_soundness": b.to_string()}))
    });
    s.cases("measurability-via-atoms", SPACES, t, |rng| {
        let (d, c) = (random::space(rng, cfg.max_carrier), random::space(rng, cfg.max_carrier));
        let table = random::raw_table(rng, &d, &c);
        let by_atoms = sigma::is_measurable(&d, &c, &table);
        let exhaustive = c.sigma().iter().all(|&set| {
            let pre = PointSet::from_points((0..d.len()).filter(|&p| set.contains(table[p])));
            d.sigma().binary_search(&pre).is_ok()
        });
        ensure(by_atoms == exhaustive, || json!({"table": table, "by_atoms": by_atoms}))
    });
    s.cases("measurable-composition", SPACES, t, |rng| {
        let (a, b, c) = (generate_space(&cfg, rng), generate_space(&cfg, rng), generate_space(&cfg, rng));
        let (h, g) = (random::meas_map(rng, &a, &b), random::meas_map(rng, &b, &c));
        let comp = g.after(&h).expect("aligned");
        ensure(sigma::is_measurable(comp.dom(), comp.cod(), comp.table()), || json!({"table": comp.table()}))
    });
    s.single("approximation-integrator", APPROX, approx_checks);
}

/// Checks `integrate_approx` for `x` and `x²` against uniform[0,1] and three random
/// mixtures at tolerances 2⁻⁶ and 2⁻¹⁰, plus monotone refinement.
pub fn approx_checks(rng: &mut CaseRng) -> (u64, std::result::Result<Value, Value>) {
    type ExactMean = fn(&Rat, &Rat) -> Rat;
    let mut measures = vec![IntervalMeasure::uniform01()];
    measures.extend((0..3).map(|_| random_mixture(rng)));
    let id = |x: &Rat| x.clone();
    let id_mod = |e: &Rat| e.clone();
    let sq = |x: &Rat| x * x;
    let sq_mod = |e: &Rat| e / rational::int(2);
    let functions: [(&str, Continuous<'_>, ExactMean); 2] = [
        ("x", Continuous { f: &id, modulus: &id_mod }, |a, b| (a + b) / rational::int(2)),
        ("x^2", Continuous { f: &sq, modulus: &sq_mod }, |a, b| (a * a + a * b + b * b) / rational::int(3)),
    ];
    let mut count = 0;
    let mut worst = Vec::new();
    for (name, g, mean) in &functions {
        for m in &measures {
            let exact: Rat = m.points().iter().map(|(x, w)| w * (g.f)(x)).sum::<Rat>()
                + m.uniform_pieces().iter().map(|(a, b, w)| w * mean(a, b)).sum::<Rat>();
            for k in [6u32, 10] {
                count += 1;
                let eps = rational::dyadic(k);
                let r = match measure::integrate_approx(g, &eps, m) {
                    Ok(r) => r,
                    Err(e) => return (count, Err(json!({"function": name, "error": e.to_string()}))),
                };
                let err = (&r.value - &exact).abs();
                if err > eps || r.minorant > exact || exact > r.majorant || &r.majorant - &r.minorant > eps {
                    return (count, Err(json!({"function": name, "eps": rational::fmt(&eps), "value": rational::fmt(&r.value), "exact": rational::fmt(&exact)})));
                }
                worst.push(rational::to_f64(&err));
            }
            let chain = match measure::refinement_chain(g, &rational::dyadic(2), 6, m) {
                Ok(c) => c,
                Err(e) => return (count, Err(json!({"function": name, "error": e.to_string()}))),
            };
            let monotone = chain.windows(2).all(|w| w[0].minorant <= w[1].minorant && w[1].majorant <= w[0].majorant);
            if !monotone {
                return (count, Err(json!({"function": name, "refinement": "not monotone"})));
            }
        }
    }
    let max_err = worst.iter().cloned().fold(0.0_f64, f64::max);
    // Only a coarse order of magnitude goes into the report; values stay exact elsewhere.
    (count, Ok(json!({"cases": count, "max_error_below": format!("2^-{}", (-max_err.log2()).floor().max(0.0) as i64)})))
}

fn random_mixture(rng: &mut CaseRng) -> IntervalMeasure {
    let np = rng.gen_range(0..=2);
    let nu = rng.gen_range(1..=2);
    let ws = random::simplex_point(rng, np + nu, 16);
    let points = (0..np).map(|i| (urat(rng), ws[i].clone())).collect();
    let uniform = (0..nu)
        .map(|i| {
            let (a, b) = loop {
                let (a, b) = (urat(rng), urat(rng));
                if a != b {
                    break if a < b { (a, b) } else { (b, a) };
                }
            };
            (a, b, ws[np + i].clone())
        })
        .collect();
    IntervalMeasure::new(points, uniform).expect("valid mixture")
}

const NATURAL: &str = "codensity elements are exactly the natural families determined by an integration operator";
const CONVEX_MAPS: &str = "affine maps into I have the canonical form a₀ + Σaᵢxᵢ";

/// The forced boundary maps for arity `n`: projections, constants 0, 1 and `r`, and `⊳_r` pairs.
fn forced_maps(n: usize, r: &Rat) -> Vec<AffineMap> {
    let mut out: Vec<AffineMap> = (0..n).map(|i| AffineMap::projection(n, i).expect("i < n")).collect();
    for c in [zero(), one(), r.clone()] {
        out.push(AffineMap::constant(AffineDomain::Cube(n), c).expect("constant in I"));
    }
    if n >= 2 {
        out.push(AffineMap::convex_pair(n, 0, 1, rational::rat(1, 2)).expect("valid pair"));
        out.push(AffineMap::convex_pair(n, n - 1, 0, r.clone()).expect("valid pair"));
    }
    out
}

/// A naturality failure in data form, rebuilt on the discrete space of atoms.
#[derive(Clone, Debug)]
struct SquareCase {
    kind: FunctionalKind,
    atoms: usize,
    h: AffineMap,
    f: Vec<Vec<Rat>>,
}

impl SquareCase {
    fn fails(&self) -> bool {
        let phi = self.kind.build_on_atoms(self.atoms);
        let space = phi.space().clone();
        let fs: Vec<IFunction> = self.f.iter().map(|v| IFunction::new(space.clone(), v.clone()).expect("values in I")).collect();
        !check_naturality(&lift(phi), &self.h, &MeasInto::Cube(fs)).expect("aligned").holds()
    }

    /// Smaller variants: one coordinate dropped (fixed at 0), or one atom removed.
    fn shrink_candidates(&self) -> Vec<SquareCase> {
        let mut out = Vec::new();
        let n = self.f.len();
        if n > 1 {
            for i in 0..n {
                let mut a = self.h.coeffs().to_vec();
                a.remove(i);
                if let Ok(h) = AffineMap::new(AffineDomain::Cube(n - 1), self.h.a0().clone(), a) {
                    let mut f = self.f.clone();
                    f.remove(i);
                    out.push(SquareCase { h, f, ..self.clone() });
                }
            }
        }
        if self.atoms > 1 {
            for k in 0..self.atoms {
                let kind = match self.kind {
                    FunctionalKind::Square { atom } if atom == k => continue,
                    FunctionalKind::Square { atom } => FunctionalKind::Square { atom: if atom > k { atom - 1 } else { atom } },
                    other => other,
                };
                let f = self.f.iter().map(|v| v.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, x)| x.clone()).collect()).collect();
                out.push(SquareCase { kind, atoms: self.atoms - 1, h: self.h.clone(), f });
            }
        }
        out
    }

    fn to_json(&self) -> Value {
        json!({"functional": self.kind, "atoms": self.atoms, "h": self.h, "f": self.f.iter().map(|v| fmt_vec(v)).collect::<Vec<_>>()})
    }
}

/// Greedy shrinking: take the first smaller case that still fails, up to `budget` steps.
fn shrink(mut case: SquareCase, budget: usize) -> (SquareCase, usize) {
    let mut steps = 0;
    'outer: while steps < budget {
        for c in case.shrink_candidates() {
            steps += 1;
            if c.fails() {
                case = c;
                continue 'outer;
            }
            if steps >= budget {
                break 'outer;
            }
        }
        break;
    }
    (case, steps)
}

/// Bounded search for a failing naturality square: constants, `⊳_r` on atom
/// indicators, forced boundary maps, then random maps of arity ≤ `max_arity`.
pub fn find_refutation(phi: &Functional, max_arity: usize, budget: usize, rng: &mut CaseRng) -> Option<(AffineMap, MeasInto, Value)> {
    let space = phi.space().clone();
    let alpha = lift(phi.clone());
    let mut candidates: Vec<(AffineMap, Vec<IFunction>)> = Vec::new();
    let half = rational::rat(1, 2);
    for r in [half.clone(), rational::rat(1, 3)] {
        candidates.push((AffineMap::constant(AffineDomain::Cube(1), r).expect("constant"), vec![IFunction::zero(space.clone())]));
    }
    for a in 0..space.num_atoms() {
        for b in a + 1..space.num_atoms() {
            candidates.push((
                AffineMap::convex(half.clone()).expect("⊳"),
                vec![IFunction::atom_indicator(space.clone(), a), IFunction::atom_indicator(space.clone(), b)],
            ));
        }
    }
    candidates.push((
        AffineMap::convex(half.clone()).expect("⊳"),
        vec![IFunction::constant(space.clone(), one()).expect("1̄"), IFunction::zero(space.clone())],
    ));
    while candidates.len() < budget {
        let n = rng.gen_range(1..=max_arity.max(1));
        let fs: Vec<IFunction> = (0..n).map(|_| ifn(&space, rng)).collect();
        let h = if rng.gen() {
            let r = urat(rng);
            let forced = forced_maps(n, &r);
            forced[rng.gen_range(0..forced.len())].clone()
        } else {
            sample_affine(rng, AffineDomain::Cube(n), max_arity)
        };
        candidates.push((h, fs));
    }
    candidates.into_iter().take(budget).find_map(|(h, fs)| {
        let f = MeasInto::Cube(fs);
        let n = check_naturality(&alpha, &h, &f).expect("aligned");
        (!n.holds()).then(|| {
            let w = naturality_witness(&alpha, &h, &f, &n);
            (h, f, w)
        })
    })
}

fn refutation_with_shrink(phi: &Functional, kind: FunctionalKind, max_arity: usize, rng: &mut CaseRng) -> Option<Value> {
    let (h, f, witness) = find_refutation(phi, max_arity, 400, rng)?;
    let MeasInto::Cube(fs) = f else { unreachable!("search only uses cubes") };
    let case = SquareCase { kind, atoms: phi.space().num_atoms(), h, f: fs.iter().map(|g| g.values().to_vec()).collect() };
    let (small, steps) = shrink(case, 1000);
    Some(json!({"witness": witness, "shrunk": small.to_json(), "shrink_steps": steps}))
}

fn naturality(s: &mut Suite<'_>) {
    let t = s.cfg.trials;
    let cfg = s.cfg.clone();
    // Each case checks all forced maps at every arity plus random cube and d₀ maps.
    let per_case: u64 = (1..=cfg.max_arity).map(|n| forced_maps(n, &zero()).len() as u64 + 2).sum::<u64>() + 2;
    s.cases("extensional-naturality", NATURAL, t.max(1000u64.div_ceil(per_case)), |rng| {
        let b = generate_space(&cfg, rng);
        let alpha = lift(extensional(&b, rng));
        let mut squares: Vec<(AffineMap, MeasInto)> = Vec::new();
        for n in 1..=cfg.max_arity {
            let r = urat(rng);
            for h in forced_maps(n, &r) {
                squares.push((h, MeasInto::Cube((0..n).map(|_| ifn(&b, rng)).collect())));
            }
            for _ in 0..2 {
                let h = sample_affine(rng, AffineDomain::Cube(n), cfg.max_arity);
                squares.push((h, MeasInto::Cube((0..n).map(|_| ifn(&b, rng)).collect())));
            }
        }
        for _ in 0..2 {
            let h = sample_affine(rng, AffineDomain::D0, cfg.max_arity + 2);
            let len = rng.gen_range(0..=cfg.max_arity + 2);
            let f = D0Map::from_terms(b.clone(), (0..len).map(|_| ifn(&b, rng)).collect()).expect("same space");
            squares.push((h, MeasInto::D0(f)));
        }
        for (h, f) in &squares {
            let n = check_naturality(&alpha, h, f).expect("aligned");
            if !n.holds() {
                return Err(naturality_witness(&alpha, h, f, &n));
            }
        }
        Ok(())
    });
    if let Some(r) = s.records.last_mut() {
        r.witness = json!({"squares": r.trials * per_case});
    }

    for (name, kind) in [
        ("refutes-max", FunctionalKind::Max),
        ("refutes-square", FunctionalKind::Square { atom: 0 }),
        ("refutes-clamped-sum", FunctionalKind::ClampedSum),
    ] {
        s.single(name, NATURAL, |rng| {
            let b = Arc::new(random::space_with_atoms(rng, 2, cfg.max_carrier));
            let phi = match kind {
                FunctionalKind::Max => Functional::max(b.clone()),
                FunctionalKind::ClampedSum => Functional::clamped_sum(b.clone()),
                _ => Functional::square_at(b.clone(), b.atom_point(0)).expect("point"),
            };
            match refutation_with_shrink(&phi, kind, cfg.max_arity.min(3), rng) {
                Some(w) => (1, Ok(w)),
                None => (1, Err(json!({"not_refuted": phi.label(), "space": &*b}))),
            }
        });
    }

    s.single("adversarial-mix", NATURAL, |rng| {
        let mut extensional_ok = 0u64;
        let mut refuted = 0u64;
        let mut adversarial = 0u64;
        for case in 0..t.min(200) {
            let b = Arc::new(random::space_with_atoms(rng, 2, cfg.max_carrier));
            let (phi, kind) = generate_functional(&cfg, &b, rng);
            let found = find_refutation(&phi, cfg.max_arity.min(3), 200, rng);
            match (kind.is_adversarial(), found) {
                (false, None) => extensional_ok += 1,
                (true, Some(_)) => {
                    adversarial += 1;
                    refuted += 1;
                }
                (true, None) => return (case + 1, Err(json!({"not_refuted": phi.label(), "case": case}))),
                (false, Some((_, _, w))) => return (case + 1, Err(json!({"extensional_refuted": w}))),
            }
        }
        (t.min(200), Ok(json!({"extensional_passed": extensional_ok, "adversarial": adversarial, "refuted": refuted})))
    });

    s.cases("respects-d0", NATURAL, t, |rng| {
        let b = generate_space(&cfg, rng);
        let alpha = lift(extensional(&b, rng));
        let len = rng.gen_range(0..=5);
        let f = D0Map::from_terms(b.clone(), (0..len).map(|_| ifn(&b, rng)).collect()).expect("same space");
        let v = respects_d0(&alpha, &f).expect("aligned");
        ensure(v.passed(), || v.witness.clone())
    });

    s.cases("sampled-maps-into-unit-interval", CONVEX_MAPS, t.max(1000), |rng| {
        // Brute-force check over all cube vertices, where an affine form attains its extremes.
        let n = rng.gen_range(1..=cfg.max_arity);
        let h = sample_affine(rng, AffineDomain::Cube(n), cfg.max_arity);
        let ok = (0u32..1 << n).all(|mask| {
            let x: Vec<Rat> = (0..n).map(|i| if mask >> i & 1 == 1 { one() } else { zero() }).collect();
            rational::in_unit(&h.apply(&x).expect("arity"))
        });
        ensure(ok, || json!({"h": h}))
    });

    s.cases("affine-composition", CONVEX_MAPS, t, |rng| {
        let m = rng.gen_range(1..=cfg.max_arity);
        let n = rng.gen_range(1..=cfg.max_arity);
        let outer = sample_affine(rng, AffineDomain::Cube(m), cfg.max_arity);
        let inner: Vec<AffineMap> = (0..m).map(|_| sample_affine(rng, AffineDomain::Cube(n), cfg.max_arity)).collect();
        let comp = AffineMap::compose(&outer, &inner).map_err(|e| json!(e.to_string()))?;
        let x: Vec<Rat> = (0..n).map(|_| urat(rng)).collect();
        let mid: Vec<Rat> = inner.iter().map(|g| g.apply(&x).expect("arity")).collect();
        let direct = outer.apply(&mid).expect("arity");
        ensure(comp.apply(&x).expect("arity") == direct, || json!({"outer": outer, "composite": comp}))
    });
}

const MONOID: &str = "a single object with its affine endomorphism monoid already determines the monad";

fn monoid_reduction(s: &mut Suite<'_>) {
    let t = s.cfg.trials;
    let cfg = s.cfg.clone();
    s.cases("reconstruct-round-trip", MONOID, t, |rng| {
        let b = generate_space(&cfg, rng);
        let phi = extensional(&b, rng);
        let action = lift(phi.clone()).d0_action().expect("φ(0̄) = 0");
        match reconstruct_phi(&action, 4, rng.gen()) {
            Ok(back) => ensure(duality::same_coefficients(&back, &phi) == Some(true), || json!({"phi": phi.label(), "back": back.label()})),
            Err(r) => Err(json!({"phi": phi.label(), "refutation": r.witness})),
        }
    });
    s.cases("reconstruct-evaluation", MONOID, t, |rng| {
        let b = generate_space(&cfg, rng);
        let p = rng.gen_range(0..b.len());
        let action = lift(duality::eta_s(b.clone(), p).expect("point")).d0_action().expect("φ(0̄) = 0");
        let back = reconstruct_phi(&action, 2, rng.gen()).map_err(|r| r.witness)?;
        let eta = duality::eta_s(b.clone(), p).expect("point");
        ensure(duality::same_coefficients(&back, &eta) == Some(true), || json!({"point": p}))
    });
    s.single("entrywise-max-fails-convex-square", MONOID, |rng| {
        let b = Arc::new(random::space_with_atoms(rng, 2, cfg.max_carrier));
        match reconstruct_phi(&D0Action::entrywise_max(b.clone()), 8, cfg.seed) {
            Err(r) if r.witness["generator"].as_str().is_some_and(|g| g.starts_with("⊳′")) => (1, Ok(r.witness)),
            Err(r) => (1, Err(json!({"wrong_generator": r.witness}))),
            Ok(phi) => (1, Err(json!({"accepted": phi.label()}))),
        }
    });
}

const CONVEX: &str = "codensity elements extend coordinatewise to bounded convex subsets of ℝⁿ";

fn convex_bound(s: &mut Suite<'_>) {
    let t = s.cfg.trials;
    let cfg = s.cfg.clone();
    s.cases("extension-in-hull", CONVEX, t.max(100), |rng| {
        let dim = rng.gen_range(1..=cfg.max_hull_dim);
        let nv = rng.gen_range(1..=10);
        let vertices: Vec<Vec<Rat>> = (0..nv).map(|_| (0..dim).map(|_| random::signed_rat(rng, 16) * rational::int(3)).collect()).collect();
        let b = generate_space(&cfg, rng);
        let phi = extensional(&b, rng);
        // Each atom goes to a vertex or a random convex combination of vertices.
        let f: Vec<Vec<Rat>> = (0..b.num_atoms())
            .map(|_| {
                if rng.gen() {
                    vertices[rng.gen_range(0..nv)].clone()
                } else {
                    let w = random::simplex_point(rng, nv, 16);
                    (0..dim).map(|j| vertices.iter().zip(&w).map(|(v, l)| &v[j] * l).sum()).collect()
                }
            })
            .collect();
        let x = codensity::extend_to_convex(&phi, &f).expect("extensional");
        let m = hull_membership(&vertices, &x, codensity::DEFAULT_MAX_HULL_DIM).expect("dimension within cap");
        ensure(m.member, || json!({"vertices": vertices.iter().map(|v| fmt_vec(v)).collect::<Vec<_>>(), "x": fmt_vec(&x)}))
    });
    s.cases("outside-bounding-box-rejected", CONVEX, t.max(100), |rng| {
        let dim = rng.gen_range(1..=cfg.max_hull_dim);
        let nv = rng.gen_range(1..=10);
        let vertices: Vec<Vec<Rat>> = (0..nv).map(|_| (0..dim).map(|_| random::signed_rat(rng, 16)).collect()).collect();
        let mut x: Vec<Rat> = vertices[0].clone();
        let j = rng.gen_range(0..dim);
        x[j] = rational::int(2) + urat(rng);
        let m = hull_membership(&vertices, &x, codensity::DEFAULT_MAX_HULL_DIM).expect("dimension within cap");
        ensure(!m.member, || json!({"x": fmt_vec(&x)}))
    });
}

const NON_COUNTABLE: &str = "a finitely additive probability measure on ℕ that is not countably additive";

fn eventual(rng: &mut CaseRng) -> EventualFn {
    let len = rng.gen_range(0..6);
    EventualFn::new((0..len).map(|_| urat(rng)).collect(), urat(rng)).expect("values in I")
}

fn fincof(rng: &mut CaseRng) -> FinCofSet {
    let elems: Vec<usize> = (0..rng.gen_range(0..5)).map(|_| rng.gen_range(0..12)).collect();
    if rng.gen() {
        FinCofSet::finite(elems)
    } else {
        FinCofSet::cofinite(elems)
    }
}

fn counterexample(s: &mut Suite<'_>) {
    let t = s.cfg.trials;
    s.cases("limit-affine", NON_COUNTABLE, t, |rng| {
        let (f, g, r) = (eventual(rng), eventual(rng), urat(rng));
        let lhs = cx::limit_functional(&EventualFn::mix(&r, &f, &g).expect("r ∈ I"));
        let rhs = &r * cx::limit_functional(&f) + (one() - &r) * cx::limit_functional(&g);
        ensure(lhs == rhs, || json!({"r": rational::fmt(&r)}))
    });
    s.cases("limit-weakly-averaging", NON_COUNTABLE, t, |rng| {
        let r = urat(rng);
        let v = cx::limit_functional(&EventualFn::constant(r.clone()).expect("r ∈ I"));
        ensure(v == r, || json!({"r": rational::fmt(&r)}))
    });
    s.cases("limit-sup-continuity", NON_COUNTABLE, t, |rng| {
        let (f, g) = (eventual(rng), eventual(rng));
        let v = cx::sup_continuity_check(&f, &g);
        ensure(v.passed(), || v.witness.clone())
    });
    s.single("limit-fails-respects-limits", NON_COUNTABLE, |_| {
        let v = cx::respects_limits_nat(&cx::limit_functional, &cx::tail_indicators(), 1000, 32).expect("certified");
        let pinned = (0..1000).all(|n| cx::limit_functional(&EventualFn::tail_indicator(n)) == one());
        if !v.passed() && v.witness["stuck_at"] == "1/1" && pinned {
            (v.trials, Ok(v.witness))
        } else {
            (v.trials, Err(json!({"verdict": v})))
        }
    });
    s.single("singletons-vanish-total-mass-one", NON_COUNTABLE, |_| {
        let r = cx::countable_additivity_violation(1_000_000, 100);
        let w = serde_json::to_value(&r).expect("serializable");
        if r.violated() {
            (1, Ok(w))
        } else {
            (1, Err(w))
        }
    });
    s.cases("finite-additivity", NON_COUNTABLE, t, |rng| {
        let (a, b) = (fincof(rng), fincof(rng));
        if !a.is_disjoint(&b) {
            return Ok(());
        }
        let lhs = cx::cofinite_measure(&a.union(&b));
        let rhs = cx::cofinite_measure(&a) + cx::cofinite_measure(&b);
        ensure(lhs == rhs, || json!({"a": format!("{a:?}"), "b": format!("{b:?}")}))
    });
    s.cases("measure-matches-functional", NON_COUNTABLE, t, |rng| {
        let a = fincof(rng);
        ensure(cx::cofinite_measure(&a) == cx::limit_functional(&a.characteristic()), || json!({"a": format!("{a:?}")}))
    });
}

/// Naturality squares for one functional, one verdict per arity plus one for d₀.
/// Forced boundary maps come first, then random maps; each verdict stops at its
/// first failing square, shrunk when the functional is a known non-example.
pub fn naturality_stream(phi: &Functional, kind: Option<FunctionalKind>, trials: u64, seed: u64, max_arity: usize) -> Vec<Verdict> {
    let space = phi.space().clone();
    let alpha = lift(phi.clone());
    let mut out = Vec::new();
    for n in (1..=max_arity).map(Some).chain([None]) {
        let property = match n {
            Some(n) => format!("naturality/arity-{n}"),
            None => "naturality/d0".to_string(),
        };
        let mut rng = random::case_rng(seed, &property, 0);
        let forced = match n {
            Some(n) => forced_maps(n, &urat(&mut rng)),
            None => Vec::new(),
        };
        let mut failure = None;
        for i in 0..trials.max(forced.len() as u64) {
            let (h, f) = match n {
                Some(n) => {
                    let h = match forced.get(i as usize) {
                        Some(h) => h.clone(),
                        None => sample_affine(&mut rng, AffineDomain::Cube(n), max_arity),
                    };
                    (h, MeasInto::Cube((0..n).map(|_| ifn(&space, &mut rng)).collect()))
                }
                None => {
                    let h = sample_affine(&mut rng, AffineDomain::D0, max_arity + 2);
                    let len = rng.gen_range(0..=max_arity + 2);
                    let f = D0Map::from_terms(space.clone(), (0..len).map(|_| ifn(&space, &mut rng)).collect()).expect("same space");
                    (h, MeasInto::D0(f))
                }
            };
            let nat = check_naturality(&alpha, &h, &f).expect("aligned");
            if !nat.holds() {
                let mut w = naturality_witness(&alpha, &h, &f, &nat);
                if let (Some(kind), MeasInto::Cube(fs)) = (kind.filter(|k| k.is_adversarial()), &f) {
                    let case = SquareCase { kind, atoms: space.num_atoms(), h: h.clone(), f: fs.iter().map(|g| g.values().to_vec()).collect() };
                    let (small, steps) = shrink(case, 1000);
                    w["shrunk"] = small.to_json();
                    w["shrink_steps"] = json!(steps);
                }
                failure = Some((i + 1, w));
                break;
            }
        }
        out.push(match failure {
            Some((tried, w)) => Verdict::fail(property, w, tried, seed),
            None => Verdict::pass(property, trials.max(forced.len() as u64), seed),
        });
    }
    out
}

/// JUnit XML mirror of a report.
pub fn to_junit(report: &Report) -> String {
    let esc = |s: &str| s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;");
    let failures = report.failures().count();
    let mut out = format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<testsuite name=\"{}\" tests=\"{}\" failures=\"{}\">\n",
        esc(&report.suite),
        report.properties.len(),
        failures
    );
    for p in &report.properties {
        out.push_str(&format!("  <testcase classname=\"{}\" name=\"{}\">", esc(&p.anchor), esc(&p.name)));
        if p.result == Outcome::Fail {
            out.push_str(&format!("<failure message=\"{}\"/>", esc(&p.witness.to_string())));
        }
        out.push_str("</testcase>\n");
    }
    out.push_str("</testsuite>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteConfig {
        SuiteConfig { trials: 20, ..SuiteConfig::default() }
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(run_suite("nope", &small()).is_err());
    }

    #[test]
    fn zero_counts_are_rejected() {
        assert!(SuiteConfig { trials: 0, ..small() }.validate().is_err());
        assert!(SuiteConfig { max_arity: 0, ..small() }.validate().is_err());
    }

    #[test]
    fn generated_measures_are_normalized() {
        let mut rng = random::seeded(3);
        let b = Arc::new(FinSpace::discrete_n(4));
        for _ in 0..50 {
            let m = generate_measure(&b, &mut rng);
            assert_eq!(m.weights().iter().sum::<Rat>(), one());
        }
    }

    #[test]
    fn generated_spaces_are_closed() {
        let mut rng = random::seeded(4);
        for _ in 0..50 {
            let b = generate_space(&small(), &mut rng);
            assert!(b.len() <= 8);
            assert_eq!(FinSpace::from_sigma(b.labels().to_vec(), b.sigma()).unwrap(), *b);
        }
    }

    #[test]
    fn shrinking_reduces_max_witness() {
        let case = SquareCase {
            kind: FunctionalKind::Max,
            atoms: 4,
            h: AffineMap::new(AffineDomain::Cube(3), zero(), vec![rational::rat(1, 2), rational::rat(1, 2), zero()]).unwrap(),
            f: vec![
                vec![one(), zero(), zero(), zero()],
                vec![zero(), one(), zero(), zero()],
                vec![zero(), zero(), one(), zero()],
            ],
        };
        assert!(case.fails());
        let (small, _) = shrink(case, 1000);
        assert!(small.fails());
        assert_eq!(small.atoms, 2);
        assert_eq!(small.f.len(), 2);
    }

    #[test]
    fn counterexample_suite_passes() {
        let r = run_suite("counterexample", &small()).unwrap();
        assert!(r.passed, "{:?}", r.failures().collect::<Vec<_>>());
        assert!(r.property("counterexample/limit-fails-respects-limits").is_some());
    }
}
