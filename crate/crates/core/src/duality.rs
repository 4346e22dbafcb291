//! Integration operators and their correspondence with measures.
//!
//! A [`Functional`] maps measurable functions `Ω → [0,1]` to `[0,1]`. The
//! extensional form stores one coefficient per atom; the intensional form is an
//! arbitrary pure closure, which lets non-examples (max, squares, clamped sums)
//! flow through the same checks as genuine integration operators.

use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::giry::MetaMeasure;
use crate::measure::Measure;
use crate::random;
use crate::rational::{self, fmt_vec, in_unit, one, zero, Rat};
use crate::sigma::{same_space, IFunction, MeasMap, Space};
use crate::verdict::{Refutation, Verdict};

pub type Evaluator = Arc<dyn Fn(&IFunction) -> Rat + Send + Sync>;

#[derive(Clone)]
pub enum Body {
    /// `f ↦ Σ c(atom)·f(atom)`.
    Extensional(Vec<Rat>),
    Intensional { label: String, eval: Evaluator },
}

#[derive(Clone)]
pub struct Functional {
    space: Space,
    body: Body,
}

impl fmt::Debug for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.body {
            Body::Extensional(c) => write!(f, "Extensional({:?})", fmt_vec(c)),
            Body::Intensional { label, .. } => write!(f, "Intensional({label})"),
        }
    }
}

impl Functional {
    pub fn extensional(space: Space, coefficients: Vec<Rat>) -> Result<Functional> {
        if coefficients.len() != space.num_atoms() {
            return Err(Error::Arity { expected: space.num_atoms(), found: coefficients.len() });
        }
        Ok(Functional { space, body: Body::Extensional(coefficients) })
    }

    pub fn intensional<F>(space: Space, label: impl Into<String>, eval: F) -> Functional
    where
        F: Fn(&IFunction) -> Rat + Send + Sync + 'static,
    {
        Functional { space, body: Body::Intensional { label: label.into(), eval: Arc::new(eval) } }
    }

    /// `f ↦ f(ω)`.
    pub fn evaluation(space: Space, point: usize) -> Result<Functional> {
        if point >= space.len() {
            return Err(Error::UnknownPoint(format!("index {point}")));
        }
        let mut c = vec![zero(); space.num_atoms()];
        c[space.atom_of(point)] = one();
        Ok(Functional { space, body: Body::Extensional(c) })
    }

    /// `f ↦ max over atoms of f`. Not affine once there are two atoms.
    pub fn max(space: Space) -> Functional {
        Functional::intensional(space, "max", |f| f.values().iter().max().cloned().unwrap_or_else(zero))
    }

    /// `f ↦ f(ω)²`. Never affine.
    pub fn square_at(space: Space, point: usize) -> Result<Functional> {
        if point >= space.len() {
            return Err(Error::UnknownPoint(format!("index {point}")));
        }
        let label = format!("square@{}", space.labels()[point]);
        Ok(Functional::intensional(space, label, move |f| {
            let v = f.at_point(point);
            v * v
        }))
    }

    /// `f ↦ min(1, Σ_atoms f)`. Not affine once there are two atoms.
    pub fn clamped_sum(space: Space) -> Functional {
        Functional::intensional(space, "clamped-sum", |f| f.values().iter().sum::<Rat>().min(one()))
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn body(&self) -> &Body {
        &self.body
    }

    pub fn coefficients(&self) -> Option<&[Rat]> {
        match &self.body {
            Body::Extensional(c) => Some(c),
            Body::Intensional { .. } => None,
        }
    }

    pub fn label(&self) -> String {
        match &self.body {
            Body::Extensional(c) => format!("extensional[{}]", fmt_vec(c).join(",")),
            Body::Intensional { label, .. } => label.clone(),
        }
    }

    pub fn eval(&self, f: &IFunction) -> Result<Rat> {
        same_space(&self.space, f.space())?;
        Ok(self.eval_unchecked(f))
    }

    pub(crate) fn eval_unchecked(&self, f: &IFunction) -> Rat {
        match &self.body {
            Body::Extensional(c) => c.iter().zip(f.values()).map(|(a, v)| a * v).sum(),
            Body::Intensional { eval, .. } => eval(f),
        }
    }

    /// Canonical affine form `(a₀, aᵢ)` read off from evaluations:
    /// `a₀ = φ(0̄)`, `aᵢ = φ(χ_atomᵢ) − a₀`.
    pub fn canonical_form(&self) -> (Rat, Vec<Rat>) {
        let a0 = self.eval_unchecked(&IFunction::zero(self.space.clone()));
        let a = (0..self.space.num_atoms())
            .map(|k| self.eval_unchecked(&IFunction::atom_indicator(self.space.clone(), k)) - &a0)
            .collect();
        (a0, a)
    }

    /// The functional rebuilt from its canonical form, as an extensional one.
    /// Only meaningful when `a₀ = 0`.
    pub fn to_extensional(&self) -> Functional {
        let (_, a) = self.canonical_form();
        Functional { space: self.space.clone(), body: Body::Extensional(a) }
    }
}

fn show(f: &IFunction) -> Vec<String> {
    fmt_vec(f.values())
}

/// `Λ(φ)(A) = φ(χ_A)`, checked on the atom basis.
///
/// Rejects `φ` unless `φ(0̄) = 0`, every `φ(χ_atom) ≥ 0`, and the atom values add
/// up to `φ(1̄) = 1`.
pub fn lambda(phi: &Functional) -> std::result::Result<Measure, Refutation> {
    let space = phi.space.clone();
    let at_zero = phi.eval_unchecked(&IFunction::zero(space.clone()));
    if !at_zero.is_zero() {
        return Err(Refutation {
            reason: "φ(0̄) ≠ 0, so φ is not weakly averaging".into(),
            witness: json!({"function": show(&IFunction::zero(space)), "value": rational::fmt(&at_zero)}),
        });
    }
    let weights: Vec<Rat> = (0..space.num_atoms())
        .map(|k| phi.eval_unchecked(&IFunction::atom_indicator(space.clone(), k)))
        .collect();
    if let Some((k, w)) = weights.iter().enumerate().find(|(_, w)| w.is_negative()) {
        return Err(Refutation {
            reason: format!("φ(χ_atom{k}) is negative"),
            witness: json!({"atom": k, "value": rational::fmt(w)}),
        });
    }
    let total: Rat = weights.iter().sum();
    let at_one = phi.eval_unchecked(&IFunction::constant(space.clone(), one()).expect("1 ∈ I"));
    if total != one() || at_one != one() {
        return Err(Refutation {
            reason: "atom values are not additive with total mass 1".into(),
            witness: json!({
                "check": "additivity",
                "atom_values": fmt_vec(&weights),
                "sum": rational::fmt(&total),
                "value_at_one": rational::fmt(&at_one),
                "expected": "1/1",
            }),
        });
    }
    Ok(Measure::from_parts(space, weights))
}

/// `Λ̃(π)(f) = ∫ f dπ`.
pub fn lambda_tilde(pi: &Measure) -> Functional {
    Functional { space: pi.space().clone(), body: Body::Extensional(pi.weights().to_vec()) }
}

/// `Sg(φ)(f) = φ(f ∘ g)`.
pub fn s_map(g: &MeasMap, phi: &Functional) -> Result<Functional> {
    same_space(&phi.space, g.dom())?;
    let cod = g.cod().clone();
    match &phi.body {
        Body::Extensional(c) => {
            let mut out = vec![zero(); cod.num_atoms()];
            for (k, a) in c.iter().enumerate() {
                out[g.atom_image(k)] += a;
            }
            Ok(Functional { space: cod, body: Body::Extensional(out) })
        }
        Body::Intensional { label, eval } => {
            let eval = eval.clone();
            let g = g.clone();
            Ok(Functional::intensional(cod, format!("S({label})"), move |f| {
                eval(&f.compose(&g).expect("f lives on the codomain of g"))
            }))
        }
    }
}

/// Evaluation at `ω`.
pub fn eta_s(space: Space, point: usize) -> Result<Functional> {
    Functional::evaluation(space, point)
}

/// A finite mixture of functionals on one space: the finitely supported second-level operators.
#[derive(Clone, Debug)]
pub struct FunctionalMixture {
    space: Space,
    components: Vec<(Functional, Rat)>,
}

impl FunctionalMixture {
    pub fn new(space: Space, components: Vec<(Functional, Rat)>) -> Result<FunctionalMixture> {
        for (phi, w) in &components {
            same_space(&space, &phi.space)?;
            if w.is_negative() {
                return Err(Error::NegativeWeight { value: rational::fmt(w), at: "mixture component".into() });
            }
        }
        let total: Rat = components.iter().map(|(_, w)| w).sum();
        if total != one() {
            return Err(Error::NotNormalized(rational::fmt(&total)));
        }
        Ok(FunctionalMixture { space, components })
    }

    pub fn dirac(phi: Functional) -> FunctionalMixture {
        FunctionalMixture { space: phi.space.clone(), components: vec![(phi, one())] }
    }

    pub fn components(&self) -> &[(Functional, Rat)] {
        &self.components
    }

    /// `ψ(ev_f) = Σ wᵢ φᵢ(f)`.
    pub fn eval_at(&self, f: &IFunction) -> Result<Rat> {
        same_space(&self.space, f.space())?;
        Ok(self.components.iter().map(|(phi, w)| w * phi.eval_unchecked(f)).sum())
    }

    /// Applies `Λ` to every component.
    pub fn lambda_image(&self) -> std::result::Result<MetaMeasure, Refutation> {
        let support = self
            .components
            .iter()
            .map(|(phi, w)| Ok((lambda(phi)?, w.clone())))
            .collect::<std::result::Result<Vec<_>, Refutation>>()?;
        Ok(MetaMeasure::new(self.space.clone(), support).expect("weights validated at construction"))
    }
}

/// `μ_S(ψ)(f) = ψ(ev_f)`.
pub fn mu_s(psi: &FunctionalMixture) -> Functional {
    let space = psi.space.clone();
    let all_coeffs: Option<Vec<(&[Rat], &Rat)>> =
        psi.components.iter().map(|(phi, w)| phi.coefficients().map(|c| (c, w))).collect();
    match all_coeffs {
        Some(parts) => {
            let mut out = vec![zero(); space.num_atoms()];
            for (c, w) in parts {
                for (acc, a) in out.iter_mut().zip(c) {
                    *acc += w * a;
                }
            }
            Functional { space, body: Body::Extensional(out) }
        }
        None => {
            let psi = psi.clone();
            Functional::intensional(space, "mu_S(mixture)", move |f| {
                psi.components.iter().map(|(phi, w)| w * phi.eval_unchecked(f)).sum()
            })
        }
    }
}

fn mix_witness(f: &IFunction, g: &IFunction, r: &Rat, lhs: &Rat, rhs: &Rat) -> serde_json::Value {
    json!({"f": show(f), "g": show(g), "r": rational::fmt(r), "lhs": rational::fmt(lhs), "rhs": rational::fmt(rhs)})
}

/// Checks `φ(rf + (1−r)g) = rφ(f) + (1−r)φ(g)`.
///
/// Extensional functionals are linear forms and pass without sampling. Intensional
/// ones are probed on atom-indicator pairs and constants first, then on `trials`
/// random triples; the first violating triple is reported.
pub fn is_affine(phi: &Functional, trials: u64, seed: u64) -> Verdict {
    const NAME: &str = "affine";
    if phi.coefficients().is_some() {
        return Verdict::pass(NAME, 0, seed).with_witness(json!({"decided_by": "coefficient form"}));
    }
    let space = &phi.space;
    let half = rational::rat(1, 2);
    let mut forced: Vec<(IFunction, IFunction, Rat)> = vec![(
        IFunction::constant(space.clone(), one()).expect("1 ∈ I"),
        IFunction::zero(space.clone()),
        half.clone(),
    )];
    for a in 0..space.num_atoms() {
        for b in a + 1..space.num_atoms() {
            forced.push((
                IFunction::atom_indicator(space.clone(), a),
                IFunction::atom_indicator(space.clone(), b),
                half.clone(),
            ));
        }
    }
    let check = |f: &IFunction, g: &IFunction, r: &Rat| -> Option<serde_json::Value> {
        let lhs = phi.eval_unchecked(&IFunction::mix(r, f, g).expect("same space"));
        let rhs = r * phi.eval_unchecked(f) + (one() - r) * phi.eval_unchecked(g);
        (lhs != rhs).then(|| mix_witness(f, g, r, &lhs, &rhs))
    };
    let mut count = 0;
    for (f, g, r) in &forced {
        count += 1;
        if let Some(w) = check(f, g, r) {
            return Verdict::fail(NAME, w, count, seed);
        }
    }
    for case in 0..trials {
        let mut rng = random::case_rng(seed, NAME, case);
        let f = random::ifunction(&mut rng, space, random::DEFAULT_MAX_DENOM);
        let g = random::ifunction(&mut rng, space, random::DEFAULT_MAX_DENOM);
        let r = random::unit_rat(&mut rng, random::DEFAULT_MAX_DENOM);
        count += 1;
        if let Some(w) = check(&f, &g, &r) {
            return Verdict::fail(NAME, w, count, seed);
        }
    }
    Verdict::pass(NAME, count, seed)
}

/// Weak averaging, homogeneity, additivity and monotonicity.
///
/// Decided exactly from the coefficients for extensional functionals; by
/// randomized search with reported witnesses otherwise.
pub fn integration_properties(phi: &Functional, trials: u64, seed: u64) -> Vec<Verdict> {
    if let Some(c) = phi.coefficients() {
        let total: Rat = c.iter().sum();
        let negative = c.iter().position(|a| a.is_negative());
        let exact = |name: &str, ok: bool, w: serde_json::Value| {
            if ok {
                Verdict::pass(name, 0, seed).with_witness(json!({"decided_by": "coefficient form"}))
            } else {
                Verdict::fail(name, w, 0, seed)
            }
        };
        return vec![
            exact("weakly-averaging", total == one(), json!({"coefficient_sum": rational::fmt(&total)})),
            exact("homogeneous", true, serde_json::Value::Null),
            exact("additive", true, serde_json::Value::Null),
            exact("monotone", negative.is_none(), json!({"negative_atom": negative})),
        ];
    }
    let space = phi.space.clone();
    let d = random::DEFAULT_MAX_DENOM;
    let ev = |f: &IFunction| phi.eval_unchecked(f);
    let run = |name: &str, check: &dyn Fn(&mut random::CaseRng) -> Option<serde_json::Value>| {
        for case in 0..trials {
            let mut rng = random::case_rng(seed, name, case);
            if let Some(w) = check(&mut rng) {
                return Verdict::fail(name, w, case + 1, seed);
            }
        }
        Verdict::pass(name, trials, seed)
    };
    vec![
        run("weakly-averaging", &|rng| {
            let r = if rng.gen_ratio(1, 4) { if rng.gen() { one() } else { zero() } } else { random::unit_rat(rng, d) };
            let v = ev(&IFunction::constant(space.clone(), r.clone()).expect("r ∈ I"));
            (v != r).then(|| json!({"r": rational::fmt(&r), "value": rational::fmt(&v)}))
        }),
        run("homogeneous", &|rng| {
            let f = random::ifunction(rng, &space, d);
            let r = random::unit_rat(rng, d);
            let lhs = ev(&f.scale(&r).expect("rf ∈ I"));
            let rhs = &r * ev(&f);
            (lhs != rhs).then(|| json!({"f": show(&f), "r": rational::fmt(&r), "lhs": rational::fmt(&lhs), "rhs": rational::fmt(&rhs)}))
        }),
        run("additive", &|rng| {
            // Draw g below 1 − f so that f + g stays in I.
            let f = random::ifunction(rng, &space, d);
            let room: Vec<Rat> = f.values().iter().map(|v| one() - v).collect();
            let g_vals = room.iter().map(|m| m * random::unit_rat(rng, d)).collect();
            let g = IFunction::new(space.clone(), g_vals).expect("g ≤ 1 − f");
            let lhs = ev(&f.add(&g).expect("f + g ≤ 1"));
            let rhs = ev(&f) + ev(&g);
            (lhs != rhs).then(|| json!({"f": show(&f), "g": show(&g), "lhs": rational::fmt(&lhs), "rhs": rational::fmt(&rhs)}))
        }),
        run("monotone", &|rng| {
            let f = random::ifunction(rng, &space, d);
            let bump: Vec<Rat> = f
                .values()
                .iter()
                .map(|v| v + (one() - v) * random::unit_rat(rng, d))
                .collect();
            let g = IFunction::new(space.clone(), bump).expect("f ≤ g ≤ 1");
            let (a, b) = (ev(&f), ev(&g));
            (a > b).then(|| json!({"f": show(&f), "g": show(&g), "phi_f": rational::fmt(&a), "phi_g": rational::fmt(&b)}))
        }),
    ]
}

/// A sequence `n ↦ f_n` on a finite space with a certificate that it converges
/// pointwise to 0: on atom `k`, `f_n` vanishes for every `n ≥ zero_from[k]`.
#[derive(Clone)]
pub struct LimitWitness {
    space: Space,
    term: Arc<dyn Fn(usize) -> IFunction + Send + Sync>,
    zero_from: Vec<usize>,
}

/// Indices past each certificate that are sampled to validate it.
pub const CERTIFICATE_PROBES: usize = 64;

impl LimitWitness {
    pub fn new<F>(space: Space, term: F, zero_from: Vec<usize>) -> Result<LimitWitness>
    where
        F: Fn(usize) -> IFunction + Send + Sync + 'static,
    {
        if zero_from.len() != space.num_atoms() {
            return Err(Error::Arity { expected: space.num_atoms(), found: zero_from.len() });
        }
        let w = LimitWitness { space, term: Arc::new(term), zero_from };
        for (k, &n0) in w.zero_from.iter().enumerate() {
            for n in n0..n0 + CERTIFICATE_PROBES {
                let f = (w.term)(n);
                same_space(&w.space, f.space())?;
                if !f.at_atom(k).is_zero() {
                    return Err(Error::Invalid(format!(
                        "uncertified limit witness: term {n} is {} on atom {k}, certified zero from {n0}",
                        rational::fmt(f.at_atom(k))
                    )));
                }
            }
        }
        Ok(w)
    }

    /// A finite list followed by zero functions.
    pub fn from_list(space: Space, terms: Vec<IFunction>) -> Result<LimitWitness> {
        for t in &terms {
            same_space(&space, t.space())?;
        }
        let zero_from = (0..space.num_atoms())
            .map(|k| terms.iter().rposition(|t| !t.at_atom(k).is_zero()).map_or(0, |i| i + 1))
            .collect();
        let zero = IFunction::zero(space.clone());
        LimitWitness::new(space, move |n| terms.get(n).cloned().unwrap_or_else(|| zero.clone()), zero_from)
    }

    pub fn term(&self, n: usize) -> IFunction {
        (self.term)(n)
    }

    /// Index from which every term is the zero function.
    pub fn tail_index(&self) -> usize {
        self.zero_from.iter().copied().max().unwrap_or(0)
    }
}

/// Checks `φ(f_n) → 0` along a certified witness.
///
/// Past the tail index every term is `0̄`, so the sequence of values is eventually
/// constant at `φ(0̄)`; the check passes iff that value is 0. A failure reports the
/// value the sequence is stuck at.
pub fn respects_limits(phi: &Functional, w: &LimitWitness) -> Result<Verdict> {
    same_space(&phi.space, &w.space)?;
    let tail = w.tail_index();
    let values: Vec<Rat> = (0..=tail).map(|n| phi.eval_unchecked(&w.term(n))).collect();
    let last = values.last().cloned().unwrap_or_else(zero);
    let witness = json!({"tail_index": tail, "values": fmt_vec(&values)});
    Ok(if last.is_zero() {
        Verdict::pass("respects-limits", values.len() as u64, 0).with_witness(witness)
    } else {
        Verdict::fail(
            "respects-limits",
            json!({"tail_index": tail, "values": fmt_vec(&values), "stuck_at": rational::fmt(&last)}),
            values.len() as u64,
            0,
        )
    })
}

/// JSON description of a functional, for CLI ingestion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FunctionalSpec {
    Extensional {
        #[serde(with = "rational::vec_as_str")]
        coefficients: Vec<Rat>,
    },
    Eval { point: String },
    Max,
    Square { point: String },
    ClampedSum,
}

impl FunctionalSpec {
    pub fn build(&self, space: Space) -> Result<Functional> {
        match self {
            FunctionalSpec::Extensional { coefficients } => {
                let phi = Functional::extensional(space, coefficients.clone())?;
                if let Some(c) = coefficients.iter().find(|c| !in_unit(c)) {
                    return Err(Error::OutOfUnitInterval { value: rational::fmt(c), at: "coefficient".into() });
                }
                Ok(phi)
            }
            FunctionalSpec::Eval { point } => {
                let p = space.point(point)?;
                Functional::evaluation(space, p)
            }
            FunctionalSpec::Max => Ok(Functional::max(space)),
            FunctionalSpec::Square { point } => {
                let p = space.point(point)?;
                Functional::square_at(space, p)
            }
            FunctionalSpec::ClampedSum => Ok(Functional::clamped_sum(space)),
        }
    }
}

/// Coefficient-wise comparison; `None` when either side is intensional.
pub fn same_coefficients(a: &Functional, b: &Functional) -> Option<bool> {
    Some(a.coefficients()? == b.coefficients()? && a.space == b.space)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::giry::{mu, unit};
    use crate::rational::rat;
    use crate::sigma::FinSpace;
    use crate::verdict::Outcome;

    fn disc(n: usize) -> Space {
        Arc::new(FinSpace::discrete_n(n))
    }

    #[test]
    fn eval_extensional_and_intensional() {
        let s = disc(2);
        let phi = Functional::extensional(s.clone(), vec![rat(1, 3), rat(2, 3)]).unwrap();
        let chi = IFunction::atom_indicator(s.clone(), 0);
        assert_eq!(phi.eval(&chi).unwrap(), rat(1, 3));
        let r = IFunction::constant(s.clone(), rat(3, 7)).unwrap();
        assert_eq!(phi.eval(&r).unwrap(), rat(3, 7));
        let m = Functional::max(s.clone());
        assert_eq!(m.eval(&IFunction::new(s, vec![rat(1, 2), one()]).unwrap()).unwrap(), one());
        assert!(phi.eval(&IFunction::zero(disc(3))).is_err());
    }

    #[test]
    fn lambda_of_evaluation_is_dirac() {
        let s = disc(3);
        assert_eq!(lambda(&eta_s(s.clone(), 1).unwrap()).unwrap(), unit(s, 1).unwrap());
    }

    #[test]
    fn lambda_reads_atom_values() {
        let s = disc(2);
        let phi = Functional::extensional(s.clone(), vec![rat(1, 4), rat(3, 4)]).unwrap();
        assert_eq!(lambda(&phi).unwrap().weights(), &[rat(1, 4), rat(3, 4)]);
    }

    #[test]
    fn lambda_rejects_max_with_additivity_witness() {
        let s = disc(3);
        let err = lambda(&Functional::max(s)).unwrap_err();
        assert_eq!(err.witness["check"], "additivity");
        assert_eq!(err.witness["sum"], "3/1");
    }

    #[test]
    fn lambda_tilde_round_trip() {
        let s = disc(2);
        let u = Measure::uniform(s.clone());
        assert_eq!(lambda_tilde(&u).coefficients().unwrap(), &[rat(1, 2), rat(1, 2)]);
        assert_eq!(lambda(&lambda_tilde(&u)).unwrap(), u);
        let d = Measure::dirac(s.clone(), 0).unwrap();
        assert!(same_coefficients(&lambda_tilde(&d), &eta_s(s, 0).unwrap()).unwrap());
    }

    #[test]
    fn affineness_verdicts() {
        let s = disc(2);
        let ext = Functional::extensional(s.clone(), vec![rat(1, 2), rat(1, 2)]).unwrap();
        assert!(is_affine(&ext, 10, 1).passed());
        let v = is_affine(&Functional::max(s.clone()), 50, 1);
        assert_eq!(v.result, Outcome::Fail);
        assert_eq!(v.witness["lhs"], "1/2");
        assert_eq!(v.witness["rhs"], "1/1");
        let sq = is_affine(&Functional::square_at(s, 0).unwrap(), 50, 1);
        assert_eq!(sq.result, Outcome::Fail);
        assert_eq!(sq.witness["lhs"], "1/4");
        assert_eq!(sq.witness["rhs"], "1/2");
    }

    #[test]
    fn integration_properties_split_examples_from_non_examples() {
        let s = disc(3);
        let ext = Functional::extensional(s.clone(), vec![rat(1, 6), rat(1, 3), rat(1, 2)]).unwrap();
        assert!(integration_properties(&ext, 50, 3).iter().all(Verdict::passed));
        let wrapped = {
            let e = ext.clone();
            Functional::intensional(s.clone(), "wrapped", move |f| e.eval_unchecked(f))
        };
        assert!(integration_properties(&wrapped, 100, 3).iter().all(Verdict::passed));
        let max = integration_properties(&Functional::max(s.clone()), 100, 3);
        assert!(max.iter().find(|v| v.property == "additive").is_some_and(|v| !v.passed()));
        let sq = integration_properties(&Functional::square_at(s, 0).unwrap(), 100, 3);
        assert!(sq.iter().find(|v| v.property == "homogeneous").is_some_and(|v| !v.passed()));
    }

    #[test]
    fn respects_limits_on_finite_spaces() {
        let s = disc(2);
        let ext = Functional::extensional(s.clone(), vec![rat(1, 2), rat(1, 2)]).unwrap();
        let terms = vec![IFunction::constant(s.clone(), one()).unwrap(), IFunction::atom_indicator(s.clone(), 1)];
        let w = LimitWitness::from_list(s.clone(), terms).unwrap();
        assert_eq!(w.tail_index(), 2);
        assert!(respects_limits(&ext, &w).unwrap().passed());
        let zeros = LimitWitness::from_list(s.clone(), vec![]).unwrap();
        assert!(respects_limits(&Functional::max(s.clone()), &zeros).unwrap().passed());
        let shifted = Functional::intensional(s.clone(), "half-plus", |f| (f.values()[0].clone() + one()) / rational::int(2));
        let v = respects_limits(&shifted, &zeros).unwrap();
        assert_eq!(v.witness["stuck_at"], "1/2");
    }

    #[test]
    fn uncertified_witness_is_rejected() {
        let s = disc(1);
        let t = s.clone();
        let err = LimitWitness::new(s, move |_| IFunction::constant(t.clone(), one()).unwrap(), vec![3]);
        assert!(matches!(err, Err(Error::Invalid(_))));
    }

    #[test]
    fn s_map_pushes_coefficients_and_commutes_with_eta() {
        let dom = disc(3);
        let cod = disc(2);
        let g = MeasMap::new(dom.clone(), cod.clone(), vec![1, 0, 1]).unwrap();
        let phi = Functional::extensional(dom.clone(), vec![rat(1, 2), rat(1, 3), rat(1, 6)]).unwrap();
        assert_eq!(s_map(&g, &phi).unwrap().coefficients().unwrap(), &[rat(1, 3), rat(2, 3)]);
        assert!(same_coefficients(&s_map(&g, &eta_s(dom.clone(), 0).unwrap()).unwrap(), &eta_s(cod, 1).unwrap()).unwrap());
        let id = MeasMap::identity(dom);
        assert!(same_coefficients(&s_map(&id, &phi).unwrap(), &phi).unwrap());
    }

    #[test]
    fn mu_s_mixes_and_matches_mu() {
        let s = disc(2);
        let a = Functional::extensional(s.clone(), vec![one(), zero()]).unwrap();
        let b = Functional::extensional(s.clone(), vec![rat(1, 2), rat(1, 2)]).unwrap();
        let psi = FunctionalMixture::new(s.clone(), vec![(a.clone(), rat(1, 2)), (b, rat(1, 2))]).unwrap();
        let m = mu_s(&psi);
        assert_eq!(m.coefficients().unwrap(), &[rat(3, 4), rat(1, 4)]);
        assert_eq!(lambda(&m).unwrap(), mu(&psi.lambda_image().unwrap()));
        assert!(same_coefficients(&mu_s(&FunctionalMixture::dirac(a.clone())), &a).unwrap());
        assert!(FunctionalMixture::new(s, vec![(a, rat(1, 2))]).is_err());
    }

    #[test]
    fn spec_json_builds_functionals() {
        let s = Arc::new(FinSpace::discrete(&["a", "b"]).unwrap());
        let spec: FunctionalSpec = serde_json::from_str(r#"{"kind":"extensional","coefficients":["1/3","2/3"]}"#).unwrap();
        assert_eq!(spec.build(s.clone()).unwrap().coefficients().unwrap(), &[rat(1, 3), rat(2, 3)]);
        let sq: FunctionalSpec = serde_json::from_str(r#"{"kind":"square","point":"b"}"#).unwrap();
        assert_eq!(sq.build(s.clone()).unwrap().label(), "square@b");
        let bad: FunctionalSpec = serde_json::from_str(r#"{"kind":"eval","point":"z"}"#).unwrap();
        assert!(bad.build(s).is_err());
    }
}
