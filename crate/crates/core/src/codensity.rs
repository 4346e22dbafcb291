//! Codensity elements over categories of convex sets.
//!
//! Affine maps into the unit interval are kept in canonical form
//! `a₀ + Σ aᵢxᵢ`, over either a cube `Iⁿ` or `d₀` (sequences in [0,1] tending
//! to 0, represented here as eventually-zero lists). A codensity element is
//! determined by its component at `I`, a [`Functional`]; its components at `Iⁿ`
//! and `d₀` act coordinatewise, and naturality against affine maps is what the
//! checks in this module test.

use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::duality::Functional;
use crate::error::{Error, Result};
use crate::random;
use crate::rational::{self, fmt_vec, in_unit, one, zero, Rat};
use crate::sigma::{same_space, IFunction, Space};
use crate::verdict::{Refutation, Verdict};

/// Domain of an affine map into I.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "type", content = "arity")]
pub enum AffineDomain {
    Cube(usize),
    D0,
}

/// `x ↦ a₀ + Σ aᵢxᵢ`, mapping its domain into [0,1].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AffineJson", into = "AffineJson")]
pub struct AffineMap {
    domain: AffineDomain,
    a0: Rat,
    coeffs: Vec<Rat>,
}

impl AffineMap {
    /// Validates that the form maps its domain into I: the infimum
    /// `a₀ + Σ min(aᵢ,0)` must be ≥ 0 and the supremum `a₀ + Σ max(aᵢ,0)` ≤ 1.
    /// On `d₀` the supremum is approached by eventually-zero sequences, so the
    /// same pair of inequalities applies.
    pub fn new(domain: AffineDomain, a0: Rat, coeffs: Vec<Rat>) -> Result<AffineMap> {
        if let AffineDomain::Cube(n) = domain {
            if coeffs.len() != n {
                return Err(Error::Arity { expected: n, found: coeffs.len() });
            }
        }
        let h = AffineMap { domain, a0, coeffs };
        let (lo, hi) = h.extremes();
        if lo.is_negative() || hi > one() {
            return Err(Error::Invalid(format!(
                "affine map ranges over [{}, {}], not inside [0,1]",
                rational::fmt(&lo),
                rational::fmt(&hi)
            )));
        }
        Ok(h)
    }

    pub fn extremes(&self) -> (Rat, Rat) {
        let lo = &self.a0 + self.coeffs.iter().filter(|a| a.is_negative()).sum::<Rat>();
        let hi = &self.a0 + self.coeffs.iter().filter(|a| a.is_positive()).sum::<Rat>();
        (lo, hi)
    }

    /// `πᵢ : Iⁿ → I` (zero-based `i`).
    pub fn projection(n: usize, i: usize) -> Result<AffineMap> {
        if i >= n {
            return Err(Error::Arity { expected: n, found: i + 1 });
        }
        let mut a = vec![zero(); n];
        a[i] = one();
        AffineMap::new(AffineDomain::Cube(n), zero(), a)
    }

    /// The constant map `r̄`.
    pub fn constant(domain: AffineDomain, r: Rat) -> Result<AffineMap> {
        let n = match domain {
            AffineDomain::Cube(n) => n,
            AffineDomain::D0 => 0,
        };
        AffineMap::new(domain, r, vec![zero(); n])
    }

    /// `x ⊳_r y = rx + (1−r)y` on `I²`.
    pub fn convex(r: Rat) -> Result<AffineMap> {
        AffineMap::convex_pair(2, 0, 1, r)
    }

    /// `r·xᵢ + (1−r)·xⱼ` on `Iⁿ`.
    pub fn convex_pair(n: usize, i: usize, j: usize, r: Rat) -> Result<AffineMap> {
        if i >= n || j >= n || i == j {
            return Err(Error::Invalid(format!("coordinates {i}, {j} invalid for arity {n}")));
        }
        let mut a = vec![zero(); n];
        a[j] = one() - &r;
        a[i] = r;
        AffineMap::new(AffineDomain::Cube(n), zero(), a)
    }

    pub fn domain(&self) -> AffineDomain {
        self.domain
    }

    pub fn a0(&self) -> &Rat {
        &self.a0
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    fn eval_raw(&self, x: impl Fn(usize) -> Rat) -> Rat {
        &self.a0 + self.coeffs.iter().enumerate().map(|(i, a)| a * x(i)).sum::<Rat>()
    }

    /// Applies the map to a point of `Iⁿ`.
    pub fn apply(&self, x: &[Rat]) -> Result<Rat> {
        match self.domain {
            AffineDomain::Cube(n) if x.len() != n => return Err(Error::Arity { expected: n, found: x.len() }),
            AffineDomain::D0 => return self.apply_d0(&D0Element::new(x.to_vec())?),
            _ => {}
        }
        if let Some(v) = x.iter().find(|v| !in_unit(v)) {
            return Err(Error::OutOfUnitInterval { value: rational::fmt(v), at: "affine map input".into() });
        }
        Ok(self.eval_raw(|i| x[i].clone()))
    }

    pub fn apply_d0(&self, x: &D0Element) -> Result<Rat> {
        if self.domain != AffineDomain::D0 {
            return Err(Error::Invalid("map is defined on a cube, not on d₀".into()));
        }
        Ok(self.eval_raw(|i| x.entry(i)))
    }

    /// `h ∘ f` for `f = (f₁, f₂, …)` a measurable map into the domain of `h`.
    fn after_functions(&self, f: &dyn Fn(usize) -> IFunction, space: &Space) -> IFunction {
        let terms: Vec<IFunction> = (0..self.coeffs.len()).map(f).collect();
        let values = (0..space.num_atoms())
            .map(|k| self.eval_raw(|i| terms[i].at_atom(k).clone()))
            .collect();
        IFunction::new(space.clone(), values).expect("valid affine maps send I-valued inputs into I")
    }

    /// `outer ∘ (inner₁, …, innerₘ)`, all inner maps on the same cube.
    pub fn compose(outer: &AffineMap, inner: &[AffineMap]) -> Result<AffineMap> {
        if outer.domain != AffineDomain::Cube(inner.len()) {
            return Err(Error::Arity { expected: outer.coeffs.len(), found: inner.len() });
        }
        let domain = inner.first().map_or(AffineDomain::Cube(0), |g| g.domain);
        if inner.iter().any(|g| g.domain != domain) || domain == AffineDomain::D0 {
            return Err(Error::Invalid("inner maps must share one cube domain".into()));
        }
        let n = match domain {
            AffineDomain::Cube(n) => n,
            AffineDomain::D0 => unreachable!(),
        };
        let mut a0 = outer.a0.clone();
        let mut a = vec![zero(); n];
        for (o, g) in outer.coeffs.iter().zip(inner) {
            a0 += o * &g.a0;
            for (acc, b) in a.iter_mut().zip(&g.coeffs) {
                *acc += o * b;
            }
        }
        AffineMap::new(domain, a0, a)
    }
}

impl fmt::Display for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", rational::fmt(&self.a0))?;
        for (i, a) in self.coeffs.iter().enumerate() {
            if !a.is_zero() {
                write!(f, " + {}·x{}", rational::fmt(a), i + 1)?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Serialize, Deserialize)]
struct AffineJson {
    domain: AffineDomain,
    a0: String,
    a: Vec<String>,
}

impl TryFrom<AffineJson> for AffineMap {
    type Error = Error;

    fn try_from(j: AffineJson) -> Result<AffineMap> {
        let a = j.a.iter().map(|s| rational::parse(s)).collect::<Result<_>>()?;
        AffineMap::new(j.domain, rational::parse(&j.a0)?, a)
    }
}

impl From<AffineMap> for AffineJson {
    fn from(h: AffineMap) -> AffineJson {
        AffineJson { domain: h.domain, a0: rational::fmt(&h.a0), a: fmt_vec(&h.coeffs) }
    }
}

/// What [`sample_affine`] should produce.
#[derive(Clone, Debug, PartialEq)]
pub enum AffineRequest {
    Random,
    Projection(usize),
    Constant(Rat),
    Convex { i: usize, j: usize, r: Rat },
}

/// Draws a valid affine map on `domain`.
///
/// Raw coefficients in [−1,1] are rescaled so `Σ|aᵢ| ≤ 1`, then `a₀` is
/// translated so the range lands at a random position inside [0,1]. About half
/// the draws are boundary cases instead: projections, constants, `⊳_r`.
pub fn sample_affine<R: Rng>(rng: &mut R, domain: AffineDomain, max_d0_len: usize) -> AffineMap {
    let n = match domain {
        AffineDomain::Cube(n) => n,
        AffineDomain::D0 => rng.gen_range(1..=max_d0_len.max(1)),
    };
    let d = random::DEFAULT_MAX_DENOM;
    let request = match rng.gen_range(0..8) {
        0 if n > 0 => AffineRequest::Projection(rng.gen_range(0..n)),
        1 => AffineRequest::Constant(random::unit_rat(rng, d)),
        2 | 3 if n >= 2 => {
            let i = rng.gen_range(0..n);
            let j = (i + rng.gen_range(1..n)) % n;
            AffineRequest::Convex { i, j, r: random::unit_rat(rng, d) }
        }
        _ => AffineRequest::Random,
    };
    build_request(rng, domain, n, request)
}

pub fn build_request<R: Rng>(rng: &mut R, domain: AffineDomain, n: usize, request: AffineRequest) -> AffineMap {
    let d = random::DEFAULT_MAX_DENOM;
    let mut a = vec![zero(); n];
    let a0 = match request {
        AffineRequest::Projection(i) => {
            a[i] = one();
            zero()
        }
        AffineRequest::Constant(r) => r,
        AffineRequest::Convex { i, j, r } => {
            a[j] = one() - &r;
            a[i] = r;
            zero()
        }
        AffineRequest::Random => {
            for x in a.iter_mut() {
                *x = if rng.gen_ratio(1, 5) { zero() } else { random::signed_rat(rng, d) };
            }
            let width: Rat = a.iter().map(|x| x.abs()).sum();
            if width > one() {
                for x in a.iter_mut() {
                    *x /= &width;
                }
            }
            let width: Rat = a.iter().map(|x| x.abs()).sum();
            let neg: Rat = a.iter().filter(|x| x.is_negative()).sum();
            let lo = (one() - width) * random::unit_rat(rng, d);
            lo - neg
        }
    };
    AffineMap::new(domain, a0, a).expect("sampled maps satisfy the range inequalities")
}

/// A sequence in [0,1] with an implicit zero tail. Trailing zeros are trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct D0Element {
    entries: Vec<Rat>,
}

impl D0Element {
    pub fn new(mut entries: Vec<Rat>) -> Result<D0Element> {
        if let Some(v) = entries.iter().find(|v| !in_unit(v)) {
            return Err(Error::OutOfUnitInterval { value: rational::fmt(v), at: "d₀ entry".into() });
        }
        while entries.last().is_some_and(|v| v.is_zero()) {
            entries.pop();
        }
        Ok(D0Element { entries })
    }

    /// `(x, 0, 0, …)`.
    pub fn first(x: Rat) -> Result<D0Element> {
        D0Element::new(vec![x])
    }

    pub fn entries(&self) -> &[Rat] {
        &self.entries
    }

    /// Zero-based entry; 0 past the stored prefix.
    pub fn entry(&self, i: usize) -> Rat {
        self.entries.get(i).cloned().unwrap_or_else(zero)
    }
}

/// A measurable map `Ω → d₀`: component functions, all zero from `zero_from` on.
#[derive(Clone, Debug, PartialEq)]
pub struct D0Map {
    space: Space,
    terms: Vec<IFunction>,
}

impl D0Map {
    /// `terms` lists the components up to the certified index `zero_from`; any
    /// listed component at or past it must be the zero function.
    pub fn new(space: Space, terms: Vec<IFunction>, zero_from: usize) -> Result<D0Map> {
        for t in &terms {
            same_space(&space, t.space())?;
        }
        if let Some(i) = terms.iter().skip(zero_from).position(|t| !t.is_zero()) {
            return Err(Error::Invalid(format!(
                "uncertified zero tail: component {} is nonzero but certified zero from {zero_from}",
                zero_from + i
            )));
        }
        let mut terms = terms;
        terms.truncate(zero_from);
        Ok(D0Map { space, terms })
    }

    pub fn from_terms(space: Space, terms: Vec<IFunction>) -> Result<D0Map> {
        let n = terms.len();
        D0Map::new(space, terms, n)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn terms(&self) -> &[IFunction] {
        &self.terms
    }

    /// Index from which every component is `0̄`.
    pub fn zero_from(&self) -> usize {
        self.terms.len()
    }

    pub fn component(&self, i: usize) -> IFunction {
        self.terms.get(i).cloned().unwrap_or_else(|| IFunction::zero(self.space.clone()))
    }

    fn single(space: Space, f: IFunction) -> D0Map {
        D0Map { space, terms: vec![f] }
    }
}

/// A measurable map into a cube or into `d₀`.
#[derive(Clone, Debug, PartialEq)]
pub enum MeasInto {
    Cube(Vec<IFunction>),
    D0(D0Map),
}

impl MeasInto {
    fn space(&self) -> Option<&Space> {
        match self {
            MeasInto::Cube(fs) => fs.first().map(IFunction::space),
            MeasInto::D0(m) => Some(m.space()),
        }
    }

    fn component(&self, i: usize) -> IFunction {
        match self {
            MeasInto::Cube(fs) => fs[i].clone(),
            MeasInto::D0(m) => m.component(i),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            MeasInto::Cube(fs) => json!({"into": "cube", "components": fs.iter().map(|f| fmt_vec(f.values())).collect::<Vec<_>>()}),
            MeasInto::D0(m) => json!({"into": "d0", "components": m.terms.iter().map(|f| fmt_vec(f.values())).collect::<Vec<_>>(), "zero_from": m.zero_from()}),
        }
    }
}

/// A natural family determined by its component at I.
#[derive(Clone, Debug)]
pub struct CodensityElement {
    phi: Functional,
}

/// `α_{d₀}(f)`: the listed entries, and the value every entry past them takes.
#[derive(Clone, Debug, PartialEq)]
pub struct D0Output {
    pub head: Vec<Rat>,
    pub tail: Rat,
}

/// `α` given by applying `φ` coordinatewise.
pub fn lift(phi: Functional) -> CodensityElement {
    CodensityElement { phi }
}

impl CodensityElement {
    pub fn base(&self) -> &Space {
        self.phi.space()
    }

    pub fn phi(&self) -> &Functional {
        &self.phi
    }

    /// `α_{Iⁿ}(f₁,…,fₙ) = (φ(f₁),…,φ(fₙ))`.
    pub fn component_cube(&self, fs: &[IFunction]) -> Result<Vec<Rat>> {
        fs.iter().map(|f| self.phi.eval(f)).collect()
    }

    /// `α_{d₀}(f)ᵢ = φ(fᵢ)`; past the zero index every entry is `φ(0̄)`.
    pub fn component_d0(&self, f: &D0Map) -> Result<D0Output> {
        same_space(self.phi.space(), f.space())?;
        let head = f.terms.iter().map(|t| self.phi.eval_unchecked(t)).collect();
        let tail = self.phi.eval_unchecked(&IFunction::zero(f.space.clone()));
        Ok(D0Output { head, tail })
    }

    /// The `d₀` component as a bare action `Meas(Ω, d₀) → d₀`.
    ///
    /// Fails when the output would not tend to 0, i.e. when `φ(0̄) ≠ 0`.
    pub fn d0_action(&self) -> Result<D0Action> {
        let z = self.phi.eval_unchecked(&IFunction::zero(self.base().clone()));
        if !z.is_zero() {
            return Err(Error::Invalid(format!("φ(0̄) = {} so α_d₀ leaves d₀", rational::fmt(&z))));
        }
        let phi = self.phi.clone();
        Ok(D0Action::new(self.base().clone(), move |f| {
            D0Element::new(f.terms.iter().map(|t| phi.eval_unchecked(t)).collect())
                .expect("φ lands in [0,1]")
        }))
    }
}

/// Outcome of one naturality square `h ∘ α_c(f)` versus `α_I(h ∘ f)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Naturality {
    /// `h` applied to the component of `α` at its domain.
    pub via_component: Rat,
    /// `φ` applied to the pushforward `h ∘ f`.
    pub via_pushforward: Rat,
}

impl Naturality {
    pub fn holds(&self) -> bool {
        self.via_component == self.via_pushforward
    }

    pub fn residual(&self) -> Rat {
        &self.via_component - &self.via_pushforward
    }
}

/// Evaluates one naturality square exactly.
pub fn check_naturality(alpha: &CodensityElement, h: &AffineMap, f: &MeasInto) -> Result<Naturality> {
    let space = alpha.base();
    if let Some(s) = f.space() {
        same_space(space, s)?;
    }
    match (h.domain(), f) {
        (AffineDomain::Cube(n), MeasInto::Cube(fs)) if n == fs.len() => {}
        (AffineDomain::Cube(n), MeasInto::Cube(fs)) => return Err(Error::Arity { expected: n, found: fs.len() }),
        (AffineDomain::D0, MeasInto::D0(_)) => {}
        _ => return Err(Error::Invalid("affine map and measurable map have different codomain types".into())),
    }
    let phi = alpha.phi();
    let coords: Vec<Rat> = (0..h.coeffs().len()).map(|i| phi.eval_unchecked(&f.component(i))).collect();
    let via_component = h.eval_raw(|i| coords[i].clone());
    let pushed = h.after_functions(&|i| f.component(i), space);
    let via_pushforward = phi.eval_unchecked(&pushed);
    Ok(Naturality { via_component, via_pushforward })
}

/// Verdict form of a naturality square, with the full witness on failure.
pub fn naturality_verdict(alpha: &CodensityElement, h: &AffineMap, f: &MeasInto, seed: u64) -> Result<Verdict> {
    let n = check_naturality(alpha, h, f)?;
    let name = format!("naturality[{}]", alpha.phi().label());
    Ok(if n.holds() {
        Verdict::pass(name, 1, seed)
    } else {
        Verdict::fail(name, naturality_witness(alpha, h, f, &n), 1, seed)
    })
}

pub fn naturality_witness(alpha: &CodensityElement, h: &AffineMap, f: &MeasInto, n: &Naturality) -> serde_json::Value {
    json!({
        "functional": alpha.phi().label(),
        "space": &**alpha.base(),
        "h": h,
        "f": f.to_json(),
        "via_component": rational::fmt(&n.via_component),
        "via_pushforward": rational::fmt(&n.via_pushforward),
        "residual": rational::fmt(&n.residual()),
    })
}

/// Checks that `α_{d₀}(f)` lies in `d₀`: entries in [0,1] and a zero tail from
/// the certified index of `f` on.
pub fn respects_d0(alpha: &CodensityElement, f: &D0Map) -> Result<Verdict> {
    let out = alpha.component_d0(f)?;
    let bad = out.head.iter().position(|v| !in_unit(v));
    Ok(if bad.is_none() && out.tail.is_zero() {
        Verdict::pass("respects-d0", 1, 0)
    } else {
        Verdict::fail(
            "respects-d0",
            json!({"head": fmt_vec(&out.head), "tail": rational::fmt(&out.tail), "zero_from": f.zero_from(), "bad_entry": bad}),
            1,
            0,
        )
    })
}

/// A map `Meas(Ω, d₀) → d₀`, the form in which a codensity element for the
/// monoid of affine endomorphisms of `d₀` is given.
#[derive(Clone)]
pub struct D0Action {
    space: Space,
    act: Arc<dyn Fn(&D0Map) -> D0Element + Send + Sync>,
}

impl D0Action {
    pub fn new<F>(space: Space, act: F) -> D0Action
    where
        F: Fn(&D0Map) -> D0Element + Send + Sync + 'static,
    {
        D0Action { space, act: Arc::new(act) }
    }

    /// Entrywise maximum over atoms. Commutes with coordinate projections but
    /// not with convex combinations of coordinates.
    pub fn entrywise_max(space: Space) -> D0Action {
        D0Action::new(space, |f| {
            D0Element::new(f.terms.iter().map(|t| t.values().iter().max().cloned().unwrap_or_else(zero)).collect())
                .expect("max of [0,1] values")
        })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn apply(&self, f: &D0Map) -> D0Element {
        (self.act)(f)
    }
}

/// The affine endomorphisms of `d₀` used to pin down a codensity element.
#[derive(Clone, Debug, PartialEq)]
enum Generator {
    /// `x ↦ (xᵢ, 0, …)`, zero-based.
    Project(usize),
    /// `x ↦ (r·x₁ + (1−r)·x₂, 0, …)`.
    Convex(Rat),
    /// `x ↦ (r, 0, …)`.
    Constant(Rat),
}

impl Generator {
    fn name(&self) -> String {
        match self {
            Generator::Project(i) => format!("π′_{}", i + 1),
            Generator::Convex(r) => format!("⊳′_{}", rational::fmt(r)),
            Generator::Constant(r) => format!("{}′", rational::fmt(r)),
        }
    }

    fn on_point(&self, x: &D0Element) -> D0Element {
        let v = match self {
            Generator::Project(i) => x.entry(*i),
            Generator::Convex(r) => r * x.entry(0) + (one() - r) * x.entry(1),
            Generator::Constant(r) => r.clone(),
        };
        D0Element::first(v).expect("generators map d₀ into d₀")
    }

    fn on_map(&self, f: &D0Map) -> D0Map {
        let space = f.space.clone();
        let g = match self {
            Generator::Project(i) => f.component(*i),
            Generator::Convex(r) => IFunction::mix(r, &f.component(0), &f.component(1)).expect("same space"),
            Generator::Constant(r) => IFunction::constant(space.clone(), r.clone()).expect("r ∈ I"),
        };
        D0Map::single(space, g)
    }
}

/// Recovers `φ = π₁ ∘ α ∘ (ι₁)_*` from a `d₀` action after checking that `α`
/// commutes with the generators `π′ᵢ`, `⊳′_r` and `r′` on probe inputs.
///
/// The probes are every pair of atom indicators plus `trials` random maps of
/// length ≤ 4. A failing square is reported with the generator and input. On
/// success the result is extensional, with coefficients `φ(χ_atom)`, and agrees
/// with `π₁ ∘ α ∘ (ι₁)_*` on every probe.
pub fn reconstruct_phi(alpha: &D0Action, trials: u64, seed: u64) -> std::result::Result<Functional, Refutation> {
    let space = alpha.space.clone();
    let d = random::DEFAULT_MAX_DENOM;
    let mut probes: Vec<D0Map> = Vec::new();
    for a in 0..space.num_atoms() {
        for b in 0..space.num_atoms() {
            let terms = vec![IFunction::atom_indicator(space.clone(), a), IFunction::atom_indicator(space.clone(), b)];
            probes.push(D0Map::from_terms(space.clone(), terms).expect("same space"));
        }
    }
    for case in 0..trials {
        let mut rng = random::case_rng(seed, "reconstruct", case);
        let len = rng.gen_range(1..=4);
        let terms = (0..len).map(|_| random::ifunction(&mut rng, &space, d)).collect();
        probes.push(D0Map::from_terms(space.clone(), terms).expect("same space"));
    }

    let mut rng = random::case_rng(seed, "reconstruct-r", 0);
    let mut rs = vec![rational::rat(1, 2), zero(), one()];
    rs.extend((0..4).map(|_| random::unit_rat(&mut rng, d)));

    let mut generators: Vec<Generator> = (0..5).map(Generator::Project).collect();
    generators.extend(rs.iter().cloned().map(Generator::Convex));
    generators.extend(rs.iter().cloned().map(Generator::Constant));

    for gen in &generators {
        for f in &probes {
            let lhs = gen.on_point(&alpha.apply(f));
            let rhs = alpha.apply(&gen.on_map(f));
            if lhs != rhs {
                return Err(Refutation {
                    reason: format!("α does not commute with {}", gen.name()),
                    witness: json!({
                        "generator": gen.name(),
                        "input": f.terms.iter().map(|t| fmt_vec(t.values())).collect::<Vec<_>>(),
                        "generator_after_alpha": fmt_vec(lhs.entries()),
                        "alpha_after_generator": fmt_vec(rhs.entries()),
                    }),
                });
            }
        }
    }

    let phi_of = |f: &IFunction| alpha.apply(&D0Map::single(space.clone(), f.clone())).entry(0);
    let coeffs: Vec<Rat> = (0..space.num_atoms())
        .map(|k| phi_of(&IFunction::atom_indicator(space.clone(), k)))
        .collect();
    let phi = Functional::extensional(space.clone(), coeffs).expect("one coefficient per atom");
    for f in probes.iter().flat_map(|p| p.terms.iter()) {
        let direct = phi_of(f);
        let linear = phi.eval_unchecked(f);
        if direct != linear {
            return Err(Refutation {
                reason: "π₁ ∘ α ∘ ι₁ disagrees with its linear extension".into(),
                witness: json!({"generator": "ι₁", "input": fmt_vec(f.values()), "direct": rational::fmt(&direct), "linear": rational::fmt(&linear)}),
            });
        }
    }
    Ok(phi)
}

/// Default dimension cap for hull membership.
pub const DEFAULT_MAX_HULL_DIM: usize = 4;

/// Result of an exact hull-membership query.
#[derive(Clone, Debug, PartialEq)]
pub struct HullMembership {
    pub member: bool,
    /// Convex weights over the vertices reproducing the point, when a member.
    pub weights: Option<Vec<Rat>>,
}

/// Decides whether `x` is a convex combination of `vertices` by solving the
/// feasibility problem `λ ≥ 0, Σλ = 1, Σ λᵥ v = x` with an exact phase-one
/// simplex under Bland's rule.
pub fn hull_membership(vertices: &[Vec<Rat>], x: &[Rat], max_dim: usize) -> Result<HullMembership> {
    let n = x.len();
    if n > max_dim {
        return Err(Error::Invalid(format!("dimension {n} exceeds the cap of {max_dim}")));
    }
    if vertices.is_empty() {
        return Err(Error::Invalid("hull of an empty vertex list".into()));
    }
    if let Some(v) = vertices.iter().find(|v| v.len() != n) {
        return Err(Error::Arity { expected: n, found: v.len() });
    }
    let m = vertices.len();
    // Rows: n coordinate equations, then Σλ = 1.
    let mut rows: Vec<(Vec<Rat>, Rat)> = (0..n)
        .map(|j| (vertices.iter().map(|v| v[j].clone()).collect(), x[j].clone()))
        .collect();
    rows.push((vec![one(); m], one()));
    let weights = phase_one(rows, m);
    if let Some(w) = &weights {
        debug_assert!(w.iter().all(|l| !l.is_negative()));
        debug_assert_eq!(w.iter().sum::<Rat>(), one());
        debug_assert!((0..n).all(|j| vertices.iter().zip(w).map(|(v, l)| &v[j] * l).sum::<Rat>() == x[j]));
    }
    Ok(HullMembership { member: weights.is_some(), weights })
}

/// Finds `λ ≥ 0` with `Aλ = b`, or `None` when infeasible.
fn phase_one(rows: Vec<(Vec<Rat>, Rat)>, vars: usize) -> Option<Vec<Rat>> {
    let r = rows.len();
    let cols = vars + r;
    // Tableau with one artificial variable per row; right-hand sides made nonnegative.
    let mut t: Vec<Vec<Rat>> = rows
        .into_iter()
        .enumerate()
        .map(|(i, (a, b))| {
            let flip = b.is_negative();
            let mut row: Vec<Rat> = a.into_iter().map(|v| if flip { -v } else { v }).collect();
            row.extend((0..r).map(|k| if k == i { one() } else { zero() }));
            row.push(if flip { -b } else { b });
            row
        })
        .collect();
    let mut basis: Vec<usize> = (vars..cols).collect();
    // Reduced costs of the phase-one objective (sum of artificials); positive means improving.
    let mut obj: Vec<Rat> = (0..=cols)
        .map(|j| if (vars..cols).contains(&j) { zero() } else { t.iter().map(|row| row[j].clone()).sum() })
        .collect();
    while let Some(enter) = (0..cols).find(|&j| obj[j].is_positive()) {
        let mut leave: Option<usize> = None;
        for i in 0..r {
            if t[i][enter].is_positive() {
                let better = match leave {
                    None => true,
                    Some(l) => {
                        let lhs = &t[i][cols] / &t[i][enter];
                        let rhs = &t[l][cols] / &t[l][enter];
                        lhs < rhs || (lhs == rhs && basis[i] < basis[l])
                    }
                };
                if better {
                    leave = Some(i);
                }
            }
        }
        let Some(p) = leave else { break };
        let pivot = t[p][enter].clone();
        for v in t[p].iter_mut() {
            *v /= &pivot;
        }
        let prow = t[p].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != p && !row[enter].is_zero() {
                let factor = row[enter].clone();
                for (v, pv) in row.iter_mut().zip(&prow) {
                    *v -= &factor * pv;
                }
            }
        }
        let factor = obj[enter].clone();
        for (v, pv) in obj.iter_mut().zip(&prow) {
            *v -= &factor * pv;
        }
        basis[p] = enter;
    }
    if !obj[cols].is_zero() {
        return None;
    }
    let mut sol = vec![zero(); vars];
    for (i, &b) in basis.iter().enumerate() {
        if b < vars {
            sol[b] = t[i][cols].clone();
        }
    }
    Some(sol)
}

/// Applies the linear extension of an extensional `φ` to each real coordinate of
/// `f : atoms → ℚⁿ`.
pub fn extend_to_convex(phi: &Functional, f: &[Vec<Rat>]) -> Result<Vec<Rat>> {
    let c = phi
        .coefficients()
        .ok_or_else(|| Error::Invalid("the linear extension needs an extensional functional".into()))?;
    if f.len() != c.len() {
        return Err(Error::Arity { expected: c.len(), found: f.len() });
    }
    let n = f.first().map_or(0, Vec::len);
    if let Some(p) = f.iter().find(|p| p.len() != n) {
        return Err(Error::Arity { expected: n, found: p.len() });
    }
    Ok((0..n).map(|j| c.iter().zip(f).map(|(a, p)| a * &p[j]).sum()).collect())
}
