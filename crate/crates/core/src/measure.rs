//! Probability measures on finite spaces and computable mixtures on [0,1].

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{self, in_unit, one, zero, Rat};
use crate::sigma::{same_space, FinSpace, IFunction, MeasMap, PointSet, Space};

/// A probability measure, stored by the weight of each atom.
#[derive(Clone, Debug, PartialEq)]
pub struct Measure {
    space: Space,
    weights: Vec<Rat>,
}

impl Measure {
    pub fn new(space: Space, weights: Vec<Rat>) -> Result<Measure> {
        if weights.len() != space.num_atoms() {
            return Err(Error::Arity { expected: space.num_atoms(), found: weights.len() });
        }
        if let Some((k, w)) = weights.iter().enumerate().find(|(_, w)| w.is_negative()) {
            return Err(Error::NegativeWeight { value: rational::fmt(w), at: format!("atom {k}") });
        }
        let total: Rat = weights.iter().sum();
        if total != one() {
            return Err(Error::NotNormalized(rational::fmt(&total)));
        }
        Ok(Measure { space, weights })
    }

    /// Weights are trusted to be nonnegative and sum to one.
    pub(crate) fn from_parts(space: Space, weights: Vec<Rat>) -> Measure {
        debug_assert_eq!(weights.iter().sum::<Rat>(), one());
        Measure { space, weights }
    }

    pub fn dirac(space: Space, point: usize) -> Result<Measure> {
        if point >= space.len() {
            return Err(Error::UnknownPoint(format!("index {point}")));
        }
        let mut weights = vec![zero(); space.num_atoms()];
        weights[space.atom_of(point)] = one();
        Ok(Measure { space, weights })
    }

    /// Equal weight on every atom.
    pub fn uniform(space: Space) -> Measure {
        let n = space.num_atoms() as i64;
        let weights = vec![rational::rat(1, n); space.num_atoms()];
        Measure { space, weights }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn weights(&self) -> &[Rat] {
        &self.weights
    }

    pub fn weight(&self, atom: usize) -> &Rat {
        &self.weights[atom]
    }

    pub fn measure_of(&self, set: PointSet) -> Result<Rat> {
        self.space.require_measurable(set)?;
        Ok(self.space.atoms_in(set).map(|k| &self.weights[k]).sum())
    }

    /// `A′ ↦ π(g⁻¹A′)`.
    pub fn pushforward(&self, g: &MeasMap) -> Result<Measure> {
        same_space(&self.space, g.dom())?;
        let mut weights = vec![zero(); g.cod().num_atoms()];
        for (k, w) in self.weights.iter().enumerate() {
            weights[g.atom_image(k)] += w;
        }
        Ok(Measure { space: g.cod().clone(), weights })
    }

    pub fn integrate(&self, f: &IFunction) -> Result<Rat> {
        same_space(&self.space, f.space())?;
        Ok(self.weights.iter().zip(f.values()).map(|(w, v)| w * v).sum())
    }
}

/// Compares `∫ f∘g dπ` with `∫ f d(g_*π)`.
pub fn change_of_variables_check(g: &MeasMap, pi: &Measure, f: &IFunction) -> Result<bool> {
    let lhs = pi.integrate(&f.compose(g)?)?;
    let rhs = pi.pushforward(g)?.integrate(f)?;
    Ok(lhs == rhs)
}

impl Serialize for Measure {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Measure", 2)?;
        st.serialize_field("space", &*self.space)?;
        st.serialize_field("weights", &WeightMap(&self.weights))?;
        st.end()
    }
}

/// Serializes atom weights as `{"0": "p/q", ...}` in atom order.
pub(crate) struct WeightMap<'a>(pub &'a [Rat]);

impl Serialize for WeightMap<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_map(
            self.0
                .iter()
                .enumerate()
                .map(|(k, w)| (k.to_string(), rational::fmt(w))),
        )
    }
}

/// Atom weights as read from JSON: either an index-keyed object or a plain list.
#[derive(Deserialize)]
#[serde(untagged)]
pub(crate) enum WeightsJson {
    Map(BTreeMap<String, String>),
    List(Vec<String>),
}

impl WeightsJson {
    pub(crate) fn resolve(self, atoms: usize) -> Result<Vec<Rat>> {
        match self {
            WeightsJson::List(v) => {
                if v.len() != atoms {
                    return Err(Error::Arity { expected: atoms, found: v.len() });
                }
                v.iter().map(|s| rational::parse(s)).collect()
            }
            WeightsJson::Map(m) => {
                let mut out = vec![zero(); atoms];
                for (k, v) in m {
                    let idx: usize = k
                        .parse()
                        .map_err(|_| Error::Parse(format!("atom index `{k}` is not a number")))?;
                    if idx >= atoms {
                        return Err(Error::Invalid(format!("atom index {idx} out of range (space has {atoms} atoms)")));
                    }
                    out[idx] = rational::parse(&v)?;
                }
                Ok(out)
            }
        }
    }
}

#[derive(Deserialize)]
struct MeasureJson {
    space: FinSpace,
    weights: WeightsJson,
}

impl<'de> Deserialize<'de> for Measure {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Measure, D::Error> {
        let j = MeasureJson::deserialize(d)?;
        let space = Space::new(j.space);
        let weights = j.weights.resolve(space.num_atoms()).map_err(D::Error::custom)?;
        Measure::new(space, weights).map_err(D::Error::custom)
    }
}

/// Finite mixture of point masses and uniform distributions on [0,1].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "IntervalJson", into = "IntervalJson")]
pub struct IntervalMeasure {
    points: Vec<(Rat, Rat)>,
    uniform: Vec<(Rat, Rat, Rat)>,
}

impl IntervalMeasure {
    /// `points` are `(location, mass)`, `uniform` are `(a, b, mass)` with `a < b`.
    pub fn new(points: Vec<(Rat, Rat)>, uniform: Vec<(Rat, Rat, Rat)>) -> Result<IntervalMeasure> {
        for (loc, mass) in &points {
            if !in_unit(loc) {
                return Err(Error::OutOfUnitInterval { value: rational::fmt(loc), at: "point location".into() });
            }
            if mass.is_negative() {
                return Err(Error::NegativeWeight { value: rational::fmt(mass), at: "point mass".into() });
            }
        }
        for (a, b, mass) in &uniform {
            if !in_unit(a) || !in_unit(b) || a >= b {
                return Err(Error::Invalid(format!(
                    "uniform piece [{}, {}] is not a nondegenerate subinterval of [0,1]",
                    rational::fmt(a),
                    rational::fmt(b)
                )));
            }
            if mass.is_negative() {
                return Err(Error::NegativeWeight { value: rational::fmt(mass), at: "uniform piece".into() });
            }
        }
        let total: Rat = points.iter().map(|p| &p.1).chain(uniform.iter().map(|u| &u.2)).sum();
        if total != one() {
            return Err(Error::NotNormalized(rational::fmt(&total)));
        }
        Ok(IntervalMeasure { points, uniform })
    }

    pub fn uniform01() -> IntervalMeasure {
        IntervalMeasure { points: vec![], uniform: vec![(zero(), one(), one())] }
    }

    pub fn dirac(x: Rat) -> Result<IntervalMeasure> {
        IntervalMeasure::new(vec![(x, one())], vec![])
    }

    pub fn points(&self) -> &[(Rat, Rat)] {
        &self.points
    }

    pub fn uniform_pieces(&self) -> &[(Rat, Rat, Rat)] {
        &self.uniform
    }
}

#[derive(Clone, Serialize, Deserialize)]
struct IntervalJson {
    #[serde(default)]
    points: Vec<[String; 2]>,
    #[serde(default)]
    uniform: Vec<[String; 3]>,
}

impl TryFrom<IntervalJson> for IntervalMeasure {
    type Error = Error;

    fn try_from(j: IntervalJson) -> Result<IntervalMeasure> {
        let points = j
            .points
            .iter()
            .map(|[l, m]| Ok((rational::parse(l)?, rational::parse(m)?)))
            .collect::<Result<_>>()?;
        let uniform = j
            .uniform
            .iter()
            .map(|[a, b, m]| Ok((rational::parse(a)?, rational::parse(b)?, rational::parse(m)?)))
            .collect::<Result<_>>()?;
        IntervalMeasure::new(points, uniform)
    }
}

impl From<IntervalMeasure> for IntervalJson {
    fn from(m: IntervalMeasure) -> IntervalJson {
        IntervalJson {
            points: m.points.iter().map(|(l, w)| [rational::fmt(l), rational::fmt(w)]).collect(),
            uniform: m
                .uniform
                .iter()
                .map(|(a, b, w)| [rational::fmt(a), rational::fmt(b), rational::fmt(w)])
                .collect(),
        }
    }
}

/// Right-continuous step function on [0,1]: `values[i]` on `[t_i, t_{i+1})`, plus the value at 1.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFunction {
    breakpoints: Vec<Rat>,
    values: Vec<Rat>,
    at_one: Rat,
}

impl StepFunction {
    pub fn new(breakpoints: Vec<Rat>, values: Vec<Rat>, at_one: Rat) -> Result<StepFunction> {
        if breakpoints.len() < 2 || breakpoints[0] != zero() || *breakpoints.last().unwrap() != one() {
            return Err(Error::Invalid("breakpoints must run from 0 to 1".into()));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid("breakpoints must be strictly increasing".into()));
        }
        if values.len() + 1 != breakpoints.len() {
            return Err(Error::Arity { expected: breakpoints.len() - 1, found: values.len() });
        }
        if let Some(v) = values.iter().chain(std::iter::once(&at_one)).find(|v| !in_unit(v)) {
            return Err(Error::OutOfUnitInterval { value: rational::fmt(v), at: "step value".into() });
        }
        Ok(StepFunction { breakpoints, values, at_one })
    }

    pub fn constant(r: Rat) -> Result<StepFunction> {
        StepFunction::new(vec![zero(), one()], vec![r.clone()], r)
    }

    /// χ_{[a,b)} for `0 ≤ a < b ≤ 1`; the value at 1 is 0.
    pub fn indicator(a: Rat, b: Rat) -> Result<StepFunction> {
        let mut bps = vec![zero()];
        let mut vals = vec![];
        if a > zero() {
            bps.push(a.clone());
            vals.push(zero());
        }
        vals.push(one());
        if b < one() {
            bps.push(b);
            vals.push(zero());
        }
        bps.push(one());
        StepFunction::new(bps, vals, zero())
    }

    pub fn breakpoints(&self) -> &[Rat] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        if *x >= one() {
            return self.at_one.clone();
        }
        // Index of the last breakpoint ≤ x.
        let i = self.breakpoints.partition_point(|t| t <= x);
        self.values[i.saturating_sub(1).min(self.values.len() - 1)].clone()
    }

    /// `∫_a^b s(x) dx` for `0 ≤ a ≤ b ≤ 1`.
    pub fn integral_over(&self, a: &Rat, b: &Rat) -> Rat {
        let start = self.breakpoints.partition_point(|t| t <= a).saturating_sub(1);
        let mut total = zero();
        for i in start..self.values.len() {
            let lo = self.breakpoints[i].clone().max(a.clone());
            let hi = self.breakpoints[i + 1].clone().min(b.clone());
            if lo >= *b {
                break;
            }
            if hi > lo {
                total += (hi - lo) * &self.values[i];
            }
        }
        total
    }

    /// Pointwise maximum on the common refinement of both breakpoint lists.
    pub fn max(&self, other: &StepFunction) -> StepFunction {
        let mut bps: Vec<Rat> = self.breakpoints.iter().chain(&other.breakpoints).cloned().collect();
        bps.sort();
        bps.dedup();
        let values = bps[..bps.len() - 1]
            .iter()
            .map(|t| self.eval(t).max(other.eval(t)))
            .collect();
        let at_one = self.at_one.clone().max(other.at_one.clone());
        StepFunction { breakpoints: bps, values, at_one }
    }

    pub fn le(&self, other: &StepFunction) -> bool {
        let mut bps: Vec<&Rat> = self.breakpoints.iter().chain(&other.breakpoints).collect();
        bps.sort();
        bps.dedup();
        bps.into_iter().all(|t| self.eval(t) <= other.eval(t))
    }
}

/// Exact `∫ s dm`: point masses contribute `mass·s(loc)`, uniform pieces their mean value.
pub fn integrate_step(s: &StepFunction, m: &IntervalMeasure) -> Rat {
    let points: Rat = m.points.iter().map(|(loc, w)| w * s.eval(loc)).sum();
    let pieces: Rat = m
        .uniform
        .iter()
        .filter(|(_, _, w)| !w.is_zero())
        .map(|(a, b, w)| w * s.integral_over(a, b) / (b - a))
        .sum();
    points + pieces
}

/// A function `I → I` evaluable at rationals, with a modulus of uniform continuity:
/// `|x − y| ≤ modulus(ε)` implies `|f(x) − f(y)| ≤ ε`.
pub struct Continuous<'a> {
    pub f: &'a (dyn Fn(&Rat) -> Rat + Sync),
    pub modulus: &'a (dyn Fn(&Rat) -> Rat + Sync),
}

/// Finest grid the approximation integrator will build.
pub const MAX_GRID_LEVEL: u32 = 20;

/// Result of [`integrate_approx`]: the value and the simple minorant/majorant bracketing it.
#[derive(Clone, Debug, PartialEq)]
pub struct ApproxIntegral {
    /// Integral of the left-endpoint staircase, clamped into `[minorant, majorant]`.
    pub value: Rat,
    pub minorant: Rat,
    pub majorant: Rat,
    /// The grid has `2^level` cells.
    pub level: u32,
}

fn grid_level(g: &Continuous<'_>, tolerance: &Rat) -> Result<u32> {
    let delta = (g.modulus)(tolerance);
    if !delta.is_positive() {
        return Err(Error::Invalid("modulus of continuity returned a nonpositive δ".into()));
    }
    (0..=MAX_GRID_LEVEL)
        .find(|&k| rational::dyadic(k) <= delta)
        .ok_or_else(|| Error::Invalid(format!("δ = {} needs a grid finer than 2^-{MAX_GRID_LEVEL}", rational::fmt(&delta))))
}

struct Staircases {
    sampled: StepFunction,
    lower: StepFunction,
    upper: StepFunction,
}

/// Samples `f` at left endpoints of a `2^level` dyadic grid; the lower and upper
/// staircases are the samples shifted by `∓shift` and clamped to [0,1].
fn staircases(g: &Continuous<'_>, level: u32, shift: &Rat) -> Staircases {
    let n = 1u64 << level;
    let breakpoints: Vec<Rat> = (0..=n).map(|i| Rat::new(i.into(), n.into())).collect();
    let values: Vec<Rat> = breakpoints[..breakpoints.len() - 1].iter().map(|t| (g.f)(t)).collect();
    let at_one = (g.f)(&one());
    let sampled = StepFunction { breakpoints, values, at_one };
    let shifted = |op: &dyn Fn(&Rat) -> Rat| StepFunction {
        breakpoints: sampled.breakpoints.clone(),
        values: sampled.values.iter().map(op).collect(),
        at_one: op(&sampled.at_one),
    };
    let lower = shifted(&|v| (v - shift).max(zero()));
    let upper = shifted(&|v| (v + shift).min(one()));
    Staircases { sampled, lower, upper }
}

fn bracket(sampled: &StepFunction, lower: &StepFunction, upper: &StepFunction, m: &IntervalMeasure, level: u32) -> ApproxIntegral {
    let minorant = integrate_step(lower, m);
    let majorant = integrate_step(upper, m);
    let value = integrate_step(sampled, m).max(minorant.clone()).min(majorant.clone());
    ApproxIntegral { value, minorant, majorant, level }
}

/// Integrates a uniformly continuous `f` against `m` to within `ε`.
///
/// The grid is the coarsest dyadic grid with mesh ≤ `modulus(ε/2)`. Left-endpoint
/// samples lowered by `ε/2` form a simple minorant of `f` and raised by `ε/2` a
/// majorant, so the true integral and the returned value both lie in
/// `[minorant, majorant]`, an interval of width at most `ε`.
pub fn integrate_approx(g: &Continuous<'_>, eps: &Rat, m: &IntervalMeasure) -> Result<ApproxIntegral> {
    if !eps.is_positive() {
        return Err(Error::Invalid(format!("ε must be positive, got {}", rational::fmt(eps))));
    }
    let half = eps / rational::int(2);
    let level = grid_level(g, &half)?;
    let st = staircases(g, level, &half);
    Ok(bracket(&st.sampled, &st.lower, &st.upper, m, level))
}

/// Successive refinements with tolerances `ε, ε/2, …, ε/2^(levels−1)`.
///
/// Each minorant is the pointwise maximum of the new one and its predecessor (and
/// dually for majorants), so minorant integrals never decrease and majorant
/// integrals never increase.
pub fn refinement_chain(g: &Continuous<'_>, eps: &Rat, levels: usize, m: &IntervalMeasure) -> Result<Vec<ApproxIntegral>> {
    if !eps.is_positive() {
        return Err(Error::Invalid(format!("ε must be positive, got {}", rational::fmt(eps))));
    }
    let mut out = Vec::with_capacity(levels);
    let mut current: Option<(StepFunction, StepFunction)> = None;
    let mut tol = eps.clone();
    let mut level = 0;
    for _ in 0..levels {
        let half = &tol / rational::int(2);
        level = level.max(grid_level(g, &half)?);
        let st = staircases(g, level, &half);
        let (lo, hi) = match current {
            None => (st.lower, st.upper),
            Some((plo, phi)) => (plo.max(&st.lower), min_step(&phi, &st.upper)),
        };
        out.push(bracket(&st.sampled, &lo, &hi, m, level));
        current = Some((lo, hi));
        tol = half;
    }
    Ok(out)
}

fn min_step(a: &StepFunction, b: &StepFunction) -> StepFunction {
    let flip = |s: &StepFunction| StepFunction {
        breakpoints: s.breakpoints.clone(),
        values: s.values.iter().map(|v| one() - v).collect(),
        at_one: one() - &s.at_one,
    };
    flip(&flip(a).max(&flip(b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use std::sync::Arc;

    fn discrete(n: usize) -> Space {
        Arc::new(FinSpace::discrete_n(n))
    }

    #[test]
    fn measure_of_sums_atoms() {
        let s = discrete(3);
        let u = Measure::uniform(s.clone());
        assert_eq!(u.measure_of(PointSet(0b011)).unwrap(), rat(2, 3));
        assert_eq!(u.measure_of(s.full()).unwrap(), one());
        let d = Measure::dirac(s, 0).unwrap();
        assert_eq!(d.measure_of(PointSet(1)).unwrap(), one());
    }

    #[test]
    fn measure_of_rejects_non_measurable_sets() {
        let s = Arc::new(FinSpace::generate(&["a", "b", "c"], &[vec!["a"]]).unwrap());
        let u = Measure::uniform(s.clone());
        assert!(matches!(u.measure_of(s.set(&["b"]).unwrap()), Err(Error::NotMeasurable(_))));
    }

    #[test]
    fn construction_validates_weights() {
        let s = discrete(2);
        assert!(matches!(Measure::new(s.clone(), vec![rat(1, 2), rat(1, 3)]), Err(Error::NotNormalized(_))));
        assert!(matches!(Measure::new(s.clone(), vec![rat(3, 2), rat(-1, 2)]), Err(Error::NegativeWeight { .. })));
        assert!(Measure::new(s, vec![one()]).is_err());
    }

    #[test]
    fn pushforward_collapses_preimages() {
        let dom = Arc::new(FinSpace::discrete(&["a", "b", "c"]).unwrap());
        let cod = Arc::new(FinSpace::discrete(&["x", "y"]).unwrap());
        let g = MeasMap::from_labels(dom.clone(), cod.clone(), &[("a", "x"), ("b", "x"), ("c", "y")]).unwrap();
        let pi = Measure::new(dom.clone(), vec![rat(1, 2), rat(1, 3), rat(1, 6)]).unwrap();
        assert_eq!(pi.pushforward(&g).unwrap().weights(), &[rat(5, 6), rat(1, 6)]);
        assert_eq!(pi.pushforward(&MeasMap::identity(dom.clone())).unwrap(), pi);
        let pt = discrete(1);
        let c = MeasMap::constant(dom, pt, 0).unwrap();
        assert_eq!(pi.pushforward(&c).unwrap().weights(), &[one()]);
    }

    #[test]
    fn integrate_weighted_sum() {
        let s = discrete(3);
        let pi = Measure::new(s.clone(), vec![rat(1, 2), rat(1, 3), rat(1, 6)]).unwrap();
        let f = IFunction::new(s.clone(), vec![one(), rat(1, 2), zero()]).unwrap();
        assert_eq!(pi.integrate(&f).unwrap(), rat(2, 3));
        let r = IFunction::constant(s.clone(), rat(2, 7)).unwrap();
        assert_eq!(pi.integrate(&r).unwrap(), rat(2, 7));
        let chi = IFunction::characteristic(s, PointSet(0b101)).unwrap();
        assert_eq!(pi.integrate(&chi).unwrap(), pi.measure_of(PointSet(0b101)).unwrap());
        let other = IFunction::zero(discrete(2));
        assert!(matches!(pi.integrate(&other), Err(Error::SpaceMismatch(_))));
    }

    #[test]
    fn change_of_variables_on_collapse() {
        let dom = discrete(4);
        let cod = discrete(2);
        let g = MeasMap::new(dom.clone(), cod.clone(), vec![0, 0, 1, 0]).unwrap();
        let pi = Measure::new(dom, vec![rat(1, 8), rat(3, 8), rat(1, 4), rat(1, 4)]).unwrap();
        let f = IFunction::new(cod, vec![rat(1, 3), rat(5, 6)]).unwrap();
        assert!(change_of_variables_check(&g, &pi, &f).unwrap());
    }

    #[test]
    fn step_integrals() {
        let u = IntervalMeasure::uniform01();
        let s = StepFunction::indicator(zero(), rat(1, 4)).unwrap();
        assert_eq!(integrate_step(&s, &u), rat(1, 4));
        let d = IntervalMeasure::dirac(rat(1, 2)).unwrap();
        let s2 = StepFunction::new(vec![zero(), rat(1, 2), one()], vec![rat(1, 3), rat(2, 3)], one()).unwrap();
        assert_eq!(integrate_step(&s2, &d), rat(2, 3));
        let mix = IntervalMeasure::new(vec![(zero(), rat(1, 2))], vec![(zero(), one(), rat(1, 2))]).unwrap();
        let half = StepFunction::indicator(zero(), rat(1, 2)).unwrap();
        assert_eq!(integrate_step(&half, &mix), rat(3, 4));
    }

    #[test]
    fn step_eval_at_breakpoints_and_one() {
        let s = StepFunction::new(vec![zero(), rat(1, 2), one()], vec![rat(1, 3), rat(2, 3)], rat(1, 5)).unwrap();
        assert_eq!(s.eval(&zero()), rat(1, 3));
        assert_eq!(s.eval(&rat(1, 2)), rat(2, 3));
        assert_eq!(s.eval(&rat(99, 100)), rat(2, 3));
        assert_eq!(s.eval(&one()), rat(1, 5));
        assert_eq!(s.integral_over(&rat(1, 4), &rat(3, 4)), rat(1, 4));
    }

    #[test]
    fn interval_measure_validation() {
        assert!(IntervalMeasure::new(vec![(rat(3, 2), one())], vec![]).is_err());
        assert!(IntervalMeasure::new(vec![], vec![(rat(1, 2), rat(1, 2), one())]).is_err());
        assert!(IntervalMeasure::new(vec![(zero(), rat(1, 2))], vec![]).is_err());
        let text = r#"{"points":[["1/2","1/3"]],"uniform":[["0","1/4","2/3"]]}"#;
        let m: IntervalMeasure = serde_json::from_str(text).unwrap();
        assert_eq!(m.points(), &[(rat(1, 2), rat(1, 3))]);
    }

    fn identity(x: &Rat) -> Rat {
        x.clone()
    }

    fn square(x: &Rat) -> Rat {
        x * x
    }

    #[test]
    fn approx_integrates_identity_and_constants() {
        let id_mod = |e: &Rat| e.clone();
        let g = Continuous { f: &identity, modulus: &id_mod };
        let eps = rational::dyadic(10);
        let r = integrate_approx(&g, &eps, &IntervalMeasure::uniform01()).unwrap();
        assert!((r.value.clone() - rat(1, 2)).abs() <= eps);
        assert!(r.minorant <= rat(1, 2) && rat(1, 2) <= r.majorant);
        assert!(r.majorant.clone() - &r.minorant <= eps);

        let c = |_: &Rat| rat(1, 3);
        let any = |_: &Rat| one();
        let g = Continuous { f: &c, modulus: &any };
        let r = integrate_approx(&g, &rat(1, 8), &IntervalMeasure::uniform01()).unwrap();
        assert_eq!(r.value, rat(1, 3));
        assert_eq!(r.minorant, rat(1, 3) - rat(1, 16));
    }

    #[test]
    fn approx_point_mass() {
        let m = |e: &Rat| e / int(2);
        let g = Continuous { f: &square, modulus: &m };
        let eps = rat(1, 100);
        let r = integrate_approx(&g, &eps, &IntervalMeasure::dirac(rat(1, 2)).unwrap()).unwrap();
        assert!((r.value - rat(1, 4)).abs() <= eps);
    }

    #[test]
    fn approx_rejects_nonpositive_eps() {
        let id_mod = |e: &Rat| e.clone();
        let g = Continuous { f: &identity, modulus: &id_mod };
        assert!(integrate_approx(&g, &zero(), &IntervalMeasure::uniform01()).is_err());
        assert!(integrate_approx(&g, &rat(-1, 2), &IntervalMeasure::uniform01()).is_err());
    }

    #[test]
    fn refinement_chain_is_monotone() {
        let m = |e: &Rat| e / int(2);
        let g = Continuous { f: &square, modulus: &m };
        let chain = refinement_chain(&g, &rat(1, 4), 6, &IntervalMeasure::uniform01()).unwrap();
        for w in chain.windows(2) {
            assert!(w[0].minorant <= w[1].minorant);
            assert!(w[1].majorant <= w[0].majorant);
        }
        let exact = rat(1, 3);
        assert!(chain.iter().all(|c| c.minorant <= exact && exact <= c.majorant));
    }
}
