//! A finitely additive integration operator on ℕ whose measure is not
//! countably additive.
//!
//! The operator is the limit at infinity, restricted to eventually constant
//! functions `ℕ → I`; its measure is restricted to the algebra of finite and
//! cofinite sets. That algebra is not a σ-algebra: a countable union of finite
//! sets can leave it. Every computation below nonetheless happens on
//! representable sets and functions, which is enough to exhibit affineness, weak
//! averaging, sup-norm continuity, vanishing singletons with total mass 1, and
//! the failure to respect pointwise limits.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::rational::{self, fmt_vec, in_unit, one, zero, Rat};
use crate::verdict::Verdict;

/// `f : ℕ → I` given by a finite prefix and the constant value taken afterwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventualFn {
    prefix: Vec<Rat>,
    tail: Rat,
}

impl EventualFn {
    pub fn new(prefix: Vec<Rat>, tail: Rat) -> Result<EventualFn> {
        if let Some(v) = prefix.iter().chain(std::iter::once(&tail)).find(|v| !in_unit(v)) {
            return Err(Error::OutOfUnitInterval { value: rational::fmt(v), at: "eventually constant function".into() });
        }
        Ok(EventualFn { prefix, tail })
    }

    pub fn constant(r: Rat) -> Result<EventualFn> {
        EventualFn::new(vec![], r)
    }

    /// `χ_{[n,∞)}`.
    pub fn tail_indicator(n: usize) -> EventualFn {
        EventualFn { prefix: vec![zero(); n], tail: one() }
    }

    pub fn prefix(&self) -> &[Rat] {
        &self.prefix
    }

    pub fn tail(&self) -> &Rat {
        &self.tail
    }

    pub fn at(&self, n: usize) -> Rat {
        self.prefix.get(n).cloned().unwrap_or_else(|| self.tail.clone())
    }

    /// `r·f + (1−r)·g`.
    pub fn mix(r: &Rat, f: &EventualFn, g: &EventualFn) -> Result<EventualFn> {
        if !in_unit(r) {
            return Err(Error::OutOfUnitInterval { value: rational::fmt(r), at: "mixing weight".into() });
        }
        let len = f.prefix.len().max(g.prefix.len());
        let s = one() - r;
        let prefix = (0..len).map(|n| r * f.at(n) + &s * g.at(n)).collect();
        Ok(EventualFn { prefix, tail: r * &f.tail + &s * &g.tail })
    }

    /// `sup_n |f(n) − g(n)|`, attained on the prefixes or the tails.
    pub fn sup_distance(&self, other: &EventualFn) -> Rat {
        let len = self.prefix.len().max(other.prefix.len());
        (0..len)
            .map(|n| (self.at(n) - other.at(n)).abs())
            .chain(std::iter::once((&self.tail - &other.tail).abs()))
            .max()
            .unwrap_or_else(zero)
    }
}


/// A finite subset of ℕ or the complement of one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FinCofSet {
    Finite(BTreeSet<usize>),
    /// Stores the finite complement.
    Cofinite(BTreeSet<usize>),
}

impl FinCofSet {
    pub fn finite<I: IntoIterator<Item = usize>>(xs: I) -> FinCofSet {
        FinCofSet::Finite(xs.into_iter().collect())
    }

    pub fn cofinite<I: IntoIterator<Item = usize>>(missing: I) -> FinCofSet {
        FinCofSet::Cofinite(missing.into_iter().collect())
    }

    pub fn contains(&self, n: usize) -> bool {
        match self {
            FinCofSet::Finite(s) => s.contains(&n),
            FinCofSet::Cofinite(c) => !c.contains(&n),
        }
    }

    pub fn union(&self, other: &FinCofSet) -> FinCofSet {
        use FinCofSet::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(a | b),
            (Finite(a), Cofinite(c)) | (Cofinite(c), Finite(a)) => Cofinite(c - a),
            (Cofinite(c), Cofinite(d)) => Cofinite(c & d),
        }
    }

    pub fn is_disjoint(&self, other: &FinCofSet) -> bool {
        use FinCofSet::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.is_disjoint(b),
            (Finite(a), Cofinite(c)) | (Cofinite(c), Finite(a)) => a.is_subset(c),
            // Two cofinite sets always meet.
            (Cofinite(_), Cofinite(_)) => false,
        }
    }

    /// `χ_A` as an eventually constant function.
    pub fn characteristic(&self) -> EventualFn {
        let (set, inside, tail) = match self {
            FinCofSet::Finite(s) => (s, one(), zero()),
            FinCofSet::Cofinite(c) => (c, zero(), one()),
        };
        let len = set.iter().next_back().map_or(0, |m| m + 1);
        let prefix = (0..len).map(|n| if set.contains(&n) { inside.clone() } else { tail.clone() }).collect();
        EventualFn { prefix, tail }
    }
}

/// `f ↦ lim_{n→∞} f(n)`.
pub fn limit_functional(f: &EventualFn) -> Rat {
    f.tail.clone()
}

/// 0 on finite sets, 1 on cofinite ones.
pub fn cofinite_measure(a: &FinCofSet) -> Rat {
    match a {
        FinCofSet::Finite(_) => zero(),
        FinCofSet::Cofinite(_) => one(),
    }
}

/// Checks `|φ(f) − φ(g)| ≤ sup |f − g|` for the limit functional.
pub fn sup_continuity_check(f: &EventualFn, g: &EventualFn) -> Verdict {
    let eps = f.sup_distance(g);
    let gap = (limit_functional(f) - limit_functional(g)).abs();
    let w = json!({"epsilon": rational::fmt(&eps), "gap": rational::fmt(&gap)});
    if gap <= eps {
        Verdict::pass("sup-continuity", 1, 0).with_witness(w)
    } else {
        Verdict::fail("sup-continuity", w, 1, 0)
    }
}

/// A sequence of eventually constant functions with a certificate of pointwise
/// convergence to 0: `f_n(i) = 0` whenever `n ≥ zero_from(i)`.
pub struct NatSequence<'a> {
    pub term: &'a dyn Fn(usize) -> EventualFn,
    pub zero_from: &'a dyn Fn(usize) -> usize,
}

/// `(χ_{[n,∞)})_n`: at index `i` the terms vanish once `n > i`.
pub fn tail_indicators() -> NatSequence<'static> {
    NatSequence { term: &EventualFn::tail_indicator, zero_from: &|i| i + 1 }
}

/// Evaluates `φ(f_n)` for `n < terms` and asks whether the values reach every
/// threshold `2⁻ᵏ`. Each term's certificate is validated on `probe` indices first.
/// A failure reports the smallest value seen, a lower bound the sequence is stuck
/// above.
pub fn respects_limits_nat(
    phi: &dyn Fn(&EventualFn) -> Rat,
    seq: &NatSequence<'_>,
    terms: usize,
    probe: usize,
) -> Result<Verdict> {
    for i in 0..probe {
        let n0 = (seq.zero_from)(i);
        for n in n0..n0 + probe {
            let v = (seq.term)(n).at(i);
            if !v.is_zero() {
                return Err(Error::Invalid(format!(
                    "uncertified witness: f_{n}({i}) = {} but certified zero from {n0}",
                    rational::fmt(&v)
                )));
            }
        }
    }
    let values: Vec<Rat> = (0..terms).map(|n| phi(&(seq.term)(n))).collect();
    let floor = values.iter().min().cloned().unwrap_or_else(zero);
    let last = values.last().cloned().unwrap_or_else(zero);
    let shown: Vec<String> = fmt_vec(&values[..values.len().min(8)]);
    Ok(if last.is_zero() {
        Verdict::pass("respects-limits", terms as u64, 0).with_witness(json!({"first_values": shown}))
    } else {
        Verdict::fail(
            "respects-limits",
            json!({
                "sequence": "chi_[n,inf)",
                "terms": terms,
                "first_values": shown,
                "stuck_at": rational::fmt(&floor),
            }),
            terms as u64,
            0,
        )
    })
}

/// The exhibited failure of countable additivity.
#[derive(Clone, Debug, Serialize)]
pub struct ViolationReport {
    /// Largest `N` for which `Σ_{i<N} μ({i})` was summed.
    pub partial_sum_bound: usize,
    pub partial_sum: String,
    pub total_mass: String,
    /// Every singleton is finite, so every partial sum, and hence the series, is 0.
    pub series_certificate: String,
    pub respects_limits: Verdict,
}

impl ViolationReport {
    pub fn violated(&self) -> bool {
        self.partial_sum == "0/1" && self.total_mass == "1/1" && !self.respects_limits.passed()
    }
}

pub fn countable_additivity_violation(partial_sum_bound: usize, limit_terms: usize) -> ViolationReport {
    let partial: Rat = (0..partial_sum_bound).map(|i| cofinite_measure(&FinCofSet::finite([i]))).sum();
    let total = cofinite_measure(&FinCofSet::cofinite([]));
    let respects = respects_limits_nat(&limit_functional, &tail_indicators(), limit_terms, 32)
        .expect("the tail-indicator certificate is valid");
    ViolationReport {
        partial_sum_bound,
        partial_sum: rational::fmt(&partial),
        total_mass: rational::fmt(&total),
        series_certificate: "μ({i}) = 0 for every i since singletons are finite; all partial sums vanish".into(),
        respects_limits: respects,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn limit_of_constants_and_indicators() {
        assert_eq!(limit_functional(&EventualFn::constant(rat(2, 9)).unwrap()), rat(2, 9));
        for n in [0, 1, 7, 100] {
            let f = EventualFn::tail_indicator(n);
            assert_eq!(limit_functional(&f), one());
            assert_eq!(f.at(n.saturating_sub(1)), if n == 0 { one() } else { zero() });
        }
        assert_eq!(limit_functional(&FinCofSet::finite([1, 4]).characteristic()), zero());
    }

    #[test]
    fn measure_on_finite_and_cofinite_sets() {
        assert_eq!(cofinite_measure(&FinCofSet::finite([0, 1, 2])), zero());
        assert_eq!(cofinite_measure(&FinCofSet::cofinite([5])), one());
        let a = FinCofSet::finite([1, 2]);
        let b = FinCofSet::cofinite([0, 1, 2]);
        assert!(a.is_disjoint(&b));
        let u = a.union(&b);
        assert_eq!(u, FinCofSet::cofinite([0]));
        assert_eq!(cofinite_measure(&u), cofinite_measure(&a) + cofinite_measure(&b));
    }

    #[test]
    fn characteristic_matches_membership() {
        let s = FinCofSet::cofinite([2, 5]);
        let chi = s.characteristic();
        for n in 0..10 {
            assert_eq!(chi.at(n), if s.contains(n) { one() } else { zero() });
        }
    }

    #[test]
    fn sup_continuity_examples() {
        let f = EventualFn::new(vec![rat(1, 3)], rat(1, 2)).unwrap();
        let g = EventualFn::new(vec![rat(1, 3)], rat(1, 4)).unwrap();
        let v = sup_continuity_check(&f, &g);
        assert!(v.passed());
        assert_eq!(v.witness["gap"], "1/4");
        assert_eq!(v.witness["epsilon"], "1/4");
        assert_eq!(sup_continuity_check(&f, &f).witness["epsilon"], "0/1");
    }

    #[test]
    fn violation_report() {
        let r = countable_additivity_violation(1000, 50);
        assert!(r.violated());
        assert_eq!(r.respects_limits.witness["stuck_at"], "1/1");
    }

    #[test]
    fn bad_certificate_is_rejected() {
        let seq = NatSequence { term: &EventualFn::tail_indicator, zero_from: &|i| i };
        assert!(respects_limits_nat(&limit_functional, &seq, 5, 4).is_err());
    }

    #[test]
    fn values_outside_unit_interval_are_rejected() {
        assert!(EventualFn::new(vec![rat(3, 2)], zero()).is_err());
        assert!(EventualFn::new(vec![], rat(-1, 2)).is_err());
    }
}
