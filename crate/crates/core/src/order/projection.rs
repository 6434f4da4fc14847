use std::collections::HashMap;
use std::marker::PhantomData;

use serde::Serialize;

use super::{DenseSet, Filter, FilterCheck, Poset};
use crate::error::{Error, Result};

/// A map between posets that is expected to be a projection: it sends top to
/// top, preserves order, and every strengthening of an image is reached, from
/// below the source, by the image of some stronger condition.
pub trait Projection {
    type Domain: Poset;
    type Codomain: Poset;

    fn domain(&self) -> &Self::Domain;
    fn codomain(&self) -> &Self::Codomain;

    fn apply(
        &self,
        p: &<Self::Domain as Poset>::Cond,
    ) -> Result<<Self::Codomain as Poset>::Cond>;

    /// A canonical witness `p' <= p` with `apply(p') <= q`, when the map knows one.
    fn lift(
        &self,
        _p: &<Self::Domain as Poset>::Cond,
        _q: &<Self::Codomain as Poset>::Cond,
    ) -> Option<Result<<Self::Domain as Poset>::Cond>> {
        None
    }

    /// `lift` promises `apply(lift(p, q))` equivalent to `q`, not merely below it.
    fn exact_lift(&self) -> bool {
        false
    }
}

type DCond<M> = <<M as Projection>::Domain as Poset>::Cond;
type CCond<M> = <<M as Projection>::Codomain as Poset>::Cond;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyBounds {
    /// Domain conditions of rank up to this are checked.
    pub domain_rank: usize,
    /// Lifting targets are all codomain extensions of an image up to this many ranks deeper.
    pub lift_depth: usize,
    /// Maps without a canonical witness are searched this many ranks below the source.
    pub witness_depth: usize,
    pub budget: usize,
}

impl VerifyBounds {
    pub fn new(domain_rank: usize, lift_depth: usize) -> Self {
        VerifyBounds {
            domain_rank,
            lift_depth,
            witness_depth: lift_depth + 2,
            budget: super::DEFAULT_BUDGET,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum Violation<D, C> {
    TopNotPreserved {
        image: C,
    },
    MapFailed {
        condition: D,
        error: String,
    },
    OrderNotPreserved {
        stronger: D,
        weaker: D,
        stronger_image: C,
        weaker_image: C,
    },
    NoLift {
        condition: D,
        target: C,
    },
    LiftFailed {
        condition: D,
        target: C,
        error: String,
    },
    LiftOutsideCarrier {
        condition: D,
        target: C,
        witness: D,
    },
    LiftNotBelow {
        condition: D,
        target: C,
        witness: D,
    },
    LiftImageNotBelowTarget {
        condition: D,
        target: C,
        witness: D,
        image: C,
    },
    LiftImageNotEqual {
        condition: D,
        target: C,
        witness: D,
        image: C,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport<D, C> {
    pub domain_checked: usize,
    pub order_pairs_checked: usize,
    pub lifts_checked: usize,
    pub violations: Vec<Violation<D, C>>,
}

impl<D, C> VerificationReport<D, C> {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check the projection axioms on every domain condition of rank at most
/// `bounds.domain_rank`.
pub fn verify_projection<M: Projection>(
    map: &M,
    bounds: &VerifyBounds,
) -> Result<VerificationReport<DCond<M>, CCond<M>>> {
    let sample = map.domain().enumerate(bounds.domain_rank, bounds.budget)?;
    verify_projection_on(map, &sample, bounds)
}

/// Check the projection axioms on an explicit sample of domain conditions.
/// Order preservation is checked against the full upward cone of each
/// sampled condition.
pub fn verify_projection_on<M: Projection>(
    map: &M,
    sample: &[DCond<M>],
    bounds: &VerifyBounds,
) -> Result<VerificationReport<DCond<M>, CCond<M>>> {
    let dom = map.domain();
    let cod = map.codomain();
    let mut report = VerificationReport {
        domain_checked: sample.len(),
        order_pairs_checked: 0,
        lifts_checked: 0,
        violations: Vec::new(),
    };
    let mut work = 0usize;
    let mut tick = |n: usize| -> Result<()> {
        work += n;
        if work > bounds.budget {
            Err(Error::bound("projection verification", bounds.budget))
        } else {
            Ok(())
        }
    };

    let mut images: HashMap<DCond<M>, Option<CCond<M>>> = HashMap::new();
    let mut image = |p: &DCond<M>, violations: &mut Vec<Violation<DCond<M>, CCond<M>>>| {
        images
            .entry(p.clone())
            .or_insert_with(|| match map.apply(p) {
                Ok(c) => Some(c),
                Err(e) => {
                    violations.push(Violation::MapFailed {
                        condition: p.clone(),
                        error: e.to_string(),
                    });
                    None
                }
            })
            .clone()
    };

    let top = dom.top();
    if let Some(t) = image(&top, &mut report.violations) {
        if !cod.equivalent(&t, &cod.top()) {
            report.violations.push(Violation::TopNotPreserved { image: t });
        }
    }

    for p in sample {
        let Some(pi) = image(p, &mut report.violations) else {
            continue;
        };
        for w in dom.weaker(p) {
            if &w == p {
                continue;
            }
            tick(1)?;
            report.order_pairs_checked += 1;
            let Some(wi) = image(&w, &mut report.violations) else {
                continue;
            };
            if !cod.leq(&pi, &wi) {
                report.violations.push(Violation::OrderNotPreserved {
                    stronger: p.clone(),
                    weaker: w,
                    stronger_image: pi.clone(),
                    weaker_image: wi,
                });
            }
        }

        for k in 0..=bounds.lift_depth {
            for q in cod.extensions_at(&pi, k) {
                tick(1)?;
                report.lifts_checked += 1;
                match map.lift(p, &q) {
                    Some(Ok(witness)) => {
                        if !dom.contains(&witness) {
                            report.violations.push(Violation::LiftOutsideCarrier {
                                condition: p.clone(),
                                target: q,
                                witness,
                            });
                            continue;
                        }
                        if !dom.leq(&witness, p) {
                            report.violations.push(Violation::LiftNotBelow {
                                condition: p.clone(),
                                target: q,
                                witness,
                            });
                            continue;
                        }
                        let Some(wi) = image(&witness, &mut report.violations) else {
                            continue;
                        };
                        if !cod.leq(&wi, &q) {
                            report.violations.push(Violation::LiftImageNotBelowTarget {
                                condition: p.clone(),
                                target: q,
                                witness,
                                image: wi,
                            });
                        } else if map.exact_lift() && !cod.equivalent(&wi, &q) {
                            report.violations.push(Violation::LiftImageNotEqual {
                                condition: p.clone(),
                                target: q,
                                witness,
                                image: wi,
                            });
                        }
                    }
                    Some(Err(e)) => report.violations.push(Violation::LiftFailed {
                        condition: p.clone(),
                        target: q,
                        error: e.to_string(),
                    }),
                    None => {
                        let mut found = false;
                        'search: for j in 0..=bounds.witness_depth {
                            for e in dom.extensions_at(p, j) {
                                tick(1)?;
                                if let Some(ei) = image(&e, &mut report.violations) {
                                    if cod.leq(&ei, &q) {
                                        found = true;
                                        break 'search;
                                    }
                                }
                            }
                        }
                        if !found {
                            report.violations.push(Violation::NoLift {
                                condition: p.clone(),
                                target: q,
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

/// The upward closure of the image of `filter`.
pub fn pushforward<M: Projection>(map: &M, filter: &Filter<DCond<M>>) -> Result<Filter<CCond<M>>> {
    let images = filter.iter().map(|p| map.apply(p)).collect::<Result<Vec<_>>>()?;
    let out = Filter::upward_closure(map.codomain(), images);
    match out.check(map.codomain()) {
        FilterCheck::Ok => Ok(out),
        bad => Err(Error::NotAFilter(format!("{bad:?}"))),
    }
}

/// `{ p : apply(p) <= q for some q in set }`, the preimage set that a
/// generic must meet for its pushforward to meet `set`.
pub fn project_dense<M>(map: &M, set: &DenseSet<CCond<M>>) -> DenseSet<DCond<M>>
where
    M: Projection + Clone + Send + Sync + 'static,
    CCond<M>: Send + Sync + 'static,
    DCond<M>: Send + Sync + 'static,
{
    let map = map.clone();
    let set = set.clone();
    let label = format!("preimage({})", set.label());
    let open = set.is_open();
    let test = move |p: &DCond<M>| match map.apply(p) {
        Ok(image) if open => set.contains(&image),
        Ok(image) => map.codomain().weaker(&image).iter().any(|q| set.contains(q)),
        Err(_) => false,
    };
    if open {
        DenseSet::open_predicate(label, test)
    } else {
        DenseSet::predicate(label, test)
    }
}

/// The identity projection of a poset onto itself.
#[derive(Clone, Debug)]
pub struct Identity<P>(pub P);

impl<P: Poset> Projection for Identity<P> {
    type Domain = P;
    type Codomain = P;

    fn domain(&self) -> &P {
        &self.0
    }

    fn codomain(&self) -> &P {
        &self.0
    }

    fn apply(&self, p: &P::Cond) -> Result<P::Cond> {
        Ok(p.clone())
    }

    fn lift(&self, _p: &P::Cond, q: &P::Cond) -> Option<Result<P::Cond>> {
        Some(Ok(q.clone()))
    }

    fn exact_lift(&self) -> bool {
        true
    }
}

/// Sends everything to the top of the codomain. A projection exactly when
/// the codomain is trivial.
#[derive(Clone, Debug)]
pub struct ConstantTop<D, C> {
    pub domain: D,
    pub codomain: C,
}

impl<D: Poset, C: Poset> Projection for ConstantTop<D, C> {
    type Domain = D;
    type Codomain = C;

    fn domain(&self) -> &D {
        &self.domain
    }

    fn codomain(&self) -> &C {
        &self.codomain
    }

    fn apply(&self, _p: &D::Cond) -> Result<C::Cond> {
        Ok(self.codomain.top())
    }
}

/// A projection candidate given by an arbitrary function; lifting witnesses
/// are searched for.
#[derive(Clone)]
pub struct FnProjection<D, C, F> {
    pub domain: D,
    pub codomain: C,
    pub map: F,
    _marker: PhantomData<fn()>,
}

impl<D, C, F> FnProjection<D, C, F> {
    pub fn new(domain: D, codomain: C, map: F) -> Self {
        FnProjection {
            domain,
            codomain,
            map,
            _marker: PhantomData,
        }
    }
}

impl<D, C, F> Projection for FnProjection<D, C, F>
where
    D: Poset,
    C: Poset,
    F: Fn(&D::Cond) -> C::Cond,
{
    type Domain = D;
    type Codomain = C;

    fn domain(&self) -> &D {
        &self.domain
    }

    fn codomain(&self) -> &C {
        &self.codomain
    }

    fn apply(&self, p: &D::Cond) -> Result<C::Cond> {
        Ok((self.map)(p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{build_generic, check_density, is_generic, FinitePoset};

    fn diamond() -> FinitePoset {
        FinitePoset::from_pairs(4, &[(1, 0), (2, 0), (3, 1), (3, 2)], 0).unwrap()
    }

    #[test]
    fn identity_on_three_chain_is_a_projection() {
        let r = verify_projection(&Identity(FinitePoset::chain(3).unwrap()), &VerifyBounds::new(10, 10)).unwrap();
        assert!(r.holds(), "{:?}", r.violations);
        assert_eq!(r.domain_checked, 3);
        assert_eq!(r.order_pairs_checked, 3);
    }

    #[test]
    fn constant_top_onto_trivial_codomain_is_a_projection() {
        let m = ConstantTop {
            domain: diamond(),
            codomain: FinitePoset::chain(1).unwrap(),
        };
        assert!(verify_projection(&m, &VerifyBounds::new(10, 10)).unwrap().holds());
    }

    #[test]
    fn constant_top_onto_nontrivial_codomain_fails_lifting() {
        let m = ConstantTop {
            domain: diamond(),
            codomain: FinitePoset::chain(2).unwrap(),
        };
        let r = verify_projection(&m, &VerifyBounds::new(10, 10)).unwrap();
        assert!(r.violations.iter().all(|v| matches!(v, Violation::NoLift { .. })));
        assert_eq!(r.violations.len(), 4);
    }

    #[test]
    fn crossed_diamond_breaks_order_preservation() {
        // Brute force over all pairs: sending 1 -> 3 and 3 -> 1 makes 3 <= 1
        // map to 1 <= 3, which fails.
        let map = |p: &usize| match *p {
            1 => 3,
            3 => 1,
            x => x,
        };
        let m = FnProjection::new(diamond(), diamond(), map);
        let r = verify_projection(&m, &VerifyBounds::new(10, 10)).unwrap();
        let mut expected = Vec::new();
        let d = diamond();
        for p in 0..4 {
            for w in 0..4 {
                if p != w && d.le(p, w) && !d.le(map(&p), map(&w)) {
                    expected.push((p, w));
                }
            }
        }
        let got: Vec<_> = r
            .violations
            .iter()
            .filter_map(|v| match v {
                Violation::OrderNotPreserved { stronger, weaker, .. } => Some((*stronger, *weaker)),
                _ => None,
            })
            .collect();
        assert!(!expected.is_empty());
        assert_eq!(got, expected);
    }

    #[test]
    fn pushforward_of_top_and_identity() {
        let p = diamond();
        let id = Identity(p.clone());
        let g = Filter::from_elements([0usize]);
        assert_eq!(pushforward(&id, &g).unwrap(), g);
        let g = Filter::principal(&p, &3);
        assert_eq!(pushforward(&id, &g).unwrap(), g);
    }

    #[test]
    fn project_dense_through_identity_is_downward_saturation() {
        let p = diamond();
        let id = Identity(p.clone());
        let e = DenseSet::explicit("mid", [1usize]);
        let pre = project_dense(&id, &e);
        let members: Vec<_> = (0..4).filter(|x| pre.contains(x)).collect();
        assert_eq!(members, vec![1, 3]);
        let whole = DenseSet::explicit("all", 0..4usize);
        let pre = project_dense(&id, &whole);
        assert!((0..4).all(|x| pre.contains(&x)));
        assert_eq!(check_density(&p, &pre, 10, 10, 1000).unwrap(), None);
    }

    #[test]
    fn generic_through_identity_meets_target() {
        let p = diamond();
        let id = Identity(p.clone());
        let e = DenseSet::explicit("bottom", [3usize]);
        let g = build_generic(&p, &[project_dense(&id, &e)], &0, 1000).unwrap();
        let h = pushforward(&id, &g).unwrap();
        assert!(is_generic(&h, &[e]));
    }
}
