use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::kernel::{Field, VarSet};

/// The parameter sets `(ū; v̄)` of a Bethe vector `B_{a,b}(ū; v̄)`.
///
/// Each set must be internally distinct; `ū` and `v̄` may share values.
#[derive(Debug, Clone, PartialEq)]
pub struct BetheLabel<F> {
    pub ubar: VarSet<F>,
    pub vbar: VarSet<F>,
}

impl<F: Field> BetheLabel<F> {
    pub fn new(ubar: VarSet<F>, vbar: VarSet<F>) -> Result<Self> {
        for (name, set) in [("ubar", &ubar), ("vbar", &vbar)] {
            if !set.is_distinct() {
                let v = set.sorted_values();
                let dup = v.windows(2).find(|w| w[0] == w[1]).map(|w| w[0].to_string()).unwrap_or_default();
                return Err(Error::Pole { func: name, x: dup.clone(), y: dup });
            }
        }
        Ok(BetheLabel { ubar, vbar })
    }

    pub fn from_values(u: Vec<F>, v: Vec<F>) -> Result<Self> {
        Self::new(VarSet::new(u), VarSet::new(v))
    }

    pub fn vacuum() -> Self {
        BetheLabel { ubar: VarSet::empty(), vbar: VarSet::empty() }
    }

    pub fn a(&self) -> usize {
        self.ubar.len()
    }

    pub fn b(&self) -> usize {
        self.vbar.len()
    }

    /// Positions `(i, k)` with `u_i = v_k`, for the first such pair.
    pub fn shared(&self) -> Option<(usize, usize)> {
        self.ubar.iter().enumerate().find_map(|(i, x)| self.vbar.position(x).map(|k| (i, k)))
    }

    pub fn is_disjoint(&self) -> bool {
        self.shared().is_none()
    }

    /// Equality as a pair of multisets; Bethe vectors are symmetric in each set.
    pub fn same_as(&self, other: &BetheLabel<F>) -> bool {
        self.ubar.same_multiset(&other.ubar) && self.vbar.same_multiset(&other.vbar)
    }

    /// Canonical order: by `(a, b)`, then sorted `ū`, then sorted `v̄`.
    pub fn canonical_cmp(&self, other: &BetheLabel<F>) -> Ordering {
        fn lex<F: Field>(x: &[F], y: &[F]) -> Ordering {
            x.iter().zip(y).map(|(p, q)| p.canonical_cmp(q)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
        }
        (self.a(), self.b())
            .cmp(&(other.a(), other.b()))
            .then_with(|| lex(&self.ubar.sorted_values(), &other.ubar.sorted_values()))
            .then_with(|| lex(&self.vbar.sorted_values(), &other.vbar.sorted_values()))
    }
}

impl<F: Field> fmt::Display for BetheLabel<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |s: &VarSet<F>| s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        write!(f, "B({}; {})", join(&self.ubar), join(&self.vbar))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term<F> {
    pub coeff: F,
    pub label: BetheLabel<F>,
}

/// A finite linear combination of Bethe vectors. The empty combination is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearCombo<F> {
    terms: Vec<Term<F>>,
}

impl<F: Field> Default for LinearCombo<F> {
    fn default() -> Self {
        LinearCombo { terms: Vec::new() }
    }
}

impl<F: Field> LinearCombo<F> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(coeff: F, label: BetheLabel<F>) -> Self {
        let mut c = Self::new();
        c.push(coeff, label);
        c
    }

    /// Appends a term as is; call [`LinearCombo::normalize`] to merge.
    pub fn push(&mut self, coeff: F, label: BetheLabel<F>) {
        self.terms.push(Term { coeff, label });
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[Term<F>] {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = &Term<F>> {
        self.terms.iter()
    }

    /// Merges terms with equal labels, drops exact zeros and sorts canonically.
    pub fn normalize(&mut self) {
        let mut merged: Vec<Term<F>> = Vec::with_capacity(self.terms.len());
        for t in self.terms.drain(..) {
            match merged.iter_mut().find(|m| m.label.same_as(&t.label)) {
                Some(m) => m.coeff += t.coeff,
                None => merged.push(t),
            }
        }
        merged.retain(|t| !t.coeff.is_zero());
        merged.sort_by(|x, y| x.label.canonical_cmp(&y.label));
        self.terms = merged;
    }

    pub fn normalized(mut self) -> Self {
        self.normalize();
        self
    }

    /// Equality as formal sums: labels compare as multisets, term order is irrelevant.
    pub fn equivalent(&self, other: &LinearCombo<F>) -> bool {
        let (a, b) = (self.clone().normalized(), other.clone().normalized());
        a.len() == b.len() && a.terms.iter().zip(&b.terms).all(|(x, y)| x.coeff == y.coeff && x.label.same_as(&y.label))
    }

    pub fn scaled(&self, s: &F) -> Self {
        LinearCombo { terms: self.terms.iter().map(|t| Term { coeff: t.coeff.clone() * s, label: t.label.clone() }).collect() }
    }

    pub fn extend(&mut self, other: LinearCombo<F>) {
        self.terms.extend(other.terms);
    }
}

impl<F: Field> FromIterator<(F, BetheLabel<F>)> for LinearCombo<F> {
    fn from_iter<I: IntoIterator<Item = (F, BetheLabel<F>)>>(iter: I) -> Self {
        LinearCombo { terms: iter.into_iter().map(|(coeff, label)| Term { coeff, label }).collect() }
    }
}

impl<F: Field> fmt::Display for LinearCombo<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})·{}", t.coeff, t.label)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Qi;

    fn q(n: i64) -> Qi {
        Qi::from_i64(n)
    }

    #[test]
    fn repeated_parameter_is_rejected() {
        assert!(BetheLabel::from_values(vec![q(1), q(1)], vec![]).is_err());
        assert!(BetheLabel::from_values(vec![q(1)], vec![q(1)]).is_ok());
    }

    #[test]
    fn shared_positions() {
        let l = BetheLabel::from_values(vec![q(4), q(7)], vec![q(2), q(7)]).unwrap();
        assert_eq!(l.shared(), Some((1, 1)));
        assert!(BetheLabel::<Qi>::vacuum().is_disjoint());
    }

    #[test]
    fn opposite_terms_cancel() {
        let l = BetheLabel::from_values(vec![q(1), q(2)], vec![q(3)]).unwrap();
        let l_perm = BetheLabel::from_values(vec![q(2), q(1)], vec![q(3)]).unwrap();
        let c: LinearCombo<Qi> = [(q(1), l), (q(-1), l_perm)].into_iter().collect();
        assert!(c.normalized().is_empty());
    }

    #[test]
    fn normalize_sorts() {
        let l1 = BetheLabel::from_values(vec![q(5)], vec![]).unwrap();
        let l0 = BetheLabel::from_values(vec![q(2)], vec![]).unwrap();
        let c: LinearCombo<Qi> = [(q(1), l1.clone()), (q(3), l0.clone()), (q(2), l1)].into_iter().collect();
        let c = c.normalized();
        assert_eq!(c.len(), 2);
        assert_eq!(c.terms()[0].label, l0);
        assert_eq!(c.terms()[1].coeff, q(3));
    }
}
