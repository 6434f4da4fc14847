use super::Poset;

/// Full-support product of finitely many posets of the same kind, ordered
/// coordinate-wise. Rank is the sum of the factor ranks.
#[derive(Clone, Debug)]
pub struct Product<P> {
    factors: Vec<P>,
}

impl<P: Poset> Product<P> {
    pub fn new(factors: Vec<P>) -> Self {
        Product { factors }
    }

    pub fn factors(&self) -> &[P] {
        &self.factors
    }

    fn cartesian(parts: Vec<Vec<P::Cond>>) -> Vec<Vec<P::Cond>> {
        parts.into_iter().fold(vec![Vec::new()], |acc, options| {
            let mut out = Vec::with_capacity(acc.len() * options.len());
            for prefix in &acc {
                for o in &options {
                    let mut v = prefix.clone();
                    v.push(o.clone());
                    out.push(v);
                }
            }
            out
        })
    }

    fn distribute(&self, c: &[P::Cond], i: usize, remaining: usize, acc: &mut Vec<Vec<P::Cond>>, out: &mut Vec<Vec<P::Cond>>) {
        if i == self.factors.len() {
            if remaining == 0 {
                out.extend(Self::cartesian(acc.clone()));
            }
            return;
        }
        let room = self.factors[i]
            .max_rank()
            .saturating_sub(self.factors[i].rank(&c[i]));
        for k in 0..=remaining.min(room) {
            let level = self.factors[i].extensions_at(&c[i], k);
            if level.is_empty() {
                continue;
            }
            acc.push(level);
            self.distribute(c, i + 1, remaining - k, acc, out);
            acc.pop();
        }
    }
}

impl<P: Poset> Poset for Product<P> {
    type Cond = Vec<P::Cond>;

    fn top(&self) -> Self::Cond {
        self.factors.iter().map(Poset::top).collect()
    }

    fn leq(&self, p: &Self::Cond, q: &Self::Cond) -> bool {
        p.len() == self.factors.len()
            && q.len() == self.factors.len()
            && self
                .factors
                .iter()
                .zip(p.iter().zip(q))
                .all(|(f, (a, b))| f.leq(a, b))
    }

    fn contains(&self, c: &Self::Cond) -> bool {
        c.len() == self.factors.len() && self.factors.iter().zip(c).all(|(f, x)| f.contains(x))
    }

    fn rank(&self, c: &Self::Cond) -> usize {
        self.factors.iter().zip(c).map(|(f, x)| f.rank(x)).sum()
    }

    fn max_rank(&self) -> usize {
        self.factors.iter().map(Poset::max_rank).sum()
    }

    fn extensions_at(&self, c: &Self::Cond, extra: usize) -> Vec<Self::Cond> {
        let mut out = Vec::new();
        self.distribute(c, 0, extra, &mut Vec::new(), &mut out);
        out.sort();
        out
    }

    fn weaker(&self, c: &Self::Cond) -> Vec<Self::Cond> {
        let parts = self.factors.iter().zip(c).map(|(f, x)| f.weaker(x)).collect();
        let mut out = Self::cartesian(parts);
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{check_order_axioms, FinitePoset};

    #[test]
    fn product_of_two_chains() {
        let p = Product::new(vec![FinitePoset::chain(2).unwrap(), FinitePoset::chain(3).unwrap()]);
        let all = p.enumerate(10, 100).unwrap();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], vec![0, 0]);
        assert_eq!(p.max_rank(), 3);
        assert_eq!(p.extensions_at(&vec![0, 0], 1), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(p.weaker(&vec![1, 1]).len(), 4);
        assert_eq!(check_order_axioms(&p, 10, 100).unwrap(), None);
    }
}
