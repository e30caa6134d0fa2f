//! Description operators used to generalize similar subgroups.

use crate::data::Description;

/// Common generalization: the shared items, when any exist.
pub fn root(a: &Description, b: &Description) -> Option<Description> {
    let shared: Vec<_> = a.items().intersection(b.items()).copied().collect();
    if shared.is_empty() {
        None
    } else {
        Some(Description::from_items(shared))
    }
}

/// Union of both item sets, defined only when both constrain exactly the
/// same attributes.
pub fn merge(a: &Description, b: &Description) -> Option<Description> {
    if a.is_empty() || !a.same_attributes(b) {
        return None;
    }
    Some(Description::from_items(a.items().union(b.items()).copied()))
}

/// `a` is subsumed by `b`: same attributes and every item of `a` in `b`.
pub fn is_in(a: &Description, b: &Description) -> bool {
    a.same_attributes(b) && a.items().is_subset(b.items())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Item;

    // attributes i, j, k = 0, 1, 2; value index n stands for v_{·n}
    fn d(items: &[(usize, usize)]) -> Description {
        Description::from_items(items.iter().map(|&(a, v)| Item::new(a, v)))
    }

    fn d1() -> Description {
        d(&[(0, 1), (1, 1), (1, 2)])
    }
    fn d2() -> Description {
        d(&[(0, 1), (0, 2), (1, 2), (1, 3)])
    }
    fn d3() -> Description {
        d(&[(0, 3), (2, 1)])
    }

    #[test]
    fn worked_example() {
        assert_eq!(root(&d1(), &d2()), Some(d(&[(0, 1), (1, 2)])));
        assert_eq!(
            merge(&d1(), &d2()),
            Some(d(&[(0, 1), (0, 2), (1, 1), (1, 2), (1, 3)]))
        );
        assert_eq!(root(&d3(), &d1()), None);
        assert_eq!(root(&d3(), &d2()), None);
        assert_eq!(merge(&d1(), &d3()), None);
        assert_eq!(merge(&d2(), &d3()), None);
    }

    #[test]
    fn subsumption() {
        let m = merge(&d1(), &d2()).unwrap();
        assert!(is_in(&d1(), &d1()));
        assert!(is_in(&d1(), &m));
        assert!(!is_in(&d1(), &d2()));
        assert!(!is_in(&d2(), &d1()));
    }

    #[test]
    fn idempotent() {
        for x in [d1(), d2(), d3()] {
            assert_eq!(root(&x, &x), Some(x.clone()));
            assert_eq!(merge(&x, &x), Some(x.clone()));
        }
    }
}
