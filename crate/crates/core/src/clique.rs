//! Point-versus-interval incidence matrices.
//!
//! Row `p` of the clique matrix lists the intervals containing the point
//! `p`; such a set is an antichain of the poset (its intervals pairwise
//! intersect). Only maximal rows are kept: every maximal antichain is
//! realized at the left endpoint of its last-opening interval, and that
//! row is maximal exactly when the next endpoint of the sweep is a closing
//! one.

use crate::interval::{Event, IntervalRepresentation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRow {
    /// Sweep position the row was taken at.
    pub point: u32,
    /// Intervals containing `point`, ascending vertex id.
    pub members: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueMatrix {
    rows: Vec<SweepRow>,
}

impl CliqueMatrix {
    /// The clique matrix `M` over all vertices.
    pub fn new(rep: &IntervalRepresentation) -> Self {
        let all: Vec<usize> = (0..rep.len()).collect();
        Self::restricted(rep, &all)
    }

    /// Maximal rows of `M` restricted to the columns in `subset` (the
    /// submatrix `M_i` when `subset = R_V(i)`).
    pub fn restricted(rep: &IntervalRepresentation, subset: &[usize]) -> Self {
        let mask = membership(rep.len(), subset);
        let mut active: Vec<usize> = Vec::new();
        let mut rows = Vec::new();
        let mut last_open: Option<u32> = None;
        for (k, ev) in rep.events().iter().enumerate() {
            match *ev {
                Event::Open(v) if mask[v] => {
                    active.push(v);
                    last_open = Some(k as u32 + 1);
                }
                Event::Close(v) if mask[v] => {
                    if let Some(point) = last_open.take() {
                        let mut members = active.clone();
                        members.sort_unstable();
                        rows.push(SweepRow { point, members });
                    }
                    active.retain(|&u| u != v);
                }
                _ => {}
            }
        }
        CliqueMatrix { rows }
    }

    /// One row per endpoint position `1..=2n`, restricted to `subset`.
    /// Rows may be empty or dominated; this is the unreduced matrix used to
    /// cross-check the reduced one.
    pub fn all_points(rep: &IntervalRepresentation, subset: &[usize]) -> Self {
        let rows = (1..=2 * rep.len() as u32)
            .map(|point| {
                let mut members: Vec<usize> = subset
                    .iter()
                    .copied()
                    .filter(|&v| rep.interval(v).contains_point(point))
                    .collect();
                members.sort_unstable();
                SweepRow { point, members }
            })
            .collect();
        CliqueMatrix { rows }
    }

    pub fn rows(&self) -> &[SweepRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// For each vertex `< n`, the indices of rows containing it.
    pub fn column_support(&self, n: usize) -> Vec<Vec<usize>> {
        let mut support = vec![Vec::new(); n];
        for (r, row) in self.rows.iter().enumerate() {
            for &v in &row.members {
                support[v].push(r);
            }
        }
        support
    }

    /// `max_p (M x)_p` for a 0-1 characteristic vector given as a mask.
    pub fn max_load(&self, selected: &[bool]) -> usize {
        self.rows
            .iter()
            .map(|row| row.members.iter().filter(|&&v| selected[v]).count())
            .max()
            .unwrap_or(0)
    }
}

fn membership(n: usize, subset: &[usize]) -> Vec<bool> {
    let mut mask = vec![false; n];
    for &v in subset {
        mask[v] = true;
    }
    mask
}

/// Size of a maximum antichain of the poset inside `subset`: the largest
/// number of its intervals sharing a point.
pub fn max_antichain(rep: &IntervalRepresentation, subset: &[usize]) -> usize {
    let mask = membership(rep.len(), subset);
    let mut depth = 0usize;
    let mut best = 0usize;
    for ev in rep.events() {
        match *ev {
            Event::Open(v) if mask[v] => {
                depth += 1;
                best = best.max(depth);
            }
            Event::Close(v) if mask[v] => depth -= 1,
            _ => {}
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rep(raw: &[(i64, i64)]) -> IntervalRepresentation {
        IntervalRepresentation::normalize(raw).unwrap()
    }

    fn pentagon() -> IntervalRepresentation {
        rep(&[(1, 4), (3, 6), (5, 8), (7, 10), (2, 9)])
    }

    #[test]
    fn antichain_examples() {
        let c5 = pentagon();
        assert_eq!(max_antichain(&c5, &[0, 1, 2, 3, 4]), 3);
        assert_eq!(max_antichain(&c5, &[]), 0);
        let p3 = rep(&[(3, 5), (1, 4), (2, 6)]);
        assert_eq!(max_antichain(&p3, &[0, 1, 2]), 3);
    }

    #[test]
    fn pentagon_rows() {
        let m = CliqueMatrix::new(&pentagon());
        let rows: Vec<(u32, Vec<usize>)> =
            m.rows().iter().map(|r| (r.point, r.members.clone())).collect();
        assert_eq!(
            rows,
            vec![
                (3, vec![0, 1, 4]),
                (5, vec![1, 2, 4]),
                (7, vec![2, 3, 4])
            ]
        );
        let sub = CliqueMatrix::restricted(&pentagon(), &[1, 2]);
        assert_eq!(sub.rows().len(), 1);
        assert_eq!(sub.rows()[0].members, vec![1, 2]);
    }

    #[test]
    fn consecutive_ones() {
        let r = rep(&[(1, 12), (2, 5), (3, 8), (4, 6), (7, 10), (9, 11)]);
        let m = CliqueMatrix::new(&r);
        for support in m.column_support(r.len()) {
            assert!(!support.is_empty());
            assert!(support.windows(2).all(|w| w[1] == w[0] + 1));
        }
    }

    #[test]
    fn max_load_matches_sweep() {
        let r = pentagon();
        let m = CliqueMatrix::new(&r);
        assert_eq!(m.max_load(&[true, false, true, false, true]), 2);
        assert_eq!(m.max_load(&[true; 5]), 3);
    }
}
