//! Interval representations of circle graphs.
//!
//! A circle graph is given by a family of closed intervals on a line whose
//! endpoints are pairwise distinct. After [`IntervalRepresentation::normalize`]
//! the 2n endpoints are exactly `1..=2n`, which lets every sweep in the crate
//! index positions directly.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("instance has no intervals")]
    Empty,
    #[error("endpoint {0} is used more than once")]
    DuplicateEndpoint(i64),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A closed interval `[left, right]` with `left < right`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub left: u32,
    pub right: u32,
}

impl Interval {
    pub fn new(left: u32, right: u32) -> Self {
        debug_assert!(left < right);
        Interval { left, right }
    }

    pub fn contains_point(&self, p: u32) -> bool {
        self.left <= p && p <= self.right
    }

    /// `self ⊋ other`.
    pub fn strictly_contains(&self, other: &Interval) -> bool {
        self.left < other.left && other.right < self.right
    }

    /// `self` ends before `other` starts.
    pub fn before(&self, other: &Interval) -> bool {
        self.right < other.left
    }

    /// Partial overlap: the intervals meet and neither contains the other.
    pub fn overlaps(&self, other: &Interval) -> bool {
        (self.left < other.left && other.left < self.right && self.right < other.right)
            || (other.left < self.left && self.left < other.right && other.right < self.right)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.left, self.right)
    }
}

/// What happens at a sweep position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Event {
    Open(usize),
    Close(usize),
}

/// Normalized interval representation: vertex `i` owns `intervals[i]` and
/// the endpoints form the permutation `1..=2n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalRepresentation {
    intervals: Vec<Interval>,
    // events[p - 1] is the event at position p.
    events: Vec<Event>,
}

impl IntervalRepresentation {
    /// Rank-compress raw endpoint pairs. Pairs may be given in either order;
    /// vertex order is preserved.
    pub fn normalize(raw: &[(i64, i64)]) -> Result<Self, InstanceError> {
        if raw.is_empty() {
            return Err(InstanceError::Empty);
        }
        let mut points: Vec<(i64, usize, bool)> = Vec::with_capacity(2 * raw.len());
        for (v, &(a, b)) in raw.iter().enumerate() {
            if a == b {
                return Err(InstanceError::DuplicateEndpoint(a));
            }
            let (l, r) = if a < b { (a, b) } else { (b, a) };
            points.push((l, v, true));
            points.push((r, v, false));
        }
        points.sort_unstable_by_key(|&(p, _, _)| p);
        for w in points.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(InstanceError::DuplicateEndpoint(w[0].0));
            }
        }
        let mut intervals = vec![Interval { left: 0, right: 0 }; raw.len()];
        for (rank, &(_, v, is_left)) in points.iter().enumerate() {
            let pos = rank as u32 + 1;
            if is_left {
                intervals[v].left = pos;
            } else {
                intervals[v].right = pos;
            }
        }
        Ok(Self::from_normalized(intervals))
    }

    fn from_normalized(intervals: Vec<Interval>) -> Self {
        let mut events = vec![Event::Open(0); 2 * intervals.len()];
        for (v, iv) in intervals.iter().enumerate() {
            events[iv.left as usize - 1] = Event::Open(v);
            events[iv.right as usize - 1] = Event::Close(v);
        }
        IntervalRepresentation { intervals, events }
    }

    /// Build an instance from a shuffled endpoint sequence: consecutive
    /// pairs `(x, y)` become the interval `[min, max]`.
    pub fn from_sequence(seq: &[i64]) -> Result<Self, InstanceError> {
        if !seq.len().is_multiple_of(2) {
            return Err(InstanceError::Parse {
                line: 0,
                message: format!("sequence has odd length {}", seq.len()),
            });
        }
        let pairs: Vec<(i64, i64)> = seq.chunks(2).map(|c| (c[0], c[1])).collect();
        Self::normalize(&pairs)
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn interval(&self, v: usize) -> Interval {
        self.intervals[v]
    }

    /// Sweep events in position order; `events()[p - 1]` happens at `p`.
    pub fn events(&self) -> &[Event] {
        &self.events
    }

    /// The poset order: `i ⪯ j` iff `i == j` or `i` ends before `j` starts.
    pub fn precedes(&self, i: usize, j: usize) -> bool {
        i == j || self.intervals[i].before(&self.intervals[j])
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.precedes(i, j) || self.precedes(j, i)
    }

    /// `I(i) ⊋ I(j)`.
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.intervals[i].strictly_contains(&self.intervals[j])
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.intervals[i].overlaps(&self.intervals[j])
    }

    /// True when the given vertices are pairwise comparable.
    pub fn is_chain(&self, vertices: &[usize]) -> bool {
        let mut sorted = vertices.to_vec();
        sorted.sort_unstable_by_key(|&v| self.intervals[v].left);
        sorted.windows(2).all(|w| self.intervals[w[0]].before(&self.intervals[w[1]]))
    }

    /// Vertices by ascending left endpoint. Containers come before the
    /// intervals they contain, so this is a topological order of the
    /// containment DAG.
    pub fn by_left(&self) -> Vec<usize> {
        self.events
            .iter()
            .filter_map(|e| match *e {
                Event::Open(v) => Some(v),
                Event::Close(_) => None,
            })
            .collect()
    }

    /// Parse the instance text format: a line with `n`, then `n` lines
    /// `l r`. Lines starting with `#` and blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self, InstanceError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line, header) = lines.next().ok_or(InstanceError::Empty)?;
        let n: usize = header.parse().map_err(|_| InstanceError::Parse {
            line,
            message: format!("expected vertex count, found {header:?}"),
        })?;
        let mut raw = Vec::with_capacity(n);
        for (line, content) in lines.by_ref().take(n) {
            let mut it = content.split_whitespace().map(str::parse::<i64>);
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(a)), Some(Ok(b)), None) => raw.push((a, b)),
                _ => {
                    return Err(InstanceError::Parse {
                        line,
                        message: format!("expected two integers, found {content:?}"),
                    })
                }
            }
        }
        if raw.len() != n {
            return Err(InstanceError::Parse {
                line: 0,
                message: format!("expected {n} intervals, found {}", raw.len()),
            });
        }
        if let Some((line, extra)) = lines.next() {
            return Err(InstanceError::Parse {
                line,
                message: format!("unexpected trailing content {extra:?}"),
            });
        }
        Self::normalize(&raw)
    }

    /// Render in the instance text format accepted by [`parse`](Self::parse).
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.len());
        for iv in &self.intervals {
            out.push_str(&format!("{} {}\n", iv.left, iv.right));
        }
        out
    }
}

impl fmt::Display for IntervalRepresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, iv) in self.intervals.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{iv}")?;
        }
        write!(f, "}}")
    }
}
