//! Operation counting.
//!
//! Counting convention, shared by every decoder:
//!
//! * one **summation** per real addition or subtraction. An order-`N` fast
//!   Hadamard transform therefore costs `N·log₂N`, and a sum of `n` magnitudes
//!   accumulated from zero costs `n`;
//! * one **comparison** per two-operand `min`/`max`, per sign test that turns a
//!   real value into a bit decision or a sign-agreement verdict, per threshold
//!   test, and per comparison made while sorting or maintaining a priority queue;
//! * absolute values, negations, XORs and other bit manipulations are free.
//!
//! Bookkeeping that only serves reporting (e.g. recomputing the final score of
//! a decision) is not counted.

use std::ops::{Add, AddAssign};

/// Summations and comparisons spent on one or more decodes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct OpCounter {
    pub summations: u64,
    pub comparisons: u64,
}

impl OpCounter {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn sum(&mut self, n: u64) {
        self.summations += n;
    }

    #[inline]
    pub fn cmp(&mut self, n: u64) {
        self.comparisons += n;
    }

    pub fn total(&self) -> u64 {
        self.summations + self.comparisons
    }
}

impl AddAssign for OpCounter {
    fn add_assign(&mut self, rhs: Self) {
        self.summations += rhs.summations;
        self.comparisons += rhs.comparisons;
    }
}

impl Add for OpCounter {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

/// Insertion sort, descending by `key`, stable for equal keys. Every key
/// comparison is charged to `ops`.
pub(crate) fn insertion_sort_desc<T>(items: &mut [T], ops: &mut OpCounter, key: impl Fn(&T) -> f64) {
    for i in 1..items.len() {
        let mut j = i;
        while j > 0 {
            ops.cmp(1);
            if key(&items[j]) > key(&items[j - 1]) {
                items.swap(j, j - 1);
                j -= 1;
            } else {
                break;
            }
        }
    }
}

/// Natural merge sort, descending by `key`, stable for equal keys.
///
/// Input already in order costs `n − 1` comparisons; every comparison is
/// charged to `ops`.
pub(crate) fn merge_sort_desc<T: Clone>(items: &mut [T], ops: &mut OpCounter, key: impl Fn(&T) -> f64) {
    let n = items.len();
    if n < 2 {
        return;
    }
    // Run boundaries: maximal stretches that are already non-increasing.
    let mut bounds = vec![0];
    for i in 1..n {
        ops.cmp(1);
        if key(&items[i]) > key(&items[i - 1]) {
            bounds.push(i);
        }
    }
    bounds.push(n);
    let mut buf = Vec::with_capacity(n);
    while bounds.len() > 2 {
        let mut next = vec![0];
        for w in bounds.windows(3).step_by(2) {
            let (lo, mid, hi) = (w[0], w[1], w[2]);
            buf.clear();
            let (mut i, mut j) = (lo, mid);
            while i < mid && j < hi {
                ops.cmp(1);
                if key(&items[j]) > key(&items[i]) {
                    buf.push(items[j].clone());
                    j += 1;
                } else {
                    buf.push(items[i].clone());
                    i += 1;
                }
            }
            buf.extend_from_slice(&items[i..mid]);
            buf.extend_from_slice(&items[j..hi]);
            items[lo..hi].clone_from_slice(&buf);
            next.push(hi);
        }
        if bounds.len() % 2 == 0 {
            // Odd number of runs: the last one waits for the next pass.
            next.push(*bounds.last().expect("non-empty"));
        }
        bounds = next;
    }
}
