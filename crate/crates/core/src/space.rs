//! Lexicographic enumeration of function tables.
//!
//! A table `t` of length `len` with entries in `0..base` is identified with
//! the integer whose base-`base` digits are `t[0] t[1] ... t[len-1]`, most
//! significant first, so numeric order is lexicographic table order.

/// Default bound on the number of candidate maps an exhaustive search may
/// visit without an explicit limit.
pub const DEFAULT_MAX_SPACE: u128 = 100_000_000;

/// Number of tables of length `len` over `base` values (`base^len`, with
/// `0^0 = 1`). Saturates at `u128::MAX`.
pub fn space_size(len: usize, base: usize) -> u128 {
    let mut size: u128 = 1;
    for _ in 0..len {
        size = size.saturating_mul(base as u128);
    }
    size
}

/// The table with lexicographic rank `rank`.
pub fn table_at(rank: u128, len: usize, base: usize) -> Vec<usize> {
    let mut table = vec![0; len];
    let mut rest = rank;
    for slot in table.iter_mut().rev() {
        *slot = (rest % base as u128) as usize;
        rest /= base as u128;
    }
    table
}

/// Iterator over every table of length `len` with entries in `0..base`.
#[derive(Debug, Clone)]
pub struct Tables {
    base: usize,
    next: Option<Vec<usize>>,
}

impl Tables {
    pub fn new(len: usize, base: usize) -> Self {
        let next = if base == 0 && len > 0 {
            None
        } else {
            Some(vec![0; len])
        };
        Tables { base, next }
    }
}

impl Iterator for Tables {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut pos = succ.len();
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            succ[pos] += 1;
            if succ[pos] < self.base {
                self.next = Some(succ);
                break;
            }
            succ[pos] = 0;
        }
        Some(current)
    }
}
