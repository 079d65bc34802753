//! Exact binomials and the combination iterator shared across modules.

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// `C(n, k)` exactly; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(n, k)` for possibly negative arguments: zero outside `0 <= k <= n`.
pub fn binomial_i(n: i64, k: i64) -> BigUint {
    if n < 0 || k < 0 || k > n {
        BigUint::zero()
    } else {
        binomial(n as u64, k as u64)
    }
}

/// `C(n, k)` as `u128`, `None` on overflow.
pub fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc.checked_mul(n as u128 - i)? / (i + 1);
    }
    Some(acc)
}

/// Lexicographic `k`-subsets of `0..n`.
#[derive(Clone, Debug)]
pub struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            idx: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Compositions of `total` into `parts` positive integers, lexicographic.
#[derive(Clone, Debug)]
pub struct Compositions {
    cur: Vec<u32>,
    done: bool,
}

impl Compositions {
    pub fn new(total: u32, parts: usize) -> Self {
        if parts == 0 {
            return Compositions {
                cur: Vec::new(),
                done: total != 0,
            };
        }
        if (total as usize) < parts {
            return Compositions {
                cur: Vec::new(),
                done: true,
            };
        }
        let mut cur = vec![1; parts];
        cur[parts - 1] = total - (parts as u32 - 1);
        Compositions { cur, done: false }
    }
}

impl Iterator for Compositions {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let out = self.cur.clone();
        let p = self.cur.len();
        // find the rightmost position (not last) that can grow by taking
        // from the tail; then reset everything after it
        let mut advanced = false;
        if p >= 2 {
            let mut i = p - 1;
            while i > 0 {
                i -= 1;
                let tail: u32 = self.cur[i + 1..].iter().sum();
                let tail_len = (p - i - 1) as u32;
                if tail > tail_len {
                    self.cur[i] += 1;
                    let rest = tail - 1;
                    for j in i + 1..p - 1 {
                        self.cur[j] = 1;
                    }
                    self.cur[p - 1] = rest - (tail_len - 1);
                    advanced = true;
                    break;
                }
            }
        }
        if !advanced {
            self.done = true;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(16, 2), BigUint::from(120u32));
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(binomial(0, 0), BigUint::one());
        assert_eq!(binomial_i(-1, 0), BigUint::zero());
        assert_eq!(binomial_u128(60, 30), Some(118264581564861424));
        assert_eq!(binomial_u128(1000, 500), None);
    }

    #[test]
    fn combination_counts() {
        for n in 0..8 {
            for k in 0..=n + 1 {
                let c = Combinations::new(n, k).count() as u64;
                assert_eq!(BigUint::from(c), binomial(n as u64, k as u64), "{n} {k}");
            }
        }
    }

    #[test]
    fn composition_counts() {
        for total in 0..9u32 {
            for parts in 0..6usize {
                let all: Vec<_> = Compositions::new(total, parts).collect();
                assert!(all.iter().all(|c| c.iter().sum::<u32>() == total && c.iter().all(|&x| x >= 1)));
                let expected = if parts == 0 {
                    (total == 0) as u64
                } else if total == 0 {
                    0
                } else {
                    binomial_u128(total as u64 - 1, parts as u64 - 1).unwrap() as u64
                };
                assert_eq!(all.len() as u64, expected, "{total} {parts}");
            }
        }
    }
}
