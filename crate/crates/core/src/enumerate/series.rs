//! Exact truncated power series in the markers `x, y, z, p, s`.
//!
//! `x` marks closers of the first sub-block of an OCOC interval, `y` openers
//! of its second sub-block, `z` connecting arcs, `p` fixed points and `s`
//! size. Only the `s`-degree is truncated; the other exponents are bounded
//! implicitly by it.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Exponents of `x, y, z, p` (the `s` exponent is the bucket index).
pub type Markers = [u32; 4];

pub const X: usize = 0;
pub const Y: usize = 1;
pub const Z: usize = 2;
pub const P: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    /// `by_degree[e]` holds the terms of `s`-degree `e`.
    by_degree: Vec<BTreeMap<Markers, BigInt>>,
}

impl TruncatedSeries {
    pub fn zero(bound: usize) -> Self {
        TruncatedSeries {
            by_degree: vec![BTreeMap::new(); bound + 1],
        }
    }

    pub fn one(bound: usize) -> Self {
        let mut s = Self::zero(bound);
        s.add_term([0; 4], 0, BigInt::one());
        s
    }

    /// A single term `coeff * x^a y^b z^c p^d s^e`; dropped when `e` exceeds
    /// the bound.
    pub fn monomial(bound: usize, markers: Markers, s: usize, coeff: BigInt) -> Self {
        let mut out = Self::zero(bound);
        out.add_term(markers, s, coeff);
        out
    }

    pub fn bound(&self) -> usize {
        self.by_degree.len() - 1
    }

    pub fn add_term(&mut self, markers: Markers, s: usize, coeff: BigInt) {
        if s > self.bound() || coeff.is_zero() {
            return;
        }
        let slot = self.by_degree[s]
            .entry(markers)
            .or_insert_with(BigInt::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.by_degree[s].remove(&markers);
        }
    }

    pub fn coefficient(&self, markers: Markers, s: usize) -> BigInt {
        self.by_degree
            .get(s)
            .and_then(|m| m.get(&markers))
            .cloned()
            .unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.by_degree.iter().all(BTreeMap::is_empty)
    }

    /// Terms of one `s`-degree.
    pub fn degree(&self, s: usize) -> &BTreeMap<Markers, BigInt> {
        &self.by_degree[s]
    }

    /// Lowest `s`-degree carrying a nonzero term.
    pub fn valuation(&self) -> Option<usize> {
        self.by_degree.iter().position(|m| !m.is_empty())
    }

    /// Coefficients of `s^0..=s^bound` with `x = y = z = p = 1`.
    pub fn specialize(&self) -> Vec<BigInt> {
        self.by_degree
            .iter()
            .map(|m| m.values().fold(BigInt::zero(), |acc, c| acc + c))
            .collect()
    }

    /// Multiplies by `s^k`, dropping what falls past the bound.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut out = Self::zero(self.bound());
        for (e, m) in self.by_degree.iter().enumerate() {
            if e + k <= self.bound() {
                out.by_degree[e + k] = m.clone();
            }
        }
        out
    }

    /// Divides by `s^k`. Panics if a term of degree below `k` is present.
    /// The result keeps the original bound; its top `k` degrees are unknown
    /// and therefore cut, giving bound `bound - k`.
    pub fn shift_down(&self, k: usize) -> Self {
        assert!(
            self.by_degree[..k.min(self.by_degree.len())]
                .iter()
                .all(BTreeMap::is_empty),
            "series has terms of s-degree below {k}"
        );
        TruncatedSeries {
            by_degree: self.by_degree[k..].to_vec(),
        }
    }

    /// Same terms with a different bound.
    pub fn with_bound(&self, bound: usize) -> Self {
        let mut by_degree = self.by_degree.clone();
        by_degree.resize(bound + 1, BTreeMap::new());
        TruncatedSeries { by_degree }
    }

    /// `1 / (1 - self)`. Requires a zero constant term.
    pub fn geometric(&self) -> Self {
        assert!(
            self.by_degree[0].is_empty(),
            "geometric series needs a zero constant term"
        );
        let bound = self.bound();
        let mut g = Self::one(bound);
        for e in 1..=bound {
            let mut acc: BTreeMap<Markers, BigInt> = BTreeMap::new();
            for i in 1..=e {
                mul_into(&mut acc, &self.by_degree[i], &g.by_degree[e - i]);
            }
            acc.retain(|_, c| !c.is_zero());
            g.by_degree[e] = acc;
        }
        g
    }
}

fn mul_into(
    acc: &mut BTreeMap<Markers, BigInt>,
    a: &BTreeMap<Markers, BigInt>,
    b: &BTreeMap<Markers, BigInt>,
) {
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m = [ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2], ma[3] + mb[3]];
            *acc.entry(m).or_insert_with(BigInt::zero) += ca * cb;
        }
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let mut out = self.with_bound(self.bound().min(rhs.bound()));
        for (e, m) in rhs.by_degree.iter().enumerate().take(out.bound() + 1) {
            for (k, c) in m {
                out.add_term(*k, e, c.clone());
            }
        }
        out
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let mut out = self.with_bound(self.bound().min(rhs.bound()));
        for (e, m) in rhs.by_degree.iter().enumerate().take(out.bound() + 1) {
            for (k, c) in m {
                out.add_term(*k, e, -c.clone());
            }
        }
        out
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let bound = self.bound().min(rhs.bound());
        let mut out = TruncatedSeries::zero(bound);
        for e in 0..=bound {
            let mut acc = BTreeMap::new();
            for i in 0..=e {
                mul_into(&mut acc, &self.by_degree[i], &rhs.by_degree[e - i]);
            }
            acc.retain(|_, c: &mut BigInt| !c.is_zero());
            out.by_degree[e] = acc;
        }
        out
    }
}

pub(crate) fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

pub(crate) fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Ways to close `k` of `n + k` openers in a closer block of size `k`.
fn close_first(n: usize, k: usize) -> BigInt {
    binomial(n + k, k) * factorial(k)
}

/// The same with one opener/closer pair supplied by an inflated
/// transitory, which must not close onto itself.
fn close_first_transitory(n: usize, k: usize) -> BigInt {
    binomial(n + k, k) * factorial(k) * k + binomial(n + k, k + 1) * factorial(k + 1)
}

fn markers(k: usize, j: usize, n: usize, l: usize) -> Markers {
    [k as u32, j as u32, n as u32, l as u32]
}

/// Type OC intervals of partial matchings, fixed points strictly inside.
pub fn series_o(bound: usize) -> TruncatedSeries {
    let mut out = TruncatedSeries::zero(bound);
    for n in 1..=bound / 2 {
        for l in 0..=bound - 2 * n {
            let c = factorial(n) * binomial(2 * n - 2 + l, l);
            out.add_term(markers(0, 0, n, l), 2 * n + l, c);
        }
    }
    out
}

/// Calls `f(n, k, j, size)` for every OCOC shape with `n >= 1`, `k >= k0`,
/// `j >= j0` whose arc vertices plus `extra` stay within `bound`.
fn each_ococ(
    bound: usize,
    k0: usize,
    j0: usize,
    extra: usize,
    mut f: impl FnMut(usize, usize, usize, usize),
) {
    for n in 1..=bound / 2 {
        for k in k0..=bound / 2 {
            for j in j0..=bound / 2 {
                let size = 2 * (n + k + j);
                if size + extra > bound {
                    break;
                }
                f(n, k, j, size);
            }
        }
    }
}

/// Type OCOC intervals of partial matchings.
pub fn series_t(bound: usize) -> TruncatedSeries {
    let mut out = TruncatedSeries::zero(bound);
    each_ococ(bound, 1, 1, 0, |n, k, j, size| {
        let base = factorial(n) * close_first(n, k) * close_first(n, j);
        for l in 0..=bound - size {
            let c = &base * binomial(2 * (n + k + j - 1) + l, l);
            out.add_term(markers(k, j, n, l), size + l, c);
        }
    });
    out
}

/// Type OC intervals of enhanced partial matchings: an optional loop at the
/// switch.
pub fn series_o_e(bound: usize) -> TruncatedSeries {
    let mut out = TruncatedSeries::zero(bound);
    for n in 1..=bound / 2 {
        out.add_term(markers(0, 0, n, 0), 2 * n, factorial(n));
        out.add_term(markers(0, 0, n, 1), 2 * n + 1, factorial(n));
    }
    out
}

/// Type OCOC intervals of enhanced partial matchings: zero, one or two
/// loops at the opener-to-closer switches.
pub fn series_t_e(bound: usize) -> TruncatedSeries {
    let mut out = TruncatedSeries::zero(bound);
    let term = |n, k, j| factorial(n) * close_first(n, k) * close_first(n, j);
    each_ococ(bound, 1, 1, 0, |n, k, j, size| {
        out.add_term(markers(k, j, n, 0), size, term(n, k, j));
    });
    each_ococ(bound, 0, 1, 1, |n, k, j, size| {
        out.add_term(markers(k, j, n, 1), size + 1, term(n, k, j) * 2);
    });
    each_ococ(bound, 0, 0, 2, |n, k, j, size| {
        out.add_term(markers(k, j, n, 2), size + 2, term(n, k, j));
    });
    out
}

/// Type OC intervals of set partitions (transitories split apart, so the
/// same as for matchings).
pub fn series_o_s(bound: usize) -> TruncatedSeries {
    series_o(bound)
}

/// Type OCOC intervals of set partitions, where the middle closer-to-opener
/// switch may be a single transitory vertex.
pub fn series_t_s(bound: usize) -> TruncatedSeries {
    let mut out = TruncatedSeries::zero(bound);
    each_ococ(bound + 1, 1, 1, 0, |n, k, j, size| {
        let base = factorial(n) * close_first(n, k) * close_first(n, j);
        let gaps = 2 * (n + k + j - 1);
        for l in 0..=bound + 1 - size {
            let m = markers(k, j, n, l);
            if size + l <= bound {
                out.add_term(m, size + l, &base * binomial(gaps + l, l));
            }
            out.add_term(m, size + l - 1, &base * binomial(gaps + l - 1, l));
        }
    });
    out
}

/// Indecomposable set partitions: a fixed point, or OC/OCOC intervals
/// chained through shared transitory vertices.
pub fn series_n_s(bound: usize) -> TruncatedSeries {
    let blocks = &series_o_s(bound) + &series_t_s(bound);
    let mut out = blocks
        .shift_down(1)
        .geometric()
        .with_bound(bound)
        .shift_up(1);
    // drop the m = 0 term of the geometric sum, which is s * 1
    out.add_term([0; 4], 1, -BigInt::one());
    out.add_term(markers(0, 0, 0, 1), 1, BigInt::one());
    out
}

/// Type OC intervals of enhanced set partitions: optional loop or
/// transitory at the switch. Fixed points carry no `p` marker here.
pub fn series_o_se(bound: usize) -> TruncatedSeries {
    let mut out = TruncatedSeries::zero(bound);
    for n in 1..=bound / 2 {
        let f = factorial(n);
        out.add_term(markers(0, 0, n, 0), 2 * n, f.clone());
        out.add_term(markers(0, 0, n, 0), 2 * n + 1, &f + &f * n);
    }
    out
}

/// Type OCOC intervals of enhanced set partitions: each of the two
/// opener-to-closer switches holds nothing, a loop, or a transitory.
pub fn series_t_se(bound: usize) -> TruncatedSeries {
    let mut out = TruncatedSeries::zero(bound);
    let plain = |n, k| close_first(n, k);
    let trans = |n, k| close_first_transitory(n, k);
    let mut sum = |k0,
                   j0,
                   extra,
                   factor: u32,
                   first: &dyn Fn(usize, usize) -> BigInt,
                   second: &dyn Fn(usize, usize) -> BigInt| {
        each_ococ(bound, k0, j0, extra, |n, k, j, size| {
            let c = factorial(n) * first(n, k) * second(n, j) * factor;
            out.add_term(markers(k, j, n, 0), size + extra, c);
        });
    };
    sum(1, 1, 0, 1, &plain, &plain);
    sum(0, 1, 1, 2, &plain, &plain);
    sum(0, 0, 2, 1, &plain, &plain);
    sum(0, 1, 1, 2, &trans, &plain);
    sum(0, 0, 2, 2, &trans, &plain);
    sum(0, 0, 2, 1, &trans, &trans);
    out
}
