//! Exact Weil–Petersson volume polynomials by topological recursion.
//!
//! `V_{g,n}(L)` is symmetric and homogeneous: the coefficient of
//! `prod L_i^{2 d_i}` is a rational times `pi^{2(D - |d|)}` with
//! `D = 3g - 3 + n`. Coefficients are stored once per multi-degree sorted in
//! decreasing order, as the rational factor alone; the power of `pi` is
//! implied and only materialises on evaluation or export.

pub mod checks;
pub mod text;

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{LabError, Result};
use crate::precision::Fixed;

pub const DEFAULT_BUDGET: usize = 12;

/// Multi-degree in the variables `L_i^2`, sorted in decreasing order.
pub type Degree = Vec<u8>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VolumePolynomial {
    pub g: usize,
    pub n: usize,
    terms: BTreeMap<Degree, BigRational>,
}

/// `3g - 3 + n`, the complex dimension of the moduli space.
pub fn dimension(g: usize, n: usize) -> Result<usize> {
    if 2 * g + n <= 2 {
        return Err(LabError::Domain(format!("(g, n) = ({g}, {n}) is not a hyperbolic type")));
    }
    Ok(3 * g + n - 3)
}

fn canonical(mut d: Vec<u8>) -> Degree {
    d.sort_unstable_by(|a, b| b.cmp(a));
    d
}

impl VolumePolynomial {
    pub fn dimension(&self) -> usize {
        3 * self.g + self.n - 3
    }

    /// Rational factor of the coefficient of `prod L_i^{2 d_i}`, any order.
    pub fn coefficient(&self, d: &[u8]) -> BigRational {
        assert_eq!(d.len(), self.n, "arity mismatch");
        self.terms.get(&canonical(d.to_vec())).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Power of `pi^2` accompanying the coefficient of degree `d`.
    pub fn pi_power(&self, d: &[u8]) -> usize {
        self.dimension() - d.iter().map(|&x| x as usize).sum::<usize>()
    }

    /// `(sorted degree, rational factor)` pairs.
    pub fn canonical_terms(&self) -> impl Iterator<Item = (&Degree, &BigRational)> {
        self.terms.iter()
    }

    pub fn from_canonical_terms(g: usize, n: usize, terms: BTreeMap<Degree, BigRational>) -> Result<Self> {
        let dim = dimension(g, n)?;
        for d in terms.keys() {
            if d.len() != n || canonical(d.clone()) != *d || d.iter().map(|&x| x as usize).sum::<usize>() > dim {
                return Err(LabError::Parse(format!("bad multi-degree {d:?} for ({g}, {n})")));
            }
        }
        Ok(VolumePolynomial { g, n, terms })
    }

    /// `V_{g,n}(0)` as a rational times `pi^{2D}`.
    pub fn constant_term(&self) -> BigRational {
        self.coefficient(&vec![0; self.n])
    }

    /// Degree in the `L_i^2` grading.
    pub fn degree(&self) -> usize {
        self.terms
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(d, _)| d.iter().map(|&x| x as usize).sum::<usize>())
            .max()
            .unwrap_or(0)
    }

    /// Every stored coefficient is positive; with symmetric storage this
    /// covers all monomials of degree at most `D`.
    pub fn all_positive(&self) -> bool {
        let expected = partitions(self.dimension(), self.n).len();
        self.terms.len() == expected && self.terms.values().all(|c| c > &BigRational::zero())
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        self.numeric().evaluate(x)
    }

    /// Floating-point copy of the coefficients, for repeated evaluation.
    pub fn numeric(&self) -> NumericPolynomial {
        let pi2 = std::f64::consts::PI * std::f64::consts::PI;
        let terms = self
            .terms
            .iter()
            .map(|(d, c)| (d.clone(), c.to_f64().unwrap_or(f64::NAN) * pi2.powi(self.pi_power(d) as i32)))
            .collect();
        NumericPolynomial::new(self.n, self.dimension(), terms)
    }

    /// Evaluation with `digits` significant digits; `x` given as exact
    /// decimals.
    pub fn evaluate_precise(&self, x: &[BigRational], digits: u32) -> Result<Fixed> {
        if x.len() != self.n {
            return Err(LabError::Domain(format!("expected {} arguments, got {}", self.n, x.len())));
        }
        let bits = Fixed::bits_for_digits(digits) + 32;
        let y: Vec<Fixed> = x.iter().map(|v| Fixed::from_ratio(&(v * v), bits)).collect();
        let pi = Fixed::pi(bits);
        let pi2 = pi.mul(&pi);
        let zero = Fixed::from_int(0, bits);
        let one = Fixed::from_int(1, bits);
        let mut sum = zero.clone();
        for (d, c) in &self.terms {
            let m = monomial_symmetric(d, &y, |a, b| a.mul(b), |v, k| v.powi(k), zero.clone(), one.clone());
            let c = Fixed::from_ratio(c, bits).mul(&pi2.powi(self.pi_power(d) as u32));
            sum = sum.add(&c.mul(&m));
        }
        Ok(sum.rescale(Fixed::bits_for_digits(digits)))
    }
}

/// Floating-point form of a volume polynomial. Evaluation expands
/// `prod_i (1 + sum_k t_k y_i^k)` over the variables, whose coefficient at
/// `prod t_k^{c_k}` is the monomial symmetric function of the partition with
/// `c_k` parts equal to `k`; one pass yields all of them at once.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericPolynomial {
    pub n: usize,
    /// Partitions with positive parts, decreasing, by increasing length.
    states: Vec<Degree>,
    /// `next[s][k - 1]`: the state reached by adding a part `k`.
    next: Vec<Vec<Option<usize>>>,
    coeffs: Vec<f64>,
}

impl NumericPolynomial {
    fn new(n: usize, dim: usize, terms: Vec<(Degree, f64)>) -> Self {
        let mut states: Vec<Degree> = partitions(dim, n)
            .into_iter()
            .map(|d| d.into_iter().filter(|&x| x > 0).collect())
            .collect();
        states.sort_by(|a: &Degree, b: &Degree| a.len().cmp(&b.len()).then(b.cmp(a)));
        states.dedup();
        let index: HashMap<Degree, usize> = states.iter().cloned().enumerate().map(|(i, d)| (d, i)).collect();
        let next = states
            .iter()
            .map(|s| {
                (1..=dim)
                    .map(|k| {
                        let mut t = s.clone();
                        t.push(k as u8);
                        index.get(&canonical(t)).copied()
                    })
                    .collect()
            })
            .collect();
        let mut coeffs = vec![0.0; states.len()];
        for (d, c) in terms {
            let key: Degree = d.into_iter().filter(|&x| x > 0).collect();
            coeffs[index[&key]] = c;
        }
        NumericPolynomial { n, states, next, coeffs }
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n {
            return Err(LabError::Domain(format!("expected {} arguments, got {}", self.n, x.len())));
        }
        let mut vals = vec![0.0; self.states.len()];
        vals[0] = 1.0;
        let mut powers = Vec::new();
        for v in x {
            let y = v * v;
            powers.clear();
            let mut p = 1.0;
            for _ in 0..self.next.first().map_or(0, |r| r.len()) {
                p *= y;
                powers.push(p);
            }
            // Longer partitions first, so sources still hold the previous
            // variable's values when read.
            for s in (0..self.states.len()).rev() {
                let v = vals[s];
                if v == 0.0 {
                    continue;
                }
                for (k, t) in self.next[s].iter().enumerate() {
                    if let Some(t) = *t {
                        vals[t] += v * powers[k];
                    }
                }
            }
        }
        Ok(vals.iter().zip(&self.coeffs).map(|(v, c)| v * c).sum())
    }
}

/// Monomial symmetric function `m_d(y)`: the sum of `prod y_i^{e_i}` over
/// the distinct rearrangements `e` of `d`. Dynamic programme over the
/// variables, keyed by how many copies of each distinct part are used.
fn monomial_symmetric<T: Clone + std::ops::Add<Output = T>>(
    d: &[u8],
    y: &[T],
    mul: impl Fn(&T, &T) -> T,
    pow: impl Fn(&T, u32) -> T,
    zero: T,
    one: T,
) -> T {
    let mut parts: Vec<(u8, usize)> = Vec::new();
    for &p in d.iter().filter(|&&p| p > 0) {
        match parts.last_mut() {
            Some((q, c)) if *q == p => *c += 1,
            _ => parts.push((p, 1)),
        }
    }
    let mut states: HashMap<Vec<usize>, T> = HashMap::new();
    states.insert(vec![0; parts.len()], one);
    for v in y {
        let mut next: HashMap<Vec<usize>, T> = HashMap::new();
        for (used, val) in &states {
            let e = next.entry(used.clone()).or_insert_with(|| zero.clone());
            *e = e.clone() + val.clone();
            for (i, &(p, c)) in parts.iter().enumerate() {
                if used[i] < c {
                    let mut u = used.clone();
                    u[i] += 1;
                    let t = mul(val, &pow(v, p as u32));
                    let e = next.entry(u).or_insert_with(|| zero.clone());
                    *e = e.clone() + t;
                }
            }
        }
        states = next;
    }
    let full: Vec<usize> = parts.iter().map(|&(_, c)| c).collect();
    states.remove(&full).unwrap_or(zero)
}

/// Partitions of every integer `<= total` into exactly `len` non-negative
/// parts, in decreasing order.
pub fn partitions(total: usize, len: usize) -> Vec<Degree> {
    fn go(rem: usize, max: usize, len: usize, cur: &mut Vec<u8>, out: &mut Vec<Degree>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for p in (0..=rem.min(max)).rev() {
            cur.push(p as u8);
            go(rem - p, p, len, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(total, total, len, &mut Vec::new(), &mut out);
    out
}

/// Rational parts of `zeta(2i) = z_i pi^{2i}`, with `zeta(0) = -1/2`.
fn zeta_even(max: usize) -> Vec<BigRational> {
    // Bernoulli numbers from sum_{j<=m} C(m+1, j) B_j = 0.
    let n = 2 * max + 1;
    let mut binom = vec![vec![BigInt::one()]];
    for m in 1..=n + 1 {
        let prev = &binom[m - 1];
        let mut row = vec![BigInt::one(); m + 1];
        for j in 1..m {
            row[j] = &prev[j - 1] + &prev[j];
        }
        binom.push(row);
    }
    let mut b: Vec<BigRational> = vec![BigRational::one()];
    for m in 1..=n {
        let mut s = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            s += BigRational::from_integer(binom[m + 1][j].clone()) * bj;
        }
        b.push(-s / BigRational::from_integer(BigInt::from(m + 1)));
    }
    let mut fact = BigInt::one();
    let mut z = vec![BigRational::new((-1).into(), 2.into())];
    for i in 1..=max {
        fact *= BigInt::from((2 * i - 1) * (2 * i));
        let sign = if i % 2 == 1 { 1 } else { -1 };
        let pow2 = BigInt::one() << (2 * i - 1);
        z.push(&b[2 * i] * BigRational::new(BigInt::from(sign) * pow2, fact.clone()));
    }
    z
}

/// Kernel constants of the recursion.
struct Kernel {
    /// `f[k][i]`: rational part of the coefficient of `t^{2k+2-2i}` in
    /// `int_0^inf x^{2k+1} H(x, t) dx`, which carries `pi^{2i}`.
    f: Vec<Vec<BigRational>>,
    fact: Vec<BigInt>,
}

impl Kernel {
    fn new(max_k: usize) -> Self {
        let z = zeta_even(max_k + 2);
        let mut fact = vec![BigInt::one()];
        for i in 1..=2 * max_k + 8 {
            let v = &fact[i - 1] * BigInt::from(i);
            fact.push(v);
        }
        let f = (0..=max_k + 1)
            .map(|k| {
                (0..=k + 1)
                    .map(|i| {
                        let c = BigInt::from((1i64 << (2 * i + 1)) - 4);
                        &z[i] * BigRational::new(&fact[2 * k + 1] * c, fact[2 * k + 2 - 2 * i].clone())
                    })
                    .collect()
            })
            .collect();
        Kernel { f, fact }
    }

    fn binom(&self, n: usize, k: usize) -> BigRational {
        BigRational::new(self.fact[n].clone(), &self.fact[k] * &self.fact[n - k])
    }

    /// Coefficient of `L^{2 d}` in
    /// `1/2 int int x^{2a+1} y^{2b+1} H(x + y, L) dx dy`.
    fn pair(&self, a: usize, b: usize, d: usize) -> BigRational {
        let k = a + b + 1;
        if d > k + 1 {
            return BigRational::zero();
        }
        let beta = BigRational::new(&self.fact[2 * a + 1] * &self.fact[2 * b + 1], self.fact[2 * a + 2 * b + 3].clone());
        beta * &self.f[k][k + 1 - d] / BigRational::from_integer(2.into())
    }
}

/// Table of volume polynomials for every `(g, n)` with `n >= 1` and
/// `3g - 3 + n <= budget`, plus the closed volumes `V_{g,0}`.
#[derive(Debug, Clone)]
pub struct VolumeTable {
    pub budget: usize,
    polys: HashMap<(usize, usize), VolumePolynomial>,
    closed: HashMap<usize, BigRational>,
}

/// Which boundary the recursion peels off, as a position in the sorted
/// multi-degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Peel {
    Largest,
    Smallest,
}

impl VolumeTable {
    pub fn build(budget: usize) -> Self {
        Self::build_with(budget, Peel::Largest)
    }

    pub fn build_with(budget: usize, peel: Peel) -> Self {
        let kernel = Kernel::new(budget + 1);
        let mut polys: HashMap<(usize, usize), VolumePolynomial> = HashMap::new();
        for dim in 0..=budget {
            let cells: Vec<(usize, usize)> = (0..=(dim + 3) / 3)
                .filter_map(|g| {
                    let n = (dim + 3).checked_sub(3 * g)?;
                    (n >= 1 && 2 * g + n > 2).then_some((g, n))
                })
                .collect();
            let built: Vec<VolumePolynomial> =
                cells.par_iter().map(|&(g, n)| recurse(g, n, peel, &polys, &kernel)).collect();
            for p in built {
                polys.insert((p.g, p.n), p);
            }
        }
        let closed = (2..)
            .take_while(|g| 3 * g - 3 <= budget && polys.contains_key(&(*g, 1)))
            .map(|g| (g, closed_from_one_boundary(&polys[&(g, 1)])))
            .collect();
        VolumeTable { budget, polys, closed }
    }

    pub fn get(&self, g: usize, n: usize) -> Result<&VolumePolynomial> {
        let dim = dimension(g, n)?;
        if dim > self.budget {
            return Err(LabError::Budget { needed: dim, budget: self.budget });
        }
        if n == 0 {
            return Err(LabError::Domain("closed surfaces have a volume, not a polynomial; use closed_volume".into()));
        }
        Ok(&self.polys[&(g, n)])
    }

    /// `V_{g,0}` as a rational times `pi^{2(3g-3)}`.
    pub fn closed_volume(&self, g: usize) -> Result<&BigRational> {
        let dim = dimension(g, 0)?;
        self.closed.get(&g).ok_or(LabError::Budget { needed: dim, budget: self.budget })
    }

    /// `V_{g,n}(0)` in floating point, `n = 0` allowed.
    pub fn volume(&self, g: usize, n: usize) -> Result<f64> {
        let dim = dimension(g, n)?;
        let r = if n == 0 { self.closed_volume(g)?.clone() } else { self.get(g, n)?.constant_term() };
        Ok(r.to_f64().unwrap_or(f64::NAN) * std::f64::consts::PI.powi(2 * dim as i32))
    }

    /// `V_{g,n}(0)` exactly: `(rational, power of pi^2)`.
    pub fn volume_exact(&self, g: usize, n: usize) -> Result<(BigRational, usize)> {
        let dim = dimension(g, n)?;
        let r = if n == 0 { self.closed_volume(g)?.clone() } else { self.get(g, n)?.constant_term() };
        Ok((r, dim))
    }

    pub fn cells(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<_> = self.polys.keys().copied().collect();
        v.sort();
        v
    }

    pub fn closed_genera(&self) -> Vec<usize> {
        let mut v: Vec<_> = self.closed.keys().copied().collect();
        v.sort();
        v
    }

    pub fn from_parts(budget: usize, list: Vec<VolumePolynomial>) -> Self {
        let polys: HashMap<_, _> = list.into_iter().map(|p| ((p.g, p.n), p)).collect();
        let closed = polys
            .iter()
            .filter(|((g, n), _)| *n == 1 && *g >= 2)
            .map(|((g, _), p)| (*g, closed_from_one_boundary(p)))
            .collect();
        VolumeTable { budget, polys, closed }
    }
}

/// `V_{g,0}` from `d/dL V_{g,1}(L)` at `L = 2 pi i`, which equals
/// `2 pi i (2g - 2) V_{g,0}`.
fn closed_from_one_boundary(p: &VolumePolynomial) -> BigRational {
    let mut s = BigRational::zero();
    for (d, c) in p.canonical_terms() {
        let k = d[0] as usize;
        if k == 0 {
            continue;
        }
        let pow = BigInt::from(-4).pow(k as u32 - 1);
        s += c * BigRational::from_integer(pow * BigInt::from(2 * k));
    }
    s / BigRational::from_integer(BigInt::from(2 * p.g - 2))
}

/// `V_{1,1}(L) = (L^2 + 4 pi^2) / 48`. The scale is the one compatible
/// with the recursion's own dilaton relation between `V_{1,2}` and
/// `V_{1,1}`.
fn one_one() -> VolumePolynomial {
    let mut terms = BTreeMap::new();
    terms.insert(vec![1], BigRational::new(1.into(), 48.into()));
    terms.insert(vec![0], BigRational::new(1.into(), 12.into()));
    VolumePolynomial { g: 1, n: 1, terms }
}

fn recurse(
    g: usize,
    n: usize,
    peel: Peel,
    polys: &HashMap<(usize, usize), VolumePolynomial>,
    kernel: &Kernel,
) -> VolumePolynomial {
    if (g, n) == (0, 3) {
        let mut terms = BTreeMap::new();
        terms.insert(vec![0, 0, 0], BigRational::one());
        return VolumePolynomial { g, n, terms };
    }
    if (g, n) == (1, 1) {
        return one_one();
    }
    let dim = 3 * g + n - 3;
    let terms = partitions(dim, n)
        .into_iter()
        .map(|d| {
            let p = match peel {
                Peel::Largest => 0,
                Peel::Smallest => n - 1,
            };
            let c = coefficient(g, &d, p, polys, kernel);
            (d, c)
        })
        .collect();
    VolumePolynomial { g, n, terms }
}

fn lookup(polys: &HashMap<(usize, usize), VolumePolynomial>, g: usize, d: Vec<u8>) -> BigRational {
    let n = d.len();
    if 2 * g + n <= 2 {
        return BigRational::zero();
    }
    match polys.get(&(g, n)) {
        Some(p) => {
            let total: usize = d.iter().map(|&x| x as usize).sum();
            if total > p.dimension() {
                BigRational::zero()
            } else {
                p.terms.get(&canonical(d)).cloned().unwrap_or_else(BigRational::zero)
            }
        }
        None => BigRational::zero(),
    }
}

/// Coefficient of `prod L_i^{2 d_i}` in `V_{g,n}`, peeling boundary `p`.
fn coefficient(
    g: usize,
    d: &[u8],
    p: usize,
    polys: &HashMap<(usize, usize), VolumePolynomial>,
    kernel: &Kernel,
) -> BigRational {
    let n = d.len();
    let dp = d[p] as usize;
    let rest: Vec<u8> = d.iter().enumerate().filter(|&(i, _)| i != p).map(|(_, &x)| x).collect();
    let mut acc = BigRational::zero();

    // Cutting off a pants bounded by L_p, L_j and an interior geodesic.
    if n >= 2 {
        let dim_lower = 3 * g + (n - 1) - 3;
        for j in 0..rest.len() {
            let dj = rest[j] as usize;
            let others: Vec<u8> = rest.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &x)| x).collect();
            let kmin = (dp + dj).saturating_sub(1);
            for k in kmin..=dim_lower {
                let i = k + 1 - dp - dj;
                let mut deg = vec![k as u8];
                deg.extend_from_slice(&others);
                let c = lookup(polys, g, deg);
                if c.is_zero() {
                    continue;
                }
                acc += kernel.binom(2 * dp + 2 * dj, 2 * dj) * &kernel.f[k][i] * c;
            }
        }
    }

    // Cutting off a pants bounded by L_p and two interior geodesics that
    // leave the surface connected.
    if g >= 1 {
        let lower = 3 * (g - 1) + (n + 1) - 3;
        for a in 0..=lower {
            for b in 0..=lower - a {
                let mut deg = vec![a as u8, b as u8];
                deg.extend_from_slice(&rest);
                let c = lookup(polys, g - 1, deg);
                if c.is_zero() {
                    continue;
                }
                acc += kernel.pair(a, b, dp) * c;
            }
        }
    }

    // ... or that disconnect it.
    let mut groups: Vec<(u8, usize)> = Vec::new();
    for &x in &rest {
        match groups.iter_mut().find(|(v, _)| *v == x) {
            Some((_, c)) => *c += 1,
            None => groups.push((x, 1)),
        }
    }
    let mut choice = vec![0usize; groups.len()];
    loop {
        let mut mult = BigRational::one();
        let (mut left, mut right) = (Vec::new(), Vec::new());
        for (gi, &(v, c)) in groups.iter().enumerate() {
            mult *= kernel.binom(c, choice[gi]);
            left.extend(std::iter::repeat(v).take(choice[gi]));
            right.extend(std::iter::repeat(v).take(c - choice[gi]));
        }
        for g1 in 0..=g {
            let g2 = g - g1;
            let (n1, n2) = (left.len() + 1, right.len() + 1);
            if 2 * g1 + n1 <= 2 || 2 * g2 + n2 <= 2 {
                continue;
            }
            let (d1, d2) = (3 * g1 + n1 - 3, 3 * g2 + n2 - 3);
            for a in 0..=d1 {
                let mut da = vec![a as u8];
                da.extend_from_slice(&left);
                let ca = lookup(polys, g1, da);
                if ca.is_zero() {
                    continue;
                }
                for b in 0..=d2 {
                    let mut db = vec![b as u8];
                    db.extend_from_slice(&right);
                    let cb = lookup(polys, g2, db);
                    if cb.is_zero() {
                        continue;
                    }
                    acc += kernel.pair(a, b, dp) * &ca * cb * &mult;
                }
            }
        }
        // Next sub-multiset.
        let mut i = 0;
        loop {
            if i == groups.len() {
                return acc / BigRational::from_integer(BigInt::from(2 * dp + 1));
            }
            if choice[i] < groups[i].1 {
                choice[i] += 1;
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}
