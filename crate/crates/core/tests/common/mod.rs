//! Oracles shared by the integration tests. Nothing here calls the code
//! under test for the quantity being checked.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use steklov_lab::precision::Fixed;
use steklov_lab::volumes::VolumePolynomial;

/// Working precision of the hexagon oracle, far beyond f64 so that the
/// cancellation in a naive Gram construction is harmless.
const BITS: u32 = 200;

fn hp(x: f64) -> Fixed {
    Fixed::from_ratio(&BigRational::from_float(x).expect("finite"), BITS)
}

fn cosh(x: &Fixed) -> Fixed {
    x.exp().add(&x.neg().exp()).div_int(2)
}

fn sinh(x: &Fixed) -> Fixed {
    x.exp().sub(&x.neg().exp()).div_int(2)
}

fn sqrt(x: &Fixed) -> Fixed {
    x.ln().div_int(2).exp()
}

fn abs(x: Fixed) -> Fixed {
    if x.is_negative() { x.neg() } else { x }
}

fn acosh(x: &Fixed) -> Fixed {
    let one = Fixed::from_int(1, BITS);
    x.add(&sqrt(&x.mul(x).sub(&one))).ln()
}

type V = [Fixed; 3];

fn mdot(u: &V, v: &V) -> Fixed {
    u[0].mul(&v[0]).neg().add(&u[1].mul(&v[1])).add(&u[2].mul(&v[2]))
}

/// Normal of the line through the common perpendicular of the lines with
/// normals `u` and `v`: `J (u x v)` is Minkowski-orthogonal to both.
fn perp(u: &V, v: &V) -> V {
    let c = [
        u[1].mul(&v[2]).sub(&u[2].mul(&v[1])),
        u[2].mul(&v[0]).sub(&u[0].mul(&v[2])),
        u[0].mul(&v[1]).sub(&u[1].mul(&v[0])),
    ];
    let w = [c[0].neg(), c[1].clone(), c[2].clone()];
    let n = sqrt(&mdot(&w, &w));
    [w[0].div(&n), w[1].div(&n), w[2].div(&n)]
}

/// Distance between ultraparallel lines.
fn line_distance(u: &V, v: &V) -> f64 {
    acosh(&abs(mdot(u, v))).to_f64()
}

/// A right-angled hexagon with half-cuffs `l_k / 2`, realized by line
/// normals in the hyperboloid model.
pub struct OracleHexagon {
    /// `seams[k]` joins cuff `k` to cuff `k + 1`.
    pub seams: [f64; 3],
    /// `widths[k]`: distance from cuff `k` to the opposite seam, i.e. the
    /// half-collar width of cuff `k` in the pants.
    pub widths: [f64; 3],
}

/// Seam lines `s_k` with `<s_{k-1}, s_k> = -cosh a_k` (they are the ends of
/// half-cuff `k`); cuff lines are the common perpendiculars.
pub fn hexagon_oracle(l: [f64; 3]) -> OracleHexagon {
    let a: Vec<Fixed> = l.iter().map(|&x| hp(x).div_int(2)).collect();
    let zero = Fixed::from_int(0, BITS);
    let one = Fixed::from_int(1, BITS);
    let s0: V = [zero.clone(), one.clone(), zero.clone()];
    let s2: V = [sinh(&a[0]), cosh(&a[0]).neg(), zero.clone()];
    let y = cosh(&a[1]).neg();
    let x = cosh(&a[2]).add(&cosh(&a[0]).mul(&cosh(&a[1]))).div(&sinh(&a[0]));
    let z = sqrt(&one.add(&x.mul(&x)).sub(&y.mul(&y)));
    let s1: V = [x, y, z];
    let s = [s0, s1, s2];
    let c: Vec<V> = (0..3).map(|k| perp(&s[(k + 2) % 3], &s[k])).collect();
    OracleHexagon {
        seams: [0, 1, 2].map(|k| line_distance(&c[k], &c[(k + 1) % 3])),
        widths: [0, 1, 2].map(|k| line_distance(&c[k], &s[(k + 1) % 3])),
    }
}

/// Every coefficient of the polynomial, keyed by the full (unsorted)
/// multi-degree.
pub fn full_terms(p: &VolumePolynomial) -> BTreeMap<Vec<u8>, BigRational> {
    fn go(p: &VolumePolynomial, left: usize, cur: &mut Vec<u8>, out: &mut BTreeMap<Vec<u8>, BigRational>) {
        if cur.len() == p.n {
            let c = p.coefficient(cur);
            if !c.is_zero() {
                out.insert(cur.clone(), c);
            }
            return;
        }
        for d in 0..=left {
            cur.push(d as u8);
            go(p, left - d, cur, out);
            cur.pop();
        }
    }
    let mut out = BTreeMap::new();
    go(p, p.dimension(), &mut Vec::new(), &mut out);
    out
}

fn pow_neg4(j: u8) -> BigRational {
    let mut r = BigRational::one();
    for _ in 0..j {
        r *= BigRational::from_integer((-4).into());
    }
    r
}

/// `V_{g,n+1}(x, 2 pi i) = sum_k int_0^{x_k} x_k V_{g,n}(x) dx_k`, compared
/// coefficient by coefficient; `pi` powers are implied by homogeneity.
pub fn string_equation_holds(big: &VolumePolynomial, small: &VolumePolynomial) -> bool {
    assert_eq!((big.g, big.n), (small.g, small.n + 1));
    let mut lhs: BTreeMap<Vec<u8>, BigRational> = BTreeMap::new();
    for (d, c) in full_terms(big) {
        let (e, j) = (d[..small.n].to_vec(), d[small.n]);
        *lhs.entry(e).or_insert_with(BigRational::zero) += c * pow_neg4(j);
    }
    let mut rhs: BTreeMap<Vec<u8>, BigRational> = BTreeMap::new();
    for (f, c) in full_terms(small) {
        for k in 0..small.n {
            let mut e = f.clone();
            e[k] += 1;
            let w = BigRational::from_integer((2 * e[k] as i64).into());
            *rhs.entry(e).or_insert_with(BigRational::zero) += &c / w;
        }
    }
    lhs.retain(|_, v| !v.is_zero());
    rhs.retain(|_, v| !v.is_zero());
    lhs == rhs
}

/// `d/dx_{n+1} V_{g,n+1}(x, x_{n+1})` at `x_{n+1} = 2 pi i` equals
/// `2 pi i (2g - 2 + n) V_{g,n}(x)`.
pub fn dilaton_equation_holds(big: &VolumePolynomial, small: &VolumePolynomial) -> bool {
    assert_eq!((big.g, big.n), (small.g, small.n + 1));
    let mut lhs: BTreeMap<Vec<u8>, BigRational> = BTreeMap::new();
    for (d, c) in full_terms(big) {
        let (e, j) = (d[..small.n].to_vec(), d[small.n]);
        let w = BigRational::from_integer((2 * j as i64).into());
        *lhs.entry(e).or_insert_with(BigRational::zero) += c * w * pow_neg4(j);
    }
    let chi = BigRational::from_integer((-4 * (2 * small.g as i64 - 2 + small.n as i64)).into());
    let mut rhs: BTreeMap<Vec<u8>, BigRational> = BTreeMap::new();
    for (e, c) in full_terms(small) {
        rhs.insert(e, c * &chi);
    }
    lhs.retain(|_, v| !v.is_zero());
    rhs.retain(|_, v| !v.is_zero());
    lhs == rhs
}

/// `V(x)` by summing every monomial of the full expansion.
pub fn evaluate_expanded(p: &VolumePolynomial, x: &[f64]) -> f64 {
    use num_traits::ToPrimitive;
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    full_terms(p)
        .iter()
        .map(|(d, c)| {
            let pi_pow = p.dimension() - d.iter().map(|&v| v as usize).sum::<usize>();
            let mono: f64 = d.iter().zip(x).map(|(&k, &xi)| (xi * xi).powi(k as i32)).product();
            c.to_f64().unwrap() * pi2.powi(pi_pow as i32) * mono
        })
        .sum()
}
