//! Exact integer and rational helpers shared across the crate.

use num::{BigInt, BigRational, Integer, One, Signed, Zero};
use std::cmp::Ordering;

pub type Int = BigInt;
pub type Rat = BigRational;
pub type IVec = Vec<Int>;
pub type QVec = Vec<Rat>;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn ri(x: &Int) -> Rat {
    Rat::from_integer(x.clone())
}

pub fn ivec(v: &[i64]) -> IVec {
    v.iter().map(|&x| Int::from(x)).collect()
}

pub fn to_qvec(v: &[Int]) -> QVec {
    v.iter().map(ri).collect()
}

/// Converts a rational vector to integers when every entry is integral.
pub fn to_ivec(v: &[Rat]) -> Option<IVec> {
    v.iter()
        .map(|x| if x.is_integer() { Some(x.to_integer()) } else { None })
        .collect()
}

pub fn floor_q(x: &Rat) -> Int {
    x.floor().to_integer()
}

pub fn ceil_q(x: &Rat) -> Int {
    x.ceil().to_integer()
}

/// Largest integer t with t*t <= n. Caller guarantees n >= 0.
pub fn isqrt(n: &Int) -> Int {
    n.sqrt()
}

/// floor(sqrt(x)) for a non-negative rational.
pub fn floor_sqrt_q(x: &Rat) -> Int {
    isqrt(&floor_q(x))
}

/// Exact rational square root, if there is one.
pub fn sqrt_q(x: &Rat) -> Option<Rat> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer();
    let d = x.denom();
    let sn = isqrt(n);
    let sd = isqrt(d);
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(Rat::new(sn, sd))
    } else {
        None
    }
}

pub fn is_square(n: &Int) -> bool {
    if n.is_negative() {
        return false;
    }
    let s = isqrt(n);
    &(&s * &s) == n
}

pub fn lcm_denominators(v: &[Rat]) -> Int {
    v.iter().fold(Int::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn gcd_all(v: &[Int]) -> Int {
    v.iter().fold(Int::zero(), |acc, x| acc.gcd(x))
}

/// Divides out the gcd of the coordinates. `None` for the zero vector.
pub fn primitive(v: &[Int]) -> Option<IVec> {
    let g = gcd_all(v);
    if g.is_zero() {
        return None;
    }
    Some(v.iter().map(|x| x / &g).collect())
}

/// Scales a rational vector to the primitive integer vector on the same ray.
pub fn primitive_q(v: &[Rat]) -> Option<IVec> {
    let d = lcm_denominators(v);
    let iv: IVec = v.iter().map(|x| (x * ri(&d)).to_integer()).collect();
    primitive(&iv)
}

pub fn is_zero_vec<T: Zero>(v: &[T]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn add_i(a: &[Int], b: &[Int]) -> IVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_i(a: &[Int], b: &[Int]) -> IVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_i(c: &Int, a: &[Int]) -> IVec {
    a.iter().map(|x| c * x).collect()
}

pub fn neg_i(a: &[Int]) -> IVec {
    a.iter().map(|x| -x).collect()
}

pub fn add_q(a: &[Rat], b: &[Rat]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_q(a: &[Rat], b: &[Rat]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_q(c: &Rat, a: &[Rat]) -> QVec {
    a.iter().map(|x| c * x).collect()
}

/// Positive divisors of a positive integer, ascending.
pub fn divisors(n: &Int) -> Vec<Int> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = Int::one();
    while &(&d * &d) <= n {
        if (n % &d).is_zero() {
            let q = n / &d;
            if q != d {
                large.push(q);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Compares a/sqrt(b) with c/sqrt(d) for a, c >= 0 and b, d > 0.
pub fn cmp_over_sqrt(a: &Rat, b: &Rat, c: &Rat, d: &Rat) -> Ordering {
    (a * a * d).cmp(&(c * c * b))
}

/// Extended gcd: returns (g, x, y) with a*x + b*y = g >= 0.
pub fn ext_gcd(a: &Int, b: &Int) -> (Int, Int, Int) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

pub fn abs_i(x: &Int) -> Int {
    x.abs()
}
