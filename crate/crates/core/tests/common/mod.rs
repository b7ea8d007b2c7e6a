//! Brute-force oracles for short vectors in Lorentzian planes, shared by
//! the plane tests and the acceptance run.
#![allow(dead_code)]

use chamberwalk::arith::{Int, IVec};
use chamberwalk::shortvec2d::{mat_apply, Mat2, PlaneFrame};
use num::{Integer, One, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;

/// Least x, y > 0 with x² − D y² = 1 via the continued fraction of √D.
pub fn pell(d: i64) -> (Int, Int) {
    let d_big = Int::from(d);
    let a0 = Int::from((d as f64).sqrt() as i64);
    let a0 = {
        let mut a = a0;
        while &a * &a > d_big {
            a -= 1;
        }
        while (&a + 1) * (&a + 1) <= d_big {
            a += 1;
        }
        a
    };
    let (mut m, mut q, mut a) = (Int::zero(), Int::one(), a0.clone());
    let (mut p_prev, mut p) = (Int::one(), a0.clone());
    let (mut q_prev, mut qq) = (Int::zero(), Int::one());
    loop {
        if &p * &p - &d_big * &qq * &qq == Int::one() {
            return (p, qq);
        }
        m = &a * &q - &m;
        q = (&d_big - &m * &m) / &q;
        a = (&a0 + &m) / &q;
        let np = &a * &p + &p_prev;
        let nq = &a * &qq + &q_prev;
        p_prev = std::mem::replace(&mut p, np);
        q_prev = std::mem::replace(&mut qq, nq);
    }
}

pub struct Case {
    pub gram: [[i64; 2]; 2],
    pub frame: PlaneFrame,
    pub m: i64,
    /// An automorph mapping the sector into itself, moving vectors forward.
    pub forward: Mat2,
}

pub fn det(a: &[i128], b: &[i128]) -> i128 {
    a[0] * b[1] - a[1] * b[0]
}

pub fn small(v: &[Int]) -> Option<[i128; 2]> {
    let bound = 1i128 << 40;
    let (x, y) = (v[0].to_i128()?, v[1].to_i128()?);
    (x.abs() < bound && y.abs() < bound).then_some([x, y])
}

impl Case {
    pub fn norm(&self, v: &[i128; 2]) -> i128 {
        let g = self.gram;
        g[0][0] as i128 * v[0] * v[0] + 2 * g[0][1] as i128 * v[0] * v[1] + g[1][1] as i128 * v[1] * v[1]
    }

    pub fn sigma(&self) -> i128 {
        let k = small(self.frame.k()).unwrap();
        let b = small(self.frame.bottom()).unwrap();
        det(&b, &k).signum()
    }

    /// Primitive vectors v with norm in [0, M], strictly after `from` and at
    /// or before `to` in the sector, sorted. `None` when the box is too big.
    pub fn brute(&self, from: &[i128; 2], to: &[i128; 2], m: i128, limit: i128) -> Option<Vec<[i128; 2]>> {
        let s = self.sigma();
        let dft = s * det(from, to);
        assert!(dft > 0);
        // v = α·from + β·to with α, β ≥ 0 and α, β ≤ sqrt(M / min norm).
        let nmin = self.norm(from).min(self.norm(to));
        assert!(nmin > 0);
        let mut c = 0i128;
        while c * c * nmin <= m {
            c += 1;
        }
        let bx = c * (from[0].abs() + to[0].abs());
        let by = c * (from[1].abs() + to[1].abs());
        if by > limit || bx > limit * 50 {
            return None;
        }
        let g = self.gram;
        let (a, b, cc) = (g[0][0] as i128, g[0][1] as i128, g[1][1] as i128);
        let mut out = Vec::new();
        let mut work = 0i128;
        for y in -by..=by {
            // Linear cone constraints s·det[from, v] > 0, s·det[v, to] ≥ 0 give an x interval.
            let mut lo = -bx;
            let mut hi = bx;
            // s·(from0·y − from1·x) > 0
            constrain(&mut lo, &mut hi, -s * from[1], s * from[0] * y, true);
            // s·(x·to1 − y·to0) ≥ 0
            constrain(&mut lo, &mut hi, s * to[1], -s * to[0] * y, false);
            if lo > hi {
                continue;
            }
            for (xl, xh) in norm_intervals(a, b, cc, y, m, lo, hi) {
                work += xh - xl + 1;
                if work > 3_000_000 {
                    return None;
                }
                for x in xl..=xh {
                    let v = [x, y];
                    let n = self.norm(&v);
                    if n >= 0 && n <= m && x.gcd(&y) == 1 {
                        out.push(v);
                    }
                }
            }
        }
        out.sort_by(|v, w| (s * det(w, v)).cmp(&0));
        Some(out)
    }
}

/// Intersects [lo, hi] with {x : p·x + q > 0} (strict) or ≥ 0.
pub fn constrain(lo: &mut i128, hi: &mut i128, p: i128, q: i128, strict: bool) {
    let need = if strict { 1 } else { 0 };
    // p·x ≥ need − q
    let rhs = need - q;
    if p > 0 {
        *lo = (*lo).max(Integer::div_ceil(&rhs, &p));
    } else if p < 0 {
        *hi = (*hi).min(Integer::div_floor(&-rhs, &-p));
    } else if rhs > 0 {
        *lo = 1;
        *hi = 0;
    }
}

pub fn isqrt(n: i128) -> i128 {
    let mut s = (n as f64).sqrt() as i128;
    while s * s > n {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= n {
        s += 1;
    }
    s
}

/// Sub-intervals of [lo, hi] where a x² + 2b y x + c y² ≤ M.
pub fn norm_intervals(a: i128, b: i128, c: i128, y: i128, m: i128, lo: i128, hi: i128) -> Vec<(i128, i128)> {
    let q = |x: i128| a * x * x + 2 * b * y * x + c * y * y - m;
    let disc = b * b * y * y - a * (c * y * y - m);
    if disc < 0 {
        return if a < 0 { vec![(lo, hi)] } else { vec![] };
    }
    let s = isqrt(disc);
    let (r1, r2) = {
        let x1 = Integer::div_floor(&(-b * y - s), &a);
        let x2 = Integer::div_floor(&(-b * y + s), &a);
        (x1.min(x2) - 2, x1.max(x2) + 2)
    };
    if a > 0 {
        let mut l = r1;
        let mut h = r2;
        while l <= h && q(l) > 0 {
            l += 1;
        }
        while h >= l && q(h) > 0 {
            h -= 1;
        }
        let (l, h) = (l.max(lo), h.min(hi));
        if l <= h {
            vec![(l, h)]
        } else {
            vec![]
        }
    } else {
        // Outside the roots; the slack band [r1, r2] is scanned directly.
        let mut out = Vec::new();
        if lo < r1 {
            out.push((lo, hi.min(r1 - 1)));
        }
        let (bl, bh) = (r1.max(lo), r2.min(hi));
        if bl <= bh {
            out.push((bl, bh));
        }
        if hi > r2 {
            out.push((lo.max(r2 + 1), hi));
        }
        out.retain(|(l, h)| l <= h);
        out
    }
}

pub fn random_case(rng: &mut ChaCha8Rng) -> Option<Case> {
    let a = rng.gen_range(-50..=50);
    let b = rng.gen_range(-50..=50);
    let c = rng.gen_range(-50..=50);
    let disc = b * b - a * c;
    if disc <= 0 || (isqrt(disc as i128) as i64).pow(2) == disc {
        return None;
    }
    let k = [rng.gen_range(-20..=20), rng.gen_range(-20..=20)];
    if a * k[0] * k[0] + 2 * b * k[0] * k[1] + c * k[1] * k[1] >= 0 {
        return None;
    }
    let w = [rng.gen_range(-20..=20), rng.gen_range(-20..=20)];
    if w[0] * k[1] - w[1] * k[0] == 0 {
        return None;
    }
    let gram = [[a, b], [b, c]];
    let frame = PlaneFrame::from_ints(gram, k, w).ok()?;
    let (x, y) = pell(disc);
    let (ai, bi, ci) = (Int::from(a), Int::from(b), Int::from(c));
    let g: Mat2 = [[&x - &bi * &y, -&ci * &y], [&ai * &y, &x + &bi * &y]];
    // Pick the direction that moves the bottom vector forward.
    let r0 = frame.bottom().to_vec();
    let gr = mat_apply(&g, &r0);
    let forward = if frame.sector_compare(&r0, &gr).ok()? == Ordering::Less {
        g
    } else {
        [[g[1][1].clone(), -&g[0][1]], [-&g[1][0], g[0][0].clone()]]
    };
    let m = rng.gen_range(1..=20);
    Some(Case { gram, frame, m, forward })
}

pub fn to_ivec(v: &[i128; 2]) -> IVec {
    vec![Int::from(v[0]), Int::from(v[1])]
}

pub fn first_after(case: &Case, r: &IVec, m: i64) -> Option<Option<IVec>> {
    let r_s = small(r)?;
    let gr = small(&mat_apply(&case.forward, r))?;
    let list = case.brute(&r_s, &gr, m as i128, 20_000)?;
    Some(list.first().map(to_ivec))
}


/// A random integral Lorentzian Gram matrix of rank 3 with |det| ≤ 30.
pub fn random_lattice(rng: &mut ChaCha8Rng) -> chamberwalk::lattice::Lattice {
    loop {
        let a = rng.gen_range(-3..=4);
        let b = rng.gen_range(-3..=4);
        let c = rng.gen_range(-6..=2);
        let (x, y, z) = (rng.gen_range(-2..=2), rng.gen_range(-2..=2), rng.gen_range(-2..=2));
        let l = chamberwalk::lattice::Lattice::from_ints(&[vec![a, x, y], vec![x, b, z], vec![y, z, c]]).unwrap();
        let det: i64 = a * (b * c - z * z) - x * (x * c - z * y) + y * (x * z - b * y);
        if det != 0 && det.abs() <= 30 && l.is_lorentzian() {
            return l;
        }
    }
}
