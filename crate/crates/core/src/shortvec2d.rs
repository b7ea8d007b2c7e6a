//! Ordered search for short primitive vectors in a sector of a rank-2
//! Lorentzian lattice.
//!
//! A [`PlaneFrame`] fixes the lattice, a timelike or lightlike vector `k` and
//! a witness for the open half-plane bounded by `ℝk`. The sector is the set of
//! non-negative-norm vectors of that half-plane, ordered by angle from the
//! bottom ray (orthogonal to `k`) up to the lightlike top ray `Ω`.
//!
//! Non-integral Grams are rescaled by the common denominator of their entries.
//! All norms handed to or returned from public methods are in the original
//! units; coordinates are always with respect to the lattice basis.

use crate::arith::{ext_gcd, floor_q, is_square, isqrt, lcm_denominators, primitive, primitive_q, ri, IVec, Int, QVec, Rat};
use crate::error::{Error, Result};
use num::{One, Signed, Zero};
use std::cmp::Ordering;

/// 2×2 integer matrix acting on coordinate columns.
pub type Mat2 = [[Int; 2]; 2];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneFrame {
    gram: Mat2,
    scale: Int,
    k: IVec,
    sigma: Int,
    bottom: IVec,
    isotropic: bool,
}

/// Result of [`PlaneFrame::promised_with`]: the pair and the number of
/// go-left/go-right steps taken.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Promised {
    pub r: IVec,
    pub l: IVec,
    pub steps: u64,
}

/// One period of the short vectors after the starting vector in an
/// anisotropic plane, and a generator of the orientation-preserving,
/// sector-preserving isometries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Period {
    pub g: Mat2,
    pub roots: Vec<IVec>,
}

fn det2(a: &[Int], b: &[Int]) -> Int {
    &a[0] * &b[1] - &a[1] * &b[0]
}

fn add2(a: &[Int], b: &[Int]) -> IVec {
    vec![&a[0] + &b[0], &a[1] + &b[1]]
}

fn axpy2(c: &Int, a: &[Int], b: &[Int]) -> IVec {
    vec![c * &a[0] + &b[0], c * &a[1] + &b[1]]
}

pub fn mat_apply(g: &Mat2, v: &[Int]) -> IVec {
    vec![&g[0][0] * &v[0] + &g[0][1] * &v[1], &g[1][0] * &v[0] + &g[1][1] * &v[1]]
}

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub fn mat_identity() -> Mat2 {
    [[Int::one(), Int::zero()], [Int::zero(), Int::one()]]
}

impl PlaneFrame {
    pub fn new(gram: &[QVec], k: &[Rat], witness: &[Rat]) -> Result<Self> {
        if gram.len() != 2 || gram.iter().any(|r| r.len() != 2) || k.len() != 2 || witness.len() != 2 {
            return Err(Error::Frame("plane frames are two-dimensional".into()));
        }
        if gram[0][1] != gram[1][0] {
            return Err(Error::NotSymmetric(0, 1));
        }
        let d = lcm_denominators(&[gram[0][0].clone(), gram[0][1].clone(), gram[1][1].clone()]);
        let s = |x: &Rat| (x * ri(&d)).to_integer();
        let g: Mat2 = [[s(&gram[0][0]), s(&gram[0][1])], [s(&gram[1][0]), s(&gram[1][1])]];
        let det = &g[0][0] * &g[1][1] - &g[0][1] * &g[0][1];
        if !det.is_negative() {
            return Err(Error::Frame("plane is not Lorentzian".into()));
        }
        let k = primitive_q(k).ok_or(Error::ZeroVector)?;
        let w = primitive_q(witness).ok_or(Error::ZeroVector)?;
        let mut f = PlaneFrame {
            isotropic: is_square(&-det),
            gram: g,
            scale: d,
            sigma: Int::zero(),
            bottom: vec![],
            k,
        };
        if f.norm(&f.k).is_positive() {
            return Err(Error::Frame("k must be timelike or lightlike".into()));
        }
        let dw = det2(&w, &f.k);
        if dw.is_zero() {
            return Err(Error::Frame("witness lies on the line through k".into()));
        }
        f.sigma = if dw.is_positive() { Int::one() } else { -Int::one() };
        // For lightlike k only the side where k·w < 0 has timelike vectors near k.
        if f.norm(&f.k).is_zero() && !f.inner(&f.k, &w).is_negative() {
            return Err(Error::Frame("for lightlike k the witness must have negative inner product with k".into()));
        }
        f.bottom = if f.norm(&f.k).is_zero() {
            f.k.iter().map(|x| -x).collect()
        } else {
            // Orthogonal to k: (k·e1, k·e2) rotated.
            let a = f.inner(&f.k, &[Int::one(), Int::zero()]);
            let b = f.inner(&f.k, &[Int::zero(), Int::one()]);
            let v = primitive(&[-b, a]).expect("k is nonzero in a nondegenerate plane");
            if f.side(&v).is_positive() {
                v
            } else {
                v.iter().map(|x| -x).collect()
            }
        };
        Ok(f)
    }

    pub fn from_ints(gram: [[i64; 2]; 2], k: [i64; 2], witness: [i64; 2]) -> Result<Self> {
        let q = |x: i64| Rat::from_integer(Int::from(x));
        Self::new(
            &[vec![q(gram[0][0]), q(gram[0][1])], vec![q(gram[1][0]), q(gram[1][1])]],
            &[q(k[0]), q(k[1])],
            &[q(witness[0]), q(witness[1])],
        )
    }

    /// Inner product in the rescaled (integral) Gram.
    pub fn inner(&self, a: &[Int], b: &[Int]) -> Int {
        let g = &self.gram;
        &a[0] * (&g[0][0] * &b[0] + &g[0][1] * &b[1]) + &a[1] * (&g[1][0] * &b[0] + &g[1][1] * &b[1])
    }

    pub fn norm(&self, a: &[Int]) -> Int {
        self.inner(a, a)
    }

    /// Norm in the original units.
    pub fn true_norm(&self, a: &[Int]) -> Rat {
        Rat::new(self.norm(a), self.scale.clone())
    }

    pub fn scale(&self) -> &Int {
        &self.scale
    }

    pub fn scaled_gram(&self) -> &Mat2 {
        &self.gram
    }

    pub fn k(&self) -> &[Int] {
        &self.k
    }

    pub fn is_isotropic(&self) -> bool {
        self.isotropic
    }

    /// First vector of the sector: orthogonal to k, or −k when k is lightlike.
    pub fn bottom(&self) -> &[Int] {
        &self.bottom
    }

    fn scaled_budget(&self, m: &Rat) -> Result<Rat> {
        if !m.is_positive() {
            return Err(Error::NonPositiveNorm);
        }
        Ok(m * ri(&self.scale))
    }

    fn side(&self, v: &[Int]) -> Int {
        &self.sigma * det2(v, &self.k)
    }

    pub fn in_halfplane(&self, v: &[Int]) -> bool {
        self.side(v).is_positive()
    }

    pub fn in_sector(&self, v: &[Int]) -> bool {
        if self.norm(v).is_negative() {
            return false;
        }
        if self.in_halfplane(v) {
            return true;
        }
        // The bottom ray −k of a lightlike k closes the sector.
        self.norm(&self.k).is_zero() && det2(v, &self.k).is_zero() && !is_zero2(v) && self.bottom_direction(v)
    }

    fn bottom_direction(&self, v: &[Int]) -> bool {
        let dot = &v[0] * &self.bottom[0] + &v[1] * &self.bottom[1];
        dot.is_positive()
    }

    /// Lightlike vectors along the top of the sector.
    pub fn in_omega(&self, v: &[Int]) -> bool {
        self.norm(v).is_zero() && self.in_halfplane(v) && (&self.sigma * det2(&self.bottom, v)).is_positive()
    }

    /// (r, l) is a lattice basis with the frame's orientation.
    pub fn is_oriented_basis(&self, r: &[Int], l: &[Int]) -> bool {
        (&self.sigma * det2(r, l)).is_one()
    }

    /// Sector order: by angle from the bottom, then by length along a ray.
    pub fn sector_compare(&self, v: &[Int], w: &[Int]) -> Result<Ordering> {
        if !self.in_sector(v) || !self.in_sector(w) {
            return Err(Error::Precondition("sector_compare needs vectors of the sector".into()));
        }
        let d = &self.sigma * det2(v, w);
        if d.is_positive() {
            return Ok(Ordering::Less);
        }
        if d.is_negative() {
            return Ok(Ordering::Greater);
        }
        let i = if v[0].is_zero() { 1 } else { 0 };
        Ok(v[i].abs().cmp(&w[i].abs()))
    }

    fn interior_scaled(&self, m: &Rat, l: &[Int]) -> bool {
        self.in_halfplane(l) && ri(&self.norm(l)) > *m
    }

    fn is_supplement_scaled(&self, m: &Rat, r: &[Int], l: &[Int]) -> bool {
        self.is_oriented_basis(r, l) && !self.interior_scaled(m, l)
    }

    /// (r, l) is oriented and l avoids the interior of the hull of the norm-M
    /// hyperbola branch in the sector.
    pub fn is_m_supplement(&self, m: &Rat, r: &[Int], l: &[Int]) -> Result<bool> {
        let ms = self.scaled_budget(m)?;
        Ok(self.is_supplement_scaled(&ms, r, l))
    }

    /// Largest integer j with (l + j r)² ≤ M, for r² > 0.
    fn canonical_scaled(&self, m: &Rat, r: &[Int], l: &[Int]) -> Result<IVec> {
        let rr = self.norm(r);
        if !rr.is_positive() {
            return Err(Error::Precondition("canonical supplement needs r² > 0".into()));
        }
        let rl = self.inner(r, l);
        let ll = self.norm(l);
        let disc = ri(&(&rl * &rl)) - ri(&rr) * (ri(&ll) - m);
        if disc.is_negative() {
            return Err(Error::NegativeDiscriminant);
        }
        // j ≤ t₊  ⇔  a := r²j + r·l ≤ √D.
        let fits = |j: &Int| {
            let a = ri(&(&rr * j + &rl));
            !a.is_positive() || &a * &a <= disc
        };
        let s = isqrt(&floor_q(&disc));
        let mut j = num::Integer::div_floor(&(-&rl + s), &rr);
        while !fits(&j) {
            j -= 1;
        }
        while fits(&(&j + 1)) {
            j += 1;
        }
        Ok(axpy2(&j, r, l))
    }

    /// The unique M-supplement l' ≡ l mod r for which l' + r is not one.
    pub fn canonical_supplement(&self, m: &Rat, r: &[Int], l: &[Int]) -> Result<IVec> {
        let ms = self.scaled_budget(m)?;
        if !self.is_oriented_basis(r, l) {
            return Err(Error::Precondition("(r, l) is not an oriented basis".into()));
        }
        if !self.in_sector(r) {
            return Err(Error::Precondition("r is not in the sector".into()));
        }
        self.canonical_scaled(&ms, r, l)
    }

    /// Some M-supplement of a primitive sector vector r.
    pub fn initial_supplement(&self, m: &Rat, r: &[Int]) -> Result<IVec> {
        let ms = self.scaled_budget(m)?;
        self.initial_supplement_scaled(&ms, r)
    }

    fn initial_supplement_scaled(&self, m: &Rat, r: &[Int]) -> Result<IVec> {
        if !self.in_sector(r) {
            return Err(Error::Precondition("r is not in the sector".into()));
        }
        let (g, x, y) = ext_gcd(&r[0], &r[1]);
        if !g.is_one() {
            return Err(Error::Precondition("r is not primitive".into()));
        }
        // r0·l1 − r1·l0 = σ.
        let l = vec![-&y * &self.sigma, &x * &self.sigma];
        let rr = self.norm(r);
        if rr.is_positive() {
            return self.canonical_scaled(m, r, &l);
        }
        // Lightlike r: (l + j r)² = l² + 2j(r·l) is linear in j.
        let rl = self.inner(r, &l);
        let ll = ri(&self.norm(&l));
        let bound = (m - ll) / ri(&(&rl * 2));
        let j = if rl.is_positive() { floor_q(&bound) } else { bound.ceil().to_integer() };
        Ok(axpy2(&j, r, &l))
    }

    fn check_promised_input(&self, m: &Rat, r: &[Int], l: &[Int]) -> Result<()> {
        if !self.in_sector(r) || self.in_omega(r) {
            return Err(Error::Precondition("r must lie in the sector and off the top ray".into()));
        }
        if !self.is_supplement_scaled(m, r, l) {
            return Err(Error::Precondition("l is not an M-supplement of r".into()));
        }
        Ok(())
    }

    /// First primitive sector vector of norm ≤ M strictly after r, with an
    /// M-supplement. The caller promises that such a vector exists.
    pub fn promised(&self, m: &Rat, r: &[Int], l: &[Int]) -> Result<(IVec, IVec)> {
        let p = self.promised_with(m, r, l, false)?;
        Ok((p.r, p.l))
    }

    /// As [`promised`](Self::promised); `grouped` collapses runs of go-right
    /// steps into one jump to the canonical supplement.
    pub fn promised_with(&self, m: &Rat, r: &[Int], l: &[Int], grouped: bool) -> Result<Promised> {
        let ms = self.scaled_budget(m)?;
        self.check_promised_input(&ms, r, l)?;
        Ok(self.promised_scaled(&ms, r.to_vec(), l.to_vec(), grouped))
    }

    fn promised_scaled(&self, m: &Rat, mut r: IVec, mut l: IVec, grouped: bool) -> Promised {
        let mut steps = 0u64;
        loop {
            let mid = add2(&r, &l);
            // Go right exactly when mid is itself an M-supplement of r.
            let go_right = ri(&self.norm(&mid)) <= *m || self.inner(&mid, &r).is_negative();
            if go_right {
                steps += 1;
                if grouped && self.norm(&r).is_positive() {
                    let c = self.canonical_scaled(m, &r, &l).expect("r² > 0");
                    if det2(&r, &c) == det2(&r, &l) && self.coefficient_of_r(&r, &l, &c) >= Int::one() {
                        l = c;
                        continue;
                    }
                }
                l = mid;
                continue;
            }
            if !self.norm(&l).is_negative() && self.inner(&r, &l).is_positive() {
                let neg_r = r.iter().map(|x| -x).collect();
                return Promised { r: l, l: neg_r, steps };
            }
            steps += 1;
            r = mid;
        }
    }

    /// j with c = l + j r.
    fn coefficient_of_r(&self, r: &[Int], l: &[Int], c: &[Int]) -> Int {
        let i = if r[0].is_zero() { 1 } else { 0 };
        (&c[i] - &l[i]) / &r[i]
    }

    fn gram_of(&self, r: &[Int], l: &[Int]) -> [Int; 3] {
        [self.norm(r), self.inner(r, l), self.norm(l)]
    }

    fn require_anisotropic(&self) -> Result<()> {
        if self.isotropic {
            Err(Error::Isotropic)
        } else {
            Ok(())
        }
    }

    /// First primitive sector vector after r that is shorter than r, with its
    /// canonical supplement; `None` certifies that no spacelike vector is
    /// shorter than r. `l` must be the canonical r²-supplement of r.
    pub fn shorter(&self, r: &[Int], l: &[Int]) -> Result<Option<(IVec, IVec)>> {
        self.require_anisotropic()?;
        if !self.norm(r).is_positive() || !self.in_sector(r) {
            return Err(Error::Precondition("r must be a spacelike sector vector".into()));
        }
        let m = ri(&self.norm(r));
        self.check_promised_input(&m, r, l)?;
        Ok(self.shorter_scaled(r.to_vec(), l.to_vec()))
    }

    fn shorter_scaled(&self, r: IVec, l: IVec) -> Option<(IVec, IVec)> {
        let m = self.norm(&r);
        let snapshot = self.gram_of(&r, &l);
        let (mut r, mut l) = (r, l);
        loop {
            let mq = ri(&self.norm(&r));
            let p = self.promised_scaled(&mq, r, l, true);
            r = p.r;
            let rq = ri(&self.norm(&r));
            l = self.canonical_scaled(&rq, &r, &p.l).expect("spacelike r");
            if self.norm(&r) < m {
                return Some((r, l));
            }
            if self.gram_of(&r, &l) == snapshot {
                return None;
            }
        }
    }

    /// First primitive sector vector after r of norm ≤ M, with its canonical
    /// M-supplement; `None` certifies there are no spacelike vectors of norm
    /// ≤ M at all. `l` must be the canonical r²-supplement of r.
    pub fn not_promised(&self, m: &Rat, r: &[Int], l: &[Int]) -> Result<Option<(IVec, IVec)>> {
        self.require_anisotropic()?;
        let ms = self.scaled_budget(m)?;
        if !self.norm(r).is_positive() || !self.in_sector(r) {
            return Err(Error::Precondition("r must be a spacelike sector vector".into()));
        }
        self.check_promised_input(&ri(&self.norm(r)), r, l)?;
        Ok(self.not_promised_scaled(&ms, r.to_vec(), l.to_vec()))
    }

    fn not_promised_scaled(&self, m: &Rat, r: IVec, l: IVec) -> Option<(IVec, IVec)> {
        if ri(&self.norm(&r)) <= *m {
            let p = self.promised_scaled(m, r, l, true);
            let l = self.canonical_scaled(m, &p.r, &p.l).expect("spacelike r");
            return Some((p.r, l));
        }
        let (mut r, mut l) = (r, l);
        loop {
            let (r2, l2) = self.shorter_scaled(r, l)?;
            if ri(&self.norm(&r2)) <= *m {
                let l2 = self.canonical_scaled(m, &r2, &l2).expect("spacelike r");
                return Some((r2, l2));
            }
            r = r2;
            l = l2;
        }
    }

    /// One period of the primitive sector vectors of norm ≤ M after r0, and
    /// the generator g with g(first) = first vector of the next period.
    /// `l0` must be the canonical r0²-supplement of r0.
    pub fn anisotropic_period(&self, m: &Rat, r0: &[Int], l0: &[Int]) -> Result<Option<Period>> {
        self.require_anisotropic()?;
        let ms = self.scaled_budget(m)?;
        if !self.norm(r0).is_positive() || !self.in_sector(r0) {
            return Err(Error::Precondition("r0 must be a spacelike sector vector".into()));
        }
        self.check_promised_input(&ri(&self.norm(r0)), r0, l0)?;
        let Some((r1, l1)) = self.not_promised_scaled(&ms, r0.to_vec(), l0.to_vec()) else {
            return Ok(None);
        };
        let snapshot = self.gram_of(&r1, &l1);
        let mut roots = vec![r1.clone()];
        let (mut r, mut l) = (r1.clone(), l1.clone());
        loop {
            let p = self.promised_scaled(&ms, r, l, true);
            r = p.r;
            l = self.canonical_scaled(&ms, &r, &p.l).expect("spacelike r");
            if self.gram_of(&r, &l) == snapshot {
                return Ok(Some(Period { g: basis_change(&r1, &l1, &r, &l), roots }));
            }
            roots.push(r.clone());
        }
    }

    /// Canonical r²-supplement of a spacelike sector vector.
    pub fn self_supplement(&self, r: &[Int]) -> Result<IVec> {
        let rr = self.norm(r);
        if !rr.is_positive() {
            return Err(Error::Precondition("r must be spacelike".into()));
        }
        self.initial_supplement_scaled(&ri(&rr), r)
    }

    /// Isotropic planes: all primitive sector vectors of norm ≤ M after r0,
    /// in order, ending with the generator of the top ray.
    pub fn isotropic_sweep(&self, m: &Rat, r0: &[Int]) -> Result<Vec<IVec>> {
        if !self.isotropic {
            return Err(Error::Precondition("isotropic_sweep needs an isotropic plane".into()));
        }
        let ms = self.scaled_budget(m)?;
        let mut l = self.initial_supplement_scaled(&ms, r0)?;
        let mut r = r0.to_vec();
        self.check_promised_input(&ms, &r, &l)?;
        let mut out = Vec::new();
        loop {
            let p = self.promised_scaled(&ms, r, l, true);
            out.push(p.r.clone());
            if self.in_omega(&p.r) {
                return Ok(out);
            }
            r = p.r;
            l = p.l;
        }
    }
}

fn is_zero2(v: &[Int]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// The matrix sending (r1, l1) to (r, l); (r1, l1) must be a lattice basis.
pub fn basis_change(r1: &[Int], l1: &[Int], r: &[Int], l: &[Int]) -> Mat2 {
    let d = det2(r1, l1);
    // [r1 l1]^{-1} = (1/d) [[l1y, -l1x], [-r1y, r1x]]
    let inv = [[&l1[1] * &d, -&l1[0] * &d], [-&r1[1] * &d, &r1[0] * &d]];
    let cols = [[r[0].clone(), l[0].clone()], [r[1].clone(), l[1].clone()]];
    mat_mul(&cols, &inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{ivec, rat};

    fn diag(a: i64, b: i64) -> PlaneFrame {
        PlaneFrame::from_ints([[a, 0], [0, b]], [0, 1], [1, 0]).unwrap()
    }

    fn one() -> Rat {
        rat(1, 1)
    }

    #[test]
    fn sector_order() {
        let f = diag(1, -1);
        assert_eq!(f.sector_compare(&ivec(&[1, 0]), &ivec(&[2, 1])).unwrap(), Ordering::Less);
        assert_eq!(f.sector_compare(&ivec(&[2, 1]), &ivec(&[4, 2])).unwrap(), Ordering::Less);
        assert_eq!(f.sector_compare(&ivec(&[1, 0]), &ivec(&[1, 0])).unwrap(), Ordering::Equal);
        assert!(f.in_omega(&ivec(&[1, 1])));
        assert!(!f.in_omega(&ivec(&[1, -1])));
    }

    #[test]
    fn supplements() {
        let f = diag(1, -2);
        assert!(f.is_m_supplement(&one(), &ivec(&[1, 0]), &ivec(&[0, 1])).unwrap());
        assert!(!f.is_m_supplement(&one(), &ivec(&[1, 0]), &ivec(&[2, 1])).unwrap());
        assert!(!f.is_m_supplement(&one(), &ivec(&[1, 0]), &ivec(&[-1, 0])).unwrap());
    }

    #[test]
    fn canonical_examples() {
        let f = diag(1, -2);
        assert_eq!(f.canonical_supplement(&one(), &ivec(&[1, 0]), &ivec(&[0, 1])).unwrap(), ivec(&[1, 1]));
        assert_eq!(f.canonical_supplement(&one(), &ivec(&[3, 2]), &ivec(&[-2, -1])).unwrap(), ivec(&[7, 5]));
        assert_eq!(f.canonical_supplement(&one(), &ivec(&[17, 12]), &ivec(&[-10, -7])).unwrap(), ivec(&[41, 29]));
    }

    #[test]
    fn promised_examples() {
        let f = diag(1, -1);
        let (r, l) = f.promised(&one(), &ivec(&[1, 0]), &ivec(&[0, 1])).unwrap();
        assert_eq!(r, ivec(&[1, 1]));
        assert!(f.is_m_supplement(&one(), &r, &l).unwrap());
        let f = diag(1, -2);
        let (r, l) = f.promised(&one(), &ivec(&[1, 0]), &ivec(&[1, 1])).unwrap();
        assert_eq!((r, l), (ivec(&[3, 2]), ivec(&[-2, -1])));
    }

    #[test]
    fn not_promised_and_period() {
        let f = diag(1, -2);
        let (r, l) = f.not_promised(&one(), &ivec(&[1, 0]), &ivec(&[1, 1])).unwrap().unwrap();
        assert_eq!((r, l), (ivec(&[3, 2]), ivec(&[7, 5])));
        let p = f.anisotropic_period(&one(), &ivec(&[1, 0]), &ivec(&[1, 1])).unwrap().unwrap();
        assert_eq!(p.roots, vec![ivec(&[3, 2])]);
        assert_eq!(p.g, [[Int::from(3), Int::from(4)], [Int::from(2), Int::from(3)]]);
        let f = diag(1, -3);
        let l0 = f.self_supplement(&ivec(&[1, 0])).unwrap();
        let p = f.anisotropic_period(&one(), &ivec(&[1, 0]), &l0).unwrap().unwrap();
        assert_eq!(p.roots, vec![ivec(&[2, 1])]);
        assert_eq!(p.g, [[Int::from(2), Int::from(3)], [Int::from(1), Int::from(2)]]);
    }

    #[test]
    fn shorter_certifies_minimum() {
        let f = diag(1, -2);
        assert_eq!(f.shorter(&ivec(&[1, 0]), &ivec(&[1, 1])).unwrap(), None);
    }

    #[test]
    fn isotropic_rejected_by_anisotropic_tools() {
        let f = diag(1, -1);
        assert_eq!(f.shorter(&ivec(&[1, 0]), &ivec(&[0, 1])), Err(Error::Isotropic));
        let sweep = f.isotropic_sweep(&one(), &ivec(&[1, 0])).unwrap();
        assert_eq!(sweep, vec![ivec(&[1, 1])]);
    }
}
