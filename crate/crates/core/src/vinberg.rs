//! Classical Vinberg algorithm with exact priorities, plus the real quadratic
//! machinery (Pell, fundamental units) behind the rank-2 slowness table.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use num::{Integer, One, Signed, Zero};

use crate::arith::{gcd_all, isqrt, is_square, primitive_q, ri, scale_i, to_ivec, Int, IVec, Rat};
use crate::lattice::{DefiniteEnumerator, Lattice, NormBound};
use crate::linalg::{int_kernel, int_solve, nullspace_q, rank_q};
use crate::{Error, Result};

/// The priority −k·α/√(α²), kept as the pair ((k·α)², α²).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Priority {
    pub inner_squared: Rat,
    pub norm: Rat,
}

impl Priority {
    pub fn new(lattice: &Lattice, k: &[Int], alpha: &[Int]) -> Result<Self> {
        let ka = lattice.inner(k, alpha);
        if !ka.is_negative() {
            return Err(Error::Precondition(format!(
                "root {alpha:?} does not have negative inner product with the control vector"
            )));
        }
        let norm = lattice.norm(alpha);
        if !norm.is_positive() {
            return Err(Error::NonPositiveNorm);
        }
        Ok(Priority { inner_squared: &ka * &ka, norm })
    }

    /// Priority squared as a single rational.
    pub fn squared(&self) -> Rat {
        &self.inner_squared / &self.norm
    }

    /// Compares the priorities alone, ignoring norms.
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        (&self.inner_squared * &other.norm).cmp(&(&other.inner_squared * &self.norm))
    }
}

impl Ord for Priority {
    /// Priority first, then norm.
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_value(other).then_with(|| self.norm.cmp(&other.norm))
    }
}

impl PartialOrd for Priority {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders two roots by priority, breaking ties by norm.
pub fn compare_priority(lattice: &Lattice, k: &[Int], a: &[Int], b: &[Int]) -> Result<Ordering> {
    Ok(Priority::new(lattice, k, a)?.cmp(&Priority::new(lattice, k, b)?))
}

/// Runs the approval scan: a candidate is approved when it has nonpositive
/// inner product with every fixed root and every earlier approved candidate.
/// Candidates must be sorted by priority and then norm.
pub fn approval_filter(lattice: &Lattice, k: &[Int], fixed: &[IVec], candidates: &[IVec]) -> Result<Vec<IVec>> {
    let prios = candidates
        .iter()
        .map(|c| Priority::new(lattice, k, c))
        .collect::<Result<Vec<_>>>()?;
    if let Some(i) = prios.windows(2).position(|w| w[0] > w[1]) {
        return Err(Error::Precondition(format!(
            "candidates {} and {} are out of (priority, norm) order",
            i,
            i + 1
        )));
    }
    let mut approved: Vec<IVec> = Vec::new();
    for c in candidates {
        if approve(lattice, fixed, &approved, c) {
            approved.push(c.clone());
        }
    }
    Ok(approved)
}

fn approve(lattice: &Lattice, fixed: &[IVec], approved: &[IVec], c: &[Int]) -> bool {
    fixed.iter().chain(approved).all(|r| !lattice.inner(r, c).is_positive())
}

/// How `vinberg_run` decides the chamber is complete.
#[derive(Clone, Debug)]
pub enum StopTest {
    /// Stop once the accepted roots bound a polytope of finite volume.
    FiniteVolume,
    /// Stop once every root of a known simple system has been accepted.
    Certificate(Vec<IVec>),
    /// Run until the budget is spent.
    Never,
}

#[derive(Clone, Debug)]
pub struct VinbergOptions {
    pub max_batches: Option<u64>,
    /// Largest priority value examined.
    pub max_priority: Option<Rat>,
    /// Only look for roots of these norms.
    pub norms: Option<Vec<Int>>,
    pub stop: StopTest,
}

impl Default for VinbergOptions {
    fn default() -> Self {
        VinbergOptions { max_batches: Some(100_000), max_priority: None, norms: None, stop: StopTest::FiniteVolume }
    }
}

#[derive(Clone, Debug)]
pub struct VinbergOutcome {
    /// Batch 0 followed by the accepted roots in order.
    pub roots: Vec<IVec>,
    pub accepted: Vec<IVec>,
    /// True when the budget ran out before the stop test fired.
    pub exhausted: bool,
    pub batches_examined: u64,
    /// Batches examined since the last one that produced any candidate.
    pub trailing_empty_batches: u64,
    pub candidates_examined: u64,
}

/// Roots of one norm N: those with k·α = −j·step lie in `j·shift + K`
/// where K is the part of the constraint lattice orthogonal to k.
struct NormStream {
    norm: Int,
    step: Int,
    shift: IVec,
    orth: DefiniteEnumerator,
}

impl NormStream {
    fn new(lattice: &Lattice, k: &[Int], norm: Int) -> Result<Self> {
        let basis = lattice.constraint_lattice(&norm)?.basis().to_vec();
        let r = basis.len();
        let kb: IVec = basis.iter().map(|b| lattice.inner(k, b).to_integer()).collect();
        let step = gcd_all(&kb);
        let combine = |c: &[Int]| -> IVec {
            let mut v = vec![Int::zero(); lattice.rank()];
            for (ci, b) in c.iter().zip(&basis) {
                for (x, y) in v.iter_mut().zip(b) {
                    *x += ci * y;
                }
            }
            v
        };
        let coeff = int_solve(&[kb.clone()], &[-step.clone()], r)
            .ok_or_else(|| Error::Internal("gcd combination not found".into()))?;
        let shift = combine(&coeff);
        let orth_basis: Vec<IVec> = int_kernel(&[kb], r).iter().map(|c| combine(c)).collect();
        let orth = DefiniteEnumerator::new(lattice, &orth_basis)?;
        Ok(NormStream { norm, step, shift, orth })
    }

    fn key(&self, j: &Int) -> Rat {
        let kv = j * &self.step;
        Rat::new(&kv * &kv, self.norm.clone())
    }

    fn realize(&self, lattice: &Lattice, j: &Int) -> Vec<IVec> {
        let offset: Vec<Rat> = scale_i(j, &self.shift).iter().map(ri).collect();
        self.orth
            .enumerate(lattice, &offset, &NormBound::Exactly(ri(&self.norm)))
            .iter()
            .filter_map(|v| to_ivec(v))
            .collect()
    }
}

fn check_control(lattice: &Lattice, k: &[Int], batch0: &[IVec]) -> Result<()> {
    lattice.int_gram()?;
    if !lattice.is_lorentzian() {
        return Err(Error::Precondition("lattice is not Lorentzian".into()));
    }
    if k.len() != lattice.rank() {
        return Err(Error::Dimension { expected: lattice.rank(), got: k.len() });
    }
    if !lattice.norm(k).is_negative() {
        return Err(Error::Precondition("control vector is not timelike".into()));
    }
    if !gcd_all(k).is_one() {
        return Err(Error::Precondition("control vector is not primitive".into()));
    }
    for r in batch0 {
        if r.len() != lattice.rank() {
            return Err(Error::Dimension { expected: lattice.rank(), got: r.len() });
        }
        if !lattice.inner(k, r).is_zero() {
            return Err(Error::Precondition(format!("batch 0 root {r:?} is not orthogonal to the control vector")));
        }
        if !lattice.is_root(r)? {
            return Err(Error::Precondition(format!("{r:?} is not a root")));
        }
    }
    Ok(())
}

/// Vinberg's algorithm from control vector `k` with batch 0 given.
/// Batches of equal priority are merged across all root norms.
pub fn vinberg_run(lattice: &Lattice, k: &[Int], batch0: &[IVec], opts: &VinbergOptions) -> Result<VinbergOutcome> {
    check_control(lattice, k, batch0)?;
    let menu = lattice.root_norm_menu()?;
    let norms: Vec<Int> = match &opts.norms {
        Some(ns) => menu.iter().filter(|n| ns.contains(n)).cloned().collect(),
        None => menu,
    };
    let streams = norms
        .into_iter()
        .map(|n| NormStream::new(lattice, k, n))
        .collect::<Result<Vec<_>>>()?;
    let mut heap: BinaryHeap<Reverse<(Rat, usize, Int)>> = BinaryHeap::new();
    for (i, s) in streams.iter().enumerate() {
        heap.push(Reverse((s.key(&Int::one()), i, Int::one())));
    }
    let max_sq = opts.max_priority.as_ref().map(|p| p * p);

    let mut roots: Vec<IVec> = batch0.to_vec();
    let mut out = VinbergOutcome {
        roots: Vec::new(),
        accepted: Vec::new(),
        exhausted: false,
        batches_examined: 0,
        trailing_empty_batches: 0,
        candidates_examined: 0,
    };
    let mut done = stop_reached(lattice, k, &roots, &opts.stop)?;
    while !done {
        let Some(Reverse((key, _, _))) = heap.peek().cloned() else {
            // No norms to search.
            out.exhausted = true;
            break;
        };
        if opts.max_batches.is_some_and(|m| out.batches_examined >= m) || max_sq.as_ref().is_some_and(|m| key > *m) {
            out.exhausted = true;
            break;
        }
        let mut batch: Vec<IVec> = Vec::new();
        while heap.peek().is_some_and(|Reverse((k2, _, _))| *k2 == key) {
            let Reverse((_, i, j)) = heap.pop().unwrap();
            batch.extend(streams[i].realize(lattice, &j));
            let next = j + 1;
            heap.push(Reverse((streams[i].key(&next), i, next)));
        }
        out.batches_examined += 1;
        if batch.is_empty() {
            out.trailing_empty_batches += 1;
            continue;
        }
        out.trailing_empty_batches = 0;
        out.candidates_examined += batch.len() as u64;
        batch.sort_by(|a, b| lattice.norm(a).cmp(&lattice.norm(b)).then_with(|| a.cmp(b)));
        let before = roots.len();
        for c in batch {
            if approve(lattice, &roots, &[], &c) {
                roots.push(c);
            }
        }
        if roots.len() > before {
            done = stop_reached(lattice, k, &roots, &opts.stop)?;
        }
    }
    out.accepted = roots[batch0.len()..].to_vec();
    out.roots = roots;
    Ok(out)
}

fn stop_reached(lattice: &Lattice, k: &[Int], roots: &[IVec], stop: &StopTest) -> Result<bool> {
    match stop {
        StopTest::Never => Ok(false),
        StopTest::Certificate(cert) => Ok(cert.iter().all(|c| roots.contains(c))),
        StopTest::FiniteVolume => has_finite_volume(lattice, k, roots),
    }
}

/// Whether the cone {x : x·α ≤ 0 for all roots α} around `k` projects to a
/// finite-volume polytope: the roots span, and every extreme ray is
/// timelike or lightlike and points the same way as `k`. In rank 2 a
/// lightlike end has infinite length, so rays must be strictly timelike.
pub fn has_finite_volume(lattice: &Lattice, k: &[Int], roots: &[IVec]) -> Result<bool> {
    let d = lattice.rank();
    let rows: Vec<Vec<Rat>> = roots.iter().map(|r| lattice.apply(r)).collect();
    if rows.len() < d || rank_q(&rows) < d {
        return Ok(false);
    }
    let mut finite = true;
    let mut chosen = Vec::with_capacity(d - 1);
    for_each_subset(rows.len(), d - 1, 0, &mut chosen, &mut |idx| {
        let sub: Vec<Vec<Rat>> = idx.iter().map(|&i| rows[i].clone()).collect();
        let ns = nullspace_q(&sub, d);
        if ns.len() != 1 {
            return true;
        }
        let x = &ns[0];
        let sign_of = |r: &Vec<Rat>| -> Rat { r.iter().zip(x).map(|(a, b)| a * b).sum() };
        let signs: Vec<Rat> = rows.iter().map(sign_of).collect();
        let flip = if signs.iter().all(|s| !s.is_positive()) {
            false
        } else if signs.iter().all(|s| !s.is_negative()) {
            true
        } else {
            return true;
        };
        let norm = lattice.norm_q(x);
        let kx = lattice.inner_iq(k, x);
        let kx = if flip { -kx } else { kx };
        let ok = !norm.is_positive() && kx.is_negative() && (d > 2 || norm.is_negative());
        if !ok {
            finite = false;
        }
        ok
    });
    Ok(finite)
}

fn for_each_subset(n: usize, size: usize, start: usize, chosen: &mut Vec<usize>, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
    if chosen.len() == size {
        return f(chosen);
    }
    for i in start..n {
        if n - i < size - chosen.len() {
            break;
        }
        chosen.push(i);
        let go_on = for_each_subset(n, size, i + 1, chosen, f);
        chosen.pop();
        if !go_on {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Real quadratic fields.

/// Element a + b√n of a real quadratic field.
pub type QuadElt = (Rat, Rat);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealQuadraticData {
    pub n: Int,
    /// Whether the ring of integers has half-integer coordinates (n ≡ 1 mod 4).
    pub half_integers: bool,
    /// Fundamental unit greater than 1.
    pub unit: QuadElt,
    /// Norm of `unit`, ±1.
    pub unit_norm: i32,
    /// The unit if it has norm 1, else its square.
    pub v: QuadElt,
    pub pell: (Int, Int),
}

fn check_nonsquare(n: &Int) -> Result<()> {
    if *n < Int::from(2) {
        return Err(Error::Precondition(format!("{n} is less than 2")));
    }
    if is_square(n) {
        return Err(Error::Precondition(format!("{n} is a perfect square")));
    }
    Ok(())
}

fn check_squarefree(n: &Int) -> Result<()> {
    check_nonsquare(n)?;
    let mut p = Int::from(2);
    while &p * &p <= *n {
        if (n % (&p * &p)).is_zero() {
            return Err(Error::Precondition(format!("{n} is not square-free")));
        }
        p += 1;
    }
    Ok(())
}

/// Convergents h/k of the continued fraction of √n, paired with h² − n k².
fn sqrt_convergents(n: &Int) -> impl Iterator<Item = (Int, Int, Int)> + '_ {
    let a0 = isqrt(n);
    let (mut m, mut d, mut a) = (Int::zero(), Int::one(), a0.clone());
    let (mut h_prev, mut h) = (Int::one(), a0.clone());
    let (mut k_prev, mut k) = (Int::zero(), Int::one());
    std::iter::from_fn(move || {
        let item = (h.clone(), k.clone(), &h * &h - n * &k * &k);
        m = &d * &a - &m;
        d = (n - &m * &m) / &d;
        a = (&a0 + &m) / &d;
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
        Some(item)
    })
}

/// Least positive solution of x² − n y² = 1.
pub fn pell_fundamental(n: &Int) -> Result<(Int, Int)> {
    check_nonsquare(n)?;
    let (x, y, _) = sqrt_convergents(n).find(|(_, _, q)| q.is_one()).expect("continued fraction is periodic");
    Ok((x, y))
}

/// The fundamental unit of the ring of integers of Q(√n).
pub fn fundamental_unit(n: &Int) -> Result<RealQuadraticData> {
    check_squarefree(n)?;
    let (a, b, q) = sqrt_convergents(n).find(|(_, _, q)| q.abs().is_one()).expect("continued fraction is periodic");
    let s: i32 = if q.is_one() { 1 } else { -1 };
    let half_integers = (n % Int::from(4)) == Int::one();
    let mut unit = (ri(&a), ri(&b));
    if half_integers {
        // The unit of the full ring is a cube root of a + b√n, if it is not a + b√n itself.
        // Its trace x solves x³ − 3s·x = 2a.
        let target: Int = &a * 2;
        let c = target.cbrt();
        let sx = Int::from(3 * s);
        for x in [&c - 1, c.clone(), &c + 1] {
            if x.is_positive() && &x * &x * &x - &sx * &x == target {
                let num = &x * &x - Int::from(4 * s);
                if (&num % n).is_zero() && is_square(&(&num / n)) {
                    let y = isqrt(&(&num / n));
                    if x.is_odd() && y.is_odd() {
                        unit = (Rat::new(x, Int::from(2)), Rat::new(y, Int::from(2)));
                    }
                }
            }
        }
    }
    let v = if s == 1 { unit.clone() } else { quad_mul(n, &unit, &unit) };
    Ok(RealQuadraticData { n: n.clone(), half_integers, unit, unit_norm: s, v, pell: pell_fundamental(n)? })
}

fn quad_mul(n: &Int, x: &QuadElt, y: &QuadElt) -> QuadElt {
    (&x.0 * &y.0 + ri(n) * &x.1 * &y.1, &x.0 * &y.1 + &x.1 * &y.0)
}

/// The second simple root of the ring-of-integers lattice (norm x x̄) found by
/// Vinberg's algorithm from control vector √n with batch 0 = {−1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecondRoot {
    /// Coordinates in the basis (1, √n).
    pub alpha: QuadElt,
    pub norm: Rat,
    /// Number of the batch in which Vinberg's algorithm meets it.
    pub batch: Int,
}

/// The smallest positive multiple of 1 + v lying in the ring of integers.
pub fn rank2_second_root(n: &Int) -> Result<SecondRoot> {
    let data = fundamental_unit(n)?;
    let w = (&data.v.0 + Rat::one(), data.v.1.clone());
    // Coordinates in an integral basis: (1, √n), or (1, (1+√n)/2).
    let alpha = if data.half_integers {
        let c = primitive_q(&[&w.0 - &w.1, &w.1 * Rat::from_integer(2.into())]).expect("nonzero");
        let half = Rat::new(c[1].clone(), Int::from(2));
        (ri(&c[0]) + &half, half)
    } else {
        let c = primitive_q(&[w.0, w.1]).expect("nonzero");
        (ri(&c[0]), ri(&c[1]))
    };
    let norm = &alpha.0 * &alpha.0 - ri(n) * &alpha.1 * &alpha.1;
    let scale = if data.half_integers { Rat::from_integer(2.into()) } else { Rat::one() };
    let batch = (&alpha.1 * scale).to_integer();
    Ok(SecondRoot { alpha, norm, batch })
}

/// The values of n in the slowness table.
pub const TABLE1_ROWS: [i64; 15] = [2, 3, 5, 6, 7, 19, 67, 73, 97, 193, 241, 337, 409, 601, 769];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ivec;

    fn d(n: i64) -> Int {
        Int::from(n)
    }

    #[test]
    fn priority_examples() {
        let l = Lattice::diagonal(&[1, -2]);
        let k = ivec(&[0, 1]);
        let a = ivec(&[2, 1]);
        let b = ivec(&[3, 2]);
        assert_eq!(compare_priority(&l, &k, &a, &b).unwrap(), Ordering::Less);
        assert_eq!(compare_priority(&l, &k, &a, &a).unwrap(), Ordering::Equal);
        let a2 = ivec(&[4, 2]);
        assert_eq!(compare_priority(&l, &k, &a, &a2).unwrap(), Ordering::Less);
        assert!(compare_priority(&l, &k, &ivec(&[1, 0]), &a).is_err());
    }

    #[test]
    fn approval_examples() {
        let l = Lattice::diagonal(&[1, -2]);
        let k = ivec(&[0, 1]);
        let b0 = vec![ivec(&[-1, 0])];
        let cands = vec![ivec(&[-2, 1]), ivec(&[2, 1])];
        assert_eq!(approval_filter(&l, &k, &b0, &cands).unwrap(), vec![ivec(&[2, 1])]);
        let twice = vec![ivec(&[2, 1]), ivec(&[4, 2])];
        assert_eq!(approval_filter(&l, &k, &[], &twice).unwrap(), vec![ivec(&[2, 1])]);
        let unsorted = vec![ivec(&[3, 2]), ivec(&[2, 1])];
        assert!(approval_filter(&l, &k, &[], &unsorted).is_err());
    }

    #[test]
    fn pell_examples() {
        assert_eq!(pell_fundamental(&d(106)).unwrap(), (d(32080051), d(3115890)));
        assert_eq!(pell_fundamental(&d(2)).unwrap(), (d(3), d(2)));
        assert_eq!(pell_fundamental(&d(3)).unwrap(), (d(2), d(1)));
        assert!(pell_fundamental(&d(9)).is_err());
        assert!(pell_fundamental(&d(1)).is_err());
    }

    #[test]
    fn unit_examples() {
        let u2 = fundamental_unit(&d(2)).unwrap();
        assert_eq!(u2.unit, (ri(&d(1)), ri(&d(1))));
        assert_eq!(u2.unit_norm, -1);
        assert_eq!(u2.v, (ri(&d(3)), ri(&d(2))));
        let u5 = fundamental_unit(&d(5)).unwrap();
        assert_eq!(u5.unit, (Rat::new(d(1), d(2)), Rat::new(d(1), d(2))));
        assert_eq!(u5.v, (Rat::new(d(3), d(2)), Rat::new(d(1), d(2))));
        let u106 = fundamental_unit(&d(106)).unwrap();
        assert_eq!(u106.v, (ri(&d(32080051)), ri(&d(3115890))));
        assert!(fundamental_unit(&d(12)).is_err());
    }

    #[test]
    fn second_root_106() {
        let r = rank2_second_root(&d(106)).unwrap();
        assert_eq!(r.alpha, (ri(&d(41234)), ri(&d(4005))));
        assert_eq!(r.norm, ri(&d(106)));
        assert_eq!(r.batch, d(4005));
    }

    #[test]
    fn vinberg_small_chambers() {
        let l = Lattice::diagonal(&[1, 1, -1]);
        let k = ivec(&[0, 0, 1]);
        let b0 = vec![ivec(&[0, -1, 0]), ivec(&[-1, 1, 0])];
        let out = vinberg_run(&l, &k, &b0, &VinbergOptions::default()).unwrap();
        assert_eq!(out.accepted, vec![ivec(&[1, 1, 1])]);
        assert!(!out.exhausted);

        let l = Lattice::diagonal(&[1, -2]);
        let out = vinberg_run(&l, &ivec(&[0, 1]), &[ivec(&[-1, 0])], &VinbergOptions::default()).unwrap();
        assert_eq!(out.accepted, vec![ivec(&[2, 1])]);
    }

    #[test]
    fn vinberg_rejects_bad_input() {
        let l = Lattice::diagonal(&[1, 1, -1]);
        let opts = VinbergOptions::default();
        assert!(vinberg_run(&l, &ivec(&[1, 0, 0]), &[], &opts).is_err());
        assert!(vinberg_run(&l, &ivec(&[0, 0, 2]), &[], &opts).is_err());
        assert!(vinberg_run(&l, &ivec(&[0, 0, 1]), &[ivec(&[1, 0, 1])], &opts).is_err());
    }
}
