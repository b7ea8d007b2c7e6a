//! Batch 0: simple systems for the roots orthogonal to a control vector.
//! Spherical (timelike control) and cuspidal (lightlike control) cases.

use num::{Integer, One, Signed, Zero};

use crate::arith::{ceil_q, floor_q, gcd_all, lcm_denominators, primitive, primitive_q, ri, sqrt_q, to_ivec, to_qvec, IVec, Int, QVec, Rat};
use crate::dynkin::{cuspidal_extensions, diagram_from_roots, spherical_extensions};
use crate::lattice::{CosetLattice, DefiniteEnumerator, Lattice, NormBound};
use crate::linalg::{hnf_rows, inertia, int_solve, inverse_q, mat_vec_q, nullspace_q, rank_q};
use crate::vinberg::{approval_filter, Priority};
use crate::{Error, Result};

fn gram_of(lattice: &Lattice, vs: &[IVec]) -> Vec<QVec> {
    vs.iter().map(|a| vs.iter().map(|b| lattice.inner(a, b)).collect()).collect()
}

fn is_positive_definite(gram: &[QVec]) -> bool {
    let (pos, _, _) = inertia(gram);
    pos == gram.len()
}

fn check_roots(lattice: &Lattice, roots: &[IVec]) -> Result<()> {
    for r in roots {
        if r.len() != lattice.rank() {
            return Err(Error::Dimension { expected: lattice.rank(), got: r.len() });
        }
        if !lattice.is_root(r)? {
            return Err(Error::Precondition(format!("{r:?} is not a root")));
        }
    }
    Ok(())
}

fn check_simple(lattice: &Lattice, roots: &[IVec]) -> Result<()> {
    for i in 0..roots.len() {
        for j in 0..i {
            if lattice.inner(&roots[i], &roots[j]).is_positive() {
                return Err(Error::Precondition(format!(
                    "roots {:?} and {:?} have positive inner product",
                    roots[j], roots[i]
                )));
            }
        }
    }
    Ok(())
}

/// The vector of span(`basis`) whose inner products with the basis are `products`.
fn realize_in_span(lattice: &Lattice, basis: &[IVec], products: &[Rat]) -> Result<QVec> {
    let mut x = vec![Rat::zero(); lattice.rank()];
    if basis.is_empty() {
        return Ok(x);
    }
    let inv = inverse_q(&gram_of(lattice, basis)).ok_or(Error::Degenerate)?;
    let coeffs = mat_vec_q(&inv, products);
    for (c, b) in coeffs.iter().zip(basis) {
        for (xi, bi) in x.iter_mut().zip(b) {
            *xi += c * ri(bi);
        }
    }
    Ok(x)
}

/// Given simple roots for the roots in their span V, and one more root
/// independent of them with positive-definite joint span, returns the root
/// completing them to a simple system on the larger span, on the same side
/// as `new_root`.
pub fn spherical_step(lattice: &Lattice, simple: &[IVec], new_root: &IVec) -> Result<IVec> {
    check_roots(lattice, simple)?;
    check_roots(lattice, std::slice::from_ref(new_root))?;
    check_simple(lattice, simple)?;
    let mut all = simple.to_vec();
    all.push(new_root.clone());
    let gram = gram_of(lattice, &all);
    if rank_q(&gram) < all.len() || !is_positive_definite(&gram) {
        return Err(Error::Precondition("roots are dependent or their span is not positive definite".into()));
    }
    if simple.is_empty() {
        return Ok(new_root.clone());
    }
    // Side vector: minus the part of new_root orthogonal to the old span.
    let products: QVec = simple.iter().map(|s| lattice.inner(s, new_root)).collect();
    let proj = realize_in_span(lattice, simple, &products)?;
    let side: QVec = proj.iter().zip(new_root).map(|(p, a)| p - ri(a)).collect();
    let side = primitive_q(&side).ok_or(Error::Degenerate)?;
    let side_norm = lattice.norm(&side);

    let base = diagram_from_roots(lattice, simple)?;
    let mut best: Option<(Priority, IVec)> = None;
    for n in lattice.root_norm_menu()? {
        let nq = ri(&n);
        let ln = lattice.constraint_lattice(&n)?;
        for ext in spherical_extensions(&base, &nq)? {
            let x = realize_in_span(lattice, simple, &ext.inner_products(&base))?;
            let rest = (&nq - lattice.norm_q(&x)) / &side_norm;
            let Some(t) = sqrt_q(&rest) else { continue };
            let cand: QVec = x.iter().zip(&side).map(|(xi, s)| xi - &t * ri(s)).collect();
            let Some(cand) = to_ivec(&cand) else { continue };
            if !ln.contains_int(&cand) {
                continue;
            }
            let p = Priority::new(lattice, &side, &cand)?;
            if best.as_ref().is_none_or(|(bp, _)| p < *bp) {
                best = Some((p, cand));
            }
        }
    }
    best.map(|(_, c)| c).ok_or_else(|| Error::Inconsistent("no candidate root; input is not a root system".into()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphericalBatch0 {
    pub simple: Vec<IVec>,
    /// Whether the independent input roots were already a simple system.
    pub already_simple: bool,
}

/// A simple system for the roots lying in the (positive-definite) span of
/// `roots`. Roots dependent on their predecessors are discarded first.
pub fn spherical_batch0(lattice: &Lattice, roots: &[IVec]) -> Result<SphericalBatch0> {
    check_roots(lattice, roots)?;
    let mut indep: Vec<IVec> = Vec::new();
    for r in roots {
        let mut trial: Vec<QVec> = indep.iter().map(|v| to_qvec(v)).collect();
        trial.push(to_qvec(r));
        if rank_q(&trial) > indep.len() {
            indep.push(r.clone());
        }
    }
    if !is_positive_definite(&gram_of(lattice, &indep)) {
        return Err(Error::Precondition("span of the roots is not positive definite".into()));
    }
    let mut simple: Vec<IVec> = Vec::new();
    let mut already_simple = true;
    for r in indep {
        let next = spherical_step(lattice, &simple, &r)?;
        already_simple &= next == r;
        simple.push(next);
    }
    Ok(SphericalBatch0 { simple, already_simple })
}

/// The lattice vector u + c·k of L_N with the least positive rational c.
/// The admissible c form a union of classes modulo N, so one sweep suffices.
pub fn minimal_positive_lift(lattice: &Lattice, n: &Int, u: &[Rat], k: &[Int]) -> Result<Option<IVec>> {
    let ln = lattice.constraint_lattice(n)?;
    Ok(lift_into(&ln, n, u, k))
}

fn lift_into(ln: &CosetLattice, n: &Int, u: &[Rat], k: &[Int]) -> Option<IVec> {
    // k is primitive, so u + c·k integral pins c modulo 1.
    let bezout = int_solve(&[k.to_vec()], &[Int::one()], k.len())?;
    let c0: Rat = -u.iter().zip(&bezout).map(|(x, l)| x * ri(l)).sum::<Rat>();
    let c0 = &c0 - ri(&ceil_q(&c0)) + Rat::one();
    let at = |c: &Rat| -> Option<IVec> { to_ivec(&u.iter().zip(k).map(|(x, ki)| x + c * ri(ki)).collect::<QVec>()) };
    at(&c0)?;
    let mut s = Int::zero();
    while &s < n {
        let v = at(&(&c0 + ri(&s))).expect("integral");
        if ln.contains_int(&v) {
            return Some(v);
        }
        s += 1;
    }
    None
}

fn check_cusp(lattice: &Lattice, k: &[Int], u_roots: &[IVec]) -> Result<()> {
    if !lattice.is_lorentzian() {
        return Err(Error::Precondition("lattice is not Lorentzian".into()));
    }
    if k.len() != lattice.rank() {
        return Err(Error::Dimension { expected: lattice.rank(), got: k.len() });
    }
    if !lattice.norm(k).is_zero() || k.iter().all(Zero::is_zero) {
        return Err(Error::Precondition("control vector is not lightlike".into()));
    }
    if !gcd_all(k).is_one() {
        return Err(Error::Precondition("control vector is not primitive".into()));
    }
    check_roots(lattice, u_roots)?;
    check_simple(lattice, u_roots)?;
    if u_roots.len() + 2 != lattice.rank() {
        return Err(Error::Precondition(format!(
            "expected {} roots spanning a complement of the control line, got {}",
            lattice.rank() - 2,
            u_roots.len()
        )));
    }
    for u in u_roots {
        if !lattice.inner(u, k).is_zero() {
            return Err(Error::Precondition(format!("{u:?} is not orthogonal to the control vector")));
        }
    }
    if !is_positive_definite(&gram_of(lattice, u_roots)) {
        return Err(Error::Precondition("roots do not span a positive-definite complement".into()));
    }
    Ok(())
}

/// A primitive timelike lattice vector in the plane orthogonal to `u_roots`,
/// future-directed with respect to the lightlike `k`.
pub fn default_cusp_direction(lattice: &Lattice, k: &[Int], u_roots: &[IVec]) -> Result<IVec> {
    let rows: Vec<QVec> = u_roots.iter().map(|u| lattice.apply(u)).collect();
    let plane = nullspace_q(&rows, lattice.rank());
    let kq = to_qvec(k);
    let y = plane
        .iter()
        .find(|p| !lattice.inner_iq(k, p).is_zero())
        .ok_or_else(|| Error::Precondition("plane orthogonal to the roots is degenerate".into()))?;
    let mut y = primitive_q(y).expect("nonzero");
    let mut ky = lattice.inner(k, &y);
    if ky.is_positive() {
        y = y.iter().map(|x| -x).collect();
        ky = -ky;
    }
    // y + s·k has norm y² + 2s(k·y), negative once s exceeds y²/(2|k·y|).
    let s: Int = floor_q(&(lattice.norm(&y) / (ky.abs() * ri(&Int::from(2))))) + 1;
    let s = if s.is_negative() { Int::zero() } else { s };
    let w: QVec = y.iter().zip(&kq).map(|(a, b)| ri(a) + ri(&s) * b).collect();
    Ok(primitive_q(&w).expect("nonzero"))
}

/// The simple roots, beyond `u_roots`, of the chamber at the cusp `k` that
/// has `u_roots` among its simple roots.
pub fn cuspidal_batch0(lattice: &Lattice, k: &[Int], u_roots: &[IVec], k_prime: Option<&IVec>) -> Result<Vec<IVec>> {
    check_cusp(lattice, k, u_roots)?;
    let kp = match k_prime {
        Some(v) => {
            let ok = v.len() == lattice.rank()
                && u_roots.iter().all(|u| lattice.inner(u, v).is_zero())
                && lattice.inner(k, v).is_negative()
                && !lattice.norm(v).is_positive();
            if !ok {
                return Err(Error::Precondition(
                    "auxiliary direction must be future-directed, orthogonal to the roots and off the control line".into(),
                ));
            }
            primitive(v).expect("nonzero")
        }
        None => default_cusp_direction(lattice, k, u_roots)?,
    };
    let base = diagram_from_roots(lattice, u_roots)?;
    let mut cands: Vec<(Priority, IVec)> = Vec::new();
    for n in lattice.root_norm_menu()? {
        let nq = ri(&n);
        let ln = lattice.constraint_lattice(&n)?;
        for ext in cuspidal_extensions(&base, &nq)? {
            let u = realize_in_span(lattice, u_roots, &ext.inner_products(&base))?;
            if let Some(v) = lift_into(&ln, &n, &u, k) {
                cands.push((Priority::new(lattice, &kp, &v)?, v));
            }
        }
    }
    cands.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    cands.dedup_by(|a, b| a.1 == b.1);
    let cands: Vec<IVec> = cands.into_iter().map(|(_, v)| v).collect();
    approval_filter(lattice, &kp, &[], &cands)
}

/// Primitive roots of norm N in the constraint lattice orthogonal to a timelike `k`.
fn roots_orthogonal_timelike(lattice: &Lattice, k: &[Int]) -> Result<Vec<IVec>> {
    let mut out = Vec::new();
    for n in lattice.root_norm_menu()? {
        let ln = lattice.constraint_lattice(&n)?;
        let orth = lattice.orthogonal_part(ln.basis(), &[to_qvec(k)]);
        let e = DefiniteEnumerator::new(lattice, &orth)?;
        let zero = vec![Rat::zero(); lattice.rank()];
        for v in e.enumerate(lattice, &zero, &NormBound::Exactly(ri(&n))) {
            let v = to_ivec(&v).expect("lattice vector");
            if gcd_all(&v).is_one() {
                out.push(v);
            }
        }
    }
    Ok(out)
}

/// One root per class modulo ℝk among roots orthogonal to a lightlike `k`,
/// found by projecting to the complement orthogonal to an auxiliary vector.
fn roots_orthogonal_lightlike(lattice: &Lattice, k: &[Int]) -> Result<Vec<IVec>> {
    let r = lattice.rank();
    let gk = lattice.apply(k);
    let j = gk.iter().position(|x| !x.is_zero()).ok_or(Error::Degenerate)?;
    // y = e_j has y·k ≠ 0; project along k onto y^⊥.
    let yk = gk[j].clone();
    let project = |v: &[Int]| -> QVec {
        let c = lattice.apply(v)[j].clone() / &yk;
        v.iter().zip(k).map(|(a, b)| ri(a) - &c * ri(b)).collect()
    };
    let mut out = Vec::new();
    for n in lattice.root_norm_menu()? {
        let ln = lattice.constraint_lattice(&n)?;
        let orth = lattice.orthogonal_part(ln.basis(), &[to_qvec(k)]);
        let projected: Vec<QVec> = orth.iter().map(|b| project(b)).collect();
        let d = projected.iter().fold(Int::one(), |acc, p| acc.lcm(&lcm_denominators(p)));
        let scaled: Vec<IVec> = projected.iter().map(|p| to_ivec(&p.iter().map(|x| x * ri(&d)).collect::<QVec>()).unwrap()).collect();
        let basis = hnf_rows(&scaled);
        let e = DefiniteEnumerator::new(lattice, &basis)?;
        let zero = vec![Rat::zero(); r];
        for v in e.enumerate(lattice, &zero, &NormBound::Exactly(ri(&n) * ri(&d) * ri(&d))) {
            let u: QVec = v.iter().map(|x| x / ri(&d)).collect();
            if let Some(lift) = lift_into(&ln, &n, &u, k) {
                if gcd_all(&lift).is_one() {
                    out.push(lift);
                }
            }
        }
    }
    Ok(out)
}

/// Batch 0 at a timelike or lightlike control vector, built from the roots
/// orthogonal to it in a deterministic order (norm, then coordinates).
pub fn auto_batch0(lattice: &Lattice, k: &[Int]) -> Result<Vec<IVec>> {
    if k.len() != lattice.rank() {
        return Err(Error::Dimension { expected: lattice.rank(), got: k.len() });
    }
    let kn = lattice.norm(k);
    let sort = |v: &mut Vec<IVec>| v.sort_by(|a, b| lattice.norm(a).cmp(&lattice.norm(b)).then_with(|| a.cmp(b)));
    if kn.is_negative() {
        let mut roots = roots_orthogonal_timelike(lattice, k)?;
        sort(&mut roots);
        if roots.is_empty() {
            return Ok(roots);
        }
        return Ok(spherical_batch0(lattice, &roots)?.simple);
    }
    if !kn.is_zero() {
        return Err(Error::Precondition("control vector is spacelike".into()));
    }
    let mut roots = roots_orthogonal_lightlike(lattice, k)?;
    sort(&mut roots);
    let u_roots = complement_roots(lattice, k, &roots)?;
    let mut all = u_roots.clone();
    all.extend(cuspidal_batch0(lattice, k, &u_roots, None)?);
    Ok(all)
}

/// Greedily picks roots independent modulo ℝk until they span a complement,
/// then replaces them by a simple system of the roots in their span.
pub fn complement_roots(lattice: &Lattice, k: &[Int], roots: &[IVec]) -> Result<Vec<IVec>> {
    let target = lattice.rank() - 2;
    let mut chosen: Vec<IVec> = Vec::new();
    let mut rows: Vec<QVec> = vec![to_qvec(k)];
    for r in roots {
        if chosen.len() == target {
            break;
        }
        let mut trial = rows.clone();
        trial.push(to_qvec(r));
        if rank_q(&trial) == trial.len() {
            rows = trial;
            chosen.push(r.clone());
        }
    }
    if chosen.len() < target {
        return Err(Error::Precondition("roots orthogonal to the control vector do not span its complement".into()));
    }
    if chosen.is_empty() {
        return Ok(chosen);
    }
    Ok(spherical_batch0(lattice, &chosen)?.simple)
}
