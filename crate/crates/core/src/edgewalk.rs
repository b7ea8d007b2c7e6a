//! Walking along the edges of a Weyl chamber from corner to corner, and
//! exploring the whole chamber by repeated walks.

use std::collections::{HashMap, HashSet, VecDeque};

use num::{Integer, One, Signed, Zero};
use rayon::prelude::*;

use crate::arith::{gcd_all, lcm_denominators, primitive_q, ri, to_ivec, to_qvec, IVec, Int, QVec, Rat};
use crate::batch0::cuspidal_batch0;
use crate::dynkin::{diagram_from_roots, spherical_extensions, DiagramClass, Extension, NormedDynkinDiagram};
use crate::lattice::{CosetLattice, Lattice};
use crate::linalg::{hnf_rows, inertia, int_solve, integerize_system, inverse_q, mat_vec_q, nullspace_q, rank_q};
use crate::shortvec2d::{mat_apply, mat_identity, mat_mul, Mat2, PlaneFrame};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CornerKind {
    Ordinary,
    Ideal,
}

/// A corner of a chamber with the simple roots orthogonal to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Corner {
    pub kind: CornerKind,
    pub vector: IVec,
    pub roots: Vec<IVec>,
}

fn gram_of(lattice: &Lattice, vs: &[IVec]) -> Vec<QVec> {
    vs.iter().map(|a| vs.iter().map(|b| lattice.inner(a, b)).collect()).collect()
}

fn positive_definite(gram: &[QVec]) -> bool {
    inertia(gram).0 == gram.len()
}

impl Corner {
    /// Checks the local data: an ordinary corner needs a rank-n spherical
    /// system, an ideal one a cuspidal system (empty in rank 2).
    pub fn new(lattice: &Lattice, vector: IVec, roots: Vec<IVec>) -> Result<Self> {
        if !lattice.is_lorentzian() {
            return Err(Error::Precondition("lattice is not Lorentzian".into()));
        }
        let d = lattice.rank();
        if vector.len() != d {
            return Err(Error::Dimension { expected: d, got: vector.len() });
        }
        if !gcd_all(&vector).is_one() {
            return Err(Error::Precondition("corner vector is not primitive".into()));
        }
        for r in &roots {
            if r.len() != d {
                return Err(Error::Dimension { expected: d, got: r.len() });
            }
            if !lattice.is_root(r)? {
                return Err(Error::Precondition(format!("{r:?} is not a root")));
            }
            if !lattice.inner(r, &vector).is_zero() {
                return Err(Error::Precondition(format!("{r:?} is not orthogonal to the corner")));
            }
        }
        let norm = lattice.norm(&vector);
        let kind = if norm.is_negative() {
            CornerKind::Ordinary
        } else if norm.is_zero() {
            CornerKind::Ideal
        } else {
            return Err(Error::Precondition("corner vector is spacelike".into()));
        };
        let diagram = diagram_from_roots(lattice, &roots)?;
        let ok = match kind {
            CornerKind::Ordinary => roots.len() + 1 == d && diagram.classify() == DiagramClass::Spherical,
            CornerKind::Ideal if d == 2 => roots.is_empty(),
            CornerKind::Ideal => {
                diagram.classify() == DiagramClass::Cuspidal
                    && rank_q(&gram_of(lattice, &roots)) + 2 == d
            }
        };
        if !ok {
            return Err(Error::Precondition(format!(
                "roots at {vector:?} do not form the local simple system of a corner"
            )));
        }
        Ok(Corner { kind, vector, roots })
    }

    /// The rays leaving this corner: one per set of n−1 local roots with
    /// positive-definite span.
    pub fn rays(&self, lattice: &Lattice) -> Vec<Ray> {
        let size = lattice.rank() - 2;
        let mut out = Vec::new();
        let mut chosen = Vec::new();
        subsets(self.roots.len(), size, 0, &mut chosen, &mut |idx| {
            let edge: Vec<IVec> = idx.iter().map(|&i| self.roots[i].clone()).collect();
            if positive_definite(&gram_of(lattice, &edge)) {
                out.push(Ray { corner: self.clone(), edge_roots: edge });
            }
        });
        out
    }
}

fn subsets(n: usize, size: usize, start: usize, chosen: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if chosen.len() == size {
        f(chosen);
        return;
    }
    for i in start..n {
        chosen.push(i);
        subsets(n, size, i + 1, chosen, f);
        chosen.pop();
    }
}

/// An edge leaving a corner, named by the simple roots orthogonal to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ray {
    pub corner: Corner,
    pub edge_roots: Vec<IVec>,
}

pub type RayKey = (IVec, Vec<IVec>);

impl Ray {
    pub fn key(&self) -> RayKey {
        ray_key(&self.corner.vector, &self.edge_roots)
    }
}

fn ray_key(corner: &[Int], edge_roots: &[IVec]) -> RayKey {
    let mut e = edge_roots.to_vec();
    e.sort();
    (corner.to_vec(), e)
}

/// Orthogonal projection onto the span of `u_basis`.
pub fn project_u(lattice: &Lattice, u_basis: &[IVec], v: &[Rat]) -> Result<QVec> {
    let mut out = vec![Rat::zero(); lattice.rank()];
    if u_basis.is_empty() {
        return Ok(out);
    }
    let inv = inverse_q(&gram_of(lattice, u_basis)).ok_or(Error::Degenerate)?;
    let products: QVec = u_basis.iter().map(|u| lattice.inner_iq(u, v)).collect();
    for (c, u) in mat_vec_q(&inv, &products).iter().zip(u_basis) {
        for (o, x) in out.iter_mut().zip(u) {
            *o += c * ri(x);
        }
    }
    Ok(out)
}

/// Orthogonal projection onto the complement of the span of `u_basis`.
pub fn project_p(lattice: &Lattice, u_basis: &[IVec], v: &[Rat]) -> Result<QVec> {
    let pu = project_u(lattice, u_basis, v)?;
    Ok(v.iter().zip(&pu).map(|(a, b)| a - b).collect())
}

/// A suggested root: its norm, its extension of the edge diagram, its
/// parts along the edge span and in the plane, and the root itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub norm: Int,
    pub extension: Extension,
    pub u: QVec,
    pub residual_norm: Rat,
    pub residue: QVec,
    pub alpha: IVec,
}

/// Geometry of one ray shared by all norms.
struct EdgeGeometry {
    k: IVec,
    u: Vec<IVec>,
    diagram: NormedDynkinDiagram,
    /// Rational basis of the plane orthogonal to the edge roots.
    plane: [QVec; 2],
    /// Ambient vector fixing the side of ℝk the ray leaves into.
    witness: QVec,
}

/// One extension with a defined residual coset.
struct Residual {
    ext: Extension,
    u: QVec,
    norm: Rat,
    coset: CosetLattice,
}

/// The plane lattice π_P(L_N) with its frame and residual data.
struct NormPlane {
    n: Int,
    basis: [QVec; 2],
    frame: PlaneFrame,
    sub: CosetLattice,
    residuals: Vec<Residual>,
}

impl NormPlane {
    fn ambient(&self, c: &[Int]) -> QVec {
        (0..self.basis[0].len()).map(|i| ri(&c[0]) * &self.basis[0][i] + ri(&c[1]) * &self.basis[1][i]).collect()
    }
}

/// Cached per-lattice data for walking.
pub struct Walker<'a> {
    lattice: &'a Lattice,
    constraint: Vec<(Int, CosetLattice)>,
}

fn plane_coords(lattice: &Lattice, basis: &[QVec; 2], x: &[Rat]) -> Result<QVec> {
    let h: Vec<QVec> = (0..2).map(|i| (0..2).map(|j| lattice.inner_q(&basis[i], &basis[j])).collect()).collect();
    let inv = inverse_q(&h).ok_or(Error::Degenerate)?;
    let p: QVec = basis.iter().map(|b| lattice.inner_q(b, x)).collect();
    Ok(mat_vec_q(&inv, &p))
}

impl<'a> Walker<'a> {
    pub fn new(lattice: &'a Lattice) -> Result<Self> {
        if !lattice.is_lorentzian() {
            return Err(Error::Precondition("lattice is not Lorentzian".into()));
        }
        let constraint = lattice
            .root_norm_menu()?
            .into_iter()
            .map(|n| lattice.constraint_lattice(&n).map(|c| (n, c)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Walker { lattice, constraint })
    }

    pub fn norms(&self) -> Vec<Int> {
        self.constraint.iter().map(|(n, _)| n.clone()).collect()
    }

    fn geometry(&self, ray: &Ray) -> Result<EdgeGeometry> {
        let l = self.lattice;
        let k = ray.corner.vector.clone();
        let u = ray.edge_roots.clone();
        if u.len() + 2 != l.rank() || !u.iter().all(|r| ray.corner.roots.contains(r)) {
            return Err(Error::Precondition("edge roots must be n-1 of the corner's roots".into()));
        }
        if !positive_definite(&gram_of(l, &u)) {
            return Err(Error::Frame("edge roots do not span a positive-definite space".into()));
        }
        let rows: Vec<QVec> = u.iter().map(|r| l.apply(r)).collect();
        let ns = nullspace_q(&rows, l.rank());
        let plane = [ns[0].clone(), ns[1].clone()];
        let kq = to_qvec(&k);
        let witness = match ray.corner.kind {
            CornerKind::Ordinary => {
                // The direction orthogonal to k in the plane, pointing away
                // from the mirror of the one local root not on the edge.
                let left: Vec<&IVec> = ray.corner.roots.iter().filter(|r| !u.contains(r)).collect();
                let [beta] = left[..] else {
                    return Err(Error::Precondition("ordinary corner needs exactly one root off the edge".into()));
                };
                let kp: QVec = plane.iter().map(|p| l.inner_q(p, &kq)).collect();
                let d: QVec = (0..l.rank()).map(|i| &kp[1] * &plane[0][i] - &kp[0] * &plane[1][i]).collect();
                let s = l.inner_iq(beta, &d);
                if s.is_zero() {
                    return Err(Error::Frame("edge direction is orthogonal to the remaining root".into()));
                }
                if s.is_positive() {
                    d.iter().map(|x| -x).collect()
                } else {
                    d
                }
            }
            CornerKind::Ideal => {
                let p = plane
                    .iter()
                    .find(|p| !l.inner_q(p, &kq).is_zero())
                    .ok_or_else(|| Error::Frame("plane is degenerate".into()))?;
                if l.inner_q(p, &kq).is_negative() {
                    p.clone()
                } else {
                    p.iter().map(|x| -x).collect()
                }
            }
        };
        let diagram = diagram_from_roots(l, &u)?;
        Ok(EdgeGeometry { k, u, diagram, plane, witness })
    }

    fn norm_plane(&self, geom: &EdgeGeometry, idx: usize) -> Result<NormPlane> {
        let l = self.lattice;
        let (n, ln) = &self.constraint[idx];
        // Basis of π_P(L_N): project, write in plane coordinates, HNF.
        let coords: Vec<QVec> = ln
            .basis()
            .iter()
            .map(|b| project_p(l, &geom.u, &to_qvec(b)).and_then(|p| plane_coords(l, &geom.plane, &p)))
            .collect::<Result<_>>()?;
        let den = coords.iter().fold(Int::one(), |acc, c| acc.lcm(&lcm_denominators(c)));
        let scaled: Vec<IVec> = coords.iter().map(|c| c.iter().map(|x| (x * ri(&den)).to_integer()).collect()).collect();
        let h = hnf_rows(&scaled);
        if h.len() != 2 {
            return Err(Error::Internal("projected constraint lattice is not of rank 2".into()));
        }
        let to_amb = |row: &IVec| -> QVec {
            (0..l.rank())
                .map(|i| (ri(&row[0]) * &geom.plane[0][i] + ri(&row[1]) * &geom.plane[1][i]) / ri(&den))
                .collect()
        };
        let basis = [to_amb(&h[0]), to_amb(&h[1])];
        let gram: Vec<QVec> = (0..2).map(|i| (0..2).map(|j| l.inner_q(&basis[i], &basis[j])).collect()).collect();
        let k2 = plane_coords(l, &basis, &to_qvec(&geom.k))?;
        let w2 = plane_coords(l, &basis, &geom.witness)?;
        let frame = PlaneFrame::new(&gram, &k2, &w2)?;
        let int_coords = |x: &[Rat]| -> Result<IVec> {
            to_ivec(&plane_coords(l, &basis, x)?).ok_or_else(|| Error::Internal("vector is not in the plane lattice".into()))
        };

        let uq: Vec<QVec> = geom.u.iter().map(|r| to_qvec(r)).collect();
        let sub_gens = l
            .orthogonal_part(ln.basis(), &uq)
            .iter()
            .map(|v| int_coords(&to_qvec(v)))
            .collect::<Result<Vec<_>>>()?;
        let sub = CosetLattice::sublattice(&sub_gens, 2);

        // Inner products of L_N basis vectors with the edge roots.
        let a: Vec<QVec> = geom.u.iter().map(|r| ln.basis().iter().map(|b| l.inner(r, b)).collect()).collect();
        let mut residuals = Vec::new();
        for ext in spherical_extensions(&geom.diagram, &ri(n))? {
            let products = ext.inner_products(&geom.diagram);
            let u = project_u_from_products(l, &geom.u, &products)?;
            let norm = ri(n) - l.norm_q(&u);
            if !norm.is_positive() {
                continue;
            }
            // Some v ∈ L_N with v·u_i = products_i.
            let (ia, ib) = integerize_system(&a, &products);
            let Some(c) = int_solve(&ia, &ib, ln.basis().len()) else { continue };
            let mut v = vec![Rat::zero(); l.rank()];
            for (ci, b) in c.iter().zip(ln.basis()) {
                for (x, y) in v.iter_mut().zip(b) {
                    *x += ri(ci) * ri(y);
                }
            }
            let offset = int_coords(&project_p(l, &geom.u, &v)?)?;
            residuals.push(Residual { ext, u, norm, coset: sub.translate(to_qvec(&offset)) });
        }
        Ok(NormPlane { n: n.clone(), basis, frame, sub, residuals })
    }

    /// Primitive vectors of the plane lattice after the bottom ray, up to
    /// norm `m`, in sector order; anisotropic planes are extended over
    /// enough periods to cover every residual coset.
    fn sweep(&self, plane: &NormPlane, m: &Rat) -> Result<Vec<IVec>> {
        let frame = &plane.frame;
        let r0 = frame.bottom().to_vec();
        if frame.is_isotropic() {
            return Ok(frame.isotropic_sweep(m, &r0)?.into_iter().filter(|r| !frame.norm(r).is_zero()).collect());
        }
        let l0 = frame.self_supplement(&r0)?;
        let Some(period) = frame.anisotropic_period(m, &r0, &l0)? else {
            return Ok(Vec::new());
        };
        let reps = coset_period(&period.g, plane.sub.basis());
        let mut out = Vec::new();
        let mut g = mat_identity();
        for _ in 0..reps {
            out.extend(period.roots.iter().map(|r| mat_apply(&g, r)));
            g = mat_mul(&period.g, &g);
        }
        Ok(out)
    }

    fn candidate(&self, geom: &EdgeGeometry, plane: &NormPlane, res: &Residual, s: &[Int]) -> Result<Candidate> {
        let residue = plane.ambient(s);
        let alpha = to_ivec(&res.u.iter().zip(&residue).map(|(a, b)| a + b).collect::<QVec>())
            .ok_or_else(|| Error::Internal("candidate is not a lattice vector".into()))?;
        debug_assert_eq!(self.lattice.norm(&alpha), ri(&plane.n));
        let _ = geom;
        Ok(Candidate {
            norm: plane.n.clone(),
            extension: res.ext.clone(),
            u: res.u.clone(),
            residual_norm: res.norm.clone(),
            residue,
            alpha,
        })
    }

    /// Candidates of norm N using one sweep up to the largest residual norm,
    /// stopping at the first primitive direction that yields any.
    pub fn candidates_for_norm(&self, ray: &Ray, n: &Int) -> Result<Vec<Candidate>> {
        let geom = self.geometry(ray)?;
        let idx = self.norm_index(n)?;
        self.batched(&geom, idx)
    }

    fn norm_index(&self, n: &Int) -> Result<usize> {
        self.constraint
            .iter()
            .position(|(m, _)| m == n)
            .ok_or_else(|| Error::Precondition(format!("{n} is not a possible root norm")))
    }

    fn batched(&self, geom: &EdgeGeometry, idx: usize) -> Result<Vec<Candidate>> {
        let plane = self.norm_plane(geom, idx)?;
        let Some(m) = plane.residuals.iter().map(|r| r.norm.clone()).max() else {
            return Ok(Vec::new());
        };
        for r in self.sweep(&plane, &m)? {
            let rr = plane.frame.true_norm(&r);
            let mut found = Vec::new();
            for res in &plane.residuals {
                let mut j = Int::one();
                while ri(&(&j * &j)) * &rr <= res.norm {
                    let s: IVec = r.iter().map(|x| x * &j).collect();
                    if ri(&(&j * &j)) * &rr == res.norm && res.coset.contains_int(&s) {
                        found.push(self.candidate(geom, &plane, res, &s)?);
                        break;
                    }
                    j += 1;
                }
            }
            if !found.is_empty() {
                return Ok(found);
            }
        }
        Ok(Vec::new())
    }

    /// Candidates of norm N built one extension at a time, each with its own
    /// sweep up to its residual norm.
    pub fn naive_candidates_for_norm(&self, ray: &Ray, n: &Int) -> Result<Vec<Candidate>> {
        let geom = self.geometry(ray)?;
        let plane = self.norm_plane(&geom, self.norm_index(n)?)?;
        let mut out = Vec::new();
        for res in &plane.residuals {
            'sweep: for r in self.sweep(&plane, &res.norm)? {
                let rr = plane.frame.true_norm(&r);
                let mut j = Int::one();
                while ri(&(&j * &j)) * &rr <= res.norm {
                    let s: IVec = r.iter().map(|x| x * &j).collect();
                    if ri(&(&j * &j)) * &rr == res.norm && res.coset.contains_int(&s) {
                        out.push(self.candidate(&geom, &plane, res, &s)?);
                        break 'sweep;
                    }
                    j += 1;
                }
            }
        }
        Ok(out)
    }

    /// The sector vectors examined for coset matching in an anisotropic
    /// plane, and how many periods they span.
    pub fn anisotropic_period_for_cosets(&self, ray: &Ray, n: &Int) -> Result<(usize, Vec<QVec>)> {
        let geom = self.geometry(ray)?;
        let plane = self.norm_plane(&geom, self.norm_index(n)?)?;
        if plane.frame.is_isotropic() {
            return Err(Error::Isotropic);
        }
        let Some(m) = plane.residuals.iter().map(|r| r.norm.clone()).max() else {
            return Ok((0, Vec::new()));
        };
        let r0 = plane.frame.bottom().to_vec();
        let l0 = plane.frame.self_supplement(&r0)?;
        let Some(period) = plane.frame.anisotropic_period(&m, &r0, &l0)? else {
            return Ok((0, Vec::new()));
        };
        let reps = coset_period(&period.g, plane.sub.basis());
        let vs = self.sweep(&plane, &m)?;
        Ok((reps, vs.iter().map(|v| plane.ambient(v)).collect()))
    }

    /// Walks from the ray's corner to the corner at the other end.
    pub fn walk(&self, ray: &Ray) -> Result<WalkEnd> {
        self.walk_with(ray, false)
    }

    fn walk_with(&self, ray: &Ray, naive: bool) -> Result<WalkEnd> {
        let l = self.lattice;
        let geom = self.geometry(ray)?;
        let per_norm: Vec<Result<Vec<Candidate>>> = (0..self.constraint.len())
            .into_par_iter()
            .map(|i| {
                if naive {
                    let n = self.constraint[i].0.clone();
                    self.naive_candidates_for_norm(ray, &n)
                } else {
                    self.batched(&geom, i)
                }
            })
            .collect();
        let mut cands = Vec::new();
        for c in per_norm {
            cands.extend(c?);
        }
        if cands.is_empty() {
            return self.ideal_end(&geom);
        }
        let kq = to_qvec(&geom.k);
        let keys: Vec<(Rat, Rat, Int)> = cands
            .iter()
            .map(|c| {
                let ks = l.inner_q(&kq, &c.residue);
                let sq = &ks * &ks;
                (&sq / &c.residual_norm, sq / ri(&c.norm), c.norm.clone())
            })
            .collect();
        let best = (0..cands.len()).min_by(|&a, &b| keys[a].cmp(&keys[b])).expect("nonempty");
        if let Some(other) = (0..cands.len()).find(|&i| i != best && keys[i] == keys[best]) {
            return Err(Error::Internal(format!(
                "edge walk found two equally good roots {:?} and {:?}",
                cands[best].alpha, cands[other].alpha
            )));
        }
        let alpha = cands[best].alpha.clone();
        if !l.is_root(&alpha)? {
            return Err(Error::Internal(format!("selected vector {alpha:?} is not a root")));
        }
        let mut rows: Vec<QVec> = geom.u.iter().map(|r| l.apply(r)).collect();
        rows.push(l.apply(&alpha));
        let line = nullspace_q(&rows, l.rank());
        let mut kk = primitive_q(&line[0]).expect("nonzero");
        if l.inner(&kk, &geom.k).is_positive() {
            kk = kk.iter().map(|x| -x).collect();
        }
        let mut roots = geom.u.clone();
        roots.push(alpha.clone());
        let corner = Corner::new(l, kk, roots)
            .map_err(|e| Error::Internal(format!("walk ended at an invalid corner: {e}")))?;
        if corner.kind != CornerKind::Ordinary {
            return Err(Error::Internal("walk ended at a non-timelike corner".into()));
        }
        Ok(WalkEnd::Corner { corner, new_root: Some(alpha) })
    }

    fn ideal_end(&self, geom: &EdgeGeometry) -> Result<WalkEnd> {
        let l = self.lattice;
        // The top ray of the sector is rational only in an isotropic plane.
        let idx = 0;
        let plane = self.norm_plane(geom, idx)?;
        if !plane.frame.is_isotropic() {
            return Ok(WalkEnd::Unbounded);
        }
        let top = plane
            .frame
            .isotropic_sweep(&Rat::one(), plane.frame.bottom())?
            .pop()
            .expect("sweep ends at the top ray");
        let kk = primitive_q(&plane.ambient(&top)).expect("nonzero");
        let mut roots = geom.u.clone();
        roots.extend(cuspidal_batch0(l, &kk, &geom.u, None)?);
        let corner = Corner::new(l, kk, roots)
            .map_err(|e| Error::Internal(format!("walk ended at an invalid ideal corner: {e}")))?;
        Ok(WalkEnd::Corner { corner, new_root: None })
    }
}

/// The least m ≥ 1 with (g^m − 1)·Z² inside the sublattice spanned by `sub`,
/// so that g^m fixes every coset of it.
pub fn coset_period(g: &Mat2, sub: &[IVec]) -> usize {
    let c = CosetLattice::sublattice(sub, 2);
    let mut p = g.clone();
    let mut m = 1;
    loop {
        let cols = [
            vec![&p[0][0] - Int::one(), p[1][0].clone()],
            vec![p[0][1].clone(), &p[1][1] - Int::one()],
        ];
        if cols.iter().all(|v| c.contains_int(v)) {
            return m;
        }
        p = mat_mul(g, &p);
        m += 1;
    }
}

fn project_u_from_products(lattice: &Lattice, u: &[IVec], products: &[Rat]) -> Result<QVec> {
    let mut out = vec![Rat::zero(); lattice.rank()];
    if u.is_empty() {
        return Ok(out);
    }
    let inv = inverse_q(&gram_of(lattice, u)).ok_or(Error::Degenerate)?;
    for (c, r) in mat_vec_q(&inv, products).iter().zip(u) {
        for (o, x) in out.iter_mut().zip(r) {
            *o += c * ri(x);
        }
    }
    Ok(out)
}

/// Where a walk ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WalkEnd {
    /// Another corner; `new_root` is the root met there (absent at an ideal end).
    Corner { corner: Corner, new_root: Option<IVec> },
    /// The edge runs to an irrational point at infinity.
    Unbounded,
}

/// Walks one ray.
pub fn walk(lattice: &Lattice, ray: &Ray) -> Result<WalkEnd> {
    Walker::new(lattice)?.walk(ray)
}

/// Walks one ray building each candidate separately.
pub fn walk_naive(lattice: &Lattice, ray: &Ray) -> Result<WalkEnd> {
    Walker::new(lattice)?.walk_with(ray, true)
}

pub fn candidates_for_norm(lattice: &Lattice, ray: &Ray, n: &Int) -> Result<Vec<Candidate>> {
    Walker::new(lattice)?.candidates_for_norm(ray, n)
}

pub fn anisotropic_period_for_cosets(lattice: &Lattice, ray: &Ray, n: &Int) -> Result<(usize, Vec<QVec>)> {
    Walker::new(lattice)?.anisotropic_period_for_cosets(ray, n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiniteVolume {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Debug)]
pub struct ExploreBudget {
    pub max_walks: usize,
    pub max_corners: usize,
}

impl Default for ExploreBudget {
    fn default() -> Self {
        ExploreBudget { max_walks: 10_000, max_corners: 10_000 }
    }
}

#[derive(Clone, Debug)]
pub struct Chamber {
    pub corners: Vec<Corner>,
    pub simple_roots: Vec<IVec>,
    pub walks: usize,
    pub finite_volume: FiniteVolume,
    /// Rays left unexplored when the budget ran out.
    pub unexplored: usize,
    /// Edges found running to irrational points at infinity.
    pub unbounded_edges: usize,
}

/// Breadth-first exploration of the chamber from a corner.
pub fn explore(lattice: &Lattice, start: &Corner, budget: &ExploreBudget) -> Result<Chamber> {
    let walker = Walker::new(lattice)?;
    Corner::new(lattice, start.vector.clone(), start.roots.clone())?;
    let mut corners = vec![start.clone()];
    let mut known: HashMap<IVec, usize> = HashMap::from([(start.vector.clone(), 0)]);
    let mut roots: Vec<IVec> = start.roots.clone();
    let mut explored: HashSet<RayKey> = HashSet::new();
    let mut queue: VecDeque<Ray> = start.rays(lattice).into();
    let mut walks = 0;
    let mut unbounded = 0;
    let mut exhausted = false;
    while let Some(ray) = queue.pop_front() {
        let key = ray.key();
        if explored.contains(&key) {
            continue;
        }
        if walks >= budget.max_walks {
            queue.push_front(ray);
            exhausted = true;
            break;
        }
        explored.insert(key);
        walks += 1;
        match walker.walk(&ray)? {
            WalkEnd::Unbounded => unbounded += 1,
            WalkEnd::Corner { corner, .. } => {
                explored.insert(ray_key(&corner.vector, &ray.edge_roots));
                if known.contains_key(&corner.vector) {
                    continue;
                }
                if corners.len() >= budget.max_corners {
                    exhausted = true;
                    break;
                }
                known.insert(corner.vector.clone(), corners.len());
                for r in &corner.roots {
                    if !roots.contains(r) {
                        roots.push(r.clone());
                    }
                }
                queue.extend(corner.rays(lattice).into_iter().filter(|r| !explored.contains(&r.key())));
                corners.push(corner);
            }
        }
    }
    let unexplored = queue.iter().filter(|r| !explored.contains(&r.key())).count();
    let rank2_ideal = lattice.rank() == 2 && corners.iter().any(|c| c.kind == CornerKind::Ideal);
    let finite_volume = if unbounded > 0 || (rank2_ideal && !exhausted) {
        FiniteVolume::No
    } else if exhausted && unexplored > 0 {
        FiniteVolume::Unknown
    } else {
        FiniteVolume::Yes
    };
    Ok(Chamber { corners, simple_roots: roots, walks, finite_volume, unexplored, unbounded_edges: unbounded })
}

/// Whether some bijection of local roots matches all inner products, and
/// the corner vectors have the same kind and norm. A necessary condition
/// for the corners to be equivalent under the lattice's isometries.
pub fn corner_equivalent_local(lattice: &Lattice, a: &Corner, b: &Corner) -> bool {
    if a.kind != b.kind || a.roots.len() != b.roots.len() || lattice.norm(&a.vector) != lattice.norm(&b.vector) {
        return false;
    }
    let ga = gram_of(lattice, &a.roots);
    let gb = gram_of(lattice, &b.roots);
    let mut perm: Vec<usize> = Vec::new();
    let mut used = vec![false; b.roots.len()];
    match_roots(&ga, &gb, &mut perm, &mut used)
}

fn match_roots(ga: &[QVec], gb: &[QVec], perm: &mut Vec<usize>, used: &mut [bool]) -> bool {
    let i = perm.len();
    if i == ga.len() {
        return true;
    }
    for j in 0..gb.len() {
        if used[j] || ga[i][i] != gb[j][j] {
            continue;
        }
        if (0..i).all(|p| ga[i][p] == gb[j][perm[p]]) {
            used[j] = true;
            perm.push(j);
            if match_roots(ga, gb, perm, used) {
                return true;
            }
            perm.pop();
            used[j] = false;
        }
    }
    false
}

/// Looks for a corner among primitive vectors of non-positive norm with
/// coordinates up to `bound` in absolute value.
pub fn find_corner(lattice: &Lattice, bound: i64) -> Result<Option<Corner>> {
    let d = lattice.rank();
    let mut vs: Vec<IVec> = Vec::new();
    let mut cur = vec![-bound; d];
    loop {
        let v: IVec = cur.iter().map(|&x| Int::from(x)).collect();
        if gcd_all(&v).is_one() && !lattice.norm(&v).is_positive() {
            vs.push(v);
        }
        let mut i = 0;
        while i < d && cur[i] == bound {
            cur[i] = -bound;
            i += 1;
        }
        if i == d {
            break;
        }
        cur[i] += 1;
    }
    // Timelike first, smallest |k²| first, then lexicographic.
    vs.sort_by(|a, b| {
        let (na, nb) = (lattice.norm(a), lattice.norm(b));
        na.is_zero().cmp(&nb.is_zero()).then_with(|| nb.cmp(&na)).then_with(|| a.cmp(b))
    });
    for v in vs {
        let Ok(roots) = crate::batch0::auto_batch0(lattice, &v) else { continue };
        if let Ok(c) = Corner::new(lattice, v, roots) {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ivec;

    fn ordinary(l: &Lattice, k: &[i64], roots: &[&[i64]]) -> Corner {
        Corner::new(l, ivec(k), roots.iter().map(|r| ivec(r)).collect()).unwrap()
    }

    #[test]
    fn projections() {
        let l = Lattice::diagonal(&[1, 1, -1]);
        let u = vec![ivec(&[1, 0, 0])];
        let v = to_qvec(&ivec(&[2, 3, 4]));
        assert_eq!(project_u(&l, &u, &v).unwrap(), to_qvec(&ivec(&[2, 0, 0])));
        assert_eq!(project_p(&l, &u, &v).unwrap(), to_qvec(&ivec(&[0, 3, 4])));
    }

    #[test]
    fn walk_in_rank_two() {
        let l = Lattice::diagonal(&[1, -2]);
        let c = ordinary(&l, &[0, 1], &[&[-1, 0]]);
        let ray = c.rays(&l).pop().unwrap();
        let w = Walker::new(&l).unwrap();
        let n1 = w.candidates_for_norm(&ray, &Int::from(1)).unwrap();
        assert_eq!(n1.iter().map(|c| c.alpha.clone()).collect::<Vec<_>>(), vec![ivec(&[3, 2])]);
        let n2 = w.candidates_for_norm(&ray, &Int::from(2)).unwrap();
        assert_eq!(n2.iter().map(|c| c.alpha.clone()).collect::<Vec<_>>(), vec![ivec(&[2, 1])]);
        let n4 = w.candidates_for_norm(&ray, &Int::from(4)).unwrap();
        assert_eq!(n4.iter().map(|c| c.alpha.clone()).collect::<Vec<_>>(), vec![ivec(&[6, 4])]);
        match w.walk(&ray).unwrap() {
            WalkEnd::Corner { corner, new_root } => {
                assert_eq!(corner.vector, ivec(&[1, 1]));
                assert_eq!(new_root, Some(ivec(&[2, 1])));
            }
            other => panic!("{other:?}"),
        }

        let l = Lattice::diagonal(&[1, -1]);
        let c = Corner::new(&l, ivec(&[0, 1]), vec![ivec(&[-1, 0])]).unwrap();
        let ray = c.rays(&l).pop().unwrap();
        for n in [1, 2] {
            assert!(candidates_for_norm(&l, &ray, &Int::from(n)).unwrap().is_empty());
        }
        match walk(&l, &ray).unwrap() {
            WalkEnd::Corner { corner, new_root } => {
                assert_eq!(corner.kind, CornerKind::Ideal);
                assert_eq!(corner.vector, ivec(&[1, 1]));
                assert_eq!(new_root, None);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn walks_in_the_triangle_group() {
        let l = Lattice::diagonal(&[1, 1, -1]);
        let c = ordinary(&l, &[0, 0, 1], &[&[0, -1, 0], &[-1, 1, 0]]);
        let rays = c.rays(&l);
        assert_eq!(rays.len(), 2);
        let by_edge = |e: &[i64]| rays.iter().find(|r| r.edge_roots == vec![ivec(e)]).unwrap().clone();
        match walk(&l, &by_edge(&[-1, 1, 0])).unwrap() {
            WalkEnd::Corner { corner, new_root } => {
                assert_eq!(corner.kind, CornerKind::Ordinary);
                assert_eq!(corner.vector, ivec(&[1, 1, 2]));
                assert_eq!(new_root, Some(ivec(&[1, 1, 1])));
            }
            other => panic!("{other:?}"),
        }
        match walk(&l, &by_edge(&[0, -1, 0])).unwrap() {
            WalkEnd::Corner { corner, new_root } => {
                assert_eq!(corner.kind, CornerKind::Ideal);
                assert_eq!(corner.vector, ivec(&[1, 0, 1]));
                assert_eq!(corner.roots, vec![ivec(&[0, -1, 0]), ivec(&[1, 1, 1])]);
                assert_eq!(new_root, None);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn explore_small_chambers() {
        let l = Lattice::diagonal(&[1, 1, -1]);
        let c = ordinary(&l, &[0, 0, 1], &[&[0, -1, 0], &[-1, 1, 0]]);
        let ch = explore(&l, &c, &ExploreBudget::default()).unwrap();
        assert_eq!(ch.finite_volume, FiniteVolume::Yes);
        assert_eq!(ch.corners.len(), 3);
        assert_eq!(ch.corners.iter().filter(|c| c.kind == CornerKind::Ideal).count(), 1);
        assert_eq!(ch.simple_roots, vec![ivec(&[0, -1, 0]), ivec(&[-1, 1, 0]), ivec(&[1, 1, 1])]);

        let l = Lattice::diagonal(&[1, -2]);
        let c = ordinary(&l, &[0, 1], &[&[-1, 0]]);
        let ch = explore(&l, &c, &ExploreBudget::default()).unwrap();
        assert_eq!(ch.finite_volume, FiniteVolume::Yes);
        assert_eq!(ch.corners.len(), 2);
        assert_eq!(ch.simple_roots, vec![ivec(&[-1, 0]), ivec(&[2, 1])]);
    }

    #[test]
    fn coset_periods() {
        let id: Vec<IVec> = vec![ivec(&[1, 0]), ivec(&[0, 1])];
        let g = [[Int::from(2), Int::from(1)], [Int::from(1), Int::from(1)]];
        assert_eq!(coset_period(&g, &id), 1);
        let shear = [[Int::from(1), Int::from(0)], [Int::from(1), Int::from(1)]];
        assert_eq!(coset_period(&shear, &[ivec(&[1, 0]), ivec(&[0, 2])]), 2);
        assert_eq!(coset_period(&shear, &[ivec(&[1, 0]), ivec(&[0, 3])]), 3);
    }

    #[test]
    fn local_equivalence() {
        let l = Lattice::diagonal(&[1, 1, -1]);
        let a = ordinary(&l, &[0, 0, 1], &[&[0, -1, 0], &[-1, 1, 0]]);
        let b = ordinary(&l, &[0, 0, 1], &[&[-1, 1, 0], &[0, -1, 0]]);
        assert!(corner_equivalent_local(&l, &a, &a));
        assert!(corner_equivalent_local(&l, &a, &b));
        let ideal = Corner::new(&l, ivec(&[1, 0, 1]), vec![ivec(&[0, -1, 0]), ivec(&[1, 1, 1])]).unwrap();
        assert!(!corner_equivalent_local(&l, &a, &ideal));
    }
}
