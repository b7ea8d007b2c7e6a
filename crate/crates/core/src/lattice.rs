//! Lattices with exact rational Gram matrices, constraint lattices, root
//! predicates and short-vector enumeration in positive-definite spans.

use crate::arith::{
    ceil_q, divisors, floor_q, floor_sqrt_q, gcd_all, isqrt, lcm_denominators, ri, sqrt_q, to_qvec, IVec, Int, QVec, Rat,
};
use crate::error::{Error, Result};
use crate::linalg::{hnf_rows, inertia, int_kernel, integerize_system, smith_diagonal};
use num::{One, Signed, Zero};
use serde_json::Value;

/// Inertia of a symmetric form: positive, negative and zero counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Signature {
    pub pos: usize,
    pub neg: usize,
    pub zero: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    gram: Vec<QVec>,
    int_gram: Option<Vec<IVec>>,
}

impl Lattice {
    pub fn new(gram: Vec<QVec>) -> Result<Self> {
        let n = gram.len();
        if n == 0 || gram.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare);
        }
        for i in 0..n {
            for j in i + 1..n {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::NotSymmetric(i, j));
                }
            }
        }
        let int_gram = if gram.iter().all(|r| r.iter().all(|x| x.is_integer())) {
            Some(gram.iter().map(|r| r.iter().map(|x| x.to_integer()).collect()).collect())
        } else {
            None
        };
        Ok(Lattice { gram, int_gram })
    }

    pub fn from_ints(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| Rat::from_integer(Int::from(x))).collect()).collect())
    }

    pub fn diagonal(d: &[i64]) -> Self {
        let n = d.len();
        let rows: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| if i == j { d[i] } else { 0 }).collect()).collect();
        Self::from_ints(&rows).expect("diagonal gram is valid")
    }

    /// Parses `{"gram": [[...], ...]}` with integer or "p/q" entries.
    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let rows = v
            .get("gram")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing \"gram\" array".into()))?;
        let mut gram = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_array().ok_or_else(|| Error::Parse(format!("row {i} is not an array")))?;
            let mut parsed = Vec::new();
            for (j, x) in row.iter().enumerate() {
                parsed.push(parse_rational_value(x).map_err(|e| Error::Parse(format!("entry ({i}, {j}): {e}")))?);
            }
            gram.push(parsed);
        }
        match Self::new(gram) {
            Err(Error::NotSymmetric(i, j)) => Err(Error::Parse(format!(
                "gram is not symmetric: entry ({i}, {j}) differs from entry ({j}, {i})"
            ))),
            other => other,
        }
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[QVec] {
        &self.gram
    }

    pub fn is_integral(&self) -> bool {
        self.int_gram.is_some()
    }

    pub fn int_gram(&self) -> Result<&[IVec]> {
        self.int_gram.as_deref().ok_or(Error::NotIntegral)
    }

    pub fn signature(&self) -> Signature {
        let (pos, neg, zero) = inertia(&self.gram);
        Signature { pos, neg, zero }
    }

    pub fn is_lorentzian(&self) -> bool {
        let s = self.signature();
        s.neg == 1 && s.zero == 0 && s.pos + 1 == self.rank()
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.rank() {
            return Err(Error::Dimension { expected: self.rank(), got: len });
        }
        Ok(())
    }

    /// G·v for an integer vector.
    pub fn apply(&self, v: &[Int]) -> QVec {
        match &self.int_gram {
            Some(g) => g.iter().map(|row| ri(&row.iter().zip(v).map(|(a, b)| a * b).sum::<Int>())).collect(),
            None => self.gram.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * ri(b)).sum()).collect(),
        }
    }

    pub fn apply_q(&self, v: &[Rat]) -> QVec {
        self.gram.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn inner(&self, a: &[Int], b: &[Int]) -> Rat {
        match &self.int_gram {
            Some(g) => {
                let mut s = Int::zero();
                for (i, row) in g.iter().enumerate() {
                    if a[i].is_zero() {
                        continue;
                    }
                    let t: Int = row.iter().zip(b).map(|(x, y)| x * y).sum();
                    s += &a[i] * t;
                }
                ri(&s)
            }
            None => self.apply(b).iter().zip(a).map(|(x, y)| x * ri(y)).sum(),
        }
    }

    pub fn inner_q(&self, a: &[Rat], b: &[Rat]) -> Rat {
        self.apply_q(b).iter().zip(a).map(|(x, y)| x * y).sum()
    }

    pub fn inner_iq(&self, a: &[Int], b: &[Rat]) -> Rat {
        self.apply_q(b).iter().zip(a).map(|(x, y)| x * ri(y)).sum()
    }

    pub fn norm(&self, v: &[Int]) -> Rat {
        self.inner(v, v)
    }

    pub fn norm_q(&self, v: &[Rat]) -> Rat {
        self.inner_q(v, v)
    }

    fn require_integral_nondegenerate(&self) -> Result<&[IVec]> {
        let g = self.int_gram()?;
        if self.signature().zero != 0 {
            return Err(Error::Degenerate);
        }
        Ok(g)
    }

    /// Exponent of the discriminant group: the largest Smith invariant.
    pub fn discriminant_exponent(&self) -> Result<Int> {
        let g = self.require_integral_nondegenerate()?;
        Ok(smith_diagonal(g).into_iter().max().unwrap_or_else(Int::one))
    }

    /// All positive divisors of twice the discriminant exponent.
    pub fn root_norm_menu(&self) -> Result<Vec<Int>> {
        let e = self.discriminant_exponent()?;
        Ok(divisors(&(e * 2)))
    }

    /// The sublattice of vectors v with v·L contained in (N/2)Z.
    pub fn constraint_lattice(&self, n: &Int) -> Result<CosetLattice> {
        let g = self.require_integral_nondegenerate()?;
        if !n.is_positive() {
            return Err(Error::NonPositiveNorm);
        }
        let r = self.rank();
        // (2/N)·G v integral  <=>  2G v = N w for some integer w.
        let rows: Vec<IVec> = (0..r)
            .map(|i| {
                let mut row: IVec = g[i].iter().map(|x| x * 2).collect();
                row.extend((0..r).map(|j| if i == j { -n.clone() } else { Int::zero() }));
                row
            })
            .collect();
        let kernel = int_kernel(&rows, 2 * r);
        let gens: Vec<IVec> = kernel.into_iter().map(|v| v[..r].to_vec()).collect();
        Ok(CosetLattice::sublattice(&gens, r))
    }

    pub fn is_almost_root(&self, v: &[Int]) -> Result<bool> {
        self.check_dim(v.len())?;
        if v.iter().all(Zero::is_zero) {
            return Err(Error::ZeroVector);
        }
        let n = self.norm(v);
        if !n.is_positive() {
            return Ok(false);
        }
        let half = &n / ri(&Int::from(2));
        Ok(self.apply(v).iter().all(|x| (x / &half).is_integer()))
    }

    pub fn is_root(&self, v: &[Int]) -> Result<bool> {
        Ok(self.is_almost_root(v)? && gcd_all(v).is_one())
    }
}

fn parse_rational_value(x: &Value) -> std::result::Result<Rat, String> {
    match x {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rat::from_integer(Int::from(i)))
            } else if let Some(u) = n.as_u64() {
                Ok(Rat::from_integer(Int::from(u)))
            } else {
                Err(format!("{n} is not an integer; use a \"p/q\" string"))
            }
        }
        Value::String(s) => parse_rational(s),
        other => Err(format!("unsupported entry {other}")),
    }
}

/// Parses "p" or "p/q".
pub fn parse_rational(s: &str) -> std::result::Result<Rat, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let n: Int = num.parse().map_err(|_| format!("bad numerator in {s:?}"))?;
    let d: Int = den.parse().map_err(|_| format!("bad denominator in {s:?}"))?;
    if d.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Rat::new(n, d))
}

/// Floor of the square root of a non-negative integer.
pub fn isqrt_floor(n: &Int) -> Result<Int> {
    if n.is_negative() {
        return Err(Error::NegativeSqrt);
    }
    Ok(isqrt(n))
}

/// Divides out the gcd of the coordinates.
pub fn primitive_part(v: &[Int]) -> Result<IVec> {
    crate::arith::primitive(v).ok_or(Error::ZeroVector)
}

/// offset + span_Z(basis), with the basis in row Hermite normal form and the
/// offset reduced modulo the sublattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CosetLattice {
    dim: usize,
    basis: Vec<IVec>,
    offset: QVec,
}

impl CosetLattice {
    pub fn new(generators: &[IVec], offset: QVec) -> Self {
        let dim = offset.len();
        let basis = hnf_rows(generators);
        let mut c = CosetLattice { dim, basis, offset };
        c.offset = c.reduce(&c.offset);
        c
    }

    pub fn sublattice(generators: &[IVec], dim: usize) -> Self {
        Self::new(generators, vec![Rat::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[IVec] {
        &self.basis
    }

    pub fn offset(&self) -> &[Rat] {
        &self.offset
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    fn pivots(&self) -> impl Iterator<Item = (usize, &IVec)> {
        self.basis.iter().map(|row| (row.iter().position(|x| !x.is_zero()).expect("nonzero row"), row))
    }

    /// Canonical representative of v modulo the sublattice.
    pub fn reduce(&self, v: &[Rat]) -> QVec {
        let mut x = v.to_vec();
        for (c, row) in self.pivots() {
            let q = floor_q(&(&x[c] / ri(&row[c])));
            if !q.is_zero() {
                for (xi, r) in x.iter_mut().zip(row) {
                    *xi -= ri(&(&q * r));
                }
            }
        }
        x
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        if v.len() != self.dim {
            return false;
        }
        let mut x: QVec = v.iter().zip(&self.offset).map(|(a, b)| a - b).collect();
        for (c, row) in self.pivots() {
            let q = &x[c] / ri(&row[c]);
            if !q.is_integer() {
                return false;
            }
            if !q.is_zero() {
                for (xi, r) in x.iter_mut().zip(row) {
                    *xi -= &q * ri(r);
                }
            }
        }
        x.iter().all(Zero::is_zero)
    }

    pub fn contains_int(&self, v: &[Int]) -> bool {
        self.contains(&to_qvec(v))
    }

    /// Same sublattice with a different offset.
    pub fn translate(&self, offset: QVec) -> Self {
        let mut c = CosetLattice { dim: self.dim, basis: self.basis.clone(), offset };
        c.offset = c.reduce(&c.offset);
        c
    }
}

/// The integer combination of `basis` with coefficients `coeffs`.
pub fn combine(basis: &[IVec], coeffs: &[Int], dim: usize) -> IVec {
    let mut v = vec![Int::zero(); dim];
    for (c, b) in coeffs.iter().zip(basis) {
        if c.is_zero() {
            continue;
        }
        for (x, y) in v.iter_mut().zip(b) {
            *x += c * y;
        }
    }
    v
}

impl Lattice {
    /// Basis of the vectors in the lattice spanned by `basis` that are
    /// orthogonal to each vector of `ortho`.
    pub fn orthogonal_part(&self, basis: &[IVec], ortho: &[QVec]) -> Vec<IVec> {
        let rows: Vec<QVec> = ortho.iter().map(|o| basis.iter().map(|b| self.inner_iq(b, o)).collect()).collect();
        let zeros = vec![Rat::zero(); rows.len()];
        let (a, _) = integerize_system(&rows, &zeros);
        int_kernel(&a, basis.len()).iter().map(|c| combine(basis, c, self.rank())).collect()
    }
}

/// Norm condition for [`definite_enumerate`].
#[derive(Clone, Debug)]
pub enum NormBound {
    Exactly(Rat),
    AtMost(Rat),
}

/// Fincke–Pohst enumeration over cosets of a fixed sublattice whose span is
/// positive definite. Precomputes the LDLᵀ data once.
#[derive(Clone, Debug)]
pub struct DefiniteEnumerator {
    basis: Vec<IVec>,
    basis_q: Vec<QVec>,
    gb: Vec<QVec>,
    q: Vec<QVec>,
    d: QVec,
    mu: Vec<QVec>,
}

impl DefiniteEnumerator {
    pub fn new(lattice: &Lattice, basis: &[IVec]) -> Result<Self> {
        let m = basis.len();
        let gb: Vec<QVec> = basis.iter().map(|b| lattice.apply(b)).collect();
        let basis_q: Vec<QVec> = basis.iter().map(|b| to_qvec(b)).collect();
        let q: Vec<QVec> = (0..m)
            .map(|i| (0..m).map(|j| gb[j].iter().zip(&basis_q[i]).map(|(x, y)| x * y).sum()).collect())
            .collect();
        let mut a = q.clone();
        let mut d = Vec::with_capacity(m);
        let mut mu = vec![vec![Rat::zero(); m]; m];
        for i in 0..m {
            let di = a[i][i].clone();
            if !di.is_positive() {
                return Err(Error::Indefinite);
            }
            for j in i + 1..m {
                mu[i][j] = &a[i][j] / &di;
            }
            for j in i + 1..m {
                for k in i + 1..m {
                    let t = &di * &mu[i][j] * &mu[i][k];
                    a[j][k] -= t;
                }
            }
            d.push(di);
        }
        Ok(DefiniteEnumerator { basis: basis.to_vec(), basis_q, gb, q, d, mu })
    }

    pub fn basis(&self) -> &[IVec] {
        &self.basis
    }

    /// Vectors of `offset + span(basis)` meeting the bound, lexicographically sorted.
    pub fn enumerate(&self, lattice: &Lattice, offset: &[Rat], bound: &NormBound) -> Vec<QVec> {
        let m = self.basis.len();
        let go = lattice.apply_q(offset);
        let oo: Rat = go.iter().zip(offset).map(|(a, b)| a * b).sum();
        let (target, exact) = match bound {
            NormBound::Exactly(t) => (t.clone(), true),
            NormBound::AtMost(t) => (t.clone(), false),
        };
        let mut out = Vec::new();
        if m == 0 {
            let ok = if exact { oo == target } else { oo <= target };
            if ok {
                out.push(offset.to_vec());
            }
            return out;
        }
        // h_i = b_i·o ; center c = -Q^{-1} h via the LDLᵀ factors.
        let h: QVec = self.gb.iter().map(|g| g.iter().zip(offset).map(|(a, b)| a * b).sum()).collect();
        let c = self.solve_q(&h).into_iter().map(|x| -x).collect::<QVec>();
        let cqc: Rat = (0..m).map(|i| (0..m).map(|j| &c[i] * &self.q[i][j] * &c[j]).sum::<Rat>()).sum();
        let budget = &target - (&oo - &cqc);
        if budget.is_negative() {
            return out;
        }
        let mut z = vec![Int::zero(); m];
        self.search(m - 1, &c, &budget, exact, &Rat::zero(), &mut z, &mut |z| {
            let mut v = offset.to_vec();
            for (zi, b) in z.iter().zip(&self.basis_q) {
                if !zi.is_zero() {
                    let zr = ri(zi);
                    for (x, y) in v.iter_mut().zip(b) {
                        *x += &zr * y;
                    }
                }
            }
            out.push(v);
        });
        out.sort();
        out
    }

    fn solve_q(&self, h: &[Rat]) -> QVec {
        // Q = Uᵀ D U with U unit upper triangular (entries mu).
        let m = h.len();
        let mut y = vec![Rat::zero(); m];
        for i in 0..m {
            let mut s = h[i].clone();
            for j in 0..i {
                s -= &self.mu[j][i] * &self.d[j] * &y[j];
            }
            y[i] = s / &self.d[i];
        }
        let mut x = vec![Rat::zero(); m];
        for i in (0..m).rev() {
            let mut s = y[i].clone();
            for j in i + 1..m {
                s -= &self.mu[i][j] * &x[j];
            }
            x[i] = s;
        }
        x
    }

    #[allow(clippy::too_many_arguments)]
    fn search(
        &self,
        i: usize,
        c: &[Rat],
        budget: &Rat,
        exact: bool,
        partial: &Rat,
        z: &mut Vec<Int>,
        emit: &mut dyn FnMut(&[Int]),
    ) {
        let m = self.basis.len();
        let mut center = c[i].clone();
        for j in i + 1..m {
            center -= &self.mu[i][j] * (ri(&z[j]) - &c[j]);
        }
        let rem = budget - partial;
        if rem.is_negative() {
            return;
        }
        if i == 0 && exact {
            // The last coordinate is pinned: (x - center)^2 = rem / d.
            let Some(s) = sqrt_q(&(&rem / &self.d[0])) else { return };
            let mut xs = vec![&center - &s, &center + &s];
            xs.dedup();
            for x in xs.into_iter().filter(|x| x.is_integer()) {
                z[0] = x.to_integer();
                emit(z);
            }
            z[0] = Int::zero();
            return;
        }
        let Some((lo, hi)) = int_interval(&center, &(&rem / &self.d[i])) else { return };
        let mut x = lo;
        while x <= hi {
            let dx = ri(&x) - &center;
            let p = partial + &self.d[i] * &dx * &dx;
            z[i] = x.clone();
            if i == 0 {
                if !exact || &p == budget {
                    emit(z);
                }
            } else {
                self.search(i - 1, c, budget, exact, &p, z, emit);
            }
            x += 1;
        }
        z[i] = Int::zero();
    }
}

/// All integers x with (x - center)^2 <= rsq.
fn int_interval(center: &Rat, rsq: &Rat) -> Option<(Int, Int)> {
    if rsq.is_negative() {
        return None;
    }
    let s = floor_sqrt_q(rsq);
    let fits = |x: &Int| {
        let d = ri(x) - center;
        &(&d * &d) <= rsq
    };
    let mut lo = floor_q(center) - &s - 1;
    let mut hi = ceil_q(center) + &s + 1;
    while lo <= hi && !fits(&lo) {
        lo += 1;
    }
    while hi >= lo && !fits(&hi) {
        hi -= 1;
    }
    if lo > hi {
        None
    } else {
        Some((lo, hi))
    }
}

/// Vectors of a coset with positive-definite span of given norm (or norm at
/// most the bound), in lexicographic order.
pub fn definite_enumerate(lattice: &Lattice, coset: &CosetLattice, bound: &NormBound) -> Result<Vec<QVec>> {
    let e = DefiniteEnumerator::new(lattice, coset.basis())?;
    Ok(e.enumerate(lattice, coset.offset(), bound))
}

/// Smallest common denominator needed to make a rational vector integral.
pub fn denominator(v: &[Rat]) -> Int {
    lcm_denominators(v)
}
