//! Normed Dynkin diagrams: construction from roots, classification by exact
//! inertia, and enumeration of one-node spherical and cuspidal extensions.

use crate::arith::{rat, IVec, QVec, Rat};
use crate::error::{Error, Result};
use crate::lattice::{parse_rational, Lattice};
use crate::linalg::{inertia, inverse_q};
use num::{Signed, Zero};
use serde_json::{json, Value};

/// Arrow direction of an oriented bond, read against an ordered pair of nodes.
/// The arrow points from the longer root (tail) to the shorter (tip).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    FirstToSecond,
    SecondToFirst,
}

impl Dir {
    pub fn flip(self) -> Self {
        match self {
            Dir::FirstToSecond => Dir::SecondToFirst,
            Dir::SecondToFirst => Dir::FirstToSecond,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bond {
    None,
    Single,
    Double(Dir),
    Triple(Dir),
    HeavyOriented(Dir),
    HeavyUnoriented,
}

impl Bond {
    /// The same bond read against the reversed pair.
    pub fn flip(self) -> Self {
        match self {
            Bond::Double(d) => Bond::Double(d.flip()),
            Bond::Triple(d) => Bond::Triple(d.flip()),
            Bond::HeavyOriented(d) => Bond::HeavyOriented(d.flip()),
            b => b,
        }
    }

    fn ratio(self) -> Option<(i64, Dir)> {
        match self {
            Bond::Double(d) => Some((2, d)),
            Bond::Triple(d) => Some((3, d)),
            Bond::HeavyOriented(d) => Some((4, d)),
            _ => None,
        }
    }

    /// Whether nodes of norms `a` (first) and `b` (second) may carry this bond.
    pub fn compatible(self, a: &Rat, b: &Rat) -> bool {
        match self {
            Bond::None => true,
            Bond::Single | Bond::HeavyUnoriented => a == b,
            _ => {
                let (k, d) = self.ratio().unwrap();
                let k = rat(k, 1);
                match d {
                    Dir::FirstToSecond => a == &(b * k),
                    Dir::SecondToFirst => b == &(a * k),
                }
            }
        }
    }

    /// Inner product of two nodes of norms `a`, `b` joined by this bond.
    pub fn inner(self, a: &Rat, b: &Rat) -> Rat {
        let min = if a < b { a.clone() } else { b.clone() };
        match self {
            Bond::None => Rat::zero(),
            Bond::Single => -a / rat(2, 1),
            Bond::Double(_) => -min,
            Bond::Triple(_) => -min * rat(3, 2),
            Bond::HeavyOriented(_) => -min * rat(2, 1),
            Bond::HeavyUnoriented => -a.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagramClass {
    Spherical,
    Cuspidal,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormedDynkinDiagram {
    norms: QVec,
    bonds: Vec<Vec<Bond>>,
}

impl NormedDynkinDiagram {
    pub fn empty() -> Self {
        NormedDynkinDiagram { norms: vec![], bonds: vec![] }
    }

    /// Builds a diagram from node norms and bonds `(i, j, bond)` read against `(i, j)`.
    pub fn new(norms: QVec, bonds: &[(usize, usize, Bond)]) -> Result<Self> {
        let n = norms.len();
        if norms.iter().any(|x| !x.is_positive()) {
            return Err(Error::Diagram("node norms must be positive".into()));
        }
        let mut table = vec![vec![Bond::None; n]; n];
        for &(i, j, b) in bonds {
            if i >= n || j >= n || i == j {
                return Err(Error::Diagram(format!("bad bond endpoints ({i}, {j})")));
            }
            if table[i][j] != Bond::None {
                return Err(Error::Diagram(format!("nodes {i} and {j} are joined twice")));
            }
            if !b.compatible(&norms[i], &norms[j]) {
                return Err(Error::Diagram(format!("bond {b:?} between nodes {i} and {j} is incompatible with their norms")));
            }
            table[i][j] = b;
            table[j][i] = b.flip();
        }
        Ok(NormedDynkinDiagram { norms, bonds: table })
    }

    pub fn len(&self) -> usize {
        self.norms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.norms.is_empty()
    }

    pub fn norms(&self) -> &[Rat] {
        &self.norms
    }

    pub fn bond(&self, i: usize, j: usize) -> Bond {
        self.bonds[i][j]
    }

    /// The unique inner product realizing the diagram.
    pub fn gram(&self) -> Vec<QVec> {
        let n = self.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { self.norms[i].clone() } else { self.bonds[i][j].inner(&self.norms[i], &self.norms[j]) })
                    .collect()
            })
            .collect()
    }

    pub fn classify(&self) -> DiagramClass {
        classify_gram(&self.gram())
    }

    /// The diagram with one more node, described by `ext`.
    pub fn extend(&self, ext: &Extension) -> Result<Self> {
        let n = self.len();
        let mut norms = self.norms.clone();
        norms.push(ext.norm.clone());
        let mut bonds = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.bonds[i][j] != Bond::None {
                    bonds.push((i, j, self.bonds[i][j]));
                }
            }
        }
        for &(i, b) in &ext.bonds {
            bonds.push((n, i, b));
        }
        Self::new(norms, &bonds)
    }

    pub fn to_json(&self) -> Value {
        let mut bonds = Vec::new();
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                let b = self.bonds[i][j];
                let (ty, dir) = match b {
                    Bond::None => continue,
                    Bond::Single => ("single", None),
                    Bond::Double(d) => ("double", Some(d)),
                    Bond::Triple(d) => ("triple", Some(d)),
                    Bond::HeavyOriented(d) => ("heavy", Some(d)),
                    Bond::HeavyUnoriented => ("heavy", None),
                };
                let dir = match dir {
                    None => Value::Null,
                    Some(Dir::FirstToSecond) => json!("ij"),
                    Some(Dir::SecondToFirst) => json!("ji"),
                };
                bonds.push(json!({"i": i, "j": j, "type": ty, "dir": dir}));
            }
        }
        json!({
            "norms": self.norms.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "bonds": bonds,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(m.to_string());
        let norms = v.get("norms").and_then(Value::as_array).ok_or_else(|| bad("missing \"norms\" array"))?;
        let norms: QVec = norms
            .iter()
            .map(|x| match x {
                Value::String(s) => parse_rational(s).map_err(Error::Parse),
                Value::Number(n) => n.as_i64().map(|i| rat(i, 1)).ok_or_else(|| bad("norm is not an integer")),
                _ => Err(bad("norm must be an integer or \"p/q\"")),
            })
            .collect::<Result<_>>()?;
        let mut bonds = Vec::new();
        if let Some(list) = v.get("bonds").and_then(Value::as_array) {
            for b in list {
                let idx = |k: &str| b.get(k).and_then(Value::as_u64).map(|x| x as usize).ok_or_else(|| bad("bond needs integer i and j"));
                let (i, j) = (idx("i")?, idx("j")?);
                let dir = match b.get("dir") {
                    None | Some(Value::Null) => None,
                    Some(Value::String(s)) if s == "ij" => Some(Dir::FirstToSecond),
                    Some(Value::String(s)) if s == "ji" => Some(Dir::SecondToFirst),
                    _ => return Err(bad("dir must be \"ij\", \"ji\" or null")),
                };
                let ty = b.get("type").and_then(Value::as_str).ok_or_else(|| bad("bond needs a type"))?;
                let bond = match (ty, dir) {
                    ("single", None) => Bond::Single,
                    ("double", Some(d)) => Bond::Double(d),
                    ("triple", Some(d)) => Bond::Triple(d),
                    ("heavy", Some(d)) => Bond::HeavyOriented(d),
                    ("heavy", None) => Bond::HeavyUnoriented,
                    _ => return Err(bad(&format!("bad bond type {ty:?} with dir {dir:?}"))),
                };
                bonds.push((i, j, bond));
            }
        }
        Self::new(norms, &bonds)
    }
}

fn classify_gram(g: &[QVec]) -> DiagramClass {
    let (_, neg, zero) = inertia(g);
    match (neg, zero) {
        (0, 0) => DiagramClass::Spherical,
        (0, _) => DiagramClass::Cuspidal,
        _ => DiagramClass::Neither,
    }
}

/// Identifies the bond between two roots from their 2×2 inner product matrix.
pub fn bond_from_inner(a: &Rat, b: &Rat, p: &Rat) -> Option<Bond> {
    if p.is_zero() {
        return Some(Bond::None);
    }
    if p.is_positive() {
        return None;
    }
    let candidates = [
        Bond::Single,
        Bond::HeavyUnoriented,
        Bond::Double(Dir::FirstToSecond),
        Bond::Double(Dir::SecondToFirst),
        Bond::Triple(Dir::FirstToSecond),
        Bond::Triple(Dir::SecondToFirst),
        Bond::HeavyOriented(Dir::FirstToSecond),
        Bond::HeavyOriented(Dir::SecondToFirst),
    ];
    candidates.into_iter().find(|bd| bd.compatible(a, b) && &bd.inner(a, b) == p)
}

/// The Dynkin diagram of a set of roots with pairwise nonpositive inner products.
pub fn diagram_from_roots(lattice: &Lattice, roots: &[IVec]) -> Result<NormedDynkinDiagram> {
    let norms: QVec = roots.iter().map(|r| lattice.norm(r)).collect();
    let mut bonds = Vec::new();
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let p = lattice.inner(&roots[i], &roots[j]);
            if p.is_positive() {
                return Err(Error::Diagram(format!("roots {i} and {j} have positive inner product {p}")));
            }
            match bond_from_inner(&norms[i], &norms[j], &p) {
                Some(Bond::None) => {}
                Some(b) => bonds.push((i, j, b)),
                None => {
                    return Err(Error::Diagram(format!(
                        "roots {i} and {j} (norms {}, {}, inner product {p}) match no bond type",
                        norms[i], norms[j]
                    )))
                }
            }
        }
    }
    NormedDynkinDiagram::new(norms, &bonds)
}

/// A one-node extension: the new node's norm and its bonds to base nodes,
/// each bond read against the pair (new node, base node).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Extension {
    pub norm: Rat,
    pub bonds: Vec<(usize, Bond)>,
}

impl Extension {
    /// Inner products of the new node with every base node.
    pub fn inner_products(&self, base: &NormedDynkinDiagram) -> QVec {
        let mut v = vec![Rat::zero(); base.len()];
        for &(i, b) in &self.bonds {
            v[i] = b.inner(&self.norm, &base.norms[i]);
        }
        v
    }
}

/// Fast extension classifier for a fixed spherical base: by inertia
/// additivity the extension's class is decided by the sign of the Schur
/// complement N − bᵀG⁻¹b.
struct SchurClassifier {
    inv: Vec<QVec>,
}

impl SchurClassifier {
    fn new(base: &NormedDynkinDiagram) -> Result<Self> {
        if base.classify() != DiagramClass::Spherical {
            return Err(Error::Precondition("base diagram must be spherical".into()));
        }
        let inv = if base.is_empty() { vec![] } else { inverse_q(&base.gram()).expect("definite gram is invertible") };
        Ok(SchurClassifier { inv })
    }

    fn class(&self, base: &NormedDynkinDiagram, ext: &Extension) -> DiagramClass {
        let b: Vec<(usize, Rat)> = ext.bonds.iter().map(|&(i, bd)| (i, bd.inner(&ext.norm, &base.norms[i]))).collect();
        let mut s = ext.norm.clone();
        for (i, bi) in &b {
            for (j, bj) in &b {
                s -= bi * &self.inv[*i][*j] * bj;
            }
        }
        if s.is_positive() {
            DiagramClass::Spherical
        } else if s.is_zero() {
            DiagramClass::Cuspidal
        } else {
            DiagramClass::Neither
        }
    }
}

fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut cur, &mut out);
    out
}

/// Oriented bonds of ratio `k` available from a new node of norm `n`:
/// to a node of norm n/k (new node is the tail) or from one of norm k·n.
fn oriented_targets(base: &NormedDynkinDiagram, n: &Rat, k: i64, make: fn(Dir) -> Bond) -> Vec<(usize, Bond)> {
    let kq = rat(k, 1);
    let mut out = Vec::new();
    for (i, m) in base.norms.iter().enumerate() {
        if m * &kq == *n {
            out.push((i, make(Dir::FirstToSecond)));
        } else if *m == n * &kq {
            out.push((i, make(Dir::SecondToFirst)));
        }
    }
    out
}

struct Candidates {
    norm: Rat,
    equal: Vec<usize>,
    doubles: Vec<(usize, Bond)>,
    triples: Vec<(usize, Bond)>,
    heavies: Vec<(usize, Bond)>,
}

impl Candidates {
    fn new(base: &NormedDynkinDiagram, n: &Rat) -> Self {
        Candidates {
            norm: n.clone(),
            equal: (0..base.len()).filter(|&i| base.norms[i] == *n).collect(),
            doubles: oriented_targets(base, n, 2, Bond::Double),
            triples: oriented_targets(base, n, 3, Bond::Triple),
            heavies: oriented_targets(base, n, 4, Bond::HeavyOriented),
        }
    }

    fn ext(&self, mut bonds: Vec<(usize, Bond)>) -> Extension {
        bonds.sort();
        Extension { norm: self.norm.clone(), bonds }
    }

    /// Singles to `k` norm-N nodes, together with fixed extra bonds.
    fn with_singles(&self, fixed: &[(usize, Bond)], counts: std::ops::RangeInclusive<usize>, out: &mut Vec<Extension>) {
        let free: Vec<usize> = self.equal.iter().copied().filter(|i| fixed.iter().all(|(j, _)| j != i)).collect();
        for k in counts {
            for s in subsets(&free, k) {
                let mut bonds = fixed.to_vec();
                bonds.extend(s.into_iter().map(|i| (i, Bond::Single)));
                out.push(self.ext(bonds));
            }
        }
    }
}

/// All norm-N spherical extensions of a spherical diagram.
pub fn spherical_extensions(base: &NormedDynkinDiagram, n: &Rat) -> Result<Vec<Extension>> {
    let cls = SchurClassifier::new(base)?;
    if !n.is_positive() {
        return Err(Error::NonPositiveNorm);
    }
    let c = Candidates::new(base, n);
    let mut out = Vec::new();
    c.with_singles(&[], 0..=3, &mut out);
    for d in &c.doubles {
        c.with_singles(&[*d], 0..=1, &mut out);
    }
    for t in &c.triples {
        out.push(c.ext(vec![*t]));
    }
    out.retain(|e| cls.class(base, e) == DiagramClass::Spherical);
    Ok(out)
}

/// All norm-N cuspidal extensions of a spherical diagram.
pub fn cuspidal_extensions(base: &NormedDynkinDiagram, n: &Rat) -> Result<Vec<Extension>> {
    let cls = SchurClassifier::new(base)?;
    if !n.is_positive() {
        return Err(Error::NonPositiveNorm);
    }
    let c = Candidates::new(base, n);
    let mut out = Vec::new();
    c.with_singles(&[], 1..=4, &mut out);
    for a in 0..c.doubles.len() {
        for b in a + 1..c.doubles.len() {
            out.push(c.ext(vec![c.doubles[a], c.doubles[b]]));
        }
    }
    for d in &c.doubles {
        c.with_singles(&[*d], 0..=2, &mut out);
    }
    for t in &c.triples {
        c.with_singles(&[*t], 0..=1, &mut out);
    }
    for &i in &c.equal {
        out.push(c.ext(vec![(i, Bond::HeavyUnoriented)]));
    }
    for h in &c.heavies {
        out.push(c.ext(vec![*h]));
    }
    out.retain(|e| cls.class(base, e) == DiagramClass::Cuspidal);
    Ok(out)
}

/// Every norm-compatible one-node extension, classified with full inertia.
/// Exponential in the base size; meant as a reference for small diagrams.
pub fn brute_force_extensions(base: &NormedDynkinDiagram, n: &Rat) -> Vec<(Extension, DiagramClass)> {
    let all = [
        Bond::None,
        Bond::Single,
        Bond::HeavyUnoriented,
        Bond::Double(Dir::FirstToSecond),
        Bond::Double(Dir::SecondToFirst),
        Bond::Triple(Dir::FirstToSecond),
        Bond::Triple(Dir::SecondToFirst),
        Bond::HeavyOriented(Dir::FirstToSecond),
        Bond::HeavyOriented(Dir::SecondToFirst),
    ];
    let options: Vec<Vec<Bond>> =
        base.norms.iter().map(|m| all.iter().copied().filter(|b| b.compatible(n, m)).collect()).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; base.len()];
    loop {
        let bonds: Vec<(usize, Bond)> =
            idx.iter().enumerate().filter(|(i, &k)| options[*i][k] != Bond::None).map(|(i, &k)| (i, options[i][k])).collect();
        let ext = Extension { norm: n.clone(), bonds };
        if let Ok(d) = base.extend(&ext) {
            out.push((ext, d.classify()));
        }
        let mut p = 0;
        loop {
            if p == idx.len() {
                return out;
            }
            idx[p] += 1;
            if idx[p] < options[p].len() {
                break;
            }
            idx[p] = 0;
            p += 1;
        }
    }
}
