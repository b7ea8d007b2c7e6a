use chamberwalk::arith::{ivec, IVec, Int};
use chamberwalk::dynkin::{diagram_from_roots, DiagramClass};
use chamberwalk::edgewalk::{
    explore, find_corner, walk, walk_naive, Corner, CornerKind, ExploreBudget, FiniteVolume, Ray, WalkEnd, Walker,
};
use chamberwalk::lattice::Lattice;
use chamberwalk::vinberg::{vinberg_run, VinbergOptions};
use num::{Signed, Zero};
use rand::SeedableRng;

mod common;
use common::random_lattice;
use rand_chacha::ChaCha8Rng;

/// Every corner a walk reaches must be a valid corner with a sensible local system.
fn check_end(l: &Lattice, ray: &Ray, end: &WalkEnd) {
    let WalkEnd::Corner { corner, new_root } = end else { return };
    let again = Corner::new(l, corner.vector.clone(), corner.roots.clone()).unwrap();
    assert_eq!(&again, corner);
    for r in &ray.edge_roots {
        assert!(corner.roots.contains(r));
    }
    if let Some(a) = new_root {
        assert!(l.is_root(a).unwrap());
        assert!(l.inner(&ray.corner.vector, a).is_negative());
        assert_eq!(corner.kind, CornerKind::Ordinary);
        let d = diagram_from_roots(l, &corner.roots).unwrap();
        assert_eq!(d.classify(), DiagramClass::Spherical);
    }
    for r in &corner.roots {
        let n = l.norm(r).to_integer();
        let e = l.discriminant_exponent().unwrap();
        assert!((Int::from(2) * e % &n).is_zero(), "root norm {n} does not divide 2e");
    }
}

fn sorted(mut v: Vec<IVec>) -> Vec<IVec> {
    v.sort();
    v
}

#[test]
fn explore_the_106_lattice() {
    let l = Lattice::diagonal(&[1, -106]);
    let c = Corner::new(&l, ivec(&[0, 1]), vec![ivec(&[-1, 0])]).unwrap();
    let ch = explore(&l, &c, &ExploreBudget::default()).unwrap();
    assert_eq!(ch.finite_volume, FiniteVolume::Yes);
    assert!(ch.walks <= 2, "{} walks", ch.walks);
    assert_eq!(ch.simple_roots, vec![ivec(&[-1, 0]), ivec(&[41234, 4005])]);
    assert_eq!(ch.corners.len(), 2);
}

#[test]
fn triangle_group_chamber() {
    let l = Lattice::diagonal(&[1, 1, -1]);
    let c = Corner::new(&l, ivec(&[0, 0, 1]), vec![ivec(&[0, -1, 0]), ivec(&[-1, 1, 0])]).unwrap();
    let ch = explore(&l, &c, &ExploreBudget::default()).unwrap();
    assert_eq!(ch.finite_volume, FiniteVolume::Yes);
    assert_eq!(ch.corners.len(), 3);
    assert_eq!(ch.corners.iter().filter(|c| c.kind == CornerKind::Ideal).count(), 1);
    let roots = &ch.simple_roots;
    assert_eq!(roots.len(), 3);
    // Angles π/4 and π/2 and one parallel pair.
    let mut cosines_sq = Vec::new();
    for i in 0..3 {
        for j in i + 1..3 {
            let ip = l.inner(&roots[i], &roots[j]);
            cosines_sq.push(&ip * &ip / (l.norm(&roots[i]) * l.norm(&roots[j])));
        }
    }
    cosines_sq.sort();
    let q = |a: i64, b: i64| num::BigRational::new(a.into(), b.into());
    assert_eq!(cosines_sq, vec![q(0, 1), q(1, 2), q(1, 1)]);

    let v = vinberg_run(&l, &c.vector, &c.roots, &VinbergOptions::default()).unwrap();
    assert!(!v.exhausted);
    assert_eq!(sorted(v.roots), sorted(ch.simple_roots.clone()));
}

#[test]
fn walking_back_returns_home() {
    let cases: Vec<(Lattice, Corner)> = vec![
        {
            let l = Lattice::diagonal(&[1, -2]);
            let c = Corner::new(&l, ivec(&[0, 1]), vec![ivec(&[-1, 0])]).unwrap();
            (l, c)
        },
        {
            let l = Lattice::diagonal(&[1, 1, -1]);
            let c = Corner::new(&l, ivec(&[0, 0, 1]), vec![ivec(&[0, -1, 0]), ivec(&[-1, 1, 0])]).unwrap();
            (l, c)
        },
        {
            let l = Lattice::diagonal(&[1, 1, -2]);
            let c = find_corner(&l, 2).unwrap().unwrap();
            (l, c)
        },
        {
            let l = Lattice::diagonal(&[1, 1, 1, -1]);
            let c = find_corner(&l, 1).unwrap().unwrap();
            (l, c)
        },
    ];
    for (l, start) in cases {
        let ch = explore(&l, &start, &ExploreBudget::default()).unwrap();
        assert_eq!(ch.finite_volume, FiniteVolume::Yes);
        for c in &ch.corners {
            for ray in c.rays(&l) {
                let end = walk(&l, &ray).unwrap();
                check_end(&l, &ray, &end);
                let WalkEnd::Corner { corner, .. } = end else { panic!("unbounded edge") };
                let back = Ray { corner, edge_roots: ray.edge_roots.clone() };
                match walk(&l, &back).unwrap() {
                    WalkEnd::Corner { corner, .. } => assert_eq!(corner.vector, c.vector),
                    WalkEnd::Unbounded => panic!("unbounded on the way back"),
                }
            }
        }
    }
}

#[test]
fn batched_and_naive_searches_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut lattices = 0;
    let mut walks = 0;
    while lattices < 100 {
        let l = random_lattice(&mut rng);
        let Some(c) = find_corner(&l, 2).unwrap() else { continue };
        lattices += 1;
        let walker = Walker::new(&l).unwrap();
        for ray in c.rays(&l) {
            let fast = walker.walk(&ray).unwrap();
            check_end(&l, &ray, &fast);
            assert_eq!(fast, walk_naive(&l, &ray).unwrap(), "gram {:?}", l.gram());
            walks += 1;
        }
    }
    assert!(walks >= 100);
}

#[test]
fn explore_agrees_with_vinberg_on_random_lattices() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let budget = ExploreBudget { max_walks: 200, max_corners: 200 };
    let mut certified = 0;
    let mut tried = 0;
    while certified < 50 {
        tried += 1;
        assert!(tried < 2000, "too few reflective lattices found");
        let l = random_lattice(&mut rng);
        let Some(c) = find_corner(&l, 2).unwrap() else { continue };
        if c.kind != CornerKind::Ordinary {
            continue;
        }
        let ch = explore(&l, &c, &budget).unwrap();
        if ch.finite_volume != FiniteVolume::Yes {
            continue;
        }
        certified += 1;
        let v = vinberg_run(&l, &c.vector, &c.roots, &VinbergOptions::default()).unwrap();
        assert!(!v.exhausted, "gram {:?}", l.gram());
        assert_eq!(sorted(v.roots), sorted(ch.simple_roots.clone()), "gram {:?}", l.gram());
    }
}

#[test]
fn scaling_the_form_keeps_the_chamber() {
    let base = [vec![1i64, 0, 0], vec![0, 1, 0], vec![0, 0, -3]];
    let l1 = Lattice::from_ints(&base).unwrap();
    let c1 = find_corner(&l1, 2).unwrap().unwrap();
    let ch1 = explore(&l1, &c1, &ExploreBudget::default()).unwrap();
    for s in [2i64, 3, 5] {
        let scaled: Vec<Vec<i64>> = base.iter().map(|r| r.iter().map(|x| x * s).collect()).collect();
        let ls = Lattice::from_ints(&scaled).unwrap();
        let cs = Corner::new(&ls, c1.vector.clone(), c1.roots.clone()).unwrap();
        for ray in c1.rays(&l1) {
            let scaled_ray = Ray { corner: cs.clone(), edge_roots: ray.edge_roots.clone() };
            let (a, b) = (walk(&l1, &ray).unwrap(), walk(&ls, &scaled_ray).unwrap());
            match (a, b) {
                (WalkEnd::Corner { corner: x, new_root: ra }, WalkEnd::Corner { corner: y, new_root: rb }) => {
                    assert_eq!(x.vector, y.vector);
                    assert_eq!(ra, rb);
                }
                (a, b) => assert_eq!(a, b),
            }
        }
        let chs = explore(&ls, &cs, &ExploreBudget::default()).unwrap();
        assert_eq!(chs.finite_volume, ch1.finite_volume);
        assert_eq!(chs.simple_roots, ch1.simple_roots);
    }
}

#[test]
fn budget_exhaustion_is_reported() {
    let l = Lattice::diagonal(&[1, 1, -1]);
    let c = Corner::new(&l, ivec(&[0, 0, 1]), vec![ivec(&[0, -1, 0]), ivec(&[-1, 1, 0])]).unwrap();
    let ch = explore(&l, &c, &ExploreBudget { max_walks: 1, max_corners: 100 }).unwrap();
    assert_eq!(ch.finite_volume, FiniteVolume::Unknown);
    assert_eq!(ch.walks, 1);
}

#[test]
fn rank_two_cusp_is_not_finite() {
    let l = Lattice::diagonal(&[1, -1]);
    let c = Corner::new(&l, ivec(&[0, 1]), vec![ivec(&[-1, 0])]).unwrap();
    let ch = explore(&l, &c, &ExploreBudget::default()).unwrap();
    assert_eq!(ch.finite_volume, FiniteVolume::No);
    assert_eq!(ch.corners[1].kind, CornerKind::Ideal);
}
