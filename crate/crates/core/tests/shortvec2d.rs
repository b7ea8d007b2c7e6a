use chamberwalk::arith::{ivec, rat, Int, IVec, Rat};
use chamberwalk::shortvec2d::{mat_apply, mat_mul, PlaneFrame};
use num::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;

mod common;
use common::{first_after, random_case, small, to_ivec};

#[test]
fn first_short_vector_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    let mut attempts = 0;
    while checked < 500 && attempts < 200_000 {
        attempts += 1;
        let Some(case) = random_case(&mut rng) else { continue };
        let f = &case.frame;
        let r0 = f.bottom().to_vec();
        let Some(expected) = first_after(&case, &r0, case.m) else { continue };
        let m = rat(case.m, 1);
        let l0 = f.self_supplement(&r0).unwrap();
        let got = if f.norm(&r0) <= Int::from(case.m) {
            let l = f.initial_supplement(&m, &r0).unwrap();
            let (r, l) = f.promised(&m, &r0, &l).unwrap();
            assert!(f.is_m_supplement(&m, &r, &l).unwrap());
            let p = f.promised_with(&m, &r0, &f.initial_supplement(&m, &r0).unwrap(), true).unwrap();
            assert_eq!(p.r, r, "grouped and plain Promised disagree");
            Some(r)
        } else {
            f.not_promised(&m, &r0, &l0).unwrap().map(|(r, l)| {
                assert!(f.is_m_supplement(&m, &r, &l).unwrap());
                assert_eq!(f.canonical_supplement(&m, &r, &l).unwrap(), l);
                r
            })
        };
        assert_eq!(got, expected, "gram {:?} k {:?} M {}", case.gram, f.k(), case.m);
        checked += 1;
    }
    assert!(checked >= 500, "only {checked} frames were small enough to check");
}

#[test]
fn canonical_supplement_contract_and_equivariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 300 {
        let Some(case) = random_case(&mut rng) else { continue };
        let f = &case.frame;
        let m = rat(case.m, 1);
        let r = f.bottom().to_vec();
        let l = f.initial_supplement(&m, &r).unwrap();
        let c = f.canonical_supplement(&m, &r, &l).unwrap();
        assert!(f.is_m_supplement(&m, &r, &c).unwrap());
        let next: IVec = c.iter().zip(&r).map(|(a, b)| a + b).collect();
        assert!(!f.is_m_supplement(&m, &next, &r).unwrap_or(false) || !f.is_m_supplement(&m, &r, &next).unwrap());
        assert!(!f.is_m_supplement(&m, &r, &next).unwrap());
        let g = &case.forward;
        let gc = f.canonical_supplement(&m, &mat_apply(g, &r), &mat_apply(g, &l)).unwrap();
        assert_eq!(gc, mat_apply(g, &c));
        checked += 1;
    }
}

#[test]
fn promised_steps_follow_subtractive_euclid() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut checked = 0;
    while checked < 300 {
        let Some(case) = random_case(&mut rng) else { continue };
        let f = &case.frame;
        let r0 = f.bottom().to_vec();
        if f.norm(&r0) > Int::from(case.m) {
            continue;
        }
        let m = rat(case.m, 1);
        let l0 = f.initial_supplement(&m, &r0).unwrap();
        let p = f.promised_with(&m, &r0, &l0, false).unwrap();
        // Coefficients of r' in (r0, l0).
        let d = &r0[0] * &l0[1] - &r0[1] * &l0[0];
        let mut a = (&p.r[0] * &l0[1] - &p.r[1] * &l0[0]) * &d;
        let mut b = (&r0[0] * &p.r[1] - &r0[1] * &p.r[0]) * &d;
        assert!(!a.is_negative() && b.is_positive());
        let mut steps = 0u64;
        while !(a.is_zero() && b.is_one()) {
            if a >= b {
                a -= &b;
            } else {
                b -= &a;
            }
            steps += 1;
        }
        assert_eq!(p.steps, steps);
        checked += 1;
    }
}

#[test]
fn anisotropic_period_reproduces_three_periods() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut checked = 0;
    let mut attempts = 0;
    while checked < 200 && attempts < 100_000 {
        attempts += 1;
        let Some(case) = random_case(&mut rng) else { continue };
        let f = &case.frame;
        let m = rat(case.m, 1);
        let r0 = f.bottom().to_vec();
        let l0 = f.self_supplement(&r0).unwrap();
        let Some(r0s) = small(&r0) else { continue };
        let period = f.anisotropic_period(&m, &r0, &l0).unwrap();
        let Some(p) = period else {
            // No short vectors at all: the brute force over one Pell period agrees.
            let Some(gr) = small(&mat_apply(&case.forward, &r0)) else { continue };
            let Some(list) = case.brute(&r0s, &gr, case.m as i128, 20_000) else { continue };
            assert!(list.is_empty());
            checked += 1;
            continue;
        };
        let g = &p.g;
        assert_eq!(&g[0][0] * &g[1][1] - &g[0][1] * &g[1][0], Int::one());
        let mut expected: Vec<IVec> = p.roots.clone();
        let g2 = mat_mul(g, g);
        expected.extend(p.roots.iter().map(|r| mat_apply(g, r)));
        expected.extend(p.roots.iter().map(|r| mat_apply(&g2, r)));
        let Some(end) = small(expected.last().unwrap()) else { continue };
        let Some(list) = case.brute(&r0s, &end, case.m as i128, 20_000) else { continue };
        let list: Vec<IVec> = list.iter().map(to_ivec).collect();
        assert_eq!(list, expected, "gram {:?} k {:?} M {}", case.gram, f.k(), case.m);
        checked += 1;
    }
    assert!(checked >= 100, "only {checked} frames checked");
}

#[test]
fn isotropic_sweep_ends_at_the_top_ray() {
    let f = PlaneFrame::from_ints([[0, 1], [1, 0]], [1, -1], [1, 1]).unwrap();
    let sweep = f.isotropic_sweep(&rat(2, 1), f.bottom()).unwrap();
    let last = sweep.last().unwrap();
    assert!(f.in_omega(last));
    for w in sweep.windows(2) {
        assert_eq!(f.sector_compare(&w[0], &w[1]).unwrap(), Ordering::Less);
    }
    assert!(PlaneFrame::from_ints([[1, 0], [0, -1]], [1, 1], [1, 0]).is_err());
    let f = PlaneFrame::from_ints([[1, 0], [0, -1]], [1, 1], [0, 1]).unwrap();
    assert_eq!(f.bottom(), &ivec(&[-1, -1])[..]);
    let sweep = f.isotropic_sweep(&rat(1, 1), f.bottom()).unwrap();
    assert!(f.in_omega(sweep.last().unwrap()));
    assert!(sweep.iter().all(|v| f.true_norm(v) <= Rat::one()));
}
