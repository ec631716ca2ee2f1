//! Acceptance suite: one test per criterion, each printing a pass line
//! once its exact assertions hold. Run with
//! `cargo test -p realbez --test acceptance -- --nocapture`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use realbez::bounds::{
    enumerate_admissible, index_family_bound, sign_census_bound, structural_bound,
    tau_term_ratio, Profile,
};
use realbez::components::{
    count_components, sign_census, CountOptions, SignConditionKey,
};
use realbez::deform::{
    approximating_tuples, audit_family, certify_perturbed_zero, def_poly, generic_positive,
    InfSchedule,
};
use realbez::families::{block_grid_family, grid_family};
use realbez::polyring::{Interval, Polynomial};

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn cube(k: usize, lo: i64, hi: i64) -> Vec<Interval> {
    (0..k).map(|_| Interval::from_ints(lo, hi)).collect()
}

/// Every non-increasing chain k = k_0 >= ... >= k_ell >= 0.
fn dim_chains(k: usize, ell: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut chain = vec![k];
    fn rec(ell: usize, chain: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if chain.len() == ell + 1 {
            out.push(chain.clone());
            return;
        }
        let top = *chain.last().unwrap();
        for next in (0..=top).rev() {
            chain.push(next);
            rec(ell, chain, out);
            chain.pop();
        }
    }
    rec(ell, &mut chain, &mut out);
    out
}

#[test]
fn criterion_01_grid_family_component_counts() {
    let start = std::time::Instant::now();
    for d in 1..=4u64 {
        let f = grid_family(d).unwrap();
        let bx = cube(3, 0, (d + 1) as i64);
        let opts = CountOptions::with_structure(12, f.structure.clone());
        let r = count_components(&f.system, &bx, &opts).unwrap();
        assert_eq!(
            r.exact,
            Some(d * d),
            "d = {d}: expected {}, got {r}",
            d * d
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 30, "took {elapsed:?}");
    println!("[PASS] 01 grid family counts 1, 4, 9, 16 exactly ({elapsed:?})");
}

#[test]
fn criterion_02_block_grid_component_counts() {
    let start = std::time::Instant::now();
    let cases: [(usize, Vec<usize>, Vec<u64>, u64); 3] = [
        (2, vec![2, 1, 0], vec![2, 4], 2),
        (3, vec![3, 1, 0], vec![4, 4], 8),
        (3, vec![3, 2, 0], vec![2, 2], 1),
    ];
    for (k, dims, degs, expected) in cases {
        let f = block_grid_family(k, &dims, &degs).unwrap();
        assert_eq!(f.exact_count, BigInt::from(expected), "closed form");
        let bx = cube(k, 0, 3);
        let opts = CountOptions::with_structure(12, f.structure.clone());
        let r = count_components(&f.system, &bx, &opts).unwrap();
        assert_eq!(r.exact, Some(expected), "k={k} dims={dims:?}: {r}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}");
    println!("[PASS] 02 block grid counts 2, 8, 1 exactly ({elapsed:?})");
}

#[test]
fn criterion_03_bound_dominates_actual_counts() {
    let one = BigRational::one();
    for d in 1..=4u64 {
        let f = grid_family(d).unwrap();
        let b = structural_bound(&f.profile, &one).unwrap();
        assert!(
            b.structural_sum >= f.exact_count,
            "d={d}: {} < {}",
            b.structural_sum,
            f.exact_count
        );
    }
    for (k, dims, degs) in [
        (2usize, vec![2usize, 1, 0], vec![2u64, 4]),
        (3, vec![3, 1, 0], vec![4, 4]),
        (3, vec![3, 2, 0], vec![2, 2]),
    ] {
        let f = block_grid_family(k, &dims, &degs).unwrap();
        let b = structural_bound(&f.profile, &one).unwrap();
        assert!(b.structural_sum >= f.exact_count);
    }
    println!("[PASS] 03 structural bound dominates every exact count");
}

#[test]
fn criterion_04_single_equation_collapse() {
    let one = BigRational::one();
    let mut cases = 0;
    for k in 1..=6usize {
        for d in 1..=6u64 {
            let p = Profile::new(k, vec![d], vec![k, 0]).unwrap();
            let r = structural_bound(&p, &one).unwrap();
            assert_eq!(
                r.structural_sum,
                BigInt::from(d).pow(k as u32),
                "k={k} d={d}"
            );
            cases += 1;
        }
    }
    assert_eq!(cases, 36);
    println!("[PASS] 04 single-equation bound equals d^k on all 36 cases");
}

#[test]
fn criterion_05_term_ratio_sweep() {
    let start = std::time::Instant::now();
    let mut checked = 0u64;
    for k in 1..=5usize {
        let cap = BigRational::from_integer(BigInt::from((k + 1) as u64).pow(k as u32));
        for ell in 1..=4usize {
            // minimal ladder: d1 = d2 = 2, then each degree jumps by k + 1
            let mut degs = vec![2u64; ell.min(2)];
            for _ in 2..ell {
                degs.push((k as u64 + 1) * degs.last().unwrap());
            }
            for dims in dim_chains(k, ell) {
                let profile = Profile::new(k, degs.clone(), dims.clone()).unwrap();
                assert!(profile.ladder_ok(), "minimal ladder must be valid");
                for tail in
                    enumerate_admissible(ell - 1, k, &dims[1..ell], true).unwrap()
                {
                    let ratio = tau_term_ratio(&profile, &tail).unwrap();
                    assert!(
                        ratio <= cap,
                        "k={k} ell={ell} dims={dims:?} tau={:?}: {ratio} > {cap}",
                        tail.entries()
                    );
                    assert!(ratio.is_positive());
                    checked += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}");
    println!(
        "[PASS] 05 term/witness ratio <= (k+1)^k on {checked} exhaustive cases ({elapsed:?})"
    );
}

#[test]
fn criterion_06_admissible_enumeration_oracle() {
    // brute-force filter over the full box [0,k]^j
    fn brute(j: usize, k: usize, dims: &[usize], cap_last: bool) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let total = (k + 1).pow(j as u32);
        for code in 0..total {
            let mut t = Vec::with_capacity(j);
            let mut c = code;
            for _ in 0..j {
                t.push(c % (k + 1));
                c /= k + 1;
            }
            t.reverse();
            let mono = t.windows(2).all(|w| w[0] >= w[1]);
            let caps = t.iter().enumerate().all(|(i, &v)| {
                if i + 1 < j || cap_last {
                    v <= dims[i]
                } else {
                    true
                }
            });
            if mono && caps {
                out.push(t);
            }
        }
        out.sort();
        out.reverse();
        out
    }
    let mut cases = 0u64;
    for k in 0..=6usize {
        for j in 0..=4usize {
            for dims in [vec![k; j], (0..j).map(|i| k.saturating_sub(i)).collect::<Vec<_>>()] {
                for cap_last in [false, true] {
                    let fast = enumerate_admissible(j, k, &dims, cap_last).unwrap();
                    let got: Vec<Vec<usize>> =
                        fast.iter().map(|t| t.entries().to_vec()).collect();
                    assert_eq!(got, brute(j, k, &dims, cap_last), "k={k} j={j}");
                    let bound = realbez::bounds::combin::binomial((k + j) as u64, j as u64);
                    assert!(BigInt::from(fast.len()) <= bound);
                    cases += 1;
                }
            }
        }
    }
    println!("[PASS] 06 admissible enumeration matches brute force on {cases} sweeps");
}

#[test]
fn criterion_07_structure_audit_sweep() {
    let deg_choices: [&[u64]; 5] = [&[2], &[4], &[2, 2], &[2, 4], &[4, 4]];
    let mut audited = 0u64;
    for k in 1..=3usize {
        for degs in deg_choices {
            let ell = degs.len();
            for dims in dim_chains(k, ell) {
                let profile = Profile::new(k, degs.to_vec(), dims.clone()).unwrap();
                let sched = InfSchedule::default_for(ell);
                for tail in enumerate_admissible(ell, k, &dims[1..], false).unwrap() {
                    let tuples =
                        approximating_tuples(&profile, &tail, &sched, 41).unwrap();
                    let fam = audit_family(&profile, &tail, &tuples);
                    assert!(
                        fam.count_ok,
                        "k={k} degs={degs:?} dims={dims:?} tau={:?}: {} tuples > {}",
                        tail.entries(),
                        fam.tuples,
                        fam.family_bound
                    );
                    for audit in &fam.per_tuple {
                        assert!(
                            audit.cardinality_ok,
                            "k={k} tau={:?} {}: expected {} equations",
                            tail.entries(),
                            audit.index,
                            audit.expected_equations
                        );
                        for b in &audit.blocks {
                            assert!(
                                b.ok,
                                "k={k} degs={degs:?} tau={:?} block {}: deg {} > {}",
                                tail.entries(),
                                b.block,
                                b.max_degree,
                                b.threshold
                            );
                        }
                        audited += 1;
                    }
                    let bound = index_family_bound(k, &tail.prepend_k(k));
                    assert!(BigInt::from(tuples.len()) <= bound);
                }
            }
        }
    }
    println!("[PASS] 07 structure audit passes on {audited} tuples across the sweep");
}

#[test]
fn criterion_08_sign_census_against_census_bound() {
    let f = block_grid_family(2, &[2, 1, 0], &[2, 4]).unwrap();
    let p = [Polynomial::var(2, 1).sub(&Polynomial::constant(2, rat(3, 2)))];
    let opts = CountOptions::with_structure(12, f.structure.clone());
    let census = sign_census(&p, &f.system, &cube(2, 0, 3), &opts).unwrap();
    assert!(census.all_exact, "{census:?}");
    assert_eq!(census.per_sigma.len(), 2);
    assert_eq!(census.per_sigma[&SignConditionKey(vec![-1])].exact, Some(1));
    assert_eq!(census.per_sigma[&SignConditionKey(vec![1])].exact, Some(1));
    assert_eq!(census.total_upper, 2);

    // oracle partition of the explicit zero list
    let mut neg = 0;
    let mut pos = 0;
    for z in &f.zero_points {
        if p[0].eval(z).unwrap().is_negative() {
            neg += 1;
        } else {
            pos += 1;
        }
    }
    assert_eq!((neg, pos), (1, 1));

    let bound = sign_census_bound(&f.profile, 1, 1, &BigRational::one()).unwrap();
    assert!(
        bound.degree_gap_violated,
        "s = 1, d = 1 violates the degree gap and must be flagged"
    );
    assert!(BigInt::from(census.total_upper) <= bound.structural_total);
    println!(
        "[PASS] 08 sign census (-1):1 (+1):1, total 2 <= census bound {}",
        bound.structural_total
    );
}

#[test]
fn criterion_09_deformation_identities_and_certificates() {
    // endpoint identities on 50 seeded random pairs
    for seed in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rng.gen_range(1..=3);
        let q = rng.gen_range(0..k);
        let mut q_poly = Polynomial::zero(k);
        for _ in 0..rng.gen_range(1..=6) {
            let exps: Vec<u32> = (0..k).map(|_| rng.gen_range(0..=3)).collect();
            q_poly = q_poly.add(&Polynomial::monomial(exps, int(rng.gen_range(-5..=5))));
        }
        let mut h = Polynomial::zero(k);
        for _ in 0..rng.gen_range(1..=6) {
            let exps: Vec<u32> = (0..k)
                .map(|v| if v < q { 0 } else { rng.gen_range(0..=3) })
                .collect();
            h = h.add(&Polynomial::monomial(exps, int(rng.gen_range(-5..=5))));
        }
        assert_eq!(def_poly(&q_poly, &int(0), q, &h).unwrap(), q_poly, "seed {seed}");
        assert_eq!(def_poly(&q_poly, &int(1), q, &h).unwrap(), h.neg(), "seed {seed}");
    }

    // both transversal circle/line zeros certify under the default schedule
    let circle = Polynomial::var(2, 0)
        .pow(2)
        .add(&Polynomial::var(2, 1).pow(2))
        .sub(&Polynomial::constant_int(2, 1));
    let line = Polynomial::var(2, 0).sub(&Polynomial::var(2, 1));
    let f = [circle, line];
    let h = [generic_positive(0, 2, 2, 2024).unwrap(), Polynomial::constant_int(2, 1)];
    let sched = InfSchedule::default_for(1);
    let approx = rat(169, 239);
    for sign in [1i64, -1] {
        let x = [&approx * int(sign), &approx * int(sign)];
        let verdict =
            certify_perturbed_zero(&f, &h, sched.zeta(1), &x, &rat(1, 16)).unwrap();
        assert!(verdict.is_certified(), "sign {sign}: {verdict:?}");
    }
    println!("[PASS] 09 deformation endpoint identities (50 seeds) and both zeros certified");
}

#[test]
fn criterion_10_interval_soundness_fuzz() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xB0);
    let mut failures = 0;
    for case in 0..1000 {
        let nvars = rng.gen_range(1..=4);
        let mut p = Polynomial::zero(nvars);
        for _ in 0..rng.gen_range(0..=8) {
            let exps: Vec<u32> = (0..nvars).map(|_| rng.gen_range(0..=6)).collect();
            let c = rat(rng.gen_range(-9..=9), rng.gen_range(1..=5));
            p = p.add(&Polynomial::monomial(exps, c));
        }
        let mut bx = Vec::with_capacity(nvars);
        let mut point = Vec::with_capacity(nvars);
        for _ in 0..nvars {
            let lo = rat(rng.gen_range(-12..=12), rng.gen_range(1..=6));
            let width = rat(rng.gen_range(0..=8), rng.gen_range(1..=6));
            let hi = &lo + &width;
            let t = rat(rng.gen_range(0..=16), 16);
            point.push(&lo + &t * &width);
            bx.push(Interval::new(lo, hi).unwrap());
        }
        let value = p.eval(&point).unwrap();
        let enclosure = p.eval_interval(&bx).unwrap();
        if !enclosure.contains(&value) {
            failures += 1;
            eprintln!("case {case}: {value} outside {enclosure}");
        }
    }
    assert_eq!(failures, 0);
    println!("[PASS] 10 interval soundness on 1000 random triples, zero failures");
}

#[test]
fn zero_polynomial_sanity_for_the_suite() {
    // tiny guard used by several criteria: exact zero evaluation on the
    // family oracles
    let f = grid_family(3).unwrap();
    for z in &f.zero_points {
        for p in &f.system {
            assert!(p.eval(z).unwrap().is_zero());
        }
    }
}
