//! Generators for the two extremal families with closed-form component
//! counts. Both are grids of isolated points cut out by sums of squares of
//! univariate products, so each instance ships its explicit zero list and
//! a verifiable structure declaration alongside the expanded system.

use crate::bounds::Profile;
use crate::components::structure::{EquationShape, SystemStructure, UnivariateBlock};
use crate::polyring::Polynomial;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("parameter d must be >= 1")]
    BadParameter,
    #[error("all degrees must be even and >= 2, got {0}")]
    OddDegree(u64),
    #[error("the last dimension must be 0, got {0}")]
    LastDimNonzero(usize),
    #[error("dims must strictly decrease from k to 0 so every equation owns a block")]
    EmptyBlock,
    #[error("invalid profile: {0}")]
    Profile(#[from] crate::bounds::BoundsError),
}

/// A generated system together with its oracle data: the profile, the
/// exact component count, and the explicit zero list.
#[derive(Debug, Clone)]
pub struct FamilyInstance {
    pub system: Vec<Polynomial>,
    pub profile: Profile,
    pub exact_count: BigInt,
    pub zero_points: Vec<Vec<BigRational>>,
    pub structure: SystemStructure,
    pub provenance: String,
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn block(var: usize, roots_up_to: u64) -> UnivariateBlock {
    UnivariateBlock { var, roots: (1..=roots_up_to).map(|r| int(r as i64)).collect() }
}

fn sum_of_squares(nvars: usize, blocks: &[UnivariateBlock]) -> Polynomial {
    let mut p = Polynomial::zero(nvars);
    for b in blocks {
        let prod = b.product(nvars);
        p = p.add(&prod.mul(&prod));
    }
    p
}

/// Family 11: in three variables, a hyperplane taken twice plus one
/// degree-2d equation whose zero set on the plane is the d-by-d integer
/// grid. It has exactly d^2 isolated zeros although the naive degree
/// product of the system is linear in d — the motivating counterexample
/// for the intermediate-dimension bound shape.
pub fn grid_family(d: u64) -> Result<FamilyInstance, FamilyError> {
    if d == 0 {
        return Err(FamilyError::BadParameter);
    }
    let k = 3usize;
    let x3 = Polynomial::var(k, 2);
    let blocks = vec![block(0, d), block(1, d)];
    let q3 = sum_of_squares(k, &blocks);
    let system = vec![x3.clone(), x3, q3];
    let structure = SystemStructure {
        shapes: vec![None, None, Some(EquationShape::SumOfSquares { blocks })],
    };
    let profile = Profile::new(k, vec![1, 1, 2 * d], vec![3, 2, 2, 0])?;
    let mut zero_points = Vec::with_capacity((d * d) as usize);
    for a in 1..=d {
        for b in 1..=d {
            zero_points.push(vec![int(a as i64), int(b as i64), int(0)]);
        }
    }
    Ok(FamilyInstance {
        system,
        profile,
        exact_count: BigInt::from(d) * BigInt::from(d),
        zero_points,
        structure,
        provenance: format!("example 11, d = {d}"),
    })
}

/// Family 15: one equation per dimension drop. Equation `i` owns the
/// variable block `[k - k_{i-1}, k - k_i)` (0-based) and pins each of its
/// variables to `{1, ..., d_i / 2}` through a squared product, so the zero
/// set is a product grid of exactly
/// `prod_{i<ell} (d_i/2)^{k_{i-1}-k_i} * (d_ell/2)^{k_{ell-1}}` points and
/// the intermediate varieties have exactly the prescribed dimensions.
pub fn block_grid_family(
    k: usize,
    dims: &[usize],
    degs: &[u64],
) -> Result<FamilyInstance, FamilyError> {
    let ell = degs.len();
    if dims.len() != ell + 1 {
        return Err(FamilyError::Profile(crate::bounds::BoundsError::InvalidProfile(
            "dims must list k_0..k_ell".into(),
        )));
    }
    if *dims.last().unwrap() != 0 {
        return Err(FamilyError::LastDimNonzero(*dims.last().unwrap()));
    }
    for &d in degs {
        if d < 2 || d % 2 != 0 {
            return Err(FamilyError::OddDegree(d));
        }
    }
    if dims.windows(2).any(|w| w[0] <= w[1]) {
        return Err(FamilyError::EmptyBlock);
    }
    let profile = Profile::new(k, degs.to_vec(), dims.to_vec())?;

    let mut system = Vec::with_capacity(ell);
    let mut shapes = Vec::with_capacity(ell);
    let mut per_var_roots: Vec<u64> = vec![0; k];
    for i in 0..ell {
        let half = degs[i] / 2;
        // 0-based variable block for equation i
        let lo = k - dims[i];
        let hi = k - dims[i + 1];
        let blocks: Vec<UnivariateBlock> = (lo..hi).map(|v| block(v, half)).collect();
        per_var_roots[lo..hi].fill(half);
        system.push(sum_of_squares(k, &blocks));
        shapes.push(Some(EquationShape::SumOfSquares { blocks }));
    }
    let structure = SystemStructure { shapes };

    let mut exact_count = BigInt::one();
    for i in 0..ell {
        let half = BigInt::from(degs[i] / 2);
        exact_count *= half.pow((dims[i] - dims[i + 1]) as u32);
    }
    let mut zero_points: Vec<Vec<BigRational>> = vec![vec![]];
    for &roots in &per_var_roots {
        let mut next = Vec::new();
        for p in &zero_points {
            for r in 1..=roots {
                let mut q = p.clone();
                q.push(int(r as i64));
                next.push(q);
            }
        }
        zero_points = next;
    }
    debug_assert_eq!(BigInt::from(zero_points.len()), exact_count);
    Ok(FamilyInstance {
        system,
        profile,
        exact_count,
        zero_points,
        structure,
        provenance: format!("example 15, k = {k}, dims = {dims:?}, degs = {degs:?}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::structural_bound;
    use crate::components::structure::min_pairwise_distance_sq;
    use crate::polyring::Degree;
    use num_traits::Zero;

    #[test]
    fn grid_family_single_point() {
        let f = grid_family(1).unwrap();
        assert_eq!(f.exact_count, BigInt::one());
        assert_eq!(f.zero_points, vec![vec![int(1), int(1), int(0)]]);
    }

    #[test]
    fn grid_family_counts_and_degrees() {
        let f = grid_family(3).unwrap();
        assert_eq!(f.exact_count, BigInt::from(9));
        assert_eq!(f.zero_points.len(), 9);
        for (i, p) in f.system.iter().enumerate() {
            assert_eq!(p.degree(), Degree::Finite(f.profile.degs[i] as u32));
        }
        f.structure.validate(&f.system).unwrap();
    }

    #[test]
    fn grid_family_zeros_actually_vanish() {
        let f = grid_family(2).unwrap();
        for z in &f.zero_points {
            for p in &f.system {
                assert!(p.eval(z).unwrap().is_zero(), "{p} at {z:?}");
            }
        }
        // and a non-grid point does not
        assert!(!f.system[2].eval(&[int(1), int(3), int(0)]).unwrap().is_zero());
    }

    #[test]
    fn block_grid_instances() {
        let f = block_grid_family(2, &[2, 1, 0], &[2, 4]).unwrap();
        assert_eq!(f.exact_count, BigInt::from(2));
        assert_eq!(f.zero_points, vec![vec![int(1), int(1)], vec![int(1), int(2)]]);

        let f = block_grid_family(3, &[3, 1, 0], &[4, 4]).unwrap();
        assert_eq!(f.exact_count, BigInt::from(8));
        // independent grid enumeration oracle
        let mut count = 0;
        for a in 1..=2 {
            for b in 1..=2 {
                for c in 1..=2 {
                    let pt = vec![int(a), int(b), int(c)];
                    if f.system.iter().all(|p| p.eval(&pt).unwrap().is_zero()) {
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(count, 8);

        let f = block_grid_family(3, &[3, 2, 0], &[2, 2]).unwrap();
        assert_eq!(f.exact_count, BigInt::one());
        assert_eq!(f.zero_points, vec![vec![int(1), int(1), int(1)]]);
    }

    #[test]
    fn block_grid_all_degree_two_is_one_point() {
        for (k, dims) in [(2usize, vec![2usize, 1, 0]), (4, vec![4, 2, 1, 0])] {
            let degs = vec![2u64; dims.len() - 1];
            let f = block_grid_family(k, &dims, &degs).unwrap();
            assert_eq!(f.exact_count, BigInt::one());
            assert_eq!(f.zero_points, vec![vec![int(1); k]]);
        }
    }

    #[test]
    fn block_grid_degrees_match_profile() {
        let f = block_grid_family(3, &[3, 1, 0], &[4, 6]).unwrap();
        for (i, p) in f.system.iter().enumerate() {
            assert_eq!(p.degree(), Degree::Finite(f.profile.degs[i] as u32));
        }
        f.structure.validate(&f.system).unwrap();
    }

    #[test]
    fn block_grid_rejects_bad_parameters() {
        assert!(matches!(
            block_grid_family(2, &[2, 1, 0], &[2, 3]),
            Err(FamilyError::OddDegree(3))
        ));
        assert!(matches!(
            block_grid_family(2, &[2, 1, 1], &[2, 2]),
            Err(FamilyError::LastDimNonzero(1))
        ));
        assert!(matches!(
            block_grid_family(3, &[3, 3, 0], &[2, 2]),
            Err(FamilyError::EmptyBlock)
        ));
    }

    #[test]
    fn count_in_halved_form_equals_displayed_form() {
        // 2^k * prod (d_i/2)^{block} == prod d_i^{block}
        for (k, dims, degs) in [
            (2usize, vec![2usize, 1, 0], vec![2u64, 4]),
            (3, vec![3, 1, 0], vec![4, 4]),
            (3, vec![3, 2, 0], vec![2, 2]),
        ] {
            let f = block_grid_family(k, &dims, &degs).unwrap();
            let mut displayed = BigInt::one();
            for i in 0..degs.len() {
                displayed *= BigInt::from(degs[i]).pow((dims[i] - dims[i + 1]) as u32);
            }
            assert_eq!(BigInt::from(2).pow(k as u32) * &f.exact_count, displayed);
        }
    }

    #[test]
    fn zeros_are_unit_separated() {
        let f = grid_family(4).unwrap();
        assert_eq!(min_pairwise_distance_sq(&f.zero_points), Some(int(1)));
        let f = block_grid_family(3, &[3, 1, 0], &[4, 4]).unwrap();
        assert_eq!(min_pairwise_distance_sq(&f.zero_points), Some(int(1)));
    }

    #[test]
    fn structural_bound_dominates_exact_counts_on_sweeps() {
        for d in 1..=5 {
            let f = grid_family(d).unwrap();
            let r = structural_bound(&f.profile, &BigRational::one()).unwrap();
            assert!(r.structural_sum >= f.exact_count, "d = {d}");
        }
        for (k, dims, degs) in [
            (2usize, vec![2usize, 1, 0], vec![2u64, 2]),
            (2, vec![2, 1, 0], vec![2, 4]),
            (3, vec![3, 2, 1, 0], vec![2, 2, 2]),
            (4, vec![4, 2, 1, 0], vec![2, 4, 4]),
        ] {
            let f = block_grid_family(k, &dims, &degs).unwrap();
            let r = structural_bound(&f.profile, &BigRational::one()).unwrap();
            assert!(r.structural_sum >= f.exact_count, "k = {k} dims = {dims:?}");
        }
    }
}
