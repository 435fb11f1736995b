use alloc::vec;
use alloc::vec::Vec;

use crate::arith::{int, lagrange_interpolate, Matrix, Poly, Rational, Scalar};
use crate::error::{Error, Result};
use crate::model::{CompartmentModel, Param, ParameterPoint};

/// Largest model the cycle oracle accepts.
pub const ORACLE_MAX_N: usize = 8;

/// `det(λI - A)` by Faddeev–LeVerrier. Monic of degree `n`; the only
/// divisions are by the integers `1..=n`.
pub fn char_poly<T: Scalar>(a: &Matrix<T>) -> Result<Poly<T>> {
    if !a.is_square() {
        return Err(crate::arith::ArithError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        }
        .into());
    }
    let n = a.rows();
    let mut coeffs = vec![T::zero(); n + 1];
    coeffs[n] = T::one();
    // am = A·M_k; M_{k+1} = am + c_{n-k} I.
    let mut am: Matrix<T> = Matrix::zeros(n, n);
    for k in 1..=n {
        let mut m = am;
        for d in 0..n {
            let v = m.get(d, d).clone() + coeffs[n - k + 1].clone();
            m.set(d, d, v);
        }
        am = a.mul(&m)?;
        let k_inv = int(k as i64).recip();
        coeffs[n - k] = -am.trace().scale(&k_inv);
    }
    Ok(Poly::new(coeffs))
}

/// Independent evaluation of `det(λI - A)` from the model's cycles.
///
/// `f[S]` is the principal minor of `A` on vertex set `S`, expanded as a
/// signed sum over covers of `S` by vertex-disjoint cycles (self-cycles are
/// the diagonal entries; odd cycles count `+`, even cycles `-`). The
/// coefficient of `λ^(n-k)` is `(-1)^k Σ_{|S|=k} f[S]`.
pub fn char_poly_cycle_oracle(
    model: &CompartmentModel,
    point: &ParameterPoint,
) -> Result<Poly<Rational>> {
    let n = model.n();
    if n > ORACLE_MAX_N {
        return Err(Error::OracleTooLarge {
            n,
            max: ORACLE_MAX_N,
        });
    }
    point.check(model)?;
    let rate = |p: Param| point.get(p).expect("checked").clone();
    let g = model.graph();

    // (mask, signed weight) grouped by smallest vertex.
    let mut by_min: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); n];
    for i in 1..=n {
        let mut diag = if model.leaks().contains(&i) {
            -rate(Param::Leak(i))
        } else {
            int(0)
        };
        for &k in g.successors(i) {
            diag -= rate(Param::Edge(crate::graph::Edge::new(i, k)));
        }
        by_min[i - 1].push((1 << (i - 1), diag));
    }
    for cycle in g.simple_cycles() {
        let mut w = int(1);
        let mut mask = 0usize;
        for e in cycle.edges() {
            w *= rate(Param::Edge(e));
            mask |= 1 << (e.from - 1);
        }
        if cycle.len() % 2 == 0 {
            w = -w;
        }
        by_min[cycle.vertices()[0] - 1].push((mask, w));
    }

    let full = 1usize << n;
    let mut f = vec![int(0); full];
    f[0] = int(1);
    let mut coeffs = vec![int(0); n + 1];
    coeffs[n] = int(1);
    for s in 1..full {
        let low = s.trailing_zeros() as usize;
        let mut acc = int(0);
        for (mask, w) in &by_min[low] {
            if mask & !s == 0 {
                acc += w * &f[s & !mask];
            }
        }
        let k = s.count_ones() as usize;
        if k.is_multiple_of(2) {
            coeffs[n - k] += &acc;
        } else {
            coeffs[n - k] -= &acc;
        }
        f[s] = acc;
    }
    Ok(Poly::new(coeffs))
}

/// `det` of `λI - A` with row `j` and column `i` deleted (1-indexed), by
/// evaluation at `λ = 0, 1, …, n-1` and interpolation.
pub fn minor_det_poly<T: Scalar>(a: &Matrix<T>, j: usize, i: usize) -> Result<Poly<T>> {
    let n = a.rows();
    if !a.is_square() {
        return Err(crate::arith::ArithError::NotSquare {
            rows: n,
            cols: a.cols(),
        }
        .into());
    }
    for v in [i, j] {
        if v == 0 || v > n {
            return Err(crate::graph::GraphError::VertexOutOfRange { vertex: v, n }.into());
        }
    }
    let nodes: Vec<Rational> = (0..n as i64).map(int).collect();
    let mut values = Vec::with_capacity(n);
    for node in &nodes {
        let mut m = a.map(|x| -x.clone());
        for d in 0..n {
            let v = m.get(d, d).clone() + T::from_rational(node.clone());
            m.set(d, d, v);
        }
        values.push(m.minor(j - 1, i - 1).det()?);
    }
    Ok(lagrange_interpolate(&nodes, &values)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Dual;
    use crate::graph::DirectedGraph;
    use crate::model::tests::{arb_model, three_cycle};
    use crate::model::{build_matrix, random_point};
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn char_poly_examples() {
        let a = Matrix::from_rows(vec![vec![int(-3)]]);
        assert_eq!(char_poly(&a).unwrap().coeffs(), &[int(3), int(1)]);

        let (p, q, r, s) = (rat(2, 3), rat(-5, 7), rat(11, 2), rat(1, 9));
        let a = Matrix::from_rows(vec![vec![p.clone(), q.clone()], vec![r.clone(), s.clone()]]);
        let expected = [&p * &s - &q * &r, -(&p + &s), int(1)];
        assert_eq!(char_poly(&a).unwrap().coeffs(), &expected);
    }

    #[test]
    fn three_cycle_linear_coefficient() {
        let m = three_cycle(&[1, 2, 3], &[1]);
        let point = random_point(&m, 3);
        let a: Matrix<Rational> = build_matrix(&m, &point, None).unwrap();
        let (a11, a22, a33) = (a.get(0, 0), a.get(1, 1), a.get(2, 2));
        let e2 = a11 * a22 + a11 * a33 + a22 * a33;
        let expected = e2 - a.get(0, 1) * a.get(1, 0);
        assert_eq!(char_poly(&a).unwrap().coeff(1), expected);
    }

    #[test]
    fn oracle_examples() {
        let m = three_cycle(&[1, 2, 3], &[1]);
        let point = random_point(&m, 9);
        let a: Matrix<Rational> = build_matrix(&m, &point, None).unwrap();
        assert_eq!(
            char_poly_cycle_oracle(&m, &point).unwrap(),
            char_poly(&a).unwrap()
        );

        let isolated = CompartmentModel::new(
            DirectedGraph::from_pairs(3, &[]).unwrap(),
            [1],
            [1],
            [1, 2, 3],
        )
        .unwrap();
        let p = crate::model::ParameterPoint::from_values(&isolated, [int(2), int(3), int(5)]);
        let expected = Poly::new(vec![int(2), int(1)])
            .mul(&Poly::new(vec![int(3), int(1)]))
            .mul(&Poly::new(vec![int(5), int(1)]));
        assert_eq!(char_poly_cycle_oracle(&isolated, &p).unwrap(), expected);

        // λ(λ + a12 + a21) for a leak-free 2-cycle
        let two = CompartmentModel::new(
            DirectedGraph::from_pairs(2, &[(1, 2), (2, 1)]).unwrap(),
            [1],
            [1],
            [],
        )
        .unwrap();
        let p = crate::model::ParameterPoint::from_values(&two, [int(4), int(6)]);
        assert_eq!(
            char_poly_cycle_oracle(&two, &p).unwrap().coeffs(),
            &[int(0), int(10), int(1)]
        );

        let big = CompartmentModel::new(DirectedGraph::from_pairs(9, &[]).unwrap(), [1], [1], [])
            .unwrap();
        assert_eq!(
            char_poly_cycle_oracle(&big, &Default::default()),
            Err(Error::OracleTooLarge { n: 9, max: 8 })
        );
    }

    #[test]
    fn minor_examples() {
        let a = Matrix::from_rows(vec![vec![int(1), int(2)], vec![int(3), int(4)]]);
        // λ - A22
        assert_eq!(
            minor_det_poly(&a, 1, 1).unwrap().coeffs(),
            &[int(-4), int(1)]
        );

        let m = three_cycle(&[1, 2, 3], &[1]);
        let point = random_point(&m, 4);
        let a: Matrix<Rational> = build_matrix(&m, &point, None).unwrap();
        let (a22, a33) = (a.get(1, 1), a.get(2, 2));
        // λ² - E1(a22, a33) λ + E2(a22, a33) - a23 a32
        let e2 = a22 * a33 - a.get(1, 2) * a.get(2, 1);
        let expected = [e2, -(a22 + a33), int(1)];
        assert_eq!(minor_det_poly(&a, 1, 1).unwrap().coeffs(), &expected);
    }

    /// `det(A_ji) = (-1)^(i+j+1) ∂ char(λ, A) / ∂A[j][i]`.
    pub(crate) fn minor_by_derivative(a: &Matrix<Rational>, j: usize, i: usize) -> Poly<Rational> {
        let mut d = a.map(|x| Dual::constant(x.clone()));
        d.set(j - 1, i - 1, Dual::variable(a.get(j - 1, i - 1).clone()));
        let cp = char_poly(&d).unwrap();
        let sign = if (i + j + 1).is_multiple_of(2) {
            int(1)
        } else {
            int(-1)
        };
        Poly::new(cp.coeffs().iter().map(|c| &c.deriv * &sign).collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn char_poly_matches_oracle(model in arb_model(), seed in any::<u64>()) {
            let point = random_point(&model, seed);
            let a: Matrix<Rational> = build_matrix(&model, &point, None).unwrap();
            prop_assert_eq!(char_poly(&a).unwrap(), char_poly_cycle_oracle(&model, &point).unwrap());
        }

        #[test]
        fn minor_matches_derivative(model in arb_model(), seed in any::<u64>()) {
            let point = random_point(&model, seed);
            let a: Matrix<Rational> = build_matrix(&model, &point, None).unwrap();
            let n = model.n();
            for j in 1..=n {
                for i in 1..=n {
                    let m = minor_det_poly(&a, j, i).unwrap();
                    prop_assert_eq!(&m, &minor_by_derivative(&a, j, i));
                    if i == j {
                        prop_assert_eq!(m.degree(), Some(n - 1));
                        prop_assert!(m.is_monic());
                    }
                }
            }
        }

        #[test]
        fn dual_char_poly_values_match_rational(model in arb_model(), seed in any::<u64>()) {
            let point = random_point(&model, seed);
            let a: Matrix<Rational> = build_matrix(&model, &point, None).unwrap();
            let plain = char_poly(&a).unwrap();
            for p in model.parameters() {
                let d: Matrix<Dual> = build_matrix(&model, &point, Some(p)).unwrap();
                let cp = char_poly(&d).unwrap();
                let values: Vec<Rational> = cp.coeffs().iter().map(|c| c.value.clone()).collect();
                prop_assert_eq!(values.as_slice(), plain.coeffs());
            }
        }
    }
}
