/// Associated Laguerre polynomial L_n^α(x) by the three-term recurrence
/// `(k+1) L_{k+1} = (2k + 1 + α − x) L_k − (k + α) L_{k−1}`.
pub fn laguerre(n: usize, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// All of L_0^α(x), ..., L_{n_max}^α(x).
pub fn laguerre_all(n_max: usize, alpha: f64, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(1.0);
    if n_max == 0 {
        return out;
    }
    out.push(1.0 + alpha - x);
    for k in 1..n_max {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * out[k] - (kf + alpha) * out[k - 1]) / (kf + 1.0);
        out.push(next);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn closed_form(n: usize, a: f64, x: f64) -> f64 {
        match n {
            0 => 1.0,
            1 => 1.0 + a - x,
            2 => x * x / 2.0 - (a + 2.0) * x + (a + 1.0) * (a + 2.0) / 2.0,
            3 => {
                -x * x * x / 6.0 + (a + 3.0) * x * x / 2.0 - (a + 2.0) * (a + 3.0) * x / 2.0
                    + (a + 1.0) * (a + 2.0) * (a + 3.0) / 6.0
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn low_order_examples() {
        assert_eq!(laguerre(0, 0.3, 2.0), 1.0);
        assert_eq!(laguerre(1, 0.3, 2.0), 1.0 + 0.3 - 2.0);
        assert_relative_eq!(laguerre(2, 0.5, 1.0), -0.125, max_relative = 1e-15);
    }

    #[test]
    fn value_at_origin_is_binomial() {
        // L_n^α(0) = (α+1)_n / n!
        let alpha = -0.25;
        let mut expected = 1.0;
        for n in 0..25 {
            if n > 0 {
                expected *= (alpha + n as f64) / n as f64;
            }
            assert_relative_eq!(laguerre(n, alpha, 0.0), expected, max_relative = 1e-13);
        }
    }

    #[test]
    fn all_matches_single() {
        let all = laguerre_all(30, 1.0, 3.7);
        for (n, v) in all.iter().enumerate() {
            assert_eq!(*v, laguerre(n, 1.0, 3.7));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]
        #[test]
        fn recurrence_matches_closed_forms(a in -0.99f64..4.0, x in 0.0f64..10.0) {
            for n in 0..=3 {
                let lhs = laguerre(n, a, x);
                let rhs = closed_form(n, a, x);
                prop_assert!((lhs - rhs).abs() <= 1e-13 * rhs.abs().max(1.0));
            }
        }
    }
}
