/// Exact Euclidean projection of z onto {p : p >= 0, p'y = 0}.
///
/// The projection has the form p_i = max(z_i - lam * y_i, 0) where lam is the
/// multiplier of the equality constraint. h(lam) = y' p(lam) is piecewise
/// linear and nonincreasing in lam, with breakpoints z_i (for y_i = +1) and
/// -z_i (for y_i = -1). On each segment h(lam) = s - m * lam, where s sums
/// z_i over the currently active entries (sign-weighted) and m counts them,
/// so the root is found in closed form by walking the sorted breakpoints.
pub fn project_onto_constraints(z: &[f64], y: &[f64]) -> Vec<f64> {
    let n = z.len();
    assert_eq!(y.len(), n);
    let apply = |lam: f64| -> Vec<f64> {
        (0..n).map(|i| (z[i] - lam * y[i]).max(0.0)).collect()
    };

    let bp: Vec<f64> = (0..n)
        .map(|i| if y[i] > 0.0 { z[i] } else { -z[i] })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| bp[a].partial_cmp(&bp[b]).unwrap());

    // below every breakpoint all +1 entries are active, no -1 entries are
    let mut s: f64 = (0..n).filter(|&i| y[i] > 0.0).map(|i| z[i]).sum();
    let mut m: i64 = (0..n).filter(|&i| y[i] > 0.0).count() as i64;
    let mut lo = f64::NEG_INFINITY;

    for k in 0..=n {
        let hi = if k < n { bp[order[k]] } else { f64::INFINITY };
        if m > 0 {
            let lam = s / m as f64;
            if lo <= lam && lam <= hi {
                return apply(lam);
            }
        } else if s == 0.0 {
            // h vanishes identically on this segment; any lam works
            let lam = if lo.is_finite() { lo } else { hi };
            return apply(lam);
        }
        if k < n {
            let idx = order[k];
            s -= z[idx];
            if y[idx] > 0.0 {
                m -= 1;
            } else {
                m += 1;
            }
            lo = hi;
        }
    }
    // unreachable for finite inputs: h(-inf) >= 0 >= h(+inf) guarantees a root
    apply(bp[order[n - 1]])
}
