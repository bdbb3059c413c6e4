use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::graph::{circulant_small_world, random_k_regular, Graph};

const SQRT5: f64 = 2.23606797749979;

fn cycle(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::new(n, &edges).unwrap()
}

/// Closed-form circulant eigenvalues 2 sum_m cos(2 pi j m / n).
fn circulant_eigs(n: usize, k: usize) -> Vec<f64> {
    (0..n)
        .map(|j| {
            2.0 * (1..=k / 2)
                .map(|m| (2.0 * std::f64::consts::PI * (j * m) as f64 / n as f64).cos())
                .sum::<f64>()
        })
        .collect()
}

#[test]
fn two_node_path_spectrum() {
    let g = Graph::new(2, &[(0, 1)]).unwrap();
    let s = adjacency_spectrum(&g, 1e-12).unwrap();
    assert!((s[0] - 1.0).abs() < 1e-12);
    assert!((s[1] + 1.0).abs() < 1e-12);
}

#[test]
fn six_cycle_magnitude_order_breaks_ties_by_sign() {
    let s = adjacency_spectrum(&cycle(6), 1e-12).unwrap();
    let expect = [2.0, -2.0, 1.0, 1.0, -1.0, -1.0];
    for (a, b) in s.iter().zip(expect) {
        assert!((a - b).abs() < 1e-9, "{s:?}");
    }
}

#[test]
fn circulant_10_4_matches_closed_form() {
    let g = circulant_small_world(10, 4).unwrap();
    let s = adjacency_spectrum(&g, 1e-12).unwrap();
    let mut expect = circulant_eigs(10, 4);
    expect.sort_by(f64::total_cmp);
    let mut got = s.clone();
    got.sort_by(f64::total_cmp);
    for (a, b) in got.iter().zip(&expect) {
        assert!((a - b).abs() < 1e-10);
    }
    // second-largest magnitude is sqrt(5) = 2.236...
    assert!((s[1].abs() - SQRT5).abs() < 1e-10);
}

#[test]
fn spectrum_with_self_loops_shifts_diagonal() {
    // Single node with two loops: A = [2].
    let g = Graph::with_self_loops(1, &[], &[2]).unwrap();
    assert_eq!(adjacency_spectrum(&g, 1e-12).unwrap(), vec![2.0]);
}

mod charpoly_oracle {
    //! Independent route to the adjacency spectrum for small graphs: exact
    //! characteristic polynomial coefficients by Faddeev-LeVerrier, then
    //! root isolation using the interlacing roots of the derivative, which
    //! is valid because symmetric matrices have real-rooted charpolys.

    use super::*;
    use crate::linalg::Mat;

    fn charpoly(a: &Mat) -> Vec<f64> {
        let n = a.n();
        let mut c = vec![0.0; n + 1];
        c[n] = 1.0;
        let mut m = a.clone();
        for k in 1..=n {
            let tr: f64 = (0..n).map(|i| m.get(i, i)).sum();
            c[n - k] = -tr / k as f64;
            if k == n {
                break;
            }
            // m <- a * (m + c[n-k] I)
            let mut shifted = m.clone();
            for i in 0..n {
                shifted.set(i, i, shifted.get(i, i) + c[n - k]);
            }
            let mut next = Mat::zeros(n);
            for i in 0..n {
                for j in 0..n {
                    let mut acc = 0.0;
                    for l in 0..n {
                        acc += a.get(i, l) * shifted.get(l, j);
                    }
                    next.set(i, j, acc);
                }
            }
            m = next;
        }
        c
    }

    fn eval(c: &[f64], x: f64) -> f64 {
        c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
    }

    /// Size of the polynomial near x, used to decide whether a critical
    /// point is a genuine (multiple) root. Floored by the coefficient scale
    /// so that roots at the origin of polynomials with zero constant term
    /// are still recognized.
    fn eval_scale(c: &[f64], x: f64) -> f64 {
        let coeff_max = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        coeff_max * x.abs().max(1.0).powi(c.len() as i32 - 1)
    }

    fn bisect(c: &[f64], mut lo: f64, mut hi: f64) -> f64 {
        let mut flo = eval(c, lo);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let fm = eval(c, mid);
            if (fm >= 0.0) == (flo >= 0.0) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// All real roots (with multiplicity, ascending) of a real-rooted
    /// polynomial given by ascending coefficients.
    fn real_roots(c: &[f64]) -> Vec<f64> {
        let d = c.len() - 1;
        if d == 0 {
            return Vec::new();
        }
        if d == 1 {
            return vec![-c[0] / c[1]];
        }
        let deriv: Vec<f64> = (1..=d).map(|i| c[i] * i as f64).collect();
        let crit = real_roots(&deriv);
        let bound = 1.0
            + c[..d]
                .iter()
                .map(|v| (v / c[d]).abs())
                .fold(0.0f64, f64::max);
        let is_root = |x: f64| eval(c, x).abs() <= 1e-9 * eval_scale(c, x);
        let mut roots = Vec::with_capacity(d);
        let mut i = 0;
        while i < crit.len() {
            let mut j = i + 1;
            while j < crit.len() && (crit[j] - crit[i]).abs() <= 1e-9 * bound {
                j += 1;
            }
            if is_root(crit[i]) {
                // multiplicity in p is multiplicity in p' plus one
                for _ in 0..=(j - i) {
                    roots.push(crit[i]);
                }
            }
            i = j;
        }
        let mut pts = Vec::with_capacity(crit.len() + 2);
        pts.push(-bound);
        pts.extend_from_slice(&crit);
        pts.push(bound);
        for w in pts.windows(2) {
            if w[1] <= w[0] || is_root(w[0]) || is_root(w[1]) {
                continue;
            }
            if (eval(c, w[0]) >= 0.0) != (eval(c, w[1]) >= 0.0) {
                roots.push(bisect(c, w[0], w[1]));
            }
        }
        roots.sort_by(f64::total_cmp);
        roots
    }

    pub fn spectrum(g: &Graph) -> Vec<f64> {
        let a = g.adjacency();
        let c = charpoly(&a);
        let roots = real_roots(&c);
        assert_eq!(roots.len(), g.n(), "root count for {:?}", g.edges());
        let trace: f64 = (0..g.n()).map(|i| a.get(i, i)).sum();
        let sum: f64 = roots.iter().sum();
        assert!((sum - trace).abs() < 1e-7, "trace check for {:?}", g.edges());
        roots
    }

    #[test]
    fn agrees_with_jacobi_on_all_graphs_up_to_n6() {
        let mut checked = 0usize;
        for n in 1..=6usize {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .collect();
            for mask in 0u32..1 << pairs.len() {
                let edges: Vec<(usize, usize)> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| mask >> b & 1 == 1)
                    .map(|(_, &e)| e)
                    .collect();
                let g = Graph::new(n, &edges).unwrap();
                let mut jac = adjacency_spectrum(&g, 1e-12).unwrap();
                jac.sort_by(f64::total_cmp);
                let oracle = spectrum(&g);
                for (a, b) in jac.iter().zip(&oracle) {
                    assert!(
                        (a - b).abs() < 1e-8,
                        "n={n} mask={mask}: {jac:?} vs {oracle:?}"
                    );
                }
                checked += 1;
            }
        }
        assert_eq!(checked, 1 + 2 + 8 + 64 + 1024 + 32768);
    }

    #[test]
    fn agrees_with_jacobi_on_random_loop_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..300 {
            let n = 2 + rand::Rng::random_range(&mut rng, 0..5usize);
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .collect();
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .filter(|_| rand::Rng::random_bool(&mut rng, 0.5))
                .copied()
                .collect();
            let loops: Vec<usize> = (0..n)
                .map(|_| rand::Rng::random_range(&mut rng, 0..3usize))
                .collect();
            let g = Graph::with_self_loops(n, &edges, &loops).unwrap();
            let mut jac = adjacency_spectrum(&g, 1e-12).unwrap();
            jac.sort_by(f64::total_cmp);
            let oracle = spectrum(&g);
            for (a, b) in jac.iter().zip(&oracle) {
                assert!((a - b).abs() < 1e-8, "{jac:?} vs {oracle:?}");
            }
        }
    }
}

#[test]
fn mu_tilde_on_circulant() {
    let g = circulant_small_world(10, 4).unwrap();
    let s = adjacency_spectrum(&g, 1e-12).unwrap();
    let mt = mu_tilde(&s, 4, 1e-9).unwrap();
    assert!((mt - SQRT5).abs() < 1e-9);
}

#[test]
fn mu_tilde_skips_both_ends_for_bipartite() {
    let s = adjacency_spectrum(&cycle(6), 1e-12).unwrap();
    assert!((mu_tilde(&s, 2, 1e-9).unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn mu_tilde_on_complete_graph() {
    let g = circulant_small_world(5, 4).unwrap(); // K5
    let s = adjacency_spectrum(&g, 1e-12).unwrap();
    assert!((mu_tilde(&s, 4, 1e-9).unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn mu_tilde_errors_when_no_interior_eigenvalue() {
    // K2 is 1-regular with spectrum {1, -1}: both on the boundary.
    let g = Graph::new(2, &[(0, 1)]).unwrap();
    let s = adjacency_spectrum(&g, 1e-12).unwrap();
    assert!(matches!(
        mu_tilde(&s, 1, 1e-9),
        Err(Error::DegenerateSpectrum(_))
    ));
}

#[test]
fn lambda_pair_at_mu_equals_k() {
    for rho in [0.1, 0.25, 0.4] {
        let (a, b) = lambda_pair(4.0, 4, rho);
        let mut got = [a.re, b.re];
        got.sort_by(f64::total_cmp);
        let mut expect = [1.0, rho * 4.0 - 1.0];
        expect.sort_by(f64::total_cmp);
        assert!(a.im == 0.0 && b.im == 0.0);
        assert!((got[0] - expect[0]).abs() < 1e-12);
        assert!((got[1] - expect[1]).abs() < 1e-12);
    }
}

#[test]
fn lambda_pair_double_root_at_rho_k_one() {
    // rho k = 1 with mu = 0: discriminant 0, both roots at 0.
    let (a, b) = lambda_pair(0.0, 4, 0.25);
    assert!(a.norm() < 1e-12 && b.norm() < 1e-12);
}

#[test]
fn lambda_pair_repeated_root_near_rho_opt() {
    let (a, b) = lambda_pair(2.2360679, 4, 0.2733631);
    assert!((a.norm() - 0.3056).abs() < 1e-3);
    assert!((b.norm() - 0.3056).abs() < 1e-3);
}

#[test]
fn lambda_magnitude_goldens() {
    assert!((lambda_magnitude(4.0, 4, 0.25) - 1.0).abs() < 1e-12);
    let r = rho_opt(SQRT5, 4).unwrap();
    assert!((lambda_magnitude(SQRT5, 4, r) - 0.3056146845806992).abs() < 1e-7);
    assert!((lambda_magnitude(0.0, 4, 0.1) - 0.6f64.sqrt()).abs() < 1e-12);
}

#[test]
fn rho_opt_goldens() {
    let r = rho_opt(SQRT5, 4).unwrap();
    assert!((r - 0.27335008385784004).abs() < 1e-12);
    // discriminant of the mu_tilde pair vanishes at rho_opt
    let disc = SQRT5 * SQRT5 * r * r - 16.0 * r + 4.0;
    assert!(disc.abs() < 1e-12);
    // the literal from the small-world worked example
    let r = rho_opt(2.2360679, 4).unwrap();
    assert!((r - 0.27335008190576016).abs() < 1e-10);
    // mu_tilde -> k limit gives 2/k
    assert!((rho_opt(4.0 - 1e-9, 4).unwrap() - 0.5).abs() < 1e-4);
    // mu_tilde = 2 sqrt(k-1) at k = 4 gives exactly 1/3
    let r = rho_opt(2.0 * 3f64.sqrt(), 4).unwrap();
    assert!((r - 1.0 / 3.0).abs() < 1e-12);
}

#[test]
fn rho_opt_domain_errors() {
    assert!(rho_opt(0.0, 4).is_err());
    assert!(rho_opt(4.0, 4).is_err());
    assert!(rho_opt(5.0, 4).is_err());
    assert!(rho_opt(1.0, 1).is_err());
}

#[test]
fn lambda_tilde_opt_goldens() {
    assert!((lambda_tilde_opt(SQRT5, 4).unwrap() - 0.3056146845806992).abs() < 1e-12);
    let l = lambda_tilde_opt(2.0 * 3f64.sqrt(), 4).unwrap();
    assert!((l - 1.0 / 3f64.sqrt()).abs() < 1e-12);
    // matches the magnitude map evaluated at rho_opt
    for mt in [0.5, 1.7, 2.9, 3.6] {
        let via_map = lambda_magnitude(mt, 4, rho_opt(mt, 4).unwrap());
        assert!((lambda_tilde_opt(mt, 4).unwrap() - via_map).abs() < 1e-7);
    }
    // decreases to 0 as mu_tilde -> 0+
    let mut prev = f64::INFINITY;
    for e in 1..=8 {
        let v = lambda_tilde_opt(10f64.powi(-e), 4).unwrap();
        assert!(v < prev);
        prev = v;
    }
    assert!(prev < 1e-8);
}

#[test]
fn limit_rates_goldens() {
    let l4 = limit_rates(4).unwrap();
    assert!((l4.rho_opt - 1.0 / 3.0).abs() < 1e-12);
    assert!((l4.lambda_bpc - 0.5773502691896258).abs() < 1e-12);
    assert!((l4.lambda_metropolis - 0.8928203230275509).abs() < 1e-12);
    // At k = 3 the expressions evaluate to (1/2, 1/sqrt(2), (1+2 sqrt(2))/4).
    let l3 = limit_rates(3).unwrap();
    assert!((l3.rho_opt - 0.5).abs() < 1e-12);
    assert!((l3.lambda_bpc - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    assert!((l3.lambda_metropolis - 0.9571067811865476).abs() < 1e-12);
    assert!(limit_rates(2).is_err());
}

#[test]
fn limit_bpc_always_beats_metropolis() {
    for k in 3..=60 {
        let l = limit_rates(k).unwrap();
        assert!(l.lambda_bpc < l.lambda_metropolis, "k = {k}");
        assert!(l.rho_opt > 0.0 && l.rho_opt < 2.0 / k as f64);
    }
}

#[test]
fn competitor_rate_laplacian_on_circulant() {
    let g = circulant_small_world(10, 4).unwrap();
    let r = competitor_rate(&g, &WeightScheme::LaplacianStep(0.25)).unwrap();
    assert!((r - 0.5590169943749475).abs() < 1e-9);
}

#[test]
fn competitor_rate_two_node_metropolis_is_zero() {
    let g = Graph::new(2, &[(0, 1)]).unwrap();
    let r = competitor_rate(&g, &WeightScheme::Metropolis).unwrap();
    assert!(r.abs() < 1e-9);
}

#[test]
fn competitor_rate_five_cycle_metropolis_closed_form() {
    // W = (A + I)/3, rate = (1 + 2 cos(2 pi / 5)) / 3.
    let g = cycle(5);
    let expect = (1.0 + 2.0 * (2.0 * std::f64::consts::PI / 5.0).cos()) / 3.0;
    let r = competitor_rate(&g, &WeightScheme::Metropolis).unwrap();
    assert!((r - expect).abs() < 1e-10);
    assert!((r - 0.5393446629166316).abs() < 1e-10);
}

#[test]
fn metropolis_shortcut_matches_weight_matrix_route() {
    // On a regular graph, uniform weights at xi = 1/(k+1) give the same W
    // as Metropolis; the uniform scheme takes the generic dense route.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for k in [3usize, 4] {
        for n in [12usize, 30] {
            let g = random_k_regular(n, k, &mut rng).unwrap();
            let via_spectrum = competitor_rate(&g, &WeightScheme::Metropolis).unwrap();
            let xi = 1.0 / (k as f64 + 1.0);
            let via_w = competitor_rate(&g, &WeightScheme::UniformWeight(xi)).unwrap();
            assert!(
                (via_spectrum - via_w).abs() < 1e-9,
                "n={n} k={k}: {via_spectrum} vs {via_w}"
            );
        }
    }
}

#[test]
fn competitor_rate_validates_parameters() {
    let g = cycle(5);
    assert!(competitor_rate(&g, &WeightScheme::UniformWeight(0.6)).is_err());
    assert!(competitor_rate(&g, &WeightScheme::LaplacianStep(0.9)).is_err());
    let disconnected = Graph::new(4, &[(0, 1), (2, 3)]).unwrap();
    assert!(matches!(
        competitor_rate(&disconnected, &WeightScheme::Metropolis),
        Err(Error::Disconnected)
    ));
}

#[test]
fn competitor_rate_ignores_self_loops() {
    let g = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
    let with_loops = Graph::with_self_loops(5, g.edges(), &[1, 0, 2, 0, 0]).unwrap();
    let a = competitor_rate(&g, &WeightScheme::Metropolis).unwrap();
    let b = competitor_rate(&with_loops, &WeightScheme::Metropolis).unwrap();
    assert_eq!(a, b);
}

#[test]
fn power_route_agrees_with_dense_route() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let g = random_k_regular(240, 4, &mut rng).unwrap();
    let spectrum = adjacency_spectrum(&g, 1e-12).unwrap();
    let dense_mt = mu_tilde(&spectrum, 4, 1e-9).unwrap();
    let power_mt = mu_tilde_power(&g).unwrap();
    assert!((dense_mt - power_mt).abs() < 1e-6, "{dense_mt} vs {power_mt}");
    let dense_rate = metropolis_rate_from_spectrum(&spectrum, 4);
    let power_rate = metropolis_rate_power(&g).unwrap();
    assert!((dense_rate - power_rate).abs() < 1e-6);
}

#[test]
fn power_route_rejects_bipartite() {
    assert!(mu_tilde_power(&cycle(6)).is_err());
}

#[test]
fn regular_spectrum_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for k in [3usize, 4, 6] {
        let g = random_k_regular(40, k, &mut rng).unwrap();
        let s = adjacency_spectrum(&g, 1e-12).unwrap();
        assert!((s[0] - k as f64).abs() < 1e-9);
        assert!(s.iter().all(|m| m.abs() <= k as f64 + 1e-9));
        let mt = mu_tilde(&s, k, 1e-9).unwrap();
        let r = rho_opt(mt, k).unwrap();
        assert!(r > 0.0 && r < 2.0 / k as f64);
        let l = lambda_tilde_opt(mt, k).unwrap();
        assert!((0.0..1.0).contains(&l));
    }
}

#[test]
fn report_json_format() {
    let report = SpectralReport {
        mu: vec![1.0, -1.0],
        mu_tilde: None,
        rho_opt: None,
        lambda_tilde_mag: None,
        lambda2_metropolis: 0.0,
        lambda2_uniform: 0.5,
        lambda_urwbpc_empirical: None,
        bipartite: true,
    };
    let json = report.to_json();
    assert_eq!(
        json,
        "{\"mu\":[1.0000000000000000e0,-1.0000000000000000e0],\
         \"mu_tilde\":null,\"rho_opt\":null,\"lambda_tilde_mag\":null,\
         \"lambda2_metropolis\":0.0000000000000000e0,\
         \"lambda2_uniform\":5.0000000000000000e-1,\
         \"lambda_urwbpc_empirical\":null,\"bipartite\":true}"
    );
    let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(parsed["lambda2_uniform"].as_f64().unwrap(), 0.5);
    assert_eq!(parsed["bipartite"].as_bool().unwrap(), true);
}

proptest! {
    #[test]
    fn root_sum_and_product_identities(
        k in 2usize..12,
        mu_frac in -1.0f64..1.0,
        rho_frac in 0.01f64..0.995,
    ) {
        let mu = mu_frac * k as f64;
        let rho = rho_frac * 2.0 / k as f64;
        let (a, b) = lambda_pair(mu, k, rho);
        let prod = a * b;
        let sum = a + b;
        let ev = rho * k as f64 - 1.0;
        prop_assert!((prod.re - ev).abs() <= 1e-10 * (1.0 + ev.abs()));
        prop_assert!(prod.im.abs() <= 1e-10);
        prop_assert!((sum.re - mu * rho).abs() <= 1e-10 * (1.0 + (mu * rho).abs()));
        prop_assert!(sum.im.abs() <= 1e-10);
    }

    #[test]
    fn complex_pair_has_sqrt_magnitude(
        k in 2usize..12,
        mu_frac in -0.999f64..0.999,
        rho_frac in 0.01f64..0.995,
    ) {
        let mu = mu_frac * k as f64;
        let rho = rho_frac * 2.0 / k as f64;
        let disc = mu * mu * rho * rho - 4.0 * k as f64 * rho + 4.0;
        prop_assume!(disc < 0.0);
        let (a, b) = lambda_pair(mu, k, rho);
        let expect = (rho * k as f64 - 1.0).abs().sqrt();
        prop_assert!((a.norm() - expect).abs() < 1e-12);
        prop_assert!((b.norm() - expect).abs() < 1e-12);
    }

    #[test]
    fn magnitude_symmetric_in_mu(
        k in 2usize..12,
        mu_frac in 0.0f64..1.0,
        rho_frac in 0.01f64..0.995,
    ) {
        // |lambda_a(mu)| = |lambda_b(-mu)|: the dominant magnitude is even.
        let mu = mu_frac * k as f64;
        let rho = rho_frac * 2.0 / k as f64;
        let plus = lambda_magnitude(mu, k, rho);
        let minus = lambda_magnitude(-mu, k, rho);
        prop_assert!((plus - minus).abs() < 1e-12);
        // and it really is the max of the pair
        let (a, b) = lambda_pair(mu, k, rho);
        prop_assert!((plus - a.norm().max(b.norm())).abs() < 1e-14);
    }

    #[test]
    fn magnitude_nondecreasing_on_positive_mu(
        k in 2usize..12,
        rho_frac in 0.01f64..0.995,
    ) {
        let rho = rho_frac * 2.0 / k as f64;
        let mut prev = -1.0f64;
        for step in 0..=60 {
            let mu = k as f64 * step as f64 / 60.0;
            let mag = lambda_magnitude(mu, k, rho);
            prop_assert!(mag >= prev - 1e-12, "mu={mu} rho={rho}: {mag} < {prev}");
            prev = mag;
        }
    }

    #[test]
    fn inside_interval_contracts_outside_does_not(
        k in 2usize..12,
        mu_frac in 0.05f64..0.999,
        rho_frac in 0.01f64..0.99,
    ) {
        let mu = mu_frac * k as f64;
        let rho = rho_frac * 2.0 / k as f64;
        prop_assert!(lambda_magnitude(mu, k, rho) < 1.0);
        // at the mu = k branch, rho >= 2/k pins |lambda| = rho k - 1 >= 1
        let rho_out = 2.0 / k as f64 * (1.0 + rho_frac);
        prop_assert!(lambda_magnitude(k as f64, k, rho_out) >= 1.0 - 1e-12);
    }

    #[test]
    fn rho_opt_is_optimal_on_a_grid(
        k in 2usize..12,
        mu_frac in 0.01f64..0.999,
        offset in 0usize..97,
    ) {
        let mu = mu_frac * k as f64;
        let best = lambda_tilde_opt(mu, k).unwrap();
        for i in 0..100usize {
            let rho = 2.0 / k as f64 * ((i * 97 + offset) % 9901 + 1) as f64 / 9903.0;
            prop_assert!(lambda_magnitude(mu, k, rho) >= best - 1e-9);
        }
    }
}
