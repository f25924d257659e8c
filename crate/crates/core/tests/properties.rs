use lfmo_repair::failure_chain::{qq_table, qq_via_matrix_power, shock_rate, transition_matrix, FailureChain};
use lfmo_repair::numeric::binom;
use lfmo_repair::oracle::FullStateModel;
use lfmo_repair::policy::{evaluate_policy, iid_policy, kofn_policy, process_signature, system_survival, CostModel, SignatureWeights};
use lfmo_repair::simulate::{simulate_policy, SimulationConfig};
use lfmo_repair::structure::{signature_via_permutations, structural_signature, SystemStructure};
use lfmo_repair::subordinator::LaplaceExponent;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn exponent() -> impl Strategy<Value = LaplaceExponent> {
    prop_oneof![
        (0.01..10.0f64).prop_map(|mu| LaplaceExponent::pure_drift(mu).unwrap()),
        (0.0..5.0f64, 0.01..5.0f64, 0.05..5.0f64)
            .prop_map(|(mu, l, g)| LaplaceExponent::compound_poisson_exp(mu, l, g).unwrap()),
        (0.05..5.0f64, 0.05..5.0f64).prop_map(|(b, e)| LaplaceExponent::gamma(b, e).unwrap()),
        (0.05..5.0f64, 0.05..5.0f64).prop_map(|(b, e)| LaplaceExponent::inverse_gaussian(b, e).unwrap()),
        (0.05..0.95f64).prop_map(|a| LaplaceExponent::stable(a).unwrap()),
    ]
}

/// Random formula over n variables using only `&` and `|`, so always coherent.
fn monotone_formula(n: usize) -> impl Strategy<Value = SystemStructure> {
    let leaf = (1..=n).prop_map(|i| i.to_string());
    let expr = leaf.prop_recursive(4, 16, 2, |inner| {
        (inner.clone(), inner, prop::bool::ANY).prop_map(|(a, b, and)| format!("({a} {} {b})", if and { '&' } else { '|' }))
    });
    expr.prop_map(move |e| {
        // every component appears so the structure depends on all of them weakly
        let all: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let pad = format!("({e}) | ({} & false)", all.join(" & "));
        SystemStructure::formula(n, &pad).unwrap()
    })
}

fn signature_vec(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![Just(0.0), 0.0..1.0f64], n).prop_filter_map("nonzero", |v| {
        let t: f64 = v.iter().sum();
        (t > 1e-3).then(|| v.iter().map(|x| x / t).collect())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn psi_is_positive_increasing_concave(e in exponent(), n in 2usize..40) {
        let t = e.psi_table(n).unwrap();
        let v = t.values();
        prop_assert!(v[0] > 0.0);
        for k in 1..n {
            prop_assert!(v[k] > v[k - 1]);
        }
        for k in 2..n {
            prop_assert!(v[k] - v[k - 1] <= v[k - 1] - v[k - 2] + 1e-12 * v[k]);
        }
    }

    #[test]
    fn transition_rows_are_stochastic(e in exponent(), n in 1usize..=32) {
        let p = transition_matrix(&e.psi_table(n).unwrap()).unwrap();
        for i in 0..n {
            prop_assert!((p.row(i).sum() - 1.0).abs() <= 1e-10);
            for j in 0..=i {
                prop_assert_eq!(p[(i, j)], 0.0);
            }
        }
        prop_assert_eq!(p.row(n).sum(), 0.0);
    }

    #[test]
    fn qq_recursion_matches_matrix_power(e in exponent(), n in 1usize..=32) {
        let p = transition_matrix(&e.psi_table(n).unwrap()).unwrap();
        let qq = qq_table(&p);
        for i in 0..n {
            let mut row = 0.0;
            for j in i + 1..=n {
                prop_assert!((qq[(i, j)] - qq_via_matrix_power(&p, i, j).unwrap()).abs() <= 1e-12);
                row += qq[(i, j)];
            }
            // the chain must leave {0..i} somewhere
            prop_assert!((row - 1.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn aggregate_rates_match_shock_rates(e in exponent(), n in 1usize..=24) {
        let psi = e.psi_table(n).unwrap();
        let chain = FailureChain::new(&psi).unwrap();
        for i in 0..n {
            let l = n - i;
            let mut out = 0.0;
            for j in i + 1..=n {
                let direct = binom(l, j - i) as f64 * shock_rate(l, j - i, &psi).unwrap();
                let agg = chain.aggregate_rate(i, j);
                prop_assert!((agg - direct).abs() <= 1e-9 * psi.psi(l));
                out += agg;
            }
            prop_assert!((out - psi.psi(l)).abs() <= 1e-10 * psi.psi(l));
        }
    }

    #[test]
    fn count_distribution_matches_order_statistics(e in exponent(), n in 1usize..=16, t in 0.0..5.0f64) {
        let chain = FailureChain::new(&e.psi_table(n).unwrap()).unwrap();
        let d = chain.count_distribution(t).unwrap();
        prop_assert!((d.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        // P(N(t) >= k) = P(T_{k:n} <= t)
        for k in 1..=n {
            let tail: f64 = d[k..].iter().sum();
            prop_assert!((tail - (1.0 - chain.order_stat_survival(k, t).unwrap())).abs() <= 1e-9);
        }
    }

    #[test]
    fn order_stat_means_increase(e in exponent(), n in 1usize..=26) {
        let chain = FailureChain::new(&e.psi_table(n).unwrap()).unwrap();
        let psi = chain.psi();
        prop_assert!((chain.order_stat_mean(1).unwrap() - 1.0 / psi.psi(n)).abs() <= 1e-12 / psi.psi(n));
        for k in 2..=n {
            prop_assert!(chain.order_stat_mean(k).unwrap() > chain.order_stat_mean(k - 1).unwrap());
        }
    }

    #[test]
    fn structural_signature_matches_permutations(st in (2usize..=7).prop_flat_map(monotone_formula)) {
        let a = structural_signature(&st).unwrap();
        let b = signature_via_permutations(&st).unwrap();
        prop_assert_eq!(a.s(), b.s());
        let total = a.s().iter().fold(num_rational::BigRational::zero(), |acc, x| acc + x);
        prop_assert!(total.is_one());
        prop_assert!(a.s().iter().all(|x| !x.is_negative()));
        let asum = a.a().iter().fold(num_rational::BigRational::zero(), |acc, x| acc + x);
        prop_assert!(asum.is_one());
    }

    #[test]
    fn k_out_of_n_signature_is_unit_vector(n in 1usize..=12, k in 1usize..=12) {
        prop_assume!(k <= n);
        let sig = structural_signature(&SystemStructure::k_out_of_n_f(n, k).unwrap()).unwrap();
        for (i, s) in sig.s().iter().enumerate() {
            prop_assert_eq!(s.is_one(), i + 1 == k);
        }
    }

    #[test]
    fn survival_forms_agree(e in exponent(), s in (1usize..=20).prop_flat_map(signature_vec), t in 0.0..10.0f64) {
        let n = s.len();
        let chain = FailureChain::new(&e.psi_table(n).unwrap()).unwrap();
        let v = system_survival(&SignatureWeights::new(s).unwrap(), &chain, t).unwrap();
        prop_assert!((0.0..=1.0).contains(&v));
    }

    #[test]
    fn process_signature_sums_to_one(e in exponent(), s in (1usize..=26).prop_flat_map(signature_vec)) {
        let n = s.len();
        let chain = FailureChain::new(&e.psi_table(n).unwrap()).unwrap();
        let q = process_signature(&SignatureWeights::new(s.clone()).unwrap(), &chain).unwrap();
        prop_assert!((q.iter().sum::<f64>() - 1.0).abs() <= 1e-10);
        // j failed components at system failure needs the system to fail at some k <= j
        let mut cq = 0.0;
        let mut cs = 0.0;
        for j in 0..n {
            cq += q[j];
            cs += s[j];
            prop_assert!(cq <= cs + 1e-10);
        }
    }

    #[test]
    fn p_increases_with_r(e in exponent(), s in (1usize..=20).prop_flat_map(signature_vec)) {
        let n = s.len();
        let chain = FailureChain::new(&e.psi_table(n).unwrap()).unwrap();
        let sig = SignatureWeights::new(s).unwrap();
        let costs = CostModel::component_count(n);
        let mut prev = (0.0, 0.0);
        for r in 1..=n {
            let ev = evaluate_policy(&sig, &chain, r, &costs).unwrap();
            prop_assert!(ev.p >= prev.0 - 1e-12);
            prop_assert!(ev.e_t_rep >= prev.1 - 1e-12);
            prop_assert!((ev.n_rep_dist.iter().sum::<f64>() - 1.0).abs() <= 1e-10);
            prev = (ev.p, ev.e_t_rep);
        }
        prop_assert!((prev.0 - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn iid_closed_form_matches_engine(mu in 0.01..50.0f64, s in (1usize..=24).prop_flat_map(signature_vec), rr in 0.0..1.0f64) {
        let n = s.len();
        let r = 1 + ((n as f64 * rr) as usize).min(n - 1);
        let chain = FailureChain::new(&LaplaceExponent::pure_drift(mu).unwrap().psi_table(n).unwrap()).unwrap();
        let sig = SignatureWeights::new(s).unwrap();
        let costs = CostModel::linear(n, 1.5, 7.0).unwrap();
        let a = iid_policy(&sig, n, mu, r, &costs).unwrap();
        let b = evaluate_policy(&sig, &chain, r, &costs).unwrap();
        prop_assert!((a.p - b.p).abs() <= 1e-12);
        prop_assert!((a.e_t_rep - b.e_t_rep).abs() <= 1e-12 * b.e_t_rep);
        prop_assert!((a.ltmc - b.ltmc).abs() <= 1e-12 * b.ltmc);
    }

    #[test]
    fn kofn_closed_form_matches_engine(e in exponent(), n in 1usize..=20, k in 1usize..=20, r in 1usize..=20) {
        prop_assume!(k <= n && r <= n);
        let chain = FailureChain::new(&e.psi_table(n).unwrap()).unwrap();
        let costs = CostModel::component_count(n);
        let a = kofn_policy(k, &chain, r, &costs).unwrap();
        let b = evaluate_policy(&SignatureWeights::unit(n, k).unwrap(), &chain, r, &costs).unwrap();
        prop_assert!((a.p - b.p).abs() <= 1e-12);
        prop_assert!((a.e_t_rep - b.e_t_rep).abs() <= 1e-12 * b.e_t_rep);
        for (x, y) in a.n_rep_dist.iter().zip(&b.n_rep_dist) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn oracle_matches_engine_on_random_structures(
        st in (2usize..=6).prop_flat_map(monotone_formula),
        e in exponent(),
        rr in 0.0..1.0f64,
    ) {
        let n = st.n();
        let r = 1 + ((n as f64 * rr) as usize).min(n - 1);
        let psi = e.psi_table(n).unwrap();
        let costs = CostModel::linear(n, 1.0, 5.0).unwrap();
        let o = FullStateModel::new(&st, &psi).unwrap().cycle_metrics(r, &costs).unwrap();
        let sig = SignatureWeights::from(&structural_signature(&st).unwrap());
        let ev = evaluate_policy(&sig, &FailureChain::new(&psi).unwrap(), r, &costs).unwrap();
        prop_assert!((o.p - ev.p).abs() <= 1e-10);
        prop_assert!((o.e_t_rep - ev.e_t_rep).abs() <= 1e-10 * ev.e_t_rep);
        prop_assert!((o.ltmc - ev.ltmc).abs() <= 1e-10 * ev.ltmc);
    }

    #[test]
    fn simulation_is_deterministic(seed in any::<u64>(), r in 1usize..=3) {
        let cfg = SimulationConfig {
            structure: lfmo_repair::structure::builtin::bridge(),
            psi: LaplaceExponent::compound_poisson_exp(0.9, 0.2, 1.0).unwrap().psi_table(3).unwrap(),
            r,
            costs: CostModel::linear(3, 1.0, 30.0).unwrap(),
            horizon: 50.0,
            replications: 20,
            seed,
        };
        prop_assert_eq!(simulate_policy(&cfg).unwrap(), simulate_policy(&cfg).unwrap());
    }
}
