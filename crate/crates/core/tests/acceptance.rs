//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always reach stdout. The
//! process fails if any criterion outside `KNOWN_UNATTAINABLE` fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wishart_nc::moments::{cross_validate, limit_moment_enumerative, symbolic_enumerative, WeightedCount};
use wishart_nc::numbers::{catalan, fuss_catalan, raney};
use wishart_nc::partition::{alpha, alpha_inverse};
use wishart_nc::rational::{frac, int, pow, Rational};
use wishart_nc::rmt::{convergence_report, EnsembleSpec, Normalization, SpectralLaw, DEFAULT_REL_TOL};
use wishart_nc::series::distribution::free_meixner_even_cumulants;
use wishart_nc::series::solve::{
    dependent_moments, gaussian_count, independent_residual, mixed_count, p_kr, solve_psi_independent,
};
use wishart_nc::series::verify::{
    free_poisson_quadratic_residual, gaussian_s_transform, dependent_residual, semicircle_cubic_residual,
};
use wishart_nc::words::{enumerate_adapted, enumerate_pair_adapted, enumerate_pairings_of_w, make_w};
use wishart_nc::{CumulantSequence, Distribution, FormalPowerSeries, Label, LabelPattern, ModelParams};

// The pair route at p = 2, k = 4 runs on words of length 32.
const CAP: usize = 32;

/// Criteria whose literal statement cannot hold; see the README.
const KNOWN_UNATTAINABLE: &[u32] = &[10];

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn labels(p: usize, pat: &LabelPattern) -> Vec<Label> {
    pat.labels(p).unwrap()
}

fn within(t: Instant, budget: Duration) -> (bool, String) {
    let e = t.elapsed();
    (e <= budget, format!("{:.2?} of {:.0?}", e, budget))
}

fn c1() -> Outcome {
    let t = Instant::now();
    let n = make_w(2, &labels(2, &LabelPattern::Same)).unwrap().power(2).count_adapted(CAP).unwrap();
    let (fast, time) = within(t, Duration::from_secs(1));
    check(n == 22 && fast, format!("|NC(W²)| = {n}, {time}"))
}

fn c2() -> Outcome {
    let t = Instant::now();
    let w = make_w(2, &labels(2, &LabelPattern::Same)).unwrap();
    let mut got = Vec::new();
    let mut ok = true;
    for n in 1..=3u32 {
        let c = w.power(n as usize).count_adapted(CAP).unwrap();
        let want = pow(&int(4), n) * raney(n as u64, 2, &frac(1, 2));
        ok &= Rational::from_integer(c.into()) == want;
        got.push(format!("{c}={want}"));
    }
    let (fast, time) = within(t, Duration::from_secs(10));
    check(ok && fast, format!("n=1..3: {}, {time}", got.join(", ")))
}

fn c3() -> Outcome {
    let mut ok = true;
    let mut rows = Vec::new();
    for p in 1..=2usize {
        for k in 1..=3usize {
            let l = labels(p, &LabelPattern::Distinct);
            let on_w = enumerate_pairings_of_w(p, k, &l, CAP).unwrap().len();
            let on_wt = enumerate_pair_adapted(p, k, &l, CAP).unwrap().len();
            let fp = fuss_catalan(k as u64, p as u64);
            let f2p = fuss_catalan(k as u64, 2 * p as u64);
            ok &= Rational::from_integer(on_w.into()) == fp && Rational::from_integer(on_wt.into()) == f2p;
            rows.push(format!("({p},{k}):{on_w}"));
        }
    }
    check(ok, format!("|NC²(W^k)| = F_k(p) {}; |NC²(W̃^k)| = F_k(2p)", rows.join(" ")))
}

fn c4() -> Outcome {
    let mut ok = true;
    let mut rows = Vec::new();
    for p in 1..=2usize {
        for k in 1..=3usize {
            let n = enumerate_adapted(p, k, &labels(p, &LabelPattern::Distinct), CAP).unwrap().len();
            ok &= Rational::from_integer(n.into()) == fuss_catalan(k as u64, 2 * p as u64);
            rows.push(format!("({p},{k}):{n}"));
        }
    }
    check(ok, format!("|NC(W^k)| = F_k(2p) {}", rows.join(" ")))
}

fn c5() -> Outcome {
    let mut ok = true;
    let mut total = 0;
    for pat in [LabelPattern::Same, LabelPattern::Distinct] {
        for p in 1..=2usize {
            for k in 1..=3usize {
                let l = labels(p, &pat);
                let parts = enumerate_adapted(p, k, &l, CAP).unwrap();
                let mut images: Vec<_> = parts.iter().map(|pi| alpha(pi).unwrap()).collect();
                ok &= parts.iter().zip(&images).all(|(pi, s)| alpha_inverse(s).unwrap() == *pi);
                images.sort();
                ok &= images == enumerate_pair_adapted(p, k, &l, CAP).unwrap();
                total += parts.len();
            }
        }
    }
    check(ok, format!("{total} partitions over p ≤ 2, k ≤ 3, same and distinct labels"))
}

fn example43_params(dims: Vec<Rational>) -> ModelParams {
    ModelParams::per_block(
        2,
        dims,
        &LabelPattern::Distinct,
        vec![
            CumulantSequence::new(vec![int(0), int(1), int(0), int(2)]),
            CumulantSequence::new(vec![int(0), int(3), int(0), int(5)]),
        ],
    )
    .unwrap()
}

fn c6() -> Outcome {
    let m2 = limit_moment_enumerative(2, &example43_params(vec![int(1); 3]), CAP).unwrap().moment;
    // symbolic: r4 s2² d1d2²d3² + r2² s4 d1d2²d3² + r2² s2² (d1d2d3² + d2²d3² + d1d2²d3)
    let params = example43_params(vec![int(1); 3]);
    let sym = symbolic_enumerative(2, &params, CAP).unwrap();
    let id = |l: &str| sym.labels.iter().position(|x| x.0 == l).unwrap();
    let (r, s) = (id("u1"), id("u2"));
    let mut want = BTreeMap::new();
    want.insert((vec![1, 2, 2], vec![(r, 4), (s, 2), (s, 2)]), 1u64);
    want.insert((vec![1, 2, 2], vec![(r, 2), (r, 2), (s, 4)]), 1);
    for e in [vec![1, 1, 2], vec![0, 2, 2], vec![1, 2, 1]] {
        want.insert((e, vec![(r, 2), (r, 2), (s, 2), (s, 2)]), 1);
    }
    let normalize = |m: &BTreeMap<(Vec<u32>, Vec<(usize, usize)>), u64>| {
        m.iter()
            .map(|((e, c), v)| {
                let mut c = c.clone();
                c.sort();
                ((e.clone(), c), *v)
            })
            .collect::<BTreeMap<_, _>>()
    };
    let got = normalize(&sym.terms);
    let want = normalize(&want);
    check(
        m2 == int(50) && got == want && sym.partitions == 5,
        format!("M₂ = {m2}, {} partitions, symbolic terms match: {}", sym.partitions, got == want),
    )
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    frac(rng.random_range(1..=9), rng.random_range(1..=5))
}

fn random_instance(rng: &mut ChaCha8Rng) -> ModelParams {
    let p = rng.random_range(1..=2usize);
    let dims = (0..=p).map(|_| random_rational(rng)).collect();
    let cums = (0..p)
        .map(|_| {
            CumulantSequence::new(
                (0..20)
                    .map(|_| if rng.random_bool(0.2) { Rational::zero() } else { random_rational(rng) })
                    .enumerate()
                    .map(|(i, v)| if i == 1 { v + Rational::one() } else { v })
                    .collect(),
            )
        })
        .collect();
    ModelParams::per_block(p, dims, &LabelPattern::Distinct, cums).unwrap()
}

fn c7() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut ok = true;
    let mut checked = 0;
    for i in 0..20 {
        let params = random_instance(&mut rng);
        let cv = cross_validate(4, &params, CAP).unwrap();
        let full = cv.rows.iter().all(|r| r.closed_form.is_some() && r.series.is_some());
        if !(cv.passed() && full) {
            return Err(format!("instance {i} (p={}) disagrees: {:?}", params.p, cv.rows));
        }
        ok &= cv.passed();
        checked += cv.rows.len();
    }
    let (fast, time) = within(t, Duration::from_secs(60));
    check(ok && fast, format!("20 instances, {checked} moments, four routes equal, {time}"))
}

fn for_each_exponent(p: usize, k: usize, f: &mut dyn FnMut(&[u32])) {
    let mut j = vec![0u32; p + 1];
    loop {
        f(&j);
        let mut i = 0;
        while i <= p {
            j[i] += 1;
            if j[i] as usize <= k {
                break;
            }
            j[i] = 0;
            i += 1;
        }
        if i > p {
            return;
        }
    }
}

fn compare_counts(monomials: &WeightedCount, p: usize, k: usize, formula: &dyn Fn(&[u32]) -> Rational) -> bool {
    let mut ok = true;
    for_each_exponent(p, k, &mut |j| {
        let got = monomials.terms.get(j).cloned().unwrap_or_else(Rational::zero);
        ok &= got == formula(j);
    });
    // no monomial outside the box
    ok && monomials.terms.keys().all(|j| j.iter().all(|&x| x as usize <= k))
}

fn c8() -> Outcome {
    let mut ok = true;
    let dims = [frac(2, 3), frac(5, 4), int(3)];
    for p in 1..=2usize {
        for k in 1..=3usize {
            let m = ModelParams::uniform(
                p,
                dims[..=p].to_vec(),
                &LabelPattern::Distinct,
                CumulantSequence::semicircle(2 * k),
            )
            .unwrap();
            let res = limit_moment_enumerative(k, &m, CAP).unwrap();
            ok &= res.moment == p_kr(k, 1, &m.dims) / &m.dims[0];
            ok &= compare_counts(&res.monomials, p, k, &|j| {
                let s: u32 = j.iter().sum();
                if s as usize == p * k { gaussian_count(k, j) } else { Rational::zero() }
            });
        }
    }
    check(ok, "m_k = d₁⁻¹P_{k,1} and N_k(𝐣) for p ≤ 2, k ≤ 3".into())
}

fn c9() -> Outcome {
    let p = 2;
    let mut ok = true;
    let mut cases = 0;
    for q in 1..=2usize {
        // every subset K of size q
        let subsets: Vec<Vec<bool>> = match q {
            1 => vec![vec![true, false], vec![false, true]],
            _ => vec![vec![true, true]],
        };
        for mask in subsets {
            for k in 1..=3usize {
                let cums = mask
                    .iter()
                    .map(|&w| if w { CumulantSequence::free_poisson(2 * k) } else { CumulantSequence::semicircle(2 * k) })
                    .collect();
                let m = ModelParams::per_block(p, vec![int(1); 3], &LabelPattern::Distinct, cums).unwrap();
                let res = limit_moment_enumerative(k, &m, CAP).unwrap();
                ok &= compare_counts(&res.monomials, p, k, &|j| mixed_count(k, j, q));
                cases += 1;
            }
        }
    }
    check(ok, format!("p=2, q ∈ {{1,2}}, k ≤ 3: {cases} cases"))
}

fn c10() -> Outcome {
    let k_max = 3;
    let mut notes = Vec::new();
    let mut ok = true;
    let mut recurrence_ok = true;
    let mut semi = Vec::new();
    for (name, c) in [
        ("free-poisson", CumulantSequence::free_poisson(4 * k_max)),
        ("semicircle", CumulantSequence::semicircle(4 * k_max)),
        ("mp(1/3)", CumulantSequence::marchenko_pastur(frac(1, 3), 4 * k_max)),
    ] {
        let q = dependent_moments(&c, k_max).unwrap();
        let m = ModelParams::uniform(2, vec![int(1); 3], &LabelPattern::Same, c).unwrap();
        for k in 1..=k_max {
            recurrence_ok &= limit_moment_enumerative(k, &m, CAP).unwrap().moment == q[k - 1];
        }
        if name == "free-poisson" {
            let fp_ok = (1..=k_max).all(|k| q[k - 1] == pow(&int(4), k as u32) * raney(k as u64, 2, &frac(1, 2)));
            ok &= fp_ok;
            notes.push(format!("free Poisson m = {} (4^k R_k(2,1/2): {fp_ok})", join(&q)));
        }
        if name == "semicircle" {
            semi = q;
        }
    }
    ok &= recurrence_ok;
    notes.insert(0, format!("recurrence = enumeration: {recurrence_ok}"));
    let f3: Vec<Rational> = (1..=k_max as u64).map(|k| fuss_catalan(k, 3)).collect();
    let f2: Vec<Rational> = (1..=k_max as u64).map(|k| fuss_catalan(k, 2)).collect();
    notes.push(format!(
        "semicircle m = {} vs F_k(3) = {} (F_k(2) = {}, the solution of ψ = z(ψ+1)³)",
        join(&semi),
        join(&f3),
        join(&f2)
    ));
    ok &= semi == f3;
    check(ok, notes.join("; "))
}

fn join(v: &[Rational]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn c11() -> Outcome {
    let order = 8;
    let mut ok = true;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let params = random_instance(&mut rng);
        let psi = solve_psi_independent(&params, order).unwrap();
        ok &= independent_residual(&params, &psi).unwrap().is_zero();
    }
    let generic = CumulantSequence::new((1..=2 * order as i64).map(|i| frac(i, i + 2)).collect());
    ok &= dependent_residual(&generic, order).unwrap().is_zero();
    ok &= dependent_residual(&CumulantSequence::free_poisson(2 * order), order).unwrap().is_zero();
    ok &= semicircle_cubic_residual(order).unwrap().is_zero();
    ok &= free_poisson_quadratic_residual(order).unwrap().is_zero();
    check(ok, format!("four functional equations vanish to order {order}"))
}

fn c12() -> Outcome {
    let order = 8;
    let mut ok = true;
    // S of the Marchenko-Pastur law
    for d in [frac(1, 2), int(1), frac(7, 3)] {
        let s = Distribution::marchenko_pastur(&d, order + 1).unwrap().s_transform().unwrap();
        let want = FormalPowerSeries::from_coeffs(vec![d.clone(), int(1)], order).reciprocal().unwrap();
        ok &= s == want;
    }
    let mu = Distribution::from_moments((1..=order as i64).map(|i| frac(i * i + 1, i + 1)).collect());
    let nu = Distribution::from_moments((1..=order as i64).map(|i| frac(2 * i - 1, 3)).collect());
    let (s, t) = (frac(2, 3), frac(5, 2));
    ok &= mu.v_transform(&s).unwrap().v_transform(&t).unwrap() == mu.v_transform(&(&s * &t)).unwrap();
    let lhs = mu.box_times(&nu).unwrap().u_transform(&s).unwrap();
    let rhs = mu.u_transform(&s).unwrap().box_times(&nu.v_transform(&s).unwrap()).unwrap();
    ok &= lhs == rhs;
    // product formula for Gaussian blocks
    for dims in [vec![int(1), frac(1, 2)], vec![frac(2, 3), int(2), frac(3, 4)], vec![int(1), int(1), int(1), int(1)]] {
        let p = dims.len() - 1;
        let m = ModelParams::uniform(p, dims.clone(), &LabelPattern::Distinct, CumulantSequence::semicircle(2 * order + 2)).unwrap();
        let psi = solve_psi_independent(&m, order + 1).unwrap();
        let dist = Distribution::from_moments(psi.coeffs()[1..].to_vec());
        ok &= dist.s_transform().unwrap() == gaussian_s_transform(&dims, order + 1).unwrap();
    }
    check(ok, format!("S_ρd, V_sV_t, U_s(μ⊠ν), Gaussian S-product to order {order}"))
}

fn c13() -> Outcome {
    let d = Distribution::from_cumulants(&free_meixner_even_cumulants(&int(2), &int(1), 4), 4).unwrap();
    let depth1 = d.hankel_positive(1).unwrap();
    let depth2 = d.hankel_positive(2).unwrap();
    check(depth1 && !depth2, format!("m₁ = {}, m₂ = {}; depth 1 {depth1}, depth 2 {depth2}", d.moment(1), d.moment(2)))
}

fn mc_row(name: &str, spec: &EnsembleSpec, k_max: usize, expected: &[Rational]) -> (bool, String) {
    let params = spec.model_params(4 * k_max).unwrap();
    let rep = convergence_report(spec, &params, k_max, DEFAULT_REL_TOL, CAP).unwrap();
    let exact_ok = rep.rows.iter().zip(expected).all(|(r, e)| r.exact == *e);
    let cells: Vec<String> = rep
        .rows
        .iter()
        .map(|r| format!("{:.3}±{:.3}~{}", r.estimate, r.stderr, r.exact))
        .collect();
    (rep.passed() && exact_ok, format!("{name}[{}]", cells.join(" ")))
}

fn c14() -> Outcome {
    let t = Instant::now();
    let l = |v: &[&str]| v.iter().map(|&s| Label::from(s)).collect::<Vec<_>>();
    let mut ok = true;
    let mut notes = Vec::new();

    let catalan_k: Vec<Rational> = (1..=3).map(|k| Rational::from_integer(catalan(k))).collect();
    let gue1 = EnsembleSpec::uniform(vec![256, 256], l(&["a"]), SpectralLaw::Semicircle, 200, 1)
        .with_normalization(Normalization::FirstBlock);
    let (a, s) = mc_row("p=1 GUE", &gue1, 3, &catalan_k);
    ok &= a;
    notes.push(s);

    let f2: Vec<Rational> = (1..=3).map(|k| fuss_catalan(k, 2)).collect();
    let gue2 = EnsembleSpec::uniform(vec![171; 3], l(&["a", "b"]), SpectralLaw::Semicircle, 200, 2)
        .with_normalization(Normalization::FirstBlock);
    let (a, s) = mc_row("p=2 GUE", &gue2, 3, &f2);
    ok &= a;
    notes.push(s);

    let raney_k: Vec<Rational> = (1..=2u32).map(|k| pow(&int(4), k) * raney(k as u64, 2, &frac(1, 2))).collect();
    let wish = EnsembleSpec::uniform(vec![171; 3], l(&["a", "a"]), SpectralLaw::MarchenkoPastur(1.0), 200, 3)
        .with_normalization(Normalization::FirstBlock);
    let (a, s) = mc_row("p=2 same Wishart", &wish, 2, &raney_k);
    ok &= a;
    notes.push(s);

    // negative control: the same samples judged against the wrong dimensions
    let mut wrong = gue2.model_params(12).unwrap();
    wrong.dims = vec![int(1), int(1), int(2)];
    let neg = convergence_report(&gue2, &wrong, 3, DEFAULT_REL_TOL, CAP).unwrap();
    ok &= !neg.passed();
    notes.push(format!("wrong dims rejected: {}", !neg.passed()));

    let (fast, time) = within(t, Duration::from_secs(300));
    notes.push(time);
    check(ok && fast, notes.join("; "))
}

fn main() -> ExitCode {
    let criteria: Vec<(u32, &str, fn() -> Outcome)> = vec![
        (1, "count oracle 22", c1),
        (2, "Raney counts for same-label p=2", c2),
        (3, "Fuss-Catalan pair counts", c3),
        (4, "|NC(W^k)| = F_k(2p) for distinct labels", c4),
        (5, "α is a bijection onto NC²(W̃^k)", c5),
        (6, "two-matrix M₂ = 50 and its monomials", c6),
        (7, "four routes agree on random instances", c7),
        (8, "Gaussian closed form and N_k(𝐣)", c8),
        (9, "mixed Gaussian/Wishart N_k(𝐣)", c9),
        (10, "dependent blocks", c10),
        (11, "functional-equation residuals", c11),
        (12, "transform identities", c12),
        (13, "Hankel negative control", c13),
        (14, "Monte Carlo convergence", c14),
    ];
    let mut unexpected = 0;
    for (n, name, f) in criteria {
        let t = Instant::now();
        let out = f();
        let secs = t.elapsed().as_secs_f64();
        let known = KNOWN_UNATTAINABLE.contains(&n);
        match out {
            Ok(d) => println!("PASS {n:>2} {name} ({secs:.1}s): {d}"),
            Err(d) => {
                let tag = if known { " [known unattainable]" } else { "" };
                println!("FAIL {n:>2} {name}{tag} ({secs:.1}s): {d}");
                if !known {
                    unexpected += 1;
                }
            }
        }
    }
    if unexpected > 0 {
        println!("{unexpected} criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
