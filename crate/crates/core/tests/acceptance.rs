//! Acceptance suite: one PASS/FAIL line per criterion, then a single assertion.
//! Run with `cargo test -p fraclt-core --test acceptance -- --nocapture`.

use std::f64::consts::{PI, TAU};
use std::time::Instant;

use fraclt_core::bgk::*;
use fraclt_core::conformal::*;
use fraclt_core::determinant::*;
use fraclt_core::discretize::*;
use fraclt_core::eigen::{eig, eigvals, svd};
use fraclt_core::lieb_thirring::*;
use fraclt_core::matrix::CMatrix;
use fraclt_core::numerics::beta;
use fraclt_core::resolvent::*;
use fraclt_core::{c64, Complex64};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

fn random_matrix(n: usize, seed: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    CMatrix::from_fn(n, n, |_, _| c64(2.0 * uniform(&mut rng) - 1.0, 2.0 * uniform(&mut rng) - 1.0))
}

fn strict_lambdas(n: usize) -> Vec<Complex64> {
    let g = (5.0f64.sqrt() - 1.0) / 2.0;
    (0..n)
        .map(|k| {
            let u = (k as f64 + 0.5) / n as f64;
            let v = (k as f64 * g).fract();
            Complex64::from_polar(10f64.powf(-2.0 + 4.0 * u), TAU * (0.002 + 0.996 * v))
        })
        .collect()
}

/// Complex Gaussian wells `|A|(-1+i)/√2`, width 1.
fn family(grid: &Grid) -> Vec<(f64, Potential)> {
    [0.25, 0.5, 1.0]
        .into_iter()
        .map(|m| {
            let a = c64(-m, m) / 2f64.sqrt();
            (m, PotentialSpec::gaussian(a, 1.0).sample(grid).unwrap())
        })
        .collect()
}

fn resolvent_oracle() -> Outcome {
    let cases = [
        (1, 0.5, c64(-1.0, 0.0), 2.0),
        (1, 0.5, c64(0.0, 1.0), PI),
        (2, 1.0, c64(-1.0, 0.0), PI),
    ];
    let mut worst: f64 = 0.0;
    for (d, s, l, expect) in cases {
        let v = resolvent_lp_direct(d, s, 2.0, l, 1e-12).map_err(|e| e.to_string())?;
        worst = worst.max((v - expect).abs());
        ensure((v - expect).abs() <= 1e-8, || format!("d={d} s={s} λ={l}: {v} vs {expect}"))?;
    }
    Ok(format!("max abs error {worst:.1e} (tol 1e-8)"))
}

fn bound_dominance() -> Outcome {
    let small = [(1, 0.5, 2.0), (2, 1.0, 2.0), (3, 0.75, 3.0), (2, 0.5, 2.5)];
    let large = [(1, 1.0, 2.0), (1, 0.75, 1.5), (2, 1.5, 1.5), (1, 2.0, 3.0)];
    let lambdas: Vec<Complex64> = strict_lambdas(200);
    let mut checked = 0;
    for (regime, set) in [("br", &small), ("br1", &large)] {
        for &(d, s, p) in set.iter() {
            for &l in &lambdas {
                let direct = resolvent_lp_direct(d, s, p, l, 1e-10).map_err(|e| e.to_string())?;
                let bound = if regime == "br" { bound_br(d, s, p, l) } else { bound_br1(d, s, p, l) }
                    .map_err(|e| e.to_string())?;
                ensure(direct < bound, || format!("{regime} d={d} s={s} p={p} λ={l}: {direct} ≥ {bound}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} comparisons, 0 violations"))
}

fn distortion_suites() -> Outcome {
    const N: usize = 10_000;
    let mut checked = 0;
    for a in [0.5, 1.0, 10.0] {
        let m = MapParam::new(a).unwrap();
        for z in disc_samples(N) {
            let w = distortion_disc(m, z).map_err(|e| e.to_string())?;
            let actual = dist_to_ray(phi(m, z).map_err(|e| e.to_string())?);
            ensure(w.contains(actual) || (actual == 0.0 && w.lower < 1e-300), || format!("disc a={a} z={z}"))?;
            checked += 1;
        }
        for l in slit_samples(N) {
            let w = distortion_ray(m, l).map_err(|e| e.to_string())?;
            let z = phi_inv(m, l).map_err(|e| e.to_string())?;
            ensure(w.contains(1.0 - z.norm()), || format!("ray a={a} λ={l}"))?;
            let (plus, minus) = inverse_moduli(m, l).map_err(|e| e.to_string())?;
            ensure(
                ((z + 1.0).norm() - plus).abs() <= 1e-12 * plus.max(1e-300) + 1e-15
                    && ((z - 1.0).norm() - minus).abs() <= 1e-12 * minus,
                || format!("moduli a={a} λ={l}"),
            )?;
            let r = g_dist_bound(m, l).map_err(|e| e.to_string())?;
            ensure(r.actual >= r.lower, || format!("image a={a} λ={l}: {r:?}"))?;
            checked += 3;
        }
    }
    Ok(format!("{checked} sample checks, 0 violations"))
}

fn birman_solomyak() -> Outcome {
    let g = Grid::new(1, 64, 20.0).unwrap();
    let lambda = c64(-1.0, 0.5);
    let mut worst_eq: f64 = 0.0;
    for seed in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let amp = c64(2.0 * uniform(&mut rng) - 1.0, 2.0 * uniform(&mut rng) - 1.0);
        let width = 0.5 + 2.0 * uniform(&mut rng);
        let v = PotentialSpec::random_bandlimited(amp, width, seed).sample(&g).unwrap();
        let two = bs_check(&g, 0.5, 2.0, &v, lambda).map_err(|e| e.to_string())?;
        let rel = (two.lhs / two.rhs - 1.0).abs();
        worst_eq = worst_eq.max(rel);
        ensure(rel <= 1e-10, || format!("seed {seed}: p=2 relative gap {rel:e}"))?;
        for p in [3.0, 4.0, 6.0] {
            let r = bs_check(&g, 0.5, p, &v, lambda).map_err(|e| e.to_string())?;
            ensure(r.holds(1e-12), || format!("seed {seed} p={p}: {r:?}"))?;
        }
    }
    Ok(format!("50 potentials, p=2 max relative gap {worst_eq:.1e} (tol 1e-10)"))
}

fn determinant_layer() -> Outcome {
    let mut seed = 0u64;
    for order in 1..=3u32 {
        for _ in 0..200 {
            seed += 1;
            let n = 1 + (seed as usize % 10);
            let a = random_matrix(n, seed);
            let mut rng = ChaCha8Rng::seed_from_u64(!seed);
            let a = a.scale(c64(uniform(&mut rng) / svd(&a).unwrap()[0], 0.0));
            let r = det_growth_check(RegDetOrder::new(order).unwrap(), &a, GammaP::standard(f64::from(order)).unwrap())
                .map_err(|e| e.to_string())?;
            ensure(r.holds(), || format!("growth order {order} seed {seed}: {r:?}"))?;
        }
    }

    let c = c64(0.05, 0.3);
    let mut operators = 0;
    for (d, n, s) in [(1u32, 8usize, 1.0), (1, 8, 0.5), (2, 4, 1.0), (1, 16, 0.75)] {
        let g = Grid::new(d, n, TAU).unwrap();
        let op = assemble_h(&g, s, &PotentialSpec::constant(c).sample(&g).unwrap()).unwrap();
        let m = multipliers(&g, s).unwrap();
        let mut distinct = m.clone();
        distinct.sort_by(f64::total_cmp);
        distinct.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        let f = PerturbationDeterminant::new(op, 2.0, 2.0).map_err(|e| e.to_string())?;
        for (i, &mu) in distinct.iter().enumerate().take(3) {
            let above = distinct.get(i + 1).map_or(1.0, |&x| x - mu);
            let below = if i > 0 { mu - distinct[i - 1] } else { 1.0 };
            let radius = (0.4 * above.min(below)).min(0.2);
            let mult = m.iter().filter(|&&x| (x - mu).abs() < 1e-9).count() as i64;
            let w = winding_number(&|l| f.eval(l), c + mu, radius, 64).map_err(|e| e.to_string())?;
            ensure(w == mult, || format!("winding d={d} n={n} s={s} μ={mu}: {w} vs {mult}"))?;
            operators += 1;
        }
    }
    ensure(operators >= 10, || format!("only {operators} winding checks"))?;

    let g = Grid::new(1, 16, 10.0).unwrap();
    let free = assemble_h(&g, 0.5, &Potential::zero(&g)).unwrap();
    for l in [c64(-1.0, 0.0), c64(2.0, 1.0), c64(0.3, -4.0)] {
        let f = f_lambda(&free, 2.0, 2.0, l).map_err(|e| e.to_string())?;
        ensure((f - 1.0).norm() < 1e-14, || format!("free f({l}) = {f}"))?;
    }
    Ok(format!("600 growth checks, {operators} winding counts, f ≡ 1 for V ≡ 0"))
}

fn eigen_kernel() -> Outcome {
    let mut worst: f64 = 0.0;
    for (n, seed) in [(64, 1), (128, 2), (256, 3)] {
        let sp = eig(&random_matrix(n, seed), 1e-8).map_err(|e| e.to_string())?;
        worst = worst.max(sp.max_residual());
        ensure(sp.max_residual() <= 1e-8, || format!("n={n}: residual {:e}", sp.max_residual()))?;
    }
    let mut worst_im: f64 = 0.0;
    for (n, seed) in [(32, 4), (128, 5), (256, 6)] {
        let a = random_matrix(n, seed);
        let h = &a + &a.adjoint();
        let scale = h.frobenius_norm();
        for z in eigvals(&h).map_err(|e| e.to_string())? {
            worst_im = worst_im.max(z.im.abs() / scale);
        }
    }
    ensure(worst_im <= 1e-10, || format!("Hermitian |Im| / ‖H‖ = {worst_im:e}"))?;
    Ok(format!("max residual {worst:.1e} (tol 1e-8), Hermitian max |Im|/‖H‖ {worst_im:.1e} (tol 1e-10)"))
}

fn t2_quantitative() -> Outcome {
    let q = SpectralParams::new(1, 0.5, 2.0, 0.1);
    let om = OmegaData::new(1.0, 0.5).unwrap();
    let b = constants_bundle(Theorem::T2, &q, &om, None).map_err(|e| e.to_string())?;
    let k1 = b.k;
    let i_ref = beta(3.0, 1.1);
    ensure((k1 - 0.5).abs() <= 1e-6, || format!("K1 = {k1}"))?;
    ensure((b.integral - i_ref).abs() <= 1e-6, || format!("I = {} vs {i_ref}", b.integral))?;
    let factor = 20.0 * 0.5 * 4.0 / (i_ref * 0.1);
    ensure((b.explicit_factor / factor - 1.0).abs() <= 1e-9, || format!("factor {} vs {factor}", b.explicit_factor))?;

    let grid = Grid::new(1, 256, 60.0).unwrap();
    let mut worst: f64 = 0.0;
    for s in [0.5, 1.0] {
        let q = SpectralParams::new(1, s, 2.0, 0.1);
        for (m, v) in family(&grid) {
            let r = verify(Theorem::T2, &grid, &q, &v, &VerifyOptions::default()).map_err(|e| e.to_string())?;
            ensure(r.verdict == Verdict::Holds && r.lhs <= r.rhs, || format!("s={s} |A|={m}: {}", summary_line(&r)))?;
            worst = worst.max(r.ratio);
        }
    }
    Ok(format!("K1 = {k1:.6}, I = {:.6}, 6/6 jobs hold, worst LHS/RHS {worst:.2e}", b.integral))
}

fn t1_property() -> Outcome {
    let worked = [
        (Theorem::T1, SpectralParams::new(1, 0.5, 2.0, 0.1), 2.1, 1.0, 0.2),
        (Theorem::T1b, SpectralParams::new(1, 1.0, 2.0, 0.1), 2.6, 1.0, 0.2),
    ];
    for (th, q, eq, ea, eb) in worked {
        let e = exponents(th, &q).map_err(|e| e.to_string())?;
        ensure(
            (e.q - eq).abs() <= 1e-12 && (e.alpha - ea).abs() <= 1e-12 && (e.beta - eb).abs() <= 1e-12,
            || format!("{th}: {e:?}"),
        )?;
    }
    let t2 = exponents(Theorem::T2, &SpectralParams::new(1, 1.0, 2.0, 0.1)).map_err(|e| e.to_string())?;
    ensure(t2.q == 2.0 && (t2.beta - 0.6).abs() <= 1e-12, || format!("T2: {t2:?}"))?;
    let cases = [
        (Theorem::T1, SpectralParams::new(1, 0.5, 1.5, 0.1), Case::T1Below),
        (Theorem::T1b, SpectralParams::new(1, 1.0, 2.0, 0.1), Case::T1bRegion1Near),
        (Theorem::T1b, SpectralParams::new(1, 1.0, 1.2, 0.1), Case::T1bRegion2),
    ];
    for (th, q, expect) in cases {
        let c = case_dispatch(th, &q).map_err(|e| e.to_string())?;
        ensure(c == expect, || format!("{th} p={}: {c:?} vs {expect:?}", q.p))?;
    }

    let grid = Grid::new(1, 256, 60.0).unwrap();
    let mut spreads = Vec::new();
    for (th, s) in [(Theorem::T1, 0.5), (Theorem::T1b, 1.0)] {
        let q = SpectralParams::new(1, s, 2.0, 0.1);
        let mut ratios = Vec::new();
        for (m, v) in family(&grid) {
            let r = verify(th, &grid, &q, &v, &VerifyOptions::default()).map_err(|e| e.to_string())?;
            ensure(r.verdict == Verdict::PropertyOnly, || format!("{th}: verdict {:?}", r.verdict))?;
            ensure(r.ratio.is_finite() && r.ratio > 0.0, || format!("{th} |A|={m}: ratio {}", r.ratio))?;
            ratios.push(r.ratio);
        }
        let hi = ratios.iter().copied().fold(f64::MIN, f64::max);
        let lo = ratios.iter().copied().fold(f64::MAX, f64::min);
        ensure(hi / lo < 10.0, || format!("{th}: ratios {ratios:?} spread {}", hi / lo))?;
        spreads.push(format!("{th} spread {:.2}×", hi / lo));
    }
    Ok(format!("worked exponents and cases exact, {} (limit 10×)", spreads.join(", ")))
}

fn bgk_property() -> Outcome {
    let mut worst: f64 = 0.0;
    for r in [0.5, 0.9, 0.99, 0.999] {
        for count in [1usize, 2, 5, 10, 20] {
            let zeros: Vec<Complex64> = (0..count)
                .map(|j| Complex64::from_polar(r, TAU * j as f64 / count as f64 + 0.1))
                .collect();
            let k = envelope_estimate(&|z| blaschke(&zeros, z), 0.0, &[], &SampleSpec::default())
                .map_err(|e| e.to_string())?;
            let q = bgk_sum(&zeros, 0.0, 0.5, &[]).map_err(|e| e.to_string())? / k;
            ensure(q.is_finite() && q > 0.0, || format!("|w|={r} count={count}: ratio {q}"))?;
            worst = worst.max(q);
        }
    }
    ensure(worst <= 2.0, || format!("family ratio {worst} exceeds 2"))?;

    let grid = Grid::new(1, 32, 20.0).unwrap();
    let v = PotentialSpec::gaussian(c64(-0.05, 0.05), 1.0).sample(&grid).unwrap();
    let (s, p) = (0.5, 2.0);
    let omega = find_omega(&grid, s, &v, 0.5).map_err(|e| e.to_string())?;
    let a = 2.0 * omega.omega;
    let f = PerturbationDeterminant::new(assemble_h(&grid, s, &v).unwrap(), p, a).map_err(|e| e.to_string())?;
    let env = lt_envelope(&EnvelopeInputs {
        d: 1,
        s,
        p,
        gamma_p: GammaP::standard(p).unwrap().value,
        a,
        omega,
        v_norm_pp: lp_norm(&v, p).unwrap().powf(p),
    })
    .map_err(|e| e.to_string())?;
    let m = MapParam::new(a).unwrap();
    let mut points = 0;
    for z in SampleSpec::default().points() {
        let lg = f.log_eval(phi(m, z).unwrap()).map_err(|e| e.to_string())?.re;
        ensure(lg <= env.log_bound(z), || format!("z={z}: log|g| {lg} > {}", env.log_bound(z)))?;
        points += 1;
    }
    Ok(format!("Blaschke ratio ≤ {worst:.3} (bound 2), envelope holds at {points} points"))
}

fn hansmann() -> Outcome {
    let a = CMatrix::from_real_diag(&[-1.0, -0.5, 0.0]);
    let b = CMatrix::from_diag(&[c64(-1.0, 0.0), c64(-0.5, 0.1), c64(0.0, 0.0)]);
    let r = hansmann_check(&a, &b, 2.0).map_err(|e| e.to_string())?;
    ensure(
        (r.lhs - 0.01).abs() <= 1e-15 && (r.rhs - 0.01).abs() <= 1e-15,
        || format!("rank-one example: {r:?}"),
    )?;

    let mut pairs = 0;
    for (n, s) in [(16, 0.5), (16, 1.0), (32, 0.5), (32, 0.75)] {
        let g = Grid::new(1, n, 15.0).unwrap();
        for seed in 0..25u64 {
            let amp = c64(((seed % 7) as f64 - 3.5) / 3.0, ((seed % 5) as f64 - 2.0) / 2.0);
            let v = PotentialSpec::random_bandlimited(amp, 1.0 + 0.1 * seed as f64, seed).sample(&g).unwrap();
            let om = find_omega(&g, s, &v, 0.5).map_err(|e| e.to_string())?;
            let shift = om.omega * (1.5 + (seed % 3) as f64);
            let resolvent = |m: &CMatrix| {
                let mut m = m.scale(c64(-1.0, 0.0));
                for i in 0..g.size() {
                    m[(i, i)] -= shift;
                }
                m.inverse().unwrap()
            };
            let ra = resolvent(&assemble_h0(&g, s).unwrap().matrix);
            let rb = resolvent(&assemble_h(&g, s, &v).unwrap().matrix);
            for p in [1.0, 2.0, 3.0] {
                let c = hansmann_check(&ra, &rb, p).map_err(|e| e.to_string())?;
                ensure(c.holds(1e-9), || format!("n={n} s={s} seed={seed} p={p}: {c:?}"))?;
            }
            pairs += 1;
        }
    }
    Ok(format!("rank-one lhs = rhs = {:.2}, {pairs} resolvent pairs hold", r.lhs))
}

fn self_adjoint_sanity() -> Outcome {
    let mut count = 0;
    let mut worst_im: f64 = 0.0;
    for s in [0.5, 1.0] {
        for amp in [-0.5, -2.0] {
            let g = Grid::new(1, 128, 40.0).unwrap();
            let v = PotentialSpec::gaussian(c64(amp, 0.0), 1.0).sample(&g).unwrap();
            let sp = classified_spectrum(&g, s, &v, &VerifyOptions::default()).map_err(|e| e.to_string())?;
            for l in sp.discrete() {
                worst_im = worst_im.max(l.im.abs());
                ensure(l.im.abs() <= 1e-8 && l.re < 0.0, || format!("s={s} A={amp}: {l}"))?;
                count += 1;
            }
        }
    }
    ensure(count > 0, || "no discrete candidates".into())?;
    Ok(format!("{count} discrete candidates, max |Im| {worst_im:.1e} (tol 1e-8), all Re < 0"))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("resolvent oracle", resolvent_oracle),
        ("bound dominance", bound_dominance),
        ("distortion suites", distortion_suites),
        ("discrete Birman-Solomyak", birman_solomyak),
        ("determinant layer", determinant_layer),
        ("eigen kernel", eigen_kernel),
        ("fixed-shift inequality, quantitative", t2_quantitative),
        ("spectral-distance inequalities, property", t1_property),
        ("zero-sum envelope", bgk_property),
        ("hull-distance surrogate", hansmann),
        ("self-adjoint sanity", self_adjoint_sanity),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match &outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.2}s]", i + 1),
            Err(detail) => {
                println!("FAIL {:>2} {name}: {detail} [{secs:.2}s]", i + 1);
                failed.push(i + 1);
            }
        }
    }
    println!("acceptance: {}/{} passed", criteria.len() - failed.len(), criteria.len());
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
