//! Acceptance run: one PASS/FAIL line per criterion.

mod common;

use std::time::{Duration, Instant};

use common::*;
use krylovium::gf::PrimeModulus;
use krylovium::krylov::{
    keller_gehrig_basis, krylov_basis, krylov_matrix, krylov_matrix_hybrid, max_indices, max_krylov_basis,
    max_krylov_basis_traced, naive_krylov_matrix, naive_max_indices, reverse_kernel_transform, AlgoConfig,
    KrylovSpec, Strategy, Trace,
};
use krylovium::lifting::{truncated_inverse, truncated_product};
use krylovium::orderbasis::{hermite_diagonal, minimal_kernel_basis};
use krylovium::poly::Poly;
use krylovium::polmat::PolyMatrix;
use krylovium::spectral::{invariant_factors, kalman_decomposition, matrix_power, vector_minpoly};
use krylovium::testgen::{InstanceRng, MatrixShape, VectorShape};
use num_bigint::BigUint;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const CORPUS_PER_PRIME: usize = 200;
const CORPUS_MAX_N: usize = 24;

fn field(p: u64) -> PrimeModulus {
    PrimeModulus::new(p).unwrap()
}

fn corpus(p: u64) -> impl Iterator<Item = (usize, KrylovSpec)> {
    let f = field(p);
    let mut rng = InstanceRng::new(0x5eed ^ p);
    (0..CORPUS_PER_PRIME).map(move |i| (i, rng.family_member(f, CORPUS_MAX_N, i)))
}

fn raw(spec: &KrylovSpec) -> (u64, Mat, Mat) {
    (spec.a().field().value(), rows_of(spec.a()), rows_of(spec.u()))
}

/// `[xI - A  -U]`, or `[I - xA  -U]` when `reversed`.
fn pencil(spec: &KrylovSpec, reversed: bool) -> PolyMatrix {
    let f = spec.a().field();
    let (n, m) = (spec.n(), spec.m());
    PolyMatrix::from_fn(f, n, n + m, |i, j| {
        if j < n {
            let a = f.neg(spec.a().get(i, j));
            let one = u64::from(i == j);
            if reversed {
                Poly::from_coeffs(f, vec![one, a])
            } else {
                Poly::from_coeffs(f, vec![a, one])
            }
        } else {
            Poly::constant(f, f.neg(spec.u().get(i, j - n)))
        }
    })
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for p in PRIMES {
        let mut rng = InstanceRng::new(77 + p);
        for (i, spec) in corpus(p) {
            let (p, a, u) = raw(&spec);
            let (want_d, want_basis) = oracle_indices(p, &a, &u).clone();
            let got = max_indices(&spec).naturals_or(0);
            ensure!(got == want_d, "p={p} #{i}: max_indices {got:?} vs oracle {want_d:?}");
            ensure!(
                naive_max_indices(&spec).naturals_or(0) == want_d,
                "p={p} #{i}: naive_max_indices disagrees with the oracle"
            );
            let n = spec.n();
            let d: Vec<usize> = (0..spec.m()).map(|_| rng.below(n as u64 + 3) as usize).collect();
            let want_k = krylov_columns(p, &a, &u, &d);
            let k1 = krylov_matrix(&spec, &d).map_err(|e| e.to_string())?;
            let k2 = krylov_matrix_hybrid(&spec, &d, &AlgoConfig::default()).map_err(|e| e.to_string())?;
            let k3 = naive_krylov_matrix(&spec, &d).map_err(|e| e.to_string())?;
            let want_k = dense(p, n, want_k.len(), &from_columns(n, &want_k));
            ensure!(k1 == want_k, "p={p} #{i}: krylov_matrix differs for d={d:?}");
            ensure!(k2 == want_k, "p={p} #{i}: krylov_matrix_hybrid differs for d={d:?}");
            ensure!(k3 == want_k, "p={p} #{i}: naive_krylov_matrix differs for d={d:?}");
            let hybrid = max_krylov_basis(&spec, &AlgoConfig::default());
            let kg = keller_gehrig_basis(&spec);
            ensure!(hybrid == kg, "p={p} #{i}: max_krylov_basis differs from keller_gehrig_basis");
            let want_b = dense(p, n, want_basis.len(), &from_columns(n, &want_basis));
            ensure!(hybrid.basis == want_b, "p={p} #{i}: basis differs from the greedy oracle");
            count += 1;
        }
    }
    let t = start.elapsed();
    ensure!(t < Duration::from_secs(60), "took {t:?}, limit 60 s");
    Ok(format!("{count} instances over p in {PRIMES:?}, {:.2} s", t.as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let mut count = 0;
    for p in PRIMES {
        for (i, spec) in corpus(p) {
            let (n, m) = (spec.n(), spec.m());
            for reversed in [false, true] {
                let f = pencil(&spec, reversed);
                let b = minimal_kernel_basis(&f).map_err(|e| format!("p={p} #{i}: {e}"))?;
                ensure!(b.cols() == m, "p={p} #{i}: kernel has {} columns, expected {m}", b.cols());
                ensure!(f.mul(&b).unwrap().is_zero(), "p={p} #{i}: F B != 0");
                ensure!(b.is_column_reduced().unwrap(), "p={p} #{i}: basis not column reduced");
                ensure!(b.cdeg().sum() <= n, "p={p} #{i}: |cdeg B| = {} > n = {n}", b.cdeg().sum());
                if reversed {
                    let t0 = b.row_range(n, n + m).eval_at_zero();
                    ensure!(
                        inverse(p, &rows_of(&t0)).is_some(),
                        "p={p} #{i}: T(0) singular for [I - xA  -U]"
                    );
                }
            }
            count += 1;
        }
    }
    Ok(format!("{count} instances, both pencils"))
}

fn criterion_3() -> Outcome {
    let mut count = 0;
    for p in PRIMES {
        for (i, spec) in corpus(p) {
            let (n, m) = (spec.n(), spec.m());
            if m == 0 {
                continue;
            }
            let (_, a, u) = raw(&spec);
            let b = minimal_kernel_basis(&pencil(&spec, false)).map_err(|e| e.to_string())?;
            let t = b.row_range(n, n + m);
            let h = hermite_diagonal(&t).map_err(|e| format!("p={p} #{i}: {e}"))?;
            let degs: Vec<usize> = h.iter().map(|x| x.degree().finite().unwrap()).collect();
            let det = t.determinant().unwrap();
            let dd = det.degree().finite().ok_or(format!("p={p} #{i}: det T = 0"))?;
            ensure!(degs.iter().sum::<usize>() == dd, "p={p} #{i}: sum {degs:?} != deg det T = {dd}");
            let (want, _) = oracle_indices(p, &a, &u);
            ensure!(degs == want, "p={p} #{i}: Hermite degrees {degs:?} vs oracle indices {want:?}");
            count += 1;
        }
    }
    Ok(format!("{count} instances with m > 0"))
}

/// Square `m x m` polynomial matrix with invertible constant term and
/// unbalanced column degrees.
fn random_series_matrix(rng: &mut InstanceRng, p: u64, m: usize) -> (Vec<Mat>, PolyMatrix) {
    let f = field(p);
    let degs: Vec<usize> = (0..m).map(|_| [0, 1, 1, 2, 4, 7][rng.below(6) as usize]).collect();
    let top = degs.iter().copied().max().unwrap_or(0);
    let mut coeffs = vec![rows_of(&rng.invertible(f, m))];
    for k in 1..=top {
        let c = rows_of(&rng.matrix(f, m, m));
        coeffs.push(
            c.iter()
                .map(|row| row.iter().enumerate().map(|(j, &v)| if k <= degs[j] { v } else { 0 }).collect())
                .collect(),
        );
    }
    let pm = poly_matrix(p, m, m, &coeffs);
    (coeffs, pm)
}

fn random_orders(rng: &mut InstanceRng, m: usize, big: usize) -> Vec<usize> {
    (0..m)
        .map(|_| match rng.below(4) {
            0 => 0,
            1 => 1 + rng.below(3) as usize,
            _ => rng.below(big as u64 + 1) as usize,
        })
        .collect()
}

fn criterion_4() -> Outcome {
    let mut rng = InstanceRng::new(4);
    let (mut inv_count, mut prod_count) = (0, 0);
    for idx in 0..600 {
        let p = PRIMES[idx % 4];
        let f = field(p);
        let m = 1 + rng.below(6) as usize;
        let (coeffs, pm) = random_series_matrix(&mut rng, p, m);
        let total = pm.cdeg().sum();
        let d = random_orders(&mut rng, m, 3 * total + 8);
        let order = d.iter().copied().max().unwrap_or(0);
        let want = col_truncate(&series_inverse(p, &coeffs, m, order).unwrap(), &d);
        let got = truncated_inverse(&pm, &d).map_err(|e| format!("#{idx}: {e}"))?;
        ensure!(same_series(&coeffs_of(&got), &want), "#{idx} p={p} d={d:?}: truncated inverse differs");
        inv_count += 1;

        let n = 1 + rng.below(6) as usize;
        let fdeg = rng.below(3 * order as u64 + 4) as usize;
        let fc: Vec<Mat> = (0..=fdeg).map(|_| rows_of(&rng.matrix(f, n, m))).collect();
        let gc: Vec<Mat> = (0..=rng.below(6)).map(|_| rows_of(&rng.matrix(f, m, m))).collect();
        let fm = poly_matrix(p, n, m, &fc);
        let g = poly_matrix(p, m, m, &gc);
        let want = col_truncate(&pm_mul(p, &fc, &gc, n, m, m), &d);
        let got = truncated_product(&fm, &g, &d).map_err(|e| format!("#{idx}: {e}"))?;
        ensure!(same_series(&coeffs_of(&got), &want), "#{idx} p={p} d={d:?}: truncated product differs");
        prod_count += 1;
    }
    Ok(format!("{inv_count} inverse and {prod_count} product instances"))
}

fn criterion_5() -> Outcome {
    let mut rng = InstanceRng::new(5);
    let mut count = 0;
    for idx in 0..200 {
        let p = PRIMES[idx % 4];
        let m = 1 + rng.below(6) as usize;
        let (coeffs, pm) = random_series_matrix(&mut rng, p, m);
        let lin = pm.partial_linearization().map_err(|e| e.to_string())?;
        let big = &lin.matrix;
        ensure!(big.rows() == lin.dim && big.cols() == lin.dim, "#{idx}: dim mismatch");
        if lin.degree_bound > 0 {
            ensure!(
                big.degree().finite().unwrap_or(0) <= lin.degree_bound,
                "#{idx}: degree above the bound {}",
                lin.degree_bound
            );
        }
        let d1 = pm.determinant().unwrap();
        let d2 = big.determinant().unwrap();
        ensure!(d1 == d2, "#{idx} p={p}: det changed by linearization");
        // pointwise check of det P against the constant-matrix oracle
        for x in 0..5u64.min(p) {
            let v = rows_of(&pm.eval(x));
            let lu = charpoly(p, &v);
            let det_v = if m % 2 == 0 { lu[0] } else { subm(p, 0, lu[0]) };
            ensure!(d1.eval(x) == det_v, "#{idx} p={p}: det P({x}) mismatch");
        }
        let order = 2 * (pm.cdeg().sum() + 1);
        let want = series_inverse(p, &coeffs, m, order).unwrap();
        let big_inv = series_inverse(p, &coeffs_of(big), lin.dim, order)
            .ok_or(format!("#{idx}: linearized constant term singular"))?;
        let lead: Vec<Mat> = big_inv.iter().map(|c| c[..m].iter().map(|r| r[..m].to_vec()).collect()).collect();
        ensure!(same_series(&lead, &want), "#{idx} p={p}: leading inverse block differs");
        count += 1;
    }
    Ok(format!("{count} instances, m <= 6"))
}

/// Solves `T C = R` for polynomial `C` of degree below `len` when `T(0)` is invertible.
fn series_solve(p: u64, t: &[Mat], r: &[Mat], m: usize, cols: usize, len: usize) -> Vec<Mat> {
    let t0inv = inverse(p, &t[0]).unwrap();
    let mut c: Vec<Mat> = Vec::with_capacity(len);
    for k in 0..len {
        let mut rhs = r.get(k).cloned().unwrap_or_else(|| zeros(m, cols));
        for i in 1..=k.min(t.len() - 1) {
            let s = mat_mul(p, &t[i], &c[k - i], m, cols);
            rhs = rhs.iter().zip(&s).map(|(x, y)| x.iter().zip(y).map(|(&u, &v)| subm(p, u, v)).collect()).collect();
        }
        c.push(mat_mul(p, &t0inv, &rhs, m, cols));
    }
    c
}

fn criterion_6() -> Outcome {
    let mut rng = InstanceRng::new(6);
    let (mut count, mut singular) = (0, 0);
    for idx in 0..150 {
        let p = PRIMES[idx % 4];
        let f = field(p);
        let n = 1 + rng.below(10) as usize;
        let m = 1 + rng.below(4) as usize;
        let shape = MatrixShape::ALL[idx % MatrixShape::ALL.len()];
        let vshape = VectorShape::ALL[(idx / 5) % VectorShape::ALL.len()];
        let spec = rng.spec(f, n, m, shape, vshape);
        if inverse(p, &rows_of(spec.a())).is_none() {
            singular += 1;
        }
        let k = minimal_kernel_basis(&pencil(&spec, false)).map_err(|e| e.to_string())?;
        let (s, t) = (k.row_range(0, n), k.row_range(n, n + m));
        let (sh, th) = reverse_kernel_transform(&s, &t, n).map_err(|e| format!("#{idx}: {e}"))?;
        let hat = sh.vcat(&th).unwrap();
        let rev = pencil(&spec, true);
        ensure!(rev.mul(&hat).unwrap().is_zero(), "#{idx}: transformed basis not in the kernel");
        ensure!(inverse(p, &rows_of(&th.eval_at_zero())).is_some(), "#{idx}: T^(0) singular");
        // cofactor against an independently computed kernel basis of [I - xA  -U]
        let kr = minimal_kernel_basis(&rev).map_err(|e| e.to_string())?;
        let tr = coeffs_of(&kr.row_range(n, n + m));
        let len = hat.degree().finite().unwrap_or(0) + 1;
        let cc = series_solve(p, &tr, &coeffs_of(&th), m, m, len);
        let c = poly_matrix(p, m, m, &cc);
        ensure!(kr.mul(&c).unwrap() == hat, "#{idx}: no polynomial cofactor");
        let det = c.determinant().unwrap();
        ensure!(det.degree().finite() == Some(0), "#{idx}: cofactor not unimodular (det {det})");
        count += 1;
    }
    ensure!(singular > 0, "corpus has no singular A");
    Ok(format!("{count} instances, {singular} with singular A"))
}

fn criterion_7() -> Outcome {
    let mut rng = InstanceRng::new(7);
    let ks: Vec<BigUint> = vec![
        BigUint::from(0u32),
        BigUint::from(1u32),
        BigUint::from(2u32),
        BigUint::from(1_000_000_007u64),
        (BigUint::from(1u32) << 64) + 1u32,
    ];
    let mut count = 0;
    for idx in 0..80 {
        let p = PRIMES[idx % 4];
        let f = field(p);
        let n = 1 + rng.below(10) as usize;
        let shape = MatrixShape::ALL[(idx / 4) % MatrixShape::ALL.len()];
        let a = rng.square(f, n, shape);
        let ar = rows_of(&a);
        let fr = invariant_factors(&a);
        let facs: Vec<Vec<u64>> = fr.invariant_factors.iter().map(|q| q.coeffs().to_vec()).collect();
        ensure!(facs.iter().all(|c| c.len() >= 2 && c[c.len() - 1] == 1), "#{idx}: factor not monic nontrivial");
        for w in facs.windows(2) {
            ensure!(prem(p, &w[1], &w[0]).is_empty(), "#{idx}: divisibility chain broken");
        }
        let prod = facs.iter().fold(vec![1], |acc, c| pmul(p, &acc, c));
        ensure!(prod == charpoly(p, &ar), "#{idx} p={p}: product of factors != charpoly");
        let last = facs.last().unwrap();
        ensure!(poly_of_matrix(p, last, &ar) == zeros(n, n), "#{idx}: f_s(A) != 0");
        ensure!(charpoly(p, &rows_of(&fr.block_form)) == prod, "#{idx}: block form has another charpoly");
        for k in &ks {
            ensure!(rows_of(&matrix_power(&a, k)) == binary_power(p, &ar, k), "#{idx} p={p}: A^{k} differs");
        }
        let mu = 1 + rng.below(3) as usize;
        let u = rng.vectors(f, n, mu, VectorShape::ALL[idx % VectorShape::ALL.len()]);
        let ur = rows_of(&u);
        let (d0, _) = oracle_indices(p, &ar, &from_columns(n, &[column(&ur, 0)]));
        let mp = vector_minpoly(&a, &column(&ur, 0));
        ensure!(mp.degree().finite() == Some(d0[0]), "#{idx}: vector minpoly degree");
        ensure!(mat_vec(p, &poly_of_matrix(p, mp.coeffs(), &ar), &column(&ur, 0)) == vec![0; n], "#{idx}: f(A)u != 0");
        let spec = KrylovSpec::new(a.clone(), u.clone()).unwrap();
        let kd = kalman_decomposition(&spec);
        let (dk, basis) = oracle_indices(p, &ar, &ur);
        let nu = dk.iter().sum::<usize>();
        ensure!(kd.nu == nu, "#{idx}: nu {} vs orbit dimension {nu}", kd.nu);
        let pr = rows_of(&kd.p);
        ensure!((0..nu).all(|j| column(&pr, j) == basis[j]), "#{idx}: leading columns are not the Krylov basis");
        let pinv = inverse(p, &pr).ok_or(format!("#{idx}: P singular"))?;
        let at = mat_mul(p, &mat_mul(p, &pinv, &ar, n, n), &pr, n, n);
        let ut = mat_mul(p, &pinv, &ur, n, ur[0].len());
        ensure!((nu..n).all(|i| (0..nu).all(|j| at[i][j] == 0)), "#{idx}: lower-left block of P^-1 A P nonzero");
        ensure!((nu..n).all(|i| ut[i].iter().all(|&v| v == 0)), "#{idx}: bottom of P^-1 U nonzero");
        count += 1;
    }
    Ok(format!("{count} matrices, powers k in {{0, 1, 2, 10^9+7, 2^64+1}}"))
}

/// Lexicographically largest `delta` in `{0..bound}^m` with full-rank `K(A, U, delta)`, by enumeration.
fn brute_lexmax(p: u64, a: &Mat, u: &Mat, m: usize, bound: usize) -> Vec<usize> {
    let mut delta = vec![bound; m];
    loop {
        let cols = krylov_columns(p, a, u, &delta);
        if rank_of_columns(p, &cols) == cols.len() {
            return delta;
        }
        // next tuple in decreasing lexicographic order
        let mut j = m;
        loop {
            j -= 1;
            if delta[j] > 0 {
                delta[j] -= 1;
                for x in delta.iter_mut().skip(j + 1) {
                    *x = bound;
                }
                break;
            }
        }
    }
}

fn criterion_8() -> Outcome {
    let mut rng = InstanceRng::new(8);
    let (mut shortcut, mut looped, mut rounds_checked) = (0, 0, 0);
    for idx in 0..240 {
        let p = PRIMES[idx % 4];
        let f = field(p);
        let n = 2 + rng.below(7) as usize;
        let m = 1 + rng.below(3) as usize;
        let spec = rng.spec(
            f,
            n,
            m,
            MatrixShape::ALL[idx % MatrixShape::ALL.len()],
            VectorShape::ALL[(idx / 5) % VectorShape::ALL.len()],
        );
        let (_, a, u) = raw(&spec);
        let want = krylov_basis(&spec, &AlgoConfig::with_strategy(Strategy::Naive));
        for c in [0.0, 0.5, 1.0, 2.0, 4.0] {
            let config = AlgoConfig {
                exponent: Some(c),
                ..AlgoConfig::default()
            };
            let thres = config.threshold(n).unwrap();
            let predicted_shortcut = (m as u64) * thres <= n as u64;
            let mut took_shortcut = false;
            let mut failure = None;
            let got = max_krylov_basis_traced(&spec, &config, |t| match t {
                Trace::Shortcut => took_shortcut = true,
                Trace::Round {
                    rounds_done,
                    delta,
                    blocks,
                } => {
                    rounds_checked += 1;
                    let cols = krylov_columns(p, &a, &u, delta);
                    let v: Vec<Vec<u64>> = blocks.iter().flat_map(|b| (0..b.cols()).map(|j| b.column(j))).collect();
                    if v != cols {
                        failure = Some(format!("round {rounds_done}: blocks are not K(A, U, delta)"));
                    } else if rank_of_columns(p, &v) != v.len() {
                        failure = Some(format!("round {rounds_done}: V not of full rank"));
                    } else {
                        let bound = (1usize << rounds_done).min(n);
                        let lex = brute_lexmax(p, &a, &u, m, bound);
                        if lex != delta {
                            failure = Some(format!("round {rounds_done}: delta {delta:?}, brute force {lex:?}"));
                        }
                    }
                }
                Trace::LongChains(_) => {}
            });
            if let Some(e) = failure {
                return Err(format!("#{idx} c={c}: {e}"));
            }
            ensure!(took_shortcut == predicted_shortcut, "#{idx} c={c}: wrong branch taken");
            ensure!(got == want, "#{idx} c={c}: basis differs from the naive one");
            if took_shortcut {
                shortcut += 1;
            } else {
                looped += 1;
            }
        }
    }
    ensure!(shortcut > 0 && looped > 0, "only one branch exercised ({shortcut} shortcut, {looped} loop)");
    Ok(format!("{shortcut} shortcut runs, {looped} loop runs, {rounds_checked} rounds brute-forced"))
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let f = field(P62);
    let mut report = Vec::new();
    for n in [64usize, 128, 256] {
        let m = n / 8;
        let spec = InstanceRng::new(9).spec(f, n, m, MatrixShape::Dense, VectorShape::Dense);
        let mut results = Vec::new();
        let mut times = Vec::new();
        for s in Strategy::ALL {
            let t = Instant::now();
            results.push(krylov_basis(&spec, &AlgoConfig::with_strategy(s)));
            times.push(t.elapsed());
        }
        ensure!(results.windows(2).all(|w| w[0] == w[1]), "n={n}: strategies disagree");
        let (hybrid, kg) = (times[0], times[1]);
        ensure!(
            hybrid.as_secs_f64() <= 10.0 * kg.as_secs_f64().max(1e-3),
            "n={n}: hybrid {hybrid:?} vs keller-gehrig {kg:?}"
        );
        report.push(format!(
            "n={n}: hybrid {:.3}s kg {:.3}s polmat {:.3}s naive {:.3}s",
            hybrid.as_secs_f64(),
            kg.as_secs_f64(),
            times[2].as_secs_f64(),
            times[3].as_secs_f64()
        ));
    }
    let t = start.elapsed();
    ensure!(t < Duration::from_secs(600), "took {t:?}, limit 10 min");
    Ok(format!("{}; total {:.1}s", report.join("; "), t.as_secs_f64()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("cross-strategy equivalence", criterion_1),
        ("kernel contract", criterion_2),
        ("Hermite diagonal degrees", criterion_3),
        ("truncated inverse and product", criterion_4),
        ("partial linearization", criterion_5),
        ("reversed kernel transform", criterion_6),
        ("spectral data", criterion_7),
        ("threshold sweep and loop invariant", criterion_8),
        ("smoke benchmark", criterion_9),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {} ({name}): PASS: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL: {detail}", k + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
