//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::fmt::Display;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::Parser;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ringmat_cli::commands::{run, Cli};
use ringmat_cli::docs::{to_text, MatroidDocument};
use ringmat_core::group::{check_primes, support_primes};
use ringmat_core::linalg::{determinant, rank};
use ringmat_core::matroid::size;
use ringmat_core::oracle::{abelian_groups, achievable_squares, p_groups, surjection_oracle_bounded};
use ringmat_core::tropical::{
    flag_pluecker_scan, heights, single_exchange_check, three_term_check, valuated_matroid_check,
};
use ringmat_core::tutte::{arithmetic_tutte, classical_tutte, quasi_from_class, tutte_class, tutte_of_rank};
use ringmat_core::{
    check_axioms, cyclic_surjection_exists, dual, dual_dvr, gale_dual, smith_normal_form, square_exists,
    to_qam, ExtNat, GroundSet, IntMatrix, Matroid, Realization, TorsionTag, ZMatroid,
};

const SUITE_SIZE: usize = 200;
const SUITE_SEED: u64 = 0x5eed;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn fail(e: impl Display) -> String {
    e.to_string()
}

/// `Z^n / (relations)` with `|E|` generators; `n ≤ 4`, `|E| ≤ 6`, entries in `[-9, 9]`.
fn random_realization(rng: &mut ChaCha8Rng) -> Realization {
    let n = rng.gen_range(1..=4);
    let r = rng.gen_range(0..=n);
    let k = rng.gen_range(1..=6);
    let mut columns = |count: usize| {
        let cols: Vec<Vec<i64>> = (0..count)
            .map(|_| (0..n).map(|_| rng.gen_range(-9..=9)).collect())
            .collect();
        IntMatrix::from_columns(n, &cols).unwrap()
    };
    let rel = columns(r);
    let gens = columns(k);
    Realization::new(rel, gens).unwrap()
}

struct Suite {
    realizations: Vec<Realization>,
    matroids: Vec<ZMatroid>,
}

impl Suite {
    fn build() -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED);
        let realizations: Vec<Realization> = (0..SUITE_SIZE).map(|_| random_realization(&mut rng)).collect();
        let matroids = realizations
            .iter()
            .map(|r| ZMatroid::from_realization(r).unwrap())
            .collect();
        Suite {
            realizations,
            matroids,
        }
    }

    /// Same tables with the realization-derived verification flag dropped.
    fn fresh(m: &ZMatroid) -> ZMatroid {
        Matroid::new(m.ground().clone(), m.table().to_vec()).unwrap()
    }

    /// `(M_i, M_{i+1})` around the cycle, the second copy relabeled.
    fn pairs(&self) -> impl Iterator<Item = (ZMatroid, ZMatroid)> + '_ {
        (0..self.matroids.len()).map(move |i| {
            let a = self.matroids[i].clone();
            let b = &self.matroids[(i + 1) % self.matroids.len()];
            let labels = (0..b.len()).map(|j| format!("r{j}"));
            (a, b.relabel(GroundSet::new(labels).unwrap()).unwrap())
        })
    }
}

const GOOD: &str = r#"{"ground_set":["1","2"],"modules":{
    "":{"rank":0,"torsion":[2,4]},"1":{"rank":0,"torsion":[2]},
    "2":{"rank":0,"torsion":[2]},"1,2":{"rank":0,"torsion":[]}}}"#;
const BAD: &str = r#"{"ground_set":["1","2"],"modules":{
    "":{"rank":0,"torsion":[8]},"1":{"rank":0,"torsion":[2]},
    "2":{"rank":0,"torsion":[2]},"1,2":{"rank":0,"torsion":[]}}}"#;
const REALIZATION: &str = r#"{"ambient_relations":[[4,0],[0,2]],"generators":{"1":[1,0],"2":[1,1]}}"#;

fn cli(args: &[&str]) -> Result<(i32, String), String> {
    let parsed = Cli::try_parse_from(std::iter::once("ringmat").chain(args.iter().copied())).map_err(fail)?;
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(parsed, &mut out, &mut err).map_err(fail)?;
    Ok((code, String::from_utf8(out).map_err(fail)?))
}

fn worked_example() -> Check {
    let dir = std::env::temp_dir().join(format!("ringmat-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(fail)?;
    let write = |name: &str, text: &str| {
        let p = dir.join(name);
        std::fs::write(&p, text).map(|_| p.to_string_lossy().into_owned())
    };
    let (bad, good, real) = (
        write("bad.json", BAD).map_err(fail)?,
        write("good.json", GOOD).map_err(fail)?,
        write("realization.json", REALIZATION).map_err(fail)?,
    );
    let (code, out) = cli(&["check", &bad])?;
    ensure!(code == 1, "check on the bad table exited {code}");
    ensure!(out.trim() == "violation (∅,1,2) L2a p=2 n=1", "bad table reported {out:?}");
    let (code, out) = cli(&["check", &good])?;
    ensure!(code == 0 && out.trim() == "OK", "good table: exit {code}, {out:?}");
    let (code, out) = cli(&["realize", &real])?;
    ensure!(code == 0, "realize exited {code}");
    let canonical = to_text(&MatroidDocument::emit(&MatroidDocument::parse(GOOD).map_err(fail)?.matroid));
    ensure!(out == canonical, "realize emitted {out}");
    let _ = std::fs::remove_dir_all(&dir);
    Ok("bad rejected at (∅,1,2) L2a p=2 n=1, good accepted, realize bit-exact".into())
}

fn realizability_closure(suite: &Suite) -> Check {
    let mut minors = 0;
    for (i, m) in suite.matroids.iter().enumerate() {
        Suite::fresh(m)
            .is_matroid()
            .map_err(|v| format!("realization {i} rejected: {v}"))?;
        for label in m.ground().labels() {
            for minor in [m.delete(label).map_err(fail)?, m.contract(label).map_err(fail)?] {
                Suite::fresh(&minor)
                    .is_matroid()
                    .map_err(|v| format!("minor of realization {i} at {label} rejected: {v}"))?;
                minors += 1;
            }
        }
    }
    let mut sums = 0;
    for (a, b) in suite.pairs() {
        let s = Suite::fresh(&a.direct_sum(&b).map_err(fail)?);
        s.is_matroid().map_err(|v| format!("direct sum rejected: {v}"))?;
        sums += 1;
    }
    Ok(format!("{} matroids, {minors} single-element minors, {sums} direct sums", suite.matroids.len()))
}

fn oracle_equivalence() -> Check {
    let groups = abelian_groups(64);
    let mut pairs = 0;
    for src in &groups {
        for dst in &groups {
            let oracle = surjection_oracle_bounded(src, dst, 64).map_err(fail)?;
            ensure!(cyclic_surjection_exists(src, dst) == oracle, "surjection {src} -> {dst}: oracle says {oracle}");
            pairs += 1;
        }
    }
    let mut quads = 0;
    for (p, max) in [(2, 32), (3, 27)] {
        let gs = p_groups(p, max);
        for n0 in &gs {
            let achieved = achievable_squares(n0, max).map_err(fail)?;
            for n1 in &gs {
                for n2 in &gs {
                    for n12 in &gs {
                        let oracle = achieved.contains(&(n1.clone(), n2.clone(), n12.clone()));
                        ensure!(
                            square_exists(n0, n1, n2, n12) == oracle,
                            "square ({n0}, {n1}, {n2}, {n12}): oracle says {oracle}"
                        );
                        quads += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{pairs} surjection pairs, {quads} square quadruples, 0 disagreements"))
}

fn duality(suite: &Suite) -> Check {
    for (i, (r, m)) in suite.realizations.iter().zip(&suite.matroids).enumerate() {
        let d = dual(m).map_err(fail)?;
        let full = m.full();
        let base = m.get(0).rank();
        for a in 0..=full {
            let da = d.get(full & !a);
            ensure!(da.torsion() == m.get(a).torsion(), "matroid {i}: torsion differs at {a:#b}");
            ensure!(da.rank() + base == m.get(a).rank() + size(a), "matroid {i}: dual rank at {a:#b}");
        }
        ensure!(dual(&d).map_err(fail)? == m.essentialize().0, "matroid {i}: M** != essentialize(M)");
        for p in check_primes(&support_primes(m.table())) {
            let lhs = dual_dvr(&m.localize_matroid(&p).map_err(fail)?).map_err(fail)?;
            ensure!(lhs == d.localize_matroid(&p).map_err(fail)?, "matroid {i}: localization at {p}");
        }
        let gale = ZMatroid::from_realization(&gale_dual(r)).map_err(fail)?;
        ensure!(gale == d, "matroid {i}: Gale dual realizes a different table");
    }
    Ok(format!("{} matroids", suite.matroids.len()))
}

fn tutte_identities(suite: &Suite) -> Check {
    let mut steps = 0;
    for (i, m) in suite.matroids.iter().enumerate() {
        let (m, _) = m.essentialize();
        let t = tutte_class(&m).map_err(fail)?;
        let (loops, coloops) = m.generic_loops_coloops();
        for (j, label) in m.ground().labels().iter().enumerate() {
            if (loops | coloops) >> j & 1 == 1 {
                continue;
            }
            let del = tutte_class(&m.delete(label).map_err(fail)?).map_err(fail)?;
            let con = tutte_class(&m.contract(label).map_err(fail)?).map_err(fail)?;
            ensure!(t == &del + &con, "matroid {i}: deletion-contraction fails at {label}");
            steps += 1;
        }
        let d = dual(&m).map_err(fail)?;
        for a in 0..=m.full() {
            let tag = TorsionTag::of(m.get(a));
            ensure!(tag == TorsionTag::of(d.get(m.full() & !a)), "matroid {i}: tags differ at {a:#b}");
        }
        ensure!(
            t.terms().all(|(mono, _)| (0..=m.full()).any(|a| TorsionTag::of(m.get(a)) == mono.tag)),
            "matroid {i}: monomial with a foreign tag"
        );
    }
    let mut products = 0;
    for (a, b) in suite.pairs() {
        let (a, _) = a.essentialize();
        let (b, _) = b.essentialize();
        let lhs = tutte_class(&a.direct_sum(&b).map_err(fail)?).map_err(fail)?;
        let rhs = &tutte_class(&a).map_err(fail)? * &tutte_class(&b).map_err(fail)?;
        ensure!(lhs == rhs, "direct sum class is not the product");
        products += 1;
    }
    Ok(format!("{steps} deletion-contraction steps, {products} products"))
}

fn specializations(suite: &Suite) -> Check {
    for (i, m) in suite.matroids.iter().enumerate() {
        let (m, _) = m.essentialize();
        let t = tutte_class(&m).map_err(fail)?;
        ensure!(
            classical_tutte(&t) == tutte_of_rank(m.len(), &m.generic_rank()),
            "matroid {i}: classical specialization differs"
        );
    }
    let u12 = Realization::new(
        IntMatrix::zeros(1, 0),
        IntMatrix::from_columns(1, &[vec![1], vec![1]]).unwrap(),
    )
    .map_err(fail)?;
    let u12 = tutte_class(&ZMatroid::from_realization(&u12).map_err(fail)?).map_err(fail)?;
    ensure!(classical_tutte(&u12).to_string() == "x + y", "U12 gave {}", classical_tutte(&u12));
    let good = tutte_class(&MatroidDocument::parse(GOOD).map_err(fail)?.matroid.verify().map_err(fail)?)
        .map_err(fail)?;
    let arith = arithmetic_tutte(&good);
    ensure!(arith.display_shifted() == "(y-1)^2 + 4*(y-1) + 8", "arithmetic gave {}", arith.display_shifted());
    ensure!(classical_tutte(&good).to_string() == "y^2", "classical gave {}", classical_tutte(&good));
    Ok(format!("{} matroids, U12 = x + y, good example checked", suite.matroids.len()))
}

fn quasi_interpolation(suite: &Suite) -> Check {
    let (mut arith_pts, mut classical_pts) = (0, 0);
    for (i, m) in suite.matroids.iter().enumerate() {
        let (m, _) = m.essentialize();
        let t = tutte_class(&m).map_err(fail)?;
        let (arith, classical) = (arithmetic_tutte(&t), classical_tutte(&t));
        let mults = m.multiplicities();
        for x in -5i64..=5 {
            for y in -5i64..=5 {
                let (bx, by) = (BigInt::from(x), BigInt::from(y));
                let q: BigUint = BigInt::from((x - 1) * (y - 1)).magnitude().clone();
                let value = quasi_from_class(&t, &bx, &by);
                if mults.iter().all(|m| (&q % m).is_zero()) {
                    ensure!(value == arith.eval(&bx, &by), "matroid {i}: Q({x},{y}) != arithmetic");
                    arith_pts += 1;
                }
                if mults.iter().all(|m| num_integer::Integer::gcd(&q, m).is_one()) {
                    ensure!(value == classical.eval(&bx, &by), "matroid {i}: Q({x},{y}) != classical");
                    classical_pts += 1;
                }
            }
        }
    }
    Ok(format!("{arith_pts} arithmetic points, {classical_pts} classical points"))
}

fn quasi_arithmetic(suite: &Suite) -> Check {
    for (i, m) in suite.matroids.iter().enumerate() {
        let q = to_qam(m);
        check_axioms(&q).map_err(|v| format!("matroid {i}: {}", v.describe(&q.ground)))?;
    }
    Ok(format!("{} matroids", suite.matroids.len()))
}

fn tropical(suite: &Suite) -> Check {
    let (mut relations, mut valuated) = (0, 0);
    let (mut scanned, mut scan_relations, mut scan_violations, mut scan_lines) = (0, 0, 0, 0);
    let levels: Vec<ExtNat> = (1..=6).map(ExtNat::Fin).chain([ExtNat::Inf]).collect();
    for (i, m) in suite.matroids.iter().enumerate() {
        for p in support_primes(m.table()) {
            let local = m.localize_matroid(&p).map_err(fail)?;
            for &n in &levels {
                let h = heights(&local, n).map_err(fail)?;
                let three = three_term_check(&h);
                let single = single_exchange_check(&h);
                ensure!(three.ok(), "matroid {i}, p={p}, n={n}: three-term relation fails");
                ensure!(single.ok(), "matroid {i}, p={p}, n={n}: exchange relation fails");
                relations += three.relations + single.relations;
                if m.len() <= 5 {
                    let mut log = Vec::new();
                    let scan = flag_pluecker_scan(&h, Some(&mut log)).map_err(fail)?;
                    scanned += 1;
                    scan_relations += scan.relations;
                    scan_violations += scan.violations.len();
                    scan_lines += log.split(|&b| b == b'\n').filter(|l| !l.is_empty()).count();
                }
            }
            let (e, _) = local.essentialize();
            ensure!(valuated_matroid_check(&e).map_err(fail)?.ok(), "matroid {i}, p={p}: valuated exchange fails");
            valuated += 1;
        }
    }
    println!(
        "  flag scan (reported, not gated): {scanned} height functions, {scan_relations} relations, \
         {scan_violations} violations, {scan_lines} log lines"
    );
    Ok(format!("{relations} relations, {valuated} valuated checks"))
}

fn snf() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x51f);
    let mut full_rank = 0;
    for k in 0..500 {
        let rows = rng.gen_range(1..=6);
        let cols = rng.gen_range(1..=6);
        let bound = [2, 9, 100][k % 3];
        let entries = (0..rows * cols).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect();
        let m = IntMatrix::from_entries(rows, cols, entries).unwrap();
        let s = smith_normal_form(&m);
        ensure!(&(&s.u * &m) * &s.v == s.diagonal_matrix(), "matrix {k}: u*m*v != D");
        ensure!(determinant(&s.u).abs().is_one(), "matrix {k}: u not unimodular");
        ensure!(determinant(&s.v).abs().is_one(), "matrix {k}: v not unimodular");
        let nonzero: Vec<&BigInt> = s.d.iter().take_while(|x| !x.is_zero()).collect();
        ensure!(s.d[nonzero.len()..].iter().all(Zero::is_zero), "matrix {k}: zeros not last");
        ensure!(nonzero.iter().all(|x| x.is_positive()), "matrix {k}: negative diagonal");
        ensure!(nonzero.windows(2).all(|w| (w[1] % w[0]).is_zero()), "matrix {k}: chain broken");
        if rows == cols && rank(&m) == rows {
            let prod: BigInt = s.d.iter().product();
            ensure!(prod == determinant(&m).abs(), "matrix {k}: product of factors != |det|");
            full_rank += 1;
        }
    }
    Ok(format!("500 matrices, {full_rank} square full-rank"))
}

fn report(id: usize, title: &str, limit: Option<Duration>, check: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let result = check();
    let elapsed = start.elapsed();
    let (ok, detail) = match result {
        Ok(d) => match limit {
            Some(l) if elapsed > l => (false, format!("{d}; over the {} s limit", l.as_secs())),
            _ => (true, d),
        },
        Err(e) => (false, e),
    };
    let verdict = if ok { "PASS" } else { "FAIL" };
    println!("criterion {id:>2} {verdict}  {title}: {detail} [{:.2} s]", elapsed.as_secs_f64());
    ok
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let suite = Suite::build();
    let results = [
        report(1, "worked example", Some(secs(1)), worked_example),
        report(2, "realizability closure", Some(secs(30)), || realizability_closure(&suite)),
        report(3, "oracle equivalence", Some(secs(60)), oracle_equivalence),
        report(4, "duality", None, || duality(&suite)),
        report(5, "Tutte identities", None, || tutte_identities(&suite)),
        report(6, "specializations", None, || specializations(&suite)),
        report(7, "quasi-polynomial", None, || quasi_interpolation(&suite)),
        report(8, "quasi-arithmetic axioms", None, || quasi_arithmetic(&suite)),
        report(9, "tropical", None, || tropical(&suite)),
        report(10, "Smith normal form", None, snf),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("{passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
