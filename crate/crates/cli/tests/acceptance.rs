//! Acceptance suite: runs every criterion, prints one PASS/FAIL line per
//! criterion and exits nonzero if any fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;
#[path = "support/golden.rs"]
mod golden;

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{
    det, random_complex, random_matrix, rank_over_fp, rational_rank_and_minor, rng, trial_factor,
    Shape,
};
use locweinstein::decompose::elementary_decomposition;
use locweinstein::intlin::snf;
use locweinstein::localize::{
    category_nontrivial_over, classify_disks, field_homology, quasi_iso, CategoryClass,
};
use locweinstein::loopsphere::{
    certified_window, hom_cohomology, x_action_test, SphereRing, TwistedComplex, XAction,
};
use locweinstein::primes::is_prime;
use locweinstein::weinstein::{
    disk_complex_from_moore, embeddable, embedding_witness, is_valid_obstruction, replace_handles,
    subdomain_classify, HandlePresentation,
};
use locweinstein::zcomplex::elementary_complex;
use locweinstein::{BigInt, FreeComplex, IntMatrix, PrimeSet};
use num_traits::{One, Signed, Zero};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || {
        format!("took {:.2} s, limit {} s", t.as_secs_f64(), limit.as_secs())
    })
}

/// Plain row-by-column product, independent of the library's.
fn mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    assert_eq!(a.cols(), b.rows());
    let mut out = IntMatrix::zeros(a.rows(), b.cols());
    for i in 0..a.rows() {
        for j in 0..b.cols() {
            let mut acc = BigInt::zero();
            for k in 0..a.cols() {
                acc += &a[(i, k)] * &b[(k, j)];
            }
            out[(i, j)] = acc;
        }
    }
    out
}

fn snf_certificates() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1);
    let mut full_rank = 0;
    for case in 0..1000 {
        let rows = r.gen_range(0..=8);
        let cols = r.gen_range(0..=8);
        let m = random_matrix(&mut r, rows, cols, 100);
        let f = snf(&m);
        ensure(mul(&mul(&f.u, &m), &f.v) == f.s, || {
            format!("case {case}: U·M·V != S")
        })?;
        ensure(det(&f.u).abs().is_one() && det(&f.v).abs().is_one(), || {
            format!("case {case}: not unimodular")
        })?;
        ensure(mul(&f.u, &f.u_inv) == IntMatrix::identity(rows), || {
            format!("case {case}: bad U inverse")
        })?;
        ensure(mul(&f.v, &f.v_inv) == IntMatrix::identity(cols), || {
            format!("case {case}: bad V inverse")
        })?;
        let mut diag = Vec::new();
        for i in 0..rows {
            for j in 0..cols {
                if i != j {
                    ensure(f.s[(i, j)].is_zero(), || {
                        format!("case {case}: S not diagonal")
                    })?;
                } else if !f.s[(i, i)].is_zero() {
                    diag.push(f.s[(i, i)].clone());
                }
            }
        }
        let rank = rational_rank_and_minor(&m).0;
        ensure(diag.len() == rank, || {
            format!("case {case}: rank {} vs {rank}", diag.len())
        })?;
        ensure((0..rank).all(|i| f.s[(i, i)].is_positive()), || {
            format!("case {case}: nonpositive factor")
        })?;
        ensure(diag.windows(2).all(|w| (&w[1] % &w[0]).is_zero()), || {
            format!("case {case}: divisibility")
        })?;
        if rank == rows.min(cols) && rank > 0 {
            full_rank += 1;
        }
    }
    within(start, Duration::from_secs(10))?;
    Ok(format!("1000 matrices up to 8x8, {full_rank} of full rank"))
}

fn decomposition_round_trip() -> Outcome {
    let start = Instant::now();
    let shape = Shape {
        lo: -5,
        hi: 5,
        max_rank: 6,
        bound: 50,
        free_prob: 0.2,
        scramble: 30,
    };
    let mut r = rng(2);
    let mut summands = 0;
    for case in 0..1000 {
        let c = random_complex(&mut r, shape);
        let s = elementary_decomposition(&c).map_err(|e| format!("case {case}: {e}"))?;
        let normal = s.reassemble();
        ensure(normal.ranks() == c.ranks(), || {
            format!("case {case}: ranks changed")
        })?;
        for (k, b) in s.certificate() {
            let n = c.rank(*k);
            ensure(mul(&b.basis, &b.inverse) == IntMatrix::identity(n), || {
                format!("case {case}: degree {k} basis")
            })?;
        }
        let Some((lo, hi)) = c.support() else {
            continue;
        };
        for k in lo..hi {
            let (Some(qk), Some(qk1)) = (s.certificate().get(&k), s.certificate().get(&(k + 1)))
            else {
                continue;
            };
            let conj = mul(&mul(&qk1.inverse, &c.differential(k)), &qk.basis);
            ensure(conj == *normal.differential(k), || {
                format!("case {case}: degree {k} conjugation")
            })?;
        }
        ensure(normal.homology().unwrap() == c.homology().unwrap(), || {
            format!("case {case}: homology")
        })?;
        summands += s.summands().len();
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("1000 complexes, {summands} elementary summands"))
}

fn universal_coefficients() -> Outcome {
    let shape = Shape {
        lo: -3,
        hi: 3,
        max_rank: 4,
        bound: 30,
        free_prob: 0.25,
        scramble: 12,
    };
    let mut r = rng(3);
    let mut torsion_hits = 0;
    for case in 0..500 {
        let c = random_complex(&mut r, shape);
        let h = c.homology().unwrap();
        for q in [2u64, 3, 5, 7] {
            let qb = BigInt::from(q);
            let field = field_homology(&c, q).map_err(|e| e.to_string())?;
            let divisible = |k: i64| h.torsion(k).iter().filter(|t| (*t % &qb).is_zero()).count();
            for k in -5..=5 {
                let expect = h.free_rank(k) + divisible(k) + divisible(k + 1);
                let got = field.get(&k).copied().unwrap_or(0);
                ensure(got == expect, || {
                    format!("case {case}, q={q}, degree {k}: {got} vs {expect}")
                })?;
                torsion_hits += divisible(k);
            }
        }
    }
    Ok(format!(
        "500 complexes x 4 primes, {torsion_hits} torsion contributions"
    ))
}

fn dichotomy() -> Outcome {
    let base = [2u64, 3, 5, 7, 0];
    let standard = HandlePresentation::standard("B^2n", 2);
    let mut checks = 0;
    for mask in 0..(1u32 << base.len()) {
        let elems: Vec<u64> = (0..base.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| base[i])
            .collect();
        let p = PrimeSet::new(elems.iter().copied()).unwrap();
        let spec = replace_handles(&standard, &p).induced_spec();
        let class = subdomain_classify(&spec).map_err(|e| e.to_string())?;
        for q in [2u64, 3, 5, 7, 11] {
            let trivial = !category_nontrivial_over(&class, q).map_err(|e| e.to_string())?;
            let expect = elems.contains(&q) || elems.contains(&0);
            // a disk with nonzero F_q-homology generates the fiber over F_q
            let oracle = spec.carved.iter().any(|d| {
                d.ranks().iter().any(|(&k, &n)| {
                    n > rank_over_fp(&d.differential(k), q)
                        + rank_over_fp(&d.differential(k - 1), q)
                })
            });
            ensure(trivial == expect && oracle == expect, || {
                format!("P={p} q={q}: classified trivial {trivial}, disk oracle {oracle}, expected {expect}")
            })?;
            checks += 1;
        }
    }
    Ok(format!("{checks} (P, q) pairs"))
}

fn classification_pipeline() -> Outcome {
    let shape = Shape {
        lo: -3,
        hi: 3,
        max_rank: 4,
        bound: 30,
        free_prob: 0.2,
        scramble: 12,
    };
    let mut r = rng(5);
    let mut tally: BTreeMap<&str, usize> = BTreeMap::new();
    for case in 0..500 {
        let torsion_only = r.gen_bool(0.5);
        let count = r.gen_range(1..=3);
        let disks: Vec<FreeComplex> = (0..count)
            .map(|_| {
                random_complex(
                    &mut r,
                    if torsion_only {
                        shape.torsion_only()
                    } else {
                        shape
                    },
                )
            })
            .collect();
        let mut free = false;
        let mut primes = BTreeSet::new();
        for c in &disks {
            let Some((lo, hi)) = c.support() else {
                continue;
            };
            for k in lo - 1..=hi {
                let d = c.differential(k);
                let (rank, minor) = rational_rank_and_minor(&d);
                let prev = rational_rank_and_minor(&c.differential(k - 1)).0;
                free |= c.rank(k) > rank + prev;
                // torsion primes divide every maximal nonzero minor
                for p in trial_factor(&minor) {
                    if rank_over_fp(&d, p) < rank {
                        primes.insert(p);
                    }
                }
            }
        }
        let expect = if free {
            CategoryClass::Trivial
        } else {
            CategoryClass::from_primes(PrimeSet::from_primes(primes).unwrap())
        };
        let got = classify_disks(&disks).map_err(|e| e.to_string())?;
        ensure(got == expect, || {
            format!("case {case}: {got:?} vs oracle {expect:?}")
        })?;
        for c in &disks {
            ensure(
                c.euler_characteristic() == 0 || got == CategoryClass::Trivial,
                || format!("case {case}: nonzero Euler characteristic but {got:?}"),
            )?;
        }
        *tally.entry(got.name()).or_default() += 1;
    }
    let summary: Vec<String> = tally.iter().map(|(k, v)| format!("{v} {k}")).collect();
    Ok(format!("500 collections: {}", summary.join(", ")))
}

fn embedding_lattice() -> Outcome {
    let base = [2u64, 3, 5, 0];
    let sets: Vec<BTreeSet<u64>> = (0..16u32)
        .map(|mask| {
            (0..4)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| base[i])
                .collect()
        })
        .collect();
    let ps: Vec<PrimeSet> = sets
        .iter()
        .map(|s| PrimeSet::new(s.iter().copied()).unwrap())
        .collect();
    let n = sets.len();
    for i in 0..n {
        ensure(embeddable(&ps[i], &ps[i]), || {
            format!("not reflexive at {}", ps[i])
        })?;
        for j in 0..n {
            let (p, q) = (&ps[i], &ps[j]);
            let expect = sets[j].is_subset(&sets[i]) || sets[i].contains(&0);
            let e = embeddable(p, q);
            ensure(e == expect, || format!("embeddable({p}, {q}) = {e}"))?;
            if e && embeddable(q, p) && !sets[i].contains(&0) && !sets[j].contains(&0) {
                ensure(i == j, || format!("antisymmetry fails for {p}, {q}"))?;
            }
            let w = embedding_witness(p, q);
            ensure(w.is_some() == !e, || {
                format!("witness presence for {p}, {q}")
            })?;
            if let Some(w) = w {
                let valid = is_prime(w)
                    && !sets[i].contains(&w)
                    && !sets[i].contains(&0)
                    && (sets[j].contains(&w) || sets[j].contains(&0));
                ensure(valid && is_valid_obstruction(p, q, w), || {
                    format!("bad witness {w} for {p}, {q}")
                })?;
            }
            for r in &ps {
                if e && embeddable(q, r) {
                    ensure(embeddable(p, r), || {
                        format!("transitivity fails at {p}, {q}, {r}")
                    })?;
                }
            }
        }
    }
    Ok(format!(
        "{n} sets, {} ordered pairs, {} triples",
        n * n,
        n * n * n
    ))
}

fn sphere_model() -> Outcome {
    let start = Instant::now();
    let shape = Shape {
        lo: -5,
        hi: 5,
        max_rank: 6,
        bound: 50,
        free_prob: 0.2,
        scramble: 30,
    };
    let mut r = rng(7);
    for n in [3u32, 6] {
        let ring = SphereRing::new(n).unwrap();
        let s = TwistedComplex::zero_section(ring);
        let cert = certified_window(&s).unwrap();
        let ni = n as i64;
        for window in [cert, (-3 * ni, 3 * ni)] {
            let w = hom_cohomology(&s, &s, window).map_err(|e| e.to_string())?;
            let degrees: Vec<(i64, usize, usize)> = w
                .homology
                .groups()
                .iter()
                .map(|(&k, g)| (k, g.free_rank, g.torsion.len()))
                .collect();
            ensure(degrees == vec![(0, 1, 0), (ni, 1, 0)], || {
                format!("n={n} window {window:?}: {degrees:?}")
            })?;
        }
        let verdict = x_action_test(&s, cert).map_err(|e| e.to_string())?;
        ensure(matches!(verdict, XAction::Fail { .. }), || {
            format!("n={n}: zero section passed")
        })?;
        for case in 0..500 {
            let c = random_complex(&mut r, shape);
            let t = TwistedComplex::from_zcomplex(&c, ring).map_err(|e| e.to_string())?;
            ensure(t.validate(), || {
                format!("n={n} case {case}: invalid object")
            })?;
            let window = certified_window(&t).unwrap_or((0, 0));
            let verdict = x_action_test(&t, window).map_err(|e| e.to_string())?;
            ensure(verdict == XAction::Pass, || {
                format!("n={n} case {case}: {verdict:?}")
            })?;
        }
    }
    within(start, Duration::from_secs(120))?;
    Ok("n = 3, 6: End(zero section) is Z in degrees 0 and n; zero section fails; 1000 integer objects pass".into())
}

fn moore_disks() -> Outcome {
    for m in 0..=30 {
        for d in -5..=5 {
            let disk = disk_complex_from_moore(m, d).map_err(|e| e.to_string())?;
            let e = elementary_complex::<BigInt>(m, d).unwrap();
            let q = quasi_iso(&disk, &e, &PrimeSet::empty()).map_err(|e| e.to_string())?;
            ensure(q, || format!("m={m} d={d}"))?;
        }
    }
    Ok("31 x 11 (m, d) pairs".into())
}

fn golden_files() -> Outcome {
    let outcomes = golden::run_all();
    let failed: Vec<String> = outcomes
        .iter()
        .filter_map(|o| {
            o.result
                .as_ref()
                .err()
                .map(|e| format!("{}: {}", o.name, e.lines().next().unwrap_or("")))
        })
        .collect();
    ensure(failed.is_empty(), || failed.join("; "))?;
    ensure(outcomes.len() >= 10, || {
        format!("only {} golden cases", outcomes.len())
    })?;
    let covered: BTreeSet<&str> = outcomes.iter().map(|o| o.subcommand.as_str()).collect();
    let all = [
        "chain",
        "classify",
        "decompose",
        "embeddable",
        "homology",
        "sphere-end",
        "sphere-geometric",
    ];
    let missing: Vec<&str> = all
        .iter()
        .copied()
        .filter(|s| !covered.contains(s))
        .collect();
    ensure(missing.is_empty(), || {
        format!("no golden case for {missing:?}")
    })?;
    Ok(format!(
        "{} cases byte-exact, all 7 subcommands covered",
        outcomes.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("SNF certificates", snf_certificates),
        ("decomposition round trip", decomposition_round_trip),
        ("universal coefficients", universal_coefficients),
        ("field dichotomy of decorated handles", dichotomy),
        ("disk classification pipeline", classification_pipeline),
        ("embedding lattice", embedding_lattice),
        ("loop-space sphere model", sphere_model),
        ("Moore disks", moore_disks),
        ("CLI golden files", golden_files),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail} ({secs:.2} s)", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL criterion {}: {name}: {why} ({secs:.2} s)", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
