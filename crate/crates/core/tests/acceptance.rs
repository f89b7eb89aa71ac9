//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.
//!
//! Every check recomputes its target with arithmetic written out here rather
//! than trusting the library's own verdicts.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use covtrans::cli::{execute, family_groups, rerun, RunConfig, FAMILIES};
use covtrans::covering::{
    construct_intersecting_family, construct_k_covering, exact_cov, greedy_shrink_intersection, verify_k_covering,
    ConstructOptions, Verification, VerifyMode,
};
use covtrans::tower::{build_tower, sample_thin_set, translate_thin, Tower, TowerSpec};
use covtrans::{FiniteGroup, GroupSubset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn timed(limit: Duration, start: Instant) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.2?}, limit {limit:?}"))?;
    Ok(t)
}

/// Cyclic difference set `{a - b mod n : a ∈ A, b ∈ B}` as a bitmap.
fn differences(n: u64, a: &[u64], b: &[u64]) -> Vec<bool> {
    let mut hit = vec![false; n as usize];
    for &x in a {
        for &y in b {
            hit[((x + n - y) % n) as usize] = true;
        }
    }
    hit
}

fn ln(x: f64) -> f64 {
    x.ln()
}

fn criterion_1() -> Check {
    let mut notes = Vec::new();
    for n in [256u64, 512, 1024] {
        let start = Instant::now();
        let g = FiniteGroup::cyclic(n).unwrap();
        let f = construct_intersecting_family(&g, 2, 11, &ConstructOptions::default()).map_err(|e| e.to_string())?;
        let t = start.elapsed();
        let p = ((2.0 * ln(n as f64) + ln(2.0)) / n as f64).sqrt();
        let cap = 2.0 * p * n as f64;
        ensure(f.attempts_used <= 100, || format!("n={n}: {} attempts", f.attempts_used))?;
        for x in &f.subsets {
            ensure(x.len() as f64 <= cap, || format!("n={n}: member of size {} > 2pn = {cap:.4}", x.len()))?;
        }
        ensure(f.verdict.holds && f.verdict.verification == Verification::Exhaustive, || {
            format!("n={n}: verdict {:?}", f.verdict)
        })?;
        // X_1 g_1 ∩ X_2 g_2 ≠ ∅ for all g_1, g_2 iff X_1 - X_2 covers Z_n
        let d = differences(n, &f.subsets[0].to_vec(), &f.subsets[1].to_vec());
        ensure(d.iter().all(|&b| b), || format!("n={n}: oracle finds an empty intersection"))?;
        ensure(t < Duration::from_secs(10), || format!("n={n}: took {t:.2?}"))?;
        notes.push(format!("n={n}: sizes {:?} cap {cap:.1} attempts {} in {t:.2?}", f.sizes(), f.attempts_used));
    }
    Ok(notes.join("; "))
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let mut notes = Vec::new();
    for n in [1024u64, 2048] {
        let lhs = 8.0_f64.powi(2) * (2.0 * ln(n as f64) + ln(2.0));
        ensure(lhs < n as f64, || format!("precondition fails at n={n}: {lhs}"))?;
        let g = FiniteGroup::cyclic(n).unwrap();
        let c = construct_k_covering(&g, 2, 5, &ConstructOptions::default()).map_err(|e| e.to_string())?;
        let x = c.set.to_vec();
        ensure(2 * x.len() as u64 <= n, || format!("n={n}: |X| = {} > n/2", x.len()))?;
        ensure(c.verdict.holds && c.verdict.verification == Verification::Exhaustive, || {
            format!("n={n}: verdict {:?}", c.verdict)
        })?;
        let d = differences(n, &x, &x);
        ensure(d.iter().all(|&b| b), || format!("n={n}: X - X misses an element"))?;
        notes.push(format!("n={n}: |X|={} (lhs {lhs:.2})", x.len()));
    }
    let t = timed(Duration::from_secs(5), start)?;
    Ok(format!("{} in {t:.2?}", notes.join("; ")))
}

/// Smallest `|X|` with `X - X = Z_n`, by brute force over bitmasks.
fn cyclic_two_cover(n: u64) -> usize {
    let full = (1u32 << n) - 1;
    (1u32..=full)
        .filter(|m| {
            let xs: Vec<u64> = (0..n).filter(|i| m >> i & 1 == 1).collect();
            differences(n, &xs, &xs).iter().all(|&b| b)
        })
        .map(|m| m.count_ones() as usize)
        .min()
        .unwrap()
}

fn criterion_3() -> Check {
    let start = Instant::now();
    let mut checked = 0;
    for family in FAMILIES {
        for n in 1..=16u64 {
            for g in family_groups(family, n).unwrap() {
                for k in 1..=2u32 {
                    if k as u64 > n {
                        continue;
                    }
                    let c = exact_cov(&g, k).map_err(|e| format!("{g}: {e}"))? as u64;
                    // n^(1-1/k) <= c  ⇔  c^k >= n^(k-1)
                    ensure(c.pow(k) >= n.pow(k - 1) && c <= n, || format!("{g}, k={k}: exact {c} out of bounds"))?;
                    checked += 1;
                }
            }
        }
    }
    for n in 2..=16u64 {
        let g = FiniteGroup::cyclic(n).unwrap();
        let ours = exact_cov(&g, 2).unwrap();
        let oracle = cyclic_two_cover(n);
        ensure(ours == oracle, || format!("C{n}: exact_cov {ours}, brute force {oracle}"))?;
    }
    let c4 = exact_cov(&FiniteGroup::cyclic(4).unwrap(), 2).unwrap();
    let c7 = exact_cov(&FiniteGroup::cyclic(7).unwrap(), 2).unwrap();
    ensure(c4 == 3 && c7 == 3, || format!("spot values C4 {c4}, C7 {c7}"))?;
    let t = timed(Duration::from_secs(60), start)?;
    Ok(format!("{checked} (group, k) pairs; exact_cov(C4,2)={c4}, exact_cov(C7,2)={c7} in {t:.2?}"))
}

fn criterion_4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut tallies = Vec::new();
    for n in [8u64, 16, 64, 256] {
        let g = FiniteGroup::cyclic(n).unwrap();
        let (mut yes, mut no) = (0, 0);
        for _ in 0..200 {
            let size = rng.gen_range(1..=n as usize);
            let xs: Vec<u64> = rand::seq::index::sample(&mut rng, n as usize, size)
                .into_iter()
                .map(|i| i as u64)
                .collect();
            let x = GroupSubset::from_elements(&g, xs.iter().copied()).unwrap();
            let ours = verify_k_covering(&x, 2, VerifyMode::Exhaustive).map_err(|e| e.to_string())?.holds;
            let oracle = differences(n, &xs, &xs).iter().all(|&b| b);
            ensure(ours == oracle, || format!("C{n}: disagreement on {xs:?}"))?;
            if oracle {
                yes += 1
            } else {
                no += 1
            }
        }
        tallies.push(format!("C{n} {yes}/{no}"));
    }
    Ok(format!("0 disagreements (covering/non-covering: {})", tallies.join(", ")))
}

fn criterion_5() -> Check {
    let n = 100u64;
    let g = FiniteGroup::cyclic(n).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for case in 0..100 {
        let xs: Vec<u64> = rand::seq::index::sample(&mut rng, 100, 9)
            .into_iter()
            .map(|i| i as u64)
            .collect();
        let x = GroupSubset::from_elements(&g, xs.iter().copied()).unwrap();
        let r = greedy_shrink_intersection(&x, 2).map_err(|e| e.to_string())?;
        ensure(r.final_size() == 0, || format!("case {case}: final size {}", r.final_size()))?;
        for w in r.sizes.windows(2) {
            ensure(w[1] <= w[0] * 9 / 100, || format!("case {case}: step {} -> {}", w[0], w[1]))?;
        }
        // recount X g_1 ∩ X g_2 directly
        let shifted = |h: u64| xs.iter().map(|&a| (a + h) % n).collect::<BTreeSet<_>>();
        let (a, b) = (shifted(r.tuple[0]), shifted(r.tuple[1]));
        ensure(a.intersection(&b).count() == 0, || format!("case {case}: tuple {:?} intersects", r.tuple))?;
    }
    Ok("100/100 runs end empty; stepwise bound floor(|A|*9/100) held".into())
}

fn two_stage() -> Tower {
    let spec = TowerSpec::new(&[20, 1024]).unwrap();
    build_tower(&spec, 3, &ConstructOptions::default()).unwrap()
}

/// `X_i` rebuilt from the cover lists alone: `x ∈ X_i` iff `x mod |G_{i-1}| ∈ X_{i-1}`
/// and `x div |G_{i-1}| ∈ L_i`.
fn oracle_member(t: &Tower, i: usize, x: u64) -> bool {
    if i == 0 {
        return x == 0;
    }
    let below = t.spec().group(i - 1).order();
    t.stage(i).cover_elements.binary_search(&(x / below)).is_ok() && oracle_member(t, i - 1, x % below)
}

fn criterion_6() -> Check {
    let start = Instant::now();
    let t = two_stage();
    let (s1, s2) = (t.stage(1).size, t.stage(2).size);
    ensure(s1 <= 10 && s2 <= 5120, || format!("|X_1| = {s1}, |X_2| = {s2}"))?;
    ensure(2 * s1 <= 20 && 4 * s2 <= 20480, || "measure bound".into())?;
    let dense: Vec<u64> = (0..20480).filter(|&x| oracle_member(&t, 2, x)).collect();
    ensure(dense.len() as u128 == s2, || format!("recounted |X_2| = {}", dense.len()))?;

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut nest_checked = 0;
    for j in 0..1000 {
        let y = sample_thin_set(t.spec(), 2, &mut rng, 1.0).map_err(|e| e.to_string())?;
        let level1: BTreeSet<u64> = y.elements().iter().map(|&v| v % 20).collect();
        ensure(level1.len() <= 1 && y.elements().len() <= 2, || format!("sample {j} is not thin"))?;
        let tr = translate_thin(&t, &y).map_err(|e| format!("sample {j}: {e}"))?;
        let g = tr.translator;
        ensure(tr.verified, || format!("sample {j}: not verified"))?;
        ensure(y.elements().iter().all(|&v| oracle_member(&t, 2, (g + v) % 20480)), || {
            format!("sample {j}: g = {g} fails the oracle")
        })?;
        let nest = tr.nesting.as_ref().ok_or("no nesting report")?;
        ensure(nest.nested && nest.fibre_unions && nest.translator_in_every_t, || {
            format!("sample {j}: nesting report {:?}", (nest.nested, nest.fibre_unions))
        })?;
        if j < 50 {
            // T_i recomputed: g ∈ T_i iff (g + y) mod |G_i| ∈ X_i for all y ∈ Y
            let t_set = |i: usize| -> Vec<bool> {
                let m = t.spec().group(i).order();
                (0..20480u64)
                    .map(|h| y.elements().iter().all(|&v| oracle_member(&t, i, (h + v) % m)))
                    .collect()
            };
            let (t0, t1, t2) = (t_set(0), t_set(1), t_set(2));
            ensure(t0.iter().all(|&b| b), || "T_0 is not everything".into())?;
            for h in 0..20480usize {
                ensure(!t2[h] || t1[h], || format!("sample {j}: T_2 not inside T_1 at {h}"))?;
                ensure(t1[h] == t1[h % 20], || format!("sample {j}: T_1 not a union of fibres at {h}"))?;
            }
            for (i, ts) in [&t0, &t1, &t2].into_iter().enumerate() {
                let count = ts.iter().filter(|&&b| b).count();
                ensure(nest.t_sets[i].len() == count, || format!("sample {j}: |T_{i}| {count} vs report"))?;
            }
            nest_checked += 1;
        }
    }
    let t_el = timed(Duration::from_secs(30), start)?;
    Ok(format!(
        "|X_1|={s1}, |X_2|={s2}, measures {s1}/20 and {s2}/20480; 1000/1000 translated; T sets recomputed for {nest_checked} in {t_el:.2?}"
    ))
}

fn criterion_7() -> Check {
    let start = Instant::now();
    let lhs = 12.0_f64.powi(3) * (3.0 * ln(131072.0) + ln(2.0));
    ensure(lhs < 131072.0, || format!("stage 3 admissibility {lhs}"))?;
    let spec = TowerSpec::new(&[20, 1024, 131072]).unwrap();
    let t = build_tower(&spec, 7, &ConstructOptions::default()).map_err(|e| e.to_string())?;
    let l3 = t.stage(3).cover_elements.len() as u128;
    let x2 = t.stage(2).size;
    let order: u128 = 20 * 1024 * 131072;
    ensure(t.stage(3).size == l3 * x2, || "size is not |L_3||X_2|".into())?;
    ensure(8 * t.stage(3).size <= order, || format!("|X_3| = {} > |G_3|/8", t.stage(3).size))?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for j in 0..100 {
        let y = sample_thin_set(t.spec(), 3, &mut rng, 1.0).map_err(|e| e.to_string())?;
        let tr = translate_thin(&t, &y).map_err(|e| format!("sample {j}: {e}"))?;
        let m = order as u64;
        ensure(tr.verified, || format!("sample {j}: not verified"))?;
        ensure(y.elements().iter().all(|&v| oracle_member(&t, 3, (tr.translator + v) % m)), || {
            format!("sample {j}: translator fails the oracle")
        })?;
    }
    let t_el = timed(Duration::from_secs(120), start)?;
    Ok(format!(
        "lhs {lhs:.0} < 131072; |X_3| = {l3}*{x2} = {} <= {}; 100/100 translated in {t_el:.2?}",
        t.stage(3).size,
        order / 8
    ))
}

fn criterion_8() -> Check {
    let t = two_stage();
    let dense = t.stage(2).dense.as_ref().ok_or("no dense X_2")?;
    let mut mismatches = 0;
    for x in 0..20480u64 {
        let a = dense.contains(x);
        if a != t.membership(2, x) || a != oracle_member(&t, 2, x) {
            mismatches += 1;
        }
    }
    ensure(mismatches == 0, || format!("{mismatches} mismatches"))?;
    Ok(format!("20480 elements, |X_2| = {}, 0 mismatches", dense.len()))
}

fn criterion_9() -> Check {
    let configs = vec![
        RunConfig::CoveringConstruct {
            group: "C1024".into(),
            k: 2,
            l: None,
            family: false,
            seed: 7,
            max_attempts: 100,
            mode: None,
            out: None,
            format: "json".into(),
        },
        RunConfig::CoveringConstruct {
            group: "D128".into(),
            k: 2,
            l: Some(200),
            family: true,
            seed: 1,
            max_attempts: 100,
            mode: Some("sampled:5000".into()),
            out: None,
            format: "json".into(),
        },
        RunConfig::TowerBuild {
            spec: "tower:20,1024,131072".into(),
            seed: 3,
            max_attempts: 100,
            mode: None,
            out: None,
            format: "json".into(),
        },
        RunConfig::TowerTranslate {
            spec: Some("tower:20,1024".into()),
            tower: None,
            seed: 2,
            samples: 50,
            depth: None,
            fullness: 0.5,
            set: None,
            max_attempts: 100,
            mode: None,
            out: None,
            format: "json".into(),
        },
        RunConfig::CovTable {
            families: vec!["cyclic".into(), "dihedral".into()],
            n: vec![7, 8, 1024],
            k: vec![1, 2],
            seed: 9,
            max_attempts: 100,
            out: None,
            format: "json".into(),
        },
    ];
    for cfg in &configs {
        let first = execute(cfg).map_err(|e| e.to_string())?;
        let text = String::from_utf8(first.bytes.clone()).unwrap();
        let (back, second) = rerun(&text).map_err(|e| e.to_string())?;
        ensure(&back == cfg, || "embedded run configuration differs".into())?;
        ensure(first.bytes == second.bytes, || format!("{cfg:?} regenerated differently"))?;
    }
    let tower_doc = execute(&configs[2]).unwrap().bytes;
    let doc: covtrans::tower::TowerDocument = serde_json::from_slice(&tower_doc).unwrap();
    let reloaded = Tower::from_document(&doc).map_err(|e| e.to_string())?.to_document();
    ensure(reloaded == doc, || "tower document does not reload to itself".into())?;
    Ok(format!("{} documents regenerated byte-identically", configs.len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("random intersecting families in C256, C512, C1024", criterion_1),
        ("2-covering sets of size <= n/2 in C1024 and C2048", criterion_2),
        ("exact covering numbers within their bounds, order <= 16", criterion_3),
        ("k = 2 check agrees with the difference-set predicate", criterion_4),
        ("greedy translate intersection in C100", criterion_5),
        ("depth-2 tower (20, 1024)", criterion_6),
        ("depth-3 factored tower (20, 1024, 131072)", criterion_7),
        ("dense and factored membership agree on X_2", criterion_8),
        ("documents regenerate byte-identically", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
