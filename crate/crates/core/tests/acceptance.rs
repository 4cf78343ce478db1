//! Acceptance suite: one PASS/FAIL line per criterion, exit status nonzero
//! if any fails. Runs without the libtest harness so the lines always show.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use markov_core::approximation::{
    c_companion, c_constant_bruteforce, c_markov, classify, BestApproximation, Classification,
};
use markov_core::companions::{
    gamma, gamma_extended, interval, locate_interval, t_matrix, u_seq, CompanionRef, Side,
};
use markov_core::eisenstein::{bent_path, label_path, segment_path};
use markov_core::forest::{
    audit_uniqueness, centered_triple_of, enumerate_forest, markov_numbers_up_to, mu, ForestLimit,
    Turn,
};
use markov_core::identities::{
    mcshane_exact_terms, mcshane_partial_sum, overlapping_intervals, quadratic_residue_witness,
};
use markov_core::{QuadraticSurd, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

type Outcome = std::result::Result<String, String>;

/// Name, check, runtime budget in seconds.
type Criterion = (&'static str, fn() -> Outcome, u64);

fn r(s: &str) -> Rational {
    s.parse().unwrap()
}

fn rs(v: &[&str]) -> Vec<Rational> {
    v.iter().map(|s| r(s)).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn coprime(a: i64, b: i64) -> bool {
    a.gcd(&b) == 1
}

// --- 1 ---------------------------------------------------------------------

/// Rows: base, right companions from k = 2, and the limit `(a - sqrt(d))/c`.
type TableRow = (&'static str, &'static [&'static str], (i64, i64, i64));

const COMPANION_TABLE: &[TableRow] = &[
    (
        "0/1",
        &[
            "1/3", "3/8", "8/21", "21/55", "55/144", "144/377", "377/987", "987/2584",
        ],
        (3, 5, 2),
    ),
    (
        "1/2",
        &[
            "7/12",
            "41/70",
            "239/408",
            "1393/2378",
            "8119/13860",
            "47321/80782",
        ],
        (4, 8, 2),
    ),
    (
        "2/5",
        &[
            "31/75",
            "463/1120",
            "6914/16725",
            "103247/249755",
            "1541791/3729600",
        ],
        (19, 221, 10),
    ),
    (
        "5/13",
        &[
            "196/507",
            "7639/19760",
            "297725/770133",
            "11603636/30015427",
        ],
        (49, 1517, 26),
    ),
    (
        "12/29",
        &[
            "1045/2523",
            "90903/219472",
            "7907516/19091541",
            "687862989/1660744595",
        ],
        (111, 7565, 58),
    ),
    (
        "13/34",
        &[
            "1327/3468",
            "135341/353702",
            "13803455/36074136",
            "1407817069/3679208170",
        ],
        (32, 650, 17),
    ),
    (
        "34/89",
        &["9079/23763", "2424059/6344632", "647214674/1693992981"],
        (335, 71285, 178),
    ),
    (
        "70/169",
        &["35491/85683", "17993867/43441112", "9122855078/22024558101"],
        (647, 257045, 338),
    ),
    (
        "75/194",
        &[
            "43651/112908",
            "25404807/65712262",
            "14785554023/38244423576",
        ],
        (183, 21170, 97),
    ),
    (
        "89/233",
        &[
            "62212/162867",
            "43486099/113843800",
            "30396720989/79576653333",
        ],
        (877, 488597, 466),
    ),
    (
        "179/433",
        &[
            "232522/562467",
            "302045899/730644200",
            "392357390279/949106253333",
        ],
        (1657, 1687397, 866),
    ),
    (
        "233/610",
        &[
            "426391/1116300",
            "780295297/2042828390",
            "1427939967119/3738374837400",
        ],
        (574, 209306, 305),
    ),
    (
        "408/985",
        &[
            "1205641/2910675",
            "3562668747/8601043640",
            "10527684941744/25416081045525",
        ],
        (3771, 8732021, 1970),
    ),
];

fn companion_table() -> Outcome {
    let mut checked = 0;
    for (base, row, (a, d, c)) in COMPANION_TABLE {
        let x = r(base);
        for (i, want) in row.iter().enumerate() {
            let k = i as i64 + 2;
            let got = gamma(&x, Side::Right, k).map_err(|e| format!("{base} k={k}: {e}"))?;
            ensure(got == r(want), || {
                format!("{base} k={k}: got {got}, table {want}")
            })?;
            checked += 1;
        }
        let limit = QuadraticSurd::new(*a, -1, *c, *d).map_err(|e| e.to_string())?;
        let iv = interval(&x).map_err(|e| e.to_string())?;
        ensure(iv.hi == limit, || {
            format!("{base}: limit {} vs table {limit}", iv.hi)
        })?;
        let (_, attracting) = t_matrix(&x).map_err(|e| e.to_string())?.fixed_points();
        ensure(attracting == limit, || {
            format!("{base}: attracting fixed point {attracting}")
        })?;
    }
    // the table lists exactly the Markov fractions of [0, 1/2] with q < 1000
    let listed: BTreeSet<Rational> = COMPANION_TABLE.iter().map(|(b, _, _)| r(b)).collect();
    let forest: BTreeSet<Rational> = std::iter::once(Rational::zero())
        .chain(
            enumerate_forest(0, ForestLimit::MaxDenominator(BigInt::from(999)))
                .map(|n| n.triple.x2().clone())
                .filter(|x| *x <= r("1/2")),
        )
        .collect();
    ensure(listed == forest, || {
        format!("row bases differ from forest: {forest:?}")
    })?;
    Ok(format!("{checked} companions, 13 limits"))
}

// --- 2 ---------------------------------------------------------------------

const FOREST_SAMPLE: &[(&str, &str)] = &[
    ("1/2", "0.5"),
    ("2378/5741", "0.4142135516"),
    ("408/985", "0.4142131979"),
    ("206855/499393", "0.4142128544"),
    ("70/169", "0.4142011834"),
    ("3087111/7453378", "0.4141895124"),
    ("6089/14701", "0.4141895109"),
    ("529673/1278818", "0.4141895093"),
    ("12/29", "0.4137931034"),
    ("1354498/3276509", "0.4133966975"),
    ("15571/37666", "0.4133966972"),
    ("20226717/48928105", "0.4133966970"),
    ("179/433", "0.4133949191"),
    ("3472225/8399329", "0.4133931412"),
    ("2673/6466", "0.4133931333"),
    ("39916/96557", "0.4133931253"),
    ("2/5", "0.4"),
    ("16725/43261", "0.3866068745"),
    ("1120/2897", "0.3866068346"),
    ("651838/1686049", "0.3866067949"),
    ("75/194", "0.3865979381"),
    ("1701181/4400489", "0.3865890813"),
    ("2923/7561", "0.3865890755"),
    ("113922/294685", "0.3865890696"),
    ("5/13", "0.3846153846"),
    ("19760/51641", "0.3826416994"),
    ("507/1325", "0.3826415094"),
    ("51709/135137", "0.3826413195"),
    ("13/34", "0.3823529411"),
    ("3468/9077", "0.3820645587"),
    ("34/89", "0.3820224719"),
    ("89/233", "0.3819742489"),
    ("0/1", "0.0"),
];

fn forest_sample() -> Outcome {
    // the root edge plus the left subtree, five levels deep
    let mut got: Vec<Rational> = enumerate_forest(0, ForestLimit::MaxDepth(5))
        .filter(|n| n.path.turns.first() != Some(&Turn::Right))
        .map(|n| n.triple.x2().clone())
        .collect();
    got.push(Rational::zero());
    got.sort_by(|a, b| b.cmp(a));
    let want: Vec<Rational> = FOREST_SAMPLE.iter().map(|(f, _)| r(f)).collect();
    ensure(got == want, || format!("fractions differ: {got:?}"))?;
    for (f, dec) in FOREST_SAMPLE {
        let shown = r(f).to_decimal(10);
        ensure(shown == *dec, || {
            format!("{f}: preview {shown}, expected {dec}")
        })?;
    }
    Ok(format!("{} fractions and previews", want.len()))
}

// --- 3 ---------------------------------------------------------------------

fn mu_table() -> Outcome {
    let table = [
        ("1/3", "5/13"),
        ("1/2", "2/5"),
        ("2/3", "12/29"),
        ("1/1", "1/2"),
        ("3/2", "17/29"),
        ("2/1", "3/5"),
        ("3/1", "8/13"),
        ("0/1", "0/1"),
        ("inf", "1/1"),
    ];
    for (label, want) in table {
        let got = mu(&r(label)).map_err(|e| e.to_string())?;
        ensure(got == r(want), || {
            format!("mu({label}) = {got}, want {want}")
        })?;
    }
    let mut pairs = 0;
    for s in 1..=30i64 {
        for n in 0..=s {
            let m = s - n;
            if !coprime(n, m) {
                continue;
            }
            let a = mu(&Rational::new(n, m).unwrap()).map_err(|e| e.to_string())?;
            let b = mu(&Rational::new(m, n).unwrap()).map_err(|e| e.to_string())?;
            ensure(&a + &b == Rational::one(), || {
                format!("mu({n}/{m}) + mu({m}/{n}) = {}", &a + &b)
            })?;
            pairs += 1;
        }
    }
    Ok(format!("9 table values, {pairs} symmetric pairs"))
}

// --- 4 ---------------------------------------------------------------------

fn constants() -> Outcome {
    let g2 = |s| gamma(&r("1/2"), s, 2).unwrap().to_string();
    let (gm, gp) = (g2(Side::Left), g2(Side::Right));
    let mut cases: Vec<(Rational, Rational, Vec<Rational>)> = vec![
        (r("2/5"), r("2/5"), rs(&["0/1", "1/2"])),
        (r("12/29"), r("10/29"), rs(&["2/5", "1/2"])),
        (r("5/12"), r("1/3"), rs(&["1/2"])),
        (r("7/12"), r("1/3"), rs(&["1/2"])),
        (r("29/70"), r("12/35"), rs(&[&gm, "1/2"])),
        (r("41/70"), r("12/35"), rs(&["1/2", &gp])),
    ];
    for n in -3..=3i64 {
        let x = Rational::from(n);
        cases.push((
            x,
            Rational::one(),
            vec![Rational::from(n - 1), Rational::from(n + 1)],
        ));
        let h = Rational::new(2 * n + 1, 2).unwrap();
        cases.push((h, r("1/2"), vec![Rational::from(n), Rational::from(n + 1)]));
    }
    for (x, c, argmins) in &cases {
        let want = BestApproximation {
            constant: c.clone(),
            argmins: argmins.clone(),
        };
        let oracle = c_constant_bruteforce(x).map_err(|e| e.to_string())?;
        ensure(oracle == want, || format!("oracle at {x}: {oracle:?}"))?;
        let theory = classify(x).map_err(|e| e.to_string())?.best_approximation();
        ensure(theory == want, || format!("formula at {x}: {theory:?}"))?;
    }
    // the closed forms directly
    let t = centered_triple_of(&r("12/29")).unwrap();
    ensure(c_markov(&t) == Ok(r("10/29")), || "c_markov(12/29)".into())?;
    let c = CompanionRef::new(r("1/2"), Side::Right, 3).unwrap();
    ensure(c_companion(&c) == r("12/35"), || {
        "c_companion(41/70)".into()
    })?;
    Ok(format!("{} points, formulas and oracle agree", cases.len()))
}

// --- 5 ---------------------------------------------------------------------

fn classification_sweep() -> Outcome {
    let third = r("1/3");
    let mut count = 0usize;
    let mut tally: BTreeMap<&'static str, usize> = BTreeMap::new();
    for q in 1..=200i64 {
        for p in 0..=q {
            if !coprime(p, q) {
                continue;
            }
            let y = Rational::new(p, q).unwrap();
            count += 1;
            let class = classify(&y).map_err(|e| format!("{y}: {e}"))?;
            *tally.entry(class.tag()).or_default() += 1;
            let oracle = c_constant_bruteforce(&y).map_err(|e| e.to_string())?;
            let bad = oracle.constant >= third;
            ensure(bad == !matches!(class, Classification::Neither(_)), || {
                format!("{y}: {} but oracle C = {}", class.tag(), oracle.constant)
            })?;
            let predicted = class.best_approximation();
            ensure(predicted.constant == oracle.constant, || {
                format!(
                    "{y}: predicted C = {}, oracle {}",
                    predicted.constant, oracle.constant
                )
            })?;
        }
    }
    Ok(format!("{count} rationals, {tally:?}"))
}

// --- 6 ---------------------------------------------------------------------

fn triangle_paths() -> Outcome {
    let mut straight = 0;
    for m in 0..=12i64 {
        for n in 0..=m {
            if !coprime(n, m) {
                continue;
            }
            let want = mu(&Rational::new(n, m).unwrap()).map_err(|e| e.to_string())?;
            let path = segment_path(m, n).map_err(|e| e.to_string())?;
            let got = label_path(&path)
                .map_err(|e| e.to_string())?
                .terminal()
                .clone();
            ensure(got == want, || {
                format!("segment ({m},{n}): {got} vs {want}")
            })?;
            straight += 1;
        }
    }
    let mut bent = 0;
    let mut seen = BTreeSet::new();
    for m in 0..=5i64 {
        for n in 0..=m {
            if !coprime(n, m) {
                continue;
            }
            let base = mu(&Rational::new(n, m).unwrap()).map_err(|e| e.to_string())?;
            for k in 2..=5 {
                for side in [Side::Left, Side::Right] {
                    let want = gamma(&base, side, k).map_err(|e| e.to_string())?;
                    let path = bent_path(m, n, k, side).map_err(|e| e.to_string())?;
                    let got =
                        label_path(&path).map_err(|e| format!("({m},{n}) k={k} {side}: {e}"))?;
                    let got = got.terminal().clone();
                    ensure(got == want, || {
                        format!("bent ({m},{n}) k={k} {side}: {got} vs {want}")
                    })?;
                    seen.insert(got);
                    bent += 1;
                }
            }
        }
    }
    for f in ["31/75", "463/1120", "29/75", "433/1120"] {
        ensure(seen.contains(&r(f)), || format!("{f} not produced"))?;
    }
    Ok(format!("{straight} segments, {bent} bent paths"))
}

// --- 7 ---------------------------------------------------------------------

fn identity_suites() -> Outcome {
    let small = markov_numbers_up_to(&BigInt::from(999));
    let mut checks = 0usize;
    for q in &small {
        let three_q = BigInt::from(3) * q;
        for k in 0..50i64 {
            let (a, b) = (u_seq(q, k + 1).unwrap(), u_seq(q, k).unwrap());
            ensure(
                &a * &a - &three_q * &a * &b + &b * &b == BigInt::one(),
                || format!("conservation q={q} k={k}"),
            )?;
            checks += 1;
        }
    }
    let fractions: Vec<Rational> = std::iter::once(Rational::zero())
        .chain(
            enumerate_forest(0, ForestLimit::MaxDenominator(BigInt::from(999)))
                .map(|n| n.triple.x2().clone()),
        )
        .collect();
    let three = Rational::from(3);
    for x in &fractions {
        let (p, q) = (x.numer(), x.denom());
        for k in 1..=50i64 {
            let (u, v) = (u_seq(q, k).unwrap(), u_seq(q, k - 1).unwrap());
            for num in [p * &u + &v, p * &u - &v] {
                ensure(num.gcd(&(q * &u)).is_one(), || {
                    format!("coprimality at {x} k={k}")
                })?;
            }
            let plus = gamma_extended(x, Side::Right, k).unwrap();
            let minus = gamma_extended(x, Side::Left, k).unwrap();
            ensure(&plus + &minus == &Rational::from(2) * x, || {
                format!("symmetry at {x} k={k}")
            })?;
            let neg = gamma_extended(x, Side::Right, -k).unwrap();
            let shifted = gamma_extended(&(x + &three), Side::Left, k).unwrap();
            ensure(neg == shifted, || format!("index symmetry at {x} k={k}"))?;
            checks += 4;
        }
    }
    // every Markov number up to a million has a root of -1
    let bound = BigInt::from(1_000_000);
    let mut residues = BTreeSet::new();
    for node in enumerate_forest(0, ForestLimit::MaxDenominator(bound.clone())) {
        quadratic_residue_witness(&node.triple).map_err(|e| e.to_string())?;
        residues.insert(node.triple.q2().clone());
    }
    residues.insert(BigInt::one());
    let all: BTreeSet<BigInt> = markov_numbers_up_to(&bound).into_iter().collect();
    ensure(residues == all, || {
        "forest denominators differ from Markov numbers".into()
    })?;
    // Fibonacci and Pell numbers by their own recursions
    let (mut f0, mut f1) = (BigInt::zero(), BigInt::one());
    let mut fib = vec![f0.clone()];
    let (mut p0, mut p1) = (BigInt::zero(), BigInt::one());
    let mut pell = vec![p0.clone()];
    for _ in 0..80 {
        fib.push(f1.clone());
        pell.push(p1.clone());
        (f0, f1) = (f1.clone(), &f0 + &f1);
        (p0, p1) = (p1.clone(), &p0 + BigInt::from(2) * &p1);
    }
    for k in 0..=40usize {
        let ki = k as i64;
        ensure(u_seq(&BigInt::one(), ki).unwrap() == fib[2 * k], || {
            format!("Fibonacci k={k}")
        })?;
        ensure(
            BigInt::from(2) * u_seq(&BigInt::from(2), ki).unwrap() == pell[2 * k],
            || format!("Pell k={k}"),
        )?;
    }
    Ok(format!(
        "{checks} sequence checks, {} residues, Fibonacci/Pell to 40",
        all.len()
    ))
}

// --- 8 ---------------------------------------------------------------------

/// Lower bound reached at depth 12 with 64-bit brackets on the first run
/// (2.9999999999822892...), truncated to eleven decimals.
const DEPTH12_THRESHOLD: &str = "299999999998/100000000000";

fn mcshane() -> Outcome {
    let three = Rational::from(3);
    let mut prev: Option<(Rational, Rational)> = None;
    let mut last = None;
    for depth in 0..=12 {
        let s = mcshane_partial_sum(depth, 64).map_err(|e| e.to_string())?;
        ensure(s.lo <= three && s.hi <= &three + &s.width(), || {
            format!("depth {depth} exceeds 3")
        })?;
        if let Some((lo, hi)) = &prev {
            ensure(s.lo >= *lo && s.hi >= *hi, || {
                format!("depth {depth} not monotone")
            })?;
        }
        prev = Some((s.lo.clone(), s.hi.clone()));
        last = Some(s);
    }
    // depth 0 in closed form, grouped by radicand
    let mut by_radicand: BTreeMap<BigInt, QuadraticSurd> = BTreeMap::new();
    for t in mcshane_exact_terms(0).map_err(|e| e.to_string())? {
        let acc = by_radicand
            .entry(t.d().clone())
            .or_insert(QuadraticSurd::from_rational(&Rational::zero()).unwrap());
        *acc = acc.try_add(&t).map_err(|e| e.to_string())?;
    }
    let want5 = QuadraticSurd::new(9, -3, 1, 5).unwrap();
    let want2 = QuadraticSurd::new(9, -6, 1, 2).unwrap();
    ensure(by_radicand.len() == 2, || {
        format!("radicands {:?}", by_radicand.keys())
    })?;
    ensure(by_radicand[&BigInt::from(5)] == want5, || {
        "sqrt 5 part".into()
    })?;
    ensure(by_radicand[&BigInt::from(2)] == want2, || {
        "sqrt 2 part".into()
    })?;
    let d0 = mcshane_partial_sum(0, 64).unwrap();
    let (lo5, hi5) = want5.bracket(128);
    let (lo2, hi2) = want2.bracket(128);
    ensure(d0.lo <= &hi5 + &hi2 && &lo5 + &lo2 <= d0.hi, || {
        "depth 0 enclosure misses closed form".into()
    })?;
    let s = last.unwrap();
    let threshold = r(DEPTH12_THRESHOLD);
    ensure(s.lo > threshold, || {
        format!(
            "depth 12 lower bound {} <= {}",
            s.lo.to_decimal(10),
            threshold.to_decimal(10)
        )
    })?;
    Ok(format!(
        "depth 12 enclosure [{}, {}], {} terms",
        s.lo.to_decimal(10),
        s.hi.to_decimal(10),
        s.terms
    ))
}

// --- 9 ---------------------------------------------------------------------

/// Markov fractions with denominator at most `bound` in `[lo, hi)`.
fn markov_fractions_in(lo: i64, hi: i64, bound: i64) -> Vec<Rational> {
    let bound = BigInt::from(bound);
    let unit: Vec<Rational> = std::iter::once(Rational::zero())
        .chain(
            enumerate_forest(0, ForestLimit::MaxDenominator(bound)).map(|n| n.triple.x2().clone()),
        )
        .filter(|x| *x < Rational::one())
        .collect();
    (lo..hi)
        .flat_map(|n| unit.iter().map(move |x| x + &Rational::from(n)))
        .collect()
}

fn interval_structure() -> Outcome {
    let wide = markov_fractions_in(-1, 4, 200);
    let overlaps = overlapping_intervals(&wide).map_err(|e| e.to_string())?;
    ensure(overlaps.is_empty(), || {
        format!(
            "overlapping interiors: {:?}",
            &overlaps[..overlaps.len().min(3)]
        )
    })?;
    // a rational of denominator b <= 120 away from x = p/q sits at distance
    // >= 1/(bq) while δ_q < 1/(2.6 q^2), so q <= 200 covers every candidate
    let ivs: Vec<_> = wide.iter().map(|x| interval(x).unwrap()).collect();
    let mut located = 0;
    for b in 1..=120i64 {
        for a in 0..3 * b {
            if !coprime(a, b) {
                continue;
            }
            let y = Rational::new(a, b).unwrap();
            let hits: Vec<&Rational> = ivs
                .iter()
                .filter(|iv| iv.contains(&y))
                .map(|iv| &iv.base)
                .collect();
            ensure(hits.len() == 1, || {
                format!("{y} lies in {} intervals: {hits:?}", hits.len())
            })?;
            let found = locate_interval(&y).map_err(|e| format!("{y}: {e}"))?;
            ensure(&found == hits[0], || {
                format!("{y}: located {found}, scan {}", hits[0])
            })?;
            located += 1;
        }
    }
    Ok(format!(
        "{} intervals disjoint, {located} rationals located once",
        wide.len()
    ))
}

// --- 10 --------------------------------------------------------------------

fn uniqueness() -> Outcome {
    let report = audit_uniqueness(&BigInt::from(10_000_000));
    let dups = report.duplicates();
    ensure(dups.is_empty(), || {
        format!("denominators with two fractions: {dups:?}")
    })?;
    Ok(format!(
        "{} denominators, each once",
        report.by_denominator.len()
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("companion table", companion_table, 1),
        ("forest to depth five", forest_sample, 1),
        ("mu table", mu_table, 1),
        ("approximation constants", constants, 1),
        ("classification sweep", classification_sweep, 60),
        ("triangle paths", triangle_paths, 5),
        ("identity suites", identity_suites, 10),
        ("McShane partial sums", mcshane, 30),
        ("interval structure", interval_structure, 30),
        ("uniqueness audit", uniqueness, 60),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let over = took > Duration::from_secs(*budget);
        let (verdict, detail) = match (&outcome, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over the {budget} s budget")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {:>2} {verdict} {name} ({:.2} s): {detail}",
            i + 1,
            took.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
