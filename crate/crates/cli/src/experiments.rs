//! One runner per subcommand; each returns a complete [`Report`].

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use recurlab::analysis::{
    density_scan, eigenbasis, ghk_seminorm, ghk_seminorm_power, uc_average_product, DensityReport, FunctionOnX,
    MeanValue, PointSet,
};
use recurlab::cohomology::{decomposition_expected, mackey_group, verify_limit_formula};
use recurlab::combinatorics::{
    behrend_additive, behrend_multiplicative, max_pattern_free, multiplicative_pattern_count, pattern_free_check,
    popular_difference_report, triple_correlation_scan, Ambient, BitSet, SearchMode,
};
use recurlab::group::Homomorphism;
use recurlab::systems::{
    build_counterexample, build_example31, build_example41, build_nonergodic, verify_pth_identity,
    CounterexampleParams, SubgroupSpec, SystemSpec,
};
use recurlab::z2patterns::{epdd_classify, parse_mat2, Shape};

use crate::ingest::{ingest_set, SetFormat};
use crate::report::{Check, Report, Table};
use crate::{Command, SetArgs};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DensityTable {
    /// The `C_p^d × C_p` model.
    Xp,
    /// The `C_p^d × C_{p²}` system with pattern `(apg, bpg)`.
    P2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Search {
    Sphere,
    Exact,
    Greedy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AmbientKind {
    Interval,
    Cyclic,
    Multiplicative,
}

pub fn run(cmd: &Command) -> Result<Report> {
    match cmd {
        Command::Counterexample {
            p,
            d,
            uncorrected,
            pattern,
            set,
            table,
        } => counterexample(*p, *d, *uncorrected, pattern.a, pattern.b, set, *table),
        Command::LimitFormula {
            system,
            pattern,
            seed,
            modulus,
        } => limit_formula(system, pattern.a, pattern.b, *seed, *modulus),
        Command::Example31 { d, character } => example31(*d, character.as_deref()),
        Command::Example41 { d } => example41(*d),
        Command::DensityScan {
            system,
            set,
            pattern,
            eps,
        } => density(system, set, pattern.a, pattern.b, *eps),
        Command::Behrend {
            n,
            p,
            pattern,
            search,
            check,
            set_format,
            ambient,
            bitset_out,
        } => behrend(BehrendArgs {
            n: *n,
            p: *p,
            a: pattern.a,
            b: pattern.b,
            search: *search,
            check: check.as_deref(),
            set_format: *set_format,
            ambient: *ambient,
            bitset_out: bitset_out.as_deref(),
        }),
        Command::Seminorm { system, k, set, center } => seminorm(system, *k, set, *center),
        Command::Classify { m1, m2 } => classify(m1, m2),
        Command::Scan {
            n,
            set,
            pattern,
            kernel,
            eps,
            random,
            seed,
        } => scan(*n, set, pattern.a, pattern.b, (*kernel).into(), *eps, *random, *seed),
        Command::MultiplicativeCount { n, k, m, set } => multiplicative(*n, *k, *m, set),
    }
}

fn load_system(arg: &str) -> Result<SystemSpec> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).with_context(|| format!("reading system file {arg}"))?
    };
    serde_json::from_str(&text).context("parsing the system description")
}

fn load_set(args: &SetArgs, lo: u64, hi: u64) -> Result<Option<Vec<u64>>> {
    let Some(path) = &args.set else { return Ok(None) };
    let got = ingest_set(path, args.set_format, lo, hi)?;
    if got.duplicates > 0 {
        eprintln!("warning: {} duplicate entries removed from {}", got.duplicates, path.display());
    }
    Ok(Some(got.members))
}

fn require_set(args: &SetArgs, lo: u64, hi: u64) -> Result<Vec<u64>> {
    load_set(args, lo, hi)?.context("--set is required")
}

fn density_table(rep: &DensityReport) -> Table {
    let mut t = Table::new(&["g", "num", "den"]);
    for (g, num, den) in rep.rows() {
        t.push(vec![json!(g), json!(num), json!(den)]);
    }
    t
}

/// Coordinates joined by `;`, matching the density table.
fn label(coords: &[u64]) -> String {
    coords.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(";")
}

fn ratio(r: Rational64) -> String {
    r.to_string()
}

fn counterexample(
    p: u64,
    d: usize,
    uncorrected: bool,
    a: i64,
    b: i64,
    set: &SetArgs,
    which: DensityTable,
) -> Result<Report> {
    let params = CounterexampleParams::new(p, d, !uncorrected)?;
    let ce = build_counterexample(&params)?;
    let pth = verify_pth_identity(&ce);
    let bset = match load_set(set, 0, p)? {
        Some(s) => s,
        None => behrend_multiplicative(p, a, b)?.cyclic.members,
    };
    let target = Rational64::new(bset.len() as i64, (p * p) as i64);

    let xp = build_nonergodic(p, d)?;
    let sys = xp.system();
    let g = sys.group();
    let aset = PointSet::from_predicate(sys.num_points(), |x| bset.contains(&(xp.split(x).1 as u64)));
    let rep = density_scan(sys, &aset, &Homomorphism::scalar(g, a), &Homomorphism::scalar(g, b))?;
    let exceptional: Vec<String> = rep.deviating_from(target).iter().map(|e| label(e.coords())).collect();
    let only_zero = rep.deviating_from(target).iter().all(|e| e.is_zero());

    let sys2 = ce.skew.system();
    let g2 = sys2.group();
    let aset2 = PointSet::new(sys2.num_points(), &ce.lifted_set(&bset))?;
    let pi = p as i64;
    let rep2 = density_scan(
        sys2,
        &aset2,
        &Homomorphism::scalar(g2, a * pi),
        &Homomorphism::scalar(g2, b * pi),
    )?;
    let exceptional2: Vec<String> = rep2.deviating_from(target).iter().map(|e| label(e.coords())).collect();
    let mut values2: Vec<Rational64> = rep2.entries.clone();
    values2.sort();
    values2.dedup();

    let checks = vec![
        Check::new(
            "pth_identity",
            pth.pass,
            match &pth.witness {
                None => format!("T_pg(t,u) = (t, t^pg u) on all {} (g, t, u)", pth.checked),
                Some(w) => format!("fails at g={} t={} u={}: off by η^{}", w.g, w.t, w.u, w.discrepancy),
            },
        ),
        Check::new(
            "xp_density",
            only_zero,
            format!("density {target} for every g outside {{0}}; exceptional set {exceptional:?}"),
        ),
    ];
    let results = json!({
        "constants": {"omega": params.omega, "eta": params.eta, "xi": params.xi, "binom_p2": params.binom_p2()},
        "pth": {"pass": pth.pass, "checked": pth.checked, "discrepancy": pth.witness.as_ref().map(|w| w.discrepancy)},
        "set": {"members": bset, "size": bset.len()},
        "target": ratio(target),
        "xp": {"mu": ratio(rep.mu()), "exceptional": exceptional},
        "p2": {
            "mu": ratio(rep2.mu()),
            "exceptional_count": exceptional2.len(),
            "exceptional": exceptional2,
            "values": values2.into_iter().map(ratio).collect::<Vec<_>>(),
        },
    });
    let table = density_table(if which == DensityTable::Xp { &rep } else { &rep2 });
    Ok(Report::new(
        "counterexample",
        json!({"p": p, "d": d, "corrected": !uncorrected, "a": a, "b": b}),
        checks,
        results,
        table,
    ))
}

fn limit_formula(system: &str, a: i64, b: i64, seed: u64, modulus: u64) -> Result<Report> {
    let spec = load_system(system)?;
    let built = spec.build()?;
    let skew = built.as_skew().context("limit-formula needs a skew product system")?;
    if modulus == 0 {
        bail!("--modulus must be positive");
    }
    let n = skew.system().num_points();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f1 = FunctionOnX::roots(modulus, (0..n).map(|_| rng.gen_range(0..modulus)).collect())?;
    let f2 = FunctionOnX::roots(modulus, (0..n).map(|_| rng.gen_range(0..modulus)).collect())?;
    let chk = verify_limit_formula(skew, &f1, &f2, a, b)?;
    let mg = mackey_group(skew, a, b)?;
    let expected = decomposition_expected(skew.cocycle(), a, b)?;
    let results = json!({
        "deviation": chk.deviation,
        "exact": chk.exact,
        "equal": chk.equal,
        "mackey": {
            "m_a_order": mg.m_a.members.len(),
            "m_b_order": mg.m_b.members.len(),
            "direct_order": mg.direct_order,
            "decomposes": mg.decomposes,
        },
        "torsion_condition": expected,
    });
    let mut table = Table::new(&["quantity", "value"]);
    for (k, v) in [
        ("deviation", json!(chk.deviation)),
        ("exact", json!(chk.exact)),
        ("decomposes", json!(mg.decomposes)),
    ] {
        table.push(vec![json!(k), v]);
    }
    Ok(Report::new(
        "limit-formula",
        json!({"system": spec, "a": a, "b": b, "seed": seed, "modulus": modulus}),
        vec![Check::new(
            "limit_formula",
            chk.equal,
            format!("max |LHS − RHS| = {}", chk.deviation),
        )],
        results,
        table,
    ))
}

fn example31(d: usize, character: Option<&[u64]>) -> Result<Report> {
    let s = build_example31(d)?;
    let sys = s.system();
    let g = sys.group();
    let n = sys.num_points();
    let y = FunctionOnX::roots_from_fn(n, 2, |x| s.split(x).1 as u64);
    let homs = [Homomorphism::scalar(g, 1), Homomorphism::scalar(g, 2)];
    let mut table = Table::new(&["character", "orbit", "sup_norm", "zero"]);
    let mut nonzero = Vec::new();
    let mut worst = 0.0f64;
    let basis = eigenbasis(sys, &SubgroupSpec::Whole)?;
    let mut seen = 0;
    for e in &basis {
        if character.is_some_and(|c| c != e.character.coords()) {
            continue;
        }
        seen += 1;
        let avg = uc_average_product(sys, &[e.function(), y.clone()], &homs)?;
        let zero = avg.is_zero();
        // exact zeros carry float noise after conversion
        let norm = if zero { 0.0 } else { avg.sup_norm() };
        worst = worst.max(norm);
        let label = label(e.character.coords());
        if !zero && !nonzero.contains(&label) {
            nonzero.push(label.clone());
        }
        table.push(vec![json!(label), json!(e.block), json!(norm), json!(zero)]);
    }
    if seen == 0 {
        bail!("no eigenfunction has character {character:?}");
    }
    Ok(Report::new(
        "example31",
        json!({"d": d, "character": character}),
        vec![Check::new(
            "average_zero",
            nonzero.is_empty(),
            format!("{seen} eigenfunctions f₁, nonzero averages for characters {nonzero:?}"),
        )],
        json!({"eigenfunctions": seen, "max_sup_norm": worst, "nonzero": nonzero}),
        table,
    ))
}

fn example41(d: usize) -> Result<Report> {
    let ex = build_example41(d)?;
    let s = &ex.system;
    let sys = s.system();
    let g = sys.group();
    let z = s.base().space();
    let n = sys.num_points();
    let xinf = |x: usize| z.coord_at(s.split(x).0, d);
    let avg = uc_average_product(
        sys,
        &[
            FunctionOnX::roots_from_fn(n, 2, xinf),
            FunctionOnX::roots_from_fn(n, 2, |x| s.split(x).1 as u64),
        ],
        &[Homomorphism::scalar(g, 1), Homomorphism::scalar(g, 2)],
    )?;
    let want = FunctionOnX::roots_from_fn(n, 2, |x| xinf(x) + s.split(x).1 as u64);
    let eq = avg.exact_eq(&want);
    let dev = avg.sub(&want)?.sup_norm();
    let mut table = Table::new(&["quantity", "value"]);
    table.push(vec![json!("num_points"), json!(n)]);
    table.push(vec![json!("sup_deviation"), json!(dev)]);
    Ok(Report::new(
        "example41",
        json!({"d": d}),
        vec![Check::new("product_identity", eq, format!("average = x_∞·y, sup deviation {dev}"))],
        json!({"num_points": n, "equal": eq, "sup_deviation": dev}),
        table,
    ))
}

fn density(system: &str, set: &SetArgs, a: i64, b: i64, eps: f64) -> Result<Report> {
    let spec = load_system(system)?;
    let built = spec.build()?;
    let sys = built.system();
    let n = sys.num_points();
    let members = require_set(set, 0, n as u64)?;
    let idx: Vec<usize> = members.iter().map(|&v| v as usize).collect();
    let aset = PointSet::new(n, &idx)?;
    let g = sys.group();
    let rep = density_scan(sys, &aset, &Homomorphism::scalar(g, a), &Homomorphism::scalar(g, b))?;
    let popular: Vec<String> = rep
        .above_khintchine(eps)
        .into_iter()
        .map(|i| label(g.element_at(i).coords()))
        .collect();
    let results = json!({
        "num_points": n,
        "set_size": rep.set_size,
        "mu": ratio(rep.mu()),
        "min_nonzero": rep.min_nonzero().map(ratio),
        "above_khintchine": {"eps": eps, "count": popular.len(), "g": popular},
    });
    Ok(Report::new(
        "density-scan",
        json!({"system": spec, "a": a, "b": b, "eps": eps}),
        Vec::new(),
        results,
        density_table(&rep),
    ))
}

struct BehrendArgs<'a> {
    n: Option<u64>,
    p: Option<u64>,
    a: i64,
    b: i64,
    search: Search,
    check: Option<&'a std::path::Path>,
    set_format: SetFormat,
    ambient: AmbientKind,
    bitset_out: Option<&'a std::path::Path>,
}

fn value_table(values: &[u64]) -> Table {
    let mut t = Table::new(&["value"]);
    for v in values {
        t.push(vec![json!(v)]);
    }
    t
}

fn behrend(args: BehrendArgs) -> Result<Report> {
    let BehrendArgs { n, p, a, b, .. } = args;
    let (params, checks, results, members, universe) = if let Some(path) = args.check {
        let (ambient, lo, hi) = match (args.ambient, n, p) {
            (AmbientKind::Interval, Some(n), _) => (Ambient::Interval(n), 0, n),
            (AmbientKind::Cyclic, Some(n), _) => (Ambient::Cyclic(n), 0, n),
            (AmbientKind::Multiplicative, _, Some(p)) => (Ambient::Multiplicative(p), 1, p),
            (AmbientKind::Multiplicative, _, None) => bail!("--ambient multiplicative needs --p"),
            _ => bail!("--check needs --n for interval and cyclic ambients"),
        };
        let got = ingest_set(path, args.set_format, lo, hi)?;
        if got.duplicates > 0 {
            eprintln!("warning: {} duplicate entries removed from {}", got.duplicates, path.display());
        }
        let verdict = pattern_free_check(&got.members, ambient, a, b)?;
        let witness = verdict.err();
        (
            json!({"ambient": ambient, "a": a, "b": b}),
            vec![Check::new(
                "pattern_free",
                witness.is_none(),
                match witness {
                    None => format!("no {{n, n+{a}m, n+{b}m}} with m ≠ 0"),
                    Some(w) => format!("pattern at base {} step {}", w.base, w.step),
                },
            )],
            json!({"members": got.members, "size": got.members.len(), "witness": witness}),
            got.members,
            hi,
        )
    } else if let Some(p) = p {
        let m = behrend_multiplicative(p, a, b)?;
        (
            json!({"p": p, "a": a, "b": b}),
            vec![
                Check::new("cyclic_certified", m.cyclic.certified, "pattern-free in ℤ/p"),
                Check::new("units_certified", m.units.certified, "pattern-free in (ℤ/p)^×"),
            ],
            json!({
                "members": m.cyclic.members,
                "size": m.cyclic.len(),
                "interval": m.interval,
                "primitive_root": m.primitive_root,
                "units": m.units.members,
            }),
            m.cyclic.members.clone(),
            p,
        )
    } else {
        let n = n.context("give --n, --p or --check")?;
        let (set, extra) = match args.search {
            Search::Sphere => {
                if (a, b) != (1, 2) {
                    bail!("Behrend spheres avoid the pattern (1,2) only");
                }
                let s = behrend_additive(n)?;
                let extra = json!({"d": s.d, "digits": s.digits, "radius_sq": s.radius_sq, "constant": s.constant});
                (s.set, extra)
            }
            Search::Exact | Search::Greedy => {
                let mode = if args.search == Search::Exact { SearchMode::Exact } else { SearchMode::Greedy };
                let r = max_pattern_free(n, a, b, mode)?;
                let extra = json!({"trace": r.trace});
                (r.set, extra)
            }
        };
        (
            json!({"n": n, "a": a, "b": b, "search": format!("{:?}", args.search).to_lowercase()}),
            vec![Check::new("certified", set.certified, "pattern_free_check on the output")],
            json!({"members": set.members, "size": set.len(), "construction": extra}),
            set.members.clone(),
            n,
        )
    };
    if let Some(path) = args.bitset_out {
        let bits = BitSet::from_members(universe as usize, &members)?;
        std::fs::write(path, bits.to_bytes()).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(Report::new("behrend", params, checks, results, value_table(&members)))
}

fn seminorm(system: &str, k: u32, set: &SetArgs, center: bool) -> Result<Report> {
    if k == 0 {
        bail!("--k must be at least 1");
    }
    let spec = load_system(system)?;
    let built = spec.build()?;
    let sys = built.system();
    let n = sys.num_points();
    let f = match load_set(set, 0, n as u64)? {
        None => FunctionOnX::constant_one(n),
        Some(members) => {
            let mu = Rational64::new(members.len() as i64, n as i64);
            let shift = if center { mu } else { Rational64::from(0) };
            let mut vals = vec![-shift; n];
            for &v in &members {
                vals[v as usize] += 1;
            }
            FunctionOnX::rational(&vals)
        }
    };
    let whole = SubgroupSpec::Whole;
    let mut table = Table::new(&["k", "seminorm", "power_2k"]);
    let mut values = Vec::new();
    for j in 1..=k {
        let u = ghk_seminorm(sys, &f, &whole, j)?;
        let power = match ghk_seminorm_power(sys, &f, &whole, j)? {
            MeanValue::Exact(c) => c.to_string(),
            MeanValue::Float(z) => format!("{z}"),
        };
        table.push(vec![json!(j), json!(u), json!(power)]);
        values.push(json!({"k": j, "seminorm": u, "power_2k": power}));
    }
    let us: Vec<f64> = values.iter().map(|v| v["seminorm"].as_f64().unwrap_or(f64::NAN)).collect();
    let monotone = us.windows(2).all(|w| w[0] <= w[1] + 1e-9);
    Ok(Report::new(
        "seminorm",
        json!({"system": spec, "k": k, "center": center, "set": set.set.is_some()}),
        vec![Check::new("monotone", monotone, "U^1 ≤ U^2 ≤ … within 1e-9")],
        json!({"values": values}),
        table,
    ))
}

fn classify(m1: &str, m2: &str) -> Result<Report> {
    let a = parse_mat2(m1)?;
    let b = parse_mat2(m2)?;
    let c = epdd_classify(&a, &b)?;
    let witness_ok = match (&c.witness, c.shape) {
        (Some(w), Shape::RowLike) => w.verify(&a, &b, true),
        (Some(w), Shape::ColumnLike) => w.verify(&a, &b, false),
        (Some(_), _) => false,
        (None, _) => true,
    };
    let mut table = Table::new(&["field", "value"]);
    for (k, v) in [
        ("signature", json!(format!("{:?}", c.signature))),
        ("commuting", json!(c.commuting)),
        ("shape", serde_json::to_value(c.shape)?),
        ("bounds", json!(c.bounds)),
        ("table_row", json!(c.table_row)),
    ] {
        table.push(vec![json!(k), v]);
    }
    let mut results = serde_json::to_value(&c)?;
    results["proof_trace"] = Value::String(c.proof_trace.join("\n"));
    Ok(Report::new(
        "classify",
        json!({"m1": a, "m2": b}),
        vec![Check::new("witness", witness_ok, "P⁻¹M₁P and P⁻¹M₂P have the normal form")],
        results,
        table,
    ))
}

#[allow(clippy::too_many_arguments)]
fn scan(
    n: usize,
    set: &SetArgs,
    a: i64,
    b: i64,
    kernel: recurlab::combinatorics::Kernel,
    eps: f64,
    random: Option<f64>,
    seed: u64,
) -> Result<Report> {
    if n == 0 {
        bail!("--n must be positive");
    }
    let members = match (load_set(set, 0, n as u64)?, random) {
        (Some(m), _) => m,
        (None, Some(rho)) => {
            if !(0.0..=1.0).contains(&rho) {
                bail!("--random must lie in [0, 1]");
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..n as u64).filter(|_| rng.gen_bool(rho)).collect()
        }
        (None, None) => bail!("give --set or --random"),
    };
    let bits = BitSet::from_members(n, &members)?;
    let r = triple_correlation_scan(&bits, a, b, kernel)?;
    let pop = popular_difference_report(&r, eps);
    let mut table = Table::new(&["d", "count"]);
    for (d, c) in r.rows() {
        table.push(vec![json!(d), json!(c)]);
    }
    let results = json!({
        "n": n,
        "set_size": r.set_size,
        "kernel": r.kernel,
        "popular": {
            "alpha": pop.alpha,
            "epsilon": pop.epsilon,
            "threshold": pop.threshold,
            "zero_qualifies": pop.zero_qualifies,
            "count": pop.popular.len(),
            "d": pop.popular,
        },
    });
    Ok(Report::new(
        "scan",
        json!({"n": n, "a": a, "b": b, "eps": eps, "random": random, "seed": seed}),
        Vec::new(),
        results,
        table,
    ))
}

fn multiplicative(n: u64, k: u32, m: u64, set: &SetArgs) -> Result<Report> {
    let e = require_set(set, 1, n.saturating_add(1))?;
    let count = multiplicative_pattern_count(&e, n, k, m)?;
    let mut table = Table::new(&["n", "k", "m", "count"]);
    table.push(vec![json!(n), json!(k), json!(m), json!(count)]);
    Ok(Report::new(
        "multiplicative-count",
        json!({"n": n, "k": k, "m": m}),
        Vec::new(),
        json!({"count": count, "set_size": e.len()}),
        table,
    ))
}
