use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use homoglab::distmonoid::{
    build_urysohn, check_monoid, divides_urysohn, DistanceMonoid, MonoidFile, MonoidVerdict,
    RMetricSpace,
};
use homoglab::families::{
    build_bipede, build_omegapede, Crosscut, CrosscutSpec, Remark, ScenarioReport, ScenarioVerdict,
};
use homoglab::indep::{reduce_extension_problem, solve_chain, ExtensionProblem, Family};
use homoglab::{
    atp, automorphism_mapping, discover_equiv_relations, divides_bruteforce, is_homogeneous_upto,
    remark_fixture, Dividing, FinStructure, Homogeneity,
};
use serde_json::{json, Map, Value};

use crate::{
    Cli, Command, EquivCmd, ExampleCmd, ExampleName, Expect, ExtendCmd, FamilyName, FragmentArgs,
    HomogCmd, IndepArgs, MonoidCmd, Status, UrysohnCmd,
};

pub fn run(cli: &Cli) -> Result<Status> {
    let (report, status) = match &cli.command {
        Command::Monoid(MonoidCmd::Check { file }) => monoid_check(file)?,
        Command::Monoid(MonoidCmd::Analyze { file }) => monoid_analyze(file)?,
        Command::Urysohn(UrysohnCmd::Build {
            monoid,
            n,
            k,
            m,
            max_size,
            out,
        }) => urysohn_build(monoid, *n, *k, *m, max_size.unwrap_or((4 * n).max(64)), out)?,
        Command::Indep(args) => indep(args)?,
        Command::Extend(ExtendCmd::Solve {
            family,
            problem,
            fragment,
        }) => extend_solve(*family, problem, fragment)?,
        Command::Example(ExampleCmd::Verify {
            which,
            fragment,
            fixture,
        }) => example_verify(*which, fragment, fixture.as_deref())?,
        Command::Equiv(EquivCmd::Discover { structure }) => equiv_discover(structure)?,
        Command::Homog(HomogCmd::Check {
            structure,
            k,
            expect,
        }) => homog_check(structure, *k, *expect)?,
    };
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!("{}", human(&report));
    }
    Ok(status)
}

/// One `key: value` line per field; string lists go one item per line.
fn human(report: &Value) -> String {
    let mut out = String::new();
    let Value::Object(map) = report else {
        return format!("{report}\n");
    };
    for (key, value) in map {
        match value {
            Value::Array(items) if !items.is_empty() && items.iter().all(|v| v.is_string()) => {
                out.push_str(&format!("{key}:\n"));
                for item in items {
                    out.push_str(&format!("  {}\n", item.as_str().unwrap_or_default()));
                }
            }
            Value::String(s) => out.push_str(&format!("{key}: {s}\n")),
            _ => out.push_str(&format!("{key}: {value}\n")),
        }
    }
    out
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_structure(path: &Path) -> Result<FinStructure> {
    FinStructure::from_json(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn read_space(path: &Path) -> Result<RMetricSpace> {
    RMetricSpace::from_json(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn read_monoid(path: &Path) -> Result<MonoidFile> {
    serde_json::from_str(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

/// Numeric labels print as numbers.
fn label(s: &str) -> Value {
    if let Ok(v) = s.parse::<u64>() {
        return json!(v);
    }
    match s.parse::<f64>() {
        Ok(v) => json!(v),
        Err(_) => json!(s),
    }
}

fn labels(m: &DistanceMonoid, idx: &[usize]) -> Value {
    Value::Array(idx.iter().map(|&r| label(m.label(r))).collect())
}

fn monoid_check(file: &Path) -> Result<(Value, Status)> {
    Ok(match check_monoid(&read_monoid(file)?)? {
        MonoidVerdict::Valid(_) => (json!({ "valid": true }), Status::Verified),
        MonoidVerdict::Invalid(v) => (json!({ "valid": false, "violations": v }), Status::Violated),
    })
}

fn monoid_analyze(file: &Path) -> Result<(Value, Status)> {
    let m = match check_monoid(&read_monoid(file)?)? {
        MonoidVerdict::Valid(m) => m,
        MonoidVerdict::Invalid(v) => {
            return Ok((json!({ "valid": false, "violations": v }), Status::Violated))
        }
    };
    let witness = m.simplicity_witness().map(|(r, s)| labels(&m, &[r, s]));
    let report = json!({
        "valid": true,
        "simple": m.is_simple(),
        "simplicityWitness": witness,
        "idempotents": labels(&m, &m.idempotents()),
        "suRank": m.su_rank(),
        "chain": labels(&m, &m.coordinatization_chain()),
    });
    Ok((report, Status::Verified))
}

fn urysohn_build(
    monoid: &Path,
    n: usize,
    k: usize,
    m: usize,
    max_size: usize,
    out: &Path,
) -> Result<(Value, Status)> {
    let monoid = match check_monoid(&read_monoid(monoid)?)? {
        MonoidVerdict::Valid(mo) => mo,
        MonoidVerdict::Invalid(v) => {
            return Ok((json!({ "valid": false, "violations": v }), Status::Violated))
        }
    };
    let space = build_urysohn(&monoid, n, k, m, max_size)?;
    fs::write(out, space.to_json() + "\n").with_context(|| format!("writing {}", out.display()))?;
    Ok((
        json!({ "size": space.size(), "k": k, "m": m, "out": out.display().to_string() }),
        Status::Verified,
    ))
}

fn indep(args: &IndepArgs) -> Result<(Value, Status)> {
    let space = read_space(&args.space)?;
    let closed = divides_urysohn(&space, args.a, args.b, &args.base)?;
    let oracle = divides_bruteforce(&space, args.a, args.b, &args.base);
    let status = match oracle {
        Dividing::Inconclusive => Status::Inconclusive,
        Dividing::Divides if closed => Status::Verified,
        Dividing::Independent if !closed => Status::Verified,
        _ => Status::Violated,
    };
    let report = json!({
        "a": args.a,
        "b": args.b,
        "base": args.base,
        "divides": closed,
        "oracle": oracle,
        "agree": status == Status::Verified,
    });
    Ok((report, status))
}

fn crosscut_spec(f: &FragmentArgs) -> CrosscutSpec {
    match f.cells.as_deref() {
        Some(&[n_p, n_q, cell]) => CrosscutSpec { n_p, n_q, cell },
        _ => CrosscutSpec {
            n_p: 3,
            n_q: 3,
            cell: 3,
        },
    }
}

fn extend_solve(family: FamilyName, problem: &Path, f: &FragmentArgs) -> Result<(Value, Status)> {
    let problem: ExtensionProblem = serde_json::from_str(&read(problem)?)
        .with_context(|| format!("parsing {}", problem.display()))?;
    match family {
        FamilyName::Urysohn => {
            let Some(path) = &f.space else {
                bail!("the Urysohn family needs --space")
            };
            solve_on(&read_space(path)?, &problem)
        }
        FamilyName::Bipede => solve_on(
            &build_bipede(f.n.unwrap_or(6), f.k.unwrap_or(2), f.m.unwrap_or(2)),
            &problem,
        ),
        FamilyName::Omegapede => {
            let n = f.n.unwrap_or(3);
            solve_on(
                &build_omegapede(n, 2, n, f.k.unwrap_or(2), f.m.unwrap_or(2)),
                &problem,
            )
        }
        FamilyName::Crosscut => solve_on(&Crosscut::build(crosscut_spec(f)), &problem),
    }
}

fn solve_on<F: Family>(model: &F, problem: &ExtensionProblem) -> Result<(Value, Status)> {
    for t in &problem.targets {
        if let Some(&x) = t.a.iter().chain(&t.b).find(|&&x| x >= model.size()) {
            bail!(
                "element {x} is outside the fragment of size {}",
                model.size()
            );
        }
    }
    let reduction = reduce_extension_problem(problem)?;
    let mut report = Map::new();
    report.insert("targets".into(), serde_json::to_value(&problem.targets)?);
    report.insert("steps".into(), json!(reduction.steps.len()));
    let status = match solve_chain(model, &reduction)? {
        Ok(outcome) => {
            report.insert("verdict".into(), json!("SAT"));
            report.insert("witness".into(), json!(outcome.solution));
            report.insert(
                "adjoined".into(),
                json!(outcome.model.size() - model.size()),
            );
            report.insert("conflict".into(), json!([]));
            Status::Verified
        }
        Err((step, conflict)) => {
            report.insert("verdict".into(), json!("UNSAT"));
            report.insert("witness".into(), json!([]));
            report.insert("failedStep".into(), json!(step));
            report.insert("conflict".into(), json!(conflict));
            Status::Violated
        }
    };
    Ok((Value::Object(report), status))
}

fn diff_fixture(fresh: &FinStructure, fixture: Option<&Path>) -> Result<Option<bool>> {
    let Some(path) = fixture else { return Ok(None) };
    Ok(Some(read_structure(path)?.to_json() == fresh.to_json()))
}

fn example_verify(
    which: ExampleName,
    f: &FragmentArgs,
    fixture: Option<&Path>,
) -> Result<(Value, Status)> {
    let (name, params, report, structure) = match which {
        ExampleName::Remark41 | ExampleName::Remark46 => return remark_verify(which, f, fixture),
        ExampleName::Crosscut => {
            let spec = crosscut_spec(f);
            let c = Crosscut::build(spec);
            (
                "crosscut",
                json!(spec),
                c.counterexample(),
                c.to_structure(),
            )
        }
        ExampleName::Bipede => {
            let (n, k, m) = (f.n.unwrap_or(6), f.k.unwrap_or(2), f.m.unwrap_or(2));
            let g = build_bipede(n, k, m);
            g.check_axioms()?;
            (
                "bipede",
                json!({ "feet": n, "k": k, "m": m }),
                g.counterexample(),
                g.to_structure(),
            )
        }
        ExampleName::Omegapede => {
            let (n, k, m) = (f.n.unwrap_or(3), f.k.unwrap_or(2), f.m.unwrap_or(2));
            let o = build_omegapede(n, 2, n, k, m);
            o.check_axioms()?;
            (
                "omegapede",
                json!({ "classes": n, "points": n, "k": k, "m": m }),
                o.counterexample(),
                o.to_structure(),
            )
        }
    };
    let fixture_match = diff_fixture(&structure, fixture)?;
    let status = scenario_status(&report, fixture_match);
    let mut out = Map::new();
    out.insert("example".into(), json!(name));
    out.insert("params".into(), params);
    out.insert("size".into(), json!(structure.size()));
    out.insert("reproduced".into(), json!(report.reproduced()));
    if let Some(ok) = fixture_match {
        out.insert("fixtureMatches".into(), json!(ok));
    }
    if let Value::Object(fields) = serde_json::to_value(&report)? {
        out.extend(fields);
    }
    Ok((Value::Object(out), status))
}

fn scenario_status(report: &ScenarioReport, fixture_match: Option<bool>) -> Status {
    if fixture_match == Some(false) {
        return Status::Violated;
    }
    match report.verdict {
        ScenarioVerdict::Inapplicable => Status::Inconclusive,
        _ if report.reproduced() => Status::Verified,
        _ => Status::Violated,
    }
}

fn remark_verify(
    which: ExampleName,
    f: &FragmentArgs,
    fixture: Option<&Path>,
) -> Result<(Value, Status)> {
    let (remark, name, ground, k) = match which {
        ExampleName::Remark41 => (Remark::R41, "remark41", f.n.unwrap_or(6), f.k.unwrap_or(3)),
        _ => (Remark::R46, "remark46", f.n.unwrap_or(8), f.k.unwrap_or(4)),
    };
    let fx = remark_fixture(remark, ground)?;
    let s = &fx.structure;
    let (l, r) = &fx.witnesses;
    let same_atp = atp(s, l, &[])? == atp(s, r, &[])?;
    let linked = automorphism_mapping(s, l, r)?.is_some();
    let verdict = is_homogeneous_upto(s, k)?;
    let pairs =
        |xs: &[usize]| -> Value { json!(xs.iter().map(|&x| fx.labels[x]).collect::<Vec<_>>()) };
    let found = match &verdict {
        Homogeneity::Homogeneous => Value::Null,
        Homogeneity::Witness { left, right } => {
            json!({ "left": pairs(left), "right": pairs(right) })
        }
    };
    let fixture_match = diff_fixture(s, fixture)?;
    let ok = !verdict.is_homogeneous() && same_atp && !linked && fixture_match != Some(false);
    let mut out = Map::new();
    out.insert("example".into(), json!(name));
    out.insert("params".into(), json!({ "groundSize": ground, "k": k }));
    out.insert("size".into(), json!(s.size()));
    out.insert("homogeneous".into(), json!(verdict.is_homogeneous()));
    out.insert("witness".into(), found);
    out.insert(
        "designated".into(),
        json!({ "left": pairs(l), "right": pairs(r) }),
    );
    out.insert("designatedSameAtomicType".into(), json!(same_atp));
    out.insert("designatedLinkedByAutomorphism".into(), json!(linked));
    if let Some(m) = fixture_match {
        out.insert("fixtureMatches".into(), json!(m));
    }
    Ok((
        Value::Object(out),
        if ok {
            Status::Verified
        } else {
            Status::Violated
        },
    ))
}

/// Names of binary relations of `s`, and pairwise conjunctions, whose
/// reflexive closure is the given matrix.
fn defined_by(s: &FinStructure, m: &[Vec<bool>]) -> Vec<String> {
    let n = s.size();
    let binary: Vec<(String, usize)> = s
        .signature()
        .relations()
        .iter()
        .enumerate()
        .filter(|(_, r)| r.arity == 2)
        .map(|(i, r)| (r.name.clone(), i))
        .collect();
    let same = |f: &dyn Fn(usize, usize) -> bool| {
        (0..n).all(|x| (0..n).all(|y| (x == y || f(x, y)) == m[x][y]))
    };
    let mut out = Vec::new();
    for (i, (p, pi)) in binary.iter().enumerate() {
        if same(&|x, y| s.holds2(*pi, x, y)) {
            out.push(p.clone());
        }
        for (q, qi) in &binary[i + 1..] {
            if same(&|x, y| s.holds2(*pi, x, y) && s.holds2(*qi, x, y)) {
                out.push(format!("{p}∧{q}"));
            }
        }
    }
    out
}

fn equiv_discover(path: &Path) -> Result<(Value, Status)> {
    let s = read_structure(path)?;
    let mut rels = Vec::new();
    for d in discover_equiv_relations(&s)? {
        let classes = d.classes(&s)?.unwrap_or_default();
        let mut sizes: Vec<usize> = classes.iter().map(Vec::len).collect();
        sizes.sort_unstable();
        rels.push(json!({
            "name": d.name,
            "definedBy": defined_by(&s, &d.matrix(&s)?),
            "atomicTypes": d.accepted.len(),
            "classes": classes.len(),
            "classSizes": sizes,
        }));
    }
    Ok((
        json!({ "size": s.size(), "relations": rels }),
        Status::Verified,
    ))
}

fn homog_check(path: &Path, k: usize, expect: Option<Expect>) -> Result<(Value, Status)> {
    let s = read_structure(path)?;
    let verdict = is_homogeneous_upto(&s, k)?;
    let holds = verdict.is_homogeneous();
    let status = match expect {
        Some(Expect::Homogeneous) if !holds => Status::Violated,
        Some(Expect::NonHomogeneous) if holds => Status::Violated,
        _ => Status::Verified,
    };
    let witness = match &verdict {
        Homogeneity::Homogeneous => Value::Null,
        Homogeneity::Witness { left, right } => json!({ "left": left, "right": right }),
    };
    Ok((
        json!({ "k": k, "homogeneous": holds, "witness": witness }),
        status,
    ))
}
