//! The eight acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines always reach stdout.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use homoglab::distmonoid::{build_urysohn, divides_urysohn, truncated_monoid, RMetricSpace};
use homoglab::families::bipede::Elem;
use homoglab::families::{build_bipede, build_omegapede, Crosscut, CrosscutSpec, Remark};
use homoglab::indep::Family;
use homoglab::{
    atp, check_premises, discover_equiv_relations, divides_bruteforce, extension_solve,
    generic_extend, remark_fixture, Dividing, FamilyHandle, FinStructure,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<String, String>;

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn fixture(name: &str) -> String {
    fixtures().join(name).display().to_string()
}

/// Runs the binary with `--json` and returns the report and exit code.
fn cli(args: &[&str]) -> (Value, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_homoglab"))
        .arg("--json")
        .args(args)
        .output()
        .expect("binary runs");
    let text = String::from_utf8(out.stdout).expect("utf-8 report");
    let report = serde_json::from_str(&text).unwrap_or(Value::Null);
    (report, out.status.code().unwrap_or(-1))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn monoid_calculus() -> Outcome {
    for (file, values, idem, rank, chain) in [
        (
            "R0134.json",
            &[0.0, 1.0, 3.0, 4.0][..],
            Some(serde_json::json!([0, 1, 4])),
            2,
            serde_json::json!([1, 0]),
        ),
        (
            "R012.json",
            &[0.0, 1.0, 2.0][..],
            None,
            1,
            serde_json::json!([0]),
        ),
    ] {
        let start = Instant::now();
        let (r, code) = cli(&["monoid", "analyze", &fixture(file)]);
        let took = start.elapsed();
        ensure(code == 0, || format!("{file}: exit {code}"))?;
        ensure(r["simple"] == true, || {
            format!("{file}: simple = {}", r["simple"])
        })?;
        if let Some(idem) = idem {
            ensure(r["idempotents"] == idem, || {
                format!("{file}: idempotents = {}", r["idempotents"])
            })?;
        }
        ensure(r["suRank"] == rank, || {
            format!("{file}: suRank = {}", r["suRank"])
        })?;
        ensure(r["chain"] == chain, || {
            format!("{file}: chain = {}", r["chain"])
        })?;
        ensure(took < Duration::from_secs(1), || {
            format!("{file}: {took:?}")
        })?;
        let fresh = serde_json::to_string(&truncated_monoid(values).unwrap().to_file()).unwrap();
        let on_disk = std::fs::read_to_string(fixtures().join(file)).unwrap();
        ensure(fresh == on_disk.trim_end(), || {
            format!("{file}: fixture differs from the regenerated table")
        })?;
    }
    Ok("R0134 and R012 match exactly".into())
}

fn urysohn_agreement() -> Outcome {
    let build = |values: &[f64], k| {
        build_urysohn(&truncated_monoid(values).unwrap(), 1, k, 3, 30)
            .map_err(|e| format!("{values:?}: {e}"))
    };
    let spaces = [
        ("R012 k=2 m=3", build(&[0.0, 1.0, 2.0], 2)?),
        ("R0134 k=1 m=3", build(&[0.0, 1.0, 3.0, 4.0], 1)?),
    ];
    let mut queries = 0;
    for (name, space) in &spaces {
        let n = space.size();
        ensure(n <= 30, || format!("{name}: {n} points"))?;
        for base in bases(n) {
            for a in 0..n {
                for b in 0..n {
                    queries += 1;
                    let closed = divides_urysohn(space, a, b, &base).unwrap();
                    match divides_bruteforce(space, a, b, &base) {
                        Dividing::Inconclusive => {
                            return Err(format!(
                                "{name}: inconclusive at a={a} b={b} base={base:?}"
                            ))
                        }
                        d => ensure((d == Dividing::Divides) == closed, || {
                            format!("{name}: a={a} b={b} base={base:?} closed form {closed}, oracle {d:?}")
                        })?,
                    }
                }
            }
        }
    }
    let sizes: Vec<usize> = spaces.iter().map(|(_, s)| s.size()).collect();
    Ok(format!(
        "{queries} queries on spaces of {sizes:?} points, all agree, none inconclusive"
    ))
}

/// All bases of size at most two.
fn bases(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    out.extend((0..n).map(|x| vec![x]));
    out.extend((0..n).flat_map(|x| (x + 1..n).map(move |y| vec![x, y])));
    out
}

fn counterexamples() -> Outcome {
    let mut notes = Vec::new();
    for which in ["crosscut", "bipede", "omegapede"] {
        let start = Instant::now();
        let (r, code) = cli(&["example", "verify", which]);
        let took = start.elapsed();
        ensure(
            code == 0 && r["verdict"] == "UNSAT" && r["reproduced"] == true,
            || {
                format!(
                    "{which}: exit {code}, verdict {}, claims {}",
                    r["verdict"], r["claims"]
                )
            },
        )?;
        ensure(took < Duration::from_secs(60), || {
            format!("{which}: {took:?}")
        })?;
        let trace: Vec<&str> = r["conflictTrace"]
            .as_array()
            .unwrap()
            .iter()
            .filter_map(Value::as_str)
            .collect();
        match which {
            "bipede" => ensure(
                trace.contains(&"R(e,m) contradicts tp(e,d)=tp(b,d)"),
                || format!("bipede trace {trace:?}"),
            )?,
            "omegapede" => {
                ensure(
                    trace.contains(&"L(e,c)") && trace.contains(&"L(e,d)"),
                    || format!("ω-pede trace {trace:?}"),
                )?;
                let claims = r["claims"].as_array().unwrap();
                let holds = |prefix: &str| {
                    claims
                        .iter()
                        .find(|c| c["claim"].as_str().unwrap().starts_with(prefix))
                        .map(|c| &c["holds"])
                };
                ensure(holds("tp(a/c_E0)") == Some(&Value::Bool(true)), || {
                    "ω-pede: type over c_E0 should agree".into()
                })?;
                ensure(
                    holds("tp(a/acl(c_E0))") == Some(&Value::Bool(false)),
                    || "ω-pede: acl types should differ".into(),
                )?;
            }
            _ => {}
        }
        notes.push(format!("{which} {:.2}s", took.as_secs_f64()));
    }
    Ok(format!("UNSAT reproduced: {}", notes.join(", ")))
}

/// Random premise-satisfying problems; returns (instances, attempts).
fn soundness_sweep<F: Family>(name: &str, model: &F, seed: u64) -> Result<(usize, usize), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rels = model.relations();
    let n = model.size();
    let mut seen = BTreeSet::new();
    let mut attempts = 0;
    while seen.len() < 1000 {
        attempts += 1;
        if attempts > 2_000_000 {
            return Err(format!(
                "{name}: only {} premise-satisfying problems found",
                seen.len()
            ));
        }
        let rel = rels.choose(&mut rng).unwrap().clone();
        let (a, b, c) = (
            rng.gen_range(0..n),
            rng.gen_range(0..n),
            rng.gen_range(0..n),
        );
        let dbar: Vec<usize> = (0..rng.gen_range(1..=2))
            .map(|_| rng.gen_range(0..n))
            .collect();
        let key = (rel.clone(), a, b, c, dbar.clone());
        if seen.contains(&key) || !check_premises(model, a, b, c, &dbar, &rel).unwrap().all() {
            continue;
        }
        if !extension_solve(model, a, c, b, &dbar).is_sat() {
            return Err(format!(
                "{name}: premises hold but UNSAT for a={a} b={b} c={c} d̄={dbar:?} R={rel}"
            ));
        }
        seen.insert(key);
    }
    Ok((seen.len(), attempts))
}

fn soundness() -> Outcome {
    let start = Instant::now();
    let r0134 = build_urysohn(
        &truncated_monoid(&[0.0, 1.0, 3.0, 4.0]).unwrap(),
        17,
        1,
        3,
        30,
    )
    .unwrap();
    let mut notes = vec![];
    let (k, t) = soundness_sweep("urysohn", &r0134, 11)?;
    notes.push(format!("urysohn {k}/{t}"));
    let (k, t) = soundness_sweep("bipede", &build_bipede(4, 1, 3), 12)?;
    notes.push(format!("bipede {k}/{t}"));
    let (k, t) = soundness_sweep("omegapede", &build_omegapede(3, 2, 3, 2, 2), 13)?;
    notes.push(format!("omegapede {k}/{t}"));
    let (k, t) = soundness_sweep(
        "crosscut",
        &Crosscut::build(CrosscutSpec {
            n_p: 3,
            n_q: 3,
            cell: 3,
        }),
        14,
    )?;
    notes.push(format!("crosscut {k}/{t}"));
    let took = start.elapsed();
    ensure(took < Duration::from_secs(600), || format!("{took:?}"))?;
    Ok(format!(
        "all SAT (premise-true/attempts): {}",
        notes.join(", ")
    ))
}

fn matrix(n: usize, f: impl Fn(usize, usize) -> bool) -> Vec<Vec<bool>> {
    (0..n).map(|x| (0..n).map(|y| f(x, y)).collect()).collect()
}

fn discovery() -> Outcome {
    let g = build_bipede(4, 2, 3);
    let m = g.reduct();
    let n = g.n_bodies();
    let found: BTreeSet<Vec<Vec<bool>>> = discover_equiv_relations(&m)
        .unwrap()
        .iter()
        .map(|d| d.matrix(&m).unwrap())
        .collect();
    let want: BTreeSet<_> = [matrix(n, |x, y| g.e_b(x, y)), matrix(n, |x, y| g.e_r(x, y))].into();
    ensure(found == want, || {
        format!(
            "bipede: {} relations found, not exactly E_B and E_R",
            found.len()
        )
    })?;
    ensure(
        matrix(n, |x, y| g.e_b(x, y) && g.e_r(x, y)) == matrix(n, |x, y| x == y),
        || "E_B ∩ E_R is not equality".into(),
    )?;

    let c = Crosscut::build(CrosscutSpec {
        n_p: 3,
        n_q: 3,
        cell: 3,
    });
    let s = c.to_structure();
    let k = s.size();
    let found: BTreeSet<Vec<Vec<bool>>> = discover_equiv_relations(&s)
        .unwrap()
        .iter()
        .map(|d| d.matrix(&s).unwrap())
        .collect();
    let want: BTreeSet<_> = [
        matrix(k, |x, y| c.p(x, y)),
        matrix(k, |x, y| c.q(x, y)),
        matrix(k, |x, y| c.p(x, y) && c.q(x, y)),
    ]
    .into();
    ensure(found == want, || {
        format!(
            "crosscut: {} relations found, not exactly P, Q, P∩Q",
            found.len()
        )
    })?;
    Ok(format!(
        "bipede ({} bodies): E_B, E_R; crosscut 3x3x3: P, Q, P∩Q",
        n
    ))
}

fn bipede_fidelity() -> Outcome {
    let g = build_bipede(4, 1, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for i in 0..500 {
        let pick = |rng: &mut ChaCha8Rng| -> BTreeSet<Elem> {
            (0..rng.gen_range(0..6))
                .map(|_| {
                    if rng.gen_bool(0.4) {
                        Elem::Foot(rng.gen_range(0..g.n_feet()))
                    } else {
                        Elem::Body(rng.gen_range(0..g.n_bodies()))
                    }
                })
                .collect()
        };
        let a = pick(&mut rng);
        let b: BTreeSet<Elem> = a.iter().copied().chain(pick(&mut rng)).collect();
        let (ca, cb) = (g.cl(&a).unwrap(), g.cl(&b).unwrap());
        ensure(a.is_subset(&ca), || format!("subset {i}: not extensive"))?;
        ensure(ca.is_subset(&cb), || format!("subset {i}: not monotone"))?;
        ensure(g.cl(&ca).unwrap() == ca, || {
            format!("subset {i}: not idempotent")
        })?;
    }
    let n = g.n_bodies();
    let mut queries = 0;
    for base in bases(n) {
        for a in 0..n {
            for b in 0..n {
                queries += 1;
                let closed = g.divides(&[a], &[b], &base).unwrap();
                let oracle = divides_bruteforce(&g, a, b, &base);
                ensure(
                    oracle != Dividing::Inconclusive && (oracle == Dividing::Divides) == closed,
                    || {
                        format!(
                            "a={a} b={b} base={base:?}: closed form {closed}, oracle {oracle:?}"
                        )
                    },
                )?;
            }
        }
    }
    Ok(format!(
        "500 subsets closed; {queries} dividing queries on {n} bodies agree"
    ))
}

fn non_homogeneity() -> Outcome {
    for (file, remark, ground, k) in [
        ("remark41.json", Remark::R41, 6, "3"),
        ("remark46.json", Remark::R46, 8, "4"),
    ] {
        let (r, code) = cli(&[
            "homog",
            "check",
            "--structure",
            &fixture(file),
            "-k",
            k,
            "--expect",
            "non-homogeneous",
        ]);
        ensure(code == 0 && r["homogeneous"] == false, || {
            format!("{file}: exit {code}, report {r}")
        })?;
        let s = FinStructure::from_json(&std::fs::read_to_string(fixtures().join(file)).unwrap())
            .unwrap();
        let tuple = |v: &Value| {
            v.as_array()
                .unwrap()
                .iter()
                .map(|x| x.as_u64().unwrap() as usize)
                .collect::<Vec<_>>()
        };
        let (l, rt) = (tuple(&r["witness"]["left"]), tuple(&r["witness"]["right"]));
        ensure(
            atp(&s, &l, &[]).unwrap() == atp(&s, &rt, &[]).unwrap(),
            || format!("{file}: witness types differ"),
        )?;
        let fx = remark_fixture(remark, ground).unwrap();
        ensure(fx.structure.to_json() == s.to_json(), || {
            format!("{file}: fixture differs from the regenerated graph")
        })?;
        let (code, _) = (
            cli(&[
                "example",
                "verify",
                if ground == 6 { "remark41" } else { "remark46" },
            ])
            .1,
            (),
        );
        ensure(code == 0, || {
            format!("{file}: designated witnesses not confirmed")
        })?;
    }
    let (r, code) = cli(&[
        "homog",
        "check",
        "--structure",
        &fixture("crosscut333.json"),
        "-k",
        "3",
        "--expect",
        "homogeneous",
    ]);
    ensure(code == 0 && r["homogeneous"] == true, || {
        format!("crosscut333: exit {code}, report {r}")
    })?;
    Ok("remark 4.1 (k=3) and 4.6 (k=4) flagged; crosscut 3x3x3 homogeneous to k=3".into())
}

fn determinism() -> Outcome {
    let r0134 = truncated_monoid(&[0.0, 1.0, 3.0, 4.0]).unwrap();
    type Build<'a> = (&'static str, Box<dyn Fn() -> String + 'a>);
    let builds: Vec<Build> = vec![
        (
            "urysohn",
            Box::new(|| build_urysohn(&r0134, 20, 1, 3, 64).unwrap().to_json()),
        ),
        (
            "bipede",
            Box::new(|| build_bipede(6, 2, 2).to_structure().to_json()),
        ),
        (
            "omegapede",
            Box::new(|| build_omegapede(3, 2, 3, 2, 2).to_structure().to_json()),
        ),
        (
            "crosscut",
            Box::new(|| {
                Crosscut::build(CrosscutSpec {
                    n_p: 3,
                    n_q: 2,
                    cell: 2,
                })
                .to_structure()
                .to_json()
            }),
        ),
        (
            "remark46",
            Box::new(|| remark_fixture(Remark::R46, 8).unwrap().structure.to_json()),
        ),
        (
            "generic bipede",
            Box::new(|| {
                generic_extend(&FamilyHandle::Bipede, 5, 1, 3)
                    .unwrap()
                    .to_json()
            }),
        ),
        (
            "solve",
            Box::new(|| {
                let space = RMetricSpace::from_json(
                    &build_urysohn(&r0134, 12, 1, 2, 64).unwrap().to_json(),
                )
                .unwrap();
                serde_json::to_string(&extension_solve(&space, 0, 1, 2, &[3, 4])).unwrap()
            }),
        ),
    ];
    for (name, f) in &builds {
        ensure(f() == f(), || format!("{name}: two runs differ"))?;
    }
    for args in [
        &["example", "verify", "bipede"][..],
        &["example", "verify", "omegapede"],
        &[
            "equiv",
            "discover",
            "--structure",
            &fixture("crosscut333.json"),
        ],
    ] {
        ensure(cli(args) == cli(args), || {
            format!("`{}` output differs between runs", args.join(" "))
        })?;
    }
    let dir = std::env::temp_dir();
    let outs = [
        dir.join("homoglab-det-1.json"),
        dir.join("homoglab-det-2.json"),
    ];
    for out in &outs {
        let o = out.display().to_string();
        let (_, code) = cli(&[
            "urysohn",
            "build",
            "--monoid",
            &fixture("R012.json"),
            "-n",
            "20",
            "-k",
            "2",
            "-o",
            &o,
        ]);
        ensure(code == 0, || format!("urysohn build exit {code}"))?;
    }
    let same = std::fs::read(&outs[0]).unwrap() == std::fs::read(&outs[1]).unwrap();
    ensure(same, || "urysohn build files differ".into())?;
    Ok(format!(
        "{} builders and solvers, 4 CLI runs byte-identical",
        builds.len()
    ))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 8] = [
        ("monoid calculus", monoid_calculus),
        ("urysohn independence", urysohn_agreement),
        ("counterexamples", counterexamples),
        ("independence-theorem soundness", soundness),
        ("equivalence-relation discovery", discovery),
        ("bipede closure and dividing", bipede_fidelity),
        ("non-homogeneity fixtures", non_homogeneity),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {} {name} ({secs:.1}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name} ({secs:.1}s): {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
