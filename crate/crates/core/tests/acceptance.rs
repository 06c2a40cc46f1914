//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run alone with `cargo test --test acceptance`.

mod common;

use std::collections::HashMap;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scg::corpus::{evaluate, Corpus};
use scg::fracture::{analyze, check_double_edge_split, check_split_path_property};
use scg::perm::{diagonal_isomorphic, parse_cycles, PermGroup, Permutation};
use scg::search::{
    enumerate, graph_classes_up_to_duality, m11_rank3_check, Quotient, SearchLimits, SearchSpec,
};
use scg::sggi::{IpStatus, IpWitness, Sggi};
use scg::verify::{verify_corpus, VerifyOptions};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);
type Words = &'static [(&'static str, &'static str, &'static str)];

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed <= limit, || {
        format!("{what} took {elapsed:.1?}, limit {limit:?}")
    })
}

fn corpus() -> &'static Corpus {
    Corpus::embedded()
}

fn sggi(id: &str) -> Result<Sggi, String> {
    let e = corpus().get(id).map_err(|e| e.to_string())?;
    e.sggi().map_err(|err| format!("{id}: {err}"))
}

fn appendix_failures() -> Outcome {
    let ids: Vec<String> = corpus()
        .entries()
        .iter()
        .filter(|e| e.is_appendix())
        .map(|e| e.id.clone())
        .collect();
    ensure(ids.len() == 52, || {
        format!("{} appendix entries", ids.len())
    })?;
    let mut timings = Vec::new();
    for (use_recorded, limit) in [(true, 60), (false, 600)] {
        let opts = VerifyOptions {
            use_recorded,
            jobs: 4,
            ..VerifyOptions::default()
        };
        let start = Instant::now();
        let report = verify_corpus(corpus(), &ids, &opts).map_err(|e| e.to_string())?;
        within(start.elapsed(), Duration::from_secs(limit), "appendix run")?;
        timings.push(start.elapsed());
        for rec in &report.entries {
            ensure(rec.order == Some(19_958_400), || {
                format!("{} order {:?}", rec.id, rec.order)
            })?;
            ensure(rec.ip.status == Some(IpStatus::Fails), || {
                format!("{} ip {:?}", rec.id, rec.ip)
            })?;
            let w = rec
                .ip
                .witness
                .as_ref()
                .ok_or(format!("{} has no witness", rec.id))?;
            let s = sggi(&rec.id)?;
            let element = parse_cycles(&w.element, s.degree()).map_err(|e| e.to_string())?;
            let witness = IpWitness {
                element,
                j: w.j.clone(),
                k: w.k.clone(),
            };
            ensure(witness.verify(&s), || {
                format!("{} witness does not check", rec.id)
            })?;
        }
    }
    Ok(format!(
        "52 entries, recorded {:.2?}, searched {:.2?}",
        timings[0], timings[1]
    ))
}

fn witness_chains() -> Outcome {
    let checks: [(&str, Words); 5] = [
        (
            "A1",
            &[
                ("a", "r1 r2 r3", "(1,2)(3,5,8,10,7,6,4)(9,11)"),
                ("b", "r0 r1 r2", "(1,2,5,3)(4,7,6)(8,9,11,10)"),
                ("b4", "b^4", "(4,7,6)"),
                ("alpha", "a^7 (a^7)^r1", "(9,10,11)"),
            ],
        ),
        (
            "B14",
            &[
                ("t", "(r2 (r1 r0)^2)^3", "(7,8)(9,10)"),
                ("u", "r2 t", "(1,2)(5,6)"),
            ],
        ),
        ("NOPSL_A", &[("rho0", "(r3 r2)^3", "r0")]),
        ("NOPSL_B", &[("rho0", "(r3 r2)^3", "r0")]),
        ("NOPSL_C", &[("rho0", "(r3 r2)^3", "r0")]),
    ];
    let mut count = 0;
    for (id, words) in checks {
        let s = sggi(id)?;
        let mut named: HashMap<String, Permutation> = HashMap::new();
        for &(name, word, expected) in words {
            let got = evaluate(word, s.generators(), s.degree(), &named)
                .map_err(|e| format!("{id} {name}: {e}"))?;
            let want = evaluate(expected, s.generators(), s.degree(), &named)
                .map_err(|e| e.to_string())?;
            ensure(got == want, || {
                format!("{id} {name} = {got}, printed {want}")
            })?;
            named.insert(name.to_string(), got);
            count += 1;
        }
    }
    Ok(format!("{count} words match"))
}

fn eleven_cell() -> Outcome {
    let start = Instant::now();
    let s = sggi("ELEVEN_CELL")?;
    ensure(s.group().order() == 660, || {
        format!("order {}", s.group().order())
    })?;
    ensure(
        s.check_ip_full(1 << 20).map_err(|e| e.to_string())?.holds(),
        || "full check fails".into(),
    )?;
    ensure(
        s.check_ip_recursive(1 << 20)
            .map_err(|e| e.to_string())?
            .holds(),
        || "recursive check fails".into(),
    )?;
    let t = s.schlafli_type().to_string();
    ensure(t == "{3,5,3}", || format!("type {t}"))?;
    let mut reversed = s.generators().to_vec();
    reversed.reverse();
    ensure(
        diagonal_isomorphic(s.generators(), &reversed).map_err(|e| e.to_string())?,
        || "not self-dual".into(),
    )?;
    within(start.elapsed(), Duration::from_secs(5), "11-cell")?;
    Ok(format!(
        "order 660, {t}, self-dual, {:.2?}",
        start.elapsed()
    ))
}

fn psl_polyhedra() -> Outcome {
    let mut types = Vec::new();
    for (id, want) in [
        ("PSL1", "{5,5}"),
        ("PSL2", "{5,6}"),
        ("PSL3", "{5,6}"),
        ("PSL4", "{6,6}"),
    ] {
        let s = sggi(id)?;
        ensure(s.group().order() == 660, || {
            format!("{id} order {}", s.group().order())
        })?;
        ensure(
            s.check_ip_full(1 << 20).map_err(|e| e.to_string())?.holds(),
            || format!("{id} fails IP"),
        )?;
        let t = s.schlafli_type().to_string();
        ensure(t == want, || format!("{id} type {t}, table {want}"))?;
        types.push(t);
    }
    Ok(types.join(" "))
}

fn psl() -> Result<PermGroup, String> {
    corpus().group("psl2_11").map_err(|e| e.to_string())
}

fn limits() -> SearchLimits {
    SearchLimits {
        jobs: 8,
        ..SearchLimits::default()
    }
}

fn enumeration_counts() -> Outcome {
    let spec = |rank| -> Result<SearchSpec, String> {
        Ok(SearchSpec {
            group: psl()?,
            rank,
            require_ip: true,
            quotient: Quotient::IsoAndDuality,
            limits: limits(),
        })
    };
    let run = |rank| enumerate(&spec(rank)?).map_err(|e| e.to_string());
    let r3 = run(3)?;
    let start = Instant::now();
    let r4 = run(4)?;
    within(start.elapsed(), Duration::from_secs(300), "rank 4 search")?;
    let r4_time = start.elapsed();
    let r5 = run(5)?;
    let all: Vec<Vec<Permutation>> = r3.tuples.iter().chain(&r4.tuples).cloned().collect();
    let graphs = graph_classes_up_to_duality(&all);
    ensure(r3.classes.len() == 3, || {
        format!("rank 3: {} classes", r3.classes.len())
    })?;
    ensure(graphs == 5, || format!("{graphs} graphs up to duality"))?;
    ensure(r4.classes.len() == 1, || {
        format!("rank 4: {} classes", r4.classes.len())
    })?;
    ensure(r5.tuples.is_empty(), || {
        format!("rank 5: {} tuples", r5.tuples.len())
    })?;
    Ok(format!("3 / 5 graphs / 1 / 0, rank 4 in {r4_time:.2?}"))
}

fn m11() -> Outcome {
    let start = Instant::now();
    let g = corpus().group("m11").map_err(|e| e.to_string())?;
    ensure(g.order() == 7920, || format!("order {}", g.order()))?;
    let count = m11_rank3_check(&g, &limits()).map_err(|e| e.to_string())?;
    ensure(count == 0, || format!("{count} triples"))?;
    within(start.elapsed(), Duration::from_secs(900), "M11 search")?;
    Ok(format!("0 triples, {:.2?}", start.elapsed()))
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for case in 0..200 {
        let s = common::random_sggi(&mut rng, 8);
        common::oracle_agrees(&s, &mut rng)
            .map_err(|e| format!("case {case} {:?}: {e}", s.generators()))?;
    }
    Ok("200 random groups of degree at most 8".into())
}

fn lemma_suites() -> Outcome {
    let mut splits = 0;
    for e in corpus().entries() {
        let s = e.sggi().map_err(|err| err.to_string())?;
        let g = s.graph();
        ensure(g.fixed_point_edges_adjacent(), || {
            format!("{}: fixed-point edge lemma", e.id)
        })?;
        ensure(g.components_are_squares(), || {
            format!("{}: commuting-square lemma", e.id)
        })?;
        ensure(check_double_edge_split(&s, &g), || {
            format!("{}: double-edge split lemma", e.id)
        })?;
        for &split in &analyze(&s).splits {
            ensure(check_split_path_property(&g, split), || {
                format!("{}: split path property", e.id)
            })?;
            splits += 1;
        }
    }
    Ok(format!(
        "{} entries, {splits} splits",
        corpus().entries().len()
    ))
}

fn sesqui_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e5e);
    for case in 0..50 {
        let s = common::random_c_group(&mut rng);
        let k = rng.gen_range(0..s.rank());
        common::sesqui_facts(&s, k)
            .map_err(|e| format!("case {case} {:?} at {k}: {e}", s.generators()))?;
    }
    Ok("50 random string C-groups".into())
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_scg"))
            .args(["--format", "json", "verify-corpus"])
            .env_remove("SCG_CORPUS_DIR")
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    ensure(a.status.success(), || format!("exit {:?}", a.status.code()))?;
    ensure(a.stdout == b.stdout, || "outputs differ".into())?;
    Ok(format!("{} identical bytes", a.stdout.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("1 appendix failures", appendix_failures),
        ("2 witness chains", witness_chains),
        ("3 eleven-cell", eleven_cell),
        ("4 PSL(2,11) polyhedra", psl_polyhedra),
        ("5 enumeration counts", enumeration_counts),
        ("6 M11 triples", m11),
        ("7a oracle equivalence", oracle_equivalence),
        ("7b lemma suites", lemma_suites),
        ("7c sesqui-extensions", sesqui_suite),
        ("8 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
